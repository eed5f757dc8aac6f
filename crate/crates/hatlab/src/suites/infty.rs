//! Infinite-curvature mechanism on the p = 1.5 revolution fixture: deep hat
//! families at the pole, the witness direction, and an independent
//! curvature blow-up check at analytic scales.

use hatlab_core::curvature::{point_curvature, Ladder};
use hatlab_core::geom;
use hatlab_core::hat::SearchOpts;
use hatlab_core::order::{
    infinite_curvature_witness, maximal_indicator, AngleSequence, OrderVerdict,
};
use hatlab_core::{ConvexBody, Direction};

use super::{CaseResult, Scale, SuiteReport};

pub const HORIZON: usize = 8;
pub const KAPPA_WITNESS_BOUND: f64 = 8.0;
pub const KAPPA_POLE_BOUND: f64 = 1e3;

pub fn run(scale: Scale) -> SuiteReport {
    let mut report = SuiteReport::new("infty");
    report.csv_header = vec!["dim".into(), "index_set".into(), "kappa_pole".into()];
    let dims: &[usize] = if scale == Scale::Quick { &[2] } else { &[2, 3] };
    for &dim in dims {
        let body = ConvexBody::revolution(1.5, 1.0, dim).expect("revolution fixture");
        let seq = AngleSequence::harmonic2();
        let search = SearchOpts::default();
        let result = match maximal_indicator(&body, &seq, HORIZON, &search) {
            Ok(r) => r,
            Err(e) => {
                report.push(CaseResult::new(format!("order-d{dim}"), false, format!("{e}")));
                continue;
            }
        };
        let full: Vec<usize> = (1..=HORIZON).collect();
        let at_horizon = result.index_set.elements() == full.as_slice()
            && matches!(result.verdict, OrderVerdict::AtLeastAtHorizon(_));
        report.push(CaseResult::new(
            format!("order-at-horizon-d{dim}"),
            at_horizon,
            format!("index set {:?}, verdict {:?}", result.index_set.elements(), result.verdict),
        ));
        let witness = match infinite_curvature_witness(&body, &result, HORIZON, &seq, &search) {
            Ok(w) => w,
            Err(e) => {
                report.push(CaseResult::new(format!("witness-d{dim}"), false, format!("{e}")));
                continue;
            }
        };
        let pole_hit = geom::norm(&witness.point) < 1e-2;
        report.push(CaseResult::new(
            format!("witness-pole-d{dim}"),
            pole_hit && witness.kappa_lower >= KAPPA_WITNESS_BOUND,
            format!(
                "x* = {:?} (‖x*‖ = {:.2e}), κ_i bound {}",
                witness.point,
                geom::norm(&witness.point),
                witness.kappa_lower
            ),
        ));
        // Independent estimate at the exact pole over analytic scales.
        let nu = Direction::axis(dim, dim - 1).expect("pole normal");
        let ladder = Ladder::with_floor(&body, 1e-8);
        match point_curvature(&body, &vec![0.0; dim], &nu, 8, &ladder) {
            Ok(est) => {
                report.csv_rows.push(vec![
                    dim.to_string(),
                    format!("{:?}", result.index_set.elements()),
                    format!("{:.3e}", est.kappa_i),
                ]);
                report.push(CaseResult::new(
                    format!("pole-curvature-d{dim}"),
                    est.kappa_i >= KAPPA_POLE_BOUND,
                    format!("κ_i at the pole ≈ {:.3e} (ladder floor 1e-8)", est.kappa_i),
                ));
            }
            Err(e) => {
                report.push(CaseResult::new(
                    format!("pole-curvature-d{dim}"),
                    false,
                    format!("{e}"),
                ));
            }
        }
    }
    report
}
