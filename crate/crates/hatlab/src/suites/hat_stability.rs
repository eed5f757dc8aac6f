//! Hat stability: seeded perturbations within the proof's neighborhood
//! radius `φ = Δ(1−cos Δπ)/3` must all admit witness hats with parameters
//! `(ε+Δ, δ−Δ)`, axis deviation below `Δ` and tip displacement within the
//! pre-adjustment bound `φ + Δ(ε+Δ)π`.

use hatlab_core::hat::{stability_phi, stability_witness, SearchOpts};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CaseResult, Scale, SuiteReport};
use crate::fixtures::{self, Perturbation};
use crate::pool;

pub const TRIALS_2D: usize = 200;
pub const TRIALS_3D: usize = 100;
pub const DELTAS: [f64; 2] = [0.05, 0.1];

struct TrialOutcome {
    id: usize,
    dim: usize,
    delta: f64,
    phi: f64,
    row: Option<(f64, f64, f64, f64)>, // (eps', delta', axis angle, displacement)
    error: Option<String>,
    within_delta: bool,
}

pub fn run(seed: u64, scale: Scale) -> SuiteReport {
    let mut report = SuiteReport::new("hat-stability");
    report.csv_header = vec![
        "trial".into(),
        "dim".into(),
        "phi".into(),
        "delta".into(),
        "eps_witness".into(),
        "delta_witness".into(),
        "axis_angle".into(),
        "tip_displacement".into(),
        "verified".into(),
        "within_delta".into(),
    ];

    let n2 = scale.trials(TRIALS_2D);
    let n3 = scale.trials(TRIALS_3D);
    let plan: Vec<(usize, usize)> = (0..n2)
        .map(|i| (2usize, i))
        .chain((0..n3).map(|i| (3usize, i)))
        .collect();

    let outcomes = pool::run_indexed(plan.len(), |idx| {
        let (dim, i) = plan[idx];
        let delta = DELTAS[i % DELTAS.len()];
        let phi = stability_phi(delta);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((dim as u64) << 32) ^ i as u64);
        let (body, cap) = fixtures::tangent_ball_with_cap(dim, 1.0, 0.3);
        let family = match (dim, i % 4) {
            (2, 0) => Perturbation::JitteredPolygon,
            (2, 1) | (3, 0) => Perturbation::SpikedHull,
            (2, 2) | (3, 1) => Perturbation::MovedBall,
            _ => Perturbation::Rounded,
        };
        let perturbed = match fixtures::perturb_ball(&body, &family, 0.8 * phi, &mut rng) {
            Ok(p) => p,
            Err(e) => {
                return TrialOutcome {
                    id: idx,
                    dim,
                    delta,
                    phi,
                    row: None,
                    error: Some(format!("fixture: {e}")),
                    within_delta: false,
                }
            }
        };
        let (kp, bound) = perturbed;
        debug_assert!(bound < phi, "fixture bound {bound} vs φ {phi}");
        match stability_witness(&body, &cap, delta, &kp, Some(bound), &SearchOpts::default()) {
            Ok(w) => TrialOutcome {
                id: idx,
                dim,
                delta,
                phi,
                row: Some((w.cap.eps(), w.cap.delta(), w.axis_angle, w.tip_displacement)),
                error: None,
                within_delta: w.within_delta,
            },
            Err(e) => TrialOutcome {
                id: idx,
                dim,
                delta,
                phi,
                row: None,
                error: Some(format!("{e}")),
                within_delta: false,
            },
        }
    });

    let mut failures = 0usize;
    let mut strict_count = 0usize;
    for t in &outcomes {
        let verified = t.row.is_some();
        if let Some((e2, d2, ang, disp)) = t.row {
            report.csv_rows.push(vec![
                t.id.to_string(),
                t.dim.to_string(),
                format!("{:.9}", t.phi),
                format!("{}", t.delta),
                format!("{e2}"),
                format!("{d2}"),
                format!("{ang:.3e}"),
                format!("{disp:.3e}"),
                "true".into(),
                t.within_delta.to_string(),
            ]);
            if t.within_delta {
                strict_count += 1;
            }
        } else {
            failures += 1;
            report.push(CaseResult::new(
                format!("trial-{}-d{}", t.id, t.dim),
                false,
                t.error.clone().unwrap_or_default(),
            ));
            report.csv_rows.push(vec![
                t.id.to_string(),
                t.dim.to_string(),
                format!("{:.9}", t.phi),
                format!("{}", t.delta),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                verified.to_string(),
                "false".into(),
            ]);
        }
    }
    let total = outcomes.len();
    report.push(CaseResult::new(
        "witness-success-rate",
        failures == 0,
        format!("{}/{} witnesses found and verified", total - failures, total),
    ));
    // The strict ‖x−x'‖ < Δ form of the theorem statement is recorded, not
    // asserted (the proof pins only the pre-adjustment bound).
    report.push(CaseResult::new(
        "strict-displacement-recorded",
        true,
        format!("{strict_count}/{total} trials also satisfied ‖x−x'‖ < Δ"),
    ));
    report
}
