//! Classical curvature estimators and the hat-curvature inequality.

use hatlab_core::curvature::{
    directional_curvature, hat_bound_check, point_curvature, ExistenceVerdict, Ladder,
};
use hatlab_core::hat::{find_hat, CapSpec, SearchOpts};
use hatlab_core::{ConvexBody, Direction};

use super::{CaseResult, Scale, SuiteReport};
use crate::fixtures;

pub fn run(scale: Scale) -> SuiteReport {
    let mut report = SuiteReport::new("hat-bound");
    report.csv_header = vec!["fixture".into(), "kappa_i".into(), "kappa_s".into()];

    // Circle of radius 2: κ = 0.5 ± 1e−3.
    {
        let k = ConvexBody::ball(vec![0.0, 2.0], 2.0).unwrap();
        let nu = Direction::new(vec![0.0, 1.0]).unwrap();
        let tau = Direction::new(vec![1.0, 0.0]).unwrap();
        let l = Ladder::for_body(&k);
        match directional_curvature(&k, &[0.0, 0.0], &nu, &tau, &l) {
            Ok(d) => {
                report.csv_rows.push(vec![
                    "circle-r2".into(),
                    format!("{:.9}", d.kappa_lower),
                    format!("{:.9}", d.kappa_upper),
                ]);
                report.push(CaseResult::new(
                    "circle-r2",
                    (d.kappa_lower - 0.5).abs() <= 1e-3 && (d.kappa_upper - 0.5).abs() <= 1e-3,
                    format!("κ ∈ [{:.6}, {:.6}]", d.kappa_lower, d.kappa_upper),
                ));
            }
            Err(e) => report.push(CaseResult::new("circle-r2", false, format!("{e}"))),
        }
    }

    // Ellipse (2,1) at the major vertex: κ = 2 ± 1e−2.
    {
        let k = ConvexBody::ellipsoid(vec![0.0, 0.0], vec![2.0, 1.0]).unwrap();
        let nu = Direction::new(vec![-1.0, 0.0]).unwrap();
        let tau = Direction::new(vec![0.0, 1.0]).unwrap();
        let l = Ladder::for_body(&k);
        match directional_curvature(&k, &[2.0, 0.0], &nu, &tau, &l) {
            Ok(d) => {
                report.csv_rows.push(vec![
                    "ellipse-major".into(),
                    format!("{:.9}", d.kappa_lower),
                    format!("{:.9}", d.kappa_upper),
                ]);
                report.push(CaseResult::new(
                    "ellipse-major-vertex",
                    (d.kappa_lower - 2.0).abs() <= 1e-2 && (d.kappa_upper - 2.0).abs() <= 1e-2,
                    format!("κ ∈ [{:.6}, {:.6}]", d.kappa_lower, d.kappa_upper),
                ));
            }
            Err(e) => report.push(CaseResult::new("ellipse-major-vertex", false, format!("{e}"))),
        }
    }

    // Stadium flat side: κ = 0 exactly.
    {
        let rect = ConvexBody::polytope(vec![
            vec![-1.0, -0.5],
            vec![1.0, -0.5],
            vec![1.0, 0.5],
            vec![-1.0, 0.5],
        ])
        .unwrap();
        let stadium = rect.minkowski_ball(0.5).unwrap();
        let nu = Direction::new(vec![0.0, -1.0]).unwrap();
        let tau = Direction::new(vec![1.0, 0.0]).unwrap();
        let l = Ladder::for_body(&stadium);
        match directional_curvature(&stadium, &[0.0, 1.0], &nu, &tau, &l) {
            Ok(d) => {
                report.csv_rows.push(vec![
                    "stadium-flat".into(),
                    format!("{:.9}", d.kappa_lower),
                    format!("{:.9}", d.kappa_upper),
                ]);
                report.push(CaseResult::new(
                    "stadium-flat-side",
                    d.kappa_lower == 0.0 && d.kappa_upper == 0.0,
                    format!("κ ∈ [{}, {}]", d.kappa_lower, d.kappa_upper),
                ));
            }
            Err(e) => report.push(CaseResult::new("stadium-flat-side", false, format!("{e}"))),
        }
    }

    // Unit sphere: existence verdict with κ = 1.
    {
        let k = ConvexBody::ball(vec![0.0, 0.0, 0.0], 1.0).unwrap();
        let nu = Direction::new(vec![0.0, 0.0, -1.0]).unwrap();
        let l = Ladder::for_body(&k);
        match point_curvature(&k, &[0.0, 0.0, 1.0], &nu, 8, &l) {
            Ok(est) => {
                report.csv_rows.push(vec![
                    "sphere".into(),
                    format!("{:.9}", est.kappa_i),
                    format!("{:.9}", est.kappa_s),
                ]);
                let pass = matches!(est.verdict, ExistenceVerdict::Exists { kappa } if (kappa - 1.0).abs() <= 1e-3);
                report.push(CaseResult::new(
                    "sphere-existence",
                    pass,
                    format!("verdict {:?}", est.verdict),
                ));
            }
            Err(e) => report.push(CaseResult::new("sphere-existence", false, format!("{e}"))),
        }
    }

    // Hat ⇒ curvature on balls and ellipsoids with verified hats.
    let tolerance = 1e-3;
    let mut checks: Vec<(String, ConvexBody, CapSpec)> = Vec::new();
    let (ball, cap) = fixtures::tangent_ball_with_cap(2, 1.0, 0.25);
    checks.push(("ball-eps1".into(), ball.clone(), cap));
    let (_, cap2) = fixtures::tangent_ball_with_cap(2, 2.0, 0.25);
    checks.push(("ball-eps2".into(), ball, cap2));
    {
        // Ellipse hat found by search at the major vertex.
        let k = ConvexBody::ellipsoid(vec![0.0, 0.0], vec![2.0, 1.0]).unwrap();
        if let Ok(Some((tip, axis))) = find_hat(&k, 1.0, 1.0 / 3.0, &SearchOpts::default()) {
            let cap = CapSpec::new(tip, axis, 1.0, 1.0 / 3.0).unwrap();
            checks.push(("ellipse-eps1".into(), k, cap));
        } else {
            report.push(CaseResult::new(
                "ellipse-hat-search",
                false,
                "no radius-1 hat found on the (2,1) ellipse",
            ));
        }
    }
    if scale == Scale::Full {
        let (ball3, cap3) = fixtures::tangent_ball_with_cap(3, 1.0, 0.25);
        checks.push(("sphere-eps1".into(), ball3, cap3));
    }
    for (name, body, cap) in checks {
        let l = Ladder::for_body(&body);
        match hat_bound_check(&body, &cap, &l, tolerance) {
            Ok(rep) => {
                report.push(CaseResult::new(
                    format!("hat-bound-{name}"),
                    rep.pass,
                    format!("κ_i {:.6} vs threshold {:.6}", rep.kappa_i_estimate, rep.threshold),
                ));
            }
            Err(e) => report.push(CaseResult::new(format!("hat-bound-{name}"), false, format!("{e}"))),
        }
    }
    report
}
