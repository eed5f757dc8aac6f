//! Ball indicator oracle: the computed indicator against the closed form
//! `max(0, (R−ε)(sec(δπ)−1))`, itself first confirmed by brute-force
//! per-point bisection on a few grid points.

use hatlab_core::geom;
use hatlab_core::hat::{excess, CapSpec};
use hatlab_core::indicator::{ball_indicator_closed_form, curvature_indicator, IndicatorOpts};
use hatlab_core::{ConvexBody, Direction};

use super::{CaseResult, Scale, SuiteReport};
use crate::pool;

pub const RADII: [f64; 3] = [0.5, 1.0, 2.0];
pub const EPSILONS: [f64; 4] = [0.25, 0.5, 1.0, 2.0];
pub const DELTAS: [f64; 3] = [0.1, 0.25, 0.4];
pub const TOLERANCE: f64 = 1e-6;

/// Brute-force oracle: least α with `excess(y + ατ) ≤ ε` per boundary point,
/// maximized over a dense boundary net. Independent of the indicator path.
pub fn brute_ball_indicator(radius: f64, eps: f64, delta: f64) -> f64 {
    let tau = Direction::new(vec![0.0, 1.0]).unwrap();
    let body = ConvexBody::ball(vec![0.0, 0.0], radius).unwrap();
    let x_tau = body.touching_point(&tau).unwrap();
    let cap = CapSpec::new(x_tau, tau.neg(), eps, delta).unwrap();
    let m = 6000;
    let mut worst = 0.0_f64;
    for i in 0..m {
        let t = std::f64::consts::TAU * (i as f64) / (m as f64);
        let y = [radius * t.cos(), radius * t.sin()];
        let feasible = |alpha: f64| {
            excess(&cap, &geom::axpy(&y, alpha, tau.as_slice())) <= eps
        };
        if feasible(0.0) {
            continue;
        }
        let mut lo = 0.0;
        let mut hi = 4.0 * (radius + eps);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if feasible(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        worst = worst.max(0.5 * (lo + hi));
    }
    worst
}

pub fn run(scale: Scale) -> SuiteReport {
    let mut report = SuiteReport::new("ball-oracle");
    report.csv_header =
        vec!["radius".into(), "eps".into(), "delta".into(), "dim".into(), "alpha0".into(), "closed_form".into(), "abs_err".into()];

    // Confirm the closed form by brute-force bisection on three grid points.
    for &(r, e, d) in &[(1.0, 0.5, 1.0 / 3.0), (0.5, 1.0, 0.25), (2.0, 0.25, 0.4)] {
        let brute = brute_ball_indicator(r, e, d);
        let closed = ball_indicator_closed_form(r, e, d);
        let err = (brute - closed).abs();
        report.push(CaseResult::new(
            format!("closed-form-brute-R{r}-e{e}-d{d:.4}"),
            err <= 1e-5,
            format!("brute {brute:.9} closed {closed:.9}"),
        ));
    }

    let mut grid: Vec<(f64, f64, f64, usize)> = Vec::new();
    for &r in &RADII {
        for &e in &EPSILONS {
            for &d in &DELTAS {
                for dim in [2usize, 3] {
                    grid.push((r, e, d, dim));
                }
            }
        }
    }
    if scale == Scale::Quick {
        grid.truncate(12);
    }
    let opts = IndicatorOpts { alpha_tol: 1e-8, kernel_cells: 2_000_000 };
    let results = pool::run_indexed(grid.len(), |i| {
        let (r, e, d, dim) = grid[i];
        let body = ConvexBody::ball(vec![0.0; dim], r).unwrap();
        let tau = Direction::axis(dim, dim - 1).unwrap();
        let value = curvature_indicator(&body, &tau, e, d, &opts)
            .map(|v| v.alpha0)
            .unwrap_or(f64::NAN);
        (r, e, d, dim, value)
    });
    let mut worst = 0.0_f64;
    for (r, e, d, dim, alpha0) in results {
        let closed = ball_indicator_closed_form(r, e, d);
        let err = (alpha0 - closed).abs();
        worst = worst.max(err);
        report.csv_rows.push(vec![
            format!("{r}"),
            format!("{e}"),
            format!("{d}"),
            format!("{dim}"),
            format!("{alpha0:.12}"),
            format!("{closed:.12}"),
            format!("{err:.3e}"),
        ]);
        if err > TOLERANCE || !err.is_finite() {
            report.push(CaseResult::new(
                format!("grid-R{r}-e{e}-d{d:.2}-dim{dim}"),
                false,
                format!("α₀ {alpha0:.9} vs closed {closed:.9}"),
            ));
        }
    }
    report.push(CaseResult::new(
        "grid-max-error",
        worst <= TOLERANCE,
        format!("max |α₀ − closed| = {worst:.3e} over the grid"),
    ));
    report
}
