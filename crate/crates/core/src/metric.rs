//! Pompeiu-Hausdorff distance between convex bodies.
//!
//! For convex bodies the metric equals `sup_u |h_K(u) − h_L(u)|` over unit
//! directions, so both one-sided suprema are bracketed by the certified
//! sphere kernel and combined. The returned value is the best evaluated
//! difference (a lower bound); the certified absolute error is the bracket
//! gap, at most `tol` on convergence.

use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::spheremax::{sphere_max_diff, Region, SphereMaxOpts};

use alloc::vec::Vec;

#[derive(Debug, Clone)]
pub struct HausdorffOpts {
    /// Requested certified absolute error.
    pub tol: f64,
    /// Kernel budget per one-sided supremum.
    pub max_cells: usize,
}

impl Default for HausdorffOpts {
    fn default() -> Self {
        HausdorffOpts { tol: 1e-6, max_cells: 4_000_000 }
    }
}

#[derive(Debug, Clone)]
pub struct HausdorffResult {
    pub value: f64,
    /// Certified bound on `sup − value` (≥ 0).
    pub error_bound: f64,
    /// Direction achieving the reported value.
    pub arg_dir: Vec<f64>,
}

/// Certified Pompeiu-Hausdorff distance. Errors with the best bracket when
/// the kernels exhaust their budget before certifying `tol`.
pub fn hausdorff_distance(
    a: &ConvexBody,
    b: &ConvexBody,
    opts: &HausdorffOpts,
) -> Result<HausdorffResult> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    let kopts = SphereMaxOpts { tol: opts.tol, max_cells: opts.max_cells };
    let ab = sphere_max_diff(a, b, &Region::FullSphere, &kopts)?;
    let ba = sphere_max_diff(b, a, &Region::FullSphere, &kopts)?;
    let lb = ab.lb.max(ba.lb).max(0.0);
    let ub = ab.ub.max(ba.ub).max(0.0);
    if !(ab.converged && ba.converged) {
        return Err(Error::NumericFailure {
            what: "hausdorff distance".into(),
            bracket: Some((lb, ub)),
        });
    }
    let arg_dir = if ab.lb >= ba.lb { ab.arg_dir } else { ba.arg_dir };
    Ok(HausdorffResult { value: lb, error_bound: (ub - lb).max(0.0), arg_dir })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom;
    use crate::sampling;
    use alloc::vec;

    fn dist(a: &ConvexBody, b: &ConvexBody, tol: f64) -> HausdorffResult {
        hausdorff_distance(a, b, &HausdorffOpts { tol, max_cells: 6_000_000 }).unwrap()
    }

    #[test]
    fn concentric_balls() {
        let a = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
        let b = ConvexBody::ball(vec![0.0, 0.0], 3.0).unwrap();
        let r = dist(&a, &b, 1e-9);
        assert!((r.value - 2.0).abs() < 1e-12);
        assert!(r.error_bound <= 1e-9 * 1.001);
    }

    #[test]
    fn translated_body_distance_is_shift_norm() {
        let a = ConvexBody::polytope(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let v = [0.3, -0.4];
        let b = ConvexBody::polytope(vec![
            vec![0.0 + v[0], 0.0 + v[1]],
            vec![1.0 + v[0], 0.0 + v[1]],
            vec![0.0 + v[0], 1.0 + v[1]],
        ])
        .unwrap();
        let r = dist(&a, &b, 1e-9);
        assert!((r.value - 0.5).abs() < 1e-9, "value {}", r.value);
    }

    #[test]
    fn triangle_vs_ball_matches_brute_force() {
        let tri =
            ConvexBody::polytope(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let ball = ConvexBody::ball(vec![1.0 / 3.0, 1.0 / 3.0], 0.2).unwrap();
        let r = dist(&tri, &ball, 1e-9);
        let mut brute = 0.0_f64;
        for u in sampling::circle_net(1_000_000) {
            brute = brute.max((tri.support_raw(&u) - ball.support_raw(&u)).abs());
        }
        assert!((r.value - brute).abs() < 1e-6, "certified {} brute {brute}", r.value);
    }

    #[test]
    fn minkowski_rounding_distance_equals_phi() {
        let square = ConvexBody::polytope(vec![
            vec![-1.0, -1.0],
            vec![1.0, -1.0],
            vec![1.0, 1.0],
            vec![-1.0, 1.0],
        ])
        .unwrap();
        for phi in [0.01, 0.1, 1.0] {
            let r = dist(&square.minkowski_ball(phi).unwrap(), &square, 1e-9);
            assert!((r.value - phi).abs() < 1e-12);
        }
        let same = dist(&square.minkowski_ball(0.0).unwrap(), &square, 1e-9);
        assert!(same.value.abs() < 1e-12);
    }

    #[test]
    fn metric_axioms_on_small_corpus() {
        let corpus = [
            ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap(),
            ConvexBody::ellipsoid(vec![0.0, 0.0], vec![2.0, 1.0]).unwrap(),
            ConvexBody::polytope(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap(),
        ];
        let tol = 1e-7;
        let mut d = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                d[i][j] = dist(&corpus[i], &corpus[j], tol).value;
            }
        }
        for i in 0..3 {
            assert!(d[i][i].abs() <= tol);
            for j in 0..3 {
                assert!((d[i][j] - d[j][i]).abs() <= tol);
                if i != j {
                    assert!(d[i][j] > tol);
                }
                for k in 0..3 {
                    assert!(d[i][j] <= d[i][k] + d[k][j] + 3.0 * tol);
                }
            }
        }
    }

    #[test]
    fn budget_exhaustion_reports_bracket() {
        let a = ConvexBody::ellipsoid(vec![0.0, 0.0, 0.0], vec![2.0, 1.0, 1.0]).unwrap();
        let b = ConvexBody::ball(vec![0.0, 0.0, 0.0], 1.0).unwrap();
        let err = hausdorff_distance(&a, &b, &HausdorffOpts { tol: 1e-12, max_cells: 10 });
        match err {
            Err(Error::NumericFailure { bracket: Some((lo, hi)), .. }) => {
                assert!(lo <= 1.0 && hi >= 1.0, "bracket [{lo}, {hi}] should contain 1");
            }
            other => panic!("expected numeric failure with bracket, got {other:?}"),
        }
        let _ = geom::norm(&[0.0]);
    }
}
