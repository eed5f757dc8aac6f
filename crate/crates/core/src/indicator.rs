//! The curvature indicator: the least outward translation of the hat
//! anchored at a touching point that swallows the whole body.
//!
//! With `x_τ` the touching point of the inward normal `τ` and `H` the hat
//! with tip `x_τ`, axis `−τ`, radius `ε` and angle `δ`, the indicator is
//! `α₀ = min { α ≥ 0 : K ⊆ H − ατ }`. Containment at offset `α` is a
//! sup-excess query against the translated cap, and the map
//! `α ↦ sup_excess(K, H − ατ)` is convex, strictly decreasing with slope at
//! most `−cos(δπ)`, so certified bisection pins the root.

use alloc::format;
use alloc::vec::Vec;

use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::geom::flt;
use crate::geom::{self, Direction};
use crate::hat::{sup_excess, CapSpec};
use crate::metric::{hausdorff_distance, HausdorffOpts};
use crate::spheremax::SphereMaxOpts;

/// Indicator value with its certificate.
#[derive(Debug, Clone)]
pub struct IndicatorValue {
    pub alpha0: f64,
    /// Certified absolute error of `alpha0`.
    pub error: f64,
    /// Boundary point achieving the binding translation threshold.
    pub witness: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct IndicatorOpts {
    /// Absolute tolerance on `α₀`.
    pub alpha_tol: f64,
    pub kernel_cells: usize,
}

impl Default for IndicatorOpts {
    fn default() -> Self {
        IndicatorOpts { alpha_tol: 1e-9, kernel_cells: 2_000_000 }
    }
}

/// The curvature indicator `𝔎(ε, δ, K, τ)` for strictly convex `K`.
pub fn curvature_indicator(
    body: &ConvexBody,
    tau: &Direction,
    eps: f64,
    delta: f64,
    opts: &IndicatorOpts,
) -> Result<IndicatorValue> {
    if !body.is_strictly_convex() {
        return Err(Error::Precondition(
            "curvature indicator requires a strictly convex body".into(),
        ));
    }
    if tau.dim() != body.dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), got: tau.dim() });
    }
    let x_tau = body.touching_point(tau)?;
    let cap = CapSpec::new(x_tau, tau.neg(), eps, delta)?;
    let slope = flt::cos(cap.half_angle());
    let kernel_tol = (0.25 * opts.alpha_tol * slope).max(1e-13);
    let kopts = SphereMaxOpts { tol: kernel_tol, max_cells: opts.kernel_cells };

    // G(α) = sup_excess against the cap translated by −ατ.
    let minus_tau: Vec<f64> = tau.as_slice().iter().map(|x| -x).collect();
    let eval = |alpha: f64| -> Result<crate::spheremax::MaxBracket> {
        let shifted = cap.translated(&geom::scale(&minus_tau, alpha));
        sup_excess(body, &shifted, &kopts)
    };

    let g0 = eval(0.0)?;
    if g0.ub <= eps + kernel_tol {
        return Ok(IndicatorValue { alpha0: 0.0, error: 0.0, witness: g0.witness });
    }
    // G decreases with slope in [−1, −cos(δπ)], so this bracket is feasible.
    let mut lo = 0.0;
    let mut hi = (g0.ub - eps) / slope + opts.alpha_tol;
    let mut witness = g0.witness;
    let mut guard = 0usize;
    while hi - lo > opts.alpha_tol {
        guard += 1;
        if guard > 200 {
            return Err(Error::NumericFailure {
                what: format!("indicator bisection stalled for (ε, δ) = ({eps}, {delta})"),
                bracket: Some((lo, hi)),
            });
        }
        let mid = 0.5 * (lo + hi);
        let g = eval(mid)?;
        if !g.converged {
            return Err(Error::NumericFailure {
                what: "indicator sup-excess did not converge".into(),
                bracket: Some((lo, hi)),
            });
        }
        if g.lb > eps {
            lo = mid;
            witness = g.witness;
        } else if g.ub <= eps {
            hi = mid;
        } else {
            // ε sits inside the certified bracket: the slope bound turns the
            // value uncertainty into an α interval around mid.
            let slack = g.gap() / slope;
            lo = lo.max(mid - slack);
            hi = hi.min(mid + slack);
            if hi < lo {
                let m = 0.5 * (lo + hi);
                lo = m;
                hi = m;
            }
            break;
        }
    }
    let alpha0 = 0.5 * (lo + hi);
    Ok(IndicatorValue { alpha0: alpha0.max(0.0), error: 0.5 * (hi - lo), witness })
}

/// `Σ_i 𝔎(ε_i, δ_i, K, τ)`; zero exactly when all caps with the shared tip
/// and axis are hats simultaneously.
pub fn indicator_sum(
    body: &ConvexBody,
    tau: &Direction,
    specs: &[(f64, f64)],
    opts: &IndicatorOpts,
) -> Result<f64> {
    let mut sum = 0.0;
    for &(eps, delta) in specs {
        sum += curvature_indicator(body, tau, eps, delta, opts)?.alpha0;
    }
    Ok(sum)
}

/// One continuity probe: indicator difference against input distances.
#[derive(Debug, Clone)]
pub struct ProbeRecord {
    pub delta_indicator: f64,
    pub d_ph: f64,
    pub angle: f64,
}

/// Empirical continuity probe for the indicator (both bodies strictly convex).
/// `known_dph` skips the certified distance when the caller has a bound.
pub fn continuity_probe(
    body: &ConvexBody,
    other: &ConvexBody,
    tau: &Direction,
    tau_other: &Direction,
    eps: f64,
    delta: f64,
    known_dph: Option<f64>,
    opts: &IndicatorOpts,
) -> Result<ProbeRecord> {
    let a = curvature_indicator(body, tau, eps, delta, opts)?;
    let b = curvature_indicator(other, tau_other, eps, delta, opts)?;
    let d_ph = match known_dph {
        Some(d) => d,
        None => {
            let r = hausdorff_distance(
                body,
                other,
                &HausdorffOpts { tol: 1e-5, max_cells: 4_000_000 },
            )?;
            r.value + r.error_bound
        }
    };
    Ok(ProbeRecord {
        delta_indicator: flt::abs(a.alpha0 - b.alpha0),
        d_ph,
        angle: tau.angle_to(tau_other),
    })
}

/// Closed form for balls: `max(0, (R−ε)(sec(δπ) − 1))`. Used as the oracle
/// in tests and the acceptance grid.
pub fn ball_indicator_closed_form(radius: f64, eps: f64, delta: f64) -> f64 {
    let sec = 1.0 / flt::cos(delta * core::f64::consts::PI);
    ((radius - eps) * (sec - 1.0)).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hat::{has_hat, HatVerdict};
    use alloc::vec;

    fn dirv(v: &[f64]) -> Direction {
        Direction::normalized(v.to_vec()).unwrap()
    }

    /// Brute-force oracle: per boundary point, bisect the least α with
    /// `excess(y + ατ) ≤ ε`, then take the maximum over a dense boundary net.
    fn brute_ball_indicator(center: &[f64], radius: f64, tau: &Direction, eps: f64, delta: f64) -> f64 {
        let k = ConvexBody::ball(center.to_vec(), radius).unwrap();
        let x_tau = k.touching_point(tau).unwrap();
        let cap = CapSpec::new(x_tau, tau.neg(), eps, delta).unwrap();
        let m = 4000;
        let mut worst = 0.0_f64;
        for i in 0..m {
            let t = core::f64::consts::TAU * (i as f64) / (m as f64);
            let y = [center[0] + radius * flt::cos(t), center[1] + radius * flt::sin(t)];
            let feasible = |alpha: f64| {
                let shifted = geom::axpy(&y, alpha, tau.as_slice());
                crate::hat::excess(&cap, &shifted) <= eps
            };
            if feasible(0.0) {
                continue;
            }
            let mut lo = 0.0;
            let mut hi = 4.0 * (radius + eps);
            assert!(feasible(hi));
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

    #[test]
    fn ball_closed_form_confirmed_by_brute_bisection() {
        for &(radius, eps, delta) in
            &[(1.0, 0.5, 1.0 / 3.0), (1.0, 2.0, 0.25), (2.0, 0.5, 0.1)]
        {
            let tau = dirv(&[0.0, 1.0]);
            let brute = brute_ball_indicator(&[0.0, 0.0], radius, &tau, eps, delta);
            let closed = ball_indicator_closed_form(radius, eps, delta);
            assert!(
                (brute - closed).abs() < 1e-6,
                "brute {brute} vs closed form {closed} for R={radius}, ε={eps}, δ={delta}"
            );
        }
    }

    #[test]
    fn indicator_matches_closed_form_on_balls() {
        let opts = IndicatorOpts::default();
        for dim in [2usize, 3] {
            let center = vec![0.0; dim];
            let k = ConvexBody::ball(center, 1.0).unwrap();
            let tau = Direction::axis(dim, dim - 1).unwrap();
            for &(eps, delta) in &[(0.5, 1.0 / 3.0), (2.0, 0.25), (0.25, 0.4), (1.0, 0.1)] {
                let v = curvature_indicator(&k, &tau, eps, delta, &opts).unwrap();
                let closed = ball_indicator_closed_form(1.0, eps, delta);
                assert!(
                    (v.alpha0 - closed).abs() <= 1e-6,
                    "α₀ {} vs closed {closed} at (ε,δ)=({eps},{delta}), d={dim}",
                    v.alpha0
                );
            }
        }
    }

    #[test]
    fn zero_iff_hat_holds() {
        let k = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
        let tau = dirv(&[0.0, 1.0]);
        let opts = IndicatorOpts::default();
        // ε ≥ R: the tangent ε-ball swallows K, indicator zero, hat holds.
        let v = curvature_indicator(&k, &tau, 2.0, 0.25, &opts).unwrap();
        assert_eq!(v.alpha0, 0.0);
        let x = k.touching_point(&tau).unwrap();
        let cap = CapSpec::new(x, tau.neg(), 2.0, 0.25).unwrap();
        assert!(has_hat(&k, &cap, 1e-9).unwrap().holds());
        // ε < R: positive indicator, hat fails.
        let v = curvature_indicator(&k, &tau, 0.5, 0.25, &opts).unwrap();
        assert!(v.alpha0 > 1e-6);
        let cap = CapSpec::new(k.touching_point(&tau).unwrap(), tau.neg(), 0.5, 0.25).unwrap();
        assert_eq!(has_hat(&k, &cap, 1e-9).unwrap(), HatVerdict::Fails);
    }

    #[test]
    fn indicator_rigid_invariance() {
        let opts = IndicatorOpts::default();
        // Translation invariance on balls.
        let a = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
        let b = ConvexBody::ball(vec![5.0, -3.0], 1.0).unwrap();
        let tau = dirv(&[0.6, 0.8]);
        let va = curvature_indicator(&a, &tau, 0.5, 0.3, &opts).unwrap();
        let vb = curvature_indicator(&b, &tau, 0.5, 0.3, &opts).unwrap();
        assert!((va.alpha0 - vb.alpha0).abs() < 1e-9);
        // Axis-permutation rotation on ellipsoids.
        let e1 = ConvexBody::ellipsoid(vec![0.0, 0.0], vec![2.0, 1.0]).unwrap();
        let e2 = ConvexBody::ellipsoid(vec![0.0, 0.0], vec![1.0, 2.0]).unwrap();
        let v1 = curvature_indicator(&e1, &dirv(&[0.0, 1.0]), 0.5, 0.3, &opts).unwrap();
        let v2 = curvature_indicator(&e2, &dirv(&[1.0, 0.0]), 0.5, 0.3, &opts).unwrap();
        assert!((v1.alpha0 - v2.alpha0).abs() < 1e-7, "{} vs {}", v1.alpha0, v2.alpha0);
    }

    #[test]
    fn indicator_monotone_in_eps() {
        let k = ConvexBody::ellipsoid(vec![0.0, 0.0], vec![1.5, 1.0]).unwrap();
        let tau = dirv(&[0.0, 1.0]);
        let opts = IndicatorOpts::default();
        let mut prev = f64::INFINITY;
        for eps in [0.25, 0.5, 1.0, 2.0] {
            let v = curvature_indicator(&k, &tau, eps, 0.3, &opts).unwrap();
            assert!(v.alpha0 <= prev + 1e-8);
            prev = v.alpha0;
        }
    }

    #[test]
    fn indicator_sum_examples() {
        let opts = IndicatorOpts::default();
        let tau = dirv(&[0.0, 1.0]);
        let small = ConvexBody::ball(vec![0.0, 0.0], 1.0 / 3.0).unwrap();
        let specs = [(1.0, 1.0 / 3.0), (0.5, 0.25), (1.0 / 3.0, 0.2)];
        let sum = indicator_sum(&small, &tau, &specs, &opts).unwrap();
        assert!(sum.abs() < 1e-8, "sum {sum}");
        assert_eq!(indicator_sum(&small, &tau, &[], &opts).unwrap(), 0.0);
        let unit = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
        let sum = indicator_sum(&unit, &tau, &[(1.0, 1.0 / 3.0), (0.5, 0.25)], &opts).unwrap();
        let expected = ball_indicator_closed_form(1.0, 0.5, 0.25);
        assert!((sum - expected).abs() < 1e-7, "sum {sum} expected {expected}");
    }

    #[test]
    fn continuity_probe_examples() {
        let opts = IndicatorOpts::default();
        let tau = dirv(&[0.0, 1.0]);
        let a = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
        let same = continuity_probe(&a, &a, &tau, &tau, 0.5, 1.0 / 3.0, Some(0.0), &opts).unwrap();
        assert_eq!(same.delta_indicator, 0.0);
        let b = ConvexBody::ball(vec![0.0, 0.0], 1.01).unwrap();
        let rec =
            continuity_probe(&a, &b, &tau, &tau, 0.5, 1.0 / 3.0, Some(0.01), &opts).unwrap();
        assert!((rec.delta_indicator - 0.01).abs() < 1e-7);
        // Rotating τ leaves a ball's indicator unchanged.
        let rot = dirv(&[flt::sin(0.01), flt::cos(0.01)]);
        let rec = continuity_probe(&a, &a, &tau, &rot, 0.5, 1.0 / 3.0, Some(0.0), &opts).unwrap();
        assert!(rec.delta_indicator < 1e-9);
        assert!((rec.angle - 0.01).abs() < 1e-9);
    }

    #[test]
    fn indicator_requires_strict_convexity() {
        let tri =
            ConvexBody::polytope(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let tau = dirv(&[0.0, 1.0]);
        assert!(matches!(
            curvature_indicator(&tri, &tau, 0.5, 0.3, &IndicatorOpts::default()),
            Err(Error::Precondition(_))
        ));
    }
}
