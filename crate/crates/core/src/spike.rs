//! Spike perturbations: raising the order of curvature within a prescribed
//! Hausdorff budget, plus seeded perturbation sampling.
//!
//! A spike replaces `K` by `conv(K ∪ {x + θτ})` for a boundary point `x`
//! with outward direction `τ`. Spiking a touching point moves the body by
//! exactly `θ` in the Pompeiu-Hausdorff metric, so repeated spikes with a
//! halving budget schedule stay inside any prescribed ball around the seed
//! body while the spike vertex supports ever deeper hat families.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::geom::{self, Direction};
use crate::hat::{has_hat, CapSpec, SearchOpts};
use crate::order::{compare_index_sets, maximal_indicator, AngleSequence, OrderResult};
use crate::sampling;

/// One accepted perturbation step.
#[derive(Debug, Clone)]
pub struct PerturbationRecord {
    pub tip: Vec<f64>,
    pub direction: Direction,
    pub theta: f64,
    /// Exact Hausdorff distance moved by this step (the spike height when
    /// the tip is a touching point).
    pub d_ph: f64,
    /// Index set before and after the step.
    pub order_before: Vec<usize>,
    pub order_after: Vec<usize>,
    /// Largest grid shrink factor whose scaled hat family held at the new
    /// certificate, when one was found.
    pub shrink_factor: Option<f64>,
}

/// Outcome of `raise_order`.
#[derive(Debug, Clone)]
pub struct RaiseOutcome {
    pub body: ConvexBody,
    pub records: Vec<PerturbationRecord>,
    pub result: OrderResult,
    /// Sum of accepted spike heights; an upper bound on d_PH(seed, body).
    pub budget_used: f64,
    pub success: bool,
}

/// `K_θ = conv(K ∪ {x + θτ})`. The target point must be strictly outside
/// `K`, which is guaranteed when `x` is the touching point of `τ`.
pub fn spike(body: &ConvexBody, x: &[f64], tau: &Direction, theta: f64) -> Result<ConvexBody> {
    if x.len() != body.dim() || tau.dim() != body.dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), got: x.len() });
    }
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::InvalidInput(format!("spike height must be > 0, got {theta}")));
    }
    let x_theta = geom::axpy(x, theta, tau.as_slice());
    // Separating-hyperplane check at u = τ.
    if geom::dot(&x_theta, tau.as_slice()) <= body.support_raw(tau.as_slice()) {
        return Err(Error::DegenerateSpike);
    }
    body.hull_with_point(x_theta)
}

/// Iteratively spikes certificate tips until the order reaches `target_m`
/// or the budget `phi_budget` is exhausted. Certificates of the returned
/// result are independently re-verified by `maximal_indicator` itself.
pub fn raise_order(
    body: &ConvexBody,
    target_m: usize,
    phi_budget: f64,
    seq: &AngleSequence,
    search: &SearchOpts,
) -> Result<RaiseOutcome> {
    if !(phi_budget > 0.0) {
        return Err(Error::InvalidInput("budget must be > 0".into()));
    }
    if target_m < 1 {
        return Err(Error::InvalidInput("target order must be ≥ 1".into()));
    }
    let horizon = search_horizon(target_m);
    let mut current = body.clone();
    let mut result = maximal_indicator(&current, seq, horizon, search)?;
    let mut records: Vec<PerturbationRecord> = Vec::new();
    let mut used = 0.0_f64;

    while result.order_lower_bound() < target_m {
        let remaining = phi_budget - used;
        if remaining <= phi_budget * 1e-3 {
            break;
        }
        let Some(cert) = result.deepest_certificate().cloned() else {
            break;
        };
        let eps_last = result
            .index_set
            .elements()
            .last()
            .map(|&i| 1.0 / i as f64)
            .unwrap_or(1.0);
        let mut theta = (0.5 * remaining).min(0.25 * eps_last);
        let before = result.index_set.clone();
        let mut accepted = false;
        for _ in 0..3 {
            let spiked = spike(&current, &cert.tip, &cert.axis, theta)?;
            let next = maximal_indicator(&spiked, seq, horizon, search)?;
            let grew = next.order_lower_bound() > result.order_lower_bound();
            let nested = next.index_set.contains_subset(&before);
            if grew && nested {
                let shrink = certify_shrink_factor(&spiked, &next, seq);
                used += theta;
                records.push(PerturbationRecord {
                    tip: cert.tip.clone(),
                    direction: cert.axis.clone(),
                    theta,
                    d_ph: theta,
                    order_before: before.elements().to_vec(),
                    order_after: next.index_set.elements().to_vec(),
                    shrink_factor: shrink,
                });
                current = spiked;
                result = next;
                accepted = true;
                break;
            }
            theta *= 0.5;
            if theta < 1e-9 {
                break;
            }
        }
        if !accepted {
            break;
        }
    }

    let success = result.order_lower_bound() >= target_m;
    Ok(RaiseOutcome { body: current, records, result, budget_used: used, success })
}

fn search_horizon(target_m: usize) -> usize {
    // Greedy extensions of a spiked body land a few indices past the target;
    // 4m + 8 leaves room without scanning far into infeasible indices.
    (4 * target_m + 8).max(12)
}

/// Largest `f` on the grid {0.95, 0.90, ...} whose scaled family
/// `(f/i, min(a_i/f, 1/2 − 1e−6))` holds at the deepest certificate.
fn certify_shrink_factor(
    body: &ConvexBody,
    result: &OrderResult,
    seq: &AngleSequence,
) -> Option<f64> {
    let cert = result.deepest_certificate()?;
    let indices = result.index_set.elements();
    let tol = 1e-9 * (1.0 + body.diameter_bound());
    'grid: for step in 1..=18 {
        let f = 1.0 - 0.05 * step as f64;
        if f <= 0.05 {
            break;
        }
        for &i in indices {
            let eps = f / i as f64;
            let delta = (seq.value(i).ok()? / f).min(0.5 - 1e-6);
            let cap = CapSpec::new(cert.tip.clone(), cert.axis.clone(), eps, delta).ok()?;
            match has_hat(body, &cap, tol) {
                Ok(v) if v.holds() => {}
                _ => continue 'grid,
            }
        }
        return Some(f);
    }
    None
}

/// Draws `n` random bodies within Hausdorff distance `phi` of `K` by
/// composing small spikes at random touching points with an optional
/// Minkowski rounding; budgets sum below `phi` by construction and the
/// composition is reproducible per seed.
pub fn perturbation_sample(
    body: &ConvexBody,
    phi: f64,
    seed: u64,
    n: usize,
) -> Result<Vec<ConvexBody>> {
    if !(phi > 0.0) {
        return Err(Error::InvalidInput("perturbation radius must be > 0".into()));
    }
    if n < 1 {
        return Err(Error::InvalidInput("sample count must be ≥ 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = body.dim();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut k = body.clone();
        let total = phi * rng.gen_range(0.3..0.9);
        let ops = rng.gen_range(1..=3usize);
        let mut left = total;
        for step in 0..ops {
            let slice = if step + 1 == ops { left } else { left * rng.gen_range(0.3..0.7) };
            left -= slice;
            if slice <= 0.0 {
                continue;
            }
            if rng.gen_bool(0.25) {
                k = k.minkowski_ball(slice)?;
            } else {
                let w = sampling::random_unit(&mut rng, dim);
                let tau = Direction::new(w.clone()).expect("sampled unit direction");
                let tip = k.support_point_raw(&w);
                k = spike(&k, &tip, &tau, slice)?;
            }
        }
        out.push(k);
    }
    Ok(out)
}

/// Re-runs the order computation and checks `I_before ⊆ I_after` for each
/// accepted record; used by the verification suites.
pub fn records_are_monotone(records: &[PerturbationRecord]) -> bool {
    records.iter().all(|r| {
        let before = crate::order::IndexSet::new(r.order_before.clone());
        let after = crate::order::IndexSet::new(r.order_after.clone());
        match (before, after) {
            (Ok(b), Ok(a)) => {
                a.contains_subset(&b)
                    && compare_index_sets(&a, &b) != core::cmp::Ordering::Greater
            }
            _ => false,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{hausdorff_distance, HausdorffOpts};
    use alloc::vec;

    #[test]
    fn spike_support_example() {
        let k = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
        let tau = Direction::normalized(vec![0.0, -1.0]).unwrap();
        let s = spike(&k, &[0.0, -1.0], &tau, 0.1).unwrap();
        let u = Direction::normalized(vec![0.0, -1.0]).unwrap();
        assert!((s.support(&u).unwrap() - 1.1).abs() < 1e-12);
    }

    #[test]
    fn spike_distance_equals_theta() {
        let k = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
        let tau = Direction::normalized(vec![0.0, -1.0]).unwrap();
        for theta in [0.01, 0.1] {
            let s = spike(&k, &[0.0, -1.0], &tau, theta).unwrap();
            let d = hausdorff_distance(&k, &s, &HausdorffOpts { tol: 1e-9, max_cells: 4_000_000 })
                .unwrap();
            assert!((d.value - theta).abs() < 1e-9, "θ = {theta}, got {}", d.value);
        }
        // θ → 0 limit.
        let s = spike(&k, &[0.0, -1.0], &tau, 1e-12).unwrap();
        let d = hausdorff_distance(&k, &s, &HausdorffOpts { tol: 1e-9, max_cells: 2_000_000 })
            .unwrap();
        assert!(d.value <= 1e-12 + 1e-11);
    }

    #[test]
    fn spike_rejects_interior_target() {
        let k = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
        let tau = Direction::normalized(vec![0.0, 1.0]).unwrap();
        // Pointing inward from the boundary: x + θτ stays inside.
        assert!(matches!(
            spike(&k, &[0.0, -1.0], &tau, 0.5),
            Err(Error::DegenerateSpike)
        ));
        assert!(matches!(
            spike(&k, &[0.0, -1.0], &tau.neg(), 0.0),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn raise_order_noop_when_target_met() {
        let k = ConvexBody::ball(vec![0.0, 0.0], 0.5).unwrap();
        let out = raise_order(&k, 2, 0.2, &AngleSequence::harmonic2(), &SearchOpts::default())
            .unwrap();
        assert!(out.success);
        assert!(out.records.is_empty());
        assert_eq!(out.budget_used, 0.0);
    }

    #[test]
    fn raise_order_unit_ball_to_two() {
        let k = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
        let out = raise_order(&k, 2, 0.2, &AngleSequence::harmonic2(), &SearchOpts::default())
            .unwrap();
        assert!(out.success, "records {:?}", out.records);
        assert!(out.result.order_lower_bound() >= 2);
        assert!(out.budget_used <= 0.2);
        assert!(records_are_monotone(&out.records));
        let d = hausdorff_distance(
            &k,
            &out.body,
            &HausdorffOpts { tol: 1e-7, max_cells: 6_000_000 },
        )
        .unwrap();
        assert!(d.value + d.error_bound <= 0.2 + 1e-9, "d_PH {}", d.value);
    }

    #[test]
    fn perturbation_sample_reproducible_and_bounded() {
        let k = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
        let a = perturbation_sample(&k, 0.05, 17, 10).unwrap();
        let b = perturbation_sample(&k, 0.05, 17, 10).unwrap();
        assert_eq!(a.len(), 10);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x, y);
        }
        for s in &a {
            let d = hausdorff_distance(&k, s, &HausdorffOpts { tol: 1e-7, max_cells: 4_000_000 })
                .unwrap();
            assert!(d.value + d.error_bound <= 0.05 + 1e-9);
        }
        assert!(perturbation_sample(&k, 0.0, 1, 1).is_err());
    }
}
