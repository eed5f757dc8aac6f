//! The maximal indicator, the order of curvature, the total order on index
//! sets, and the infinite-curvature witness.
//!
//! The maximal indicator is built greedily: the first element is the least
//! `i` such that some tip and axis realize a hat of radius `1/i` and angle
//! `a_i`; each later element is the least `j` beyond the previous one such
//! that a single tip and axis realize the hats of *all* selected indices and
//! `j` simultaneously. Feasibility is searched over touching points of a
//! direction net with local descent, so verdicts are net-relative; every
//! accepted certificate is re-verified independently at a tighter tolerance.

use alloc::format;
use alloc::vec::Vec;

use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::geom::Direction;
use crate::hat::{has_hat, pattern_descent, tip_deficit, CapSpec, SearchOpts};
use crate::indicator::{indicator_sum, IndicatorOpts};
use crate::sampling;
use crate::spheremax::SphereMaxOpts;

/// Strictly decreasing angle sequence with values in (0, 1/2).
#[derive(Debug, Clone, PartialEq)]
pub enum AngleSequence {
    /// `a_n = 1/(n + offset)`, the default being offset 2 (1/3, 1/4, ...).
    ReciprocalShifted { offset: f64 },
    /// Explicit values, validated on construction.
    Explicit(Vec<f64>),
}

impl AngleSequence {
    pub fn harmonic2() -> Self {
        AngleSequence::ReciprocalShifted { offset: 2.0 }
    }

    pub fn explicit(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("angle sequence needs values".into()));
        }
        for w in values.windows(2) {
            if !(w[1] < w[0]) {
                return Err(Error::InvalidInput(
                    "angle sequence must be strictly decreasing".into(),
                ));
            }
        }
        if values.iter().any(|a| !(*a > 0.0 && *a < 0.5)) {
            return Err(Error::InvalidInput("angle values must lie in (0, 1/2)".into()));
        }
        Ok(AngleSequence::Explicit(values))
    }

    /// `a_n` for 1-based `n`.
    pub fn value(&self, n: usize) -> Result<f64> {
        match self {
            AngleSequence::ReciprocalShifted { offset } => {
                let a = 1.0 / (n as f64 + offset);
                if !(a > 0.0 && a < 0.5) {
                    return Err(Error::InvalidInput(format!(
                        "a_{n} = {a} falls outside (0, 1/2)"
                    )));
                }
                Ok(a)
            }
            AngleSequence::Explicit(v) => v
                .get(n - 1)
                .copied()
                .ok_or_else(|| Error::InvalidInput(format!("angle sequence has no term {n}"))),
        }
    }
}

/// Sorted set of natural numbers with the convention `I(n) = ∞` when the set
/// has fewer than `n` elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(mut elements: Vec<usize>) -> Result<Self> {
        elements.sort_unstable();
        for w in elements.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidInput("index set has duplicate elements".into()));
            }
        }
        if elements.iter().any(|&e| e == 0) {
            return Err(Error::InvalidInput("index sets hold natural numbers ≥ 1".into()));
        }
        Ok(IndexSet(elements))
    }

    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    /// The `n`-th element (1-based), `None` standing in for ∞.
    pub fn nth(&self, n: usize) -> Option<usize> {
        self.0.get(n - 1).copied()
    }

    pub fn elements(&self) -> &[usize] {
        &self.0
    }

    pub fn cardinality(&self) -> usize {
        self.0.len()
    }

    pub fn contains_subset(&self, other: &IndexSet) -> bool {
        other.0.iter().all(|e| self.0.contains(e))
    }
}

/// Total order `I ≺ I'`: compare position-wise with `I(n) = ∞` for missing
/// entries; the first differing position decides.
pub fn compare_index_sets(a: &IndexSet, b: &IndexSet) -> core::cmp::Ordering {
    let len = a.cardinality().max(b.cardinality()) + 1;
    for n in 1..=len {
        let x = a.nth(n);
        let y = b.nth(n);
        match (x, y) {
            (Some(p), Some(q)) if p != q => return p.cmp(&q),
            (Some(_), None) => return core::cmp::Ordering::Less,
            (None, Some(_)) => return core::cmp::Ordering::Greater,
            _ => {}
        }
    }
    core::cmp::Ordering::Equal
}

/// A `(tip, axis)` pair realizing every cap of a prefix simultaneously.
#[derive(Debug, Clone)]
pub struct PrefixCertificate {
    /// Number of leading elements of the index set this certificate covers.
    pub prefix_len: usize,
    pub tip: Vec<f64>,
    pub axis: Direction,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OrderVerdict {
    /// All indices beyond the set up to the horizon failed the net search.
    Exact(usize),
    /// The set reached the horizon; order is at least this.
    AtLeastAtHorizon(usize),
}

#[derive(Debug, Clone)]
pub struct OrderResult {
    pub index_set: IndexSet,
    pub horizon: usize,
    pub zero_tol: f64,
    pub certificates: Vec<PrefixCertificate>,
    pub verdict: OrderVerdict,
}

impl OrderResult {
    pub fn order_lower_bound(&self) -> usize {
        self.index_set.cardinality()
    }

    pub fn deepest_certificate(&self) -> Option<&PrefixCertificate> {
        self.certificates.last()
    }
}

/// Cap parameters `(1/i, a_i)` for the selected indices.
pub fn family_params(seq: &AngleSequence, indices: &[usize]) -> Result<Vec<(f64, f64)>> {
    indices
        .iter()
        .map(|&i| Ok((1.0 / i as f64, seq.value(i)?)))
        .collect()
}

/// Joint deficit of the hat family anchored at the touching point of `w`:
/// the worst certified `sup_excess − ε` over the family.
pub fn joint_deficit(
    body: &ConvexBody,
    w: &[f64],
    params: &[(f64, f64)],
    kopts: &SphereMaxOpts,
) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for &(eps, delta) in params {
        let d = tip_deficit(body, w, eps, delta, kopts);
        worst = worst.max(d);
        if !worst.is_finite() {
            return f64::INFINITY;
        }
    }
    worst
}

/// Searches for an axis making the whole family feasible; warm starts are
/// tried before the net. Returns `(axis, deficit)` of the best candidate.
fn search_family_axis(
    body: &ConvexBody,
    params: &[(f64, f64)],
    warm: &[Vec<f64>],
    search: &SearchOpts,
) -> (Vec<f64>, f64) {
    let dim = body.dim();
    let eta = search.zero_tol(body);
    let kopts = SphereMaxOpts { tol: (0.2 * eta).max(1e-12), max_cells: search.kernel_cells };
    let mut best_w: Option<Vec<f64>> = None;
    let mut best = f64::INFINITY;
    let consider = |w: &[f64], best: &mut f64, best_w: &mut Option<Vec<f64>>| -> bool {
        let d = joint_deficit(body, w, params, &kopts);
        if d < *best {
            *best = d;
            *best_w = Some(w.to_vec());
        }
        d <= eta
    };
    for w in warm {
        if consider(w, &mut best, &mut best_w) {
            return (best_w.unwrap(), best);
        }
    }
    let mut net = sampling::direction_net(dim, search.net(dim));
    for k in 0..dim {
        let mut e = alloc::vec![0.0; dim];
        e[k] = 1.0;
        net.push(e.clone());
        e[k] = -1.0;
        net.push(e);
    }
    for w in &net {
        if consider(w, &mut best, &mut best_w) {
            return (best_w.unwrap(), best);
        }
    }
    let w0 = best_w.unwrap_or_else(|| {
        let mut e = alloc::vec![0.0; dim];
        e[0] = 1.0;
        e
    });
    if best > eta {
        let step0 = (2.0 * core::f64::consts::PI / search.net(dim) as f64).max(1e-3);
        let (wd, bd) = pattern_descent(&w0, 1.5 * step0, search.descent_rounds, |cand| {
            joint_deficit(body, cand, params, &kopts)
        });
        if bd < best {
            return (wd, bd);
        }
    }
    (w0, best)
}

/// Greedily builds the maximal indicator up to `i_max`.
pub fn maximal_indicator(
    body: &ConvexBody,
    seq: &AngleSequence,
    i_max: usize,
    search: &SearchOpts,
) -> Result<OrderResult> {
    if i_max < 1 {
        return Err(Error::InvalidInput("horizon must be ≥ 1".into()));
    }
    let eta = search.zero_tol(body);
    let verify_tol = 0.1 * eta;
    let mut elements: Vec<usize> = Vec::new();
    let mut certificates: Vec<PrefixCertificate> = Vec::new();
    let mut warm: Vec<Vec<f64>> = Vec::new();

    let mut next = 1usize;
    while next <= i_max {
        let mut accepted = false;
        for j in next..=i_max {
            let mut candidate = elements.clone();
            candidate.push(j);
            let params = family_params(seq, &candidate)?;
            let (w, deficit) = search_family_axis(body, &params, &warm, search);
            if deficit <= eta {
                // Independent re-verification at 10× tighter tolerance.
                let tip = body.support_point_raw(&w);
                let axis = Direction::new(w.clone())
                    .or_else(|_| Direction::normalized(w.clone()))?;
                let mut verified = true;
                for &(eps, delta) in &params {
                    let cap = CapSpec::new(tip.clone(), axis.clone(), eps, delta)?;
                    if !has_hat(body, &cap, eta + verify_tol)?.holds() {
                        verified = false;
                        break;
                    }
                }
                if verified {
                    elements.push(j);
                    certificates.push(PrefixCertificate {
                        prefix_len: elements.len(),
                        tip,
                        axis,
                    });
                    warm.clear();
                    warm.push(w);
                    next = j + 1;
                    accepted = true;
                    break;
                }
            }
        }
        if !accepted {
            break;
        }
    }

    let card = elements.len();
    let reached_horizon = elements.last().copied() == Some(i_max);
    Ok(OrderResult {
        index_set: IndexSet::new(elements).unwrap_or_else(|_| IndexSet::empty()),
        horizon: i_max,
        zero_tol: eta,
        certificates,
        verdict: if reached_horizon {
            OrderVerdict::AtLeastAtHorizon(card)
        } else {
            OrderVerdict::Exact(card)
        },
    })
}

/// Cardinality view of the maximal indicator.
pub fn order_of_curvature(
    body: &ConvexBody,
    seq: &AngleSequence,
    i_max: usize,
    search: &SearchOpts,
) -> Result<OrderResult> {
    maximal_indicator(body, seq, i_max, search)
}

/// Witness record for the infinite-curvature mechanism.
#[derive(Debug, Clone)]
pub struct InfinityWitness {
    /// Inward normal direction minimizing the deepest prefix score.
    pub tau_star: Direction,
    /// Touching tip of the certificate.
    pub point: Vec<f64>,
    /// Lower curvature bound `i_last = 1/ε_last` from the deepest prefix.
    pub kappa_lower: f64,
    /// The minimized score (indicator sum for strictly convex bodies,
    /// joint deficit otherwise).
    pub score: f64,
}

/// Direction whose prefix indicator sums (or hat deficits) vanish up to the
/// requested prefix depth: the numerical analogue of intersecting the
/// indicator's closed zero-sets on the sphere.
pub fn infinite_curvature_witness(
    body: &ConvexBody,
    result: &OrderResult,
    m_max: usize,
    seq: &AngleSequence,
    search: &SearchOpts,
) -> Result<InfinityWitness> {
    if result.certificates.is_empty() {
        return Err(Error::InvalidInput("order result carries no certificates".into()));
    }
    let Some(cert) = result.certificates.iter().find(|c| c.prefix_len >= m_max) else {
        return Err(Error::InvalidInput(format!(
            "no certificate covers prefix length {m_max}"
        )));
    };
    let prefix: Vec<usize> = result.index_set.elements()[..m_max].to_vec();
    let params = family_params(seq, &prefix)?;
    // Prefix sums are monotone in the prefix, so scoring the deepest prefix
    // scores the maximum over all prefixes m ≤ m_max.
    let score_axis = |w: &[f64]| -> f64 {
        if body.is_strictly_convex() {
            let tau = match Direction::normalized(w.iter().map(|x| -x).collect()) {
                Ok(t) => t,
                Err(_) => return f64::INFINITY,
            };
            let opts = IndicatorOpts { alpha_tol: 1e-9, kernel_cells: search.kernel_cells };
            indicator_sum(body, &tau, &params, &opts).unwrap_or(f64::INFINITY)
        } else {
            let kopts = SphereMaxOpts { tol: 1e-10, max_cells: search.kernel_cells };
            joint_deficit(body, w, &params, &kopts).max(0.0)
        }
    };
    let w0 = cert.axis.as_slice().to_vec();
    let s0 = score_axis(&w0);
    let (w, score) = if s0 > 0.0 {
        pattern_descent(&w0, 1e-2, search.descent_rounds, score_axis)
    } else {
        (w0, s0)
    };
    let axis = Direction::normalized(w.clone())?;
    let tip = body.support_point_raw(&w);
    let i_last = prefix[m_max - 1];
    Ok(InfinityWitness {
        tau_star: axis.neg(),
        point: tip,
        kappa_lower: i_last as f64,
        score,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom;
    use alloc::vec;
    use core::cmp::Ordering;

    #[test]
    fn angle_sequence_default() {
        let s = AngleSequence::harmonic2();
        assert!((s.value(1).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((s.value(8).unwrap() - 0.1).abs() < 1e-15);
        assert!(AngleSequence::explicit(vec![0.3, 0.3]).is_err());
        assert!(AngleSequence::explicit(vec![0.6, 0.2]).is_err());
    }

    #[test]
    fn index_set_order_examples() {
        let a = IndexSet::new(vec![1, 3]).unwrap();
        let b = IndexSet::new(vec![2, 3]).unwrap();
        assert_eq!(compare_index_sets(&a, &b), Ordering::Less);
        let c = IndexSet::new(vec![1, 2]).unwrap();
        assert_eq!(compare_index_sets(&c, &c.clone()), Ordering::Equal);
        let d = IndexSet::new(vec![1]).unwrap();
        // {1,2} precedes {1} by the I(n) = ∞ convention.
        assert_eq!(compare_index_sets(&c, &d), Ordering::Less);
        assert_eq!(compare_index_sets(&d, &c), Ordering::Greater);
    }

    #[test]
    fn index_set_order_is_transitive_on_samples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let mut sets = Vec::new();
        for _ in 0..60 {
            let len = rng.gen_range(0..5);
            let mut v: Vec<usize> = (0..len).map(|_| rng.gen_range(1..9)).collect();
            v.sort_unstable();
            v.dedup();
            sets.push(IndexSet::new(v).unwrap());
        }
        for a in &sets {
            for b in &sets {
                for c in &sets {
                    if compare_index_sets(a, b) != Ordering::Greater
                        && compare_index_sets(b, c) != Ordering::Greater
                    {
                        assert_ne!(compare_index_sets(a, c), Ordering::Greater);
                    }
                }
            }
        }
    }

    fn ball_order(radius: f64, dim: usize, i_max: usize) -> OrderResult {
        let k = ConvexBody::ball(vec![0.0; dim], radius).unwrap();
        let seq = AngleSequence::harmonic2();
        maximal_indicator(&k, &seq, i_max, &SearchOpts::default()).unwrap()
    }

    #[test]
    fn unit_ball_has_order_one() {
        for dim in [2usize, 3] {
            let r = ball_order(1.0, dim, 8);
            assert_eq!(r.index_set.elements(), &[1]);
            assert_eq!(r.verdict, OrderVerdict::Exact(1));
        }
    }

    #[test]
    fn third_ball_has_order_three() {
        for dim in [2usize, 3] {
            let r = ball_order(1.0 / 3.0, dim, 8);
            assert_eq!(r.index_set.elements(), &[1, 2, 3], "d = {dim}");
            assert_eq!(r.verdict, OrderVerdict::Exact(3));
            // Certificates share a touching tip on the sphere.
            for c in &r.certificates {
                assert!((geom::norm(&c.tip) - 1.0 / 3.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn ball_order_matches_radius_rule() {
        // order = #{i ≤ i_max : 1/i ≥ R}
        for &(radius, expect) in &[(1.0, 1usize), (0.5, 2), (0.26, 3)] {
            let r = ball_order(radius, 2, 8);
            assert_eq!(r.index_set.cardinality(), expect, "R = {radius}");
        }
    }

    #[test]
    fn revolution_reaches_horizon() {
        let k = ConvexBody::revolution(1.5, 1.0, 2).unwrap();
        let seq = AngleSequence::harmonic2();
        let r = maximal_indicator(&k, &seq, 8, &SearchOpts::default()).unwrap();
        assert_eq!(r.index_set.elements(), &[1, 2, 3, 4, 5, 6, 7, 8]);
        assert_eq!(r.verdict, OrderVerdict::AtLeastAtHorizon(8));
        let w = infinite_curvature_witness(&k, &r, 8, &seq, &SearchOpts::default()).unwrap();
        assert!(w.kappa_lower >= 8.0);
        // Pole located to within the search-net resolution; the minimizing
        // direction is determined only up to the width of the zero set.
        assert!(geom::norm(&w.point) < 1e-2, "witness point {:?}", w.point);
        assert!(
            geom::angle_between_units(w.tau_star.as_slice(), &[0.0, 1.0]) < 0.05,
            "τ* {:?}",
            w.tau_star
        );
    }

    #[test]
    fn witness_on_small_ball() {
        let k = ConvexBody::ball(vec![0.0, 0.0], 1.0 / 3.0).unwrap();
        let seq = AngleSequence::harmonic2();
        let r = maximal_indicator(&k, &seq, 8, &SearchOpts::default()).unwrap();
        let w = infinite_curvature_witness(&k, &r, 3, &seq, &SearchOpts::default()).unwrap();
        assert!((w.kappa_lower - 3.0).abs() < 1e-12);
        assert!(w.score < 1e-7);
    }

    #[test]
    fn greedy_minimality_small_enumeration() {
        // No feasible index set strictly below the greedy one exists on the
        // net: exhaustive check over small index sets for the 1/2-ball.
        let k = ConvexBody::ball(vec![0.0, 0.0], 0.5).unwrap();
        let seq = AngleSequence::harmonic2();
        let search = SearchOpts::default();
        let greedy = maximal_indicator(&k, &seq, 8, &search).unwrap();
        assert_eq!(greedy.index_set.elements(), &[1, 2]);
        let kopts = SphereMaxOpts { tol: 1e-10, max_cells: search.kernel_cells };
        let eta = search.zero_tol(&k);
        // Candidate sets of size ≤ 2 over indices ≤ 4 that precede {1,2}.
        for cand in [vec![1usize, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]] {
            let set = IndexSet::new(cand.clone()).unwrap();
            if compare_index_sets(&set, &greedy.index_set) == Ordering::Less {
                let params = family_params(&seq, &cand).unwrap();
                let mut feasible = false;
                for w in sampling::circle_net(720) {
                    if joint_deficit(&k, &w, &params, &kopts) <= eta {
                        feasible = true;
                        break;
                    }
                }
                assert!(!feasible, "set {cand:?} should not beat the greedy one");
            }
        }
    }
}
