//! Spherical caps, hats as membership predicates, and the executable forms
//! of the hat-stability and nesting lemmas.
//!
//! A hat with tip `x`, axis `u`, radius `ε` and angle `δ` is implemented as
//! the intersection of the halfspaces tangent to the sphere `S_ε(x−εu)` at
//! relative-interior cap points. A point `y` belongs to the hat iff
//!
//! `excess(y) = sup { ⟨y−c, v⟩ : ∠(v,u) ≤ δπ } = ‖y−c‖·cos(max(0, θ−δπ)) ≤ ε`
//!
//! with `c = x − εu` and `θ = ∠(y−c, u)`. The sup over a body `K` of the
//! excess swaps into `sup { h_K(v) − ⟨c,v⟩ : ∠(v,u) ≤ δπ }`, which the
//! certified sphere kernel brackets; balls, polytopes, hulls and rounded
//! bodies have exact closed forms.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::body::{BodyKind, ConvexBody};
use crate::error::{Error, Result};
use crate::geom::flt;
use crate::geom::{self, Direction};
use crate::metric;
use crate::sampling;
use crate::spheremax::{
    cap_linear_max, exact_bracket, sphere_max_diff, MaxBracket, PointOracle, Region,
    SphereMaxOpts,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Spherical cap: tip `x`, unit axis `u` pointing from sphere center to tip,
/// radius `ε > 0`, angle parameter `δ ∈ (0, 1/2)` (central angle `δπ`).
#[derive(Debug, Clone, PartialEq)]
pub struct CapSpec {
    tip: Vec<f64>,
    axis: Direction,
    eps: f64,
    delta: f64,
}

impl CapSpec {
    pub fn new(tip: Vec<f64>, axis: Direction, eps: f64, delta: f64) -> Result<Self> {
        if tip.len() != axis.dim() {
            return Err(Error::DimensionMismatch { expected: axis.dim(), got: tip.len() });
        }
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::InvalidInput(format!("cap radius must be > 0, got {eps}")));
        }
        if !(delta > 0.0 && delta < 0.5) {
            return Err(Error::InvalidInput(format!(
                "cap angle parameter must lie in (0, 1/2), got {delta}"
            )));
        }
        Ok(CapSpec { tip, axis, eps, delta })
    }

    #[inline]
    pub fn tip(&self) -> &[f64] {
        &self.tip
    }
    #[inline]
    pub fn axis(&self) -> &Direction {
        &self.axis
    }
    #[inline]
    pub fn eps(&self) -> f64 {
        self.eps
    }
    #[inline]
    pub fn delta(&self) -> f64 {
        self.delta
    }
    #[inline]
    pub fn dim(&self) -> usize {
        self.tip.len()
    }

    /// Central angle `δπ` of the cap.
    #[inline]
    pub fn half_angle(&self) -> f64 {
        self.delta * core::f64::consts::PI
    }

    /// Sphere center `c = x − εu`.
    pub fn center(&self) -> Vec<f64> {
        geom::axpy(&self.tip, -self.eps, self.axis.as_slice())
    }

    /// Cap translated by `t` (tip and center move together).
    pub fn translated(&self, t: &[f64]) -> CapSpec {
        CapSpec {
            tip: geom::add(&self.tip, t),
            axis: self.axis.clone(),
            eps: self.eps,
            delta: self.delta,
        }
    }
}

/// `excess(y)`: the tangent-halfspace functional deciding hat membership.
/// Convex and 1-Lipschitz in `y`; membership is `excess(y) ≤ ε`, and the tip
/// itself always has `excess = ε`.
pub fn excess(cap: &CapSpec, y: &[f64]) -> f64 {
    let c = cap.center();
    let r = geom::sub(y, &c);
    let n = geom::norm(&r);
    if n == 0.0 {
        return 0.0;
    }
    let unit = geom::scale(&r, 1.0 / n);
    let theta = geom::angle_between_units(&unit, cap.axis.as_slice());
    n * flt::cos((theta - cap.half_angle()).max(0.0))
}

/// Three-valued hat verdict for smooth bodies with finite certification.
#[derive(Debug, Clone, PartialEq)]
pub enum HatVerdict {
    Holds,
    Fails,
    /// The certified bracket of `sup excess − ε` straddles the tolerance.
    Indeterminate { gap: f64 },
}

impl HatVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, HatVerdict::Holds)
    }
}

/// Certified bracket of `sup_{y∈K} excess(y)`.
///
/// Exact for balls, polytopes, hulls and their roundings; otherwise bracketed
/// by the sphere kernel over the cap of directions (the sup over the body of
/// the excess equals the sup over cap directions of `h_K(v) − ⟨c,v⟩`).
pub fn sup_excess(body: &ConvexBody, cap: &CapSpec, opts: &SphereMaxOpts) -> Result<MaxBracket> {
    if body.dim() != cap.dim() {
        return Err(Error::DimensionMismatch { expected: cap.dim(), got: body.dim() });
    }
    let c = cap.center();
    sup_excess_inner(body, cap, &c, opts)
}

fn sup_excess_inner(
    body: &ConvexBody,
    cap: &CapSpec,
    center: &[f64],
    opts: &SphereMaxOpts,
) -> Result<MaxBracket> {
    match body.kind() {
        BodyKind::Ball { center: bc, radius } => {
            let rel = geom::sub(bc, center);
            let value = radius + cap_linear_max(&rel, cap.axis.as_slice(), cap.half_angle());
            let dir = arg_dir_for_linear(&rel, cap);
            let witness = geom::axpy(bc, *radius, &dir);
            Ok(exact_bracket(value, dir, witness))
        }
        BodyKind::Polytope { vertices } => {
            let mut best = f64::NEG_INFINITY;
            let mut best_v = &vertices[0];
            for v in vertices {
                let e = excess(cap, v);
                if e > best {
                    best = e;
                    best_v = v;
                }
            }
            let rel = geom::sub(best_v, center);
            let dir = arg_dir_for_linear(&rel, cap);
            Ok(exact_bracket(best, dir, best_v.clone()))
        }
        BodyKind::Hull { base, points } => {
            let mut acc = sup_excess_inner(base, cap, center, opts)?;
            for p in points {
                let e = excess(cap, p);
                if e > acc.lb {
                    let rel = geom::sub(p, center);
                    acc.arg_dir = arg_dir_for_linear(&rel, cap);
                    acc.witness = p.clone();
                    acc.lb = e;
                }
                acc.ub = acc.ub.max(e);
            }
            Ok(acc)
        }
        BodyKind::Rounded { base, phi } => {
            let mut inner = sup_excess_inner(base, cap, center, opts)?;
            inner.lb += phi;
            inner.ub += phi;
            inner.witness = geom::axpy(&inner.witness, *phi, &inner.arg_dir);
            Ok(inner)
        }
        _ => {
            let point = PointOracle(center);
            let region = Region::Cap {
                axis: cap.axis.as_slice().to_vec(),
                half_angle: cap.half_angle(),
            };
            sphere_max_diff(body, &point, &region, opts)
        }
    }
}

/// Direction in the cap of directions maximizing `⟨rel, ·⟩` (the argmax the
/// exact closed forms correspond to).
fn arg_dir_for_linear(rel: &[f64], cap: &CapSpec) -> Vec<f64> {
    let axis = cap.axis.as_slice();
    let n = geom::norm(rel);
    if n == 0.0 {
        return axis.to_vec();
    }
    let unit = geom::scale(rel, 1.0 / n);
    let ang = geom::angle_between_units(&unit, axis);
    let half = cap.half_angle();
    if ang <= half {
        return unit;
    }
    // Rotate `axis` toward `unit` by the cap half-angle, inside their 2-plane.
    let perp = geom::axpy(&unit, -flt::cos(ang), axis);
    match geom::normalize(&perp) {
        Some(p) => {
            let v = geom::axpy(&geom::scale(axis, flt::cos(half)), flt::sin(half), &p);
            geom::normalize(&v).unwrap_or_else(|| axis.to_vec())
        }
        None => axis.to_vec(),
    }
}

/// Whether `K` has the hat described by `cap`, certified within `tol`.
///
/// Precondition (checked): the tip is a point of `K` in the sense of the
/// support inequality `⟨x, −u⟩ ≤ h_K(−u) + tol`; tangency of the tip to the
/// hat boundary is automatic (`excess(x) = ε`).
pub fn has_hat(body: &ConvexBody, cap: &CapSpec, tol: f64) -> Result<HatVerdict> {
    if body.dim() != cap.dim() {
        return Err(Error::DimensionMismatch { expected: cap.dim(), got: body.dim() });
    }
    for dir in [cap.axis.neg(), cap.axis.clone()] {
        let h = body.support_raw(dir.as_slice());
        let tip_side = geom::dot(cap.tip(), dir.as_slice());
        if tip_side > h + tol {
            return Err(Error::Precondition(format!(
                "cap tip is not a point of the body (support check along ±axis: \
                 {tip_side} > {h} + tol)"
            )));
        }
    }
    let opts = SphereMaxOpts { tol: (0.25 * tol).max(1e-13), max_cells: 2_000_000 };
    let sup = sup_excess(body, cap, &opts)?;
    Ok(classify(&sup, cap.eps(), tol))
}

fn classify(sup: &MaxBracket, eps: f64, tol: f64) -> HatVerdict {
    if sup.ub <= eps + tol {
        HatVerdict::Holds
    } else if sup.lb > eps + tol {
        HatVerdict::Fails
    } else {
        HatVerdict::Indeterminate { gap: sup.gap() }
    }
}

/// Search options shared by the feasibility searches.
#[derive(Debug, Clone)]
pub struct SearchOpts {
    /// Directions on the axis net (720 in d=2, 4096 in d=3 by default).
    pub net_2d: usize,
    pub net_3d: usize,
    /// Rounds of shrinking pattern-search refinement.
    pub descent_rounds: usize,
    /// Zero tolerance for feasibility deficits, as a fraction of diam(K).
    pub zero_tol_scale: f64,
    /// Sphere-kernel budget per certified evaluation.
    pub kernel_cells: usize,
}

impl Default for SearchOpts {
    fn default() -> Self {
        SearchOpts {
            net_2d: 720,
            net_3d: 4096,
            descent_rounds: 26,
            zero_tol_scale: 1e-6,
            kernel_cells: 400_000,
        }
    }
}

impl SearchOpts {
    pub fn net(&self, dim: usize) -> usize {
        if dim == 2 {
            self.net_2d
        } else {
            self.net_3d
        }
    }

    pub fn zero_tol(&self, body: &ConvexBody) -> f64 {
        self.zero_tol_scale * body.diameter_bound().max(1e-9)
    }
}

/// Deficit of the hat anchored at the touching point of outward direction
/// `w`: `sup_excess − ε` (certified upper value). Feasible iff ≤ 0 within
/// the caller's zero tolerance.
pub fn tip_deficit(body: &ConvexBody, w: &[f64], eps: f64, delta: f64, opts: &SphereMaxOpts) -> f64 {
    let tip = body.support_point_raw(w);
    let axis = match Direction::new(w.to_vec()) {
        Ok(a) => a,
        Err(_) => return f64::INFINITY,
    };
    let cap = match CapSpec::new(tip, axis, eps, delta) {
        Ok(c) => c,
        Err(_) => return f64::INFINITY,
    };
    match sup_excess(body, &cap, opts) {
        Ok(b) => b.ub - eps,
        Err(_) => f64::INFINITY,
    }
}

/// Feasibility search for a hat of radius `ε` and angle `δ`: tips restricted
/// to touching points of net directions plus local refinement. Returns the
/// found `(tip, axis)` or `None` if nothing on the searched net qualifies.
pub fn find_hat(
    body: &ConvexBody,
    eps: f64,
    delta: f64,
    search: &SearchOpts,
) -> Result<Option<(Vec<f64>, Direction)>> {
    if !(eps > 0.0) {
        return Err(Error::InvalidInput("hat radius must be > 0".into()));
    }
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::InvalidInput("hat angle must be in (0, 1/2)".into()));
    }
    let dim = body.dim();
    let eta = search.zero_tol(body);
    let kopts = SphereMaxOpts { tol: (0.2 * eta).max(1e-12), max_cells: search.kernel_cells };

    let mut candidates = sampling::direction_net(dim, search.net(dim));
    for k in 0..dim {
        let mut e = alloc::vec![0.0; dim];
        e[k] = 1.0;
        candidates.push(e.clone());
        e[k] = -1.0;
        candidates.push(e);
    }
    let mut best_w: Option<Vec<f64>> = None;
    let mut best_deficit = f64::INFINITY;
    for w in &candidates {
        let d = tip_deficit(body, w, eps, delta, &kopts);
        if d < best_deficit {
            best_deficit = d;
            best_w = Some(w.clone());
        }
        if d <= eta {
            break;
        }
    }
    let Some(mut w) = best_w else {
        return Ok(None);
    };
    if best_deficit > eta {
        let step0 = 2.0 * core::f64::consts::PI / search.net(dim) as f64;
        let refined = pattern_descent(
            &w,
            step0.max(1e-3),
            search.descent_rounds,
            |cand| tip_deficit(body, cand, eps, delta, &kopts),
        );
        best_deficit = refined.1;
        w = refined.0;
    }
    if best_deficit <= eta {
        let axis = Direction::new(w.clone()).expect("net directions are unit");
        let tip = body.support_point_raw(&w);
        Ok(Some((tip, axis)))
    } else {
        Ok(None)
    }
}

/// Shrinking pattern search on the unit sphere, deterministic. Returns the
/// best direction and its score.
pub fn pattern_descent<F>(start: &[f64], step0: f64, rounds: usize, score: F) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let mut w = start.to_vec();
    let mut best = score(&w);
    let mut step = step0;
    for _ in 0..rounds {
        let basis = geom::tangent_basis(&w);
        let mut improved = false;
        for b in &basis {
            for sign in [1.0, -1.0] {
                let cand = geom::normalize(&geom::axpy(&w, sign * step, b));
                if let Some(cand) = cand {
                    let s = score(&cand);
                    if s < best {
                        best = s;
                        w = cand;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (w, best)
}

/// Witness produced by the hat-stability search.
#[derive(Debug, Clone)]
pub struct StabilityWitness {
    pub cap: CapSpec,
    /// Angle between the witness axis and the original axis.
    pub axis_angle: f64,
    /// `‖x − x'‖` between the original and witness tips.
    pub tip_displacement: f64,
    /// The proof-constant neighborhood radius `φ = Δ(1−cos Δπ)/3`.
    pub phi: f64,
    /// Pre-adjustment displacement bound `φ + Δ(ε+Δ)π`.
    pub displacement_bound: f64,
    /// Whether the strict `‖x−x'‖ < Δ` form held (recorded, not required).
    pub within_delta: bool,
}

/// Neighborhood radius from the stability theorem's proof.
pub fn stability_phi(delta_param: f64) -> f64 {
    delta_param * (1.0 - flt::cos(delta_param * core::f64::consts::PI)) / 3.0
}

/// Finds a verified hat for `perturbed` with parameters `(ε+Δ, δ−Δ)`, axis
/// within `Δ` of the original axis and tip displacement within the proof's
/// pre-adjustment bound. `K'` must lie within Pompeiu-Hausdorff distance
/// `φ = Δ(1−cos Δπ)/3` of `K`; the check is run unless the caller passes a
/// trusted bound.
pub fn stability_witness(
    body: &ConvexBody,
    cap: &CapSpec,
    delta_param: f64,
    perturbed: &ConvexBody,
    known_dph: Option<f64>,
    search: &SearchOpts,
) -> Result<StabilityWitness> {
    if !(delta_param > 0.0 && delta_param < cap.delta()) {
        return Err(Error::Precondition(format!(
            "Δ must lie in (0, δ); got Δ = {delta_param}, δ = {}",
            cap.delta()
        )));
    }
    let phi = stability_phi(delta_param);
    let dph = match known_dph {
        Some(d) => d,
        None => {
            let m = metric::hausdorff_distance(
                body,
                perturbed,
                &metric::HausdorffOpts { tol: (phi * 0.05).max(1e-9), max_cells: 4_000_000 },
            )?;
            m.value + m.error_bound
        }
    };
    if dph >= phi {
        return Err(Error::Precondition(format!(
            "perturbation too large: d_PH bound {dph} ≥ φ = {phi}"
        )));
    }
    let tol = 1e-9 * (1.0 + body.diameter_bound());
    match has_hat(body, cap, tol)? {
        HatVerdict::Holds => {}
        v => {
            return Err(Error::Precondition(format!(
                "base body does not have the given hat: {v:?}"
            )))
        }
    }

    let eps2 = cap.eps() + delta_param;
    let delta2 = cap.delta() - delta_param;
    let kopts = SphereMaxOpts { tol: 1e-11, max_cells: search.kernel_cells };
    let deficit = |w: &[f64]| tip_deficit(perturbed, w, eps2, delta2, &kopts);

    let u0 = cap.axis().as_slice().to_vec();
    let mut w = u0.clone();
    let mut best = deficit(&w);
    if best > 0.0 {
        // Shrinking cone search around the original axis, capped at Δ.
        let (wd, bd) = pattern_descent(&u0, 0.5 * delta_param, search.descent_rounds, |cand| {
            if geom::angle_between_units(cand, &u0) >= delta_param {
                f64::INFINITY
            } else {
                deficit(cand)
            }
        });
        if bd < best {
            best = bd;
            w = wd;
        }
    }
    if best > 0.0 {
        return Err(Error::SearchFailure(format!(
            "no stability witness found: best deficit {best} for (ε+Δ, δ−Δ) = ({eps2}, {delta2})"
        )));
    }
    let axis = Direction::new(w.clone()).expect("search directions are unit");
    let tip = perturbed.support_point_raw(&w);
    let witness_cap = CapSpec::new(tip.clone(), axis, eps2, delta2)?;
    match has_hat(perturbed, &witness_cap, tol)? {
        HatVerdict::Holds => {}
        v => {
            return Err(Error::SearchFailure(format!(
                "witness re-verification failed: {v:?}"
            )))
        }
    }
    let axis_angle = geom::angle_between_units(&w, &u0);
    let tip_displacement = geom::dist(&tip, cap.tip());
    let displacement_bound = phi + delta_param * (cap.eps() + delta_param) * core::f64::consts::PI;
    if axis_angle >= delta_param {
        return Err(Error::SearchFailure(format!(
            "witness axis deviates by {axis_angle} ≥ Δ = {delta_param}"
        )));
    }
    if tip_displacement > displacement_bound {
        return Err(Error::SearchFailure(format!(
            "witness tip displacement {tip_displacement} exceeds bound {displacement_bound}"
        )));
    }
    Ok(StabilityWitness {
        cap: witness_cap,
        axis_angle,
        tip_displacement,
        phi,
        displacement_bound,
        within_delta: tip_displacement < delta_param,
    })
}

/// A finite family of caps with shared tip and axis; radii strictly
/// decreasing and angles monotonically decreasing, as in the nesting lemma.
#[derive(Debug, Clone)]
pub struct CapFamily {
    tip: Vec<f64>,
    axis: Direction,
    params: Vec<(f64, f64)>,
}

impl CapFamily {
    pub fn new(tip: Vec<f64>, axis: Direction, params: Vec<(f64, f64)>) -> Result<Self> {
        if params.is_empty() {
            return Err(Error::InvalidInput("cap family needs at least one cap".into()));
        }
        for w in params.windows(2) {
            if !(w[1].0 < w[0].0) {
                return Err(Error::InvalidInput("cap radii must be strictly decreasing".into()));
            }
            if !(w[1].1 <= w[0].1) {
                return Err(Error::InvalidInput(
                    "cap angles must be monotonically decreasing".into(),
                ));
            }
        }
        for &(e, d) in &params {
            CapSpec::new(tip.clone(), axis.clone(), e, d)?;
        }
        Ok(CapFamily { tip, axis, params })
    }

    pub fn caps(&self) -> impl Iterator<Item = CapSpec> + '_ {
        self.params
            .iter()
            .map(move |&(e, d)| CapSpec::new(self.tip.clone(), self.axis.clone(), e, d).unwrap())
    }

    pub fn tip(&self) -> &[f64] {
        &self.tip
    }
    pub fn axis(&self) -> &Direction {
        &self.axis
    }
    pub fn params(&self) -> &[(f64, f64)] {
        &self.params
    }

    /// Membership in the intersection of the family's hats.
    pub fn contains(&self, y: &[f64]) -> bool {
        self.caps().all(|cap| excess(&cap, y) <= cap.eps())
    }

    /// Signed distance-like margin `max_i (excess_i(y) − ε_i)`.
    pub fn margin(&self, y: &[f64]) -> f64 {
        self.caps()
            .map(|cap| excess(&cap, y) - cap.eps())
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Report of the nesting check between two cap families.
#[derive(Debug, Clone)]
pub struct NestingReport {
    /// Points of the primed intersection found outside the unprimed one.
    pub inclusion_violations: Vec<Vec<f64>>,
    pub samples_checked: usize,
    /// Minimum pairwise distance between sampled boundary portions, taken
    /// outside the tip neighborhood on either side.
    pub min_boundary_distance: f64,
    pub boundary_samples: usize,
    /// Set when the strict-parameter-gap hypotheses fail (distance 0 expected).
    pub degenerate: bool,
}

/// Sampled check of the nesting lemma: the primed family (smaller radii,
/// larger angles) must be included in the unprimed one, and away from the tip
/// the two boundaries must keep positive distance.
pub fn nesting_check(
    fam: &CapFamily,
    fam_primed: &CapFamily,
    samples: usize,
    neighborhood_radius: f64,
    seed: u64,
) -> Result<NestingReport> {
    if fam.tip() != fam_primed.tip() || fam.axis() != fam_primed.axis() {
        return Err(Error::Precondition("families must share tip and axis".into()));
    }
    if fam.params().len() != fam_primed.params().len() {
        return Err(Error::Precondition("families must share the index set".into()));
    }
    let mut degenerate = false;
    for (p, q) in fam.params().iter().zip(fam_primed.params()) {
        if !(q.0 < p.0 && q.1 >= p.1) {
            degenerate = true;
        }
    }
    let dim = fam.tip().len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eps_max = fam.params()[0].0.max(fam_primed.params()[0].0);
    let window = 1.5 * eps_max;

    // Part (i): membership samples of the primed intersection.
    let mut violations = Vec::new();
    let mut checked = 0usize;
    let mut attempts = 0usize;
    while checked < samples && attempts < samples * 400 {
        attempts += 1;
        let p = geom::axpy(fam.tip(), window, &sampling::random_in_ball(&mut rng, dim));
        if !fam_primed.contains(&p) {
            continue;
        }
        checked += 1;
        if !fam.contains(&p) {
            violations.push(p);
        }
    }
    if checked < samples {
        return Err(Error::Sampling(format!(
            "only {checked}/{samples} member samples found in the window"
        )));
    }

    // Part (ii): ray-cast boundary points of each intersection from interior
    // anchor points, then the min cross distance outside the neighborhood.
    let n_rays = 800.min(samples.max(64));
    let bd = |family: &CapFamily, rng: &mut ChaCha8Rng| -> Vec<Vec<f64>> {
        let t = 0.5 * family.params().iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let p0 = geom::axpy(family.tip(), -t, family.axis().as_slice());
        debug_assert!(family.margin(&p0) < 0.0);
        let mut pts = Vec::new();
        for _ in 0..n_rays {
            let d = sampling::random_unit(rng, dim);
            // Margin is convex along the ray and negative at 0: a sign change
            // within the window gives a boundary crossing by bisection.
            let mut lo = 0.0;
            let mut hi = f64::NAN;
            let mut s = 2.0 * t;
            while s <= 4.0 * window {
                if family.margin(&geom::axpy(&p0, s, &d)) > 0.0 {
                    hi = s;
                    break;
                }
                lo = s;
                s *= 1.5;
            }
            if !hi.is_finite() {
                continue;
            }
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if family.margin(&geom::axpy(&p0, mid, &d)) > 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            pts.push(geom::axpy(&p0, 0.5 * (lo + hi), &d));
        }
        pts
    };
    let ba = bd(fam, &mut rng);
    let bb = bd(fam_primed, &mut rng);
    let far = |pts: &[Vec<f64>], tip: &[f64]| -> Vec<Vec<f64>> {
        pts.iter()
            .filter(|p| geom::dist(p, tip) > neighborhood_radius)
            .cloned()
            .collect()
    };
    let min_cross = |xs: &[Vec<f64>], ys: &[Vec<f64>]| -> f64 {
        let mut m = f64::INFINITY;
        for x in xs {
            for y in ys {
                m = m.min(geom::dist(x, y));
            }
        }
        m
    };
    let d1 = min_cross(&far(&ba, fam.tip()), &bb);
    let d2 = min_cross(&far(&bb, fam.tip()), &ba);
    Ok(NestingReport {
        inclusion_violations: violations,
        samples_checked: checked,
        min_boundary_distance: d1.min(d2),
        boundary_samples: ba.len() + bb.len(),
        degenerate,
    })
}

/// Convenience: string tag describing a verdict for reports.
pub fn verdict_tag(v: &HatVerdict) -> String {
    match v {
        HatVerdict::Holds => "holds".into(),
        HatVerdict::Fails => "fails".into(),
        HatVerdict::Indeterminate { .. } => "indeterminate".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn cap2(tip: [f64; 2], axis: [f64; 2], eps: f64, delta: f64) -> CapSpec {
        CapSpec::new(
            tip.to_vec(),
            Direction::normalized(axis.to_vec()).unwrap(),
            eps,
            delta,
        )
        .unwrap()
    }

    #[test]
    fn cap_validation() {
        assert!(CapSpec::new(vec![0.0, 0.0], Direction::axis(2, 1).unwrap(), 1.0, 0.5).is_err());
        assert!(CapSpec::new(vec![0.0, 0.0], Direction::axis(2, 1).unwrap(), 0.0, 0.3).is_err());
        assert!(CapSpec::new(vec![0.0, 0.0], Direction::axis(2, 1).unwrap(), 1.0, 0.3).is_ok());
    }

    #[test]
    fn excess_examples() {
        let cap = cap2([0.0, 0.0], [0.0, -1.0], 0.5, 0.25);
        // Tip lies exactly on the hat boundary.
        assert!((excess(&cap, &[0.0, 0.0]) - 0.5).abs() < 1e-14);
        // Center evaluates to zero.
        assert!(excess(&cap, &cap.center()).abs() < 1e-14);
        // Point on the unit circle about (0,1) at arc parameter 0.6.
        let y = [flt::sin(0.6), 1.0 - flt::cos(0.6)];
        let e = excess(&cap, &y);
        assert!((e - 0.629).abs() < 1e-3, "excess {e}");
        assert!(e > 0.5);
        // Cross-check against a dense net of cone directions.
        let c = cap.center();
        let mut brute = f64::NEG_INFINITY;
        for v in sampling::circle_net(100_000) {
            if geom::angle_between_units(&v, cap.axis().as_slice()) <= cap.half_angle() {
                brute = brute.max(geom::dot(&geom::sub(&y, &c), &v));
            }
        }
        assert!((e - brute).abs() < 1e-8);
    }

    #[test]
    fn excess_is_convex_and_lipschitz() {
        use rand::{Rng, SeedableRng};
        let cap = cap2([0.2, -0.1], [0.6, 0.8], 0.7, 0.31);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let y = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let z = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let l = rng.gen_range(0.0..1.0);
            let mid = [l * y[0] + (1.0 - l) * z[0], l * y[1] + (1.0 - l) * z[1]];
            let ey = excess(&cap, &y);
            let ez = excess(&cap, &z);
            assert!(excess(&cap, &mid) <= l * ey + (1.0 - l) * ez + 1e-12);
            assert!((ey - ez).abs() <= geom::dist(&y, &z) + 1e-12);
        }
    }

    #[test]
    fn has_hat_ball_examples() {
        let k = ConvexBody::ball(vec![0.0, 1.0], 1.0).unwrap();
        let good = cap2([0.0, 0.0], [0.0, -1.0], 1.0, 0.25);
        assert!(has_hat(&k, &good, 1e-9).unwrap().holds());
        let tight = cap2([0.0, 0.0], [0.0, -1.0], 0.5, 0.25);
        assert_eq!(has_hat(&k, &tight, 1e-9).unwrap(), HatVerdict::Fails);
    }

    #[test]
    fn has_hat_triangle_example() {
        let k = ConvexBody::polytope(vec![vec![0.0, 0.0], vec![-0.1, 1.0], vec![0.1, 1.0]])
            .unwrap();
        let cap = cap2([0.0, 0.0], [0.0, -1.0], 0.05, 0.2);
        assert!(has_hat(&k, &cap, 1e-9).unwrap().holds());
        for v in [[-0.1, 1.0], [0.1, 1.0]] {
            assert!(excess(&cap, &v) < 0.0);
        }
    }

    #[test]
    fn has_hat_rejects_detached_tip() {
        let k = ConvexBody::ball(vec![0.0, 1.0], 1.0).unwrap();
        let cap = cap2([0.0, -0.5], [0.0, -1.0], 1.0, 0.25);
        assert!(matches!(has_hat(&k, &cap, 1e-9), Err(Error::Precondition(_))));
    }

    #[test]
    fn definition_consistency_bodies_with_cap_in_boundary() {
        // Bodies constructed to contain the cap in their boundary must have
        // the hat: the ε-ball itself and its intersections with halfspaces
        // through the cap rim (represented by inscribed polytopes).
        let cap = cap2([0.0, 0.0], [0.0, -1.0], 0.8, 0.3);
        let c = cap.center();
        let ball = ConvexBody::ball(c.clone(), 0.8).unwrap();
        assert!(has_hat(&ball, &cap, 1e-9).unwrap().holds());
        // Inscribed polytope with all vertices on the cap plus deep points.
        let mut pts = Vec::new();
        let half = cap.half_angle();
        for i in 0..=16 {
            let t = -half + 2.0 * half * (i as f64) / 16.0;
            // Directions around the axis.
            let v = [
                flt::sin(t) * 1.0,
                -flt::cos(t),
            ];
            pts.push(geom::axpy(&c, 0.8, &v));
        }
        pts.push(c.clone());
        let poly = ConvexBody::polytope(pts).unwrap();
        assert!(has_hat(&poly, &cap, 1e-9).unwrap().holds());
    }

    #[test]
    fn hat_monotonicity_sampled() {
        use rand::{Rng, SeedableRng};
        let big = cap2([0.0, 0.0], [0.0, -1.0], 1.0, 0.2);
        let small = cap2([0.0, 0.0], [0.0, -1.0], 0.6, 0.3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            let y = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
            if excess(&small, &y) <= small.eps() {
                assert!(excess(&big, &y) <= big.eps() + 1e-12);
            }
        }
    }

    #[test]
    fn find_hat_on_ball() {
        let k = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
        let search = SearchOpts::default();
        let hit = find_hat(&k, 1.0, 0.3, &search).unwrap();
        let (tip, axis) = hit.expect("radius-1 hat must exist on the unit ball");
        assert!((geom::norm(&tip) - 1.0).abs() < 1e-9);
        assert!(geom::dist(&tip, axis.as_slice()) < 1e-9);
        assert!(find_hat(&k, 0.5, 0.3, &search).unwrap().is_none());
    }

    #[test]
    fn find_hat_revolution_pole() {
        let k = ConvexBody::revolution(1.5, 1.0, 2).unwrap();
        let search = SearchOpts::default();
        let (tip, axis) = find_hat(&k, 0.1, 0.1, &search)
            .unwrap()
            .expect("pole hat must exist for p = 1.5");
        assert!(geom::norm(&tip) < 1e-6, "tip {tip:?}");
        assert!(geom::angle_between_units(axis.as_slice(), &[0.0, -1.0]) < 1e-3);
    }

    #[test]
    fn stability_witness_zero_perturbation() {
        let k = ConvexBody::ball(vec![0.0, 1.0], 1.0).unwrap();
        let cap = cap2([0.0, 0.0], [0.0, -1.0], 1.0, 0.3);
        let w = stability_witness(&k, &cap, 0.1, &k, Some(0.0), &SearchOpts::default()).unwrap();
        assert!(w.axis_angle < 1e-12);
        assert!(w.tip_displacement < 1e-12);
        assert!((w.phi - 0.1 * (1.0 - flt::cos(0.1 * core::f64::consts::PI)) / 3.0).abs() < 1e-15);
    }

    #[test]
    fn stability_phi_matches_reported_value() {
        // Δ = 0.1 gives φ ≈ 0.001631.
        assert!((stability_phi(0.1) - 0.001631).abs() < 2e-6);
    }

    #[test]
    fn nesting_single_cap_inclusion() {
        let tip = vec![0.0, 0.0];
        let axis = Direction::normalized(vec![0.0, -1.0]).unwrap();
        let fam = CapFamily::new(tip.clone(), axis.clone(), vec![(1.0, 0.25)]).unwrap();
        let fam2 = CapFamily::new(tip, axis, vec![(0.5, 0.25)]).unwrap();
        let rep = nesting_check(&fam, &fam2, 10_000, 0.05, 42).unwrap();
        assert!(rep.inclusion_violations.is_empty());
        assert!(rep.min_boundary_distance > 0.0);
        assert!(!rep.degenerate);
    }

    #[test]
    fn nesting_identical_families_degenerate() {
        let tip = vec![0.0, 0.0];
        let axis = Direction::normalized(vec![0.0, -1.0]).unwrap();
        let fam = CapFamily::new(tip.clone(), axis.clone(), vec![(1.0, 0.25)]).unwrap();
        let rep = nesting_check(&fam, &fam.clone(), 2_000, 0.05, 42).unwrap();
        assert!(rep.degenerate);
        assert!(rep.inclusion_violations.is_empty());
    }

    #[test]
    fn nesting_two_cap_families() {
        let tip = vec![0.0, 0.0];
        let axis = Direction::normalized(vec![0.0, -1.0]).unwrap();
        let fam = CapFamily::new(tip.clone(), axis.clone(), vec![(1.0, 0.3), (0.5, 0.25)]).unwrap();
        let fam2 = CapFamily::new(tip, axis, vec![(0.9, 0.35), (0.4, 0.3)]).unwrap();
        let rep = nesting_check(&fam, &fam2, 10_000, 0.05, 7).unwrap();
        assert!(rep.inclusion_violations.is_empty());
        assert!(rep.min_boundary_distance > 0.0, "distance {}", rep.min_boundary_distance);
    }
}
