//! Classical directional curvature from osculating radii.
//!
//! For a boundary point `x` with inward normal `ν` and tangent `τ`, boundary
//! points `z` of the planar section through `(ν, τ)` define osculating radii
//! `r_z = ‖z−x‖² / (2⟨z−x, ν⟩)`, whose tail behavior over a geometric scale
//! ladder estimates the lower/upper directional curvatures. Closed-form
//! bodies evaluate the section height `λ(μ)` analytically in the local frame
//! so `r_z` stays stable down to scales of 1e−8; other variants fall back to
//! membership bisection at coarser scales.

use alloc::format;
use alloc::vec::Vec;

use crate::body::{distance_to_body, BodyKind, ConvexBody};
use crate::error::{Error, Result};
use crate::geom::flt;
use crate::geom::{self, Direction};
use crate::hat::{has_hat, CapSpec};

/// Radius of the circle through `x` and `z` centered on the inward normal
/// ray at `x`. The chord identity `‖z−x−rν‖ = r` gives
/// `r = ‖z−x‖² / (2⟨z−x, ν⟩)`; no circle exists when `⟨z−x, ν⟩ ≤ 0`.
pub fn osculating_radius(x: &[f64], nu: &Direction, z: &[f64]) -> Result<f64> {
    if x.len() != nu.dim() || z.len() != x.len() {
        return Err(Error::DimensionMismatch { expected: nu.dim(), got: z.len() });
    }
    let d = geom::sub(z, x);
    let h = geom::dot(&d, nu.as_slice());
    if h <= 0.0 {
        return Err(Error::UndefinedRadius);
    }
    Ok(geom::dot(&d, &d) / (2.0 * h))
}

/// Geometric scale ladder `t_k = t0 · 2^{−k}` floored below.
#[derive(Debug, Clone)]
pub struct Ladder {
    pub t0: f64,
    pub halvings: usize,
    pub floor: f64,
}

impl Ladder {
    pub fn for_body(body: &ConvexBody) -> Ladder {
        let diam = body.diameter_bound().max(1e-9);
        Ladder { t0: 0.1 * diam, halvings: 40, floor: 1e-9 * diam }
    }

    pub fn with_floor(body: &ConvexBody, floor: f64) -> Ladder {
        let mut l = Ladder::for_body(body);
        l.floor = floor;
        let mut t = l.t0;
        let mut n = 0;
        while t * 0.5 >= floor && n < 80 {
            t *= 0.5;
            n += 1;
        }
        l.halvings = n;
        l
    }

    pub fn scales(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.halvings + 1);
        let mut t = self.t0;
        for _ in 0..=self.halvings {
            if t < self.floor {
                break;
            }
            out.push(t);
            t *= 0.5;
        }
        out
    }
}

/// Section height at tangential offset `μ`: the boundary's distance above
/// the tangent line, measured along `ν`, inside the 2-plane `(ν, τ)` at `x`.
enum SectionHeight {
    /// Exact closed-form height.
    Value(f64),
    /// The boundary is flat here (height exactly zero).
    Flat,
    /// No boundary point in the quadrant at this offset.
    Outside,
}

/// Analytic or fallback evaluator of the planar section through `x`.
struct SectionCurve<'a> {
    body: &'a ConvexBody,
    x: &'a [f64],
    nu: &'a [f64],
    tau: &'a [f64],
}

impl SectionCurve<'_> {
    fn height(&self, mu: f64) -> Result<SectionHeight> {
        match self.body.kind() {
            BodyKind::Ball { center, radius } => {
                let r = *radius;
                // Validate the frame: x on the sphere, ν toward the center.
                let to_center = geom::sub(center, self.x);
                if flt::abs(geom::norm(&to_center) - r) > 1e-7 * r
                    || geom::angle_between_units(
                        &geom::scale(&to_center, 1.0 / geom::norm(&to_center)),
                        self.nu,
                    ) > 1e-7
                {
                    return self.height_by_membership(mu);
                }
                if flt::abs(mu) >= r {
                    return Ok(SectionHeight::Outside);
                }
                let root = flt::sqrt(r * r - mu * mu);
                Ok(SectionHeight::Value(mu * mu / (r + root)))
            }
            BodyKind::Ellipsoid { center, semi_axes } => {
                // In-plane conic: A λ² + (Bμ + D) λ + (Cμ² + Eμ + F) = 0 with
                // F ≈ 0 (x on the boundary) and E ≈ 0 (τ tangent).
                let mut a = 0.0;
                let mut b = 0.0;
                let mut c = 0.0;
                let mut dd = 0.0;
                let mut e = 0.0;
                let mut f = -1.0;
                for i in 0..semi_axes.len() {
                    let inv = 1.0 / (semi_axes[i] * semi_axes[i]);
                    let xc = self.x[i] - center[i];
                    a += self.nu[i] * self.nu[i] * inv;
                    b += 2.0 * self.nu[i] * self.tau[i] * inv;
                    c += self.tau[i] * self.tau[i] * inv;
                    dd += 2.0 * xc * self.nu[i] * inv;
                    e += 2.0 * xc * self.tau[i] * inv;
                    f += xc * xc * inv;
                }
                if flt::abs(f) > 1e-9 || flt::abs(e) > 1e-9 {
                    return self.height_by_membership(mu);
                }
                let bb = b * mu + dd;
                let cc = c * mu * mu + e * mu + f;
                let disc = bb * bb - 4.0 * a * cc;
                if disc < 0.0 {
                    return Ok(SectionHeight::Outside);
                }
                // Stable small root: product/big-root form avoids the
                // catastrophic cancellation at tiny μ.
                let sd = flt::sqrt(disc);
                let q = -0.5 * (bb + if bb >= 0.0 { sd } else { -sd });
                let (r1, r2) = (q / a, if q != 0.0 { cc / q } else { 0.0 });
                let lam = if r1 >= 0.0 && r2 >= 0.0 {
                    r1.min(r2)
                } else {
                    r1.max(r2)
                };
                if lam < 0.0 {
                    return Ok(SectionHeight::Outside);
                }
                Ok(SectionHeight::Value(lam))
            }
            BodyKind::Revolution { exponent, height, dim } => {
                // Analytic at the pole with ν along the axis.
                let mut axis = alloc::vec![0.0; *dim];
                axis[*dim - 1] = 1.0;
                if geom::norm(self.x) < 1e-12
                    && geom::angle_between_units(self.nu, &axis) < 1e-9
                {
                    let rim = flt::powf(*height, 1.0 / *exponent);
                    if flt::abs(mu) > rim {
                        return Ok(SectionHeight::Outside);
                    }
                    Ok(SectionHeight::Value(flt::powf(flt::abs(mu), *exponent)))
                } else {
                    self.height_by_membership(mu)
                }
            }
            _ => self.height_by_membership(mu),
        }
    }

    /// Membership-bisection fallback; exact flats are detected by the point
    /// at height zero lying inside the body.
    fn height_by_membership(&self, mu: f64) -> Result<SectionHeight> {
        let tol = 1e-12 * (1.0 + self.body.circumradius());
        let member = |lam: f64| -> bool {
            let p = geom::axpy(&geom::axpy(self.x, mu, self.tau), lam, self.nu);
            self.member(&p, tol)
        };
        if member(0.0) {
            return Ok(SectionHeight::Flat);
        }
        let mut hi = flt::abs(mu).max(1e-6);
        let mut found = false;
        for _ in 0..60 {
            if member(hi) {
                found = true;
                break;
            }
            hi *= 1.6;
            if hi > 4.0 * self.body.diameter_bound() {
                break;
            }
        }
        if !found {
            return Ok(SectionHeight::Outside);
        }
        let mut lo = 0.0;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if member(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(SectionHeight::Value(0.5 * (lo + hi)))
    }

    fn member(&self, p: &[f64], tol: f64) -> bool {
        match self.body.kind() {
            BodyKind::Ball { center, radius } => geom::dist(p, center) <= radius + tol,
            BodyKind::Ellipsoid { center, semi_axes } => {
                let mut q = 0.0;
                for i in 0..semi_axes.len() {
                    let t = (p[i] - center[i]) / semi_axes[i];
                    q += t * t;
                }
                q <= 1.0 + tol
            }
            BodyKind::Revolution { exponent, height, dim } => {
                let s = p[*dim - 1];
                let mut w = 0.0;
                for v in &p[..*dim - 1] {
                    w += v * v;
                }
                let t = flt::sqrt(w);
                let cap = crate::body::RevolutionCap::derive(*exponent, *height);
                let in_bowl = t <= cap.ring_t + tol
                    && s >= flt::powf(t, *exponent) - tol
                    && s <= height + tol;
                let in_cap = flt::hypot(t, s - cap.center_s) <= cap.radius + tol;
                in_bowl || in_cap
            }
            BodyKind::Rounded { base, phi } => distance_to_body(base, p, 3000) <= phi + tol,
            _ => distance_to_body(self.body, p, 3000) <= tol,
        }
    }
}

/// Per-direction curvature estimate from a ladder of osculating radii.
#[derive(Debug, Clone)]
pub struct DirectionalCurvature {
    /// `κ_i^τ = 1/ρ_s^τ` (reciprocal of the max tail radius).
    pub kappa_lower: f64,
    /// `κ_s^τ = 1/ρ_i^τ` (reciprocal of the min tail radius).
    pub kappa_upper: f64,
    /// `(scale, r_z)` pairs actually sampled; infinite radii are recorded.
    pub radii: Vec<(f64, f64)>,
}

const TAIL_WINDOW: usize = 8;

/// Threshold factors for reporting curvature 0 / ∞ (relative to diameter).
const RADIUS_HUGE_FACTOR: f64 = 1e7;
const RADIUS_TINY_FACTOR: f64 = 1e-7;

/// Directional curvature estimates `(κ_i^τ, κ_s^τ)` at `x` along `τ`.
pub fn directional_curvature(
    body: &ConvexBody,
    x: &[f64],
    nu: &Direction,
    tau: &Direction,
    ladder: &Ladder,
) -> Result<DirectionalCurvature> {
    if x.len() != body.dim() || nu.dim() != body.dim() || tau.dim() != body.dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), got: x.len() });
    }
    if flt::abs(geom::dot(nu.as_slice(), tau.as_slice())) > 1e-9 {
        return Err(Error::Precondition("τ must be orthogonal to ν".into()));
    }
    let section = SectionCurve { body, x, nu: nu.as_slice(), tau: tau.as_slice() };
    let mut radii: Vec<(f64, f64)> = Vec::new();
    for mu in ladder.scales() {
        match section.height(mu)? {
            SectionHeight::Value(lam) => {
                if lam <= 0.0 {
                    radii.push((mu, f64::INFINITY));
                } else {
                    radii.push((mu, (mu * mu + lam * lam) / (2.0 * lam)));
                }
            }
            SectionHeight::Flat => radii.push((mu, f64::INFINITY)),
            SectionHeight::Outside => continue,
        }
    }
    if radii.is_empty() {
        return Err(Error::Sampling(format!(
            "no boundary intersection in the quadrant at any ladder scale (t0 = {})",
            ladder.t0
        )));
    }
    let tail: Vec<f64> = radii
        .iter()
        .rev()
        .take(TAIL_WINDOW)
        .map(|&(_, r)| r)
        .collect();
    let diam = body.diameter_bound();
    let rho_s = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let rho_i = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let to_kappa = |rho: f64| -> f64 {
        if rho >= RADIUS_HUGE_FACTOR * diam {
            0.0
        } else if rho <= RADIUS_TINY_FACTOR * diam {
            f64::INFINITY
        } else {
            1.0 / rho
        }
    };
    Ok(DirectionalCurvature {
        kappa_lower: to_kappa(rho_s),
        kappa_upper: to_kappa(rho_i),
        radii,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExistenceVerdict {
    Exists { kappa: f64 },
    DoesNotExist { gap: f64 },
    Indeterminate { reason: alloc::string::String },
}

/// Point-wise curvature aggregated over tangent directions.
#[derive(Debug, Clone)]
pub struct CurvatureEstimate {
    pub point: Vec<f64>,
    pub normal: Direction,
    pub directions: Vec<(Direction, f64, f64)>,
    /// `κ_i = inf_τ κ_i^τ`, `κ_s = sup_τ κ_s^τ`.
    pub kappa_i: f64,
    pub kappa_s: f64,
    pub verdict: ExistenceVerdict,
    pub scales: Vec<f64>,
}

/// Relative gap below which the curvature is declared to exist.
pub const EXISTENCE_GAP: f64 = 1e-2;

pub fn point_curvature(
    body: &ConvexBody,
    x: &[f64],
    nu: &Direction,
    n_directions: usize,
    ladder: &Ladder,
) -> Result<CurvatureEstimate> {
    let dim = body.dim();
    let basis = geom::tangent_basis(nu.as_slice());
    let dirs: Vec<Direction> = if dim == 2 {
        let t = Direction::new(basis[0].clone())?;
        alloc::vec![t.clone(), t.neg()]
    } else {
        (0..n_directions.max(2))
            .map(|k| {
                let ang = core::f64::consts::TAU * (k as f64) / (n_directions.max(2) as f64);
                let v = geom::axpy(
                    &geom::scale(&basis[0], flt::cos(ang)),
                    flt::sin(ang),
                    &basis[1],
                );
                Direction::normalized(v).expect("tangent direction")
            })
            .collect()
    };
    let mut per_dir = Vec::with_capacity(dirs.len());
    let mut kappa_i = f64::INFINITY;
    let mut kappa_s: f64 = 0.0;
    for tau in dirs {
        let d = directional_curvature(body, x, nu, &tau, ladder)?;
        if d.kappa_lower > d.kappa_upper + 1e-12 {
            return Err(Error::Sampling("reciprocity violated in tail window".into()));
        }
        kappa_i = kappa_i.min(d.kappa_lower);
        kappa_s = kappa_s.max(d.kappa_upper);
        per_dir.push((tau, d.kappa_lower, d.kappa_upper));
    }
    let verdict = existence_verdict(kappa_i, kappa_s);
    Ok(CurvatureEstimate {
        point: x.to_vec(),
        normal: nu.clone(),
        directions: per_dir,
        kappa_i,
        kappa_s,
        verdict,
        scales: ladder.scales(),
    })
}

fn existence_verdict(kappa_i: f64, kappa_s: f64) -> ExistenceVerdict {
    if kappa_i.is_infinite() && kappa_s.is_infinite() {
        return ExistenceVerdict::Exists { kappa: f64::INFINITY };
    }
    if kappa_i == 0.0 && kappa_s == 0.0 {
        return ExistenceVerdict::Exists { kappa: 0.0 };
    }
    if kappa_s.is_infinite() || kappa_i == 0.0 {
        return ExistenceVerdict::DoesNotExist { gap: f64::INFINITY };
    }
    let gap = (kappa_s - kappa_i) / kappa_s.max(1e-300);
    if gap <= EXISTENCE_GAP {
        ExistenceVerdict::Exists { kappa: 0.5 * (kappa_i + kappa_s) }
    } else {
        ExistenceVerdict::DoesNotExist { gap }
    }
}

/// Report of the hat-curvature bound `κ_i(x) ≥ 1/ε` at a verified hat tip.
#[derive(Debug, Clone)]
pub struct HatBoundReport {
    pub kappa_i_estimate: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Checks the hat-curvature inequality at the cap tip. The cap must be a
/// verified hat of the body; the tip's inward normal is the negated axis.
pub fn hat_bound_check(
    body: &ConvexBody,
    cap: &CapSpec,
    ladder: &Ladder,
    tolerance: f64,
) -> Result<HatBoundReport> {
    let tol = 1e-9 * (1.0 + body.diameter_bound());
    if !has_hat(body, cap, tol)?.holds() {
        return Err(Error::Precondition("cap is not a verified hat of the body".into()));
    }
    let nu = cap.axis().neg();
    let est = point_curvature(body, cap.tip(), &nu, 8, ladder)?;
    let threshold = 1.0 / cap.eps() - tolerance;
    Ok(HatBoundReport {
        kappa_i_estimate: est.kappa_i,
        threshold,
        pass: est.kappa_i >= threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn dirv(v: &[f64]) -> Direction {
        Direction::normalized(v.to_vec()).unwrap()
    }

    #[test]
    fn osculating_radius_on_sphere_is_exact() {
        let nu = dirv(&[0.0, 1.0]);
        let x = [0.0, 0.0];
        for r in [0.5, 2.0] {
            for t in [1e-6_f64, 1e-3, 0.3] {
                // Circle of radius r tangent at origin, inward normal +e2;
                // 1−cos t evaluated as 2sin²(t/2) to keep z−x exact.
                let s = flt::sin(0.5 * t);
                let z = [r * flt::sin(t), 2.0 * r * s * s];
                let rad = osculating_radius(&x, &nu, &z).unwrap();
                assert!((rad - r).abs() < 1e-9, "r_z = {rad} vs {r} at t = {t}");
            }
        }
        // Independent oracle: bisection on g(r) = ‖z − x − rν‖ − r.
        let z = [2.0 * flt::sin(0.2), 2.0 * (1.0 - flt::cos(0.2))];
        let g = |r: f64| geom::dist(&z, &geom::scale(nu.as_slice(), r)) - r;
        let mut lo = 1e-6;
        let mut hi = 100.0;
        assert!(g(lo) > 0.0 && g(hi) < 0.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        let formula = osculating_radius(&[0.0, 0.0], &nu, &z).unwrap();
        assert!((oracle - formula).abs() < 1e-9);
    }

    #[test]
    fn osculating_radius_profiles() {
        let nu = dirv(&[0.0, 1.0]);
        // Parabola t ↦ t²/2: r_z = 1 + t²/4 → 1.
        for t in [1e-4, 1e-2] {
            let z = [t, 0.5 * t * t];
            let r = osculating_radius(&[0.0, 0.0], &nu, &z).unwrap();
            assert!((r - (1.0 + 0.25 * t * t)).abs() < 1e-10);
        }
        // Profile t ↦ t^{3/2}: r_z ≈ √t/2 → 0.
        let t: f64 = 1e-6;
        let z = [t, flt::powf(t, 1.5)];
        let r = osculating_radius(&[0.0, 0.0], &nu, &z).unwrap();
        assert!((r - 0.5 * flt::sqrt(t) * (1.0 + t)).abs() < 1e-12);
        // No admissible circle on the outward side.
        assert!(matches!(
            osculating_radius(&[0.0, 0.0], &nu, &[0.1, -0.1]),
            Err(Error::UndefinedRadius)
        ));
    }

    #[test]
    fn circle_curvature() {
        let k = ConvexBody::ball(vec![0.0, 2.0], 2.0).unwrap();
        let nu = dirv(&[0.0, 1.0]);
        let tau = dirv(&[1.0, 0.0]);
        let l = Ladder::for_body(&k);
        let d = directional_curvature(&k, &[0.0, 0.0], &nu, &tau, &l).unwrap();
        assert!((d.kappa_lower - 0.5).abs() < 1e-3);
        assert!((d.kappa_upper - 0.5).abs() < 1e-3);
    }

    #[test]
    fn ellipse_major_vertex_curvature() {
        let k = ConvexBody::ellipsoid(vec![0.0, 0.0], vec![2.0, 1.0]).unwrap();
        let nu = dirv(&[-1.0, 0.0]);
        let tau = dirv(&[0.0, 1.0]);
        let l = Ladder::for_body(&k);
        let d = directional_curvature(&k, &[2.0, 0.0], &nu, &tau, &l).unwrap();
        // κ = a/b² = 2 at the major vertex.
        assert!((d.kappa_lower - 2.0).abs() < 1e-2, "κ_i {}", d.kappa_lower);
        assert!((d.kappa_upper - 2.0).abs() < 1e-2);
    }

    #[test]
    fn stadium_flat_side_has_zero_curvature() {
        let rect = ConvexBody::polytope(vec![
            vec![-1.0, -0.5],
            vec![1.0, -0.5],
            vec![1.0, 0.5],
            vec![-1.0, 0.5],
        ])
        .unwrap();
        let stadium = rect.minkowski_ball(0.5).unwrap();
        let nu = dirv(&[0.0, -1.0]);
        let tau = dirv(&[1.0, 0.0]);
        let l = Ladder::for_body(&stadium);
        let d = directional_curvature(&stadium, &[0.0, 1.0], &nu, &tau, &l).unwrap();
        assert_eq!(d.kappa_lower, 0.0);
        assert_eq!(d.kappa_upper, 0.0);
    }

    #[test]
    fn sphere_curvature_exists() {
        let k = ConvexBody::ball(vec![0.0, 0.0, 0.0], 1.0).unwrap();
        let nu = dirv(&[0.0, 0.0, -1.0]);
        let l = Ladder::for_body(&k);
        let est = point_curvature(&k, &[0.0, 0.0, 1.0], &nu, 8, &l).unwrap();
        match est.verdict {
            ExistenceVerdict::Exists { kappa } => assert!((kappa - 1.0).abs() < 1e-6),
            ref v => panic!("expected existence, got {v:?}"),
        }
        assert!((est.kappa_i - 1.0).abs() < 1e-6);
        assert!((est.kappa_s - 1.0).abs() < 1e-6);
    }

    #[test]
    fn ellipsoid_umbilical_fixture() {
        let k = ConvexBody::ellipsoid(vec![0.0, 0.0, 0.0], vec![2.0, 1.0, 1.0]).unwrap();
        let nu = dirv(&[-1.0, 0.0, 0.0]);
        let l = Ladder::for_body(&k);
        let est = point_curvature(&k, &[2.0, 0.0, 0.0], &nu, 8, &l).unwrap();
        assert!((est.kappa_i - 2.0).abs() < 1e-2);
        assert!((est.kappa_s - 2.0).abs() < 1e-2);
        assert!(matches!(est.verdict, ExistenceVerdict::Exists { .. }));
    }

    #[test]
    fn revolution_pole_blows_up() {
        let k = ConvexBody::revolution(1.5, 1.0, 2).unwrap();
        let nu = dirv(&[0.0, 1.0]);
        let l = Ladder::with_floor(&k, 1e-8);
        let est = point_curvature(&k, &[0.0, 0.0], &nu, 2, &l).unwrap();
        assert!(est.kappa_i >= 1e3, "κ_i = {}", est.kappa_i);
    }

    #[test]
    fn monotone_ladder_refinement() {
        // Adding smaller scales must not increase κ_i beyond the error band.
        let k = ConvexBody::ellipsoid(vec![0.0, 0.0], vec![1.5, 1.0]).unwrap();
        let nu = dirv(&[-1.0, 0.0]);
        let tau = dirv(&[0.0, 1.0]);
        let coarse = Ladder { t0: 0.3, halvings: 20, floor: 1e-7 };
        let fine = Ladder { t0: 0.3, halvings: 30, floor: 1e-9 };
        let a = directional_curvature(&k, &[1.5, 0.0], &nu, &tau, &coarse).unwrap();
        let b = directional_curvature(&k, &[1.5, 0.0], &nu, &tau, &fine).unwrap();
        assert!(b.kappa_lower <= a.kappa_lower + 1e-2);
    }

    #[test]
    fn hat_bound_on_balls() {
        let k = ConvexBody::ball(vec![0.0, 1.0], 1.0).unwrap();
        let l = Ladder::for_body(&k);
        // ε = 1: equality case.
        let cap = CapSpec::new(vec![0.0, 0.0], dirv(&[0.0, -1.0]), 1.0, 0.25).unwrap();
        let rep = hat_bound_check(&k, &cap, &l, 1e-3).unwrap();
        assert!(rep.pass, "κ_i {} vs threshold {}", rep.kappa_i_estimate, rep.threshold);
        // ε = 2: slack case.
        let cap = CapSpec::new(vec![0.0, 0.0], dirv(&[0.0, -1.0]), 2.0, 0.25).unwrap();
        let rep = hat_bound_check(&k, &cap, &l, 1e-3).unwrap();
        assert!(rep.pass);
        // Precondition failure when the cap is not a hat.
        let bad = CapSpec::new(vec![0.0, 0.0], dirv(&[0.0, -1.0]), 0.5, 0.25).unwrap();
        assert!(matches!(
            hat_bound_check(&k, &bad, &l, 1e-3),
            Err(Error::Precondition(_))
        ));
    }
}
