//! Convex bodies behind a support-function oracle.
//!
//! Every variant answers two queries exactly or with stated accuracy:
//! `support(u) = max_{y∈K} ⟨y,u⟩` and a maximizing boundary point. All other
//! machinery (Hausdorff distance, hats, indicators) reduces to these.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geom::flt;
use crate::geom::{self, Direction};

/// Variant payload of a convex body.
#[derive(Debug, Clone, PartialEq)]
pub enum BodyKind {
    /// Euclidean ball.
    Ball { center: Vec<f64>, radius: f64 },
    /// Axis-aligned ellipsoid.
    Ellipsoid { center: Vec<f64>, semi_axes: Vec<f64> },
    /// V-polytope; vertex list is irredundant after construction.
    Polytope { vertices: Vec<Vec<f64>> },
    /// Body of revolution around the last coordinate axis, pole at the
    /// origin: the profile bowl `{(w, s) : ‖w‖^p ≤ s ≤ h}` closed off above
    /// `s = h` by the tangent sphere through the transition ring, so the
    /// boundary is C¹ and strictly convex everywhere except possibly the
    /// pole. For p ∈ (1,2) the pole has infinite curvature, for p > 2 zero.
    Revolution { exponent: f64, height: f64, dim: usize },
    /// Convex hull of a base body with extra points.
    Hull { base: Box<ConvexBody>, points: Vec<Vec<f64>> },
    /// Minkowski sum with a ball: support is `h_base + phi`.
    Rounded { base: Box<ConvexBody>, phi: f64 },
}

/// Immutable convex body with cached ambient data.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexBody {
    kind: BodyKind,
    dim: usize,
    /// `max_{y∈K} ‖y‖`: Lipschitz constant of the support function.
    circumradius: f64,
    strictly_convex: bool,
}

impl ConvexBody {
    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        let dim = center.len();
        if dim < 2 {
            return Err(Error::InvalidInput("ball needs dimension ≥ 2".into()));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidInput(format!("ball radius must be > 0, got {radius}")));
        }
        let circumradius = geom::norm(&center) + radius;
        Ok(ConvexBody {
            kind: BodyKind::Ball { center, radius },
            dim,
            circumradius,
            strictly_convex: true,
        })
    }

    pub fn ellipsoid(center: Vec<f64>, semi_axes: Vec<f64>) -> Result<Self> {
        let dim = semi_axes.len();
        if dim < 2 {
            return Err(Error::InvalidInput("ellipsoid needs dimension ≥ 2".into()));
        }
        if center.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: center.len() });
        }
        if semi_axes.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
            return Err(Error::InvalidInput("ellipsoid semi-axes must be > 0".into()));
        }
        let amax = semi_axes.iter().cloned().fold(0.0, f64::max);
        let circumradius = geom::norm(&center) + amax;
        Ok(ConvexBody {
            kind: BodyKind::Ellipsoid { center, semi_axes },
            dim,
            circumradius,
            strictly_convex: true,
        })
    }

    /// Builds a polytope from an arbitrary point cloud; redundant points
    /// (inside the hull of the others) are dropped. In the plane the hull is
    /// recomputed exactly and vertices are stored in counterclockwise order.
    pub fn polytope(points: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("polytope needs at least one vertex".into()));
        }
        let dim = points[0].len();
        if dim < 2 {
            return Err(Error::InvalidInput("polytope needs dimension ≥ 2".into()));
        }
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::InvalidInput("polytope vertices of mixed dimension".into()));
        }
        let vertices = if dim == 2 {
            convex_hull_2d(&points)
        } else {
            irredundant_vertices(&points)
        };
        if vertices.len() < dim + 1 {
            return Err(Error::InvalidInput(
                "polytope is degenerate (needs nonempty interior)".into(),
            ));
        }
        let circumradius = vertices.iter().map(|v| geom::norm(v)).fold(0.0, f64::max);
        Ok(ConvexBody {
            kind: BodyKind::Polytope { vertices },
            dim,
            circumradius,
            strictly_convex: false,
        })
    }

    pub fn revolution(exponent: f64, height: f64, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidInput("revolution body needs dimension ≥ 2".into()));
        }
        if !(exponent > 1.0) || !exponent.is_finite() {
            return Err(Error::InvalidInput(format!(
                "revolution exponent must be > 1, got {exponent}"
            )));
        }
        if !(height > 0.0) || !height.is_finite() {
            return Err(Error::InvalidInput(format!(
                "revolution height must be > 0, got {height}"
            )));
        }
        let cap = RevolutionCap::derive(exponent, height);
        let rim = flt::powf(height, 1.0 / exponent);
        let circumradius = flt::hypot(rim, height).max(cap.center_s + cap.radius);
        Ok(ConvexBody {
            kind: BodyKind::Revolution { exponent, height, dim },
            dim,
            circumradius,
            strictly_convex: true,
        })
    }

    /// Convex hull of `K` with one extra point. Absorbed points (already in
    /// the body) leave the body unchanged; planar polytope bases are rebuilt
    /// exactly.
    pub fn hull_with_point(&self, p: Vec<f64>) -> Result<Self> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: p.len() });
        }
        if distance_to_body(self, &p, 2000) <= 1e-12 * (1.0 + self.circumradius) {
            return Ok(self.clone());
        }
        match (&self.kind, self.dim) {
            (BodyKind::Polytope { vertices }, 2) => {
                let mut pts = vertices.clone();
                pts.push(p);
                ConvexBody::polytope(pts)
            }
            (BodyKind::Hull { base, points }, _) => {
                let mut pts: Vec<Vec<f64>> = Vec::with_capacity(points.len() + 1);
                // Previously added points may be absorbed by the new one.
                for q in points {
                    let keep_against = hull_without(base, points, q, &p);
                    if !keep_against {
                        continue;
                    }
                    pts.push(q.clone());
                }
                pts.push(p);
                Ok(make_hull((**base).clone(), pts))
            }
            _ => Ok(make_hull(self.clone(), alloc::vec![p])),
        }
    }

    /// Minkowski sum `K + B̄(0, φ)`.
    pub fn minkowski_ball(&self, phi: f64) -> Result<Self> {
        if !(phi >= 0.0) || !phi.is_finite() {
            return Err(Error::InvalidInput(format!("rounding radius must be ≥ 0, got {phi}")));
        }
        if phi == 0.0 {
            return Ok(self.clone());
        }
        Ok(match &self.kind {
            BodyKind::Ball { center, radius } => ConvexBody {
                kind: BodyKind::Ball { center: center.clone(), radius: radius + phi },
                dim: self.dim,
                circumradius: self.circumradius + phi,
                strictly_convex: true,
            },
            BodyKind::Rounded { base, phi: prev } => ConvexBody {
                kind: BodyKind::Rounded { base: base.clone(), phi: prev + phi },
                dim: self.dim,
                circumradius: self.circumradius + phi,
                strictly_convex: true,
            },
            _ => ConvexBody {
                kind: BodyKind::Rounded { base: Box::new(self.clone()), phi },
                dim: self.dim,
                circumradius: self.circumradius + phi,
                strictly_convex: true,
            },
        })
    }

    #[inline]
    pub fn kind(&self) -> &BodyKind {
        &self.kind
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Lipschitz bound for the support function: `|h(u)−h(v)| ≤ circumradius·‖u−v‖`.
    #[inline]
    pub fn circumradius(&self) -> f64 {
        self.circumradius
    }

    /// Cheap diameter bound used to scale tolerances.
    #[inline]
    pub fn diameter_bound(&self) -> f64 {
        2.0 * self.circumradius
    }

    /// Whether the variant is flagged strictly convex (the class 𝓑∘).
    #[inline]
    pub fn is_strictly_convex(&self) -> bool {
        self.strictly_convex
    }

    /// `h_K(u) = max_{y∈K} ⟨y,u⟩` for a unit direction.
    pub fn support(&self, u: &Direction) -> Result<f64> {
        if u.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: u.dim() });
        }
        Ok(self.support_raw(u.as_slice()))
    }

    /// Touching point `x_τ`: the boundary point with inward normal `τ`,
    /// i.e. the maximizer of `⟨·,−τ⟩`. Unique for strictly convex variants;
    /// ties resolve to the lexicographically greatest maximizer.
    pub fn touching_point(&self, tau: &Direction) -> Result<Vec<f64>> {
        if tau.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: tau.dim() });
        }
        let neg: Vec<f64> = tau.as_slice().iter().map(|x| -x).collect();
        Ok(self.support_point_raw(&neg))
    }

    /// Support value for a raw unit direction (no dimension check).
    pub fn support_raw(&self, u: &[f64]) -> f64 {
        match &self.kind {
            BodyKind::Ball { center, radius } => geom::dot(center, u) + radius,
            BodyKind::Ellipsoid { center, semi_axes } => {
                let mut q = 0.0;
                for i in 0..u.len() {
                    let t = semi_axes[i] * u[i];
                    q += t * t;
                }
                geom::dot(center, u) + flt::sqrt(q)
            }
            BodyKind::Polytope { vertices } => vertices
                .iter()
                .map(|v| geom::dot(v, u))
                .fold(f64::NEG_INFINITY, f64::max),
            BodyKind::Revolution { exponent, height, .. } => {
                revolution_support(*exponent, *height, u).0
            }
            BodyKind::Hull { base, points } => {
                let mut h = base.support_raw(u);
                for p in points {
                    h = h.max(geom::dot(p, u));
                }
                h
            }
            BodyKind::Rounded { base, phi } => base.support_raw(u) + phi,
        }
    }

    /// A maximizer of `⟨·,u⟩` over the body, for a raw unit direction.
    pub fn support_point_raw(&self, u: &[f64]) -> Vec<f64> {
        match &self.kind {
            BodyKind::Ball { center, radius } => geom::axpy(center, *radius, u),
            BodyKind::Ellipsoid { center, semi_axes } => {
                let mut q = 0.0;
                let mut g: Vec<f64> = Vec::with_capacity(u.len());
                for i in 0..u.len() {
                    let a2 = semi_axes[i] * semi_axes[i];
                    g.push(a2 * u[i]);
                    q += a2 * u[i] * u[i];
                }
                let n = flt::sqrt(q);
                if n == 0.0 {
                    return center.clone();
                }
                geom::axpy(center, 1.0 / n, &g)
            }
            BodyKind::Polytope { vertices } => {
                pick_max_vertex(vertices, u, self.circumradius).clone()
            }
            BodyKind::Revolution { exponent, height, dim } => {
                revolution_support_point(*exponent, *height, *dim, u)
            }
            BodyKind::Hull { base, points } => {
                let mut best = base.support_point_raw(u);
                let mut best_h = geom::dot(&best, u);
                let tol = 1e-12 * (1.0 + self.circumradius);
                for p in points {
                    let h = geom::dot(p, u);
                    if h > best_h + tol || (h >= best_h - tol && geom::lex_greater(p, &best)) {
                        best = p.clone();
                        best_h = h;
                    }
                }
                best
            }
            BodyKind::Rounded { base, phi } => {
                geom::axpy(&base.support_point_raw(u), *phi, u)
            }
        }
    }
}

fn make_hull(base: ConvexBody, points: Vec<Vec<f64>>) -> ConvexBody {
    let dim = base.dim;
    let circumradius = points
        .iter()
        .map(|p| geom::norm(p))
        .fold(base.circumradius, f64::max);
    ConvexBody {
        kind: BodyKind::Hull { base: Box::new(base), points },
        dim,
        circumradius,
        strictly_convex: false,
    }
}

/// Whether `q` stays a vertex of `conv(base ∪ points∖{q} ∪ {extra})`.
fn hull_without(base: &ConvexBody, points: &[Vec<f64>], q: &[f64], extra: &[f64]) -> bool {
    let others: Vec<Vec<f64>> = points
        .iter()
        .filter(|r| r.as_slice() != q)
        .cloned()
        .chain(core::iter::once(extra.to_vec()))
        .collect();
    let probe = make_hull(base.clone(), others);
    distance_to_body(&probe, q, 2000) > 1e-12 * (1.0 + probe.circumradius)
}

fn pick_max_vertex<'a>(vertices: &'a [Vec<f64>], u: &[f64], scale: f64) -> &'a Vec<f64> {
    let tol = 1e-12 * (1.0 + scale);
    let mut best = &vertices[0];
    let mut best_h = geom::dot(best, u);
    for v in &vertices[1..] {
        let h = geom::dot(v, u);
        if h > best_h + tol || (h >= best_h - tol && geom::lex_greater(v, best)) {
            best = v;
            best_h = best_h.max(h);
        }
    }
    best
}

/// Geometry of the spherical cap closing the profile bowl: the sphere
/// through the transition ring `(t₁, t₁^p)`, `t₁ = h^{1/p}`, tangent to the
/// profile there. With slope `s₁ = p·t₁^{p−1}` and `n = √(1+s₁²)`, the
/// radius is `R₀ = n·t₁^{2−p}/p` and the center sits on the axis at
/// `c_s = h + t₁^{2−p}/p`.
#[derive(Debug, Clone, Copy)]
pub struct RevolutionCap {
    pub ring_t: f64,
    pub radius: f64,
    pub center_s: f64,
}

impl RevolutionCap {
    pub fn derive(p: f64, h: f64) -> RevolutionCap {
        let t1 = flt::powf(h, 1.0 / p);
        let slope = p * flt::powf(t1, p - 1.0);
        let n = flt::hypot(1.0, slope);
        let radius = n * flt::powf(t1, 2.0 - p) / p;
        let center_s = h + flt::powf(t1, 2.0 - p) / p;
        RevolutionCap { ring_t: t1, radius, center_s }
    }
}

/// Support of the revolution body in direction `u = (u_w, u_d)` as the max
/// of the truncated bowl and the closing sphere; returns the value and the
/// optimal profile parameter `t` when the bowl side wins (`t < 0` marks the
/// sphere side).
///
/// On the bowl the concave 1-D objective `t·‖u_w‖ + t^p·u_d` (for `u_d < 0`)
/// has stationary point `t* = (‖u_w‖/(p·|u_d|))^{1/(p−1)}`, clamped to the
/// transition ring.
fn revolution_support(p: f64, h: f64, u: &[f64]) -> (f64, f64) {
    let d = u.len();
    let ud = u[d - 1];
    let q = {
        let mut s = 0.0;
        for x in &u[..d - 1] {
            s += x * x;
        }
        flt::sqrt(s)
    };
    let cap = RevolutionCap::derive(p, h);
    let ball_val = cap.center_s * ud + cap.radius;
    let (bowl_val, bowl_t) = if ud >= 0.0 {
        (q * cap.ring_t + ud * h, cap.ring_t)
    } else {
        let t = if q == 0.0 {
            0.0
        } else {
            flt::powf(q / (p * (-ud)), 1.0 / (p - 1.0)).min(cap.ring_t)
        };
        (t * q + flt::powf(t, p) * ud, t)
    };
    if bowl_val >= ball_val {
        (bowl_val, bowl_t)
    } else {
        (ball_val, -1.0)
    }
}

fn revolution_support_point(p: f64, h: f64, dim: usize, u: &[f64]) -> Vec<f64> {
    let (_, t) = revolution_support(p, h, u);
    let mut y = alloc::vec![0.0; dim];
    if t < 0.0 {
        // Sphere side: center + R·u.
        let cap = RevolutionCap::derive(p, h);
        for i in 0..dim {
            y[i] = cap.radius * u[i];
        }
        y[dim - 1] += cap.center_s;
        return y;
    }
    let q = {
        let mut s = 0.0;
        for x in &u[..dim - 1] {
            s += x * x;
        }
        flt::sqrt(s)
    };
    if q > 0.0 {
        for i in 0..dim - 1 {
            y[i] = t * u[i] / q;
        }
    }
    y[dim - 1] = flt::powf(t, p);
    y
}

/// Andrew's monotone chain; returns CCW hull without the closing point.
pub fn convex_hull_2d(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut pts: Vec<Vec<f64>> = points.to_vec();
    pts.sort_by(|a, b| {
        a[0].total_cmp(&b[0]).then_with(|| a[1].total_cmp(&b[1]))
    });
    pts.dedup_by(|a, b| geom::dist(a, b) < 1e-14);
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: &[f64], a: &[f64], b: &[f64]| -> f64 {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<Vec<f64>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0.0
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<f64>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0.0
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Redundancy filter for d ≥ 3 point clouds: keep `v` iff it is not within
/// tolerance of the hull of the remaining points (pairwise Frank-Wolfe).
fn irredundant_vertices(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut keep: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    let scale = points.iter().map(|p| geom::norm(p)).fold(1.0, f64::max);
    for (i, v) in points.iter().enumerate() {
        let others: Vec<Vec<f64>> = points
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        if others.len() < v.len() {
            keep.push(v.clone());
            continue;
        }
        let d = distance_to_point_set(&others, v, 2000);
        if d > 1e-10 * scale {
            keep.push(v.clone());
        }
    }
    keep
}

/// Distance from `y` to `K` via pairwise Frank-Wolfe over the support oracle.
/// Returns 0 for interior points. Accuracy is good to ~1e-10·scale for the
/// iteration budgets used here; callers needing certificates use the
/// certified kernels instead.
pub fn distance_to_body(body: &ConvexBody, y: &[f64], iters: usize) -> f64 {
    frank_wolfe_distance(y, iters, |dir| body.support_point_raw(dir))
}

fn distance_to_point_set(points: &[Vec<f64>], y: &[f64], iters: usize) -> f64 {
    frank_wolfe_distance(y, iters, |dir| {
        let mut best = &points[0];
        let mut best_h = geom::dot(best, dir);
        for p in &points[1..] {
            let h = geom::dot(p, dir);
            if h > best_h {
                best = p;
                best_h = h;
            }
        }
        best.clone()
    })
}

fn frank_wolfe_distance<F>(y: &[f64], iters: usize, lmo: F) -> f64
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    // Minimize ‖z − y‖² over the body; the linear minimization oracle is the
    // support point in direction y − z.
    let mut z = lmo(&geom::normalize(y).unwrap_or_else(|| {
        let mut e = alloc::vec![0.0; y.len()];
        e[0] = 1.0;
        e
    }));
    for _ in 0..iters {
        let grad = geom::sub(&z, y);
        let gn = geom::norm(&grad);
        if gn < 1e-15 {
            return 0.0;
        }
        let dir = geom::scale(&grad, -1.0 / gn);
        let s = lmo(&dir);
        let step_dir = geom::sub(&s, &z);
        let g_dot = geom::dot(&grad, &step_dir);
        // Frank-Wolfe gap certifies optimality: dist² ≥ ‖grad‖² + g_dot.
        if g_dot >= -1e-30 {
            break;
        }
        let denom = geom::dot(&step_dir, &step_dir);
        let gamma = (-g_dot / denom).clamp(0.0, 1.0);
        if gamma <= 0.0 {
            break;
        }
        z = geom::axpy(&z, gamma, &step_dir);
    }
    geom::dist(&z, y)
}
