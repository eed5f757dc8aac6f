//! Certified maximization of support-function differences over the sphere.
//!
//! Computes brackets `[lb, ub]` for `sup { h_A(v) − h_B(v) : v ∈ region }`
//! where the region is the full unit sphere or a spherical cap of directions,
//! by branch-and-bound over geodesic cells. The cell bound combines an exact
//! closed-form maximum of a linear functional over an enclosing cap with a
//! subadditivity bound on the anchored remainder
//! `ρ(v) = h_A(v) − ⟨y_A(v₀), v⟩ ≥ 0`,
//! which vanishes quadratically near the anchor. That makes the bound exact
//! on polytope normal cones and quadratically tight on smooth bodies, so the
//! search concentrates on the maximizing set instead of covering the sphere.
//!
//! Everything the bound needs is the support value and one maximizing point
//! per evaluated direction; bodies enter only through that oracle.

use alloc::boxed::Box;
use alloc::collections::BinaryHeap;
use alloc::vec::Vec;

use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::geom::flt;
use crate::geom::{self};
use crate::sampling;

/// Support oracle: value plus a maximizing point, per unit direction.
pub trait SupportOracle {
    fn dim(&self) -> usize;
    fn eval(&self, v: &[f64]) -> (f64, Vec<f64>);
}

impl SupportOracle for ConvexBody {
    fn dim(&self) -> usize {
        self.dim()
    }
    fn eval(&self, v: &[f64]) -> (f64, Vec<f64>) {
        let y = self.support_point_raw(v);
        (self.support_raw(v), y)
    }
}

/// Single point: `h(v) = ⟨p, v⟩`.
pub struct PointOracle<'a>(pub &'a [f64]);

impl SupportOracle for PointOracle<'_> {
    fn dim(&self) -> usize {
        self.0.len()
    }
    fn eval(&self, v: &[f64]) -> (f64, Vec<f64>) {
        (geom::dot(self.0, v), self.0.to_vec())
    }
}

/// Translate of another oracle: `h(v) + ⟨shift, v⟩`.
pub struct Shifted<'a, O: SupportOracle + ?Sized> {
    pub inner: &'a O,
    pub shift: Vec<f64>,
}

impl<O: SupportOracle + ?Sized> SupportOracle for Shifted<'_, O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn eval(&self, v: &[f64]) -> (f64, Vec<f64>) {
        let (h, y) = self.inner.eval(v);
        (h + geom::dot(&self.shift, v), geom::add(&y, &self.shift))
    }
}

/// Search region on the unit sphere.
#[derive(Debug, Clone)]
pub enum Region {
    FullSphere,
    /// Directions within `half_angle` of `axis` (half_angle < π/2).
    Cap { axis: Vec<f64>, half_angle: f64 },
}

#[derive(Debug, Clone)]
pub struct SphereMaxOpts {
    /// Target bracket width (absolute).
    pub tol: f64,
    /// Maximum number of cell expansions before giving up.
    pub max_cells: usize,
}

impl Default for SphereMaxOpts {
    fn default() -> Self {
        SphereMaxOpts { tol: 1e-9, max_cells: 1_500_000 }
    }
}

/// Certified bracket for the supremum.
#[derive(Debug, Clone)]
pub struct MaxBracket {
    pub lb: f64,
    pub ub: f64,
    /// Direction achieving `lb`.
    pub arg_dir: Vec<f64>,
    /// Maximizing point of `A` at `arg_dir`.
    pub witness: Vec<f64>,
    pub cells: usize,
    pub converged: bool,
}

impl MaxBracket {
    pub fn gap(&self) -> f64 {
        self.ub - self.lb
    }

    fn exact(value: f64, arg_dir: Vec<f64>, witness: Vec<f64>) -> Self {
        MaxBracket { lb: value, ub: value, arg_dir, witness, cells: 0, converged: true }
    }
}

/// Exact maximum of `⟨w, v⟩` over the cap of unit directions within
/// `half_angle` of `axis`: `‖w‖·cos(max(0, ∠(w, axis) − half_angle))`.
pub fn cap_linear_max(w: &[f64], axis: &[f64], half_angle: f64) -> f64 {
    let n = geom::norm(w);
    if n == 0.0 {
        return 0.0;
    }
    let unit = geom::scale(w, 1.0 / n);
    let ang = geom::angle_between_units(&unit, axis);
    n * flt::cos((ang - half_angle).max(0.0))
}

/// Maximum of the sinusoid `a·cos x + b·sin x` over `x ∈ [x0, x1]`.
fn sinusoid_max(a: f64, b: f64, x0: f64, x1: f64) -> f64 {
    let amp = flt::hypot(a, b);
    if amp == 0.0 {
        return 0.0;
    }
    let phase = flt::atan2(b, a);
    // Peak lies at x ≡ phase (mod 2π).
    let tau = core::f64::consts::TAU;
    let mut k = flt::ceil((x0 - phase) / tau);
    let peak = phase + k * tau;
    if peak <= x1 {
        return amp;
    }
    k -= 1.0;
    if phase + k * tau >= x0 && phase + k * tau <= x1 {
        return amp;
    }
    (a * flt::cos(x0) + b * flt::sin(x0)).max(a * flt::cos(x1) + b * flt::sin(x1))
}

#[inline]
fn cross3(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Exact maximum of `⟨w, v⟩` over a geodesic triangle inside an open
/// hemisphere: the peak direction if it lies in the spanned cone, otherwise
/// the best of the three edge arcs (each a closed-form sinusoid maximum).
fn tri_linear_max(w: &[f64], corners: &[[f64; 3]; 3], n: usize) -> f64 {
    debug_assert_eq!(n, 3);
    let ww = geom::norm(w);
    if ww == 0.0 {
        return 0.0;
    }
    let inside = (0..3).all(|i| {
        let j = (i + 1) % 3;
        let k = (i + 2) % 3;
        let nrm = cross3(&corners[i][..3], &corners[j][..3]);
        let orient = geom::dot(&nrm, &corners[k][..3]);
        let side = geom::dot(&nrm, w);
        side * orient >= 0.0
    });
    if inside {
        return ww;
    }
    let mut best = f64::NEG_INFINITY;
    for i in 0..3 {
        let j = (i + 1) % 3;
        best = best.max(arc_linear_max(w, &corners[i][..3], &corners[j][..3]));
    }
    best
}

/// Exact maximum of `⟨w, v⟩` over the geodesic arc from `vi` to `vj`.
fn arc_linear_max(w: &[f64], vi: &[f64], vj: &[f64]) -> f64 {
    let omega = geom::angle_between_units(vi, vj);
    let wi = geom::dot(w, vi);
    let wj = geom::dot(w, vj);
    if omega < 1e-12 {
        return wi.max(wj);
    }
    // v(x) = cos(x)·vi + sin(x)·(vj − cosΩ·vi)/sinΩ for x ∈ [0, Ω].
    let b = (wj - wi * flt::cos(omega)) / flt::sin(omega);
    sinusoid_max(wi, b, 0.0, omega)
}

const MIN_WIDTH: f64 = 1e-10;

#[derive(Clone, Copy)]
struct Corner {
    dir: [f64; 3],
    ha: f64,
    ya: [f64; 3],
    g: f64,
    yb: [f64; 3],
}

enum CellKind {
    Arc { t0: f64, t1: f64 },
    Tri,
    Sliver { psi0: f64, psi1: f64 },
}

struct Cell {
    kind: CellKind,
    corners: [Corner; 3],
    ncorners: u8,
}

struct HeapCell {
    ub: f64,
    cell: Box<Cell>,
}

impl PartialEq for HeapCell {
    fn eq(&self, other: &Self) -> bool {
        self.ub == other.ub
    }
}
impl Eq for HeapCell {}
impl PartialOrd for HeapCell {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapCell {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.ub.total_cmp(&other.ub)
    }
}

struct CapFrame {
    axis: [f64; 3],
    e1: [f64; 3],
    e2: [f64; 3],
    half_angle: f64,
    /// Cached `(h_A(−axis), y_A(−axis))` for the sliver bound.
    minus_axis_ha: f64,
    minus_axis_dir: [f64; 3],
}

struct Kernel<'a> {
    a: &'a dyn SupportOracle,
    b: &'a dyn SupportOracle,
    dim: usize,
    safety: f64,
    lb: f64,
    arg_dir: Vec<f64>,
    witness: Vec<f64>,
    frame: Option<CapFrame>,
}

impl<'a> Kernel<'a> {
    fn eval(&mut self, dir: &[f64]) -> Corner {
        let (ha, ya) = self.a.eval(dir);
        let (hb, yb) = self.b.eval(dir);
        let g = ha - hb;
        if g > self.lb {
            self.lb = g;
            self.arg_dir = dir.to_vec();
            self.witness = ya.clone();
        }
        let mut c = Corner { dir: [0.0; 3], ha, ya: [0.0; 3], g, yb: [0.0; 3] };
        c.dir[..self.dim].copy_from_slice(dir);
        c.ya[..self.dim].copy_from_slice(&ya);
        c.yb[..self.dim].copy_from_slice(&yb);
        c
    }

    /// Upper bound for the cell; see the module docs for the derivation.
    fn cell_ub(&self, cell: &Cell) -> f64 {
        let d = self.dim;
        let n = cell.ncorners as usize;
        let corners = &cell.corners[..n];
        // Anchor at the corner with the largest difference value.
        let anchor = corners
            .iter()
            .max_by(|x, y| x.g.total_cmp(&y.g))
            .unwrap();
        let w = geom::sub(&anchor.ya[..d], &anchor.yb[..d]);
        let rho = |c: &Corner| -> f64 {
            (c.ha - geom::dot(&anchor.ya[..d], &c.dir[..d])).max(0.0)
        };
        let rho_max = corners.iter().map(rho).fold(0.0, f64::max);
        let ub = match &cell.kind {
            CellKind::Arc { t0, t1 } => {
                // The linear part is an exact sinusoid maximum over the arc.
                let half = 0.5 * (t1 - t0);
                let lin = sinusoid_max(w[0], w[1], *t0, *t1);
                lin + rho_max / flt::cos(half)
            }
            CellKind::Tri => {
                let mut msum = [0.0; 3];
                for c in corners {
                    for i in 0..3 {
                        msum[i] += c.dir[i];
                    }
                }
                let m = geom::normalize(&msum[..d]).expect("degenerate triangle cell");
                let beta = corners
                    .iter()
                    .map(|c| geom::angle_between_units(&c.dir[..d], &m))
                    .fold(0.0, f64::max);
                let cs = [corners[0].dir, corners[1].dir, corners[2].dir];
                tri_linear_max(&w, &cs, 3) + rho_max / flt::cos(beta)
            }
            CellKind::Sliver { psi0, psi1 } => {
                let fr = self.frame.as_ref().expect("sliver without cap frame");
                let omega = psi1 - psi0;
                let s_max = 1.0 / flt::cos(0.5 * omega);
                let psir = fr.half_angle;
                let gamma = 0.5
                    * geom::angle_between_units(&corners[0].dir[..d], &corners[1].dir[..d]);
                let t_min = flt::acos((flt::cos(psir) / flt::cos(gamma)).min(1.0));
                // Exact linear maximum over the (t, ψ) rectangle
                // [t_min, ψ_r] × [ψ0, ψ1] ⊇ sliver: with
                // v(t,ψ) = cos t·u + sin t·w̄(ψ),
                // ⟨w,v⟩ = A cos t + (a cos ψ + b sin ψ) sin t.
                let a_ax = geom::dot(&w, &fr.axis[..d]);
                let a = geom::dot(&w, &fr.e1[..d]);
                let b = geom::dot(&w, &fr.e2[..d]);
                let c_star = sinusoid_max(a, b, *psi0, *psi1);
                let lin = sinusoid_max(a_ax, c_star, t_min, psir);
                // ρ at −axis, with this cell's anchor.
                let rho_mu = (fr.minus_axis_ha
                    - geom::dot(&anchor.ya[..d], &fr.minus_axis_dir[..d]))
                .max(0.0);
                lin + s_max * rho_max + flt::cos(psir) * (s_max - 1.0) * rho_mu
            }
        };
        ub + self.safety
    }

    fn width(&self, cell: &Cell) -> f64 {
        let d = self.dim;
        match &cell.kind {
            CellKind::Arc { t0, t1 } => t1 - t0,
            CellKind::Tri => {
                let n = cell.ncorners as usize;
                let mut w: f64 = 0.0;
                for i in 0..n {
                    for j in (i + 1)..n {
                        w = w.max(geom::angle_between_units(
                            &cell.corners[i].dir[..d],
                            &cell.corners[j].dir[..d],
                        ));
                    }
                }
                w
            }
            CellKind::Sliver { psi0, psi1 } => psi1 - psi0,
        }
    }
}

fn rim_dir(fr: &CapFrame, t: f64, psi: f64) -> [f64; 3] {
    let (ct, st) = (flt::cos(t), flt::sin(t));
    let (cp, sp) = (flt::cos(psi), flt::sin(psi));
    let mut v = [0.0; 3];
    for i in 0..3 {
        v[i] = ct * fr.axis[i] + st * (cp * fr.e1[i] + sp * fr.e2[i]);
    }
    v
}

/// Certified `sup { h_A − h_B }` over the region. Supports d ∈ {2, 3}.
pub fn sphere_max_diff(
    a: &dyn SupportOracle,
    b: &dyn SupportOracle,
    region: &Region,
    opts: &SphereMaxOpts,
) -> Result<MaxBracket> {
    let dim = a.dim();
    if b.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: b.dim() });
    }
    if dim != 2 && dim != 3 {
        return Err(Error::InvalidInput(
            "certified sphere search implemented for d ∈ {2,3}".into(),
        ));
    }
    if let Region::Cap { axis, half_angle } = region {
        if axis.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: axis.len() });
        }
        if !(*half_angle > 0.0 && *half_angle < core::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidInput("cap half-angle must be in (0, π/2)".into()));
        }
    }

    // Rough magnitude of the oracles, for ulp-level safety inflation of bounds.
    let probe = {
        let mut e = alloc::vec![0.0; dim];
        e[0] = 1.0;
        e
    };
    let (pa, ya) = a.eval(&probe);
    let (pb, yb) = b.eval(&probe);
    let scale = pa.abs().max(pb.abs()).max(geom::norm(&ya)).max(geom::norm(&yb)).max(1.0);

    let mut kernel = Kernel {
        a,
        b,
        dim,
        safety: 1e-14 * scale,
        lb: f64::NEG_INFINITY,
        arg_dir: probe.clone(),
        witness: ya,
        frame: None,
    };

    let mut heap: BinaryHeap<HeapCell> = BinaryHeap::new();
    let push = |kernel: &Kernel, heap: &mut BinaryHeap<HeapCell>, cell: Cell| {
        let ub = kernel.cell_ub(&cell);
        heap.push(HeapCell { ub, cell: Box::new(cell) });
    };

    // Seed cells.
    match (dim, region) {
        (2, Region::FullSphere) => {
            let n = 8;
            let corners: Vec<Corner> = (0..n)
                .map(|i| {
                    let t = core::f64::consts::TAU * (i as f64) / (n as f64);
                    kernel.eval(&[flt::cos(t), flt::sin(t)])
                })
                .collect();
            for i in 0..n {
                let t0 = core::f64::consts::TAU * (i as f64) / (n as f64);
                let t1 = core::f64::consts::TAU * ((i + 1) as f64) / (n as f64);
                let cell = Cell {
                    kind: CellKind::Arc { t0, t1 },
                    corners: [corners[i], corners[(i + 1) % n], corners[0]],
                    ncorners: 2,
                };
                push(&kernel, &mut heap, cell);
            }
        }
        (2, Region::Cap { axis, half_angle }) => {
            let phi = flt::atan2(axis[1], axis[0]);
            let lo = phi - half_angle;
            let hi = phi + half_angle;
            let pieces =
                flt::ceil((2.0 * half_angle) / core::f64::consts::FRAC_PI_4).max(1.0) as usize;
            let mut prev_t = lo;
            let mut prev = kernel.eval(&[flt::cos(lo), flt::sin(lo)]);
            for i in 1..=pieces {
                let t = lo + (hi - lo) * (i as f64) / (pieces as f64);
                let cur = kernel.eval(&[flt::cos(t), flt::sin(t)]);
                let cell = Cell {
                    kind: CellKind::Arc { t0: prev_t, t1: t },
                    corners: [prev, cur, prev],
                    ncorners: 2,
                };
                push(&kernel, &mut heap, cell);
                prev_t = t;
                prev = cur;
            }
        }
        (3, Region::FullSphere) => {
            let (verts, faces) = sampling::icosahedron();
            let corners: Vec<Corner> = verts.iter().map(|v| kernel.eval(v)).collect();
            for f in faces {
                let cell = Cell {
                    kind: CellKind::Tri,
                    corners: [corners[f[0]], corners[f[1]], corners[f[2]]],
                    ncorners: 3,
                };
                push(&kernel, &mut heap, cell);
            }
        }
        (3, Region::Cap { axis, half_angle }) => {
            let basis = geom::tangent_basis(axis);
            let mut fr = CapFrame {
                axis: [0.0; 3],
                e1: [0.0; 3],
                e2: [0.0; 3],
                half_angle: *half_angle,
                minus_axis_ha: 0.0,
                minus_axis_dir: [0.0; 3],
            };
            fr.axis.copy_from_slice(axis);
            fr.e1.copy_from_slice(&basis[0]);
            fr.e2.copy_from_slice(&basis[1]);
            let minus_axis: Vec<f64> = axis.iter().map(|x| -x).collect();
            let (hma, _) = a.eval(&minus_axis);
            fr.minus_axis_ha = hma;
            fr.minus_axis_dir[..3].copy_from_slice(&minus_axis);
            let apex = kernel.eval(axis);
            let nw = 8usize;
            let ring: Vec<(f64, Corner)> = (0..=nw)
                .map(|k| {
                    let psi = core::f64::consts::TAU * (k as f64) / (nw as f64);
                    let v = rim_dir(&fr, *half_angle, psi);
                    (psi, kernel.eval(&v[..3]))
                })
                .collect();
            kernel.frame = Some(fr);
            for k in 0..nw {
                let (p0, c0) = ring[k];
                let (p1, c1) = ring[k + 1];
                let wedge = Cell {
                    kind: CellKind::Tri,
                    corners: [apex, c0, c1],
                    ncorners: 3,
                };
                push(&kernel, &mut heap, wedge);
                let sliver = Cell {
                    kind: CellKind::Sliver { psi0: p0, psi1: p1 },
                    corners: [c0, c1, c0],
                    ncorners: 2,
                };
                push(&kernel, &mut heap, sliver);
            }
        }
        _ => unreachable!(),
    }

    // Branch and bound. Cells whose bound cannot beat lb + tol are retired
    // into `retired_ub`; the final upper bound is the max over everything.
    let tol = opts.tol.max(4.0 * kernel.safety);
    let mut retired_ub = f64::NEG_INFINITY;
    let mut pops = 0usize;
    let converged = loop {
        let top_ub = heap.peek().map(|h| h.ub).unwrap_or(f64::NEG_INFINITY);
        let global_ub = top_ub.max(retired_ub).max(kernel.lb);
        if global_ub - kernel.lb <= tol {
            break true;
        }
        if pops >= opts.max_cells {
            break false;
        }
        let Some(HeapCell { ub, cell }) = heap.pop() else {
            break retired_ub.max(kernel.lb) - kernel.lb <= tol;
        };
        if ub <= kernel.lb + tol {
            retired_ub = retired_ub.max(ub);
            continue;
        }
        if kernel.width(&cell) < MIN_WIDTH {
            retired_ub = retired_ub.max(ub);
            continue;
        }
        pops += 1;
        let children = subdivide(&mut kernel, &cell);
        for child in children {
            let cub = kernel.cell_ub(&child);
            if cub <= kernel.lb + tol {
                retired_ub = retired_ub.max(cub);
            } else {
                heap.push(HeapCell { ub: cub, cell: Box::new(child) });
            }
        }
    };

    let top_ub = heap.peek().map(|h| h.ub).unwrap_or(f64::NEG_INFINITY);
    let ub = top_ub.max(retired_ub).max(kernel.lb);
    Ok(MaxBracket {
        lb: kernel.lb,
        ub,
        arg_dir: kernel.arg_dir,
        witness: kernel.witness,
        cells: pops,
        converged,
    })
}

fn subdivide(kernel: &mut Kernel, cell: &Cell) -> Vec<Cell> {
    let d = kernel.dim;
    match &cell.kind {
        CellKind::Arc { t0, t1 } => {
            let tm = 0.5 * (t0 + t1);
            let cm = kernel.eval(&[flt::cos(tm), flt::sin(tm)]);
            alloc::vec![
                Cell {
                    kind: CellKind::Arc { t0: *t0, t1: tm },
                    corners: [cell.corners[0], cm, cell.corners[0]],
                    ncorners: 2,
                },
                Cell {
                    kind: CellKind::Arc { t0: tm, t1: *t1 },
                    corners: [cm, cell.corners[1], cm],
                    ncorners: 2,
                },
            ]
        }
        CellKind::Tri => {
            let c = &cell.corners;
            let mids: Vec<Corner> = (0..3)
                .map(|i| {
                    let j = (i + 1) % 3;
                    let sum = geom::add(&c[i].dir[..d], &c[j].dir[..d]);
                    let m = geom::normalize(&sum).expect("antipodal triangle corners");
                    kernel.eval(&m)
                })
                .collect();
            alloc::vec![
                Cell { kind: CellKind::Tri, corners: [c[0], mids[0], mids[2]], ncorners: 3 },
                Cell { kind: CellKind::Tri, corners: [mids[0], c[1], mids[1]], ncorners: 3 },
                Cell { kind: CellKind::Tri, corners: [mids[2], mids[1], c[2]], ncorners: 3 },
                Cell { kind: CellKind::Tri, corners: [mids[0], mids[1], mids[2]], ncorners: 3 },
            ]
        }
        CellKind::Sliver { psi0, psi1 } => {
            let fr = kernel.frame.as_ref().expect("sliver without cap frame");
            let psim = 0.5 * (psi0 + psi1);
            let vm = rim_dir(fr, fr.half_angle, psim);
            let cm = kernel.eval(&vm[..d]);
            alloc::vec![
                Cell {
                    kind: CellKind::Sliver { psi0: *psi0, psi1: psim },
                    corners: [cell.corners[0], cm, cell.corners[0]],
                    ncorners: 2,
                },
                Cell {
                    kind: CellKind::Sliver { psi0: psim, psi1: *psi1 },
                    corners: [cm, cell.corners[1], cm],
                    ncorners: 2,
                },
                Cell {
                    kind: CellKind::Tri,
                    corners: [cell.corners[0], cm, cell.corners[1]],
                    ncorners: 3,
                },
            ]
        }
    }
}

/// Convenience wrapper returning an exact bracket for a closed-form value.
pub fn exact_bracket(value: f64, arg_dir: Vec<f64>, witness: Vec<f64>) -> MaxBracket {
    MaxBracket::exact(value, arg_dir, witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::ConvexBody;
    use alloc::vec;

    fn brute_max(
        a: &dyn SupportOracle,
        b: &dyn SupportOracle,
        region: &Region,
        n: usize,
    ) -> f64 {
        let dim = a.dim();
        let net = sampling::direction_net(dim, n);
        let mut best = f64::NEG_INFINITY;
        for v in net {
            let keep = match region {
                Region::FullSphere => true,
                Region::Cap { axis, half_angle } => {
                    geom::angle_between_units(&v, axis) <= *half_angle
                }
            };
            if keep {
                best = best.max(a.eval(&v).0 - b.eval(&v).0);
            }
        }
        best
    }

    fn check(a: &ConvexBody, b: &ConvexBody, region: Region, tol: f64) {
        let opts = SphereMaxOpts { tol, max_cells: 2_000_000 };
        let r = sphere_max_diff(a, b, &region, &opts).unwrap();
        assert!(r.converged, "kernel did not converge (gap {})", r.gap());
        assert!(r.gap() <= tol * 1.0001);
        let n = if a.dim() == 2 { 400_000 } else { 250_000 };
        let brute = brute_max(a, b, &region, n);
        assert!(
            brute <= r.ub + 1e-9,
            "brute {brute} exceeds certified ub {}",
            r.ub
        );
        assert!(
            r.lb <= brute + 1e-4,
            "lb {} exceeds brute {brute} by more than net error",
            r.lb
        );
    }

    #[test]
    fn full_sphere_ball_pairs_2d() {
        let a = ConvexBody::ball(vec![0.4, -0.1], 1.0).unwrap();
        let b = ConvexBody::ball(vec![0.0, 0.0], 0.5).unwrap();
        check(&a, &b, Region::FullSphere, 1e-9);
    }

    #[test]
    fn full_sphere_mixed_pairs_2d() {
        let tri =
            ConvexBody::polytope(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let ball = ConvexBody::ball(vec![1.0 / 3.0, 1.0 / 3.0], 0.2).unwrap();
        check(&tri, &ball, Region::FullSphere, 1e-9);
        check(&ball, &tri, Region::FullSphere, 1e-9);
        let ell = ConvexBody::ellipsoid(vec![0.1, -0.2], vec![2.0, 1.0]).unwrap();
        check(&ell, &ball, Region::FullSphere, 1e-9);
    }

    #[test]
    fn constant_difference_is_instant_2d() {
        let square = ConvexBody::polytope(vec![
            vec![-1.0, -1.0],
            vec![1.0, -1.0],
            vec![1.0, 1.0],
            vec![-1.0, 1.0],
        ])
        .unwrap();
        let rounded = square.minkowski_ball(0.25).unwrap();
        let opts = SphereMaxOpts { tol: 1e-9, max_cells: 2_000_000 };
        let r = sphere_max_diff(&rounded, &square, &Region::FullSphere, &opts).unwrap();
        assert!(r.converged);
        assert!((r.lb - 0.25).abs() < 1e-12);
        assert!((r.ub - 0.25).abs() < 1e-9);
    }

    #[test]
    fn full_sphere_3d_pairs() {
        let a = ConvexBody::ball(vec![0.2, 0.1, -0.3], 1.0).unwrap();
        let b = ConvexBody::ball(vec![0.0, 0.0, 0.0], 1.0).unwrap();
        check(&a, &b, Region::FullSphere, 1e-8);
        let cube = ConvexBody::polytope(vec![
            vec![-1.0, -1.0, -1.0],
            vec![1.0, -1.0, -1.0],
            vec![-1.0, 1.0, -1.0],
            vec![1.0, 1.0, -1.0],
            vec![-1.0, -1.0, 1.0],
            vec![1.0, -1.0, 1.0],
            vec![-1.0, 1.0, 1.0],
            vec![1.0, 1.0, 1.0],
        ])
        .unwrap();
        check(&cube, &b, Region::FullSphere, 1e-8);
        let ell = ConvexBody::ellipsoid(vec![0.0, 0.0, 0.0], vec![2.0, 1.0, 1.0]).unwrap();
        check(&ell, &a, Region::FullSphere, 1e-7);
    }

    #[test]
    fn cap_region_matches_brute_2d() {
        let k = ConvexBody::ellipsoid(vec![0.0, 0.0], vec![2.0, 1.0]).unwrap();
        let p = vec![1.0, 0.0];
        let point = PointOracle(&p);
        let axis = vec![1.0, 0.0];
        let region = Region::Cap { axis, half_angle: core::f64::consts::FRAC_PI_3 };
        let opts = SphereMaxOpts { tol: 1e-10, max_cells: 500_000 };
        let r = sphere_max_diff(&k, &point, &region, &opts).unwrap();
        assert!(r.converged);
        // 1-D brute force over the angular interval.
        let mut brute = f64::NEG_INFINITY;
        for i in 0..=2_000_000 {
            let t = -core::f64::consts::FRAC_PI_3
                + 2.0 * core::f64::consts::FRAC_PI_3 * (i as f64) / 2_000_000.0;
            let v = [flt::cos(t), flt::sin(t)];
            brute = brute.max(k.support_raw(&v) - geom::dot(&p, &v));
        }
        assert!(brute <= r.ub + 1e-9);
        assert!(r.lb <= brute + 1e-9);
        assert!(r.gap() <= 1e-10 * 1.001);
    }

    #[test]
    fn cap_region_3d_sphere_tangency() {
        // Unit ball tangent at the origin seen from its own tangency cap:
        // the difference h_K − ⟨c,·⟩ is exactly 1 on the whole cap of
        // directions, the degenerate worst case for pruning.
        let k = ConvexBody::ball(vec![0.0, 0.0, 1.0], 1.0).unwrap();
        let c = vec![0.0, 0.0, 1.0];
        let point = PointOracle(&c);
        let region = Region::Cap { axis: vec![0.0, 0.0, -1.0], half_angle: 0.25 * core::f64::consts::PI };
        let opts = SphereMaxOpts { tol: 1e-6, max_cells: 6_000_000 };
        let r = sphere_max_diff(&k, &point, &region, &opts).unwrap();
        assert!(r.converged, "gap {}", r.gap());
        assert!((r.lb - 1.0).abs() < 1e-12);
        assert!(r.ub <= 1.0 + 1e-6);
    }

    #[test]
    fn cap_region_3d_matches_brute() {
        let ell = ConvexBody::ellipsoid(vec![0.1, 0.0, -0.1], vec![1.5, 1.0, 0.7]).unwrap();
        let p = vec![1.2, 0.0, 0.0];
        let point = PointOracle(&p);
        let axis = geom::normalize(&[1.0, 0.3, 0.2]).unwrap();
        let region = Region::Cap { axis: axis.clone(), half_angle: 0.9 };
        let opts = SphereMaxOpts { tol: 1e-7, max_cells: 2_000_000 };
        let r = sphere_max_diff(&ell, &point, &region, &opts).unwrap();
        assert!(r.converged);
        let mut brute = f64::NEG_INFINITY;
        for v in sampling::fibonacci_sphere(400_000) {
            if geom::angle_between_units(&v, &axis) <= 0.9 {
                brute = brute.max(ell.support_raw(&v) - geom::dot(&p, &v));
            }
        }
        // The maximum can sit on the region rim, which the area net samples
        // poorly; scan the rim circle explicitly as well.
        let basis = geom::tangent_basis(&axis);
        for i in 0..200_000 {
            let psi = core::f64::consts::TAU * (i as f64) / 200_000.0;
            let mut v = geom::scale(&axis, flt::cos(0.9));
            for (k, b) in basis.iter().enumerate() {
                let c = if k == 0 { flt::cos(psi) } else { flt::sin(psi) };
                v = geom::axpy(&v, flt::sin(0.9) * c, b);
            }
            brute = brute.max(ell.support_raw(&v) - geom::dot(&p, &v));
        }
        assert!(brute <= r.ub + 1e-9, "brute {brute} vs ub {}", r.ub);
        assert!(r.lb <= brute + 1e-7, "lb {} vs brute {brute}", r.lb);
    }

    #[test]
    fn shifted_oracle_translates_support() {
        let k = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
        let shifted = Shifted { inner: &k, shift: vec![0.5, 0.0] };
        let (h, y) = shifted.eval(&[1.0, 0.0]);
        assert!((h - 1.5).abs() < 1e-15);
        assert!(geom::dist(&y, &[1.5, 0.0]) < 1e-15);
    }
}
