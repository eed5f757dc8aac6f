//! Shared fixture builders for the verification suites.

use anyhow::{anyhow, Result};
use hatlab_core::body::BodyKind;
use hatlab_core::geom;
use hatlab_core::sampling;
use hatlab_core::spike;
use hatlab_core::{CapSpec, ConvexBody, Direction};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn unit_ball(dim: usize) -> ConvexBody {
    ConvexBody::ball(vec![0.0; dim], 1.0).expect("unit ball")
}

/// Ball of radius 1 tangent to the origin from above, with the standard cap
/// at the origin pointing down: the base fixture of the stability suite.
pub fn tangent_ball_with_cap(dim: usize, eps: f64, delta: f64) -> (ConvexBody, CapSpec) {
    let mut center = vec![0.0; dim];
    center[dim - 1] = 1.0;
    let body = ConvexBody::ball(center, 1.0).expect("tangent ball");
    let mut axis = vec![0.0; dim];
    axis[dim - 1] = -1.0;
    let cap = CapSpec::new(
        vec![0.0; dim],
        Direction::new(axis).unwrap(),
        eps,
        delta,
    )
    .expect("base cap");
    (body, cap)
}

/// Axis-aligned cube `[−half, half]^dim` as a polytope.
pub fn cube(dim: usize, half: f64) -> ConvexBody {
    let mut vertices = Vec::with_capacity(1 << dim);
    for mask in 0..(1u32 << dim) {
        let v: Vec<f64> = (0..dim)
            .map(|k| if mask >> k & 1 == 1 { half } else { -half })
            .collect();
        vertices.push(v);
    }
    ConvexBody::polytope(vertices).expect("cube")
}

/// Rounded cube used as a strictly convex polytope stand-in.
pub fn rounded_cube(dim: usize, half: f64, phi: f64) -> ConvexBody {
    cube(dim, half).minkowski_ball(phi).expect("rounded cube")
}

/// Inscribed polygon of the ball with radial vertex jitter; returns the body
/// together with an exact Hausdorff distance to the ball (computable in the
/// plane from vertex radii and edge distances to the center).
pub fn jittered_polygon(
    center: &[f64],
    radius: f64,
    sides: usize,
    jitter: f64,
    rng: &mut ChaCha8Rng,
) -> (ConvexBody, f64) {
    assert_eq!(center.len(), 2);
    let mut vertices = Vec::with_capacity(sides);
    let mut radii = Vec::with_capacity(sides);
    for i in 0..sides {
        let t = std::f64::consts::TAU * (i as f64) / (sides as f64);
        let r = radius - rng.gen_range(0.0..jitter);
        radii.push(r);
        vertices.push(vec![
            center[0] + r * t.cos(),
            center[1] + r * t.sin(),
        ]);
    }
    let body = ConvexBody::polytope(vertices.clone()).expect("jittered polygon");
    // d_PH(ball, inscribed polygon) about the shared center: the polygon lies
    // inside the ball, so the distance is R − (min support over directions)
    // = R − min distance from the center to an edge.
    let mut min_edge = f64::INFINITY;
    for i in 0..sides {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % sides];
        min_edge = min_edge.min(segment_distance(center, a, b));
    }
    let overshoot = radii.iter().cloned().fold(0.0_f64, f64::max) - radius;
    let dph = (radius - min_edge).max(overshoot.max(0.0));
    (body, dph)
}

fn segment_distance(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let ab = geom::sub(b, a);
    let ap = geom::sub(p, a);
    let t = (geom::dot(&ap, &ab) / geom::dot(&ab, &ab)).clamp(0.0, 1.0);
    geom::dist(p, &geom::axpy(a, t, &ab))
}

/// Perturbation families with analytic Hausdorff bounds, for d = 2 and 3.
pub enum Perturbation {
    JitteredPolygon,
    SpikedHull,
    MovedBall,
    Rounded,
}

/// Draws a perturbation of the ball `B(center, radius)` with an analytic
/// guarantee `d_PH < phi_cap`; returns the body and the distance bound.
pub fn perturb_ball(
    body: &ConvexBody,
    kind: &Perturbation,
    phi_cap: f64,
    rng: &mut ChaCha8Rng,
) -> Result<(ConvexBody, f64)> {
    let BodyKind::Ball { center, radius } = body.kind() else {
        return Err(anyhow!("perturb_ball needs a ball fixture"));
    };
    let dim = body.dim();
    match kind {
        Perturbation::JitteredPolygon => {
            if dim != 2 {
                return Err(anyhow!("polygon approximations are planar"));
            }
            let sides = 512;
            // Inscribed-polygon sag plus jitter must stay below the cap.
            let sag = radius * (1.0 - (std::f64::consts::PI / sides as f64).cos());
            let jitter = (0.6 * phi_cap - sag).max(0.1 * phi_cap);
            let (k, d) = jittered_polygon(center, *radius, sides, jitter, rng);
            Ok((k, d))
        }
        Perturbation::SpikedHull => {
            let mut k = body.clone();
            let n = rng.gen_range(1..=4usize);
            let mut worst = 0.0_f64;
            for _ in 0..n {
                let w = sampling::random_unit(rng, dim);
                let tau = Direction::new(w.clone()).unwrap();
                let tip = k.support_point_raw(&w);
                let theta = phi_cap * rng.gen_range(0.1..0.75);
                k = spike::spike(&k, &tip, &tau, theta).map_err(|e| anyhow!("{e}"))?;
                worst = worst.max(geom::norm(&geom::sub(
                    &k.support_point_raw(&w),
                    center,
                )) - radius);
            }
            Ok((k, worst.max(0.0)))
        }
        Perturbation::MovedBall => {
            let dir = sampling::random_unit(rng, dim);
            let shift = phi_cap * rng.gen_range(0.1..0.45);
            let dr = phi_cap * rng.gen_range(-0.4..0.4);
            let c = geom::axpy(center, shift, &dir);
            let k = ConvexBody::ball(c, radius + dr).map_err(|e| anyhow!("{e}"))?;
            Ok((k, shift + dr.abs()))
        }
        Perturbation::Rounded => {
            let phi = phi_cap * rng.gen_range(0.1..0.8);
            let k = body.minkowski_ball(phi).map_err(|e| anyhow!("{e}"))?;
            Ok((k, phi))
        }
    }
}

/// Strictly convex corpus used by the continuity and zero-hat suites.
pub fn strictly_convex_corpus(dim: usize) -> Vec<(String, ConvexBody)> {
    let mut out: Vec<(String, ConvexBody)> = Vec::new();
    for r in [1.0 / 3.0, 1.0, 2.0] {
        out.push((format!("ball-r{r:.3}-d{dim}"), ConvexBody::ball(vec![0.0; dim], r).unwrap()));
    }
    let axes: Vec<f64> = match dim {
        2 => vec![2.0, 1.0],
        _ => vec![2.0, 1.0, 1.0],
    };
    out.push((
        format!("ellipsoid-d{dim}"),
        ConvexBody::ellipsoid(vec![0.0; dim], axes).unwrap(),
    ));
    out.push((format!("rounded-cube-d{dim}"), rounded_cube(dim, 0.45, 0.1)));
    out.push((
        format!("revolution-p1.5-d{dim}"),
        ConvexBody::revolution(1.5, 0.5, dim).unwrap(),
    ));
    out
}
