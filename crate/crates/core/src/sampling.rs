//! Deterministic direction nets and seeded sphere sampling.

use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::geom::flt;
use crate::geom::{self};

/// `n` directions evenly spaced on the unit circle.
pub fn circle_net(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| {
            let t = core::f64::consts::TAU * (i as f64) / (n as f64);
            alloc::vec![flt::cos(t), flt::sin(t)]
        })
        .collect()
}

/// Fibonacci lattice on S²: near-uniform, deterministic.
pub fn fibonacci_sphere(n: usize) -> Vec<Vec<f64>> {
    let golden = (1.0 + flt::sqrt(5.0)) / 2.0;
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * ((i as f64) + 0.5) / (n as f64);
            let r = flt::sqrt((1.0 - z * z).max(0.0));
            let phi = core::f64::consts::TAU * (i as f64) / golden;
            alloc::vec![r * flt::cos(phi), r * flt::sin(phi), z]
        })
        .collect()
}

/// Direction net for an ambient dimension (circle net in 2-D, Fibonacci in 3-D).
pub fn direction_net(dim: usize, n: usize) -> Vec<Vec<f64>> {
    match dim {
        2 => circle_net(n),
        3 => fibonacci_sphere(n),
        _ => panic!("direction nets implemented for d ∈ {{2,3}}"),
    }
}

/// Uniform unit vector via normalized Gaussians (Box-Muller).
pub fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let mut v = Vec::with_capacity(dim);
        while v.len() < dim {
            let u1: f64 = rng.gen::<f64>().max(1e-300);
            let u2: f64 = rng.gen();
            let r = flt::sqrt(-2.0 * flt::ln(u1));
            v.push(r * flt::cos(core::f64::consts::TAU * u2));
            if v.len() < dim {
                v.push(r * flt::sin(core::f64::consts::TAU * u2));
            }
        }
        if let Some(u) = geom::normalize(&v) {
            return u;
        }
    }
}

/// Uniform point in the unit ball (rejection-free: direction × radius).
pub fn random_in_ball(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    let u = random_unit(rng, dim);
    let r = flt::powf(rng.gen::<f64>(), 1.0 / dim as f64);
    geom::scale(&u, r)
}

/// Vertices and faces of the regular icosahedron (unit circumradius).
pub fn icosahedron() -> (Vec<Vec<f64>>, Vec<[usize; 3]>) {
    let phi = (1.0 + flt::sqrt(5.0)) / 2.0;
    let raw = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ];
    let verts: Vec<Vec<f64>> = raw
        .iter()
        .map(|v| geom::normalize(&v[..]).unwrap())
        .collect();
    let faces = alloc::vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    (verts, faces)
}
