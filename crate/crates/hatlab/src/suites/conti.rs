//! Indicator continuity: the zero-hat equivalence on the fixture corpus and
//! an empirical modulus of continuity over seeded probe pairs.

use hatlab_core::body::BodyKind;
use hatlab_core::hat::{has_hat, CapSpec, HatVerdict};
use hatlab_core::indicator::{curvature_indicator, IndicatorOpts};
use hatlab_core::{ConvexBody, Direction};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use super::{CaseResult, Scale, SuiteReport};
use crate::fixtures;
use crate::pool;

pub const ZERO_TOL: f64 = 1e-7;
pub const PROBES: usize = 500;
pub const PROBE_INPUT_BUDGET: f64 = 1e-3;
pub const PROBE_DELTA_BOUND: f64 = 0.1;

pub fn run(seed: u64, scale: Scale) -> SuiteReport {
    let mut report = SuiteReport::new("conti");
    report.csv_header = vec![
        "kind".into(),
        "id".into(),
        "d_input".into(),
        "delta_indicator".into(),
    ];

    // Zero-hat equivalence over the strictly convex corpus.
    let mut combos: Vec<(String, ConvexBody, Direction, f64, f64)> = Vec::new();
    for dim in [2usize, 3] {
        for (name, body) in fixtures::strictly_convex_corpus(dim) {
            let dirs: Vec<Direction> = match dim {
                2 => vec![
                    Direction::new(vec![0.0, 1.0]).unwrap(),
                    Direction::normalized(vec![1.0, 0.4]).unwrap(),
                ],
                _ => vec![
                    Direction::new(vec![0.0, 0.0, 1.0]).unwrap(),
                    Direction::normalized(vec![1.0, 0.25, 0.15]).unwrap(),
                ],
            };
            for tau in dirs {
                for eps in [0.25, 1.0, 4.0] {
                    combos.push((name.clone(), body.clone(), tau.clone(), eps, 0.3));
                }
            }
        }
    }
    if scale == Scale::Quick {
        combos.truncate(10);
    }
    let opts = IndicatorOpts { alpha_tol: 1e-8, kernel_cells: 2_000_000 };
    let equiv = pool::run_indexed(combos.len(), |i| {
        let (name, body, tau, eps, delta) = &combos[i];
        let v = curvature_indicator(body, tau, *eps, *delta, &opts);
        let alpha0 = match v {
            Ok(v) => v.alpha0,
            Err(e) => return (name.clone(), *eps, f64::NAN, format!("indicator: {e}")),
        };
        let x = body.touching_point(tau).unwrap();
        let cap = CapSpec::new(x, tau.neg(), *eps, *delta).unwrap();
        let verdict = match has_hat(body, &cap, ZERO_TOL) {
            Ok(v) => v,
            Err(e) => return (name.clone(), *eps, alpha0, format!("has_hat: {e}")),
        };
        let consistent = if alpha0 <= ZERO_TOL {
            matches!(verdict, HatVerdict::Holds)
        } else if alpha0 > 10.0 * ZERO_TOL {
            matches!(verdict, HatVerdict::Fails)
        } else {
            // Twilight band between tol and 10·tol: only certification noise
            // lands here; either verdict is acceptable.
            true
        };
        let msg = if consistent {
            String::new()
        } else {
            format!("α₀ = {alpha0:.3e} but hat verdict {verdict:?}")
        };
        (name.clone(), *eps, alpha0, msg)
    });
    let bad: Vec<String> = equiv
        .iter()
        .filter(|(_, _, _, msg)| !msg.is_empty())
        .map(|(name, eps, _, msg)| format!("{name} ε={eps}: {msg}"))
        .collect();
    report.push(CaseResult::new(
        "zero-hat-equivalence",
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} corpus combinations consistent", equiv.len())
        } else {
            bad.join("; ")
        },
    ));

    // Probe pairs: small perturbations of body and direction.
    let n = scale.trials(PROBES);
    let probe_opts = IndicatorOpts { alpha_tol: 1e-6, kernel_cells: 600_000 };
    let outcomes = pool::run_indexed(n, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed ^ (i as u64));
        probe_once(i, &mut rng, &probe_opts)
    });
    let mut max_jump: f64 = 0.0;
    let mut failures = Vec::new();
    for (i, out) in outcomes.iter().enumerate() {
        match out {
            Ok((kind, d_input, jump)) => {
                max_jump = max_jump.max(*jump);
                report.csv_rows.push(vec![
                    kind.clone(),
                    i.to_string(),
                    format!("{d_input:.3e}"),
                    format!("{jump:.3e}"),
                ]);
                if *jump > PROBE_DELTA_BOUND {
                    failures.push(format!("probe {i} ({kind}): Δ𝔎 = {jump:.3e}"));
                }
            }
            Err(e) => failures.push(format!("probe {i}: {e}")),
        }
    }
    report.push(CaseResult::new(
        "continuity-probes",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{n} probes, max Δ𝔎 = {max_jump:.3e} for inputs within {PROBE_INPUT_BUDGET:.0e}")
        } else {
            failures.join("; ")
        },
    ));
    report
}

/// One probe: perturb a strictly convex body and the direction within a
/// combined input budget; return (kind, d_PH + angle, Δ𝔎).
fn probe_once(
    i: usize,
    rng: &mut ChaCha8Rng,
    opts: &IndicatorOpts,
) -> anyhow::Result<(String, f64, f64)> {
    let dim = if i % 5 < 3 { 2 } else { 3 };
    let kind_pick = i % 10;
    let angle_budget = 0.4 * PROBE_INPUT_BUDGET;
    let body_budget = 0.5 * PROBE_INPUT_BUDGET;
    let (kind, base, perturbed, d_ph): (&str, ConvexBody, ConvexBody, f64) = if kind_pick < 5 {
        let r = rng.gen_range(0.5..1.5);
        let base = ConvexBody::ball(vec![0.0; dim], r)?;
        let dr = rng.gen_range(-0.5..0.5) * body_budget;
        let mut c = vec![0.0; dim];
        c[0] = rng.gen_range(0.0..(body_budget - dr.abs()).max(0.0));
        let shift = c[0];
        let other = ConvexBody::ball(c, r + dr)?;
        ("ball", base, other, shift + dr.abs())
    } else if kind_pick < 8 {
        let base = fixtures::rounded_cube(dim, 0.45, 0.1);
        let dphi = rng.gen_range(0.1..1.0) * body_budget;
        let BodyKind::Rounded { .. } = base.kind() else { unreachable!() };
        let other = fixtures::cube(dim, 0.45).minkowski_ball(0.1 + dphi)?;
        ("rounded-cube", base, other, dphi)
    } else {
        let axes: Vec<f64> = if dim == 2 { vec![1.6, 1.0] } else { vec![1.6, 1.0, 0.8] };
        let base = ConvexBody::ellipsoid(vec![0.0; dim], axes.clone())?;
        let mut axes2 = axes.clone();
        let da = rng.gen_range(0.1..1.0) * body_budget;
        axes2[0] += da;
        let other = ConvexBody::ellipsoid(vec![0.0; dim], axes2)?;
        // Axis-aligned ellipsoids: the support difference is bounded by the
        // largest semi-axis change.
        ("ellipsoid", base, other, da)
    };
    let tau = tilted_direction(dim);
    let rot = rng.gen_range(0.0..angle_budget);
    let tau2 = rotate_in_plane(&tau, rot)?;
    let eps = [0.5, 1.0][i % 2];
    let delta = 1.0 / 3.0;
    let a = curvature_indicator(&base, &tau, eps, delta, opts)?;
    let b = curvature_indicator(&perturbed, &tau2, eps, delta, opts)?;
    let jump = (a.alpha0 - b.alpha0).abs();
    Ok((kind.to_string(), d_ph + rot, jump))
}

fn tilted_direction(dim: usize) -> Direction {
    match dim {
        2 => Direction::normalized(vec![0.3, 1.0]).unwrap(),
        _ => Direction::normalized(vec![0.3, 1.0, 0.2]).unwrap(),
    }
}

fn rotate_in_plane(tau: &Direction, angle: f64) -> anyhow::Result<Direction> {
    let v = tau.as_slice();
    let mut out = v.to_vec();
    let (c, s) = (angle.cos(), angle.sin());
    out[0] = c * v[0] - s * v[1];
    out[1] = s * v[0] + c * v[1];
    Direction::normalized(out).map_err(|e| anyhow::anyhow!("{e}"))
}

/// Small informational grid over (ε, δ): recorded in reports, never
/// asserted (joint continuity in the cap parameters is not claimed).
pub fn eps_delta_sensitivity(body: &ConvexBody, tau: &Direction) -> Vec<(f64, f64, f64)> {
    let opts = IndicatorOpts { alpha_tol: 1e-7, kernel_cells: 400_000 };
    let mut rows = Vec::new();
    for eps in [0.5, 0.55] {
        for delta in [0.3, 0.32] {
            if let Ok(v) = curvature_indicator(body, tau, eps, delta, &opts) {
                rows.push((eps, delta, v.alpha0));
            }
        }
    }
    rows
}
