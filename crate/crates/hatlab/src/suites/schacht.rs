//! Nesting lemma: sampled inclusion between hat-family intersections and
//! positive boundary distance away from the shared tip.

use hatlab_core::hat::{nesting_check, CapFamily};
use hatlab_core::Direction;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use super::{CaseResult, Scale, SuiteReport};
use crate::pool;

pub const PAIRS: usize = 20;
pub const SAMPLES: usize = 10_000;
pub const NEIGHBORHOOD: f64 = 0.05;

fn random_family_pair(
    rng: &mut ChaCha8Rng,
    dim: usize,
) -> anyhow::Result<(CapFamily, CapFamily)> {
    let len = rng.gen_range(1..=3usize);
    let tip = vec![0.0; dim];
    let mut axis = vec![0.0; dim];
    axis[dim - 1] = -1.0;
    let axis = Direction::new(axis)?;
    let mut eps = rng.gen_range(0.8..1.2);
    let mut delta = rng.gen_range(0.28..0.42);
    let gap_scale = rng.gen_range(0.08..0.2);
    let angle_gap = rng.gen_range(0.02..0.05);
    let mut base = Vec::new();
    let mut primed = Vec::new();
    for _ in 0..len {
        base.push((eps, delta));
        primed.push((eps * (1.0 - gap_scale), (delta + angle_gap).min(0.49)));
        eps *= rng.gen_range(0.5..0.7);
        delta *= rng.gen_range(0.75..0.95);
    }
    Ok((
        CapFamily::new(tip.clone(), axis.clone(), base).map_err(|e| anyhow::anyhow!("{e}"))?,
        CapFamily::new(tip, axis, primed).map_err(|e| anyhow::anyhow!("{e}"))?,
    ))
}

pub fn run(seed: u64, scale: Scale) -> SuiteReport {
    let mut report = SuiteReport::new("schacht");
    report.csv_header = vec![
        "pair".into(),
        "dim".into(),
        "family_len".into(),
        "violations".into(),
        "min_boundary_distance".into(),
    ];
    let pairs = scale.trials(PAIRS);
    let samples = match scale {
        Scale::Full => SAMPLES,
        Scale::Quick => 1500,
    };
    let outcomes = pool::run_indexed(pairs, |i| {
        let dim = if i % 2 == 0 { 2 } else { 3 };
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5c4ac47 ^ (i as u64));
        let (fam, fam2) = match random_family_pair(&mut rng, dim) {
            Ok(p) => p,
            Err(e) => return Err(format!("pair {i}: {e}")),
        };
        let len = fam.params().len();
        match nesting_check(&fam, &fam2, samples, NEIGHBORHOOD, seed ^ (i as u64)) {
            Ok(rep) => Ok((i, dim, len, rep)),
            Err(e) => Err(format!("pair {i}: {e}")),
        }
    });
    let mut all_ok = true;
    let mut details = Vec::new();
    let mut min_distance = f64::INFINITY;
    for out in outcomes {
        match out {
            Ok((i, dim, len, rep)) => {
                report.csv_rows.push(vec![
                    i.to_string(),
                    dim.to_string(),
                    len.to_string(),
                    rep.inclusion_violations.len().to_string(),
                    format!("{:.6e}", rep.min_boundary_distance),
                ]);
                if !rep.inclusion_violations.is_empty() {
                    all_ok = false;
                    details.push(format!(
                        "pair {i}: {} inclusion violations, first at {:?}",
                        rep.inclusion_violations.len(),
                        rep.inclusion_violations.first()
                    ));
                }
                if rep.degenerate {
                    all_ok = false;
                    details.push(format!("pair {i}: degenerate hypotheses"));
                }
                min_distance = min_distance.min(rep.min_boundary_distance);
            }
            Err(e) => {
                all_ok = false;
                details.push(e);
            }
        }
    }
    report.push(CaseResult::new(
        "inclusion",
        all_ok,
        if all_ok {
            format!("0 violations over {pairs} pairs × {samples} samples")
        } else {
            details.join("; ")
        },
    ));
    report.push(CaseResult::new(
        "positive-boundary-distance",
        min_distance > 0.0,
        format!("min sampled distance outside the {NEIGHBORHOOD}-neighborhood: {min_distance:.6e}"),
    ));
    report
}
