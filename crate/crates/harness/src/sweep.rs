//! Ratio sweeps: evaluate each configured instance against its reference
//! expression and emit one ReportRow per instance. No pass/fail here; the
//! hidden constants of the growth statements are unknown, so the report
//! records ratios and leaves judgment to the reader.

use std::time::Instant;

use fpsums_core::rng::derive_seed;
use rayon::prelude::*;

use crate::config::Config;
use crate::error::{HarnessError, Result};
use crate::eval::eval_row;
use crate::family::FamilySpec;
use crate::report::ReportRow;

/// Base seed of the built-in plan; entry seeds are derived from it by
/// stable entry index, so the plan is byte-stable across runs.
pub const DEFAULT_SWEEP_SEED: u64 = 20240817;

#[derive(Clone, Debug)]
pub struct PlanEntry {
    pub p: u64,
    pub quantity: String,
    pub family: String,
    pub seed: u64,
}

struct PlanBuilder {
    entries: Vec<PlanEntry>,
    base: u64,
}

impl PlanBuilder {
    fn new(base: u64) -> PlanBuilder {
        PlanBuilder {
            entries: Vec::new(),
            base,
        }
    }

    /// Entry seed is derived from the running index, then the family
    /// closure bakes role seeds into the descriptor text.
    fn push(&mut self, p: u64, quantity: &str, family: impl FnOnce(u64) -> String) {
        let seed = derive_seed(self.base, self.entries.len() as u64);
        self.entries.push(PlanEntry {
            p,
            quantity: quantity.to_string(),
            family: family(seed),
            seed,
        });
    }
}

fn isqrt(p: u64) -> u64 {
    let mut s = (p as f64).sqrt() as u64;
    while (s + 1) * (s + 1) <= p {
        s += 1;
    }
    while s * s > p {
        s -= 1;
    }
    s
}

fn random(n: u64, seed: u64) -> String {
    format!("random:{n}:{seed}")
}

/// The built-in sweep: every growth statement the library models gets rows
/// across a spread of primes, with subgroup pairs chosen to land in each
/// branch of the branched references. Primes stay at desk scale: full
/// machinery up to 10^4, one convolution-only difference-product row near
/// 1.3 * 10^5.
pub fn default_plan() -> Vec<PlanEntry> {
    let mut b = PlanBuilder::new(DEFAULT_SWEEP_SEED);

    // Difference-product growth, A near sqrt(p).
    for p in [1009, 2521, 9241, 9973] {
        for _ in 0..3 {
            b.push(p, "dtimes", |s| random(isqrt(p), derive_seed(s, 0)));
        }
    }
    b.push(131071, "dtimes", |s| random(362, derive_seed(s, 0)));

    // Third ratio moment of A - A, and the restricted ratio energy at
    // several S sizes up to A^2.
    for p in [1009u64, 2521] {
        let a = isqrt(p);
        for _ in 0..2 {
            b.push(p, "energy3_div_rep", |s| random(a, derive_seed(s, 0)));
        }
        for sz in [a, a * a / 4, (a * a).min(p - 1)] {
            b.push(p, "energy_div_rep_set", |s| {
                format!(
                    "{};{}",
                    random(a, derive_seed(s, 0)),
                    random(sz, derive_seed(s, 1))
                )
            });
        }
    }

    // Multiplicative energy of r_{A-A} against the eigenvalue-method
    // reference with sampled K.
    for p in [1009u64, 2521] {
        for _ in 0..2 {
            b.push(p, "energy_mul_rep", |s| random(isqrt(p), derive_seed(s, 0)));
        }
    }

    // Subgroup triple counts; pairs picked per prime so all three branches
    // of the reference appear (GH <= p, p < GH < p^{4/3}, GH >= p^{4/3}).
    for (p, pairs) in [
        (101u64, &[(50u64, 50u64), (25, 10), (10, 5)][..]),
        (2521, &[(252, 140), (84, 60), (56, 42)][..]),
    ] {
        for &(g, h) in pairs {
            b.push(p, "triples_literal", |_| {
                format!("subgroup:{g};subgroup:{h}")
            });
        }
    }

    // Nonzero-product difference counts over subgroup pairs; both branches
    // of the GH >= p ln p split, convolution route so larger grids are fine.
    for (p, pairs) in [
        (101u64, &[(50u64, 50u64), (25, 10)][..]),
        (2521, &[(252, 140), (84, 60), (56, 42)][..]),
        (9241, &[(1320, 924), (120, 60)][..]),
    ] {
        for &(g, h) in pairs {
            b.push(p, "dtimes_tilde_subgroups", |_| {
                format!("subgroup:{g};subgroup:{h}")
            });
        }
    }

    // Trilinear sums over random sets, Y (and Z for the pair-weight form)
    // held under sqrt(p).
    for (p, sx, sy, sz, tx, ty, tz) in [
        (1009u64, 100, 31, 60, 100, 31, 25),
        (2521, 200, 50, 120, 150, 50, 45),
    ] {
        for _ in 0..2 {
            b.push(p, "trilinear_s_mod", |s| {
                format!(
                    "{};{};{}",
                    random(sx, derive_seed(s, 0)),
                    random(sy, derive_seed(s, 1)),
                    random(sz, derive_seed(s, 2))
                )
            });
        }
        for _ in 0..2 {
            b.push(p, "trilinear_t_mod", |s| {
                format!(
                    "{};{};{}",
                    random(tx, derive_seed(s, 0)),
                    random(ty, derive_seed(s, 1)),
                    random(tz, derive_seed(s, 2))
                )
            });
        }
    }

    // Trilinear pair-weight sums over subgroup triples, both branches of
    // the GH >= p ln p split.
    for (p, triples) in [
        (101u64, &[(25u64, 50u64, 10u64), (20, 20, 10)][..]),
        (2521, &[(126, 252, 84), (84, 84, 60)][..]),
    ] {
        for &(f, g, h) in triples {
            b.push(p, "trilinear_t_subgroups", |_| {
                format!("subgroup:{f};subgroup:{g};subgroup:{h}")
            });
        }
    }

    // Shifted-reciprocal windows at several lengths.
    for p in [1009u64, 9973] {
        for (a, z) in [(3u64, 30u64), (5, 60), (7, 100)] {
            b.push(p, "energy_mul_recip_shift", |_| {
                format!("recip-shift:{a}:0:{z}")
            });
        }
    }

    // Trinomial character sums: exponent triples covering both branches of
    // the reference and both truth values of its gcd hypothesis.
    for (p, specs) in [
        (
            2521u64,
            &[
                "trinom:1:2:3:360:504:2520:0",
                "trinom:1:1:1:7:3:8:1",
                "trinom:2:3:5:504:280:1:1",
            ][..],
        ),
        (
            9241,
            &["trinom:1:2:3:840:1320:9240:0", "trinom:4:5:6:1320:840:1:1"][..],
        ),
    ] {
        for spec in specs {
            b.push(p, "trinomial_mod", |_| spec.to_string());
        }
    }

    b.entries
}

/// Config-driven plan: each family is swept across the configured primes
/// and trials with a quantity matching its kind. Random templates get
/// per-entry seeds baked into the descriptor.
pub fn plan_from_config(cfg: &Config) -> Result<Vec<PlanEntry>> {
    cfg.validate()?;
    let families = cfg.parsed_families();
    let mut b = PlanBuilder::new(cfg.seed);
    for &p in &cfg.primes {
        for spec in &families {
            let trials = if spec.needs_seed() { cfg.trials } else { 1 };
            for _ in 0..trials {
                match spec {
                    FamilySpec::RecipShift { .. } => {
                        b.push(p, "energy_mul_recip_shift", |_| spec.to_string());
                    }
                    FamilySpec::Subgroup { d } => {
                        b.push(p, "triples_literal", |_| {
                            format!("subgroup:{d};subgroup:{d}")
                        });
                        b.push(p, "dtimes_tilde_subgroups", |_| {
                            format!("subgroup:{d};subgroup:{d}")
                        });
                    }
                    _ => {
                        let described = |s: u64| spec.with_seed(derive_seed(s, 0)).to_string();
                        b.push(p, "dtimes", described);
                        b.push(p, "energy3_div_rep", described);
                    }
                }
            }
        }
    }
    Ok(b.entries)
}

/// Run entries in parallel; output order follows the plan regardless of
/// scheduling. Under the determinism flag elapsed_ms is zeroed so repeated
/// runs are byte-identical.
pub fn run_plan(entries: &[PlanEntry], deterministic: bool) -> Result<Vec<ReportRow>> {
    entries
        .par_iter()
        .map(|e| {
            let start = Instant::now();
            let ev = eval_row(e.p, &e.quantity, &e.family, e.seed, deterministic)?;
            let elapsed_ms = if deterministic {
                0.0
            } else {
                start.elapsed().as_secs_f64() * 1e3
            };
            Ok(ReportRow {
                p: e.p,
                family: e.family.clone(),
                sizes: ev.sizes,
                quantity: e.quantity.clone(),
                value: ev.value,
                reference_expr: ev.reference_expr,
                reference_value: ev.reference_value,
                ratio: ev.ratio,
                range_ok: ev.range_ok,
                seed: e.seed,
                elapsed_ms,
            })
        })
        .collect()
}

/// Recompute a row from its own recorded identity; any drift in value or
/// reference is a replay failure.
pub fn replay(row: &ReportRow) -> Result<()> {
    let ev = eval_row(row.p, &row.quantity, &row.family, row.seed, true)?;
    if ev.value != row.value {
        return Err(HarnessError::ReplayMismatch(format!(
            "p={} quantity={} family={}: value {} recomputed as {}",
            row.p, row.quantity, row.family, row.value, ev.value
        )));
    }
    if ev.reference_value != row.reference_value {
        return Err(HarnessError::ReplayMismatch(format!(
            "p={} quantity={} family={}: reference {} recomputed as {}",
            row.p, row.quantity, row.family, row.reference_value, ev.reference_value
        )));
    }
    Ok(())
}
