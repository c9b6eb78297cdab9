//! Release gate: one test per acceptance criterion, numbered so a plain
//! `cargo test` run reads as a checklist. Each test also prints an
//! `ACCEPTANCE <n> <name>: PASS` line (visible under --nocapture).
//!
//! Tolerances are pinned here, not in helper code, so loosening one is a
//! visible diff.

use std::sync::Arc;
use std::time::Instant;

use fpsums_core::energy::{
    collinear_quadruples, collinear_triples, d_times, d_times_pair_product, d_times_tilde, energy,
    energy3, energy_fn, n_count, r3_pivot_sum, triples_product_literal,
};
use fpsums_core::expsum::{trilinear_s, trinomial_sum, TrinomialSpec, WeightVec};
use fpsums_core::rng::{derive_seed, SplitMix64};
use fpsums_core::{diff_set, prod_set, rep_fn, ArithOp, FieldCtx, FpSet, Strategy};
use fpsums_harness::{default_plan, replay, run_exact_suite, run_plan, Config};
use num_bigint::BigUint;

const SEED: u64 = 20240817;

fn pass(n: u32, name: &str) {
    println!("ACCEPTANCE {n:02} {name}: PASS");
}

fn random_set(ctx: &Arc<FieldCtx>, max_n: u64, seed: u64) -> FpSet {
    let mut rng = SplitMix64::new(seed);
    let n = 1 + rng.next_below(max_n.min(ctx.p()));
    FpSet::random(ctx, n, rng.next_u64()).unwrap()
}

/// Every counting quantity: fast path against full tuple enumeration on 50
/// seeded instances, exact match, under two minutes.
#[test]
fn acceptance_01_oracle_equivalence() {
    let start = Instant::now();
    let ctxs = [FieldCtx::new(11).unwrap(), FieldCtx::new(31).unwrap()];
    for i in 0..50u64 {
        let ctx = &ctxs[(i % 2) as usize];
        let s = derive_seed(SEED, 100 + i);
        let u = random_set(ctx, 6, derive_seed(s, 0));
        let v = random_set(ctx, 6, derive_seed(s, 1));
        let w = random_set(ctx, 6, derive_seed(s, 2));
        for op in [ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div] {
            assert_eq!(
                energy(&u, &v, op, Strategy::Oracle).unwrap().value,
                energy(&u, &v, op, Strategy::Fast).unwrap().value,
                "energy {op:?} instance {i}"
            );
            assert_eq!(
                energy3(&u, &v, op, Strategy::Oracle).unwrap().value,
                energy3(&u, &v, op, Strategy::Fast).unwrap().value,
                "energy3 {op:?} instance {i}"
            );
        }
        type PairCount =
            fn(&FpSet, &FpSet, Strategy) -> fpsums_core::Result<fpsums_core::energy::CountResult>;
        for (name, f) in [
            ("d_times", d_times as PairCount),
            ("d_times_tilde", d_times_tilde as PairCount),
            ("collinear_triples", collinear_triples as PairCount),
            (
                "triples_product_literal",
                triples_product_literal as PairCount,
            ),
        ] {
            assert_eq!(
                f(&u, &v, Strategy::Oracle).unwrap().value,
                f(&u, &v, Strategy::Fast).unwrap().value,
                "{name} instance {i}"
            );
        }
        assert_eq!(
            n_count(&u, &v, &w, Strategy::Oracle).unwrap().value,
            n_count(&u, &v, &w, Strategy::Fast).unwrap().value,
            "n_count instance {i}"
        );
        assert_eq!(
            collinear_quadruples(&u, Strategy::Oracle).unwrap().value,
            collinear_quadruples(&u, Strategy::Fast).unwrap().value,
            "collinear_quadruples instance {i}"
        );
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 120,
        "took {elapsed:?}, budget 2 minutes"
    );
    pass(1, "oracle_equivalence");
}

/// D(A) = E_mul(r_{A-A}) exactly: pair-product oracle on the left,
/// convolution on the right, sets up to 60 elements, primes up to 10^3.
#[test]
fn acceptance_02_dtimes_is_rep_fn_energy() {
    for (i, &p) in [101u64, 257, 499, 997].iter().cycle().take(100).enumerate() {
        let ctx = FieldCtx::new(p).unwrap();
        let a = random_set(&ctx, 60, derive_seed(SEED, 200 + i as u64));
        let lhs = d_times_pair_product(&a, &a);
        let r = rep_fn(&a, &a, ArithOp::Sub).unwrap();
        let rhs = energy_fn(&r, ArithOp::Mul, Strategy::Fast).unwrap().value;
        assert_eq!(lhs, rhs, "p={p} instance {i} |A|={}", a.len());
    }
    pass(2, "dtimes_is_rep_fn_energy");
}

/// The worked instance p=5, A={1,2}, every number cross-checked by
/// enumeration in-suite rather than trusted.
#[test]
fn acceptance_03_worked_instance() {
    let ctx = FieldCtx::new(5).unwrap();
    let a = FpSet::from_elems(&ctx, [1u64, 2]);
    for strat in [Strategy::Oracle, Strategy::Fast] {
        assert_eq!(
            d_times(&a, &a, strat).unwrap().value,
            BigUint::from(152u32),
            "{strat:?}"
        );
        assert_eq!(
            d_times_tilde(&a, &a, strat).unwrap().value,
            BigUint::from(8u32),
            "{strat:?}"
        );
        assert_eq!(
            energy(&a, &a, ArithOp::Add, strat).unwrap().value,
            BigUint::from(6u32),
            "{strat:?}"
        );
    }
    let diffs = diff_set(&a, &a).unwrap();
    let prods = prod_set(&diffs, &diffs).unwrap();
    assert_eq!(prods.len(), 3);
    let d = d_times(&a, &a, Strategy::Fast).unwrap().value;
    assert!(
        BigUint::from(prods.len() as u64) * d >= BigUint::from(2u32).pow(8),
        "|P| * D >= |A|^8"
    );
    pass(3, "worked_instance");
}

/// The full default verify config: sandwich and Cauchy link (and the other
/// five exact laws) with zero failures across every instance.
#[test]
fn acceptance_04_default_verify_clean() {
    let outcomes = run_exact_suite(&Config::default_verify()).unwrap();
    assert_eq!(outcomes.len(), 7);
    for o in &outcomes {
        assert!(o.instances > 0, "{} ran nothing", o.name);
        assert_eq!(o.failures, 0, "{}: {:?}", o.name, o.reproducers);
        assert!(o.passed());
    }
    for name in ["sandwich", "cauchy_link"] {
        assert!(outcomes.iter().any(|o| o.name == name), "{name} missing");
    }
    pass(4, "default_verify_clean");
}

/// Collinear quadruples agree between the ratio-histogram route and the
/// per-pivot division-representation route on 30 instances.
#[test]
fn acceptance_05_q_identity() {
    for (i, &p) in [11u64, 31, 101].iter().cycle().take(30).enumerate() {
        let ctx = FieldCtx::new(p).unwrap();
        let a = random_set(&ctx, 20.min(p - 1), derive_seed(SEED, 300 + i as u64));
        assert_eq!(
            collinear_quadruples(&a, Strategy::Fast).unwrap().value,
            r3_pivot_sum(&a, Strategy::Fast).unwrap().value,
            "p={p} instance {i} |A|={}",
            a.len()
        );
    }
    pass(5, "q_identity");
}

/// E_mul(G) = |G|^3 and E3_mul(G) = |G|^4 for every subgroup of every
/// prime field with p <= 10^3, computed through the convolution path.
#[test]
fn acceptance_06_subgroup_energy_laws() {
    let mut primes = Vec::new();
    let mut is_comp = [false; 1001];
    for n in 2..=1000usize {
        if !is_comp[n] {
            primes.push(n as u64);
            for m in (n * n..=1000).step_by(n) {
                is_comp[m] = true;
            }
        }
    }
    assert_eq!(primes.len(), 168);
    let mut checked = 0u32;
    for &p in &primes {
        let ctx = FieldCtx::new(p).unwrap();
        for d in 1..=p - 1 {
            if (p - 1) % d != 0 {
                continue;
            }
            let g = FpSet::subgroup(&ctx, d).unwrap();
            assert_eq!(
                energy(&g, &g, ArithOp::Mul, Strategy::Fast).unwrap().value,
                BigUint::from(d).pow(3),
                "E_mul p={p} d={d}"
            );
            assert_eq!(
                energy3(&g, &g, ArithOp::Mul, Strategy::Fast).unwrap().value,
                BigUint::from(d).pow(4),
                "E3_mul p={p} d={d}"
            );
            checked += 1;
        }
    }
    assert!(checked > 1000, "only {checked} subgroups");
    pass(6, "subgroup_energy_laws");
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Gauss-sum anchor |sum chi^j(x) e_p(x)| = sqrt(p) for every nontrivial j,
/// and modulus invariance of the trinomial sum under x -> lambda x.
#[test]
fn acceptance_07_gauss_anchor_and_scaling() {
    for p in [5u64, 13, 101] {
        let ctx = FieldCtx::new(p).unwrap();
        let root = (p as f64).sqrt();
        for j in 1..p - 1 {
            let spec = TrinomialSpec {
                a: 1,
                b: 0,
                c: 0,
                k: 1,
                l: 1,
                m: 1,
                chi_index: j,
            };
            let s = trinomial_sum(&ctx, &spec, true).norm();
            assert!(
                (s - root).abs() <= 1e-9 * root,
                "p={p} j={j}: |S| = {s}, want sqrt({p})"
            );
        }
    }
    for i in 0..50u64 {
        let p = [13u64, 101, 1009][(i % 3) as usize];
        let ctx = FieldCtx::new(p).unwrap();
        let mut rng = SplitMix64::new(derive_seed(SEED, 400 + i));
        let spec = TrinomialSpec {
            a: 1 + rng.next_below(p - 1),
            b: 1 + rng.next_below(p - 1),
            c: 1 + rng.next_below(p - 1),
            k: 1 + rng.next_below(p - 2),
            l: 1 + rng.next_below(p - 2),
            m: 1 + rng.next_below(p - 2),
            chi_index: rng.next_below(p - 1),
        };
        let lambda = 1 + rng.next_below(p - 1);
        let scaled = TrinomialSpec {
            a: (spec.a as u128 * powmod(lambda, spec.k, p) as u128 % p as u128) as u64,
            b: (spec.b as u128 * powmod(lambda, spec.l, p) as u128 % p as u128) as u64,
            c: (spec.c as u128 * powmod(lambda, spec.m, p) as u128 % p as u128) as u64,
            ..spec
        };
        let s = trinomial_sum(&ctx, &spec, true).norm();
        let t = trinomial_sum(&ctx, &scaled, true).norm();
        assert!(
            (s - t).abs() <= 1e-9 * s.max(1.0),
            "p={p} instance {i}: |S| = {s} vs scaled {t}"
        );
    }
    pass(7, "gauss_anchor_and_scaling");
}

/// Naive and transform-accelerated trilinear sums agree (1e-6 relative,
/// 1e-9 floor), and the fast path wins the p=1009, 200^3 race.
#[test]
fn acceptance_08_trilinear_equivalence_and_speed() {
    for i in 0..100u64 {
        let (p, max_n) = if i < 50 { (101u64, 30) } else { (1009, 60) };
        let ctx = FieldCtx::new(p).unwrap();
        let s = derive_seed(SEED, 500 + i);
        let wx = WeightVec::random_unit_disc(
            random_set(&ctx, max_n, derive_seed(s, 0)),
            derive_seed(s, 3),
        );
        let wy = WeightVec::random_unit_disc(
            random_set(&ctx, max_n, derive_seed(s, 1)),
            derive_seed(s, 4),
        );
        let wz = WeightVec::random_unit_disc(
            random_set(&ctx, max_n, derive_seed(s, 2)),
            derive_seed(s, 5),
        );
        let naive = trilinear_s(&wx, &wy, &wz, Strategy::Oracle, true).unwrap();
        let fast = trilinear_s(&wx, &wy, &wz, Strategy::Fast, true).unwrap();
        let tol = (1e-6 * naive.norm().max(fast.norm())).max(1e-9);
        assert!(
            (naive - fast).norm() <= tol,
            "p={p} instance {i}: {naive} vs {fast}"
        );
    }

    let ctx = FieldCtx::new(1009).unwrap();
    let s = derive_seed(SEED, 600);
    let wx = WeightVec::random_unit_disc(
        FpSet::random(&ctx, 200, derive_seed(s, 0)).unwrap(),
        derive_seed(s, 3),
    );
    let wy = WeightVec::random_unit_disc(
        FpSet::random(&ctx, 200, derive_seed(s, 1)).unwrap(),
        derive_seed(s, 4),
    );
    let wz = WeightVec::random_unit_disc(
        FpSet::random(&ctx, 200, derive_seed(s, 2)).unwrap(),
        derive_seed(s, 5),
    );
    let t0 = Instant::now();
    let naive = trilinear_s(&wx, &wy, &wz, Strategy::Oracle, true).unwrap();
    let naive_ms = t0.elapsed().as_secs_f64() * 1e3;
    let t1 = Instant::now();
    let fast = trilinear_s(&wx, &wy, &wz, Strategy::Fast, true).unwrap();
    let fast_ms = t1.elapsed().as_secs_f64() * 1e3;
    let tol = (1e-6 * naive.norm().max(fast.norm())).max(1e-9);
    assert!((naive - fast).norm() <= tol, "{naive} vs {fast}");
    println!(
        "ACCEPTANCE 08 timing: p=1009 |X|=|Y|=|Z|=200 naive {naive_ms:.2} ms, fast {fast_ms:.2} ms"
    );
    assert!(
        fast_ms < naive_ms,
        "fast path not faster: {fast_ms:.2} ms vs {naive_ms:.2} ms"
    );
    pass(8, "trilinear_equivalence_and_speed");
}

/// Unit weights on X = Y = Z = F_p collapse to the closed form p(2p - 1):
/// the inner sum over z is p exactly when xy = 0, and 2p - 1 pairs have
/// xy = 0.
#[test]
fn acceptance_09_full_field_anchor() {
    for p in [3u64, 5, 7] {
        let ctx = FieldCtx::new(p).unwrap();
        let field = FpSet::from_elems(&ctx, 0..p);
        let w = WeightVec::ones(field);
        let want = (p * (2 * p - 1)) as f64;
        for strat in [Strategy::Oracle, Strategy::Fast] {
            let s = trilinear_s(&w, &w, &w, strat, true).unwrap();
            assert!(
                (s.norm() - want).abs() <= 1e-9 * want,
                "p={p} {strat:?}: {s} vs {want}"
            );
        }
    }
    pass(9, "full_field_anchor");
}

/// The default sweep covers every named ratio comparison, finishes inside
/// the 30 minute budget, and every sampled row replays exactly.
#[test]
fn acceptance_10_sweep_replayable() {
    let start = Instant::now();
    let entries = default_plan();
    let rows = run_plan(&entries, true).unwrap();
    assert_eq!(rows.len(), entries.len());
    for q in [
        "dtimes",
        "energy3_div_rep",
        "energy_div_rep_set",
        "energy_mul_rep",
        "triples_literal",
        "dtimes_tilde_subgroups",
        "trilinear_s_mod",
        "trilinear_t_mod",
        "trilinear_t_subgroups",
        "energy_mul_recip_shift",
        "trinomial_mod",
    ] {
        assert!(
            rows.iter().any(|r| r.quantity == q),
            "no rows for quantity {q}"
        );
    }
    assert!(
        rows.iter().any(|r| r.quantity == "dtimes" && r.p > 9000),
        "difference-product rows stop short of p near 10^4"
    );
    // Replay what a consumer would read back, not the in-memory rows: the
    // text round trip is part of the contract.
    let step = rows.len() / 20;
    for row in rows.iter().step_by(step.max(1)).take(20) {
        let line = serde_json::to_string(row).unwrap();
        let parsed = fpsums_harness::row_from_json_line(&line).unwrap();
        replay(&parsed)
            .unwrap_or_else(|e| panic!("row {} {} p={}: {e}", row.quantity, row.family, row.p));
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 1800,
        "took {elapsed:?}, budget 30 minutes"
    );
    println!(
        "ACCEPTANCE 10 timing: sweep + 20 replays in {:.1} s",
        elapsed.as_secs_f64()
    );
    pass(10, "sweep_replayable");
}
