//! Cross-route checks on seeded random instances: every counting quantity's
//! fast path against its brute-force oracle, and both transform strategies
//! against each other.

use std::sync::Arc;

use fpsums_core::energy::{
    collinear_quadruples, collinear_triples, d_times, d_times_tilde, energy, energy3, energy_fn,
    n_count, r3_pivot_sum, triples_product_literal,
};
use fpsums_core::expsum::{trilinear_s, WeightVec};
use fpsums_core::rng::SplitMix64;
use fpsums_core::{
    additive_dft, mult_convolve_exact, op_convolve_exact, rep_fn, ArithOp, ComplexVec, FieldCtx,
    FpSet, Strategy,
};
use num_complex::Complex64;

fn random_set(ctx: &Arc<FieldCtx>, max_n: u64, seed: u64) -> FpSet {
    let mut rng = SplitMix64::new(seed);
    let n = 1 + rng.next_below(max_n);
    FpSet::random(ctx, n, rng.next_u64()).unwrap()
}

#[test]
fn counting_ops_oracle_equals_fast() {
    for (i, &p) in [11u64, 31].iter().enumerate() {
        let ctx = FieldCtx::new(p).unwrap();
        for trial in 0..25u64 {
            let seed = 1000 * (i as u64 + 1) + trial;
            let u = random_set(&ctx, 6, seed * 5 + 1);
            let v = random_set(&ctx, 6, seed * 5 + 2);
            let w = random_set(&ctx, 6, seed * 5 + 3);
            for op in [ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div] {
                let a = energy(&u, &v, op, Strategy::Oracle).unwrap().value;
                let b = energy(&u, &v, op, Strategy::Fast).unwrap().value;
                assert_eq!(a, b, "energy {op:?} p={p} seed={seed}");
                let a = energy3(&u, &v, op, Strategy::Oracle).unwrap().value;
                let b = energy3(&u, &v, op, Strategy::Fast).unwrap().value;
                assert_eq!(a, b, "energy3 {op:?} p={p} seed={seed}");
            }
            type PairCount = fn(
                &FpSet,
                &FpSet,
                Strategy,
            )
                -> fpsums_core::Result<fpsums_core::energy::CountResult>;
            for (name, f) in [
                ("d_times", d_times as PairCount),
                ("d_times_tilde", d_times_tilde as PairCount),
                ("collinear_triples", collinear_triples as PairCount),
                (
                    "triples_product_literal",
                    triples_product_literal as PairCount,
                ),
            ] {
                let a = f(&u, &v, Strategy::Oracle).unwrap().value;
                let b = f(&u, &v, Strategy::Fast).unwrap().value;
                assert_eq!(a, b, "{name} p={p} seed={seed}");
            }
            let a = n_count(&u, &v, &w, Strategy::Oracle).unwrap().value;
            let b = n_count(&u, &v, &w, Strategy::Fast).unwrap().value;
            assert_eq!(a, b, "n_count p={p} seed={seed}");
            if u.len() <= 6 {
                let a = collinear_quadruples(&u, Strategy::Oracle).unwrap().value;
                let b = collinear_quadruples(&u, Strategy::Fast).unwrap().value;
                assert_eq!(a, b, "collinear_quadruples p={p} seed={seed}");
                let c = r3_pivot_sum(&u, Strategy::Fast).unwrap().value;
                assert_eq!(a, c, "r3_pivot_sum identity p={p} seed={seed}");
            }
        }
    }
}

#[test]
fn convolution_strategies_bit_identical_on_rep_fns() {
    let ctx = FieldCtx::new(101).unwrap();
    for seed in 0..10u64 {
        let a = random_set(&ctx, 20, seed * 2 + 1);
        let b = random_set(&ctx, 20, seed * 2 + 2);
        for op in [ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div] {
            let r = rep_fn(&a, &a, ArithOp::Sub).unwrap();
            let s = rep_fn(&b, &b, ArithOp::Sub).unwrap();
            let naive =
                op_convolve_exact(&ctx, r.values(), s.values(), op, Strategy::Oracle).unwrap();
            let fast = op_convolve_exact(&ctx, r.values(), s.values(), op, Strategy::Fast).unwrap();
            assert_eq!(naive, fast, "op={op:?} seed={seed}");
        }
    }
}

#[test]
fn mult_convolve_strategies_on_large_prime() {
    // Exercises the NTT path at a table size past the power-of-two padding
    // boundary.
    let ctx = FieldCtx::new(1009).unwrap();
    let a = random_set(&ctx, 60, 7);
    let r = rep_fn(&a, &a, ArithOp::Sub).unwrap();
    let naive = mult_convolve_exact(&ctx, r.values(), r.values(), Strategy::Oracle).unwrap();
    let fast = mult_convolve_exact(&ctx, r.values(), r.values(), Strategy::Fast).unwrap();
    assert_eq!(naive, fast);
}

#[test]
fn additive_dft_strategies_agree_on_random_inputs() {
    for p in [31u64, 101, 1009] {
        let ctx = FieldCtx::new(p).unwrap();
        let mut rng = SplitMix64::new(p);
        for _ in 0..20 {
            let f = ComplexVec(
                (0..p)
                    .map(|_| Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5))
                    .collect(),
            );
            let direct = additive_dft(&ctx, &f, Strategy::Oracle).unwrap();
            let fast = additive_dft(&ctx, &f, Strategy::Fast).unwrap();
            let scale: f64 = direct.0.iter().map(|z| z.norm()).fold(1e-30, f64::max);
            for (x, y) in direct.0.iter().zip(&fast.0) {
                assert!((x - y).norm() <= 1e-9 * scale, "p={p}");
            }
        }
    }
}

#[test]
fn trilinear_strategies_agree_on_seeded_instances() {
    let ctx = FieldCtx::new(101).unwrap();
    for seed in 0..20u64 {
        let x = random_set(&ctx, 20, seed * 7 + 1);
        let y = random_set(&ctx, 15, seed * 7 + 2);
        let z = random_set(&ctx, 10, seed * 7 + 3);
        let wx = WeightVec::random_unit_disc(x, seed + 100);
        let wy = WeightVec::random_unit_disc(y, seed + 200);
        let wz = WeightVec::random_unit_disc(z, seed + 300);
        let a = trilinear_s(&wx, &wy, &wz, Strategy::Oracle, true).unwrap();
        let b = trilinear_s(&wx, &wy, &wz, Strategy::Fast, true).unwrap();
        let tol = if a.norm() < 1.0 {
            1e-9
        } else {
            1e-6 * a.norm()
        };
        assert!((a - b).norm() <= tol, "seed={seed}: {a} vs {b}");
    }
}

#[test]
fn dtimes_equals_energy_of_difference_rep() {
    // The central identity: the pair-product oracle on one side, the
    // convolution-of-representation route on the other.
    for p in [11u64, 101, 997] {
        let ctx = FieldCtx::new(p).unwrap();
        for seed in 0..8u64 {
            let a = random_set(&ctx, 20.min(p / 2), 31 * p + seed);
            let left = fpsums_core::energy::d_times_pair_product(&a, &a);
            let r = rep_fn(&a, &a, ArithOp::Sub).unwrap();
            let right = energy_fn(&r, ArithOp::Mul, Strategy::Fast).unwrap().value;
            assert_eq!(left, right, "p={p} seed={seed}");
        }
    }
}
