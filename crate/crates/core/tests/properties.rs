//! Property tests over randomly drawn primes, sets, and operations.

use std::sync::Arc;

use fpsums_core::energy::{
    collinear_quadruples, d_times, d_times_tilde, r3_pivot_sum, triples_product_literal,
};
use fpsums_core::{
    additive_dft, diff_set, op_convolve_exact, prod_set, rep_fn, ArithOp, ComplexVec, FieldCtx,
    FpSet, Strategy as Exec,
};
use num_bigint::BigUint;
use num_complex::Complex64;
use proptest::prelude::*;

const PRIMES: &[u64] = &[5, 7, 11, 13, 31, 97, 101];

fn arb_prime() -> impl Strategy<Value = u64> {
    proptest::sample::select(PRIMES)
}

fn arb_op() -> impl Strategy<Value = ArithOp> {
    proptest::sample::select(&[ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div][..])
}

fn arb_set(max_n: u64) -> impl Strategy<Value = FpSet> {
    (arb_prime(), 0..=max_n, any::<u64>()).prop_map(|(p, n, seed)| {
        let ctx = FieldCtx::new(p).unwrap();
        FpSet::random(&ctx, n.min(p), seed).unwrap()
    })
}

fn same_ctx_pair(max_n: u64) -> impl Strategy<Value = (FpSet, FpSet)> {
    (
        arb_prime(),
        0..=max_n,
        0..=max_n,
        any::<u64>(),
        any::<u64>(),
    )
        .prop_map(|(p, n1, n2, s1, s2)| {
            let ctx = FieldCtx::new(p).unwrap();
            (
                FpSet::random(&ctx, n1.min(p), s1).unwrap(),
                FpSet::random(&ctx, n2.min(p), s2).unwrap(),
            )
        })
}

fn mass(values: &[u64]) -> BigUint {
    values.iter().map(|&v| BigUint::from(v)).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rep_fn_total_mass_law((a, b) in same_ctx_pair(10), op in arb_op()) {
        let r = rep_fn(&a, &b, op).unwrap();
        let expected = match op {
            ArithOp::Div => a.len() as u128 * b.elems().iter().filter(|&&y| y != 0).count() as u128,
            _ => a.len() as u128 * b.len() as u128,
        };
        prop_assert_eq!(r.total(), expected);
    }

    #[test]
    fn convolution_mass_conservation((a, b) in same_ctx_pair(8), op in arb_op()) {
        let ctx = a.ctx().clone();
        let r = rep_fn(&a, &a, ArithOp::Sub).unwrap();
        let s = rep_fn(&b, &b, ArithOp::Sub).unwrap();
        let c = op_convolve_exact(&ctx, r.values(), s.values(), op, Exec::Fast).unwrap();
        let total: BigUint = c.iter().map(|&v| BigUint::from(v)).sum();
        let mr = mass(r.values());
        let ms = mass(s.values());
        let expected = match op {
            // Division drops pairs with divisor zero.
            ArithOp::Div => &mr * (&ms - BigUint::from(s.values()[0])),
            _ => &mr * &ms,
        };
        prop_assert_eq!(total, expected);
    }

    #[test]
    fn diff_rep_is_symmetric_under_negation(a in arb_set(10)) {
        let ctx = a.ctx().clone();
        let r = rep_fn(&a, &a, ArithOp::Sub).unwrap();
        for x in 0..ctx.p() {
            let neg = ctx.sub(0, x);
            prop_assert_eq!(r.get(x), r.get(neg));
        }
    }

    #[test]
    fn diff_set_contains_zero_and_prod_set_symmetric((a, b) in same_ctx_pair(8)) {
        if !a.is_empty() {
            prop_assert!(diff_set(&a, &a).unwrap().contains(0));
        }
        let ab = prod_set(&a, &b).unwrap();
        let ba = prod_set(&b, &a).unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn sandwich_holds_exactly(a in arb_set(8)) {
        let d = d_times(&a, &a, Exec::Fast).unwrap().value;
        let dt = d_times_tilde(&a, &a, Exec::Fast).unwrap().value;
        let n = BigUint::from(a.len());
        let bound = &dt + BigUint::from(4u32) * n.pow(6);
        prop_assert!(dt <= d && d <= bound, "{dt} <= {d} <= {bound}");
    }

    #[test]
    fn prod_diff_cauchy_schwarz(a in arb_set(8)) {
        prop_assume!(!a.is_empty());
        let diffs = diff_set(&a, &a).unwrap();
        let prods = prod_set(&diffs, &diffs).unwrap();
        let d = d_times(&a, &a, Exec::Fast).unwrap().value;
        let lhs = BigUint::from(prods.len() as u64) * d;
        let rhs = BigUint::from(a.len() as u64).pow(8);
        prop_assert!(lhs >= rhs, "{lhs} < {rhs}");
    }

    #[test]
    fn quadruple_identity(p in arb_prime(), n in 0u64..8, seed in any::<u64>()) {
        let ctx = FieldCtx::new(p).unwrap();
        let a = FpSet::random(&ctx, n.min(p), seed).unwrap();
        let q = collinear_quadruples(&a, Exec::Fast).unwrap().value;
        let r3 = r3_pivot_sum(&a, Exec::Fast).unwrap().value;
        prop_assert_eq!(q, r3);
    }

    #[test]
    fn literal_triples_bounded_by_ghd((g, h) in same_ctx_pair(8)) {
        // Injection of triples into nonzero-product quadruples gives
        // T <= |G||H| * D-tilde with room to spare.
        let t = triples_product_literal(&g, &h, Exec::Fast).unwrap().value;
        let dt = d_times_tilde(&g, &h, Exec::Fast).unwrap().value;
        let gh = BigUint::from(g.len() as u64 * h.len() as u64);
        prop_assert!(t <= &gh * &dt, "{t} > {gh} * {dt}");
    }

    #[test]
    fn dlog_pow_roundtrip(p in arb_prime(), x in 1u64..97) {
        let ctx = FieldCtx::new(p).unwrap();
        let x = 1 + x % (p - 1);
        let t = ctx.dlog(x).unwrap();
        prop_assert_eq!(ctx.pow_g(t), x);
    }

    #[test]
    fn dft_parseval(p in arb_prime(), seed in any::<u64>()) {
        let ctx = FieldCtx::new(p).unwrap();
        let mut rng = fpsums_core::rng::SplitMix64::new(seed);
        let f = ComplexVec((0..p).map(|_| Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5)).collect());
        let big = additive_dft(&ctx, &f, Exec::Fast).unwrap();
        let lhs: f64 = big.0.iter().map(|z| z.norm_sqr()).sum();
        let rhs: f64 = p as f64 * f.0.iter().map(|z| z.norm_sqr()).sum::<f64>();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn subgroup_closure(p in arb_prime(), pick in any::<u64>()) {
        let ctx = FieldCtx::new(p).unwrap();
        let divisors: Vec<u64> = (1..=p - 1).filter(|d| (p - 1) % d == 0).collect();
        let d = divisors[(pick % divisors.len() as u64) as usize];
        let g = FpSet::subgroup(&ctx, d).unwrap();
        prop_assert_eq!(g.len() as u64, d);
        for &x in g.elems() {
            prop_assert!(g.contains(ctx.inv(x).unwrap()));
            for &y in g.elems() {
                prop_assert!(g.contains(ctx.mul(x, y)));
            }
        }
    }
}

// proptest moves values, so FpSet equality in prop_assert_eq needs Clone;
// keep a compile-time reminder that FpSet comparisons are semantic.
#[test]
fn fpset_equality_is_semantic() {
    let ctx = FieldCtx::new(7).unwrap();
    let a = FpSet::from_elems(&ctx, [1, 2, 4]);
    let b = FpSet::subgroup(&ctx, 3).unwrap();
    assert_eq!(a, b);
    let other: Arc<FieldCtx> = FieldCtx::new(11).unwrap();
    let c = FpSet::from_elems(&other, [1, 2, 4]);
    assert_ne!(a, c);
}
