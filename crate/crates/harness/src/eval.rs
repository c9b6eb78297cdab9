//! Single evaluation path for sweep rows. `replay` calls the same function
//! with the row's recorded (p, quantity, family, seed), so a row reproduces
//! by construction or the mismatch is real.

use std::sync::Arc;

use fpsums_core::energy::{
    d_times, d_times_tilde, energy, energy3_fn, energy_fn, energy_fn_set, triples_product_literal,
};
use fpsums_core::expsum::{
    cor_bound3_value, trilinear_s, trilinear_t, trinomial_params, trinomial_sum, PairWeights,
    WeightVec,
};
use fpsums_core::rng::derive_seed;
use fpsums_core::{rep_fn, ArithOp, FieldCtx, FpSet, Strategy};
use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{HarnessError, Result};
use crate::family::{FamilySpec, TrinomDescriptor};

/// Everything a row needs except timing and identity columns.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub value: String,
    pub sizes: String,
    pub reference_expr: String,
    pub reference_value: f64,
    pub ratio: f64,
    pub range_ok: bool,
}

fn finish(
    value: String,
    value_f64: f64,
    sizes: String,
    reference_expr: &str,
    reference_value: f64,
    range_ok: bool,
) -> Result<Evaluation> {
    if !(reference_value.is_finite() && reference_value > 0.0) {
        return Err(HarnessError::Config(format!(
            "degenerate instance: reference {reference_expr} evaluates to {reference_value}"
        )));
    }
    Ok(Evaluation {
        value,
        sizes,
        reference_expr: reference_expr.to_string(),
        reference_value,
        ratio: value_f64 / reference_value,
        range_ok,
    })
}

fn big_to_f64(v: &BigUint) -> f64 {
    v.to_f64().unwrap_or(f64::MAX)
}

fn split_families(p: u64, family: &str, want: usize) -> Result<Vec<FamilySpec>> {
    let parts: Vec<&str> = family.split(';').collect();
    if parts.len() != want {
        return Err(HarnessError::Config(format!(
            "quantity needs {want} families, got {got} in {family:?} (p={p})",
            got = parts.len()
        )));
    }
    parts.iter().map(|t| FamilySpec::parse(t)).collect()
}

fn build_sets(ctx: &Arc<FieldCtx>, specs: &[FamilySpec]) -> Result<Vec<FpSet>> {
    specs.iter().map(|s| s.build(ctx)).collect()
}

fn sizes_string(sets: &[FpSet]) -> String {
    sets.iter()
        .map(|s| s.len().to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn subgroup_orders(specs: &[FamilySpec]) -> Option<Vec<u64>> {
    specs
        .iter()
        .map(|s| match s {
            FamilySpec::Subgroup { d } => Some(*d),
            _ => None,
        })
        .collect()
}

/// Evaluate one (p, quantity, family, seed) instance. The quantity names
/// here are exactly the ones the sweep emits.
pub fn eval_row(
    p: u64,
    quantity: &str,
    family: &str,
    seed: u64,
    deterministic: bool,
) -> Result<Evaluation> {
    let ctx = FieldCtx::new(p)?;
    let pf = p as f64;
    match quantity {
        // Difference-product count against the A^{84/13} growth reference;
        // in range for A <= sqrt(p).
        "dtimes" => {
            let specs = split_families(p, family, 1)?;
            let sets = build_sets(&ctx, &specs)?;
            let a = sets[0].len() as f64;
            let v = d_times(&sets[0], &sets[0], Strategy::Fast)?.value;
            finish(
                v.to_string(),
                big_to_f64(&v),
                sizes_string(&sets),
                "A^(84/13)",
                a.powf(84.0 / 13.0),
                a <= pf.sqrt(),
            )
        }
        _ => eval_row_rest(ctx, p, quantity, family, seed, deterministic),
    }
}

fn eval_row_rest(
    ctx: Arc<FieldCtx>,
    p: u64,
    quantity: &str,
    family: &str,
    seed: u64,
    deterministic: bool,
) -> Result<Evaluation> {
    let pf = p as f64;
    match quantity {
        // Third moment of the ratio representation of A - A vs A^9 ln A;
        // in range for A <= p^{2/3}.
        "energy3_div_rep" => {
            let specs = split_families(p, family, 1)?;
            let sets = build_sets(&ctx, &specs)?;
            let a = sets[0].len() as f64;
            let r = rep_fn(&sets[0], &sets[0], ArithOp::Sub)?;
            let v = energy3_fn(&r, ArithOp::Div, Strategy::Fast)?.value;
            finish(
                v.to_string(),
                big_to_f64(&v),
                sizes_string(&sets),
                "A^9*ln(A)",
                a.powi(9) * a.ln(),
                a <= pf.powf(2.0 / 3.0),
            )
        }
        // Restricted ratio energy vs A^4 S^2/p + A^3 S^{3/2}; in range for
        // S <= A^2.
        "energy_div_rep_set" => {
            let specs = split_families(p, family, 2)?;
            let sets = build_sets(&ctx, &specs)?;
            let (a, s) = (sets[0].len() as f64, sets[1].len() as f64);
            let r = rep_fn(&sets[0], &sets[0], ArithOp::Sub)?;
            let v = energy_fn_set(&r, &sets[1], ArithOp::Div, Strategy::Fast)?.value;
            finish(
                v.to_string(),
                big_to_f64(&v),
                sizes_string(&sets),
                "A^4*S^2/p + A^3*S^(3/2)",
                a.powi(4) * s * s / pf + a.powi(3) * s.powf(1.5),
                s <= a * a,
            )
        }
        // Multiplicative energy of r_{A-A} against the eigenvalue-method
        // reference with K estimated from seeded sample sets.
        "energy_mul_rep" => {
            let specs = split_families(p, family, 1)?;
            let sets = build_sets(&ctx, &specs)?;
            let a = &sets[0];
            let r = rep_fn(a, a, ArithOp::Sub)?;
            let v = energy_fn(&r, ArithOp::Mul, Strategy::Fast)?.value;
            let e3 = energy3_fn(&r, ArithOp::Mul, Strategy::Fast)?.value;
            let mass = r.total() as f64;
            let cap = ((a.len() * a.len()) as u64).min(p);
            let mut k_hat: f64 = 0.0;
            for i in 0..8u64 {
                // Sizes spread geometrically from 2 up to min(A^2, p).
                let size = ((2.0 * (cap as f64 / 2.0).powf(i as f64 / 7.0)).round() as u64)
                    .clamp(2, cap.max(2));
                let s = FpSet::random(&ctx, size.min(p), derive_seed(seed, 100 + i))?;
                let e = energy_fn_set(&r, &s, ArithOp::Mul, Strategy::Fast)?.value;
                k_hat = k_hat.max(big_to_f64(&e) / (s.len() as f64).powf(1.5));
            }
            finish(
                v.to_string(),
                big_to_f64(&v),
                sizes_string(&sets),
                "E3x(F)^(6/13)*K^(2/13)*mass(F)^(12/13); \
                 K=max E^x(F,S)/S^(3/2) over 8 seeded random S, sizes 2..min(A^2,p)",
                big_to_f64(&e3).powf(6.0 / 13.0) * k_hat.powf(2.0 / 13.0) * mass.powf(12.0 / 13.0),
                true,
            )
        }
        // Collinear triples of G x H (nonzero products) against the
        // three-branch reference; hypothesis G >= H.
        "triples_literal" => {
            let specs = split_families(p, family, 2)?;
            let orders = subgroup_orders(&specs);
            let sets = build_sets(&ctx, &specs)?;
            let (g, h) = (sets[0].len() as f64, sets[1].len() as f64);
            let v = triples_product_literal(&sets[0], &sets[1], Strategy::Fast)?.value;
            let main = g.powi(3) * h.powi(3) / pf;
            let gh = g * h;
            let (expr, reference) = if gh >= pf.powf(4.0 / 3.0) {
                (
                    "G^3*H^3/p + p^(1/2)*G^(3/2)*H^2",
                    main + pf.sqrt() * g.powf(1.5) * h * h,
                )
            } else if gh > pf {
                (
                    "G^3*H^3/p + G^(5/2)*H^(5/2)/p^(1/2) + G^2*H^2*ln(G)",
                    main + gh.powf(2.5) / pf.sqrt() + g * g * h * h * g.ln(),
                )
            } else {
                ("G^3*H^3/p + G^3*H*ln(G)", main + g.powi(3) * h * g.ln())
            };
            finish(
                v.to_string(),
                big_to_f64(&v),
                sizes_string(&sets),
                expr,
                reference,
                orders.is_some() && g >= h,
            )
        }
        // Nonzero-product difference count over subgroup pairs against the
        // two-branch reference split at GH = p ln p.
        "dtimes_tilde_subgroups" => {
            let specs = split_families(p, family, 2)?;
            let orders = subgroup_orders(&specs);
            let sets = build_sets(&ctx, &specs)?;
            let (g, h) = (sets[0].len() as f64, sets[1].len() as f64);
            let v = d_times_tilde(&sets[0], &sets[1], Strategy::Fast)?.value;
            let (expr, reference) = if g * h >= pf * pf.ln() {
                ("G^4*H^4/p", (g * h).powi(4) / pf)
            } else {
                ("G^3*H^3*ln(G)", (g * h).powi(3) * g.ln())
            };
            finish(
                v.to_string(),
                big_to_f64(&v),
                sizes_string(&sets),
                expr,
                reference,
                orders.is_some() && g >= h,
            )
        }
        // |S(X,Y,Z)| with seeded unit-modulus weights; in range for
        // Y <= sqrt(p).
        "trilinear_s_mod" => {
            let specs = split_families(p, family, 3)?;
            let sets = build_sets(&ctx, &specs)?;
            let (x, y, z) = (
                sets[0].len() as f64,
                sets[1].len() as f64,
                sets[2].len() as f64,
            );
            let ez = energy(&sets[2], &sets[2], ArithOp::Mul, Strategy::Fast)?.value;
            let wx = WeightVec::random_phases(sets[0].clone(), derive_seed(seed, 11));
            let wy = WeightVec::random_phases(sets[1].clone(), derive_seed(seed, 12));
            let wz = WeightVec::random_phases(sets[2].clone(), derive_seed(seed, 13));
            let v = trilinear_s(&wx, &wy, &wz, Strategy::Fast, deterministic)?.norm();
            finish(
                v.to_string(),
                v,
                sizes_string(&sets),
                "p^(1/4)*X^(3/4)*Y^(21/26)*Z^(1/2)*Ex(Z)^(1/8); random phase weights",
                pf.powf(0.25)
                    * x.powf(0.75)
                    * y.powf(21.0 / 26.0)
                    * z.sqrt()
                    * big_to_f64(&ez).powf(0.125),
                y <= pf.sqrt(),
            )
        }
        // |T(X,Y,Z)| with seeded unit-modulus pair weights; in range for
        // Y, Z <= sqrt(p).
        "trilinear_t_mod" => {
            let specs = split_families(p, family, 3)?;
            let sets = build_sets(&ctx, &specs)?;
            let (x, y, z) = (
                sets[0].len() as f64,
                sets[1].len() as f64,
                sets[2].len() as f64,
            );
            let v = eval_trilinear_t(&sets, seed, deterministic)?;
            finish(
                v.to_string(),
                v,
                sizes_string(&sets),
                "p^(1/8)*X^(7/8)*Y^(47/52)*Z^(47/52) + X*Y*Z^(3/4); random phase weights",
                pf.powf(0.125) * x.powf(7.0 / 8.0) * (y * z).powf(47.0 / 52.0)
                    + x * y * z.powf(0.75),
                y <= pf.sqrt() && z <= pf.sqrt(),
            )
        }
        // |T(F,G,H)| over subgroup triples against the two-branch subgroup
        // reference split at GH = p ln p; hypothesis G >= H.
        "trilinear_t_subgroups" => {
            let specs = split_families(p, family, 3)?;
            let orders = subgroup_orders(&specs);
            let sets = build_sets(&ctx, &specs)?;
            let (ff, g, h) = (
                sets[0].len() as f64,
                sets[1].len() as f64,
                sets[2].len() as f64,
            );
            let v = eval_trilinear_t(&sets, seed, deterministic)?;
            let tail = ff * g * h.powf(0.75);
            let (expr, reference) = if g * h >= pf * pf.ln() {
                (
                    "F^(7/8)*G*H + F*G*H^(3/4); random phase weights",
                    ff.powf(7.0 / 8.0) * g * h + tail,
                )
            } else {
                (
                    "p^(1/8)*(F*G*H)^(7/8) + F*G*H^(3/4); random phase weights",
                    pf.powf(0.125) * (ff * g * h).powf(7.0 / 8.0) + tail,
                )
            };
            finish(
                v.to_string(),
                v,
                sizes_string(&sets),
                expr,
                reference,
                orders.is_some() && g >= h,
            )
        }
        // Multiplicative energy of a shifted-reciprocal set against
        // Z^{7/2} p^{-1/2} + Z^2 with Z the realized cardinality.
        "energy_mul_recip_shift" => {
            let specs = split_families(p, family, 1)?;
            if !matches!(specs[0], FamilySpec::RecipShift { .. }) {
                return Err(HarnessError::Config(format!(
                    "energy_mul_recip_shift expects a recip-shift family, got {family:?}"
                )));
            }
            let sets = build_sets(&ctx, &specs)?;
            let z = sets[0].len() as f64;
            let v = energy(&sets[0], &sets[0], ArithOp::Mul, Strategy::Fast)?.value;
            finish(
                v.to_string(),
                big_to_f64(&v),
                sizes_string(&sets),
                "Z^(7/2)/p^(1/2) + Z^2",
                z.powf(3.5) / pf.sqrt() + z * z,
                true,
            )
        }
        // |S_chi(psi)| against the two-branch trinomial reference; the
        // hypothesis needs f >= g >= h and nonzero coefficients.
        "trinomial_mod" => {
            let t = TrinomDescriptor::parse(family)?;
            let v = trinomial_sum(&ctx, &t.to_spec(), deterministic).norm();
            let params = trinomial_params(p, t.k, t.l, t.m);
            let bound = cor_bound3_value(p, params.f, params.g, params.h);
            let expr = match bound.branch {
                fpsums_core::expsum::Bound3Branch::LargeGh => "p^(7/8)*f^(1/8)",
                fpsums_core::expsum::Bound3Branch::SmallGh => "p*(f/(g*h))^(1/8)*ln(p)^(1/8)",
            };
            let coeffs_ok = t.a % p != 0 && t.b % p != 0 && t.c % p != 0;
            finish(
                v.to_string(),
                v,
                (p - 1).to_string(),
                expr,
                bound.value,
                bound.hypothesis_ok && coeffs_ok,
            )
        }
        other => Err(HarnessError::Config(format!("unknown quantity {other:?}"))),
    }
}

fn eval_trilinear_t(sets: &[FpSet], seed: u64, deterministic: bool) -> Result<f64> {
    let rho = PairWeights::random_phases(sets[0].clone(), sets[1].clone(), derive_seed(seed, 21))?;
    let sigma =
        PairWeights::random_phases(sets[0].clone(), sets[2].clone(), derive_seed(seed, 22))?;
    let tau = PairWeights::random_phases(sets[1].clone(), sets[2].clone(), derive_seed(seed, 23))?;
    Ok(trilinear_t(&rho, &sigma, &tau, deterministic)?.norm())
}
