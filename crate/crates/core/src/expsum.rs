//! Exponential sums: trilinear sums with per-element or pairwise weights,
//! and trinomial sums twisted by a multiplicative character.
//!
//! Weight containers check the sup-norm <= 1 contract at construction
//! (tolerance 1e-12 for rounding) and record the actual norm, so a report
//! can show how close an admitted system is to the boundary.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{additive_dft, mult_convolve_complex, ComplexVec, FieldCtx, Strategy};
use crate::rng::SplitMix64;
use crate::sets::FpSet;

/// Slack over 1.0 admitted when validating weight norms.
pub const NORM_TOLERANCE: f64 = 1e-12;

fn check_norm(norm: f64) -> Result<f64> {
    if !norm.is_finite() || norm > 1.0 + NORM_TOLERANCE {
        return Err(Error::NormViolation(norm));
    }
    Ok(norm)
}

/// Weights alpha_x supported on a set, |alpha_x| <= 1.
#[derive(Clone, Debug)]
pub struct WeightVec {
    support: FpSet,
    weights: Vec<Complex64>,
    sup_norm: f64,
}

impl WeightVec {
    /// `weights[i]` belongs to `support.elems()[i]`.
    pub fn new(support: FpSet, weights: Vec<Complex64>) -> Result<WeightVec> {
        if weights.len() != support.len() {
            return Err(Error::LengthMismatch {
                expected: support.len(),
                got: weights.len(),
            });
        }
        let sup_norm = check_norm(weights.iter().map(|w| w.norm()).fold(0.0, f64::max))?;
        Ok(WeightVec {
            support,
            weights,
            sup_norm,
        })
    }

    pub fn ones(support: FpSet) -> WeightVec {
        let n = support.len();
        WeightVec {
            support,
            weights: vec![Complex64::new(1.0, 0.0); n],
            sup_norm: 1.0,
        }
    }

    /// Uniform draws from the closed unit disc.
    pub fn random_unit_disc(support: FpSet, seed: u64) -> WeightVec {
        let mut rng = SplitMix64::new(seed);
        let weights = (0..support.len())
            .map(|_| {
                let r = rng.next_f64().sqrt();
                let theta = std::f64::consts::TAU * rng.next_f64();
                Complex64::from_polar(r, theta)
            })
            .collect();
        WeightVec::new(support, weights).expect("unit disc draws satisfy the norm bound")
    }

    /// Random phases of modulus exactly 1.
    pub fn random_phases(support: FpSet, seed: u64) -> WeightVec {
        let mut rng = SplitMix64::new(seed);
        let weights = (0..support.len())
            .map(|_| Complex64::from_polar(1.0, std::f64::consts::TAU * rng.next_f64()))
            .collect();
        WeightVec::new(support, weights).expect("phases satisfy the norm bound")
    }

    pub fn support(&self) -> &FpSet {
        &self.support
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    fn to_dense(&self) -> ComplexVec {
        let mut out = ComplexVec::zeros(self.support.p());
        for (&x, &w) in self.support.elems().iter().zip(&self.weights) {
            out.0[x as usize] = w;
        }
        out
    }
}

/// Pairwise weights rho_{x,y} on rows x cols, |rho| <= 1, dense row-major.
#[derive(Clone, Debug)]
pub struct PairWeights {
    rows: FpSet,
    cols: FpSet,
    weights: Vec<Complex64>,
    sup_norm: f64,
}

impl PairWeights {
    pub fn new(rows: FpSet, cols: FpSet, weights: Vec<Complex64>) -> Result<PairWeights> {
        if rows.p() != cols.p() {
            return Err(Error::ContextMismatch(rows.p(), cols.p()));
        }
        let expected = rows.len() * cols.len();
        if weights.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: weights.len(),
            });
        }
        let sup_norm = check_norm(weights.iter().map(|w| w.norm()).fold(0.0, f64::max))?;
        Ok(PairWeights {
            rows,
            cols,
            weights,
            sup_norm,
        })
    }

    pub fn ones(rows: FpSet, cols: FpSet) -> Result<PairWeights> {
        let n = rows.len() * cols.len();
        PairWeights::new(rows, cols, vec![Complex64::new(1.0, 0.0); n])
    }

    pub fn random_unit_disc(rows: FpSet, cols: FpSet, seed: u64) -> Result<PairWeights> {
        let mut rng = SplitMix64::new(seed);
        let n = rows.len() * cols.len();
        let weights = (0..n)
            .map(|_| {
                let r = rng.next_f64().sqrt();
                let theta = std::f64::consts::TAU * rng.next_f64();
                Complex64::from_polar(r, theta)
            })
            .collect();
        PairWeights::new(rows, cols, weights)
    }

    /// Random phases of modulus exactly 1.
    pub fn random_phases(rows: FpSet, cols: FpSet, seed: u64) -> Result<PairWeights> {
        let mut rng = SplitMix64::new(seed);
        let n = rows.len() * cols.len();
        let weights = (0..n)
            .map(|_| Complex64::from_polar(1.0, std::f64::consts::TAU * rng.next_f64()))
            .collect();
        PairWeights::new(rows, cols, weights)
    }

    pub fn rows(&self) -> &FpSet {
        &self.rows
    }

    pub fn cols(&self) -> &FpSet {
        &self.cols
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.weights[i * self.cols.len() + j]
    }
}

/// Kahan-compensated complex accumulator; used when `deterministic` asks
/// for a fixed, error-damped summation order.
#[derive(Clone, Copy, Default)]
struct Kahan {
    sum: Complex64,
    carry: Complex64,
}

impl Kahan {
    #[inline]
    fn add(&mut self, v: Complex64) {
        let y = v - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

fn same_ctx(a: u64, b: u64) -> Result<()> {
    if a != b {
        return Err(Error::ContextMismatch(a, b));
    }
    Ok(())
}

/// S = sum over (x, y, z) in X x Y x Z of alpha_x beta_y gamma_z e_p(xyz).
///
/// `Oracle` is the literal triple loop, O(XYZ). `Fast` convolves the dense
/// alpha and beta multiplicatively, transforms gamma additively, and pairs
/// them: sum_w t(w) Gamma(w), O(XY + p log p). Agreement contract: 1e-6
/// relative, 1e-9 absolute when |S| < 1.
pub fn trilinear_s(
    wx: &WeightVec,
    wy: &WeightVec,
    wz: &WeightVec,
    strategy: Strategy,
    deterministic: bool,
) -> Result<Complex64> {
    same_ctx(wx.support.p(), wy.support.p())?;
    same_ctx(wx.support.p(), wz.support.p())?;
    let ctx = wx.support.ctx();
    match strategy {
        Strategy::Oracle => {
            let mut acc = Kahan::default();
            let mut plain = Complex64::new(0.0, 0.0);
            for (&x, &ax) in wx.support.elems().iter().zip(&wx.weights) {
                for (&y, &by) in wy.support.elems().iter().zip(&wy.weights) {
                    let xy = ctx.mul(x, y);
                    let ab = ax * by;
                    for (&z, &cz) in wz.support.elems().iter().zip(&wz.weights) {
                        let term = ab * cz * ctx.e_p(ctx.mul(xy, z));
                        if deterministic {
                            acc.add(term);
                        } else {
                            plain += term;
                        }
                    }
                }
            }
            Ok(if deterministic { acc.sum } else { plain })
        }
        Strategy::Fast => {
            let t = mult_convolve_complex(ctx, &wx.to_dense(), &wy.to_dense(), Strategy::Fast)?;
            let gamma = additive_dft(ctx, &wz.to_dense(), Strategy::Fast)?;
            let mut acc = Kahan::default();
            let mut plain = Complex64::new(0.0, 0.0);
            for (tw, gw) in t.0.iter().zip(&gamma.0) {
                let term = tw * gw;
                if deterministic {
                    acc.add(term);
                } else {
                    plain += term;
                }
            }
            Ok(if deterministic { acc.sum } else { plain })
        }
    }
}

/// T = sum over (x, y, z) of rho_{x,y} sigma_{x,z} tau_{y,z} e_p(xyz).
/// Pairwise weights admit no convolution shortcut; this is the literal
/// O(XYZ) sum with a support-consistency check.
pub fn trilinear_t(
    rho: &PairWeights,
    sigma: &PairWeights,
    tau: &PairWeights,
    deterministic: bool,
) -> Result<Complex64> {
    if rho.rows != sigma.rows {
        return Err(Error::SupportMismatch(
            "rho rows and sigma rows differ".into(),
        ));
    }
    if rho.cols != tau.rows {
        return Err(Error::SupportMismatch(
            "rho cols and tau rows differ".into(),
        ));
    }
    if sigma.cols != tau.cols {
        return Err(Error::SupportMismatch(
            "sigma cols and tau cols differ".into(),
        ));
    }
    let ctx = rho.rows.ctx();
    let xs = rho.rows.elems();
    let ys = rho.cols.elems();
    let zs = sigma.cols.elems();
    let mut acc = Kahan::default();
    let mut plain = Complex64::new(0.0, 0.0);
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            let rxy = rho.at(i, j);
            if rxy.norm_sqr() == 0.0 {
                continue;
            }
            let xy = ctx.mul(x, y);
            for (k, &z) in zs.iter().enumerate() {
                let term = rxy * sigma.at(i, k) * tau.at(j, k) * ctx.e_p(ctx.mul(xy, z));
                if deterministic {
                    acc.add(term);
                } else {
                    plain += term;
                }
            }
        }
    }
    Ok(if deterministic { acc.sum } else { plain })
}

/// Trinomial data: psi(x) = a x^k + b x^l + c x^m, twisted by the
/// multiplicative character of index `chi_index` (0 = principal).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrinomialSpec {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub k: u64,
    pub l: u64,
    pub m: u64,
    pub chi_index: u64,
}

/// S_chi(psi) = sum over x in F_p^* of chi(x) e_p(psi(x)), exactly the
/// O(p) sum through the dlog tables.
pub fn trinomial_sum(ctx: &FieldCtx, spec: &TrinomialSpec, deterministic: bool) -> Complex64 {
    let p = ctx.p();
    let n = p - 1;
    let (a, b, c) = (spec.a % p, spec.b % p, spec.c % p);
    let j = spec.chi_index % n;
    let (rk, rl, rm) = (spec.k % n, spec.l % n, spec.m % n);
    let mut acc = Kahan::default();
    let mut plain = Complex64::new(0.0, 0.0);
    // x = g^t; x^k = g^{t k mod (p-1)}; chi(x) = e_{p-1}(j t).
    for t in 0..n {
        let xk = ctx.pow_g(mul_mod_u64(t, rk, n));
        let xl = ctx.pow_g(mul_mod_u64(t, rl, n));
        let xm = ctx.pow_g(mul_mod_u64(t, rm, n));
        let psi = (a * xk + b * xl + c * xm) % p;
        let term = ctx.chi_power(j, t) * ctx.e_p(psi);
        if deterministic {
            acc.add(term);
        } else {
            plain += term;
        }
    }
    if deterministic {
        acc.sum
    } else {
        plain
    }
}

#[inline]
fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

/// Gcd data for the trinomial bound: d, e, f are gcds of the exponents
/// with p-1; g = d / gcd(d, f), h = e / gcd(e, f). The bound hypothesis
/// wants f >= g >= h, which `hypothesis_ok` reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrinomialParams {
    pub d: u64,
    pub e: u64,
    pub f: u64,
    pub g: u64,
    pub h: u64,
}

impl TrinomialParams {
    pub fn hypothesis_ok(&self) -> bool {
        self.f >= self.g && self.g >= self.h && self.h >= 1
    }
}

pub fn trinomial_params(p: u64, k: u64, l: u64, m: u64) -> TrinomialParams {
    let n = p - 1;
    let d = gcd(k, n);
    let e = gcd(l, n);
    let f = gcd(m, n);
    TrinomialParams {
        d,
        e,
        f,
        g: d / gcd(d, f),
        h: e / gcd(e, f),
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// Which branch of the two-case trinomial bound applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound3Branch {
    /// g h >= p ln p: bound p^{7/8} f^{1/8}.
    LargeGh,
    /// otherwise: bound p (f / (g h))^{1/8} (ln p)^{1/8}.
    SmallGh,
}

#[derive(Clone, Copy, Debug)]
pub struct Bound3Value {
    pub value: f64,
    pub branch: Bound3Branch,
    /// False when the f >= g >= h hypothesis fails; the value is still
    /// computed so reports can show the nominal bound.
    pub hypothesis_ok: bool,
}

/// The two-branch reference value of the trinomial bound, with natural log
/// and constant 1.
pub fn cor_bound3_value(p: u64, f: u64, g: u64, h: u64) -> Bound3Value {
    let pf = p as f64;
    let hypothesis_ok = f >= g && g >= h && h >= 1;
    let gh = g as f64 * h as f64;
    if gh >= pf * pf.ln() {
        Bound3Value {
            value: pf.powf(7.0 / 8.0) * (f as f64).powf(1.0 / 8.0),
            branch: Bound3Branch::LargeGh,
            hypothesis_ok,
        }
    } else {
        Bound3Value {
            value: pf * (f as f64 / gh).powf(1.0 / 8.0) * pf.ln().powf(1.0 / 8.0),
            branch: Bound3Branch::SmallGh,
            hypothesis_ok,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;
    use std::sync::Arc;

    fn ctx(p: u64) -> Arc<FieldCtx> {
        FieldCtx::new(p).unwrap()
    }

    #[test]
    fn norm_contract_is_enforced() {
        let c = ctx(5);
        let s = FpSet::from_elems(&c, [1, 2]);
        let bad = vec![Complex64::new(1.5, 0.0), Complex64::new(0.0, 0.0)];
        assert!(matches!(
            WeightVec::new(s.clone(), bad),
            Err(Error::NormViolation(_))
        ));
        let ok = vec![Complex64::new(1.0, 0.0); 2];
        assert_eq!(WeightVec::new(s, ok).unwrap().sup_norm(), 1.0);
    }

    #[test]
    fn trilinear_full_field_anchor() {
        // All-ones weights on the full field: S = p (2p - 1).
        for p in [3u64, 5, 7] {
            let c = ctx(p);
            let full = FpSet::full(&c);
            let w = WeightVec::ones(full);
            for strat in [Strategy::Oracle, Strategy::Fast] {
                let s = trilinear_s(&w, &w, &w, strat, true).unwrap();
                let expect = (p * (2 * p - 1)) as f64;
                assert!(
                    (s.re - expect).abs() < 1e-6 && s.im.abs() < 1e-6,
                    "p = {p}, strat = {strat:?}, got {s}"
                );
            }
        }
    }

    #[test]
    fn trilinear_singleton_example() {
        // X = Y = Z = {1}, unit weights: S = e_p(1).
        let c = ctx(5);
        let one = FpSet::from_elems(&c, [1]);
        let w = WeightVec::ones(one);
        let s = trilinear_s(&w, &w, &w, Strategy::Oracle, true).unwrap();
        let expect = c.e_p(1);
        assert!((s - expect).norm() < 1e-12);
    }

    #[test]
    fn trilinear_strategies_agree() {
        let c = ctx(101);
        for seed in 0..5u64 {
            let x = FpSet::random(&c, 20, seed * 3 + 1).unwrap();
            let y = FpSet::random(&c, 15, seed * 3 + 2).unwrap();
            let z = FpSet::random(&c, 10, seed * 3 + 3).unwrap();
            let wx = WeightVec::random_unit_disc(x, seed + 10);
            let wy = WeightVec::random_unit_disc(y, seed + 20);
            let wz = WeightVec::random_unit_disc(z, seed + 30);
            let a = trilinear_s(&wx, &wy, &wz, Strategy::Oracle, true).unwrap();
            let b = trilinear_s(&wx, &wy, &wz, Strategy::Fast, true).unwrap();
            let tol = 1e-6 * a.norm().max(b.norm()).max(1e-3);
            assert!((a - b).norm() <= tol, "seed {seed}: {a} vs {b}");
        }
    }

    #[test]
    fn trilinear_t_reduces_to_s_on_product_weights() {
        // With rank-one pairwise weights rho = alpha x beta etc. squared
        // against S on unit weights: use all-ones, T = S.
        let c = ctx(31);
        let x = FpSet::random(&c, 5, 1).unwrap();
        let y = FpSet::random(&c, 4, 2).unwrap();
        let z = FpSet::random(&c, 6, 3).unwrap();
        let rho = PairWeights::ones(x.clone(), y.clone()).unwrap();
        let sigma = PairWeights::ones(x.clone(), z.clone()).unwrap();
        let tau = PairWeights::ones(y.clone(), z.clone()).unwrap();
        let t = trilinear_t(&rho, &sigma, &tau, true).unwrap();
        let s = trilinear_s(
            &WeightVec::ones(x),
            &WeightVec::ones(y),
            &WeightVec::ones(z),
            Strategy::Oracle,
            true,
        )
        .unwrap();
        assert!((t - s).norm() < 1e-9);
    }

    #[test]
    fn trilinear_t_support_mismatch() {
        let c = ctx(31);
        let x = FpSet::random(&c, 5, 1).unwrap();
        let y = FpSet::random(&c, 4, 2).unwrap();
        let z = FpSet::random(&c, 6, 3).unwrap();
        let other = FpSet::random(&c, 3, 9).unwrap();
        let rho = PairWeights::ones(x.clone(), y.clone()).unwrap();
        let sigma = PairWeights::ones(other, z.clone()).unwrap();
        let tau = PairWeights::ones(y, z).unwrap();
        assert!(matches!(
            trilinear_t(&rho, &sigma, &tau, true),
            Err(Error::SupportMismatch(_))
        ));
    }

    #[test]
    fn gauss_sum_anchor() {
        // Nontrivial character, psi(x) = x: |S| = sqrt(p).
        let c = ctx(5);
        let spec = TrinomialSpec {
            a: 1,
            b: 0,
            c: 0,
            k: 1,
            l: 1,
            m: 1,
            chi_index: 2,
        };
        let s = trinomial_sum(&c, &spec, true);
        assert!((s.norm() - 5f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn principal_character_zero_polynomial() {
        let c = ctx(7);
        let spec = TrinomialSpec {
            a: 0,
            b: 0,
            c: 0,
            k: 1,
            l: 2,
            m: 3,
            chi_index: 0,
        };
        let s = trinomial_sum(&c, &spec, true);
        assert!((s.re - 6.0).abs() < 1e-12 && s.im.abs() < 1e-12);
    }

    #[test]
    fn scaling_invariance_example() {
        // p = 13, j = 1, exponents (4, 6, 3): scaling x -> t x maps
        // coefficients (1,1,1) to (t^4, t^6, t^3) and fixes |S|.
        let c = ctx(13);
        let base = TrinomialSpec {
            a: 1,
            b: 1,
            c: 1,
            k: 4,
            l: 6,
            m: 3,
            chi_index: 1,
        };
        let t = 2u64;
        let scaled = TrinomialSpec {
            a: c.pow_elem(t, 4),
            b: c.pow_elem(t, 6),
            c: c.pow_elem(t, 3),
            ..base
        };
        assert_eq!((scaled.a, scaled.b, scaled.c), (3, 12, 8));
        let s1 = trinomial_sum(&c, &base, true);
        let s2 = trinomial_sum(&c, &scaled, true);
        assert!((s1.norm() - s2.norm()).abs() < 1e-9);
    }

    #[test]
    fn trinomial_params_examples() {
        let p = trinomial_params(13, 4, 6, 3);
        assert_eq!(
            p,
            TrinomialParams {
                d: 4,
                e: 6,
                f: 3,
                g: 4,
                h: 2
            }
        );
        assert!(!p.hypothesis_ok());
        let q = trinomial_params(7, 2, 3, 6);
        assert_eq!(
            q,
            TrinomialParams {
                d: 2,
                e: 3,
                f: 6,
                g: 1,
                h: 1
            }
        );
        assert!(q.hypothesis_ok());
    }

    #[test]
    fn bound3_branches() {
        // p = 13, f = g = h = 12: gh = 144 >= 13 ln 13, first branch.
        let b = cor_bound3_value(13, 12, 12, 12);
        assert_eq!(b.branch, Bound3Branch::LargeGh);
        let expect = 13f64.powf(7.0 / 8.0) * 12f64.powf(1.0 / 8.0);
        assert!((b.value - expect).abs() < 1e-12);
        // f = g = h = 1: second branch, p (ln p)^{1/8}.
        let b2 = cor_bound3_value(13, 1, 1, 1);
        assert_eq!(b2.branch, Bound3Branch::SmallGh);
        let expect2 = 13.0 * 13f64.ln().powf(1.0 / 8.0);
        assert!((b2.value - expect2).abs() < 1e-12);
    }
}
