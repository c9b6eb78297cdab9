//! Prime-field context: dlog/pow tables for F_p^*, additive characters
//! e_p(z) = e^{2 pi i z / p}, the additive character transform, and exact
//! arithmetic convolutions of integer- or complex-valued functions on F_p.
//!
//! Conventions that the rest of the crate relies on:
//! - the generator is the least primitive root, so contexts are canonical;
//! - `mult_convolve` runs over all of F_p with the zero row/column folded in
//!   as c(0) = r(0)*sum(s) + s(0)*sum(r) - r(0)*s(0);
//! - division pairs with divisor zero are dropped, never remapped.

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::transform;

/// Default cap on p; the dlog/pow tables are O(p) words.
pub const DEFAULT_TABLE_BUDGET: u64 = 2_000_000;

/// Strategy selector shared by counting and transform operations.
/// `Oracle` is the independent reference route (naive loops, literal tuple
/// enumeration); `Fast` is the production route. Results must agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Oracle,
    Fast,
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Strategy::Oracle => write!(f, "oracle"),
            Strategy::Fast => write!(f, "fast"),
        }
    }
}

/// The four pointwise arithmetic laws used in representation counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl ArithOp {
    pub fn symbol(self) -> char {
        match self {
            ArithOp::Add => '+',
            ArithOp::Sub => '-',
            ArithOp::Mul => '*',
            ArithOp::Div => '/',
        }
    }
}

/// Dense complex function on F_p, indexed by residue.
#[derive(Clone, Debug)]
pub struct ComplexVec(pub Vec<Complex64>);

impl ComplexVec {
    pub fn zeros(p: u64) -> Self {
        ComplexVec(vec![Complex64::new(0.0, 0.0); p as usize])
    }
}

/// Immutable per-prime context. Construction is deterministic: the same p
/// always yields the same generator and tables.
pub struct FieldCtx {
    p: u64,
    g: u64,
    /// dlog[x] for x in [1, p); dlog[0] is a sentinel.
    dlog: Vec<u32>,
    /// pow[t] = g^t for t in [0, p-1).
    pow: Vec<u32>,
    roots_p: OnceLock<Vec<Complex64>>,
    roots_order: OnceLock<Vec<Complex64>>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("g", &self.g)
            .finish()
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FieldCtx {
    /// Builds the context for prime `p` under the default table budget.
    pub fn new(p: u64) -> Result<Arc<FieldCtx>> {
        FieldCtx::with_budget(p, DEFAULT_TABLE_BUDGET)
    }

    pub fn with_budget(p: u64, budget: u64) -> Result<Arc<FieldCtx>> {
        if p > budget {
            return Err(Error::TooLarge { p, budget });
        }
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        let g = least_primitive_root(p);
        let n = p - 1;
        let mut pow = vec![0u32; n as usize];
        let mut dlog = vec![u32::MAX; p as usize];
        let mut acc = 1u64;
        for t in 0..n {
            pow[t as usize] = acc as u32;
            dlog[acc as usize] = t as u32;
            acc = acc * g % p;
        }
        debug_assert_eq!(acc, 1);
        Ok(Arc::new(FieldCtx {
            p,
            g,
            dlog,
            pow,
            roots_p: OnceLock::new(),
            roots_order: OnceLock::new(),
        }))
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// The least primitive root modulo p.
    #[inline]
    pub fn generator(&self) -> u64 {
        self.g
    }

    /// Discrete logarithm base g; errors on 0.
    #[inline]
    pub fn dlog(&self, x: u64) -> Result<u64> {
        let x = x % self.p;
        if x == 0 {
            return Err(Error::ZeroArgument);
        }
        Ok(self.dlog[x as usize] as u64)
    }

    /// g^t with t reduced mod p-1.
    #[inline]
    pub fn pow_g(&self, t: u64) -> u64 {
        if self.p == 2 {
            return 1;
        }
        self.pow[(t % (self.p - 1)) as usize] as u64
    }

    #[inline]
    pub fn reduce_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    /// Multiplicative inverse of nonzero `a` via the dlog/pow tables.
    #[inline]
    pub fn inv(&self, a: u64) -> Result<u64> {
        let t = self.dlog(a)?;
        if t == 0 {
            return Ok(1);
        }
        Ok(self.pow[(self.p - 1 - t) as usize] as u64)
    }

    /// x^e for x in F_p, e >= 0, without table round-trips (handles x = 0).
    pub fn pow_elem(&self, x: u64, e: u64) -> u64 {
        let x = x % self.p;
        if x == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let t = self.dlog[x as usize] as u128;
        let n = (self.p - 1) as u128;
        self.pow[((t * (e as u128 % n)) % n) as usize] as u64
    }

    fn roots_p(&self) -> &[Complex64] {
        self.roots_p.get_or_init(|| {
            (0..self.p)
                .map(|k| {
                    Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / self.p as f64)
                })
                .collect()
        })
    }

    fn roots_order(&self) -> &[Complex64] {
        self.roots_order.get_or_init(|| {
            let n = self.p - 1;
            (0..n)
                .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64))
                .collect()
        })
    }

    /// Additive character e_p(z) = e^{2 pi i z / p}.
    #[inline]
    pub fn e_p(&self, z: u64) -> Complex64 {
        self.roots_p()[(z % self.p) as usize]
    }

    /// Multiplicative character of index j: chi_j(x) = e_{p-1}(j * dlog x).
    #[inline]
    pub fn chi(&self, j: u64, x: u64) -> Result<Complex64> {
        let t = self.dlog(x)?;
        Ok(self.chi_power(j, t))
    }

    /// chi_j at x = g^t, for callers that already hold the exponent t.
    #[inline]
    pub fn chi_power(&self, j: u64, t: u64) -> Complex64 {
        let n = self.p - 1;
        self.roots_order()[((j % n) as u128 * t as u128 % n as u128) as usize]
    }
}

fn least_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let n = p - 1;
    let factors = prime_factors(n);
    'cand: for g in 2..p {
        for &q in &factors {
            if mod_pow_u64(g, n / q, p) == 1 {
                continue 'cand;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root");
}

fn mod_pow_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

// ---------------------------------------------------------------------------
// Additive character transform
// ---------------------------------------------------------------------------

/// F(w) = sum_x f(x) e_p(w x). `Oracle` is the direct O(p^2) sum, `Fast` the
/// Bluestein route; they agree to 1e-9 relative.
pub fn additive_dft(ctx: &FieldCtx, f: &ComplexVec, strategy: Strategy) -> Result<ComplexVec> {
    let p = ctx.p() as usize;
    if f.0.len() != p {
        return Err(Error::LengthMismatch {
            expected: p,
            got: f.0.len(),
        });
    }
    match strategy {
        Strategy::Oracle => {
            let roots = ctx.roots_p();
            let mut out = vec![Complex64::new(0.0, 0.0); p];
            for (w, slot) in out.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (x, fx) in f.0.iter().enumerate() {
                    acc += fx * roots[w * x % p];
                }
                *slot = acc;
            }
            Ok(ComplexVec(out))
        }
        Strategy::Fast => Ok(ComplexVec(transform::bluestein_dft(&f.0))),
    }
}

// ---------------------------------------------------------------------------
// Arithmetic convolutions on F_p
// ---------------------------------------------------------------------------

fn check_len(p: u64, len: usize) -> Result<()> {
    if len != p as usize {
        return Err(Error::LengthMismatch {
            expected: p as usize,
            got: len,
        });
    }
    Ok(())
}

/// c(t) = #-weighted sum over x op y = t of r(x) s(y), for integer-valued r
/// and s, exactly. Multiplicative/division cases fold the zero row and
/// column through the boundary formula; division drops y = 0 entirely.
///
/// Both strategies return bit-identical vectors: the fast route uses an
/// exact NTT and falls back to the naive loop when the coefficient bound
/// cannot be certified.
pub fn op_convolve_exact(
    ctx: &FieldCtx,
    r: &[u64],
    s: &[u64],
    op: ArithOp,
    strategy: Strategy,
) -> Result<Vec<u128>> {
    let p = ctx.p();
    check_len(p, r.len())?;
    check_len(p, s.len())?;
    match strategy {
        Strategy::Oracle => Ok(op_convolve_exact_naive(ctx, r, s, op)),
        Strategy::Fast => {
            let max_r = r.iter().copied().max().unwrap_or(0);
            let max_s = s.iter().copied().max().unwrap_or(0);
            let n = match op {
                ArithOp::Add | ArithOp::Sub => p,
                ArithOp::Mul | ArithOp::Div => p - 1,
            };
            if n == 0 || !transform::exact_bound_ok(n, max_r, max_s) {
                return Ok(op_convolve_exact_naive(ctx, r, s, op));
            }
            match op {
                ArithOp::Add => {
                    let c = transform::cyclic_convolve_exact(r, s)?;
                    Ok(c)
                }
                ArithOp::Sub => {
                    // x - y = t  <=>  x + (p - y) = t mod p.
                    let mut s_neg = vec![0u64; p as usize];
                    for (y, &v) in s.iter().enumerate() {
                        let ny = if y == 0 { 0 } else { p as usize - y };
                        s_neg[ny] = v;
                    }
                    transform::cyclic_convolve_exact(r, &s_neg)
                }
                ArithOp::Mul | ArithOp::Div => {
                    let n = n as usize;
                    // Map F_p^* to Z/(p-1) through dlog, convolve, map back.
                    let mut re = vec![0u64; n];
                    let mut se = vec![0u64; n];
                    for t in 0..n {
                        let x = ctx.pow[t] as usize;
                        re[t] = r[x];
                        se[t] = s[x];
                    }
                    if op == ArithOp::Div {
                        // x / y = t  <=>  dlog x - dlog y = dlog t.
                        se = (0..n).map(|t| se[(n - t) % n]).collect();
                    }
                    let ce = transform::cyclic_convolve_exact(&re, &se)?;
                    let mut out = vec![0u128; p as usize];
                    for (t, &v) in ce.iter().enumerate() {
                        out[ctx.pow[t] as usize] = v;
                    }
                    let sum_r: u128 = r.iter().map(|&v| v as u128).sum();
                    let sum_s: u128 = s.iter().map(|&v| v as u128).sum();
                    match op {
                        ArithOp::Mul => {
                            out[0] = r[0] as u128 * sum_s + s[0] as u128 * sum_r
                                - r[0] as u128 * s[0] as u128;
                        }
                        ArithOp::Div => {
                            // Only x = 0 with y != 0 lands on zero.
                            out[0] = r[0] as u128 * (sum_s - s[0] as u128);
                        }
                        _ => unreachable!(),
                    }
                    Ok(out)
                }
            }
        }
    }
}

fn op_convolve_exact_naive(ctx: &FieldCtx, r: &[u64], s: &[u64], op: ArithOp) -> Vec<u128> {
    let p = ctx.p() as usize;
    let mut out = vec![0u128; p];
    for (x, &rv) in r.iter().enumerate().take(p) {
        if rv == 0 {
            continue;
        }
        let rx = rv as u128;
        for (y, &sv) in s.iter().enumerate().take(p) {
            if sv == 0 {
                continue;
            }
            let t = match op {
                ArithOp::Add => ctx.add(x as u64, y as u64),
                ArithOp::Sub => ctx.sub(x as u64, y as u64),
                ArithOp::Mul => ctx.mul(x as u64, y as u64),
                ArithOp::Div => {
                    if y == 0 {
                        continue;
                    }
                    ctx.mul(x as u64, ctx.inv(y as u64).expect("y != 0"))
                }
            };
            out[t as usize] += rx * sv as u128;
        }
    }
    out
}

/// Multiplicative convolution c(t) = sum_{x y = t} r(x) s(y) over all of
/// F_p, exactly (see module docs for the zero boundary).
pub fn mult_convolve_exact(
    ctx: &FieldCtx,
    r: &[u64],
    s: &[u64],
    strategy: Strategy,
) -> Result<Vec<u128>> {
    op_convolve_exact(ctx, r, s, ArithOp::Mul, strategy)
}

/// Complex multiplicative convolution with the same boundary convention as
/// the exact path. Fast strategy is FFT-based; Oracle is the direct loop.
pub fn mult_convolve_complex(
    ctx: &FieldCtx,
    r: &ComplexVec,
    s: &ComplexVec,
    strategy: Strategy,
) -> Result<ComplexVec> {
    let p = ctx.p();
    check_len(p, r.0.len())?;
    check_len(p, s.0.len())?;
    match strategy {
        Strategy::Oracle => {
            let mut out = ComplexVec::zeros(p);
            for x in 0..p as usize {
                if r.0[x].norm_sqr() == 0.0 {
                    continue;
                }
                for y in 0..p as usize {
                    let t = ctx.mul(x as u64, y as u64) as usize;
                    out.0[t] += r.0[x] * s.0[y];
                }
            }
            Ok(out)
        }
        Strategy::Fast => {
            let n = (p - 1) as usize;
            let mut re = vec![Complex64::new(0.0, 0.0); n];
            let mut se = vec![Complex64::new(0.0, 0.0); n];
            for t in 0..n {
                let x = ctx.pow[t] as usize;
                re[t] = r.0[x];
                se[t] = s.0[x];
            }
            let ce = transform::cyclic_convolve_complex(&re, &se);
            let mut out = ComplexVec::zeros(p);
            for (t, &v) in ce.iter().enumerate() {
                out.0[ctx.pow[t] as usize] = v;
            }
            let sum_r: Complex64 = r.0.iter().sum();
            let sum_s: Complex64 = s.0.iter().sum();
            out.0[0] = r.0[0] * sum_s + s.0[0] * sum_r - r.0[0] * s.0[0];
            Ok(out)
        }
    }
}
