//! Subsets of F_p and representation functions r_{A op B}.
//!
//! An `FpSet` keeps both a bitset (membership tests) and a sorted element
//! list (iteration); the two views are maintained together and equality is
//! semantic. Every constructor that draws randomness takes an explicit seed.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{ArithOp, FieldCtx};
use crate::rng::SplitMix64;

#[derive(Clone)]
pub struct FpSet {
    ctx: Arc<FieldCtx>,
    bits: Vec<u64>,
    elems: Vec<u64>,
}

impl std::fmt::Debug for FpSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FpSet(p={}, n={})", self.ctx.p(), self.elems.len())
    }
}

impl PartialEq for FpSet {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.p() == other.ctx.p() && self.elems == other.elems
    }
}
impl Eq for FpSet {}

impl FpSet {
    pub fn empty(ctx: &Arc<FieldCtx>) -> FpSet {
        let words = (ctx.p() as usize).div_ceil(64);
        FpSet {
            ctx: Arc::clone(ctx),
            bits: vec![0; words],
            elems: Vec::new(),
        }
    }

    /// Builds a set from arbitrary residues; duplicates collapse.
    pub fn from_elems<I: IntoIterator<Item = u64>>(ctx: &Arc<FieldCtx>, iter: I) -> FpSet {
        let words = (ctx.p() as usize).div_ceil(64);
        let mut bits = vec![0u64; words];
        for x in iter {
            let x = x % ctx.p();
            bits[(x / 64) as usize] |= 1 << (x % 64);
        }
        let mut elems = Vec::new();
        for (w, &word) in bits.iter().enumerate() {
            let mut word = word;
            while word != 0 {
                let b = word.trailing_zeros() as u64;
                elems.push(w as u64 * 64 + b);
                word &= word - 1;
            }
        }
        FpSet {
            ctx: Arc::clone(ctx),
            bits,
            elems,
        }
    }

    pub fn full(ctx: &Arc<FieldCtx>) -> FpSet {
        FpSet::from_elems(ctx, 0..ctx.p())
    }

    #[inline]
    pub fn contains(&self, x: u64) -> bool {
        let x = x % self.ctx.p();
        self.bits[(x / 64) as usize] >> (x % 64) & 1 == 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Elements in increasing order.
    #[inline]
    pub fn elems(&self) -> &[u64] {
        &self.elems
    }

    #[inline]
    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    /// The translate A + delta.
    pub fn translate(&self, delta: u64) -> FpSet {
        FpSet::from_elems(
            &self.ctx,
            self.elems.iter().map(|&a| self.ctx.add(a, delta)),
        )
    }

    /// Indicator of the set as a dense integer function.
    pub fn indicator(&self) -> Vec<u64> {
        let mut f = vec![0u64; self.ctx.p() as usize];
        for &a in &self.elems {
            f[a as usize] = 1;
        }
        f
    }

    pub fn remove_zero(&self) -> FpSet {
        FpSet::from_elems(&self.ctx, self.elems.iter().copied().filter(|&a| a != 0))
    }

    /// The multiplicative subgroup of order d, for d | p - 1. Elements are
    /// g^{i (p-1)/d}, i = 0..d.
    pub fn subgroup(ctx: &Arc<FieldCtx>, d: u64) -> Result<FpSet> {
        let n = ctx.p() - 1;
        if d == 0 || !n.is_multiple_of(d) {
            return Err(Error::NotDivisor { d, n });
        }
        let step = n / d;
        Ok(FpSet::from_elems(ctx, (0..d).map(|i| ctx.pow_g(i * step))))
    }

    /// The interval {k+1, ..., k+z} reduced mod p; wraparound is fine, and
    /// 1 <= z <= p so elements are distinct.
    pub fn interval(ctx: &Arc<FieldCtx>, k: i64, z: u64) -> Result<FpSet> {
        if z == 0 || z > ctx.p() {
            return Err(Error::BadLength { z, p: ctx.p() });
        }
        let start = ctx.reduce_i64(k);
        Ok(FpSet::from_elems(
            ctx,
            (1..=z).map(|i| ctx.add(start, i % ctx.p())),
        ))
    }

    /// Shifted reciprocals {1/z + a : z in (k, k+z]}, skipping residues
    /// z = 0; returns the set and the number of skipped elements.
    pub fn recip_shift(ctx: &Arc<FieldCtx>, a: u64, k: i64, z: u64) -> Result<(FpSet, u64)> {
        if z == 0 || z >= ctx.p() {
            return Err(Error::BadLength { z, p: ctx.p() });
        }
        let a = a % ctx.p();
        let start = ctx.reduce_i64(k);
        let mut skipped = 0u64;
        let mut out = Vec::with_capacity(z as usize);
        for i in 1..=z {
            let zi = ctx.add(start, i % ctx.p());
            if zi == 0 {
                skipped += 1;
                continue;
            }
            out.push(ctx.add(ctx.inv(zi)?, a));
        }
        Ok((FpSet::from_elems(ctx, out), skipped))
    }

    /// A uniform random n-subset drawn by partial Fisher-Yates from the
    /// SplitMix64 stream for `seed`; deterministic given (p, n, seed).
    pub fn random(ctx: &Arc<FieldCtx>, n: u64, seed: u64) -> Result<FpSet> {
        let p = ctx.p();
        if n > p {
            return Err(Error::BadSize { n, p });
        }
        let mut rng = SplitMix64::new(seed);
        let mut pool: Vec<u64> = (0..p).collect();
        for i in 0..n as usize {
            let j = i as u64 + rng.next_below(p - i as u64);
            pool.swap(i, j as usize);
        }
        pool.truncate(n as usize);
        Ok(FpSet::from_elems(ctx, pool))
    }

    /// Like `random`, but drawn from the nonzero elements. The multiplicative
    /// checks want this: their character-sum arguments never see the zero
    /// class, and a random set containing 0 can put most of its product mass
    /// there.
    pub fn random_nonzero(ctx: &Arc<FieldCtx>, n: u64, seed: u64) -> Result<FpSet> {
        let p = ctx.p();
        if n > p - 1 {
            return Err(Error::BadSize { n, p });
        }
        let mut rng = SplitMix64::new(seed);
        let mut pool: Vec<u64> = (1..p).collect();
        for i in 0..n as usize {
            let j = i as u64 + rng.next_below(p - 1 - i as u64);
            pool.swap(i, j as usize);
        }
        pool.truncate(n as usize);
        Ok(FpSet::from_elems(ctx, pool))
    }

    /// Geometric progression {base^i : 0 <= i < n} (a set, so shorter when
    /// the orbit closes early). `base` must be nonzero.
    pub fn geometric(ctx: &Arc<FieldCtx>, base: u64, n: u64) -> Result<FpSet> {
        let base = base % ctx.p();
        if base == 0 {
            return Err(Error::ZeroArgument);
        }
        let mut out = Vec::new();
        let mut x = 1u64;
        for _ in 0..n {
            out.push(x);
            x = ctx.mul(x, base);
        }
        Ok(FpSet::from_elems(ctx, out))
    }
}

fn check_same_ctx(a: &FpSet, b: &FpSet) -> Result<()> {
    if a.p() != b.p() {
        return Err(Error::ContextMismatch(a.p(), b.p()));
    }
    Ok(())
}

/// The difference set A - B.
pub fn diff_set(a: &FpSet, b: &FpSet) -> Result<FpSet> {
    check_same_ctx(a, b)?;
    let ctx = a.ctx();
    Ok(FpSet::from_elems(
        ctx,
        a.elems()
            .iter()
            .flat_map(|&x| b.elems().iter().map(move |&y| (x, y)))
            .map(|(x, y)| ctx.sub(x, y)),
    ))
}

/// The product set A * B.
pub fn prod_set(a: &FpSet, b: &FpSet) -> Result<FpSet> {
    check_same_ctx(a, b)?;
    let ctx = a.ctx();
    Ok(FpSet::from_elems(
        ctx,
        a.elems()
            .iter()
            .flat_map(|&x| b.elems().iter().map(move |&y| (x, y)))
            .map(|(x, y)| ctx.mul(x, y)),
    ))
}

/// Representation function r(w) = #{(a, b) in A x B : a op b = w} as a
/// dense array, with its total mass. Division drops pairs with b = 0 and
/// records how many were dropped.
#[derive(Clone, Debug)]
pub struct RepFn {
    ctx: Arc<FieldCtx>,
    values: Vec<u64>,
    total: u128,
    dropped_pairs: u64,
}

impl RepFn {
    /// Wraps an arbitrary dense nonnegative function as a RepFn.
    pub fn from_values(ctx: &Arc<FieldCtx>, values: Vec<u64>) -> Result<RepFn> {
        if values.len() != ctx.p() as usize {
            return Err(Error::LengthMismatch {
                expected: ctx.p() as usize,
                got: values.len(),
            });
        }
        let total = values.iter().map(|&v| v as u128).sum();
        Ok(RepFn {
            ctx: Arc::clone(ctx),
            values,
            total,
            dropped_pairs: 0,
        })
    }

    #[inline]
    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    #[inline]
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, w: u64) -> u64 {
        self.values[(w % self.ctx.p()) as usize]
    }

    /// Total mass sum_w r(w); |A| * |B| except for division, where it is
    /// |A| * |B \ {0}|.
    #[inline]
    pub fn total(&self) -> u128 {
        self.total
    }

    #[inline]
    pub fn dropped_pairs(&self) -> u64 {
        self.dropped_pairs
    }
}

/// Builds r_{A op B}.
pub fn rep_fn(a: &FpSet, b: &FpSet, op: ArithOp) -> Result<RepFn> {
    check_same_ctx(a, b)?;
    let ctx = a.ctx();
    let mut values = vec![0u64; ctx.p() as usize];
    let mut dropped = 0u64;
    for &x in a.elems() {
        for &y in b.elems() {
            let w = match op {
                ArithOp::Add => ctx.add(x, y),
                ArithOp::Sub => ctx.sub(x, y),
                ArithOp::Mul => ctx.mul(x, y),
                ArithOp::Div => {
                    if y == 0 {
                        dropped += 1;
                        continue;
                    }
                    ctx.mul(x, ctx.inv(y)?)
                }
            };
            values[w as usize] += 1;
        }
    }
    let total = values.iter().map(|&v| v as u128).sum();
    Ok(RepFn {
        ctx: Arc::clone(ctx),
        values,
        total,
        dropped_pairs: dropped,
    })
}
