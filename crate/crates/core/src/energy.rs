//! Counting quantities: energies, difference-product counts, collinear
//! triples and quadruples, and unit-line incidences.
//!
//! Values are exact nonnegative integers and can reach |A|^8 and beyond, so
//! every accumulator is a BigUint. Each operation carries two strategies:
//!
//! - `Oracle`: literal tuple enumeration (or a histogram over pairs), with
//!   explicit caps since costs are polynomial of degree up to 8;
//! - `Fast`: representation functions plus exact convolutions.
//!
//! The oracle routes are first-class: the verification harness uses them as
//! the independent side of its exact identities.

use std::time::{Duration, Instant};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::{op_convolve_exact, ArithOp, Strategy};
use crate::sets::{rep_fn, FpSet, RepFn};

/// Caps for the oracle tiers, as point counts |U| * |V| (or |A| for the
/// grid quantities). Enumeration cost is the stated power of the cap.
pub mod caps {
    /// 8-tuple enumeration, cost (|U||V|)^4.
    pub const TUPLE8: u64 = 40;
    /// 6-tuple enumeration, cost (|U||V|)^3.
    pub const TUPLE6: u64 = 64;
    /// Pair histogram, cost (|U||V|)^2.
    pub const PAIR_HIST: u64 = 4096;
    /// Per-pivot histogram triple counts, cost (|U||V|)^2. Larger than
    /// PAIR_HIST: these are the fast path, not an oracle tier, and the
    /// subgroup sweeps need grids past 3 * 10^4 points.
    pub const TRIPLE_HIST: u64 = 65536;
    /// 8-tuple enumeration over grid points, cost |A|^8.
    pub const GRID_TUPLE8: u64 = 8;
    /// Pivot-histogram routes over grids, cost |A|^4.
    pub const GRID_PIVOT: u64 = 40;
}

#[derive(Clone, Debug)]
pub struct CountResult {
    /// Exact count.
    pub value: BigUint,
    pub strategy: Strategy,
    pub elapsed: Duration,
}

impl CountResult {
    fn done(value: BigUint, strategy: Strategy, start: Instant) -> CountResult {
        CountResult {
            value,
            strategy,
            elapsed: start.elapsed(),
        }
    }
}

fn check_pair(u: &FpSet, v: &FpSet) -> Result<()> {
    if u.p() != v.p() {
        return Err(Error::ContextMismatch(u.p(), v.p()));
    }
    Ok(())
}

fn cap_check(what: &'static str, size: u64, cap: u64) -> Result<()> {
    if size > cap {
        return Err(Error::CapExceeded { what, size, cap });
    }
    Ok(())
}

fn sum_squares(c: &[u128]) -> BigUint {
    let mut acc = BigUint::from(0u32);
    for &v in c {
        let b = BigUint::from(v);
        acc += &b * &b;
    }
    acc
}

fn sum_cubes(c: &[u128]) -> BigUint {
    let mut acc = BigUint::from(0u32);
    for &v in c {
        let b = BigUint::from(v);
        acc += &b * &b * &b;
    }
    acc
}

fn apply_op(u: &FpSet, x: u64, y: u64, op: ArithOp) -> Option<u64> {
    let ctx = u.ctx();
    Some(match op {
        ArithOp::Add => ctx.add(x, y),
        ArithOp::Sub => ctx.sub(x, y),
        ArithOp::Mul => ctx.mul(x, y),
        ArithOp::Div => {
            if y == 0 {
                return None;
            }
            ctx.mul(x, ctx.inv(y).expect("nonzero"))
        }
    })
}

// ---------------------------------------------------------------------------
// Energies of set pairs
// ---------------------------------------------------------------------------

/// E*(U, V) = #{(u1, u2, v1, v2) : u1 * v1 = u2 * v2}, for * one of the
/// four laws. Division skips pairs with divisor zero on both sides.
pub fn energy(u: &FpSet, v: &FpSet, op: ArithOp, strategy: Strategy) -> Result<CountResult> {
    check_pair(u, v)?;
    let start = Instant::now();
    let value = match strategy {
        Strategy::Oracle => {
            let n = (u.len() * v.len()) as u64;
            cap_check("energy oracle", n, caps::PAIR_HIST)?;
            // Literal quadruple enumeration.
            let mut count = 0u128;
            for &u1 in u.elems() {
                for &v1 in v.elems() {
                    let Some(w1) = apply_op(u, u1, v1, op) else {
                        continue;
                    };
                    for &u2 in u.elems() {
                        for &v2 in v.elems() {
                            if apply_op(u, u2, v2, op) == Some(w1) {
                                count += 1;
                            }
                        }
                    }
                }
            }
            BigUint::from(count)
        }
        Strategy::Fast => {
            let r = rep_fn(u, v, op)?;
            let wide: Vec<u128> = r.values().iter().map(|&x| x as u128).collect();
            sum_squares(&wide)
        }
    };
    Ok(CountResult::done(value, strategy, start))
}

/// E*_3(U, V) = sum_w r(w)^3: sextuple solutions of u1*v1 = u2*v2 = u3*v3.
pub fn energy3(u: &FpSet, v: &FpSet, op: ArithOp, strategy: Strategy) -> Result<CountResult> {
    check_pair(u, v)?;
    let start = Instant::now();
    let value = match strategy {
        Strategy::Oracle => {
            let n = (u.len() * v.len()) as u64;
            cap_check("energy3 oracle", n, caps::TUPLE6)?;
            // Literal sextuple enumeration.
            let mut count = 0u128;
            for &u1 in u.elems() {
                for &v1 in v.elems() {
                    let Some(w1) = apply_op(u, u1, v1, op) else {
                        continue;
                    };
                    for &u2 in u.elems() {
                        for &v2 in v.elems() {
                            if apply_op(u, u2, v2, op) != Some(w1) {
                                continue;
                            }
                            for &u3 in u.elems() {
                                for &v3 in v.elems() {
                                    if apply_op(u, u3, v3, op) == Some(w1) {
                                        count += 1;
                                    }
                                }
                            }
                        }
                    }
                }
            }
            BigUint::from(count)
        }
        Strategy::Fast => {
            let r = rep_fn(u, v, op)?;
            let wide: Vec<u128> = r.values().iter().map(|&x| x as u128).collect();
            sum_cubes(&wide)
        }
    };
    Ok(CountResult::done(value, strategy, start))
}

// ---------------------------------------------------------------------------
// Energies of weighted functions
// ---------------------------------------------------------------------------

/// E*(F) = sum_t c(t)^2 with c = F op-convolved with itself.
pub fn energy_fn(f: &RepFn, op: ArithOp, strategy: Strategy) -> Result<CountResult> {
    let start = Instant::now();
    let c = op_convolve_exact(f.ctx(), f.values(), f.values(), op, strategy)?;
    Ok(CountResult::done(sum_squares(&c), strategy, start))
}

/// E*_3(F) = sum_t c(t)^3.
pub fn energy3_fn(f: &RepFn, op: ArithOp, strategy: Strategy) -> Result<CountResult> {
    let start = Instant::now();
    let c = op_convolve_exact(f.ctx(), f.values(), f.values(), op, strategy)?;
    Ok(CountResult::done(sum_cubes(&c), strategy, start))
}

/// E*(F, S) = sum_t (sum_{x op s = t, s in S} F(x))^2.
pub fn energy_fn_set(f: &RepFn, s: &FpSet, op: ArithOp, strategy: Strategy) -> Result<CountResult> {
    if f.ctx().p() != s.p() {
        return Err(Error::ContextMismatch(f.ctx().p(), s.p()));
    }
    let start = Instant::now();
    let c = op_convolve_exact(f.ctx(), f.values(), &s.indicator(), op, strategy)?;
    Ok(CountResult::done(sum_squares(&c), strategy, start))
}

// ---------------------------------------------------------------------------
// Difference-product counts
// ---------------------------------------------------------------------------

/// D(U, V) = #{(u_i, v_i)_{i=1..4} : (u1-v1)(u2-v2) = (u3-v3)(u4-v4)};
/// zero products count.
///
/// Oracle tiers: literal 8-tuples, then a histogram over difference-pair
/// products. Fast: r = r_{U-V}, c = r mult-convolved with r, sum c^2.
pub fn d_times(u: &FpSet, v: &FpSet, strategy: Strategy) -> Result<CountResult> {
    check_pair(u, v)?;
    let start = Instant::now();
    let n = (u.len() * v.len()) as u64;
    let value = match strategy {
        Strategy::Oracle => {
            if n <= caps::TUPLE8 {
                d_times_enum(u, v)
            } else {
                cap_check("d_times oracle", n, caps::PAIR_HIST)?;
                d_times_pair_product(u, v)
            }
        }
        Strategy::Fast => {
            let r = rep_fn(u, v, ArithOp::Sub)?;
            let c = op_convolve_exact(u.ctx(), r.values(), r.values(), ArithOp::Mul, strategy)?;
            sum_squares(&c)
        }
    };
    Ok(CountResult::done(value, strategy, start))
}

/// Literal 8-tuple enumeration of D(U, V); cost (|U||V|)^4.
pub fn d_times_enum(u: &FpSet, v: &FpSet) -> BigUint {
    let ctx = u.ctx();
    let pairs: Vec<u64> = u
        .elems()
        .iter()
        .flat_map(|&a| v.elems().iter().map(move |&b| (a, b)))
        .map(|(a, b)| ctx.sub(a, b))
        .collect();
    let mut count = BigUint::from(0u32);
    for &d1 in &pairs {
        for &d2 in &pairs {
            let lhs = ctx.mul(d1, d2);
            let mut matches = 0u64;
            for &d3 in &pairs {
                for &d4 in &pairs {
                    if ctx.mul(d3, d4) == lhs {
                        matches += 1;
                    }
                }
            }
            count += BigUint::from(matches);
        }
    }
    count
}

/// Histogram route: count difference-pair products, sum of squares.
/// Cost (|U||V|)^2; independent of the dlog/transform machinery.
pub fn d_times_pair_product(u: &FpSet, v: &FpSet) -> BigUint {
    let ctx = u.ctx();
    let diffs: Vec<u64> = u
        .elems()
        .iter()
        .flat_map(|&a| v.elems().iter().map(move |&b| (a, b)))
        .map(|(a, b)| ctx.sub(a, b))
        .collect();
    let mut hist = vec![0u64; ctx.p() as usize];
    for &d1 in &diffs {
        for &d2 in &diffs {
            hist[ctx.mul(d1, d2) as usize] += 1;
        }
    }
    let wide: Vec<u128> = hist.iter().map(|&x| x as u128).collect();
    sum_squares(&wide)
}

/// D-tilde(U, V) = #{(u_1..u_4, v_1..v_4) :
/// (u1-u2)(v1-v2) = (u3-u4)(v3-v4) != 0}. Differences are within each set
/// and the common product must be nonzero.
pub fn d_times_tilde(u: &FpSet, v: &FpSet, strategy: Strategy) -> Result<CountResult> {
    check_pair(u, v)?;
    let start = Instant::now();
    let value = match strategy {
        Strategy::Oracle => {
            let n = (u.len() * v.len()) as u64;
            if n <= caps::TUPLE8 {
                d_times_tilde_enum(u, v)
            } else {
                cap_check("d_times_tilde oracle", n, caps::PAIR_HIST)?;
                d_times_tilde_pair_product(u, v)
            }
        }
        Strategy::Fast => {
            let ru = rep_fn(u, u, ArithOp::Sub)?;
            let rv = rep_fn(v, v, ArithOp::Sub)?;
            let c = op_convolve_exact(u.ctx(), ru.values(), rv.values(), ArithOp::Mul, strategy)?;
            sum_squares(&c[1..])
        }
    };
    Ok(CountResult::done(value, strategy, start))
}

/// Literal 8-tuple enumeration of D-tilde; cost (|U||V|)^4.
pub fn d_times_tilde_enum(u: &FpSet, v: &FpSet) -> BigUint {
    let ctx = u.ctx();
    let du: Vec<u64> = u
        .elems()
        .iter()
        .flat_map(|&a| u.elems().iter().map(move |&b| (a, b)))
        .map(|(a, b)| ctx.sub(a, b))
        .collect();
    let dv: Vec<u64> = v
        .elems()
        .iter()
        .flat_map(|&a| v.elems().iter().map(move |&b| (a, b)))
        .map(|(a, b)| ctx.sub(a, b))
        .collect();
    let mut count = BigUint::from(0u32);
    for &a in &du {
        for &b in &dv {
            let lhs = ctx.mul(a, b);
            if lhs == 0 {
                continue;
            }
            let mut matches = 0u64;
            for &c in &du {
                for &d in &dv {
                    if ctx.mul(c, d) == lhs {
                        matches += 1;
                    }
                }
            }
            count += BigUint::from(matches);
        }
    }
    count
}

/// Histogram over within-set difference products, nonzero side only.
pub fn d_times_tilde_pair_product(u: &FpSet, v: &FpSet) -> BigUint {
    let ctx = u.ctx();
    let mut hist = vec![0u64; ctx.p() as usize];
    for &a in u.elems() {
        for &b in u.elems() {
            let da = ctx.sub(a, b);
            if da == 0 {
                continue;
            }
            for &c in v.elems() {
                for &d in v.elems() {
                    let db = ctx.sub(c, d);
                    if db != 0 {
                        hist[ctx.mul(da, db) as usize] += 1;
                    }
                }
            }
        }
    }
    let wide: Vec<u128> = hist[1..].iter().map(|&x| x as u128).collect();
    sum_squares(&wide)
}

/// N(U, V, W) = #{(u1, u2, v1, v2, w1, w2) : u1 (v1 - w1) = u2 (v2 - w2)}.
pub fn n_count(u: &FpSet, v: &FpSet, w: &FpSet, strategy: Strategy) -> Result<CountResult> {
    check_pair(u, v)?;
    check_pair(u, w)?;
    let start = Instant::now();
    let value = match strategy {
        Strategy::Oracle => {
            let n = (u.len() * v.len() * w.len()) as u64;
            cap_check("n_count oracle", n, caps::PAIR_HIST)?;
            let ctx = u.ctx();
            let mut hist = vec![0u64; ctx.p() as usize];
            for &a in u.elems() {
                for &b in v.elems() {
                    for &c in w.elems() {
                        hist[ctx.mul(a, ctx.sub(b, c)) as usize] += 1;
                    }
                }
            }
            let wide: Vec<u128> = hist.iter().map(|&x| x as u128).collect();
            sum_squares(&wide)
        }
        Strategy::Fast => {
            let t = rep_fn(v, w, ArithOp::Sub)?;
            let c = op_convolve_exact(u.ctx(), &u.indicator(), t.values(), ArithOp::Mul, strategy)?;
            sum_squares(&c)
        }
    };
    Ok(CountResult::done(value, strategy, start))
}

// ---------------------------------------------------------------------------
// Collinear triples and quadruples
// ---------------------------------------------------------------------------

/// Collinear triples of the grid U x V, slope reading: ordered triples of
/// points on a common non-horizontal, non-vertical line through the pivot;
/// equivalently solutions of (v1-v2)(u1-u3) = (v1-v3)(u1-u2) with both
/// cross-products nonzero.
///
/// Fast: per pivot (u1, v1), histogram of slopes (v1-v2)/(u1-u2) over
/// points with u2 != u1, v2 != v1; add sum of squares. Cost (|U||V|)^2.
pub fn collinear_triples(u: &FpSet, v: &FpSet, strategy: Strategy) -> Result<CountResult> {
    check_pair(u, v)?;
    let start = Instant::now();
    let n = (u.len() * v.len()) as u64;
    let value = match strategy {
        Strategy::Oracle => {
            cap_check("collinear_triples oracle", n, caps::TUPLE6)?;
            collinear_triples_enum(u, v)
        }
        Strategy::Fast => {
            cap_check("collinear_triples", n, caps::TRIPLE_HIST)?;
            let ctx = u.ctx();
            let mut hist = vec![0u64; ctx.p() as usize];
            let mut touched: Vec<u64> = Vec::new();
            let mut acc = BigUint::from(0u32);
            for &u1 in u.elems() {
                for &v1 in v.elems() {
                    for &u2 in u.elems() {
                        if u2 == u1 {
                            continue;
                        }
                        let inv = ctx.inv(ctx.sub(u1, u2)).expect("nonzero");
                        for &v2 in v.elems() {
                            if v2 == v1 {
                                continue;
                            }
                            let s = ctx.mul(ctx.sub(v1, v2), inv);
                            if hist[s as usize] == 0 {
                                touched.push(s);
                            }
                            hist[s as usize] += 1;
                        }
                    }
                    let mut pivot_sum = 0u128;
                    for &s in &touched {
                        let c = hist[s as usize] as u128;
                        pivot_sum += c * c;
                        hist[s as usize] = 0;
                    }
                    touched.clear();
                    acc += BigUint::from(pivot_sum);
                }
            }
            acc
        }
    };
    Ok(CountResult::done(value, strategy, start))
}

/// Literal sextuple enumeration of the slope-reading triple count.
pub fn collinear_triples_enum(u: &FpSet, v: &FpSet) -> BigUint {
    let ctx = u.ctx();
    let mut count = 0u128;
    for &u1 in u.elems() {
        for &v1 in v.elems() {
            for &u2 in u.elems() {
                for &v2 in v.elems() {
                    for &u3 in u.elems() {
                        for &v3 in v.elems() {
                            let a = ctx.mul(ctx.sub(v1, v2), ctx.sub(u1, u3));
                            let b = ctx.mul(ctx.sub(v1, v3), ctx.sub(u1, u2));
                            if a == b && a != 0 {
                                count += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    BigUint::from(count)
}

/// Collinear triples, product reading: solutions of
/// (u1-u2)(v1-v2) = (u1-u3)(v1-v3) != 0 on the grid U x V.
///
/// Fast: per pivot (u1, v1), histogram of nonzero products
/// (u1-u2)(v1-v2); add sum of squares.
pub fn triples_product_literal(u: &FpSet, v: &FpSet, strategy: Strategy) -> Result<CountResult> {
    check_pair(u, v)?;
    let start = Instant::now();
    let n = (u.len() * v.len()) as u64;
    let value = match strategy {
        Strategy::Oracle => {
            cap_check("triples_product_literal oracle", n, caps::TUPLE6)?;
            triples_product_literal_enum(u, v)
        }
        Strategy::Fast => {
            cap_check("triples_product_literal", n, caps::TRIPLE_HIST)?;
            let ctx = u.ctx();
            let mut hist = vec![0u64; ctx.p() as usize];
            let mut touched: Vec<u64> = Vec::new();
            let mut acc = BigUint::from(0u32);
            for &u1 in u.elems() {
                for &v1 in v.elems() {
                    for &u2 in u.elems() {
                        let du = ctx.sub(u1, u2);
                        if du == 0 {
                            continue;
                        }
                        for &v2 in v.elems() {
                            let c = ctx.mul(du, ctx.sub(v1, v2));
                            if c == 0 {
                                continue;
                            }
                            if hist[c as usize] == 0 {
                                touched.push(c);
                            }
                            hist[c as usize] += 1;
                        }
                    }
                    let mut pivot_sum = 0u128;
                    for &c in &touched {
                        let h = hist[c as usize] as u128;
                        pivot_sum += h * h;
                        hist[c as usize] = 0;
                    }
                    touched.clear();
                    acc += BigUint::from(pivot_sum);
                }
            }
            acc
        }
    };
    Ok(CountResult::done(value, strategy, start))
}

/// Literal sextuple enumeration of the product-reading triple count.
pub fn triples_product_literal_enum(u: &FpSet, v: &FpSet) -> BigUint {
    let ctx = u.ctx();
    let mut count = 0u128;
    for &u1 in u.elems() {
        for &v1 in v.elems() {
            for &u2 in u.elems() {
                for &v2 in v.elems() {
                    let lhs = ctx.mul(ctx.sub(u1, u2), ctx.sub(v1, v2));
                    if lhs == 0 {
                        continue;
                    }
                    for &u3 in u.elems() {
                        for &v3 in v.elems() {
                            if ctx.mul(ctx.sub(u1, u3), ctx.sub(v1, v3)) == lhs {
                                count += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    BigUint::from(count)
}

/// Q(A): ordered quadruples of points of A x A sharing a common ratio
/// (a1-a_i)/(b1-b_i), i = 2, 3, 4, all denominators nonzero.
///
/// Fast: per pivot (a, b) in A x A, histogram of ratios (c-a)/(d-b) over
/// points (c, d) with d != b; add sum of cubes. Cost O(|A|^4).
pub fn collinear_quadruples(a: &FpSet, strategy: Strategy) -> Result<CountResult> {
    let start = Instant::now();
    let n = a.len() as u64;
    let value = match strategy {
        Strategy::Oracle => {
            cap_check("collinear_quadruples oracle", n, caps::GRID_TUPLE8)?;
            collinear_quadruples_enum(a)
        }
        Strategy::Fast => {
            cap_check("collinear_quadruples", n, caps::GRID_PIVOT)?;
            let ctx = a.ctx();
            let mut hist = vec![0u64; ctx.p() as usize];
            let mut touched: Vec<u64> = Vec::new();
            let mut acc = BigUint::from(0u32);
            for &pa in a.elems() {
                for &pb in a.elems() {
                    for &d in a.elems() {
                        if d == pb {
                            continue;
                        }
                        let inv = ctx.inv(ctx.sub(d, pb)).expect("nonzero");
                        for &c in a.elems() {
                            let z = ctx.mul(ctx.sub(c, pa), inv);
                            if hist[z as usize] == 0 {
                                touched.push(z);
                            }
                            hist[z as usize] += 1;
                        }
                    }
                    let mut pivot_sum = 0u128;
                    for &z in &touched {
                        let h = hist[z as usize] as u128;
                        pivot_sum += h * h * h;
                        hist[z as usize] = 0;
                    }
                    touched.clear();
                    acc += BigUint::from(pivot_sum);
                }
            }
            acc
        }
    };
    Ok(CountResult::done(value, strategy, start))
}

/// Literal 8-tuple enumeration of Q(A); cost |A|^8.
pub fn collinear_quadruples_enum(a: &FpSet) -> BigUint {
    let ctx = a.ctx();
    let el = a.elems();
    let mut count = 0u128;
    // Points (a_i, b_i); ratio equality is cross-multiplied against the
    // pivot, denominators b1 - b_i must be nonzero.
    for &a1 in el {
        for &b1 in el {
            for &a2 in el {
                for &b2 in el {
                    if b2 == b1 {
                        continue;
                    }
                    let r2num = ctx.sub(a1, a2);
                    let r2den = ctx.sub(b1, b2);
                    for &a3 in el {
                        for &b3 in el {
                            if b3 == b1 {
                                continue;
                            }
                            // (a1-a2)/(b1-b2) = (a1-a3)/(b1-b3)
                            if ctx.mul(r2num, ctx.sub(b1, b3)) != ctx.mul(ctx.sub(a1, a3), r2den) {
                                continue;
                            }
                            for &a4 in el {
                                for &b4 in el {
                                    if b4 == b1 {
                                        continue;
                                    }
                                    if ctx.mul(r2num, ctx.sub(b1, b4))
                                        == ctx.mul(ctx.sub(a1, a4), r2den)
                                    {
                                        count += 1;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    BigUint::from(count)
}

/// sum over pivots (a, b) in A x A of sum_z r^3, where r is the dense
/// representation function of (A - a) / (A - b) built through the division
/// machinery. Equals `collinear_quadruples(A)` exactly, by a different
/// route (the histogram there never materializes a dense function).
pub fn r3_pivot_sum(a: &FpSet, strategy: Strategy) -> Result<CountResult> {
    let start = Instant::now();
    let n = a.len() as u64;
    cap_check("r3_pivot_sum", n, caps::GRID_PIVOT)?;
    let ctx = a.ctx();
    let mut acc = BigUint::from(0u32);
    match strategy {
        Strategy::Oracle => {
            // Sparse ratio histogram per pivot, no dense arrays.
            use std::collections::HashMap;
            for &pa in a.elems() {
                for &pb in a.elems() {
                    let mut hist: HashMap<u64, u64> = HashMap::new();
                    for &c in a.elems() {
                        for &d in a.elems() {
                            if d == pb {
                                continue;
                            }
                            let z = ctx.mul(ctx.sub(c, pa), ctx.inv(ctx.sub(d, pb))?);
                            *hist.entry(z).or_insert(0) += 1;
                        }
                    }
                    let mut pivot_sum = 0u128;
                    for &h in hist.values() {
                        pivot_sum += (h as u128).pow(3);
                    }
                    acc += BigUint::from(pivot_sum);
                }
            }
        }
        Strategy::Fast => {
            for &pa in a.elems() {
                for &pb in a.elems() {
                    let num = a.translate(ctx.sub(0, pa));
                    let den = a.translate(ctx.sub(0, pb));
                    let r = rep_fn(&num, &den, ArithOp::Div)?;
                    let wide: Vec<u128> = r.values().iter().map(|&x| x as u128).collect();
                    acc += sum_cubes(&wide);
                }
            }
        }
    }
    Ok(CountResult::done(acc, strategy, start))
}

/// #{(x, y) in U x V : u x + v y = 1} for fixed coefficients (u, v).
pub fn unit_line_incidences(us: &FpSet, vs: &FpSet, u: u64, v: u64) -> Result<u64> {
    check_pair(us, vs)?;
    let ctx = us.ctx();
    let (u, v) = (u % ctx.p(), v % ctx.p());
    if u == 0 && v == 0 {
        return Ok(0);
    }
    if v == 0 {
        // u x = 1 pins x; every y works.
        let x = ctx.inv(u)?;
        return Ok(if us.contains(x) { vs.len() as u64 } else { 0 });
    }
    let vinv = ctx.inv(v)?;
    let mut count = 0u64;
    for &x in us.elems() {
        let y = ctx.mul(ctx.sub(1, ctx.mul(u, x)), vinv);
        if vs.contains(y) {
            count += 1;
        }
    }
    Ok(count)
}
