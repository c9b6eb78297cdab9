//! Transform kernels: a power-of-two complex FFT, a Bluestein wrapper for
//! arbitrary-length transforms with the e^{+2 pi i / n} convention, and a
//! power-of-two NTT over two 64-bit primes with CRT reconstruction for exact
//! integer convolutions.
//!
//! The integer path MUST be exact: callers check the coefficient bound
//! against the CRT modulus first (`exact_bound_ok`) and fall back to naive
//! convolution when it fails.

use num_complex::Complex64;

use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Complex FFT
// ---------------------------------------------------------------------------

/// In-place power-of-two FFT with kernel e^{sign * 2 pi i jk / n}.
/// No 1/n scaling is applied in either direction.
pub fn fft_pow2(a: &mut [Complex64], sign: f64) {
    let n = a.len();
    assert!(n.is_power_of_two(), "fft length must be a power of two");
    if n <= 1 {
        return;
    }
    // Bit-reversal permutation.
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    // Twiddles computed directly from polar form: slightly slower than a
    // recurrence but keeps rounding error flat across levels.
    let base = sign * std::f64::consts::TAU / n as f64;
    let half = n / 2;
    let tw: Vec<Complex64> = (0..half)
        .map(|k| Complex64::from_polar(1.0, base * k as f64))
        .collect();
    let mut len = 2;
    while len <= n {
        let step = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..len / 2 {
                let w = tw[k * step];
                let u = a[start + k];
                let v = a[start + k + len / 2] * w;
                a[start + k] = u + v;
                a[start + k + len / 2] = u - v;
            }
        }
        len <<= 1;
    }
}

/// Linear convolution of `a` and `b` by zero-padded FFT.
fn linear_convolve_complex(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let out_len = a.len() + b.len() - 1;
    let m = out_len.next_power_of_two();
    let mut fa = vec![Complex64::new(0.0, 0.0); m];
    let mut fb = vec![Complex64::new(0.0, 0.0); m];
    fa[..a.len()].copy_from_slice(a);
    fb[..b.len()].copy_from_slice(b);
    fft_pow2(&mut fa, -1.0);
    fft_pow2(&mut fb, -1.0);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= *y;
    }
    fft_pow2(&mut fa, 1.0);
    let scale = 1.0 / m as f64;
    fa.truncate(out_len);
    for x in &mut fa {
        *x *= scale;
    }
    fa
}

/// Cyclic convolution of two complex sequences of equal length n (any n):
/// out[k] = sum_{i+j = k mod n} a[i] b[j].
pub fn cyclic_convolve_complex(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    assert_eq!(n, b.len());
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![a[0] * b[0]];
    }
    let lin = linear_convolve_complex(a, b);
    (0..n)
        .map(|k| {
            if k + n < lin.len() {
                lin[k] + lin[k + n]
            } else {
                lin[k]
            }
        })
        .collect()
}

/// Naive O(n^2) cyclic convolution, the reference for the FFT path.
pub fn cyclic_convolve_complex_naive(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    assert_eq!(n, b.len());
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (i, &av) in a.iter().enumerate() {
        if av.norm_sqr() == 0.0 {
            continue;
        }
        for (j, &bv) in b.iter().enumerate() {
            let k = (i + j) % n;
            out[k] += av * bv;
        }
    }
    out
}

/// DFT with kernel e^{+2 pi i jk / n} at arbitrary length via Bluestein's
/// chirp: jk = (j^2 + k^2 - (j-k)^2) / 2, so the transform becomes one
/// linear convolution against a fixed chirp kernel.
pub fn bluestein_dft(f: &[Complex64]) -> Vec<Complex64> {
    let n = f.len();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![f[0]];
    }
    let n2 = 2 * n as u64;
    // chirp[k] = e^{+ pi i k^2 / n}; k^2 is reduced mod 2n before scaling.
    let chirp: Vec<Complex64> = (0..n as u64)
        .map(|k| {
            let sq = (k % n2) * (k % n2) % n2;
            Complex64::from_polar(1.0, std::f64::consts::PI * sq as f64 / n as f64)
        })
        .collect();
    let a: Vec<Complex64> = f.iter().zip(&chirp).map(|(x, c)| x * c).collect();
    // Kernel at offset j in (-n, n) is conj(chirp[|j|]); pack negative
    // offsets at the top of the ring buffer.
    let m = (2 * n - 1).next_power_of_two();
    let mut ka = vec![Complex64::new(0.0, 0.0); m];
    let mut kb = vec![Complex64::new(0.0, 0.0); m];
    ka[..n].copy_from_slice(&a);
    for j in 0..n {
        let v = chirp[j].conj();
        kb[j] = v;
        if j > 0 {
            kb[m - j] = v;
        }
    }
    fft_pow2(&mut ka, -1.0);
    fft_pow2(&mut kb, -1.0);
    for (x, y) in ka.iter_mut().zip(&kb) {
        *x *= *y;
    }
    fft_pow2(&mut ka, 1.0);
    let scale = 1.0 / m as f64;
    (0..n).map(|w| chirp[w] * ka[w] * scale).collect()
}

// ---------------------------------------------------------------------------
// Exact integer convolution (NTT + CRT)
// ---------------------------------------------------------------------------

/// 2^64 - 2^32 + 1; q - 1 = 2^32 * 3 * 5 * 17 * 257 * 65537, generator 7.
const NTT_P1: u64 = 0xffff_ffff_0000_0001;
const NTT_G1: u64 = 7;
/// 29 * 2^57 + 1, generator 3.
const NTT_P2: u64 = 4_179_340_454_199_820_289;
const NTT_G2: u64 = 3;

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// a, b < m; m may exceed 2^63, so the sum is taken in u128.
#[inline]
fn addmod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    if s >= m as u128 {
        (s - m as u128) as u64
    } else {
        s as u64
    }
}

#[inline]
fn submod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (m - b)
    }
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// In-place NTT modulo `p` with principal root `root` of order `a.len()`.
fn ntt_pow2(a: &mut [u64], p: u64, root: u64) {
    let n = a.len();
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let wlen = powmod(root, (n / len) as u64, p);
        for start in (0..n).step_by(len) {
            let mut w = 1u64;
            for k in 0..len / 2 {
                let u = a[start + k];
                let v = mulmod(a[start + k + len / 2], w, p);
                a[start + k] = addmod(u, v, p);
                a[start + k + len / 2] = submod(u, v, p);
                w = mulmod(w, wlen, p);
            }
        }
        len <<= 1;
    }
}

fn ntt_linear_convolve(a: &[u64], b: &[u64], m: usize, p: u64, g: u64) -> Vec<u64> {
    let mut fa = vec![0u64; m];
    let mut fb = vec![0u64; m];
    for (dst, &src) in fa.iter_mut().zip(a) {
        *dst = src % p;
    }
    for (dst, &src) in fb.iter_mut().zip(b) {
        *dst = src % p;
    }
    let root = powmod(g, (p - 1) / m as u64, p);
    ntt_pow2(&mut fa, p, root);
    ntt_pow2(&mut fb, p, root);
    for (x, &y) in fa.iter_mut().zip(&fb) {
        *x = mulmod(*x, y, p);
    }
    let root_inv = powmod(root, p - 2, p);
    ntt_pow2(&mut fa, p, root_inv);
    let m_inv = powmod(m as u64, p - 2, p);
    for x in &mut fa {
        *x = mulmod(*x, m_inv, p);
    }
    fa
}

/// True when every output coefficient of a length-`n` cyclic convolution of
/// sequences bounded by `max_a`, `max_b` is provably below the CRT modulus.
pub fn exact_bound_ok(n: u64, max_a: u64, max_b: u64) -> bool {
    let modulus = NTT_P1 as u128 * NTT_P2 as u128;
    // n * max_a * max_b < p1 * p2, checked without overflow.
    let Some(prod) = (max_a as u128).checked_mul(max_b as u128) else {
        return false;
    };
    match prod.checked_mul(n as u128) {
        Some(v) => v < modulus,
        None => false,
    }
}

/// Exact cyclic convolution of equal-length u64 sequences via two NTTs and
/// CRT. Callers must have checked `exact_bound_ok`; the result is exact.
pub fn cyclic_convolve_exact(a: &[u64], b: &[u64]) -> Result<Vec<u128>> {
    let n = a.len();
    if n != b.len() {
        return Err(Error::LengthMismatch {
            expected: n,
            got: b.len(),
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![a[0] as u128 * b[0] as u128]);
    }
    let m = (2 * n - 1).next_power_of_two();
    let c1 = ntt_linear_convolve(a, b, m, NTT_P1, NTT_G1);
    let c2 = ntt_linear_convolve(a, b, m, NTT_P2, NTT_G2);
    // x = x1 + p1 * ((x2 - x1) * p1^{-1} mod p2); the result fits u128 by the
    // caller's bound check.
    let p1_inv_mod_p2 = powmod(NTT_P1 % NTT_P2, NTT_P2 - 2, NTT_P2);
    let crt = |x1: u64, x2: u64| -> u128 {
        let diff = if x2 >= x1 % NTT_P2 {
            x2 - x1 % NTT_P2
        } else {
            x2 + NTT_P2 - x1 % NTT_P2
        };
        let t = mulmod(diff, p1_inv_mod_p2, NTT_P2);
        x1 as u128 + NTT_P1 as u128 * t as u128
    };
    let out_len = 2 * n - 1;
    Ok((0..n)
        .map(|k| {
            let mut v = crt(c1[k], c2[k]);
            if k + n < out_len {
                v += crt(c1[k + n], c2[k + n]);
            }
            v
        })
        .collect())
}

/// Naive exact cyclic convolution; the fallback and the oracle for the NTT
/// path. Accumulates in u128, so inputs must keep n * max_a * max_b < 2^128.
pub fn cyclic_convolve_exact_naive(a: &[u64], b: &[u64]) -> Result<Vec<u128>> {
    let n = a.len();
    if n != b.len() {
        return Err(Error::LengthMismatch {
            expected: n,
            got: b.len(),
        });
    }
    let mut out = vec![0u128; n];
    for (i, &av) in a.iter().enumerate() {
        if av == 0 {
            continue;
        }
        let ai = av as u128;
        for (j, &bv) in b.iter().enumerate() {
            let k = if i + j >= n { i + j - n } else { i + j };
            out[k] += ai * bv as u128;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn miller_rabin(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            if n.is_multiple_of(p) {
                return n == p;
            }
        }
        let mut d = n - 1;
        let mut r = 0;
        while d.is_multiple_of(2) {
            d /= 2;
            r += 1;
        }
        'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            let mut x = powmod(a, d, n);
            if x == 1 || x == n - 1 {
                continue;
            }
            for _ in 0..r - 1 {
                x = mulmod(x, x, n);
                if x == n - 1 {
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }

    #[test]
    fn ntt_moduli_are_prime_with_primitive_generators() {
        assert!(miller_rabin(NTT_P1));
        assert!(miller_rabin(NTT_P2));
        // p1 - 1 = 2^32 * 3 * 5 * 17 * 257 * 65537
        for f in [2u64, 3, 5, 17, 257, 65537] {
            assert_ne!(powmod(NTT_G1, (NTT_P1 - 1) / f, NTT_P1), 1);
        }
        // p2 - 1 = 2^57 * 29
        for f in [2u64, 29] {
            assert_ne!(powmod(NTT_G2, (NTT_P2 - 1) / f, NTT_P2), 1);
        }
    }

    #[test]
    fn ntt_matches_naive_on_random_input() {
        let mut rng = SplitMix64::new(42);
        for n in [1usize, 2, 3, 5, 12, 30, 96, 100] {
            let a: Vec<u64> = (0..n).map(|_| rng.next_below(1 << 20)).collect();
            let b: Vec<u64> = (0..n).map(|_| rng.next_below(1 << 20)).collect();
            assert!(exact_bound_ok(n as u64, 1 << 20, 1 << 20));
            let fast = cyclic_convolve_exact(&a, &b).unwrap();
            let naive = cyclic_convolve_exact_naive(&a, &b).unwrap();
            assert_eq!(fast, naive, "length {n}");
        }
    }

    #[test]
    fn ntt_exact_at_large_coefficients() {
        // Values near the rep-function ceiling p^2 for the table budget.
        let big = 4_000_000_000_000u64;
        let a = vec![big, big - 1, 1, 0, big / 2, 17];
        let b = vec![big - 3, 5, big, 2, 1, big - 9];
        assert!(exact_bound_ok(6, big, big));
        let fast = cyclic_convolve_exact(&a, &b).unwrap();
        let naive = cyclic_convolve_exact_naive(&a, &b).unwrap();
        assert_eq!(fast, naive);
    }

    #[test]
    fn bound_check_rejects_overflowing_instances() {
        assert!(!exact_bound_ok(1 << 22, u64::MAX, u64::MAX));
        assert!(exact_bound_ok(1 << 22, 1 << 42, 1 << 42));
        assert!(!exact_bound_ok(1 << 22, 1 << 60, 1 << 60));
    }

    #[test]
    fn fft_cyclic_convolution_matches_naive() {
        let mut rng = SplitMix64::new(7);
        for n in [1usize, 2, 4, 6, 10, 33, 100] {
            let a: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5))
                .collect();
            let b: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5))
                .collect();
            let fast = cyclic_convolve_complex(&a, &b);
            let naive = cyclic_convolve_complex_naive(&a, &b);
            for (x, y) in fast.iter().zip(&naive) {
                assert!((x - y).norm() < 1e-9, "length {n}");
            }
        }
    }

    #[test]
    fn bluestein_matches_direct_dft() {
        let mut rng = SplitMix64::new(11);
        for n in [1usize, 2, 3, 4, 5, 7, 12, 31, 101] {
            let f: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5))
                .collect();
            let fast = bluestein_dft(&f);
            for (w, fw) in fast.iter().enumerate() {
                let mut direct = Complex64::new(0.0, 0.0);
                for (x, fx) in f.iter().enumerate() {
                    let ang = std::f64::consts::TAU * (x * w % n) as f64 / n as f64;
                    direct += fx * Complex64::from_polar(1.0, ang);
                }
                assert!((fw - direct).norm() < 1e-9, "n = {n}, w = {w}");
            }
        }
    }
}
