//! Exact cyclic convolution of integer sequences.
//!
//! Small lengths go through schoolbook multiplication with `i128`
//! accumulators. Large lengths use a number-theoretic transform modulo the
//! prime `2^64 - 2^32 + 1`; a proven bound on the true output values gates the
//! modular route, so results are exact integers, never floating approximations.
//!
//! The group-algebra variant convolves families of `p` integer streams under
//! the cyclic group `C_p` in the stream index: this is multiplication in
//! `Z[C_p] x Z[C_L]`, which is how hyper-Kloosterman sums over all fibers of a
//! field with `L` units are assembled from the additive-character stream.

use crate::error::{Error, Result};

/// The NTT prime `2^64 - 2^32 + 1` (two-adicity 32, primitive root 7).
pub const P: u64 = 0xFFFF_FFFF_0000_0001;
const ROOT: u64 = 7;

#[inline]
fn reduce128(x: u128) -> u64 {
    // 2^64 = 2^32 - 1 and 2^96 = -1 (mod P)
    let lo = x as u64;
    let hi = (x >> 64) as u64;
    let hi_hi = hi >> 32;
    let hi_lo = hi & 0xFFFF_FFFF;
    let mut t = lo.wrapping_sub(hi_hi);
    if hi_hi > lo {
        t = t.wrapping_add(P);
    }
    let mid = (hi_lo << 32) - hi_lo;
    let (mut r, carry) = t.overflowing_add(mid);
    if carry {
        r = r.wrapping_add(0xFFFF_FFFF);
    }
    if r >= P {
        r -= P;
    }
    r
}

#[inline]
fn mul(a: u64, b: u64) -> u64 {
    reduce128(a as u128 * b as u128)
}

#[inline]
fn add(a: u64, b: u64) -> u64 {
    let (s, c) = a.overflowing_add(b);
    let mut s = if c { s.wrapping_add(0xFFFF_FFFF) } else { s };
    if s >= P {
        s -= P;
    }
    s
}

#[inline]
fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a.wrapping_sub(b).wrapping_add(P)
    }
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

/// Twiddle factors for one transform size, shared across transforms:
/// `tw[len/2 + i] = w_len^i` for every stage length `len`.
struct NttPlan {
    n: usize,
    tw: Vec<u64>,
    n_inv: u64,
}

impl NttPlan {
    fn new(n: usize) -> Self {
        debug_assert!(n.is_power_of_two());
        let mut tw = vec![0u64; n.max(2)];
        let mut len = 2usize;
        while len <= n {
            let w = pow_mod(ROOT, (P - 1) / len as u64);
            let mut cur = 1u64;
            for i in 0..len / 2 {
                tw[len / 2 + i] = cur;
                cur = mul(cur, w);
            }
            len <<= 1;
        }
        NttPlan { n, tw, n_inv: pow_mod(n as u64, P - 2) }
    }

    fn forward(&self, a: &mut [u64]) {
        let n = self.n;
        debug_assert_eq!(a.len(), n);
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
        let mut len = 2usize;
        while len <= n {
            let half = len / 2;
            let tw = &self.tw[half..len];
            for start in (0..n).step_by(len) {
                for i in 0..half {
                    let u = a[start + i];
                    let v = mul(a[start + half + i], tw[i]);
                    a[start + i] = add(u, v);
                    a[start + half + i] = sub(u, v);
                }
            }
            len <<= 1;
        }
    }

    fn inverse(&self, a: &mut [u64]) {
        // IDFT(a)_k = DFT(reverse(a))_k / n
        a[1..].reverse();
        self.forward(a);
        for x in a.iter_mut() {
            *x = mul(*x, self.n_inv);
        }
    }
}

#[cfg(test)]
/// In-place iterative NTT of power-of-two length (one-shot plan).
fn ntt(a: &mut [u64], invert: bool) {
    let plan = NttPlan::new(a.len());
    if invert {
        plan.inverse(a);
    } else {
        plan.forward(a);
    }
}

fn to_residues(v: &[i64], n: usize) -> Vec<u64> {
    let mut out = vec![0u64; n];
    for (o, &x) in out.iter_mut().zip(v.iter()) {
        *o = if x >= 0 { x as u64 % P } else { P - ((-(x as i128)) as u64 % P) };
    }
    out
}

fn center(r: u64) -> i64 {
    if r > P / 2 {
        -((P - r) as i64)
    } else {
        r as i64
    }
}

fn fold_to_len(full: &[i64], len: usize) -> Vec<i64> {
    let mut out = vec![0i64; len];
    for (j, &v) in full.iter().enumerate() {
        out[j % len] += v;
    }
    out
}

/// Exact cyclic convolution of two signed sequences of equal length.
///
/// `bound` must dominate the absolute value of every true output entry; the
/// modular route refuses to run past it.
pub fn cyclic_convolve(a: &[i64], b: &[i64], bound: u128) -> Result<Vec<i64>> {
    let len = a.len();
    assert_eq!(len, b.len());
    if len <= 1024 {
        let mut out = vec![0i128; len];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj != 0 {
                    out[(i + j) % len] += ai as i128 * bj as i128;
                }
            }
        }
        return Ok(out.into_iter().map(|x| x as i64).collect());
    }
    if bound >= (P / 2) as u128 {
        return Err(Error::Internal(format!(
            "convolution bound {bound} exceeds single-prime range"
        )));
    }
    let n = (2 * len).next_power_of_two();
    let plan = NttPlan::new(n);
    let mut fa = to_residues(a, n);
    let mut fb = to_residues(b, n);
    plan.forward(&mut fa);
    plan.forward(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = mul(*x, *y);
    }
    plan.inverse(&mut fa);
    let full: Vec<i64> = fa.into_iter().map(center).collect();
    Ok(fold_to_len(&full, len))
}

/// `folds`-fold self-convolution of a `p`-stream family under `C_p x C_L`.
///
/// `streams[s][i]` is the coefficient of group element `(s, i)`; the result
/// has the same shape. Entry magnitudes of the result of stage `s` are bounded
/// by `L^(s-1) * (max input)^s`; the caller's inputs here are 0/1 indicators,
/// so the final bound is `L^(folds-1)`, which is checked against the modular
/// range.
pub fn group_convolution_power(streams: &[Vec<i64>], folds: usize, caps_work: u64) -> Result<Vec<Vec<i64>>> {
    assert!(folds >= 2);
    let p = streams.len();
    let len = streams[0].len();
    let bound = (len as u128).pow(folds as u32 - 1);
    if len <= 1024 {
        // schoolbook stages
        let mut cur = streams.to_vec();
        for _ in 1..folds {
            cur = group_convolve_schoolbook(&cur, streams, len, p);
        }
        return Ok(cur);
    }
    if bound >= (P / 2) as u128 {
        return Err(Error::Internal(format!(
            "convolution bound {bound} exceeds single-prime range"
        )));
    }
    let n = (2 * len).next_power_of_two();
    let work = (n as u128) * (n.trailing_zeros() as u128) * (folds as u128) * (p as u128);
    if work > caps_work as u128 * 64 {
        return Err(Error::WorkCap { estimate: work, cap: caps_work });
    }
    // spectra of the base family, computed once; each stage works on inputs of
    // cyclic length `len`, so results are folded back before the next stage
    // (the padded transform only models one linear product at a time)
    let plan = NttPlan::new(n);
    let base: Vec<Vec<u64>> = streams
        .iter()
        .map(|s| {
            let mut r = to_residues(s, n);
            plan.forward(&mut r);
            r
        })
        .collect();
    let mut cur: Option<Vec<Vec<i64>>> = None; // None: current factor is the base itself
    for _stage in 1..folds {
        let owned_spectra: Option<Vec<Vec<u64>>> = cur.as_ref().map(|c| {
            c.iter()
                .map(|s| {
                    let mut r = to_residues(s, n);
                    plan.forward(&mut r);
                    r
                })
                .collect()
        });
        let cur_spectra: &[Vec<u64>] = owned_spectra.as_deref().unwrap_or(&base);
        let mut nxt: Vec<Vec<i64>> = Vec::with_capacity(p);
        for s in 0..p {
            let mut acc = vec![0u64; n];
            for u in 0..p {
                let v = (s + p - u) % p;
                let (cu, bv) = (&cur_spectra[u], &base[v]);
                for i in 0..n {
                    acc[i] = add(acc[i], mul(cu[i], bv[i]));
                }
            }
            plan.inverse(&mut acc);
            let mut folded = vec![0i64; len];
            for (j, &v) in acc.iter().enumerate() {
                folded[j % len] += center(v);
            }
            nxt.push(folded);
        }
        cur = Some(nxt);
    }
    Ok(cur.expect("folds >= 2"))
}

fn group_convolve_schoolbook(a: &[Vec<i64>], b: &[Vec<i64>], len: usize, p: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![0i64; len]; p];
    for u in 0..p {
        for v in 0..p {
            let s = (u + v) % p;
            for (i, &ai) in a[u].iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                for (j, &bj) in b[v].iter().enumerate() {
                    if bj != 0 {
                        out[s][(i + j) % len] += ai * bj;
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_root_has_full_order() {
        // P - 1 = 2^32 * 3 * 5 * 17 * 257 * 65537
        let factors = [2u64, 3, 5, 17, 257, 65537];
        let product = (1u128 << 32) * 3 * 5 * 17 * 257 * 65537;
        assert_eq!((P - 1) as u128, product);
        for f in factors {
            assert_ne!(pow_mod(ROOT, (P - 1) / f), 1, "7^((P-1)/{f}) = 1");
        }
        assert_eq!(pow_mod(ROOT, P - 1), 1);
    }

    #[test]
    fn ntt_round_trip() {
        let mut a: Vec<u64> = (0..64u64).map(|i| i * i + 1).collect();
        let orig = a.clone();
        ntt(&mut a, false);
        ntt(&mut a, true);
        assert_eq!(a, orig);
    }

    #[test]
    fn convolution_matches_schoolbook_across_threshold() {
        // same data through the i128 path (len 1000) and the NTT path (len 1500)
        for len in [1000usize, 1500] {
            let a: Vec<i64> = (0..len as i64).map(|i| (i * 7919 % 101) - 50).collect();
            let b: Vec<i64> = (0..len as i64).map(|i| (i * 104729 % 89) - 44).collect();
            let mut expect = vec![0i128; len];
            for i in 0..len {
                for j in 0..len {
                    expect[(i + j) % len] += a[i] as i128 * b[j] as i128;
                }
            }
            let bound = len as u128 * 50 * 44;
            let got = cyclic_convolve(&a, &b, bound).unwrap();
            assert_eq!(got, expect.iter().map(|&x| x as i64).collect::<Vec<_>>());
        }
    }

    #[test]
    fn group_convolution_counts_points() {
        // p = 3 streams over C_5: one-hot f with f[s][i] = [tr(i) = s] for a
        // made-up trace pattern; the square counts pairs
        let tr = [0usize, 1, 2, 1, 0];
        let len = 5;
        let mut f = vec![vec![0i64; len]; 3];
        for (i, &s) in tr.iter().enumerate() {
            f[s][i] = 1;
        }
        let sq = group_convolution_power(&f, 2, u64::MAX).unwrap();
        for s in 0..3 {
            for t in 0..len {
                let mut count = 0;
                for i in 0..len {
                    let j = (t + len - i) % len;
                    if (tr[i] + tr[j]) % 3 == s {
                        count += 1;
                    }
                }
                assert_eq!(sq[s][t], count);
            }
        }
    }

    #[test]
    fn group_convolution_ntt_matches_schoolbook() {
        let p = 3;
        let len = 2000; // above the schoolbook threshold
        let mut f = vec![vec![0i64; len]; p];
        for i in 0..len {
            f[(i * i + 3 * i) % p][i] = 1;
        }
        let via_ntt = group_convolution_power(&f, 2, u64::MAX).unwrap();
        let via_school = group_convolve_schoolbook(&f, &f, len, p);
        assert_eq!(via_ntt, via_school);
    }
}
