//! Dense linear algebra over prime fields GF(p): rank, nullspace, syndromes,
//! and minimum-distance computation by codeword enumeration.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pseudo::tree_bound;
use crate::tanner::TannerGraph;

/// Dense matrix over GF(p), p prime, entries reduced mod p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GFMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl GFMatrix {
    pub fn zero(p: u32, rows: usize, cols: usize) -> GFMatrix {
        assert!((2..=251).contains(&p), "modulus {p} out of supported range");
        GFMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(p: u32, rows: Vec<Vec<u8>>) -> GFMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = GFMatrix::zero(p, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &e) in row.iter().enumerate() {
                m.set(i, j, e % p as u8);
            }
        }
        m
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        debug_assert!((v as u32) < self.p);
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Reduced row echelon form and the pivot column list.
    pub fn rref(&self) -> (GFMatrix, Vec<usize>) {
        let p = self.p as u64;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..m.cols {
                    let (a, b) = (m.get(row, c), m.get(pr, c));
                    m.set(row, c, b);
                    m.set(pr, c, a);
                }
            }
            let inv = mod_inverse(m.get(row, col) as u64, p);
            for c in 0..m.cols {
                let v = m.get(row, c) as u64 * inv % p;
                m.set(row, c, v as u8);
            }
            for r in 0..m.rows {
                if r != row && m.get(r, col) != 0 {
                    let factor = m.get(r, col) as u64;
                    for c in 0..m.cols {
                        let v = (m.get(r, c) as u64 + (p - factor) * m.get(row, c) as u64 % p) % p;
                        m.set(r, c, v as u8);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Code dimension n - rank when the matrix is read as a parity check.
    pub fn dimension(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of the right nullspace, systematic on the free columns: basis
    /// vector j has a 1 at its free column and zeros at the other free
    /// columns.
    pub fn nullspace_basis(&self) -> Vec<Vec<u8>> {
        let p = self.p as u64;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![0u8; self.cols];
            v[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                // x_pc + (row i, col fc) * x_fc = 0.
                let coef = r.get(i, fc) as u64;
                v[pc] = ((p - coef) % p) as u8;
            }
            basis.push(v);
        }
        basis
    }

    /// H . c mod p.
    pub fn syndrome(&self, word: &[u8]) -> Result<Vec<u8>> {
        if word.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                got: word.len(),
            });
        }
        let p = self.p as u64;
        let mut out = vec![0u8; self.rows];
        for r in 0..self.rows {
            let mut acc = 0u64;
            for c in 0..self.cols {
                acc += self.get(r, c) as u64 * word[c] as u64;
            }
            out[r] = (acc % p) as u8;
        }
        Ok(out)
    }

    pub fn is_codeword(&self, word: &[u8]) -> Result<bool> {
        Ok(self.syndrome(word)?.iter().all(|&s| s == 0))
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // p prime: a^(p-2) mod p.
    let mut acc = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Default enumeration cap: exhaustive search runs when p^k <= 2^24.
pub const DEFAULT_ENUM_CAP: u64 = 1 << 24;

/// Work budget (codewords touched) for the information-set search used on
/// binary codes whose p^k exceeds the enumeration cap.
const INFO_SET_BUDGET: u64 = 4_000_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinDistance {
    /// The code contains only the zero word.
    Trivial,
    Exact(usize),
    /// Enumeration did not finish inside its budget; the true distance lies
    /// in [lower, upper].
    Bounds {
        lower: usize,
        upper: Option<usize>,
    },
}

impl MinDistance {
    pub fn exact(&self) -> Option<usize> {
        match self {
            MinDistance::Exact(d) => Some(*d),
            _ => None,
        }
    }
}

/// Minimum Hamming weight over the nonzero codewords of the code with parity
/// check `h`.
///
/// All p^k nullspace combinations are enumerated when p^k <= cap. Binary
/// codes beyond the cap fall back to an information-set search over message
/// weights t = 1, 2, ...; the result is exact once the best weight found is
/// at most t+1 or matches the structural (tree) lower bound, and otherwise a
/// bound pair is reported. The search never silently approximates.
pub fn min_distance(h: &GFMatrix, cap: u64) -> MinDistance {
    let basis = h.nullspace_basis();
    let k = basis.len();
    if k == 0 {
        return MinDistance::Trivial;
    }
    let p = h.modulus();
    let total = checked_pow_u64(p as u64, k as u32);
    if total.is_some_and(|t| t <= cap) {
        let d = if p == 2 {
            exhaustive_binary(&basis, h.cols())
        } else {
            exhaustive_pary(&basis, h.cols(), p)
        };
        return MinDistance::Exact(d);
    }
    if p == 2 {
        return info_set_binary(h, &basis, INFO_SET_BUDGET);
    }
    MinDistance::Bounds {
        lower: structural_lower_bound(h),
        upper: None,
    }
}

fn checked_pow_u64(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Tree lower bound derived from the parity-check structure, when it applies.
pub fn structural_lower_bound(h: &GFMatrix) -> usize {
    let Ok(g) = TannerGraph::from_matrix(h) else {
        return 1;
    };
    let d = g.min_var_degree();
    if d == 0 {
        return 1;
    }
    match g.girth() {
        // No cycles at all: any nonzero codeword still needs >= 2 nonzero
        // positions when every variable has a neighbor.
        None => 2,
        Some(girth) if girth >= 6 => tree_bound(d, girth).unwrap_or(2),
        Some(_) => 2,
    }
}

fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

fn to_bitset(v: &[u8], nw: usize) -> Vec<u64> {
    let mut out = vec![0u64; nw];
    for (i, &e) in v.iter().enumerate() {
        if e != 0 {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    out
}

fn popcount(w: &[u64]) -> usize {
    w.iter().map(|x| x.count_ones() as usize).sum()
}

/// Gray-code walk over all 2^k combinations of the basis.
fn exhaustive_binary(basis: &[Vec<u8>], n: usize) -> usize {
    let k = basis.len();
    let nw = words_for(n);
    let bits: Vec<Vec<u64>> = basis.iter().map(|b| to_bitset(b, nw)).collect();
    let mut cur = vec![0u64; nw];
    let mut best = usize::MAX;
    for i in 1u64..(1u64 << k) {
        let j = i.trailing_zeros() as usize;
        for w in 0..nw {
            cur[w] ^= bits[j][w];
        }
        let wt = popcount(&cur);
        if wt > 0 && wt < best {
            best = wt;
        }
    }
    best
}

/// Base-p odometer over all p^k coefficient vectors; each digit step adds one
/// basis vector mod p.
fn exhaustive_pary(basis: &[Vec<u8>], n: usize, p: u32) -> usize {
    let k = basis.len();
    let p64 = p as u64;
    let total = checked_pow_u64(p64, k as u32).expect("cap-checked");
    let mut digits = vec![0u32; k];
    let mut cur = vec![0u8; n];
    let mut best = usize::MAX;
    let p8 = p as u16;
    let add = |cur: &mut [u8], b: &[u8]| {
        for (c, &e) in cur.iter_mut().zip(b) {
            let v = *c as u16 + e as u16;
            *c = if v >= p8 { (v - p8) as u8 } else { v as u8 };
        }
    };
    for _ in 1..total {
        let mut pos = 0;
        loop {
            add(&mut cur, &basis[pos]);
            digits[pos] += 1;
            if digits[pos] < p {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
        let wt = cur.iter().filter(|&&e| e != 0).count();
        if wt > 0 && wt < best {
            best = wt;
        }
    }
    best
}

/// Progressive message-weight enumeration over the systematic nullspace
/// basis. Completing weight level t proves every remaining codeword has
/// weight > t, so best <= t+1 certifies exactness.
fn info_set_binary(h: &GFMatrix, basis: &[Vec<u8>], budget: u64) -> MinDistance {
    let n = h.cols();
    let k = basis.len();
    let nw = words_for(n);
    let bits: Vec<Vec<u64>> = basis.iter().map(|b| to_bitset(b, nw)).collect();
    let lower_hint = structural_lower_bound(h);
    let mut best = usize::MAX;
    let mut spent: u64 = 0;
    for t in 1..=k {
        if best <= t || best == lower_hint {
            return MinDistance::Exact(best);
        }
        let level_cost = binomial(k as u64, t as u64);
        if spent.saturating_add(level_cost) > budget {
            let lower = lower_hint.max(t);
            return if best == usize::MAX {
                MinDistance::Bounds { lower, upper: None }
            } else if lower >= best {
                MinDistance::Exact(best)
            } else {
                MinDistance::Bounds {
                    lower,
                    upper: Some(best),
                }
            };
        }
        spent += level_cost;
        let level_best = (0..=k - t)
            .into_par_iter()
            .map(|first| {
                let mut acc = bits[first].clone();
                let mut local = if t == 1 { popcount(&acc) } else { usize::MAX };
                combo_rec(&bits, first + 1, t - 1, &mut acc, &mut local);
                local
            })
            .min()
            .unwrap_or(usize::MAX);
        best = best.min(level_best);
        if best <= t + 1 || best == lower_hint {
            return MinDistance::Exact(best);
        }
    }
    MinDistance::Exact(best)
}

fn combo_rec(bits: &[Vec<u64>], start: usize, remaining: usize, acc: &mut [u64], best: &mut usize) {
    if remaining == 0 {
        return;
    }
    let k = bits.len();
    for j in start..=k - remaining {
        for w in 0..acc.len() {
            acc[w] ^= bits[j][w];
        }
        if remaining == 1 {
            let wt = popcount(acc);
            if wt < *best {
                *best = wt;
            }
        } else {
            combo_rec(bits, j + 1, remaining - 1, acc, best);
        }
        for w in 0..acc.len() {
            acc[w] ^= bits[j][w];
        }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hamming_7_4() -> GFMatrix {
        GFMatrix::from_rows(
            2,
            vec![
                vec![1, 0, 1, 0, 1, 0, 1],
                vec![0, 1, 1, 0, 0, 1, 1],
                vec![0, 0, 0, 1, 1, 1, 1],
            ],
        )
    }

    #[test]
    fn rank_and_dimension() {
        let h = hamming_7_4();
        assert_eq!(h.rank(), 3);
        assert_eq!(h.dimension(), 4);
        let z = GFMatrix::zero(3, 5, 5);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.dimension(), 5);
    }

    #[test]
    fn nullspace_vectors_have_zero_syndrome() {
        let h = hamming_7_4();
        let basis = h.nullspace_basis();
        assert_eq!(basis.len(), 4);
        for v in &basis {
            assert!(h.is_codeword(v).unwrap());
        }
    }

    #[test]
    fn identity_matrix_has_empty_nullspace() {
        let mut h = GFMatrix::zero(2, 4, 4);
        for i in 0..4 {
            h.set(i, i, 1);
        }
        assert!(h.nullspace_basis().is_empty());
        assert_eq!(min_distance(&h, DEFAULT_ENUM_CAP), MinDistance::Trivial);
    }

    #[test]
    fn hamming_min_distance_is_three() {
        let h = hamming_7_4();
        assert_eq!(min_distance(&h, DEFAULT_ENUM_CAP), MinDistance::Exact(3));
    }

    #[test]
    fn ternary_min_distance_matches_word_enumeration() {
        let h = GFMatrix::from_rows(3, vec![vec![1, 1, 1, 0], vec![0, 1, 2, 1]]);
        let d = min_distance(&h, DEFAULT_ENUM_CAP);
        let mut oracle = usize::MAX;
        for w in 1..81u32 {
            let word: Vec<u8> = (0..4).map(|i| ((w / 3u32.pow(i)) % 3) as u8).collect();
            if h.is_codeword(&word).unwrap() {
                let wt = word.iter().filter(|&&x| x != 0).count();
                if wt > 0 {
                    oracle = oracle.min(wt);
                }
            }
        }
        assert_eq!(d, MinDistance::Exact(oracle));
    }

    #[test]
    fn syndrome_length_mismatch() {
        let h = hamming_7_4();
        assert!(matches!(
            h.syndrome(&[0; 6]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn random_non_codeword_has_nonzero_syndrome() {
        use rand::Rng;
        use rand::SeedableRng;
        let h = hamming_7_4();
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(3);
        let mut found = false;
        for _ in 0..64 {
            let word: Vec<u8> = (0..7).map(|_| rng.gen_range(0..2)).collect();
            if !h.is_codeword(&word).unwrap() {
                assert!(h.syndrome(&word).unwrap().iter().any(|&s| s != 0));
                found = true;
                break;
            }
        }
        assert!(found);
    }

    #[test]
    fn info_set_matches_exhaustive_on_small_code() {
        let h = hamming_7_4();
        let exact = min_distance(&h, DEFAULT_ENUM_CAP);
        let basis = h.nullspace_basis();
        let via_info = info_set_binary(&h, &basis, u64::MAX);
        assert_eq!(via_info, exact);
    }

    #[test]
    fn all_zero_word_is_codeword() {
        let h = hamming_7_4();
        assert!(h.is_codeword(&[0; 7]).unwrap());
    }
}
