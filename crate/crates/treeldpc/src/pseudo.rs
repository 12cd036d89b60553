//! Pseudocodewords of finite graph covers, the tree bound, and the
//! pseudocodeword weight on the p-ary symmetric channel.

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::channel::derive_stream_seed;
use crate::error::{Error, Result};
use crate::tanner::{GraphBuilder, TannerGraph};

/// Tree lower bound T(d, g) on minimum distance and minimum pseudocodeword
/// weight for a d-left-regular graph of girth g.
pub fn tree_bound(d: usize, g: usize) -> Result<usize> {
    if d < 2 {
        return Err(Error::InvalidParams(format!(
            "tree bound needs degree >= 2, got {d}"
        )));
    }
    if g < 6 || !g.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!(
            "tree bound needs even girth >= 6, got {g}"
        )));
    }
    let overflow = || Error::InvalidParams(format!("tree bound overflows for d = {d}, g = {g}"));
    let d = d as u64;
    let geometric = |top: u64| -> Option<u64> {
        // 1 + d + d(d-1) + ... + d(d-1)^top
        let mut acc = 1u64;
        let mut term = d;
        for _ in 0..=top {
            acc = acc.checked_add(term)?;
            term = term.checked_mul(d - 1)?;
        }
        Some(acc)
    };
    let value = if (g / 2) % 2 == 1 {
        geometric(((g - 6) / 4) as u64)
    } else {
        let tail = (d - 1).checked_pow(((g - 4) / 4) as u32);
        geometric(((g - 8) / 4) as u64).zip(tail).and_then(|(a, b)| a.checked_add(b))
    };
    let value = value.ok_or_else(overflow)?;
    usize::try_from(value).map_err(|_| overflow())
}

/// An m-cover of a base graph: one permutation of {0..m-1} per base edge, in
/// the order of `TannerGraph::edges`.
#[derive(Clone, Debug)]
pub struct CoverSpec {
    pub m: usize,
    pub edge_perms: Vec<Vec<u32>>,
}

impl CoverSpec {
    pub fn identity(base: &TannerGraph, m: usize) -> CoverSpec {
        CoverSpec {
            m,
            edge_perms: vec![(0..m as u32).collect(); base.n_edges()],
        }
    }

    pub fn random(base: &TannerGraph, m: usize, rng: &mut ChaCha12Rng) -> CoverSpec {
        let edge_perms = (0..base.n_edges())
            .map(|_| {
                let mut perm: Vec<u32> = (0..m as u32).collect();
                perm.shuffle(rng);
                perm
            })
            .collect();
        CoverSpec { m, edge_perms }
    }

    fn validate(&self, base: &TannerGraph) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidCover("cover degree m must be >= 1".into()));
        }
        if self.edge_perms.len() != base.n_edges() {
            return Err(Error::InvalidCover(format!(
                "expected {} edge permutations, got {}",
                base.n_edges(),
                self.edge_perms.len()
            )));
        }
        for perm in &self.edge_perms {
            let mut sorted: Vec<u32> = perm.clone();
            sorted.sort_unstable();
            if sorted != (0..self.m as u32).collect::<Vec<_>>() {
                return Err(Error::InvalidCover(format!(
                    "{:?} is not a permutation of 0..{}",
                    perm, self.m
                )));
            }
        }
        Ok(())
    }
}

/// Builds the lifted graph of a cover: variable (i, k) gets index i*m + k,
/// check (c, l) gets index c*m + l, and base edge (i, c) with permutation s
/// contributes the edges ((i,k), (c, s(k))).
pub fn lift(base: &TannerGraph, spec: &CoverSpec) -> Result<TannerGraph> {
    spec.validate(base)?;
    let m = spec.m;
    let mut b = GraphBuilder::new();
    for i in 0..base.n_var() {
        for k in 0..m {
            b.add_var(format!("v{i}.{k}"));
        }
    }
    for c in 0..base.n_chk() {
        for l in 0..m {
            b.add_chk(format!("c{c}.{l}"));
        }
    }
    for (e, (i, c)) in base.edges().into_iter().enumerate() {
        let perm = &spec.edge_perms[e];
        for k in 0..m {
            b.connect(i as usize * m + k, c as usize * m + perm[k] as usize)?;
        }
    }
    Ok(b.build())
}

/// An n x p row-stochastic matrix of per-cloud value fractions with common
/// denominator m, extracted from a codeword of an m-cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pseudocodeword {
    n: usize,
    p: u32,
    m: usize,
    /// counts[i][j] copies of variable i take value j; each row sums to m.
    counts: Vec<Vec<u32>>,
}

impl Pseudocodeword {
    pub fn new(p: u32, m: usize, counts: Vec<Vec<u32>>) -> Result<Pseudocodeword> {
        let n = counts.len();
        for row in &counts {
            if row.len() != p as usize {
                return Err(Error::LengthMismatch {
                    expected: p as usize,
                    got: row.len(),
                });
            }
            if row.iter().map(|&c| c as u64).sum::<u64>() != m as u64 {
                return Err(Error::InvalidCover(format!(
                    "row {:?} does not sum to m = {m}",
                    row
                )));
            }
        }
        Ok(Pseudocodeword { n, p, m, counts })
    }

    /// The 0/1 matrix of a plain codeword (trivial 1-cover).
    pub fn from_codeword(word: &[u8], p: u32) -> Pseudocodeword {
        let counts = word
            .iter()
            .map(|&sym| {
                let mut row = vec![0u32; p as usize];
                row[sym as usize] = 1;
                row
            })
            .collect();
        Pseudocodeword {
            n: word.len(),
            p,
            m: 1,
            counts,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn alphabet(&self) -> u32 {
        self.p
    }

    pub fn cover_degree(&self) -> usize {
        self.m
    }

    /// Fraction f[i][j] as an exact rational.
    pub fn fraction(&self, i: usize, j: usize) -> Ratio<i64> {
        Ratio::new(self.counts[i][j] as i64, self.m as i64)
    }

    pub fn counts(&self) -> &[Vec<u32>] {
        &self.counts
    }

    /// Weight on the p-ary symmetric channel.
    ///
    /// Rows are ranked by g_i, the largest entry outside column zero (ties to
    /// the smallest column, then smallest row); e is the least count of
    /// selected rows whose g-sum reaches the h-sum of the unselected rows,
    /// where h_i = 1 - f_{i,0}. Equality gives 2e, strict excess 2e-1. All
    /// arithmetic is on integer counts, so the equality branch is exact.
    pub fn psc_weight(&self) -> usize {
        self.weight_selection().0
    }

    /// The weight together with the selected (row, column) components.
    pub fn weight_selection(&self) -> (usize, Vec<(usize, usize)>) {
        let mut rows: Vec<(u32, usize, usize)> = Vec::with_capacity(self.n); // (g, i, j)
        let mut total_h: u64 = 0;
        for (i, row) in self.counts.iter().enumerate() {
            let mut g = 0u32;
            let mut gj = 0usize;
            for (j, &c) in row.iter().enumerate().skip(1) {
                if c > g {
                    g = c;
                    gj = j;
                }
            }
            total_h += (self.m as u32 - row[0]) as u64;
            rows.push((g, i, gj));
        }
        if total_h == 0 {
            return (0, Vec::new());
        }
        rows.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut sel_g: u64 = 0;
        let mut unsel_h: u64 = total_h;
        let mut selected = Vec::new();
        for (e, &(g, i, j)) in rows.iter().enumerate() {
            sel_g += g as u64;
            unsel_h -= (self.m as u32 - self.counts[i][0]) as u64;
            selected.push((i, j));
            if sel_g >= unsel_h {
                let e = e + 1;
                return if sel_g == unsel_h {
                    (2 * e, selected)
                } else {
                    (2 * e - 1, selected)
                };
            }
        }
        unreachable!("selecting every row empties the unselected side");
    }

    /// The received vector built from the weight-defining selection: the
    /// selected rows carry their selected symbols, everything else is zero.
    pub fn weight_defining_received(&self) -> Vec<u8> {
        let (_, selected) = self.weight_selection();
        let mut r = vec![0u8; self.n];
        for (i, j) in selected {
            r[i] = j as u8;
        }
        r
    }

    /// The local single-constraint inequality at every check of the base
    /// graph: 1 - f_{i,0} never exceeds the sum over the check's other
    /// neighbors.
    pub fn local_check_inequality_holds(&self, base: &TannerGraph) -> bool {
        for c in 0..base.n_chk() {
            let hs: Vec<u64> = base
                .chk_neighbors(c)
                .iter()
                .map(|&i| (self.m as u32 - self.counts[i as usize][0]) as u64)
                .collect();
            let total: u64 = hs.iter().sum();
            if hs.iter().any(|&h| h > total - h) {
                return false;
            }
        }
        true
    }

    /// Dump format: header "n p m", then n lines of p rationals "num/den".
    pub fn to_dump(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {}", self.n, self.p, self.m);
        for row in &self.counts {
            let items: Vec<String> = row.iter().map(|&c| format!("{}/{}", c, self.m)).collect();
            let _ = writeln!(out, "{}", items.join(" "));
        }
        out
    }

    pub fn from_dump(text: &str) -> Result<Pseudocodeword> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidCover("empty dump".into()))?;
        let parts: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::InvalidCover(format!("bad header {header:?}")))
            })
            .collect::<Result<_>>()?;
        if parts.len() != 3 {
            return Err(Error::InvalidCover(format!("bad header {header:?}")));
        }
        let (n, p, m) = (parts[0], parts[1] as u32, parts[2]);
        let mut counts = Vec::with_capacity(n);
        for line in lines.take(n) {
            let row: Vec<u32> = line
                .split_whitespace()
                .map(|tok| {
                    let (num, den) = tok
                        .split_once('/')
                        .ok_or_else(|| Error::InvalidCover(format!("bad fraction {tok:?}")))?;
                    let num: u32 = num
                        .parse()
                        .map_err(|_| Error::InvalidCover(format!("bad fraction {tok:?}")))?;
                    let den: usize = den
                        .parse()
                        .map_err(|_| Error::InvalidCover(format!("bad fraction {tok:?}")))?;
                    if den != m {
                        return Err(Error::InvalidCover(format!("denominator {den} != m = {m}")));
                    }
                    Ok(num)
                })
                .collect::<Result<_>>()?;
            counts.push(row);
        }
        Pseudocodeword::new(p, m, counts)
    }
}

/// Extracts the pseudocodeword of a cover codeword: f[i][j] is the fraction
/// of the m copies of variable i valued j.
pub fn pseudocodeword_from_cover(
    base: &TannerGraph,
    spec: &CoverSpec,
    lifted_word: &[u8],
    p: u32,
) -> Result<Pseudocodeword> {
    let lifted = lift(base, spec)?;
    let h = lifted.to_matrix(p);
    if !h.is_codeword(lifted_word)? {
        return Err(Error::NotCoverCodeword);
    }
    Ok(extract_unchecked(base.n_var(), spec.m, lifted_word, p))
}

fn extract_unchecked(n: usize, m: usize, lifted_word: &[u8], p: u32) -> Pseudocodeword {
    let mut counts = vec![vec![0u32; p as usize]; n];
    for i in 0..n {
        for k in 0..m {
            counts[i][lifted_word[i * m + k] as usize] += 1;
        }
    }
    Pseudocodeword { n, p, m, counts }
}

/// Distance between a received word and a pseudocodeword:
/// sum_i sum_k [r_i != k] f_{i,k} = sum_i (1 - f_{i,r_i}).
pub fn psc_distance(r: &[u8], f: &Pseudocodeword) -> Result<Ratio<i64>> {
    if r.len() != f.n {
        return Err(Error::LengthMismatch {
            expected: f.n,
            got: r.len(),
        });
    }
    let mut num: i64 = 0;
    for (i, &sym) in r.iter().enumerate() {
        num += f.m as i64 - f.counts[i][sym as usize] as i64;
    }
    Ok(Ratio::new(num, f.m as i64))
}

/// Whether an iterative decoder prefers F over the all-zero codeword given r:
/// d(r, F) <= d(r, 0).
pub fn prefers_over_zero(r: &[u8], f: &Pseudocodeword) -> Result<bool> {
    let d_f = psc_distance(r, f)?;
    let wt = r.iter().filter(|&&s| s != 0).count();
    Ok(d_f <= Ratio::new(wt as i64, 1))
}

/// One sampled cover and the pseudocodewords of its nonzero codewords.
#[derive(Clone, Debug)]
pub struct CoverSample {
    pub trial: usize,
    pub spec: CoverSpec,
    pub pseudocodewords: Vec<(Pseudocodeword, usize)>,
    /// True when the lifted code was too large to enumerate and codewords
    /// were sampled from the nullspace instead.
    pub partial: bool,
}

/// Number of lifted codewords above which sampling replaces enumeration.
pub const COVER_ENUM_LIMIT: u64 = 1 << 20;

/// Draws seeded random m-covers of a graph and extracts every pseudocodeword
/// (or a sample, when a lift is too large to enumerate).
pub fn sample_cover_pseudoweights(
    base: &TannerGraph,
    p: u32,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<CoverSample>> {
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng =
                ChaCha12Rng::seed_from_u64(derive_stream_seed(seed, m as u64, trial as u64));
            let spec = CoverSpec::random(base, m, &mut rng);
            let lifted = lift(base, &spec)?;
            let h = lifted.to_matrix(p);
            let basis = h.nullspace_basis();
            let k = basis.len();
            let n_lift = lifted.n_var();
            let total = (p as u64).checked_pow(k as u32);
            let mut pseudocodewords = Vec::new();
            let mut partial = false;
            let words: Vec<Vec<u8>> = if total.is_some_and(|t| t <= COVER_ENUM_LIMIT) {
                enumerate_words(&basis, n_lift, p)
            } else {
                partial = true;
                sample_words(&basis, n_lift, p, 256, &mut rng)
            };
            for w in words {
                if w.iter().all(|&s| s == 0) {
                    continue;
                }
                let f = extract_unchecked(base.n_var(), m, &w, p);
                let weight = f.psc_weight();
                pseudocodewords.push((f, weight));
            }
            Ok(CoverSample {
                trial,
                spec,
                pseudocodewords,
                partial,
            })
        })
        .collect()
}

fn enumerate_words(basis: &[Vec<u8>], n: usize, p: u32) -> Vec<Vec<u8>> {
    let k = basis.len();
    let total = (p as u64).pow(k as u32);
    let mut out = Vec::with_capacity(total as usize);
    let mut digits = vec![0u32; k];
    let mut cur = vec![0u8; n];
    out.push(cur.clone());
    let add = |cur: &mut [u8], b: &[u8]| {
        for (c, &e) in cur.iter_mut().zip(b) {
            *c = ((*c as u32 + e as u32) % p) as u8;
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
        out.push(cur.clone());
    }
    out
}

fn sample_words(
    basis: &[Vec<u8>],
    n: usize,
    p: u32,
    count: usize,
    rng: &mut ChaCha12Rng,
) -> Vec<Vec<u8>> {
    use rand::Rng;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut cur = vec![0u8; n];
        for b in basis {
            let coef = rng.gen_range(0..p);
            if coef == 0 {
                continue;
            }
            for (c, &e) in cur.iter_mut().zip(b) {
                *c = ((*c as u32 + coef * e as u32) % p) as u8;
            }
        }
        out.push(cur);
    }
    out
}
