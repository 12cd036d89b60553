//! Iterative decoders on Tanner graphs: binary min-sum, binary sum-product,
//! and probability-domain p-ary sum-product, all with flooding schedules and
//! syndrome-based early stopping.

use crate::tanner::TannerGraph;

/// Decoder output: the hard-decision word, whether a zero syndrome was
/// reached, and the number of iterations spent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    pub word: Vec<u8>,
    pub converged: bool,
    pub iterations: usize,
}

/// Message clamp keeping tanh/atanh finite for channel LLRs up to 1e3.
const LLR_CLAMP: f64 = 30.0;

/// Edge-indexed view of a Tanner graph shared by the decoders; build once
/// and decode many frames.
#[derive(Clone, Debug)]
pub struct MessagePassing {
    n_var: usize,
    n_edges: usize,
    var_edges: Vec<Vec<u32>>,
    chk_edges: Vec<Vec<u32>>,
    edge_var: Vec<u32>,
}

impl MessagePassing {
    pub fn new(g: &TannerGraph) -> MessagePassing {
        let n_var = g.n_var();
        let n_chk = g.n_chk();
        let mut var_edges = vec![Vec::new(); n_var];
        let mut chk_edges = vec![Vec::new(); n_chk];
        let mut edge_var = Vec::new();
        for (e, (v, c)) in g.edges().into_iter().enumerate() {
            var_edges[v as usize].push(e as u32);
            chk_edges[c as usize].push(e as u32);
            edge_var.push(v);
        }
        MessagePassing {
            n_var,
            n_edges: edge_var.len(),
            var_edges,
            chk_edges,
            edge_var,
        }
    }

    pub fn n_var(&self) -> usize {
        self.n_var
    }

    fn syndrome_ok_binary(&self, word: &[u8]) -> bool {
        self.chk_edges.iter().all(|edges| {
            edges.iter().fold(0u8, |acc, &e| {
                acc ^ word[self.edge_var[e as usize] as usize]
            }) == 0
        })
    }

    fn syndrome_ok_pary(&self, word: &[u8], p: u32) -> bool {
        self.chk_edges.iter().all(|edges| {
            edges.iter().fold(0u32, |acc, &e| {
                (acc + word[self.edge_var[e as usize] as usize] as u32) % p
            }) == 0
        })
    }

    /// Plain min-sum: check messages are the extrinsic sign product times the
    /// extrinsic minimum magnitude; hard decisions use LLR sign with ties to
    /// bit 0.
    pub fn min_sum(&self, llr: &[f64], max_iter: usize) -> DecodeResult {
        self.binary_flooding(llr, max_iter, CheckRule::MinSum)
    }

    /// Sum-product via the tanh rule, with messages clamped for stability.
    pub fn sum_product(&self, llr: &[f64], max_iter: usize) -> DecodeResult {
        self.binary_flooding(llr, max_iter, CheckRule::SumProduct)
    }

    fn binary_flooding(&self, llr: &[f64], max_iter: usize, rule: CheckRule) -> DecodeResult {
        assert_eq!(llr.len(), self.n_var, "LLR length mismatch");
        let mut v2c: Vec<f64> = (0..self.n_edges)
            .map(|e| llr[self.edge_var[e] as usize].clamp(-LLR_CLAMP, LLR_CLAMP))
            .collect();
        let mut c2v = vec![0.0f64; self.n_edges];
        let mut posterior = vec![0.0f64; self.n_var];
        let mut word = vec![0u8; self.n_var];
        let mut iterations = max_iter;
        let mut converged = false;
        for it in 1..=max_iter {
            match rule {
                CheckRule::MinSum => self.check_pass_min_sum(&v2c, &mut c2v),
                CheckRule::SumProduct => self.check_pass_sum_product(&v2c, &mut c2v),
            }
            for v in 0..self.n_var {
                let mut acc = llr[v];
                for &e in &self.var_edges[v] {
                    acc += c2v[e as usize];
                }
                posterior[v] = acc;
                word[v] = if acc < 0.0 { 1 } else { 0 };
            }
            if self.syndrome_ok_binary(&word) {
                iterations = it;
                converged = true;
                break;
            }
            for e in 0..self.n_edges {
                let v = self.edge_var[e] as usize;
                v2c[e] = (posterior[v] - c2v[e]).clamp(-LLR_CLAMP, LLR_CLAMP);
            }
        }
        DecodeResult {
            word,
            converged,
            iterations,
        }
    }

    fn check_pass_min_sum(&self, v2c: &[f64], c2v: &mut [f64]) {
        for edges in &self.chk_edges {
            let mut sign = 1.0f64;
            let mut min1 = f64::INFINITY;
            let mut min2 = f64::INFINITY;
            let mut argmin = usize::MAX;
            for &e in edges {
                let m = v2c[e as usize];
                if m < 0.0 {
                    sign = -sign;
                }
                let mag = m.abs();
                if mag < min1 {
                    min2 = min1;
                    min1 = mag;
                    argmin = e as usize;
                } else if mag < min2 {
                    min2 = mag;
                }
            }
            for &e in edges {
                let e = e as usize;
                let m = v2c[e];
                let self_sign = if m < 0.0 { -1.0 } else { 1.0 };
                let mag = if e == argmin { min2 } else { min1 };
                let mag = if mag.is_finite() { mag } else { LLR_CLAMP };
                c2v[e] = sign * self_sign * mag;
            }
        }
    }

    fn check_pass_sum_product(&self, v2c: &[f64], c2v: &mut [f64]) {
        let mut tanhs: Vec<f64> = Vec::new();
        let mut prefix: Vec<f64> = Vec::new();
        let mut suffix: Vec<f64> = Vec::new();
        for edges in &self.chk_edges {
            let d = edges.len();
            tanhs.clear();
            tanhs.extend(edges.iter().map(|&e| (v2c[e as usize] / 2.0).tanh()));
            prefix.resize(d + 1, 1.0);
            suffix.resize(d + 1, 1.0);
            prefix[0] = 1.0;
            for i in 0..d {
                prefix[i + 1] = prefix[i] * tanhs[i];
            }
            suffix[d] = 1.0;
            for i in (0..d).rev() {
                suffix[i] = suffix[i + 1] * tanhs[i];
            }
            for (i, &e) in edges.iter().enumerate() {
                let prod = (prefix[i] * suffix[i + 1])
                    .clamp(-0.999_999_999_999_999, 0.999_999_999_999_999);
                c2v[e as usize] = 2.0 * prod.atanh();
            }
        }
    }

    /// Probability-domain sum-product over GF(p) for unit-weight parity
    /// checks (each check is a mod-p sum). Messages are length-p probability
    /// vectors; the check update convolves the extrinsic distributions over
    /// Z_p; hard decisions take the argmax with ties to the smallest symbol.
    pub fn sum_product_pary(
        &self,
        p: u32,
        likelihoods: &[Vec<f64>],
        max_iter: usize,
    ) -> DecodeResult {
        assert_eq!(likelihoods.len(), self.n_var, "likelihood rows mismatch");
        let pu = p as usize;
        let channel: Vec<f64> = {
            let mut out = Vec::with_capacity(self.n_var * pu);
            for row in likelihoods {
                assert_eq!(row.len(), pu, "likelihood row width mismatch");
                out.extend(normalized(row));
            }
            out
        };
        let mut v2c = vec![0.0f64; self.n_edges * pu];
        for e in 0..self.n_edges {
            let v = self.edge_var[e] as usize;
            v2c[e * pu..(e + 1) * pu].copy_from_slice(&channel[v * pu..(v + 1) * pu]);
        }
        let mut c2v = vec![0.0f64; self.n_edges * pu];
        let mut posterior = vec![0.0f64; self.n_var * pu];
        let mut word = vec![0u8; self.n_var];
        let mut iterations = max_iter;
        let mut converged = false;
        for it in 1..=max_iter {
            self.check_pass_pary(pu, &v2c, &mut c2v);
            // Posteriors and decisions.
            for v in 0..self.n_var {
                let post = &mut posterior[v * pu..(v + 1) * pu];
                post.copy_from_slice(&channel[v * pu..(v + 1) * pu]);
                for &e in &self.var_edges[v] {
                    let msg = &c2v[e as usize * pu..(e as usize + 1) * pu];
                    for (acc, &m) in post.iter_mut().zip(msg) {
                        *acc *= m;
                    }
                }
                renormalize(post);
                let mut best = 0usize;
                for sym in 1..pu {
                    if post[sym] > post[best] {
                        best = sym;
                    }
                }
                word[v] = best as u8;
            }
            if self.syndrome_ok_pary(&word, p) {
                iterations = it;
                converged = true;
                break;
            }
            // Variable pass: extrinsic products per edge.
            for v in 0..self.n_var {
                let edges = &self.var_edges[v];
                let d = edges.len();
                // prefix/suffix products over the edge messages
                let mut pre = vec![1.0f64; (d + 1) * pu];
                for (i, &e) in edges.iter().enumerate() {
                    let msg = &c2v[e as usize * pu..(e as usize + 1) * pu];
                    for sym in 0..pu {
                        pre[(i + 1) * pu + sym] = pre[i * pu + sym] * msg[sym];
                    }
                }
                let mut suf = vec![1.0f64; (d + 1) * pu];
                for i in (0..d).rev() {
                    let e = edges[i] as usize;
                    let msg = &c2v[e * pu..(e + 1) * pu];
                    for sym in 0..pu {
                        suf[i * pu + sym] = suf[(i + 1) * pu + sym] * msg[sym];
                    }
                }
                for (i, &e) in edges.iter().enumerate() {
                    let out = &mut v2c[e as usize * pu..(e as usize + 1) * pu];
                    for sym in 0..pu {
                        out[sym] =
                            channel[v * pu + sym] * pre[i * pu + sym] * suf[(i + 1) * pu + sym];
                    }
                    renormalize(out);
                }
            }
        }
        DecodeResult {
            word,
            converged,
            iterations,
        }
    }

    fn check_pass_pary(&self, pu: usize, v2c: &[f64], c2v: &mut [f64]) {
        for edges in &self.chk_edges {
            let d = edges.len();
            // Distribution of partial sums over Z_p from the left and right.
            let mut pre = vec![0.0f64; (d + 1) * pu];
            pre[0] = 1.0;
            for (i, &e) in edges.iter().enumerate() {
                let msg = &v2c[e as usize * pu..(e as usize + 1) * pu];
                let (a, b) = pre.split_at_mut((i + 1) * pu);
                let src = &a[i * pu..(i + 1) * pu];
                let dst = &mut b[..pu];
                convolve(src, msg, dst, pu);
            }
            let mut suf = vec![0.0f64; (d + 1) * pu];
            suf[d * pu] = 1.0;
            for i in (0..d).rev() {
                let e = edges[i] as usize;
                let msg = &v2c[e * pu..(e + 1) * pu];
                let (a, b) = suf.split_at_mut((i + 1) * pu);
                let src = &b[..pu];
                let dst = &mut a[i * pu..(i + 1) * pu];
                convolve(src, msg, dst, pu);
            }
            let mut others = vec![0.0f64; pu];
            for (i, &e) in edges.iter().enumerate() {
                convolve(
                    &pre[i * pu..(i + 1) * pu],
                    &suf[(i + 1) * pu..(i + 2) * pu],
                    &mut others,
                    pu,
                );
                let out = &mut c2v[e as usize * pu..(e as usize + 1) * pu];
                for sym in 0..pu {
                    out[sym] = others[(pu - sym) % pu];
                }
                renormalize(out);
            }
        }
    }
}

enum CheckRule {
    MinSum,
    SumProduct,
}

fn convolve(a: &[f64], b: &[f64], out: &mut [f64], p: usize) {
    out.iter_mut().for_each(|x| *x = 0.0);
    for (j, &aj) in a.iter().enumerate() {
        if aj == 0.0 {
            continue;
        }
        for (k, &bk) in b.iter().enumerate() {
            let idx = j + k;
            let idx = if idx >= p { idx - p } else { idx };
            out[idx] += aj * bk;
        }
    }
}

fn normalized(row: &[f64]) -> Vec<f64> {
    let mut out = row.to_vec();
    renormalize(&mut out);
    out
}

fn renormalize(row: &mut [f64]) {
    let sum: f64 = row.iter().sum();
    if sum > 0.0 && sum.is_finite() {
        for x in row.iter_mut() {
            *x /= sum;
        }
    } else {
        let u = 1.0 / row.len() as f64;
        for x in row.iter_mut() {
            *x = u;
        }
    }
}

/// One-shot wrappers constructing the edge view per call.
pub fn min_sum(g: &TannerGraph, llr: &[f64], max_iter: usize) -> DecodeResult {
    MessagePassing::new(g).min_sum(llr, max_iter)
}

pub fn sum_product_binary(g: &TannerGraph, llr: &[f64], max_iter: usize) -> DecodeResult {
    MessagePassing::new(g).sum_product(llr, max_iter)
}

pub fn sum_product_pary(
    g: &TannerGraph,
    p: u32,
    likelihoods: &[Vec<f64>],
    max_iter: usize,
) -> DecodeResult {
    MessagePassing::new(g).sum_product_pary(p, likelihoods, max_iter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{frame_rng, BiAwgn, Psc};
    use crate::construct::{type1b, type2_l3};

    fn pg_7_3() -> TannerGraph {
        type2_l3(2, 1).unwrap()
    }

    fn codeword_of(g: &TannerGraph) -> Vec<u8> {
        g.to_matrix(2)
            .nullspace_basis()
            .into_iter()
            .find(|w| w.iter().any(|&x| x != 0))
            .unwrap()
    }

    fn llrs_for(word: &[u8], mag: f64) -> Vec<f64> {
        word.iter()
            .map(|&b| if b == 0 { mag } else { -mag })
            .collect()
    }

    #[test]
    fn noiseless_codeword_is_fixed_point() {
        let g = pg_7_3();
        let c = codeword_of(&g);
        let llr = llrs_for(&c, 4.0);
        for result in [min_sum(&g, &llr, 50), sum_product_binary(&g, &llr, 50)] {
            assert!(result.converged);
            assert_eq!(result.iterations, 1);
            assert_eq!(result.word, c);
        }
    }

    #[test]
    fn single_strong_flip_corrected_exhaustively() {
        let g = pg_7_3();
        let c = codeword_of(&g);
        for flip in 0..7 {
            let mut llr = llrs_for(&c, 4.0);
            llr[flip] = -llr[flip];
            let ms = min_sum(&g, &llr, 50);
            assert!(ms.converged, "min-sum stuck on flip {flip}");
            assert_eq!(ms.word, c, "min-sum wrong on flip {flip}");
            let sp = sum_product_binary(&g, &llr, 50);
            assert!(sp.converged, "sum-product stuck on flip {flip}");
            assert_eq!(sp.word, c, "sum-product wrong on flip {flip}");
        }
    }

    #[test]
    fn all_zero_llr_ties_resolve_to_zero_word() {
        // Degenerate symmetric input: the tie rule maps LLR 0 to bit 0, so
        // the all-zero codeword is reached immediately.
        let g = pg_7_3();
        let result = min_sum(&g, &[0.0; 7], 10);
        assert!(result.converged);
        assert_eq!(result.word, vec![0u8; 7]);
    }

    #[test]
    fn huge_llrs_stay_finite() {
        let g = pg_7_3();
        let c = codeword_of(&g);
        let llr = llrs_for(&c, 1000.0);
        let result = sum_product_binary(&g, &llr, 50);
        assert!(result.converged);
        assert_eq!(result.word, c);
        let result = min_sum(&g, &llr, 50);
        assert!(result.converged);
    }

    #[test]
    fn min_sum_and_sum_product_agree_at_high_snr() {
        let g = pg_7_3();
        let mp = MessagePassing::new(&g);
        let chan = BiAwgn::new(6.0, 3.0 / 7.0).unwrap();
        let zeros = vec![0u8; 7];
        let mut agree = 0usize;
        let frames = 10_000;
        for f in 0..frames {
            let mut rng = frame_rng(17, 0, f as u64);
            let y = chan.transmit(&zeros, &mut rng);
            let llr = chan.llrs(&y);
            let a = mp.min_sum(&llr, 200);
            let b = mp.sum_product(&llr, 200);
            if a.word == b.word {
                agree += 1;
            }
        }
        assert!(
            agree as f64 >= 0.99 * frames as f64,
            "agreement {agree}/{frames}"
        );
    }

    #[test]
    fn pary_noiseless_codeword_converges() {
        let g = type1b(3, 1).unwrap();
        let h = g.to_matrix(3);
        let word = h
            .nullspace_basis()
            .into_iter()
            .find(|w| w.iter().any(|&x| x != 0))
            .unwrap();
        let chan = Psc::new(3, 0.0).unwrap();
        let lik = chan.likelihoods(&word);
        let res = sum_product_pary(&g, 3, &lik, 50);
        assert!(res.converged);
        assert_eq!(res.iterations, 1);
        assert_eq!(res.word, word);
    }

    #[test]
    fn pary_single_symbol_errors_corrected_exhaustively() {
        // The (3,1) Type I-B code has ternary minimum distance 6, so every
        // single-symbol error pattern must decode back to the codeword.
        let g = type1b(3, 1).unwrap();
        let mp = MessagePassing::new(&g);
        let chan = Psc::new(3, 0.1).unwrap();
        let zeros = vec![0u8; 10];
        for pos in 0..10 {
            for wrong in 1..3u8 {
                let mut received = zeros.clone();
                received[pos] = wrong;
                let lik = chan.likelihoods(&received);
                let res = mp.sum_product_pary(3, &lik, 200);
                assert!(res.converged, "not converged for error at {pos} -> {wrong}");
                assert_eq!(res.word, zeros, "wrong word for error at {pos} -> {wrong}");
            }
        }
    }

    #[test]
    fn pary_uniform_likelihoods_tie_to_zero_word() {
        // Fully symmetric input: argmax ties resolve to symbol 0 and the
        // all-zero word is a codeword, so the decoder settles immediately.
        let g = type1b(3, 1).unwrap();
        let lik = vec![vec![1.0 / 3.0; 3]; 10];
        let res = sum_product_pary(&g, 3, &lik, 10);
        assert!(res.converged);
        assert_eq!(res.word, vec![0u8; 10]);
    }

    #[test]
    fn pary_messages_stay_normalized() {
        let g = type1b(3, 1).unwrap();
        let mp = MessagePassing::new(&g);
        let chan = Psc::new(3, 0.3).unwrap();
        let mut rng = frame_rng(5, 0, 0);
        let received = chan.transmit(&[0u8; 10], &mut rng);
        let lik = chan.likelihoods(&received);
        // Run a few iterations and spot-check sums via the posterior path:
        // sum_product_pary renormalizes every message, so a finite result
        // with a valid word suffices here.
        let res = mp.sum_product_pary(3, &lik, 8);
        assert!(res.word.iter().all(|&s| s < 3));
    }

    #[test]
    fn converged_implies_zero_syndrome() {
        let g = pg_7_3();
        let mp = MessagePassing::new(&g);
        let chan = BiAwgn::new(1.0, 3.0 / 7.0).unwrap();
        let zeros = vec![0u8; 7];
        for f in 0..500 {
            let mut rng = frame_rng(3, 1, f as u64);
            let y = chan.transmit(&zeros, &mut rng);
            let res = mp.min_sum(&chan.llrs(&y), 30);
            if res.converged {
                assert!(g.to_matrix(2).is_codeword(&res.word).unwrap());
            }
        }
    }
}
