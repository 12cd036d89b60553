//! Acceptance suite: every structural and behavioral requirement of the
//! artifact, one test per criterion, each printing a single PASS/FAIL line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use treeldpc::channel::Psc;
use treeldpc::construct::{
    builtin_permutations, type1a, type1b, type2_l3, type2_l4, witness_codeword, Alphabet,
    ConstructionSpec, FFunction, Family, WitnessFamily,
};
use treeldpc::decode::MessagePassing;
use treeldpc::linalg::{min_distance, GFMatrix, MinDistance, DEFAULT_ENUM_CAP};
use treeldpc::pseudo::{prefers_over_zero, sample_cover_pseudoweights, tree_bound, Pseudocodeword};
use treeldpc::report::analyze;
use treeldpc::sim::{emit_csv, run, ChannelGrid, DecoderKind, SimCode, SimConfig};

fn criterion(number: u32, budget: Duration, desc: &str, body: impl FnOnce()) {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    match outcome {
        Ok(()) if elapsed <= budget => {
            println!("acceptance criterion {number:>2}: PASS ({elapsed:.2?})  {desc}");
        }
        Ok(()) => {
            println!(
                "acceptance criterion {number:>2}: FAIL (over budget: {elapsed:.2?} > {budget:.2?})  {desc}"
            );
            panic!("criterion {number} exceeded its runtime budget");
        }
        Err(e) => {
            println!("acceptance criterion {number:>2}: FAIL ({elapsed:.2?})  {desc}");
            resume_unwind(e);
        }
    }
}

fn spec_for(family: Family, p: u32, s: u32) -> ConstructionSpec {
    let mut spec = ConstructionSpec::new(family);
    spec.p = Some(p);
    spec.s = Some(s);
    spec
}

fn exact(d: &MinDistance) -> usize {
    d.exact().expect("distance must be exact")
}

/// All codewords of a parity check, enumerated independently of the library's
/// distance search (plain odometer over the nullspace basis).
fn all_codewords(h: &GFMatrix) -> Vec<Vec<u8>> {
    let basis = h.nullspace_basis();
    let p = h.modulus();
    let k = basis.len();
    let n = h.cols();
    let total = (p as u64).pow(k as u32);
    let mut digits = vec![0u32; k];
    let mut cur = vec![0u8; n];
    let mut out = vec![cur.clone()];
    for _ in 1..total {
        let mut pos = 0;
        loop {
            for (c, &e) in cur.iter_mut().zip(&basis[pos]) {
                *c = ((*c as u32 + e as u32) % p) as u8;
            }
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

#[test]
fn criterion_1_type1a_table() {
    criterion(
        1,
        Duration::from_secs(10),
        "Type I-A parameter table, ell = 3..6",
        || {
            let expect = [
                (3u32, 10usize, 6usize, 4usize, 4usize),
                (4, 22, 8, 4, 8),
                (5, 46, 10, 10, 10),
                (6, 94, 12, 14, 20),
            ];
            for (ell, n, girth, dim, dmin) in expect {
                let g = type1a(ell, &builtin_permutations(2 * ell).unwrap()).unwrap();
                assert_eq!(g.n_var(), n, "n for ell={ell}");
                assert_eq!(g.n_chk(), n);
                assert_eq!(g.regular_degree(), Some(3));
                assert_eq!(g.girth(), Some(girth), "girth for ell={ell}");
                let h = g.to_matrix(2);
                assert_eq!(h.dimension(), dim, "dimension for ell={ell}");
                assert_eq!(
                    exact(&min_distance(&h, DEFAULT_ENUM_CAP)),
                    dmin,
                    "min distance for ell={ell}"
                );
            }
        },
    );
}

#[test]
fn criterion_2_type1b_table() {
    criterion(
        2,
        Duration::from_secs(60),
        "Type I-B parameter table",
        || {
            let expect = [
                (3u32, 1u32, 3usize, 4usize),
                (2, 2, 5, 6),
                (5, 1, 7, 8),
                (7, 1, 11, 12),
                (2, 3, 31, 10),
            ];
            for (p, s, dim, dmin) in expect {
                let g = type1b(p, s).unwrap();
                let q = (p as usize).pow(s);
                assert_eq!(g.n_var(), q * q + 1, "n for ({p},{s})");
                assert_eq!(g.regular_degree(), Some(q), "degree for ({p},{s})");
                if q >= 3 {
                    assert_eq!(g.girth(), Some(6), "girth for ({p},{s})");
                }
                let r = analyze(
                    &spec_for(Family::TypeIb, p, s),
                    Alphabet::Binary,
                    DEFAULT_ENUM_CAP,
                )
                .unwrap();
                assert_eq!(r.dimension, dim, "dimension for ({p},{s})");
                assert_eq!(exact(&r.min_distance), dmin, "min distance for ({p},{s})");
            }
            // The (2,1) girth is reported against the measured value: the
            // published table prints 8, the literal construction closes into a
            // single 10-cycle.
            let measured = type1b(2, 1).unwrap().girth();
            assert_eq!(measured, Some(10), "measured (2,1) girth");
            println!(
                "  note: type1b(2,1) girth measured = {} (published table prints 8; not asserted)",
                measured.unwrap()
            );
        },
    );
}

#[test]
fn criterion_3_type2_l3_table() {
    criterion(
        3,
        Duration::from_secs(60),
        "Type II ell=3 parameter table",
        || {
            let expect = [
                (2u32, 1u32, 3usize, 4usize),
                (2, 2, 11, 6),
                (3, 1, 1, 13),
                (2, 3, 45, 10),
            ];
            for (p, s, dim, dmin) in expect {
                let q = (p as usize).pow(s);
                let g = type2_l3(p, s).unwrap();
                assert_eq!(g.n_var(), 1 + q + q * q, "n for ({p},{s})");
                assert_eq!(g.girth(), Some(6), "girth for ({p},{s})");
                assert_eq!(g.diameter().unwrap(), 3, "diameter for ({p},{s})");
                let r = analyze(
                    &spec_for(Family::TypeIiL3, p, s),
                    Alphabet::Binary,
                    DEFAULT_ENUM_CAP,
                )
                .unwrap();
                assert_eq!(r.dimension, dim, "binary dimension for ({p},{s})");
                assert_eq!(
                    exact(&r.min_distance),
                    dmin,
                    "binary min distance for ({p},{s})"
                );
            }
            let r = analyze(
                &spec_for(Family::TypeIiL3, 3, 1),
                Alphabet::Pary,
                DEFAULT_ENUM_CAP,
            )
            .unwrap();
            assert_eq!(r.dimension, 6, "ternary dimension for (3,1)");
            assert_eq!(exact(&r.min_distance), 6, "ternary min distance for (3,1)");
        },
    );
}

#[test]
fn criterion_4_type2_l4_table() {
    criterion(
        4,
        Duration::from_secs(120),
        "Type II ell=4 parameter table",
        || {
            let expect = [
                (2u32, 1u32, 15usize, 5usize, 6usize),
                (3, 1, 40, 15, 10),
                (2, 2, 85, 35, 10),
            ];
            for (p, s, n, dim, dmin) in expect {
                let g = type2_l4(p, s, FFunction::Builtin).unwrap();
                assert_eq!(g.n_var(), n, "n for ({p},{s})");
                assert_eq!(g.girth(), Some(8), "girth for ({p},{s})");
                let r = analyze(
                    &spec_for(Family::TypeIiL4, p, s),
                    Alphabet::Binary,
                    DEFAULT_ENUM_CAP,
                )
                .unwrap();
                assert_eq!(r.dimension, dim, "binary dimension for ({p},{s})");
                assert_eq!(
                    exact(&r.min_distance),
                    dmin,
                    "binary min distance for ({p},{s})"
                );
            }
        },
    );
}

#[test]
fn criterion_5_pary_pg_dimension_formula() {
    criterion(
        5,
        Duration::from_secs(30),
        "p-ary projective-plane dimension formula",
        || {
            for (p, s) in [(2u32, 1u32), (2, 2), (3, 1), (2, 3)] {
                let g = type2_l3(p, s).unwrap();
                let computed = g.to_matrix(p).dimension() as u64;
                let ps = (p as u64).pow(s);
                let formula = ps * ps + ps - ps * (p as u64 + 1).pow(s) / 2u64.pow(s);
                assert_eq!(computed, formula, "GF({p}) rank formula for ({p},{s})");
            }
        },
    );
}

#[test]
fn criterion_6_tree_bounds() {
    criterion(6, Duration::from_secs(5), "tree-bound values", || {
        assert_eq!(tree_bound(3, 6).unwrap(), 4);
        assert_eq!(tree_bound(3, 8).unwrap(), 6);
        assert_eq!(tree_bound(3, 10).unwrap(), 10);
        for s in 1..=4u32 {
            let d = 2usize.pow(s) + 1;
            assert_eq!(
                tree_bound(d, 6).unwrap(),
                2usize.pow(s) + 2,
                "T(2^{s}+1, 6)"
            );
        }
        assert_eq!(tree_bound(3, 12).unwrap(), 14);
        println!(
            "  note: T(3,12) = 14 per the degree/girth formula; the published \
             summary table prints 18 for those rows"
        );
    });
}

#[test]
fn criterion_7_witness_codewords() {
    criterion(
        7,
        Duration::from_secs(10),
        "witness codewords: syndromes and tight distance equality",
        || {
            let cases: Vec<(WitnessFamily, u32, u32, Alphabet)> = vec![
                (WitnessFamily::TypeIb, 2, 1, Alphabet::Binary),
                (WitnessFamily::TypeIb, 3, 1, Alphabet::Binary),
                (WitnessFamily::TypeIb, 2, 2, Alphabet::Binary),
                (WitnessFamily::TypeIb, 5, 1, Alphabet::Binary),
                (WitnessFamily::TypeIb, 7, 1, Alphabet::Binary),
                (WitnessFamily::TypeIb, 2, 3, Alphabet::Binary),
                (WitnessFamily::TypeIb, 3, 2, Alphabet::Binary),
                (WitnessFamily::TypeIb, 3, 1, Alphabet::Pary),
                (WitnessFamily::TypeIb, 5, 1, Alphabet::Pary),
                (WitnessFamily::TypeIb, 7, 1, Alphabet::Pary),
                (WitnessFamily::TypeIb, 3, 2, Alphabet::Pary),
                (WitnessFamily::TypeIiL3, 2, 1, Alphabet::Binary),
                (WitnessFamily::TypeIiL3, 2, 2, Alphabet::Binary),
                (WitnessFamily::TypeIiL3, 2, 3, Alphabet::Binary),
                (WitnessFamily::TypeIiL3, 2, 4, Alphabet::Binary),
                (WitnessFamily::TypeIiL3, 3, 1, Alphabet::Pary),
                (WitnessFamily::TypeIiL3, 5, 1, Alphabet::Pary),
                (WitnessFamily::TypeIiL3, 7, 1, Alphabet::Pary),
                (WitnessFamily::TypeIiL3, 3, 2, Alphabet::Pary),
            ];
            for (family, p, s, alphabet) in cases {
                let word = witness_codeword(family, p, s, alphabet).unwrap();
                let graph = match family {
                    WitnessFamily::TypeIb => type1b(p, s).unwrap(),
                    WitnessFamily::TypeIiL3 => type2_l3(p, s).unwrap(),
                };
                let modulus = if alphabet == Alphabet::Binary { 2 } else { p };
                assert!(
                    graph.to_matrix(modulus).is_codeword(&word).unwrap(),
                    "nonzero syndrome for {family:?} ({p},{s}) {alphabet:?}"
                );
            }
            // Tightness for the binary projective-plane codes: the witness
            // weight 2^s + 2 equals the computed minimum distance exactly.
            for s in 1..=3u32 {
                let word =
                    witness_codeword(WitnessFamily::TypeIiL3, 2, s, Alphabet::Binary).unwrap();
                let weight = word.iter().filter(|&&x| x != 0).count();
                assert_eq!(weight, 2usize.pow(s) + 2, "witness weight for (2,{s})");
                let r = analyze(
                    &spec_for(Family::TypeIiL3, 2, s),
                    Alphabet::Binary,
                    DEFAULT_ENUM_CAP,
                )
                .unwrap();
                assert_eq!(exact(&r.min_distance), weight, "d_min equality for (2,{s})");
            }
        },
    );
}

#[test]
fn criterion_8_pseudoweights() {
    criterion(
        8,
        Duration::from_secs(300),
        "pseudocodeword weights and cover properties",
        || {
            // (a) the PSC weight of a plain codeword is its Hamming weight,
            // exhaustively over three codes.
            let codes: Vec<(GFMatrix, u32)> = vec![
                (type2_l3(2, 1).unwrap().to_matrix(2), 2),
                (type1b(3, 1).unwrap().to_matrix(2), 2),
                (type2_l3(3, 1).unwrap().to_matrix(3), 3),
            ];
            for (h, p) in codes {
                for word in all_codewords(&h) {
                    let weight = word.iter().filter(|&&x| x != 0).count();
                    let f = Pseudocodeword::from_codeword(&word, p);
                    assert_eq!(
                        f.psc_weight(),
                        weight,
                        "Hamming reduction failed on {word:?}"
                    );
                }
            }
            // (b) 200 seeded random 2- and 3-covers of the 7-node graph: every
            // extracted pseudocodeword clears the tree bound and satisfies the
            // local check inequality.
            let base = type2_l3(2, 1).unwrap();
            let bound = tree_bound(3, 6).unwrap();
            assert_eq!(bound, 4);
            let mut pool: Vec<Pseudocodeword> = Vec::new();
            let mut covers = 0usize;
            for m in [2usize, 3] {
                let samples = sample_cover_pseudoweights(&base, 2, m, 100, 97).unwrap();
                covers += samples.len();
                for sample in samples {
                    assert!(!sample.partial, "cover small enough to enumerate");
                    for (f, weight) in sample.pseudocodewords {
                        assert!(
                            weight >= bound,
                            "pseudocodeword weight {weight} below tree bound {bound}"
                        );
                        assert!(
                            f.local_check_inequality_holds(&base),
                            "local check inequality violated"
                        );
                        pool.push(f);
                    }
                }
            }
            assert!(covers >= 200, "need at least 200 covers, got {covers}");
            // (c) the weight-defining received vector makes the decoder prefer F
            // over the all-zero codeword, for at least 50 sampled matrices.
            assert!(
                pool.len() >= 50,
                "need at least 50 pseudocodewords, got {}",
                pool.len()
            );
            for f in pool.iter().take(200) {
                let r = f.weight_defining_received();
                assert!(
                    prefers_over_zero(&r, f).unwrap(),
                    "decoder preference failed"
                );
            }
        },
    );
}

#[test]
fn criterion_9_decoder_properties() {
    criterion(
        9,
        Duration::from_secs(600),
        "decoder fixed points, corrections, BER ordering",
        || {
            // (a) codeword fixed points and noiseless identities.
            let pg = type2_l3(2, 1).unwrap();
            let pg_mp = MessagePassing::new(&pg);
            let codeword = pg
                .to_matrix(2)
                .nullspace_basis()
                .into_iter()
                .find(|w| w.iter().any(|&x| x != 0))
                .unwrap();
            let llr: Vec<f64> = codeword
                .iter()
                .map(|&b| if b == 0 { 4.0 } else { -4.0 })
                .collect();
            for result in [pg_mp.min_sum(&llr, 100), pg_mp.sum_product(&llr, 100)] {
                assert!(result.converged && result.iterations == 1);
                assert_eq!(result.word, codeword);
            }
            let tern = type1b(3, 1).unwrap();
            let tern_mp = MessagePassing::new(&tern);
            let tern_word = tern
                .to_matrix(3)
                .nullspace_basis()
                .into_iter()
                .find(|w| w.iter().any(|&x| x != 0))
                .unwrap();
            let noiseless = Psc::new(3, 0.0).unwrap().likelihoods(&tern_word);
            let res = tern_mp.sum_product_pary(3, &noiseless, 100);
            assert!(res.converged && res.iterations == 1);
            assert_eq!(res.word, tern_word);

            // (b) exhaustive single-error correction.
            for flip in 0..7 {
                let mut noisy = llr.clone();
                noisy[flip] = -noisy[flip];
                for result in [pg_mp.min_sum(&noisy, 100), pg_mp.sum_product(&noisy, 100)] {
                    assert!(result.converged, "flip {flip} not converged");
                    assert_eq!(result.word, codeword, "flip {flip} miscorrected");
                }
            }
            let chan = Psc::new(3, 0.1).unwrap();
            for pos in 0..10 {
                for wrong in 1..3u8 {
                    let mut received = vec![0u8; 10];
                    received[pos] = wrong;
                    let res = tern_mp.sum_product_pary(3, &chan.likelihoods(&received), 200);
                    assert!(
                        res.converged && res.word == vec![0u8; 10],
                        "error {pos}->{wrong}"
                    );
                }
            }

            // (c) BER strictly decreasing over 2/4/6 dB with non-overlapping 95%
            // confidence intervals, at >= 100 frame-error events per point.
            let graph21 = type2_l3(2, 2).unwrap();
            let code = SimCode {
                family: "type2l3".into(),
                graph: graph21,
                p: 2,
                k: 11,
            };
            for decoder in [DecoderKind::MinSum, DecoderKind::SumProduct] {
                let mut cfg = SimConfig::new(
                    code.clone(),
                    decoder,
                    ChannelGrid::Awgn(vec![2.0, 4.0, 6.0]),
                );
                cfg.max_iter = 200;
                cfg.max_frames = 60_000_000;
                cfg.min_error_events = 100;
                cfg.seed = 2024;
                let res = run(&cfg).unwrap();
                let mut previous: Option<(f64, f64)> = None;
                for (i, pt) in res.points.iter().enumerate() {
                    assert!(
                        pt.frame_errors >= 100,
                        "not enough error events at point {i}"
                    );
                    // (d) conservation in every run.
                    assert_eq!(pt.detected + pt.undetected, pt.frame_errors);
                    let ber = res.ber(i);
                    let bits = (pt.frames * res.n as u64) as f64;
                    let ci = 1.96 * (ber * (1.0 - ber) / bits).sqrt();
                    if let Some((prev_ber, prev_ci)) = previous {
                        assert!(
                        prev_ber - prev_ci > ber + ci,
                        "{:?}: BER at point {i} not separated: {prev_ber}+-{prev_ci} vs {ber}+-{ci}",
                        decoder
                    );
                    }
                    previous = Some((ber, ci));
                }
            }
        },
    );
}

#[test]
fn criterion_10_simulation_determinism() {
    criterion(
        10,
        Duration::from_secs(60),
        "byte-identical CSV across worker counts",
        || {
            let graph = type2_l3(2, 1).unwrap();
            let code = SimCode {
                family: "type2l3".into(),
                graph,
                p: 2,
                k: 3,
            };
            let mut cfg =
                SimConfig::new(code, DecoderKind::MinSum, ChannelGrid::Awgn(vec![2.0, 4.0]));
            cfg.max_frames = 20_000;
            cfg.min_error_events = 50;
            cfg.seed = 99;
            cfg.workers = 1;
            let single = emit_csv(&run(&cfg).unwrap());
            cfg.workers = 8;
            let multi = emit_csv(&run(&cfg).unwrap());
            assert_eq!(single, multi, "CSV differs between 1 and 8 workers");
            // And a p-ary sweep for the other decoder path.
            let graph = type1b(3, 1).unwrap();
            let code = SimCode {
                family: "type1b".into(),
                graph,
                p: 3,
                k: 2,
            };
            let mut cfg = SimConfig::new(
                code,
                DecoderKind::SumProductPary,
                ChannelGrid::Psc(vec![0.05, 0.1]),
            );
            cfg.max_frames = 10_000;
            cfg.min_error_events = 50;
            cfg.seed = 7;
            cfg.workers = 1;
            let single = emit_csv(&run(&cfg).unwrap());
            cfg.workers = 5;
            let multi = emit_csv(&run(&cfg).unwrap());
            assert_eq!(single, multi);
        },
    );
}
