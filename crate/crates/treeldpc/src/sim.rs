//! Seeded Monte-Carlo decoding simulation: BER/SER/FER sweeps over channel
//! grids with detected/undetected error accounting and deterministic
//! parallelism.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::channel::{frame_rng, BiAwgn, Psc};
use crate::decode::MessagePassing;
use crate::error::{Error, Result};
use crate::tanner::TannerGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecoderKind {
    MinSum,
    SumProduct,
    SumProductPary,
}

impl DecoderKind {
    pub fn parse(name: &str) -> Result<DecoderKind> {
        match name.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "minsum" | "ms" => Ok(DecoderKind::MinSum),
            "sumproduct" | "sp" | "spa" => Ok(DecoderKind::SumProduct),
            "paryspa" | "parysumproduct" | "spq" => Ok(DecoderKind::SumProductPary),
            other => Err(Error::InvalidSimConfig(format!(
                "unknown decoder {other:?}"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DecoderKind::MinSum => "minsum",
            DecoderKind::SumProduct => "sumproduct",
            DecoderKind::SumProductPary => "paryspa",
        }
    }
}

/// Channel sweep: Eb/N0 points in dB for the AWGN channel, or transition
/// probabilities for the p-ary symmetric channel.
#[derive(Clone, Debug)]
pub enum ChannelGrid {
    Awgn(Vec<f64>),
    Psc(Vec<f64>),
}

impl ChannelGrid {
    fn name(&self) -> &'static str {
        match self {
            ChannelGrid::Awgn(_) => "awgn",
            ChannelGrid::Psc(_) => "psc",
        }
    }

    fn points(&self) -> &[f64] {
        match self {
            ChannelGrid::Awgn(v) | ChannelGrid::Psc(v) => v,
        }
    }
}

/// BER denominator convention: transmitted code symbols or information
/// symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BerDenominator {
    PerCodeBit,
    PerInfoBit,
}

/// The code under simulation.
#[derive(Clone, Debug)]
pub struct SimCode {
    pub family: String,
    pub graph: TannerGraph,
    /// Code alphabet size (2 for binary decoding).
    pub p: u32,
    /// Code dimension, for the CSV and the per-info-bit denominator.
    pub k: usize,
}

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub code: SimCode,
    pub decoder: DecoderKind,
    pub channel: ChannelGrid,
    pub max_iter: usize,
    pub max_frames: u64,
    pub min_error_events: u64,
    pub seed: u64,
    pub workers: usize,
    pub ber_denom: BerDenominator,
    /// Transmitted codeword; all-zero when absent.
    pub transmit_word: Option<Vec<u8>>,
}

impl SimConfig {
    pub fn new(code: SimCode, decoder: DecoderKind, channel: ChannelGrid) -> SimConfig {
        SimConfig {
            code,
            decoder,
            channel,
            max_iter: 200,
            max_frames: 1_000_000,
            min_error_events: 100,
            seed: 0,
            workers: 1,
            ber_denom: BerDenominator::PerCodeBit,
            transmit_word: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.channel.points().is_empty() {
            return Err(Error::InvalidSimConfig("empty channel grid".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidSimConfig("max_iter must be >= 1".into()));
        }
        if self.min_error_events == 0 {
            return Err(Error::InvalidSimConfig(
                "min_error_events must be >= 1".into(),
            ));
        }
        if self.workers == 0 {
            return Err(Error::InvalidSimConfig("workers must be >= 1".into()));
        }
        match (&self.decoder, &self.channel) {
            (DecoderKind::MinSum | DecoderKind::SumProduct, ChannelGrid::Awgn(_)) => {}
            (DecoderKind::SumProductPary, ChannelGrid::Psc(_)) => {}
            (d, c) => {
                return Err(Error::InvalidSimConfig(format!(
                    "decoder {} does not run on the {} channel",
                    d.name(),
                    c.name()
                )))
            }
        }
        if matches!(self.decoder, DecoderKind::MinSum | DecoderKind::SumProduct) && self.code.p != 2
        {
            return Err(Error::InvalidSimConfig("binary decoders need p = 2".into()));
        }
        if let Some(word) = &self.transmit_word {
            if word.len() != self.code.graph.n_var() {
                return Err(Error::InvalidSimConfig(
                    "transmit word length mismatch".into(),
                ));
            }
            let h = self.code.graph.to_matrix(self.code.p);
            if !h.is_codeword(word)? {
                return Err(Error::InvalidSimConfig(
                    "transmit word is not a codeword".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Aggregated statistics for one channel point.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PointResult {
    pub frames: u64,
    pub bit_errors: u64,
    pub symbol_errors: u64,
    pub frame_errors: u64,
    pub detected: u64,
    pub undetected: u64,
    pub iter_sum: u64,
}

impl PointResult {
    fn absorb(&mut self, o: FrameOutcome) {
        self.frames += 1;
        self.bit_errors += o.symbol_errors as u64;
        self.symbol_errors += o.symbol_errors as u64;
        self.iter_sum += o.iterations as u64;
        if o.detected {
            self.detected += 1;
            self.frame_errors += 1;
        } else if o.symbol_errors > 0 {
            self.undetected += 1;
            self.frame_errors += 1;
        }
    }

    pub fn fer(&self) -> f64 {
        self.frame_errors as f64 / self.frames.max(1) as f64
    }

    pub fn avg_iters(&self) -> f64 {
        self.iter_sum as f64 / self.frames.max(1) as f64
    }
}

#[derive(Clone, Debug)]
pub struct SimResult {
    pub family: String,
    pub n: usize,
    pub k: usize,
    pub p: u32,
    pub decoder: DecoderKind,
    pub channel: &'static str,
    pub seed: u64,
    pub ber_denom: BerDenominator,
    pub params: Vec<f64>,
    pub points: Vec<PointResult>,
}

impl SimResult {
    pub fn ber(&self, i: usize) -> f64 {
        let denom = match self.ber_denom {
            BerDenominator::PerCodeBit => self.n as u64,
            BerDenominator::PerInfoBit => self.k.max(1) as u64,
        };
        self.points[i].bit_errors as f64 / (self.points[i].frames.max(1) * denom) as f64
    }

    pub fn ser(&self, i: usize) -> f64 {
        self.points[i].symbol_errors as f64 / (self.points[i].frames.max(1) * self.n as u64) as f64
    }
}

#[derive(Clone, Copy, Debug)]
struct FrameOutcome {
    symbol_errors: u32,
    detected: bool,
    iterations: u32,
}

/// Frames per scheduling batch. Aggregation runs in frame order batch by
/// batch, so results do not depend on the worker count.
const BATCH: u64 = 1024;

pub fn run(cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let graph = &cfg.code.graph;
    let n = graph.n_var();
    let mp = MessagePassing::new(graph);
    let tx: Vec<u8> = cfg.transmit_word.clone().unwrap_or_else(|| vec![0u8; n]);
    let rate = cfg.code.k as f64 / n as f64;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidSimConfig(format!("thread pool: {e}")))?;
    let mut points = Vec::new();
    for (pi, &param) in cfg.channel.points().iter().enumerate() {
        let mut acc = PointResult::default();
        let awgn = match cfg.channel {
            ChannelGrid::Awgn(_) => Some(BiAwgn::new(param, rate)?),
            ChannelGrid::Psc(_) => None,
        };
        let psc = match cfg.channel {
            ChannelGrid::Psc(_) => Some(Psc::new(cfg.code.p, param)?),
            ChannelGrid::Awgn(_) => None,
        };
        let mut next_frame = 0u64;
        while next_frame < cfg.max_frames && acc.frame_errors < cfg.min_error_events {
            let end = (next_frame + BATCH).min(cfg.max_frames);
            let outcomes: Vec<FrameOutcome> = pool.install(|| {
                (next_frame..end)
                    .into_par_iter()
                    .map(|f| {
                        simulate_frame(cfg, &mp, &tx, awgn.as_ref(), psc.as_ref(), pi as u64, f)
                    })
                    .collect()
            });
            for o in outcomes {
                acc.absorb(o);
            }
            next_frame = end;
        }
        eprintln!(
            "point {}={param}: frames={} frame_errors={} (detected={} undetected={}) avg_iters={:.2}",
            if awgn.is_some() { "ebn0_db" } else { "epsilon" },
            acc.frames,
            acc.frame_errors,
            acc.detected,
            acc.undetected,
            acc.avg_iters()
        );
        points.push(acc);
    }
    Ok(SimResult {
        family: cfg.code.family.clone(),
        n,
        k: cfg.code.k,
        p: cfg.code.p,
        decoder: cfg.decoder,
        channel: cfg.channel.name(),
        seed: cfg.seed,
        ber_denom: cfg.ber_denom,
        params: cfg.channel.points().to_vec(),
        points,
    })
}

fn simulate_frame(
    cfg: &SimConfig,
    mp: &MessagePassing,
    tx: &[u8],
    awgn: Option<&BiAwgn>,
    psc: Option<&Psc>,
    point: u64,
    frame: u64,
) -> FrameOutcome {
    let mut rng = frame_rng(cfg.seed, point, frame);
    let result = if let Some(chan) = awgn {
        let y = chan.transmit(tx, &mut rng);
        let llr = chan.llrs(&y);
        match cfg.decoder {
            DecoderKind::MinSum => mp.min_sum(&llr, cfg.max_iter),
            DecoderKind::SumProduct => mp.sum_product(&llr, cfg.max_iter),
            DecoderKind::SumProductPary => unreachable!("validated"),
        }
    } else {
        let chan = psc.expect("one channel");
        let received = chan.transmit(tx, &mut rng);
        let lik = chan.likelihoods(&received);
        mp.sum_product_pary(cfg.code.p, &lik, cfg.max_iter)
    };
    let symbol_errors = result.word.iter().zip(tx).filter(|(a, b)| a != b).count() as u32;
    FrameOutcome {
        symbol_errors,
        detected: !result.converged,
        iterations: result.iterations as u32,
    }
}

/// CSV with one row per grid point and a fixed header; counts are exact
/// integers, rates carry fixed precision.
pub fn emit_csv(res: &SimResult) -> String {
    let mut out = String::from(
        "family,n,k,p,decoder,channel,param,frames,bit_errors,ber,ser,fer,detected,undetected,avg_iters,seed\n",
    );
    for (i, pt) in res.points.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{:.6},{},{},{:.6e},{:.6e},{:.6e},{},{},{:.4},{}",
            res.family,
            res.n,
            res.k,
            res.p,
            res.decoder.name(),
            res.channel,
            res.params[i],
            pt.frames,
            pt.bit_errors,
            res.ber(i),
            res.ser(i),
            pt.fer(),
            pt.detected,
            pt.undetected,
            pt.avg_iters(),
            res.seed,
        );
    }
    out
}
