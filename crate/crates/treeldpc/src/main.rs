//! Command-line front end: construction, structural analysis, bounds,
//! witness codewords, pseudoweight sampling, simulation, and alist export.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use treeldpc::config::Config;
use treeldpc::construct::{witness_codeword, Alphabet, ConstructionSpec, Family, WitnessFamily};
use treeldpc::error::{Error, Result};
use treeldpc::linalg::{MinDistance, DEFAULT_ENUM_CAP};
use treeldpc::pseudo::{sample_cover_pseudoweights, tree_bound};
use treeldpc::report::analyze;
use treeldpc::sim::{emit_csv, run, BerDenominator, ChannelGrid, DecoderKind, SimCode, SimConfig};

#[derive(Parser)]
#[command(
    name = "treeldpc",
    version,
    about = "Tree-based LDPC codes: construction, analysis, and iterative-decoding simulation"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph and print its basic parameters
    Construct(ConstructCmd),
    /// Full structural report (girth, diameter, dimension, distance, bounds)
    Analyze(AnalyzeCmd),
    /// Minimum distance of an instance
    Mindist(MindistCmd),
    /// Tree lower bound T(d, g)
    Bound(BoundCmd),
    /// Explicit low-weight witness codeword with syndrome verification
    Witness(WitnessCmd),
    /// Sample random covers and report pseudocodeword weights
    PseudoSample(PseudoSampleCmd),
    /// Monte-Carlo decoding simulation; CSV on stdout
    Simulate(SimulateCmd),
    /// Write an instance in MacKay alist format
    ExportAlist(ExportAlistCmd),
}

/// Construction selection shared by most subcommands: either flags or a
/// key=value config file, with flags taking precedence.
#[derive(Args, Clone)]
struct BuildArgs {
    /// type1a | type1b | type2l3 | type2l4 | eg2
    #[arg(long)]
    family: Option<String>,
    /// Tree depth for type1a (3..=6 with built-in permutations)
    #[arg(long)]
    ell: Option<u32>,
    /// Field characteristic (prime)
    #[arg(long)]
    p: Option<u32>,
    /// Field extension degree (default 1)
    #[arg(long)]
    s: Option<u32>,
    /// key=value config file supplying any of the flags
    #[arg(long)]
    config: Option<PathBuf>,
}

impl BuildArgs {
    fn config(&self) -> Result<Config> {
        let mut cfg = match &self.config {
            Some(path) => Config::parse(&std::fs::read_to_string(path)?)?,
            None => Config::default(),
        };
        if self.family.is_some() {
            cfg.family = self.family.clone();
        }
        if self.ell.is_some() {
            cfg.ell = self.ell;
        }
        if self.p.is_some() {
            cfg.p = self.p;
        }
        if self.s.is_some() {
            cfg.s = self.s;
        }
        Ok(cfg)
    }

    fn spec(&self) -> Result<ConstructionSpec> {
        self.config()?.construction_spec()
    }
}

fn parse_alphabet(text: &str) -> Result<Alphabet> {
    match text.to_ascii_lowercase().as_str() {
        "binary" | "2" => Ok(Alphabet::Binary),
        "pary" | "p-ary" | "p" => Ok(Alphabet::Pary),
        other => Err(Error::InvalidParams(format!("unknown alphabet {other:?}"))),
    }
}

#[derive(Args)]
struct ConstructCmd {
    #[command(flatten)]
    build: BuildArgs,
    /// Also write the alist here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeCmd {
    #[command(flatten)]
    build: BuildArgs,
    /// binary | pary
    #[arg(long, default_value = "binary")]
    alphabet: String,
    /// Codeword-enumeration cap for the exact distance
    #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
    cap: u64,
    /// key=value output instead of prose
    #[arg(long)]
    machine: bool,
}

#[derive(Args)]
struct MindistCmd {
    #[command(flatten)]
    build: BuildArgs,
    #[arg(long, default_value = "binary")]
    alphabet: String,
    #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
    cap: u64,
}

#[derive(Args)]
struct BoundCmd {
    /// Smallest variable degree
    #[arg(long, conflicts_with = "family")]
    d: Option<usize>,
    /// Girth (even, >= 6)
    #[arg(long, conflicts_with = "family")]
    g: Option<usize>,
    #[command(flatten)]
    build: BuildArgs,
}

#[derive(Args)]
struct WitnessCmd {
    #[command(flatten)]
    build: BuildArgs,
    #[arg(long, default_value = "binary")]
    alphabet: String,
}

#[derive(Args)]
struct PseudoSampleCmd {
    #[command(flatten)]
    build: BuildArgs,
    #[arg(long, default_value = "binary")]
    alphabet: String,
    /// Cover degree
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Dump the minimum-weight pseudocodeword here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateCmd {
    #[command(flatten)]
    build: BuildArgs,
    /// minsum | sumproduct | paryspa
    #[arg(long)]
    decoder: Option<String>,
    /// Comma-separated Eb/N0 grid in dB (AWGN channel)
    #[arg(long, value_delimiter = ',')]
    ebn0: Option<Vec<f64>>,
    /// Comma-separated transition probabilities (p-ary symmetric channel)
    #[arg(long, value_delimiter = ',')]
    epsilon: Option<Vec<f64>>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    max_frames: Option<u64>,
    /// Stop a grid point after this many frame errors
    #[arg(long)]
    min_errors: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// BER denominator: n (code bits) or k (information bits)
    #[arg(long)]
    ber_denom: Option<String>,
}

#[derive(Args)]
struct ExportAlistCmd {
    #[command(flatten)]
    build: BuildArgs,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Construct(args) => construct(args),
        Command::Analyze(args) => analyze_cmd(args),
        Command::Mindist(args) => mindist(args),
        Command::Bound(args) => bound(args),
        Command::Witness(args) => witness(args),
        Command::PseudoSample(args) => pseudo_sample(args),
        Command::Simulate(args) => simulate(args),
        Command::ExportAlist(args) => export_alist(args),
    }
}

fn construct(args: ConstructCmd) -> Result<()> {
    let spec = args.build.spec()?;
    if spec.family == Family::TypeIa && spec.ell == Some(7) {
        eprintln!(
            "note: no permutations reach girth 14 at ell = 7; the graph tops out at girth 12"
        );
    }
    let g = spec.build()?;
    println!("code={}", spec.describe());
    println!("n={}", g.n_var());
    println!("m={}", g.n_chk());
    println!("edges={}", g.n_edges());
    println!(
        "degree={}",
        g.regular_degree()
            .map_or_else(|| "irregular".into(), |d| d.to_string())
    );
    println!(
        "girth={}",
        g.girth().map_or_else(|| "inf".into(), |x| x.to_string())
    );
    if let Some(path) = args.out {
        std::fs::write(&path, g.to_alist())?;
        println!("alist={}", path.display());
    }
    Ok(())
}

fn analyze_cmd(args: AnalyzeCmd) -> Result<()> {
    let spec = args.build.spec()?;
    let report = analyze(&spec, parse_alphabet(&args.alphabet)?, args.cap)?;
    if args.machine {
        print!("{}", report.machine_format());
    } else {
        print!("{}", report.human_format());
    }
    Ok(())
}

fn mindist(args: MindistCmd) -> Result<()> {
    let spec = args.build.spec()?;
    let report = analyze(&spec, parse_alphabet(&args.alphabet)?, args.cap)?;
    match report.min_distance {
        MinDistance::Trivial => println!("d_min=trivial"),
        MinDistance::Exact(d) => println!("d_min={d} exact=true"),
        MinDistance::Bounds { lower, upper } => match upper {
            Some(u) => println!("d_min_lower={lower} d_min_upper={u} exact=false"),
            None => println!("d_min_lower={lower} exact=false"),
        },
    }
    Ok(())
}

fn bound(args: BoundCmd) -> Result<()> {
    let (d, g) = match (args.d, args.g) {
        (Some(d), Some(g)) => (d, g),
        (None, None) => {
            let spec = args.build.spec()?;
            let graph = spec.build()?;
            let girth = graph
                .girth()
                .ok_or_else(|| Error::InvalidParams("graph is a forest: no tree bound".into()))?;
            (graph.min_var_degree(), girth)
        }
        _ => {
            return Err(Error::InvalidParams(
                "bound needs both --d and --g, or a family".into(),
            ))
        }
    };
    println!("tree_bound={}", tree_bound(d, g)?);
    Ok(())
}

fn witness(args: WitnessCmd) -> Result<()> {
    let spec = args.build.spec()?;
    let family = match spec.family {
        Family::TypeIb => WitnessFamily::TypeIb,
        Family::TypeIiL3 => WitnessFamily::TypeIiL3,
        other => {
            return Err(Error::Unsupported(format!(
                "no witness construction for family {}",
                other.name()
            )))
        }
    };
    let alphabet = parse_alphabet(&args.alphabet)?;
    let p = spec
        .p
        .ok_or_else(|| Error::InvalidParams("missing parameter p".into()))?;
    let s = spec.s.unwrap_or(1);
    let word = witness_codeword(family, p, s, alphabet)?;
    let modulus = if alphabet == Alphabet::Binary { 2 } else { p };
    let h = spec.build()?.to_matrix(modulus);
    let ok = h.is_codeword(&word)?;
    let weight = word.iter().filter(|&&x| x != 0).count();
    println!(
        "code={} alphabet={} n={} weight={} syndrome={}",
        spec.describe(),
        modulus,
        word.len(),
        weight,
        if ok { "zero" } else { "NONZERO" }
    );
    println!(
        "word={}",
        word.iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
    if !ok {
        return Err(Error::InvalidParams(
            "witness has a nonzero syndrome".into(),
        ));
    }
    Ok(())
}

fn pseudo_sample(args: PseudoSampleCmd) -> Result<()> {
    let spec = args.build.spec()?;
    let graph = spec.build()?;
    let alphabet = parse_alphabet(&args.alphabet)?;
    let p = match alphabet {
        Alphabet::Binary => 2,
        Alphabet::Pary => spec
            .p
            .ok_or_else(|| Error::InvalidParams("missing parameter p".into()))?,
    };
    let samples = sample_cover_pseudoweights(&graph, p, args.m, args.trials, args.seed)?;
    let tree = match (graph.girth(), graph.min_var_degree()) {
        (Some(g), d) if g >= 6 && d >= 2 => Some(tree_bound(d, g)?),
        _ => None,
    };
    let mut best: Option<(usize, usize)> = None; // (weight, trial)
    let mut best_f = None;
    let mut partial = 0usize;
    for s in &samples {
        let min_w = s.pseudocodewords.iter().map(|(_, w)| *w).min();
        if let Some(w) = min_w {
            if best.is_none_or(|(bw, _)| w < bw) {
                best = Some((w, s.trial));
                best_f = s
                    .pseudocodewords
                    .iter()
                    .find(|(_, pw)| *pw == w)
                    .map(|(f, _)| f.clone());
            }
        }
        partial += s.partial as usize;
        println!(
            "trial={} pseudocodewords={} min_weight={}{}",
            s.trial,
            s.pseudocodewords.len(),
            min_w.map_or_else(|| "-".into(), |w| w.to_string()),
            if s.partial { " (sampled)" } else { "" }
        );
    }
    println!(
        "min_weight={} tree_bound={} trials={} partial_trials={partial}",
        best.map_or_else(|| "-".into(), |(w, _)| w.to_string()),
        tree.map_or_else(|| "-".into(), |t| t.to_string()),
        args.trials
    );
    if let (Some(path), Some(f)) = (args.out, best_f) {
        std::fs::write(&path, f.to_dump())?;
        println!("dump={}", path.display());
    }
    Ok(())
}

fn simulate(args: SimulateCmd) -> Result<()> {
    let cfg_file = args.build.config()?;
    let spec = cfg_file.construction_spec()?;
    let graph = spec.build()?;

    let decoder_name = args
        .decoder
        .or_else(|| cfg_file.decoder.clone())
        .ok_or_else(|| Error::InvalidSimConfig("missing decoder".into()))?;
    let decoder = DecoderKind::parse(&decoder_name)?;
    let p = match decoder {
        DecoderKind::SumProductPary => spec
            .p
            .ok_or_else(|| Error::InvalidParams("missing parameter p".into()))?,
        _ => 2,
    };
    let ebn0 = args.ebn0.or_else(|| cfg_file.ebn0.clone());
    let epsilon = args.epsilon.or_else(|| cfg_file.epsilon.clone());
    let channel = match (ebn0, epsilon) {
        (Some(grid), None) => ChannelGrid::Awgn(grid),
        (None, Some(grid)) => ChannelGrid::Psc(grid),
        (None, None) => {
            return Err(Error::InvalidSimConfig(
                "need an --ebn0 or --epsilon grid".into(),
            ))
        }
        (Some(_), Some(_)) => {
            return Err(Error::InvalidSimConfig(
                "give only one of --ebn0 and --epsilon".into(),
            ))
        }
    };
    let k = graph.to_matrix(p).dimension();
    let code = SimCode {
        family: spec.family.name().into(),
        graph,
        p,
        k,
    };
    let mut sim = SimConfig::new(code, decoder, channel);
    if let Some(v) = args.max_iter.or(cfg_file.max_iter) {
        sim.max_iter = v;
    }
    if let Some(v) = args.max_frames.or(cfg_file.max_frames) {
        sim.max_frames = v;
    }
    if let Some(v) = args.min_errors.or(cfg_file.min_errors) {
        sim.min_error_events = v;
    }
    if let Some(v) = args.seed.or(cfg_file.seed) {
        sim.seed = v;
    }
    if let Some(v) = args.workers.or(cfg_file.workers) {
        sim.workers = v;
    }
    if let Some(v) = args.ber_denom.or_else(|| cfg_file.ber_denom.clone()) {
        sim.ber_denom = match v.to_ascii_lowercase().as_str() {
            "n" | "code" => BerDenominator::PerCodeBit,
            "k" | "info" => BerDenominator::PerInfoBit,
            other => {
                return Err(Error::InvalidSimConfig(format!(
                    "unknown ber denominator {other:?}"
                )))
            }
        };
    }
    let result = run(&sim)?;
    print!("{}", emit_csv(&result));
    Ok(())
}

fn export_alist(args: ExportAlistCmd) -> Result<()> {
    let spec = args.build.spec()?;
    let g = spec.build()?;
    std::fs::write(&args.out, g.to_alist())?;
    Ok(())
}
