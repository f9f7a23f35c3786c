//! Thin command-line wrapper: argument parsing and exit-code mapping only;
//! all report logic lives in the library.

use clap::{Parser, Subcommand, ValueEnum};
use designgap::architectures::BrickworkVariant;
use designgap::cli::{self, Command as RunCommand, Format, GateSpec, GraphSpec, RunConfig};

#[derive(Parser)]
#[command(
    name = "designgap",
    version,
    about = "Spectral gaps of moment operators for stochastic quantum circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Sum,
    Product,
}

#[derive(Parser)]
struct Common {
    /// Gate families: names (ISWAP, CHI, ...) or triples "kx,ky,kz"
    #[arg(long, value_delimiter = ';')]
    gates: Vec<String>,
    /// Graphs: complete, star, ring, path, or custom:FILE
    #[arg(long, value_delimiter = ',')]
    graphs: Vec<String>,
    /// Vertex counts: single values, comma lists, or ranges like 4..7
    #[arg(long, value_delimiter = ',')]
    n: Vec<String>,
    /// Moment order
    #[arg(long, default_value_t = 2)]
    t: usize,
    /// Design accuracy for depth estimates
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    /// Perturbation half-widths
    #[arg(long, value_delimiter = ',')]
    delta: Vec<f64>,
    /// Grid resolution (Weyl lattice, optimizer, or parameter grids)
    #[arg(long, default_value_t = 10)]
    grid: usize,
    /// RNG seed; falls back to DESIGNGAP_SEED, then 1
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Output path (stdout when absent)
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Worker-thread cap for sweeps
    #[arg(long)]
    jobs: Option<usize>,
    /// Tolerance overrides, name=value
    #[arg(long, value_delimiter = ',')]
    tol: Vec<String>,
    /// Monte-Carlo sample count
    #[arg(long, default_value_t = 50)]
    samples: usize,
}

#[derive(Subcommand)]
enum Sub {
    /// Canonical table of named 2-qubit gate families
    GadgetTable(Common),
    /// Gap sweeps over graphs and sizes
    GraphGaps(Common),
    /// Brickwork layer analysis
    Brickwork {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = VariantArg::Product)]
        variant: VariantArg,
    },
    /// Whole-layer model with repeated raw gate applications
    WholeLayer {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        reps: usize,
    },
    /// Closed-form scan over the Weyl chamber lattice
    WeylScan(Common),
    /// Optimized Hadamard + phase ensemble on one qubit
    Heuristic1q(Common),
    /// Optimized CNOT + Hadamard + phase ensemble on two qubits
    Heuristic2q(Common),
    /// Two-gate Haar-random baseline statistics
    HaarBaseline(Common),
    /// Moment matrices and spectra of named 3-qubit gates
    ThreeLocal(Common),
    /// Clifford + phase analysis
    CliffordPhase {
        #[command(flatten)]
        common: Common,
        /// optimum | grid | oracle
        #[arg(long, default_value = "optimum")]
        mode: String,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        c: f64,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
    },
    /// Worst-case KAK-coefficient perturbation sweeps
    Perturb(Common),
    /// Order-4 exactness obstruction certificate
    No4design(Common),
}

fn parse_n_values(specs: &[String]) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for s in specs {
        if let Some((lo, hi)) = s.split_once("..") {
            let lo: usize = lo.trim().parse().map_err(|_| format!("bad range {s:?}"))?;
            let hi: usize = hi.trim().parse().map_err(|_| format!("bad range {s:?}"))?;
            out.extend(lo..=hi);
        } else {
            out.push(s.trim().parse().map_err(|_| format!("bad count {s:?}"))?);
        }
    }
    Ok(out)
}

fn build_config(command: RunCommand, common: &Common) -> Result<RunConfig, String> {
    let mut config = RunConfig { command, ..RunConfig::default() };
    config.gates =
        common.gates.iter().map(|g| GateSpec::parse(g)).collect::<Result<Vec<_>, _>>()?;
    config.graphs =
        common.graphs.iter().map(|g| GraphSpec::parse(g)).collect::<Result<Vec<_>, _>>()?;
    config.n_values = parse_n_values(&common.n)?;
    config.t = common.t;
    config.epsilon = common.epsilon;
    if !common.delta.is_empty() {
        config.delta = common.delta.clone();
    }
    config.grid = common.grid;
    config.seed = common
        .seed
        .or_else(|| std::env::var("DESIGNGAP_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(1);
    config.format = match common.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    config.out = common.out.clone();
    config.jobs = common.jobs;
    config.samples = common.samples;
    for spec in &common.tol {
        let (k, v) = spec.split_once('=').ok_or_else(|| format!("bad tolerance {spec:?}"))?;
        let v: f64 = v.parse().map_err(|_| format!("bad tolerance value {spec:?}"))?;
        config.tolerances.insert(k.to_string(), v);
    }
    Ok(config)
}

fn main() {
    let cli = Cli::parse();
    let built = match &cli.command {
        Sub::GadgetTable(c) => build_config(RunCommand::GadgetTable, c),
        Sub::GraphGaps(c) => build_config(RunCommand::GraphGaps, c),
        Sub::Brickwork { common, variant } => {
            build_config(RunCommand::Brickwork, common).map(|mut cfg| {
                cfg.variant = match variant {
                    VariantArg::Sum => BrickworkVariant::Sum,
                    VariantArg::Product => BrickworkVariant::Product,
                };
                cfg
            })
        }
        Sub::WholeLayer { common, reps } => {
            build_config(RunCommand::WholeLayer, common).map(|mut cfg| {
                cfg.reps = *reps;
                cfg
            })
        }
        Sub::WeylScan(c) => build_config(RunCommand::WeylScan, c),
        Sub::Heuristic1q(c) => build_config(RunCommand::Heuristic1q, c),
        Sub::Heuristic2q(c) => build_config(RunCommand::Heuristic2q, c),
        Sub::HaarBaseline(c) => build_config(RunCommand::HaarBaseline, c),
        Sub::ThreeLocal(c) => build_config(RunCommand::ThreeLocal, c),
        Sub::CliffordPhase { common, mode, c, p } => {
            build_config(RunCommand::CliffordPhase, common).map(|mut cfg| {
                cfg.mode = mode.clone();
                cfg.c_param = *c;
                cfg.p_param = *p;
                cfg
            })
        }
        Sub::Perturb(c) => build_config(RunCommand::Perturb, c),
        Sub::No4design(c) => build_config(RunCommand::No4Design, c),
    };
    match built {
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
        Ok(config) => std::process::exit(cli::execute(&config)),
    }
}
