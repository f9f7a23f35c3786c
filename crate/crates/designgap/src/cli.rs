//! Batch front end: one command per table/sweep family, emitting
//! machine-readable CSV or JSON reports.
//!
//! Reports are deterministic byte-for-byte given the same configuration and
//! seed: numeric cells are printed with 9 significant digits, row order is
//! fixed, and parallel sweeps collect in input order. Exit status is 0 on
//! success, 2 on validation errors, and 3 when a numerical assertion against
//! a pinned reference value fails.

use crate::architectures::{self, BrickworkVariant, CircuitGraph, GraphKind};
use crate::clifford_phase::{self, CliffordPhaseParams};
use crate::ensembles;
use crate::gadget::{self, ThreeQubitGate};
use crate::kak::{self, KakCoefficients, NamedGate};
use crate::linalg;
use crate::perturb::{self, PerturbationSpec};
use crate::spectra;
use rand::SeedableRng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0:?}")]
    InvalidConfig(Vec<String>),
    #[error("numerical assertion failed: {0:?}")]
    AssertionFailure(Vec<String>),
    #[error("computation failed: {0}")]
    Computation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    GadgetTable,
    GraphGaps,
    Brickwork,
    WholeLayer,
    WeylScan,
    Heuristic1q,
    Heuristic2q,
    HaarBaseline,
    ThreeLocal,
    CliffordPhase,
    Perturb,
    No4Design,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::GadgetTable => "gadget-table",
            Command::GraphGaps => "graph-gaps",
            Command::Brickwork => "brickwork",
            Command::WholeLayer => "whole-layer",
            Command::WeylScan => "weyl-scan",
            Command::Heuristic1q => "heuristic-1q",
            Command::Heuristic2q => "heuristic-2q",
            Command::HaarBaseline => "haar-baseline",
            Command::ThreeLocal => "three-local",
            Command::CliffordPhase => "clifford-phase",
            Command::Perturb => "perturb",
            Command::No4Design => "no4design",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// A gate request: a named family or an explicit coefficient triple.
#[derive(Debug, Clone)]
pub enum GateSpec {
    Named(String),
    Triple(f64, f64, f64),
}

impl GateSpec {
    pub fn parse(s: &str) -> Result<Self, String> {
        if s.contains(',') {
            let parts: Vec<&str> = s.split(',').collect();
            if parts.len() != 3 {
                return Err(format!("expected kx,ky,kz in {s:?}"));
            }
            let vals: Result<Vec<f64>, _> = parts.iter().map(|p| p.trim().parse()).collect();
            let v = vals.map_err(|_| format!("bad coefficient triple {s:?}"))?;
            Ok(GateSpec::Triple(v[0], v[1], v[2]))
        } else {
            Ok(GateSpec::Named(s.to_string()))
        }
    }

    fn label(&self) -> String {
        match self {
            GateSpec::Named(n) => n.to_ascii_uppercase(),
            GateSpec::Triple(x, y, z) => format!("({x:.6},{y:.6},{z:.6})"),
        }
    }

    fn coefficients(&self) -> Result<KakCoefficients, String> {
        match self {
            GateSpec::Named(n) => kak::named_gate(n).map_err(|e| e.to_string()),
            GateSpec::Triple(x, y, z) => Ok(KakCoefficients::new(*x, *y, *z)),
        }
    }
}

/// A graph request: standard kind plus size, or a custom edge-list file.
#[derive(Debug, Clone)]
pub enum GraphSpec {
    Standard(GraphKind),
    CustomFile(String),
}

impl GraphSpec {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "path" => Ok(GraphSpec::Standard(GraphKind::Path)),
            "ring" => Ok(GraphSpec::Standard(GraphKind::Ring)),
            "complete" => Ok(GraphSpec::Standard(GraphKind::Complete)),
            "star" => Ok(GraphSpec::Standard(GraphKind::Star)),
            other => match other.strip_prefix("custom:") {
                Some(path) => Ok(GraphSpec::CustomFile(path.to_string())),
                None => Err(format!("unknown graph kind {s:?}")),
            },
        }
    }

    fn label(&self) -> String {
        match self {
            GraphSpec::Standard(k) => format!("{k:?}").to_ascii_lowercase(),
            GraphSpec::CustomFile(p) => format!("custom:{p}"),
        }
    }

    fn build(&self, n: usize) -> Result<CircuitGraph, String> {
        match self {
            GraphSpec::Standard(k) => architectures::make_graph(*k, n).map_err(|e| e.to_string()),
            GraphSpec::CustomFile(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
                CircuitGraph::parse(&text).map_err(|e| e.to_string())
            }
        }
    }
}

/// Full run configuration; every field is echoed into the report.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub gates: Vec<GateSpec>,
    pub graphs: Vec<GraphSpec>,
    pub n_values: Vec<usize>,
    pub t: usize,
    pub epsilon: f64,
    pub delta: Vec<f64>,
    pub grid: usize,
    pub seed: u64,
    pub format: Format,
    pub out: Option<std::path::PathBuf>,
    pub jobs: Option<usize>,
    /// Per-check tolerance overrides, keyed by check name.
    pub tolerances: BTreeMap<String, f64>,
    /// clifford-phase mode: optimum | grid | oracle.
    pub mode: String,
    pub c_param: f64,
    pub p_param: f64,
    pub reps: usize,
    pub samples: usize,
    pub variant: BrickworkVariant,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: Command::GadgetTable,
            gates: Vec::new(),
            graphs: Vec::new(),
            n_values: Vec::new(),
            t: 2,
            epsilon: 0.01,
            delta: vec![0.01],
            grid: 10,
            seed: 1,
            format: Format::Csv,
            out: None,
            jobs: None,
            tolerances: BTreeMap::new(),
            mode: "optimum".into(),
            c_param: -1.0,
            p_param: 0.5,
            reps: 1,
            samples: 50,
            variant: BrickworkVariant::Product,
        }
    }
}

impl RunConfig {
    fn tol(&self, key: &str, default: f64) -> f64 {
        self.tolerances.get(key).copied().unwrap_or(default)
    }

    fn config_echo(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("command".into(), self.command.name().into());
        m.insert(
            "gates".into(),
            self.gates.iter().map(|g| g.label()).collect::<Vec<_>>().join(";"),
        );
        m.insert(
            "graphs".into(),
            self.graphs.iter().map(|g| g.label()).collect::<Vec<_>>().join(";"),
        );
        m.insert(
            "n".into(),
            self.n_values.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(";"),
        );
        m.insert("t".into(), self.t.to_string());
        m.insert("epsilon".into(), sig9(self.epsilon));
        m.insert(
            "delta".into(),
            self.delta.iter().map(|d| sig9(*d)).collect::<Vec<_>>().join(";"),
        );
        m.insert("grid".into(), self.grid.to_string());
        m.insert("seed".into(), self.seed.to_string());
        m.insert("mode".into(), self.mode.clone());
        m.insert("c".into(), sig9(self.c_param));
        m.insert("p".into(), sig9(self.p_param));
        m.insert("reps".into(), self.reps.to_string());
        m.insert("samples".into(), self.samples.to_string());
        m.insert("variant".into(), format!("{:?}", self.variant).to_ascii_lowercase());
        for (k, v) in &self.tolerances {
            m.insert(format!("tol.{k}"), sig9(*v));
        }
        m
    }
}

/// 9 significant digits, '.' decimal separator, no locale.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000e0".into();
    }
    format!("{:.8e}", x)
}

/// A finished report, serializable to CSV or JSON.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub config: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub notes: Vec<String>,
}

impl Report {
    fn new(config: &RunConfig, columns: &[&str]) -> Self {
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: config.command.name().to_string(),
            seed: config.seed,
            config: config.config_echo(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# version={}", self.version);
        let _ = writeln!(out, "# command={}", self.command);
        let _ = writeln!(out, "# seed={}", self.seed);
        for (k, v) in &self.config {
            let _ = writeln!(out, "# config.{k}={v}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "# note={n}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Validate a configuration without executing it, returning every diagnostic.
pub fn validate(config: &RunConfig) -> Vec<String> {
    let mut diags = Vec::new();
    for g in &config.gates {
        if let Err(e) = g.coefficients() {
            diags.push(e);
        }
    }
    for g in &config.graphs {
        if let GraphSpec::CustomFile(path) = g {
            match std::fs::read_to_string(path) {
                Err(e) => diags.push(format!("cannot read graph file {path:?}: {e}")),
                Ok(text) => {
                    if let Err(e) = CircuitGraph::parse(&text) {
                        diags.push(format!("bad graph file {path:?}: {e}"));
                    }
                }
            }
        }
    }
    if !(config.epsilon > 0.0 && config.epsilon < 1.0) {
        diags.push(format!("epsilon {} outside (0,1)", config.epsilon));
    }
    let d = crate::commutant::catalan_dim(config.t.max(1));
    match config.command {
        Command::GraphGaps | Command::Perturb => {
            if !(2..=4).contains(&config.t) {
                diags.push(format!("t={} unsupported for gadget sweeps", config.t));
            }
            for &n in &config.n_values {
                if d.pow(n as u32) > architectures::DIM_CAP {
                    diags.push(format!(
                        "restricted dimension {}^{n} exceeds the cap {}",
                        d,
                        architectures::DIM_CAP
                    ));
                }
            }
        }
        Command::Brickwork => {
            for &n in &config.n_values {
                if n < 4 {
                    diags.push(format!("brickwork needs n >= 4, got {n}"));
                }
                if (1usize << n) > architectures::DIM_CAP {
                    diags.push(format!("brickwork dimension 2^{n} exceeds the cap"));
                }
            }
        }
        Command::WholeLayer => {
            for &n in &config.n_values {
                if n > 6 {
                    diags.push(format!("whole-layer works matrix-free up to n = 6, got {n}"));
                }
            }
        }
        Command::Heuristic1q | Command::Heuristic2q => {
            let q = if config.command == Command::Heuristic1q { 1 } else { 2 };
            if 2 * config.t * q > 16 {
                diags.push(format!("moment dimension 2^{} exceeds the cap", 2 * config.t * q));
            }
        }
        Command::CliffordPhase => {
            if !["optimum", "grid", "oracle"].contains(&config.mode.as_str()) {
                diags.push(format!("unknown clifford-phase mode {:?}", config.mode));
            }
            if config.mode == "oracle" {
                for &n in &config.n_values {
                    if !(3..=5).contains(&n) {
                        diags.push(format!("oracle supports n in 3..=5, got {n}"));
                    }
                }
            }
            if !(-1.0..=1.0).contains(&config.c_param) {
                diags.push(format!("c={} outside [-1,1]", config.c_param));
            }
        }
        Command::No4Design => {
            if config.grid < 8 {
                diags.push(format!("no4design needs grid >= 8, got {}", config.grid));
            }
        }
        _ => {}
    }
    diags
}

fn gate_list(config: &RunConfig) -> Vec<GateSpec> {
    if config.gates.is_empty() {
        NamedGate::ALL.iter().map(|g| GateSpec::Named(g.name().to_string())).collect()
    } else {
        config.gates.clone()
    }
}

fn spectrum_of_local(m: &gadget::LocalMomentMatrix) -> Vec<f64> {
    linalg::hermitian_spectrum(&m.matrix, spectra::UNIT_TOL)
        .expect("local moment matrices are Hermitian")
        .eigenvalues
}

/// Execute a validated configuration and build its report. Assertion
/// failures against pinned reference values are collected, not panicked.
pub fn run(config: &RunConfig) -> Result<(Report, Vec<String>), CliError> {
    let diags = validate(config);
    if !diags.is_empty() {
        return Err(CliError::InvalidConfig(diags));
    }
    if let Some(jobs) = config.jobs {
        // ignore the error when a pool already exists (tests, repeat calls)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let mut failures: Vec<String> = Vec::new();
    let report = match config.command {
        Command::GadgetTable => run_gadget_table(config, &mut failures),
        Command::GraphGaps => run_graph_gaps(config)?,
        Command::Brickwork => run_brickwork(config)?,
        Command::WholeLayer => run_whole_layer(config)?,
        Command::WeylScan => run_weyl_scan(config),
        Command::Heuristic1q => run_heuristic(config, 1),
        Command::Heuristic2q => run_heuristic(config, 2),
        Command::HaarBaseline => run_haar_baseline(config),
        Command::ThreeLocal => run_three_local(config, &mut failures),
        Command::CliffordPhase => run_clifford_phase(config)?,
        Command::Perturb => run_perturb(config)?,
        Command::No4Design => run_no4design(config, &mut failures),
    };
    Ok((report, failures))
}

fn run_gadget_table(config: &RunConfig, failures: &mut Vec<String>) -> Report {
    let mut report = Report::new(
        config,
        &["gate", "kx", "ky", "kz", "a", "b", "c", "l1", "l2", "l3", "l4", "gap"],
    );
    let tol = config.tol("gadget-table", 1e-9);
    let reference: BTreeMap<&str, [f64; 4]> = [
        ("SWAP", [1.0, 1.0, 1.0, -1.0]),
        ("CHI", [1.0, 1.0, 0.0, 0.0]),
        ("QFT", [1.0, 1.0, 4.0 / 9.0, -2.0 / 3.0]),
        ("SQSW", [1.0, 1.0, 1.0 / 6.0, 0.0]),
        ("ISWAP", [1.0, 1.0, -1.0 / 9.0, -1.0 / 3.0]),
        ("B", [1.0, 1.0, 0.0, -1.0 / 9.0]),
        ("SQISW", [1.0, 1.0, 1.0 / 3.0, 1.0 / 6.0]),
        ("CNOT", [1.0, 1.0, 1.0 / 3.0, -1.0 / 9.0]),
    ]
    .into_iter()
    .collect();
    for spec in gate_list(config) {
        let k = spec.coefficients().expect("validated");
        let abc = gadget::gadget_abc(&k);
        let local = gadget::gadget_t2_matrix(&k);
        let vals = spectrum_of_local(&local);
        let spec_rep = linalg::hermitian_spectrum(&local.matrix, spectra::UNIT_TOL).unwrap();
        let gap = spectra::spectral_gap_with_expected(&spec_rep, 2).unwrap().gap;
        if let Some(expect) = reference.get(spec.label().as_str()) {
            let mut want = expect.to_vec();
            want.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for (got, w) in vals.iter().zip(want.iter()) {
                if (got - w).abs() > tol {
                    failures.push(format!(
                        "{}: eigenvalue {got} deviates from {w} beyond {tol}",
                        spec.label()
                    ));
                }
            }
        }
        report.rows.push(vec![
            spec.label(),
            sig9(k.kx),
            sig9(k.ky),
            sig9(k.kz),
            sig9(abc.a),
            sig9(abc.b),
            sig9(abc.c),
            sig9(vals[0]),
            sig9(vals[1]),
            sig9(vals[2]),
            sig9(vals[3]),
            sig9(gap),
        ]);
    }
    report
}

fn run_graph_gaps(config: &RunConfig) -> Result<Report, CliError> {
    let mut report = Report::new(
        config,
        &["gate", "graph", "n", "unit_multiplicity", "lambda2", "lambda_min", "gap", "caution"],
    );
    let graphs = if config.graphs.is_empty() {
        vec![
            GraphSpec::Standard(GraphKind::Complete),
            GraphSpec::Standard(GraphKind::Star),
            GraphSpec::Standard(GraphKind::Ring),
        ]
    } else {
        config.graphs.clone()
    };
    for spec in gate_list(config) {
        let k = spec.coefficients().expect("validated");
        let local = match config.t {
            2 => gadget::gadget_t2_matrix(&k),
            t => gadget::gadget_local_matrix(&kak::canonical_unitary(&k), t, true)
                .map_err(|e| CliError::Computation(e.to_string()))?,
        };
        for gspec in &graphs {
            for &n in &config.n_values {
                let graph = gspec.build(n).map_err(CliError::Computation)?;
                let op = architectures::graph_moment(&local, &graph)
                    .map_err(|e| CliError::Computation(e.to_string()))?;
                let rep = architectures::gap_of_global(&op)
                    .map_err(|e| CliError::Computation(e.to_string()))?;
                report.rows.push(vec![
                    spec.label(),
                    gspec.label(),
                    n.to_string(),
                    rep.unit_multiplicity.to_string(),
                    sig9(rep.lambda2),
                    sig9(rep.lambda_min),
                    sig9(rep.gap),
                    rep.caution_subspace.to_string(),
                ]);
            }
        }
    }
    Ok(report)
}

fn run_brickwork(config: &RunConfig) -> Result<Report, CliError> {
    let mut report =
        Report::new(config, &["gate", "n", "variant", "path", "lambda2", "lambda_min", "gap"]);
    for spec in gate_list(config) {
        let k = spec.coefficients().expect("validated");
        let local = gadget::gadget_t2_matrix(&k);
        for &n in &config.n_values {
            let rep = architectures::brickwork_moment(&local, n, config.variant)
                .map_err(|e| CliError::Computation(e.to_string()))?;
            report.rows.push(vec![
                spec.label(),
                n.to_string(),
                format!("{:?}", config.variant).to_ascii_lowercase(),
                rep.context.clone(),
                sig9(rep.lambda2),
                sig9(rep.lambda_min),
                sig9(rep.gap),
            ]);
        }
    }
    Ok(report)
}

fn run_whole_layer(config: &RunConfig) -> Result<Report, CliError> {
    let mut report =
        Report::new(config, &["gate", "graph", "n", "reps", "lambda2", "gap"]);
    let graphs = if config.graphs.is_empty() {
        vec![GraphSpec::Standard(GraphKind::Complete)]
    } else {
        config.graphs.clone()
    };
    for spec in gate_list(config) {
        let k = spec.coefficients().expect("validated");
        let u = match &spec {
            GateSpec::Named(name) => kak::gate_matrix(NamedGate::parse(name).expect("validated")),
            GateSpec::Triple(..) => kak::canonical_unitary(&k),
        };
        for gspec in &graphs {
            for &n in &config.n_values {
                let graph = gspec.build(n).map_err(CliError::Computation)?;
                let rep = architectures::whole_layer_moment(&u, &graph, config.reps)
                    .map_err(|e| CliError::Computation(e.to_string()))?;
                report.rows.push(vec![
                    spec.label(),
                    gspec.label(),
                    n.to_string(),
                    config.reps.to_string(),
                    sig9(rep.lambda2),
                    sig9(rep.gap),
                ]);
            }
        }
    }
    Ok(report)
}

fn run_weyl_scan(config: &RunConfig) -> Report {
    let mut report = Report::new(
        config,
        &["kx", "ky", "kz", "a", "b", "c", "lambda2", "lambda3", "gap", "iswap_region"],
    );
    for k in kak::weyl_grid(config.grid) {
        let abc = gadget::gadget_abc(&k);
        let (l2, l3) = gadget::gadget_t2_spectrum(&k);
        let gap = (1.0 - l2.max(l3.abs())).clamp(0.0, 1.0);
        report.rows.push(vec![
            sig9(k.kx),
            sig9(k.ky),
            sig9(k.kz),
            sig9(abc.a),
            sig9(abc.b),
            sig9(abc.c),
            sig9(l2),
            sig9(l3),
            sig9(gap),
            gadget::iswap_dominance_region(&k).to_string(),
        ]);
    }
    report
}

fn run_heuristic(config: &RunConfig, qubits: usize) -> Report {
    let t = config.t;
    let mut report = Report::new(
        config,
        &["t", "theta", "p1", "p2", "gap", "depth_at_epsilon"],
    );
    let grid = config.grid.max(11);
    let opt = if qubits == 1 {
        ensembles::optimize_gap(
            |params: &[f64]| {
                ensembles::ensemble_gap(&ensembles::hadamard_phase_family(params[0], params[1]), t)
                    .map(|g| g.gap)
                    .unwrap_or(0.0)
            },
            &[(0.0, std::f64::consts::PI), (0.0, 1.0)],
            grid,
            true,
        )
    } else {
        ensembles::optimize_gap(
            |params: &[f64]| {
                let (theta, p1, p2) = (params[0], params[1], params[2]);
                if p1 + p2 > 1.0 {
                    return 0.0;
                }
                ensembles::cnot_hadamard_phase_family(theta, p1, p2)
                    .and_then(|e| ensembles::ensemble_gap(&e, t))
                    .map(|g| g.gap)
                    .unwrap_or(0.0)
            },
            &[(0.0, std::f64::consts::PI), (0.0, 1.0), (0.0, 1.0)],
            grid,
            true,
        )
    };
    let depth = if opt.gap > 0.0 {
        spectra::design_depth(opt.gap, qubits, t, config.epsilon).unwrap().to_string()
    } else {
        "inf".to_string()
    };
    let (p1, p2) = if qubits == 1 {
        (opt.params[1], f64::NAN)
    } else {
        (opt.params[1], opt.params[2])
    };
    report.rows.push(vec![
        t.to_string(),
        sig9(opt.params[0]),
        sig9(p1),
        if p2.is_nan() { String::from("-") } else { sig9(p2) },
        sig9(opt.gap),
        depth,
    ]);
    report
}

fn run_haar_baseline(config: &RunConfig) -> Report {
    let mut report = Report::new(
        config,
        &["qubits", "t", "samples", "mean_gap", "std_gap", "max_gap"],
    );
    let qubits = config.n_values.first().copied().unwrap_or(1).clamp(1, 2);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(config.seed);
    let mut gaps = Vec::with_capacity(config.samples);
    for _ in 0..config.samples {
        let e = ensembles::two_gate_haar_ensemble(&mut rng, qubits);
        gaps.push(ensembles::ensemble_gap(&e, config.t).map(|g| g.gap).unwrap_or(0.0));
    }
    let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
    let var = gaps.iter().map(|g| (g - mean) * (g - mean)).sum::<f64>()
        / (gaps.len() as f64 - 1.0).max(1.0);
    let max = gaps.iter().copied().fold(0.0_f64, f64::max);
    report.rows.push(vec![
        qubits.to_string(),
        config.t.to_string(),
        config.samples.to_string(),
        sig9(mean),
        sig9(var.sqrt()),
        sig9(max),
    ]);
    report
}

fn run_three_local(config: &RunConfig, failures: &mut Vec<String>) -> Report {
    let mut report = Report::new(
        config,
        &["gate", "l1", "l2", "l3", "l4", "l5", "l6", "l7", "l8", "gap"],
    );
    let tol = config.tol("three-local", 1e-9);
    let sqrt10 = 10.0_f64.sqrt();
    let sqrt2 = 2.0_f64.sqrt();
    let sqrt22 = 22.0_f64.sqrt();
    let reference: BTreeMap<&str, Vec<f64>> = [
        (
            "CCZ",
            vec![1.0, 1.0, 5.0 / 9.0, 5.0 / 9.0, 4.0 / 9.0, 2.0 / 9.0, 1.0 / 3.0, 1.0 / 3.0],
        ),
        (
            "TOFFOLI",
            vec![1.0, 1.0, 5.0 / 9.0, 5.0 / 9.0, 4.0 / 9.0, 2.0 / 9.0, 1.0 / 3.0, 1.0 / 3.0],
        ),
        (
            "CSWAP",
            vec![
                1.0,
                1.0,
                (10.0 + sqrt10) / 18.0,
                (2.0 + sqrt2) / 6.0,
                (10.0 - sqrt10) / 18.0,
                (2.0 - sqrt2) / 6.0,
                0.0,
                0.0,
            ],
        ),
        (
            "CISWAP",
            vec![
                1.0,
                1.0,
                (2.0 + sqrt2) / 6.0,
                (20.0 + sqrt22) / 54.0,
                (20.0 - sqrt22) / 54.0,
                2.0 / 9.0,
                (2.0 - sqrt2) / 6.0,
                0.0,
            ],
        ),
        (
            "PERES",
            vec![
                1.0,
                1.0,
                (11.0 + 2.0 * sqrt10) / 27.0,
                5.0 / 9.0,
                (1.0 + 2.0 * sqrt2) / 9.0,
                (11.0 - 2.0 * sqrt10) / 27.0,
                (1.0 - 2.0 * sqrt2) / 9.0,
                -1.0 / 3.0,
            ],
        ),
    ]
    .into_iter()
    .collect();
    for gate in ThreeQubitGate::ALL {
        let local = gadget::three_local_matrix(&gate.matrix(), true).expect("built-in unitary");
        let vals = spectrum_of_local(&local);
        let spec_rep = linalg::hermitian_spectrum(&local.matrix, spectra::UNIT_TOL).unwrap();
        let gap = spectra::spectral_gap_with_expected(&spec_rep, 2).unwrap().gap;
        if let Some(expect) = reference.get(gate.name()) {
            let mut want = expect.clone();
            want.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for (got, w) in vals.iter().zip(want.iter()) {
                if (got - w).abs() > tol {
                    failures.push(format!(
                        "{}: eigenvalue {got} deviates from {w} beyond {tol}",
                        gate.name()
                    ));
                }
            }
        }
        if gate == ThreeQubitGate::Margolus {
            let mtol = config.tol("margolus-gap", 1e-3);
            if (gap - 0.453).abs() > mtol {
                failures.push(format!("MARGOLUS: gap {gap} deviates from 0.453 beyond {mtol}"));
            }
        }
        let mut row = vec![gate.name().to_string()];
        row.extend(vals.iter().map(|v| sig9(*v)));
        row.push(sig9(gap));
        report.rows.push(row);
    }
    report
}

fn run_clifford_phase(config: &RunConfig) -> Result<Report, CliError> {
    match config.mode.as_str() {
        "optimum" => {
            let mut report =
                Report::new(config, &["c", "optimal_gap", "optimal_p", "global_bound_ok"]);
            let (gap, p) = clifford_phase::optimum(config.c_param)
                .map_err(|e| CliError::Computation(e.to_string()))?;
            let ok =
                clifford_phase::global_gap_bound_check(&CliffordPhaseParams::from_c(p, config.c_param));
            report.rows.push(vec![
                sig9(config.c_param),
                sig9(gap),
                sig9(p),
                ok.to_string(),
            ]);
            Ok(report)
        }
        "grid" => {
            let mut report =
                Report::new(config, &["p", "c", "gap", "reduced_gap", "global_bound_ok"]);
            let g = config.grid.max(2);
            for pi in 0..g {
                for ci in 0..g {
                    let p = pi as f64 / (g - 1) as f64;
                    let c = -1.0 + 2.0 * ci as f64 / (g - 1) as f64;
                    let params = CliffordPhaseParams::from_c(p, c);
                    report.rows.push(vec![
                        sig9(p),
                        sig9(c),
                        sig9(clifford_phase::gap_formula(&params)),
                        sig9(clifford_phase::reduced_matrix_gap(&params)),
                        clifford_phase::global_gap_bound_check(&params).to_string(),
                    ]);
                }
            }
            Ok(report)
        }
        "oracle" => {
            let mut report =
                Report::new(config, &["n", "p", "c", "oracle_gap", "formula_gap", "deviation"]);
            let params = CliffordPhaseParams::from_c(config.p_param, config.c_param);
            let ns = if config.n_values.is_empty() { vec![3, 4] } else { config.n_values.clone() };
            for &n in &ns {
                let rep = clifford_phase::subspace_oracle(n, &params)
                    .map_err(|e| CliError::Computation(e.to_string()))?;
                let formula = clifford_phase::gap_formula(&params);
                report.rows.push(vec![
                    n.to_string(),
                    sig9(config.p_param),
                    sig9(config.c_param),
                    sig9(rep.gap),
                    sig9(formula),
                    sig9(rep.gap - formula),
                ]);
            }
            report.notes.push(
                "the finite-n subspace gap approaches the closed form as overlaps decay".into(),
            );
            Ok(report)
        }
        other => Err(CliError::Computation(format!("unhandled mode {other}"))),
    }
}

fn run_perturb(config: &RunConfig) -> Result<Report, CliError> {
    let mut report = Report::new(
        config,
        &[
            "gate", "graph", "n", "t", "delta", "unperturbed_gap", "worst_gap", "ratio",
            "epsilon_hat", "certificate_ok",
        ],
    );
    let graphs = if config.graphs.is_empty() {
        vec![GraphSpec::Standard(GraphKind::Complete)]
    } else {
        config.graphs.clone()
    };
    for spec in gate_list(config) {
        let k = spec.coefficients().expect("validated");
        for gspec in &graphs {
            for &n in &config.n_values {
                let graph = gspec.build(n).map_err(CliError::Computation)?;
                for (i, &delta) in config.delta.iter().enumerate() {
                    let pspec = PerturbationSpec {
                        base: k,
                        delta,
                        samples: config.samples,
                        per_edge_independent: true,
                        seed: config.seed.wrapping_add(i as u64),
                    };
                    let rep = perturb::perturbed_gap(&pspec, &graph, config.t)
                        .map_err(|e| CliError::Computation(e.to_string()))?;
                    report.rows.push(vec![
                        spec.label(),
                        gspec.label(),
                        n.to_string(),
                        config.t.to_string(),
                        sig9(delta),
                        sig9(rep.unperturbed_gap),
                        sig9(rep.worst_gap),
                        sig9(rep.ratio),
                        sig9(rep.epsilon_hat_max),
                        rep.certificate_ok.to_string(),
                    ]);
                }
                if config.delta.len() >= 3 {
                    if let Ok(slope) =
                        perturb::robustness_slope(&k, &graph, config.t, &config.delta)
                    {
                        report
                            .notes
                            .push(format!("{} {} n={n}: slope {}", spec.label(), gspec.label(), sig9(slope)));
                    }
                }
            }
        }
    }
    Ok(report)
}

fn run_no4design(config: &RunConfig, failures: &mut Vec<String>) -> Report {
    let mut report = Report::new(
        config,
        &[
            "grid_points", "zero_candidates", "candidates_in_forced_family", "t33_at_forced",
            "ranks_checked", "min_rank",
        ],
    );
    let rep = gadget::no4design_certificate(config.grid);
    if rep.min_rank <= 24 {
        failures.push(format!("order-4 rank obstruction violated: min rank {}", rep.min_rank));
    }
    if !rep.candidates_in_forced_family {
        failures.push("a closed-form zero candidate fell outside the forced family".into());
    }
    if rep.t33_at_forced.abs() < 1e-3 {
        failures.push(format!("T33 at the forced solution is too small: {}", rep.t33_at_forced));
    }
    report.rows.push(vec![
        rep.grid_points.to_string(),
        rep.zero_candidates.to_string(),
        rep.candidates_in_forced_family.to_string(),
        sig9(rep.t33_at_forced),
        rep.ranks_checked.to_string(),
        rep.min_rank.to_string(),
    ]);
    report
}

/// Run, write the report (stdout or --out), and map the outcome to the exit
/// code contract: 0 ok, 2 invalid config, 3 failed numerical assertion.
pub fn execute(config: &RunConfig) -> i32 {
    match run(config) {
        Err(CliError::InvalidConfig(diags)) => {
            for d in &diags {
                eprintln!("error: {d}");
            }
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
        Ok((report, failures)) => {
            let text = report.render(config.format);
            match &config.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &text) {
                        eprintln!("error: cannot write {path:?}: {e}");
                        return 2;
                    }
                }
                None => print!("{text}"),
            }
            if failures.is_empty() {
                0
            } else {
                for f in &failures {
                    eprintln!("assertion failed: {f}");
                }
                3
            }
        }
    }
}
