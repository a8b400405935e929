//! Command implementations behind the `symppt` binary. Each command returns a
//! [`Report`]; rendering and exit codes are decided by the caller.

pub mod format;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use symppt::combx::{lambda_min_rho0, p_min_qubits};
use symppt::ptrans::{
    min_eigenvalue, numeric_spectrum, qudit_rho0_pt_min_eig, rho0_pt, rho0_pt_spectrum_analytic, rho_p_pt,
    SpectrumJson, DESK_DIMENSION_CAP,
};
use symppt::symstate::{ghz_state_signed, rho_p, GhzSign};
use symppt::witness::{detection_threshold, expectation, min_over_products, BuiltinWitness, Witness, DEFAULT_GRID};
use symppt::{Bipartition, Error, ExactRational};

use crate::format::{json_float, Cell, Table};

/// Published `p_ent` column, shipped as reference data only.
const P_ENT_REFERENCE: [(u32, &str); 7] =
    [(4, "15/16"), (5, "0.96953"), (6, "70/71"), (7, "0.99329"), (8, "315/316"), (9, "0.99849"), (10, "1386/1387")];

const SPECTRUM_TOLERANCE: f64 = 1e-10;
const QUDIT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "symppt", version, about = "Absolute-PPT tables and witness checks for symmetric states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Analytic,
    Numeric,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// p_min for N = 4..=n, witness thresholds, and the published p_ent column.
    Table1 {
        #[arg(long, default_value_t = 10)]
        n: u32,
    },
    /// Eigenvalues of the partially transposed maximally mixed symmetric state.
    Spectrum {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
    },
    /// Witness expectation and smallest PT eigenvalue along rho(p).
    Scan(ScanArgs),
    /// Smallest PT eigenvalue of the qudit maximally mixed state against 1/(D C(N,k)).
    QuditCheck {
        #[arg(long)]
        d: u32,
        /// Largest N to sweep.
        #[arg(long)]
        n: u32,
        /// Check only this k.
        #[arg(long)]
        k: Option<u32>,
    },
    /// Expectation, detection threshold and product-state validity of a witness.
    Witness(WitnessArgs),
}

#[derive(Debug, Args)]
pub struct WitnessSource {
    /// Built-in witness: W5, W7 or W9.
    #[arg(long = "witness", value_name = "NAME")]
    pub name: Option<String>,
    /// Witness JSON file `{"name", "dim", "diagonal", "corner"}`.
    #[arg(long, value_name = "PATH", conflicts_with = "name")]
    pub witness_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub source: WitnessSource,
    /// Number of qubits (defaults to the witness size).
    #[arg(long)]
    pub n: Option<u32>,
    /// Bipartition size for the PT eigenvalue (defaults to floor(N/2)).
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, value_name = "P", allow_hyphen_values = true)]
    pub p_from: ExactRational,
    #[arg(long, value_name = "P", allow_hyphen_values = true)]
    pub p_to: ExactRational,
    /// Number of intervals; the scan has steps + 1 rows.
    #[arg(long, default_value_t = 20)]
    pub steps: u32,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    /// Built-in witness: W5, W7 or W9.
    #[arg(value_name = "NAME", required_unless_present = "witness_file")]
    pub name: Option<String>,
    #[arg(long, value_name = "PATH", conflicts_with = "name")]
    pub witness_file: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<u32>,
    /// Evaluate Tr(rho(p) W).
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<ExactRational>,
    /// Minimize over product states.
    #[arg(long)]
    pub validate: bool,
    /// Solve Tr(rho(p) W) = 0.
    #[arg(long)]
    pub threshold: bool,
    /// Validation grid as THETAxPHI points.
    #[arg(long, value_name = "WxH", value_parser = parse_grid)]
    pub grid: Option<(usize, usize)>,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected WxH, got `{s}`"))?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad grid size `{t}`"));
    let (w, h) = (parse(w)?, parse(h)?);
    if w < 2 || h < 1 {
        return Err(format!("grid {w}x{h} is too small (need at least 2x1)"));
    }
    Ok((w, h))
}

/// Failure class, mapped to exit code 1 or 2.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotHermitian(_)
            | Error::NoConvergence(_)
            | Error::Residual { .. }
            | Error::DegenerateThreshold
            | Error::NotNormalized(_)
            | Error::InvalidDensityMatrix(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Command output plus an optional check violation, which still gets
/// written but turns the exit code to 2.
#[derive(Debug, Clone)]
pub struct Report {
    pub table: Table,
    pub json: Value,
    pub violation: Option<String>,
    pub note: Option<String>,
}

impl Report {
    fn new(table: Table, json: Value) -> Self {
        Self { table, json, violation: None, note: None }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.table.to_csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("serializable report");
                s.push('\n');
                s
            }
        }
    }
}

pub fn run(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Table1 { n } => table1(*n),
        Command::Spectrum { n, k, mode } => spectrum(*n, *k, *mode),
        Command::Scan(args) => scan(args),
        Command::QuditCheck { d, n, k } => qudit_check(*d, *n, *k),
        Command::Witness(args) => witness(args),
    }
}

fn load_witness(name: Option<&str>, file: Option<&PathBuf>) -> Result<Witness<f64>, CliError> {
    match (name, file) {
        (_, Some(path)) => Ok(Witness::load(path)?),
        (Some(name), None) => Ok(Witness::builtin(BuiltinWitness::from_name(name)?)),
        (None, None) => Err(usage("give a witness name (W5, W7, W9) or --witness-file")),
    }
}

fn witness_size(w: &Witness<f64>, n: Option<u32>) -> Result<u32, CliError> {
    let own = w.qubits();
    match n {
        Some(n) if n != own => Err(usage(format!("witness {} acts on N = {own} qubits, not --n {n}", w.name()))),
        _ => Ok(own),
    }
}

pub fn table1(nmax: u32) -> Result<Report, CliError> {
    if !(4..=14).contains(&nmax) {
        return Err(usage(format!("--n must lie in 4..=14, got {nmax}")));
    }
    let mut table = Table::new(vec!["N", "p_min", "p_min_float", "p_ent_witness", "p_ent_ref", "p_ent_ref_status"]);
    for n in 4..=nmax {
        let p_min = p_min_qubits(n)?;
        let witness = match n {
            5 => Some(BuiltinWitness::W5),
            7 => Some(BuiltinWitness::W7),
            9 => Some(BuiltinWitness::W9),
            _ => None,
        };
        let p_ent_witness = match witness {
            Some(w) => Cell::Float(detection_threshold(&Witness::<f64>::builtin(w), n)?.threshold),
            None => Cell::text("/"),
        };
        let (reference, status) = match P_ENT_REFERENCE.iter().find(|(m, _)| *m == n) {
            Some((_, r)) => (Cell::text(*r), Cell::text("reference-not-reproduced")),
            None => (Cell::text("/"), Cell::text("/")),
        };
        table.push(vec![
            n.into(),
            Cell::Text(p_min.to_string()),
            p_min.to_f64().into(),
            p_ent_witness,
            reference,
            status,
        ]);
    }
    let json = json!({ "rows": table.json_rows() });
    Ok(Report::new(table, json))
}

pub fn spectrum(n: u32, k: u32, mode: Mode) -> Result<Report, CliError> {
    let bip = Bipartition::qubits(n, k)?;
    if mode != Mode::Analytic && bip.dim() > DESK_DIMENSION_CAP {
        return Err(Error::SizeCap { dim: bip.dim(), cap: DESK_DIMENSION_CAP }.into());
    }
    match mode {
        Mode::Analytic => {
            let s = rho0_pt_spectrum_analytic(&bip)?;
            let mut table = Table::new(vec!["level", "lambda", "lambda_float", "multiplicity"]);
            for (level, e) in s.entries().iter().enumerate() {
                table.push(vec![
                    level.into(),
                    Cell::Text(e.value.to_string()),
                    e.value.to_f64().into(),
                    e.multiplicity.into(),
                ]);
            }
            let json = serde_json::to_value(SpectrumJson::exact(&bip, &s)).expect("serializable");
            Ok(Report::new(table, json))
        }
        Mode::Numeric => {
            let s = numeric_spectrum(&rho0_pt::<f64>(&bip)?)?;
            let mut table = Table::new(vec!["lambda", "multiplicity"]);
            for e in s.entries() {
                table.push(vec![e.value.into(), e.multiplicity.into()]);
            }
            let mut json = serde_json::to_value(SpectrumJson::numeric(&bip, &s)).expect("serializable");
            round_entry_values(&mut json);
            Ok(Report::new(table, json))
        }
        Mode::Both => spectrum_both(&bip),
    }
}

fn round_entry_values(json: &mut Value) {
    if let Some(entries) = json.get_mut("entries").and_then(Value::as_array_mut) {
        for e in entries {
            if let Some(x) = e.get("value").and_then(Value::as_f64) {
                e["value"] = json_float(x);
            }
        }
    }
}

fn spectrum_both(bip: &Bipartition) -> Result<Report, CliError> {
    let analytic = rho0_pt_spectrum_analytic(bip)?;
    let mut numeric = symppt::linalg::eigenvalues(rho0_pt::<f64>(bip)?.matrix())?;
    numeric.sort_by(f64::total_cmp);
    // levels are increasing in n, so the sorted numeric values fall into consecutive blocks
    let mut table = Table::new(vec!["level", "lambda", "lambda_float", "numeric", "multiplicity", "max_deviation"]);
    let mut entries = Vec::new();
    let mut worst = 0.0f64;
    let mut offset = 0;
    for (level, e) in analytic.entries().iter().enumerate() {
        let block = &numeric[offset..offset + e.multiplicity];
        offset += e.multiplicity;
        let exact = e.value.to_f64();
        let mean = block.iter().sum::<f64>() / block.len() as f64;
        let dev = block.iter().map(|x| (x - exact).abs()).fold(0.0, f64::max);
        worst = worst.max(dev);
        table.push(vec![
            level.into(),
            Cell::Text(e.value.to_string()),
            exact.into(),
            mean.into(),
            e.multiplicity.into(),
            dev.into(),
        ]);
        entries.push(json!({
            "level": level,
            "value": e.value.to_string(),
            "numeric": json_float(mean),
            "multiplicity": e.multiplicity,
            "max_deviation": json_float(dev),
        }));
    }
    let json = json!({ "n": bip.n(), "k": bip.k(), "entries": entries, "max_deviation": json_float(worst) });
    let mut report = Report::new(table, json);
    report.note = Some(format!("max deviation {}", format::fmt_g(worst, 3)));
    if worst > SPECTRUM_TOLERANCE {
        report.violation = Some(format!("numeric spectrum deviates by {worst:e} (tolerance {SPECTRUM_TOLERANCE:e})"));
    }
    Ok(report)
}

pub fn scan(args: &ScanArgs) -> Result<Report, CliError> {
    let w = load_witness(args.source.name.as_deref(), args.source.witness_file.as_ref())?;
    let n = witness_size(&w, args.n)?;
    let bip = Bipartition::qubits(n, args.k.unwrap_or(n / 2))?;
    let (zero, one) = (ExactRational::zero(), ExactRational::one());
    let (from, to) = (&args.p_from, &args.p_to);
    if *from < zero || *to > one || from > to {
        return Err(usage(format!("need 0 <= p-from <= p-to <= 1, got {from} .. {to}")));
    }
    if args.steps == 0 && from != to {
        return Err(usage("--steps must be at least 1 unless p-from equals p-to"));
    }
    let steps = args.steps.max(1);
    let rows = if from == to { 1 } else { steps + 1 };
    let width = to.clone() - from.clone();
    let ps: Vec<ExactRational> = (0..rows)
        .map(|i| from.clone() + width.clone() * ExactRational::new(i64::from(i), i64::from(steps)).expect("steps > 0"))
        .collect();

    let p_min = p_min_qubits(n)?;
    let ghz = ghz_state_signed::<f64>(n, GhzSign::Plus)?;
    let values: Vec<(f64, f64)> = ps
        .par_iter()
        .map(|p| {
            let pf = p.to_f64();
            let trace = expectation(&rho_p(n, pf, &ghz)?, &w)?;
            let lambda = min_eigenvalue(&rho_p_pt(pf, &ghz, &bip)?)?;
            Ok((trace, lambda))
        })
        .collect::<Result<_, Error>>()?;

    let mut table = Table::new(vec!["p", "p_exact", "trace", "lambda_min", "sapt", "witness_detects"]);
    for (p, (trace, lambda)) in ps.iter().zip(values) {
        table.push(vec![
            p.to_f64().into(),
            Cell::Text(p.to_string()),
            trace.into(),
            lambda.into(),
            (*p >= p_min).into(),
            (trace < 0.0).into(),
        ]);
    }
    let json = json!({
        "n": n,
        "k": bip.k(),
        "witness": w.name(),
        "p_min": p_min.to_string(),
        "rows": table.json_rows(),
    });
    Ok(Report::new(table, json))
}

pub fn qudit_check(d: u32, nmax: u32, k: Option<u32>) -> Result<Report, CliError> {
    if d < 2 {
        return Err(usage(format!("--d must be at least 2, got {d}")));
    }
    if nmax < 2 {
        return Err(usage(format!("--n must be at least 2, got {nmax}")));
    }
    let cuts: Vec<Bipartition> = match k {
        Some(k) => {
            let cuts: Vec<Bipartition> =
                (2 * k.max(1)..=nmax).map(|n| Bipartition::new(n, k, d)).collect::<Result<_, _>>()?;
            if cuts.is_empty() {
                return Err(usage(format!("k = {k} needs N >= {}, but --n is {nmax}", 2 * k)));
            }
            if let Some(b) = cuts.iter().find(|b| b.dim() > DESK_DIMENSION_CAP) {
                return Err(usage(format!(
                    "N = {}, k = {k}: bipartite dimension {} exceeds the cap of {DESK_DIMENSION_CAP}",
                    b.n(),
                    b.dim()
                )));
            }
            cuts
        }
        None => (2..=nmax).flat_map(|n| Bipartition::all(n, d)).collect(),
    };

    let results: Vec<Option<(f64, ExactRational)>> = cuts
        .par_iter()
        .map(|b| {
            if b.dim() > DESK_DIMENSION_CAP {
                Ok(None)
            } else {
                qudit_rho0_pt_min_eig::<f64>(b.n(), d, b.k()).map(Some)
            }
        })
        .collect::<Result<_, Error>>()?;

    let mut table = Table::new(vec!["N", "k", "dim", "status", "numeric", "conjectured", "conjectured_float", "delta"]);
    let (mut checked, mut worst) = (0usize, 0.0f64);
    for (b, r) in cuts.iter().zip(&results) {
        let head = vec![b.n().into(), b.k().into(), b.dim().into()];
        let tail = match r {
            Some((numeric, conj)) => {
                let delta = (numeric - conj.to_f64()).abs();
                worst = worst.max(delta);
                checked += 1;
                vec![
                    Cell::text("checked"),
                    (*numeric).into(),
                    Cell::Text(conj.to_string()),
                    conj.to_f64().into(),
                    delta.into(),
                ]
            }
            None => {
                let conj = lambda_min_rho0(b.n(), d, b.k())?;
                vec![
                    Cell::text("skipped"),
                    Cell::Empty,
                    Cell::Text(conj.to_string()),
                    conj.to_f64().into(),
                    Cell::Empty,
                ]
            }
        };
        table.push(head.into_iter().chain(tail).collect());
    }
    let skipped = cuts.len() - checked;
    let json = json!({
        "d": d,
        "nmax": nmax,
        "cap": DESK_DIMENSION_CAP,
        "checked": checked,
        "skipped": skipped,
        "max_delta": json_float(worst),
        "rows": table.json_rows(),
    });
    let mut report = Report::new(table, json);
    report.note = Some(format!(
        "coverage: {checked} of {} cuts checked, {skipped} above the dimension cap of {DESK_DIMENSION_CAP}",
        cuts.len()
    ));
    if worst > QUDIT_TOLERANCE {
        report.violation = Some(format!("max |delta| = {worst:e} exceeds {QUDIT_TOLERANCE:e}"));
    }
    Ok(report)
}

pub fn witness(args: &WitnessArgs) -> Result<Report, CliError> {
    let w = load_witness(args.name.as_deref(), args.witness_file.as_ref())?;
    let n = witness_size(&w, args.n)?;
    let everything = args.p.is_none() && !args.validate && !args.threshold;

    let mut table = Table::new(vec!["field", "value"]);
    let mut obj = Map::new();
    let mut put = |key: &'static str, cell: Cell| {
        obj.insert(key.to_string(), cell.json());
        table.push(vec![Cell::text(key), cell]);
    };
    put("witness", Cell::text(w.name()));
    put("n", n.into());
    let mut violation = None;

    if let Some(p) = &args.p {
        if *p < ExactRational::zero() || *p > ExactRational::one() {
            return Err(usage(format!("--p must lie in [0, 1], got {p}")));
        }
        let ghz = ghz_state_signed::<f64>(n, GhzSign::Plus)?;
        let trace = expectation(&rho_p(n, p.to_f64(), &ghz)?, &w)?;
        put("p", Cell::Text(p.to_string()));
        put("expectation", trace.into());
        put("verdict", Cell::text(if trace < 0.0 { "entangled (witness)" } else { "not detected" }));
    }
    if args.threshold || everything {
        let t = detection_threshold(&w, n)?;
        put("p_min", Cell::Text(t.p_min.to_string()));
        put("threshold", t.threshold.into());
        let (lo, hi) = match t.certified {
            Some((lo, hi)) => (Cell::Float(lo), Cell::Float(hi)),
            None => (Cell::Empty, Cell::Empty),
        };
        put("certified_from", lo);
        put("certified_to", hi);
    }
    if args.validate || everything {
        let m = min_over_products(&w, args.grid.unwrap_or(DEFAULT_GRID))?;
        put("min_value", m.value.into());
        put("theta", m.theta.into());
        put("phi", m.phi.into());
        put("grid_min_value", m.grid_value.into());
        put("grid_theta", m.grid_theta.into());
        put("grid_phi", m.grid_phi.into());
        let valid = m.value >= 0.0 && m.grid_value >= 0.0;
        put("valid", valid.into());
        if !valid {
            violation = Some(format!("{} is negative on a product state: {:e}", w.name(), m.value.min(m.grid_value)));
        }
    }
    let mut report = Report::new(table, Value::Object(obj));
    report.violation = violation;
    Ok(report)
}
