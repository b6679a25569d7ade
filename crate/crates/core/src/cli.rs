//! Command-line driver: argument parsing, experiment runners and CSV/JSON
//! emitters.
//!
//! Floats are written in shortest round-trip form (the same digits
//! `serde_json` emits), negative zero is normalized to `0.0`, and non-finite
//! values abort instead of being written.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, ErrorClass};
use crate::fock::BlockVector;
use crate::quadrature::{identity_resolution_full, identity_resolution_j, ResolutionReport, SphereGrid};
use crate::raman::{
    block_spectrum_oracle, energy, hamiltonian_block, normal_modes, spectrum_closed, tau_of, tau_pm,
    Branch, RamanParams,
};
use crate::su2::{build_acs, residuals_of, AcsAngles, AcsLabel};
use crate::thermo::{spectral_sum_oracle_auto, total_partition, ThermoParams};

#[derive(Debug, Parser)]
#[command(name = "acs", version, about = "Atomic coherent states and the Raman coupled-oscillator model")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Write the artifact here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coherent-state amplitudes in the Fock basis of one block.
    Acs(AcsArgs),
    /// Closed-form block spectrum against the Jacobi oracle.
    Spectrum(SpectrumArgs),
    /// Eigenstate and eigenvector-relation residuals.
    Residual(ResidualArgs),
    /// Resolution-of-identity check by sphere quadrature.
    Completeness(CompletenessArgs),
    /// Partition function and internal energy over a β sweep.
    Thermo(ThermoArgs),
}

fn finite(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("`{s}` is not a finite number"))
    }
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Frequency of mode a.
    #[arg(long, value_parser = finite, allow_hyphen_values = true)]
    pub w1: f64,
    /// Frequency of mode b.
    #[arg(long, value_parser = finite, allow_hyphen_values = true)]
    pub w2: f64,
    /// Raman coupling strength.
    #[arg(long, value_parser = finite, allow_hyphen_values = true)]
    pub lambda: f64,
}

impl ModelArgs {
    fn params(&self) -> Result<RamanParams, CliError> {
        Ok(RamanParams::new(self.w1, self.w2, self.lambda)?)
    }
}

#[derive(Debug, Args)]
pub struct AcsArgs {
    /// Twice the angular momentum, 2j.
    #[arg(long)]
    pub two_j: u32,
    /// Real part of the stereographic label τ.
    #[arg(long, value_parser = finite, allow_hyphen_values = true, requires = "tau_im")]
    pub tau_re: Option<f64>,
    /// Imaginary part of τ.
    #[arg(long, value_parser = finite, allow_hyphen_values = true, requires = "tau_re")]
    pub tau_im: Option<f64>,
    /// Polar angle in [0, π); τ = tan(θ/2) e^(-iφ).
    #[arg(long, value_parser = finite, allow_hyphen_values = true, requires = "phi")]
    pub theta: Option<f64>,
    /// Azimuthal angle.
    #[arg(long, value_parser = finite, allow_hyphen_values = true, requires = "theta")]
    pub phi: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Block 2j.
    #[arg(long)]
    pub two_j: u32,
}

#[derive(Debug, Args)]
pub struct ResidualArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Block 2j; taken from the file with `--verify-file`.
    #[arg(long, required_unless_present = "verify_file")]
    pub two_j: Option<u32>,
    /// Eigenstate branch: plus or minus.
    #[arg(long)]
    pub branch: Branch,
    /// Check the state stored in a JSON file written by `acs`.
    #[arg(long)]
    pub verify_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompletenessArgs {
    /// Block 2j, or the largest block summed with `--full`.
    #[arg(long)]
    pub two_j: u32,
    /// Sum all blocks up to `--two-j` and test on total quanta `<= --n-max`.
    #[arg(long, requires = "n_max")]
    pub full: bool,
    /// Total-quanta cutoff for `--full`.
    #[arg(long, requires = "full")]
    pub n_max: Option<u32>,
    /// Gauss-Legendre nodes in cos θ (default 2j + 2).
    #[arg(long, conflicts_with = "full", requires = "phi_count")]
    pub theta_nodes: Option<usize>,
    /// Uniform φ points (default 2·2j + 2).
    #[arg(long, conflicts_with = "full", requires = "theta_nodes")]
    pub phi_count: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ThermoArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// First inverse temperature of the sweep.
    #[arg(long, value_parser = finite)]
    pub beta_min: f64,
    /// Last inverse temperature of the sweep.
    #[arg(long, value_parser = finite)]
    pub beta_max: f64,
    /// Number of evenly spaced β points.
    #[arg(long)]
    pub steps: usize,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(Error),
    NonFinite(&'static str),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(e) => match e.class() {
                ErrorClass::InvalidInput => 2,
                ErrorClass::PhysicalDomain => 3,
                ErrorClass::Numerical => 4,
            },
            CliError::NonFinite(_) => 4,
            CliError::Io(_) => 1,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "InvalidArguments",
            CliError::Domain(e) => e.code(),
            CliError::NonFinite(_) => "NonFiniteOutput",
            CliError::Io(_) => "Io",
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Io(m) => m.clone(),
            CliError::Domain(e) => e.to_string(),
            CliError::NonFinite(field) => format!("non-finite value in `{field}`"),
        }
    }

    /// Single-line JSON object `{code, message}`.
    pub fn to_json(&self) -> String {
        json!({ "code": self.code(), "message": self.message() }).to_string()
    }
}

/// Result of one invocation, ready to be written out by a thin `main`.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: 0, stdout: e.to_string().into_bytes(), stderr: String::new() };
            }
            let text = e.to_string();
            let detail: Vec<&str> = text
                .lines()
                .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect();
            let err = CliError::Usage(detail.join(" ").trim_start_matches("error: ").to_string());
            return Outcome { code: 2, stdout: Vec::new(), stderr: err.to_json() + "\n" };
        }
    };
    let output = cli.output.clone();
    let result = run(&cli).and_then(|bytes| match &output {
        Some(path) => std::fs::write(path, &bytes)
            .map(|_| Vec::new())
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => Ok(bytes),
    });
    match result {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(e) => Outcome { code: e.exit_code(), stdout: Vec::new(), stderr: e.to_json() + "\n" },
    }
}

/// Runs a parsed command and returns the emitted artifact.
pub fn run(cli: &Cli) -> Result<Vec<u8>, CliError> {
    let text = match &cli.command {
        Command::Acs(a) => run_acs(a, cli.format)?,
        Command::Spectrum(a) => run_spectrum(a, cli.format)?,
        Command::Residual(a) => run_residual(a, cli.format)?,
        Command::Completeness(a) => run_completeness(a, cli.format)?,
        Command::Thermo(a) => run_thermo(a, cli.format)?,
    };
    Ok(text.into_bytes())
}

/// Checks finiteness and folds `-0.0` into `0.0`.
fn num(x: f64, field: &'static str) -> Result<f64, CliError> {
    if x.is_finite() {
        Ok(x + 0.0)
    } else {
        Err(CliError::NonFinite(field))
    }
}

/// Shortest round-trip decimal.
fn fmt(x: f64) -> String {
    serde_json::to_string(&x).expect("finite float")
}

fn complex_json(z: Complex64, field: &'static str) -> Result<Value, CliError> {
    Ok(json!({ "re": num(z.re, field)?, "im": num(z.im, field)? }))
}

fn to_pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json value") + "\n"
}

fn csv_table(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::Io(e.to_string()))?;
    for row in rows {
        w.write_record(row).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

fn run_acs(a: &AcsArgs, format: Format) -> Result<String, CliError> {
    let tau = match (a.tau_re, a.tau_im, a.theta, a.phi) {
        (Some(re), Some(im), None, None) => Complex64::new(re, im),
        (None, None, Some(theta), Some(phi)) => AcsAngles::new(theta, phi)?.tau()?,
        (None, None, None, None) => {
            return Err(CliError::Usage("give --tau-re/--tau-im or --theta/--phi".into()))
        }
        _ => return Err(CliError::Usage("--tau-re/--tau-im and --theta/--phi are exclusive".into())),
    };
    let state = build_acs(AcsLabel::new(a.two_j, tau)?)?;
    let mut rows = Vec::with_capacity(state.dim());
    for (l, amp) in state.amps().iter().enumerate() {
        let occ = state.occupation(l);
        rows.push((l, occ.n_a, occ.n_b, num(amp.re, "re")?, num(amp.im, "im")?));
    }
    match format {
        Format::Csv => csv_table(
            &["l", "n_a", "n_b", "re", "im"],
            &rows
                .iter()
                .map(|(l, na, nb, re, im)| {
                    vec![l.to_string(), na.to_string(), nb.to_string(), fmt(*re), fmt(*im)]
                })
                .collect::<Vec<_>>(),
        ),
        Format::Json => {
            let amps: Vec<Value> = rows
                .iter()
                .map(|(l, na, nb, re, im)| json!({ "l": l, "n_a": na, "n_b": nb, "re": re, "im": im }))
                .collect();
            Ok(to_pretty(&json!({
                "two_j": a.two_j,
                "tau": complex_json(tau, "tau")?,
                "amplitudes": amps,
            })))
        }
    }
}

fn run_spectrum(a: &SpectrumArgs, format: Format) -> Result<String, CliError> {
    let p = a.model.params()?;
    let closed = spectrum_closed(&p, a.two_j);
    let oracle = block_spectrum_oracle(&p, a.two_j)?;
    let modes = normal_modes(&p);
    let taus = match tau_pm(&p) {
        Ok(t) => Some(t),
        Err(Error::ZeroCoupling) => None,
        Err(e) => return Err(e.into()),
    };
    let e_plus = num(energy(&p, a.two_j, Branch::Plus), "E_plus")?;
    let e_minus = num(energy(&p, a.two_j, Branch::Minus), "E_minus")?;
    let mut rows = Vec::with_capacity(closed.len());
    for (n, (c, o)) in closed.iter().zip(&oracle).enumerate() {
        rows.push((n, num(*c, "closed")?, num(*o, "oracle")?, num((c - o).abs(), "abs_diff")?));
    }
    match format {
        Format::Csv => {
            let mut out = csv_table(
                &["n", "closed_form_eigenvalue", "oracle_eigenvalue", "abs_diff"],
                &rows
                    .iter()
                    .map(|(n, c, o, d)| vec![n.to_string(), fmt(*c), fmt(*o), fmt(*d)])
                    .collect::<Vec<_>>(),
            )?;
            // summary block after the table; comment lines keep the header first
            let _ = writeln!(out, "# A={}", fmt(num(modes.a, "A")?));
            let _ = writeln!(out, "# B={}", fmt(num(modes.b, "B")?));
            let _ = writeln!(out, "# E_plus={}", fmt(e_plus));
            let _ = writeln!(out, "# E_minus={}", fmt(e_minus));
            if let Some((tp, tm)) = taus {
                let _ = writeln!(out, "# tau_plus={},{}", fmt(num(tp.re, "tau")?), fmt(num(tp.im, "tau")?));
                let _ = writeln!(out, "# tau_minus={},{}", fmt(num(tm.re, "tau")?), fmt(num(tm.im, "tau")?));
            }
            Ok(out)
        }
        Format::Json => {
            let (tp, tm) = match taus {
                Some((tp, tm)) => (complex_json(tp, "tau")?, complex_json(tm, "tau")?),
                None => (Value::Null, Value::Null),
            };
            let rows: Vec<Value> = rows
                .iter()
                .map(|(n, c, o, d)| {
                    json!({ "n": n, "closed_form_eigenvalue": c, "oracle_eigenvalue": o, "abs_diff": d })
                })
                .collect();
            Ok(to_pretty(&json!({
                "two_j": a.two_j,
                "A": num(modes.a, "A")?,
                "B": num(modes.b, "B")?,
                "E_plus": e_plus,
                "E_minus": e_minus,
                "tau_plus": tp,
                "tau_minus": tm,
                "rows": rows,
            })))
        }
    }
}

/// Reads the `{two_j, tau, amplitudes}` document written by `acs --format json`.
pub fn read_state_file(path: &std::path::Path) -> Result<(BlockVector, Complex64), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let bad = |what: &str| CliError::Usage(format!("{}: {what}", path.display()));
    let doc: Value = serde_json::from_str(&text).map_err(|e| bad(&e.to_string()))?;
    let two_j = doc["two_j"].as_u64().ok_or_else(|| bad("missing two_j"))? as u32;
    let tau = Complex64::new(
        doc["tau"]["re"].as_f64().ok_or_else(|| bad("missing tau.re"))?,
        doc["tau"]["im"].as_f64().ok_or_else(|| bad("missing tau.im"))?,
    );
    let entries = doc["amplitudes"].as_array().ok_or_else(|| bad("missing amplitudes"))?;
    let mut amps = vec![Complex64::new(0.0, 0.0); two_j as usize + 1];
    for e in entries {
        let l = e["l"].as_u64().ok_or_else(|| bad("amplitude without l"))? as usize;
        let slot = amps.get_mut(l).ok_or_else(|| bad("amplitude index outside block"))?;
        *slot = Complex64::new(
            e["re"].as_f64().ok_or_else(|| bad("amplitude without re"))?,
            e["im"].as_f64().ok_or_else(|| bad("amplitude without im"))?,
        );
    }
    Ok((BlockVector::from_amps(two_j, amps)?, tau))
}

fn run_residual(a: &ResidualArgs, format: Format) -> Result<String, CliError> {
    let p = a.model.params()?;
    let (state, tau, source) = match &a.verify_file {
        Some(path) => {
            let (state, tau) = read_state_file(path)?;
            if let Some(tj) = a.two_j {
                if tj != state.two_j() {
                    return Err(CliError::Usage(format!(
                        "--two-j {tj} does not match the file's two_j {}",
                        state.two_j()
                    )));
                }
            }
            (state, tau, "file")
        }
        None => {
            let two_j = a.two_j.expect("clap enforces --two-j");
            let tau = tau_of(&p, a.branch)?;
            (build_acs(AcsLabel::new(two_j, tau)?)?, tau, "closed")
        }
    };
    let two_j = state.two_j();
    let e = energy(&p, two_j, a.branch);
    let h_state = hamiltonian_block(&p, two_j).matvec(&state)?;
    let residual = h_state.axpy(Complex64::from(-e), &state)?.norm();
    let rel = residuals_of(&state, tau);

    let values = [
        ("tau_re", num(tau.re, "tau_re")?),
        ("tau_im", num(tau.im, "tau_im")?),
        ("energy", num(e, "energy")?),
        ("residual", num(residual, "residual")?),
        ("r1", num(rel.r1, "r1")?),
        ("r2", num(rel.r2, "r2")?),
        ("r3", num(rel.r3, "r3")?),
    ];
    match format {
        Format::Csv => {
            let mut header = vec!["two_j", "branch", "source"];
            header.extend(values.iter().map(|(k, _)| *k));
            let mut row = vec![two_j.to_string(), a.branch.to_string(), source.to_string()];
            row.extend(values.iter().map(|(_, v)| fmt(*v)));
            csv_table(&header, &[row])
        }
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("two_j".into(), json!(two_j));
            obj.insert("branch".into(), json!(a.branch.to_string()));
            obj.insert("source".into(), json!(source));
            for (k, v) in values {
                obj.insert(k.into(), json!(v));
            }
            Ok(to_pretty(&Value::Object(obj)))
        }
    }
}

fn report_output(r: &ResolutionReport, format: Format) -> Result<String, CliError> {
    let dev = num(r.max_abs_deviation, "max_abs_deviation")?;
    let cross = r.cross_block_max.map(|c| num(c, "cross_block_max")).transpose()?;
    match format {
        Format::Csv => csv_table(
            &["two_j", "n_max", "max_abs_deviation", "cross_block_max", "theta_nodes", "phi_count"],
            &[vec![
                r.two_j.to_string(),
                r.n_max.map(|n| n.to_string()).unwrap_or_default(),
                fmt(dev),
                cross.map(fmt).unwrap_or_default(),
                r.grid_used.theta_nodes.to_string(),
                r.grid_used.phi_count.to_string(),
            ]],
        ),
        Format::Json => Ok(to_pretty(&json!({
            "two_j": r.two_j,
            "n_max": r.n_max,
            "max_abs_deviation": dev,
            "cross_block_max": cross,
            "grid_used": r.grid_used,
        }))),
    }
}

fn run_completeness(a: &CompletenessArgs, format: Format) -> Result<String, CliError> {
    let report = if a.full {
        identity_resolution_full(a.two_j, a.n_max.expect("clap enforces --n-max"))?
    } else {
        let grid = match (a.theta_nodes, a.phi_count) {
            (Some(t), Some(p)) => SphereGrid::new(t, p),
            _ => SphereGrid::for_block(a.two_j),
        };
        identity_resolution_j(a.two_j, &grid)?
    };
    report_output(&report, format)
}

fn run_thermo(a: &ThermoArgs, format: Format) -> Result<String, CliError> {
    let p = a.model.params()?;
    if a.steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    if a.beta_max < a.beta_min {
        return Err(CliError::Usage("--beta-max must not be below --beta-min".into()));
    }
    ThermoParams::new(a.beta_min)?;
    let betas: Vec<f64> = (0..a.steps)
        .map(|k| {
            if a.steps == 1 {
                a.beta_min
            } else {
                a.beta_min + (a.beta_max - a.beta_min) * k as f64 / (a.steps - 1) as f64
            }
        })
        .collect();
    // ordered collection keeps the output independent of scheduling
    let points: Vec<_> = betas
        .par_iter()
        .map(|&b| -> Result<_, Error> {
            let t = ThermoParams::new(b)?;
            let r = total_partition(&p, t)?;
            let (_, u_oracle) = spectral_sum_oracle_auto(&p, t)?;
            Ok((r, u_oracle))
        })
        .collect::<Result<_, _>>()?;

    let mut rows = Vec::with_capacity(points.len());
    for (r, u_oracle) in points {
        let rel = (r.internal_energy - u_oracle).abs() / r.internal_energy.abs();
        rows.push([
            num(r.beta, "beta")?,
            num(r.z_plus, "Z_plus")?,
            num(r.z_minus, "Z_minus")?,
            num(r.z_total, "Z")?,
            num(r.internal_energy, "U")?,
            num(u_oracle, "U_oracle")?,
            num(rel, "rel_err")?,
        ]);
    }
    const HEADER: [&str; 7] = ["beta", "Z_plus", "Z_minus", "Z", "U", "U_oracle", "rel_err"];
    match format {
        Format::Csv => csv_table(
            &HEADER,
            &rows.iter().map(|r| r.iter().map(|v| fmt(*v)).collect()).collect::<Vec<_>>(),
        ),
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    Value::Object(HEADER.iter().zip(r).map(|(k, v)| (k.to_string(), json!(v))).collect())
                })
                .collect();
            Ok(to_pretty(&json!({
                "w1": a.model.w1,
                "w2": a.model.w2,
                "lambda": a.model.lambda,
                "rows": rows,
            })))
        }
    }
}
