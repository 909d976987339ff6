//! Command-line laboratory for 1-D scattering resonances.
//!
//! Two independent solvers are exposed: the direct transfer-matrix pole
//! finder (`resonances`) and the CAP-regularized spectral solver
//! (`cap-spectrum`), tied together by the ε-sweep harness (`sweep`) and
//! its companion experiments (`conjugation`, `pseudospectrum`,
//! `sinc-sweep`). Closed-form reference spectra are printed by `oracle`;
//! `export` re-renders a saved sweep report.
//!
//! Subcommands read a JSON config (see `configs/` for shipped examples)
//! whose fields individual flags may override. Artifacts are written to
//! `--out` (default `out/`).
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure,
//! 4 I/O failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use viscolim_core::basis::{BasisError, CapConfig};
use viscolim_core::eigensolver::{stability_filter, EigenError, Spectrum};
use viscolim_core::export::{
    matches_csv, pseudospectrum_csv, read_json, report_spectra_csv, resonances_csv, spectra_csv,
    write_artifact, write_json, write_sweep_svg, ExportError, SpectrumDocument,
};
use viscolim_core::harness::{
    conjugation_check, pseudospectrum_scan, run_sweep, sinc_sweep, HarnessError,
};
use viscolim_core::linalg::LinalgError;
use viscolim_core::oracles::{
    davies_spectrum, quadratic_cap_eigenvalues, quadratic_resonances, MultiIndexBox, OracleError,
};
use viscolim_core::resonance::{find_resonances, ResonanceError, DEFAULT_NEWTON_TOL};
use viscolim_core::{C64, ConvergenceReport, KRectangle, Potential, SectorWindow, SweepConfig};

// ---------------------------------------------------------------------------
// Error classification → exit codes
// ---------------------------------------------------------------------------

/// All CLI failures, classified by exit code.
#[derive(Debug)]
enum CliError {
    /// Malformed or inconsistent configuration (exit 2).
    Config(String),
    /// A solver failed numerically on valid input (exit 3).
    Numerical(String),
    /// Reading or writing a file failed (exit 4).
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numerical(m) | CliError::Io(m) => m,
        }
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<BasisError> for CliError {
    fn from(e: BasisError) -> Self {
        match e {
            BasisError::Linalg(l) => l.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<EigenError> for CliError {
    fn from(e: EigenError) -> Self {
        match e {
            EigenError::Basis(b) => b.into(),
            EigenError::Linalg(l) => l.into(),
            EigenError::Invalid(m) => CliError::Config(m),
        }
    }
}

impl From<ResonanceError> for CliError {
    fn from(e: ResonanceError) -> Self {
        match e {
            ResonanceError::ZeroWavenumber | ResonanceError::InvalidRegion(_) => {
                CliError::Config(e.to_string())
            }
            ResonanceError::BoundaryTooCloseToZero
            | ResonanceError::PhaseTrackingInconsistent
            | ResonanceError::BudgetExceeded { .. } => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Config(m) => CliError::Config(m),
            HarnessError::Basis(b) => b.into(),
            HarnessError::Eigen(g) => g.into(),
            HarnessError::Linalg(l) => l.into(),
            HarnessError::Resonance(r) => r.into(),
            HarnessError::Oracle(o) => o.into(),
        }
    }
}

impl From<ExportError> for CliError {
    fn from(e: ExportError) -> Self {
        CliError::Io(e.to_string())
    }
}

// ---------------------------------------------------------------------------
// Config files
// ---------------------------------------------------------------------------

/// Read and parse a JSON config: unreadable file → I/O error, malformed
/// or invalid content → configuration error.
fn load_config<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("failed to read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("failed to parse {}: {e}", path.display())))
}

/// Config for the direct transfer-matrix solver.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ResonancesConfig {
    potential: Potential,
    k_rect: KRectangle,
    #[serde(default = "default_newton_tol")]
    newton_tol: f64,
}

fn default_newton_tol() -> f64 {
    DEFAULT_NEWTON_TOL
}

/// Config for a single CAP Galerkin solve.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CapRunConfig {
    potential: Potential,
    epsilon: f64,
    #[serde(default)]
    alpha: f64,
    basis_size: usize,
    #[serde(default = "default_basis_scale")]
    basis_scale: f64,
    #[serde(default)]
    quadrature_order: Option<usize>,
    #[serde(default)]
    window: Option<SectorWindow>,
    #[serde(default = "default_growth")]
    stability_growth: f64,
    #[serde(default = "default_match_tol")]
    stability_match_tol: f64,
}

fn default_basis_scale() -> f64 {
    1.0
}

fn default_growth() -> f64 {
    1.5
}

fn default_match_tol() -> f64 {
    1e-6
}

/// Config for the conjugation-symmetry experiment.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConjugationConfig {
    potential: Potential,
    epsilon: f64,
    basis_size: usize,
    #[serde(default)]
    window: Option<SectorWindow>,
    #[serde(default = "default_growth")]
    stability_growth: f64,
    #[serde(default = "default_match_tol")]
    stability_match_tol: f64,
}

/// One complex grid point in a pseudospectrum config.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GridPoint {
    re: f64,
    im: f64,
}

/// Config for the free-operator resolvent-norm scan.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PseudospectrumConfig {
    gamma: f64,
    epsilons: Vec<f64>,
    basis_size: usize,
    points: Vec<GridPoint>,
}

/// Config for the exploratory sinc-potential sweep.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SincSweepConfig {
    epsilons: Vec<f64>,
    basis_size: usize,
    #[serde(default)]
    window: Option<SectorWindow>,
    #[serde(default = "default_growth")]
    stability_growth: f64,
    #[serde(default = "default_match_tol")]
    stability_match_tol: f64,
}

// ---------------------------------------------------------------------------
// CLI surface
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "viscolim",
    version,
    about = "Scattering resonances of 1-D Schrödinger operators: direct pole finding and CAP viscosity limits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutArg {
    /// Directory artifacts are written into.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Find resonances and bound states directly as certified zeros of the
    /// transfer-matrix matching function.
    Resonances {
        /// JSON config with `potential`, `k_rect`, optional `newton_tol`.
        #[arg(long)]
        config: PathBuf,
        /// Override the Newton refinement tolerance.
        #[arg(long)]
        newton_tol: Option<f64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Solve one CAP-regularized operator and report its stability-filtered
    /// spectrum.
    CapSpectrum {
        /// JSON config with `potential`, `epsilon`, `basis_size`, ...
        #[arg(long)]
        config: PathBuf,
        /// Override the regularization strength ε.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Override the CAP phase α.
        #[arg(long)]
        alpha: Option<f64>,
        /// Override the basis size N.
        #[arg(long)]
        basis_size: Option<usize>,
        /// Override the basis dilation s.
        #[arg(long)]
        basis_scale: Option<f64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run an ε-ladder convergence experiment against resonance targets.
    Sweep {
        /// JSON sweep config (see configs/barrier_sweep.json).
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Print a closed-form reference spectrum as CSV on stdout.
    Oracle {
        #[command(subcommand)]
        kind: OracleKind,
    },
    /// Check the spectral conjugation symmetry between ±ε.
    Conjugation {
        /// JSON config with `potential`, `epsilon`, `basis_size`, ...
        #[arg(long)]
        config: PathBuf,
        /// Override the regularization strength ε.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Override the basis size N.
        #[arg(long)]
        basis_size: Option<usize>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Scan resolvent norms of the free CAP operator across an ε ladder.
    Pseudospectrum {
        /// JSON config with `gamma`, `epsilons`, `basis_size`, `points`.
        #[arg(long)]
        config: PathBuf,
        /// Override the basis size N.
        #[arg(long)]
        basis_size: Option<usize>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Exploratory CAP sweep for the non-compactly-supported sinc
    /// potential (no convergence claim; no direct solver exists for it).
    SincSweep {
        /// JSON config with `epsilons`, `basis_size`, optional `window`.
        #[arg(long)]
        config: PathBuf,
        /// Override the basis size N.
        #[arg(long)]
        basis_size: Option<usize>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Re-render a saved sweep report into CSV and SVG artifacts.
    Export {
        /// Path to a report.json produced by `sweep`.
        #[arg(long)]
        report: PathBuf,
        /// What to render: csv, svg, or all.
        #[arg(long, default_value = "all")]
        format: ExportFormat,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand)]
enum OracleKind {
    /// Rotated harmonic oscillator −Δ + εe^{−iγ}x²: e^{−iγ/2}√ε(n + 2|k|).
    Davies {
        #[arg(long)]
        epsilon: f64,
        /// Rotation angle γ ∈ (0, π).
        #[arg(long)]
        gamma: f64,
        /// Spatial dimension n ≥ 1.
        #[arg(long, default_value_t = 1)]
        dimension: usize,
        /// Largest multi-index weight enumerated.
        #[arg(long, default_value_t = 8)]
        max_level: usize,
    },
    /// Exact resonance lattice of V = Σλ²x² − Σμ²y².
    Quadratic {
        /// Comma-separated elliptic frequencies λ_j.
        #[arg(long, value_delimiter = ',', default_value = "1.0")]
        lambdas: Vec<f64>,
        /// Comma-separated hyperbolic frequencies μ_j.
        #[arg(long, value_delimiter = ',', default_value = "")]
        mus: Vec<f64>,
        #[arg(long, default_value_t = 4)]
        max_level: usize,
    },
    /// CAP-regularized quadratic spectrum at finite ε (limits to
    /// `quadratic` as ε → 0).
    Cap {
        #[arg(long)]
        epsilon: f64,
        #[arg(long, value_delimiter = ',', default_value = "1.0")]
        lambdas: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "")]
        mus: Vec<f64>,
        #[arg(long, default_value_t = 4)]
        max_level: usize,
    },
}

#[derive(Clone, Copy, PartialEq, clap::ValueEnum)]
enum ExportFormat {
    Csv,
    Svg,
    All,
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

fn cmd_resonances(
    config: &Path,
    newton_tol: Option<f64>,
    out: &Path,
) -> Result<(), CliError> {
    let mut cfg: ResonancesConfig = load_config(config)?;
    if let Some(tol) = newton_tol {
        cfg.newton_tol = tol;
    }
    let piecewise = match &cfg.potential {
        Potential::Piecewise(p) => p,
        _ => {
            return Err(CliError::Config(
                "the direct solver requires a piecewise-constant potential".into(),
            ))
        }
    };
    let set = find_resonances(piecewise, &cfg.k_rect, cfg.newton_tol)?;
    write_json(&set, &out.join("resonances.json"))?;
    write_artifact(&out.join("resonances.csv"), &resonances_csv(&set))?;
    println!(
        "{} zeros (total multiplicity {}) in [{}, {}] × [{}, {}]i",
        set.poles.len(),
        set.total_multiplicity(),
        cfg.k_rect.re_min,
        cfg.k_rect.re_max,
        cfg.k_rect.im_min,
        cfg.k_rect.im_max
    );
    for r in &set.poles {
        println!(
            "  {}: k = {:.12}{:+.12}i  z = {:.12}{:+.12}i  multiplicity {}  certified {}",
            r.kind.label(),
            r.k.re,
            r.k.im,
            r.z.re,
            r.z.im,
            r.multiplicity,
            r.certified
        );
    }
    println!("wrote {}", out.join("resonances.{json,csv}").display());
    Ok(())
}

fn spectrum_summary(spectrum: &Spectrum, label: &str) {
    let stable = spectrum.stable.iter().filter(|&&s| s).count();
    println!(
        "{label}: {} eigenvalues, {} stable",
        spectrum.len(),
        stable
    );
    for (i, &z) in spectrum.eigenvalues.iter().enumerate().take(12) {
        println!(
            "  {z_re:+.12e} {z_im:+.12e}i  residual {res:.2e}  stable {st}",
            z_re = z.re,
            z_im = z.im,
            res = spectrum.residuals[i],
            st = spectrum.stable[i]
        );
    }
    if spectrum.len() > 12 {
        println!("  ... ({} more)", spectrum.len() - 12);
    }
}

fn cmd_cap_spectrum(
    config: &Path,
    epsilon: Option<f64>,
    alpha: Option<f64>,
    basis_size: Option<usize>,
    basis_scale: Option<f64>,
    out: &Path,
) -> Result<(), CliError> {
    let mut cfg: CapRunConfig = load_config(config)?;
    if let Some(e) = epsilon {
        cfg.epsilon = e;
    }
    if let Some(a) = alpha {
        cfg.alpha = a;
    }
    if let Some(n) = basis_size {
        cfg.basis_size = n;
    }
    if let Some(s) = basis_scale {
        cfg.basis_scale = s;
    }
    let cap = CapConfig {
        epsilon: cfg.epsilon,
        alpha: cfg.alpha,
        basis_size: cfg.basis_size,
        quadrature_order: cfg.quadrature_order,
        basis_scale: cfg.basis_scale,
    };
    let spectrum = stability_filter(
        &cfg.potential,
        &cap,
        cfg.stability_growth,
        cfg.stability_match_tol,
    )?;
    let spectrum = match &cfg.window {
        Some(w) => {
            w.validate()?;
            spectrum.windowed(w)
        }
        None => spectrum,
    };
    write_json(&spectrum, &out.join("spectrum.json"))?;
    let doc = SpectrumDocument {
        epsilon: cfg.epsilon,
        alpha: cfg.alpha,
        spectrum,
    };
    write_artifact(&out.join("spectra.csv"), &spectra_csv(std::slice::from_ref(&doc)))?;
    spectrum_summary(
        &doc.spectrum,
        &format!("ε = {}, α = {}, N = {}", cfg.epsilon, cfg.alpha, cfg.basis_size),
    );
    println!("wrote {}", out.join("spectrum.json").display());
    Ok(())
}

fn cmd_sweep(config: &Path, out: &Path) -> Result<(), CliError> {
    let cfg: SweepConfig = load_config(config)?;
    let out_dir: &Path = cfg.output_dir.as_deref().unwrap_or(out);
    let report = run_sweep(&cfg)?;
    write_json(&report, &out_dir.join("report.json"))?;
    write_artifact(&out_dir.join("matches.csv"), &matches_csv(&report))?;
    write_artifact(
        &out_dir.join("spectra.csv"),
        &report_spectra_csv(&report),
    )?;
    write_sweep_svg(&report, &out_dir.join("sweep.svg"))?;

    println!(
        "{} resonance target(s) in the window; ladder of {} ε value(s)",
        report.targets.len(),
        report.per_epsilon.len()
    );
    for rung in &report.per_epsilon {
        match &rung.failure {
            Some(f) => println!("  ε = {:<10} FAILED: {f}", rung.epsilon),
            None => println!(
                "  ε = {:<10} {} stable in window, {} matched, {} unmatched eigenvalue(s)",
                rung.epsilon,
                rung.spectrum.stable_eigenvalues().len(),
                rung.matched.len(),
                rung.unmatched_eigenvalues.len()
            ),
        }
    }
    for seq in &report.error_sequences {
        let errs: Vec<String> = seq
            .errors
            .iter()
            .map(|e| e.map_or_else(|| "unmatched".into(), |x| format!("{x:.6e}")))
            .collect();
        println!(
            "  target z = {:.9}{:+.9}i (m = {}): {}",
            seq.resonance.re,
            seq.resonance.im,
            seq.multiplicity,
            errs.join(" → ")
        );
    }
    for dc in &report.disk_counts {
        println!(
            "  D(z = {:.6}{:+.6}i, {}): {} eigenvalue(s), expected {}",
            dc.resonance.re, dc.resonance.im, dc.delta, dc.count, dc.expected
        );
    }
    println!("wrote {}", out_dir.join("{report.json,matches.csv,spectra.csv,sweep.svg}").display());
    Ok(())
}

fn print_oracle_csv(values: &[C64], indices: &MultiIndexBox) {
    println!("index,weight,re,im");
    let enumeration = indices.enumerate();
    for (i, z) in values.iter().enumerate() {
        let weight: usize = enumeration[i].iter().sum();
        println!("{i},{weight},{:.16e},{:.16e}", z.re, z.im);
    }
}

fn cmd_oracle(kind: &OracleKind) -> Result<(), CliError> {
    match kind {
        OracleKind::Davies {
            epsilon,
            gamma,
            dimension,
            max_level,
        } => {
            let indices = MultiIndexBox::new(*dimension, *max_level)?;
            let values = davies_spectrum(*epsilon, *gamma, &indices)?;
            print_oracle_csv(&values, &indices);
        }
        OracleKind::Quadratic {
            lambdas,
            mus,
            max_level,
        } => {
            let (lambdas, mus) = (clean(lambdas), clean(mus));
            let indices = MultiIndexBox::new(lambdas.len() + mus.len(), *max_level)?;
            let values = quadratic_resonances(&lambdas, &mus, &indices)?;
            print_oracle_csv(&values, &indices);
        }
        OracleKind::Cap {
            epsilon,
            lambdas,
            mus,
            max_level,
        } => {
            let (lambdas, mus) = (clean(lambdas), clean(mus));
            let indices = MultiIndexBox::new(lambdas.len() + mus.len(), *max_level)?;
            let values = quadratic_cap_eigenvalues(&lambdas, &mus, *epsilon, &indices)?;
            print_oracle_csv(&values, &indices);
        }
    }
    Ok(())
}

/// clap's empty-string default for an optional list parses as [0.0]; an
/// empty μ list is legitimate (purely elliptic potential), so drop it.
fn clean(values: &[f64]) -> Vec<f64> {
    if values.is_empty() {
        return Vec::new();
    }
    values.to_vec()
}

fn cmd_conjugation(
    config: &Path,
    epsilon: Option<f64>,
    basis_size: Option<usize>,
    out: &Path,
) -> Result<(), CliError> {
    let mut cfg: ConjugationConfig = load_config(config)?;
    if let Some(e) = epsilon {
        cfg.epsilon = e;
    }
    if let Some(n) = basis_size {
        cfg.basis_size = n;
    }
    let window = cfg.window.unwrap_or_default();
    let report = conjugation_check(
        &cfg.potential,
        cfg.epsilon,
        cfg.basis_size,
        &window,
        cfg.stability_growth,
        cfg.stability_match_tol,
    )?;
    write_json(&report, &out.join("conjugation.json"))?;
    println!(
        "Hausdorff distance between σ(P₋ε) and conj(σ(P₊ε)): {:.6e} over {}/{} stable windowed eigenvalues",
        report.hausdorff,
        report.conjugated_plus.len(),
        report.minus.len()
    );
    println!("wrote {}", out.join("conjugation.json").display());
    Ok(())
}

fn cmd_pseudospectrum(
    config: &Path,
    basis_size: Option<usize>,
    out: &Path,
) -> Result<(), CliError> {
    let mut cfg: PseudospectrumConfig = load_config(config)?;
    if let Some(n) = basis_size {
        cfg.basis_size = n;
    }
    let points: Vec<C64> = cfg.points.iter().map(|p| C64::new(p.re, p.im)).collect();
    let table = pseudospectrum_scan(&cfg.epsilons, cfg.gamma, &points, cfg.basis_size)?;
    write_json(&table, &out.join("pseudospectrum.json"))?;
    write_artifact(
        &out.join("pseudospectrum.csv"),
        &pseudospectrum_csv(&table),
    )?;
    println!(
        "γ = {}, N = {}, ε ladder {:?}",
        table.gamma, table.basis_size, table.epsilons
    );
    for p in &table.points {
        let norms: Vec<String> = p.norms.iter().map(|n| format!("{n:.6e}")).collect();
        let ratios: Vec<String> = p.ratios.iter().map(|r| format!("{r:.3}")).collect();
        println!(
            "  z = {:.6}{:+.6}i: ‖(P_ε − z)⁻¹‖ = [{}], growth ratios [{}]",
            p.z.re,
            p.z.im,
            norms.join(", "),
            ratios.join(", ")
        );
    }
    println!("wrote {}", out.join("pseudospectrum.{json,csv}").display());
    Ok(())
}

fn cmd_sinc_sweep(
    config: &Path,
    basis_size: Option<usize>,
    out: &Path,
) -> Result<(), CliError> {
    let mut cfg: SincSweepConfig = load_config(config)?;
    if let Some(n) = basis_size {
        cfg.basis_size = n;
    }
    let window = cfg.window.unwrap_or_default();
    let results = sinc_sweep(
        &cfg.epsilons,
        cfg.basis_size,
        &window,
        cfg.stability_growth,
        cfg.stability_match_tol,
    )?;
    let documents: Vec<SpectrumDocument> = results
        .iter()
        .map(|(eps, spectrum)| SpectrumDocument {
            epsilon: *eps,
            alpha: 0.0,
            spectrum: spectrum.clone(),
        })
        .collect();
    write_json(&documents, &out.join("sinc_sweep.json"))?;
    write_artifact(&out.join("sinc_spectra.csv"), &spectra_csv(&documents))?;
    for (eps, spectrum) in &results {
        let stable = spectrum.stable.iter().filter(|&&s| s).count();
        println!(
            "ε = {eps}: {} windowed eigenvalue(s), {} stable",
            spectrum.len(),
            stable
        );
    }
    println!("wrote {}", out.join("sinc_{sweep.json,spectra.csv}").display());
    Ok(())
}

fn cmd_export(report_path: &Path, format: ExportFormat, out: &Path) -> Result<(), CliError> {
    let report: ConvergenceReport = read_json(report_path).map_err(|e| match e {
        // Malformed JSON in a data file is bad input, not an I/O fault.
        ExportError::Json { .. } => CliError::Config(e.to_string()),
        other => CliError::Io(other.to_string()),
    })?;
    if matches!(format, ExportFormat::Csv | ExportFormat::All) {
        write_artifact(&out.join("matches.csv"), &matches_csv(&report))?;
        write_artifact(&out.join("spectra.csv"), &report_spectra_csv(&report))?;
        println!("wrote {}", out.join("{matches.csv,spectra.csv}").display());
    }
    if matches!(format, ExportFormat::Svg | ExportFormat::All) {
        write_sweep_svg(&report, &out.join("sweep.svg"))?;
        println!("wrote {}", out.join("sweep.svg").display());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Resonances {
            config,
            newton_tol,
            out,
        } => cmd_resonances(config, *newton_tol, &out.out),
        Command::CapSpectrum {
            config,
            epsilon,
            alpha,
            basis_size,
            basis_scale,
            out,
        } => cmd_cap_spectrum(config, *epsilon, *alpha, *basis_size, *basis_scale, &out.out),
        Command::Sweep { config, out } => cmd_sweep(config, &out.out),
        Command::Oracle { kind } => cmd_oracle(kind),
        Command::Conjugation {
            config,
            epsilon,
            basis_size,
            out,
        } => cmd_conjugation(config, *epsilon, *basis_size, &out.out),
        Command::Pseudospectrum {
            config,
            basis_size,
            out,
        } => cmd_pseudospectrum(config, *basis_size, &out.out),
        Command::SincSweep {
            config,
            basis_size,
            out,
        } => cmd_sinc_sweep(config, *basis_size, &out.out),
        Command::Export {
            report,
            format,
            out,
        } => cmd_export(report, *format, &out.out),
    }
}

fn main() -> ExitCode {
    // Die quietly when stdout closes mid-stream (`viscolim ... | head`),
    // like any Unix filter; Rust's default turns EPIPE into a panic.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    // Cap the harness's data parallelism when requested (reproducibility
    // of wall times, CI throttling); numerical results do not depend on
    // the thread count.
    if let Ok(threads) = std::env::var("VISCOLIM_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n >= 1 => {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .ok();
            }
            _ => {
                eprintln!("error: VISCOLIM_THREADS must be a positive integer, got {threads:?}");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}
