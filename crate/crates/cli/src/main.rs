//! `dirac-lab`: Dirac operators of commuting tuples from the command line.
//!
//! Exit codes: 0 = pass, 1 = contract/axiom failure, 2 = input error.

mod docs;

use clap::{Parser, Subcommand, ValueEnum};
use diraclab::dirac::{CommutingTuple, DiracPair};
use diraclab::graded::{self, GramKind, Polynomial};
use diraclab::mat::{c, max_abs, C64};
use diraclab::spectral::{self, GridAxis, ScanPoints, SpectralConfig};
use docs::{InputDocument, TupleDocument, TupleLoadError};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "dirac-lab",
    version,
    about = "Dirac operators of commuting matrix tuples: verification, Taylor spectra, Betti/Fredholm data, linear solving, Clifford scans, and graded-module curvature"
)]
struct Cli {
    /// Relative rank tolerance for singular-value decisions.
    #[arg(long, global = true, value_name = "TOL")]
    rank_tol: Option<f64>,

    /// Seed for seeded random choices (falls back to DIRACLAB_SEED, then
    /// the built-in default).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Write a machine-readable JSON report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Dirac axioms of a tuple or Dirac document.
    Verify { input: PathBuf },
    /// Taylor spectrum by candidates-then-verify.
    Spectrum { input: PathBuf },
    /// Fredholm data of the Dirac operator.
    Index { input: PathBuf },
    /// Koszul Betti numbers, harmonic dimensions, Euler number.
    Betti { input: PathBuf },
    /// Solve T_1 x_1 + … + T_d x_d = y in the minimal-norm sense.
    Solve {
        input: PathBuf,
        /// Right-hand side vector file (JSON array of [re, im] pairs).
        #[arg(long, value_name = "FILE")]
        rhs: PathBuf,
    },
    /// Tabulate σ_min(D − R(λ)) over a grid or point list.
    Scan {
        input: PathBuf,
        /// Grid axis MIN:MAX:STEPS; repeat once per real axis (2d total).
        #[arg(long, value_name = "MIN:MAX:STEPS", allow_hyphen_values = true)]
        grid: Vec<String>,
        /// Explicit λ list (JSON array of d-vectors of [re, im] pairs).
        #[arg(long, value_name = "FILE", conflicts_with = "grid")]
        points: Option<PathBuf>,
        /// Output TSV path.
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Recover the commuting tuple of a Dirac operator in standard position.
    Reconstruct { input: PathBuf },
    /// Graded-module engine: Betti tables, stabilized index, curvature.
    Graded {
        #[command(subcommand)]
        family: GradedCommand,
    },
}

#[derive(Subcommand)]
enum GradedCommand {
    /// Free module of a given rank (the d-shift under the Fock Gram).
    Free {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = GramArg::Fock)]
        gram: GramArg,
    },
    /// Quotient of (r+1)·H² by the graph of homogeneous multipliers.
    ShiftQuotient {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r: usize,
        /// Homogeneous multiplier as 'coeff:(e1,…,ed)' terms joined by '+',
        /// e.g. "1:(1,0)" or "1:(2,0)+-0.5:(1,1)". Repeat r times.
        #[arg(long = "phi", value_name = "POLY")]
        phis: Vec<String>,
        #[arg(long)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = GramArg::Fock)]
        gram: GramArg,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GramArg {
    Identity,
    Fock,
}

impl From<GramArg> for GramKind {
    fn from(g: GramArg) -> Self {
        match g {
            GramArg::Identity => GramKind::Identity,
            GramArg::Fock => GramKind::Fock,
        }
    }
}

/// Input problems exit 2, contract/axiom failures exit 1.
enum CliError {
    Input(String),
    Contract(String),
}

impl CliError {
    fn report(self) -> ExitCode {
        match self {
            CliError::Input(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
            CliError::Contract(msg) => {
                eprintln!("failure: {msg}");
                ExitCode::from(1)
            }
        }
    }
}

impl From<TupleLoadError> for CliError {
    fn from(e: TupleLoadError) -> Self {
        match e {
            TupleLoadError::Shape(msg) => CliError::Input(msg),
            TupleLoadError::Contract(err) => CliError::Contract(err.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.report(),
    }
}

/// 15 significant digits.
fn sig(x: f64) -> String {
    format!("{:.14e}", x)
}

fn fmt_complex(z: C64) -> String {
    format!("{:.14e} {:+.14e}i", z.re, z.im)
}

fn fmt_point(p: &[C64]) -> String {
    let parts: Vec<String> = p.iter().map(|z| fmt_complex(*z)).collect();
    format!("({})", parts.join(", "))
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_input(path: &Path) -> Result<InputDocument, CliError> {
    let text = read_file(path)?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("cannot parse {}: {e}", path.display())))
}

fn load_tuple(path: &Path) -> Result<CommutingTuple, CliError> {
    match load_input(path)? {
        InputDocument::Tuple(doc) => Ok(doc.to_tuple()?),
        InputDocument::Dirac(_) => {
            Err(CliError::Input(format!("{} is a Dirac document; a tuple document is required", path.display())))
        }
    }
}

fn write_json(path: &Option<PathBuf>, value: &serde_json::Value) -> Result<(), CliError> {
    if let Some(path) = path {
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| CliError::Input(format!("cannot serialize report: {e}")))?;
        text.push('\n');
        std::fs::write(path, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn spectral_config(cli_rank_tol: Option<f64>, cli_seed: Option<u64>) -> SpectralConfig {
    let mut config = SpectralConfig::default();
    if let Some(tol) = cli_rank_tol {
        config.rank_tol = tol;
    }
    config.seed = cli_seed
        .or_else(|| std::env::var("DIRACLAB_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(diraclab::DEFAULT_SEED);
    config
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = spectral_config(cli.rank_tol, cli.seed);
    match cli.command {
        Command::Verify { input } => cmd_verify(&input, &cli.json),
        Command::Spectrum { input } => cmd_spectrum(&input, &config, &cli.json),
        Command::Index { input } => cmd_index(&input, &config, &cli.json),
        Command::Betti { input } => cmd_betti(&input, &config, &cli.json),
        Command::Solve { input, rhs } => cmd_solve(&input, &rhs, &config, &cli.json),
        Command::Scan { input, grid, points, out } => cmd_scan(&input, &grid, &points, &out, &cli.json),
        Command::Reconstruct { input } => cmd_reconstruct(&input, &cli.json),
        Command::Graded { family } => cmd_graded(family, &config, &cli.json),
    }
}

fn tuple_report(tuple: &CommutingTuple) -> (DiracPair, serde_json::Value, bool) {
    let pair = tuple.assemble_dirac();
    let report = pair.axiom_check();
    let b = tuple.coboundary();
    let b_sq = max_abs(&(&b * &b));
    let d_sq_defect = {
        let d_mat = pair.dirac();
        let rhs = b.adjoint() * &b + &b * b.adjoint();
        max_abs(&(d_mat * d_mat - rhs))
    };
    let pass = report.passes() && b_sq < report.tol && d_sq_defect < report.tol;
    println!("commutator defect: {}", sig(tuple.commutator_defect()));
    println!("axiom residuals:   sa = {}", sig(report.self_adjointness));
    println!("                   D1 = {}", sig(report.d1));
    println!("                   D2 = {}", sig(report.d2));
    println!("                   D3 = {}", sig(report.d3));
    println!("B^2 residual:      {}", sig(b_sq));
    println!("D^2 identity:      {}", sig(d_sq_defect));
    println!("tolerance:         {}", sig(report.tol));
    let json = serde_json::json!({
        "kind": "tuple",
        "d": tuple.d(),
        "n": tuple.n(),
        "commutator_defect": tuple.commutator_defect(),
        "residuals": {
            "self_adjointness": report.self_adjointness,
            "d1": report.d1,
            "d2": report.d2,
            "d3": report.d3,
            "b_squared": b_sq,
            "d_squared_identity": d_sq_defect,
        },
        "tol": report.tol,
        "pass": pass,
    });
    (pair, json, pass)
}

fn cmd_verify(input: &Path, json: &Option<PathBuf>) -> Result<(), CliError> {
    match load_input(input)? {
        InputDocument::Tuple(doc) => {
            let tuple = doc.to_tuple()?;
            println!("input: commuting tuple (d = {}, n = {})", tuple.d(), tuple.n());
            let (_pair, report_json, pass) = tuple_report(&tuple);
            println!("verdict: {}", if pass { "PASS" } else { "FAIL" });
            write_json(json, &report_json)?;
            if pass {
                Ok(())
            } else {
                Err(CliError::Contract("axiom residuals exceed tolerance".into()))
            }
        }
        InputDocument::Dirac(doc) => {
            let pair = doc.to_pair()?;
            println!("input: Dirac document (d = {}, n = {})", pair.d(), pair.n());
            let report = pair.axiom_check();
            println!("axiom residuals:   sa = {}", sig(report.self_adjointness));
            println!("                   D1 = {}", sig(report.d1));
            println!("                   D2 = {}", sig(report.d2));
            println!("                   D3 = {}", sig(report.d3));
            println!("tolerance:         {}", sig(report.tol));
            let reconstruction = pair.reconstruct_tuple();
            let (pass, recovered_json) = match &reconstruction {
                Ok(rec) => {
                    println!(
                        "reconstruction: recovered tuple (off-pattern {}, reassembly {})",
                        sig(rec.off_pattern),
                        sig(rec.assembly_defect)
                    );
                    for k in 1..=rec.tuple.d() {
                        println!("T_{k}:");
                        let m = rec.tuple.matrix(k);
                        for i in 0..m.nrows() {
                            let row: Vec<String> =
                                (0..m.ncols()).map(|j| fmt_complex(m[(i, j)])).collect();
                            println!("  [{}]", row.join(", "));
                        }
                    }
                    let doc = TupleDocument::from_tuple(&rec.tuple);
                    (true, serde_json::to_value(doc).ok())
                }
                Err(e) => {
                    println!("reconstruction failed: {e}");
                    (false, None)
                }
            };
            println!("verdict: {}", if pass { "PASS" } else { "FAIL" });
            let report_json = serde_json::json!({
                "kind": "dirac",
                "d": pair.d(),
                "n": pair.n(),
                "residuals": {
                    "self_adjointness": report.self_adjointness,
                    "d1": report.d1,
                    "d2": report.d2,
                    "d3": report.d3,
                },
                "tol": report.tol,
                "pass": pass,
                "recovered_tuple": recovered_json,
            });
            write_json(json, &report_json)?;
            if pass {
                Ok(())
            } else {
                Err(CliError::Contract("Dirac document fails the axiom/reconstruction checks".into()))
            }
        }
    }
}

fn cmd_spectrum(input: &Path, config: &SpectralConfig, json: &Option<PathBuf>) -> Result<(), CliError> {
    let tuple = load_tuple(input)?;
    let report = spectral::taylor_spectrum_with(&tuple, config)
        .map_err(|e| CliError::Contract(e.to_string()))?;
    println!("candidates: {}", report.candidates.len());
    for (i, cand) in report.candidates.iter().enumerate() {
        let verdict = if report.verified.iter().any(|v| v == cand) { "in spectrum" } else { "regular" };
        println!(
            "  {} sigma_min = {}  [{verdict}]",
            fmt_point(cand),
            sig(report.min_singular[i])
        );
    }
    println!("verified points: {}", report.verified.len());
    if let Some(grid_min) = report.grid_min_singular {
        println!("coarse-grid cross-check: min sigma_min = {}", sig(grid_min));
    }
    let json_value = serde_json::json!({
        "candidates": report.candidates.iter().map(|p| docs::point_to_json(p)).collect::<Vec<_>>(),
        "verified": report.verified.iter().map(|p| docs::point_to_json(p)).collect::<Vec<_>>(),
        "min_singular": report.min_singular,
        "thresholds": report.thresholds,
        "rank_tol": report.tol,
        "grid_min_singular": report.grid_min_singular,
    });
    write_json(json, &json_value)
}

fn cmd_index(input: &Path, config: &SpectralConfig, json: &Option<PathBuf>) -> Result<(), CliError> {
    let tuple = load_tuple(input)?;
    let report = spectral::fredholm_report_with(&tuple, config.rank_tol);
    let half = tuple.n() * (1usize << (tuple.d() - 1));
    println!("dim ker D_+   = {}", report.dim_ker_plus);
    println!("dim ker D_+^* = {}", report.dim_ker_minus);
    println!("index         = {}", report.index);
    println!(
        "dim H_+ = dim H_- = n·2^(d-1) = {half}; on a finite-dimensional space the index is always 0"
    );
    let json_value = serde_json::json!({
        "dim_ker_plus": report.dim_ker_plus,
        "dim_ker_minus": report.dim_ker_minus,
        "index": report.index,
        "half_dimension": half,
    });
    write_json(json, &json_value)
}

fn cmd_betti(input: &Path, config: &SpectralConfig, json: &Option<PathBuf>) -> Result<(), CliError> {
    let tuple = load_tuple(input)?;
    let bv = spectral::betti_numbers_with(&tuple, config.rank_tol);
    println!("beta     = {:?}", bv.beta);
    println!("harmonic = {:?}", bv.harmonic);
    println!("euler    = {}", bv.euler_number());
    if !bv.rank_stable {
        println!("warning: some rank decision was within 10x of its threshold");
    }
    let json_value = serde_json::json!({
        "beta": bv.beta,
        "harmonic": bv.harmonic,
        "euler": bv.euler_number(),
        "rank_stable": bv.rank_stable,
    });
    write_json(json, &json_value)?;
    if bv.beta == bv.harmonic {
        Ok(())
    } else {
        Err(CliError::Contract("Hodge identity violated: beta != harmonic".into()))
    }
}

fn cmd_solve(
    input: &Path,
    rhs: &Path,
    config: &SpectralConfig,
    json: &Option<PathBuf>,
) -> Result<(), CliError> {
    let tuple = load_tuple(input)?;
    let y = docs::parse_vector(&read_file(rhs)?)
        .map_err(|e| CliError::Input(format!("cannot parse {}: {e}", rhs.display())))?;
    let sol = spectral::solve_linear_with(&tuple, &y, config.rank_tol)
        .map_err(|e| CliError::Input(e.to_string()))?;
    println!("solvable: {}", if sol.solvable { "yes" } else { "no" });
    println!("residual: {}", sig(sol.residual));
    if sol.solvable {
        for (k, x) in sol.components.iter().enumerate() {
            let entries: Vec<String> = x.iter().map(|z| fmt_complex(*z)).collect();
            println!("x_{} = [{}]", k + 1, entries.join(", "));
        }
    }
    println!("perturbation_dim: {}", sol.perturbation_dim);
    println!("kernel_dim at 1-forms: {}", sol.kernel_dim);
    println!(
        "unique mod tautological perturbations: {}",
        if sol.unique_mod_tautological { "yes" } else { "no" }
    );
    let json_value = serde_json::json!({
        "solvable": sol.solvable,
        "residual": sol.residual,
        "x": sol.components.iter().map(docs::vector_to_json).collect::<Vec<_>>(),
        "perturbation_dim": sol.perturbation_dim,
        "kernel_dim": sol.kernel_dim,
        "unique_mod_tautological": sol.unique_mod_tautological,
    });
    write_json(json, &json_value)
}

fn parse_axis(text: &str) -> Result<GridAxis, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Input(format!("grid axis '{text}' is not MIN:MAX:STEPS")));
    }
    let min: f64 = parts[0].parse().map_err(|_| CliError::Input(format!("bad axis min '{}'", parts[0])))?;
    let max: f64 = parts[1].parse().map_err(|_| CliError::Input(format!("bad axis max '{}'", parts[1])))?;
    let steps: usize =
        parts[2].parse().map_err(|_| CliError::Input(format!("bad axis steps '{}'", parts[2])))?;
    Ok(GridAxis { min, max, steps })
}

fn cmd_scan(
    input: &Path,
    grid: &[String],
    points: &Option<PathBuf>,
    out: &Path,
    json: &Option<PathBuf>,
) -> Result<(), CliError> {
    let pair = match load_input(input)? {
        InputDocument::Tuple(doc) => doc.to_tuple()?.assemble_dirac(),
        InputDocument::Dirac(doc) => doc.to_pair()?,
    };
    let source = match points {
        Some(path) => {
            let pts = docs::parse_points(&read_file(path)?)
                .map_err(|e| CliError::Input(format!("cannot parse {}: {e}", path.display())))?;
            ScanPoints::List(pts)
        }
        None => {
            if grid.is_empty() {
                return Err(CliError::Input(
                    "scan needs either --grid axes (2d of them) or --points FILE".into(),
                ));
            }
            let axes: Result<Vec<GridAxis>, CliError> = grid.iter().map(|s| parse_axis(s)).collect();
            ScanPoints::Grid(axes?)
        }
    };
    let table = spectral::clifford_scan(&pair, &source).map_err(|e| match e {
        spectral::SpectralError::GridDimension(_)
        | spectral::SpectralError::GridAxes { .. }
        | spectral::SpectralError::GridTooLarge(_)
        | spectral::SpectralError::PointLength { .. } => CliError::Input(e.to_string()),
        other => CliError::Contract(other.to_string()),
    })?;
    let tsv = table.to_tsv();
    std::fs::write(out, &tsv)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", out.display())))?;
    println!("wrote {} rows to {}", table.rows.len(), out.display());
    if let Some(best) = table
        .rows
        .iter()
        .min_by(|a, b| a.sigma_min.partial_cmp(&b.sigma_min).unwrap())
    {
        println!("smallest sigma_min: {} at {}", sig(best.sigma_min), fmt_point(&best.lambda));
    }
    let json_value = serde_json::json!({
        "rows": table.rows.len(),
        "out": out.display().to_string(),
        "dirac_eigenvalues": table.dirac_eigenvalues,
    });
    write_json(json, &json_value)
}

fn cmd_reconstruct(input: &Path, json: &Option<PathBuf>) -> Result<(), CliError> {
    let pair = match load_input(input)? {
        InputDocument::Tuple(doc) => doc.to_tuple()?.assemble_dirac(),
        InputDocument::Dirac(doc) => doc.to_pair()?,
    };
    let rec = pair.reconstruct_tuple().map_err(|e| CliError::Contract(e.to_string()))?;
    println!(
        "recovered d = {}, n = {} (off-pattern {}, reassembly {})",
        rec.tuple.d(),
        rec.tuple.n(),
        sig(rec.off_pattern),
        sig(rec.assembly_defect)
    );
    for k in 1..=rec.tuple.d() {
        println!("T_{k}:");
        let m = rec.tuple.matrix(k);
        for i in 0..m.nrows() {
            let row: Vec<String> = (0..m.ncols()).map(|j| fmt_complex(m[(i, j)])).collect();
            println!("  [{}]", row.join(", "));
        }
    }
    let doc = TupleDocument::from_tuple(&rec.tuple);
    write_json(json, &serde_json::to_value(doc).map_err(|e| CliError::Input(e.to_string()))?)
}

/// Parses 'coeff:(e1,…,ed)' terms joined by '+'.
fn parse_polynomial(text: &str, d: usize) -> Result<Polynomial, CliError> {
    let mut terms = Vec::new();
    for raw in text.split('+') {
        let term = raw.trim();
        if term.is_empty() {
            continue;
        }
        let (coeff_text, exps_text) = term
            .split_once(':')
            .ok_or_else(|| CliError::Input(format!("term '{term}' is not coeff:(e1,…,ed)")))?;
        let coeff: f64 = coeff_text
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("bad coefficient '{coeff_text}'")))?;
        let inner = exps_text
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| CliError::Input(format!("exponents '{exps_text}' need parentheses")))?;
        let exps: Result<Vec<usize>, _> =
            inner.split(',').map(|e| e.trim().parse::<usize>()).collect();
        let exps = exps.map_err(|_| CliError::Input(format!("bad exponent vector '{exps_text}'")))?;
        terms.push((c(coeff, 0.0), exps));
    }
    Polynomial::new(d, terms).map_err(|e| CliError::Input(e.to_string()))
}

fn print_graded_report(
    spec: &graded::GradedTupleSpec,
    config: &SpectralConfig,
    chi: Option<i64>,
    json: &Option<PathBuf>,
) -> Result<(), CliError> {
    let table = graded::graded_koszul_betti_with(spec, config.rank_tol)
        .map_err(|e| CliError::Contract(e.to_string()))?;
    let report = graded::index_report_from(&table);
    let sign = if spec.d() % 2 == 0 { 1 } else { -1 };
    let curvature = sign * report.index;
    println!("component dims: {:?}", spec.component_dims());
    println!("betti table (k, degree, value), trusted through degree {}:", table.trusted_max_degree());
    for (k, j, v) in table.nonzero_entries() {
        println!("  beta[{k}][{j}] = {v}");
    }
    println!("stabilized: {}", report.stabilized);
    if !report.stabilized {
        println!("warning: trailing window {:?} is not all zero; totals untrusted", report.window_degrees);
    }
    println!("index (dim ker D_+ − dim ker D_+^*): {}", report.index);
    println!("curvature K = (−1)^d · index = {curvature}");
    let degrees: Vec<usize> = (0..=spec.max_degree().saturating_sub(2)).collect();
    let defect = graded::defect_rank_with(spec, &degrees, config.rank_tol)
        .map_err(|e| CliError::Contract(e.to_string()))?;
    println!("defect rank (degrees 0..={}): {}", spec.max_degree().saturating_sub(2), defect);
    if let Some(chi) = chi {
        println!("chi = {chi} (Euler characteristic; e = (−1)^d·chi)");
    }
    let json_value = serde_json::json!({
        "betti": table.to_json(),
        "index": report.index,
        "stabilized": report.stabilized,
        "curvature": curvature,
        "defect_rank": defect,
        "chi": chi,
    });
    write_json(json, &json_value)?;
    if report.stabilized {
        Ok(())
    } else {
        Err(CliError::Contract("Betti table did not stabilize at this max degree".into()))
    }
}

fn cmd_graded(
    family: GradedCommand,
    config: &SpectralConfig,
    json: &Option<PathBuf>,
) -> Result<(), CliError> {
    match family {
        GradedCommand::Free { d, rank, max_degree, gram } => {
            let spec = graded::free_module_spec_with(d, rank, max_degree, gram.into())
                .map_err(|e| CliError::Input(e.to_string()))?;
            println!("free module: d = {d}, rank = {rank}, max degree = {max_degree}");
            // for a free module of rank r the Euler characteristic is r
            print_graded_report(&spec, config, Some(rank as i64), json)
        }
        GradedCommand::ShiftQuotient { d, r, phis, max_degree, gram } => {
            if phis.len() != r {
                return Err(CliError::Input(format!("need {r} --phi arguments, got {}", phis.len())));
            }
            let parsed: Result<Vec<Polynomial>, CliError> =
                phis.iter().map(|p| parse_polynomial(p, d)).collect();
            let parsed = parsed?;
            let spec = graded::dshift_quotient_spec_with(d, r, &parsed, max_degree, gram.into())
                .map_err(|e| CliError::Input(e.to_string()))?;
            println!("shift quotient: d = {d}, r = {r}, max degree = {max_degree}");
            // homogeneous multipliers: χ = r, cross-checked below via the index
            let sign = if d % 2 == 0 { 1 } else { -1 };
            let report = graded::stabilized_index_with(&spec, config.rank_tol)
                .map_err(|e| CliError::Contract(e.to_string()))?;
            let chi = sign * report.index;
            if report.stabilized && chi != r as i64 {
                return Err(CliError::Contract(format!(
                    "index cross-check failed: (−1)^d·index = {chi}, expected χ = {r}"
                )));
            }
            print_graded_report(&spec, config, Some(r as i64), json)
        }
    }
}
