//! Argument parsing and command dispatch.
//!
//! Exit codes: 0 on success, 1 when an analysis or validation fails (an
//! invalid POVM, an unsupported convention, a lift whose certificate does
//! not pass), 2 for unusable input (bad flags, malformed or mis-sized model
//! files, unreadable paths).

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use quorder_core::{
    common_space_lift, lifted_qq_check, max_violation, outcome_distribution, qq_statistic,
    verify_dilation, zero_manifold_scan, BinaryMeasurement, Convention, DilationCertificate,
    ExperimentConfig, MeasurementOrder, OutcomeTable,
};
use serde_json::{json, Map, Value};

use crate::model::{parse_state_override, LoadedModel, ModelError, ModelFile};
use crate::report::{fmt_matrix, matrix_json, sig12, yes_no, Style};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "quorder",
    version,
    about = "Order effects of binary questions modeled as quantum measurements"
)]
pub struct Cli {
    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum OrderArg {
    /// Ask question A first
    AFirst,
    /// Ask question B first
    BFirst,
}

impl From<OrderArg> for MeasurementOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::AFirst => MeasurementOrder::AFirst,
            OrderArg::BFirst => MeasurementOrder::BFirst,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ConventionArg {
    /// Update with the effect itself
    Literal,
    /// Update with the square root of the effect
    Sqrt,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Literal => Convention::Literal,
            ConventionArg::Sqrt => Convention::Sqrt,
        }
    }
}

#[derive(Subcommand)]
pub enum Command {
    /// Check a model file against the measurement axioms
    Validate {
        file: PathBuf,
        /// Also write the parsed model back out in canonical form
        #[arg(long, value_name = "PATH")]
        emit_model: Option<PathBuf>,
    },
    /// Sequential answer probabilities for one question order
    Distribution {
        file: PathBuf,
        #[arg(long, value_enum)]
        order: OrderArg,
        #[arg(long, value_enum)]
        convention: ConventionArg,
    },
    /// The order statistic, its operator, and the zero-state test
    Qq {
        file: PathBuf,
        /// Overrides the convention named in the file (default: literal)
        #[arg(long, value_enum)]
        convention: Option<ConventionArg>,
        /// Replace the model state with the qubit "alpha,beta"
        #[arg(long, value_name = "ALPHA,BETA")]
        state_override: Option<String>,
    },
    /// Grid scan for pure qubit states where the statistic vanishes
    Scan {
        file: PathBuf,
        /// Grid steps per angle (theta and phi each)
        #[arg(long, value_name = "N")]
        grid: usize,
    },
    /// The state maximizing the statistic, found spectrally
    Max { file: PathBuf },
    /// Lift both questions to projective ones on a common extended space
    Lift { file: PathBuf },
    /// Sample respondents per order and estimate the statistic
    Simulate {
        file: PathBuf,
        /// Respondents per question order
        #[arg(long, value_name = "N")]
        n: u64,
        #[arg(long, value_name = "S")]
        seed: u64,
    },
    /// Rerun the sampling experiment at several sizes with derived seeds
    Sweep {
        file: PathBuf,
        /// Strictly increasing sample sizes, comma separated
        #[arg(long, value_name = "N1,N2,...", value_delimiter = ',', required = true)]
        sizes: Vec<u64>,
    },
}

/// Anything that aborts a command, carrying its exit code.
pub enum Failure {
    Usage(String),
    Model(ModelError),
    Analysis(quorder_core::Error),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) | Failure::Model(_) => EXIT_USAGE,
            Failure::Analysis(_) => EXIT_FAIL,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) => write!(f, "{msg}"),
            Failure::Model(e) => write!(f, "{e}"),
            Failure::Analysis(e) => write!(f, "{e}"),
        }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        Failure::Model(e)
    }
}

impl From<quorder_core::Error> for Failure {
    fn from(e: quorder_core::Error) -> Self {
        Failure::Analysis(e)
    }
}

pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {failure}");
            failure.code()
        }
    }
}

fn load(path: &Path) -> Result<(ModelFile, LoadedModel), Failure> {
    let file = ModelFile::read(path)?;
    let model = file.build()?;
    Ok((file, model))
}

/// Convention for the analysis commands: explicit flag, then the file's
/// field, then the literal default.
fn analysis_convention(flag: Option<ConventionArg>, model: &LoadedModel) -> Convention {
    flag.map(Convention::from)
        .or(model.convention)
        .unwrap_or(Convention::Literal)
}

/// Convention for the sampling commands, where only sqrt updates give
/// normalized distributions to sample from.
fn sampling_convention(model: &LoadedModel) -> Convention {
    model.convention.unwrap_or(Convention::Sqrt)
}

pub fn run(cli: &Cli) -> Result<i32, Failure> {
    match &cli.command {
        Command::Validate { file, emit_model } => {
            cmd_validate(file, emit_model.as_deref(), cli.format)
        }
        Command::Distribution {
            file,
            order,
            convention,
        } => cmd_distribution(file, *order, *convention, cli.format),
        Command::Qq {
            file,
            convention,
            state_override,
        } => cmd_qq(file, *convention, state_override.as_deref(), cli.format),
        Command::Scan { file, grid } => cmd_scan(file, *grid, cli.format),
        Command::Max { file } => cmd_max(file, cli.format),
        Command::Lift { file } => cmd_lift(file, cli.format),
        Command::Simulate { file, n, seed } => cmd_simulate(file, *n, *seed, cli.format),
        Command::Sweep { file, sizes } => cmd_sweep(file, sizes, cli.format),
    }
}

fn cmd_validate(path: &Path, emit: Option<&Path>, format: Format) -> Result<i32, Failure> {
    let (file, model) = load(path)?;

    let mut reports = Vec::new();
    for m in &model.measurements {
        reports.push(m.validate(model.tolerance)?);
    }
    let all_valid = reports.iter().all(|r| r.is_valid());

    if let Some(out_path) = emit {
        std::fs::write(out_path, file.emit()).map_err(|e| {
            Failure::Usage(format!("cannot write {}: {e}", out_path.display()))
        })?;
    }

    match format {
        Format::Json => {
            let mut measurements = Map::new();
            for (m, r) in model.measurements.iter().zip(&reports) {
                measurements.insert(
                    m.name().to_string(),
                    json!({
                        "hermitian": r.hermitian(),
                        "positive": r.positive(),
                        "complete": r.complete(),
                        "projective": r.projective(),
                        "valid": r.is_valid(),
                        "hermiticity_residual_yes": r.yes().hermiticity_residual(),
                        "hermiticity_residual_no": r.no().hermiticity_residual(),
                        "min_eigenvalue_yes": r.yes().min_eigenvalue(),
                        "min_eigenvalue_no": r.no().min_eigenvalue(),
                        "completeness_residual": r.completeness_residual(),
                        "idempotency_residual_yes": r.yes().idempotency_residual(),
                        "idempotency_residual_no": r.no().idempotency_residual(),
                    }),
                );
            }
            print_json(&json!({
                "file": path.display().to_string(),
                "dimension": model.dimension,
                "tolerance": model.tolerance.eps(),
                "valid": all_valid,
                "measurements": Value::Object(measurements),
            }));
        }
        Format::Human => {
            let style = Style::detect();
            println!("model: {}", path.display());
            println!("dimension: {}", model.dimension);
            println!("tolerance: {:e}", model.tolerance.eps());
            println!("state: valid density matrix");
            for (m, r) in model.measurements.iter().zip(&reports) {
                println!("measurement {:?}:", m.name());
                println!(
                    "  hermitian:   {}  (residuals {}, {})",
                    style.verdict(r.hermitian()),
                    sig12(r.yes().hermiticity_residual()),
                    sig12(r.no().hermiticity_residual()),
                );
                println!(
                    "  positive:    {}  (min eigenvalues {}, {})",
                    style.verdict(r.positive()),
                    sig12(r.yes().min_eigenvalue()),
                    sig12(r.no().min_eigenvalue()),
                );
                println!(
                    "  complete:    {}  (residual {})",
                    style.verdict(r.complete()),
                    sig12(r.completeness_residual()),
                );
                println!(
                    "  projective:  {}   (idempotency residuals {}, {})",
                    yes_no(r.projective()),
                    sig12(r.yes().idempotency_residual()),
                    sig12(r.no().idempotency_residual()),
                );
                let verdict = if r.is_valid() { "valid POVM" } else { "INVALID" };
                println!("  verdict:     {verdict}");
            }
            if let Some(out_path) = emit {
                println!("canonical model written to {}", out_path.display());
            }
            println!("result: {}", style.verdict(all_valid));
        }
    }

    Ok(if all_valid { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_distribution(
    path: &Path,
    order: OrderArg,
    convention: ConventionArg,
    format: Format,
) -> Result<i32, Failure> {
    let (_, model) = load(path)?;
    let (a, b) = model.pair()?;
    let order = MeasurementOrder::from(order);
    let convention = Convention::from(convention);
    let table = outcome_distribution(&model.state, a, b, order, convention, model.tolerance)?;

    match format {
        Format::Json => print_json(&json!({
            "file": path.display().to_string(),
            "order": order.as_str(),
            "convention": convention.as_str(),
            "probabilities": table_cells(&table),
            "total": table.total(),
            "normalization_defect": table.normalization_defect(),
        })),
        Format::Human => {
            println!("model: {}", path.display());
            println!("order: {}", order.as_str());
            println!("convention: {}", convention.as_str());
            let [yy, yn, ny, nn] = table.probabilities();
            println!("p(yes, yes) = {}", sig12(yy));
            println!("p(yes, no)  = {}", sig12(yn));
            println!("p(no, yes)  = {}", sig12(ny));
            println!("p(no, no)   = {}", sig12(nn));
            println!("total       = {}", sig12(table.total()));
            println!(
                "normalization defect = {}",
                sig12(table.normalization_defect())
            );
        }
    }
    Ok(EXIT_OK)
}

fn cmd_qq(
    path: &Path,
    convention: Option<ConventionArg>,
    state_override: Option<&str>,
    format: Format,
) -> Result<i32, Failure> {
    let (_, model) = load(path)?;
    let (a, b) = model.pair()?;
    let convention = analysis_convention(convention, &model);
    let state = match state_override {
        Some(text) => parse_state_override(text, model.dimension).map_err(Failure::Usage)?,
        None => model.state.clone(),
    };
    let report = qq_statistic(&state, a, b, convention, model.tolerance)?;

    match format {
        Format::Json => print_json(&json!({
            "file": path.display().to_string(),
            "convention": convention.as_str(),
            "statistic": report.statistic(),
            "statistic_from_probabilities": report.statistic_from_probabilities(),
            "zero_state": report.zero_state(),
            "k_operator": matrix_json(report.k_operator()),
            "a_first": table_json(report.a_first()),
            "b_first": table_json(report.b_first()),
        })),
        Format::Human => {
            println!("model: {}", path.display());
            println!("convention: {}", convention.as_str());
            println!("statistic (operator form):    {}", sig12(report.statistic()));
            println!(
                "statistic (probability form): {}",
                sig12(report.statistic_from_probabilities())
            );
            println!("zero state: {}", yes_no(report.zero_state()));
            println!("k operator:");
            print!("{}", fmt_matrix(report.k_operator(), "  "));
            print_table_row("a-first", report.a_first());
            print_table_row("b-first", report.b_first());
        }
    }
    Ok(EXIT_OK)
}

fn cmd_scan(path: &Path, grid: usize, format: Format) -> Result<i32, Failure> {
    if grid < 2 {
        return Err(Failure::Usage(format!(
            "--grid must be at least 2, got {grid}"
        )));
    }
    let (_, model) = load(path)?;
    let (a, b) = model.pair()?;
    let convention = analysis_convention(None, &model);
    let points = zero_manifold_scan(a, b, convention, model.tolerance, grid)?;

    match format {
        Format::Json => {
            let rows: Vec<Value> = points
                .iter()
                .map(|p| {
                    json!({
                        "theta_index": p.theta_index,
                        "phi_index": p.phi_index,
                        "theta": p.theta,
                        "phi": p.phi,
                        "alpha": crate::report::complex_json(p.alpha),
                        "beta": crate::report::complex_json(p.beta),
                        "statistic": p.statistic,
                    })
                })
                .collect();
            print_json(&json!({
                "file": path.display().to_string(),
                "convention": convention.as_str(),
                "grid": grid,
                "count": points.len(),
                "points": rows,
            }));
        }
        Format::Human => {
            println!("model: {}", path.display());
            println!("convention: {}", convention.as_str());
            println!("grid: {grid} x {grid}");
            println!("zero states: {}", points.len());
            println!("theta-idx  phi-idx    theta              phi                statistic");
            for p in &points {
                println!(
                    "{:<10} {:<10} {:<18} {:<18} {}",
                    p.theta_index,
                    p.phi_index,
                    sig12(p.theta),
                    sig12(p.phi),
                    sig12(p.statistic)
                );
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_max(path: &Path, format: Format) -> Result<i32, Failure> {
    let (_, model) = load(path)?;
    let (a, b) = model.pair()?;
    let convention = analysis_convention(None, &model);
    let max = max_violation(a, b, convention, model.tolerance)?;

    match format {
        Format::Json => print_json(&json!({
            "file": path.display().to_string(),
            "convention": convention.as_str(),
            "value": max.value,
            "maximizer": matrix_json(max.maximizer.rho()),
        })),
        Format::Human => {
            println!("model: {}", path.display());
            println!("convention: {}", convention.as_str());
            println!("max statistic: {}", sig12(max.value));
            println!("maximizer (density matrix):");
            print!("{}", fmt_matrix(max.maximizer.rho(), "  "));
        }
    }
    Ok(EXIT_OK)
}

fn cmd_lift(path: &Path, format: Format) -> Result<i32, Failure> {
    let (_, model) = load(path)?;
    let (a, b) = model.pair()?;
    let tol = model.tolerance;

    let lift = common_space_lift(a, b, tol)?;
    let cert_a = verify_dilation(lift.dilation_a(), tol);
    let cert_b = verify_dilation(lift.dilation_b(), tol);
    let check = lifted_qq_check(a, b, &model.state, tol)?;
    let restored = check.after.abs() <= tol.eps();
    let passed = cert_a.passed() && cert_b.passed() && restored;

    match format {
        Format::Json => print_json(&json!({
            "file": path.display().to_string(),
            "extended_dim": lift.extended_dim(),
            "before": check.before,
            "after": check.after,
            "restored": restored,
            "passed": passed,
            "a": certificate_json(a, lift.dilation_a().surplus_ancillas_to_no(), &cert_a),
            "b": certificate_json(b, lift.dilation_b().surplus_ancillas_to_no(), &cert_b),
            "embedding": matrix_json(lift.embedding()),
            "lifted_a_yes": matrix_json(lift.lifted_a().yes().matrix()),
            "lifted_a_no": matrix_json(lift.lifted_a().no().matrix()),
            "lifted_b_yes": matrix_json(lift.lifted_b().yes().matrix()),
            "lifted_b_no": matrix_json(lift.lifted_b().no().matrix()),
        })),
        Format::Human => {
            let style = Style::detect();
            println!("model: {}", path.display());
            println!("common extended dimension: {}", lift.extended_dim());
            print_certificate(a, lift.dilation_a(), &cert_a, &style);
            print_certificate(b, lift.dilation_b(), &cert_b, &style);
            println!("statistic before lift: {}", sig12(check.before));
            println!("statistic after lift:  {}", sig12(check.after));
            println!(
                "order equality restored: {} (|after| <= {:e})",
                style.verdict(restored),
                tol.eps()
            );
        }
    }
    Ok(if passed { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_simulate(path: &Path, n: u64, seed: u64, format: Format) -> Result<i32, Failure> {
    let (_, model) = load(path)?;
    let (a, b) = model.pair()?;
    let convention = sampling_convention(&model);
    let config = ExperimentConfig {
        state: model.state.clone(),
        a: a.clone(),
        b: b.clone(),
        convention,
        n_per_order: n,
        seed,
        tolerance: model.tolerance,
    };
    let report = quorder_core::simulate(&config)?;

    match format {
        Format::Json => print_json(&json!({
            "file": path.display().to_string(),
            "convention": convention.as_str(),
            "n_per_order": report.n_per_order,
            "seed": seed,
            "a_first_counts": report.a_first_counts,
            "b_first_counts": report.b_first_counts,
            "empirical_qq": report.empirical_qq,
            "standard_error": report.standard_error,
            "analytic_qq": report.analytic_qq,
        })),
        Format::Human => {
            println!("model: {}", path.display());
            println!("convention: {}", convention.as_str());
            println!("n per order: {}", report.n_per_order);
            println!("seed: {seed}");
            println!("order      yes,yes      yes,no       no,yes       no,no");
            let [ayy, ayn, any_, ann] = report.a_first_counts;
            let [byy, byn, bny, bnn] = report.b_first_counts;
            println!("{:<10} {ayy:<12} {ayn:<12} {any_:<12} {ann}", "a-first");
            println!("{:<10} {byy:<12} {byn:<12} {bny:<12} {bnn}", "b-first");
            println!("empirical statistic: {}", sig12(report.empirical_qq));
            println!("analytic statistic:  {}", sig12(report.analytic_qq));
            println!("standard error:      {}", sig12(report.standard_error));
        }
    }
    Ok(EXIT_OK)
}

fn cmd_sweep(path: &Path, sizes: &[u64], format: Format) -> Result<i32, Failure> {
    if sizes.contains(&0) || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Failure::Usage(
            "--sizes must be positive and strictly increasing".into(),
        ));
    }
    let (_, model) = load(path)?;
    let (a, b) = model.pair()?;
    let convention = sampling_convention(&model);
    let config = ExperimentConfig {
        state: model.state.clone(),
        a: a.clone(),
        b: b.clone(),
        convention,
        n_per_order: 1,
        seed: 0,
        tolerance: model.tolerance,
    };
    let rows = quorder_core::convergence_sweep(&config, sizes)?;

    match format {
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "empirical_qq": r.empirical_qq,
                        "abs_error": r.abs_error,
                        "standard_error": r.standard_error,
                    })
                })
                .collect();
            print_json(&json!({
                "file": path.display().to_string(),
                "convention": convention.as_str(),
                "rows": rows,
            }));
        }
        Format::Human => {
            println!("model: {}", path.display());
            println!("convention: {}", convention.as_str());
            println!("n            empirical          abs error          standard error");
            for r in &rows {
                println!(
                    "{:<12} {:<18} {:<18} {}",
                    r.n,
                    sig12(r.empirical_qq),
                    sig12(r.abs_error),
                    sig12(r.standard_error)
                );
            }
        }
    }
    Ok(EXIT_OK)
}

fn table_cells(table: &OutcomeTable) -> Value {
    json!({
        "yes_yes": table.yes_yes,
        "yes_no": table.yes_no,
        "no_yes": table.no_yes,
        "no_no": table.no_no,
    })
}

fn table_json(table: &OutcomeTable) -> Value {
    json!({
        "probabilities": table_cells(table),
        "total": table.total(),
        "normalization_defect": table.normalization_defect(),
    })
}

fn print_table_row(label: &str, table: &OutcomeTable) {
    let [yy, yn, ny, nn] = table.probabilities();
    println!(
        "{label}: p(yy) = {}, p(yn) = {}, p(ny) = {}, p(nn) = {}, defect = {}",
        sig12(yy),
        sig12(yn),
        sig12(ny),
        sig12(nn),
        sig12(table.normalization_defect())
    );
}

fn certificate_json(
    original: &BinaryMeasurement,
    surplus: usize,
    cert: &DilationCertificate,
) -> Value {
    let mut object = Map::new();
    object.insert("name".into(), json!(original.name()));
    object.insert("original_dim".into(), json!(original.dim()));
    object.insert("surplus_ancillas_to_no".into(), json!(surplus));
    object.insert("passed".into(), json!(cert.passed()));
    for (label, residual) in cert.residuals() {
        object.insert(format!("{}_residual", label.replace(' ', "_")), json!(residual));
    }
    Value::Object(object)
}

fn print_certificate(
    original: &BinaryMeasurement,
    dilation: &quorder_core::Dilation,
    cert: &DilationCertificate,
    style: &Style,
) {
    println!(
        "question {:?}: dimension {} -> {}, surplus ancillas to no: {}",
        original.name(),
        original.dim(),
        dilation.extended_dim(),
        dilation.surplus_ancillas_to_no()
    );
    for (label, residual) in cert.residuals() {
        let name = format!("{label} residual:");
        println!(
            "  {name:<32} {:<22} {}",
            sig12(residual),
            style.verdict(residual <= cert.eps())
        );
    }
    println!("  certificate: {}", style.verdict(cert.passed()));
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("json report"));
}
