use clap::{Parser, Subcommand, ValueEnum};
use fermatci::error::Error;
use fermatci::grid::{grid_error_hint, run_jobs, GridReport};
use fermatci::job::{self, applicable_commands, parse_job, Command as JobCommand, OutputFormat};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Exact invariants of q-Fermat complete intersections, with certificates.
#[derive(Debug, Parser)]
#[command(name = "fermatci", version, about)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
struct CommonArgs {
    /// Job description file.
    #[arg(long, required_unless_present = "grid")]
    input: Option<PathBuf>,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// File listing job files (one path per line) to run concurrently.
    #[arg(long)]
    grid: Option<PathBuf>,

    /// Candidate bound for parameter searches.
    #[arg(long)]
    search_bound: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Check Definition-level validity: p-independence and coefficient rank.
    Validate(CommonArgs),
    /// Build the full chain of elemental extensions down to projective space.
    Chain(CommonArgs),
    /// Derive ε, γ bounds, ℓ_F, m_F with certificates.
    Invariants(CommonArgs),
    /// Check the genus-change identity on curve inputs (r = N−1).
    GenusChange(CommonArgs),
    /// Classify a plane conic from its six coefficients.
    ClassifyConic(CommonArgs),
    /// Decompose the plane curve s·x^p + t·y^p + z^p, avoiding given points.
    Pfermat(CommonArgs),
    /// Genus-one degree bounds, constraint table, and Q-Gorenstein index.
    Bounds(CommonArgs),
    /// Everything applicable to the job's data.
    Report(CommonArgs),
}

impl CliCommand {
    fn common(&self) -> &CommonArgs {
        match self {
            CliCommand::Validate(a)
            | CliCommand::Chain(a)
            | CliCommand::Invariants(a)
            | CliCommand::GenusChange(a)
            | CliCommand::ClassifyConic(a)
            | CliCommand::Pfermat(a)
            | CliCommand::Bounds(a)
            | CliCommand::Report(a) => a,
        }
    }

    fn requested(&self, job: &job::JobSpec) -> Vec<JobCommand> {
        match self {
            CliCommand::Validate(_) => vec![JobCommand::Validate],
            CliCommand::Chain(_) => vec![JobCommand::Chain],
            CliCommand::Invariants(_) => vec![JobCommand::Invariants],
            CliCommand::GenusChange(_) => vec![JobCommand::GenusChange],
            CliCommand::ClassifyConic(_) => vec![JobCommand::ClassifyConic],
            CliCommand::Pfermat(_) => vec![JobCommand::Pfermat],
            CliCommand::Bounds(_) => vec![JobCommand::Bounds],
            CliCommand::Report(_) => applicable_commands(job),
        }
    }
}

/// Exit codes: 0 all pass, 1 certificate failure, 2 input error, 3 internal.
fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse { .. }
        | Error::Structural(_)
        | Error::NotPrime(_)
        | Error::UnknownField(_)
        | Error::WrongField { .. }
        | Error::NotApplicable(_) => 2,
        Error::Certificate(_)
        | Error::NotPBasis { .. }
        | Error::NoRewriting(_)
        | Error::NotAPower { .. }
        | Error::SearchExhausted(_) => 1,
        _ => 3,
    }
}

fn load_job(path: &Path, cli: &CliCommand) -> Result<job::JobSpec, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::Structural(format!("cannot read {}: {}", path.display(), e))
    })?;
    let mut job = parse_job(&text)?;
    if let Some(b) = cli.common().search_bound {
        job.search_bound = b;
    }
    job.commands = cli.requested(&job);
    Ok(job)
}

fn run_single(path: &Path, cli: &CliCommand, format: OutputFormat) -> Result<bool, Error> {
    let job = load_job(path, cli)?;
    let report = job::run(&job)?;
    print!("{}", job::render(&report, format)?);
    Ok(report.overall_pass)
}

fn render_grid(report: &GridReport, format: OutputFormat) -> Result<String, Error> {
    match format {
        OutputFormat::Json => serde_json::to_string_pretty(report)
            .map(|mut s| {
                s.push('\n');
                s
            })
            .map_err(|e| Error::Structural(format!("serialization failed: {}", e))),
        OutputFormat::Text => {
            let mut out = String::new();
            for (i, entry) in report.entries.iter().enumerate() {
                out.push_str(&format!("=== job {} ===\n", i + 1));
                match entry {
                    fermatci::grid::GridEntry::Ok { report } => {
                        out.push_str(&fermatci::report::render_text(report))
                    }
                    fermatci::grid::GridEntry::Error { message } => {
                        out.push_str(&format!("error: {}\n", message))
                    }
                }
            }
            out.push_str(&format!(
                "grid overall: {}\n",
                if report.overall_pass { "PASS" } else { "FAIL" }
            ));
            Ok(out)
        }
    }
}

fn run_grid(path: &Path, cli: &CliCommand, format: OutputFormat) -> Result<bool, Error> {
    let listing = std::fs::read_to_string(path).map_err(|e| {
        Error::Structural(format!("cannot read {}: {}", path.display(), e))
    })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut jobs = Vec::new();
    for line in listing.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let job_path = base.join(line);
        jobs.push(load_job(&job_path, cli)?);
    }
    let report = run_jobs(&jobs);
    print!("{}", render_grid(&report, format)?);
    if let Some(err) = grid_error_hint(&report) {
        return Err(err);
    }
    Ok(report.overall_pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = cli.command.common();
    let format = match common.format {
        Format::Text => OutputFormat::Text,
        Format::Json => OutputFormat::Json,
    };
    let outcome = match (&common.grid, &common.input) {
        (Some(grid), _) => run_grid(grid, &cli.command, format),
        (None, Some(input)) => run_single(input, &cli.command, format),
        (None, None) => unreachable!("clap enforces input or grid"),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(exit_code_for(&e))
        }
    }
}
