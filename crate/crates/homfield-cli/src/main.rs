//! Command-line front end: classification, probability estimation, expected
//! invariant-line counts, self-checks, and an SVG direction-field picture.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 degenerate input,
//! 4 internal numerical failure.

mod svg;

use clap::{Parser, Subcommand, ValueEnum};
use homfield::classify::Stability;
use homfield::montecarlo::{self, DEFAULT_PARTITIONS, DEFAULT_SEED};
use homfield::{
    classify_with, expected_lines, selfcheck, ClassifyError, ClassifyPolicy, EstimationReport,
    SamplerConfig, VectorField,
};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

/// Environment variable consulted for the partition count when
/// `--partitions` is not given (useful for benchmark scripts); the flag
/// wins, and the built-in default is 8 either way.
const PARTITIONS_ENV: &str = "HOMFIELD_PARTITIONS";

#[derive(Parser)]
#[command(
    name = "homfield",
    version,
    about = "Phase portraits of planar homogeneous polynomial vector fields",
    after_help = "Coefficient strings list P then Q, each in descending x-power:\n\
                  p0 x^n + p1 x^(n-1) y + ... + pn y^n. A degree-n field takes 2n+2 numbers.\n\
                  Example: --degree 1 --coeffs 1,0,0,-1 is the saddle x' = x, y' = -y."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Name the phase-portrait class of one field
    Classify {
        /// Field degree (1, 2 or 3)
        #[arg(long)]
        degree: usize,
        /// 2(degree+1) comma-separated coefficients, P then Q
        #[arg(long)]
        coeffs: String,
        #[arg(long, value_enum, default_value_t = TextOrJson::Text)]
        format: TextOrJson,
        /// Classify fields with a degenerate closed-form index via the
        /// winding-number oracle instead of refusing them
        #[arg(long)]
        oracle_fallback: bool,
    },
    /// Estimate class probabilities under i.i.d. standard normal coefficients
    Estimate {
        /// Field degree (1, 2 or 3)
        #[arg(long)]
        degree: usize,
        /// Sample count; scientific notation accepted (e.g. 1e6)
        #[arg(long, value_parser = parse_samples)]
        samples: u64,
        /// Generator seed; fixed default keeps casual runs reproducible
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Independent sampling partitions (default: HOMFIELD_PARTITIONS or 8).
        /// Changing it changes which samples are drawn, not just the schedule
        #[arg(long)]
        partitions: Option<usize>,
        #[arg(long)]
        oracle_fallback: bool,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        /// Write the report here instead of stdout (relation z-scores still print)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expected number of invariant lines of a random degree-n field
    Lambda {
        /// Field degree (any n >= 1)
        #[arg(long)]
        degree: usize,
        /// Absolute tolerance for the integral
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Cross-check the closed forms against independent numerical oracles
    Selfcheck {
        /// Restrict the index check to one degree (default: 1, 2 and 3)
        #[arg(long)]
        degree: Option<usize>,
        /// Random inputs per check; scientific notation accepted
        #[arg(long, value_parser = parse_samples, default_value = "10000")]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Draw the direction field and its invariant lines as SVG
    Svg {
        /// Field degree (1, 2 or 3)
        #[arg(long)]
        degree: usize,
        /// 2(degree+1) comma-separated coefficients, P then Q
        #[arg(long)]
        coeffs: String,
        /// Arrows per side of the grid
        #[arg(long, default_value_t = svg::DEFAULT_GRID)]
        grid: usize,
        /// Write the SVG here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TextOrJson {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
    Csv,
}

struct CmdError {
    code: u8,
    message: String,
}

impl CmdError {
    fn usage(message: impl ToString) -> Self {
        Self {
            code: 2,
            message: message.to_string(),
        }
    }
    fn degenerate(message: impl ToString) -> Self {
        Self {
            code: 3,
            message: message.to_string(),
        }
    }
    fn internal(message: impl ToString) -> Self {
        Self {
            code: 4,
            message: message.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify {
            degree,
            coeffs,
            format,
            oracle_fallback,
        } => cmd_classify(degree, &coeffs, format, oracle_fallback),
        Command::Estimate {
            degree,
            samples,
            seed,
            partitions,
            oracle_fallback,
            format,
            out,
        } => cmd_estimate(degree, samples, seed, partitions, oracle_fallback, format, out),
        Command::Lambda { degree, tol } => cmd_lambda(degree, tol),
        Command::Selfcheck {
            degree,
            samples,
            seed,
        } => cmd_selfcheck(degree, samples, seed),
        Command::Svg {
            degree,
            coeffs,
            grid,
            out,
        } => cmd_svg(degree, &coeffs, grid, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn cmd_classify(
    degree: usize,
    coeffs: &str,
    format: TextOrJson,
    oracle_fallback: bool,
) -> Result<(), CmdError> {
    let f = VectorField::parse(degree, coeffs).map_err(CmdError::usage)?;
    let policy = ClassifyPolicy {
        oracle_fallback,
        ..ClassifyPolicy::default()
    };
    let r = match classify_with(&f, policy) {
        Ok(r) => r,
        Err(e @ ClassifyError::Degenerate { .. }) => return Err(CmdError::degenerate(e)),
        Err(e) => return Err(CmdError::internal(e)),
    };
    match format {
        TextOrJson::Json => println!("{}", pretty_json(&r)?),
        TextOrJson::Text => {
            println!("{} (i={}, l={})", r.label, r.index, r.lines);
            for w in &r.warnings {
                println!("note: {w}");
            }
            if r.stability != Stability::NotApplicable {
                println!("origin is {} for the whole plane", describe_stability(r.stability));
            }
        }
    }
    Ok(())
}

fn describe_stability(s: Stability) -> &'static str {
    match s {
        Stability::Attractor => "an attractor",
        Stability::Repeller => "a repeller",
        _ => "neither an attractor nor a repeller",
    }
}

fn cmd_estimate(
    degree: usize,
    samples: u64,
    seed: u64,
    partitions: Option<usize>,
    oracle_fallback: bool,
    format: ReportFormat,
    out: Option<PathBuf>,
) -> Result<(), CmdError> {
    let config = SamplerConfig {
        degree,
        samples,
        seed,
        partitions: resolve_partitions(partitions)?,
        oracle_fallback,
    };
    let report = montecarlo::estimate(&config).map_err(CmdError::usage)?;
    let payload = match format {
        ReportFormat::Json => pretty_json(&report)?,
        ReportFormat::Csv => montecarlo::to_csv(&report),
        ReportFormat::Text => render_report(&report),
    };
    match out {
        Some(path) => {
            std::fs::write(&path, payload)
                .map_err(|e| CmdError::internal(format!("writing {}: {e}", path.display())))?;
            print!("{}", render_relations(&report));
        }
        None => print!("{payload}"),
    }
    eprintln!(
        "{} samples in {:.2}s",
        report.samples,
        report.wall_time.as_secs_f64()
    );
    Ok(())
}

fn cmd_lambda(degree: usize, tol: f64) -> Result<(), CmdError> {
    use homfield::kostlan::KostlanError;
    let value = expected_lines(degree, tol).map_err(|e| match e {
        KostlanError::NoConvergence { .. } => CmdError::internal(e),
        _ => CmdError::usage(e),
    })?;
    println!("{value:.10}");
    Ok(())
}

fn cmd_selfcheck(degree: Option<usize>, samples: u64, seed: u64) -> Result<(), CmdError> {
    let degrees = match degree {
        None => vec![1, 2, 3],
        Some(d) if (1..=3).contains(&d) => vec![d],
        Some(d) => {
            return Err(CmdError::usage(format!("degree must be 1, 2 or 3, got {d}")));
        }
    };
    let mut healthy = true;
    let mut show = |name: &str, a: &selfcheck::Agreement| {
        println!(
            "{name}: {} checked, {} mismatches, {} skipped",
            a.checked, a.mismatches, a.skipped
        );
        for example in &a.examples {
            println!("  disagrees at {example}");
        }
        healthy &= a.mismatches == 0;
    };
    for d in degrees {
        let a = selfcheck::check_index_agreement(d, samples, seed);
        show(&format!("index formula vs winding number, degree {d}"), &a);
    }
    let roots = selfcheck::check_root_count_agreement(samples, seed);
    show("root-count lemmas vs companion matrix", &roots);

    let control = selfcheck::negative_control(samples, seed);
    println!(
        "negative control (discriminant test inverted): {} of {} disagree",
        control.mismatches, control.checked
    );
    if control.mismatches == 0 {
        println!("negative control failed to fire; the harness proves nothing");
    }
    if healthy && control.mismatches > 0 {
        println!("self-check passed");
        Ok(())
    } else {
        Err(CmdError::internal("self-check failed"))
    }
}

fn cmd_svg(
    degree: usize,
    coeffs: &str,
    grid: usize,
    out: Option<PathBuf>,
) -> Result<(), CmdError> {
    if !(2..=101).contains(&grid) {
        return Err(CmdError::usage(format!(
            "grid must be between 2 and 101 arrows per side, got {grid}"
        )));
    }
    let f = VectorField::parse(degree, coeffs).map_err(CmdError::usage)?;
    let (slopes, vertical) = svg::overlay_slopes(&f).map_err(|e| match e {
        svg::OverlayError::EveryDirectionInvariant => {
            CmdError::degenerate("every direction is invariant; nothing meaningful to overlay")
        }
        svg::OverlayError::Roots(e) => CmdError::internal(e),
    })?;
    let picture = svg::render(&f, grid, &slopes, vertical);
    match out {
        Some(path) => std::fs::write(&path, picture)
            .map_err(|e| CmdError::internal(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{picture}");
            Ok(())
        }
    }
}

fn resolve_partitions(flag: Option<usize>) -> Result<usize, CmdError> {
    if let Some(p) = flag {
        return Ok(p);
    }
    match std::env::var(PARTITIONS_ENV) {
        Ok(text) => text
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&p| p >= 1)
            .ok_or_else(|| {
                CmdError::usage(format!(
                    "{PARTITIONS_ENV} must be a positive integer, got {text:?}"
                ))
            }),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_PARTITIONS),
        Err(e) => Err(CmdError::usage(format!("{PARTITIONS_ENV}: {e}"))),
    }
}

fn parse_samples(text: &str) -> Result<u64, String> {
    let t = text.trim();
    if let Ok(n) = t.parse::<u64>() {
        return if n == 0 {
            Err("sample count must be positive".into())
        } else {
            Ok(n)
        };
    }
    let x: f64 = t
        .parse()
        .map_err(|_| format!("not a sample count: {t:?}"))?;
    if !x.is_finite() || x < 1.0 || x >= 9.0e15 {
        return Err(format!("sample count out of range: {t}"));
    }
    if x.fract() != 0.0 {
        return Err(format!("sample count must be a whole number: {t}"));
    }
    Ok(x as u64)
}

fn pretty_json<T: serde::Serialize>(value: &T) -> Result<String, CmdError> {
    serde_json::to_string_pretty(value).map_err(CmdError::internal)
}

fn render_report(r: &EstimationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "degree {} | {} samples | seed {} | {} partitions | oracle fallback {}",
        r.degree,
        r.samples,
        r.seed,
        r.partitions,
        if r.oracle_fallback { "on" } else { "off" }
    );
    out.push('\n');
    let _ = writeln!(out, "{:<6} {:>12} {:>11} {:>11}", "class", "count", "freq", "std.err");
    for s in &r.labels {
        let _ = writeln!(
            out,
            "{:<6} {:>12} {:>11.6} {:>11.6}",
            s.label.as_str(),
            s.count,
            s.frequency,
            s.std_error
        );
    }
    out.push('\n');
    let _ = writeln!(out, "{:<6} {:>12} {:>11}", "index", "count", "freq");
    for e in &r.index_distribution {
        let _ = writeln!(out, "{:<6} {:>12} {:>11.6}", e.value, e.count, e.frequency);
    }
    out.push('\n');
    let _ = writeln!(out, "{:<6} {:>12} {:>11}", "lines", "count", "freq");
    for e in &r.line_distribution {
        let _ = writeln!(out, "{:<6} {:>12} {:>11.6}", e.value, e.count, e.frequency);
    }
    out.push('\n');
    if let (Some(a), Some(rep)) = (&r.attractor, &r.repeller) {
        let _ = writeln!(
            out,
            "global attractor: {:.6} +- {:.6}   global repeller: {:.6} +- {:.6}",
            a.frequency, a.std_error, rep.frequency, rep.std_error
        );
    }
    let _ = writeln!(
        out,
        "degenerate {} | unrealized {} | oracle fallbacks {}",
        r.degenerate, r.unrealized, r.oracle_fallbacks
    );
    out.push('\n');
    out.push_str(&render_relations(r));
    out
}

fn render_relations(r: &EstimationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<46} {:>11} {:>11} {:>7}",
        "relation", "observed", "expected", "z"
    );
    for c in &r.relations {
        let _ = writeln!(
            out,
            "{:<46} {:>11.6} {:>11.6} {:>+7.2}",
            c.name, c.observed, c.expected, c.z
        );
    }
    out
}
