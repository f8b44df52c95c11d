use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use flexcert::certify::{
    analyze_system, t_standard_run, AnalysisConfig, CertifyError, TStandardConfig,
    TStandardOutcome, DEFAULT_MAX_DEPTH, DEFAULT_Q_MAX,
};
use flexcert::format::{
    certificate_value, framework_report_value, parse_framework, parse_system, report_value,
    series_value, to_json_text, vector_value, write_system, FormatError, ParsedSystem, SystemFile,
};
use flexcert::quadsys::{QuadraticSystem, ReductionMap, SystemError};
use flexcert::ratlinalg::Vector;
use flexcert::rigidity::analyze_framework;
use flexcert::series::{extend_to, Extended, SeriesCoefficients, SubspaceConstraint};

#[derive(Parser, Debug)]
#[command(
    name = "flexcert",
    version,
    about = "Exact rigidity and flexibility certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Largest series degree tried when searching for a flexibility certificate.
    #[arg(long, global = true, default_value_t = DEFAULT_Q_MAX, value_parser = at_least::<1>)]
    q_max: usize,
    /// Deepest order of the normalized formal solution.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_DEPTH, value_parser = at_least::<2>)]
    max_depth: usize,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
}

fn at_least<const N: usize>(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v >= N => Ok(v),
        Ok(_) => Err(format!("must be at least {N}")),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether the base point of a polynomial system is isolated.
    AnalyzeSystem { file: PathBuf },
    /// Decide whether a bar framework is rigid or flexible.
    AnalyzeFramework {
        file: PathBuf,
        /// Pin a simplex in normal position when the file has no pins.
        #[arg(long)]
        auto_pin: bool,
    },
    /// Rewrite a polynomial system with equations of degree at most two.
    Reduce {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Print series coefficients of a solution curve through the base point.
    Extend {
        file: PathBuf,
        #[arg(long)]
        degree: usize,
        /// Kernel basis vector (1-based) to start from when the kernel is
        /// not a line.
        #[arg(long, default_value_t = 1)]
        direction: usize,
    },
}

#[derive(Debug, Error)]
enum Failure {
    #[error("{path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: String, source: FormatError },
    #[error("{0}")]
    Usage(String),
    #[error("base point is not a solution; residual {0}")]
    NotASolution(Vector),
    #[error("{path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::NotASolution(_) => 3,
            Failure::Write { .. } => 1,
            _ => 2,
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|source| Failure::Read {
        path: path.display().to_string(),
        source,
    })
}

fn load_system(path: &Path) -> Result<SystemFile, Failure> {
    parse_system(&read(path)?).map_err(|source| Failure::Parse {
        path: path.display().to_string(),
        source,
    })
}

/// The degree-two system, the reduction map, and the lifted base point,
/// after checking that the base point solves the system as written.
fn prepared(file: &SystemFile) -> Result<(QuadraticSystem, ReductionMap, Vector), Failure> {
    let x0 = file
        .base_point
        .clone()
        .ok_or_else(|| Failure::Usage("input has no base_point".into()))?;
    let residual = match &file.system {
        ParsedSystem::Quadratic(q) => q.evaluate(&x0),
        ParsedSystem::General(g) => g.evaluate(&x0),
    }
    .map_err(|e| Failure::Usage(e.to_string()))?;
    if !residual.is_zero() {
        return Err(Failure::NotASolution(residual));
    }
    let (q, map) = file.quadratic();
    let lifted = map
        .lift_base_point(&x0)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    Ok((q, map, lifted))
}

fn certify_failure(e: CertifyError) -> Failure {
    match e {
        CertifyError::System(SystemError::NotASolution { residual }) => {
            Failure::NotASolution(residual)
        }
        other => Failure::Usage(other.to_string()),
    }
}

fn render_human(v: &Value) -> String {
    let mut out = String::new();
    let obj = v.as_object().expect("report object");
    let get = |k: &str| obj.get(k).filter(|x| !x.is_null());
    let _ = writeln!(out, "verdict: {}", obj["verdict"].as_str().unwrap_or("?"));
    if let Some(c) = get("criterion") {
        let _ = writeln!(
            out,
            "criterion: {} (theorem {})",
            c["description"].as_str().unwrap_or(""),
            c["theorem"]
        );
    }
    if let Some(w) = get("witness") {
        let _ = writeln!(
            out,
            "witness: distance {}-{} changes at order {} (coefficient {})",
            w["pair"][0].as_str().unwrap_or(""),
            w["pair"][1].as_str().unwrap_or(""),
            w["order"],
            w["coefficient"].as_str().unwrap_or("")
        );
    }
    if let Some(vars) = get("variables") {
        let names: Vec<&str> = vars
            .as_array()
            .into_iter()
            .flatten()
            .filter_map(Value::as_str)
            .collect();
        let _ = writeln!(out, "variables: {}", names.join(", "));
    }
    let _ = writeln!(out, "kernel dimension: {}", obj["kernel_dimension"]);
    let _ = writeln!(out, "depth: {}", obj["depth"]);
    for note in obj["notes"].as_array().into_iter().flatten() {
        let _ = writeln!(out, "note: {}", note.as_str().unwrap_or(""));
    }
    match get("certificate") {
        Some(c) => {
            let _ = writeln!(out, "certificate: {}", c["kind"].as_str().unwrap_or(""));
            let body = serde_json::to_string_pretty(c).expect("serializable");
            for line in body.lines() {
                let _ = writeln!(out, "  {line}");
            }
        }
        None => {
            let _ = writeln!(out, "certificate: none");
        }
    }
    out
}

fn emit(v: &Value, json: bool) {
    if json {
        print!("{}", to_json_text(v));
    } else {
        print!("{}", render_human(v));
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = AnalysisConfig {
        q_max: cli.q_max,
        max_depth: cli.max_depth,
    };
    match cli.command {
        Command::AnalyzeSystem { file } => {
            let sys_file = load_system(&file)?;
            let (q, _, x0) = prepared(&sys_file)?;
            let report = analyze_system(&q, &x0, &config).map_err(certify_failure)?;
            emit(&report_value(&report), cli.json);
        }
        Command::AnalyzeFramework { file, auto_pin } => {
            let parsed = parse_framework(&read(&file)?).map_err(|source| Failure::Parse {
                path: file.display().to_string(),
                source,
            })?;
            let report = analyze_framework(&parsed.framework, &config, auto_pin || parsed.auto_pin)
                .map_err(|e| Failure::Parse {
                    path: file.display().to_string(),
                    source: FormatError::Invalid(e.to_string()),
                })?;
            emit(&framework_report_value(&report), cli.json);
        }
        Command::Reduce { file, output } => {
            let sys_file = load_system(&file)?;
            let (q, map) = sys_file.quadratic();
            let base_point = match &sys_file.base_point {
                Some(_) => Some(prepared(&sys_file)?.2),
                None => None,
            };
            let reduced = SystemFile {
                system: ParsedSystem::Quadratic(q.clone()),
                base_point,
                auxiliary: map.auxiliary.clone(),
            };
            std::fs::write(&output, write_system(&reduced)).map_err(|source| Failure::Write {
                path: output.display().to_string(),
                source,
            })?;
            let summary = json!({
                "output": output.display().to_string(),
                "variables": q.variable_count(),
                "equations": q.equation_count(),
                "auxiliary": map.auxiliary.iter().map(|a| json!({
                    "variable": q.variables()[a.variable],
                    "monomial": a.monomial,
                })).collect::<Vec<_>>(),
            });
            if cli.json {
                print!("{}", to_json_text(&summary));
            } else {
                println!(
                    "wrote {} ({} variables, {} equations, {} auxiliary)",
                    output.display(),
                    q.variable_count(),
                    q.equation_count(),
                    map.auxiliary.len()
                );
            }
        }
        Command::Extend {
            file,
            degree,
            direction,
        } => {
            let sys_file = load_system(&file)?;
            let (q, _, x0) = prepared(&sys_file)?;
            let ops = q
                .linearize(&x0)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let v = extend_value(&ops, degree, direction)?;
            if cli.json {
                print!("{}", to_json_text(&v));
            } else {
                println!("mode: {}", v["mode"].as_str().unwrap_or(""));
                for (p, c) in v["series"]["coefficients"]
                    .as_array()
                    .into_iter()
                    .flatten()
                    .enumerate()
                {
                    let entries: Vec<&str> = c
                        .as_array()
                        .into_iter()
                        .flatten()
                        .filter_map(Value::as_str)
                        .collect();
                    println!("Y{p} = ({})", entries.join(", "));
                }
                if let Some(s) = v.get("stalled").filter(|s| !s.is_null()) {
                    println!(
                        "stalled at order {}: right-hand side not in the image of C",
                        s["order"]
                    );
                }
            }
        }
    }
    Ok(())
}

fn extend_value(
    ops: &flexcert::quadsys::BaseOperators,
    degree: usize,
    direction: usize,
) -> Result<Value, Failure> {
    let d = ops.kernel_dimension();
    if d == 0 {
        return Ok(json!({
            "mode": "constant",
            "series": series_value(&SeriesCoefficients::constant(ops.base_point().clone())),
            "stalled": Value::Null,
        }));
    }
    if d == 1 && degree >= 2 {
        let cfg = TStandardConfig::default_for(ops, degree).map_err(certify_failure)?;
        return Ok(match t_standard_run(ops, &cfg).map_err(certify_failure)? {
            TStandardOutcome::Survived(s) => json!({
                "mode": "normalized",
                "series": series_value(&s.series),
                "stalled": Value::Null,
            }),
            TStandardOutcome::Fail(f) => json!({
                "mode": "normalized",
                "series": series_value(&f.series),
                "stalled": {"order": f.p, "rhs": vector_value(&f.rhs)},
                "certificate": certificate_value(&flexcert::certify::Certificate::TStandardFail(f.clone())),
            }),
        });
    }
    let v = direction
        .checked_sub(1)
        .and_then(|i| ops.kernel().get(i))
        .ok_or_else(|| Failure::Usage(format!("direction must be between 1 and {d}")))?;
    let start = SeriesCoefficients::from_direction(ops.base_point().clone(), v.clone(), 0);
    let outcome = extend_to(
        ops,
        &start,
        degree.max(1),
        &SubspaceConstraint::Unconstrained,
    )
    .map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(match outcome {
        Extended::Reached(s) => json!({
            "mode": "canonical",
            "series": series_value(&s),
            "stalled": Value::Null,
        }),
        Extended::Stalled { series, order, rhs } => json!({
            "mode": "canonical",
            "series": series_value(&series),
            "stalled": {"order": order, "rhs": vector_value(&rhs)},
        }),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
