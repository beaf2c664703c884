//! Command-line front end: construct extremal polyominoes, analyze shapes,
//! tabulate bounds, run the exhaustive search, verify the whole pipeline,
//! and render SVG pictures.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use deephole::constructor;
use deephole::formulas::{self, BoundsReport, ExactResult};
use deephole::grid::Polyomino;
use deephole::oracle::{self, ResultCache, SearchParams};
use deephole::svg;
use deephole::topology;

const CACHE_ENV: &str = "DEEPHOLE_CACHE_DIR";

#[derive(Parser)]
#[command(name = "deephole", version, about = "Deep holes in polyominoes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ShapeFormat {
    Ascii,
    Json,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    Ascii,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Build the extremal n-cell polyomino and print its band metadata.
    Construct {
        #[arg(long)]
        n: u64,
        /// Output file; the shape goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ShapeFormat::Ascii)]
        format: ShapeFormat,
    },
    /// Print the full topology report of a polyomino as JSON.
    Analyze {
        /// Input file holding the shape.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = InputFormat::Ascii)]
        format: InputFormat,
    },
    /// Emit the bounds table for a range of n.
    Bounds {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustively search all fixed n-ominoes for the maximum deep-hole
    /// count.
    Search {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Cache directory; falls back to DEEPHOLE_CACHE_DIR, then to no
        /// caching at all.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Construct, certify and cross-check every n in a range; exit 1 on the
    /// first counterexample.
    Verify {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// Additionally compare against the exhaustive oracle up to this n.
        #[arg(long)]
        oracle_up_to: Option<u32>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Render a polyomino to SVG.
    Render {
        #[arg(long = "in")]
        input: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 24)]
        cell_size: u32,
        #[arg(long, value_enum, default_value_t = InputFormat::Ascii)]
        format: InputFormat,
    },
}

/// Errors split by exit code: usage problems exit 2, failed verification
/// exits 1.
enum CliError {
    Usage(String),
    Verification(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> CliError {
        CliError::Usage(msg.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Construct { n, out, format } => cmd_construct(n, out, format),
        Command::Analyze { input, format } => cmd_analyze(&input, format),
        Command::Bounds {
            from,
            to,
            format,
            out,
        } => cmd_bounds(from, to, format, out),
        Command::Search { n, jobs, cache_dir } => cmd_search(n, jobs, cache_dir),
        Command::Verify {
            from,
            to,
            oracle_up_to,
            jobs,
        } => cmd_verify(from, to, oracle_up_to, jobs),
        Command::Render {
            input,
            out,
            cell_size,
            format,
        } => cmd_render(&input, out, cell_size, format),
    }
}

fn read_shape(path: &Path, format: InputFormat) -> Result<Polyomino, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let parsed = match format {
        InputFormat::Ascii => Polyomino::parse_ascii(&text),
        InputFormat::Json => Polyomino::from_json(&text),
    };
    parsed.map_err(|e| CliError::usage(format!("cannot parse {}: {e}", path.display())))
}

fn write_output(out: Option<&Path>, content: &str) -> Result<bool, CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, content)
                .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
            Ok(true)
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .map_err(|e| CliError::usage(e.to_string()))?;
            Ok(false)
        }
    }
}

const CONSTRUCT_MAX: u64 = 10_000_000;

fn cmd_construct(n: u64, out: Option<PathBuf>, format: ShapeFormat) -> Result<(), CliError> {
    if n < 8 {
        return Err(CliError::usage(format!(
            "no polyomino with a deep hole exists below n = 8 (got {n}); try `bounds` for small n"
        )));
    }
    if n > CONSTRUCT_MAX {
        return Err(CliError::usage(format!(
            "n = {n} exceeds the supported construction size {CONSTRUCT_MAX}"
        )));
    }
    let trace = constructor::construct(n).map_err(|e| CliError::Verification(e.to_string()))?;
    let metadata = serde_json::json!({
        "n": trace.decomposition.n,
        "a": trace.decomposition.a,
        "k": trace.decomposition.k,
        "case": trace.case,
        "f_n": trace.expected_f,
    });
    let content = match format {
        ShapeFormat::Ascii => {
            let mut s = trace.polyomino.to_ascii();
            s.push('\n');
            s
        }
        ShapeFormat::Json => {
            let mut s = trace.to_json().to_string();
            s.push('\n');
            s
        }
        ShapeFormat::Svg => svg::render(&trace.polyomino, 24),
    };
    let to_file = write_output(out.as_deref(), &content)?;
    // Keep stdout clean for the shape itself when no output file is given.
    if to_file {
        println!("{metadata}");
    } else {
        eprintln!("{metadata}");
    }
    Ok(())
}

fn cmd_analyze(input: &Path, format: InputFormat) -> Result<(), CliError> {
    let shape = read_shape(input, format)?;
    let report = topology::analyze(&shape);
    let inequalities = match topology::verify_inequalities(&report) {
        Ok(checks) => serde_json::Value::Array(
            checks
                .iter()
                .map(|c| {
                    serde_json::json!({"name": c.name, "holds": c.holds, "slack": c.slack})
                })
                .collect(),
        ),
        Err(_) => serde_json::Value::Null,
    };
    let mut doc = report.to_json();
    doc.as_object_mut()
        .unwrap()
        .insert("inequalities".into(), inequalities);
    println!("{doc}");
    Ok(())
}

fn cmd_bounds(
    from: u64,
    to: u64,
    format: TableFormat,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let rows = formulas::bounds_table(from, to).map_err(|e| CliError::usage(e.to_string()))?;
    // Stream row by row; a table over a wide range never materializes.
    let io_err = |e: std::io::Error| CliError::usage(e.to_string());
    let mut writer: Box<dyn Write> = match out {
        Some(path) => Box::new(std::io::BufWriter::new(std::fs::File::create(&path).map_err(
            |e| CliError::usage(format!("cannot write {}: {e}", path.display())),
        )?)),
        None => Box::new(std::io::BufWriter::new(std::io::stdout().lock())),
    };
    match format {
        TableFormat::Csv => {
            writeln!(writer, "{}", BoundsReport::CSV_HEADER).map_err(io_err)?;
            for row in rows {
                writeln!(writer, "{}", row.to_csv_row()).map_err(io_err)?;
            }
        }
        TableFormat::Json => {
            writeln!(writer, "[").map_err(io_err)?;
            let mut first = true;
            for row in rows {
                let sep = if first { "" } else { ",\n" };
                first = false;
                write!(writer, "{sep}{}", row.to_json()).map_err(io_err)?;
            }
            writeln!(writer, "\n]").map_err(io_err)?;
        }
    }
    writer.flush().map_err(io_err)?;
    Ok(())
}

fn cache_dir_from(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
}

fn cmd_search(n: u32, jobs: usize, cache_dir: Option<PathBuf>) -> Result<(), CliError> {
    let params = SearchParams {
        jobs: jobs.max(1),
        ..SearchParams::default()
    };
    let result =
        oracle::max_deep_holes_with(n, params).map_err(|e| CliError::usage(e.to_string()))?;
    if let Some(dir) = cache_dir_from(cache_dir) {
        let mut cache = ResultCache::open(&dir).map_err(|e| CliError::usage(e.to_string()))?;
        cache
            .record(&result)
            .map_err(|e| CliError::Verification(e.to_string()))?;
    }
    println!("{}", result.to_json());
    println!("{}", result.witness.to_ascii());
    Ok(())
}

fn cmd_verify(
    from: u64,
    to: u64,
    oracle_up_to: Option<u32>,
    jobs: usize,
) -> Result<(), CliError> {
    if from < 8 || from > to {
        return Err(CliError::usage(format!(
            "require 8 <= from <= to, got {from}..={to}"
        )));
    }
    if to > CONSTRUCT_MAX {
        return Err(CliError::usage(format!(
            "to = {to} exceeds the supported construction size {CONSTRUCT_MAX}"
        )));
    }
    if let Some(m) = oracle_up_to {
        if m > oracle::DEFAULT_LIMIT {
            return Err(CliError::usage(format!(
                "oracle-up-to {m} exceeds the enumeration limit {}",
                oracle::DEFAULT_LIMIT
            )));
        }
    }

    let mut oracle_table = Vec::new();
    for n in from..=to {
        let trace =
            constructor::construct(n).map_err(|e| CliError::Verification(e.to_string()))?;
        let f = formulas::f_of(n);
        if trace.expected_f != f {
            return Err(CliError::Verification(format!(
                "n={n}: construction yields {} deep holes, formula says {f}",
                trace.expected_f
            )));
        }
        let verdict = formulas::exact_h(n);
        if verdict.lo() != f {
            return Err(CliError::Verification(format!(
                "n={n}: verdict lower end {} disagrees with f_n {f}",
                verdict.lo()
            )));
        }
        if oracle_up_to.is_some_and(|m| n <= m as u64) {
            let result = oracle::max_deep_holes(n as u32, jobs.max(1))
                .map_err(|e| CliError::usage(e.to_string()))?;
            let h = result.h_max as u64;
            let ok = match verdict {
                ExactResult::Exact(v) => h == v,
                ExactResult::Range { lo, hi } => (lo..=hi).contains(&h),
            };
            if !ok {
                return Err(CliError::Verification(format!(
                    "n={n}: exhaustive maximum {h} contradicts {verdict}"
                )));
            }
            oracle_table.push((n, h));
        }
    }

    if !oracle_table.is_empty() {
        let table: Vec<String> = oracle_table
            .iter()
            .map(|(n, h)| format!("{n}:{h}"))
            .collect();
        println!("oracle h values: {}", table.join(" "));
    }
    println!(
        "verified n = {from}..={to}: construction certified, bounds consistent{}",
        match oracle_up_to {
            Some(m) => format!(", oracle cross-checked to {}", m.min(to as u32)),
            None => String::new(),
        }
    );
    Ok(())
}

fn cmd_render(
    input: &Path,
    out: Option<PathBuf>,
    cell_size: u32,
    format: InputFormat,
) -> Result<(), CliError> {
    if cell_size < 1 {
        return Err(CliError::usage("cell size must be at least 1"));
    }
    let shape = read_shape(input, format)?;
    let content = svg::render(&shape, cell_size);
    write_output(out.as_deref(), &content)?;
    Ok(())
}
