use std::fmt::Write as _;
use std::io::{ErrorKind, Read, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use jfx_core::ccp::{self, Shrink};
use jfx_core::io::{self, FunctionInput};
use jfx_core::jfnorm::{self, Mode};
use jfx_core::rational::parse_rational;
use jfx_core::{suites, variation, NormCertificate, Rational, SearchConfig, SymmetricSpace};

/// Norms of James-type function spaces and X-variation spaces.
#[derive(Parser)]
#[command(name = "jfx", version)]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunConfig {
    /// Sequence space X: `lp:<p>`, `lorentz:p=<p>,w=harmonic` or `lorentz:p=<p>,w=1,0.5,...`.
    #[arg(long, global = true, default_value = "lp:2")]
    space: SymmetricSpace,
    /// Largest piece count searched exhaustively for non-ℓ_p spaces.
    #[arg(long, global = true, default_value_t = 22, value_parser = clap::value_parser!(u64).range(1..))]
    limit_breakpoints: u64,
    /// Largest grid cell count searched without a node budget.
    #[arg(long, global = true, default_value_t = 9, value_parser = clap::value_parser!(u64).range(1..))]
    limit_cells: u64,
    /// Node budget once a limit is exceeded.
    #[arg(long, global = true, default_value_t = 20_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    node_budget: u64,
    /// Beyond the limits, return a lower bound instead of failing.
    #[arg(long, global = true)]
    bounded: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format; `ccp` defaults to csv, the others to json.
    #[arg(long, global = true, value_enum)]
    out: Option<Format>,
    /// Report wall-clock times (output is no longer byte-reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// JF norm of a step or grid function given as JSON (`-` reads stdin).
    Norm { input: PathBuf },
    /// V_X norm of a piecewise-linear path given as CSV rows `t,f(t)`.
    Var {
        input: PathBuf,
        /// Width-constrained variation estimate; may be repeated.
        #[arg(long, value_parser = parse_rat)]
        modulus: Vec<Rational>,
        /// Split into a uniformly small part and a small-support part.
        #[arg(long, value_parser = parse_rat)]
        split: Option<Rational>,
    },
    /// Convex-combination experiments.
    Ccp {
        /// Block exponents n_1 < n_2 < …
        #[arg(long, value_delimiter = ',', default_value = "4,5,6,7,8,9")]
        schedule: Vec<u32>,
        /// Selected fraction #I_k / 2^{n_k} per block; default 2^{-k}.
        #[arg(long, value_delimiter = ',', value_parser = parse_rat)]
        ratios: Option<Vec<Rational>>,
        /// Norms of prefix sums of normalized Rademacher functions with these indices.
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["schedule", "ratios"])]
        rademacher: Option<Vec<u32>>,
    },
    /// Seeded invariant suites: symnorm, jfnorm, variation, ccp or all.
    Verify { suite: String },
}

fn parse_rat(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

impl RunConfig {
    fn format(&self, default: Format) -> Format {
        self.out.unwrap_or(default)
    }

    fn search(&self) -> SearchConfig {
        SearchConfig {
            exhaustive_limit: self.limit_breakpoints as usize,
            cell_limit: self.limit_cells as usize,
            bounded: self.bounded,
            node_budget: self.node_budget,
        }
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn exit_for(mode: Mode) -> ExitCode {
    match mode {
        Mode::Exact => ExitCode::SUCCESS,
        Mode::LowerBound => ExitCode::from(2),
    }
}

fn certificate(run: &RunConfig, mut cert: NormCertificate) -> (Value, Mode) {
    if !run.timing {
        cert.stats.elapsed_ms = 0;
    }
    (io::certificate_to_json(&cert), cert.mode)
}

fn emit(out: &mut String, run: &RunConfig, v: &Value) -> Result<()> {
    match run.format(Format::Json) {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(v)?)?,
        Format::Csv => {
            writeln!(out, "value,mode,nodes,elapsed_ms")?;
            writeln!(
                out,
                "{},{},{},{}",
                v["value"],
                v["mode"].as_str().unwrap_or(""),
                v["stats"]["nodes"],
                v["stats"]["elapsed_ms"]
            )?;
        }
    }
    Ok(())
}

fn cmd_norm(out: &mut String, run: &RunConfig, input: &Path) -> Result<ExitCode> {
    let cfg = run.search();
    let cert = match io::parse_function(&read_input(input)?)? {
        FunctionInput::Step(f) => jfnorm::norm1d(&run.space, &f, &cfg)?,
        FunctionInput::Grid(g) => jfnorm::norm_grid(&run.space, &g, &cfg)?,
    };
    let (v, mode) = certificate(run, cert);
    emit(out, run, &v)?;
    Ok(exit_for(mode))
}

fn cmd_var(
    out: &mut String,
    run: &RunConfig,
    input: &Path,
    moduli: &[Rational],
    split: Option<&Rational>,
) -> Result<ExitCode> {
    let cfg = run.search();
    let path = io::read_path_csv(read_input(input)?.as_bytes())?;
    let (mut v, mode) = certificate(run, variation::vx_norm(&run.space, &path, &cfg)?);
    if run.format(Format::Json) == Format::Csv && (!moduli.is_empty() || split.is_some()) {
        bail!("--modulus and --split reports need --out json");
    }
    if !moduli.is_empty() {
        let reports = moduli
            .iter()
            .map(|d| Ok(io::modulus_to_json(d, &variation::modulus(&run.space, &path, d, &cfg)?)))
            .collect::<Result<Vec<_>>>()?;
        v["modulus"] = Value::Array(reports);
    }
    if let Some(eps) = split {
        v["split"] = io::split_to_json(eps, &variation::split(&path, eps)?);
    }
    emit(out, run, &v)?;
    Ok(exit_for(mode))
}

fn cmd_ccp(
    out: &mut String,
    run: &RunConfig,
    schedule: &[u32],
    ratios: Option<Vec<Rational>>,
    rademacher: Option<&[u32]>,
) -> Result<ExitCode> {
    if let Some(indices) = rademacher {
        let cfg = run.search();
        let mut rows = vec![];
        let mut worst = Mode::Exact;
        for k in 1..=indices.len() {
            let c = ccp::rademacher_sum_norm(&run.space, &indices[..k], &cfg)?;
            if c.mode == Mode::LowerBound {
                worst = Mode::LowerBound;
            }
            rows.push((k, indices[k - 1], c.value, c.mode));
        }
        match run.format(Format::Csv) {
            Format::Csv => {
                writeln!(out, "K,index,value,mode")?;
                for (k, n, value, mode) in rows {
                    writeln!(out, "{k},{n},{value},{}", mode_name(mode))?;
                }
            }
            Format::Json => {
                let v: Vec<Value> = rows
                    .into_iter()
                    .map(|(k, n, value, mode)| json!({"K": k, "index": n, "value": value, "mode": mode}))
                    .collect();
                writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
            }
        }
        return Ok(exit_for(worst));
    }
    let shrink = ratios.map_or(Shrink::Halving, Shrink::Ratios);
    let report = ccp::growth(&run.space, schedule, &shrink)?;
    match run.format(Format::Csv) {
        Format::Csv => {
            let mut buf = vec![];
            io::write_growth_csv(&mut buf, &report)?;
            out.push_str(&String::from_utf8(buf)?);
        }
        Format::Json => {
            let rows: Vec<Value> = report
                .rows
                .iter()
                .map(|r| json!({"K": r.blocks, "value": r.value, "control": r.control, "asymptotic": r.asymptotic}))
                .collect();
            let v = json!({"space": run.space.to_string(), "rows": rows, "truncated": report.truncated});
            writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
        }
    }
    if report.truncated {
        eprintln!("dimension limit reached; later prefixes omitted");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Exact => "exact",
        Mode::LowerBound => "lower_bound",
    }
}

fn cmd_verify(out: &mut String, run: &RunConfig, suite: &str) -> Result<ExitCode> {
    let checks = suites::run(suite, run.seed)?;
    let failed = checks.iter().filter(|c| !c.pass()).count();
    for c in &checks {
        writeln!(out, "{c}")?;
    }
    writeln!(out, "{} checks, {failed} failed (seed {})", checks.len(), run.seed)?;
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = &cli.run;
    let mut out = String::new();
    let result = match &cli.command {
        Command::Norm { input } => cmd_norm(&mut out, run, input),
        Command::Var { input, modulus, split } => cmd_var(&mut out, run, input, modulus, split.as_ref()),
        Command::Ccp {
            schedule,
            ratios,
            rademacher,
        } => cmd_ccp(&mut out, run, schedule, ratios.clone(), rademacher.as_deref()),
        Command::Verify { suite } => cmd_verify(&mut out, run, suite),
    };
    let code = result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::FAILURE
    });
    let mut stdout = std::io::stdout().lock();
    match stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => {
            eprintln!("error: writing output: {e}");
            ExitCode::FAILURE
        }
        _ => code,
    }
}
