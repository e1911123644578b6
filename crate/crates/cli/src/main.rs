mod output;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use randers_core::exec::Execution;
use randers_core::finsler;
use randers_core::randers::{pric_randers, pric_randers_displayed};
use randers_core::riemann::{beta_suite, BaseGeometry, BetaEval};
use randers_core::sampling::draw_samples;
use randers_core::verify::{run_check, CField, Check, IdentityKind, Options, Theorem, Tolerances};
use randers_core::zoo;
use randers_core::MetricSpec;

use output::{sig, ReportFile};

#[derive(Parser)]
#[command(name = "randers", version, about = "Curvature of Randers metrics: evaluation and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print quantities at one point (x, y).
    Eval {
        /// Spec file, `zoo:<name>` or `random:<seed>[:<n>[:<degree>[:<amplitude>]]]`.
        spec: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        y: Vec<f64>,
        /// Comma-separated: F, g, G, R, Ric, S, tau, sigmaBH, PRic, PRicRanders, PRicRandersDisplayed, betaSuite.
        #[arg(long, short, value_delimiter = ',', default_value = "F")]
        quantity: Vec<String>,
    },
    /// Sample the spec and run a theorem verifier.
    Verify {
        spec: String,
        /// isotropic, flat, reversible or square.
        theorem: Theorem,
        /// `c(x)` for `isotropic`: a number, an expression in x1..xn, or `fit`.
        #[arg(long, default_value = "fit")]
        c: CField,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Sample the spec and run an identity cross-check.
    Identity {
        spec: String,
        /// eq7, epoly, npoly, homogeneity or sTwoPath.
        kind: IdentityKind,
        /// Fixed `c` for `epoly`; drawn uniformly from [-1, 1] per sample otherwise.
        #[arg(long, allow_hyphen_values = true)]
        c: Option<f64>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Export the catalogue or reproduce its documented verdicts.
    Zoo {
        /// Write every entry as `<name>.toml` into this directory.
        #[arg(long, conflicts_with = "run_all", required_unless_present = "run_all")]
        export: Option<PathBuf>,
        #[arg(long)]
        run_all: bool,
        #[arg(long, default_value_t = 40)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSON file for the outcome matrix.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override every tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// JSON report file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat per-record CSV export.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Evaluate samples on one thread.
    #[arg(long)]
    sequential: bool,
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn load_spec(arg: &str) -> Result<MetricSpec> {
    if let Some(name) = arg.strip_prefix("zoo:") {
        return zoo::by_name(name).map(|e| e.spec).ok_or_else(|| {
            let names: Vec<String> = zoo::catalogue().into_iter().map(|e| e.name).collect();
            anyhow!("no catalogue entry `{name}` (known: {})", names.join(", "))
        });
    }
    if let Some(rest) = arg.strip_prefix("random:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.is_empty() || parts.len() > 4 {
            bail!("expected random:<seed>[:<n>[:<degree>[:<amplitude>]]], got `{arg}`");
        }
        let seed = parts[0].parse().context("random seed")?;
        let n = parts.get(1).map_or(Ok(2), |s| s.parse()).context("random dimension")?;
        let degree = parts.get(2).map_or(Ok(2), |s| s.parse()).context("random degree")?;
        let amplitude = parts.get(3).map_or(Ok(0.05), |s| s.parse()).context("random amplitude")?;
        return Ok(zoo::random_randers(seed, n, degree, amplitude)?);
    }
    let text = std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?;
    MetricSpec::from_toml_str(&text).with_context(|| format!("in {arg}"))
}

fn print_matrix(out: &mut impl Write, name: &str, m: &ndarray::Array2<f64>) -> io::Result<()> {
    for (i, row) in m.rows().into_iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|v| sig(*v)).collect();
        writeln!(out, "{name}[{}] = [{}]", i + 1, cells.join(", "))?;
    }
    Ok(())
}

fn print_vector(out: &mut impl Write, name: &str, v: impl IntoIterator<Item = f64>) -> io::Result<()> {
    let cells: Vec<String> = v.into_iter().map(sig).collect();
    writeln!(out, "{name} = [{}]", cells.join(", "))
}

fn print_beta(out: &mut impl Write, b: &BetaEval) -> io::Result<()> {
    print_vector(out, "b_i", b.b.iter().copied())?;
    print_vector(out, "b^i", b.b_up.iter().copied())?;
    writeln!(out, "||beta|| = {}", sig(b.norm))?;
    print_matrix(out, "r_ij", &b.r)?;
    print_matrix(out, "s_ij", &b.s)?;
    print_vector(out, "r_j", b.r_vec.iter().copied())?;
    print_vector(out, "s_j", b.s_vec.iter().copied())?;
    writeln!(out, "r = {}", sig(b.r_scalar))?;
    print_matrix(out, "t_ij", &b.t)?;
    writeln!(out, "t^m_m = {}", sig(b.t_trace))?;
    writeln!(out, "rho = {}", sig(b.rho))?;
    print_vector(out, "rho_i", b.rho_grad.iter().copied())?;
    print_matrix(out, "rho_ij", &b.rho_hess)?;
    print_vector(out, "s^m_j;m", b.s_div.iter().copied())
}

fn cmd_eval(spec_arg: &str, x: &[f64], y: &[f64], quantities: &[String]) -> Result<ExitCode> {
    let spec = load_spec(spec_arg)?;
    let n = spec.dim();
    if x.len() != n || y.len() != n {
        bail!("spec has dimension {n} but x has {} and y has {} components", x.len(), y.len());
    }
    if !spec.in_domain(x) {
        eprintln!("warning: x = {x:?} lies outside the domain box {:?}", spec.domain());
    }
    BaseGeometry::at(&spec, x).context("inadmissible point")?;
    let mut eval = None;
    let mut evaluated = || -> Result<finsler::FinslerEval> {
        if eval.is_none() {
            eval = Some(finsler::evaluate(&spec, x, y)?);
        }
        Ok(eval.clone().expect("just set"))
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for q in quantities {
        match q.trim() {
            "F" => writeln!(out, "F = {}", sig(norm(&spec, x, y)?))?,
            "g" => print_matrix(&mut out, "g", &finsler::fundamental_tensor(&spec, x, y)?)?,
            "G" => print_vector(&mut out, "G", finsler::spray(&spec, x, y)?.iter().copied())?,
            "R" => print_matrix(&mut out, "R", &evaluated()?.riemann)?,
            "Ric" => writeln!(out, "Ric = {}", sig(evaluated()?.ric))?,
            "S" => writeln!(out, "S = {}", sig(finsler::s_curvature(&spec, x, y)?))?,
            "tau" => writeln!(out, "tau = {}", sig(finsler::distortion(&spec, x, y)?))?,
            "sigmaBH" => writeln!(out, "sigmaBH = {}", sig(finsler::bh_volume_density(&spec, x)?))?,
            "PRic" => writeln!(out, "PRic = {}", sig(evaluated()?.pric))?,
            "PRicRanders" => writeln!(out, "PRicRanders = {}", sig(pric_randers(&spec, x, y)?))?,
            "PRicRandersDisplayed" => {
                writeln!(out, "PRicRandersDisplayed = {}", sig(pric_randers_displayed(&spec, x, y)?))?
            }
            "betaSuite" => print_beta(&mut out, &beta_suite(&spec, x)?)?,
            other => bail!("unknown quantity `{other}`"),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn norm(spec: &MetricSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    Ok(finsler::norm_jets(spec, x, y, 0, 0)?.f.value())
}

fn cmd_check(spec_arg: &str, check: Check, run: &RunArgs, epoly_c: Option<f64>) -> Result<ExitCode> {
    let spec = load_spec(spec_arg)?;
    let tol = run.tol.map_or_else(Tolerances::default, Tolerances::uniform);
    let opts = Options { tol, exec: execution(run.sequential), seed: run.seed, epoly_c };
    let start = Instant::now();
    let set = draw_samples(&spec, run.samples, run.seed)?;
    let report = run_check(&spec, &check, &set, &opts)?;
    let file = ReportFile::new(report, run.seed, run.samples, tol, start.elapsed().as_millis());
    if let Some(path) = &run.out {
        file.write_json(path)?;
    }
    if let Some(path) = &run.csv {
        file.write_csv(path)?;
    }
    file.print_summary(&mut io::stdout().lock())?;
    Ok(if file.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_zoo_export(dir: &PathBuf) -> Result<ExitCode> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for entry in zoo::catalogue() {
        let path = dir.join(format!("{}.toml", entry.name));
        std::fs::write(&path, entry.spec.to_toml_string()).with_context(|| format!("writing {}", path.display()))?;
        println!("{}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_zoo_run(samples: usize, seed: u64, out_path: Option<&PathBuf>, sequential: bool) -> Result<ExitCode> {
    let opts = Options { exec: execution(sequential), seed, ..Options::default() };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut all = Vec::new();
    writeln!(out, "{:<18} {:<28} {:<22} {:<28} result", "entry", "check", "expected", "observed")?;
    for entry in zoo::catalogue() {
        for o in zoo::run_entry(&entry, samples, seed, &opts)? {
            let mark = if o.reproduced { "ok" } else { "MISMATCH" };
            writeln!(out, "{:<18} {:<28} {:<22} {:<28} {mark}", o.entry, o.target, o.expected, o.observed)?;
            all.push(o);
        }
    }
    let bad = all.iter().filter(|o| !o.reproduced).count();
    writeln!(out, "{} of {} documented verdicts reproduced", all.len() - bad, all.len())?;
    if let Some(path) = out_path {
        let text = serde_json::to_string_pretty(&all)?;
        std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if bad == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Eval { spec, x, y, quantity } => cmd_eval(&spec, &x, &y, &quantity),
        Command::Verify { spec, theorem, c, run } => {
            let check = match theorem {
                Theorem::Isotropic => Check::Isotropic(c),
                Theorem::Flat => Check::Flat,
                Theorem::Reversible => Check::Reversible,
                Theorem::Square => Check::Square,
            };
            cmd_check(&spec, check, &run, None)
        }
        Command::Identity { spec, kind, c, run } => cmd_check(&spec, Check::Identity(kind), &run, c),
        Command::Zoo { export: Some(dir), .. } => cmd_zoo_export(&dir),
        Command::Zoo { samples, seed, out, sequential, .. } => cmd_zoo_run(samples, seed, out.as_ref(), sequential),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
