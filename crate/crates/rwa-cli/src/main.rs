//! `rwa`: sample randomly weighted averages, tabulate their transforms by
//! every applicable route, and run the named verification checks.
//!
//! Every run is reproducible: the master seed comes from `--seed`, else the
//! `RWA_SEED` environment variable, else a fixed default. Identical command
//! and seed produce byte-identical output.

use std::env;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rwa_core::dist::{CompositionSpec, IntervalBeta, PowerSemicircle};
use rwa_core::rng;
use rwa_core::rwa::{sample_rwa, RwaProblem, WeightPath};
use rwa_core::suite::{all_check_ids, run_suite};
use rwa_core::transform::{
    ast_moment_series, ast_quadrature, z_grid, AstQuery, ClosedForm, SERIES_TOL,
};
use rwa_core::verify::VerifyConfig;

/// Master seed when neither `--seed` nor the environment provides one;
/// fixed, never wall-clock, so bare invocations are reproducible.
const DEFAULT_SEED: u64 = 42;

/// Environment variable consulted for the master seed when `--seed` is
/// absent.
const SEED_ENV: &str = "RWA_SEED";

#[derive(Parser)]
#[command(
    name = "rwa",
    version,
    about = "Randomly weighted averages: sampling, transform tables, verification",
    after_help = seed_help()
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw replicates of a randomly weighted average as a one-column CSV.
    Sample(SampleArgs),
    /// Tabulate a transform over a z grid, one CSV row per point.
    Ast(AstArgs),
    /// Run named verification checks; one tab-separated line per gate.
    #[command(after_help = verify_help())]
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SampleArgs {
    /// Composition `n` or `n:c1,c2,...`: weights are uniform order
    /// statistic gaps on the unit interval grouped by the cuts (bare `n`
    /// cuts everywhere).
    #[arg(long, value_parser = parse_comp, conflicts_with = "dirichlet")]
    spec: Option<CompositionSpec>,

    /// Orders `r1,...,rk`: weights drawn directly from Dirichlet(r1,...,rk).
    #[arg(long, value_parser = parse_orders)]
    dirichlet: Option<Orders>,

    /// Input distribution per block, repeated k times
    /// (beta:p,q:a,b | ps:theta,sigma | uniform:a,b | arcsine:a,b |
    /// wigner:sigma).
    #[arg(long = "input", value_parser = parse_dist, required = true)]
    inputs: Vec<IntervalBeta>,

    /// Number of replicates.
    #[arg(long)]
    n: usize,

    /// Master seed (overrides the environment).
    #[arg(long)]
    seed: Option<u64>,

    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AstArgs {
    /// Distribution to transform
    /// (beta:p,q:a,b | ps:theta,sigma | uniform:a,b | arcsine:a,b |
    /// wigner:sigma).
    #[arg(long, value_parser = parse_dist)]
    dist: IntervalBeta,

    /// Transform order d > 0.
    #[arg(long)]
    order: f64,

    /// Explicit z values (repeatable); default is a 21-point grid covering
    /// |z| max(|a|,|b|) <= 0.9.
    #[arg(long = "z", allow_hyphen_values = true)]
    zs: Vec<f64>,

    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Check id to run (repeatable).
    #[arg(long = "check", conflicts_with = "all")]
    checks: Vec<String>,

    /// Run the whole catalog.
    #[arg(long)]
    all: bool,

    /// Master seed (overrides the environment).
    #[arg(long)]
    seed: Option<u64>,

    /// Monte Carlo replicates per check.
    #[arg(long)]
    samples: Option<usize>,

    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn seed_help() -> String {
    format!("The master seed defaults to {SEED_ENV} from the environment, then {DEFAULT_SEED}.")
}

fn verify_help() -> String {
    format!("Known checks:\n  {}", all_check_ids().join("\n  "))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match command {
        Command::Sample(args) => {
            run_sample(args)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Ast(args) => {
            run_ast(args)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => run_verify(args),
    }
}

fn run_sample(args: SampleArgs) -> Result<(), Box<dyn std::error::Error>> {
    let (problem, path) = match (args.spec, args.dirichlet) {
        (Some(comp), None) => (
            RwaProblem::from_composition(comp, args.inputs)?,
            WeightPath::OrderStatistics,
        ),
        (None, Some(Orders(r))) => (
            RwaProblem::from_dirichlet(r, args.inputs)?,
            WeightPath::Dirichlet,
        ),
        _ => return Err("exactly one of --spec or --dirichlet is required".into()),
    };
    let seed = resolve_seed(args.seed)?;
    let mut rng = rng::substream(seed, "cli:sample");
    let xs = sample_rwa(&problem, path, &mut rng, args.n)?;

    let mut w = writer(args.out.as_ref())?;
    writeln!(w, "value")?;
    for x in xs {
        writeln!(w, "{x:.16e}")?;
    }
    w.flush()?;
    Ok(())
}

fn run_ast(args: AstArgs) -> Result<(), Box<dyn std::error::Error>> {
    if args.order.is_nan() || args.order <= 0.0 {
        return Err(format!("--order must be positive, got {}", args.order).into());
    }
    let zs = if args.zs.is_empty() {
        z_grid(args.dist.support_radius())
    } else {
        args.zs
    };
    let queries = zs
        .iter()
        .map(|&z| AstQuery::new(args.dist, args.order, z))
        .collect::<Result<Vec<_>, _>>()?;
    let form = ClosedForm::match_for(&args.dist, args.order);

    let mut w = writer(args.out.as_ref())?;
    writeln!(
        w,
        "z,closed_form,quadrature,moment_series,max_pairwise_diff"
    )?;
    for (z, query) in zs.iter().copied().zip(queries) {
        let quad = ast_quadrature(query)?.value;
        let series = ast_moment_series(query, SERIES_TOL)?.value;
        let closed = form.as_ref().map(|f| f.eval(z)).transpose()?;
        let mut lo = quad.min(series);
        let mut hi = quad.max(series);
        if let Some(c) = closed {
            lo = lo.min(c);
            hi = hi.max(c);
        }
        let closed_field = closed.map(|c| format!("{c:.16e}")).unwrap_or_default();
        writeln!(
            w,
            "{z:.16e},{closed_field},{quad:.16e},{series:.16e},{:.16e}",
            hi - lo
        )?;
    }
    w.flush()?;
    Ok(())
}

fn run_verify(args: VerifyArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    if !args.all && args.checks.is_empty() {
        return Err("name at least one --check or pass --all".into());
    }
    let mut config = VerifyConfig::default();
    if let Some(n) = args.samples {
        config.sample_count = n;
    }
    let seed = resolve_seed(args.seed)?;
    let ids = if args.all {
        None
    } else {
        Some(&args.checks[..])
    };
    let report = run_suite(ids, seed, &config)?;

    let mut w = writer(args.out.as_ref())?;
    w.write_all(report.render().as_bytes())?;
    w.flush()?;
    Ok(if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, String> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{SEED_ENV} must be a 64-bit unsigned integer, got {v:?}")),
        Err(env::VarError::NotPresent) => Ok(DEFAULT_SEED),
        Err(e) => Err(format!("{SEED_ENV}: {e}")),
    }
}

fn writer(out: Option<&PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

#[derive(Clone, Debug)]
struct Orders(Vec<f64>);

fn parse_orders(s: &str) -> Result<Orders, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad order {t:?}: {e}"))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Orders)
}

fn parse_comp(s: &str) -> Result<CompositionSpec, String> {
    let size = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|e| format!("bad group size {t:?}: {e}"))
    };
    let built = match s.split_once(':') {
        None => CompositionSpec::all_cuts(size(s)?),
        Some((n, cuts)) => {
            let cuts = cuts
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse::<u32>()
                        .map_err(|e| format!("bad cut {c:?}: {e}"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            CompositionSpec::new(size(n)?, cuts)
        }
    };
    built.map_err(|e| e.to_string())
}

fn parse_dist(s: &str) -> Result<IntervalBeta, String> {
    let nums = |part: &str, want: usize| -> Result<Vec<f64>, String> {
        let vals = part
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| format!("bad number {t:?}: {e}"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if vals.len() == want {
            Ok(vals)
        } else {
            Err(format!(
                "expected {want} numbers, got {} in {part:?}",
                vals.len()
            ))
        }
    };
    let (family, rest) = s
        .split_once(':')
        .ok_or_else(|| format!("distribution {s:?} has no parameters"))?;
    let built = match family {
        "beta" => {
            let (shapes, support) = rest
                .split_once(':')
                .ok_or_else(|| "beta takes p,q:a,b".to_string())?;
            let pq = nums(shapes, 2)?;
            let ab = nums(support, 2)?;
            IntervalBeta::new(pq[0], pq[1], ab[0], ab[1])
        }
        "ps" => {
            let ts = nums(rest, 2)?;
            PowerSemicircle::new(ts[0], ts[1]).map(|p| p.to_beta())
        }
        "uniform" => {
            let ab = nums(rest, 2)?;
            IntervalBeta::uniform(ab[0], ab[1])
        }
        "arcsine" => {
            let ab = nums(rest, 2)?;
            IntervalBeta::arcsine(ab[0], ab[1])
        }
        "wigner" => {
            let sg = nums(rest, 1)?;
            IntervalBeta::wigner(sg[0])
        }
        other => {
            return Err(format!(
                "unknown family {other:?} (known: beta, ps, uniform, arcsine, wigner)"
            ))
        }
    };
    built.map_err(|e| e.to_string())
}
