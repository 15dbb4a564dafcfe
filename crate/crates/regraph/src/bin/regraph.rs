//! Command-line front end. Vertex ids on the command line and in files are
//! 1-based.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;

use regraph::cache::{cached_edge_prob, OracleCache};
use regraph::core::estimates::{
    cond_edge_prob_baseline, cond_edge_prob_refined_general, cond_edge_prob_refined_regular, mu_pattern,
    ConditioningPair,
};
use regraph::core::oracle::factorial_moments;
use regraph::core::sampler::{ConditionalSampler, Method, RegularSampler, SamplerConfig};
use regraph::core::{DegreeSequence, Error as CoreError, SimpleGraph};
use regraph::error::exit;
use regraph::harness::{run_experiment, ExperimentConfig, ExperimentKind, GridPoint};
use regraph::io::{format_edge_list, read_graph, read_pattern};
use regraph::parallel;
use regraph::report::Format;
use regraph::{HarnessError, HarnessResult};

#[derive(Parser)]
#[command(name = "regraph", version, about = "Conditional subgraph probabilities in random regular graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form estimates: a conditional edge probability, or the
    /// expected number of copies of a pattern.
    Estimate(EstimateArgs),
    /// Exact values by enumeration (tiny n only).
    Exact(ExactArgs),
    /// Draw random regular graphs and print them as edge lists.
    Sample(SampleArgs),
    /// Run or list experiment campaigns.
    Experiment {
        #[command(subcommand)]
        action: ExperimentAction,
    },
}

#[derive(Args)]
struct Model {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
}

#[derive(Args)]
struct Context {
    /// Edge list of required edges
    #[arg(long)]
    h1: Option<PathBuf>,
    /// Edge list of forbidden edges
    #[arg(long)]
    h2: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    model: Model,
    #[command(flatten)]
    ctx: Context,
    #[arg(long)]
    u: Option<usize>,
    #[arg(long)]
    v: Option<usize>,
    /// Pattern edge list; prints its expected copy count
    #[arg(long)]
    pattern: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
}

#[derive(Args)]
struct ExactArgs {
    #[command(flatten)]
    model: Model,
    #[command(flatten)]
    ctx: Context,
    #[arg(long)]
    u: Option<usize>,
    #[arg(long)]
    v: Option<usize>,
    /// Pattern edge list; prints the exact distribution of its copy count
    #[arg(long)]
    pattern: Option<PathBuf>,
    /// Highest factorial moment printed with --pattern
    #[arg(long, default_value_t = 3)]
    k_max: u32,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    model: Model,
    #[command(flatten)]
    ctx: Context,
    #[arg(long, default_value_t = 1)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    stream: u64,
    #[arg(long, value_parser = parse_method, default_value = "edge-swap-mcmc")]
    method: Method,
    /// Swaps before the first sample (chain methods)
    #[arg(long)]
    burn_in: Option<u64>,
    /// Swaps between samples (chain methods)
    #[arg(long)]
    thinning: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ExperimentAction {
    /// Run one experiment and write its report.
    Run(RunArgs),
    /// List the available experiments.
    List,
}

#[derive(Args)]
struct RunArgs {
    #[arg(value_parser = parse_kind)]
    kind: ExperimentKind,
    #[arg(long)]
    seed: u64,
    /// TOML file overlaid on the experiment's defaults; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Replace the grid with the single point (n, d)
    #[arg(long, requires = "d")]
    n: Option<usize>,
    #[arg(long, requires = "n")]
    d: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    burn_in: Option<u64>,
    #[arg(long)]
    thinning: Option<u64>,
    #[arg(long)]
    chains: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<OutFormat>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
        }
    }
}

fn parse_method(s: &str) -> Result<Method, String> {
    Method::parse(s).map_err(|e| e.to_string())
}

fn parse_kind(s: &str) -> Result<ExperimentKind, String> {
    ExperimentKind::parse(s).map_err(|e| e.to_string())
}

fn load_context(ctx: &Context, n: usize) -> HarnessResult<ConditioningPair> {
    let load = |p: &Option<PathBuf>| -> HarnessResult<SimpleGraph> {
        let Some(path) = p else { return Ok(SimpleGraph::empty(n)) };
        let g = read_graph(path)?;
        if g.n() != n {
            return Err(HarnessError::Config(format!("{}: graph on {} vertices, --n is {n}", path.display(), g.n())));
        }
        Ok(g)
    };
    Ok(ConditioningPair::new(load(&ctx.h1)?, load(&ctx.h2)?)?)
}

fn pair(u: Option<usize>, v: Option<usize>, n: usize) -> HarnessResult<Option<(usize, usize)>> {
    match (u, v) {
        (None, None) => Ok(None),
        (Some(u), Some(v)) if (1..=n).contains(&u) && (1..=n).contains(&v) && u != v => Ok(Some((u - 1, v - 1))),
        (Some(_), Some(_)) => Err(CoreError::OutOfRange(format!("--u and --v must be distinct ids in 1..={n}")).into()),
        _ => Err(HarnessError::Config("--u and --v go together".into())),
    }
}

/// A small `quantity,value` table.
fn emit(format: OutFormat, rows: &[(&str, String)]) -> HarnessResult<()> {
    let text = match format {
        OutFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["quantity", "value"]).map_err(|e| HarnessError::Encoding(e.to_string()))?;
            for (k, v) in rows {
                w.write_record([k, v.as_str()]).map_err(|e| HarnessError::Encoding(e.to_string()))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| HarnessError::Encoding(e.to_string()))?)
                .map_err(|e| HarnessError::Encoding(e.to_string()))?
        }
        OutFormat::Json => {
            let map: serde_json::Map<String, serde_json::Value> =
                rows.iter().map(|(k, v)| (k.to_string(), serde_json::Value::from(v.clone()))).collect();
            serde_json::to_string_pretty(&map).map_err(|e| HarnessError::Encoding(e.to_string()))? + "\n"
        }
    };
    print!("{text}");
    Ok(())
}

fn estimate(a: EstimateArgs) -> HarnessResult<i32> {
    let (n, d) = (a.model.n, a.model.d);
    let ctx = load_context(&a.ctx, n)?;
    let mut rows = Vec::new();
    if let Some(path) = &a.pattern {
        let p = read_pattern(path)?;
        let mu = mu_pattern(&p, d, n)?;
        rows.push(("expected_copies", mu.value.to_string()));
        if let Some(x) = &mu.exact {
            rows.push(("expected_copies_exact", x.to_string()));
        }
        rows.push(("source", mu.source.to_string()));
        rows.push(("error_order", mu.error_order.to_string()));
    }
    if let Some((u, v)) = pair(a.u, a.v, n)? {
        let dseq = DegreeSequence::regular(n, d);
        rows.push(("baseline", cond_edge_prob_baseline(&ctx, &dseq, u, v)?.value.to_string()));
        if ctx.forbidden().is_empty() {
            let r = cond_edge_prob_refined_regular(ctx.required(), u, v, d, n)?;
            rows.push(("refined", r.value.to_string()));
            rows.push(("refined_error_order", r.error_order.to_string()));
        }
        let g = cond_edge_prob_refined_general(&ctx, &dseq, u, v)?;
        rows.push(("general", g.value.to_string()));
        rows.push(("general_error_order", g.error_order.to_string()));
    }
    if rows.is_empty() {
        return Err(HarnessError::Config("give --u and --v, or --pattern".into()));
    }
    emit(a.format, &rows)?;
    Ok(exit::SUCCESS)
}

fn exact(a: ExactArgs) -> HarnessResult<i32> {
    let (n, d) = (a.model.n, a.model.d);
    let ctx = load_context(&a.ctx, n)?;
    let mut rows = Vec::new();
    rows.push(("class_size", parallel::class_size(&DegreeSequence::regular(n, d), &ctx)?.to_string()));
    if let Some((u, v)) = pair(a.u, a.v, n)? {
        let cache = a.cache_dir.map(OracleCache::new).transpose()?;
        let p = cached_edge_prob(cache.as_ref(), n, d, &ctx, u, v)?;
        rows.push(("probability", p.to_string()));
        rows.push(("probability_value", p.to_f64().unwrap_or(f64::NAN).to_string()));
    }
    if let Some(path) = &a.pattern {
        if !ctx.union().is_empty() {
            return Err(HarnessError::Config("--pattern distributions are unconditional; drop --h1/--h2".into()));
        }
        let dist = parallel::exact_count_distribution(n, d, &read_pattern(path)?)?;
        let pmf: Vec<String> = dist.pmf().iter().map(|(z, p)| format!("{z}:{p}")).collect();
        rows.push(("pmf", pmf.join(" ")));
        rows.push(("mean", dist.mean().to_string()));
        rows.push(("variance", dist.variance().to_string()));
        let moments: Vec<String> = factorial_moments(&dist, a.k_max).iter().map(|m| m.to_string()).collect();
        rows.push(("factorial_moments", moments.join(" ")));
    }
    emit(a.format, &rows)?;
    Ok(exit::SUCCESS)
}

fn sample(a: SampleArgs) -> HarnessResult<i32> {
    let (n, d) = (a.model.n, a.model.d);
    let ctx = load_context(&a.ctx, n)?;
    let mut cfg = SamplerConfig::regular(n, d, a.method, a.seed).with_stream(a.stream);
    if let Some(b) = a.burn_in {
        cfg = cfg.with_burn_in(b);
    }
    if let Some(t) = a.thinning {
        cfg = cfg.with_thinning(t);
    }
    let mut out = String::new();
    let mut push = |g: &SimpleGraph, i: usize| {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format_edge_list(g));
    };
    if ctx.union().is_empty() {
        let mut s = RegularSampler::new(cfg)?;
        for i in 0..a.samples {
            push(&s.next_graph()?, i);
        }
    } else {
        let mut s = ConditionalSampler::new(ctx, cfg)?;
        for i in 0..a.samples {
            push(&s.next_graph()?, i);
        }
    }
    write_out(a.out.as_deref(), &out)?;
    Ok(exit::SUCCESS)
}

fn write_out(path: Option<&Path>, text: &str) -> HarnessResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| HarnessError::io(p, e)),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| HarnessError::io("<stdout>", e)),
    }
}

fn run(a: RunArgs) -> HarnessResult<i32> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
            ExperimentConfig::from_toml_str(&text, Some(a.kind))?
        }
        None => ExperimentConfig::defaults(a.kind),
    };
    cfg.seed = a.seed;
    if let (Some(n), Some(d)) = (a.n, a.d) {
        cfg.grid = vec![GridPoint::new(n, d)];
    }
    if let Some(s) = a.samples {
        cfg.samples = s;
    }
    if let Some(c) = a.chains {
        cfg.chains = c;
    }
    cfg.burn_in = a.burn_in.or(cfg.burn_in);
    cfg.thinning = a.thinning.or(cfg.thinning);
    if let Some(f) = a.format {
        cfg.format = f.into();
    }
    cfg.out = a.out.or(cfg.out);
    cfg.cache_dir = a.cache_dir.or(cfg.cache_dir);

    let report = run_experiment(&cfg)?;
    write_out(cfg.out.as_deref(), &cfg.format.render(&report)?)?;
    if let Some(t) = report.runtime {
        eprintln!("{}: finished in {:.1} s", cfg.kind, t.as_secs_f64());
    }
    for g in &report.gates {
        eprintln!("gate {}: {} ({})", g.name, if g.passed { "pass" } else { "FAIL" }, g.detail);
    }
    Ok(if report.passed() { exit::SUCCESS } else { exit::GATE_FAILURE })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::BAD_INPUT as u8 } else { exit::SUCCESS as u8 });
        }
    };
    let result = match cli.command {
        Command::Estimate(a) => estimate(a),
        Command::Exact(a) => exact(a),
        Command::Sample(a) => sample(a),
        Command::Experiment { action: ExperimentAction::List } => {
            for k in ExperimentKind::ALL {
                println!("{:<22}{}", k.name(), k.summary());
            }
            Ok(exit::SUCCESS)
        }
        Command::Experiment { action: ExperimentAction::Run(a) } => run(a),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
