//! `sketchbox`: generate graphs, cover them with boxes, sweep box counts over
//! radii, fit the curves and benchmark the solver.
//!
//! Exit codes: 0 success, 1 usage error, 2 input or output error, 3 solver or
//! fit failure.

use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use sketchbox::bench::{bench_one, format_bench_tsv};
use sketchbox::report::{format_fit_report, read_curve_tsv, write_curve_tsv};
use sketchbox::{default_l_max, load_edge_list, parallel_sweep, save_edge_list, timed_solve, Algorithm, PeakAlloc};
use sketchbox_core::fractality::{fit, fit_points};
use sketchbox_core::seed::RNG_NAME;
use sketchbox_core::{BoxCoverParams, CoverError, Graph, ModelSpec};

#[global_allocator]
static HEAP: PeakAlloc = PeakAlloc::new();

#[derive(Parser)]
#[command(name = "sketchbox", version, about = "Sketch-based box covering and fractality analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic graph as a canonical edge list.
    Generate {
        #[command(subcommand)]
        model: ModelArg,
        /// Output file (stdout if omitted).
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Cover a graph with boxes of one radius.
    Cover(CoverArgs),
    /// Measure b(l) over radii and fit it.
    Sweep(SweepArgs),
    /// Fit a curve TSV written by `sweep`.
    Fit(FitArgs),
    /// Time the solver on a list of instances.
    Bench(BenchArgs),
}

#[derive(Subcommand)]
enum ModelArg {
    /// (u,v)-flower of generation g.
    Flower { u: u32, v: u32, g: u32 },
    /// Song-Havlin-Makse model: c leaves per unit of degree, e = 1 keeps old edges, generation g.
    Shm { c: u32, e: u32, g: u32 },
    /// Barabasi-Albert graph: c edges per newcomer, 125·2^t vertices.
    Ba {
        c: u32,
        t: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

impl ModelArg {
    fn spec(&self) -> ModelSpec {
        match *self {
            ModelArg::Flower { u, v, g } => ModelSpec::Flower { u, v, g },
            ModelArg::Shm { c, e, g } => ModelSpec::Shm { c, e, g },
            ModelArg::Ba { c, t, seed } => ModelSpec::Ba { c, t, seed },
        }
    }
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Edge-list file.
    input: Option<PathBuf>,
    /// Generate the input instead, e.g. `flower:2,2,7`, `shm:2,0,6`, `ba:2,7,0`.
    #[arg(long)]
    model: Option<ModelSpec>,
}

#[derive(Args)]
struct SolverArgs {
    /// Sketch capacity.
    #[arg(long, default_value_t = 128)]
    k: u32,
    /// Exact sets are kept while their total size is at most alpha*n*k.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Fraction of vertices allowed to stay uncovered.
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
    /// Master seed; every random stream is derived from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sketch passes before falling back.
    #[arg(long, default_value_t = 10)]
    max_passes: u32,
    /// Fail instead of covering leftovers by singleton boxes.
    #[arg(long)]
    no_fallback: bool,
    #[arg(long, default_value = "sketch", value_parser = ["sketch", "exact-greedy", "brute"])]
    algorithm: String,
}

impl SolverArgs {
    fn params(&self, l: u32) -> BoxCoverParams {
        BoxCoverParams {
            l,
            k: self.k,
            alpha: self.alpha,
            eps: self.eps,
            seed: self.seed,
            max_passes: self.max_passes,
            fallback: !self.no_fallback,
        }
    }

    fn algorithm(&self) -> Algorithm {
        self.algorithm.parse().expect("validated by clap")
    }
}

#[derive(Args)]
struct CoverArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Box radius.
    #[arg(short, long, default_value_t = 1)]
    l: u32,
    #[command(flatten)]
    solver: SolverArgs,
    /// Write the selected centers, one per line.
    #[arg(long)]
    centers: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Largest radius (default: until one box suffices for each component).
    #[arg(long)]
    lmax: Option<u32>,
    /// Runs per radius.
    #[arg(long, default_value_t = 10)]
    runs: u32,
    /// Worker threads; the curve does not depend on it.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Fit the raw run means instead of their running minimum.
    #[arg(long)]
    no_smoothing: bool,
    /// Smallest radii left out of the fit (default 0 for models, 3 for files).
    #[arg(long)]
    exclude_prefix: Option<usize>,
    /// Curve TSV output (stdout if omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Write the fit report here as well.
    #[arg(long)]
    fit_report: Option<PathBuf>,
    /// Only measure the curve.
    #[arg(long)]
    no_fit: bool,
}

#[derive(Args)]
struct FitArgs {
    /// Curve TSV.
    curve: PathBuf,
    /// Smallest radii left out of the fit.
    #[arg(long, default_value_t = 0)]
    exclude_prefix: usize,
}

#[derive(Args)]
struct BenchArgs {
    /// Model specs such as `ba:2,6,0`, or edge-list files.
    #[arg(required = true)]
    instances: Vec<String>,
    /// Box radius.
    #[arg(short, long, default_value_t = 1)]
    l: u32,
    #[command(flatten)]
    solver: SolverArgs,
    /// Table output (stdout if omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Input(String),
    Solver(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<CoverError> for Failure {
    fn from(e: CoverError) -> Self {
        match e {
            CoverError::InvalidParams(_) => Failure::Usage(e.to_string()),
            CoverError::BruteForceTooLarge { .. } => Failure::Input(e.to_string()),
            _ => Failure::Solver(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Generate { model, output } => generate(&model.spec(), output.as_deref()),
        Command::Cover(a) => cover(&a),
        Command::Sweep(a) => sweep(&a),
        Command::Fit(a) => fit_curve(&a),
        Command::Bench(a) => bench(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn header(command: &str, pairs: &[(&str, String)]) {
    println!("# sketchbox {} {command}", env!("CARGO_PKG_VERSION"));
    for (k, v) in pairs {
        println!("# {k}: {v}");
    }
}

fn solver_header(p: &BoxCoverParams, algorithm: Algorithm) -> Vec<(&'static str, String)> {
    vec![
        ("algorithm", algorithm.to_string()),
        ("k", p.k.to_string()),
        ("alpha", p.alpha.to_string()),
        ("eps", p.eps.to_string()),
        ("seed", p.seed.to_string()),
        ("max_passes", p.max_passes.to_string()),
        ("fallback", p.fallback.to_string()),
        ("rng", RNG_NAME.to_string()),
    ]
}

fn load(input: &InputArgs) -> Result<(String, Graph), Failure> {
    if let Some(spec) = &input.model {
        let g = build_model(spec)?;
        return Ok((spec.to_string(), g));
    }
    let path = input.input.as_ref().expect("clap requires one input");
    let g = load_edge_list(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok((path.display().to_string(), g))
}

/// Bad model parameters are a usage error like any other out-of-range flag.
fn build_model(spec: &ModelSpec) -> Result<Graph, Failure> {
    spec.generate().map_err(|e| Failure::Usage(format!("{spec}: {e}")))
}

fn create(path: &Path) -> Result<File, Failure> {
    File::create(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn generate(spec: &ModelSpec, output: Option<&Path>) -> Result<(), Failure> {
    let g = build_model(spec)?;
    match output {
        Some(path) => {
            header("generate", &[("model", spec.to_string()), ("output", path.display().to_string())]);
            save_edge_list(&g, path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            println!("n\t{}\nm\t{}", g.num_vertices(), g.num_edges());
        }
        None => {
            eprintln!("# model: {spec}\nn\t{}\nm\t{}", g.num_vertices(), g.num_edges());
            sketchbox::edgelist::write_edge_list(&g, io::stdout().lock())?;
        }
    }
    Ok(())
}

fn cover(a: &CoverArgs) -> Result<(), Failure> {
    let (name, g) = load(&a.input)?;
    let p = a.solver.params(a.l);
    let algorithm = a.solver.algorithm();
    let mut pairs = vec![("input", name), ("n", g.num_vertices().to_string()), ("m", g.num_edges().to_string())];
    pairs.push(("l", a.l.to_string()));
    pairs.extend(solver_header(&p, algorithm));
    header("cover", &pairs);

    let (result, seconds, failure) = match timed_solve(&g, algorithm, &p) {
        Ok(t) => (t.result, t.elapsed.as_secs_f64(), None),
        Err(CoverError::PassesExhausted { partial }) => {
            let msg = format!("coverage target {} not met after {} passes", partial.target, partial.passes.len());
            (*partial, f64::NAN, Some(msg))
        }
        Err(e) => return Err(e.into()),
    };
    for (i, pass) in result.passes.iter().enumerate() {
        let covered = pass.coverage.last().copied().unwrap_or(0);
        let mode = if pass.exact { "exact" } else { "sketch" };
        println!("# pass {i}: rank_seed {} mode {mode} covered {covered}", pass.rank_seed);
    }
    println!("boxes\t{}", result.boxes());
    println!("covered\t{}", result.covered);
    println!("target\t{}", result.target);
    println!("passes\t{}", result.passes.len());
    println!("fallback_centers\t{}", result.fallback_centers);
    println!("seconds\t{seconds:.6}");
    if let Some(path) = &a.centers {
        let mut w = io::BufWriter::new(create(path)?);
        for c in &result.centers {
            writeln!(w, "{c}")?;
        }
        w.flush()?;
    }
    match failure {
        Some(msg) => Err(Failure::Solver(msg)),
        None => Ok(()),
    }
}

fn sweep(a: &SweepArgs) -> Result<(), Failure> {
    let (name, g) = load(&a.input)?;
    let template = a.solver.params(1);
    template.validate()?;
    if a.runs == 0 {
        return Err(Failure::Usage("--runs must be at least 1".into()));
    }
    let algorithm = a.solver.algorithm();
    let l_max = a.lmax.unwrap_or_else(|| default_l_max(&g)).max(1);
    let exclude = a.exclude_prefix.unwrap_or(if a.input.model.is_some() { 0 } else { 3 });
    let mut pairs = vec![("input", name), ("n", g.num_vertices().to_string()), ("m", g.num_edges().to_string())];
    pairs.extend(solver_header(&template, algorithm));
    pairs.extend([
        ("lmax", l_max.to_string()),
        ("runs", a.runs.to_string()),
        ("run_seed", "derive(seed, [l, run])".to_string()),
        ("threads", a.threads.to_string()),
        ("exclude_prefix", exclude.to_string()),
    ]);
    header("sweep", &pairs);

    let start = Instant::now();
    let mut curve = parallel_sweep(&g, algorithm, &template, l_max, a.runs, a.threads)?;
    curve.smoothing = !a.no_smoothing;
    let seconds = start.elapsed().as_secs_f64();
    let meta: Vec<(String, String)> = pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .chain([("seconds".into(), format!("{seconds:.3}"))])
        .collect();
    match &a.output {
        Some(path) => write_curve_tsv(&curve, &meta, create(path)?)?,
        None => write_curve_tsv(&curve, &[], io::stdout().lock())?,
    }
    if a.no_fit {
        return Ok(());
    }
    let report = fit(&curve, exclude).map_err(|e| Failure::Solver(format!("fit: {e}")))?;
    let text = format_fit_report(&report);
    if let Some(path) = &a.fit_report {
        create(path)?.write_all(text.as_bytes())?;
    }
    print!("{text}");
    Ok(())
}

fn fit_curve(a: &FitArgs) -> Result<(), Failure> {
    header("fit", &[("curve", a.curve.display().to_string()), ("exclude_prefix", a.exclude_prefix.to_string())]);
    let file = File::open(&a.curve).map_err(|e| Failure::Input(format!("{}: {e}", a.curve.display())))?;
    let rows =
        read_curve_tsv(BufReader::new(file)).map_err(|e| Failure::Input(format!("{}: {e}", a.curve.display())))?;
    let pts: Vec<(f64, f64)> =
        rows.iter().filter(|r| r.l > 0).skip(a.exclude_prefix).map(|r| (f64::from(r.l), r.b_mean)).collect();
    let mut report = fit_points(&pts).map_err(|e| Failure::Solver(format!("fit: {e}")))?;
    report.excluded_prefix = a.exclude_prefix;
    print!("{}", format_fit_report(&report));
    Ok(())
}

fn bench(a: &BenchArgs) -> Result<(), Failure> {
    let p = a.solver.params(a.l);
    p.validate()?;
    let algorithm = a.solver.algorithm();
    let mut pairs = vec![("l", a.l.to_string())];
    pairs.extend(solver_header(&p, algorithm));
    pairs.push(("instances", a.instances.join(" ")));
    header("bench", &pairs);

    let mut rows = Vec::new();
    for inst in &a.instances {
        let g = match inst.parse::<ModelSpec>() {
            Ok(spec) => build_model(&spec)?,
            Err(_) => load_edge_list(inst).map_err(|e| Failure::Input(format!("{inst}: {e}")))?,
        };
        rows.push(bench_one(inst, &g, algorithm, &p, Some(&HEAP))?);
        drop(g);
    }
    let table = format_bench_tsv(&rows);
    match &a.output {
        Some(path) => create(path)?.write_all(table.as_bytes())?,
        None => print!("{table}"),
    }
    Ok(())
}
