mod plot;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use paclique::complex::{
    barmak_check, build_clique_complex, collapse, find_induced_sphere, octahedral_sphere, SimpleGraph,
    SimplicialComplex, DEFAULT_SEARCH_BUDGET, DEFAULT_SIMPLEX_BUDGET,
};
use paclique::experiments::{
    ccdf, fit_loglog_tail, ks_evolution, ks_two_sample, phase_classify, phase_classify_rational, read_records,
    record_points, run_sweep, snapshot_samples, summarize, write_summary_csv, betti_samples, SweepSpec, TailPolicy,
    TrialRecord,
};
use paclique::graph::{generate, read_graph, write_graph, Formulation, MultiGraph, PaParams};
use paclique::homology::{betti, cross_field_betti, FieldSpec};
use paclique::verify::run_verify;
use paclique::Error;

const OUT_DIR_ENV: &str = "PACLIQUE_OUT_DIR";
const OCTAHEDRAL_S2: &str = include_str!("../fixtures/octahedral_s2.complex");

#[derive(Parser)]
#[command(name = "paclique", version, about = "Preferential attachment clique complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output path. Defaults to a file in $PACLIQUE_OUT_DIR when set, else stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Clone)]
struct Model {
    /// Node count T.
    #[arg(long, short = 'T')]
    nodes: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<f64>,
    #[arg(long, default_value = "polya")]
    formulation: Formulation,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fixture {
    /// Octahedral 2-sphere on six vertices.
    OctahedralS2,
}

#[derive(Args, Clone)]
struct Source {
    /// Graph file (`pa` text format).
    #[arg(long, conflicts_with_all = ["complex", "fixture"])]
    graph: Option<PathBuf>,
    /// Complex dump (`# dim d` sections).
    #[arg(long, conflicts_with = "fixture")]
    complex: Option<PathBuf>,
    #[arg(long, value_enum)]
    fixture: Option<Fixture>,
    #[command(flatten)]
    model: Model,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a preferential attachment graph.
    Gen {
        #[command(flatten)]
        model: Model,
        #[command(flatten)]
        common: Common,
    },
    /// Betti numbers of a clique complex, as JSON.
    Betti {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 2)]
        q_max: usize,
        #[arg(long, default_value_t = 2)]
        field: u32,
        /// Also compute over GF(2), GF(3), GF(5) and report disagreements.
        #[arg(long)]
        cross_field: bool,
        #[arg(long, default_value_t = DEFAULT_SIMPLEX_BUDGET)]
        max_simplices: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Run a Monte Carlo sweep from a TOML config; writes records.jsonl and summary.csv.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        trials: Option<u32>,
        #[arg(long)]
        field: Option<u32>,
        #[arg(long)]
        record_timing: bool,
        #[arg(long, default_value = "above-one")]
        policy: TailPolicy,
        #[command(flatten)]
        common: Common,
    },
    /// Fit the CCDF tail of mean-normalized Betti numbers (or raw samples).
    Fit {
        #[arg(long, conflicts_with = "samples")]
        records: Option<PathBuf>,
        /// Whitespace-separated numbers.
        #[arg(long)]
        samples: Option<PathBuf>,
        /// Parameter point to use when the record file holds several (0-based, file order).
        #[arg(long)]
        point: Option<usize>,
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[arg(long, default_value = "above-one")]
        policy: TailPolicy,
        /// Skip mean normalization.
        #[arg(long)]
        raw: bool,
        #[command(flatten)]
        common: Common,
    },
    /// KS evolution across snapshots, or a two-sample KS distance.
    Ks {
        #[arg(long, conflicts_with_all = ["a", "b"])]
        records: Option<PathBuf>,
        #[arg(long, requires = "b")]
        a: Option<PathBuf>,
        #[arg(long, requires = "a")]
        b: Option<PathBuf>,
        #[arg(long)]
        point: Option<usize>,
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Phase region of (delta, m) in dimension q. Accepts delta as a fraction `p/q`.
    Phase {
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        q: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Barmak star-covering check for q-connectedness.
    Barmak {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Find an induced octahedral q-sphere, or emit one with --emit.
    Sphere {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1)]
        q: u32,
        /// Write the octahedral (EMIT-1)-sphere complex instead of searching.
        #[arg(long)]
        emit: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Run the invariant suites; exits 4 on any failure.
    Verify {
        #[arg(long)]
        quick: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Render CSV columns to an SVG line plot.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long, required = true, num_args = 1..)]
        y: Vec<String>,
        #[arg(long)]
        loglog: bool,
        #[arg(long)]
        logx: bool,
        #[arg(long)]
        logy: bool,
        #[arg(long, default_value = "")]
        title: String,
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Usage(String),
    Budget(String),
    Verification(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Budget(_) => 3,
            Failure::Verification(_) => 4,
            Failure::Other(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Budget(m) | Failure::Verification(m) | Failure::Other(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Budget(_) => Failure::Budget(msg),
            Error::InvalidParams(_) | Error::Domain { .. } | Error::Config(_) => Failure::Usage(msg),
            _ => Failure::Other(msg),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn open_out(common: &Common, default_name: &str) -> CliResult<Box<dyn Write>> {
    let path = match &common.out {
        Some(p) => Some(p.clone()),
        None => std::env::var_os(OUT_DIR_ENV).map(|d| PathBuf::from(d).join(default_name)),
    };
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            Ok(Box::new(BufWriter::new(File::create(&p)?)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

fn write_json<T: serde::Serialize>(common: &Common, default_name: &str, value: &T) -> CliResult<()> {
    let mut w = open_out(common, default_name)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

fn model_params(model: &Model, seed: u64) -> CliResult<PaParams> {
    let missing = |f: &str| Failure::Usage(format!("--{f} is required to generate a graph"));
    let nodes = model.nodes.ok_or_else(|| missing("nodes"))?;
    let m = model.m.ok_or_else(|| missing("m"))?;
    let delta = model.delta.ok_or_else(|| missing("delta"))?;
    Ok(PaParams::new(nodes, m, delta, seed)?)
}

fn read_graph_file(path: &Path) -> CliResult<MultiGraph> {
    Ok(read_graph(BufReader::new(File::open(path)?))?)
}

enum Loaded {
    Graph(SimpleGraph),
    Complex(SimplicialComplex),
}

fn load(source: &Source, seed: u64) -> CliResult<Loaded> {
    if let Some(p) = &source.graph {
        return Ok(Loaded::Graph(collapse(&read_graph_file(p)?)));
    }
    if let Some(p) = &source.complex {
        return Ok(Loaded::Complex(SimplicialComplex::read_dump(BufReader::new(File::open(p)?))?));
    }
    if let Some(Fixture::OctahedralS2) = source.fixture {
        return Ok(Loaded::Complex(SimplicialComplex::read_dump(OCTAHEDRAL_S2.as_bytes())?));
    }
    let params = model_params(&source.model, seed)?;
    Ok(Loaded::Graph(collapse(&generate(params, source.model.formulation)?)))
}

fn field(p: u32) -> CliResult<FieldSpec> {
    Ok(FieldSpec::new(p)?)
}

fn read_numbers(path: &Path) -> CliResult<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    text.split_whitespace()
        .map(|t| t.parse::<f64>().map_err(|_| Failure::Usage(format!("{}: not a number: {t:?}", path.display()))))
        .collect()
}

fn load_records(path: &Path) -> CliResult<Vec<TrialRecord>> {
    Ok(read_records(BufReader::new(File::open(path)?))?)
}

fn select_point(records: &[TrialRecord], index: Option<usize>) -> CliResult<paclique::experiments::SweepPoint> {
    let pts = record_points(records);
    match (pts.as_slice(), index) {
        ([], _) => Err(Failure::Usage("record file is empty".into())),
        ([p], None) => Ok(*p),
        (_, None) => Err(Failure::Usage(format!("record file holds {} parameter points; pick one with --point", pts.len()))),
        (_, Some(i)) => pts
            .get(i)
            .copied()
            .ok_or_else(|| Failure::Usage(format!("--point {i} out of range: {} points", pts.len()))),
    }
}

fn parse_delta(text: &str) -> CliResult<(f64, Option<(i64, i64)>)> {
    let bad = || Failure::Usage(format!("cannot parse delta {text:?}"));
    if let Some((n, d)) = text.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        return Ok((n as f64 / d as f64, Some((n, d))));
    }
    Ok((text.trim().parse().map_err(|_| bad())?, None))
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Gen { model, common } => {
            let params = model_params(&model, common.seed.unwrap_or(0))?;
            let g = generate(params, model.formulation)?;
            let mut w = open_out(&common, "graph.pa")?;
            write_graph(&g, &mut w)?;
            w.flush()?;
        }
        Command::Betti { source, q_max, field: p, cross_field, max_simplices, common } => {
            let c = match load(&source, common.seed.unwrap_or(0))? {
                Loaded::Graph(g) => build_clique_complex(&g, q_max + 1, max_simplices)?,
                Loaded::Complex(c) => c,
            };
            if cross_field {
                let x = cross_field_betti(&c, q_max, &[2, 3, 5])?;
                if !x.consistent {
                    eprintln!("warning: Betti numbers differ across GF(2), GF(3), GF(5)");
                }
                write_json(&common, "betti.json", &x)?;
            } else {
                write_json(&common, "betti.json", &betti(&c, field(p)?, q_max)?)?;
            }
        }
        Command::Sweep { config, trials, field: p, record_timing, policy, common } => {
            let mut spec = SweepSpec::load(&config)?;
            if let Some(s) = common.seed {
                spec.seed = s;
            }
            if let Some(t) = trials {
                spec.trials = t;
            }
            if let Some(p) = p {
                spec.field = p;
            }
            if common.threads.is_some() {
                spec.threads = common.threads;
            }
            spec.record_timing |= record_timing;
            spec.validate()?;
            let dir = common
                .out
                .clone()
                .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("."));
            std::fs::create_dir_all(&dir)?;
            let records_path = dir.join("records.jsonl");
            let sink = BufWriter::new(File::create(&records_path)?);
            let records = run_sweep(&spec, sink)?;
            let summary_path = dir.join("summary.csv");
            write_summary_csv(&summarize(&records, &spec.dims, policy), File::create(&summary_path)?)?;
            let failed = records.iter().filter(|r| r.status != paclique::experiments::TrialStatus::Ok).count();
            eprintln!(
                "{} records -> {}, summary -> {}{}",
                records.len(),
                records_path.display(),
                summary_path.display(),
                if failed > 0 { format!(" ({failed} failed trials)") } else { String::new() }
            );
        }
        Command::Fit { records, samples, point, q, policy, raw, common } => {
            let xs = match (records, samples) {
                (Some(r), _) => {
                    let recs = load_records(&r)?;
                    betti_samples(&recs, &select_point(&recs, point)?, q)
                }
                (None, Some(s)) => read_numbers(&s)?,
                (None, None) => return Err(Failure::Usage("give --records or --samples".into())),
            };
            let pts = ccdf(&xs, !raw)?;
            write_json(&common, "fit.json", &fit_loglog_tail(&pts, policy)?)?;
        }
        Command::Ks { records, a, b, point, q, common } => {
            if let (Some(a), Some(b)) = (a, b) {
                let d = ks_two_sample(&read_numbers(&a)?, &read_numbers(&b)?)?;
                write_json(&common, "ks.json", &serde_json::json!({ "ks": d }))?;
            } else if let Some(r) = records {
                let recs = load_records(&r)?;
                let snaps = snapshot_samples(&recs, &select_point(&recs, point)?, q);
                write_json(&common, "ks.json", &ks_evolution(&snaps)?)?;
            } else {
                return Err(Failure::Usage("give --records, or --a and --b".into()));
            }
        }
        Command::Phase { delta, m, q, common } => {
            let r = match parse_delta(&delta)? {
                (_, Some((n, d))) => phase_classify_rational(n, d, m, q)?,
                (x, None) => phase_classify(x, m, q)?,
            };
            println!("{}  x={}  bounds ({}, {}]", r.label(), r.x, r.lower, r.upper);
            if common.out.is_some() || std::env::var_os(OUT_DIR_ENV).is_some() {
                let v = serde_json::json!({ "label": r.label(), "result": r });
                write_json(&common, "phase.json", &v)?;
            }
        }
        Command::Barmak { source, q, budget, common } => {
            let c = match load(&source, common.seed.unwrap_or(0))? {
                Loaded::Graph(g) => build_clique_complex(&g, 1, DEFAULT_SIMPLEX_BUDGET)?,
                Loaded::Complex(c) => c,
            };
            write_json(&common, "barmak.json", &barmak_check(&c, q, budget, common.seed.unwrap_or(0)))?;
        }
        Command::Sphere { source, q, emit, budget, common } => {
            if let Some(k) = emit {
                let mut w = open_out(&common, "sphere.complex")?;
                octahedral_sphere(k)?.write_dump(&mut w)?;
                w.flush()?;
                return Ok(());
            }
            let g = match load(&source, common.seed.unwrap_or(0))? {
                Loaded::Graph(g) => g,
                Loaded::Complex(c) => c.one_skeleton(),
            };
            let found = find_induced_sphere(&g, q, budget)?;
            write_json(&common, "sphere.json", &serde_json::json!({ "q": q, "vertices": found }))?;
        }
        Command::Verify { quick, common } => {
            let reports = run_verify(common.seed.unwrap_or(42), quick);
            let mut failed = Vec::new();
            for r in &reports {
                let tag = if r.passed() { "PASS" } else { "FAIL" };
                println!("{tag} {} ({} checks)", r.name, r.checks);
                for f in &r.failures {
                    println!("    {f}");
                }
                if !r.passed() {
                    failed.push(r.name.clone());
                }
            }
            if common.out.is_some() {
                write_json(&common, "verify.json", &reports)?;
            }
            if !failed.is_empty() {
                return Err(Failure::Verification(format!("failed suites: {}", failed.join(", "))));
            }
        }
        Command::Plot { input, x, y, loglog, logx, logy, title, common } => {
            let mut rdr = csv::Reader::from_path(&input).map_err(|e| Failure::Other(e.to_string()))?;
            let headers = rdr.headers().map_err(|e| Failure::Other(e.to_string()))?.clone();
            let col = |name: &str| {
                headers
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| Failure::Usage(format!("no column {name:?} in {}", input.display())))
            };
            let xi = col(&x)?;
            let yis: Vec<usize> = y.iter().map(|n| col(n)).collect::<CliResult<_>>()?;
            let mut series: Vec<plot::Series> =
                y.iter().map(|n| plot::Series { name: n.clone(), points: Vec::new() }).collect();
            for row in rdr.records() {
                let row = row.map_err(|e| Failure::Other(e.to_string()))?;
                let Ok(xv) = row[xi].parse::<f64>() else { continue };
                for (s, &yi) in series.iter_mut().zip(&yis) {
                    if let Ok(yv) = row[yi].parse::<f64>() {
                        s.points.push((xv, yv));
                    }
                }
            }
            let svg = plot::render_svg(&series, &title, &x, &y.join(", "), loglog || logx, loglog || logy)?;
            let mut w = open_out(&common, "plot.svg")?;
            w.write_all(svg.as_bytes())?;
            w.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = match &cli.command {
        Command::Gen { common, .. }
        | Command::Betti { common, .. }
        | Command::Sweep { common, .. }
        | Command::Fit { common, .. }
        | Command::Ks { common, .. }
        | Command::Phase { common, .. }
        | Command::Barmak { common, .. }
        | Command::Sphere { common, .. }
        | Command::Verify { common, .. }
        | Command::Plot { common, .. } => common.threads,
    };
    if let Some(n) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
