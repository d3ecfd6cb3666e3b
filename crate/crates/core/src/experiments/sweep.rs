use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::Path;
use std::sync::mpsc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{ccdf, fit_loglog_tail, mean_se, TailPolicy};
use crate::complex::{clique_complex_with_cap, collapse, DEFAULT_SIMPLEX_BUDGET};
use crate::error::{Error, Result};
use crate::graph::{compute_x, generate, Formulation, PaParams};
use crate::homology::{betti_at_times, decomposition_check, BettiVector, DecompositionCheck, FieldSpec, MorseBounds};
use crate::rng;

/// One `(T, m, delta)` parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub nodes: u32,
    pub m: u32,
    pub delta: f64,
}

fn default_trials() -> u32 {
    1
}
fn default_dims() -> Vec<usize> {
    vec![1]
}
fn default_field() -> u32 {
    2
}
fn default_budget() -> u64 {
    DEFAULT_SIMPLEX_BUDGET
}
fn default_true() -> bool {
    true
}

/// A Monte Carlo sweep, as read from a TOML file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub points: Vec<SweepPoint>,
    #[serde(default = "default_trials")]
    pub trials: u32,
    /// Betti dimensions to compute.
    #[serde(default = "default_dims")]
    pub dims: Vec<usize>,
    /// Field characteristic.
    #[serde(default = "default_field")]
    pub field: u32,
    #[serde(default)]
    pub seed: u64,
    /// Times `t` at which Betti numbers of `X^(t)` are also recorded.
    #[serde(default)]
    pub snapshots: Vec<u32>,
    #[serde(default)]
    pub formulation: Formulation,
    /// Per-trial cap on enumerated simplices.
    #[serde(default = "default_budget")]
    pub max_simplices: u64,
    /// Check the Morse bounds and the link decomposition bound in every trial.
    #[serde(default = "default_true")]
    pub bounds: bool,
    /// Persist wall-clock time per trial. Off by default so that reruns are
    /// byte-identical.
    #[serde(default)]
    pub record_timing: bool,
    #[serde(default)]
    pub threads: Option<usize>,
}

impl SweepSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: SweepSpec = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::Config("sweep has no parameter points".into()));
        }
        if self.trials < 1 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.dims.is_empty() {
            return Err(Error::Config("no Betti dimensions requested".into()));
        }
        FieldSpec::new(self.field)?;
        if self.snapshots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("snapshot times must be strictly ascending".into()));
        }
        for p in &self.points {
            PaParams::new(p.nodes, p.m, p.delta, 0)?;
            if let Some(&t) = self.snapshots.last() {
                if t > p.nodes {
                    return Err(Error::Config(format!("snapshot {t} exceeds T = {}", p.nodes)));
                }
            }
        }
        Ok(())
    }

    pub fn q_max(&self) -> usize {
        self.dims.iter().copied().max().unwrap_or(0)
    }

    pub fn trial_seed(&self, point: &SweepPoint, trial: u32) -> u64 {
        rng::derive_seed(
            self.seed,
            "trial",
            &[point.nodes as u64, point.m as u64, point.delta.to_bits(), trial as u64],
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrialStatus {
    Ok,
    /// The simplex budget ran out; the trial carries no statistics.
    Budget,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: u32,
    pub betti: Vec<u64>,
}

/// Outcome of one Monte Carlo realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub nodes: u32,
    pub m: u32,
    pub delta: f64,
    pub trial: u32,
    pub seed: u64,
    pub formulation: Formulation,
    pub status: TrialStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub f_vector: Vec<u64>,
    pub betti: Option<BettiVector>,
    pub biangles: u64,
    pub snapshots: Vec<Snapshot>,
    pub morse: Option<MorseBounds>,
    pub decomposition: Vec<DecompositionCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl TrialRecord {
    pub fn point(&self) -> SweepPoint {
        SweepPoint { nodes: self.nodes, m: self.m, delta: self.delta }
    }

    pub fn beta(&self, q: usize) -> Option<u64> {
        self.betti.as_ref().and_then(|b| b.get(q))
    }

    /// Whether every deterministic inequality checked in this trial held.
    pub fn bounds_hold(&self) -> bool {
        self.morse.as_ref().is_none_or(|m| m.holds) && self.decomposition.iter().all(|d| d.holds)
    }
}

fn failed(base: TrialRecord, e: Error) -> TrialRecord {
    let status = if e.is_budget() { TrialStatus::Budget } else { TrialStatus::Error };
    TrialRecord { status, error: Some(e.to_string()), ..base }
}

/// Run a single trial of `spec` at `point`.
pub fn run_trial(spec: &SweepSpec, point: &SweepPoint, trial: u32) -> TrialRecord {
    let start = Instant::now();
    let seed = spec.trial_seed(point, trial);
    let base = TrialRecord {
        nodes: point.nodes,
        m: point.m,
        delta: point.delta,
        trial,
        seed,
        formulation: spec.formulation,
        status: TrialStatus::Ok,
        error: None,
        f_vector: Vec::new(),
        betti: None,
        biangles: 0,
        snapshots: Vec::new(),
        morse: None,
        decomposition: Vec::new(),
        wall_ms: None,
    };
    let mut rec = match trial_body(spec, point, seed, base.clone()) {
        Ok(r) => r,
        Err(e) => failed(base, e),
    };
    if spec.record_timing {
        rec.wall_ms = Some(start.elapsed().as_millis() as u64);
    }
    rec
}

fn trial_body(spec: &SweepSpec, point: &SweepPoint, seed: u64, mut rec: TrialRecord) -> Result<TrialRecord> {
    let field = FieldSpec::new(spec.field)?;
    let params = PaParams::new(point.nodes, point.m, point.delta, seed)?;
    let g = generate(params, spec.formulation)?;
    let simple = collapse(&g);
    rec.biangles = simple.biangles();
    let q_max = spec.q_max();
    let cap = (q_max + 1).max(if spec.bounds { 2 } else { 1 });
    let c = clique_complex_with_cap(&simple, cap, spec.max_simplices)?;
    let mut times = spec.snapshots.clone();
    if times.last() != Some(&point.nodes) {
        times.push(point.nodes);
    }
    let mut all = betti_at_times(&c, field, q_max.max(1), &times)?;
    let full = all.pop().expect("final time present");
    rec.snapshots = times
        .iter()
        .zip(all)
        .map(|(&t, b)| Snapshot { t, betti: b.betti[..=q_max].to_vec() })
        .collect();
    if spec.snapshots.last() == Some(&point.nodes) {
        rec.snapshots.push(Snapshot { t: point.nodes, betti: full.betti[..=q_max].to_vec() });
    }
    if spec.bounds {
        rec.morse = Some(MorseBounds::evaluate(&g, &simple, &c, full.betti[1]));
        for &q in spec.dims.iter().filter(|&&q| q >= 2) {
            rec.decomposition.push(decomposition_check(&simple, full.betti[q], q, field)?);
        }
    }
    rec.f_vector = full.f_vector.clone();
    let mut b = full;
    b.betti.truncate(q_max + 1);
    b.exact_flags.truncate(q_max + 1);
    rec.betti = Some(b);
    Ok(rec)
}

/// Run every `(point, trial)` of the sweep in parallel and stream the records,
/// in canonical order, to `sink` as JSON lines. Trial seeds depend only on the
/// master seed, the point and the trial index, so the output is identical for
/// any worker count.
pub fn run_sweep<W: Write>(spec: &SweepSpec, mut sink: W) -> Result<Vec<TrialRecord>> {
    spec.validate()?;
    let work: Vec<(usize, SweepPoint, u32)> = spec
        .points
        .iter()
        .flat_map(|p| (0..spec.trials).map(move |t| (*p, t)))
        .enumerate()
        .map(|(i, (p, t))| (i, p, t))
        .collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = spec.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Config(e.to_string()))?;
    let (tx, rx) = mpsc::channel::<(usize, TrialRecord)>();

    let mut out = Vec::with_capacity(work.len());
    std::thread::scope(|s| -> Result<()> {
        s.spawn(|| {
            pool.install(|| {
                work.par_iter().for_each_with(tx, |tx, (i, p, t)| {
                    // the receiver only disappears if writing failed
                    let _ = tx.send((*i, run_trial(spec, p, *t)));
                });
            });
        });
        let mut pending = BTreeMap::new();
        for (i, rec) in rx {
            pending.insert(i, rec);
            while let Some(rec) = pending.remove(&out.len()) {
                serde_json::to_writer(&mut sink, &rec)?;
                sink.write_all(b"\n")?;
                out.push(rec);
            }
        }
        sink.flush()?;
        Ok(())
    })?;
    Ok(out)
}

/// Parse JSON-lines records.
pub fn read_records<R: BufRead>(input: R) -> Result<Vec<TrialRecord>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?);
    }
    Ok(out)
}

/// Per-point aggregates of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub nodes: u32,
    pub m: u32,
    pub delta: f64,
    pub x: f64,
    pub trials: usize,
    pub completed: usize,
    pub dims: Vec<usize>,
    pub mean_betti: Vec<f64>,
    pub se_betti: Vec<f64>,
    /// Tail slope of the mean-normalized CCDF per dimension, when fittable.
    pub tail_slope: Vec<Option<f64>>,
    pub mean_biangles: f64,
    pub bounds_hold: bool,
}

fn same_point(a: &SweepPoint, b: &SweepPoint) -> bool {
    a.nodes == b.nodes && a.m == b.m && a.delta.to_bits() == b.delta.to_bits()
}

/// Completed `beta_q` samples of the records at `point`.
pub fn betti_samples(records: &[TrialRecord], point: &SweepPoint, q: usize) -> Vec<f64> {
    records
        .iter()
        .filter(|r| r.status == TrialStatus::Ok && same_point(&r.point(), point))
        .filter_map(|r| r.beta(q))
        .map(|b| b as f64)
        .collect()
}

/// Per-snapshot `beta_q` samples at `point`, ascending in `t`, ending at `T`.
pub fn snapshot_samples(records: &[TrialRecord], point: &SweepPoint, q: usize) -> Vec<(u32, Vec<f64>)> {
    let mut by_t: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.status == TrialStatus::Ok && same_point(&r.point(), point)) {
        for s in &r.snapshots {
            if let Some(&b) = s.betti.get(q) {
                by_t.entry(s.t).or_default().push(b as f64);
            }
        }
        if let Some(b) = r.beta(q) {
            if r.snapshots.last().is_none_or(|s| s.t != r.nodes) {
                by_t.entry(r.nodes).or_default().push(b as f64);
            }
        }
    }
    by_t.into_iter().collect()
}

/// Distinct parameter points in first-seen order.
pub fn record_points(records: &[TrialRecord]) -> Vec<SweepPoint> {
    let mut pts: Vec<SweepPoint> = Vec::new();
    for r in records {
        if !pts.iter().any(|p| same_point(p, &r.point())) {
            pts.push(r.point());
        }
    }
    pts
}

pub fn summarize(records: &[TrialRecord], dims: &[usize], policy: TailPolicy) -> Vec<PointSummary> {
    record_points(records)
        .into_iter()
        .map(|p| {
            let here: Vec<&TrialRecord> = records.iter().filter(|r| same_point(&r.point(), &p)).collect();
            let ok: Vec<&TrialRecord> = here.iter().copied().filter(|r| r.status == TrialStatus::Ok).collect();
            let mut mean_betti = Vec::new();
            let mut se_betti = Vec::new();
            let mut tail_slope = Vec::new();
            for &q in dims {
                let xs = betti_samples(records, &p, q);
                let (m, se) = mean_se(&xs);
                mean_betti.push(m);
                se_betti.push(se);
                let slope = ccdf(&xs, true).ok().and_then(|c| fit_loglog_tail(&c, policy).ok()).map(|f| f.slope);
                tail_slope.push(slope);
            }
            let bi: Vec<f64> = ok.iter().map(|r| r.biangles as f64).collect();
            PointSummary {
                nodes: p.nodes,
                m: p.m,
                delta: p.delta,
                x: compute_x(p.delta, p.m).unwrap_or(f64::NAN),
                trials: here.len(),
                completed: ok.len(),
                dims: dims.to_vec(),
                mean_betti,
                se_betti,
                tail_slope,
                mean_biangles: mean_se(&bi).0,
                bounds_hold: ok.iter().all(|r| r.bounds_hold()),
            }
        })
        .collect()
}

fn num(x: f64) -> String {
    if x.is_finite() {
        x.to_string()
    } else {
        String::new()
    }
}

/// One CSV row per parameter point.
pub fn write_summary_csv<W: Write>(summaries: &[PointSummary], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let dims = summaries.first().map(|s| s.dims.clone()).unwrap_or_default();
    let mut header: Vec<String> = ["nodes", "m", "delta", "x", "trials", "completed"].map(String::from).to_vec();
    for q in &dims {
        header.push(format!("mean_beta{q}"));
        header.push(format!("se_beta{q}"));
        header.push(format!("tail_slope_beta{q}"));
    }
    header.extend(["mean_biangles", "bounds_hold"].map(String::from));
    w.write_record(&header).map_err(csv_err)?;
    for s in summaries {
        let mut row = vec![
            s.nodes.to_string(),
            s.m.to_string(),
            num(s.delta),
            num(s.x),
            s.trials.to_string(),
            s.completed.to_string(),
        ];
        for i in 0..s.dims.len() {
            row.push(num(s.mean_betti[i]));
            row.push(num(s.se_betti[i]));
            row.push(s.tail_slope[i].map(num).unwrap_or_default());
        }
        row.push(num(s.mean_biangles));
        row.push(s.bounds_hold.to_string());
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}
