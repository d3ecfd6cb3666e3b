//! Invariant suites: chain-complex identities, sparse against dense Betti
//! numbers, the Polya representation against the exact sequential law, and the
//! deterministic Betti inequalities on generated graphs.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{build_clique_complex, clique_complex_with_cap, collapse, octahedral_sphere, SimpleGraph, SimplicialComplex};
use crate::error::Result;
use crate::graph::{exact_distribution, generate, generate_polya, total_variation, Formulation, PaParams};
use crate::homology::{
    betti, betti_dense_oracle, check_boundary_squared, decomposition_check, euler_check, FieldSpec, MorseBounds,
};
use crate::rng;

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport { name: name.into(), checks: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn error(&mut self, what: String) {
        self.checks += 1;
        self.failures.push(what);
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Erdos-Renyi graph on `1..=n` with edge probability `p`.
pub fn random_graph<R: Rng + ?Sized>(n: u32, p: f64, rng: &mut R) -> SimpleGraph {
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    SimpleGraph::from_edges(n, edges).expect("valid edges")
}

/// Full clique complex of a random graph with at most `max_n` vertices and a
/// random edge density, small enough for the dense oracle.
pub fn random_small_complex<R: Rng + ?Sized>(max_n: u32, rng: &mut R) -> SimplicialComplex {
    loop {
        let n = rng.random_range(1..=max_n);
        let p = rng.random_range(0.1..0.9);
        let g = random_graph(n, p, rng);
        let c = build_clique_complex(&g, n.max(1) as usize, 100_000).expect("small graph");
        if c.total_count() <= crate::homology::DENSE_ORACLE_CAP {
            return c;
        }
    }
}

/// Total-variation distance between `samples` Polya-generated graphs and the
/// exact law of the sequential model.
pub fn polya_tv(params: PaParams, samples: usize, seed: u64) -> Result<f64> {
    let exact = exact_distribution(params)?;
    let mut r = rng::stream(seed, "polya-tv", &[params.nodes as u64, params.m as u64, params.delta.to_bits()]);
    let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
    for _ in 0..samples {
        let g = generate_polya(params, &mut r)?;
        *counts.entry(g.all_targets().to_vec()).or_default() += 1;
    }
    Ok(total_variation(&exact, &counts))
}

fn fixtures() -> Vec<(String, SimplicialComplex)> {
    let mut out: Vec<(String, SimplicialComplex)> = (1..=4)
        .map(|q| (format!("octahedral S^{}", q - 1), octahedral_sphere(q).expect("q >= 1")))
        .collect();
    out.push(("K6".into(), build_clique_complex(&SimpleGraph::complete(6), 6, 1000).expect("small")));
    out.push(("C5".into(), build_clique_complex(&SimpleGraph::cycle(5), 2, 1000).expect("small")));
    out.push((
        "RP2".into(),
        SimplicialComplex::closure([
            [1u32, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 2, 6],
            [2, 3, 5], [3, 4, 6], [2, 4, 5], [3, 5, 6], [2, 4, 6],
        ]),
    ));
    out
}

fn generated_complexes(seed: u64, count: usize) -> Vec<(String, SimplicialComplex)> {
    (0..count)
        .map(|i| {
            let p = PaParams::new(60, 4, -2.5, rng::derive_seed(seed, "verify-graph", &[i as u64])).expect("valid");
            let g = generate(p, Formulation::Polya).expect("valid");
            let c = build_clique_complex(&collapse(&g), 4, 1_000_000).expect("small");
            (format!("PA graph #{i}"), c)
        })
        .collect()
}

fn chain_suites(seed: u64, quick: bool) -> (SuiteReport, SuiteReport) {
    let fields: Vec<FieldSpec> = [2, 3, 5].iter().map(|&p| FieldSpec::new(p).expect("prime")).collect();
    let mut dd = SuiteReport::new("boundary-squared");
    let mut euler = SuiteReport::new("euler");
    let mut complexes = fixtures();
    complexes.extend(generated_complexes(seed, if quick { 5 } else { 20 }));
    let mut r = rng::stream(seed, "verify-random", &[]);
    for i in 0..(if quick { 20 } else { 100 }) {
        complexes.push((format!("random complex #{i}"), random_small_complex(12, &mut r)));
    }
    for (name, c) in &complexes {
        for f in &fields {
            match check_boundary_squared(c, *f) {
                Ok(ok) => dd.check(ok, || format!("{name} over {f}")),
                Err(e) => dd.error(format!("{name} over {f}: {e}")),
            }
            if c.is_truncated() {
                continue;
            }
            match euler_check(c, *f) {
                Ok(e) => euler.check(e.pass, || format!("{name} over {f}: {} != {}", e.f_sum, e.betti_sum)),
                Err(e) => euler.error(format!("{name} over {f}: {e}")),
            }
        }
    }
    (dd, euler)
}

fn dense_suite(seed: u64, quick: bool) -> SuiteReport {
    let mut rep = SuiteReport::new("dense-vs-sparse");
    let mut r = rng::stream(seed, "verify-dense", &[]);
    let n = if quick { 50 } else { 200 };
    for i in 0..n {
        let c = random_small_complex(12, &mut r);
        for p in [2, 3] {
            let f = FieldSpec::new(p).expect("prime");
            let sparse = betti(&c, f, c.dim_cap());
            let dense = betti_dense_oracle(&c, f);
            match (sparse, dense) {
                (Ok(s), Ok(d)) => rep.check(s.betti == d.betti, || {
                    format!("complex #{i} over {f}: sparse {:?} dense {:?}", s.betti, d.betti)
                }),
                (Err(e), _) | (_, Err(e)) => rep.error(format!("complex #{i}: {e}")),
            }
        }
    }
    rep
}

fn tv_suite(seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("polya-vs-sequential");
    for (t, m, d) in [(5, 1, 0.0), (4, 2, 1.0)] {
        let p = PaParams::new(t, m, d, 0).expect("valid");
        match polya_tv(p, 100_000, seed) {
            Ok(tv) => rep.check(tv <= 0.02, || format!("T={t} m={m} delta={d}: TV {tv}")),
            Err(e) => rep.error(e.to_string()),
        }
    }
    rep
}

fn inequality_suite(seed: u64, quick: bool) -> SuiteReport {
    let mut rep = SuiteReport::new("morse-and-decomposition");
    let trials = if quick { 5 } else { 25 };
    for (t, m, d) in [(500, 7, -5.0), (300, 5, -4.0)] {
        for i in 0..trials {
            let s = rng::derive_seed(seed, "verify-bounds", &[t as u64, i]);
            let run = || -> Result<(bool, bool)> {
                let g = generate(PaParams::new(t, m, d, s)?, Formulation::Polya)?;
                let simple = collapse(&g);
                let c = clique_complex_with_cap(&simple, 3, 10_000_000)?;
                let b = betti(&c, FieldSpec::GF2, 2)?;
                let morse = MorseBounds::evaluate(&g, &simple, &c, b.betti[1]);
                let dec = decomposition_check(&simple, b.betti[2], 2, FieldSpec::GF2)?;
                Ok((morse.holds, dec.holds))
            };
            match run() {
                Ok((a, b)) => {
                    rep.check(a, || format!("Morse bounds fail at T={t} m={m} trial {i}"));
                    rep.check(b, || format!("decomposition bound fails at T={t} m={m} trial {i}"));
                }
                Err(e) => rep.error(e.to_string()),
            }
        }
    }
    rep
}

/// Run every suite. `quick` trims the number of random instances.
pub fn run_verify(seed: u64, quick: bool) -> Vec<SuiteReport> {
    let (dd, euler) = chain_suites(seed, quick);
    vec![dd, euler, dense_suite(seed, quick), tv_suite(seed), inequality_suite(seed, quick)]
}
