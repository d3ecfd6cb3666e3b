//! Acceptance gate. Each test prints one `criterion N: PASS|FAIL` line with the
//! measured quantity, then asserts. Criterion 11 is a long batch run and is
//! ignored by default: `cargo test --release -p paclique --test acceptance
//! -- --ignored --nocapture`.

use std::time::Instant;

use paclique::complex::{barmak_check, build_clique_complex, collapse, octahedral_sphere, SimpleGraph, Verdict};
use paclique::experiments::{
    attachment_prob_estimate, ccdf, common_neighbor_growth, fit_loglog, fit_loglog_tail, ks_evolution, log_grid,
    pareto_sample, phase_classify, phase_classify_rational, run_sweep, scaling_regression, snapshot_samples,
    betti_samples, PhaseRegion, RateConfig, SweepPoint, SweepSpec, TailPolicy,
};
use paclique::graph::{generate, Formulation, PaParams};
use paclique::homology::{betti, betti_dense_oracle, decomposition_check, FieldSpec, MorseBounds};
use paclique::rng;
use paclique::verify::{polya_tv, random_graph, random_small_complex, run_verify};

fn report(n: u32, pass: bool, started: Instant, detail: String) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("criterion {n}: {tag} ({:.1}s) {detail}", started.elapsed().as_secs_f64());
    assert!(pass, "criterion {n}: {detail}");
}

/// `g` plus one new vertex adjacent to everything.
fn cone(g: &SimpleGraph) -> SimpleGraph {
    let apex = g.node_count() + 1;
    SimpleGraph::from_edges(apex, g.edges().chain((1..apex).map(|v| (v, apex)))).unwrap()
}

#[test]
fn c01_sparse_matches_dense_oracle() {
    let started = Instant::now();
    let mut r = rng::stream(2024, "acceptance-dense", &[]);
    let mut mismatches = Vec::new();
    for i in 0..200 {
        let c = random_small_complex(12, &mut r);
        for p in [2, 3] {
            let f = FieldSpec::new(p).unwrap();
            let s = betti(&c, f, c.dim_cap()).unwrap();
            let d = betti_dense_oracle(&c, f).unwrap();
            if s.betti != d.betti {
                mismatches.push(format!("#{i} GF({p}): {:?} vs {:?}", s.betti, d.betti));
            }
        }
    }
    let pass = mismatches.is_empty() && started.elapsed().as_secs() < 60;
    report(1, pass, started, format!("200 complexes x 2 fields, mismatches {mismatches:?}"));
}

#[test]
fn c02_chain_complex_invariants() {
    let started = Instant::now();
    let reports = run_verify(42, false);
    let mut checks = 0;
    let mut failures = Vec::new();
    for r in reports.iter().filter(|r| r.name == "boundary-squared" || r.name == "euler") {
        checks += r.checks;
        failures.extend(r.failures.iter().cloned());
    }
    let pass = checks > 0 && failures.is_empty() && started.elapsed().as_secs() < 60;
    report(2, pass, started, format!("{checks} checks, failures {failures:?}"));
}

#[test]
fn c03_polya_matches_sequential_law() {
    let started = Instant::now();
    let a = polya_tv(PaParams::new(5, 1, 0.0, 0).unwrap(), 100_000, 7).unwrap();
    let b = polya_tv(PaParams::new(4, 2, 1.0, 0).unwrap(), 100_000, 7).unwrap();
    let pass = a <= 0.02 && b <= 0.02 && started.elapsed().as_secs() < 120;
    report(3, pass, started, format!("TV(T=5,m=1,d=0) = {a:.4}, TV(T=4,m=2,d=1) = {b:.4}, limit 0.02"));
}

#[test]
fn c04_deterministic_inequalities() {
    let started = Instant::now();
    let mut held = 0;
    let mut total = 0;
    for (t, m, d) in [(500, 7, -5.0), (300, 5, -4.0)] {
        for i in 0..100u64 {
            let seed = rng::derive_seed(4, "acceptance-bounds", &[t as u64, i]);
            let g = generate(PaParams::new(t, m, d, seed).unwrap(), Formulation::Polya).unwrap();
            let simple = collapse(&g);
            let c = build_clique_complex(&simple, 3, 50_000_000).unwrap();
            let b = betti(&c, FieldSpec::GF2, 2).unwrap();
            let morse = MorseBounds::evaluate(&g, &simple, &c, b.betti[1]);
            let dec = decomposition_check(&simple, b.betti[2], 2, FieldSpec::GF2).unwrap();
            total += 1;
            held += (morse.holds && dec.holds) as u32;
        }
    }
    let pass = held == total && started.elapsed().as_secs() < 300;
    report(4, pass, started, format!("both bounds held in {held}/{total} trials"));
}

#[test]
fn c05_beta1_linear_law() {
    let started = Instant::now();
    let t = 5000;
    let mut dev = Vec::new();
    let mut ratios = Vec::new();
    let mut sandwiched = 0;
    for i in 0..20u64 {
        let seed = rng::derive_seed(5, "acceptance-beta1", &[i]);
        let g = generate(PaParams::new(t, 7, -5.0, seed).unwrap(), Formulation::Polya).unwrap();
        let simple = collapse(&g);
        let c = build_clique_complex(&simple, 2, 50_000_000).unwrap();
        let b1 = betti(&c, FieldSpec::GF2, 1).unwrap().betti[1];
        sandwiched += MorseBounds::evaluate(&g, &simple, &c, b1).holds as u32;
        let b1 = b1 as f64;
        ratios.push(b1 / t as f64);
        dev.push((b1 / t as f64 - 6.0).abs());
    }
    let mean_dev = dev.iter().sum::<f64>() / dev.len() as f64;
    let mean_ratio = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let pass = mean_dev <= 0.05 && started.elapsed().as_secs() < 600;
    report(5, pass, started, format!(
            "mean |beta_1/T - 6| = {mean_dev:.4} (mean beta_1/T = {mean_ratio:.4}), limit 0.05; Morse sandwich held in {sandwiched}/20"
        ));
}

#[test]
fn c06_beta2_growth_exponent() {
    let started = Instant::now();
    let cfg = RateConfig { m: 5, delta: -4.5, trials: 400, seed: 6 };
    let est = scaling_regression(cfg, &[500, 1000, 2000, 4000, 8000], 2, FieldSpec::GF2, 500_000_000).unwrap();
    let theory = 1.0 - 4.0 / 11.0;
    let slope = est.fit.as_ref().map(|f| f.slope).unwrap_or(f64::NAN);
    let means: Vec<(u32, f64)> = est.points.iter().map(|p| (p.t, p.mean)).collect();
    let pass = (slope - theory).abs() <= 0.15;
    report(6, pass, started, format!("slope {slope:.4} vs {theory:.4} +/- 0.15, means {means:?}"));
}

#[test]
fn c07_common_neighbor_rate() {
    let started = Instant::now();
    let cfg = RateConfig { m: 7, delta: -5.0, trials: 300, seed: 7 };
    let est = common_neighbor_growth(cfg, &[16_000, 32_000, 64_000, 128_000], 2).unwrap();
    let theory = 5.0 / 9.0;
    let slope = est.fit.as_ref().map(|f| f.slope).unwrap_or(f64::NAN);
    assert!((est.theoretical_slope.unwrap() - theory).abs() < 1e-12);
    let pass = (slope - theory).abs() <= 0.1 && started.elapsed().as_secs() < 1200;
    report(7, pass, started, format!("slope {slope:.4} vs 5/9 +/- 0.1"));
}

#[test]
fn c08_attachment_probability_rate() {
    let started = Instant::now();
    let cfg = RateConfig { m: 7, delta: -5.0, trials: 10_000, seed: 8 };
    let grid = log_grid(10_000, 100_000, 6);
    let est = attachment_prob_estimate(cfg, 1, &grid).unwrap();
    let slope = est.fit.as_ref().map(|f| f.slope).unwrap_or(f64::NAN);
    let theory = -2.0 / 9.0;
    let pass = (slope - theory).abs() <= 0.05 && started.elapsed().as_secs() < 1200;
    report(8, pass, started, format!("slope {slope:.4} vs -2/9 +/- 0.05 over T in {grid:?}"));
}

#[test]
fn c09_power_law_fitter_calibration() {
    let started = Instant::now();
    let mut r = rng::stream(9, "acceptance-pareto", &[]);
    let xs = pareto_sample(2.5, 100_000, &mut r);
    let fit = fit_loglog_tail(&ccdf(&xs, false).unwrap(), TailPolicy::All).unwrap();
    let line: Vec<(f64, f64)> = (1..=50).map(|i| (i as f64, 3.0 * (i as f64).powf(-2.5))).collect();
    let exact = fit_loglog(&line).unwrap();
    let exact_err = (exact.slope + 2.5).abs().max((exact.intercept - 3f64.ln()).abs());
    let pass = (fit.slope + 2.5).abs() <= 0.1 && exact_err < 1e-12 && started.elapsed().as_secs() < 60;
    report(9, pass, started, format!("Pareto slope {:.4} vs -2.5 +/- 0.1, exact-line error {exact_err:.2e}", fit.slope));
}

#[test]
fn c10_phase_classifier() {
    let started = Instant::now();
    let mut problems = Vec::new();
    // (-delta/m as p/q, x as p/q)
    let pairs = [((0i64, 1i64), (1i64, 2i64)), ((2, 3), (1, 4)), ((4, 5), (1, 6)), ((6, 7), (1, 8))];
    let m = 8u32;
    for ((rn, rd), (xn, xd)) in pairs {
        let num = -rn * m as i64;
        let r = phase_classify_rational(num, rd, m, 1).unwrap();
        // x = (m rd + num) / (2 m rd + num), compared as a reduced fraction
        let (a, b) = (m as i64 * rd + num, 2 * m as i64 * rd + num);
        if a * xd != b * xn {
            problems.push(format!("-d/m = {rn}/{rd}: x = {a}/{b}, expected {xn}/{xd}"));
        }
        if (r.x - xn as f64 / xd as f64).abs() > 1e-15 {
            problems.push(format!("-d/m = {rn}/{rd}: float x {}", r.x));
        }
    }
    // (1, 0): the boundary delta = -m itself is outside the domain; x tends to 0.
    if phase_classify_rational(-8, 1, 8, 1).is_ok() || phase_classify(-8.0, 8, 1).is_ok() {
        problems.push("delta = -m accepted".into());
    }
    let near = phase_classify_rational(-(8 * 1_000_000 - 1), 1_000_000, 8, 1).unwrap();
    if !(near.x > 0.0 && near.x < 1e-6) {
        problems.push(format!("x near delta = -m is {}", near.x));
    }
    // boundary x = 1/(2q+2) is homotopy-connected, the open interval above it up
    // to 1/(2q) is beta_q infinite
    let expect = [
        ((0, 1), 1, "beta_1 infinite"),
        ((2, 3), 1, "1-homotopy-connected"),
        ((2, 3), 2, "beta_2 infinite"),
        ((4, 5), 2, "2-homotopy-connected"),
        ((4, 5), 3, "beta_3 infinite"),
        ((6, 7), 3, "3-homotopy-connected"),
        ((0, 1), 2, "beta_2 finite"),
        ((2, 3), 3, "beta_3 finite"),
    ];
    for ((rn, rd), q, label) in expect {
        let rat = phase_classify_rational(-rn * m as i64, rd, m, q).unwrap();
        let flt = phase_classify(-(rn as f64) * m as f64 / rd as f64, m, q).unwrap();
        if rat.label() != label || flt.label() != label {
            problems.push(format!("-d/m = {rn}/{rd}, q = {q}: {} / {}, expected {label}", rat.label(), flt.label()));
        }
    }
    if phase_classify_rational(-2, 3, 1, 1).unwrap().region != PhaseRegion::InsufficientM {
        problems.push("m = 1 below the homotopy bound not flagged".into());
    }
    let pass = problems.is_empty() && started.elapsed().as_millis() < 1000;
    report(10, pass, started, format!("problems {problems:?}"));
}

#[test]
#[ignore = "extended full-scale reproduction"]
fn c11_full_scale_reproduction() {
    let started = Instant::now();
    let spec = SweepSpec {
        points: vec![SweepPoint { nodes: 10_000, m: 7, delta: -5.0 }],
        trials: 500,
        dims: vec![2],
        field: 2,
        seed: 11,
        snapshots: log_grid(1000, 10_000, 8),
        formulation: Formulation::Polya,
        max_simplices: 500_000_000,
        bounds: false,
        record_timing: false,
        threads: None,
    };
    let records = run_sweep(&spec, std::io::sink()).unwrap();
    let point = spec.points[0];
    let samples = betti_samples(&records, &point, 2);
    let pts = ccdf(&samples, true).unwrap();
    let mut sensitivity = Vec::new();
    for policy in [TailPolicy::AboveOne, TailPolicy::Above(2.0), TailPolicy::All] {
        let s = fit_loglog_tail(&pts, policy).map(|f| f.slope).unwrap_or(f64::NAN);
        sensitivity.push(format!("{policy}: {s:.3}"));
    }
    let tail = fit_loglog_tail(&pts, TailPolicy::AboveOne).map(|f| f.slope).unwrap_or(f64::NAN);
    let ks = ks_evolution(&snapshot_samples(&records, &point, 2)).unwrap();
    let ks_slope = ks.fit.as_ref().map(|f| f.slope).unwrap_or(f64::NAN);
    let pass = (tail + 2.51).abs() <= 0.3 && (ks_slope + 0.651).abs() <= 0.2;
    report(
        11,
        pass,
        started,
        format!(
            "{} trials, tail slope {tail:.3} vs -2.51 +/- 0.3, KS slope {ks_slope:.3} vs -0.651 +/- 0.2, cutoff sensitivity [{}]",
            samples.len(),
            sensitivity.join(", ")
        ),
    );
}

#[test]
fn c12_barmak_checker() {
    let started = Instant::now();
    let mut problems = Vec::new();
    let mut r = rng::stream(12, "acceptance-barmak", &[]);
    let mut cones = 0;
    for n in 2..=10u32 {
        for _ in 0..5 {
            let base = random_graph(n - 1, 0.4, &mut r);
            let g = cone(&base);
            let c = build_clique_complex(&g, 1, 10_000).unwrap();
            for q in 0..=(n / 2).saturating_sub(1) {
                cones += 1;
                if barmak_check(&c, q, 10_000_000, 0) != Verdict::CertifiedQConnected {
                    problems.push(format!("cone on {n} vertices not certified at q = {q}"));
                }
            }
        }
    }
    for q in [2u32, 3] {
        let s = octahedral_sphere(q).unwrap();
        match barmak_check(&s, q - 1, 10_000_000, 0) {
            Verdict::CriterionFails { witness } if !witness.is_empty() => {}
            other => problems.push(format!("octahedral S^{} at q = {}: {other:?}", q - 1, q - 1)),
        }
    }
    let pass = problems.is_empty() && started.elapsed().as_secs() < 60;
    report(12, pass, started, format!("{cones} cone checks, problems {problems:?}"));
}
