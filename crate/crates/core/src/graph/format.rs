//! Text graph format.
//!
//! ```text
//! pa T=<int> m=<int> delta=<float> seed=<u64> gen=<seq|polya>
//! t alpha v
//! ...
//! ```
//!
//! One edge line per slot, in `(t, alpha)` order starting at node 2. Floats use
//! the shortest representation that parses back to the same bits, so writing a
//! parsed file reproduces it byte for byte.

use std::io::{BufRead, Write};

use super::{Formulation, MultiGraph, PaParams};
use crate::error::{Error, Result};

pub fn write_graph<W: Write>(g: &MultiGraph, mut out: W) -> Result<()> {
    let p = g.params();
    writeln!(
        out,
        "pa T={} m={} delta={} seed={} gen={}",
        p.nodes,
        p.m,
        p.delta,
        p.seed,
        g.formulation()
    )?;
    for (t, a, v) in g.edges() {
        writeln!(out, "{t} {a} {v}")?;
    }
    Ok(())
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn header_field<'a>(line: usize, tok: Option<&'a str>, key: &str) -> Result<&'a str> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {key}=")))?;
    tok.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| parse_err(line, format!("expected {key}=..., found {tok:?}")))
}

pub fn read_graph<R: BufRead>(input: R) -> Result<MultiGraph> {
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| parse_err(1, "empty file"))??;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("pa") {
        return Err(parse_err(1, "header must start with 'pa'"));
    }
    let bad = |what: &str| parse_err(1, format!("bad {what}"));
    let nodes: u32 = header_field(1, toks.next(), "T")?.parse().map_err(|_| bad("T"))?;
    let m: u32 = header_field(1, toks.next(), "m")?.parse().map_err(|_| bad("m"))?;
    let delta: f64 = header_field(1, toks.next(), "delta")?.parse().map_err(|_| bad("delta"))?;
    let seed: u64 = header_field(1, toks.next(), "seed")?.parse().map_err(|_| bad("seed"))?;
    let formulation: Formulation = header_field(1, toks.next(), "gen")?.parse().map_err(|_| bad("gen"))?;
    if toks.next().is_some() {
        return Err(parse_err(1, "trailing header fields"));
    }
    let params = PaParams::new(nodes, m, delta, seed)?;

    let mut targets = Vec::with_capacity((nodes as usize - 1) * m as usize);
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let nums: Vec<u32> = line
            .split_whitespace()
            .map(|s| s.parse().map_err(|_| parse_err(lineno, format!("bad integer {s:?}"))))
            .collect::<Result<_>>()?;
        let [t, a, v] = nums[..] else {
            return Err(parse_err(lineno, "expected 't alpha v'"));
        };
        let k = targets.len() as u32;
        let (et, ea) = (k / m + 2, k % m + 1);
        if (t, a) != (et, ea) {
            return Err(parse_err(lineno, format!("expected slot ({et}, {ea}), found ({t}, {a})")));
        }
        targets.push(v);
    }
    MultiGraph::from_targets(params, formulation, targets)
}

pub fn parse_graph(text: &str) -> Result<MultiGraph> {
    read_graph(text.as_bytes())
}
