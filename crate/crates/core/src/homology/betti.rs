use serde::{Deserialize, Serialize};

use super::boundary::BoundaryMatrix;
use super::field::FieldSpec;
use super::reduce::{reduce, Reduction};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};

/// Betti numbers of a complex over a prime field.
///
/// `ranks[q]` is the rank of `partial_q` (`ranks[0] = 0`). `exact_flags[q]` is
/// false when `betti[q]` is only an upper bound because the complex was capped
/// at dimension `q` while cliques above the cap exist.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiVector {
    pub field: FieldSpec,
    pub f_vector: Vec<u64>,
    pub ranks: Vec<u64>,
    pub betti: Vec<u64>,
    pub exact_flags: Vec<bool>,
}

impl BettiVector {
    pub fn get(&self, q: usize) -> Option<u64> {
        self.betti.get(q).copied()
    }

    pub fn is_exact(&self) -> bool {
        self.exact_flags.iter().all(|&e| e)
    }
}

/// Reductions of `partial_1..=partial_top` (index 0 unused), top dimension
/// first so that each pivot row clears a column one dimension down.
fn reduce_all(
    c: &SimplicialComplex,
    rel: Option<&SimplicialComplex>,
    field: FieldSpec,
    top: usize,
) -> Result<Vec<Option<Reduction>>> {
    let mut out: Vec<Option<Reduction>> = vec![None; top + 1];
    let mut cleared: Option<Vec<bool>> = None;
    for q in (1..=top).rev() {
        let m = match rel {
            Some(s) => BoundaryMatrix::relative(c, s, q, field)?,
            None => BoundaryMatrix::new(c, q, field)?,
        };
        let (rows, cols) = (m.rows(), m.cols());
        let red = reduce(m.into_columns(), rows, field, cleared.as_deref().filter(|c| c.len() == cols));
        let mut next = vec![false; rows];
        for r in red.pivot_rows() {
            next[r as usize] = true;
        }
        cleared = Some(next);
        out[q] = Some(red);
    }
    Ok(out)
}

fn check_q_max(c: &SimplicialComplex, q_max: usize) -> Result<()> {
    if q_max > c.dim_cap() && c.is_truncated() {
        return Err(Error::InvalidParams(format!(
            "beta_{q_max} requested from a complex truncated at dimension {}",
            c.dim_cap()
        )));
    }
    Ok(())
}

fn assemble(
    c: &SimplicialComplex,
    field: FieldSpec,
    q_max: usize,
    reds: &[Option<Reduction>],
    t: Option<u32>,
) -> BettiVector {
    let cap = c.dim_cap();
    let count = |q: usize| -> u64 {
        match t {
            Some(t) => c.prefix_count(q, t) as u64,
            None => c.count(q) as u64,
        }
    };
    let rank = |q: usize| -> u64 {
        match reds.get(q).and_then(|r| r.as_ref()) {
            Some(r) => match t {
                Some(t) => r.prefix_rank(c.prefix_count(q, t)),
                None => r.rank(),
            },
            None => 0,
        }
    };
    let top = reds.len() - 1;
    let f_vector: Vec<u64> = (0..=cap).map(count).collect();
    let ranks: Vec<u64> = (0..=top).map(rank).collect();
    let betti = (0..=q_max).map(|q| count(q) - rank(q) - rank(q + 1)).collect();
    let exact_flags = (0..=q_max).map(|q| q < cap || !c.is_truncated()).collect();
    BettiVector { field, f_vector, ranks, betti, exact_flags }
}

/// `beta_0..=beta_{q_max}` by sparse elimination over `field`.
pub fn betti(c: &SimplicialComplex, field: FieldSpec, q_max: usize) -> Result<BettiVector> {
    check_q_max(c, q_max)?;
    let top = (q_max + 1).min(c.dim_cap());
    let reds = reduce_all(c, None, field, top)?;
    Ok(assemble(c, field, q_max, &reds, None))
}

/// Betti vectors of the subcomplexes `X^(t)` spanned by vertices `<= t`, for
/// every `t` in `times`, from a single reduction of the full complex.
pub fn betti_at_times(c: &SimplicialComplex, field: FieldSpec, q_max: usize, times: &[u32]) -> Result<Vec<BettiVector>> {
    check_q_max(c, q_max)?;
    let top = (q_max + 1).min(c.dim_cap());
    let reds = reduce_all(c, None, field, top)?;
    Ok(times.iter().map(|&t| assemble(c, field, q_max, &reds, Some(t))).collect())
}

/// `beta_q(c, s)`: Betti number of the quotient chain complex `C_*(c)/C_*(s)`.
pub fn relative_betti(c: &SimplicialComplex, s: &SimplicialComplex, field: FieldSpec, q: usize) -> Result<u64> {
    s.check_subcomplex_of(c)?;
    if q >= c.dim_cap() && c.is_truncated() {
        return Err(Error::InvalidParams(format!(
            "relative beta_{q} needs dimension {} but the complex is truncated at {}",
            q + 1,
            c.dim_cap()
        )));
    }
    let top = (q + 1).min(c.dim_cap());
    let reds = reduce_all(c, Some(s), field, top)?;
    let rank = |d: usize| reds.get(d).and_then(|r| r.as_ref()).map_or(0, Reduction::rank);
    let chains = (c.count(q) - s.count(q)) as u64;
    Ok(chains - rank(q) - rank(q + 1))
}

/// Both sides of the Euler identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerCheck {
    pub f_sum: i64,
    pub betti_sum: i64,
    pub pass: bool,
}

/// Compare `sum (-1)^q f_q` with `sum (-1)^q beta_q`. Refuses truncated
/// complexes, for which the identity does not apply.
pub fn euler_check(c: &SimplicialComplex, field: FieldSpec) -> Result<EulerCheck> {
    if c.is_truncated() {
        return Err(Error::Refused("Euler identity needs the full complex, not a truncated one".into()));
    }
    let b = betti(c, field, c.dim_cap())?;
    let alt = |v: &[u64]| -> i64 {
        v.iter().enumerate().map(|(q, &x)| if q % 2 == 0 { x as i64 } else { -(x as i64) }).sum()
    };
    let f_sum = alt(&b.f_vector);
    let betti_sum = alt(&b.betti);
    Ok(EulerCheck { f_sum, betti_sum, pass: f_sum == betti_sum })
}

/// Betti vectors over several fields and whether they agree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossField {
    pub vectors: Vec<BettiVector>,
    pub consistent: bool,
}

pub fn cross_field_betti(c: &SimplicialComplex, q_max: usize, primes: &[u32]) -> Result<CrossField> {
    let vectors = primes
        .iter()
        .map(|&p| betti(c, FieldSpec::new(p)?, q_max))
        .collect::<Result<Vec<_>>>()?;
    let consistent = vectors.windows(2).all(|w| w[0].betti == w[1].betti);
    Ok(CrossField { vectors, consistent })
}

/// Connected components of the 1-skeleton, by union-find.
pub fn component_count(c: &SimplicialComplex) -> u64 {
    let verts = c.vertices();
    let mut parent: Vec<usize> = (0..verts.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let idx = |v: u32| verts.binary_search(&v).expect("edge endpoint is a vertex");
    let mut components = verts.len() as u64;
    for e in c.simplices(1) {
        let (a, b) = (find(&mut parent, idx(e[0])), find(&mut parent, idx(e[1])));
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    components
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_clique_complex, octahedral_sphere, SimpleGraph};

    fn gf(p: u32) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    #[test]
    fn sphere_and_circle() {
        let s2 = octahedral_sphere(3).unwrap();
        assert_eq!(betti(&s2, FieldSpec::GF2, 2).unwrap().betti, vec![1, 0, 1]);
        let c4 = build_clique_complex(&SimpleGraph::cycle(4), 2, 100).unwrap();
        assert_eq!(betti(&c4, gf(3), 1).unwrap().betti, vec![1, 1]);
        let k5 = build_clique_complex(&SimpleGraph::complete(5), 5, 1000).unwrap();
        assert_eq!(betti(&k5, gf(5), 4).unwrap().betti, vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn spheres_in_every_dimension() {
        for q in 1..=5u32 {
            let s = octahedral_sphere(q).unwrap();
            let b = betti(&s, gf(3), q as usize - 1).unwrap();
            let mut expect = vec![0; q as usize];
            expect[0] += 1;
            expect[q as usize - 1] += 1;
            assert_eq!(b.betti, expect, "S^{}", q - 1);
        }
    }

    #[test]
    fn truncation_is_flagged() {
        let k5 = build_clique_complex(&SimpleGraph::complete(5), 2, 1000).unwrap();
        let b = betti(&k5, FieldSpec::GF2, 2).unwrap();
        assert_eq!(b.exact_flags, vec![true, true, false]);
        // f_2 - rank d_2 = 10 - 6 = 4 is an upper bound on the true beta_2 = 0
        assert_eq!(b.betti[2], 4);
        assert!(betti(&k5, FieldSpec::GF2, 3).is_err());
        assert!(euler_check(&k5, FieldSpec::GF2).is_err());
    }

    #[test]
    fn json_layout() {
        let c4 = build_clique_complex(&SimpleGraph::cycle(4), 2, 100).unwrap();
        let v = serde_json::to_value(betti(&c4, FieldSpec::GF2, 1).unwrap()).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys.len(), 5);
        for k in ["field", "f_vector", "ranks", "betti", "exact_flags"] {
            assert!(v.get(k).is_some());
        }
    }

    #[test]
    fn snapshots_match_restrictions() {
        let g = crate::graph::generate(crate::graph::PaParams::new(200, 4, -2.0, 5).unwrap(), Default::default()).unwrap();
        let c = build_clique_complex(&crate::complex::collapse(&g), 3, 1_000_000).unwrap();
        let times = [10, 50, 120, 200];
        let snaps = betti_at_times(&c, FieldSpec::GF2, 2, &times).unwrap();
        for (t, s) in times.iter().zip(&snaps) {
            let direct = betti(&c.restrict_to(*t), FieldSpec::GF2, 2).unwrap();
            assert_eq!(s, &direct, "t = {t}");
        }
    }

    #[test]
    fn relative_fixtures() {
        let disk = SimplicialComplex::closure([[1u32, 2, 3]]);
        let rim = SimplicialComplex::closure([[1u32, 2], [2, 3], [1, 3]]);
        assert_eq!(relative_betti(&disk, &rim, FieldSpec::GF2, 2).unwrap(), 1);
        assert_eq!(relative_betti(&disk, &rim, FieldSpec::GF2, 1).unwrap(), 0);
        let s2 = octahedral_sphere(3).unwrap();
        for q in 0..=2 {
            assert_eq!(relative_betti(&s2, &s2, gf(3), q).unwrap(), 0);
            let abs = betti(&s2, gf(3), 2).unwrap().betti[q];
            assert_eq!(relative_betti(&s2, &SimplicialComplex::empty(), gf(3), q).unwrap(), abs);
        }
        assert!(relative_betti(&rim, &disk, FieldSpec::GF2, 1).is_err());
    }

    #[test]
    fn euler_fixtures() {
        let e = euler_check(&octahedral_sphere(3).unwrap(), FieldSpec::GF2).unwrap();
        assert_eq!((e.f_sum, e.betti_sum, e.pass), (2, 2, true));
        let k5 = build_clique_complex(&SimpleGraph::complete(5), 5, 1000).unwrap();
        let e = euler_check(&k5, FieldSpec::GF2).unwrap();
        assert_eq!((e.f_sum, e.pass), (1, true));
    }

    #[test]
    fn fields_agree_without_torsion() {
        let s = octahedral_sphere(4).unwrap();
        let x = cross_field_betti(&s, 3, &[2, 3, 5]).unwrap();
        assert!(x.consistent);
    }

    #[test]
    fn fields_disagree_on_projective_plane() {
        // six-vertex triangulation of RP^2: H_1 = Z/2 shows up over GF(2) only
        let rp2 = SimplicialComplex::closure([
            [1u32, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 2, 6],
            [2, 3, 5], [3, 4, 6], [2, 4, 5], [3, 5, 6], [2, 4, 6],
        ]);
        let x = cross_field_betti(&rp2, 2, &[2, 3]).unwrap();
        assert_eq!(x.vectors[0].betti, vec![1, 1, 1]);
        assert_eq!(x.vectors[1].betti, vec![1, 0, 0]);
        assert!(!x.consistent);
    }

    #[test]
    fn beta0_is_component_count() {
        let g = SimpleGraph::from_edges(7, [(1, 2), (2, 3), (4, 5)]).unwrap();
        let c = build_clique_complex(&g, 2, 100).unwrap();
        assert_eq!(component_count(&c), 4);
        assert_eq!(betti(&c, FieldSpec::GF2, 0).unwrap().betti[0], 4);
    }
}
