use std::collections::HashMap;

use super::betti::BettiVector;
use super::field::FieldSpec;
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};

/// Largest complex the dense oracle accepts, counted in simplices.
pub const DENSE_ORACLE_CAP: usize = 5000;

fn dense_rank(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_multiple_of(p)) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = pow_mod(m[rank][col], p - 2, p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows {
            if r != rank && m[r][col] != 0 {
                let factor = m[r][col];
                for k in col..cols {
                    m[r][k] = (m[r][k] + p * p - factor * m[rank][k] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Betti numbers of every dimension through the complex's cap by dense row
/// reduction. Shares no code with the sparse path beyond the complex itself.
pub fn betti_dense_oracle(c: &SimplicialComplex, field: FieldSpec) -> Result<BettiVector> {
    let total = c.total_count();
    if total > DENSE_ORACLE_CAP {
        return Err(Error::Refused(format!("dense oracle handles at most {DENSE_ORACLE_CAP} simplices, got {total}")));
    }
    let p = field.p() as u64;
    let cap = c.dim_cap();
    let by_dim: Vec<Vec<Vec<u32>>> = (0..=cap).map(|d| c.simplices(d).map(<[u32]>::to_vec).collect()).collect();
    let index: Vec<HashMap<Vec<u32>, usize>> = by_dim
        .iter()
        .map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
        .collect();

    let mut ranks = vec![0u64; cap + 1];
    for q in 1..=cap {
        let rows = by_dim[q - 1].len();
        let mut m = vec![vec![0u64; by_dim[q].len()]; rows];
        for (j, s) in by_dim[q].iter().enumerate() {
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                let r = *index[q - 1].get(&face).ok_or_else(|| Error::MissingFace { simplex: s.clone(), face })?;
                m[r][j] = if i % 2 == 0 { 1 } else { p - 1 };
            }
        }
        ranks[q] = if rows == 0 { 0 } else { dense_rank(m, p) };
    }
    let f_vector: Vec<u64> = by_dim.iter().map(|l| l.len() as u64).collect();
    let betti = (0..=cap)
        .map(|q| f_vector[q] - ranks[q] - ranks.get(q + 1).copied().unwrap_or(0))
        .collect();
    let exact_flags = (0..=cap).map(|q| q < cap || !c.is_truncated()).collect();
    Ok(BettiVector { field, f_vector, ranks, betti, exact_flags })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_clique_complex, octahedral_sphere, SimpleGraph};

    #[test]
    fn rank_examples() {
        assert_eq!(dense_rank(vec![vec![1, 2], vec![2, 4]], 5), 1);
        assert_eq!(dense_rank(vec![vec![1, 2], vec![2, 4]], 2), 1);
        assert_eq!(dense_rank(vec![vec![1, 1], vec![1, 2]], 3), 2);
    }

    #[test]
    fn spheres() {
        for q in 1..=4u32 {
            let b = betti_dense_oracle(&octahedral_sphere(q).unwrap(), FieldSpec::new(3).unwrap()).unwrap();
            assert_eq!(b.betti[0], if q == 1 { 2 } else { 1 });
            assert_eq!(b.betti[q as usize - 1], if q == 1 { 2 } else { 1 });
        }
    }

    #[test]
    fn two_disjoint_cycles() {
        let g = SimpleGraph::from_edges(8, [(1, 2), (2, 3), (3, 4), (4, 1), (5, 6), (6, 7), (7, 8), (8, 5)]).unwrap();
        let c = build_clique_complex(&g, 2, 100).unwrap();
        assert_eq!(betti_dense_oracle(&c, FieldSpec::GF2).unwrap().betti, vec![2, 2, 0]);
    }

    #[test]
    fn refuses_large_complexes() {
        let c = build_clique_complex(&SimpleGraph::complete(14), 13, 1 << 20).unwrap();
        assert!(matches!(betti_dense_oracle(&c, FieldSpec::GF2), Err(Error::Refused(_))));
    }
}
