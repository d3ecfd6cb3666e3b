use rand::seq::index::sample;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::simple::SimpleGraph;
use super::simplicial::SimplicialComplex;
use crate::rng;

/// Outcome of the star-covering check. The criterion is sufficient for
/// q-connectedness, not necessary, so a failure does not disprove it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    CertifiedQConnected,
    CriterionFails { witness: Vec<u32> },
    Inconclusive { sampled: u64 },
}

/// Whether the full subcomplex on `w` lies in the closed star of some vertex,
/// evaluated on the 1-skeleton: some `v` is adjacent to every member of `w`
/// other than itself.
pub fn covered_by_star(g: &SimpleGraph, w: &[u32]) -> bool {
    if w.iter().any(|&v| w.iter().all(|&u| u == v || g.is_adjacent(u, v))) {
        return true;
    }
    let Some(&seed) = w.iter().min_by_key(|&&v| g.neighbors(v).len()) else {
        return true;
    };
    g.neighbors(seed).iter().any(|&c| w.iter().all(|&u| g.is_adjacent(u, c)))
}

/// Literal form of [`covered_by_star`] for an arbitrary complex: the induced
/// subcomplex on `w` is a subcomplex of `St(v)` for some vertex `v`.
pub fn covered_by_star_literal(c: &SimplicialComplex, w: &[u32]) -> bool {
    let span = c.induced(w);
    c.vertices().iter().any(|&v| {
        let star = c.star(v).expect("vertex of the complex");
        span.check_subcomplex_of(&star).is_ok()
    })
}

fn binom_capped(n: u64, k: u64, cap: u64) -> u64 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > cap as u128 {
            return cap.saturating_add(1);
        }
    }
    acc as u64
}

/// Advance `idx` (ascending indices into `0..n`) to the next k-combination.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// First failing subset (lexicographically) among those starting at `verts[first]`.
fn scan_from(g: &SimpleGraph, verts: &[u32], k: usize, first: usize) -> Option<Vec<u32>> {
    let n = verts.len();
    if first + k > n {
        return None;
    }
    let mut rest: Vec<usize> = (first + 1..first + k).collect();
    let mut w = vec![0u32; k];
    loop {
        w[0] = verts[first];
        for (slot, &i) in w[1..].iter_mut().zip(&rest) {
            *slot = verts[i];
        }
        if !covered_by_star(g, &w) {
            return Some(w);
        }
        if k == 1 || !next_combination_from(&mut rest, n, first + 1) {
            return None;
        }
    }
}

fn next_combination_from(idx: &mut [usize], n: usize, offset: usize) -> bool {
    for i in idx.iter_mut() {
        *i -= offset;
    }
    let more = next_combination(idx, n - offset);
    for i in idx.iter_mut() {
        *i += offset;
    }
    more
}

/// The Barmak star-covering test for `q`-connectedness of a clique complex:
/// every vertex set of size at most `2(q+1)` must span a subcomplex inside some
/// vertex star. Covered sets are closed under subsets, so only sets of size
/// `min(2(q+1), n)` are checked.
///
/// The complex is read through its 1-skeleton and treated as a clique complex.
/// When there are at most `subset_budget` such sets the scan is exhaustive and
/// reports the lexicographically smallest failing set; otherwise
/// `subset_budget` uniform random sets are drawn from the stream seeded by
/// `seed`.
pub fn barmak_check(c: &SimplicialComplex, q: u32, subset_budget: u64, seed: u64) -> Verdict {
    let g = c.one_skeleton();
    let verts = c.vertices().to_vec();
    let n = verts.len();
    let k = (2 * (q as usize + 1)).min(n);
    if k == 0 {
        return Verdict::CertifiedQConnected;
    }
    let total = binom_capped(n as u64, k as u64, subset_budget);
    if total <= subset_budget {
        let witness = (0..n).into_par_iter().find_map_first(|first| scan_from(&g, &verts, k, first));
        return match witness {
            Some(witness) => Verdict::CriterionFails { witness },
            None => Verdict::CertifiedQConnected,
        };
    }
    let mut r = rng::stream(seed, "barmak", &[q as u64]);
    let mut best: Option<Vec<u32>> = None;
    for _ in 0..subset_budget {
        let mut idx = sample(&mut r, n, k).into_vec();
        idx.sort_unstable();
        let w: Vec<u32> = idx.iter().map(|&i| verts[i]).collect();
        if !covered_by_star(&g, &w) && best.as_ref().is_none_or(|b| w < *b) {
            best = Some(w);
        }
    }
    match best {
        Some(witness) => Verdict::CriterionFails { witness },
        None => Verdict::Inconclusive { sampled: subset_budget },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_clique_complex, octahedral_sphere};
    use proptest::prelude::*;

    #[test]
    fn complete_graphs_are_certified() {
        for n in 1..=8u32 {
            let c = build_clique_complex(&SimpleGraph::complete(n), 2, 100_000).unwrap();
            for q in 0..=(n / 2).saturating_sub(1) {
                assert_eq!(barmak_check(&c, q, 1_000_000, 0), Verdict::CertifiedQConnected);
            }
        }
    }

    #[test]
    fn sphere_fixtures() {
        let s1 = octahedral_sphere(2).unwrap();
        assert_eq!(barmak_check(&s1, 1, 1000, 0), Verdict::CriterionFails { witness: vec![1, 2, 3, 4] });
        assert_eq!(barmak_check(&s1, 0, 1000, 0), Verdict::CertifiedQConnected);
        let s2 = octahedral_sphere(3).unwrap();
        assert_eq!(barmak_check(&s2, 2, 1000, 0), Verdict::CriterionFails { witness: vec![1, 2, 3, 4, 5, 6] });
    }

    #[test]
    fn sampling_above_budget() {
        // 20-cycle: two antipodal vertices have no common neighbour
        let c = build_clique_complex(&SimpleGraph::cycle(20), 2, 10_000).unwrap();
        assert!(matches!(barmak_check(&c, 0, 50, 1), Verdict::CriterionFails { .. }));
        let k = build_clique_complex(&SimpleGraph::complete(30), 1, 10_000).unwrap();
        assert_eq!(barmak_check(&k, 3, 100, 1), Verdict::Inconclusive { sampled: 100 });
    }

    #[test]
    fn combination_walk_is_exhaustive() {
        let mut idx = vec![0, 1, 2];
        let mut count = 1;
        while next_combination(&mut idx, 6) {
            count += 1;
        }
        assert_eq!(count, 20);
    }

    proptest! {
        #[test]
        fn reduction_matches_literal_star_containment(
            bits in proptest::collection::vec(prop::bool::weighted(0.6), 28),
            mask in 1u32..256,
        ) {
            let mut edges = Vec::new();
            let mut i = 0;
            for u in 1..=8u32 {
                for v in u + 1..=8 {
                    if bits[i] { edges.push((u, v)); }
                    i += 1;
                }
            }
            let g = SimpleGraph::from_edges(8, edges).unwrap();
            let c = build_clique_complex(&g, 7, 100_000).unwrap();
            let w: Vec<u32> = (1..=8).filter(|v| mask >> (v - 1) & 1 == 1).collect();
            prop_assert_eq!(covered_by_star(&g, &w), covered_by_star_literal(&c, &w));
        }
    }
}
