//! Exhaustive search over small lower links for the `b_IK` indicator, checked
//! against relative Betti numbers obtained from a coned complex.

use paclique::complex::{build_clique_complex, octahedral_sphere, SimpleGraph, SimplicialComplex};
use paclique::homology::{b_ik_indicator, betti_dense_oracle, relative_betti, FieldSpec};

const APEX: u32 = 100;

/// `beta_q(L, S) = beta_q(L with a cone over S)` for `q >= 1`.
fn relative_via_cone(l: &SimplicialComplex, s: &SimplicialComplex, q: usize, f: FieldSpec) -> u64 {
    let cap = l.dim_cap().max(s.dim_cap() + 1);
    let mut facets: Vec<Vec<u32>> = Vec::new();
    for d in 0..=l.dim_cap() {
        facets.extend(l.simplices(d).map(|x| x.to_vec()));
    }
    for d in 0..=s.dim_cap() {
        for x in s.simplices(d) {
            let mut y = x.to_vec();
            y.push(APEX);
            facets.push(y);
        }
    }
    let mut coned = SimplicialComplex::closure(facets);
    coned.pad_to_cap(cap);
    betti_dense_oracle(&coned, f).unwrap().get(q).unwrap_or(0)
}

/// Square 1-2-3-4 with pole `s = 5` over it and `t = 8` last. Free edges: the
/// optional neighbours 6 and 7 of every earlier vertex and of each other, and
/// which of 5, 6, 7 the node `t` sees.
fn configurations() -> impl Iterator<Item = SimpleGraph> {
    let square = [(1, 2), (2, 3), (3, 4), (1, 4)];
    let pole = (1..=4).map(|v| (v, 5));
    let fixed: Vec<(u32, u32)> = square.into_iter().chain(pole).chain((1..=4).map(|v| (v, 8))).collect();
    let mut free: Vec<(u32, u32)> = Vec::new();
    for a in [6u32, 7] {
        free.extend((1..=5).map(|v| (v, a)));
    }
    free.extend([(6, 7), (5, 8), (6, 8), (7, 8)]);
    (0u32..1 << free.len()).map(move |mask| {
        let chosen = free.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| *e);
        SimpleGraph::from_edges(8, fixed.iter().copied().chain(chosen)).unwrap()
    })
}

#[test]
fn indicator_agrees_with_coned_oracle_over_all_small_links() {
    let f = FieldSpec::GF2;
    let sphere = octahedral_sphere(2).unwrap();
    let (mut ones, mut zeros) = (0u32, 0u32);
    for g in configurations() {
        let c = build_clique_complex(&g, 4, 100_000).unwrap();
        let got = b_ik_indicator(&c, &sphere, 5, 8, 2, f).unwrap();
        let link = c.restrict_to(8).link(8).unwrap();
        assert_eq!(relative_betti(&link, &sphere, f, 2).unwrap(), relative_via_cone(&link, &sphere, 2, f));
        let expected = (relative_via_cone(&link, &sphere, 2, f) > 0) as u8;
        assert_eq!(got, expected, "edges {:?}", g.edges().collect::<Vec<_>>());
        if got == 1 { ones += 1 } else { zeros += 1 }
    }
    assert!(ones > 0 && zeros > 0, "ones {ones}, zeros {zeros}");
}

#[test]
fn coned_square_link_carries_a_relative_class() {
    let f = FieldSpec::GF2;
    let sphere = octahedral_sphere(2).unwrap();
    let mut edges = vec![(1, 2), (2, 3), (3, 4), (1, 4)];
    edges.extend((1..=5).map(|v| (v, 6)));
    edges.extend((1..=4).map(|v| (v, 5)));
    let g = SimpleGraph::from_edges(6, edges.clone()).unwrap();
    let c = build_clique_complex(&g, 4, 1000).unwrap();
    assert_eq!(b_ik_indicator(&c, &sphere, 5, 6, 2, f).unwrap(), 1);

    edges.retain(|&e| e != (5, 6));
    let g = SimpleGraph::from_edges(6, edges).unwrap();
    let c = build_clique_complex(&g, 4, 1000).unwrap();
    assert_eq!(b_ik_indicator(&c, &sphere, 5, 6, 2, f).unwrap(), 0);
}
