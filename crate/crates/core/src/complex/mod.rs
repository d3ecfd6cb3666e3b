//! Simple graphs, clique complexes, octahedral spheres and the star-covering
//! criterion.

mod barmak;
mod simple;
mod simplicial;
mod sphere;

pub use barmak::{barmak_check, covered_by_star, covered_by_star_literal, Verdict};
pub use simple::{collapse, common_neighbors, SimpleGraph};
pub use simplicial::{build_clique_complex, colex_cmp, SimplicialComplex, DEFAULT_SIMPLEX_BUDGET};
pub(crate) use simplicial::clique_complex_with_cap;
pub use sphere::{
    find_induced_sphere, is_octahedral_pattern, octahedral_graph, octahedral_sphere, DEFAULT_SEARCH_BUDGET,
};
