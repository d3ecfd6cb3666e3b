use std::collections::BTreeMap;

use super::field::FieldSpec;
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};

/// A sparse column: `(row, coefficient)` pairs sorted by row, no zeros.
pub type Column = Vec<(u32, u32)>;

/// Signed boundary map `C_q -> C_{q-1}` over `GF(p)`. Rows and columns follow
/// the colex order of the complex's `(q-1)`- and `q`-simplices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryMatrix {
    q: usize,
    field: FieldSpec,
    rows: usize,
    cols: Vec<Column>,
}

impl BoundaryMatrix {
    /// `partial_q` for `q >= 1`. The column of `{x_0 < ... < x_q}` carries
    /// `(-1)^i` on the face omitting `x_i`.
    pub fn new(c: &SimplicialComplex, q: usize, field: FieldSpec) -> Result<Self> {
        Self::build(c, None, q, field)
    }

    /// Boundary of the quotient `C_*(c) / C_*(s)`: rows and columns of simplices
    /// of `s` are removed and the rest re-indexed in order.
    pub fn relative(c: &SimplicialComplex, s: &SimplicialComplex, q: usize, field: FieldSpec) -> Result<Self> {
        s.check_subcomplex_of(c)?;
        Self::build(c, Some(s), q, field)
    }

    fn build(c: &SimplicialComplex, s: Option<&SimplicialComplex>, q: usize, field: FieldSpec) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParams("boundary matrices start at q = 1".into()));
        }
        // row re-indexing for the quotient: position among faces outside s
        let row_map: Option<Vec<u32>> = s.map(|s| {
            let mut next = 0u32;
            c.simplices(q - 1)
                .map(|f| {
                    if s.contains(f) {
                        u32::MAX
                    } else {
                        next += 1;
                        next - 1
                    }
                })
                .collect()
        });
        let rows = match &row_map {
            Some(m) => m.iter().filter(|&&r| r != u32::MAX).count(),
            None => c.count(q - 1),
        };
        let mut cols = Vec::with_capacity(c.count(q));
        let mut face = vec![0u32; q];
        for simplex in c.simplices(q) {
            if s.is_some_and(|s| s.contains(simplex)) {
                continue;
            }
            let mut col = Vec::with_capacity(q + 1);
            for i in 0..=q {
                face[..i].copy_from_slice(&simplex[..i]);
                face[i..].copy_from_slice(&simplex[i + 1..]);
                let row = c.index_of(&face).ok_or_else(|| Error::MissingFace {
                    simplex: simplex.to_vec(),
                    face: face.clone(),
                })?;
                let row = match &row_map {
                    Some(m) if m[row] == u32::MAX => continue,
                    Some(m) => m[row],
                    None => row as u32,
                };
                col.push((row, field.sign(i)));
            }
            col.sort_unstable_by_key(|e| e.0);
            cols.push(col);
        }
        Ok(BoundaryMatrix { q, field, rows, cols })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &Column {
        &self.cols[j]
    }

    pub fn into_columns(self) -> Vec<Column> {
        self.cols
    }

    /// Whether `self * next` vanishes, where `next` is the boundary one
    /// dimension up.
    pub fn composes_to_zero(&self, next: &BoundaryMatrix) -> bool {
        assert_eq!(next.rows, self.cols.len(), "matrices are not composable");
        let f = self.field;
        next.cols.iter().all(|col| {
            let mut acc: BTreeMap<u32, u32> = BTreeMap::new();
            for &(mid, a) in col {
                for &(row, b) in &self.cols[mid as usize] {
                    let e = acc.entry(row).or_insert(0);
                    *e = f.add(*e, f.mul(a, b));
                }
            }
            acc.values().all(|&v| v == 0)
        })
    }
}

/// `partial_1, ..., partial_cap` of `c`.
pub fn boundary_matrices(c: &SimplicialComplex, field: FieldSpec) -> Result<Vec<BoundaryMatrix>> {
    (1..=c.dim_cap()).map(|q| BoundaryMatrix::new(c, q, field)).collect()
}

/// Check `partial_q partial_{q+1} = 0` for every `q` of `c`.
pub fn check_boundary_squared(c: &SimplicialComplex, field: FieldSpec) -> Result<bool> {
    let ms = boundary_matrices(c, field)?;
    Ok(ms.windows(2).all(|w| w[0].composes_to_zero(&w[1])))
}
