use super::boundary::Column;
use super::field::FieldSpec;

const NONE: u32 = u32::MAX;

/// Result of the standard left-to-right column reduction of one boundary matrix.
#[derive(Debug, Clone)]
pub struct Reduction {
    /// Lowest nonzero row of each reduced column, `None` for zero columns.
    low: Vec<Option<u32>>,
    /// `cum[k]` = nonzero reduced columns among the first `k`.
    cum: Vec<u64>,
}

impl Reduction {
    pub fn rank(&self) -> u64 {
        *self.cum.last().expect("cum has a leading zero")
    }

    /// Rank of the submatrix formed by the first `k` columns. Left-to-right
    /// reduction never looks right of the current column, so this is exact for
    /// every prefix.
    pub fn prefix_rank(&self, k: usize) -> u64 {
        self.cum[k.min(self.low.len())]
    }

    /// Rows that are the pivot of some reduced column. In a chain complex each
    /// such row indexes a column of the next lower boundary that reduces to zero.
    pub fn pivot_rows(&self) -> impl Iterator<Item = u32> + '_ {
        self.low.iter().filter_map(|l| *l)
    }

    pub fn low(&self, j: usize) -> Option<u32> {
        self.low[j]
    }
}

/// `a + s * b` over the field, both sorted by row.
fn axpy(a: &[(u32, u32)], s: u32, b: &[(u32, u32)], f: FieldSpec, out: &mut Column) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ra = a.get(i).map_or(NONE, |e| e.0);
        let rb = b.get(j).map_or(NONE, |e| e.0);
        if ra < rb {
            out.push(a[i]);
            i += 1;
        } else if rb < ra {
            out.push((rb, f.mul(s, b[j].1)));
            j += 1;
        } else {
            let v = f.add(a[i].1, f.mul(s, b[j].1));
            if v != 0 {
                out.push((ra, v));
            }
            i += 1;
            j += 1;
        }
    }
}

/// Standard column reduction with pivot at the lowest row. Columns flagged in
/// `cleared` are known to reduce to zero and are skipped.
pub fn reduce(mut cols: Vec<Column>, rows: usize, field: FieldSpec, cleared: Option<&[bool]>) -> Reduction {
    let n = cols.len();
    let mut pivot_of_row = vec![NONE; rows];
    let mut low = vec![None; n];
    let mut scratch: Column = Vec::new();
    for j in 0..n {
        if cleared.is_some_and(|c| c[j]) {
            cols[j] = Vec::new();
            continue;
        }
        loop {
            let Some(&(r, v)) = cols[j].last() else { break };
            let k = pivot_of_row[r as usize];
            if k == NONE {
                pivot_of_row[r as usize] = j as u32;
                low[j] = Some(r);
                break;
            }
            let (head, tail) = cols.split_at_mut(j);
            let pivot_col = &head[k as usize];
            let pv = pivot_col.last().expect("pivot column is nonzero").1;
            let s = field.neg(field.mul(v, field.inv(pv)));
            axpy(&tail[0], s, pivot_col, field, &mut scratch);
            std::mem::swap(&mut tail[0], &mut scratch);
        }
        // reduced columns are only read as pivots; free the rest early
        if low[j].is_none() {
            cols[j] = Vec::new();
        }
    }
    let mut cum = Vec::with_capacity(n + 1);
    cum.push(0);
    for l in &low {
        let last = *cum.last().expect("nonempty");
        cum.push(last + l.is_some() as u64);
    }
    Reduction { low, cum }
}
