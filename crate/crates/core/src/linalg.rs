//! Exact sparse Gauss–Jordan elimination.
//!
//! [`Echelon`] keeps a fully reduced row echelon form and accepts rows one at
//! a time. Every stored row has a leading 1 and no entries in any other pivot
//! column, so the final state is the unique RREF of the inserted rows no
//! matter how they were ordered.

use crate::scalars::Field;

/// Sparse row: `(column, value)` pairs, strictly increasing columns, no zeros.
pub type SparseRow<F> = Vec<(usize, F)>;

/// Sparse form of a dense slice.
pub fn sparse<F: Field>(dense: &[F]) -> SparseRow<F> {
    dense
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero_elem())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

/// Dense form of a sparse row.
pub fn dense<F: Field>(ctx: &F::Ctx, row: &[(usize, F)], ncols: usize) -> Vec<F> {
    let mut out = vec![F::zero(ctx); ncols];
    for (c, x) in row {
        out[*c] = x.clone();
    }
    out
}

/// `a − k·b` for sparse rows.
fn axpy<F: Field>(a: &[(usize, F)], k: &F, b: &[(usize, F)]) -> SparseRow<F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map_or(usize::MAX, |e| e.0);
        let cb = b.get(j).map_or(usize::MAX, |e| e.0);
        if ca < cb {
            out.push(a[i].clone());
            i += 1;
        } else if cb < ca {
            out.push((cb, -(k.clone() * b[j].1.clone())));
            j += 1;
        } else {
            let v = a[i].1.clone() - k.clone() * b[j].1.clone();
            if !v.is_zero_elem() {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn entry<F: Field>(row: &[(usize, F)], col: usize) -> Option<&F> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|i| &row[i].1)
}

/// Incremental reduced row echelon form.
#[derive(Debug, Clone)]
pub struct Echelon<F: Field> {
    ctx: F::Ctx,
    ncols: usize,
    rows: Vec<SparseRow<F>>,
    row_of_pivot: Vec<Option<usize>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(ctx: F::Ctx, ncols: usize) -> Self {
        Echelon {
            ctx,
            ncols,
            rows: Vec::new(),
            row_of_pivot: vec![None; ncols],
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Pivot columns in increasing order.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.row_of_pivot[c].is_some()).collect()
    }

    /// Non-pivot columns in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.row_of_pivot[c].is_none()).collect()
    }

    /// Reduced rows sorted by pivot column.
    pub fn rows(&self) -> Vec<&SparseRow<F>> {
        self.row_of_pivot.iter().flatten().map(|&r| &self.rows[r]).collect()
    }

    /// Remainder of `row` after clearing every pivot column.
    pub fn reduce(&self, row: &[(usize, F)]) -> SparseRow<F> {
        let mut r: SparseRow<F> = row.to_vec();
        let mut pos = 0;
        while pos < r.len() {
            let (c, k) = r[pos].clone();
            match self.row_of_pivot[c] {
                Some(p) => {
                    // pivot rows carry nothing left of their pivot, so the
                    // prefix r[..pos] is untouched
                    r = axpy(&r, &k, &self.rows[p]);
                }
                None => pos += 1,
            }
        }
        r
    }

    pub fn contains(&self, row: &[(usize, F)]) -> bool {
        self.reduce(row).is_empty()
    }

    /// Adds a row; returns `true` iff the rank grew.
    pub fn insert(&mut self, row: &[(usize, F)]) -> bool {
        let r = self.reduce(row);
        let Some((c, lead)) = r.first().cloned() else {
            return false;
        };
        let inv = lead.try_inv().expect("nonzero field element is invertible");
        let r: SparseRow<F> = r.into_iter().map(|(j, x)| (j, inv.clone() * x)).collect();
        for other in &mut self.rows {
            if let Some(k) = entry(other, c).cloned() {
                *other = axpy(other, &k, &r);
            }
        }
        self.row_of_pivot[c] = Some(self.rows.len());
        self.rows.push(r);
        true
    }

    /// Kernel basis: one vector per free column, ascending, with that free
    /// column set to 1 and every other free column 0.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = vec![F::zero(&self.ctx); self.ncols];
                v[f] = F::one(&self.ctx);
                for (c, p) in self.row_of_pivot.iter().enumerate() {
                    if let Some(p) = p {
                        if let Some(x) = entry(&self.rows[*p], f) {
                            v[c] = -x.clone();
                        }
                    }
                }
                v
            })
            .collect()
    }
}

/// Rank of a list of rows.
pub fn rank<F: Field>(ctx: &F::Ctx, ncols: usize, rows: &[SparseRow<F>]) -> usize {
    let mut e = Echelon::new(ctx.clone(), ncols);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Expresses vectors in the span of a fixed family.
///
/// Internally reduces the augmented rows `(b_i | e_i)`: a target `v` lies in
/// the span iff `(v | 0)` reduces to `(0 | −c)`, and then `v = Σ c_i b_i`.
#[derive(Debug, Clone)]
pub struct SpanSolver<F: Field> {
    ctx: F::Ctx,
    width: usize,
    len: usize,
    ech: Echelon<F>,
    independent: bool,
}

impl<F: Field> SpanSolver<F> {
    pub fn new(ctx: F::Ctx, width: usize, family: &[SparseRow<F>]) -> Self {
        let len = family.len();
        let mut ech = Echelon::new(ctx.clone(), width + len);
        let mut independent = true;
        for (i, b) in family.iter().enumerate() {
            let mut r = b.clone();
            r.push((width + i, F::one(&ctx)));
            ech.insert(&r);
            // a dependent family leaves a pivot in the tag columns
            if ech.row_of_pivot[..width].iter().flatten().count() != i + 1 {
                independent = false;
            }
        }
        SpanSolver {
            ctx,
            width,
            len,
            ech,
            independent,
        }
    }

    /// True iff the family is linearly independent.
    pub fn is_independent(&self) -> bool {
        self.independent
    }

    pub fn rank(&self) -> usize {
        self.ech.row_of_pivot[..self.width].iter().flatten().count()
    }

    /// Coefficients `c` with `v = Σ c_i b_i`, or `None` if `v` is outside the span.
    ///
    /// For a dependent family the returned combination is one valid choice.
    pub fn coordinates(&self, v: &[(usize, F)]) -> Option<Vec<F>> {
        let r = self.ech.reduce(v);
        if r.first().is_some_and(|(c, _)| *c < self.width) {
            return None;
        }
        let mut out = vec![F::zero(&self.ctx); self.len];
        for (c, x) in r {
            out[c - self.width] = -x;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{FieldSpec, Scalar};

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn row(f: &FieldSpec, xs: &[i64]) -> SparseRow<Scalar> {
        sparse(&xs.iter().map(|&x| Scalar::from_i64(f, x)).collect::<Vec<_>>())
    }

    #[test]
    fn rref_small() {
        let f = q();
        let mut e = Echelon::new(f.clone(), 4);
        assert!(e.insert(&row(&f, &[0, 2, 4, 2])));
        assert!(e.insert(&row(&f, &[1, 1, 0, 0])));
        assert!(!e.insert(&row(&f, &[2, 4, 4, 2])));
        assert_eq!(e.rank(), 2);
        assert_eq!(e.pivots(), [0, 1]);
        let ns = e.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in [[0, 2, 4, 2], [1, 1, 0, 0]] {
                let s = r
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| acc + Scalar::from_i64(&f, *a) * b.clone());
                assert!(s.is_zero());
            }
        }
        // free columns 2 and 3 → x = (2, −2, 1, 0) and (1, −1, 0, 1)
        assert_eq!(ns[0], row_dense(&f, &[2, -2, 1, 0]));
        assert_eq!(ns[1], row_dense(&f, &[1, -1, 0, 1]));
    }

    fn row_dense(f: &FieldSpec, xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::from_i64(f, x)).collect()
    }

    #[test]
    fn order_independent() {
        let f = FieldSpec::gf(7);
        let rows = [
            row(&f, &[1, 2, 3, 4, 5]),
            row(&f, &[0, 1, 1, 0, 3]),
            row(&f, &[2, 0, 1, 1, 1]),
        ];
        let mut a = Echelon::new(f.clone(), 5);
        let mut b = Echelon::new(f.clone(), 5);
        for r in &rows {
            a.insert(r);
        }
        for r in rows.iter().rev() {
            b.insert(r);
        }
        assert_eq!(a.rows(), b.rows());
    }

    #[test]
    fn char_two_rank_drop() {
        let f = FieldSpec::gf(2);
        assert_eq!(rank(&f, 2, &[row(&f, &[1, 1]), row(&f, &[1, 3])]), 1);
        let f = q();
        assert_eq!(rank(&f, 2, &[row(&f, &[1, 1]), row(&f, &[1, 3])]), 2);
    }

    #[test]
    fn span_coordinates() {
        let f = q();
        let fam = [row(&f, &[1, 0, 1]), row(&f, &[0, 1, 1])];
        let s = SpanSolver::new(f.clone(), 3, &fam);
        assert!(s.is_independent());
        assert_eq!(s.coordinates(&row(&f, &[2, -3, -1])), Some(row_dense(&f, &[2, -3])));
        assert_eq!(s.coordinates(&row(&f, &[0, 0, 1])), None);
        let dep = SpanSolver::new(f.clone(), 3, &[fam[0].clone(), fam[0].clone()]);
        assert!(!dep.is_independent());
        assert_eq!(dep.rank(), 1);
    }
}
