//! Brackets, structure constants and the Killing form of a derivation basis.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::dersolve::{DerivationBasis, DerivationMatrix};
use crate::linalg::{Echelon, SpanSolver, SparseRow};
use crate::scalars::{FieldSpec, Scalar, ScalarError};

#[derive(Debug, Error)]
pub enum LieError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("bracket [D{}, D{}] is not in the span", .0 + 1, .1 + 1)]
    NotClosed(usize, usize),
    #[error("basis is linearly dependent")]
    Dependent,
}

/// Commutator `A·B − B·A`.
pub fn bracket(a: &DerivationMatrix, b: &DerivationMatrix) -> Result<DerivationMatrix, ScalarError> {
    a.checked_mul(b)?.checked_sub(&b.checked_mul(a)?)
}

/// `trace(A·B)` on the 27-dimensional module. Not the Killing form.
pub fn trace_form_27(a: &DerivationMatrix, b: &DerivationMatrix) -> Result<Scalar, ScalarError> {
    Ok(a.checked_mul(b)?.trace())
}

/// `[D_i, D_j] = Σ_k c(i,j,k) D_k`, stored for `i < j` with zeros omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    /// Label of the basis, e.g. `"paper"` or `"solver"`.
    pub basis: String,
    pub field: FieldSpec,
    pub dim: usize,
    /// `table[i][j]` for `i < j`: sparse `(k, c)` list; empty for `i >= j`.
    table: Vec<Vec<SparseRow<Scalar>>>,
}

impl StructureConstants {
    /// Sparse expansion of `[D_i, D_j]`, with antisymmetry applied.
    pub fn bracket_terms(&self, i: usize, j: usize) -> SparseRow<Scalar> {
        if i < j {
            self.table[i][j].clone()
        } else if i > j {
            self.table[j][i].iter().map(|(k, c)| (*k, -c.clone())).collect()
        } else {
            Vec::new()
        }
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.bracket_terms(i, j)
            .into_iter()
            .find(|e| e.0 == k)
            .map_or_else(|| self.field.zero(), |e| e.1)
    }

    /// Nonzero `(i, j, k, c)` with `i < j`, lexicographic, 0-based.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Scalar)> {
        self.table.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .flat_map(move |(j, t)| t.iter().map(move |(k, c)| (i, j, k.to_owned(), c)))
        })
    }

    pub fn nnz(&self) -> usize {
        self.entries().count()
    }

    /// `[x, y]` for coordinate vectors.
    pub fn bracket_coords(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim];
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let w = &x[i] * &y[j] - &x[j] * &y[i];
                if w.is_zero() {
                    continue;
                }
                for (k, c) in &self.table[i][j] {
                    out[*k] = out[*k].clone() + &w * c;
                }
            }
        }
        out
    }

    /// Same constants read in another field. Fails on a denominator divisible
    /// by its characteristic.
    pub fn reduce_to(&self, field: &FieldSpec) -> Result<Self, ScalarError> {
        let conv = |c: &Scalar| -> Result<Scalar, ScalarError> {
            match c.as_rational() {
                Some(q) => Scalar::from_rational(field, q),
                None => field.parse(&c.to_string()),
            }
        };
        let table = self
            .table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|t| {
                        let mut out = Vec::new();
                        for (k, c) in t {
                            let v = conv(c)?;
                            if !v.is_zero() {
                                out.push((*k, v));
                            }
                        }
                        Ok(out)
                    })
                    .collect::<Result<Vec<_>, ScalarError>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(StructureConstants {
            basis: self.basis.clone(),
            field: field.clone(),
            dim: self.dim,
            table,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

struct Entries<'a>(&'a StructureConstants);

impl Serialize for Entries<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(
            self.0
                .entries()
                .map(|(i, j, k, c)| (i + 1, j + 1, k + 1, c.to_string())),
        )
    }
}

impl Serialize for StructureConstants {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("StructureConstants", 3)?;
        st.serialize_field("basis", &self.basis)?;
        st.serialize_field("field", &self.field)?;
        st.serialize_field("entries", &Entries(self))?;
        st.end()
    }
}

/// Expresses every bracket `[D_i, D_j]`, `i < j`, in the basis.
pub fn structure_constants(
    basis: &DerivationBasis,
    label: &str,
) -> Result<StructureConstants, LieError> {
    let n = basis.dim();
    let field = &basis.field;
    let fam: Vec<_> = basis.basis.iter().map(DerivationMatrix::to_sparse).collect();
    let solver = SpanSolver::new(field.clone(), crate::dersolve::UNKNOWNS, &fam);
    if !solver.is_independent() {
        return Err(LieError::Dependent);
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let solved: Vec<Result<SparseRow<Scalar>, LieError>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let b = bracket(&basis.basis[i], &basis.basis[j])?;
            let c = solver.coordinates(&b.to_sparse()).ok_or(LieError::NotClosed(i, j))?;
            Ok(crate::linalg::sparse(&c))
        })
        .collect();
    let mut table = vec![vec![Vec::new(); n]; n];
    for (&(i, j), r) in pairs.iter().zip(solved) {
        table[i][j] = r?;
    }
    Ok(StructureConstants {
        basis: label.to_string(),
        field: field.clone(),
        dim: n,
        table,
    })
}

/// First triple `i < j < k` whose Jacobi sum is nonzero, if any.
pub fn jacobi_violation(sc: &StructureConstants) -> Option<(usize, usize, usize)> {
    let n = sc.dim;
    let full: Vec<Vec<SparseRow<Scalar>>> = (0..n)
        .map(|i| (0..n).map(|j| sc.bracket_terms(i, j)).collect())
        .collect();
    let triples: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| (i, j, k))))
        .collect();
    triples.into_par_iter().find_first(|&(i, j, k)| {
        let mut acc = vec![sc.field.zero(); n];
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            for (m, x) in &full[a][b] {
                for (p, y) in &full[*m][c] {
                    acc[*p] = acc[*p].clone() + x * y;
                }
            }
        }
        acc.iter().any(|s| !s.is_zero())
    })
}

/// Gram matrix of the Killing form in the basis of the structure constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KillingGram {
    pub field: FieldSpec,
    pub matrix: Vec<Vec<Scalar>>,
}

/// `κ_ij = Σ_{k,l} c(i,l,k)·c(j,k,l)`.
pub fn killing(sc: &StructureConstants) -> KillingGram {
    let n = sc.dim;
    // ad[i][l] = sparse column of ad_i applied to D_l
    let ad: Vec<Vec<SparseRow<Scalar>>> = (0..n)
        .map(|i| (0..n).map(|l| sc.bracket_terms(i, l)).collect())
        .collect();
    let entry = |i: usize, j: usize| -> Scalar {
        let mut s = sc.field.zero();
        for (l, col) in ad[i].iter().enumerate() {
            for (k, c) in col {
                for (l2, d) in &ad[j][*k] {
                    if *l2 == l {
                        s = s + c * d;
                    }
                }
            }
        }
        s
    };
    let upper: Vec<Vec<Scalar>> = (0..n).map(|i| (i..n).map(|j| entry(i, j)).collect()).collect();
    let matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i <= j { upper[i][j - i].clone() } else { upper[j][i - j].clone() })
                .collect()
        })
        .collect();
    KillingGram {
        field: sc.field.clone(),
        matrix,
    }
}

impl KillingGram {
    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..i).all(|j| self.matrix[i][j] == self.matrix[j][i]))
    }

    /// `κ(x, y)` for coordinate vectors.
    pub fn eval(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let mut s = self.field.zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    s = s + xi * &self.matrix[i][j] * yj;
                }
            }
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.matrix).expect("serializable")
    }
}

pub fn killing_rank(g: &KillingGram) -> usize {
    let mut e = Echelon::new(g.field.clone(), g.dim());
    for r in &g.matrix {
        e.insert(&crate::linalg::sparse(r));
    }
    e.rank()
}

/// Coordinates of each member of `target` in `basis`, or `None` if some
/// member lies outside the span.
pub fn change_of_basis(basis: &DerivationBasis, target: &DerivationBasis) -> Option<Vec<Vec<Scalar>>> {
    let fam: Vec<_> = basis.basis.iter().map(DerivationMatrix::to_sparse).collect();
    let s = SpanSolver::new(basis.field.clone(), crate::dersolve::UNKNOWNS, &fam);
    target
        .basis
        .iter()
        .map(|d| s.coordinates(&d.to_sparse()))
        .collect()
}

/// Map of nonzero Gram entries, for compact reports.
pub fn gram_entries(g: &KillingGram) -> BTreeMap<(usize, usize), Scalar> {
    let mut out = BTreeMap::new();
    for (i, row) in g.matrix.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !v.is_zero() {
                out.insert((i, j), v.clone());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_antisymmetric() {
        let f = FieldSpec::gf(7);
        let a = DerivationMatrix::from_fn(&f, |r, c| Scalar::from_i64(&f, (r * 3 + c) as i64 % 5));
        let b = DerivationMatrix::from_fn(&f, |r, c| Scalar::from_i64(&f, (r + 2 * c) as i64 % 3));
        assert!(bracket(&a, &a).unwrap().is_zero());
        let s = bracket(&a, &b).unwrap().checked_add(&bracket(&b, &a).unwrap()).unwrap();
        assert!(s.is_zero());
        assert!(bracket(&a, &DerivationMatrix::zero(&FieldSpec::gf(5))).is_err());
    }

    #[test]
    fn non_closed_pair_named() {
        let f = FieldSpec::Rationals;
        let mut e12 = DerivationMatrix::zero(&f);
        e12.set(0, 1, f.one());
        let mut e21 = DerivationMatrix::zero(&f);
        e21.set(1, 0, f.one());
        let basis = DerivationBasis {
            field: f,
            basis: vec![e12, e21],
        };
        let err = structure_constants(&basis, "test").unwrap_err();
        assert!(matches!(err, LieError::NotClosed(0, 1)));
        assert_eq!(err.to_string(), "bracket [D1, D2] is not in the span");
    }

    #[test]
    fn sl2_constants() {
        let f = FieldSpec::Rationals;
        let mut e = DerivationMatrix::zero(&f);
        e.set(0, 1, f.one());
        let mut fm = DerivationMatrix::zero(&f);
        fm.set(1, 0, f.one());
        let h = bracket(&e, &fm).unwrap();
        let basis = DerivationBasis {
            field: f.clone(),
            basis: vec![e, fm, h],
        };
        let sc = structure_constants(&basis, "sl2").unwrap();
        let two = Scalar::from_i64(&f, 2);
        assert_eq!(sc.get(0, 1, 2), f.one());
        assert_eq!(sc.get(0, 2, 0), -two.clone());
        assert_eq!(sc.get(2, 0, 0), two);
        assert!(jacobi_violation(&sc).is_none());
        let k = killing(&sc);
        assert!(k.is_symmetric());
        assert_eq!(killing_rank(&k), 3);
        // κ(h, h) = 8 for sl2
        assert_eq!(k.matrix[2][2], Scalar::from_i64(&f, 8));
        let json = sc.to_json();
        assert!(json.starts_with(r#"{"basis":"sl2","field":{"kind":"Q"},"entries":[[1,2,3,"1"]"#));
        let k2 = killing(&sc.reduce_to(&FieldSpec::gf(2)).unwrap());
        assert_eq!(killing_rank(&k2), 0);
    }
}
