//! Derivations of the Albert algebra as the nullspace of a linear system.
//!
//! A derivation `D` is unknown in 729 scalars, 27 per basis element. The
//! constraints are `D(1) = 0`, the quadratic rows
//! `D(U_b y) = {Db, y, b} + U_b(Dy)` over all basis pairs and the bilinear
//! rows `D{bi,y,bj} = {Dbi,y,bj} + {bi,Dy,bj} + {bi,y,Dbj}` over `i < j`.
//! All coefficients are integers, computed once and embedded into the field.

use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::albert::{AlbertElement, BasisElement, Coord27, DIM};
use crate::linalg::{self, Echelon, SparseRow};
use crate::scalars::{FieldSpec, Scalar, ScalarError};

/// Number of unknowns.
pub const UNKNOWNS: usize = DIM * DIM;

/// Column layout of the unknowns: basis-element-major, slot-minor.
#[derive(Debug, Clone, Copy, Default)]
pub struct UnknownLayout;

impl UnknownLayout {
    /// 1-based column of slot `slot` (1-based) of `D(b)`.
    pub fn index(b: BasisElement, slot: usize) -> usize {
        assert!((1..=DIM).contains(&slot), "slot {slot} out of range");
        b.index() * DIM + slot
    }

    /// 0-based column of 0-based slot `slot` of `D(b)`.
    pub fn column(b: BasisElement, slot: usize) -> usize {
        b.index() * DIM + slot
    }

    /// Inverse of [`UnknownLayout::column`].
    pub fn decode(col: usize) -> (BasisElement, usize) {
        (BasisElement::from_index(col / DIM), col % DIM)
    }
}

/// Integer structure tensors of `U` and `T` on the basis.
pub struct JordanTables {
    /// `u[b][y][s]`: slot `s` of `U_b y`.
    u: Vec<[i64; DIM]>,
    /// `t[x][y][z][s]`: slot `s` of `{x, y, z}`.
    t: Vec<[i64; DIM]>,
}

impl JordanTables {
    pub fn new() -> Self {
        let bas: Vec<AlbertElement<i64>> = BasisElement::all()
            .map(|b| AlbertElement::basis(&(), b))
            .collect();
        let mut u = Vec::with_capacity(DIM * DIM);
        for b in &bas {
            for y in &bas {
                u.push(b.u_op(y).coords().0);
            }
        }
        let t = (0..DIM * DIM * DIM)
            .into_par_iter()
            .map(|n| {
                let (x, y, z) = (n / (DIM * DIM), (n / DIM) % DIM, n % DIM);
                bas[x].triple(&bas[y], &bas[z]).coords().0
            })
            .collect();
        JordanTables { u, t }
    }

    pub fn u(&self, b: usize, y: usize) -> &[i64; DIM] {
        &self.u[b * DIM + y]
    }

    pub fn t(&self, x: usize, y: usize, z: usize) -> &[i64; DIM] {
        &self.t[(x * DIM + y) * DIM + z]
    }
}

impl Default for JordanTables {
    fn default() -> Self {
        Self::new()
    }
}

/// Where a constraint row comes from. Slots are 0-based output coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Unit { slot: usize },
    Quadratic { b: BasisElement, y: BasisElement, slot: usize },
    Bilinear { bi: BasisElement, bj: BasisElement, y: BasisElement, slot: usize },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Unit { slot } => write!(f, "unit[{}]", slot + 1),
            Provenance::Quadratic { b, y, slot } => write!(f, "quadratic({b}, {y})[{}]", slot + 1),
            Provenance::Bilinear { bi, bj, y, slot } => {
                write!(f, "bilinear({bi}, {bj}, {y})[{}]", slot + 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintRow {
    pub provenance: Provenance,
    /// Integer coefficients, sorted by column, no zeros.
    pub entries: Vec<(usize, i64)>,
}

impl ConstraintRow {
    fn build(provenance: Provenance, mut acc: Vec<(usize, i64)>) -> Self {
        acc.sort_unstable_by_key(|e| e.0);
        let mut entries: Vec<(usize, i64)> = Vec::with_capacity(acc.len());
        for (c, v) in acc {
            match entries.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => entries.push((c, v)),
            }
        }
        entries.retain(|e| e.1 != 0);
        ConstraintRow { provenance, entries }
    }

    pub fn to_field(&self, field: &FieldSpec) -> SparseRow<Scalar> {
        self.entries
            .iter()
            .map(|&(c, v)| (c, Scalar::from_i64(field, v)))
            .filter(|e| !e.1.is_zero())
            .collect()
    }
}

/// The homogeneous system whose solutions are the derivations.
///
/// Coefficients are kept as integers; [`ConstraintSystem::field`] names the
/// field they are read in.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    pub field: FieldSpec,
    pub rows: Vec<ConstraintRow>,
}

fn quadratic_rows(tab: &JordanTables, b: usize, y: usize) -> Vec<ConstraintRow> {
    let (bb, yb) = (BasisElement::from_index(b), BasisElement::from_index(y));
    let uby = tab.u(b, y);
    (0..DIM)
        .map(|r| {
            let mut acc = Vec::new();
            for (k, &c) in uby.iter().enumerate() {
                if c != 0 {
                    acc.push((k * DIM + r, c));
                }
            }
            for s in 0..DIM {
                let c = tab.t(s, y, b)[r];
                if c != 0 {
                    acc.push((b * DIM + s, -c));
                }
                let c = tab.u(b, s)[r];
                if c != 0 {
                    acc.push((y * DIM + s, -c));
                }
            }
            ConstraintRow::build(Provenance::Quadratic { b: bb, y: yb, slot: r }, acc)
        })
        .collect()
}

fn bilinear_rows(tab: &JordanTables, i: usize, j: usize, y: usize) -> Vec<ConstraintRow> {
    let (bi, bj, yb) = (
        BasisElement::from_index(i),
        BasisElement::from_index(j),
        BasisElement::from_index(y),
    );
    let tiyj = tab.t(i, y, j);
    (0..DIM)
        .map(|r| {
            let mut acc = Vec::new();
            for (k, &c) in tiyj.iter().enumerate() {
                if c != 0 {
                    acc.push((k * DIM + r, c));
                }
            }
            for s in 0..DIM {
                let c = tab.t(s, y, j)[r];
                if c != 0 {
                    acc.push((i * DIM + s, -c));
                }
                let c = tab.t(i, s, j)[r];
                if c != 0 {
                    acc.push((y * DIM + s, -c));
                }
                let c = tab.t(i, y, s)[r];
                if c != 0 {
                    acc.push((j * DIM + s, -c));
                }
            }
            ConstraintRow::build(Provenance::Bilinear { bi, bj, y: yb, slot: r }, acc)
        })
        .collect()
}

/// Builds the full constraint system: 27 unit rows, 27³ quadratic rows and
/// C(27,2)·27² bilinear rows, in that order.
pub fn assemble_constraints(field: &FieldSpec) -> ConstraintSystem {
    let tab = JordanTables::new();
    let mut rows: Vec<ConstraintRow> = (0..DIM)
        .map(|r| {
            let acc = (0..3).map(|i| (i * DIM + r, 1)).collect();
            ConstraintRow::build(Provenance::Unit { slot: r }, acc)
        })
        .collect();
    let quad: Vec<ConstraintRow> = (0..DIM * DIM)
        .into_par_iter()
        .flat_map_iter(|n| quadratic_rows(&tab, n / DIM, n % DIM))
        .collect();
    rows.extend(quad);
    let pairs: Vec<(usize, usize, usize)> = (0..DIM)
        .flat_map(|i| (i + 1..DIM).flat_map(move |j| (0..DIM).map(move |y| (i, j, y))))
        .collect();
    let bil: Vec<ConstraintRow> = pairs
        .into_par_iter()
        .flat_map_iter(|(i, j, y)| bilinear_rows(&tab, i, j, y))
        .collect();
    rows.extend(bil);
    ConstraintSystem {
        field: field.clone(),
        rows,
    }
}

impl ConstraintSystem {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.entries.len()).sum()
    }

    /// Matrix-market style dump, 1-indexed `row col value` triplets.
    pub fn write_triplets<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "%%MatrixMarket matrix coordinate integer general")?;
        writeln!(w, "% field {}", self.field)?;
        writeln!(w, "{} {} {}", self.rows.len(), UNKNOWNS, self.nnz())?;
        for (i, r) in self.rows.iter().enumerate() {
            for (c, v) in &r.entries {
                writeln!(w, "{} {} {}", i + 1, c + 1, v)?;
            }
        }
        Ok(())
    }

    /// First row violated by `d`, if any.
    pub fn first_violation(&self, d: &DerivationMatrix) -> Option<Provenance> {
        let x = d.to_unknowns();
        let f = &self.field;
        self.rows
            .iter()
            .find(|r| {
                let s = r
                    .entries
                    .iter()
                    .fold(f.zero(), |acc, &(c, v)| acc + Scalar::from_i64(f, v) * &x[c]);
                !s.is_zero()
            })
            .map(|r| r.provenance)
    }

    /// Reduced row echelon form of the system.
    pub fn echelon(&self) -> Echelon<Scalar> {
        let mut e = Echelon::new(self.field.clone(), UNKNOWNS);
        for r in &self.rows {
            if !r.entries.is_empty() {
                e.insert(&r.to_field(&self.field));
            }
        }
        e
    }
}

/// `true` iff `d` satisfies every row of `sys` exactly.
pub fn is_derivation(d: &DerivationMatrix, sys: &ConstraintSystem) -> bool {
    d.field == sys.field && sys.first_violation(d).is_none()
}

/// A 27×27 matrix acting on column tuples; column `k` is `D(b_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DerivationMatrix {
    pub field: FieldSpec,
    /// Row-major entries.
    entries: Vec<Scalar>,
}

impl DerivationMatrix {
    pub fn zero(field: &FieldSpec) -> Self {
        DerivationMatrix {
            field: field.clone(),
            entries: vec![field.zero(); DIM * DIM],
        }
    }

    pub fn identity(field: &FieldSpec) -> Self {
        let mut m = Self::zero(field);
        for i in 0..DIM {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(field: &FieldSpec, f: impl Fn(usize, usize) -> Scalar) -> Self {
        let entries = (0..DIM * DIM).map(|n| f(n / DIM, n % DIM)).collect();
        DerivationMatrix {
            field: field.clone(),
            entries,
        }
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * DIM + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Scalar) {
        self.entries[r * DIM + c] = x;
    }

    /// From the 729 unknowns in [`UnknownLayout`] order.
    pub fn from_unknowns(field: &FieldSpec, x: &[Scalar]) -> Self {
        assert_eq!(x.len(), UNKNOWNS);
        Self::from_fn(field, |r, c| x[c * DIM + r].clone())
    }

    pub fn to_unknowns(&self) -> Vec<Scalar> {
        (0..UNKNOWNS)
            .map(|n| self.get(n % DIM, n / DIM).clone())
            .collect()
    }

    pub fn to_sparse(&self) -> SparseRow<Scalar> {
        linalg::sparse(&self.to_unknowns())
    }

    /// Image of the basis element `b`.
    pub fn column(&self, b: BasisElement) -> Coord27 {
        let k = b.index();
        Coord27(std::array::from_fn(|r| self.get(r, k).clone()))
    }

    pub fn apply(&self, c: &Coord27) -> Coord27 {
        Coord27(std::array::from_fn(|r| {
            (0..DIM).fold(self.field.zero(), |acc, k| acc + self.get(r, k) * &c.0[k])
        }))
    }

    pub fn apply_element(&self, x: &AlbertElement) -> AlbertElement {
        AlbertElement::from_coords(&self.apply(&x.coords()))
    }

    /// Row tuple times matrix, the convention of the transposed form.
    pub fn apply_right(&self, c: &Coord27) -> Coord27 {
        Coord27(std::array::from_fn(|k| {
            (0..DIM).fold(self.field.zero(), |acc, r| acc + &c.0[r] * self.get(r, k))
        }))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.field, |r, c| self.get(c, r).clone())
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, ScalarError> {
        self.check(o)?;
        Ok(Self::from_fn(&self.field, |r, c| {
            (0..DIM).fold(self.field.zero(), |acc, k| {
                let a = self.get(r, k);
                if a.is_zero() {
                    acc
                } else {
                    acc + a * o.get(k, c)
                }
            })
        }))
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, ScalarError> {
        self.check(o)?;
        Ok(Self::from_fn(&self.field, |r, c| self.get(r, c) + o.get(r, c)))
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self, ScalarError> {
        self.check(o)?;
        Ok(Self::from_fn(&self.field, |r, c| self.get(r, c) - o.get(r, c)))
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        Self::from_fn(&self.field, |r, c| k * self.get(r, c))
    }

    pub fn trace(&self) -> Scalar {
        (0..DIM).fold(self.field.zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    fn check(&self, o: &Self) -> Result<(), ScalarError> {
        if self.field != o.field {
            return Err(ScalarError::FieldMismatch(self.field.clone(), o.field.clone()));
        }
        Ok(())
    }
}

struct Rows<'a>(&'a DerivationMatrix);

impl Serialize for Rows<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(DIM))?;
        for r in self.0.entries.chunks(DIM) {
            seq.serialize_element(r)?;
        }
        seq.end()
    }
}

impl Serialize for DerivationMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Rows(self).serialize(s)
    }
}

/// An ordered, linearly independent list of derivations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationBasis {
    pub field: FieldSpec,
    pub basis: Vec<DerivationMatrix>,
}

impl DerivationBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

impl Serialize for DerivationBasis {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DerivationBasis", 3)?;
        st.serialize_field("field", &self.field)?;
        st.serialize_field("dim", &self.basis.len())?;
        st.serialize_field("basis", &self.basis)?;
        st.end()
    }
}

/// Output of the solver: the kernel basis and the pivot columns it came from.
#[derive(Debug, Clone)]
pub struct Solution {
    pub basis: DerivationBasis,
    pub rank: usize,
    /// 0-based pivot columns, increasing.
    pub pivots: Vec<usize>,
}

pub fn solve(sys: &ConstraintSystem) -> Solution {
    let e = sys.echelon();
    let basis = e
        .nullspace()
        .iter()
        .map(|v| DerivationMatrix::from_unknowns(&sys.field, v))
        .collect();
    Solution {
        basis: DerivationBasis {
            field: sys.field.clone(),
            basis,
        },
        rank: e.rank(),
        pivots: e.pivots(),
    }
}

/// Kernel basis, one member per free column in increasing column order.
pub fn nullspace(sys: &ConstraintSystem) -> DerivationBasis {
    solve(sys).basis
}

/// Pivot columns present in only one of two solutions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PivotDiff {
    pub only_left: Vec<usize>,
    pub only_right: Vec<usize>,
}

impl PivotDiff {
    pub fn is_empty(&self) -> bool {
        self.only_left.is_empty() && self.only_right.is_empty()
    }
}

impl fmt::Display for PivotDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |cols: &[usize]| {
            cols.iter()
                .map(|&c| {
                    let (b, s) = UnknownLayout::decode(c);
                    format!("{}({b},{})", c + 1, s + 1)
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        if self.is_empty() {
            return f.write_str("identical pivot columns");
        }
        write!(
            f,
            "only left: [{}]; only right: [{}]",
            show(&self.only_left),
            show(&self.only_right)
        )
    }
}

pub fn pivot_diff(left: &[usize], right: &[usize]) -> PivotDiff {
    PivotDiff {
        only_left: left.iter().filter(|c| !right.contains(c)).copied().collect(),
        only_right: right.iter().filter(|c| !left.contains(c)).copied().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_round_trip() {
        assert_eq!(UnknownLayout::index(BasisElement::E(1), 1), 1);
        assert_eq!(UnknownLayout::index(BasisElement::X(3, 8), 27), 729);
        for c in [0, 26, 27, 400, 728] {
            let (b, s) = UnknownLayout::decode(c);
            assert_eq!(UnknownLayout::column(b, s), c);
        }
    }

    #[test]
    fn unknowns_round_trip() {
        let f = FieldSpec::gf(11);
        let x: Vec<Scalar> = (0..UNKNOWNS as i64).map(|n| Scalar::from_i64(&f, n)).collect();
        let d = DerivationMatrix::from_unknowns(&f, &x);
        assert_eq!(d.to_unknowns(), x);
        // column k holds D(b_k)
        assert_eq!(d.get(2, 1), &Scalar::from_i64(&f, 27 + 2));
        assert_eq!(d.transpose().transpose(), d);
    }

    #[test]
    fn row_counts() {
        let sys = assemble_constraints(&FieldSpec::gf(2));
        assert_eq!(sys.len(), 27 + 19_683 + 255_879);
        assert!(is_derivation(&DerivationMatrix::zero(&FieldSpec::gf(2)), &sys));
        assert!(!is_derivation(&DerivationMatrix::identity(&FieldSpec::gf(2)), &sys));
    }

    #[test]
    fn quadratic_row_example() {
        // U_{E1} E2 = 0, so the (E1, E2) rows carry no D(U_b y) term
        let tab = JordanTables::new();
        assert!(tab.u(0, 1).iter().all(|&c| c == 0));
        let rows = quadratic_rows(&tab, 0, 1);
        assert!(rows.iter().all(|r| r.entries.iter().all(|&(c, _)| c < 2 * DIM)));
    }

    #[test]
    fn pivot_diff_display() {
        let d = pivot_diff(&[0, 5, 30], &[0, 30, 31]);
        assert_eq!(d.only_left, [5]);
        assert_eq!(d.only_right, [31]);
        assert_eq!(d.to_string(), "only left: [6(E1[1],6)]; only right: [32(E2[1],5)]");
    }
}
