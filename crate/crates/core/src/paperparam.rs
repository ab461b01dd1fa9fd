//! The explicit 52-parameter generic derivation, read from a data file.
//!
//! `data/generators.json` lists, for each basis element, its image as
//! `[slot, parameter, coefficient]` triples. The images are stored after
//! eliminating the extra parameter `phi3 = 2*xi + delta1 - epsilon2 - eta1`;
//! the positions where `phi3` originally stood are kept under `eliminated`
//! so the relation can be recovered independently.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::albert::{BasisElement, Coord27, DIM};
use crate::dersolve::{ConstraintSystem, DerivationBasis, DerivationMatrix, Provenance, UNKNOWNS};
use crate::linalg::{Echelon, SparseRow};
use crate::scalars::{FieldSpec, Scalar, ScalarError};

/// Number of free parameters.
pub const NPARAMS: usize = 52;

/// Parameter names in their canonical order.
pub const PARAM_NAMES: [&str; NPARAMS] = [
    "xi", "alpha1", "alpha2", "alpha3", "alpha4", "alpha5", "alpha6", "alpha7", "alpha8",
    "beta1", "beta2", "beta3", "beta4", "beta5", "beta6", "beta7", "beta8", "gamma1", "gamma2",
    "gamma3", "gamma4", "gamma5", "gamma6", "gamma7", "gamma8", "delta1", "delta2", "delta3",
    "delta4", "delta5", "delta6", "delta7", "epsilon1", "epsilon2", "epsilon3", "epsilon4",
    "eta1", "eta2", "eta3", "eta4", "eta5", "rho1", "rho2", "rho3", "rho4", "rho5", "rho6",
    "phi1", "phi2", "chi1", "psi1", "psi2",
];

/// The bundled generator table.
pub const BUILTIN: &str = include_str!("../data/generators.json");

const GREEK: [(&str, &str); 11] = [
    ("epsilon", "ε"),
    ("alpha", "α"),
    ("gamma", "γ"),
    ("delta", "δ"),
    ("beta", "β"),
    ("eta", "η"),
    ("rho", "ρ"),
    ("phi", "φ"),
    ("chi", "χ"),
    ("psi", "ψ"),
    ("xi", "ξ"),
];

/// `alpha3` → `α3`.
pub fn greek(name: &str) -> String {
    for (latin, g) in GREEK {
        if let Some(rest) = name.strip_prefix(latin) {
            return format!("{g}{rest}");
        }
    }
    name.to_string()
}

pub fn param_index(name: &str) -> Option<usize> {
    PARAM_NAMES.iter().position(|&n| n == name)
}

#[derive(Debug, Error)]
pub enum TableError {
    #[error("malformed generator table: {0}")]
    Json(#[from] serde_json::Error),
    #[error("parameter list differs from the canonical 52 names")]
    Parameters,
    #[error("unknown parameter {0:?}")]
    UnknownParameter(String),
    #[error("unknown basis element {0:?}")]
    Basis(String),
    #[error("slot {0} out of range")]
    Slot(usize),
    #[error("no image for {0}")]
    Missing(BasisElement),
}

/// 52 field elements indexed like [`PARAM_NAMES`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamVector {
    pub field: FieldSpec,
    pub values: Vec<Scalar>,
}

impl ParamVector {
    pub fn zero(field: &FieldSpec) -> Self {
        ParamVector {
            field: field.clone(),
            values: vec![field.zero(); NPARAMS],
        }
    }

    /// The `k`-th unit tuple.
    pub fn unit(field: &FieldSpec, k: usize) -> Self {
        let mut p = Self::zero(field);
        p.values[k] = field.one();
        p
    }

    /// Zero except for the named entries.
    pub fn with(field: &FieldSpec, named: &[(&str, i64)]) -> Self {
        let mut p = Self::zero(field);
        for (n, v) in named {
            let k = param_index(n).unwrap_or_else(|| panic!("unknown parameter {n}"));
            p.values[k] = Scalar::from_i64(field, *v);
        }
        p
    }

    pub fn get(&self, name: &str) -> Option<&Scalar> {
        param_index(name).map(|k| &self.values[k])
    }
}

#[derive(Deserialize)]
struct RawHeader {
    #[serde(default)]
    reconstructed: Vec<String>,
}

#[derive(Deserialize)]
struct RawEliminated {
    name: String,
    relation: Vec<(String, i64)>,
    occurrences: Vec<(String, usize, i64)>,
}

#[derive(Deserialize)]
struct RawTable {
    header: RawHeader,
    parameters: Vec<String>,
    eliminated: RawEliminated,
    images: BTreeMap<String, Vec<(usize, String, i64)>>,
}

/// One term `coef · param` at a 0-based slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Term {
    pub slot: usize,
    pub param: usize,
    pub coef: i64,
}

/// The parameter removed by substitution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eliminated {
    pub name: String,
    /// `(parameter, coefficient)` of the substituted expression.
    pub relation: Vec<(usize, i64)>,
    /// `(basis element, 0-based slot, coefficient)` where it stood.
    pub occurrences: Vec<(BasisElement, usize, i64)>,
}

/// Images of the 27 basis elements, linear in the 52 parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorTable {
    pub images: Vec<Vec<Term>>,
    pub eliminated: Eliminated,
    pub reconstructed: Vec<String>,
}

impl GeneratorTable {
    pub fn from_json(text: &str) -> Result<Self, TableError> {
        let raw: RawTable = serde_json::from_str(text)?;
        if raw.parameters.iter().map(String::as_str).ne(PARAM_NAMES.iter().copied()) {
            return Err(TableError::Parameters);
        }
        let pidx = |n: &str| param_index(n).ok_or_else(|| TableError::UnknownParameter(n.into()));
        let basis = |n: &str| n.parse::<BasisElement>().map_err(|_| TableError::Basis(n.into()));
        let slot = |s: usize| {
            if (1..=DIM).contains(&s) {
                Ok(s - 1)
            } else {
                Err(TableError::Slot(s))
            }
        };
        let mut images = vec![None; DIM];
        for (name, terms) in &raw.images {
            let b = basis(name)?;
            let ts = terms
                .iter()
                .map(|(s, p, c)| {
                    Ok(Term {
                        slot: slot(*s)?,
                        param: pidx(p)?,
                        coef: *c,
                    })
                })
                .collect::<Result<Vec<_>, TableError>>()?;
            images[b.index()] = Some(ts);
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, t)| t.ok_or(TableError::Missing(BasisElement::from_index(i))))
            .collect::<Result<Vec<_>, _>>()?;
        let e = raw.eliminated;
        let eliminated = Eliminated {
            name: e.name,
            relation: e
                .relation
                .iter()
                .map(|(p, c)| Ok((pidx(p)?, *c)))
                .collect::<Result<_, TableError>>()?,
            occurrences: e
                .occurrences
                .iter()
                .map(|(b, s, c)| Ok((basis(b)?, slot(*s)?, *c)))
                .collect::<Result<_, TableError>>()?,
        };
        Ok(GeneratorTable {
            images,
            eliminated,
            reconstructed: raw.header.reconstructed,
        })
    }

    pub fn builtin() -> Self {
        Self::from_json(BUILTIN).expect("bundled generator table is valid")
    }

    pub fn image(&self, b: BasisElement) -> &[Term] {
        &self.images[b.index()]
    }

    /// Largest absolute coefficient in the table.
    pub fn max_coef(&self) -> i64 {
        self.images.iter().flatten().map(|t| t.coef.abs()).max().unwrap_or(0)
    }

    /// Integer matrix of `generic_derivation(unit_k)`, as 729 unknowns.
    fn unit_unknowns(&self, k: usize) -> Vec<(usize, i64)> {
        let mut out: Vec<(usize, i64)> = self
            .images
            .iter()
            .enumerate()
            .flat_map(|(b, ts)| {
                ts.iter()
                    .filter(move |t| t.param == k)
                    .map(move |t| (b * DIM + t.slot, t.coef))
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// The table before substitution, as 53 integer generators in unknown
    /// coordinates: the 52 parameters followed by the eliminated one.
    pub fn raw_generators(&self) -> Vec<Vec<(usize, i64)>> {
        let mut gens: Vec<BTreeMap<usize, i64>> = (0..NPARAMS)
            .map(|k| self.unit_unknowns(k).into_iter().collect())
            .collect();
        let mut extra = BTreeMap::new();
        for &(b, slot, c) in &self.eliminated.occurrences {
            let col = b.index() * DIM + slot;
            for &(p, r) in &self.eliminated.relation {
                *gens[p].entry(col).or_insert(0) -= c * r;
            }
            *extra.entry(col).or_insert(0) += c;
        }
        gens.push(extra);
        gens.into_iter()
            .map(|m| m.into_iter().filter(|e| e.1 != 0).collect())
            .collect()
    }
}

/// Value of the eliminated parameter, `2ξ + δ1 − ε2 − η1`.
pub fn phi3(p: &ParamVector) -> Scalar {
    phi3_with(&GeneratorTable::builtin(), p)
}

pub fn phi3_with(table: &GeneratorTable, p: &ParamVector) -> Scalar {
    table
        .eliminated
        .relation
        .iter()
        .fold(p.field.zero(), |acc, &(k, c)| acc + Scalar::from_i64(&p.field, c) * &p.values[k])
}

/// Column `b` is `coor` of the tabulated image of `b` at `p`.
pub fn generic_derivation(table: &GeneratorTable, p: &ParamVector) -> DerivationMatrix {
    let f = &p.field;
    let mut m = DerivationMatrix::zero(f);
    for (b, terms) in table.images.iter().enumerate() {
        for t in terms {
            let v = m.get(t.slot, b).clone() + Scalar::from_i64(f, t.coef) * &p.values[t.param];
            m.set(t.slot, b, v);
        }
    }
    m
}

/// The paper's matrix convention: acts on row tuples from the right.
pub fn supermatrix(table: &GeneratorTable, p: &ParamVector) -> DerivationMatrix {
    generic_derivation(table, p).transpose()
}

/// The 52 unit-parameter derivations, in parameter order.
pub fn paper_generators(field: &FieldSpec) -> DerivationBasis {
    paper_generators_with(&GeneratorTable::builtin(), field)
}

pub fn paper_generators_with(table: &GeneratorTable, field: &FieldSpec) -> DerivationBasis {
    DerivationBasis {
        field: field.clone(),
        basis: (0..NPARAMS)
            .map(|k| generic_derivation(table, &ParamVector::unit(field, k)))
            .collect(),
    }
}

fn echelon_of(field: &FieldSpec, rows: &[SparseRow<Scalar>]) -> Echelon<Scalar> {
    let mut e = Echelon::new(field.clone(), UNKNOWNS);
    for r in rows {
        e.insert(r);
    }
    e
}

/// Rank of a basis as 729-tuples.
pub fn rank(b: &DerivationBasis) -> usize {
    let rows: Vec<_> = b.basis.iter().map(DerivationMatrix::to_sparse).collect();
    echelon_of(&b.field, &rows).rank()
}

/// Mutual containment of two spans.
pub fn span_equals(a: &DerivationBasis, b: &DerivationBasis) -> Result<bool, ScalarError> {
    if a.field != b.field {
        return Err(ScalarError::FieldMismatch(a.field.clone(), b.field.clone()));
    }
    let ra: Vec<_> = a.basis.iter().map(DerivationMatrix::to_sparse).collect();
    let rb: Vec<_> = b.basis.iter().map(DerivationMatrix::to_sparse).collect();
    let ea = echelon_of(&a.field, &ra);
    let eb = echelon_of(&b.field, &rb);
    Ok(rb.iter().all(|r| ea.contains(r)) && ra.iter().all(|r| eb.contains(r)))
}

/// Per-generator audit against a constraint system.
#[derive(Debug, Clone)]
pub struct AuditReport {
    pub field: FieldSpec,
    /// `(parameter, first violated row)` for each failing generator.
    pub failures: Vec<(usize, Provenance)>,
    pub rank: usize,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.rank == NPARAMS
    }
}

pub fn audit(table: &GeneratorTable, sys: &ConstraintSystem) -> AuditReport {
    let gens = paper_generators_with(table, &sys.field);
    let failures = gens
        .basis
        .iter()
        .enumerate()
        .filter_map(|(k, d)| sys.first_violation(d).map(|p| (k, p)))
        .collect();
    AuditReport {
        field: sys.field.clone(),
        failures,
        rank: rank(&gens),
    }
}

/// A linear relation `name = Σ c_k · param_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub field: FieldSpec,
    pub name: String,
    /// Coefficient of every parameter, zeros included.
    pub coeffs: Vec<Scalar>,
}

impl Relation {
    /// Nonzero terms as `(name, integer lift)`.
    pub fn terms(&self) -> Vec<(&'static str, i64)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (PARAM_NAMES[k], c.to_small_int().expect("small coefficient")))
            .collect()
    }

    pub fn matches(&self, expected: &[(&str, i64)]) -> bool {
        let want = ParamVector::with(&self.field, expected);
        want.values == self.coeffs
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = ", greek(&self.name))?;
        let terms = self.terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (n, c)) in terms.iter().enumerate() {
            let (neg, a) = (*c < 0, c.abs());
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if a != 1 {
                write!(f, "{a}")?;
            }
            f.write_str(&greek(n))?;
        }
        Ok(())
    }
}

/// Relation from the row space of a 53-column system whose solutions are the
/// admissible raw parameter tuples. Expects rank 1.
fn relation_from_rows(
    table: &GeneratorTable,
    field: &FieldSpec,
    rows: impl Iterator<Item = SparseRow<Scalar>>,
) -> Option<Relation> {
    let mut e = Echelon::new(field.clone(), NPARAMS + 1);
    for r in rows {
        e.insert(&r);
        if e.rank() > 1 {
            return None;
        }
    }
    let row = e.rows().first().map(|r| (*r).clone())?;
    let lead = row.iter().find(|(c, _)| *c == NPARAMS)?.1.clone();
    // r·t = 0 with r_53 = lead gives t_53 = Σ −(r_k / lead)·t_k
    let k = -lead.inv().ok()?;
    let mut coeffs = vec![field.zero(); NPARAMS];
    for (c, x) in row {
        if c < NPARAMS {
            coeffs[c] = &k * &x;
        }
    }
    Some(Relation {
        field: field.clone(),
        name: table.eliminated.name.clone(),
        coeffs,
    })
}

fn raw_field_generators(table: &GeneratorTable, field: &FieldSpec) -> Vec<SparseRow<Scalar>> {
    table
        .raw_generators()
        .iter()
        .map(|g| {
            g.iter()
                .map(|&(c, v)| (c, Scalar::from_i64(field, v)))
                .filter(|e| !e.1.is_zero())
                .collect()
        })
        .collect()
}

/// Recovers the eliminated relation from a derivation basis: the raw tuples
/// `t ∈ F^53` whose generic matrix lies in the span are exactly the kernel of
/// one linear functional.
pub fn recover_relation(table: &GeneratorTable, span: &DerivationBasis) -> Option<Relation> {
    let field = &span.field;
    let rows: Vec<_> = span.basis.iter().map(DerivationMatrix::to_sparse).collect();
    let e = echelon_of(field, &rows);
    let residues: Vec<SparseRow<Scalar>> = raw_field_generators(table, field)
        .iter()
        .map(|g| e.reduce(g))
        .collect();
    // transpose: one row per unknown column, 53 entries
    let mut by_col: BTreeMap<usize, SparseRow<Scalar>> = BTreeMap::new();
    for (k, r) in residues.iter().enumerate() {
        for (c, x) in r {
            by_col.entry(*c).or_default().push((k, x.clone()));
        }
    }
    relation_from_rows(table, field, by_col.into_values())
}

/// Same relation, read directly off the constraint rows restricted to the
/// 53-parameter family.
pub fn recover_relation_from_constraints(
    table: &GeneratorTable,
    sys: &ConstraintSystem,
) -> Option<Relation> {
    let field = &sys.field;
    let gens = table.raw_generators();
    let mut by_col: Vec<Vec<(usize, i64)>> = vec![Vec::new(); UNKNOWNS];
    for (k, g) in gens.iter().enumerate() {
        for &(c, v) in g {
            by_col[c].push((k, v));
        }
    }
    let rows = sys.rows.iter().filter_map(move |r| {
        let mut acc = vec![0i64; NPARAMS + 1];
        for &(c, v) in &r.entries {
            for &(k, g) in &by_col[c] {
                acc[k] += v * g;
            }
        }
        let row: SparseRow<Scalar> = acc
            .iter()
            .enumerate()
            .map(|(k, &v)| (k, Scalar::from_i64(field, v)))
            .filter(|e| !e.1.is_zero())
            .collect();
        (!row.is_empty()).then_some(row)
    });
    relation_from_rows(table, field, rows)
}

/// Symbolic entry `Σ coef·param`.
fn lin(terms: &[(usize, i64)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, &(p, c)) in terms.iter().enumerate() {
        let n = greek(PARAM_NAMES[p]);
        let a = c.abs();
        let body = if a == 1 { n } else { format!("{a}{n}") };
        match (i, c < 0) {
            (0, true) => s.push_str(&format!("-{body}")),
            (0, false) => s.push_str(&body),
            (_, true) => s.push_str(&format!(" - {body}")),
            (_, false) => s.push_str(&format!(" + {body}")),
        }
    }
    s
}

fn negate(t: &[(usize, i64)]) -> Vec<(usize, i64)> {
    t.iter().map(|&(p, c)| (p, -c)).collect()
}

/// Human-readable image of `b` as a 3×3 block with octonion entries
/// `(a {u1, u2, u3} {v1, v2, v3} b)`; lower entries are σ of the upper ones.
pub fn symbolic_image(table: &GeneratorTable, b: BasisElement) -> String {
    let mut slots: Vec<Vec<(usize, i64)>> = vec![Vec::new(); DIM];
    for t in table.image(b) {
        slots[t.slot].push((t.param, t.coef));
    }
    for s in &mut slots {
        s.sort_unstable();
    }
    let oct = |start: usize, conj: bool| -> String {
        let c: Vec<Vec<(usize, i64)>> = (0..8)
            .map(|i| {
                let t = &slots[start + i];
                if conj && i >= 2 {
                    negate(t)
                } else {
                    t.clone()
                }
            })
            .collect();
        let (a, bb) = if conj { (&c[1], &c[0]) } else { (&c[0], &c[1]) };
        format!(
            "({} {{{}, {}, {}}} {{{}, {}, {}}} {})",
            lin(a),
            lin(&c[2]),
            lin(&c[3]),
            lin(&c[4]),
            lin(&c[5]),
            lin(&c[6]),
            lin(&c[7]),
            lin(bb)
        )
    };
    let grid = [
        [lin(&slots[0]), oct(3, false), oct(19, false)],
        [oct(3, true), lin(&slots[1]), oct(11, false)],
        [oct(19, true), oct(11, true), lin(&slots[2])],
    ];
    let widths: Vec<usize> = (0..3)
        .map(|j| grid.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = format!("Δ[{b}] =\n");
    for row in &grid {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}", w = *w))
            .collect();
        out.push_str(&format!("  ( {} )\n", cells.join("  ").trim_end()));
    }
    out
}

/// [`symbolic_image`] for all 27 basis elements.
pub fn symbolic_table(table: &GeneratorTable) -> String {
    BasisElement::all()
        .map(|b| symbolic_image(table, b))
        .collect::<Vec<_>>()
        .join("\n")
}

/// `coor` of the image of `b` at `p`.
pub fn image_coords(table: &GeneratorTable, p: &ParamVector, b: BasisElement) -> Coord27 {
    generic_derivation(table, p).column(b)
}
