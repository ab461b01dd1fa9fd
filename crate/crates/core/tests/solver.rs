mod common;

use std::collections::HashMap;

use f4_core::dersolve::{
    assemble_constraints, is_derivation, nullspace, pivot_diff, solve, DerivationMatrix, Provenance,
    UnknownLayout,
};
use f4_core::{AlbertElement, BasisElement, Coord27, FieldSpec, Scalar};

const P: u64 = 5;

fn modp(s: &Scalar) -> u64 {
    let n = s.to_small_int().expect("small residue");
    n.rem_euclid(P as i64) as u64
}

/// Dense incremental elimination mod P, kept deliberately naive.
struct DenseMod {
    pivots: HashMap<usize, Vec<u64>>,
}

impl DenseMod {
    fn insert(&mut self, mut row: Vec<u64>) {
        let n = row.len();
        for c in 0..n {
            if row[c] == 0 {
                continue;
            }
            if let Some(p) = self.pivots.get(&c) {
                let k = row[c];
                for j in c..n {
                    row[j] = (row[j] + (P - k) * p[j]) % P;
                }
            } else {
                let inv = (1..P).find(|i| i * row[c] % P == 1).unwrap();
                for x in row.iter_mut() {
                    *x = *x * inv % P;
                }
                self.pivots.insert(c, row);
                return;
            }
        }
    }
}

/// Rows of `D(bi∘bj) = Dbi∘bj + bi∘Dbj` over GF(5), from the matrix-product
/// Jordan algebra rather than the cubic construction.
fn linear_rows() -> Vec<Vec<u64>> {
    let f = FieldSpec::gf(P);
    let bas: Vec<AlbertElement> = BasisElement::all().map(|b| AlbertElement::basis(&f, b)).collect();
    let prod: Vec<Vec<Coord27>> = bas
        .iter()
        .map(|x| bas.iter().map(|y| common::linear::jordan(x, y).coords()).collect())
        .collect();
    let mut rows = Vec::new();
    for i in 0..27 {
        for j in i..27 {
            for r in 0..27 {
                let mut row = vec![0u64; 729];
                for k in 0..27 {
                    row[k * 27 + r] = (row[k * 27 + r] + modp(&prod[i][j].0[k])) % P;
                }
                for s in 0..27 {
                    row[i * 27 + s] = (row[i * 27 + s] + P - modp(&prod[s][j].0[r])) % P;
                    row[j * 27 + s] = (row[j * 27 + s] + P - modp(&prod[i][s].0[r])) % P;
                }
                rows.push(row);
            }
        }
    }
    rows
}

#[test]
fn dimension_matches_linear_oracle() {
    let rows = linear_rows();
    let mut e = DenseMod { pivots: HashMap::new() };
    for r in &rows {
        e.insert(r.clone());
    }
    let oracle_dim = 729 - e.pivots.len();
    assert_eq!(oracle_dim, 52);

    let f = FieldSpec::gf(P);
    let basis = nullspace(&assemble_constraints(&f));
    assert_eq!(basis.dim(), oracle_dim);
    for d in &basis.basis {
        let x: Vec<u64> = d.to_unknowns().iter().map(modp).collect();
        for r in &rows {
            let s: u64 = r.iter().zip(&x).map(|(a, b)| a * b).sum();
            assert_eq!(s % P, 0);
        }
    }
}

#[test]
fn solutions_are_derivations_for_random_arguments() {
    let f = FieldSpec::Rationals;
    let basis = nullspace(&assemble_constraints(&f));
    let mut rng = common::rng(7);
    for _ in 0..100 {
        let x = common::element(&f, &mut rng);
        let y = common::element(&f, &mut rng);
        let uxy = x.u_op(&y);
        for d in &basis.basis {
            let (dx, dy) = (d.apply_element(&x), d.apply_element(&y));
            let rhs = &dx.triple(&y, &x) + &x.u_op(&dy);
            assert_eq!(d.apply_element(&uxy), rhs);
        }
    }
}

#[test]
fn members_kill_the_unit() {
    for f in [FieldSpec::Rationals, FieldSpec::gf(2)] {
        let one = AlbertElement::one(&f).coords();
        for d in nullspace(&assemble_constraints(&f)).basis {
            assert!(d.apply(&one).iter().all(Scalar::is_zero));
        }
    }
}

#[test]
fn quadratic_family_identity() {
    // T(D E1, E2, E1) + U_{E1}(D E2) = 0 on every solution
    let f = FieldSpec::Rationals;
    let e1 = AlbertElement::basis(&f, BasisElement::E(1));
    let e2 = AlbertElement::basis(&f, BasisElement::E(2));
    for d in nullspace(&assemble_constraints(&f)).basis {
        let s = &d.apply_element(&e1).triple(&e2, &e1) + &e1.u_op(&d.apply_element(&e2));
        assert!(s.is_zero());
    }
}

#[test]
fn bilinear_row_constant_term() {
    // {X1[e1], E1, X1[e2]} = E2, so the row's D-image term is column block E2
    let sys = assemble_constraints(&FieldSpec::Rationals);
    let (bi, bj, y) = (BasisElement::X(1, 1), BasisElement::X(1, 2), BasisElement::E(1));
    let mut seen = 0;
    for row in &sys.rows {
        if let Provenance::Bilinear { bi: a, bj: b, y: c, slot } = row.provenance {
            if (a, b, c) == (bi, bj, y) {
                seen += 1;
                let e2: Vec<_> = row
                    .entries
                    .iter()
                    .filter(|(col, _)| UnknownLayout::decode(*col).0 == BasisElement::E(2))
                    .collect();
                assert_eq!(e2, [&(UnknownLayout::column(BasisElement::E(2), slot), 1)]);
            }
        }
    }
    assert_eq!(seen, 27);
}

#[test]
fn membership_checks() {
    let f = FieldSpec::gf(3);
    let sys = assemble_constraints(&f);
    assert!(is_derivation(&DerivationMatrix::zero(&f), &sys));
    assert!(!is_derivation(&DerivationMatrix::identity(&f), &sys));
    let sol = solve(&sys);
    assert!(sol.basis.basis.iter().all(|d| is_derivation(d, &sys)));
    let other = assemble_constraints(&FieldSpec::gf(5));
    assert!(!is_derivation(&sol.basis.basis[0], &other));
}

#[test]
fn deterministic_output() {
    let f = FieldSpec::gf(7);
    let a = nullspace(&assemble_constraints(&f)).to_json();
    let b = nullspace(&assemble_constraints(&f)).to_json();
    assert_eq!(a, b);
    assert!(a.starts_with(r#"{"field":{"kind":"GF","p":7},"dim":52,"basis":[[["#));
}

#[test]
fn pivot_structure_across_fields() {
    let q = solve(&assemble_constraints(&FieldSpec::Rationals));
    for p in [3, 5, 7, 11] {
        let s = solve(&assemble_constraints(&FieldSpec::gf(p)));
        let d = pivot_diff(&q.pivots, &s.pivots);
        assert!(d.is_empty(), "GF({p}): {d}");
    }
    // characteristic 2 trades one pivot column at equal rank
    let s = solve(&assemble_constraints(&FieldSpec::gf(2)));
    let d = pivot_diff(&q.pivots, &s.pivots);
    assert_eq!(s.rank, q.rank);
    assert_eq!((d.only_left, d.only_right), (vec![504], vec![560]));
}

#[test]
fn triplet_dump() {
    let sys = assemble_constraints(&FieldSpec::gf(2));
    let mut buf = Vec::new();
    sys.write_triplets(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("%%MatrixMarket matrix coordinate integer general"));
    assert_eq!(lines.next(), Some("% field GF(2)"));
    assert_eq!(lines.next(), Some(format!("275589 729 {}", sys.nnz()).as_str()));
    // unit row 1: D(E1)+D(E2)+D(E3) in slot 1
    assert_eq!(lines.next(), Some("1 1 1"));
    assert_eq!(lines.next(), Some("1 28 1"));
    assert_eq!(lines.next(), Some("1 55 1"));
}
