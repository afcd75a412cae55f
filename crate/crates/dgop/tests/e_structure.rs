use std::collections::HashMap;

use dgop::barratt_eccles::*;
use dgop::coalgebra::{pull_back, push_forward, restrict, verify_pcoalgebra};
use dgop::linalg::{self, Vector};
use dgop::multilinear::Tensor;
use dgop::operad::{AxiomConfig, Operad};
use dgop::scalar::Field;
use dgop::simplicial::*;
use dgop::tree::{Cell, FreeMorphism, Presentation};

fn fields() -> [Field; 2] {
    [Field::f2(), Field::Rational]
}

#[test]
fn verifies_on_builtins() {
    for field in fields() {
        let op = BarrattEccles::new(field, VERIFY_MAX_ARITY, VERIFY_MAX_DEGREE).unwrap();
        for (name, x) in [("boundary2", simplex_boundary(2)), ("rp2", projective_plane()), ("torus", torus())] {
            let c = e_coalgebra_structure(&x, &op);
            let rep = verify_pcoalgebra(&op, &c, &AxiomConfig::exhaustive());
            assert!(rep.passed(), "{field:?} {name} {:?}", rep.first_failure());
        }
    }
}

#[test]
fn lowest_piece_is_alexander_whitney() {
    for field in fields() {
        let op = BarrattEccles::new(field, 2, 1).unwrap();
        let id = op.index_of(&[vec![0, 1]]).unwrap();
        for n in 0..=3 {
            let x = standard_simplex(n);
            let c = e_coalgebra_structure(&x, &op);
            assert_eq!(c.ops[2][id], alexander_whitney(&x, field), "n = {n}");
        }
    }
}

#[test]
fn point_structure() {
    let field = Field::Rational;
    let op = BarrattEccles::new(field, 3, 2).unwrap();
    let c = e_coalgebra_structure(&standard_simplex(0), &op);
    for n in 1..=3 {
        for b in 0..op.space(n).dim() {
            let want = if op.space(n).degree(b) == 0 { Tensor::from([(vec![0; n], field.one())]) } else { Tensor::new() };
            assert_eq!(c.ops[n][b].images[0], want);
        }
    }
}

#[test]
fn restriction_to_free_binary_operad_is_aw() {
    for field in fields() {
        let be = BarrattEccles::new(field, 3, 2).unwrap();
        let free = Presentation::new(field, vec![Cell { name: "m".into(), arity: 2, degree: 0, boundary: vec![] }])
            .unwrap()
            .realize(3, None)
            .unwrap();
        let imgs = HashMap::from([("m".to_string(), linalg::unit(field, be.index_of(&[vec![0, 1]]).unwrap()))]);
        let phi = FreeMorphism::from_cells(&free, &be, &imgs).unwrap();
        let x = standard_simplex(1);
        let r = restrict(&free, &phi, &e_coalgebra_structure(&x, &be)).unwrap();
        let m = free.space(2).find_label("m(1,2)").unwrap();
        assert_eq!(r.ops[2][m], alexander_whitney(&x, field));
        assert!(verify_pcoalgebra(&free, &r, &AxiomConfig::exhaustive()).passed());
    }
}

#[test]
fn naturality_under_simplicial_maps() {
    let maps: Vec<(SimplicialSet, SimplicialSet, Vec<usize>)> = vec![
        (standard_simplex(2), standard_simplex(1), vec![0, 0, 1]),
        (standard_simplex(2), standard_simplex(1), vec![0, 1, 1]),
        (standard_simplex(1), standard_simplex(2), vec![0, 2]),
        (simplex_boundary(2), standard_simplex(2), vec![0, 1, 2]),
        (standard_simplex(3), standard_simplex(2), vec![0, 1, 1, 2]),
        (simplex_boundary(3), standard_simplex(1), vec![0, 0, 1, 1]),
    ];
    for field in fields() {
        let op = BarrattEccles::new(field, 3, 3).unwrap();
        for (x, y, f) in &maps {
            let fm = vertex_map_chains(x, y, f, field).unwrap();
            let (cx, cy) = (e_coalgebra_structure(x, &op), e_coalgebra_structure(y, &op));
            for n in 1..=3 {
                for b in 0..op.space(n).dim() {
                    assert_eq!(push_forward(&fm, &cx.ops[n][b]), pull_back(&fm, &cy.ops[n][b]), "{f:?} on {}", op.space(n).label(b));
                }
            }
        }
    }
}

#[test]
fn aw_is_counital() {
    for x in [standard_simplex(3), projective_plane(), torus(), circle()] {
        let field = Field::Rational;
        let c = normalized_chains(&x, field);
        let aw = alexander_whitney(&x, field);
        let vertex = |i: usize| c.space.degree(i) == 0;
        for b in 0..c.dim() {
            let mut left = Vector::new();
            let mut right = Vector::new();
            for (k, v) in &aw.images[b] {
                if vertex(k[0]) {
                    linalg::add_entry(&mut left, k[1], v);
                }
                if vertex(k[1]) {
                    linalg::add_entry(&mut right, k[0], v);
                }
            }
            assert_eq!(left, linalg::unit(field, b));
            assert_eq!(right, linalg::unit(field, b));
        }
    }
}

fn all_builtins() -> Vec<(&'static str, SimplicialSet)> {
    BUILTINS.iter().map(|n| (*n, builtin(n).unwrap())).collect()
}

#[test]
fn cup_product_commutes_up_to_cup_one() {
    let field = Field::f2();
    for (name, x) in all_builtins() {
        let c = normalized_chains(&x, field);
        let top = x.dimension().unwrap_or(0) as i64;
        let classes: Vec<Vector> = (0..=top).flat_map(|n| Cohomology::new(&c, n).basis).collect();
        for a in &classes {
            for b in &classes {
                let mut lhs = cup_i(&x, &c, 0, a, b);
                linalg::add_scaled(&mut lhs, &field.one(), &cup_i(&x, &c, 0, b, a));
                let rhs = coboundary(&c, &cup_i(&x, &c, 1, a, b));
                assert_eq!(lhs, rhs, "{name}");
            }
        }
    }
}

#[test]
fn steenrod_squares_on_builtins() {
    let field = Field::f2();
    for (name, x) in all_builtins() {
        let c = normalized_chains(&x, field);
        let top = x.dimension().unwrap_or(0) as i64;
        for n in 0..=top {
            let h = Cohomology::new(&c, n);
            for a in &h.basis {
                assert_eq!(steenrod_square(&x, &c, n, a).unwrap(), cup_i(&x, &c, 0, a, a), "{name}");
                for i in n + 1..=n + 3 {
                    assert!(steenrod_square(&x, &c, i, a).unwrap().is_empty(), "{name}");
                }
                for i in 0..=n {
                    let s = steenrod_square(&x, &c, i, a).unwrap();
                    assert!(Cohomology::is_cocycle(&c, &s), "{name}");
                    // independent of the representative
                    for y in c.space.indices_in(n - 1) {
                        let mut a2 = a.clone();
                        linalg::add_scaled(&mut a2, &field.one(), &coboundary(&c, &linalg::unit(field, y)));
                        let mut diff = steenrod_square(&x, &c, i, &a2).unwrap();
                        linalg::add_scaled(&mut diff, &field.one(), &s);
                        assert!(Cohomology::new(&c, n + i).is_coboundary(&diff), "{name}");
                    }
                }
            }
        }
    }
    let x = projective_plane();
    let c = normalized_chains(&x, field);
    let h1 = Cohomology::new(&c, 1);
    let sq = steenrod_square(&x, &c, 1, &h1.basis[0]).unwrap();
    assert!(!Cohomology::new(&c, 2).is_coboundary(&sq));
}

#[test]
fn steenrod_rejects_non_cocycles() {
    let x = standard_simplex(1);
    let c = normalized_chains(&x, Field::f2());
    assert!(steenrod_square(&x, &c, 0, &linalg::unit(Field::f2(), 0)).is_err());
}

#[test]
fn oversized_truncation_is_refused() {
    assert!(BarrattEccles::new(Field::f2(), DEFAULT_MAX_ARITY, DEFAULT_MAX_DEGREE).is_err());
    assert!(BarrattEccles::new(Field::f2(), 4, 2).is_ok());
}
