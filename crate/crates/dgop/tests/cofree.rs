use std::collections::BTreeSet;

use dgop::coalgebra::{verify_pcoalgebra, verify_pcoalgebra_truncated, PCoalgebra};
use dgop::dual_schur::{cofree_coalgebra, operad_window_for};
use dgop::graded::LinearMap;
use dgop::linalg::Vector;
use dgop::multilinear;
use dgop::operad::{AssociativeOperad, AxiomConfig, Operad};
use dgop::tree::{Cell, Presentation};
use dgop::{complex, random, ChainComplex, Field, Window};

fn all_maps(field: Field, src: &ChainComplex, dst: &ChainComplex) -> Vec<LinearMap> {
    let mut out = vec![LinearMap::zero(field, src.space.clone(), dst.space.clone(), 0)];
    for j in 0..src.dim() {
        let targets: Vec<usize> = dst.space.indices_in(src.space.degree(j)).collect();
        let mut next = vec![];
        for f in &out {
            for mask in 0..(1u32 << targets.len()) {
                let mut g = f.clone();
                let col: Vector = targets.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, i)| (*i, field.one())).collect();
                g.cols[j] = col;
                next.push(g);
            }
        }
        out = next;
    }
    out
}

fn is_coalgebra_map(op: &dyn Operad, c: &PCoalgebra, l: &PCoalgebra, g: &LinearMap) -> bool {
    if !complex::is_chain_map(&c.carrier, &l.carrier, g) {
        return false;
    }
    for n in 1..=op.max_arity().min(l.max_arity()) {
        for e in 0..op.space(n).dim() {
            for b in 0..c.carrier.dim() {
                let lhs = l.ops[n][e].apply(&g.cols[b]);
                let rhs = multilinear::map_tensor(g, &c.ops[n][e].images[b]);
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

#[test]
fn hom_set_bijection_for_free_unary_operad() {
    let field = Field::f2();
    let w = Window::new(-5, 1);
    let mut r = random::rng(17);
    for trial in 0..12 {
        // V is a point or a disk, C one or two spheres
        let (spheres, disks) = if trial % 2 == 0 { (1, 0) } else { (0, 1) };
        let v = random::complex(field, &mut r, spheres, disks, -1, 1);
        let c = random::complex(field, &mut r, 1 + trial % 2, 0, -1, 1);
        let pres = Presentation::new(field, vec![Cell { name: "u".into(), arity: 1, degree: 1, boundary: vec![] }]).unwrap();
        let op = pres.realize(1, Some(operad_window_for(&v, 1, w))).unwrap();
        let l = cofree_coalgebra(&op, &v, 1, w).unwrap();
        let rep = verify_pcoalgebra_truncated(&op, &l.coalgebra, &AxiomConfig::exhaustive(), &l.cut);
        assert!(rep.passed(), "{:?}", rep.first_failure());
        let cc = PCoalgebra::trivial(&op, &c, 1);
        let eps = l.counit(&op);
        let coalg_maps: Vec<LinearMap> =
            all_maps(field, &c, &l.coalgebra.carrier).into_iter().filter(|g| is_coalgebra_map(&op, &cc, &l.coalgebra, g)).collect();
        let chain_maps: BTreeSet<Vec<Vec<(usize, String)>>> = all_maps(field, &c, &v)
            .into_iter()
            .filter(|f| complex::is_chain_map(&c, &v, f))
            .map(|f| f.cols.iter().map(|col| col.iter().map(|(i, x)| (*i, x.to_string())).collect()).collect())
            .collect();
        let images: BTreeSet<Vec<Vec<(usize, String)>>> = coalg_maps
            .iter()
            .map(|g| eps.compose(g).unwrap().cols.iter().map(|col| col.iter().map(|(i, x)| (*i, x.to_string())).collect()).collect())
            .collect();
        assert_eq!(coalg_maps.len(), chain_maps.len());
        assert_eq!(images, chain_maps);
    }
}

#[test]
fn cofree_associative_coalgebra_verifies() {
    for field in [Field::f2(), Field::Rational] {
        let op = AssociativeOperad::new(field, 3);
        let v = ChainComplex::unit(field);
        let l = cofree_coalgebra(&op, &v, 3, Window::new(0, 0)).unwrap();
        let rep = verify_pcoalgebra(&op, &l.coalgebra, &AxiomConfig::exhaustive());
        assert!(rep.passed(), "{:?}", rep.first_failure());
        assert!(l.coalgebra.carrier.dim() >= 1);
    }
}
