//! Seeded random instances: complexes, automorphisms, cooperations and the
//! test problems built from them.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coalgebra::{self, QuasiFreeCoalgebra};
use crate::complex;
use crate::error::Result;
use crate::graded::{ChainComplex, GradedSpace, LinearMap};
use crate::linalg::{self, Vector};
use crate::multilinear::{self, Cooperation};
use crate::scalar::{Field, Scalar};
use crate::tree;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly random field element; rationals are drawn from −2..=2.
pub fn scalar(field: Field, r: &mut impl Rng) -> Scalar {
    match field {
        Field::Rational => Scalar::from_i64(field, r.gen_range(-2..=2)),
        _ => field.elements().choose(r).unwrap().clone(),
    }
}

fn nonzero_scalar(field: Field, r: &mut impl Rng) -> Scalar {
    loop {
        let x = scalar(field, r);
        if !x.is_zero() {
            return x;
        }
    }
}

/// A complex that is a sum of `disks` disks and `spheres` spheres with
/// degrees in `lo..=hi`, then conjugated by a random automorphism.
pub fn complex(field: Field, r: &mut impl Rng, spheres: usize, disks: usize, lo: i64, hi: i64) -> ChainComplex {
    let mut pairs = vec![];
    let mut edges = vec![];
    for _ in 0..spheres {
        pairs.push(r.gen_range(lo..=hi));
    }
    for _ in 0..disks {
        let top = r.gen_range(lo + 1..=hi.max(lo + 1));
        pairs.push(top);
        pairs.push(top - 1);
        edges.push((pairs.len() - 2, pairs.len() - 1));
    }
    // the basis is sorted by degree; carry the pair positions along
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    order.sort_by_key(|i| pairs[*i]);
    let mut pos = vec![0; pairs.len()];
    for (k, i) in order.iter().enumerate() {
        pos[*i] = k;
    }
    let space = GradedSpace::from_pairs(order.iter().enumerate().map(|(k, i)| (pairs[*i], format!("c{k}")))).unwrap();
    let mut cols = vec![Vector::new(); pairs.len()];
    for (top, bot) in edges {
        cols[pos[top]].insert(pos[bot], nonzero_scalar(field, r));
    }
    let c = ChainComplex::new(field, space, cols).unwrap();
    let (c2, _) = conjugate(&c, r);
    c2
}

/// Returns (P d P⁻¹, P) for a random degree-preserving unitriangular P.
pub fn conjugate(c: &ChainComplex, r: &mut impl Rng) -> (ChainComplex, LinearMap) {
    let p = automorphism(c.field, c.space.clone(), r);
    let pinv = inverse(&p);
    let d = p.compose(&c.d).unwrap().compose(&pinv).unwrap();
    (ChainComplex { field: c.field, space: c.space.clone(), d }, p)
}

/// A random unitriangular automorphism preserving degrees.
pub fn automorphism(field: Field, space: Arc<GradedSpace>, r: &mut impl Rng) -> LinearMap {
    let mut cols = vec![];
    for j in 0..space.dim() {
        let mut v = linalg::unit(field, j);
        for i in space.indices_in(space.degree(j)) {
            if i < j {
                linalg::add_entry(&mut v, i, &scalar(field, r));
            }
        }
        cols.push(v);
    }
    LinearMap::new(field, space.clone(), space, 0, cols).unwrap()
}

/// Inverse of an invertible degree-0 map.
pub fn inverse(f: &LinearMap) -> LinearMap {
    let cols = (0..f.target.dim()).map(|j| linalg::solve(f.field, &f.cols, &linalg::unit(f.field, j)).expect("invertible")).collect();
    LinearMap { field: f.field, source: f.target.clone(), target: f.source.clone(), degree: -f.degree, cols }
}

/// A random cooperation; each admissible entry is nonzero with probability
/// `density`.
pub fn cooperation(c: &ChainComplex, n: usize, degree: i64, density: f64, r: &mut impl Rng) -> Cooperation {
    let mut d = Cooperation::zero(c, n, degree);
    for b in 0..c.dim() {
        for key in multilinear::keys_of_degree(&c.space, n, c.space.degree(b) + degree) {
            if r.gen_bool(density) {
                multilinear::add_term(&mut d.images[b], key, &scalar(c.field, r));
            }
        }
    }
    d
}

/// Transports a cooperation along an isomorphism P: Δ ↦ P^⊗n Δ P⁻¹.
pub fn transport(p: &LinearMap, pinv: &LinearMap, d: &Cooperation) -> Cooperation {
    coalgebra::pull_back(pinv, &coalgebra::push_forward(p, d))
}

/// A cell-attachment instance for the cell type (p, k): the structure on
/// T(S^{k−1}(p)) and a cooperation Δ_a with ∂Δ_a = Δ_b.
pub struct GluingInstance {
    pub base: QuasiFreeCoalgebra,
    pub cell: tree::Cell,
    pub delta: Cooperation,
}

pub fn gluing_instance(field: Field, p: usize, k: i64, dim: usize, r: &mut impl Rng) -> GluingInstance {
    let disks = r.gen_range(0..=dim / 2);
    let c = complex(field, r, dim - 2 * disks, disks, -1, 2);
    let delta = cooperation(&c, p, k, 0.4, r);
    let db = delta.boundary(&c);
    let pres = tree::disk_presentation(field, p, k);
    let base = QuasiFreeCoalgebra::new(pres.without_last(), c, vec![db]).expect("a boundary is a cycle");
    GluingInstance { base, cell: pres.cells[1].clone(), delta }
}

/// A lifting instance: f: W → V a quasi-isomorphism of T(S^{k−1}(p))-coalgebras
/// and W carrying a T(D^k(p)) structure.
pub struct LiftInstance {
    pub w: QuasiFreeCoalgebra,
    pub f: LinearMap,
    pub v: QuasiFreeCoalgebra,
}

/// W = V ⊕ K with K acyclic, f the projection, everything conjugated by a
/// random automorphism of W. Structures on W are ι^⊗p Δ_0 π plus terms that
/// have at least one factor in K.
pub fn lift_instance(field: Field, p: usize, k: i64, dim_v: usize, disks: usize, r: &mut impl Rng) -> Result<LiftInstance> {
    let v = complex(field, r, dim_v, 0, -1, 2);
    let mut kc = complex(field, r, 0, disks, -1, 2);
    // relabel K so the summand labels stay distinct after conjugation
    kc = ChainComplex::new(
        field,
        GradedSpace::from_pairs((0..kc.dim()).map(|i| (kc.space.degree(i), format!("k{i}"))))?,
        kc.d.cols.clone(),
    )?;
    let w0 = complex::direct_sum(&v, &kc);
    let left: Vec<usize> = (0..v.dim()).map(|i| w0.space.find_label(&format!("L:{}", v.space.label(i))).unwrap()).collect();
    let proj_cols = (0..w0.dim())
        .map(|j| match left.iter().position(|x| *x == j) {
            Some(i) => linalg::unit(field, i),
            None => Vector::new(),
        })
        .collect();
    let proj = LinearMap::new(field, w0.space.clone(), v.space.clone(), 0, proj_cols)?;
    let incl = LinearMap::new(field, v.space.clone(), w0.space.clone(), 0, left.iter().map(|j| linalg::unit(field, *j)).collect())?;
    let d0 = cooperation(&v, p, k, 0.4, r);
    let mut da = coalgebra::pull_back(&proj, &coalgebra::push_forward(&incl, &d0));
    for b in 0..w0.dim() {
        for key in multilinear::keys_of_degree(&w0.space, p, w0.space.degree(b) + k) {
            if key.iter().any(|x| !left.contains(x)) && r.gen_bool(0.3) {
                multilinear::add_term(&mut da.images[b], key, &scalar(field, r));
            }
        }
    }
    let (w, pm) = conjugate(&w0, r);
    let pinv = inverse(&pm);
    let da = transport(&pm, &pinv, &da);
    let f = proj.compose(&pinv)?;
    let db = da.boundary(&w);
    let pres = tree::disk_presentation(field, p, k);
    let wq = QuasiFreeCoalgebra::new(pres.clone(), w, vec![db, da])?;
    let vq = QuasiFreeCoalgebra::new(pres.without_last(), v.clone(), vec![d0.boundary(&v)])?;
    Ok(LiftInstance { w: wq, f, v: vq })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_complexes_are_complexes() {
        let mut r = rng(7);
        for _ in 0..20 {
            let c = complex(Field::Rational, &mut r, 2, 2, -2, 2);
            c.check_square_zero().unwrap();
            let h = complex::homology(&c);
            assert_eq!(h.betti().values().sum::<usize>(), 2);
        }
    }

    #[test]
    fn lift_instances_are_valid() {
        let mut r = rng(3);
        for _ in 0..5 {
            let inst = lift_instance(Field::f2(), 2, 0, 2, 1, &mut r).unwrap();
            assert!(complex::is_quasi_iso(&inst.w.carrier, &inst.v.carrier, &inst.f).unwrap());
        }
    }
}
