//! Tensor and hom complexes, homology, mapping cones.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::{ChainComplex, GradedSpace, LinearMap};
use crate::linalg::{self, Echelon, Vector};
use crate::scalar::{Field, Scalar};

pub fn koszul(field: Field, e: i64) -> Scalar {
    Scalar::sign(field, e.rem_euclid(2) == 1)
}

/// Tensor product with pair indexing.
#[derive(Clone, Debug)]
pub struct TensorIndex {
    pub pairs: Vec<(usize, usize)>,
    pub lookup: HashMap<(usize, usize), usize>,
}

pub fn tensor(a: &ChainComplex, b: &ChainComplex) -> ChainComplex {
    tensor_indexed(a, b).0
}

pub fn tensor_indexed(a: &ChainComplex, b: &ChainComplex) -> (ChainComplex, TensorIndex) {
    let field = a.field;
    let mut pairs_by_deg: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..a.dim() {
        for j in 0..b.dim() {
            let d = a.space.degree(i) + b.space.degree(j);
            pairs_by_deg.entry(d).or_default().push((i, j));
        }
    }
    let mut pairs = vec![];
    let mut basis = BTreeMap::new();
    for (d, ps) in pairs_by_deg {
        let labels = ps.iter().map(|(i, j)| format!("({},{})", a.space.label(*i), b.space.label(*j))).collect();
        basis.insert(d, labels);
        pairs.extend(ps);
    }
    let lookup: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, p)| (*p, k)).collect();
    let space = GradedSpace::new(basis).unwrap();
    let mut cols = vec![];
    for (i, j) in &pairs {
        let mut c = Vector::new();
        for (x, s) in &a.d.cols[*i] {
            linalg::add_entry(&mut c, lookup[&(*x, *j)], s);
        }
        let sg = koszul(field, a.space.degree(*i));
        for (y, s) in &b.d.cols[*j] {
            linalg::add_entry(&mut c, lookup[&(*i, *y)], &(&sg * s));
        }
        cols.push(c);
    }
    let c = ChainComplex::new(field, space, cols).expect("tensor of complexes is a complex");
    (c, TensorIndex { pairs, lookup })
}

/// Hom complex with basis the elementary maps `a ↦ b`.
#[derive(Clone, Debug)]
pub struct HomIndex {
    pub pairs: Vec<(usize, usize)>,
    pub lookup: HashMap<(usize, usize), usize>,
}

impl HomIndex {
    /// Vector in the hom complex of a homogeneous linear map.
    pub fn encode(&self, f: &LinearMap) -> Vector {
        let mut v = Vector::new();
        for (j, c) in f.cols.iter().enumerate() {
            for (i, x) in c {
                v.insert(self.lookup[&(j, *i)], x.clone());
            }
        }
        v
    }

    pub fn decode(&self, field: Field, a: &ChainComplex, b: &ChainComplex, degree: i64, v: &Vector) -> LinearMap {
        let mut cols = vec![Vector::new(); a.dim()];
        for (k, x) in v {
            let (j, i) = self.pairs[*k];
            cols[j].insert(i, x.clone());
        }
        LinearMap { field, source: a.space.clone(), target: b.space.clone(), degree, cols }
    }
}

pub fn hom_complex(a: &ChainComplex, b: &ChainComplex) -> ChainComplex {
    hom_complex_indexed(a, b).0
}

pub fn hom_complex_indexed(a: &ChainComplex, b: &ChainComplex) -> (ChainComplex, HomIndex) {
    let field = a.field;
    let mut by_deg: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
    for j in 0..a.dim() {
        for i in 0..b.dim() {
            let r = b.space.degree(i) - a.space.degree(j);
            by_deg.entry(r).or_default().push((j, i));
        }
    }
    let mut pairs = vec![];
    let mut basis = BTreeMap::new();
    for (r, ps) in by_deg {
        basis.insert(r, ps.iter().map(|(j, i)| format!("[{}->{}]", a.space.label(*j), b.space.label(*i))).collect());
        pairs.extend(ps);
    }
    let lookup: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, p)| (*p, k)).collect();
    let space = GradedSpace::new(basis).unwrap();
    // ∂f = d_B f − (−1)^{|f|} f d_A, with f = e_{j→i}.
    let mut a_d_rows: Vec<Vec<(usize, Scalar)>> = vec![vec![]; a.dim()];
    for (src, col) in a.d.cols.iter().enumerate() {
        for (t, x) in col {
            a_d_rows[*t].push((src, x.clone()));
        }
    }
    let mut cols = vec![];
    for (j, i) in &pairs {
        let r = b.space.degree(*i) - a.space.degree(*j);
        let mut c = Vector::new();
        for (t, x) in &b.d.cols[*i] {
            linalg::add_entry(&mut c, lookup[&(*j, *t)], x);
        }
        let sg = -koszul(field, r);
        for (src, x) in &a_d_rows[*j] {
            linalg::add_entry(&mut c, lookup[&(*src, *i)], &(&sg * x));
        }
        cols.push(c);
    }
    let c = ChainComplex::new(field, space, cols).expect("hom complex is a complex");
    (c, HomIndex { pairs, lookup })
}

pub fn direct_sum(a: &ChainComplex, b: &ChainComplex) -> ChainComplex {
    let mut pairs = vec![];
    for i in 0..a.dim() {
        pairs.push((a.space.degree(i), (0usize, i)));
    }
    for i in 0..b.dim() {
        pairs.push((b.space.degree(i), (1usize, i)));
    }
    pairs.sort_by_key(|(d, _)| *d);
    let pos: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, (_, p))| (*p, k)).collect();
    let space = GradedSpace::from_pairs(pairs.iter().map(|(d, (s, i))| {
        let l = if *s == 0 { a.space.label(*i) } else { b.space.label(*i) };
        (*d, format!("{}{}", if *s == 0 { "L:" } else { "R:" }, l))
    }))
    .unwrap();
    let cols = pairs
        .iter()
        .map(|(_, (s, i))| {
            let src = if *s == 0 { &a.d.cols[*i] } else { &b.d.cols[*i] };
            src.iter().map(|(t, x)| (pos[&(*s, *t)], x.clone())).collect()
        })
        .collect();
    ChainComplex::new(a.field, space, cols).unwrap()
}

/// ∂f = d_B∘f − (−1)^{|f|} f∘d_A as a map of degree |f| − 1.
pub fn hom_differential(a: &ChainComplex, b: &ChainComplex, f: &LinearMap) -> LinearMap {
    let field = a.field;
    let sg = -koszul(field, f.degree);
    let cols = (0..a.dim())
        .map(|j| {
            let mut c = b.d.apply(&f.cols[j]);
            let fd = f.apply(&a.d.cols[j]);
            linalg::add_scaled(&mut c, &sg, &fd);
            c
        })
        .collect();
    LinearMap { field, source: a.space.clone(), target: b.space.clone(), degree: f.degree - 1, cols }
}

pub fn is_chain_map(a: &ChainComplex, b: &ChainComplex, f: &LinearMap) -> bool {
    hom_differential(a, b, f).is_zero()
}

/// Mapping cone of a degree-0 map: B ⊕ A[1], d(b, a) = (db + f a, −da).
pub fn cone(a: &ChainComplex, b: &ChainComplex, f: &LinearMap) -> Result<ChainComplex> {
    if f.degree != 0 {
        return Err(Error::ShapeMismatch("cone needs a degree-0 map".into()));
    }
    let field = a.field;
    let mut pairs = vec![];
    for i in 0..b.dim() {
        pairs.push((b.space.degree(i), (0usize, i)));
    }
    for i in 0..a.dim() {
        pairs.push((a.space.degree(i) + 1, (1usize, i)));
    }
    pairs.sort_by_key(|(d, _)| *d);
    let pos: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, (_, p))| (*p, k)).collect();
    let space = GradedSpace::from_pairs(pairs.iter().map(|(d, (s, i))| {
        let l = if *s == 0 { format!("B:{}", b.space.label(*i)) } else { format!("sA:{}", a.space.label(*i)) };
        (*d, l)
    }))
    .unwrap();
    let minus = -field.one();
    let cols = pairs
        .iter()
        .map(|(_, (s, i))| {
            let mut c = Vector::new();
            if *s == 0 {
                for (t, x) in &b.d.cols[*i] {
                    linalg::add_entry(&mut c, pos[&(0, *t)], x);
                }
            } else {
                for (t, x) in &f.cols[*i] {
                    linalg::add_entry(&mut c, pos[&(0, *t)], x);
                }
                for (t, x) in &a.d.cols[*i] {
                    linalg::add_entry(&mut c, pos[&(1, *t)], &(&minus * x));
                }
            }
            c
        })
        .collect();
    ChainComplex::new(field, space, cols)
}

/// Homology with chosen cycle representatives.
#[derive(Clone, Debug)]
pub struct Homology {
    pub field: Field,
    pub space: GradedSpace,
    /// One cycle of the input complex per homology basis element.
    pub representatives: Vec<Vector>,
    classes: BTreeMap<i64, (Echelon, usize)>,
}

impl Homology {
    pub fn betti(&self) -> BTreeMap<i64, usize> {
        self.space.dims()
    }

    /// Coordinates of the class of a cycle of degree `d`, or `None` if it is not
    /// a cycle combination (the caller is expected to pass cycles).
    pub fn class_of(&self, d: i64, z: &Vector) -> Option<Vector> {
        let range = self.space.indices_in(d);
        let Some((e, nb)) = self.classes.get(&d) else {
            return if z.is_empty() { Some(Vector::new()) } else { None };
        };
        let (r, t) = e.reduce_tracked(z);
        if !r.is_empty() {
            return None;
        }
        let mut out = Vector::new();
        for (k, x) in t {
            if k >= *nb {
                out.insert(range.start + (k - nb), x);
            }
        }
        Some(out)
    }

    pub fn is_boundary(&self, d: i64, z: &Vector) -> bool {
        matches!(self.class_of(d, z), Some(v) if v.is_empty())
    }
}

pub fn homology(c: &ChainComplex) -> Homology {
    let field = c.field;
    let mut basis: BTreeMap<i64, Vec<String>> = BTreeMap::new();
    let mut reps = vec![];
    let mut classes = BTreeMap::new();
    for d in c.space.degrees() {
        let range = c.space.indices_in(d);
        let local_cols: Vec<Vector> = range.clone().map(|j| c.d.cols[j].clone()).collect();
        let ker = linalg::kernel(field, &local_cols);
        let mut e = Echelon::new(field);
        let mut nb = 0;
        for j in c.space.indices_in(d + 1) {
            let _ = e.insert(&c.d.cols[j]);
            nb += 1;
        }
        let mut labels = vec![];
        let mut accepted = 0;
        for k in ker {
            let z: Vector = k.iter().map(|(i, x)| (range.start + i, x.clone())).collect();
            let mut trial = e.clone();
            if trial.insert(&z).is_ok() {
                e = trial;
                labels.push(format!("h{}_{}", d, accepted));
                reps.push(z);
                accepted += 1;
            }
        }
        if accepted > 0 {
            basis.insert(d, labels);
        }
        classes.insert(d, (e, nb));
    }
    Homology { field, space: GradedSpace::new(basis).unwrap(), representatives: reps, classes }
}

pub fn is_quasi_iso(a: &ChainComplex, b: &ChainComplex, f: &LinearMap) -> Result<bool> {
    if !is_chain_map(a, b, f) {
        return Ok(false);
    }
    let c = cone(a, b, f)?;
    Ok(homology(&c).space.dim() == 0)
}

/// Canonical chain isomorphism (A⊗B)⊗C → A⊗(B⊗C).
pub fn associator(a: &ChainComplex, b: &ChainComplex, c: &ChainComplex) -> (ChainComplex, ChainComplex, LinearMap) {
    let (ab, iab) = tensor_indexed(a, b);
    let (abc1, i1) = tensor_indexed(&ab, c);
    let (bc, ibc) = tensor_indexed(b, c);
    let (abc2, i2) = tensor_indexed(a, &bc);
    let one = a.field.one();
    let cols = i1
        .pairs
        .iter()
        .map(|(x, z)| {
            let (p, q) = iab.pairs[*x];
            let mut v = Vector::new();
            v.insert(i2.lookup[&(p, ibc.lookup[&(q, *z)])], one.clone());
            v
        })
        .collect();
    let m = LinearMap { field: a.field, source: abc1.space.clone(), target: abc2.space.clone(), degree: 0, cols };
    (abc1, abc2, m)
}

pub fn identity_map(c: &ChainComplex) -> LinearMap {
    LinearMap::identity(c.field, c.space.clone())
}

pub fn inclusion_as_summand(field: Field, space: Arc<GradedSpace>, target: Arc<GradedSpace>, idx: Vec<usize>) -> LinearMap {
    let cols = idx.into_iter().map(|i| linalg::unit(field, i)).collect();
    LinearMap { field, source: space, target, degree: 0, cols }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_with_unit() {
        let q = Field::Rational;
        let d1 = ChainComplex::disk(q, 1);
        let t = tensor(&ChainComplex::unit(q), &d1);
        assert_eq!(t.dims(), d1.dims());
        assert_eq!(t.d.cols, d1.d.cols);
    }

    #[test]
    fn disk_tensor_sphere_is_acyclic() {
        let f = Field::f2();
        let t = tensor(&ChainComplex::disk(f, 1), &ChainComplex::sphere(f, 0));
        assert_eq!(homology(&t).space.dim(), 0);
    }

    #[test]
    fn hom_disk_sphere() {
        let f = Field::f2();
        let h = hom_complex(&ChainComplex::disk(f, 1), &ChainComplex::sphere(f, 0));
        assert_eq!(h.dims(), BTreeMap::from([(-1, 1), (0, 1)]));
        assert_eq!(h.d.rank(), 1);
        assert_eq!(homology(&h).space.dim(), 0);
    }

    #[test]
    fn hom_spheres() {
        let q = Field::Rational;
        let h = hom_complex(&ChainComplex::sphere(q, 2), &ChainComplex::sphere(q, -1));
        assert_eq!(h.dims(), BTreeMap::from([(-3, 1)]));
        assert!(h.d.is_zero());
    }

    #[test]
    fn sphere_into_disk_plus_sphere() {
        let q = Field::Rational;
        let s = ChainComplex::sphere(q, 0);
        let t = direct_sum(&ChainComplex::disk(q, 1), &s);
        let idx = t.space.index_of(0, "R:s0").unwrap();
        let f = inclusion_as_summand(q, s.space.clone(), t.space.clone(), vec![idx]);
        assert!(is_quasi_iso(&s, &t, &f).unwrap());
        let g = inclusion_as_summand(q, s.space.clone(), t.space.clone(), vec![t.space.index_of(0, "L:b0").unwrap()]);
        assert!(!is_quasi_iso(&s, &t, &g).unwrap());
    }

    #[test]
    fn homology_classes() {
        let f = Field::f2();
        let s = GradedSpace::from_pairs([(0, "a".into()), (0, "b".into()), (1, "e".into())]).unwrap();
        let mut de = Vector::new();
        de.insert(0, f.one());
        de.insert(1, f.one());
        let c = ChainComplex::new(f, s, vec![Vector::new(), Vector::new(), de.clone()]).unwrap();
        let h = homology(&c);
        assert_eq!(h.betti(), BTreeMap::from([(0, 1)]));
        assert!(h.is_boundary(0, &de));
        assert_eq!(h.class_of(0, &linalg::unit(f, 0)), h.class_of(0, &linalg::unit(f, 1)));
    }
}
