//! dg symmetric sequences and the composition product.

use std::collections::{BTreeMap, HashMap};

use crate::complex::koszul;
use crate::error::{Error, Result};
use crate::graded::{ChainComplex, GradedSpace, LinearMap, Window};
use crate::linalg::{self, Echelon, Vector};
use crate::perm::{self, Perm};
use crate::scalar::{Field, Scalar};

/// Per-arity chain complexes with left actions of adjacent transpositions.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricSequence {
    pub field: Field,
    pub components: Vec<ChainComplex>,
    /// `actions[n][j]` is the action of s_j = (j j+1) on `components[n]`.
    pub actions: Vec<Vec<LinearMap>>,
}

impl SymmetricSequence {
    /// Validates that the action maps are chain isomorphisms satisfying the
    /// Coxeter relations.
    pub fn new(field: Field, components: Vec<ChainComplex>, actions: Vec<Vec<LinearMap>>) -> Result<SymmetricSequence> {
        let s = SymmetricSequence { field, components, actions };
        s.check()?;
        Ok(s)
    }

    pub fn zero(field: Field) -> SymmetricSequence {
        SymmetricSequence { field, components: vec![], actions: vec![] }
    }

    pub fn max_arity(&self) -> usize {
        self.components.len().saturating_sub(1)
    }

    pub fn component(&self, n: usize) -> Option<&ChainComplex> {
        self.components.get(n)
    }

    pub fn dim(&self, n: usize) -> usize {
        self.components.get(n).map_or(0, |c| c.dim())
    }

    pub fn is_zero_at(&self, n: usize) -> bool {
        self.dim(n) == 0
    }

    /// Pads with zero components up to arity `a`.
    pub fn padded(&self, a: usize) -> SymmetricSequence {
        let mut s = self.clone();
        while s.components.len() <= a {
            let n = s.components.len();
            let c = ChainComplex::zero(self.field);
            let acts = (0..n.saturating_sub(1)).map(|_| LinearMap::zero(self.field, c.space.clone(), c.space.clone(), 0)).collect();
            s.components.push(c);
            s.actions.push(acts);
        }
        s
    }

    pub fn act_transposition(&self, n: usize, j: usize, v: &Vector) -> Vector {
        self.actions[n][j].apply(v)
    }

    /// Action of an arbitrary permutation.
    pub fn act(&self, n: usize, sigma: &[usize], v: &Vector) -> Vector {
        let mut r = v.clone();
        for a in perm::adjacent_word(sigma) {
            r = self.actions[n][a].apply(&r);
        }
        r
    }

    pub fn check(&self) -> Result<()> {
        if self.actions.len() != self.components.len() {
            return Err(Error::ShapeMismatch("one action list per arity is required".into()));
        }
        for (n, c) in self.components.iter().enumerate() {
            if self.actions[n].len() != n.saturating_sub(1) {
                return Err(Error::ShapeMismatch(format!("arity {n} needs {} transpositions", n.saturating_sub(1))));
            }
            c.check_square_zero()?;
            for (j, a) in self.actions[n].iter().enumerate() {
                if a.degree != 0 || *a.source != *c.space || *a.target != *c.space {
                    return Err(Error::ShapeMismatch(format!("action s_{j} in arity {n} has the wrong shape")));
                }
                if !crate::complex::is_chain_map(c, c, a) {
                    return Err(Error::InvalidInput(format!("action s_{j} in arity {n} is not a chain map")));
                }
            }
            if let Some(w) = coxeter_violation(c, &self.actions[n]) {
                return Err(Error::InvalidInput(format!("arity {n}: {w}")));
            }
        }
        Ok(())
    }

    pub fn dims(&self) -> BTreeMap<usize, BTreeMap<i64, usize>> {
        self.components.iter().enumerate().filter(|(_, c)| c.dim() > 0).map(|(n, c)| (n, c.dims())).collect()
    }
}

/// First failing Coxeter relation, if any.
pub fn coxeter_violation(c: &ChainComplex, acts: &[LinearMap]) -> Option<String> {
    let apply = |word: &[usize], v: &Vector| {
        let mut r = v.clone();
        for &a in word.iter().rev() {
            r = acts[a].apply(&r);
        }
        r
    };
    for b in 0..c.dim() {
        let e = linalg::unit(c.field, b);
        for i in 0..acts.len() {
            if apply(&[i, i], &e) != e {
                return Some(format!("s_{i}^2 != id on {}", c.space.label(b)));
            }
            for j in i + 2..acts.len() {
                if apply(&[i, j], &e) != apply(&[j, i], &e) {
                    return Some(format!("s_{i} s_{j} != s_{j} s_{i} on {}", c.space.label(b)));
                }
            }
            if i + 1 < acts.len() && apply(&[i, i + 1, i], &e) != apply(&[i + 1, i, i + 1], &e) {
                return Some(format!("braid relation fails for s_{i} on {}", c.space.label(b)));
            }
        }
    }
    None
}

fn empty_actions(field: Field, c: &ChainComplex, n: usize) -> Vec<LinearMap> {
    (0..n.saturating_sub(1)).map(|_| LinearMap::zero(field, c.space.clone(), c.space.clone(), 0)).collect()
}

/// I: the ground field in arity 1.
pub fn unit_sequence(field: Field) -> SymmetricSequence {
    let zero = ChainComplex::zero(field);
    let one = ChainComplex::zero_differential(field, GradedSpace::from_pairs([(0, "id".to_string())]).unwrap());
    SymmetricSequence { field, components: vec![zero, one], actions: vec![vec![], vec![]] }
}

/// Left regular representation of S_p on a basis indexed by permutations,
/// placed in the given degrees; `prefix` names the basis.
pub fn regular_representation(field: Field, p: usize, degrees: &[i64], prefix: &str) -> (ChainComplex, Vec<LinearMap>) {
    let perms = perm::all(p);
    let idx: HashMap<Perm, usize> = perms.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let mut pairs = vec![];
    for &d in degrees {
        for s in &perms {
            pairs.push((d, format!("{prefix}{d}.{}", perm::format(s))));
        }
    }
    let space = GradedSpace::from_pairs(pairs).unwrap();
    let np = perms.len();
    let block = |d: i64| degrees.iter().position(|&e| e == d).unwrap() * np;
    let mut dcols = vec![Vector::new(); space.dim()];
    if degrees.len() == 2 {
        // degrees[1] = k maps identically onto degrees[0] = k − 1
        for i in 0..np {
            dcols[block(degrees[1]) + i] = linalg::unit(field, block(degrees[0]) + i);
        }
    }
    let c = ChainComplex::new(field, space, dcols).unwrap();
    let acts = (0..p.saturating_sub(1))
        .map(|j| {
            let t = perm::transposition(p, j);
            let mut cols = vec![Vector::new(); c.dim()];
            for &d in degrees {
                for (i, s) in perms.iter().enumerate() {
                    cols[block(d) + i] = linalg::unit(field, block(d) + idx[&perm::compose(&t, s)]);
                }
            }
            LinearMap { field, source: c.space.clone(), target: c.space.clone(), degree: 0, cols }
        })
        .collect();
    (c, acts)
}

fn concentrated(field: Field, p: usize, c: ChainComplex, acts: Vec<LinearMap>) -> SymmetricSequence {
    let mut comps = vec![];
    let mut actions = vec![];
    for n in 0..=p {
        if n == p {
            comps.push(c.clone());
            actions.push(acts.clone());
        } else {
            let z = ChainComplex::zero(field);
            actions.push(empty_actions(field, &z, n));
            comps.push(z);
        }
    }
    SymmetricSequence { field, components: comps, actions }
}

/// S^k(p): the regular representation of S_p in degree k, arity p.
pub fn sphere_sequence(field: Field, k: i64, p: usize) -> SymmetricSequence {
    let (c, acts) = regular_representation(field, p, &[k], "s");
    concentrated(field, p, c, acts)
}

/// D^k(p): the regular representation in degrees k−1 and k with d = id.
pub fn disk_sequence(field: Field, k: i64, p: usize) -> SymmetricSequence {
    let (c, acts) = regular_representation(field, p, &[k - 1, k], "e");
    concentrated(field, p, c, acts)
}

/// One-dimensional trivial or sign representation in arity p, degree k.
pub fn one_dim_representation(field: Field, k: i64, p: usize, sign: bool) -> SymmetricSequence {
    let c = ChainComplex::zero_differential(field, GradedSpace::from_pairs([(k, "t".to_string())]).unwrap());
    let x = Scalar::sign(field, sign);
    let acts = (0..p.saturating_sub(1))
        .map(|_| {
            let mut v = Vector::new();
            v.insert(0, x.clone());
            LinearMap { field, source: c.space.clone(), target: c.space.clone(), degree: 0, cols: vec![v] }
        })
        .collect();
    concentrated(field, p, c, acts)
}

/// Arity-wise direct sum.
pub fn direct_sum(a: &SymmetricSequence, b: &SymmetricSequence) -> SymmetricSequence {
    let n = a.max_arity().max(b.max_arity());
    let (a, b) = (a.padded(n), b.padded(n));
    let mut comps = vec![];
    let mut actions = vec![];
    for k in 0..=n {
        let ca = &a.components[k];
        let cb = &b.components[k];
        let s = crate::complex::direct_sum(ca, cb);
        // direct_sum sorts by degree stably: recover positions from labels
        let pos = |side: &str, l: &str, d: i64| s.space.index_of(d, &format!("{side}{l}")).unwrap();
        let mut acts = vec![];
        for j in 0..k.saturating_sub(1) {
            let mut cols = vec![Vector::new(); s.dim()];
            for i in 0..ca.dim() {
                let d = ca.space.degree(i);
                cols[pos("L:", ca.space.label(i), d)] =
                    a.actions[k][j].cols[i].iter().map(|(t, x)| (pos("L:", ca.space.label(*t), d), x.clone())).collect();
            }
            for i in 0..cb.dim() {
                let d = cb.space.degree(i);
                cols[pos("R:", cb.space.label(i), d)] =
                    b.actions[k][j].cols[i].iter().map(|(t, x)| (pos("R:", cb.space.label(*t), d), x.clone())).collect();
            }
            acts.push(LinearMap { field: a.field, source: s.space.clone(), target: s.space.clone(), degree: 0, cols });
        }
        comps.push(s);
        actions.push(acts);
    }
    SymmetricSequence { field: a.field, components: comps, actions }
}

/// A summand representative μ ⊗ ν_1 ⊗ ... ⊗ ν_k with blocks S_1..S_k of {0..n−1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompTerm {
    pub mu: usize,
    pub blocks: Vec<Vec<usize>>,
    pub nus: Vec<usize>,
}

impl CompTerm {
    pub fn k(&self) -> usize {
        self.blocks.len()
    }
}

/// Basis data for one arity of M∘N.
#[derive(Clone, Debug)]
pub struct CompositeArity {
    pub terms: Vec<CompTerm>,
    pub term_index: HashMap<CompTerm, usize>,
    pub relations: Echelon,
    /// Term indices forming the basis of the quotient, in basis order.
    pub basis_terms: Vec<usize>,
    pub basis_pos: HashMap<usize, usize>,
}

/// Result of the composition product with its basis bookkeeping.
#[derive(Clone, Debug)]
pub struct Composite {
    pub seq: SymmetricSequence,
    pub arities: Vec<CompositeArity>,
    pub m: SymmetricSequence,
    pub n: SymmetricSequence,
}

/// Partitions of {0..n−1} into k nonempty blocks, blocks sorted by minimum.
pub fn set_partitions(n: usize, k: usize) -> Vec<Vec<Vec<usize>>> {
    // blocks sorted by minimal element, all nonempty
    let mut out = vec![];
    fn rec(i: usize, n: usize, k: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            if cur.len() == k {
                out.push(cur.clone());
            }
            return;
        }
        if k - cur.len() > n - i {
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(i);
            rec(i + 1, n, k, cur, out);
            cur[b].pop();
        }
        if cur.len() < k {
            cur.push(vec![i]);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut vec![], &mut out);
    out
}

impl Composite {
    pub fn field(&self) -> Field {
        self.seq.field
    }

    fn m_comp(&self, k: usize) -> &ChainComplex {
        &self.m.components[k]
    }

    fn n_comp(&self, s: usize) -> &ChainComplex {
        &self.n.components[s]
    }

    pub fn term_degree(&self, t: &CompTerm) -> i64 {
        let mut d = self.m_comp(t.k()).space.degree(t.mu);
        for (b, nu) in t.blocks.iter().zip(&t.nus) {
            d += self.n_comp(b.len()).space.degree(*nu);
        }
        d
    }

    /// Brings an arbitrary term to canonical block order (nonempty blocks by
    /// minimum, then empty blocks in their given order) using the S_k action.
    pub fn canonicalize(&self, t: &CompTerm, coeff: &Scalar) -> Vec<(CompTerm, Scalar)> {
        let k = t.k();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&j| (t.blocks[j].is_empty(), t.blocks[j].first().copied().unwrap_or(0), j));
        // σ(j) = new position of block j
        let mut sigma = vec![0; k];
        for (pos, &j) in order.iter().enumerate() {
            sigma[j] = pos;
        }
        if sigma == perm::identity(k) {
            return vec![(t.clone(), coeff.clone())];
        }
        let degs: Vec<i64> = (0..k).map(|j| self.n_comp(t.blocks[j].len()).space.degree(t.nus[j])).collect();
        let sg = Scalar::sign(self.field(), perm::koszul_parity(&sigma, &degs));
        let blocks: Vec<Vec<usize>> = order.iter().map(|&j| t.blocks[j].clone()).collect();
        let nus: Vec<usize> = order.iter().map(|&j| t.nus[j]).collect();
        let mv = self.m.act(k, &sigma, &linalg::unit(self.field(), t.mu));
        mv.into_iter().map(|(mu, x)| (CompTerm { mu, blocks: blocks.clone(), nus: nus.clone() }, &(&x * &sg) * coeff)).collect()
    }

    /// Coordinates in arity `n` of a combination of (possibly unsorted) terms.
    pub fn project(&self, n: usize, terms: &[(CompTerm, Scalar)]) -> Result<Vector> {
        let ar = &self.arities[n];
        let mut v = Vector::new();
        for (t, x) in terms {
            for (c, y) in self.canonicalize(t, x) {
                let Some(&i) = ar.term_index.get(&c) else {
                    return Err(Error::TruncationOverflow(format!("term outside the truncation in arity {n}")));
                };
                linalg::add_entry(&mut v, i, &y);
            }
        }
        let r = ar.relations.reduce(&v);
        Ok(r.into_iter().map(|(i, x)| (ar.basis_pos[&i], x)).collect())
    }

    pub fn term_label(&self, t: &CompTerm) -> String {
        let mu = self.m_comp(t.k()).space.label(t.mu).to_string();
        let parts: Vec<String> = t
            .blocks
            .iter()
            .zip(&t.nus)
            .map(|(b, nu)| {
                let bl: Vec<String> = b.iter().map(|x| (x + 1).to_string()).collect();
                format!("{}{{{}}}", self.n_comp(b.len()).space.label(*nu), bl.join(","))
            })
            .collect();
        format!("{}({})", mu, parts.join(";"))
    }
}

/// The composition product M∘N up to arity `a`. Degrees outside `window`
/// raise a truncation overflow.
pub fn compose_product(m: &SymmetricSequence, n: &SymmetricSequence, a: usize, window: Option<Window>) -> Result<Composite> {
    let field = m.field;
    let n0 = n.dim(0) > 0;
    let kmax = m.max_arity();
    let m = m.padded(kmax.max(a));
    let nn = n.padded(a.max(n.max_arity()));
    let mut proto = Composite { seq: SymmetricSequence::zero(field), arities: vec![], m: m.clone(), n: nn.clone() };
    let mut comps = vec![];
    for ar in 0..=a {
        let mut terms: Vec<CompTerm> = vec![];
        for k in 0..=kmax {
            let mk = &m.components[k];
            if mk.dim() == 0 {
                continue;
            }
            let mut shapes: Vec<Vec<Vec<usize>>> = vec![];
            let jmin = if n0 { 0 } else { k };
            for j in jmin..=k.min(ar) {
                for mut p in set_partitions(ar, j) {
                    p.extend(std::iter::repeat(vec![]).take(k - j));
                    shapes.push(p);
                }
            }
            for blocks in shapes {
                let sizes: Vec<usize> = blocks.iter().map(|b| b.len()).collect();
                if sizes.iter().any(|&s| s > nn.max_arity() || nn.dim(s) == 0) {
                    continue;
                }
                let mut tuples: Vec<Vec<usize>> = vec![vec![]];
                for &s in &sizes {
                    let mut next = vec![];
                    for t in &tuples {
                        for x in 0..nn.dim(s) {
                            let mut t2 = t.clone();
                            t2.push(x);
                            next.push(t2);
                        }
                    }
                    tuples = next;
                }
                for mu in 0..mk.dim() {
                    for nus in &tuples {
                        terms.push(CompTerm { mu, blocks: blocks.clone(), nus: nus.clone() });
                    }
                }
            }
        }
        // order terms by degree, then by construction order
        let degs: Vec<i64> = terms.iter().map(|t| proto.term_degree(t)).collect();
        let mut order: Vec<usize> = (0..terms.len()).collect();
        order.sort_by_key(|&i| degs[i]);
        let terms: Vec<CompTerm> = order.iter().map(|&i| terms[i].clone()).collect();
        let degs: Vec<i64> = order.iter().map(|&i| degs[i]).collect();
        if let Some(w) = window {
            if let Some(d) = degs.iter().find(|d| !w.contains(**d)) {
                return Err(Error::TruncationOverflow(format!("a summand of arity {ar} has degree {d} outside [{}, {}]", w.lo, w.hi)));
            }
        }
        let term_index: HashMap<CompTerm, usize> = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        // relations from the stabilizers of empty blocks
        let mut relations = Echelon::new(field);
        for (i, t) in terms.iter().enumerate() {
            let k = t.k();
            let first_empty = t.blocks.iter().position(|b| b.is_empty()).unwrap_or(k);
            for j in first_empty..k.saturating_sub(1) {
                let dj = nn.components[0].space.degree(t.nus[j]);
                let dj1 = nn.components[0].space.degree(t.nus[j + 1]);
                let sg = koszul(field, dj * dj1);
                let mv = m.actions[k][j].apply(&linalg::unit(field, t.mu));
                let mut nus = t.nus.clone();
                nus.swap(j, j + 1);
                let mut rel = linalg::unit(field, i);
                for (mu, x) in mv {
                    let t2 = CompTerm { mu, blocks: t.blocks.clone(), nus: nus.clone() };
                    linalg::add_entry(&mut rel, term_index[&t2], &-(&x * &sg));
                }
                let _ = relations.insert(&rel);
            }
        }
        let pivots: std::collections::HashSet<usize> = relations.pivots().copied().collect();
        let basis_terms: Vec<usize> = (0..terms.len()).filter(|i| !pivots.contains(i)).collect();
        let basis_pos: HashMap<usize, usize> = basis_terms.iter().enumerate().map(|(p, i)| (*i, p)).collect();
        proto.arities.push(CompositeArity { terms, term_index, relations, basis_terms, basis_pos });
        let ca = &proto.arities[ar];
        let space = GradedSpace::from_pairs(ca.basis_terms.iter().map(|&i| (degs[i], proto.term_label(&ca.terms[i]))))?;
        comps.push((space, degs));
    }
    // differentials and actions
    let mut components = vec![];
    let mut actions = vec![];
    for (ar, (space, _)) in comps.into_iter().enumerate() {
        let ca = proto.arities[ar].clone();
        let mut dcols = vec![];
        for &ti in &ca.basis_terms {
            let t = &ca.terms[ti];
            let k = t.k();
            let mut out: Vec<(CompTerm, Scalar)> = vec![];
            let mk = &m.components[k];
            for (mu2, x) in &mk.d.cols[t.mu] {
                out.push((CompTerm { mu: *mu2, ..t.clone() }, x.clone()));
            }
            let mut before = mk.space.degree(t.mu);
            for j in 0..k {
                let nc = &nn.components[t.blocks[j].len()];
                let sg = koszul(field, before);
                for (nu2, x) in &nc.d.cols[t.nus[j]] {
                    let mut nus = t.nus.clone();
                    nus[j] = *nu2;
                    out.push((CompTerm { nus, ..t.clone() }, &sg * x));
                }
                before += nc.space.degree(t.nus[j]);
            }
            dcols.push(proto.project(ar, &out)?);
        }
        let c = ChainComplex::new(field, space, dcols)?;
        let mut acts = vec![];
        for j in 0..ar.saturating_sub(1) {
            let mut cols = vec![];
            for &ti in &ca.basis_terms {
                let t = &ca.terms[ti];
                cols.push(proto.project(ar, &act_on_term(&proto, t, j))?);
            }
            acts.push(LinearMap { field, source: c.space.clone(), target: c.space.clone(), degree: 0, cols });
        }
        components.push(c);
        actions.push(acts);
    }
    proto.seq = SymmetricSequence { field, components, actions };
    Ok(proto)
}

/// s_j acting on a term by relabelling j ↔ j+1 in the blocks.
fn act_on_term(comp: &Composite, t: &CompTerm, j: usize) -> Vec<(CompTerm, Scalar)> {
    let field = comp.field();
    let sw = |x: usize| {
        if x == j {
            j + 1
        } else if x == j + 1 {
            j
        } else {
            x
        }
    };
    let bj = t.blocks.iter().position(|b| b.contains(&j)).unwrap();
    let bj1 = t.blocks.iter().position(|b| b.contains(&(j + 1))).unwrap();
    if bj == bj1 {
        let b = &t.blocks[bj];
        let pos = b.iter().position(|&x| x == j).unwrap();
        let nc = &comp.n.components[b.len()];
        let _ = nc;
        let v = comp.n.actions[b.len()][pos].apply(&linalg::unit(field, t.nus[bj]));
        return v
            .into_iter()
            .map(|(nu, x)| {
                let mut nus = t.nus.clone();
                nus[bj] = nu;
                (CompTerm { nus, ..t.clone() }, x)
            })
            .collect();
    }
    let blocks: Vec<Vec<usize>> = t
        .blocks
        .iter()
        .map(|b| {
            let mut c: Vec<usize> = b.iter().map(|&x| sw(x)).collect();
            c.sort();
            c
        })
        .collect();
    vec![(CompTerm { blocks, ..t.clone() }, field.one())]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spheres_and_disks() {
        let f = Field::f2();
        let s = sphere_sequence(f, 0, 2);
        assert_eq!(s.components[2].dims(), BTreeMap::from([(0, 2)]));
        s.check().unwrap();
        let d = disk_sequence(Field::Rational, 3, 3);
        d.check().unwrap();
        assert_eq!(crate::complex::homology(&d.components[3]).space.dim(), 0);
        assert_eq!(sphere_sequence(f, 2, 0).components[0].dim(), 1);
    }

    #[test]
    fn unit_sequence_shape() {
        let u = unit_sequence(Field::Rational);
        assert_eq!(u.dim(0), 0);
        assert_eq!(u.dim(1), 1);
        assert_eq!(u.dim(2), 0);
    }

    #[test]
    fn binary_square_in_arity_four() {
        let f = Field::Rational;
        let s = sphere_sequence(f, 0, 2);
        let c = compose_product(&s, &s, 4, None).unwrap();
        assert_eq!(c.seq.components[4].dims(), BTreeMap::from([(0, 24)]));
        assert_eq!(c.seq.dim(3), 0);
        c.seq.check().unwrap();
    }

    #[test]
    fn unit_laws() {
        let f = Field::Rational;
        let s = direct_sum(&sphere_sequence(f, 1, 2), &disk_sequence(f, 0, 3));
        let i = unit_sequence(f);
        let left = compose_product(&i, &s, 3, None).unwrap();
        let right = compose_product(&s, &i, 3, None).unwrap();
        for n in 0..=3 {
            assert_eq!(left.seq.components[n].dims(), s.components[n].dims());
            assert_eq!(left.seq.components[n].d.cols, s.components[n].d.cols);
            assert_eq!(right.seq.components[n].d.cols, s.components[n].d.cols);
            for j in 0..n.saturating_sub(1) {
                assert_eq!(left.seq.actions[n][j].cols, s.actions[n][j].cols);
                assert_eq!(right.seq.actions[n][j].cols, s.actions[n][j].cols);
            }
        }
    }

    #[test]
    fn empty_blocks_take_coinvariants() {
        let f = Field::Rational;
        // M = trivial rep in arity 2, N = point in arity 0: (M∘N)(0) = (N(0)⊗N(0))_{S_2}
        let m = one_dim_representation(f, 0, 2, false);
        let n = one_dim_representation(f, 1, 0, false);
        let c = compose_product(&m, &n, 2, None).unwrap();
        // odd generator squared is killed by the symmetric coinvariants over Q
        assert_eq!(c.seq.dim(0), 0);
        let n_even = one_dim_representation(f, 2, 0, false);
        let c2 = compose_product(&m, &n_even, 2, None).unwrap();
        assert_eq!(c2.seq.dim(0), 1);
    }
}
