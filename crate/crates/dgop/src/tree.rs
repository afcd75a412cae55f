//! Free operads on decorated trees and quasi-free (cell) presentations.
//!
//! A basis tree has its children sorted by minimal leaf and each vertex
//! decorated by a basis element of the generating sequence M. The tensor
//! factors of a tree are its vertex decorations in preorder; every other
//! ordering is brought to preorder with the Koszul sign of the reordering.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::complex::koszul;
use crate::error::{Error, Result};
use crate::graded::{GradedSpace, Window};
use crate::linalg::{self, Vector};
use crate::operad::{self, empty_space, Operad, OperadMorphism};
use crate::perm::{self, Perm};
use crate::scalar::{Field, Scalar};
use crate::symseq::{self, SymmetricSequence};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Leaf(usize),
    /// Decoration index in M(k) and the k children.
    Node(usize, Vec<Tree>),
}

pub type TreePoly = BTreeMap<Tree, Scalar>;

impl Tree {
    pub fn corolla(dec: usize, k: usize) -> Tree {
        Tree::Node(dec, (0..k).map(Tree::Leaf).collect())
    }

    pub fn arity(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(_, ch) => ch.iter().map(|c| c.arity()).sum(),
        }
    }

    pub fn min_leaf(&self) -> usize {
        match self {
            Tree::Leaf(l) => *l,
            Tree::Node(_, ch) => ch.iter().map(|c| c.min_leaf()).min().unwrap_or(usize::MAX),
        }
    }

    /// Leaves in planar order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = vec![];
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            Tree::Leaf(l) => out.push(*l),
            Tree::Node(_, ch) => ch.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    /// (arity, decoration) of each vertex in preorder.
    pub fn vertices(&self) -> Vec<(usize, usize)> {
        let mut out = vec![];
        fn rec(t: &Tree, out: &mut Vec<(usize, usize)>) {
            if let Tree::Node(d, ch) = t {
                out.push((ch.len(), *d));
                ch.iter().for_each(|c| rec(c, out));
            }
        }
        rec(self, &mut out);
        out
    }

    /// Relabels leaves by their rank.
    pub fn standardized(&self) -> Tree {
        let mut ls = self.leaves();
        ls.sort();
        let rank: HashMap<usize, usize> = ls.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        self.relabel(&|l| rank[&l])
    }

    pub fn relabel(&self, f: &dyn Fn(usize) -> usize) -> Tree {
        match self {
            Tree::Leaf(l) => Tree::Leaf(f(*l)),
            Tree::Node(d, ch) => Tree::Node(*d, ch.iter().map(|c| c.relabel(f)).collect()),
        }
    }
}

pub fn add_poly(p: &mut TreePoly, t: Tree, x: &Scalar) {
    if x.is_zero() {
        return;
    }
    let s = match p.get(&t) {
        Some(y) => y + x,
        None => x.clone(),
    };
    if s.is_zero() {
        p.remove(&t);
    } else {
        p.insert(t, s);
    }
}

pub fn add_poly_scaled(p: &mut TreePoly, c: &Scalar, q: &TreePoly) {
    for (t, x) in q {
        add_poly(p, t.clone(), &(c * x));
    }
}

/// Tree with orientation ids on its vertices; vertex id t is the t-th tensor factor.
#[derive(Clone, Debug)]
enum Raw {
    Leaf(usize),
    Node { id: usize, dec: usize, children: Vec<Raw> },
}

impl Raw {
    fn min_leaf(&self) -> usize {
        match self {
            Raw::Leaf(l) => *l,
            Raw::Node { children, .. } => children.iter().map(|c| c.min_leaf()).min().unwrap_or(usize::MAX),
        }
    }

    fn preorder_ids(&self, out: &mut Vec<usize>) {
        if let Raw::Node { id, children, .. } = self {
            out.push(*id);
            children.iter().for_each(|c| c.preorder_ids(out));
        }
    }

    fn strip(&self) -> Tree {
        match self {
            Raw::Leaf(l) => Tree::Leaf(*l),
            Raw::Node { dec, children, .. } => Tree::Node(*dec, children.iter().map(|c| c.strip()).collect()),
        }
    }

    fn degrees(&self, base: &FreeBase, out: &mut BTreeMap<usize, i64>) {
        if let Raw::Node { id, dec, children } = self {
            out.insert(*id, base.dec_degree(children.len(), *dec));
            children.iter().for_each(|c| c.degrees(base, out));
        }
    }
}

/// The generating sequence M together with the part of the differential on
/// generators that is not the internal differential of M.
#[derive(Clone, Debug)]
pub struct FreeBase {
    pub field: Field,
    pub m: SymmetricSequence,
    /// `extra[k][dec]` is added to the corolla of d_M(dec).
    pub extra: Vec<Vec<TreePoly>>,
}

impl FreeBase {
    pub fn new(m: SymmetricSequence) -> FreeBase {
        let extra = m.components.iter().map(|c| vec![TreePoly::new(); c.dim()]).collect();
        FreeBase { field: m.field, m, extra }
    }

    pub fn dec_degree(&self, k: usize, dec: usize) -> i64 {
        self.m.components[k].space.degree(dec)
    }

    pub fn dec_label(&self, k: usize, dec: usize) -> &str {
        self.m.components[k].space.label(dec)
    }

    pub fn degree(&self, t: &Tree) -> i64 {
        t.vertices().iter().map(|(k, d)| self.dec_degree(*k, *d)).sum()
    }

    /// `label(child,child)` with 1-based leaves.
    pub fn label(&self, t: &Tree) -> String {
        match t {
            Tree::Leaf(l) => (l + 1).to_string(),
            Tree::Node(d, ch) => {
                let parts: Vec<String> = ch.iter().map(|c| self.label(c)).collect();
                format!("{}({})", self.dec_label(ch.len(), *d), parts.join(","))
            }
        }
    }

    pub fn poly_label(&self, p: &TreePoly) -> String {
        if p.is_empty() {
            return "0".into();
        }
        p.iter().map(|(t, x)| format!("{}*{}", x, self.label(t))).collect::<Vec<_>>().join(" + ")
    }

    /// Sorts children by minimal leaf, moving the decorations along the
    /// symmetric action; orientation ids are untouched.
    fn sort_children(&self, raw: &Raw) -> Vec<(Raw, Scalar)> {
        match raw {
            Raw::Leaf(l) => vec![(Raw::Leaf(*l), self.field.one())],
            Raw::Node { id, dec, children } => {
                let k = children.len();
                let alts: Vec<Vec<(Raw, Scalar)>> = children.iter().map(|c| self.sort_children(c)).collect();
                let mut order: Vec<usize> = (0..k).collect();
                order.sort_by_key(|&p| children[p].min_leaf());
                let mut sigma = vec![0; k];
                for (pos, &p) in order.iter().enumerate() {
                    sigma[p] = pos;
                }
                let decs = self.m.act(k, &sigma, &linalg::unit(self.field, *dec));
                let mut combos: Vec<(Vec<Raw>, Scalar)> = vec![(vec![], self.field.one())];
                for alt in &alts {
                    let mut next = vec![];
                    for (cs, x) in &combos {
                        for (r, y) in alt {
                            let mut cs2 = cs.clone();
                            cs2.push(r.clone());
                            next.push((cs2, x * y));
                        }
                    }
                    combos = next;
                }
                let mut out = vec![];
                for (cs, x) in combos {
                    let sorted: Vec<Raw> = order.iter().map(|&p| cs[p].clone()).collect();
                    for (d2, y) in &decs {
                        out.push((Raw::Node { id: *id, dec: *d2, children: sorted.clone() }, &x * y));
                    }
                }
                out
            }
        }
    }

    fn canonicalize(&self, raw: &Raw, coeff: &Scalar, out: &mut TreePoly) {
        let mut degs = BTreeMap::new();
        raw.degrees(self, &mut degs);
        let degs: Vec<i64> = degs.values().copied().collect();
        for (r, x) in self.sort_children(raw) {
            let mut ids = vec![];
            r.preorder_ids(&mut ids);
            let mut sigma = vec![0; ids.len()];
            for (pos, id) in ids.iter().enumerate() {
                sigma[*id] = pos;
            }
            let sg = Scalar::sign(self.field, perm::koszul_parity(&sigma, &degs));
            add_poly(out, r.strip(), &(&(&x * &sg) * coeff));
        }
    }

    fn to_raw(t: &Tree, next: &mut usize, leaf: &dyn Fn(usize) -> Raw) -> Raw {
        match t {
            Tree::Leaf(l) => leaf(*l),
            Tree::Node(d, ch) => {
                let id = *next;
                *next += 1;
                Raw::Node { id, dec: *d, children: ch.iter().map(|c| FreeBase::to_raw(c, next, leaf)).collect() }
            }
        }
    }

    /// Canonical form of a tree whose tensor factors are in preorder of the
    /// given (unsorted) shape.
    pub fn normalize(&self, t: &Tree) -> TreePoly {
        let mut next = 0;
        let raw = FreeBase::to_raw(t, &mut next, &|l| Raw::Leaf(l));
        let mut out = TreePoly::new();
        self.canonicalize(&raw, &self.field.one(), &mut out);
        out
    }

    /// t ∘_i s (0-based slot).
    pub fn graft(&self, t: &Tree, i: usize, s: &Tree) -> TreePoly {
        let m = s.arity();
        let mut next_s = t.vertices().len();
        let s_raw = FreeBase::to_raw(s, &mut next_s, &|l| Raw::Leaf(l + i));
        let mut next = 0;
        let raw = FreeBase::to_raw(t, &mut next, &|l| {
            if l < i {
                Raw::Leaf(l)
            } else if l == i {
                s_raw.clone()
            } else {
                Raw::Leaf(l + m - 1)
            }
        });
        let mut out = TreePoly::new();
        self.canonicalize(&raw, &self.field.one(), &mut out);
        out
    }

    /// σ·t: leaf l becomes leaf σ(l).
    pub fn act_tree(&self, sigma: &[usize], t: &Tree) -> TreePoly {
        let mut next = 0;
        let raw = FreeBase::to_raw(t, &mut next, &|l| Raw::Leaf(sigma[l]));
        let mut out = TreePoly::new();
        self.canonicalize(&raw, &self.field.one(), &mut out);
        out
    }

    /// d of a single vertex: the corolla of d_M plus the attached boundary.
    pub fn vertex_boundary(&self, k: usize, dec: usize) -> TreePoly {
        let mut p = self.extra[k][dec].clone();
        for (d2, x) in &self.m.components[k].d.cols[dec] {
            add_poly(&mut p, Tree::corolla(*d2, k), x);
        }
        p
    }

    /// The derivation extending the vertex boundaries.
    pub fn d_tree(&self, t: &Tree) -> TreePoly {
        let verts = t.vertices();
        let nv = verts.len();
        let mut out = TreePoly::new();
        let mut before = 0i64;
        for p in 0..nv {
            let (k, dec) = verts[p];
            let q = self.vertex_boundary(k, dec);
            let sg = koszul(self.field, before);
            before += self.dec_degree(k, dec);
            for (qt, x) in &q {
                let qn = qt.vertices().len();
                let mut pos = 0usize;
                let raw = subst_raw(t, p, qt, qn, &mut pos);
                self.canonicalize(&raw, &(&sg * x), &mut out);
            }
        }
        out
    }

    pub fn d_poly(&self, p: &TreePoly) -> TreePoly {
        let mut out = TreePoly::new();
        for (t, x) in p {
            add_poly_scaled(&mut out, x, &self.d_tree(t));
        }
        out
    }

    pub fn act_poly(&self, sigma: &[usize], p: &TreePoly) -> TreePoly {
        let mut out = TreePoly::new();
        for (t, x) in p {
            add_poly_scaled(&mut out, x, &self.act_tree(sigma, t));
        }
        out
    }

    pub fn graft_poly(&self, p: &TreePoly, i: usize, q: &TreePoly) -> TreePoly {
        let mut out = TreePoly::new();
        for (t, x) in p {
            for (s, y) in q {
                add_poly_scaled(&mut out, &(x * y), &self.graft(t, i, s));
            }
        }
        out
    }

    /// All basis trees on leaves {0..n−1} with at most `unary` unary vertices.
    pub fn enumerate(&self, n: usize, unary: usize) -> Vec<Tree> {
        let leaves: Vec<usize> = (0..n).collect();
        let mut memo = HashMap::new();
        self.gen(&leaves, unary, &mut memo).into_iter().map(|(t, _)| t).collect()
    }

    fn gen(&self, leaves: &[usize], budget: usize, memo: &mut HashMap<(Vec<usize>, usize), Vec<(Tree, usize)>>) -> Vec<(Tree, usize)> {
        if let Some(r) = memo.get(&(leaves.to_vec(), budget)) {
            return r.clone();
        }
        let mut out = vec![];
        let n = leaves.len();
        if n == 1 {
            out.push((Tree::Leaf(leaves[0]), 0));
        }
        for k in 1..=n {
            let dk = self.m.dim(k);
            if dk == 0 {
                continue;
            }
            if k == 1 {
                if budget == 0 {
                    continue;
                }
                for (c, u) in self.gen(leaves, budget - 1, memo) {
                    for d in 0..dk {
                        out.push((Tree::Node(d, vec![c.clone()]), u + 1));
                    }
                }
                continue;
            }
            for part in symseq::set_partitions(n, k) {
                let mut combos: Vec<(Vec<Tree>, usize)> = vec![(vec![], 0)];
                for block in &part {
                    let sub: Vec<usize> = block.iter().map(|&x| leaves[x]).collect();
                    let alts = self.gen(&sub, budget, memo);
                    let mut next = vec![];
                    for (cs, u) in &combos {
                        for (t, v) in &alts {
                            if u + v <= budget {
                                let mut cs2 = cs.clone();
                                cs2.push(t.clone());
                                next.push((cs2, u + v));
                            }
                        }
                    }
                    combos = next;
                }
                for (cs, u) in combos {
                    for d in 0..dk {
                        out.push((Tree::Node(d, cs.clone()), u));
                    }
                }
            }
        }
        memo.insert((leaves.to_vec(), budget), out.clone());
        out
    }
}

/// The tree t with its p-th vertex (preorder) replaced by q, orientation ids
/// following preorder of t with the vertex expanded into q's vertices.
fn subst_raw(t: &Tree, p: usize, q: &Tree, qn: usize, pos: &mut usize) -> Raw {
    match t {
        Tree::Leaf(l) => Raw::Leaf(*l),
        Tree::Node(d, ch) => {
            let here = *pos;
            *pos += 1;
            if here == p {
                let children: Vec<Raw> = ch.iter().map(|c| subst_raw(c, p, q, qn, pos)).collect();
                let mut next = p;
                plug(q, &children, &mut next)
            } else {
                let id = if here < p { here } else { here + qn - 1 };
                Raw::Node { id, dec: *d, children: ch.iter().map(|c| subst_raw(c, p, q, qn, pos)).collect() }
            }
        }
    }
}

fn plug(q: &Tree, children: &[Raw], next: &mut usize) -> Raw {
    match q {
        Tree::Leaf(l) => children[*l].clone(),
        Tree::Node(d, ch) => {
            let id = *next;
            *next += 1;
            Raw::Node { id, dec: *d, children: ch.iter().map(|c| plug(c, children, next)).collect() }
        }
    }
}

/// Target of tree evaluation: an operad-like structure with partial
/// composites and symmetric actions on elements of type `E`.
pub trait TreeTarget {
    type E: Clone;
    fn unit(&self) -> Self::E;
    fn generator(&self, k: usize, dec: usize) -> Option<Self::E>;
    /// a ∘_i b with a of arity n and b of arity m.
    fn compose(&self, a: &Self::E, n: usize, i: usize, b: &Self::E, m: usize) -> Option<Self::E>;
    fn act(&self, n: usize, sigma: &[usize], a: &Self::E) -> Self::E;
    fn zero(&self, n: usize, degree: i64) -> Self::E;
    fn add_scaled(&self, acc: &mut Self::E, c: &Scalar, x: &Self::E);
}

/// Value of a tree on leaves {0..n−1}: the left-to-right composite of the
/// children into the root followed by the leaf relabelling.
pub fn evaluate<T: TreeTarget>(target: &T, t: &Tree) -> Option<T::E> {
    match t {
        Tree::Leaf(_) => Some(target.unit()),
        Tree::Node(d, ch) => {
            let mut acc = target.generator(ch.len(), *d)?;
            let mut ar = ch.len();
            let mut pos = 0;
            let mut planar = vec![];
            for c in ch {
                let mut ls = c.leaves();
                ls.sort();
                let a = ls.len();
                if let Tree::Node(..) = c {
                    let v = evaluate(target, &c.standardized())?;
                    acc = target.compose(&acc, ar, pos, &v, a)?;
                    ar += a - 1;
                }
                pos += a;
                planar.extend(ls);
            }
            if planar.iter().enumerate().any(|(q, l)| q != *l) {
                acc = target.act(ar, &planar, &acc);
            }
            Some(acc)
        }
    }
}

pub fn evaluate_poly<T: TreeTarget>(target: &T, n: usize, degree: i64, p: &TreePoly) -> Option<T::E> {
    let mut acc = target.zero(n, degree);
    for (t, x) in p {
        let v = evaluate(target, t)?;
        target.add_scaled(&mut acc, x, &v);
    }
    Some(acc)
}

/// Evaluation in a truncated operad given generator images.
pub struct OperadTarget<'a> {
    pub op: &'a dyn Operad,
    /// `images[k][dec]`
    pub images: &'a [Vec<Vector>],
}

impl TreeTarget for OperadTarget<'_> {
    type E = Vector;
    fn unit(&self) -> Vector {
        self.op.unit()
    }
    fn generator(&self, k: usize, dec: usize) -> Option<Vector> {
        self.images.get(k)?.get(dec).cloned()
    }
    fn compose(&self, a: &Vector, n: usize, i: usize, b: &Vector, m: usize) -> Option<Vector> {
        if n + m - 1 > self.op.max_arity() {
            return None;
        }
        operad::compose_vec(self.op, n, i, m, a, b)
    }
    fn act(&self, n: usize, sigma: &[usize], a: &Vector) -> Vector {
        operad::act_perm(self.op, n, sigma, a)
    }
    fn zero(&self, _: usize, _: i64) -> Vector {
        Vector::new()
    }
    fn add_scaled(&self, acc: &mut Vector, c: &Scalar, x: &Vector) {
        linalg::add_scaled(acc, c, x)
    }
}

/// Truncation record of a computed free operad.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Truncation {
    pub max_arity: usize,
    pub deg_min: Option<i64>,
    pub deg_max: Option<i64>,
    /// Bound on unary vertices per tree guaranteeing completeness in the window.
    pub unary_bound: usize,
    pub max_vertices: Option<usize>,
    /// Every component within (max_arity, window) is complete.
    pub complete: bool,
}

/// The free (or quasi-free) operad on a base, truncated at arity A and a degree window.
#[derive(Clone, Debug)]
pub struct FreeOperad {
    pub base: FreeBase,
    pub max: usize,
    pub window: Option<Window>,
    pub truncation: Truncation,
    spaces: Vec<GradedSpace>,
    trees: Vec<Vec<Tree>>,
    index: Vec<HashMap<Tree, usize>>,
}

impl FreeOperad {
    pub fn new(base: FreeBase, max: usize, window: Option<Window>) -> Result<FreeOperad> {
        FreeOperad::with_weight(base, max, window, None)
    }

    /// Also keeps only trees with at most `weight` vertices; composites and
    /// boundaries of heavier trees are reported as outside the truncation.
    pub fn with_weight(base: FreeBase, max: usize, window: Option<Window>, weight: Option<usize>) -> Result<FreeOperad> {
        if base.m.dim(0) > 0 {
            return Err(Error::InvalidInput("arity-0 generators are not supported".into()));
        }
        let unary = match (unary_bound(&base.m, max, window), weight) {
            (Ok(u), Some(w)) => u.min(w),
            (Ok(u), None) => u,
            (Err(_), Some(w)) => w,
            (Err(e), None) => return Err(e),
        };
        let mut spaces = vec![];
        let mut trees = vec![];
        let mut index = vec![];
        for n in 0..=max {
            let mut ts: Vec<(i64, Tree)> =
                if n == 0 { vec![] } else { base.enumerate(n, unary).into_iter().map(|t| (base.degree(&t), t)).collect() };
            if let Some(w) = window {
                ts.retain(|(d, _)| w.contains(*d));
            }
            if let Some(w) = weight {
                ts.retain(|(_, t)| t.vertices().len() <= w);
            }
            ts.sort();
            let space = GradedSpace::from_pairs(ts.iter().map(|(d, t)| (*d, base.label(t))))?;
            index.push(ts.iter().enumerate().map(|(i, (_, t))| (t.clone(), i)).collect());
            trees.push(ts.into_iter().map(|(_, t)| t).collect());
            spaces.push(space);
        }
        let truncation = Truncation {
            max_arity: max,
            deg_min: window.map(|w| w.lo),
            deg_max: window.map(|w| w.hi),
            unary_bound: unary,
            max_vertices: weight,
            complete: true,
        };
        Ok(FreeOperad { base, max, window, truncation, spaces, trees, index })
    }

    pub fn trees(&self, n: usize) -> &[Tree] {
        self.trees.get(n).map_or(&[], |v| v.as_slice())
    }

    pub fn tree_index(&self, n: usize, t: &Tree) -> Option<usize> {
        self.index.get(n)?.get(t).copied()
    }

    pub fn poly_to_vector(&self, n: usize, p: &TreePoly) -> Option<Vector> {
        let mut v = Vector::new();
        for (t, x) in p {
            linalg::add_entry(&mut v, self.tree_index(n, t)?, x);
        }
        Some(v)
    }

    pub fn vector_to_poly(&self, n: usize, v: &Vector) -> TreePoly {
        v.iter().map(|(b, x)| (self.trees[n][*b].clone(), x.clone())).collect()
    }

    /// Checks d² = 0 symbolically on every basis tree.
    pub fn check_square_zero(&self) -> Result<()> {
        for n in 0..=self.max {
            for t in &self.trees[n] {
                let dd = self.base.d_poly(&self.base.d_tree(t));
                if !dd.is_empty() {
                    return Err(Error::NotAComplex(format!("d^2({}) = {}", self.base.label(t), self.base.poly_label(&dd))));
                }
            }
        }
        Ok(())
    }

    pub fn dims(&self) -> Vec<BTreeMap<i64, usize>> {
        self.spaces.iter().map(|s| s.dims()).collect()
    }
}

impl Operad for FreeOperad {
    fn field(&self) -> Field {
        self.base.field
    }
    fn max_arity(&self) -> usize {
        self.max
    }
    fn space(&self, n: usize) -> &GradedSpace {
        self.spaces.get(n).unwrap_or(empty_space())
    }
    fn differential(&self, n: usize, b: usize) -> Option<Vector> {
        self.poly_to_vector(n, &self.base.d_tree(&self.trees[n][b]))
    }
    fn act(&self, n: usize, j: usize, b: usize) -> Vector {
        let p = self.base.act_tree(&perm::transposition(n, j), &self.trees[n][b]);
        self.poly_to_vector(n, &p).expect("the action preserves degree")
    }
    fn unit(&self) -> Vector {
        linalg::unit(self.base.field, self.index[1][&Tree::Leaf(0)])
    }
    fn compose(&self, n: usize, i: usize, m: usize, a: usize, b: usize) -> Option<Vector> {
        if n + m - 1 > self.max {
            return None;
        }
        self.poly_to_vector(n + m - 1, &self.base.graft(&self.trees[n][a], i, &self.trees[m][b]))
    }
}

/// Largest number of unary vertices a tree of arity ≤ A can carry while its
/// degree stays in the window.
pub fn unary_bound(m: &SymmetricSequence, max: usize, window: Option<Window>) -> Result<usize> {
    if m.dim(1) == 0 {
        return Ok(0);
    }
    let degs: Vec<i64> = (0..m.dim(1)).map(|i| m.components[1].space.degree(i)).collect();
    if degs.iter().any(|d| *d == 0) {
        return Err(Error::NonStabilization("a degree-0 unary generator gives infinitely many trees per degree".into()));
    }
    let pos = degs.iter().all(|d| *d > 0);
    let neg = degs.iter().all(|d| *d < 0);
    if !pos && !neg {
        return Err(Error::NonStabilization("unary generators of both signs give infinitely many trees per degree".into()));
    }
    let Some(w) = window else {
        return Err(Error::NonStabilization("unary generators need a degree window".into()));
    };
    let higher: Vec<i64> = (2..=max.min(m.max_arity()))
        .flat_map(|k| (0..m.dim(k)).map(move |i| (k, i)))
        .map(|(k, i)| m.components[k].space.degree(i))
        .collect();
    let branch = max.saturating_sub(1) as i64;
    let a = degs.iter().map(|d| d.abs()).min().unwrap();
    let room = if pos {
        let gmin = higher.iter().copied().min().unwrap_or(0).min(0);
        w.hi - branch * gmin
    } else {
        let gmax = higher.iter().copied().max().unwrap_or(0).max(0);
        branch * gmax - w.lo
    };
    Ok(if room < 0 { 0 } else { (room / a) as usize })
}

/// Dimensions of the iterated composites T^(j) = I ⊕ M ∘ T^(j−1) restricted
/// to the window, iterated `steps` times.
pub fn recursion_dims(m: &SymmetricSequence, max: usize, window: Option<Window>, steps: usize) -> Result<Vec<BTreeMap<i64, usize>>> {
    let field = m.field;
    let unit = symseq::unit_sequence(field).padded(max);
    let mut t = unit.clone();
    for _ in 0..steps {
        let c = symseq::compose_product(m, &t, max, None)?;
        t = symseq::direct_sum(&unit, &c.seq);
    }
    Ok((0..=max)
        .map(|n| {
            let mut d = t.components.get(n).map(|c| c.dims()).unwrap_or_default();
            if let Some(w) = window {
                d.retain(|k, _| w.contains(*k));
            }
            d
        })
        .collect())
}

/// A tree monomial with generator names, as written in input files.
#[derive(Clone, Debug, PartialEq)]
pub enum NamedTree {
    /// 0-based leaf.
    Leaf(usize),
    Node(String, Vec<NamedTree>),
}

pub type NamedPoly = Vec<(Scalar, NamedTree)>;

impl NamedTree {
    pub fn arity(&self) -> usize {
        match self {
            NamedTree::Leaf(_) => 1,
            NamedTree::Node(_, ch) => ch.iter().map(|c| c.arity()).sum(),
        }
    }

    fn leaves(&self, out: &mut Vec<usize>) {
        match self {
            NamedTree::Leaf(l) => out.push(*l),
            NamedTree::Node(_, ch) => ch.iter().for_each(|c| c.leaves(out)),
        }
    }

    pub fn corolla(name: &str, k: usize) -> NamedTree {
        NamedTree::Node(name.into(), (0..k).map(NamedTree::Leaf).collect())
    }

    /// Literal substitution of `other` at leaf i. For a corolla this is
    /// self ∘_i other; in general use [`FreeBase::graft`].
    fn plug(&self, i: usize, other: &NamedTree, m: usize) -> NamedTree {
        match self {
            NamedTree::Leaf(l) if *l == i => other.shift(i),
            NamedTree::Leaf(l) if *l > i => NamedTree::Leaf(l + m - 1),
            NamedTree::Leaf(l) => NamedTree::Leaf(*l),
            NamedTree::Node(n, ch) => NamedTree::Node(n.clone(), ch.iter().map(|c| c.plug(i, other, m)).collect()),
        }
    }

    fn shift(&self, by: usize) -> NamedTree {
        match self {
            NamedTree::Leaf(l) => NamedTree::Leaf(l + by),
            NamedTree::Node(n, ch) => NamedTree::Node(n.clone(), ch.iter().map(|c| c.shift(by)).collect()),
        }
    }
}

impl FreeBase {
    /// Resolves names against M; leaves must be a permutation of 0..n−1.
    /// The tensor order is the preorder of the literal shape.
    pub fn resolve(&self, t: &NamedTree) -> Result<TreePoly> {
        let mut ls = vec![];
        t.leaves(&mut ls);
        let mut sorted = ls.clone();
        sorted.sort();
        if sorted != (0..ls.len()).collect::<Vec<_>>() {
            return Err(Error::InvalidInput("tree leaves must be 1..n, each once".into()));
        }
        fn conv(b: &FreeBase, t: &NamedTree) -> Result<Tree> {
            match t {
                NamedTree::Leaf(l) => Ok(Tree::Leaf(*l)),
                NamedTree::Node(name, ch) => {
                    let k = ch.len();
                    if k == 0 {
                        return Err(Error::InvalidInput(format!("vertex '{name}' has no inputs")));
                    }
                    let dec =
                        b.m.components
                            .get(k)
                            .and_then(|c| c.space.find_label(name))
                            .ok_or_else(|| Error::InvalidInput(format!("unknown generator '{name}' of arity {k}")))?;
                    Ok(Tree::Node(dec, ch.iter().map(|c| conv(b, c)).collect::<Result<_>>()?))
                }
            }
        }
        Ok(self.normalize(&conv(self, t)?))
    }

    pub fn resolve_poly(&self, p: &NamedPoly) -> Result<TreePoly> {
        let mut out = TreePoly::new();
        for (x, t) in p {
            add_poly_scaled(&mut out, x, &self.resolve(t)?);
        }
        Ok(out)
    }

    /// Inverse of [`FreeBase::resolve`] on canonical trees.
    pub fn name_tree(&self, t: &Tree) -> NamedTree {
        match t {
            Tree::Leaf(l) => NamedTree::Leaf(*l),
            Tree::Node(d, ch) => NamedTree::Node(self.dec_label(ch.len(), *d).to_string(), ch.iter().map(|c| self.name_tree(c)).collect()),
        }
    }
}

/// A generating cell: a generator of arity p and degree k with boundary a
/// tree polynomial in earlier generators.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub name: String,
    pub arity: usize,
    pub degree: i64,
    pub boundary: NamedPoly,
}

/// Quasi-free presentation: an ordered list of cells. Each generator x spans
/// a copy of 𝕜[S_p]; its basis element σ·x is named `x` for σ = id and
/// `x.σ` otherwise (σ in one-line notation).
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    pub field: Field,
    pub cells: Vec<Cell>,
}

pub fn generator_label(name: &str, sigma: &[usize]) -> String {
    if sigma.iter().enumerate().all(|(i, x)| i == *x) {
        name.to_string()
    } else {
        format!("{name}.{}", perm::format(sigma))
    }
}

impl Presentation {
    pub fn empty(field: Field) -> Presentation {
        Presentation { field, cells: vec![] }
    }

    /// Validates each cell against the earlier ones.
    pub fn new(field: Field, cells: Vec<Cell>) -> Result<Presentation> {
        let mut p = Presentation::empty(field);
        for c in cells {
            p = p.attach_cell(c)?;
        }
        Ok(p)
    }

    pub fn max_cell_arity(&self) -> usize {
        self.cells.iter().map(|c| c.arity).max().unwrap_or(1)
    }

    /// The generating sequence and generator boundaries.
    pub fn base(&self) -> Result<FreeBase> {
        self.base_upto(self.cells.len())
    }

    fn base_upto(&self, count: usize) -> Result<FreeBase> {
        let field = self.field;
        let cells = &self.cells[..count];
        let amax = cells.iter().map(|c| c.arity).max().unwrap_or(1);
        let mut comps = vec![];
        let mut actions = vec![];
        let mut owners: Vec<Vec<(usize, Perm)>> = vec![];
        for k in 0..=amax {
            let mut pairs = vec![];
            for (ci, c) in cells.iter().enumerate().filter(|(_, c)| c.arity == k) {
                for s in perm::all(k) {
                    pairs.push((c.degree, generator_label(&c.name, &s), ci, s));
                }
            }
            pairs.sort_by_key(|p| p.0);
            let space = GradedSpace::from_pairs(pairs.iter().map(|p| (p.0, p.1.clone())))?;
            let cc = crate::graded::ChainComplex::zero_differential(field, space);
            let idx: HashMap<(usize, Perm), usize> = pairs.iter().enumerate().map(|(i, p)| ((p.2, p.3.clone()), i)).collect();
            let acts = (0..k.saturating_sub(1))
                .map(|j| {
                    let t = perm::transposition(k, j);
                    let cols = pairs.iter().map(|p| linalg::unit(field, idx[&(p.2, perm::compose(&t, &p.3))])).collect();
                    crate::graded::LinearMap { field, source: cc.space.clone(), target: cc.space.clone(), degree: 0, cols }
                })
                .collect();
            owners.push(pairs.iter().map(|p| (p.2, p.3.clone())).collect());
            comps.push(cc);
            actions.push(acts);
        }
        let m = SymmetricSequence { field, components: comps, actions };
        let mut base = FreeBase::new(m);
        for k in 0..=amax {
            for (dec, (ci, s)) in owners[k].iter().enumerate() {
                let b = base.resolve_poly(&cells[*ci].boundary)?;
                let b = base.act_poly(s, &b);
                base.extra[k][dec] = b;
            }
        }
        Ok(base)
    }

    /// Appends a cell after checking shape, degree and the cycle condition.
    pub fn attach_cell(&self, cell: Cell) -> Result<Presentation> {
        if cell.arity == 0 {
            return Err(Error::InvalidInput("arity-0 cells are not supported".into()));
        }
        if cell.name.is_empty() || cell.name.contains(['.', '(', ')', ',', ' ']) {
            return Err(Error::InvalidInput(format!("invalid generator name '{}'", cell.name)));
        }
        if self.cells.iter().any(|c| c.name == cell.name) {
            return Err(Error::InvalidInput(format!("generator '{}' already exists", cell.name)));
        }
        let base = self.base()?;
        for (_, t) in &cell.boundary {
            if t.arity() != cell.arity {
                return Err(Error::InvalidInput(format!(
                    "boundary of '{}' has a term of arity {} instead of {}",
                    cell.name,
                    t.arity(),
                    cell.arity
                )));
            }
        }
        let b = base.resolve_poly(&cell.boundary)?;
        for t in b.keys() {
            if base.degree(t) != cell.degree - 1 {
                return Err(Error::InvalidInput(format!(
                    "boundary term {} of '{}' has degree {} instead of {}",
                    base.label(t),
                    cell.name,
                    base.degree(t),
                    cell.degree - 1
                )));
            }
        }
        let db = base.d_poly(&b);
        if !db.is_empty() {
            return Err(Error::NotACycle(format!("d(boundary of '{}') = {}", cell.name, base.poly_label(&db))));
        }
        let mut p = self.clone();
        p.cells.push(cell);
        Ok(p)
    }

    /// Drops the last cell.
    pub fn without_last(&self) -> Presentation {
        let mut p = self.clone();
        p.cells.pop();
        p
    }

    pub fn realize(&self, max: usize, window: Option<Window>) -> Result<FreeOperad> {
        self.realize_weighted(max, window, None)
    }

    pub fn realize_weighted(&self, max: usize, window: Option<Window>, weight: Option<usize>) -> Result<FreeOperad> {
        let op = FreeOperad::with_weight(self.base()?, max, window, weight)?;
        op.check_square_zero()?;
        Ok(op)
    }
}

/// Generators Δ_2..Δ_N (named `D2`, `D3`, ...) with the A∞ boundaries.
pub fn ainfty_presentation(field: Field, n_max: usize) -> Presentation {
    let mut cells = vec![];
    for n in 2..=n_max {
        let mut boundary = vec![];
        for k in 2..n {
            let s = n + 1 - k;
            for r in 0..k {
                let t = k - 1 - r;
                let e = n + r + s * t + (k - 2) * (s - 2);
                let outer = NamedTree::corolla(&format!("D{k}"), k);
                let inner = NamedTree::corolla(&format!("D{s}"), s);
                boundary.push((Scalar::sign(field, e % 2 == 1), outer.plug(r, &inner, s)));
            }
        }
        cells.push(Cell { name: format!("D{n}"), arity: n, degree: n as i64 - 2, boundary });
    }
    Presentation::new(field, cells).expect("the A-infinity boundaries are cycles")
}

/// The cell pair T(S^{k−1}(p)) → T(D^k(p)): generators `b` (degree k−1,
/// boundary 0) and `a` (degree k, boundary b).
pub fn disk_presentation(field: Field, p: usize, k: i64) -> Presentation {
    let b = Cell { name: "b".into(), arity: p, degree: k - 1, boundary: vec![] };
    let a = Cell { name: "a".into(), arity: p, degree: k, boundary: vec![(field.one(), NamedTree::corolla("b", p))] };
    Presentation::new(field, vec![b, a]).unwrap()
}

/// Morphism out of a free operad, determined by generator images.
pub struct FreeMorphism<'a> {
    pub source: &'a FreeOperad,
    pub target: &'a dyn Operad,
    /// `images[k][dec]`
    pub images: Vec<Vec<Vector>>,
}

/// Splits a presentation generator label into the cell name and σ.
pub fn split_generator_label(label: &str, k: usize) -> (String, Perm) {
    match label.split_once('.') {
        Some((n, s)) => (n.to_string(), perm::parse(s).unwrap_or_else(|| perm::identity(k))),
        None => (label.to_string(), perm::identity(k)),
    }
}

impl<'a> FreeMorphism<'a> {
    /// Images given on the generators x = id·x of a presentation; the other
    /// basis elements σ·x map to σ·φ(x).
    pub fn from_cells(source: &'a FreeOperad, target: &'a dyn Operad, cell_images: &HashMap<String, Vector>) -> Result<FreeMorphism<'a>> {
        let m = &source.base.m;
        let mut images = vec![];
        for k in 0..m.components.len() {
            let mut row = vec![];
            for dec in 0..m.dim(k) {
                let label = m.components[k].space.label(dec);
                let (name, sigma) = split_generator_label(label, k);
                let v = cell_images.get(&name).ok_or_else(|| Error::InvalidInput(format!("no image for generator '{name}'")))?;
                row.push(operad::act_perm(target, k, &sigma, v));
            }
            images.push(row);
        }
        Ok(FreeMorphism { source, target, images })
    }
}

impl OperadMorphism for FreeMorphism<'_> {
    fn image(&self, n: usize, b: usize) -> Option<Vector> {
        let t = &self.source.trees(n)[b];
        evaluate(&OperadTarget { op: self.target, images: &self.images }, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::{check_axioms, verify_morphism, AssociativeOperad, AxiomConfig};

    fn binary(field: Field) -> Presentation {
        Presentation::new(field, vec![Cell { name: "m".into(), arity: 2, degree: 0, boundary: vec![] }]).unwrap()
    }

    #[test]
    fn free_binary_dimensions() {
        let f = Field::Rational;
        let op = binary(f).realize(4, None).unwrap();
        let dims: Vec<usize> = (1..=4).map(|n| op.space(n).dim()).collect();
        assert_eq!(dims, vec![1, 2, 12, 120]);
        assert!(check_axioms(&op, &AxiomConfig::sampled(3, 300)).passed());
    }

    #[test]
    fn trivial_representation_arity_three() {
        let f = Field::Rational;
        let m = symseq::one_dim_representation(f, 0, 2, false);
        let op = FreeOperad::new(FreeBase::new(m), 3, None).unwrap();
        assert_eq!(op.space(3).dim(), 3);
        let r = check_axioms(&op, &AxiomConfig::exhaustive());
        assert!(r.passed(), "{r:?}");
        let odd = FreeOperad::new(FreeBase::new(symseq::one_dim_representation(f, 1, 2, true)), 3, None).unwrap();
        let r = check_axioms(&odd, &AxiomConfig::exhaustive());
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn evaluation_in_itself_is_identity() {
        let f = Field::Rational;
        let p = ainfty_presentation(f, 4);
        let op = p.realize(4, None).unwrap();
        let images: Vec<Vec<Vector>> = (0..op.base.m.components.len())
            .map(|k| (0..op.base.m.dim(k)).map(|d| op.poly_to_vector(k, &op.base.normalize(&Tree::corolla(d, k))).unwrap()).collect())
            .collect();
        let t = OperadTarget { op: &op, images: &images };
        for n in 1..=4 {
            for (b, tr) in op.trees(n).iter().enumerate() {
                assert_eq!(evaluate(&t, tr).unwrap(), linalg::unit(f, b), "{}", op.base.label(tr));
            }
        }
    }

    #[test]
    fn ainfty_realization() {
        for f in [Field::Rational, Field::f2(), Field::prime(3).unwrap()] {
            let op = ainfty_presentation(f, 4).realize(4, None).unwrap();
            let r = check_axioms(&op, &AxiomConfig::sampled(11, 500));
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn non_cycle_boundary_rejected() {
        let f = Field::Rational;
        let p = ainfty_presentation(f, 3);
        let bad = Cell { name: "x".into(), arity: 3, degree: 2, boundary: vec![(f.one(), NamedTree::corolla("D3", 3))] };
        assert!(matches!(p.attach_cell(bad), Err(Error::NotACycle(_))));
    }

    #[test]
    fn quotient_to_associative() {
        let f = Field::Rational;
        let op = binary(f).realize(3, None).unwrap();
        let target = AssociativeOperad::new(f, 3);
        let imgs = HashMap::from([("m".to_string(), target.element(&[0, 1]))]);
        let phi = FreeMorphism::from_cells(&op, &target, &imgs).unwrap();
        assert!(verify_morphism(&op, &target, &phi, &AxiomConfig::exhaustive()).passed());
        // d(a) = b but a must map to 0 in degree 1
        let disk = disk_presentation(f, 2, 1).realize(3, None).unwrap();
        let imgs = HashMap::from([("b".to_string(), target.element(&[0, 1])), ("a".to_string(), Vector::new())]);
        let phi = FreeMorphism::from_cells(&disk, &target, &imgs).unwrap();
        let r = verify_morphism(&disk, &target, &phi, &AxiomConfig::exhaustive());
        assert!(!r.passed());
        assert!(r.first_failure().unwrap().witness.is_some());
    }

    #[test]
    fn unary_window_and_recursion() {
        let f = Field::Rational;
        let m = symseq::sphere_sequence(f, 1, 1);
        assert!(matches!(FreeOperad::new(FreeBase::new(m.clone()), 2, None), Err(Error::NonStabilization(_))));
        let op = FreeOperad::new(FreeBase::new(m.clone()), 2, Some(Window::new(0, 5))).unwrap();
        assert_eq!(op.space(1).dims(), (0..=5).map(|d| (d, 1)).collect());
        let rec = recursion_dims(&m, 2, Some(Window::new(0, 5)), 7).unwrap();
        assert_eq!(rec[1], op.space(1).dims());
        let s = symseq::sphere_sequence(f, 0, 2);
        let rec = recursion_dims(&s, 3, None, 3).unwrap();
        assert_eq!(rec[3], BTreeMap::from([(0, 12)]));
    }
}
