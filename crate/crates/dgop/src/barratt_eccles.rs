//! The Barratt–Eccles operad truncated in arity and degree, table reduction
//! to surjections, the interval-cut action on normalized chains and the
//! resulting E-coalgebra structure, cup-i products and Steenrod squares.

use std::collections::HashMap;

use crate::coalgebra::PCoalgebra;
use crate::complex::homology;
use crate::error::{Error, Result};
use crate::graded::{ChainComplex, GradedSpace};
use crate::linalg::{self, Vector};
use crate::multilinear::{self, Cooperation, Tensor};
use crate::operad::{empty_space, Operad};
use crate::perm::{self, Perm};
use crate::scalar::{Field, Scalar};
use crate::simplicial::{normalized_chains, SimplicialSet};

pub const DEFAULT_MAX_ARITY: usize = 4;
pub const DEFAULT_MAX_DEGREE: usize = 6;
pub const VERIFY_MAX_ARITY: usize = 3;
pub const VERIFY_MAX_DEGREE: usize = 4;
/// Refuse truncations with more basis elements than this.
pub const MAX_BASIS: usize = 400_000;

/// A basis element (σ_0, ..., σ_d) of E(n)_d.
pub type Simplex = Vec<Perm>;
/// A surjection {0..n+d−1} → {0..n−1}, values 0-based.
pub type Surjection = Vec<usize>;

pub fn format_element(e: &[Perm]) -> String {
    format!("({})", e.iter().map(|p| perm::format(p)).collect::<Vec<_>>().join(","))
}

pub fn parse_element(s: &str) -> Option<Simplex> {
    let inner = s.trim().strip_prefix('(')?.strip_suffix(')')?;
    let e: Option<Simplex> = inner.split(',').map(|p| perm::parse(p.trim())).collect();
    let e = e?;
    let n = e.first()?.len();
    if e.iter().any(|p| p.len() != n) || e.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(e)
}

pub fn format_surjection(u: &[usize]) -> String {
    format!("({})", u.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(","))
}

/// Nondegenerate tuples of E(n)_d in lexicographic order.
pub fn enumerate(n: usize, d: usize) -> Vec<Simplex> {
    if n == 0 {
        return vec![];
    }
    let ps = perm::all(n);
    let mut out: Vec<Simplex> = ps.iter().map(|p| vec![p.clone()]).collect();
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|t| {
                ps.iter()
                    .filter(|p| *p != t.last().unwrap())
                    .map(|p| {
                        let mut t2 = t.clone();
                        t2.push(p.clone());
                        t2
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    out
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// dim E(n)_d = n!(n! − 1)^d, saturating.
pub fn component_dim(n: usize, d: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let f = factorial(n);
    (0..d).fold(f, |acc, _| acc.saturating_mul(f - 1))
}

/// ∂(σ_0..σ_d) = Σ (−1)^i (σ_0..σ̂_i..σ_d), degenerate faces dropped.
pub fn boundary(field: Field, e: &[Perm]) -> Vec<(Simplex, Scalar)> {
    let mut out = vec![];
    if e.len() < 2 {
        return out;
    }
    for i in 0..e.len() {
        let mut f = e.to_vec();
        f.remove(i);
        if f.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        out.push((f, Scalar::sign(field, i % 2 == 1)));
    }
    out
}

/// a ∘_i b: the Eilenberg–Zilber shuffle product of the two simplices with
/// coordinatewise operadic composition of permutations.
pub fn compose_elements(field: Field, a: &[Perm], i: usize, b: &[Perm]) -> Vec<(Simplex, Scalar)> {
    let (p, q) = (a.len() - 1, b.len() - 1);
    let mut out = vec![];
    // a path is the set of step positions that advance b
    for mask in 0u64..(1 << (p + q)) {
        if mask.count_ones() as usize != q {
            continue;
        }
        let (mut x, mut y) = (0, 0);
        let mut s = vec![perm::operadic_compose(&a[0], i, &b[0])];
        let mut sign = 0;
        for step in 0..p + q {
            if mask >> step & 1 == 1 {
                y += 1;
                // horizontal steps still to come
                sign += (step + 1..p + q).filter(|t| mask >> t & 1 == 0).count();
            } else {
                x += 1;
            }
            s.push(perm::operadic_compose(&a[x], i, &b[y]));
        }
        out.push((s, Scalar::sign(field, sign % 2 == 1)));
    }
    out
}

/// The Barratt–Eccles operad with E(0) = 0, truncated at arity and degree.
pub struct BarrattEccles {
    field: Field,
    max_arity: usize,
    max_degree: usize,
    spaces: Vec<GradedSpace>,
    elements: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl BarrattEccles {
    pub fn new(field: Field, max_arity: usize, max_degree: usize) -> Result<BarrattEccles> {
        let total: usize = (1..=max_arity).flat_map(|n| (0..=max_degree).map(move |d| component_dim(n, d))).fold(0, usize::saturating_add);
        if total > MAX_BASIS {
            return Err(Error::TruncationOverflow(format!(
                "E truncated at arity {max_arity}, degree {max_degree} has {total} basis elements (limit {MAX_BASIS})"
            )));
        }
        let mut spaces = vec![GradedSpace::zero()];
        let mut elements = vec![vec![]];
        let mut index = vec![HashMap::new()];
        for n in 1..=max_arity {
            let els: Vec<Simplex> = (0..=max_degree).flat_map(|d| enumerate(n, d)).collect();
            spaces.push(GradedSpace::from_pairs(els.iter().map(|e| ((e.len() - 1) as i64, format_element(e))))?);
            index.push(els.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect());
            elements.push(els);
        }
        Ok(BarrattEccles { field, max_arity, max_degree, spaces, elements, index })
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn element(&self, n: usize, b: usize) -> &Simplex {
        &self.elements[n][b]
    }

    pub fn index_of(&self, e: &[Perm]) -> Option<usize> {
        self.index.get(e.first()?.len())?.get(e).copied()
    }

    fn vector(&self, terms: Vec<(Simplex, Scalar)>) -> Option<Vector> {
        let mut v = Vector::new();
        for (e, c) in terms {
            linalg::add_entry(&mut v, self.index_of(&e)?, &c);
        }
        Some(v)
    }
}

impl Operad for BarrattEccles {
    fn field(&self) -> Field {
        self.field
    }
    fn max_arity(&self) -> usize {
        self.max_arity
    }
    fn space(&self, n: usize) -> &GradedSpace {
        self.spaces.get(n).unwrap_or(empty_space())
    }
    fn differential(&self, n: usize, b: usize) -> Option<Vector> {
        self.vector(boundary(self.field, &self.elements[n][b]))
    }
    fn act(&self, n: usize, j: usize, b: usize) -> Vector {
        let t = perm::transposition(n, j);
        let e: Simplex = self.elements[n][b].iter().map(|p| perm::compose(&t, p)).collect();
        linalg::unit(self.field, self.index[n][&e])
    }
    fn unit(&self) -> Vector {
        linalg::unit(self.field, 0)
    }
    fn compose(&self, n: usize, i: usize, m: usize, a: usize, b: usize) -> Option<Vector> {
        if m == 0 || n + m - 1 > self.max_arity {
            return None;
        }
        let (ea, eb) = (&self.elements[n][a], &self.elements[m][b]);
        if ea.len() + eb.len() - 2 > self.max_degree {
            return None;
        }
        self.vector(compose_elements(self.field, ea, i, eb))
    }
}

/// The chain complex E(n) through degree `max_deg`. Requests beyond the
/// default bounds (arity 4, degree 6) need `allow_larger`; anything above
/// [`MAX_BASIS`] elements is refused.
pub fn barratt_eccles_component(n: usize, max_deg: usize, field: Field, allow_larger: bool) -> Result<ChainComplex> {
    if !allow_larger && (n > DEFAULT_MAX_ARITY || max_deg > DEFAULT_MAX_DEGREE) {
        return Err(Error::InvalidInput(format!("E({n}) through degree {max_deg} exceeds the default bounds")));
    }
    let total = (0..=max_deg).map(|d| component_dim(n, d)).fold(0, usize::saturating_add);
    if total > MAX_BASIS {
        return Err(Error::TruncationOverflow(format!("E({n}) through degree {max_deg} has {total} basis elements")));
    }
    let els: Vec<Simplex> = (0..=max_deg).flat_map(|d| enumerate(n, d)).collect();
    let index: HashMap<&Simplex, usize> = els.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let space = GradedSpace::from_pairs(els.iter().map(|e| ((e.len() - 1) as i64, format_element(e))))?;
    let cols = els
        .iter()
        .map(|e| {
            let mut v = Vector::new();
            for (f, c) in boundary(field, e) {
                linalg::add_entry(&mut v, index[&f], &c);
            }
            v
        })
        .collect();
    ChainComplex::new(field, space, cols)
}

/// Table reduction TR: E → X, sign-free in the Berger–Fresse convention.
pub fn table_reduction(e: &[Perm]) -> Vec<Surjection> {
    let d = e.len() - 1;
    let r = e[0].len();
    let mut out = vec![];
    for parts in compositions(d + r, d + 1) {
        let mut u: Surjection = vec![];
        let mut removed: Vec<usize> = vec![];
        let mut degenerate = false;
        for (idx, &a) in parts.iter().enumerate() {
            let filtered: Vec<usize> = e[idx].iter().copied().filter(|x| !removed.contains(x)).collect();
            if filtered.len() < a || (idx > 0 && u.last() == filtered.first()) {
                degenerate = true;
                break;
            }
            removed.extend_from_slice(&filtered[..a - 1]);
            u.extend_from_slice(&filtered[..a]);
        }
        if !degenerate {
            out.push(u);
        }
    }
    out
}

/// Ordered tuples of `k` positive integers summing to `total`.
fn compositions(total: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = vec![];
    for first in 1..=total.saturating_sub(k - 1) {
        for mut rest in compositions(total - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn surjection_arity(u: &[usize]) -> usize {
    u.iter().max().map_or(0, |m| m + 1)
}

pub fn surjection_degree(u: &[usize]) -> usize {
    u.len() - surjection_arity(u)
}

/// Boundary in the surjection operad: drop entries whose value occurs
/// elsewhere, with the Berger–Fresse signs.
pub fn surjection_boundary(field: Field, u: &[usize]) -> Vec<(Surjection, Scalar)> {
    let mut signs: Vec<Option<bool>> = vec![None; u.len()];
    let mut alternating = false;
    for idx in 0..u.len() {
        if u[idx + 1..].contains(&u[idx]) {
            signs[idx] = Some(alternating);
            alternating = !alternating;
        } else if let Some(prev) = (0..idx).rev().find(|p| u[*p] == u[idx]) {
            signs[idx] = signs[prev].map(|s| !s);
        }
    }
    let mut out: HashMap<Surjection, Scalar> = HashMap::new();
    for idx in 0..u.len() {
        let Some(neg) = signs[idx] else { continue };
        let mut v = u.to_vec();
        v.remove(idx);
        if v.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let e = out.entry(v).or_insert_with(|| field.zero());
        *e = &*e + &Scalar::sign(field, neg);
    }
    let mut out: Vec<_> = out.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Linear combination of surjections, kept sorted.
pub type SurjectionSum = Vec<(Surjection, Scalar)>;

pub fn table_reduction_sum(field: Field, terms: &[(Simplex, Scalar)]) -> SurjectionSum {
    let mut acc: HashMap<Surjection, Scalar> = HashMap::new();
    for (e, c) in terms {
        for u in table_reduction(e) {
            let x = acc.entry(u).or_insert_with(|| field.zero());
            *x = &*x + c;
        }
    }
    normalize_sum(acc)
}

fn normalize_sum(acc: HashMap<Surjection, Scalar>) -> SurjectionSum {
    let mut v: SurjectionSum = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v
}

pub fn surjection_boundary_sum(field: Field, s: &SurjectionSum) -> SurjectionSum {
    let mut acc: HashMap<Surjection, Scalar> = HashMap::new();
    for (u, c) in s {
        for (v, x) in surjection_boundary(field, u) {
            let e = acc.entry(v).or_insert_with(|| field.zero());
            *e = &*e + &(c * &x);
        }
    }
    normalize_sum(acc)
}

/// First element of E(n) (all degrees up to `max_deg`) where ∂∘TR ≠ TR∘∂.
pub fn table_reduction_chain_failure(field: Field, n: usize, max_deg: usize) -> Option<String> {
    for d in 0..=max_deg {
        for e in enumerate(n, d) {
            let lhs = surjection_boundary_sum(field, &table_reduction_sum(field, &[(e.clone(), field.one())]));
            let rhs = table_reduction_sum(field, &boundary(field, &e));
            if lhs != rhs {
                return Some(format!("{}: dTR = {} but TRd = {}", format_element(&e), format_sum(&lhs), format_sum(&rhs)));
            }
        }
    }
    None
}

pub fn format_sum(s: &SurjectionSum) -> String {
    if s.is_empty() {
        return "0".into();
    }
    s.iter().map(|(u, c)| format!("{c}*{}", format_surjection(u))).collect::<Vec<_>>().join(" + ")
}

/// The Berger–Fresse sign of an interval cut with piece dimensions `dims`.
fn cut_sign(u: &[usize], dims: &[usize]) -> bool {
    let inner: Vec<bool> = (0..u.len()).map(|i| u[i + 1..].contains(&u[i])).collect();
    let lengths: Vec<usize> = dims.iter().zip(&inner).map(|(d, i)| if *i { d + 1 } else { *d }).collect();
    let mut exp = 0;
    let mut endpoint = 0;
    for (idx, d) in dims.iter().enumerate() {
        endpoint += d;
        if inner[idx] {
            exp += endpoint;
        }
    }
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            if u[i] > u[j] {
                exp += lengths[i] * lengths[j];
            }
        }
    }
    exp % 2 == 1
}

/// Cut points 0 = c_0 ≤ c_1 ≤ ... ≤ c_{pieces} = top.
fn cuts(top: usize, pieces: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut cur = vec![0];
    fn rec(top: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 1 {
            cur.push(top);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        let from = *cur.last().unwrap();
        for c in from..=top {
            cur.push(c);
            rec(top, left - 1, cur, out);
            cur.pop();
        }
    }
    rec(top, pieces, &mut cur, &mut out);
    out
}

/// Δ_u on the normalized chains of X: a cooperation of degree |u|, chain
/// basis indexed as in [`normalized_chains`].
pub fn surjection_action(field: Field, u: &[usize], x: &SimplicialSet) -> Cooperation {
    let r = surjection_arity(u);
    let off = x.offsets();
    let mut images = vec![];
    for (dim, level) in x.simplices.iter().enumerate() {
        for k in 0..level.len() {
            let mut t = Tensor::new();
            for c in cuts(dim, u.len()) {
                let dims: Vec<usize> = c.windows(2).map(|w| w[1] - w[0]).collect();
                let mut key = Vec::with_capacity(r);
                let mut ok = true;
                for v in 0..r {
                    let mut verts = vec![];
                    for (p, _) in u.iter().enumerate().filter(|(_, val)| **val == v) {
                        verts.extend(c[p]..=c[p + 1]);
                    }
                    match x.restrict(dim, k, &verts) {
                        Some(idx) => key.push(off[verts.len() - 1] + idx),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    let sg = if field.characteristic() == 2 { false } else { cut_sign(u, &dims) };
                    multilinear::add_term(&mut t, key, &Scalar::sign(field, sg));
                }
            }
            images.push(t);
        }
    }
    Cooperation { arity: r, degree: surjection_degree(u) as i64, images }
}

/// Δ for a sum of surjections.
pub fn surjection_sum_action(c: &ChainComplex, s: &SurjectionSum, x: &SimplicialSet, arity: usize, degree: i64) -> Cooperation {
    let mut out = Cooperation::zero(c, arity, degree);
    for (u, k) in s {
        out = out.add(k, &surjection_action(c.field, u, x));
    }
    out
}

/// The E-coalgebra structure on normalized chains, Δ_e = Δ_{TR(e)}.
pub fn e_coalgebra_structure(x: &SimplicialSet, op: &BarrattEccles) -> PCoalgebra {
    let field = op.field();
    let carrier = normalized_chains(x, field);
    let mut cache: HashMap<Surjection, Cooperation> = HashMap::new();
    let mut ops = vec![vec![]];
    for n in 1..=op.max_arity() {
        let mut row = vec![];
        for b in 0..op.space(n).dim() {
            let mut d = Cooperation::zero(&carrier, n, op.space(n).degree(b));
            for u in table_reduction(op.element(n, b)) {
                let a = cache.entry(u.clone()).or_insert_with(|| surjection_action(field, &u, x));
                d = d.add(&field.one(), a);
            }
            row.push(d);
        }
        ops.push(row);
    }
    PCoalgebra { carrier, ops }
}

/// The Alexander–Whitney coproduct computed directly from front and back faces.
pub fn alexander_whitney(x: &SimplicialSet, field: Field) -> Cooperation {
    let off = x.offsets();
    let mut images = vec![];
    for (dim, level) in x.simplices.iter().enumerate() {
        for k in 0..level.len() {
            let mut t = Tensor::new();
            for i in 0..=dim {
                let front: Vec<usize> = (0..=i).collect();
                let back: Vec<usize> = (i..=dim).collect();
                if let (Some(a), Some(b)) = (x.restrict(dim, k, &front), x.restrict(dim, k, &back)) {
                    multilinear::add_term(&mut t, vec![off[i] + a, off[dim - i] + b], &field.one());
                }
            }
            images.push(t);
        }
    }
    Cooperation { arity: 2, degree: 0, images }
}

/// The element (id, τ, id, ...) of E(2)_j.
pub fn cup_element(j: usize) -> Simplex {
    (0..=j).map(|k| if k % 2 == 0 { vec![0, 1] } else { vec![1, 0] }).collect()
}

/// Cochains as vectors on the chain basis; the cup-j product
/// (a ∪_j b)(c) = (a ⊗ b)(Δ_{TR(e_j)} c), without the Koszul evaluation sign
/// (only used over F₂).
pub fn cup_i(x: &SimplicialSet, c: &ChainComplex, j: usize, a: &Vector, b: &Vector) -> Vector {
    let s = table_reduction_sum(c.field, &[(cup_element(j), c.field.one())]);
    let delta = surjection_sum_action(c, &s, x, 2, j as i64);
    let mut out = Vector::new();
    for (z, t) in delta.images.iter().enumerate() {
        let mut val = c.field.zero();
        for (key, k) in t {
            if let (Some(p), Some(q)) = (a.get(&key[0]), b.get(&key[1])) {
                val = &val + &(&(k * p) * q);
            }
        }
        linalg::add_entry(&mut out, z, &val);
    }
    out
}

/// δa = a ∘ d, up to the sign convention irrelevant over F₂.
pub fn coboundary(c: &ChainComplex, a: &Vector) -> Vector {
    let mut out = Vector::new();
    for (z, col) in c.d.cols.iter().enumerate() {
        let mut val = c.field.zero();
        for (y, k) in col {
            if let Some(p) = a.get(y) {
                val = &val + &(k * p);
            }
        }
        linalg::add_entry(&mut out, z, &val);
    }
    out
}

pub fn cochain_degree(c: &ChainComplex, a: &Vector) -> Option<i64> {
    c.space.degree_of(a)
}

/// Cohomology in degree n over the field, as the homology of the dual complex.
pub struct Cohomology {
    pub degree: i64,
    /// Cocycle representatives of a basis.
    pub basis: Vec<Vector>,
    coboundaries: linalg::Echelon,
}

impl Cohomology {
    pub fn new(c: &ChainComplex, n: i64) -> Cohomology {
        let idx: Vec<usize> = c.space.indices_in(n).collect();
        let mut cob = linalg::Echelon::new(c.field);
        for z in c.space.indices_in(n - 1) {
            let _ = cob.insert(&coboundary(c, &linalg::unit(c.field, z)));
        }
        let cols: Vec<Vector> = idx.iter().map(|i| coboundary(c, &linalg::unit(c.field, *i))).collect();
        let cocycles: Vec<Vector> =
            linalg::kernel(c.field, &cols).into_iter().map(|k| k.into_iter().map(|(j, x)| (idx[j], x)).collect()).collect();
        let mut classes = cob.clone();
        let basis = cocycles.into_iter().filter(|z| classes.insert(z).is_ok()).collect();
        Cohomology { degree: n, basis, coboundaries: cob }
    }

    pub fn is_coboundary(&self, a: &Vector) -> bool {
        self.coboundaries.contains(a)
    }

    pub fn is_cocycle(c: &ChainComplex, a: &Vector) -> bool {
        coboundary(c, a).is_empty()
    }

    /// Coordinates of the class of a cocycle in `basis`.
    pub fn class_of(&self, a: &Vector) -> Vector {
        let field = a.values().next().map_or(Field::f2(), |x| x.field());
        let mut cols: Vec<Vector> = self.basis.clone();
        let nb = cols.len();
        cols.extend(self.coboundaries.rows().iter().cloned());
        let sol = linalg::solve(field, &cols, a).unwrap_or_default();
        sol.into_iter().filter(|(i, _)| *i < nb).collect()
    }
}

/// Sq^i x = x ∪_{n−i} x for a cocycle x of degree n over F₂.
pub fn steenrod_square(x: &SimplicialSet, c: &ChainComplex, i: i64, a: &Vector) -> Result<Vector> {
    if c.field.characteristic() != 2 {
        return Err(Error::InvalidInput("Steenrod squares are computed over F2".into()));
    }
    if !Cohomology::is_cocycle(c, a) {
        return Err(Error::NotACocycle("the class representative has nonzero coboundary".into()));
    }
    let Some(n) = cochain_degree(c, a) else {
        return Ok(Vector::new());
    };
    if i > n || i < 0 {
        return Ok(Vector::new());
    }
    Ok(cup_i(x, c, (n - i) as usize, a, a))
}

/// Betti numbers of a simplicial set, indexed from degree 0.
pub fn betti_numbers(x: &SimplicialSet, field: Field) -> Vec<usize> {
    let b = homology(&normalized_chains(x, field)).betti();
    match x.dimension() {
        None => vec![],
        Some(top) => (0..=top as i64).map(|d| b.get(&d).copied().unwrap_or(0)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::verify_pcoalgebra;
    use crate::operad::{check_axioms, AxiomConfig};
    use crate::simplicial::*;

    #[test]
    fn component_dimensions() {
        for d in 0..6 {
            assert_eq!(enumerate(2, d).len(), 2);
            assert_eq!(enumerate(1, d).len(), usize::from(d == 0));
        }
        assert_eq!(enumerate(3, 2).len(), component_dim(3, 2));
    }

    #[test]
    fn components_are_complexes() {
        let c = barratt_eccles_component(3, 4, Field::Rational, false).unwrap();
        assert_eq!(c.dim(), 6 + 30 + 150 + 750 + 3750);
        let e2 = barratt_eccles_component(2, 6, Field::Rational, false).unwrap();
        assert!(e2.dims().values().all(|d| *d == 2));
        assert!(barratt_eccles_component(4, 6, Field::f2(), false).is_err());
        assert!(barratt_eccles_component(5, 0, Field::f2(), false).is_err());
    }

    #[test]
    fn square_zero_on_arity_three() {
        for field in [Field::f2(), Field::Rational] {
            let op = BarrattEccles::new(field, 3, 4).unwrap();
            for b in 0..op.space(3).dim() {
                let db = op.differential(3, b).unwrap();
                assert!(crate::operad::d_vec(&op, 3, &db).unwrap().is_empty());
            }
        }
    }

    #[test]
    fn table_reduction_examples() {
        assert_eq!(table_reduction(&[vec![0, 1]]), vec![vec![0, 1]]);
        assert_eq!(table_reduction(&[vec![1, 0]]), vec![vec![1, 0]]);
        assert_eq!(table_reduction(&[vec![0, 1], vec![1, 0]]), vec![vec![0, 1, 0]]);
        let e = vec![vec![0, 1, 2, 3], vec![0, 3, 2, 1], vec![0, 1, 3, 2]];
        let mut got = table_reduction(&e);
        got.sort();
        assert_eq!(got, vec![vec![0, 1, 3, 1, 3, 2], vec![0, 1, 3, 2, 1, 2]]);
    }

    #[test]
    fn table_reduction_is_a_chain_map() {
        for field in [Field::f2(), Field::Rational] {
            assert_eq!(table_reduction_chain_failure(field, 2, 4), None);
            assert_eq!(table_reduction_chain_failure(field, 3, 2), None);
        }
    }

    #[test]
    fn operad_axioms() {
        for field in [Field::f2(), Field::Rational] {
            let op = BarrattEccles::new(field, 3, 2).unwrap();
            let rep = check_axioms(&op, &AxiomConfig::exhaustive());
            assert!(rep.passed(), "{:?}", rep.first_failure());
        }
    }

    #[test]
    fn aw_on_an_edge() {
        let x = standard_simplex(1);
        let d = surjection_action(Field::Rational, &[0, 1], &x);
        let c = normalized_chains(&x, Field::Rational);
        assert_eq!(
            multilinear::format_tensor(&c.space, &d.images[2]),
            multilinear::format_tensor(&c.space, &alexander_whitney(&x, Field::Rational).images[2])
        );
        let zero = surjection_action(Field::Rational, &[0, 1, 0], &x);
        assert!(zero.images[0].is_empty());
    }

    #[test]
    fn structure_verifies_on_small_spaces() {
        for field in [Field::f2(), Field::Rational] {
            let op = BarrattEccles::new(field, 3, 2).unwrap();
            for x in [simplex_boundary(2), standard_simplex(2)] {
                let c = e_coalgebra_structure(&x, &op);
                let rep = verify_pcoalgebra(&op, &c, &AxiomConfig::exhaustive());
                assert!(rep.passed(), "{field:?} {:?}", rep.first_failure());
            }
        }
    }

    #[test]
    fn sq1_on_rp2() {
        let x = projective_plane();
        let c = normalized_chains(&x, Field::f2());
        let h1 = Cohomology::new(&c, 1);
        let h2 = Cohomology::new(&c, 2);
        assert_eq!(h1.basis.len(), 1);
        let sq = steenrod_square(&x, &c, 1, &h1.basis[0]).unwrap();
        assert!(Cohomology::is_cocycle(&c, &sq));
        assert!(!h2.is_coboundary(&sq));
    }
}
