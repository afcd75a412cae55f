//! Truncated dual Schur functors Ŝ(M)(V) = ∏_n [M(n), V^⊗n]^{S_n} with strict
//! invariants, the lax structure φ, cofree coalgebras and the cofree comonad
//! on the endofunctor Ŝ(M).

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coalgebra::PCoalgebra;
use crate::complex::koszul;
use crate::error::{Error, Result};
use crate::graded::{ChainComplex, GradedSpace, LinearMap, Window};
use crate::linalg::{self, Echelon, Vector};
use crate::multilinear::{self, Cooperation, Tensor};
use crate::operad::{self, Operad};
use crate::perm;
use crate::scalar::{Field, Scalar};
use crate::symseq::{Composite, SymmetricSequence};

/// Truncation parameters and stabilization evidence attached to results.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub max_arity: usize,
    pub deg_min: i64,
    pub deg_max: i64,
    /// True when every arity above `max_arity` is known to vanish.
    pub arity_exact: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub operad_deg_min: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub operad_deg_max: Option<i64>,
    /// Number of refinement or recursion steps until the answer stopped changing.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stabilized_after: Option<usize>,
    pub notes: Vec<String>,
}

/// An element of [M(n), V^⊗n]: the image of each basis element (n, μ).
pub type SchurMap = BTreeMap<(usize, usize), Tensor>;

fn add_map(acc: &mut SchurMap, c: &Scalar, x: &SchurMap) {
    for (k, t) in x {
        let e = acc.entry(*k).or_default();
        multilinear::add_tensor(e, c, t);
        if e.is_empty() {
            acc.remove(k);
        }
    }
}

/// Ŝ(M)(V) restricted to arities ≤ A and degrees in a window.
#[derive(Clone, Debug)]
pub struct DualSchur {
    pub m: SymmetricSequence,
    pub v: ChainComplex,
    pub max_arity: usize,
    pub window: Window,
    /// Basis elements are invariant maps; the differential is the hom differential.
    pub complex: ChainComplex,
    pub elements: Vec<SchurMap>,
    /// Basis elements in the lowest degree whose differential leaves the window.
    pub cut: Vec<usize>,
    coords: HashMap<(usize, usize, Vec<usize>), usize>,
    reducers: BTreeMap<i64, (Echelon, Vec<usize>)>,
    pub provenance: Provenance,
}

impl DualSchur {
    pub fn field(&self) -> Field {
        self.v.field
    }

    pub fn degree_of(&self, x: &SchurMap) -> Option<i64> {
        let ((n, mu), t) = x.iter().next()?;
        let key = t.keys().next()?;
        Some(multilinear::key_degree(&self.v.space, key) - self.m.components[*n].space.degree(*mu))
    }

    fn coordinates(&self, x: &SchurMap) -> Option<Vector> {
        let mut v = Vector::new();
        for ((n, mu), t) in x {
            for (key, c) in t {
                let i = self.coords.get(&(*n, *mu, key.clone()))?;
                linalg::add_entry(&mut v, *i, c);
            }
        }
        Some(v)
    }

    /// Coordinates of an invariant map in the basis; `None` if the map is
    /// not invariant or lies outside the truncation.
    pub fn express(&self, x: &SchurMap) -> Option<Vector> {
        let Some(d) = self.degree_of(x) else {
            return Some(Vector::new());
        };
        let (ech, idx) = self.reducers.get(&d)?;
        let v = self.coordinates(x)?;
        let (r, t) = ech.reduce_tracked(&v);
        if !r.is_empty() {
            return None;
        }
        Some(t.into_iter().map(|(i, c)| (idx[i], c)).collect())
    }

    /// ∂x = d∘x − (−1)^{|x|} x∘d_M.
    pub fn hom_differential(&self, x: &SchurMap) -> SchurMap {
        let field = self.field();
        let Some(d) = self.degree_of(x) else {
            return SchurMap::new();
        };
        let mut y = SchurMap::new();
        for ((n, mu), t) in x {
            let dt = multilinear::d_tensor(&self.v, t);
            if !dt.is_empty() {
                multilinear::add_tensor(y.entry((*n, *mu)).or_default(), &field.one(), &dt);
            }
        }
        let sg = -koszul(field, d);
        let mc = &self.m.components;
        for n in 0..mc.len() {
            for mu in 0..mc[n].dim() {
                let mut acc = Tensor::new();
                for (nu, c) in &mc[n].d.cols[mu] {
                    if let Some(t) = x.get(&(n, *nu)) {
                        multilinear::add_tensor(&mut acc, &(&sg * c), t);
                    }
                }
                if !acc.is_empty() {
                    multilinear::add_tensor(y.entry((n, mu)).or_default(), &field.one(), &acc);
                }
            }
        }
        y.retain(|_, t| !t.is_empty());
        y
    }

    /// The map represented by a vector in the basis.
    pub fn value(&self, v: &Vector) -> SchurMap {
        let mut acc = SchurMap::new();
        for (b, c) in v {
            add_map(&mut acc, c, &self.elements[*b]);
        }
        acc
    }

    /// Arity-1 evaluation at the unit of an operad: the counit.
    pub fn evaluate_at(&self, x: &SchurMap, n: usize, mu: &Vector) -> Tensor {
        let mut out = Tensor::new();
        for (b, c) in mu {
            if let Some(t) = x.get(&(n, *b)) {
                multilinear::add_tensor(&mut out, c, t);
            }
        }
        out
    }

    /// Ŝ(M)(h) for a degree-0 chain map h: V → V' with `other` computed over V'.
    pub fn functor_map(&self, other: &DualSchur, h: &LinearMap) -> Result<LinearMap> {
        let mut cols = vec![];
        for x in &self.elements {
            let y: SchurMap = x.iter().map(|(k, t)| (*k, multilinear::map_tensor(h, t))).filter(|(_, t)| !t.is_empty()).collect();
            cols.push(other.express(&y).ok_or_else(|| Error::TruncationOverflow("image outside the target truncation".into()))?);
        }
        LinearMap::new(self.field(), self.complex.space.clone(), other.complex.space.clone(), 0, cols)
    }
}

/// Computes the strict invariants degreewise as the kernel of f ↦ σ·f − f
/// over the adjacent transpositions.
pub fn dual_schur_apply(m: &SymmetricSequence, v: &ChainComplex, a: usize, window: Window) -> Result<DualSchur> {
    let field = v.field;
    let m = m.padded(a);
    let mut coords: HashMap<(usize, usize, Vec<usize>), usize> = HashMap::new();
    let mut coord_list: Vec<(usize, usize, Vec<usize>)> = vec![];
    let mut pairs: Vec<(i64, String)> = vec![];
    let mut elements: Vec<SchurMap> = vec![];
    for d in window.lo..=window.hi {
        let mut count = 0;
        for n in 0..=a {
            let mc = &m.components[n];
            if mc.dim() == 0 {
                continue;
            }
            // coordinates (μ, key) of degree d
            let mut local: Vec<(usize, Vec<usize>)> = vec![];
            for mu in 0..mc.dim() {
                for key in multilinear::keys_of_degree(&v.space, n, mc.space.degree(mu) + d) {
                    local.push((mu, key));
                }
            }
            if local.is_empty() {
                continue;
            }
            let pos: HashMap<(usize, Vec<usize>), usize> = local.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
            // constraint columns: x ↦ (x∘s_j − (s_j)_*∘x) over all j
            let mut cols = vec![Vector::new(); local.len()];
            let nb = local.len();
            for j in 0..n.saturating_sub(1) {
                let s = perm::transposition(n, j);
                let act = &m.actions[n][j];
                for (ci, (mu, key)) in local.iter().enumerate() {
                    // x(s_j μ') picks up the coefficient of μ in s_j μ'
                    for mu2 in 0..mc.dim() {
                        if let Some(c) = act.cols[mu2].get(mu) {
                            linalg::add_entry(&mut cols[ci], j * nb + pos[&(mu2, key.clone())], c);
                        }
                    }
                    let t = multilinear::permute(&v.space, field, &s, &Tensor::from([(key.clone(), field.one())]));
                    for (k2, c) in t {
                        linalg::add_entry(&mut cols[ci], j * nb + pos[&(*mu, k2)], &-c);
                    }
                }
            }
            let ker = if n <= 1 { (0..nb).map(|i| linalg::unit(field, i)).collect() } else { linalg::kernel(field, &cols) };
            for vec in ker {
                let mut x = SchurMap::new();
                for (i, c) in &vec {
                    let (mu, key) = &local[*i];
                    multilinear::add_term(x.entry((n, *mu)).or_default(), key.clone(), c);
                }
                elements.push(x);
                pairs.push((d, format!("s{}_{}.{}", n, d, count)));
                count += 1;
            }
            for (mu, key) in local {
                let id = coord_list.len();
                coords.insert((n, mu, key.clone()), id);
                coord_list.push((n, mu, key));
            }
        }
    }
    let space = Arc::new(GradedSpace::from_pairs(pairs)?);
    let mut reducers: BTreeMap<i64, (Echelon, Vec<usize>)> = BTreeMap::new();
    let mut ds = DualSchur {
        m: m.clone(),
        v: v.clone(),
        max_arity: a,
        window,
        complex: ChainComplex::zero_differential(field, GradedSpace::zero()),
        elements,
        cut: vec![],
        coords,
        reducers: BTreeMap::new(),
        provenance: Provenance {
            max_arity: a,
            deg_min: window.lo,
            deg_max: window.hi,
            arity_exact: true,
            operad_deg_min: None,
            operad_deg_max: None,
            stabilized_after: None,
            notes: vec![],
        },
    };
    for (b, x) in ds.elements.iter().enumerate() {
        let d = space.degree(b);
        let e = reducers.entry(d).or_insert_with(|| (Echelon::new(field), vec![]));
        let cv = ds.coordinates(x).unwrap();
        e.0.insert(&cv).expect("kernel bases are independent");
        e.1.push(b);
    }
    ds.reducers = reducers;
    // hom differential, cut off below the window
    let mut dcols = vec![];
    let mut cut = vec![];
    for (b, x) in ds.elements.iter().enumerate() {
        let y = ds.hom_differential(x);
        if !window.contains(space.degree(b) - 1) {
            if !y.is_empty() {
                cut.push(b);
            }
            dcols.push(Vector::new());
            continue;
        }
        dcols.push(ds.express(&y).ok_or_else(|| Error::InvalidInput("the hom differential left the invariants".into()))?);
    }
    ds.cut = cut;
    if !ds.cut.is_empty() {
        ds.provenance.notes.push(format!("{} differentials out of degree {} are cut off", ds.cut.len(), window.lo));
    }
    ds.complex = ChainComplex::new(field, (*space).clone(), dcols)?;
    ds.complex.space = space;
    ds.complex.d.source = ds.complex.space.clone();
    ds.complex.d.target = ds.complex.space.clone();
    Ok(ds)
}

/// The underlying symmetric sequence of a truncated operad up to arity `a`;
/// boundaries leaving the truncation are dropped.
pub fn operad_sequence(op: &dyn Operad, a: usize) -> Result<SymmetricSequence> {
    let field = op.field();
    let mut comps = vec![];
    let mut acts = vec![];
    for n in 0..=a.min(op.max_arity()) {
        let sp = op.space(n).clone();
        let cols = (0..sp.dim()).map(|b| op.differential(n, b).unwrap_or_default()).collect();
        let c = ChainComplex::new(field, sp, cols)?;
        let mut an = vec![];
        for j in 0..n.saturating_sub(1) {
            let cols = (0..c.dim()).map(|b| op.act(n, j, b)).collect();
            an.push(LinearMap::new(field, c.space.clone(), c.space.clone(), 0, cols)?);
        }
        comps.push(c);
        acts.push(an);
    }
    SymmetricSequence::new(field, comps, acts)
}

/// φ: Ŝ(M)(Ŝ(N)(V)) → Ŝ(M∘N)(V). `outer` is Ŝ(M) applied to `inner.complex`
/// and `target` is Ŝ(M∘N)(V) for the composite `mn`.
pub fn lax_structure(outer: &DualSchur, inner: &DualSchur, mn: &Composite, target: &DualSchur) -> Result<LinearMap> {
    let field = inner.field();
    let wsp = &inner.complex.space;
    let vsp = &inner.v.space;
    let mut cols = vec![];
    for f in &outer.elements {
        let mut y = SchurMap::new();
        for (n, ca) in mn.arities.iter().enumerate() {
            for (b, &ti) in ca.basis_terms.iter().enumerate() {
                let t = &ca.terms[ti];
                let Some(fm) = f.get(&(t.k(), t.mu)) else { continue };
                let sizes: Vec<usize> = t.blocks.iter().map(|bl| bl.len()).collect();
                let nu_deg: Vec<i64> = t.blocks.iter().zip(&t.nus).map(|(bl, nu)| mn.n.components[bl.len()].space.degree(*nu)).collect();
                let concat: Vec<usize> = t.blocks.iter().flatten().copied().collect();
                let mut acc = Tensor::new();
                for (key, c) in fm {
                    // (w_1 ⊗ ... ⊗ w_k)(ν_1 ⊗ ... ⊗ ν_k) with the Koszul sign
                    let mut e = 0i64;
                    for i in 0..key.len() {
                        for j in i + 1..key.len() {
                            e += nu_deg[i] * wsp.degree(key[j]);
                        }
                    }
                    let mut prod = Tensor::from([(vec![], koszul(field, e) * c.clone())]);
                    for (i, w) in key.iter().enumerate() {
                        let part = inner.elements[*w].get(&(sizes[i], t.nus[i])).cloned().unwrap_or_default();
                        let mut next = Tensor::new();
                        for (k1, x1) in &prod {
                            for (k2, x2) in &part {
                                let mut k = k1.clone();
                                k.extend(k2);
                                multilinear::add_term(&mut next, k, &(x1 * x2));
                            }
                        }
                        prod = next;
                    }
                    multilinear::add_tensor(&mut acc, &field.one(), &multilinear::permute(vsp, field, &concat, &prod));
                }
                if !acc.is_empty() {
                    y.insert((n, b), acc);
                }
            }
        }
        cols.push(target.express(&y).ok_or_else(|| Error::TruncationOverflow("φ leaves the target truncation".into()))?);
    }
    LinearMap::new(field, outer.complex.space.clone(), target.complex.space.clone(), 0, cols)
}

/// The operad degree window needed to evaluate every map of Ŝ(P)(V) whose
/// degree lies in `window`, padded by one on each side.
pub fn operad_window_for(v: &ChainComplex, a: usize, window: Window) -> Window {
    let vmin = v.space.min_degree().unwrap_or(0);
    let vmax = v.space.max_degree().unwrap_or(0);
    let lo = (1..=a.max(1) as i64).map(|n| n * vmin.min(0) + vmin.max(0).min(n * vmin)).min().unwrap_or(0);
    let hi = (1..=a.max(1) as i64).map(|n| n * vmax.max(0) + vmax.min(0).max(n * vmax)).max().unwrap_or(0);
    Window::new(lo - window.hi - 1, hi - window.lo + 1)
}

/// The cofree P-coalgebra on V inside Ŝ(P)(V).
#[derive(Clone, Debug)]
pub struct Cofree {
    pub schur: DualSchur,
    /// Basis of L(P)(V) as vectors in `schur`'s basis.
    pub basis: Vec<Vector>,
    pub coalgebra: PCoalgebra,
    /// Basis elements of L whose differential leaves the window.
    pub cut: Vec<usize>,
    pub provenance: Provenance,
}

impl Cofree {
    /// The counit ε(x) = x(1) as a linear map L(P)(V) → V.
    pub fn counit(&self, op: &dyn Operad) -> LinearMap {
        let field = self.schur.field();
        let unit = op.unit();
        let cols = self
            .basis
            .iter()
            .map(|b| {
                let x = self.schur.value(b);
                let t = self.schur.evaluate_at(&x, 1, &unit);
                t.into_iter().map(|(k, c)| (k[0], c)).collect()
            })
            .collect();
        LinearMap { field, source: self.coalgebra.carrier.space.clone(), target: self.schur.v.space.clone(), degree: 0, cols }
    }
}

/// Values x(γ(e; ν_1..ν_k)) with the sign (−1)^{|e||x| + Σ_{i<j}|ν_i||ν_j|},
/// indexed by (ν tuple, output key).
struct Decomposer<'a> {
    op: &'a dyn Operad,
    tuples: BTreeMap<usize, Vec<Vec<(usize, usize)>>>,
}

impl<'a> Decomposer<'a> {
    fn new(op: &'a dyn Operad, a: usize) -> Decomposer<'a> {
        let mut tuples = BTreeMap::new();
        for k in 1..=a {
            // tuples of (arity, basis element) with total arity ≤ a
            let mut ts: Vec<Vec<(usize, usize)>> = vec![vec![]];
            for _ in 0..k {
                let mut next = vec![];
                for t in &ts {
                    let used: usize = t.iter().map(|(n, _)| *n).sum();
                    for n in 1..=a.saturating_sub(used + (k - t.len() - 1)) {
                        for b in 0..op.space(n).dim() {
                            let mut t2 = t.clone();
                            t2.push((n, b));
                            next.push(t2);
                        }
                    }
                }
                ts = next;
            }
            tuples.insert(k, ts);
        }
        Decomposer { op, tuples }
    }

    fn gamma(&self, k: usize, e: usize, nus: &[(usize, usize)]) -> Option<Vector> {
        let field = self.op.field();
        let mut v = linalg::unit(field, e);
        let mut ar = k;
        for i in (0..k).rev() {
            let (n, b) = nus[i];
            v = operad::compose_vec(self.op, ar, i, n, &v, &linalg::unit(field, b))?;
            ar += n - 1;
        }
        Some(v)
    }
}

fn key_of(row: &mut HashMap<(usize, Vec<usize>), usize>, t: usize, k: &[usize]) -> usize {
    let l = row.len();
    *row.entry((t, k.to_vec())).or_insert(l)
}

/// L(P)(V): the largest subspace of Ŝ(P)(V) (within the truncation) on which
/// every decomposition x ↦ x(γ(e; −)) factors through L^⊗k, equipped with the
/// resulting cooperations. `window` bounds the degrees of L.
pub fn cofree_coalgebra(op: &dyn Operad, v: &ChainComplex, a: usize, window: Window) -> Result<Cofree> {
    let field = v.field;
    let a = a.min(op.max_arity());
    let seq = operad_sequence(op, a)?;
    let schur = dual_schur_apply(&seq, v, a, window)?;
    let dec = Decomposer::new(op, a);
    let ws = &schur.complex.space;
    // current subspace per degree, as an echelon basis in Ŝ coordinates
    let mut current: BTreeMap<i64, Vec<Vector>> = BTreeMap::new();
    for b in 0..schur.complex.dim() {
        current.entry(ws.degree(b)).or_default().push(linalg::unit(field, b));
    }
    let mut steps = 0;
    let mut skipped = 0usize;
    loop {
        steps += 1;
        let flat: Vec<(i64, Vector)> = current.iter().flat_map(|(d, vs)| vs.iter().map(move |v| (*d, v.clone()))).collect();
        let values: Vec<SchurMap> = flat.iter().map(|(_, v)| schur.value(v)).collect();
        let mut changed = false;
        let mut next: BTreeMap<i64, Vec<Vector>> = BTreeMap::new();
        for (d, cand) in &current {
            let mut allowed: Vec<Vector> = cand.clone();
            for k in 1..=a {
                for e in 0..op.space(k).dim() {
                    if allowed.is_empty() {
                        break;
                    }
                    let de = op.space(k).degree(e);
                    let avals: Vec<SchurMap> = allowed.iter().map(|v| schur.value(v)).collect();
                    // unknown t ∈ L^⊗k of degree d + |e|
                    let lsp_deg: Vec<i64> = flat.iter().map(|(dd, _)| *dd).collect();
                    let keys = keys_by_degree(&lsp_deg, k, d + de);
                    let mut rows: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
                    let mut cols: Vec<Vector> = vec![Vector::new(); keys.len() + allowed.len()];
                    for (ti, nus) in dec.tuples[&k].iter().enumerate() {
                        let Some(g) = dec.gamma(k, e, nus) else {
                            skipped += 1;
                            continue;
                        };
                        let n_out: usize = nus.iter().map(|(n, _)| *n).sum();
                        let nd: Vec<i64> = nus.iter().map(|(n, b)| op.space(*n).degree(*b)).collect();
                        let mut pe = 0;
                        for i in 0..k {
                            for j in i + 1..k {
                                pe += nd[i] * nd[j];
                            }
                        }
                        // −F for each allowed x
                        for (ai, x) in avals.iter().enumerate() {
                            let sg = -koszul(field, de * d + pe);
                            let t = schur.evaluate_at(x, n_out, &g);
                            for (key, c) in t {
                                let r = key_of(&mut rows, ti, &key);
                                linalg::add_entry(&mut cols[keys.len() + ai], r, &(&sg * &c));
                            }
                        }
                        // ev of each tensor key of L
                        for (ki, key) in keys.iter().enumerate() {
                            let mut e2 = 0;
                            for i in 0..k {
                                for j in i + 1..k {
                                    e2 += nd[i] * lsp_deg[key[j]];
                                }
                            }
                            let mut prod = Tensor::from([(vec![], koszul(field, e2))]);
                            for (i, l) in key.iter().enumerate() {
                                let part = values[*l].get(&nus[i]).cloned().unwrap_or_default();
                                let mut nx = Tensor::new();
                                for (k1, x1) in &prod {
                                    for (k2, x2) in &part {
                                        let mut kk = k1.clone();
                                        kk.extend(k2);
                                        multilinear::add_term(&mut nx, kk, &(x1 * x2));
                                    }
                                }
                                prod = nx;
                            }
                            for (kk, c) in prod {
                                let r = key_of(&mut rows, ti, &kk);
                                linalg::add_entry(&mut cols[ki], r, &c);
                            }
                        }
                    }
                    let ker = linalg::kernel(field, &cols);
                    let proj: Vec<Vector> = ker
                        .iter()
                        .map(|kv| {
                            let mut out = Vector::new();
                            for (i, c) in kv {
                                if *i >= keys.len() {
                                    linalg::add_scaled(&mut out, c, &allowed[*i - keys.len()]);
                                }
                            }
                            out
                        })
                        .collect();
                    let basis = linalg::span_basis(field, &proj);
                    if basis.len() < allowed.len() {
                        changed = true;
                    }
                    allowed = basis;
                }
            }
            next.insert(*d, allowed);
        }
        current = next;
        if !changed {
            break;
        }
        if steps > 64 {
            return Err(Error::NonStabilization("the cofree refinement did not stabilize".into()));
        }
    }
    build_cofree(op, schur, current, a, &dec, steps, skipped)
}

fn keys_by_degree(degs: &[i64], k: usize, total: i64) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut cur = vec![];
    fn rec(degs: &[i64], k: usize, total: i64, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            if cur.iter().map(|i| degs[*i]).sum::<i64>() == total {
                out.push(cur.clone());
            }
            return;
        }
        for i in 0..degs.len() {
            cur.push(i);
            rec(degs, k, total, cur, out);
            cur.pop();
        }
    }
    rec(degs, k, total, &mut cur, &mut out);
    out
}

fn build_cofree(
    op: &dyn Operad,
    schur: DualSchur,
    current: BTreeMap<i64, Vec<Vector>>,
    a: usize,
    dec: &Decomposer,
    steps: usize,
    skipped: usize,
) -> Result<Cofree> {
    let field = schur.field();
    let basis: Vec<Vector> = current.values().flatten().cloned().collect();
    let degs: Vec<i64> = current.iter().flat_map(|(d, vs)| std::iter::repeat(*d).take(vs.len())).collect();
    let space = GradedSpace::from_pairs(degs.iter().enumerate().map(|(i, d)| (*d, format!("l{i}"))))?;
    // coordinates of Ŝ vectors in the L basis
    let mut ech = Echelon::new(field);
    for b in &basis {
        ech.insert(b).expect("independent");
    }
    let in_l = |v: &Vector| -> Option<Vector> {
        let (r, t) = ech.reduce_tracked(v);
        r.is_empty().then_some(t)
    };
    let mut dcols = vec![];
    for b in &basis {
        let dv = schur.complex.d.apply(b);
        dcols.push(in_l(&dv).ok_or_else(|| Error::InvalidInput("the cofree subspace is not a subcomplex".into()))?);
    }
    let lo = schur.window.lo;
    let cut: Vec<usize> =
        (0..basis.len()).filter(|i| degs[*i] == lo && !schur.hom_differential(&schur.value(&basis[*i])).is_empty()).collect();
    let carrier = ChainComplex::new(field, space, dcols)?;
    let values: Vec<SchurMap> = basis.iter().map(|v| schur.value(v)).collect();
    let mut ops = vec![];
    for k in 0..=a {
        let mut row = vec![];
        for e in 0..op.space(k).dim() {
            let de = op.space(k).degree(e);
            let mut c = Cooperation::zero(&carrier, k, de);
            if k == 0 {
                row.push(c);
                continue;
            }
            for (xi, x) in values.iter().enumerate() {
                let d = degs[xi];
                let keys = keys_by_degree(&degs, k, d + de);
                let mut rows: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
                let mut cols: Vec<Vector> = vec![Vector::new(); keys.len()];
                let mut rhs = Vector::new();
                for (ti, nus) in dec.tuples[&k].iter().enumerate() {
                    let Some(g) = dec.gamma(k, e, nus) else { continue };
                    let n_out: usize = nus.iter().map(|(n, _)| *n).sum();
                    let nd: Vec<i64> = nus.iter().map(|(n, b)| op.space(*n).degree(*b)).collect();
                    let mut pe = 0;
                    for i in 0..k {
                        for j in i + 1..k {
                            pe += nd[i] * nd[j];
                        }
                    }
                    let sg = koszul(field, de * d + pe);
                    for (key, cc) in schur.evaluate_at(x, n_out, &g) {
                        let r = key_of(&mut rows, ti, &key);
                        linalg::add_entry(&mut rhs, r, &(&sg * &cc));
                    }
                    for (ki, key) in keys.iter().enumerate() {
                        let mut e2 = 0;
                        for i in 0..k {
                            for j in i + 1..k {
                                e2 += nd[i] * degs[key[j]];
                            }
                        }
                        let mut prod = Tensor::from([(vec![], koszul(field, e2))]);
                        for (i, l) in key.iter().enumerate() {
                            let part = values[*l].get(&nus[i]).cloned().unwrap_or_default();
                            let mut nx = Tensor::new();
                            for (k1, x1) in &prod {
                                for (k2, x2) in &part {
                                    let mut kk = k1.clone();
                                    kk.extend(k2);
                                    multilinear::add_term(&mut nx, kk, &(x1 * x2));
                                }
                            }
                            prod = nx;
                        }
                        for (kk, cc) in prod {
                            let r = key_of(&mut rows, ti, &kk);
                            linalg::add_entry(&mut cols[ki], r, &cc);
                        }
                    }
                }
                let sol = linalg::solve(field, &cols, &rhs)
                    .ok_or_else(|| Error::InvalidInput("a decomposition of the cofree coalgebra has no preimage".into()))?;
                for (ki, cc) in sol {
                    multilinear::add_term(&mut c.images[xi], keys[ki].clone(), &cc);
                }
            }
            row.push(c);
        }
        ops.push(row);
    }
    let mut provenance = schur.provenance.clone();
    provenance.stabilized_after = Some(steps);
    if skipped > 0 {
        provenance.notes.push(format!("{skipped} decompositions fell outside the operad truncation"));
    }
    Ok(Cofree { schur, basis, coalgebra: PCoalgebra { carrier, ops }, cut, provenance })
}

/// C^(0) = 0, C^(n) = V ⊕ Ŝ(M)(C^(n−1)) restricted to the window, iterated
/// until the degreewise dimensions stop changing.
pub fn cofree_over_endofunctor(m: &SymmetricSequence, v: &ChainComplex, a: usize, window: Window) -> Result<(ChainComplex, Provenance)> {
    let field = v.field;
    let vw = restrict_to_window(v, window)?;
    let mut c = ChainComplex::zero(field);
    let mut last: Option<BTreeMap<i64, usize>> = None;
    for step in 1..=64 {
        let f = dual_schur_apply(m, &c, a, window)?;
        let next = direct_sum_complexes(&vw, &f.complex)?;
        let dims = next.dims();
        if last.as_ref() == Some(&dims) {
            let mut prov = f.provenance.clone();
            prov.arity_exact = m.max_arity() <= a || (a + 1..=m.max_arity()).all(|n| m.dim(n) == 0);
            prov.stabilized_after = Some(step - 1);
            return Ok((c, prov));
        }
        last = Some(dims);
        c = next;
    }
    Err(Error::NonStabilization("the cofree comonad tower did not stabilize in the window".into()))
}

fn direct_sum_complexes(a: &ChainComplex, b: &ChainComplex) -> Result<ChainComplex> {
    Ok(crate::complex::direct_sum(a, b))
}

/// Brutal truncation of a complex to the degrees of a window.
pub fn restrict_to_window(c: &ChainComplex, w: Window) -> Result<ChainComplex> {
    let keep: Vec<usize> = (0..c.dim()).filter(|i| w.contains(c.space.degree(*i))).collect();
    let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(p, i)| (*i, p)).collect();
    let space = GradedSpace::from_pairs(keep.iter().map(|i| (c.space.degree(*i), c.space.label(*i).to_string())))?;
    let cols = keep.iter().map(|i| c.d.cols[*i].iter().filter_map(|(j, x)| pos.get(j).map(|p| (*p, x.clone()))).collect()).collect();
    ChainComplex::new(c.field, space, cols)
}

/// A coalgebra over the endofunctor Ŝ(M): a chain map C → Ŝ(M)(C).
#[derive(Clone, Debug)]
pub struct FCoalgebra {
    pub schur: DualSchur,
    pub structure: LinearMap,
}

impl FCoalgebra {
    pub fn new(m: &SymmetricSequence, c: &ChainComplex, a: usize, window: Window, images: Vec<SchurMap>) -> Result<FCoalgebra> {
        let schur = dual_schur_apply(m, c, a, window)?;
        let mut cols = vec![];
        for x in &images {
            cols.push(schur.express(x).ok_or_else(|| Error::InvalidInput("structural map leaves the invariants".into()))?);
        }
        let structure = LinearMap::new(c.field, c.space.clone(), schur.complex.space.clone(), 0, cols)?;
        Ok(FCoalgebra { schur, structure })
    }

    /// The structural map commutes with the differentials.
    pub fn is_chain_map(&self) -> bool {
        crate::complex::is_chain_map(&self.schur.v, &self.schur.complex, &self.structure)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::{AxiomConfig, UnitOperad};
    use crate::symseq::{compose_product, sphere_sequence, unit_sequence};
    use crate::tree;

    fn k2(field: Field) -> ChainComplex {
        ChainComplex::zero_differential(field, GradedSpace::from_pairs([(0, "a".into()), (0, "b".into())]).unwrap())
    }

    #[test]
    fn dual_schur_examples() {
        for field in [Field::Rational, Field::f2()] {
            let s = dual_schur_apply(&sphere_sequence(field, 0, 2), &k2(field), 2, Window::new(-2, 2)).unwrap();
            assert_eq!(s.complex.dims(), BTreeMap::from([(0, 4)]));
            let s = dual_schur_apply(&sphere_sequence(field, 1, 1), &ChainComplex::unit(field), 1, Window::new(-3, 3)).unwrap();
            assert_eq!(s.complex.dims(), BTreeMap::from([(-1, 1)]));
            let s = dual_schur_apply(&unit_sequence(field), &k2(field), 3, Window::new(-3, 3)).unwrap();
            assert_eq!(s.complex.dims(), k2(field).dims());
        }
    }

    #[test]
    fn phi_is_injective_chain_map() {
        for field in [Field::Rational, Field::f2()] {
            let m = sphere_sequence(field, 0, 2);
            let v = k2(field);
            let w = Window::new(0, 0);
            let inner = dual_schur_apply(&m, &v, 4, w).unwrap();
            let outer = dual_schur_apply(&m, &inner.complex, 4, w).unwrap();
            let mn = compose_product(&m, &m, 4, None).unwrap();
            let target = dual_schur_apply(&mn.seq, &v, 4, w).unwrap();
            let phi = lax_structure(&outer, &inner, &mn, &target).unwrap();
            assert_eq!(phi.rank(), outer.complex.dim());
            assert!(outer.complex.dim() > 0);
        }
    }

    #[test]
    fn cofree_on_unit_operad_is_v() {
        let field = Field::Rational;
        let v = k2(field);
        let op = UnitOperad::new(field);
        let l = cofree_coalgebra(&op, &v, 1, Window::new(-2, 2)).unwrap();
        assert_eq!(l.coalgebra.carrier.dims(), v.dims());
        assert!(crate::coalgebra::verify_pcoalgebra(&op, &l.coalgebra, &AxiomConfig::exhaustive()).passed());
    }

    #[test]
    fn cofree_on_free_unary_operad() {
        let field = Field::f2();
        let v = ChainComplex::unit(field);
        let w = Window::new(-5, 0);
        let pres = tree::Presentation::new(field, vec![tree::Cell { name: "u".into(), arity: 1, degree: 1, boundary: vec![] }]).unwrap();
        let op = pres.realize(1, Some(operad_window_for(&v, 1, w))).unwrap();
        let l = cofree_coalgebra(&op, &v, 1, w).unwrap();
        assert_eq!(l.coalgebra.carrier.dims(), (-5..=0).map(|d| (d, 1)).collect());
        let r = crate::coalgebra::verify_pcoalgebra(&op, &l.coalgebra, &AxiomConfig::exhaustive());
        assert!(r.passed(), "{:?}", r.first_failure());
        let (c, _) = cofree_over_endofunctor(&sphere_sequence(field, 1, 1), &v, 1, w).unwrap();
        assert_eq!(c.dims(), l.coalgebra.carrier.dims());
    }
}
