//! Truncated dg operads stored by partial composites, the generic axiom
//! pack, and the unit, associative, endomorphism and coendomorphism operads.

use std::collections::HashMap;
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::koszul;
use crate::graded::{ChainComplex, GradedSpace};
use crate::linalg::{self, Vector};
use crate::multilinear::{self, Tensor};
use crate::perm::{self, Perm};
use crate::report::Report;
use crate::scalar::{Field, Scalar};

pub fn empty_space() -> &'static GradedSpace {
    static E: OnceLock<GradedSpace> = OnceLock::new();
    E.get_or_init(GradedSpace::zero)
}

/// A dg operad truncated in arity (and possibly degree). Arities and
/// composition slots are 0-based: `compose(n, i, m, a, b)` is a ∘_i b for
/// basis elements a of arity n and b of arity m.
pub trait Operad {
    fn field(&self) -> Field;
    fn max_arity(&self) -> usize;
    /// Basis of the truncated arity-n component.
    fn space(&self, n: usize) -> &GradedSpace;
    /// None when the boundary leaves the truncation.
    fn differential(&self, n: usize, b: usize) -> Option<Vector>;
    /// Action of the adjacent transposition s_j.
    fn act(&self, n: usize, j: usize, b: usize) -> Vector;
    fn unit(&self) -> Vector;
    /// None when the composite leaves the truncation.
    fn compose(&self, n: usize, i: usize, m: usize, a: usize, b: usize) -> Option<Vector>;
}

pub fn degree(op: &dyn Operad, n: usize, b: usize) -> i64 {
    op.space(n).degree(b)
}

pub fn compose_vec(op: &dyn Operad, n: usize, i: usize, m: usize, u: &Vector, v: &Vector) -> Option<Vector> {
    let mut out = Vector::new();
    for (a, x) in u {
        for (b, y) in v {
            let c = op.compose(n, i, m, *a, *b)?;
            linalg::add_scaled(&mut out, &(x * y), &c);
        }
    }
    Some(out)
}

pub fn act_vec(op: &dyn Operad, n: usize, j: usize, v: &Vector) -> Vector {
    let mut out = Vector::new();
    for (b, x) in v {
        linalg::add_scaled(&mut out, x, &op.act(n, j, *b));
    }
    out
}

/// Action of an arbitrary permutation: leaf i becomes leaf σ(i).
pub fn act_perm(op: &dyn Operad, n: usize, sigma: &[usize], v: &Vector) -> Vector {
    let mut r = v.clone();
    for a in perm::adjacent_word(sigma) {
        r = act_vec(op, n, a, &r);
    }
    r
}

pub fn d_vec(op: &dyn Operad, n: usize, v: &Vector) -> Option<Vector> {
    let mut out = Vector::new();
    for (b, x) in v {
        linalg::add_scaled(&mut out, x, &op.differential(n, *b)?);
    }
    Some(out)
}

/// The leaf permutation π with (σ·μ) ∘_{σ(i)} ν = π · (μ ∘_i ν), μ of arity n, ν of arity m.
pub fn block_first(sigma: &[usize], i: usize, m: usize) -> Perm {
    let n = sigma.len();
    let si = sigma[i];
    let shift = |l: usize, at: usize| if l < at { l } else { l + m - 1 };
    let mut p = vec![0; n + m - 1];
    for l in 0..n {
        if l != i {
            p[shift(l, i)] = shift(sigma[l], si);
        }
    }
    for q in 0..m {
        p[i + q] = si + q;
    }
    p
}

/// The leaf permutation with μ ∘_i (τ·ν) = π · (μ ∘_i ν).
pub fn block_second(n: usize, i: usize, tau: &[usize]) -> Perm {
    let m = tau.len();
    let mut p = perm::identity(n + m - 1);
    for q in 0..m {
        p[i + q] = i + tau[q];
    }
    p
}

/// Random sampling or exhaustive iteration for the axiom pack.
#[derive(Clone, Debug)]
pub struct AxiomConfig {
    /// (seed, instances per axiom); None means exhaustive.
    pub sample: Option<(u64, usize)>,
}

impl AxiomConfig {
    pub fn exhaustive() -> AxiomConfig {
        AxiomConfig { sample: None }
    }

    pub fn sampled(seed: u64, count: usize) -> AxiomConfig {
        AxiomConfig { sample: Some((seed, count)) }
    }

    pub fn select<T: Clone>(&self, salt: u64, mut items: Vec<T>) -> Vec<T> {
        match self.sample {
            None => items,
            Some((seed, count)) => {
                if items.len() <= count {
                    return items;
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
                items.shuffle(&mut rng);
                items.truncate(count);
                items
            }
        }
    }
}

fn fmt(op: &dyn Operad, n: usize, v: &Vector) -> String {
    op.space(n).format_vector(v)
}

fn basis_pairs(op: &dyn Operad, max: usize) -> Vec<(usize, usize, usize, usize)> {
    // (n, a, m, b) with n + m − 1 ≤ max, n ≥ 1
    let mut out = vec![];
    for n in 1..=max {
        for m in 0..=max + 1 - n {
            for a in 0..op.space(n).dim() {
                for b in 0..op.space(m).dim() {
                    out.push((n, a, m, b));
                }
            }
        }
    }
    out
}

/// Checks d² = 0, Coxeter relations, equivariance of d, unit laws,
/// equivariance of ∘_i, sequential and parallel associativity and the
/// Leibniz rule on the truncation.
pub fn check_axioms(op: &dyn Operad, cfg: &AxiomConfig) -> Report {
    let mut rep = Report::new();
    let field = op.field();
    let a_max = op.max_arity();
    let singles: Vec<(usize, usize)> = (0..=a_max).flat_map(|n| (0..op.space(n).dim()).map(move |b| (n, b))).collect();

    {
        let c = rep.check("d^2 = 0");
        for (n, b) in cfg.select(1, singles.clone()) {
            match op.differential(n, b).and_then(|v| d_vec(op, n, &v)) {
                Some(v) => c.record(v.is_empty(), || format!("d^2({}) = {}", op.space(n).label(b), fmt(op, n, &v))),
                None => c.skip(),
            }
        }
    }
    {
        let c = rep.check("Coxeter relations");
        for (n, b) in cfg.select(2, singles.clone()) {
            let e = linalg::unit(field, b);
            let word = |w: &[usize]| w.iter().rev().fold(e.clone(), |v, &j| act_vec(op, n, j, &v));
            let k = n.saturating_sub(1);
            for i in 0..k {
                let lbl = op.space(n).label(b);
                c.record(word(&[i, i]) == e, || format!("s_{i}^2 on {lbl}"));
                for j in i + 2..k {
                    c.record(word(&[i, j]) == word(&[j, i]), || format!("s_{i}s_{j} on {lbl}"));
                }
                if i + 1 < k {
                    c.record(word(&[i, i + 1, i]) == word(&[i + 1, i, i + 1]), || format!("braid s_{i} on {lbl}"));
                }
            }
        }
    }
    {
        let c = rep.check("action commutes with d");
        for (n, b) in cfg.select(3, singles.clone()) {
            for j in 0..n.saturating_sub(1) {
                let l = op.differential(n, b).map(|v| act_vec(op, n, j, &v));
                let r = d_vec(op, n, &op.act(n, j, b));
                match (l, r) {
                    (Some(l), Some(r)) => c.record(l == r, || format!("s_{j} d({})", op.space(n).label(b))),
                    _ => c.skip(),
                }
            }
        }
    }
    let unit = op.unit();
    {
        let c = rep.check("unit laws");
        for (n, b) in cfg.select(4, singles.clone()) {
            if n == 0 && a_max == 0 {
                continue;
            }
            let e = linalg::unit(field, b);
            match compose_vec(op, 1, 0, n, &unit, &e) {
                Some(v) => c.record(v == e, || format!("1 o_1 {} = {}", op.space(n).label(b), fmt(op, n, &v))),
                None => c.skip(),
            }
            for i in 0..n {
                match compose_vec(op, n, i, 1, &e, &unit) {
                    Some(v) => c.record(v == e, || format!("{} o_{} 1 = {}", op.space(n).label(b), i + 1, fmt(op, n, &v))),
                    None => c.skip(),
                }
            }
        }
    }
    let pairs = basis_pairs(op, a_max);
    {
        let c = rep.check("equivariance");
        for (n, a, m, b) in cfg.select(5, pairs.clone()) {
            let r = n + m - 1;
            let ea = linalg::unit(field, a);
            let eb = linalg::unit(field, b);
            for i in 0..n {
                let Some(base) = compose_vec(op, n, i, m, &ea, &eb) else {
                    c.skip();
                    continue;
                };
                for j in 0..n.saturating_sub(1) {
                    let s = perm::transposition(n, j);
                    let lhs = compose_vec(op, n, s[i], m, &act_vec(op, n, j, &ea), &eb);
                    let rhs = act_perm(op, r, &block_first(&s, i, m), &base);
                    match lhs {
                        Some(l) => {
                            c.record(l == rhs, || format!("(s_{j}.{}) o_{} {}", op.space(n).label(a), s[i] + 1, op.space(m).label(b)))
                        }
                        None => c.skip(),
                    }
                }
                for j in 0..m.saturating_sub(1) {
                    let t = perm::transposition(m, j);
                    let lhs = compose_vec(op, n, i, m, &ea, &act_vec(op, m, j, &eb));
                    let rhs = act_perm(op, r, &block_second(n, i, &t), &base);
                    match lhs {
                        Some(l) => c.record(l == rhs, || format!("{} o_{} (s_{j}.{})", op.space(n).label(a), i + 1, op.space(m).label(b))),
                        None => c.skip(),
                    }
                }
            }
        }
    }
    {
        let c = rep.check("Leibniz rule");
        for (n, a, m, b) in cfg.select(6, pairs.clone()) {
            let ea = linalg::unit(field, a);
            let eb = linalg::unit(field, b);
            let sg = koszul(field, degree(op, n, a));
            for i in 0..n {
                let lhs = compose_vec(op, n, i, m, &ea, &eb).and_then(|v| d_vec(op, n + m - 1, &v));
                let rhs = (|| {
                    let mut v = compose_vec(op, n, i, m, &op.differential(n, a)?, &eb)?;
                    linalg::add_scaled(&mut v, &sg, &compose_vec(op, n, i, m, &ea, &op.differential(m, b)?)?);
                    Some(v)
                })();
                match (lhs, rhs) {
                    (Some(l), Some(r)) => c.record(l == r, || format!("d({} o_{} {})", op.space(n).label(a), i + 1, op.space(m).label(b))),
                    _ => c.skip(),
                }
            }
        }
    }
    let mut triples = vec![];
    for (n, a, m, b) in &pairs {
        for l in 0..=a_max {
            if n + m + l < 2 || n + m + l - 2 > a_max {
                continue;
            }
            for cidx in 0..op.space(l).dim() {
                triples.push((*n, *a, *m, *b, l, cidx));
            }
        }
    }
    let triples = cfg.select(7, triples);
    {
        let c = rep.check("sequential associativity");
        for &(n, a, m, b, l, cc) in &triples {
            if m == 0 {
                continue;
            }
            let (ea, eb, ec) = (linalg::unit(field, a), linalg::unit(field, b), linalg::unit(field, cc));
            for i in 0..n {
                for j in 0..m {
                    let lhs = compose_vec(op, n, i, m, &ea, &eb).and_then(|v| compose_vec(op, n + m - 1, i + j, l, &v, &ec));
                    let rhs = compose_vec(op, m, j, l, &eb, &ec).and_then(|v| compose_vec(op, n, i, m + l - 1, &ea, &v));
                    match (lhs, rhs) {
                        (Some(x), Some(y)) => c.record(x == y, || {
                            format!(
                                "({} o_{} {}) o_{} {}",
                                op.space(n).label(a),
                                i + 1,
                                op.space(m).label(b),
                                i + j + 1,
                                op.space(l).label(cc)
                            )
                        }),
                        _ => c.skip(),
                    }
                }
            }
        }
    }
    {
        let c = rep.check("parallel associativity");
        for &(n, a, m, b, l, cc) in &triples {
            let (ea, eb, ec) = (linalg::unit(field, a), linalg::unit(field, b), linalg::unit(field, cc));
            let sg = koszul(field, degree(op, m, b) * degree(op, l, cc));
            for i in 0..n {
                for k in i + 1..n {
                    let lhs = compose_vec(op, n, i, m, &ea, &eb).and_then(|v| compose_vec(op, n + m - 1, k + m - 1, l, &v, &ec));
                    let rhs = compose_vec(op, n, k, l, &ea, &ec).and_then(|v| compose_vec(op, n + l - 1, i, m, &v, &eb));
                    match (lhs, rhs) {
                        (Some(x), Some(y)) => c.record(x == linalg::scale(&y, &sg), || {
                            format!("({} o_{} {}) o_{} {}", op.space(n).label(a), i + 1, op.space(m).label(b), k + m, op.space(l).label(cc))
                        }),
                        _ => c.skip(),
                    }
                }
            }
        }
    }
    rep.finish()
}

/// The unit operad I.
pub struct UnitOperad {
    field: Field,
    one: GradedSpace,
}

impl UnitOperad {
    pub fn new(field: Field) -> UnitOperad {
        UnitOperad { field, one: GradedSpace::from_pairs([(0, "id".to_string())]).unwrap() }
    }
}

impl Operad for UnitOperad {
    fn field(&self) -> Field {
        self.field
    }
    fn max_arity(&self) -> usize {
        1
    }
    fn space(&self, n: usize) -> &GradedSpace {
        if n == 1 {
            &self.one
        } else {
            empty_space()
        }
    }
    fn differential(&self, _: usize, _: usize) -> Option<Vector> {
        Some(Vector::new())
    }
    fn act(&self, _: usize, _: usize, b: usize) -> Vector {
        linalg::unit(self.field, b)
    }
    fn unit(&self) -> Vector {
        linalg::unit(self.field, 0)
    }
    fn compose(&self, _: usize, _: usize, _: usize, _: usize, _: usize) -> Option<Vector> {
        Some(linalg::unit(self.field, 0))
    }
}

/// The associative operad truncated at arity A: As(n) = 𝕜[S_n] in degree 0,
/// the permutation w read as the word x_{w(0)} ... x_{w(n−1)}.
pub struct AssociativeOperad {
    field: Field,
    max: usize,
    spaces: Vec<GradedSpace>,
    perms: Vec<Vec<Perm>>,
    index: Vec<HashMap<Perm, usize>>,
}

impl AssociativeOperad {
    pub fn new(field: Field, max: usize) -> AssociativeOperad {
        let mut spaces = vec![];
        let mut perms = vec![];
        let mut index = vec![];
        for n in 0..=max {
            let ps = if n == 0 { vec![] } else { perm::all(n) };
            spaces.push(GradedSpace::from_pairs(ps.iter().map(|p| (0, perm::format(p)))).unwrap());
            index.push(ps.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect());
            perms.push(ps);
        }
        AssociativeOperad { field, max, spaces, perms, index }
    }

    pub fn element(&self, p: &[usize]) -> Vector {
        linalg::unit(self.field, self.index[p.len()][p])
    }
}

impl Operad for AssociativeOperad {
    fn field(&self) -> Field {
        self.field
    }
    fn max_arity(&self) -> usize {
        self.max
    }
    fn space(&self, n: usize) -> &GradedSpace {
        self.spaces.get(n).unwrap_or(empty_space())
    }
    fn differential(&self, _: usize, _: usize) -> Option<Vector> {
        Some(Vector::new())
    }
    fn act(&self, n: usize, j: usize, b: usize) -> Vector {
        let p = perm::compose(&perm::transposition(n, j), &self.perms[n][b]);
        self.element(&p)
    }
    fn unit(&self) -> Vector {
        self.element(&[0])
    }
    fn compose(&self, n: usize, i: usize, m: usize, a: usize, b: usize) -> Option<Vector> {
        if n + m - 1 > self.max || m == 0 {
            return None;
        }
        Some(self.element(&perm::operadic_compose(&self.perms[n][a], i, &self.perms[m][b])))
    }
}

/// Shared bookkeeping for End_V and coEnd_V: tensor keys of V^⊗n and the
/// transpose of the tensor differential.
struct TensorKeys {
    keys: Vec<Vec<usize>>,
    /// key → [(x, c)] with d(x) ∋ c·key
    d_into: HashMap<Vec<usize>, Vec<(Vec<usize>, Scalar)>>,
}

fn tensor_keys(v: &ChainComplex, n: usize) -> TensorKeys {
    let mut keys: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..n {
        keys = keys
            .into_iter()
            .flat_map(|k| {
                (0..v.dim()).map(move |i| {
                    let mut k2 = k.clone();
                    k2.push(i);
                    k2
                })
            })
            .collect();
    }
    let mut d_into: HashMap<Vec<usize>, Vec<(Vec<usize>, Scalar)>> = HashMap::new();
    for x in &keys {
        let dx = multilinear::d_tensor(v, &Tensor::from([(x.clone(), v.field.one())]));
        for (k, c) in dx {
            d_into.entry(k).or_default().push((x.clone(), c));
        }
    }
    TensorKeys { keys, d_into }
}

/// End_V(n) = [V^⊗n, V] with basis e_{key→j}.
pub struct EndOperad {
    pub carrier: ChainComplex,
    max: usize,
    spaces: Vec<GradedSpace>,
    basis: Vec<Vec<(Vec<usize>, usize)>>,
    lookup: Vec<HashMap<(Vec<usize>, usize), usize>>,
    tkeys: Vec<TensorKeys>,
}

fn key_deg(v: &ChainComplex, k: &[usize]) -> i64 {
    multilinear::key_degree(&v.space, k)
}

impl EndOperad {
    pub fn new(v: &ChainComplex, max: usize) -> EndOperad {
        let mut spaces = vec![];
        let mut basis = vec![];
        let mut lookup = vec![];
        let mut tkeys = vec![];
        for n in 0..=max {
            let tk = tensor_keys(v, n);
            let mut elems: Vec<(i64, Vec<usize>, usize)> = vec![];
            for k in &tk.keys {
                for j in 0..v.dim() {
                    elems.push((v.space.degree(j) - key_deg(v, k), k.clone(), j));
                }
            }
            elems.sort_by_key(|e| e.0);
            let space = GradedSpace::from_pairs(
                elems.iter().map(|(d, k, j)| (*d, format!("[{}->{}]", multilinear::format_key(&v.space, k), v.space.label(*j)))),
            )
            .unwrap();
            let b: Vec<(Vec<usize>, usize)> = elems.into_iter().map(|(_, k, j)| (k, j)).collect();
            // the space sorts stably by degree, so positions agree
            lookup.push(b.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect());
            basis.push(b);
            spaces.push(space);
            tkeys.push(tk);
        }
        EndOperad { carrier: v.clone(), max, spaces, basis, lookup, tkeys }
    }

    pub fn index(&self, n: usize, key: &[usize], j: usize) -> usize {
        self.lookup[n][&(key.to_vec(), j)]
    }
}

impl Operad for EndOperad {
    fn field(&self) -> Field {
        self.carrier.field
    }
    fn max_arity(&self) -> usize {
        self.max
    }
    fn space(&self, n: usize) -> &GradedSpace {
        self.spaces.get(n).unwrap_or(empty_space())
    }
    fn differential(&self, n: usize, b: usize) -> Option<Vector> {
        let v = &self.carrier;
        let (key, j) = &self.basis[n][b];
        let deg = self.spaces[n].degree(b);
        let mut out = Vector::new();
        for (j2, c) in &v.d.cols[*j] {
            linalg::add_entry(&mut out, self.index(n, key, *j2), c);
        }
        let sg = -koszul(v.field, deg);
        for (x, c) in self.tkeys[n].d_into.get(key).into_iter().flatten() {
            linalg::add_entry(&mut out, self.index(n, x, *j), &(&sg * c));
        }
        Some(out)
    }
    fn act(&self, n: usize, jj: usize, b: usize) -> Vector {
        let (key, j) = &self.basis[n][b];
        let s = perm::transposition(n, jj);
        let t = multilinear::permute(&self.carrier.space, self.carrier.field, &s, &Tensor::from([(key.clone(), self.carrier.field.one())]));
        t.into_iter().map(|(x, c)| (self.index(n, &x, *j), c)).collect()
    }
    fn unit(&self) -> Vector {
        (0..self.carrier.dim()).map(|j| (self.index(1, &[j], j), self.carrier.field.one())).collect()
    }
    fn compose(&self, n: usize, i: usize, m: usize, a: usize, b: usize) -> Option<Vector> {
        if n + m - 1 > self.max {
            return None;
        }
        let v = &self.carrier;
        let (fk, fj) = &self.basis[n][a];
        let (gk, gj) = &self.basis[m][b];
        if fk[i] != *gj {
            return Some(Vector::new());
        }
        let gdeg = self.spaces[m].degree(b);
        let mut key = fk[..i].to_vec();
        key.extend_from_slice(gk);
        key.extend_from_slice(&fk[i + 1..]);
        let sg = koszul(v.field, gdeg * key_deg(v, &fk[..i]));
        Some(Vector::from([(self.index(n + m - 1, &key, *fj), sg)]))
    }
}

/// coEnd_V(n) = [V, V^⊗n] with basis e_{j→key} and
/// f ∘_i g = (−1)^{|f||g|} (id^{i} ⊗ g ⊗ id) ∘ f.
pub struct CoEndOperad {
    pub carrier: ChainComplex,
    max: usize,
    spaces: Vec<GradedSpace>,
    basis: Vec<Vec<(usize, Vec<usize>)>>,
    lookup: Vec<HashMap<(usize, Vec<usize>), usize>>,
}

impl CoEndOperad {
    pub fn new(v: &ChainComplex, max: usize) -> CoEndOperad {
        let mut spaces = vec![];
        let mut basis = vec![];
        let mut lookup = vec![];
        for n in 0..=max {
            let tk = tensor_keys(v, n);
            let mut elems: Vec<(i64, usize, Vec<usize>)> = vec![];
            for j in 0..v.dim() {
                for k in &tk.keys {
                    elems.push((key_deg(v, k) - v.space.degree(j), j, k.clone()));
                }
            }
            elems.sort_by_key(|e| e.0);
            let space = GradedSpace::from_pairs(
                elems.iter().map(|(d, j, k)| (*d, format!("[{}->{}]", v.space.label(*j), multilinear::format_key(&v.space, k)))),
            )
            .unwrap();
            let b: Vec<(usize, Vec<usize>)> = elems.into_iter().map(|(_, j, k)| (j, k)).collect();
            lookup.push(b.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect());
            basis.push(b);
            spaces.push(space);
        }
        CoEndOperad { carrier: v.clone(), max, spaces, basis, lookup }
    }

    pub fn index(&self, n: usize, j: usize, key: &[usize]) -> usize {
        self.lookup[n][&(j, key.to_vec())]
    }

    /// The cooperation C → C^⊗n represented by a vector of coEnd_V(n).
    pub fn to_cooperation(&self, n: usize, v: &Vector) -> multilinear::Cooperation {
        let deg = v.keys().next().map_or(0, |b| self.spaces[n].degree(*b));
        let mut c = multilinear::Cooperation::zero(&self.carrier, n, deg);
        for (b, x) in v {
            let (j, k) = &self.basis[n][*b];
            multilinear::add_term(&mut c.images[*j], k.clone(), x);
        }
        c
    }

    pub fn from_cooperation(&self, c: &multilinear::Cooperation) -> Vector {
        let mut out = Vector::new();
        for (j, t) in c.images.iter().enumerate() {
            for (k, x) in t {
                linalg::add_entry(&mut out, self.index(c.arity, j, k), x);
            }
        }
        out
    }
}

impl Operad for CoEndOperad {
    fn field(&self) -> Field {
        self.carrier.field
    }
    fn max_arity(&self) -> usize {
        self.max
    }
    fn space(&self, n: usize) -> &GradedSpace {
        self.spaces.get(n).unwrap_or(empty_space())
    }
    fn differential(&self, n: usize, b: usize) -> Option<Vector> {
        let v = &self.carrier;
        let (j, key) = &self.basis[n][b];
        let deg = self.spaces[n].degree(b);
        let mut out = Vector::new();
        for (k2, c) in multilinear::d_tensor(v, &Tensor::from([(key.clone(), v.field.one())])) {
            linalg::add_entry(&mut out, self.index(n, *j, &k2), &c);
        }
        let sg = -koszul(v.field, deg);
        for j2 in 0..v.dim() {
            if let Some(c) = v.d.cols[j2].get(j) {
                linalg::add_entry(&mut out, self.index(n, j2, key), &(&sg * c));
            }
        }
        Some(out)
    }
    fn act(&self, n: usize, jj: usize, b: usize) -> Vector {
        let (j, key) = &self.basis[n][b];
        let s = perm::transposition(n, jj);
        let t = multilinear::permute(&self.carrier.space, self.carrier.field, &s, &Tensor::from([(key.clone(), self.carrier.field.one())]));
        t.into_iter().map(|(x, c)| (self.index(n, *j, &x), c)).collect()
    }
    fn unit(&self) -> Vector {
        (0..self.carrier.dim()).map(|j| (self.index(1, j, &[j]), self.carrier.field.one())).collect()
    }
    fn compose(&self, n: usize, i: usize, m: usize, a: usize, b: usize) -> Option<Vector> {
        if n + m - 1 > self.max {
            return None;
        }
        let v = &self.carrier;
        let (fj, fk) = &self.basis[n][a];
        let (gj, gk) = &self.basis[m][b];
        if fk[i] != *gj {
            return Some(Vector::new());
        }
        let (fd, gd) = (self.spaces[n].degree(a), self.spaces[m].degree(b));
        let mut key = fk[..i].to_vec();
        key.extend_from_slice(gk);
        key.extend_from_slice(&fk[i + 1..]);
        let sg = koszul(v.field, fd * gd + gd * key_deg(v, &fk[..i]));
        Some(Vector::from([(self.index(n + m - 1, *fj, &key), sg)]))
    }
}

/// A map of operads given on basis elements.
pub trait OperadMorphism {
    /// None when the image is not available in the truncation.
    fn image(&self, n: usize, b: usize) -> Option<Vector>;
}

pub struct IdentityMorphism {
    pub field: Field,
}

impl OperadMorphism for IdentityMorphism {
    fn image(&self, _: usize, b: usize) -> Option<Vector> {
        Some(linalg::unit(self.field, b))
    }
}

pub fn image_vec(phi: &dyn OperadMorphism, n: usize, v: &Vector) -> Option<Vector> {
    let mut out = Vector::new();
    for (b, x) in v {
        linalg::add_scaled(&mut out, x, &phi.image(n, *b)?);
    }
    Some(out)
}

/// Checks that φ preserves degrees, d, units, ∘_i and the symmetric actions.
pub fn verify_morphism(p: &dyn Operad, q: &dyn Operad, phi: &dyn OperadMorphism, cfg: &AxiomConfig) -> Report {
    let mut rep = Report::new();
    let a_max = p.max_arity().min(q.max_arity());
    let singles: Vec<(usize, usize)> = (0..=a_max).flat_map(|n| (0..p.space(n).dim()).map(move |b| (n, b))).collect();
    {
        let c = rep.check("degree");
        for &(n, b) in &singles {
            match phi.image(n, b) {
                Some(v) => {
                    let d = p.space(n).degree(b);
                    c.record(v.keys().all(|t| q.space(n).degree(*t) == d), || format!("{} has image of wrong degree", p.space(n).label(b)))
                }
                None => c.skip(),
            }
        }
    }
    {
        let c = rep.check("unit");
        match image_vec(phi, 1, &p.unit()) {
            Some(v) => c.record(v == q.unit(), || format!("unit maps to {}", fmt(q, 1, &v))),
            None => c.skip(),
        }
    }
    {
        let c = rep.check("commutes with d");
        for (n, b) in cfg.select(11, singles.clone()) {
            let l = p.differential(n, b).and_then(|v| image_vec(phi, n, &v));
            let r = phi.image(n, b).and_then(|v| d_vec(q, n, &v));
            match (l, r) {
                (Some(l), Some(r)) => {
                    c.record(l == r, || format!("phi(d {}) = {} but d phi = {}", p.space(n).label(b), fmt(q, n, &l), fmt(q, n, &r)))
                }
                _ => c.skip(),
            }
        }
    }
    {
        let c = rep.check("equivariance");
        for (n, b) in cfg.select(12, singles.clone()) {
            for j in 0..n.saturating_sub(1) {
                let l = image_vec(phi, n, &p.act(n, j, b));
                let r = phi.image(n, b).map(|v| act_vec(q, n, j, &v));
                match (l, r) {
                    (Some(l), Some(r)) => c.record(l == r, || format!("phi(s_{j}.{})", p.space(n).label(b))),
                    _ => c.skip(),
                }
            }
        }
    }
    {
        let c = rep.check("partial composites");
        for (n, a, m, b) in cfg.select(13, basis_pairs(p, a_max)) {
            for i in 0..n {
                let l = p.compose(n, i, m, a, b).and_then(|v| image_vec(phi, n + m - 1, &v));
                let r = (|| compose_vec(q, n, i, m, &phi.image(n, a)?, &phi.image(m, b)?))();
                match (l, r) {
                    (Some(l), Some(r)) => c.record(l == r, || {
                        format!(
                            "phi({} o_{} {}) = {} but composite of images = {}",
                            p.space(n).label(a),
                            i + 1,
                            p.space(m).label(b),
                            fmt(q, n + m - 1, &l),
                            fmt(q, n + m - 1, &r)
                        )
                    }),
                    _ => c.skip(),
                }
            }
        }
    }
    rep.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_complex(field: Field) -> ChainComplex {
        let s = GradedSpace::from_pairs([(0, "a".into()), (1, "b".into()), (1, "c".into())]).unwrap();
        let mut db = Vector::new();
        db.insert(0, field.one());
        ChainComplex::new(field, s, vec![Vector::new(), db, Vector::new()]).unwrap()
    }

    #[test]
    fn unit_and_associative_pass() {
        assert!(check_axioms(&UnitOperad::new(Field::Rational), &AxiomConfig::exhaustive()).passed());
        let r = check_axioms(&AssociativeOperad::new(Field::Rational, 4), &AxiomConfig::exhaustive());
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn endomorphism_operads_pass() {
        for f in [Field::Rational, Field::f2()] {
            let v = small_complex(f);
            let e = EndOperad::new(&v, 3);
            let r = check_axioms(&e, &AxiomConfig::sampled(7, 400));
            assert!(r.passed(), "{r:?}");
            let c = CoEndOperad::new(&v, 3);
            let r = check_axioms(&c, &AxiomConfig::sampled(7, 400));
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn endomorphism_dimensions() {
        let f = Field::Rational;
        let v = ChainComplex::zero_differential(f, GradedSpace::from_pairs([(0, "x".into()), (0, "y".into())]).unwrap());
        assert_eq!(EndOperad::new(&v, 2).space(2).dim_in(0), 8);
        let k = ChainComplex::unit(f);
        let c = CoEndOperad::new(&k, 4);
        for n in 0..=4 {
            assert_eq!(c.space(n).dim(), 1);
        }
    }

    #[test]
    fn identity_morphism_verifies() {
        let a = AssociativeOperad::new(Field::f2(), 3);
        let r = verify_morphism(&a, &a, &IdentityMorphism { field: Field::f2() }, &AxiomConfig::exhaustive());
        assert!(r.passed());
    }
}
