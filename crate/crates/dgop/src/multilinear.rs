//! Elements of tensor powers of a carrier complex, and cooperations
//! C → C^⊗n stored as one tensor per basis element of C.

use std::collections::BTreeMap;

use crate::complex::koszul;
use crate::error::{Error, Result};
use crate::graded::{ChainComplex, GradedSpace, LinearMap};
use crate::linalg::Vector;
use crate::perm;
use crate::scalar::{Field, Scalar};

/// Element of C^⊗n: basis index tuples to coefficients.
pub type Tensor = BTreeMap<Vec<usize>, Scalar>;

pub fn add_term(t: &mut Tensor, key: Vec<usize>, x: &Scalar) {
    if x.is_zero() {
        return;
    }
    match t.get_mut(&key) {
        Some(y) => {
            let s = &*y + x;
            if s.is_zero() {
                t.remove(&key);
            } else {
                *y = s;
            }
        }
        None => {
            t.insert(key, x.clone());
        }
    }
}

pub fn add_tensor(t: &mut Tensor, c: &Scalar, u: &Tensor) {
    if c.is_zero() {
        return;
    }
    for (k, x) in u {
        add_term(t, k.clone(), &(c * x));
    }
}

pub fn scale_tensor(t: &Tensor, c: &Scalar) -> Tensor {
    let mut r = Tensor::new();
    add_tensor(&mut r, c, t);
    r
}

pub fn key_degree(space: &GradedSpace, key: &[usize]) -> i64 {
    key.iter().map(|i| space.degree(*i)).sum()
}

/// Differential of C^⊗n with Koszul signs.
pub fn d_tensor(c: &ChainComplex, t: &Tensor) -> Tensor {
    let mut out = Tensor::new();
    for (key, x) in t {
        let mut before = 0i64;
        for j in 0..key.len() {
            let sg = &koszul(c.field, before) * x;
            for (y, s) in &c.d.cols[key[j]] {
                let mut k2 = key.clone();
                k2[j] = *y;
                add_term(&mut out, k2, &(&sg * s));
            }
            before += c.space.degree(key[j]);
        }
    }
    out
}

/// σ_*: the factor at position i moves to position σ(i), with Koszul sign.
pub fn permute(space: &GradedSpace, field: Field, sigma: &[usize], t: &Tensor) -> Tensor {
    let mut out = Tensor::new();
    for (key, x) in t {
        let degs: Vec<i64> = key.iter().map(|i| space.degree(*i)).collect();
        let mut k2 = vec![0; key.len()];
        for (i, &v) in key.iter().enumerate() {
            k2[sigma[i]] = v;
        }
        let sg = Scalar::sign(field, perm::koszul_parity(sigma, &degs));
        add_term(&mut out, k2, &(&sg * x));
    }
    out
}

/// f^⊗n for a linear map f: C → D of degree `f.degree`.
pub fn map_tensor(f: &LinearMap, t: &Tensor) -> Tensor {
    let field = f.field;
    let mut out = Tensor::new();
    for (key, x) in t {
        let mut partial: Vec<(Vec<usize>, Scalar)> = vec![(vec![], x.clone())];
        let mut before = 0i64;
        for &i in key {
            let sg = koszul(field, f.degree * before);
            let mut next = vec![];
            for (k, c) in &partial {
                for (y, s) in &f.cols[i] {
                    let mut k2 = k.clone();
                    k2.push(*y);
                    next.push((k2, &(c * s) * &sg));
                }
            }
            partial = next;
            before += f.source.degree(i);
        }
        for (k, c) in partial {
            add_term(&mut out, k, &c);
        }
    }
    out
}

/// A homogeneous map C → C^⊗n.
#[derive(Clone, Debug, PartialEq)]
pub struct Cooperation {
    pub arity: usize,
    pub degree: i64,
    pub images: Vec<Tensor>,
}

impl Cooperation {
    pub fn zero(c: &ChainComplex, arity: usize, degree: i64) -> Cooperation {
        Cooperation { arity, degree, images: vec![Tensor::new(); c.dim()] }
    }

    pub fn identity(c: &ChainComplex) -> Cooperation {
        Cooperation { arity: 1, degree: 0, images: (0..c.dim()).map(|i| Tensor::from([(vec![i], c.field.one())])).collect() }
    }

    /// Wraps a linear map C → C as an arity-1 cooperation.
    pub fn from_linear(f: &LinearMap) -> Cooperation {
        Cooperation {
            arity: 1,
            degree: f.degree,
            images: f.cols.iter().map(|c| c.iter().map(|(i, x)| (vec![*i], x.clone())).collect()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|t| t.is_empty())
    }

    /// Checks arity and degree of every stored term.
    pub fn check_shape(&self, c: &ChainComplex) -> Result<()> {
        if self.images.len() != c.dim() {
            return Err(Error::ShapeMismatch("cooperation size differs from carrier".into()));
        }
        for (b, t) in self.images.iter().enumerate() {
            for k in t.keys() {
                if k.len() != self.arity {
                    return Err(Error::ShapeMismatch(format!("term of arity {} in arity {}", k.len(), self.arity)));
                }
                let want = c.space.degree(b) + self.degree;
                if key_degree(&c.space, k) != want {
                    return Err(Error::ShapeMismatch(format!(
                        "{} -> {} has degree {} not {}",
                        c.space.label(b),
                        format_key(&c.space, k),
                        key_degree(&c.space, k) - c.space.degree(b),
                        self.degree
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, v: &Vector) -> Tensor {
        let mut out = Tensor::new();
        for (b, x) in v {
            add_tensor(&mut out, x, &self.images[*b]);
        }
        out
    }

    pub fn add(&self, c: &Scalar, other: &Cooperation) -> Cooperation {
        let mut r = self.clone();
        for (t, u) in r.images.iter_mut().zip(&other.images) {
            add_tensor(t, c, u);
        }
        r
    }

    pub fn scaled(&self, c: &Scalar) -> Cooperation {
        Cooperation { images: self.images.iter().map(|t| scale_tensor(t, c)).collect(), ..self.clone() }
    }

    /// (id^{⊗i} ⊗ self ⊗ id) applied to a tensor, `i` 0-based.
    pub fn apply_at(&self, c: &ChainComplex, i: usize, t: &Tensor) -> Tensor {
        let mut out = Tensor::new();
        for (key, x) in t {
            let before: i64 = key[..i].iter().map(|j| c.space.degree(*j)).sum();
            let sg = &koszul(c.field, self.degree * before) * x;
            for (k, y) in &self.images[key[i]] {
                let mut k2 = key[..i].to_vec();
                k2.extend_from_slice(k);
                k2.extend_from_slice(&key[i + 1..]);
                add_term(&mut out, k2, &(&sg * y));
            }
        }
        out
    }

    /// (id^{⊗i} ⊗ f ⊗ id) ∘ self, `i` 0-based, without extra sign.
    pub fn then_at(&self, c: &ChainComplex, i: usize, f: &Cooperation) -> Cooperation {
        Cooperation {
            arity: self.arity + f.arity - 1,
            degree: self.degree + f.degree,
            images: self.images.iter().map(|t| f.apply_at(c, i, t)).collect(),
        }
    }

    /// σ_* ∘ self.
    pub fn permuted(&self, c: &ChainComplex, sigma: &[usize]) -> Cooperation {
        Cooperation { images: self.images.iter().map(|t| permute(&c.space, c.field, sigma, t)).collect(), ..self.clone() }
    }

    /// ∂Δ = d∘Δ − (−1)^{|Δ|} Δ∘d.
    pub fn boundary(&self, c: &ChainComplex) -> Cooperation {
        let sg = -koszul(c.field, self.degree);
        let images = (0..c.dim())
            .map(|b| {
                let mut t = d_tensor(c, &self.images[b]);
                let dd = self.apply(&c.d.cols[b]);
                add_tensor(&mut t, &sg, &dd);
                t
            })
            .collect();
        Cooperation { arity: self.arity, degree: self.degree - 1, images }
    }

    /// First basis element where the two cooperations differ.
    pub fn first_difference(&self, other: &Cooperation) -> Option<(usize, Tensor)> {
        for (b, (t, u)) in self.images.iter().zip(&other.images).enumerate() {
            if t != u {
                let mut diff = t.clone();
                add_tensor(&mut diff, &-&t.values().chain(u.values()).next().unwrap().field().one(), u);
                return Some((b, diff));
            }
        }
        None
    }
}

pub fn format_key(space: &GradedSpace, k: &[usize]) -> String {
    k.iter().map(|i| space.label(*i).to_string()).collect::<Vec<_>>().join("⊗")
}

pub fn format_tensor(space: &GradedSpace, t: &Tensor) -> String {
    if t.is_empty() {
        return "0".into();
    }
    t.iter().map(|(k, x)| format!("{}*{}", x, format_key(space, k))).collect::<Vec<_>>().join(" + ")
}

/// All index tuples of length `n` with total degree `deg`.
pub fn keys_of_degree(space: &GradedSpace, n: usize, deg: i64) -> Vec<Vec<usize>> {
    let degs = space.degrees();
    let mut out = vec![];
    if n == 0 {
        if deg == 0 {
            out.push(vec![]);
        }
        return out;
    }
    let (Some(lo), Some(hi)) = (space.min_degree(), space.max_degree()) else { return out };
    fn rec(space: &GradedSpace, degs: &[i64], lo: i64, hi: i64, n: usize, deg: i64, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            if deg == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for &d in degs {
            let rest = deg - d;
            let m = (n - 1) as i64;
            if rest < lo * m || rest > hi * m {
                continue;
            }
            for i in space.indices_in(d) {
                cur.push(i);
                rec(space, degs, lo, hi, n - 1, rest, cur, out);
                cur.pop();
            }
        }
    }
    let mut cur = vec![];
    rec(space, &degs, lo, hi, n, deg, &mut cur, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle_like() -> ChainComplex {
        let f = Field::Rational;
        let s = GradedSpace::from_pairs([(0, "a".into()), (0, "b".into()), (1, "e".into())]).unwrap();
        let mut de = Vector::new();
        de.insert(1, f.one());
        de.insert(0, -f.one());
        ChainComplex::new(f, s, vec![Vector::new(), Vector::new(), de]).unwrap()
    }

    #[test]
    fn tensor_differential_squares_to_zero() {
        let c = circle_like();
        let t: Tensor = Tensor::from([(vec![2, 2, 0], c.field.one()), (vec![2, 1, 2], c.field.one())]);
        assert!(d_tensor(&c, &d_tensor(&c, &t)).is_empty());
    }

    #[test]
    fn permutation_is_a_chain_map() {
        let c = circle_like();
        let t: Tensor = Tensor::from([(vec![2, 2, 0], c.field.one()), (vec![2, 1, 2], c.field.one())]);
        for s in perm::all(3) {
            let a = d_tensor(&c, &permute(&c.space, c.field, &s, &t));
            let b = permute(&c.space, c.field, &s, &d_tensor(&c, &t));
            assert_eq!(a, b);
        }
        let swapped = permute(&c.space, c.field, &[1, 0], &Tensor::from([(vec![2, 2], c.field.one())]));
        assert_eq!(swapped, Tensor::from([(vec![2, 2], -c.field.one())]));
    }

    #[test]
    fn keys_enumeration() {
        let c = circle_like();
        assert_eq!(keys_of_degree(&c.space, 2, 1).len(), 4);
        assert_eq!(keys_of_degree(&c.space, 0, 0), vec![Vec::<usize>::new()]);
    }
}
