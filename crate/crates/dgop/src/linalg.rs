//! Sparse exact linear algebra. Vectors map coordinates to nonzero scalars;
//! matrices are lists of column vectors.

use std::collections::BTreeMap;

use crate::scalar::{Field, Scalar};

pub type Vector = BTreeMap<usize, Scalar>;

pub fn unit(field: Field, i: usize) -> Vector {
    let mut v = Vector::new();
    v.insert(i, field.one());
    v
}

pub fn add_scaled(v: &mut Vector, c: &Scalar, w: &Vector) {
    if c.is_zero() {
        return;
    }
    for (k, x) in w {
        let t = c * x;
        add_entry(v, *k, &t);
    }
}

pub fn add_entry(v: &mut Vector, k: usize, x: &Scalar) {
    if x.is_zero() {
        return;
    }
    match v.get_mut(&k) {
        Some(y) => {
            let s = &*y + x;
            if s.is_zero() {
                v.remove(&k);
            } else {
                *y = s;
            }
        }
        None => {
            v.insert(k, x.clone());
        }
    }
}

pub fn scale(v: &Vector, c: &Scalar) -> Vector {
    if c.is_zero() {
        return Vector::new();
    }
    v.iter().map(|(k, x)| (*k, x * c)).collect()
}

pub fn sub(a: &Vector, b: &Vector) -> Vector {
    let mut r = a.clone();
    for (k, x) in b {
        add_entry(&mut r, *k, &-x);
    }
    r
}

/// Applies a column matrix to a vector.
pub fn apply(cols: &[Vector], v: &Vector) -> Vector {
    let mut r = Vector::new();
    for (j, c) in v {
        add_scaled(&mut r, c, &cols[*j]);
    }
    r
}

/// Incrementally maintained reduced row echelon form. The pivot of a row is
/// its smallest coordinate, normalized to one. Optionally each row carries
/// its expression in terms of the inserted vectors.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    rows: Vec<Vector>,
    tags: Vec<Vector>,
    pivots: BTreeMap<usize, usize>,
    inserted: usize,
}

impl Echelon {
    pub fn new(field: Field) -> Echelon {
        Echelon { field, rows: vec![], tags: vec![], pivots: BTreeMap::new(), inserted: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &usize> {
        self.pivots.keys()
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    /// Reduces `v` against the current rows; returns the residual and the
    /// combination of inserted vectors that was subtracted.
    pub fn reduce_tracked(&self, v: &Vector) -> (Vector, Vector) {
        let mut r = v.clone();
        let mut t = Vector::new();
        let hits: Vec<(usize, usize)> = self.pivots.iter().filter(|(c, _)| r.contains_key(c)).map(|(c, i)| (*c, *i)).collect();
        for (c, i) in hits {
            if let Some(x) = r.get(&c).cloned() {
                add_scaled(&mut r, &-&x, &self.rows[i]);
                add_scaled(&mut t, &x, &self.tags[i]);
            }
        }
        (r, t)
    }

    pub fn reduce(&self, v: &Vector) -> Vector {
        let mut r = v.clone();
        let hits: Vec<(usize, usize)> = self.pivots.iter().filter(|(c, _)| r.contains_key(c)).map(|(c, i)| (*c, *i)).collect();
        for (c, i) in hits {
            if let Some(x) = r.get(&c).cloned() {
                add_scaled(&mut r, &-&x, &self.rows[i]);
            }
        }
        r
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts a vector. On dependence returns `Err(relation)`, the
    /// combination of inserted vectors (indexed by insertion order) that
    /// vanishes; otherwise `Ok(pivot)`.
    pub fn insert(&mut self, v: &Vector) -> Result<usize, Vector> {
        let idx = self.inserted;
        self.inserted += 1;
        let (r, t) = self.reduce_tracked(v);
        let mut tag = crate::linalg::unit(self.field, idx);
        add_scaled(&mut tag, &-self.field.one(), &t);
        if r.is_empty() {
            return Err(tag);
        }
        let (&p, lead) = r.iter().next().unwrap();
        let inv = lead.inv().expect("nonzero pivot");
        let r = scale(&r, &inv);
        let tag = scale(&tag, &inv);
        for i in 0..self.rows.len() {
            if let Some(x) = self.rows[i].get(&p).cloned() {
                let (row, rt) = (r.clone(), tag.clone());
                add_scaled(&mut self.rows[i], &-&x, &row);
                add_scaled(&mut self.tags[i], &-&x, &rt);
            }
        }
        self.pivots.insert(p, self.rows.len());
        self.rows.push(r);
        self.tags.push(tag);
        Ok(p)
    }
}

pub fn rank(field: Field, cols: &[Vector]) -> usize {
    let mut e = Echelon::new(field);
    for c in cols {
        let _ = e.insert(c);
    }
    e.rank()
}

/// Basis of the null space of a column matrix, in source coordinates.
/// Each basis vector has its largest coordinate equal to one, at a column
/// that is dependent on earlier ones.
pub fn kernel(field: Field, cols: &[Vector]) -> Vec<Vector> {
    let mut e = Echelon::new(field);
    let mut out = vec![];
    for c in cols {
        if let Err(rel) = e.insert(c) {
            out.push(rel);
        }
    }
    out
}

/// A solution of `Σ x_j cols[j] = b`, with free columns set to zero.
/// Columns are scanned in order so the earliest independent columns carry
/// the solution.
pub fn solve(field: Field, cols: &[Vector], b: &Vector) -> Option<Vector> {
    let mut e = Echelon::new(field);
    for c in cols {
        let _ = e.insert(c);
    }
    let (r, t) = e.reduce_tracked(b);
    if r.is_empty() {
        Some(t)
    } else {
        None
    }
}

/// Basis of the span of the given vectors in reduced echelon form.
pub fn span_basis(field: Field, vs: &[Vector]) -> Vec<Vector> {
    let mut e = Echelon::new(field);
    for v in vs {
        let _ = e.insert(v);
    }
    let mut rows: Vec<Vector> = e.rows().to_vec();
    rows.sort_by_key(|r| *r.keys().next().unwrap());
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(f: Field, xs: &[(usize, i64)]) -> Vector {
        let mut r = Vector::new();
        for (k, x) in xs {
            add_entry(&mut r, *k, &Scalar::from_i64(f, *x));
        }
        r
    }

    #[test]
    fn kernel_and_rank() {
        let q = Field::Rational;
        let cols = vec![v(q, &[(0, 1), (1, 2)]), v(q, &[(0, 2), (1, 4)]), v(q, &[(1, 1)])];
        assert_eq!(rank(q, &cols), 2);
        let k = kernel(q, &cols);
        assert_eq!(k.len(), 1);
        assert!(apply(&cols, &k[0]).is_empty());
    }

    #[test]
    fn solve_prefers_early_columns() {
        let f = Field::f2();
        let cols = vec![v(f, &[(0, 1)]), v(f, &[(0, 1)]), v(f, &[(1, 1)])];
        let x = solve(f, &cols, &v(f, &[(0, 1), (1, 1)])).unwrap();
        assert_eq!(x, v(f, &[(0, 1), (2, 1)]));
        assert!(solve(f, &cols[..2], &v(f, &[(1, 1)])).is_none());
    }
}
