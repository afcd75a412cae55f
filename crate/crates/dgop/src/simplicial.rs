//! Finite simplicial sets given by nondegenerate simplices and their faces,
//! with degeneracies kept in normal form s_{j_1} ... s_{j_k} x, j_1 > ... > j_k.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graded::{ChainComplex, GradedSpace, LinearMap};
use crate::linalg::{self, Vector};
use crate::scalar::{Field, Scalar};

/// A possibly degenerate simplex s_{degens[0]} s_{degens[1]} ... base.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalForm {
    /// (dimension, index) of the nondegenerate base.
    pub base: (usize, usize),
    /// Strictly decreasing, outermost first.
    pub degens: Vec<usize>,
}

impl NormalForm {
    pub fn nondegenerate(dim: usize, idx: usize) -> NormalForm {
        NormalForm { base: (dim, idx), degens: vec![] }
    }

    pub fn dim(&self) -> usize {
        self.base.0 + self.degens.len()
    }

    pub fn is_degenerate(&self) -> bool {
        !self.degens.is_empty()
    }
}

/// Brings a word of degeneracies (outermost first) to decreasing order using
/// s_i s_j = s_{j+1} s_i for i ≤ j.
pub fn normalize_degeneracies(word: &[usize]) -> Vec<usize> {
    let mut w = word.to_vec();
    loop {
        let mut changed = false;
        for p in 0..w.len().saturating_sub(1) {
            let (i, j) = (w[p], w[p + 1]);
            if i <= j {
                w[p] = j + 1;
                w[p + 1] = i;
                changed = true;
            }
        }
        if !changed {
            return w;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Simplex {
    pub id: String,
    /// Faces d_0 .. d_n; empty for vertices.
    pub faces: Vec<NormalForm>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct SimplicialSet {
    /// Nondegenerate simplices by dimension.
    pub simplices: Vec<Vec<Simplex>>,
}

impl SimplicialSet {
    /// Validates face dimensions and the identities d_i d_j = d_{j−1} d_i for i < j.
    pub fn new(simplices: Vec<Vec<Simplex>>) -> Result<SimplicialSet> {
        let x = SimplicialSet { simplices };
        for (n, level) in x.simplices.iter().enumerate() {
            for s in level {
                let expected = if n == 0 { 0 } else { n + 1 };
                if s.faces.len() != expected {
                    return Err(Error::SimplicialIdentity(format!("simplex '{}' of dimension {n} needs {expected} faces", s.id)));
                }
                for f in &s.faces {
                    if f.dim() + 1 != n || f.base.0 >= x.simplices.len() || f.base.1 >= x.simplices[f.base.0].len() {
                        return Err(Error::SimplicialIdentity(format!("face of '{}' has the wrong dimension or is unknown", s.id)));
                    }
                    if normalize_degeneracies(&f.degens) != f.degens || f.degens.iter().any(|j| *j > f.dim().saturating_sub(1)) {
                        return Err(Error::SimplicialIdentity(format!("face of '{}' is not in normal form", s.id)));
                    }
                }
            }
        }
        for (n, level) in x.simplices.iter().enumerate() {
            if n < 2 {
                continue;
            }
            for (k, s) in level.iter().enumerate() {
                let me = NormalForm::nondegenerate(n, k);
                for j in 0..=n {
                    for i in 0..j {
                        let a = x.face(&x.face(&me, j), i);
                        let b = x.face(&x.face(&me, i), j - 1);
                        if a != b {
                            return Err(Error::SimplicialIdentity(format!("d_{i} d_{j} != d_{} d_{i} on '{}'", j - 1, s.id)));
                        }
                    }
                }
            }
        }
        Ok(x)
    }

    pub fn empty() -> SimplicialSet {
        SimplicialSet { simplices: vec![] }
    }

    pub fn dimension(&self) -> Option<usize> {
        self.simplices.iter().rposition(|l| !l.is_empty())
    }

    pub fn count(&self, n: usize) -> usize {
        self.simplices.get(n).map_or(0, |l| l.len())
    }

    pub fn simplex(&self, dim: usize, idx: usize) -> &Simplex {
        &self.simplices[dim][idx]
    }

    pub fn find(&self, id: &str) -> Option<(usize, usize)> {
        for (n, l) in self.simplices.iter().enumerate() {
            if let Some(i) = l.iter().position(|s| s.id == id) {
                return Some((n, i));
            }
        }
        None
    }

    /// d_i of a simplex in normal form.
    pub fn face(&self, x: &NormalForm, i: usize) -> NormalForm {
        let mut i = i;
        let mut kept = vec![];
        for (p, &j) in x.degens.iter().enumerate() {
            if i < j {
                kept.push(j - 1);
            } else if i == j || i == j + 1 {
                kept.extend_from_slice(&x.degens[p + 1..]);
                return NormalForm { base: x.base, degens: normalize_degeneracies(&kept) };
            } else {
                kept.push(j);
                i -= 1;
            }
        }
        let f = &self.simplices[x.base.0][x.base.1].faces[i];
        kept.extend_from_slice(&f.degens);
        NormalForm { base: f.base, degens: normalize_degeneracies(&kept) }
    }

    /// The simplex x∘θ for the monotone vertex list θ of a nondegenerate
    /// simplex; `None` when the result is degenerate.
    pub fn restrict(&self, dim: usize, idx: usize, vertices: &[usize]) -> Option<usize> {
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return None;
        }
        let mut cur = NormalForm::nondegenerate(dim, idx);
        let mut present: Vec<usize> = (0..=dim).collect();
        for v in (0..=dim).rev() {
            if !vertices.contains(&v) {
                let pos = present.iter().position(|x| *x == v).unwrap();
                cur = self.face(&cur, pos);
                present.remove(pos);
            }
        }
        if cur.is_degenerate() {
            None
        } else {
            Some(cur.base.1)
        }
    }

    /// Offsets of each dimension in the chain basis.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = vec![];
        let mut acc = 0;
        for l in &self.simplices {
            out.push(acc);
            acc += l.len();
        }
        out.push(acc);
        out
    }

    pub fn total(&self) -> usize {
        self.simplices.iter().map(|l| l.len()).sum()
    }
}

/// Normalized chains: basis the nondegenerate simplices, labelled by id.
pub fn normalized_chains(x: &SimplicialSet, field: Field) -> ChainComplex {
    let off = x.offsets();
    let space = GradedSpace::from_pairs(x.simplices.iter().enumerate().flat_map(|(n, l)| l.iter().map(move |s| (n as i64, s.id.clone()))))
        .expect("simplex ids are distinct");
    let mut cols = vec![];
    for (n, l) in x.simplices.iter().enumerate() {
        for s in l {
            let mut v = Vector::new();
            if n > 0 {
                for (i, f) in s.faces.iter().enumerate() {
                    if !f.is_degenerate() {
                        linalg::add_entry(&mut v, off[f.base.0] + f.base.1, &Scalar::sign(field, i % 2 == 1));
                    }
                }
            }
            cols.push(v);
        }
    }
    ChainComplex::new(field, space, cols).expect("simplicial identities give d² = 0")
}

/// A simplicial set from an ordered simplicial complex: each simplex is the
/// sorted list of its vertices, closed under faces.
pub fn from_facets(facets: &[Vec<usize>]) -> SimplicialSet {
    let mut by_dim: Vec<Vec<Vec<usize>>> = vec![];
    let mut seen = std::collections::HashSet::new();
    for f in facets {
        let mut f = f.clone();
        f.sort();
        let n = f.len();
        for mask in 1u32..(1 << n) {
            let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
            if seen.insert(s.clone()) {
                let d = s.len() - 1;
                if by_dim.len() <= d {
                    by_dim.resize(d + 1, vec![]);
                }
                by_dim[d].push(s);
            }
        }
    }
    for l in &mut by_dim {
        l.sort();
    }
    let index: HashMap<Vec<usize>, usize> = by_dim.iter().flat_map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i))).collect();
    let simplices = by_dim
        .iter()
        .enumerate()
        .map(|(d, l)| {
            l.iter()
                .map(|s| {
                    let id = s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
                    let faces = if d == 0 {
                        vec![]
                    } else {
                        (0..=d)
                            .map(|i| {
                                let mut t = s.clone();
                                t.remove(i);
                                NormalForm::nondegenerate(d - 1, index[&t])
                            })
                            .collect()
                    };
                    Simplex { id: format!("[{id}]"), faces }
                })
                .collect()
        })
        .collect();
    SimplicialSet { simplices }
}

pub fn standard_simplex(n: usize) -> SimplicialSet {
    from_facets(&[(0..=n).collect()])
}

pub fn simplex_boundary(n: usize) -> SimplicialSet {
    if n == 0 {
        return SimplicialSet::empty();
    }
    let facets: Vec<Vec<usize>> = (0..=n).map(|i| (0..=n).filter(|v| *v != i).collect()).collect();
    from_facets(&facets)
}

/// One vertex and one edge.
pub fn circle() -> SimplicialSet {
    let v = Simplex { id: "v".into(), faces: vec![] };
    let e = Simplex { id: "e".into(), faces: vec![NormalForm::nondegenerate(0, 0); 2] };
    SimplicialSet { simplices: vec![vec![v], vec![e]] }
}

/// The minimal 6-vertex triangulation of the real projective plane.
pub fn projective_plane() -> SimplicialSet {
    let tri = [[1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 6, 2], [2, 3, 5], [3, 4, 6], [4, 5, 2], [5, 6, 3], [6, 2, 4]];
    from_facets(&tri.iter().map(|t| t.iter().map(|v| v - 1).collect()).collect::<Vec<_>>())
}

/// The 7-vertex Möbius torus.
pub fn torus() -> SimplicialSet {
    let mut tri = vec![];
    for i in 0..7 {
        tri.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        tri.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    from_facets(&tri)
}

/// Built-in spaces by name: `delta<n>`, `boundary<n>`, `circle`, `rp2`, `torus`.
pub fn builtin(name: &str) -> Result<SimplicialSet> {
    if let Some(n) = name.strip_prefix("delta") {
        return Ok(standard_simplex(n.parse().map_err(|_| Error::InvalidInput(format!("unknown space '{name}'")))?));
    }
    if let Some(n) = name.strip_prefix("boundary") {
        return Ok(simplex_boundary(n.parse().map_err(|_| Error::InvalidInput(format!("unknown space '{name}'")))?));
    }
    match name {
        "circle" => Ok(circle()),
        "rp2" => Ok(projective_plane()),
        "torus" => Ok(torus()),
        _ => Err(Error::InvalidInput(format!("unknown space '{name}'"))),
    }
}

pub const BUILTINS: [&str; 7] = ["delta0", "delta1", "delta2", "boundary2", "circle", "rp2", "torus"];

/// Chain map induced by a weakly monotone vertex map between spaces built
/// from ordered simplicial complexes (simplices labelled by vertex lists).
pub fn vertex_map_chains(x: &SimplicialSet, y: &SimplicialSet, f: &[usize], field: Field) -> Result<LinearMap> {
    let cx = normalized_chains(x, field);
    let cy = normalized_chains(y, field);
    let mut cols = vec![];
    for b in 0..cx.dim() {
        let label = cx.space.label(b);
        let verts: Vec<usize> = label
            .trim_matches(|c| c == '[' || c == ']')
            .split(',')
            .map(|v| v.parse::<usize>().map_err(|_| Error::InvalidInput("vertex maps need vertex-list labels".into())))
            .collect::<Result<_>>()?;
        let img: Vec<usize> = verts.iter().map(|v| f[*v]).collect();
        if img.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidInput("vertex map is not monotone".into()));
        }
        let mut col = Vector::new();
        if img.windows(2).all(|w| w[0] < w[1]) {
            let l = format!("[{}]", img.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
            let i = cy.space.find_label(&l).ok_or_else(|| Error::InvalidInput(format!("image simplex {l} is missing")))?;
            col.insert(i, field.one());
        }
        cols.push(col);
    }
    LinearMap::new(field, cx.space.clone(), cy.space.clone(), 0, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::homology;

    fn betti(x: &SimplicialSet, f: Field) -> Vec<usize> {
        homology(&normalized_chains(x, f)).betti().values().copied().collect()
    }

    #[test]
    fn betti_numbers() {
        let f2 = Field::f2();
        let q = Field::Rational;
        assert_eq!(betti(&standard_simplex(0), q), vec![1]);
        assert_eq!(betti(&simplex_boundary(2), q), vec![1, 1]);
        assert_eq!(betti(&circle(), q), vec![1, 1]);
        assert_eq!(betti(&projective_plane(), f2), vec![1, 1, 1]);
        assert_eq!(normalized_chains(&projective_plane(), q).dims().values().copied().collect::<Vec<_>>(), vec![6, 15, 10]);
        let h = homology(&normalized_chains(&projective_plane(), q)).betti();
        assert_eq!((0..=2).map(|d| h.get(&d).copied().unwrap_or(0)).collect::<Vec<_>>(), vec![1, 0, 0]);
        assert_eq!(betti(&torus(), q), vec![1, 2, 1]);
    }

    #[test]
    fn degenerate_faces() {
        let x = circle();
        let s0e = NormalForm { base: (1, 0), degens: vec![0] };
        assert_eq!(x.face(&s0e, 0), NormalForm::nondegenerate(1, 0));
        assert_eq!(x.face(&s0e, 2), NormalForm { base: (0, 0), degens: vec![0] });
        assert_eq!(normalize_degeneracies(&[0, 0]), vec![1, 0]);
    }

    #[test]
    fn identities_are_checked() {
        let x = standard_simplex(3);
        assert!(SimplicialSet::new(x.simplices.clone()).is_ok());
        let mut bad = x.simplices.clone();
        bad[2][0].faces.swap(0, 1);
        assert!(SimplicialSet::new(bad).is_err());
    }
}
