use std::collections::{BTreeMap, HashMap};
use std::ops::Range;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::scalar::{Field, Scalar};

/// Closed degree interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Window {
        Window { lo, hi }
    }

    pub fn contains(&self, d: i64) -> bool {
        self.lo <= d && d <= self.hi
    }
}

/// Graded vector space with a labelled basis. Basis elements are indexed
/// globally, sorted by degree and then by insertion order within a degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    labels: Vec<String>,
    degrees: Vec<i64>,
    ranges: BTreeMap<i64, Range<usize>>,
    lookup: HashMap<(i64, String), usize>,
}

impl GradedSpace {
    pub fn new(basis: BTreeMap<i64, Vec<String>>) -> Result<GradedSpace> {
        let mut labels = vec![];
        let mut degrees = vec![];
        let mut ranges = BTreeMap::new();
        let mut lookup = HashMap::new();
        for (d, ls) in basis {
            if ls.is_empty() {
                continue;
            }
            let start = labels.len();
            for l in ls {
                if lookup.insert((d, l.clone()), labels.len()).is_some() {
                    return Err(Error::InvalidInput(format!("duplicate label '{l}' in degree {d}")));
                }
                labels.push(l);
                degrees.push(d);
            }
            ranges.insert(d, start..labels.len());
        }
        Ok(GradedSpace { labels, degrees, ranges, lookup })
    }

    /// Builds a space from `(degree, label)` pairs in arbitrary order.
    pub fn from_pairs<I: IntoIterator<Item = (i64, String)>>(pairs: I) -> Result<GradedSpace> {
        let mut b: BTreeMap<i64, Vec<String>> = BTreeMap::new();
        for (d, l) in pairs {
            b.entry(d).or_default().push(l);
        }
        GradedSpace::new(b)
    }

    pub fn zero() -> GradedSpace {
        GradedSpace::new(BTreeMap::new()).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn dim_in(&self, d: i64) -> usize {
        self.ranges.get(&d).map_or(0, |r| r.len())
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, d: i64, label: &str) -> Option<usize> {
        self.lookup.get(&(d, label.to_string())).copied()
    }

    /// Looks a label up in any degree; `None` if absent or ambiguous.
    pub fn find_label(&self, label: &str) -> Option<usize> {
        let mut hit = None;
        for (i, l) in self.labels.iter().enumerate() {
            if l == label {
                if hit.is_some() {
                    return None;
                }
                hit = Some(i);
            }
        }
        hit
    }

    pub fn indices_in(&self, d: i64) -> Range<usize> {
        self.ranges.get(&d).cloned().unwrap_or(0..0)
    }

    /// Degrees with nonzero component, increasing.
    pub fn degrees(&self) -> Vec<i64> {
        self.ranges.keys().copied().collect()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.ranges.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.ranges.keys().next_back().copied()
    }

    pub fn basis_map(&self) -> BTreeMap<i64, Vec<String>> {
        self.ranges.iter().map(|(d, r)| (*d, self.labels[r.clone()].to_vec())).collect()
    }

    pub fn shifted(&self, by: i64) -> GradedSpace {
        GradedSpace::new(self.basis_map().into_iter().map(|(d, l)| (d + by, l)).collect()).unwrap()
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.ranges.iter().map(|(d, r)| (*d, r.len())).collect()
    }

    /// Degree of a homogeneous vector, `None` for zero or inhomogeneous vectors.
    pub fn degree_of(&self, v: &Vector) -> Option<i64> {
        let mut it = v.keys().map(|i| self.degrees[*i]);
        let d = it.next()?;
        if it.all(|e| e == d) {
            Some(d)
        } else {
            None
        }
    }

    pub fn format_vector(&self, v: &Vector) -> String {
        if v.is_empty() {
            return "0".into();
        }
        v.iter().map(|(i, c)| format!("{}*{}", c, self.labels[*i])).collect::<Vec<_>>().join(" + ")
    }
}

/// Homogeneous linear map, stored as one sparse column per source basis element.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap {
    pub field: Field,
    pub source: Arc<GradedSpace>,
    pub target: Arc<GradedSpace>,
    pub degree: i64,
    pub cols: Vec<Vector>,
}

impl LinearMap {
    pub fn zero(field: Field, source: Arc<GradedSpace>, target: Arc<GradedSpace>, degree: i64) -> LinearMap {
        let n = source.dim();
        LinearMap { field, source, target, degree, cols: vec![Vector::new(); n] }
    }

    pub fn identity(field: Field, space: Arc<GradedSpace>) -> LinearMap {
        let cols = (0..space.dim()).map(|i| linalg::unit(field, i)).collect();
        LinearMap { field, source: space.clone(), target: space, degree: 0, cols }
    }

    /// Checks that every column lands in the right target degree.
    pub fn new(field: Field, source: Arc<GradedSpace>, target: Arc<GradedSpace>, degree: i64, cols: Vec<Vector>) -> Result<LinearMap> {
        if cols.len() != source.dim() {
            return Err(Error::ShapeMismatch(format!("{} columns for a {}-dimensional source", cols.len(), source.dim())));
        }
        for (j, c) in cols.iter().enumerate() {
            for i in c.keys() {
                if *i >= target.dim() || target.degree(*i) != source.degree(j) + degree {
                    return Err(Error::ShapeMismatch(format!(
                        "entry {} -> {} does not have degree {degree}",
                        source.label(j),
                        target.labels().get(*i).map(|s| s.as_str()).unwrap_or("?")
                    )));
                }
            }
        }
        Ok(LinearMap { field, source, target, degree, cols })
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        linalg::apply(&self.cols, v)
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &LinearMap) -> Result<LinearMap> {
        if *g.target != *self.source {
            return Err(Error::ShapeMismatch("composing maps with mismatched spaces".into()));
        }
        let cols = g.cols.iter().map(|c| self.apply(c)).collect();
        Ok(LinearMap { field: self.field, source: g.source.clone(), target: self.target.clone(), degree: self.degree + g.degree, cols })
    }

    pub fn add(&self, other: &LinearMap) -> Result<LinearMap> {
        if self.degree != other.degree || *self.source != *other.source || *self.target != *other.target {
            return Err(Error::ShapeMismatch("adding maps of different shapes".into()));
        }
        let mut cols = self.cols.clone();
        for (c, o) in cols.iter_mut().zip(&other.cols) {
            linalg::add_scaled(c, &self.field.one(), o);
        }
        Ok(LinearMap { cols, ..self.clone() })
    }

    pub fn scaled(&self, c: &Scalar) -> LinearMap {
        LinearMap { cols: self.cols.iter().map(|v| linalg::scale(v, c)).collect(), ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn rank(&self) -> usize {
        linalg::rank(self.field, &self.cols)
    }

    /// Nonzero entries as `(source index, target index, coefficient)`.
    pub fn entries(&self) -> Vec<(usize, usize, Scalar)> {
        let mut out = vec![];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, x) in c {
                out.push((j, *i, x.clone()));
            }
        }
        out
    }
}

/// Chain complex with a degree −1 differential.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainComplex {
    pub field: Field,
    pub space: Arc<GradedSpace>,
    pub d: LinearMap,
}

impl ChainComplex {
    /// Validates degrees and d² = 0 on every basis vector.
    pub fn new(field: Field, space: GradedSpace, d_cols: Vec<Vector>) -> Result<ChainComplex> {
        let space = Arc::new(space);
        let d = LinearMap::new(field, space.clone(), space.clone(), -1, d_cols)?;
        let c = ChainComplex { field, space, d };
        c.check_square_zero()?;
        Ok(c)
    }

    pub fn zero_differential(field: Field, space: GradedSpace) -> ChainComplex {
        let space = Arc::new(space);
        let d = LinearMap::zero(field, space.clone(), space.clone(), -1);
        ChainComplex { field, space, d }
    }

    pub fn zero(field: Field) -> ChainComplex {
        ChainComplex::zero_differential(field, GradedSpace::zero())
    }

    /// The ground field in degree 0, basis label `"1"`.
    pub fn unit(field: Field) -> ChainComplex {
        ChainComplex::zero_differential(field, GradedSpace::from_pairs([(0, "1".to_string())]).unwrap())
    }

    /// One basis element in degree `k`.
    pub fn sphere(field: Field, k: i64) -> ChainComplex {
        ChainComplex::zero_differential(field, GradedSpace::from_pairs([(k, format!("s{k}"))]).unwrap())
    }

    /// Basis elements in degrees `k` and `k−1` with d the identity.
    pub fn disk(field: Field, k: i64) -> ChainComplex {
        let sp = GradedSpace::from_pairs([(k - 1, format!("b{}", k - 1)), (k, format!("e{k}"))]).unwrap();
        ChainComplex::new(field, sp, vec![Vector::new(), linalg::unit(field, 0)]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn differential(&self, v: &Vector) -> Vector {
        self.d.apply(v)
    }

    pub fn check_square_zero(&self) -> Result<()> {
        for (j, c) in self.d.cols.iter().enumerate() {
            let dd = self.d.apply(c);
            if !dd.is_empty() {
                return Err(Error::NotAComplex(format!("d(d({})) = {}", self.space.label(j), self.space.format_vector(&dd))));
            }
        }
        Ok(())
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.space.dims()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims().iter().map(|(d, n)| if d.rem_euclid(2) == 0 { *n as i64 } else { -(*n as i64) }).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_and_degrees() {
        let s = GradedSpace::from_pairs([(1, "b".into()), (0, "a".into()), (1, "c".into())]).unwrap();
        assert_eq!(s.dim(), 3);
        assert_eq!(s.label(0), "a");
        assert_eq!(s.indices_in(1), 1..3);
        assert_eq!(s.index_of(1, "c"), Some(2));
        assert!(GradedSpace::from_pairs([(0, "a".into()), (0, "a".into())]).is_err());
    }

    #[test]
    fn rejects_non_complex() {
        let f = Field::f2();
        let s = GradedSpace::from_pairs([(0, "a".into()), (1, "b".into()), (2, "c".into())]).unwrap();
        let r = ChainComplex::new(f, s, vec![Vector::new(), linalg::unit(f, 0), linalg::unit(f, 1)]);
        assert!(matches!(r, Err(Error::NotAComplex(_))));
    }

    #[test]
    fn differential_is_a_chain_map_of_degree_minus_one() {
        let d1 = ChainComplex::disk(Field::Rational, 1);
        assert!(crate::complex::is_chain_map(&d1, &d1, &d1.d));
    }
}
