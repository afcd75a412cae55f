//! Coalgebras over operads in structural-map form, coalgebras over
//! quasi-free operads given on generators, A∞-coalgebras, and the lift of a
//! cell structure along a quasi-isomorphism.

use std::collections::HashMap;

use serde::Serialize;

use crate::complex::{self, koszul};
use crate::error::{Error, Result};
use crate::graded::{ChainComplex, LinearMap};
use crate::linalg::{self, Vector};
use crate::multilinear::{self, Cooperation, Tensor};
use crate::operad::{AxiomConfig, Operad, OperadMorphism};
use crate::report::Report;
use crate::scalar::Scalar;
use crate::tree::{self, Cell, FreeBase, FreeOperad, Presentation, TreePoly, TreeTarget};

/// A coalgebra over a truncated operad: one cooperation per basis element.
#[derive(Clone, Debug, PartialEq)]
pub struct PCoalgebra {
    pub carrier: ChainComplex,
    /// `ops[n][b]` is Δ_e for the b-th basis element e of P(n).
    pub ops: Vec<Vec<Cooperation>>,
}

impl PCoalgebra {
    pub fn max_arity(&self) -> usize {
        self.ops.len().saturating_sub(1)
    }

    /// Δ for a linear combination of basis elements of P(n).
    pub fn cooperation(&self, n: usize, v: &Vector, degree: i64) -> Cooperation {
        let mut c = Cooperation::zero(&self.carrier, n, degree);
        for (b, x) in v {
            c = c.add(x, &self.ops[n][*b]);
        }
        c
    }

    /// The zero structure, except the unit acting as the identity.
    pub fn trivial(op: &dyn Operad, carrier: &ChainComplex, max: usize) -> PCoalgebra {
        let mut ops = vec![];
        for n in 0..=max {
            ops.push((0..op.space(n).dim()).map(|b| Cooperation::zero(carrier, n, op.space(n).degree(b))).collect::<Vec<_>>());
        }
        let unit = op.unit();
        for (b, x) in &unit {
            ops[1][*b] = Cooperation::identity(carrier).scaled(x);
        }
        PCoalgebra { carrier: carrier.clone(), ops }
    }
}

fn witness(c: &ChainComplex, b: usize, lhs: &Cooperation, rhs: &Cooperation) -> String {
    let diff = lhs.add(&-c.field.one(), rhs);
    format!(
        "on {}: {} vs {} (difference {})",
        c.space.label(b),
        multilinear::format_tensor(&c.space, &lhs.images[b]),
        multilinear::format_tensor(&c.space, &rhs.images[b]),
        multilinear::format_tensor(&c.space, &diff.images[b])
    )
}

fn first_diff(lhs: &Cooperation, rhs: &Cooperation) -> Option<usize> {
    (0..lhs.images.len()).find(|b| lhs.images[*b] != rhs.images[*b])
}

/// Checks shape, unit, equivariance, chain-map compatibility ∂Δ_e = Δ_{de}
/// and Δ_{e∘_i f} = (−1)^{|e||f|} (Δ_f at i) ∘ Δ_e on the truncation.
pub fn verify_pcoalgebra(op: &dyn Operad, c: &PCoalgebra, cfg: &AxiomConfig) -> Report {
    verify_pcoalgebra_truncated(op, c, cfg, &[])
}

/// As [`verify_pcoalgebra`], for a carrier whose differential was cut off on
/// the basis elements `cut`; chain identities that touch them are skipped.
pub fn verify_pcoalgebra_truncated(op: &dyn Operad, c: &PCoalgebra, cfg: &AxiomConfig, cut: &[usize]) -> Report {
    let mut rep = Report::new();
    let car = &c.carrier;
    let max = c.max_arity().min(op.max_arity());
    {
        let chk = rep.check("shape");
        for n in 0..=max {
            if c.ops[n].len() != op.space(n).dim() {
                chk.fail(format!("arity {n}: {} cooperations for {} basis elements", c.ops[n].len(), op.space(n).dim()));
                continue;
            }
            for (b, d) in c.ops[n].iter().enumerate() {
                let ok = d.arity == n && d.degree == op.space(n).degree(b) && d.check_shape(car).is_ok();
                chk.record(ok, || format!("cooperation of {} has the wrong arity or degree", op.space(n).label(b)));
            }
        }
    }
    if !rep.passed() {
        return rep.finish();
    }
    {
        let chk = rep.check("unit");
        if max >= 1 {
            let u = c.cooperation(1, &op.unit(), 0);
            let id = Cooperation::identity(car);
            match first_diff(&u, &id) {
                None => chk.ok(),
                Some(b) => chk.fail(witness(car, b, &u, &id)),
            }
        }
    }
    let singles: Vec<(usize, usize)> = (0..=max).flat_map(|n| (0..op.space(n).dim()).map(move |b| (n, b))).collect();
    {
        let chk = rep.check("equivariance");
        for (n, b) in cfg.select(21, singles.clone()) {
            for j in 0..n.saturating_sub(1) {
                let lhs = c.cooperation(n, &op.act(n, j, b), op.space(n).degree(b));
                let rhs = c.ops[n][b].permuted(car, &crate::perm::transposition(n, j));
                match first_diff(&lhs, &rhs) {
                    None => chk.ok(),
                    Some(x) => chk.fail(format!("s_{j}.{} {}", op.space(n).label(b), witness(car, x, &lhs, &rhs))),
                }
            }
        }
    }
    {
        let chk = rep.check("chain map");
        for (n, b) in cfg.select(22, singles.clone()) {
            let Some(db) = op.differential(n, b) else {
                chk.skip();
                continue;
            };
            let lhs = c.ops[n][b].boundary(car);
            let rhs = c.cooperation(n, &db, op.space(n).degree(b) - 1);
            for x in 0..car.dim() {
                let touches = cut.contains(&x) || c.ops[n][b].images[x].keys().any(|k| k.iter().any(|y| cut.contains(y)));
                if touches {
                    chk.skip();
                } else if lhs.images[x] == rhs.images[x] {
                    chk.ok();
                } else {
                    chk.fail(format!("d({}) {}", op.space(n).label(b), witness(car, x, &lhs, &rhs)));
                }
            }
        }
    }
    {
        let chk = rep.check("composition");
        let mut pairs = vec![];
        for n in 1..=max {
            for m in 0..=max + 1 - n {
                for a in 0..op.space(n).dim() {
                    for b in 0..op.space(m).dim() {
                        pairs.push((n, a, m, b));
                    }
                }
            }
        }
        for (n, a, m, b) in cfg.select(23, pairs) {
            let (da, db) = (op.space(n).degree(a), op.space(m).degree(b));
            for i in 0..n {
                let Some(comp) = op.compose(n, i, m, a, b) else {
                    chk.skip();
                    continue;
                };
                let lhs = c.cooperation(n + m - 1, &comp, da + db);
                let rhs = c.ops[n][a].then_at(car, i, &c.ops[m][b]).scaled(&koszul(car.field, da * db));
                match first_diff(&lhs, &rhs) {
                    None => chk.ok(),
                    Some(x) => {
                        chk.fail(format!("{} o_{} {} {}", op.space(n).label(a), i + 1, op.space(m).label(b), witness(car, x, &lhs, &rhs)))
                    }
                }
            }
        }
    }
    rep.finish()
}

/// Pulls a Q-coalgebra back along φ: P → Q.
pub fn restrict(p: &dyn Operad, phi: &dyn OperadMorphism, c: &PCoalgebra) -> Result<PCoalgebra> {
    let max = p.max_arity().min(c.max_arity());
    let mut ops = vec![];
    for n in 0..=max {
        let mut row = vec![];
        for b in 0..p.space(n).dim() {
            let img = phi
                .image(n, b)
                .ok_or_else(|| Error::TruncationOverflow(format!("image of {} is outside the truncation", p.space(n).label(b))))?;
            row.push(c.cooperation(n, &img, p.space(n).degree(b)));
        }
        ops.push(row);
    }
    Ok(PCoalgebra { carrier: c.carrier.clone(), ops })
}

/// Evaluation of trees in the coendomorphism operad of a carrier.
pub struct CoEndTarget<'a> {
    pub carrier: &'a ChainComplex,
    /// `gens[k][dec]`
    pub gens: &'a [Vec<Cooperation>],
}

impl TreeTarget for CoEndTarget<'_> {
    type E = Cooperation;
    fn unit(&self) -> Cooperation {
        Cooperation::identity(self.carrier)
    }
    fn generator(&self, k: usize, dec: usize) -> Option<Cooperation> {
        self.gens.get(k)?.get(dec).cloned()
    }
    fn compose(&self, a: &Cooperation, _: usize, i: usize, b: &Cooperation, _: usize) -> Option<Cooperation> {
        Some(a.then_at(self.carrier, i, b).scaled(&koszul(self.carrier.field, a.degree * b.degree)))
    }
    fn act(&self, _: usize, sigma: &[usize], a: &Cooperation) -> Cooperation {
        a.permuted(self.carrier, sigma)
    }
    fn zero(&self, n: usize, degree: i64) -> Cooperation {
        Cooperation::zero(self.carrier, n, degree)
    }
    fn add_scaled(&self, acc: &mut Cooperation, c: &Scalar, x: &Cooperation) {
        *acc = acc.add(c, x);
    }
}

/// Structure over a free operad from cooperations of the generators.
pub fn from_generator_images(op: &FreeOperad, carrier: &ChainComplex, gens: &[Vec<Cooperation>], max: usize) -> PCoalgebra {
    let t = CoEndTarget { carrier, gens };
    let mut ops = vec![];
    for n in 0..=max.min(op.max_arity()) {
        let row = op.trees(n).iter().map(|tr| tree::evaluate(&t, tr).expect("every generator has an image")).collect();
        ops.push(row);
    }
    PCoalgebra { carrier: carrier.clone(), ops }
}

/// Coalgebra over a quasi-free operad, given by one cooperation per cell.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiFreeCoalgebra {
    pub presentation: Presentation,
    pub carrier: ChainComplex,
    /// Aligned with `presentation.cells`; Δ_x for the generator x = id·x.
    pub generators: Vec<Cooperation>,
}

impl QuasiFreeCoalgebra {
    /// Checks shapes and the boundary condition of every cell.
    pub fn new(presentation: Presentation, carrier: ChainComplex, generators: Vec<Cooperation>) -> Result<QuasiFreeCoalgebra> {
        if generators.len() != presentation.cells.len() {
            return Err(Error::ShapeMismatch("one cooperation per generator is required".into()));
        }
        let c = QuasiFreeCoalgebra { presentation, carrier, generators };
        let base = c.presentation.base()?;
        for i in 0..c.generators.len() {
            c.check_cell(&base, i)?;
        }
        Ok(c)
    }

    fn check_cell(&self, base: &FreeBase, i: usize) -> Result<()> {
        let cell = &self.presentation.cells[i];
        let g = &self.generators[i];
        if g.arity != cell.arity || g.degree != cell.degree {
            return Err(Error::ShapeMismatch(format!(
                "cooperation for '{}' must have arity {} and degree {}",
                cell.name, cell.arity, cell.degree
            )));
        }
        g.check_shape(&self.carrier)?;
        let expected = self.boundary_value(base, i)?;
        let got = g.boundary(&self.carrier);
        if let Some(b) = first_diff(&got, &expected) {
            return Err(Error::BoundaryViolation(format!("'{}' {}", cell.name, witness(&self.carrier, b, &got, &expected))));
        }
        Ok(())
    }

    /// Cooperations of every generator basis element σ·x = σ_* Δ_x.
    pub fn generator_images(&self, base: &FreeBase) -> Vec<Vec<Cooperation>> {
        let names: HashMap<&str, usize> = self.presentation.cells.iter().enumerate().map(|(i, c)| (c.name.as_str(), i)).collect();
        (0..base.m.components.len())
            .map(|k| {
                (0..base.m.dim(k))
                    .map(|dec| {
                        let (name, sigma) = tree::split_generator_label(base.dec_label(k, dec), k);
                        match names.get(name.as_str()) {
                            Some(&i) => self.generators[i].permuted(&self.carrier, &sigma),
                            None => Cooperation::zero(&self.carrier, k, base.dec_degree(k, dec)),
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// The boundary tree polynomial of cell i evaluated in the structure.
    pub fn boundary_value(&self, base: &FreeBase, i: usize) -> Result<Cooperation> {
        let cell = &self.presentation.cells[i];
        let poly: TreePoly = base.resolve_poly(&cell.boundary)?;
        let gens = self.generator_images(base);
        let t = CoEndTarget { carrier: &self.carrier, gens: &gens };
        Ok(tree::evaluate_poly(&t, cell.arity, cell.degree - 1, &poly).expect("generators have images"))
    }

    /// Forgets the last cell.
    pub fn restrict_last(&self) -> QuasiFreeCoalgebra {
        let mut c = self.clone();
        c.presentation = c.presentation.without_last();
        c.generators.pop();
        c
    }

    /// Extends the structure across a new cell; requires ∂Δ_new to equal the
    /// evaluated boundary of the cell.
    pub fn glue(&self, cell: Cell, delta: Cooperation) -> Result<QuasiFreeCoalgebra> {
        let presentation = self.presentation.attach_cell(cell)?;
        let mut c = QuasiFreeCoalgebra { presentation, carrier: self.carrier.clone(), generators: self.generators.clone() };
        c.generators.push(delta);
        let base = c.presentation.base()?;
        c.check_cell(&base, c.generators.len() - 1)?;
        Ok(c)
    }

    /// The full structure on the basis of a realization of the presentation.
    pub fn to_pcoalgebra(&self, op: &FreeOperad) -> PCoalgebra {
        let gens = self.generator_images(&op.base);
        from_generator_images(op, &self.carrier, &gens, op.max_arity())
    }
}

/// A∞-coalgebra truncated at N: Δ_1 = d and Δ_n of degree n − 2.
#[derive(Clone, Debug, PartialEq)]
pub struct AInftyCoalgebra {
    pub carrier: ChainComplex,
    /// `maps[n]` is Δ_n for n ≥ 2; entries 0 and 1 are unused.
    pub maps: Vec<Option<Cooperation>>,
}

impl AInftyCoalgebra {
    pub fn new(carrier: ChainComplex, higher: Vec<Cooperation>) -> AInftyCoalgebra {
        let mut maps = vec![None, None];
        for c in higher {
            let n = c.arity;
            if maps.len() <= n {
                maps.resize(n + 1, None);
            }
            maps[n] = Some(c);
        }
        AInftyCoalgebra { carrier, maps }
    }

    pub fn delta(&self, n: usize) -> Cooperation {
        if n == 1 {
            return Cooperation::from_linear(&self.carrier.d);
        }
        self.maps.get(n).cloned().flatten().unwrap_or_else(|| Cooperation::zero(&self.carrier, n, n as i64 - 2))
    }

    /// Σ_{r+s+t=n} (−1)^{r+st} (1^r ⊗ Δ_s ⊗ 1^t) Δ_{r+1+t}.
    pub fn relation(&self, n: usize) -> Cooperation {
        let c = &self.carrier;
        let mut acc = Cooperation::zero(c, n, n as i64 - 3);
        for s in 1..=n {
            for r in 0..=n - s {
                let t = n - s - r;
                let outer = self.delta(r + 1 + t);
                let term = outer.then_at(c, r, &self.delta(s));
                let sg = koszul(c.field, (r + s * t) as i64);
                acc = acc.add(&sg, &term);
            }
        }
        acc
    }

    /// Cooperation for the operad generator D_n of the A∞ presentation.
    pub fn as_quasi_free(&self, n_max: usize) -> Result<QuasiFreeCoalgebra> {
        let p = tree::ainfty_presentation(self.carrier.field, n_max);
        QuasiFreeCoalgebra::new(p, self.carrier.clone(), (2..=n_max).map(|n| self.delta(n)).collect())
    }
}

/// Evaluates every A∞ relation n ≤ N on every basis vector.
pub fn verify_ainfty(c: &AInftyCoalgebra, n_max: usize) -> Report {
    let mut rep = Report::new();
    {
        let chk = rep.check("shape");
        for n in 2..c.maps.len() {
            if let Some(d) = &c.maps[n] {
                let ok = d.arity == n && d.degree == n as i64 - 2 && d.check_shape(&c.carrier).is_ok();
                chk.record(ok, || format!("Delta_{n} must have arity {n} and degree {}", n as i64 - 2));
            }
        }
    }
    if !rep.passed() {
        return rep.finish();
    }
    for n in 1..=n_max {
        let r = c.relation(n);
        let chk = rep.check(&format!("relation {n}"));
        match (0..c.carrier.dim()).find(|b| !r.images[*b].is_empty()) {
            None => chk.ok(),
            Some(b) => chk.fail(format!("on {}: {}", c.carrier.space.label(b), multilinear::format_tensor(&c.carrier.space, &r.images[b]))),
        }
    }
    rep.finish()
}

/// Result of lifting a cell structure along a quasi-isomorphism.
#[derive(Clone, Debug, PartialEq)]
pub struct Lift {
    /// The T(D^k(p))-coalgebra on V.
    pub structure: QuasiFreeCoalgebra,
    /// H: W → V^⊗p of degree k+1 with f^⊗p Δ_a^W − Δ̃_a f = ∂H.
    pub homotopy: Cooperation,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LiftChecks {
    pub restriction_strict: bool,
    pub homotopy_identity: bool,
}

/// f^⊗p ∘ Δ for a cooperation on the source of f.
pub fn push_forward(f: &LinearMap, d: &Cooperation) -> Cooperation {
    Cooperation {
        arity: d.arity,
        degree: d.degree + d.arity as i64 * f.degree,
        images: d.images.iter().map(|t| multilinear::map_tensor(f, t)).collect(),
    }
}

/// Δ ∘ f for a cooperation on the target of f.
pub fn pull_back(f: &LinearMap, d: &Cooperation) -> Cooperation {
    Cooperation { arity: d.arity, degree: d.degree + f.degree, images: f.cols.iter().map(|v| d.apply(v)).collect() }
}

/// Lifts the structure of a T(D^k(p))-coalgebra W (cells `b`, `a`) along a
/// quasi-isomorphism f: W → V of T(S^{k−1}(p))-coalgebras, through the
/// mapping cylinder W ↪ Cyl ↠ V.
pub fn lift_cell_structure(w: &QuasiFreeCoalgebra, f: &LinearMap, v: &QuasiFreeCoalgebra) -> Result<Lift> {
    if w.presentation.cells.len() != 2 || v.presentation.cells.len() != 1 || w.presentation.without_last() != v.presentation {
        return Err(Error::InvalidInput("W needs the cells (b, a) of a disk and V the cell b".into()));
    }
    let cw = &w.carrier;
    let cv = &v.carrier;
    let field = cw.field;
    let p = w.presentation.cells[1].arity;
    let k = w.presentation.cells[1].degree;
    if f.degree != 0 || *f.source != *cw.space || *f.target != *cv.space {
        return Err(Error::ShapeMismatch("f must be a degree-0 map W → V".into()));
    }
    if !complex::is_quasi_iso(cw, cv, f)? {
        return Err(Error::NotQuasiIso("f is not a quasi-isomorphism of chain complexes".into()));
    }
    let (db_w, da_w, db_v) = (&w.generators[0], &w.generators[1], &v.generators[0]);
    let lhs = push_forward(f, db_w);
    let rhs = pull_back(f, db_v);
    if let Some(b) = first_diff(&lhs, &rhs) {
        return Err(Error::InvalidInput(format!("f does not commute with Delta_b: {}", witness(cw, b, &lhs, &rhs))));
    }
    let fa = push_forward(f, da_w);
    let sk = koszul(field, k);

    // unknowns: A(v_j) then A(s w_j), each a tensor of the right degree
    let mut unknowns: Vec<(bool, usize, Vec<usize>)> = vec![];
    for j in 0..cv.dim() {
        for key in multilinear::keys_of_degree(&cv.space, p, cv.space.degree(j) + k) {
            unknowns.push((false, j, key));
        }
    }
    for j in 0..cw.dim() {
        for key in multilinear::keys_of_degree(&cv.space, p, cw.space.degree(j) + 1 + k) {
            unknowns.push((true, j, key));
        }
    }
    // equations indexed by (is_sw, basis, key)
    let mut eq_index: HashMap<(bool, usize, Vec<usize>), usize> = HashMap::new();
    let mut eq = |e: (bool, usize, Vec<usize>)| {
        let n = eq_index.len();
        *eq_index.entry(e).or_insert(n)
    };
    // transposes of the differentials and of f
    let mut dv_into: Vec<Vec<(usize, Scalar)>> = vec![vec![]; cv.dim()];
    for (x, col) in cv.d.cols.iter().enumerate() {
        for (y, c) in col {
            dv_into[*y].push((x, c.clone()));
        }
    }
    let mut dw_into: Vec<Vec<(usize, Scalar)>> = vec![vec![]; cw.dim()];
    for (x, col) in cw.d.cols.iter().enumerate() {
        for (y, c) in col {
            dw_into[*y].push((x, c.clone()));
        }
    }
    let mut f_into: Vec<Vec<(usize, Scalar)>> = vec![vec![]; cv.dim()];
    for (x, col) in f.cols.iter().enumerate() {
        for (y, c) in col {
            f_into[*y].push((x, c.clone()));
        }
    }
    // L(A)(v) = d A(v) − (−1)^k A(dv);  L(A)(sw) = d A(sw) + (−1)^k A(s dw) + (−1)^k A(f w)
    let operator = |u: &(bool, usize, Vec<usize>), x: &Scalar, eq: &mut dyn FnMut((bool, usize, Vec<usize>)) -> usize, out: &mut Vector| {
        let (is_sw, j, key) = u;
        for (k2, c) in multilinear::d_tensor(cv, &Tensor::from([(key.clone(), field.one())])) {
            linalg::add_entry(out, eq((*is_sw, *j, k2)), &(&c * x));
        }
        if *is_sw {
            for (w2, c) in &dw_into[*j] {
                linalg::add_entry(out, eq((true, *w2, key.clone())), &(&(&sk * c) * x));
            }
        } else {
            for (v2, c) in &dv_into[*j] {
                linalg::add_entry(out, eq((false, *v2, key.clone())), &(&(&-&sk * c) * x));
            }
            for (w2, c) in &f_into[*j] {
                linalg::add_entry(out, eq((true, *w2, key.clone())), &(&(&sk * c) * x));
            }
        }
    };
    let mut cols = vec![];
    for u in &unknowns {
        let mut col = Vector::new();
        operator(u, &field.one(), &mut eq, &mut col);
        cols.push(col);
    }
    // right-hand side
    let mut rhs = Vector::new();
    for j in 0..cv.dim() {
        for (key, x) in &db_v.images[j] {
            linalg::add_entry(&mut rhs, eq((false, j, key.clone())), x);
        }
    }
    for j in 0..cw.dim() {
        for (key, x) in &fa.images[j] {
            linalg::add_entry(&mut rhs, eq((true, j, key.clone())), &(&sk * x));
        }
    }
    // initial guess A0 = f^⊗p Δ_a g on V for a linear section g of f
    let mut guess: HashMap<(bool, usize, Vec<usize>), Scalar> = HashMap::new();
    let unit_cols: Vec<Vector> = f.cols.clone();
    for j in 0..cv.dim() {
        if let Some(g) = linalg::solve(field, &unit_cols, &linalg::unit(field, j)) {
            let img = fa.apply(&g);
            for (key, x) in img {
                guess.insert((false, j, key), x);
            }
        }
    }
    let mut residual = rhs.clone();
    for (u, x) in &guess {
        let mut col = Vector::new();
        operator(u, x, &mut eq, &mut col);
        residual = linalg::sub(&residual, &col);
    }
    // unknowns outside the equation list have no constraints; new equation
    // rows created above extend every column implicitly by zero
    let sol = linalg::solve(field, &cols, &residual)
        .ok_or_else(|| Error::NoSection("the cylinder lifting problem has no solution in this degree range".into()))?;
    let mut a_v = Cooperation::zero(cv, p, k);
    let mut h = Cooperation::zero(cw, p, k + 1);
    for ((is_sw, j, key), x) in &guess {
        if !*is_sw {
            multilinear::add_term(&mut a_v.images[*j], key.clone(), x);
        }
    }
    for (idx, x) in &sol {
        let (is_sw, j, key) = &unknowns[*idx];
        if *is_sw {
            multilinear::add_term(&mut h.images[*j], key.clone(), &(&sk * x));
        } else {
            multilinear::add_term(&mut a_v.images[*j], key.clone(), x);
        }
    }
    let structure = v.glue(w.presentation.cells[1].clone(), a_v)?;
    Ok(Lift { structure, homotopy: h })
}

/// Checks the two triangles of a lift exactly.
pub fn check_lift(w: &QuasiFreeCoalgebra, f: &LinearMap, v: &QuasiFreeCoalgebra, lift: &Lift) -> LiftChecks {
    let restricted = lift.structure.restrict_last();
    let restriction_strict = restricted == *v;
    let da_v = &lift.structure.generators[1];
    let lhs = push_forward(f, &w.generators[1]).add(&-w.carrier.field.one(), &pull_back(f, da_v));
    let dh = homotopy_boundary(&w.carrier, &v.carrier, &lift.homotopy);
    LiftChecks { restriction_strict, homotopy_identity: lhs == dh }
}

/// ∂H = d_{V^⊗p} H − (−1)^{|H|} H d_W for H: W → V^⊗p.
pub fn homotopy_boundary(w: &ChainComplex, v: &ChainComplex, h: &Cooperation) -> Cooperation {
    let sg = -koszul(w.field, h.degree);
    let images = (0..w.dim())
        .map(|b| {
            let mut t = multilinear::d_tensor(v, &h.images[b]);
            multilinear::add_tensor(&mut t, &sg, &h.apply(&w.d.cols[b]));
            t
        })
        .collect();
    Cooperation { arity: h.arity, degree: h.degree - 1, images }
}

/// Number of cooperations Δ of the given arity and degree with ∂Δ = target,
/// over a finite field: 0 or q^{dim of the cycles}.
pub fn count_null_homotopies(c: &ChainComplex, target: &Cooperation) -> Option<u128> {
    let q = c.field.characteristic();
    if q == 0 {
        return None;
    }
    let (n, degree) = (target.arity, target.degree + 1);
    let slots: Vec<(usize, Vec<usize>)> = (0..c.dim())
        .flat_map(|b| multilinear::keys_of_degree(&c.space, n, c.space.degree(b) + degree).into_iter().map(move |k| (b, k)))
        .collect();
    let mut rows: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
    let mut row = |b: usize, k: &Vec<usize>| {
        let l = rows.len();
        *rows.entry((b, k.clone())).or_insert(l)
    };
    let mut cols = vec![];
    for (b, key) in &slots {
        let mut d = Cooperation::zero(c, n, degree);
        multilinear::add_term(&mut d.images[*b], key.clone(), &c.field.one());
        let db = d.boundary(c);
        let mut col = Vector::new();
        for (b2, t) in db.images.iter().enumerate() {
            for (k2, x) in t {
                linalg::add_entry(&mut col, row(b2, k2), x);
            }
        }
        cols.push(col);
    }
    let mut rhs = Vector::new();
    for (b2, t) in target.images.iter().enumerate() {
        for (k2, x) in t {
            linalg::add_entry(&mut rhs, row(b2, k2), x);
        }
    }
    linalg::solve(c.field, &cols, &rhs)?;
    let z = slots.len() - linalg::rank(c.field, &cols);
    Some((q as u128).pow(z as u32))
}

/// All cooperations C → C^⊗n of a degree with entries drawn from a finite field.
pub fn enumerate_cooperations(c: &ChainComplex, n: usize, degree: i64) -> Vec<Cooperation> {
    let field = c.field;
    let slots: Vec<(usize, Vec<usize>)> = (0..c.dim())
        .flat_map(|b| multilinear::keys_of_degree(&c.space, n, c.space.degree(b) + degree).into_iter().map(move |k| (b, k)))
        .collect();
    let elems = field.elements();
    let mut out = vec![Cooperation::zero(c, n, degree)];
    for (b, key) in slots {
        let mut next = vec![];
        for d in &out {
            for x in &elems {
                let mut d2 = d.clone();
                multilinear::add_term(&mut d2.images[b], key.clone(), x);
                next.push(d2);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::GradedSpace;
    use crate::scalar::Field;
    use crate::tree::NamedTree;

    fn dual_truncated_polynomial() -> AInftyCoalgebra {
        let f = Field::f2();
        let s = GradedSpace::from_pairs([(1, "x1".into()), (2, "x2".into())]).unwrap();
        let c = ChainComplex::zero_differential(f, s);
        let mut d2 = Cooperation::zero(&c, 2, 0);
        d2.images[1].insert(vec![0, 0], f.one());
        AInftyCoalgebra::new(c, vec![d2])
    }

    #[test]
    fn ainfty_dual_passes_and_agrees_with_operad() {
        let a = dual_truncated_polynomial();
        assert!(verify_ainfty(&a, 4).passed());
        let q = a.as_quasi_free(4).unwrap();
        let op = q.presentation.realize(4, None).unwrap();
        let pc = q.to_pcoalgebra(&op);
        assert!(verify_pcoalgebra(&op, &pc, &AxiomConfig::exhaustive()).passed());
    }

    #[test]
    fn injected_term_fails() {
        let f = Field::f2();
        let a = dual_truncated_polynomial();
        let mut d2 = a.delta(2);
        d2.images[0].insert(vec![1, 1], f.one());
        let bad = AInftyCoalgebra::new(a.carrier.clone(), vec![d2]);
        let r = verify_ainfty(&bad, 4);
        assert!(!r.passed());
        assert!(r.first_failure().unwrap().witness.is_some());
    }

    #[test]
    fn gluing_over_the_unit() {
        let f = Field::f2();
        let c = ChainComplex::unit(f);
        let base = QuasiFreeCoalgebra::new(Presentation::empty(f), c.clone(), vec![]).unwrap();
        let cell = Cell { name: "m".into(), arity: 2, degree: 0, boundary: vec![] };
        let n = enumerate_cooperations(&c, 2, 0).into_iter().filter(|d| base.glue(cell.clone(), d.clone()).is_ok()).count();
        assert_eq!(n, 2);
    }

    #[test]
    fn coassociative_tower_admits_zero() {
        let f = Field::Rational;
        let c = ChainComplex::unit(f);
        let mut d2 = Cooperation::zero(&c, 2, 0);
        d2.images[0].insert(vec![0, 0], f.one());
        let p = tree::ainfty_presentation(f, 2);
        let q = QuasiFreeCoalgebra::new(p, c.clone(), vec![d2]).unwrap();
        let cell = tree::ainfty_presentation(f, 3).cells[1].clone();
        let g = q.glue(cell.clone(), Cooperation::zero(&c, 3, 1)).unwrap();
        assert_eq!(g.restrict_last(), q);
        let bad = Cell { boundary: vec![(f.one(), NamedTree::corolla("D2", 2).clone())], arity: 2, degree: 1, name: "y".into() };
        assert!(q.glue(bad, Cooperation::zero(&c, 2, 1)).is_err());
    }

    #[test]
    fn lift_along_identity_is_trivial() {
        let f = Field::f2();
        let s = GradedSpace::from_pairs([(0, "u".into()), (1, "v".into())]).unwrap();
        let c = ChainComplex::zero_differential(f, s);
        let pres = tree::disk_presentation(f, 2, 1);
        let mut da = Cooperation::zero(&c, 2, 1);
        da.images[0].insert(vec![0, 1], f.one());
        let db = da.boundary(&c);
        let w = QuasiFreeCoalgebra::new(pres.clone(), c.clone(), vec![db.clone(), da.clone()]).unwrap();
        let v = w.restrict_last();
        let id = complex::identity_map(&c);
        let l = lift_cell_structure(&w, &id, &v).unwrap();
        assert_eq!(l.structure, w);
        assert!(l.homotopy.is_zero());
        let chk = check_lift(&w, &id, &v, &l);
        assert!(chk.restriction_strict && chk.homotopy_identity);
    }
}
