//! The representation functor for free algebras: generic matrices on
//! Rep^A_n, trace functions, the map from noncommutative forms to
//! commutative forms on the representation scheme, induced vector
//! fields, double derivations and Jacobi matrices with their chain rule,
//! plus the commutative polyvector calculus (Schouten bracket, Poisson
//! brackets from bivectors) on the target side.
//!
//! Coordinates on Rep^A_n follow the fixed naming scheme x_{g,i,j}
//! (generator g, row i, column j), flattened g*n*n + i*n + j.

use crate::error::NcalcError;
use crate::forms::NCForm;
use crate::multipoly::{Mono, MultiPoly};
use crate::scalar::{DualScalar, Rational, Scalar};
use crate::word::{FreePoly, Word};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// A commutative polynomial on a representation scheme.
pub type ComPoly = MultiPoly<Rational>;

/// The variable universe of Rep^A_n for an r-generator free algebra.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RepVars {
    pub generators: usize,
    pub n: usize,
}

impl RepVars {
    pub fn new(generators: usize, n: usize) -> Result<Self, NcalcError> {
        if n == 0 {
            return Err(NcalcError::InvalidInput(
                "representation dimension must be positive".into(),
            ));
        }
        Ok(RepVars { generators, n })
    }

    pub fn nvars(&self) -> usize {
        self.generators * self.n * self.n
    }

    /// Index of x_{g,i,j} (0-based g, i, j).
    pub fn idx(&self, g: usize, i: usize, j: usize) -> usize {
        (g * self.n + i) * self.n + j
    }

    /// Deterministic names x{g}_{i}{j}, 1-based.
    pub fn names(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.nvars());
        for g in 0..self.generators {
            for i in 0..self.n {
                for j in 0..self.n {
                    out.push(format!("x{}_{}{}", g + 1, i + 1, j + 1));
                }
            }
        }
        out
    }
}

/// A square matrix of commutative polynomials.
#[derive(Clone, PartialEq, Debug)]
pub struct SymbolicMatrix<C: Scalar = Rational> {
    pub n: usize,
    pub nvars: usize,
    pub entries: Vec<MultiPoly<C>>,
}

impl<C: Scalar> SymbolicMatrix<C> {
    pub fn zero(n: usize, nvars: usize) -> Self {
        SymbolicMatrix {
            n,
            nvars,
            entries: vec![MultiPoly::zero(nvars); n * n],
        }
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        let mut m = SymbolicMatrix::zero(n, nvars);
        for i in 0..n {
            m.entries[i * n + i] = MultiPoly::one(nvars);
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &MultiPoly<C> {
        &self.entries[i * self.n + j]
    }

    pub fn mul(&self, other: &Self) -> Result<Self, NcalcError> {
        if self.n != other.n || self.nvars != other.nvars {
            return Err(NcalcError::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let n = self.n;
        let mut out = SymbolicMatrix::zero(n, self.nvars);
        for i in 0..n {
            for j in 0..n {
                let mut e = MultiPoly::zero(self.nvars);
                for k in 0..n {
                    e = e.add(&self.get(i, k).mul(other.get(k, j))?)?;
                }
                out.entries[i * n + j] = e;
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, NcalcError> {
        if self.n != other.n || self.nvars != other.nvars {
            return Err(NcalcError::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let mut out = self.clone();
        for (e, o) in out.entries.iter_mut().zip(&other.entries) {
            *e = e.add(o)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        SymbolicMatrix {
            n: self.n,
            nvars: self.nvars,
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    pub fn trace(&self) -> MultiPoly<C> {
        let mut t = MultiPoly::zero(self.nvars);
        for i in 0..self.n {
            t = t.add(self.get(i, i)).expect("same universe");
        }
        t
    }
}

/// The generic matrix of generator g inside a universe of `nvars`
/// variables, with the x-block starting at `offset`.
fn generic_matrix<C: Scalar>(g: usize, n: usize, nvars: usize, offset: usize) -> SymbolicMatrix<C> {
    let mut m = SymbolicMatrix::zero(n, nvars);
    for i in 0..n {
        for j in 0..n {
            let mut mono = vec![0u32; nvars];
            mono[offset + (g * n + i) * n + j] = 1;
            let mut e = MultiPoly::zero(nvars);
            e.add_term(mono, C::one());
            m.entries[i * n + j] = e;
        }
    }
    m
}

/// Evaluates a free polynomial on given generator matrices.
fn eval_on_matrices<C: Scalar>(
    a: &FreePoly,
    mats: &[SymbolicMatrix<C>],
    n: usize,
    nvars: usize,
) -> Result<SymbolicMatrix<C>, NcalcError> {
    let mut out = SymbolicMatrix::zero(n, nvars);
    for (w, c) in &a.terms {
        let mut m = SymbolicMatrix::identity(n, nvars);
        for &l in &w.0 {
            m = m.mul(&mats[l])?;
        }
        out = out.add(&m.scale(&C::from_rational(c.clone())))?;
    }
    Ok(out)
}

/// The canonical algebra map a -> a-hat: substitute the generic matrix
/// X_g = (x_{g,i,j}) for each generator.
pub fn rep_evaluate(a: &FreePoly, n: usize) -> Result<SymbolicMatrix, NcalcError> {
    let vars = RepVars::new(a.generator_count, n)?;
    let mats: Vec<SymbolicMatrix> = (0..vars.generators)
        .map(|g| generic_matrix(g, n, vars.nvars(), 0))
        .collect();
    eval_on_matrices(a, &mats, n, vars.nvars())
}

/// tr(a-hat), a GL-invariant function on Rep^A_n.
pub fn trace_function(a: &FreePoly, n: usize) -> Result<ComPoly, NcalcError> {
    Ok(rep_evaluate(a, n)?.trace())
}

// ---- exterior calculus on the representation scheme ------------------------

/// An element of the exterior algebra over ComPoly: terms are keyed by
/// (monomial, strictly increasing variable subset).  Serves both as a
/// commutative differential form (subset = wedge of dv's) and as a
/// polyvector field (subset = wedge of d/dv's).
#[derive(Clone, PartialEq, Debug)]
pub struct ExtElem {
    pub nvars: usize,
    pub degree: usize,
    pub terms: BTreeMap<(Mono, Vec<usize>), Rational>,
}

/// A commutative differential form on Rep^A_n.
pub type ComForm = ExtElem;

/// A polyvector field: antisymmetric combination of derivative symbols
/// with polynomial coefficients.
pub type PolyVector = ExtElem;

/// Merges two strictly increasing index lists into one, tracking the
/// Koszul sign; `None` on a repeated index.
fn merge_wedge(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, Rational)> {
    let mut all: Vec<usize> = a.to_vec();
    all.extend_from_slice(b);
    sort_wedge(&all)
}

/// Sorts an index list, tracking the sign; `None` on a repeat.
fn sort_wedge(list: &[usize]) -> Option<(Vec<usize>, Rational)> {
    let mut v = list.to_vec();
    let mut swaps = 0usize;
    for i in 0..v.len() {
        for j in (i + 1..v.len()).rev() {
            if v[j - 1] > v[j] {
                v.swap(j - 1, j);
                swaps += 1;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((
        v,
        if swaps % 2 == 0 {
            Rational::one()
        } else {
            -Rational::one()
        },
    ))
}

impl ExtElem {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        ExtElem {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_poly(p: &ComPoly) -> Self {
        let mut e = ExtElem::zero(p.nvars, 0);
        for (m, c) in &p.terms {
            e.add_term((m.clone(), Vec::new()), c.clone());
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: (Mono, Vec<usize>), c: Rational) {
        debug_assert_eq!(key.1.len(), self.degree);
        debug_assert!(key.1.windows(2).all(|w| w[0] < w[1]));
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&key) {
            None => {
                self.terms.insert(key, c);
            }
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(key, s);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, NcalcError> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, NcalcError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        ExtElem {
            nvars: self.nvars,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = ExtElem::zero(self.nvars, self.degree);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, NcalcError> {
        if self.nvars != other.nvars {
            return Err(NcalcError::DimensionMismatch {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        let mut out = ExtElem::zero(self.nvars, self.degree + other.degree);
        for ((m1, s1), c1) in &self.terms {
            for ((m2, s2), c2) in &other.terms {
                if let Some((s, sign)) = merge_wedge(s1, s2) {
                    let m: Mono = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                    out.add_term((m, s), c1 * c2 * &sign);
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative (for the differential-form reading).
    pub fn d(&self) -> Self {
        let mut out = ExtElem::zero(self.nvars, self.degree + 1);
        for ((m, s), c) in &self.terms {
            for v in 0..self.nvars {
                let e = m[v];
                if e == 0 || s.contains(&v) {
                    continue;
                }
                let mut m2 = m.clone();
                m2[v] = e - 1;
                // dv goes to the front of the subset, then into place
                let pos = s.iter().take_while(|&&w| w < v).count();
                let sign = if pos % 2 == 0 {
                    Rational::one()
                } else {
                    -Rational::one()
                };
                let mut s2 = s.clone();
                s2.insert(pos, v);
                out.add_term((m2, s2), c * crate::scalar::rat(e as i64) * sign);
            }
        }
        out
    }

    fn check(&self, other: &Self) -> Result<(), NcalcError> {
        if self.nvars != other.nvars || self.degree != other.degree {
            return Err(NcalcError::DimensionMismatch {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        Ok(())
    }

    pub fn display(&self, names: &[String], symbol: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((m, s), c)| {
                let mut p = crate::multipoly::mono_string(m, names);
                if p == "1" {
                    p = crate::scalar::rat_string(c);
                } else if !c.is_one() {
                    p = format!("{}*{}", crate::scalar::rat_string(c), p);
                }
                for v in s {
                    p.push_str(&format!(" {}({})", symbol, names[*v]));
                }
                p
            })
            .collect();
        parts.join(" + ")
    }
}

/// A square matrix of exterior elements (used for d of a generic word
/// matrix inside form_to_rep).
struct FormMatrix {
    n: usize,
    entries: Vec<ExtElem>,
}

impl FormMatrix {
    fn from_symbolic(m: &SymbolicMatrix) -> Self {
        FormMatrix {
            n: m.n,
            entries: m.entries.iter().map(ExtElem::from_poly).collect(),
        }
    }

    fn d(&self) -> Self {
        FormMatrix {
            n: self.n,
            entries: self.entries.iter().map(|e| e.d()).collect(),
        }
    }

    fn mul(&self, other: &Self) -> Result<Self, NcalcError> {
        let n = self.n;
        let nvars = self.entries[0].nvars;
        let deg = self.entries[0].degree + other.entries[0].degree;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut e = ExtElem::zero(nvars, deg);
                for k in 0..n {
                    e = e.add(&self.entries[i * n + k].wedge(&other.entries[k * n + j])?)?;
                }
                out.push(e);
            }
        }
        Ok(FormMatrix { n, entries: out })
    }

    fn trace(&self) -> ExtElem {
        let mut t = ExtElem::zero(self.entries[0].nvars, self.entries[0].degree);
        for i in 0..self.n {
            t = t.add(&self.entries[i * self.n + i]).expect("same layout");
        }
        t
    }
}

/// Maps a noncommutative form over a free algebra to the commutative
/// form tr(a0-hat d(a1-hat) .. d(ak-hat)) on Rep^A_n.  Well defined on
/// DR classes because the trace is symmetric.
pub fn form_to_rep(form: &NCForm, n: usize) -> Result<ComForm, NcalcError> {
    let g = match form.algebra.as_ref() {
        crate::based::BasedAlgebra::Free { generator_count } => *generator_count,
        crate::based::BasedAlgebra::FinDim(_) => {
            return Err(NcalcError::InvalidInput(
                "form_to_rep needs a free-algebra form".into(),
            ))
        }
    };
    let vars = RepVars::new(g, n)?;
    let nvars = vars.nvars();
    let mut out = ExtElem::zero(nvars, form.degree);
    for (key, c) in &form.terms {
        let words: Vec<Word> = key
            .iter()
            .map(|a| match a {
                crate::based::Atom::W(w) => Ok(w.clone()),
                _ => Err(NcalcError::AlgebraMismatch),
            })
            .collect::<Result<_, _>>()?;
        let poly0 = FreePoly::from_word(words[0].clone(), g);
        let mut acc = FormMatrix::from_symbolic(&rep_evaluate(&poly0, n)?);
        for w in &words[1..] {
            let p = FreePoly::from_word(w.clone(), g);
            let hat = FormMatrix::from_symbolic(&rep_evaluate(&p, n)?);
            acc = acc.mul(&hat.d())?;
        }
        out = out.add(&acc.trace().scale(c))?;
    }
    Ok(out)
}

/// The vector field on Rep^A_n induced by a derivation of the free
/// algebra: sum_{g,i,j} (theta(x_g)-hat)_{ij} d/dx_{g,i,j}.
pub fn derivation_to_vector_field(
    theta: &crate::forms::DerivationSpec,
    n: usize,
) -> Result<PolyVector, NcalcError> {
    let images = match theta {
        crate::forms::DerivationSpec::Free { images } => images,
        _ => {
            return Err(NcalcError::InvalidInput(
                "vector fields are induced from free-algebra derivations".into(),
            ))
        }
    };
    let r = images.len();
    let vars = RepVars::new(r, n)?;
    let nvars = vars.nvars();
    let mut out = ExtElem::zero(nvars, 1);
    for g in 0..r {
        let m = rep_evaluate(&images[g], n)?;
        for i in 0..n {
            for j in 0..n {
                for (mono, c) in &m.get(i, j).terms {
                    out.add_term((mono.clone(), vec![vars.idx(g, i, j)]), c.clone());
                }
            }
        }
    }
    Ok(out)
}

/// Applies a degree-1 polyvector (a vector field) to a function.
pub fn apply_vector_field(v: &PolyVector, f: &ComPoly) -> Result<ComPoly, NcalcError> {
    if v.degree != 1 {
        return Err(NcalcError::DegreeError {
            degree: v.degree,
            reason: "vector field application needs degree 1".into(),
        });
    }
    if v.nvars != f.nvars {
        return Err(NcalcError::DimensionMismatch {
            expected: v.nvars,
            got: f.nvars,
        });
    }
    let mut out = MultiPoly::zero(f.nvars);
    for ((m, s), c) in &v.terms {
        let mut coeff = MultiPoly::zero(f.nvars);
        coeff.add_term(m.clone(), c.clone());
        out = out.add(&coeff.mul(&f.derivative(s[0]))?)?;
    }
    Ok(out)
}

/// Schouten bracket of polyvector fields, degree (p, q) -> p + q - 1:
/// the signed double sum over bracketing one field of each factor,
/// extended bilinearly by attaching each coefficient to the first slot
/// of its wedge.
pub fn schouten_bracket(p: &PolyVector, q: &PolyVector) -> Result<PolyVector, NcalcError> {
    if p.nvars != q.nvars {
        return Err(NcalcError::DimensionMismatch {
            expected: p.nvars,
            got: q.nvars,
        });
    }
    if p.degree == 0 || q.degree == 0 {
        return Err(NcalcError::DegreeError {
            degree: 0,
            reason: "Schouten bracket needs positive degrees".into(),
        });
    }
    let nvars = p.nvars;
    let deg = p.degree + q.degree - 1;
    let mut out = ExtElem::zero(nvars, deg);
    let one_mono = vec![0u32; nvars];
    for ((mp, sp), cp) in &p.terms {
        for ((mq, sq), cq) in &q.terms {
            for i in 0..sp.len() {
                for j in 0..sq.len() {
                    // xi_i = f d/da with f = mono (i == 0) or 1
                    let (f, a) = if i == 0 { (mp, sp[0]) } else { (&one_mono, sp[i]) };
                    let (g, b) = if j == 0 { (mq, sq[0]) } else { (&one_mono, sq[j]) };
                    // [f d/da, g d/db] = f (dg/da) d/db - g (df/db) d/da
                    let mut fpoly = MultiPoly::zero(nvars);
                    fpoly.add_term(f.clone(), Rational::one());
                    let mut gpoly = MultiPoly::zero(nvars);
                    gpoly.add_term(g.clone(), Rational::one());
                    let pieces = [
                        (fpoly.mul(&gpoly.derivative(a))?, b),
                        (gpoly.mul(&fpoly.derivative(b))?.neg(), a),
                    ];
                    let sign0 = if (i + j) % 2 == 0 {
                        Rational::one()
                    } else {
                        -Rational::one()
                    };
                    let mut rest: Vec<usize> = Vec::with_capacity(deg.saturating_sub(1));
                    rest.extend(sp.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, v)| *v));
                    rest.extend(sq.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| *v));
                    // coefficients of the untouched first factors stay in the wedge
                    let mut residual = vec![0u32; nvars];
                    if i != 0 {
                        for (v, e) in residual.iter_mut().zip(mp) {
                            *v += e;
                        }
                    }
                    if j != 0 {
                        for (v, e) in residual.iter_mut().zip(mq) {
                            *v += e;
                        }
                    }
                    for (coeff, v) in pieces {
                        if coeff.is_zero() {
                            continue;
                        }
                        let mut full = vec![v];
                        full.extend_from_slice(&rest);
                        if let Some((sorted, wsign)) = sort_wedge(&full) {
                            for (m, c) in &coeff.terms {
                                let mono: Mono =
                                    m.iter().zip(&residual).map(|(a, b)| a + b).collect();
                                out.add_term(
                                    (mono, sorted.clone()),
                                    c * cp * cq * &sign0 * &wsign,
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The Poisson bracket {f, g} = <df wedge dg, pi> of a bivector.
pub fn poisson_from_bivector(
    pi: &PolyVector,
    f: &ComPoly,
    g: &ComPoly,
) -> Result<ComPoly, NcalcError> {
    if pi.degree != 2 {
        return Err(NcalcError::DegreeError {
            degree: pi.degree,
            reason: "Poisson brackets come from bivectors".into(),
        });
    }
    if pi.nvars != f.nvars || f.nvars != g.nvars {
        return Err(NcalcError::DimensionMismatch {
            expected: pi.nvars,
            got: f.nvars,
        });
    }
    let mut out = MultiPoly::zero(f.nvars);
    for ((m, s), c) in &pi.terms {
        let (a, b) = (s[0], s[1]);
        let mut coeff = MultiPoly::zero(f.nvars);
        coeff.add_term(m.clone(), c.clone());
        let pairing = f
            .derivative(a)
            .mul(&g.derivative(b))?
            .sub(&f.derivative(b).mul(&g.derivative(a))?)?;
        out = out.add(&coeff.mul(&pairing)?)?;
    }
    Ok(out)
}

/// Jacobi defect {f,{g,h}} + {g,{h,f}} + {h,{f,g}} of the bracket of a
/// bivector; vanishes together with [pi, pi].
pub fn poisson_jacobi_defect(
    pi: &PolyVector,
    f: &ComPoly,
    g: &ComPoly,
    h: &ComPoly,
) -> Result<ComPoly, NcalcError> {
    let br = |a: &ComPoly, b: &ComPoly| poisson_from_bivector(pi, a, b);
    br(f, &br(g, h)?)?
        .add(&br(g, &br(h, f)?)?)?
        .add(&br(h, &br(f, g)?)?)
}

// ---- double derivations and Jacobi matrices --------------------------------

/// An element of A (x) A for the free algebra, keyed by word pairs.
#[derive(Clone, PartialEq, Debug)]
pub struct DoubleDerivationValue {
    pub generator_count: usize,
    pub terms: BTreeMap<(Word, Word), Rational>,
}

impl DoubleDerivationValue {
    pub fn zero(generator_count: usize) -> Self {
        DoubleDerivationValue {
            generator_count,
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(generator_count: usize) -> Self {
        let mut v = DoubleDerivationValue::zero(generator_count);
        v.add_term(Word::empty(), Word::empty(), Rational::one());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, u: Word, v: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = (u, v);
        match self.terms.remove(&key) {
            None => {
                self.terms.insert(key, c);
            }
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(key, s);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, NcalcError> {
        self.check(other)?;
        let mut out = self.clone();
        for ((u, v), c) in &other.terms {
            out.add_term(u.clone(), v.clone(), c.clone());
        }
        Ok(out)
    }

    fn check(&self, other: &Self) -> Result<(), NcalcError> {
        if self.generator_count != other.generator_count {
            return Err(NcalcError::GeneratorCountMismatch {
                left: self.generator_count,
                right: other.generator_count,
            });
        }
        Ok(())
    }

    /// Sandwich product (u (x) v) . (s (x) t) = us (x) tv, the
    /// composition law of double-derivation values.
    pub fn sandwich(&self, other: &Self) -> Result<Self, NcalcError> {
        self.check(other)?;
        let mut out = DoubleDerivationValue::zero(self.generator_count);
        for ((u, v), c1) in &self.terms {
            for ((s, t), c2) in &other.terms {
                out.add_term(u.concat(s), t.concat(v), c1 * c2);
            }
        }
        Ok(out)
    }

    /// Substitutes generator images into both tensor slots.
    pub fn substitute(&self, images: &[FreePoly]) -> Result<Self, NcalcError> {
        let g = self.generator_count;
        if images.len() != g {
            return Err(NcalcError::GeneratorCountMismatch {
                left: g,
                right: images.len(),
            });
        }
        let mut out = DoubleDerivationValue::zero(g);
        for ((u, v), c) in &self.terms {
            let us = substitute_word(u, images)?;
            let vs = substitute_word(v, images)?;
            for (wu, cu) in &us.terms {
                for (wv, cv) in &vs.terms {
                    out.add_term(wu.clone(), wv.clone(), c * cu * cv);
                }
            }
        }
        Ok(out)
    }
}

fn substitute_word(w: &Word, images: &[FreePoly]) -> Result<FreePoly, NcalcError> {
    let g = images.len();
    let mut out = FreePoly::one(g);
    for &l in &w.0 {
        out = out.mul(&images[l])?;
    }
    Ok(out)
}

/// Substitutes generator images into a free polynomial (endomorphism
/// application).
pub fn substitute(p: &FreePoly, images: &[FreePoly]) -> Result<FreePoly, NcalcError> {
    if images.len() != p.generator_count {
        return Err(NcalcError::GeneratorCountMismatch {
            left: p.generator_count,
            right: images.len(),
        });
    }
    let mut out = FreePoly::zero(images.len());
    for (w, c) in &p.terms {
        out = out.add(&substitute_word(w, images)?.scale(c))?;
    }
    Ok(out)
}

/// The double derivation D_i: D_i(x_i) = 1 (x) 1, zero on the other
/// generators, extended by the outer-bimodule Leibniz rule; on a word it
/// splits at every occurrence of x_i.
pub fn double_derivation(i: usize, a: &FreePoly) -> Result<DoubleDerivationValue, NcalcError> {
    let g = a.generator_count;
    if i >= g {
        return Err(NcalcError::IndexOutOfRange { index: i, bound: g });
    }
    let mut out = DoubleDerivationValue::zero(g);
    for (w, c) in &a.terms {
        for (pos, &l) in w.0.iter().enumerate() {
            if l == i {
                out.add_term(Word(w.0[..pos].to_vec()), Word(w.0[pos + 1..].to_vec()), c.clone());
            }
        }
    }
    Ok(out)
}

/// Jacobi matrix DF = || D_i(F_j) || of an endomorphism given by its
/// generator images.
pub fn jacobi_matrix(images: &[FreePoly]) -> Result<Vec<Vec<DoubleDerivationValue>>, NcalcError> {
    let r = images.len();
    let mut out = Vec::with_capacity(r);
    for i in 0..r {
        let mut row = Vec::with_capacity(r);
        for im in images {
            if im.generator_count != r {
                return Err(NcalcError::GeneratorCountMismatch {
                    left: r,
                    right: im.generator_count,
                });
            }
            row.push(double_derivation(i, im)?);
        }
        out.push(row);
    }
    Ok(out)
}

/// Chain-rule composition of Jacobi matrices:
/// |DG o DF|_{k,l} = sum_i (D_i G_l)(F) . D_k(F_i) with the sandwich
/// product, so that D(G o F) = DG o DF.
pub fn jacobi_compose(
    dg: &[Vec<DoubleDerivationValue>],
    df: &[Vec<DoubleDerivationValue>],
    f_images: &[FreePoly],
) -> Result<Vec<Vec<DoubleDerivationValue>>, NcalcError> {
    let r = f_images.len();
    let g = r;
    let mut out = Vec::with_capacity(r);
    for k in 0..r {
        let mut row = Vec::with_capacity(r);
        for l in 0..r {
            let mut acc = DoubleDerivationValue::zero(g);
            for i in 0..r {
                acc = acc.add(&dg[i][l].substitute(f_images)?.sandwich(&df[k][i])?)?;
            }
            row.push(acc);
        }
        out.push(row);
    }
    Ok(out)
}

/// Report of the differential check d_rho(F-hat) = (DF)_rho.
#[derive(Clone, Debug)]
pub struct JacobiDifferentialReport {
    pub n: usize,
    pub generators: usize,
    pub agrees: bool,
}

/// Compares the dual-number differential of the polynomial self-map
/// F-hat at the generic point against the Jacobi-matrix action
/// Z_i -> sum_j rho(D'_i F_j) Z_i rho(D''_i F_j) (output slot j collects
/// the D_i(F_j) sandwiches of all Z_i).  Exact symbolic equality.
pub fn jacobi_differential_check(
    images: &[FreePoly],
    n: usize,
) -> Result<JacobiDifferentialReport, NcalcError> {
    let r = images.len();
    RepVars::new(r.max(1), n)?;
    let block = r * n * n;
    let nvars = 2 * block; // x-block then z-block
    // dual-number generic matrices X_g + eps Z_g
    let dual_mats: Vec<SymbolicMatrix<DualScalar>> = (0..r)
        .map(|g| {
            let x: SymbolicMatrix<DualScalar> = generic_matrix(g, n, nvars, 0);
            let z: SymbolicMatrix<DualScalar> = generic_matrix(g, n, nvars, block);
            x.add(&z.scale(&DualScalar::epsilon())).expect("same layout")
        })
        .collect();
    // plain generic matrices over the same universe
    let x_mats: Vec<SymbolicMatrix> = (0..r).map(|g| generic_matrix(g, n, nvars, 0)).collect();
    let z_mats: Vec<SymbolicMatrix> = (0..r)
        .map(|g| generic_matrix(g, n, nvars, block))
        .collect();
    let mut agrees = true;
    for fj in images {
        let dual = eval_on_matrices(fj, &dual_mats, n, nvars)?;
        // eps part of each entry
        let mut lhs = SymbolicMatrix::zero(n, nvars);
        for (e, de) in lhs.entries.iter_mut().zip(&dual.entries) {
            for (m, c) in &de.terms {
                e.add_term(m.clone(), c.epsilon_part.clone());
            }
        }
        // rhs: sum_i sum rho(D'_i F_j) Z_i rho(D''_i F_j)
        let mut rhs = SymbolicMatrix::zero(n, nvars);
        for (i, zi) in z_mats.iter().enumerate() {
            let dd = double_derivation(i, fj)?;
            for ((u, v), c) in &dd.terms {
                let mu = eval_on_matrices(&FreePoly::from_word(u.clone(), r), &x_mats, n, nvars)?;
                let mv = eval_on_matrices(&FreePoly::from_word(v.clone(), r), &x_mats, n, nvars)?;
                rhs = rhs.add(&mu.mul(zi)?.mul(&mv)?.scale(c))?;
            }
        }
        if lhs != rhs {
            agrees = false;
        }
    }
    Ok(JacobiDifferentialReport {
        n,
        generators: r,
        agrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::DerivationSpec;
    use crate::scalar::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn x(g: usize) -> FreePoly {
        FreePoly::gen(0, g)
    }

    fn y(g: usize) -> FreePoly {
        FreePoly::gen(1, g)
    }

    fn rand_free(rng: &mut ChaCha8Rng, g: usize, max_len: usize, terms: usize) -> FreePoly {
        let mut p = FreePoly::zero(g);
        for _ in 0..terms {
            let len = rng.gen_range(0..=max_len);
            let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..g)).collect();
            p.add_term(Word(w), rat(rng.gen_range(-2..=2)));
        }
        p
    }

    #[test]
    fn rep_is_a_unital_algebra_map() {
        // a = x, n = 2: the generic matrix
        let m = rep_evaluate(&x(2), 2).unwrap();
        let vars = RepVars::new(2, 2).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let mut expect = MultiPoly::zero(8);
                let mut mono = vec![0u32; 8];
                mono[vars.idx(0, i, j)] = 1;
                expect.add_term(mono, rat(1));
                assert_eq!(*m.get(i, j), expect);
            }
        }
        // a = 1: identity
        let one = rep_evaluate(&FreePoly::one(2), 2).unwrap();
        assert_eq!(one, SymbolicMatrix::identity(2, 8));
        // multiplicativity on random polynomials
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..4 {
            let a = rand_free(&mut rng, 2, 3, 3);
            let b = rand_free(&mut rng, 2, 3, 3);
            let lhs = rep_evaluate(&a.mul(&b).unwrap(), 2).unwrap();
            let rhs = rep_evaluate(&a, 2)
                .unwrap()
                .mul(&rep_evaluate(&b, 2).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
        assert!(rep_evaluate(&x(2), 0).is_err());
    }

    #[test]
    fn traces() {
        let vars = RepVars::new(2, 2).unwrap();
        // tr(x-hat) = x1_11 + x1_22
        let t = trace_function(&x(2), 2).unwrap();
        let mut expect = MultiPoly::zero(8);
        for i in 0..2 {
            let mut m = vec![0u32; 8];
            m[vars.idx(0, i, i)] = 1;
            expect.add_term(m, rat(1));
        }
        assert_eq!(t, expect);
        // commutators die
        let comm = x(2).mul(&y(2)).unwrap().sub(&y(2).mul(&x(2)).unwrap()).unwrap();
        assert!(trace_function(&comm, 2).unwrap().is_zero());
        // tr(x-hat^2) = x11^2 + 2 x12 x21 + x22^2
        let t = trace_function(&x(2).mul(&x(2)).unwrap(), 2).unwrap();
        let mut expect = MultiPoly::zero(8);
        let e = |pairs: &[(usize, usize, u32)]| {
            let mut m = vec![0u32; 8];
            for &(i, j, k) in pairs {
                m[vars.idx(0, i, j)] += k;
            }
            m
        };
        expect.add_term(e(&[(0, 0, 2)]), rat(1));
        expect.add_term(e(&[(0, 1, 1), (1, 0, 1)]), rat(2));
        expect.add_term(e(&[(1, 1, 2)]), rat(1));
        assert_eq!(t, expect);
        // cyclic invariance: trace factors through necklaces
        for w in [vec![0, 1, 1], vec![0, 0, 1, 1]] {
            let a = FreePoly::from_word(Word(w.clone()), 2);
            for k in 1..w.len() {
                let b = FreePoly::from_word(Word(w.clone()).rotate(k), 2);
                assert_eq!(
                    trace_function(&a, 2).unwrap(),
                    trace_function(&b, 2).unwrap()
                );
            }
        }
    }

    #[test]
    fn forms_to_rep() {
        use crate::based::{Atom, BasedAlgebra};
        use crate::forms::{de_rham_d, form_mul};
        use std::rc::Rc;
        let alg = Rc::new(BasedAlgebra::free(2));
        // x dy at n = 1: the commutative x dy in two variables
        let mut xdy = NCForm::zero(alg.clone(), 1);
        xdy.add_term(vec![Atom::W(Word(vec![0])), Atom::W(Word(vec![1]))], rat(1));
        let f = form_to_rep(&xdy, 1).unwrap();
        let mut expect = ExtElem::zero(2, 1);
        expect.add_term((vec![1, 0], vec![1]), rat(1));
        assert_eq!(f, expect);
        // supercommutators die under the trace
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let rand_form = |rng: &mut ChaCha8Rng, deg: usize| {
            let mut f = NCForm::zero(alg.clone(), deg);
            for _ in 0..2 {
                let key: Vec<Atom> = (0..deg + 1)
                    .map(|slot| {
                        let min = usize::from(slot > 0);
                        let len = rng.gen_range(min..=2);
                        Atom::W(Word((0..len).map(|_| rng.gen_range(0..2)).collect()))
                    })
                    .collect();
                f.add_term(key, rat(rng.gen_range(-2..=2)));
            }
            f
        };
        for _ in 0..3 {
            let omega = rand_form(&mut rng, 2);
            let mu = rand_form(&mut rng, 1);
            let nu = rand_form(&mut rng, 1);
            let comm = form_mul(&mu, &nu)
                .unwrap()
                .add(&form_mul(&nu, &mu).unwrap())
                .unwrap(); // odd-odd supercommutator
            let with = omega.add(&comm).unwrap();
            assert_eq!(form_to_rep(&omega, 2).unwrap(), form_to_rep(&with, 2).unwrap());
        }
        // d intertwining
        for _ in 0..3 {
            let omega = rand_form(&mut rng, 1);
            assert_eq!(
                form_to_rep(&de_rham_d(&omega), 2).unwrap(),
                form_to_rep(&omega, 2).unwrap().d()
            );
        }
    }

    #[test]
    fn induced_vector_fields() {
        // theta(x) = x^2, n = 1: the field x^2 d/dx
        let theta = DerivationSpec::free(vec![x(1).mul(&x(1)).unwrap()]).unwrap();
        let v = derivation_to_vector_field(&theta, 1).unwrap();
        let mut expect = ExtElem::zero(1, 1);
        expect.add_term((vec![2], vec![0]), rat(1));
        assert_eq!(v, expect);
        // inner derivations are tangent to conjugation: they kill traces
        let a = x(2).mul(&y(2)).unwrap();
        let ad = DerivationSpec::free(vec![
            a.commutator(&x(2)).unwrap(),
            a.commutator(&y(2)).unwrap(),
        ])
        .unwrap();
        let v = derivation_to_vector_field(&ad, 2).unwrap();
        for w in [vec![0], vec![1], vec![0, 1], vec![0, 0, 1], vec![1, 1, 0]] {
            let tr = trace_function(&FreePoly::from_word(Word(w.clone()), 2), 2).unwrap();
            assert!(
                apply_vector_field(&v, &tr).unwrap().is_zero(),
                "ad field moved tr of {:?}",
                w
            );
        }
        // Lie algebra homomorphism
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..3 {
            let th = DerivationSpec::free(vec![
                rand_free(&mut rng, 2, 2, 2),
                rand_free(&mut rng, 2, 2, 2),
            ])
            .unwrap();
            let de = DerivationSpec::free(vec![
                rand_free(&mut rng, 2, 2, 2),
                rand_free(&mut rng, 2, 2, 2),
            ])
            .unwrap();
            let lhs = schouten_bracket(
                &derivation_to_vector_field(&th, 2).unwrap(),
                &derivation_to_vector_field(&de, 2).unwrap(),
            )
            .unwrap();
            let alg = crate::based::BasedAlgebra::free(2);
            let rhs = derivation_to_vector_field(&th.bracket(&de, &alg).unwrap(), 2).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn double_derivations() {
        let g = 2;
        let dd = double_derivation(0, &x(g)).unwrap();
        assert_eq!(dd, DoubleDerivationValue::unit(g));
        assert!(double_derivation(0, &y(g)).unwrap().is_zero());
        let x2 = x(g).mul(&x(g)).unwrap();
        let dd = double_derivation(0, &x2).unwrap();
        let mut expect = DoubleDerivationValue::zero(g);
        expect.add_term(Word(vec![0]), Word::empty(), rat(1));
        expect.add_term(Word::empty(), Word(vec![0]), rat(1));
        assert_eq!(dd, expect);
        assert!(double_derivation(5, &x(g)).is_err());
    }

    #[test]
    fn chain_rule() {
        // identity endomorphism
        let id = vec![x(2), y(2)];
        let d = jacobi_matrix(&id).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                if i == j {
                    assert_eq!(d[i][j], DoubleDerivationValue::unit(2));
                } else {
                    assert!(d[i][j].is_zero());
                }
            }
        }
        // one generator, F(x) = G(x) = x^2: D(G o F) = sum x^i (x) x^{3-i}
        let sq = vec![x(1).mul(&x(1)).unwrap()];
        let df = jacobi_matrix(&sq).unwrap();
        let composite = jacobi_compose(&df, &df, &sq).unwrap();
        let gf = vec![substitute(&sq[0], &sq).unwrap()];
        let direct = jacobi_matrix(&gf).unwrap();
        assert_eq!(composite, direct);
        let mut expect = DoubleDerivationValue::zero(1);
        for i in 0..4usize {
            expect.add_term(Word(vec![0; i]), Word(vec![0; 3 - i]), rat(1));
        }
        assert_eq!(direct[0][0], expect);
        // random endomorphism pairs, two generators
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..3 {
            let f = vec![rand_free(&mut rng, 2, 3, 2), rand_free(&mut rng, 2, 3, 2)];
            let g = vec![rand_free(&mut rng, 2, 3, 2), rand_free(&mut rng, 2, 3, 2)];
            let composite =
                jacobi_compose(&jacobi_matrix(&g).unwrap(), &jacobi_matrix(&f).unwrap(), &f)
                    .unwrap();
            let direct = jacobi_matrix(&[
                substitute(&g[0], &f).unwrap(),
                substitute(&g[1], &f).unwrap(),
            ])
            .unwrap();
            assert_eq!(composite, direct);
        }
    }

    #[test]
    fn jacobi_differential() {
        // identity
        let rep = jacobi_differential_check(&[x(2), y(2)], 2).unwrap();
        assert!(rep.agrees);
        // F(x) = x^2
        let rep = jacobi_differential_check(&[x(1).mul(&x(1)).unwrap()], 2).unwrap();
        assert!(rep.agrees);
        // random F of degree <= 3
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..3 {
            let f = vec![rand_free(&mut rng, 2, 3, 2), rand_free(&mut rng, 2, 3, 2)];
            assert!(jacobi_differential_check(&f, 2).unwrap().agrees);
        }
    }

    fn dd(v: usize, nvars: usize) -> PolyVector {
        let mut p = ExtElem::zero(nvars, 1);
        p.add_term((vec![0; nvars], vec![v]), rat(1));
        p
    }

    #[test]
    fn schouten_examples() {
        // [d/dx, x d/dy] = d/dy
        let mut xdy = ExtElem::zero(2, 1);
        xdy.add_term((vec![1, 0], vec![1]), rat(1));
        let b = schouten_bracket(&dd(0, 2), &xdy).unwrap();
        assert_eq!(b, dd(1, 2));
        // [P, P] = 0 for the constant bivector
        let p = dd(0, 2).wedge(&dd(1, 2)).unwrap();
        assert!(schouten_bracket(&p, &p).unwrap().is_zero());
        // [x d/dx ^ d/dy, d/dx] = -d/dx ^ d/dy
        let mut q = ExtElem::zero(2, 2);
        q.add_term((vec![1, 0], vec![0, 1]), rat(1));
        let b = schouten_bracket(&q, &dd(0, 2)).unwrap();
        assert_eq!(b, p.neg());
    }

    fn rand_polyvector(rng: &mut ChaCha8Rng, nvars: usize, degree: usize) -> PolyVector {
        let mut p = ExtElem::zero(nvars, degree);
        for _ in 0..2 {
            let mut m = vec![0u32; nvars];
            for _ in 0..rng.gen_range(0..=2) {
                m[rng.gen_range(0..nvars)] += 1;
            }
            let mut vars: Vec<usize> = (0..nvars).collect();
            for i in (1..vars.len()).rev() {
                vars.swap(i, rng.gen_range(0..=i));
            }
            let mut s: Vec<usize> = vars[..degree].to_vec();
            s.sort_unstable();
            p.add_term((m, s), rat(rng.gen_range(-2..=2)));
        }
        p
    }

    #[test]
    fn schouten_graded_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..5 {
            let dp = rng.gen_range(1..=2usize);
            let dq = rng.gen_range(1..=2usize);
            let dr = rng.gen_range(1..=2usize);
            let p = rand_polyvector(&mut rng, 3, dp);
            let q = rand_polyvector(&mut rng, 3, dq);
            let r = rand_polyvector(&mut rng, 3, dr);
            // graded antisymmetry: {P,Q} = -(-1)^{(p-1)(q-1)} {Q,P}
            let sign = if (dp - 1) * (dq - 1) % 2 == 0 { -1 } else { 1 };
            assert_eq!(
                schouten_bracket(&p, &q).unwrap(),
                schouten_bracket(&q, &p).unwrap().scale(&rat(sign))
            );
            // graded Jacobi:
            // {P,{Q,R}} = {{P,Q},R} + (-1)^{(p-1)(q-1)} {Q,{P,R}}
            let lhs = schouten_bracket(&p, &schouten_bracket(&q, &r).unwrap()).unwrap();
            let jsign = if (dp - 1) * (dq - 1) % 2 == 0 { 1 } else { -1 };
            let rhs = schouten_bracket(&schouten_bracket(&p, &q).unwrap(), &r)
                .unwrap()
                .add(
                    &schouten_bracket(&q, &schouten_bracket(&p, &r).unwrap())
                        .unwrap()
                        .scale(&rat(jsign)),
                )
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn poisson_brackets() {
        let xv = MultiPoly::<Rational>::var(0, 2);
        let yv = MultiPoly::<Rational>::var(1, 2);
        let canonical = dd(0, 2).wedge(&dd(1, 2)).unwrap();
        assert_eq!(
            poisson_from_bivector(&canonical, &xv, &yv).unwrap(),
            MultiPoly::one(2)
        );
        // pi = x d/dx ^ d/dy
        let mut pi = ExtElem::zero(2, 2);
        pi.add_term((vec![1, 0], vec![0, 1]), rat(1));
        assert_eq!(poisson_from_bivector(&pi, &xv, &yv).unwrap(), xv);
        // canonical bivector: Jacobi defect and [pi,pi] both vanish
        let f = xv.mul(&xv).unwrap();
        let g = xv.mul(&yv).unwrap();
        let h = yv.mul(&yv).unwrap();
        assert!(poisson_jacobi_defect(&canonical, &f, &g, &h).unwrap().is_zero());
        assert!(schouten_bracket(&canonical, &canonical).unwrap().is_zero());
        // a non-Poisson bivector: both obstructions nonzero together
        let x3 = MultiPoly::<Rational>::var(0, 3);
        let y3 = MultiPoly::<Rational>::var(1, 3);
        let z3 = MultiPoly::<Rational>::var(2, 3);
        let mut pi = ExtElem::zero(3, 2);
        pi.add_term((vec![0, 1, 0], vec![0, 1]), rat(1)); // y dx^dy
        pi.add_term((vec![1, 0, 0], vec![1, 2]), rat(1)); // x dy^dz
        let defect = poisson_jacobi_defect(&pi, &x3, &y3, &z3).unwrap();
        let brack = schouten_bracket(&pi, &pi).unwrap();
        assert!(!defect.is_zero());
        assert!(!brack.is_zero());
    }
}
