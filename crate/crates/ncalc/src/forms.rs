//! Noncommutative differential forms over a based algebra, the operators
//! d, b and the Karoubi operator, the Cartan calculus of derivations, the
//! Karoubi-de Rham complex DR(A) = Omega/[Omega, Omega], the Poincare
//! homotopy, the Quillen four-term sequence, and the universal square-zero
//! extension.
//!
//! A degree-n form is stored in the reduced model A (x) Abar^{(x)n}: each
//! term is a key (a0, abar_1, .., abar_n) of basis atoms where no bar slot
//! is ever a multiple of the unit.

use crate::based::{Atom, BasedAlgebra, Elem};
use crate::error::NcalcError;
use crate::linalg::{Echelon, Matrix};
use crate::scalar::{rat, Rational};
use crate::word::FreePoly;
use itertools::Itertools;
use num_traits::{One, Zero};
use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

/// Default bound on the dimension of any graded piece enumerated for
/// linear algebra.
pub const DEFAULT_PIECE_CAP: usize = 20_000;

/// An element of Omega^n_nc(A) in the reduced tensor model.
#[derive(Clone, PartialEq, Debug)]
pub struct NCForm {
    pub degree: usize,
    /// Keys have length degree + 1; slot 0 is a0, slots 1.. are the bar
    /// slots and hold complement-basis atoms only.
    pub terms: BTreeMap<Vec<Atom>, Rational>,
    pub algebra: Rc<BasedAlgebra>,
}

impl NCForm {
    pub fn zero(algebra: Rc<BasedAlgebra>, degree: usize) -> Self {
        NCForm {
            degree,
            terms: BTreeMap::new(),
            algebra,
        }
    }

    /// The unit of the form algebra: 1 in degree 0.
    pub fn one(algebra: Rc<BasedAlgebra>) -> Self {
        let unit = algebra.unit_atom();
        let mut f = NCForm::zero(algebra, 0);
        f.add_term(vec![unit], Rational::one());
        f
    }

    /// Embeds an algebra element as a degree-0 form.
    pub fn from_elem(algebra: Rc<BasedAlgebra>, e: &Elem) -> Self {
        let mut f = NCForm::zero(algebra, 0);
        for (a, c) in &e.terms {
            f.add_term(vec![a.clone()], c.clone());
        }
        f
    }

    pub fn from_free(algebra: Rc<BasedAlgebra>, p: &FreePoly) -> Self {
        NCForm::from_elem(algebra, &Elem::from_free(p))
    }

    /// The degree-0 part read back as an algebra element.
    pub fn to_elem(&self) -> Result<Elem, NcalcError> {
        if self.degree != 0 {
            return Err(NcalcError::DegreeError {
                degree: self.degree,
                reason: "not a degree-0 form".into(),
            });
        }
        let mut e = Elem::zero();
        for (key, c) in &self.terms {
            e.add_term(key[0].clone(), c.clone());
        }
        Ok(e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: Vec<Atom>, c: Rational) {
        debug_assert_eq!(key.len(), self.degree + 1);
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

    /// Adds `c * a0 (slot) da1 .. dan` where each slot holds a general
    /// element: expands multilinearly and drops unit components in bar
    /// slots.
    pub fn add_tensor(&mut self, a0: &Elem, bars: &[Elem], c: &Rational) {
        debug_assert_eq!(bars.len(), self.degree);
        let mut keys: Vec<(Vec<Atom>, Rational)> = a0
            .terms
            .iter()
            .map(|(a, k)| (vec![a.clone()], k * c))
            .collect();
        for bar in bars {
            let mut next = Vec::new();
            for (key, k) in &keys {
                for (a, kb) in &bar.terms {
                    let (_, reduced) = self.algebra.unit_coeff_and_bar(a);
                    if let Some(atom) = reduced {
                        let mut key2 = key.clone();
                        key2.push(atom);
                        next.push((key2, k * kb));
                    }
                }
            }
            keys = next;
        }
        for (key, k) in keys {
            self.add_term(key, k);
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
        NCForm {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), -c.clone()))
                .collect(),
            algebra: self.algebra.clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = NCForm::zero(self.algebra.clone(), self.degree);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    fn check(&self, other: &Self) -> Result<(), NcalcError> {
        if self.algebra != other.algebra {
            return Err(NcalcError::AlgebraMismatch);
        }
        if self.degree != other.degree {
            return Err(NcalcError::DegreeError {
                degree: other.degree,
                reason: format!("expected degree {}", self.degree),
            });
        }
        Ok(())
    }

    /// Left module action a . omega: multiply into slot 0.
    pub fn left_mul_elem(&self, a: &Elem) -> Result<Self, NcalcError> {
        let mut out = NCForm::zero(self.algebra.clone(), self.degree);
        for (key, c) in &self.terms {
            for (x, cx) in &a.terms {
                let prod = self.algebra.atom_mul(x, &key[0])?;
                for (z, cz) in prod.terms {
                    let mut key2 = key.clone();
                    key2[0] = z;
                    out.add_term(key2, cz * cx.clone() * c.clone());
                }
            }
        }
        Ok(out)
    }

    /// Right module action omega . b via the Leibniz rewrite
    /// da.b = d(ab) - a db, in closed form:
    /// (a0 da1 .. dan) b = sum_{i=0..n} (-1)^{n-i} a0 da1 .. d(a_i a_{i+1}) .. dan db
    /// with a_{n+1} = b.
    pub fn right_mul_atom(&self, b: &Atom) -> Result<Self, NcalcError> {
        let n = self.degree;
        let mut out = NCForm::zero(self.algebra.clone(), n);
        let (_, bar_b) = self.algebra.unit_coeff_and_bar(b);
        for (key, c) in &self.terms {
            let mut slots: Vec<Atom> = key.clone();
            slots.push(b.clone());
            for i in 0..=n {
                // the multiplier lands in the last bar slot unless merged
                let tail_b = if i < n {
                    match &bar_b {
                        Some(a) => Some(a.clone()),
                        None => continue,
                    }
                } else {
                    None
                };
                let sign = if (n - i) % 2 == 0 { rat(1) } else { rat(-1) };
                let merged = self.algebra.atom_mul(&slots[i], &slots[i + 1])?;
                for (z, cz) in merged.terms {
                    let head = if i == 0 {
                        // product lands in slot 0: keep every component
                        Some(z.clone())
                    } else {
                        self.algebra.unit_coeff_and_bar(&z).1
                    };
                    if let Some(atom) = head {
                        let mut key2: Vec<Atom> = slots[..i].to_vec();
                        key2.push(atom);
                        key2.extend_from_slice(&slots[(i + 2).min(n + 1)..n + 1]);
                        if let Some(a) = &tail_b {
                            key2.push(a.clone());
                        }
                        out.add_term(key2, cz * &sign * c);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn right_mul_elem(&self, b: &Elem) -> Result<Self, NcalcError> {
        let mut out = NCForm::zero(self.algebra.clone(), self.degree);
        for (a, c) in &b.terms {
            out = out.add(&self.right_mul_atom(a)?.scale(c))?;
        }
        Ok(out)
    }

    /// Appends bar slots on the right, i.e. multiplies by 1 db1 .. dbm.
    fn append_bars(&self, bars: &[Atom]) -> Self {
        let mut out = NCForm::zero(self.algebra.clone(), self.degree + bars.len());
        for (key, c) in &self.terms {
            let mut key2 = key.clone();
            key2.extend_from_slice(bars);
            out.add_term(key2, c.clone());
        }
        out
    }

    /// Largest total weight among terms (free case); 0 for fin-dim.
    pub fn weight(&self) -> usize {
        self.terms
            .keys()
            .map(|k| k.iter().map(|a| self.algebra.atom_weight(a)).sum())
            .max()
            .unwrap_or(0)
    }

    /// The homogeneous weight if all terms agree, None for mixed weight.
    /// The zero form reports Some(0).
    pub fn homogeneous_weight(&self) -> Option<usize> {
        let mut it = self
            .terms
            .keys()
            .map(|k| k.iter().map(|a| self.algebra.atom_weight(a)).sum::<usize>());
        match it.next() {
            None => Some(0),
            Some(w) => {
                if it.all(|v| v == w) {
                    Some(w)
                } else {
                    None
                }
            }
        }
    }

    pub fn weight_part(&self, w: usize) -> Self {
        let mut out = NCForm::zero(self.algebra.clone(), self.degree);
        for (key, c) in &self.terms {
            let tw: usize = key.iter().map(|a| self.algebra.atom_weight(a)).sum();
            if tw == w {
                out.add_term(key.clone(), c.clone());
            }
        }
        out
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (key, c) in &self.terms {
            let mut factors = Vec::new();
            let a0 = &key[0];
            let unit = self.algebra.unit_atom();
            if *a0 != unit || self.degree == 0 {
                factors.push(self.algebra.atom_name(a0));
            }
            for a in &key[1..] {
                factors.push(format!("d({})", self.algebra.atom_name(a)));
            }
            let m = factors.join("*");
            let p = if c.is_one() {
                m
            } else if *c == -Rational::one() {
                format!("-{}", m)
            } else {
                format!("{}*{}", crate::scalar::rat_string(c), m)
            };
            parts.push(p);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Display for NCForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

/// Product of the differential graded algebra Omega_nc(A).
pub fn form_mul(alpha: &NCForm, beta: &NCForm) -> Result<NCForm, NcalcError> {
    if alpha.algebra != beta.algebra {
        return Err(NcalcError::AlgebraMismatch);
    }
    let mut out = NCForm::zero(alpha.algebra.clone(), alpha.degree + beta.degree);
    for (key, c) in &beta.terms {
        let head = alpha.right_mul_atom(&key[0])?;
        out = out.add(&head.append_bars(&key[1..]).scale(c))?;
    }
    Ok(out)
}

/// The universal differential: d(a0 da1 .. dan) = da0 da1 .. dan.
pub fn de_rham_d(alpha: &NCForm) -> NCForm {
    let unit = alpha.algebra.unit_atom();
    let mut out = NCForm::zero(alpha.algebra.clone(), alpha.degree + 1);
    for (key, c) in &alpha.terms {
        let (_, bar) = alpha.algebra.unit_coeff_and_bar(&key[0]);
        if let Some(a0) = bar {
            let mut key2 = Vec::with_capacity(key.len() + 1);
            key2.push(unit.clone());
            key2.push(a0);
            key2.extend_from_slice(&key[1..]);
            out.add_term(key2, c.clone());
        }
    }
    out
}

/// The Hochschild boundary b(omega da) = (-1)^{deg omega} [omega, a].
pub fn hochschild_b(alpha: &NCForm) -> Result<NCForm, NcalcError> {
    if alpha.degree == 0 {
        return Err(NcalcError::DegreeError {
            degree: 0,
            reason: "b is undefined on degree 0".into(),
        });
    }
    let n = alpha.degree;
    let mut out = NCForm::zero(alpha.algebra.clone(), n - 1);
    for (key, c) in &alpha.terms {
        let a = key[n].clone();
        let mut omega = NCForm::zero(alpha.algebra.clone(), n - 1);
        omega.add_term(key[..n].to_vec(), c.clone());
        let comm = omega
            .right_mul_atom(&a)?
            .sub(&omega.left_mul_elem(&Elem::from_atom(a))?)?;
        let sign = if (n - 1) % 2 == 0 { rat(1) } else { rat(-1) };
        out = out.add(&comm.scale(&sign))?;
    }
    Ok(out)
}

/// The Karoubi operator kappa(omega da) = (-1)^{deg omega} da . omega,
/// the identity on degree 0.
pub fn karoubi(alpha: &NCForm) -> Result<NCForm, NcalcError> {
    if alpha.degree == 0 {
        return Ok(alpha.clone());
    }
    let n = alpha.degree;
    let unit = alpha.algebra.unit_atom();
    let mut out = NCForm::zero(alpha.algebra.clone(), n);
    for (key, c) in &alpha.terms {
        let mut da = NCForm::zero(alpha.algebra.clone(), 1);
        da.add_term(vec![unit.clone(), key[n].clone()], Rational::one());
        let mut omega = NCForm::zero(alpha.algebra.clone(), n - 1);
        omega.add_term(key[..n].to_vec(), c.clone());
        let sign = if (n - 1) % 2 == 0 { rat(1) } else { rat(-1) };
        out = out.add(&form_mul(&da, &omega)?.scale(&sign))?;
    }
    Ok(out)
}

/// A derivation of the algebra, given by generator images (free case) or
/// an operator matrix on the basis (fin-dim case, Leibniz validated).
#[derive(Clone, PartialEq, Debug)]
pub enum DerivationSpec {
    Free { images: Vec<FreePoly> },
    FinDim { matrix: Matrix },
}

impl DerivationSpec {
    pub fn free(images: Vec<FreePoly>) -> Result<Self, NcalcError> {
        let g = images.len();
        for im in &images {
            if im.generator_count != g {
                return Err(NcalcError::GeneratorCountMismatch {
                    left: g,
                    right: im.generator_count,
                });
            }
        }
        Ok(DerivationSpec::Free { images })
    }

    /// The Euler derivation x_i -> x_i of a free algebra.
    pub fn euler(generator_count: usize) -> Self {
        DerivationSpec::Free {
            images: (0..generator_count)
                .map(|i| FreePoly::gen(i, generator_count))
                .collect(),
        }
    }

    /// Builds a fin-dim derivation from its matrix (column i = image of
    /// basis element i), validating the Leibniz rule on all basis pairs.
    pub fn fin_dim(matrix: Matrix, alg: &crate::structure::StructureAlgebra) -> Result<Self, NcalcError> {
        let dim = alg.dim;
        if matrix.nrows() != dim || matrix.ncols != dim {
            return Err(NcalcError::DimensionMismatch {
                expected: dim,
                got: matrix.nrows(),
            });
        }
        for i in 0..dim {
            for j in 0..dim {
                let lhs = matrix.apply(&alg.basis_product(i, j));
                let ti = matrix.apply(&alg.basis_vec(i));
                let tj = matrix.apply(&alg.basis_vec(j));
                let rhs_vec: Vec<Rational> = alg
                    .mul(&ti, &alg.basis_vec(j))?
                    .iter()
                    .zip(alg.mul(&alg.basis_vec(i), &tj)?)
                    .map(|(a, b)| a + b)
                    .collect();
                if lhs != rhs_vec {
                    return Err(NcalcError::InvalidInput(format!(
                        "Leibniz rule fails on basis pair ({}, {})",
                        i, j
                    )));
                }
            }
        }
        Ok(DerivationSpec::FinDim { matrix })
    }

    fn check(&self, alg: &BasedAlgebra) -> Result<(), NcalcError> {
        match (self, alg) {
            (DerivationSpec::Free { images }, BasedAlgebra::Free { generator_count }) => {
                if images.len() == *generator_count {
                    Ok(())
                } else {
                    Err(NcalcError::AlgebraMismatch)
                }
            }
            (DerivationSpec::FinDim { matrix }, BasedAlgebra::FinDim(s)) => {
                if matrix.ncols == s.dim {
                    Ok(())
                } else {
                    Err(NcalcError::AlgebraMismatch)
                }
            }
            _ => Err(NcalcError::AlgebraMismatch),
        }
    }

    /// theta(a) for a basis atom, by Leibniz over letters in the free
    /// case and by the matrix in the fin-dim case.
    pub fn apply_atom(&self, alg: &BasedAlgebra, a: &Atom) -> Result<Elem, NcalcError> {
        self.check(alg)?;
        match (self, a) {
            (DerivationSpec::Free { images }, Atom::W(w)) => {
                let g = images.len();
                let mut out = FreePoly::zero(g);
                for pos in 0..w.len() {
                    let pre = FreePoly::from_word(crate::word::Word(w.0[..pos].to_vec()), g);
                    let post =
                        FreePoly::from_word(crate::word::Word(w.0[pos + 1..].to_vec()), g);
                    out = out.add(&pre.mul(&images[w.0[pos]])?.mul(&post)?)?;
                }
                Ok(Elem::from_free(&out))
            }
            (DerivationSpec::FinDim { matrix }, Atom::E(i)) => {
                let mut v = vec![Rational::zero(); matrix.ncols];
                v[*i] = Rational::one();
                Ok(Elem::from_vector(&matrix.apply(&v)))
            }
            _ => Err(NcalcError::AlgebraMismatch),
        }
    }

    pub fn apply_elem(&self, alg: &BasedAlgebra, e: &Elem) -> Result<Elem, NcalcError> {
        let mut out = Elem::zero();
        for (a, c) in &e.terms {
            out = out.add(&self.apply_atom(alg, a)?.scale(c));
        }
        Ok(out)
    }

    /// Commutator of derivations [theta, gamma] = theta gamma - gamma theta.
    pub fn bracket(&self, other: &Self, alg: &BasedAlgebra) -> Result<Self, NcalcError> {
        match (self, other) {
            (DerivationSpec::Free { images }, DerivationSpec::Free { .. }) => {
                let g = images.len();
                let mut out = Vec::with_capacity(g);
                for i in 0..g {
                    let xi = Elem::from_atom(Atom::W(crate::word::Word::gen(i)));
                    let a = self.apply_elem(alg, &other.apply_elem(alg, &xi)?)?;
                    let b = other.apply_elem(alg, &self.apply_elem(alg, &xi)?)?;
                    out.push(a.sub(&b).to_free(g)?);
                }
                Ok(DerivationSpec::Free { images: out })
            }
            (
                DerivationSpec::FinDim { matrix: m1 },
                DerivationSpec::FinDim { matrix: m2 },
            ) => {
                let a = m1.mat_mul(m2);
                let b = m2.mat_mul(m1);
                let rows: Vec<Vec<Rational>> = a
                    .rows
                    .iter()
                    .zip(&b.rows)
                    .map(|(r1, r2)| r1.iter().zip(r2).map(|(x, y)| x - y).collect())
                    .collect();
                Ok(DerivationSpec::FinDim {
                    matrix: Matrix::from_rows(rows, m1.ncols),
                })
            }
            _ => Err(NcalcError::AlgebraMismatch),
        }
    }
}

/// Contraction i_theta(a0 da1 .. dan) =
/// sum_j (-1)^{j-1} a0 da1 .. theta(a_j) .. dan.
pub fn contraction_i(theta: &DerivationSpec, alpha: &NCForm) -> Result<NCForm, NcalcError> {
    theta.check(&alpha.algebra)?;
    if alpha.degree == 0 {
        return Ok(NCForm::zero(alpha.algebra.clone(), 0));
    }
    let n = alpha.degree;
    let mut out = NCForm::zero(alpha.algebra.clone(), n - 1);
    for (key, c) in &alpha.terms {
        for j in 1..=n {
            let sign = if (j - 1) % 2 == 0 { rat(1) } else { rat(-1) };
            let mut prefix = NCForm::zero(alpha.algebra.clone(), j - 1);
            prefix.add_term(key[..j].to_vec(), c * &sign);
            let img = theta.apply_atom(&alpha.algebra, &key[j])?;
            let head = prefix.right_mul_elem(&img)?;
            out = out.add(&head.append_bars(&key[j + 1..]))?;
        }
    }
    Ok(out)
}

/// Lie derivative, computed both by the explicit termwise formula and by
/// the Cartan composite d i_theta + i_theta d; the two are asserted equal.
pub fn lie_derivative(theta: &DerivationSpec, alpha: &NCForm) -> Result<NCForm, NcalcError> {
    theta.check(&alpha.algebra)?;
    let mut explicit = NCForm::zero(alpha.algebra.clone(), alpha.degree);
    for (key, c) in &alpha.terms {
        // theta on slot 0
        let head = theta.apply_atom(&alpha.algebra, &key[0])?;
        let mut t0 = NCForm::zero(alpha.algebra.clone(), alpha.degree);
        let bar_elems: Vec<Elem> = key[1..]
            .iter()
            .map(|a| Elem::from_atom(a.clone()))
            .collect();
        t0.add_tensor(&head, &bar_elems, c);
        explicit = explicit.add(&t0)?;
        // theta through each bar slot
        for j in 1..=alpha.degree {
            let img = theta.apply_atom(&alpha.algebra, &key[j])?;
            let mut bars = bar_elems.clone();
            bars[j - 1] = img;
            let mut tj = NCForm::zero(alpha.algebra.clone(), alpha.degree);
            tj.add_tensor(&Elem::from_atom(key[0].clone()), &bars, c);
            explicit = explicit.add(&tj)?;
        }
    }
    let term2 = contraction_i(theta, &de_rham_d(alpha))?;
    let cartan = if alpha.degree == 0 {
        term2
    } else {
        de_rham_d(&contraction_i(theta, alpha)?).add(&term2)?
    };
    assert_eq!(
        explicit, cartan,
        "Lie derivative: explicit formula disagrees with Cartan composite"
    );
    Ok(explicit)
}

/// A class in DR^n(A): the canonical coset representative of a form
/// modulo supercommutators, within one (degree, weight) graded piece.
#[derive(Clone, PartialEq, Debug)]
pub struct DRClass {
    pub degree: usize,
    /// Weight of the graded piece in the free case; 0 for fin-dim.
    pub weight: usize,
    pub rep: NCForm,
}

impl DRClass {
    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
}

impl fmt::Display for DRClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[DR] {}", self.rep)
    }
}

/// One finite-dimensional graded piece of Omega(A): a monomial basis with
/// the echelonized supercommutator subspace.
pub struct GradedPiece {
    pub degree: usize,
    pub weight: usize,
    pub basis: Vec<Vec<Atom>>,
    pub index: BTreeMap<Vec<Atom>, usize>,
    pub commutators: Echelon,
    /// Columns forming a basis of the DR quotient (non-pivot columns).
    pub quotient_cols: Vec<usize>,
}

impl GradedPiece {
    pub fn dr_dim(&self) -> usize {
        self.quotient_cols.len()
    }
}

/// Windowed calculator for the DR complex of one algebra, with per-piece
/// echelon caches.
pub struct DrContext {
    pub algebra: Rc<BasedAlgebra>,
    pub max_piece_dim: usize,
    cache: RefCell<BTreeMap<(usize, usize), Rc<GradedPiece>>>,
}

impl DrContext {
    pub fn new(algebra: Rc<BasedAlgebra>) -> Self {
        DrContext {
            algebra,
            max_piece_dim: DEFAULT_PIECE_CAP,
            cache: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn with_cap(algebra: Rc<BasedAlgebra>, max_piece_dim: usize) -> Self {
        DrContext {
            algebra,
            max_piece_dim,
            cache: RefCell::new(BTreeMap::new()),
        }
    }

    /// The monomial basis of the (degree, weight) piece of Omega(A).
    pub fn piece_basis(&self, degree: usize, weight: usize) -> Result<Vec<Vec<Atom>>, NcalcError> {
        let mut out = Vec::new();
        match &*self.algebra {
            BasedAlgebra::Free { .. } => {
                if weight < degree {
                    return Ok(out);
                }
                // compositions weight = k0 + k1 + .. + kn, k0 >= 0, ki >= 1
                let mut parts = vec![0usize; degree + 1];
                self.compose(degree, weight, 0, &mut parts, &mut out)?;
            }
            BasedAlgebra::FinDim(_) => {
                if weight != 0 {
                    return Ok(out);
                }
                let slot0 = self.algebra.atoms_of_weight(0);
                let bar = self.algebra.complement_atoms(0);
                let mut pools: Vec<Vec<Atom>> = vec![slot0];
                for _ in 0..degree {
                    pools.push(bar.clone());
                }
                for combo in pools.into_iter().multi_cartesian_product() {
                    out.push(combo);
                    if out.len() > self.max_piece_dim {
                        return Err(NcalcError::CapExceeded {
                            what: "graded piece dimension".into(),
                            value: out.len(),
                            bound: self.max_piece_dim,
                        });
                    }
                }
            }
        }
        Ok(out)
    }

    fn compose(
        &self,
        degree: usize,
        weight: usize,
        slot: usize,
        parts: &mut Vec<usize>,
        out: &mut Vec<Vec<Atom>>,
    ) -> Result<(), NcalcError> {
        if slot == degree + 1 {
            if parts.iter().sum::<usize>() != weight {
                return Ok(());
            }
            let pools: Vec<Vec<Atom>> = parts
                .iter()
                .map(|&k| self.algebra.atoms_of_weight(k))
                .collect();
            for combo in pools.into_iter().multi_cartesian_product() {
                out.push(combo);
                if out.len() > self.max_piece_dim {
                    return Err(NcalcError::CapExceeded {
                        what: "graded piece dimension".into(),
                        value: out.len(),
                        bound: self.max_piece_dim,
                    });
                }
            }
            return Ok(());
        }
        let used: usize = parts[..slot].iter().sum();
        let remaining_slots = degree + 1 - slot - 1; // slots after this one
        let min = if slot == 0 { 0 } else { 1 };
        let reserve = remaining_slots; // each later slot needs >= 1
        if weight < used + reserve {
            return Ok(());
        }
        for k in min..=(weight - used - reserve) {
            parts[slot] = k;
            self.compose(degree, weight, slot + 1, parts, out)?;
        }
        parts[slot] = 0;
        Ok(())
    }

    /// The cached piece with its supercommutator echelon.
    pub fn piece(&self, degree: usize, weight: usize) -> Result<Rc<GradedPiece>, NcalcError> {
        if let Some(p) = self.cache.borrow().get(&(degree, weight)) {
            return Ok(p.clone());
        }
        let basis = self.piece_basis(degree, weight)?;
        let index: BTreeMap<Vec<Atom>, usize> = basis
            .iter()
            .enumerate()
            .map(|(i, k)| (k.clone(), i))
            .collect();
        let ncols = basis.len();
        let mut ech = Echelon::empty(ncols);
        for d1 in 0..=degree {
            let d2 = degree - d1;
            for w1 in 0..=weight {
                let w2 = weight - w1;
                let b1 = self.piece_basis(d1, w1)?;
                if b1.is_empty() {
                    continue;
                }
                let b2 = self.piece_basis(d2, w2)?;
                if b2.is_empty() {
                    continue;
                }
                let sign = if (d1 * d2) % 2 == 0 { rat(-1) } else { rat(1) };
                for k1 in &b1 {
                    let mut mu = NCForm::zero(self.algebra.clone(), d1);
                    mu.add_term(k1.clone(), Rational::one());
                    for k2 in &b2 {
                        let mut nu = NCForm::zero(self.algebra.clone(), d2);
                        nu.add_term(k2.clone(), Rational::one());
                        // [mu, nu] = mu nu - (-1)^{d1 d2} nu mu
                        let comm =
                            form_mul(&mu, &nu)?.add(&form_mul(&nu, &mu)?.scale(&sign))?;
                        if comm.is_zero() {
                            continue;
                        }
                        let v = self.coeff_vector(&comm, &index, ncols)?;
                        ech.insert(v);
                    }
                }
            }
        }
        let pivots: std::collections::BTreeSet<usize> =
            ech.pivot_cols.iter().copied().collect();
        let quotient_cols = (0..ncols).filter(|c| !pivots.contains(c)).collect();
        let piece = Rc::new(GradedPiece {
            degree,
            weight,
            basis,
            index,
            commutators: ech,
            quotient_cols,
        });
        self.cache
            .borrow_mut()
            .insert((degree, weight), piece.clone());
        Ok(piece)
    }

    fn coeff_vector(
        &self,
        form: &NCForm,
        index: &BTreeMap<Vec<Atom>, usize>,
        ncols: usize,
    ) -> Result<Vec<Rational>, NcalcError> {
        let mut v = vec![Rational::zero(); ncols];
        for (key, c) in &form.terms {
            match index.get(key) {
                Some(&i) => v[i] = c.clone(),
                None => {
                    return Err(NcalcError::InvalidInput(
                        "form does not lie in the expected graded piece".into(),
                    ))
                }
            }
        }
        Ok(v)
    }

    fn form_from_vector(&self, degree: usize, piece: &GradedPiece, v: &[Rational]) -> NCForm {
        let mut f = NCForm::zero(self.algebra.clone(), degree);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                f.add_term(piece.basis[i].clone(), c.clone());
            }
        }
        f
    }

    /// Projects a weight-homogeneous form to its canonical DR coset
    /// representative.
    pub fn dr_project(&self, alpha: &NCForm) -> Result<DRClass, NcalcError> {
        if alpha.algebra != self.algebra {
            return Err(NcalcError::AlgebraMismatch);
        }
        let weight = alpha.homogeneous_weight().ok_or_else(|| {
            NcalcError::InvalidInput("dr_project requires a weight-homogeneous form".into())
        })?;
        let piece = self.piece(alpha.degree, weight)?;
        let v = self.coeff_vector(alpha, &piece.index, piece.basis.len())?;
        let reduced = piece.commutators.reduce(v);
        Ok(DRClass {
            degree: alpha.degree,
            weight,
            rep: self.form_from_vector(alpha.degree, &piece, &reduced),
        })
    }

    /// d in quotient coordinates: matrix from DR^{n, w} to DR^{n+1, w}
    /// (rows indexed by the target quotient basis).
    pub fn dr_d_matrix(&self, degree: usize, weight: usize) -> Result<Matrix, NcalcError> {
        let src = self.piece(degree, weight)?;
        let tgt = self.piece(degree + 1, weight)?;
        let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(src.dr_dim());
        for &c in &src.quotient_cols {
            let mut mono = NCForm::zero(self.algebra.clone(), degree);
            mono.add_term(src.basis[c].clone(), Rational::one());
            let img = de_rham_d(&mono);
            let v = self.coeff_vector(&img, &tgt.index, tgt.basis.len())?;
            let r = tgt.commutators.reduce(v);
            cols.push(tgt.quotient_cols.iter().map(|&i| r[i].clone()).collect());
        }
        // transpose columns into a rows-major matrix
        let nrows = tgt.dr_dim();
        let ncols = src.dr_dim();
        let mut rows = vec![vec![Rational::zero(); ncols]; nrows];
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                rows[i][j] = x.clone();
            }
        }
        Ok(Matrix::from_rows(rows, ncols))
    }

    /// DR cohomology dimensions for all degrees 0..=max_degree and (free
    /// case) weights 0..=max_weight, keyed by (degree, weight).
    pub fn dr_cohomology(
        &self,
        max_degree: usize,
        max_weight: usize,
    ) -> Result<BTreeMap<(usize, usize), usize>, NcalcError> {
        let weights: Vec<usize> = if self.algebra.is_free() {
            (0..=max_weight).collect()
        } else {
            vec![0]
        };
        let mut out = BTreeMap::new();
        for &w in &weights {
            for n in 0..=max_degree {
                let dn = self.dr_d_matrix(n, w)?;
                let src_dim = self.piece(n, w)?.dr_dim();
                let ker = src_dim - dn.rank();
                let im_prev = if n == 0 {
                    0
                } else {
                    self.dr_d_matrix(n - 1, w)?.rank()
                };
                out.insert((n, w), ker - im_prev);
            }
        }
        Ok(out)
    }

    /// DR cohomology of the reduced complex, which differs from the
    /// plain one only in degree 0, where the line of constants is
    /// quotiented away.  This is the normalization under which
    /// H(DR(k[e]/(e^2-e))) comes out as k in even degrees.
    pub fn dr_cohomology_reduced(
        &self,
        max_degree: usize,
        max_weight: usize,
    ) -> Result<BTreeMap<(usize, usize), usize>, NcalcError> {
        let mut h = self.dr_cohomology(max_degree, max_weight)?;
        let unit_key = vec![self.algebra.unit_atom()];
        let p = self.piece(0, 0)?;
        if let Some(&i) = p.index.get(&unit_key) {
            let mut v = vec![Rational::zero(); p.basis.len()];
            v[i] = Rational::one();
            if !p.commutators.contains(&v) {
                if let Some(d) = h.get_mut(&(0, 0)) {
                    *d -= 1;
                }
            }
        }
        Ok(h)
    }

    /// The Poincare primitive eta = i_eu(omega) / w of a closed class of
    /// weight w >= 1 over a free algebra, with d eta = omega.
    pub fn poincare_primitive(&self, omega: &DRClass) -> Result<DRClass, NcalcError> {
        let generator_count = match &*self.algebra {
            BasedAlgebra::Free { generator_count } => *generator_count,
            BasedAlgebra::FinDim(_) => {
                return Err(NcalcError::InvalidInput(
                    "Poincare primitive needs a graded free algebra".into(),
                ))
            }
        };
        if omega.weight == 0 {
            return Err(NcalcError::DegreeError {
                degree: 0,
                reason: "weight must be >= 1".into(),
            });
        }
        let d_omega = self.dr_project(&de_rham_d(&omega.rep))?;
        if !d_omega.is_zero() {
            return Err(NcalcError::InvalidInput("class is not closed".into()));
        }
        let eu = DerivationSpec::euler(generator_count);
        let contracted = contraction_i(&eu, &omega.rep)?;
        let eta = self.dr_project(&contracted.scale(&(Rational::one() / rat(omega.weight as i64))))?;
        let check = self.dr_project(&de_rham_d(&eta.rep))?;
        if check.rep != self.dr_project(&omega.rep)?.rep {
            return Err(NcalcError::InvalidInput(
                "homotopy failed to produce a primitive".into(),
            ));
        }
        Ok(eta)
    }
}

/// Exactness bookkeeping for one weight of the Quillen sequence
/// 0 -> DRbar^0 -d-> DR^1 -b-> Abar -pr-> DRbar^0 -> 0.
#[derive(Clone, Debug, PartialEq)]
pub struct QuillenWeightReport {
    pub weight: usize,
    pub dim_dr0: usize,
    pub dim_dr1: usize,
    pub dim_abar: usize,
    pub rank_d: usize,
    pub rank_b: usize,
    pub rank_pr: usize,
    pub exact: bool,
}

/// Checks exactness of the Quillen sequence for a free algebra at each
/// weight 1..=max_weight.
pub fn quillen_maps(
    ctx: &DrContext,
    max_weight: usize,
) -> Result<Vec<QuillenWeightReport>, NcalcError> {
    let generator_count = match &*ctx.algebra {
        BasedAlgebra::Free { generator_count } => *generator_count,
        BasedAlgebra::FinDim(_) => {
            return Err(NcalcError::InvalidInput(
                "the Quillen sequence is about free algebras".into(),
            ))
        }
    };
    let mut out = Vec::new();
    for w in 1..=max_weight {
        let p0 = ctx.piece(0, w)?;
        let p1 = ctx.piece(1, w)?;
        let words = ctx.piece_basis(0, w)?; // weight-w words, as singleton keys
        let dim_abar = words.len();
        let word_index: BTreeMap<Vec<Atom>, usize> = words
            .iter()
            .enumerate()
            .map(|(i, k)| (k.clone(), i))
            .collect();

        let d_mat = ctx.dr_d_matrix(0, w)?;
        let rank_d = d_mat.rank();

        // b on DR^1 quotient basis, landing in words of weight w
        let mut b_cols = Vec::new();
        for &c in &p1.quotient_cols {
            let mut mono = NCForm::zero(ctx.algebra.clone(), 1);
            mono.add_term(p1.basis[c].clone(), Rational::one());
            let img = hochschild_b(&mono)?;
            let mut v = vec![Rational::zero(); dim_abar];
            for (key, coeff) in &img.terms {
                let i = *word_index.get(key).ok_or_else(|| {
                    NcalcError::InvalidInput("b image escaped the weight window".into())
                })?;
                v[i] = coeff.clone();
            }
            b_cols.push(v);
        }
        let b_mat = transpose_cols(b_cols, dim_abar);
        let rank_b = b_mat.rank();

        // pr: words -> DR^0 quotient coordinates
        let mut pr_cols = Vec::new();
        for key in &words {
            let v = {
                let mut v = vec![Rational::zero(); p0.basis.len()];
                v[*p0.index.get(key).unwrap()] = Rational::one();
                p0.commutators.reduce(v)
            };
            pr_cols.push(
                p0.quotient_cols
                    .iter()
                    .map(|&i| v[i].clone())
                    .collect::<Vec<_>>(),
            );
        }
        let pr_mat = transpose_cols(pr_cols, p0.dr_dim());
        let rank_pr = pr_mat.rank();

        let dim_dr0 = p0.dr_dim();
        let dim_dr1 = p1.dr_dim();
        // composites vanish
        let bd_zero = b_mat.mat_mul(&d_mat).rank() == 0;
        let prb_zero = pr_mat.mat_mul(&b_mat).rank() == 0;
        let exact = rank_d == dim_dr0            // injective at DRbar^0
            && bd_zero
            && dim_dr1 - rank_b == rank_d        // ker b = im d
            && prb_zero
            && dim_abar - rank_pr == rank_b      // ker pr = im b
            && rank_pr == dim_dr0; // surjective at the end
        out.push(QuillenWeightReport {
            weight: w,
            dim_dr0,
            dim_dr1,
            dim_abar,
            rank_d,
            rank_b,
            rank_pr,
            exact,
        });
        let _ = generator_count;
    }
    Ok(out)
}

fn transpose_cols(cols: Vec<Vec<Rational>>, nrows: usize) -> Matrix {
    let ncols = cols.len();
    let mut rows = vec![vec![Rational::zero(); ncols]; nrows];
    for (j, col) in cols.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            rows[i][j] = x.clone();
        }
    }
    Matrix::from_rows(rows, ncols)
}

/// The product of the square-zero extension A (+) Omega^2:
/// (a, omega)(a', omega') = (aa', a omega' + omega a' + da da').
pub fn square_zero_product(
    p1: (&NCForm, &NCForm),
    p2: (&NCForm, &NCForm),
) -> Result<(NCForm, NCForm), NcalcError> {
    let (a, om) = p1;
    let (a2, om2) = p2;
    if a.degree != 0 || a2.degree != 0 || om.degree != 2 || om2.degree != 2 {
        return Err(NcalcError::DegreeError {
            degree: om.degree,
            reason: "square-zero pairs live in degree (0, 2)".into(),
        });
    }
    let prod = form_mul(a, a2)?;
    let cocycle = form_mul(&de_rham_d(a), &de_rham_d(a2))?;
    let two_part = form_mul(a, om2)?
        .add(&form_mul(om, a2)?)?
        .add(&cocycle)?;
    Ok((prod, two_part))
}

/// Result of extending a reduced Hochschild cochain to a bimodule map on
/// Omega^p.
#[derive(Clone, Debug)]
pub enum CocycleExtension {
    /// Matrix of the map Omega^p -> A, columns indexed by the Omega^p
    /// basis (a-bar tuple outer, module slot inner), rows by the A basis.
    BimoduleMap(Matrix),
    /// The cochain is not a cocycle: a witness tuple and the nonzero
    /// value of its differential there.
    Defect {
        args: Vec<usize>,
        value: Vec<Rational>,
    },
}

/// Extends a reduced p-cochain c with values in A to the A-bimodule map
/// Omega^p_nc(A) -> A, a0 da1 .. dap -> a0 c(a1,..,ap), which is well
/// defined exactly when c is a Hochschild cocycle.  Non-cocycles yield
/// the defect instead.
pub fn cocycle_to_polyvector(
    alg: &crate::structure::StructureAlgebra,
    c: &crate::hochschild::Cochain,
) -> Result<CocycleExtension, NcalcError> {
    if c.module_dim != alg.dim {
        return Err(NcalcError::DimensionMismatch {
            expected: alg.dim,
            got: c.module_dim,
        });
    }
    if !c.is_normalized() {
        return Err(NcalcError::InvalidInput(
            "cochain must vanish on tuples containing the unit".into(),
        ));
    }
    let reg = crate::hochschild::Bimodule::regular(alg);
    let dc = crate::hochschild::cochain_differential(alg, &reg, c);
    if let Some((args, value)) = dc.values.iter().next() {
        return Ok(CocycleExtension::Defect {
            args: args.clone(),
            value: value.clone(),
        });
    }
    let p = c.degree;
    let d = alg.dim;
    let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..p {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                (1..d).map(move |v| {
                    let mut t2 = t.clone();
                    t2.push(v);
                    t2
                })
            })
            .collect();
    }
    let mut rows = vec![vec![Rational::zero(); d * tuples.len()]; d];
    for (ti, t) in tuples.iter().enumerate() {
        let val = c.eval(t);
        for x in 0..d {
            let col = ti * d + x;
            let img = alg.mul(&alg.basis_vec(x), &val)?;
            for (r, v) in img.into_iter().enumerate() {
                rows[r][col] = v;
            }
        }
    }
    let ncols = d * tuples.len();
    Ok(CocycleExtension::BimoduleMap(Matrix::from_rows(
        rows, ncols,
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;

    fn free2() -> Rc<BasedAlgebra> {
        Rc::new(BasedAlgebra::free(2))
    }

    fn atom_x() -> Atom {
        Atom::W(Word(vec![0]))
    }
    fn atom_y() -> Atom {
        Atom::W(Word(vec![1]))
    }

    /// x d(y), the standard sample 1-form.
    fn x_dy(alg: &Rc<BasedAlgebra>) -> NCForm {
        let mut f = NCForm::zero(alg.clone(), 1);
        f.add_term(vec![atom_x(), atom_y()], Rational::one());
        f
    }

    fn dx_dy(alg: &Rc<BasedAlgebra>) -> NCForm {
        let mut f = NCForm::zero(alg.clone(), 2);
        f.add_term(vec![alg.unit_atom(), atom_x(), atom_y()], Rational::one());
        f
    }

    #[test]
    fn leibniz_rewrite() {
        let alg = free2();
        // d(x) * y = d(xy) - x d(y)
        let mut dx = NCForm::zero(alg.clone(), 1);
        dx.add_term(vec![alg.unit_atom(), atom_x()], Rational::one());
        let prod = dx.right_mul_atom(&atom_y()).unwrap();
        let mut expect = NCForm::zero(alg.clone(), 1);
        expect.add_term(vec![alg.unit_atom(), Atom::W(Word(vec![0, 1]))], rat(1));
        expect.add_term(vec![atom_x(), atom_y()], rat(-1));
        assert_eq!(prod, expect);

        // a * (b d(c)) = (ab) d(c)
        let b_dc = x_dy(&alg);
        let a = NCForm::from_elem(alg.clone(), &Elem::from_atom(atom_y()));
        let prod = form_mul(&a, &b_dc).unwrap();
        let mut expect = NCForm::zero(alg.clone(), 1);
        expect.add_term(vec![Atom::W(Word(vec![1, 0])), atom_y()], rat(1));
        assert_eq!(prod, expect);

        // (dx dy) x = dx d(yx) - d(xy) dx + x dy dx
        let prod = dx_dy(&alg).right_mul_atom(&atom_x()).unwrap();
        let mut expect = NCForm::zero(alg.clone(), 2);
        expect.add_term(
            vec![alg.unit_atom(), atom_x(), Atom::W(Word(vec![1, 0]))],
            rat(1),
        );
        expect.add_term(
            vec![alg.unit_atom(), Atom::W(Word(vec![0, 1])), atom_x()],
            rat(-1),
        );
        expect.add_term(vec![atom_x(), atom_y(), atom_x()], rat(1));
        assert_eq!(prod, expect);
    }

    #[test]
    fn form_mul_is_associative() {
        let alg = free2();
        let a = x_dy(&alg);
        let b = dx_dy(&alg);
        let mut c = NCForm::zero(alg.clone(), 0);
        c.add_term(vec![Atom::W(Word(vec![1, 0]))], rat(2));
        let left = form_mul(&form_mul(&a, &b).unwrap(), &c).unwrap();
        let right = form_mul(&a, &form_mul(&b, &c).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn d_properties() {
        let alg = free2();
        // d(x dy) = dx dy
        assert_eq!(de_rham_d(&x_dy(&alg)), dx_dy(&alg));
        // d(1) = 0
        assert!(de_rham_d(&NCForm::one(alg.clone())).is_zero());
        // d^2 = 0
        let f = x_dy(&alg);
        assert!(de_rham_d(&de_rham_d(&f)).is_zero());
        // odd derivation: d(ab) = da b + (-1)^{|a|} a db
        let a = x_dy(&alg);
        let b = x_dy(&alg);
        let lhs = de_rham_d(&form_mul(&a, &b).unwrap());
        let rhs = form_mul(&de_rham_d(&a), &b)
            .unwrap()
            .sub(&form_mul(&a, &de_rham_d(&b)).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn b_on_one_forms_is_the_commutator() {
        let alg = free2();
        let b = hochschild_b(&x_dy(&alg)).unwrap();
        let mut expect = NCForm::zero(alg.clone(), 0);
        expect.add_term(vec![Atom::W(Word(vec![0, 1]))], rat(1));
        expect.add_term(vec![Atom::W(Word(vec![1, 0]))], rat(-1));
        assert_eq!(b, expect);
        assert!(hochschild_b(&NCForm::one(alg)).is_err());
    }

    #[test]
    fn b_squares_to_zero() {
        let alg = free2();
        let mut f = NCForm::zero(alg.clone(), 3);
        f.add_term(
            vec![atom_x(), atom_y(), Atom::W(Word(vec![0, 0])), atom_y()],
            rat(3),
        );
        f.add_term(
            vec![alg.unit_atom(), atom_y(), atom_x(), Atom::W(Word(vec![1, 1]))],
            rat(-2),
        );
        let bb = hochschild_b(&hochschild_b(&f).unwrap()).unwrap();
        assert!(bb.is_zero());
    }

    #[test]
    fn karoubi_examples_and_identity() {
        let alg = free2();
        // kappa(x dy) = d(yx) - y dx
        let k = karoubi(&x_dy(&alg)).unwrap();
        let mut expect = NCForm::zero(alg.clone(), 1);
        expect.add_term(vec![alg.unit_atom(), Atom::W(Word(vec![1, 0]))], rat(1));
        expect.add_term(vec![atom_y(), atom_x()], rat(-1));
        assert_eq!(k, expect);

        // db + bd = id - kappa on assorted forms
        for f in [x_dy(&alg), dx_dy(&alg)] {
            let lhs = de_rham_d(&hochschild_b(&f).unwrap())
                .add(&hochschild_b(&de_rham_d(&f)).unwrap())
                .unwrap();
            let rhs = f.sub(&karoubi(&f).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn karoubi_polynomial_identities() {
        let alg = free2();
        let n = 2;
        let mut f = NCForm::zero(alg.clone(), n);
        f.add_term(vec![atom_y(), atom_x(), atom_y()], rat(1));
        f.add_term(vec![alg.unit_atom(), Atom::W(Word(vec![0, 1])), atom_x()], rat(5));
        let kap = |g: &NCForm| karoubi(g).unwrap();
        let pow = |g: &NCForm, k: usize| {
            let mut out = g.clone();
            for _ in 0..k {
                out = kap(&out);
            }
            out
        };
        let kn = pow(&f, n);
        let kn1 = pow(&f, n + 1);
        // kappa^{n+1} d = d on Omega^n
        assert_eq!(pow(&de_rham_d(&f), n + 1), de_rham_d(&f));
        // kappa^n = id + b kappa^n d on Omega^n
        let rhs = f
            .add(&hochschild_b(&pow(&de_rham_d(&f), n)).unwrap())
            .unwrap();
        assert_eq!(kn, rhs);
        // kappa^{n+1} = id - db on Omega^n
        let rhs = f
            .sub(&de_rham_d(&hochschild_b(&f).unwrap()))
            .unwrap();
        assert_eq!(kn1, rhs);
        // (kappa^n - 1)(kappa^{n+1} - 1) = 0
        let a = kn1.sub(&f).unwrap(); // (kappa^{n+1} - 1) f
        assert!(pow(&a, n).sub(&a).unwrap().is_zero());
    }

    #[test]
    fn contraction_and_euler() {
        let alg = free2();
        let eu = DerivationSpec::euler(2);
        // i_eu(dx) = x
        let mut dx = NCForm::zero(alg.clone(), 1);
        dx.add_term(vec![alg.unit_atom(), atom_x()], rat(1));
        let i = contraction_i(&eu, &dx).unwrap();
        assert_eq!(i, NCForm::from_elem(alg.clone(), &Elem::from_atom(atom_x())));
        // i on degree 0 is zero
        assert!(contraction_i(&eu, &NCForm::one(alg.clone()))
            .unwrap()
            .is_zero());
        // i_theta^2 = 0
        let f = dx_dy(&alg);
        let ii = contraction_i(&eu, &contraction_i(&eu, &f).unwrap()).unwrap();
        assert!(ii.is_zero());
    }

    #[test]
    fn lie_derivative_euler_counts_weight() {
        let alg = free2();
        let eu = DerivationSpec::euler(2);
        let f = x_dy(&alg); // weight 2
        let l = lie_derivative(&eu, &f).unwrap();
        assert_eq!(l, f.scale(&rat(2)));
        let g = dx_dy(&alg); // weight 2
        assert_eq!(lie_derivative(&eu, &g).unwrap(), g.scale(&rat(2)));
        assert!(lie_derivative(&eu, &NCForm::one(alg)).unwrap().is_zero());
    }

    #[test]
    fn cartan_bracket_identity() {
        let alg = free2();
        let g = 2;
        // theta: x -> y, y -> x^2 ; gamma: Euler
        let theta = DerivationSpec::free(vec![
            FreePoly::gen(1, g),
            FreePoly::from_word(Word(vec![0, 0]), g),
        ])
        .unwrap();
        let gamma = DerivationSpec::euler(g);
        let br = theta.bracket(&gamma, &alg).unwrap();
        for f in [x_dy(&alg), dx_dy(&alg)] {
            // [L_theta, i_gamma] = i_{[theta, gamma]}
            let lhs = lie_derivative(&theta, &contraction_i(&gamma, &f).unwrap())
                .unwrap()
                .sub(&contraction_i(&gamma, &lie_derivative(&theta, &f).unwrap()).unwrap())
                .unwrap();
            let rhs = contraction_i(&br, &f).unwrap();
            assert_eq!(lhs, rhs);
            // [L_theta, L_gamma] = L_{[theta, gamma]}
            let lhs = lie_derivative(&theta, &lie_derivative(&gamma, &f).unwrap())
                .unwrap()
                .sub(&lie_derivative(&gamma, &lie_derivative(&theta, &f).unwrap()).unwrap())
                .unwrap();
            let rhs = lie_derivative(&br, &f).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn dr_projection_kills_supercommutators() {
        let alg = free2();
        let ctx = DrContext::new(alg.clone());
        // x dy - (dy) x is the supercommutator [x, dy]
        let mut dy = NCForm::zero(alg.clone(), 1);
        dy.add_term(vec![alg.unit_atom(), atom_y()], rat(1));
        let comm = x_dy(&alg).sub(&dy.right_mul_atom(&atom_x()).unwrap()).unwrap();
        assert!(ctx.dr_project(&comm).unwrap().is_zero());
        // dx dy + dy dx = [dx, dy] dies in DR^2
        let mut dy_dx = NCForm::zero(alg.clone(), 2);
        dy_dx.add_term(vec![alg.unit_atom(), atom_y(), atom_x()], rat(1));
        let anti = dx_dy(&alg).add(&dy_dx).unwrap();
        assert!(ctx.dr_project(&anti).unwrap().is_zero());
        // class of x dy survives
        assert!(!ctx.dr_project(&x_dy(&alg)).unwrap().is_zero());
    }

    #[test]
    fn dr_zero_matches_necklaces() {
        let alg = free2();
        let ctx = DrContext::new(alg);
        // dim DR^0 in weight w = number of binary necklaces of length w
        assert_eq!(ctx.piece(0, 1).unwrap().dr_dim(), 2);
        assert_eq!(ctx.piece(0, 2).unwrap().dr_dim(), 3);
        assert_eq!(ctx.piece(0, 3).unwrap().dr_dim(), 4);
        assert_eq!(ctx.piece(0, 4).unwrap().dr_dim(), 6);
    }

    #[test]
    fn dr_cohomology_idempotent_line() {
        let alg = Rc::new(BasedAlgebra::fin_dim(crate::structure::idempotent_line()));
        let ctx = DrContext::new(alg);
        let h = ctx.dr_cohomology_reduced(4, 0).unwrap();
        let dims: Vec<usize> = (0..=4).map(|n| h[&(n, 0)]).collect();
        assert_eq!(dims, vec![1, 0, 1, 0, 1]);
        // the unreduced complex carries one extra constant class
        let h = ctx.dr_cohomology(4, 0).unwrap();
        assert_eq!(h[&(0, 0)], 2);
        // ground field: only the constants survive
        let k = Rc::new(BasedAlgebra::fin_dim(crate::structure::ground_field()));
        let ctx = DrContext::new(k);
        let h = ctx.dr_cohomology(2, 0).unwrap();
        assert_eq!(h[&(0, 0)], 1);
        assert_eq!(h[&(1, 0)], 0);
    }

    #[test]
    fn dr_cohomology_free_is_trivial_positively() {
        let alg = free2();
        let ctx = DrContext::new(alg);
        let h = ctx.dr_cohomology(2, 3).unwrap();
        for ((n, w), d) in &h {
            if *n > 0 && *w > 0 {
                assert_eq!(*d, 0, "H^{} weight {} should vanish", n, w);
            }
        }
        assert_eq!(h[&(0, 0)], 1);
    }

    #[test]
    fn poincare_primitive_inverts_d() {
        let alg = free2();
        let ctx = DrContext::new(alg.clone());
        let omega = ctx.dr_project(&de_rham_d(&x_dy(&alg))).unwrap();
        let eta = ctx.poincare_primitive(&omega).unwrap();
        let again = ctx.dr_project(&de_rham_d(&eta.rep)).unwrap();
        assert_eq!(again.rep, omega.rep);
    }

    #[test]
    fn quillen_sequence_is_exact() {
        for g in [1usize, 2] {
            let alg = Rc::new(BasedAlgebra::free(g));
            let ctx = DrContext::new(alg);
            let cap = if g == 1 { 4 } else { 4 };
            for rep in quillen_maps(&ctx, cap).unwrap() {
                assert!(rep.exact, "not exact at weight {} for g = {}", rep.weight, g);
            }
        }
    }

    #[test]
    fn square_zero_extension() {
        let alg = free2();
        let x = NCForm::from_elem(alg.clone(), &Elem::from_atom(atom_x()));
        let y = NCForm::from_elem(alg.clone(), &Elem::from_atom(atom_y()));
        let z2 = NCForm::zero(alg.clone(), 2);
        // unit
        let one = NCForm::one(alg.clone());
        let (p, q) = square_zero_product((&one, &z2), (&x, &dx_dy(&alg))).unwrap();
        assert_eq!(p, x);
        assert_eq!(q, dx_dy(&alg));
        // (x, 0)(y, 0) = (xy, dx dy)
        let (p, q) = square_zero_product((&x, &z2), (&y, &z2)).unwrap();
        let mut xy = NCForm::zero(alg.clone(), 0);
        xy.add_term(vec![Atom::W(Word(vec![0, 1]))], rat(1));
        assert_eq!(p, xy);
        assert_eq!(q, dx_dy(&alg));
        // associativity on a triple
        let t1 = (&x, &dx_dy(&alg));
        let t2 = (&y, &z2);
        let t3 = (&xy, &dx_dy(&alg));
        let (p12, q12) = square_zero_product(t1, t2).unwrap();
        let l = square_zero_product((&p12, &q12), t3).unwrap();
        let (p23, q23) = square_zero_product(t2, t3).unwrap();
        let r = square_zero_product(t1, (&p23, &q23)).unwrap();
        assert_eq!(l, r);
    }

    /// Applies a cocycle-extension matrix to a finite-dimensional form.
    fn apply_extension(
        map: &Matrix,
        alg: &crate::structure::StructureAlgebra,
        p: usize,
        form: &NCForm,
    ) -> Vec<Rational> {
        let d = alg.dim;
        let mut out = vec![Rational::zero(); d];
        for (key, coeff) in &form.terms {
            let (a0, bars): (usize, Vec<usize>) = match key.split_first() {
                Some((Atom::E(x), rest)) => (
                    *x,
                    rest.iter()
                        .map(|a| match a {
                            Atom::E(i) => *i,
                            _ => panic!("free atom in findim form"),
                        })
                        .collect(),
                ),
                _ => panic!("bad key"),
            };
            let mut tidx = 0;
            for &b in &bars {
                tidx = tidx * (d - 1) + (b - 1);
            }
            assert_eq!(bars.len(), p);
            let col = tidx * d + a0;
            for r in 0..d {
                out[r] += &map.rows[r][col] * coeff;
            }
        }
        out
    }

    #[test]
    fn cocycle_extends_to_bimodule_map() {
        use crate::hochschild::{cochain_differential, Bimodule, Cochain};
        use crate::structure::{dual_numbers_algebra, matrix_units};

        // Euler derivation on k[x]/(x^2)
        let a = dual_numbers_algebra();
        let mut c = Cochain::zero(1, 2);
        c.set(vec![1], a.basis_vec(1));
        let map = match cocycle_to_polyvector(&a, &c).unwrap() {
            CocycleExtension::BimoduleMap(m) => m,
            v => panic!("expected a map, got {:?}", v),
        };
        // right-module property phi(omega . b) = phi(omega) . b
        let based = Rc::new(BasedAlgebra::fin_dim(a.clone()));
        let mut omega = NCForm::zero(based.clone(), 1);
        omega.add_term(vec![Atom::E(0), Atom::E(1)], rat(1)); // dx
        let b = Elem::from_atom(Atom::E(1));
        let lhs = apply_extension(&map, &a, 1, &omega.right_mul_elem(&b).unwrap());
        let rhs = a
            .mul(&apply_extension(&map, &a, 1, &omega), &a.basis_vec(1))
            .unwrap();
        assert_eq!(lhs, rhs);

        // coboundary of E11 in Mat_2(k) gives the inner map
        let m2 = matrix_units(2);
        let reg = Bimodule::regular(&m2);
        let cob = cochain_differential(&m2, &reg, &Cochain::constant(m2.basis_vec(1)));
        // restrict to the normalized part (it is normalized already)
        assert!(cob.is_normalized());
        let map = match cocycle_to_polyvector(&m2, &cob).unwrap() {
            CocycleExtension::BimoduleMap(m) => m,
            v => panic!("expected a map, got {:?}", v),
        };
        let based = Rc::new(BasedAlgebra::fin_dim(m2.clone()));
        for bi in 1..m2.dim {
            for ci in 1..m2.dim {
                let mut omega = NCForm::zero(based.clone(), 1);
                omega.add_term(vec![Atom::E(0), Atom::E(ci)], rat(1));
                let b = Elem::from_atom(Atom::E(bi));
                let lhs = apply_extension(&map, &m2, 1, &omega.right_mul_elem(&b).unwrap());
                let rhs = m2
                    .mul(&apply_extension(&map, &m2, 1, &omega), &m2.basis_vec(bi))
                    .unwrap();
                assert_eq!(lhs, rhs, "bimodule property fails at ({}, {})", bi, ci);
            }
        }

        // a non-cocycle is rejected with its defect
        let a = dual_numbers_algebra();
        let mut bad = Cochain::zero(1, 2);
        bad.set(vec![1], a.unit());
        match cocycle_to_polyvector(&a, &bad).unwrap() {
            CocycleExtension::Defect { args, value } => {
                assert_eq!(args, vec![1, 1]);
                assert!(value.iter().any(|v| !v.is_zero()));
            }
            v => panic!("expected a defect, got {:?}", v),
        }
    }
}
