//! A common interface over the two kinds of algebras the forms layer
//! works with: free algebras k<x_1..x_g> (weight-graded, infinite
//! dimensional) and finite-dimensional structure-constant algebras.
//!
//! Both come with a distinguished basis containing the unit, so the
//! complement basis spans a canonical copy of A-bar = A/k inside A.

use crate::error::NcalcError;
use crate::scalar::Rational;
use crate::structure::StructureAlgebra;
use crate::word::{default_gen_names, word_string, FreePoly, Word};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// A distinguished basis element of a BasedAlgebra.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Atom {
    /// A word of the free algebra.
    W(Word),
    /// Index of a basis element of a finite-dimensional algebra.
    E(usize),
}

/// A linear combination of atoms, i.e. an element of the algebra in
/// basis coordinates.  Zero coefficients are never stored.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct Elem {
    pub terms: BTreeMap<Atom, Rational>,
}

impl Elem {
    pub fn zero() -> Self {
        Elem {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_atom(a: Atom) -> Self {
        let mut e = Elem::zero();
        e.add_term(a, Rational::one());
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, a: Atom, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&a) {
            None => {
                self.terms.insert(a, c);
            }
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(a, s);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Elem {
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = Elem::zero();
        for (a, c) in &self.terms {
            out.add_term(a.clone(), c * k);
        }
        out
    }

    pub fn from_free(p: &FreePoly) -> Self {
        let mut e = Elem::zero();
        for (w, c) in &p.terms {
            e.add_term(Atom::W(w.clone()), c.clone());
        }
        e
    }

    pub fn to_free(&self, generator_count: usize) -> Result<FreePoly, NcalcError> {
        let mut p = FreePoly::zero(generator_count);
        for (a, c) in &self.terms {
            match a {
                Atom::W(w) => p.add_term(w.clone(), c.clone()),
                Atom::E(_) => return Err(NcalcError::AlgebraMismatch),
            }
        }
        Ok(p)
    }

    pub fn from_vector(v: &[Rational]) -> Self {
        let mut e = Elem::zero();
        for (i, c) in v.iter().enumerate() {
            e.add_term(Atom::E(i), c.clone());
        }
        e
    }

    pub fn to_vector(&self, dim: usize) -> Result<Vec<Rational>, NcalcError> {
        let mut v = vec![Rational::zero(); dim];
        for (a, c) in &self.terms {
            match a {
                Atom::E(i) if *i < dim => v[*i] = c.clone(),
                _ => return Err(NcalcError::AlgebraMismatch),
            }
        }
        Ok(v)
    }
}

/// An algebra with a distinguished basis adapted to the unit: either a
/// free algebra on finitely many generators (basis = words) or a
/// finite-dimensional structure-constant algebra (basis element 0 is the
/// unit).
#[derive(Clone, PartialEq, Debug)]
pub enum BasedAlgebra {
    Free { generator_count: usize },
    FinDim(StructureAlgebra),
}

impl BasedAlgebra {
    pub fn free(generator_count: usize) -> Self {
        BasedAlgebra::Free { generator_count }
    }

    pub fn fin_dim(a: StructureAlgebra) -> Self {
        BasedAlgebra::FinDim(a)
    }

    pub fn is_free(&self) -> bool {
        matches!(self, BasedAlgebra::Free { .. })
    }

    pub fn unit_atom(&self) -> Atom {
        match self {
            BasedAlgebra::Free { .. } => Atom::W(Word::empty()),
            BasedAlgebra::FinDim(_) => Atom::E(0),
        }
    }

    /// Weight of an atom: word length in the free case, 0 in the
    /// finite-dimensional case (which is not weight-graded).
    pub fn atom_weight(&self, a: &Atom) -> usize {
        match a {
            Atom::W(w) => w.len(),
            Atom::E(_) => 0,
        }
    }

    pub fn atom_name(&self, a: &Atom) -> String {
        match (self, a) {
            (BasedAlgebra::Free { generator_count }, Atom::W(w)) => {
                word_string(w, &default_gen_names(*generator_count))
            }
            (BasedAlgebra::FinDim(s), Atom::E(i)) => s.basis_names[*i].clone(),
            _ => "?".into(),
        }
    }

    fn check_atom(&self, a: &Atom) -> Result<(), NcalcError> {
        match (self, a) {
            (BasedAlgebra::Free { generator_count }, Atom::W(w)) => {
                if w.max_index().map_or(true, |m| m < *generator_count) {
                    Ok(())
                } else {
                    Err(NcalcError::AlgebraMismatch)
                }
            }
            (BasedAlgebra::FinDim(s), Atom::E(i)) => {
                if *i < s.dim {
                    Ok(())
                } else {
                    Err(NcalcError::AlgebraMismatch)
                }
            }
            _ => Err(NcalcError::AlgebraMismatch),
        }
    }

    /// Product of two atoms as an element.
    pub fn atom_mul(&self, a: &Atom, b: &Atom) -> Result<Elem, NcalcError> {
        self.check_atom(a)?;
        self.check_atom(b)?;
        match (self, a, b) {
            (BasedAlgebra::Free { .. }, Atom::W(u), Atom::W(v)) => {
                Ok(Elem::from_atom(Atom::W(u.concat(v))))
            }
            (BasedAlgebra::FinDim(s), Atom::E(i), Atom::E(j)) => {
                Ok(Elem::from_vector(&s.basis_product(*i, *j)))
            }
            _ => unreachable!(),
        }
    }

    /// Bilinear product of elements.
    pub fn mul_elem(&self, a: &Elem, b: &Elem) -> Result<Elem, NcalcError> {
        let mut out = Elem::zero();
        for (x, cx) in &a.terms {
            for (y, cy) in &b.terms {
                let p = self.atom_mul(x, y)?;
                for (z, cz) in p.terms {
                    out.add_term(z, cz * cx * cy);
                }
            }
        }
        Ok(out)
    }

    /// Splits an atom as (unit coefficient, complement-basis part).  The
    /// complement part is the image in A-bar read back inside A.
    pub fn unit_coeff_and_bar(&self, a: &Atom) -> (Rational, Option<Atom>) {
        match a {
            Atom::W(w) => {
                if w.is_empty() {
                    (Rational::one(), None)
                } else {
                    (Rational::zero(), Some(a.clone()))
                }
            }
            Atom::E(i) => {
                if *i == 0 {
                    (Rational::one(), None)
                } else {
                    (Rational::zero(), Some(a.clone()))
                }
            }
        }
    }

    /// The complement (A-bar) basis atoms: in the free case all words of
    /// length 1..=max_weight, in the finite-dimensional case all
    /// non-unit basis elements (max_weight is ignored).
    pub fn complement_atoms(&self, max_weight: usize) -> Vec<Atom> {
        match self {
            BasedAlgebra::Free { generator_count } => {
                let mut out = Vec::new();
                for w in 1..=max_weight {
                    push_words_of_len(*generator_count, w, &mut out);
                }
                out
            }
            BasedAlgebra::FinDim(s) => (1..s.dim).map(Atom::E).collect(),
        }
    }

    /// All basis atoms of the given weight (free case), or the full basis
    /// when the algebra is finite dimensional and w == 0.
    pub fn atoms_of_weight(&self, w: usize) -> Vec<Atom> {
        match self {
            BasedAlgebra::Free { generator_count } => {
                let mut out = Vec::new();
                push_words_of_len(*generator_count, w, &mut out);
                out
            }
            BasedAlgebra::FinDim(s) => {
                if w == 0 {
                    (0..s.dim).map(Atom::E).collect()
                } else {
                    Vec::new()
                }
            }
        }
    }
}

fn push_words_of_len(g: usize, len: usize, out: &mut Vec<Atom>) {
    if len == 0 {
        out.push(Atom::W(Word::empty()));
        return;
    }
    let mut idx = vec![0usize; len];
    loop {
        out.push(Atom::W(Word(idx.clone())));
        let mut p = len;
        while p > 0 {
            p -= 1;
            idx[p] += 1;
            if idx[p] < g {
                break;
            }
            idx[p] = 0;
            if p == 0 {
                return;
            }
        }
        if g == 0 {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::structure::dual_numbers_algebra;

    #[test]
    fn free_atom_products_concatenate() {
        let a = BasedAlgebra::free(2);
        let p = a
            .atom_mul(&Atom::W(Word(vec![0])), &Atom::W(Word(vec![1, 0])))
            .unwrap();
        assert_eq!(p, Elem::from_atom(Atom::W(Word(vec![0, 1, 0]))));
    }

    #[test]
    fn fin_dim_products_use_structure_constants() {
        let a = BasedAlgebra::fin_dim(dual_numbers_algebra());
        // x * x = 0 in k[x]/(x^2)
        let p = a.atom_mul(&Atom::E(1), &Atom::E(1)).unwrap();
        assert!(p.is_zero());
        let u = a.atom_mul(&Atom::E(0), &Atom::E(1)).unwrap();
        assert_eq!(u, Elem::from_atom(Atom::E(1)));
    }

    #[test]
    fn unit_split() {
        let a = BasedAlgebra::free(2);
        let (c, bar) = a.unit_coeff_and_bar(&Atom::W(Word::empty()));
        assert_eq!(c, rat(1));
        assert!(bar.is_none());
        let (c, bar) = a.unit_coeff_and_bar(&Atom::W(Word(vec![1])));
        assert_eq!(c, rat(0));
        assert_eq!(bar, Some(Atom::W(Word(vec![1]))));
    }

    #[test]
    fn weight_enumeration() {
        let a = BasedAlgebra::free(2);
        assert_eq!(a.atoms_of_weight(0).len(), 1);
        assert_eq!(a.atoms_of_weight(3).len(), 8);
        assert_eq!(a.complement_atoms(3).len(), 2 + 4 + 8);
        let b = BasedAlgebra::fin_dim(dual_numbers_algebra());
        assert_eq!(b.complement_atoms(10), vec![Atom::E(1)]);
    }
}
