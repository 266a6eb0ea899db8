//! Words in noncommutative generators and free noncommutative polynomials.

use crate::error::NcalcError;
use crate::scalar::{rat_string, Rational, Scalar};
use num_traits::One;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// A monomial of the free algebra: a finite sequence of 0-based generator
/// indices.  The empty word is the unit.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn gen(i: usize) -> Self {
        Word(vec![i])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Rotation moving the first `k` letters to the end.
    pub fn rotate(&self, k: usize) -> Word {
        let n = self.0.len();
        if n == 0 {
            return self.clone();
        }
        let k = k % n;
        let mut v = Vec::with_capacity(n);
        v.extend_from_slice(&self.0[k..]);
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.iter().copied().max()
    }
}

/// Length-lexicographic order: shorter words first, ties broken
/// lexicographically.  This is the deterministic total order used for all
/// term maps and printed output.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Renders a word using generator names; `1` for the empty word.
pub fn word_string(w: &Word, names: &[String]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.0.iter()
        .map(|&i| {
            names
                .get(i)
                .cloned()
                .unwrap_or_else(|| format!("g{}", i))
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Default generator names x, y, z, w, then x5, x6, ...
pub fn default_gen_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| match i {
            0 => "x".into(),
            1 => "y".into(),
            2 => "z".into(),
            3 => "w".into(),
            _ => format!("x{}", i + 1),
        })
        .collect()
}

/// An element of the free associative algebra on `generator_count`
/// generators: a finite linear combination of words.  Zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreePoly<C: Scalar = Rational> {
    pub terms: BTreeMap<Word, C>,
    pub generator_count: usize,
}

impl<C: Scalar> FreePoly<C> {
    pub fn zero(generator_count: usize) -> Self {
        FreePoly {
            terms: BTreeMap::new(),
            generator_count,
        }
    }

    pub fn one(generator_count: usize) -> Self {
        FreePoly::from_word(Word::empty(), generator_count)
    }

    pub fn gen(i: usize, generator_count: usize) -> Self {
        assert!(i < generator_count, "generator index out of range");
        FreePoly::from_word(Word::gen(i), generator_count)
    }

    pub fn from_word(w: Word, generator_count: usize) -> Self {
        debug_assert!(w.max_index().map_or(true, |m| m < generator_count));
        let mut terms = BTreeMap::new();
        terms.insert(w, C::one());
        FreePoly {
            terms,
            generator_count,
        }
    }

    pub fn scalar(c: C, generator_count: usize) -> Self {
        let mut p = FreePoly::zero(generator_count);
        p.add_term(Word::empty(), c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&w) {
            None => {
                self.terms.insert(w, c);
            }
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(w, sum);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, NcalcError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, NcalcError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        FreePoly {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), -c.clone()))
                .collect(),
            generator_count: self.generator_count,
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = FreePoly::zero(self.generator_count);
        for (w, k) in &self.terms {
            out.add_term(w.clone(), k.clone() * c.clone());
        }
        out
    }

    /// Bilinear extension of word concatenation.
    pub fn mul(&self, other: &Self) -> Result<Self, NcalcError> {
        self.check_compatible(other)?;
        let mut out = FreePoly::zero(self.generator_count);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    /// `ab - ba`.
    pub fn commutator(&self, other: &Self) -> Result<Self, NcalcError> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Largest word length appearing, 0 for the zero polynomial.
    pub fn weight(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    /// The homogeneous part of word length `w`.
    pub fn weight_part(&self, w: usize) -> Self {
        let mut out = FreePoly::zero(self.generator_count);
        for (word, c) in &self.terms {
            if word.len() == w {
                out.add_term(word.clone(), c.clone());
            }
        }
        out
    }

    fn check_compatible(&self, other: &Self) -> Result<(), NcalcError> {
        if self.generator_count != other.generator_count {
            return Err(NcalcError::GeneratorCountMismatch {
                left: self.generator_count,
                right: other.generator_count,
            });
        }
        Ok(())
    }
}

impl FreePoly<Rational> {
    pub fn display(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (w, c) in &self.terms {
            let ws = word_string(w, names);
            let cs = rat_string(c);
            let part = if w.is_empty() {
                cs
            } else if c.is_one() {
                ws
            } else if *c == -Rational::one() {
                format!("-{}", ws)
            } else {
                format!("{}*{}", cs, ws)
            };
            parts.push(part);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Display for FreePoly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(&default_gen_names(self.generator_count)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn x() -> FreePoly {
        FreePoly::gen(0, 2)
    }
    fn y() -> FreePoly {
        FreePoly::gen(1, 2)
    }

    #[test]
    fn concatenation_product() {
        let xy = x().mul(&y()).unwrap();
        assert_eq!(xy, FreePoly::from_word(Word(vec![0, 1]), 2));
    }

    #[test]
    fn bilinearity() {
        // (x+y)(x-y) = x^2 - xy + yx - y^2
        let p = x().add(&y()).unwrap();
        let q = x().sub(&y()).unwrap();
        let prod = p.mul(&q).unwrap();
        let mut expect = FreePoly::zero(2);
        expect.add_term(Word(vec![0, 0]), rat(1));
        expect.add_term(Word(vec![0, 1]), rat(-1));
        expect.add_term(Word(vec![1, 0]), rat(1));
        expect.add_term(Word(vec![1, 1]), rat(-1));
        assert_eq!(prod, expect);
    }

    #[test]
    fn unit_law() {
        let w: FreePoly = FreePoly::from_word(Word(vec![1, 0, 1]), 2);
        assert_eq!(FreePoly::one(2).mul(&w).unwrap(), w);
        assert_eq!(w.mul(&FreePoly::one(2)).unwrap(), w);
    }

    #[test]
    fn commutators() {
        let c = x().commutator(&y()).unwrap();
        let mut expect = FreePoly::zero(2);
        expect.add_term(Word(vec![0, 1]), rat(1));
        expect.add_term(Word(vec![1, 0]), rat(-1));
        assert_eq!(c, expect);
        assert!(x().commutator(&x()).unwrap().is_zero());

        // [xy, x] = xyx - x^2 y, expanded via mul
        let xy = x().mul(&y()).unwrap();
        let c = xy.commutator(&x()).unwrap();
        let mut expect = FreePoly::zero(2);
        expect.add_term(Word(vec![0, 1, 0]), rat(1));
        expect.add_term(Word(vec![0, 0, 1]), rat(-1));
        assert_eq!(c, expect);
    }

    #[test]
    fn generator_count_mismatch_is_an_error() {
        let a = FreePoly::<Rational>::gen(0, 2);
        let b = FreePoly::<Rational>::gen(0, 3);
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn length_lex_order() {
        let mut words = vec![
            Word(vec![1]),
            Word(vec![0, 1]),
            Word::empty(),
            Word(vec![0]),
            Word(vec![1, 0]),
        ];
        words.sort();
        assert_eq!(
            words,
            vec![
                Word::empty(),
                Word(vec![0]),
                Word(vec![1]),
                Word(vec![0, 1]),
                Word(vec![1, 0]),
            ]
        );
    }
}
