//! Commutative multivariate polynomials over a generic exact coefficient
//! ring, keyed by exponent vectors.
//!
//! Used for `Sym(g)` (Kirillov-Kostant), polynomial phase space (Moyal),
//! and coordinate rings of representation spaces.

use crate::error::NcalcError;
use crate::scalar::{Rational, Scalar};
use num_traits::One;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector of fixed length = number of variables.
pub type Mono = Vec<u32>;

#[derive(Clone, PartialEq, Debug)]
pub struct MultiPoly<C: Scalar = Rational> {
    pub terms: BTreeMap<Mono, C>,
    pub nvars: usize,
}

impl<C: Scalar> MultiPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            terms: BTreeMap::new(),
            nvars,
        }
    }

    pub fn constant(c: C, nvars: usize) -> Self {
        let mut p = MultiPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        MultiPoly::constant(C::one(), nvars)
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        assert!(i < nvars);
        let mut m = vec![0; nvars];
        m[i] = 1;
        let mut p = MultiPoly::zero(nvars);
        p.add_term(m, C::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: C) {
        debug_assert_eq!(m.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, c);
            }
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, NcalcError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, NcalcError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
            nvars: self.nvars,
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = MultiPoly::zero(self.nvars);
        for (m, k) in &self.terms {
            out.add_term(m.clone(), k.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, NcalcError> {
        self.check(other)?;
        let mut out = MultiPoly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Mono = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    /// Commutative partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        assert!(i < self.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[i] = e - 1;
            out.add_term(m2, c.clone() * C::from_rational(crate::scalar::rat(e as i64)));
        }
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = MultiPoly::one(self.nvars);
        for _ in 0..n {
            out = out.mul(self).unwrap();
        }
        out
    }

    fn check(&self, other: &Self) -> Result<(), NcalcError> {
        if self.nvars != other.nvars {
            return Err(NcalcError::DimensionMismatch {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        Ok(())
    }
}

/// Renders a monomial with the given variable names.
pub fn mono_string(m: &Mono, names: &[String]) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                names[i].clone()
            } else {
                format!("{}^{}", names[i], e)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl MultiPoly<Rational> {
    pub fn display(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in &self.terms {
            let ms = mono_string(m, names);
            let cs = crate::scalar::rat_string(c);
            let p = if m.iter().all(|&e| e == 0) {
                cs
            } else if c.is_one() {
                ms
            } else if *c == -Rational::one() {
                format!("-{}", ms)
            } else {
                format!("{}*{}", cs, ms)
            };
            parts.push(p);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl<C: Scalar> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names: Vec<String> = (0..self.nvars).map(|i| format!("v{}", i)).collect();
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:?})*{}", c, mono_string(m, &names))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn ring_ops_and_derivative() {
        let x = MultiPoly::<Rational>::var(0, 2);
        let y = MultiPoly::<Rational>::var(1, 2);
        let p = x.mul(&x).unwrap().add(&x.mul(&y).unwrap()).unwrap();
        let dx = p.derivative(0);
        // d/dx (x^2 + xy) = 2x + y
        let expect = x.scale(&rat(2)).add(&y).unwrap();
        assert_eq!(dx, expect);
        assert!(p.derivative(1).sub(&x).unwrap().is_zero());
    }

    #[test]
    fn pow_and_degree() {
        let x = MultiPoly::<Rational>::var(0, 1);
        let p = x.add(&MultiPoly::one(1)).unwrap().pow(3);
        assert_eq!(p.total_degree(), 3);
        assert_eq!(p.terms.len(), 4);
    }
}
