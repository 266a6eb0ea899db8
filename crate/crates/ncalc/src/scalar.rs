//! Exact scalar types: arbitrary-precision rationals, polynomials in a
//! central formal parameter `t`, and dual numbers.
//!
//! Everything downstream is linear algebra over these scalars; there is no
//! floating point anywhere in the crate.

use num::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// The ground field: exact rationals with arbitrary-precision integers.
pub type Rational = num::BigRational;

/// Shorthand for a rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for a rational `p/q`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Renders a rational as `p` or `p/q`.
pub fn rat_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q`.
pub fn parse_rat(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().ok()?;
            Some(Rational::from_integer(p))
        }
    }
}

/// Commutative coefficient ring abstraction.
///
/// Implemented by [`Rational`], [`TPoly`] and [`DualScalar`]; linear
/// containers such as `FreePoly` are generic over it.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    fn from_rational(r: Rational) -> Self;
}

impl Scalar for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }
}

/// Polynomial in the central quantization parameter `t` with rational
/// coefficients.  Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TPoly {
    coeffs: BTreeMap<usize, Rational>,
}

impl TPoly {
    pub fn zero() -> Self {
        TPoly::default()
    }

    pub fn constant(r: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !r.is_zero() {
            coeffs.insert(0, r);
        }
        TPoly { coeffs }
    }

    /// The monomial `c * t^k`.
    pub fn monomial(k: usize, c: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        TPoly { coeffs }
    }

    pub fn t() -> Self {
        TPoly::monomial(1, Rational::one())
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    /// Substitution `t := 0`; a ring map.
    pub fn at_zero(&self) -> Rational {
        self.coeff(0)
    }

    /// Exact division by `t`; `None` if the constant term is nonzero.
    pub fn div_t(&self) -> Option<TPoly> {
        if !self.coeff(0).is_zero() {
            return None;
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, c)| (k - 1, c.clone()))
            .collect();
        Some(TPoly { coeffs })
    }

    fn insert(&mut self, k: usize, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(k).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&k);
        }
    }
}

impl Add for TPoly {
    type Output = TPoly;
    fn add(self, rhs: TPoly) -> TPoly {
        let mut out = self;
        for (k, c) in rhs.coeffs {
            out.insert(k, c);
        }
        out
    }
}

impl Sub for TPoly {
    type Output = TPoly;
    fn sub(self, rhs: TPoly) -> TPoly {
        self + (-rhs)
    }
}

impl Neg for TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        TPoly {
            coeffs: self.coeffs.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

impl Mul for TPoly {
    type Output = TPoly;
    fn mul(self, rhs: TPoly) -> TPoly {
        let mut out = TPoly::default();
        for (k1, c1) in &self.coeffs {
            for (k2, c2) in &rhs.coeffs {
                out.insert(k1 + k2, c1 * c2);
            }
        }
        out
    }
}

impl Zero for TPoly {
    fn zero() -> Self {
        TPoly::default()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for TPoly {
    fn one() -> Self {
        TPoly::constant(Rational::one())
    }
}

impl Scalar for TPoly {
    fn from_rational(r: Rational) -> Self {
        TPoly::constant(r)
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", rat_string(c))?,
                1 => write!(f, "({})*t", rat_string(c))?,
                _ => write!(f, "({})*t^{}", rat_string(c), k)?,
            }
        }
        Ok(())
    }
}

/// Dual numbers `a + eps*b` with `eps^2 = 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DualScalar {
    pub value: Rational,
    pub epsilon_part: Rational,
}

impl DualScalar {
    pub fn new(value: Rational, epsilon_part: Rational) -> Self {
        DualScalar {
            value,
            epsilon_part,
        }
    }

    pub fn constant(value: Rational) -> Self {
        DualScalar::new(value, Rational::zero())
    }

    pub fn epsilon() -> Self {
        DualScalar::new(Rational::zero(), Rational::one())
    }
}

impl Add for DualScalar {
    type Output = DualScalar;
    fn add(self, rhs: DualScalar) -> DualScalar {
        DualScalar::new(self.value + rhs.value, self.epsilon_part + rhs.epsilon_part)
    }
}

impl Sub for DualScalar {
    type Output = DualScalar;
    fn sub(self, rhs: DualScalar) -> DualScalar {
        DualScalar::new(self.value - rhs.value, self.epsilon_part - rhs.epsilon_part)
    }
}

impl Neg for DualScalar {
    type Output = DualScalar;
    fn neg(self) -> DualScalar {
        DualScalar::new(-self.value, -self.epsilon_part)
    }
}

impl Mul for DualScalar {
    type Output = DualScalar;
    fn mul(self, rhs: DualScalar) -> DualScalar {
        DualScalar::new(
            &self.value * &rhs.value,
            &self.value * &rhs.epsilon_part + &self.epsilon_part * &rhs.value,
        )
    }
}

impl Zero for DualScalar {
    fn zero() -> Self {
        DualScalar::constant(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.epsilon_part.is_zero()
    }
}

impl One for DualScalar {
    fn one() -> Self {
        DualScalar::constant(Rational::one())
    }
}

impl Scalar for DualScalar {
    fn from_rational(r: Rational) -> Self {
        DualScalar::constant(r)
    }
}

impl fmt::Display for DualScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}*eps",
            rat_string(&self.value),
            rat_string(&self.epsilon_part)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings_round_trip() {
        for s in ["3", "-7/2", "0", "22/7"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(rat_string(&r), s);
        }
        assert!(parse_rat("1/0").is_none());
        assert_eq!(parse_rat("4/2").unwrap(), rat(2));
    }

    #[test]
    fn tpoly_ring_ops() {
        let t = TPoly::t();
        let p = t.clone() * t.clone() + TPoly::constant(rat(3));
        let q = t.clone() - TPoly::one();
        let prod = p.clone() * q.clone();
        // (t^2+3)(t-1) = t^3 - t^2 + 3t - 3
        assert_eq!(prod.coeff(3), rat(1));
        assert_eq!(prod.coeff(2), rat(-1));
        assert_eq!(prod.coeff(1), rat(3));
        assert_eq!(prod.coeff(0), rat(-3));
        // t := 0 is a ring map on this pair
        assert_eq!(prod.at_zero(), p.at_zero() * q.at_zero());
    }

    #[test]
    fn tpoly_div_t() {
        let t = TPoly::t();
        let p = t.clone() * (t.clone() + TPoly::constant(rat(5)));
        assert_eq!(p.div_t().unwrap(), t + TPoly::constant(rat(5)));
        assert!(TPoly::one().div_t().is_none());
    }

    #[test]
    fn dual_numbers_square_zero() {
        let e = DualScalar::epsilon();
        assert!((e.clone() * e).is_zero());
        let a = DualScalar::new(rat(2), rat(3));
        let b = DualScalar::new(rat(5), rat(-1));
        let prod = a * b;
        assert_eq!(prod.value, rat(10));
        assert_eq!(prod.epsilon_part, rat(13)); // 2*(-1) + 3*5
    }
}
