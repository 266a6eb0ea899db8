//! Cyclic words, the trace space A/[A,A] of a free algebra, cyclic
//! derivatives, the necklace bracket on symplectic generators, and the
//! Kirillov-Kostant bracket on Sym(g).

use crate::error::NcalcError;
use crate::multipoly::MultiPoly;
use crate::scalar::Rational;
use crate::structure::LieAlgebraData;
use crate::word::{word_string, FreePoly, Word};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Rotation class of a word, stored as the lexicographically least
/// rotation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CyclicWord(Word);

impl CyclicWord {
    /// Canonicalizes by taking the least rotation (all rotations have the
    /// same length, so length-lex order is plain lex here).
    pub fn new(w: Word) -> Self {
        let n = w.len();
        let mut best = w.clone();
        for k in 1..n {
            let r = w.rotate(k);
            if r < best {
                best = r;
            }
        }
        CyclicWord(best)
    }

    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// An element of R(A) = A/[A,A] for a free algebra A: a linear
/// combination of cyclic words.
#[derive(Clone, PartialEq, Debug)]
pub struct NecklaceElement {
    pub terms: BTreeMap<CyclicWord, Rational>,
    pub generator_count: usize,
}

impl NecklaceElement {
    pub fn zero(generator_count: usize) -> Self {
        NecklaceElement {
            terms: BTreeMap::new(),
            generator_count,
        }
    }

    pub fn add_term(&mut self, c: CyclicWord, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&c) {
            None => {
                self.terms.insert(c, coeff);
            }
            Some(old) => {
                let s = old + coeff;
                if !s.is_zero() {
                    self.terms.insert(c, s);
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self, NcalcError> {
        self.check(other)?;
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
        NecklaceElement {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), -c.clone()))
                .collect(),
            generator_count: self.generator_count,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = NecklaceElement::zero(self.generator_count);
        for (w, k) in &self.terms {
            out.add_term(w.clone(), k * c);
        }
        out
    }

    pub fn weight(&self) -> usize {
        self.terms.keys().map(CyclicWord::len).max().unwrap_or(0)
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

    pub fn display(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (w, c) in &self.terms {
            let ws = if w.is_empty() {
                "cyc(1)".to_string()
            } else {
                format!("cyc({})", word_string(w.word(), names).replace('*', " "))
            };
            let p = if c.is_one() {
                ws
            } else if *c == -Rational::one() {
                format!("-{}", ws)
            } else {
                format!("{}*{}", crate::scalar::rat_string(c), ws)
            };
            parts.push(p);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Display for NecklaceElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            self.display(&crate::word::default_gen_names(self.generator_count))
        )
    }
}

/// Projection A -> A/[A,A]: each word maps to its rotation class.
pub fn project_cyclic(f: &FreePoly) -> NecklaceElement {
    let mut out = NecklaceElement::zero(f.generator_count);
    for (w, c) in &f.terms {
        out.add_term(CyclicWord::new(w.clone()), c.clone());
    }
    out
}

/// Cyclic partial derivative with respect to generator `i`: for a cyclic
/// word, the sum over occurrences of `x_i` of the word read cyclically
/// starting just after the occurrence.
pub fn cyclic_derivative(f: &NecklaceElement, i: usize) -> Result<FreePoly, NcalcError> {
    if i >= f.generator_count {
        return Err(NcalcError::IndexOutOfRange {
            index: i,
            bound: f.generator_count,
        });
    }
    let mut out = FreePoly::zero(f.generator_count);
    for (cw, c) in &f.terms {
        let w = cw.word();
        let n = w.len();
        for pos in 0..n {
            if w.0[pos] != i {
                continue;
            }
            // read cyclically starting just after position pos, dropping
            // the occurrence itself
            let mut v = Vec::with_capacity(n - 1);
            for k in 1..n {
                v.push(w.0[(pos + k) % n]);
            }
            out.add_term(Word(v), c.clone());
        }
    }
    Ok(out)
}

/// Symplectic generator layout: generators 0..n-1 are x_1..x_n,
/// generators n..2n-1 are y_1..y_n, with {x_i, y_i} = 1.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SymplecticLayout {
    pub n: usize,
}

impl SymplecticLayout {
    pub fn new(n: usize) -> Self {
        SymplecticLayout { n }
    }

    pub fn generator_count(&self) -> usize {
        2 * self.n
    }

    pub fn x(&self, i: usize) -> usize {
        debug_assert!(i < self.n);
        i
    }

    pub fn y(&self, i: usize) -> usize {
        debug_assert!(i < self.n);
        self.n + i
    }

    pub fn names(&self) -> Vec<String> {
        (0..self.n)
            .map(|i| format!("x{}", i + 1))
            .chain((0..self.n).map(|i| format!("y{}", i + 1)))
            .collect()
    }
}

/// Necklace bracket
/// `{f,g} = sum_i pr( df/dx_i * dg/dy_i - df/dy_i * dg/dx_i )`.
pub fn necklace_bracket(
    f: &NecklaceElement,
    g: &NecklaceElement,
    layout: &SymplecticLayout,
) -> Result<NecklaceElement, NcalcError> {
    if f.generator_count != layout.generator_count() || g.generator_count != layout.generator_count()
    {
        return Err(NcalcError::AlgebraMismatch);
    }
    let mut out = NecklaceElement::zero(f.generator_count);
    for i in 0..layout.n {
        let fx = cyclic_derivative(f, layout.x(i))?;
        let gy = cyclic_derivative(g, layout.y(i))?;
        let fy = cyclic_derivative(f, layout.y(i))?;
        let gx = cyclic_derivative(g, layout.x(i))?;
        let term = fx.mul(&gy)?.sub(&fy.mul(&gx)?)?;
        out = out.add(&project_cyclic(&term))?;
    }
    Ok(out)
}

/// Hamiltonian derivation of the free algebra attached to a necklace
/// element: `x_i -> -df/dy_i`, `y_i -> df/dx_i`, returned as the list of
/// generator images.  The sign is fixed by requiring that applying the
/// derivation to (the class of) g reproduces `{f, g}`.
pub fn hamiltonian_field(
    f: &NecklaceElement,
    layout: &SymplecticLayout,
) -> Result<Vec<FreePoly>, NcalcError> {
    if f.generator_count != layout.generator_count() {
        return Err(NcalcError::AlgebraMismatch);
    }
    let mut images = Vec::with_capacity(layout.generator_count());
    for i in 0..layout.n {
        images.push(cyclic_derivative(f, layout.y(i))?.neg());
    }
    for i in 0..layout.n {
        images.push(cyclic_derivative(f, layout.x(i))?);
    }
    Ok(images)
}

/// Applies a derivation given by generator images to a free polynomial
/// (Leibniz over each letter of each word).
pub fn apply_derivation(images: &[FreePoly], p: &FreePoly) -> Result<FreePoly, NcalcError> {
    if images.len() != p.generator_count {
        return Err(NcalcError::GeneratorCountMismatch {
            left: images.len(),
            right: p.generator_count,
        });
    }
    let n = p.generator_count;
    let mut out = FreePoly::zero(n);
    for (w, c) in &p.terms {
        for pos in 0..w.len() {
            let left = FreePoly::from_word(Word(w.0[..pos].to_vec()), n);
            let right = FreePoly::from_word(Word(w.0[pos + 1..].to_vec()), n);
            let mid = &images[w.0[pos]];
            let term = left.mul(mid)?.mul(&right)?.scale(c);
            out = out.add(&term)?;
        }
    }
    Ok(out)
}

/// Commutator of two derivations given by generator images.
pub fn derivation_bracket(
    a: &[FreePoly],
    b: &[FreePoly],
) -> Result<Vec<FreePoly>, NcalcError> {
    let mut out = Vec::with_capacity(a.len());
    for i in 0..a.len() {
        let ab = apply_derivation(a, &b[i])?;
        let ba = apply_derivation(b, &a[i])?;
        out.push(ab.sub(&ba)?);
    }
    Ok(out)
}

/// An element of Sym(g) as a commutative polynomial in the Lie basis
/// variables.
pub type SymPoly = MultiPoly<Rational>;

/// Kirillov-Kostant bracket
/// `{f,g} = sum_{i,j,k} c_{ij}^k (df/dx_i)(dg/dx_j) x_k`.
pub fn kirillov_kostant(
    f: &SymPoly,
    g: &SymPoly,
    glie: &LieAlgebraData,
) -> Result<SymPoly, NcalcError> {
    let n = glie.dim;
    if f.nvars != n || g.nvars != n {
        return Err(NcalcError::DimensionMismatch {
            expected: n,
            got: f.nvars.max(g.nvars),
        });
    }
    let mut out = SymPoly::zero(n);
    for i in 0..n {
        let fi = f.derivative(i);
        if fi.is_zero() {
            continue;
        }
        for j in 0..n {
            let gj = g.derivative(j);
            if gj.is_zero() {
                continue;
            }
            let prod = fi.mul(&gj)?;
            for k in 0..n {
                let c = glie.c(i, j, k);
                if c.is_zero() {
                    continue;
                }
                let xk = SymPoly::var(k, n);
                out = out.add(&prod.mul(&xk)?.scale(c))?;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::structure::{heisenberg3, sl2};

    fn fp(words: &[(&[usize], i64)], n: usize) -> FreePoly {
        let mut p = FreePoly::zero(n);
        for (w, c) in words {
            p.add_term(Word(w.to_vec()), rat(*c));
        }
        p
    }

    #[test]
    fn commutators_die() {
        let x = FreePoly::gen(0, 2);
        let y = FreePoly::gen(1, 2);
        let c = x.commutator(&y).unwrap();
        assert!(project_cyclic(&c).is_zero());
    }

    #[test]
    fn rotation_classes() {
        let xy = fp(&[(&[0, 1], 1)], 2);
        let yx = fp(&[(&[1, 0], 1)], 2);
        assert_eq!(project_cyclic(&xy), project_cyclic(&yx));
        // least rotation of xyx is xxy
        let xyx = fp(&[(&[0, 1, 0], 1)], 2);
        let cls = project_cyclic(&xyx);
        let key = cls.terms.keys().next().unwrap();
        assert_eq!(key.word(), &Word(vec![0, 0, 1]));
    }

    #[test]
    fn trace_property_random() {
        // project_cyclic(ab) = project_cyclic(ba) on a small sweep
        let words: Vec<Word> = vec![
            Word(vec![0]),
            Word(vec![1]),
            Word(vec![0, 1]),
            Word(vec![1, 1, 0]),
        ];
        for wa in &words {
            for wb in &words {
                let a = FreePoly::from_word(wa.clone(), 2);
                let b = FreePoly::from_word(wb.clone(), 2);
                let ab = a.mul(&b).unwrap();
                let ba = b.mul(&a).unwrap();
                assert_eq!(project_cyclic(&ab), project_cyclic(&ba));
            }
        }
    }

    #[test]
    fn cyclic_derivatives() {
        // d(x^2)/dx = 2x
        let f = project_cyclic(&fp(&[(&[0, 0], 1)], 2));
        assert_eq!(cyclic_derivative(&f, 0).unwrap(), fp(&[(&[0], 2)], 2));
        // d(xy)/dx = y
        let f = project_cyclic(&fp(&[(&[0, 1], 1)], 2));
        assert_eq!(cyclic_derivative(&f, 0).unwrap(), fp(&[(&[1], 1)], 2));
        // d(y^3)/dx = 0
        let f = project_cyclic(&fp(&[(&[1, 1, 1], 1)], 2));
        assert!(cyclic_derivative(&f, 0).unwrap().is_zero());
        // index out of range
        assert!(cyclic_derivative(&f, 5).is_err());
    }

    #[test]
    fn poincare_sum_vanishes() {
        // sum_i pr([df/dx_i, x_i]) = 0
        let f = project_cyclic(&fp(&[(&[0, 1, 0, 1], 1), (&[0, 0, 1], -2)], 2));
        let mut total = NecklaceElement::zero(2);
        for i in 0..2 {
            let di = cyclic_derivative(&f, i).unwrap();
            let xi = FreePoly::gen(i, 2);
            let c = di.commutator(&xi).unwrap();
            total = total.add(&project_cyclic(&c)).unwrap();
        }
        assert!(total.is_zero());
    }

    #[test]
    fn bracket_basics() {
        let layout = SymplecticLayout::new(1);
        let x = project_cyclic(&FreePoly::gen(0, 2));
        let y = project_cyclic(&FreePoly::gen(1, 2));
        // {x, y} = 1 (class of the empty word)
        let b = necklace_bracket(&x, &y, &layout).unwrap();
        let mut one = NecklaceElement::zero(2);
        one.add_term(CyclicWord::new(Word::empty()), rat(1));
        assert_eq!(b, one);
        // {f, f} = 0
        let f = project_cyclic(&fp(&[(&[0, 0, 1], 1)], 2));
        assert!(necklace_bracket(&f, &f, &layout).unwrap().is_zero());
        // {x^2, y^2} = 4 cyc(xy)
        let x2 = project_cyclic(&fp(&[(&[0, 0], 1)], 2));
        let y2 = project_cyclic(&fp(&[(&[1, 1], 1)], 2));
        let b = necklace_bracket(&x2, &y2, &layout).unwrap();
        let expect = project_cyclic(&fp(&[(&[0, 1], 4)], 2));
        assert_eq!(b, expect);
    }

    #[test]
    fn hamiltonian_images() {
        let layout = SymplecticLayout::new(1);
        // f = xy: theta(x) = -x, theta(y) = y
        let f = project_cyclic(&fp(&[(&[0, 1], 1)], 2));
        let th = hamiltonian_field(&f, &layout).unwrap();
        assert_eq!(th[0], fp(&[(&[0], -1)], 2));
        assert_eq!(th[1], fp(&[(&[1], 1)], 2));
        // f = 1: zero field
        let mut one = NecklaceElement::zero(2);
        one.add_term(CyclicWord::new(Word::empty()), rat(1));
        let th = hamiltonian_field(&one, &layout).unwrap();
        assert!(th.iter().all(FreePoly::is_zero));
        // f = x^2: theta(x) = 0, theta(y) = 2x
        let f = project_cyclic(&fp(&[(&[0, 0], 1)], 2));
        let th = hamiltonian_field(&f, &layout).unwrap();
        assert!(th[0].is_zero());
        assert_eq!(th[1], fp(&[(&[0], 2)], 2));
    }

    #[test]
    fn hamiltonian_reproduces_bracket() {
        let layout = SymplecticLayout::new(1);
        let f = project_cyclic(&fp(&[(&[0, 0, 1], 1)], 2));
        let g = project_cyclic(&fp(&[(&[0, 1, 1], 1), (&[1], 2)], 2));
        let th = hamiltonian_field(&f, &layout).unwrap();
        // theta_f applied to any representative of g, then projected
        let g_rep = fp(&[(&[0, 1, 1], 1), (&[1], 2)], 2);
        let lhs = project_cyclic(&apply_derivation(&th, &g_rep).unwrap());
        let rhs = necklace_bracket(&f, &g, &layout).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn kirillov_kostant_sl2() {
        let g = sl2();
        // variables e=0, f=1, h=2
        let e = SymPoly::var(0, 3);
        let f = SymPoly::var(1, 3);
        let h = SymPoly::var(2, 3);
        // {e, f} = h
        assert_eq!(kirillov_kostant(&e, &f, &g).unwrap(), h);
        // {f, f} = 0
        assert!(kirillov_kostant(&f, &f, &g).unwrap().is_zero());
        // {e*f, h} = 0
        let ef = e.mul(&f).unwrap();
        assert!(kirillov_kostant(&ef, &h, &g).unwrap().is_zero());
    }

    #[test]
    fn kirillov_kostant_leibniz_heisenberg() {
        let g = heisenberg3();
        let x = SymPoly::var(0, 3);
        let y = SymPoly::var(1, 3);
        let z = SymPoly::var(2, 3);
        let xy = x.mul(&y).unwrap();
        // {x, yz}: Leibniz gives {x,y}z + y{x,z} = z*z
        let yz = y.mul(&z).unwrap();
        let lhs = kirillov_kostant(&x, &yz, &g).unwrap();
        let rhs = z.mul(&z).unwrap();
        assert_eq!(lhs, rhs);
        // {xy, x} = {y,x}x = -zx
        let lhs = kirillov_kostant(&xy, &x, &g).unwrap();
        let rhs = z.mul(&x).unwrap().neg();
        assert_eq!(lhs, rhs);
    }
}
