//! Noncommutative Chern-Weil theory: the Weil algebra W_nc(A) with its
//! differential and Hodge filtration, the Gelfand-Smirnov necklace
//! bracket with Chern classes and transgression, the free-DGA
//! curvature/Bianchi/Chern-Simons machinery, and the commutative Weil
//! algebra W(g) of a Lie algebra with its Cartan calculus.

use crate::error::NcalcError;
use crate::linalg::Matrix;
use crate::multipoly::Mono;
use crate::scalar::{rat, Rational, TPoly};
use crate::structure::{LieAlgebraData, StructureAlgebra};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// A word in the letters of W_nc(A): (dual-basis index, is_plus).
/// Plus letters have degree 2, minus letters degree 1.
pub type WncWord = Vec<(usize, bool)>;

pub fn wnc_word_degree(w: &[(usize, bool)]) -> usize {
    w.iter().map(|&(_, plus)| if plus { 2 } else { 1 }).sum()
}

/// An element of W_nc(A) = T(A*_+ (+) A*_-) over a based algebra of
/// dimension `dim`.
#[derive(Clone, PartialEq, Debug)]
pub struct WncElement {
    pub dim: usize,
    pub terms: BTreeMap<WncWord, Rational>,
}

impl WncElement {
    pub fn zero(dim: usize) -> Self {
        WncElement {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        WncElement::word(dim, Vec::new())
    }

    pub fn word(dim: usize, w: WncWord) -> Self {
        let mut e = WncElement::zero(dim);
        e.add_term(w, Rational::one());
        e
    }

    pub fn minus(dim: usize, k: usize) -> Self {
        WncElement::word(dim, vec![(k, false)])
    }

    pub fn plus(dim: usize, k: usize) -> Self {
        WncElement::word(dim, vec![(k, true)])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: WncWord, c: Rational) {
        debug_assert!(w.iter().all(|&(i, _)| i < self.dim));
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&w) {
            None => {
                self.terms.insert(w, c);
            }
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(w, s);
                }
            }
        }
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
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = WncElement::zero(self.dim);
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, NcalcError> {
        self.check(other)?;
        let mut out = WncElement::zero(self.dim);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, c1 * c2);
            }
        }
        Ok(out)
    }

    fn check(&self, other: &Self) -> Result<(), NcalcError> {
        if self.dim != other.dim {
            return Err(NcalcError::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }
}

/// d_W on a single letter.  With structure constants e_i e_j =
/// sum_k c^k_{ij} e_k and lambda_k the dual basis:
/// d(lambda_-^k) = lambda_+^k + sum c^k_{ij} lambda_-^i lambda_-^j,
/// d(lambda_+^k) = sum c^k_{ij} (lambda_-^i lambda_+^j -
/// lambda_+^i lambda_-^j).  The relative sign in the plus image is
/// forced by d^2 = 0 (the opposite order fails already for A = k).
fn wnc_letter_image(alg: &StructureAlgebra, letter: (usize, bool)) -> Vec<(WncWord, Rational)> {
    let d = alg.dim;
    let (k, plus) = letter;
    let mut out = Vec::new();
    if !plus {
        out.push((vec![(k, true)], Rational::one()));
        for i in 0..d {
            for j in 0..d {
                let c = alg.c(i, j, k);
                if !c.is_zero() {
                    out.push((vec![(i, false), (j, false)], c.clone()));
                }
            }
        }
    } else {
        for i in 0..d {
            for j in 0..d {
                let c = alg.c(i, j, k);
                if !c.is_zero() {
                    out.push((vec![(i, false), (j, true)], c.clone()));
                    out.push((vec![(i, true), (j, false)], -c.clone()));
                }
            }
        }
    }
    out
}

/// The differential d_W of W_nc(A), an odd derivation of degree +1.
pub fn wnc_d(alg: &StructureAlgebra, u: &WncElement) -> Result<WncElement, NcalcError> {
    if alg.dim != u.dim {
        return Err(NcalcError::DimensionMismatch {
            expected: alg.dim,
            got: u.dim,
        });
    }
    let mut out = WncElement::zero(u.dim);
    for (w, c) in &u.terms {
        for t in 0..w.len() {
            let pre_deg = wnc_word_degree(&w[..t]);
            let sign = if pre_deg % 2 == 0 { rat(1) } else { rat(-1) };
            for (img, ic) in wnc_letter_image(alg, w[t]) {
                let mut nw = w[..t].to_vec();
                nw.extend(img);
                nw.extend_from_slice(&w[t + 1..]);
                out.add_term(nw, c * &ic * &sign);
            }
        }
    }
    Ok(out)
}

/// All words of the given total degree over a dim-letter alphabet pair.
pub fn wnc_words(dim: usize, degree: usize) -> Vec<WncWord> {
    if degree == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for k in 0..dim {
        for rest in wnc_words(dim, degree - 1) {
            let mut w = vec![(k, false)];
            w.extend(rest);
            out.push(w);
        }
        if degree >= 2 {
            for rest in wnc_words(dim, degree - 2) {
                let mut w = vec![(k, true)];
                w.extend(rest);
                out.push(w);
            }
        }
    }
    out
}

/// Cohomology dimensions of (W_nc(A), d_W) in degrees 0..=max_degree.
/// The Poincare lemma predicts k in degree 0 and 0 above.
pub fn wnc_cohomology(
    alg: &StructureAlgebra,
    max_degree: usize,
    cap: usize,
) -> Result<Vec<usize>, NcalcError> {
    let mut bases: Vec<Vec<WncWord>> = Vec::with_capacity(max_degree + 2);
    for d in 0..=max_degree + 1 {
        let b = wnc_words(alg.dim, d);
        if b.len() > cap {
            return Err(NcalcError::CapExceeded {
                what: format!("W_nc basis in degree {}", d),
                value: b.len(),
                bound: cap,
            });
        }
        bases.push(b);
    }
    let mut ranks = Vec::with_capacity(max_degree + 1);
    for d in 0..=max_degree {
        let src = &bases[d];
        let tgt = &bases[d + 1];
        let index: BTreeMap<&WncWord, usize> =
            tgt.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut rows = vec![vec![Rational::zero(); src.len()]; tgt.len()];
        for (col, w) in src.iter().enumerate() {
            let img = wnc_d(alg, &WncElement::word(alg.dim, w.clone()))?;
            for (iw, c) in &img.terms {
                rows[index[iw]][col] = c.clone();
            }
        }
        ranks.push(Matrix::from_rows(rows, src.len()).rank());
    }
    let mut dims = Vec::with_capacity(max_degree + 1);
    for d in 0..=max_degree {
        let below = if d == 0 { 0 } else { ranks[d - 1] };
        dims.push(bases[d].len() - ranks[d] - below);
    }
    Ok(dims)
}

// ---- super-cyclic classes --------------------------------------------------

/// Signed rotations of a graded word: moving a prefix of degree p past
/// the remaining degree q costs (-1)^{pq}.
fn rotations_signed(w: &[(usize, bool)]) -> Vec<(WncWord, Rational)> {
    if w.is_empty() {
        return vec![(Vec::new(), Rational::one())];
    }
    let total = wnc_word_degree(w);
    let mut out = Vec::with_capacity(w.len());
    for r in 0..w.len() {
        let pre = wnc_word_degree(&w[..r]);
        let sign = if (pre * (total - pre)) % 2 == 0 {
            Rational::one()
        } else {
            -Rational::one()
        };
        let mut rw = w[r..].to_vec();
        rw.extend_from_slice(&w[..r]);
        out.push((rw, sign));
    }
    out
}

/// Canonical representative of the super-cyclic class: the least
/// rotation with its relative sign; `None` when some rotation returns
/// the word to itself with sign -1 (the class is zero).
pub fn cyclic_canonical(w: &[(usize, bool)]) -> Option<(WncWord, Rational)> {
    let mut seen: BTreeMap<WncWord, Rational> = BTreeMap::new();
    for (rw, s) in rotations_signed(w) {
        match seen.get(&rw) {
            None => {
                seen.insert(rw, s);
            }
            Some(old) => {
                if *old != s {
                    return None;
                }
            }
        }
    }
    let (best, sign) = seen.into_iter().next().expect("nonempty rotation set");
    Some((best, sign))
}

/// An element of R(W_nc(k^n)) = super-cyclic words in letters a_1..a_n
/// (degree 1) and b_1..b_n (degree 2); letter (j, false) is a_j, letter
/// (j, true) is b_j.  Terms are stored on canonical representatives.
#[derive(Clone, PartialEq, Debug)]
pub struct GSElement {
    pub pairs: usize,
    pub terms: BTreeMap<WncWord, Rational>,
}

impl GSElement {
    pub fn zero(pairs: usize) -> Self {
        GSElement {
            pairs,
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(pairs: usize) -> Self {
        let mut e = GSElement::zero(pairs);
        e.add_word(Vec::new(), Rational::one());
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds the class of a free word.
    pub fn add_word(&mut self, w: WncWord, c: Rational) {
        debug_assert!(w.iter().all(|&(i, _)| i < self.pairs));
        if c.is_zero() {
            return;
        }
        if let Some((cw, sign)) = cyclic_canonical(&w) {
            let v = c * sign;
            match self.terms.remove(&cw) {
                None => {
                    self.terms.insert(cw, v);
                }
                Some(old) => {
                    let s = old + v;
                    if !s.is_zero() {
                        self.terms.insert(cw, s);
                    }
                }
            }
        }
    }

    pub fn class_of(pairs: usize, w: WncWord) -> Self {
        let mut e = GSElement::zero(pairs);
        e.add_word(w, Rational::one());
        e
    }

    pub fn add(&self, other: &Self) -> Result<Self, NcalcError> {
        self.check(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_word(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, NcalcError> {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = GSElement::zero(self.pairs);
        for (w, v) in &self.terms {
            out.add_word(w.clone(), v * c);
        }
        out
    }

    fn check(&self, other: &Self) -> Result<(), NcalcError> {
        if self.pairs != other.pairs {
            return Err(NcalcError::DimensionMismatch {
                expected: self.pairs,
                got: other.pairs,
            });
        }
        Ok(())
    }

    /// Degree of the element if homogeneous.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|w| wnc_word_degree(w));
        let first = it.next()?;
        if it.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let letters: Vec<String> = w
                    .iter()
                    .map(|&(j, plus)| {
                        format!("{}{}", if plus { "b" } else { "a" }, j + 1)
                    })
                    .collect();
                let body = if letters.is_empty() {
                    "1".into()
                } else {
                    format!("cyc({})", letters.join(" "))
                };
                if c.is_one() {
                    body
                } else {
                    format!("{} {}", crate::scalar::rat_string(c), body)
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// The differential on R(W_nc(k^n)): d a_j = b_j, d b_j = 0, extended
/// as an odd derivation and projected to classes.
pub fn gs_d(p: &GSElement) -> GSElement {
    let mut out = GSElement::zero(p.pairs);
    for (w, c) in &p.terms {
        for t in 0..w.len() {
            let (j, plus) = w[t];
            if plus {
                continue;
            }
            let pre = wnc_word_degree(&w[..t]);
            let sign = if pre % 2 == 0 { rat(1) } else { rat(-1) };
            let mut nw = w.clone();
            nw[t] = (j, true);
            out.add_word(nw, c * sign);
        }
    }
    out
}

/// Cyclic derivative with respect to one letter: the sum over all
/// signed rotations starting with that letter of the remaining free
/// word.  Lands in the free algebra (a list of words).
fn cyclic_derivative(w: &[(usize, bool)], letter: (usize, bool)) -> Vec<(WncWord, Rational)> {
    let mut out = Vec::new();
    for (rw, s) in rotations_signed(w) {
        if rw.first() == Some(&letter) {
            out.push((rw[1..].to_vec(), s));
        }
    }
    out
}

/// Gelfand-Smirnov necklace bracket:
/// {P,Q} = sum_j (-1)^{deg P} dP/da_j dQ/db_j + dP/db_j dQ/da_j,
/// with cyclic derivatives, products in the free algebra, and the
/// result projected back to classes.  Degree drops by 3.  The signs
/// are the unique parity-dependent choice making the bracket an odd
/// Lie super-bracket (antisymmetry and Jacobi with shifted parity
/// deg + 1) compatible with d = (1/2){sum b_j^2, -}.
pub fn gs_bracket(p: &GSElement, q: &GSElement) -> Result<GSElement, NcalcError> {
    p.check(q)?;
    let n = p.pairs;
    let mut out = GSElement::zero(n);
    for (wp, cp) in &p.terms {
        for (wq, cq) in &q.terms {
            let sign = if wnc_word_degree(wp) % 2 == 0 {
                rat(1)
            } else {
                rat(-1)
            };
            for j in 0..n {
                for (u, su) in cyclic_derivative(wp, (j, false)) {
                    for (v, sv) in cyclic_derivative(wq, (j, true)) {
                        let mut w = u.clone();
                        w.extend_from_slice(&v);
                        out.add_word(w, cp * cq * &su * &sv * &sign);
                    }
                }
                for (u, su) in cyclic_derivative(wp, (j, true)) {
                    for (v, sv) in cyclic_derivative(wq, (j, false)) {
                        let mut w = u.clone();
                        w.extend_from_slice(&v);
                        out.add_word(w, cp * cq * &su * &sv);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// ch_k = sum_j (a_j^2 + b_j)^k as a class; ch_0 is the unit class.
pub fn gs_chern(k: usize, n: usize) -> GSElement {
    if k == 0 {
        return GSElement::unit(n);
    }
    let mut out = GSElement::zero(n);
    for j in 0..n {
        // expand the binomial over noncommuting blocks a_j^2 and b_j
        for mask in 0..(1u64 << k) {
            let mut w = Vec::new();
            for bit in 0..k {
                if mask >> bit & 1 == 1 {
                    w.push((j, true));
                } else {
                    w.push((j, false));
                    w.push((j, false));
                }
            }
            out.add_word(w, Rational::one());
        }
    }
    out
}

/// Report on the Chern classes: closedness and pairwise bracket
/// vanishing up to max_l.
#[derive(Clone, Debug)]
pub struct ChernReport {
    pub closed: bool,
    pub brackets_vanish: bool,
}

pub fn gs_chern_report(k: usize, n: usize, max_l: usize) -> Result<ChernReport, NcalcError> {
    let ch = gs_chern(k, n);
    let closed = gs_d(&ch).is_zero();
    let mut brackets_vanish = true;
    for l in 0..=max_l {
        if !gs_bracket(&ch, &gs_chern(l, n))?.is_zero() {
            brackets_vanish = false;
        }
    }
    Ok(ChernReport {
        closed,
        brackets_vanish,
    })
}

/// All words with `k` copies of the block a^2 and `l` copies of b
/// (the sigma_{k,l}(a^2, b) sum), n = 1 presentation.
fn sigma_words(k: usize, l: usize) -> Vec<WncWord> {
    fn rec(k: usize, l: usize) -> Vec<WncWord> {
        if k == 0 && l == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        if k > 0 {
            for rest in rec(k - 1, l) {
                let mut w = vec![(0, false), (0, false)];
                w.extend(rest);
                out.push(w);
            }
        }
        if l > 0 {
            for rest in rec(k, l - 1) {
                let mut w = vec![(0, true)];
                w.extend(rest);
                out.push(w);
            }
        }
        out
    }
    rec(k, l)
}

/// The transgression class ch^1_k with d(ch^1_k) = ch_k (n = 1):
/// ch^1_k = a * sum_{j=0}^{k-1} k/(k+j) sigma_{j,k-1-j}(a^2, b).
/// The coefficients are forced by the verified identity
/// d(ch^1_k) = ch_k; equivalently ch^1_k = k! cs_{2k-1}.
pub fn gs_transgression(k: usize) -> Result<GSElement, NcalcError> {
    if k == 0 {
        return Err(NcalcError::InvalidInput(
            "transgression needs k >= 1".into(),
        ));
    }
    let mut out = GSElement::zero(1);
    for j in 0..k {
        let denom = rat((k + j) as i64) / rat(k as i64);
        for s in sigma_words(j, k - 1 - j) {
            let mut w = vec![(0, false)];
            w.extend(s);
            out.add_word(w, Rational::one() / denom.clone());
        }
    }
    Ok(out)
}

// ---- Hodge quotient --------------------------------------------------------

fn plus_count(w: &[(usize, bool)]) -> usize {
    w.iter().filter(|&&(_, plus)| plus).count()
}

/// Dimensions and cohomology of the complex R(W_nc(A)/F^p) with the
/// induced differential, in degrees 0..=degree_cap.
#[derive(Clone, Debug)]
pub struct HodgeReport {
    pub piece_dims: Vec<usize>,
    pub cohomology: Vec<usize>,
}

pub fn hodge_quotient(
    alg: &StructureAlgebra,
    p: usize,
    degree_cap: usize,
    cap: usize,
) -> Result<HodgeReport, NcalcError> {
    // canonical super-cyclic representatives with < p plus letters
    let mut bases: Vec<Vec<WncWord>> = Vec::with_capacity(degree_cap + 2);
    for d in 0..=degree_cap + 1 {
        let mut seen = BTreeMap::new();
        for w in wnc_words(alg.dim, d) {
            if plus_count(&w) >= p {
                continue;
            }
            if let Some((cw, _)) = cyclic_canonical(&w) {
                seen.insert(cw, ());
            }
        }
        let b: Vec<WncWord> = seen.into_keys().collect();
        if b.len() > cap {
            return Err(NcalcError::CapExceeded {
                what: format!("Hodge quotient basis in degree {}", d),
                value: b.len(),
                bound: cap,
            });
        }
        bases.push(b);
    }
    let mut ranks = Vec::with_capacity(degree_cap + 1);
    for d in 0..=degree_cap {
        let src = &bases[d];
        let tgt = &bases[d + 1];
        let index: BTreeMap<&WncWord, usize> =
            tgt.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut rows = vec![vec![Rational::zero(); src.len()]; tgt.len()];
        for (col, w) in src.iter().enumerate() {
            let img = wnc_d(alg, &WncElement::word(alg.dim, w.clone()))?;
            // project: drop words in F^p, pass to classes
            let mut cls = GSElement::zero(alg.dim);
            for (iw, c) in &img.terms {
                if plus_count(iw) < p {
                    cls.add_word(iw.clone(), c.clone());
                }
            }
            for (cw, c) in &cls.terms {
                rows[index[cw]][col] = c.clone();
            }
        }
        ranks.push(Matrix::from_rows(rows, src.len()).rank());
    }
    let mut cohomology = Vec::with_capacity(degree_cap + 1);
    for d in 0..=degree_cap {
        let below = if d == 0 { 0 } else { ranks[d - 1] };
        cohomology.push(bases[d].len() - ranks[d] - below);
    }
    Ok(HodgeReport {
        piece_dims: bases[..=degree_cap].iter().map(Vec::len).collect(),
        cohomology,
    })
}

// ---- free DGA and Chern-Simons ---------------------------------------------

/// An element of the free DGA k<alpha, d-alpha>[t] with deg alpha = 1,
/// deg d-alpha = 2; letters: false = alpha, true = d-alpha.  The t
/// parameter supports the interpolation a_t = t alpha.
#[derive(Clone, PartialEq, Debug)]
pub struct DGAElement {
    pub terms: BTreeMap<Vec<bool>, TPoly>,
}

fn dga_word_degree(w: &[bool]) -> usize {
    w.iter().map(|&b| if b { 2 } else { 1 }).sum()
}

impl DGAElement {
    pub fn zero() -> Self {
        DGAElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        let mut e = DGAElement::zero();
        e.add_term(Vec::new(), TPoly::constant(Rational::one()));
        e
    }

    pub fn alpha() -> Self {
        let mut e = DGAElement::zero();
        e.add_term(vec![false], TPoly::constant(Rational::one()));
        e
    }

    pub fn d_alpha() -> Self {
        let mut e = DGAElement::zero();
        e.add_term(vec![true], TPoly::constant(Rational::one()));
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Vec<bool>, c: TPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&w) {
            None => {
                self.terms.insert(w, c);
            }
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(w, s);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&TPoly::constant(rat(-1))))
    }

    pub fn scale(&self, c: &TPoly) -> Self {
        let mut out = DGAElement::zero();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = DGAElement::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, c1.clone() * c2.clone());
            }
        }
        out
    }

    /// The differential: alpha -> d-alpha, d-alpha -> 0, odd derivation;
    /// t is a constant.
    pub fn d(&self) -> Self {
        let mut out = DGAElement::zero();
        for (w, c) in &self.terms {
            for t in 0..w.len() {
                if w[t] {
                    continue;
                }
                let pre = dga_word_degree(&w[..t]);
                let sign = if pre % 2 == 0 { rat(1) } else { rat(-1) };
                let mut nw = w.clone();
                nw[t] = true;
                out.add_term(nw, c.clone() * TPoly::constant(sign));
            }
        }
        out
    }

    /// Super-commutator [u, v] = uv - (-1)^{deg u deg v} vu, termwise.
    pub fn super_commutator(&self, other: &Self) -> Self {
        let mut out = DGAElement::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut uv = w1.clone();
                uv.extend_from_slice(w2);
                out.add_term(uv, c1.clone() * c2.clone());
                let sign = if (dga_word_degree(w1) * dga_word_degree(w2)) % 2 == 0 {
                    rat(-1)
                } else {
                    rat(1)
                };
                let mut vu = w2.clone();
                vu.extend_from_slice(w1);
                out.add_term(vu, c1.clone() * c2.clone() * TPoly::constant(sign));
            }
        }
        out
    }

    /// Projects to R(D) = D/[D,D]; requires t-free coefficients.
    pub fn to_classes(&self) -> Result<GSElement, NcalcError> {
        let mut out = GSElement::zero(1);
        for (w, c) in &self.terms {
            if c.degree() > Some(0) {
                return Err(NcalcError::InvalidInput(
                    "cannot project a t-dependent element to classes".into(),
                ));
            }
            let gw: WncWord = w.iter().map(|&b| (0, b)).collect();
            out.add_word(gw, c.at_zero());
        }
        Ok(out)
    }
}

/// Curvature F = da + a^2 of a degree-1 element of the free DGA.
pub fn dga_curvature(a: &DGAElement) -> Result<DGAElement, NcalcError> {
    for w in a.terms.keys() {
        if dga_word_degree(w) != 1 {
            return Err(NcalcError::DegreeError {
                degree: dga_word_degree(w),
                reason: "curvature needs a degree-1 connection".into(),
            });
        }
    }
    Ok(a.d().add(&a.mul(a)))
}

/// Bianchi defect (d + ad a)F; identically zero.
pub fn dga_bianchi_defect(a: &DGAElement) -> Result<DGAElement, NcalcError> {
    let f = dga_curvature(a)?;
    Ok(f.d().add(&a.super_commutator(&f)))
}

/// The Chern-Simons class cs_{2n-1} = int_0^1 alpha F_t^{n-1}/(n-1)! dt
/// with a_t = t alpha, F_t = t d-alpha + t^2 alpha^2; each t-monomial
/// integrates exactly (t^m -> 1/(m+1)).  Satisfies
/// d(cs_{2n-1}) = F^n/n! in R.
pub fn chern_simons_class(n: usize) -> Result<GSElement, NcalcError> {
    if n == 0 {
        return Err(NcalcError::InvalidInput("Chern-Simons needs n >= 1".into()));
    }
    let a_t = DGAElement::alpha().scale(&TPoly::t());
    let f_t = a_t.d().add(&a_t.mul(&a_t));
    let mut power = DGAElement::one();
    let mut fact = Rational::one();
    for i in 1..n {
        power = power.mul(&f_t);
        fact *= rat(i as i64);
    }
    let integrand = DGAElement::alpha()
        .mul(&power)
        .scale(&TPoly::constant(Rational::one() / fact));
    // integrate t-coefficients over [0, 1]
    let mut integrated = DGAElement::zero();
    for (w, c) in &integrand.terms {
        let mut v = Rational::zero();
        for (m, cm) in c.coeffs() {
            v += cm / rat(m as i64 + 1);
        }
        integrated.add_term(w.clone(), TPoly::constant(v));
    }
    integrated.to_classes()
}

// ---- commutative Weil algebra ----------------------------------------------

/// An element of W(g) = Sym(g*) (x) Lambda(g*) in dual-basis
/// coordinates: terms keyed by (Sym multidegree, strictly increasing
/// Lambda subset).  W-degree of a term = 2|mono| + |subset|.
#[derive(Clone, PartialEq, Debug)]
pub struct WeilElement {
    pub dim: usize,
    pub terms: BTreeMap<(Mono, Vec<usize>), Rational>,
}

impl WeilElement {
    pub fn zero(dim: usize) -> Self {
        WeilElement {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        let mut e = WeilElement::zero(dim);
        e.add_term((vec![0; dim], Vec::new()), Rational::one());
        e
    }

    /// The Sym generator lambda_+ of the k-th dual basis vector.
    pub fn sym_gen(dim: usize, k: usize) -> Self {
        let mut m = vec![0u32; dim];
        m[k] = 1;
        let mut e = WeilElement::zero(dim);
        e.add_term((m, Vec::new()), Rational::one());
        e
    }

    /// The Lambda generator lambda_- of the k-th dual basis vector.
    pub fn ext_gen(dim: usize, k: usize) -> Self {
        let mut e = WeilElement::zero(dim);
        e.add_term((vec![0; dim], vec![k]), Rational::one());
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: (Mono, Vec<usize>), c: Rational) {
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
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = WeilElement::zero(self.dim);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    /// Super-commutative product: Sym parts multiply, Lambda parts wedge
    /// with the Koszul sign.
    pub fn mul(&self, other: &Self) -> Result<Self, NcalcError> {
        self.check(other)?;
        let mut out = WeilElement::zero(self.dim);
        for ((m1, s1), c1) in &self.terms {
            for ((m2, s2), c2) in &other.terms {
                if let Some((s, sign)) = merge_subsets(s1, s2) {
                    let m: Mono = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                    out.add_term((m, s), c1 * c2 * &sign);
                }
            }
        }
        Ok(out)
    }

    fn check(&self, other: &Self) -> Result<(), NcalcError> {
        if self.dim != other.dim {
            return Err(NcalcError::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }

    /// W-degree if homogeneous.
    pub fn wdegree(&self) -> Option<usize> {
        let mut it = self
            .terms
            .keys()
            .map(|(m, s)| 2 * m.iter().sum::<u32>() as usize + s.len());
        let first = it.next()?;
        if it.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }
}

fn merge_subsets(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, Rational)> {
    let mut v: Vec<usize> = a.to_vec();
    v.extend_from_slice(b);
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

/// d_W lambda_- image for generator k: u_k - sum_{i<j} c^k_{ij} xi_i xi_j.
fn weil_d_ext_gen(g: &LieAlgebraData, k: usize) -> WeilElement {
    let n = g.dim;
    let mut out = WeilElement::sym_gen(n, k);
    for i in 0..n {
        for j in i + 1..n {
            let c = g.c(i, j, k);
            if !c.is_zero() {
                out.add_term((vec![0; n], vec![i, j]), -c.clone());
            }
        }
    }
    out
}

/// d_W lambda_+ image for generator k: sum_{i,j} c^k_{ij} u_i xi_j.
fn weil_d_sym_gen(g: &LieAlgebraData, k: usize) -> WeilElement {
    let n = g.dim;
    let mut out = WeilElement::zero(n);
    for i in 0..n {
        for j in 0..n {
            let c = g.c(i, j, k);
            if !c.is_zero() {
                let mut m = vec![0u32; n];
                m[i] = 1;
                out.add_term((m, vec![j]), c.clone());
            }
        }
    }
    out
}

/// The Weil differential d_W = d + partial, an odd derivation with
/// d_W xi_k = u_k - sum_{i<j} c^k_{ij} xi_i xi_j and
/// d_W u_k = sum_{i,j} c^k_{ij} u_i xi_j; d_W^2 = 0 by Jacobi.
pub fn weil_d(g: &LieAlgebraData, u: &WeilElement) -> Result<WeilElement, NcalcError> {
    if g.dim != u.dim {
        return Err(NcalcError::DimensionMismatch {
            expected: g.dim,
            got: u.dim,
        });
    }
    let n = g.dim;
    let mut out = WeilElement::zero(n);
    for ((m, s), c) in &u.terms {
        // Sym factors (even, no position sign)
        for k in 0..n {
            if m[k] == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[k] -= 1;
            let mut base = WeilElement::zero(n);
            base.add_term((m2, s.clone()), c * rat(m[k] as i64));
            out = out.add(&weil_d_sym_gen(g, k).mul(&base)?)?;
        }
        // Lambda factors (odd, alternating position sign)
        for (pos, &sk) in s.iter().enumerate() {
            let sign = if pos % 2 == 0 { rat(1) } else { rat(-1) };
            let rest: Vec<usize> = s
                .iter()
                .enumerate()
                .filter(|(t, _)| *t != pos)
                .map(|(_, v)| *v)
                .collect();
            let mut base = WeilElement::zero(n);
            base.add_term((m.clone(), rest), c * sign);
            out = out.add(&weil_d_ext_gen(g, sk).mul(&base)?)?;
        }
    }
    Ok(out)
}

/// Contraction i_x: kills the Sym part, contracts the Lambda part; an
/// odd derivation of degree -1.
pub fn weil_contraction(x: &[Rational], u: &WeilElement) -> Result<WeilElement, NcalcError> {
    if x.len() != u.dim {
        return Err(NcalcError::DimensionMismatch {
            expected: u.dim,
            got: x.len(),
        });
    }
    let mut out = WeilElement::zero(u.dim);
    for ((m, s), c) in &u.terms {
        for (pos, &sk) in s.iter().enumerate() {
            if x[sk].is_zero() {
                continue;
            }
            let sign = if pos % 2 == 0 { rat(1) } else { rat(-1) };
            let rest: Vec<usize> = s
                .iter()
                .enumerate()
                .filter(|(t, _)| *t != pos)
                .map(|(_, v)| *v)
                .collect();
            out.add_term((m.clone(), rest), c * &x[sk] * sign);
        }
    }
    Ok(out)
}

/// Lie derivative L_x = coadjoint action, an even derivation:
/// L_x xi_k = -sum_l (sum_p x_p c^k_{pl}) xi_l and likewise on u_k.
pub fn weil_lie(g: &LieAlgebraData, x: &[Rational], u: &WeilElement) -> Result<WeilElement, NcalcError> {
    if x.len() != g.dim || g.dim != u.dim {
        return Err(NcalcError::DimensionMismatch {
            expected: g.dim,
            got: u.dim,
        });
    }
    let n = g.dim;
    // coefficient of xi_l (resp. u_l) in L_x of generator k
    let coef = |k: usize, l: usize| -> Rational {
        let mut v = Rational::zero();
        for (p, xp) in x.iter().enumerate() {
            v -= xp * g.c(p, l, k);
        }
        v
    };
    let mut out = WeilElement::zero(n);
    for ((m, s), c) in &u.terms {
        for k in 0..n {
            if m[k] == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[k] -= 1;
            for l in 0..n {
                let v = coef(k, l);
                if v.is_zero() {
                    continue;
                }
                let mut m3 = m2.clone();
                m3[l] += 1;
                out.add_term((m3, s.clone()), c * rat(m[k] as i64) * v);
            }
        }
        for (pos, &sk) in s.iter().enumerate() {
            for l in 0..n {
                let v = coef(sk, l);
                if v.is_zero() {
                    continue;
                }
                let mut s2 = s.clone();
                s2[pos] = l;
                // re-sort the subset with its sign
                if let Some((sorted, sign)) = merge_subsets(&s2, &[]) {
                    out.add_term((m.clone(), sorted), c * &v * &sign);
                }
            }
        }
    }
    Ok(out)
}

/// Both sides of the Cartan formula L_x = d i_x + i_x d on u.
#[derive(Clone, Debug)]
pub struct CartanReport {
    pub lie: WeilElement,
    pub cartan: WeilElement,
    pub agree: bool,
}

pub fn weil_cartan(
    g: &LieAlgebraData,
    x: &[Rational],
    u: &WeilElement,
) -> Result<CartanReport, NcalcError> {
    let lie = weil_lie(g, x, u)?;
    let cartan = weil_d(g, &weil_contraction(x, u)?)?
        .add(&weil_contraction(x, &weil_d(g, u)?)?)?;
    let agree = lie == cartan;
    Ok(CartanReport { lie, cartan, agree })
}

fn monos_of_degree(nvars: usize, total: u32) -> Vec<Mono> {
    if nvars == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in monos_of_degree(nvars - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn subsets_of_size(n: usize, q: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, q: usize) -> Vec<Vec<usize>> {
        if q == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for first in start..n {
            for mut rest in rec(first + 1, n, q - 1) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    rec(0, n, q)
}

fn weil_basis(dim: usize, wdeg: usize) -> Vec<(Mono, Vec<usize>)> {
    let mut out = Vec::new();
    for q in 0..=dim.min(wdeg) {
        if (wdeg - q) % 2 != 0 {
            continue;
        }
        let p = ((wdeg - q) / 2) as u32;
        for m in monos_of_degree(dim, p) {
            for s in subsets_of_size(dim, q) {
                out.push((m.clone(), s));
            }
        }
    }
    out
}

/// Cohomology dimensions of (W(g), d_W) in W-degrees 0..=max_degree;
/// the Poincare lemma predicts k in degree 0 and 0 above.
pub fn weil_cohomology(g: &LieAlgebraData, max_degree: usize) -> Result<Vec<usize>, NcalcError> {
    let mut bases = Vec::with_capacity(max_degree + 2);
    for d in 0..=max_degree + 1 {
        bases.push(weil_basis(g.dim, d));
    }
    let mut ranks = Vec::with_capacity(max_degree + 1);
    for d in 0..=max_degree {
        let src = &bases[d];
        let tgt = &bases[d + 1];
        let index: BTreeMap<&(Mono, Vec<usize>), usize> =
            tgt.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let mut rows = vec![vec![Rational::zero(); src.len()]; tgt.len()];
        for (col, key) in src.iter().enumerate() {
            let mut e = WeilElement::zero(g.dim);
            e.add_term(key.clone(), Rational::one());
            for (ik, c) in &weil_d(g, &e)?.terms {
                rows[index[ik]][col] = c.clone();
            }
        }
        ranks.push(Matrix::from_rows(rows, src.len()).rank());
    }
    let mut dims = Vec::with_capacity(max_degree + 1);
    for d in 0..=max_degree {
        let below = if d == 0 { 0 } else { ranks[d - 1] };
        dims.push(bases[d].len() - ranks[d] - below);
    }
    Ok(dims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{
        abelian_lie, dual_numbers_algebra, ground_field, heisenberg3, sl2, split_semisimple,
    };
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_wnc(rng: &mut ChaCha8Rng, dim: usize, degree: usize) -> WncElement {
        let words = wnc_words(dim, degree);
        let mut e = WncElement::zero(dim);
        for _ in 0..3 {
            let w = words[rng.gen_range(0..words.len())].clone();
            e.add_term(w, rat(rng.gen_range(-2..=2)));
        }
        e
    }

    #[test]
    fn wnc_differential_on_ground_field() {
        let alg = ground_field();
        // d a = b + a^2
        let d = wnc_d(&alg, &WncElement::minus(1, 0)).unwrap();
        let mut expect = WncElement::plus(1, 0);
        expect.add_term(vec![(0, false), (0, false)], rat(1));
        assert_eq!(d, expect);
        // d b = ab - ba
        let d = wnc_d(&alg, &WncElement::plus(1, 0)).unwrap();
        let mut expect = WncElement::zero(1);
        expect.add_term(vec![(0, false), (0, true)], rat(1));
        expect.add_term(vec![(0, true), (0, false)], rat(-1));
        assert_eq!(d, expect);
    }

    #[test]
    fn wnc_d_squared_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for alg in [ground_field(), split_semisimple(2), dual_numbers_algebra()] {
            for deg in 1..=4 {
                let u = rand_wnc(&mut rng, alg.dim, deg);
                let dd = wnc_d(&alg, &wnc_d(&alg, &u).unwrap()).unwrap();
                assert!(dd.is_zero(), "d^2 != 0 on {:?}", u);
            }
        }
    }

    #[test]
    fn wnc_poincare_lemma() {
        for alg in [ground_field(), split_semisimple(2), dual_numbers_algebra()] {
            let dims = wnc_cohomology(&alg, 4, 20_000).unwrap();
            assert_eq!(dims, vec![1, 0, 0, 0, 0], "algebra dim {}", alg.dim);
        }
    }

    #[test]
    fn cyclic_classes() {
        // a^2 dies: rotating a past a gives sign -1
        assert!(cyclic_canonical(&[(0, false), (0, false)]).is_none());
        // ab survives and equals ba
        let ab = GSElement::class_of(1, vec![(0, false), (0, true)]);
        let ba = GSElement::class_of(1, vec![(0, true), (0, false)]);
        assert_eq!(ab, ba);
        assert!(!ab.is_zero());
        // aab = -aba = baa
        let aab = GSElement::class_of(1, vec![(0, false), (0, false), (0, true)]);
        let aba = GSElement::class_of(1, vec![(0, false), (0, true), (0, false)]);
        assert_eq!(aab.scale(&rat(-1)), aba);
    }

    fn rand_gs(rng: &mut ChaCha8Rng, pairs: usize, degree: usize) -> GSElement {
        let words: Vec<WncWord> = wnc_words(pairs, degree);
        let mut e = GSElement::zero(pairs);
        for _ in 0..4 {
            let w = words[rng.gen_range(0..words.len())].clone();
            e.add_word(w, rat(rng.gen_range(-2..=2)));
        }
        e
    }

    #[test]
    fn gs_bracket_examples() {
        // {ab, b} = -b: deg(ab) = 3 is odd, so the first sum carries -1
        let ab = GSElement::class_of(1, vec![(0, false), (0, true)]);
        let b = GSElement::class_of(1, vec![(0, true)]);
        assert_eq!(gs_bracket(&ab, &b).unwrap(), b.clone().scale(&rat(-1)));
        // {P, P} = 0 for odd-degree P
        assert!(gs_bracket(&ab, &ab).unwrap().is_zero());
        // {a, b} = -1, {b, a} = 1
        let a = GSElement::class_of(1, vec![(0, false)]);
        assert_eq!(
            gs_bracket(&a, &b).unwrap(),
            GSElement::unit(1).scale(&rat(-1))
        );
        assert_eq!(gs_bracket(&b, &a).unwrap(), GSElement::unit(1));
    }

    #[test]
    fn gs_bracket_graded_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for pairs in 1..=2usize {
            for _ in 0..4 {
                let dp = rng.gen_range(2..=5usize);
                let dq = rng.gen_range(2..=5usize);
                let dr = rng.gen_range(2..=4usize);
                let p = rand_gs(&mut rng, pairs, dp);
                let q = rand_gs(&mut rng, pairs, dq);
                let r = rand_gs(&mut rng, pairs, dr);
                // odd antisymmetry: {Q,P} = -(-1)^{(p+1)(q+1)} {P,Q}
                let s = if (dp + 1) * (dq + 1) % 2 == 0 { -1 } else { 1 };
                assert_eq!(
                    gs_bracket(&q, &p).unwrap(),
                    gs_bracket(&p, &q).unwrap().scale(&rat(s))
                );
                // graded Jacobi with the shifted parity |P| = p + 1:
                // {P,{Q,R}} = {{P,Q},R} + (-1)^{(p+1)(q+1)} {Q,{P,R}}
                let js = if (dp + 1) * (dq + 1) % 2 == 0 { 1 } else { -1 };
                let lhs = gs_bracket(&p, &gs_bracket(&q, &r).unwrap()).unwrap();
                let rhs = gs_bracket(&gs_bracket(&p, &q).unwrap(), &r)
                    .unwrap()
                    .add(
                        &gs_bracket(&q, &gs_bracket(&p, &r).unwrap())
                            .unwrap()
                            .scale(&rat(js)),
                    )
                    .unwrap();
                assert_eq!(lhs, rhs, "Jacobi fails at degrees ({dp},{dq},{dr})");
            }
        }
    }

    #[test]
    fn gs_differential_is_bracket_with_b_squared() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for pairs in 1..=2usize {
            let mut bsq = GSElement::zero(pairs);
            for j in 0..pairs {
                bsq.add_word(vec![(j, true), (j, true)], Rational::one());
            }
            // d P = (1/2) {sum b_j^2, P}: the 1/2 matches the canonical
            // element normalization d_W(u) = (1/2){Delta, u}
            for deg in 2..=5 {
                let p = rand_gs(&mut rng, pairs, deg);
                assert_eq!(
                    gs_d(&p),
                    gs_bracket(&bsq, &p).unwrap().scale(&(rat(1) / rat(2)))
                );
            }
        }
    }

    #[test]
    fn chern_classes() {
        // ch_0 = unit, ch_1 = class(b)
        assert_eq!(gs_chern(0, 1), GSElement::unit(1));
        assert_eq!(
            gs_chern(1, 1),
            GSElement::class_of(1, vec![(0, true)])
        );
        // closed and mutually commuting
        for k in 0..=3 {
            for n in 1..=2 {
                let rep = gs_chern_report(k, n, 3).unwrap();
                assert!(rep.closed, "d ch_{k} != 0 at n = {n}");
                assert!(rep.brackets_vanish, "ch_{k} brackets at n = {n}");
            }
        }
    }

    #[test]
    fn transgression() {
        // ch^1_1 = a, and d a = b = ch_1
        let t1 = gs_transgression(1).unwrap();
        assert_eq!(t1, GSElement::class_of(1, vec![(0, false)]));
        // ch^1_2 = 2 a(b/2 + a^2/3) = ab + 2 a^3/3
        let t2 = gs_transgression(2).unwrap();
        let mut expect = GSElement::zero(1);
        expect.add_word(vec![(0, false), (0, true)], rat(1));
        expect.add_word(vec![(0, false); 3], rat(2) / rat(3));
        assert_eq!(t2, expect);
        for k in 1..=3 {
            let t = gs_transgression(k).unwrap();
            assert_eq!(gs_d(&t), gs_chern(k, 1), "d ch^1_{k} != ch_{k}");
        }
    }

    #[test]
    fn hodge_quotients_over_ground_field() {
        let alg = ground_field();
        // p = 2: pieces 1, a, b, {a^3, ab}, a^2 b, {a^5, a^3 b};
        // cohomology has cs_3 and cs_5
        let rep = hodge_quotient(&alg, 2, 5, 20_000).unwrap();
        assert_eq!(rep.piece_dims, vec![1, 1, 1, 2, 1, 2]);
        assert_eq!(rep.cohomology, vec![1, 0, 0, 1, 0, 1]);
        // p = 1: only a-words, odd powers survive, d = 0
        let rep = hodge_quotient(&alg, 1, 5, 20_000).unwrap();
        assert_eq!(rep.piece_dims, vec![1, 1, 0, 1, 0, 1]);
        assert_eq!(rep.cohomology, vec![1, 1, 0, 1, 0, 1]);
        // degree-0 piece is the ground field
        assert_eq!(rep.piece_dims[0], 1);
    }

    #[test]
    fn dga_curvature_and_bianchi() {
        let a = DGAElement::alpha();
        let f = dga_curvature(&a).unwrap();
        assert_eq!(f, DGAElement::d_alpha().add(&a.mul(&a)));
        assert!(dga_bianchi_defect(&a).unwrap().is_zero());
        // scaled connections too
        let a2 = a.scale(&TPoly::constant(rat(3)));
        assert!(dga_bianchi_defect(&a2).unwrap().is_zero());
        // F^n is closed in R
        let mut pow = DGAElement::one();
        for n in 1..=3 {
            pow = pow.mul(&f);
            let cls = pow.to_classes().unwrap();
            assert!(gs_d(&cls).is_zero(), "F^{n} not closed in R");
        }
        // degree guard
        assert!(dga_curvature(&DGAElement::d_alpha()).is_err());
    }

    #[test]
    fn chern_simons() {
        // cs_1 = a
        assert_eq!(
            chern_simons_class(1).unwrap(),
            GSElement::class_of(1, vec![(0, false)])
        );
        // cs_3 = ab/2 + a^3/3
        let cs3 = chern_simons_class(2).unwrap();
        let mut expect = GSElement::zero(1);
        expect.add_word(vec![(0, false), (0, true)], rat(1) / rat(2));
        expect.add_word(vec![(0, false); 3], rat(1) / rat(3));
        assert_eq!(cs3, expect);
        // d cs_{2n-1} = F^n / n! = ch_n / n!
        let mut fact = Rational::one();
        for n in 1..=4usize {
            fact *= rat(n as i64);
            let cs = chern_simons_class(n).unwrap();
            assert_eq!(
                gs_d(&cs),
                gs_chern(n, 1).scale(&(Rational::one() / fact.clone())),
                "transgression fails at n = {n}"
            );
        }
    }

    fn rand_weil(rng: &mut ChaCha8Rng, dim: usize, max_wdeg: usize) -> WeilElement {
        let mut e = WeilElement::zero(dim);
        for _ in 0..3 {
            let d = rng.gen_range(0..=max_wdeg);
            let basis = weil_basis(dim, d);
            if basis.is_empty() {
                continue;
            }
            let key = basis[rng.gen_range(0..basis.len())].clone();
            e.add_term(key, rat(rng.gen_range(-2..=2)));
        }
        e
    }

    #[test]
    fn weil_differential() {
        // abelian 1-dim: d xi = u, d u = 0
        let g = abelian_lie(1);
        let d = weil_d(&g, &WeilElement::ext_gen(1, 0)).unwrap();
        assert_eq!(d, WeilElement::sym_gen(1, 0));
        assert!(weil_d(&g, &WeilElement::sym_gen(1, 0)).unwrap().is_zero());
        // d^2 = 0 for sl2 on generators and random elements
        let g = sl2();
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for k in 0..3 {
            let dd = weil_d(&g, &weil_d(&g, &WeilElement::ext_gen(3, k)).unwrap()).unwrap();
            assert!(dd.is_zero());
        }
        for _ in 0..5 {
            let u = rand_weil(&mut rng, 3, 4);
            assert!(weil_d(&g, &weil_d(&g, &u).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn weil_acyclic() {
        assert_eq!(weil_cohomology(&abelian_lie(1), 4).unwrap(), vec![1, 0, 0, 0, 0]);
        assert_eq!(weil_cohomology(&sl2(), 4).unwrap(), vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn weil_invariants_are_closed() {
        // the trace form u_h^2 + u_e u_f of sl2 is basic, hence closed
        let g = sl2();
        let uh = WeilElement::sym_gen(3, 2);
        let ue = WeilElement::sym_gen(3, 0);
        let uf = WeilElement::sym_gen(3, 1);
        let q = uh.mul(&uh).unwrap().add(&ue.mul(&uf).unwrap()).unwrap();
        assert!(weil_d(&g, &q).unwrap().is_zero());
        for x in [&[rat(1), rat(0), rat(0)], &[rat(0), rat(0), rat(1)]] {
            assert!(weil_lie(&g, &x[..], &q).unwrap().is_zero());
            assert!(weil_contraction(&x[..], &q).unwrap().is_zero());
        }
    }

    #[test]
    fn cartan_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        // central element of heisenberg: both sides vanish
        let h3 = heisenberg3();
        let z = [rat(0), rat(0), rat(1)];
        for _ in 0..3 {
            let u = rand_weil(&mut rng, 3, 4);
            let rep = weil_cartan(&h3, &z, &u).unwrap();
            assert!(rep.agree);
            assert!(rep.lie.is_zero());
        }
        // sl2, x = h, u = xi_e: L_h xi_e = -2 xi_e (coadjoint weight)
        let g = sl2();
        let h = [rat(0), rat(0), rat(1)];
        let rep = weil_cartan(&g, &h, &WeilElement::ext_gen(3, 0)).unwrap();
        assert!(rep.agree);
        assert_eq!(rep.lie, WeilElement::ext_gen(3, 0).scale(&rat(-2)));
        // random elements
        for _ in 0..5 {
            let x: Vec<Rational> = (0..3).map(|_| rat(rng.gen_range(-2..=2))).collect();
            let u = rand_weil(&mut rng, 3, 4);
            assert!(weil_cartan(&g, &x, &u).unwrap().agree);
        }
    }
}
