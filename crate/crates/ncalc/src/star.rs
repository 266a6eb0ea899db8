//! Moyal star product on polynomial phase space, the Weyl algebra in
//! normal form, PBW symmetrization and its inverse, and leading-order
//! Poisson extraction from a star commutator.
//!
//! Phase space has 2n canonical coordinates laid out x1..xn, y1..yn with
//! {x_i, y_j} = delta_ij; the quantization parameter t is a central
//! polynomial variable, never a specialized number.

use crate::error::NcalcError;
use crate::multipoly::{mono_string, Mono, MultiPoly};
use crate::scalar::{rat, Rational, TPoly};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// A polynomial on phase space with coefficients in Q[t].
pub type PhasePoly = MultiPoly<TPoly>;

/// Number of canonical pairs of a phase polynomial.
pub fn pair_count(f: &PhasePoly) -> Result<usize, NcalcError> {
    if f.nvars % 2 != 0 {
        return Err(NcalcError::DimensionMismatch {
            expected: f.nvars + 1,
            got: f.nvars,
        });
    }
    Ok(f.nvars / 2)
}

/// The coordinate x_i (0-based) on phase space with n pairs.
pub fn phase_x(i: usize, pairs: usize) -> PhasePoly {
    MultiPoly::var(i, 2 * pairs)
}

/// The coordinate y_i (0-based) on phase space with n pairs.
pub fn phase_y(i: usize, pairs: usize) -> PhasePoly {
    MultiPoly::var(pairs + i, 2 * pairs)
}

/// Variable names x1..xn, y1..yn.
pub fn phase_var_names(pairs: usize) -> Vec<String> {
    (0..pairs)
        .map(|i| format!("x{}", i + 1))
        .chain((0..pairs).map(|i| format!("y{}", i + 1)))
        .collect()
}

fn factorial(n: u32) -> Rational {
    (1..=n as i64).map(rat).product()
}

fn binom(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Moyal star product f * g = m(e^{(t/2)pi}(f (x) g)) with
/// pi = sum_i (d_{x_i} (x) d_{y_i} - d_{y_i} (x) d_{x_i}).
/// The series terminates because pi lowers total degree.
pub fn moyal_star(f: &PhasePoly, g: &PhasePoly) -> Result<PhasePoly, NcalcError> {
    if f.nvars != g.nvars {
        return Err(NcalcError::DimensionMismatch {
            expected: f.nvars,
            got: g.nvars,
        });
    }
    let n = pair_count(f)?;
    let mut out = MultiPoly::zero(f.nvars);
    let mut tensors: Vec<(PhasePoly, PhasePoly)> = vec![(f.clone(), g.clone())];
    let mut d: usize = 0;
    loop {
        // c_d = (1/2)^d / d! * t^d
        let c = TPoly::monomial(
            d,
            Rational::one() / (factorial(d as u32) * rat(2).pow(d as i32)),
        );
        for (a, b) in &tensors {
            out = out.add(&a.mul(b)?.scale(&c))?;
        }
        let mut next = Vec::new();
        for (a, b) in &tensors {
            for i in 0..n {
                let ax = a.derivative(i);
                let by = b.derivative(n + i);
                if !ax.is_zero() && !by.is_zero() {
                    next.push((ax, by));
                }
                let ay = a.derivative(n + i);
                let bx = b.derivative(i);
                if !ay.is_zero() && !bx.is_zero() {
                    next.push((ay.neg(), bx));
                }
            }
        }
        if next.is_empty() {
            return Ok(out);
        }
        tensors = next;
        d += 1;
    }
}

/// An element of the Weyl algebra A_t(n) = k<p_i, q_i>[t] / (p_i q_i -
/// q_i p_i = t, cross-pair letters commute), stored in normal form: each
/// monomial has all p-letters left of q-letters per pair, pairs in index
/// order.  Exponent layout matches phase space: p1..pn, q1..qn.
#[derive(Clone, PartialEq, Debug)]
pub struct WeylElement {
    pub pairs: usize,
    pub terms: BTreeMap<Mono, TPoly>,
}

impl WeylElement {
    pub fn zero(pairs: usize) -> Self {
        WeylElement {
            pairs,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(pairs: usize) -> Self {
        let mut w = WeylElement::zero(pairs);
        w.add_term(vec![0; 2 * pairs], TPoly::constant(Rational::one()));
        w
    }

    pub fn p(i: usize, pairs: usize) -> Self {
        let mut m = vec![0; 2 * pairs];
        m[i] = 1;
        let mut w = WeylElement::zero(pairs);
        w.add_term(m, TPoly::constant(Rational::one()));
        w
    }

    pub fn q(i: usize, pairs: usize) -> Self {
        let mut m = vec![0; 2 * pairs];
        m[pairs + i] = 1;
        let mut w = WeylElement::zero(pairs);
        w.add_term(m, TPoly::constant(Rational::one()));
        w
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: TPoly) {
        debug_assert_eq!(m.len(), 2 * self.pairs);
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
        self.add(&other.scale(&TPoly::constant(rat(-1))))
    }

    pub fn scale(&self, c: &TPoly) -> Self {
        let mut out = WeylElement::zero(self.pairs);
        for (m, k) in &self.terms {
            out.add_term(m.clone(), k.clone() * c.clone());
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

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let names: Vec<String> = (0..self.pairs)
            .map(|i| format!("p{}", i + 1))
            .chain((0..self.pairs).map(|i| format!("q{}", i + 1)))
            .collect();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({}) {}", tpoly_string(c), mono_string(m, &names)))
            .collect();
        parts.join(" + ")
    }
}

/// Renders a TPoly like "1 - 1/2 t + t^2".
pub fn tpoly_string(p: &TPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (k, c) in p.coeffs() {
        let cs = crate::scalar::rat_string(c);
        let s = match k {
            0 => cs,
            1 if c.is_one() => "t".into(),
            1 => format!("{} t", cs),
            _ if c.is_one() => format!("t^{}", k),
            _ => format!("{} t^{}", cs, k),
        };
        parts.push(s);
    }
    parts.join(" + ").replace("+ -", "- ")
}

/// Product in the Weyl algebra.  Per pair the reordering is
/// q^b p^c = sum_k C(b,k) C(c,k) k! (-t)^k p^{c-k} q^{b-k}.
pub fn weyl_mul(u: &WeylElement, v: &WeylElement) -> Result<WeylElement, NcalcError> {
    u.check(v)?;
    let n = u.pairs;
    let mut out = WeylElement::zero(n);
    for (m1, c1) in &u.terms {
        for (m2, c2) in &v.terms {
            // per-pair reorder choices: (k, combinatorial coefficient)
            let mut partial: Vec<(Mono, Rational, usize)> =
                vec![(vec![0; 2 * n], Rational::one(), 0)];
            for i in 0..n {
                let (a, b) = (m1[i], m1[n + i]);
                let (c, d) = (m2[i], m2[n + i]);
                let mut next = Vec::new();
                for k in 0..=b.min(c) {
                    let coeff = binom(b, k) * binom(c, k) * factorial(k)
                        * if k % 2 == 0 { rat(1) } else { rat(-1) };
                    for (m, w, tp) in &partial {
                        let mut m = m.clone();
                        m[i] = a + c - k;
                        m[n + i] = b + d - k;
                        next.push((m, w * &coeff, tp + k as usize));
                    }
                }
                partial = next;
            }
            for (m, w, tp) in partial {
                out.add_term(m, c1.clone() * c2.clone() * TPoly::monomial(tp, w));
            }
        }
    }
    Ok(out)
}

/// PBW symmetrization sigma: k[V][t] -> A_t(V), sending a monomial to the
/// average of the Weyl products of its letters over all orderings.
/// Computed pair by pair (cross-pair letters commute, so sigma is
/// multiplicative across pairs).
pub fn pbw_symmetrize(f: &PhasePoly) -> Result<WeylElement, NcalcError> {
    let n = pair_count(f)?;
    let mut out = WeylElement::zero(n);
    for (m, c) in &f.terms {
        let mut acc = WeylElement::one(n);
        for i in 0..n {
            acc = weyl_mul(&acc, &symmetrize_pair(m[i], m[n + i], i, n))?;
        }
        out = out.add(&acc.scale(c))?;
    }
    Ok(out)
}

/// sigma(x^a y^b) for a single pair: average of Weyl products over all
/// distinct letter sequences (each distinct sequence is equally likely).
fn symmetrize_pair(a: u32, b: u32, pair: usize, pairs: usize) -> WeylElement {
    if a == 0 && b == 0 {
        return WeylElement::one(pairs);
    }
    let total = a + b;
    let mut sum = WeylElement::zero(pairs);
    let mut count = 0i64;
    // sequences = subsets of positions carrying the p letters
    let mut choose = vec![false; total as usize];
    fn rec(
        choose: &mut Vec<bool>,
        pos: usize,
        left_p: u32,
        pair: usize,
        pairs: usize,
        sum: &mut WeylElement,
        count: &mut i64,
    ) {
        let remaining = choose.len() - pos;
        if (remaining as u32) < left_p {
            return;
        }
        if pos == choose.len() {
            let mut acc = WeylElement::one(pairs);
            for &is_p in choose.iter() {
                let letter = if is_p {
                    WeylElement::p(pair, pairs)
                } else {
                    WeylElement::q(pair, pairs)
                };
                acc = weyl_mul(&acc, &letter).expect("same pair count");
            }
            *sum = sum.add(&acc).expect("same pair count");
            *count += 1;
            return;
        }
        if left_p > 0 {
            choose[pos] = true;
            rec(choose, pos + 1, left_p - 1, pair, pairs, sum, count);
        }
        choose[pos] = false;
        rec(choose, pos + 1, left_p, pair, pairs, sum, count);
    }
    rec(&mut choose, 0, a, pair, pairs, &mut sum, &mut count);
    sum.scale(&TPoly::constant(Rational::one() / rat(count)))
}

/// Inverse of PBW symmetrization by triangular back-substitution: sigma
/// is unitriangular for the (total degree, monomial) order.
pub fn pbw_unsymmetrize(w: &WeylElement) -> Result<PhasePoly, NcalcError> {
    let n = w.pairs;
    let mut remaining = w.clone();
    let mut out: PhasePoly = MultiPoly::zero(2 * n);
    while !remaining.is_zero() {
        let (m, c) = remaining
            .terms
            .iter()
            .max_by_key(|(m, _)| (m.iter().map(|&e| e as u64).sum::<u64>(), (*m).clone()))
            .map(|(m, c)| (m.clone(), c.clone()))
            .expect("nonzero");
        let mut mono = MultiPoly::zero(2 * n);
        mono.add_term(m, TPoly::constant(Rational::one()));
        let sig = pbw_symmetrize(&mono)?;
        remaining = remaining.sub(&sig.scale(&c))?;
        out = out.add(&mono.scale(&c))?;
    }
    Ok(out)
}

/// Leading Poisson term of a star product: (f*g - g*f)/t at t = 0.
/// Errors if the commutator is not divisible by t (a non-deformation).
pub fn poisson_leading_term<S>(star: S, f: &PhasePoly, g: &PhasePoly) -> Result<PhasePoly, NcalcError>
where
    S: Fn(&PhasePoly, &PhasePoly) -> Result<PhasePoly, NcalcError>,
{
    let comm = star(f, g)?.sub(&star(g, f)?)?;
    let mut out = MultiPoly::zero(comm.nvars);
    for (m, c) in &comm.terms {
        let d = c.div_t().ok_or_else(|| {
            NcalcError::InvalidInput(format!(
                "star commutator has a t-free term {} at {:?}: not a deformation",
                tpoly_string(c),
                m
            ))
        })?;
        out.add_term(m.clone(), TPoly::constant(d.at_zero()));
    }
    Ok(out)
}

/// The canonical Poisson bracket sum_i df/dx_i dg/dy_i - df/dy_i dg/dx_i,
/// used as the independent oracle for poisson_leading_term(moyal).
pub fn canonical_bracket(f: &PhasePoly, g: &PhasePoly) -> Result<PhasePoly, NcalcError> {
    if f.nvars != g.nvars {
        return Err(NcalcError::DimensionMismatch {
            expected: f.nvars,
            got: g.nvars,
        });
    }
    let n = pair_count(f)?;
    let mut out = MultiPoly::zero(f.nvars);
    for i in 0..n {
        out = out
            .add(&f.derivative(i).mul(&g.derivative(n + i))?)?
            .sub(&f.derivative(n + i).mul(&g.derivative(i))?)?;
    }
    Ok(out)
}

/// Slices a phase polynomial by powers of t, for display and CLI output.
pub fn t_slices(f: &PhasePoly) -> BTreeMap<usize, MultiPoly<Rational>> {
    let mut out: BTreeMap<usize, MultiPoly<Rational>> = BTreeMap::new();
    for (m, c) in &f.terms {
        for (k, r) in c.coeffs() {
            out.entry(k)
                .or_insert_with(|| MultiPoly::zero(f.nvars))
                .add_term(m.clone(), r.clone());
        }
    }
    out.retain(|_, p| !p.is_zero());
    out
}

/// Renders a phase polynomial grouped by powers of t.
pub fn phase_display(f: &PhasePoly) -> String {
    let slices = t_slices(f);
    if slices.is_empty() {
        return "0".into();
    }
    let names = phase_var_names(f.nvars / 2);
    let parts: Vec<String> = slices
        .iter()
        .map(|(k, p)| match k {
            0 => p.display(&names),
            1 => format!("t * ({})", p.display(&names)),
            _ => format!("t^{} * ({})", k, p.display(&names)),
        })
        .collect();
    parts.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(r: i64) -> TPoly {
        TPoly::constant(rat(r))
    }

    fn rand_phase(rng: &mut ChaCha8Rng, pairs: usize, max_deg: u32, terms: usize) -> PhasePoly {
        let mut f = MultiPoly::zero(2 * pairs);
        for _ in 0..terms {
            let mut m = vec![0u32; 2 * pairs];
            let deg = rng.gen_range(0..=max_deg);
            for _ in 0..deg {
                m[rng.gen_range(0..2 * pairs)] += 1;
            }
            f.add_term(m, c(rng.gen_range(-3..=3)));
        }
        f
    }

    #[test]
    fn moyal_basics() {
        let x = phase_x(0, 1);
        let y = phase_y(0, 1);
        // x * y = xy + t/2
        let mut expect = x.mul(&y).unwrap();
        expect.add_term(vec![0, 0], TPoly::monomial(1, ratio(1, 2)));
        assert_eq!(moyal_star(&x, &y).unwrap(), expect);
        // f * 1 = f
        let one = MultiPoly::one(2);
        let f = x.mul(&x).unwrap().add(&y).unwrap();
        assert_eq!(moyal_star(&f, &one).unwrap(), f);
        assert_eq!(moyal_star(&one, &f).unwrap(), f);
        // x * y - y * x = t
        let comm = moyal_star(&x, &y)
            .unwrap()
            .sub(&moyal_star(&y, &x).unwrap())
            .unwrap();
        let mut t_const = MultiPoly::zero(2);
        t_const.add_term(vec![0, 0], TPoly::t());
        assert_eq!(comm, t_const);
    }

    #[test]
    fn moyal_associativity_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for pairs in [1usize, 2] {
            for _ in 0..6 {
                let f = rand_phase(&mut rng, pairs, 4, 3);
                let g = rand_phase(&mut rng, pairs, 4, 3);
                let h = rand_phase(&mut rng, pairs, 4, 3);
                let l = moyal_star(&moyal_star(&f, &g).unwrap(), &h).unwrap();
                let r = moyal_star(&f, &moyal_star(&g, &h).unwrap()).unwrap();
                assert_eq!(l, r);
            }
        }
    }

    #[test]
    fn weyl_normal_forms() {
        let p = WeylElement::p(0, 1);
        let q = WeylElement::q(0, 1);
        // q p = pq - t
        let qp = weyl_mul(&q, &p).unwrap();
        let mut expect = WeylElement::zero(1);
        expect.add_term(vec![1, 1], c(1));
        expect.add_term(vec![0, 0], TPoly::monomial(1, rat(-1)));
        assert_eq!(qp, expect);
        // p^a q^b p = p^{a+1} q^b - b t p^a q^{b-1}
        for (a, b) in [(0u32, 1u32), (2, 3), (1, 4)] {
            let mut u = WeylElement::zero(1);
            u.add_term(vec![a, b], c(1));
            let prod = weyl_mul(&u, &p).unwrap();
            let mut expect = WeylElement::zero(1);
            expect.add_term(vec![a + 1, b], c(1));
            expect.add_term(vec![a, b - 1], TPoly::monomial(1, rat(-(b as i64))));
            assert_eq!(prod, expect, "a={}, b={}", a, b);
        }
        // u . 1 = u
        let one = WeylElement::one(1);
        let u = qp;
        assert_eq!(weyl_mul(&u, &one).unwrap(), u);
        assert_eq!(weyl_mul(&one, &u).unwrap(), u);
    }

    #[test]
    fn weyl_associativity_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..6 {
            let make = |rng: &mut ChaCha8Rng| {
                let mut w = WeylElement::zero(2);
                for _ in 0..3 {
                    let m: Mono = (0..4).map(|_| rng.gen_range(0..=2u32)).collect();
                    w.add_term(m, c(rng.gen_range(-2..=2)));
                }
                w
            };
            let (u, v, w) = (make(&mut rng), make(&mut rng), make(&mut rng));
            let l = weyl_mul(&weyl_mul(&u, &v).unwrap(), &w).unwrap();
            let r = weyl_mul(&u, &weyl_mul(&v, &w).unwrap()).unwrap();
            assert_eq!(l, r);
        }
    }

    #[test]
    fn pbw_symmetrization() {
        // sigma(xy) = (pq + qp)/2 = pq - t/2
        let xy = phase_x(0, 1).mul(&phase_y(0, 1)).unwrap();
        let s = pbw_symmetrize(&xy).unwrap();
        let mut expect = WeylElement::zero(1);
        expect.add_term(vec![1, 1], c(1));
        expect.add_term(vec![0, 0], TPoly::monomial(1, ratio(-1, 2)));
        assert_eq!(s, expect);
        // sigma(x^m) = p^m
        let x3 = phase_x(0, 1).pow(3);
        let s = pbw_symmetrize(&x3).unwrap();
        let mut expect = WeylElement::zero(1);
        expect.add_term(vec![3, 0], c(1));
        assert_eq!(s, expect);
        // round trip on random polynomials of degree <= 5
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for pairs in [1usize, 2] {
            for _ in 0..5 {
                let f = rand_phase(&mut rng, pairs, 5, 4);
                let back = pbw_unsymmetrize(&pbw_symmetrize(&f).unwrap()).unwrap();
                assert_eq!(back, f);
            }
        }
    }

    #[test]
    fn pbw_intertwines_moyal_and_weyl() {
        // sigma(f) sigma(g) = sigma(f * g) for all monomials of total
        // degree <= 5, one pair
        let mut monos = Vec::new();
        for a in 0..=5u32 {
            for b in 0..=5 - a {
                let mut m = MultiPoly::zero(2);
                m.add_term(vec![a, b], c(1));
                monos.push(m);
            }
        }
        for f in &monos {
            for g in &monos {
                if f.total_degree() + g.total_degree() > 5 {
                    continue;
                }
                let lhs = weyl_mul(&pbw_symmetrize(f).unwrap(), &pbw_symmetrize(g).unwrap())
                    .unwrap();
                let rhs = pbw_symmetrize(&moyal_star(f, g).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "f={:?}, g={:?}", f, g);
            }
        }
        // a spot check with two pairs
        let f = phase_x(0, 2).mul(&phase_y(1, 2)).unwrap();
        let g = phase_y(0, 2).mul(&phase_x(1, 2)).unwrap();
        let lhs = weyl_mul(&pbw_symmetrize(&f).unwrap(), &pbw_symmetrize(&g).unwrap()).unwrap();
        let rhs = pbw_symmetrize(&moyal_star(&f, &g).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn poisson_extraction() {
        let x = phase_x(0, 1);
        let y = phase_y(0, 1);
        // (x, y) -> 1
        let b = poisson_leading_term(moyal_star, &x, &y).unwrap();
        assert_eq!(b, MultiPoly::one(2));
        // (f, f) -> 0
        let f = x.mul(&x).unwrap().add(&y).unwrap();
        assert!(poisson_leading_term(moyal_star, &f, &f).unwrap().is_zero());
        // (x^2, y^2) -> 4xy
        let b = poisson_leading_term(moyal_star, &x.pow(2), &y.pow(2)).unwrap();
        assert_eq!(b, x.mul(&y).unwrap().scale(&c(4)));
        // matches the canonical bracket on random inputs
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let f = rand_phase(&mut rng, 2, 3, 3);
            let g = rand_phase(&mut rng, 2, 3, 3);
            // the oracle wants t-free inputs
            let f = strip_t(&f);
            let g = strip_t(&g);
            assert_eq!(
                poisson_leading_term(moyal_star, &f, &g).unwrap(),
                canonical_bracket(&f, &g).unwrap()
            );
        }
    }

    fn strip_t(f: &PhasePoly) -> PhasePoly {
        let mut out = MultiPoly::zero(f.nvars);
        for (m, tc) in &f.terms {
            out.add_term(m.clone(), TPoly::constant(tc.at_zero()));
        }
        out
    }

    #[test]
    fn poisson_leibniz_and_jacobi() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let br = |f: &PhasePoly, g: &PhasePoly| poisson_leading_term(moyal_star, f, g).unwrap();
        for _ in 0..4 {
            let f = strip_t(&rand_phase(&mut rng, 1, 3, 3));
            let g = strip_t(&rand_phase(&mut rng, 1, 3, 3));
            let h = strip_t(&rand_phase(&mut rng, 1, 3, 3));
            // {f, gh} = {f,g}h + g{f,h}
            let lhs = br(&f, &g.mul(&h).unwrap());
            let rhs = br(&f, &g).mul(&h).unwrap().add(&g.mul(&br(&f, &h)).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
            // Jacobi
            let jac = br(&f, &br(&g, &h))
                .add(&br(&g, &br(&h, &f)))
                .unwrap()
                .add(&br(&h, &br(&f, &g)))
                .unwrap();
            assert!(jac.is_zero());
        }
    }

    #[test]
    fn heisenberg_exponential_identity() {
        // e^u * e^v = e^{u + v + (t/2){u,v}} for linear u, v, compared
        // gradewise (weight = phase degree + 2 * t degree) through 4
        let u = phase_x(0, 1)
            .scale(&c(2))
            .add(&phase_y(0, 1).scale(&c(1)))
            .unwrap();
        let v = phase_x(0, 1)
            .scale(&c(1))
            .add(&phase_y(0, 1).scale(&c(-3)))
            .unwrap();
        let cap = 4u32;
        // lhs: sum over i + j <= cap of (u^i / i!) * (v^j / j!); star
        // powers of linear elements are ordinary powers
        let mut lhs = MultiPoly::zero(2);
        for i in 0..=cap {
            for j in 0..=cap - i {
                let term = moyal_star(&u.pow(i), &v.pow(j)).unwrap().scale(
                    &TPoly::constant(Rational::one() / (factorial(i) * factorial(j))),
                );
                lhs = lhs.add(&term).unwrap();
            }
        }
        // rhs: sum over k <= cap of w^k / k!, w = u + v + (t/2){u,v}
        // (w has vanishing second derivatives, so star powers are
        // ordinary powers)
        let omega = canonical_bracket(&u, &v).unwrap(); // a constant
        let mut w = u.add(&v).unwrap();
        for (m, tc) in &omega.terms {
            assert!(m.iter().all(|&e| e == 0));
            let mut half_t = MultiPoly::zero(2);
            half_t.add_term(
                m.clone(),
                TPoly::monomial(1, tc.at_zero() / rat(2)),
            );
            w = w.add(&half_t).unwrap();
        }
        let mut rhs = MultiPoly::zero(2);
        for k in 0..=cap {
            rhs = rhs
                .add(&w.pow(k).scale(&TPoly::constant(Rational::one() / factorial(k))))
                .unwrap();
        }
        assert_eq!(weight_truncate(&lhs, cap), weight_truncate(&rhs, cap));
    }

    fn weight_truncate(f: &PhasePoly, max_weight: u32) -> PhasePoly {
        let mut out = MultiPoly::zero(f.nvars);
        for (m, tc) in &f.terms {
            let pd: u32 = m.iter().sum();
            let mut kept = TPoly::zero();
            for (k, r) in tc.coeffs() {
                if pd + 2 * (k as u32) <= max_weight {
                    kept = kept + TPoly::monomial(k, r.clone());
                }
            }
            out.add_term(m.clone(), kept);
        }
        out
    }

    #[test]
    fn display_groups_by_t() {
        let x = phase_x(0, 1);
        let y = phase_y(0, 1);
        let s = phase_display(&moyal_star(&x, &y).unwrap());
        assert!(s.contains("x1*y1"), "{}", s);
        assert!(s.contains("t"), "{}", s);
    }
}
