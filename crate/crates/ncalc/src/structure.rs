//! Finite-dimensional algebras given by structure constants, and Lie
//! algebra data.
//!
//! A `StructureAlgebra` is validated (associativity, unit laws) at
//! construction and then re-based so that basis slot 0 is the unit.  The
//! complement basis elements 1..m-1 then span a canonical copy of
//! `A/k`, which is what all the forms and Hochschild machinery consumes.

use crate::error::NcalcError;
use crate::linalg::{Matrix, Vector};
use crate::scalar::{parse_rat, rat, rat_string, Rational};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Outcome of checking a multiplication table.
#[derive(Clone, Debug, PartialEq)]
pub enum StructureValidation {
    Ok,
    /// Associativity fails on the basis triple (i, j, k).
    AssociativityViolation(usize, usize, usize),
    /// `1 * e_i != e_i` or `e_i * 1 != e_i`.
    UnitViolation(usize),
}

/// A finite-dimensional unital associative algebra over Q, presented by a
/// basis and a structure-constant tensor `e_i e_j = sum_k c_{ij}^k e_k`.
///
/// After construction, basis element 0 is the unit.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureAlgebra {
    pub dim: usize,
    pub basis_names: Vec<String>,
    /// Flattened `c_{ij}^k` at index `(i * dim + j) * dim + k`.
    table: Vec<Rational>,
}

impl StructureAlgebra {
    /// Builds and validates an algebra, re-basing so slot 0 is the unit.
    pub fn new(
        dim: usize,
        basis_names: Vec<String>,
        table: Vec<Rational>,
        unit: Vector,
    ) -> Result<Self, NcalcError> {
        if basis_names.len() != dim {
            return Err(NcalcError::DimensionMismatch {
                expected: dim,
                got: basis_names.len(),
            });
        }
        if table.len() != dim * dim * dim {
            return Err(NcalcError::DimensionMismatch {
                expected: dim * dim * dim,
                got: table.len(),
            });
        }
        if unit.len() != dim {
            return Err(NcalcError::DimensionMismatch {
                expected: dim,
                got: unit.len(),
            });
        }
        match validate_table(dim, &table, &unit) {
            StructureValidation::Ok => {}
            StructureValidation::AssociativityViolation(i, j, k) => {
                return Err(NcalcError::InvalidInput(format!(
                    "associativity fails at basis triple ({i},{j},{k})"
                )))
            }
            StructureValidation::UnitViolation(i) => {
                return Err(NcalcError::InvalidInput(format!(
                    "unit law fails on basis element {i}"
                )))
            }
        }
        Ok(rebase_unit_first(dim, basis_names, table, unit))
    }

    /// `c_{ij}^k`.
    pub fn c(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.table[(i * self.dim + j) * self.dim + k]
    }

    /// Coordinates of `e_i e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> Vector {
        (0..self.dim).map(|k| self.c(i, j, k).clone()).collect()
    }

    /// `u * v` in basis coordinates.
    pub fn mul(&self, u: &[Rational], v: &[Rational]) -> Result<Vector, NcalcError> {
        if u.len() != self.dim {
            return Err(NcalcError::DimensionMismatch {
                expected: self.dim,
                got: u.len(),
            });
        }
        if v.len() != self.dim {
            return Err(NcalcError::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        let mut out = vec![Rational::zero(); self.dim];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                let c = ui * vj;
                for k in 0..self.dim {
                    let t = self.c(i, j, k);
                    if !t.is_zero() {
                        out[k] += &c * t;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn unit(&self) -> Vector {
        let mut u = vec![Rational::zero(); self.dim];
        u[0] = Rational::one();
        u
    }

    pub fn basis_vec(&self, i: usize) -> Vector {
        let mut v = vec![Rational::zero(); self.dim];
        v[i] = Rational::one();
        v
    }

    /// Commutator `uv - vu`.
    pub fn commutator(&self, u: &[Rational], v: &[Rational]) -> Result<Vector, NcalcError> {
        let a = self.mul(u, v)?;
        let b = self.mul(v, u)?;
        Ok(a.iter().zip(&b).map(|(x, y)| x - y).collect())
    }

    /// True if the multiplication is commutative.
    pub fn is_commutative(&self) -> bool {
        for i in 0..self.dim {
            for j in 0..i {
                if self.basis_product(i, j) != self.basis_product(j, i) {
                    return false;
                }
            }
        }
        true
    }

    /// Basis of the center, as coordinate vectors.
    pub fn center_basis(&self) -> Vec<Vector> {
        // z central iff (ad e_i)(z) = 0 for all i
        let mut rows = Vec::new();
        for i in 0..self.dim {
            for k in 0..self.dim {
                // row for the k-th coordinate of e_i z - z e_i
                let row: Vector = (0..self.dim)
                    .map(|j| self.c(i, j, k) - self.c(j, i, k))
                    .collect();
                rows.push(row);
            }
        }
        Matrix::from_rows(rows, self.dim).kernel_basis()
    }

    /// The matrix algebra `Mat_r(A)`, basis `E_{ij} ⊗ e_k` ordered by
    /// (i, j, k).
    pub fn matrix_algebra(&self, r: usize) -> Result<StructureAlgebra, NcalcError> {
        let m = self.dim;
        let dim = r * r * m;
        let idx = |i: usize, j: usize, k: usize| (i * r + j) * m + k;
        let mut table = vec![Rational::zero(); dim * dim * dim];
        for i in 0..r {
            for j in 0..r {
                for k in 0..m {
                    for p in 0..r {
                        for q in 0..r {
                            if j != p {
                                continue;
                            }
                            for l in 0..m {
                                let a = idx(i, j, k);
                                let b = idx(p, q, l);
                                for s in 0..m {
                                    let c = self.c(k, l, s);
                                    if !c.is_zero() {
                                        table[(a * dim + b) * dim + idx(i, q, s)] = c.clone();
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        let mut unit = vec![Rational::zero(); dim];
        for i in 0..r {
            unit[idx(i, i, 0)] = Rational::one();
        }
        let names = (0..r)
            .flat_map(|i| {
                (0..r).flat_map(move |j| {
                    (0..m).map(move |k| format!("E{}{}#{}", i + 1, j + 1, k))
                })
            })
            .collect();
        StructureAlgebra::new(dim, names, table, unit)
    }
}

/// Checks associativity and the unit laws; reports the first violation.
pub fn validate_table(dim: usize, table: &[Rational], unit: &[Rational]) -> StructureValidation {
    let c = |i: usize, j: usize, k: usize| &table[(i * dim + j) * dim + k];
    // unit laws
    for i in 0..dim {
        for k in 0..dim {
            let mut left = Rational::zero();
            let mut right = Rational::zero();
            for (j, uj) in unit.iter().enumerate() {
                if uj.is_zero() {
                    continue;
                }
                left += uj * c(j, i, k);
                right += uj * c(i, j, k);
            }
            let expect = if i == k {
                Rational::one()
            } else {
                Rational::zero()
            };
            if left != expect || right != expect {
                return StructureValidation::UnitViolation(i);
            }
        }
    }
    // associativity: sum_p c_ij^p c_pk^q = sum_p c_jk^p c_ip^q
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                for q in 0..dim {
                    let mut lhs = Rational::zero();
                    let mut rhs = Rational::zero();
                    for p in 0..dim {
                        lhs += c(i, j, p) * c(p, k, q);
                        rhs += c(j, k, p) * c(i, p, q);
                    }
                    if lhs != rhs {
                        return StructureValidation::AssociativityViolation(i, j, k);
                    }
                }
            }
        }
    }
    StructureValidation::Ok
}

/// Change of basis putting the unit in slot 0; the remaining slots are a
/// greedily chosen subset of the original basis completing the unit.
fn rebase_unit_first(
    dim: usize,
    basis_names: Vec<String>,
    table: Vec<Rational>,
    unit: Vector,
) -> StructureAlgebra {
    // new basis vectors in old coordinates, as columns of P
    let mut cols: Vec<Vector> = vec![unit.clone()];
    let mut kept_names = vec!["1".to_string()];
    let mut ech = crate::linalg::Echelon::empty(dim);
    ech.insert(unit);
    for i in 0..dim {
        if cols.len() == dim {
            break;
        }
        let mut v = vec![Rational::zero(); dim];
        v[i] = Rational::one();
        if ech.insert(v.clone()) {
            cols.push(v);
            kept_names.push(basis_names[i].clone());
        }
    }
    assert_eq!(cols.len(), dim, "unit vector inconsistent with basis");
    let p = Matrix::from_rows(cols, dim).transpose(); // new -> old coordinates
    let p_inv = p.inverse().expect("basis change invertible");
    let c_old = |i: usize, j: usize, k: usize| &table[(i * dim + j) * dim + k];
    // product of new basis vectors in old coordinates, then convert back
    let mut new_table = vec![Rational::zero(); dim * dim * dim];
    for a in 0..dim {
        for b in 0..dim {
            let u: Vector = (0..dim).map(|r| p.rows[r][a].clone()).collect();
            let v: Vector = (0..dim).map(|r| p.rows[r][b].clone()).collect();
            let mut prod_old = vec![Rational::zero(); dim];
            for (i, ui) in u.iter().enumerate() {
                if ui.is_zero() {
                    continue;
                }
                for (j, vj) in v.iter().enumerate() {
                    if vj.is_zero() {
                        continue;
                    }
                    let s = ui * vj;
                    for k in 0..dim {
                        let t = c_old(i, j, k);
                        if !t.is_zero() {
                            prod_old[k] += &s * t;
                        }
                    }
                }
            }
            let prod_new = p_inv.apply(&prod_old);
            for (k, ck) in prod_new.into_iter().enumerate() {
                new_table[(a * dim + b) * dim + k] = ck;
            }
        }
    }
    StructureAlgebra {
        dim,
        basis_names: kept_names,
        table: new_table,
    }
}

// ---- JSON schema -----------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct StructureAlgebraJson {
    dim: usize,
    basis: Vec<String>,
    unit: Vec<String>,
    table: Vec<Vec<Vec<String>>>,
}

impl StructureAlgebra {
    /// Serializes as `{"dim", "basis", "unit", "table"}` with rationals as
    /// "p/q" strings.  The serialized form is the already-rebased algebra,
    /// so `unit` is `[1, 0, ..]`.
    pub fn to_json(&self) -> serde_json::Value {
        let j = StructureAlgebraJson {
            dim: self.dim,
            basis: self.basis_names.clone(),
            unit: self.unit().iter().map(rat_string).collect(),
            table: (0..self.dim)
                .map(|i| {
                    (0..self.dim)
                        .map(|j| (0..self.dim).map(|k| rat_string(self.c(i, j, k))).collect())
                        .collect()
                })
                .collect(),
        };
        serde_json::to_value(j).expect("serialization cannot fail")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, NcalcError> {
        let j: StructureAlgebraJson = serde_json::from_value(v.clone())
            .map_err(|e| NcalcError::InvalidInput(format!("algebra json: {e}")))?;
        let parse = |s: &String| {
            parse_rat(s).ok_or_else(|| NcalcError::InvalidInput(format!("bad rational `{s}`")))
        };
        let unit = j.unit.iter().map(parse).collect::<Result<Vector, _>>()?;
        let mut table = Vec::with_capacity(j.dim * j.dim * j.dim);
        for plane in &j.table {
            for row in plane {
                for s in row {
                    table.push(parse(s)?);
                }
            }
        }
        StructureAlgebra::new(j.dim, j.basis, table, unit)
    }
}

// ---- Stock examples --------------------------------------------------------

/// The ground field viewed as a 1-dimensional algebra.
pub fn ground_field() -> StructureAlgebra {
    StructureAlgebra::new(1, vec!["1".into()], vec![rat(1)], vec![rat(1)]).unwrap()
}

/// `k[e]/(e^2 - e)` with basis {1, e}.
pub fn idempotent_line() -> StructureAlgebra {
    let mut table = vec![Rational::zero(); 8];
    let mut set = |i: usize, j: usize, k: usize, v: i64| table[(i * 2 + j) * 2 + k] = rat(v);
    set(0, 0, 0, 1);
    set(0, 1, 1, 1);
    set(1, 0, 1, 1);
    set(1, 1, 1, 1); // e*e = e
    StructureAlgebra::new(2, vec!["1".into(), "e".into()], table, vec![rat(1), rat(0)]).unwrap()
}

/// `k[x]/(x^2)` (dual numbers) with basis {1, x}.
pub fn dual_numbers_algebra() -> StructureAlgebra {
    let mut table = vec![Rational::zero(); 8];
    let mut set = |i: usize, j: usize, k: usize, v: i64| table[(i * 2 + j) * 2 + k] = rat(v);
    set(0, 0, 0, 1);
    set(0, 1, 1, 1);
    set(1, 0, 1, 1);
    // x*x = 0
    StructureAlgebra::new(2, vec!["1".into(), "x".into()], table, vec![rat(1), rat(0)]).unwrap()
}

/// `k[x]/(x^n)`.
pub fn truncated_polynomials(n: usize) -> StructureAlgebra {
    let mut table = vec![Rational::zero(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            if i + j < n {
                table[(i * n + j) * n + (i + j)] = Rational::one();
            }
        }
    }
    let names = (0..n)
        .map(|i| if i == 0 { "1".into() } else { format!("x^{i}") })
        .collect();
    let mut unit = vec![Rational::zero(); n];
    unit[0] = Rational::one();
    StructureAlgebra::new(n, names, table, unit).unwrap()
}

/// `k × k × ... × k` (n factors) with idempotent basis.
pub fn split_semisimple(n: usize) -> StructureAlgebra {
    let mut table = vec![Rational::zero(); n * n * n];
    for i in 0..n {
        table[(i * n + i) * n + i] = Rational::one();
    }
    let names = (0..n).map(|i| format!("p{}", i + 1)).collect();
    let unit = vec![Rational::one(); n];
    StructureAlgebra::new(n, names, table, unit).unwrap()
}

/// `Mat_n(k)` with elementary-matrix basis `E_{ij}` ordered by (i, j).
pub fn matrix_units(n: usize) -> StructureAlgebra {
    ground_field().matrix_algebra(n).unwrap()
}

/// Group algebra of `Z/n` with basis `g^0, .., g^{n-1}`.
pub fn cyclic_group_algebra(n: usize) -> StructureAlgebra {
    let mut table = vec![Rational::zero(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            table[(i * n + j) * n + ((i + j) % n)] = Rational::one();
        }
    }
    let names = (0..n)
        .map(|i| if i == 0 { "1".into() } else { format!("g^{i}") })
        .collect();
    let mut unit = vec![Rational::zero(); n];
    unit[0] = Rational::one();
    StructureAlgebra::new(n, names, table, unit).unwrap()
}

/// Upper-triangular 2x2 matrices, basis {E11, E12, E22}.
pub fn upper_triangular_2() -> StructureAlgebra {
    let d = 3;
    let mut table = vec![Rational::zero(); d * d * d];
    let mut set = |i: usize, j: usize, k: usize| table[(i * d + j) * d + k] = Rational::one();
    // E11*E11 = E11, E11*E12 = E12, E12*E22 = E12, E22*E22 = E22
    set(0, 0, 0);
    set(0, 1, 1);
    set(1, 2, 1);
    set(2, 2, 2);
    StructureAlgebra::new(
        d,
        vec!["E11".into(), "E12".into(), "E22".into()],
        table,
        vec![rat(1), rat(0), rat(1)],
    )
    .unwrap()
}

// ---- Lie algebra data ------------------------------------------------------

/// Outcome of checking a Lie table.
#[derive(Clone, Debug, PartialEq)]
pub enum LieValidation {
    Ok,
    AntisymmetryViolation(usize, usize),
    JacobiViolation(usize, usize, usize),
}

/// A finite-dimensional Lie algebra by structure constants
/// `[e_i, e_j] = sum_k c_{ij}^k e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraData {
    pub dim: usize,
    pub basis_names: Vec<String>,
    table: Vec<Rational>,
}

impl LieAlgebraData {
    pub fn new(
        dim: usize,
        basis_names: Vec<String>,
        table: Vec<Rational>,
    ) -> Result<Self, NcalcError> {
        if table.len() != dim * dim * dim {
            return Err(NcalcError::DimensionMismatch {
                expected: dim * dim * dim,
                got: table.len(),
            });
        }
        let g = LieAlgebraData {
            dim,
            basis_names,
            table,
        };
        match g.validate() {
            LieValidation::Ok => Ok(g),
            LieValidation::AntisymmetryViolation(i, j) => Err(NcalcError::InvalidInput(format!(
                "antisymmetry fails at ({i},{j})"
            ))),
            LieValidation::JacobiViolation(i, j, k) => Err(NcalcError::InvalidInput(format!(
                "Jacobi identity fails at ({i},{j},{k})"
            ))),
        }
    }

    /// Builds without validating; pair with [`LieAlgebraData::validate`].
    pub fn new_unchecked(dim: usize, basis_names: Vec<String>, table: Vec<Rational>) -> Self {
        LieAlgebraData {
            dim,
            basis_names,
            table,
        }
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.table[(i * self.dim + j) * self.dim + k]
    }

    /// `[u, v]` in coordinates.
    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Vector {
        let mut out = vec![Rational::zero(); self.dim];
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                let s = ui * vj;
                if s.is_zero() {
                    continue;
                }
                for k in 0..self.dim {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        out[k] += &s * c;
                    }
                }
            }
        }
        out
    }

    /// Exact antisymmetry and Jacobi check.
    pub fn validate(&self) -> LieValidation {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.c(i, j, k) != &(-self.c(j, i, k).clone()) {
                        return LieValidation::AntisymmetryViolation(i, j);
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    // [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j] = 0
                    for q in 0..n {
                        let mut s = Rational::zero();
                        for p in 0..n {
                            s += self.c(i, j, p) * self.c(p, k, q);
                            s += self.c(j, k, p) * self.c(p, i, q);
                            s += self.c(k, i, p) * self.c(p, j, q);
                        }
                        if !s.is_zero() {
                            return LieValidation::JacobiViolation(i, j, k);
                        }
                    }
                }
            }
        }
        LieValidation::Ok
    }
}

/// sl(2) with basis {e, f, h}: [e,f]=h, [h,e]=2e, [h,f]=-2f.
pub fn sl2() -> LieAlgebraData {
    let d = 3;
    let mut table = vec![Rational::zero(); d * d * d];
    let mut set = |i: usize, j: usize, k: usize, v: i64| {
        table[(i * d + j) * d + k] = rat(v);
        table[(j * d + i) * d + k] = rat(-v);
    };
    set(0, 1, 2, 1); // [e,f] = h
    set(2, 0, 0, 2); // [h,e] = 2e
    set(2, 1, 1, -2); // [h,f] = -2f
    LieAlgebraData::new(d, vec!["e".into(), "f".into(), "h".into()], table).unwrap()
}

/// 3-dimensional Heisenberg algebra: [x,y]=z central.
pub fn heisenberg3() -> LieAlgebraData {
    let d = 3;
    let mut table = vec![Rational::zero(); d * d * d];
    table[(0 * d + 1) * d + 2] = rat(1);
    table[(1 * d + 0) * d + 2] = rat(-1);
    LieAlgebraData::new(d, vec!["x".into(), "y".into(), "z".into()], table).unwrap()
}

/// Abelian Lie algebra of the given dimension.
pub fn abelian_lie(dim: usize) -> LieAlgebraData {
    let names = (0..dim).map(|i| format!("x{}", i + 1)).collect();
    LieAlgebraData::new(dim, names, vec![Rational::zero(); dim * dim * dim]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mat2_validates() {
        let a = matrix_units(2);
        assert_eq!(a.dim, 4);
        assert_eq!(
            validate_table(a.dim, &a.table, &a.unit()),
            StructureValidation::Ok
        );
        // After rebase slot 0 is the unit E11+E22; the greedy completion
        // keeps E11, E12, E21 as slots 1..3.  Then E12 * E21 = E11.
        assert_eq!(a.basis_names[1], "E11#0");
        assert_eq!(a.basis_names[2], "E12#0");
        assert_eq!(a.basis_names[3], "E21#0");
        let e12 = a.basis_vec(2);
        let e21 = a.basis_vec(3);
        let prod = a.mul(&e12, &e21).unwrap();
        assert_eq!(prod, a.basis_vec(1));
    }

    #[test]
    fn idempotent_line_relation() {
        let a = idempotent_line();
        let e = a.basis_vec(1);
        assert_eq!(a.mul(&e, &e).unwrap(), e);
        let one = a.unit();
        let v = vec![rat(3), rat(-2)];
        assert_eq!(a.mul(&one, &v).unwrap(), v);
    }

    #[test]
    fn broken_table_detected() {
        let mut table = vec![Rational::zero(); 8];
        {
            let mut set =
                |i: usize, j: usize, k: usize, v: i64| table[(i * 2 + j) * 2 + k] = rat(v);
            set(0, 0, 0, 1);
            set(0, 1, 1, 1);
            set(1, 0, 1, 1);
            set(1, 1, 0, 1);
            set(1, 1, 1, 1); // e^2 = 1 + e: the golden ratio ring, fine
        }
        assert_eq!(
            validate_table(2, &table, &[rat(1), rat(0)]),
            StructureValidation::Ok
        );
        // break associativity: e^2 = 1 + e but (e e) e forced inconsistent
        // by redefining e*e = 1 + 2e on one side of the tensor only is not
        // expressible; instead drop the e*1 = e law
        table[(1 * 2 + 0) * 2 + 1] = rat(0);
        let v = validate_table(2, &table, &[rat(1), rat(0)]);
        assert_ne!(v, StructureValidation::Ok);
    }

    #[test]
    fn associativity_violation_reported() {
        // basis {1, a, b}: a*a = b, a*b = 1, b*a = 0 gives
        // (aa)a = ba = 0 but a(aa) = ab = 1
        let d = 3;
        let mut table = vec![Rational::zero(); 27];
        {
            let mut set = |i: usize, j: usize, k: usize| table[(i * d + j) * d + k] = rat(1);
            set(0, 0, 0);
            set(0, 1, 1);
            set(1, 0, 1);
            set(0, 2, 2);
            set(2, 0, 2);
            set(1, 1, 2); // a*a = b
            set(1, 2, 0); // a*b = 1
        }
        assert_eq!(
            validate_table(d, &table, &[rat(1), rat(0), rat(0)]),
            StructureValidation::AssociativityViolation(1, 1, 1)
        );
    }

    #[test]
    fn rebase_puts_unit_in_slot_zero() {
        // split semisimple k x k given with idempotent basis, unit (1,1)
        let a = split_semisimple(2);
        let one = a.unit();
        for i in 0..a.dim {
            let v = a.basis_vec(i);
            assert_eq!(a.mul(&one, &v).unwrap(), v);
            assert_eq!(a.mul(&v, &one).unwrap(), v);
        }
    }

    #[test]
    fn lie_validation() {
        assert_eq!(sl2().validate(), LieValidation::Ok);
        assert_eq!(abelian_lie(3).validate(), LieValidation::Ok);
        assert_eq!(heisenberg3().validate(), LieValidation::Ok);

        // broken so(3): [x,y]=z, [y,z]=x, [z,x]=x violates Jacobi
        let d = 3;
        let mut table = vec![Rational::zero(); 27];
        let mut set = |i: usize, j: usize, k: usize, v: i64| {
            table[(i * d + j) * d + k] = rat(v);
            table[(j * d + i) * d + k] = rat(-v);
        };
        set(0, 1, 2, 1);
        set(1, 2, 0, 1);
        set(2, 0, 0, 1);
        let g = LieAlgebraData::new_unchecked(3, vec!["x".into(), "y".into(), "z".into()], table);
        assert!(matches!(g.validate(), LieValidation::JacobiViolation(..)));
    }

    #[test]
    fn json_round_trip() {
        let a = idempotent_line();
        let j = a.to_json();
        let b = StructureAlgebra::from_json(&j).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cyclic_group_algebra_is_ok() {
        let a = cyclic_group_algebra(3);
        let g = a.basis_vec(1);
        let g2 = a.mul(&g, &g).unwrap();
        assert_eq!(g2, a.basis_vec(2));
        assert_eq!(a.mul(&g2, &g).unwrap(), a.unit());
    }
}
