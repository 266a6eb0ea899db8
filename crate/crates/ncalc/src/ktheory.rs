//! Chern characters on K-theory for finite-dimensional based algebras:
//! validated idempotent and invertible matrices over A, the classes
//! c0 = tr(e), c1 = tr(g^-1 dg) and ch_k = Tr(e (de)^{2k}) / k! in the
//! Karoubi-de Rham complex, and the Grassmannian connection e.d.e with
//! its curvature R = e de de e.
//!
//! K-groups themselves are not modeled; the module computes characters
//! of explicit matrices and certifies the identities (closedness,
//! conjugation invariance, additivity under direct sum) that make the
//! K-level maps well defined.  Matrix forms are flattened through
//! entrywise traces, so DR of Mat_r(A) relative to Mat_r(k) never
//! materializes as a separate type.

use crate::based::{BasedAlgebra, Elem};
use crate::error::NcalcError;
use crate::forms::{de_rham_d, form_mul, hochschild_b, DRClass, DrContext, NCForm};
use crate::scalar::{rat, Rational};
use num_traits::One;
use std::rc::Rc;

/// A square matrix of homogeneous forms over one based algebra,
/// row-major.  The workhorse for e (de)^{2k} and curvature products.
#[derive(Clone, PartialEq, Debug)]
pub struct OmegaMatrix {
    pub algebra: Rc<BasedAlgebra>,
    pub r: usize,
    pub degree: usize,
    pub entries: Vec<NCForm>,
}

impl OmegaMatrix {
    pub fn zero(algebra: Rc<BasedAlgebra>, r: usize, degree: usize) -> Self {
        let entries = vec![NCForm::zero(algebra.clone(), degree); r * r];
        OmegaMatrix {
            algebra,
            r,
            degree,
            entries,
        }
    }

    pub fn identity(algebra: Rc<BasedAlgebra>, r: usize) -> Self {
        let mut m = OmegaMatrix::zero(algebra.clone(), r, 0);
        for i in 0..r {
            m.entries[i * r + i] = NCForm::one(algebra.clone());
        }
        m
    }

    /// Entrywise embedding of a matrix of algebra elements in degree 0.
    pub fn from_elems(algebra: Rc<BasedAlgebra>, r: usize, entries: &[Elem]) -> Self {
        debug_assert_eq!(entries.len(), r * r);
        OmegaMatrix {
            algebra: algebra.clone(),
            r,
            degree: 0,
            entries: entries
                .iter()
                .map(|e| NCForm::from_elem(algebra.clone(), e))
                .collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &NCForm {
        &self.entries[i * self.r + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|f| f.is_zero())
    }

    pub fn add(&self, other: &Self) -> Result<Self, NcalcError> {
        if self.r != other.r || self.degree != other.degree {
            return Err(NcalcError::DimensionMismatch {
                expected: self.r,
                got: other.r,
            });
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a = a.add(b)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, NcalcError> {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a = a.scale(c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, NcalcError> {
        if self.r != other.r {
            return Err(NcalcError::DimensionMismatch {
                expected: self.r,
                got: other.r,
            });
        }
        let r = self.r;
        let mut out = OmegaMatrix::zero(self.algebra.clone(), r, self.degree + other.degree);
        for i in 0..r {
            for j in 0..r {
                let mut s = NCForm::zero(self.algebra.clone(), out.degree);
                for k in 0..r {
                    s = s.add(&form_mul(self.get(i, k), other.get(k, j))?)?;
                }
                out.entries[i * r + j] = s;
            }
        }
        Ok(out)
    }

    /// Entrywise de Rham d.
    pub fn d(&self) -> Self {
        OmegaMatrix {
            algebra: self.algebra.clone(),
            r: self.r,
            degree: self.degree + 1,
            entries: self.entries.iter().map(de_rham_d).collect(),
        }
    }

    pub fn trace(&self) -> Result<NCForm, NcalcError> {
        let mut s = NCForm::zero(self.algebra.clone(), self.degree);
        for i in 0..self.r {
            s = s.add(self.get(i, i))?;
        }
        Ok(s)
    }

    pub fn pow(&self, k: usize) -> Result<Self, NcalcError> {
        let mut out = OmegaMatrix::identity(self.algebra.clone(), self.r);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }
}

fn elem_matrix_mul(
    alg: &BasedAlgebra,
    r: usize,
    a: &[Elem],
    b: &[Elem],
) -> Result<Vec<Elem>, NcalcError> {
    let mut out = vec![Elem::zero(); r * r];
    for i in 0..r {
        for j in 0..r {
            let mut s = Elem::zero();
            for k in 0..r {
                s = s.add(&alg.mul_elem(&a[i * r + k], &b[k * r + j])?);
            }
            out[i * r + j] = s;
        }
    }
    Ok(out)
}

fn elem_identity(alg: &BasedAlgebra, r: usize) -> Vec<Elem> {
    let mut out = vec![Elem::zero(); r * r];
    for i in 0..r {
        out[i * r + i] = Elem::from_atom(alg.unit_atom());
    }
    out
}

/// An r x r matrix e over A with e^2 = e, validated on construction.
#[derive(Clone, PartialEq, Debug)]
pub struct IdempotentMatrix {
    pub algebra: Rc<BasedAlgebra>,
    pub r: usize,
    pub entries: Vec<Elem>,
}

impl IdempotentMatrix {
    pub fn new(
        algebra: Rc<BasedAlgebra>,
        r: usize,
        entries: Vec<Elem>,
    ) -> Result<Self, NcalcError> {
        if entries.len() != r * r {
            return Err(NcalcError::DimensionMismatch {
                expected: r * r,
                got: entries.len(),
            });
        }
        let sq = elem_matrix_mul(&algebra, r, &entries, &entries)?;
        if sq != entries {
            return Err(NcalcError::InvalidInput(
                "matrix is not idempotent: e^2 != e".into(),
            ));
        }
        Ok(IdempotentMatrix {
            algebra,
            r,
            entries,
        })
    }

    /// A constant idempotent with the given 0/1 diagonal.
    pub fn constant_diag(algebra: Rc<BasedAlgebra>, diag: &[bool]) -> Self {
        let r = diag.len();
        let unit = algebra.unit_atom();
        let mut entries = vec![Elem::zero(); r * r];
        for (i, &on) in diag.iter().enumerate() {
            if on {
                entries[i * r + i] = Elem::from_atom(unit.clone());
            }
        }
        IdempotentMatrix {
            algebra,
            r,
            entries,
        }
    }

    pub fn to_omega(&self) -> OmegaMatrix {
        OmegaMatrix::from_elems(self.algebra.clone(), self.r, &self.entries)
    }

    /// Block direct sum, realizing [e] + [e'] at the matrix level.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, NcalcError> {
        if self.algebra != other.algebra {
            return Err(NcalcError::AlgebraMismatch);
        }
        let r = self.r + other.r;
        let mut entries = vec![Elem::zero(); r * r];
        for i in 0..self.r {
            for j in 0..self.r {
                entries[i * r + j] = self.entries[i * self.r + j].clone();
            }
        }
        for i in 0..other.r {
            for j in 0..other.r {
                entries[(self.r + i) * r + (self.r + j)] =
                    other.entries[i * other.r + j].clone();
            }
        }
        IdempotentMatrix::new(self.algebra.clone(), r, entries)
    }

    /// g e g^-1, again a validated idempotent.
    pub fn conjugate(&self, g: &InvertibleMatrix) -> Result<Self, NcalcError> {
        if self.algebra != g.algebra || self.r != g.r {
            return Err(NcalcError::AlgebraMismatch);
        }
        let m = elem_matrix_mul(
            &self.algebra,
            self.r,
            &elem_matrix_mul(&self.algebra, self.r, &g.entries, &self.entries)?,
            &g.inverse,
        )?;
        IdempotentMatrix::new(self.algebra.clone(), self.r, m)
    }
}

/// An r x r matrix g over A with a stored exact two-sided inverse,
/// validated on construction.
#[derive(Clone, PartialEq, Debug)]
pub struct InvertibleMatrix {
    pub algebra: Rc<BasedAlgebra>,
    pub r: usize,
    pub entries: Vec<Elem>,
    pub inverse: Vec<Elem>,
}

impl InvertibleMatrix {
    pub fn new(
        algebra: Rc<BasedAlgebra>,
        r: usize,
        entries: Vec<Elem>,
        inverse: Vec<Elem>,
    ) -> Result<Self, NcalcError> {
        if entries.len() != r * r || inverse.len() != r * r {
            return Err(NcalcError::DimensionMismatch {
                expected: r * r,
                got: entries.len().max(inverse.len()),
            });
        }
        let id = elem_identity(&algebra, r);
        if elem_matrix_mul(&algebra, r, &entries, &inverse)? != id
            || elem_matrix_mul(&algebra, r, &inverse, &entries)? != id
        {
            return Err(NcalcError::InvalidInput(
                "matrix inverse fails g g^-1 = g^-1 g = 1".into(),
            ));
        }
        Ok(InvertibleMatrix {
            algebra,
            r,
            entries,
            inverse,
        })
    }

    pub fn identity(algebra: Rc<BasedAlgebra>, r: usize) -> Self {
        let id = elem_identity(&algebra, r);
        InvertibleMatrix {
            algebra,
            r,
            entries: id.clone(),
            inverse: id,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, NcalcError> {
        if self.algebra != other.algebra || self.r != other.r {
            return Err(NcalcError::AlgebraMismatch);
        }
        InvertibleMatrix::new(
            self.algebra.clone(),
            self.r,
            elem_matrix_mul(&self.algebra, self.r, &self.entries, &other.entries)?,
            elem_matrix_mul(&self.algebra, self.r, &other.inverse, &self.inverse)?,
        )
    }
}

/// A DR class together with the reduced certificate form whose
/// vanishing witnesses that the class is well defined on K-theory
/// (d-closedness for c0 and ch_k, b-cycle for c1).
#[derive(Clone, PartialEq, Debug)]
pub struct CertifiedClass {
    pub class: DRClass,
    pub certificate: DRClass,
}

impl CertifiedClass {
    pub fn certified(&self) -> bool {
        self.certificate.is_zero()
    }
}

/// c0(e) = tr(e) in DR^0, certified by d tr(e) reducing to 0 in DR^1.
pub fn chern_c0(e: &IdempotentMatrix, ctx: &DrContext) -> Result<CertifiedClass, NcalcError> {
    if e.algebra != ctx.algebra {
        return Err(NcalcError::AlgebraMismatch);
    }
    let tr = e.to_omega().trace()?;
    Ok(CertifiedClass {
        class: ctx.dr_project(&tr)?,
        certificate: ctx.dr_project(&de_rham_d(&tr))?,
    })
}

/// c1(g) = tr(g^-1 dg) in DR^1, certified by b(tr(g^-1 dg)) reducing
/// to 0 in the degree-0 piece.
pub fn chern_c1(g: &InvertibleMatrix, ctx: &DrContext) -> Result<CertifiedClass, NcalcError> {
    if g.algebra != ctx.algebra {
        return Err(NcalcError::AlgebraMismatch);
    }
    let ginv = OmegaMatrix::from_elems(g.algebra.clone(), g.r, &g.inverse);
    let dg = OmegaMatrix::from_elems(g.algebra.clone(), g.r, &g.entries).d();
    let omega = ginv.mul(&dg)?.trace()?;
    Ok(CertifiedClass {
        class: ctx.dr_project(&omega)?,
        certificate: ctx.dr_project(&hochschild_b(&omega)?)?,
    })
}

/// ch_k(e) = Tr(e (de)^{2k}) / k! in DR^{2k}, certified by its d
/// reducing to 0 in DR^{2k+1}.  ch_0 recovers c0.
pub fn chern_ch_k(
    e: &IdempotentMatrix,
    k: usize,
    ctx: &DrContext,
) -> Result<CertifiedClass, NcalcError> {
    if e.algebra != ctx.algebra {
        return Err(NcalcError::AlgebraMismatch);
    }
    let em = e.to_omega();
    let de = em.d();
    let prod = em.mul(&de.pow(2 * k)?)?;
    let mut fact = Rational::one();
    for i in 1..=k {
        fact *= rat(i as i64);
    }
    let tr = prod.trace()?.scale(&(Rational::one() / fact));
    Ok(CertifiedClass {
        class: ctx.dr_project(&tr)?,
        certificate: ctx.dr_project(&de_rham_d(&tr))?,
    })
}

/// The Grassmannian connection nabla = e . d . e on the projective
/// module of rows v with v e = v, acting as v -> d(v e) e.
#[derive(Clone, Debug)]
pub struct ConnectionData {
    pub e: IdempotentMatrix,
}

/// Builds the Grassmannian connection of an idempotent; every
/// idempotent admits one, so this never fails.
pub fn grassmann_connection(e: &IdempotentMatrix) -> ConnectionData {
    ConnectionData { e: e.clone() }
}

impl ConnectionData {
    /// Projects a row of forms onto the module: v -> v e.
    pub fn project(&self, row: &[NCForm]) -> Result<Vec<NCForm>, NcalcError> {
        let r = self.e.r;
        if row.len() != r {
            return Err(NcalcError::DimensionMismatch {
                expected: r,
                got: row.len(),
            });
        }
        let alg = self.e.algebra.clone();
        let mut out = Vec::with_capacity(r);
        for j in 0..r {
            let mut s = NCForm::zero(alg.clone(), row[0].degree);
            for i in 0..r {
                let ej = NCForm::from_elem(alg.clone(), &self.e.entries[i * r + j]);
                s = s.add(&form_mul(&row[i], &ej)?)?;
            }
            out.push(s);
        }
        Ok(out)
    }

    /// nabla(v) = d(v e) e; on the module (v e = v) this satisfies the
    /// Leibniz law nabla(a v) = a nabla(v) + da v.
    pub fn apply(&self, row: &[NCForm]) -> Result<Vec<NCForm>, NcalcError> {
        let projected = self.project(row)?;
        let differentiated: Vec<NCForm> = projected.iter().map(de_rham_d).collect();
        self.project(&differentiated)
    }

    /// The curvature matrix R = e de de e; nabla^2(v) = -v R.
    pub fn curvature(&self) -> Result<OmegaMatrix, NcalcError> {
        let em = self.e.to_omega();
        let de = em.d();
        em.mul(&de)?.mul(&de)?.mul(&em)
    }
}

/// Tr(R^k) / k! in DR^{2k} for the Grassmannian curvature, certified
/// closed; agrees with chern_ch_k(e, k) as a DR class.
pub fn connection_curvature(
    conn: &ConnectionData,
    k: usize,
    ctx: &DrContext,
) -> Result<CertifiedClass, NcalcError> {
    if conn.e.algebra != ctx.algebra {
        return Err(NcalcError::AlgebraMismatch);
    }
    let rk = conn.curvature()?.pow(k)?;
    let mut fact = Rational::one();
    for i in 1..=k {
        fact *= rat(i as i64);
    }
    let tr = rk.trace()?.scale(&(Rational::one() / fact));
    Ok(CertifiedClass {
        class: ctx.dr_project(&tr)?,
        certificate: ctx.dr_project(&de_rham_d(&tr))?,
    })
}
