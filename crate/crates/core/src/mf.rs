//! Graded matrix factorizations and their morphisms.
//!
//! A factorization of `f` (homogeneous of degree `h`) consists of
//! `φ: ⊕R(e_i) → ⊕R(d_i)` and `ψ: ⊕R(d_i) → ⊕R(e_i)` of degree `h`, with
//! `φψ = f·id` and `ψφ = f·id`. `ψ` is stored with offset `h` rather than
//! on the twisted module `⊕R(d_i - h)`.

use crate::error::{Error, Result};
use crate::gmatrix::GradedMatrix;
use crate::poly::{Degree, Poly, Ring};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFactorization {
    ring: Ring,
    f: Poly,
    h: i64,
    d: Vec<i64>,
    e: Vec<i64>,
    phi: GradedMatrix,
    psi: GradedMatrix,
}

fn potential_degree(f: &Poly) -> Result<i64> {
    match f.degree_of() {
        Degree::Homogeneous(h) => Ok(h),
        Degree::Zero => Err(Error::Factorization("the potential must be nonzero".into())),
        Degree::Inhomogeneous => Err(Error::Factorization(format!("{f} is not homogeneous"))),
    }
}

fn check_product(name: &str, product: &GradedMatrix, f: &Poly) -> Result<()> {
    for j in 0..product.rows() {
        for i in 0..product.cols() {
            let want = if i == j {
                f.clone()
            } else {
                Poly::zero(f.ring())
            };
            let got = product.get(j, i);
            if got != &want {
                return Err(Error::Factorization(format!(
                    "{name} entry ({j}, {i}) is {got}, expected {want}"
                )));
            }
        }
    }
    Ok(())
}

impl MatrixFactorization {
    /// Validates typing and both factorization identities exactly.
    pub fn new(
        f: &Poly,
        d: Vec<i64>,
        e: Vec<i64>,
        phi: GradedMatrix,
        psi: GradedMatrix,
    ) -> Result<MatrixFactorization> {
        let ring = f.ring().clone();
        let h = potential_degree(f)?;
        if d.len() != e.len() {
            return Err(Error::Factorization(format!(
                "twist tuples have lengths {} and {}",
                d.len(),
                e.len()
            )));
        }
        if phi.ring() != &ring || psi.ring() != &ring {
            return Err(Error::RingMismatch(
                "factorization matrices and potential differ in ring".into(),
            ));
        }
        if phi.target() != d || phi.source() != e || phi.offset() != 0 {
            return Err(Error::Shape(format!(
                "phi must map twists {e:?} to {d:?} in degree 0"
            )));
        }
        if psi.target() != e || psi.source() != d || psi.offset() != h {
            return Err(Error::Shape(format!(
                "psi must map twists {d:?} to {e:?} in degree {h}"
            )));
        }
        check_product("phi*psi", &phi.compose(&psi)?, f)?;
        check_product("psi*phi", &psi.compose(&phi)?, f)?;
        Ok(MatrixFactorization {
            ring,
            f: f.clone(),
            h,
            d,
            e,
            phi,
            psi,
        })
    }

    /// Convenience constructor from untyped polynomial matrices.
    pub fn from_polys(
        f: &Poly,
        d: Vec<i64>,
        e: Vec<i64>,
        phi: Vec<Vec<Poly>>,
        psi: Vec<Vec<Poly>>,
    ) -> Result<MatrixFactorization> {
        let h = potential_degree(f)?;
        let ring = f.ring();
        let phi = GradedMatrix::new(ring, d.clone(), e.clone(), phi, 0)
            .map_err(|e| Error::Factorization(format!("phi: {e}")))?;
        let psi = GradedMatrix::new(ring, e.clone(), d.clone(), psi, h)
            .map_err(|e| Error::Factorization(format!("psi: {e}")))?;
        Self::new(f, d, e, phi, psi)
    }

    /// The zero object: rank 0.
    pub fn zero(f: &Poly) -> Result<MatrixFactorization> {
        Self::from_polys(f, vec![], vec![], vec![], vec![])
    }

    /// Rank-one factorization `f = u·v` with `d = (0)`, `e = (-deg u)`.
    pub fn koszul_rank1(u: &Poly, v: &Poly) -> Result<MatrixFactorization> {
        if u.is_zero() || v.is_zero() {
            return Err(Error::Factorization(
                "Koszul factors must be nonzero".into(),
            ));
        }
        let du = match u.degree_of() {
            Degree::Homogeneous(k) => k,
            _ => return Err(Error::Factorization(format!("{u} is not homogeneous"))),
        };
        let f = u.checked_mul(v)?;
        Self::from_polys(
            &f,
            vec![0],
            vec![-du],
            vec![vec![u.clone()]],
            vec![vec![v.clone()]],
        )
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn potential(&self) -> &Poly {
        &self.f
    }

    pub fn degree(&self) -> i64 {
        self.h
    }

    pub fn rank(&self) -> usize {
        self.d.len()
    }

    pub fn d(&self) -> &[i64] {
        &self.d
    }

    pub fn e(&self) -> &[i64] {
        &self.e
    }

    pub fn phi(&self) -> &GradedMatrix {
        &self.phi
    }

    pub fn psi(&self) -> &GradedMatrix {
        &self.psi
    }

    /// `E(n)`: every twist shifted by `n`, matrices unchanged.
    pub fn twist(&self, n: i64) -> MatrixFactorization {
        MatrixFactorization {
            d: self.d.iter().map(|x| x + n).collect(),
            e: self.e.iter().map(|x| x + n).collect(),
            phi: self.phi.twist(n),
            psi: self.psi.twist(n),
            ..self.clone()
        }
    }

    /// `E[1] = (M_1(h) ⇄ M_0)` with maps `(-ψ, -φ)`.
    pub fn suspend(&self) -> MatrixFactorization {
        let h = self.h;
        let d: Vec<i64> = self.e.iter().map(|x| x + h).collect();
        let e = self.d.clone();
        let phi = self
            .psi
            .neg()
            .retype(d.clone(), e.clone(), 0)
            .expect("retyping psi preserves degrees");
        let psi = self
            .phi
            .neg()
            .retype(e.clone(), d.clone(), h)
            .expect("retyping phi preserves degrees");
        MatrixFactorization {
            d,
            e,
            phi,
            psi,
            ..self.clone()
        }
    }

    /// Inverse of [`MatrixFactorization::suspend`].
    pub fn desuspend(&self) -> MatrixFactorization {
        let h = self.h;
        let d = self.e.clone();
        let e: Vec<i64> = self.d.iter().map(|x| x - h).collect();
        let phi = self
            .psi
            .neg()
            .retype(d.clone(), e.clone(), 0)
            .expect("retyping psi preserves degrees");
        let psi = self
            .phi
            .neg()
            .retype(e.clone(), d.clone(), h)
            .expect("retyping phi preserves degrees");
        MatrixFactorization {
            d,
            e,
            phi,
            psi,
            ..self.clone()
        }
    }

    /// `E[i](n)`.
    pub fn translate(&self, i: i64, n: i64) -> MatrixFactorization {
        let mut out = self.clone();
        for _ in 0..i.max(0) {
            out = out.suspend();
        }
        for _ in 0..(-i).max(0) {
            out = out.desuspend();
        }
        out.twist(n)
    }

    pub fn direct_sum(&self, other: &MatrixFactorization) -> Result<MatrixFactorization> {
        if self.f != other.f {
            return Err(Error::Factorization(format!(
                "direct sum of factorizations of {} and {}",
                self.f, other.f
            )));
        }
        Ok(MatrixFactorization {
            ring: self.ring.clone(),
            f: self.f.clone(),
            h: self.h,
            d: self.d.iter().chain(&other.d).copied().collect(),
            e: self.e.iter().chain(&other.e).copied().collect(),
            phi: self.phi.direct_sum(&other.phi)?,
            psi: self.psi.direct_sum(&other.psi)?,
        })
    }

    /// Checks that `other` factorizes the same potential over the same ring.
    pub fn check_compatible(&self, other: &MatrixFactorization) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!(
                "{} vs {}",
                self.ring, other.ring
            )));
        }
        if self.f != other.f {
            return Err(Error::Factorization(format!(
                "potentials differ: {} vs {}",
                self.f, other.f
            )));
        }
        Ok(())
    }

    pub fn identity(&self) -> MorphismPair {
        MorphismPair::new(
            self,
            self,
            0,
            GradedMatrix::identity_on(&self.ring, &self.d),
            GradedMatrix::identity_on(&self.ring, &self.e),
        )
        .expect("identity is a cocycle")
    }
}

/// A pair `(α, β)` from `E` to `E'(n)` commuting with both structure maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismPair {
    source: MatrixFactorization,
    target: MatrixFactorization,
    twist: i64,
    alpha: GradedMatrix,
    beta: GradedMatrix,
}

impl MorphismPair {
    pub fn new(
        source: &MatrixFactorization,
        target: &MatrixFactorization,
        twist: i64,
        alpha: GradedMatrix,
        beta: GradedMatrix,
    ) -> Result<MorphismPair> {
        source.check_compatible(target)?;
        if alpha.target() != target.d() || alpha.source() != source.d() || alpha.offset() != twist {
            return Err(Error::Shape(format!(
                "alpha must map {:?} to {:?} in degree {twist}",
                source.d(),
                target.d()
            )));
        }
        if beta.target() != target.e() || beta.source() != source.e() || beta.offset() != twist {
            return Err(Error::Shape(format!(
                "beta must map {:?} to {:?} in degree {twist}",
                source.e(),
                target.e()
            )));
        }
        let lhs = alpha.compose(source.phi())?;
        let rhs = target.phi().compose(&beta)?;
        if lhs != rhs {
            return Err(Error::Cocycle("alpha*phi != phi'*beta".into()));
        }
        let lhs = beta.compose(source.psi())?;
        let rhs = target.psi().compose(&alpha)?;
        if lhs != rhs {
            return Err(Error::Cocycle("beta*psi != psi'*alpha".into()));
        }
        Ok(MorphismPair {
            source: source.clone(),
            target: target.clone(),
            twist,
            alpha,
            beta,
        })
    }

    pub fn zero(
        source: &MatrixFactorization,
        target: &MatrixFactorization,
        twist: i64,
    ) -> Result<MorphismPair> {
        let ring = source.ring();
        Self::new(
            source,
            target,
            twist,
            GradedMatrix::zero(ring, target.d().to_vec(), source.d().to_vec(), twist),
            GradedMatrix::zero(ring, target.e().to_vec(), source.e().to_vec(), twist),
        )
    }

    pub fn source(&self) -> &MatrixFactorization {
        &self.source
    }

    pub fn target(&self) -> &MatrixFactorization {
        &self.target
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn alpha(&self) -> &GradedMatrix {
        &self.alpha
    }

    pub fn beta(&self) -> &GradedMatrix {
        &self.beta
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.beta.is_zero()
    }

    fn same_hom(&self, other: &MorphismPair) -> Result<()> {
        if self.source != other.source || self.target != other.target || self.twist != other.twist {
            return Err(Error::Shape(
                "morphisms live in different Hom spaces".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &MorphismPair) -> Result<MorphismPair> {
        self.same_hom(other)?;
        Ok(MorphismPair {
            alpha: self.alpha.add(&other.alpha)?,
            beta: self.beta.add(&other.beta)?,
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &MorphismPair) -> Result<MorphismPair> {
        self.same_hom(other)?;
        Ok(MorphismPair {
            alpha: self.alpha.sub(&other.alpha)?,
            beta: self.beta.sub(&other.beta)?,
            ..self.clone()
        })
    }

    pub fn scale(&self, c: &Scalar) -> MorphismPair {
        MorphismPair {
            alpha: self.alpha.scale(c),
            beta: self.beta.scale(c),
            ..self.clone()
        }
    }
}
