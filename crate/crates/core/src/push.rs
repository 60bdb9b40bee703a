//! Push-forward of factorizations along `S/(F) → S/(F, w) ≅ R/(f)`.
//!
//! With `S = R[w]`, `deg w = a` and `F = f + w g` where `g ∈ wS`, a
//! factorization `(φ, ψ)` of `f` over `R` goes to
//!
//! ```text
//! φ̃ = [[φ, w], [-g, ψ]]   ψ̃ = [[ψ, -w], [g, φ]]
//! ```
//!
//! with target twists `(d, e + h - a)` and source twists `(e, d - a)`.

use crate::error::{Error, Result};
use crate::gmatrix::GradedMatrix;
use crate::mf::{MatrixFactorization, MorphismPair};
use crate::poly::{Degree, Poly, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionData {
    base: Ring,
    ext: Ring,
    wname: String,
    w: usize,
    a: i64,
    h: i64,
    f: Poly,
    g: Poly,
    big_f: Poly,
    g_over_w: Poly,
}

impl SectionData {
    /// Validates `g ∈ wS` and homogeneity of `F = f + w g`.
    pub fn new(base: &Ring, wname: &str, a: i64, f: &Poly, g: &Poly) -> Result<SectionData> {
        let ext = base.extend(wname, a)?;
        let w = ext.nvars() - 1;
        let f = if f.ring() == base {
            f.clone()
        } else if f.ring() == &ext {
            f.restrict(base)
                .map_err(|_| Error::Section(format!("f = {f} mentions {wname}")))?
        } else {
            return Err(Error::RingMismatch(format!("f = {f} is not over {base}")));
        };
        let h = match f.degree_of() {
            Degree::Homogeneous(h) => h,
            _ => {
                return Err(Error::Section(format!(
                    "f = {f} is not a nonzero homogeneous polynomial"
                )))
            }
        };
        let g = if g.ring() == &ext {
            g.clone()
        } else if g.ring() == base {
            g.embed(&ext)?
        } else {
            return Err(Error::RingMismatch(format!("g = {g} is not over {ext}")));
        };
        if !g.substitute_zero(w).is_zero() {
            return Err(Error::Section(format!("g = {g} not in wS")));
        }
        let wvar = Poly::var_at(&ext, w);
        let wg = &wvar * &g;
        if !wg.is_homogeneous_of(h) {
            return Err(Error::Section(format!(
                "F = f + {wname}*g is inhomogeneous: {wname}*g = {wg} is not of degree {h}"
            )));
        }
        let big_f = &f.embed(&ext)? + &wg;
        let g_over_w = g.divide_by_var(w).expect("g is divisible by w");
        Ok(SectionData {
            base: base.clone(),
            ext,
            wname: wname.to_string(),
            w,
            a,
            h,
            f,
            g,
            big_f,
            g_over_w,
        })
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn ext(&self) -> &Ring {
        &self.ext
    }

    pub fn wname(&self) -> &str {
        &self.wname
    }

    pub fn w_index(&self) -> usize {
        self.w
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn h(&self) -> i64 {
        self.h
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn g(&self) -> &Poly {
        &self.g
    }

    /// `F = f + w g` over `S`.
    pub fn big_f(&self) -> &Poly {
        &self.big_f
    }

    /// Gorenstein parameter of `R`.
    pub fn r(&self) -> i64 {
        self.base.a_invariant()
    }

    /// The twist `r + h - a` appearing in the dual summand.
    pub fn dual_twist(&self) -> i64 {
        self.r() + self.h - self.a
    }

    /// Whether `r + h = a`, i.e. `S/(F)` has trivial canonical module.
    pub fn is_calabi_yau(&self) -> bool {
        self.r() + self.h == self.a
    }

    fn check_over_base(&self, e: &MatrixFactorization) -> Result<()> {
        if e.ring() != &self.base {
            return Err(Error::RingMismatch(format!(
                "factorization over {} but section base is {}",
                e.ring(),
                self.base
            )));
        }
        if e.potential() != &self.f {
            return Err(Error::Section(format!(
                "factorization of {} but section has f = {}",
                e.potential(),
                self.f
            )));
        }
        Ok(())
    }

    /// The push-forward of `e`, a factorization of `F` of twice the rank.
    pub fn push(&self, e: &MatrixFactorization) -> Result<MatrixFactorization> {
        self.check_over_base(e)?;
        let s = &self.ext;
        let (a, h) = (self.a, self.h);
        let d = e.d();
        let et = e.e();
        let shift = |v: &[i64], k: i64| v.iter().map(|x| x + k).collect::<Vec<i64>>();
        let wvar = Poly::var_at(s, self.w);
        let phi = e.phi().embed(s)?;
        let psi = e.psi().embed(s)?;

        let phi_t = GradedMatrix::block(
            &phi,
            &GradedMatrix::scalar_on(s, d, &wvar, a).retype(d.to_vec(), shift(d, -a), 0)?,
            &GradedMatrix::scalar_on(s, et, &-&self.g, h - a).retype(
                shift(et, h - a),
                et.to_vec(),
                0,
            )?,
            &psi.retype(shift(et, h - a), shift(d, -a), 0)?,
        )?;
        let psi_t = GradedMatrix::block(
            &psi,
            &GradedMatrix::scalar_on(s, et, &-&wvar, a).retype(et.to_vec(), shift(et, h - a), h)?,
            &GradedMatrix::scalar_on(s, d, &self.g, h - a).retype(shift(d, -a), d.to_vec(), h)?,
            &phi.retype(shift(d, -a), shift(et, h - a), h)?,
        )?;
        let d_t = phi_t.target().to_vec();
        let e_t = phi_t.source().to_vec();
        MatrixFactorization::new(&self.big_f, d_t, e_t, phi_t, psi_t)
    }

    /// `E[1](-a)`, the source of the second component of a push-forward morphism.
    pub fn second_source(&self, e: &MatrixFactorization) -> MatrixFactorization {
        e.translate(1, -self.a)
    }

    /// Builds the morphism `ΦE → ΦE'(n)` from `m1: E → E'(n)` and
    /// `m2: E[1](-a) → E'(n)`:
    /// `α = [[α₁, α₂], [-(g/w)β₂, β₁]]`, `β = [[β₁, β₂], [-(g/w)α₂, α₁]]`,
    /// where `(α₂, β₂) = (m2.α, -m2.β)` undoes the sign carried by `[1]`.
    pub fn induce_morphism(&self, m1: &MorphismPair, m2: &MorphismPair) -> Result<MorphismPair> {
        let e = m1.source();
        let t = m1.target();
        let n = m1.twist();
        self.check_over_base(e)?;
        self.check_over_base(t)?;
        if m2.target() != t || m2.twist() != n || m2.source() != &self.second_source(e) {
            return Err(Error::Cocycle(
                "second component must be a morphism E[1](-a) -> E'(n)".into(),
            ));
        }
        // Revalidate: inputs may have been assembled by hand.
        let m1 = MorphismPair::new(e, t, n, m1.alpha().clone(), m1.beta().clone())?;
        let m2 = MorphismPair::new(m2.source(), t, n, m2.alpha().clone(), m2.beta().clone())?;

        let s = &self.ext;
        let (a, h) = (self.a, self.h);
        let shift = |v: &[i64], k: i64| v.iter().map(|x| x + k).collect::<Vec<i64>>();
        let a1 = m1.alpha().embed(s)?;
        let b1 = m1.beta().embed(s)?;
        let a2 = m2.alpha().embed(s)?;
        let b2 = m2.beta().embed(s)?.neg();
        let gw = &self.g_over_w;
        let gw_deg = h - 2 * a;

        let (d, et, dt, ett) = (e.d(), e.e(), t.d(), t.e());
        let alpha = GradedMatrix::block(
            &a1,
            &a2,
            &b2.mul_poly(&-gw, gw_deg)
                .retype(shift(ett, h - a), d.to_vec(), n)?,
            &b1.retype(shift(ett, h - a), shift(et, h - a), n)?,
        )?;
        let beta = GradedMatrix::block(
            &b1,
            &b2,
            &a2.mul_poly(&-gw, gw_deg)
                .retype(shift(dt, -a), et.to_vec(), n)?,
            &a1.retype(shift(dt, -a), shift(d, -a), n)?,
        )?;
        MorphismPair::new(&self.push(e)?, &self.push(t)?, n, alpha, beta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::hom_space;
    use crate::poly::GradedRing;
    use crate::scalar::Field;

    fn kx() -> Ring {
        GradedRing::new(&["x"], &[1], Field::Rationals).unwrap()
    }

    fn p(r: &Ring, s: &str) -> Poly {
        Poly::parse(r, s).unwrap()
    }

    fn a1_section() -> SectionData {
        let r = kx();
        let s = r.extend("w", 1).unwrap();
        SectionData::new(&r, "w", 1, &p(&r, "x^2"), &p(&s, "w")).unwrap()
    }

    #[test]
    fn section_validation() {
        let sec = a1_section();
        assert_eq!(sec.big_f().to_string(), "x^2 + w^2");
        assert_eq!(sec.h(), 2);
        assert!(sec.is_calabi_yau());
        let r = kx();
        let s = r.extend("w", 2).unwrap();
        let sec = SectionData::new(&r, "w", 2, &p(&r, "x^4"), &p(&s, "w")).unwrap();
        assert_eq!(sec.big_f().to_string(), "x^4 + w^2");
        let err = SectionData::new(&r, "w", 2, &p(&r, "x^4"), &p(&s, "1")).unwrap_err();
        assert!(err.to_string().contains("g not in wS") || err.to_string().contains("not in wS"));
        assert!(SectionData::new(&r, "w", 2, &p(&r, "x^4"), &p(&s, "w^2")).is_err());
        assert!(SectionData::new(&r, "x", 2, &p(&r, "x^4"), &p(&s, "w")).is_err());
        let fw = p(&s, "x^4 + w^2");
        assert!(SectionData::new(&r, "w", 2, &fw, &p(&s, "w")).is_err());
    }

    #[test]
    fn push_a1() {
        let sec = a1_section();
        let r = sec.base().clone();
        let e = MatrixFactorization::koszul_rank1(&p(&r, "x"), &p(&r, "x")).unwrap();
        let pe = sec.push(&e).unwrap();
        assert_eq!(pe.phi().to_string(), "[[x, w], [-w, x]]");
        assert_eq!(pe.psi().to_string(), "[[x, -w], [w, x]]");
        assert_eq!(pe.d(), &[0, 0]);
        assert_eq!(pe.e(), &[-1, -1]);
        assert_eq!(hom_space(&pe, &pe, 0).unwrap().dim, 2);
    }

    #[test]
    fn push_a3() {
        let r = kx();
        let s = r.extend("w", 2).unwrap();
        let sec = SectionData::new(&r, "w", 2, &p(&r, "x^4"), &p(&s, "w")).unwrap();
        let e = MatrixFactorization::koszul_rank1(&p(&r, "x"), &p(&r, "x^3")).unwrap();
        let pe = sec.push(&e).unwrap();
        assert_eq!(pe.phi().to_string(), "[[x, w], [-w, x^3]]");
        assert_eq!(pe.d(), &[0, 1]);
        assert_eq!(pe.e(), &[-1, -2]);
        let zero = MatrixFactorization::zero(&p(&r, "x^4")).unwrap();
        assert_eq!(sec.push(&zero).unwrap().rank(), 0);
    }

    #[test]
    fn induced_identity() {
        let sec = a1_section();
        let r = sec.base().clone();
        let e = MatrixFactorization::koszul_rank1(&p(&r, "x"), &p(&r, "x")).unwrap();
        let m2 = MorphismPair::zero(&sec.second_source(&e), &e, 0).unwrap();
        let m = sec.induce_morphism(&e.identity(), &m2).unwrap();
        assert_eq!(m, sec.push(&e).unwrap().identity());
    }
}
