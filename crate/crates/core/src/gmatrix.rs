//! Matrices of polynomials between twisted graded free modules.
//!
//! A matrix with target twists `t` and source twists `s` represents a map
//! `⊕ R(s_i) → ⊕ R(t_j)` shifted by `offset`: entry `(j, i)` is homogeneous of
//! degree `t_j - s_i + offset` or zero. Twists follow `M(n)_m = M_{n+m}`.

use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::poly::{Poly, Ring};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMatrix {
    ring: Ring,
    target: Vec<i64>,
    source: Vec<i64>,
    offset: i64,
    entries: Vec<Poly>,
}

impl GradedMatrix {
    pub fn new(
        ring: &Ring,
        target: Vec<i64>,
        source: Vec<i64>,
        entries: Vec<Vec<Poly>>,
        offset: i64,
    ) -> Result<GradedMatrix> {
        if entries.len() != target.len() {
            return Err(Error::Shape(format!(
                "{} rows given for {} target twists",
                entries.len(),
                target.len()
            )));
        }
        let mut flat = Vec::with_capacity(target.len() * source.len());
        for (j, row) in entries.into_iter().enumerate() {
            if row.len() != source.len() {
                return Err(Error::Shape(format!(
                    "row {j} has {} entries for {} source twists",
                    row.len(),
                    source.len()
                )));
            }
            flat.extend(row);
        }
        Self::from_flat(ring, target, source, flat, offset)
    }

    /// Row-major constructor with full validation.
    pub fn from_flat(
        ring: &Ring,
        target: Vec<i64>,
        source: Vec<i64>,
        entries: Vec<Poly>,
        offset: i64,
    ) -> Result<GradedMatrix> {
        let m = GradedMatrix {
            ring: ring.clone(),
            target,
            source,
            offset,
            entries,
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        if self.entries.len() != self.target.len() * self.source.len() {
            return Err(Error::Shape("entry count does not match twists".into()));
        }
        for j in 0..self.rows() {
            for i in 0..self.cols() {
                let p = self.get(j, i);
                if p.ring() != &self.ring {
                    return Err(Error::RingMismatch(format!(
                        "entry ({j}, {i}) lives in {}",
                        p.ring()
                    )));
                }
                let want = self.entry_degree(j, i);
                if !p.is_homogeneous_of(want) {
                    let got = match p.degree_of() {
                        crate::poly::Degree::Homogeneous(d) => d.to_string(),
                        _ => "an inhomogeneous polynomial".into(),
                    };
                    return Err(Error::Degree(format!(
                        "entry ({j}, {i}) = {p}: expected degree {want}, got {got}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn zero(ring: &Ring, target: Vec<i64>, source: Vec<i64>, offset: i64) -> GradedMatrix {
        let n = target.len() * source.len();
        GradedMatrix {
            ring: ring.clone(),
            target,
            source,
            offset,
            entries: vec![Poly::zero(ring); n],
        }
    }

    pub fn identity_on(ring: &Ring, twists: &[i64]) -> GradedMatrix {
        Self::scalar_on(ring, twists, &Poly::one(ring), 0)
    }

    /// `p · id` on `⊕ R(t_i)`, where `p` has degree `offset`.
    pub fn scalar_on(ring: &Ring, twists: &[i64], p: &Poly, offset: i64) -> GradedMatrix {
        let mut m = Self::zero(ring, twists.to_vec(), twists.to_vec(), offset);
        for i in 0..twists.len() {
            m.entries[i * twists.len() + i] = p.clone();
        }
        debug_assert!(m.validate().is_ok());
        m
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn target(&self) -> &[i64] {
        &self.target
    }

    pub fn source(&self) -> &[i64] {
        &self.source
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn rows(&self) -> usize {
        self.target.len()
    }

    pub fn cols(&self) -> usize {
        self.source.len()
    }

    pub fn get(&self, j: usize, i: usize) -> &Poly {
        &self.entries[j * self.source.len() + i]
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn entry_degree(&self, j: usize, i: usize) -> i64 {
        self.target[j] - self.source[i] + self.offset
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn row_polys(&self) -> Vec<Vec<Poly>> {
        (0..self.rows())
            .map(|j| (0..self.cols()).map(|i| self.get(j, i).clone()).collect())
            .collect()
    }

    /// `self ∘ other`; requires `self.source == other.target`. Offsets add.
    pub fn compose(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch("compose across rings".into()));
        }
        if self.source != other.target {
            return Err(Error::Shape(format!(
                "cannot compose: source {:?} vs target {:?}",
                self.source, other.target
            )));
        }
        let (n, k, m) = (self.rows(), self.cols(), other.cols());
        let mut entries = Vec::with_capacity(n * m);
        for j in 0..n {
            for i in 0..m {
                let mut acc = Poly::zero(&self.ring);
                for l in 0..k {
                    let a = self.get(j, l);
                    let b = other.get(l, i);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                entries.push(acc);
            }
        }
        Ok(GradedMatrix {
            ring: self.ring.clone(),
            target: self.target.clone(),
            source: other.source.clone(),
            offset: self.offset + other.offset,
            entries,
        })
    }

    fn check_same_shape(&self, other: &GradedMatrix) -> Result<()> {
        if self.ring != other.ring
            || self.target != other.target
            || self.source != other.source
            || self.offset != other.offset
        {
            return Err(Error::Shape(format!(
                "shape mismatch: ({:?}, {:?}, {}) vs ({:?}, {:?}, {})",
                self.target, self.source, self.offset, other.target, other.source, other.offset
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        self.check_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        self.check_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &GradedMatrix, f: impl Fn(&Poly, &Poly) -> Poly) -> GradedMatrix {
        GradedMatrix {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
            ..self.clone()
        }
    }

    pub fn neg(&self) -> GradedMatrix {
        self.map_entries(|p| -p)
    }

    pub fn scale(&self, c: &Scalar) -> GradedMatrix {
        self.map_entries(|p| p.scale(c))
    }

    /// Multiplies every entry by a homogeneous polynomial of degree `deg`.
    pub fn mul_poly(&self, p: &Poly, deg: i64) -> GradedMatrix {
        GradedMatrix {
            offset: self.offset + deg,
            ..self.map_entries(|q| q * p)
        }
    }

    pub fn map_entries(&self, f: impl Fn(&Poly) -> Poly) -> GradedMatrix {
        GradedMatrix {
            entries: self.entries.iter().map(f).collect(),
            ..self.clone()
        }
    }

    /// Same entries with new typing; revalidated.
    pub fn retype(&self, target: Vec<i64>, source: Vec<i64>, offset: i64) -> Result<GradedMatrix> {
        Self::from_flat(&self.ring, target, source, self.entries.clone(), offset)
    }

    /// Adds `n` to every twist on both sides; entries are unchanged.
    pub fn twist(&self, n: i64) -> GradedMatrix {
        GradedMatrix {
            target: self.target.iter().map(|t| t + n).collect(),
            source: self.source.iter().map(|s| s + n).collect(),
            ..self.clone()
        }
    }

    /// Assembles `[[a, b], [c, d]]`. Twists come from `a` (top-left), `d` is
    /// only checked for consistency.
    pub fn block(
        a: &GradedMatrix,
        b: &GradedMatrix,
        c: &GradedMatrix,
        d: &GradedMatrix,
    ) -> Result<GradedMatrix> {
        let consistent = a.target == b.target
            && c.target == d.target
            && a.source == c.source
            && b.source == d.source
            && [b.offset, c.offset, d.offset]
                .iter()
                .all(|&o| o == a.offset);
        if !consistent {
            return Err(Error::Shape("inconsistent block twists".into()));
        }
        let target: Vec<i64> = a.target.iter().chain(&c.target).copied().collect();
        let source: Vec<i64> = a.source.iter().chain(&b.source).copied().collect();
        let mut entries = Vec::with_capacity(target.len() * source.len());
        for (top, bottom) in [(a, b), (c, d)] {
            for j in 0..top.rows() {
                for i in 0..top.cols() {
                    entries.push(top.get(j, i).clone());
                }
                for i in 0..bottom.cols() {
                    entries.push(bottom.get(j, i).clone());
                }
            }
        }
        Self::from_flat(&a.ring, target, source, entries, a.offset)
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        let tr = GradedMatrix::zero(
            &self.ring,
            self.target.clone(),
            other.source.clone(),
            self.offset,
        );
        let bl = GradedMatrix::zero(
            &self.ring,
            other.target.clone(),
            self.source.clone(),
            self.offset,
        );
        if self.offset != other.offset {
            return Err(Error::Shape(
                "direct sum of matrices with different offsets".into(),
            ));
        }
        Self::block(self, &tr, &bl, other)
    }

    pub fn sub_block(&self, rows: Range<usize>, cols: Range<usize>) -> GradedMatrix {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for j in rows.clone() {
            for i in cols.clone() {
                entries.push(self.get(j, i).clone());
            }
        }
        GradedMatrix {
            ring: self.ring.clone(),
            target: self.target[rows].to_vec(),
            source: self.source[cols].to_vec(),
            offset: self.offset,
            entries,
        }
    }

    pub fn embed(&self, target_ring: &Ring) -> Result<GradedMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|p| p.embed(target_ring))
            .collect::<Result<Vec<_>>>()?;
        Ok(GradedMatrix {
            ring: target_ring.clone(),
            entries,
            ..self.clone()
        })
    }

    pub fn restrict(&self, target_ring: &Ring) -> Result<GradedMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|p| p.restrict(target_ring))
            .collect::<Result<Vec<_>>>()?;
        Ok(GradedMatrix {
            ring: target_ring.clone(),
            entries,
            ..self.clone()
        })
    }
}

impl fmt::Display for GradedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for j in 0..self.rows() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for i in 0..self.cols() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(j, i))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
