//! Exponent matrices of invertible polynomials and their transposes.
//!
//! Only the matrix-level conditions are enforced (square, non-zero
//! determinant, positive weights); isolatedness of the critical point is
//! not checked.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{GradedRing, Poly, Ring};
use crate::scalar::{Field, Scalar, ScalarMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentMatrix {
    /// Row `i` holds the exponents of the `i`-th monomial.
    pub rows: Vec<Vec<u32>>,
    pub names: Vec<String>,
    #[serde(skip)]
    field: Field,
}

impl ExponentMatrix {
    pub fn new(rows: Vec<Vec<u32>>, names: Vec<String>, field: Field) -> Result<ExponentMatrix> {
        let k = names.len();
        if rows.len() != k || rows.iter().any(|r| r.len() != k) {
            return Err(Error::Exponent(format!("expected a {k}x{k} matrix")));
        }
        let m = ExponentMatrix { rows, names, field };
        if m.rational().rank() < k {
            return Err(Error::Exponent("determinant is zero".into()));
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn transpose(&self) -> ExponentMatrix {
        let k = self.size();
        ExponentMatrix {
            rows: (0..k)
                .map(|i| (0..k).map(|j| self.rows[j][i]).collect())
                .collect(),
            names: self.names.clone(),
            field: self.field,
        }
    }

    fn rational(&self) -> ScalarMatrix {
        let q = Field::Rationals;
        ScalarMatrix::from_rows(
            q,
            self.size(),
            self.rows
                .iter()
                .map(|r| r.iter().map(|&a| q.from_i64(a as i64)).collect())
                .collect(),
        )
    }

    /// The polynomial `Σ_i Π_j x_j^{a_ij}` over `ring`.
    pub fn polynomial(&self, ring: &Ring) -> Poly {
        Poly::from_terms(
            ring,
            self.rows.iter().map(|r| (r.clone(), ring.field().one())),
        )
    }
}

impl fmt::Display for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                format!(
                    "[{}]",
                    r.iter()
                        .map(|a| a.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

pub fn exponent_matrix(p: &Poly) -> Result<ExponentMatrix> {
    let ring = p.ring();
    if p.terms().len() != ring.nvars() {
        return Err(Error::Exponent(format!(
            "{p} has {} terms but the ring has {} variables",
            p.terms().len(),
            ring.nvars()
        )));
    }
    if let Some((_, c)) = p.terms().iter().find(|(_, c)| !c.is_one()) {
        return Err(Error::Exponent(format!("coefficient {c} is not 1 in {p}")));
    }
    ExponentMatrix::new(
        p.terms().iter().map(|(e, _)| e.clone()).collect(),
        ring.names().to_vec(),
        ring.field(),
    )
}

/// Primitive positive weights `q` and degree `c` with `A q = c (1, …, 1)`.
pub fn weights_from_matrix(a: &ExponentMatrix) -> Result<(Vec<u32>, u32)> {
    let k = a.size();
    let q = Field::Rationals;
    let sol = a
        .rational()
        .solve(&vec![q.one(); k])
        .ok_or_else(|| Error::Exponent("matrix is singular".into()))?;
    let rats: Vec<_> = sol
        .iter()
        .map(|s| match s {
            Scalar::Rational(r) => r.clone(),
            Scalar::Modular(..) => unreachable!("solved over the rationals"),
        })
        .collect();
    let den = rats.iter().fold(BigInt::one(), |l, r| l.lcm(r.denom()));
    let ints: Vec<BigInt> = rats.iter().map(|r| (r * &den).to_integer()).collect();
    if let Some(i) = ints.iter().position(|w| !w.is_positive()) {
        return Err(Error::Exponent(format!(
            "weight of {} is not positive; no positive grading exists",
            a.names[i]
        )));
    }
    let g = ints.iter().fold(BigInt::zero(), |g, w| g.gcd(w));
    let small = |b: BigInt| {
        b.to_u32()
            .ok_or_else(|| Error::Exponent("weights too large".into()))
    };
    let weights = ints
        .into_iter()
        .map(|w| small(w / &g))
        .collect::<Result<Vec<u32>>>()?;
    let c: u64 = a.rows[0]
        .iter()
        .zip(&weights)
        .map(|(&e, &w)| e as u64 * w as u64)
        .sum();
    Ok((weights, small(BigInt::from(c))?))
}

/// The ring carrying `a`'s polynomial: weights from [`weights_from_matrix`],
/// or all ones when the matrix admits no positive grading.
pub fn natural_ring(a: &ExponentMatrix) -> Result<Ring> {
    let weights: Vec<i64> = match weights_from_matrix(a) {
        Ok((w, _)) => w.into_iter().map(i64::from).collect(),
        Err(_) => vec![1; a.size()],
    };
    GradedRing::new(&a.names, &weights, a.field)
}

/// The polynomial of the transposed exponent matrix, over its natural ring.
pub fn bh_transpose(a: &ExponentMatrix) -> Result<Poly> {
    let t = a.transpose();
    Ok(t.polynomial(&natural_ring(&t)?))
}
