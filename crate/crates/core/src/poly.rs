//! Weighted polynomial rings with strictly positive integer weights.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

pub type Exponent = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GradedRing {
    names: Vec<String>,
    weights: Vec<u32>,
    field: Field,
}

/// Shared handle to a ring; polynomials and matrices hold one.
pub type Ring = Arc<GradedRing>;

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl GradedRing {
    pub fn new<S: AsRef<str>>(names: &[S], weights: &[i64], field: Field) -> Result<Ring> {
        if names.len() != weights.len() {
            return Err(Error::Ring("names and weights differ in length".into()));
        }
        let mut out_names: Vec<String> = Vec::with_capacity(names.len());
        let mut out_weights = Vec::with_capacity(names.len());
        for (n, &w) in names.iter().zip(weights) {
            let n = n.as_ref();
            if !valid_identifier(n) {
                return Err(Error::Ring(format!("`{n}` is not a valid variable name")));
            }
            if out_names.iter().any(|m| m == n) {
                return Err(Error::Ring(format!("duplicate variable `{n}`")));
            }
            if w < 1 || w > u32::MAX as i64 {
                return Err(Error::Ring(format!(
                    "weight of `{n}` must be positive, got {w}"
                )));
            }
            out_names.push(n.to_string());
            out_weights.push(w as u32);
        }
        Ok(Arc::new(GradedRing {
            names: out_names,
            weights: out_weights,
            field,
        }))
    }

    /// Appends a fresh variable of weight `a`; the original ring embeds as the
    /// subring on the leading variables.
    pub fn extend(&self, wname: &str, a: i64) -> Result<Ring> {
        let mut names = self.names.clone();
        names.push(wname.to_string());
        let mut weights: Vec<i64> = self.weights.iter().map(|&w| w as i64).collect();
        weights.push(a);
        GradedRing::new(&names, &weights, self.field)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Gorenstein parameter of the polynomial ring: minus the weight sum.
    pub fn a_invariant(&self) -> i64 {
        -self.weights.iter().map(|&w| w as i64).sum::<i64>()
    }

    pub fn krull_dim(&self) -> usize {
        self.names.len()
    }

    pub fn monomial_degree(&self, exp: &[u32]) -> i64 {
        exp.iter()
            .zip(&self.weights)
            .map(|(&e, &w)| e as i64 * w as i64)
            .sum()
    }

    /// Descending graded-lex comparison: higher degree first, then
    /// lexicographically larger exponent first.
    pub fn cmp_monomials(&self, a: &[u32], b: &[u32]) -> Ordering {
        self.monomial_degree(b)
            .cmp(&self.monomial_degree(a))
            .then_with(|| b.cmp(a))
    }

    /// All monomials of weighted degree `m`, in graded-lex order.
    pub fn monomials_of_degree(&self, m: i64) -> Vec<Exponent> {
        let mut out = Vec::new();
        if m < 0 {
            return out;
        }
        let mut current = vec![0u32; self.nvars()];
        self.enumerate(0, m, &mut current, &mut out);
        out
    }

    fn enumerate(&self, var: usize, left: i64, current: &mut Exponent, out: &mut Vec<Exponent>) {
        if var == self.nvars() {
            if left == 0 {
                out.push(current.clone());
            }
            return;
        }
        let w = self.weights[var] as i64;
        let mut e = left / w;
        loop {
            current[var] = e as u32;
            self.enumerate(var + 1, left - e * w, current, out);
            if e == 0 {
                break;
            }
            e -= 1;
        }
        current[var] = 0;
    }

    /// True when `other` is this ring with extra variables appended.
    pub fn embeds_into(&self, other: &GradedRing) -> bool {
        self.field == other.field
            && other.names.len() >= self.names.len()
            && other.names[..self.names.len()] == self.names[..]
            && other.weights[..self.weights.len()] == self.weights[..]
    }
}

impl fmt::Display for GradedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.field)?;
        for (i, (n, w)) in self.names.iter().zip(&self.weights).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}:{w}")?;
        }
        write!(f, "]")
    }
}

/// Weighted degree of a polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    Zero,
    Homogeneous(i64),
    Inhomogeneous,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    ring: Ring,
    terms: Vec<(Exponent, Scalar)>,
}

fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Poly {
    pub fn zero(ring: &Ring) -> Poly {
        Poly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Ring, c: Scalar) -> Poly {
        Poly::monomial(ring, vec![0; ring.nvars()], c)
    }

    pub fn one(ring: &Ring) -> Poly {
        Poly::constant(ring, ring.field().one())
    }

    pub fn from_i64(ring: &Ring, c: i64) -> Poly {
        Poly::constant(ring, ring.field().from_i64(c))
    }

    pub fn monomial(ring: &Ring, exp: Exponent, c: Scalar) -> Poly {
        assert_eq!(exp.len(), ring.nvars());
        let terms = if c.is_zero() { vec![] } else { vec![(exp, c)] };
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn var(ring: &Ring, name: &str) -> Result<Poly> {
        let i = ring
            .var_index(name)
            .ok_or_else(|| Error::Ring(format!("unknown variable `{name}`")))?;
        Ok(Poly::var_at(ring, i))
    }

    pub fn var_at(ring: &Ring, i: usize) -> Poly {
        let mut exp = vec![0; ring.nvars()];
        exp[i] = 1;
        Poly::monomial(ring, exp, ring.field().one())
    }

    /// Collects terms, merging duplicates and dropping zeros.
    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Exponent, Scalar)>) -> Poly {
        let mut acc: HashMap<Exponent, Scalar> = HashMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), ring.nvars());
            match acc.get_mut(&e) {
                Some(v) => *v = &*v + &c,
                None => {
                    acc.insert(e, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| ring.cmp_monomials(&a.0, &b.0));
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn parse(ring: &Ring, text: &str) -> Result<Poly> {
        let expr = crate::dsl::parse_expr(text)?;
        expr.eval(ring)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[(Exponent, Scalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree_of(&self) -> Degree {
        let mut degs = self.terms.iter().map(|(e, _)| self.ring.monomial_degree(e));
        match degs.next() {
            None => Degree::Zero,
            Some(d) => {
                if degs.all(|x| x == d) {
                    Degree::Homogeneous(d)
                } else {
                    Degree::Inhomogeneous
                }
            }
        }
    }

    /// Zero counts as homogeneous of every degree.
    pub fn is_homogeneous_of(&self, d: i64) -> bool {
        self.terms
            .iter()
            .all(|(e, _)| self.ring.monomial_degree(e) == d)
    }

    pub fn coefficient(&self, exp: &[u32]) -> Option<&Scalar> {
        self.terms.iter().find(|(e, _)| e == exp).map(|(_, c)| c)
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.iter().any(|(e, _)| e[i] > 0)
    }

    pub fn substitute_zero(&self, i: usize) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[i] == 0)
                .cloned()
                .collect(),
        }
    }

    /// Exact division by variable `i`; `None` when some term is not divisible.
    pub fn divide_by_var(&self, i: usize) -> Option<Poly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            if e[i] == 0 {
                return None;
            }
            let mut e = e.clone();
            e[i] -= 1;
            terms.push((e, c.clone()));
        }
        Some(Poly {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    /// Multiplies by `c * x^exp`; term order is preserved by monomial shifts.
    pub fn mul_monomial(&self, exp: &[u32], c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.iter().zip(exp).map(|(x, y)| x + y).collect(), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(&self.ring);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn check_ring(&self, other: &Poly) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!(
                "{} vs {}",
                self.ring, other.ring
            )))
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_ring(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_ring(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_ring(other)?;
        Ok(self * other)
    }

    /// Image under the inclusion into a ring with extra trailing variables.
    pub fn embed(&self, target: &Ring) -> Result<Poly> {
        if !self.ring.embeds_into(target) {
            return Err(Error::RingMismatch(format!(
                "{} does not embed into {}",
                self.ring, target
            )));
        }
        let extra = target.nvars() - self.ring.nvars();
        Ok(Poly {
            ring: target.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e.extend(std::iter::repeat_n(0, extra));
                    (e, c.clone())
                })
                .collect(),
        })
    }

    /// Inverse of [`Poly::embed`]; fails if a dropped variable occurs.
    pub fn restrict(&self, target: &Ring) -> Result<Poly> {
        if !target.embeds_into(&self.ring) {
            return Err(Error::RingMismatch(format!(
                "{} is not a subring of {}",
                target, self.ring
            )));
        }
        let n = target.nvars();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            if e[n..].iter().any(|&x| x > 0) {
                return Err(Error::RingMismatch(format!(
                    "{self} involves variables outside {target}"
                )));
            }
            terms.push((e[..n].to_vec(), c.clone()));
        }
        Ok(Poly {
            ring: target.clone(),
            terms,
        })
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert!(same_ring(&self.ring, &rhs.ring), "ring mismatch in add");
        let ring = &self.ring;
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &rhs.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        while i < a.len() && j < b.len() {
            match ring.cmp_monomials(&a[i].0, &b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Poly {
            ring: ring.clone(),
            terms: out,
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert!(same_ring(&self.ring, &rhs.ring), "ring mismatch in mul");
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(&self.ring);
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return rhs.mul_monomial(e, c);
        }
        if rhs.terms.len() == 1 {
            let (e, c) = &rhs.terms[0];
            return self.mul_monomial(e, c);
        }
        let products = self.terms.iter().flat_map(|(ea, ca)| {
            rhs.terms.iter().map(move |(eb, cb)| {
                (
                    ea.iter().zip(eb).map(|(x, y)| x + y).collect::<Exponent>(),
                    ca * cb,
                )
            })
        });
        Poly::from_terms(&self.ring, products)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            let constant = e.iter().all(|&x| x == 0);
            if constant || !mag.is_one() {
                factors.push(mag.to_string());
            }
            for (i, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => factors.push(self.ring.names[i].clone()),
                    _ => factors.push(format!("{}^{}", self.ring.names[i], x)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
