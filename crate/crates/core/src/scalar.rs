//! Exact coefficient fields and dense linear algebra over them.
//!
//! Two fields are supported: arbitrary-precision rationals and prime fields
//! `GF(p)` with `p < 2^31`. Elements carry enough information to do arithmetic
//! on their own, so polynomials and matrices never need a field handle for the
//! ring operations; only constants (zero, one, integer literals) go through
//! [`Field`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

const PRIME_LIMIT: u64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Field {
    Rationals,
    Prime(u32),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// Builds a prime field, rejecting composite or oversized moduli.
    pub fn prime(p: u64) -> Result<Field> {
        if p >= PRIME_LIMIT {
            return Err(Error::Field(format!("modulus {p} must be below 2^31")));
        }
        if !is_prime(p) {
            return Err(Error::Field(format!("{p} is not prime")));
        }
        Ok(Field::Prime(p as u32))
    }

    /// Parses `Q`, `QQ`, `GF(p)`, `GF:p` or `GFp`.
    pub fn parse(text: &str) -> Result<Field> {
        let t = text.trim();
        if t == "Q" || t == "QQ" {
            return Ok(Field::Rationals);
        }
        let rest = t
            .strip_prefix("GF")
            .ok_or_else(|| Error::Field(format!("unknown field `{t}`")))?;
        let digits = rest
            .trim_start_matches([':', '('])
            .trim_end_matches(')')
            .trim();
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::Field(format!("bad modulus in `{t}`")))?;
        Field::prime(p)
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::zero()),
            Field::Prime(p) => Scalar::Modular(0, *p),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::one()),
            Field::Prime(p) => Scalar::Modular(1, *p),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(*p));
                Scalar::Modular(r.to_u32().expect("reduced residue fits"), *p)
            }
        }
    }

    /// Maps a rational into the field; fails when the denominator vanishes mod p.
    pub fn from_rational(&self, q: &BigRational) -> Option<Scalar> {
        match self {
            Field::Rationals => Some(Scalar::Rational(q.clone())),
            Field::Prime(_) => {
                let num = self.from_bigint(q.numer());
                let den = self.from_bigint(q.denom());
                den.inv().map(|d| &num * &d)
            }
        }
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        match (self, s) {
            (Field::Rationals, Scalar::Rational(_)) => true,
            (Field::Prime(p), Scalar::Modular(_, q)) => p == q,
            _ => false,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

/// A field element. Prime-field elements carry their modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Modular(u32, u32),
}

fn mixed() -> ! {
    panic!("arithmetic between elements of different fields")
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rationals,
            Scalar::Modular(_, p) => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Modular(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Modular(v, _) => *v == 1,
        }
    }

    /// True when the printed form would start with a minus sign.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_negative(),
            Scalar::Modular(..) => false,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Modular(v, p) => {
                let p64 = *p as u64;
                Scalar::Modular(pow_mod(*v as u64, p64 - 2, p64) as u32, *p)
            }
        })
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(q.abs()),
            s => s.clone(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Modular(v, _) => write!(f, "{v}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Modular(a, p), Scalar::Modular(b, q)) if p == q => {
                Scalar::Modular(((*a as u64 + *b as u64) % *p as u64) as u32, *p)
            }
            _ => mixed(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Modular(a, p), Scalar::Modular(b, q)) if p == q => {
                Scalar::Modular(((*a as u64 + *p as u64 - *b as u64) % *p as u64) as u32, *p)
            }
            _ => mixed(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Modular(a, p), Scalar::Modular(b, q)) if p == q => {
                Scalar::Modular((*a as u64 * *b as u64 % *p as u64) as u32, *p)
            }
            _ => mixed(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Modular(0, p) => Scalar::Modular(0, *p),
            Scalar::Modular(a, p) => Scalar::Modular(p - a, *p),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Dense row-major matrix over a [`Field`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: ScalarMatrix,
    pub pivots: Vec<usize>,
}

impl ScalarMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        ScalarMatrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<Scalar>>) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        ScalarMatrix {
            field,
            rows: nrows,
            cols,
            data,
        }
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            field,
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
                .collect(),
        )
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.set(r, c, v.clone());
                }
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, other: &ScalarMatrix) -> ScalarMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = ScalarMatrix::zeros(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let v = out.get(r, c) + &(a * b);
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Gauss-Jordan elimination. Pivots are the first nonzero entry in each
    /// column scanning downward, rows are normalized to a leading one, and
    /// every entry is kept in lowest terms after each step.
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..m.cols {
            if prow == m.rows {
                break;
            }
            let Some(found) = (prow..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if found != prow {
                m.swap_rows(found, prow);
            }
            let inv = m.get(prow, col).inv().expect("pivot is nonzero");
            for c in col..m.cols {
                let v = m.get(prow, c);
                if !v.is_zero() {
                    let v = v * &inv;
                    m.set(prow, c, v);
                }
            }
            let pivot_row: Vec<(usize, Scalar)> = (col..m.cols)
                .filter_map(|c| {
                    let v = m.get(prow, c);
                    (!v.is_zero()).then(|| (c, v.clone()))
                })
                .collect();
            for r in 0..m.rows {
                if r == prow {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for (c, pv) in &pivot_row {
                    let v = m.get(r, *c) - &(&factor * pv);
                    m.set(r, *c, v);
                }
            }
            pivots.push(col);
            prow += 1;
        }
        Echelon { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right kernel: one vector per free column in increasing
    /// order, with a one in that column and zeros in the other free columns.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let Echelon { matrix, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![self.field.zero(); self.cols];
                v[free] = self.field.one();
                for (row, &p) in pivots.iter().enumerate() {
                    let e = matrix.get(row, free);
                    if !e.is_zero() {
                        v[p] = -e;
                    }
                }
                v
            })
            .collect()
    }

    /// One solution of `self * x = rhs`, with free variables set to zero.
    pub fn solve(&self, rhs: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(rhs.len(), self.rows);
        let mut aug = ScalarMatrix::zeros(self.field, self.rows, self.cols + 1);
        for (r, v) in rhs.iter().enumerate() {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, v.clone());
        }
        let Echelon { matrix, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = matrix.get(row, self.cols).clone();
        }
        Some(x)
    }
}

/// Incrementally maintained row space in reduced echelon form; supports
/// membership tests and basis extension one vector at a time.
#[derive(Clone, Debug)]
pub struct RowSpace {
    field: Field,
    dim: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(field: Field, dim: usize) -> Self {
        RowSpace {
            field,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.dim);
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let factor = v[p].clone();
            for (c, rv) in row.iter().enumerate() {
                if !rv.is_zero() {
                    v[c] = &v[c] - &(&factor * rv);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Adds `v` to the space; returns whether the rank grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().expect("nonzero");
        for x in r.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let factor = row[p].clone();
            for (c, rv) in r.iter().enumerate() {
                if !rv.is_zero() {
                    row[c] = &row[c] - &(&factor * rv);
                }
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        true
    }

    pub fn field(&self) -> Field {
        self.field
    }
}

/// Rank of the span of a list of vectors of length `dim`.
pub fn span_rank(field: Field, dim: usize, vectors: &[Vec<Scalar>]) -> usize {
    let mut space = RowSpace::new(field, dim);
    for v in vectors {
        space.insert(v);
    }
    space.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fields() {
        assert_eq!(Field::Rationals.characteristic(), 0);
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.from_i64(2).inv().unwrap(), f5.from_i64(3));
        assert!(Field::prime(4).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(2147483659).is_err());
        assert_eq!(Field::parse("GF(32003)").unwrap(), Field::Prime(32003));
        assert_eq!(Field::parse("GF:7").unwrap(), Field::Prime(7));
        assert_eq!(Field::parse("Q").unwrap(), Field::Rationals);
        assert!(Field::parse("R").is_err());
        assert_eq!(f5.from_i64(-1), Scalar::Modular(4, 5));
    }

    #[test]
    fn nullspace_examples() {
        let q = Field::Rationals;
        assert_eq!(ScalarMatrix::zeros(q, 3, 3).nullspace().len(), 3);
        let m = ScalarMatrix::from_i64(q, &[&[1, 2], &[2, 4]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0], vec![q.from_i64(-2), q.from_i64(1)]);
        assert!(ScalarMatrix::identity(q, 4).nullspace().is_empty());
    }

    #[test]
    fn solve_and_inconsistency() {
        let q = Field::Rationals;
        let m = ScalarMatrix::from_i64(q, &[&[1, 1], &[1, -1]]);
        let x = m.solve(&[q.from_i64(3), q.from_i64(1)]).unwrap();
        assert_eq!(x, vec![q.from_i64(2), q.from_i64(1)]);
        let s = ScalarMatrix::from_i64(q, &[&[1, 1], &[2, 2]]);
        assert!(s.solve(&[q.from_i64(1), q.from_i64(3)]).is_none());
    }

    #[test]
    fn row_space_membership() {
        let q = Field::Rationals;
        let mut s = RowSpace::new(q, 3);
        assert!(s.insert(&[q.from_i64(0), q.from_i64(1), q.from_i64(1)]));
        assert!(s.insert(&[q.from_i64(1), q.from_i64(1), q.from_i64(0)]));
        assert!(!s.insert(&[q.from_i64(1), q.from_i64(2), q.from_i64(1)]));
        assert!(s.contains(&[q.from_i64(2), q.from_i64(3), q.from_i64(1)]));
        assert!(!s.contains(&[q.from_i64(0), q.from_i64(0), q.from_i64(1)]));
    }
}
