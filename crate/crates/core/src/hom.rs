//! Morphism spaces in the homotopy category of graded matrix factorizations.
//!
//! For `E = (φ, ψ)` and `E' = (φ', ψ')` a degree-`n` morphism `E → E'(n)` is
//! a pair `(α, β)` with `αφ = φ'β` and `βψ = ψ'α`; it is null-homotopic when
//! `α = φ'ξ + ηψ` and `β = ψ'η + ξφ`. Every entry lives in a finite graded
//! piece, so both conditions are finite linear systems over the base field.
//!
//! Homotopy typing: `ξ: M_0 → M'_1(n)` is a degree-`n` map, but `η` has to
//! be typed `M_1 → M'_0(n)` with an extra `-h`, because `ηψ` must land in the
//! degree of `α` while `ψ` itself raises degree by `h`.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::Result;
use crate::linsys::{check_cap, linear_map, BlockShape, Layout, Term, DEFAULT_CAP};
use crate::mf::{MatrixFactorization, MorphismPair};
use crate::par;
use crate::scalar::{RowSpace, Scalar, ScalarMatrix};

#[derive(Clone)]
pub struct HomResult {
    pub source: MatrixFactorization,
    /// The translated target `E'[i]`; morphisms land in `target(twist)`.
    pub target: MatrixFactorization,
    pub twist: i64,
    pub shift: i64,
    pub cycle_dim: usize,
    pub boundary_dim: usize,
    pub dim: usize,
    /// Kernel basis in `(α, β)` coordinates.
    pub cycle_basis: Vec<Vec<Scalar>>,
    /// Independent images of the homotopy map, in the same coordinates.
    pub boundary_basis: Vec<Vec<Scalar>>,
    layout: Layout,
    homotopy: ScalarMatrix,
}

impl std::fmt::Debug for HomResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HomResult")
            .field("twist", &self.twist)
            .field("shift", &self.shift)
            .field("cycle_dim", &self.cycle_dim)
            .field("boundary_dim", &self.boundary_dim)
            .field("dim", &self.dim)
            .finish()
    }
}

/// Coordinate layout of `(α, β)` for morphisms `E → E'(n)`.
fn cycle_layout(e: &MatrixFactorization, t: &MatrixFactorization, n: i64) -> Layout {
    Layout::new(
        e.ring(),
        vec![
            BlockShape::new(t.d(), e.d(), n),
            BlockShape::new(t.e(), e.e(), n),
        ],
    )
}

fn homotopy_layout(e: &MatrixFactorization, t: &MatrixFactorization, n: i64) -> Layout {
    let h = e.degree();
    Layout::new(
        e.ring(),
        vec![
            BlockShape::new(t.e(), e.d(), n),
            BlockShape::new(t.d(), e.e(), n - h),
        ],
    )
}

/// Matrix of `(α, β) ↦ (αφ - φ'β, βψ - ψ'α)`.
pub(crate) fn cocycle_matrix(
    e: &MatrixFactorization,
    t: &MatrixFactorization,
    n: i64,
    layout: &Layout,
) -> ScalarMatrix {
    let h = e.degree();
    let eqs = Layout::new(
        e.ring(),
        vec![
            BlockShape::new(t.d(), e.e(), n),
            BlockShape::new(t.e(), e.d(), n + h),
        ],
    );
    linear_map(
        layout,
        &eqs,
        &[
            Term::new(0, 0).right(e.phi()),
            Term::new(0, 1).left(t.phi()).negated(),
            Term::new(1, 1).right(e.psi()),
            Term::new(1, 0).left(t.psi()).negated(),
        ],
    )
}

/// Matrix of `(ξ, η) ↦ (φ'ξ + ηψ, ψ'η + ξφ)` into `(α, β)` coordinates.
pub(crate) fn homotopy_matrix(
    e: &MatrixFactorization,
    t: &MatrixFactorization,
    homotopies: &Layout,
    layout: &Layout,
) -> ScalarMatrix {
    linear_map(
        homotopies,
        layout,
        &[
            Term::new(0, 0).left(t.phi()),
            Term::new(0, 1).right(e.psi()),
            Term::new(1, 1).left(t.psi()),
            Term::new(1, 0).right(e.phi()),
        ],
    )
}

pub fn hom_space(e: &MatrixFactorization, t: &MatrixFactorization, n: i64) -> Result<HomResult> {
    hom_space_capped(e, t, n, DEFAULT_CAP)
}

/// [`hom_space`] with an explicit bound on the number of unknowns.
pub fn hom_space_capped(
    e: &MatrixFactorization,
    t: &MatrixFactorization,
    n: i64,
    cap: usize,
) -> Result<HomResult> {
    e.check_compatible(t)?;
    let layout = cycle_layout(e, t, n);
    let hl = homotopy_layout(e, t, n);
    check_cap(layout.len() + hl.len(), cap)?;

    let cocycle = cocycle_matrix(e, t, n, &layout);
    let cycle_basis = cocycle.nullspace();
    let homotopy = homotopy_matrix(e, t, &hl, &layout);
    assert!(
        cocycle.mul(&homotopy).is_zero(),
        "null-homotopic pairs must be cocycles"
    );

    let mut span = RowSpace::new(layout.field(), layout.len());
    let mut boundary_basis = Vec::new();
    for c in 0..homotopy.cols() {
        let col = homotopy.column(c);
        if span.insert(&col) {
            boundary_basis.push(col);
        }
    }
    let cycle_dim = cycle_basis.len();
    let boundary_dim = boundary_basis.len();
    assert!(boundary_dim <= cycle_dim);
    Ok(HomResult {
        source: e.clone(),
        target: t.clone(),
        twist: n,
        shift: 0,
        cycle_dim,
        boundary_dim,
        dim: cycle_dim - boundary_dim,
        cycle_basis,
        boundary_basis,
        layout,
        homotopy,
    })
}

/// `Hom(E, E'(n)[i])`.
pub fn hom_shifted(
    e: &MatrixFactorization,
    t: &MatrixFactorization,
    n: i64,
    i: i64,
) -> Result<HomResult> {
    hom_shifted_capped(e, t, n, i, DEFAULT_CAP)
}

pub fn hom_shifted_capped(
    e: &MatrixFactorization,
    t: &MatrixFactorization,
    n: i64,
    i: i64,
    cap: usize,
) -> Result<HomResult> {
    let mut r = hom_space_capped(e, &t.translate(i, 0), n, cap)?;
    r.shift = i;
    Ok(r)
}

impl HomResult {
    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    fn to_pair(&self, v: &[Scalar]) -> MorphismPair {
        let mut blocks = self.layout.decode(v).into_iter();
        let alpha = blocks.next().expect("alpha block");
        let beta = blocks.next().expect("beta block");
        MorphismPair::new(&self.source, &self.target, self.twist, alpha, beta)
            .expect("basis vectors are cocycles")
    }

    pub fn cycle_pairs(&self) -> Vec<MorphismPair> {
        self.cycle_basis.iter().map(|v| self.to_pair(v)).collect()
    }

    pub fn boundary_pairs(&self) -> Vec<MorphismPair> {
        self.boundary_basis
            .iter()
            .map(|v| self.to_pair(v))
            .collect()
    }

    /// Cycles whose classes form a basis of the Hom space.
    pub fn class_basis(&self) -> Vec<MorphismPair> {
        let mut span = RowSpace::new(self.layout.field(), self.layout.len());
        for b in &self.boundary_basis {
            span.insert(b);
        }
        self.cycle_basis
            .iter()
            .filter(|v| span.insert(v))
            .map(|v| self.to_pair(v))
            .collect()
    }

    pub fn encode(&self, m: &MorphismPair) -> Result<Vec<Scalar>> {
        self.layout.encode(&[m.alpha(), m.beta()])
    }

    /// Whether `m` is null-homotopic.
    pub fn is_boundary(&self, m: &MorphismPair) -> Result<bool> {
        let v = self.encode(m)?;
        let mut span = RowSpace::new(self.layout.field(), self.layout.len());
        for b in &self.boundary_basis {
            span.insert(b);
        }
        Ok(span.contains(&v))
    }

    /// A homotopy `(ξ, η)` in coordinates whose boundary is `v`, if any.
    pub fn homotopy_for(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        self.homotopy.solve(v)
    }

    pub(crate) fn homotopy_matrix(&self) -> &ScalarMatrix {
        &self.homotopy
    }
}

/// Dimensions of `Hom(E, E'(n)[i])` keyed by `(i, n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomTable {
    pub cells: BTreeMap<(i64, i64), usize>,
}

impl HomTable {
    pub fn get(&self, i: i64, n: i64) -> Option<usize> {
        self.cells.get(&(i, n)).copied()
    }

    pub fn nonzero(&self) -> Vec<((i64, i64), usize)> {
        self.cells
            .iter()
            .filter(|(_, &v)| v > 0)
            .map(|(&k, &v)| (k, v))
            .collect()
    }
}

pub fn hom_table(
    e: &MatrixFactorization,
    t: &MatrixFactorization,
    twists: RangeInclusive<i64>,
    shifts: RangeInclusive<i64>,
) -> Result<HomTable> {
    hom_table_capped(e, t, twists, shifts, DEFAULT_CAP)
}

pub fn hom_table_capped(
    e: &MatrixFactorization,
    t: &MatrixFactorization,
    twists: RangeInclusive<i64>,
    shifts: RangeInclusive<i64>,
    cap: usize,
) -> Result<HomTable> {
    e.check_compatible(t)?;
    let keys: Vec<(i64, i64)> = shifts
        .flat_map(|i| twists.clone().map(move |n| (i, n)))
        .collect();
    let dims = par::map(keys.clone(), |(i, n)| {
        hom_shifted_capped(e, t, n, i, cap).map(|r| r.dim)
    });
    let mut cells = BTreeMap::new();
    for (k, d) in keys.into_iter().zip(dims) {
        cells.insert(k, d?);
    }
    Ok(HomTable { cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{GradedRing, Poly, Ring};
    use crate::scalar::Field;

    fn kx() -> Ring {
        GradedRing::new(&["x"], &[1], Field::Rationals).unwrap()
    }

    fn p(r: &Ring, s: &str) -> Poly {
        Poly::parse(r, s).unwrap()
    }

    fn a1() -> MatrixFactorization {
        let r = kx();
        MatrixFactorization::koszul_rank1(&p(&r, "x"), &p(&r, "x")).unwrap()
    }

    fn a2(s: u32) -> MatrixFactorization {
        let r = kx();
        MatrixFactorization::koszul_rank1(
            &p(&r, &format!("x^{s}")),
            &p(&r, &format!("x^{}", 3 - s)),
        )
        .unwrap()
    }

    #[test]
    fn a1_endomorphisms() {
        let e = a1();
        let r = hom_space(&e, &e, 0).unwrap();
        assert_eq!((r.cycle_dim, r.boundary_dim, r.dim), (1, 0, 1));
        assert!(!r.is_boundary(&e.identity()).unwrap());
        assert_eq!(hom_space(&e, &e, -5).unwrap().dim, 0);
        assert_eq!(hom_space(&e, &e, -5).unwrap().cycle_dim, 0);
    }

    #[test]
    fn a1_shifted() {
        let e = a1();
        assert_eq!(hom_shifted(&e, &e, -1, 1).unwrap().dim, 1);
        assert_eq!(hom_shifted(&e, &e, 0, 1).unwrap().dim, 0);
        assert_eq!(
            hom_shifted(&e, &e, 0, 0).unwrap().dim,
            hom_space(&e, &e, 0).unwrap().dim
        );
    }

    #[test]
    fn a2_directed_pair() {
        assert_eq!(hom_space(&a2(2), &a2(1), 0).unwrap().dim, 1);
        assert_eq!(hom_space(&a2(1), &a2(2), 0).unwrap().dim, 0);
    }

    #[test]
    fn shift_is_a_twist_for_a1() {
        let e = a1();
        // E[1] and E(1) are isomorphic: a degree-0 invertible pair exists.
        let r = hom_space(&e.twist(1), &e.suspend(), 0).unwrap();
        assert_eq!(r.dim, 1);
        let m = &r.class_basis()[0];
        assert!(!m.alpha().get(0, 0).is_zero() && !m.beta().get(0, 0).is_zero());
    }

    #[test]
    fn a1_table() {
        let e = a1();
        let t = hom_table(&e, &e, -1..=1, 0..=1).unwrap();
        assert_eq!(t.nonzero(), vec![((0, 0), 1), ((1, -1), 1)]);
        let zero = MatrixFactorization::zero(e.potential()).unwrap();
        let z = hom_table(&zero, &e, -1..=1, 0..=1).unwrap();
        assert!(z.nonzero().is_empty());
    }

    #[test]
    fn direct_sum_additive() {
        let e = a1();
        let ee = e.direct_sum(&e).unwrap();
        assert_eq!(hom_space(&ee, &e, 0).unwrap().dim, 2);
        assert_eq!(hom_space(&ee, &ee, 0).unwrap().dim, 4);
    }

    #[test]
    fn cap_is_enforced() {
        let e = a1();
        assert!(matches!(
            hom_space_capped(&e, &e, 40, 3),
            Err(crate::Error::TooLarge { .. })
        ));
    }
}
