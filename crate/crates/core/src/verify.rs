//! Dimension-level checks of the push-forward decomposition and of Serre
//! duality, plus splitting of push-forward morphisms.
//!
//! Both identities involve a duality exponent `δ` whose reading is ambiguous
//! (Krull dimension of `R` or of `R/(f)`), and a sign on the internal twist of
//! the dual summand. [`Convention::Auto`] tries every combination and reports
//! the ones that pass.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hom::{hom_shifted_capped, hom_space_capped};
use crate::linsys::DEFAULT_CAP;
use crate::mf::{MatrixFactorization, MorphismPair};
use crate::par;
use crate::push::SectionData;
use crate::scalar::ScalarMatrix;

/// Which Krull dimension the duality exponent is read as.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaBase {
    /// `dim R`, the number of variables.
    Ambient,
    /// `dim R/(f) = dim R - 1`.
    Quotient,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DualityConvention {
    pub delta: DeltaBase,
    /// `+1` or `-1`, applied to the internal twist of the dual summand.
    pub sign: i64,
}

impl DualityConvention {
    pub const CANDIDATES: [DualityConvention; 4] = [
        DualityConvention {
            delta: DeltaBase::Ambient,
            sign: 1,
        },
        DualityConvention {
            delta: DeltaBase::Quotient,
            sign: 1,
        },
        DualityConvention {
            delta: DeltaBase::Ambient,
            sign: -1,
        },
        DualityConvention {
            delta: DeltaBase::Quotient,
            sign: -1,
        },
    ];

    pub fn new(delta: DeltaBase, sign: i64) -> Result<DualityConvention> {
        if sign != 1 && sign != -1 {
            return Err(Error::Invalid(format!("sign must be 1 or -1, got {sign}")));
        }
        Ok(DualityConvention { delta, sign })
    }

    /// The exponent for a ring with `nvars` variables.
    pub fn delta_value(&self, nvars: usize) -> i64 {
        match self.delta {
            DeltaBase::Ambient => nvars as i64,
            DeltaBase::Quotient => nvars as i64 - 1,
        }
    }
}

impl fmt::Display for DualityConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.delta {
            DeltaBase::Ambient => "dim R",
            DeltaBase::Quotient => "dim R/(f)",
        };
        write!(f, "delta = {base}, sign = {:+}", self.sign)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    Auto,
    Fixed(DualityConvention),
}

impl Convention {
    fn candidates(&self) -> Vec<DualityConvention> {
        match self {
            Convention::Auto => DualityConvention::CANDIDATES.to_vec(),
            Convention::Fixed(c) => vec![*c],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub shift: i64,
    pub twist: i64,
    pub lhs: usize,
    pub summands: Vec<usize>,
    /// Internal twist carried by the dual summand.
    pub dual_twist: i64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub rows: Vec<ReportRow>,
    /// The convention the rows were evaluated under: the first passing one,
    /// or the first candidate tried when none passes.
    pub convention: DualityConvention,
    /// Every candidate convention that passed on all rows.
    pub passing: Vec<DualityConvention>,
    /// `(shift, twist)` of failing rows under `convention`.
    pub counterexamples: Vec<(i64, i64)>,
    pub pass: bool,
}

impl VerifyReport {
    fn assemble(
        candidates: &[DualityConvention],
        rows_for: impl Fn(&DualityConvention) -> Vec<ReportRow>,
    ) -> VerifyReport {
        let evaluated: Vec<(DualityConvention, Vec<ReportRow>)> =
            candidates.iter().map(|c| (*c, rows_for(c))).collect();
        let passing: Vec<DualityConvention> = evaluated
            .iter()
            .filter(|(_, rows)| rows.iter().all(|r| r.pass))
            .map(|(c, _)| *c)
            .collect();
        let (convention, rows) = evaluated
            .iter()
            .find(|(c, _)| passing.contains(c))
            .unwrap_or(&evaluated[0])
            .clone();
        let counterexamples = rows
            .iter()
            .filter(|r| !r.pass)
            .map(|r| (r.shift, r.twist))
            .collect();
        VerifyReport {
            rows,
            convention,
            pass: !passing.is_empty(),
            passing,
            counterexamples,
        }
    }
}

/// Computes `f(key)` for every distinct key, possibly in parallel.
fn dims<K, F>(keys: Vec<K>, f: F) -> Result<BTreeMap<K, usize>>
where
    K: Ord + Clone + Send + Sync,
    F: Fn(&K) -> Result<usize> + Sync + Send,
{
    let mut keys = keys;
    keys.sort();
    keys.dedup();
    let values = par::map(keys.clone(), |k| f(&k));
    keys.into_iter()
        .zip(values)
        .map(|(k, v)| v.map(|v| (k, v)))
        .collect()
}

/// Compares `dim Hom(ΦE, ΦE'(n)[i])` with
/// `dim Hom(E, E'(n)[i]) + dim Hom(E'(n), E(σ(r+h-a))[δ-i])`.
pub fn verify_theorem(
    e: &MatrixFactorization,
    t: &MatrixFactorization,
    sec: &SectionData,
    shifts: RangeInclusive<i64>,
    twists: RangeInclusive<i64>,
    conv: Convention,
) -> Result<VerifyReport> {
    verify_theorem_capped(e, t, sec, shifts, twists, conv, DEFAULT_CAP)
}

pub fn verify_theorem_capped(
    e: &MatrixFactorization,
    t: &MatrixFactorization,
    sec: &SectionData,
    shifts: RangeInclusive<i64>,
    twists: RangeInclusive<i64>,
    conv: Convention,
    cap: usize,
) -> Result<VerifyReport> {
    let pe = sec.push(e)?;
    let pt = sec.push(t)?;
    let cells: Vec<(i64, i64)> = shifts
        .flat_map(|i| twists.clone().map(move |n| (i, n)))
        .collect();
    let candidates = conv.candidates();
    let nvars = sec.base().nvars();
    let dual = sec.dual_twist();

    let lhs = dims(cells.clone(), |&(i, n)| {
        Ok(hom_shifted_capped(&pe, &pt, n, i, cap)?.dim)
    })?;
    let first = dims(cells.clone(), |&(i, n)| {
        Ok(hom_shifted_capped(e, t, n, i, cap)?.dim)
    })?;
    // Second summand keyed by (n, twist, shift).
    let second_keys = cells
        .iter()
        .flat_map(|&(i, n)| {
            candidates
                .iter()
                .map(move |c| (n, c.sign * dual, c.delta_value(nvars) - i))
        })
        .collect();
    let second = dims(second_keys, |&(n, tw, j)| {
        Ok(hom_shifted_capped(&t.twist(n), e, tw, j, cap)?.dim)
    })?;

    Ok(VerifyReport::assemble(&candidates, |c| {
        cells
            .iter()
            .map(|&(i, n)| {
                let tw = c.sign * dual;
                let s1 = first[&(i, n)];
                let s2 = second[&(n, tw, c.delta_value(nvars) - i)];
                let l = lhs[&(i, n)];
                ReportRow {
                    shift: i,
                    twist: n,
                    lhs: l,
                    summands: vec![s1, s2],
                    dual_twist: tw,
                    pass: l == s1 + s2,
                }
            })
            .collect()
    }))
}

/// Compares `dim Hom(E, E'(n))` with `dim Hom(E'(n), E(σ(r+h))[δ-1])`.
pub fn verify_serre(
    e: &MatrixFactorization,
    t: &MatrixFactorization,
    twists: RangeInclusive<i64>,
    conv: Convention,
) -> Result<VerifyReport> {
    verify_serre_capped(e, t, twists, conv, DEFAULT_CAP)
}

pub fn verify_serre_capped(
    e: &MatrixFactorization,
    t: &MatrixFactorization,
    twists: RangeInclusive<i64>,
    conv: Convention,
    cap: usize,
) -> Result<VerifyReport> {
    e.check_compatible(t)?;
    let candidates = conv.candidates();
    let nvars = e.ring().nvars();
    let rh = e.ring().a_invariant() + e.degree();
    let ns: Vec<i64> = twists.collect();

    let lhs = dims(ns.clone(), |&n| Ok(hom_space_capped(e, t, n, cap)?.dim))?;
    let keys = ns
        .iter()
        .flat_map(|&n| {
            candidates
                .iter()
                .map(move |c| (n, c.sign * rh, c.delta_value(nvars) - 1))
        })
        .collect();
    let rhs = dims(keys, |&(n, tw, j)| {
        Ok(hom_shifted_capped(&t.twist(n), e, tw, j, cap)?.dim)
    })?;

    Ok(VerifyReport::assemble(&candidates, |c| {
        ns.iter()
            .map(|&n| {
                let tw = c.sign * rh;
                let l = lhs[&n];
                let r = rhs[&(n, tw, c.delta_value(nvars) - 1)];
                ReportRow {
                    shift: 0,
                    twist: n,
                    lhs: l,
                    summands: vec![r],
                    dual_twist: tw,
                    pass: l == r,
                }
            })
            .collect()
    }))
}

/// Splits a morphism `ΦE → ΦE'(n)` into `m1: E → E'(n)` and
/// `m2: E[1](-a) → E'(n)` such that `induce_morphism(m1, m2)` is homotopic
/// to `c`. A homotopy first clears every `w`-multiple from the top block
/// row of `α` and `β`; the four corner blocks then have entries in `R`.
pub fn split_morphism(c: &MorphismPair, sec: &SectionData) -> Result<(MorphismPair, MorphismPair)> {
    split_morphism_capped(c, sec, DEFAULT_CAP)
}

pub fn split_morphism_capped(
    c: &MorphismPair,
    sec: &SectionData,
    cap: usize,
) -> Result<(MorphismPair, MorphismPair)> {
    let (pe, pt, n) = (c.source(), c.target(), c.twist());
    let c = MorphismPair::new(pe, pt, n, c.alpha().clone(), c.beta().clone())?;
    let rank_t = pt.rank() / 2;
    let rank_e = pe.rank() / 2;
    let hr = hom_space_capped(pe, pt, n, cap)?;
    let v = hr.encode(&c)?;
    let layout = hr.layout();
    let w = sec.w_index();
    let selected: Vec<usize> = layout
        .coordinates()
        .filter(|&(_, _, j, _, mono)| j < rank_t && mono[w] > 0)
        .map(|(k, ..)| k)
        .collect();
    let h = hr.homotopy_matrix();
    let field = layout.field();
    let p_h = ScalarMatrix::from_rows(
        field,
        h.cols(),
        selected.iter().map(|&k| h.row(k).to_vec()).collect(),
    );
    let p_v: Vec<_> = selected.iter().map(|&k| v[k].clone()).collect();
    let x = p_h.solve(&p_v).ok_or_else(|| {
        Error::Cocycle("no homotopy removes the w-dependence of the top blocks".into())
    })?;
    let hx = h.mul_vec(&x);
    let reduced: Vec<_> = v.iter().zip(&hx).map(|(a, b)| a - b).collect();
    let mut blocks = layout.decode(&reduced).into_iter();
    let alpha = blocks.next().expect("alpha block");
    let beta = blocks.next().expect("beta block");

    let (e, t) = base_objects(pe, pt, sec)?;
    let base = sec.base();
    let top = 0..rank_t;
    let a1 = alpha.sub_block(top.clone(), 0..rank_e).restrict(base)?;
    let a2 = alpha
        .sub_block(top.clone(), rank_e..2 * rank_e)
        .restrict(base)?;
    let b1 = beta.sub_block(top.clone(), 0..rank_e).restrict(base)?;
    let b2 = beta.sub_block(top, rank_e..2 * rank_e).restrict(base)?;
    let m1 = MorphismPair::new(&e, &t, n, a1, b1)?;
    let m2 = MorphismPair::new(&sec.second_source(&e), &t, n, a2, b2.neg())?;
    Ok((m1, m2))
}

/// Recovers `E` and `E'` from the corner blocks of their push-forwards.
fn base_objects(
    pe: &MatrixFactorization,
    pt: &MatrixFactorization,
    sec: &SectionData,
) -> Result<(MatrixFactorization, MatrixFactorization)> {
    let recover = |p: &MatrixFactorization| -> Result<MatrixFactorization> {
        if p.potential() != sec.big_f() || !p.rank().is_multiple_of(2) {
            return Err(Error::Section(
                "morphism is not between push-forwards for this section".into(),
            ));
        }
        let r = p.rank() / 2;
        let phi = p.phi().sub_block(0..r, 0..r).restrict(sec.base())?;
        let psi = p.psi().sub_block(0..r, 0..r).restrict(sec.base())?;
        let d = phi.target().to_vec();
        let e = phi.source().to_vec();
        let base = MatrixFactorization::new(sec.f(), d, e, phi, psi)?;
        if &sec.push(&base)? != p {
            return Err(Error::Section(
                "morphism is not between push-forwards for this section".into(),
            ));
        }
        Ok(base)
    };
    Ok((recover(pe)?, recover(pt)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectedCell {
    pub source: usize,
    pub target: usize,
    pub hom: usize,
    pub push_hom: usize,
    /// `dim Hom(E_j, E_i(σ(r+h-a))[δ])`.
    pub dual: usize,
    /// Whether the push-forward Hom is the forward part plus the dual part.
    pub decomposes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectednessReport {
    pub convention: DualityConvention,
    pub cells: Vec<DirectedCell>,
}

/// Degree-zero Homs between all ordered pairs, before and after push-forward.
pub fn directedness_report(
    objects: &[MatrixFactorization],
    sec: &SectionData,
    conv: DualityConvention,
) -> Result<DirectednessReport> {
    directedness_report_capped(objects, sec, conv, DEFAULT_CAP)
}

pub fn directedness_report_capped(
    objects: &[MatrixFactorization],
    sec: &SectionData,
    conv: DualityConvention,
    cap: usize,
) -> Result<DirectednessReport> {
    let pushed = objects
        .iter()
        .map(|e| sec.push(e))
        .collect::<Result<Vec<_>>>()?;
    let k = objects.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).collect();
    let tw = conv.sign * sec.dual_twist();
    let delta = conv.delta_value(sec.base().nvars());
    let cells = par::map(pairs, |(i, j)| -> Result<DirectedCell> {
        let hom = hom_space_capped(&objects[i], &objects[j], 0, cap)?.dim;
        let push_hom = hom_space_capped(&pushed[i], &pushed[j], 0, cap)?.dim;
        let dual = hom_shifted_capped(&objects[j], &objects[i], tw, delta, cap)?.dim;
        Ok(DirectedCell {
            source: i,
            target: j,
            hom,
            push_hom,
            dual,
            decomposes: push_hom == hom + dual,
        })
    });
    Ok(DirectednessReport {
        convention: conv,
        cells: cells.into_iter().collect::<Result<_>>()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::hom_space;
    use crate::poly::{GradedRing, Poly, Ring};
    use crate::scalar::Field;

    fn kx() -> Ring {
        GradedRing::new(&["x"], &[1], Field::Rationals).unwrap()
    }

    fn p(r: &Ring, s: &str) -> Poly {
        Poly::parse(r, s).unwrap()
    }

    fn section(n: u32, c: u32, a: i64) -> SectionData {
        let r = kx();
        let s = r.extend("w", a).unwrap();
        SectionData::new(
            &r,
            "w",
            a,
            &p(&r, &format!("x^{}", n + 1)),
            &p(&s, &format!("w^{}", c - 1)),
        )
        .unwrap()
    }

    fn koszul(n: u32, s: u32) -> MatrixFactorization {
        let r = kx();
        MatrixFactorization::koszul_rank1(
            &p(&r, &format!("x^{s}")),
            &p(&r, &format!("x^{}", n + 1 - s)),
        )
        .unwrap()
    }

    const QUOTIENT: DualityConvention = DualityConvention {
        delta: DeltaBase::Quotient,
        sign: 1,
    };

    #[test]
    fn a1_theorem_rows() {
        let sec = section(1, 2, 1);
        let e = koszul(1, 1);
        let rep = verify_theorem(&e, &e, &sec, 0..=1, 0..=0, Convention::Auto).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.convention, QUOTIENT);
        assert_eq!(rep.rows[0].lhs, 2);
        assert_eq!(rep.rows[0].summands, vec![1, 1]);
        assert_eq!(rep.rows[0].dual_twist, 0);
        assert_eq!(rep.rows[1].lhs, 0);
        assert_eq!(rep.rows[1].summands, vec![0, 0]);
        let ambient = DualityConvention::new(DeltaBase::Ambient, 1).unwrap();
        let fixed = verify_theorem(&e, &e, &sec, 0..=0, 0..=0, Convention::Fixed(ambient)).unwrap();
        assert!(!fixed.pass);
        assert_eq!(fixed.counterexamples, vec![(0, 0)]);
    }

    #[test]
    fn zero_target_is_trivial() {
        let sec = section(1, 2, 1);
        let e = koszul(1, 1);
        let z = MatrixFactorization::zero(e.potential()).unwrap();
        let rep = verify_theorem(&e, &z, &sec, -1..=1, -1..=1, Convention::Auto).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.passing.len(), 4);
        assert!(rep
            .rows
            .iter()
            .all(|r| r.lhs == 0 && r.summands == vec![0, 0]));
    }

    #[test]
    fn serre_a1_and_a2() {
        let e = koszul(1, 1);
        let rep = verify_serre(&e, &e, -3..=3, Convention::Auto).unwrap();
        assert!(rep.passing.contains(&QUOTIENT));
        let row = rep.rows.iter().find(|r| r.twist == 0).unwrap();
        assert_eq!((row.lhs, row.summands[0]), (1, 1));
        for s in 1..=2 {
            for t in 1..=2 {
                let rep = verify_serre(
                    &koszul(2, s),
                    &koszul(2, t),
                    -4..=4,
                    Convention::Fixed(QUOTIENT),
                )
                .unwrap();
                assert!(rep.pass, "{s} {t}: {:?}", rep.counterexamples);
            }
        }
    }

    #[test]
    fn split_identity_and_zero() {
        let sec = section(1, 2, 1);
        let e = koszul(1, 1);
        let pe = sec.push(&e).unwrap();
        let (m1, m2) = split_morphism(&pe.identity(), &sec).unwrap();
        assert_eq!(m1, e.identity());
        assert!(m2.is_zero());
        let zero = MorphismPair::zero(&pe, &pe, 0).unwrap();
        let (z1, z2) = split_morphism(&zero, &sec).unwrap();
        assert!(z1.is_zero() && z2.is_zero());
    }

    #[test]
    fn split_inverts_induce_on_classes() {
        for (n, c, a) in [(1, 2, 1), (2, 3, 1)] {
            let sec = section(n, c, a);
            for s in 1..=n {
                for t in 1..=n {
                    let (e, f) = (koszul(n, s), koszul(n, t));
                    let h1 = hom_space(&e, &f, 0).unwrap();
                    let h2 = hom_space(&sec.second_source(&e), &f, 0).unwrap();
                    let zero1 = MorphismPair::zero(&e, &f, 0).unwrap();
                    let zero2 = MorphismPair::zero(&sec.second_source(&e), &f, 0).unwrap();
                    let inputs = h1
                        .class_basis()
                        .into_iter()
                        .map(|m| (m, zero2.clone()))
                        .chain(h2.class_basis().into_iter().map(|m| (zero1.clone(), m)));
                    for (m1, m2) in inputs {
                        let c = sec.induce_morphism(&m1, &m2).unwrap();
                        let (s1, s2) = split_morphism(&c, &sec).unwrap();
                        assert!(h1.is_boundary(&s1.sub(&m1).unwrap()).unwrap());
                        assert!(h2.is_boundary(&s2.sub(&m2).unwrap()).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn directedness_a2() {
        let sec = section(2, 3, 1);
        let objs = [koszul(2, 1), koszul(2, 2)];
        let rep = directedness_report(&objs, &sec, QUOTIENT).unwrap();
        assert_eq!(rep.cells.len(), 4);
        assert!(rep.cells.iter().all(|c| c.decomposes));
        let hom: Vec<usize> = rep.cells.iter().map(|c| c.hom).collect();
        assert_eq!(hom, vec![1, 0, 1, 1]);
        assert!(directedness_report(&[], &sec, QUOTIENT)
            .unwrap()
            .cells
            .is_empty());

        let one = directedness_report(&objs[..1], &sec, QUOTIENT).unwrap();
        let row = verify_theorem(
            &objs[0],
            &objs[0],
            &sec,
            0..=0,
            0..=0,
            Convention::Fixed(QUOTIENT),
        )
        .unwrap();
        assert_eq!(one.cells[0].push_hom, row.rows[0].lhs);
        assert_eq!(
            vec![one.cells[0].hom, one.cells[0].dual],
            row.rows[0].summands
        );
    }
}
