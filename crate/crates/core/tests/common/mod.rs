#![allow(dead_code)]

use mfw::push::SectionData;
use mfw::{Field, GradedRing, MatrixFactorization, Poly, Ring};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const P: u64 = 32003;

/// Size limits for [`family`].
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_vars: usize,
    pub max_weight: i64,
    pub max_factor_degree: i64,
    pub max_factors: usize,
}

pub const SMALL: Limits = Limits {
    max_vars: 2,
    max_weight: 2,
    max_factor_degree: 2,
    max_factors: 3,
};

/// A potential `f` given as a product of homogeneous factors, the rank-one
/// Koszul factorizations obtained by splitting the product, and a section.
pub struct Family {
    pub ring: Ring,
    pub f: Poly,
    pub blocks: Vec<MatrixFactorization>,
    pub section: SectionData,
    rng: StdRng,
}

fn random_homogeneous(rng: &mut StdRng, ring: &Ring, degree: i64) -> Option<Poly> {
    let monos = ring.monomials_of_degree(degree);
    if monos.is_empty() {
        return None;
    }
    let field = ring.field();
    let mut terms: Vec<_> = monos
        .iter()
        .map(|m| (m.clone(), field.from_i64(rng.gen_range(-3..=3))))
        .collect();
    if terms.iter().all(|(_, c)| c.is_zero()) {
        let k = rng.gen_range(0..terms.len());
        terms[k].1 = field.one();
    }
    Some(Poly::from_terms(ring, terms))
}

pub fn family(seed: u64, limits: Limits) -> Family {
    let mut rng = StdRng::seed_from_u64(seed);
    let field = if rng.gen_bool(0.5) {
        Field::Rationals
    } else {
        Field::prime(P).unwrap()
    };
    let nvars = rng.gen_range(1..=limits.max_vars);
    let names = &["x", "y", "z"][..nvars];
    let weights: Vec<i64> = (0..nvars)
        .map(|_| rng.gen_range(1..=limits.max_weight))
        .collect();
    let ring = GradedRing::new(names, &weights, field).unwrap();

    let nfactors = rng.gen_range(2..=limits.max_factors);
    let mut factors = Vec::new();
    while factors.len() < nfactors {
        let d = rng.gen_range(1..=limits.max_factor_degree);
        if let Some(p) = random_homogeneous(&mut rng, &ring, d) {
            factors.push(p);
        }
    }
    let f = factors
        .iter()
        .skip(1)
        .fold(factors[0].clone(), |acc, p| &acc * p);
    let mut blocks = Vec::new();
    for mask in 1..(1u32 << nfactors) - 1 {
        let (mut u, mut v) = (Poly::one(&ring), Poly::one(&ring));
        for (k, p) in factors.iter().enumerate() {
            if mask & (1 << k) != 0 {
                u = &u * p;
            } else {
                v = &v * p;
            }
        }
        blocks.push(MatrixFactorization::koszul_rank1(&u, &v).unwrap());
    }

    let h = match f.degree_of() {
        mfw::Degree::Homogeneous(h) => h,
        _ => unreachable!("product of homogeneous factors"),
    };
    let section = loop {
        let a = rng.gen_range(1..=(h / 2).max(1));
        let s = ring.extend("w", a).unwrap();
        if let Some(q) = random_homogeneous(&mut rng, &s, h - 2 * a) {
            let g = &Poly::var_at(&s, nvars) * &q;
            break SectionData::new(&ring, "w", a, &f, &g).unwrap();
        }
    };
    Family {
        ring,
        f,
        blocks,
        section,
        rng,
    }
}

impl Family {
    /// A direct sum of `1..=max_blocks` twisted blocks.
    pub fn object(&mut self, max_blocks: usize, max_twist: i64) -> MatrixFactorization {
        let k = self.rng.gen_range(1..=max_blocks);
        let mut out = MatrixFactorization::zero(&self.f).unwrap();
        for _ in 0..k {
            let b = &self.blocks[self.rng.gen_range(0..self.blocks.len())];
            let t = self.rng.gen_range(-max_twist..=max_twist);
            out = out.direct_sum(&b.twist(t)).unwrap();
        }
        out
    }

    pub fn block(&mut self) -> MatrixFactorization {
        self.blocks[self.rng.gen_range(0..self.blocks.len())].clone()
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn degree(&self) -> i64 {
        match self.f.degree_of() {
            mfw::Degree::Homogeneous(h) => h,
            _ => unreachable!(),
        }
    }
}

/// `true` when `φψ = F·id` and `ψφ = F·id` hold entrywise.
pub fn factors_exactly(e: &MatrixFactorization) -> bool {
    let f = e.potential();
    let check = |a: &mfw::GradedMatrix, b: &mfw::GradedMatrix| {
        let p = a.compose(b).unwrap();
        (0..p.rows()).all(|j| {
            (0..p.cols()).all(|i| {
                let want = if i == j {
                    f.clone()
                } else {
                    Poly::zero(e.ring())
                };
                p.get(j, i) == &want
            })
        })
    };
    check(e.phi(), e.psi()) && check(e.psi(), e.phi())
}
