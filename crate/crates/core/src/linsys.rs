//! Coefficient-level linear systems in unknown graded matrices.
//!
//! An unknown graded matrix with fixed twists has finitely many coordinates:
//! one per (entry, monomial of the entry's degree). A [`Layout`] fixes that
//! ordering (blocks in order, entries row-major, monomials graded-lex), and a
//! list of [`Term`]s `sign · p · L · X · R` describes a linear map between two
//! layouts, which [`linear_map`] expands into a [`ScalarMatrix`].

use std::collections::HashMap;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::gmatrix::GradedMatrix;
use crate::poly::{Exponent, Poly, Ring};
use crate::scalar::{Field, Scalar, ScalarMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockShape {
    pub target: Vec<i64>,
    pub source: Vec<i64>,
    pub offset: i64,
}

impl BlockShape {
    pub fn new(target: &[i64], source: &[i64], offset: i64) -> Self {
        BlockShape {
            target: target.to_vec(),
            source: source.to_vec(),
            offset,
        }
    }

    pub fn of(m: &GradedMatrix) -> Self {
        Self::new(m.target(), m.source(), m.offset())
    }

    pub fn entry_degree(&self, j: usize, i: usize) -> i64 {
        self.target[j] - self.source[i] + self.offset
    }
}

#[derive(Clone)]
struct MonomialBasis {
    list: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
}

#[derive(Clone)]
pub struct Layout {
    ring: Ring,
    blocks: Vec<BlockShape>,
    entry_start: Vec<Vec<usize>>,
    block_start: Vec<usize>,
    bases: HashMap<i64, MonomialBasis>,
    len: usize,
}

impl Layout {
    pub fn new(ring: &Ring, blocks: Vec<BlockShape>) -> Layout {
        let mut bases: HashMap<i64, MonomialBasis> = HashMap::new();
        let mut entry_start = Vec::with_capacity(blocks.len());
        let mut block_start = Vec::with_capacity(blocks.len() + 1);
        let mut len = 0;
        for b in &blocks {
            block_start.push(len);
            let mut starts = Vec::with_capacity(b.target.len() * b.source.len());
            for j in 0..b.target.len() {
                for i in 0..b.source.len() {
                    let d = b.entry_degree(j, i);
                    let basis = bases.entry(d).or_insert_with(|| {
                        let list = ring.monomials_of_degree(d);
                        let index = list
                            .iter()
                            .cloned()
                            .enumerate()
                            .map(|(k, e)| (e, k))
                            .collect();
                        MonomialBasis { list, index }
                    });
                    starts.push(len);
                    len += basis.list.len();
                }
            }
            entry_start.push(starts);
        }
        block_start.push(len);
        Layout {
            ring: ring.clone(),
            blocks,
            entry_start,
            block_start,
            bases,
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn blocks(&self) -> &[BlockShape] {
        &self.blocks
    }

    pub fn block_range(&self, b: usize) -> Range<usize> {
        self.block_start[b]..self.block_start[b + 1]
    }

    fn basis(&self, d: i64) -> &MonomialBasis {
        &self.bases[&d]
    }

    pub fn entry_monomials(&self, b: usize, j: usize, i: usize) -> (usize, &[Exponent]) {
        let shape = &self.blocks[b];
        let start = self.entry_start[b][j * shape.source.len() + i];
        (start, &self.basis(shape.entry_degree(j, i)).list)
    }

    pub fn index(&self, b: usize, j: usize, i: usize, exp: &[u32]) -> Option<usize> {
        let shape = &self.blocks[b];
        let start = self.entry_start[b][j * shape.source.len() + i];
        self.bases
            .get(&shape.entry_degree(j, i))
            .and_then(|basis| basis.index.get(exp))
            .map(|k| start + k)
    }

    /// Coordinates of concrete matrices, one per block.
    pub fn encode(&self, mats: &[&GradedMatrix]) -> Result<Vec<Scalar>> {
        if mats.len() != self.blocks.len() {
            return Err(Error::Shape("wrong number of blocks".into()));
        }
        let mut v = vec![self.field().zero(); self.len];
        for (b, m) in mats.iter().enumerate() {
            if BlockShape::of(m) != self.blocks[b] {
                return Err(Error::Shape(format!(
                    "block {b} has twists ({:?}, {:?}, {}) but layout expects ({:?}, {:?}, {})",
                    m.target(),
                    m.source(),
                    m.offset(),
                    self.blocks[b].target,
                    self.blocks[b].source,
                    self.blocks[b].offset
                )));
            }
            for j in 0..m.rows() {
                for i in 0..m.cols() {
                    for (e, c) in m.get(j, i).terms() {
                        let k = self.index(b, j, i, e).expect("validated degree");
                        v[k] = c.clone();
                    }
                }
            }
        }
        Ok(v)
    }

    pub fn decode(&self, v: &[Scalar]) -> Vec<GradedMatrix> {
        assert_eq!(v.len(), self.len);
        self.blocks
            .iter()
            .enumerate()
            .map(|(b, shape)| {
                let mut entries = Vec::with_capacity(shape.target.len() * shape.source.len());
                for j in 0..shape.target.len() {
                    for i in 0..shape.source.len() {
                        let (start, monos) = self.entry_monomials(b, j, i);
                        entries.push(Poly::from_terms(
                            &self.ring,
                            monos
                                .iter()
                                .enumerate()
                                .map(|(k, e)| (e.clone(), v[start + k].clone())),
                        ));
                    }
                }
                GradedMatrix::from_flat(
                    &self.ring,
                    shape.target.clone(),
                    shape.source.clone(),
                    entries,
                    shape.offset,
                )
                .expect("decoded entries have layout degrees")
            })
            .collect()
    }

    /// Iterates over all coordinates as `(index, block, row, col, monomial)`.
    pub fn coordinates(&self) -> impl Iterator<Item = (usize, usize, usize, usize, &Exponent)> {
        self.blocks.iter().enumerate().flat_map(move |(b, shape)| {
            (0..shape.target.len()).flat_map(move |j| {
                (0..shape.source.len()).flat_map(move |i| {
                    let (start, monos) = self.entry_monomials(b, j, i);
                    monos
                        .iter()
                        .enumerate()
                        .map(move |(k, e)| (start + k, b, j, i, e))
                })
            })
        })
    }
}

/// `sign · scalar · left · X_input · right`, landing in output block `out`.
#[derive(Clone, Debug)]
pub struct Term {
    pub out: usize,
    pub input: usize,
    pub negate: bool,
    pub scalar: Option<Poly>,
    pub left: Option<GradedMatrix>,
    pub right: Option<GradedMatrix>,
}

impl Term {
    pub fn new(out: usize, input: usize) -> Term {
        Term {
            out,
            input,
            negate: false,
            scalar: None,
            left: None,
            right: None,
        }
    }

    pub fn left(mut self, m: &GradedMatrix) -> Term {
        self.left = Some(m.clone());
        self
    }

    pub fn right(mut self, m: &GradedMatrix) -> Term {
        self.right = Some(m.clone());
        self
    }

    pub fn times(mut self, p: &Poly) -> Term {
        self.scalar = Some(p.clone());
        self
    }

    pub fn negated(mut self) -> Term {
        self.negate = !self.negate;
        self
    }
}

/// Expands the linear map given by `terms` into a matrix whose columns are
/// indexed by `domain` coordinates and rows by `codomain` coordinates.
pub fn linear_map(domain: &Layout, codomain: &Layout, terms: &[Term]) -> ScalarMatrix {
    let field = domain.field();
    let ring = domain.ring();
    let mut out = ScalarMatrix::zeros(field, codomain.len(), domain.len());
    let one = field.one();
    for (col, b, j, i, mono) in domain.coordinates() {
        for t in terms.iter().filter(|t| t.input == b) {
            let unit = Poly::monomial(
                ring,
                mono.clone(),
                if t.negate { -&one } else { one.clone() },
            );
            let unit = match &t.scalar {
                Some(p) => &unit * p,
                None => unit,
            };
            let lefts: Vec<(usize, Poly)> = match &t.left {
                None => vec![(j, unit.clone())],
                Some(l) => (0..l.rows())
                    .filter(|&r| !l.get(r, j).is_zero())
                    .map(|r| (r, l.get(r, j) * &unit))
                    .collect(),
            };
            for (r, lp) in lefts {
                let rights: Vec<(usize, Poly)> = match &t.right {
                    None => vec![(i, lp.clone())],
                    Some(m) => (0..m.cols())
                        .filter(|&s| !m.get(i, s).is_zero())
                        .map(|s| (s, &lp * m.get(i, s)))
                        .collect(),
                };
                for (s, val) in rights {
                    for (e, c) in val.terms() {
                        let row = codomain.index(t.out, r, s, e).unwrap_or_else(|| {
                            panic!("term lands outside codomain block {} at ({r}, {s})", t.out)
                        });
                        let v = out.get(row, col) + c;
                        out.set(row, col, v);
                    }
                }
            }
        }
    }
    out
}

/// Errors out when a computation would exceed the unknown-count cap.
pub fn check_cap(unknowns: usize, cap: usize) -> Result<()> {
    if unknowns > cap {
        Err(Error::TooLarge { unknowns, cap })
    } else {
        Ok(())
    }
}

pub const DEFAULT_CAP: usize = 20_000;
