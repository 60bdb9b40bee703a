//! The built-in A-series family: `f = x^(n+1)` over `k[x]`, sections
//! `F = x^(n+1) + w^c` with `deg w = a` and `c·a = n+1`, and the Koszul
//! objects `E_s = (x^s, x^(n+1-s))` for `1 ≤ s ≤ n`.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::mf::MatrixFactorization;
use crate::poly::{GradedRing, Poly, Ring};
use crate::push::SectionData;
use crate::scalar::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FamilySpec {
    pub n: u32,
    pub c: u32,
    pub a: u32,
}

impl FamilySpec {
    pub fn new(n: u32, c: u32, a: u32) -> Result<FamilySpec> {
        if n == 0 {
            return Err(Error::Invalid("A-series needs n >= 1".into()));
        }
        if c < 2 {
            return Err(Error::Invalid(format!(
                "c = {c} must be at least 2 so that g lies in wS"
            )));
        }
        if c as u64 * a as u64 != n as u64 + 1 {
            return Err(Error::Invalid(format!(
                "c*a = {c}*{a} must equal n+1 = {}",
                n + 1
            )));
        }
        Ok(FamilySpec { n, c, a })
    }

    /// Whether `S/(F)` is Calabi-Yau (`r + h = a`), i.e. `n = 1`.
    pub fn is_calabi_yau(&self) -> bool {
        self.n as i64 == self.a as i64
    }

    pub fn label(&self) -> String {
        format!("A{} (c={}, a={})", self.n, self.c, self.a)
    }
}

/// Every valid `(n, c, a)` with `n ≤ n_max`, ordered by `n` then `c`.
pub fn valid_specs(n_max: u32) -> Vec<FamilySpec> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        for c in 2..=n + 1 {
            if (n + 1) % c == 0 {
                out.push(FamilySpec {
                    n,
                    c,
                    a: (n + 1) / c,
                });
            }
        }
    }
    out
}

pub fn base_ring(field: Field) -> Ring {
    GradedRing::new(&["x"], &[1], field).expect("valid ring")
}

pub fn generate(spec: FamilySpec, field: Field) -> Result<(SectionData, Vec<MatrixFactorization>)> {
    let spec = FamilySpec::new(spec.n, spec.c, spec.a)?;
    let r = base_ring(field);
    let s = r.extend("w", spec.a as i64)?;
    let x = Poly::var_at(&r, 0);
    let f = x.pow(spec.n + 1);
    let g = Poly::var_at(&s, 1).pow(spec.c - 1);
    let sec = SectionData::new(&r, "w", spec.a as i64, &f, &g)?;
    let objects = (1..=spec.n)
        .map(|k| MatrixFactorization::koszul_rank1(&x.pow(k), &x.pow(spec.n + 1 - k)))
        .collect::<Result<Vec<_>>>()?;
    Ok((sec, objects))
}

/// The family as an `.mfw` program with a directedness query and a
/// theorem check for every ordered pair.
pub fn to_program_text(spec: FamilySpec, field: Field) -> Result<String> {
    let (sec, objects) = generate(spec, field)?;
    let h = sec.h();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# {}: f = {}, F = {}",
        spec.label(),
        sec.f(),
        sec.big_f()
    );
    let _ = writeln!(out, "field {field};");
    let _ = writeln!(out, "ring R {{ x:1 }};");
    let _ = writeln!(
        out,
        "section S = R + w:{} with f = {}, g = {};",
        spec.a,
        sec.f(),
        sec.g()
    );
    for (k, e) in objects.iter().enumerate() {
        let _ = writeln!(
            out,
            "mf E{} over (R, {}) {{ d=[{}]; e=[{}]; phi=[[{}]]; psi=[[{}]]; }}",
            k + 1,
            sec.f(),
            e.d()[0],
            e.e()[0],
            e.phi().get(0, 0),
            e.psi().get(0, 0)
        );
    }
    let names: Vec<String> = (1..=objects.len()).map(|k| format!("E{k}")).collect();
    let _ = writeln!(out, "query directed {} section S;", names.join(" "));
    for s in &names {
        for t in &names {
            let _ = writeln!(
                out,
                "query verify-theorem {s} {t} section S shifts -3..3 twists {}..{};",
                -(h + 2),
                h + 2
            );
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::hom_space;

    #[test]
    fn specs() {
        let triples: Vec<(u32, u32, u32)> =
            valid_specs(5).iter().map(|s| (s.n, s.c, s.a)).collect();
        assert_eq!(
            triples,
            vec![
                (1, 2, 1),
                (2, 3, 1),
                (3, 2, 2),
                (3, 4, 1),
                (4, 5, 1),
                (5, 2, 3),
                (5, 3, 2),
                (5, 6, 1)
            ]
        );
        assert!(FamilySpec::new(3, 3, 1).is_err());
        assert!(FamilySpec::new(1, 1, 2).is_err());
        assert!(valid_specs(5).iter().filter(|s| s.is_calabi_yau()).count() == 1);
    }

    #[test]
    fn running_examples() {
        let (sec, objs) = generate(FamilySpec::new(1, 2, 1).unwrap(), Field::Rationals).unwrap();
        assert_eq!(sec.big_f().to_string(), "x^2 + w^2");
        assert_eq!(objs.len(), 1);
        let (sec, objs) = generate(FamilySpec::new(2, 3, 1).unwrap(), Field::Rationals).unwrap();
        assert_eq!(sec.big_f().to_string(), "x^3 + w^3");
        assert_eq!(objs.len(), 2);
        let (sec, objs) = generate(FamilySpec::new(3, 2, 2).unwrap(), Field::Rationals).unwrap();
        assert_eq!(sec.big_f().to_string(), "x^4 + w^2");
        assert_eq!(objs.len(), 3);
        assert_eq!(hom_space(&objs[2], &objs[0], 0).unwrap().dim, 1);
        assert_eq!(hom_space(&objs[0], &objs[2], 0).unwrap().dim, 0);
    }
}
