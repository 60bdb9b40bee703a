mod common;

use common::{factors_exactly, family, SMALL};
use mfw::dsl::{parse_expr, parse_program, Expr};
use mfw::oracle::{coker_presentation, hilbert_function, restricted_presentation};
use mfw::{hom_shifted, hom_space, Field, GradedRing, Poly, ScalarMatrix};
use num_bigint::BigInt;
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn matrix(field: Field, rows: usize, cols: usize, entries: &[i64]) -> ScalarMatrix {
    ScalarMatrix::from_rows(
        field,
        cols,
        (0..rows)
            .map(|r| {
                (0..cols)
                    .map(|c| field.from_i64(entries[(r * cols + c) % entries.len()]))
                    .collect()
            })
            .collect(),
    )
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u32..20).prop_map(|n| Expr::Int(BigInt::from(n))),
        prop_oneof![Just("x"), Just("y")].prop_map(|v| Expr::Var(v.to_string())),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner, 0u32..4).prop_map(|(a, k)| Expr::Pow(Box::new(a), k)),
        ]
    })
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn rank_plus_nullity(rows in 1usize..6, cols in 1usize..6, entries in prop::collection::vec(-4i64..=4, 1..30), prime in any::<bool>()) {
        let field = if prime { Field::prime(7).unwrap() } else { Field::Rationals };
        let m = matrix(field, rows, cols, &entries);
        let kernel = m.nullspace();
        prop_assert_eq!(m.rank() + kernel.len(), cols);
        for v in &kernel {
            prop_assert!(m.mul_vec(v).iter().all(|c| c.is_zero()));
        }
    }

    #[test]
    fn expr_print_parse(e in expr()) {
        let text = e.to_string();
        prop_assert_eq!(parse_expr(&text).unwrap(), e);
    }

    #[test]
    fn poly_print_parse(e in expr(), prime in any::<bool>()) {
        let field = if prime { Field::prime(32003).unwrap() } else { Field::Rationals };
        let r = GradedRing::new(&["x", "y"], &[1, 2], field).unwrap();
        let p = e.eval(&r).unwrap();
        prop_assert_eq!(Poly::parse(&r, &p.to_string()).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn push_is_a_factorization(seed in any::<u64>()) {
        let mut fam = family(seed, SMALL);
        let e = fam.object(3, 2);
        let pe = fam.section.push(&e).unwrap();
        prop_assert_eq!(pe.potential(), fam.section.big_f());
        prop_assert_eq!(pe.rank(), 2 * e.rank());
        prop_assert!(factors_exactly(&pe));
    }

    #[test]
    fn twist_equivariance(seed in any::<u64>()) {
        let mut fam = family(seed, SMALL);
        let (e, t) = (fam.block(), fam.block());
        let (k, n) = (fam.int(-3, 3), fam.int(-2, 2));
        let base = hom_space(&e, &t, n).unwrap().dim;
        prop_assert_eq!(hom_space(&e.twist(k), &t.twist(k), n).unwrap().dim, base);
        prop_assert_eq!(hom_space(&e, &t.twist(k), n - k).unwrap().dim, base);
    }

    #[test]
    fn shift_two_is_twist_h(seed in any::<u64>()) {
        let mut fam = family(seed, SMALL);
        let (e, t) = (fam.block(), fam.block());
        let h = fam.degree();
        prop_assert_eq!(e.translate(2, 0), e.twist(h));
        prop_assert_eq!(e.translate(1, 0).translate(-1, 0), e.clone());
        let (n, i) = (fam.int(-2, 1), fam.int(-1, 1));
        prop_assert_eq!(
            hom_shifted(&e, &t, n, i + 2).unwrap().dim,
            hom_shifted(&e, &t, n + h, i).unwrap().dim
        );
    }

    #[test]
    fn direct_sum_additivity(seed in any::<u64>()) {
        let mut fam = family(seed, SMALL);
        let (a, b, t) = (fam.block(), fam.block(), fam.block());
        let n = fam.int(-1, 2);
        let sum = a.direct_sum(&b).unwrap();
        let lhs = hom_space(&sum, &t, n).unwrap().dim;
        prop_assert_eq!(lhs, hom_space(&a, &t, n).unwrap().dim + hom_space(&b, &t, n).unwrap().dim);
        let rhs = hom_space(&t, &sum, n).unwrap().dim;
        prop_assert_eq!(rhs, hom_space(&t, &a, n).unwrap().dim + hom_space(&t, &b, n).unwrap().dim);
    }

    #[test]
    fn deep_negative_twists_vanish(seed in any::<u64>()) {
        let mut fam = family(seed, SMALL);
        let (e, t) = (fam.object(2, 2), fam.object(2, 2));
        let spread = |m: &mfw::MatrixFactorization| {
            m.d().iter().chain(m.e()).map(|x| x.abs()).max().unwrap_or(0)
        };
        let n = -(spread(&e) + spread(&t) + fam.degree() + 1);
        let r = hom_space(&e, &t, n).unwrap();
        prop_assert_eq!((r.cycle_dim, r.dim), (0, 0));
    }

    #[test]
    fn restriction_of_scalars_hilbert(seed in any::<u64>()) {
        let mut fam = family(seed, SMALL);
        let e = fam.object(2, 1);
        let over_r = hilbert_function(&coker_presentation(&e), -4..=6);
        let over_s = hilbert_function(&restricted_presentation(&e, &fam.section).unwrap(), -4..=6);
        prop_assert_eq!(over_r, over_s);
    }
}

#[test]
fn program_print_parse() {
    let text = "field GF(32003);
ring R { x:1, y:2 };
section S = R + w:1 with f = x^2*y, g = w*(x + w);
mf E over (R, x^2*y) { d=[0]; e=[-1]; phi=[[x]]; psi=[[x*y]]; }
query verify-theorem E E section S shifts -2..2 twists -3..3 delta quotient sign -1;
query transpose (R, x^2 + y);
";
    let p = parse_program(text).unwrap();
    let printed = p.to_string();
    assert_eq!(parse_program(&printed).unwrap(), p);
    assert_eq!(parse_program(&printed).unwrap().to_string(), printed);
}
