//! Worked examples across modules, driven through the public API.

use mfw::oracle::{
    coker_presentation, ext_dim, ext_dim_periodic, hilbert_function, stable_hom_dim,
    PresentedModule, QuotientRing,
};
use mfw::{
    hom_shifted, hom_space, hom_table, Field, GradedMatrix, GradedRing, MatrixFactorization,
    MorphismPair, Poly, Ring, SectionData,
};

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

fn node() -> SectionData {
    let r = kx();
    let s = r.extend("w", 1).unwrap();
    SectionData::new(&r, "w", 1, &p(&r, "x^2"), &p(&s, "w")).unwrap()
}

fn rows(m: &GradedMatrix) -> Vec<Vec<String>> {
    m.row_polys()
        .iter()
        .map(|r| r.iter().map(|q| q.to_string()).collect())
        .collect()
}

#[test]
fn a1_suspension_is_a_twist() {
    let e = a1();
    let s = e.suspend();
    assert_eq!((s.d(), s.e()), (&[1][..], &[0][..]));
    assert_eq!(rows(s.phi()), vec![vec!["-x"]]);
    assert_eq!(e.translate(2, 0), e.twist(2));

    // Degree-0 maps E[1] -> E(1) form a line spanned by an invertible pair.
    let hom = hom_space(&s, &e.twist(1), 0).unwrap();
    assert_eq!(hom.dim, 1);
    let w = &hom.class_basis()[0];
    let unit = |m: &GradedMatrix| m.get(0, 0).degree_of() == mfw::Degree::Homogeneous(0);
    assert!(unit(w.alpha()) && unit(w.beta()));
}

#[test]
fn a1_hom_values() {
    let e = a1();
    assert_eq!(hom_space(&e, &e, 0).unwrap().dim, 1);
    assert_eq!(hom_space(&e, &e, -5).unwrap().dim, 0);
    assert_eq!(hom_shifted(&e, &e, -1, 1).unwrap().dim, 1);
    assert_eq!(hom_shifted(&e, &e, 0, 1).unwrap().dim, 0);

    let t = hom_table(&e, &e, -1..=1, 0..=1).unwrap();
    assert_eq!(t.nonzero(), vec![((0, 0), 1), ((1, -1), 1)]);
    let moved = hom_table(&e, &e.twist(1), -2..=0, 0..=1).unwrap();
    let shifted: Vec<_> = moved
        .nonzero()
        .into_iter()
        .map(|((i, n), d)| ((i, n + 1), d))
        .collect();
    assert_eq!(shifted, t.nonzero());

    let z = MatrixFactorization::zero(e.potential()).unwrap();
    assert!(hom_table(&z, &z, -2..=2, 0..=1)
        .unwrap()
        .nonzero()
        .is_empty());

    let ee = e.direct_sum(&e).unwrap();
    assert_eq!(ee.rank(), 2);
    assert_eq!(hom_space(&ee, &e, 0).unwrap().dim, 2);
    assert_eq!(e.direct_sum(&z).unwrap(), e);
}

#[test]
fn a2_directed_pair() {
    let r = kx();
    let e1 = MatrixFactorization::koszul_rank1(&p(&r, "x"), &p(&r, "x^2")).unwrap();
    let e2 = MatrixFactorization::koszul_rank1(&p(&r, "x^2"), &p(&r, "x")).unwrap();
    assert_eq!(e2.e(), &[-2]);
    assert_eq!(hom_space(&e2, &e1, 0).unwrap().dim, 1);
    assert_eq!(hom_space(&e1, &e2, 0).unwrap().dim, 0);
}

#[test]
fn push_examples() {
    let sec = node();
    assert_eq!(sec.big_f().to_string(), "x^2 + w^2");
    let pe = sec.push(&a1()).unwrap();
    assert_eq!((pe.d(), pe.e()), (&[0, 0][..], &[-1, -1][..]));
    assert_eq!(rows(pe.phi()), vec![vec!["x", "w"], vec!["-w", "x"]]);
    assert_eq!(rows(pe.psi()), vec![vec!["x", "-w"], vec!["w", "x"]]);
    assert_eq!(hom_space(&pe, &pe, 0).unwrap().dim, 2);

    let r = kx();
    let s = r.extend("w", 2).unwrap();
    let sec = SectionData::new(&r, "w", 2, &p(&r, "x^4"), &p(&s, "w")).unwrap();
    let e = MatrixFactorization::koszul_rank1(&p(&r, "x"), &p(&r, "x^3")).unwrap();
    let pe = sec.push(&e).unwrap();
    assert_eq!((pe.d(), pe.e()), (&[0, 1][..], &[-1, -2][..]));
    assert_eq!(rows(pe.phi()), vec![vec!["x", "w"], vec!["-w", "x^3"]]);

    let z = sec
        .push(&MatrixFactorization::zero(&p(&r, "x^4")).unwrap())
        .unwrap();
    assert_eq!(z.rank(), 0);

    let one = Poly::one(&s);
    assert!(SectionData::new(&r, "w", 2, &p(&r, "x^4"), &one).is_err());
}

#[test]
fn induced_morphisms() {
    let sec = node();
    let e = a1();
    let pe = sec.push(&e).unwrap();
    let end = hom_space(&pe, &pe, 0).unwrap();

    let second = sec.second_source(&e);
    let zero2 = MorphismPair::zero(&second, &e, 0).unwrap();
    let id = sec.induce_morphism(&e.identity(), &zero2).unwrap();
    assert_eq!(id, pe.identity());

    let gens = hom_space(&second, &e, 0).unwrap().class_basis();
    assert_eq!(gens.len(), 1);
    let zero1 = MorphismPair::zero(&e, &e, 0).unwrap();
    let j = sec.induce_morphism(&zero1, &gens[0]).unwrap();
    assert!(!end.is_boundary(&j).unwrap());
    let diag = |m: &GradedMatrix| m.get(0, 0).is_zero() && m.get(1, 1).is_zero();
    assert!(diag(j.alpha()) && diag(j.beta()));
    // Identity and J span End.
    let both = j.add(&pe.identity()).unwrap();
    assert!(!end.is_boundary(&both).unwrap());

    let bad = MorphismPair::zero(&e, &e, 1).unwrap();
    assert!(sec.induce_morphism(&bad, &zero2).is_err());
}

#[test]
fn oracle_examples() {
    let r = kx();
    let q2 = QuotientRing::new(&p(&r, "x^2")).unwrap();
    let k = PresentedModule::residue_field(&q2);
    assert_eq!(hilbert_function(&k, 0..=3), vec![1, 0, 0, 0]);
    assert_eq!(
        hilbert_function(&PresentedModule::free(&q2, &[0]), 0..=3),
        vec![1, 1, 0, 0]
    );
    assert_eq!(
        hilbert_function(&coker_presentation(&a1()), 0..=3),
        vec![1, 0, 0, 0]
    );

    let e = MatrixFactorization::koszul_rank1(&p(&r, "x^2"), &p(&r, "x")).unwrap();
    let m = coker_presentation(&e);
    assert_eq!(m.generators(), &[0]);
    assert_eq!(hilbert_function(&m, 0..=3), vec![1, 1, 0, 0]);

    assert_eq!(stable_hom_dim(&k, &k, 0).unwrap(), 1);
    assert_eq!(stable_hom_dim(&k, &k, 1).unwrap(), 0);

    assert_eq!(ext_dim(&k, &k, 1, -1).unwrap(), 1);
    assert_eq!(ext_dim(&k, &k, 1, 0).unwrap(), 0);
    assert_eq!(ext_dim(&k, &k, 2, -2).unwrap(), 1);
    assert_eq!(ext_dim_periodic(&a1(), &a1(), 2, -2).unwrap(), 1);
    assert!(ext_dim_periodic(&a1(), &a1(), 0, 0).is_err());

    let n = node();
    let nq = QuotientRing::new(n.big_f()).unwrap();
    let kn = PresentedModule::residue_field(&nq);
    assert_eq!(stable_hom_dim(&kn, &kn, 0).unwrap(), 2);
}

#[test]
fn rings_and_matrices() {
    let r = kx();
    assert_eq!(r.a_invariant(), -1);
    assert!(r.extend("x", 1).is_err());
    assert_eq!(p(&r, "x^2").degree_of(), mfw::Degree::Homogeneous(2));
    assert_eq!(p(&r, "x + x^2").degree_of(), mfw::Degree::Inhomogeneous);
    assert!(Field::prime(4).is_err());

    let xy = GradedRing::new(&["x", "y"], &[1, 2], Field::Rationals).unwrap();
    assert_eq!(xy.monomials_of_degree(4).len(), 3);
    assert!(xy.monomials_of_degree(-1).is_empty());

    let x = p(&r, "x");
    assert!(GradedMatrix::new(&r, vec![0], vec![-1], vec![vec![x.clone()]], 0).is_ok());
    let err = GradedMatrix::new(&r, vec![0], vec![-1], vec![vec![p(&r, "x^2")]], 0).unwrap_err();
    assert!(err.to_string().contains("expected degree 1"), "{err}");

    assert!(MatrixFactorization::from_polys(
        &p(&r, "x^2"),
        vec![0],
        vec![-1],
        vec![vec![x.clone()]],
        vec![vec![p(&r, "x^2")]]
    )
    .is_err());
}
