use proptest::prelude::*;

use super::*;
use crate::error::Error;
use crate::ring::{FiniteRing, Mat, MatrixAlgebra, Rational, Ring, Scalar};

fn z6() -> FiniteRing {
    FiniteRing::modular(6).unwrap()
}

fn q2() -> MatrixAlgebra<Rational> {
    MatrixAlgebra::rational(2).unwrap()
}

fn r2() -> MatrixAlgebra<f64> {
    MatrixAlgebra::float(2).unwrap()
}

fn qm(rows: &[&[i64]]) -> Mat<Rational> {
    Mat::from_i64_rows(rows)
}

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

fn e11<S: Scalar>() -> Mat<S> {
    Mat::unit(2, 2, 0, 0)
}

fn frame_e11<S: crate::ring::LinearKernel>(r: &MatrixAlgebra<S>) -> CornerFrame<Mat<S>> {
    CornerFrame::canonical(r, e11(), e11()).unwrap()
}

#[test]
fn z6_worked_example_every_method() {
    let r = z6();
    let f = CornerFrame::new(&r, r.elt(4), r.elt(4), r.elt(4), r.elt(4)).unwrap();
    for (m, y) in all_methods(&r, &r.elt(5), &f) {
        assert_eq!(y.unwrap(), r.elt(2), "method {m}");
    }
    assert_eq!(bc_inverse_agreed(&r, &r.elt(5), &f).unwrap(), r.elt(2));
    assert!(verify_bc_inverse(&r, &r.elt(5), &f, &r.elt(2)).verdict);
    assert!(!verify_bc_inverse(&r, &r.elt(5), &f, &r.elt(0)).verdict);
}

#[test]
fn factor_is_unsupported_on_finite_rings() {
    let r = z6();
    let f = CornerFrame::canonical(&r, r.elt(1), r.elt(1)).unwrap();
    assert!(matches!(bc_inverse(&r, &r.elt(5), &f, Method::Factor), Err(Error::UnsupportedMethod { .. })));
}

#[test]
fn diagonal_corner_example_across_matrix_backends() {
    let q = q2();
    let a = qm(&[&[2, 0], &[0, 3]]);
    let f = frame_e11(&q);
    let expect = e11::<Rational>().scale(&half());
    assert_eq!(bc_inverse_agreed(&q, &a, &f).unwrap(), expect);

    let r = r2();
    let af = a.to_f64();
    let y = bc_inverse_agreed(&r, &af, &frame_e11(&r)).unwrap();
    assert!(r.eq(&y, &expect.to_f64()));
}

#[test]
fn swap_has_no_corner_inverse() {
    let a = qm(&[&[0, 1], &[1, 0]]);
    let q = q2();
    for (m, y) in all_methods(&q, &a, &frame_e11(&q)) {
        assert!(matches!(y, Err(Error::InverseAbsent(_))), "method {m}");
    }
    let r = r2();
    assert!(matches!(bc_inverse_default(&r, &a.to_f64(), &frame_e11(&r)), Err(Error::InverseAbsent(_))));
    assert!(!q.bc_exists_by_rank(&a, &frame_e11(&q)));
}

#[test]
fn zero_frame_gives_zero() {
    let q = q2();
    let f = CornerFrame::canonical(&q, q.zero(), q.zero()).unwrap();
    assert_eq!(bc_inverse_agreed(&q, &qm(&[&[1, 2], &[3, 4]]), &f).unwrap(), q.zero());
}

#[test]
fn build_v_example() {
    let q = q2();
    let f = CornerFrame::canonical(&q, qm(&[&[1, 0], &[1, 0]]), qm(&[&[1, 1], &[0, 0]])).unwrap();
    let v = q.build_v(&f).unwrap();
    assert_eq!(v, qm(&[&[1, 1], &[1, 1]]));
}

#[test]
fn group_inverse_examples() {
    let q = q2();
    assert_eq!(group_inverse(&q, &qm(&[&[2, 0], &[0, 0]])).unwrap(), e11::<Rational>().scale(&half()));
    assert!(matches!(group_inverse(&q, &qm(&[&[0, 1], &[0, 0]])), Err(Error::InverseAbsent(_))));
    let r = z6();
    // 2 is its own group inverse in Z_6: 2*2*2 = 8 = 2.
    assert_eq!(group_inverse(&r, &r.elt(2)).unwrap(), r.elt(2));
}

#[test]
fn bott_duffin_and_relatives() {
    let r = z6();
    assert_eq!(bott_duffin_inverse(&r, &r.elt(5), &r.elt(4), &r.elt(4)).unwrap(), r.elt(2));
    assert!(matches!(bott_duffin_inverse(&r, &r.elt(5), &r.elt(2), &r.elt(4)), Err(Error::PreconditionFailed(_))));

    let q = q2();
    let a = qm(&[&[2, 0], &[0, 3]]);
    let h = e11::<Rational>().scale(&half());
    assert_eq!(hybrid_inverse(&q, &a, &e11(), &e11()).unwrap(), h);
    assert_eq!(annihilator_inverse(&q, &a, &e11(), &e11()).unwrap(), h);
    let e22 = Mat::unit(2, 2, 1, 1);
    assert_eq!(outer_inverse_pql(&q, &a, &e11(), &e22).unwrap(), h);
    assert_eq!(outer_inverse_pql(&q, &a, &q.zero(), &q.one()).unwrap(), q.zero());
    let swap = qm(&[&[0, 1], &[1, 0]]);
    assert!(matches!(bott_duffin_inverse(&q, &swap, &e11(), &e11()), Err(Error::InverseAbsent(_))));
}

#[test]
fn ats_examples() {
    let q = q2();
    let e1 = qm(&[&[1], &[0]]);
    let e2 = qm(&[&[0], &[1]]);
    let y = q.ats_outer_inverse(&qm(&[&[2, 0], &[0, 3]]), &e1, &e2).unwrap();
    assert_eq!(y, e11::<Rational>().scale(&half()));
    let nil = qm(&[&[0, 1], &[0, 0]]);
    assert!(matches!(q.ats_outer_inverse(&nil, &e1, &e1), Err(Error::InverseAbsent(_))));
}

#[test]
fn unit_consistency_reports_the_z6_discrepancy() {
    let r = z6();
    let f = CornerFrame::new(&r, r.elt(4), r.elt(4), r.elt(4), r.elt(4)).unwrap();
    let u = unit_consistency(&r, &r.elt(5), &f).unwrap();
    assert!(!u.condition && !u.inverse_invertible && u.a_invertible);
    assert!(!u.condition_matches_a_invertible);

    let one = CornerFrame::canonical(&r, r.elt(1), r.elt(1)).unwrap();
    let u = unit_consistency(&r, &r.elt(5), &one).unwrap();
    assert!(u.condition && u.inverse_is_ordinary_inverse);

    let q = q2();
    let u = unit_consistency(&q, &qm(&[&[2, 0], &[0, 3]]), &frame_e11(&q)).unwrap();
    assert!(!u.condition);
}

#[test]
fn corner_units_and_decomposition() {
    let q = q2();
    let f = frame_e11(&q);
    let cu = corner_unit_membership(&q, &e11::<Rational>().scale(&Rational::from_i64(2)), &f).unwrap();
    assert_eq!(cu.z, e11::<Rational>().scale(&half()));
    assert!(corner_unit_membership(&q, &q.zero(), &f).is_none());

    let r = z6();
    let f6 = CornerFrame::new(&r, r.elt(4), r.elt(4), r.elt(4), r.elt(4)).unwrap();
    assert_eq!(corner_unit_membership(&r, &r.elt(2), &f6).unwrap().z, r.elt(2));
    let d = decompose_bc_invertible(&r, &r.elt(5), &f6).unwrap();
    assert_eq!((d.unit.x, d.m), (r.elt(2), r.elt(3)));

    let d = decompose_bc_invertible(&q, &qm(&[&[2, 0], &[0, 3]]), &f).unwrap();
    assert_eq!(d.unit.x, qm(&[&[2, 0], &[0, 0]]));
    assert_eq!(d.m, qm(&[&[0, 0], &[0, 3]]));
}

#[test]
fn perturbation_and_scaling() {
    let q = q2();
    let f = frame_e11(&q);
    let a = qm(&[&[2, 0], &[0, 3]]);
    let h = e11::<Rational>().scale(&half());
    assert_eq!(perturb_invariant(&q, &a, &f, &qm(&[&[0, 5], &[7, 9]])).unwrap(), h);
    assert!(matches!(perturb_invariant(&q, &a, &f, &e11()), Err(Error::PreconditionFailed(_))));

    let r = z6();
    let f6 = CornerFrame::new(&r, r.elt(4), r.elt(4), r.elt(4), r.elt(4)).unwrap();
    assert_eq!(perturb_invariant(&r, &r.elt(5), &f6, &r.elt(3)).unwrap(), r.elt(2));

    let x = corner_unit_membership(&q, &e11::<Rational>().scale(&Rational::from_i64(2)), &f).unwrap();
    let u = e11::<Rational>().scale(&Rational::from_i64(3));
    let v = e11::<Rational>().scale(&Rational::from_i64(5));
    let expect = e11::<Rational>().scale(&Rational::new(1.into(), 30.into()));
    assert_eq!(scale_corner(&q, &x, &u, &v, &f, &q.zero()).unwrap(), expect);
    assert_eq!(scale_corner(&q, &x, &u, &v, &f, &Mat::unit(2, 2, 1, 1)).unwrap(), expect);
    assert_eq!(scale_corner(&q, &x, &f.p, &f.q, &f, &q.zero()).unwrap(), x.z);
    assert!(matches!(scale_corner(&q, &x, &q.zero(), &v, &f, &q.zero()), Err(Error::SingularCorner(_))));
}

#[test]
fn inverse_of_inverse_examples() {
    let q = q2();
    let f = frame_e11(&q);
    let a = qm(&[&[2, 0], &[0, 3]]);
    let two = qm(&[&[2, 0], &[0, 0]]);
    assert_eq!(inverse_of_inverse(&q, &a, &f, &q.zero()).unwrap(), two);
    assert_eq!(inverse_of_inverse(&q, &a, &f, &q.one_minus(&f.p)).unwrap(), two);
    let r = z6();
    let f6 = CornerFrame::new(&r, r.elt(4), r.elt(4), r.elt(4), r.elt(4)).unwrap();
    assert_eq!(inverse_of_inverse(&r, &r.elt(5), &f6, &r.elt(0)).unwrap(), r.elt(2));
}

#[test]
fn split_inverse_examples() {
    let q = q2();
    let a = qm(&[&[2, 0], &[0, 3]]);
    assert_eq!(bott_duffin_split_inverse(&q, &a, &e11(), &e11()).unwrap(), q.invert(&a).unwrap());
    let swap = qm(&[&[0, 1], &[1, 0]]);
    let e22 = Mat::unit(2, 2, 1, 1);
    assert_eq!(bott_duffin_split_inverse(&q, &swap, &e11(), &e22).unwrap(), swap);
    assert!(matches!(bott_duffin_split_inverse(&q, &swap, &e11(), &e11()), Err(Error::PreconditionFailed(_))));
    let singular = qm(&[&[1, 0], &[0, 0]]);
    assert!(matches!(bott_duffin_split_inverse(&q, &singular, &e11(), &e11()), Err(Error::InverseAbsent(_))));
}

#[test]
fn reverse_order_law_examples() {
    let q = q2();
    let f = frame_e11(&q);
    let a1 = qm(&[&[1, 1], &[0, 1]]);
    let a2 = qm(&[&[1, 0], &[1, 1]]);
    let out = reverse_order_law_check(&q, &a1, &f, &a2, &f).unwrap();
    assert!(!out.condition && !out.law_holds);
    assert_eq!(out.obstruction, e11());
    assert_eq!(out.product_inverse, Some(e11::<Rational>().scale(&half())));
    assert_eq!(out.reversed_product, e11());

    let d = qm(&[&[2, 0], &[0, 3]]);
    let out = reverse_order_law_check(&q, &d, &f, &d, &f).unwrap();
    assert!(out.condition && out.law_holds);
    assert_eq!(out.product_inverse, Some(e11::<Rational>().scale(&Rational::new(1.into(), 4.into()))));

    let one = CornerFrame::canonical(&q, q.one(), q.one()).unwrap();
    let out = reverse_order_law_check(&q, &a1, &one, &a2, &one).unwrap();
    assert!(out.law_holds);
    let e22 = CornerFrame::canonical(&q, Mat::unit(2, 2, 1, 1), Mat::unit(2, 2, 1, 1)).unwrap();
    assert!(matches!(reverse_order_law_check(&q, &a1, &f, &a2, &e22), Err(Error::PreconditionFailed(_))));
}

#[test]
fn invariance_under_corner_projections() {
    let r = z6();
    let f = CornerFrame::new(&r, r.elt(4), r.elt(4), r.elt(4), r.elt(4)).unwrap();
    let a = r.elt(5);
    let y = bc_inverse_default(&r, &a, &f).unwrap();
    for b in [r.mul(&f.q, &a), r.mul(&a, &f.p), r.product(&[&f.q, &a, &f.p])] {
        assert_eq!(bc_inverse_default(&r, &b, &f).unwrap(), y);
    }
}

fn small(n: usize) -> impl Strategy<Value = Mat<Rational>> {
    proptest::collection::vec(-2i64..=2, n * n)
        .prop_map(move |v| Mat::from_fn(n, n, |i, j| Rational::from_i64(v[i * n + j])))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn methods_agree_and_match_rank_test(a in small(3), b in small(3), c in small(3)) {
        let q = MatrixAlgebra::rational(3).unwrap();
        let f = CornerFrame::canonical(&q, b, c).unwrap();
        let exists = q.bc_exists_by_rank(&a, &f);
        match bc_inverse_agreed(&q, &a, &f) {
            Ok(y) => {
                prop_assert!(exists);
                prop_assert_eq!(q.product(&[&y, &a, &y]), y.clone());
                prop_assert!(q.ideal_eq(&y, &f.b, crate::ring::Side::ImageRight));
                prop_assert!(q.ideal_eq(&y, &f.c, crate::ring::Side::ImageLeft));
                let coincide = hybrid_inverse(&q, &a, &f.b, &f.c).unwrap();
                prop_assert_eq!(&coincide, &y);
                prop_assert_eq!(annihilator_inverse(&q, &a, &f.b, &f.c).unwrap(), y);
            }
            Err(Error::InverseAbsent(_)) => prop_assert!(!exists),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn transpose_duality(a in small(3), b in small(3), c in small(3)) {
        let q = MatrixAlgebra::rational(3).unwrap();
        let f = CornerFrame::canonical(&q, b, c).unwrap();
        let ft = f.transposed(&q).unwrap();
        let y = bc_inverse_default(&q, &a, &f).ok();
        let yt = bc_inverse_default(&q, &a.transpose(), &ft).ok();
        prop_assert_eq!(y.map(|m| m.transpose()), yt);
    }

    #[test]
    fn frame_independence(a in small(3), b in small(3), c in small(3), s in small(3), t in small(3)) {
        // b' = b s and c' = t c keep the ideals when s, t are invertible.
        let q = MatrixAlgebra::rational(3).unwrap();
        prop_assume!(q.is_unit(&s) && q.is_unit(&t));
        let f = CornerFrame::canonical(&q, b.clone(), c.clone()).unwrap();
        let f2 = CornerFrame::canonical(&q, b.mul(&s), t.mul(&c)).unwrap();
        prop_assert_eq!(bc_inverse_default(&q, &a, &f).ok(), bc_inverse_default(&q, &a, &f2).ok());
    }

    #[test]
    fn float_backend_matches_exact(a in small(3), b in small(3), c in small(3)) {
        let q = MatrixAlgebra::rational(3).unwrap();
        let r = MatrixAlgebra::float(3).unwrap();
        let f = CornerFrame::canonical(&q, b.clone(), c.clone()).unwrap();
        let ff = CornerFrame::canonical(&r, b.to_f64(), c.to_f64()).unwrap();
        let exact = bc_inverse_default(&q, &a, &f).ok();
        let float = bc_inverse_agreed(&r, &a.to_f64(), &ff).ok();
        prop_assert_eq!(exact.is_some(), float.is_some());
        if let (Some(x), Some(y)) = (exact, float) {
            prop_assert!(r.eq(&x.to_f64(), &y));
        }
    }
}
