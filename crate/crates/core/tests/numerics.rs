mod common;

use common::random_unitary;
use num_bigint::BigInt;
use qtm_core::decompose::NearTrivialMatrix;
use qtm_core::numerics::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// arccos(3/5) rounded to a 20-bit dyadic, from a 60-digit reference evaluation.
const ACOS_3_5_AT_20: i64 = 972_340;
const ACOS_3_5: f64 = 0.927_295_218_001_612_2;

#[test]
fn half_at_three_bits_is_four_eighths() {
    let half = CertifiedReal::from_ratio(1.into(), 2.into()).unwrap();
    assert_eq!(half.approx(3), Dyadic::new(BigInt::from(4), 3));
    for n in [0, 1, 17, 200] {
        assert_eq!(CertifiedReal::zero().approx(n), Dyadic::zero(n));
    }
}

#[test]
fn arccos_three_fifths_at_twenty_bits() {
    let x = CertifiedReal::from_ratio(3.into(), 5.into()).unwrap();
    let a = cr_combine(CrOp::Arccos, &[x]).unwrap().approx(20);
    assert_eq!(a.exp, 20);
    let diff = (a.mantissa - BigInt::from(ACOS_3_5_AT_20))
        .magnitude()
        .clone();
    assert!(diff <= 1u32.into());
    assert!((a_f64(20) - ACOS_3_5).abs() <= 2f64.powi(-20));
}

fn a_f64(n: u32) -> f64 {
    let x = CertifiedReal::from_ratio(3.into(), 5.into()).unwrap();
    x.acos().unwrap().approx(n).to_f64()
}

#[test]
fn arctan_four_thirds_matches_arccos_three_fifths() {
    let q = CertifiedReal::from_ratio(4.into(), 3.into()).unwrap();
    let t = cr_combine(CrOp::Arctan, &[q]).unwrap();
    for n in [8, 24, 52] {
        assert!((t.approx(n).to_f64() - ACOS_3_5).abs() <= 2f64.powi(-(n as i32)) + 1e-16);
    }
    let x = CertifiedReal::from_ratio(3.into(), 5.into()).unwrap();
    let d = t.sub(&x.acos().unwrap());
    assert!(d.approx(200).mantissa.magnitude() <= &2u32.into());
}

#[test]
fn sqrt_and_cos_examples() {
    let two = cr_combine(CrOp::Sqrt, &[CertifiedReal::from_int(4)]).unwrap();
    let one = cr_combine(CrOp::Cos, &[CertifiedReal::zero()]).unwrap();
    for n in [0, 5, 64, 130] {
        assert_eq!(two.approx(n), Dyadic::new(BigInt::from(2) << n as usize, n));
        assert_eq!(one.approx(n), Dyadic::new(BigInt::from(1) << n as usize, n));
    }
}

#[test]
fn division_by_zero_is_undecided_and_negative_sqrt_is_a_domain_error() {
    let one = CertifiedReal::one();
    let tiny_zero = CertifiedReal::pi().sub(&CertifiedReal::pi());
    assert!(matches!(
        cr_combine_with_cap(CrOp::Div, &[one.clone(), tiny_zero], 64),
        Err(NumericsError::ZeroDivisorUndecided { .. })
    ));
    assert!(matches!(
        cr_combine(CrOp::Sqrt, &[CertifiedReal::from_int(-1)]),
        Err(NumericsError::DomainError(_))
    ));
    assert!(matches!(
        cr_combine(CrOp::Add, &[one]),
        Err(NumericsError::Arity { .. })
    ));
}

#[test]
fn products_and_identity() {
    let u = random_unitary(4, 11);
    let i = DenseMatrix::identity(4);
    assert!(i.mat_mul(&u).unwrap().max_abs_diff(&u) == 0.0);
    assert!(u.mat_mul(&u.adjoint()).unwrap().max_abs_diff(&i) <= TOL_CONSTRUCT);
    let a = NearTrivialMatrix::rotation(4, 0, 1, 0.42).materialize();
    let b = NearTrivialMatrix::rotation(4, 0, 1, -0.42).materialize();
    assert!(a.mat_mul(&b).unwrap().max_abs_diff(&i) <= 1e-15);
}

#[test]
fn unitarity_examples() {
    assert!(DenseMatrix::identity(3).check_unitary(1e-12));
    let d = DenseMatrix::from_rows(&[
        vec![c(1.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(2.0, 0.0)],
    ])
    .unwrap();
    assert!(!d.check_unitary(TOL_CONSTRUCT));
    let r = DenseMatrix::from_rows(&[
        vec![c(0.6, 0.0), c(0.8, 0.0)],
        vec![c(-0.8, 0.0), c(0.6, 0.0)],
    ])
    .unwrap();
    assert!(r.check_unitary(TOL_CONSTRUCT));
}

#[test]
fn tracked_values_agree_with_certified() {
    let h = Tracked::from_certified(&CertifiedReal::from_ratio(1.into(), 2.into()).unwrap());
    let s = h.sqrt().unwrap();
    let a = s.atan();
    let exact = a.certified().unwrap().approx(64).to_f64();
    assert!((a.to_f64() - exact).abs() <= 2f64.powi(-48));
}
