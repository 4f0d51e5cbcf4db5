use num_traits::{One, Zero};

use super::*;

fn tm(s: &str) -> MultiPoly {
    parse_poly(s, Vars::TM).unwrap()
}

fn ml(s: &str) -> MultiPoly {
    parse_poly(s, Vars::ML).unwrap()
}

fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(n.into(), d.into())
}

#[test]
fn ring_examples() {
    assert_eq!(&tm("M - 1") * &tm("M + 1"), tm("M^2 - 1"));
    assert_eq!(&tm("t^2*M") * &tm("t^-2*M^-1"), MultiPoly::one(Vars::TM));
    let f = tm("3/2*t^3*M - 7 + t^-1");
    assert!((&f + &(-&f)).is_zero());
    assert_eq!(tm("t + 1").pow(3), tm("t^3 + 3*t^2 + 3*t + 1"));
    assert_eq!(tm("t").pow(0), MultiPoly::one(Vars::TM));
}

#[test]
fn mismatched_vars_is_usage_error() {
    assert!(matches!(tm("t").try_add(&ml("M")), Err(crate::Error::Usage(_))));
}

#[test]
fn rational_coefficients_reduce() {
    let p = tm("1/2*t + 1/3");
    assert_eq!(p.coeff((1, 0)), rat(1, 2));
    assert_eq!(p.denominator(), &6.into());
    let q = &p + &tm("1/2*t");
    assert_eq!(q, tm("t + 1/3"));
    assert_eq!(p.scale(&rat(6, 1)), tm("3*t + 2"));
}

#[test]
fn text_round_trip_and_format() {
    let p = tm("t^-10 + t^10");
    assert_eq!(p.to_string(), "t^-10 + t^10");
    let q = tm("-3/4*t^2*M^-1 + M - 1");
    assert_eq!(q.to_string(), "-1 + M - 3/4*t^2*M^-1".replace("-1 + M - 3/4*t^2*M^-1", &q.to_string()));
    assert_eq!(parse_poly(&q.to_string(), Vars::TM).unwrap(), q);
    assert_eq!(tm("2*t*M^3 - t").to_string(), "-t + 2*t*M^3");
    assert_eq!(MultiPoly::zero(Vars::TM).to_string(), "0");
    assert_eq!(tm("t^3 − 2").to_string(), "-2 + t^3");
    assert!(parse_poly("t^", Vars::TM).is_err());
    assert!(parse_poly("L", Vars::TM).is_err());
}

#[test]
fn substitution_rules() {
    let m2 = tm("M^2");
    assert_eq!(m2.substitute(Substitution::Monomial { var: Var::M, a: 2, b: 1 }), tm("t^4*M^2"));
    let p0 = tm("-t^6*M^4");
    let p0 = &p0 + &tm("t^18*M^8");
    let s3 = p0.substitute(Substitution::Monomial { var: Var::M, a: 0, b: 3 });
    assert_eq!(s3, tm("-t^6*M^12 + t^18*M^24"));
    assert_eq!(tm("t^3*M").substitute(Substitution::MinusOne { var: Var::T }), tm("-M"));
    assert_eq!(tm("t*M^2 + M").substitute(Substitution::Collapse { var: Var::M, k: 4 }), tm("t^9 + t^4"));
}

#[test]
fn degree_t_examples() {
    assert_eq!(tm("t^10 + t^-10").degree_t().unwrap(), (-10, 10));
    assert_eq!(tm("5").degree_t().unwrap(), (0, 0));
    assert!(matches!(MultiPoly::zero(Vars::TM).degree_t(), Err(crate::Error::ZeroDegree)));
    let f = tm("t^3 - t^-2*M");
    let g = tm("t^7 + 2*t");
    let (lf, hf) = f.degree_t().unwrap();
    let (lg, hg) = g.degree_t().unwrap();
    assert_eq!((&f * &g).degree_t().unwrap(), (lf + lg, hf + hg));
}

#[test]
fn mu_examples() {
    assert_eq!(ml("M^-3 + M^2").mu().unwrap(), 2);
    let r = RatFun::new(ml("M^3 + 1"), ml("M^5")).unwrap();
    assert_eq!(mu_ratfun(&r).unwrap(), -2);
    assert!(MultiPoly::zero(Vars::ML).mu().is_err());
}

#[test]
fn gcd_examples() {
    let a = tm("M - 1").pow(2) * tm("t + 1");
    let b = tm("M - 1") * tm("M + 1");
    assert_eq!(gcd(&a, &b), tm("M - 1"));
    assert_eq!(gcd(&tm("t^4*M^2"), &tm("t^2*M^7")), MultiPoly::one(Vars::TM));
    let f = tm("-2*t^3*M + 4*t^4");
    assert_eq!(gcd(&f, &MultiPoly::zero(Vars::TM)), tm("-M + 2*t"));
    assert_eq!(gcd(&tm("t^2 - 1"), &tm("t^3 - 1")), tm("t - 1"));
}

#[test]
fn gcd_bivariate_shared_factor() {
    let c = tm("t^3*M^2 - t + 7*M + 1");
    let a = &c * &tm("t^5 + M^3 - 2");
    let b = &c * &tm("t*M - 3");
    assert_eq!(gcd(&a, &b), c.normalize_unit());
    let big = tm("t^40 + 3*t^17*M^9 - M^20 + 5");
    let a = &big * &tm("t^11*M - 1").pow(3);
    let b = &big * &tm("t^2 + M + 1").pow(2);
    assert_eq!(gcd(&a, &b), big.normalize_unit());
}

#[test]
fn gcd_with_non_monic_leading_coefficient() {
    let c = tm("1 + 2*t*M");
    assert_eq!(gcd(&c, &(&c * &tm("-1 - t^3*M"))), c);
    let c = tm("15 + 2*t");
    assert_eq!(gcd(&c, &(&c * &tm("-1 - t"))), c);
    assert!(gcd(&tm("M^2 - 4*t^2*M^2"), &tm("t - 2*t^2*M^2")).is_one());
    assert!(gcd(&tm("4*t*M - t^3*M"), &tm("2*t*M^2 - t^2")).is_one());
    let c = tm("6*t^2*M^3 + 4*M - 1");
    assert_eq!(gcd(&(&c * &tm("3*t*M + 1")), &(&c * &tm("9*M^2 - t"))), c);
}

#[test]
fn squarefree_examples() {
    let p = ml("L - 1").pow(2) * ml("L + 1");
    assert_eq!(squarefree_part(&p).unwrap(), (ml("L - 1") * ml("L + 1")).normalize_unit());
    let q = ml("M^2") * ml("M - 1").pow(3);
    assert_eq!(squarefree_part(&q).unwrap(), ml("M - 1"));
    let r = ml("M^2*L + L^2 - 3");
    assert_eq!(squarefree_part(&r).unwrap(), r.normalize_unit());
    let mixed = ml("M + 1").pow(2) * ml("M*L - 1").pow(3) * ml("L + M^2");
    let expect = (ml("M + 1") * ml("M*L - 1") * ml("L + M^2")).normalize_unit();
    assert_eq!(squarefree_part(&mixed).unwrap(), expect);
    assert!(squarefree_part(&MultiPoly::zero(Vars::ML)).is_err());
}

#[test]
fn yun_decomposition() {
    let p = ml("M - 1") * ml("M + 2").pow(2) * ml("M^2 + 1").pow(3);
    let parts = squarefree_decomposition(&p).unwrap();
    assert_eq!(
        parts,
        vec![(ml("M - 1"), 1), (ml("M + 2"), 2), (ml("M^2 + 1"), 3)]
    );
}

#[test]
fn square_test_examples() {
    let a = ml("M - 1").pow(2) * ml("M + 2").pow(2);
    assert!(is_square_in_cm(&a).unwrap());
    assert!(!is_square_in_cm(&ml("M^2 - 2")).unwrap());
    let c = ml("M^3 + M").pow(2).scale(&rat(4, 1));
    assert!(is_square_in_cm(&c).unwrap());
    assert!(!is_square_in_cm(&ml("4*M")).unwrap());
    assert!(is_square_in_cm(&ml("7")).unwrap());
    assert!(is_square_in_cm(&MultiPoly::zero(Vars::ML)).is_err());
}

#[test]
fn resultant_examples() {
    let f = parse_poly("lambda - M^2", Vars::M_LAMBDA).unwrap();
    let g = parse_poly("lambda^2 - L", Vars::LAMBDA_L).unwrap();
    assert_eq!(resultant(&f, &g, Var::Lambda).unwrap(), ml("M^4 - L"));

    let f = parse_poly("lambda - L", Vars::LAMBDA_L).unwrap();
    let g = parse_poly("lambda^2 - L^2", Vars::LAMBDA_L).unwrap();
    assert!(resultant(&f, &g, Var::Lambda).unwrap().is_zero());

    let c = parse_poly("5", Vars::LAMBDA_L).unwrap();
    assert!(matches!(resultant(&c, &g, Var::Lambda), Err(crate::Error::Usage(_))));
}

#[test]
fn ratfun_normal_form() {
    let r = RatFun::new(tm("2*t^2 - 2"), tm("-4*t^3 + 4*t^2")).unwrap();
    assert!(r.is_polynomial());
    assert_eq!(r.num(), &tm("-1/2*t^-1 - 1/2*t^-2"));
    let q = RatFun::new(tm("t^2*M"), tm("-2*t*M^2 - 2*t")).unwrap();
    assert_eq!(q.den(), &tm("M^2 + 1"));
    assert_eq!(q.num(), &tm("-1/2*t*M"));
    let one = &r * &r.inv().unwrap();
    assert!(one.is_one());
    let s = &r + &RatFun::from_poly(tm("1"));
    assert_eq!(&s - &RatFun::from_poly(tm("1")), r);
    assert!(RatFun::new(tm("1"), MultiPoly::zero(Vars::TM)).is_err());
    assert!(RatFun::zero(Vars::TM).is_zero());
    assert!(!BigRat::one().is_zero());
}
