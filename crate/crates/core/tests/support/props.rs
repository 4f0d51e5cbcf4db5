//! Randomized property suites shared by the `properties` and `acceptance` targets.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use qknot::exact_poly::{gcd, parse_poly, resultant, BigRat, MultiPoly, RatFun, Var, Vars};
use qknot::jones::fig8;
use qknot::qtorus::{act, eval_minus1_skew, normalize, skew_mul, SkewOperator};
use qknot::serialize::{from_json, parse_operator, to_json};

pub const CASES: u32 = 256;

pub type Outcome = Result<(), String>;

fn runner() -> TestRunner {
    TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() })
}

fn poly_in(vars: Vars, e1: std::ops::Range<i32>, e2: std::ops::Range<i32>, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((e1, e2, -6i64..=6, 1i64..=3), 1..=max_terms).prop_map(move |ts| {
        MultiPoly::from_terms(vars, ts.into_iter().map(|(a, b, n, d)| ((a, b), BigRat::new(BigInt::from(n), BigInt::from(d)))))
    })
}

fn tm() -> impl Strategy<Value = MultiPoly> {
    poly_in(Vars::TM, -4..5, -3..4, 5)
}

fn tm_nonzero() -> impl Strategy<Value = MultiPoly> {
    tm().prop_filter("nonzero", |p| !p.is_zero())
}

fn integer_tm() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((0i32..4, 0i32..3, -4i64..=4), 1..=4)
        .prop_map(|ts| MultiPoly::ints(Vars::TM, &ts))
        .prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfun() -> impl Strategy<Value = RatFun> {
    (tm(), tm_nonzero()).prop_map(|(n, d)| RatFun::new(n, d).unwrap())
}

fn operator() -> impl Strategy<Value = SkewOperator> {
    prop::collection::vec(poly_in(Vars::TM, -3..4, -2..3, 3), 1..=3)
        .prop_map(|cs| SkewOperator::from_polys(cs.into_iter().enumerate().map(|(i, c)| (i as u32, c))))
}

fn in_lambda() -> impl Strategy<Value = MultiPoly> {
    poly_in(Vars::M_LAMBDA, -2..3, 0..3, 4).prop_filter("positive lambda degree", |p| {
        p.degree_range(Var::Lambda).map(|(_, hi)| hi >= 1).unwrap_or(false)
    })
}

fn t_only() -> impl Strategy<Value = MultiPoly> {
    poly_in(Vars::TM, 0..5, 0..1, 4).prop_filter("nonzero", |p| !p.is_zero())
}

/// Euclid's algorithm over `Q[t]` with the result made monic.
fn euclid_gcd_t(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    fn dense(p: &MultiPoly) -> Vec<BigRat> {
        let (lo, hi) = p.degree_range(Var::T).unwrap_or((0, -1));
        assert!(lo >= 0);
        let mut v = vec![BigRat::zero(); (hi + 1).max(0) as usize];
        for ((e, _), c) in p.terms() {
            v[e as usize] = c;
        }
        v
    }
    fn trim(v: &mut Vec<BigRat>) {
        while v.last().map(|c| c.is_zero()).unwrap_or(false) {
            v.pop();
        }
    }
    let (mut a, mut b) = (dense(a), dense(b));
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        while a.len() >= b.len() && !a.is_empty() {
            let q = a.last().unwrap() / b.last().unwrap();
            let off = a.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                a[off + i] = &a[off + i] - &q * c;
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    let lead = a.last().cloned().unwrap_or_else(BigRat::one);
    MultiPoly::from_terms(Vars::TM, a.into_iter().enumerate().map(|(i, c)| ((i as i32, 0), c / &lead)))
}

fn nonzero_map(m: BTreeMap<u32, RatFun>) -> BTreeMap<u32, RatFun> {
    m.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn commutative_product(a: &BTreeMap<u32, RatFun>, b: &BTreeMap<u32, RatFun>) -> BTreeMap<u32, RatFun> {
    let mut out: BTreeMap<u32, RatFun> = BTreeMap::new();
    for (i, f) in a {
        for (j, g) in b {
            let e = out.entry(i + j).or_insert_with(|| RatFun::zero(Vars::ML));
            *e = &*e + &(f * g);
        }
    }
    nonzero_map(out)
}

pub fn ring_laws() -> Outcome {
    runner().run(&(tm(), tm(), tm()), |(a, b, c)| {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            #[allow(clippy::eq_op)]
            let diff = &a - &a;
            prop_assert!(diff.is_zero());
            prop_assert_eq!(&a * &MultiPoly::one(Vars::TM), a.clone());
        Ok(())
    }).map_err(|e| e.to_string())
}

pub fn ratfun_field_laws() -> Outcome {
    runner().run(&(ratfun(), ratfun()), |(f, g)| {
            prop_assert_eq!(&f * &g, &g * &f);
            prop_assert_eq!(&(&f + &g) - &g, f.clone());
            if !f.is_zero() {
                prop_assert!((&f * &f.inv().unwrap()).is_one());
                prop_assert_eq!(&(&g / &f) * &f, g.clone());
            }
        Ok(())
    }).map_err(|e| e.to_string())
}

pub fn degree_homomorphisms() -> Outcome {
    runner().run(&(tm_nonzero(), tm_nonzero()), |(f, g)| {
            let (lf, hf) = f.degree_t().unwrap();
            let (lg, hg) = g.degree_t().unwrap();
            let fg = &f * &g;
            prop_assert_eq!(fg.degree_t().unwrap(), (lf + lg, hf + hg));
            prop_assert_eq!(fg.mu().unwrap(), f.mu().unwrap() + g.mu().unwrap());
        Ok(())
    }).map_err(|e| e.to_string())
}

pub fn gcd_divides_and_is_maximal() -> Outcome {
    runner().run(&(integer_tm(), integer_tm(), integer_tm()), |(a, b, c)| {
            let ac = &a * &c;
            let bc = &b * &c;
            let g = gcd(&ac, &bc);
            let qa = ac.div_exact(&g);
            let qb = bc.div_exact(&g);
            prop_assert!(qa.is_some() && qb.is_some());
            prop_assert!(g.div_exact(&c).is_some());
            prop_assert!(gcd(&qa.unwrap(), &qb.unwrap()).is_one());
            prop_assert_eq!(gcd(&bc, &ac), g);
        Ok(())
    }).map_err(|e| e.to_string())
}

pub fn gcd_matches_euclid_in_t() -> Outcome {
    runner().run(&(t_only(), t_only(), t_only()), |(a, b, c)| {
            let (x, y) = (&a * &c, &b * &c);
            let ours = gcd(&x, &y);
            let oracle = euclid_gcd_t(&x, &y).normalize_unit();
            prop_assert_eq!(ours, oracle);
        Ok(())
    }).map_err(|e| e.to_string())
}

pub fn skew_associativity() -> Outcome {
    runner().run(&(operator(), operator(), operator()), |(a, b, c)| {
            prop_assert_eq!(skew_mul(&skew_mul(&a, &b), &c), skew_mul(&a, &skew_mul(&b, &c)));
        Ok(())
    }).map_err(|e| e.to_string())
}

pub fn skew_distributivity() -> Outcome {
    runner().run(&(operator(), operator(), operator()), |(a, b, c)| {
            prop_assert_eq!(skew_mul(&a, &b.add(&c)), skew_mul(&a, &b).add(&skew_mul(&a, &c)));
        Ok(())
    }).map_err(|e| e.to_string())
}

pub fn action_compatibility() -> Outcome {
    runner().run(&(operator(), operator(), 1i64..5), |(a, b, n)| {
            let ab = act(&skew_mul(&a, &b), fig8(), n).unwrap();
            let inner = |m: i64| act(&b, fig8(), m);
            prop_assert_eq!(ab, act(&a, &inner, n).unwrap());
        Ok(())
    }).map_err(|e| e.to_string())
}

pub fn minus_one_homomorphism() -> Outcome {
    runner().run(&(operator(), operator()), |(a, b)| {
            let lhs = nonzero_map(eval_minus1_skew(&skew_mul(&a, &b)).unwrap());
            let rhs = commutative_product(&eval_minus1_skew(&a).unwrap(), &eval_minus1_skew(&b).unwrap());
            prop_assert_eq!(lhs, rhs);
        Ok(())
    }).map_err(|e| e.to_string())
}

pub fn resultant_multiplicativity() -> Outcome {
    runner().run(&(in_lambda(), in_lambda(), in_lambda()), |(f1, f2, g)| {
            let lhs = resultant(&(&f1 * &f2), &g, Var::Lambda).unwrap();
            let rhs = &resultant(&f1, &g, Var::Lambda).unwrap() * &resultant(&f2, &g, Var::Lambda).unwrap();
            prop_assert_eq!(lhs, rhs);
        Ok(())
    }).map_err(|e| e.to_string())
}

pub fn resultant_against_power_multiplicativity() -> Outcome {
    runner().run(&(in_lambda(), in_lambda(), 2i32..4), |(f1, f2, s)| {
            let g = MultiPoly::ints(Vars::LAMBDA_L, &[(s, 0, 1), (0, 1, -1)]);
            let lhs = resultant(&(&f1 * &f2), &g, Var::Lambda).unwrap();
            let rhs = &resultant(&f1, &g, Var::Lambda).unwrap() * &resultant(&f2, &g, Var::Lambda).unwrap();
            prop_assert_eq!(lhs, rhs);
        Ok(())
    }).map_err(|e| e.to_string())
}

pub fn text_and_json_round_trip() -> Outcome {
    runner().run(&(tm(), ratfun()), |(p, f)| {
            prop_assert_eq!(parse_poly(&p.to_string(), Vars::TM).unwrap(), p.clone());
            prop_assert_eq!(from_json::<MultiPoly>(&to_json(&p)).unwrap(), p);
            prop_assert_eq!(from_json::<RatFun>(&to_json(&f)).unwrap(), f);
        Ok(())
    }).map_err(|e| e.to_string())
}

pub fn operator_round_trip() -> Outcome {
    runner().run(&(operator(),), |(a,)| {
            prop_assume!(!a.is_zero());
            let n = normalize(&a).unwrap();
            prop_assert_eq!(parse_operator(&n.to_string()).unwrap(), n.clone());
            prop_assert_eq!(from_json::<qknot::qtorus::NormalizedOperator>(&to_json(&n)).unwrap(), n.clone());
            prop_assert_eq!(normalize(&n.to_skew()).unwrap(), n);
        Ok(())
    }).map_err(|e| e.to_string())
}

pub type Suite = (&'static str, fn() -> Outcome);

/// Every suite with its name.
#[allow(dead_code)]
pub fn all() -> Vec<Suite> {
    vec![
        ("ring_laws", ring_laws),
        ("ratfun_field_laws", ratfun_field_laws),
        ("degree_homomorphisms", degree_homomorphisms),
        ("gcd_divides_and_is_maximal", gcd_divides_and_is_maximal),
        ("gcd_matches_euclid_in_t", gcd_matches_euclid_in_t),
        ("skew_associativity", skew_associativity),
        ("skew_distributivity", skew_distributivity),
        ("action_compatibility", action_compatibility),
        ("minus_one_homomorphism", minus_one_homomorphism),
        ("resultant_multiplicativity", resultant_multiplicativity),
        ("resultant_against_power_multiplicativity", resultant_against_power_multiplicativity),
        ("text_and_json_round_trip", text_and_json_round_trip),
        ("operator_round_trip", operator_round_trip),
    ]
}
