//! Comparison of annihilators at `t = -1` with A-polynomials, and the
//! commutative sequences used to relate them to resultants.

use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::apoly::{a_cable, resultant_against_power, APoly};
use crate::error::{Error, Result};
use crate::exact_poly::{mu_ratfun, MultiPoly, RatFun, Substitution, Var, Vars};
use crate::jones::{CableParams, KnotSequence};
use crate::qtorus::{eval_minus1_op, NormalizedOperator};
use crate::recurrences::{assemble_annihilator, solve_relation, verify, CableAnnihilator, Fig8Relation, VerifyRow};

/// Outcome of a proportionality test over `Q(M)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proportionality {
    pub proportional: bool,
    /// `p_i / q_i` at the lowest common `L`-power, when proportional.
    pub witness: Option<RatFun>,
}

/// Whether `p = c(M) q` for some nonzero `c(M)`; both over `(M, L)`.
pub fn proportional_over_m(p: &MultiPoly, q: &MultiPoly) -> Result<Proportionality> {
    if p.vars() != Vars::ML || q.vars() != Vars::ML {
        return Err(Error::Usage("proportionality test needs polynomials in (M, L)".into()));
    }
    if p.is_zero() || q.is_zero() {
        return Err(Error::Usage("proportionality test of zero".into()));
    }
    let no = Proportionality { proportional: false, witness: None };
    let pc = p.coeffs_in(Var::L);
    let qc = q.coeffs_in(Var::L);
    if pc.len() != qc.len() || pc.iter().zip(&qc).any(|(a, b)| a.0 != b.0) {
        return Ok(no);
    }
    let (p0, q0) = (&pc[0].1, &qc[0].1);
    for ((_, pi), (_, qi)) in pc.iter().zip(&qc).skip(1) {
        if pi * q0 != p0 * qi {
            return Ok(no);
        }
    }
    Ok(Proportionality { proportional: true, witness: Some(RatFun::new(p0.clone(), q0.clone())?) })
}

/// `P_i(-1, M^s)` as polynomials over `(M, L)`.
fn minus1_coeffs(s: i64) -> [MultiPoly; 3] {
    let rel = Fig8Relation::literal();
    let f = |p: &MultiPoly| {
        p.substitute(Substitution::MinusOne { var: Var::T })
            .map_terms(Vars::ML, |(_, m)| (m * s as i32, 0))
    };
    [f(&rel.p0), f(&rel.p1), f(&rel.p2)]
}

/// `(t^2 - t^-2) b(t, M)` at `t = -1`, `M -> M^s`: the finite part of `b(-1, M^s)`.
pub fn b_minus1(s: i64) -> MultiPoly {
    Fig8Relation::b_numerator()
        .substitute(Substitution::MinusOne { var: Var::T })
        .map_terms(Vars::ML, |(_, m)| (m * s as i32, 0))
}

/// The figure eight operator at `t = -1` with `M -> M^s`, over `(M, lambda)`.
pub fn fig8_minus1_in_lambda(s: i64) -> MultiPoly {
    let c = minus1_coeffs(s);
    let mut acc = MultiPoly::zero(Vars::M_LAMBDA);
    for (i, ci) in c.iter().enumerate() {
        acc = &acc + &ci.map_terms(Vars::M_LAMBDA, |(m, _)| (m, i as i32));
    }
    acc
}

/// `S_n` over `Q(M)` with `S_0 = S_1 = 1` and
/// `P_2(-1,M^s) S_(n+2) + P_1(-1,M^s) S_(n+1) + P_0(-1,M^s) S_n = b(-1,M^s)`.
pub struct CommutativeSeq {
    s: i64,
    coeffs: [MultiPoly; 3],
    b: MultiPoly,
    memo: Mutex<Vec<RatFun>>,
}

impl CommutativeSeq {
    pub fn new(s: i64) -> Result<CommutativeSeq> {
        if s < 2 {
            return Err(Error::Usage(format!("commutative sequence needs s >= 2, got {s}")));
        }
        let one = RatFun::one(Vars::ML);
        Ok(CommutativeSeq { s, coeffs: minus1_coeffs(s), b: b_minus1(s), memo: Mutex::new(vec![one.clone(), one]) })
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    pub fn value(&self, n: usize) -> RatFun {
        let mut memo = self.memo.lock().unwrap();
        while memo.len() <= n {
            let k = memo.len();
            let [p0, p1, p2] = &self.coeffs;
            let rhs = &(&RatFun::from_poly(self.b.clone()) - &memo[k - 1].mul_poly(p1)) - &memo[k - 2].mul_poly(p0);
            let next = rhs.try_div(&RatFun::from_poly(p2.clone())).expect("P_2(-1, M^s) is nonzero");
            memo.push(next);
        }
        memo[n].clone()
    }

    /// `M^r S_(s(n+1)+1) - M^-r S_(s(n+1)-1)`.
    pub fn t_value(&self, r: i64, n: usize) -> RatFun {
        let k = self.s as usize * (n + 1);
        let mr = MultiPoly::ints(Vars::ML, &[(r as i32, 0, 1)]);
        let mr_inv = MultiPoly::ints(Vars::ML, &[(-r as i32, 0, 1)]);
        &self.value(k + 1).mul_poly(&mr) - &self.value(k - 1).mul_poly(&mr_inv)
    }
}

/// `S_n` for the given `s`.
pub fn commutative_s(s: i64, n: usize) -> Result<RatFun> {
    Ok(CommutativeSeq::new(s)?.value(n))
}

/// `R(L) = Res_lambda(P(-1, M^s, lambda), lambda^s - L)`.
pub fn commutative_resultant(s: i64) -> Result<MultiPoly> {
    resultant_against_power(&fig8_minus1_in_lambda(s), s)
}

/// `sum_i R_i(M) f(n + i)` for `R` over `(M, L)`.
pub fn apply_commutative(r: &MultiPoly, f: impl Fn(usize) -> RatFun, n: usize) -> RatFun {
    let mut acc = RatFun::zero(Vars::ML);
    for (i, c) in r.coeffs_in(Var::L) {
        acc = &acc + &f(n + i as usize).mul_poly(&c);
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutativeReport {
    pub s: i64,
    pub resultant: MultiPoly,
    /// `R(L) S_(sn)` for `n = 0..=n_max`.
    pub values: Vec<RatFun>,
    pub constant: bool,
    /// The discriminant of `P(-1, M^s, lambda)` in `lambda` is nonzero.
    pub distinct_roots: bool,
}

/// Applies `r` to `n -> S_(sn)` for `n = 0..=n_max` and checks the values agree.
pub fn commutative_check_with(r: &MultiPoly, s: i64, n_max: usize) -> Result<CommutativeReport> {
    let seq = CommutativeSeq::new(s)?;
    let su = s as usize;
    let values: Vec<RatFun> = (0..=n_max).map(|n| apply_commutative(r, |k| seq.value(su * k), n)).collect();
    let constant = values.windows(2).all(|w| w[0] == w[1]);
    let [p0, p1, p2] = minus1_coeffs(s);
    let disc = &p1.pow(2) - &(&p2 * &p0).scale_int(&4.into());
    Ok(CommutativeReport { s, resultant: r.clone(), values, constant, distinct_roots: !disc.is_zero() })
}

pub fn commutative_check(s: i64, n_max: usize) -> Result<CommutativeReport> {
    commutative_check_with(&commutative_resultant(s)?, s, n_max)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultantIdentity {
    pub params: CableParams,
    pub q_minus1: MultiPoly,
    pub resultant: MultiPoly,
    pub proportionality: Proportionality,
    /// `R(L) T_n` agrees for all tested `n`.
    pub t_constant: bool,
    /// `(n, mu(T_n) computed, mu_t_closed_form)`.
    pub mu_t: Vec<(i64, i32, i64)>,
}

/// `max(r + 4s^2 n + 4s^2 + 7s, -r + 4s^2 n + 4s^2 - s)`.
pub fn mu_t_closed_form(r: i64, s: i64, n: i64) -> i64 {
    (r + 4 * s * s * n + 4 * s * s + 7 * s).max(-r + 4 * s * s * n + 4 * s * s - s)
}

/// Compares `Q(-1, M, L)` with the resultant and checks `R(L) T_n` is constant for `n = 0..=n_max`.
pub fn resultant_identity_with(p: CableParams, q: &NormalizedOperator, n_max: usize) -> Result<ResultantIdentity> {
    let s = p.s();
    let res = commutative_resultant(s)?;
    let q_minus1 = eval_minus1_op(q);
    let proportionality = proportional_over_m(&q_minus1, &res)?;
    let seq = CommutativeSeq::new(s)?;
    let values: Vec<RatFun> = (0..=n_max).map(|n| apply_commutative(&res, |k| seq.t_value(p.r(), k), n)).collect();
    let t_constant = values.windows(2).all(|w| w[0] == w[1]);
    let mu_t = (0..=n_max as i64)
        .map(|n| Ok((n, mu_ratfun(&seq.t_value(p.r(), n as usize))?, mu_t_closed_form(p.r(), s, n))))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResultantIdentity { params: p, q_minus1, resultant: res, proportionality, t_constant, mu_t })
}

pub fn resultant_identity(p: CableParams) -> Result<ResultantIdentity> {
    let solved = solve_relation(p)?;
    resultant_identity_with(p, &solved.q, 5)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `|r| > 4s`.
    Proven,
    /// `|r| < 4s`: computed and reported, not covered by the theorem.
    OutsideTheorem,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AJReport {
    pub params: CableParams,
    pub regime: Regime,
    pub l_degree: u32,
    pub assembly: Vec<String>,
    pub annihilator: NormalizedOperator,
    pub empirical: Vec<VerifyRow>,
    pub t_minus1: MultiPoly,
    pub a_poly: MultiPoly,
    pub a_factors: Vec<(String, MultiPoly)>,
    pub proportional: bool,
    pub witness: Option<RatFun>,
    /// Only for `s > 2`.
    pub resultant_identity: Option<bool>,
    pub verdict: bool,
}

impl AJReport {
    pub fn empirical_pass(&self) -> bool {
        self.empirical.iter().all(|r| r.pass)
    }
}

/// Builds the annihilator, checks it on `J_{C,n}` for `n = 1..=n_check`,
/// and compares it at `t = -1` with the cabled A-polynomial.
pub fn aj_verify(p: CableParams, n_check: i64) -> Result<AJReport> {
    let ann = assemble_annihilator(p)?;
    aj_verify_with(&ann, &a_cable(p)?, n_check)
}

pub fn aj_verify_with(ann: &CableAnnihilator, a: &APoly, n_check: i64) -> Result<AJReport> {
    let p = ann.params;
    let empirical = verify(&ann.r.to_skew(), None, &KnotSequence::cable(p), 1..=n_check).rows;
    let t_minus1 = eval_minus1_op(&ann.r);
    let prop = proportional_over_m(&t_minus1, &a.poly)?;
    let resultant_identity = if p.s() > 2 {
        let id = resultant_identity_with(p, &ann.relation.q, 3)?;
        Some(id.proportionality.proportional && id.t_constant)
    } else {
        None
    };
    let regime = if p.inside_band() { Regime::OutsideTheorem } else { Regime::Proven };
    let verdict = empirical.iter().all(|r| r.pass) && prop.proportional && resultant_identity.unwrap_or(true);
    Ok(AJReport {
        params: p,
        regime,
        l_degree: ann.l_degree,
        assembly: ann.factors.clone(),
        annihilator: ann.r.clone(),
        empirical,
        t_minus1,
        a_poly: a.poly.clone(),
        a_factors: a.factors.clone(),
        proportional: prop.proportional,
        witness: prop.witness,
        resultant_identity,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_poly::parse_poly;

    fn ml(s: &str) -> MultiPoly {
        parse_poly(s, Vars::ML).unwrap()
    }

    #[test]
    fn proportionality_examples() {
        let r = proportional_over_m(&ml("2*M*L + 2*M^2"), &ml("L + M")).unwrap();
        assert!(r.proportional);
        assert_eq!(r.witness, Some(RatFun::from_poly(ml("2*M"))));
        assert!(!proportional_over_m(&ml("L + M"), &ml("L + M^2")).unwrap().proportional);
        let p = ml("M*L^2 + L - M^3");
        assert!(proportional_over_m(&p, &(&p * &ml("M^4 - 1"))).unwrap().proportional);
        assert!(!proportional_over_m(&ml("L^2 + 1"), &ml("L + 1")).unwrap().proportional);
    }

    #[test]
    fn commutative_sequence() {
        for s in [2, 3] {
            let seq = CommutativeSeq::new(s).unwrap();
            assert!(seq.value(0).is_one() && seq.value(1).is_one());
            let [p0, p1, p2] = minus1_coeffs(s);
            for n in 0..6 {
                let lhs = &(&seq.value(n + 2).mul_poly(&p2) + &seq.value(n + 1).mul_poly(&p1)) + &seq.value(n).mul_poly(&p0);
                assert_eq!(lhs, RatFun::from_poly(b_minus1(s)));
            }
        }
    }

    #[test]
    fn mu_of_commutative_sequence_differs_from_closed_form() {
        for s in [2i64, 3] {
            let seq = CommutativeSeq::new(s).unwrap();
            assert_eq!(mu_ratfun(&seq.value(2)).unwrap() as i64, 4 * s);
            for n in 3..=8usize {
                assert_eq!(mu_ratfun(&seq.value(n)).unwrap() as i64, 4 * s * (n as i64 - 1));
            }
        }
    }

    #[test]
    fn resultant_kills_commutative_sequence() {
        for s in [2, 3] {
            let rep = commutative_check(s, 5).unwrap();
            assert!(rep.constant && rep.distinct_roots);
        }
        let r = commutative_resultant(3).unwrap();
        let bumped = &r + &ml("L");
        assert!(!commutative_check_with(&bumped, 3, 5).unwrap().constant);
    }

    #[test]
    fn aj_report_9_2() {
        let rep = aj_verify(CableParams::new(9, 2).unwrap(), 6).unwrap();
        assert!(rep.empirical_pass() && rep.proportional && rep.verdict);
        assert_eq!(rep.regime, Regime::Proven);
        assert_eq!(rep.resultant_identity, None);
        let back: AJReport = crate::serialize::from_json(&crate::serialize::to_json(&rep)).unwrap();
        assert_eq!(back, rep);
    }

    #[test]
    fn mu_anchors() {
        for s in [2i64, 3, 5] {
            let [p0, p1, p2] = minus1_coeffs(s);
            assert_eq!((p0.mu().unwrap(), p1.mu().unwrap(), p2.mu().unwrap()), (8 * s as i32, 12 * s as i32, 8 * s as i32));
            assert_eq!(b_minus1(s).mu().unwrap(), 11 * s as i32);
        }
    }
}
