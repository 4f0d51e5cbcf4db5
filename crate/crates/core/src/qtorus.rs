//! Skew Laurent operators `sum f_i(t, M) L^i` with the twisted product
//! `L M = t^2 M L`, acting on sequences by `(M f)(n) = t^(2n) f(n)` and
//! `(L f)(n) = f(n + 1)`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_poly::{gcd, BigRat, MultiPoly, RatFun, Substitution, Var, Vars};

/// A sequence `n -> value` of rational functions in `t` (over the `(t, M)` variables).
pub trait Sequence: Sync {
    fn value(&self, n: i64) -> Result<RatFun>;
}

impl<F> Sequence for F
where
    F: Fn(i64) -> Result<RatFun> + Sync,
{
    fn value(&self, n: i64) -> Result<RatFun> {
        self(n)
    }
}

/// `M -> t^(2k) M`, the twist picked up when a coefficient moves past `L^k`.
pub fn twist(k: i64) -> Substitution {
    Substitution::Monomial { var: Var::M, a: 2 * k, b: 1 }
}

/// `M -> t^(2n)`, used when an operator acts at index `n`.
pub fn at_index(n: i64) -> Substitution {
    Substitution::Collapse { var: Var::M, k: 2 * n }
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct SkewOperator {
    coeffs: BTreeMap<u32, RatFun>,
}

impl SkewOperator {
    pub fn zero() -> SkewOperator {
        SkewOperator::default()
    }

    pub fn from_coeffs<I: IntoIterator<Item = (u32, RatFun)>>(items: I) -> SkewOperator {
        let mut op = SkewOperator::zero();
        for (i, c) in items {
            op.add_term(i, c);
        }
        op
    }

    pub fn from_polys<I: IntoIterator<Item = (u32, MultiPoly)>>(items: I) -> SkewOperator {
        SkewOperator::from_coeffs(items.into_iter().map(|(i, p)| (i, RatFun::from_poly(p))))
    }

    /// `f * L^0`.
    pub fn scalar(f: RatFun) -> SkewOperator {
        SkewOperator::from_coeffs([(0, f)])
    }

    /// `L^k`.
    pub fn shift_op(k: u32) -> SkewOperator {
        SkewOperator::from_polys([(k, MultiPoly::one(Vars::TM))])
    }

    fn add_term(&mut self, i: u32, c: RatFun) {
        if c.is_zero() {
            return;
        }
        let sum = match self.coeffs.remove(&i) {
            Some(prev) => &prev + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(i, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn l_degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, i: u32) -> Option<&RatFun> {
        self.coeffs.get(&i)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (u32, &RatFun)> {
        self.coeffs.iter().map(|(i, c)| (*i, c))
    }

    pub fn add(&self, other: &SkewOperator) -> SkewOperator {
        let mut out = self.clone();
        for (i, c) in &other.coeffs {
            out.add_term(*i, c.clone());
        }
        out
    }

    pub fn neg(&self) -> SkewOperator {
        SkewOperator { coeffs: self.coeffs.iter().map(|(i, c)| (*i, -c)).collect() }
    }

    pub fn sub(&self, other: &SkewOperator) -> SkewOperator {
        self.add(&other.neg())
    }
}

/// `(f L^a)(g L^b) = f(t, M) g(t, t^(2a) M) L^(a+b)`, extended bilinearly.
pub fn skew_mul(a: &SkewOperator, b: &SkewOperator) -> SkewOperator {
    let mut out = SkewOperator::zero();
    for (i, f) in &a.coeffs {
        for (j, g) in &b.coeffs {
            let g_shifted = if *i == 0 { g.clone() } else { g.substitute(twist(*i as i64)).expect("twist is invertible") };
            out.add_term(i + j, f * &g_shifted);
        }
    }
    out
}

/// `sum_i c_i(t, t^(2n)) * seq(n + i)`.
pub fn act<S: Sequence + ?Sized>(op: &SkewOperator, seq: &S, n: i64) -> Result<RatFun> {
    let mut acc = RatFun::zero(Vars::TM);
    for (i, c) in &op.coeffs {
        let ci = c.substitute(at_index(n))?;
        let v = seq.value(n + *i as i64)?;
        acc = &acc + &(&ci * &v);
    }
    Ok(acc)
}

/// Evaluates a rational function of `(t, M)` at `M = t^(2n)`.
pub fn eval_at_index(f: &RatFun, n: i64) -> Result<RatFun> {
    f.substitute(at_index(n))
}

/// Operator with polynomial, jointly content-free integer coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct NormalizedOperator {
    coeffs: BTreeMap<u32, MultiPoly>,
}

impl NormalizedOperator {
    /// Wraps coefficients that are already normalized; used by deserialization.
    pub fn from_normalized_parts(coeffs: BTreeMap<u32, MultiPoly>) -> Result<NormalizedOperator> {
        let op = SkewOperator::from_polys(coeffs.clone());
        let n = normalize(&op)?;
        if n.coeffs != coeffs {
            return Err(Error::Usage("operator coefficients are not in normal form".into()));
        }
        Ok(n)
    }

    pub fn l_degree(&self) -> u32 {
        *self.coeffs.keys().next_back().unwrap()
    }

    pub fn coeff(&self, i: u32) -> Option<&MultiPoly> {
        self.coeffs.get(&i)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (u32, &MultiPoly)> {
        self.coeffs.iter().map(|(i, c)| (*i, c))
    }

    pub fn to_skew(&self) -> SkewOperator {
        SkewOperator::from_polys(self.coeffs.iter().map(|(i, c)| (*i, c.clone())))
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.values().map(|c| c.len()).sum()
    }
}

fn rat_gcd(a: &BigRat, b: &BigRat) -> BigRat {
    if a.is_zero() {
        return b.abs();
    }
    BigRat::new(a.numer().gcd(b.numer()), a.denom().lcm(b.denom()))
}

/// Clears denominators, removes the common polynomial and monomial content,
/// and fixes the sign so the leading `L` coefficient ends with a positive term.
pub fn normalize(op: &SkewOperator) -> Result<NormalizedOperator> {
    if op.is_zero() {
        return Err(Error::Usage("cannot normalize the zero operator".into()));
    }
    let mut l = MultiPoly::one(Vars::TM);
    for c in op.coeffs.values() {
        if !c.den().is_one() {
            let g = gcd(&l, c.den());
            l = &l * &c.den().div_exact(&g).expect("gcd divides");
        }
    }
    let mut polys: BTreeMap<u32, MultiPoly> = op
        .coeffs
        .iter()
        .map(|(i, c)| {
            let f = l.div_exact(c.den()).expect("lcm is a multiple");
            (*i, &f * c.num())
        })
        .collect();
    let mut order: Vec<u32> = polys.keys().copied().collect();
    order.sort_by_key(|i| polys[i].len());
    let mut g = MultiPoly::zero(Vars::TM);
    for i in order {
        g = gcd(&g, &polys[&i]);
        if g.is_one() {
            break;
        }
    }
    if !g.is_one() {
        for p in polys.values_mut() {
            *p = p.div_exact(&g).expect("content divides");
        }
    }
    let mut content = BigRat::zero();
    let (mut m1, mut m2) = (i32::MAX, i32::MAX);
    for p in polys.values() {
        content = rat_gcd(&content, &p.rational_content());
        let (a, b) = p.min_exps().unwrap();
        m1 = m1.min(a);
        m2 = m2.min(b);
    }
    let lead = polys.values().next_back().unwrap();
    if lead.last_coeff().unwrap().is_negative() {
        content = -content;
    }
    let inv = content.recip();
    for p in polys.values_mut() {
        *p = p.scale(&inv).shift(-m1, -m2);
    }
    Ok(NormalizedOperator { coeffs: polys })
}

/// `(L - 1) * rhs^(-1) * op`, normalized.
pub fn homogenize(rel: &InhomogRelation) -> Result<NormalizedOperator> {
    if rel.rhs.is_zero() {
        return Err(Error::Usage("homogenize needs a nonzero right-hand side".into()));
    }
    if rel.op.coeffs.values().all(|c| c.is_polynomial()) {
        return homogenize_poly(rel);
    }
    let inv = rel.rhs.inv()?;
    let inv_twisted = inv.substitute(twist(1))?;
    let left = SkewOperator::from_coeffs([(1, inv_twisted), (0, -&inv)]);
    normalize(&skew_mul(&left, &rel.op))
}

/// With `rhs = N / D` and polynomial coefficients `X_k`, the coefficient of
/// `L^k` times `lcm(N, sigma N)` is
/// `sigma(D) sigma(X_(k-1)) N / g - D X_k sigma(N) / g`, `g = gcd(N, sigma N)`.
fn homogenize_poly(rel: &InhomogRelation) -> Result<NormalizedOperator> {
    let (n, d) = (rel.rhs.num(), rel.rhs.den());
    let sn = n.substitute(twist(1));
    let sd = d.substitute(twist(1));
    let g = gcd(n, &sn);
    let n_g = n.div_exact(&g).expect("gcd divides");
    let sn_g = sn.div_exact(&g).expect("gcd divides");
    let left = &sd * &n_g;
    let right = d * &sn_g;
    let mut out = SkewOperator::zero();
    for (k, c) in &rel.op.coeffs {
        let x = c.num();
        out.add_term(k + 1, RatFun::from_poly(&left * &x.substitute(twist(1))));
        out.add_term(*k, RatFun::from_poly(-&(&right * x)));
    }
    normalize(&out)
}

/// `op(t = -1)` as a commutative polynomial in `(M, L)`.
pub fn eval_minus1_op(op: &NormalizedOperator) -> MultiPoly {
    let mut acc = MultiPoly::zero(Vars::ML);
    for (i, c) in &op.coeffs {
        let at = c.substitute(Substitution::MinusOne { var: Var::T });
        let i = *i as i32;
        acc = &acc + &at.map_terms(Vars::ML, |(_, m)| (m, i));
    }
    acc
}

/// Same specialization for an operator with rational coefficients, returning
/// the coefficient list `c_i(M)` as rational functions over `(M, L)`.
pub fn eval_minus1_skew(op: &SkewOperator) -> Result<BTreeMap<u32, RatFun>> {
    let mut out = BTreeMap::new();
    for (i, c) in &op.coeffs {
        let s = c.substitute(Substitution::MinusOne { var: Var::T })?;
        let (n, d) = s.into_parts();
        let f = |p: &MultiPoly| p.map_terms(Vars::ML, |(_, m)| (m, 0));
        out.insert(*i, RatFun::new(f(&n), f(&d))?);
    }
    Ok(out)
}

/// `op * seq = rhs`, with `rhs` a nonzero rational function of `(t, M)`.
#[derive(Clone, Debug)]
pub struct InhomogRelation {
    pub op: SkewOperator,
    pub rhs: RatFun,
}

impl InhomogRelation {
    pub fn new(op: SkewOperator, rhs: RatFun) -> Result<InhomogRelation> {
        if rhs.is_zero() {
            return Err(Error::Usage("inhomogeneous relation with zero right-hand side".into()));
        }
        Ok(InhomogRelation { op, rhs })
    }
}

impl fmt::Display for SkewOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|(i, c)| format!("({c})*L^{i}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for SkewOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for NormalizedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_skew(), f)
    }
}

impl fmt::Debug for NormalizedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
