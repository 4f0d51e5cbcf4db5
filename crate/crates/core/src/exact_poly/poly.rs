use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::kernel::{self, Exp, Term};
use super::{BigRat, Var, Vars};
use crate::error::{Error, Result};

/// Sparse Laurent polynomial in two named variables with rational coefficients.
///
/// Stored as `(1/den) * sum(c * x^e1 * y^e2)` with integer `c`, a positive
/// `den`, and `gcd(den, c_1, c_2, ...) = 1`, so that equal values have equal
/// representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    vars: Vars,
    den: BigInt,
    terms: Vec<Term>,
}

/// Substitution rules accepted by [`MultiPoly::substitute`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Substitution {
    /// `var -> other^a * var^b` with `b != 0`.
    Monomial { var: Var, a: i64, b: i64 },
    /// `var -> other^k`; the result no longer involves `var`.
    Collapse { var: Var, k: i64 },
    /// `var -> -1`.
    MinusOne { var: Var },
}

fn exp_i32(v: i64) -> i32 {
    i32::try_from(v).expect("exponent overflow")
}

impl MultiPoly {
    pub(crate) fn from_raw(vars: Vars, den: BigInt, terms: Vec<Term>) -> MultiPoly {
        debug_assert!(kernel::is_sorted_nonzero(&terms));
        let mut p = MultiPoly { vars, den, terms };
        p.reduce();
        p
    }

    pub(crate) fn from_int_terms(vars: Vars, terms: Vec<Term>) -> MultiPoly {
        MultiPoly::from_raw(vars, BigInt::one(), terms)
    }

    fn reduce(&mut self) {
        if self.terms.is_empty() {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_negative() {
            self.den = -&self.den;
            self.terms = kernel::negate(&self.terms);
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                return;
            }
        }
        self.den = &self.den / &g;
        self.terms = kernel::div_scalar(&self.terms, &g);
    }

    pub fn zero(vars: Vars) -> MultiPoly {
        MultiPoly { vars, den: BigInt::one(), terms: Vec::new() }
    }

    pub fn one(vars: Vars) -> MultiPoly {
        MultiPoly::constant(vars, BigRat::one())
    }

    pub fn constant(vars: Vars, c: BigRat) -> MultiPoly {
        MultiPoly::monomial(vars, 0, 0, c)
    }

    pub fn integer(vars: Vars, c: i64) -> MultiPoly {
        MultiPoly::monomial(vars, 0, 0, BigRat::from_integer(c.into()))
    }

    pub fn monomial(vars: Vars, e1: i32, e2: i32, c: BigRat) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(vars);
        }
        let (n, d) = c.into_raw();
        MultiPoly::from_raw(vars, d, vec![((e1, e2), n)])
    }

    /// The variable itself, as a polynomial over `vars`.
    pub fn var(vars: Vars, v: Var) -> MultiPoly {
        let e = if vars.0 == v {
            (1, 0)
        } else if vars.1 == v {
            (0, 1)
        } else {
            panic!("variable {v} not in {vars:?}");
        };
        MultiPoly::from_int_terms(vars, vec![(e, BigInt::one())])
    }

    /// Builds a polynomial from arbitrary terms; repeated exponents are summed.
    pub fn from_terms<I>(vars: Vars, terms: I) -> MultiPoly
    where
        I: IntoIterator<Item = (Exp, BigRat)>,
    {
        let mut items: Vec<(Exp, BigRat)> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        items.sort_by_key(|t| t.0);
        let mut den = BigInt::one();
        for (_, c) in &items {
            den = den.lcm(c.denom());
        }
        let mut out: Vec<Term> = Vec::with_capacity(items.len());
        for (e, c) in items {
            let n = c.numer() * (&den / c.denom());
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += n,
                _ => out.push((e, n)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        MultiPoly::from_raw(vars, den, out)
    }

    /// Shorthand for integer terms, e.g. `MultiPoly::ints(vars, &[(1, 0, 2), (0, 0, -1)])`.
    pub fn ints(vars: Vars, terms: &[(i32, i32, i64)]) -> MultiPoly {
        MultiPoly::from_terms(
            vars,
            terms.iter().map(|&(a, b, c)| ((a, b), BigRat::from_integer(c.into()))),
        )
    }

    pub fn vars(&self) -> Vars {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.terms.len() == 1 && self.terms[0].0 == (0, 0) && self.terms[0].1.is_one()
    }

    /// True when the polynomial is a rational constant (possibly zero).
    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0 == (0, 0))
    }

    /// True for a single nonzero term.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common denominator of the coefficients.
    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.den.is_one()
    }

    /// Numerator terms; the actual coefficients are these divided by [`Self::denominator`].
    pub(crate) fn int_terms(&self) -> &[Term] {
        &self.terms
    }

    /// Terms with reduced rational coefficients in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Exp, BigRat)> + '_ {
        self.terms.iter().map(move |(e, c)| (*e, BigRat::new(c.clone(), self.den.clone())))
    }

    pub fn coeff(&self, e: Exp) -> BigRat {
        match self.terms.binary_search_by_key(&e, |t| t.0) {
            Ok(i) => BigRat::new(self.terms[i].1.clone(), self.den.clone()),
            Err(_) => BigRat::zero(),
        }
    }

    /// Coefficient of the last term in ascending order.
    pub fn last_coeff(&self) -> Option<BigRat> {
        self.terms.last().map(|(_, c)| BigRat::new(c.clone(), self.den.clone()))
    }

    pub fn check_vars(&self, other: &MultiPoly) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::Usage(format!(
                "mismatched variables {:?} and {:?}",
                self.vars, other.vars
            )));
        }
        Ok(())
    }

    fn assert_vars(&self, other: &MultiPoly) {
        if let Err(e) = self.check_vars(other) {
            panic!("{e}");
        }
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_vars(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_vars(other)?;
        Ok(self.add_unchecked(other, true))
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_vars(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &MultiPoly, negate_other: bool) -> MultiPoly {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate_other { -other } else { other.clone() };
        }
        let l = self.den.lcm(&other.den);
        let fa = &l / &self.den;
        let mut fb = &l / &other.den;
        if negate_other {
            fb = -fb;
        }
        let terms = kernel::add_scaled(&self.terms, &fa, &other.terms, &fb);
        MultiPoly::from_raw(self.vars, l, terms)
    }

    fn mul_unchecked(&self, other: &MultiPoly) -> MultiPoly {
        let terms = kernel::mul(&self.terms, &other.terms);
        MultiPoly::from_raw(self.vars, &self.den * &other.den, terms)
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut result = MultiPoly::one(self.vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn scale(&self, c: &BigRat) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.vars);
        }
        let terms = kernel::scale(&self.terms, c.numer());
        MultiPoly::from_raw(self.vars, &self.den * c.denom(), terms)
    }

    pub fn scale_int(&self, c: &BigInt) -> MultiPoly {
        self.scale(&BigRat::from_integer(c.clone()))
    }

    /// Multiplies by the monomial `x^e1 y^e2`.
    pub fn shift(&self, e1: i32, e2: i32) -> MultiPoly {
        MultiPoly { vars: self.vars, den: self.den.clone(), terms: kernel::shift(&self.terms, (e1, e2)) }
    }

    /// Exact quotient, or `None` if `d` does not divide `self` in the Laurent ring.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        self.assert_vars(d);
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(self.clone());
        }
        let cd = kernel::content(&d.terms);
        let dp = kernel::div_scalar(&d.terms, &cd);
        let q = kernel::div_exact(&self.terms, &dp)?;
        // self = (a/da), d = (cd/dd) * dp, so self/d = (a/dp) * dd / (da * cd).
        let q = kernel::scale(&q, &d.den);
        let den = &self.den * &cd;
        Some(MultiPoly::from_raw(self.vars, den, q))
    }

    /// Minimum and maximum exponent of `v`, or `None` for the zero polynomial.
    pub fn degree_range(&self, v: Var) -> Option<(i32, i32)> {
        let idx = self.var_index(v)?;
        let mut it = self.terms.iter().map(|((a, b), _)| if idx == 0 { *a } else { *b });
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    pub fn var_index(&self, v: Var) -> Option<usize> {
        if self.vars.0 == v {
            Some(0)
        } else if self.vars.1 == v {
            Some(1)
        } else {
            None
        }
    }

    fn index_of(&self, v: Var) -> usize {
        self.var_index(v).unwrap_or_else(|| panic!("variable {v} not in {:?}", self.vars))
    }

    /// `(lowest, highest)` exponent of `t`; undefined for zero.
    pub fn degree_t(&self) -> Result<(i32, i32)> {
        if self.is_zero() {
            return Err(Error::ZeroDegree);
        }
        if self.var_index(Var::T).is_none() {
            return Err(Error::Usage(format!("no variable t in {:?}", self.vars)));
        }
        Ok(self.degree_range(Var::T).unwrap())
    }

    /// Maximum exponent of `M`.
    pub fn mu(&self) -> Result<i32> {
        if self.is_zero() {
            return Err(Error::ZeroDegree);
        }
        if self.var_index(Var::M).is_none() {
            return Err(Error::Usage(format!("no variable M in {:?}", self.vars)));
        }
        Ok(self.degree_range(Var::M).unwrap().1)
    }

    /// True when `v` occurs with a nonzero exponent.
    pub fn involves(&self, v: Var) -> bool {
        match self.degree_range(v) {
            Some((lo, hi)) => lo != 0 || hi != 0,
            None => false,
        }
    }

    pub fn substitute(&self, rule: Substitution) -> MultiPoly {
        let out: Vec<(Exp, BigInt)> = match rule {
            Substitution::Monomial { var, a, b } => {
                assert!(b != 0, "monomial substitution needs a nonzero power");
                let idx = self.index_of(var);
                self.terms
                    .iter()
                    .map(|((e1, e2), c)| {
                        let e = if idx == 1 {
                            (exp_i32(*e1 as i64 + a * *e2 as i64), exp_i32(b * *e2 as i64))
                        } else {
                            (exp_i32(b * *e1 as i64), exp_i32(*e2 as i64 + a * *e1 as i64))
                        };
                        (e, c.clone())
                    })
                    .collect()
            }
            Substitution::Collapse { var, k } => {
                let idx = self.index_of(var);
                self.terms
                    .iter()
                    .map(|((e1, e2), c)| {
                        let e = if idx == 1 {
                            (exp_i32(*e1 as i64 + k * *e2 as i64), 0)
                        } else {
                            (0, exp_i32(*e2 as i64 + k * *e1 as i64))
                        };
                        (e, c.clone())
                    })
                    .collect()
            }
            Substitution::MinusOne { var } => {
                let idx = self.index_of(var);
                self.terms
                    .iter()
                    .map(|((e1, e2), c)| {
                        let (odd, e) = if idx == 0 { (e1 & 1 == 1, (0, *e2)) } else { (e2 & 1 == 1, (*e1, 0)) };
                        (e, if odd { -c } else { c.clone() })
                    })
                    .collect()
            }
        };
        MultiPoly::from_raw(self.vars, self.den.clone(), kernel::collect_sorted(out))
    }

    /// Same terms under a different variable pair.
    pub fn relabel(&self, vars: Vars) -> MultiPoly {
        MultiPoly { vars, den: self.den.clone(), terms: self.terms.clone() }
    }

    /// Exchanges the roles of the two exponents, keeping the variable identities.
    pub fn swap_vars(&self) -> MultiPoly {
        let terms = self.terms.iter().map(|((a, b), c)| ((*b, *a), c.clone())).collect();
        MultiPoly {
            vars: Vars(self.vars.1, self.vars.0),
            den: self.den.clone(),
            terms: kernel::collect_sorted(terms),
        }
    }

    /// Partial derivative (Laurent exponents allowed).
    pub fn derivative(&self, v: Var) -> MultiPoly {
        let idx = self.index_of(v);
        let terms = self
            .terms
            .iter()
            .filter_map(|((e1, e2), c)| {
                let (k, e) = if idx == 0 { (*e1, (e1 - 1, *e2)) } else { (*e2, (*e1, e2 - 1)) };
                (k != 0).then(|| (e, c * k))
            })
            .collect();
        MultiPoly::from_raw(self.vars, self.den.clone(), terms)
    }

    /// Coefficients with respect to `v`: pairs `(k, c_k)` with `self = sum c_k v^k`.
    pub fn coeffs_in(&self, v: Var) -> Vec<(i32, MultiPoly)> {
        let idx = self.index_of(v);
        let mut buckets: std::collections::BTreeMap<i32, Vec<Term>> = Default::default();
        for ((e1, e2), c) in &self.terms {
            let (k, e) = if idx == 0 { (*e1, (0, *e2)) } else { (*e2, (*e1, 0)) };
            buckets.entry(k).or_default().push((e, c.clone()));
        }
        buckets
            .into_iter()
            .map(|(k, ts)| (k, MultiPoly::from_raw(self.vars, self.den.clone(), kernel::collect_sorted(ts))))
            .collect()
    }

    /// Rebuilds `sum c_k v^k` from coefficients free of `v`.
    pub fn from_coeffs_in(vars: Vars, v: Var, coeffs: &[(i32, MultiPoly)]) -> MultiPoly {
        let mut acc = MultiPoly::zero(vars);
        let idx = if vars.0 == v { 0 } else { 1 };
        for (k, c) in coeffs {
            let shifted = if idx == 0 { c.shift(*k, 0) } else { c.shift(0, *k) };
            acc = &acc + &shifted;
        }
        acc
    }

    /// Minimal exponents `(m1, m2)` over all terms.
    pub fn min_exps(&self) -> Option<Exp> {
        let b = kernel::Bounds::of(&self.terms);
        (!self.terms.is_empty()).then_some((b.min1, b.min2))
    }

    /// The monomial shifted copy with minimal exponents zero.
    pub fn strip_monomial(&self) -> MultiPoly {
        match self.min_exps() {
            Some((a, b)) if a != 0 || b != 0 => self.shift(-a, -b),
            _ => self.clone(),
        }
    }

    /// Integer content times sign, as a rational: `self = content * primitive`.
    pub fn rational_content(&self) -> BigRat {
        if self.is_zero() {
            return BigRat::zero();
        }
        BigRat::new(kernel::content(&self.terms), self.den.clone())
    }

    /// Canonical associate under the unit group `Q^* x monomials`: integer
    /// coefficients with gcd one, minimal exponents zero, last term positive.
    pub fn normalize_unit(&self) -> MultiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let (m1, m2) = self.min_exps().unwrap();
        let mut g = kernel::content(&self.terms);
        if self.terms.last().unwrap().1.is_negative() {
            g = -g;
        }
        let terms = kernel::div_scalar(&kernel::shift(&self.terms, (-m1, -m2)), &g);
        MultiPoly { vars: self.vars, den: BigInt::one(), terms }
    }

    /// Rational constant `u` and monomial `(a, b)` with `self = u * x^a y^b * normalize_unit(self)`.
    pub fn unit_part(&self) -> (BigRat, Exp) {
        let (m1, m2) = self.min_exps().expect("unit part of zero");
        let mut g = kernel::content(&self.terms);
        if self.terms.last().unwrap().1.is_negative() {
            g = -g;
        }
        (BigRat::new(g, self.den.clone()), (m1, m2))
    }

    /// Evaluates the integer-valued map on each term and sums; used for specializations.
    pub fn map_terms<F>(&self, vars: Vars, f: F) -> MultiPoly
    where
        F: Fn(Exp) -> Exp,
    {
        let terms = self.terms.iter().map(|(e, c)| (f(*e), c.clone())).collect();
        MultiPoly::from_raw(vars, self.den.clone(), kernel::collect_sorted(terms))
    }

    pub fn max_coeff_bits(&self) -> u64 {
        kernel::abs_max(&self.terms).bits()
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { vars: self.vars, den: self.den.clone(), terms: kernel::negate(&self.terms) }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                self.assert_vars(rhs);
                $body(self, rhs)
            }
        }
        impl $trait<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$method(rhs)
            }
        }
        impl $trait<MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a: &MultiPoly, b: &MultiPoly| a.add_unchecked(b, false));
binop!(Sub, sub, |a: &MultiPoly, b: &MultiPoly| a.add_unchecked(b, true));
binop!(Mul, mul, |a: &MultiPoly, b: &MultiPoly| a.mul_unchecked(b));
