use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Zero;

use super::{gcd, BigRat, MultiPoly, Substitution, Vars};
use crate::error::{Error, Result};

/// Reduced quotient of two polynomials.
///
/// The denominator is the canonical associate of its class (integer
/// coefficients with gcd one, minimal exponents zero, last term positive), so
/// every rational function has exactly one representation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFun {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<RatFun> {
        num.check_vars(&den)?;
        if den.is_zero() {
            return Err(Error::Usage("rational function with zero denominator".into()));
        }
        Ok(RatFun::reduced(num, den))
    }

    fn reduced(num: MultiPoly, den: MultiPoly) -> RatFun {
        if num.is_zero() {
            return RatFun::zero(num.vars());
        }
        if den.is_monomial() {
            return RatFun::normalized_den(num, den);
        }
        let g = gcd(&num, &den);
        if g.is_one() {
            return RatFun::normalized_den(num, den);
        }
        let n = num.div_exact(&g).expect("gcd divides numerator");
        let d = den.div_exact(&g).expect("gcd divides denominator");
        RatFun::normalized_den(n, d)
    }

    /// Moves the unit part of `den` into `num`; assumes the pair is coprime.
    fn normalized_den(num: MultiPoly, den: MultiPoly) -> RatFun {
        let (u, (a, b)) = den.unit_part();
        let den = den.normalize_unit();
        let num = num.scale(&u.recip()).shift(-a, -b);
        RatFun { num, den }
    }

    pub fn zero(vars: Vars) -> RatFun {
        RatFun { num: MultiPoly::zero(vars), den: MultiPoly::one(vars) }
    }

    pub fn one(vars: Vars) -> RatFun {
        RatFun::from_poly(MultiPoly::one(vars))
    }

    pub fn from_poly(p: MultiPoly) -> RatFun {
        let vars = p.vars();
        RatFun { num: p, den: MultiPoly::one(vars) }
    }

    pub fn constant(vars: Vars, c: BigRat) -> RatFun {
        RatFun::from_poly(MultiPoly::constant(vars, c))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn into_parts(self) -> (MultiPoly, MultiPoly) {
        (self.num, self.den)
    }

    pub fn vars(&self) -> Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The numerator when the denominator is one.
    pub fn as_poly(&self) -> Option<&MultiPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn inv(&self) -> Result<RatFun> {
        if self.is_zero() {
            return Err(Error::Usage("inverse of zero".into()));
        }
        Ok(RatFun::normalized_den(self.den.clone(), self.num.clone()))
    }

    pub fn scale(&self, c: &BigRat) -> RatFun {
        if c.is_zero() {
            return RatFun::zero(self.vars());
        }
        RatFun { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn substitute(&self, rule: Substitution) -> Result<RatFun> {
        let den = self.den.substitute(rule);
        if den.is_zero() {
            return Err(Error::Evaluation("denominator vanishes under substitution".into()));
        }
        Ok(RatFun::reduced(self.num.substitute(rule), den))
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> RatFun {
        if self.den.is_one() {
            return RatFun::from_poly(&self.num * p);
        }
        RatFun::reduced(&self.num * p, self.den.clone())
    }

    fn add_impl(&self, other: &RatFun, negate: bool) -> RatFun {
        let o_num = if negate { -&other.num } else { other.num.clone() };
        if self.den == other.den {
            let n = &self.num + &o_num;
            if self.den.is_one() {
                return RatFun::from_poly(n);
            }
            return RatFun::reduced(n, self.den.clone());
        }
        let g = gcd(&self.den, &other.den);
        let da = self.den.div_exact(&g).unwrap();
        let db = other.den.div_exact(&g).unwrap();
        let n = &(&self.num * &db) + &(&o_num * &da);
        RatFun::reduced(n, &da * &other.den)
    }

    fn mul_impl(&self, other: &RatFun) -> RatFun {
        if self.is_zero() || other.is_zero() {
            return RatFun::zero(self.vars());
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFun::from_poly(&self.num * &other.num);
        }
        // Cross-cancel before multiplying to keep the operands small.
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = other.den.div_exact(&g1).unwrap();
        let n2 = other.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        RatFun::normalized_den(&n1 * &n2, &d1 * &d2)
    }

    pub fn try_div(&self, other: &RatFun) -> Result<RatFun> {
        Ok(self * &other.inv()?)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<MultiPoly> for RatFun {
    fn from(p: MultiPoly) -> RatFun {
        RatFun::from_poly(p)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

impl Add<&RatFun> for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        self.add_impl(rhs, false)
    }
}

impl Sub<&RatFun> for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self.add_impl(rhs, true)
    }
}

impl Mul<&RatFun> for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        self.mul_impl(rhs)
    }
}

impl Div<&RatFun> for &RatFun {
    type Output = RatFun;
    fn div(self, rhs: &RatFun) -> RatFun {
        self.try_div(rhs).expect("division by zero rational function")
    }
}
