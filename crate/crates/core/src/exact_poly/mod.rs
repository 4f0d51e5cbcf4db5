//! Exact arithmetic: rationals, sparse bivariate Laurent polynomials, rational
//! functions, gcd, squarefree parts, resultants and degree functions.

mod algebra;
mod kernel;
mod modgcd;
mod poly;
mod ratfun;
mod text;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use algebra::{
    gcd, is_square_in_cm, mu_ratfun, resultant, squarefree_decomposition, squarefree_part,
};
pub use poly::{MultiPoly, Substitution};
pub use ratfun::RatFun;

/// Exponent pair `(e1, e2)`.
pub type Exp = (i32, i32);

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type BigRat = num_rational::BigRational;

/// Variable symbols used across the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    #[serde(rename = "t")]
    T,
    M,
    L,
    #[serde(rename = "lambda")]
    Lambda,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::M => "M",
            Var::L => "L",
            Var::Lambda => "lambda",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        match s {
            "t" => Some(Var::T),
            "M" => Some(Var::M),
            "L" => Some(Var::L),
            "lambda" | "λ" => Some(Var::Lambda),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Ordered pair of variable symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Vars(pub Var, pub Var);

impl Vars {
    pub const TM: Vars = Vars(Var::T, Var::M);
    pub const ML: Vars = Vars(Var::M, Var::L);
    pub const M_LAMBDA: Vars = Vars(Var::M, Var::Lambda);
    pub const LAMBDA_L: Vars = Vars(Var::Lambda, Var::L);

    pub fn other(self, v: Var) -> Var {
        if self.0 == v {
            self.1
        } else {
            self.0
        }
    }

    pub fn contains(self, v: Var) -> bool {
        self.0 == v || self.1 == v
    }
}

pub use text::parse_poly;

#[cfg(test)]
mod tests;
