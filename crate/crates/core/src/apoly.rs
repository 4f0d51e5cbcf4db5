//! A-polynomials of the figure eight knot and its cables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_poly::{is_square_in_cm, parse_poly, resultant, squarefree_part, MultiPoly, Substitution, Var, Vars};
use crate::jones::CableParams;

/// An A-polynomial in `(M, L)` together with the factors it was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct APoly {
    pub poly: MultiPoly,
    pub provenance: Provenance,
    /// Named factors whose product is `poly` up to a unit.
    pub factors: Vec<(String, MultiPoly)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Fig8,
    Cable { r: i64, s: i64 },
}

fn ml(s: &str) -> MultiPoly {
    parse_poly(s, Vars::ML).expect("literal polynomial")
}

/// The factor of `A_E` other than `L - 1`.
pub fn fig8_nonabelian() -> MultiPoly {
    ml("-L + M^2*L + M^4 + 2*M^4*L + M^4*L^2 + M^6*L - M^8*L")
}

pub fn a_fig8() -> APoly {
    let l1 = ml("L - 1");
    let na = fig8_nonabelian();
    APoly {
        poly: &l1 * &na,
        provenance: Provenance::Fig8,
        factors: vec![("L - 1".into(), l1), ("nonabelian".into(), na)],
    }
}

/// `F_(r,s)` with negative powers of `M` cleared.
pub fn framing_factor(p: CableParams) -> MultiPoly {
    let (r, s) = (p.r() as i32, p.s() as i32);
    let f = match (s == 2, r > 0) {
        (true, true) => MultiPoly::ints(Vars::ML, &[(2 * r, 1, 1), (0, 0, 1)]),
        (true, false) => MultiPoly::ints(Vars::ML, &[(0, 1, 1), (-2 * r, 0, 1)]),
        (false, true) => MultiPoly::ints(Vars::ML, &[(2 * r * s, 2, 1), (0, 0, -1)]),
        (false, false) => MultiPoly::ints(Vars::ML, &[(0, 2, 1), (-2 * r * s, 0, -1)]),
    };
    f.normalize_unit()
}

/// `Res_lambda(A_E(M^s, lambda) / (lambda - 1), lambda^s - L)`.
pub fn cable_resultant(s: i64) -> Result<MultiPoly> {
    let a = a_fig8().poly;
    let na = a
        .div_exact(&ml("L - 1"))
        .ok_or_else(|| Error::Integrity("A_E is not divisible by L - 1".into()))?;
    let f = na.substitute(Substitution::Monomial { var: Var::M, a: 0, b: s }).relabel(Vars::M_LAMBDA);
    resultant_against_power(&f, s)
}

/// `Res_lambda(f(M, lambda), lambda^s - L)` for `f` over `(M, lambda)`.
pub fn resultant_against_power(f: &MultiPoly, s: i64) -> Result<MultiPoly> {
    let g = MultiPoly::ints(Vars::LAMBDA_L, &[(s as i32, 0, 1), (0, 1, -1)]);
    resultant(f, &g, Var::Lambda)
}

/// `(L - 1) F_(r,s) Red(Res_lambda(...))`.
pub fn a_cable(p: CableParams) -> Result<APoly> {
    let l1 = ml("L - 1");
    let f = framing_factor(p);
    let red = squarefree_part(&cable_resultant(p.s())?)?;
    let poly = (&(&l1 * &f) * &red).normalize_unit();
    Ok(APoly {
        poly,
        provenance: Provenance::Cable { r: p.r(), s: p.s() },
        factors: vec![("L - 1".into(), l1), ("framing".into(), f), ("resultant".into(), red)],
    })
}

/// Whether a polynomial of degree 2 in `v`, with coefficients in `M` only, is
/// irreducible over `C(M)`: its discriminant is not a square there.
pub fn irreducible_quadratic(q: &MultiPoly, v: Var) -> Result<bool> {
    if !q.vars().contains(v) || !q.vars().contains(Var::M) {
        return Err(Error::Usage(format!("expected a polynomial in M and {v}")));
    }
    let coeffs = q.coeffs_in(v);
    let deg = coeffs.last().map(|c| c.0);
    if coeffs.first().map(|c| c.0) < Some(0) || deg != Some(2) {
        return Err(Error::Usage(format!("expected {v}-degree 2, got {deg:?}")));
    }
    let zero = MultiPoly::zero(q.vars());
    let c = |i: i32| coeffs.iter().find(|e| e.0 == i).map(|e| e.1.clone()).unwrap_or_else(|| zero.clone());
    let disc = &c(1).pow(2) - &(&c(2) * &c(0)).scale_int(&4.into());
    if disc.is_zero() {
        return Ok(false);
    }
    Ok(!is_square_in_cm(&disc)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The explicit `s = 2` resultant factor.
    fn s2_factor() -> MultiPoly {
        ml("-L + 2*M^4*L + 3*M^8*L - 2*M^12*L + M^16 - 6*M^16*L + M^16*L^2 - 2*M^20*L + 3*M^24*L + 2*M^28*L - M^32*L")
    }

    #[test]
    fn fig8_apoly() {
        let a = a_fig8();
        assert_eq!(a.poly.degree_range(Var::L), Some((0, 3)));
        assert!(a.poly.div_exact(&ml("L - 1")).is_some());
        let at1 = fig8_nonabelian().substitute(Substitution::Collapse { var: Var::M, k: 0 });
        assert_eq!(at1, ml("L^2 + 2*L + 1"));
    }

    #[test]
    fn framing_cases() {
        let p = |r, s| CableParams::new(r, s).unwrap();
        assert_eq!(framing_factor(p(9, 2)), ml("M^18*L + 1"));
        assert_eq!(framing_factor(p(-9, 2)), ml("L + M^18"));
        assert_eq!(framing_factor(p(13, 3)), ml("M^78*L^2 - 1"));
        assert_eq!(framing_factor(p(-13, 3)), -ml("L^2 - M^78"));
    }

    #[test]
    fn cable_apoly_s2() {
        let res = cable_resultant(2).unwrap();
        assert_eq!(res.normalize_unit(), s2_factor().normalize_unit());
        for r in [9, -9] {
            let p = CableParams::new(r, 2).unwrap();
            let a = a_cable(p).unwrap();
            let expect = &(&ml("L - 1") * &framing_factor(p)) * &s2_factor();
            assert_eq!(a.poly, expect.normalize_unit());
        }
    }

    #[test]
    fn cable_apoly_s3_s5() {
        for s in [3, 5] {
            let res = cable_resultant(s).unwrap();
            assert_eq!(squarefree_part(&res).unwrap(), res.normalize_unit());
            assert!(irreducible_quadratic(&res, Var::L).unwrap());
            let a = a_cable(CableParams::new(7, s).unwrap()).unwrap();
            assert_eq!(a.poly.degree_range(Var::L), Some((0, 5)));
        }
    }

    #[test]
    fn quadratic_irreducibility() {
        assert!(irreducible_quadratic(&ml("L^2 - M"), Var::L).unwrap());
        assert!(!irreducible_quadratic(&ml("L^2 - M^2"), Var::L).unwrap());
        assert!(irreducible_quadratic(&s2_factor(), Var::L).unwrap());
        assert!(irreducible_quadratic(&ml("L - M"), Var::L).is_err());
    }
}
