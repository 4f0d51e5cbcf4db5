//! Colored Jones sequences of the unknot, the figure eight knot and its
//! `(r, s)`-cables, the auxiliary sequence `T_n`, and degree predictors.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_poly::{MultiPoly, RatFun, Vars};
use crate::qtorus::Sequence;

/// Cabling parameters with `gcd(|r|, s) = 1`, `s >= 2`, `r != 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct CableParams {
    r: i64,
    s: i64,
}

#[derive(Deserialize)]
struct RawParams {
    r: i64,
    s: i64,
}

impl TryFrom<RawParams> for CableParams {
    type Error = Error;

    fn try_from(p: RawParams) -> Result<CableParams> {
        CableParams::new(p.r, p.s)
    }
}

impl CableParams {
    pub fn new(r: i64, s: i64) -> Result<CableParams> {
        if s < 2 {
            return Err(Error::Usage(format!("cable needs s >= 2, got s = {s}")));
        }
        if r == 0 {
            return Err(Error::Usage("cable needs r != 0".into()));
        }
        if r.abs().gcd(&s) != 1 {
            return Err(Error::Usage(format!("cable needs gcd(|r|, s) = 1, got ({r}, {s})")));
        }
        Ok(CableParams { r, s })
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    /// `r > 4s`.
    pub fn above_band(&self) -> bool {
        self.r > 4 * self.s
    }

    /// `r < -4s`.
    pub fn below_band(&self) -> bool {
        self.r < -4 * self.s
    }

    /// `|r| < 4s`.
    pub fn inside_band(&self) -> bool {
        self.r.abs() < 4 * self.s
    }
}

impl fmt::Display for CableParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.r, self.s)
    }
}

/// `t^a + t^-a`.
fn t_sym(a: i64) -> MultiPoly {
    MultiPoly::ints(Vars::TM, &[(a as i32, 0, 1), (-a as i32, 0, 1)])
}

/// `J_{U,n} = (t^(2n) - t^(-2n)) / (t^2 - t^(-2))`.
pub fn jones_unknot(n: i64) -> MultiPoly {
    if n == 0 {
        return MultiPoly::zero(Vars::TM);
    }
    let k = n.abs();
    let terms: Vec<(i32, i32, i64)> = (0..k).map(|i| ((2 * k - 2 - 4 * i) as i32, 0, 1)).collect();
    let p = MultiPoly::ints(Vars::TM, &terms);
    if n < 0 {
        -p
    } else {
        p
    }
}

fn fig8_positive(n: i64) -> MultiPoly {
    let x = t_sym(4 * n);
    let one = MultiPoly::one(Vars::TM);
    let mut acc = one.clone();
    for k in (1..n).rev() {
        acc = &one + &(&(&x - &t_sym(4 * k)) * &acc);
    }
    &jones_unknot(n) * &acc
}

/// `J_{E,n}` computed directly, without memoization.
pub fn jones_fig8(n: i64) -> MultiPoly {
    match n {
        0 => MultiPoly::zero(Vars::TM),
        n if n < 0 => -fig8_positive(-n),
        n => fig8_positive(n),
    }
}

/// Which sequence a [`KnotSequence`] produces.
#[derive(Clone)]
pub enum Generator {
    Unknot,
    Fig8,
    Cable(CableParams),
    T(CableParams),
    Custom(Arc<dyn Fn(i64) -> MultiPoly + Send + Sync>),
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Unknot => f.write_str("unknot"),
            Generator::Fig8 => f.write_str("fig8"),
            Generator::Cable(p) => write!(f, "cable{p}"),
            Generator::T(p) => write!(f, "T{p}"),
            Generator::Custom(_) => f.write_str("custom"),
        }
    }
}

/// Memoized sequence `n -> Laurent polynomial in t`.
///
/// Values are computed outside the lock; concurrent callers may duplicate
/// work but only whole values are ever stored.
pub struct KnotSequence {
    generator: Generator,
    memo: RwLock<HashMap<i64, Arc<MultiPoly>>>,
}

impl fmt::Debug for KnotSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KnotSequence").field("generator", &self.generator).finish()
    }
}

static FIG8: OnceLock<KnotSequence> = OnceLock::new();

/// The process-wide figure eight sequence shared by all cables.
pub fn fig8() -> &'static KnotSequence {
    FIG8.get_or_init(|| KnotSequence::new(Generator::Fig8))
}

impl KnotSequence {
    pub fn new(generator: Generator) -> KnotSequence {
        KnotSequence { generator, memo: RwLock::new(HashMap::new()) }
    }

    pub fn cable(p: CableParams) -> KnotSequence {
        KnotSequence::new(Generator::Cable(p))
    }

    pub fn t_seq(p: CableParams) -> KnotSequence {
        KnotSequence::new(Generator::T(p))
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    fn is_odd(&self) -> bool {
        !matches!(self.generator, Generator::T(_) | Generator::Custom(_))
    }

    pub fn value(&self, n: i64) -> MultiPoly {
        if self.is_odd() {
            if n == 0 {
                return MultiPoly::zero(Vars::TM);
            }
            if n < 0 {
                return -self.value(-n);
            }
        }
        if let Some(v) = self.memo.read().unwrap().get(&n) {
            return (**v).clone();
        }
        let v = self.compute(n);
        self.memo.write().unwrap().entry(n).or_insert_with(|| Arc::new(v.clone()));
        v
    }

    fn compute(&self, n: i64) -> MultiPoly {
        match &self.generator {
            Generator::Unknot => jones_unknot(n),
            Generator::Fig8 => fig8_positive(n),
            Generator::Cable(p) => cable_value(*p, n),
            Generator::T(p) => t_value(*p, n),
            Generator::Custom(f) => f(n),
        }
    }

    /// Stores a precomputed value; used when loading a cache.
    pub fn seed(&self, n: i64, v: MultiPoly) {
        self.memo.write().unwrap().entry(n).or_insert_with(|| Arc::new(v));
    }

    /// All memoized entries, sorted by index.
    pub fn snapshot(&self) -> Vec<(i64, MultiPoly)> {
        let memo = self.memo.read().unwrap();
        let mut out: Vec<(i64, MultiPoly)> = memo.iter().map(|(n, v)| (*n, (**v).clone())).collect();
        out.sort_by_key(|e| e.0);
        out
    }
}

impl Sequence for KnotSequence {
    fn value(&self, n: i64) -> Result<RatFun> {
        Ok(RatFun::from_poly(KnotSequence::value(self, n)))
    }
}

fn cable_value(p: CableParams, n: i64) -> MultiPoly {
    let (r, s) = (p.r, p.s);
    let mut acc = MultiPoly::zero(Vars::TM);
    let mut j = -(n - 1);
    while j < n {
        let e = r * s * j * j + 2 * r * j;
        acc = &acc + &fig8().value(j * s + 1).shift(e as i32, 0);
        j += 2;
    }
    acc.shift((-r * s * (n * n - 1)) as i32, 0)
}

fn t_value(p: CableParams, n: i64) -> MultiPoly {
    let (r, s) = (p.r, p.s);
    let a = fig8().value(s * (n + 1) + 1).shift((2 * r * (n + 1)) as i32, 0);
    let b = fig8().value(s * (n + 1) - 1).shift((-2 * r * (n + 1)) as i32, 0);
    &a - &b
}

/// `J_{C,n}` for the `(r, s)`-cable of the figure eight knot.
pub fn jones_cable(p: CableParams, n: i64) -> MultiPoly {
    match n {
        0 => MultiPoly::zero(Vars::TM),
        n if n < 0 => -cable_value(p, -n),
        n => cable_value(p, n),
    }
}

/// `T_n = t^(2r(n+1)) J_{E,s(n+1)+1} - t^(-2r(n+1)) J_{E,s(n+1)-1}`.
pub fn t_seq(p: CableParams, n: i64) -> MultiPoly {
    t_value(p, n)
}

/// Lowest and highest `t`-degree of a nonzero Laurent polynomial in `t`.
pub fn degrees(p: &MultiPoly) -> Result<(i64, i64)> {
    let (l, h) = p.degree_t()?;
    Ok((l as i64, h as i64))
}

/// Degrees of the colored Jones polynomial of an alternating knot with a
/// reduced diagram of `crossings` crossings and writhe `w`.
pub fn degrees_alternating(crossings: i64, w: i64, s_plus: i64, s_minus: i64, n: i64) -> Result<(i64, i64)> {
    if n <= 0 {
        return Err(Error::Usage(format!("degree formula needs n > 0, got {n}")));
    }
    if s_plus + s_minus != crossings + 2 {
        return Err(Error::Usage(format!(
            "s_plus + s_minus must equal crossings + 2 ({s_plus} + {s_minus} != {})",
            crossings + 2
        )));
    }
    let k = crossings;
    let hbar = k * (n - 1).pow(2) - w * (n * n - 1) + 2 * (n - 1) * s_plus;
    let ell = -k * (n - 1).pow(2) - w * (n * n - 1) - 2 * (n - 1) * s_minus;
    Ok((ell, hbar))
}

/// Predicted degrees of a cable over an alternating knot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CableDegrees {
    pub ell: i64,
    pub hbar: i64,
    /// Set when `n <= crossings`, where the general statement is not claimed.
    pub small_n: bool,
}

/// Degrees of `J_{C,n}` for the `(r, s)`-cable over an alternating knot with
/// `crossings` crossings, `s_-(D) = m` and writhe `w`.
pub fn degrees_cable_general(crossings: i64, m: i64, w: i64, p: CableParams, n: i64) -> Result<CableDegrees> {
    if n <= 0 {
        return Err(Error::Usage(format!("degree formula needs n > 0, got {n}")));
    }
    let (nn, r, s) = (crossings, p.r, p.s);
    let even = if n % 2 == 0 { 1 } else { 0 };
    let hbar = if r > -(nn - w) * s {
        (nn - w) * s * s * n * n + (2 * r - 2 * (-2 + m + r + w - nn) * s - 2 * (nn - w) * s * s) * n
            + (-2 * r + 2 * (-2 + m + r + w - nn) * s + (nn - w) * s * s)
    } else {
        -r * s * (n * n - 1) + even * (s - 2) * (4 + r + (nn - w) * s - 2 * m)
    };
    let ell = if r < (nn + w) * s {
        -(nn + w) * s * s * n * n + (2 * r - 2 * (r + m + w) * s + 2 * (nn + w) * s * s) * n
            + (-2 * r + 2 * (r + m + w) * s - (nn + w) * s * s)
    } else {
        -r * s * (n * n - 1) + even * (s - 2) * (r - (nn + w) * s + 2 * (nn - m))
    };
    Ok(CableDegrees { ell, hbar, small_n: n <= nn })
}

/// Predicted `(ell, hbar)` of `J_{C,n}` for a cable of the figure eight knot.
pub fn degrees_cable(p: CableParams, n: i64) -> Result<(i64, i64)> {
    let d = degrees_cable_general(4, 3, 0, p, n)?;
    Ok((d.ell, d.hbar))
}

/// Predicted `(ell, hbar)` of `J_{E,n}`, `n != 0`.
pub fn degrees_fig8(n: i64) -> Result<(i64, i64)> {
    if n == 0 {
        return Err(Error::Usage("J_{E,0} = 0 has no degrees".into()));
    }
    let a = n.abs();
    Ok((-4 * a * a + 2 * a + 2, 4 * a * a - 2 * a - 2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRow {
    pub n: i64,
    pub predicted: (i64, i64),
    pub computed: (i64, i64),
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeTable {
    pub rows: Vec<DegreeRow>,
}

impl DegreeTable {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(|r| r.matches)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &DegreeRow> {
        self.rows.iter().filter(|r| !r.matches)
    }
}

fn row(n: i64, predicted: (i64, i64), value: &MultiPoly) -> Result<DegreeRow> {
    let computed = degrees(value)?;
    Ok(DegreeRow { n, predicted, computed, matches: predicted == computed })
}

/// Predicted against computed degrees of `J_{C,n}` for `n = 1..=n_max`.
pub fn cable_degree_table(p: CableParams, n_max: i64) -> Result<DegreeTable> {
    let seq = KnotSequence::cable(p);
    let rows = (1..=n_max)
        .map(|n| row(n, degrees_cable(p, n)?, &seq.value(n)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DegreeTable { rows })
}

/// Predicted against computed degrees of `J_{E,n}` for `n = 1..=n_max`.
pub fn fig8_degree_table(n_max: i64) -> Result<DegreeTable> {
    let rows = (1..=n_max)
        .map(|n| row(n, degrees_fig8(n)?, &fig8().value(n)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DegreeTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_poly::parse_poly;

    fn t(s: &str) -> MultiPoly {
        parse_poly(s, Vars::TM).unwrap()
    }

    #[test]
    fn unknot_values() {
        assert_eq!(jones_unknot(1), t("1"));
        assert_eq!(jones_unknot(2), t("t^2 + t^-2"));
        assert!(jones_unknot(0).is_zero());
        assert_eq!(jones_unknot(-3), -jones_unknot(3));
    }

    #[test]
    fn fig8_values() {
        assert_eq!(jones_fig8(1), t("1"));
        assert_eq!(jones_fig8(2), t("t^10 + t^-10"));
        assert_eq!(degrees(&jones_fig8(3)).unwrap(), (-28, 28));
        assert_eq!(fig8().value(-4), -jones_fig8(4));
    }

    #[test]
    fn cable_values() {
        let p = CableParams::new(5, 2).unwrap();
        assert_eq!(jones_cable(p, 1), t("1"));
        assert!(jones_cable(p, 0).is_zero());
        let expect = &jones_fig8(3).shift(-10, 0) - &t("t^-30");
        assert_eq!(jones_cable(p, 2), expect);
        assert_eq!(KnotSequence::cable(p).value(-2), -expect);
    }

    #[test]
    fn t_sequence_values() {
        let p = CableParams::new(7, 3).unwrap();
        let t0 = &jones_fig8(4).shift(14, 0) - &jones_fig8(2).shift(-14, 0);
        assert_eq!(t_seq(p, 0), t0);
        for n in 1..=5 {
            assert_eq!(t_seq(p, -n), t_seq(p, n - 2));
        }
        let q = CableParams::new(3, 2).unwrap();
        let lhs = &jones_cable(q, 2).shift(12, 0) - &jones_cable(q, 0).shift(-12, 0);
        assert_eq!(lhs, t_seq(q, 0));
    }

    #[test]
    fn params_validation() {
        assert!(CableParams::new(4, 2).is_err());
        assert!(CableParams::new(0, 3).is_err());
        assert!(CableParams::new(3, 1).is_err());
        let p = CableParams::new(-9, 2).unwrap();
        assert!(p.below_band() && !p.inside_band() && !p.above_band());
    }

    #[test]
    fn degree_formulas() {
        assert_eq!(degrees_alternating(4, 0, 3, 3, 2).unwrap(), (-10, 10));
        assert_eq!(degrees_alternating(4, 0, 3, 3, 3).unwrap(), (-28, 28));
        assert_eq!(degrees_alternating(7, 3, 4, 5, 1).unwrap(), (0, 0));
        assert!(degrees_alternating(4, 0, 3, 2, 2).is_err());
        let p92 = CableParams::new(9, 2).unwrap();
        assert_eq!(degrees_cable(p92, 2).unwrap(), (-54, 10));
        assert_eq!(degrees(&jones_cable(p92, 2)).unwrap(), (-54, 10));
        assert_eq!(degrees_cable(CableParams::new(13, 3).unwrap(), 3).unwrap().0, -312);
        for (r, s) in [(9, 2), (-9, 2), (7, 2), (13, 3), (-13, 3), (7, 3)] {
            assert_eq!(degrees_cable(CableParams::new(r, s).unwrap(), 1).unwrap(), (0, 0));
        }
        let g = degrees_cable_general(4, 3, 0, p92, 3).unwrap();
        assert!(g.small_n);
    }

    #[test]
    fn degree_formula_gap_for_7_2() {
        // At n = 2 the two endpoint candidates for the lowest degree tie and cancel.
        let p = CableParams::new(7, 2).unwrap();
        assert_eq!(degrees_cable(p, 2).unwrap().0, -42);
        assert_eq!(degrees(&jones_cable(p, 2)).unwrap().0, -34);
        let table = cable_degree_table(p, 8).unwrap();
        let bad: Vec<i64> = table.mismatches().map(|r| r.n).collect();
        assert_eq!(bad, vec![2]);
    }
}
