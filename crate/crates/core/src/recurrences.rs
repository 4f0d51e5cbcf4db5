//! Annihilators of the colored Jones sequences: the inhomogeneous figure
//! eight relation, the relation for `J_{E,2n+1}`, the linear system for the
//! auxiliary sequence `T_n`, and the assembled cable annihilators.

use std::fmt;

use log::debug;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_poly::{parse_poly, MultiPoly, RatFun, Substitution, Var, Vars};
use crate::jones::{fig8, CableParams, KnotSequence};
use crate::qtorus::{act, homogenize, skew_mul, InhomogRelation, NormalizedOperator, Sequence, SkewOperator};

/// `P_2 L^2 + P_1 L + P_0` acting on `J_{E,n}` with right-hand side `b`.
#[derive(Clone, Debug)]
pub struct Fig8Relation {
    pub p0: MultiPoly,
    pub p1: MultiPoly,
    pub p2: MultiPoly,
    pub b: RatFun,
}

fn tm(s: &str) -> MultiPoly {
    parse_poly(s, Vars::TM).expect("literal polynomial")
}

/// `f(t, t^a M^k)`.
fn at(f: &MultiPoly, a: i64, k: i64) -> MultiPoly {
    f.substitute(Substitution::Monomial { var: Var::M, a, b: k })
}

fn at_rat(f: &RatFun, a: i64, k: i64) -> Result<RatFun> {
    f.substitute(Substitution::Monomial { var: Var::M, a, b: k })
}

impl Fig8Relation {
    /// The literal closed forms, without verification.
    pub fn literal() -> Fig8Relation {
        let p2 = &tm("t^10*M^4") * &tm("-1 + t^4*M^4");
        let p1 = -&(&(&tm("-1 + t^4*M^2") * &tm("1 + t^4*M^2"))
            * &tm("1 - t^4*M^2 - t^4*M^4 - t^12*M^4 - t^12*M^6 + t^16*M^8"));
        let p0 = &tm("t^6*M^4") * &tm("-1 + t^12*M^4");
        let b = RatFun::new(Self::b_numerator(), tm("t^2 - t^-2")).expect("nonzero denominator");
        Fig8Relation { p0, p1, p2, b }
    }

    /// `(t^2 - t^-2) b(t, M)`.
    pub fn b_numerator() -> MultiPoly {
        &(&(&tm("M") * &tm("1 + t^4*M^2")) * &tm("-1 + t^4*M^4")) * &tm("-t^2 + t^14*M^4")
    }

    pub fn p(&self, i: usize) -> &MultiPoly {
        match i {
            0 => &self.p0,
            1 => &self.p1,
            2 => &self.p2,
            _ => panic!("no coefficient P_{i}"),
        }
    }

    pub fn operator(&self) -> SkewOperator {
        SkewOperator::from_polys([(0, self.p0.clone()), (1, self.p1.clone()), (2, self.p2.clone())])
    }

    pub fn relation(&self) -> InhomogRelation {
        InhomogRelation::new(self.operator(), self.b.clone()).expect("b is nonzero")
    }
}

/// The figure eight relation, checked against `J_{E,n}` for `n = 1..=10`.
pub fn fig8_relation() -> Result<Fig8Relation> {
    let rel = Fig8Relation::literal();
    let report = verify(&rel.operator(), Some(&rel.b), fig8(), 1..=10);
    if !report.all_pass() {
        return Err(Error::Integrity(format!("figure eight relation fails at n = {:?}", report.failures())));
    }
    Ok(rel)
}

/// A matrix of polynomials with labelled rows and columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CableMatrix {
    pub entries: Vec<Vec<MultiPoly>>,
    pub col_labels: Vec<String>,
    pub row_labels: Vec<String>,
}

impl CableMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn column(&self, label: &str) -> Option<usize> {
        self.col_labels.iter().position(|l| l == label)
    }

    /// `A x` for a candidate solution.
    pub fn apply(&self, x: &[RatFun]) -> Vec<RatFun> {
        self.entries
            .iter()
            .map(|row| {
                row.iter().zip(x).fold(RatFun::zero(Vars::TM), |acc, (a, xi)| {
                    if a.is_zero() {
                        acc
                    } else {
                        &acc + &xi.mul_poly(a)
                    }
                })
            })
            .collect()
    }
}

/// The linear system whose nullspace gives the relation for `J_{E,2n+1}`.
/// Columns `c_0, c_1, c_2, Q_0, Q_1, Q_2`; row `k` collects `J_{E,2n+1+k}`.
pub fn odd_system(rel: &Fig8Relation) -> CableMatrix {
    let zero = MultiPoly::zero(Vars::TM);
    let mut entries = vec![vec![zero; 6]; 5];
    for j in 0..3 {
        for i in 0..3 {
            entries[j + i][j] = at(rel.p(i), 2 * j as i64 + 2, 2);
        }
    }
    for i in 0..3 {
        entries[2 * i][3 + i] = MultiPoly::integer(Vars::TM, -1);
    }
    let col_labels = ["c_0", "c_1", "c_2", "Q_0", "Q_1", "Q_2"].iter().map(|s| s.to_string()).collect();
    let row_labels = (0..5).map(|k| format!("J_E(2n+{})", 1 + k)).collect();
    CableMatrix { entries, col_labels, row_labels }
}

/// The `(2s+3) x (2s+4)` system for `T_n`. Columns `c_0..c_2s, Q_2, Q_1, Q_0`;
/// row `k` collects `J_{E,s(n+1)-1+k}`.
pub fn build_matrix(p: CableParams) -> Result<CableMatrix> {
    let rel = Fig8Relation::literal();
    let (r, s) = (p.r(), p.s());
    let nc = (2 * s + 1) as usize;
    let rows = nc + 2;
    let zero = MultiPoly::zero(Vars::TM);
    let mut entries = vec![vec![zero; nc + 3]; rows];
    for j in 0..nc {
        for i in 0..3 {
            entries[j + i][j] = at(rel.p(i), 2 * (s - 1 + j as i64), s);
        }
    }
    for i in 0..3usize {
        let col = nc + 2 - i;
        let e = 2 * r * (1 + i as i64);
        entries[s as usize * i][col] = MultiPoly::ints(Vars::TM, &[(-e as i32, -r as i32, 1)]);
        entries[s as usize * i + 2][col] = MultiPoly::ints(Vars::TM, &[(e as i32, r as i32, -1)]);
    }
    let mut col_labels: Vec<String> = (0..nc).map(|j| format!("c_{j}")).collect();
    col_labels.extend(["Q_2", "Q_1", "Q_0"].iter().map(|s| s.to_string()));
    let row_labels = (0..rows).map(|k| format!("J_E(s(n+1)-1+{k})")).collect();
    Ok(CableMatrix { entries, col_labels, row_labels })
}

/// Fraction-free row echelon form; returns the rank and a nullspace vector
/// when the nullspace is one-dimensional.
fn nullspace_vector(m: &CableMatrix) -> Result<(usize, Vec<RatFun>)> {
    let mut a = m.entries.clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut prev = MultiPoly::one(Vars::TM);
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut k = 0;
    for c in 0..cols {
        if k == rows {
            break;
        }
        let Some(p) = (k..rows).filter(|&i| !a[i][c].is_zero()).min_by_key(|&i| a[i][c].len()) else {
            continue;
        };
        a.swap(p, k);
        for i in k + 1..rows {
            if a[i][c].is_zero() {
                for j in c + 1..cols {
                    if !a[i][j].is_zero() {
                        let num = &a[i][j] * &a[k][c];
                        a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
                    }
                }
                continue;
            }
            for j in c + 1..cols {
                let num = &(&a[i][j] * &a[k][c]) - &(&a[i][c] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][c] = MultiPoly::zero(Vars::TM);
        }
        prev = a[k][c].clone();
        pivots.push((k, c));
        k += 1;
    }
    let rank = pivots.len();
    if rank + 1 != cols {
        return Err(Error::Degenerate { rank, expected: cols - 1 });
    }
    let free = (0..cols).find(|c| !pivots.iter().any(|p| p.1 == *c)).unwrap();
    let mut x = vec![RatFun::zero(Vars::TM); cols];
    x[free] = RatFun::one(Vars::TM);
    for &(row, c) in pivots.iter().rev() {
        let mut acc = RatFun::zero(Vars::TM);
        for j in c + 1..cols {
            if !a[row][j].is_zero() && !x[j].is_zero() {
                acc = &acc + &x[j].mul_poly(&a[row][j]);
            }
        }
        x[c] = -&acc.try_div(&RatFun::from_poly(a[row][c].clone()))?;
    }
    Ok((rank, x))
}

/// Which sequence a [`SolvedRelation`] acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationTarget {
    /// `n -> J_{E,2n+1}`.
    OddFig8,
    /// `n -> T_n` for the given cable.
    T(CableParams),
}

/// `Q * seq = multiplier * B`, with `Q` normalized.
#[derive(Clone, Debug)]
pub struct SolvedRelation {
    pub target: RelationTarget,
    pub q: NormalizedOperator,
    /// `sum_k c_k b(...)` for the representative with `Q_0 = 1`.
    pub b: RatFun,
    /// `c_0, c_1, ...` for the representative with `Q_0 = 1`.
    pub c: Vec<RatFun>,
    /// Factor taking the `Q_0 = 1` representative to `q`.
    pub multiplier: RatFun,
    pub rank: usize,
}

impl SolvedRelation {
    /// Right-hand side of `q * seq`.
    pub fn rhs(&self) -> RatFun {
        &self.multiplier * &self.b
    }

    pub fn relation(&self) -> InhomogRelation {
        InhomogRelation::new(self.q.to_skew(), self.rhs()).expect("B is nonzero")
    }

    /// The sequence the relation annihilates inhomogeneously.
    pub fn sequence(&self) -> Box<dyn Sequence> {
        match self.target {
            RelationTarget::OddFig8 => Box::new(|n: i64| Ok(RatFun::from_poly(fig8().value(2 * n + 1)))),
            RelationTarget::T(p) => Box::new(KnotSequence::t_seq(p)),
        }
    }
}

fn finish(
    target: RelationTarget,
    rank: usize,
    x: Vec<RatFun>,
    c_count: usize,
    q_cols: [usize; 3],
    b_shift: impl Fn(usize) -> (i64, i64),
) -> Result<SolvedRelation> {
    let q0 = &x[q_cols[0]];
    if q0.is_zero() {
        return Err(Error::Integrity("nullspace vector has Q_0 = 0".into()));
    }
    let inv = q0.inv()?;
    let x: Vec<RatFun> = x.iter().map(|v| v * &inv).collect();
    let raw = SkewOperator::from_coeffs((0..3).map(|i| (i as u32, x[q_cols[i]].clone())));
    if raw.l_degree() != Some(2) || (0..3).any(|i| raw.coeff(i).is_none()) {
        return Err(Error::Integrity("solved relation does not have three nonzero coefficients".into()));
    }
    let q = crate::qtorus::normalize(&raw)?;
    let multiplier = RatFun::from_poly(q.coeff(0).unwrap().clone());
    let b_lit = Fig8Relation::literal().b;
    let mut b = RatFun::zero(Vars::TM);
    let c: Vec<RatFun> = x[..c_count].to_vec();
    for (k, ck) in c.iter().enumerate() {
        let (a, e) = b_shift(k);
        b = &b + &(ck * &at_rat(&b_lit, a, e)?);
    }
    if b.is_zero() {
        return Err(Error::Integrity("right-hand side B vanishes".into()));
    }
    Ok(SolvedRelation { target, q, b, c, multiplier, rank })
}

/// The relation for `n -> J_{E,2n+1}`, obtained by solving [`odd_system`] and
/// cross-checked against the closed forms up to an overall factor.
pub fn odd_relation_s2() -> Result<SolvedRelation> {
    let rel = Fig8Relation::literal();
    let m = odd_system(&rel);
    let (rank, x) = nullspace_vector(&m)?;
    let solved = finish(RelationTarget::OddFig8, rank, x, 3, [3, 4, 5], |j| (2 * j as i64 + 2, 2))?;
    let closed = odd_closed_forms(&rel);
    let ratio = RatFun::from_poly(solved.q.coeff(2).unwrap().clone()).try_div(&RatFun::from_poly(closed[2].clone()))?;
    for (i, c) in closed.iter().enumerate().take(2) {
        let lhs = RatFun::from_poly(solved.q.coeff(i as u32).unwrap().clone());
        if lhs != ratio.mul_poly(c) {
            return Err(Error::Integrity(format!("solved Q_{i} disagrees with the closed form")));
        }
    }
    let report = verify(&solved.q.to_skew(), Some(&solved.rhs()), &*solved.sequence(), 0..=8);
    if !report.all_pass() {
        return Err(Error::Integrity(format!("odd relation fails at n = {:?}", report.failures())));
    }
    Ok(solved)
}

/// `[Q_0, Q_1, Q_2]` of the relation for `J_{E,2n+1}` in closed form.
pub fn odd_closed_forms(rel: &Fig8Relation) -> [MultiPoly; 3] {
    let p = |i: usize, a: i64| at(rel.p(i), a, 2);
    let q2 = &(&p(2, 4) * &p(1, 2)) * &p(2, 6);
    let q1 = &(&(&(&p(0, 4) * &p(1, 6)) * &p(2, 2)) - &(&(&p(1, 6) * &p(1, 2)) * &p(1, 4)))
        + &(&(&p(2, 4) * &p(1, 2)) * &p(0, 6));
    let q0 = &(&p(0, 4) * &p(1, 6)) * &p(0, 2);
    [q0, q1, q2]
}

/// Solves the matrix system for any `s >= 2`; verdicts only use `s > 2`.
pub fn solve_matrix(p: CableParams) -> Result<SolvedRelation> {
    let m = build_matrix(p)?;
    let (rank, x) = nullspace_vector(&m)?;
    debug!("matrix for {p} has rank {rank}");
    let s = p.s();
    let nc = (2 * s + 1) as usize;
    finish(RelationTarget::T(p), rank, x, nc, [nc + 2, nc + 1, nc], |k| (2 * (s - 1 + k as i64), s))
}

/// The relation `Q T_n = B` for a cable with `s > 2`.
pub fn solve_relation(p: CableParams) -> Result<SolvedRelation> {
    if p.s() <= 2 {
        return Err(Error::Usage(format!("the matrix construction needs s > 2, got {p}")));
    }
    solve_matrix(p)
}

/// An annihilator of `J_{C,n}`.
#[derive(Clone, Debug)]
pub struct CableAnnihilator {
    pub params: CableParams,
    pub r: NormalizedOperator,
    pub l_degree: u32,
    /// The factors of the product, left to right.
    pub factors: Vec<String>,
    pub relation: SolvedRelation,
}

/// The operator `P` with `P J_{C,n} = J_{E,2n+1}` (`s = 2`) or `P J_{C,n} = T_n`.
pub fn peel_operator(p: CableParams) -> SkewOperator {
    let (r, s) = (p.r() as i32, p.s() as i32);
    if s == 2 {
        SkewOperator::from_polys([
            (1, MultiPoly::ints(Vars::TM, &[(0, r, 1)])),
            (0, MultiPoly::ints(Vars::TM, &[(-2 * r, -r, 1)])),
        ])
    } else {
        SkewOperator::from_polys([
            (2, MultiPoly::ints(Vars::TM, &[(2 * r * s, r * s, 1)])),
            (0, MultiPoly::ints(Vars::TM, &[(-2 * r * s, -r * s, -1)])),
        ])
    }
}

/// `(L - 1) B^-1 Q P`, normalized.
pub fn assemble_annihilator(p: CableParams) -> Result<CableAnnihilator> {
    let relation = if p.s() == 2 { odd_relation_s2()? } else { solve_relation(p)? };
    let peel = peel_operator(p);
    let op = skew_mul(&relation.q.to_skew(), &peel);
    let r = homogenize(&InhomogRelation::new(op, relation.rhs())?)?;
    let l_degree = r.l_degree();
    let expected = if p.s() == 2 { 4 } else { 5 };
    if l_degree != expected {
        return Err(Error::Integrity(format!("annihilator for {p} has L-degree {l_degree}, expected {expected}")));
    }
    let factors = vec!["L - 1".to_string(), "B^-1".to_string(), "Q".to_string(), peel.to_string()];
    Ok(CableAnnihilator { params: p, r, l_degree, factors, relation })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub n: i64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VerifyReport {
    pub rows: Vec<VerifyRow>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> Vec<i64> {
        self.rows.iter().filter(|r| !r.pass).map(|r| r.n).collect()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "n = {}: {}", r.n, if r.pass { "ok" } else { "FAIL" })?;
        }
        Ok(())
    }
}

fn check_one<S: Sequence + ?Sized>(op: &SkewOperator, rhs: Option<&RatFun>, seq: &S, n: i64) -> bool {
    let Ok(lhs) = act(op, seq, n) else {
        return false;
    };
    match rhs {
        None => lhs.is_zero(),
        Some(b) => match crate::qtorus::eval_at_index(b, n) {
            Ok(v) => v == lhs,
            Err(_) => false,
        },
    }
}

/// Checks `op * seq = rhs(t, t^(2n))` (or `= 0`) for each `n`, one thread per index.
pub fn verify<S, I>(op: &SkewOperator, rhs: Option<&RatFun>, seq: &S, ns: I) -> VerifyReport
where
    S: Sequence + ?Sized,
    I: IntoIterator<Item = i64>,
{
    let ns: Vec<i64> = ns.into_iter().collect();
    let rows = std::thread::scope(|scope| {
        let handles: Vec<_> = ns
            .iter()
            .map(|&n| scope.spawn(move || VerifyRow { n, pass: check_one(op, rhs, seq, n) }))
            .collect();
        handles.into_iter().map(|h| h.join().expect("verification thread panicked")).collect()
    });
    VerifyReport { rows }
}


#[cfg(test)]
mod s3_tests {
    use super::*;
    use crate::exact_poly::parse_poly;
    use crate::qtorus::eval_minus1_op;

    #[test]
    fn relation_13_3() {
        let p = CableParams::new(13, 3).unwrap();
        let solved = solve_relation(p).unwrap();
        assert_eq!(solved.rank, 9);
        assert_eq!(solved.q.l_degree(), 2);
        let seq = solved.sequence();
        assert!(verify(&solved.q.to_skew(), Some(&solved.rhs()), &*seq, 1..=6).all_pass());
        let ann = assemble_annihilator(p).unwrap();
        assert_eq!(ann.l_degree, 5);
        assert!(verify(&ann.r.to_skew(), None, &KnotSequence::cable(p), 1..=8).all_pass());
        let lm1 = parse_poly("L - 1", Vars::ML).unwrap();
        assert!(eval_minus1_op(&ann.r).div_exact(&lm1).is_some());
    }
}
