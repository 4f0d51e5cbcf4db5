use super::{modgcd, MultiPoly, RatFun, Var, Vars};
use crate::error::{Error, Result};

/// Gcd in the Laurent ring, as the canonical associate (monomials and
/// rational constants are units). `gcd(f, 0)` is `f` normalized.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if let Err(e) = a.check_vars(b) {
        panic!("{e}");
    }
    if a.is_zero() {
        return b.normalize_unit();
    }
    if b.is_zero() {
        return a.normalize_unit();
    }
    let a = a.normalize_unit();
    let b = b.normalize_unit();
    if a.is_monomial() || b.is_monomial() {
        return MultiPoly::one(a.vars());
    }
    if a == b {
        return a;
    }
    let g = modgcd::gcd_terms(a.int_terms(), b.int_terms());
    MultiPoly::from_int_terms(a.vars(), g).normalize_unit()
}

/// Gcd of the coefficients of `p` with respect to `v`.
pub(crate) fn content_in(p: &MultiPoly, v: Var) -> MultiPoly {
    let mut coeffs: Vec<MultiPoly> = p.coeffs_in(v).into_iter().map(|(_, c)| c).collect();
    coeffs.sort_by_key(|c| c.len());
    let mut g = MultiPoly::zero(p.vars());
    for c in coeffs {
        g = gcd(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn only_var(p: &MultiPoly) -> Option<Var> {
    let vars = p.vars();
    match (p.involves(vars.0), p.involves(vars.1)) {
        (true, false) => Some(vars.0),
        (false, true) => Some(vars.1),
        _ => None,
    }
}

fn uni_squarefree(p: &MultiPoly, v: Var) -> MultiPoly {
    let g = gcd(p, &p.derivative(v));
    p.div_exact(&g).expect("gcd divides").normalize_unit()
}

/// Product of the distinct irreducible factors, as the canonical associate.
/// Monomial factors are units and disappear.
pub fn squarefree_part(p: &MultiPoly) -> Result<MultiPoly> {
    if p.is_zero() {
        return Err(Error::Usage("squarefree part of zero".into()));
    }
    let q = p.normalize_unit();
    if q.is_constant() {
        return Ok(MultiPoly::one(p.vars()));
    }
    if let Some(v) = only_var(&q) {
        return Ok(uni_squarefree(&q, v));
    }
    let Vars(v1, v2) = q.vars();
    let cont = content_in(&q, v2);
    let pp = q.div_exact(&cont).expect("content divides");
    let pp_part = uni_squarefree(&pp, v2);
    let cont_part = if cont.is_constant() { MultiPoly::one(q.vars()) } else { uni_squarefree(&cont, v1) };
    Ok((&cont_part * &pp_part).normalize_unit())
}

/// Yun's squarefree decomposition of a polynomial in a single variable:
/// pairs `(a_i, i)` with `p = c * prod a_i^i`, each `a_i` squarefree and
/// nonconstant, pairwise coprime. Monomial factors are dropped.
pub fn squarefree_decomposition(p: &MultiPoly) -> Result<Vec<(MultiPoly, u32)>> {
    if p.is_zero() {
        return Err(Error::Usage("squarefree decomposition of zero".into()));
    }
    let f = p.normalize_unit();
    if f.is_constant() {
        return Ok(Vec::new());
    }
    let v = only_var(&f)
        .ok_or_else(|| Error::Usage("squarefree decomposition needs a univariate polynomial".into()))?;
    let fp = f.derivative(v);
    let b = gcd(&f, &fp);
    let mut c = f.div_exact(&b).expect("gcd divides");
    let mut d = &fp.div_exact(&b).expect("gcd divides derivative") - &c.derivative(v);
    let mut out = Vec::new();
    let mut i = 1;
    while !c.is_constant() {
        let a = gcd(&c, &d);
        c = c.div_exact(&a).expect("yun step");
        d = &d.div_exact(&a).expect("yun step") - &c.derivative(v);
        if !a.is_constant() {
            out.push((a, i));
        }
        i += 1;
    }
    Ok(out)
}

/// Whether a Laurent polynomial in `M` alone is a square in `C(M)`.
pub fn is_square_in_cm(d: &MultiPoly) -> Result<bool> {
    if d.is_zero() {
        return Err(Error::Usage("square test of zero".into()));
    }
    let mi = d
        .var_index(Var::M)
        .ok_or_else(|| Error::Usage(format!("no variable M in {:?}", d.vars())))?;
    let other = d.vars().other(Var::M);
    if d.involves(other) {
        return Err(Error::Usage("square test needs a polynomial in M only".into()));
    }
    let k = d.min_exps().map(|e| if mi == 0 { e.0 } else { e.1 }).unwrap();
    if k.rem_euclid(2) != 0 {
        return Ok(false);
    }
    let parts = squarefree_decomposition(&d.strip_monomial())?;
    Ok(parts.iter().all(|(_, m)| m % 2 == 0))
}

/// `mu(f/g) = mu(f) - mu(g)`.
pub fn mu_ratfun(f: &RatFun) -> Result<i32> {
    Ok(f.num().mu()? - f.den().mu()?)
}

/// Embeds a coefficient that only involves `u` into the variable pair `target`.
fn embed(c: &MultiPoly, u: Var, target: Vars) -> MultiPoly {
    let src = c.vars();
    let ui = src.var_index_of(u);
    let ti = target.var_index_of(u);
    c.map_terms(target, |(e1, e2)| {
        let e = if ui == 0 { e1 } else { e2 };
        if ti == 0 {
            (e, 0)
        } else {
            (0, e)
        }
    })
}

impl Vars {
    fn var_index_of(self, v: Var) -> usize {
        if self.0 == v {
            0
        } else {
            1
        }
    }
}

/// Coefficients of `p` in `elim`, dense from degree 0, embedded into `target`.
fn coefficient_column(p: &MultiPoly, elim: Var, target: Vars) -> Result<Vec<MultiPoly>> {
    if !p.vars().contains(elim) {
        return Err(Error::Usage(format!("{elim} does not occur in {:?}", p.vars())));
    }
    let u = p.vars().other(elim);
    let coeffs = p.coeffs_in(elim);
    if coeffs.first().map(|c| c.0 < 0).unwrap_or(false) {
        return Err(Error::Usage(format!("negative powers of {elim} in resultant input")));
    }
    let deg = coeffs.last().map(|c| c.0).unwrap_or(-1);
    if deg < 1 {
        return Err(Error::Usage(format!("resultant input has degree {deg} in {elim}")));
    }
    let mut out = vec![MultiPoly::zero(target); deg as usize + 1];
    for (k, c) in coeffs {
        out[k as usize] = embed(&c, u, target);
    }
    Ok(out)
}

/// Determinant of the Sylvester matrix of `f` and `g` with respect to `elim`.
///
/// The first `deg g` columns hold the coefficients of `f` (constant term on
/// top, shifted down one row per column), the remaining `deg f` columns those
/// of `g`. The other variables of `f` and `g` become the variables of the
/// result; when both use the same one, the result keeps the variables of `f`.
pub fn resultant(f: &MultiPoly, g: &MultiPoly, elim: Var) -> Result<MultiPoly> {
    let uf = f.vars().other(elim);
    let ug = g.vars().other(elim);
    let target = if uf == ug { f.vars() } else { Vars(uf, ug) };
    let fc = coefficient_column(f, elim, target)?;
    let gc = coefficient_column(g, elim, target)?;
    let n = fc.len() - 1;
    let m = gc.len() - 1;
    let size = n + m;
    let zero = MultiPoly::zero(target);
    let mut mat = vec![vec![zero.clone(); size]; size];
    for j in 0..m {
        for (i, c) in fc.iter().enumerate() {
            mat[j + i][j] = c.clone();
        }
    }
    for j in 0..n {
        for (i, c) in gc.iter().enumerate() {
            mat[j + i][m + j] = c.clone();
        }
    }
    Ok(bareiss_det(mat))
}

/// Fraction-free determinant; pivots on the nonzero entry with fewest terms.
pub(crate) fn bareiss_det(mut a: Vec<Vec<MultiPoly>>) -> MultiPoly {
    let n = a.len();
    assert!(n > 0, "determinant of an empty matrix");
    let vars = a[0][0].vars();
    let mut negate = false;
    let mut prev = MultiPoly::one(vars);
    for k in 0..n {
        let pivot = (k..n).filter(|&i| !a[i][k].is_zero()).min_by_key(|&i| a[i][k].len());
        let Some(p) = pivot else {
            return MultiPoly::zero(vars);
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = MultiPoly::zero(vars);
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}
