//! Modular gcd for integer polynomials in one or two variables.
//!
//! Images are computed over word-size primes: the bivariate case evaluates the
//! minor variable at many points, runs Euclid on the univariate images,
//! interpolates and lifts by Chinese remaindering. Every candidate is checked
//! by exact trial division over the integers, so the answer never depends on
//! luck with primes or evaluation points.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::kernel::{self, Exp, Term};

/// Dense univariate integer polynomial, ascending, no trailing zeros.
type UPoly = Vec<BigInt>;

/// Bivariate polynomial by rows: `rows[i]` is the coefficient of `x^i`, a
/// sparse ascending list of `(y-degree, coefficient)`.
#[derive(Clone, Debug, PartialEq)]
struct Bi {
    rows: Vec<Vec<(u32, BigInt)>>,
}

const MAX_PRIMES: usize = 400;
const STABLE_POINTS: usize = 2;

fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(MAX_PRIMES);
        let mut n: u64 = (1 << 31) - 1;
        while out.len() < MAX_PRIMES {
            if is_prime(n) {
                out.push(n);
            }
            n -= 2;
        }
        out
    })
}

fn is_prime(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7] {
        if a % n == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = x * x % n;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn reduce(c: &BigInt, p: u64) -> u64 {
    let r = c.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap()
}

fn trim_u(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn trim_big(v: &mut UPoly) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

fn rem_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    while r.len() > db {
        let top = r.len() - 1;
        let q = r[top] * inv % p;
        if q != 0 {
            let off = top - db;
            for (i, bi) in b.iter().enumerate() {
                let s = q * bi % p;
                r[off + i] = (r[off + i] + p - s) % p;
            }
        }
        r.pop();
        trim_u(&mut r);
    }
    r
}

/// Monic gcd over `Z_p`.
fn gcd_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim_u(&mut a);
    trim_u(&mut b);
    while !b.is_empty() {
        let r = rem_mod(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lc) = a.last() {
        let inv = inv_mod(lc, p);
        for c in a.iter_mut() {
            *c = *c * inv % p;
        }
    }
    a
}

fn eval_mod(poly: &[u64], x: u64, p: u64) -> u64 {
    poly.iter().rev().fold(0, |acc, c| (acc * x + c) % p)
}

fn uni_content(a: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in a {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Integer-primitive with positive leading coefficient.
fn uni_normalize(mut a: UPoly) -> UPoly {
    trim_big(&mut a);
    if a.is_empty() {
        return a;
    }
    let mut g = uni_content(&a);
    if a.last().unwrap().is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for c in a.iter_mut() {
            *c = &*c / &g;
        }
    }
    a
}

/// Exact quotient over the integers.
fn uni_div_exact(a: &[BigInt], b: &[BigInt]) -> Option<UPoly> {
    if a.is_empty() {
        return Some(Vec::new());
    }
    if b.len() > a.len() {
        return None;
    }
    let db = b.len() - 1;
    let lc = &b[db];
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let top = k + db;
        if r[top].is_zero() {
            continue;
        }
        let (qc, rem) = r[top].div_rem(lc);
        if !rem.is_zero() {
            return None;
        }
        for (i, bi) in b.iter().enumerate() {
            r[k + i] -= &qc * bi;
        }
        q[k] = qc;
    }
    if r.iter().any(|c| !c.is_zero()) {
        return None;
    }
    trim_big(&mut q);
    Some(q)
}

fn crt_combine(acc: &mut BigInt, m: &BigInt, m_inv_p: u64, image: u64, p: u64) {
    let cur = reduce(acc, p);
    let diff = (image + p - cur) % p;
    let k = diff * m_inv_p % p;
    if k != 0 {
        *acc += m * BigInt::from(k);
    }
}

fn symmetric(c: &BigInt, m: &BigInt, half: &BigInt) -> BigInt {
    if c > half {
        c - m
    } else {
        c.clone()
    }
}

/// Primitive gcd of two nonzero univariate integer polynomials.
fn uni_gcd(a: &[BigInt], b: &[BigInt]) -> UPoly {
    let a = uni_normalize(a.to_vec());
    let b = uni_normalize(b.to_vec());
    if a.is_empty() {
        return b;
    }
    if b.is_empty() {
        return a;
    }
    if a.len() == 1 || b.len() == 1 {
        return vec![BigInt::one()];
    }
    if a == b {
        return a;
    }
    let gamma = a.last().unwrap().gcd(b.last().unwrap());
    let mut acc: Option<(usize, Vec<BigInt>, BigInt)> = None;
    for &p in primes() {
        let pb = BigInt::from(p);
        if (a.last().unwrap() % &pb).is_zero() || (b.last().unwrap() % &pb).is_zero() {
            continue;
        }
        let ap: Vec<u64> = a.iter().map(|c| reduce(c, p)).collect();
        let bp: Vec<u64> = b.iter().map(|c| reduce(c, p)).collect();
        let g = gcd_mod(&ap, &bp, p);
        let d = g.len() - 1;
        if d == 0 {
            return vec![BigInt::one()];
        }
        let gp = reduce(&gamma, p);
        let img: Vec<u64> = g.iter().map(|c| c * gp % p).collect();
        match &mut acc {
            Some((deg, _, _)) if d > *deg => continue,
            Some((deg, coeffs, m)) if d == *deg => {
                let m_inv = inv_mod(reduce(m, p), p);
                for (c, i) in coeffs.iter_mut().zip(img.iter()) {
                    crt_combine(c, m, m_inv, *i, p);
                }
                *m *= &pb;
            }
            _ => {
                acc = Some((d, img.iter().map(|&c| BigInt::from(c)).collect(), pb.clone()));
            }
        }
        let (_, coeffs, m) = acc.as_ref().unwrap();
        let half = m / 2;
        let cand: UPoly = coeffs.iter().map(|c| symmetric(c, m, &half)).collect();
        let cand = uni_normalize(cand);
        if uni_div_exact(&a, &cand).is_some() && uni_div_exact(&b, &cand).is_some() {
            return cand;
        }
    }
    panic!("modular univariate gcd did not converge");
}

fn row_dense(row: &[(u32, BigInt)]) -> UPoly {
    let len = row.last().map(|r| r.0 as usize + 1).unwrap_or(0);
    let mut v = vec![BigInt::zero(); len];
    for (k, c) in row {
        v[*k as usize] = c.clone();
    }
    v
}

fn dense_row(v: &[BigInt]) -> Vec<(u32, BigInt)> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k as u32, c.clone()))
        .collect()
}

impl Bi {
    fn from_terms(t: &[Term], x_is_first: bool) -> Bi {
        let mut rows: Vec<Vec<(u32, BigInt)>> = Vec::new();
        for ((e1, e2), c) in t {
            let (x, y) = if x_is_first { (*e1, *e2) } else { (*e2, *e1) };
            let (x, y) = (x as usize, y as u32);
            if rows.len() <= x {
                rows.resize(x + 1, Vec::new());
            }
            rows[x].push((y, c.clone()));
        }
        for r in rows.iter_mut() {
            r.sort_by_key(|e| e.0);
        }
        Bi { rows }
    }

    fn to_terms(&self, x_is_first: bool) -> Vec<Term> {
        let mut out: Vec<Term> = Vec::new();
        for (x, row) in self.rows.iter().enumerate() {
            for (y, c) in row {
                let e: Exp = if x_is_first { (x as i32, *y as i32) } else { (*y as i32, x as i32) };
                out.push((e, c.clone()));
            }
        }
        kernel::collect_sorted(out)
    }

    fn deg_x(&self) -> usize {
        self.rows.len() - 1
    }

    fn deg_y(&self) -> u32 {
        self.rows.iter().filter_map(|r| r.last().map(|e| e.0)).max().unwrap_or(0)
    }

    fn lc_dense(&self) -> UPoly {
        row_dense(self.rows.last().unwrap())
    }

    /// Primitive gcd of the rows over `Z[y]`.
    fn content_y(&self) -> UPoly {
        let mut rows: Vec<&Vec<(u32, BigInt)>> = self.rows.iter().filter(|r| !r.is_empty()).collect();
        rows.sort_by_key(|r| (r.len(), r.last().map(|e| e.0)));
        let mut g = uni_normalize(row_dense(rows[0]));
        for r in &rows[1..] {
            if g.len() == 1 {
                break;
            }
            let d = row_dense(r);
            if uni_div_exact(&d, &g).is_some() {
                continue;
            }
            g = uni_gcd(&g, &d);
        }
        g
    }

    fn div_rows(&self, d: &[BigInt]) -> Bi {
        if d.len() == 1 && d[0].is_one() {
            return self.clone();
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                if r.is_empty() {
                    Vec::new()
                } else {
                    dense_row(&uni_div_exact(&row_dense(r), d).expect("content divides every row"))
                }
            })
            .collect();
        Bi { rows }
    }

    fn mul_rows(&self, d: &[BigInt]) -> Bi {
        if d.len() == 1 && d[0].is_one() {
            return self.clone();
        }
        let dt: Vec<Term> = d
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| ((0, k as i32), c.clone()))
            .collect();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let rt: Vec<Term> = r.iter().map(|(k, c)| ((0, *k as i32), c.clone())).collect();
                kernel::mul(&rt, &dt).into_iter().map(|((_, k), c)| (k as u32, c)).collect()
            })
            .collect();
        Bi { rows }
    }

    fn int_primitive(&self) -> Bi {
        let mut g = BigInt::zero();
        for r in &self.rows {
            for (_, c) in r {
                g = g.gcd(c);
            }
        }
        if self.rows.last().and_then(|r| r.last()).map(|e| e.1.is_negative()).unwrap_or(false) {
            g = -g;
        }
        if g.is_one() {
            return self.clone();
        }
        Bi { rows: self.rows.iter().map(|r| r.iter().map(|(k, c)| (*k, c / &g)).collect()).collect() }
    }

    fn reduce_mod(&self, p: u64) -> Vec<Vec<(u32, u64)>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|(k, c)| (*k, reduce(c, p))).filter(|e| e.1 != 0).collect())
            .collect()
    }
}

fn eval_rows(rows: &[Vec<(u32, u64)>], pows: &[u64], p: u64) -> Vec<u64> {
    let mut v: Vec<u64> = rows
        .iter()
        .map(|r| r.iter().fold(0u64, |acc, (k, c)| (acc + c * pows[*k as usize]) % p))
        .collect();
    trim_u(&mut v);
    v
}

enum Image {
    /// The gcd has degree zero in the main variable.
    Trivial,
    Rows(usize, Vec<Vec<u64>>),
}

/// Image of `gamma * gcd / lc(gcd)` modulo `p`, interpolated in `y`.
fn brown_mod(a: &Bi, b: &Bi, gamma: &[BigInt], dy_bound: usize, p: u64, start: u64) -> Option<Image> {
    let ar = a.reduce_mod(p);
    let br = b.reduce_mod(p);
    if ar.last().unwrap().is_empty() || br.last().unwrap().is_empty() {
        return None;
    }
    let gp: Vec<u64> = gamma.iter().map(|c| reduce(c, p)).collect();
    let max_y = a.deg_y().max(b.deg_y()) as usize;
    let mut cur_deg: Option<usize> = None;
    let mut interp: Vec<Vec<u64>> = Vec::new();
    let mut newton: Vec<u64> = vec![1];
    let mut npoints = 0usize;
    let mut stable = 0usize;
    let mut pows = vec![0u64; max_y + 1];
    let lc_a = row_mod_dense(ar.last().unwrap());
    let lc_b = row_mod_dense(br.last().unwrap());
    for k in 0..p - 1 {
        let pt = (start + k) % (p - 1) + 1;
        let lca = eval_mod(&lc_a, pt, p);
        let lcb = eval_mod(&lc_b, pt, p);
        let gv = eval_mod(&gp, pt, p);
        if lca == 0 || lcb == 0 || gv == 0 {
            continue;
        }
        pows[0] = 1;
        for k in 1..=max_y {
            pows[k] = pows[k - 1] * pt % p;
        }
        let ea = eval_rows(&ar, &pows, p);
        let eb = eval_rows(&br, &pows, p);
        let g = gcd_mod(&ea, &eb, p);
        let d = g.len() - 1;
        if d == 0 {
            return Some(Image::Trivial);
        }
        match cur_deg {
            Some(c) if d > c => continue,
            Some(c) if d == c => {}
            _ => {
                cur_deg = Some(d);
                interp = vec![Vec::new(); d + 1];
                newton = vec![1];
                npoints = 0;
                stable = 0;
            }
        }
        let img: Vec<u64> = g.iter().map(|c| c * gv % p).collect();
        let nv = eval_mod(&newton, pt, p);
        let ninv = inv_mod(nv, p);
        let mut changed = false;
        for (row, val) in interp.iter_mut().zip(img.iter()) {
            let cur = eval_mod(row, pt, p);
            let delta = (val + p - cur) % p * ninv % p;
            if delta != 0 {
                changed = true;
                if row.len() < newton.len() {
                    row.resize(newton.len(), 0);
                }
                for (i, n) in newton.iter().enumerate() {
                    row[i] = (row[i] + delta * n) % p;
                }
            }
        }
        // newton *= (y - pt)
        let mut next = vec![0u64; newton.len() + 1];
        for (i, n) in newton.iter().enumerate() {
            next[i + 1] = (next[i + 1] + n) % p;
            next[i] = (next[i] + p - n * pt % p) % p;
        }
        newton = next;
        npoints += 1;
        if changed || npoints == 1 {
            stable = 0;
        } else {
            stable += 1;
        }
        if (npoints > dy_bound && stable >= 1) || stable >= STABLE_POINTS {
            for row in interp.iter_mut() {
                trim_u(row);
            }
            return Some(Image::Rows(d, interp));
        }
    }
    None
}

fn row_mod_dense(row: &[(u32, u64)]) -> Vec<u64> {
    let len = row.last().map(|e| e.0 as usize + 1).unwrap_or(0);
    let mut v = vec![0u64; len];
    for (k, c) in row {
        v[*k as usize] = *c;
    }
    v
}

fn bi_divides(a: &Bi, d: &Bi) -> bool {
    kernel::div_exact(&a.to_terms(true), &d.to_terms(true)).is_some()
}

/// Primitive gcd of two polynomials that are primitive over `Z[y]`.
fn brown(a: &Bi, b: &Bi) -> Bi {
    let (la, lb) = (a.lc_dense(), b.lc_dense());
    let ic = uni_content(&la).gcd(&uni_content(&lb));
    let gamma: UPoly = uni_gcd(&la, &lb).into_iter().map(|c| c * &ic).collect();
    let dy_bound = (gamma.len() - 1) + a.deg_y().min(b.deg_y()) as usize;
    let mut acc: Option<(usize, Vec<Vec<BigInt>>, BigInt)> = None;
    for (i, &p) in primes().iter().enumerate() {
        let Some(img) = brown_mod(a, b, &gamma, dy_bound, p, i as u64 * 7919) else {
            continue;
        };
        let (d, rows) = match img {
            Image::Trivial => return Bi { rows: vec![vec![(0, BigInt::one())]] },
            Image::Rows(d, rows) => (d, rows),
        };
        let pb = BigInt::from(p);
        match &mut acc {
            Some((deg, _, _)) if d > *deg => continue,
            Some((deg, coeffs, m)) if d == *deg => {
                let m_inv = inv_mod(reduce(m, p), p);
                for (crow, irow) in coeffs.iter_mut().zip(rows.iter()) {
                    if crow.len() < irow.len() {
                        crow.resize(irow.len(), BigInt::zero());
                    }
                    for (k, c) in crow.iter_mut().enumerate() {
                        let iv = irow.get(k).copied().unwrap_or(0);
                        crt_combine(c, m, m_inv, iv, p);
                    }
                }
                *m *= &pb;
            }
            _ => {
                let coeffs = rows.iter().map(|r| r.iter().map(|&c| BigInt::from(c)).collect()).collect();
                acc = Some((d, coeffs, pb.clone()));
            }
        }
        let (_, coeffs, m) = acc.as_ref().unwrap();
        let half = m / 2;
        let cand = Bi {
            rows: coeffs
                .iter()
                .map(|r| {
                    let v: Vec<BigInt> = r.iter().map(|c| symmetric(c, m, &half)).collect();
                    dense_row(&v)
                })
                .collect(),
        };
        if cand.rows.last().map(|r| r.is_empty()).unwrap_or(true) {
            continue;
        }
        let cont = cand.content_y();
        let cand = cand.div_rows(&cont).int_primitive();
        if bi_divides(a, &cand) && bi_divides(b, &cand) {
            return cand;
        }
    }
    panic!("modular bivariate gcd did not converge");
}

/// Gcd of two nonzero integer term lists with nonnegative exponents. The
/// result is primitive over the integers, up to sign.
pub(crate) fn gcd_terms(a: &[Term], b: &[Term]) -> Vec<Term> {
    let ba = kernel::Bounds::of(a);
    let bb = kernel::Bounds::of(b);
    let deg1 = ba.max1.max(bb.max1);
    let deg2 = ba.max2.max(bb.max2);
    // The main variable carries the Euclidean work; evaluate the other one.
    let x_is_first = if deg1 == 0 {
        false
    } else if deg2 == 0 {
        true
    } else {
        deg1 <= deg2
    };
    let a = Bi::from_terms(a, x_is_first);
    let b = Bi::from_terms(b, x_is_first);
    let ca = a.content_y();
    let cb = b.content_y();
    let c = uni_gcd(&ca, &cb);
    let a1 = a.div_rows(&ca).int_primitive();
    let b1 = b.div_rows(&cb).int_primitive();
    let g = if a1.deg_x() == 0 || b1.deg_x() == 0 {
        Bi { rows: vec![vec![(0, BigInt::one())]] }
    } else if a1 == b1 {
        a1
    } else {
        brown(&a1, &b1)
    };
    g.mul_rows(&c).to_terms(x_is_first)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(v: &[i64]) -> UPoly {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn univariate_gcd_shared_factor() {
        // (y-1)^2 (y+2) and (y-1)(y+3)
        let a = up(&[2, -3, 0, 1]);
        let b = up(&[-3, 2, 1]);
        assert_eq!(uni_gcd(&a, &b), up(&[-1, 1]));
    }

    #[test]
    fn primes_are_distinct_and_large() {
        let ps = primes();
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(ps.iter().all(|&p| p > 1 << 30 && is_prime(p)));
        assert!(!is_prime((1 << 31) - 3));
    }
}
