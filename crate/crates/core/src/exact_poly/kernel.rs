//! Integer term-list kernels shared by `MultiPoly`.
//!
//! A term list is a slice of `((e1, e2), c)` sorted ascending by exponent with
//! every `c` nonzero. Products and quotients pick a dense accumulator when the
//! exponent box is small and fall back to sparse maps otherwise; coefficients
//! are accumulated in `i128` whenever the magnitudes provably fit.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rustc_hash::FxHashMap;

pub(crate) type Exp = (i32, i32);
pub(crate) type Term = (Exp, BigInt);

const DENSE_CELL_LIMIT: usize = 1 << 22;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Bounds {
    pub min1: i32,
    pub max1: i32,
    pub min2: i32,
    pub max2: i32,
}

impl Bounds {
    pub fn of(t: &[Term]) -> Bounds {
        let mut b = Bounds { min1: i32::MAX, max1: i32::MIN, min2: i32::MAX, max2: i32::MIN };
        for ((e1, e2), _) in t {
            b.min1 = b.min1.min(*e1);
            b.max1 = b.max1.max(*e1);
            b.min2 = b.min2.min(*e2);
            b.max2 = b.max2.max(*e2);
        }
        b
    }

    fn span1(&self) -> usize {
        (self.max1 as i64 - self.min1 as i64 + 1) as usize
    }

    fn span2(&self) -> usize {
        (self.max2 as i64 - self.min2 as i64 + 1) as usize
    }
}

fn max_bits(t: &[Term]) -> u64 {
    t.iter().map(|(_, c)| c.bits()).max().unwrap_or(0)
}

fn bit_len(n: usize) -> u64 {
    (usize::BITS - n.leading_zeros()) as u64
}

fn to_i128(t: &[Term]) -> Vec<(Exp, i128)> {
    t.iter().map(|(e, c)| (*e, c.to_i128().expect("bit bound checked"))).collect()
}

/// Content (nonnegative gcd of all coefficients); stops early at one.
pub(crate) fn content(t: &[Term]) -> BigInt {
    let mut g = BigInt::zero();
    for (_, c) in t {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

pub(crate) fn scale(t: &[Term], k: &BigInt) -> Vec<Term> {
    if k.is_one() {
        return t.to_vec();
    }
    t.iter().map(|(e, c)| (*e, c * k)).collect()
}

pub(crate) fn div_scalar(t: &[Term], k: &BigInt) -> Vec<Term> {
    if k.is_one() {
        return t.to_vec();
    }
    t.iter().map(|(e, c)| (*e, c / k)).collect()
}

pub(crate) fn shift(t: &[Term], d: Exp) -> Vec<Term> {
    t.iter().map(|((a, b), c)| ((a + d.0, b + d.1), c.clone())).collect()
}

/// `fa*a + fb*b` merged in order.
pub(crate) fn add_scaled(a: &[Term], fa: &BigInt, b: &[Term], fb: &BigInt) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let one_a = fa.is_one();
    let one_b = fb.is_one();
    let sa = |c: &BigInt| if one_a { c.clone() } else { c * fa };
    let sb = |c: &BigInt| if one_b { c.clone() } else { c * fb };
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push((a[i].0, sa(&a[i].1)));
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((b[j].0, sb(&b[j].1)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = sa(&a[i].1) + sb(&b[j].1);
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().map(|(e, c)| (*e, sa(c))));
    out.extend(b[j..].iter().map(|(e, c)| (*e, sb(c))));
    out
}

pub(crate) fn mul(a: &[Term], b: &[Term]) -> Vec<Term> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len() == 1 {
        return mul_term(b, &a[0]);
    }
    if b.len() == 1 {
        return mul_term(a, &b[0]);
    }
    let ba = Bounds::of(a);
    let bb = Bounds::of(b);
    let w1 = ba.span1() + bb.span1() - 1;
    let w2 = ba.span2() + bb.span2() - 1;
    let base = (ba.min1 + bb.min1, ba.min2 + bb.min2);
    let small = max_bits(a) + max_bits(b) + bit_len(a.len().min(b.len())) + 1 < 127;
    let dense = w1
        .checked_mul(w2)
        .map(|cells| cells <= DENSE_CELL_LIMIT && cells <= 16 * a.len() * b.len())
        .unwrap_or(false);
    match (dense, small) {
        (true, true) => {
            let (a, b) = (to_i128(a), to_i128(b));
            let mut acc = vec![0i128; w1 * w2];
            for (ea, ca) in &a {
                for (eb, cb) in &b {
                    let i = ((ea.0 + eb.0 - base.0) as usize) * w2 + (ea.1 + eb.1 - base.1) as usize;
                    acc[i] += ca * cb;
                }
            }
            collect_dense(acc.into_iter().map(|c| (c != 0).then(|| BigInt::from(c))), w2, base)
        }
        (true, false) => {
            let mut acc = vec![BigInt::zero(); w1 * w2];
            for (ea, ca) in a {
                for (eb, cb) in b {
                    let i = ((ea.0 + eb.0 - base.0) as usize) * w2 + (ea.1 + eb.1 - base.1) as usize;
                    acc[i] += ca * cb;
                }
            }
            collect_dense(acc.into_iter().map(|c| if c.is_zero() { None } else { Some(c) }), w2, base)
        }
        (false, true) => {
            let (a, b) = (to_i128(a), to_i128(b));
            let mut acc: FxHashMap<Exp, i128> = FxHashMap::default();
            acc.reserve(a.len().max(b.len()) * 4);
            for (ea, ca) in &a {
                for (eb, cb) in &b {
                    *acc.entry((ea.0 + eb.0, ea.1 + eb.1)).or_insert(0) += ca * cb;
                }
            }
            let mut out: Vec<Term> =
                acc.into_iter().filter(|(_, c)| *c != 0).map(|(e, c)| (e, BigInt::from(c))).collect();
            out.sort_unstable_by_key(|t| t.0);
            out
        }
        (false, false) => {
            let mut acc: FxHashMap<Exp, BigInt> = FxHashMap::default();
            for (ea, ca) in a {
                for (eb, cb) in b {
                    *acc.entry((ea.0 + eb.0, ea.1 + eb.1)).or_default() += ca * cb;
                }
            }
            let mut out: Vec<Term> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            out.sort_unstable_by_key(|t| t.0);
            out
        }
    }
}

fn collect_dense(cells: impl Iterator<Item = Option<BigInt>>, w2: usize, base: Exp) -> Vec<Term> {
    cells
        .enumerate()
        .filter_map(|(i, c)| {
            c.map(|c| (((i / w2) as i32 + base.0, (i % w2) as i32 + base.1), c))
        })
        .collect()
}

fn mul_term(t: &[Term], m: &Term) -> Vec<Term> {
    let ((d1, d2), k) = m;
    t.iter().map(|((a, b), c)| ((a + d1, b + d2), c * k)).collect()
}

/// Exact quotient `a / b` over the integers, or `None` when `b` does not
/// divide `a` in the Laurent ring with an integral quotient.
pub(crate) fn div_exact(a: &[Term], b: &[Term]) -> Option<Vec<Term>> {
    assert!(!b.is_empty(), "division by zero polynomial");
    if a.is_empty() {
        return Some(Vec::new());
    }
    if b.len() == 1 {
        let ((d1, d2), k) = &b[0];
        let mut out = Vec::with_capacity(a.len());
        for ((e1, e2), c) in a {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            out.push(((e1 - d1, e2 - d2), q));
        }
        return Some(out);
    }
    let ba = Bounds::of(a);
    let bb = Bounds::of(b);
    if ba.span1() < bb.span1() || ba.span2() < bb.span2() {
        return None;
    }
    let cells = ba.span1().checked_mul(ba.span2());
    match cells {
        Some(c) if c <= DENSE_CELL_LIMIT => {
            if let Some(r) = div_dense_i128(a, b, &ba, &bb) {
                return r;
            }
            div_dense_big(a, b, &ba, &bb)
        }
        _ => div_heap(a, b, &ba, &bb),
    }
}

struct DenseLayout {
    w: usize,
    lead: (usize, usize),
    q_span2: usize,
    q_base: Exp,
}

impl DenseLayout {
    fn new(ba: &Bounds, bb: &Bounds, b: &[Term]) -> DenseLayout {
        let lead = b.last().unwrap().0;
        DenseLayout {
            w: ba.span2(),
            lead: ((lead.0 - bb.min1) as usize, (lead.1 - bb.min2) as usize),
            q_span2: ba.span2() - bb.span2(),
            q_base: (ba.min1 - bb.min1, ba.min2 - bb.min2),
        }
    }

    /// Quotient offset for the remainder cell `pos`, if it lies in the quotient box.
    fn quotient_cell(&self, pos: usize) -> Option<(usize, usize)> {
        let (p1, p2) = (pos / self.w, pos % self.w);
        if p1 < self.lead.0 || p2 < self.lead.1 {
            return None;
        }
        let q2 = p2 - self.lead.1;
        if q2 > self.q_span2 {
            return None;
        }
        Some((p1 - self.lead.0, q2))
    }
}

fn div_dense_i128(a: &[Term], b: &[Term], ba: &Bounds, bb: &Bounds) -> Option<Option<Vec<Term>>> {
    if max_bits(a) > 120 || max_bits(b) > 120 {
        return None;
    }
    let lay = DenseLayout::new(ba, bb, b);
    let w = lay.w;
    let mut rem = vec![0i128; ba.span1() * w];
    for ((e1, e2), c) in a {
        rem[(e1 - ba.min1) as usize * w + (e2 - ba.min2) as usize] = c.to_i128()?;
    }
    let bterms: Vec<(usize, i128)> = b
        .iter()
        .map(|((e1, e2), c)| ((e1 - bb.min1) as usize * w + (e2 - bb.min2) as usize, c.to_i128().unwrap()))
        .collect();
    let (lead_off, lc) = *bterms.last().unwrap();
    let mut q: Vec<Term> = Vec::new();
    for pos in (0..rem.len()).rev() {
        let c = rem[pos];
        if c == 0 {
            continue;
        }
        let Some((q1, q2)) = lay.quotient_cell(pos) else {
            return Some(None);
        };
        if c % lc != 0 {
            return Some(None);
        }
        let qc = c / lc;
        let qoff = q1 * w + q2;
        debug_assert_eq!(qoff + lead_off, pos);
        for (off, bc) in &bterms {
            let cell = &mut rem[qoff + off];
            let prod = qc.checked_mul(*bc)?;
            *cell = cell.checked_sub(prod)?;
        }
        q.push(((q1 as i32 + lay.q_base.0, q2 as i32 + lay.q_base.1), BigInt::from(qc)));
    }
    q.reverse();
    Some(Some(q))
}

fn div_dense_big(a: &[Term], b: &[Term], ba: &Bounds, bb: &Bounds) -> Option<Vec<Term>> {
    let lay = DenseLayout::new(ba, bb, b);
    let w = lay.w;
    let mut rem = vec![BigInt::zero(); ba.span1() * w];
    for ((e1, e2), c) in a {
        rem[(e1 - ba.min1) as usize * w + (e2 - ba.min2) as usize] = c.clone();
    }
    let bterms: Vec<(usize, &BigInt)> = b
        .iter()
        .map(|((e1, e2), c)| ((e1 - bb.min1) as usize * w + (e2 - bb.min2) as usize, c))
        .collect();
    let lc = bterms.last().unwrap().1;
    let mut q: Vec<Term> = Vec::new();
    for pos in (0..rem.len()).rev() {
        if rem[pos].is_zero() {
            continue;
        }
        let (q1, q2) = lay.quotient_cell(pos)?;
        let (qc, r) = rem[pos].div_rem(lc);
        if !r.is_zero() {
            return None;
        }
        let qoff = q1 * w + q2;
        for (off, bc) in &bterms {
            rem[qoff + off] -= &qc * *bc;
        }
        q.push(((q1 as i32 + lay.q_base.0, q2 as i32 + lay.q_base.1), qc));
    }
    q.reverse();
    Some(q)
}

/// Sparse division driven by a heap of pending products (descending order).
fn div_heap(a: &[Term], b: &[Term], ba: &Bounds, bb: &Bounds) -> Option<Vec<Term>> {
    let (lead, lc) = b.last().unwrap();
    let qmin = (ba.min1 - bb.min1, ba.min2 - bb.min2);
    let qmax = (ba.max1 - bb.max1, ba.max2 - bb.max2);
    let mut q: Vec<Term> = Vec::new();
    let mut heap: BinaryHeap<(Exp, Reverse<usize>, usize)> = BinaryHeap::new();
    let mut ai = a.len();
    let nb = b.len();
    loop {
        let from_a = if ai > 0 { Some(a[ai - 1].0) } else { None };
        let from_h = heap.peek().map(|h| h.0);
        let e = match (from_a, from_h) {
            (None, None) => break,
            (Some(x), None) | (None, Some(x)) => x,
            (Some(x), Some(y)) => x.max(y),
        };
        let mut c = BigInt::zero();
        if from_a == Some(e) {
            c = a[ai - 1].1.clone();
            ai -= 1;
        }
        while heap.peek().map(|h| h.0) == Some(e) {
            let (_, Reverse(i), j) = heap.pop().unwrap();
            c -= &b[i].1 * &q[j].1;
            if i > 0 {
                let be = b[i - 1].0;
                let qe = q[j].0;
                heap.push(((be.0 + qe.0, be.1 + qe.1), Reverse(i - 1), j));
            }
        }
        if c.is_zero() {
            continue;
        }
        let qe = (e.0 - lead.0, e.1 - lead.1);
        if qe.0 < qmin.0 || qe.1 < qmin.1 || qe.0 > qmax.0 || qe.1 > qmax.1 {
            return None;
        }
        let (qc, r) = c.div_rem(lc);
        if !r.is_zero() {
            return None;
        }
        q.push((qe, qc));
        let j = q.len() - 1;
        if nb >= 2 {
            let be = b[nb - 2].0;
            heap.push(((be.0 + qe.0, be.1 + qe.1), Reverse(nb - 2), j));
        }
    }
    q.reverse();
    Some(q)
}

pub(crate) fn is_sorted_nonzero(t: &[Term]) -> bool {
    t.windows(2).all(|w| w[0].0 < w[1].0) && t.iter().all(|(_, c)| !c.is_zero())
}

pub(crate) fn negate(t: &[Term]) -> Vec<Term> {
    t.iter().map(|(e, c)| (*e, -c)).collect()
}

pub(crate) fn abs_max(t: &[Term]) -> BigInt {
    t.iter().map(|(_, c)| c.abs()).max().unwrap_or_default()
}

/// Sorts, merges equal exponents and drops zeros.
pub(crate) fn collect_sorted(mut t: Vec<Term>) -> Vec<Term> {
    if is_sorted_nonzero(&t) {
        return t;
    }
    t.sort_by_key(|x| x.0);
    let mut out: Vec<Term> = Vec::with_capacity(t.len());
    for (e, c) in t {
        match out.last_mut() {
            Some((le, lc)) if *le == e => *lc += c,
            _ => out.push((e, c)),
        }
    }
    out.retain(|x| !x.1.is_zero());
    out
}
