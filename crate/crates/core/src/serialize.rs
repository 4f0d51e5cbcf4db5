//! JSON and text encodings for polynomials, rational functions and operators.
//!
//! A polynomial is `{"vars":["t","M"],"terms":[[e1,e2,"a/b"],...]}`, a
//! rational function is `{"num":...,"den":...}`, and a normalized operator is
//! `{"L_terms":[[i, poly],...]}`.

use std::collections::BTreeMap;

use serde::de::{DeserializeOwned, Error as _};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact_poly::{parse_poly, BigRat, MultiPoly, RatFun, Var, Vars};
use crate::qtorus::NormalizedOperator;

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    vars: [Var; 2],
    terms: Vec<(i32, i32, String)>,
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let v = self.vars();
        PolyRepr { vars: [v.0, v.1], terms: self.terms().map(|((a, b), c)| (a, b, c.to_string())).collect() }
            .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<MultiPoly, D::Error> {
        let repr = PolyRepr::deserialize(de)?;
        if repr.vars[0] == repr.vars[1] {
            return Err(D::Error::custom("repeated variable"));
        }
        let vars = Vars(repr.vars[0], repr.vars[1]);
        let mut seen = std::collections::HashSet::new();
        let mut terms = Vec::with_capacity(repr.terms.len());
        for (a, b, c) in repr.terms {
            if !seen.insert((a, b)) {
                return Err(D::Error::custom(format!("repeated exponent ({a}, {b})")));
            }
            let q: BigRat = c.trim().parse().map_err(|_| D::Error::custom(format!("bad coefficient {c:?}")))?;
            terms.push(((a, b), q));
        }
        Ok(MultiPoly::from_terms(vars, terms))
    }
}

#[derive(Serialize, Deserialize)]
struct RatRepr {
    num: MultiPoly,
    den: MultiPoly,
}

impl Serialize for RatFun {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        RatRepr { num: self.num().clone(), den: self.den().clone() }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for RatFun {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<RatFun, D::Error> {
        let r = RatRepr::deserialize(de)?;
        RatFun::new(r.num, r.den).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct OpRepr {
    #[serde(rename = "L_terms")]
    l_terms: Vec<(u32, MultiPoly)>,
}

impl Serialize for NormalizedOperator {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        OpRepr { l_terms: self.coeffs().map(|(i, c)| (i, c.clone())).collect() }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for NormalizedOperator {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<NormalizedOperator, D::Error> {
        let r = OpRepr::deserialize(de)?;
        operator_from_terms(r.l_terms).map_err(D::Error::custom)
    }
}

fn operator_from_terms(terms: Vec<(u32, MultiPoly)>) -> Result<NormalizedOperator> {
    let mut map = BTreeMap::new();
    for (i, c) in terms {
        if c.vars() != Vars::TM {
            return Err(Error::Usage("operator coefficients must be polynomials in (t, M)".into()));
        }
        if map.insert(i, c).is_some() {
            return Err(Error::Usage(format!("repeated power L^{i}")));
        }
    }
    if map.is_empty() {
        return Err(Error::Usage("empty operator".into()));
    }
    NormalizedOperator::from_normalized_parts(map)
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Parse { pos: e.column(), msg: e.to_string() }
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable value")
}

pub fn to_json_pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable value")
}

pub fn from_json<T: DeserializeOwned>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(json_err)
}

/// Parses the text form `(c_0)*L^0 + (c_1)*L^1 + ...` of a normalized operator.
pub fn parse_operator(src: &str) -> Result<NormalizedOperator> {
    let bytes = src.as_bytes();
    let mut terms = Vec::new();
    let mut pos = 0;
    let skip_ws = |p: &mut usize| {
        while *p < bytes.len() && bytes[*p].is_ascii_whitespace() {
            *p += 1;
        }
    };
    loop {
        skip_ws(&mut pos);
        if bytes.get(pos) != Some(&b'(') {
            return Err(Error::Parse { pos, msg: "expected (".into() });
        }
        let start = pos + 1;
        let mut depth = 1;
        pos = start;
        while pos < bytes.len() && depth > 0 {
            match bytes[pos] {
                b'(' => depth += 1,
                b')' => depth -= 1,
                _ => {}
            }
            pos += 1;
        }
        if depth != 0 {
            return Err(Error::Parse { pos, msg: "unbalanced parentheses".into() });
        }
        let coeff = parse_poly(&src[start..pos - 1], Vars::TM).map_err(|e| match e {
            Error::Parse { pos: p, msg } => Error::Parse { pos: start + p, msg },
            other => other,
        })?;
        let rest = &src[pos..];
        let trimmed = rest.trim_start();
        pos += rest.len() - trimmed.len();
        let tail = trimmed
            .strip_prefix("*L^")
            .ok_or_else(|| Error::Parse { pos, msg: "expected *L^".into() })?;
        pos += 3;
        let digits = tail.bytes().take_while(u8::is_ascii_digit).count();
        let i: u32 = tail[..digits].parse().map_err(|_| Error::Parse { pos, msg: "expected exponent".into() })?;
        pos += digits;
        terms.push((i, coeff));
        skip_ws(&mut pos);
        match bytes.get(pos) {
            None => break,
            Some(b'+') => pos += 1,
            Some(_) => return Err(Error::Parse { pos, msg: "expected +".into() }),
        }
    }
    operator_from_terms(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtorus::{normalize, SkewOperator};

    #[test]
    fn poly_json_shape() {
        let p = parse_poly("1/2*t^-3*M + 5", Vars::TM).unwrap();
        assert_eq!(to_json(&p), r#"{"vars":["t","M"],"terms":[[-3,1,"1/2"],[0,0,"5"]]}"#);
        assert_eq!(from_json::<MultiPoly>(&to_json(&p)).unwrap(), p);
        assert!(from_json::<MultiPoly>(r#"{"vars":["t","M"],"terms":[[0,0,"x"]]}"#).is_err());
        assert!(from_json::<MultiPoly>(r#"{"vars":["t","t"],"terms":[]}"#).is_err());
        assert!(from_json::<MultiPoly>(r#"{"vars":["t","M"],"terms":[[0,0,"1"],[0,0,"2"]]}"#).is_err());
    }

    #[test]
    fn operator_round_trip() {
        let op = SkewOperator::from_polys([
            (0, parse_poly("t^2*M - 3", Vars::TM).unwrap()),
            (2, parse_poly("M^2 + t^-4", Vars::TM).unwrap()),
        ]);
        let n = normalize(&op).unwrap();
        let json = to_json(&n);
        assert!(json.starts_with(r#"{"L_terms":[[0,"#));
        assert_eq!(from_json::<NormalizedOperator>(&json).unwrap(), n);
        assert_eq!(parse_operator(&n.to_string()).unwrap(), n);
        assert!(parse_operator("(t)*L^1 + (2*t)*L^0").is_err());
        assert!(parse_operator("(t*L^1").is_err());
    }
}
