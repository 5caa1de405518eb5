//! Built-in data: named operators, polynomials and a trivariate rational
//! function, stored as plain text under `fixtures/`.
//!
//! Payloads are compiled in. Setting `DIFFOP_FIXTURES` to a directory makes
//! [`load`] read `<dir>/<name>.txt` instead; either way the SHA-256 of the
//! text must match the pinned checksum.

use crate::diagonal::TrivariateRational;
use crate::diffop::DiffOperator;
use crate::error::{Error, Result};
use crate::qx::Poly;
use sha2::{Digest, Sha256};
use std::fmt::Write;

pub const FIXTURE_DIR_ENV: &str = "DIFFOP_FIXTURES";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Operator,
    Polynomial,
    Trivariate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Operator(DiffOperator),
    Polynomial(Poly),
    Trivariate(TrivariateRational),
}

#[derive(Clone, Debug)]
pub struct FixtureInfo {
    pub name: &'static str,
    pub kind: Kind,
    pub description: &'static str,
    pub sha256: &'static str,
    text: &'static str,
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub text: String,
    pub payload: Payload,
}

impl Fixture {
    pub fn operator(&self) -> Option<&DiffOperator> {
        match &self.payload {
            Payload::Operator(l) => Some(l),
            _ => None,
        }
    }

    pub fn polynomial(&self) -> Option<&Poly> {
        match &self.payload {
            Payload::Polynomial(p) => Some(p),
            _ => None,
        }
    }

    pub fn trivariate(&self) -> Option<&TrivariateRational> {
        match &self.payload {
            Payload::Trivariate(r) => Some(r),
            _ => None,
        }
    }
}

macro_rules! fixture {
    ($name:literal, $kind:expr, $sha:literal, $desc:literal) => {
        FixtureInfo {
            name: $name,
            kind: $kind,
            description: $desc,
            sha256: $sha,
            text: include_str!(concat!("../fixtures/", $name, ".txt")),
        }
    };
}

pub const FIXTURES: &[FixtureInfo] = &[
    fixture!(
        "E2",
        Kind::Operator,
        "c0cc3cd19c1261651eb14241c495d8d029b3dfc9f9a44e231dfb9cf8b5a450b7",
        "order-7 theta-operator with exceptional Galois group G2"
    ),
    fixture!(
        "generic",
        Kind::Trivariate,
        "aa70763461a27e89c23c732950972d692b3912f3ba3932358589f93f56929d8f",
        "1/(1 - P) with six monomials; its diagonal starts 1, 616, 947175"
    ),
    fixture!(
        "hyp3f2",
        Kind::Operator,
        "5b026e1b115c2a2280a1cb6a095156b0937c8d163cdbeea534649b348cc8c723",
        "theta-form operator of 3F2([1/3,1/3,1/3],[1,1]; 729x)"
    ),
    fixture!(
        "p10",
        Kind::Polynomial,
        "957f0c62dc8c5ab51bd7d85b327d72645aea2af1dacd0d7893591a6a1e053e34",
        "degree-10 factor of the exterior-square rational solution denominator"
    ),
    fixture!(
        "p12",
        Kind::Polynomial,
        "116993d636912733e032d631857ccbd94d296c9ca4e14221c294603736eadfe0",
        "degree-12 factor shared by the head polynomial and the exterior-square solution"
    ),
    fixture!(
        "p21",
        Kind::Polynomial,
        "c669c5e981a46f9116c3317c591d272961af69d2642515346ee0c0c44ae50769",
        "degree-21 order-0 coefficient numerator of r·P·r"
    ),
    fixture!(
        "p22",
        Kind::Polynomial,
        "9eeca832283fc7be198e46bcc3568f3ef77b5534737b1eadaa84aaafcd5b6ad3",
        "degree-22 order-1 coefficient numerator of r·P·r"
    ),
    fixture!(
        "p28",
        Kind::Polynomial,
        "b8bd0da937858cb6d9ed01bc7e1271baa0a74b4108d53956fbb759cbed5174d5",
        "degree-28 polynomial of the intertwiner decomposition"
    ),
    fixture!(
        "p43",
        Kind::Polynomial,
        "103e1119524f6c3e430c205d84b3a76a0102d6031b4fbd91b86dc44b545bb538",
        "degree-43 apparent-singularity polynomial of the order-6 head coefficient"
    ),
];

/// Named polynomials whose coefficients are not available.
pub const NOT_PRINTED: &[(&str, usize)] = &[("p81", 81), ("p123", 123), ("p93", 93), ("p164", 164), ("p70", 70), ("q70", 70)];

pub fn names() -> Vec<&'static str> {
    FIXTURES.iter().map(|f| f.name).collect()
}

pub fn info(name: &str) -> Result<&'static FixtureInfo> {
    if let Some((n, d)) = NOT_PRINTED.iter().find(|(n, _)| *n == name) {
        return Err(Error::UnknownFixture(format!("{} (degree {}) has no printed coefficients", n, d)));
    }
    FIXTURES.iter().find(|f| f.name == name).ok_or_else(|| Error::UnknownFixture(name.to_string()))
}

pub fn sha256_hex(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    let mut s = String::with_capacity(64);
    for b in digest.iter() {
        write!(s, "{:02x}", b).unwrap();
    }
    s
}

fn source_text(f: &FixtureInfo) -> Result<String> {
    match std::env::var_os(FIXTURE_DIR_ENV) {
        Some(dir) => {
            let path = std::path::Path::new(&dir).join(format!("{}.txt", f.name));
            std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {}", path.display(), e)))
        }
        None => Ok(f.text.to_string()),
    }
}

pub fn parse_payload(kind: Kind, text: &str) -> Result<Payload> {
    let body = text.trim();
    Ok(match kind {
        Kind::Operator => Payload::Operator(DiffOperator::parse(body)?),
        Kind::Polynomial => Payload::Polynomial(Poly::parse(body)?),
        Kind::Trivariate => Payload::Trivariate(TrivariateRational::parse(body)?),
    })
}

pub fn load(name: &str) -> Result<Fixture> {
    let f = info(name)?;
    let text = source_text(f)?;
    let sum = sha256_hex(&text);
    if sum != f.sha256 {
        return Err(Error::Parse(format!("fixture {}: checksum {} does not match {}", name, sum, f.sha256)));
    }
    let payload = parse_payload(f.kind, &text)?;
    Ok(Fixture { name: f.name, description: f.description, text, payload })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qx::Rational;
    use num_bigint::BigInt;

    fn int(s: &str) -> Rational {
        Rational::from_integer(s.parse::<BigInt>().unwrap())
    }

    #[test]
    fn all_embedded_checksums() {
        for f in FIXTURES {
            assert_eq!(sha256_hex(f.text), f.sha256, "{}", f.name);
            parse_payload(f.kind, f.text).unwrap();
        }
    }

    #[test]
    fn polynomial_metadata() {
        let p10 = load("p10").unwrap();
        let p = p10.polynomial().unwrap();
        assert_eq!(p.degree(), 10);
        assert_eq!(p.coeff(0), int("-1453000612770"));
        let p43 = load("p43").unwrap();
        let p = p43.polynomial().unwrap();
        assert_eq!(p.degree(), 43);
        assert_eq!(p.lc(), int("697115132002046172480720076800000"));
        for (name, deg) in [("p12", 12isize), ("p21", 21), ("p22", 22), ("p28", 28)] {
            assert_eq!(load(name).unwrap().polynomial().unwrap().degree(), deg);
        }
    }

    #[test]
    fn e2_round_trips_through_theta() {
        let f = load("E2").unwrap();
        let l = f.operator().unwrap();
        assert_eq!(l.order(), 7);
        assert_eq!(&DiffOperator::from_theta(&l.to_theta()), l);
        let terms = l.to_theta().terms().unwrap();
        assert_eq!(terms.iter().map(|t| t.0).max(), Some(2));
        assert_eq!(terms.iter().map(|t| t.0).min(), Some(0));
    }

    #[test]
    fn missing_names() {
        assert!(matches!(load("p81"), Err(Error::UnknownFixture(m)) if m.contains("no printed")));
        assert!(matches!(load("nope"), Err(Error::UnknownFixture(_))));
        assert_eq!(names().len(), FIXTURES.len());
    }
}
