//! Argument resolution: inline expressions, `@file` contents and
//! `fixture:NAME` references.

use diffop_core::diagonal::TrivariateRational;
use diffop_core::fixtures::{self, Payload};
use diffop_core::tower::{parse_decomposition, Decomposition};
use diffop_core::{DiffOperator, Error, Poly, Result, UnivariateSeries};
use std::collections::BTreeMap;

pub fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {}", path, e)))
}

/// Text of an argument: `@path` reads the file, anything else is literal.
pub fn text(spec: &str) -> Result<String> {
    match spec.strip_prefix('@') {
        Some(path) => read_file(path),
        None => Ok(spec.to_string()),
    }
}

fn fixture(spec: &str) -> Option<Result<Payload>> {
    spec.strip_prefix("fixture:").map(|name| fixtures::load(name).map(|f| f.payload))
}

pub fn operator(spec: &str) -> Result<DiffOperator> {
    if let Some(p) = fixture(spec) {
        return match p? {
            Payload::Operator(l) => Ok(l),
            _ => Err(Error::InvalidInput(format!("{} is not an operator", spec))),
        };
    }
    DiffOperator::parse(text(spec)?.trim())
}

pub fn poly(spec: &str) -> Result<Poly> {
    if let Some(p) = fixture(spec) {
        return match p? {
            Payload::Polynomial(p) => Ok(p),
            _ => Err(Error::InvalidInput(format!("{} is not a polynomial", spec))),
        };
    }
    Poly::parse(text(spec)?.trim())
}

pub fn trivariate(spec: &str) -> Result<TrivariateRational> {
    if let Some(p) = fixture(spec) {
        return match p? {
            Payload::Trivariate(r) => Ok(r),
            _ => Err(Error::InvalidInput(format!("{} is not a trivariate rational function", spec))),
        };
    }
    TrivariateRational::parse(text(spec)?.trim())
}

pub fn series(path: &str) -> Result<UnivariateSeries> {
    UnivariateSeries::parse(&read_file(path)?)
}

pub fn decomposition(path: &str) -> Result<Decomposition> {
    parse_decomposition(&read_file(path)?)
}

/// `key: value` pairs of a key-value document; `#` starts a comment.
pub fn key_values(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .filter_map(|line| {
            let line = line.split('#').next().unwrap();
            let (k, v) = line.split_once(':')?;
            Some((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}
