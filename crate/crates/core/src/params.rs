//! Parameter values: reading them from JSON and drawing them at random.
//!
//! A parameter file is a flat object mapping each symbol to a rational,
//! written as an integer or a string such as `"-3/2"`. Random draws are
//! `p/q` with `q ∈ 1..=9` and `p ∈ [q, 100q]`, so every value lies in
//! `[1, 100]` and is nonzero.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::laurent::Params;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20240601;

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let r = match s.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.trim().parse().ok()?;
            if q == BigInt::from(0) {
                return None;
            }
            BigRational::new(p.trim().parse().ok()?, q)
        }
        None => BigRational::from_integer(s.parse().ok()?),
    };
    Some(r)
}

/// Reads a parameter file; every symbol in `required` must be present and no
/// other key is allowed.
pub fn parse_params(text: &str, required: &[String]) -> Result<Params> {
    let raw: BTreeMap<String, serde_json::Value> =
        serde_json::from_str(text).map_err(|e| Error::InvalidParams(e.to_string()))?;
    let mut out = Params::new();
    for (k, v) in raw {
        if !required.contains(&k) {
            return Err(Error::InvalidParams(format!("unknown parameter `{k}`")));
        }
        let r = match &v {
            serde_json::Value::String(s) => parse_rational(s),
            serde_json::Value::Number(n) if n.is_i64() => {
                Some(BigRational::from_integer(n.as_i64().unwrap().into()))
            }
            _ => None,
        }
        .ok_or_else(|| {
            Error::InvalidParams(format!(
                "value of `{k}` must be an integer or a rational string, got {v}"
            ))
        })?;
        out.insert(k, r);
    }
    if let Some(missing) = required.iter().find(|s| !out.contains_key(*s)) {
        return Err(Error::MissingParameter(missing.clone()));
    }
    Ok(out)
}

pub fn params_to_json(params: &Params) -> serde_json::Value {
    serde_json::Value::Object(
        params
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.to_string())))
            .collect(),
    )
}

/// Independent seed for sub-task `tag` of a run seeded with `seed`.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(tag);
    rng.gen()
}

pub fn random_params(symbols: &[String], seed: u64) -> Params {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    symbols
        .iter()
        .map(|s| {
            let q: i64 = rng.gen_range(1..=9);
            let p: i64 = rng.gen_range(q..=100 * q);
            (s.clone(), BigRational::new(p.into(), q.into()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn syms(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn parses_integers_and_fractions() {
        let p = parse_params(r#"{"a": 2, "b": "-3/4"}"#, &syms(&["a", "b"])).unwrap();
        assert_eq!(p["a"], BigRational::from_integer(2.into()));
        assert_eq!(p["b"], BigRational::new((-3).into(), 4.into()));
    }

    #[test]
    fn rejects_bad_files() {
        let s = syms(&["a", "b"]);
        assert!(
            matches!(parse_params(r#"{"a": 1}"#, &s), Err(Error::MissingParameter(m)) if m == "b")
        );
        assert!(matches!(
            parse_params(r#"{"a": 1, "b": 1, "c": 1}"#, &s),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            parse_params(r#"{"a": 1.5, "b": 1}"#, &s),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            parse_params(r#"{"a": "1/0", "b": 1}"#, &s),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn random_draws_are_reproducible_and_in_range() {
        let s = syms(&["a", "b", "c"]);
        assert_eq!(random_params(&s, 7), random_params(&s, 7));
        assert_ne!(derive_seed(7, 0), derive_seed(7, 1));
        let one = BigRational::from_integer(1.into());
        let hundred = BigRational::from_integer(100.into());
        for seed in 0..50 {
            for v in random_params(&s, seed).values() {
                assert!(*v >= one && *v <= hundred);
            }
        }
    }
}
