//! JSON persistence. Matrix encoding: `{"n": int, "entries": [[re, im], ...]}`
//! row-major (square only); the exact backend writes re/im as rational
//! strings "p/q", the float backend as JSON numbers. Pairs are
//! `{"P": Matrix, "Q": Matrix}` and spectral data
//! `{"lambdas": [[re, im], ...], "alphas": [[re, im], ...]}`.

use crate::cm::{CMPair, SpectralData};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Real;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Map, Value};
use std::str::FromStr;

/// Backend-specific scalar <-> JSON conversion.
pub trait JsonScalar: Real {
    fn to_json(v: &Self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

impl JsonScalar for f64 {
    fn to_json(v: &Self) -> Value {
        json!(v)
    }

    fn from_json(v: &Value) -> Result<Self> {
        v.as_f64()
            .ok_or_else(|| Error::InvalidInput(format!("expected a number, got {v}")))
    }
}

impl JsonScalar for BigRational {
    fn to_json(v: &Self) -> Value {
        Value::String(v.to_string())
    }

    fn from_json(v: &Value) -> Result<Self> {
        let s = v
            .as_str()
            .ok_or_else(|| Error::InvalidInput(format!("expected a \"p/q\" string, got {v}")))?;
        BigRational::from_str(s)
            .map_err(|e| Error::InvalidInput(format!("bad rational {s:?}: {e}")))
    }
}

fn complex_to_json<T: JsonScalar>(v: &Complex<T>) -> Value {
    Value::Array(vec![T::to_json(&v.re), T::to_json(&v.im)])
}

fn complex_from_json<T: JsonScalar>(v: &Value) -> Result<Complex<T>> {
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::InvalidInput(format!("expected [re, im], got {v}")))?;
    Ok(Complex::new(
        T::from_json(&pair[0])?,
        T::from_json(&pair[1])?,
    ))
}

pub fn matrix_to_json<T: JsonScalar>(m: &Matrix<T>) -> Result<Value> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(json!({
        "n": m.rows(),
        "entries": m.entries().iter().map(complex_to_json).collect::<Vec<_>>(),
    }))
}

pub fn matrix_from_json<T: JsonScalar>(v: &Value) -> Result<Matrix<T>> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::InvalidInput("matrix JSON must be an object".into()))?;
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::InvalidInput("matrix JSON missing integer \"n\"".into()))?
        as usize;
    let entries = obj
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::InvalidInput("matrix JSON missing \"entries\" array".into()))?;
    if entries.len() != n * n {
        return Err(Error::InvalidInput(format!(
            "matrix JSON has {} entries, expected {}",
            entries.len(),
            n * n
        )));
    }
    let data = entries
        .iter()
        .map(complex_from_json)
        .collect::<Result<Vec<_>>>()?;
    Matrix::new(n, n, data)
}

pub fn pair_to_json<T: JsonScalar>(pair: &CMPair<T>) -> Result<Value> {
    Ok(json!({
        "P": matrix_to_json(pair.p())?,
        "Q": matrix_to_json(pair.q())?,
    }))
}

/// Decodes a pair, re-validating the rank-one condition.
pub fn pair_from_json<T: JsonScalar>(v: &Value) -> Result<CMPair<T>> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::InvalidInput("pair JSON must be an object".into()))?;
    let get = |key: &str| -> Result<&Value> {
        obj.get(key)
            .ok_or_else(|| Error::InvalidInput(format!("pair JSON missing \"{key}\"")))
    };
    CMPair::new(matrix_from_json(get("P")?)?, matrix_from_json(get("Q")?)?)
}

fn complex_list_to_json<T: JsonScalar>(vs: &[Complex<T>]) -> Value {
    Value::Array(vs.iter().map(complex_to_json).collect())
}

fn complex_list_from_json<T: JsonScalar>(v: &Value, key: &str) -> Result<Vec<Complex<T>>> {
    v.as_array()
        .ok_or_else(|| Error::InvalidInput(format!("\"{key}\" must be an array")))?
        .iter()
        .map(complex_from_json)
        .collect()
}

pub fn spectral_to_json<T: JsonScalar>(data: &SpectralData<T>) -> Value {
    json!({
        "lambdas": complex_list_to_json(data.lambdas()),
        "alphas": complex_list_to_json(data.alphas()),
    })
}

pub fn spectral_from_json<T: JsonScalar>(v: &Value) -> Result<SpectralData<T>> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::InvalidInput("spectral JSON must be an object".into()))?;
    let get = |key: &str| -> Result<&Value> {
        obj.get(key)
            .ok_or_else(|| Error::InvalidInput(format!("spectral JSON missing \"{key}\"")))
    };
    SpectralData::new(
        complex_list_from_json(get("lambdas")?, "lambdas")?,
        complex_list_from_json(get("alphas")?, "alphas")?,
    )
}

/// Deterministic serialization: objects with sorted keys, pretty-printed.
pub fn to_string_stable(v: &Value) -> String {
    fn sort(v: &Value) -> Value {
        match v {
            Value::Object(m) => {
                let mut sorted: Vec<_> = m.iter().collect();
                sorted.sort_by(|a, b| a.0.cmp(b.0));
                Value::Object(Map::from_iter(
                    sorted.into_iter().map(|(k, val)| (k.clone(), sort(val))),
                ))
            }
            Value::Array(a) => Value::Array(a.iter().map(sort).collect()),
            other => other.clone(),
        }
    }
    let mut s = serde_json::to_string_pretty(&sort(v)).expect("value serializes");
    s.push('\n');
    s
}

/// Keeps zero denominators out of hand-written rational inputs.
pub fn validate_rational(v: &BigRational) -> Result<()> {
    if v.denom().is_zero() {
        return Err(Error::InvalidInput("rational with zero denominator".into()));
    }
    Ok(())
}
