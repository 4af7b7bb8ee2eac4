//! JSON codec for polynomials.
//!
//! ```json
//! { "nvars": 2, "domain": "rational", "terms": [[[2, 0], "1/1"], [[0, 0], "-1/1"]] }
//! ```
//!
//! Rational coefficients are `"num/den"` strings, Q(√3) coefficients are
//! `["num/den", "num/den"]` pairs and floats are JSON numbers.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::coeff::Coeff;
use crate::error::{AlgebraError, Result};
use crate::mpoly::{Exponents, MPoly};
use crate::qsqrt3::QSqrt3;
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyDoc {
    pub nvars: usize,
    pub domain: String,
    pub terms: Vec<(Vec<u32>, Value)>,
}

/// A polynomial whose coefficient domain is only known at runtime.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyPoly {
    Rational(MPoly<Rational>),
    QSqrt3(MPoly<QSqrt3>),
    Float(MPoly<f64>),
}

/// Per-domain coefficient codec.
pub trait JsonCoeff: Coeff {
    fn encode(&self) -> Value;
    fn decode(v: &Value) -> Result<Self>;
}

impl JsonCoeff for Rational {
    fn encode(&self) -> Value {
        Value::String(format_rational(self))
    }
    fn decode(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) if n.is_i64() => Ok(crate::rational::int(n.as_i64().unwrap())),
            other => Err(AlgebraError::BadCoefficient(other.to_string())),
        }
    }
}

impl JsonCoeff for QSqrt3 {
    fn encode(&self) -> Value {
        Value::Array(vec![self.a.encode(), self.b.encode()])
    }
    fn decode(v: &Value) -> Result<Self> {
        match v {
            Value::Array(parts) if parts.len() == 2 => {
                Ok(QSqrt3::new(Rational::decode(&parts[0])?, Rational::decode(&parts[1])?))
            }
            other => Err(AlgebraError::BadCoefficient(other.to_string())),
        }
    }
}

impl JsonCoeff for f64 {
    fn encode(&self) -> Value {
        serde_json::Number::from_f64(*self).map(Value::Number).unwrap_or(Value::Null)
    }
    fn decode(v: &Value) -> Result<Self> {
        v.as_f64().ok_or_else(|| AlgebraError::BadCoefficient(v.to_string()))
    }
}

pub fn to_doc<C: JsonCoeff>(p: &MPoly<C>) -> PolyDoc {
    PolyDoc {
        nvars: p.nvars(),
        domain: C::DOMAIN.to_string(),
        // Descending lex, the usual reading order.
        terms: p.terms().rev().map(|(e, c)| (e[..p.nvars()].to_vec(), c.encode())).collect(),
    }
}

pub fn from_doc<C: JsonCoeff>(doc: &PolyDoc) -> Result<MPoly<C>> {
    if doc.domain != C::DOMAIN {
        return Err(AlgebraError::DomainMismatch(format!(
            "document domain `{}` but `{}` requested",
            doc.domain,
            C::DOMAIN
        )));
    }
    if !(1..=3).contains(&doc.nvars) {
        return Err(AlgebraError::BadDocument(format!("nvars = {}", doc.nvars)));
    }
    let mut terms = Vec::with_capacity(doc.terms.len());
    for (e, c) in &doc.terms {
        if e.len() != doc.nvars {
            return Err(AlgebraError::BadDocument(format!(
                "exponent vector {:?} has length {}, expected {}",
                e,
                e.len(),
                doc.nvars
            )));
        }
        let mut exps: Exponents = [0; 3];
        exps[..e.len()].copy_from_slice(e);
        terms.push((exps, C::decode(c)?));
    }
    Ok(MPoly::from_terms(doc.nvars, terms))
}

impl AnyPoly {
    pub fn domain(&self) -> &'static str {
        match self {
            AnyPoly::Rational(_) => Rational::DOMAIN,
            AnyPoly::QSqrt3(_) => QSqrt3::DOMAIN,
            AnyPoly::Float(_) => f64::DOMAIN,
        }
    }

    pub fn to_doc(&self) -> PolyDoc {
        match self {
            AnyPoly::Rational(p) => to_doc(p),
            AnyPoly::QSqrt3(p) => to_doc(p),
            AnyPoly::Float(p) => to_doc(p),
        }
    }

    pub fn from_doc(doc: &PolyDoc) -> Result<Self> {
        match doc.domain.as_str() {
            "rational" => Ok(AnyPoly::Rational(from_doc(doc)?)),
            "qsqrt3" => Ok(AnyPoly::QSqrt3(from_doc(doc)?)),
            "float" => Ok(AnyPoly::Float(from_doc(doc)?)),
            other => Err(AlgebraError::BadDocument(format!("unknown domain `{other}`"))),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: PolyDoc = serde_json::from_str(s).map_err(|e| AlgebraError::BadDocument(e.to_string()))?;
        Self::from_doc(&doc)
    }

    pub fn to_float(&self) -> MPoly<f64> {
        match self {
            AnyPoly::Rational(p) => p.to_float(),
            AnyPoly::QSqrt3(p) => p.to_float(),
            AnyPoly::Float(p) => p.clone(),
        }
    }

    pub fn add(&self, other: &AnyPoly) -> Result<AnyPoly> {
        match (self, other) {
            (AnyPoly::Rational(a), AnyPoly::Rational(b)) => Ok(AnyPoly::Rational(a.checked_add(b)?)),
            (AnyPoly::QSqrt3(a), AnyPoly::QSqrt3(b)) => Ok(AnyPoly::QSqrt3(a.checked_add(b)?)),
            (AnyPoly::Float(a), AnyPoly::Float(b)) => Ok(AnyPoly::Float(a.checked_add(b)?)),
            (a, b) => Err(mismatch(a, b)),
        }
    }

    pub fn mul(&self, other: &AnyPoly) -> Result<AnyPoly> {
        match (self, other) {
            (AnyPoly::Rational(a), AnyPoly::Rational(b)) => Ok(AnyPoly::Rational(a.checked_mul(b)?)),
            (AnyPoly::QSqrt3(a), AnyPoly::QSqrt3(b)) => Ok(AnyPoly::QSqrt3(a.checked_mul(b)?)),
            (AnyPoly::Float(a), AnyPoly::Float(b)) => Ok(AnyPoly::Float(a.checked_mul(b)?)),
            (a, b) => Err(mismatch(a, b)),
        }
    }
}

fn mismatch(a: &AnyPoly, b: &AnyPoly) -> AlgebraError {
    AlgebraError::DomainMismatch(format!("{} vs {}", a.domain(), b.domain()))
}
