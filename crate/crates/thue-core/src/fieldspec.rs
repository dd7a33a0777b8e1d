//! File presentation of a field and its unit system.
//!
//! Layout, with the unit block optional:
//!
//! ```json
//! {
//!   "min_poly": [1, -16, 130, 16, 1],
//!   "irreducibility": "verified",
//!   "fundamental_units": [["4", "2", "1/2", "0"]],
//!   "torsion_generator": ["-1", "0", "0", "0"],
//!   "torsion_order": 2,
//!   "regulator": "4.882514851667388"
//! }
//! ```
//!
//! `min_poly` is leading-first with positive leading coefficient; entries
//! may be JSON integers or decimal strings (for values outside the safe
//! f64 range). Element coordinates are ascending power-basis rationals as
//! `"p/q"` strings (bare integers also accepted). `regulator` is a claim
//! checked against the computed value, not an input to computation.

use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::algnum::{Irreducibility, NumberField};
use crate::error::{Error, Result};
use crate::forms::BinaryForm;
use crate::poly::ZPoly;
use crate::units::UnitBasis;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpecFile {
    /// Leading-first integer coefficients of the defining polynomial.
    pub min_poly: Vec<BigInt>,
    /// The author's claim, `"verified"` or `"asserted"`. A `"verified"`
    /// claim must be reproducible by a small-prime witness at load time.
    pub irreducibility: String,
    /// Power-basis coordinates of the fundamental units, ascending.
    pub fundamental_units: Option<Vec<Vec<BigRational>>>,
    pub torsion_generator: Option<Vec<BigRational>>,
    pub torsion_order: Option<u32>,
    /// Claimed regulator as a decimal string.
    pub regulator: Option<String>,
}

fn field_err(field: &str, msg: &str) -> Error {
    Error::validation(&format!("field `{field}`: {msg}"))
}

/// Parses `"p/q"`, `"p"`, or a JSON integer into an exact rational.
pub fn parse_rational(v: &Value, field: &str) -> Result<BigRational> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(BigInt::from(i)))
            .ok_or_else(|| field_err(field, "number is not an exact integer")),
        Value::String(s) => {
            let (num, den) = match s.split_once('/') {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (s.trim(), "1"),
            };
            let n = BigInt::from_str(num)
                .map_err(|_| field_err(field, &format!("cannot parse \"{s}\" as a rational")))?;
            let d = BigInt::from_str(den)
                .map_err(|_| field_err(field, &format!("cannot parse \"{s}\" as a rational")))?;
            if d.is_zero() {
                return Err(field_err(field, &format!("zero denominator in \"{s}\"")));
            }
            Ok(BigRational::new(n, d))
        }
        _ => Err(field_err(field, "expected a number or a \"p/q\" string")),
    }
}

fn parse_integer(v: &Value, field: &str) -> Result<BigInt> {
    let q = parse_rational(v, field)?;
    if !q.denom().is_one() {
        return Err(field_err(field, "expected an integer"));
    }
    Ok(q.numer().clone())
}

fn parse_rational_vec(v: &Value, field: &str) -> Result<Vec<BigRational>> {
    v.as_array()
        .ok_or_else(|| field_err(field, "expected an array"))?
        .iter()
        .map(|x| parse_rational(x, field))
        .collect()
}

pub(crate) fn rational_value(q: &BigRational) -> Value {
    // Ratio's Display already prints "p" or "p/q" in lowest terms.
    Value::String(q.to_string())
}

pub(crate) fn integer_value(n: &BigInt) -> Value {
    match i64::try_from(n.clone()) {
        Ok(i) => json!(i),
        Err(_) => Value::String(n.to_string()),
    }
}

impl FieldSpecFile {
    pub fn parse(text: &str) -> Result<FieldSpecFile> {
        let root: Value = serde_json::from_str(text)
            .map_err(|e| Error::validation(&format!("malformed JSON: {e}")))?;
        let obj = root
            .as_object()
            .ok_or_else(|| Error::validation("top level must be a JSON object"))?;

        let min_poly: Vec<BigInt> = obj
            .get("min_poly")
            .ok_or_else(|| field_err("min_poly", "missing"))?
            .as_array()
            .ok_or_else(|| field_err("min_poly", "expected an array"))?
            .iter()
            .map(|v| parse_integer(v, "min_poly"))
            .collect::<Result<_>>()?;
        if min_poly.first().map(|a0| a0.sign()) != Some(num_bigint::Sign::Plus) {
            return Err(field_err("min_poly", "leading coefficient must be positive"));
        }

        let irreducibility = match obj.get("irreducibility") {
            None => "asserted".to_string(),
            Some(Value::String(s)) if s == "verified" || s == "asserted" => s.clone(),
            Some(_) => {
                return Err(field_err(
                    "irreducibility",
                    "expected \"verified\" or \"asserted\"",
                ))
            }
        };

        let fundamental_units = match obj.get("fundamental_units") {
            None => None,
            Some(v) => Some(
                v.as_array()
                    .ok_or_else(|| field_err("fundamental_units", "expected an array"))?
                    .iter()
                    .map(|u| parse_rational_vec(u, "fundamental_units"))
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        let torsion_generator = match obj.get("torsion_generator") {
            None => None,
            Some(v) => Some(parse_rational_vec(v, "torsion_generator")?),
        };
        let torsion_order = match obj.get("torsion_order") {
            None => None,
            Some(v) => {
                let n = parse_integer(v, "torsion_order")?;
                let w = u32::try_from(n)
                    .map_err(|_| field_err("torsion_order", "out of range"))?;
                if w < 2 {
                    return Err(field_err("torsion_order", "must be at least 2"));
                }
                Some(w)
            }
        };
        let regulator = match obj.get("regulator") {
            None => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(Value::Number(n)) => Some(n.to_string()),
            Some(_) => return Err(field_err("regulator", "expected a decimal string")),
        };

        if fundamental_units.is_some() || torsion_generator.is_some() || torsion_order.is_some() {
            if fundamental_units.is_none() || torsion_generator.is_none() || torsion_order.is_none()
            {
                return Err(Error::validation(
                    "unit block must provide fundamental_units, torsion_generator and torsion_order together",
                ));
            }
        }

        Ok(FieldSpecFile {
            min_poly,
            irreducibility,
            fundamental_units,
            torsion_generator,
            torsion_order,
            regulator,
        })
    }

    pub fn load(path: &Path) -> Result<FieldSpecFile> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::validation(&format!("cannot read {}: {e}", path.display()))
        })?;
        FieldSpecFile::parse(&text)
    }

    /// Canonical JSON: sorted keys, rationals in lowest terms, integers
    /// as numbers when they fit.
    pub fn to_json(&self) -> String {
        let mut obj = Map::new();
        obj.insert(
            "min_poly".into(),
            Value::Array(self.min_poly.iter().map(integer_value).collect()),
        );
        obj.insert("irreducibility".into(), json!(self.irreducibility));
        if let Some(units) = &self.fundamental_units {
            obj.insert(
                "fundamental_units".into(),
                Value::Array(
                    units
                        .iter()
                        .map(|u| Value::Array(u.iter().map(rational_value).collect()))
                        .collect(),
                ),
            );
        }
        if let Some(t) = &self.torsion_generator {
            obj.insert(
                "torsion_generator".into(),
                Value::Array(t.iter().map(rational_value).collect()),
            );
        }
        if let Some(w) = self.torsion_order {
            obj.insert("torsion_order".into(), json!(w));
        }
        if let Some(r) = &self.regulator {
            obj.insert("regulator".into(), json!(r));
        }
        serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable")
    }

    /// Builds the field and cross-checks the irreducibility claim: a
    /// `"verified"` claim with no reproducible witness is rejected.
    pub fn field(&self) -> Result<NumberField> {
        let k = NumberField::new(ZPoly::new(self.min_poly.clone()))?;
        if self.irreducibility == "verified"
            && !matches!(k.irreducibility(), Irreducibility::Verified { .. })
        {
            return Err(Error::validation(
                "irreducibility claimed as verified but no small-prime witness reproduces it",
            ));
        }
        Ok(k)
    }

    /// Assembles the unit block when present.
    pub fn unit_basis(&self, k: &NumberField) -> Result<Option<UnitBasis>> {
        let (units, torsion, order) = match (
            &self.fundamental_units,
            &self.torsion_generator,
            self.torsion_order,
        ) {
            (Some(u), Some(t), Some(w)) => (u, t, w),
            _ => return Ok(None),
        };
        let units = units
            .iter()
            .map(|coords| k.element(coords.clone()))
            .collect::<Result<Vec<_>>>()?;
        let torsion = k.element(torsion.clone())?;
        Ok(Some(UnitBasis {
            units,
            torsion,
            torsion_order: order,
        }))
    }

    /// The regulator claim as a float, if present.
    pub fn regulator_claim(&self) -> Result<Option<f64>> {
        match &self.regulator {
            None => Ok(None),
            Some(s) => {
                let v = f64::from_str(s.trim())
                    .map_err(|_| field_err("regulator", "cannot parse decimal string"))?;
                if !v.is_finite() || v <= 0.0 {
                    return Err(field_err("regulator", "must be positive and finite"));
                }
                Ok(Some(v))
            }
        }
    }
}

/// The quartic family field as a spec file, regulator computed on the
/// spot.
pub fn stender_spec(p: &crate::stender::StenderParams, bits: u32) -> Result<FieldSpecFile> {
    let k = p.theta_field()?;
    let emb = crate::embeddings::compute_embeddings(&k, bits)?;
    let basis = p.unit_basis(&k)?;
    let data = crate::units::validate_units(&k, &emb, &basis)?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let d2 = BigRational::from_integer(BigInt::from(p.d() as i64) * BigInt::from(p.d() as i64));
    let dd = BigRational::from_integer(BigInt::from(p.d() as i64));
    Ok(FieldSpecFile {
        min_poly: k.min_poly().coeffs().to_vec(),
        irreducibility: match k.irreducibility() {
            Irreducibility::Verified { .. } => "verified".into(),
            Irreducibility::Asserted => "asserted".into(),
        },
        fundamental_units: Some(vec![vec![
            d2,
            dd,
            half,
            BigRational::zero(),
        ]]),
        torsion_generator: Some(vec![
            -BigRational::one(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ]),
        torsion_order: Some(2),
        regulator: Some(format!("{}", data.regulator.midpoint_f64())),
    })
}

/// Parses `{"coefficients": [a_0, ..., a_d]}`, leading-first.
pub fn parse_form(text: &str) -> Result<BinaryForm> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| Error::validation(&format!("malformed JSON: {e}")))?;
    let coeffs = root
        .get("coefficients")
        .ok_or_else(|| field_err("coefficients", "missing"))?
        .as_array()
        .ok_or_else(|| field_err("coefficients", "expected an array"))?
        .iter()
        .map(|v| parse_integer(v, "coefficients"))
        .collect::<Result<Vec<_>>>()?;
    BinaryForm::new(coeffs)
}

pub fn form_to_json(form: &BinaryForm) -> String {
    let mut obj = Map::new();
    obj.insert(
        "coefficients".into(),
        Value::Array(form.coeffs().iter().map(integer_value).collect()),
    );
    serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable")
}
