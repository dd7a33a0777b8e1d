//! Command dispatch and JSON rendering for the `thue` binary.
//!
//! Every command prints a single JSON document to stdout with sorted keys
//! (compact by default, indented with `--pretty`); errors go to stderr as
//! `{"error": {"code", "message"}}`. Exit status: 0 on success, 2 on
//! invalid input, 3 when precision ran out even after the retry ladder.
//!
//! Working precision comes from `--bits`, else `THUE_PRECISION_BITS`,
//! else 128. Commands whose certification fails with precision
//! exhaustion are retried at doubled precision up to 4096 bits; other
//! errors are never retried.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::algnum::{Irreducibility, NumberField};
use crate::diophantine::{
    self, lemma3_bounds, solve_fixed_totally_imaginary, BoundReport,
    LinFormBoundProvider, MatveevProvider, SolveCaps,
};
use crate::embeddings::compute_embeddings;
use crate::error::{Error, Result};
use crate::fieldspec::{self, FieldSpecFile};
use crate::forms::twisted_form;
use crate::heights;
use crate::stender::{self, StenderParams};
use crate::units::{self, ExponentVector, UnitBasis};

const MAX_BITS: u32 = 4096;

#[derive(Parser, Debug)]
#[command(
    name = "thue",
    about = "Twisted Thue inequalities over number fields with at most one real embedding"
)]
pub struct Cli {
    /// Working precision in bits (>= 64). Defaults to THUE_PRECISION_BITS
    /// or 128.
    #[arg(long, global = true)]
    pub bits: Option<u32>,
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the field from a spec file and validate its unit block.
    FieldCheck { spec: PathBuf },
    /// Certified root enclosures and the signature (r1, r2).
    Embeddings { spec: PathBuf },
    /// Absolute logarithmic height of an element given by coordinates.
    Height {
        spec: PathBuf,
        /// Comma-separated power-basis coordinates, rationals allowed.
        #[arg(long, allow_hyphen_values = true)]
        element: String,
    },
    /// Coefficients of the twisted form for a unit exponent vector.
    Twist {
        spec: PathBuf,
        /// Comma-separated integer exponents, one per fundamental unit.
        #[arg(long, allow_hyphen_values = true)]
        exponents: String,
        /// Torsion index in [0, w).
        #[arg(long, default_value_t = 0)]
        torsion: i64,
    },
    /// The quartic family: coefficients, self-checks, solving.
    #[command(subcommand)]
    Stender(StenderCmd),
    /// Solve |F(x, y)| <= m for one totally imaginary form.
    SolveFixed {
        form: PathBuf,
        #[arg(long)]
        m: String,
        /// Also list the xy = 0 solutions.
        #[arg(long)]
        include_axes: bool,
    },
    /// Solve |F_a(x, y)| <= m across a twisted family, within caps.
    SolveFamily {
        spec: PathBuf,
        #[arg(long)]
        m: String,
        /// Cap on |x| and |y|.
        #[arg(long = "cap-xy")]
        cap_xy: i64,
        /// Cap on the unit exponents |a_i|.
        #[arg(long = "cap-a")]
        cap_a: i64,
    },
    /// The composed effective-constant chain for a family.
    Bounds {
        spec: PathBuf,
        #[arg(long)]
        m: String,
        /// "default" for the built-in linear-forms constant, or a path to
        /// a JSON file {"kappa": value} supplying a sharper one.
        #[arg(long, default_value = "default")]
        provider: String,
    },
    /// Independent exhaustive search over exponents and (x, y). No bound
    /// chain, no enumeration shortcuts; the cross-check for the solvers.
    Oracle {
        spec: PathBuf,
        #[arg(long)]
        m: String,
        #[arg(long = "cap-xy")]
        cap_xy: i64,
        #[arg(long = "cap-a")]
        cap_a: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum StenderCmd {
    /// Coefficients (a, b, c) of member n by the integer recurrences.
    Coeffs {
        #[arg(long)]
        d: u32,
        #[arg(long, allow_hyphen_values = true)]
        c: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Recurrence coefficients against the certified numeric path for
    /// |n| <= nmax.
    Verify {
        #[arg(long)]
        d: u32,
        #[arg(long, allow_hyphen_values = true)]
        c: i64,
        #[arg(long)]
        nmax: i64,
    },
    /// Solve |F_n(x, y)| <= m for |n| <= cap-n, |x|, |y| <= cap-xy.
    Solve {
        #[arg(long)]
        d: u32,
        #[arg(long, allow_hyphen_values = true)]
        c: i64,
        #[arg(long)]
        m: String,
        #[arg(long = "cap-xy")]
        cap_xy: i64,
        #[arg(long = "cap-n")]
        cap_n: i64,
    },
    /// Emit the field spec file for the family parameters.
    Spec {
        #[arg(long)]
        d: u32,
        #[arg(long, allow_hyphen_values = true)]
        c: i64,
    },
}

/// Entry point behind `main`: runs the command and returns the process
/// exit code, printing the result or the error JSON.
pub fn run(cli: Cli) -> i32 {
    let bits = match initial_bits(&cli) {
        Ok(b) => b,
        Err(e) => return report_error(&e),
    };
    match run_with_retry(&cli.command, bits) {
        Ok(doc) => {
            let text = if cli.pretty {
                serde_json::to_string_pretty(&doc).expect("serializable")
            } else {
                serde_json::to_string(&doc).expect("serializable")
            };
            println!("{text}");
            0
        }
        Err(e) => report_error(&e),
    }
}

fn report_error(e: &Error) -> i32 {
    let doc = json!({"error": {"code": e.code(), "message": format!("{e}")}});
    eprintln!("{doc}");
    e.exit_code()
}

fn initial_bits(cli: &Cli) -> Result<u32> {
    let bits = match cli.bits {
        Some(b) => b,
        None => match std::env::var("THUE_PRECISION_BITS") {
            Ok(s) => s
                .trim()
                .parse::<u32>()
                .map_err(|_| Error::validation("THUE_PRECISION_BITS must be an integer"))?,
            Err(_) => 128,
        },
    };
    if bits < 64 {
        return Err(Error::validation("precision must be at least 64 bits"));
    }
    if bits > MAX_BITS {
        return Err(Error::validation("precision must be at most 4096 bits"));
    }
    Ok(bits)
}

fn run_with_retry(cmd: &Command, bits0: u32) -> Result<Value> {
    let mut bits = bits0;
    loop {
        match execute(cmd, bits) {
            Err(Error::PrecisionExhausted { .. }) if bits < MAX_BITS => {
                bits = (bits * 2).min(MAX_BITS);
            }
            other => return other,
        }
    }
}

fn execute(cmd: &Command, bits: u32) -> Result<Value> {
    match cmd {
        Command::FieldCheck { spec } => field_check(spec, bits),
        Command::Embeddings { spec } => embeddings_cmd(spec, bits),
        Command::Height { spec, element } => height_cmd(spec, element, bits),
        Command::Twist {
            spec,
            exponents,
            torsion,
        } => twist_cmd(spec, exponents, *torsion, bits),
        Command::Stender(sc) => stender_cmd(sc, bits),
        Command::SolveFixed {
            form,
            m,
            include_axes,
        } => solve_fixed_cmd(form, m, *include_axes, bits),
        Command::SolveFamily {
            spec,
            m,
            cap_xy,
            cap_a,
        } => solve_family_cmd(spec, m, *cap_xy, *cap_a, bits),
        Command::Bounds { spec, m, provider } => bounds_cmd(spec, m, provider, bits),
        Command::Oracle {
            spec,
            m,
            cap_xy,
            cap_a,
        } => oracle_cmd(spec, m, *cap_xy, *cap_a, bits),
    }
}

fn parse_m(s: &str) -> Result<BigInt> {
    BigInt::from_str(s.trim()).map_err(|_| Error::validation("m must be a decimal integer"))
}

fn parse_exponents(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::validation(&format!("bad exponent \"{t}\"")))
        })
        .collect()
}

fn parse_element(k: &NumberField, s: &str) -> Result<crate::algnum::AlgElement> {
    let coords = s
        .split(',')
        .map(|t| fieldspec::parse_rational(&Value::String(t.trim().into()), "element"))
        .collect::<Result<Vec<BigRational>>>()?;
    k.element(coords)
}

/// Loads the spec and builds everything commands need beyond the bare
/// field; the unit block is mandatory here.
fn load_with_units(
    path: &Path,
    bits: u32,
) -> Result<(
    NumberField,
    crate::embeddings::EmbeddingSet,
    UnitBasis,
    crate::units::UnitData,
)> {
    let fs = FieldSpecFile::load(path)?;
    let k = fs.field()?;
    let emb = compute_embeddings(&k, bits)?;
    let basis = fs
        .unit_basis(&k)?
        .ok_or_else(|| Error::validation("spec file has no unit block"))?;
    let data = units::validate_units(&k, &emb, &basis)?;
    if let Some(claim) = fs.regulator_claim()? {
        units::check_regulator_claim(&data, claim)?;
    }
    Ok((k, emb, basis, data))
}

pub(crate) fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!(v.to_string())
    }
}

/// JSON rendering of (x, y) pairs, big integers as decimal strings.
pub fn pairs_value(solutions: &[(BigInt, BigInt)]) -> Value {
    Value::Array(
        solutions
            .iter()
            .map(|(x, y)| {
                Value::Array(vec![
                    fieldspec::integer_value(x),
                    fieldspec::integer_value(y),
                ])
            })
            .collect(),
    )
}

/// JSON rendering of a bound report with its dependency graph.
pub fn report_value(r: &BoundReport) -> Value {
    let constants: Vec<Value> = r
        .constants
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "value": num(c.value),
                "rule": c.lemma_tag,
                "inputs": c.inputs,
            })
        })
        .collect();
    json!({
        "constants": constants,
        "kappa_final": num(r.kappa_final),
        "kappa1": num(r.kappa1),
        "a_bound": num(r.a_bound),
        "b_bound": num(r.b_bound),
        "log_xy_bound": num(r.log_xy_bound),
        "xy_bound": num(r.xy_bound),
        "log_m": num(r.log_m),
        "degree": r.degree,
        "rank": r.rank,
        "s": r.s,
        "provider_degree": r.provider_degree,
        "provider": r.provider,
    })
}

fn field_check(path: &Path, bits: u32) -> Result<Value> {
    let fs = FieldSpecFile::load(path)?;
    let k = fs.field()?;
    let emb = compute_embeddings(&k, bits)?;
    let mut out = Map::new();
    out.insert("degree".into(), json!(k.degree()));
    out.insert(
        "min_poly".into(),
        Value::Array(
            k.min_poly()
                .coeffs()
                .iter()
                .map(fieldspec::integer_value)
                .collect(),
        ),
    );
    out.insert(
        "irreducibility".into(),
        match k.irreducibility() {
            Irreducibility::Verified { witness_prime } => {
                json!({"status": "verified", "witness_prime": witness_prime})
            }
            Irreducibility::Asserted => json!({"status": "asserted"}),
        },
    );
    out.insert("signature".into(), json!([emb.r1(), emb.r2()]));
    if let Some(basis) = fs.unit_basis(&k)? {
        let data = units::validate_units(&k, &emb, &basis)?;
        let claim = fs.regulator_claim()?;
        if let Some(c) = claim {
            units::check_regulator_claim(&data, c)?;
        }
        let (reg_lo, reg_hi) = data.regulator.to_f64_bounds();
        out.insert(
            "units".into(),
            json!({
                "rank": data.rank,
                "torsion_order": basis.torsion_order,
                "regulator": [num(reg_lo), num(reg_hi)],
                "regulator_claim_checked": claim.is_some(),
                "kappa4": data.kappa4.map(num).unwrap_or(Value::Null),
                "c1": num(data.c1),
                "c_red": num(data.c_red),
            }),
        );
    }
    Ok(Value::Object(out))
}

fn embeddings_cmd(path: &Path, bits: u32) -> Result<Value> {
    let fs = FieldSpecFile::load(path)?;
    let k = fs.field()?;
    let emb = compute_embeddings(&k, bits)?;
    let roots: Vec<Value> = emb
        .roots()
        .iter()
        .map(|z| {
            let (re_lo, re_hi) = z.re_ball().to_f64_bounds();
            let (im_lo, im_hi) = z.im_ball().to_f64_bounds();
            let radius = 0.5 * ((re_hi - re_lo).max(im_hi - im_lo));
            json!({
                "re": num(z.re_ball().midpoint_f64()),
                "im": num(z.im_ball().midpoint_f64()),
                "radius": num(radius),
            })
        })
        .collect();
    Ok(json!({
        "signature": [emb.r1(), emb.r2()],
        "bits": bits,
        "roots": roots,
    }))
}

fn height_cmd(path: &Path, element: &str, bits: u32) -> Result<Value> {
    let fs = FieldSpecFile::load(path)?;
    let k = fs.field()?;
    let elt = parse_element(&k, element)?;
    let h = heights::abs_log_height(&elt, &k, bits)?;
    let minpoly = elt.min_poly_integer(&k);
    let mahler = heights::mahler_measure(&minpoly, bits)?;
    Ok(json!({
        "h": num(h.midpoint_f64()),
        "M": num(mahler.midpoint_f64()),
        "minpoly": Value::Array(minpoly.coeffs().iter().map(fieldspec::integer_value).collect()),
    }))
}

fn twist_cmd(path: &Path, exponents: &str, torsion: i64, bits: u32) -> Result<Value> {
    let (k, _emb, basis, _data) = load_with_units(path, bits)?;
    let exps = parse_exponents(exponents)?;
    if exps.len() != basis.units.len() {
        return Err(Error::validation(&format!(
            "expected {} exponents, got {}",
            basis.units.len(),
            exps.len()
        )));
    }
    if torsion < 0 || torsion >= basis.torsion_order as i64 {
        return Err(Error::validation("torsion index out of range"));
    }
    let gamma = units::unit_from_exponents(
        &k,
        &basis,
        &ExponentVector {
            torsion_index: torsion,
            exponents: exps,
        },
    )?;
    let form = twisted_form(&k, &gamma)?;
    Ok(serde_json::from_str(&fieldspec::form_to_json(&form)).expect("canonical form JSON"))
}

fn stender_cmd(sc: &StenderCmd, bits: u32) -> Result<Value> {
    match sc {
        StenderCmd::Coeffs { d, c, n } => {
            let p = StenderParams::new(*d, *c)?;
            let co = stender::coeffs_by_recurrence(&p, *n, *n).pop().expect("one member");
            Ok(json!({
                "n": co.n,
                "a": fieldspec::integer_value(&co.a),
                "b": fieldspec::integer_value(&co.b),
                "c": fieldspec::integer_value(&co.c),
            }))
        }
        StenderCmd::Verify { d, c, nmax } => {
            let p = StenderParams::new(*d, *c)?;
            if *nmax < 0 {
                return Err(Error::validation("nmax must be nonnegative"));
            }
            stender::verify_coefficients(&p, -nmax, *nmax, bits.max(256))?;
            Ok(json!({
                "consistent": true,
                "members_checked": 2 * nmax + 1,
            }))
        }
        StenderCmd::Solve {
            d,
            c,
            m,
            cap_xy,
            cap_n,
        } => {
            let p = StenderParams::new(*d, *c)?;
            let m = parse_m(m)?;
            let sols = stender::solve_family(&p, &m, *cap_xy, *cap_n, bits)?;
            let triples: Vec<Value> = sols
                .triples
                .iter()
                .map(|t| {
                    json!({
                        "n": t.n,
                        "x": fieldspec::integer_value(&t.x),
                        "y": fieldspec::integer_value(&t.y),
                    })
                })
                .collect();
            Ok(json!({
                "triples": triples,
                "skipped_members": sols.skipped_members,
                "completeness": completeness_str(sols.completeness),
                "report": report_value(&sols.report),
            }))
        }
        StenderCmd::Spec { d, c } => {
            let p = StenderParams::new(*d, *c)?;
            let spec = fieldspec::stender_spec(&p, bits.max(192))?;
            Ok(serde_json::from_str(&spec.to_json()).expect("canonical spec JSON"))
        }
    }
}

pub fn completeness_str(c: diophantine::Completeness) -> &'static str {
    match c {
        diophantine::Completeness::Certified => "certified",
        diophantine::Completeness::Capped => "capped",
    }
}

fn solve_fixed_cmd(path: &Path, m: &str, include_axes: bool, bits: u32) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::validation(&format!("cannot read {}: {e}", path.display())))?;
    let form = fieldspec::parse_form(&text)?;
    let m = parse_m(m)?;
    let boxed = lemma3_bounds(&form, &m.clone().max(BigInt::from(1)), bits)?;
    let solutions = solve_fixed_totally_imaginary(&form, &m, include_axes, bits)?;
    Ok(json!({
        "count": solutions.len(),
        "solutions": pairs_value(&solutions),
        "x_bound": num(boxed.x_bound),
        "y_bound": num(boxed.y_bound),
    }))
}

fn solve_family_cmd(path: &Path, m: &str, cap_xy: i64, cap_a: i64, bits: u32) -> Result<Value> {
    let (k, emb, basis, data) = load_with_units(path, bits)?;
    let m = parse_m(m)?;
    let alpha = k.one();
    let fam = diophantine::solve_family(
        &k,
        &emb,
        &basis,
        &data,
        &alpha,
        &m,
        &SolveCaps {
            max_exponent: cap_a,
            max_xy: cap_xy,
        },
        &MatveevProvider,
    )?;
    let members: Vec<Value> = fam
        .members
        .iter()
        .map(|mem| {
            json!({
                "exponents": mem.exponents,
                "coefficients": Value::Array(
                    mem.form.coeffs().iter().map(fieldspec::integer_value).collect()
                ),
                "solutions": pairs_value(&mem.solutions),
            })
        })
        .collect();
    Ok(json!({
        "members": members,
        "skipped": fam.skipped,
        "completeness": completeness_str(fam.completeness),
        "report": report_value(&fam.report),
    }))
}

/// A caller-supplied linear-forms constant read from a file; applied
/// uniformly to the one (s, degree) pair a run queries.
struct FixedKappaProvider {
    kappa: f64,
}

impl LinFormBoundProvider for FixedKappaProvider {
    fn kappa(&self, _s: u32, _degree: u32) -> f64 {
        self.kappa
    }
    fn name(&self) -> &'static str {
        "file"
    }
}

fn bounds_cmd(path: &Path, m: &str, provider: &str, bits: u32) -> Result<Value> {
    let (k, emb, basis, data) = load_with_units(path, bits)?;
    let m = parse_m(m)?;
    let alpha = k.one();
    let report = if provider == "default" {
        diophantine::compose_bounds(&k, &emb, &basis, &data, &alpha, &m, &MatveevProvider)?
    } else {
        let text = std::fs::read_to_string(provider).map_err(|e| {
            Error::validation(&format!("cannot read provider file {provider}: {e}"))
        })?;
        let doc: Value = serde_json::from_str(&text)
            .map_err(|e| Error::validation(&format!("provider file: malformed JSON: {e}")))?;
        let kappa = doc
            .get("kappa")
            .and_then(Value::as_f64)
            .ok_or_else(|| Error::validation("provider file needs a numeric \"kappa\""))?;
        if !kappa.is_finite() || kappa <= 0.0 {
            return Err(Error::validation("provider kappa must be positive"));
        }
        let p = FixedKappaProvider { kappa };
        diophantine::compose_bounds(&k, &emb, &basis, &data, &alpha, &m, &p)?
    };
    Ok(report_value(&report))
}

fn oracle_cmd(path: &Path, m: &str, cap_xy: i64, cap_a: i64, bits: u32) -> Result<Value> {
    if cap_xy <= 0 || cap_a < 0 {
        return Err(Error::validation("caps must be positive"));
    }
    let (k, _emb, basis, _data) = load_with_units(path, bits)?;
    let m = parse_m(m)?;
    let r = basis.units.len();
    let width = 2 * cap_a as u128 + 1;
    if width.pow(r as u32) > 2_000_000 {
        return Err(Error::validation("exponent cap too large to enumerate"));
    }
    let mut members = Vec::new();
    let mut skipped = Vec::new();
    let mut exps = vec![-cap_a; r];
    loop {
        let unit = units::unit_from_exponents(
            &k,
            &basis,
            &ExponentVector {
                torsion_index: 0,
                exponents: exps.clone(),
            },
        )?;
        match twisted_form(&k, &unit) {
            Err(Error::DegenerateTwist) => skipped.push(exps.clone()),
            Err(e) => return Err(e),
            Ok(form) => {
                // plain quadruple loop, no sign shortcut, no boxes
                let mut sols = Vec::new();
                for y in -cap_xy..=cap_xy {
                    if y == 0 {
                        continue;
                    }
                    for x in -cap_xy..=cap_xy {
                        if x == 0 {
                            continue;
                        }
                        let (xb, yb) = (BigInt::from(x), BigInt::from(y));
                        if num_traits::Signed::abs(&form.evaluate(&xb, &yb)) <= m {
                            sols.push((xb, yb));
                        }
                    }
                }
                sols.sort();
                members.push(json!({
                    "exponents": exps,
                    "solutions": pairs_value(&sols),
                }));
            }
        }
        let mut i = 0;
        loop {
            if i == r {
                return Ok(json!({"members": members, "skipped": skipped}));
            }
            if exps[i] < cap_a {
                exps[i] += 1;
                break;
            }
            exps[i] = -cap_a;
            i += 1;
        }
    }
}
