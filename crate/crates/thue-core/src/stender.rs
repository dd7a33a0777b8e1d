//! The quartic family over K = Q(theta), theta^4 = -4(D^4 + c): its
//! defining data, the coefficient recurrences for the unit-power forms,
//! and an independent numeric path for cross-checking them.
//!
//! Member n of the family is `F_n(X, Y) = Y^4 f_n(X/Y)` where
//! `f_n(X) = prod_i (X - eps_i^(n+1)) = X^4 + a X^3 + b X^2 + c X + 1`
//! and `eps = D^2 + D theta + theta^2 / 2` is a fundamental unit.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algnum::{AlgElement, NumberField};
use crate::arith::ComplexBall;
use crate::embeddings::{compute_embeddings, EmbeddingSet};
use crate::error::{Error, Result};
use crate::forms::BinaryForm;
use crate::poly::ZPoly;
use crate::units::UnitBasis;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StenderParams {
    d: u32,
    c: i8,
}

impl StenderParams {
    pub fn new(d: u32, c: i64) -> Result<StenderParams> {
        if d < 2 {
            return Err(Error::validation("the family parameter D must be at least 2"));
        }
        if c != 1 && c != -1 {
            return Err(Error::validation("the family sign c must be +1 or -1"));
        }
        Ok(StenderParams { d, c: c as i8 })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn c(&self) -> i64 {
        self.c as i64
    }

    fn d2(&self) -> BigInt {
        BigInt::from(self.d) * BigInt::from(self.d)
    }

    fn d4(&self) -> BigInt {
        let d2 = self.d2();
        &d2 * &d2
    }

    /// Minimal polynomial of eps: `X^4 - 4D^2 X^3 + (8D^4+2c)X^2 + 4cD^2 X + 1`.
    pub fn base_polynomial(&self) -> ZPoly {
        let c = BigInt::from(self.c);
        ZPoly::new(vec![
            BigInt::one(),
            BigInt::from(-4) * self.d2(),
            BigInt::from(8) * self.d4() + BigInt::from(2) * &c,
            BigInt::from(4) * &c * self.d2(),
            BigInt::one(),
        ])
    }

    /// Minimal polynomial of theta: `X^4 + 4(D^4 + c)`.
    pub fn theta_min_poly(&self) -> ZPoly {
        ZPoly::new(vec![
            BigInt::one(),
            BigInt::zero(),
            BigInt::zero(),
            BigInt::zero(),
            BigInt::from(4) * (self.d4() + BigInt::from(self.c)),
        ])
    }

    pub fn theta_field(&self) -> Result<NumberField> {
        NumberField::new(self.theta_min_poly())
    }

    /// `eps = D^2 + D theta + theta^2 / 2` in the theta presentation.
    pub fn unit_epsilon(&self, k: &NumberField) -> Result<AlgElement> {
        k.element(vec![
            BigRational::from_integer(self.d2()),
            BigRational::from_integer(BigInt::from(self.d)),
            BigRational::new(BigInt::one(), BigInt::from(2)),
            BigRational::zero(),
        ])
    }

    /// Rank-1 basis `{eps}` with torsion `{-1}`.
    pub fn unit_basis(&self, k: &NumberField) -> Result<UnitBasis> {
        Ok(UnitBasis {
            units: vec![self.unit_epsilon(k)?],
            torsion: k.from_rational(&BigRational::from_integer(BigInt::from(-1))),
            torsion_order: 2,
        })
    }
}

/// Coefficients of `f_n = X^4 + a X^3 + b X^2 + c X + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyCoeffs {
    pub n: i64,
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

/// The trace coefficients `a_k = -sum_i eps_i^k` on an index window,
/// generated by the order-4 recurrence in both directions.
fn a_table(p: &StenderParams, lo: i64, hi: i64) -> BTreeMap<i64, BigInt> {
    let c = BigInt::from(p.c);
    let r1 = BigInt::from(4) * p.d2();
    let r2 = BigInt::from(8) * p.d4() + BigInt::from(2) * &c;
    let r3 = BigInt::from(4) * &c * p.d2();
    let mut t: BTreeMap<i64, BigInt> = BTreeMap::new();
    t.insert(-1, r3.clone());
    t.insert(0, BigInt::from(-4));
    t.insert(1, BigInt::from(-4) * p.d2());
    t.insert(2, BigInt::from(4) * &c);
    let mut k = 3i64;
    while k <= hi {
        let v = &r1 * &t[&(k - 1)] - &r2 * &t[&(k - 2)] - &r3 * &t[&(k - 3)] - &t[&(k - 4)];
        t.insert(k, v);
        k += 1;
    }
    let mut k = -2i64;
    while k >= lo {
        let v = -&t[&(k + 4)] + &r1 * &t[&(k + 3)] - &r2 * &t[&(k + 2)] - &r3 * &t[&(k + 1)];
        t.insert(k, v);
        k -= 1;
    }
    t
}

/// The pair-product power sums `b_k = sum_{i<j} (eps_i eps_j)^k`, via
/// the self-reciprocal order-6 recurrence with characteristic polynomial
/// `X^6 - (8D^4+2c)X^5 - (16cD^4+1)X^4 - (16D^4-4c)X^3 - (16cD^4+1)X^2
///  - (8D^4+2c)X + 1`. Seeds: b_0 = 6, b_1 = 8D^4+2c, and the Newton
/// identity `b_k = (a_k^2 + a_(2k))/2` for b_2, b_3; symmetry fills in
/// negative indices.
fn b_table(p: &StenderParams, lo: i64, hi: i64) -> BTreeMap<i64, BigInt> {
    let c = BigInt::from(p.c);
    let s1 = BigInt::from(8) * p.d4() + BigInt::from(2) * &c;
    let s2 = BigInt::from(16) * &c * p.d4() + BigInt::one();
    let s3 = BigInt::from(16) * p.d4() - BigInt::from(4) * &c;
    let a = a_table(p, -1, 6);
    let two = BigInt::from(2);
    let mut t: BTreeMap<i64, BigInt> = BTreeMap::new();
    t.insert(0, BigInt::from(6));
    t.insert(1, s1.clone());
    t.insert(2, (&a[&2] * &a[&2] + &a[&4]) / &two);
    t.insert(3, (&a[&3] * &a[&3] + &a[&6]) / &two);
    t.insert(-1, t[&1].clone());
    t.insert(-2, t[&2].clone());
    let mut k = 4i64;
    while k <= hi {
        let v = &s1 * &t[&(k - 1)] + &s2 * &t[&(k - 2)] + &s3 * &t[&(k - 3)]
            + &s2 * &t[&(k - 4)]
            + &s1 * &t[&(k - 5)]
            - &t[&(k - 6)];
        t.insert(k, v);
        k += 1;
    }
    let mut k = -3i64;
    while k >= lo {
        let v = &s1 * &t[&(k + 1)] + &s2 * &t[&(k + 2)] + &s3 * &t[&(k + 3)]
            + &s2 * &t[&(k + 4)]
            + &s1 * &t[&(k + 5)]
            - &t[&(k + 6)];
        t.insert(k, v);
        k -= 1;
    }
    t
}

/// Coefficients for members `n_lo..=n_hi` by the integer recurrences.
pub fn coeffs_by_recurrence(p: &StenderParams, n_lo: i64, n_hi: i64) -> Vec<FamilyCoeffs> {
    assert!(n_lo <= n_hi);
    let (klo, khi) = (n_lo + 1, n_hi + 1);
    let a = a_table(p, klo.min(-khi), khi.max(-klo));
    let b = b_table(p, klo, khi);
    (n_lo..=n_hi)
        .map(|n| {
            let k = n + 1;
            FamilyCoeffs {
                n,
                a: a[&k].clone(),
                b: b[&k].clone(),
                c: a[&-k].clone(),
            }
        })
        .collect()
}

pub fn round_certified(z: &ComplexBall) -> Result<BigInt> {
    let bits = z.bits();
    let im = z.im_ball().abs_upper().to_f64_up();
    if im >= 0.25 {
        return Err(Error::precision(
            bits,
            "symmetric function has an uncertain imaginary part",
        ));
    }
    let re = z.re_ball();
    let (int, dist) = re.center.nearest_int();
    let err = crate::dirf::add_up(dist.to_f64(crate::arith::Round::Ceil).abs(), re.radius.to_f64_up());
    if err >= 0.49 {
        return Err(Error::precision(
            bits,
            "symmetric function is not certifiably integral",
        ));
    }
    Ok(int)
}

/// Coefficients of member n computed from certified enclosures of the
/// powers `eps_i^(n+1)`, independent of the recurrences.
pub fn coeffs_direct(p: &StenderParams, n: i64, bits: u32) -> Result<FamilyCoeffs> {
    let k = p.theta_field()?;
    let emb = compute_embeddings(&k, bits)?;
    coeffs_direct_in(p, n, &k, &emb)
}

/// Same, reusing a precomputed field and embedding set.
pub fn coeffs_direct_in(
    p: &StenderParams,
    n: i64,
    k: &NumberField,
    emb: &EmbeddingSet,
) -> Result<FamilyCoeffs> {
    let eps = p.unit_epsilon(k)?;
    let gamma = eps.pow(n + 1, k)?;
    let z = emb.embed_all(&gamma);
    let d = z.len();
    let wbits = z[0].bits();
    let mut e1 = ComplexBall::zero(wbits);
    let mut e2 = ComplexBall::zero(wbits);
    let mut e3 = ComplexBall::zero(wbits);
    for i in 0..d {
        e1 = e1.add(&z[i]);
        for j in (i + 1)..d {
            e2 = e2.add(&z[i].mul(&z[j]));
            for l in (j + 1)..d {
                e3 = e3.add(&z[i].mul(&z[j]).mul(&z[l]));
            }
        }
    }
    let mut e4 = ComplexBall::exact(
        crate::arith::Dyadic::from_i64(1, wbits),
        crate::arith::Dyadic::zero(wbits),
    );
    for zi in &z {
        e4 = e4.mul(zi);
    }
    let e4 = round_certified(&e4)?;
    if e4 != BigInt::one() {
        return Err(Error::validation(
            "unit power has product of conjugates different from 1",
        ));
    }
    Ok(FamilyCoeffs {
        n,
        a: -round_certified(&e1)?,
        b: round_certified(&e2)?,
        c: -round_certified(&e3)?,
    })
}

/// `F_n` as a binary form.
pub fn family_form(p: &StenderParams, n: i64) -> BinaryForm {
    let co = coeffs_by_recurrence(p, n, n).pop().unwrap();
    BinaryForm::new(vec![BigInt::one(), co.a, co.b, co.c, BigInt::one()]).unwrap()
}

/// Cross-checks the recurrence coefficients against the certified
/// numeric path on a member range.
pub fn verify_coefficients(p: &StenderParams, n_lo: i64, n_hi: i64, bits: u32) -> Result<()> {
    let k = p.theta_field()?;
    let emb = compute_embeddings(&k, bits)?;
    let rec = coeffs_by_recurrence(p, n_lo, n_hi);
    for co in &rec {
        let direct = coeffs_direct_in(p, co.n, &k, &emb)?;
        if *co != direct {
            return Err(Error::validation(&format!(
                "coefficient mismatch at member {}: recurrence ({}, {}, {}) vs direct ({}, {}, {})",
                co.n, co.a, co.b, co.c, direct.a, direct.b, direct.c
            )));
        }
    }
    Ok(())
}

pub use crate::forms::SolutionTriple;

/// Family enumeration specialized to the quartic family. The general
/// solver indexes members by the unit exponent `e` with twist `eps^e`;
/// here that is reported as the member index `n = e - 1`, matching
/// `f_n = prod_i (X - eps_i^(n+1))`. The excluded member `n = -1`
/// (twist 1, a degenerate form) always lands in `skipped_members`.
#[derive(Clone, Debug)]
pub struct StenderSolutions {
    pub triples: Vec<SolutionTriple>,
    pub skipped_members: Vec<i64>,
    pub completeness: crate::diophantine::Completeness,
    pub report: crate::diophantine::BoundReport,
}

/// Solves `|F_n(x, y)| <= m` across the family for `|n| <= cap_n`,
/// `|x|, |y| <= cap_xy` (both further clipped by the composed bounds
/// where those are smaller).
pub fn solve_family(
    p: &StenderParams,
    m: &BigInt,
    cap_xy: i64,
    cap_n: i64,
    bits: u32,
) -> Result<StenderSolutions> {
    if cap_n < 0 {
        return Err(Error::validation("member cap must be nonnegative"));
    }
    let k = p.theta_field()?;
    let emb = compute_embeddings(&k, bits)?;
    let basis = p.unit_basis(&k)?;
    let data = crate::units::validate_units(&k, &emb, &basis)?;
    let alpha = k.one();
    // n = e - 1 for unit exponent e, so |n| <= cap_n needs |e| <= cap_n + 1.
    let caps = crate::diophantine::SolveCaps {
        max_exponent: cap_n + 1,
        max_xy: cap_xy,
    };
    let fam = crate::diophantine::solve_family(
        &k,
        &emb,
        &basis,
        &data,
        &alpha,
        m,
        &caps,
        &crate::diophantine::MatveevProvider,
    )?;
    let mut triples = Vec::new();
    for member in &fam.members {
        let n = member.exponents[0] - 1;
        if n.abs() > cap_n {
            continue;
        }
        for (x, y) in &member.solutions {
            triples.push(SolutionTriple {
                n,
                x: x.clone(),
                y: y.clone(),
            });
        }
    }
    triples.sort();
    let mut skipped_members: Vec<i64> = fam
        .skipped
        .iter()
        .map(|e| e[0] - 1)
        .filter(|n| n.abs() <= cap_n)
        .collect();
    skipped_members.sort_unstable();
    Ok(StenderSolutions {
        triples,
        skipped_members,
        completeness: fam.completeness,
        report: fam.report,
    })
}

/// Exhaustive reference enumeration: every member in `n_lo..=n_hi`
/// except `n = -1`, every pair with `0 < |x|, |y| <= xy_max`, by exact
/// integer evaluation of the recurrence coefficients. Quadratic in
/// `xy_max`; meant for cross-checking the solver on small boxes.
pub fn brute_force_solutions(
    p: &StenderParams,
    m: &BigInt,
    n_lo: i64,
    n_hi: i64,
    xy_max: i64,
) -> Vec<SolutionTriple> {
    assert!(n_lo <= n_hi && xy_max > 0);
    let mut out = Vec::new();
    for co in coeffs_by_recurrence(p, n_lo, n_hi) {
        if co.n == -1 {
            continue;
        }
        for y in -xy_max..=xy_max {
            if y == 0 {
                continue;
            }
            let yb = BigInt::from(y);
            let y2 = &yb * &yb;
            for x in -xy_max..=xy_max {
                if x == 0 {
                    continue;
                }
                let xb = BigInt::from(x);
                let x2 = &xb * &xb;
                let v = &x2 * &x2
                    + &co.a * &x2 * &xb * &yb
                    + &co.b * &x2 * &y2
                    + &co.c * &xb * &yb * &y2
                    + &y2 * &y2;
                if v.abs() <= *m {
                    out.push(SolutionTriple {
                        n: co.n,
                        x: xb.clone(),
                        y: yb.clone(),
                    });
                }
            }
        }
    }
    out.sort();
    out
}
