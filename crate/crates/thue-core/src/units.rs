//! Fundamental unit systems: validation, regulator, logarithmic data,
//! reduction of field elements modulo the unit lattice.
//!
//! Conventions: one row per conjugacy class of embeddings, complex
//! classes weighted by 2, and the regulator is the absolute determinant
//! of the matrix with the last class row dropped.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algnum::{AlgElement, NumberField};
use crate::arith::RealBall;
use crate::embeddings::{max_enclosure, EmbeddingSet};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct UnitBasis {
    pub units: Vec<AlgElement>,
    pub torsion: AlgElement,
    pub torsion_order: u32,
}

/// Exponents describing `torsion^t * prod units[i]^e[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentVector {
    pub torsion_index: i64,
    pub exponents: Vec<i64>,
}

/// Validated logarithmic data for a unit basis at one precision.
#[derive(Clone, Debug)]
pub struct UnitData {
    pub rank: usize,
    /// |det| of the class-log matrix with the last row dropped; 1 for
    /// rank zero.
    pub regulator: RealBall,
    /// Unweighted `log |phi_c(eps_i)|` at class representatives,
    /// indexed `[class][unit]`.
    pub class_logs: Vec<Vec<RealBall>>,
    /// Certified constant with `d * h(u) >= kappa4 * max_i |b_i|` for
    /// every unit `u = zeta^t prod eps_i^(b_i)`. `None` when the rank is
    /// zero.
    pub kappa4: Option<f64>,
    /// Upper bound on `sum_i log house(eps_i)`.
    pub c1: f64,
    /// Fundamental-domain radius: any element can be unit-reduced to
    /// within `c_red` of balanced conjugate moduli. Upper bound on
    /// `(1/2) sum_i max_c |log |phi_c(eps_i)||`.
    pub c_red: f64,
    /// Per unit: upper bound on `max_c |log |phi_c(eps_i)||`.
    pub max_abs_logs: Vec<f64>,
}

fn is_pm_one(q: &BigRational) -> bool {
    q.is_one() || (-q).is_one()
}

/// Checks norms, torsion primitivity, rank and the lattice determinant,
/// and assembles the logarithmic data.
pub fn validate_units(
    k: &NumberField,
    emb: &EmbeddingSet,
    basis: &UnitBasis,
) -> Result<UnitData> {
    let expected_rank = emb.r1() + emb.r2() - 1;
    if basis.units.len() != expected_rank {
        return Err(Error::validation(&format!(
            "unit rank mismatch: field needs {} fundamental units, got {}",
            expected_rank,
            basis.units.len()
        )));
    }
    for (i, u) in basis.units.iter().enumerate() {
        if !is_pm_one(&u.norm(k)) {
            return Err(Error::validation(&format!(
                "element {i} is not a unit: norm is not +-1"
            )));
        }
    }
    // torsion generator: a primitive root of unity of the claimed order
    let w = basis.torsion_order;
    if w == 0 {
        return Err(Error::validation("torsion order must be positive"));
    }
    if basis.torsion.pow(w as i64, k)? != k.one() {
        return Err(Error::validation(
            "torsion generator does not have the claimed order",
        ));
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if w % p == 0 && basis.torsion.pow((w / p) as i64, k)? == k.one() {
            return Err(Error::validation(
                "torsion generator is not primitive for the claimed order",
            ));
        }
    }

    let reps = emb.class_representatives();
    let mut class_logs: Vec<Vec<RealBall>> = Vec::with_capacity(reps.len());
    for &c in &reps {
        let mut row = Vec::with_capacity(basis.units.len());
        for u in &basis.units {
            row.push(emb.log_abs(u, c)?);
        }
        class_logs.push(row);
    }

    let r = expected_rank;
    let regulator = if r == 0 {
        RealBall::from_i64(1, emb.bits())
    } else {
        // weighted minor without the last class row
        let mut minor = Vec::with_capacity(r);
        for (ci, row) in class_logs.iter().enumerate().take(reps.len() - 1) {
            let wgt = BigInt::from(emb.class_weight(reps[ci]));
            minor.push(row.iter().map(|b| b.mul_bigint(&wgt)).collect::<Vec<_>>());
        }
        let det = det_ball(&minor);
        if det.abs_lower().is_none() {
            return Err(Error::RankDeficient(
                "unit log determinant is not separated from zero".to_string(),
            ));
        }
        abs_ball(&det)
    };

    let mut max_abs_logs = Vec::with_capacity(r);
    let mut c1 = 0.0f64;
    let mut c_red_sum = 0.0f64;
    for (i, u) in basis.units.iter().enumerate() {
        let house = emb.house(u);
        let lh = house.ln()?;
        c1 = crate::dirf::add_up(c1, lh.to_f64_bounds().1.max(0.0));
        let col: Vec<RealBall> = class_logs.iter().map(|row| abs_ball(&row[i])).collect();
        let m = max_enclosure(&col).to_f64_bounds().1;
        max_abs_logs.push(m);
        c_red_sum = crate::dirf::add_up(c_red_sum, m);
    }
    let c_red = crate::dirf::mul_up(0.5, c_red_sum);

    let kappa4 = if r == 0 {
        None
    } else if r == 1 {
        // two classes; the weighted logs cancel, both entries nonzero
        let mut best = f64::INFINITY;
        for row in &class_logs {
            let lo = abs_ball(&row[0])
                .abs_lower()
                .ok_or_else(|| {
                    Error::precision(emb.bits(), "unit log not separated from zero")
                })?
                .to_f64_up();
            // to_f64_up overshoots; back off two ulps to stay a lower bound
            let lo = lo.next_down().next_down();
            if lo < best {
                best = lo;
            }
        }
        Some(crate::dirf::mul_down(best, 1.0 - 2f64.powi(-30)))
    } else {
        Some(kappa4_general(emb, &reps, &class_logs, k.degree())?)
    };

    Ok(UnitData {
        rank: r,
        regulator,
        class_logs,
        kappa4,
        c1,
        c_red,
        max_abs_logs,
    })
}

/// `|b|` as a ball.
fn abs_ball(b: &RealBall) -> RealBall {
    let (lo, hi) = b.endpoints();
    let alo = lo.abs();
    let ahi = hi.abs();
    if lo.is_negative() && !hi.is_negative() {
        // straddles zero
        let m = if alo.cmp_val(&ahi) == std::cmp::Ordering::Less {
            ahi
        } else {
            alo
        };
        RealBall::from_endpoints(&crate::arith::Dyadic::zero(m.bits), &m)
    } else {
        let (a, b2) = if alo.cmp_val(&ahi) == std::cmp::Ordering::Less {
            (alo, ahi)
        } else {
            (ahi, alo)
        };
        RealBall::from_endpoints(&a, &b2)
    }
}

/// Cofactor expansion; fine for unit ranks.
fn det_ball(m: &[Vec<RealBall>]) -> RealBall {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let bits = m[0][0].bits();
    let mut acc = RealBall::zero(bits);
    for i in 0..n {
        let mut sub = Vec::with_capacity(n - 1);
        for (row_i, row) in m.iter().enumerate() {
            if row_i == i {
                continue;
            }
            sub.push(row[1..].to_vec());
        }
        let cof = m[i][0].mul(&det_ball(&sub));
        acc = if i % 2 == 0 {
            acc.add(&cof)
        } else {
            acc.sub(&cof)
        };
    }
    acc
}

/// Rank >= 2: `kappa4 = 1 / (2 kappa3)` with `kappa3` the largest row
/// l1-norm of the pseudoinverse of the weighted class-log matrix.
///
/// For `u` with exponents `b`: the weighted log vector is `A b`, so
/// `b = pinv(A) (A b)` and `|b_i| <= kappa3 max_c |w_c l_c(u)|`, while
/// `d h(u) = (1/2) sum_c |w_c l_c(u)| >= (1/2) max_c |w_c l_c(u)|`.
fn kappa4_general(
    emb: &EmbeddingSet,
    reps: &[usize],
    class_logs: &[Vec<RealBall>],
    _degree: usize,
) -> Result<f64> {
    let rows = reps.len();
    let r = class_logs[0].len();
    let mut a = vec![vec![0.0f64; r]; rows];
    for (c, row) in class_logs.iter().enumerate() {
        let wgt = emb.class_weight(reps[c]) as f64;
        for (i, b) in row.iter().enumerate() {
            a[c][i] = wgt * b.midpoint_f64();
        }
    }
    // normal equations
    let mut ata = vec![vec![0.0f64; r]; r];
    for i in 0..r {
        for j in 0..r {
            ata[i][j] = (0..rows).map(|c| a[c][i] * a[c][j]).sum();
        }
    }
    let inv = invert_f64(&ata).ok_or_else(|| {
        Error::RankDeficient("unit log matrix is numerically singular".to_string())
    })?;
    // pinv = inv(AtA) At, rows indexed by units
    let mut kappa3 = 0.0f64;
    for i in 0..r {
        let mut l1 = 0.0;
        for c in 0..rows {
            let v: f64 = (0..r).map(|j| inv[i][j] * a[c][j]).sum();
            l1 += v.abs();
        }
        if l1 > kappa3 {
            kappa3 = l1;
        }
    }
    // residual check: pinv * A must be the identity
    for i in 0..r {
        for j in 0..r {
            let v: f64 = (0..rows)
                .map(|c| {
                    let p: f64 = (0..r).map(|l| inv[i][l] * a[c][l]).sum();
                    p * a[c][j]
                })
                .sum();
            let expect = if i == j { 1.0 } else { 0.0 };
            if (v - expect).abs() > 1e-8 {
                return Err(Error::RankDeficient(
                    "unit log pseudoinverse failed its residual check".to_string(),
                ));
            }
        }
    }
    let kappa3 = crate::dirf::mul_up(kappa3, 1.0 + 2f64.powi(-20));
    Ok(crate::dirf::mul_down(
        crate::dirf::div_down(0.5, kappa3),
        1.0 - 2f64.powi(-20),
    ))
}

/// Gauss-Jordan with partial pivoting.
fn invert_f64(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| {
            a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap()
        })?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        let p = a[col][col];
        for v in a[col].iter_mut() {
            *v /= p;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = a[i][col];
            if f == 0.0 {
                continue;
            }
            for j in 0..2 * n {
                let s = a[col][j];
                a[i][j] -= f * s;
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `torsion^t * prod units[i]^(e_i)`, exactly.
pub fn unit_from_exponents(
    k: &NumberField,
    basis: &UnitBasis,
    ev: &ExponentVector,
) -> Result<AlgElement> {
    if ev.exponents.len() != basis.units.len() {
        return Err(Error::validation("exponent vector length mismatch"));
    }
    let t = ev.torsion_index.rem_euclid(basis.torsion_order as i64);
    let mut acc = basis.torsion.pow(t, k)?;
    for (u, &e) in basis.units.iter().zip(&ev.exponents) {
        if e != 0 {
            acc = acc.mul(&u.pow(e, k)?, k);
        }
    }
    Ok(acc)
}

/// Result of reducing an element by the unit lattice against the target
/// modulus profile `|phi_c| = m^(1/d)`.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub exponents: Vec<i64>,
    pub reduced: AlgElement,
    /// Recomputed `max_c |log(m^(-1/d) |phi_c(rho)|)|`, upper bound.
    pub achieved: f64,
}

/// Multiplies `gamma` by a unit so its conjugate moduli are as balanced
/// as possible around `m^(1/d)`. The exponents come from a rounded least
/// squares solve against the element's own norm profile `|N(gamma)|^(1/d)`,
/// which lies in the span of the unit logs up to rounding; this keeps the
/// achieved deviation within `c_red` plus the norm offset
/// `|log(|N(gamma)| / m)| / d`. The achieved quality is recomputed
/// rigorously against the `m` target.
pub fn reduce_by_units(
    k: &NumberField,
    emb: &EmbeddingSet,
    basis: &UnitBasis,
    data: &UnitData,
    gamma: &AlgElement,
    m: &BigInt,
) -> Result<Reduction> {
    let d = k.degree() as u32;
    let bits = emb.bits();
    let ln_m = if m.is_one() {
        RealBall::zero(crate::embeddings::working_scale(bits))
    } else {
        RealBall::from_bigint(m, crate::embeddings::working_scale(bits)).ln()?
    };
    let target = ln_m.div_u32(d);
    let reps = emb.class_representatives();

    let r = data.rank;
    let exponents: Vec<i64> = if r == 0 {
        vec![]
    } else {
        // ln |N(gamma)| / d from the exact norm keeps the least squares
        // target inside the unit-log span.
        let norm = gamma.norm(k);
        if norm.numer().is_zero() {
            return Err(Error::ZeroElement);
        }
        let norm_abs = BigRational::new(norm.numer().abs(), norm.denom().abs());
        let wp = crate::embeddings::working_scale(bits);
        let ln_norm = RealBall::from_rational(&norm_abs, wp).ln()?;
        let norm_target = ln_norm.div_u32(d);
        let mut v = vec![0.0f64; reps.len()];
        for (c, &rep) in reps.iter().enumerate() {
            let lg = emb.log_abs(gamma, rep)?;
            v[c] = lg.sub(&norm_target).midpoint_f64();
        }
        let l = &data.class_logs;
        let mut ltl = vec![vec![0.0f64; r]; r];
        let mut ltv = vec![0.0f64; r];
        for i in 0..r {
            for j in 0..r {
                ltl[i][j] = (0..reps.len())
                    .map(|c| l[c][i].midpoint_f64() * l[c][j].midpoint_f64())
                    .sum();
            }
            ltv[i] = (0..reps.len())
                .map(|c| l[c][i].midpoint_f64() * v[c])
                .sum();
        }
        let inv = invert_f64(&ltl).ok_or_else(|| {
            Error::RankDeficient("unit log matrix is numerically singular".to_string())
        })?;
        (0..r)
            .map(|i| {
                let t: f64 = (0..r).map(|j| inv[i][j] * ltv[j]).sum();
                -round_ties_to_zero(t)
            })
            .collect()
    };

    let ev = ExponentVector {
        torsion_index: 0,
        exponents: exponents.clone(),
    };
    let u = unit_from_exponents(k, basis, &ev)?;
    let reduced = gamma.mul(&u, k);

    let mut achieved = 0.0f64;
    for &rep in &reps {
        let lg = emb.log_abs(&reduced, rep)?;
        let dev = lg.sub(&target);
        let up = dev.abs_upper().to_f64_up();
        if up > achieved {
            achieved = up;
        }
    }
    Ok(Reduction {
        exponents,
        reduced,
        achieved,
    })
}

fn round_ties_to_zero(t: f64) -> i64 {
    let f = t.fract().abs();
    if (f - 0.5).abs() < 1e-12 {
        t.trunc() as i64
    } else {
        t.round() as i64
    }
}

/// Compares the computed regulator against a claimed value, tolerating
/// one percent.
pub fn check_regulator_claim(data: &UnitData, claimed: f64) -> Result<()> {
    let (lo, hi) = data.regulator.to_f64_bounds();
    if claimed <= 0.0 {
        return Err(Error::validation("claimed regulator must be positive"));
    }
    let rel = ((claimed - lo).abs().max((claimed - hi).abs())) / claimed;
    if (lo..=hi).contains(&claimed) || rel < 0.01 {
        Ok(())
    } else {
        Err(Error::validation(&format!(
            "claimed regulator {claimed} is not within 1% of the computed [{lo}, {hi}]"
        )))
    }
}
