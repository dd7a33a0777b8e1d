//! Solving machinery for twisted norm-form inequalities `|F(x, y)| <= m`.
//!
//! The pieces here split along the proof strategy: privileged embeddings
//! order the conjugates of the twist and of a candidate `beta = x - gamma y`
//! by certified modulus, `eliminate_xy` and `siegel_residual` recover and
//! cross-check solutions from embedding data, and the enumeration routines
//! turn the boxes produced by `bounds::compose_bounds` (or the elementary
//! imaginary-root box) into complete solution lists.

pub mod bounds;
pub mod provider;

pub use bounds::{compose_bounds, BoundReport, NamedConstant};
pub use provider::{corollary_multiplier, LinFormBoundProvider, MatveevProvider};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::algnum::{AlgElement, NumberField};
use crate::arith::{ComplexBall, RealBall};
use crate::embeddings::{self, EmbeddingSet};
use crate::error::{Error, Result};
use crate::forms::{twisted_form, BinaryForm};
use crate::heights::abs_log_height;
use crate::units::{self, ExponentVector, UnitBasis, UnitData};
use crate::{dirf, heights};

/// Embedding indices singled out by the certified modulus order of the
/// twist `gamma = alpha * unit` and of `beta = x - gamma y`. Indices refer
/// to conjugacy-class representatives in an `EmbeddingSet`; conjugate
/// embeddings share a modulus, so the extremum is a property of the class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrivilegedEmbeddings {
    /// Class representative maximizing `|phi(gamma)|`.
    pub sigma_a: usize,
    /// Class representative minimizing `|phi(gamma)|`.
    pub tau_a: usize,
    /// Class representative maximizing `|phi(beta)|`.
    pub sigma_b: usize,
    /// Class representative minimizing `|phi(beta)|`.
    pub tau_b: usize,
    /// Third embedding for the unit equation: distinct from `sigma_b` and
    /// `tau_b`, chosen to maximize the certified gap `|phi(gamma) - tau_b(gamma)|`.
    pub phi: usize,
    /// The minimizing class for `gamma` differs from the maximizing one
    /// and its conjugate.
    pub tau_a_generic: bool,
    /// Same for `beta`.
    pub tau_b_generic: bool,
    /// Another class comes within a factor 4 of the minimal `|phi(beta)|`;
    /// the contraction step must then run through the near-tie argument.
    pub tau_b_nonunique: bool,
}

/// Certified extremal conjugacy class of `|phi(gamma)|`. Returns the class
/// representative plus the per-class log moduli. Errs with
/// `PrecisionExhausted` when the winner cannot be strictly separated from
/// every other class, which is also the honest answer for exactly balanced
/// inputs (for example rational `gamma`): no precision settles those.
fn extremal_class(
    emb: &EmbeddingSet,
    gamma: &AlgElement,
    largest: bool,
) -> Result<(usize, Vec<(usize, RealBall)>)> {
    let reps = emb.class_representatives();
    let mut logs = Vec::with_capacity(reps.len());
    for &j in &reps {
        logs.push((j, emb.log_abs(gamma, j)?));
    }
    let mut best = 0usize;
    for i in 1..logs.len() {
        let better = if largest {
            logs[best].1.try_lt(&logs[i].1)
        } else {
            logs[i].1.try_lt(&logs[best].1)
        };
        match better {
            Some(true) => best = i,
            Some(false) => {}
            None => {
                // Could already be the eventual loser; decide against the
                // current champion only after scanning is not worth the
                // bookkeeping. Tightening precision is the cure either way.
                return Err(Error::precision(
                    emb.bits(),
                    "extremal conjugacy class is not separated at this precision",
                ));
            }
        }
    }
    // The scan certifies a chain, not the full order; re-check the winner
    // against every class so one ambiguous comparison cannot hide.
    for i in 0..logs.len() {
        if i == best {
            continue;
        }
        let ok = if largest {
            logs[i].1.try_lt(&logs[best].1)
        } else {
            logs[best].1.try_lt(&logs[i].1)
        };
        if ok != Some(true) {
            return Err(Error::precision(
                emb.bits(),
                "extremal conjugacy class is not separated at this precision",
            ));
        }
    }
    Ok((logs[best].0, logs))
}

/// Picks the four privileged embeddings for the pair `(gamma, beta)` and
/// the third embedding used by the unit equation.
pub fn select_privileged(
    emb: &EmbeddingSet,
    gamma: &AlgElement,
    beta: &AlgElement,
) -> Result<PrivilegedEmbeddings> {
    if emb.degree() < 3 {
        return Err(Error::validation(
            "privileged embeddings need degree at least 3",
        ));
    }
    let (sigma_a, _) = extremal_class(emb, gamma, true)?;
    let (tau_a, _) = extremal_class(emb, gamma, false)?;
    let (sigma_b, _) = extremal_class(emb, beta, true)?;
    let (tau_b, logs_b) = extremal_class(emb, beta, false)?;

    // Near-tie flag: some other class within factor 4 of the minimum
    // modulus. `ln 4` padded up by one ulp-ball keeps the test one-sided.
    let ln4 = crate::arith::ln2(crate::embeddings::working_scale(emb.bits())).mul_pow2(1);
    let min_log = logs_b
        .iter()
        .find(|(j, _)| *j == tau_b)
        .map(|(_, l)| l.clone())
        .expect("winner is among the scanned classes");
    let threshold = min_log.add(&ln4);
    let mut nonunique = false;
    for (j, l) in &logs_b {
        if *j != tau_b && threshold.try_lt(l) != Some(true) {
            nonunique = true;
        }
    }

    // Third embedding: any index outside {sigma_b, tau_b} qualifies; take
    // the one farthest from tau_b on the twist, by certified distance.
    let tb_val = emb.embed(gamma, tau_b);
    let mut phi = None;
    let mut best_gap = 0.0f64;
    for j in 0..emb.degree() {
        if j == sigma_b || j == tau_b {
            continue;
        }
        let gap = emb
            .embed(gamma, j)
            .dist_lower(&tb_val)
            .map(|g| g.to_f64_up())
            .unwrap_or(0.0);
        if phi.is_none() || gap > best_gap {
            phi = Some(j);
            best_gap = gap;
        }
    }
    let phi = phi.expect("degree >= 3 leaves a third embedding");

    Ok(PrivilegedEmbeddings {
        sigma_a,
        tau_a,
        sigma_b,
        tau_b,
        phi,
        tau_a_generic: tau_a != sigma_a,
        tau_b_generic: tau_b != sigma_b,
        tau_b_nonunique: nonunique,
    })
}

/// Size parameters of one candidate solution `(x, y)` of the member with
/// twist exponents `a`: the exponent heights `A`, `B` and the logarithmic
/// heights `A~ = max(1, h(gamma))`, `B~ = max(1, h(beta))`, together with
/// the balanced part `rho` of `beta` and its height.
///
/// The composed constants tie these together: `c4 A <= A~ <= c3 A`,
/// `B~ <= c8 (B + log m)`, `B <= c9 (B~ + log m)`, `h(rho) <= c7 log m`.
#[derive(Clone, Debug)]
pub struct ParameterProfile {
    pub a: i64,
    pub b: i64,
    pub a_tilde: f64,
    pub b_tilde: f64,
    pub rho_height: f64,
    /// Exponents of the unit part of `beta = rho * prod eps_i^{b_i}`.
    pub eta_exponents: Vec<i64>,
}

/// Measures a candidate `(x, y)` against the member `gamma = alpha *
/// prod eps_i^{a_i}`. `m` scales the balancing target for the unit
/// reduction of `beta`; heights are reported as upper bounds.
pub fn parameter_profile(
    k: &NumberField,
    emb: &EmbeddingSet,
    basis: &UnitBasis,
    data: &UnitData,
    alpha: &AlgElement,
    exponents: &[i64],
    x: &BigInt,
    y: &BigInt,
    m: &BigInt,
) -> Result<ParameterProfile> {
    if alpha.is_zero() {
        return Err(Error::ZeroElement);
    }
    if m.sign() != num_bigint::Sign::Plus {
        return Err(Error::validation("bound m must be positive"));
    }
    let unit = units::unit_from_exponents(
        k,
        basis,
        &ExponentVector {
            torsion_index: 0,
            exponents: exponents.to_vec(),
        },
    )?;
    let gamma = alpha.mul(&unit, k);
    let a_cap = exponents.iter().map(|e| e.abs()).max().unwrap_or(0).max(1);
    let h_gamma = abs_log_height(&gamma, k, emb.bits())?.to_f64_bounds().1;
    let a_tilde = h_gamma.max(1.0);

    let beta = k
        .from_rational(&BigRational::from_integer(x.clone()))
        .sub(&gamma.scale(&BigRational::from_integer(y.clone())));
    if beta.is_zero() {
        return Err(Error::ZeroElement);
    }
    let b_tilde = abs_log_height(&beta, k, emb.bits())?
        .to_f64_bounds()
        .1
        .max(1.0);

    // a0 * beta is an algebraic integer; balance it against the enlarged
    // target |a0|^d m, which dominates |N(a0 beta)|.
    let a0 = alpha.min_poly_integer(k).leading().abs();
    let d = k.degree() as u32;
    let scaled = beta.scale(&BigRational::from_integer(a0.clone()));
    let m_scaled = a0.pow(d) * m;
    let red = units::reduce_by_units(k, emb, basis, data, &scaled, &m_scaled)?;
    let eta_exponents: Vec<i64> = red.exponents.iter().map(|e| -e).collect();
    let b_cap = eta_exponents
        .iter()
        .map(|e| e.abs())
        .max()
        .unwrap_or(0)
        .max(1);

    // rho = reduced / a0, so h(rho) <= h(reduced) + log a0.
    let h_red = abs_log_height(&red.reduced, k, emb.bits())?.to_f64_bounds().1;
    let ln_a0 = RealBall::from_bigint(&a0, 64).ln()?.to_f64_bounds().1;
    let rho_height = dirf::add_up(h_red, ln_a0);

    Ok(ParameterProfile {
        a: a_cap,
        b: b_cap,
        a_tilde,
        b_tilde,
        rho_height,
        eta_exponents,
    })
}

/// Elementary enumeration box for a form without real roots.
#[derive(Clone, Copy, Debug)]
pub struct EnumerationBox {
    pub y_bound: f64,
    pub x_bound: f64,
}

/// Box containing every solution of `|F(x, y)| <= m` with `y != 0`, for a
/// squarefree form `F` all of whose roots are strictly complex: each
/// conjugate pair contributes `(Im alpha_j * y)^2` to `|F(x, y)| / |a0|`,
/// so `|y| <= (m / (|a0| prod Im^2))^(1/d)`, and some factor `|x - alpha_j y|`
/// is at most `(m/|a0|)^(1/d)`, bounding `|x|` in turn.
pub fn lemma3_bounds(form: &BinaryForm, m: &BigInt, bits: u32) -> Result<EnumerationBox> {
    if m.sign() != num_bigint::Sign::Plus {
        return Err(Error::validation("bound m must be positive"));
    }
    let f = form.dehomogenize();
    let d = form.degree() as f64;
    if f.degree() != form.degree() {
        return Err(Error::validation("form must have full degree in x"));
    }
    let disks = embeddings::root_enclosures(&f, bits)?;
    let ordered = embeddings::order_roots(disks, bits)?;
    if ordered.r1() > 0 {
        return Err(Error::RealRootPresent);
    }

    let m_up = RealBall::from_bigint(m, 64).to_f64_bounds().1;
    let a0 = form.leading().abs();
    let (a0_lo, _) = RealBall::from_bigint(&a0, 64).to_f64_bounds();

    // prod over conjugate pairs of Im^2, from below.
    let mut prod_lo = a0_lo;
    for &j in &ordered.class_representatives() {
        let (im_lo, im_hi) = ordered.root(j).im_ball().to_f64_bounds();
        let im_abs_lo = if im_lo > 0.0 {
            im_lo
        } else if im_hi < 0.0 {
            -im_hi
        } else {
            return Err(Error::precision(
                bits,
                "imaginary part of a root is not separated from zero",
            ));
        };
        prod_lo = dirf::mul_down(prod_lo, dirf::mul_down(im_abs_lo, im_abs_lo));
    }
    let y_bound = dirf::div_up(
        dirf::powf_up(m_up, 1.0 / d),
        dirf::powf_down(prod_lo, 1.0 / d),
    );

    let mut max_root = 0.0f64;
    for r in ordered.roots() {
        max_root = max_root.max(r.mod_upper().to_f64_up());
    }
    let unit_box = dirf::powf_up(dirf::div_up(m_up, a0_lo), 1.0 / d);
    let x_bound = dirf::mul_up(2.0, dirf::mul_up(max_root, y_bound)).max(dirf::mul_up(2.0, unit_box));
    Ok(EnumerationBox { y_bound, x_bound })
}

fn floor_cap(bound: f64, what: &str) -> Result<i64> {
    if !bound.is_finite() {
        return Err(Error::validation(format!("{what} bound is not finite")));
    }
    if bound > 1e15 {
        return Err(Error::validation(format!(
            "{what} bound {bound:.3e} is too large to enumerate"
        )));
    }
    Ok(bound.floor() as i64)
}

/// All integer solutions of `|F(x, y)| <= m` for a form without real
/// roots, by exact evaluation over the elementary box. Solutions come out
/// sorted by `(y, x)` and closed under `(x, y) -> (-x, -y)`; the axes
/// `xy = 0` are excluded unless `include_axes` is set.
pub fn solve_fixed_totally_imaginary(
    form: &BinaryForm,
    m: &BigInt,
    include_axes: bool,
    bits: u32,
) -> Result<Vec<(BigInt, BigInt)>> {
    let boxed = lemma3_bounds(form, m, bits)?;
    let y_max = floor_cap(boxed.y_bound, "y")?;
    let x_max = floor_cap(boxed.x_bound, "x")?;
    let mut sols = Vec::new();
    for y in 1..=y_max {
        let yb = BigInt::from(y);
        for x in -x_max..=x_max {
            if x == 0 {
                continue;
            }
            let xb = BigInt::from(x);
            if form.evaluate(&xb, &yb).abs() <= *m {
                sols.push((-&xb, -&yb));
                sols.push((xb, yb.clone()));
            }
        }
    }
    if include_axes {
        // |a0 x^d| <= m on y = 0 and |a_d y^d| <= m on x = 0.
        let d = form.degree() as f64;
        let m_up = RealBall::from_bigint(m, 64).to_f64_bounds().1;
        let lead_lo = RealBall::from_bigint(&form.leading().abs(), 64)
            .to_f64_bounds()
            .0;
        let x_axis = floor_cap(dirf::powf_up(dirf::div_up(m_up, lead_lo), 1.0 / d), "x")?;
        for x in 1..=x_axis {
            let xb = BigInt::from(x);
            if form.evaluate(&xb, &BigInt::zero()).abs() <= *m {
                sols.push((xb.clone(), BigInt::zero()));
                sols.push((-xb, BigInt::zero()));
            }
        }
        let tail = form.coeffs().last().expect("form has coefficients").abs();
        if !tail.is_zero() {
            let tail_lo = RealBall::from_bigint(&tail, 64).to_f64_bounds().0;
            let y_axis = floor_cap(dirf::powf_up(dirf::div_up(m_up, tail_lo), 1.0 / d), "y")?;
            for y in 1..=y_axis {
                let yb = BigInt::from(y);
                if form.evaluate(&BigInt::zero(), &yb).abs() <= *m {
                    sols.push((BigInt::zero(), yb.clone()));
                    sols.push((BigInt::zero(), -yb));
                }
            }
        }
        sols.push((BigInt::zero(), BigInt::zero()));
    }
    sols.sort();
    sols.dedup();
    Ok(sols)
}

/// Recovers `(x, y)` from two embeddings of `beta = x - gamma y`:
/// `y = (phi1(beta) - phi2(beta)) / (phi2(gamma) - phi1(gamma))` and
/// `x = (phi1(beta) phi2(gamma) - phi2(beta) phi1(gamma)) / (phi2(gamma) - phi1(gamma))`.
pub fn eliminate_xy(
    beta1: &ComplexBall,
    beta2: &ComplexBall,
    gamma1: &ComplexBall,
    gamma2: &ComplexBall,
) -> Result<(ComplexBall, ComplexBall)> {
    let den = gamma2.sub(gamma1);
    if den.contains_zero() {
        return Err(Error::CoincidentEmbeddings);
    }
    let y = beta1.sub(beta2).div(&den)?;
    let x = beta1.mul(gamma2).sub(&beta2.mul(gamma1)).div(&den)?;
    Ok((x, y))
}

/// Alternating sum `u1 v2 - u1 v3 + u2 v3 - u2 v1 + u3 v1 - u3 v2`. It
/// vanishes identically when `u_i = phi_i(x - gamma y)` and
/// `v_i = phi_i(gamma)` for a common `(x, y)`, so a residual ball
/// excluding zero refutes a claimed solution triple.
pub fn siegel_residual(u: &[ComplexBall], v: &[ComplexBall]) -> Result<ComplexBall> {
    if u.len() != 3 || v.len() != 3 {
        return Err(Error::validation("siegel residual takes three embeddings"));
    }
    let t12 = u[0].mul(&v[1]);
    let t13 = u[0].mul(&v[2]);
    let t23 = u[1].mul(&v[2]);
    let t21 = u[1].mul(&v[0]);
    let t31 = u[2].mul(&v[0]);
    let t32 = u[2].mul(&v[1]);
    Ok(t12.sub(&t13).add(&t23).sub(&t21).add(&t31).sub(&t32))
}

/// Enumeration limits for `solve_family`. `max_exponent` caps the twist
/// exponents coordinatewise, `max_xy` caps `max(|x|, |y|)` per member.
#[derive(Clone, Copy, Debug)]
pub struct SolveCaps {
    pub max_exponent: i64,
    pub max_xy: i64,
}

/// Whether an enumeration provably covered the full solution set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Completeness {
    /// Every composed bound lies inside the enumerated region.
    Certified,
    /// Some cap was smaller than a composed or elementary bound; the
    /// listing is complete only within the capped region.
    Capped,
}

/// One solved member of a twisted family.
#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub exponents: Vec<i64>,
    pub form: BinaryForm,
    /// Solutions with `xy != 0`, sorted.
    pub solutions: Vec<(BigInt, BigInt)>,
}

/// Outcome of a family enumeration.
#[derive(Clone, Debug)]
pub struct FamilySolutions {
    pub members: Vec<FamilyMember>,
    /// Exponent vectors whose twist fails to generate the field; the
    /// inequality degenerates there and is excluded from the family.
    pub skipped: Vec<Vec<i64>>,
    pub completeness: Completeness,
    pub report: BoundReport,
}

/// Solves `|F_a(x, y)| <= m` for every member `gamma_a = alpha prod
/// eps_i^{a_i}` with `|a_i|` below the composed exponent bound and the
/// cap. Members whose twist is degenerate are skipped and recorded. For a
/// totally imaginary field each member gets the elementary box (further
/// capped by `caps.max_xy`); with a real embedding present the elementary
/// box does not exist and the cap alone delimits the search, so the result
/// is always `Capped` there.
pub fn solve_family(
    k: &NumberField,
    emb: &EmbeddingSet,
    basis: &UnitBasis,
    data: &UnitData,
    alpha: &AlgElement,
    m: &BigInt,
    caps: &SolveCaps,
    provider: &dyn LinFormBoundProvider,
) -> Result<FamilySolutions> {
    if caps.max_exponent < 0 || caps.max_xy <= 0 {
        return Err(Error::validation("caps must be positive"));
    }
    if m.sign() == num_bigint::Sign::Minus {
        return Err(Error::validation("bound m must be nonnegative"));
    }
    // The chain needs m >= 2; its bounds for m = 2 majorize those for
    // smaller m, so enumeration below still tests against the true m.
    let two = BigInt::from(2);
    let m_eff = if *m < two { &two } else { m };
    let report = compose_bounds(k, emb, basis, data, alpha, m_eff, provider)?;
    let r = basis.units.len();
    let exp_cap = if report.a_bound <= caps.max_exponent as f64 {
        report.a_bound.floor() as i64
    } else {
        caps.max_exponent
    };
    let width = 2 * exp_cap as u128 + 1;
    if width.pow(r as u32) > 2_000_000 {
        return Err(Error::validation("exponent cap too large to enumerate"));
    }

    let mut capped = report.a_bound > caps.max_exponent as f64 || emb.r1() > 0;
    let mut members = Vec::new();
    let mut skipped = Vec::new();
    let mut exps = vec![-exp_cap; r];
    loop {
        let unit = units::unit_from_exponents(
            k,
            basis,
            &ExponentVector {
                torsion_index: 0,
                exponents: exps.clone(),
            },
        )?;
        let gamma = alpha.mul(&unit, k);
        match twisted_form(k, &gamma) {
            Err(Error::DegenerateTwist) => skipped.push(exps.clone()),
            Err(e) => return Err(e),
            Ok(form) => {
                let (y_max, x_max) = if emb.r1() == 0 {
                    let boxed = lemma3_bounds(&form, m_eff, emb.bits())?;
                    let y_full = floor_cap(boxed.y_bound, "y")?;
                    let x_full = floor_cap(boxed.x_bound, "x")?;
                    if y_full > caps.max_xy || x_full > caps.max_xy {
                        capped = true;
                    }
                    (y_full.min(caps.max_xy), x_full.min(caps.max_xy))
                } else {
                    (caps.max_xy, caps.max_xy)
                };
                let mut sols = Vec::new();
                for y in 1..=y_max {
                    let yb = BigInt::from(y);
                    for x in -x_max..=x_max {
                        if x == 0 {
                            continue;
                        }
                        let xb = BigInt::from(x);
                        if form.evaluate(&xb, &yb).abs() <= *m {
                            sols.push((-&xb, -&yb));
                            sols.push((xb, yb.clone()));
                        }
                    }
                }
                sols.sort();
                sols.dedup();
                members.push(FamilyMember {
                    exponents: exps.clone(),
                    form,
                    solutions: sols,
                });
            }
        }
        // odometer over [-exp_cap, exp_cap]^r
        let mut i = 0;
        loop {
            if i == r {
                return Ok(FamilySolutions {
                    members,
                    skipped,
                    completeness: if capped {
                        Completeness::Capped
                    } else {
                        Completeness::Certified
                    },
                    report,
                });
            }
            if exps[i] < exp_cap {
                exps[i] += 1;
                break;
            }
            exps[i] = -exp_cap;
            i += 1;
        }
    }
}

/// Heights of the field data entering the bound composition, all as
/// one-sided f64 bounds.
pub(crate) struct FieldHeights {
    pub h_alpha: f64,
    pub sum_h: f64,
    pub max_h: f64,
    pub ln_a0: f64,
}

pub(crate) fn field_heights(
    k: &NumberField,
    emb: &EmbeddingSet,
    basis: &UnitBasis,
    alpha: &AlgElement,
) -> Result<FieldHeights> {
    if alpha.is_zero() {
        return Err(Error::ZeroElement);
    }
    let h_alpha = abs_log_height(alpha, k, emb.bits())?.to_f64_bounds().1;
    let mut sum_h = 0.0f64;
    let mut max_h = 0.0f64;
    for u in &basis.units {
        let h = heights::abs_log_height(u, k, emb.bits())?.to_f64_bounds().1;
        sum_h = dirf::add_up(sum_h, h);
        max_h = max_h.max(h);
    }
    let a0 = alpha.min_poly_integer(k).leading().abs();
    let ln_a0 = if a0.to_u64() == Some(1) {
        0.0
    } else {
        RealBall::from_bigint(&a0, 64).ln()?.to_f64_bounds().1
    };
    Ok(FieldHeights {
        h_alpha,
        sum_h,
        max_h,
        ln_a0,
    })
}
