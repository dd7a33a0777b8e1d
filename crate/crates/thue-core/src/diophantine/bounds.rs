//! Composition of the effective solution bounds.
//!
//! Everything funnels into `compose_bounds`, which turns the field data
//! (degree, unit lattice, twist base point `alpha`) and the inequality
//! bound `m` into one explicit constant `kappa1` with: every solution
//! `(x, y)` of `|F_a(x, y)| <= m` with `xy != 0`, for any member of the
//! twisted family, satisfies `max(|x|, |y|) <= m^kappa1`, and its twist
//! exponents satisfy `max|a_i| <= kappa_final log m`.
//!
//! The chain walks the contraction argument: elementary estimates relate
//! the exponent sizes `A`, `B` to the heights of the twist and of
//! `beta = x - gamma y`; the linear-forms-in-logarithms provider turns
//! unit equations at the privileged embeddings into inequalities of the
//! shape `u <= a log(2 + u) + b`, whose largest fixed points give the
//! final multiples of `log m`. Four exhaustive cases (small twist
//! exponent, small unit exponent, near-tied minimal embedding, and the
//! generic contraction) are each bounded and the maximum taken.
//!
//! Rounding discipline: quantities that must not be underestimated are
//! computed with upward-directed f64 steps, lower-bound gaps (`kappa4`
//! and its derivatives) downward. The composition is deterministic: the
//! same inputs produce bit-identical reports.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::provider::{corollary_multiplier, LinFormBoundProvider};
use super::{field_heights, FieldHeights};
use crate::algnum::{AlgElement, NumberField};
use crate::arith::RealBall;
use crate::dirf::{add_up, div_down, div_up, exp_up, mul_up};
use crate::embeddings::EmbeddingSet;
use crate::error::{Error, Result};
use crate::units::{UnitBasis, UnitData};

const LN_2: f64 = std::f64::consts::LN_2;

/// One constant of the chain, with the names of the constants it was
/// computed from. Constants appear in computation order, so every input
/// refers to an earlier entry and the listing is acyclic by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedConstant {
    pub name: &'static str,
    pub value: f64,
    /// What the constant does in the chain.
    pub lemma_tag: &'static str,
    pub inputs: Vec<&'static str>,
}

/// The composed bound chain for one family.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub constants: Vec<NamedConstant>,
    /// `max(A, B) <= kappa_final * log m` for solutions with `xy != 0`.
    pub kappa_final: f64,
    /// `max(|x|, |y|) <= m^kappa1` and `h(gamma) <= kappa1 log m`.
    pub kappa1: f64,
    pub a_bound: f64,
    pub b_bound: f64,
    /// `log max(|x|, |y|) <= log_xy_bound`; kept in log scale because
    /// `m^kappa1` overflows floating point for every realistic chain.
    pub log_xy_bound: f64,
    /// `exp(log_xy_bound)`, infinite when it overflows.
    pub xy_bound: f64,
    pub log_m: f64,
    pub degree: usize,
    pub rank: usize,
    /// Number of terms handed to the linear-forms provider.
    pub s: u32,
    /// Field degree handed to the provider: the three embeddings in play
    /// land in a compositum of degree at most `min(d!, d^3)`.
    pub provider_degree: u32,
    pub provider: String,
}

impl BoundReport {
    pub fn constant(&self, name: &str) -> Option<f64> {
        self.constants
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.value)
    }

    /// One line per constant: `name = value  [tag]  <- inputs`.
    pub fn dependency_listing(&self) -> String {
        let mut out = String::new();
        for c in &self.constants {
            out.push_str(&format!("{} = {:.6e}  [{}]", c.name, c.value, c.lemma_tag));
            if !c.inputs.is_empty() {
                out.push_str("  <- ");
                out.push_str(&c.inputs.join(", "));
            }
            out.push('\n');
        }
        out
    }
}

struct Chain {
    constants: Vec<NamedConstant>,
}

impl Chain {
    fn new() -> Chain {
        Chain { constants: vec![] }
    }

    fn push(
        &mut self,
        name: &'static str,
        value: f64,
        lemma_tag: &'static str,
        inputs: &[&'static str],
    ) -> f64 {
        debug_assert!(
            inputs
                .iter()
                .all(|i| self.constants.iter().any(|c| c.name == *i)),
            "constant {name} references an input that is not yet defined"
        );
        debug_assert!(
            self.constants.iter().all(|c| c.name != name),
            "constant {name} defined twice"
        );
        self.constants.push(NamedConstant {
            name,
            value,
            lemma_tag,
            inputs: inputs.to_vec(),
        });
        value
    }
}

fn powi_up(x: f64, n: usize) -> f64 {
    let mut acc = 1.0f64;
    for _ in 0..n {
        acc = mul_up(acc, x);
    }
    acc
}

/// Largest `u >= 0` with `u <= a log(2 + scale u) + b`, rounded up. The
/// right side is concave, so the feasible set is an interval `[0, u*]`;
/// doubling finds a point past the crossing and bisection narrows it.
/// The right side is evaluated upward, so the returned endpoint is a
/// certified upper bound for the true fixed point.
fn largest_fixed_point(a: f64, scale: f64, b: f64) -> f64 {
    let rhs =
        |u: f64| add_up(mul_up(a, crate::dirf::ln_up(add_up(2.0, mul_up(scale, u)))), b);
    let mut lo = 0.0f64;
    let mut hi = (4.0f64).max(2.0 * b + 4.0).max(a + b);
    let mut rounds = 0;
    while rhs(hi) >= hi {
        lo = hi;
        hi *= 2.0;
        rounds += 1;
        if rounds > 400 {
            return f64::INFINITY;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if rhs(mid) >= mid {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

fn provider_degree(d: usize) -> u32 {
    let cube = (d as u128).pow(3);
    let mut fact: u128 = 1;
    for i in 2..=d as u128 {
        fact = fact.saturating_mul(i);
        if fact >= cube {
            break;
        }
    }
    fact.min(cube).min(u32::MAX as u128) as u32
}

/// Builds the full constant chain for the family `F_a(x, y)` attached to
/// `gamma_a = alpha prod eps_i^{a_i}`.
///
/// Requires a field with at most one real embedding, unit rank at least
/// one, nonzero `alpha`, and `m >= 2`. The produced constants are
/// independent of `m`; only the final `a_bound`, `b_bound` and the `xy`
/// box scale with `log m`.
pub fn compose_bounds(
    k: &NumberField,
    emb: &EmbeddingSet,
    basis: &UnitBasis,
    data: &UnitData,
    alpha: &AlgElement,
    m: &BigInt,
    provider: &dyn LinFormBoundProvider,
) -> Result<BoundReport> {
    if !emb.is_almost_totally_imaginary() {
        return Err(Error::validation(
            "bound composition needs at most one real embedding",
        ));
    }
    if m.to_f64().map(|v| v < 2.0).unwrap_or(false) || m.sign() != num_bigint::Sign::Plus {
        return Err(Error::validation("bound m must be at least 2"));
    }
    let r = data.rank;
    if r == 0 {
        return Err(Error::validation(
            "bound composition needs positive unit rank",
        ));
    }
    let d = k.degree();
    let df = d as f64;
    let kappa4 = data
        .kappa4
        .ok_or_else(|| Error::RankDeficient("unit data carries no exponent gap".into()))?;

    let FieldHeights {
        h_alpha,
        sum_h,
        max_h,
        ln_a0,
    } = field_heights(k, emb, basis, alpha)?;

    let (log_m_lo, log_m_up) = RealBall::from_bigint(m, 96).ln()?.to_f64_bounds();
    if log_m_lo < 0.5 * LN_2 {
        return Err(Error::validation("bound m must be at least 2"));
    }

    let mut ch = Chain::new();

    // Leaf data.
    ch.push("d", df, "field degree", &[]);
    ch.push("r", r as f64, "unit rank", &[]);
    ch.push("h_alpha", h_alpha, "height of the twist base point", &[]);
    ch.push("sum_unit_heights", sum_h, "sum of the unit generator heights", &[]);
    ch.push("max_unit_height", max_h, "largest unit generator height", &[]);
    ch.push("log_lead", ln_a0, "log of the leading coefficient of the base point", &[]);
    ch.push(
        "c1",
        data.c1,
        "sum of the unit house logs; trivial embedding growth rate",
        &[],
    );
    ch.push(
        "c_red",
        data.c_red,
        "balancing quality of the rounded unit reduction",
        &[],
    );
    ch.push(
        "kappa4",
        kappa4,
        "d h(u) >= kappa4 max|b_i| over the unit lattice",
        &["d"],
    );

    // Embedding gap constants (lower bounds: rounded down).
    let kappa_pa = ch.push(
        "kappa_pa",
        div_down(kappa4, df),
        "a unit power has an embedding above exp(kappa_pa C) and one below the inverse",
        &["kappa4", "d"],
    );
    let kappa_min = ch.push(
        "kappa_min",
        0.5 * kappa_pa,
        "privileged embedding gap per exponent unit, past the threshold",
        &["kappa_pa"],
    );
    let kappa_msab = ch.push(
        "kappa_msab",
        0.5 * kappa_min,
        "growth of |sigma_a(beta)| per twist exponent unit",
        &["kappa_min"],
    );
    let kappa_ult1 = ch.push(
        "kappa_ult1",
        0.5 * kappa_msab,
        "decay rate of both terms in the final two-sided unit equation",
        &["kappa_msab"],
    );

    // Height comparison constants (upper bounds: rounded up).
    let c3 = ch.push(
        "c3",
        add_up(h_alpha, sum_h).max(1.0),
        "h(gamma) <= c3 A",
        &["h_alpha", "sum_unit_heights"],
    );
    let a_knee = div_up(mul_up(2.0, h_alpha), kappa_pa).max(1.0);
    let _c4 = ch.push(
        "c4",
        kappa_min.min(div_down(1.0, a_knee)),
        "c4 A <= max(1, h(gamma))",
        &["kappa_min", "h_alpha", "kappa_pa"],
    );
    let c7 = ch.push(
        "c7",
        add_up(
            div_up(2.0, df),
            div_up(add_up(data.c_red, mul_up(3.0, ln_a0)), LN_2),
        ),
        "h(rho) <= c7 log m for the balanced part of beta",
        &["d", "c_red", "log_lead"],
    );
    let c8 = ch.push(
        "c8",
        c7.max(sum_h).max(1.0),
        "max(1, h(beta)) <= c8 (B + log m)",
        &["c7", "sum_unit_heights"],
    );
    let _c9 = ch.push(
        "c9",
        div_up(mul_up(df, c7.max(1.0)), kappa4).max(1.0),
        "B <= c9 (max(1, h(beta)) + log m)",
        &["d", "c7", "kappa4"],
    );

    // Conjugate separation: off any root of the minimal polynomial of a
    // degree-d element gamma, |gamma_i - gamma_j| >= exp(-kappa_sep max(1, h)).
    let pairs = df * (df - 1.0) / 2.0;
    let kappa_sep = ch.push(
        "kappa_sep",
        add_up(df * (df - 1.0), mul_up(pairs - 1.0, df + LN_2)),
        "conjugate separation exponent per unit height",
        &["d"],
    );

    // Threshold below which the elementary elimination bound finishes.
    let kappa_lb = ch.push(
        "kappa_lb",
        (2.0 / LN_2)
            .max(div_up(mul_up(2.0, h_alpha), kappa_pa * LN_2))
            .max(div_up(mul_up(2.0, c7), kappa_pa))
            .max(div_up(4.0, kappa_min)),
        "exponents above kappa_lb log m activate the embedding gap estimates",
        &["h_alpha", "kappa_pa", "c7", "kappa_min"],
    );
    let kappa_maj = ch.push(
        "kappa_maj",
        mul_up(df, c3).max(mul_up(mul_up(df, c8), add_up(1.0, div_up(1.0, kappa_lb)))),
        "|sigma_a(gamma)| <= exp(kappa_maj A) and |sigma_b(beta)| <= exp(kappa_maj B)",
        &["d", "c3", "c8", "kappa_lb"],
    );

    // Provider inputs.
    let s = (r + 1) as u32;
    let dprov = provider_degree(d);
    ch.push("s", s as f64, "terms handed to the linear-forms provider", &["r"]);
    ch.push(
        "provider_degree",
        dprov as f64,
        "compositum degree bound for the three embeddings in play",
        &["d"],
    );
    let kappa_cor = ch.push(
        "kappa_cor",
        corollary_multiplier(provider, s, dprov),
        "multiplier of H_1 ... H_s log C in the linear-forms lower bound",
        &["s", "provider_degree"],
    );
    let kappa_hr = ch.push(
        "kappa_hr",
        (2.0 * max_h).max(1.0),
        "height cap for the unit-quotient terms",
        &["max_unit_height"],
    );
    let hr_pow = powi_up(kappa_hr, r);

    // Case: twist exponent small, A <= kappa_lb log m. The unit equation
    // at (sigma_b, tau_b, phi) contracts B.
    let kappa_a4 = ch.push(
        "kappa_a4",
        add_up(mul_up(df, c3), add_up(LN_2, mul_up(kappa_sep, c3))),
        "embedding-difference quotient of the twist grows at most exp(kappa_a4 A)",
        &["d", "c3", "kappa_sep"],
    );
    let kappa_hs_a = ch.push(
        "kappa_hs_a",
        kappa_hr.max(add_up(
            mul_up(2.0, c7),
            add_up(mul_up(mul_up(4.0, c3), kappa_lb), 2.0 * LN_2),
        )),
        "height cap, per (1 + log m), of the mixed term when A is small",
        &["kappa_hr", "c7", "c3", "kappa_lb"],
    );
    let a_small_a = div_up(mul_up(kappa_cor, mul_up(hr_pow, kappa_hs_a)), 2.0 * kappa_min);
    let a_small_b = div_up(mul_up(kappa_a4, kappa_lb), 2.0 * kappa_min);
    let kappa_b_of_a = ch.push(
        "kappa_b_of_a",
        mul_up(
            largest_fixed_point(a_small_a, 1.0, a_small_b),
            add_up(1.0, 1.0 / LN_2),
        ),
        "B <= kappa_b_of_a log m whenever A <= kappa_lb log m",
        &["kappa_cor", "kappa_hr", "kappa_hs_a", "kappa_a4", "kappa_lb", "kappa_min", "r"],
    );

    // Case: unit exponent small, B <= kappa_lb log m. Mirror argument at
    // (sigma_a, tau_a, phi) contracts A.
    let kappa_b4 = ch.push(
        "kappa_b4",
        add_up(
            mul_up(mul_up(df + kappa_sep, c8), add_up(kappa_lb, 1.0)),
            1.0,
        ),
        "embedding-difference quotient of beta, per log m, when B is small",
        &["d", "kappa_sep", "c8", "kappa_lb"],
    );
    let kappa_hs_b = ch.push(
        "kappa_hs_b",
        kappa_hr.max(add_up(
            mul_up(2.0, h_alpha),
            add_up(mul_up(mul_up(4.0, c8), add_up(kappa_lb, 1.0)), 2.0 * LN_2),
        )),
        "height cap, per (1 + log m), of the mixed term when B is small",
        &["kappa_hr", "h_alpha", "c8", "kappa_lb"],
    );
    let b_small_a = div_up(mul_up(kappa_cor, mul_up(hr_pow, kappa_hs_b)), 2.0 * kappa_min);
    let b_small_b = div_up(kappa_b4, 2.0 * kappa_min);
    let kappa_a_of_b = ch.push(
        "kappa_a_of_b",
        mul_up(
            largest_fixed_point(b_small_a, 1.0, b_small_b),
            add_up(1.0, 1.0 / LN_2),
        ),
        "A <= kappa_a_of_b log m whenever B <= kappa_lb log m",
        &["kappa_cor", "kappa_hr", "kappa_hs_b", "kappa_b4", "kappa_lb", "kappa_min", "r"],
    );

    // Generic case, step 1: A is controlled by B because tau_b pins y
    // against sigma_a.
    let kappa_amb = ch.push(
        "kappa_amb",
        div_up(add_up(kappa_maj, 2.0 * LN_2), kappa_min),
        "A <= kappa_amb B in the generic case",
        &["kappa_maj", "kappa_min"],
    );

    // Near-tie case: a second embedding within factor 4 of |tau_b(beta)|
    // freezes B at a constant.
    let kappa_h9 = ch.push(
        "kappa_h9",
        (2.0 * max_h).max(mul_up(2.0, h_alpha)).max(1.0),
        "height cap for the tie equation terms",
        &["max_unit_height", "h_alpha"],
    );
    let tie_a = div_up(mul_up(kappa_cor, powi_up(kappa_h9, s as usize)), kappa_min);
    let tie_b = div_up(2.0 * LN_2, kappa_min);
    let kappa_ut = ch.push(
        "kappa_ut",
        largest_fixed_point(tie_a, kappa_amb, tie_b),
        "absolute bound on B when the minimal embedding of beta is near-tied",
        &["kappa_cor", "kappa_h9", "kappa_min", "kappa_amb", "s"],
    );

    // Generic case, step 2: B is controlled by A through the conjugate
    // pair of sigma_b (which exists: tau_b is the real embedding there).
    let kappa_expa = ch.push(
        "kappa_expa",
        add_up(mul_up(df + kappa_sep, c3), LN_2),
        "the twist difference quotient grows at most exp(kappa_expa A)",
        &["d", "kappa_sep", "c3"],
    );
    let kappa_h10 = ch.push(
        "kappa_h10",
        kappa_hr.max(add_up(
            mul_up(4.0, c3),
            add_up(2.0 * LN_2, div_up(mul_up(2.0, c7), kappa_lb)),
        )),
        "height cap, per A, of the mixed term in the B-versus-A equation",
        &["kappa_hr", "c3", "c7", "kappa_lb"],
    );
    let bma_a = div_up(mul_up(kappa_cor, mul_up(hr_pow, kappa_h10)), 2.0 * kappa_min);
    let bma_b = div_up(kappa_expa, 2.0 * kappa_min);
    let kappa_bma = ch.push(
        "kappa_bma",
        largest_fixed_point(bma_a, 1.0, bma_b),
        "B <= kappa_bma A in the generic case",
        &["kappa_cor", "kappa_hr", "kappa_h10", "kappa_expa", "kappa_min", "r"],
    );

    // Generic case, step 3: the two-sided equation at (sigma_a, conj
    // sigma_a, tau_b) bounds A + B against log m.
    let kappa_h11 = ch.push(
        "kappa_h11",
        kappa_hr.max(add_up(mul_up(2.0, h_alpha), mul_up(2.0, c7))),
        "height cap, per (1 + log m), of the mixed term in the final equation",
        &["kappa_hr", "h_alpha", "c7"],
    );
    let ult_a = div_up(
        mul_up(add_up(1.0, kappa_bma), mul_up(kappa_cor, mul_up(hr_pow, kappa_h11))),
        kappa_ult1,
    );
    let ult_b = div_up(mul_up(add_up(1.0, kappa_bma), LN_2), kappa_ult1);
    let kappa_main = ch.push(
        "kappa_main",
        mul_up(
            largest_fixed_point(ult_a, 1.0, ult_b),
            add_up(1.0, 1.0 / LN_2),
        ),
        "A + B <= kappa_main log m in the generic case",
        &["kappa_bma", "kappa_cor", "kappa_hr", "kappa_h11", "kappa_ult1", "r"],
    );

    let case_a_small = kappa_lb.max(kappa_b_of_a);
    let case_b_small = kappa_lb.max(kappa_a_of_b);
    let case_tie = div_up(kappa_ut.max(mul_up(kappa_amb, kappa_ut)), LN_2);
    let kappa_final = ch.push(
        "kappa_final",
        case_a_small.max(case_b_small).max(case_tie).max(kappa_main),
        "max(A, B) <= kappa_final log m over all cases",
        &["kappa_lb", "kappa_b_of_a", "kappa_a_of_b", "kappa_ut", "kappa_amb", "kappa_main"],
    );

    // Elimination of (x, y) from two embeddings of beta.
    let growth = mul_up(mul_up(df, c8), add_up(kappa_final, 1.0));
    let kappa_y = ch.push(
        "kappa_y",
        add_up(1.0, add_up(growth, mul_up(mul_up(kappa_sep, c3), kappa_final))),
        "|y| <= m^kappa_y",
        &["d", "c8", "kappa_sep", "c3", "kappa_final"],
    );
    let kappa_x = ch.push(
        "kappa_x",
        add_up(
            1.0,
            add_up(growth, mul_up(mul_up(df + kappa_sep, c3), kappa_final)),
        ),
        "|x| <= m^kappa_x",
        &["d", "c8", "kappa_sep", "c3", "kappa_final"],
    );
    let kappa1 = ch.push(
        "kappa1",
        kappa_x.max(kappa_y).max(mul_up(c3, kappa_final)),
        "max(|x|, |y|, exp h(gamma)) <= m^kappa1",
        &["kappa_x", "kappa_y", "c3", "kappa_final"],
    );

    let a_bound = mul_up(kappa_final, log_m_up);
    let log_xy_bound = mul_up(kappa1, log_m_up);
    Ok(BoundReport {
        constants: ch.constants,
        kappa_final,
        kappa1,
        a_bound,
        b_bound: a_bound,
        log_xy_bound,
        xy_bound: exp_up(log_xy_bound),
        log_m: log_m_up,
        degree: d,
        rank: r,
        s,
        provider_degree: dprov,
        provider: provider.name().to_string(),
    })
}
