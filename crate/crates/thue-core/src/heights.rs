//! Mahler measures and the absolute logarithmic Weil height.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::algnum::{AlgElement, NumberField};
use crate::arith::{Dyadic, RealBall};
use crate::embeddings::{root_enclosures, working_scale};
use crate::error::Result;
use crate::poly::ZPoly;

/// Clips a ball to `[1, inf)` endpointwise: encloses `max(1, x)`.
fn clip_ge_one(b: &RealBall) -> RealBall {
    let one = Dyadic::one(b.bits());
    let (lo, hi) = b.endpoints();
    let lo = if lo.cmp_val(&one) == std::cmp::Ordering::Less {
        one.clone()
    } else {
        lo
    };
    let hi = if hi.cmp_val(&one) == std::cmp::Ordering::Less {
        one
    } else {
        hi
    };
    RealBall::from_endpoints(&lo, &hi)
}

/// Mahler measure `|lc(f)| * prod max(1, |root|)`, certified.
///
/// Repeated roots are split off by squarefree decomposition first, so the
/// root finder only ever sees simple roots.
pub fn mahler_measure(f: &ZPoly, bits: u32) -> Result<RealBall> {
    assert!(!f.is_zero());
    let lead = f.leading().abs();
    if f.degree() == 0 {
        return Ok(RealBall::from_bigint(&lead, bits));
    }
    let mut acc = RealBall::from_bigint(&lead, working_scale(bits));
    for (g, mult) in f.to_q().squarefree_decomposition() {
        if g.degree() == 0 {
            continue;
        }
        let gi = g.clear_to_primitive();
        // the monic factor's roots; the integer model scales both lead
        // and content away, roots are identical
        let roots = root_enclosures(&gi, bits)?;
        for r in roots {
            let m = clip_ge_one(&r.mod_ball());
            for _ in 0..mult {
                acc = acc.mul(&m);
            }
        }
    }
    Ok(acc)
}

/// `log M(f)`.
pub fn log_mahler(f: &ZPoly, bits: u32) -> Result<RealBall> {
    mahler_measure(f, bits)?.ln()
}

/// Absolute logarithmic height of an algebraic number given by its
/// primitive integer minimal polynomial: `log M(f) / deg f`.
pub fn height_from_min_poly(f: &ZPoly, bits: u32) -> Result<RealBall> {
    assert!(f.degree() >= 1);
    Ok(log_mahler(f, bits)?.div_u32(f.degree() as u32))
}

/// Absolute logarithmic height of a field element.
///
/// Rational values are handled exactly: `h(p/q) = log max(|p|, |q|)`, and
/// zero, one and minus one get a zero-width zero ball so downstream
/// constants stay exact.
pub fn abs_log_height(gamma: &AlgElement, k: &NumberField, bits: u32) -> Result<RealBall> {
    if gamma.is_rational() {
        let q = &gamma.coords()[0];
        let num = q.numer().abs();
        let den = q.denom().abs();
        let m = if num > den { num } else { den };
        if q.is_zero() || m == BigInt::from(1) {
            return Ok(RealBall::zero(bits));
        }
        return RealBall::from_bigint(&m, working_scale(bits)).ln();
    }
    height_from_min_poly(&gamma.min_poly_integer(k), bits)
}
