//! Real ball arithmetic: a dyadic center with a magnitude radius.
//!
//! Every operation returns a ball guaranteed to contain the exact result
//! whenever the inputs contain their exact operands. Radii only ever grow.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Mutex;

use super::dyadic::{Dyadic, Round};
use super::mag::Mag;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct RealBall {
    pub center: Dyadic,
    pub radius: Mag,
}

impl RealBall {
    pub fn exact(center: Dyadic) -> RealBall {
        RealBall {
            center,
            radius: Mag::ZERO,
        }
    }

    pub fn zero(bits: u32) -> RealBall {
        RealBall::exact(Dyadic::zero(bits))
    }

    pub fn from_i64(n: i64, bits: u32) -> RealBall {
        RealBall::exact(Dyadic::from_i64(n, bits))
    }

    pub fn from_bigint(n: &BigInt, bits: u32) -> RealBall {
        RealBall::exact(Dyadic::from_bigint(n, bits))
    }

    /// Tight two-sided enclosure of a rational.
    pub fn from_rational(r: &BigRational, bits: u32) -> RealBall {
        let c = Dyadic::from_rational(r, bits, Round::Floor);
        RealBall {
            center: c,
            radius: Mag::pow2(-(bits as i64)),
        }
    }

    pub fn bits(&self) -> u32 {
        self.center.bits
    }

    pub fn add(&self, other: &RealBall) -> RealBall {
        RealBall {
            center: self.center.add(&other.center),
            radius: self.radius.add(other.radius),
        }
    }

    pub fn sub(&self, other: &RealBall) -> RealBall {
        RealBall {
            center: self.center.sub(&other.center),
            radius: self.radius.add(other.radius),
        }
    }

    pub fn neg(&self) -> RealBall {
        RealBall {
            center: self.center.neg(),
            radius: self.radius,
        }
    }

    pub fn mul(&self, other: &RealBall) -> RealBall {
        let center = self.center.mul(&other.center, Round::Floor);
        let a = self.center.mag_up();
        let b = other.center.mag_up();
        let radius = a
            .mul(other.radius)
            .add(b.mul(self.radius))
            .add(self.radius.mul(other.radius))
            .add(center.ulp());
        RealBall { center, radius }
    }

    pub fn mul_bigint(&self, n: &BigInt) -> RealBall {
        RealBall {
            center: self.center.mul_bigint(n),
            radius: self.radius.mul(Mag::from_bigint_up(n, 0)),
        }
    }

    pub fn mul_pow2(&self, e: i64) -> RealBall {
        let center = if e >= 0 {
            Dyadic {
                mant: &self.center.mant << (e as u32),
                bits: self.center.bits,
            }
        } else {
            let mut c = self.center.clone();
            c.bits += (-e) as u32;
            c.with_bits(self.center.bits, Round::Floor)
        };
        let mut radius = self.radius.mul_pow2(e);
        if e < 0 {
            radius = radius.add(center.ulp());
        }
        RealBall { center, radius }
    }

    /// Certified-positive lower bound of |self| when the ball excludes zero.
    pub fn abs_lower(&self) -> Option<Mag> {
        let c = self.center.mag_down();
        if c.ge(self.radius) && !c.is_zero() {
            // c - radius as a magnitude, rounded down: negate via dyadic
            let r_dy = self.radius.to_dyadic_up(self.center.bits);
            let lo = self.center.abs().sub(&r_dy);
            if lo.is_negative() || lo.is_zero() {
                return None;
            }
            Some(lo.mag_down())
        } else {
            None
        }
    }

    pub fn abs_upper(&self) -> Mag {
        self.center.mag_up().add(self.radius)
    }

    pub fn contains_zero(&self) -> bool {
        self.center.mag_down().ge(self.radius) == false || self.center.is_zero()
    }

    /// Division; fails when the divisor ball contains zero.
    pub fn div(&self, other: &RealBall) -> Result<RealBall> {
        let d_lo = other.abs_lower().ok_or_else(|| {
            Error::precision(self.bits(), "division by a ball containing zero")
        })?;
        let center = self.center.div(&other.center, Round::Floor);
        let num = self
            .center
            .mag_up()
            .mul(other.radius)
            .add(other.center.mag_up().mul(self.radius));
        let den = d_lo.mul(d_lo);
        let radius = num.div(den).add(center.ulp());
        Ok(RealBall { center, radius })
    }

    pub fn div_u32(&self, n: u32) -> RealBall {
        let nb = BigInt::from(n);
        let d = Dyadic::from_bigint(&nb, self.bits());
        let center = self.center.div(&d, Round::Floor);
        let radius = self
            .radius
            .div(Mag::from_u64(n as u64))
            .add(center.ulp());
        RealBall { center, radius }
    }

    /// Square root over nonnegative balls; clips at zero when the ball dips
    /// below it so enclosures of squares stay valid.
    pub fn sqrt(&self) -> RealBall {
        let bits = self.bits();
        let r_dy = self.radius.to_dyadic_up(bits);
        let hi_in = self.center.add(&r_dy);
        let lo_in = self.center.sub(&r_dy);
        let hi_in = if hi_in.is_negative() {
            Dyadic::zero(bits)
        } else {
            hi_in
        };
        let lo_in = if lo_in.is_negative() {
            Dyadic::zero(bits)
        } else {
            lo_in
        };
        let lo = lo_in.sqrt_floor();
        let hi = {
            let f = hi_in.sqrt_floor();
            Dyadic {
                mant: &f.mant + 1,
                bits,
            }
        };
        let two = Dyadic::from_i64(2, bits);
        let center = lo.add(&hi).div(&two, Round::Floor);
        let radius = hi.sub(&lo).mag_up().div(Mag::from_u64(2)).add(center.ulp());
        RealBall { center, radius }
    }

    /// Natural log of a certified-positive ball.
    pub fn ln(&self) -> Result<RealBall> {
        let bits = self.bits();
        let lo = self.abs_lower().ok_or_else(|| {
            Error::precision(bits, "log of a ball not bounded away from zero")
        })?;
        if self.center.is_negative() {
            return Err(Error::precision(bits, "log of a negative ball"));
        }
        let wp = bits + 64;

        // center = m * 2^k with m in [1/2, 1); keep a one-ulp ball around m
        // because the reduction can shave low mantissa bits
        let bl = self.center.mant.bits() as i64;
        let k = bl - self.center.bits as i64;
        let m_center = Dyadic {
            mant: self.center.mant.clone(),
            bits: bl.max(1) as u32,
        }
        .with_bits(wp, Round::Floor);
        let m = RealBall {
            center: m_center,
            radius: Mag::pow2(-(wp as i64)),
        };

        let ln_m = ln_mantissa(&m, wp);
        let mut out = ln_m;
        if k != 0 {
            let l2 = ln2(wp);
            out = out.add(&l2.mul_bigint(&BigInt::from(k)));
        }

        // derivative bound: |ln x - ln c| <= r / (c - r)
        let prop = self.radius.div(lo);
        let center = out.center.with_bits(bits, Round::Floor);
        let radius = out.radius.add(prop).add(center.ulp());
        Ok(RealBall { center, radius })
    }

    /// Ball from interval endpoints.
    pub fn from_endpoints(lo: &Dyadic, hi: &Dyadic) -> RealBall {
        assert_eq!(lo.bits, hi.bits, "dyadic scale mismatch");
        let two = Dyadic::from_i64(2, lo.bits);
        let center = lo.add(hi).div(&two, Round::Floor);
        let radius = hi.sub(lo).mag_up().div(Mag::from_u64(2)).add(center.ulp());
        RealBall { center, radius }
    }

    /// Interval endpoints as dyadics, outward-rounded.
    pub fn endpoints(&self) -> (Dyadic, Dyadic) {
        let r = self.radius.to_dyadic_up(self.center.bits);
        (self.center.sub(&r), self.center.add(&r))
    }

    /// Certified strict comparison; `None` when the balls overlap.
    pub fn try_lt(&self, other: &RealBall) -> Option<bool> {
        let d = other.sub(self);
        let lo = d.abs_lower()?;
        let _ = lo;
        match d.center.mant.cmp(&BigInt::zero()) {
            Ordering::Greater => Some(true),
            Ordering::Less => Some(false),
            Ordering::Equal => None,
        }
    }

    pub fn to_f64_bounds(&self) -> (f64, f64) {
        let r = self.radius.to_f64_up();
        (
            self.center.to_f64(Round::Floor) - r,
            self.center.to_f64(Round::Ceil) + r,
        )
    }

    pub fn midpoint_f64(&self) -> f64 {
        self.center.to_f64(Round::Floor)
    }
}

/// atanh series for ln on [1/2, 1): ln m = 2 atanh((m-1)/(m+1)), |t| <= 1/3.
fn ln_mantissa(m: &RealBall, wp: u32) -> RealBall {
    let one = RealBall::from_i64(1, wp);
    let num = m.sub(&one);
    let den = m.add(&one);
    let t = num.div(&den).expect("denominator >= 3/2");
    let t2 = t.mul(&t);
    let mut term = t.clone();
    let mut sum = t.clone();
    // the term's center decays by 9x per step; its ball radius bottoms out
    // near one ulp, so the stop test must look at the center alone
    let stop = Mag::pow2(-(wp as i64) + 4);
    let mut j: u32 = 1;
    loop {
        term = term.mul(&t2);
        let contrib = term.div_u32(2 * j + 1);
        sum = sum.add(&contrib);
        j += 1;
        if !term.center.mag_up().ge(stop) {
            // geometric tail: |t|^2 <= 1/9, so the rest of the series sums
            // below 9/8 of the last term bound
            let tail = term.abs_upper().mul(Mag::from_u64(2));
            sum = RealBall {
                center: sum.center,
                radius: sum.radius.add(tail),
            };
            break;
        }
        assert!(j < 10 * wp, "atanh series failed to converge");
    }
    sum.mul_bigint(&BigInt::from(2))
}

static LN2_CACHE: Mutex<BTreeMap<u32, (BigInt, Mag)>> = Mutex::new(BTreeMap::new());

/// ln 2 = 2 atanh(1/3), cached per working precision.
pub fn ln2(wp: u32) -> RealBall {
    let mut cache = LN2_CACHE.lock().expect("ln2 cache poisoned");
    if let Some((mant, rad)) = cache.get(&wp) {
        return RealBall {
            center: Dyadic {
                mant: mant.clone(),
                bits: wp,
            },
            radius: *rad,
        };
    }
    let half = RealBall::exact(Dyadic::from_rational(
        &BigRational::new(BigInt::from(1), BigInt::from(2)),
        wp,
        Round::Floor,
    ));
    // ln(1/2) = -ln 2, with t = -1/3 held exactly as a ball quotient
    let v = ln_mantissa(&half, wp).neg();
    cache.insert(wp, (v.center.mant.clone(), v.radius.clone()));
    v
}

impl Mag {
    /// Smallest dyadic at `bits` scale that is >= this magnitude.
    pub fn to_dyadic_up(&self, bits: u32) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero(bits);
        }
        let (mant, exp) = self.parts();
        let target = exp + bits as i64;
        let m = BigInt::from(mant);
        let mant_out = if target >= 0 {
            m << (target as u32)
        } else {
            let k = (-target) as u32;
            -((-m) >> k) // ceil
        };
        Dyadic {
            mant: mant_out,
            bits,
        }
    }
}
