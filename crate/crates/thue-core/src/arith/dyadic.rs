//! Fixed-point dyadic numbers: `mant * 2^(-bits)` with a `BigInt` mantissa.
//!
//! All arithmetic is exact except where a rounding direction is passed
//! explicitly. A rounded operation lands within one ulp (`2^(-bits)`) of the
//! true value on the requested side.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

use super::mag::Mag;

/// Rounding direction for inexact operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    /// Toward negative infinity.
    Floor,
    /// Toward positive infinity.
    Ceil,
}

/// Fixed-point value `mant * 2^(-bits)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    pub mant: BigInt,
    pub bits: u32,
}

/// Shift right rounding toward negative infinity. `BigInt >>` already has
/// floor semantics; this wrapper makes the intent visible.
fn shr_floor(n: &BigInt, k: u32) -> BigInt {
    n >> k
}

/// Shift right rounding toward positive infinity.
fn shr_ceil(n: &BigInt, k: u32) -> BigInt {
    -shr_floor(&-n, k)
}

fn shr_round(n: &BigInt, k: u32, round: Round) -> BigInt {
    match round {
        Round::Floor => shr_floor(n, k),
        Round::Ceil => shr_ceil(n, k),
    }
}

impl Dyadic {
    pub fn zero(bits: u32) -> Dyadic {
        Dyadic {
            mant: BigInt::zero(),
            bits,
        }
    }

    pub fn one(bits: u32) -> Dyadic {
        Dyadic::from_bigint(&BigInt::from(1), bits)
    }

    pub fn from_bigint(n: &BigInt, bits: u32) -> Dyadic {
        Dyadic {
            mant: n << bits,
            bits,
        }
    }

    pub fn from_i64(n: i64, bits: u32) -> Dyadic {
        Dyadic::from_bigint(&BigInt::from(n), bits)
    }

    /// Rounded conversion from an exact rational.
    pub fn from_rational(r: &BigRational, bits: u32, round: Round) -> Dyadic {
        let num = r.numer() << bits;
        let (q, rem) = num.div_rem(r.denom());
        let mant = if rem.is_zero() {
            q
        } else {
            match round {
                // div_rem truncates toward zero; fix up the negative case
                Round::Floor => {
                    if num.sign() == Sign::Minus {
                        q - 1
                    } else {
                        q
                    }
                }
                Round::Ceil => {
                    if num.sign() == Sign::Minus {
                        q
                    } else {
                        q + 1
                    }
                }
            }
        };
        Dyadic { mant, bits }
    }

    /// Exact conversion from f64 when representable at this scale, rounded
    /// otherwise. Non-finite inputs are rejected by the caller.
    pub fn from_f64(v: f64, bits: u32, round: Round) -> Dyadic {
        assert!(v.is_finite());
        let r = BigRational::from_float(v).expect("finite f64");
        Dyadic::from_rational(&r, bits, round)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn ulp(&self) -> Mag {
        Mag::pow2(-(self.bits as i64))
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            bits: self.bits,
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            mant: self.mant.abs(),
            bits: self.bits,
        }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        assert_eq!(self.bits, other.bits, "dyadic scale mismatch");
        Dyadic {
            mant: &self.mant + &other.mant,
            bits: self.bits,
        }
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        assert_eq!(self.bits, other.bits, "dyadic scale mismatch");
        Dyadic {
            mant: &self.mant - &other.mant,
            bits: self.bits,
        }
    }

    /// Product rounded in the given direction; error below one ulp.
    pub fn mul(&self, other: &Dyadic, round: Round) -> Dyadic {
        assert_eq!(self.bits, other.bits, "dyadic scale mismatch");
        Dyadic {
            mant: shr_round(&(&self.mant * &other.mant), self.bits, round),
            bits: self.bits,
        }
    }

    /// Product with a plain integer, exact.
    pub fn mul_bigint(&self, n: &BigInt) -> Dyadic {
        Dyadic {
            mant: &self.mant * n,
            bits: self.bits,
        }
    }

    /// Quotient rounded in the given direction; error below one ulp.
    /// `other` must be nonzero.
    pub fn div(&self, other: &Dyadic, round: Round) -> Dyadic {
        assert_eq!(self.bits, other.bits, "dyadic scale mismatch");
        assert!(!other.mant.is_zero(), "dyadic division by zero");
        let num = &self.mant << self.bits;
        let (q, rem) = num.div_rem(&other.mant);
        let exact = rem.is_zero();
        let down_is_q = (num.sign() != Sign::Minus) == (other.mant.sign() != Sign::Minus);
        let mant = if exact {
            q
        } else {
            match (round, down_is_q) {
                (Round::Floor, true) | (Round::Ceil, false) => q,
                (Round::Floor, false) => q - 1,
                (Round::Ceil, true) => q + 1,
            }
        };
        Dyadic { mant, bits: self.bits }
    }

    /// Square root of a nonnegative value, floor-rounded; error below one
    /// ulp.
    pub fn sqrt_floor(&self) -> Dyadic {
        assert!(!self.is_negative(), "sqrt of negative dyadic");
        let scaled: BigInt = &self.mant << self.bits;
        Dyadic {
            mant: scaled.sqrt(),
            bits: self.bits,
        }
    }

    pub fn cmp_val(&self, other: &Dyadic) -> Ordering {
        assert_eq!(self.bits, other.bits, "dyadic scale mismatch");
        self.mant.cmp(&other.mant)
    }

    /// Magnitude upper bound.
    pub fn mag_up(&self) -> Mag {
        Mag::from_bigint_up(&self.mant, -(self.bits as i64))
    }

    /// Magnitude lower bound.
    pub fn mag_down(&self) -> Mag {
        Mag::from_bigint_down(&self.mant, -(self.bits as i64))
    }

    /// Change of scale, rounding when the scale shrinks.
    pub fn with_bits(&self, bits: u32, round: Round) -> Dyadic {
        if bits == self.bits {
            self.clone()
        } else if bits > self.bits {
            Dyadic {
                mant: &self.mant << (bits - self.bits),
                bits,
            }
        } else {
            Dyadic {
                mant: shr_round(&self.mant, self.bits - bits, round),
                bits,
            }
        }
    }

    /// Directed f64 conversion.
    pub fn to_f64(&self, round: Round) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let bl = self.mant.bits();
        let (approx, extra_exp) = if bl <= 63 {
            (self.mant.to_i64().expect("fits") as f64, 0i64)
        } else {
            let shift = bl - 63;
            let top = &self.mant >> shift;
            (top.to_i64().expect("63 bits") as f64, shift as i64)
        };
        let v = approx * ((extra_exp - self.bits as i64) as f64).exp2();
        // a handful of nearest-roundings happened; nudge two ulps outward
        let bump = |x: f64, up: bool| {
            let mut b = x;
            for _ in 0..2 {
                b = if up == (b >= 0.0) {
                    f64::from_bits(b.to_bits() + 1)
                } else {
                    f64::from_bits(b.to_bits() - 1)
                };
            }
            b
        };
        match round {
            Round::Ceil => bump(v, true),
            Round::Floor => bump(v, false),
        }
    }

    /// Scale by 2^e, exactly for e >= 0 and floor-rounded otherwise.
    pub fn mul_pow2(&self, e: i64) -> Dyadic {
        if e >= 0 {
            Dyadic {
                mant: &self.mant << (e as u32),
                bits: self.bits,
            }
        } else {
            Dyadic {
                mant: shr_floor(&self.mant, (-e) as u32),
                bits: self.bits,
            }
        }
    }

    /// Nearest integer, ties away handled by caller via the returned
    /// fractional distance. Returns `(nearest, |self - nearest|)`.
    pub fn nearest_int(&self) -> (BigInt, Dyadic) {
        let half: BigInt = BigInt::from(1) << (self.bits - 1);
        let shifted = &self.mant + &half;
        let n = shr_floor(&shifted, self.bits);
        let back = Dyadic::from_bigint(&n, self.bits);
        let dist = self.sub(&back).abs();
        (n, dist)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn shift_semantics_are_floor() {
        assert_eq!(shr_floor(&BigInt::from(-3), 1), BigInt::from(-2));
        assert_eq!(shr_ceil(&BigInt::from(-3), 1), BigInt::from(-1));
        assert_eq!(shr_floor(&BigInt::from(3), 1), BigInt::from(1));
        assert_eq!(shr_ceil(&BigInt::from(3), 1), BigInt::from(2));
    }

    #[test]
    fn rational_rounding_brackets() {
        let third = rat(1, 3);
        let lo = Dyadic::from_rational(&third, 64, Round::Floor);
        let hi = Dyadic::from_rational(&third, 64, Round::Ceil);
        assert!(lo.cmp_val(&hi) == Ordering::Less);
        assert_eq!(&hi.mant - &lo.mant, BigInt::one());
        let neg = rat(-1, 3);
        let nlo = Dyadic::from_rational(&neg, 64, Round::Floor);
        let nhi = Dyadic::from_rational(&neg, 64, Round::Ceil);
        assert!(nlo.to_f64(Round::Floor) <= -1.0 / 3.0);
        assert!(nhi.to_f64(Round::Ceil) >= -1.0 / 3.0);
    }

    #[test]
    fn division_directions() {
        let bits = 32;
        let a = Dyadic::from_i64(1, bits);
        let b = Dyadic::from_i64(3, bits);
        let lo = a.div(&b, Round::Floor);
        let hi = a.div(&b, Round::Ceil);
        assert!(lo.to_f64(Round::Floor) < 1.0 / 3.0);
        assert!(hi.to_f64(Round::Ceil) > 1.0 / 3.0);
        let neg = a.neg().div(&b, Round::Ceil);
        assert!(neg.to_f64(Round::Ceil) > -1.0 / 3.0);
    }

    #[test]
    fn sqrt_floor_is_floor() {
        let bits = 64;
        let two = Dyadic::from_i64(2, bits);
        let s = two.sqrt_floor();
        let sq = s.mul(&s, Round::Floor);
        assert!(sq.cmp_val(&two) == Ordering::Less);
        let s_up = Dyadic {
            mant: &s.mant + 1,
            bits,
        };
        assert!(s_up.mul(&s_up, Round::Ceil).cmp_val(&two) == Ordering::Greater);
    }

    #[test]
    fn nearest_int_ties() {
        let bits = 16;
        let x = Dyadic::from_rational(&rat(7, 2), bits, Round::Floor);
        let (n, dist) = x.nearest_int();
        // 3.5 rounds up under the +half floor rule; distance is exactly 1/2
        assert_eq!(n, BigInt::from(4));
        let half = Dyadic::from_rational(&rat(1, 2), bits, Round::Floor);
        assert_eq!(dist.cmp_val(&half), Ordering::Equal);
    }

    #[test]
    fn f64_roundtrip_directed() {
        let bits = 200;
        let x = Dyadic::from_rational(&rat(355, 113), bits, Round::Floor);
        let lo = x.to_f64(Round::Floor);
        let hi = x.to_f64(Round::Ceil);
        assert!(lo <= 355.0 / 113.0);
        assert!(hi >= 355.0 / 113.0);
        assert!((hi - lo) < 1e-12);
    }
}
