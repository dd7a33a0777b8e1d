//! Low-precision nonnegative magnitudes with upward rounding.
//!
//! A `Mag` stores an upper bound as `mant * 2^exp` with a 63-bit mantissa.
//! Every operation rounds up, so a `Mag` computed from `Mag`s is always a
//! valid upper bound. Error radii of balls are `Mag`s; the wide exponent
//! range matters because radii at 4096-bit working precision are far below
//! the smallest positive f64.

use num_bigint::BigInt;
use num_traits::Zero;

const MANT_BITS: u32 = 63;

/// Nonnegative magnitude `mant * 2^exp`, mantissa normalized to
/// `[2^62, 2^63)` unless the value is zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mag {
    mant: u64,
    exp: i64,
}

impl Mag {
    pub const ZERO: Mag = Mag { mant: 0, exp: 0 };

    pub fn is_zero(&self) -> bool {
        self.mant == 0
    }

    /// `(mantissa, exponent)` with the value equal to `mant * 2^exp`.
    pub fn parts(&self) -> (u64, i64) {
        (self.mant, self.exp)
    }

    /// Normalizes `mant * 2^exp`, rounding the mantissa up when bits are
    /// dropped.
    fn norm(mut mant: u128, mut exp: i64) -> Mag {
        if mant == 0 {
            return Mag::ZERO;
        }
        let bl = 128 - mant.leading_zeros();
        if bl > MANT_BITS {
            let shift = bl - MANT_BITS;
            let dropped = mant & ((1u128 << shift) - 1);
            mant >>= shift;
            if dropped != 0 {
                mant += 1;
                // may carry into one more bit, renormalize once
                if mant >> MANT_BITS != 0 {
                    mant >>= 1;
                    exp += 1;
                }
            }
            exp += shift as i64;
        } else if bl < MANT_BITS {
            let shift = MANT_BITS - bl;
            mant <<= shift;
            exp -= shift as i64;
        }
        Mag {
            mant: mant as u64,
            exp,
        }
    }

    pub fn from_u64(v: u64) -> Mag {
        Mag::norm(v as u128, 0)
    }

    /// `2^e` exactly.
    pub fn pow2(e: i64) -> Mag {
        Mag {
            mant: 1 << (MANT_BITS - 1),
            exp: e - (MANT_BITS as i64 - 1),
        }
    }

    /// Upper bound on `|n| * 2^exp` for a big integer mantissa.
    pub fn from_bigint_up(n: &BigInt, exp: i64) -> Mag {
        if n.is_zero() {
            return Mag::ZERO;
        }
        let bits = n.bits();
        if bits <= 128 {
            let (_, digits) = n.to_u64_digits();
            let mut m: u128 = 0;
            for (i, d) in digits.iter().enumerate() {
                m |= (*d as u128) << (64 * i);
            }
            Mag::norm(m, exp)
        } else {
            // keep the top 64 bits and round up
            let shift = bits - 64;
            let top = (n.magnitude() >> shift)
                .iter_u64_digits()
                .next()
                .unwrap_or(0);
            Mag::norm(top as u128 + 1, exp + shift as i64)
        }
    }

    /// Lower bound on `|n| * 2^exp`; used when a magnitude serves as a
    /// certified denominator.
    pub fn from_bigint_down(n: &BigInt, exp: i64) -> Mag {
        if n.is_zero() {
            return Mag::ZERO;
        }
        let bits = n.bits();
        if bits <= 63 {
            let (_, digits) = n.to_u64_digits();
            Mag::norm(digits[0] as u128, exp)
        } else {
            let shift = bits - 63;
            let top = (n.magnitude() >> shift)
                .iter_u64_digits()
                .next()
                .unwrap_or(0);
            // truncation already rounds toward zero, which is down
            Mag::norm(top as u128, exp + shift as i64)
        }
    }

    pub fn add(self, other: Mag) -> Mag {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (hi, lo) = if self.exp >= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        let diff = hi.exp - lo.exp;
        if diff >= 128 {
            // lo is below one ulp of hi; bump by one ulp to stay an upper bound
            return Mag::norm(hi.mant as u128 + 1, hi.exp);
        }
        let lo_shifted = if diff == 0 {
            lo.mant as u128
        } else {
            let d = diff as u32;
            if d >= 128 {
                1
            } else {
                let dropped = (lo.mant as u128) & ((1u128 << d.min(127)) - 1);
                ((lo.mant as u128) >> d) + u128::from(dropped != 0)
            }
        };
        Mag::norm(hi.mant as u128 + lo_shifted, hi.exp)
    }

    pub fn mul(self, other: Mag) -> Mag {
        if self.is_zero() || other.is_zero() {
            return Mag::ZERO;
        }
        let prod = self.mant as u128 * other.mant as u128;
        Mag::norm(prod, self.exp + other.exp)
    }

    /// Upper bound on `self / lower` where `lower` is a certified lower
    /// bound of the true denominator. `lower` must be nonzero.
    pub fn div(self, lower: Mag) -> Mag {
        assert!(!lower.is_zero(), "Mag::div by zero lower bound");
        if self.is_zero() {
            return Mag::ZERO;
        }
        let num = (self.mant as u128) << 63;
        let q = num / lower.mant as u128;
        Mag::norm(q + 1, self.exp - lower.exp - 63)
    }

    pub fn max(self, other: Mag) -> Mag {
        if self.ge(other) {
            self
        } else {
            other
        }
    }

    pub fn ge(self, other: Mag) -> bool {
        if other.is_zero() {
            return true;
        }
        if self.is_zero() {
            return false;
        }
        if self.exp != other.exp {
            return self.exp > other.exp;
        }
        self.mant >= other.mant
    }

    pub fn mul_pow2(self, e: i64) -> Mag {
        if self.is_zero() {
            self
        } else {
            Mag {
                mant: self.mant,
                exp: self.exp + e,
            }
        }
    }

    /// Upper f64; saturates to infinity far outside f64 range.
    pub fn to_f64_up(self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if self.exp > 1024 {
            return f64::INFINITY;
        }
        if self.exp < -1200 {
            // value is positive but tiny; smallest positive subnormal is a
            // valid upper bound only if it exceeds the value, which it does
            // here (value < 2^(-1137) < 2^(-1074))
            return f64::MIN_POSITIVE;
        }
        let base = self.mant as f64; // rounds to nearest, at most 0.5 ulp low
        let scaled = base * (self.exp as f64).exp2();
        // two nearest-roundings; bump three ulps upward to stay an upper bound
        let mut v = scaled;
        for _ in 0..3 {
            v = f64::from_bits(v.to_bits() + 1);
        }
        v
    }

    /// `log2` upper bound, for diagnostics.
    pub fn log2_up(self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        (self.mant as f64).log2() + self.exp as f64 + 1e-9
    }
}
