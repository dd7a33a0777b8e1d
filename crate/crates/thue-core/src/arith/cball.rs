//! Complex disks: a dyadic center `(re, im)` with one Euclidean radius.
//!
//! The radius bounds the distance from the center jointly, so component
//! projections and the modulus inherit it directly.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::ball::RealBall;
use super::dyadic::{Dyadic, Round};
use super::mag::Mag;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct ComplexBall {
    pub re: Dyadic,
    pub im: Dyadic,
    pub rad: Mag,
}

impl ComplexBall {
    pub fn exact(re: Dyadic, im: Dyadic) -> ComplexBall {
        ComplexBall {
            re,
            im,
            rad: Mag::ZERO,
        }
    }

    pub fn zero(bits: u32) -> ComplexBall {
        ComplexBall::exact(Dyadic::zero(bits), Dyadic::zero(bits))
    }

    pub fn from_real(r: &RealBall) -> ComplexBall {
        ComplexBall {
            re: r.center.clone(),
            im: Dyadic::zero(r.bits()),
            rad: r.radius,
        }
    }

    pub fn from_rational(q: &BigRational, bits: u32) -> ComplexBall {
        let c = Dyadic::from_rational(q, bits, Round::Floor);
        ComplexBall {
            re: c,
            im: Dyadic::zero(bits),
            rad: Mag::pow2(-(bits as i64)),
        }
    }

    pub fn bits(&self) -> u32 {
        self.re.bits
    }

    pub fn is_exact_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero() && self.rad.is_zero()
    }

    pub fn add(&self, other: &ComplexBall) -> ComplexBall {
        ComplexBall {
            re: self.re.add(&other.re),
            im: self.im.add(&other.im),
            rad: self.rad.add(other.rad),
        }
    }

    pub fn sub(&self, other: &ComplexBall) -> ComplexBall {
        ComplexBall {
            re: self.re.sub(&other.re),
            im: self.im.sub(&other.im),
            rad: self.rad.add(other.rad),
        }
    }

    pub fn neg(&self) -> ComplexBall {
        ComplexBall {
            re: self.re.neg(),
            im: self.im.neg(),
            rad: self.rad,
        }
    }

    pub fn conj(&self) -> ComplexBall {
        ComplexBall {
            re: self.re.clone(),
            im: self.im.neg(),
            rad: self.rad,
        }
    }

    pub fn mul_bigint(&self, n: &BigInt) -> ComplexBall {
        ComplexBall {
            re: self.re.mul_bigint(n),
            im: self.im.mul_bigint(n),
            rad: self.rad.mul(Mag::from_bigint_up(n, 0)),
        }
    }

    /// Cheap modulus upper bound `|re| + |im| + rad`.
    pub fn mod_upper(&self) -> Mag {
        self.re.mag_up().add(self.im.mag_up()).add(self.rad)
    }

    /// Certified-positive modulus lower bound, if the disk excludes zero.
    /// Uses `|z| >= max(|re|, |im|)` on the center.
    pub fn mod_lower(&self) -> Option<Mag> {
        let m = if self.re.abs().cmp_val(&self.im.abs()) == std::cmp::Ordering::Less {
            self.im.abs()
        } else {
            self.re.abs()
        };
        let lo = m.sub(&self.rad.to_dyadic_up(self.bits()));
        if lo.is_negative() || lo.is_zero() {
            None
        } else {
            Some(lo.mag_down())
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.mod_lower().is_none()
    }

    pub fn mul(&self, other: &ComplexBall) -> ComplexBall {
        let ac = self.re.mul(&other.re, Round::Floor);
        let bd = self.im.mul(&other.im, Round::Floor);
        let ad = self.re.mul(&other.im, Round::Floor);
        let bc = self.im.mul(&other.re, Round::Floor);
        let re = ac.sub(&bd);
        let im = ad.add(&bc);
        let m1 = self.mod_upper();
        let m2 = other.mod_upper();
        let ulp = re.ulp();
        let rad = m1
            .mul(other.rad)
            .add(m2.mul(self.rad))
            .add(self.rad.mul(other.rad))
            .add(ulp.mul(Mag::from_u64(4)));
        ComplexBall { re, im, rad }
    }

    /// Division; fails when the divisor disk contains zero.
    ///
    /// Center quotient runs through real-ball arithmetic so denominator
    /// amplification of the rounding errors is tracked, then the disk
    /// deviation term is added on top.
    pub fn div(&self, other: &ComplexBall) -> Result<ComplexBall> {
        let lo2 = other.mod_lower().ok_or_else(|| {
            Error::precision(self.bits(), "division by a disk containing zero")
        })?;
        let a = RealBall::exact(self.re.clone());
        let b = RealBall::exact(self.im.clone());
        let c = RealBall::exact(other.re.clone());
        let d = RealBall::exact(other.im.clone());
        let q = c.mul(&c).add(&d.mul(&d));
        let re_q = a.mul(&c).add(&b.mul(&d)).div(&q)?;
        let im_q = b.mul(&c).sub(&a.mul(&d)).div(&q)?;
        let prop = self
            .mod_upper()
            .mul(other.rad)
            .add(other.mod_upper().mul(self.rad))
            .div(lo2.mul(lo2));
        let rad = re_q.radius.add(im_q.radius).add(prop);
        Ok(ComplexBall {
            re: re_q.center,
            im: im_q.center,
            rad,
        })
    }

    /// Tight modulus enclosure.
    pub fn mod_ball(&self) -> RealBall {
        let re = RealBall::exact(self.re.clone());
        let im = RealBall::exact(self.im.clone());
        let sq = re.mul(&re).add(&im.mul(&im));
        let m = sq.sqrt();
        RealBall {
            center: m.center,
            radius: m.radius.add(self.rad),
        }
    }

    /// Real-part projection as a ball.
    pub fn re_ball(&self) -> RealBall {
        RealBall {
            center: self.re.clone(),
            radius: self.rad,
        }
    }

    /// Imaginary-part projection as a ball.
    pub fn im_ball(&self) -> RealBall {
        RealBall {
            center: self.im.clone(),
            radius: self.rad,
        }
    }

    /// Certified lower bound on the distance to `other`, if positive.
    pub fn dist_lower(&self, other: &ComplexBall) -> Option<Mag> {
        self.sub(other).mod_lower()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cb(re: f64, im: f64, bits: u32) -> ComplexBall {
        ComplexBall::exact(
            Dyadic::from_f64(re, bits, Round::Floor),
            Dyadic::from_f64(im, bits, Round::Floor),
        )
    }

    #[test]
    fn modulus_of_three_four() {
        let z = cb(3.0, 4.0, 96);
        let m = z.mod_ball();
        let (lo, hi) = m.to_f64_bounds();
        assert!(lo <= 5.0 && 5.0 <= hi);
        // spread is dominated by the directed f64 conversion
        assert!(hi - lo < 1e-13);
    }

    #[test]
    fn product_encloses() {
        let bits = 96;
        let a = cb(1.5, -2.25, bits);
        let b = cb(-0.75, 4.0, bits);
        let p = a.mul(&b);
        // (1.5 - 2.25i)(-0.75 + 4i) = (-1.125 + 9) + (6 + 1.6875)i
        let (rl, rh) = p.re_ball().to_f64_bounds();
        let (il, ih) = p.im_ball().to_f64_bounds();
        assert!(rl <= 7.875 && 7.875 <= rh);
        assert!(il <= 7.6875 && 7.6875 <= ih);
    }

    #[test]
    fn division_roundtrips() {
        let bits = 128;
        let a = cb(2.5, -1.25, bits);
        let b = cb(0.5, 3.0, bits);
        let q = a.div(&b).unwrap();
        let back = q.mul(&b);
        let d = back.sub(&a);
        assert!(d.mod_upper().to_f64_up() < 1e-30);
    }

    #[test]
    fn division_by_straddling_disk_fails() {
        let bits = 64;
        let a = cb(1.0, 0.0, bits);
        let z = ComplexBall {
            re: Dyadic::zero(bits),
            im: Dyadic::zero(bits),
            rad: Mag::pow2(-5),
        };
        assert!(a.div(&z).is_err());
    }

    #[test]
    fn conjugate_multiplication_is_real() {
        let bits = 96;
        let z = cb(1.125, 2.5, bits);
        let p = z.mul(&z.conj());
        let (il, ih) = p.im_ball().to_f64_bounds();
        assert!(il <= 0.0 && 0.0 <= ih);
        let (rl, rh) = p.re_ball().to_f64_bounds();
        let expect = 1.125f64 * 1.125 + 2.5 * 2.5;
        assert!(rl <= expect && expect <= rh);
    }
}
