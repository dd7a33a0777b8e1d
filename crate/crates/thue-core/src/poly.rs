//! Univariate polynomials over the integers and rationals.
//!
//! Coefficients are stored in descending degree order with a nonzero
//! leading coefficient; the zero polynomial is the empty vector.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{ComplexBall, Dyadic, RealBall};

/// Integer polynomial, descending coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZPoly {
    coeffs: Vec<BigInt>,
}

/// Rational polynomial, descending coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl ZPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> ZPoly {
        while coeffs.first().is_some_and(|c| c.is_zero()) {
            coeffs.remove(0);
        }
        ZPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> ZPoly {
        ZPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> ZPoly {
        ZPoly { coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        assert!(!self.is_zero(), "degree of the zero polynomial");
        self.coeffs.len() - 1
    }

    /// Descending coefficients, leading first.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> &BigInt {
        &self.coeffs[0]
    }

    pub fn constant(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// Content removed, leading coefficient made positive.
    pub fn primitive_part(&self) -> ZPoly {
        if self.is_zero() {
            return ZPoly::zero();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        ZPoly {
            coeffs: self.coeffs.iter().map(|c| c / &g).collect(),
        }
    }

    pub fn derivative(&self) -> ZPoly {
        if self.is_zero() || self.degree() == 0 {
            return ZPoly::zero();
        }
        let d = self.degree();
        ZPoly::new(
            self.coeffs[..d]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigInt::from(d - i))
                .collect(),
        )
    }

    pub fn eval_bigint(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in &self.coeffs {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in &self.coeffs {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_cball(&self, z: &ComplexBall) -> ComplexBall {
        let bits = z.bits();
        let mut acc = ComplexBall::zero(bits);
        for c in &self.coeffs {
            let cz = ComplexBall::exact(Dyadic::from_bigint(c, bits), Dyadic::zero(bits));
            acc = acc.mul(z).add(&cz);
        }
        acc
    }

    pub fn eval_ball(&self, x: &RealBall) -> RealBall {
        let bits = x.bits();
        let mut acc = RealBall::zero(bits);
        for c in &self.coeffs {
            acc = acc.mul(x).add(&RealBall::from_bigint(c, bits));
        }
        acc
    }

    pub fn to_q(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    /// Coefficients reversed: `x^d f(1/x)`. For a polynomial with nonzero
    /// constant term this is the reciprocal polynomial.
    pub fn reverse(&self) -> ZPoly {
        let mut c = self.coeffs.clone();
        c.reverse();
        ZPoly::new(c)
    }

    pub fn mul(&self, other: &ZPoly) -> ZPoly {
        if self.is_zero() || other.is_zero() {
            return ZPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly::new(out)
    }

    /// Resultant of `self` and `other` by fraction-free Gaussian
    /// elimination on the Sylvester matrix.
    pub fn resultant(&self, other: &ZPoly) -> BigInt {
        assert!(!self.is_zero() && !other.is_zero());
        let m = self.degree();
        let n = other.degree();
        if m == 0 {
            return self.coeffs[0].pow(n as u32);
        }
        if n == 0 {
            return other.coeffs[0].pow(m as u32);
        }
        let size = m + n;
        let mut a = vec![vec![BigInt::zero(); size]; size];
        for i in 0..n {
            for (j, c) in self.coeffs.iter().enumerate() {
                a[i][i + j] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in other.coeffs.iter().enumerate() {
                a[n + i][i + j] = c.clone();
            }
        }
        // Bareiss: exact integer determinant
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..size - 1 {
            if a[k][k].is_zero() {
                let swap = (k + 1..size).find(|&i| !a[i][k].is_zero());
                match swap {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..size {
                for j in k + 1..size {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero());
                    a[i][j] = q;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        sign * a[size - 1][size - 1].clone()
    }

    /// Discriminant `(-1)^(d(d-1)/2) res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> BigInt {
        let d = self.degree();
        assert!(d >= 1);
        if d == 1 {
            return BigInt::one();
        }
        let r = self.resultant(&self.derivative());
        let (q, rem) = r.div_rem(self.leading());
        debug_assert!(rem.is_zero());
        if (d * (d - 1) / 2) % 2 == 1 {
            -q
        } else {
            q
        }
    }

    /// Irreducibility over F_p. `None` when the reduction is degenerate
    /// for this prime (leading coefficient or discriminant vanishes).
    pub fn irreducible_mod_p(&self, p: u64) -> Option<bool> {
        let d = self.degree();
        if d == 0 {
            return Some(false);
        }
        let f = ModPoly::reduce(self, p)?;
        if f.coeffs.len() != d + 1 {
            return None;
        }
        if !f.is_squarefree() {
            return None;
        }
        if d == 1 {
            return Some(true);
        }
        // f irreducible over F_p iff x^(p^d) = x mod f and, for each prime
        // q | d, gcd(x^(p^(d/q)) - x, f) is constant
        let xp_d = f.frobenius_power(d as u32);
        if !xp_d.is_x() {
            return Some(false);
        }
        let mut q = 2usize;
        let mut rem = d;
        let mut prime_divs = vec![];
        while q * q <= rem {
            if rem % q == 0 {
                prime_divs.push(q);
                while rem % q == 0 {
                    rem /= q;
                }
            }
            q += 1;
        }
        if rem > 1 {
            prime_divs.push(rem);
        }
        for q in prime_divs {
            let e = (d / q) as u32;
            let xpe = f.frobenius_power(e);
            let mut diff = xpe;
            diff.sub_x();
            if f.gcd_with(&diff).deg() != 0 {
                return Some(false);
            }
        }
        Some(true)
    }
}

/// Dense polynomial over F_p, ascending coefficients.
struct ModPoly {
    coeffs: Vec<u64>,
    p: u64,
}

impl ModPoly {
    fn reduce(f: &ZPoly, p: u64) -> Option<ModPoly> {
        let pb = BigInt::from(p);
        let mut coeffs: Vec<u64> = f
            .coeffs
            .iter()
            .rev()
            .map(|c| {
                let r = c.mod_floor(&pb);
                u64::try_from(r).expect("residue fits")
            })
            .collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return None;
        }
        Some(ModPoly { coeffs, p })
    }

    fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn inv(&self, a: u64) -> u64 {
        // Fermat
        let mut base = a % self.p;
        let mut e = self.p - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulmod(acc, base);
            }
            base = self.mulmod(base, base);
            e >>= 1;
        }
        acc
    }

    fn rem_by(&self, g: &[u64]) -> Vec<u64> {
        let mut r = self.coeffs.clone();
        let gd = g.len() - 1;
        let glead_inv = self.inv(g[gd]);
        while r.len() > gd {
            let k = r.len() - 1;
            let c = self.mulmod(r[k], glead_inv);
            if c != 0 {
                for i in 0..=gd {
                    let idx = k - gd + i;
                    let sub = self.mulmod(c, g[i]);
                    r[idx] = (r[idx] + self.p - sub) % self.p;
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
            if r.is_empty() {
                break;
            }
        }
        r
    }

    fn is_squarefree(&self) -> bool {
        let d = self.deg();
        let mut der = vec![0u64; d];
        for i in 1..=d {
            der[i - 1] = self.mulmod(self.coeffs[i], i as u64 % self.p);
        }
        while der.last() == Some(&0) {
            der.pop();
        }
        if der.is_empty() {
            return false;
        }
        let a = ModPoly {
            coeffs: self.coeffs.clone(),
            p: self.p,
        };
        let b = ModPoly {
            coeffs: der,
            p: self.p,
        };
        a.gcd_with(&b).deg() == 0
    }

    fn gcd_with(&self, other: &ModPoly) -> ModPoly {
        let mut a = self.coeffs.clone();
        let mut b = other.coeffs.clone();
        while !b.is_empty() {
            let t = ModPoly {
                coeffs: a,
                p: self.p,
            };
            let r = if t.coeffs.len() >= b.len() {
                t.rem_by(&b)
            } else {
                t.coeffs
            };
            a = b;
            b = r;
        }
        ModPoly { coeffs: a, p: self.p }
    }

    fn mul_mod_self(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + self.mulmod(x, y)) % self.p;
            }
        }
        let t = ModPoly {
            coeffs: prod,
            p: self.p,
        };
        let mut r = t.coeffs.clone();
        while r.last() == Some(&0) {
            r.pop();
        }
        if r.len() > self.deg() {
            r = ModPoly { coeffs: r, p: self.p }.rem_by(&self.coeffs);
        }
        r
    }

    /// `x^(p^e) mod f` by square-and-multiply on the exponent.
    fn frobenius_power(&self, e: u32) -> ModPoly {
        let mut exp: u128 = 1;
        for _ in 0..e {
            exp = exp.checked_mul(self.p as u128).expect("p^e fits in u128");
        }
        let mut result = vec![1u64];
        let mut base = vec![0u64, 1u64]; // x
        if self.deg() == 1 {
            base = ModPoly {
                coeffs: base,
                p: self.p,
            }
            .rem_by(&self.coeffs);
        }
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul_mod_self(&result, &base);
                if result.is_empty() {
                    result = vec![0];
                }
            }
            exp >>= 1;
            if exp > 0 {
                base = self.mul_mod_self(&base, &base);
                if base.is_empty() {
                    base = vec![0];
                }
            }
        }
        ModPoly {
            coeffs: result,
            p: self.p,
        }
    }

    fn is_x(&self) -> bool {
        self.coeffs == [0, 1]
    }

    fn sub_x(&mut self) {
        while self.coeffs.len() < 2 {
            self.coeffs.push(0);
        }
        self.coeffs[1] = (self.coeffs[1] + self.p - 1) % self.p;
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> QPoly {
        while coeffs.first().is_some_and(|c| c.is_zero()) {
            coeffs.remove(0);
        }
        QPoly { coeffs }
    }

    pub fn zero() -> QPoly {
        QPoly { coeffs: vec![] }
    }

    pub fn one() -> QPoly {
        QPoly {
            coeffs: vec![BigRational::one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        assert!(!self.is_zero(), "degree of the zero polynomial");
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> &BigRational {
        &self.coeffs[0]
    }

    pub fn monic(&self) -> QPoly {
        let l = self.leading().clone();
        QPoly {
            coeffs: self.coeffs.iter().map(|c| c / &l).collect(),
        }
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[n - self.coeffs.len() + i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[n - other.coeffs.len() + i] += c;
        }
        QPoly::new(out)
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, s: &BigRational) -> QPoly {
        if s.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    /// Euclidean division, `(quotient, remainder)`.
    pub fn divrem(&self, other: &QPoly) -> (QPoly, QPoly) {
        assert!(!other.is_zero(), "division by the zero polynomial");
        if self.is_zero() || self.degree() < other.degree() {
            return (QPoly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let d = other.degree();
        let qlen = rem.len() - d;
        let mut quot = vec![BigRational::zero(); qlen];
        for i in 0..qlen {
            let c = &rem[i] / other.leading();
            if !c.is_zero() {
                for (j, oc) in other.coeffs.iter().enumerate() {
                    let v = &c * oc;
                    rem[i + j] -= v;
                }
            }
            quot[i] = c;
        }
        (QPoly::new(quot), QPoly::new(rem[qlen..].to_vec()))
    }

    pub fn derivative(&self) -> QPoly {
        if self.is_zero() || self.degree() == 0 {
            return QPoly::zero();
        }
        let d = self.degree();
        QPoly::new(
            self.coeffs[..d]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(d - i)))
                .collect(),
        )
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// `f / gcd(f, f')`: same roots, all simple.
    pub fn squarefree_part(&self) -> QPoly {
        if self.is_zero() || self.degree() == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.clone();
        }
        let (q, r) = self.divrem(&g);
        debug_assert!(r.is_zero());
        q
    }

    /// Yun's algorithm: pairwise-coprime squarefree factors with their
    /// multiplicities, product recovering `self` up to the leading unit.
    pub fn squarefree_decomposition(&self) -> Vec<(QPoly, usize)> {
        assert!(!self.is_zero());
        let f = self.monic();
        if f.degree() == 0 {
            return vec![];
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        if a0.degree() == 0 {
            return vec![(f, 1)];
        }
        let mut out = vec![];
        let (mut b, _) = f.divrem(&a0);
        let (c0, _) = df.divrem(&a0);
        let mut c = c0.sub(&b.derivative());
        let mut i = 1;
        while !b.is_zero() && b.degree() > 0 {
            let a = b.gcd(&c);
            if a.degree() > 0 {
                out.push((a.clone(), i));
            }
            let (b2, _) = b.divrem(&a);
            let (cq, _) = c.divrem(&a);
            c = cq.sub(&b2.derivative());
            b = b2;
            i += 1;
        }
        out
    }

    /// Scales away denominators and content: primitive integer polynomial
    /// with positive leading coefficient and the same roots.
    pub fn clear_to_primitive(&self) -> ZPoly {
        if self.is_zero() {
            return ZPoly::zero();
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        ZPoly::new(ints).primitive_part()
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in &self.coeffs {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_cball(&self, z: &ComplexBall) -> ComplexBall {
        let bits = z.bits();
        let mut acc = ComplexBall::zero(bits);
        for c in &self.coeffs {
            acc = acc.mul(z).add(&ComplexBall::from_rational(c, bits));
        }
        acc
    }
}
