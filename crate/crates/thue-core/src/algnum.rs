//! Number fields presented as Q[X]/(f) and exact arithmetic on their
//! elements.
//!
//! The defining polynomial may be non-monic; elements carry rational
//! coordinates over the power basis `1, alpha, ..., alpha^(d-1)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{QPoly, ZPoly};

/// How the defining polynomial's irreducibility was settled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    /// Certified irreducible modulo the witness prime.
    Verified { witness_prime: u64 },
    /// No small-prime certificate; taken on trust.
    Asserted,
}

const WITNESS_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97,
];

#[derive(Clone, Debug)]
pub struct NumberField {
    min_poly: ZPoly,
    degree: usize,
    irreducibility: Irreducibility,
    /// Coordinates of `alpha^d .. alpha^(2d-2)` over the power basis.
    power_table: Vec<Vec<BigRational>>,
}

impl NumberField {
    /// Builds the field, normalizing the polynomial to primitive with
    /// positive leading coefficient. Rejects degenerate inputs; finds a
    /// mod-p irreducibility witness when one exists among small primes.
    pub fn new(poly: ZPoly) -> Result<NumberField> {
        if poly.is_zero() || poly.degree() < 2 {
            return Err(Error::validation(
                "defining polynomial must have degree at least 2",
            ));
        }
        let f = poly.primitive_part();
        let d = f.degree();
        let fq = f.to_q();
        if fq.gcd(&fq.derivative()).degree() != 0 {
            return Err(Error::validation("defining polynomial has repeated roots"));
        }
        if let Some(root) = rational_root(&f) {
            return Err(Error::validation(&format!(
                "defining polynomial is reducible: rational root {root}"
            )));
        }
        let irreducibility = WITNESS_PRIMES
            .iter()
            .find_map(|&p| match f.irreducible_mod_p(p) {
                Some(true) => Some(Irreducibility::Verified { witness_prime: p }),
                _ => None,
            })
            .unwrap_or(Irreducibility::Asserted);

        // alpha^d = -(c_1 alpha^(d-1) + ... + c_d) / c_0
        let c = f.coeffs();
        let lead = BigRational::from_integer(c[0].clone());
        let mut alpha_d: Vec<BigRational> = (0..d)
            .map(|i| -BigRational::from_integer(c[d - i].clone()) / &lead)
            .collect();
        let mut power_table = vec![alpha_d.clone()];
        for _ in 1..d.saturating_sub(1) {
            // multiply the previous row by alpha
            let mut next = vec![BigRational::zero(); d];
            let top = alpha_d[d - 1].clone();
            for i in (1..d).rev() {
                next[i] = alpha_d[i - 1].clone();
            }
            if !top.is_zero() {
                for (i, t) in power_table[0].iter().enumerate() {
                    next[i] += &top * t;
                }
            }
            power_table.push(next.clone());
            alpha_d = next;
        }
        Ok(NumberField {
            min_poly: f,
            degree: d,
            irreducibility,
            power_table,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn min_poly(&self) -> &ZPoly {
        &self.min_poly
    }

    pub fn irreducibility(&self) -> Irreducibility {
        self.irreducibility
    }

    pub fn zero(&self) -> AlgElement {
        AlgElement {
            coords: vec![BigRational::zero(); self.degree],
        }
    }

    pub fn one(&self) -> AlgElement {
        self.from_rational(&BigRational::one())
    }

    pub fn generator(&self) -> AlgElement {
        let mut coords = vec![BigRational::zero(); self.degree];
        coords[1] = BigRational::one();
        AlgElement { coords }
    }

    pub fn from_rational(&self, q: &BigRational) -> AlgElement {
        let mut coords = vec![BigRational::zero(); self.degree];
        coords[0] = q.clone();
        AlgElement { coords }
    }

    /// Element from ascending power-basis coordinates, padded or rejected
    /// by length.
    pub fn element(&self, coords: Vec<BigRational>) -> Result<AlgElement> {
        if coords.len() > self.degree {
            return Err(Error::validation(
                "coordinate vector longer than the field degree",
            ));
        }
        let mut c = coords;
        c.resize(self.degree, BigRational::zero());
        Ok(AlgElement { coords: c })
    }

    pub fn element_from_i64(&self, coords: &[i64]) -> Result<AlgElement> {
        self.element(
            coords
                .iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect(),
        )
    }
}

/// Small rational root search: divisor pairs of the constant and leading
/// coefficients, bounded so validation stays cheap.
fn rational_root(f: &ZPoly) -> Option<BigRational> {
    let a0 = f.leading().clone();
    let ad = f.constant();
    if ad.is_zero() {
        return Some(BigRational::zero());
    }
    let limit = BigInt::from(100_000u32);
    let small_divisors = |n: &BigInt| -> Vec<BigInt> {
        let n = n.abs();
        let mut out = vec![];
        let mut k = BigInt::one();
        while &k * &k <= n && k <= limit {
            if (&n % &k).is_zero() {
                out.push(k.clone());
                out.push(&n / &k);
            }
            k += 1;
        }
        out
    };
    for p in small_divisors(&ad) {
        for q in small_divisors(&a0) {
            for sign in [1i64, -1] {
                let cand = BigRational::new(&p * BigInt::from(sign), q.clone());
                if f.eval_rational(&cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

/// Field element as ascending coordinates over the power basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgElement {
    coords: Vec<BigRational>,
}

impl AlgElement {
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &AlgElement) -> AlgElement {
        AlgElement {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &AlgElement) -> AlgElement {
        AlgElement {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> AlgElement {
        AlgElement {
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, s: &BigRational) -> AlgElement {
        AlgElement {
            coords: self.coords.iter().map(|a| a * s).collect(),
        }
    }

    pub fn mul(&self, other: &AlgElement, k: &NumberField) -> AlgElement {
        let d = k.degree;
        let mut conv = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    conv[i + j] += a * b;
                }
            }
        }
        let mut out = conv[..d].to_vec();
        for e in d..2 * d - 1 {
            if conv[e].is_zero() {
                continue;
            }
            for (i, t) in k.power_table[e - d].iter().enumerate() {
                out[i] += &conv[e] * t;
            }
        }
        AlgElement { coords: out }
    }

    /// Multiplicative inverse by the extended Euclidean algorithm in
    /// Q[X]/(f).
    pub fn inverse(&self, k: &NumberField) -> Result<AlgElement> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let g = self.to_qpoly();
        let f = k.min_poly.to_q().monic();
        // g*u + f*v = gcd; track u only
        let (mut r0, mut r1) = (f, g);
        let (mut u0, mut u1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let u = u0.sub(&q.mul(&u1));
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = u;
        }
        if r0.degree() != 0 {
            // only possible when the defining polynomial is reducible
            return Err(Error::validation(
                "element is a zero divisor; the defining polynomial is reducible",
            ));
        }
        let inv_poly = u0.scale(&(BigRational::one() / r0.leading()));
        let mut coords: Vec<BigRational> = inv_poly.coeffs().to_vec();
        coords.reverse();
        k.element(coords)
    }

    pub fn pow(&self, n: i64, k: &NumberField) -> Result<AlgElement> {
        let base = if n < 0 {
            self.inverse(k)?
        } else {
            self.clone()
        };
        let mut e = n.unsigned_abs();
        let mut acc = k.one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b, k);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b, k);
            }
        }
        Ok(acc)
    }

    /// Ascending coordinates as a descending-coefficient polynomial.
    fn to_qpoly(&self) -> QPoly {
        let mut c = self.coords.clone();
        c.reverse();
        QPoly::new(c)
    }

    /// Matrix of multiplication by `self` over the power basis, columns
    /// indexed by basis vectors.
    fn mul_matrix(&self, k: &NumberField) -> Vec<Vec<BigRational>> {
        let d = k.degree;
        let mut cols = Vec::with_capacity(d);
        let mut cur = self.clone();
        cols.push(cur.coords.clone());
        for _ in 1..d {
            cur = cur.mul(&k.generator(), k);
            cols.push(cur.coords.clone());
        }
        // transpose columns into rows
        let mut m = vec![vec![BigRational::zero(); d]; d];
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m[i][j] = v.clone();
            }
        }
        m
    }

    /// Characteristic polynomial of the multiplication map, monic of
    /// degree `d`, by the Faddeev-LeVerrier recursion.
    pub fn char_poly(&self, k: &NumberField) -> QPoly {
        let d = k.degree;
        let m = self.mul_matrix(k);
        let mut coeffs = vec![BigRational::one()];
        let mut n = m.clone();
        for step in 1..=d {
            let tr: BigRational = (0..d).map(|i| n[i][i].clone()).sum();
            let c = -tr / BigRational::from_integer(BigInt::from(step));
            coeffs.push(c.clone());
            if step == d {
                break;
            }
            // n = m * (n + c I)
            let mut nc = n.clone();
            for i in 0..d {
                nc[i][i] += &c;
            }
            let mut next = vec![vec![BigRational::zero(); d]; d];
            for i in 0..d {
                for j in 0..d {
                    let mut s = BigRational::zero();
                    for (l, nc_l) in nc.iter().enumerate() {
                        if !m[i][l].is_zero() && !nc_l[j].is_zero() {
                            s += &m[i][l] * &nc_l[j];
                        }
                    }
                    next[i][j] = s;
                }
            }
            n = next;
        }
        QPoly::new(coeffs)
    }

    /// Field norm: determinant of the multiplication map.
    pub fn norm(&self, k: &NumberField) -> BigRational {
        let cp = self.char_poly(k);
        let c = cp.coeffs().last().cloned().unwrap_or_default();
        if k.degree % 2 == 1 {
            -c
        } else {
            c
        }
    }

    pub fn trace(&self, k: &NumberField) -> BigRational {
        -self.char_poly(k).coeffs()[1].clone()
    }

    /// Monic minimal polynomial: the squarefree part of the characteristic
    /// polynomial.
    pub fn min_poly_monic(&self, k: &NumberField) -> QPoly {
        self.char_poly(k).squarefree_part().monic()
    }

    /// Minimal polynomial cleared to a primitive integer polynomial with
    /// positive leading coefficient.
    pub fn min_poly_integer(&self, k: &NumberField) -> ZPoly {
        self.min_poly_monic(k).clear_to_primitive()
    }

    /// Whether this element generates the whole field.
    pub fn is_primitive_element(&self, k: &NumberField) -> bool {
        self.min_poly_monic(k).degree() == k.degree
    }
}
