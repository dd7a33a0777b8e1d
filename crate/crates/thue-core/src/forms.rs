//! Integer binary forms and the twisting construction: the form
//! attached to `alpha * eps` whose values are scaled norms of
//! `x - alpha*eps*y`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algnum::{AlgElement, NumberField};
use crate::arith::{ComplexBall, RealBall};
use crate::embeddings::EmbeddingSet;
use crate::error::{Error, Result};
use crate::poly::ZPoly;

/// Homogeneous form `sum a_i x^(d-i) y^i`, coefficients descending in x.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    coeffs: Vec<BigInt>,
}

impl BinaryForm {
    pub fn new(coeffs: Vec<BigInt>) -> Result<BinaryForm> {
        if coeffs.len() < 2 {
            return Err(Error::validation("a binary form needs degree at least 1"));
        }
        if coeffs[0].is_zero() {
            return Err(Error::validation(
                "leading coefficient of a binary form must be nonzero",
            ));
        }
        Ok(BinaryForm { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<BinaryForm> {
        BinaryForm::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Homogenization of a degree-d integer polynomial.
    pub fn from_poly(g: &ZPoly) -> Result<BinaryForm> {
        BinaryForm::new(g.coeffs().to_vec())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> &BigInt {
        &self.coeffs[0]
    }

    /// `F(x, y)` exactly.
    pub fn evaluate(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let mut acc = self.coeffs[0].clone();
        let mut ypow = BigInt::one();
        for a in &self.coeffs[1..] {
            acc = acc * x;
            ypow = &ypow * y;
            acc += a * &ypow;
        }
        acc
    }

    /// `G(x, y) = F(y, x)`.
    pub fn reciprocal(&self) -> BinaryForm {
        let mut c = self.coeffs.clone();
        c.reverse();
        // reciprocal of a form with vanishing y^d coefficient drops
        // degree as a polynomial; keep the full length so degrees match
        BinaryForm { coeffs: c }
    }

    /// `F(X, 1)` as a univariate polynomial.
    pub fn dehomogenize(&self) -> ZPoly {
        ZPoly::new(self.coeffs.clone())
    }
}

/// The form attached to the twist `gamma = alpha * eps`: the
/// homogenization of the integer minimal polynomial of `gamma`, so that
/// `N(x - gamma y) = F(x, y) / a_0`. Fails with `DegenerateTwist` when
/// `gamma` does not generate the field.
pub fn twist(k: &NumberField, alpha: &AlgElement, eps: &AlgElement) -> Result<BinaryForm> {
    let gamma = alpha.mul(eps, k);
    twisted_form(k, &gamma)
}

/// Same as `twist`, for a precomputed product.
pub fn twisted_form(k: &NumberField, gamma: &AlgElement) -> Result<BinaryForm> {
    if !gamma.is_primitive_element(k) {
        return Err(Error::DegenerateTwist);
    }
    BinaryForm::from_poly(&gamma.min_poly_integer(k))
}

/// Enclosure of `|a_0 prod_j (x - phi_j(gamma) y) - F(x, y)|`; contains
/// zero whenever `F` really is the norm form of `gamma`.
pub fn norm_form_residual(
    emb: &EmbeddingSet,
    gamma: &AlgElement,
    form: &BinaryForm,
    x: &BigInt,
    y: &BigInt,
) -> RealBall {
    let bits = emb.root(0).bits();
    let xb = ComplexBall::exact(
        crate::arith::Dyadic::from_bigint(x, bits),
        crate::arith::Dyadic::zero(bits),
    );
    let mut prod = ComplexBall::exact(
        crate::arith::Dyadic::from_bigint(form.leading(), bits),
        crate::arith::Dyadic::zero(bits),
    );
    for j in 0..emb.degree() {
        let term = xb.sub(&emb.embed(gamma, j).mul_bigint(y));
        prod = prod.mul(&term);
    }
    let fxy = ComplexBall::exact(
        crate::arith::Dyadic::from_bigint(&form.evaluate(x, y), bits),
        crate::arith::Dyadic::zero(bits),
    );
    prod.sub(&fxy).mod_ball()
}

/// One solution of a family member, tagged with the member index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SolutionTriple {
    pub n: i64,
    pub x: BigInt,
    pub y: BigInt,
}

impl SolutionTriple {
    pub fn new(x: i64, y: i64, n: i64) -> SolutionTriple {
        SolutionTriple {
            n,
            x: BigInt::from(x),
            y: BigInt::from(y),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embeddings::compute_embeddings;
    use num_rational::BigRational;

    fn stender_field() -> (NumberField, AlgElement) {
        let k = NumberField::new(ZPoly::from_i64(&[1, 0, 0, 0, 68])).unwrap();
        let eps = k
            .element(vec![
                BigRational::from_integer(BigInt::from(4)),
                BigRational::from_integer(BigInt::from(2)),
                BigRational::new(BigInt::from(1), BigInt::from(2)),
                BigRational::zero(),
            ])
            .unwrap();
        (k, eps)
    }

    #[test]
    fn twist_by_unit_gives_the_family_quartic() {
        let (k, eps) = stender_field();
        let f = twist(&k, &k.one(), &eps).unwrap();
        assert_eq!(
            f.coeffs(),
            BinaryForm::from_i64(&[1, -16, 130, 16, 1]).unwrap().coeffs()
        );
        assert_eq!(f.evaluate(&BigInt::from(2), &BigInt::from(1)), BigInt::from(441));
    }

    #[test]
    fn form_values_are_scaled_norms() {
        let (k, eps) = stender_field();
        let gamma = eps.pow(2, &k).unwrap();
        let f = twisted_form(&k, &gamma).unwrap();
        for (x, y) in [(3i64, 1i64), (-2, 5), (7, -3), (1, 0), (0, 2)] {
            let lin = k
                .from_rational(&BigRational::from_integer(BigInt::from(x)))
                .sub(&gamma.scale(&BigRational::from_integer(BigInt::from(y))));
            let n = lin.norm(&k);
            let expect = BigRational::from_integer(f.evaluate(&BigInt::from(x), &BigInt::from(y)))
                / BigRational::from_integer(f.leading().clone());
            assert_eq!(n, expect, "at ({x}, {y})");
        }
    }

    #[test]
    fn non_monic_form_values_are_scaled_norms() {
        // generator of 2X^2 - 1: N(x - alpha y) = x^2 - y^2/2
        let k = NumberField::new(ZPoly::from_i64(&[2, 0, -1])).unwrap();
        let gamma = k.generator();
        let f = twisted_form(&k, &gamma).unwrap();
        assert_eq!(f.coeffs(), &[BigInt::from(2), BigInt::zero(), BigInt::from(-1)]);
        let val = f.evaluate(&BigInt::from(3), &BigInt::from(2));
        assert_eq!(val, BigInt::from(14));
        let lin = k
            .from_rational(&BigRational::from_integer(BigInt::from(3)))
            .sub(&gamma.scale(&BigRational::from_integer(BigInt::from(2))));
        assert_eq!(
            lin.norm(&k),
            BigRational::new(BigInt::from(14), BigInt::from(2))
        );
    }

    #[test]
    fn degenerate_twists_are_rejected() {
        let (k, _eps) = stender_field();
        // theta^2 generates the quadratic subfield only
        let theta2 = k.generator().pow(2, &k).unwrap();
        assert!(matches!(
            twisted_form(&k, &theta2),
            Err(Error::DegenerateTwist)
        ));
        let rational = k.from_rational(&BigRational::from_integer(BigInt::from(7)));
        assert!(twisted_form(&k, &rational).is_err());
    }

    #[test]
    fn reciprocal_swaps_arguments() {
        let f = BinaryForm::from_i64(&[1, -16, 130, 16, 1]).unwrap();
        let g = f.reciprocal();
        for (x, y) in [(2i64, 3i64), (-1, 4), (5, -2)] {
            assert_eq!(
                g.evaluate(&BigInt::from(x), &BigInt::from(y)),
                f.evaluate(&BigInt::from(y), &BigInt::from(x))
            );
        }
    }

    #[test]
    fn norm_residual_encloses_zero() {
        let (k, eps) = stender_field();
        let emb = compute_embeddings(&k, 128).unwrap();
        let f = twist(&k, &k.one(), &eps).unwrap();
        let res = norm_form_residual(&emb, &eps, &f, &BigInt::from(9), &BigInt::from(-4));
        let (lo, hi) = res.to_f64_bounds();
        assert!(lo <= 0.0 && hi < 1e-25, "[{lo}, {hi}]");
    }

    #[test]
    fn solution_triples_order_by_member_then_point() {
        let mut v = vec![
            SolutionTriple::new(1, 1, 2),
            SolutionTriple::new(-1, 3, 0),
            SolutionTriple::new(0, 1, 0),
            SolutionTriple::new(1, 1, -3),
        ];
        v.sort();
        assert_eq!(v[0].n, -3);
        assert_eq!(v[1], SolutionTriple::new(-1, 3, 0));
        assert_eq!(v[2], SolutionTriple::new(0, 1, 0));
        assert_eq!(v[3].n, 2);
    }
}
