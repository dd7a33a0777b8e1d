//! Certified complex embeddings of a number field.
//!
//! Roots of the defining polynomial are located by Aberth-Ehrlich
//! iteration in dyadic arithmetic, then certified a posteriori: the disk
//! around `z` of radius `deg * |f(z)/f'(z)|` always contains a root, and
//! pairwise disjoint disks therefore contain exactly one simple root
//! each. Conjugation structure is read off the disks, never from signs of
//! floating point noise: a disk disjoint from its own mirror image cannot
//! hold a real root, and a disk meeting exactly one mirror image pins
//! down the conjugate pairing.

use num_traits::Zero;

use crate::algnum::{AlgElement, NumberField};
use crate::arith::{ComplexBall, Dyadic, Mag, RealBall, Round};
use crate::error::{Error, Result};
use crate::poly::ZPoly;

/// Guard bits between the requested accuracy and the working scale.
const GUARD: u32 = 96;

/// Scale of the dyadic centers returned for a given accuracy request.
pub const fn working_scale(bits: u32) -> u32 {
    bits + GUARD
}
const MAX_ITER: usize = 500;

/// The complex roots of the defining polynomial in a deterministic order:
/// real embeddings ascending, then conjugate pairs with the
/// positive-imaginary member first, pairs sorted among themselves.
#[derive(Clone, Debug)]
pub struct EmbeddingSet {
    bits: u32,
    roots: Vec<ComplexBall>,
    conj: Vec<usize>,
    r1: usize,
    r2: usize,
}

impl EmbeddingSet {
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn r1(&self) -> usize {
        self.r1
    }

    pub fn r2(&self) -> usize {
        self.r2
    }

    pub fn roots(&self) -> &[ComplexBall] {
        &self.roots
    }

    pub fn root(&self, j: usize) -> &ComplexBall {
        &self.roots[j]
    }

    pub fn is_real(&self, j: usize) -> bool {
        j < self.r1
    }

    /// Index of the complex conjugate embedding (`j` itself when real).
    pub fn conj_index(&self, j: usize) -> usize {
        self.conj[j]
    }

    /// Representative indices, one per conjugacy class: all real ones,
    /// then the positive-imaginary member of each pair.
    pub fn class_representatives(&self) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.r1).collect();
        for k in 0..self.r2 {
            out.push(self.r1 + 2 * k);
        }
        out
    }

    /// Multiplicity of the class containing `j`: 1 for real, 2 for
    /// complex.
    pub fn class_weight(&self, j: usize) -> u32 {
        if self.is_real(j) {
            1
        } else {
            2
        }
    }

    /// At most one real embedding.
    pub fn is_almost_totally_imaginary(&self) -> bool {
        self.r1 <= 1
    }

    /// Image of a field element under the `j`-th embedding.
    pub fn embed(&self, gamma: &AlgElement, j: usize) -> ComplexBall {
        let z = &self.roots[j];
        let bits = z.bits();
        let mut acc = ComplexBall::zero(bits);
        for c in gamma.coords().iter().rev() {
            acc = acc.mul(z).add(&ComplexBall::from_rational(c, bits));
        }
        acc
    }

    pub fn embed_all(&self, gamma: &AlgElement) -> Vec<ComplexBall> {
        (0..self.degree()).map(|j| self.embed(gamma, j)).collect()
    }

    /// `log |phi_j(gamma)|`; fails when the modulus is not certifiably
    /// positive at this precision.
    pub fn log_abs(&self, gamma: &AlgElement, j: usize) -> Result<RealBall> {
        self.embed(gamma, j).mod_ball().ln()
    }

    /// Enclosure of the house, the largest modulus over all embeddings.
    pub fn house(&self, gamma: &AlgElement) -> RealBall {
        let mods: Vec<RealBall> = (0..self.degree())
            .map(|j| self.embed(gamma, j).mod_ball())
            .collect();
        max_enclosure(&mods)
    }
}

/// Interval hull of the maximum of finitely many balls.
pub fn max_enclosure(balls: &[RealBall]) -> RealBall {
    assert!(!balls.is_empty());
    let (mut lo, mut hi) = balls[0].endpoints();
    for b in &balls[1..] {
        let (l, h) = b.endpoints();
        if l.cmp_val(&lo) == std::cmp::Ordering::Greater {
            lo = l;
        }
        if h.cmp_val(&hi) == std::cmp::Ordering::Greater {
            hi = h;
        }
    }
    RealBall::from_endpoints(&lo, &hi)
}

pub fn compute_embeddings(k: &NumberField, bits: u32) -> Result<EmbeddingSet> {
    let enclosures = root_enclosures(k.min_poly(), bits)?;
    order_roots(enclosures, bits)
}

/// Certified enclosures of all roots of a squarefree polynomial, in no
/// particular order. Each disk holds exactly one simple root, disks are
/// pairwise disjoint with a margin, and every radius is below
/// `2^-(bits+8) * max(1, |root|)`.
pub fn root_enclosures(f: &ZPoly, bits: u32) -> Result<Vec<ComplexBall>> {
    assert!(!f.is_zero() && f.degree() >= 1);
    let d = f.degree();
    let wp = working_scale(bits);
    let df = f.derivative();

    let mut zs = initial_guesses(f, wp);
    let mut stagnant = 0usize;
    let mut last_max_rel: f64 = f64::INFINITY;
    for _ in 0..MAX_ITER {
        let mut max_rel: f64 = 0.0;
        let mut new_zs = zs.clone();
        for i in 0..d {
            let z = &zs[i];
            let fz = f.eval_cball(z);
            let dfz = df.eval_cball(z);
            if dfz.contains_zero() {
                // near a critical point; shove the iterate and move on
                new_zs[i] = nudge(z);
                max_rel = 1.0;
                continue;
            }
            let newton = match fz.div(&dfz) {
                Ok(n) => n,
                Err(_) => {
                    new_zs[i] = nudge(z);
                    max_rel = 1.0;
                    continue;
                }
            };
            // Aberth correction sum over the other iterates
            let mut s = ComplexBall::zero(wp);
            let mut collision = false;
            for (j, zj) in zs.iter().enumerate() {
                if j == i {
                    continue;
                }
                let diff = z.sub(zj);
                if diff.re.is_zero() && diff.im.is_zero() {
                    collision = true;
                    break;
                }
                match ComplexBall::exact(Dyadic::one(wp), Dyadic::zero(wp)).div(&diff) {
                    Ok(inv) => s = s.add(&inv),
                    Err(_) => {
                        collision = true;
                        break;
                    }
                }
            }
            if collision {
                new_zs[i] = nudge(z);
                max_rel = 1.0;
                continue;
            }
            let one = ComplexBall::exact(Dyadic::one(wp), Dyadic::zero(wp));
            let den = one.sub(&newton.mul(&s));
            let step = match newton.div(&den) {
                Ok(w) => w,
                Err(_) => newton.clone(),
            };
            let nz = z.sub(&step);
            new_zs[i] = ComplexBall::exact(nz.re, nz.im);
            let zmag = z.mod_upper().to_f64_up().max(f64::MIN_POSITIVE);
            let rel = step.mod_upper().to_f64_up() / zmag;
            if rel > max_rel {
                max_rel = rel;
            }
        }
        zs = new_zs;
        if max_rel < 0.5f64.powi((wp as i32 - 24).clamp(24, 900)) {
            break;
        }
        if max_rel >= last_max_rel * 0.9 {
            stagnant += 1;
        } else {
            stagnant = 0;
        }
        last_max_rel = max_rel;
        if stagnant > 60 {
            break;
        }
    }

    certify(f, &df, &zs, bits)
}

fn nudge(z: &ComplexBall) -> ComplexBall {
    let bits = z.bits();
    let bump = Dyadic::one(bits).mul_pow2(-12);
    ComplexBall::exact(z.re.add(&bump), z.im.add(&bump.mul_pow2(-1)))
}

/// Starting points at per-cluster magnitudes read off the upper convex
/// hull of `(i, log2 |a_i|)`: each hull edge of horizontal span `w`
/// contributes `w` guesses on a circle whose radius matches the
/// magnitudes of that root cluster. Without this, polynomials whose root
/// moduli span hundreds of octaves (minimal polynomials of large unit
/// powers) never finish the march from a single shared circle. Heuristic
/// only; correctness comes from certification.
fn initial_guesses(f: &ZPoly, wp: u32) -> Vec<ComplexBall> {
    let d = f.degree();
    let c = f.coeffs();
    // ascending-power points (i, log2 |a_i|), zero coefficients excluded
    let pts: Vec<(i64, i64)> = (0..=d)
        .filter(|&j| !c[j].is_zero())
        .map(|j| ((d - j) as i64, c[j].bits() as i64))
        .rev()
        .collect();
    let mut hull: Vec<(i64, i64)> = Vec::with_capacity(pts.len());
    for p in pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // drop b unless it lies strictly above the chord a-p
            if (b.1 - a.1) * (p.0 - a.0) > (p.1 - a.1) * (b.0 - a.0) {
                break;
            }
            hull.pop();
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(d);
    for e in 1..hull.len() {
        let (k1, l1) = hull[e - 1];
        let (k2, l2) = hull[e];
        let span = (k2 - k1) as usize;
        let lr = (l1 - l2) / (k2 - k1) + 1;
        for t in 0..span {
            let angle = 2.0 * std::f64::consts::PI * (t as f64 + 0.25) / span as f64
                + 0.35
                + 0.5 * e as f64;
            let re = Dyadic::from_f64(angle.cos(), wp, Round::Floor).mul_pow2(lr);
            let im = Dyadic::from_f64(angle.sin(), wp, Round::Floor).mul_pow2(lr);
            out.push(ComplexBall::exact(re, im));
        }
    }
    // trailing zero coefficients leave the low-order roots unassigned;
    // park those guesses near the origin
    while out.len() < d {
        let j = out.len();
        let angle = 0.7 + j as f64;
        let re = Dyadic::from_f64(angle.cos(), wp, Round::Floor).mul_pow2(-4);
        let im = Dyadic::from_f64(angle.sin(), wp, Round::Floor).mul_pow2(-4);
        out.push(ComplexBall::exact(re, im));
    }
    out
}

/// A-posteriori certification: disk radii, disjointness with margin, and
/// the accuracy target.
fn certify(f: &ZPoly, df: &ZPoly, zs: &[ComplexBall], bits: u32) -> Result<Vec<ComplexBall>> {
    let d = f.degree();
    let mut disks = Vec::with_capacity(d);
    for z in zs {
        let fz = f.eval_cball(z);
        let dfz = df.eval_cball(z);
        let dlo = dfz.mod_lower().ok_or_else(|| {
            Error::precision(bits, "derivative not separated from zero at an approximate root")
        })?;
        let t = fz.mod_upper().div(dlo).mul(Mag::from_u64(d as u64));
        let target = Mag::pow2(-(bits as i64) - 8).max(z.mod_upper().mul_pow2(-(bits as i64) - 8));
        if t.ge(target) && !t.is_zero() {
            return Err(Error::precision(bits, "root enclosure did not reach the accuracy target"));
        }
        disks.push(ComplexBall {
            re: z.re.clone(),
            im: z.im.clone(),
            rad: t,
        });
    }
    // pairwise disjoint with margin: distance > 4 (t_i + t_j)
    for i in 0..d {
        for j in i + 1..d {
            let need = disks[i].rad.add(disks[j].rad).mul(Mag::from_u64(4));
            let dist = disks[i].dist_lower(&disks[j]).unwrap_or(Mag::ZERO);
            if !dist.ge(need) || dist.is_zero() {
                return Err(Error::precision(bits, "root disks are not separated"));
            }
        }
    }
    Ok(disks)
}

/// Reads the conjugation structure off certified disks and orders them
/// canonically.
pub(crate) fn order_roots(disks: Vec<ComplexBall>, bits: u32) -> Result<EmbeddingSet> {
    let d = disks.len();
    let mut partner = vec![usize::MAX; d];
    for i in 0..d {
        let mirror = disks[i].conj();
        let mut hits = vec![];
        for (j, dj) in disks.iter().enumerate() {
            let sep = dj.dist_lower(&mirror).unwrap_or(Mag::ZERO);
            let need = dj.rad.add(mirror.rad);
            if !sep.ge(need) || sep.is_zero() {
                hits.push(j);
            }
        }
        if hits.len() != 1 {
            return Err(Error::precision(
                bits,
                "conjugation pairing is ambiguous at this precision",
            ));
        }
        partner[i] = hits[0];
    }
    for i in 0..d {
        if partner[partner[i]] != i {
            return Err(Error::precision(bits, "conjugation pairing is not an involution"));
        }
    }

    let mut real_idx: Vec<usize> = (0..d).filter(|&i| partner[i] == i).collect();
    let mut pair_reps: Vec<usize> = (0..d)
        .filter(|&i| partner[i] != i && disks[i].im.is_negative() == false && !disks[i].im.is_zero())
        .collect();
    if real_idx.len() + 2 * pair_reps.len() != d {
        return Err(Error::precision(bits, "conjugation pairing is inconsistent"));
    }

    sort_certified(&mut real_idx, &disks, bits, false)?;
    sort_certified(&mut pair_reps, &disks, bits, true)?;

    let mut roots = Vec::with_capacity(d);
    let mut conj = Vec::with_capacity(d);
    for &i in &real_idx {
        roots.push(disks[i].clone());
        conj.push(roots.len() - 1);
    }
    for &i in &pair_reps {
        let rep = disks[i].clone();
        let mate = disks[partner[i]].clone();
        roots.push(rep);
        roots.push(mate);
        let n = roots.len();
        conj.push(n - 1);
        conj.push(n - 2);
    }
    let r1 = real_idx.len();
    let r2 = pair_reps.len();
    Ok(EmbeddingSet {
        bits,
        roots,
        conj,
        r1,
        r2,
    })
}

/// Insertion sort with a certified comparator: by real part when the
/// intervals are disjoint, falling back to imaginary parts for pairs.
fn sort_certified(
    idx: &mut [usize],
    disks: &[ComplexBall],
    bits: u32,
    allow_im: bool,
) -> Result<()> {
    let lt = |a: usize, b: usize| -> Result<bool> {
        let (ra, rb) = (disks[a].re_ball(), disks[b].re_ball());
        if let Some(v) = ra.try_lt(&rb) {
            return Ok(v);
        }
        if allow_im {
            let (ia, ib) = (disks[a].im_ball(), disks[b].im_ball());
            if let Some(v) = ia.try_lt(&ib) {
                return Ok(v);
            }
        }
        Err(Error::precision(
            bits,
            "embedding order is not certifiable at this precision",
        ))
    };
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && lt(idx[j], idx[j - 1])? {
            idx.swap(j, j - 1);
            j -= 1;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algnum::NumberField;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn field(coeffs: &[i64]) -> NumberField {
        NumberField::new(ZPoly::from_i64(coeffs)).unwrap()
    }

    #[test]
    fn quadratic_real_roots_ordered() {
        let k = field(&[1, 0, -2]);
        let e = compute_embeddings(&k, 128).unwrap();
        assert_eq!((e.r1(), e.r2()), (2, 0));
        let lo = e.root(0).re_ball().to_f64_bounds();
        let hi = e.root(1).re_ball().to_f64_bounds();
        assert!(lo.1 < 0.0 && hi.0 > 0.0);
        assert!((lo.0 + std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!((hi.1 - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn gaussian_field_is_one_pair() {
        let k = field(&[1, 0, 1]);
        let e = compute_embeddings(&k, 128).unwrap();
        assert_eq!((e.r1(), e.r2()), (0, 1));
        assert_eq!(e.conj_index(0), 1);
        assert_eq!(e.conj_index(1), 0);
        // representative has positive imaginary part
        assert!(!e.root(0).im.is_negative());
    }

    #[test]
    fn cubic_mixed_signature() {
        let k = field(&[1, 0, 0, -2]);
        let e = compute_embeddings(&k, 160).unwrap();
        assert_eq!((e.r1(), e.r2()), (1, 1));
        let real = e.root(0).re_ball().to_f64_bounds();
        let expect = 2f64.powf(1.0 / 3.0);
        assert!(real.0 <= expect && expect <= real.1);
        assert!(!e.is_real(1));
        assert!(e.is_almost_totally_imaginary());
    }

    #[test]
    fn stender_quartic_is_totally_imaginary() {
        // theta^4 = -68
        let k = field(&[1, 0, 0, 0, 68]);
        let e = compute_embeddings(&k, 192).unwrap();
        assert_eq!((e.r1(), e.r2()), (0, 2));
        assert!(e.is_almost_totally_imaginary());
        // all four roots have modulus 68^(1/4)
        let expect = 68f64.powf(0.25);
        for j in 0..4 {
            let (lo, hi) = e.root(j).mod_ball().to_f64_bounds();
            assert!(lo <= expect && expect <= hi, "root {j}");
        }
    }

    #[test]
    fn twisted_quartic_roots_near_unit_powers() {
        // the degree-one family member: X^4 - 16X^3 + 130X^2 + 16X + 1 has
        // roots eps_i, one near 16 * (1 - ...) a hair above 15.98
        let f = ZPoly::from_i64(&[1, -16, 130, 16, 1]);
        let roots = root_enclosures(&f, 160).unwrap();
        assert_eq!(roots.len(), 4);
        let prod: f64 = roots
            .iter()
            .map(|r| r.mod_ball().to_f64_bounds().0)
            .product();
        // norm 1: product of all root moduli is |a_d / a_0| = 1
        assert!((prod - 1.0).abs() < 1e-9);
    }

    #[test]
    fn embeddings_multiply_along_the_field() {
        let k = field(&[1, 0, 0, 0, 68]);
        let e = compute_embeddings(&k, 160).unwrap();
        let eps = k
            .element(vec![
                BigRational::from_integer(BigInt::from(4)),
                BigRational::from_integer(BigInt::from(2)),
                BigRational::new(BigInt::from(1), BigInt::from(2)),
                BigRational::zero(),
            ])
            .unwrap();
        let sq = eps.mul(&eps, &k);
        for j in 0..4 {
            let lhs = e.embed(&sq, j);
            let rhs = e.embed(&eps, j).mul(&e.embed(&eps, j));
            let diff = lhs.sub(&rhs).mod_upper().to_f64_up();
            assert!(diff < 1e-30, "embedding {j} differs by {diff}");
        }
    }

    #[test]
    fn house_of_stender_unit() {
        let k = field(&[1, 0, 0, 0, 68]);
        let e = compute_embeddings(&k, 160).unwrap();
        let eps = k
            .element(vec![
                BigRational::from_integer(BigInt::from(4)),
                BigRational::from_integer(BigInt::from(2)),
                BigRational::new(BigInt::from(1), BigInt::from(2)),
                BigRational::zero(),
            ])
            .unwrap();
        let h = e.house(&eps);
        let (lo, hi) = h.to_f64_bounds();
        // largest conjugate of the fundamental unit, about e^(2.4412...)
        let expect = (4.882514851667388f64 / 2.0).exp();
        assert!(lo <= expect && expect <= hi, "[{lo}, {hi}] vs {expect}");
    }

    #[test]
    fn tiny_and_huge_roots_both_certify() {
        // 1000000 x^2 - 1000001 x + 1: roots 1e-6 and 1
        let f = ZPoly::from_i64(&[1_000_000, -1_000_001, 1]);
        let roots = root_enclosures(&f, 128).unwrap();
        let mods: Vec<f64> = roots
            .iter()
            .map(|r| r.mod_ball().midpoint_f64())
            .collect();
        assert!(mods.iter().any(|&m| (m - 1e-6).abs() < 1e-12));
        assert!(mods.iter().any(|&m| (m - 1.0).abs() < 1e-6));
    }
}
