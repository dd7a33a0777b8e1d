//! Lower bounds for linear forms in logarithms, behind a trait so the
//! bound chain is generic in the transcendence input.

/// Supplies the multiplier `kappa(s, D)` such that a nonzero linear
/// form `Lambda = b_1 log w_1 + ... + b_s log w_s` over a degree-D
/// field satisfies
/// `log |Lambda| > -kappa(s, D) * prod_i max(d h(w_i), |log w_i|, 0.16)
///   * log(e * max|b_i|)`
/// in the normalization used throughout the bound chain.
pub trait LinFormBoundProvider {
    /// The structural multiplier, depending only on the number of
    /// logarithms and the field degree. Must be nondecreasing in both.
    fn kappa(&self, s: u32, degree: u32) -> f64;

    fn name(&self) -> &'static str;
}

/// The standard explicit multiplier
/// `kappa(s, D) = 2^(6s+20) s^(4.5) D^(s+2) (1 + log D)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct MatveevProvider;

impl LinFormBoundProvider for MatveevProvider {
    fn kappa(&self, s: u32, degree: u32) -> f64 {
        let s = s as f64;
        let d = degree as f64;
        let p1 = crate::dirf::powf_up(2.0, 6.0 * s + 20.0);
        let p2 = crate::dirf::powf_up(s, 4.5);
        let p3 = crate::dirf::powf_up(d, s + 2.0);
        let p4 = crate::dirf::add_up(1.0, crate::dirf::ln_up(d));
        crate::dirf::mul_up(crate::dirf::mul_up(p1, p2), crate::dirf::mul_up(p3, p4))
    }

    fn name(&self) -> &'static str {
        "matveev"
    }
}

/// Multiplier for the complex-argument corollary: one extra logarithm
/// (of -1) enters, and the argument normalization contributes the
/// factor in front.
pub fn corollary_multiplier(provider: &dyn LinFormBoundProvider, s: u32, degree: u32) -> f64 {
    let base = provider.kappa(s + 1, degree);
    let sd = 4.0 * (s as f64) * (degree as f64);
    let arg = crate::dirf::add_up(
        1.0,
        crate::dirf::div_up(crate::dirf::ln_up(sd), std::f64::consts::LN_2),
    );
    crate::dirf::add_up(
        crate::dirf::mul_up(
            crate::dirf::mul_up(2.0, crate::dirf::pi_up()),
            crate::dirf::mul_up(base, arg),
        ),
        1.0,
    )
}
