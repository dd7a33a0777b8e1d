//! Directed f64 arithmetic for the explicit constants.
//!
//! Every helper lands on the requested side of the exact result: round to
//! nearest, then nudge outward. Basic operations are within half an ulp
//! before the nudge; library transcendentals get two nudges since they
//! only promise faithful rounding.

pub fn add_up(a: f64, b: f64) -> f64 {
    (a + b).next_up()
}

pub fn add_down(a: f64, b: f64) -> f64 {
    (a + b).next_down()
}

pub fn sub_up(a: f64, b: f64) -> f64 {
    (a - b).next_up()
}

pub fn sub_down(a: f64, b: f64) -> f64 {
    (a - b).next_down()
}

pub fn mul_up(a: f64, b: f64) -> f64 {
    (a * b).next_up()
}

pub fn mul_down(a: f64, b: f64) -> f64 {
    (a * b).next_down()
}

pub fn div_up(a: f64, b: f64) -> f64 {
    (a / b).next_up()
}

pub fn div_down(a: f64, b: f64) -> f64 {
    (a / b).next_down()
}

pub fn sqrt_up(a: f64) -> f64 {
    a.sqrt().next_up()
}

pub fn ln_up(a: f64) -> f64 {
    a.ln().next_up().next_up()
}

pub fn ln_down(a: f64) -> f64 {
    a.ln().next_down().next_down()
}

pub fn log2_up(a: f64) -> f64 {
    a.log2().next_up().next_up()
}

pub fn exp_up(a: f64) -> f64 {
    a.exp().next_up().next_up()
}

pub fn powf_up(a: f64, b: f64) -> f64 {
    a.powf(b).next_up().next_up()
}

pub fn powf_down(a: f64, b: f64) -> f64 {
    a.powf(b).next_down().next_down()
}

pub fn pi_up() -> f64 {
    std::f64::consts::PI.next_up()
}

/// ln 2 rounded up.
pub fn ln2_up() -> f64 {
    std::f64::consts::LN_2.next_up()
}

/// ln 2 rounded down.
pub fn ln2_down() -> f64 {
    std::f64::consts::LN_2.next_down()
}
