//! Modified Bessel functions of the first kind on a log scale.
//!
//! Three regimes are used for `log I_ν(x)`:
//!
//! - power series of `0F1(; ν+1; x²/4)` when `x ≤ 20` or `x²/4 ≤ ν+1`;
//! - the uniform (Debye) asymptotic expansion when `ν ≥ 25`;
//! - otherwise the order is shifted up to `ν + n ≥ 25`, evaluated with the
//!   Debye expansion, and brought back down through the backward recurrence
//!   of the ratios `I_{m+1}/I_m`.
//!
//! The ratio `A_d(κ) = I_{d/2}(κ) / I_{d/2-1}(κ)` is never formed by dividing
//! Bessel values. Above the Debye order it is the exponential of the
//! analytically simplified difference of two Debye expansions (the dominant
//! `νη` terms cancel symbolically); below it the backward recurrence
//! `R_m = 1 / (2(m+1)/x + R_{m+1})`, which is the continued fraction for the
//! ratio evaluated from the tail, is applied from the Debye seed.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Orders at or above this use the Debye expansion directly.
const DEBYE_MIN_ORDER: f64 = 25.0;
/// Number of Debye polynomials `u_0 .. u_{N-1}` kept in the expansion.
const DEBYE_TERMS: usize = 16;
/// Below this argument the power series is used for every order.
const SERIES_MAX_X: f64 = 20.0;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Coefficients of the Debye polynomials, `u_k(t) = Σ_p c[k][p] t^p`.
fn debye_polynomials() -> &'static [Vec<f64>] {
    static POLYS: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    POLYS.get_or_init(|| {
        // u_{k+1}(t) = ½ t²(1 − t²) u_k'(t) + ⅛ ∫₀ᵗ (1 − 5s²) u_k(s) ds
        let mut polys = vec![vec![1.0]];
        for k in 0..DEBYE_TERMS - 1 {
            let prev = &polys[k];
            let mut next = vec![0.0; prev.len() + 3];
            for (p, &a) in prev.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let pf = p as f64;
                next[p + 1] += 0.5 * pf * a + 0.125 * a / (pf + 1.0);
                next[p + 3] += -0.5 * pf * a - 0.625 * a / (pf + 3.0);
            }
            polys.push(next);
        }
        polys
    })
}

/// `Σ_k u_k(t) / ν^k`.
fn debye_sum(order: f64, t: f64) -> f64 {
    let mut sum = 0.0;
    let mut scale = 1.0;
    for poly in debye_polynomials() {
        let u = poly.iter().rev().fold(0.0, |acc, &c| acc * t + c);
        sum += u * scale;
        scale /= order;
    }
    sum
}

/// Debye expansion of `log I_ν(x)` for large `ν`.
fn log_bessel_debye(order: f64, x: f64) -> f64 {
    let s = order.hypot(x);
    let t = order / s;
    let nu_eta = s + order * (x / (order + s)).ln();
    nu_eta - 0.5 * (LN_2PI + order.ln()) - 0.5 * (s / order).ln() + debye_sum(order, t).ln()
}

/// `I_{ν+1}(x) / I_ν(x)` from the difference of two Debye expansions, with
/// the leading terms cancelled in closed form.
fn ratio_debye(order: f64, x: f64) -> f64 {
    let next = order + 1.0;
    let s0 = order.hypot(x);
    let s1 = next.hypot(x);
    let ds = (2.0 * order + 1.0) / (s0 + s1);
    let log_ratio = ds + (x / (next + s1)).ln() + order * (-(1.0 + ds) / (next + s1)).ln_1p()
        - 0.5 * (ds / s0).ln_1p()
        + (debye_sum(next, next / s1) / debye_sum(order, order / s0)).ln();
    log_ratio.exp()
}

/// Ratios `R_m = I_{m+1}(x) / I_m(x)` for `m = ν, ν+1, …, ν+n-1`, where
/// `ν + n` is the first order at or above the Debye threshold.
fn ratio_ladder(order: f64, x: f64) -> Vec<f64> {
    let steps = (DEBYE_MIN_ORDER - order).ceil().max(0.0) as usize;
    let mut ratios = vec![0.0; steps];
    let mut r = ratio_debye(order + steps as f64, x);
    for j in (0..steps).rev() {
        let m = order + j as f64;
        r = 1.0 / (2.0 * (m + 1.0) / x + r);
        ratios[j] = r;
    }
    ratios
}

fn use_series(order: f64, x: f64) -> bool {
    x <= SERIES_MAX_X || 0.25 * x * x <= order + 1.0
}

/// `log 0F1(; ν+1; x²/4)`, the power series part of `I_ν`.
fn log_series(order: f64, x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut m = 0.0;
    loop {
        m += 1.0;
        term *= q / (m * (order + m));
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum.ln()
}

fn check_bessel_args(order: f64, x: f64) -> Result<()> {
    if !(order >= 0.0 && order.is_finite()) {
        return Err(Error::Domain(format!("Bessel order must be finite and >= 0, got {order}")));
    }
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("Bessel argument must be finite and >= 0, got {x}")));
    }
    Ok(())
}

/// `log I_ν(x) − ν log x`, which stays finite as `x → 0`.
fn log_bessel_minus_power(order: f64, x: f64) -> f64 {
    if x == 0.0 {
        return -order * std::f64::consts::LN_2 - libm::lgamma(order + 1.0);
    }
    if use_series(order, x) {
        -order * std::f64::consts::LN_2 - libm::lgamma(order + 1.0) + log_series(order, x)
    } else {
        log_bessel_unchecked(order, x) - order * x.ln()
    }
}

fn log_bessel_unchecked(order: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if order == 0.0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if use_series(order, x) {
        return order * (0.5 * x).ln() - libm::lgamma(order + 1.0) + log_series(order, x);
    }
    if order >= DEBYE_MIN_ORDER {
        return log_bessel_debye(order, x);
    }
    let ladder = ratio_ladder(order, x);
    let top = order + ladder.len() as f64;
    log_bessel_debye(top, x) - ladder.iter().map(|r| r.ln()).sum::<f64>()
}

/// Natural log of the modified Bessel function of the first kind, `log I_ν(x)`.
///
/// At `x = 0` this is `0` for `ν = 0` and `-∞` otherwise.
pub fn log_bessel_i(order: f64, x: f64) -> Result<f64> {
    check_bessel_args(order, x)?;
    Ok(log_bessel_unchecked(order, x))
}

/// `I_{ν+1}(x) / I_ν(x)` for a real order `ν ≥ 0`.
pub fn bessel_i_ratio(order: f64, x: f64) -> Result<f64> {
    check_bessel_args(order, x)?;
    Ok(ratio_unchecked(order, x))
}

fn ratio_unchecked(order: f64, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if order >= DEBYE_MIN_ORDER {
        ratio_debye(order, x)
    } else {
        ratio_ladder(order, x)[0]
    }
}

fn check_dim_kappa(d: usize, kappa: f64) -> Result<()> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension must be >= 2, got {d}")));
    }
    if !(kappa >= 0.0 && kappa.is_finite()) {
        return Err(Error::Domain(format!("kappa must be finite and >= 0, got {kappa}")));
    }
    Ok(())
}

/// Mean resultant length of a vMF in dimension `d`:
/// `A_d(κ) = I_{d/2}(κ) / I_{d/2-1}(κ)`, in `[0, 1)`.
pub fn bessel_ratio(d: usize, kappa: f64) -> Result<f64> {
    check_dim_kappa(d, kappa)?;
    Ok(ratio_unchecked(0.5 * d as f64 - 1.0, kappa))
}

/// `log c_d(κ)`, the log-normaliser of the vMF density on `S^{d-1}`.
///
/// `κ = 0` returns the log density of the uniform distribution,
/// `log Γ(d/2) − log 2 − (d/2) log π`.
pub fn log_vmf_normalizer(d: usize, kappa: f64) -> Result<f64> {
    check_dim_kappa(d, kappa)?;
    let half = 0.5 * d as f64;
    Ok(-half * LN_2PI - log_bessel_minus_power(half - 1.0, kappa))
}

/// Estimate `κ` from a mean resultant length `r̄`.
///
/// Without refinement this is the closed-form approximation
/// `κ̃ = (r̄d − r̄³) / (1 − r̄²)`. With `refine`, safeguarded Newton steps on
/// `A_d(κ) − r̄ = 0` start from `κ̃` and stop once `|Δκ|/κ < 1e-10`
/// (at most 50 steps).
pub fn invert_bessel_ratio(d: usize, rbar: f64, refine: bool) -> Result<f64> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension must be >= 2, got {d}")));
    }
    if !(0.0..1.0).contains(&rbar) {
        return Err(Error::Domain(format!(
            "mean resultant length must lie in [0, 1), got {rbar}"
        )));
    }
    let df = d as f64;
    let approx = (rbar * df - rbar * rbar * rbar) / (1.0 - rbar * rbar);
    if !refine || rbar == 0.0 {
        return Ok(approx);
    }

    // A_d is strictly increasing, so keep a bracket and fall back to bisection
    // whenever a Newton step leaves it.
    let mut lo = 0.0;
    let mut hi = approx.max(1.0);
    while ratio_unchecked(0.5 * df - 1.0, hi) < rbar {
        lo = hi;
        hi *= 2.0;
    }
    let mut kappa = approx.clamp(lo, hi);
    for _ in 0..50 {
        let a = ratio_unchecked(0.5 * df - 1.0, kappa);
        let f = a - rbar;
        if f > 0.0 {
            hi = kappa;
        } else {
            lo = kappa;
        }
        let slope = 1.0 - a * a - (df - 1.0) * a / kappa;
        let mut next = kappa - f / slope;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        let delta = (next - kappa).abs();
        kappa = next;
        if delta <= 1e-10 * kappa {
            break;
        }
    }
    Ok(kappa)
}
