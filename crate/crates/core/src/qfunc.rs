//! Gaussian tail function `Q(ξ) = P[N(0,1) > ξ]` and the inequalities built on it.
//!
//! `Q` is evaluated through the complementary error function,
//! `Q(ξ) = ½·erfc(ξ/√2)`. The `erf`/`erfc` kernels below are the SunPro
//! (FreeBSD `s_erf.c`) rational approximations, accurate to about one ulp,
//! so the accuracy of every bound formula stays under test here rather than
//! in an external dependency.
//!
//! For large arguments `Q` underflows long before the bounds stop needing it,
//! so [`log_q`] switches to the asymptotic series of the Mills ratio at
//! `ξ = 8`.

// the erf coefficients are kept digit for digit as published
#![allow(clippy::excessive_precision)]

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{domain, Result};

/// `√(2π)`
pub const SQRT_2PI: f64 = 2.506_628_274_631_000_5;
/// `ln √(2π)`
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Argument above which [`log_q`] uses the asymptotic expansion.
pub const LOG_Q_SERIES_SWITCH: f64 = 8.0;

// Copyright (C) 1993 by Sun Microsystems, Inc. All rights reserved.
// Developed at SunPro, a Sun Microsystems, Inc. business.
// Permission to use, copy, modify, and distribute this software is freely
// granted, provided that this notice is preserved.
const ERX: f64 = 8.45062911510467529297e-01;
const EFX: f64 = 1.28379167095512586316e-01;
const PP0: f64 = 1.28379167095512558561e-01;
const PP1: f64 = -3.25042107247001499370e-01;
const PP2: f64 = -2.84817495755985104766e-02;
const PP3: f64 = -5.77027029648944159157e-03;
const PP4: f64 = -2.37630166566501626084e-05;
const QQ1: f64 = 3.97917223959155352819e-01;
const QQ2: f64 = 6.50222499887672944485e-02;
const QQ3: f64 = 5.08130628187576562776e-03;
const QQ4: f64 = 1.32494738004321644526e-04;
const QQ5: f64 = -3.96022827877536812320e-06;
const PA0: f64 = -2.36211856075265944077e-03;
const PA1: f64 = 4.14856118683748331666e-01;
const PA2: f64 = -3.72207876035701323847e-01;
const PA3: f64 = 3.18346619901161753674e-01;
const PA4: f64 = -1.10894694282396677476e-01;
const PA5: f64 = 3.54783043256182359371e-02;
const PA6: f64 = -2.16637559486879084300e-03;
const QA1: f64 = 1.06420880400844228286e-01;
const QA2: f64 = 5.40397917702171048937e-01;
const QA3: f64 = 7.18286544141962662868e-02;
const QA4: f64 = 1.26171219808761642112e-01;
const QA5: f64 = 1.36370839120290507362e-02;
const QA6: f64 = 1.19844998467991074170e-02;
const RA0: f64 = -9.86494403484714822705e-03;
const RA1: f64 = -6.93858572707181764372e-01;
const RA2: f64 = -1.05586262253232909814e+01;
const RA3: f64 = -6.23753324503260060396e+01;
const RA4: f64 = -1.62396669462573470355e+02;
const RA5: f64 = -1.84605092906711035994e+02;
const RA6: f64 = -8.12874355063065934246e+01;
const RA7: f64 = -9.81432934416914548592e+00;
const SA1: f64 = 1.96512716674392571292e+01;
const SA2: f64 = 1.37657754143519042600e+02;
const SA3: f64 = 4.34565877475229228821e+02;
const SA4: f64 = 6.45387271733267880336e+02;
const SA5: f64 = 4.29008140027567833386e+02;
const SA6: f64 = 1.08635005541779435134e+02;
const SA7: f64 = 6.57024977031928170135e+00;
const SA8: f64 = -6.04244152148580987438e-02;
const RB0: f64 = -9.86494292470009928597e-03;
const RB1: f64 = -7.99283237680523006574e-01;
const RB2: f64 = -1.77579549177547519889e+01;
const RB3: f64 = -1.60636384855821916062e+02;
const RB4: f64 = -6.37566443368389627722e+02;
const RB5: f64 = -1.02509513161107724954e+03;
const RB6: f64 = -4.83519191608651397019e+02;
const SB1: f64 = 3.03380607434824582924e+01;
const SB2: f64 = 3.25792512996573918826e+02;
const SB3: f64 = 1.53672958608443695994e+03;
const SB4: f64 = 3.19985821950859553908e+03;
const SB5: f64 = 2.55305040643316442583e+03;
const SB6: f64 = 4.74528541206955367215e+02;
const SB7: f64 = -2.24409524465858183362e+01;

/// Small-argument rational part: `erf(x) = x + x·R(x²)` for `|x| < 0.84375`.
#[inline]
fn erf_small_ratio(x: f64) -> f64 {
    let z = x * x;
    let r = PP0 + z * (PP1 + z * (PP2 + z * (PP3 + z * PP4)));
    let s = 1.0 + z * (QQ1 + z * (QQ2 + z * (QQ3 + z * (QQ4 + z * QQ5))));
    r / s
}

/// `erf(1+s) - ERX` for `|x|` in `[0.84375, 1.25)`.
#[inline]
fn erf_near_one(ax: f64) -> f64 {
    let s = ax - 1.0;
    let p = PA0 + s * (PA1 + s * (PA2 + s * (PA3 + s * (PA4 + s * (PA5 + s * PA6)))));
    let q = 1.0 + s * (QA1 + s * (QA2 + s * (QA3 + s * (QA4 + s * (QA5 + s * QA6)))));
    p / q
}

/// `ln(erfc(x)·x) + x²` for `x ≥ 1.25`, valid for every such x (not only below 28).
#[inline]
fn log_erfc_tail(x: f64) -> f64 {
    let s = 1.0 / (x * x);
    let (r, ss) = if x < 1.0 / 0.35 {
        (
            RA0 + s * (RA1 + s * (RA2 + s * (RA3 + s * (RA4 + s * (RA5 + s * (RA6 + s * RA7)))))),
            1.0 + s * (SA1 + s * (SA2 + s * (SA3 + s * (SA4 + s * (SA5 + s * (SA6 + s * (SA7 + s * SA8))))))),
        )
    } else {
        (
            RB0 + s * (RB1 + s * (RB2 + s * (RB3 + s * (RB4 + s * (RB5 + s * RB6))))),
            1.0 + s * (SB1 + s * (SB2 + s * (SB3 + s * (SB4 + s * (SB5 + s * (SB6 + s * SB7)))))),
        )
    };
    -0.5625 + r / ss
}

/// `erfc(x)/x·exp(...)` kernel for `x ≥ 1.25`, with the high/low split of `x²`
/// that keeps the exponent exact.
#[inline]
fn erfc_tail(x: f64) -> f64 {
    let z = f64::from_bits(x.to_bits() & 0xffff_ffff_0000_0000);
    let rs = log_erfc_tail(x) + 0.5625;
    (-z * z - 0.5625).exp() * ((z - x) * (z + x) + rs).exp() / x
}

/// Error function.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let v = if ax < 0.84375 {
        if ax < 3.725_290_298_461_914e-9 {
            ax + EFX * ax
        } else {
            ax + ax * erf_small_ratio(ax)
        }
    } else if ax < 1.25 {
        ERX + erf_near_one(ax)
    } else if ax >= 6.0 {
        1.0
    } else {
        1.0 - erfc_tail(ax)
    };
    v.copysign(x)
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    if ax < 0.84375 {
        if ax < 1.387_778_780_781_445_7e-17 {
            return 1.0 - x;
        }
        let y = erf_small_ratio(ax);
        if x < 0.25 {
            return 1.0 - (x + x * y);
        }
        return 0.5 - (x * y + (x - 0.5));
    }
    if ax < 1.25 {
        let pq = erf_near_one(ax);
        return if x > 0.0 { 1.0 - ERX - pq } else { 1.0 + ERX + pq };
    }
    if x > 0.0 {
        if x < 28.0 {
            erfc_tail(x)
        } else {
            // underflow territory for the direct form; still fine in logs
            (log_erfc_tail(x) - x * x - x.ln()).exp()
        }
    } else if ax < 6.0 {
        2.0 - erfc_tail(ax)
    } else {
        2.0
    }
}

/// Gaussian tail probability `Q(ξ)`.
///
/// Infinite arguments map to the limits 0 and 1; NaN propagates. Use
/// [`checked_q`] where a non-finite argument should be an error.
pub fn q(xi: f64) -> f64 {
    if xi == f64::INFINITY {
        return 0.0;
    }
    if xi == f64::NEG_INFINITY {
        return 1.0;
    }
    0.5 * erfc(xi * FRAC_1_SQRT_2)
}

/// [`q`] with non-finite arguments rejected.
pub fn checked_q(xi: f64) -> Result<f64> {
    if !xi.is_finite() {
        return Err(domain("q", format!("argument must be finite, got {xi}")));
    }
    Ok(q(xi))
}

/// `1 − 2Q(ξ)`, computed as `erf(ξ/√2)` so small arguments keep full precision.
pub fn one_minus_two_q(xi: f64) -> f64 {
    erf(xi * FRAC_1_SQRT_2)
}

/// Standard normal density.
#[inline]
pub fn gauss_pdf(xi: f64) -> f64 {
    (-0.5 * xi * xi).exp() / SQRT_2PI
}

/// Natural log of `Q(ξ)`, finite wherever `Q(ξ) > 0` mathematically.
pub fn log_q(xi: f64) -> f64 {
    if xi.is_nan() {
        return f64::NAN;
    }
    if xi < 0.0 {
        return (-q(-xi)).ln_1p();
    }
    if xi < LOG_Q_SERIES_SWITCH {
        return q(xi).ln();
    }
    -0.5 * xi * xi - (xi * SQRT_2PI).ln() + mills_series(xi).ln()
}

/// [`log_q`] with non-finite arguments rejected.
pub fn checked_log_q(xi: f64) -> Result<f64> {
    if !xi.is_finite() {
        return Err(domain("log_q", format!("argument must be finite, got {xi}")));
    }
    Ok(log_q(xi))
}

/// `ξ·Q(ξ)/φ(ξ) = 1 − 1/ξ² + 3/ξ⁴ − 15/ξ⁶ + …`, truncated at its smallest term.
fn mills_series(xi: f64) -> f64 {
    let inv2 = 1.0 / (xi * xi);
    let mut sum = 1.0;
    let mut term = 1.0_f64;
    let mut k = 1.0_f64;
    loop {
        let next = -term * (2.0 * k - 1.0) * inv2;
        if next.abs() >= term.abs() || next.abs() < 1e-18 {
            // optimal truncation: half of the first dropped term
            return sum + 0.5 * next;
        }
        sum += next;
        term = next;
        k += 1.0;
    }
}

/// `f(ξ) = 1 − Q(ξ₀ + ξ) − Q(ξ₀ + γ − ξ)` on `ξ ∈ [0, γ]`.
///
/// Concave, symmetric about `γ/2`, and maximal there.
pub fn tail_pair_complement(xi: f64, xi0: f64, gamma: f64) -> Result<f64> {
    if !(xi0 >= 0.0 && gamma >= 0.0 && xi0.is_finite() && gamma.is_finite()) {
        return Err(domain(
            "tail_pair_complement",
            format!("need finite xi0, gamma >= 0 (got xi0={xi0}, gamma={gamma})"),
        ));
    }
    if !(0.0..=gamma).contains(&xi) {
        return Err(domain(
            "tail_pair_complement",
            format!("xi={xi} outside [0, gamma={gamma}]"),
        ));
    }
    Ok(1.0 - q(xi0 + xi) - q(xi0 + gamma - xi))
}

/// Upper side of the Mills-ratio bracket in logs: `ln(φ(ξ)/ξ)` for `ξ > 0`.
pub fn log_tail_upper(xi: f64) -> f64 {
    -0.5 * xi * xi - xi.ln() - LN_SQRT_2PI
}

/// `ln(2π e)`, the entropy offset that appears throughout.
pub fn ln_2pi_e() -> f64 {
    (2.0 * PI).ln() + 1.0
}
