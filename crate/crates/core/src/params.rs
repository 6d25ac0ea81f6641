//! The truncated-exponential parameter `μ*` and the closed-form free-parameter
//! choices used to seed every duality bound.

use crate::error::{domain, Result};
use crate::qfunc::{q, SQRT_2PI};

/// Below this argument `phi` switches to its Taylor expansion.
pub const PHI_SERIES_SWITCH: f64 = 1e-4;
/// Residual tolerance `|phi(mu) − alpha|` guaranteed by [`solve_mu_star`].
pub const MU_STAR_TOLERANCE: f64 = 1e-12;

/// Solution of `phi(mu) = alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuStar {
    pub mu: f64,
    pub alpha: f64,
    /// `phi(mu) − alpha` at the returned root.
    pub residual: f64,
}

/// `e^μ − 1 − μ` without cancellation for small μ.
fn expm1_minus_x(mu: f64) -> f64 {
    if mu.abs() < 1.0 {
        let mut term = mu * mu / 2.0;
        let mut sum = term;
        let mut k = 3.0;
        while term.abs() > 1e-18 * sum.abs() {
            term *= mu / k;
            sum += term;
            k += 1.0;
        }
        sum
    } else {
        mu.exp_m1() - mu
    }
}

/// `phi(μ) = 1/μ − e^{−μ}/(1 − e^{−μ})`, the mean of the truncated exponential
/// law `∝ e^{−μx}` on `[0, 1]`.
///
/// Strictly decreasing from ½ (as μ ↓ 0) to 0 (as μ → ∞).
pub fn phi(mu: f64) -> Result<f64> {
    if !(mu > 0.0) || mu.is_nan() {
        return Err(domain("phi", format!("mu must be positive, got {mu}")));
    }
    Ok(phi_unchecked(mu))
}

fn phi_unchecked(mu: f64) -> f64 {
    if mu < PHI_SERIES_SWITCH {
        let m2 = mu * mu;
        return 0.5 - mu / 12.0 + mu * m2 / 720.0 - mu * m2 * m2 / 30240.0;
    }
    if mu < 1.0 {
        // (e^μ − 1 − μ) / (μ (e^μ − 1))
        return expm1_minus_x(mu) / (mu * mu.exp_m1());
    }
    if mu > 700.0 {
        return 1.0 / mu;
    }
    1.0 / mu - 1.0 / mu.exp_m1()
}

fn phi_derivative(mu: f64) -> f64 {
    if mu < 1e-2 {
        let m2 = mu * mu;
        return -1.0 / 12.0 + m2 / 240.0 - m2 * m2 / 6048.0;
    }
    if mu > 700.0 {
        return -1.0 / (mu * mu);
    }
    // d/dμ [1/μ − 1/(e^μ − 1)] = −1/μ² + e^μ/(e^μ − 1)²
    let em1 = mu.exp_m1();
    -1.0 / (mu * mu) + (em1 + 1.0) / (em1 * em1)
}

/// Unique `μ* > 0` with `phi(μ*) = α`, for `α ∈ (0, ½)`.
///
/// Geometric bisection on `[1e−12, 1e12]` until the bracket is within 1e−3
/// relative, then safeguarded Newton. Deterministic.
pub fn solve_mu_star(alpha: f64) -> Result<MuStar> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(domain(
            "solve_mu_star",
            format!("alpha must lie in (0, 1/2), got {alpha}; alpha >= 1/2 is the peak-only case"),
        ));
    }
    let f = |mu: f64| phi_unchecked(mu) - alpha;

    // phi decreasing: f(lo) > 0 > f(hi)
    let mut lo = 1e-12_f64;
    let mut hi = 1e12_f64;
    while hi / lo > 1.0 + 1e-3 {
        let mid = (lo * hi).sqrt();
        let v = f(mid);
        if v == 0.0 {
            return Ok(MuStar {
                mu: mid,
                alpha,
                residual: 0.0,
            });
        }
        if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let mut mu = 0.5 * (lo + hi);
    for _ in 0..200 {
        let v = f(mu);
        if v.abs() <= 0.1 * MU_STAR_TOLERANCE || hi - lo <= 4.0 * f64::EPSILON * mu {
            break;
        }
        if v > 0.0 {
            lo = mu;
        } else {
            hi = mu;
        }
        let step = mu - v / phi_derivative(mu);
        mu = if step > lo && step < hi { step } else { 0.5 * (lo + hi) };
    }
    let residual = f(mu);
    Ok(MuStar { mu, alpha, residual })
}

fn check_positive(op: &'static str, name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(domain(op, format!("{name} must be positive and finite, got {v}")))
    }
}

/// `(δ, μ)` seed for the peak/average duality bound: `δ = σ ln(1 + A/σ)`,
/// `μ = μ*·(1 − e^{−αδ²/2σ²})`.
pub fn default_params_case1(a: f64, sigma: f64, alpha: f64) -> Result<(f64, f64)> {
    check_positive("default_params_case1", "A", a)?;
    check_positive("default_params_case1", "sigma", sigma)?;
    let mu_star = solve_mu_star(alpha)?.mu;
    let delta = sigma * (a / sigma).ln_1p();
    let x = alpha * delta * delta / (2.0 * sigma * sigma);
    let mu = mu_star * (-(-x).exp_m1());
    Ok((delta, mu))
}

/// `δ = σ ln(1 + A/σ)`, the seed for the peak-only duality bound.
pub fn default_delta_case2(a: f64, sigma: f64) -> Result<f64> {
    check_positive("default_delta_case2", "A", a)?;
    check_positive("default_delta_case2", "sigma", sigma)?;
    Ok(sigma * (a / sigma).ln_1p())
}

/// `E/σ` threshold `e^{−1/(4e)}` up to which the low-power seed applies.
pub fn case3_low_threshold() -> f64 {
    (-1.0 / (4.0 * std::f64::consts::E)).exp()
}

/// Positive root of `β² − cβ − c·√(2π)σ e^{δ²/2σ²} Q(δ/σ) = 0`, which is
/// the β minimizing both average-only bounds for a fixed δ.
pub fn optimal_beta(c: f64, delta: f64, sigma: f64) -> f64 {
    let d = delta / sigma;
    // e^{d²/2} Q(d) without overflow at large |d|
    let scaled_tail = if d > 0.0 {
        (0.5 * d * d + crate::qfunc::log_q(d)).exp()
    } else {
        (0.5 * d * d).exp() * q(d)
    };
    let k = c * SQRT_2PI * sigma * scaled_tail;
    0.5 * c + 0.5 * (c * c + 4.0 * k).sqrt()
}

/// `(δ, β)` seed for the average-only bound valid at `δ ≤ −σ/√e`.
pub fn default_params_case3_low(e: f64, sigma: f64) -> Result<(f64, f64)> {
    check_positive("default_params_case3_low", "E", e)?;
    check_positive("default_params_case3_low", "sigma", sigma)?;
    let threshold = case3_low_threshold();
    if e / sigma > threshold {
        return Err(domain(
            "default_params_case3_low",
            format!(
                "E/sigma = {} exceeds e^(-1/(4e)) = {threshold}; use the high-power parameters",
                e / sigma
            ),
        ));
    }
    let delta = -2.0 * sigma * (sigma / e).ln().sqrt();
    let c = e + sigma / SQRT_2PI;
    Ok((delta, optimal_beta(c, delta, sigma)))
}

/// `(δ, β)` seed for the average-only bound valid at `δ ≥ 0`.
pub fn default_params_case3_high(e: f64, sigma: f64) -> Result<(f64, f64)> {
    check_positive("default_params_case3_high", "E", e)?;
    check_positive("default_params_case3_high", "sigma", sigma)?;
    let delta = sigma * (e / sigma).ln_1p();
    let c = delta + e + sigma / SQRT_2PI * (-delta * delta / (2.0 * sigma * sigma)).exp();
    Ok((delta, optimal_beta(c, delta, sigma)))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain bisection on the defining expression, kept independent of the
    /// solver's series switch and Newton polish.
    fn bisect_mu(alpha: f64) -> f64 {
        let g = |m: f64| 1.0 / m - (-m).exp() / (1.0 - (-m).exp()) - alpha;
        let (mut lo, mut hi) = (1e-3, 1e3);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn phi_limits() {
        let v = phi(1e-8).unwrap();
        assert!(v > 0.5 - 1e-8 && v < 0.5);
        assert!(phi(1e6).unwrap() < 1.1e-6);
        assert!((1e3 * phi(1e3).unwrap() - 1.0).abs() < 1e-6);
        assert!(phi(0.0).is_err());
        assert!(phi(-1.0).is_err());
    }

    #[test]
    fn phi_branches_join_smoothly() {
        // the two sides differ by the slope times the step, plus rounding
        for &m in &[PHI_SERIES_SWITCH, 1.0, 700.0] {
            let h = 1e-12 * m;
            let a = phi_unchecked(m - h);
            let b = phi_unchecked(m + h);
            let expected = -2.0 * h * phi_derivative(m);
            assert!((a - b - expected).abs() < 1e-14 * a, "jump at {m}: {a} vs {b}");
        }
    }

    #[test]
    fn mu_star_examples() {
        let near_half = solve_mu_star(0.49999).unwrap();
        assert!(near_half.mu < 0.01);
        let quarter = solve_mu_star(0.25).unwrap();
        let oracle = bisect_mu(0.25);
        assert!((quarter.mu - oracle).abs() < 1e-9 * oracle);
        assert!((quarter.mu - 3.594).abs() < 1e-3);
        let small = solve_mu_star(0.001).unwrap();
        // αμ* = 1 − μ*/(e^{μ*} − 1), which rounds to exactly 1 at μ* ≈ 1000
        let prod = 0.001 * small.mu;
        assert!(prod > 0.99 && prod <= 1.0);
        assert!((small.mu - 1000.0).abs() < 1e-9);
    }

    #[test]
    fn mu_star_rejects_out_of_range() {
        for a in [0.0, 0.5, 0.7, -0.1, f64::NAN] {
            assert!(solve_mu_star(a).is_err(), "alpha={a}");
        }
    }

    #[test]
    fn case1_defaults() {
        let (d, _) = default_params_case1(std::f64::consts::E - 1.0, 1.0, 0.3).unwrap();
        assert!((d - 1.0).abs() < 1e-15);
        let (_, mu) = default_params_case1(10.0, 1.0, 0.1).unwrap();
        assert!(mu < solve_mu_star(0.1).unwrap().mu && mu > 0.0);
        let (_, mu_big) = default_params_case1(1e12, 1.0, 0.1).unwrap();
        assert!((mu_big - solve_mu_star(0.1).unwrap().mu).abs() < 1e-12);
    }

    #[test]
    fn case2_delta() {
        assert!(
            (default_delta_case2(std::f64::consts::E - 1.0, 2.0).unwrap()
                - 2.0 * (1.0 + (std::f64::consts::E - 1.0) / 2.0).ln())
            .abs()
                < 1e-15
        );
        let a = 1e9;
        assert!(default_delta_case2(a, 1.0).unwrap() / a < 1e-7);
        let tiny = 1e-6;
        assert!((default_delta_case2(tiny, 1.0).unwrap() - tiny).abs() < tiny * tiny);
        assert!(default_delta_case2(0.0, 1.0).is_err());
    }

    #[test]
    fn case3_defaults() {
        let (d, b) = default_params_case3_low((-0.25f64).exp(), 1.0).unwrap();
        assert!((d + 1.0).abs() < 1e-14);
        assert!(b > (-0.25f64).exp() + 1.0 / SQRT_2PI);

        let (d, _) = default_params_case3_low(0.1, 1.0).unwrap();
        assert!((d + 3.034_854_258_770_292_6).abs() < 1e-12);
        assert!(default_params_case3_low(1.0, 1.0).is_err());

        let (d, b) = default_params_case3_high(std::f64::consts::E - 1.0, 1.0).unwrap();
        assert!((d - 1.0).abs() < 1e-15);
        let c = d + (std::f64::consts::E - 1.0) + (-0.5f64).exp() / SQRT_2PI;
        assert!(b > c);
        let (d, _) = default_params_case3_high(1.0, 1.0).unwrap();
        assert!((d - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn beta_formula_is_stationary() {
        // derivative in β of ln(βe^{−δ²/2} + √2π Q(δ)) + c/β vanishes at the root
        for &(c, delta) in &[(0.5, -2.0), (2.0, 0.3), (10.0, 3.0)] {
            let b = optimal_beta(c, delta, 1.0);
            let g = |b: f64| (b * (-0.5 * delta * delta).exp() + SQRT_2PI * q(delta)).ln() + c / b;
            let h = 1e-6 * b;
            let d = (g(b + h) - g(b - h)) / (2.0 * h);
            assert!(d.abs() < 1e-6, "c={c} delta={delta} slope={d}");
        }
    }
}
