//! Closed-form capacity bounds for the optical intensity channel `Y = X + Z`,
//! `X ≥ 0`, `Z ~ N(0, σ²)`.
//!
//! Three regimes are distinguished:
//!
//! * [`CaseTag::I`]: peak `A` and average `E = αA` with `α < ½`;
//! * [`CaseTag::II`]: peak `A` and `α ≥ ½`, where the average constraint is inactive;
//! * [`CaseTag::III`]: average constraint only.
//!
//! Lower bounds come from the entropy power inequality applied to the
//! maximum-entropy input of each regime. Upper bounds come either from a
//! Gaussian output law or from duality with a piecewise output law whose
//! shape is controlled by free parameters (`δ`, `μ`, `β`). Everything is in nats.

use std::fmt;

use crate::error::{domain, Result};
use crate::params::solve_mu_star;
use crate::qfunc::{ln_2pi_e, log_q, one_minus_two_q, q, LN_SQRT_2PI, SQRT_2PI};

/// Regime of the constraint pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    I,
    II,
    III,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::I => "I",
            CaseTag::II => "II",
            CaseTag::III => "III",
        })
    }
}

/// A channel instance: noise level plus the power constraints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintSpec {
    pub sigma: f64,
    /// Peak amplitude `A`, absent for the average-only channel.
    pub peak: Option<f64>,
    /// Average amplitude `E` (equals `αA` when a peak is present).
    pub average: f64,
    /// `E/A`, stored explicitly so that `A = 0` stays well defined.
    pub alpha: Option<f64>,
}

impl ConstraintSpec {
    /// Peak `A ≥ 0` with average `αA`, `0 < α ≤ 1`.
    pub fn peak_limited(sigma: f64, peak: f64, alpha: f64) -> Result<Self> {
        check_sigma("ConstraintSpec", sigma)?;
        if !(peak >= 0.0 && peak.is_finite()) {
            return Err(domain("ConstraintSpec", format!("peak must be >= 0, got {peak}")));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(domain(
                "ConstraintSpec",
                format!("alpha must lie in (0, 1], got {alpha}"),
            ));
        }
        Ok(Self {
            sigma,
            peak: Some(peak),
            average: alpha * peak,
            alpha: Some(alpha),
        })
    }

    /// Average constraint `E ≥ 0` only.
    pub fn average_only(sigma: f64, average: f64) -> Result<Self> {
        check_sigma("ConstraintSpec", sigma)?;
        if !(average >= 0.0 && average.is_finite()) {
            return Err(domain("ConstraintSpec", format!("average must be >= 0, got {average}")));
        }
        Ok(Self {
            sigma,
            peak: None,
            average,
            alpha: None,
        })
    }

    /// Builds the spec for a sweep point: `ratio` is `A/σ` for cases I/II and `E/σ` for case III.
    pub fn from_ratio(case: CaseTag, ratio: f64, sigma: f64, alpha: Option<f64>) -> Result<Self> {
        match case {
            CaseTag::III => Self::average_only(sigma, ratio * sigma),
            CaseTag::I => {
                let a = alpha.ok_or_else(|| domain("ConstraintSpec", "case I needs alpha"))?;
                if a >= 0.5 {
                    return Err(domain("ConstraintSpec", format!("case I needs alpha < 1/2, got {a}")));
                }
                Self::peak_limited(sigma, ratio * sigma, a)
            }
            CaseTag::II => Self::peak_limited(sigma, ratio * sigma, alpha.unwrap_or(1.0).max(0.5)),
        }
    }

    pub fn case(&self) -> CaseTag {
        case_of(self)
    }

    /// `A/σ` or `E/σ`, whichever drives the regime.
    pub fn snr_ratio(&self) -> f64 {
        match self.peak {
            Some(a) => a / self.sigma,
            None => self.average / self.sigma,
        }
    }
}

fn check_sigma(op: &'static str, sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(domain(op, format!("sigma must be positive and finite, got {sigma}")))
    }
}

fn check_nonneg(op: &'static str, name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(domain(op, format!("{name} must be >= 0 and finite, got {v}")))
    }
}

fn check_pos(op: &'static str, name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(domain(op, format!("{name} must be positive and finite, got {v}")))
    }
}

fn check_case1_alpha(op: &'static str, alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 0.5 {
        Ok(())
    } else {
        Err(domain(op, format!("alpha must lie in (0, 1/2), got {alpha}")))
    }
}

/// Regime dispatch. `α = ½` exactly goes to case II.
pub fn case_of(spec: &ConstraintSpec) -> CaseTag {
    match (spec.peak, spec.alpha) {
        (None, _) => CaseTag::III,
        (Some(_), Some(a)) if a < 0.5 => CaseTag::I,
        (Some(_), _) => CaseTag::II,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Lower,
    Upper,
}

/// Identifies which closed form produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formula {
    /// Peak + average, maximum-entropy truncated exponential input.
    PeakAvgEpi,
    /// Peak + average, Gaussian output law.
    PeakAvgGauss,
    /// Peak + average, duality with a truncated-exponential middle piece.
    PeakAvgDual,
    /// Peak only, uniform input.
    PeakEpi,
    /// Peak only, Gaussian output law.
    PeakGauss,
    /// Peak only, duality with a flat middle piece.
    PeakDual,
    /// Average only, exponential input.
    AvgEpi,
    /// Average only, duality with shift `δ ≤ −σ/√e`.
    AvgDualNegShift,
    /// Average only, duality with shift `δ ≥ 0`.
    AvgDualPosShift,
}

impl Formula {
    pub const ALL: [Formula; 9] = [
        Formula::PeakAvgEpi,
        Formula::PeakAvgGauss,
        Formula::PeakAvgDual,
        Formula::PeakEpi,
        Formula::PeakGauss,
        Formula::PeakDual,
        Formula::AvgEpi,
        Formula::AvgDualNegShift,
        Formula::AvgDualPosShift,
    ];

    pub fn side(self) -> Side {
        match self {
            Formula::PeakAvgEpi | Formula::PeakEpi | Formula::AvgEpi => Side::Lower,
            _ => Side::Upper,
        }
    }

    pub fn case(self) -> CaseTag {
        match self {
            Formula::PeakAvgEpi | Formula::PeakAvgGauss | Formula::PeakAvgDual => CaseTag::I,
            Formula::PeakEpi | Formula::PeakGauss | Formula::PeakDual => CaseTag::II,
            _ => CaseTag::III,
        }
    }

    /// Stable identifier used in CSV headers and reports.
    pub fn id(self) -> &'static str {
        match self {
            Formula::PeakAvgEpi => "peak_avg_epi",
            Formula::PeakAvgGauss => "peak_avg_gauss",
            Formula::PeakAvgDual => "peak_avg_dual",
            Formula::PeakEpi => "peak_epi",
            Formula::PeakGauss => "peak_gauss",
            Formula::PeakDual => "peak_dual",
            Formula::AvgEpi => "avg_epi",
            Formula::AvgDualNegShift => "avg_dual_neg",
            Formula::AvgDualPosShift => "avg_dual_pos",
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Free parameters used by a bound, where it has any.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BoundParams {
    pub delta: Option<f64>,
    pub mu: Option<f64>,
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundEstimate {
    pub nats: f64,
    pub side: Side,
    pub formula: Formula,
    pub params: BoundParams,
}

impl BoundEstimate {
    fn new(formula: Formula, nats: f64, params: BoundParams) -> Self {
        let nats = match formula.side() {
            Side::Lower => nats.max(0.0),
            Side::Upper => nats,
        };
        Self {
            nats,
            side: formula.side(),
            formula,
            params,
        }
    }
}

/// `½ ln(1 + x)` that stays finite for huge x.
fn half_ln1p(x: f64) -> f64 {
    if x > 1e300 {
        0.5 * x.ln()
    } else {
        0.5 * x.ln_1p()
    }
}

/// `ln(e^a + e^b)`.
pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// Entropy-power lower bound with the truncated exponential input (`α < ½`).
pub fn lower_case1(a: f64, sigma: f64, alpha: f64) -> Result<BoundEstimate> {
    const OP: &str = "lower_case1";
    check_sigma(OP, sigma)?;
    check_nonneg(OP, "A", a)?;
    check_case1_alpha(OP, alpha)?;
    if a == 0.0 {
        return Ok(BoundEstimate::new(Formula::PeakAvgEpi, 0.0, BoundParams::default()));
    }
    let mu = solve_mu_star(alpha)?.mu;
    let shape = -(-mu).exp_m1() / mu;
    // A² e^{2αμ} ((1−e^{−μ})/μ)² / (2πeσ²), assembled in logs
    let log_x = 2.0 * (a / sigma).ln() + 2.0 * alpha * mu + 2.0 * shape.ln() - ln_2pi_e();
    let nats = half_ln1p(log_x.exp());
    Ok(BoundEstimate::new(
        Formula::PeakAvgEpi,
        nats,
        BoundParams {
            mu: Some(mu),
            ..Default::default()
        },
    ))
}

/// Gaussian-output upper bound `½ ln(1 + α(1−α)A²/σ²)`.
pub fn upper_case1_gauss(a: f64, sigma: f64, alpha: f64) -> Result<BoundEstimate> {
    const OP: &str = "upper_case1_gauss";
    check_sigma(OP, sigma)?;
    check_nonneg(OP, "A", a)?;
    if !(alpha > 0.0 && alpha <= 0.5) {
        return Err(domain(OP, format!("alpha must lie in (0, 1/2], got {alpha}")));
    }
    let r = a / sigma;
    Ok(BoundEstimate::new(
        Formula::PeakAvgGauss,
        half_ln1p(alpha * (1.0 - alpha) * r * r),
        BoundParams::default(),
    ))
}

/// `ln( A(e^{μδ/A} − e^{−μ(1+δ/A)}) / (√(2π)σμ(1 − 2Q(δ/σ))) )`, nonnegative for all
/// positive arguments.
pub fn dual_log_factor_case1(a: f64, sigma: f64, delta: f64, mu: f64) -> f64 {
    let spread = -(-mu * (1.0 + 2.0 * delta / a)).exp_m1();
    a.ln() + mu * delta / a + spread.ln() - LN_SQRT_2PI - sigma.ln() - mu.ln() - one_minus_two_q(delta / sigma).ln()
}

/// `ln( (A + 2δ) / (√(2π)σ(1 − 2Q(δ/σ))) )`, nonnegative for all `A, δ > 0`.
pub fn dual_log_factor_case2(a: f64, sigma: f64, delta: f64) -> f64 {
    (a + 2.0 * delta).ln() - LN_SQRT_2PI - sigma.ln() - one_minus_two_q(delta / sigma).ln()
}

/// Terms shared by both peak-constrained duality bounds:
/// `−½ + Q(δ/σ) + δ/(√(2π)σ)·e^{−δ²/2σ²}`.
fn tail_terms(sigma: f64, delta: f64) -> f64 {
    let d = delta / sigma;
    -0.5 + q(d) + d / SQRT_2PI * (-0.5 * d * d).exp()
}

/// Duality upper bound for `α < ½` with free parameters `δ, μ > 0`.
///
/// The `σμ/(A√2π)` grouping of the edge-correction term follows the term-by-term
/// derivation of the bound.
pub fn upper_case1_dual(a: f64, sigma: f64, alpha: f64, delta: f64, mu: f64) -> Result<BoundEstimate> {
    const OP: &str = "upper_case1_dual";
    check_sigma(OP, sigma)?;
    check_nonneg(OP, "A", a)?;
    check_case1_alpha(OP, alpha)?;
    check_pos(OP, "delta", delta)?;
    check_pos(OP, "mu", mu)?;
    let params = BoundParams {
        delta: Some(delta),
        mu: Some(mu),
        beta: None,
    };
    if a == 0.0 {
        return Ok(BoundEstimate::new(Formula::PeakAvgDual, 0.0, params));
    }
    let d = delta / sigma;
    let weight = 1.0 - q((delta + alpha * a) / sigma) - q((delta + (1.0 - alpha) * a) / sigma);
    let log_factor = dual_log_factor_case1(a, sigma, delta, mu);
    // e^{−δ²/2σ²} − e^{−(A+δ)²/2σ²} = e^{−δ²/2σ²}(1 − e^{−A(A+2δ)/2σ²})
    let edge = (-0.5 * d * d).exp() * -(-(a * (a + 2.0 * delta)) / (2.0 * sigma * sigma)).exp_m1();
    let nats = weight * log_factor
        + tail_terms(sigma, delta)
        + sigma * mu / (a * SQRT_2PI) * edge
        + mu * alpha * one_minus_two_q((delta + 0.5 * a) / sigma);
    Ok(BoundEstimate::new(Formula::PeakAvgDual, nats, params))
}

/// Entropy-power lower bound with the uniform input: `½ ln(1 + A²/(2πeσ²))`.
pub fn lower_case2(a: f64, sigma: f64) -> Result<BoundEstimate> {
    const OP: &str = "lower_case2";
    check_sigma(OP, sigma)?;
    check_nonneg(OP, "A", a)?;
    let r = a / sigma;
    Ok(BoundEstimate::new(
        Formula::PeakEpi,
        half_ln1p(r * r / ln_2pi_e().exp()),
        BoundParams::default(),
    ))
}

/// Gaussian-output upper bound `½ ln(1 + A²/(4σ²))`.
pub fn upper_case2_gauss(a: f64, sigma: f64) -> Result<BoundEstimate> {
    const OP: &str = "upper_case2_gauss";
    check_sigma(OP, sigma)?;
    check_nonneg(OP, "A", a)?;
    let r = a / sigma;
    Ok(BoundEstimate::new(
        Formula::PeakGauss,
        half_ln1p(0.25 * r * r),
        BoundParams::default(),
    ))
}

/// Duality upper bound for `α ≥ ½` with free parameter `δ > 0`.
pub fn upper_case2_dual(a: f64, sigma: f64, delta: f64) -> Result<BoundEstimate> {
    const OP: &str = "upper_case2_dual";
    check_sigma(OP, sigma)?;
    check_nonneg(OP, "A", a)?;
    check_pos(OP, "delta", delta)?;
    let params = BoundParams {
        delta: Some(delta),
        ..Default::default()
    };
    if a == 0.0 {
        return Ok(BoundEstimate::new(Formula::PeakDual, 0.0, params));
    }
    let weight = one_minus_two_q((delta + 0.5 * a) / sigma);
    let nats = weight * dual_log_factor_case2(a, sigma, delta) + tail_terms(sigma, delta);
    Ok(BoundEstimate::new(Formula::PeakDual, nats, params))
}

/// Entropy-power lower bound with the exponential input: `½ ln(1 + E²e/(2πσ²))`.
pub fn lower_case3(e: f64, sigma: f64) -> Result<BoundEstimate> {
    const OP: &str = "lower_case3";
    check_sigma(OP, sigma)?;
    check_nonneg(OP, "E", e)?;
    let r = e / sigma;
    let c = std::f64::consts::E / (2.0 * std::f64::consts::PI);
    Ok(BoundEstimate::new(
        Formula::AvgEpi,
        half_ln1p(c * r * r),
        BoundParams::default(),
    ))
}

/// `ln(βe^{−δ²/2σ²} + √(2π)σQ(δ/σ))`, the normalizer of the average-only output law.
pub fn avg_dual_log_normalizer(sigma: f64, delta: f64, beta: f64) -> f64 {
    let d = delta / sigma;
    log_add_exp(beta.ln() - 0.5 * d * d, LN_SQRT_2PI + sigma.ln() + log_q(d))
}

/// Smallest admissible shift magnitude for [`upper_case3_low`]: `σ/√e`.
pub fn neg_shift_limit(sigma: f64) -> f64 {
    sigma * (-0.5f64).exp()
}

/// Average-only duality bound, valid for `δ ≤ −σ/√e`, `β > 0`.
pub fn upper_case3_low(e: f64, sigma: f64, delta: f64, beta: f64) -> Result<BoundEstimate> {
    const OP: &str = "upper_case3_low";
    check_sigma(OP, sigma)?;
    check_nonneg(OP, "E", e)?;
    check_pos(OP, "beta", beta)?;
    if !(delta.is_finite() && delta <= -neg_shift_limit(sigma)) {
        return Err(domain(
            OP,
            format!(
                "delta must satisfy delta <= -sigma/sqrt(e) = {}, got {delta}",
                -neg_shift_limit(sigma)
            ),
        ));
    }
    let params = BoundParams {
        delta: Some(delta),
        mu: None,
        beta: Some(beta),
    };
    if e == 0.0 {
        return Ok(BoundEstimate::new(Formula::AvgDualNegShift, 0.0, params));
    }
    let d = delta / sigma;
    let s2 = sigma * sigma;
    let nats = avg_dual_log_normalizer(sigma, delta, beta) - LN_SQRT_2PI - sigma.ln() - delta * e / (2.0 * s2)
        + 0.5 * d * d * (q(-d) - e / delta * q(d))
        + (e + sigma / SQRT_2PI) / beta;
    Ok(BoundEstimate::new(Formula::AvgDualNegShift, nats, params))
}

/// Average-only duality bound, valid for `δ ≥ 0`, `β > 0`.
pub fn upper_case3_high(e: f64, sigma: f64, delta: f64, beta: f64) -> Result<BoundEstimate> {
    const OP: &str = "upper_case3_high";
    check_sigma(OP, sigma)?;
    check_nonneg(OP, "E", e)?;
    check_pos(OP, "beta", beta)?;
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(domain(OP, format!("delta must be >= 0, got {delta}")));
    }
    let params = BoundParams {
        delta: Some(delta),
        mu: None,
        beta: Some(beta),
    };
    if e == 0.0 {
        return Ok(BoundEstimate::new(Formula::AvgDualPosShift, 0.0, params));
    }
    let d = delta / sigma;
    let g = (-0.5 * d * d).exp();
    let nats = avg_dual_log_normalizer(sigma, delta, beta)
        + 0.5 * q(d)
        + d / (2.0 * SQRT_2PI) * g
        + 0.5 * d * d * (1.0 - q((delta + e) / sigma))
        + (delta + e + sigma / SQRT_2PI * g) / beta
        - 0.5 * ln_2pi_e()
        - sigma.ln();
    Ok(BoundEstimate::new(Formula::AvgDualPosShift, nats, params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{
        default_delta_case2, default_params_case1, default_params_case3_high, default_params_case3_low,
    };
    use std::f64::consts::{E, LN_2, PI};

    #[test]
    fn dispatch() {
        let s = ConstraintSpec::peak_limited(1.0, 1.0, 0.3).unwrap();
        assert_eq!(case_of(&s), CaseTag::I);
        let s = ConstraintSpec::peak_limited(1.0, 1.0, 0.9).unwrap();
        assert_eq!(case_of(&s), CaseTag::II);
        let s = ConstraintSpec::peak_limited(1.0, 1.0, 0.5).unwrap();
        assert_eq!(case_of(&s), CaseTag::II);
        let s = ConstraintSpec::average_only(1.0, 1.0).unwrap();
        assert_eq!(case_of(&s), CaseTag::III);
        assert!(ConstraintSpec::peak_limited(1.0, 1.0, 1.2).is_err());
        assert!(ConstraintSpec::peak_limited(0.0, 1.0, 0.2).is_err());
        assert!(ConstraintSpec::average_only(1.0, -1.0).is_err());
    }

    #[test]
    fn closed_form_spot_values() {
        assert_eq!(lower_case1(0.0, 1.0, 0.2).unwrap().nats, 0.0);
        assert_eq!(upper_case1_gauss(0.0, 1.0, 0.2).unwrap().nats, 0.0);
        let v = upper_case1_gauss(1.0, 1.0, 0.1).unwrap().nats;
        assert!((v - 0.5 * 1.09f64.ln()).abs() < 1e-15);
        assert!((v - 0.04308).abs() < 1e-5);
        let half = upper_case1_gauss(3.0, 1.0, 0.5).unwrap().nats;
        assert!((half - upper_case2_gauss(3.0, 1.0).unwrap().nats).abs() < 1e-15);

        let a = (2.0 * PI * E).sqrt();
        assert!((lower_case2(a, 1.0).unwrap().nats - 0.5 * LN_2).abs() < 1e-15);
        assert!((upper_case2_gauss(2.0, 1.0).unwrap().nats - 0.5 * LN_2).abs() < 1e-15);
        let e = (2.0 * PI / E).sqrt();
        assert!((lower_case3(e, 1.0).unwrap().nats - 0.5 * LN_2).abs() < 1e-15);
        assert_eq!(lower_case3(0.0, 1.0).unwrap().nats, 0.0);
    }

    #[test]
    fn case_boundary_continuity() {
        let a = 4.0;
        let l1 = lower_case1(a, 1.0, 0.5 - 1e-7).unwrap().nats;
        let l2 = lower_case2(a, 1.0).unwrap().nats;
        assert!((l1 - l2).abs() < 1e-6, "{l1} vs {l2}");
    }

    #[test]
    fn duality_bounds_at_seeds_dominate_lower_bounds() {
        let a = 10f64.powf(1.05);
        let (d, m) = default_params_case1(a, 1.0, 0.1).unwrap();
        let up = upper_case1_dual(a, 1.0, 0.1, d, m).unwrap().nats;
        assert!(up.is_finite() && up >= lower_case1(a, 1.0, 0.1).unwrap().nats);

        let a = 10f64.powf(0.64);
        let d = default_delta_case2(a, 1.0).unwrap();
        let up = upper_case2_dual(a, 1.0, d).unwrap().nats;
        assert!(up >= lower_case2(a, 1.0).unwrap().nats);

        let (d, b) = default_params_case3_low(0.1, 1.0).unwrap();
        let up = upper_case3_low(0.1, 1.0, d, b).unwrap().nats;
        // 30-digit evaluation of the same expression at the same seeds
        assert!((up - 0.395_934_625_883_584_1).abs() < 1e-12, "{up}");
        let law = 0.1 * 10f64.ln().sqrt();
        assert!(up / law > 2.0);

        let (d, b) = default_params_case3_high(1.0, 1.0).unwrap();
        assert!(upper_case3_high(1.0, 1.0, d, b).unwrap().nats >= lower_case3(1.0, 1.0).unwrap().nats);
        let v = upper_case3_high(1.0, 1.0, 0.0, 1.0 + 1.0 / SQRT_2PI).unwrap().nats;
        assert!(v.is_finite());
    }

    #[test]
    fn domain_errors() {
        assert!(upper_case1_dual(1.0, 1.0, 0.1, 0.0, 1.0).is_err());
        assert!(upper_case1_dual(1.0, 1.0, 0.1, 1.0, -1.0).is_err());
        assert!(upper_case1_dual(1.0, 1.0, 0.6, 1.0, 1.0).is_err());
        assert!(lower_case1(1.0, 1.0, 0.5).is_err());
        assert!(upper_case2_dual(1.0, 1.0, 0.0).is_err());
        assert!(upper_case3_low(1.0, 1.0, -0.5, 1.0).is_err());
        assert!(upper_case3_low(1.0, 1.0, -1.0, 0.0).is_err());
        assert!(upper_case3_high(1.0, 1.0, -0.1, 1.0).is_err());
        assert!(lower_case2(-1.0, 1.0).is_err());
    }

    #[test]
    fn high_snr_limits_of_seeded_duality_bounds() {
        // peak-only: value − ln(A/σ) → −½ ln 2πe
        let a = 1e8;
        let d = default_delta_case2(a, 1.0).unwrap();
        let v = upper_case2_dual(a, 1.0, d).unwrap().nats - a.ln();
        assert!((v + 0.5 * ln_2pi_e()).abs() < 1e-5, "{v}");

        // peak + average with μ = μ*: limit ln((1−e^{−μ*})/(√2π μ*)) − ½ + μ*α
        let alpha = 0.2;
        let ms = solve_mu_star(alpha).unwrap().mu;
        let a = 1e9;
        let d = default_params_case1(a, 1.0, alpha).unwrap().0;
        let v = upper_case1_dual(a, 1.0, alpha, d, ms).unwrap().nats - a.ln();
        let want = ((1.0 - (-ms).exp()) / (SQRT_2PI * ms)).ln() - 0.5 + ms * alpha;
        assert!((v - want).abs() < 1e-5, "{v} vs {want}");

        // average-only with β = E, δ = σ√ln(E/σ): limit ½ ln(e/2π)
        let e: f64 = 1e12;
        let d = e.ln().sqrt();
        let v = upper_case3_high(e, 1.0, d, e).unwrap().nats - e.ln();
        let want = 0.5 * (E / (2.0 * PI)).ln();
        assert!((v - want).abs() < 0.01, "{v} vs {want}");
    }

    #[test]
    fn extreme_snr_is_finite() {
        for &r in &[1e-8, 1e-3, 1.0, 1e3, 1e6, 1e9] {
            let (d, m) = default_params_case1(r, 1.0, 0.1).unwrap();
            assert!(upper_case1_dual(r, 1.0, 0.1, d, m).unwrap().nats.is_finite());
            let d = default_delta_case2(r, 1.0).unwrap();
            assert!(upper_case2_dual(r, 1.0, d).unwrap().nats.is_finite());
            let (d, b) = default_params_case3_high(r, 1.0).unwrap();
            assert!(upper_case3_high(r, 1.0, d, b).unwrap().nats.is_finite());
            assert!(upper_case3_low(r, 1.0, -40.0, 1e6).unwrap().nats.is_finite());
        }
    }
}
