//! Maximum-entropy input laws and the output densities used in duality checks.

use crate::error::{domain, Result};
use crate::params::solve_mu_star;
use crate::qfunc::{one_minus_two_q, LN_SQRT_2PI};

use super::quadrature::{breakpoints, composite};
use super::DiscreteInput;

/// Continuous input laws of largest differential entropy under each constraint set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaxentDensity {
    /// `(μ/(A(1 − e^{−μ}))) e^{−μx/A}` on `[0, A]`, with `μ = μ*(α)`.
    TruncatedExponential { a: f64, mu: f64 },
    /// Uniform on `[0, A]`.
    Uniform { a: f64 },
    /// `(1/E) e^{−x/E}` on `[0, ∞)`.
    Exponential { e: f64 },
}

impl MaxentDensity {
    pub fn truncated_exponential(a: f64, alpha: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(domain("maxent_density", format!("A must be positive, got {a}")));
        }
        Ok(Self::TruncatedExponential {
            a,
            mu: solve_mu_star(alpha)?.mu,
        })
    }

    pub fn uniform(a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(domain("maxent_density", format!("A must be positive, got {a}")));
        }
        Ok(Self::Uniform { a })
    }

    pub fn exponential(e: f64) -> Result<Self> {
        if !(e > 0.0 && e.is_finite()) {
            return Err(domain("maxent_density", format!("E must be positive, got {e}")));
        }
        Ok(Self::Exponential { e })
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            Self::TruncatedExponential { a, mu } => {
                if (0.0..=a).contains(&x) {
                    mu / (a * -(-mu).exp_m1()) * (-mu * x / a).exp()
                } else {
                    0.0
                }
            }
            Self::Uniform { a } => {
                if (0.0..=a).contains(&x) {
                    1.0 / a
                } else {
                    0.0
                }
            }
            Self::Exponential { e } => {
                if x >= 0.0 {
                    (-x / e).exp() / e
                } else {
                    0.0
                }
            }
        }
    }

    /// Analytic differential entropy in nats.
    pub fn entropy(&self) -> f64 {
        match *self {
            Self::TruncatedExponential { a, mu } => {
                let alpha = self.mean() / a;
                -(mu / (a * -(-mu).exp_m1())).ln() + mu * alpha
            }
            Self::Uniform { a } => a.ln(),
            Self::Exponential { e } => 1.0 + e.ln(),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            // 1/μ − 1/(e^μ − 1) in units of A
            Self::TruncatedExponential { a, mu } => a * (1.0 / mu - 1.0 / mu.exp_m1()),
            Self::Uniform { a } => 0.5 * a,
            Self::Exponential { e } => e,
        }
    }

    /// Right end of the (truncated) support used for quadrature.
    pub fn support_end(&self, sigma: f64) -> f64 {
        match *self {
            Self::TruncatedExponential { a, .. } | Self::Uniform { a } => a,
            Self::Exponential { e } => super::grid::average_only_support(e, sigma),
        }
    }

    /// Gauss–Legendre discretization on panels no wider than `σ/4`. Masses are
    /// renormalized, which for the exponential law drops a tail below `e^{−40}`.
    pub fn discretize(&self, sigma: f64) -> DiscreteInput {
        let end = self.support_end(sigma);
        let (points, w) = composite(&breakpoints(0.0, end, &[]), 0.25 * sigma, 16);
        let mut masses: Vec<f64> = points.iter().zip(&w).map(|(x, w)| w * self.pdf(*x)).collect();
        let total: f64 = masses.iter().sum();
        masses.iter_mut().for_each(|m| *m /= total);
        DiscreteInput { points, masses }
    }
}

/// Output densities paired with the duality bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OutputDensity {
    /// Gaussian with mean `E` and variance `σ² + E(A − E)`.
    R1 { a: f64, e: f64 },
    /// Gaussian tails glued to a truncated exponential on `[−δ, A + δ]`.
    R2 { a: f64, delta: f64, mu: f64 },
    /// Gaussian with mean `A/2` and variance `σ² + A²/4`.
    R3 { a: f64 },
    /// Gaussian tails glued to a flat piece on `[−δ, A + δ]`.
    R4 { a: f64, delta: f64 },
    /// Gaussian left tail glued to an exponential right piece starting at `−δ`.
    R5 { delta: f64, beta: f64 },
}

impl OutputDensity {
    pub fn validate(&self, sigma: f64) -> Result<()> {
        let bad = |reason: String| Err(domain("output_density", reason));
        if !(sigma > 0.0 && sigma.is_finite()) {
            return bad(format!("sigma must be positive, got {sigma}"));
        }
        match *self {
            Self::R1 { a, e } => {
                if !(a > 0.0 && e >= 0.0 && e <= a) {
                    return bad(format!("need 0 <= E <= A, got A={a}, E={e}"));
                }
            }
            Self::R2 { a, delta, mu } => {
                if !(a > 0.0 && delta > 0.0 && mu > 0.0) {
                    return bad(format!("need A, delta, mu > 0, got A={a}, delta={delta}, mu={mu}"));
                }
            }
            Self::R3 { a } => {
                if !(a > 0.0) {
                    return bad(format!("need A > 0, got {a}"));
                }
            }
            Self::R4 { a, delta } => {
                if !(a > 0.0 && delta > 0.0) {
                    return bad(format!("need A, delta > 0, got A={a}, delta={delta}"));
                }
            }
            Self::R5 { delta, beta } => {
                let edge = crate::bounds::neg_shift_limit(sigma);
                if !(beta > 0.0 && delta.is_finite() && (delta >= 0.0 || delta <= -edge)) {
                    return bad(format!(
                        "need beta > 0 and delta >= 0 or delta <= -sigma/sqrt(e), got delta={delta}, beta={beta}"
                    ));
                }
            }
        }
        Ok(())
    }

    /// Points where the density has a kink or jump.
    pub fn breakpoints(&self) -> Vec<f64> {
        match *self {
            Self::R2 { a, delta, .. } | Self::R4 { a, delta } => vec![-delta, a + delta],
            Self::R5 { delta, .. } => vec![-delta],
            _ => Vec::new(),
        }
    }

    pub fn log_pdf(&self, y: f64, sigma: f64) -> f64 {
        let gauss = |z: f64, s: f64| -0.5 * (z / s) * (z / s) - LN_SQRT_2PI - s.ln();
        match *self {
            Self::R1 { a, e } => gauss(y - e, (sigma * sigma + e * (a - e)).sqrt()),
            Self::R3 { a } => gauss(y - 0.5 * a, (sigma * sigma + 0.25 * a * a).sqrt()),
            Self::R2 { a, delta, mu } => {
                if y < -delta {
                    gauss(y, sigma)
                } else if y > a + delta {
                    gauss(y - a, sigma)
                } else {
                    // ln of μ(1 − 2Q(δ/σ)) / (A(e^{μδ/A} − e^{−μ(1+δ/A)})) − μy/A
                    let spread = -(-mu * (1.0 + 2.0 * delta / a)).exp_m1();
                    mu.ln() + one_minus_two_q(delta / sigma).ln() - a.ln() - mu * delta / a - spread.ln() - mu * y / a
                }
            }
            Self::R4 { a, delta } => {
                if y < -delta {
                    gauss(y, sigma)
                } else if y > a + delta {
                    gauss(y - a, sigma)
                } else {
                    one_minus_two_q(delta / sigma).ln() - (a + 2.0 * delta).ln()
                }
            }
            Self::R5 { delta, beta } => {
                let d = delta / sigma;
                let log_norm = crate::bounds::avg_dual_log_normalizer(sigma, delta, beta);
                if y < -delta {
                    -0.5 * (y / sigma) * (y / sigma) - log_norm
                } else {
                    -0.5 * d * d - (y + delta) / beta - log_norm
                }
            }
        }
    }
}
