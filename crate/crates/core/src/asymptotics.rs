//! High- and low-SNR capacity asymptotes and numerical convergence diagnostics.

use crate::bounds::{CaseTag, ConstraintSpec};
use crate::error::{domain, Result};
use crate::optimize::envelope;
use crate::oracle::{flash_input, mutual_information};
use crate::params::solve_mu_star;
use crate::qfunc::ln_2pi_e;

/// Threshold the final high-SNR deviation must beat.
pub const HIGH_SNR_TOLERANCE: f64 = 0.01;
/// Number of trailing grid steps over which deviations must strictly decrease.
pub const MONOTONE_TAIL: usize = 5;
/// Flash signalling constant used for the achievable side at low SNR.
pub const FLASH_C: f64 = 3.0;

/// Constant offset of the high-SNR expansion `C ≈ ln(A/σ) + χ(α)`.
pub fn chi(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(domain("chi", format!("alpha must lie in (0, 1], got {alpha}")));
    }
    if alpha >= 0.5 {
        return Ok(-0.5 * ln_2pi_e());
    }
    let mu = solve_mu_star(alpha)?.mu;
    // 1 − αμ* underflows as α → 0; past this point use its exact closed form
    let log_slack = if alpha * mu <= CHI_DIRECT_LIMIT {
        (-alpha * mu).ln_1p()
    } else {
        mu.ln() - mu - (-(-mu).exp_m1()).ln()
    };
    Ok(-0.5 * ln_2pi_e() - (1.0 - alpha) * mu - log_slack)
}

/// Largest `αμ*` for which [`chi`] evaluates `ln(1 − αμ*)` directly.
pub const CHI_DIRECT_LIMIT: f64 = 0.999;

/// The same constant written as `−½ ln(2πe) + αμ* − ln(μ*/(1 − e^{−μ*}))`; agrees
/// with [`chi`] because `1 − αμ* = μ* e^{−μ*}/(1 − e^{−μ*})`.
pub fn chi_alternate(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(domain(
            "chi_alternate",
            format!("alpha must lie in (0, 1/2), got {alpha}"),
        ));
    }
    let mu = solve_mu_star(alpha)?.mu;
    Ok(-0.5 * ln_2pi_e() + alpha * mu - (mu / -(-mu).exp_m1()).ln())
}

/// High-SNR asymptote at `ratio = A/σ` (cases I/II) or `E/σ` (case III).
pub fn high_snr_asymptote(case: CaseTag, ratio: f64, alpha: Option<f64>) -> Result<f64> {
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(domain(
            "high_snr_asymptote",
            format!("ratio must be positive, got {ratio}"),
        ));
    }
    match case {
        CaseTag::I => {
            let a = alpha.ok_or_else(|| domain("high_snr_asymptote", "case I needs alpha"))?;
            if a >= 0.5 {
                return Err(domain(
                    "high_snr_asymptote",
                    format!("case I needs alpha < 1/2, got {a}"),
                ));
            }
            Ok(ratio.ln() + chi(a)?)
        }
        CaseTag::II => Ok(ratio.ln() - 0.5 * ln_2pi_e()),
        CaseTag::III => Ok(ratio.ln() + 0.5 * (std::f64::consts::E / (2.0 * std::f64::consts::PI)).ln()),
    }
}

/// Small-SNR behaviour of capacity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LowSnrLaw {
    /// `C ~ coefficient · (A/σ)²`.
    Quadratic { coefficient: f64 },
    /// `C` is sandwiched between `lower` and `upper` times `(E/σ)√(ln(σ/E))`.
    SqrtLog { lower: f64, upper: f64 },
}

impl LowSnrLaw {
    /// The scale function of the law evaluated at `ratio`.
    pub fn scale(&self, ratio: f64) -> f64 {
        match self {
            LowSnrLaw::Quadratic { .. } => ratio * ratio,
            LowSnrLaw::SqrtLog { .. } => ratio * (1.0 / ratio).ln().sqrt(),
        }
    }
}

pub fn low_snr_asymptote(case: CaseTag, alpha: Option<f64>) -> Result<LowSnrLaw> {
    match case {
        CaseTag::I => {
            let a = alpha.ok_or_else(|| domain("low_snr_asymptote", "case I needs alpha"))?;
            if !(a > 0.0 && a < 0.5) {
                return Err(domain(
                    "low_snr_asymptote",
                    format!("case I needs alpha in (0, 1/2), got {a}"),
                ));
            }
            Ok(LowSnrLaw::Quadratic {
                coefficient: a * (1.0 - a) / 2.0,
            })
        }
        CaseTag::II => Ok(LowSnrLaw::Quadratic { coefficient: 0.125 }),
        CaseTag::III => Ok(LowSnrLaw::SqrtLog {
            lower: std::f64::consts::FRAC_1_SQRT_2,
            upper: 2.0,
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    High,
    Low,
}

/// Envelope-versus-asymptote diagnostics on a dB grid.
///
/// In the high regime `upper_deviation`/`lower_deviation` hold absolute
/// distances (nats) from the asymptote. In the low regime they hold the ratios
/// of the upper and achievable values to the law's scale function.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoteReport {
    pub regime: Regime,
    pub case: CaseTag,
    pub alpha: Option<f64>,
    pub grid_db: Vec<f64>,
    pub asymptote: Vec<f64>,
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper_deviation: Vec<f64>,
    pub lower_deviation: Vec<f64>,
    pub converging: bool,
}

fn strictly_decreasing_tail(v: &[f64], steps: usize) -> bool {
    let start = v.len().saturating_sub(steps + 1);
    v[start..].windows(2).all(|w| w[1] < w[0])
}

/// Builds the report over `grid_db` (10·log10 of the ratio, ascending).
///
/// High regime: converging when both deviations strictly decrease over the
/// last [`MONOTONE_TAIL`] steps and end below [`HIGH_SNR_TOLERANCE`].
/// Low regime: converging when, at the last grid point, the upper ratio lies
/// within 1e-3 relative below the quadratic coefficient (cases I/II), or both
/// ratios lie in the widened bracket `[0.9·lower, 1.1·upper]` (case III).
pub fn convergence_report(
    case: CaseTag,
    alpha: Option<f64>,
    grid_db: &[f64],
    regime: Regime,
) -> Result<AsymptoteReport> {
    if grid_db.len() < 2 {
        return Err(domain("convergence_report", "grid needs at least two points"));
    }
    let sigma = 1.0;
    let mut asymptote = Vec::with_capacity(grid_db.len());
    let mut upper = Vec::with_capacity(grid_db.len());
    let mut lower = Vec::with_capacity(grid_db.len());
    let law = low_snr_asymptote(case, alpha)?;
    for &db in grid_db {
        let ratio = 10f64.powf(db / 10.0);
        let spec = ConstraintSpec::from_ratio(case, ratio, sigma, alpha)?;
        let env = envelope(&spec)?;
        upper.push(env.upper.nats);
        match regime {
            Regime::High => {
                lower.push(env.lower.nats);
                asymptote.push(high_snr_asymptote(case, ratio, alpha)?);
            }
            Regime::Low => {
                let achievable = match case {
                    CaseTag::III => mutual_information(&flash_input(ratio * sigma, sigma, FLASH_C)?, sigma)?,
                    _ => env.lower.nats,
                };
                lower.push(achievable);
                asymptote.push(law.scale(ratio));
            }
        }
    }

    let (upper_deviation, lower_deviation): (Vec<f64>, Vec<f64>) = match regime {
        Regime::High => (
            upper.iter().zip(&asymptote).map(|(u, a)| (u - a).abs()).collect(),
            lower.iter().zip(&asymptote).map(|(l, a)| (l - a).abs()).collect(),
        ),
        Regime::Low => (
            upper.iter().zip(&asymptote).map(|(u, s)| u / s).collect(),
            lower.iter().zip(&asymptote).map(|(l, s)| l / s).collect(),
        ),
    };

    let converging = match regime {
        Regime::High => {
            strictly_decreasing_tail(&upper_deviation, MONOTONE_TAIL)
                && strictly_decreasing_tail(&lower_deviation, MONOTONE_TAIL)
                && *upper_deviation.last().unwrap() < HIGH_SNR_TOLERANCE
                && *lower_deviation.last().unwrap() < HIGH_SNR_TOLERANCE
        }
        Regime::Low => {
            let u = *upper_deviation.last().unwrap();
            let l = *lower_deviation.last().unwrap();
            match law {
                LowSnrLaw::Quadratic { coefficient } => {
                    u <= coefficient && u >= coefficient * (1.0 - 1e-3) && l <= coefficient
                }
                LowSnrLaw::SqrtLog { lower: lo, upper: hi } => {
                    u <= 1.1 * hi && u >= 0.9 * lo && l >= 0.9 * lo && l <= u
                }
            }
        }
    };

    Ok(AsymptoteReport {
        regime,
        case,
        alpha,
        grid_db: grid_db.to_vec(),
        asymptote,
        upper,
        lower,
        upper_deviation,
        lower_deviation,
        converging,
    })
}
