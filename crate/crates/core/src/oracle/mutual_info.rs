//! Quadrature mutual information and duality expectations for discrete inputs.

use crate::error::Result;
use crate::qfunc::{ln_2pi_e, LN_SQRT_2PI};

use super::densities::OutputDensity;
use super::quadrature::{breakpoints, composite, PANEL_ORDER};
use super::DiscreteInput;

/// Output integration range margin around the input support, in σ.
pub const MI_MARGIN_SIGMAS: f64 = 10.0;
/// Kernel entries farther than this (in σ) from their input are treated as zero.
const MI_BAND_SIGMAS: f64 = 10.0;

/// Output nodes, weights and per-node `ln f_Y` for an input law.
struct OutputTable {
    y: Vec<f64>,
    w: Vec<f64>,
    log_f: Vec<f64>,
}

fn log_gauss(z: f64, sigma: f64) -> f64 {
    -0.5 * z * z / (sigma * sigma) - LN_SQRT_2PI - sigma.ln()
}

fn output_table(input: &DiscreteInput, sigma: f64, extra: &[f64]) -> OutputTable {
    let (lo, hi) = input.support_range();
    let lo = lo - MI_MARGIN_SIGMAS * sigma;
    let hi = hi + MI_MARGIN_SIGMAS * sigma;
    let (y, w) = composite(&breakpoints(lo, hi, extra), sigma, PANEL_ORDER);
    let support: Vec<(f64, f64)> = input
        .points
        .iter()
        .zip(&input.masses)
        .filter(|(_, &m)| m > 0.0)
        .map(|(&x, &m)| (x, m.ln()))
        .collect();
    let log_f = y
        .iter()
        .map(|&yj| {
            let terms = support
                .iter()
                .filter(|(x, _)| (yj - x).abs() <= MI_BAND_SIGMAS * sigma)
                .map(|(x, lm)| lm + log_gauss(yj - x, sigma));
            log_sum_exp(terms)
        })
        .collect();
    OutputTable { y, w, log_f }
}

fn log_sum_exp(terms: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = terms.clone().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + terms.map(|t| (t - m).exp()).sum::<f64>().ln()
}

/// `Σ_k p_k ∫ W(y|x_k) (ln W(y|x_k) − g(y)) dy` over the table's nodes.
fn expected_divergence(input: &DiscreteInput, sigma: f64, table: &OutputTable, g: impl Fn(usize) -> f64) -> f64 {
    let mut total = 0.0;
    for (&x, &p) in input.points.iter().zip(&input.masses) {
        if p == 0.0 {
            continue;
        }
        let j0 = table.y.partition_point(|&v| v < x - MI_BAND_SIGMAS * sigma);
        let j1 = table.y.partition_point(|&v| v <= x + MI_BAND_SIGMAS * sigma);
        let mut d = 0.0;
        for j in j0..j1 {
            let lw = log_gauss(table.y[j] - x, sigma);
            d += table.w[j] * lw.exp() * (lw - g(j));
        }
        total += p * d;
    }
    total
}

/// `I(X; X + Z)` for `Z ~ N(0, σ²)`, computed as `Σ_k p_k D(W(·|x_k) ‖ f_Y)`.
pub fn mutual_information(input: &DiscreteInput, sigma: f64) -> Result<f64> {
    input.validate()?;
    let table = output_table(input, sigma, &[]);
    let i = expected_divergence(input, sigma, &table, |j| table.log_f[j]);
    Ok(i.max(0.0))
}

/// The same quantity as `h(Y) − ½ ln(2πeσ²)` with `h(Y)` by quadrature.
pub fn mutual_information_entropy_form(input: &DiscreteInput, sigma: f64) -> Result<f64> {
    input.validate()?;
    let table = output_table(input, sigma, &[]);
    let h: f64 = table
        .w
        .iter()
        .zip(&table.log_f)
        .filter(|(_, l)| l.is_finite())
        .map(|(w, l)| -w * l.exp() * l)
        .sum();
    Ok(h - 0.5 * (ln_2pi_e() + 2.0 * sigma.ln()))
}

/// The two terms of `I = E_Q[D(W(·|X) ‖ W(·|0))] − D(f_Y ‖ W(·|0))`, by quadrature.
pub fn reference_decomposition(input: &DiscreteInput, sigma: f64) -> Result<(f64, f64)> {
    input.validate()?;
    let table = output_table(input, sigma, &[]);
    let first = expected_divergence(input, sigma, &table, |j| log_gauss(table.y[j], sigma));
    let second: f64 = table
        .y
        .iter()
        .zip(&table.w)
        .zip(&table.log_f)
        .filter(|(_, l)| l.is_finite())
        .map(|((y, w), l)| w * l.exp() * (l - log_gauss(*y, sigma)))
        .sum();
    Ok((first, second))
}

/// `E_Q[D(W(·|X) ‖ R)]` for an output density given by its log, with the
/// quadrature split at `breaks`.
pub fn dual_expectation(input: &DiscreteInput, sigma: f64, log_r: impl Fn(f64) -> f64, breaks: &[f64]) -> Result<f64> {
    input.validate()?;
    let table = output_table(input, sigma, breaks);
    Ok(expected_divergence(input, sigma, &table, |j| log_r(table.y[j])))
}

/// `E_Q[D(W(·|X) ‖ R)] − I(Q, W)`, which equals `D(f_Y ‖ R) ≥ 0`.
pub fn duality_gap(input: &DiscreteInput, density: &OutputDensity, sigma: f64) -> Result<f64> {
    density.validate(sigma)?;
    input.validate()?;
    let table = output_table(input, sigma, &density.breakpoints());
    let dual = expected_divergence(input, sigma, &table, |j| density.log_pdf(table.y[j], sigma));
    let info = expected_divergence(input, sigma, &table, |j| table.log_f[j]);
    Ok(dual - info)
}

/// `ln f_Y(y)` of the output law induced by `input`.
pub fn log_output_density(input: &DiscreteInput, sigma: f64, y: f64) -> f64 {
    let terms = input
        .points
        .iter()
        .zip(&input.masses)
        .filter(|(_, &m)| m > 0.0)
        .map(|(&x, &m)| m.ln() + log_gauss(y - x, sigma));
    log_sum_exp(terms)
}
