use crate::bounds::{CaseTag, ConstraintSpec};
use crate::error::{domain, Result};
use crate::qfunc::LN_SQRT_2PI;

use super::quadrature::{breakpoints, composite, PANEL_ORDER};

/// Output nodes farther than this many σ from an input point are dropped from
/// that input's kernel row (the Gaussian weight there is below 1e-17).
pub const BAND_SIGMAS: f64 = 9.0;
/// Output range margin beyond the input support, in σ.
pub const OUTPUT_MARGIN_SIGMAS: f64 = 8.0;

/// Input truncation point for the average-only channel.
pub fn average_only_support(e: f64, sigma: f64) -> f64 {
    (40.0 * e).max(e + 10.0 * sigma)
}

/// Discretized channel: uniform input grid, Gauss–Legendre output nodes and
/// the banded Gaussian transition kernel.
#[derive(Debug, Clone)]
pub struct ChannelGrid {
    pub sigma: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub wy: Vec<f64>,
    /// Per input row, the half-open range of output nodes inside the band.
    pub band: Vec<(usize, usize)>,
    /// Row-major banded `log W(y_j | x_i)`, rows of varying length given by `band`.
    pub log_kernel: Vec<Vec<f64>>,
    /// Banded `wy_j · W(y_j | x_i)`.
    pub weighted_kernel: Vec<Vec<f64>>,
}

impl ChannelGrid {
    pub fn n_in(&self) -> usize {
        self.x.len()
    }

    pub fn n_out(&self) -> usize {
        self.y.len()
    }

    pub fn x_max(&self) -> f64 {
        *self.x.last().expect("grid has inputs")
    }

    pub fn spacing(&self) -> f64 {
        self.x[1] - self.x[0]
    }

    /// `Σ_j wy_j W(y_j | x_i)` for every row.
    pub fn row_sums(&self) -> Vec<f64> {
        self.weighted_kernel.iter().map(|r| r.iter().sum()).collect()
    }
}

/// Right end of the input grid: the peak, or the average-only truncation point.
pub fn support_end(spec: &ConstraintSpec) -> f64 {
    match spec.case() {
        CaseTag::III => average_only_support(spec.average, spec.sigma),
        _ => spec.peak.unwrap_or(0.0),
    }
}

pub fn build_grid(spec: &ConstraintSpec, n_in: usize, n_out: usize) -> Result<ChannelGrid> {
    if n_in < 2 {
        return Err(domain("build_grid", format!("n_in must be >= 2, got {n_in}")));
    }
    if n_out < 16 {
        return Err(domain("build_grid", format!("n_out must be >= 16, got {n_out}")));
    }
    let sigma = spec.sigma;
    let x_max = support_end(spec);
    if !(x_max > 0.0 && x_max.is_finite()) {
        return Err(domain("build_grid", "the input support is empty"));
    }
    let x: Vec<f64> = (0..n_in).map(|i| x_max * i as f64 / (n_in - 1) as f64).collect();

    let lo = -OUTPUT_MARGIN_SIGMAS * sigma;
    let hi = x_max + OUTPUT_MARGIN_SIGMAS * sigma;
    let panels = n_out.div_ceil(PANEL_ORDER).max(((hi - lo) / sigma).ceil() as usize);
    let (y, wy) = composite(
        &breakpoints(lo, hi, &[]),
        (hi - lo) / panels as f64 * (1.0 + 1e-12),
        PANEL_ORDER,
    );

    let log_norm = LN_SQRT_2PI + sigma.ln();
    let mut band = Vec::with_capacity(n_in);
    let mut log_kernel = Vec::with_capacity(n_in);
    let mut weighted_kernel = Vec::with_capacity(n_in);
    for &xi in &x {
        let j0 = y.partition_point(|&v| v < xi - BAND_SIGMAS * sigma);
        let j1 = y.partition_point(|&v| v <= xi + BAND_SIGMAS * sigma);
        let lk: Vec<f64> = y[j0..j1]
            .iter()
            .map(|&v| {
                let z = (v - xi) / sigma;
                -0.5 * z * z - log_norm
            })
            .collect();
        let wk: Vec<f64> = lk.iter().zip(&wy[j0..j1]).map(|(l, w)| w * l.exp()).collect();
        band.push((j0, j1));
        log_kernel.push(lk);
        weighted_kernel.push(wk);
    }
    Ok(ChannelGrid {
        sigma,
        x,
        y,
        wy,
        band,
        log_kernel,
        weighted_kernel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_normalize() {
        let spec = ConstraintSpec::peak_limited(1.0, 10.0, 0.3).unwrap();
        let g = build_grid(&spec, 64, 512).unwrap();
        assert_eq!(g.x_max(), 10.0);
        assert!(g.n_out() >= 512);
        for s in g.row_sums() {
            assert!((s - 1.0).abs() < 1e-6, "{s}");
        }
    }

    #[test]
    fn average_only_truncation() {
        let spec = ConstraintSpec::average_only(1.0, 1.0).unwrap();
        let g = build_grid(&spec, 32, 64).unwrap();
        assert_eq!(g.x_max(), 40.0);
        let spec = ConstraintSpec::average_only(1.0, 0.1).unwrap();
        assert!((support_end(&spec) - 10.1).abs() < 1e-12);
    }

    #[test]
    fn rejects_tiny_grids() {
        let spec = ConstraintSpec::peak_limited(1.0, 10.0, 0.3).unwrap();
        assert!(build_grid(&spec, 1, 512).is_err());
        assert!(build_grid(&spec, 8, 8).is_err());
        let spec = ConstraintSpec::peak_limited(1.0, 0.0, 0.3).unwrap();
        assert!(build_grid(&spec, 8, 64).is_err());
    }
}
