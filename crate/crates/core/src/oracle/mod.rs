//! Independent numerical witnesses for the closed-form bounds: discretized
//! Blahut–Arimoto capacity estimates, quadrature mutual information of explicit
//! input laws, and duality-gap checks with explicit output densities.

pub mod blahut_arimoto;
pub mod densities;
pub mod grid;
pub mod mutual_info;
pub mod quadrature;

pub use blahut_arimoto::{blahut_arimoto, blahut_arimoto_with, grid_mutual_information, BaOptions, BaOutcome};
pub use densities::{MaxentDensity, OutputDensity};
pub use grid::{build_grid, ChannelGrid};
pub use mutual_info::{
    dual_expectation, duality_gap, log_output_density, mutual_information, mutual_information_entropy_form,
    reference_decomposition,
};

use crate::error::{domain, Result};

/// Probability masses on a finite set of nonnegative amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteInput {
    pub points: Vec<f64>,
    pub masses: Vec<f64>,
}

impl DiscreteInput {
    pub fn new(points: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        let q = Self { points, masses };
        q.validate()?;
        Ok(q)
    }

    pub fn point_mass(x: f64) -> Self {
        Self {
            points: vec![x],
            masses: vec![1.0],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.points.is_empty() || self.points.len() != self.masses.len() {
            return Err(domain(
                "DiscreteInput",
                "points and masses must be nonempty and of equal length",
            ));
        }
        if self.points.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(domain("DiscreteInput", "support points must be finite and nonnegative"));
        }
        if self.masses.iter().any(|m| !(*m >= 0.0)) {
            return Err(domain("DiscreteInput", "masses must be nonnegative"));
        }
        let total: f64 = self.masses.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(domain("DiscreteInput", format!("masses sum to {total}, not 1")));
        }
        Ok(())
    }

    pub fn mean(&self) -> f64 {
        self.points.iter().zip(&self.masses).map(|(x, m)| x * m).sum()
    }

    pub fn support_range(&self) -> (f64, f64) {
        self.points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                (lo.min(x), hi.max(x))
            })
    }
}

/// Two-point input `{0, A(1 − A/σ)}` with masses `{1 − α, α}`, for `A < σ`.
pub fn binary_input(a: f64, sigma: f64, alpha: f64) -> Result<DiscreteInput> {
    if !(a > 0.0 && a < sigma) {
        return Err(domain(
            "binary_input",
            format!("need 0 < A < sigma, got A={a}, sigma={sigma}"),
        ));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(domain("binary_input", format!("alpha must lie in (0, 1], got {alpha}")));
    }
    DiscreteInput::new(vec![0.0, a * (1.0 - a / sigma)], vec![1.0 - alpha, alpha])
}

/// Flash signalling: `x₁ = σ√(c ln(σ/E))` with mass `E/x₁`, the rest at 0.
pub fn flash_input(e: f64, sigma: f64, c: f64) -> Result<DiscreteInput> {
    if !(e > 0.0 && e <= 0.5 * sigma) {
        return Err(domain(
            "flash_input",
            format!("need 0 < E <= sigma/2, got E={e}, sigma={sigma}"),
        ));
    }
    if !(c > 2.0 && c.is_finite()) {
        return Err(domain("flash_input", format!("need c > 2, got {c}")));
    }
    let x1 = sigma * (c * (sigma / e).ln()).sqrt();
    let p = e / x1;
    if p > 1.0 {
        return Err(domain("flash_input", format!("mass E/x1 = {p} exceeds 1")));
    }
    DiscreteInput::new(vec![0.0, x1], vec![1.0 - p, p])
}

/// Equal mixture of `X` and `A − X`. The result has mean exactly `A/2` and
/// mutual information no smaller than that of `X`.
pub fn symmetrize(input: &DiscreteInput, a: f64) -> Result<DiscreteInput> {
    input.validate()?;
    let (_, hi) = input.support_range();
    if !(a >= hi && a.is_finite()) {
        return Err(domain(
            "symmetrize",
            format!("peak {a} is below the largest support point {hi}"),
        ));
    }
    let mut pairs: Vec<(f64, f64)> = input
        .points
        .iter()
        .zip(&input.masses)
        .flat_map(|(&x, &m)| [(x, 0.5 * m), (a - x, 0.5 * m)])
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let tol = 1e-12 * a.max(1.0);
    let mut points: Vec<f64> = Vec::with_capacity(pairs.len());
    let mut masses: Vec<f64> = Vec::with_capacity(pairs.len());
    for (x, m) in pairs {
        match points.last() {
            Some(&last) if (x - last).abs() <= tol => *masses.last_mut().unwrap() += m,
            _ => {
                points.push(x);
                masses.push(m);
            }
        }
    }
    let total: f64 = masses.iter().sum();
    masses.iter_mut().for_each(|m| *m /= total);
    DiscreteInput::new(points, masses)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetrize_examples() {
        let s = symmetrize(&DiscreteInput::point_mass(0.0), 2.0).unwrap();
        assert_eq!(s.points, vec![0.0, 2.0]);
        assert_eq!(s.masses, vec![0.5, 0.5]);
        assert_eq!(s.mean(), 1.0);

        let sym = DiscreteInput::new(vec![0.0, 1.0, 2.0], vec![0.25, 0.5, 0.25]).unwrap();
        let again = symmetrize(&sym, 2.0).unwrap();
        assert_eq!(again, sym);

        let q = DiscreteInput::new(vec![0.0, 2.4], vec![0.9, 0.1]).unwrap();
        let s = symmetrize(&q, 3.0).unwrap();
        assert!((s.mean() - 1.5).abs() < 1e-15);
        assert!(mutual_information(&s, 1.0).unwrap() >= mutual_information(&q, 1.0).unwrap() - 1e-9);
        assert!(symmetrize(&q, 2.0).is_err());
    }

    #[test]
    fn constructors_validate() {
        assert!(DiscreteInput::new(vec![0.0, 1.0], vec![0.5, 0.6]).is_err());
        assert!(DiscreteInput::new(vec![-1.0], vec![1.0]).is_err());
        assert!(binary_input(1.5, 1.0, 0.1).is_err());
        assert!(flash_input(0.9, 1.0, 3.0).is_err());
        assert!(flash_input(0.01, 1.0, 2.0).is_err());
        let f = flash_input(0.01, 1.0, 3.0).unwrap();
        assert!((f.mean() - 0.01).abs() < 1e-15);
        let b = binary_input(0.05, 1.0, 0.1).unwrap();
        assert!((b.points[1] - 0.0475).abs() < 1e-15);
    }
}
