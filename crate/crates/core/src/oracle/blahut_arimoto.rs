//! Blahut–Arimoto on a [`ChannelGrid`] with an average-amplitude constraint.
//!
//! Each step maximizes the usual alternating functional over the constraint
//! set directly: the new law is `p_i ∝ p_i e^{D_i − s x_i}` with the multiplier
//! `s ≥ 0` solved so that the mean meets the budget exactly whenever the
//! unconstrained step would overshoot it. That plain step is an exact
//! maximization of the alternating functional over a convex feasible set, so it
//! never lowers the mutual information. To speed up the slow tail, the exponent
//! is stretched (`e^{λ D_i}`, `λ ≥ 1`) while this keeps paying off; a stretched
//! step that would lower the mutual information is discarded and replaced by a
//! plain one, so the accepted iterates are monotone.

use crate::bounds::ConstraintSpec;
use crate::error::{Error, Result};

use super::grid::ChannelGrid;
use super::DiscreteInput;

pub const BA_TOLERANCE: f64 = 1e-9;
pub const BA_MAX_ITERATIONS: usize = 100_000;
/// Step stretching: after each accepted step the exponent on `e^{D_i}` grows by
/// this factor up to the cap, and falls back to 1 whenever a stretched step
/// would lower the mutual information.
const RELAX_GROWTH: f64 = 1.25;
const RELAX_MAX: f64 = 8.0;
/// Input masses below this are left out of the output-law sum.
const NEGLIGIBLE_MASS: f64 = 1e-200;

#[derive(Debug, Clone, PartialEq)]
pub struct BaOutcome {
    /// Mutual information of the final iterate, in nats.
    pub capacity: f64,
    pub input: DiscreteInput,
    pub iterations: usize,
    /// Mutual information of every accepted iterate, starting with the initial law.
    pub history: Vec<f64>,
    /// Multiplier of the average constraint at the last accepted step.
    pub multiplier: f64,
    /// `max_i D_i − s(x_i − E)`: an upper bound on the discretized capacity.
    pub upper_estimate: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct BaOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for BaOptions {
    fn default() -> Self {
        Self {
            tolerance: BA_TOLERANCE,
            max_iterations: BA_MAX_ITERATIONS,
        }
    }
}

/// Finds `s ≥ 0` such that the law `∝ exp(log_r_i − s x_i)` has mean `target`,
/// or `0` when the untilted law already satisfies `mean ≤ target`.
/// Returns `(s, normalized probabilities)`.
fn tilt(log_r: &[f64], x: &[f64], target: f64) -> (f64, Vec<f64>) {
    let law = |s: f64| -> (Vec<f64>, f64, f64) {
        let m = log_r
            .iter()
            .zip(x)
            .map(|(l, xi)| l - s * xi)
            .fold(f64::NEG_INFINITY, f64::max);
        let mut p: Vec<f64> = log_r.iter().zip(x).map(|(l, xi)| (l - s * xi - m).exp()).collect();
        let z: f64 = p.iter().sum();
        p.iter_mut().for_each(|v| *v /= z);
        let mean: f64 = p.iter().zip(x).map(|(p, x)| p * x).sum();
        let var: f64 = p.iter().zip(x).map(|(p, x)| p * (x - mean) * (x - mean)).sum();
        (p, mean, var)
    };
    let (p0, mean0, _) = law(0.0);
    if mean0 <= target {
        return (0.0, p0);
    }
    let scale = x.iter().fold(0.0f64, |a, &b| a.max(b.abs())).max(f64::MIN_POSITIVE);
    let tol = 1e-14 * scale;
    let mut lo = 0.0;
    let mut hi = 1.0 / scale;
    loop {
        let (_, m, _) = law(hi);
        if m <= target || hi > 1e300 {
            break;
        }
        lo = hi;
        hi *= 4.0;
    }
    let mut s = 0.5 * (lo + hi);
    let mut best = law(s);
    for _ in 0..200 {
        let (_, m, v) = &best;
        let err = m - target;
        if err.abs() <= tol {
            break;
        }
        if err > 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        let newton = if *v > 0.0 { s + err / v } else { f64::NAN };
        s = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        best = law(s);
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    (s, best.0)
}

struct Workspace {
    f: Vec<f64>,
    log_f: Vec<f64>,
    d: Vec<f64>,
    self_info: Vec<f64>,
}

/// Dot product with independent partial sums so the loop vectorizes.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; 8];
    let ca = a.chunks_exact(8);
    let cb = b.chunks_exact(8);
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    for (x, y) in ca.zip(cb) {
        for k in 0..8 {
            acc[k] += x[k] * y[k];
        }
    }
    acc.iter().sum::<f64>() + tail
}

impl Workspace {
    fn new(grid: &ChannelGrid) -> Self {
        let self_info = grid
            .weighted_kernel
            .iter()
            .zip(&grid.log_kernel)
            .map(|(k, l)| dot(k, l))
            .collect();
        Self {
            f: vec![0.0; grid.n_out()],
            log_f: vec![0.0; grid.n_out()],
            d: vec![0.0; grid.n_in()],
            self_info,
        }
    }

    /// Fills `d` with `D(W(·|x_i) ‖ f)` for the output law `f` induced by `p`
    /// and returns the mutual information `Σ p_i D_i`.
    fn divergences(&mut self, grid: &ChannelGrid, p: &[f64]) -> f64 {
        self.f.iter_mut().for_each(|v| *v = 0.0);
        for (i, &pi) in p.iter().enumerate() {
            // such masses change f by far less than one ulp, and their
            // products would be subnormal, which is very slow
            if pi < NEGLIGIBLE_MASS {
                continue;
            }
            let (j0, _) = grid.band[i];
            for (fj, k) in self.f[j0..].iter_mut().zip(&grid.weighted_kernel[i]) {
                *fj += pi * k;
            }
        }
        for ((lf, f), w) in self.log_f.iter_mut().zip(&self.f).zip(&grid.wy) {
            *lf = (f / w).max(f64::MIN_POSITIVE).ln();
        }
        let mut info = 0.0;
        for (i, di) in self.d.iter_mut().enumerate() {
            let (j0, j1) = grid.band[i];
            *di = self.self_info[i] - dot(&grid.weighted_kernel[i], &self.log_f[j0..j1]);
            info += p[i] * *di;
        }
        info
    }
}

/// Mutual information of a law on the grid's input points.
pub fn grid_mutual_information(grid: &ChannelGrid, p: &[f64]) -> f64 {
    Workspace::new(grid).divergences(grid, p)
}

pub fn blahut_arimoto(grid: &ChannelGrid, spec: &ConstraintSpec) -> Result<BaOutcome> {
    blahut_arimoto_with(grid, spec, BaOptions::default())
}

pub fn blahut_arimoto_with(grid: &ChannelGrid, spec: &ConstraintSpec, opts: BaOptions) -> Result<BaOutcome> {
    let budget = spec.average;
    let x = &grid.x;
    let n = x.len();
    let (_, mut p) = tilt(&vec![0.0; n], x, budget);
    let mut ws = Workspace::new(grid);
    let mut info = ws.divergences(grid, &p);
    let mut history = vec![info];
    let mut multiplier = 0.0;
    let mut log_r = vec![0.0; n];
    let mut saved_d = vec![0.0; n];

    let mut iterations = 0;
    let mut last_increment = f64::INFINITY;
    let mut relax = 1.0;
    while iterations < opts.max_iterations {
        for i in 0..n {
            log_r[i] = if p[i] > 0.0 {
                p[i].ln() + relax * ws.d[i]
            } else {
                f64::NEG_INFINITY
            };
        }
        let (s, candidate) = tilt(&log_r, x, budget);
        saved_d.copy_from_slice(&ws.d);
        let candidate_info = ws.divergences(grid, &candidate);
        iterations += 1;
        if candidate_info < info && relax > 1.0 {
            // the stretched step overshot; redo it as a plain step
            ws.d.copy_from_slice(&saved_d);
            relax = 1.0;
            continue;
        }
        multiplier = s / relax;
        p = candidate;
        last_increment = candidate_info - info;
        info = candidate_info;
        history.push(info);
        if last_increment.abs() < opts.tolerance {
            // only a plain step's increment is a valid stopping signal
            if relax == 1.0 {
                break;
            }
            relax = 1.0;
        } else {
            relax = (relax * RELAX_GROWTH).min(RELAX_MAX);
        }
    }

    let upper_estimate =
        ws.d.iter()
            .zip(x)
            .map(|(d, xi)| d - multiplier * (xi - budget))
            .fold(f64::NEG_INFINITY, f64::max);
    let outcome = BaOutcome {
        capacity: info,
        input: DiscreteInput {
            points: x.clone(),
            masses: p,
        },
        iterations,
        history,
        multiplier,
        upper_estimate,
    };
    if last_increment.abs() >= opts.tolerance {
        return Err(Error::NonConvergence {
            iterations,
            last_increment,
            last: Box::new(outcome),
        });
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::grid::build_grid;

    #[test]
    fn tilt_hits_the_target_mean() {
        let x: Vec<f64> = (0..50).map(|i| i as f64 * 0.2).collect();
        let (s, p) = tilt(&vec![0.0; 50], &x, 2.0);
        assert!(s > 0.0);
        let mean: f64 = p.iter().zip(&x).map(|(p, x)| p * x).sum();
        assert!((mean - 2.0).abs() < 1e-12);
        let (s, _) = tilt(&vec![0.0; 50], &x, 9.0);
        assert_eq!(s, 0.0);
    }

    #[test]
    fn small_instance_is_monotone_and_feasible() {
        let spec = ConstraintSpec::peak_limited(1.0, 3.0, 0.2).unwrap();
        let g = build_grid(&spec, 48, 256).unwrap();
        let out = blahut_arimoto(&g, &spec).unwrap();
        assert!(out.history.windows(2).all(|w| w[1] >= w[0] - 1e-13));
        assert!(out.input.mean() <= 0.6 + 1e-9);
        assert!(out.capacity <= out.upper_estimate + 1e-9);
        let s: f64 = out.input.masses.iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reports_non_convergence_with_last_iterate() {
        let spec = ConstraintSpec::peak_limited(1.0, 3.0, 0.2).unwrap();
        let g = build_grid(&spec, 48, 256).unwrap();
        let opts = BaOptions {
            tolerance: 1e-9,
            max_iterations: 3,
        };
        match blahut_arimoto_with(&g, &spec, opts) {
            Err(Error::NonConvergence { iterations, last, .. }) => {
                assert_eq!(iterations, 3);
                assert_eq!(last.history.len(), 4);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
