//! Numerical minimization of the duality bounds over their free parameters,
//! and the best-bound envelope built from them.

pub mod nelder_mead;

use crate::bounds::{
    self, case_of, neg_shift_limit, BoundEstimate, BoundParams, CaseTag, ConstraintSpec, Formula, Side,
};
use crate::error::Result;
use crate::params::{
    case3_low_threshold, default_delta_case2, default_params_case1, default_params_case3_high,
    default_params_case3_low, optimal_beta,
};
use crate::qfunc::SQRT_2PI;

pub use nelder_mead::{nelder_mead, NelderMeadOptions, NelderMeadResult};

/// Evaluation budget per start.
pub const MAX_EVALS_PER_START: usize = 400;
pub const REL_TOL: f64 = 1e-9;
/// Half-width, in decades, of the multi-start grid around the seed.
pub const START_SPAN_DECADES: f64 = 2.0;
/// Points per axis of the multi-start grid.
pub const STARTS_PER_AXIS: usize = 5;
/// Search box in natural-log coordinates (parameters scaled by σ where dimensional).
pub const LOG_BOX: f64 = 50.0;
/// Smallest shift beyond `−σ/√e` used when seeding the negative-shift bound.
const MIN_SHIFT_SEED: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    pub formula: Formula,
    /// `(δ, μ)`, `(δ)` or `(δ, β)` in natural units.
    pub argmin: Vec<f64>,
    pub value: f64,
    pub seed_value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl OptResult {
    pub fn estimate(&self) -> BoundEstimate {
        let params = match self.formula {
            Formula::PeakAvgDual => BoundParams {
                delta: self.argmin.first().copied(),
                mu: self.argmin.get(1).copied(),
                beta: None,
            },
            Formula::AvgDualNegShift | Formula::AvgDualPosShift => BoundParams {
                delta: self.argmin.first().copied(),
                mu: None,
                beta: self.argmin.get(1).copied(),
            },
            _ => BoundParams {
                delta: self.argmin.first().copied(),
                ..Default::default()
            },
        };
        BoundEstimate {
            nats: self.value,
            side: Side::Upper,
            formula: self.formula,
            params,
        }
    }
}

/// Multi-start Nelder–Mead in log coordinates. `objective` receives the log
/// coordinates and returns nats (non-finite means infeasible). The first start
/// is the seed itself, so the result never exceeds the seed value.
fn multistart(seed_log: &[f64], objective: impl Fn(&[f64]) -> f64) -> (Vec<f64>, f64, f64, usize, bool) {
    let n = seed_log.len();
    let opts = NelderMeadOptions {
        max_evals: MAX_EVALS_PER_START,
        rel_tol: REL_TOL,
        initial_step: 0.25,
        lower: vec![-LOG_BOX; n],
        upper: vec![LOG_BOX; n],
    };
    let seed: Vec<f64> = seed_log
        .iter()
        .map(|&v| nelder_mead::reflect_into(v, -LOG_BOX, LOG_BOX))
        .collect();
    let seed_value = {
        let v = objective(&seed);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };

    let offsets: Vec<f64> = (0..STARTS_PER_AXIS)
        .map(|k| {
            let t = k as f64 / (STARTS_PER_AXIS - 1) as f64;
            (-START_SPAN_DECADES + 2.0 * START_SPAN_DECADES * t) * std::f64::consts::LN_10
        })
        .collect();
    let mut starts: Vec<Vec<f64>> = vec![seed.clone()];
    let total = STARTS_PER_AXIS.pow(n as u32);
    for idx in 0..total {
        let mut rem = idx;
        let mut p = seed.clone();
        let mut is_center = true;
        for v in p.iter_mut() {
            let o = offsets[rem % STARTS_PER_AXIS];
            rem /= STARTS_PER_AXIS;
            if o != 0.0 {
                is_center = false;
            }
            *v += o;
        }
        if !is_center {
            starts.push(p);
        }
    }

    let mut best_x = seed.clone();
    let mut best_f = seed_value;
    let mut best_converged = false;
    let mut evals = 1;
    for s in &starts {
        let r = nelder_mead(&objective, s, &opts);
        evals += r.evals;
        if r.f < best_f {
            best_f = r.f;
            best_x = r.x;
            best_converged = r.converged;
        }
    }
    (best_x, best_f, seed_value, evals, best_converged)
}

fn finite_or_inf(r: Result<BoundEstimate>) -> f64 {
    match r {
        Ok(b) if b.nats.is_finite() => b.nats,
        _ => f64::INFINITY,
    }
}

/// Minimizes the peak/average duality bound over `δ, μ > 0`.
pub fn minimize_upper_case1(a: f64, sigma: f64, alpha: f64) -> Result<OptResult> {
    if a == 0.0 {
        let b = bounds::upper_case1_dual(a, sigma, alpha, sigma, 1.0)?;
        return Ok(trivial(Formula::PeakAvgDual, vec![sigma, 1.0], b.nats));
    }
    let (d0, m0) = default_params_case1(a, sigma, alpha)?;
    // validates the spec before optimizing
    bounds::upper_case1_dual(a, sigma, alpha, d0, m0)?;
    let obj = |x: &[f64]| {
        finite_or_inf(bounds::upper_case1_dual(
            a,
            sigma,
            alpha,
            sigma * x[0].exp(),
            x[1].exp(),
        ))
    };
    let (x, f, seed_value, evals, converged) = multistart(&[(d0 / sigma).ln(), m0.ln()], obj);
    Ok(OptResult {
        formula: Formula::PeakAvgDual,
        argmin: vec![sigma * x[0].exp(), x[1].exp()],
        value: f,
        seed_value,
        evaluations: evals,
        converged,
    })
}

/// Minimizes the peak-only duality bound over `δ > 0`.
pub fn minimize_upper_case2(a: f64, sigma: f64) -> Result<OptResult> {
    if a == 0.0 {
        let b = bounds::upper_case2_dual(a, sigma, sigma)?;
        return Ok(trivial(Formula::PeakDual, vec![sigma], b.nats));
    }
    let d0 = default_delta_case2(a, sigma)?;
    bounds::upper_case2_dual(a, sigma, d0)?;
    let obj = |x: &[f64]| finite_or_inf(bounds::upper_case2_dual(a, sigma, sigma * x[0].exp()));
    let (x, f, seed_value, evals, converged) = multistart(&[(d0 / sigma).ln()], obj);
    Ok(OptResult {
        formula: Formula::PeakDual,
        argmin: vec![sigma * x[0].exp()],
        value: f,
        seed_value,
        evaluations: evals,
        converged,
    })
}

/// Minimizes the negative-shift average-only bound over `δ ≤ −σ/√e`, `β > 0`,
/// writing `δ = −σ/√e − t` with `t > 0`.
pub fn minimize_upper_case3_neg(e: f64, sigma: f64) -> Result<OptResult> {
    let edge = neg_shift_limit(sigma);
    if e == 0.0 {
        let b = bounds::upper_case3_low(e, sigma, -edge - sigma, sigma)?;
        return Ok(trivial(Formula::AvgDualNegShift, vec![-edge - sigma, sigma], b.nats));
    }
    let (t0, b0) = if e / sigma <= case3_low_threshold() {
        let (d, b) = default_params_case3_low(e, sigma)?;
        ((-d - edge).max(MIN_SHIFT_SEED * sigma), b)
    } else {
        let t = sigma;
        (t, optimal_beta(e + sigma / SQRT_2PI, -edge - t, sigma))
    };
    bounds::upper_case3_low(e, sigma, -edge - t0, b0)?;
    let obj = |x: &[f64]| {
        finite_or_inf(bounds::upper_case3_low(
            e,
            sigma,
            -edge - sigma * x[0].exp(),
            sigma * x[1].exp(),
        ))
    };
    let (x, f, seed_value, evals, converged) = multistart(&[(t0 / sigma).ln(), (b0 / sigma).ln()], obj);
    Ok(OptResult {
        formula: Formula::AvgDualNegShift,
        argmin: vec![-edge - sigma * x[0].exp(), sigma * x[1].exp()],
        value: f,
        seed_value,
        evaluations: evals,
        converged,
    })
}

/// Minimizes the nonnegative-shift average-only bound over `δ > 0`, `β > 0`.
pub fn minimize_upper_case3_pos(e: f64, sigma: f64) -> Result<OptResult> {
    if e == 0.0 {
        let b = bounds::upper_case3_high(e, sigma, sigma, sigma)?;
        return Ok(trivial(Formula::AvgDualPosShift, vec![sigma, sigma], b.nats));
    }
    let (d0, b0) = default_params_case3_high(e, sigma)?;
    bounds::upper_case3_high(e, sigma, d0, b0)?;
    let obj = |x: &[f64]| {
        finite_or_inf(bounds::upper_case3_high(
            e,
            sigma,
            sigma * x[0].exp(),
            sigma * x[1].exp(),
        ))
    };
    let (x, f, seed_value, evals, converged) = multistart(&[(d0 / sigma).ln(), (b0 / sigma).ln()], obj);
    Ok(OptResult {
        formula: Formula::AvgDualPosShift,
        argmin: vec![sigma * x[0].exp(), sigma * x[1].exp()],
        value: f,
        seed_value,
        evaluations: evals,
        converged,
    })
}

/// Best of the two average-only duality bounds. `seed_value` is the smaller
/// of the two seeded values.
pub fn minimize_upper_case3(e: f64, sigma: f64) -> Result<OptResult> {
    let neg = minimize_upper_case3_neg(e, sigma)?;
    let pos = minimize_upper_case3_pos(e, sigma)?;
    let seed_value = neg.seed_value.min(pos.seed_value);
    let evaluations = neg.evaluations + pos.evaluations;
    let mut best = if pos.value < neg.value { pos } else { neg };
    best.seed_value = seed_value;
    best.evaluations = evaluations;
    Ok(best)
}

fn trivial(formula: Formula, argmin: Vec<f64>, value: f64) -> OptResult {
    OptResult {
        formula,
        argmin,
        value,
        seed_value: value,
        evaluations: 1,
        converged: true,
    }
}

/// Tightest available bounds at one constraint point.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub case: CaseTag,
    pub lower: BoundEstimate,
    pub upper: BoundEstimate,
    pub gap: f64,
    /// Every bound that entered the max/min, lower bounds first.
    pub contributors: Vec<BoundEstimate>,
}

impl Envelope {
    pub fn get(&self, formula: Formula) -> Option<&BoundEstimate> {
        self.contributors.iter().find(|b| b.formula == formula)
    }
}

pub fn envelope(spec: &ConstraintSpec) -> Result<Envelope> {
    let sigma = spec.sigma;
    let case = case_of(spec);
    let contributors = match case {
        CaseTag::I => {
            let a = spec.peak.unwrap_or(0.0);
            let alpha = spec.alpha.unwrap_or(0.0);
            vec![
                bounds::lower_case1(a, sigma, alpha)?,
                bounds::upper_case1_gauss(a, sigma, alpha)?,
                minimize_upper_case1(a, sigma, alpha)?.estimate(),
            ]
        }
        CaseTag::II => {
            let a = spec.peak.unwrap_or(0.0);
            vec![
                bounds::lower_case2(a, sigma)?,
                bounds::upper_case2_gauss(a, sigma)?,
                minimize_upper_case2(a, sigma)?.estimate(),
            ]
        }
        CaseTag::III => {
            let e = spec.average;
            vec![
                bounds::lower_case3(e, sigma)?,
                minimize_upper_case3_neg(e, sigma)?.estimate(),
                minimize_upper_case3_pos(e, sigma)?.estimate(),
            ]
        }
    };
    let lower = *contributors
        .iter()
        .filter(|b| b.side == Side::Lower)
        .max_by(|x, y| x.nats.total_cmp(&y.nats))
        .expect("every case has a lower bound");
    let upper = *contributors
        .iter()
        .filter(|b| b.side == Side::Upper)
        .min_by(|x, y| x.nats.total_cmp(&y.nats))
        .expect("every case has an upper bound");
    Ok(Envelope {
        case,
        lower,
        upper,
        gap: upper.nats - lower.nats,
        contributors,
    })
}
