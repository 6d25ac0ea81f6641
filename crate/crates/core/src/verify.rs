//! Invariant check suites run by `ocb verify` and by the test targets.

use std::fmt;

use crate::asymptotics::{chi, chi_alternate, convergence_report, Regime};
use crate::bounds::{self, CaseTag, ConstraintSpec};
use crate::error::Result;
use crate::optimize::{envelope, minimize_upper_case1, minimize_upper_case2, minimize_upper_case3};
use crate::oracle::{
    binary_input, blahut_arimoto, build_grid, duality_gap, flash_input, mutual_information, reference_decomposition,
    symmetrize, DiscreteInput, MaxentDensity, OutputDensity,
};
use crate::params::{default_delta_case2, default_params_case1, default_params_case3_high, phi, solve_mu_star};
use crate::qfunc::{log_q, q, tail_pair_complement, LN_SQRT_2PI};

/// Points per interval in the deterministic property grids.
pub const GRID_POINTS: usize = 2001;
/// Relative margin for strict inequalities.
pub const STRICT_MARGIN: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Lemmas,
    Sandwich,
    Asymptotics,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Lemmas, Suite::Sandwich, Suite::Asymptotics, Suite::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemmas => "lemmas",
            Suite::Sandwich => "sandwich",
            Suite::Asymptotics => "asymptotics",
            Suite::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "check suite={} name={} status={} detail=\"{}\"",
            self.suite,
            self.name,
            if self.passed { "pass" } else { "fail" },
            self.detail
        )
    }
}

fn check(suite: &'static str, name: &'static str, failures: usize, total: usize, extra: String) -> Check {
    let detail = if extra.is_empty() {
        format!("{failures} failures out of {total}")
    } else {
        format!("{failures} failures out of {total}; {extra}")
    };
    Check {
        suite,
        name,
        passed: failures == 0 && total > 0,
        detail,
    }
}

fn from_result(suite: &'static str, name: &'static str, r: Result<Check>) -> Check {
    r.unwrap_or_else(|e| Check {
        suite,
        name,
        passed: false,
        detail: format!("error: {e}"),
    })
}

/// `n` evenly spaced points on `[a, b]`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

/// `n` log-spaced points on `[a, b]`, `a, b > 0`.
pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    linspace(a.ln(), b.ln(), n).into_iter().map(f64::exp).collect()
}

fn margin(v: f64) -> f64 {
    STRICT_MARGIN * v.abs().max(1.0)
}

pub fn run_suite(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Lemmas => lemma_checks(),
        Suite::Sandwich => sandwich_checks(),
        Suite::Asymptotics => asymptotic_checks(),
        Suite::Oracle => oracle_checks(),
    }
}

// ---------------------------------------------------------------- lemmas

pub fn lemma_checks() -> Vec<Check> {
    vec![
        q_symmetry(),
        q_bracket(),
        q_half_gaussian(),
        q_monotone(),
        q_curvature_split(),
        tail_pair_concavity(),
        tail_pair_symmetry_and_peak(),
        shifted_tail_product(),
        shifted_tail_chord(),
        phi_monotone(),
        mu_star_round_trip(),
        dual_log_factor_positive(),
        flat_log_factor_positive(),
    ]
}

pub fn q_symmetry() -> Check {
    let xs = linspace(-38.0, 38.0, GRID_POINTS);
    let bad = xs
        .iter()
        .filter(|&&x| (q(x) + q(-x) - 1.0).abs() > 2.0 * f64::EPSILON)
        .count();
    check("lemmas", "q_symmetry", bad, xs.len(), String::new())
}

/// `φ(ξ)/ξ·(1 − 1/ξ²) < Q(ξ) < φ(ξ)/ξ`, compared in logs; the lower side is
/// vacuous for `ξ ≤ 1`.
pub fn q_bracket() -> Check {
    let xs = logspace(1e-3, 40.0, GRID_POINTS);
    let mut bad = 0;
    for &x in &xs {
        let lq = log_q(x);
        let log_upper = -0.5 * x * x - LN_SQRT_2PI - x.ln();
        if !(lq < log_upper - margin(lq)) {
            bad += 1;
        }
        if x > 1.0 {
            let log_lower = log_upper + (-1.0 / (x * x)).ln_1p();
            if !(log_lower < lq - margin(lq)) {
                bad += 1;
            }
        }
    }
    check("lemmas", "q_bracket", bad, xs.len(), String::new())
}

pub fn q_half_gaussian() -> Check {
    let xs = linspace(0.0, 40.0, GRID_POINTS);
    let bad = xs
        .iter()
        .filter(|&&x| log_q(x) > (0.5f64).ln() - 0.5 * x * x + margin(x * x))
        .count();
    check("lemmas", "q_half_gaussian", bad, xs.len(), String::new())
}

pub fn q_monotone() -> Check {
    let xs = linspace(-6.0, 30.0, GRID_POINTS);
    let bad = xs.windows(2).filter(|w| !(q(w[1]) < q(w[0]))).count();
    check("lemmas", "q_monotone", bad, xs.len() - 1, String::new())
}

/// Second differences of `Q` are positive for `ξ > 0` and negative for `ξ < 0`.
pub fn q_curvature_split() -> Check {
    let xs = linspace(-6.0, 6.0, GRID_POINTS);
    let mut bad = 0;
    let mut total = 0;
    for w in xs.windows(3) {
        let mid = w[1];
        if mid == 0.0 {
            continue;
        }
        total += 1;
        let d2 = q(w[0]) - 2.0 * q(w[1]) + q(w[2]);
        let ok = if mid > 0.0 { d2 > 0.0 } else { d2 < 0.0 };
        if !ok {
            bad += 1;
        }
    }
    check("lemmas", "q_curvature_split", bad, total, String::new())
}

/// Strict concavity of `ξ ↦ 1 − Q(ξ0 + ξ) − Q(ξ0 + γ − ξ)` on `[0, γ]`. The second
/// difference is formed from the two `Q` terms separately, since `f` itself sits
/// near 1 and would lose every digit of the curvature.
pub fn tail_pair_concavity() -> Check {
    let mut bad = 0;
    let mut total = 0;
    for &xi0 in &[0.0, 0.5, 3.0] {
        for &gamma in &[0.1, 1.0, 10.0] {
            let xs = linspace(0.0, gamma, GRID_POINTS);
            let h = xs[1] - xs[0];
            for &x in &xs[1..xs.len() - 1] {
                total += 1;
                let d2q = |c: f64| q(c - h) - 2.0 * q(c) + q(c + h);
                let scale = |c: f64| q(c - h) + 2.0 * q(c) + q(c + h);
                let d2f = -d2q(xi0 + x) - d2q(xi0 + gamma - x);
                let tol = STRICT_MARGIN * (scale(xi0 + x) + scale(xi0 + gamma - x));
                if !(d2f < -tol) {
                    bad += 1;
                }
            }
        }
    }
    check("lemmas", "tail_pair_concavity", bad, total, String::new())
}

pub fn tail_pair_symmetry_and_peak() -> Check {
    // compared through `Q(ξ0 + ξ) + Q(ξ0 + γ − ξ)`, i.e. 1 − f, which keeps its digits
    let tails = |x: f64, xi0: f64, gamma: f64| q(xi0 + x) + q(xi0 + gamma - x);
    let mut bad = 0;
    let mut total = 0;
    for &xi0 in &[0.0, 0.5, 3.0] {
        for &gamma in &[0.1, 1.0, 10.0] {
            let xs = linspace(0.0, gamma, GRID_POINTS);
            let mid = tails(0.5 * gamma, xi0, gamma);
            for &x in &xs {
                total += 1;
                let t = tails(x, xi0, gamma);
                let mirror = tails(gamma - x, xi0, gamma);
                if (t - mirror).abs() > 1e-12 * t || t < mid * (1.0 - 1e-12) {
                    bad += 1;
                }
            }
        }
    }
    let zero = tail_pair_complement(0.0, 0.0, 0.0).map(|v| v == 0.0).unwrap_or(false);
    check(
        "lemmas",
        "tail_pair_symmetry_and_peak",
        bad + usize::from(!zero),
        total + 1,
        String::new(),
    )
}

pub fn shifted_tail_product() -> Check {
    let xs = linspace(0.0, 50.0, GRID_POINTS);
    let mut bad = 0;
    let mut total = 0;
    for &mu in &[(-0.5f64).exp(), 1.0, 5.0] {
        for &x in &xs {
            total += 1;
            if x * q(x - mu) > mu + margin(mu) {
                bad += 1;
            }
        }
    }
    check("lemmas", "shifted_tail_product", bad, total, String::new())
}

pub fn shifted_tail_chord() -> Check {
    let xs = linspace(0.0, 50.0, GRID_POINTS);
    let mut bad = 0;
    let mut total = 0;
    for &mu in &[0.1, 0.5, 1.0, 2.0, 5.0] {
        for &x in &xs {
            total += 1;
            let lhs = 1.0 - q(x - mu);
            let rhs = 1.0 - q(-mu) + x / mu * q(-mu);
            if lhs > rhs + margin(rhs) {
                bad += 1;
            }
        }
    }
    check("lemmas", "shifted_tail_chord", bad, total, String::new())
}

pub fn phi_monotone() -> Check {
    let xs = linspace(0.05, 100.0, GRID_POINTS);
    let v: Vec<f64> = xs.iter().map(|&m| phi(m).unwrap_or(f64::NAN)).collect();
    let bad = v.windows(2).filter(|w| !(w[1] < w[0])).count();
    let limits_ok = phi(1e-8).map(|v| v > 0.5 - 1e-8 && v < 0.5).unwrap_or(false)
        && phi(1e6).map(|v| v < 1.1e-6).unwrap_or(false)
        && phi(1e3).map(|v| (1e3 * v - 1.0).abs() < 1e-6).unwrap_or(false);
    check(
        "lemmas",
        "phi_monotone_and_limits",
        bad + usize::from(!limits_ok),
        v.len(),
        String::new(),
    )
}

pub fn mu_star_round_trip() -> Check {
    let alphas = logspace(1e-6, 0.4999, 50);
    let mut worst = 0.0f64;
    let bad = alphas
        .iter()
        .filter(|&&a| match solve_mu_star(a).and_then(|m| phi(m.mu)) {
            Ok(v) => {
                worst = worst.max((v - a).abs());
                (v - a).abs() > 1e-12
            }
            Err(_) => true,
        })
        .count();
    check(
        "lemmas",
        "mu_star_round_trip",
        bad,
        alphas.len(),
        format!("worst residual {worst:.3e}"),
    )
}

/// The duality log factor of the peak/average bound is nonnegative on a
/// 10⁴-point grid of `(A, σ, δ, μ)`.
pub fn dual_log_factor_positive() -> Check {
    let axis = logspace(1e-3, 1e3, 10);
    let sig = logspace(0.1, 10.0, 10);
    let mut bad = 0;
    let mut total = 0;
    let mut worst = f64::INFINITY;
    for &a in &axis {
        for &s in &sig {
            for &d in &axis {
                for &m in &axis {
                    total += 1;
                    let v = bounds::dual_log_factor_case1(a, s, d, m);
                    worst = worst.min(v);
                    if !(v >= 0.0) {
                        bad += 1;
                    }
                }
            }
        }
    }
    check(
        "lemmas",
        "dual_log_factor_nonnegative",
        bad,
        total,
        format!("minimum {worst:.3e}"),
    )
}

/// `(A + 2δ)/(√(2π)σ(1 − 2Q(δ/σ))) ≥ 1`.
pub fn flat_log_factor_positive() -> Check {
    let axis = logspace(1e-3, 1e3, 25);
    let sig = logspace(0.1, 10.0, 16);
    let mut bad = 0;
    let mut total = 0;
    for &a in &axis {
        for &s in &sig {
            for &d in &axis {
                total += 1;
                if !(bounds::dual_log_factor_case2(a, s, d) >= 0.0) {
                    bad += 1;
                }
            }
        }
    }
    check("lemmas", "flat_log_factor_nonnegative", bad, total, String::new())
}

/// The two closed forms of `χ` agree where the first is evaluated directly
/// (`αμ* ≤ 0.999`, i.e. `α ≳ 0.11`); below that `χ` must stay finite and increasing.
pub fn chi_identity() -> Check {
    let alphas = linspace(0.12, 0.499, 200);
    let mut worst = 0.0f64;
    let mut bad = alphas
        .iter()
        .filter(|&&a| match (chi(a), chi_alternate(a)) {
            (Ok(x), Ok(y)) => {
                worst = worst.max((x - y).abs());
                (x - y).abs() > 1e-10
            }
            _ => true,
        })
        .count();
    let small: Vec<f64> = logspace(1e-8, 0.12, 200)
        .iter()
        .map(|&a| chi(a).unwrap_or(f64::NAN))
        .collect();
    bad += small.windows(2).filter(|w| !(w[1] > w[0] && w[0].is_finite())).count();
    let cont = match (chi(0.5 - 1e-7), chi(0.5)) {
        (Ok(x), Ok(y)) => (x - y).abs() < 1e-6,
        _ => false,
    };
    check(
        "asymptotics",
        "chi_identity_and_continuity",
        bad + usize::from(!cont),
        alphas.len() + small.len(),
        format!("worst difference {worst:.3e}"),
    )
}

// ---------------------------------------------------------------- sandwich

const SANDWICH_DB: [f64; 8] = [-10.0, -5.0, 0.0, 3.0, 6.5, 10.0, 20.0, 30.0];

pub fn sandwich_checks() -> Vec<Check> {
    vec![
        from_result("sandwich", "seeded_uppers_dominate_lowers", seeded_sandwich()),
        from_result("sandwich", "optimized_uppers_dominate_lowers", optimized_sandwich()),
        from_result("sandwich", "lower_bounds_monotone", lower_monotone()),
        from_result("sandwich", "case_boundary_continuity", boundary_continuity()),
        from_result("sandwich", "peak_only_alpha_independent", alpha_independence()),
        from_result("sandwich", "blahut_arimoto_in_envelope", small_ba_sandwich()),
    ]
}

fn seeded_sandwich() -> Result<Check> {
    let mut bad = 0;
    let mut total = 0;
    for &db in &SANDWICH_DB {
        let r = crate::from_db(db);
        for &alpha in &[0.1, 0.25, 0.4] {
            let lo = bounds::lower_case1(r, 1.0, alpha)?.nats;
            let (d, m) = default_params_case1(r, 1.0, alpha)?;
            let ups = [
                bounds::upper_case1_gauss(r, 1.0, alpha)?.nats,
                bounds::upper_case1_dual(r, 1.0, alpha, d, m)?.nats,
            ];
            total += ups.len();
            bad += ups.iter().filter(|&&u| !(u >= lo)).count();
        }
        let lo = bounds::lower_case2(r, 1.0)?.nats;
        let ups = [
            bounds::upper_case2_gauss(r, 1.0)?.nats,
            bounds::upper_case2_dual(r, 1.0, default_delta_case2(r, 1.0)?)?.nats,
        ];
        total += ups.len();
        bad += ups.iter().filter(|&&u| !(u >= lo)).count();

        let lo = bounds::lower_case3(r, 1.0)?.nats;
        let (d, b) = default_params_case3_high(r, 1.0)?;
        let mut ups = vec![bounds::upper_case3_high(r, 1.0, d, b)?.nats];
        if r <= crate::params::case3_low_threshold() {
            let (d, b) = crate::params::default_params_case3_low(r, 1.0)?;
            ups.push(bounds::upper_case3_low(r, 1.0, d, b)?.nats);
        }
        total += ups.len();
        bad += ups.iter().filter(|&&u| !(u >= lo)).count();
    }
    Ok(check(
        "sandwich",
        "seeded_uppers_dominate_lowers",
        bad,
        total,
        String::new(),
    ))
}

fn optimized_sandwich() -> Result<Check> {
    let mut bad = 0;
    let mut total = 0;
    let mut worst = f64::INFINITY;
    for &db in &SANDWICH_DB {
        let r = crate::from_db(db);
        let mut pairs = Vec::new();
        for &alpha in &[0.1, 0.25, 0.4] {
            pairs.push((
                minimize_upper_case1(r, 1.0, alpha)?,
                bounds::lower_case1(r, 1.0, alpha)?.nats,
            ));
        }
        pairs.push((minimize_upper_case2(r, 1.0)?, bounds::lower_case2(r, 1.0)?.nats));
        pairs.push((minimize_upper_case3(r, 1.0)?, bounds::lower_case3(r, 1.0)?.nats));
        for (opt, lo) in pairs {
            total += 1;
            worst = worst.min(opt.value - lo);
            if !(opt.value >= lo - 1e-6 && opt.value <= opt.seed_value) {
                bad += 1;
            }
        }
    }
    Ok(check(
        "sandwich",
        "optimized_uppers_dominate_lowers",
        bad,
        total,
        format!("smallest upper-lower margin {worst:.4}"),
    ))
}

fn lower_monotone() -> Result<Check> {
    let grid = logspace(1e-3, 1e4, 400);
    let mut bad = 0;
    for w in grid.windows(2) {
        let pairs = [
            (
                bounds::lower_case1(w[0], 1.0, 0.2)?.nats,
                bounds::lower_case1(w[1], 1.0, 0.2)?.nats,
            ),
            (
                bounds::lower_case2(w[0], 1.0)?.nats,
                bounds::lower_case2(w[1], 1.0)?.nats,
            ),
            (
                bounds::lower_case3(w[0], 1.0)?.nats,
                bounds::lower_case3(w[1], 1.0)?.nats,
            ),
        ];
        bad += pairs.iter().filter(|(a, b)| b < a).count();
    }
    Ok(check(
        "sandwich",
        "lower_bounds_monotone",
        bad,
        3 * (grid.len() - 1),
        String::new(),
    ))
}

fn boundary_continuity() -> Result<Check> {
    let mut bad = 0;
    let grid = [0.1, 1.0, 4.0, 30.0, 1000.0];
    for &a in &grid {
        let l1 = bounds::lower_case1(a, 1.0, 0.5 - 1e-7)?.nats;
        let l2 = bounds::lower_case2(a, 1.0)?.nats;
        if (l1 - l2).abs() >= 1e-6 {
            bad += 1;
        }
    }
    Ok(check(
        "sandwich",
        "case_boundary_continuity",
        bad,
        grid.len(),
        String::new(),
    ))
}

fn alpha_independence() -> Result<Check> {
    let mut bad = 0;
    let mut total = 0;
    for &a in &[0.5, 4.0, 40.0] {
        let reference = envelope(&ConstraintSpec::peak_limited(1.0, a, 0.5)?)?;
        for &alpha in &[0.6, 0.75, 1.0] {
            total += 1;
            let env = envelope(&ConstraintSpec::peak_limited(1.0, a, alpha)?)?;
            if env.case != CaseTag::II || env.lower != reference.lower || env.upper != reference.upper {
                bad += 1;
            }
        }
    }
    Ok(check(
        "sandwich",
        "peak_only_alpha_independent",
        bad,
        total,
        String::new(),
    ))
}

/// Coarse-grid Blahut–Arimoto inside the envelope (the full-size run lives in
/// the acceptance tests).
fn small_ba_sandwich() -> Result<Check> {
    let specs = [
        ConstraintSpec::peak_limited(1.0, 3.0, 0.3)?,
        ConstraintSpec::peak_limited(1.0, 3.0, 0.6)?,
        ConstraintSpec::average_only(1.0, 1.0)?,
    ];
    let mut bad = 0;
    let mut detail = Vec::new();
    for spec in &specs {
        let env = envelope(spec)?;
        let grid = build_grid(spec, 128, 1024)?;
        let ba = blahut_arimoto(&grid, spec)?;
        detail.push(format!(
            "{:.4}<={:.4}<={:.4}",
            env.lower.nats, ba.capacity, env.upper.nats
        ));
        if !(ba.capacity >= env.lower.nats - 0.01 && ba.capacity <= env.upper.nats + 0.01) {
            bad += 1;
        }
    }
    Ok(check(
        "sandwich",
        "blahut_arimoto_in_envelope",
        bad,
        specs.len(),
        detail.join(" "),
    ))
}

// ---------------------------------------------------------------- asymptotics

pub fn asymptotic_checks() -> Vec<Check> {
    let high_grid: Vec<f64> = (1..=6).map(|k| 10.0 * k as f64).collect();
    let mut out = Vec::new();
    let configs: [(&'static str, CaseTag, Option<f64>); 4] = [
        ("high_snr_case1_alpha0.1", CaseTag::I, Some(0.1)),
        ("high_snr_case1_alpha0.4", CaseTag::I, Some(0.4)),
        ("high_snr_case2", CaseTag::II, None),
        ("high_snr_case3", CaseTag::III, None),
    ];
    for (name, case, alpha) in configs {
        out.push(from_result(
            "asymptotics",
            name,
            convergence_report(case, alpha, &high_grid, Regime::High).map(|r| Check {
                suite: "asymptotics",
                name,
                passed: r.converging,
                detail: format!(
                    "deviation at {} dB: upper {:.3e}, lower {:.3e}",
                    r.grid_db.last().unwrap(),
                    r.upper_deviation.last().unwrap(),
                    r.lower_deviation.last().unwrap()
                ),
            }),
        ));
    }
    out.push(from_result(
        "asymptotics",
        "low_snr_quadratic_laws",
        low_snr_quadratic(),
    ));
    out.push(from_result("asymptotics", "low_snr_binary_input", low_snr_binary()));
    for (name, db) in [
        ("low_snr_case3_bracket_40db", -40.0),
        ("low_snr_case3_bracket_60db", -60.0),
    ] {
        out.push(from_result(
            "asymptotics",
            name,
            convergence_report(CaseTag::III, None, &[db + 10.0, db], Regime::Low).map(|r| Check {
                suite: "asymptotics",
                name,
                passed: r.converging,
                detail: format!(
                    "upper/law {:.4}, flash/law {:.4}, bracket [{:.4}, {:.4}]",
                    r.upper_deviation.last().unwrap(),
                    r.lower_deviation.last().unwrap(),
                    0.9 * std::f64::consts::FRAC_1_SQRT_2,
                    2.2
                ),
            }),
        ));
    }
    out.push(chi_identity());
    out
}

fn low_snr_quadratic() -> Result<Check> {
    let r = crate::from_db(-40.0);
    let g1 = bounds::upper_case1_gauss(r, 1.0, 0.1)?.nats / (r * r);
    let g2 = bounds::upper_case2_gauss(r, 1.0)?.nats / (r * r);
    let ok1 = (0.045 * (1.0 - 1e-3)..=0.045).contains(&g1);
    let ok2 = (0.125 * (1.0 - 1e-3)..=0.125).contains(&g2);
    Ok(check(
        "asymptotics",
        "low_snr_quadratic_laws",
        usize::from(!ok1) + usize::from(!ok2),
        2,
        format!("case1 {g1:.6}, case2 {g2:.6}"),
    ))
}

fn low_snr_binary() -> Result<Check> {
    let (a, alpha) = (0.05, 0.1);
    let i = mutual_information(&binary_input(a, 1.0, alpha)?, 1.0)?;
    let lead = alpha * (1.0 - alpha) * a * a * (1.0 - a) * (1.0 - a) / 2.0;
    let rel = (i - lead).abs() / lead;
    Ok(check(
        "asymptotics",
        "low_snr_binary_input",
        usize::from(rel > 0.1),
        1,
        format!("relative deviation {rel:.4}"),
    ))
}

// ---------------------------------------------------------------- oracle

pub fn oracle_checks() -> Vec<Check> {
    vec![
        from_result("oracle", "duality_gap_matrix", duality_matrix()),
        from_result("oracle", "epi_witness", epi_witness()),
        from_result("oracle", "symmetrize_never_hurts", symmetrize_matrix()),
        from_result("oracle", "flash_first_term", flash_first_term()),
        from_result(
            "oracle",
            "dual_expectation_below_closed_form",
            dual_expectation_vs_closed_form(),
        ),
        from_result("oracle", "blahut_arimoto_monotone_and_symmetric", ba_small_properties()),
    ]
}

/// The four test inputs on `[0, A]` used in the duality matrix.
pub fn test_inputs(a: f64) -> Result<Vec<(&'static str, DiscreteInput)>> {
    Ok(vec![
        ("uniform", MaxentDensity::uniform(a)?.discretize(1.0)),
        (
            "truncated_exponential",
            MaxentDensity::truncated_exponential(a, 0.3)?.discretize(1.0),
        ),
        ("two_point", DiscreteInput::new(vec![0.0, a], vec![0.5, 0.5])?),
        ("skewed_pair", DiscreteInput::new(vec![0.0, 0.8 * a], vec![0.9, 0.1])?),
    ])
}

/// The five output densities with the seeded parameters at peak `A`, `α = 0.3`.
pub fn test_densities(a: f64) -> Result<Vec<OutputDensity>> {
    let alpha = 0.3;
    let e = alpha * a;
    let (d1, m1) = default_params_case1(a, 1.0, alpha)?;
    let d2 = default_delta_case2(a, 1.0)?;
    let (d3, b3) = default_params_case3_high(e, 1.0)?;
    Ok(vec![
        OutputDensity::R1 { a, e },
        OutputDensity::R2 { a, delta: d1, mu: m1 },
        OutputDensity::R3 { a },
        OutputDensity::R4 { a, delta: d2 },
        OutputDensity::R5 { delta: d3, beta: b3 },
    ])
}

pub const MATRIX_PEAKS: [f64; 3] = [1.0, 5.0, 20.0];

fn duality_matrix() -> Result<Check> {
    let mut bad = 0;
    let mut total = 0;
    let mut worst = f64::INFINITY;
    for &a in &MATRIX_PEAKS {
        for (_, input) in test_inputs(a)? {
            for r in test_densities(a)? {
                total += 1;
                let g = duality_gap(&input, &r, 1.0)?;
                worst = worst.min(g);
                if !(g >= -1e-6) {
                    bad += 1;
                }
            }
        }
    }
    Ok(check(
        "oracle",
        "duality_gap_matrix",
        bad,
        total,
        format!("smallest gap {worst:.3e}"),
    ))
}

fn epi_witness() -> Result<Check> {
    let mut bad = 0;
    let mut total = 0;
    for &a in &MATRIX_PEAKS {
        let laws = [
            MaxentDensity::truncated_exponential(a, 0.2)?,
            MaxentDensity::uniform(a)?,
            MaxentDensity::exponential(0.3 * a)?,
        ];
        for law in laws {
            total += 1;
            let i = mutual_information(&law.discretize(1.0), 1.0)?;
            let epi = 0.5 * (2.0 * law.entropy() - crate::qfunc::ln_2pi_e()).exp().ln_1p();
            if !(i >= epi - 1e-4) {
                bad += 1;
            }
        }
    }
    Ok(check("oracle", "epi_witness", bad, total, String::new()))
}

fn symmetrize_matrix() -> Result<Check> {
    let mut bad = 0;
    let mut total = 0;
    for &a in &[3.0, 5.0, 10.0] {
        for (_, input) in test_inputs(a)? {
            total += 1;
            let s = symmetrize(&input, a)?;
            let before = mutual_information(&input, 1.0)?;
            let after = mutual_information(&s, 1.0)?;
            if !(after >= before - 1e-9 && (s.mean() - 0.5 * a).abs() <= 1e-12 * a) {
                bad += 1;
            }
        }
    }
    Ok(check("oracle", "symmetrize_never_hurts", bad, total, String::new()))
}

fn flash_first_term() -> Result<Check> {
    let (e, c) = (0.01, 3.0);
    let input = flash_input(e, 1.0, c)?;
    let (first, _) = reference_decomposition(&input, 1.0)?;
    let x1 = input.points[1];
    let want = e * x1 / 2.0;
    let law = (c.sqrt() / 2.0) * e * (1.0 / e).ln().sqrt();
    let rel = (first - want).abs() / want;
    let ok = rel < 1e-10 && (want - law).abs() < 1e-14;
    Ok(check(
        "oracle",
        "flash_first_term",
        usize::from(!ok),
        1,
        format!("relative error {rel:.2e}"),
    ))
}

/// For the maxent input and the matching glued output density, the
/// quadrature duality expectation stays below the closed-form bound.
fn dual_expectation_vs_closed_form() -> Result<Check> {
    let mut bad = 0;
    let mut total = 0;
    let mut detail = Vec::new();
    for &a in &MATRIX_PEAKS {
        let alpha = 0.2;
        let q1 = MaxentDensity::truncated_exponential(a, alpha)?.discretize(1.0);
        let (d, m) = default_params_case1(a, 1.0, alpha)?;
        let r = OutputDensity::R2 { a, delta: d, mu: m };
        let dual = crate::oracle::dual_expectation(&q1, 1.0, |y| r.log_pdf(y, 1.0), &r.breakpoints())?;
        let closed = bounds::upper_case1_dual(a, 1.0, alpha, d, m)?.nats;
        total += 1;
        if !(dual <= closed + 1e-9 && duality_gap(&q1, &r, 1.0)? >= -1e-6) {
            bad += 1;
        }

        let u = MaxentDensity::uniform(a)?.discretize(1.0);
        let d = default_delta_case2(a, 1.0)?;
        let r = OutputDensity::R4 { a, delta: d };
        let dual = crate::oracle::dual_expectation(&u, 1.0, |y| r.log_pdf(y, 1.0), &r.breakpoints())?;
        let closed = bounds::upper_case2_dual(a, 1.0, d)?.nats;
        total += 1;
        if !(dual <= closed + 1e-9 && duality_gap(&u, &r, 1.0)? >= 0.0) {
            bad += 1;
        }
        detail.push(format!("A={a}: {dual:.4}<={closed:.4}"));
    }
    Ok(check(
        "oracle",
        "dual_expectation_below_closed_form",
        bad,
        total,
        detail.join(" "),
    ))
}

fn ba_small_properties() -> Result<Check> {
    let spec = ConstraintSpec::peak_limited(1.0, 4.0, 0.9)?;
    let grid = build_grid(&spec, 129, 1024)?;
    let ba = blahut_arimoto(&grid, &spec)?;
    let monotone = ba.history.windows(2).all(|w| w[1] >= w[0] - 1e-12);
    let centred = (ba.input.mean() - 2.0).abs() <= grid.spacing();
    let ok = monotone && centred && ba.capacity <= ba.upper_estimate + 1e-9;
    Ok(check(
        "oracle",
        "blahut_arimoto_monotone_and_symmetric",
        usize::from(!ok),
        1,
        format!("mean {:.6}, iterations {}", ba.input.mean(), ba.iterations),
    ))
}
