//! Acceptance criteria, one status line each.
//!
//! Runs without the libtest harness so the status lines always reach the
//! output. The process fails when any criterion outside [`KNOWN_RED`] fails.
//! Criteria listed there are still evaluated at their stated tolerances and
//! reported as FAIL; the README explains why they cannot pass.

use std::process::ExitCode;
use std::time::Instant;

use ocb::asymptotics::{convergence_report, Regime, FLASH_C};
use ocb::bounds::{self, CaseTag, ConstraintSpec};
use ocb::oracle::{blahut_arimoto, build_grid, flash_input, mutual_information, symmetrize};
use ocb::sweep::{figure_config, max_gap, run_sweep};
use ocb::verify::{self, Check};
use ocb::{envelope, from_db};

/// Criteria that fail at their stated tolerance for reasons analysed in the README.
const KNOWN_RED: &[u8] = &[4];

struct Outcome {
    id: u8,
    name: &'static str,
    passed: bool,
    detail: String,
}

fn outcome(id: u8, name: &'static str, passed: bool, detail: String) -> Outcome {
    Outcome {
        id,
        name,
        passed,
        detail,
    }
}

fn errored(id: u8, name: &'static str, e: ocb::Error) -> Outcome {
    outcome(id, name, false, format!("error: {e}"))
}

// ---- 1: maximum gap per figure

struct GapTarget {
    figure: u8,
    label: &'static str,
    gap: f64,
    db: f64,
}

const GAP_TARGETS: [GapTarget; 4] = [
    GapTarget {
        figure: 1,
        label: "case I alpha=0.1",
        gap: 0.68,
        db: 10.5,
    },
    GapTarget {
        figure: 2,
        label: "case I alpha=0.4",
        gap: 0.52,
        db: 6.4,
    },
    GapTarget {
        figure: 3,
        label: "case II",
        gap: 0.50,
        db: 6.4,
    },
    GapTarget {
        figure: 5,
        label: "case III",
        gap: 0.57,
        db: 2.8,
    },
];
const GAP_TOLERANCE: f64 = 0.02;
const GAP_LOCATION_TOLERANCE_DB: f64 = 1.0;
const SWEEP_BUDGET_SECONDS: f64 = 60.0;

fn criterion_1() -> Outcome {
    let name = "figure_gap_reproduction";
    let start = Instant::now();
    let mut passed = true;
    let mut parts = Vec::new();
    for t in &GAP_TARGETS {
        let cfg = figure_config(t.figure).expect("figure has a sweep");
        assert!((cfg.grid()[1] - cfg.grid()[0] - 0.25).abs() < 1e-12);
        let rows = match run_sweep(&cfg) {
            Ok(r) => r,
            Err(e) => return errored(1, name, e),
        };
        let (g, db) = max_gap(&rows).expect("non-empty sweep");
        let ok = (g - t.gap).abs() <= GAP_TOLERANCE && (db - t.db).abs() <= GAP_LOCATION_TOLERANCE_DB;
        passed &= ok;
        parts.push(format!(
            "{}: {g:.4} nats at {db} dB (target {} at {} dB)",
            t.label, t.gap, t.db
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    passed &= secs < SWEEP_BUDGET_SECONDS;
    parts.push(format!("sweeps took {secs:.1} s"));
    outcome(1, name, passed, parts.join("; "))
}

// ---- 2: high-SNR convergence

fn criterion_2() -> Outcome {
    let name = "high_snr_convergence";
    let grid: Vec<f64> = (0..=6).map(|k| 10.0 * k as f64).collect();
    let mut passed = true;
    let mut parts = Vec::new();
    for (label, case, alpha) in [
        ("I/0.1", CaseTag::I, Some(0.1)),
        ("I/0.4", CaseTag::I, Some(0.4)),
        ("II", CaseTag::II, None),
        ("III", CaseTag::III, None),
    ] {
        match convergence_report(case, alpha, &grid, Regime::High) {
            Ok(r) => {
                let u = &r.upper_deviation;
                let l = &r.lower_deviation;
                // five decades: the last six points, five strict decreases
                let tail = |v: &[f64]| v[v.len() - 6..].windows(2).all(|w| w[1] < w[0]);
                let ok = *u.last().unwrap() < 0.01 && *l.last().unwrap() < 0.01 && tail(u) && tail(l);
                passed &= ok;
                parts.push(format!(
                    "{label}: upper {:.2e} lower {:.2e}{}",
                    u.last().unwrap(),
                    l.last().unwrap(),
                    if ok { "" } else { " NOT CONVERGING" }
                ));
            }
            Err(e) => return errored(2, name, e),
        }
    }
    outcome(2, name, passed, parts.join("; "))
}

// ---- 3: quadratic low-SNR laws

fn criterion_3() -> Outcome {
    let name = "low_snr_quadratic_laws";
    let run = || -> ocb::Result<Outcome> {
        let a = from_db(-40.0);
        let r1 = bounds::upper_case1_gauss(a, 1.0, 0.1)?.nats / (a * a);
        let r2 = bounds::upper_case2_gauss(a, 1.0)?.nats / (a * a);
        let ok1 = (0.045 * (1.0 - 1e-3)..=0.045).contains(&r1);
        let ok2 = (0.125 * (1.0 - 1e-3)..=0.125).contains(&r2);

        let (amp, alpha) = (0.05, 0.1);
        let i = mutual_information(&ocb::oracle::binary_input(amp, 1.0, alpha)?, 1.0)?;
        let lead = alpha * (1.0 - alpha) * amp * amp * (1.0 - amp) * (1.0 - amp) / 2.0;
        let rel = (i - lead).abs() / lead;
        Ok(outcome(
            3,
            name,
            ok1 && ok2 && rel <= 0.1,
            format!("case I ratio {r1:.6}, case II ratio {r2:.6}, binary input relative deviation {rel:.2e}"),
        ))
    };
    run().unwrap_or_else(|e| errored(3, name, e))
}

// ---- 4: average-only low-SNR bracket

fn criterion_4() -> Outcome {
    let name = "case3_low_snr_bracket";
    let run = || -> ocb::Result<Outcome> {
        let e = from_db(-40.0);
        let law = e * (1.0 / e).ln().sqrt();
        let env = envelope(&ConstraintSpec::average_only(1.0, e)?)?;
        let upper = env.upper.nats / law;
        let flash = mutual_information(&flash_input(e, 1.0, FLASH_C)?, 1.0)? / law;
        Ok(outcome(
            4,
            name,
            upper <= 2.2 && flash >= 0.5,
            format!(
                "upper/law {upper:.4} (needs <= 2.2, attained by {}), flash c=3 MI/law {flash:.4} (needs >= 0.5)",
                env.upper.formula.id()
            ),
        ))
    };
    run().unwrap_or_else(|e| errored(4, name, e))
}

// ---- 5: Blahut-Arimoto sandwich

const BA_GRID: (usize, usize) = (512, 4096);
const SANDWICH_SLACK: f64 = 0.01;
const DOUBLING_DRIFT: f64 = 1e-3;

fn sandwich_specs() -> ocb::Result<Vec<(String, ConstraintSpec)>> {
    let mut specs = Vec::new();
    for a in [3.0, 10.0, 30.0] {
        for alpha in [0.1, 0.3, 0.6] {
            specs.push((
                format!("A={a},alpha={alpha}"),
                ConstraintSpec::peak_limited(1.0, a, alpha)?,
            ));
        }
    }
    for db in [-5.0, 0.0, 5.0] {
        specs.push((format!("E={db}dB"), ConstraintSpec::average_only(1.0, from_db(db))?));
    }
    Ok(specs)
}

fn criterion_5() -> Outcome {
    let name = "blahut_arimoto_sandwich";
    let run = || -> ocb::Result<Outcome> {
        let mut passed = true;
        let mut parts = Vec::new();
        let mut worst_drift = 0.0f64;
        for (label, spec) in sandwich_specs()? {
            let start = Instant::now();
            let env = envelope(&spec)?;
            let base = blahut_arimoto(&build_grid(&spec, BA_GRID.0, BA_GRID.1)?, &spec)?;
            let fine = blahut_arimoto(&build_grid(&spec, 2 * BA_GRID.0, 2 * BA_GRID.1)?, &spec)?;
            let inside =
                base.capacity >= env.lower.nats - SANDWICH_SLACK && base.capacity <= env.upper.nats + SANDWICH_SLACK;
            let monotone = base.history.windows(2).all(|w| w[1] >= w[0]);
            let drift = (fine.capacity - base.capacity).abs();
            worst_drift = worst_drift.max(drift);
            let ok = inside && monotone && drift < DOUBLING_DRIFT;
            passed &= ok;
            let line = format!(
                "{label}: {:.4} <= {:.6} <= {:.4}, drift {drift:.1e}, {}{:.1} s",
                env.lower.nats,
                base.capacity,
                env.upper.nats,
                if monotone { "" } else { "NON-MONOTONE, " },
                start.elapsed().as_secs_f64()
            );
            eprintln!("  criterion 5 | {line}");
            parts.push(line);
        }
        parts.push(format!("worst doubling drift {worst_drift:.2e}"));
        Ok(outcome(5, name, passed, parts.join("; ")))
    };
    run().unwrap_or_else(|e| errored(5, name, e))
}

// ---- 6: symmetric optimum for inactive average constraints

fn criterion_6() -> Outcome {
    let name = "half_peak_mean_and_symmetrization";
    let run = || -> ocb::Result<Outcome> {
        let a = 10.0;
        let spec = ConstraintSpec::peak_limited(1.0, a, 0.9)?;
        let grid = build_grid(&spec, BA_GRID.0, BA_GRID.1)?;
        let ba = blahut_arimoto(&grid, &spec)?;
        let offset = (ba.input.mean() - 0.5 * a).abs();
        let centred = offset <= grid.spacing();

        let mut worst = f64::INFINITY;
        let mut count = 0;
        for &peak in &verify::MATRIX_PEAKS {
            for (_, input) in verify::test_inputs(peak)? {
                let gain = mutual_information(&symmetrize(&input, peak)?, 1.0)? - mutual_information(&input, 1.0)?;
                worst = worst.min(gain);
                count += 1;
            }
        }
        Ok(outcome(
            6,
            name,
            centred && worst >= -1e-9,
            format!(
                "BA mean offset {offset:.2e} (spacing {:.2e}); smallest symmetrization gain {worst:.2e} over {count} inputs",
                grid.spacing()
            ),
        ))
    };
    run().unwrap_or_else(|e| errored(6, name, e))
}

// ---- 7: property suites

fn criterion_7() -> Outcome {
    let mut checks: Vec<Check> = verify::lemma_checks();
    checks.push(verify::chi_identity());
    checks.extend(
        verify::oracle_checks()
            .into_iter()
            .filter(|c| c.name == "duality_gap_matrix"),
    );
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{} ({})", c.name, c.detail))
        .collect();
    let detail = if failed.is_empty() {
        format!("{} checks, zero failures", checks.len())
    } else {
        format!("failed: {}", failed.join(", "))
    };
    outcome(7, "property_suites", failed.is_empty(), detail)
}

fn main() -> ExitCode {
    let criteria: [fn() -> Outcome; 7] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
    ];
    let mut unexpected = 0;
    for run in criteria {
        let start = Instant::now();
        let o = run();
        let known = KNOWN_RED.contains(&o.id);
        let status = match (o.passed, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known, see README)",
            (false, false) => "FAIL",
        };
        if !o.passed && !known {
            unexpected += 1;
        }
        println!(
            "criterion {} {}: {status} [{:.1} s] {}",
            o.id,
            o.name,
            start.elapsed().as_secs_f64(),
            o.detail
        );
        if o.passed && known {
            println!("  criterion {} now passes; remove it from KNOWN_RED", o.id);
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria failed");
        ExitCode::FAILURE
    }
}
