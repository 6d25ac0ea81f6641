//! SNR sweeps over the envelope and their CSV serialization.

use std::io::Write;

use rayon::prelude::*;

use crate::asymptotics::{chi, high_snr_asymptote};
use crate::bounds::{CaseTag, ConstraintSpec, Formula, Side};
use crate::error::{Error, Result};
use crate::optimize::envelope;

pub const CSV_SCHEMA: u32 = 1;
pub const SIGNIFICANT_DIGITS: usize = 12;

/// How a ratio maps to decibels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DbConvention {
    /// `10·log10`, the convention the figures use.
    #[default]
    Power,
    /// `20·log10`.
    Amplitude,
}

impl DbConvention {
    pub fn factor(self) -> f64 {
        match self {
            DbConvention::Power => 10.0,
            DbConvention::Amplitude => 20.0,
        }
    }

    pub fn to_db(self, ratio: f64) -> f64 {
        self.factor() * ratio.log10()
    }

    pub fn from_db(self, db: f64) -> f64 {
        10f64.powf(db / self.factor())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub case: CaseTag,
    pub alpha: Option<f64>,
    pub db_min: f64,
    pub db_max: f64,
    pub steps: usize,
    pub sigma: f64,
    pub db_convention: DbConvention,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let usage = |m: String| Err(Error::Usage(m));
        if !(self.db_min.is_finite() && self.db_max.is_finite() && self.db_min < self.db_max) {
            return usage(format!("need db_min < db_max, got {} and {}", self.db_min, self.db_max));
        }
        if self.steps < 2 {
            return usage(format!("need steps >= 2, got {}", self.steps));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return usage(format!("sigma must be positive, got {}", self.sigma));
        }
        if self.case == CaseTag::I {
            match self.alpha {
                Some(a) if a > 0.0 && a < 0.5 => {}
                Some(a) => return usage(format!("case I needs 0 < alpha < 1/2, got {a}")),
                None => return usage("case I needs --alpha".into()),
            }
        }
        Ok(())
    }

    /// Evenly spaced dB values, both ends included.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|k| self.db_min + (self.db_max - self.db_min) * k as f64 / (n - 1) as f64)
            .collect()
    }
}

/// Formulas reported as CSV columns for a case, lower bounds first.
pub fn formulas_for(case: CaseTag) -> Vec<Formula> {
    Formula::ALL.iter().copied().filter(|f| f.case() == case).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// `A/σ` (cases I/II) or `E/σ` (case III).
    pub ratio: f64,
    pub ratio_db: f64,
    /// Values in the order of [`formulas_for`]; duality bounds are optimized.
    pub values: Vec<(Formula, f64)>,
    pub lower: f64,
    pub upper: f64,
    pub gap: f64,
    pub asymptote: f64,
}

pub fn sweep_row(cfg: &SweepConfig, db: f64) -> Result<SweepRow> {
    let ratio = cfg.db_convention.from_db(db);
    let alpha = match cfg.case {
        CaseTag::I => cfg.alpha,
        _ => None,
    };
    let spec = ConstraintSpec::from_ratio(cfg.case, ratio, cfg.sigma, alpha)?;
    let env = envelope(&spec)?;
    let values = formulas_for(cfg.case)
        .into_iter()
        .map(|f| (f, env.get(f).map_or(f64::NAN, |b| b.nats)))
        .collect();
    Ok(SweepRow {
        ratio,
        ratio_db: db,
        values,
        lower: env.lower.nats,
        upper: env.upper.nats,
        gap: env.gap,
        asymptote: high_snr_asymptote(cfg.case, ratio, alpha)?,
    })
}

/// Computes every row concurrently; rows come back in grid order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    cfg.grid().par_iter().map(|&db| sweep_row(cfg, db)).collect()
}

/// Largest gap and the dB value where it occurs (first one on ties).
pub fn max_gap(rows: &[SweepRow]) -> Option<(f64, f64)> {
    rows.iter().fold(None, |best, r| match best {
        Some((g, _)) if g >= r.gap => best,
        _ => Some((r.gap, r.ratio_db)),
    })
}

/// `%.12g`-style formatting: locale independent, trailing zeros trimmed.
pub fn format_number(v: f64) -> String {
    format_significant(v, SIGNIFICANT_DIGITS)
}

pub fn format_significant(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if exp < -5 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, v)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn csv_header(case: CaseTag) -> String {
    let mut cols = vec!["ratio".to_string(), "ratio_db".to_string()];
    for f in formulas_for(case) {
        let side = match f.side() {
            Side::Lower => "lower",
            Side::Upper => "upper",
        };
        cols.push(format!("{side}_{}", f.id()));
    }
    cols.extend(["envelope_lower", "envelope_upper", "gap", "asymptote"].map(String::from));
    cols.join(",")
}

pub fn write_csv<W: Write>(mut out: W, case: CaseTag, rows: &[SweepRow]) -> Result<()> {
    writeln!(out, "# schema={CSV_SCHEMA}")?;
    writeln!(out, "{}", csv_header(case))?;
    for r in rows {
        let mut fields = vec![format_number(r.ratio), format_number(r.ratio_db)];
        fields.extend(r.values.iter().map(|(_, v)| format_number(*v)));
        fields.extend([r.lower, r.upper, r.gap, r.asymptote].map(format_number));
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

/// `(α, χ(α))` at `α = k/steps`, `k = 1..=steps`.
pub fn chi_table(steps: usize) -> Result<Vec<(f64, f64)>> {
    if steps < 2 {
        return Err(Error::Usage(format!("need steps >= 2, got {steps}")));
    }
    (1..=steps)
        .map(|k| {
            let a = k as f64 / steps as f64;
            chi(a).map(|c| (a, c))
        })
        .collect()
}

pub fn write_chi_csv<W: Write>(mut out: W, table: &[(f64, f64)]) -> Result<()> {
    writeln!(out, "# schema={CSV_SCHEMA}")?;
    writeln!(out, "alpha,chi")?;
    for (a, c) in table {
        writeln!(out, "{},{}", format_number(*a), format_number(*c))?;
    }
    Ok(())
}

/// Sweep settings behind each figure (1, 2, 3 and 5); figure 4 is [`chi_table`].
pub fn figure_config(figure: u8) -> Option<SweepConfig> {
    let base = SweepConfig {
        case: CaseTag::I,
        alpha: None,
        db_min: -10.0,
        db_max: 60.0,
        steps: 281,
        sigma: 1.0,
        db_convention: DbConvention::Power,
    };
    match figure {
        1 => Some(SweepConfig {
            alpha: Some(0.1),
            ..base
        }),
        2 => Some(SweepConfig {
            alpha: Some(0.4),
            ..base
        }),
        3 => Some(SweepConfig {
            case: CaseTag::II,
            ..base
        }),
        5 => Some(SweepConfig {
            case: CaseTag::III,
            ..base
        }),
        _ => None,
    }
}
