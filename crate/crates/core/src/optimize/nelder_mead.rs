//! Deterministic Nelder–Mead simplex search on a box.
//!
//! Candidates that leave the box are reflected back in before evaluation, so the
//! objective is never called outside it. Non-finite objective values count as
//! `+∞`, which lets callers signal overflow without special casing.

#[derive(Debug, Clone)]
pub struct NelderMeadOptions {
    pub max_evals: usize,
    /// Stop once the objective spread over the simplex is below
    /// `rel_tol·max(|f_best|, 1e-12)` and the simplex diameter is below `rel_tol`.
    pub rel_tol: f64,
    pub initial_step: f64,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Folds `v` into `[lo, hi]` by mirror reflection at the walls.
pub fn reflect_into(v: f64, lo: f64, hi: f64) -> f64 {
    if !v.is_finite() {
        return if v > 0.0 { hi } else { lo };
    }
    let width = hi - lo;
    if width <= 0.0 {
        return lo;
    }
    let mut r = (v - lo).rem_euclid(2.0 * width);
    if r > width {
        r = 2.0 * width - r;
    }
    (lo + r).clamp(lo, hi)
}

struct Boxed<'a, F> {
    f: F,
    lower: &'a [f64],
    upper: &'a [f64],
    evals: usize,
}

impl<F: FnMut(&[f64]) -> f64> Boxed<'_, F> {
    fn eval(&mut self, x: &mut [f64]) -> f64 {
        for (k, v) in x.iter_mut().enumerate() {
            *v = reflect_into(*v, self.lower[k], self.upper[k]);
        }
        self.evals += 1;
        let y = (self.f)(x);
        if y.is_finite() {
            y
        } else {
            f64::INFINITY
        }
    }
}

pub fn nelder_mead<F>(f: F, x0: &[f64], opts: &NelderMeadOptions) -> NelderMeadResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    assert!(n >= 1 && opts.lower.len() == n && opts.upper.len() == n);
    let mut obj = Boxed {
        f,
        lower: &opts.lower,
        upper: &opts.upper,
        evals: 0,
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut values: Vec<f64> = Vec::with_capacity(n + 1);
    let mut start = x0.to_vec();
    values.push(obj.eval(&mut start));
    simplex.push(start);
    for k in 0..n {
        let mut p = simplex[0].clone();
        // step inward if the vertex would sit on the upper wall
        p[k] += if p[k] + opts.initial_step <= opts.upper[k] {
            opts.initial_step
        } else {
            -opts.initial_step
        };
        values.push(obj.eval(&mut p));
        simplex.push(p);
    }

    let mut converged = false;
    let mut order: Vec<usize> = (0..=n).collect();
    loop {
        // stable sort keeps ties in vertex order, which keeps runs reproducible
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];

        let f_best = values[best];
        let f_spread = values[worst] - f_best;
        let diameter = simplex
            .iter()
            .flat_map(|p| p.iter().zip(&simplex[best]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if f_best.is_finite() && f_spread <= opts.rel_tol * f_best.abs().max(1e-12) && diameter <= opts.rel_tol {
            converged = true;
            break;
        }
        if obj.evals >= opts.max_evals {
            break;
        }

        let mut centroid = vec![0.0; n];
        for &i in &order[..n] {
            for k in 0..n {
                centroid[k] += simplex[i][k] / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            (0..n)
                .map(|k| centroid[k] + t * (simplex[worst][k] - centroid[k]))
                .collect()
        };

        let mut xr = along(-1.0);
        let fr = obj.eval(&mut xr);
        if fr < f_best {
            let mut xe = along(-2.0);
            let fe = obj.eval(&mut xe);
            if fe < fr {
                simplex[worst] = xe;
                values[worst] = fe;
            } else {
                simplex[worst] = xr;
                values[worst] = fr;
            }
            continue;
        }
        if fr < values[second_worst] {
            simplex[worst] = xr;
            values[worst] = fr;
            continue;
        }
        let (mut xc, outside) = if fr < values[worst] {
            (along(-0.5), true)
        } else {
            (along(0.5), false)
        };
        let fc = obj.eval(&mut xc);
        let accept = if outside { fc <= fr } else { fc < values[worst] };
        if accept {
            simplex[worst] = xc;
            values[worst] = fc;
            continue;
        }
        // shrink toward the best vertex
        let anchor = simplex[best].clone();
        for &i in &order[1..] {
            let mut p: Vec<f64> = (0..n).map(|k| anchor[k] + 0.5 * (simplex[i][k] - anchor[k])).collect();
            values[i] = obj.eval(&mut p);
            simplex[i] = p;
        }
    }

    let best = (0..=n)
        .min_by(|&i, &j| values[i].total_cmp(&values[j]))
        .expect("simplex is nonempty");
    NelderMeadResult {
        x: simplex[best].clone(),
        f: values[best],
        evals: obj.evals,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(n: usize) -> NelderMeadOptions {
        NelderMeadOptions {
            max_evals: 2000,
            rel_tol: 1e-10,
            initial_step: 0.5,
            lower: vec![-10.0; n],
            upper: vec![10.0; n],
        }
    }

    #[test]
    fn finds_rosenbrock_minimum() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = nelder_mead(rosen, &[-1.2, 1.0], &opts(2));
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-4 && (r.x[1] - 1.0).abs() < 1e-4, "{:?}", r.x);
    }

    #[test]
    fn one_dimensional_quadratic() {
        let r = nelder_mead(|x: &[f64]| (x[0] - 3.0).powi(2) + 1.0, &[0.0], &opts(1));
        assert!((r.x[0] - 3.0).abs() < 1e-4);
        assert!((r.f - 1.0).abs() < 1e-9);
    }

    #[test]
    fn never_evaluates_outside_the_box() {
        let mut o = opts(2);
        o.lower = vec![0.0, 0.0];
        o.upper = vec![1.0, 1.0];
        let mut outside = 0;
        let r = nelder_mead(
            |x: &[f64]| {
                if x.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
                    outside += 1;
                }
                -(x[0] + x[1])
            },
            &[0.5, 0.5],
            &o,
        );
        assert_eq!(outside, 0);
        assert!(r.f < -1.99);
    }

    #[test]
    fn non_finite_values_are_treated_as_infinite() {
        let r = nelder_mead(|x: &[f64]| if x[0] > 2.0 { f64::NAN } else { -x[0] }, &[0.0], &opts(1));
        assert!(r.x[0] <= 2.0 && r.f <= -1.9, "{r:?}");
    }

    #[test]
    fn deterministic() {
        let f = |x: &[f64]| (x[0] - 0.3).powi(2) + (x[1] + 0.7).powi(4) + x[0] * x[1];
        let a = nelder_mead(f, &[1.0, 1.0], &opts(2));
        let b = nelder_mead(f, &[1.0, 1.0], &opts(2));
        assert_eq!(a, b);
    }

    #[test]
    fn reflection_folds_into_range() {
        assert_eq!(reflect_into(1.5, 0.0, 1.0), 0.5);
        assert_eq!(reflect_into(-0.25, 0.0, 1.0), 0.25);
        assert_eq!(reflect_into(2.5, 0.0, 1.0), 0.5);
        assert_eq!(reflect_into(0.3, 0.0, 1.0), 0.3);
    }
}
