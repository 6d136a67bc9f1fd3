//! Nonlinear least squares (Levenberg-Marquardt) and scalar minimization.
//!
//! The solver is deliberately small: dense problems in this crate have two
//! or three parameters and a few thousand residuals. Damping follows the
//! classic Marquardt diagonal scaling with multiplicative lambda updates.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// A residual-vector problem for [`minimize`].
pub trait LeastSquares {
    /// Residual vector at `params`.
    fn residuals(&self, params: &[f64]) -> Vec<f64>;

    /// Analytic Jacobian (rows = residuals, columns = parameters). The
    /// default falls back to central finite differences.
    fn jacobian(&self, params: &[f64]) -> Option<DMatrix<f64>> {
        let _ = params;
        None
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LmOptions {
    pub max_iterations: usize,
    /// Relative decrease of the cost below which the fit is converged.
    pub ftol: f64,
    /// Relative step size below which the fit is converged.
    pub xtol: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        LmOptions {
            max_iterations: 200,
            ftol: 1e-14,
            xtol: 1e-14,
        }
    }
}

/// Converged fit: parameters, scaled covariance, and bookkeeping.
#[derive(Debug, Clone)]
pub struct LmFit {
    pub params: Vec<f64>,
    /// Covariance of the parameters: `(J^T J)^-1` scaled by the residual
    /// variance `rss / (m - n)` (zero when the system is not overdetermined).
    pub covariance: DMatrix<f64>,
    /// Sum of squared residuals at the optimum.
    pub rss: f64,
    pub iterations: usize,
    pub residual_count: usize,
}

impl LmFit {
    /// 1-sigma uncertainty of parameter `i`.
    pub fn sigma(&self, i: usize) -> f64 {
        self.covariance[(i, i)].max(0.0).sqrt()
    }
}

fn numeric_jacobian(problem: &dyn LeastSquares, params: &[f64], m: usize) -> DMatrix<f64> {
    let n = params.len();
    let mut jac = DMatrix::zeros(m, n);
    let mut lo = params.to_vec();
    let mut hi = params.to_vec();
    for j in 0..n {
        let h = 1e-6 * params[j].abs().max(1e-9);
        hi[j] = params[j] + h;
        lo[j] = params[j] - h;
        let rh = problem.residuals(&hi);
        let rl = problem.residuals(&lo);
        let denom = hi[j] - lo[j];
        for i in 0..m {
            jac[(i, j)] = (rh[i] - rl[i]) / denom;
        }
        hi[j] = params[j];
        lo[j] = params[j];
    }
    jac
}

/// Levenberg-Marquardt minimization of `problem` starting at `initial`.
///
/// Returns [`Error::FitNonConvergence`] carrying the last iterate when the
/// iteration budget runs out.
pub fn minimize(problem: &dyn LeastSquares, initial: &[f64], opts: &LmOptions) -> Result<LmFit> {
    let n = initial.len();
    let mut params = DVector::from_column_slice(initial);
    let mut residuals = DVector::from_vec(problem.residuals(params.as_slice()));
    let m = residuals.len();
    if m < n {
        return Err(Error::Config(format!(
            "least squares needs at least {n} residuals, got {m}"
        )));
    }
    let mut cost = residuals.norm_squared();
    let mut lambda = 1e-3;
    let mut iterations = 0;

    let finish = |params: &DVector<f64>, cost: f64, iterations: usize| -> Result<LmFit> {
        let jac = problem
            .jacobian(params.as_slice())
            .unwrap_or_else(|| numeric_jacobian(problem, params.as_slice(), m));
        let normal = jac.transpose() * &jac;
        let unscaled = normal.clone().try_inverse().unwrap_or_else(|| {
            // Singular normal matrix at the optimum: fall back to the
            // pseudo-inverse so sigmas stay finite.
            normal.pseudo_inverse(1e-12).unwrap_or(DMatrix::zeros(n, n))
        });
        let s2 = if m > n { cost / (m - n) as f64 } else { 0.0 };
        Ok(LmFit {
            params: params.as_slice().to_vec(),
            covariance: unscaled * s2,
            rss: cost,
            iterations,
            residual_count: m,
        })
    };

    while iterations < opts.max_iterations {
        iterations += 1;
        let jac = problem
            .jacobian(params.as_slice())
            .unwrap_or_else(|| numeric_jacobian(problem, params.as_slice(), m));
        let normal = jac.transpose() * &jac;
        let gradient = jac.transpose() * &residuals;

        let mut accepted = false;
        for _ in 0..40 {
            let mut damped = normal.clone();
            for d in 0..n {
                let diag = normal[(d, d)];
                damped[(d, d)] = diag + lambda * if diag > 0.0 { diag } else { 1.0 };
            }
            let step = match damped.cholesky() {
                Some(chol) => chol.solve(&(-&gradient)),
                None => {
                    lambda *= 10.0;
                    continue;
                }
            };
            let trial = &params + &step;
            let trial_residuals = DVector::from_vec(problem.residuals(trial.as_slice()));
            let trial_cost = trial_residuals.norm_squared();
            if trial_cost.is_finite() && trial_cost <= cost {
                let cost_drop = cost - trial_cost;
                let step_norm = step.norm();
                let param_norm = params.norm();
                params = trial;
                residuals = trial_residuals;
                cost = trial_cost;
                lambda = (lambda / 9.0).max(1e-14);
                accepted = true;
                if cost == 0.0
                    || cost_drop <= opts.ftol * cost.max(f64::MIN_POSITIVE)
                    || step_norm <= opts.xtol * (param_norm + opts.xtol)
                {
                    return finish(&params, cost, iterations);
                }
                break;
            }
            lambda *= 10.0;
            if lambda > 1e14 {
                // Damping saturated: no direction improves the cost, so the
                // iterate is at a (possibly flat) minimum.
                return finish(&params, cost, iterations);
            }
        }
        if !accepted {
            return finish(&params, cost, iterations);
        }
    }

    Err(Error::FitNonConvergence {
        iterations,
        rss: cost,
        params: params.as_slice().to_vec(),
    })
}

/// Golden-section minimization of a unimodal scalar function on `[a, b]`.
///
/// Runs until the bracket shrinks below `tol` (absolute). Deterministic and
/// derivative-free; adequate for the smooth one-dimensional objectives used
/// here.
pub fn golden_section_min(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// y = a * exp(b * x) sampled on a grid.
    struct ExpProblem {
        x: Vec<f64>,
        y: Vec<f64>,
    }

    impl LeastSquares for ExpProblem {
        fn residuals(&self, p: &[f64]) -> Vec<f64> {
            self.x
                .iter()
                .zip(&self.y)
                .map(|(x, y)| p[0] * (p[1] * x).exp() - y)
                .collect()
        }
    }

    #[test]
    fn recovers_exponential_parameters() {
        let x: Vec<f64> = (0..50).map(|i| i as f64 * 0.1).collect();
        let y: Vec<f64> = x.iter().map(|x| 2.5 * (-0.7 * x).exp()).collect();
        let fit = minimize(&ExpProblem { x, y }, &[1.0, -0.1], &LmOptions::default()).unwrap();
        assert_relative_eq!(fit.params[0], 2.5, max_relative = 1e-8);
        assert_relative_eq!(fit.params[1], -0.7, max_relative = 1e-8);
        assert!(fit.rss < 1e-16);
    }

    #[test]
    fn covariance_scales_with_noise() {
        // Linear model keeps the check analytic: y = p0 + p1 x.
        struct Lin {
            x: Vec<f64>,
            y: Vec<f64>,
        }
        impl LeastSquares for Lin {
            fn residuals(&self, p: &[f64]) -> Vec<f64> {
                self.x
                    .iter()
                    .zip(&self.y)
                    .map(|(x, y)| p[0] + p[1] * x - y)
                    .collect()
            }
        }
        let x: Vec<f64> = (0..100).map(|i| i as f64).collect();
        // Deterministic pseudo-noise, +-0.5 alternating-ish.
        let y: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(i, x)| 1.0 + 2.0 * x + if i % 2 == 0 { 0.5 } else { -0.5 })
            .collect();
        let fit = minimize(&Lin { x: x.clone(), y }, &[0.0, 0.0], &LmOptions::default()).unwrap();
        assert_relative_eq!(fit.params[1], 2.0, max_relative = 1e-3);
        // Residual variance is 0.25; slope variance = s^2 / Sxx.
        let mean_x = x.iter().sum::<f64>() / 100.0;
        let sxx: f64 = x.iter().map(|x| (x - mean_x).powi(2)).sum();
        let expected_sigma = (0.25_f64 * 100.0 / 98.0 / sxx).sqrt();
        assert_relative_eq!(fit.sigma(1), expected_sigma, max_relative = 0.05);
    }

    #[test]
    fn iteration_budget_error_carries_last_iterate() {
        let x: Vec<f64> = (0..50).map(|i| i as f64 * 0.1).collect();
        let y: Vec<f64> = x.iter().map(|x| 2.5 * (-0.7 * x).exp()).collect();
        let err = minimize(
            &ExpProblem { x, y },
            &[1.0, -0.1],
            &LmOptions {
                max_iterations: 2,
                ..Default::default()
            },
        )
        .unwrap_err();
        match err {
            Error::FitNonConvergence {
                iterations, params, ..
            } => {
                assert_eq!(iterations, 2);
                assert_eq!(params.len(), 2);
            }
            other => panic!("expected FitNonConvergence, got {other:?}"),
        }
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        // Location accuracy of a derivative-free minimizer on a smooth
        // parabola is limited to ~sqrt(eps) by flatness of f near the min.
        let (x, fx) = golden_section_min(|x| (x - 0.3).powi(2) + 1.0, -4.0, 5.0, 1e-12);
        assert_relative_eq!(x, 0.3, epsilon = 1e-7);
        assert_relative_eq!(fx, 1.0, max_relative = 1e-12);
    }
}
