use nalgebra::{DMatrix, DVector};

use crate::detection::Parameter;
use crate::error::{Error, Result};

/// Mean and sample standard deviation with their standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub mean_std_error: f64,
    pub std_dev: f64,
    /// Large-sample Gaussian approximation `s/√(2(n-1))`.
    pub std_dev_std_error: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Summary {
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        let std_dev = var.sqrt();
        let (mean_std_error, std_dev_std_error) = if n > 1 {
            (
                std_dev / (n as f64).sqrt(),
                std_dev / (2.0 * (n - 1) as f64).sqrt(),
            )
        } else {
            (f64::NAN, f64::NAN)
        };
        Summary {
            count: n,
            mean,
            mean_std_error,
            std_dev,
            std_dev_std_error,
        }
    }
}

/// Fitted slope of one regressor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slope {
    pub parameter: Parameter,
    pub value: f64,
    pub std_error: f64,
}

impl Slope {
    pub fn t_statistic(&self) -> f64 {
        self.value / self.std_error
    }

    /// `value ± 3 se`
    pub fn interval(&self) -> (f64, f64) {
        (self.value - 3.0 * self.std_error, self.value + 3.0 * self.std_error)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Regression {
    pub intercept: f64,
    pub slopes: Vec<Slope>,
    pub residual_std: f64,
}

impl Regression {
    pub fn slope(&self, parameter: Parameter) -> Option<&Slope> {
        self.slopes.iter().find(|s| s.parameter == parameter)
    }
}

/// Ordinary least squares of `y` on an intercept and `columns`.
///
/// Columns are centred and scaled to unit variance before solving; columns
/// with zero variance are dropped. Fails when no column varies or there are
/// too few samples for a residual variance.
pub fn ols(y: &[f64], columns: &[(Parameter, &[f64])]) -> Result<Regression> {
    let n = y.len();
    let mut kept = Vec::new();
    for (parameter, x) in columns {
        if x.len() != n {
            return Err(Error::invalid("regressor", "length differs from the response"));
        }
        let s = Summary::of(x);
        if s.std_dev > 0.0 {
            kept.push((*parameter, *x, s));
        }
    }
    if kept.is_empty() {
        return Err(Error::RegressionNotApplicable(
            "no injected parameter varies across samples".into(),
        ));
    }
    let k = kept.len();
    if n <= k + 1 {
        return Err(Error::RegressionNotApplicable(format!(
            "{n} samples cannot support {k} regressors"
        )));
    }
    let y_summary = Summary::of(y);
    let design = DMatrix::from_fn(n, k, |i, j| {
        let (_, x, s) = &kept[j];
        (x[i] - s.mean) / s.std_dev
    });
    let response = DVector::from_iterator(n, y.iter().map(|v| v - y_summary.mean));
    let gram = design.transpose() * &design;
    let chol = gram.clone().cholesky().ok_or_else(|| {
        Error::RegressionNotApplicable("regressors are collinear".into())
    })?;
    let beta = chol.solve(&(design.transpose() * &response));
    let residuals = &response - &design * &beta;
    let dof = (n - k - 1) as f64;
    let sigma2 = residuals.norm_squared() / dof;
    let inverse = chol.inverse();

    let mut intercept = y_summary.mean;
    let slopes = kept
        .iter()
        .enumerate()
        .map(|(j, (parameter, _, s))| {
            let value = beta[j] / s.std_dev;
            intercept -= value * s.mean;
            Slope {
                parameter: *parameter,
                value,
                std_error: (sigma2 * inverse[(j, j)]).sqrt() / s.std_dev,
            }
        })
        .collect();
    Ok(Regression {
        intercept,
        slopes,
        residual_std: sigma2.sqrt(),
    })
}
