//! Candidate regression functions.

use ndarray::ArrayView1;

use crate::error::{Error, Result};

/// A candidate regression function `x -> f_theta(x)` with values in `[-1, 1]`.
///
/// Implementations must be pure; the library never clamps the output, a
/// value outside `[-1, 1]` is reported as an error at the call site.
pub trait RegressionModel: Send + Sync {
    /// Evaluate the regression function at one input point.
    fn evaluate(&self, x: ArrayView1<'_, f64>) -> f64;

    /// Opaque identifier used in reports and sample bundles.
    fn id(&self) -> String;

    /// Input dimension the model expects, `None` when any dimension works.
    fn input_dim(&self) -> Option<usize> {
        None
    }
}

/// Evaluate with the range check `[-1, 1]` enforced. Out-of-range or
/// non-finite values are hard errors, never clamped: downstream label
/// probabilities `(f+1)/2` would silently become invalid otherwise.
pub fn checked_eval(model: &dyn RegressionModel, x: ArrayView1<'_, f64>) -> Result<f64> {
    let value = model.evaluate(x);
    if !value.is_finite() || !(-1.0..=1.0).contains(&value) {
        return Err(Error::ModelRange {
            model: model.id(),
            value,
        });
    }
    Ok(value)
}

/// Check the model's expected input dimension against a dataset dimension.
pub fn check_input_dim(model: &dyn RegressionModel, d: usize) -> Result<()> {
    if let Some(expected) = model.input_dim() {
        if expected != d {
            return Err(Error::InputDimMismatch {
                model: model.id(),
                expected,
                got: d,
            });
        }
    }
    Ok(())
}

/// The constant regression function `f(x) = value`.
#[derive(Debug, Clone, Copy)]
pub struct ConstantModel(pub f64);

impl RegressionModel for ConstantModel {
    fn evaluate(&self, _x: ArrayView1<'_, f64>) -> f64 {
        self.0
    }

    fn id(&self) -> String {
        format!("constant:{}", self.0)
    }
}
