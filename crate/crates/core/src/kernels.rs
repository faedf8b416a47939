//! Kernel functions on the input space and their Gram matrices.
//!
//! Three families are provided: the Gaussian kernel
//! `k(x, y) = exp(-||x - y||^2 / (2 sigma^2))`, the Laplacian kernel
//! `k(x, y) = exp(-||x - y||_1 / sigma)` and the polynomial kernel
//! `k(x, y) = (x . y + c)^deg`. Gaussian and Laplacian are bounded,
//! translation-invariant and universal; the polynomial kernel is neither
//! bounded nor universal and is rejected by the algorithms that need
//! those properties.

use std::fmt;
use std::str::FromStr;

use ndarray::{Array2, ArrayView1, ArrayView2};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    Gaussian { sigma: f64 },
    Laplacian { sigma: f64 },
    Polynomial { c: f64, degree: u32 },
}

impl Kernel {
    pub fn gaussian(sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::KernelParam(format!("sigma must be positive, got {sigma}")));
        }
        Ok(Kernel::Gaussian { sigma })
    }

    pub fn laplacian(sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::KernelParam(format!("sigma must be positive, got {sigma}")));
        }
        Ok(Kernel::Laplacian { sigma })
    }

    pub fn polynomial(c: f64, degree: u32) -> Result<Self> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::KernelParam(format!("c must be >= 0, got {c}")));
        }
        if degree == 0 {
            return Err(Error::KernelParam("degree must be >= 1".into()));
        }
        Ok(Kernel::Polynomial { c, degree })
    }

    pub fn family(&self) -> &'static str {
        match self {
            Kernel::Gaussian { .. } => "gaussian",
            Kernel::Laplacian { .. } => "laplacian",
            Kernel::Polynomial { .. } => "polynomial",
        }
    }

    /// Bounded kernels satisfy `k(x, x) = 1` for all `x`.
    pub fn is_bounded(&self) -> bool {
        !matches!(self, Kernel::Polynomial { .. })
    }

    /// Universal (hence characteristic on compacts) kernels.
    pub fn is_universal(&self) -> bool {
        self.is_bounded()
    }

    /// Evaluate `k(x, y)`.
    pub fn eval(&self, x: ArrayView1<'_, f64>, y: ArrayView1<'_, f64>) -> Result<f64> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                got: y.len(),
            });
        }
        check_finite(x)?;
        check_finite(y)?;
        Ok(self.eval_unchecked(x, y))
    }

    fn eval_unchecked(&self, x: ArrayView1<'_, f64>, y: ArrayView1<'_, f64>) -> f64 {
        match *self {
            Kernel::Gaussian { sigma } => {
                let mut sq = 0.0;
                for (a, b) in x.iter().zip(y.iter()) {
                    let diff = a - b;
                    sq += diff * diff;
                }
                (-sq / (2.0 * sigma * sigma)).exp()
            }
            Kernel::Laplacian { sigma } => {
                let mut l1 = 0.0;
                for (a, b) in x.iter().zip(y.iter()) {
                    l1 += (a - b).abs();
                }
                (-l1 / sigma).exp()
            }
            Kernel::Polynomial { c, degree } => {
                let mut dot = 0.0;
                for (a, b) in x.iter().zip(y.iter()) {
                    dot += a * b;
                }
                (dot + c).powi(degree as i32)
            }
        }
    }

    /// Multiplier applied to the input-only kernel value when two joint
    /// points carry opposite labels. Exists because both translation-
    /// invariant families factor over the appended label coordinate:
    /// the label gap is 0 or 2, so the joint kernel is `k_X * factor`.
    pub(crate) fn label_factor(&self) -> Option<f64> {
        match *self {
            Kernel::Gaussian { sigma } => Some((-2.0 / (sigma * sigma)).exp()),
            Kernel::Laplacian { sigma } => Some((-2.0 / sigma).exp()),
            Kernel::Polynomial { .. } => None,
        }
    }
}

fn check_finite(x: ArrayView1<'_, f64>) -> Result<()> {
    for (col, v) in x.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteInput { row: 0, col });
        }
    }
    Ok(())
}

/// Kernel on the joint space `R^d x {+1, -1}`: the label is appended to the
/// input as one extra real coordinate and the kernel is evaluated in
/// dimension `d + 1`. For the translation-invariant families this stays
/// translation-invariant and characteristic.
pub fn joint_eval(
    kernel: &Kernel,
    x1: ArrayView1<'_, f64>,
    label1: i8,
    x2: ArrayView1<'_, f64>,
    label2: i8,
) -> Result<f64> {
    if x1.len() != x2.len() {
        return Err(Error::DimensionMismatch {
            expected: x1.len(),
            got: x2.len(),
        });
    }
    check_finite(x1)?;
    check_finite(x2)?;
    let l1 = label1 as f64;
    let l2 = label2 as f64;
    Ok(match *kernel {
        Kernel::Gaussian { sigma } => {
            let mut sq = 0.0;
            for (a, b) in x1.iter().zip(x2.iter()) {
                let diff = a - b;
                sq += diff * diff;
            }
            let gap = l1 - l2;
            sq += gap * gap;
            (-sq / (2.0 * sigma * sigma)).exp()
        }
        Kernel::Laplacian { sigma } => {
            let mut dist = 0.0;
            for (a, b) in x1.iter().zip(x2.iter()) {
                dist += (a - b).abs();
            }
            dist += (l1 - l2).abs();
            (-dist / sigma).exp()
        }
        Kernel::Polynomial { c, degree } => {
            let mut dot = 0.0;
            for (a, b) in x1.iter().zip(x2.iter()) {
                dot += a * b;
            }
            dot += l1 * l2;
            (dot + c).powi(degree as i32)
        }
    })
}

/// Dense `n x n` matrix of pairwise kernel values on a point set.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    values: Array2<f64>,
}

impl GramMatrix {
    /// Evaluate the kernel on all pairs. Every entry is computed
    /// independently (row-parallel), so the result does not depend on the
    /// partitioning; symmetry is exact because `eval` is symmetric in its
    /// floating-point operations.
    pub fn compute(kernel: &Kernel, points: ArrayView2<'_, f64>) -> Result<Self> {
        let n = points.nrows();
        if n == 0 || points.ncols() == 0 {
            return Err(Error::EmptyDataset);
        }
        for ((row, col), v) in points.indexed_iter() {
            if !v.is_finite() {
                return Err(Error::NonFiniteInput { row, col });
            }
        }
        let mut values = vec![0.0f64; n * n];
        {
            use rayon::prelude::*;
            values
                .par_chunks_mut(n)
                .enumerate()
                .for_each(|(i, row_out)| {
                    let xi = points.row(i);
                    for (j, out) in row_out.iter_mut().enumerate() {
                        *out = kernel.eval_unchecked(xi, points.row(j));
                    }
                });
        }
        let values = Array2::from_shape_vec((n, n), values).expect("square shape");
        Ok(Self { values })
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn values(&self) -> ArrayView2<'_, f64> {
        self.values.view()
    }

    /// SHA-256 over the raw little-endian bytes of the entries, hex-encoded
    /// and truncated. Two evaluations on the same data and kernel report
    /// the same fingerprint.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        for v in self.values.iter() {
            hasher.update(v.to_le_bytes());
        }
        let digest = hasher.finalize();
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Kernel::Gaussian { sigma } => write!(f, "gaussian:sigma={sigma}"),
            Kernel::Laplacian { sigma } => write!(f, "laplacian:sigma={sigma}"),
            Kernel::Polynomial { c, degree } => write!(f, "polynomial:c={c},deg={degree}"),
        }
    }
}

impl FromStr for Kernel {
    type Err = Error;

    /// Parse selection strings such as `gaussian:sigma=0.5`,
    /// `laplacian:sigma=1.0` or `polynomial:c=1,deg=3`.
    fn from_str(s: &str) -> Result<Self> {
        let parse_err = |reason: String| Error::Parse {
            what: "kernel spec",
            input: s.to_string(),
            reason,
        };
        let (family, params) = s.split_once(':').ok_or_else(|| {
            parse_err("expected family:key=value[,key=value]".into())
        })?;
        let mut map = std::collections::BTreeMap::new();
        for pair in params.split(',') {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| parse_err(format!("bad key=value pair `{pair}`")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|e| parse_err(format!("`{key}`: {e}")))?;
            map.insert(key.trim().to_string(), value);
        }
        let get = |key: &str| {
            map.get(key)
                .copied()
                .ok_or_else(|| parse_err(format!("missing parameter `{key}`")))
        };
        match family.trim() {
            "gaussian" => Kernel::gaussian(get("sigma")?),
            "laplacian" => Kernel::laplacian(get("sigma")?),
            "polynomial" => {
                let deg = get("deg")?;
                if deg.fract() != 0.0 || deg < 1.0 {
                    return Err(parse_err("deg must be a positive integer".into()));
                }
                Kernel::polynomial(get("c")?, deg as u32)
            }
            other => Err(parse_err(format!("unknown kernel family `{other}`"))),
        }
    }
}
