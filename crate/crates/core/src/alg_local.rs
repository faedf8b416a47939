//! Algorithm I: local regression estimates compared in L2.
//!
//! Every sample row induces a regression estimate, either a k-nearest-
//! neighbor average or a kernel smoother. The statistic of row `i` is the
//! cumulative squared L2 distance of its estimate from all other rows'
//! estimates, approximated with a shared Monte-Carlo point set drawn
//! uniformly on a compact domain box.

use ndarray::{Array2, ArrayView1, ArrayView2};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::resampling::SampleBundle;

/// Axis-aligned compact domain used for uniform Monte-Carlo sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainBox {
    bounds: Vec<(f64, f64)>,
}

impl DomainBox {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::DomainBox("no dimensions".into()));
        }
        for &(lo, hi) in &bounds {
            if !lo.is_finite() || !hi.is_finite() || hi <= lo {
                return Err(Error::DomainBox(format!(
                    "bound ({lo}, {hi}) must be finite with hi > lo"
                )));
            }
        }
        Ok(Self { bounds })
    }

    /// Bounding box of the data, expanded by 5% of the width on each side.
    /// Degenerate dimensions (zero width) get a half-unit pad instead.
    pub fn from_data(inputs: ArrayView2<'_, f64>) -> Result<Self> {
        let d = inputs.ncols();
        if inputs.nrows() == 0 || d == 0 {
            return Err(Error::EmptyDataset);
        }
        let mut bounds = Vec::with_capacity(d);
        for col in 0..d {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for &v in inputs.column(col) {
                lo = lo.min(v);
                hi = hi.max(v);
            }
            let width = hi - lo;
            let pad = if width > 0.0 { 0.05 * width } else { 0.5 };
            bounds.push((lo - pad, hi + pad));
        }
        Self::new(bounds)
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    /// Draw `count` points uniformly, point-major and coordinate-minor.
    pub fn sample(&self, count: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
        let d = self.dim();
        let mut points = Array2::zeros((count, d));
        for k in 0..count {
            for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
                let u: f64 = rng.random();
                points[[k, j]] = lo + u * (hi - lo);
            }
        }
        points
    }
}

/// Which local estimator backs Algorithm I.
#[derive(Debug, Clone, PartialEq)]
pub enum LocalMode {
    /// k-nearest-neighbor average; `None` means `k_n = ceil(sqrt(n))`,
    /// which satisfies the consistency schedule `k_n -> inf`, `k_n/n -> 0`.
    Knn { k_n: Option<usize> },
    /// Kernel smoother with the given similarity kernel.
    Smoother { kernel: Kernel },
}

/// Configuration for Algorithm I. Unset fields are resolved against the
/// dataset: `mc_points` defaults to `max(1000, 10 n)` and a missing domain
/// box is inferred from the data (flagged in the output).
#[derive(Debug, Clone, PartialEq)]
pub struct LocalEstimatorConfig {
    pub mode: LocalMode,
    pub mc_points: Option<usize>,
    pub domain_box: Option<DomainBox>,
}

impl LocalEstimatorConfig {
    pub fn knn() -> Self {
        Self {
            mode: LocalMode::Knn { k_n: None },
            mc_points: None,
            domain_box: None,
        }
    }

    pub fn smoother(kernel: Kernel) -> Self {
        Self {
            mode: LocalMode::Smoother { kernel },
            mc_points: None,
            domain_box: None,
        }
    }
}

pub fn default_k_n(n: usize) -> usize {
    (n as f64).sqrt().ceil() as usize
}

pub fn default_mc_points(n: usize) -> usize {
    1000.max(10 * n)
}

pub(crate) struct ResolvedLocal {
    pub mode: LocalMode,
    pub ell: usize,
    pub domain: DomainBox,
    pub domain_inferred: bool,
}

impl LocalEstimatorConfig {
    pub(crate) fn resolve(&self, inputs: ArrayView2<'_, f64>) -> Result<ResolvedLocal> {
        let n = inputs.nrows();
        let mode = match &self.mode {
            LocalMode::Knn { k_n } => {
                let k = k_n.unwrap_or_else(|| default_k_n(n));
                if k < 1 || k > n {
                    return Err(Error::KnnRange { k, n });
                }
                LocalMode::Knn { k_n: Some(k) }
            }
            LocalMode::Smoother { kernel } => LocalMode::Smoother { kernel: *kernel },
        };
        let ell = self.mc_points.unwrap_or_else(|| default_mc_points(n));
        if ell == 0 {
            return Err(Error::EmptyMcPoints);
        }
        let (domain, domain_inferred) = match &self.domain_box {
            Some(b) => {
                if b.dim() != inputs.ncols() {
                    return Err(Error::DimensionMismatch {
                        expected: inputs.ncols(),
                        got: b.dim(),
                    });
                }
                (b.clone(), false)
            }
            None => (DomainBox::from_data(inputs)?, true),
        };
        Ok(ResolvedLocal {
            mode,
            ell,
            domain,
            domain_inferred,
        })
    }
}

/// Indices of the `k` nearest inputs to `x` (squared Euclidean distance,
/// ties broken by smaller index), returned in ascending index order so
/// downstream sums have a fixed order.
fn k_nearest(inputs: ArrayView2<'_, f64>, x: ArrayView1<'_, f64>, k: usize) -> Vec<usize> {
    let n = inputs.nrows();
    let mut scored: Vec<(f64, usize)> = (0..n)
        .map(|j| {
            let mut sq = 0.0;
            for (a, b) in inputs.row(j).iter().zip(x.iter()) {
                let diff = a - b;
                sq += diff * diff;
            }
            (sq, j)
        })
        .collect();
    let cmp = |a: &(f64, usize), b: &(f64, usize)| {
        a.0.partial_cmp(&b.0)
            .expect("finite distances")
            .then(a.1.cmp(&b.1))
    };
    if k < n {
        scored.select_nth_unstable_by(k - 1, cmp);
    }
    let mut idx: Vec<usize> = scored[..k].iter().map(|&(_, j)| j).collect();
    idx.sort_unstable();
    idx
}

/// k-nearest-neighbor estimate of one sample row at point `x`.
pub fn knn_estimate(
    row: ArrayView1<'_, i8>,
    inputs: ArrayView2<'_, f64>,
    x: ArrayView1<'_, f64>,
    k_n: usize,
) -> Result<f64> {
    let n = inputs.nrows();
    if k_n < 1 || k_n > n {
        return Err(Error::KnnRange { k: k_n, n });
    }
    if row.len() != n {
        return Err(Error::LengthMismatch {
            inputs: n,
            labels: row.len(),
        });
    }
    if x.len() != inputs.ncols() {
        return Err(Error::DimensionMismatch {
            expected: inputs.ncols(),
            got: x.len(),
        });
    }
    let neighbors = k_nearest(inputs, x, k_n);
    let mut sum = 0.0;
    for &j in &neighbors {
        sum += row[j] as f64;
    }
    Ok(sum / k_n as f64)
}

/// Kernel-smoother estimate of one sample row at point `x`. The
/// normalizer runs over all `n` data points and must be positive.
pub fn smoother_estimate(
    row: ArrayView1<'_, i8>,
    inputs: ArrayView2<'_, f64>,
    x: ArrayView1<'_, f64>,
    kernel: &Kernel,
) -> Result<f64> {
    let n = inputs.nrows();
    if row.len() != n {
        return Err(Error::LengthMismatch {
            inputs: n,
            labels: row.len(),
        });
    }
    let mut weighted = 0.0;
    let mut normalizer = 0.0;
    for j in 0..n {
        let w = kernel.eval(x, inputs.row(j))?;
        weighted += row[j] as f64 * w;
        normalizer += w;
    }
    if !(normalizer.is_finite() && normalizer > 0.0) {
        return Err(Error::ZeroNormalizer { value: normalizer });
    }
    Ok(weighted / normalizer)
}

/// Monte-Carlo squared L2 distance between two function closures over the
/// shared point set: `(1/l) sum_k (f_i(x_k) - f_j(x_k))^2`.
pub fn mc_l2_distance<F, G>(f_i: F, f_j: G, mc_points: ArrayView2<'_, f64>) -> Result<f64>
where
    F: Fn(ArrayView1<'_, f64>) -> f64,
    G: Fn(ArrayView1<'_, f64>) -> f64,
{
    let ell = mc_points.nrows();
    if ell == 0 {
        return Err(Error::EmptyMcPoints);
    }
    let mut acc = 0.0;
    for k in 0..ell {
        let x = mc_points.row(k);
        let diff = f_i(x) - f_j(x);
        acc += diff * diff;
    }
    Ok(acc / ell as f64)
}

/// Row sums of a symmetric pairwise-distance matrix, each accumulated in
/// ascending column order. This is the cumulative statistic shared by
/// Algorithms I and II.
pub fn cumulative_statistics(pairwise: ArrayView2<'_, f64>) -> Vec<f64> {
    let m = pairwise.nrows();
    let mut z = Vec::with_capacity(m);
    for i in 0..m {
        let mut sum = 0.0;
        for j in 0..m {
            sum += pairwise[[i, j]];
        }
        z.push(sum);
    }
    z
}

/// Statistics of Algorithm I for one bundle.
#[derive(Debug, Clone)]
pub struct Alg1Run {
    pub z: Vec<f64>,
    /// True when the domain box was inferred from the data bounding box.
    pub domain_inferred: bool,
}

/// Estimate matrix `F[i][k] = f^(i)(x_k)` over the Monte-Carlo points.
fn estimate_matrix(
    bundle: &SampleBundle,
    mode: &LocalMode,
    mc: ArrayView2<'_, f64>,
) -> Result<Array2<f64>> {
    let m = bundle.m();
    let ell = mc.nrows();
    let inputs = bundle.dataset().inputs();
    let labels = bundle.labels();
    let mut estimates = Array2::zeros((m, ell));
    match mode {
        LocalMode::Knn { k_n } => {
            let k = k_n.expect("resolved");
            for p in 0..ell {
                let neighbors = k_nearest(inputs, mc.row(p), k);
                for i in 0..m {
                    let mut sum = 0.0;
                    for &j in &neighbors {
                        sum += labels[[i, j]] as f64;
                    }
                    estimates[[i, p]] = sum / k as f64;
                }
            }
        }
        LocalMode::Smoother { kernel } => {
            let n = bundle.n();
            let mut weights = vec![0.0f64; n];
            for p in 0..ell {
                let x = mc.row(p);
                let mut normalizer = 0.0;
                for (j, w) in weights.iter_mut().enumerate() {
                    *w = kernel.eval(x, inputs.row(j))?;
                    normalizer += *w;
                }
                if !(normalizer.is_finite() && normalizer > 0.0) {
                    return Err(Error::ZeroNormalizer { value: normalizer });
                }
                for i in 0..m {
                    let mut weighted = 0.0;
                    for (j, &w) in weights.iter().enumerate() {
                        weighted += labels[[i, j]] as f64 * w;
                    }
                    estimates[[i, p]] = weighted / normalizer;
                }
            }
        }
    }
    Ok(estimates)
}

/// Cumulative Monte-Carlo L2 statistics for all rows of a bundle. All
/// pairs share the single point set drawn here from `rng`, which must be
/// a stream independent of the labels and permutation.
pub fn alg1_statistics(
    bundle: &SampleBundle,
    config: &LocalEstimatorConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Alg1Run> {
    let m = bundle.m();
    if m < 3 {
        return Err(Error::SampleCount { m, min: 3 });
    }
    let resolved = config.resolve(bundle.dataset().inputs())?;
    let mc = resolved.domain.sample(resolved.ell, rng);
    let estimates = estimate_matrix(bundle, &resolved.mode, mc.view())?;

    let ell = resolved.ell as f64;
    let mut pairwise = Array2::zeros((m, m));
    for i in 0..m {
        for j in (i + 1)..m {
            let mut acc = 0.0;
            for p in 0..resolved.ell {
                let diff = estimates[[i, p]] - estimates[[j, p]];
                acc += diff * diff;
            }
            let d = acc / ell;
            pairwise[[i, j]] = d;
            pairwise[[j, i]] = d;
        }
    }
    Ok(Alg1Run {
        z: cumulative_statistics(pairwise.view()),
        domain_inferred: resolved.domain_inferred,
    })
}
