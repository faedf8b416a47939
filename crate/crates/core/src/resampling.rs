//! Alternative-label generation and the tie-breaking permutation.
//!
//! Given a candidate model, each alternative sample keeps the observed
//! inputs and redraws every label independently with
//! `P(Y = +1 | X = x_j) = (f_theta(x_j) + 1) / 2`. Row `i` of a bundle
//! consumes its own derived stream in index order, one uniform per label,
//! so the layout is fixed no matter how rows are scheduled.

use std::sync::Arc;

use ndarray::{Array2, ArrayView1};
use rand::Rng;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::model::{check_input_dim, checked_eval, RegressionModel};
use crate::rng::{purpose, SeedSpec};

/// The original sample plus `m - 1` resampled label rows and the
/// tie-breaking permutation drawn for this evaluation.
#[derive(Debug, Clone)]
pub struct SampleBundle {
    dataset: Arc<Dataset>,
    /// `m x n` labels; row 0 is the original sample.
    labels: Array2<i8>,
    pi: Vec<usize>,
    theta_id: String,
}

impl SampleBundle {
    pub fn dataset(&self) -> &Arc<Dataset> {
        &self.dataset
    }

    pub fn m(&self) -> usize {
        self.labels.nrows()
    }

    pub fn n(&self) -> usize {
        self.labels.ncols()
    }

    pub fn labels(&self) -> &Array2<i8> {
        &self.labels
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, i8> {
        self.labels.row(i)
    }

    pub fn pi(&self) -> &[usize] {
        &self.pi
    }

    pub fn theta_id(&self) -> &str {
        &self.theta_id
    }

    /// Label matrix converted to `f64`, used by the quadratic-form paths.
    pub fn labels_f64(&self) -> Array2<f64> {
        self.labels.mapv(|v| v as f64)
    }

    /// Test-only constructor for synthetic bundles.
    #[doc(hidden)]
    pub fn from_parts(
        dataset: Arc<Dataset>,
        labels: Array2<i8>,
        pi: Vec<usize>,
        theta_id: String,
    ) -> Self {
        Self {
            dataset,
            labels,
            pi,
            theta_id,
        }
    }
}

/// Fisher-Yates shuffle driven by the supplied stream.
pub(crate) fn shuffle_in_place<T>(items: &mut [T], rng: &mut impl Rng) {
    for i in (1..items.len()).rev() {
        let j = rng.random_range(0..=i);
        items.swap(i, j);
    }
}

/// Draw a permutation of `{0, ..., m-1}` uniformly over all `m!` options.
pub fn draw_permutation(m: usize, rng: &mut impl Rng) -> Result<Vec<usize>> {
    if m < 1 {
        return Err(Error::SampleCount { m, min: 1 });
    }
    let mut pi: Vec<usize> = (0..m).collect();
    shuffle_in_place(&mut pi, rng);
    Ok(pi)
}

/// Generate the `m - 1` alternative label rows for `model` plus the
/// tie-breaking permutation. Row `i >= 1` draws from the stream
/// `(labels, theta_index, i)` and the permutation from
/// `(perm, theta_index, 0)`, both independent of the data by construction.
pub fn resample_labels(
    model: &dyn RegressionModel,
    dataset: &Arc<Dataset>,
    m: usize,
    seed: &SeedSpec,
    theta_index: u64,
) -> Result<SampleBundle> {
    if m < 2 {
        return Err(Error::SampleCount { m, min: 2 });
    }
    let n = dataset.n();
    check_input_dim(model, dataset.dim())?;

    // f_theta(x_j) evaluated once per input and reused by every row
    let mut prob_plus = Vec::with_capacity(n);
    for j in 0..n {
        let f = checked_eval(model, dataset.input(j))?;
        prob_plus.push((f + 1.0) / 2.0);
    }

    let mut labels = Array2::zeros((m, n));
    for (j, &y) in dataset.labels().iter().enumerate() {
        labels[[0, j]] = y;
    }
    for i in 1..m {
        let mut rng = seed.stream(purpose::LABELS, theta_index, i as u64);
        for j in 0..n {
            let u: f64 = rng.random();
            labels[[i, j]] = if u < prob_plus[j] { 1 } else { -1 };
        }
    }

    let mut perm_rng = seed.stream(purpose::PERM, theta_index, 0);
    let pi = draw_permutation(m, &mut perm_rng)?;

    Ok(SampleBundle {
        dataset: Arc::clone(dataset),
        labels,
        pi,
        theta_id: model.id(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ConstantModel;
    use ndarray::Array2;

    fn toy_dataset(n: usize) -> Arc<Dataset> {
        let inputs = Array2::from_shape_fn((n, 1), |(i, _)| i as f64 / n as f64);
        let labels = (0..n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
        Arc::new(Dataset::new(inputs, labels).unwrap())
    }

    #[test]
    fn row_zero_is_the_original_sample() {
        let ds = toy_dataset(9);
        let seed = SeedSpec::new(3);
        let bundle = resample_labels(&ConstantModel(0.0), &ds, 4, &seed, 0).unwrap();
        for j in 0..ds.n() {
            assert_eq!(bundle.row(0)[j], ds.label(j));
        }
        assert_eq!(bundle.m(), 4);
    }

    #[test]
    fn constant_models_force_labels() {
        let ds = toy_dataset(7);
        let seed = SeedSpec::new(3);
        let plus = resample_labels(&ConstantModel(1.0), &ds, 5, &seed, 0).unwrap();
        let minus = resample_labels(&ConstantModel(-1.0), &ds, 5, &seed, 0).unwrap();
        for i in 1..5 {
            assert!(plus.row(i).iter().all(|&y| y == 1));
            assert!(minus.row(i).iter().all(|&y| y == -1));
        }
    }

    #[test]
    fn balanced_model_gives_half_plus_labels() {
        // binomial oracle: 1e5 draws, 3 sigma ~ 0.0047
        let ds = toy_dataset(100);
        let seed = SeedSpec::new(11);
        let m = 1001; // 1000 resampled rows x 100 labels = 1e5 draws
        let bundle = resample_labels(&ConstantModel(0.0), &ds, m, &seed, 0).unwrap();
        let total = (m - 1) * ds.n();
        let plus: usize = (1..m)
            .map(|i| bundle.row(i).iter().filter(|&&y| y == 1).count())
            .sum();
        let fraction = plus as f64 / total as f64;
        assert!((0.495..=0.505).contains(&fraction), "fraction {}", fraction);
    }

    #[test]
    fn rows_are_reproducible_and_distinct() {
        let ds = toy_dataset(50);
        let seed = SeedSpec::new(5);
        let a = resample_labels(&ConstantModel(0.0), &ds, 4, &seed, 7).unwrap();
        let b = resample_labels(&ConstantModel(0.0), &ds, 4, &seed, 7).unwrap();
        assert_eq!(a.labels(), b.labels());
        assert_eq!(a.pi(), b.pi());
        let c = resample_labels(&ConstantModel(0.0), &ds, 4, &seed, 8).unwrap();
        assert_ne!(a.labels(), c.labels());
    }

    #[test]
    fn m_below_two_rejected() {
        let ds = toy_dataset(3);
        let err = resample_labels(&ConstantModel(0.0), &ds, 1, &SeedSpec::new(0), 0).unwrap_err();
        assert!(matches!(err, Error::SampleCount { min: 2, .. }));
    }

    #[test]
    fn model_range_violation_propagates() {
        let ds = toy_dataset(3);
        let err = resample_labels(&ConstantModel(1.5), &ds, 3, &SeedSpec::new(0), 0).unwrap_err();
        assert!(matches!(err, Error::ModelRange { .. }));
    }

    #[test]
    fn identity_permutation_for_m_one() {
        let mut rng = SeedSpec::new(1).stream(purpose::PERM, 0, 0);
        assert_eq!(draw_permutation(1, &mut rng).unwrap(), vec![0]);
        assert!(draw_permutation(0, &mut rng).is_err());
    }

    #[test]
    fn permutations_are_uniform() {
        // multinomial oracle: 60000 draws over 6 cells, 3 sigma ~ 0.0046
        let seed = SeedSpec::new(42);
        let draws = 60_000;
        let mut counts = std::collections::HashMap::new();
        for t in 0..draws {
            let mut rng = seed.stream(purpose::PERM, t, 0);
            let pi = draw_permutation(3, &mut rng).unwrap();
            *counts.entry(pi).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 6);
        for (pi, count) in counts {
            let freq = count as f64 / draws as f64;
            assert!(
                (freq - 1.0 / 6.0).abs() <= 0.006,
                "permutation {:?} frequency {}",
                pi,
                freq
            );
        }
    }

    #[test]
    fn permutation_reproducible_for_fixed_stream() {
        let seed = SeedSpec::new(9);
        let a = draw_permutation(2, &mut seed.stream(purpose::PERM, 0, 0)).unwrap();
        let b = draw_permutation(2, &mut seed.stream(purpose::PERM, 0, 0)).unwrap();
        assert_eq!(a, b);
    }
}
