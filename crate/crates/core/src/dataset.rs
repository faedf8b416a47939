//! The observed input-output sample.

use std::fmt::Write as _;
use std::path::Path;

use ndarray::{Array2, ArrayView1, ArrayView2};

use crate::error::{Error, Result};

/// `n` input points in `R^d` paired with labels in `{+1, -1}`.
///
/// Immutable after construction; labels are stored as signed integers so
/// that residual arithmetic can use them directly.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    inputs: Array2<f64>,
    labels: Vec<i8>,
}

impl Dataset {
    /// Build a dataset from pre-coerced labels. Checks shapes, label values
    /// and input finiteness.
    pub fn new(inputs: Array2<f64>, labels: Vec<i8>) -> Result<Self> {
        let (n, d) = inputs.dim();
        if n == 0 || d == 0 {
            return Err(Error::EmptyDataset);
        }
        if labels.len() != n {
            return Err(Error::LengthMismatch {
                inputs: n,
                labels: labels.len(),
            });
        }
        for (index, &label) in labels.iter().enumerate() {
            if label != 1 && label != -1 {
                return Err(Error::InvalidLabel {
                    index,
                    value: label as f64,
                });
            }
        }
        for ((row, col), &v) in inputs.indexed_iter() {
            if !v.is_finite() {
                return Err(Error::NonFiniteInput { row, col });
            }
        }
        Ok(Self { inputs, labels })
    }

    pub fn n(&self) -> usize {
        self.inputs.nrows()
    }

    pub fn dim(&self) -> usize {
        self.inputs.ncols()
    }

    pub fn inputs(&self) -> ArrayView2<'_, f64> {
        self.inputs.view()
    }

    pub fn input(&self, j: usize) -> ArrayView1<'_, f64> {
        self.inputs.row(j)
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }

    pub fn label(&self, j: usize) -> i8 {
        self.labels[j]
    }

    /// Parse a dataset from CSV text with header `x1,...,xd,y`.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::Parse {
            what: "dataset CSV",
            input: String::new(),
            reason: "empty file".into(),
        })?;
        let columns: Vec<&str> = header.split(',').map(str::trim).collect();
        let d = columns.len().saturating_sub(1);
        if d == 0 || columns.last() != Some(&"y") {
            return Err(Error::Parse {
                what: "dataset CSV",
                input: header.to_string(),
                reason: "header must be x1,...,xd,y".into(),
            });
        }
        for (k, col) in columns[..d].iter().enumerate() {
            if *col != format!("x{}", k + 1) {
                return Err(Error::Parse {
                    what: "dataset CSV",
                    input: header.to_string(),
                    reason: "header must be x1,...,xd,y".into(),
                });
            }
        }

        let mut raw_inputs = Vec::new();
        let mut raw_labels = Vec::new();
        let mut n = 0usize;
        for (line_no, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != d + 1 {
                return Err(Error::Parse {
                    what: "dataset CSV",
                    input: line.to_string(),
                    reason: format!("line {}: expected {} fields", line_no + 1, d + 1),
                });
            }
            for field in &fields[..d] {
                let v: f64 = field.parse().map_err(|e| Error::Parse {
                    what: "dataset CSV",
                    input: (*field).to_string(),
                    reason: format!("line {}: {}", line_no + 1, e),
                })?;
                raw_inputs.push(v);
            }
            let y: f64 = fields[d].parse().map_err(|e| Error::Parse {
                what: "dataset CSV",
                input: fields[d].to_string(),
                reason: format!("line {}: {}", line_no + 1, e),
            })?;
            raw_labels.push(y);
            n += 1;
        }
        if n == 0 {
            return Err(Error::EmptyDataset);
        }
        let inputs = Array2::from_shape_vec((n, d), raw_inputs).expect("shape checked above");
        validate_dataset(inputs, &raw_labels)
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_csv_str(&text)
    }

    /// Render as CSV with full round-trip float precision.
    pub fn to_csv_string(&self) -> String {
        let d = self.dim();
        let mut out = String::new();
        for k in 1..=d {
            let _ = write!(out, "x{},", k);
        }
        out.push_str("y\n");
        for j in 0..self.n() {
            for v in self.inputs.row(j) {
                let _ = write!(out, "{},", v);
            }
            let _ = writeln!(out, "{:+}", self.labels[j]);
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv_string())?;
        Ok(())
    }
}

/// Validate a raw `n x d` input matrix and real-valued labels, coercing
/// labels to signed integers only when they are exactly `+1` or `-1`.
pub fn validate_dataset(raw_inputs: Array2<f64>, raw_labels: &[f64]) -> Result<Dataset> {
    let n = raw_inputs.nrows();
    if raw_labels.len() != n {
        return Err(Error::LengthMismatch {
            inputs: n,
            labels: raw_labels.len(),
        });
    }
    let mut labels = Vec::with_capacity(n);
    for (index, &value) in raw_labels.iter().enumerate() {
        if value == 1.0 {
            labels.push(1i8);
        } else if value == -1.0 {
            labels.push(-1i8);
        } else {
            return Err(Error::InvalidLabel { index, value });
        }
    }
    Dataset::new(raw_inputs, labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use proptest::prelude::*;

    #[test]
    fn minimal_well_formed() {
        let ds = validate_dataset(array![[0.0], [1.0]], &[1.0, -1.0]).unwrap();
        assert_eq!(ds.n(), 2);
        assert_eq!(ds.dim(), 1);
        assert_eq!(ds.labels(), &[1, -1]);
    }

    #[test]
    fn length_mismatch_rejected() {
        let err = validate_dataset(array![[0.0]], &[1.0, -1.0]).unwrap_err();
        assert!(matches!(err, Error::LengthMismatch { .. }));
    }

    #[test]
    fn non_unit_label_rejected() {
        let err = validate_dataset(array![[0.0]], &[0.5]).unwrap_err();
        assert!(matches!(err, Error::InvalidLabel { .. }));
    }

    #[test]
    fn non_finite_input_rejected() {
        let err = validate_dataset(array![[f64::NAN]], &[1.0]).unwrap_err();
        assert!(matches!(err, Error::NonFiniteInput { .. }));
    }

    #[test]
    fn csv_header_and_fields_checked() {
        assert!(Dataset::from_csv_str("x1,label\n0.0,1\n").is_err());
        assert!(Dataset::from_csv_str("x1,y\n0.0\n").is_err());
        assert!(Dataset::from_csv_str("x1,y\n0.0,2\n").is_err());
        assert!(Dataset::from_csv_str("x1,y\n").is_err());
        let ds = Dataset::from_csv_str("x1,y\n0.5,+1\n-0.25,-1\n").unwrap();
        assert_eq!(ds.n(), 2);
        assert_eq!(ds.label(0), 1);
    }

    proptest! {
        // Serialization round-trips bit-exactly.
        #[test]
        fn csv_round_trip(rows in prop::collection::vec((any::<f64>(), any::<f64>(), prop::bool::ANY), 1..40)) {
            let n = rows.len();
            let mut inputs = Array2::zeros((n, 2));
            let mut labels = Vec::new();
            for (j, (a, b, pos)) in rows.into_iter().enumerate() {
                prop_assume!(a.is_finite() && b.is_finite());
                inputs[[j, 0]] = a;
                inputs[[j, 1]] = b;
                labels.push(if pos { 1i8 } else { -1 });
            }
            let ds = Dataset::new(inputs, labels).unwrap();
            let back = Dataset::from_csv_str(&ds.to_csv_string()).unwrap();
            prop_assert_eq!(ds, back);
        }
    }
}
