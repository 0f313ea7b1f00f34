//! Empirical mean and unbiased sample variance of losses in `[0,1]`.
//!
//! [`Sample`] and [`LossMatrix`] reject any value outside the closed unit
//! interval at construction time; nothing is clamped. All bounds in this crate
//! are only valid for such data.

use crate::error::{Error, Result};

/// Ordered losses of one hypothesis on `n >= 1` examples, each in `[0,1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
            return Err(Error::OutOfUnitInterval { index, value });
        }
        Ok(Self { values })
    }

    pub fn from_slice(values: &[f64]) -> Result<Self> {
        Self::new(values.to_vec())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; a `Sample` holds at least one value.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn mean(&self) -> f64 {
        mean_of(&self.values)
    }

    pub fn variance(&self) -> Result<f64> {
        variance_of(&self.values)
    }
}

/// `(1/n) Σ v_i`.
pub fn empirical_mean(s: &Sample) -> f64 {
    s.mean()
}

/// Unbiased sample variance, two-pass mean-centred form with divisor `n - 1`.
pub fn sample_variance(s: &Sample) -> Result<f64> {
    s.variance()
}

/// The same quantity evaluated literally as the normalised sum of squared
/// pairwise differences, `Σ_{i<j} (v_i - v_j)² / (n(n-1))`. O(n²); kept as a
/// reference for [`sample_variance`].
pub fn sample_variance_pairwise(s: &Sample) -> Result<f64> {
    pairwise_variance(s.values())
}

/// Pairwise variance on an unrestricted slice (no `[0,1]` check), used for
/// shift and scale identities.
pub fn pairwise_variance(values: &[f64]) -> Result<f64> {
    let n = values.len();
    if n < 2 {
        return Err(Error::VarianceUndefined);
    }
    let mut acc = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = values[i] - values[j];
            acc += d * d;
        }
    }
    Ok(acc / (n as f64 * (n - 1) as f64))
}

/// Checks the fourth-moment inequality for points of `[0,1]` that drives the
/// self-bounding property of the sample variance:
///
/// ```text
/// (1/n) Σ_k ((1/n) Σ_j (x_k - x_j)²)²  <=  (1/(2n²)) Σ_{k,j} (x_k - x_j)²
/// ```
///
/// with an additive slack of `1e-12`.
pub fn self_bounding_moment_check(s: &Sample) -> bool {
    let x = s.values();
    let n = x.len() as f64;
    let mut lhs = 0.0;
    let mut total = 0.0;
    for &xk in x {
        let row: f64 = x.iter().map(|&xj| (xk - xj) * (xk - xj)).sum();
        total += row;
        let inner = row / n;
        lhs += inner * inner;
    }
    lhs /= n;
    let rhs = total / (2.0 * n * n);
    lhs <= rhs + 1e-12
}

pub(crate) fn mean_of(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

pub(crate) fn variance_of(values: &[f64]) -> Result<f64> {
    let n = values.len();
    if n < 2 {
        return Err(Error::VarianceUndefined);
    }
    let mean = mean_of(values);
    let ss: f64 = values.iter().map(|&v| (v - mean) * (v - mean)).sum();
    Ok(ss / (n - 1) as f64)
}

/// `n × K` table of losses in `[0,1]`: row = example, column = hypothesis.
///
/// Stored column-major so that per-hypothesis statistics read contiguous
/// memory.
#[derive(Debug, Clone, PartialEq)]
pub struct LossMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl LossMatrix {
    /// Builds a matrix from `columns[j][i]` = loss of hypothesis `j` on example `i`.
    pub fn from_columns(columns: Vec<Vec<f64>>) -> Result<Self> {
        let cols = columns.len();
        if cols == 0 {
            return Err(Error::MalformedMatrix("no hypotheses".into()));
        }
        let rows = columns[0].len();
        if rows == 0 {
            return Err(Error::MalformedMatrix("no examples".into()));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for (column, col) in columns.into_iter().enumerate() {
            if col.len() != rows {
                return Err(Error::MalformedMatrix(format!(
                    "column {column} has {} entries, expected {rows}",
                    col.len()
                )));
            }
            data.extend(col);
        }
        Self::from_column_major(rows, cols, data)
    }

    /// Builds a matrix from `rows[i][j]` = loss of hypothesis `j` on example `i`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::MalformedMatrix("no examples".into()));
        }
        let k = rows[0].len();
        if k == 0 {
            return Err(Error::MalformedMatrix("no hypotheses".into()));
        }
        let mut data = vec![0.0; n * k];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::MalformedMatrix(format!("row {i} has {} entries, expected {k}", row.len())));
            }
            for (j, &v) in row.iter().enumerate() {
                data[j * n + i] = v;
            }
        }
        Self::from_column_major(n, k, data)
    }

    /// `data[j * rows + i]` = loss of hypothesis `j` on example `i`.
    pub fn from_column_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::MalformedMatrix("matrix must be at least 1×1".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::MalformedMatrix(format!("expected {} entries, got {}", rows * cols, data.len())));
        }
        if let Some(pos) = data.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::MatrixEntryOutOfRange { row: pos % rows, column: pos / rows, value: data[pos] });
        }
        Ok(Self { rows, cols, data })
    }

    /// Number of examples `n`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of hypotheses `K`.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, column: usize) -> f64 {
        self.data[column * self.rows + row]
    }

    pub fn column(&self, j: usize) -> Result<&[f64]> {
        if j >= self.cols {
            return Err(Error::IndexOutOfRange { index: j, count: self.cols });
        }
        Ok(&self.data[j * self.rows..(j + 1) * self.rows])
    }

    pub fn column_sample(&self, j: usize) -> Result<Sample> {
        // Entries were range-checked at construction.
        Ok(Sample { values: self.column(j)?.to_vec() })
    }

    /// Adds `c` to every entry, failing if any result leaves `[0,1]`.
    pub fn shifted(&self, c: f64) -> Result<Self> {
        let data = self.data.iter().map(|v| v + c).collect();
        Self::from_column_major(self.rows, self.cols, data)
    }
}

/// Column `j` of `m` as a [`Sample`].
pub fn column_sample(m: &LossMatrix, j: usize) -> Result<Sample> {
    m.column_sample(j)
}
