//! Empirical distributions, generalized quantiles, and joint ECDFs.
//!
//! Quantiles follow the generalized-inverse convention `H^{-1}(p) =
//! inf{t : H(t) >= p}`, extended so that `H^{-1}(0) = -inf` and the infimum
//! of an empty set is `+inf`. Those sentinels are carried explicitly as
//! [`ExtReal`] values rather than smuggled through float arithmetic, and all
//! interval logic downstream branches on them.

use crate::error::CoreError;

/// A point on the extended real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtReal {
    /// `self < x` for finite `x`.
    pub fn below(self, x: f64) -> bool {
        match self {
            ExtReal::NegInf => true,
            ExtReal::Finite(v) => v < x,
            ExtReal::PosInf => false,
        }
    }

    /// `self >= x` for finite `x`.
    pub fn at_least(self, x: f64) -> bool {
        match self {
            ExtReal::NegInf => false,
            ExtReal::Finite(v) => v >= x,
            ExtReal::PosInf => true,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    /// The finite value, if there is one.
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl std::fmt::Display for ExtReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtReal::NegInf => write!(f, "-inf"),
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::PosInf => write!(f, "inf"),
        }
    }
}

/// The order-statistic index `ceil(n * prob)` for `prob` in (0, 1].
///
/// The product is nudged down by 1e-9 before taking the ceiling so that
/// rationals like `5 * (1 - 0.6)` land on 2 instead of drifting up to 3
/// through float rounding. Result is clamped to `1..=n`.
pub(crate) fn order_index(n: usize, prob: f64) -> usize {
    debug_assert!(prob > 0.0 && prob <= 1.0 && n > 0);
    (((n as f64) * prob - 1e-9).ceil() as i64).clamp(1, n as i64) as usize
}

/// A univariate sample with a cached sorted copy.
///
/// Construction sorts once; evaluation of the ECDF and of quantiles is then
/// a binary search or an index lookup.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
    sorted: Vec<f64>,
}

impl Sample {
    /// Build from raw observations. Rejects empty input and non-finite values.
    pub fn new(values: Vec<f64>) -> Result<Self, CoreError> {
        if values.is_empty() {
            return Err(CoreError::EmptySample);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CoreError::NonFinite { context: "sample values" });
        }
        let mut sorted = values.clone();
        sorted.sort_unstable_by(f64::total_cmp);
        Ok(Self { values, sorted })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Observations in input order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Observations in nondecreasing order.
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub fn min(&self) -> f64 {
        self.sorted[0]
    }

    pub fn max(&self) -> f64 {
        self.sorted[self.sorted.len() - 1]
    }

    /// Number of observations `<= u`. Accepts infinite `u`.
    pub(crate) fn count_le(&self, u: f64) -> usize {
        self.sorted.partition_point(|&v| v <= u)
    }

    /// Empirical CDF at `u`: the fraction of observations `<= u`.
    ///
    /// `u` may be infinite (giving 0 or 1) but not NaN.
    pub fn ecdf(&self, u: f64) -> Result<f64, CoreError> {
        if u.is_nan() {
            return Err(CoreError::NonFinite { context: "ecdf argument" });
        }
        Ok(self.count_le(u) as f64 / self.len() as f64)
    }

    /// Generalized empirical quantile `inf{t : ecdf(t) >= prob}`.
    ///
    /// For `prob` in (0, 1] this is the `ceil(n * prob)`-th order statistic;
    /// `prob = 0` yields [`ExtReal::NegInf`].
    pub fn quantile(&self, prob: f64) -> Result<ExtReal, CoreError> {
        if !(0.0..=1.0).contains(&prob) {
            return Err(CoreError::InvalidProbability { value: prob });
        }
        if prob == 0.0 {
            return Ok(ExtReal::NegInf);
        }
        Ok(ExtReal::Finite(self.sorted[order_index(self.len(), prob) - 1]))
    }
}

/// Several markers measured on the same subjects: equal-length columns,
/// one [`Sample`] per marker, with row alignment preserved.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSample {
    columns: Vec<Sample>,
    rows: usize,
}

impl PairedSample {
    /// Build from per-marker columns, which must be nonempty and equal-length.
    pub fn new(columns: Vec<Vec<f64>>) -> Result<Self, CoreError> {
        if columns.is_empty() {
            return Err(CoreError::EmptySample);
        }
        let rows = columns[0].len();
        for col in &columns {
            if col.len() != rows {
                return Err(CoreError::ColumnLengthMismatch { first: rows, other: col.len() });
            }
        }
        let columns = columns.into_iter().map(Sample::new).collect::<Result<Vec<_>, _>>()?;
        Ok(Self { columns, rows })
    }

    /// Build from subject rows (each row holds one value per marker).
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, CoreError> {
        if rows.is_empty() {
            return Err(CoreError::EmptySample);
        }
        let markers = rows[0].len();
        for row in rows {
            if row.len() != markers {
                return Err(CoreError::ColumnLengthMismatch { first: markers, other: row.len() });
            }
        }
        let columns = (0..markers)
            .map(|j| rows.iter().map(|r| r[j]).collect::<Vec<_>>())
            .collect();
        Self::new(columns)
    }

    /// Number of subjects.
    pub fn len(&self) -> usize {
        self.rows
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of markers.
    pub fn markers(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, index: usize) -> Result<&Sample, CoreError> {
        self.columns.get(index).ok_or(CoreError::MarkerIndex { index, markers: self.markers() })
    }

    /// Subject `row` restricted to the listed markers, in input order.
    pub fn row(&self, row: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c.values()[row]).collect()
    }

    /// New paired sample made of the given rows (repeats allowed).
    pub(crate) fn select_rows(&self, rows: &[usize]) -> Self {
        let columns = self
            .columns
            .iter()
            .map(|c| {
                let vals = c.values();
                Sample::new(rows.iter().map(|&r| vals[r]).collect()).expect("rows of a valid sample")
            })
            .collect();
        Self { columns, rows: rows.len() }
    }

    /// Number of subjects with `marker_i <= x` and `marker_j <= y`.
    pub(crate) fn joint_count_le(&self, i: usize, j: usize, x: f64, y: f64) -> usize {
        let ci = self.columns[i].values();
        let cj = self.columns[j].values();
        (0..self.rows).filter(|&r| ci[r] <= x && cj[r] <= y).count()
    }

    /// Bivariate empirical CDF of markers `i` and `j` at `(x, y)`.
    ///
    /// For `i == j` this collapses to the univariate ECDF at `min(x, y)`.
    pub fn joint_ecdf(&self, i: usize, j: usize, x: f64, y: f64) -> Result<f64, CoreError> {
        if i >= self.markers() {
            return Err(CoreError::MarkerIndex { index: i, markers: self.markers() });
        }
        if j >= self.markers() {
            return Err(CoreError::MarkerIndex { index: j, markers: self.markers() });
        }
        if x.is_nan() || y.is_nan() {
            return Err(CoreError::NonFinite { context: "joint ecdf argument" });
        }
        Ok(self.joint_count_le(i, j, x, y) as f64 / self.rows as f64)
    }
}
