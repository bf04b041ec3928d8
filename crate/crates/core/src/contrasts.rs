//! Contrast families for simultaneous marker comparisons.
//!
//! A contrast matrix holds one contrast vector per row; each row pairs with
//! a label used in reports. Rows must sum to zero, so every contrast is a
//! statement about marker differences.

use crate::error::CoreError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawContrast", into = "RawContrast")]
pub struct ContrastMatrix {
    rows: Vec<Vec<f64>>,
    labels: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone)]
struct RawContrast {
    rows: Vec<Vec<f64>>,
    labels: Vec<String>,
}

impl TryFrom<RawContrast> for ContrastMatrix {
    type Error = CoreError;

    fn try_from(raw: RawContrast) -> Result<Self, CoreError> {
        ContrastMatrix::custom(raw.rows, Some(raw.labels))
    }
}

impl From<ContrastMatrix> for RawContrast {
    fn from(c: ContrastMatrix) -> Self {
        RawContrast { rows: c.rows, labels: c.labels }
    }
}

impl ContrastMatrix {
    /// All pairwise differences, ordered lexicographically: row `(i, j)` with
    /// `i < j` carries `+1` at marker `i` and `-1` at marker `j`.
    pub fn tukey(markers: usize) -> Result<Self, CoreError> {
        if markers < 2 {
            return Err(CoreError::InvalidContrast { row: 0, reason: "needs at least 2 markers" });
        }
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..markers {
            for j in (i + 1)..markers {
                let mut row = vec![0.0; markers];
                row[i] = 1.0;
                row[j] = -1.0;
                rows.push(row);
                labels.push(format!("{}-{}", i + 1, j + 1));
            }
        }
        Ok(Self { rows, labels })
    }

    /// Each marker against a reference: `+1` at the marker, `-1` at the
    /// reference. `reference` is a zero-based column index.
    pub fn dunnett(markers: usize, reference: usize) -> Result<Self, CoreError> {
        if markers < 2 {
            return Err(CoreError::InvalidContrast { row: 0, reason: "needs at least 2 markers" });
        }
        if reference >= markers {
            return Err(CoreError::MarkerIndex { index: reference, markers });
        }
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for j in 0..markers {
            if j == reference {
                continue;
            }
            let mut row = vec![0.0; markers];
            row[j] = 1.0;
            row[reference] = -1.0;
            rows.push(row);
            labels.push(format!("{}-{}", j + 1, reference + 1));
        }
        Ok(Self { rows, labels })
    }

    /// Interaction contrasts of a crossed `a x b` layout: the Kronecker
    /// product of the two centering matrices `I - J/n`. Markers are cells in
    /// row-major order (factor A slow, factor B fast). The `a * b` rows are
    /// linearly dependent and are used as they are.
    pub fn interaction(a: usize, b: usize) -> Result<Self, CoreError> {
        if a < 2 || b < 2 {
            return Err(CoreError::InvalidInteraction { a, b });
        }
        let center = |n: usize, i: usize, j: usize| {
            (if i == j { 1.0 } else { 0.0 }) - 1.0 / n as f64
        };
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..a {
            for k in 0..b {
                let mut row = Vec::with_capacity(a * b);
                for j in 0..a {
                    for l in 0..b {
                        row.push(center(a, i, j) * center(b, k, l));
                    }
                }
                rows.push(row);
                labels.push(format!("cell({},{})", i + 1, k + 1));
            }
        }
        Ok(Self { rows, labels })
    }

    /// User-supplied contrasts. Every row must be the width of the marker
    /// panel, sum to zero, and contain a nonzero entry. Labels default to
    /// `c1, c2, ...`.
    pub fn custom(rows: Vec<Vec<f64>>, labels: Option<Vec<String>>) -> Result<Self, CoreError> {
        if rows.is_empty() {
            return Err(CoreError::InvalidContrast { row: 0, reason: "matrix has no rows" });
        }
        let width = rows[0].len();
        if width < 2 {
            return Err(CoreError::InvalidContrast { row: 1, reason: "needs at least 2 markers" });
        }
        for (k, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(CoreError::InvalidContrast { row: k + 1, reason: "has a different width" });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(CoreError::InvalidContrast { row: k + 1, reason: "has a non-finite entry" });
            }
            if row.iter().sum::<f64>().abs() > 1e-9 {
                return Err(CoreError::InvalidContrast { row: k + 1, reason: "does not sum to zero" });
            }
            if row.iter().all(|&v| v == 0.0) {
                return Err(CoreError::InvalidContrast { row: k + 1, reason: "is all zeros" });
            }
        }
        let labels = match labels {
            Some(l) => {
                if l.len() != rows.len() {
                    return Err(CoreError::InvalidContrast {
                        row: rows.len(),
                        reason: "label count does not match",
                    });
                }
                l
            }
            None => (1..=rows.len()).map(|k| format!("c{k}")).collect(),
        };
        Ok(Self { rows, labels })
    }

    /// Number of contrasts.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Width of every row, i.e. the expected marker count.
    pub fn markers(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.rows[k]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Contrast images `<c_k, theta>` for all rows.
    pub fn apply(&self, theta: &[f64]) -> Result<Vec<f64>, CoreError> {
        if theta.len() != self.markers() {
            return Err(CoreError::ContrastWidthMismatch {
                contrast: self.markers(),
                markers: theta.len(),
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|row| row.iter().zip(theta).map(|(c, t)| c * t).sum())
            .collect())
    }
}
