//! Joint covariance of the trimmed-area estimates.
//!
//! The estimator plugs empirical CDFs into the limit covariance of the
//! rescaled estimates `sqrt(alpha_n + beta_n) * (theta_hat - theta)`. For a
//! marker pair `(i, j)` it accumulates, over diseased observation pairs
//! inside the realized windows, the non-diseased joint-ECDF covariance
//! surplus, and symmetrically over non-diseased pairs the diseased surplus.
//! Same-marker lookups collapse the bivariate ECDF to the univariate ECDF at
//! the pointwise minimum.
//!
//! All double sums are reduced, by exchanging summation order, to per-subject
//! products of integer window counts. That keeps every intermediate exact, so
//! the result is bit-identical to a literal transcription of the double sums
//! evaluated in integer arithmetic, at any group sizes whose counts fit i64.
//! Lookup tables make the whole matrix O(markers^2 * n) after an
//! O(markers * n log n) setup.

use crate::empdist::{ExtReal, Sample};
use crate::error::CoreError;
use crate::estimator::{trim_indices, window_cuts, DiagnosticSample, PaucEstimate, TrimSpec};

/// Symmetric covariance matrix of the rescaled trimmed-area estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceEstimate {
    sigma: Vec<Vec<f64>>,
}

impl CovarianceEstimate {
    pub fn markers(&self) -> usize {
        self.sigma.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.sigma[i][j]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.sigma
    }

    /// Quadratic form `w' Sigma w`.
    pub fn quadratic_form(&self, weights: &[f64]) -> Result<f64, CoreError> {
        if weights.len() != self.markers() {
            return Err(CoreError::ContrastWidthMismatch {
                contrast: weights.len(),
                markers: self.markers(),
            });
        }
        let mut acc = 0.0;
        for (i, wi) in weights.iter().enumerate() {
            for (j, wj) in weights.iter().enumerate() {
                acc += wi * wj * self.sigma[i][j];
            }
        }
        Ok(acc)
    }
}

/// Per-marker integer lookup tables for one marker column.
struct ColumnTables {
    /// For each non-diseased subject r: diseased window values >= xi_r.
    a: Vec<i64>,
    /// For each diseased subject s: non-diseased window values >= eta_s.
    c: Vec<i64>,
    /// Sum over the diseased window of #{xi <= value}.
    s_eta: i64,
    /// Sum over the non-diseased window of #{eta <= value}.
    s_xi: i64,
}

fn in_window(lower: ExtReal, upper: ExtReal, x: f64) -> bool {
    lower.below(x) && upper.at_least(x)
}

fn count_at_least(sorted: &[f64], x: f64) -> i64 {
    (sorted.len() - sorted.partition_point(|&v| v < x)) as i64
}

fn column_tables(xi: &Sample, eta: &Sample, lower: ExtReal, upper: ExtReal) -> ColumnTables {
    // Window slices of the sorted columns stay sorted.
    let eta_window: Vec<f64> =
        eta.sorted().iter().copied().filter(|&y| in_window(lower, upper, y)).collect();
    let xi_window: Vec<f64> =
        xi.sorted().iter().copied().filter(|&x| in_window(lower, upper, x)).collect();
    let a = xi.values().iter().map(|&x| count_at_least(&eta_window, x)).collect();
    let c = eta.values().iter().map(|&y| count_at_least(&xi_window, y)).collect();
    let s_eta = eta_window.iter().map(|&y| xi.count_le(y) as i64).sum();
    let s_xi = xi_window.iter().map(|&x| eta.count_le(x) as i64).sum();
    ColumnTables { a, c, s_eta, s_xi }
}

/// Estimate the covariance matrix at the windows recorded in `cuts`.
///
/// `cuts` must come from the same data and trim (the realized windows are
/// revalidated). With `assume_independent_groups = false` the two groups are
/// treated as subject-paired: a mixed-group correction is subtracted, which
/// requires equal group sizes with rows aligned by subject.
pub fn estimate_covariance(
    data: &DiagnosticSample,
    trim: TrimSpec,
    cuts: &PaucEstimate,
    assume_independent_groups: bool,
) -> Result<CovarianceEstimate, CoreError> {
    let alpha_n = data.alpha_n();
    let beta_n = data.beta_n();
    let markers = data.markers();
    if cuts.markers() != markers || cuts.alpha_n != alpha_n || cuts.beta_n != beta_n {
        return Err(CoreError::EstimateShapeMismatch);
    }
    let idx = trim_indices(alpha_n, beta_n, trim);
    for i in 0..markers {
        let (lower, upper) =
            window_cuts(data.nondiseased().column(i)?, data.diseased().column(i)?, &idx);
        if cuts.lower_cuts[i] != lower || cuts.upper_cuts[i] != upper {
            return Err(CoreError::EstimateShapeMismatch);
        }
    }
    if !assume_independent_groups && alpha_n != beta_n {
        return Err(CoreError::UnpairedGroups { alpha: alpha_n, beta: beta_n });
    }

    let tables: Vec<ColumnTables> = (0..markers)
        .map(|i| {
            column_tables(
                data.nondiseased().column(i).unwrap(),
                data.diseased().column(i).unwrap(),
                cuts.lower_cuts[i],
                cuts.upper_cuts[i],
            )
        })
        .collect();

    let af = alpha_n as f64;
    let bf = beta_n as f64;
    let apb = af + bf;
    let mut sigma = vec![vec![0.0; markers]; markers];
    for i in 0..markers {
        for j in i..markers {
            let (ti, tj) = (&tables[i], &tables[j]);
            let aa: i64 = ti.a.iter().zip(&tj.a).map(|(&x, &y)| x * y).sum();
            let cc: i64 = ti.c.iter().zip(&tj.c).map(|(&x, &y)| x * y).sum();
            let n1 = alpha_n as i64 * aa - ti.s_eta * tj.s_eta;
            let n2 = beta_n as i64 * cc - ti.s_xi * tj.s_xi;
            let mut value =
                apb * n1 as f64 / (bf * bf * af * af * af) + apb * n2 as f64 / (af * af * bf * bf * bf);
            if !assume_independent_groups {
                let ac: i64 = ti.a.iter().zip(&tj.c).map(|(&x, &y)| x * y).sum();
                let ca: i64 = ti.c.iter().zip(&tj.a).map(|(&x, &y)| x * y).sum();
                let na = alpha_n as i64 * ac - ti.s_eta * tj.s_xi;
                let nb = alpha_n as i64 * ca - ti.s_xi * tj.s_eta;
                let nf = af;
                value -= 2.0 * (na as f64 + nb as f64) / (nf * nf * nf * nf);
            }
            sigma[i][j] = value;
            sigma[j][i] = value;
        }
    }
    Ok(CovarianceEstimate { sigma })
}
