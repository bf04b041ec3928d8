//! Bootstrap multiple contrast tests with simultaneous confidence intervals.
//!
//! The test statistic studentizes each contrast of the marker estimates; its
//! null distribution is calibrated by resampling both groups with replacement
//! and re-studentizing every replicate. Decisions, adjusted p-values, and
//! intervals all share one equicoordinate critical value, so the three ways
//! of reading a result never disagree.

use crate::contrasts::ContrastMatrix;
use crate::covariance::estimate_covariance;
use crate::empdist::order_index;
use crate::error::CoreError;
use crate::estimator::{estimate_pauc, DiagnosticSample, TrimSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Variances below this are reported as degenerate and clamped to it before
/// entering a denominator.
pub const VARIANCE_FLOOR: f64 = 1e-12;

/// Fewest bootstrap replicates accepted by [`run_mct`].
pub const MIN_BOOTSTRAP_REPS: usize = 100;

fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Addressable random stream: identical `(seed, stream)` pairs produce
/// identical draw sequences on every platform and worker count.
///
/// Streams form a tree. `child(index)` folds the current address into a new
/// seed, so a replicate's draws depend only on the path of indices leading to
/// it, never on scheduling order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
    stream: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self { seed, stream: 0 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn child(&self, index: u64) -> Self {
        Self { seed: mix64(self.seed.wrapping_add(mix64(self.stream))), stream: index }
    }

    pub fn rng(&self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Studentized contrast statistics on the observed data.
#[derive(Debug, Clone)]
pub struct TestStatistic {
    /// Marker-level estimates the contrasts were applied to.
    pub theta: Vec<f64>,
    /// Contrast images of the estimate.
    pub estimates: Vec<f64>,
    /// Contrast variances after flooring.
    pub variances: Vec<f64>,
    /// Studentized statistics.
    pub statistics: Vec<f64>,
    /// Rows whose variance hit the floor.
    pub degenerate: Vec<bool>,
}

/// One test per contrast row, with shared bootstrap calibration.
#[derive(Debug, Clone, Serialize)]
pub struct MctResult {
    pub labels: Vec<String>,
    /// Marker-level estimates.
    pub theta: Vec<f64>,
    /// Contrast images of the estimate.
    pub estimates: Vec<f64>,
    /// Studentized statistics.
    pub statistics: Vec<f64>,
    /// Equicoordinate bootstrap quantile at level `1 - delta`.
    pub critical_value: f64,
    pub decisions: Vec<bool>,
    pub adjusted_p: Vec<f64>,
    pub global_p: f64,
    /// Simultaneous confidence intervals for the contrast images.
    pub intervals: Vec<(f64, f64)>,
    pub delta: f64,
    pub bootstrap_reps_used: usize,
    /// Rows whose observed variance was floored.
    pub degenerate_flags: Vec<bool>,
    /// Replicates with at least one floored variance.
    pub degenerate_reps: usize,
    pub warnings: Vec<String>,
}

impl MctResult {
    /// The global test rejects when any single hypothesis does.
    pub fn global_rejection(&self) -> bool {
        self.decisions.iter().any(|&d| d)
    }
}

fn contrast_spread(
    contrast: &ContrastMatrix,
    data: &DiagnosticSample,
    trim: TrimSpec,
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>, Vec<bool>), CoreError> {
    let est = estimate_pauc(data, trim)?;
    let cov = estimate_covariance(data, trim, &est, true)?;
    let estimates = contrast.apply(&est.theta)?;
    let mut variances = Vec::with_capacity(contrast.len());
    let mut degenerate = Vec::with_capacity(contrast.len());
    for row in contrast.rows() {
        let v = cov.quadratic_form(row)?;
        degenerate.push(v < VARIANCE_FLOOR);
        variances.push(v.max(VARIANCE_FLOOR));
    }
    Ok((est.theta, estimates, variances, degenerate))
}

/// Studentized statistics `sqrt(a + b) * <c, theta> / sqrt(c' Sigma c)` for
/// every contrast row, with floored denominators flagged.
pub fn test_statistic(
    data: &DiagnosticSample,
    contrast: &ContrastMatrix,
    trim: TrimSpec,
) -> Result<TestStatistic, CoreError> {
    let (theta, estimates, variances, degenerate) = contrast_spread(contrast, data, trim)?;
    let root_n = ((data.alpha_n() + data.beta_n()) as f64).sqrt();
    let statistics = estimates
        .iter()
        .zip(&variances)
        .map(|(&e, &v)| root_n * e / v.sqrt())
        .collect();
    Ok(TestStatistic { theta, estimates, variances, statistics, degenerate })
}

/// Draws whole rows with replacement, each group from itself, nondiseased
/// rows first. Cross-marker dependence within a subject is preserved.
pub fn bootstrap_resample(data: &DiagnosticSample, rng: &mut ChaCha12Rng) -> DiagnosticSample {
    let alpha_n = data.alpha_n();
    let beta_n = data.beta_n();
    let xi_rows: Vec<usize> = (0..alpha_n).map(|_| rng.gen_range(0..alpha_n)).collect();
    let eta_rows: Vec<usize> = (0..beta_n).map(|_| rng.gen_range(0..beta_n)).collect();
    DiagnosticSample::new(
        data.nondiseased().select_rows(&xi_rows),
        data.diseased().select_rows(&eta_rows),
    )
    .expect("a resample keeps the shape of its source")
}

/// Bootstrap draws of the maximum statistic.
#[derive(Debug, Clone)]
pub struct BootstrapDraws {
    /// `max_k |S*_k|` per replicate, in replicate order.
    pub max_statistics: Vec<f64>,
    /// Replicates that needed the variance floor in at least one row.
    pub degenerate_reps: usize,
}

/// Runs `reps` studentized bootstrap replicates and records each one's
/// maximum absolute statistic, centered at the observed contrast estimates.
///
/// Replicate `b` draws from `stream.child(b)`, so results are identical for
/// any worker count.
pub fn bootstrap_max_statistics(
    data: &DiagnosticSample,
    contrast: &ContrastMatrix,
    trim: TrimSpec,
    reps: usize,
    stream: RngStream,
) -> Result<BootstrapDraws, CoreError> {
    if reps < MIN_BOOTSTRAP_REPS {
        return Err(CoreError::BootstrapTooSmall { got: reps, min: MIN_BOOTSTRAP_REPS });
    }
    let observed = estimate_pauc(data, trim)?;
    let center = contrast.apply(&observed.theta)?;
    let root_n = ((data.alpha_n() + data.beta_n()) as f64).sqrt();

    let draws: Vec<(f64, bool)> = (0..reps)
        .into_par_iter()
        .map(|b| -> Result<(f64, bool), CoreError> {
            let mut rng = stream.child(b as u64).rng();
            let resample = bootstrap_resample(data, &mut rng);
            let (_, estimates, variances, degenerate) =
                contrast_spread(contrast, &resample, trim)?;
            let mut max_stat = 0.0f64;
            for ((&e, &v), &c) in estimates.iter().zip(&variances).zip(&center) {
                max_stat = max_stat.max((root_n * (e - c) / v.sqrt()).abs());
            }
            Ok((max_stat, degenerate.iter().any(|&d| d)))
        })
        .collect::<Result<_, _>>()?;

    let degenerate_reps = draws.iter().filter(|&&(_, d)| d).count();
    Ok(BootstrapDraws {
        max_statistics: draws.into_iter().map(|(m, _)| m).collect(),
        degenerate_reps,
    })
}

/// The `ceil(B * level)`-th order statistic, the same generalized-inverse
/// convention the empirical distributions use.
pub fn equicoordinate_quantile(values: &[f64], level: f64) -> Result<f64, CoreError> {
    if values.is_empty() {
        return Err(CoreError::EmptySample);
    }
    if !level.is_finite() || level <= 0.0 || level > 1.0 {
        return Err(CoreError::InvalidLevel { value: level });
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(CoreError::NonFinite { context: "bootstrap statistic" });
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(sorted[order_index(sorted.len(), level) - 1])
}

fn exceedance_fraction(max_statistics: &[f64], threshold: f64) -> f64 {
    let hits = max_statistics.iter().filter(|&&m| m >= threshold).count();
    hits as f64 / max_statistics.len() as f64
}

/// Full multiple contrast test: statistics, bootstrap critical value,
/// decisions, adjusted p-values, and simultaneous intervals.
///
/// Adjusted p-values count replicates with `max_stat >= |T_i|`, which makes
/// `adjusted_p <= delta`, `|T_i| > critical_value`, and `0` outside the
/// interval three readings of the same comparison.
pub fn run_mct(
    data: &DiagnosticSample,
    contrast: &ContrastMatrix,
    trim: TrimSpec,
    delta: f64,
    bootstrap_reps: usize,
    stream: RngStream,
) -> Result<MctResult, CoreError> {
    if !delta.is_finite() || delta <= 0.0 || delta >= 1.0 {
        return Err(CoreError::InvalidDelta { value: delta });
    }
    let observed = test_statistic(data, contrast, trim)?;
    let draws = bootstrap_max_statistics(data, contrast, trim, bootstrap_reps, stream)?;
    let critical_value = equicoordinate_quantile(&draws.max_statistics, 1.0 - delta)?;

    let decisions: Vec<bool> =
        observed.statistics.iter().map(|&t| t.abs() > critical_value).collect();
    let adjusted_p: Vec<f64> = observed
        .statistics
        .iter()
        .map(|&t| exceedance_fraction(&draws.max_statistics, t.abs()))
        .collect();
    let max_abs = observed.statistics.iter().fold(0.0f64, |m, &t| m.max(t.abs()));
    let global_p = exceedance_fraction(&draws.max_statistics, max_abs);

    let root_n = ((data.alpha_n() + data.beta_n()) as f64).sqrt();
    let intervals: Vec<(f64, f64)> = observed
        .estimates
        .iter()
        .zip(&observed.variances)
        .map(|(&e, &v)| {
            let half = critical_value * v.sqrt() / root_n;
            (e - half, e + half)
        })
        .collect();

    let mut warnings = Vec::new();
    if draws.degenerate_reps * 100 > bootstrap_reps {
        warnings.push(format!(
            "{} of {} bootstrap replicates had a floored variance; the window may be too narrow for this sample size",
            draws.degenerate_reps, bootstrap_reps
        ));
    }

    Ok(MctResult {
        labels: contrast.labels().to_vec(),
        theta: observed.theta,
        estimates: observed.estimates,
        statistics: observed.statistics,
        critical_value,
        decisions,
        adjusted_p,
        global_p,
        intervals,
        delta,
        bootstrap_reps_used: bootstrap_reps,
        degenerate_flags: observed.degenerate,
        degenerate_reps: draws.degenerate_reps,
        warnings,
    })
}

/// Step-down Holm adjustment with the usual monotonicity repair, capped at 1.
pub fn holm_adjust(p_values: &[f64]) -> Result<Vec<f64>, CoreError> {
    for &p in p_values {
        if !(0.0..=1.0).contains(&p) {
            return Err(CoreError::InvalidProbability { value: p });
        }
    }
    let m = p_values.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| p_values[i].partial_cmp(&p_values[j]).unwrap());
    let mut adjusted = vec![0.0; m];
    let mut running = 0.0f64;
    for (rank, &idx) in order.iter().enumerate() {
        running = running.max(((m - rank) as f64 * p_values[idx]).min(1.0));
        adjusted[idx] = running;
    }
    Ok(adjusted)
}
