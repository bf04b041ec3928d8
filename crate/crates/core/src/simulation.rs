//! Gaussian-copula scenario engine for type-I error and power experiments.
//!
//! A scenario couples the marker panel of both groups through one Gaussian
//! copula with a Spearman target correlation, pushes each coordinate through
//! a parametric marginal, and repeatedly runs the multiple contrast test on
//! fresh samples. Effect sizes are dialed in by relocating one diseased
//! marginal until the contrast image of the true curve hits a target norm.

use crate::contrasts::ContrastMatrix;
use crate::error::CoreError;
use crate::estimator::{true_pauc, DiagnosticSample, MarginalSpec, TrimSpec};
use crate::empdist::PairedSample;
use crate::inference::{run_mct, RngStream};
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::{Duration, Instant};

const TRUE_PAUC_RESOLUTION: usize = 20_000;

/// Full description of one simulation experiment: marginals for both groups,
/// the joint Spearman correlation of all `2 * kappa` coordinates (nondiseased
/// markers first), the balanced per-group sample size, and the test setup.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawScenario", into = "RawScenario")]
pub struct ScenarioSpec {
    marginals_nondiseased: Vec<MarginalSpec>,
    marginals_diseased: Vec<MarginalSpec>,
    spearman: Vec<Vec<f64>>,
    group_size: usize,
    trim: TrimSpec,
    contrast: ContrastMatrix,
    delta: f64,
    bootstrap_reps: usize,
    sim_runs: usize,
}

#[derive(Serialize, Deserialize, Clone)]
struct RawScenario {
    marginals_nondiseased: Vec<MarginalSpec>,
    marginals_diseased: Vec<MarginalSpec>,
    spearman: Vec<Vec<f64>>,
    group_size: usize,
    trim: TrimSpec,
    contrast: ContrastMatrix,
    delta: f64,
    bootstrap_reps: usize,
    sim_runs: usize,
}

impl TryFrom<RawScenario> for ScenarioSpec {
    type Error = CoreError;

    fn try_from(raw: RawScenario) -> Result<Self, CoreError> {
        ScenarioSpec::new(
            raw.marginals_nondiseased,
            raw.marginals_diseased,
            raw.spearman,
            raw.group_size,
            raw.trim,
            raw.contrast,
            raw.delta,
            raw.bootstrap_reps,
            raw.sim_runs,
        )
    }
}

impl From<ScenarioSpec> for RawScenario {
    fn from(s: ScenarioSpec) -> Self {
        RawScenario {
            marginals_nondiseased: s.marginals_nondiseased,
            marginals_diseased: s.marginals_diseased,
            spearman: s.spearman,
            group_size: s.group_size,
            trim: s.trim,
            contrast: s.contrast,
            delta: s.delta,
            bootstrap_reps: s.bootstrap_reps,
            sim_runs: s.sim_runs,
        }
    }
}

impl ScenarioSpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        marginals_nondiseased: Vec<MarginalSpec>,
        marginals_diseased: Vec<MarginalSpec>,
        spearman: Vec<Vec<f64>>,
        group_size: usize,
        trim: TrimSpec,
        contrast: ContrastMatrix,
        delta: f64,
        bootstrap_reps: usize,
        sim_runs: usize,
    ) -> Result<Self, CoreError> {
        let kappa = marginals_nondiseased.len();
        if kappa == 0 {
            return Err(CoreError::InvalidScenario { reason: "no markers".into() });
        }
        if marginals_diseased.len() != kappa {
            return Err(CoreError::MarkerCountMismatch {
                nondiseased: kappa,
                diseased: marginals_diseased.len(),
            });
        }
        for m in marginals_nondiseased.iter().chain(&marginals_diseased) {
            m.validate()?;
        }
        if spearman.len() != 2 * kappa {
            return Err(CoreError::InvalidScenario {
                reason: format!(
                    "correlation matrix must have dimension {} for {kappa} markers, got {}",
                    2 * kappa,
                    spearman.len()
                ),
            });
        }
        spearman_to_pearson(&spearman)?;
        if contrast.markers() != kappa {
            return Err(CoreError::ContrastWidthMismatch {
                contrast: contrast.markers(),
                markers: kappa,
            });
        }
        if group_size < 2 {
            return Err(CoreError::InvalidScenario {
                reason: format!("group size {group_size} too small, need at least 2"),
            });
        }
        if !delta.is_finite() || delta <= 0.0 || delta >= 1.0 {
            return Err(CoreError::InvalidDelta { value: delta });
        }
        if bootstrap_reps < crate::inference::MIN_BOOTSTRAP_REPS {
            return Err(CoreError::BootstrapTooSmall {
                got: bootstrap_reps,
                min: crate::inference::MIN_BOOTSTRAP_REPS,
            });
        }
        if sim_runs == 0 {
            return Err(CoreError::InvalidScenario { reason: "needs at least 1 run".into() });
        }
        Ok(Self {
            marginals_nondiseased,
            marginals_diseased,
            spearman,
            group_size,
            trim,
            contrast,
            delta,
            bootstrap_reps,
            sim_runs,
        })
    }

    pub fn markers(&self) -> usize {
        self.marginals_nondiseased.len()
    }

    pub fn nondiseased_marginals(&self) -> &[MarginalSpec] {
        &self.marginals_nondiseased
    }

    pub fn diseased_marginals(&self) -> &[MarginalSpec] {
        &self.marginals_diseased
    }

    pub fn spearman(&self) -> &[Vec<f64>] {
        &self.spearman
    }

    pub fn group_size(&self) -> usize {
        self.group_size
    }

    pub fn trim(&self) -> TrimSpec {
        self.trim
    }

    pub fn contrast(&self) -> &ContrastMatrix {
        &self.contrast
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn bootstrap_reps(&self) -> usize {
        self.bootstrap_reps
    }

    pub fn sim_runs(&self) -> usize {
        self.sim_runs
    }

    pub fn with_trim(&self, trim: TrimSpec) -> Self {
        Self { trim, ..self.clone() }
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self, CoreError> {
        if !delta.is_finite() || delta <= 0.0 || delta >= 1.0 {
            return Err(CoreError::InvalidDelta { value: delta });
        }
        Ok(Self { delta, ..self.clone() })
    }

    pub fn with_group_size(&self, group_size: usize) -> Result<Self, CoreError> {
        if group_size < 2 {
            return Err(CoreError::InvalidScenario {
                reason: format!("group size {group_size} too small, need at least 2"),
            });
        }
        Ok(Self { group_size, ..self.clone() })
    }

    pub fn with_sim_runs(&self, sim_runs: usize) -> Result<Self, CoreError> {
        if sim_runs == 0 {
            return Err(CoreError::InvalidScenario { reason: "needs at least 1 run".into() });
        }
        Ok(Self { sim_runs, ..self.clone() })
    }

    pub fn with_bootstrap_reps(&self, bootstrap_reps: usize) -> Result<Self, CoreError> {
        if bootstrap_reps < crate::inference::MIN_BOOTSTRAP_REPS {
            return Err(CoreError::BootstrapTooSmall {
                got: bootstrap_reps,
                min: crate::inference::MIN_BOOTSTRAP_REPS,
            });
        }
        Ok(Self { bootstrap_reps, ..self.clone() })
    }

    /// Relocates one diseased marginal, as produced by [`calibrate_effect`].
    pub fn with_diseased_mu(&self, marker: usize, mu: f64) -> Result<Self, CoreError> {
        if marker >= self.markers() {
            return Err(CoreError::MarkerIndex { index: marker, markers: self.markers() });
        }
        let mut next = self.clone();
        next.marginals_diseased[marker] = next.marginals_diseased[marker].with_mu(mu);
        next.marginals_diseased[marker].validate()?;
        Ok(next)
    }
}

/// Pearson correlation matrix matching a Spearman target under the Gaussian
/// copula, with the repair record.
#[derive(Debug, Clone)]
pub struct PearsonConversion {
    pub matrix: Vec<Vec<f64>>,
    /// Whether the clipping repair ran.
    pub repaired: bool,
    /// Smallest eigenvalue of the converted matrix before any repair.
    pub min_eigenvalue: f64,
}

/// Elementwise `rho = 2 sin(pi * rho_s / 6)`, exact for Gaussian copulas.
/// Unit and zero correlations map exactly. If the converted matrix is not
/// positive semidefinite beyond rounding (smallest eigenvalue below -1e-10),
/// eigenvalues are clipped at zero and the diagonal renormalized, and the
/// repair is reported.
pub fn spearman_to_pearson(spearman: &[Vec<f64>]) -> Result<PearsonConversion, CoreError> {
    let d = spearman.len();
    if d == 0 {
        return Err(CoreError::InvalidCorrelation { reason: "is empty".into() });
    }
    for (i, row) in spearman.iter().enumerate() {
        if row.len() != d {
            return Err(CoreError::InvalidCorrelation {
                reason: format!("row {} has width {}, expected {d}", i + 1, row.len()),
            });
        }
        for (j, &v) in row.iter().enumerate() {
            if !v.is_finite() || v.abs() > 1.0 {
                return Err(CoreError::InvalidCorrelation {
                    reason: format!("entry ({}, {}) = {v} outside [-1, 1]", i + 1, j + 1),
                });
            }
            if (v - spearman[j][i]).abs() > 1e-12 {
                return Err(CoreError::InvalidCorrelation {
                    reason: format!("is not symmetric at ({}, {})", i + 1, j + 1),
                });
            }
        }
        if (row[i] - 1.0).abs() > 1e-12 {
            return Err(CoreError::InvalidCorrelation {
                reason: format!("diagonal entry {} is {}, expected 1", i + 1, row[i]),
            });
        }
    }

    let convert = |v: f64| -> f64 {
        if v == 0.0 || v == 1.0 || v == -1.0 {
            v
        } else {
            2.0 * (std::f64::consts::PI * v / 6.0).sin()
        }
    };
    let mut matrix = vec![vec![0.0; d]; d];
    for i in 0..d {
        matrix[i][i] = 1.0;
        for j in (i + 1)..d {
            let v = convert(spearman[i][j]);
            matrix[i][j] = v;
            matrix[j][i] = v;
        }
    }

    let m = DMatrix::from_fn(d, d, |i, j| matrix[i][j]);
    let eigen = m.symmetric_eigen();
    let min_eigenvalue = eigen.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut repaired = false;
    if min_eigenvalue < -1e-10 {
        repaired = true;
        let clipped = DMatrix::from_diagonal(&eigen.eigenvalues.map(|v| v.max(0.0)));
        let rebuilt = &eigen.eigenvectors * clipped * eigen.eigenvectors.transpose();
        let mut scale = vec![0.0; d];
        for (i, s) in scale.iter_mut().enumerate() {
            let v = rebuilt[(i, i)];
            if v <= 0.0 {
                return Err(CoreError::InvalidCorrelation {
                    reason: format!("is degenerate after repair at marker {}", i + 1),
                });
            }
            *s = v.sqrt();
        }
        for i in 0..d {
            matrix[i][i] = 1.0;
            for j in (i + 1)..d {
                let v = rebuilt[(i, j)] / (scale[i] * scale[j]);
                matrix[i][j] = v;
                matrix[j][i] = v;
            }
        }
    }
    Ok(PearsonConversion { matrix, repaired, min_eigenvalue })
}

/// Square root factor `L` with `L L' = pearson`: Cholesky when positive
/// definite, an eigenvalue square root otherwise. Coordinates tied by a unit
/// correlation share their factor row exactly, so perfect dependence survives
/// floating point.
fn factor_correlation(pearson: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, CoreError> {
    let d = pearson.len();
    let m = DMatrix::from_fn(d, d, |i, j| pearson[i][j]);
    let factor = match m.clone().cholesky() {
        Some(ch) => ch.l(),
        None => {
            let eigen = m.symmetric_eigen();
            let min = eigen.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
            if min < -1e-8 {
                return Err(CoreError::FactorizationFailed);
            }
            let root = DMatrix::from_diagonal(&eigen.eigenvalues.map(|v| v.max(0.0).sqrt()));
            eigen.eigenvectors * root
        }
    };
    let mut rows: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| factor[(i, j)]).collect()).collect();
    for j in 1..d {
        for i in 0..j {
            if pearson[i][j] == 1.0 {
                rows[j] = rows[i].clone();
                break;
            }
            if pearson[i][j] == -1.0 {
                rows[j] = rows[i].iter().map(|v| -v).collect();
                break;
            }
        }
    }
    Ok(rows)
}

struct Sampler {
    factor: Vec<Vec<f64>>,
    nondiseased: Vec<MarginalSpec>,
    diseased: Vec<MarginalSpec>,
    group_size: usize,
}

impl Sampler {
    fn new(spec: &ScenarioSpec) -> Result<Self, CoreError> {
        let conversion = spearman_to_pearson(&spec.spearman)?;
        Ok(Self {
            factor: factor_correlation(&conversion.matrix)?,
            nondiseased: spec.marginals_nondiseased.clone(),
            diseased: spec.marginals_diseased.clone(),
            group_size: spec.group_size,
        })
    }

    fn draw(&self, rng: &mut ChaCha12Rng) -> Result<DiagnosticSample, CoreError> {
        let kappa = self.nondiseased.len();
        let dim = 2 * kappa;
        let mut xi_cols: Vec<Vec<f64>> =
            (0..kappa).map(|_| Vec::with_capacity(self.group_size)).collect();
        let mut eta_cols: Vec<Vec<f64>> =
            (0..kappa).map(|_| Vec::with_capacity(self.group_size)).collect();
        let mut w = vec![0.0; dim];
        for _ in 0..self.group_size {
            for wi in w.iter_mut() {
                *wi = rng.sample(StandardNormal);
            }
            for i in 0..kappa {
                let z: f64 = self.factor[i].iter().zip(&w).map(|(l, x)| l * x).sum();
                xi_cols[i].push(self.nondiseased[i].from_std_normal(z));
                let z: f64 =
                    self.factor[kappa + i].iter().zip(&w).map(|(l, x)| l * x).sum();
                eta_cols[i].push(self.diseased[i].from_std_normal(z));
            }
        }
        DiagnosticSample::new(PairedSample::new(xi_cols)?, PairedSample::new(eta_cols)?)
    }
}

/// One balanced draw from the scenario's copula: subject `r` of each group
/// comes from the same `2 * kappa`-dimensional Gaussian vector, mapped
/// through the marginals.
pub fn sample_scenario(
    spec: &ScenarioSpec,
    rng: &mut ChaCha12Rng,
) -> Result<DiagnosticSample, CoreError> {
    Sampler::new(spec)?.draw(rng)
}

/// Outcome of [`calibrate_effect`].
#[derive(Debug, Clone, Serialize)]
pub struct CalibratedEffect {
    /// Location parameter for the tunable diseased marginal.
    pub mu: f64,
    /// The effect norm that was targeted.
    pub lambda: f64,
    /// True marker curves under `mu`.
    pub theta: Vec<f64>,
    /// Contrast image of `theta`; its Euclidean norm equals `lambda` up to
    /// the calibration tolerance.
    pub contrast_image: Vec<f64>,
    /// Realized unit direction of the contrast image, empty when
    /// `lambda == 0`.
    pub direction: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Finds `mu` for the designated diseased marginal such that the contrast
/// image of the true curves has Euclidean norm `target_lambda`, within
/// `1e-3` in the sup norm of `C' theta - lambda v`.
///
/// Only one curve moves with `mu`, so the image travels along a line; the
/// closed-form target for that curve is then solved by bisection, which is
/// valid because a location shift moves the curve monotonically. When
/// `direction_check` is given (and `lambda > 0`), the realized direction
/// must match it within an angle of `1e-2`, up to sign.
pub fn calibrate_effect(
    spec: &ScenarioSpec,
    target_lambda: f64,
    tunable: usize,
    direction_check: Option<&[f64]>,
) -> Result<CalibratedEffect, CoreError> {
    if !target_lambda.is_finite() || target_lambda < 0.0 {
        return Err(CoreError::CalibrationFailed {
            reason: format!("target effect norm {target_lambda} must be nonnegative"),
        });
    }
    let kappa = spec.markers();
    if tunable >= kappa {
        return Err(CoreError::MarkerIndex { index: tunable, markers: kappa });
    }

    let mut theta = vec![0.0; kappa];
    for i in 0..kappa {
        if i != tunable {
            theta[i] = true_pauc(
                &spec.marginals_nondiseased[i],
                &spec.marginals_diseased[i],
                spec.trim,
                TRUE_PAUC_RESOLUTION,
            )?;
        }
    }
    let fixed_image = spec.contrast.apply(&theta)?;
    let col: Vec<f64> = spec.contrast.rows().iter().map(|row| row[tunable]).collect();
    let col_norm2 = dot(&col, &col);
    if col_norm2 == 0.0 {
        return Err(CoreError::CalibrationFailed {
            reason: format!("the contrast never involves marker {}", tunable + 1),
        });
    }

    // The image c0 + t * col is closest to the origin at t_bar; from there
    // the attainable norms grow on both branches, and we take the upper one.
    let t_bar = -dot(&fixed_image, &col) / col_norm2;
    let resid2 = (dot(&fixed_image, &fixed_image) - t_bar * t_bar * col_norm2).max(0.0);
    let gap2 = target_lambda * target_lambda - resid2;
    if gap2 < -1e-9 {
        return Err(CoreError::CalibrationFailed {
            reason: format!(
                "the smallest attainable effect norm is {:.6}, above the target {target_lambda}",
                resid2.sqrt()
            ),
        });
    }
    let t_star = t_bar + gap2.max(0.0).sqrt() / col_norm2.sqrt();

    let f_tun = spec.marginals_nondiseased[tunable];
    let g_tun = spec.marginals_diseased[tunable];
    let theta_at = |mu: f64| -> Result<f64, CoreError> {
        true_pauc(&f_tun, &g_tun.with_mu(mu), spec.trim, TRUE_PAUC_RESOLUTION)
    };

    let mut lo = g_tun.mu() - 1.0;
    let mut hi = g_tun.mu() + 1.0;
    let mut step = 1.0;
    while theta_at(lo)? > t_star {
        step *= 2.0;
        lo -= step;
        if lo < -70.0 {
            return Err(CoreError::CalibrationFailed {
                reason: format!("no location below {lo:.1} reaches the curve target {t_star:.6}"),
            });
        }
    }
    step = 1.0;
    while theta_at(hi)? < t_star {
        step *= 2.0;
        hi += step;
        if hi > 70.0 {
            return Err(CoreError::CalibrationFailed {
                reason: format!("no location up to {hi:.1} reaches the curve target {t_star:.6}"),
            });
        }
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if theta_at(mid)? < t_star {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    let mu = 0.5 * (lo + hi);

    theta[tunable] = theta_at(mu)?;
    let contrast_image = spec.contrast.apply(&theta)?;
    let norm = dot(&contrast_image, &contrast_image).sqrt();
    let worst = if target_lambda == 0.0 {
        contrast_image.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    } else {
        contrast_image
            .iter()
            .map(|&g| (g - target_lambda * g / norm).abs())
            .fold(0.0f64, f64::max)
    };
    if worst >= 1e-3 {
        return Err(CoreError::CalibrationFailed {
            reason: format!("calibrated image misses the target by {worst:.2e}"),
        });
    }

    let direction: Vec<f64> = if target_lambda == 0.0 {
        Vec::new()
    } else {
        contrast_image.iter().map(|&g| g / norm).collect()
    };
    if let Some(check) = direction_check {
        if target_lambda > 0.0 {
            if check.len() != direction.len() {
                return Err(CoreError::CalibrationFailed {
                    reason: format!(
                        "direction check has {} coordinates, expected {}",
                        check.len(),
                        direction.len()
                    ),
                });
            }
            let check_norm = dot(check, check).sqrt();
            if check_norm == 0.0 {
                return Err(CoreError::CalibrationFailed {
                    reason: "direction check is the zero vector".into(),
                });
            }
            let cosine = (dot(&direction, check) / check_norm).abs().min(1.0);
            let angle = cosine.acos();
            if angle > 1e-2 {
                return Err(CoreError::CalibrationFailed {
                    reason: format!(
                        "realized direction {:?} is {angle:.4} rad away from the requested one",
                        direction
                    ),
                });
            }
        }
    }

    Ok(CalibratedEffect { mu, lambda: target_lambda, theta, contrast_image, direction })
}

/// Aggregate of one simulation experiment.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    /// Fraction of runs where the global test rejected.
    pub rejection_rate: f64,
    /// Per-hypothesis rejection fractions, in contrast row order.
    pub per_hypothesis_rates: Vec<f64>,
    pub runs: usize,
    /// Binomial standard error of the rejection rate.
    pub mc_standard_error: f64,
    pub wall_time: Duration,
    pub seed: u64,
}

fn run_experiment(spec: &ScenarioSpec, stream: RngStream) -> Result<ExperimentReport, CoreError> {
    let sampler = Sampler::new(spec)?;
    let start = Instant::now();
    let outcomes: Vec<(bool, Vec<bool>)> = (0..spec.sim_runs)
        .into_par_iter()
        .map(|k| -> Result<(bool, Vec<bool>), CoreError> {
            let node = stream.child(k as u64);
            let mut rng = node.child(0).rng();
            let data = sampler.draw(&mut rng)?;
            let mct = run_mct(
                &data,
                &spec.contrast,
                spec.trim,
                spec.delta,
                spec.bootstrap_reps,
                node.child(1),
            )?;
            Ok((mct.global_rejection(), mct.decisions))
        })
        .collect::<Result<_, _>>()?;

    let runs = outcomes.len();
    let rejections = outcomes.iter().filter(|(global, _)| *global).count();
    let mut per = vec![0usize; spec.contrast.len()];
    for (_, decisions) in &outcomes {
        for (i, &d) in decisions.iter().enumerate() {
            if d {
                per[i] += 1;
            }
        }
    }
    let rate = rejections as f64 / runs as f64;
    Ok(ExperimentReport {
        rejection_rate: rate,
        per_hypothesis_rates: per.into_iter().map(|c| c as f64 / runs as f64).collect(),
        runs,
        mc_standard_error: (rate * (1.0 - rate) / runs as f64).sqrt(),
        wall_time: start.elapsed(),
        seed: stream.seed(),
    })
}

/// Runs the scenario as given; meant for specs whose marginals put every
/// contrast at zero, so the rejection rate estimates the type-I error.
pub fn run_type1_experiment(
    spec: &ScenarioSpec,
    stream: RngStream,
) -> Result<ExperimentReport, CoreError> {
    run_experiment(spec, stream)
}

/// Runs the scenario as given; meant for specs relocated by
/// [`calibrate_effect`], so the rejection rate estimates power. With a zero
/// effect this is the type-I experiment.
pub fn run_power_experiment(
    spec: &ScenarioSpec,
    stream: RngStream,
) -> Result<ExperimentReport, CoreError> {
    run_experiment(spec, stream)
}
