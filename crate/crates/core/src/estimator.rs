//! Trimmed ROC-area estimation.
//!
//! The target functional restricts the area under the ROC curve to the
//! clinically relevant corner: specificities above `1 - p` and sensitivities
//! below `1 - q`. The plug-in estimator integrates the diseased ECDF over a
//! data-driven window `(a, b]`, where `a` is the `(1-p)`-quantile of the
//! non-diseased sample and `b` the `(1-q)`-quantile of the diseased sample.
//! An algebraically equivalent trimmed two-sample rank sum
//! ([`estimate_pauc_trimmed_mw`]) serves as an independent cross-check; the
//! two routes must agree exactly on tie-free data.

use crate::empdist::{order_index, ExtReal, PairedSample, Sample};
use crate::error::CoreError;
use serde::{Deserialize, Serialize};
use statrs::function::erf;

/// Marker measurements for both diagnostic groups.
///
/// Columns are markers, rows are subjects; the two groups may have different
/// sizes but must share the marker layout.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticSample {
    nondiseased: PairedSample,
    diseased: PairedSample,
}

impl DiagnosticSample {
    pub fn new(nondiseased: PairedSample, diseased: PairedSample) -> Result<Self, CoreError> {
        if nondiseased.markers() != diseased.markers() {
            return Err(CoreError::MarkerCountMismatch {
                nondiseased: nondiseased.markers(),
                diseased: diseased.markers(),
            });
        }
        if nondiseased.len() < 2 {
            return Err(CoreError::GroupTooSmall { group: "non-diseased", size: nondiseased.len() });
        }
        if diseased.len() < 2 {
            return Err(CoreError::GroupTooSmall { group: "diseased", size: diseased.len() });
        }
        Ok(Self { nondiseased, diseased })
    }

    pub fn nondiseased(&self) -> &PairedSample {
        &self.nondiseased
    }

    pub fn diseased(&self) -> &PairedSample {
        &self.diseased
    }

    pub fn markers(&self) -> usize {
        self.nondiseased.markers()
    }

    /// Non-diseased group size.
    pub fn alpha_n(&self) -> usize {
        self.nondiseased.len()
    }

    /// Diseased group size.
    pub fn beta_n(&self) -> usize {
        self.diseased.len()
    }
}

/// Specificity/sensitivity trim `(p, q)`.
///
/// Admissible trims keep a nonempty corner: `0 < p <= 1` and `0 <= q < 1`.
/// `(1, 0)` recovers the total AUC.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "(f64, f64)", into = "(f64, f64)")]
pub struct TrimSpec {
    p: f64,
    q: f64,
}

impl TrimSpec {
    pub fn new(p: f64, q: f64) -> Result<Self, CoreError> {
        if !(p.is_finite() && q.is_finite() && p > 0.0 && p <= 1.0 && (0.0..1.0).contains(&q)) {
            return Err(CoreError::InvalidTrim { p, q });
        }
        Ok(Self { p, q })
    }

    /// Total-AUC trim `(1, 0)`.
    pub fn total() -> Self {
        Self { p: 1.0, q: 0.0 }
    }

    pub fn p(self) -> f64 {
        self.p
    }

    pub fn q(self) -> f64 {
        self.q
    }

    pub fn is_total(self) -> bool {
        self.p == 1.0 && self.q == 0.0
    }
}

impl TryFrom<(f64, f64)> for TrimSpec {
    type Error = CoreError;
    fn try_from(v: (f64, f64)) -> Result<Self, CoreError> {
        TrimSpec::new(v.0, v.1)
    }
}

impl From<TrimSpec> for (f64, f64) {
    fn from(t: TrimSpec) -> (f64, f64) {
        (t.p, t.q)
    }
}

impl std::fmt::Display for TrimSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// Per-marker trimmed-area estimates together with the realized windows.
#[derive(Debug, Clone, PartialEq)]
pub struct PaucEstimate {
    /// Estimated trimmed area per marker.
    pub theta: Vec<f64>,
    /// Lower window cut per marker (`-inf` when `p = 1`).
    pub lower_cuts: Vec<ExtReal>,
    /// Upper window cut per marker.
    pub upper_cuts: Vec<ExtReal>,
    /// Non-diseased group size.
    pub alpha_n: usize,
    /// Diseased group size.
    pub beta_n: usize,
}

impl PaucEstimate {
    pub fn markers(&self) -> usize {
        self.theta.len()
    }
}

/// Window indices shared by the two estimation routes.
///
/// `k_lo` is the order-statistic index of the lower cut (0 when `p = 1`,
/// meaning no lower trim) and `s_hi` the index of the upper cut.
pub(crate) struct TrimIndices {
    pub k_lo: usize,
    pub s_hi: usize,
}

pub(crate) fn trim_indices(alpha_n: usize, beta_n: usize, trim: TrimSpec) -> TrimIndices {
    let one_minus_p = 1.0 - trim.p();
    let k_lo = if one_minus_p == 0.0 { 0 } else { order_index(alpha_n, one_minus_p) };
    let s_hi = order_index(beta_n, 1.0 - trim.q());
    TrimIndices { k_lo, s_hi }
}

pub(crate) fn window_cuts(
    xi: &Sample,
    eta: &Sample,
    idx: &TrimIndices,
) -> (ExtReal, ExtReal) {
    let lower = if idx.k_lo == 0 {
        ExtReal::NegInf
    } else {
        ExtReal::Finite(xi.sorted()[idx.k_lo - 1])
    };
    let upper = ExtReal::Finite(eta.sorted()[idx.s_hi - 1]);
    (lower, upper)
}

fn pair_ratio(count: i64, alpha_n: usize, beta_n: usize) -> f64 {
    count as f64 / (alpha_n as f64 * beta_n as f64)
}

/// Plug-in estimator of the trimmed areas, one per marker.
///
/// Integrates the diseased ECDF over the realized window: with `a` and `b`
/// the window cuts, the estimate is the average over non-diseased values
/// `x` in `(a, b]` of `Ghat(b) - Ghat(x)`. The sum is accumulated in integer
/// counts so identical data give bit-identical results on every platform.
pub fn estimate_pauc(data: &DiagnosticSample, trim: TrimSpec) -> Result<PaucEstimate, CoreError> {
    let alpha_n = data.alpha_n();
    let beta_n = data.beta_n();
    let idx = trim_indices(alpha_n, beta_n, trim);
    let markers = data.markers();
    let mut theta = Vec::with_capacity(markers);
    let mut lower_cuts = Vec::with_capacity(markers);
    let mut upper_cuts = Vec::with_capacity(markers);
    for i in 0..markers {
        let xi = data.nondiseased().column(i)?;
        let eta = data.diseased().column(i)?;
        let (a, b) = window_cuts(xi, eta, &idx);
        let b_count = match b {
            ExtReal::Finite(v) => eta.count_le(v) as i64,
            ExtReal::PosInf => beta_n as i64,
            ExtReal::NegInf => 0,
        };
        let mut count: i64 = 0;
        for &x in xi.values() {
            if a.below(x) && b.at_least(x) {
                count += b_count - eta.count_le(x) as i64;
            }
        }
        theta.push(pair_ratio(count, alpha_n, beta_n));
        lower_cuts.push(a);
        upper_cuts.push(b);
    }
    Ok(PaucEstimate { theta, lower_cuts, upper_cuts, alpha_n, beta_n })
}

/// Trimmed two-sample rank-sum estimator.
///
/// Counts strictly ordered pairs between the upper tail of the non-diseased
/// order statistics and the lower tail of the diseased order statistics:
/// ranks `r > k_lo` against ranks `s <= s_hi`, divided by `alpha_n * beta_n`.
/// On tie-free data this equals [`estimate_pauc`] exactly.
pub fn estimate_pauc_trimmed_mw(
    data: &DiagnosticSample,
    trim: TrimSpec,
) -> Result<PaucEstimate, CoreError> {
    let alpha_n = data.alpha_n();
    let beta_n = data.beta_n();
    let idx = trim_indices(alpha_n, beta_n, trim);
    let markers = data.markers();
    let mut theta = Vec::with_capacity(markers);
    let mut lower_cuts = Vec::with_capacity(markers);
    let mut upper_cuts = Vec::with_capacity(markers);
    for i in 0..markers {
        let xi = data.nondiseased().column(i)?;
        let eta = data.diseased().column(i)?;
        let (a, b) = window_cuts(xi, eta, &idx);
        let s_hi = idx.s_hi as i64;
        let mut count: i64 = 0;
        for r in idx.k_lo..alpha_n {
            let x = xi.sorted()[r];
            // Among the s_hi smallest diseased values, those > x.
            count += s_hi - (eta.count_le(x) as i64).min(s_hi);
        }
        theta.push(pair_ratio(count, alpha_n, beta_n));
        lower_cuts.push(a);
        upper_cuts.push(b);
    }
    Ok(PaucEstimate { theta, lower_cuts, upper_cuts, alpha_n, beta_n })
}

pub(crate) fn std_normal_cdf(z: f64) -> f64 {
    0.5 * (1.0 + erf::erf(z / std::f64::consts::SQRT_2))
}

pub(crate) fn std_normal_quantile(u: f64) -> f64 {
    std::f64::consts::SQRT_2 * erf::erf_inv(2.0 * u - 1.0)
}

/// Parametric marker distribution: a strictly increasing transform of a
/// normal variable. Covers the three families used by the simulation designs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MarginalSpec {
    /// `N(mu, sigma^2)`.
    Normal { mu: f64, sigma: f64 },
    /// `exp(N(mu, sigma^2))`.
    LogNormal { mu: f64, sigma: f64 },
    /// `1 / (1 + exp(-N(mu, sigma^2)))`.
    LogitNormal { mu: f64, sigma: f64 },
}

impl MarginalSpec {
    pub fn normal(mu: f64, sigma: f64) -> Result<Self, CoreError> {
        Self::Normal { mu, sigma }.validated()
    }

    pub fn log_normal(mu: f64, sigma: f64) -> Result<Self, CoreError> {
        Self::LogNormal { mu, sigma }.validated()
    }

    pub fn logit_normal(mu: f64, sigma: f64) -> Result<Self, CoreError> {
        Self::LogitNormal { mu, sigma }.validated()
    }

    fn validated(self) -> Result<Self, CoreError> {
        let (mu, sigma) = self.params();
        if !mu.is_finite() || !sigma.is_finite() || sigma <= 0.0 {
            return Err(CoreError::InvalidScale { value: sigma });
        }
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        self.validated().map(|_| ())
    }

    fn params(&self) -> (f64, f64) {
        match *self {
            MarginalSpec::Normal { mu, sigma }
            | MarginalSpec::LogNormal { mu, sigma }
            | MarginalSpec::LogitNormal { mu, sigma } => (mu, sigma),
        }
    }

    /// Same family, new location parameter.
    pub fn with_mu(&self, mu: f64) -> Self {
        match *self {
            MarginalSpec::Normal { sigma, .. } => MarginalSpec::Normal { mu, sigma },
            MarginalSpec::LogNormal { sigma, .. } => MarginalSpec::LogNormal { mu, sigma },
            MarginalSpec::LogitNormal { sigma, .. } => MarginalSpec::LogitNormal { mu, sigma },
        }
    }

    pub fn mu(&self) -> f64 {
        self.params().0
    }

    pub fn cdf(&self, t: f64) -> f64 {
        let (mu, sigma) = self.params();
        let z = match *self {
            MarginalSpec::Normal { .. } => t,
            MarginalSpec::LogNormal { .. } => {
                if t <= 0.0 {
                    return 0.0;
                }
                t.ln()
            }
            MarginalSpec::LogitNormal { .. } => {
                if t <= 0.0 {
                    return 0.0;
                }
                if t >= 1.0 {
                    return 1.0;
                }
                (t / (1.0 - t)).ln()
            }
        };
        std_normal_cdf((z - mu) / sigma)
    }

    /// Inverse CDF. `u = 0` and `u = 1` map to the support endpoints
    /// (which may be infinite).
    pub fn quantile(&self, u: f64) -> f64 {
        let z = if u <= 0.0 {
            f64::NEG_INFINITY
        } else if u >= 1.0 {
            f64::INFINITY
        } else {
            std_normal_quantile(u)
        };
        self.from_std_normal(z)
    }

    /// Image of a standard-normal draw under the marginal's transform.
    pub fn from_std_normal(&self, z: f64) -> f64 {
        let (mu, sigma) = self.params();
        let latent = mu + sigma * z;
        match *self {
            MarginalSpec::Normal { .. } => latent,
            MarginalSpec::LogNormal { .. } => latent.exp(),
            MarginalSpec::LogitNormal { .. } => 1.0 / (1.0 + (-latent).exp()),
        }
    }
}

/// Population trimmed area for a non-diseased/diseased marginal pair.
///
/// Computed by substituting `v = F(t)`, which maps the window integral onto
/// `[1 - p, F(b)]` with integrand `(1 - q) - G(F^{-1}(v))`, and applying the
/// composite midpoint rule with `resolution` panels. The quadrature error is
/// bounded by a constant times `1 / resolution`.
pub fn true_pauc(
    f: &MarginalSpec,
    g: &MarginalSpec,
    trim: TrimSpec,
    resolution: usize,
) -> Result<f64, CoreError> {
    f.validate()?;
    g.validate()?;
    if resolution < 1000 {
        return Err(CoreError::ResolutionTooCoarse { got: resolution, min: 1000 });
    }
    let b = g.quantile(1.0 - trim.q());
    let lo = 1.0 - trim.p();
    let hi = f.cdf(b);
    if hi <= lo {
        return Ok(0.0);
    }
    let h = (hi - lo) / resolution as f64;
    let sens_cap = 1.0 - trim.q();
    let mut acc = 0.0;
    for k in 0..resolution {
        let v = lo + (k as f64 + 0.5) * h;
        acc += sens_cap - g.cdf(f.quantile(v));
    }
    Ok(acc * h)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn diag(xi: Vec<Vec<f64>>, eta: Vec<Vec<f64>>) -> DiagnosticSample {
        DiagnosticSample::new(PairedSample::new(xi).unwrap(), PairedSample::new(eta).unwrap())
            .unwrap()
    }

    #[test]
    fn trim_spec_admissibility() {
        assert!(TrimSpec::new(0.8, 0.6).is_ok());
        assert!(TrimSpec::new(1.0, 0.0).is_ok());
        assert!(TrimSpec::new(0.2, 0.0).is_ok());
        assert!(TrimSpec::new(1.0, 0.2).is_ok());
        assert!(TrimSpec::new(0.0, 0.4).is_err());
        assert!(TrimSpec::new(0.5, 1.0).is_err());
        assert!(TrimSpec::new(1.1, 0.0).is_err());
        assert!(TrimSpec::new(f64::NAN, 0.0).is_err());
        assert!(TrimSpec::new(0.5, -0.1).is_err());
        assert!(TrimSpec::total().is_total());
    }

    #[test]
    fn worked_small_example() {
        // alpha = beta = 5, trim (0.6, 0.4): ranks r in {3,4,5} against
        // s in {1,2,3}; strictly ordered pairs are (3, 3.5), (3, 4.5),
        // (4, 4.5), so theta = 3/25.
        let data = diag(
            vec![vec![1.0, 2.0, 3.0, 4.0, 5.0]],
            vec![vec![2.5, 3.5, 4.5, 5.5, 6.5]],
        );
        let trim = TrimSpec::new(0.6, 0.4).unwrap();
        let plug = estimate_pauc(&data, trim).unwrap();
        let rank = estimate_pauc_trimmed_mw(&data, trim).unwrap();
        assert_eq!(plug.theta, vec![0.12]);
        assert_eq!(rank.theta, vec![0.12]);
        assert_eq!(plug, rank);
        assert_eq!(plug.lower_cuts, vec![ExtReal::Finite(2.0)]);
        assert_eq!(plug.upper_cuts, vec![ExtReal::Finite(4.5)]);
    }

    #[test]
    fn total_trim_is_classical_rank_statistic() {
        let data = diag(
            vec![vec![0.3, 1.7, 0.9, 2.4]],
            vec![vec![1.1, 2.0, 0.1, 3.3, 2.8]],
        );
        let est = estimate_pauc(&data, TrimSpec::total()).unwrap();
        let mut pairs = 0;
        for &x in data.nondiseased().column(0).unwrap().values() {
            for &y in data.diseased().column(0).unwrap().values() {
                if x < y {
                    pairs += 1;
                }
            }
        }
        assert_eq!(est.theta[0], pairs as f64 / 20.0);
        assert_eq!(est.lower_cuts[0], ExtReal::NegInf);
        assert_eq!(est.upper_cuts[0], ExtReal::Finite(3.3));
    }

    #[test]
    fn window_devoid_of_mass_gives_zero() {
        // All non-diseased values above the upper cut.
        let data = diag(vec![vec![10.0, 11.0, 12.0]], vec![vec![1.0, 2.0, 3.0]]);
        let est = estimate_pauc(&data, TrimSpec::new(0.9, 0.1).unwrap()).unwrap();
        assert_eq!(est.theta, vec![0.0]);
    }

    // Independent brute-force oracle: enumerate ordered pairs between the
    // trimmed order-statistic ranges.
    fn oracle_pair_count(xi: &[f64], eta: &[f64], trim: TrimSpec) -> f64 {
        let mut xs = xi.to_vec();
        let mut ys = eta.to_vec();
        xs.sort_unstable_by(f64::total_cmp);
        ys.sort_unstable_by(f64::total_cmp);
        let a = xs.len();
        let b = ys.len();
        let k_lo = ((a as f64 * (1.0 - trim.p()) - 1e-9).ceil()).max(0.0) as usize;
        let s_hi = (((b as f64 * (1.0 - trim.q()) - 1e-9).ceil()).max(1.0) as usize).min(b);
        let mut count = 0i64;
        for r in k_lo..a {
            for s in 0..s_hi {
                if xs[r] < ys[s] {
                    count += 1;
                }
            }
        }
        count as f64 / (a as f64 * b as f64)
    }

    fn tie_free_groups() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        proptest::collection::btree_set(-4_000_000i64..4_000_000, 4..60).prop_map(|s| {
            let vals: Vec<f64> = s.into_iter().map(|v| v as f64 / 128.0).collect();
            let cut = vals.len() / 2;
            let mut xi = Vec::new();
            let mut eta = Vec::new();
            // Interleave so neither group is systematically larger.
            for (k, v) in vals.into_iter().enumerate() {
                if (k % 2 == 0) == (k < 2 * cut) && xi.len() < cut {
                    xi.push(v);
                } else {
                    eta.push(v);
                }
            }
            if xi.len() < 2 {
                xi.push(eta.pop().unwrap());
            }
            (xi, eta)
        })
    }

    fn admissible_trim() -> impl Strategy<Value = TrimSpec> {
        prop_oneof![
            (0.05..1.0f64, 0.0..0.95f64).prop_map(|(p, q)| TrimSpec::new(p, q).unwrap()),
            Just(TrimSpec::total()),
            (0.05..1.0f64).prop_map(|p| TrimSpec::new(p, 0.0).unwrap()),
            (0.0..0.95f64).prop_map(|q| TrimSpec::new(1.0, q).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn estimator_routes_agree_on_tie_free_data(
            (xi, eta) in tie_free_groups(),
            trim in admissible_trim(),
        ) {
            let data = diag(vec![xi.clone()], vec![eta.clone()]);
            let plug = estimate_pauc(&data, trim).unwrap();
            let rank = estimate_pauc_trimmed_mw(&data, trim).unwrap();
            prop_assert_eq!(&plug, &rank);
            let oracle = oracle_pair_count(&xi, &eta, trim);
            prop_assert!((plug.theta[0] - oracle).abs() < 1e-12);
        }

        #[test]
        fn estimate_respects_window_bound(
            (xi, eta) in tie_free_groups(),
            trim in admissible_trim(),
        ) {
            let data = diag(vec![xi], vec![eta]);
            let est = estimate_pauc(&data, trim).unwrap();
            let idx = trim_indices(est.alpha_n, est.beta_n, trim);
            let cap = (est.alpha_n - idx.k_lo) as f64 * idx.s_hi as f64
                / (est.alpha_n as f64 * est.beta_n as f64);
            prop_assert!(est.theta[0] >= 0.0);
            prop_assert!(est.theta[0] <= cap + 1e-15);
        }

        // Strictly increasing transforms leave the estimate untouched.
        #[test]
        fn monotone_transform_invariance(
            (xi, eta) in tie_free_groups(),
            trim in admissible_trim(),
        ) {
            let data = diag(vec![xi.clone()], vec![eta.clone()]);
            let base = estimate_pauc(&data, trim).unwrap();
            let warp = |v: f64| (v / 65536.0).exp();
            let warped = diag(
                vec![xi.iter().map(|&v| warp(v)).collect()],
                vec![eta.iter().map(|&v| warp(v)).collect()],
            );
            let transformed = estimate_pauc(&warped, trim).unwrap();
            prop_assert_eq!(base.theta, transformed.theta);
        }
    }

    #[test]
    fn marginal_cdf_quantile_roundtrip() {
        let specs = [
            MarginalSpec::normal(0.3, 1.4).unwrap(),
            MarginalSpec::log_normal(-0.2, 0.8).unwrap(),
            MarginalSpec::logit_normal(0.5, 1.0).unwrap(),
        ];
        for spec in &specs {
            for &u in &[0.01, 0.2, 0.5, 0.77, 0.99] {
                let t = spec.quantile(u);
                assert!((spec.cdf(t) - u).abs() < 1e-9, "{spec:?} at {u}");
            }
        }
        assert!(MarginalSpec::normal(0.0, 0.0).is_err());
        assert!(MarginalSpec::log_normal(0.0, -1.0).is_err());
        assert_eq!(specs[1].cdf(-3.0), 0.0);
        assert_eq!(specs[2].cdf(1.5), 1.0);
    }

    #[test]
    fn true_pauc_matches_binormal_closed_form() {
        let f = MarginalSpec::normal(0.0, 1.0).unwrap();
        let g = MarginalSpec::normal(0.5, 1.0).unwrap();
        let total = true_pauc(&f, &g, TrimSpec::total(), 100_000).unwrap();
        let closed = std_normal_cdf(0.5 / std::f64::consts::SQRT_2);
        assert!((total - closed).abs() < 1e-8, "{total} vs {closed}");

        // The same comparison survives a monotone change of scale.
        let lf = MarginalSpec::log_normal(0.0, 1.0).unwrap();
        let lg = MarginalSpec::log_normal(0.5, 1.0).unwrap();
        let lt = true_pauc(&lf, &lg, TrimSpec::total(), 100_000).unwrap();
        assert!((lt - closed).abs() < 1e-7, "{lt} vs {closed}");

        assert!(true_pauc(&f, &g, TrimSpec::total(), 10).is_err());
    }

    #[test]
    fn true_pauc_equal_distributions() {
        let f = MarginalSpec::logit_normal(0.0, 1.0).unwrap();
        let total = true_pauc(&f, &f, TrimSpec::total(), 50_000).unwrap();
        assert!((total - 0.5).abs() < 1e-8);
        // Trimmed value of an uninformative marker: the window integral
        // collapses to (p - q)^2 / 2.
        let trim = TrimSpec::new(0.8, 0.6).unwrap();
        let expect = (trim.p() - trim.q()).powi(2) / 2.0;
        let got = true_pauc(&f, &f, trim, 50_000).unwrap();
        assert!((got - expect).abs() < 1e-8, "{got} vs {expect}");
    }

    #[test]
    fn true_pauc_agrees_with_monte_carlo() {
        use rand::SeedableRng;
        use rand_distr::Distribution;
        let f = MarginalSpec::normal(0.0, 1.0).unwrap();
        let g = MarginalSpec::normal(0.5, 1.0).unwrap();
        let trim = TrimSpec::new(0.8, 0.6).unwrap();
        let quad = true_pauc(&f, &g, trim, 50_000).unwrap();
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        let norm = rand_distr::StandardNormal;
        let a = f.quantile(1.0 - trim.p());
        let b = g.quantile(1.0 - trim.q());
        let n = 400_000;
        let mut hits = 0u32;
        for _ in 0..n {
            let x = f.from_std_normal(norm.sample(&mut rng));
            let y = g.from_std_normal(norm.sample(&mut rng));
            if a < x && x < y && y <= b {
                hits += 1;
            }
        }
        let mc = hits as f64 / n as f64;
        assert!((quad - mc).abs() < 4e-3, "{quad} vs {mc}");
    }

    #[test]
    fn group_shape_validation() {
        let one = PairedSample::new(vec![vec![1.0, 2.0]]).unwrap();
        let two = PairedSample::new(vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert!(DiagnosticSample::new(one.clone(), two).is_err());
        let tiny = PairedSample::new(vec![vec![1.0]]).unwrap();
        assert!(DiagnosticSample::new(tiny, one).is_err());
    }
}
