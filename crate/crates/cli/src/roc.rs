//! Empirical ROC step curves as plot-ready vertex lists.

use pauc_core::empdist::ExtReal;
use pauc_core::estimator::{estimate_pauc, DiagnosticSample, TrimSpec};
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct RocWindow {
    pub p: f64,
    pub q: f64,
    /// Lower threshold cut; `None` stands for negative infinity.
    pub lower: Option<f64>,
    pub upper: f64,
    /// Curve points delimiting the window's segment, lower-left first.
    pub segment: [(f64, f64); 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct RocCurve {
    pub marker: String,
    /// Area under the full curve.
    pub auc: f64,
    /// Step-curve vertices from (0,0) to (1,1), thresholds descending.
    pub vertices: Vec<(f64, f64)>,
    pub window: Option<RocWindow>,
}

/// One curve per marker: vertices (1 - F(t), 1 - G(t)) as the threshold t
/// sweeps down through the pooled observed values, plus the realized window
/// cut points when a trim is given.
pub fn roc_curves(
    sample: &DiagnosticSample,
    marker_names: &[String],
    trim: Option<TrimSpec>,
) -> Result<Vec<RocCurve>, CliError> {
    let total = estimate_pauc(sample, TrimSpec::new(1.0, 0.0)?)?;
    let windows = trim.map(|t| estimate_pauc(sample, t)).transpose()?;
    let mut curves = Vec::with_capacity(sample.markers());
    for k in 0..sample.markers() {
        let xi = sample.nondiseased().column(k)?;
        let eta = sample.diseased().column(k)?;
        let alpha = xi.len() as f64;
        let beta = eta.len() as f64;
        let at_least = |sorted: &[f64], v: f64| (sorted.len() - sorted.partition_point(|&x| x < v)) as f64;
        let above = |sorted: &[f64], v: f64| (sorted.len() - sorted.partition_point(|&x| x <= v)) as f64;
        let point_from = |v: f64| (at_least(xi.sorted(), v) / alpha, at_least(eta.sorted(), v) / beta);

        let mut pooled: Vec<f64> =
            xi.sorted().iter().chain(eta.sorted().iter()).copied().collect();
        pooled.sort_by(|a, b| b.partial_cmp(a).unwrap());
        pooled.dedup();
        let mut vertices = vec![(0.0, 0.0)];
        vertices.extend(pooled.iter().map(|&v| point_from(v)));

        let window = windows.as_ref().map(|est| {
            let t = trim.unwrap();
            let upper = match est.upper_cuts[k] {
                ExtReal::Finite(v) => v,
                _ => unreachable!("upper cut is an order statistic"),
            };
            let (lower, upper_right) = match est.lower_cuts[k] {
                ExtReal::NegInf => (None, (1.0, 1.0)),
                ExtReal::Finite(v) => {
                    (Some(v), (above(xi.sorted(), v) / alpha, above(eta.sorted(), v) / beta))
                }
                ExtReal::PosInf => unreachable!("lower cut is below data"),
            };
            RocWindow {
                p: t.p(),
                q: t.q(),
                lower,
                upper,
                segment: [point_from(upper), upper_right],
            }
        });

        curves.push(RocCurve {
            marker: marker_names.get(k).cloned().unwrap_or_else(|| format!("m{}", k + 1)),
            auc: total.theta[k],
            vertices,
            window,
        });
    }
    Ok(curves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use pauc_core::empdist::PairedSample;

    fn sample(xi: Vec<f64>, eta: Vec<f64>) -> DiagnosticSample {
        DiagnosticSample::new(
            PairedSample::new(vec![xi]).unwrap(),
            PairedSample::new(vec![eta]).unwrap(),
        )
        .unwrap()
    }

    fn names() -> Vec<String> {
        vec!["m1".into()]
    }

    #[test]
    fn separated_marker_traces_the_upper_left_corner() {
        let s = sample(vec![1.0, 2.0, 3.0], vec![4.0, 5.0]);
        let c = &roc_curves(&s, &names(), None).unwrap()[0];
        assert_eq!(c.auc, 1.0);
        assert_eq!(c.vertices.first(), Some(&(0.0, 0.0)));
        assert!(c.vertices.contains(&(0.0, 1.0)));
        assert_eq!(c.vertices.last(), Some(&(1.0, 1.0)));
        // Until every diseased value is passed, the curve hugs FPR = 0.
        for &(fpr, tpr) in &c.vertices {
            assert!(tpr >= 1.0 - 1e-12 || fpr == 0.0);
        }
    }

    #[test]
    fn staircase_area_equals_the_total_auc_estimate() {
        let s = sample(vec![0.3, 1.7, 0.9, 2.4, 1.1], vec![0.8, 2.0, 1.4, 3.1]);
        let c = &roc_curves(&s, &names(), None).unwrap()[0];
        let mut area = 0.0;
        for w in c.vertices.windows(2) {
            area += (w[1].0 - w[0].0) * w[1].1;
        }
        assert!((area - c.auc).abs() < 1e-12);
    }

    #[test]
    fn vertices_are_monotone_with_unit_steps_on_tie_free_data() {
        let s = sample(vec![0.3, 1.7, 0.9], vec![0.8, 2.0, 1.4, 3.1]);
        let c = &roc_curves(&s, &names(), None).unwrap()[0];
        assert_eq!(c.vertices.len(), 1 + 7);
        for w in c.vertices.windows(2) {
            let dx = w[1].0 - w[0].0;
            let dy = w[1].1 - w[0].1;
            assert!(dx >= 0.0 && dy >= 0.0);
            assert!((dx - 1.0 / 3.0).abs() < 1e-12 || (dy - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn window_segment_respects_the_trim_rectangle() {
        let xi: Vec<f64> = (1..=10).map(|v| v as f64).collect();
        let eta: Vec<f64> = (1..=10).map(|v| v as f64 + 4.0).collect();
        let s = sample(xi, eta);
        let trim = TrimSpec::new(0.4, 0.6).unwrap();
        let c = &roc_curves(&s, &names(), Some(trim)).unwrap()[0];
        let w = c.window.as_ref().unwrap();
        // Threshold cuts: lower at the 60% non-diseased order statistic,
        // upper at the 40% diseased one.
        assert_eq!(w.lower, Some(6.0));
        assert_eq!(w.upper, 8.0);
        let [low, high] = w.segment;
        assert!(high.0 <= 0.4 + 1e-12, "right end inside FPR <= p");
        assert!(low.1 >= 0.6 - 1e-12, "left end above TPR >= q");
        assert!(low.0 <= high.0 && low.1 <= high.1);
    }

    #[test]
    fn untrimmed_window_reaches_the_corners() {
        let s = sample(vec![0.3, 1.7, 0.9], vec![0.8, 2.0, 1.4]);
        let trim = TrimSpec::new(1.0, 0.0).unwrap();
        let c = &roc_curves(&s, &names(), Some(trim)).unwrap()[0];
        let w = c.window.as_ref().unwrap();
        assert_eq!(w.lower, None);
        assert_eq!(w.segment[1], (1.0, 1.0));
        assert_eq!(w.upper, 2.0);
        assert_eq!(w.segment[0], (0.0, 1.0 / 3.0));
    }
}
