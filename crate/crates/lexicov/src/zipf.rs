//! Rank-frequency diagnostics: log-log power-law fits, marginal coverage
//! gains, and a knee heuristic for the cumulative coverage curve.
//!
//! The knee heuristic deliberately reports `NoMeaningfulKnee` for ordinary
//! Zipfian curves at the default sensitivity: natural-language cumulative
//! coverage has no objective turning point, so list size must come from an
//! explicit threshold or cap rather than a derivative argument.

use crate::coverage::RankedList;
use crate::error::{Error, Result};
use crate::fraction::Fraction;
use serde::{Deserialize, Serialize};

/// Ordinary least-squares fit of log(count) against log(rank).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZipfFit {
    /// Zipf exponent s (negated slope of the log-log line).
    pub exponent: f64,
    pub log_intercept: f64,
    pub r_squared: f64,
    /// Inclusive 1-based rank range the fit was computed over.
    pub rank_range: (usize, usize),
    /// All counts in range were equal; slope 0 and r_squared reported as 0.
    pub degenerate: bool,
}

/// Both curve ends deviate from a power law in natural text, so the default
/// window drops ranks 1-9 and every rank whose count is below 3.
pub fn default_rank_range(ranked: &RankedList) -> (usize, usize) {
    let lo = 10usize;
    let hi = ranked
        .entries
        .iter()
        .rev()
        .find(|e| e.count >= 3)
        .map(|e| e.rank)
        .unwrap_or(ranked.entries.len());
    (lo, hi.max(lo))
}

/// Fit over the given inclusive rank range, or the default window when none
/// is supplied. Needs at least 3 in-range points.
pub fn fit_zipf(ranked: &RankedList, rank_range: Option<(usize, usize)>) -> Result<ZipfFit> {
    let (lo, hi) = rank_range.unwrap_or_else(|| default_rank_range(ranked));
    let lo = lo.max(1);
    let hi = hi.min(ranked.entries.len());
    let points: Vec<(f64, f64)> = ranked
        .entries
        .iter()
        .filter(|e| e.rank >= lo && e.rank <= hi && e.count >= 1)
        .map(|e| ((e.rank as f64).ln(), (e.count as f64).ln()))
        .collect();
    if points.len() < 3 {
        return Err(Error::RangeTooSmall {
            got: points.len(),
            need: 3,
        });
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let sxy: f64 = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();

    if syy == 0.0 {
        // flat distribution, e.g. a perfectly uniform poem
        return Ok(ZipfFit {
            exponent: 0.0,
            log_intercept: mean_y,
            r_squared: 0.0,
            rank_range: (lo, hi),
            degenerate: true,
        });
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = (sxy * sxy) / (sxx * syy);
    Ok(ZipfFit {
        exponent: -slope,
        log_intercept: intercept,
        r_squared,
        rank_range: (lo, hi),
        degenerate: false,
    })
}

/// Per-rank coverage gains: the discrete derivative of cumulative coverage.
/// Telescopes to exactly 1 over a full ranked list.
pub fn marginal_gains(ranked: &RankedList) -> Vec<Fraction> {
    ranked.entries.iter().map(|e| e.coverage).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KneeVerdict {
    Found,
    NoMeaningfulKnee,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KneeDiagnostic {
    pub knee_rank: Option<usize>,
    pub gain_curve: Vec<Fraction>,
    pub verdict: KneeVerdict,
    /// Largest perpendicular distance from the normalized cumulative curve to
    /// its end-to-end chord.
    pub max_distance: f64,
}

/// Default chosen so Zipfian cumulative curves fall below it while genuinely
/// two-regime curves exceed it.
pub const DEFAULT_KNEE_SENSITIVITY: f64 = 0.48;

/// Maximum-distance-to-chord knee detection on the cumulative coverage curve.
/// Rank and coverage axes are normalized to [0, 1] before measuring, so the
/// chord is the unit diagonal and the sensitivity is scale-free.
pub fn knee_point(gains: &[Fraction], sensitivity: f64) -> KneeDiagnostic {
    let cumulative: Vec<f64> = gains
        .iter()
        .scan(Fraction::ZERO, |acc, g| {
            *acc = acc.add(g);
            Some(acc.to_f64())
        })
        .collect();
    let diagnostic = |knee_rank, verdict, max_distance| KneeDiagnostic {
        knee_rank,
        gain_curve: gains.to_vec(),
        verdict,
        max_distance,
    };
    if cumulative.len() < 3 {
        return diagnostic(None, KneeVerdict::NoMeaningfulKnee, 0.0);
    }
    let (first, last) = (cumulative[0], *cumulative.last().unwrap());
    let y_span = last - first;
    let x_span = (cumulative.len() - 1) as f64;
    if y_span <= 0.0 {
        return diagnostic(None, KneeVerdict::NoMeaningfulKnee, 0.0);
    }
    let mut best = (0usize, 0.0f64);
    for (i, y) in cumulative.iter().enumerate() {
        let xn = i as f64 / x_span;
        let yn = (y - first) / y_span;
        let dist = (yn - xn).abs() / std::f64::consts::SQRT_2;
        if dist > best.1 {
            best = (i, dist);
        }
    }
    if best.1 > sensitivity {
        diagnostic(Some(best.0 + 1), KneeVerdict::Found, best.1)
    } else {
        diagnostic(None, KneeVerdict::NoMeaningfulKnee, best.1)
    }
}

/// Plot-ready natural-log pairs for all entries with count >= 1, rank order.
pub fn zipf_points(ranked: &RankedList) -> Vec<(f64, f64)> {
    ranked
        .entries
        .iter()
        .filter(|e| e.count >= 1)
        .map(|e| ((e.rank as f64).ln(), (e.count as f64).ln()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::PipelineConfig;
    use crate::coverage::{rank, FrequencyTable, Provenance};
    use std::collections::BTreeMap;

    fn prov() -> Provenance {
        Provenance {
            source_id: "test".into(),
            config: PipelineConfig::default(),
        }
    }

    fn ranked_from_counts(counts: &[(String, u64)]) -> RankedList {
        let map: BTreeMap<String, u64> = counts.iter().cloned().collect();
        rank(&FrequencyTable::from_counts(map, prov()).unwrap())
    }

    fn synthetic_zipf(top: u64, max_rank: u64) -> RankedList {
        let counts: Vec<(String, u64)> = (1..=max_rank)
            .map(|r| (format!("w{r:06}"), top / r))
            .collect();
        ranked_from_counts(&counts)
    }

    #[test]
    fn recovers_unit_exponent_on_exact_zipf_data() {
        let ranked = synthetic_zipf(10_000, 100);
        let fit = fit_zipf(&ranked, Some((1, 100))).unwrap();
        assert!((fit.exponent - 1.0).abs() <= 0.02, "s = {}", fit.exponent);
        assert!(fit.r_squared >= 0.999, "r2 = {}", fit.r_squared);
        assert!(!fit.degenerate);
    }

    #[test]
    fn uniform_counts_are_degenerate() {
        let ranked = ranked_from_counts(&[
            ("a".into(), 5),
            ("b".into(), 5),
            ("c".into(), 5),
        ]);
        let fit = fit_zipf(&ranked, Some((1, 3))).unwrap();
        assert!(fit.degenerate);
        assert_eq!(fit.exponent, 0.0);
        assert_eq!(fit.r_squared, 0.0);
    }

    #[test]
    fn scaling_counts_shifts_intercept_only() {
        let base = synthetic_zipf(10_000, 100);
        let scaled = {
            let counts: Vec<(String, u64)> = (1..=100u64)
                .map(|r| (format!("w{r:06}"), (10_000 / r) * 7))
                .collect();
            ranked_from_counts(&counts)
        };
        let f1 = fit_zipf(&base, Some((1, 100))).unwrap();
        let f2 = fit_zipf(&scaled, Some((1, 100))).unwrap();
        assert!((f1.exponent - f2.exponent).abs() < 1e-12);
        assert!((f1.r_squared - f2.r_squared).abs() < 1e-12);
        assert!(f2.log_intercept > f1.log_intercept);
    }

    #[test]
    fn too_few_points_is_an_error() {
        let ranked = ranked_from_counts(&[("a".into(), 3), ("b".into(), 1)]);
        assert!(matches!(
            fit_zipf(&ranked, Some((1, 2))),
            Err(Error::RangeTooSmall { got: 2, need: 3 })
        ));
    }

    #[test]
    fn gains_are_the_coverage_sequence_and_telescope_to_one() {
        let ranked = ranked_from_counts(&[
            ("a".into(), 5),
            ("b".into(), 3),
            ("c".into(), 1),
            ("d".into(), 1),
        ]);
        let gains = marginal_gains(&ranked);
        assert_eq!(
            gains,
            [
                Fraction::new(5, 10),
                Fraction::new(3, 10),
                Fraction::new(1, 10),
                Fraction::new(1, 10)
            ]
        );
        let sum = gains.iter().fold(Fraction::ZERO, |acc, g| acc.add(g));
        assert_eq!(sum, Fraction::ONE);

        let single = ranked_from_counts(&[("x".into(), 9)]);
        assert_eq!(marginal_gains(&single), [Fraction::ONE]);
    }

    /// Curve with four large gains followed by a long flat tail.
    fn two_regime_gains() -> Vec<Fraction> {
        let mut gains = vec![Fraction::new(200, 1000); 4];
        gains.extend(std::iter::repeat(Fraction::new(2, 1000)).take(100));
        gains
    }

    #[test]
    fn knee_found_on_two_regime_curve() {
        let diag = knee_point(&two_regime_gains(), DEFAULT_KNEE_SENSITIVITY);
        assert_eq!(diag.verdict, KneeVerdict::Found);
        let knee = diag.knee_rank.unwrap();
        assert!((3..=5).contains(&knee), "knee at {knee}");
    }

    #[test]
    fn knee_matches_brute_force_argmax() {
        let gains = two_regime_gains();
        let diag = knee_point(&gains, DEFAULT_KNEE_SENSITIVITY);
        // brute-force: recompute the chord distance for every prefix sum
        let mut cum = Fraction::ZERO;
        let cums: Vec<f64> = gains
            .iter()
            .map(|g| {
                cum = cum.add(g);
                cum.to_f64()
            })
            .collect();
        let (first, last) = (cums[0], *cums.last().unwrap());
        let mut best = (0usize, 0.0f64);
        for (i, y) in cums.iter().enumerate() {
            let xn = i as f64 / (cums.len() - 1) as f64;
            let yn = (y - first) / (last - first);
            let d = (yn - xn).abs() / std::f64::consts::SQRT_2;
            if d > best.1 {
                best = (i, d);
            }
        }
        assert_eq!(diag.knee_rank, Some(best.0 + 1));
        assert!((diag.max_distance - best.1).abs() < 1e-12);
    }

    #[test]
    fn linear_cumulative_curve_has_no_knee() {
        let gains = vec![Fraction::new(1, 10); 10];
        let diag = knee_point(&gains, DEFAULT_KNEE_SENSITIVITY);
        assert_eq!(diag.verdict, KneeVerdict::NoMeaningfulKnee);
        assert!(diag.max_distance < 1e-12);
    }

    #[test]
    fn zipfian_curve_reports_no_meaningful_knee() {
        for max_rank in [100u64, 1000] {
            let ranked = synthetic_zipf(1_000_000, max_rank);
            let gains = marginal_gains(&ranked);
            let diag = knee_point(&gains, DEFAULT_KNEE_SENSITIVITY);
            assert_eq!(
                diag.verdict,
                KneeVerdict::NoMeaningfulKnee,
                "V={max_rank} distance={}",
                diag.max_distance
            );
        }
    }

    #[test]
    fn knee_is_deterministic() {
        let gains = two_regime_gains();
        let a = knee_point(&gains, 0.3);
        let b = knee_point(&gains, 0.3);
        assert_eq!(a, b);
    }

    #[test]
    fn zipf_points_are_log_pairs_in_rank_order() {
        let single = ranked_from_counts(&[("a".into(), 1)]);
        assert_eq!(zipf_points(&single), [(0.0, 0.0)]);

        let ranked = synthetic_zipf(1000, 50);
        let pts = zipf_points(&ranked);
        assert_eq!(pts.len(), ranked.entries.len());
        for w in pts.windows(2) {
            assert!(w[1].1 <= w[0].1, "log counts must be non-increasing");
        }
    }
}
