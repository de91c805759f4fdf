//! Volume and cut-conductance series and the bounded/growing classification rules.

use crate::error::{invalid, Error, Result};
use crate::graph::BallProfile;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Bounded,
    Growing,
    Inconclusive,
}

/// Fraction of the total that the last quarter must add for "growing".
pub const GROWTH_FRACTION: f64 = 0.1;
/// Geometric decay ratio below which increments count as summable.
pub const DECAY_RATIO: f64 = 0.98;

/// Classifies a nondecreasing sequence of partial sums S_1..S_N:
/// growing if S_N − S_{N−⌊N/4⌋} > 0.1·S_N; otherwise bounded if the positive increments over the
/// last half fit a geometric decay with ratio < 0.98; otherwise inconclusive.
pub fn classify_partial_sums(s: &[f64]) -> Classification {
    let n = s.len();
    if n < 4 {
        return Classification::Inconclusive;
    }
    let last = s[n - 1];
    let quarter = n / 4;
    if last - s[n - 1 - quarter] > GROWTH_FRACTION * last.abs() {
        return Classification::Growing;
    }
    match decay_ratio(s) {
        None => Classification::Bounded,
        Some(r) if r < DECAY_RATIO => Classification::Bounded,
        Some(_) => Classification::Inconclusive,
    }
}

/// exp(slope) of a least-squares fit of log(increment) against index over the last half.
pub fn decay_ratio(s: &[f64]) -> Option<f64> {
    let n = s.len();
    let pts: Vec<(f64, f64)> = (n / 2..n).filter(|&i| i > 0).filter_map(|i| {
        let inc = s[i] - s[i - 1];
        (inc > 0.0).then(|| (i as f64, inc.ln()))
    }).collect();
    if pts.len() < 2 {
        return None;
    }
    Some(fit_line(&pts).0.exp())
}

/// Least-squares slope and intercept.
pub fn fit_line(pts: &[(f64, f64)]) -> (f64, f64) {
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Relative change below which a doubling sweep counts as stable.
pub const STABLE_CHANGE: f64 = 0.1;
/// Growth factor at or above which a doubling sweep counts as growing.
pub const GROWTH_FACTOR: f64 = 1.5;

/// Classifies a quantity tracked over increasing truncations by its last step:
/// |v_N/v_{N−1} − 1| < 10% ⇒ bounded; v_N/v_{N−1} ≥ 1.5 ⇒ growing; else inconclusive.
pub fn classify_sweep(values: &[f64]) -> Classification {
    if values.len() < 2 {
        return Classification::Inconclusive;
    }
    let ratio = values[values.len() - 1] / values[values.len() - 2];
    if (ratio - 1.0).abs() < STABLE_CHANGE {
        Classification::Bounded
    } else if ratio >= GROWTH_FACTOR {
        Classification::Growing
    } else {
        Classification::Inconclusive
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesReport {
    pub q: f64,
    pub n_max: usize,
    pub partial_sums: Vec<f64>,
    pub classification: Classification,
}

fn check(profile: &BallProfile, q: f64, n_max: usize) -> Result<()> {
    if !(q > 1.0) {
        return invalid("q must exceed 1");
    }
    if n_max < 1 {
        return invalid("need N ≥ 1");
    }
    if n_max > profile.r_max {
        return Err(Error::Censored { requested: n_max, safe: profile.r_max });
    }
    Ok(())
}

/// Prefix sums of Σ_{n=1}^{N} n^{2q−1}/μ(B(o,n))^{q−1}.
pub fn volume_series(profile: &BallProfile, q: f64, n_max: usize) -> Result<SeriesReport> {
    check(profile, q, n_max)?;
    let mut acc = 0.0;
    let partial_sums: Vec<f64> = (1..=n_max)
        .map(|n| {
            acc += (n as f64).powf(2.0 * q - 1.0) / profile.volume(n).powf(q - 1.0);
            acc
        })
        .collect();
    let classification = classify_partial_sums(&partial_sums);
    Ok(SeriesReport { q, n_max, partial_sums, classification })
}

/// S(M) = Σ_{n=1}^{M} n (Σ_{k=n}^{M} 1/b_k)^{q−1} for M = 1..N: the cut-conductance lower bound
/// as the truncation grows.
pub fn b_criterion_series(profile: &BallProfile, q: f64, n_max: usize) -> Result<SeriesReport> {
    check(profile, q, n_max)?;
    let partial_sums = (1..=n_max).map(|m| crate::flow::b_series_term_sum(profile, m, q)).collect::<Result<Vec<_>>>()?;
    let classification = classify_partial_sums(&partial_sums);
    Ok(SeriesReport { q, n_max, partial_sums, classification })
}
