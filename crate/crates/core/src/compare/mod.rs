//! Statistics used to contrast peer-review and bibliometric evaluations:
//! correlations and their significance thresholds, rank variation between two
//! rank tables, and audits of how well submitted articles were selected from
//! each portfolio.

mod audit;
mod student_t;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vtr::RankTable;

pub use audit::{
    audit_all, below_median_count, below_median_share, displaced_count, displaced_selection,
    median, portfolio_qualities, selection_audit, summarize_audits, variation_coefficient,
    AreaAuditSummary, SelectionAudit,
};
pub use student_t::{regularized_incomplete_beta, t_quantile_two_sided, two_sided_p};

fn check_pair(xs: &[f64], ys: &[f64]) -> Result<()> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 3 {
        return Err(Error::TooFewObservations {
            needed: 3,
            got: xs.len(),
        });
    }
    Ok(())
}

/// Product-moment correlation.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    check_pair(xs, ys)?;
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// 1-based ranks in ascending order, ties receiving the mean of the ranks
/// they span.
pub fn mean_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let mean = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = mean;
        }
        i = j + 1;
    }
    ranks
}

/// Rank correlation: Pearson on mean-tie ranks.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<f64> {
    check_pair(xs, ys)?;
    pearson(&mean_ranks(xs), &mean_ranks(ys))
}

/// Smallest |r| that is significant at level `alpha` (two tails) with `n`
/// paired observations.
pub fn critical_r(n: usize, alpha: f64) -> Result<f64> {
    if n < 3 {
        return Err(Error::TooFewObservations { needed: 3, got: n });
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let df = (n - 2) as f64;
    let t = t_quantile_two_sided(alpha, df);
    Ok(t / (t * t + df).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub n: usize,
    pub r: f64,
    pub critical_value: f64,
    pub significant: bool,
}

impl CorrelationResult {
    pub fn new(n: usize, r: f64, alpha: f64) -> Result<Self> {
        let critical_value = critical_r(n, alpha)?;
        Ok(CorrelationResult {
            n,
            r,
            critical_value,
            significant: r.abs() > critical_value,
        })
    }
}

pub fn pearson_test(xs: &[f64], ys: &[f64], alpha: f64) -> Result<CorrelationResult> {
    CorrelationResult::new(xs.len(), pearson(xs, ys)?, alpha)
}

pub fn spearman_test(xs: &[f64], ys: &[f64], alpha: f64) -> Result<CorrelationResult> {
    CorrelationResult::new(xs.len(), spearman(xs, ys)?, alpha)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankVariationStats {
    pub changed: usize,
    pub total: usize,
    pub max_abs: u32,
    pub mean_abs: f64,
    pub median_abs: f64,
    /// Population standard deviation of |Δrank|.
    pub std_abs: f64,
    pub top_k_overlap: usize,
}

/// Compares two rank tables over the same entities. Δ is `rank_b - rank_a`;
/// the top k of each table are its first k rows.
pub fn rank_variation(a: &RankTable, b: &RankTable, k: usize) -> Result<RankVariationStats> {
    let ranks_a = a.ranks();
    let ranks_b = b.ranks();
    if ranks_a.len() != a.len() || ranks_b.len() != b.len() || !ranks_a.keys().eq(ranks_b.keys()) {
        return Err(Error::EntityMismatch);
    }
    let deltas: Vec<u32> = ranks_a
        .iter()
        .map(|(e, &ra)| ranks_b[e].abs_diff(ra))
        .collect();
    let total = deltas.len();
    let changed = deltas.iter().filter(|&&d| d != 0).count();
    let max_abs = deltas.iter().copied().max().unwrap_or(0);
    let as_f64: Vec<f64> = deltas.iter().map(|&d| d as f64).collect();
    let (mean_abs, std_abs) = mean_and_population_std(&as_f64);
    let median_abs = median(&as_f64).unwrap_or(0.0);
    let top_a: std::collections::BTreeSet<&str> = a
        .rows
        .iter()
        .take(k)
        .map(|r| r.entity_id.as_str())
        .collect();
    let top_k_overlap = b
        .rows
        .iter()
        .take(k)
        .filter(|r| top_a.contains(r.entity_id.as_str()))
        .count();
    Ok(RankVariationStats {
        changed,
        total,
        max_abs,
        mean_abs,
        median_abs,
        std_abs,
        top_k_overlap,
    })
}

pub(crate) fn mean_and_population_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}
