//! Rank statistics and the two-sided Mann-Whitney U test.
//!
//! Small pooled samples get the exact permutation distribution of U, computed by
//! counting subsets of the pooled midranks by rank sum. Ties are handled by working
//! with doubled midranks, which are always integers. Larger samples use the normal
//! approximation with tie-corrected variance and a 0.5 continuity correction.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Smallest p-value ever reported.
pub const P_FLOOR: f64 = 1e-300;

/// Largest pooled size accepted for exact mode; subset counts stay within `u128`.
pub const MAX_EXACT_CUTOFF: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UTestMethod {
    ExactPermutation,
    NormalApprox,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UTestConfig {
    /// Exact mode is used when `n_a + n_b <= exact_cutoff`.
    pub exact_cutoff: usize,
    pub tie_correction: bool,
}

impl Default for UTestConfig {
    fn default() -> Self {
        UTestConfig {
            exact_cutoff: 20,
            tie_correction: true,
        }
    }
}

impl UTestConfig {
    pub fn validate(&self) -> Result<()> {
        if self.exact_cutoff > MAX_EXACT_CUTOFF {
            return Err(Error::InvalidConfig(alloc::format!(
                "exact_cutoff {} exceeds {MAX_EXACT_CUTOFF}",
                self.exact_cutoff
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UTestResult {
    /// U for the first sample: number of (a, b) pairs with a > b, ties counting 1/2.
    pub u_statistic: f64,
    pub p_value: f64,
    pub method: UTestMethod,
    pub tie_corrected: bool,
    pub n_a: usize,
    pub n_b: usize,
}

/// Ranks `1..=n`, tied values sharing the mean of their positions.
pub fn rank_with_ties(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end
        let mid = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = mid;
        }
        start = end;
    }
    Ok(ranks)
}

/// Sizes of each group of tied values, in ascending value order.
fn tie_groups(sorted: &[f64]) -> Vec<usize> {
    let mut groups = Vec::new();
    let mut start = 0;
    while start < sorted.len() {
        let mut end = start + 1;
        while end < sorted.len() && sorted[end] == sorted[start] {
            end += 1;
        }
        groups.push(end - start);
        start = end;
    }
    groups
}

pub fn mann_whitney_u(a: &[f64], b: &[f64], cfg: &UTestConfig) -> Result<UTestResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    cfg.validate()?;
    let n_a = a.len();
    let n_b = b.len();
    let n = n_a + n_b;

    let mut pooled = Vec::with_capacity(n);
    pooled.extend_from_slice(a);
    pooled.extend_from_slice(b);
    let ranks = rank_with_ties(&pooled)?;
    // doubled midranks are integers
    let doubled: Vec<i64> = ranks.iter().map(|r| (2.0 * r) as i64).collect();
    let rank_sum2: i64 = doubled[..n_a].iter().sum();
    let u2 = rank_sum2 - (n_a * (n_a + 1)) as i64;
    let u_statistic = u2 as f64 / 2.0;

    let (p_value, method) = if n <= cfg.exact_cutoff {
        (exact_p(&doubled, n_a, n_b, u2), UTestMethod::ExactPermutation)
    } else {
        let mut sorted = pooled;
        sorted.sort_by(f64::total_cmp);
        let ties = if cfg.tie_correction {
            tie_groups(&sorted)
                .into_iter()
                .map(|t| {
                    let t = t as f64;
                    t * t * t - t
                })
                .sum()
        } else {
            0.0
        };
        (normal_p(u_statistic, n_a, n_b, ties), UTestMethod::NormalApprox)
    };

    Ok(UTestResult {
        u_statistic,
        p_value: p_value.clamp(P_FLOOR, 1.0),
        method,
        tie_corrected: cfg.tie_correction && method == UTestMethod::NormalApprox,
        n_a,
        n_b,
    })
}

/// Exact two-sided p from the permutation distribution of the doubled rank sum.
fn exact_p(doubled_ranks: &[i64], n_a: usize, n_b: usize, u2_obs: i64) -> f64 {
    let max_sum: i64 = doubled_ranks.iter().sum();
    let width = max_sum as usize + 1;
    // counts[j][s]: subsets of size j with doubled rank sum s
    let mut counts = vec![vec![0u128; width]; n_a + 1];
    counts[0][0] = 1;
    for (seen, &r) in doubled_ranks.iter().enumerate() {
        let r = r as usize;
        for j in (1..=n_a.min(seen + 1)).rev() {
            let (lower, upper) = counts.split_at_mut(j);
            let (prev, cur) = (&lower[j - 1], &mut upper[0]);
            for s in (r..width).rev() {
                cur[s] += prev[s - r];
            }
        }
    }
    let offset = (n_a * (n_a + 1)) as i64;
    let centre = (n_a * n_b) as i64;
    let obs_dev = (u2_obs - centre).abs();
    let mut extreme = 0u128;
    let mut total = 0u128;
    for (s, &c) in counts[n_a].iter().enumerate() {
        if c == 0 {
            continue;
        }
        total += c;
        if (s as i64 - offset - centre).abs() >= obs_dev {
            extreme += c;
        }
    }
    extreme as f64 / total as f64
}

fn normal_p(u: f64, n_a: usize, n_b: usize, tie_term: f64) -> f64 {
    let (na, nb) = (n_a as f64, n_b as f64);
    let n = na + nb;
    let mean = na * nb / 2.0;
    let var = na * nb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if !(var > 0.0) {
        // every value tied
        return 1.0;
    }
    let dev = ((u - mean).abs() - 0.5).max(0.0);
    let z = dev / libm::sqrt(var);
    libm::erfc(z / core::f64::consts::SQRT_2)
}

/// Mean and population standard deviation; `None` for an empty slice.
pub fn mean_std(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let rough = values.iter().sum::<f64>() / n;
    // one correction pass; exact for constant input
    let mean = rough + values.iter().map(|v| v - rough).sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    Some((mean, libm::sqrt(var)))
}
