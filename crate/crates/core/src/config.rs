use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Every constant the constructions fix asymptotically, plus search budgets.
///
/// With `relax == false` the lower-bound pipeline derives its thresholds
/// from `c`, `c1` and the target path length. With `relax == true` the
/// explicit `degree_threshold`, `termination_edge_threshold` and
/// `block_size` values are used instead, which keeps small instances
/// non-degenerate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConstantsConfig {
    pub relax: bool,
    /// Acyclic-set constant for sparse graphs.
    pub c: f64,
    /// Lower-bound constant; `None` uses the closing bound for the given `q`.
    pub c1: Option<f64>,
    /// Path length the lower-bound pipeline defends against. `None` derives
    /// the largest length the edge count permits.
    pub target_path_length: Option<usize>,
    /// Multiplies the `(n/2q)^q` low-degree threshold.
    pub degree_exponent_factor: f64,
    /// Relaxed override of the low-degree threshold.
    pub degree_threshold: Option<f64>,
    /// Relaxed override of the `n^{2q}/(16q)^{2q}` residue edge threshold.
    pub termination_edge_threshold: Option<f64>,
    /// Relaxed override of the per-family acyclic block size.
    pub block_size: Option<usize>,
    /// Red-path threshold is `n / (red_threshold_factor * k)`.
    pub red_threshold_factor: f64,
    /// Blocks of blue-only vertices have `block_factor * k` vertices.
    pub block_factor: f64,
    /// Largest vertex count for exhaustive longest-path search.
    pub exact_path_limit: usize,
    /// Largest number of colorings the min-max oracle enumerates.
    pub coloring_budget: u64,
    /// Largest number of k-subsets the exact pseudorandomness check visits.
    pub pseudorandom_budget: u64,
}

impl Default for ConstantsConfig {
    fn default() -> Self {
        Self {
            relax: false,
            c: 0.1,
            c1: None,
            target_path_length: None,
            degree_exponent_factor: 1.0,
            degree_threshold: None,
            termination_edge_threshold: None,
            block_size: None,
            red_threshold_factor: 14.0,
            block_factor: 7.0,
            exact_path_limit: 16,
            coloring_budget: 1 << 20,
            pseudorandom_budget: 50_000_000,
        }
    }
}

/// Thresholds the lower-bound pipeline actually runs with.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdversaryThresholds {
    pub target_path_length: Option<usize>,
    pub degree_threshold: f64,
    pub termination_edge_threshold: f64,
    pub block_size: Option<usize>,
}

impl ConstantsConfig {
    /// Relaxed configuration for desk-scale lower-bound runs.
    pub fn relaxed(degree_threshold: f64, termination_edge_threshold: f64) -> Self {
        Self {
            relax: true,
            degree_threshold: Some(degree_threshold),
            termination_edge_threshold: Some(termination_edge_threshold),
            ..Self::default()
        }
    }

    /// `c1 < c^{1/q} / (8 (2q)^q (16 q^2)^{q+1})`, taken at 99% of the bound.
    pub fn c1_for(&self, q: usize) -> f64 {
        self.c1.unwrap_or_else(|| {
            let q = q as f64;
            0.99 * self.c.powf(1.0 / q) / (8.0 * (2.0 * q).powf(q) * (16.0 * q * q).powf(q + 1.0))
        })
    }

    /// Edge count below which the lower bound asserts that some
    /// `(q+1)`-coloring avoids a monochromatic path of length `n`.
    pub fn lower_bound_edges(&self, q: usize, n: usize) -> f64 {
        let nf = n as f64;
        let qf = q as f64;
        let loglog = nf.log2().log2();
        self.c1_for(q) * nf.powf(2.0 * qf) * nf.log2().powf(1.0 / qf) / loglog.powf((qf + 2.0) / qf)
    }

    /// Smallest `n >= 4` whose lower-bound edge count reaches `edges`.
    pub fn derived_target(&self, q: usize, edges: usize) -> usize {
        let mut n = 4usize;
        while self.lower_bound_edges(q, n) < edges as f64 {
            n = n.saturating_mul(2);
        }
        let (mut lo, mut hi) = (n / 2, n);
        if lo < 4 {
            return 4;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.lower_bound_edges(q, mid) >= edges as f64 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    pub fn adversary_thresholds(&self, q: usize, edges: usize) -> Result<AdversaryThresholds> {
        if q == 0 {
            return Err(Error::InvalidInput("q must be at least 1".into()));
        }
        if self.relax {
            let degree = self
                .degree_threshold
                .ok_or_else(|| Error::InvalidInput("relaxed config needs degree_threshold".into()))?;
            let term = self
                .termination_edge_threshold
                .ok_or_else(|| Error::InvalidInput("relaxed config needs termination_edge_threshold".into()))?;
            return Ok(AdversaryThresholds {
                target_path_length: self.target_path_length,
                degree_threshold: degree * self.degree_exponent_factor,
                termination_edge_threshold: term,
                block_size: self.block_size,
            });
        }
        let n = self.target_path_length.unwrap_or_else(|| self.derived_target(q, edges));
        let nf = n as f64;
        let qf = q as f64;
        Ok(AdversaryThresholds {
            target_path_length: Some(n),
            degree_threshold: self.degree_exponent_factor * (nf / (2.0 * qf)).powf(qf),
            termination_edge_threshold: nf.powf(2.0 * qf) / (16.0 * qf).powf(2.0 * qf),
            block_size: None,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("c", self.c),
            ("degree_exponent_factor", self.degree_exponent_factor),
            ("red_threshold_factor", self.red_threshold_factor),
            ("block_factor", self.block_factor),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        if let Some(c1) = self.c1 {
            if c1 <= 0.0 {
                return Err(Error::InvalidInput("c1 must be positive".into()));
            }
        }
        if self.block_size == Some(0) {
            return Err(Error::InvalidInput("block_size must be positive".into()));
        }
        Ok(())
    }
}
