//! Disorder-ensemble orchestration: run seeded realizations, scatter the
//! per-state points (E_β, N⟨C^β⟩) onto a common energy grid, and average
//! the global concurrence with its standard error.
//!
//! Realizations are independent work units (rayon); every aggregate is
//! reduced in realization-index order, so the output is bitwise identical
//! no matter how the work was scheduled or partitioned.

use rayon::prelude::*;

use crate::concurrence::spectrum_concurrence;
use crate::eig::diagonalize;
use crate::error::{Error, Result};
use crate::models::{build_hamiltonian, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinningMode {
    /// Scatter all (E, N⟨C^β⟩) points into uniform energy bins (default).
    Energy,
    /// Average at fixed eigenstate index β across realizations.
    StateIndex,
}

#[derive(Debug, Clone)]
pub struct EnsembleSpec {
    pub params: ModelParams,
    pub samples: usize,
    pub energy_bins: usize,
    /// None: min/max over all realizations, padded by 1%.
    pub energy_range: Option<(f64, f64)>,
    pub base_seed: u64,
    pub binning: BinningMode,
}

/// Default bin count at size N (100 bins at N = 800).
pub fn default_bins(n: usize) -> usize {
    (n / 8).max(16)
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.samples < 1 {
            return Err(Error::InvalidParams("samples must be >= 1".into()));
        }
        if self.energy_bins < 8 {
            return Err(Error::InvalidParams(format!(
                "energy_bins = {} < 8",
                self.energy_bins
            )));
        }
        Ok(())
    }

    /// Deterministic families collapse to a single realization.
    pub fn effective_samples(&self) -> usize {
        if self.params.is_deterministic() {
            1
        } else {
            self.samples
        }
    }
}

/// Ensemble-averaged concurrence curve on an energy grid. Bins with zero
/// count carry NaN mean/stderr and are emitted as missing downstream.
#[derive(Debug, Clone)]
pub struct BinnedCurve {
    pub bin_centers: Vec<f64>,
    pub mean_scaled_concurrence: Vec<f64>,
    pub stderr: Vec<f64>,
    pub counts: Vec<usize>,
    /// Eigenvalues falling outside a user-fixed energy range are counted
    /// here, never silently dropped.
    pub out_of_range: usize,
}

impl BinnedCurve {
    pub fn populated(&self) -> impl Iterator<Item = (f64, f64, f64, usize)> + '_ {
        self.bin_centers
            .iter()
            .zip(&self.mean_scaled_concurrence)
            .zip(&self.stderr)
            .zip(&self.counts)
            .filter(|&(_, &c)| c > 0)
            .map(|(((&e, &m), &s), &c)| (e, m, s, c))
    }
}

/// Mean and standard error of N⟨C⟩ across realizations.
#[derive(Debug, Clone, Copy)]
pub struct GlobalStats {
    pub mean_scaled_concurrence: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Everything one realization contributes to the ensemble.
#[derive(Debug, Clone)]
pub struct RealizationOutcome {
    pub index: u64,
    /// (E_β, N⟨C^β⟩) for every eigenstate, ascending in energy.
    pub points: Vec<(f64, f64)>,
    /// N⟨C⟩ of this realization.
    pub scaled_mean: f64,
}

/// Build → diagonalize → concurrence for one realization.
pub fn run_realization(params: &ModelParams, index: u64) -> Result<RealizationOutcome> {
    let hamiltonian = build_hamiltonian(params, index)?;
    let spectrum =
        diagonalize(&hamiltonian).map_err(|e| e.with_context(&format!("realization {index}")))?;
    let report = spectrum_concurrence(&spectrum);
    let points = report
        .per_state
        .iter()
        .map(|r| (r.energy, r.scaled_concurrence))
        .collect();
    Ok(RealizationOutcome {
        index,
        points,
        scaled_mean: report.scaled_mean_concurrence,
    })
}

/// Uniform-width binning of (E, value) points. `range = None` spans the
/// data min/max padded by 1%; points exactly on the top edge land in the
/// last bin; points outside the range are counted, not dropped.
pub fn bin_energies(
    points: &[(f64, f64)],
    bins: usize,
    range: Option<(f64, f64)>,
) -> Result<BinnedCurve> {
    if bins < 1 {
        return Err(Error::InvalidParams("bin count must be >= 1".into()));
    }
    if points.is_empty() {
        return Err(Error::InvalidParams("no points to bin".into()));
    }
    let (lo, hi) = match range {
        Some((lo, hi)) if lo < hi => (lo, hi),
        Some((lo, hi)) => {
            return Err(Error::InvalidParams(format!(
                "empty energy range [{lo}, {hi}]"
            )))
        }
        None => {
            let min = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
            let max = points
                .iter()
                .map(|p| p.0)
                .fold(f64::NEG_INFINITY, f64::max);
            let pad = if max > min { 0.01 * (max - min) } else { 0.5 };
            (min - pad, max + pad)
        }
    };
    let width = (hi - lo) / bins as f64;
    let mut count = vec![0usize; bins];
    let mut sum = vec![0.0f64; bins];
    let mut sumsq = vec![0.0f64; bins];
    let mut out_of_range = 0usize;
    for &(e, v) in points {
        if e < lo || e > hi {
            out_of_range += 1;
            continue;
        }
        let mut idx = ((e - lo) / width) as usize;
        if idx >= bins {
            idx = bins - 1; // top edge inclusive
        }
        count[idx] += 1;
        sum[idx] += v;
        sumsq[idx] += v * v;
    }
    let bin_centers = (0..bins).map(|i| lo + (i as f64 + 0.5) * width).collect();
    let mut mean = vec![f64::NAN; bins];
    let mut stderr = vec![f64::NAN; bins];
    for i in 0..bins {
        if count[i] == 0 {
            continue;
        }
        let n = count[i] as f64;
        let m = sum[i] / n;
        mean[i] = m;
        stderr[i] = if count[i] > 1 {
            let var = ((sumsq[i] - sum[i] * sum[i] / n) / (n - 1.0)).max(0.0);
            (var / n).sqrt()
        } else {
            0.0
        };
    }
    Ok(BinnedCurve {
        bin_centers,
        mean_scaled_concurrence: mean,
        stderr,
        counts: count,
        out_of_range,
    })
}

/// Deterministic reduction of realization outcomes, keyed by index.
pub fn aggregate(spec: &EnsembleSpec, outcomes: &[RealizationOutcome]) -> Result<(BinnedCurve, GlobalStats)> {
    let mut ordered: Vec<&RealizationOutcome> = outcomes.iter().collect();
    ordered.sort_by_key(|o| o.index);

    let curve = match spec.binning {
        BinningMode::Energy => {
            let all_points: Vec<(f64, f64)> = ordered
                .iter()
                .flat_map(|o| o.points.iter().copied())
                .collect();
            bin_energies(&all_points, spec.energy_bins, spec.energy_range)?
        }
        BinningMode::StateIndex => bin_by_state_index(&ordered)?,
    };

    let n = ordered.len() as f64;
    let sum: f64 = ordered.iter().map(|o| o.scaled_mean).sum();
    let mean = sum / n;
    let stderr = if ordered.len() > 1 {
        let var = ordered
            .iter()
            .map(|o| (o.scaled_mean - mean) * (o.scaled_mean - mean))
            .sum::<f64>()
            / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    Ok((
        curve,
        GlobalStats {
            mean_scaled_concurrence: mean,
            stderr,
            samples: ordered.len(),
        },
    ))
}

fn bin_by_state_index(ordered: &[&RealizationOutcome]) -> Result<BinnedCurve> {
    let Some(first) = ordered.first() else {
        return Err(Error::InvalidParams("no realizations to aggregate".into()));
    };
    let n_states = first.points.len();
    let samples = ordered.len() as f64;
    let mut centers = vec![0.0; n_states];
    let mut sum = vec![0.0; n_states];
    let mut sumsq = vec![0.0; n_states];
    for o in ordered {
        for (beta, &(e, v)) in o.points.iter().enumerate() {
            centers[beta] += e;
            sum[beta] += v;
            sumsq[beta] += v * v;
        }
    }
    let mean: Vec<f64> = sum.iter().map(|s| s / samples).collect();
    let stderr: Vec<f64> = (0..n_states)
        .map(|b| {
            if ordered.len() > 1 {
                let var = ((sumsq[b] - sum[b] * sum[b] / samples) / (samples - 1.0)).max(0.0);
                (var / samples).sqrt()
            } else {
                0.0
            }
        })
        .collect();
    Ok(BinnedCurve {
        bin_centers: centers.iter().map(|c| c / samples).collect(),
        mean_scaled_concurrence: mean,
        stderr,
        counts: vec![ordered.len(); n_states],
        out_of_range: 0,
    })
}

/// Run the full ensemble: realizations in parallel, reduction in index
/// order. Identical specs give bitwise-identical results regardless of
/// worker count.
pub fn run_ensemble(spec: &EnsembleSpec) -> Result<(BinnedCurve, GlobalStats)> {
    spec.validate()?;
    let mut params = spec.params.clone();
    params.seed = spec.base_seed;
    let samples = spec.effective_samples();
    let outcomes: Vec<RealizationOutcome> = (0..samples as u64)
        .into_par_iter()
        .map(|r| run_realization(&params, r))
        .collect::<Result<Vec<_>>>()?;
    aggregate(spec, &outcomes)
}
