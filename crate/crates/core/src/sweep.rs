//! Parameter sweeps over (λ, V_a−V_b, α, μ) for several chain sizes, and
//! the estimators that turn concurrence curves into numbers: transition
//! points (jump / max curvature / max slope) and mobility edges
//! (outermost threshold crossings of the binned curve).
//!
//! The estimators are deliberately simple and reproducible; the underlying
//! physics literature locates these features by eye.

use rayon::prelude::*;

use crate::ensemble::{run_ensemble, BinnedCurve, EnsembleSpec, GlobalStats};
use crate::error::{Error, Result};
use crate::models::{ModelKind, ModelParams};
use crate::rng::mix_seed;

/// Which model parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    /// λ of the slowly varying potential.
    Lambda,
    /// V_a − V_b of the dimer model (V_b held fixed).
    DimerDelta,
    /// Spectral exponent α of the correlated potential.
    CorrAlpha,
    /// Hopping exponent μ of the long-range hopping model.
    HoppingMu,
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::Lambda => "lambda",
            SweepParameter::DimerDelta => "va_minus_vb",
            SweepParameter::CorrAlpha => "alpha",
            SweepParameter::HoppingMu => "mu",
        }
    }

    /// Model parameters at one grid point.
    pub fn apply(&self, base: &ModelParams, value: f64) -> Result<ModelParams> {
        let mut params = base.clone();
        match (&mut params.kind, self) {
            (ModelKind::SlowlyVarying { lambda, .. }, SweepParameter::Lambda) => *lambda = value,
            (ModelKind::RandomDimer { va, vb, .. }, SweepParameter::DimerDelta) => {
                *va = *vb + value
            }
            (ModelKind::LongRangeCorrelated { alpha }, SweepParameter::CorrAlpha) => {
                *alpha = value
            }
            (ModelKind::LongRangeHopping { mu, .. }, SweepParameter::HoppingMu) => *mu = value,
            _ => {
                return Err(Error::InvalidParams(format!(
                    "sweep parameter {} does not apply to this model family",
                    self.name()
                )))
            }
        }
        Ok(params)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum TransitionMethod {
    MaxSlope,
    MaxCurvature,
    JumpDetect,
    LinearFitDeparture,
}

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct TransitionEstimate {
    pub location: f64,
    pub method: TransitionMethod,
    /// One grid spacing.
    pub uncertainty: f64,
}

/// All estimators evaluated on one curve. `headline` follows the default
/// rule: jump when one fires, max curvature otherwise.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TransitionSummary {
    pub headline: Option<TransitionEstimate>,
    pub jump: Option<TransitionEstimate>,
    pub max_curvature: Option<TransitionEstimate>,
    pub max_slope: Option<TransitionEstimate>,
    pub linear_fit_departure: Option<TransitionEstimate>,
    /// |dv/dx| at the max-slope point; grows with N at a sharpening
    /// transition.
    pub max_slope_magnitude: f64,
}

fn flat_summary() -> TransitionSummary {
    TransitionSummary {
        headline: None,
        jump: None,
        max_curvature: None,
        max_slope: None,
        linear_fit_departure: None,
        max_slope_magnitude: 0.0,
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// 3-point moving average; endpoints pass through unchanged.
fn smooth3(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut out = values.to_vec();
    for i in 1..n - 1 {
        out[i] = (values[i - 1] + values[i] + values[i + 1]) / 3.0;
    }
    out
}

/// Locate a transition on a (grid, values) curve.
///
/// JumpDetect fires when a single raw step exceeds 3× the median absolute
/// step (location: interval midpoint); otherwise MaxCurvature returns the
/// grid point with the largest |second central difference|. The slope and
/// curvature estimators run on a 3-point moving average so that sample
/// noise and finite-size wiggles don't outvote the kink they look for;
/// jump detection stays on the raw curve since a genuine discontinuity
/// must survive without help. A flat curve (max − min within 10× the
/// typical stderr) yields no transition. All estimators are invariant
/// under affine maps of the value axis.
pub fn detect_transition(grid: &[f64], values: &[f64], stderr: &[f64]) -> Result<TransitionSummary> {
    if grid.len() < 5 {
        return Err(Error::InvalidParams(format!(
            "transition detection needs >= 5 grid points, got {}",
            grid.len()
        )));
    }
    if grid.len() != values.len() || grid.len() != stderr.len() {
        return Err(Error::InvalidParams("grid/value length mismatch".into()));
    }
    let spacing = grid[1] - grid[0];
    let vmax = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let vmin = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let typical_err = stderr.iter().sum::<f64>() / stderr.len() as f64;
    if vmax - vmin <= 10.0 * typical_err + f64::EPSILON * vmax.abs().max(1.0) {
        return Ok(flat_summary());
    }

    let raw_abs_steps: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let med = median(raw_abs_steps.clone());
    let (raw_idx, raw_mag) = raw_abs_steps
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, &s)| (i, s))
        .unwrap();
    let jump = if raw_mag > 3.0 * med {
        Some(TransitionEstimate {
            location: 0.5 * (grid[raw_idx] + grid[raw_idx + 1]),
            method: TransitionMethod::JumpDetect,
            uncertainty: spacing,
        })
    } else {
        None
    };

    let smoothed = smooth3(values);
    let (slope_idx, slope_mag) = smoothed
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();
    let max_slope = Some(TransitionEstimate {
        location: 0.5 * (grid[slope_idx] + grid[slope_idx + 1]),
        method: TransitionMethod::MaxSlope,
        uncertainty: spacing,
    });

    let curv_idx = (1..grid.len() - 1)
        .max_by(|&a, &b| {
            let ca = (smoothed[a + 1] - 2.0 * smoothed[a] + smoothed[a - 1]).abs();
            let cb = (smoothed[b + 1] - 2.0 * smoothed[b] + smoothed[b - 1]).abs();
            ca.partial_cmp(&cb).unwrap()
        })
        .unwrap();
    let max_curvature = Some(TransitionEstimate {
        location: grid[curv_idx],
        method: TransitionMethod::MaxCurvature,
        uncertainty: spacing,
    });

    let linear_fit_departure = linear_fit_departure(grid, &smoothed, spacing);

    Ok(TransitionSummary {
        headline: jump.or(max_curvature),
        jump,
        max_curvature,
        max_slope,
        linear_fit_departure,
        max_slope_magnitude: slope_mag / spacing.abs(),
    })
}

/// Optional fourth estimator: fit a line to the leading third of the
/// curve and report the first grid point departing from it by more than
/// 5× the fit's rms residual.
fn linear_fit_departure(grid: &[f64], values: &[f64], spacing: f64) -> Option<TransitionEstimate> {
    let k = (grid.len() / 3).max(3);
    if k >= grid.len() {
        return None;
    }
    let n = k as f64;
    let sx: f64 = grid[..k].iter().sum();
    let sy: f64 = values[..k].iter().sum();
    let sxx: f64 = grid[..k].iter().map(|x| x * x).sum();
    let sxy: f64 = grid[..k].iter().zip(&values[..k]).map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < f64::EPSILON {
        return None;
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let rms = (grid[..k]
        .iter()
        .zip(&values[..k])
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum::<f64>()
        / n)
        .sqrt();
    let scale = rms.max(1e-12 * values.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    for i in k..grid.len() {
        if (values[i] - (slope * grid[i] + intercept)).abs() > 5.0 * scale {
            return Some(TransitionEstimate {
                location: grid[i],
                method: TransitionMethod::LinearFitDeparture,
                uncertainty: spacing,
            });
        }
    }
    None
}

/// Mobility-edge estimate from a binned concurrence curve.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct MobilityEdgeEstimate {
    pub lower_edge: Option<f64>,
    pub upper_edge: Option<f64>,
    pub threshold_used: f64,
    pub n: usize,
}

/// Half the empirical extended-state plateau value 1.6.
pub const DEFAULT_EDGE_THRESHOLD: f64 = 0.8;

/// Outermost threshold crossings of the binned curve, linearly
/// interpolated: the lower edge is the first upward crossing, the upper
/// edge the last downward crossing. A curve that never crosses the
/// threshold has no edges.
pub fn detect_mobility_edges(
    curve: &BinnedCurve,
    threshold: f64,
    n: usize,
) -> Result<MobilityEdgeEstimate> {
    let bins: Vec<(f64, f64)> = curve.populated().map(|(e, m, _, _)| (e, m)).collect();
    if bins.len() < 16 {
        return Err(Error::InvalidParams(format!(
            "mobility-edge detection needs >= 16 populated bins, got {}",
            bins.len()
        )));
    }
    let interp = |a: (f64, f64), b: (f64, f64)| -> f64 {
        a.0 + (threshold - a.1) * (b.0 - a.0) / (b.1 - a.1)
    };
    let mut lower_edge = None;
    for w in bins.windows(2) {
        if w[0].1 < threshold && w[1].1 >= threshold {
            lower_edge = Some(interp(w[0], w[1]));
            break;
        }
    }
    let mut upper_edge = None;
    for w in bins.windows(2).rev() {
        if w[0].1 >= threshold && w[1].1 < threshold {
            upper_edge = Some(interp(w[0], w[1]));
            break;
        }
    }
    Ok(MobilityEdgeEstimate {
        lower_edge,
        upper_edge,
        threshold_used: threshold,
        n,
    })
}

/// Chain size plus its sample count (the literature shrinks ensembles as
/// N grows; self-averaging makes that harmless).
#[derive(Debug, Clone, Copy)]
pub struct SweepSize {
    pub n: usize,
    pub samples: usize,
}

/// One size's series in a sweep.
#[derive(Debug, Clone)]
pub struct SweepSeries {
    pub n: usize,
    pub samples: usize,
    pub stats: Vec<GlobalStats>,
    pub transitions: TransitionSummary,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub parameter: SweepParameter,
    pub grid: Vec<f64>,
    pub series: Vec<SweepSeries>,
}

/// Sweep one parameter across `grid` for each chain size. Grid points are
/// independent jobs; seeds derive from (base_seed, grid index), and each
/// ensemble derives per-realization streams from there, so scheduling
/// cannot affect any result.
pub fn sweep_parameter(
    base: &EnsembleSpec,
    parameter: SweepParameter,
    grid: &[f64],
    sizes: &[SweepSize],
) -> Result<SweepResult> {
    if grid.is_empty() {
        return Err(Error::InvalidParams("empty sweep grid".into()));
    }
    if !grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidParams(
            "sweep grid must be strictly increasing".into(),
        ));
    }
    let mut series = Vec::with_capacity(sizes.len());
    for &SweepSize { n, samples } in sizes {
        let stats: Vec<GlobalStats> = grid
            .par_iter()
            .enumerate()
            .map(|(gi, &value)| {
                let mut spec = base.clone();
                spec.params = parameter.apply(&base.params, value)?;
                spec.params.n = n;
                spec.samples = samples;
                spec.energy_bins = crate::ensemble::default_bins(n);
                spec.base_seed = mix_seed(base.base_seed, gi as u64);
                run_ensemble(&spec)
                    .map(|(_, stats)| stats)
                    .map_err(|e| e.with_context(&format!("{}={value}, N={n}", parameter.name())))
            })
            .collect::<Result<Vec<_>>>()?;
        let values: Vec<f64> = stats.iter().map(|s| s.mean_scaled_concurrence).collect();
        let errors: Vec<f64> = stats.iter().map(|s| s.stderr).collect();
        let transitions = detect_transition(grid, &values, &errors)?;
        series.push(SweepSeries {
            n,
            samples,
            stats,
            transitions,
        });
    }
    Ok(SweepResult {
        parameter,
        grid: grid.to_vec(),
        series,
    })
}

/// Uniform grid helper: start, stop inclusive (within half a step), step.
pub fn uniform_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if step <= 0.0 || stop < start {
        return Err(Error::InvalidParams(format!(
            "bad grid spec: start {start}, stop {stop}, step {step}"
        )));
    }
    let count = ((stop - start) / step + 0.5).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::bin_energies;

    fn no_err(n: usize) -> Vec<f64> {
        vec![0.0; n]
    }

    #[test]
    fn step_curve_detected_as_jump() {
        let grid: Vec<f64> = (0..11).map(|i| i as f64 * 0.1).collect();
        let values: Vec<f64> = grid.iter().map(|&x| if x < 0.5 { 1.0 } else { 0.0 }).collect();
        let summary = detect_transition(&grid, &values, &no_err(11)).unwrap();
        let jump = summary.jump.expect("jump should fire");
        assert!((jump.location - 0.45).abs() < 1e-12);
        assert_eq!(summary.headline.unwrap().method, TransitionMethod::JumpDetect);
    }

    #[test]
    fn logistic_curve_max_slope_at_center() {
        let grid: Vec<f64> = (0..41).map(|i| i as f64 * 0.1).collect();
        let x0 = 2.0;
        let values: Vec<f64> = grid.iter().map(|&x| 1.0 / (1.0 + (-(x - x0) / 0.3).exp())).collect();
        let summary = detect_transition(&grid, &values, &no_err(41)).unwrap();
        let slope = summary.max_slope.unwrap();
        assert!((slope.location - x0).abs() <= 0.1 + 1e-12, "{}", slope.location);
    }

    #[test]
    fn affine_invariance_of_locations() {
        let grid: Vec<f64> = (0..21).map(|i| i as f64 * 0.2).collect();
        let values: Vec<f64> = grid
            .iter()
            .map(|&x| 1.0 / (1.0 + (-(x - 2.0) / 0.4).exp()))
            .collect();
        let s1 = detect_transition(&grid, &values, &no_err(21)).unwrap();
        let mapped: Vec<f64> = values.iter().map(|v| -3.5 * v + 11.0).collect();
        let s2 = detect_transition(&grid, &mapped, &no_err(21)).unwrap();
        assert_eq!(
            s1.max_curvature.unwrap().location,
            s2.max_curvature.unwrap().location
        );
        assert_eq!(s1.max_slope.unwrap().location, s2.max_slope.unwrap().location);
        assert_eq!(s1.jump.is_some(), s2.jump.is_some());
    }

    #[test]
    fn flat_curve_returns_no_transition() {
        let grid: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let values = vec![1.0; 10];
        let summary = detect_transition(&grid, &values, &no_err(10)).unwrap();
        assert!(summary.headline.is_none());
        // noisy but flat relative to its stderr
        let noisy: Vec<f64> = (0..10).map(|i| 1.0 + 0.01 * (i % 2) as f64).collect();
        let summary = detect_transition(&grid, &noisy, &vec![0.1; 10]).unwrap();
        assert!(summary.headline.is_none());
    }

    #[test]
    fn too_few_points_rejected() {
        assert!(detect_transition(&[0.0, 1.0], &[0.0, 1.0], &[0.0, 0.0]).is_err());
    }

    #[test]
    fn edges_from_plateau_curve() {
        // trapezoid: below threshold outside |E| < 1.6, plateau 1.6 inside
        let points: Vec<(f64, f64)> = (0..4000)
            .map(|i| {
                let e = -2.4 + 4.8 * i as f64 / 3999.0;
                let v = if e.abs() < 1.6 { 1.6 } else { 0.2 };
                (e, v)
            })
            .collect();
        let curve = bin_energies(&points, 48, None).unwrap();
        let est = detect_mobility_edges(&curve, 0.8, 800).unwrap();
        let lower = est.lower_edge.unwrap();
        let upper = est.upper_edge.unwrap();
        assert!((lower + 1.6).abs() < 0.15, "lower {lower}");
        assert!((upper - 1.6).abs() < 0.15, "upper {upper}");
        assert!(lower <= upper);
    }

    #[test]
    fn constant_curve_above_threshold_has_no_edges() {
        let points: Vec<(f64, f64)> = (0..2000)
            .map(|i| (i as f64 / 1000.0, 1.6))
            .collect();
        let curve = bin_energies(&points, 20, None).unwrap();
        let est = detect_mobility_edges(&curve, 0.8, 400).unwrap();
        assert!(est.lower_edge.is_none());
        assert!(est.upper_edge.is_none());
    }

    #[test]
    fn edges_match_brute_force_indicator() {
        // brute force: first/last boundary of the {mean >= θ} indicator
        let points: Vec<(f64, f64)> = (0..3000)
            .map(|i| {
                let e = i as f64 / 1000.0;
                (e, (3.0 * e).sin().abs())
            })
            .collect();
        let curve = bin_energies(&points, 30, None).unwrap();
        let theta = 0.5;
        let est = detect_mobility_edges(&curve, theta, 0).unwrap();
        let bins: Vec<(f64, f64)> = curve.populated().map(|(e, m, _, _)| (e, m)).collect();
        let first_up = bins
            .windows(2)
            .find(|w| w[0].1 < theta && w[1].1 >= theta)
            .map(|w| (w[0].0, w[1].0));
        let last_down = bins
            .windows(2)
            .rev()
            .find(|w| w[0].1 >= theta && w[1].1 < theta)
            .map(|w| (w[0].0, w[1].0));
        match (est.lower_edge, first_up) {
            (Some(e), Some((a, b))) => assert!(a <= e && e <= b),
            (None, None) => {}
            other => panic!("mismatch {other:?}"),
        }
        match (est.upper_edge, last_down) {
            (Some(e), Some((a, b))) => assert!(a <= e && e <= b),
            (None, None) => {}
            other => panic!("mismatch {other:?}"),
        }
    }

    #[test]
    fn too_few_bins_rejected() {
        let points = vec![(0.0, 1.0), (1.0, 1.0)];
        let curve = bin_energies(&points, 8, None).unwrap();
        assert!(detect_mobility_edges(&curve, 0.8, 0).is_err());
    }

    #[test]
    fn uniform_grid_inclusive() {
        let g = uniform_grid(0.0, 4.0, 0.1).unwrap();
        assert_eq!(g.len(), 41);
        assert!((g[40] - 4.0).abs() < 1e-12);
        assert!(uniform_grid(1.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn parameter_apply_respects_family() {
        use crate::models::Boundary;
        let dimer = ModelParams {
            kind: ModelKind::RandomDimer {
                va: 2.0,
                vb: 1.0,
                q: 0.5,
            },
            n: 16,
            t: 1.0,
            seed: 0,
            boundary: Boundary::Open,
        };
        let at = SweepParameter::DimerDelta.apply(&dimer, 1.5).unwrap();
        match at.kind {
            ModelKind::RandomDimer { va, vb, .. } => {
                assert_eq!(vb, 1.0);
                assert!((va - 2.5).abs() < 1e-15);
            }
            _ => unreachable!(),
        }
        assert!(SweepParameter::Lambda.apply(&dimer, 1.0).is_err());
    }
}
