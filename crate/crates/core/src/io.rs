//! Configuration parsing and deterministic serialization.
//!
//! Configs are TOML; unknown keys are hard errors, and keys that do not
//! belong to the selected model family are rejected too. Every output
//! file embeds the fully resolved configuration (defaults included) as
//! `#`-prefixed header lines, so re-running from the embedded config
//! reproduces the file bitwise.
//!
//! Floats are serialized with 17 significant digits, which round-trips
//! f64 exactly.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::concurrence::ConcurrenceReport;
use crate::ensemble::{default_bins, BinnedCurve, BinningMode, EnsembleSpec, GlobalStats};
use crate::error::{Error, Result};
use crate::models::{Boundary, Family, ModelKind, ModelParams};
use crate::sweep::{MobilityEdgeEstimate, SweepParameter, SweepResult, SweepSize};

pub const DEFAULT_SAMPLES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Spectrum,
    Ensemble,
    Sweep,
    Edges,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// On-disk configuration. All model keys are optional at parse time;
/// resolution checks that exactly the keys of the chosen family are set.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub family: Option<String>,
    pub n: Option<usize>,
    pub t: Option<f64>,
    pub lambda: Option<f64>,
    /// πα of the slowly varying potential (quoted directly, no π division).
    pub alpha_pi: Option<f64>,
    pub nu: Option<f64>,
    pub va: Option<f64>,
    pub vb: Option<f64>,
    pub q: Option<f64>,
    pub alpha: Option<f64>,
    pub w: Option<f64>,
    pub mu: Option<f64>,
    pub j: Option<f64>,
    pub ring_distance: Option<bool>,
    pub seed: Option<u64>,
    pub boundary: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSection {
    pub samples: Option<usize>,
    pub energy_bins: Option<usize>,
    pub energy_range: Option<[f64; 2]>,
    pub base_seed: Option<u64>,
    pub binning: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub parameter: Option<String>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub step: Option<f64>,
    pub sizes: Option<Vec<usize>>,
    /// Parallel to `sizes`; defaults to the ensemble sample count.
    pub samples_per_size: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgesSection {
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<String>,
    pub format: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub command: Option<String>,
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub ensemble: EnsembleSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub edges: EdgesSection,
    #[serde(default)]
    pub output: OutputSection,
}

/// Fully validated run description with every default made explicit.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub spec: EnsembleSpec,
    pub realization: u64,
    pub sweep_parameter: Option<SweepParameter>,
    pub sweep_grid: Option<Vec<f64>>,
    pub sweep_sizes: Vec<SweepSize>,
    pub edge_threshold: f64,
    pub output_path: String,
    pub format: OutputFormat,
    /// The resolved config file, re-serializable for provenance headers.
    pub resolved: ConfigFile,
}

fn cfg_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn required<T: Copy>(v: Option<T>, key: &str, family: &str) -> Result<T> {
    v.ok_or_else(|| cfg_err(format!("model.{key} is required for family {family}")))
}

fn reject_foreign(model: &ModelSection, family: &str, allowed: &[&str]) -> Result<()> {
    let present: [(&str, bool); 10] = [
        ("lambda", model.lambda.is_some()),
        ("alpha_pi", model.alpha_pi.is_some()),
        ("nu", model.nu.is_some()),
        ("va", model.va.is_some()),
        ("vb", model.vb.is_some()),
        ("q", model.q.is_some()),
        ("alpha", model.alpha.is_some()),
        ("w", model.w.is_some()),
        ("mu", model.mu.is_some()),
        ("ring_distance", model.ring_distance.is_some()),
    ];
    for (key, set) in present {
        if set && !allowed.contains(&key) {
            return Err(cfg_err(format!(
                "model.{key} does not apply to family {family}"
            )));
        }
    }
    Ok(())
}

fn parse_boundary(s: Option<&str>, default: Boundary) -> Result<Boundary> {
    match s {
        None => Ok(default),
        Some("open") => Ok(Boundary::Open),
        Some("periodic") => Ok(Boundary::Periodic),
        Some(other) => Err(cfg_err(format!(
            "model.boundary must be 'open' or 'periodic', got '{other}'"
        ))),
    }
}

/// Build validated `ModelParams` from a model section, filling defaults.
/// Returns the params plus the section with every default made explicit.
pub fn resolve_model(model: &ModelSection) -> Result<(ModelParams, ModelSection)> {
    let family = model.family.as_deref().ok_or_else(|| {
        cfg_err(
            "model.family is required (slowly_varying | random_dimer | \
             long_range_correlated | long_range_hopping); \
             also required: model.n, output.path",
        )
    })?;
    let n = model.n.ok_or_else(|| cfg_err("model.n is required"))?;
    let t = model.t.unwrap_or(1.0);
    let seed = model.seed.unwrap_or(0);
    let mut resolved = ModelSection {
        family: Some(family.to_string()),
        n: Some(n),
        t: Some(t),
        seed: Some(seed),
        ..Default::default()
    };
    let (kind, default_boundary) = match family {
        "slowly_varying" => {
            reject_foreign(model, family, &["lambda", "alpha_pi", "nu"])?;
            let lambda = required(model.lambda, "lambda", family)?;
            let alpha_pi = required(model.alpha_pi, "alpha_pi", family)?;
            let nu = required(model.nu, "nu", family)?;
            resolved.lambda = Some(lambda);
            resolved.alpha_pi = Some(alpha_pi);
            resolved.nu = Some(nu);
            (
                ModelKind::SlowlyVarying {
                    lambda,
                    pi_alpha: alpha_pi,
                    nu,
                },
                Boundary::Open,
            )
        }
        "random_dimer" => {
            reject_foreign(model, family, &["va", "vb", "q"])?;
            let va = required(model.va, "va", family)?;
            let vb = model.vb.unwrap_or(1.0);
            let q = model.q.unwrap_or(0.5);
            resolved.va = Some(va);
            resolved.vb = Some(vb);
            resolved.q = Some(q);
            (ModelKind::RandomDimer { va, vb, q }, Boundary::Open)
        }
        "long_range_correlated" => {
            reject_foreign(model, family, &["alpha"])?;
            let alpha = required(model.alpha, "alpha", family)?;
            resolved.alpha = Some(alpha);
            (ModelKind::LongRangeCorrelated { alpha }, Boundary::Open)
        }
        "long_range_hopping" => {
            reject_foreign(model, family, &["w", "mu", "ring_distance"])?;
            let w = required(model.w, "w", family)?;
            let mu = required(model.mu, "mu", family)?;
            let j = model.j.unwrap_or(1.0);
            let ring_distance = model.ring_distance.unwrap_or(true);
            resolved.w = Some(w);
            resolved.mu = Some(mu);
            resolved.j = Some(j);
            resolved.ring_distance = Some(ring_distance);
            (
                ModelKind::LongRangeHopping {
                    w,
                    mu,
                    j,
                    ring_distance,
                },
                Boundary::Periodic,
            )
        }
        other => {
            return Err(cfg_err(format!(
                "unknown model.family '{other}' (expected slowly_varying | random_dimer | \
                 long_range_correlated | long_range_hopping)"
            )))
        }
    };
    if model.j.is_some() && family != "long_range_hopping" {
        return Err(cfg_err(format!(
            "model.j does not apply to family {family}"
        )));
    }
    let boundary = parse_boundary(model.boundary.as_deref(), default_boundary)?;
    resolved.boundary = Some(match boundary {
        Boundary::Open => "open".to_string(),
        Boundary::Periodic => "periodic".to_string(),
    });
    let params = ModelParams {
        kind,
        n,
        t,
        seed,
        boundary,
    };
    params
        .validate()
        .map_err(|e| cfg_err(format!("{e}")))?;
    Ok((params, resolved))
}

/// Parse and fully resolve a TOML config. Unknown keys, missing required
/// keys, and out-of-range values are all hard errors.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let file: ConfigFile =
        toml::from_str(text).map_err(|e| cfg_err(format!("config parse error: {e}")))?;
    resolve_config(&file)
}

pub fn resolve_config(file: &ConfigFile) -> Result<RunConfig> {
    let command = match file.command.as_deref() {
        Some("spectrum") => Command::Spectrum,
        Some("ensemble") => Command::Ensemble,
        Some("sweep") => Command::Sweep,
        Some("edges") => Command::Edges,
        Some(other) => {
            return Err(cfg_err(format!(
                "unknown command '{other}' (expected spectrum | ensemble | sweep | edges)"
            )))
        }
        None => {
            return Err(cfg_err(
                "command is required (spectrum | ensemble | sweep | edges); \
                 also required: model.family, model.n, output.path",
            ))
        }
    };

    let (params, resolved_model) = resolve_model(&file.model)?;

    let samples = file.ensemble.samples.unwrap_or(DEFAULT_SAMPLES);
    let energy_bins = file.ensemble.energy_bins.unwrap_or(default_bins(params.n));
    let energy_range = file.ensemble.energy_range.map(|[lo, hi]| (lo, hi));
    let base_seed = file.ensemble.base_seed.unwrap_or(params.seed);
    let binning = match file.ensemble.binning.as_deref() {
        None | Some("energy") => BinningMode::Energy,
        Some("state_index") => BinningMode::StateIndex,
        Some(other) => {
            return Err(cfg_err(format!(
                "ensemble.binning must be 'energy' or 'state_index', got '{other}'"
            )))
        }
    };
    let spec = EnsembleSpec {
        params,
        samples,
        energy_bins,
        energy_range,
        base_seed,
        binning,
    };
    spec.validate().map_err(|e| cfg_err(format!("{e}")))?;

    let (sweep_parameter, sweep_grid, sweep_sizes, resolved_sweep) = if command == Command::Sweep {
        let name = file
            .sweep
            .parameter
            .as_deref()
            .ok_or_else(|| cfg_err("sweep.parameter is required for the sweep command"))?;
        let parameter = match name {
            "lambda" => SweepParameter::Lambda,
            "va_minus_vb" => SweepParameter::DimerDelta,
            "alpha" => SweepParameter::CorrAlpha,
            "mu" => SweepParameter::HoppingMu,
            other => {
                return Err(cfg_err(format!(
                    "unknown sweep.parameter '{other}' (expected lambda | va_minus_vb | alpha | mu)"
                )))
            }
        };
        let expected_family = match parameter {
            SweepParameter::Lambda => Family::SlowlyVarying,
            SweepParameter::DimerDelta => Family::RandomDimer,
            SweepParameter::CorrAlpha => Family::LongRangeCorrelated,
            SweepParameter::HoppingMu => Family::LongRangeHopping,
        };
        if spec.params.family() != expected_family {
            return Err(cfg_err(format!(
                "sweep.parameter '{name}' does not apply to model.family '{}'",
                file.model.family.as_deref().unwrap_or("?")
            )));
        }
        let start = file
            .sweep
            .start
            .ok_or_else(|| cfg_err("sweep.start is required"))?;
        let stop = file
            .sweep
            .stop
            .ok_or_else(|| cfg_err("sweep.stop is required"))?;
        let step = file
            .sweep
            .step
            .ok_or_else(|| cfg_err("sweep.step is required"))?;
        let grid =
            crate::sweep::uniform_grid(start, stop, step).map_err(|e| cfg_err(format!("{e}")))?;
        let sizes = file
            .sweep
            .sizes
            .clone()
            .unwrap_or_else(|| vec![spec.params.n]);
        let per_size = match &file.sweep.samples_per_size {
            Some(list) => {
                if list.len() != sizes.len() {
                    return Err(cfg_err(format!(
                        "sweep.samples_per_size has {} entries for {} sizes",
                        list.len(),
                        sizes.len()
                    )));
                }
                list.clone()
            }
            None => vec![samples; sizes.len()],
        };
        let sweep_sizes: Vec<SweepSize> = sizes
            .iter()
            .zip(&per_size)
            .map(|(&n, &samples)| SweepSize { n, samples })
            .collect();
        let resolved_sweep = SweepSection {
            parameter: Some(name.to_string()),
            start: Some(start),
            stop: Some(stop),
            step: Some(step),
            sizes: Some(sizes),
            samples_per_size: Some(per_size),
        };
        (Some(parameter), Some(grid), sweep_sizes, resolved_sweep)
    } else {
        (
            None,
            None,
            vec![SweepSize {
                n: spec.params.n,
                samples,
            }],
            SweepSection::default(),
        )
    };

    let edge_threshold = file
        .edges
        .threshold
        .unwrap_or(crate::sweep::DEFAULT_EDGE_THRESHOLD);
    if !(edge_threshold > 0.0) {
        return Err(cfg_err("edges.threshold must be positive"));
    }

    let output_path = file
        .output
        .path
        .clone()
        .ok_or_else(|| cfg_err("output.path is required"))?;
    let format = match file.output.format.as_deref() {
        None | Some("csv") => OutputFormat::Csv,
        Some("json") => OutputFormat::Json,
        Some(other) => {
            return Err(cfg_err(format!(
                "output.format must be 'csv' or 'json', got '{other}'"
            )))
        }
    };

    let resolved = ConfigFile {
        command: Some(
            match command {
                Command::Spectrum => "spectrum",
                Command::Ensemble => "ensemble",
                Command::Sweep => "sweep",
                Command::Edges => "edges",
            }
            .to_string(),
        ),
        model: resolved_model,
        ensemble: EnsembleSection {
            samples: Some(samples),
            energy_bins: Some(energy_bins),
            energy_range: file.ensemble.energy_range,
            base_seed: Some(base_seed),
            binning: Some(
                match binning {
                    BinningMode::Energy => "energy",
                    BinningMode::StateIndex => "state_index",
                }
                .to_string(),
            ),
        },
        sweep: resolved_sweep,
        edges: EdgesSection {
            threshold: Some(edge_threshold),
        },
        output: OutputSection {
            path: Some(output_path.clone()),
            format: Some(
                match format {
                    OutputFormat::Csv => "csv",
                    OutputFormat::Json => "json",
                }
                .to_string(),
            ),
        },
    };

    Ok(RunConfig {
        command,
        spec,
        realization: 0,
        sweep_parameter,
        sweep_grid,
        sweep_sizes,
        edge_threshold,
        output_path,
        format,
        resolved,
    })
}

/// 17 significant digits; round-trips every finite f64 bitwise.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// The fully resolved config as `#`-prefixed TOML lines.
pub fn provenance_header(resolved: &ConfigFile) -> String {
    let toml = toml::to_string(resolved).expect("resolved config always serializes");
    let mut out = String::new();
    for line in toml.lines() {
        let _ = writeln!(out, "# {line}");
    }
    out
}

fn write_file(path: &str, contents: &str) -> Result<()> {
    std::fs::write(Path::new(path), contents).map_err(|source| Error::Io {
        path: path.to_string(),
        source,
    })
}

/// Per-state CSV: `index,energy,state_concurrence,scaled_concurrence,participation_ratio`.
pub fn per_state_csv(report: &ConcurrenceReport, header: &str) -> String {
    let mut out = String::from(header);
    out.push_str("index,energy,state_concurrence,scaled_concurrence,participation_ratio\n");
    for (i, r) in report.per_state.iter().enumerate() {
        let _ = writeln!(
            out,
            "{i},{},{},{},{}",
            fmt_f64(r.energy),
            fmt_f64(r.concurrence),
            fmt_f64(r.scaled_concurrence),
            fmt_f64(r.participation_ratio)
        );
    }
    out
}

/// Binned CSV: `energy,scaled_concurrence_mean,stderr,count`. Empty bins
/// are omitted entirely; a count of 0 never appears.
pub fn binned_csv(curve: &BinnedCurve, global: Option<&GlobalStats>, header: &str) -> String {
    let mut out = String::from(header);
    if let Some(g) = global {
        let _ = writeln!(
            out,
            "# global: scaled_concurrence_mean={} stderr={} samples={}",
            fmt_f64(g.mean_scaled_concurrence),
            fmt_f64(g.stderr),
            g.samples
        );
    }
    if curve.out_of_range > 0 {
        let _ = writeln!(out, "# out_of_range_states={}", curve.out_of_range);
    }
    out.push_str("energy,scaled_concurrence_mean,stderr,count\n");
    for (e, m, s, c) in curve.populated() {
        let _ = writeln!(out, "{},{},{},{c}", fmt_f64(e), fmt_f64(m), fmt_f64(s));
    }
    out
}

/// Sweep CSV: `<parameter>,N,scaled_global_concurrence,stderr`, with the
/// transition estimates of every series as header comments.
pub fn sweep_csv(result: &SweepResult, header: &str) -> String {
    let mut out = String::from(header);
    for series in &result.series {
        let describe = |tag: &str, est: &Option<crate::sweep::TransitionEstimate>| match est {
            Some(t) => format!(
                "# transition N={} method={tag} location={} uncertainty={}\n",
                series.n,
                fmt_f64(t.location),
                fmt_f64(t.uncertainty)
            ),
            None => format!("# transition N={} method={tag} location=none\n", series.n),
        };
        out.push_str(&describe("jump", &series.transitions.jump));
        out.push_str(&describe("max_curvature", &series.transitions.max_curvature));
        out.push_str(&describe("max_slope", &series.transitions.max_slope));
        out.push_str(&describe(
            "linear_fit_departure",
            &series.transitions.linear_fit_departure,
        ));
        let _ = writeln!(
            out,
            "# max_slope_magnitude N={} value={}",
            series.n,
            fmt_f64(series.transitions.max_slope_magnitude)
        );
    }
    let _ = writeln!(
        out,
        "{},N,scaled_global_concurrence,stderr",
        result.parameter.name()
    );
    for series in &result.series {
        for (x, stats) in result.grid.iter().zip(&series.stats) {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                fmt_f64(*x),
                series.n,
                fmt_f64(stats.mean_scaled_concurrence),
                fmt_f64(stats.stderr)
            );
        }
    }
    out
}

/// Edges CSV: one row per detected estimate; absent edges are empty fields.
pub fn edges_csv(est: &MobilityEdgeEstimate, header: &str) -> String {
    let mut out = String::from(header);
    out.push_str("lower_edge,upper_edge,threshold,N\n");
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    let _ = writeln!(
        out,
        "{},{},{},{}",
        opt(est.lower_edge),
        opt(est.upper_edge),
        fmt_f64(est.threshold_used),
        est.n
    );
    out
}

fn json_wrap(resolved: &ConfigFile, payload: serde_json::Value) -> String {
    let doc = serde_json::json!({
        "config": resolved,
        "result": payload,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("json serialization");
    s.push('\n');
    s
}

pub fn per_state_json(report: &ConcurrenceReport, resolved: &ConfigFile) -> String {
    let states: Vec<serde_json::Value> = report
        .per_state
        .iter()
        .enumerate()
        .map(|(i, r)| {
            serde_json::json!({
                "index": i,
                "energy": r.energy,
                "state_concurrence": r.concurrence,
                "scaled_concurrence": r.scaled_concurrence,
                "participation_ratio": r.participation_ratio,
            })
        })
        .collect();
    json_wrap(
        resolved,
        serde_json::json!({
            "per_state": states,
            "mean_concurrence": report.mean_concurrence,
            "scaled_mean_concurrence": report.scaled_mean_concurrence,
            "m": report.m,
        }),
    )
}

pub fn binned_json(
    curve: &BinnedCurve,
    global: Option<&GlobalStats>,
    resolved: &ConfigFile,
) -> String {
    let bins: Vec<serde_json::Value> = curve
        .populated()
        .map(|(e, m, s, c)| {
            serde_json::json!({
                "energy": e,
                "scaled_concurrence_mean": m,
                "stderr": s,
                "count": c,
            })
        })
        .collect();
    json_wrap(
        resolved,
        serde_json::json!({
            "bins": bins,
            "out_of_range_states": curve.out_of_range,
            "global": global.map(|g| serde_json::json!({
                "scaled_concurrence_mean": g.mean_scaled_concurrence,
                "stderr": g.stderr,
                "samples": g.samples,
            })),
        }),
    )
}

pub fn sweep_json(result: &SweepResult, resolved: &ConfigFile) -> String {
    let series: Vec<serde_json::Value> = result
        .series
        .iter()
        .map(|s| {
            let points: Vec<serde_json::Value> = result
                .grid
                .iter()
                .zip(&s.stats)
                .map(|(x, st)| {
                    serde_json::json!({
                        result.parameter.name(): x,
                        "scaled_global_concurrence": st.mean_scaled_concurrence,
                        "stderr": st.stderr,
                    })
                })
                .collect();
            serde_json::json!({
                "N": s.n,
                "samples": s.samples,
                "points": points,
                "transitions": s.transitions,
            })
        })
        .collect();
    json_wrap(
        resolved,
        serde_json::json!({
            "parameter": result.parameter.name(),
            "series": series,
        }),
    )
}

pub fn edges_json(est: &MobilityEdgeEstimate, resolved: &ConfigFile) -> String {
    json_wrap(
        resolved,
        serde_json::json!({
            "lower_edge": est.lower_edge,
            "upper_edge": est.upper_edge,
            "threshold": est.threshold_used,
            "N": est.n,
        }),
    )
}

/// Series files for plotting: one whitespace-delimited file per chain
/// size (layered smallest N first, matching the figures' top-to-bottom
/// order) plus a manifest listing them.
pub fn emit_plot_data(result: &SweepResult, stem: &str, header: &str) -> Result<Vec<String>> {
    let mut written = Vec::new();
    let mut manifest = String::from(header);
    manifest.push_str("# series files, layered top to bottom\n");
    for series in &result.series {
        let path = format!("{stem}_N{}.dat", series.n);
        let mut out = String::from(header);
        let _ = writeln!(
            out,
            "# columns: {} scaled_global_concurrence stderr",
            result.parameter.name()
        );
        for (x, stats) in result.grid.iter().zip(&series.stats) {
            let _ = writeln!(
                out,
                "{} {} {}",
                fmt_f64(*x),
                fmt_f64(stats.mean_scaled_concurrence),
                fmt_f64(stats.stderr)
            );
        }
        write_file(&path, &out)?;
        let _ = writeln!(manifest, "N={} samples={} file={path}", series.n, series.samples);
        written.push(path);
    }
    let manifest_path = format!("{stem}_manifest.txt");
    write_file(&manifest_path, &manifest)?;
    written.push(manifest_path);
    Ok(written)
}

pub fn write_output(path: &str, contents: &str) -> Result<()> {
    write_file(path, contents)
}
