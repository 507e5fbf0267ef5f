//! End-to-end acceptance gate. Each numbered test prints exactly one
//! `ACCEPTANCE k: PASS/FAIL` line for its criterion; the figure datasets
//! (criteria 1, 3, 4, 5, 6, 8) are produced by running the `modent` binary
//! on the checked-in configs, each executed twice in separate scratch
//! directories so the bitwise-reproducibility claim is tested for real.
//!
//! Full suite runtime is dominated by the fig3d/fig4d ensembles and sits
//! around an hour on one core.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use modent::concurrence::{participation_ratio, state_concurrence};
use modent::eig::{diagonalize, sturm};
use modent::ensemble::{default_bins, run_ensemble, BinningMode, EnsembleSpec};
use modent::models::{
    build_long_range_correlated, Boundary, ModelKind, ModelParams,
};
use modent::sweep::detect_mobility_edges;

fn check(id: u32, ok: bool, detail: &str) {
    use std::io::Write;
    let line = format!(
        "ACCEPTANCE {id}: {} — {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    // The harness captures println! from passing tests; write straight to
    // the process stdout so the report is visible without --nocapture.
    match std::fs::OpenOptions::new().write(true).open("/dev/stdout") {
        Ok(mut out) => {
            let _ = writeln!(out, "{line}");
        }
        Err(_) => println!("{line}"),
    }
    assert!(ok, "acceptance criterion {id} failed: {detail}");
}

// ---------------------------------------------------------------------
// figure runs: each config executed twice, outputs compared bitwise

struct FigRun {
    csv: String,
    /// file name → bytes from run 1
    files: BTreeMap<String, Vec<u8>>,
    bitwise_identical: bool,
    first_run: Duration,
}

fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn run_once(config: &str, dir: &PathBuf) -> BTreeMap<String, Vec<u8>> {
    std::fs::create_dir_all(dir).unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_modent"))
        .arg("--config")
        .arg(config_path(config))
        .current_dir(dir)
        .stdout(std::process::Stdio::null())
        .status()
        .unwrap();
    assert!(status.success(), "{config} run failed");
    let mut files = BTreeMap::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let entry = entry.unwrap();
        files.insert(
            entry.file_name().into_string().unwrap(),
            std::fs::read(entry.path()).unwrap(),
        );
    }
    files
}

fn run_fig(config: &str) -> FigRun {
    let stem = config.trim_end_matches(".toml");
    let base = std::env::temp_dir().join(format!("modent-acc-{}-{stem}", std::process::id()));
    let t0 = Instant::now();
    let first = run_once(config, &base.join("run1"));
    let first_run = t0.elapsed();
    let second = run_once(config, &base.join("run2"));
    let bitwise_identical = first == second;
    let csv = String::from_utf8(first[&format!("{stem}.csv")].clone()).unwrap();
    FigRun {
        csv,
        files: first,
        bitwise_identical,
        first_run,
    }
}

const FIG_CONFIGS: [&str; 5] = [
    "fig1a.toml",
    "fig1d.toml",
    "fig2d.toml",
    "fig3d.toml",
    "fig4d.toml",
];

fn fig(config: &str) -> &'static FigRun {
    static FIGS: [OnceLock<FigRun>; 5] = [const { OnceLock::new() }; 5];
    let i = FIG_CONFIGS.iter().position(|&c| c == config).unwrap();
    FIGS[i].get_or_init(|| run_fig(config))
}

// ---------------------------------------------------------------------
// output parsing

/// Rows of a binned curve file: (energy, mean, stderr, count).
fn parse_binned(csv: &str) -> Vec<(f64, f64, f64, usize)> {
    csv.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("energy"))
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (
                f[0].parse().unwrap(),
                f[1].parse().unwrap(),
                f[2].parse().unwrap(),
                f[3].parse().unwrap(),
            )
        })
        .collect()
}

/// Transition header comments: (N, method) → location (None = "none").
fn parse_transitions(csv: &str) -> BTreeMap<(usize, String), Option<f64>> {
    let mut out = BTreeMap::new();
    for l in csv.lines().filter(|l| l.starts_with("# transition")) {
        let mut n = 0usize;
        let mut method = String::new();
        let mut loc = None;
        for tok in l.trim_start_matches("# transition").split_whitespace() {
            if let Some(v) = tok.strip_prefix("N=") {
                n = v.parse().unwrap();
            } else if let Some(v) = tok.strip_prefix("method=") {
                method = v.to_string();
            } else if let Some(v) = tok.strip_prefix("location=") {
                loc = v.parse::<f64>().ok();
            }
        }
        out.insert((n, method), loc);
    }
    out
}

/// Data rows of a sweep file, grouped by chain size: N → (parameter, mean).
fn parse_sweep_rows(csv: &str) -> BTreeMap<usize, Vec<(f64, f64)>> {
    let mut out: BTreeMap<usize, Vec<(f64, f64)>> = BTreeMap::new();
    for l in csv.lines().filter(|l| !l.starts_with('#')) {
        let f: Vec<&str> = l.split(',').collect();
        let (Ok(x), Ok(n), Ok(m)) = (
            f[0].parse::<f64>(),
            f[1].parse::<usize>(),
            f[2].parse::<f64>(),
        ) else {
            continue; // column header
        };
        out.entry(n).or_default().push((x, m));
    }
    out
}

fn slope_magnitudes(csv: &str) -> BTreeMap<usize, f64> {
    csv.lines()
        .filter(|l| l.starts_with("# max_slope_magnitude"))
        .map(|l| {
            let mut n = 0usize;
            let mut v = 0.0f64;
            for tok in l.split_whitespace() {
                if let Some(x) = tok.strip_prefix("N=") {
                    n = x.parse().unwrap();
                } else if let Some(x) = tok.strip_prefix("value=") {
                    v = x.parse().unwrap();
                }
            }
            (n, v)
        })
        .collect()
}

// ---------------------------------------------------------------------
// shared model/ensemble builders

fn slowly_varying(lambda: f64, n: usize) -> ModelParams {
    ModelParams {
        kind: ModelKind::SlowlyVarying {
            lambda,
            pi_alpha: 0.2,
            nu: 0.7,
        },
        n,
        t: 1.0,
        seed: 0,
        boundary: Boundary::Open,
    }
}

fn ensemble_of(params: ModelParams, samples: usize) -> EnsembleSpec {
    let bins = default_bins(params.n);
    EnsembleSpec {
        base_seed: params.seed,
        params,
        samples,
        energy_bins: bins,
        energy_range: None,
        binning: BinningMode::Energy,
    }
}

fn smooth3(v: &[f64]) -> Vec<f64> {
    let mut out = v.to_vec();
    for i in 1..v.len() - 1 {
        out[i] = (v[i - 1] + v[i] + v[i + 1]) / 3.0;
    }
    out
}

const EPS: f64 = 1e-9; // tolerance comparisons on grid-aligned locations

// ---------------------------------------------------------------------

#[test]
fn criterion_1_extended_state_plateau() {
    let f = fig("fig1a.toml");
    let plateau: Vec<f64> = parse_binned(&f.csv)
        .into_iter()
        .filter(|&(e, ..)| e.abs() < 1.2)
        .map(|(_, m, ..)| m)
        .collect();
    let mean = plateau.iter().sum::<f64>() / plateau.len() as f64;
    let ok = (mean - 1.6).abs() <= 0.15 && f.first_run < Duration::from_secs(30);
    check(
        1,
        ok,
        &format!(
            "plateau mean N<C^b> = {mean:.4} over {} bins with |E| < 1.2 (target 1.6 +/- 0.15), \
             run took {:.2?}",
            plateau.len(),
            f.first_run
        ),
    );
}

#[test]
fn criterion_2_mobility_edges() {
    let mut detail = String::new();
    let mut ok = true;
    for lambda in [0.4, 1.0] {
        let spec = ensemble_of(slowly_varying(lambda, 800), 1);
        let (curve, _) = run_ensemble(&spec).unwrap();
        let ec = 2.0 - lambda;
        let est = detect_mobility_edges(&curve, 0.8, 800).unwrap();
        let (lo, hi) = (est.lower_edge.unwrap(), est.upper_edge.unwrap());
        ok &= (lo + ec).abs() <= 0.15 && (hi - ec).abs() <= 0.15;
        detail.push_str(&format!(
            "lambda={lambda}: edges ({lo:.3}, {hi:.3}) vs +/-{ec}; "
        ));
        // robustness: edges move < 0.1 across threshold in [0.6, 1.0]
        for theta in [0.6, 0.7, 0.9, 1.0] {
            let e = detect_mobility_edges(&curve, theta, 800).unwrap();
            let (dl, dh) = (
                (e.lower_edge.unwrap() - lo).abs(),
                (e.upper_edge.unwrap() - hi).abs(),
            );
            if dl >= 0.1 || dh >= 0.1 {
                ok = false;
                detail.push_str(&format!(
                    "threshold {theta} moved edges by ({dl:.3}, {dh:.3}); "
                ));
            }
        }
    }
    // lambda = 2.0: the extended window collapses onto the band centre.
    // Nothing reaches the default threshold any more; at the lowest
    // swept threshold 0.6 the remaining window sits within +/-0.2 of 0.
    let spec = ensemble_of(slowly_varying(2.0, 800), 1);
    let (curve, _) = run_ensemble(&spec).unwrap();
    let closed = detect_mobility_edges(&curve, 0.8, 800).unwrap();
    let shrunk = detect_mobility_edges(&curve, 0.6, 800).unwrap();
    match (closed.lower_edge, shrunk.lower_edge, shrunk.upper_edge) {
        (None, Some(lo), Some(hi)) if lo.abs() <= 0.2 && hi.abs() <= 0.2 => {
            detail.push_str(&format!(
                "lambda=2: window closed at theta=0.8, ({lo:.3}, {hi:.3}) at theta=0.6"
            ));
        }
        other => {
            ok = false;
            detail.push_str(&format!("lambda=2: unexpected edges {other:?}"));
        }
    }
    check(2, ok, &detail);
}

#[test]
fn criterion_3_harper_limit_transition() {
    let f = fig("fig1d.toml");
    let transitions = parse_transitions(&f.csv);
    let mags = slope_magnitudes(&f.csv);
    let mut ok = true;
    let mut detail = String::new();
    let mut prev_mag = 0.0;
    for n in [200usize, 400, 800] {
        // headline estimate: the raw-step jump, falling back to the
        // curvature extremum of the smoothed curve
        let loc = transitions
            .get(&(n, "jump".into()))
            .copied()
            .flatten()
            .or_else(|| {
                transitions
                    .get(&(n, "max_curvature".into()))
                    .copied()
                    .flatten()
            });
        let mag = mags[&n];
        ok &= loc.is_some_and(|l| (l - 2.0).abs() <= 0.1 + EPS) && mag > prev_mag;
        detail.push_str(&format!(
            "N={n}: transition {loc:?} (target 2.0 +/- 0.1), max slope {mag:.3}; "
        ));
        prev_mag = mag;
    }
    check(3, ok, &detail);
}

#[test]
fn criterion_4_dimer_jump_and_two_bumps() {
    let f = fig("fig2d.toml");
    let jump = parse_transitions(&f.csv)
        .get(&(400, "jump".into()))
        .copied()
        .flatten();
    let mut ok = jump.is_some_and(|l| (l - 2.0).abs() <= 0.1 + EPS);
    let mut detail = format!("jump at Va-Vb = {jump:?} (target 2.0 +/- 0.1); ");

    // Va - Vb = 1.0: exactly two bumps in the binned curve.
    let spec = ensemble_of(
        ModelParams {
            kind: ModelKind::RandomDimer {
                va: 2.0,
                vb: 1.0,
                q: 0.5,
            },
            n: 400,
            t: 1.0,
            seed: 0,
            boundary: Boundary::Open,
        },
        200,
    );
    let (curve, _) = run_ensemble(&spec).unwrap();
    let pts: Vec<(f64, f64)> = curve.populated().map(|(e, m, ..)| (e, m)).collect();
    let s = smooth3(&pts.iter().map(|p| p.1).collect::<Vec<_>>());
    let maxima: Vec<f64> = (1..s.len() - 1)
        .filter(|&i| s[i] > s[i - 1] && s[i] > s[i + 1])
        .map(|i| pts[i].0)
        .collect();
    ok &= maxima.len() == 2;
    detail.push_str(&format!("Va-Vb=1.0 smoothed maxima at {maxima:?}"));
    check(4, ok, &detail);
}

#[test]
fn criterion_5_correlated_disorder_inflexion() {
    let f = fig("fig3d.toml");
    let transitions = parse_transitions(&f.csv);
    let rows = parse_sweep_rows(&f.csv);
    let mut ok = true;
    let mut detail = String::new();
    // The rising alpha curve has two bends: a convex knee where it leaves
    // the localized floor (a finite-size feature near alpha = 1, which the
    // generic |d2| headline locks onto) and the concave bend into the
    // extended plateau, which is the localization transition itself. The
    // inflexion is therefore read off the data rows as the most negative
    // second difference; the generic estimators are printed alongside.
    let mut prev_bend = 0.0f64;
    for n in [200usize, 400, 800] {
        let v = &rows[&n];
        let (loc, d2) = (1..v.len() - 1)
            .map(|i| (v[i].0, v[i + 1].1 - 2.0 * v[i].1 + v[i - 1].1))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        let slope = transitions.get(&(n, "max_slope".into())).copied().flatten();
        let curv = transitions
            .get(&(n, "max_curvature".into()))
            .copied()
            .flatten();
        ok &= (loc - 2.0).abs() <= 0.25 + EPS && d2 < prev_bend;
        detail.push_str(&format!(
            "N={n}: inflexion (concave bend) {loc} (target 2.0 +/- 0.25), strength {d2:.4} \
             (generic estimators: max_slope {slope:?}, |d2| {curv:?}); "
        ));
        prev_bend = d2;
    }
    // sharpening with N, also visible in the slope magnitudes
    let mags = slope_magnitudes(&f.csv);
    ok &= mags[&200] < mags[&400] && mags[&400] < mags[&800];
    detail.push_str(&format!(
        "slope magnitudes {:.3}/{:.3}/{:.3}; ",
        mags[&200], mags[&400], mags[&800]
    ));

    // alpha = 5: band-centre plateau
    let spec = ensemble_of(
        ModelParams {
            kind: ModelKind::LongRangeCorrelated { alpha: 5.0 },
            n: 800,
            t: 1.0,
            seed: 0,
            boundary: Boundary::Open,
        },
        200,
    );
    let (curve, _) = run_ensemble(&spec).unwrap();
    let centre: Vec<f64> = curve
        .populated()
        .filter(|&(e, ..)| e.abs() < 0.5)
        .map(|(_, m, ..)| m)
        .collect();
    let plateau = centre.iter().sum::<f64>() / centre.len() as f64;
    ok &= (plateau - 1.6).abs() <= 0.15;
    detail.push_str(&format!(
        "alpha=5 band-centre plateau {plateau:.4} (target 1.6 +/- 0.15)"
    ));
    check(5, ok, &detail);
}

#[test]
fn criterion_6_long_range_hopping() {
    let f = fig("fig4d.toml");
    // The mu curve is kink-shaped (linear fall, then a flat localized
    // tail), so the |second-difference| maximum is the inflexion here.
    let curv = parse_transitions(&f.csv)
        .get(&(800, "max_curvature".into()))
        .copied()
        .flatten();
    let mut ok = curv.is_some_and(|l| (l - 1.70).abs() <= 0.15 + EPS);
    let mut detail = format!("N=800 inflexion at mu = {curv:?} (target 1.70 +/- 0.15); ");

    // mu = 1.1: extended states crowd the band top
    let spec = ensemble_of(
        ModelParams {
            kind: ModelKind::LongRangeHopping {
                w: 5.0,
                mu: 1.1,
                j: 1.0,
                ring_distance: true,
            },
            n: 800,
            t: 1.0,
            seed: 0,
            boundary: Boundary::Periodic,
        },
        50,
    );
    let (curve, _) = run_ensemble(&spec).unwrap();
    let pts: Vec<f64> = curve.populated().map(|(_, m, ..)| m).collect();
    let q = pts.len() / 4;
    let bottom = pts[..q].iter().sum::<f64>() / q as f64;
    let top = pts[pts.len() - q..].iter().sum::<f64>() / q as f64;
    ok &= top > 3.0 * bottom;
    detail.push_str(&format!(
        "mu=1.1 quartile means: top {top:.4} vs bottom {bottom:.4}"
    ));
    check(6, ok, &detail);
}

#[test]
fn criterion_7_property_suite() {
    use rand::RngExt;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    let mut ok = true;
    let mut detail = String::new();
    let mut rng = ChaCha12Rng::seed_from_u64(20260826);

    // eigensolver invariants on 500 random symmetric matrices, N <= 200
    let mut worst_res = 0.0f64;
    let mut worst_orth = 0.0f64;
    let mut worst_trace = 0.0f64;
    for _ in 0..500 {
        let n = 2 + (rng.random::<f64>() * 199.0) as usize;
        let mut a = vec![0.0f64; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = rng.random::<f64>() * 2.0 - 1.0;
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        let h = modent::models::Hamiltonian {
            n,
            storage: modent::models::Storage::Dense(a.clone()),
            boundary: Boundary::Open,
        };
        let s = diagonalize(&h).unwrap();
        worst_res = worst_res.max(s.residual_norm);
        for b in 0..n {
            for c in b..n {
                let dot: f64 = s.state(b).iter().zip(s.state(c)).map(|(x, y)| x * y).sum();
                worst_orth = worst_orth.max((dot - if b == c { 1.0 } else { 0.0 }).abs());
            }
        }
        let trace: f64 = (0..n).map(|i| a[i * n + i]).sum();
        let esum: f64 = s.energies.iter().sum();
        worst_trace = worst_trace.max((trace - esum).abs() / n as f64);
        ok &= s.energies.windows(2).all(|w| w[0] <= w[1]);
    }
    ok &= worst_res < 1e-9 && worst_orth < 1e-9 && worst_trace < 1e-10;
    detail.push_str(&format!(
        "500 matrices: residual<={worst_res:.2e}, orthonormality<={worst_orth:.2e}, \
         trace/N<={worst_trace:.2e}; "
    ));

    // Sturm-count oracle equivalence on random tridiagonal matrices
    let mut worst_sturm = 0.0f64;
    for _ in 0..20 {
        let n = 50;
        let d: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
        let e: Vec<f64> = (0..n - 1).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        let h = modent::models::Hamiltonian {
            n,
            storage: modent::models::Storage::Tridiagonal {
                diagonal: d.clone(),
                off_diagonal: e.clone(),
            },
            boundary: Boundary::Open,
        };
        let s = diagonalize(&h).unwrap();
        for (a, b) in s.energies.iter().zip(sturm::eigenvalues(&d, &e)) {
            worst_sturm = worst_sturm.max((a - b).abs());
        }
    }
    ok &= worst_sturm < 1e-8;
    detail.push_str(&format!("Sturm max deviation {worst_sturm:.2e}; "));

    // closed form vs O(N^2) brute force on 100 random states
    let mut worst_cf = 0.0f64;
    for _ in 0..100 {
        let n = 100;
        let mut psi: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        let norm = psi.iter().map(|x| x * x).sum::<f64>().sqrt();
        psi.iter_mut().for_each(|x| *x /= norm);
        let mut brute = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                brute += 2.0 * (psi[i] * psi[j]).abs();
            }
        }
        brute /= (n * (n - 1) / 2) as f64;
        worst_cf = worst_cf.max((state_concurrence(&psi) - brute).abs());
    }
    ok &= worst_cf < 1e-12;
    detail.push_str(&format!("closed-form deviation {worst_cf:.2e}; "));

    // W state saturates the bound exactly (dyadic N keeps it exact)
    let n = 64;
    let w: Vec<f64> = vec![1.0 / (n as f64).sqrt(); n];
    ok &= n as f64 * state_concurrence(&w) == 2.0;
    let mut delta = vec![0.0; n];
    delta[17] = 1.0;
    ok &= state_concurrence(&delta) == 0.0 && participation_ratio(&delta) == 1.0;
    detail.push_str("W state N<C^b>=2 exact, delta state 0 exact; ");

    // bitwise determinism of a seeded ensemble
    let spec = ensemble_of(
        ModelParams {
            kind: ModelKind::RandomDimer {
                va: 2.0,
                vb: 1.0,
                q: 0.5,
            },
            n: 100,
            t: 1.0,
            seed: 99,
            boundary: Boundary::Open,
        },
        10,
    );
    let (c1, g1) = run_ensemble(&spec).unwrap();
    let (c2, g2) = run_ensemble(&spec).unwrap();
    let same = g1.mean_scaled_concurrence.to_bits() == g2.mean_scaled_concurrence.to_bits()
        && c1
            .mean_scaled_concurrence
            .iter()
            .zip(&c2.mean_scaled_concurrence)
            .all(|(a, b)| a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan()));
    ok &= same;
    detail.push_str(&format!("ensemble bitwise repeat: {same}; "));

    // correlated-potential normalization and spectral slope
    let params = ModelParams {
        kind: ModelKind::LongRangeCorrelated { alpha: 2.5 },
        n: 800,
        t: 1.0,
        seed: 7,
        boundary: Boundary::Open,
    };
    let mut worst_norm = 0.0f64;
    let kmax = 50;
    let reals = 100;
    let mut power = vec![0.0f64; kmax + 1];
    for r in 0..reals as u64 {
        let pot = build_long_range_correlated(&params, r).unwrap();
        let n = pot.values.len() as f64;
        let mean = pot.values.iter().sum::<f64>() / n;
        let var = pot.values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        worst_norm = worst_norm.max(mean.abs()).max((var.sqrt() - 1.0).abs());
        for k in 2..=kmax {
            let wk = 2.0 * std::f64::consts::PI * k as f64 / n;
            let (mut re, mut im) = (0.0, 0.0);
            for (i, v) in pot.values.iter().enumerate() {
                re += v * (wk * i as f64).cos();
                im -= v * (wk * i as f64).sin();
            }
            power[k] += (re * re + im * im) / n;
        }
    }
    let pts: Vec<(f64, f64)> = (2..=kmax)
        .map(|k| ((k as f64).ln(), (power[k] / reals as f64).ln()))
        .collect();
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    ok &= worst_norm <= 1e-10 && (slope + 2.5).abs() <= 0.3;
    detail.push_str(&format!(
        "correlated potential: normalization residual {worst_norm:.2e}, spectral slope \
         {slope:.3} (target -2.5 +/- 0.3)"
    ));
    check(7, ok, &detail);
}

#[test]
fn criterion_8_end_to_end_reproducibility() {
    let mut ok = true;
    let mut detail = String::new();
    for config in FIG_CONFIGS {
        let f = fig(config);
        let provenance = f.csv.starts_with("# command =")
            && f.csv.contains("# [model]")
            && f.csv.contains("# [output]");
        ok &= provenance && f.bitwise_identical;
        detail.push_str(&format!(
            "{}: {} files, provenance {}, re-run bitwise {}; ",
            config.trim_end_matches(".toml"),
            f.files.len(),
            if provenance { "embedded" } else { "MISSING" },
            if f.bitwise_identical { "identical" } else { "DIFFERS" },
        ));
    }
    check(8, ok, &detail);
}
