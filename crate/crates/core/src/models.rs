//! On-site potentials and Hamiltonians for the four 1D tight-binding
//! model families: slowly varying deterministic potential, random-dimer
//! binary disorder, long-range correlated disorder synthesized from a
//! power-law spectrum, and the Anderson ring with power-law hopping.
//!
//! All builders are pure functions of `(params, realization_index)`; the
//! random families derive an independent ChaCha stream per realization
//! (see [`crate::rng`]), so outputs are bitwise reproducible.

use rand::RngExt;

use crate::error::{Error, Result};
use crate::rng::realization_rng;

pub const DEFAULT_HOPPING: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Open,
    Periodic,
}

/// Family-specific model parameters.
///
/// For the slowly varying potential the config convention stores `pi_alpha`
/// = πα directly (the literature quotes πα, not α).
#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind {
    /// V_n = λ cos(πα n^ν), n = 1..N. Deterministic; ν = 1 is the Harper model.
    SlowlyVarying { lambda: f64, pi_alpha: f64, nu: f64 },
    /// Binary energies assigned in adjacent identical pairs: V_a with
    /// probability `q`, V_b otherwise.
    RandomDimer { va: f64, vb: f64, q: f64 },
    /// Fourier synthesis with spectral density S(k) ∝ k^{-alpha},
    /// normalized to zero mean and unit variance.
    LongRangeCorrelated { alpha: f64 },
    /// Diagonal disorder uniform in [-W/2, W/2] with hopping J/dist^mu on a
    /// ring. `ring_distance` selects min(|m-n|, N-|m-n|) over bare |m-n|.
    LongRangeHopping {
        w: f64,
        mu: f64,
        j: f64,
        ring_distance: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    SlowlyVarying,
    RandomDimer,
    LongRangeCorrelated,
    LongRangeHopping,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub kind: ModelKind,
    /// Site count.
    pub n: usize,
    /// Nearest-neighbor hopping for the chain families (energy unit).
    pub t: f64,
    pub seed: u64,
    pub boundary: Boundary,
}

impl ModelParams {
    pub fn family(&self) -> Family {
        match self.kind {
            ModelKind::SlowlyVarying { .. } => Family::SlowlyVarying,
            ModelKind::RandomDimer { .. } => Family::RandomDimer,
            ModelKind::LongRangeCorrelated { .. } => Family::LongRangeCorrelated,
            ModelKind::LongRangeHopping { .. } => Family::LongRangeHopping,
        }
    }

    /// True when the potential involves no random draws (ensembles collapse
    /// to a single realization).
    pub fn is_deterministic(&self) -> bool {
        self.family() == Family::SlowlyVarying
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParams(format!("N = {} < 2", self.n)));
        }
        if !self.t.is_finite() {
            return Err(Error::InvalidParams("t must be finite".into()));
        }
        match self.kind {
            ModelKind::SlowlyVarying { nu, .. } => {
                if !(0.0..=1.0).contains(&nu) {
                    return Err(Error::InvalidParams(format!("nu = {nu} outside [0, 1]")));
                }
            }
            ModelKind::RandomDimer { q, .. } => {
                if self.n % 2 != 0 {
                    return Err(Error::InvalidParams(format!(
                        "random-dimer chain needs even N, got {}",
                        self.n
                    )));
                }
                if !(0.0..=1.0).contains(&q) {
                    return Err(Error::InvalidParams(format!("q = {q} outside [0, 1]")));
                }
            }
            ModelKind::LongRangeCorrelated { alpha } => {
                if self.n % 2 != 0 {
                    return Err(Error::InvalidParams(format!(
                        "correlated potential needs even N (sum runs k = 1..N/2), got {}",
                        self.n
                    )));
                }
                if alpha <= 0.0 {
                    return Err(Error::InvalidParams(format!(
                        "spectral exponent alpha = {alpha} must be positive"
                    )));
                }
            }
            ModelKind::LongRangeHopping { w, mu, .. } => {
                if mu <= 0.0 {
                    return Err(Error::InvalidParams(format!("mu = {mu} must be positive")));
                }
                if w < 0.0 {
                    return Err(Error::InvalidParams(format!("W = {w} must be >= 0")));
                }
            }
        }
        Ok(())
    }
}

/// On-site energies of one realization, with full provenance.
#[derive(Debug, Clone)]
pub struct PotentialVector {
    pub values: Vec<f64>,
    pub params: ModelParams,
    pub realization_index: u64,
}

/// Real symmetric operator. Chains with open boundaries keep the
/// tridiagonal form; everything else is stored dense (row-major, mirrored
/// on construction so H[m][n] == H[n][m] bitwise).
#[derive(Debug, Clone)]
pub enum Storage {
    Tridiagonal {
        diagonal: Vec<f64>,
        off_diagonal: Vec<f64>,
    },
    Dense(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct Hamiltonian {
    pub n: usize,
    pub storage: Storage,
    pub boundary: Boundary,
}

impl Hamiltonian {
    pub fn entry(&self, m: usize, n: usize) -> f64 {
        match &self.storage {
            Storage::Tridiagonal {
                diagonal,
                off_diagonal,
            } => {
                if m == n {
                    diagonal[m]
                } else if m.abs_diff(n) == 1 {
                    off_diagonal[m.min(n)]
                } else {
                    0.0
                }
            }
            Storage::Dense(a) => a[m * self.n + n],
        }
    }

    /// y = H x.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let n = self.n;
        debug_assert_eq!(x.len(), n);
        debug_assert_eq!(y.len(), n);
        match &self.storage {
            Storage::Tridiagonal {
                diagonal,
                off_diagonal,
            } => {
                for i in 0..n {
                    let mut acc = diagonal[i] * x[i];
                    if i > 0 {
                        acc += off_diagonal[i - 1] * x[i - 1];
                    }
                    if i + 1 < n {
                        acc += off_diagonal[i] * x[i + 1];
                    }
                    y[i] = acc;
                }
            }
            Storage::Dense(a) => {
                for i in 0..n {
                    let row = &a[i * n..(i + 1) * n];
                    y[i] = row.iter().zip(x).map(|(h, v)| h * v).sum();
                }
            }
        }
    }

    pub fn trace(&self) -> f64 {
        match &self.storage {
            Storage::Tridiagonal { diagonal, .. } => diagonal.iter().sum(),
            Storage::Dense(a) => (0..self.n).map(|i| a[i * self.n + i]).sum(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        let fold = |s: &[f64]| s.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        match &self.storage {
            Storage::Tridiagonal {
                diagonal,
                off_diagonal,
            } => fold(diagonal).max(fold(off_diagonal)),
            Storage::Dense(a) => fold(a),
        }
    }

    pub fn is_tridiagonal(&self) -> bool {
        matches!(self.storage, Storage::Tridiagonal { .. })
    }

    /// Dense copy (row-major), used by the Householder path and by tests.
    pub fn to_dense(&self) -> Vec<f64> {
        match &self.storage {
            Storage::Dense(a) => a.clone(),
            Storage::Tridiagonal {
                diagonal,
                off_diagonal,
            } => {
                let n = self.n;
                let mut a = vec![0.0; n * n];
                for i in 0..n {
                    a[i * n + i] = diagonal[i];
                }
                for i in 0..n - 1 {
                    a[i * n + i + 1] = off_diagonal[i];
                    a[(i + 1) * n + i] = off_diagonal[i];
                }
                a
            }
        }
    }
}

/// V_n = λ cos(πα n^ν) with 1-based n. No RNG involved.
pub fn build_slowly_varying(params: &ModelParams) -> Result<PotentialVector> {
    params.validate()?;
    let ModelKind::SlowlyVarying {
        lambda,
        pi_alpha,
        nu,
    } = params.kind
    else {
        return Err(Error::InvalidParams(
            "build_slowly_varying requires the SlowlyVarying family".into(),
        ));
    };
    let values = (1..=params.n)
        .map(|site| lambda * (pi_alpha * (site as f64).powf(nu)).cos())
        .collect();
    Ok(PotentialVector {
        values,
        params: params.clone(),
        realization_index: 0,
    })
}

/// Draw one dimer realization: per pair, V_a with probability q, else V_b,
/// copied onto both sites of the pair.
pub fn build_random_dimer(params: &ModelParams, realization_index: u64) -> Result<PotentialVector> {
    params.validate()?;
    let ModelKind::RandomDimer { va, vb, q } = params.kind else {
        return Err(Error::InvalidParams(
            "build_random_dimer requires the RandomDimer family".into(),
        ));
    };
    let mut rng = realization_rng(params.seed, realization_index);
    let mut values = Vec::with_capacity(params.n);
    for _ in 0..params.n / 2 {
        let v = if rng.random::<f64>() < q { va } else { vb };
        values.push(v);
        values.push(v);
    }
    Ok(PotentialVector {
        values,
        params: params.clone(),
        realization_index,
    })
}

/// Raw Fourier synthesis: V_i = sum_k amp[k-1] * cos(2π i k / N + φ_k),
/// i = 1..N. Split out so tests can zero individual mode amplitudes.
pub(crate) fn synthesize_modes(n: usize, amplitudes: &[f64], phases: &[f64]) -> Vec<f64> {
    debug_assert_eq!(amplitudes.len(), n / 2);
    debug_assert_eq!(phases.len(), n / 2);
    let two_pi_over_n = 2.0 * std::f64::consts::PI / n as f64;
    (1..=n)
        .map(|site| {
            let mut v = 0.0;
            for (k, (amp, phi)) in amplitudes.iter().zip(phases).enumerate() {
                let k = (k + 1) as f64;
                v += amp * (two_pi_over_n * site as f64 * k + phi).cos();
            }
            v
        })
        .collect()
}

/// Mode amplitudes [k^{-α} (2π/N)^{(1-α)}]^{1/2} for k = 1..N/2.
pub(crate) fn spectral_amplitudes(n: usize, alpha: f64) -> Vec<f64> {
    let base = 2.0 * std::f64::consts::PI / n as f64;
    (1..=n / 2)
        .map(|k| ((k as f64).powf(-alpha) * base.powf(1.0 - alpha)).sqrt())
        .collect()
}

/// Long-range correlated potential: power-law spectrum, random phases,
/// then affine normalization to zero mean and unit population variance.
pub fn build_long_range_correlated(
    params: &ModelParams,
    realization_index: u64,
) -> Result<PotentialVector> {
    params.validate()?;
    let ModelKind::LongRangeCorrelated { alpha } = params.kind else {
        return Err(Error::InvalidParams(
            "build_long_range_correlated requires the LongRangeCorrelated family".into(),
        ));
    };
    let n = params.n;
    let mut rng = realization_rng(params.seed, realization_index);
    let phases: Vec<f64> = (0..n / 2)
        .map(|_| rng.random::<f64>() * 2.0 * std::f64::consts::PI)
        .collect();
    let mut values = synthesize_modes(n, &spectral_amplitudes(n, alpha), &phases);
    normalize_unit_variance(&mut values)?;
    Ok(PotentialVector {
        values,
        params: params.clone(),
        realization_index,
    })
}

/// In-place affine map to mean 0, population standard deviation 1.
pub(crate) fn normalize_unit_variance(values: &mut [f64]) -> Result<()> {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    if var <= 0.0 {
        return Err(Error::InvalidParams(
            "degenerate potential sequence (zero variance), cannot normalize".into(),
        ));
    }
    let inv_std = 1.0 / var.sqrt();
    for v in values.iter_mut() {
        *v = (*v - mean) * inv_std;
    }
    Ok(())
}

/// Anderson ring with power-law hopping: dense symmetric H with
/// ε_n ~ U[-W/2, W/2] on the diagonal and J/dist(m,n)^μ off it.
pub fn build_long_range_hopping(
    params: &ModelParams,
    realization_index: u64,
) -> Result<Hamiltonian> {
    params.validate()?;
    let ModelKind::LongRangeHopping {
        w,
        mu,
        j,
        ring_distance,
    } = params.kind
    else {
        return Err(Error::InvalidParams(
            "build_long_range_hopping requires the LongRangeHopping family".into(),
        ));
    };
    let n = params.n;
    let mut rng = realization_rng(params.seed, realization_index);
    let mut a = vec![0.0; n * n];
    for m in 0..n {
        a[m * n + m] = if w > 0.0 {
            (rng.random::<f64>() - 0.5) * w
        } else {
            0.0
        };
    }
    // Hopping depends only on the distance; precompute per offset.
    let mut coupling = vec![0.0; n];
    for d in 1..n {
        let dist = if ring_distance { d.min(n - d) } else { d };
        coupling[d] = j / (dist as f64).powf(mu);
    }
    for m in 0..n {
        for site in (m + 1)..n {
            let c = coupling[site - m];
            a[m * n + site] = c;
            a[site * n + m] = c;
        }
    }
    Ok(Hamiltonian {
        n,
        storage: Storage::Dense(a),
        boundary: Boundary::Periodic,
    })
}

/// Chain Hamiltonian of a potential: diagonal V_n, off-diagonal -t.
/// Periodic boundaries add the corner coupling and force dense storage.
pub fn assemble_chain_hamiltonian(
    potential: &PotentialVector,
    t: f64,
    boundary: Boundary,
) -> Hamiltonian {
    let n = potential.values.len();
    match boundary {
        Boundary::Open => Hamiltonian {
            n,
            storage: Storage::Tridiagonal {
                diagonal: potential.values.clone(),
                off_diagonal: vec![-t; n - 1],
            },
            boundary,
        },
        Boundary::Periodic => {
            let mut a = vec![0.0; n * n];
            for i in 0..n {
                a[i * n + i] = potential.values[i];
            }
            for i in 0..n - 1 {
                a[i * n + i + 1] = -t;
                a[(i + 1) * n + i] = -t;
            }
            if n > 2 {
                a[n - 1] = -t;
                a[(n - 1) * n] = -t;
            }
            Hamiltonian {
                n,
                storage: Storage::Dense(a),
                boundary,
            }
        }
    }
}

/// Build the Hamiltonian of one realization for any family.
pub fn build_hamiltonian(params: &ModelParams, realization_index: u64) -> Result<Hamiltonian> {
    let potential = match params.family() {
        Family::SlowlyVarying => build_slowly_varying(params)?,
        Family::RandomDimer => build_random_dimer(params, realization_index)?,
        Family::LongRangeCorrelated => build_long_range_correlated(params, realization_index)?,
        Family::LongRangeHopping => return build_long_range_hopping(params, realization_index),
    };
    Ok(assemble_chain_hamiltonian(
        &potential,
        params.t,
        params.boundary,
    ))
}
