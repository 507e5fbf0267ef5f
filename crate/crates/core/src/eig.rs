//! Full eigendecomposition of real symmetric Hamiltonians, from first
//! principles: Householder reduction to tridiagonal form followed by the
//! implicit-shift QL iteration, both derived from the Algol procedures
//! tred2/tql2 (Bowdler, Martin, Reinsch, Wilkinson) and their EISPACK
//! descendants.
//!
//! The orthogonal accumulator is stored column-major so that the inner
//! loops of both stages (Householder column updates, QL plane rotations)
//! walk contiguous memory. Eigenvector β is the contiguous slice
//! `states[β*n .. (β+1)*n]`.
//!
//! The [`sturm`] submodule provides an independent Sturm-sequence
//! bisection solver used as a test oracle; it shares no code with the QL
//! path.

use crate::error::{Error, Result};
use crate::models::{Hamiltonian, Storage};

/// Iteration cap per eigenvalue in the QL stage. Exceeding it is a hard
/// error, never a silent wrong answer.
pub const MAX_QL_SWEEPS: usize = 50;

/// Symmetric tridiagonal matrix: `diagonal[i]` on the diagonal,
/// `off_diagonal[i]` coupling sites i and i+1.
#[derive(Debug, Clone)]
pub struct TridiagonalForm {
    pub diagonal: Vec<f64>,
    pub off_diagonal: Vec<f64>,
}

/// All N eigenpairs of a real symmetric operator, ascending in energy.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub n: usize,
    pub energies: Vec<f64>,
    /// Column-major: state β occupies `states[β*n .. (β+1)*n]`.
    pub states: Vec<f64>,
    /// max over β of ‖HΨ^β − E_βΨ^β‖₂.
    pub residual_norm: f64,
}

impl Spectrum {
    pub fn state(&self, beta: usize) -> &[f64] {
        &self.states[beta * self.n..(beta + 1) * self.n]
    }

    pub fn spectral_range(&self) -> f64 {
        match (self.energies.first(), self.energies.last()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0.0,
        }
    }
}

/// Eigenvalues plus orthonormal eigenvectors, before a residual has been
/// attached (the residual needs the original operator; see [`diagonalize`]).
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub n: usize,
    pub energies: Vec<f64>,
    pub states: Vec<f64>,
}

fn identity_colmajor(n: usize) -> Vec<f64> {
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        q[i * n + i] = 1.0;
    }
    q
}

fn check_finite(a: &[f64], n: usize) -> Result<()> {
    for (idx, v) in a.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite {
                row: idx / n,
                col: idx % n,
            });
        }
    }
    Ok(())
}

fn is_already_tridiagonal(a: &[f64], n: usize) -> bool {
    for r in 0..n {
        for c in 0..n {
            if r.abs_diff(c) > 1 && a[r * n + c] != 0.0 {
                return false;
            }
        }
    }
    true
}

/// Householder similarity reduction Qᵀ H Q = T of a dense symmetric matrix
/// (row-major, length n²). Returns T and the explicit accumulator Q in
/// column-major layout. Input that is already tridiagonal passes through
/// unchanged with Q = I.
pub fn householder_tridiagonalize(a: &[f64], n: usize) -> Result<(TridiagonalForm, Vec<f64>)> {
    assert_eq!(a.len(), n * n, "matrix size mismatch");
    check_finite(a, n)?;

    if is_already_tridiagonal(a, n) {
        let diagonal = (0..n).map(|i| a[i * n + i]).collect();
        let off_diagonal = (0..n - 1).map(|i| a[i * n + i + 1]).collect();
        return Ok((
            TridiagonalForm {
                diagonal,
                off_diagonal,
            },
            identity_colmajor(n),
        ));
    }

    // v holds the working matrix / accumulator, column-major: v[c*n + r].
    // The input is symmetric, so the transpose copy equals the matrix.
    let mut v = vec![0.0; n * n];
    for r in 0..n {
        for c in 0..n {
            v[c * n + r] = a[r * n + c];
        }
    }
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];

    for (j, dj) in d.iter_mut().enumerate() {
        *dj = v[j * n + (n - 1)];
    }

    for i in (1..n).rev() {
        // Scale to avoid under/overflow.
        let scale: f64 = d[..i].iter().map(|x| x.abs()).sum();
        let mut h = 0.0;
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[j * n + (i - 1)];
                v[j * n + i] = 0.0;
                v[i * n + j] = 0.0;
            }
        } else {
            // Generate the Householder vector.
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].fill(0.0);

            // Apply the similarity transformation to the active block.
            for j in 0..i {
                let fj = d[j];
                v[i * n + j] = fj;
                let mut gj = e[j] + v[j * n + j] * fj;
                for k in (j + 1)..i {
                    let vkj = v[j * n + k];
                    gj += vkj * d[k];
                    e[k] += vkj * fj;
                }
                e[j] = gj;
            }
            let mut f2 = 0.0;
            for j in 0..i {
                e[j] /= h;
                f2 += e[j] * d[j];
            }
            let hh = f2 / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let fj = d[j];
                let gj = e[j];
                for k in j..i {
                    v[j * n + k] -= fj * e[k] + gj * d[k];
                }
                d[j] = v[j * n + (i - 1)];
                v[j * n + i] = 0.0;
            }
        }
        d[i] = h;
    }

    // Accumulate the transformations into an explicit Q.
    for i in 0..n - 1 {
        v[i * n + (n - 1)] = v[i * n + i];
        v[i * n + i] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[(i + 1) * n + k] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[(i + 1) * n + k] * v[j * n + k];
                }
                for k in 0..=i {
                    v[j * n + k] -= g * d[k];
                }
            }
        }
        v[(i + 1) * n..(i + 1) * n + i + 1].fill(0.0);
    }
    for (j, dj) in d.iter_mut().enumerate() {
        *dj = v[j * n + (n - 1)];
        v[j * n + (n - 1)] = 0.0;
    }
    v[(n - 1) * n + (n - 1)] = 1.0;

    let off_diagonal = (1..n).map(|i| e[i]).collect();
    Ok((
        TridiagonalForm {
            diagonal: d,
            off_diagonal,
        },
        v,
    ))
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix, applying
/// every plane rotation to the column-major accumulator `q`. Eigenvalues
/// come back ascending (stable under ties); numerically degenerate
/// clusters are re-orthonormalized by modified Gram–Schmidt.
pub fn tql_implicit(tri: &TridiagonalForm, q: Vec<f64>) -> Result<EigenPairs> {
    let n = tri.diagonal.len();
    assert_eq!(tri.off_diagonal.len(), n - 1);
    assert_eq!(q.len(), n * n);

    let mut d = tri.diagonal.clone();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(&tri.off_diagonal);
    let mut z = q;

    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        loop {
            let mut m = l;
            while m < n - 1 && e[m].abs() > eps * tst1 {
                m += 1;
            }
            if m == l {
                break;
            }

            let mut iter = 0usize;
            loop {
                iter += 1;
                if iter > MAX_QL_SWEEPS {
                    return Err(Error::Convergence {
                        index: l,
                        iterations: MAX_QL_SWEEPS,
                        context: String::new(),
                    });
                }

                // Implicit shift from the leading 2x2.
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d[l + 2..n].iter_mut() {
                    *di -= h;
                }
                f += h;

                // One QL sweep of plane rotations, applied to z as we go.
                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let gi = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * gi;
                    d[i + 1] = h + s * (c * gi + s * d[i]);

                    // Columns i and i+1 are contiguous slices.
                    let (za, zb) = z.split_at_mut((i + 1) * n);
                    let zi = &mut za[i * n..];
                    let zi1 = &mut zb[..n];
                    for k in 0..n {
                        let hk = zi1[k];
                        zi1[k] = s * zi[k] + c * hk;
                        zi[k] = c * zi[k] - s * hk;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    // Ascending order; stable permutation keeps sub-block order on ties.
    let mut perm: Vec<usize> = (0..n).collect();
    perm.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap());
    let energies: Vec<f64> = perm.iter().map(|&i| d[i]).collect();
    let mut states = vec![0.0; n * n];
    for (new, &old) in perm.iter().enumerate() {
        states[new * n..(new + 1) * n].copy_from_slice(&z[old * n..(old + 1) * n]);
    }

    reorthonormalize_degenerate(&energies, &mut states, n);

    Ok(EigenPairs {
        n,
        energies,
        states,
    })
}

/// Modified Gram–Schmidt over clusters of numerically degenerate
/// eigenvalues (gap < 1e-10 of the spectral range).
fn reorthonormalize_degenerate(energies: &[f64], states: &mut [f64], n: usize) {
    if n < 2 {
        return;
    }
    let range = energies[n - 1] - energies[0];
    let tol = 1e-10 * range.max(f64::MIN_POSITIVE);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && energies[end] - energies[end - 1] < tol {
            end += 1;
        }
        if end - start > 1 {
            for b in start..end {
                // Project out the already-fixed cluster members.
                for prev in start..b {
                    let (pa, pb) = states.split_at_mut(b * n);
                    let u = &pa[prev * n..(prev + 1) * n];
                    let w = &mut pb[..n];
                    let dot: f64 = u.iter().zip(w.iter()).map(|(x, y)| x * y).sum();
                    for (wk, uk) in w.iter_mut().zip(u) {
                        *wk -= dot * uk;
                    }
                }
                let w = &mut states[b * n..(b + 1) * n];
                let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm > 0.0 {
                    for wk in w.iter_mut() {
                        *wk /= norm;
                    }
                }
            }
        }
        start = end;
    }
}

/// Full eigendecomposition of any Hamiltonian: tridiagonal storage goes
/// straight to QL, dense storage through Householder first. The returned
/// residual is measured against the original operator.
pub fn diagonalize(h: &Hamiltonian) -> Result<Spectrum> {
    let n = h.n;
    let pairs = match &h.storage {
        Storage::Tridiagonal {
            diagonal,
            off_diagonal,
        } => {
            check_finite(diagonal, 1)?;
            check_finite(off_diagonal, 1)?;
            let tri = TridiagonalForm {
                diagonal: diagonal.clone(),
                off_diagonal: off_diagonal.clone(),
            };
            tql_implicit(&tri, identity_colmajor(n))?
        }
        Storage::Dense(a) => {
            let (tri, q) = householder_tridiagonalize(a, n)?;
            tql_implicit(&tri, q)?
        }
    };

    let mut work = vec![0.0; n];
    let mut residual_norm: f64 = 0.0;
    for beta in 0..n {
        let psi = &pairs.states[beta * n..(beta + 1) * n];
        h.matvec(psi, &mut work);
        let energy = pairs.energies[beta];
        let r2: f64 = work
            .iter()
            .zip(psi)
            .map(|(y, p)| {
                let r = y - energy * p;
                r * r
            })
            .sum();
        residual_norm = residual_norm.max(r2.sqrt());
    }

    Ok(Spectrum {
        n,
        energies: pairs.energies,
        states: pairs.states,
        residual_norm,
    })
}

/// Independent Sturm-sequence bisection solver for symmetric tridiagonal
/// matrices. Test oracle only; shares nothing with the QL path.
pub mod sturm {
    /// Number of eigenvalues strictly below `x`, from the signs of the
    /// LDLᵀ pivots of T − xI.
    pub fn count_below(diagonal: &[f64], off_diagonal: &[f64], x: f64) -> usize {
        let n = diagonal.len();
        let mut count = 0;
        let mut q = diagonal[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..n {
            if q == 0.0 {
                q = 1e-300;
            }
            q = diagonal[i] - x - off_diagonal[i - 1] * off_diagonal[i - 1] / q;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// All eigenvalues, ascending, via bisection on the Sturm count.
    pub fn eigenvalues(diagonal: &[f64], off_diagonal: &[f64]) -> Vec<f64> {
        let n = diagonal.len();
        // Gershgorin bounds.
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut radius = 0.0;
            if i > 0 {
                radius += off_diagonal[i - 1].abs();
            }
            if i < n - 1 {
                radius += off_diagonal[i].abs();
            }
            lo = lo.min(diagonal[i] - radius);
            hi = hi.max(diagonal[i] + radius);
        }
        let width = (hi - lo).max(f64::MIN_POSITIVE);
        (0..n)
            .map(|k| {
                let (mut a, mut b) = (lo, hi);
                // 100 halvings push the bracket far below 1e-12 * width.
                for _ in 0..100 {
                    let mid = 0.5 * (a + b);
                    if count_below(diagonal, off_diagonal, mid) > k {
                        b = mid;
                    } else {
                        a = mid;
                    }
                    if b - a <= 1e-15 * width {
                        break;
                    }
                }
                0.5 * (a + b)
            })
            .collect()
    }
}
