//! Floating-point spectral checks.
//!
//! Everything here is approximate and tolerance-driven; the exact rank from
//! the integer modules stays the ground truth whenever the two disagree.

use std::f64::consts::PI;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{make_extended_dynkin, Graph};
use crate::quotient::{canonical_partition, divisor_matrix};

pub const DEFAULT_GROUP_TOL: f64 = 1e-8;
pub const DEFAULT_PROJ_TOL: f64 = 1e-8;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order; `vectors[i]` is a unit eigenvector for `values[i]`.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

fn frobenius(m: &[Vec<f64>]) -> f64 {
    m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

fn off_diagonal_norm(a: &[Vec<f64>]) -> f64 {
    let mut s = 0.0;
    for (i, row) in a.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if i != j {
                s += x * x;
            }
        }
    }
    s.sqrt()
}

fn check_square(m: &[Vec<f64>]) -> Result<usize> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(Error::Shape("expected a nonempty square matrix".into()));
    }
    Ok(n)
}

/// Full eigendecomposition of a real symmetric matrix by cyclic Jacobi sweeps.
/// Stops once the off-diagonal Frobenius norm is at most `1e-12 * ||m||_F`.
pub fn symmetric_eigen(m: &[Vec<f64>]) -> Result<SymmetricEigen> {
    let n = check_square(m)?;
    let norm = frobenius(m);
    for i in 0..n {
        for j in i + 1..n {
            if (m[i][j] - m[j][i]).abs() > 1e-12 * norm {
                return Err(Error::Precondition(format!(
                    "matrix is not symmetric at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }

    let mut a = m.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let target = 1e-12 * norm;

    let mut converged = off_diagonal_norm(&a) <= target;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let tau = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (x, y) = (row[p], row[q]);
                    row[p] = c * x - s * y;
                    row[q] = s * x + c * y;
                }
                for k in 0..n {
                    let (x, y) = (a[p][k], a[q][k]);
                    a[p][k] = c * x - s * y;
                    a[q][k] = s * x + c * y;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for row in v.iter_mut() {
                    let (x, y) = (row[p], row[q]);
                    row[p] = c * x - s * y;
                    row[q] = s * x + c * y;
                }
            }
        }
        converged = off_diagonal_norm(&a) <= target;
    }
    if !converged {
        return Err(Error::Precondition(format!(
            "Jacobi iteration did not converge in {MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    Ok(SymmetricEigen {
        values: order.iter().map(|&i| a[i][i]).collect(),
        vectors: order
            .iter()
            .map(|&i| (0..n).map(|r| v[r][i]).collect())
            .collect(),
    })
}

fn mat_vec(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Eigenvalues clustered within the grouping tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenGroup {
    /// Mean of the clustered eigenvalues.
    pub value: f64,
    pub multiplicity: usize,
    /// Norm of the projection of the all-ones vector onto the group's eigenspace.
    pub projection: f64,
    pub main: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub order: usize,
    pub eigenvalues: Vec<f64>,
    pub groups: Vec<EigenGroup>,
    pub main_count: usize,
    /// Largest `||Mv - lambda v||_inf` over the computed eigenpairs.
    pub max_residual: f64,
    /// Smallest distance between neighbouring groups, if there are two or more.
    pub min_gap: Option<f64>,
    pub group_tol: f64,
    pub proj_tol: f64,
    pub warnings: Vec<String>,
}

/// Groups the spectrum of a symmetric matrix and flags the groups whose
/// eigenspace is not orthogonal to the all-ones vector.
pub fn spectrum_report(m: &[Vec<f64>], group_tol: f64, proj_tol: f64) -> Result<SpectrumReport> {
    if !(group_tol > 0.0 && proj_tol > 0.0) {
        return Err(Error::Precondition("tolerances must be positive".into()));
    }
    let eig = symmetric_eigen(m)?;
    let n = eig.values.len();

    let max_residual = eig
        .values
        .iter()
        .zip(&eig.vectors)
        .map(|(&lambda, vec)| {
            let mv = mat_vec(m, vec);
            let lv: Vec<f64> = vec.iter().map(|x| lambda * x).collect();
            max_abs_diff(&mv, &lv)
        })
        .fold(0.0, f64::max);

    // consecutive values within group_tol chain into one group
    let mut spans: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || eig.values[i] - eig.values[i - 1] > group_tol {
            spans.push((start, i));
            start = i;
        }
    }

    let threshold = proj_tol * (n as f64).sqrt();
    let groups: Vec<EigenGroup> = spans
        .iter()
        .map(|&(lo, hi)| {
            let value = eig.values[lo..hi].iter().sum::<f64>() / (hi - lo) as f64;
            let projection = eig.vectors[lo..hi]
                .iter()
                .map(|v| v.iter().sum::<f64>().powi(2))
                .sum::<f64>()
                .sqrt();
            EigenGroup {
                value,
                multiplicity: hi - lo,
                projection,
                main: projection > threshold,
            }
        })
        .collect();

    let min_gap = groups
        .windows(2)
        .map(|w| w[1].value - w[0].value)
        .min_by(f64::total_cmp);
    let mut warnings = Vec::new();
    if let Some(gap) = min_gap {
        if gap < 10.0 * group_tol {
            warnings.push(format!(
                "smallest eigenvalue gap {gap:e} is within 10x of the grouping tolerance {group_tol:e}"
            ));
        }
    }

    Ok(SpectrumReport {
        order: n,
        main_count: groups.iter().filter(|g| g.main).count(),
        eigenvalues: eig.values,
        groups,
        max_residual,
        min_gap,
        group_tol,
        proj_tol,
        warnings,
    })
}

/// Number of main adjacency eigenvalues of `g`, with the full report.
pub fn count_main_eigenvalues(g: &Graph, group_tol: f64, proj_tol: f64) -> Result<SpectrumReport> {
    spectrum_report(&g.adjacency_f64(), group_tol, proj_tol)
}

/// One of the explicit eigenpairs of the transposed divisor matrix of the
/// extended Dynkin graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormEigenpair {
    pub k: usize,
    pub lambda: f64,
    pub vector: Vec<f64>,
    /// `||B^T v - lambda v||_inf` against the actual divisor matrix.
    pub residual: f64,
}

fn closed_form_pair(n: usize, k: usize) -> (f64, Vec<f64>) {
    if k == n - 2 {
        let v = (0..n - 1).map(|m| if m % 2 == 0 { 1.0 } else { -1.0 }).collect();
        return (-2.0, v);
    }
    let theta = k as f64 * PI / (n - 2) as f64;
    let mut v: Vec<f64> = (0..n - 2).map(|m| (m as f64 * theta).cos()).collect();
    // cos(k pi), exactly
    v.push(if k % 2 == 0 { 1.0 } else { -1.0 });
    (2.0 * theta.cos(), v)
}

/// All `n - 1` closed-form eigenpairs `(lambda_k, v_k)`, `k = 0..=n-2`, each
/// with its residual measured against `B^T`.
pub fn divisor_eigenpairs(n: usize) -> Result<Vec<ClosedFormEigenpair>> {
    let g = make_extended_dynkin(n)?;
    let b = divisor_matrix(&g, &canonical_partition(n)?)?;
    let bt: Vec<Vec<f64>> = b
        .transpose()
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|x| x.to_f64().expect("small entry")).collect())
        .collect();
    Ok((0..=n - 2)
        .map(|k| {
            let (lambda, vector) = closed_form_pair(n, k);
            let lv: Vec<f64> = vector.iter().map(|x| lambda * x).collect();
            let residual = max_abs_diff(&mat_vec(&bt, &vector), &lv);
            ClosedFormEigenpair {
                k,
                lambda,
                vector,
                residual,
            }
        })
        .collect())
}

/// Exact value of `e^T v_k` for the closed-form eigenvectors: `n - 1` for
/// `k = 0`, otherwise 1 for even `k` and 0 for odd `k`.
pub fn main_value_pattern(n: usize, k: usize) -> Result<u64> {
    if n < 4 {
        return Err(Error::InvalidOrder {
            family: "ext-dynkin",
            got: n,
            min: 4,
        });
    }
    if k > n - 2 {
        return Err(Error::Index(format!("k = {k} outside 0..={}", n - 2)));
    }
    Ok(match k {
        0 => (n - 1) as u64,
        k if k % 2 == 0 => 1,
        _ => 0,
    })
}

/// Closed form of `sum_{k=1}^{n} cos((a k + b) x)`.
pub fn cosine_sum(a: f64, b: f64, x: f64, n: u64) -> Result<f64> {
    let denom = (0.5 * a * x).sin();
    if denom.abs() <= 1e-12 {
        return Err(Error::SingularDenominator(denom.abs()));
    }
    let n = n as f64;
    Ok(((((n + 0.5) * a + b) * x).sin() - ((0.5 * a + b) * x).sin()) / (2.0 * denom))
}

/// Determinant by LU with partial pivoting.
pub fn det_f64(m: &[Vec<f64>]) -> Result<f64> {
    let n = check_square(m)?;
    let mut a = m.to_vec();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
            .expect("nonempty range");
        if a[p][c] == 0.0 {
            return Ok(0.0);
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for i in c + 1..n {
            let f = a[i][c] / a[c][c];
            for j in c..n {
                a[i][j] -= f * a[c][j];
            }
        }
    }
    Ok(det)
}

fn check_pairs(m: &[Vec<f64>], pairs: &[(f64, Vec<f64>)]) -> Result<usize> {
    let n = check_square(m)?;
    if pairs.len() != n || pairs.iter().any(|(_, v)| v.len() != n) {
        return Err(Error::Shape(format!(
            "need {n} eigenpairs with vectors of length {n}"
        )));
    }
    Ok(n)
}

/// `det W(M)` evaluated from `n` independent eigenpairs `(lambda_j, v_j)` of `M^T`:
/// `prod_{k<j} (lambda_j - lambda_k) * prod_j e^T v_j / det[v_1 .. v_n]`.
pub fn det_walk_spectral(m: &[Vec<f64>], pairs: &[(f64, Vec<f64>)]) -> Result<f64> {
    let n = check_pairs(m, pairs)?;
    // columns are the eigenvectors; the determinant is transpose invariant
    let basis: Vec<Vec<f64>> = pairs.iter().map(|(_, v)| v.clone()).collect();
    let basis_det = det_f64(&basis)?;
    if basis_det.abs() <= 1e-10 {
        return Err(Error::SingularBasis(basis_det.abs()));
    }
    let mut vandermonde = 1.0;
    for j in 0..n {
        for k in 0..j {
            vandermonde *= pairs[j].0 - pairs[k].0;
        }
    }
    let ones: f64 = pairs.iter().map(|(_, v)| v.iter().sum::<f64>()).product();
    Ok(vandermonde * ones / basis_det)
}

/// Rank of `W(M)` as the number of eigenvectors of `M^T` not orthogonal to the
/// all-ones vector. Only valid when the eigenvalues are pairwise distinct, which
/// is enforced with the separation tolerance `tol`.
pub fn rank_from_eigenpairs(pairs: &[(f64, Vec<f64>)], tol: f64) -> Result<usize> {
    for (j, (lj, _)) in pairs.iter().enumerate() {
        for (lk, _) in &pairs[..j] {
            if (lj - lk).abs() <= tol {
                return Err(Error::Precondition(format!(
                    "eigenvalues {lk} and {lj} are not separated by more than {tol:e}"
                )));
            }
        }
    }
    Ok(pairs
        .iter()
        .filter(|(_, v)| v.iter().sum::<f64>().abs() > tol)
        .count())
}
