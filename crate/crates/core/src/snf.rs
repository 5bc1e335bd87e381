//! Smith normal form over the integers.
//!
//! The reduction only uses unimodular row and column operations (swaps,
//! negations, adding an integer multiple of one line to another), followed by
//! a gcd/lcm pass on the diagonal that enforces `d_i | d_{i+1}`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::quotient::hat_walk_matrix;

/// Invariant factors `d_1 | d_2 | ... | d_r` of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfResult {
    #[serde(with = "crate::report::bigint_vec")]
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
    pub dims: (usize, usize),
}

impl SnfResult {
    /// `1,1,1,7`
    pub fn factors_csv(&self) -> String {
        join_factors(&self.invariant_factors)
    }

    /// `diag(1,1,1,7,0,0,0,0,0)`, padded with zeros to `min(rows, cols)` entries.
    pub fn diag_string(&self) -> String {
        let full = self.dims.0.min(self.dims.1);
        let mut entries: Vec<String> = self.invariant_factors.iter().map(BigInt::to_string).collect();
        entries.resize(full, "0".to_string());
        format!("diag({})", entries.join(","))
    }

    /// The diagonal matrix this result describes, with the input's dimensions.
    pub fn to_matrix(&self) -> IntMatrix {
        IntMatrix::diagonal(self.dims.0, self.dims.1, &self.invariant_factors)
            .expect("rank never exceeds min(rows, cols)")
    }

    fn check_invariants(&self) {
        debug_assert!(self.rank <= self.dims.0.min(self.dims.1));
        debug_assert!(self.invariant_factors.iter().all(|d| d.is_positive()));
        debug_assert!(self
            .invariant_factors
            .windows(2)
            .all(|w| w[1].is_multiple_of(&w[0])));
    }
}

impl fmt::Display for SnfResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.diag_string())
    }
}

pub(crate) fn join_factors(factors: &[BigInt]) -> String {
    factors
        .iter()
        .map(BigInt::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Position of the nonzero entry of least absolute value in the trailing block `a[t.., t..]`.
fn min_abs_entry(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.magnitude() < a[bi][bj].magnitude()) {
                best = Some((i, j));
                if x.magnitude().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

fn swap_cols(a: &mut [Vec<BigInt>], from_row: usize, x: usize, y: usize) {
    if x != y {
        for row in a.iter_mut().skip(from_row) {
            row.swap(x, y);
        }
    }
}

/// Quotient of `x` by the positive `p`, rounded to nearest, so the remainder has `|r| <= p/2`.
fn nearest_quotient(x: &BigInt, p: &BigInt) -> BigInt {
    let (q, r) = x.div_mod_floor(p);
    if (&r << 1u32) > *p {
        q + 1
    } else {
        q
    }
}

/// Clears row `t` and column `t` outside the pivot. Returns the position of a
/// nonzero remainder if one is left, which then has smaller magnitude than the pivot.
fn reduce_pivot_cross(a: &mut [Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let (rows, cols) = (a.len(), a[0].len());
    let mut leftover = None;

    let (top, rest) = a.split_at_mut(t + 1);
    let pivot_row = &top[t];
    let pivot = &pivot_row[t];
    for (off, row) in rest.iter_mut().enumerate() {
        if row[t].is_zero() {
            continue;
        }
        let q = nearest_quotient(&row[t], pivot);
        for j in t..cols {
            if !pivot_row[j].is_zero() {
                row[j] -= &q * &pivot_row[j];
            }
        }
        if !row[t].is_zero() && leftover.is_none() {
            leftover = Some((t + 1 + off, t));
        }
    }

    for j in t + 1..cols {
        if a[t][j].is_zero() {
            continue;
        }
        let q = nearest_quotient(&a[t][j], &a[t][t]);
        for i in t..rows {
            if !a[i][t].is_zero() {
                let delta = &q * &a[i][t];
                a[i][j] -= delta;
            }
        }
        if !a[t][j].is_zero() && leftover.is_none() {
            leftover = Some((t, j));
        }
    }
    leftover
}

/// Invariant factors of any integer matrix.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = m.dims();
    let mut a = m.to_rows();
    let mut diag = Vec::new();

    for t in 0..rows.min(cols) {
        let Some(mut pos) = min_abs_entry(&a, t) else {
            break;
        };
        loop {
            let (pi, pj) = pos;
            a.swap(t, pi);
            swap_cols(&mut a, t, t, pj);
            if a[t][t].is_negative() {
                for x in a[t].iter_mut().skip(t) {
                    *x = -std::mem::take(x);
                }
            }
            match reduce_pivot_cross(&mut a, t) {
                // the leftover is smaller than the pivot; move it in and go again
                Some(next) => pos = next,
                None => break,
            }
        }
        diag.push(std::mem::take(&mut a[t][t]));
    }

    // diag(x, y) ~ diag(gcd, lcm) under unimodular operations
    let r = diag.len();
    for i in 0..r {
        for j in i + 1..r {
            if diag[j].is_multiple_of(&diag[i]) {
                continue;
            }
            let g = diag[i].gcd(&diag[j]);
            let l = &diag[i] / &g * &diag[j];
            diag[i] = g;
            diag[j] = l;
        }
    }

    let result = SnfResult {
        rank: r,
        invariant_factors: diag,
        dims: (rows, cols),
    };
    result.check_invariants();
    result
}

pub fn rank_via_snf(m: &IntMatrix) -> usize {
    smith_normal_form(m).rank
}

/// Two matrices of the same shape are integrally equivalent iff their Smith forms agree.
pub fn integrally_equivalent(a: &IntMatrix, b: &IntMatrix) -> Result<bool> {
    if a.dims() != b.dims() {
        return Err(Error::Shape(format!(
            "cannot compare {}x{} with {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(smith_normal_form(a).invariant_factors == smith_normal_form(b).invariant_factors)
}

/// Embeds the hat submatrix of a square walk matrix `w` back into a zero
/// matrix of the same size: rows `2..=n` and columns `1..=n-1` carry the
/// hat block, the first row, last row and last two columns are zero.
pub fn build_w_prime(w: &IntMatrix) -> Result<IntMatrix> {
    let hat = hat_walk_matrix(w)?;
    let size = w.rows();
    let mut out = IntMatrix::zeros(size, size);
    for i in 0..hat.rows() {
        for j in 0..hat.cols() {
            out.set(i + 1, j, hat.get(i, j).clone());
        }
    }
    Ok(out)
}
