//! Dense arbitrary-precision integer matrices.
//!
//! Walk matrix entries of the extended Dynkin family grow roughly like `3^n`,
//! so every entry is a [`BigInt`] and no operation can overflow.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Row-major dense integer matrix with positive dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    /// # Panics
    /// If either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zeros(k, k);
        for i in 0..k {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// `rows x cols` matrix with `diag` on the leading diagonal and zeros elsewhere.
    pub fn diagonal(rows: usize, cols: usize, diag: &[BigInt]) -> Result<Self> {
        if diag.len() > rows.min(cols) {
            return Err(Error::Shape(format!(
                "{} diagonal entries do not fit in {rows}x{cols}",
                diag.len()
            )));
        }
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::Shape("matrix must have at least one row and column".into()));
        }
        if let Some(bad) = rows.iter().position(|row| row.len() != c) {
            return Err(Error::Shape(format!(
                "row {} has {} entries, expected {c}",
                bad + 1,
                rows[bad].len()
            )));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.data.chunks(self.cols).map(<[BigInt]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(BigInt::abs).max().unwrap_or_default()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Copy of the block with rows `row_range` and columns `col_range` (0-indexed, half open).
    pub fn submatrix(
        &self,
        row_range: std::ops::Range<usize>,
        col_range: std::ops::Range<usize>,
    ) -> Result<Self> {
        if row_range.is_empty()
            || col_range.is_empty()
            || row_range.end > self.rows
            || col_range.end > self.cols
        {
            return Err(Error::Shape(format!(
                "block rows {row_range:?} cols {col_range:?} outside {}x{}",
                self.rows, self.cols
            )));
        }
        let rows = row_range
            .map(|i| self.row(i)[col_range.clone()].to_vec())
            .collect();
        Self::from_rows(rows)
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        self.data
            .chunks(self.cols)
            .map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
            .collect()
    }
}

impl fmt::Display for IntMatrix {
    /// Text format: `rows cols` header, then one space-separated row per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for row in self.data.chunks(self.cols) {
            let line: Vec<String> = row.iter().map(BigInt::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for IntMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::MalformedInput("missing `rows cols` header".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::MalformedInput(format!("bad header `{header}`: {e}")))?;
        let &[rows, cols] = dims.as_slice() else {
            return Err(Error::MalformedInput(format!("bad header `{header}`")));
        };
        let parsed: Vec<Vec<BigInt>> = lines
            .map(|l| {
                l.split_whitespace()
                    .map(|t| {
                        t.parse::<BigInt>()
                            .map_err(|e| Error::MalformedInput(format!("bad entry `{t}`: {e}")))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        if parsed.len() != rows {
            return Err(Error::MalformedInput(format!(
                "header announces {rows} rows, found {}",
                parsed.len()
            )));
        }
        let m = Self::from_rows(parsed)?;
        if m.cols != cols {
            return Err(Error::MalformedInput(format!(
                "header announces {cols} columns, found {}",
                m.cols
            )));
        }
        Ok(m)
    }
}

/// `[e, Me, M^2 e, ..., M^(width-1) e]` for square `m`, with `e` the all-ones vector.
/// Built by repeated matrix-vector products.
pub fn walk_matrix(m: &IntMatrix, width: usize) -> Result<IntMatrix> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "walk matrix needs a square input, got {}x{}",
            m.rows, m.cols
        )));
    }
    if width == 0 {
        return Err(Error::Shape("walk matrix width must be at least 1".into()));
    }
    let k = m.rows;
    let mut out = IntMatrix::zeros(k, width);
    let mut col = vec![BigInt::one(); k];
    for j in 0..width {
        if j > 0 {
            col = m.mul_vec(&col)?;
        }
        for (i, x) in col.iter().enumerate() {
            out.set(i, j, x.clone());
        }
    }
    Ok(out)
}

/// Walk matrix with the default square width.
pub fn walk_matrix_square(m: &IntMatrix) -> Result<IntMatrix> {
    walk_matrix(m, m.rows)
}

struct Elimination {
    rank: usize,
    // +1 / -1 from row swaps
    sign: i8,
    // last pivot; equals the determinant up to sign for square full-rank input
    last_pivot: BigInt,
}

/// Fraction-free Gaussian elimination. Each step picks the nonzero pivot of
/// least absolute value in the current column. Entries stay integral because
/// every intermediate is a minor of the input (Sylvester's identity), so the
/// division by the previous pivot is exact.
fn bareiss(m: &IntMatrix) -> Elimination {
    let (rows, cols) = m.dims();
    let mut a = m.to_rows();
    let mut prev = BigInt::one();
    let mut sign = 1i8;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by(|&i, &j| a[i][c].magnitude().cmp(a[j][c].magnitude()))
        else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            sign = -sign;
        }
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let mut x = pivot * &row[j];
                if !lead.is_zero() && !pivot_row[j].is_zero() {
                    x -= &lead * &pivot_row[j];
                }
                row[j] = if prev.is_one() { x } else { x.div_floor(&prev) };
            }
        }
        prev = pivot.clone();
        r += 1;
    }
    Elimination {
        rank: r,
        sign,
        last_pivot: prev,
    }
}

/// Rank over the rationals by fraction-free elimination.
pub fn rank_fraction_free(m: &IntMatrix) -> usize {
    bareiss(m).rank
}

/// Exact determinant of a square matrix.
pub fn det_exact(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "determinant needs a square input, got {}x{}",
            m.rows, m.cols
        )));
    }
    let e = bareiss(m);
    if e.rank < m.rows {
        return Ok(BigInt::zero());
    }
    Ok(if e.sign < 0 { -e.last_pivot } else { e.last_pivot })
}

/// Rank of `m` reduced modulo the prime `p`. Never exceeds the rational rank.
pub fn rank_modular(m: &IntMatrix, p: u64) -> Result<usize> {
    if !is_prime(p) {
        return Err(Error::InvalidModulus(p));
    }
    let modulus = BigInt::from(p);
    let (rows, cols) = m.dims();
    let mut a: Vec<Vec<u64>> = m
        .to_rows()
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| x.mod_floor(&modulus).to_u64().expect("residue fits in u64"))
                .collect()
        })
        .collect();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p_row) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(p_row, r);
        let inv = pow_mod(a[r][c], p - 2, p);
        for j in c..cols {
            a[r][j] = mul_mod(a[r][j], inv, p);
        }
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let f = row[c];
            if f == 0 {
                continue;
            }
            for j in c..cols {
                row[j] = (row[j] + p - mul_mod(f, pivot_row[j], p)) % p;
            }
        }
        r += 1;
    }
    Ok(r)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &b in &BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
