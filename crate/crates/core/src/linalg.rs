//! Exact rank of 0/1 matrices.
//!
//! Three elimination kernels, chosen by [`FieldSpec`]:
//!
//! * GF(2): rows packed into 64-bit words, eliminated with XOR.
//! * GF(p), p odd: ordinary Gaussian elimination modulo `p`.
//! * Rationals: fraction-free (Bareiss) elimination on big integers, so no
//!   rational normalisation and no floating point.
//!
//! Pivots are always the first nonzero entry in row-major order.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {0} is too large (must fit in 32 bits)")]
    PrimeTooLarge(u64),
    #[error("unknown field {0:?} (expected Q or GF<p>)")]
    UnknownField(String),
    #[error("malformed matrix text: {0}")]
    BadMatrixText(String),
}

/// Coefficient field for rank computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    pub const GF2: FieldSpec = FieldSpec::Prime(2);

    pub fn gf(p: u64) -> Result<FieldSpec, LinalgError> {
        if !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        if p > u32::MAX as u64 {
            return Err(LinalgError::PrimeTooLarge(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    fn validate(self) -> Result<(), LinalgError> {
        match self {
            FieldSpec::Rationals => Ok(()),
            FieldSpec::Prime(p) => FieldSpec::gf(p).map(|_| ()),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "GF{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = LinalgError;

    /// `Q`, `QQ`, `rationals`, or `GF<p>` / `F<p>` / a bare prime.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if ["q", "qq", "rationals"].contains(&t.to_ascii_lowercase().as_str()) {
            return Ok(FieldSpec::Rationals);
        }
        let digits = t
            .strip_prefix("GF")
            .or_else(|| t.strip_prefix("gf"))
            .or_else(|| t.strip_prefix('F'))
            .unwrap_or(t);
        let p: u64 = digits
            .parse()
            .map_err(|_| LinalgError::UnknownField(s.to_string()))?;
        FieldSpec::gf(p)
    }
}

/// A dense 0/1 matrix with bit-packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix01 {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl Matrix01 {
    pub fn zeros(rows: usize, cols: usize) -> Matrix01 {
        let words = cols.div_ceil(64);
        Matrix01 {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn identity(n: usize) -> Matrix01 {
        Matrix01::from_fn(n, n, |i, j| i == j)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Matrix01 {
        let mut m = Matrix01::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Matrix01 {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        assert!(rows.iter().all(|r| r.as_ref().len() == cols), "ragged rows");
        Matrix01::from_fn(rows.len(), cols, |i, j| rows[i].as_ref()[j] != 0)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols);
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols);
        let w = &mut self.data[i * self.words + j / 64];
        if value {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn transpose(&self) -> Matrix01 {
        Matrix01::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix01 {
        Matrix01::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }

    /// Row `i` as a string of `0`/`1`.
    pub fn row_string(&self, i: usize) -> String {
        (0..self.cols)
            .map(|j| if self.get(i, j) { '1' } else { '0' })
            .collect()
    }

    pub fn to_integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| BigInt::from(self.get(i, j) as u8))
                    .collect()
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

impl fmt::Debug for Matrix01 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix01 {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {}", self.row_string(i))?;
        }
        Ok(())
    }
}

/// Text format: a `rows cols` header line, then one `0`/`1` string per row.
impl fmt::Display for Matrix01 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "{}", self.row_string(i))?;
        }
        Ok(())
    }
}

impl FromStr for Matrix01 {
    type Err = LinalgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: &str| LinalgError::BadMatrixText(msg.to_string());
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| bad("missing header"))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("header must be two integers")))
            .collect::<Result<_, _>>()?;
        let [rows, cols] = dims[..] else {
            return Err(bad("header must be two integers"));
        };
        let mut m = Matrix01::zeros(rows, cols);
        let mut seen = 0;
        for (i, line) in lines.enumerate() {
            if i >= rows {
                return Err(bad("more rows than declared"));
            }
            if line.len() != cols {
                return Err(bad(&format!("row {} has length {}, expected {cols}", i + 1, line.len())));
            }
            for (j, c) in line.chars().enumerate() {
                match c {
                    '0' => {}
                    '1' => m.set(i, j, true),
                    _ => return Err(bad(&format!("unexpected character {c:?}"))),
                }
            }
            seen += 1;
        }
        if seen != rows {
            return Err(bad("fewer rows than declared"));
        }
        Ok(m)
    }
}

/// Exact rank of `m` over `field`.
pub fn rank(m: &Matrix01, field: FieldSpec) -> Result<usize, LinalgError> {
    field.validate()?;
    Ok(match field {
        FieldSpec::Prime(2) => rank_gf2(m),
        FieldSpec::Prime(p) => rank_mod_p(m, p),
        FieldSpec::Rationals => rank_bareiss(m.to_integer_rows()),
    })
}

fn rank_gf2(m: &Matrix01) -> usize {
    let mut rows: Vec<Vec<u64>> = (0..m.rows).map(|i| m.row_words(i).to_vec()).collect();
    let mut rank = 0;
    for c in 0..m.cols {
        let (w, bit) = (c / 64, 1u64 << (c % 64));
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][w] & bit != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot = &head[rank];
        for row in tail.iter_mut().filter(|r| r[w] & bit != 0) {
            for (x, y) in row.iter_mut().zip(pivot).skip(w) {
                *x ^= y;
            }
        }
        rank += 1;
    }
    rank
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and a != 0
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

/// Reduced row echelon form modulo `p`; returns the pivot columns.
fn rref_mod_p(a: &mut [Vec<u64>], cols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x = (*x + (p - f) * y) % p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn rank_mod_p(m: &Matrix01, p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = (0..m.rows)
        .map(|i| (0..m.cols).map(|j| m.get(i, j) as u64).collect())
        .collect();
    rref_mod_p(&mut a, m.cols, p).len()
}

fn rank_bareiss(a: Vec<Vec<BigInt>>) -> usize {
    bareiss_pivots(a).len()
}

/// Pivot columns of a fraction-free elimination: the lexicographically
/// first set of columns spanning the column space over the rationals.
pub fn pivot_columns(m: &Matrix01) -> Vec<usize> {
    bareiss_pivots(m.to_integer_rows())
}

/// Fraction-free elimination. Every entry after step `r` is an `(r+1)`-minor
/// of the input, so the division by the previous pivot is exact.
fn bareiss_pivots(mut a: Vec<Vec<BigInt>>) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (head, tail) = a.split_at_mut(rank + 1);
        let pivot = &head[rank];
        for row in tail.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let num = &pivot[c] * &row[j] - &lead * &pivot[j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "inexact Bareiss step");
                row[j] = q;
            }
        }
        prev = head[rank][c].clone();
        pivots.push(c);
        rank += 1;
    }
    pivots
}

/// A nonzero `v` with `v · m = 0`, or `None` when the rows are independent.
///
/// Over the rationals the vector is scaled to coprime integers, and a
/// vector with entries in {-1, 0, 1} is preferred when the kernel contains
/// one. Over GF(p) entries are reported as symmetric residues.
pub fn kernel_vector(m: &Matrix01, field: FieldSpec) -> Result<Option<Vec<BigInt>>, LinalgError> {
    field.validate()?;
    let basis = match field {
        FieldSpec::Rationals => left_kernel_rational(m),
        FieldSpec::Prime(p) => left_kernel_mod_p(m, p),
    };
    if basis.is_empty() {
        return Ok(None);
    }
    let unit = |v: &Vec<BigInt>| v.iter().all(|x| x.abs() <= BigInt::one());
    let support = |v: &Vec<BigInt>| v.iter().filter(|x| !x.is_zero()).count();
    let mut candidates: Vec<Vec<BigInt>> = basis.iter().filter(|v| unit(v)).cloned().collect();
    if candidates.is_empty() && matches!(field, FieldSpec::Rationals) && basis.len() <= 8 {
        candidates = signed_combinations(&basis).into_iter().filter(unit).collect();
    }
    let best = candidates
        .into_iter()
        .min_by_key(support)
        .unwrap_or_else(|| basis[0].clone());
    Ok(Some(best))
}

// Nonzero combinations of the basis with coefficients in {-1, 0, 1}.
fn signed_combinations(basis: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let len = basis[0].len();
    let total = 3usize.pow(basis.len() as u32);
    let mut out = Vec::new();
    for code in 1..total {
        let mut v = vec![BigInt::zero(); len];
        let mut c = code;
        for b in basis {
            let coeff = (c % 3) as i64 - 1;
            c /= 3;
            if coeff != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x += y * coeff;
                }
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            out.push(primitive(v));
        }
    }
    out
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v;
    }
    // first nonzero entry positive
    let sign = v.iter().find(|x| !x.is_zero()).map_or(1, |x| if x.is_negative() { -1 } else { 1 });
    v.into_iter().map(|x| x / &g * sign).collect()
}

fn left_kernel_rational(m: &Matrix01) -> Vec<Vec<BigInt>> {
    // left kernel of m = null space of m^T
    let t = m.transpose();
    let (rows, cols) = (t.rows, t.cols);
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| (0..cols).map(|j| BigRational::from_integer(BigInt::from(t.get(i, j) as u8))).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x -= &f * y;
            }
        }
        pivots.push(c);
        r += 1;
    }
    free_columns(cols, &pivots)
        .map(|f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            let denom = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            primitive(v.into_iter().map(|x| (x * &denom).to_integer()).collect())
        })
        .collect()
}

fn left_kernel_mod_p(m: &Matrix01, p: u64) -> Vec<Vec<BigInt>> {
    let t = m.transpose();
    let cols = t.cols;
    let mut a: Vec<Vec<u64>> = (0..t.rows)
        .map(|i| (0..cols).map(|j| t.get(i, j) as u64).collect())
        .collect();
    let pivots = rref_mod_p(&mut a, cols, p);
    free_columns(cols, &pivots)
        .map(|f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[row][f]) % p;
            }
            v.into_iter()
                .map(|x| {
                    let x = x as i64;
                    let p = p as i64;
                    BigInt::from(if x > p / 2 { x - p } else { x })
                })
                .collect()
        })
        .collect()
}

fn free_columns(cols: usize, pivots: &[usize]) -> impl Iterator<Item = usize> + '_ {
    (0..cols).filter(move |c| !pivots.contains(c))
}

/// `v · m` over the integers.
pub fn left_multiply(v: &[BigInt], m: &Matrix01) -> Vec<BigInt> {
    assert_eq!(v.len(), m.rows);
    (0..m.cols)
        .map(|j| {
            (0..m.rows)
                .filter(|&i| m.get(i, j))
                .map(|i| &v[i])
                .sum()
        })
        .collect()
}
