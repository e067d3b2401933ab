//! Dense exact linear algebra over `ℚ` and small prime fields.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact field scalar.
pub trait Scalar:
    Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(x: i64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    /// `"Q"`, `"F2"`, …
    fn field_name() -> String;
    /// Every element, for finite fields.
    fn elements() -> Option<Vec<Self>>;
    fn to_json(&self) -> serde_json::Value;
    fn from_json(value: &serde_json::Value) -> Result<Self>;
}

/// Element of `F_P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    pub fn new(x: i64) -> Self {
        Fp(x.rem_euclid(P as i64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }
}

impl<const P: u32> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Scalar for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn from_i64(x: i64) -> Self {
        Fp::new(x)
    }
    fn add(&self, other: &Self) -> Self {
        Fp((self.0 + other.0) % P)
    }
    fn sub(&self, other: &Self) -> Self {
        Fp((self.0 + P - other.0) % P)
    }
    fn mul(&self, other: &Self) -> Self {
        Fp((self.0 * other.0) % P)
    }
    fn neg(&self) -> Self {
        Fp((P - self.0) % P)
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        // P is prime and tiny; Fermat
        let mut result = 1u32;
        let mut base = self.0;
        let mut e = P - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % P;
            }
            base = base * base % P;
            e >>= 1;
        }
        Some(Fp(result))
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn field_name() -> String {
        format!("F{P}")
    }
    fn elements() -> Option<Vec<Self>> {
        Some((0..P).map(Fp).collect())
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self.0)
    }
    fn from_json(value: &serde_json::Value) -> Result<Self> {
        value
            .as_i64()
            .map(Fp::new)
            .ok_or_else(|| Error::Parse(format!("expected integer entry, got {value}")))
    }
}

pub type Rational = BigRational;

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(x: i64) -> Self {
        BigRational::from_integer(BigInt::from(x))
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn field_name() -> String {
        "Q".into()
    }
    fn elements() -> Option<Vec<Self>> {
        None
    }
    fn to_json(&self) -> serde_json::Value {
        if self.is_integer() {
            if let Ok(x) = i64::try_from(self.to_integer()) {
                return serde_json::json!(x);
            }
        }
        serde_json::json!(self.to_string())
    }
    fn from_json(value: &serde_json::Value) -> Result<Self> {
        if let Some(x) = value.as_i64() {
            return Ok(<Self as Scalar>::from_i64(x));
        }
        let s = value
            .as_str()
            .ok_or_else(|| Error::Parse(format!("expected rational entry, got {value}")))?;
        let parsed: BigRational = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
        Ok(parsed)
    }
}

/// Row-major dense matrix. A map `F^cols → F^rows`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    /// Builds from rows; `cols` is needed when there are no rows.
    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Result<Self> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "row of length {} in a matrix with {cols} columns",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: r,
            cols,
            data,
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]], cols: usize) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| F::from_i64(x)).collect())
                .collect(),
            cols,
        )
        .expect("consistent literal rows")
    }

    pub fn column_vector(entries: Vec<F>) -> Self {
        let rows = entries.len();
        Matrix {
            rows,
            cols: 1,
            data: entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: F) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    /// `self · other`. Panics on inner dimension mismatch.
    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(
            self.cols, other.rows,
            "matrix product of {}x{} by {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out: Matrix<F> = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(r, c).add(&a.mul(b));
                    out.set(r, c, cur);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn neg(&self) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.neg()).collect(),
        }
    }

    pub fn apply(&self, x: &[F]) -> Vec<F> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .fold(F::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }

    /// Rows `start..start+len`.
    pub fn row_block(&self, start: usize, len: usize) -> Matrix<F> {
        Matrix {
            rows: len,
            cols: self.cols,
            data: self.data[start * self.cols..(start + len) * self.cols].to_vec(),
        }
    }

    /// Rows picked by index.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix<F> {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Matrix {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn place(&mut self, r0: usize, c0: usize, block: &Matrix<F>) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inv().expect("nonzero pivot");
            for c in 0..m.cols {
                let x = m.get(row, c).mul(&inv);
                m.set(row, c, x);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let f = m.get(r, col).clone();
                for c in 0..m.cols {
                    let x = m.get(r, c).sub(&f.mul(m.get(row, c)));
                    m.set(r, c, x);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical kernel basis: one column per free variable, with a `1` in
    /// that variable's row and zeros in the other free rows (reduced column
    /// echelon form).
    pub fn kernel(&self) -> Kernel<F> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis.set(f, k, F::one());
            for (row, &p) in pivots.iter().enumerate() {
                basis.set(p, k, r.get(row, f).neg());
            }
        }
        Kernel { basis, free }
    }
}

impl<F: Scalar> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|r| {
                let entries: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
                format!("[{}]", entries.join(" "))
            })
            .collect();
        write!(f, "{}x{}{}", self.rows, self.cols, rows.join(""))
    }
}

/// Kernel of a matrix with its canonical basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel<F> {
    /// `n × k`, columns span the kernel.
    pub basis: Matrix<F>,
    /// Free-variable indices; the coordinates of a kernel vector are its
    /// entries at these rows.
    pub free: Vec<usize>,
}

impl<F: Scalar> Kernel<F> {
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Coordinates of the columns of `y` in the kernel basis. Fails when a
    /// column does not lie in the kernel.
    pub fn coordinates(&self, y: &Matrix<F>) -> Result<Matrix<F>> {
        if y.rows() != self.basis.rows() {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} against kernel in dimension {}",
                y.rows(),
                self.basis.rows()
            )));
        }
        let coords = y.select_rows(&self.free);
        if self.basis.mul(&coords) != *y {
            return Err(Error::RelationViolated(
                "vector expected in kernel lies outside it".into(),
            ));
        }
        Ok(coords)
    }
}

/// Subspace of `F^n` held as a reduced row echelon basis, so equal
/// subspaces have equal representations.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace<F> {
    n: usize,
    rows: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Scalar> Subspace<F> {
    pub fn zero(n: usize) -> Self {
        Subspace {
            n,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.rows
    }

    fn reduce(&self, x: &[F]) -> Vec<F> {
        let mut x = x.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if x[p].is_zero() {
                continue;
            }
            let f = x[p].clone();
            for (xi, ri) in x.iter_mut().zip(row) {
                *xi = xi.sub(&f.mul(ri));
            }
        }
        x
    }

    pub fn contains(&self, x: &[F]) -> bool {
        self.reduce(x).iter().all(|v| v.is_zero())
    }

    /// Adds `x`; returns whether the dimension grew.
    pub fn insert(&mut self, x: &[F]) -> bool {
        let mut r = self.reduce(x);
        let Some(p) = r.iter().position(|v| !v.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().expect("nonzero");
        for v in r.iter_mut() {
            *v = v.mul(&inv);
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (a, b) in row.iter_mut().zip(&r) {
                *a = a.sub(&f.mul(b));
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, r);
        true
    }

    pub fn is_subspace_of(&self, other: &Subspace<F>) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    /// Basis as the columns of an `n × dim` matrix.
    pub fn basis_matrix(&self) -> Matrix<F> {
        let mut m = Matrix::zeros(self.n, self.rows.len());
        for (k, row) in self.rows.iter().enumerate() {
            for (i, x) in row.iter().enumerate() {
                m.set(i, k, x.clone());
            }
        }
        m
    }
}

/// Nonzero vectors of `F^n` whose first nonzero entry is `1`. One per line.
pub fn projective_points<F: Scalar>(n: usize) -> Result<Vec<Vec<F>>> {
    let elements = F::elements().ok_or(Error::FieldNotFinite)?;
    let mut out = Vec::new();
    for lead in 0..n {
        let tail = n - lead - 1;
        let count = elements.len().pow(tail as u32);
        for idx in 0..count {
            let mut v = vec![F::zero(); n];
            v[lead] = F::one();
            let mut rest = idx;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = elements[rest % elements.len()].clone();
                rest /= elements.len();
            }
            out.push(v);
        }
    }
    Ok(out)
}

/// True when the rational is negative. Convenience for stability code.
pub fn is_negative_rational(x: &BigRational) -> bool {
    x.is_negative()
}
