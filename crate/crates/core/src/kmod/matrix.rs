use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::ring::{Arith, Int};

/// Dense row-major matrix of arbitrary-precision integers.
///
/// Vectors are rows and maps act on the right: a map `M → N` between modules
/// with `g` and `h` generators is a `g × h` matrix whose row `i` is the image
/// of generator `i`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<IntLit>>", into = "Vec<Vec<IntLit>>")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Int::one();
        }
        m
    }

    /// Build from rows; all rows must share `cols` entries.
    pub fn from_rows(rows: Vec<Vec<Int>>, cols: usize) -> Matrix {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]], cols: usize) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect(), cols)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Int) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Int] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[Int]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        self.rows_iter().map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Plain integer product; callers reduce over 𝔽_p.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        *out.entry_mut(i, j) += a * b;
                    }
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn apply(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![Int::zero(); self.cols];
        for (k, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let b = self.get(k, j);
                if !b.is_zero() {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Int) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn neg(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    pub(crate) fn reduced(mut self, arith: Arith) -> Matrix {
        if let Arith::Fp(_) = arith {
            for x in &mut self.data {
                arith.reduce_in_place(x);
            }
        }
        self
    }

    /// Stack row blocks; all blocks must share the column count `cols`.
    pub fn vstack(blocks: &[&Matrix], cols: usize) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            data.extend(b.data.iter().cloned());
        }
        Matrix { rows, cols, data }
    }

    /// Place blocks side by side; all blocks must share the row count `rows`.
    pub fn hstack(blocks: &[&Matrix], rows: usize) -> Matrix {
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            out.set_block(0, off, b);
            off += b.cols;
        }
        out
    }

    pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = b.get(i, j).clone();
            }
        }
    }

    pub fn add_block(&mut self, r0: usize, c0: usize, b: &Matrix, sign: i64) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                let v = b.get(i, j);
                if v.is_zero() {
                    continue;
                }
                let e = &mut self.data[(r0 + i) * self.cols + c0 + j];
                if sign >= 0 {
                    *e += v;
                } else {
                    *e -= v;
                }
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn select_rows(&self, idx: impl IntoIterator<Item = usize>) -> Matrix {
        let rows: Vec<Vec<Int>> = idx.into_iter().map(|i| self.row(i).to_vec()).collect();
        Matrix::from_rows(rows, self.cols)
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += c * row[src]`
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, c: &Int, arith: Arith) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if s.is_zero() {
                continue;
            }
            let t = s * c;
            let d = &mut self.data[dst * self.cols + j];
            *d += t;
            arith.reduce_in_place(d);
        }
    }

    /// `col[dst] += c * col[src]`
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, c: &Int, arith: Arith) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if s.is_zero() {
                continue;
            }
            let t = s * c;
            let d = &mut self.data[i * self.cols + dst];
            *d += t;
            arith.reduce_in_place(d);
        }
    }

    pub(crate) fn scale_row(&mut self, i: usize, c: &Int, arith: Arith) {
        for j in 0..self.cols {
            let d = &mut self.data[i * self.cols + j];
            if !d.is_zero() {
                *d *= c;
                arith.reduce_in_place(d);
            }
        }
    }

    /// Determinant by fraction-free elimination (Bareiss); square matrices only.
    pub fn determinant(&self) -> Int {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut a = self.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1).clone()
    }
}

/// Integer literal in files: a JSON number when it fits in `i64`, otherwise
/// a decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntLit(pub Int);

impl Serialize for IntLit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(&self.0) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for IntLit {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Lit {
            Num(i64),
            Str(String),
        }
        match Lit::deserialize(d)? {
            Lit::Num(v) => Ok(IntLit(Int::from(v))),
            Lit::Str(s) => s.trim().parse::<Int>().map(IntLit).map_err(serde::de::Error::custom),
        }
    }
}

impl TryFrom<Vec<Vec<IntLit>>> for Matrix {
    type Error = String;

    fn try_from(rows: Vec<Vec<IntLit>>) -> Result<Self, Self::Error> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err("ragged matrix literal".to_string());
        }
        Ok(Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect(), cols))
    }
}

impl From<Matrix> for Vec<Vec<IntLit>> {
    fn from(m: Matrix) -> Self {
        m.to_rows().into_iter().map(|r| r.into_iter().map(IntLit).collect()).collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.rows_iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, x) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}


/// Serde adapter for `Vec<Int>` fields, using the same literal format as
/// matrix entries.
pub(crate) mod int_vec {
    use super::{Int, IntLit};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Int], s: S) -> Result<S::Ok, S::Error> {
        let lits: Vec<IntLit> = v.iter().cloned().map(IntLit).collect();
        lits.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Int>, D::Error> {
        let lits = Vec::<IntLit>::deserialize(d)?;
        Ok(lits.into_iter().map(|l| l.0).collect())
    }
}
