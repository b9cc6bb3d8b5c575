use std::fmt::Write as _;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::fmt::f64_17;

/// Dense complex matrix stored row-major. Indices are zero-based.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::invalid(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("matrix entries must be finite"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Mutable views of two distinct rows.
    pub fn two_rows_mut(&mut self, a: usize, b: usize) -> (&mut [Complex64], &mut [Complex64]) {
        assert!(a < b && b < self.rows);
        let cols = self.cols;
        let (head, tail) = self.data.split_at_mut(b * cols);
        (&mut head[a * cols..(a + 1) * cols], &mut tail[..cols])
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (o, b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same_shape(rhs)?;
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.diagonal().into_iter().sum()
    }

    /// Tr(self^dagger * rhs) without forming the product.
    pub fn adjoint_trace_product(&self, rhs: &Self) -> Result<Complex64> {
        self.check_same_shape(rhs)?;
        Ok(self.data.iter().zip(&rhs.data).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub(crate) fn check_same_shape(&self, rhs: &Self) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::invalid(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    /// Serializes a square matrix as `{"n": .., "re": [[..]], "im": [[..]]}`.
    pub fn to_json(&self) -> Result<String> {
        if !self.is_square() {
            return Err(Error::invalid("only square matrices serialize to JSON"));
        }
        let n = self.rows;
        let mut out = String::new();
        let _ = write!(out, "{{\"n\":{n},\"re\":");
        self.write_part(&mut out, |z| z.re);
        out.push_str(",\"im\":");
        self.write_part(&mut out, |z| z.im);
        out.push('}');
        Ok(out)
    }

    fn write_part(&self, out: &mut String, part: impl Fn(&Complex64) -> f64) {
        out.push('[');
        for i in 0..self.rows {
            if i > 0 {
                out.push(',');
            }
            out.push('[');
            for (j, z) in self.row(i).iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                out.push_str(&f64_17(part(z)));
            }
            out.push(']');
        }
        out.push(']');
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Repr {
            n: usize,
            re: Vec<Vec<f64>>,
            im: Vec<Vec<f64>>,
        }
        let repr: Repr = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let n = repr.n;
        if n == 0 {
            return Err(Error::Parse("matrix dimension must be positive".into()));
        }
        let well_formed = |part: &[Vec<f64>]| part.len() == n && part.iter().all(|r| r.len() == n);
        if !well_formed(&repr.re) || !well_formed(&repr.im) {
            return Err(Error::Parse(format!("re/im must both be {n}x{n}")));
        }
        let data = repr
            .re
            .iter()
            .flatten()
            .zip(repr.im.iter().flatten())
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        Self::from_row_major(n, n, data).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}
