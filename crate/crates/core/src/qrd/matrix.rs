use std::fmt::Display;

use crate::error::{Error, Result};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("empty {rows}x{cols} matrix")));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} elements for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U: Clone>(&self, f: impl FnMut(&T) -> Result<U>) -> Result<Matrix<U>> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }
}

impl Matrix<f64> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { 1.0 } else { 0.0 })
    }

    pub fn matmul(&self, rhs: &Matrix<f64>) -> Result<Matrix<f64>> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, rhs.cols, |r, c| {
            (0..self.cols).map(|k| self.get(r, k) * rhs.get(k, c)).sum()
        }))
    }

    pub fn max_abs_diff(&self, rhs: &Matrix<f64>) -> f64 {
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Parse CSV text: one row per line, comma separated, decimal or
    /// hex-float (`0x1.8p3`) tokens. Blank lines and `#` comments are skipped.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.split(',').map(parse_real).collect::<Result<Vec<f64>>>())
            .collect::<Result<Vec<_>>>()?;
        if rows.is_empty() {
            return Err(Error::Dimension("no rows in CSV input".into()));
        }
        Matrix::from_rows(rows)
    }
}

impl<T: Display + Clone> Matrix<T> {
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }
}

/// Decimal or hex-float literal.
pub fn parse_real(token: &str) -> Result<f64> {
    let t = token.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let v = if body.starts_with("0x") || body.starts_with("0X") {
        hexf_parse::parse_hexf64(body, false).map_err(|e| Error::Parse(format!("{t:?}: {e}")))?
    } else {
        body.parse::<f64>().map_err(|e| Error::Parse(format!("{t:?}: {e}")))?
    };
    if !v.is_finite() {
        return Err(Error::Parse(format!("{t:?} is not finite")));
    }
    Ok(if neg { -v } else { v })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_and_hex() {
        let m = Matrix::parse_csv("1, 0x1.8p1\n# note\n-0x1p-2,2.5\n").unwrap();
        assert_eq!(m.as_slice(), &[1.0, 3.0, -0.25, 2.5]);
        let back = Matrix::parse_csv(&m.to_csv()).unwrap();
        assert_eq!(back, m);
        assert!(Matrix::parse_csv("1,2\n3\n").is_err());
        assert!(Matrix::parse_csv("1,abc").is_err());
    }

    #[test]
    fn transpose_and_matmul() {
        let a = Matrix::new(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let p = a.matmul(&a.transpose()).unwrap();
        assert_eq!(p.as_slice(), &[14.0, 32.0, 32.0, 77.0]);
        assert!(a.matmul(&a).is_err());
    }
}
