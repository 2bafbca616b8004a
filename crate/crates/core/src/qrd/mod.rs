//! Givens unit, QR decomposition and the cycle model.

mod cycles;
mod matrix;
mod stream;
mod unit;

pub use cycles::{schedule_cycles, throughput_mops, CycleReport, INPUT_CONVERTER_STAGES, OUTPUT_CONVERTER_STAGES};
pub use matrix::{parse_real, Matrix};
pub use stream::{StreamInput, StreamingUnit};
pub use unit::{givens_pair, FixedGivensUnit, GivensUnit, GivensUnitConfig, PairMode, RotationUnit};

use crate::error::{Error, Result};

/// Output of [`qr_decompose`].
#[derive(Debug, Clone)]
pub struct QrResult<T> {
    /// `A ≈ Q·R`; present when requested.
    pub q: Option<Matrix<T>>,
    pub r: Matrix<T>,
    /// Vectoring `y'` values discarded at annihilated positions, in
    /// elimination order.
    pub residuals: Vec<f64>,
}

/// Number of Givens rotations needed to triangularize an `m × n` matrix.
pub fn rotation_count(m: usize, n: usize) -> usize {
    (0..n.min(m.saturating_sub(1))).map(|j| m - 1 - j).sum()
}

/// Column-major Givens QR: for each column `j`, rows `j` and `i > j` are
/// paired, the unit vectors on column `j` and replays the directions along
/// the rest of the row. With `want_q` each working row carries an identity
/// row, which accumulates `Qᵗ`.
pub fn qr_decompose<U: RotationUnit>(a: &Matrix<U::Elem>, unit: &U, want_q: bool) -> Result<QrResult<U::Elem>> {
    let (m, n) = (a.rows(), a.cols());
    let e = if want_q { n + m } else { n };
    let mut rows: Vec<Vec<U::Elem>> = (0..m)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            if want_q {
                row.extend((0..m).map(|k| if k == i { unit.one() } else { unit.zero() }));
            }
            row
        })
        .collect();

    let mut residuals = Vec::with_capacity(rotation_count(m, n));
    for j in 0..n.min(m.saturating_sub(1)) {
        for i in j + 1..m {
            let (pivot, rest) = rows.split_at_mut(i);
            let (top, bottom) = (&mut pivot[j], &mut rest[0]);
            let (x, y, sigma) = unit.vector(&top[j], &bottom[j])?;
            top[j] = x;
            residuals.push(unit.decode(&y));
            bottom[j] = unit.zero();
            for k in j + 1..e {
                let (x, y) = unit.rotate(&top[k], &bottom[k], &sigma)?;
                top[k] = x;
                bottom[k] = y;
            }
        }
    }

    let r = Matrix::from_fn(m, n, |i, k| if k < i { unit.zero() } else { rows[i][k].clone() });
    let q = want_q.then(|| Matrix::from_fn(m, m, |i, k| rows[k][n + i].clone()));
    Ok(QrResult { q, r, residuals })
}

/// `Q·R` in binary64 from decoded unit outputs.
pub fn recompose<U: RotationUnit>(res: &QrResult<U::Elem>, unit: &U) -> Result<Matrix<f64>> {
    let q = res
        .q
        .as_ref()
        .ok_or_else(|| Error::Dimension("recomposition needs Q".into()))?;
    q.map(|v| unit.decode(v)).matmul(&res.r.map(|v| unit.decode(v)))
}
