use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::qrd::Matrix;

/// Working precision of the reference decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Precision {
    Double,
    Single,
}

/// Givens QR with trigonometric angles, same elimination order as the
/// modeled unit. Returns `(Q, R)` with `A ≈ Q·R`. The single variant
/// rounds the input and every intermediate to binary32.
pub fn reference_qr(a: &Matrix<f64>, precision: Precision) -> (Matrix<f64>, Matrix<f64>) {
    match precision {
        Precision::Double => givens_qr(&a.map(|&v| v)),
        Precision::Single => {
            let (q, r) = givens_qr(&a.map(|&v| v as f32));
            (q.map(|&v| v as f64), r.map(|&v| v as f64))
        }
    }
}

fn givens_qr<T: Float>(a: &Matrix<T>) -> (Matrix<T>, Matrix<T>) {
    let (m, n) = (a.rows(), a.cols());
    let mut r: Vec<Vec<T>> = (0..m).map(|i| a.row(i).to_vec()).collect();
    let mut g: Vec<Vec<T>> = (0..m)
        .map(|i| (0..m).map(|k| if i == k { T::one() } else { T::zero() }).collect())
        .collect();
    for j in 0..n.min(m.saturating_sub(1)) {
        for i in j + 1..m {
            let theta = r[i][j].atan2(r[j][j]);
            let (c, s) = (theta.cos(), theta.sin());
            let apply = |rows: &mut Vec<Vec<T>>, from: usize| {
                for k in from..rows[j].len() {
                    let (x, y) = (rows[j][k], rows[i][k]);
                    rows[j][k] = c * x + s * y;
                    rows[i][k] = c * y - s * x;
                }
            };
            apply(&mut r, j);
            r[i][j] = T::zero();
            apply(&mut g, 0);
        }
    }
    let r = Matrix::from_fn(m, n, |i, k| if k < i { T::zero() } else { r[i][k] });
    let q = Matrix::from_fn(m, m, |i, k| g[k][i]);
    (q, r)
}
