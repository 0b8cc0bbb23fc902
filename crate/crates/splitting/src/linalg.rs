//! Small dense linear algebra over any [`Field`].

use std::ops::Div;

use num_complex::Complex64;
use splitting_core::eval::Scalar;

pub trait Field: Scalar + Div<Output = Self> {
    /// Size used for pivoting; need not be exact.
    fn magnitude(&self) -> f64;
    fn conj(&self) -> Self;
}

impl Field for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn conj(&self) -> Self {
        *self
    }
}

impl Field for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
}

/// Pivots below this fraction of the largest matrix entry count as zero.
pub const SINGULAR_RATIO: f64 = 1e-13;

/// Solves `m x = rhs` by Gaussian elimination with partial pivoting.
/// Returns `None` for a (numerically) singular matrix.
pub fn solve<T: Field>(mut m: Vec<Vec<T>>, mut rhs: Vec<T>) -> Option<Vec<T>> {
    let n = rhs.len();
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return None;
    }
    let scale = m
        .iter()
        .flat_map(|r| r.iter().map(Field::magnitude))
        .fold(0.0, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return None;
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].magnitude().total_cmp(&m[j][col].magnitude()))?;
        if m[piv][col].magnitude() <= SINGULAR_RATIO * scale {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        let p = m[col][col];
        for row in col + 1..n {
            let f = m[row][col] / p;
            if f.magnitude() == 0.0 {
                continue;
            }
            for k in col..n {
                let t = m[col][k];
                m[row][k] = m[row][k] - f * t;
            }
            let t = rhs[col];
            rhs[row] = rhs[row] - f * t;
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for k in row + 1..n {
            acc = acc - m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

/// Minimum-norm solution of the underdetermined system `j x = rhs`
/// (`x = jᴴ (j jᴴ)⁻¹ rhs`); for square `j` this is the ordinary solve.
pub fn min_norm_solve<T: Field>(j: &[Vec<T>], rhs: &[T]) -> Option<Vec<T>> {
    let m = j.len();
    if m == 0 {
        return Some(Vec::new());
    }
    let n = j[0].len();
    if m == n {
        return solve(j.to_vec(), rhs.to_vec());
    }
    let mut g = vec![vec![T::zero(); m]; m];
    for a in 0..m {
        for b in 0..m {
            let mut acc = T::zero();
            for k in 0..n {
                acc = acc + j[a][k] * j[b][k].conj();
            }
            g[a][b] = acc;
        }
    }
    let y = solve(g, rhs.to_vec())?;
    let mut x = vec![T::zero(); n];
    for (k, xk) in x.iter_mut().enumerate() {
        let mut acc = T::zero();
        for a in 0..m {
            acc = acc + j[a][k].conj() * y[a];
        }
        *xk = acc;
    }
    Some(x)
}
