//! One-sided (Hestenes) Jacobi SVD.
//!
//! Singular values come out with high relative accuracy, which is what the
//! rank decisions downstream (`rank(E − I)`, null spaces for eigenvectors)
//! rely on.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::{inner, vec_norm, CMatrix};
use crate::scalar::{cr, Real};

#[derive(Debug, Clone)]
pub struct SvdResult<T> {
    /// Descending.
    pub singular_values: Vec<T>,
    /// Right singular vectors as columns, in the same order.
    pub right_vectors: CMatrix<T>,
}

const MAX_SWEEPS: usize = 60;

pub fn svd_jacobi<T: Real>(m: &CMatrix<T>) -> SvdResult<T> {
    let n = m.cols();
    let mut a: Vec<Vec<Complex<T>>> = (0..n).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<Complex<T>>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| if i == j { Complex::one() } else { Complex::zero() })
                .collect()
        })
        .collect();
    let eps = T::epsilon();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let alpha = a[i].iter().map(|z| z.norm_sqr()).sum::<T>();
                let beta = a[j].iter().map(|z| z.norm_sqr()).sum::<T>();
                let g = inner(&a[i], &a[j]);
                let gabs = g.norm();
                if gabs.is_zero() || gabs <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // rotate the phase of column j so that ⟨a_i|a_j⟩ is real
                let phase = (g / cr(gabs)).conj();
                for z in a[j].iter_mut() {
                    *z *= phase;
                }
                for z in v[j].iter_mut() {
                    *z *= phase;
                }
                let zeta = (beta - alpha) / (T::lit(2.0) * gabs);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = cs * t;
                rotate(&mut a, i, j, cs, sn);
                rotate(&mut v, i, j, cs, sn);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(T, usize)> = a.iter().enumerate().map(|(j, col)| (vec_norm(col), j)).collect();
    order.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(std::cmp::Ordering::Equal));
    let singular_values = order.iter().map(|&(s, _)| s).collect();
    let cols: Vec<Vec<Complex<T>>> = order.iter().map(|&(_, j)| v[j].clone()).collect();
    SvdResult {
        singular_values,
        right_vectors: CMatrix::from_columns(&cols).expect("square basis"),
    }
}

fn rotate<T: Real>(cols: &mut [Vec<Complex<T>>], i: usize, j: usize, cs: T, sn: T) {
    let (ci, cj) = (cr(cs), cr(sn));
    for k in 0..cols[i].len() {
        let (x, y) = (cols[i][k], cols[j][k]);
        cols[i][k] = x * ci - y * cj;
        cols[j][k] = x * cj + y * ci;
    }
}
