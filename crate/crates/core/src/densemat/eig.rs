//! Eigen-decomposition of small general (non-Hermitian) complex matrices.
//!
//! Eigenvalues come from a Hessenberg reduction followed by single-shift
//! complex QR with Wilkinson shifts. Eigenvectors are recovered per cluster of
//! (numerically) equal eigenvalues as the null space of `M − λI` via Jacobi
//! SVD, which handles semisimple degeneracies such as the doubled unit
//! eigenvalue of a transfer matrix without losing accuracy. When the
//! recovered vectors do not span the space the matrix is reported as
//! defective instead of returning a broken basis.

use std::cmp::Ordering;

use num_complex::Complex;
use num_traits::{One, Zero};

use super::{svd_jacobi, vec_norm, CMatrix};
use crate::error::{Error, Result};
use crate::scalar::{cr, Real};

pub const MAX_DIM: usize = 8;
const ITERS_PER_EIGENVALUE: usize = 60;

#[derive(Debug, Clone)]
pub struct EigenResult<T> {
    /// Sorted by descending modulus, then descending real part, then
    /// descending imaginary part.
    pub eigenvalues: Vec<Complex<T>>,
    /// Right eigenvectors as columns, aligned with `eigenvalues` when the
    /// matrix is diagonalizable; otherwise only the independent vectors found.
    pub right_vectors: CMatrix<T>,
    /// Left eigenvectors as rows, biorthonormal to `right_vectors`
    /// (`left · right = I`). `None` for defective matrices.
    pub left_vectors: Option<CMatrix<T>>,
    /// `max_i ‖M r_i − λ_i r_i‖ / ‖r_i‖`.
    pub residual: T,
    pub diagonalizable: bool,
}

impl<T: Real> EigenResult<T> {
    /// `Σ λ_i |r_i⟩⟨l_i|`, available when diagonalizable.
    pub fn reconstruct(&self) -> Option<CMatrix<T>> {
        let left = self.left_vectors.as_ref()?;
        let d = CMatrix::diag(&self.eigenvalues);
        Some(&(&self.right_vectors * &d) * left)
    }
}

pub fn eig_general<T: Real>(m: &CMatrix<T>, tol: T) -> Result<EigenResult<T>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(
            "eigen-decomposition needs a square matrix".into(),
        ));
    }
    let n = m.rows();
    if n == 0 || n > MAX_DIM {
        return Err(Error::InvalidInput(format!("matrix size {n} outside 1..={MAX_DIM}")));
    }
    let scale = m.max_abs().max(T::one());
    let mut values = qr_eigenvalues(m)?;
    sort_eigenvalues(&mut values, tol);

    // cluster numerically equal eigenvalues
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        match clusters
            .iter_mut()
            .find(|c| c.iter().any(|&k| (values[k] - values[i]).norm() <= tol * scale))
        {
            Some(c) => c.push(i),
            None => clusters.push(vec![i]),
        }
    }

    let mut columns: Vec<(usize, Vec<Complex<T>>)> = Vec::with_capacity(n);
    let mut complete = true;
    for cluster in &clusters {
        let k = cluster.len();
        let centre = cluster.iter().fold(Complex::<T>::zero(), |acc, &i| acc + values[i]) / cr(T::lit(k as f64));
        let shifted = m - &CMatrix::identity(n).scale(centre);
        let svd = svd_jacobi(&shifted);
        let mut found = 0;
        for s in 0..k {
            let v = svd.right_vectors.column(n - 1 - s);
            let mv = m.apply(&v);
            let res = vec_norm(&mv.iter().zip(&v).map(|(a, b)| a - b * centre).collect::<Vec<_>>());
            if res <= tol * scale {
                columns.push((cluster[found], v));
                found += 1;
            }
        }
        if found < k {
            complete = false;
        }
    }

    columns.sort_by_key(|(i, _)| *i);
    let right = CMatrix::from_columns(&columns.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>())?;
    // a Jordan block splits into nearly parallel vectors; treat an
    // ill-conditioned basis as defective
    let left = if complete && right.rank(tol.sqrt()) == n {
        right.inverse().ok()
    } else {
        None
    };
    let diagonalizable = left.is_some();

    if let Some(l) = &left {
        // Rayleigh-type refinement with the dual basis
        let lmr = &(l * m) * &right;
        for (i, v) in values.iter_mut().enumerate() {
            *v = lmr[(i, i)];
        }
    }

    let residual = (0..right.cols())
        .map(|j| {
            let r = right.column(j);
            let lambda = values[columns[j].0];
            let mr = m.apply(&r);
            vec_norm(&mr.iter().zip(&r).map(|(a, b)| a - b * lambda).collect::<Vec<_>>()) / vec_norm(&r)
        })
        .fold(T::zero(), T::max);
    if residual > tol * scale {
        return Err(Error::Inconsistent(format!(
            "eigenpair residual {:.3e} above tolerance {:.3e}",
            residual.to_f64_lossy(),
            (tol * scale).to_f64_lossy()
        )));
    }

    Ok(EigenResult {
        eigenvalues: values,
        right_vectors: right,
        left_vectors: left,
        residual,
        diagonalizable,
    })
}

/// `n − rank(M − λI)`.
pub fn geometric_multiplicity<T: Real>(m: &CMatrix<T>, lambda: Complex<T>, tol: T) -> usize {
    let n = m.rows();
    n - (m - &CMatrix::identity(n).scale(lambda)).rank(tol)
}

/// Characteristic polynomial coefficients `c_0..=c_n` of `det(λI − M)` by
/// Faddeev–LeVerrier (`c_n = 1`).
pub fn char_poly<T: Real>(m: &CMatrix<T>) -> Vec<Complex<T>> {
    let n = m.rows();
    let mut coeffs = vec![Complex::zero(); n + 1];
    coeffs[n] = Complex::one();
    let mut mk = CMatrix::zeros(n, n);
    for k in 1..=n {
        mk = &(m * &mk) + &CMatrix::identity(n).scale(coeffs[n - k + 1]);
        let t = (m * &mk).trace();
        coeffs[n - k] = -t / cr(T::lit(k as f64));
    }
    coeffs
}

pub fn poly_eval<T: Real>(coeffs: &[Complex<T>], x: Complex<T>) -> Complex<T> {
    coeffs.iter().rev().fold(Complex::zero(), |acc, &c| acc * x + c)
}

fn sort_eigenvalues<T: Real>(values: &mut [Complex<T>], tol: T) {
    let cmp = |a: &Complex<T>, b: &Complex<T>| -> Ordering {
        let (ma, mb) = (a.norm(), b.norm());
        if (ma - mb).abs() > tol {
            return mb.partial_cmp(&ma).unwrap_or(Ordering::Equal);
        }
        if (a.re - b.re).abs() > tol {
            return b.re.partial_cmp(&a.re).unwrap_or(Ordering::Equal);
        }
        b.im.partial_cmp(&a.im).unwrap_or(Ordering::Equal)
    };
    // insertion sort: the tolerance comparator is not a total order
    for i in 1..values.len() {
        let mut j = i;
        while j > 0 && cmp(&values[j - 1], &values[j]) == Ordering::Greater {
            values.swap(j - 1, j);
            j -= 1;
        }
    }
}

fn qr_eigenvalues<T: Real>(m: &CMatrix<T>) -> Result<Vec<Complex<T>>> {
    let n = m.rows();
    let mut h = hessenberg(m);
    let mut out = Vec::with_capacity(n);
    let eps = T::epsilon();
    let norm = m.frobenius().max(T::min_positive_value());
    let mut hi = n - 1;
    let mut its = 0usize;
    let mut total = 0usize;
    loop {
        if hi == 0 {
            out.push(h[(0, 0)]);
            break;
        }
        let mut lo = 0;
        for l in (1..=hi).rev() {
            let sub = h[(l, l - 1)].norm();
            if sub <= eps * (h[(l, l)].norm() + h[(l - 1, l - 1)].norm()) || sub <= eps * norm {
                h[(l, l - 1)] = Complex::zero();
                lo = l;
                break;
            }
        }
        if lo == hi {
            out.push(h[(hi, hi)]);
            hi -= 1;
            its = 0;
            continue;
        }
        its += 1;
        total += 1;
        if its > ITERS_PER_EIGENVALUE {
            return Err(Error::NoConvergence { iterations: total });
        }
        let shift = if its % 11 == 10 {
            h[(hi, hi)] + cr(h[(hi, hi - 1)].norm() * T::lit(0.75))
        } else {
            wilkinson(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_step(&mut h, lo, hi, shift);
    }
    Ok(out)
}

fn wilkinson<T: Real>(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Complex<T> {
    let half = cr(T::lit(0.5));
    let mean = (a + d) * half;
    let diff = (a - d) * half;
    let disc = (diff * diff + b * c).sqrt();
    let (l1, l2) = (mean + disc, mean - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn qr_step<T: Real>(h: &mut CMatrix<T>, lo: usize, hi: usize, shift: Complex<T>) {
    for k in lo..=hi {
        h[(k, k)] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (a, b) = (h[(k, k)], h[(k + 1, k)]);
        let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (ca, cb) = if r.is_zero() {
            (Complex::one(), Complex::zero())
        } else {
            (a / cr(r), b / cr(r))
        };
        for j in k..=hi {
            let (x, y) = (h[(k, j)], h[(k + 1, j)]);
            h[(k, j)] = ca.conj() * x + cb.conj() * y;
            h[(k + 1, j)] = -cb * x + ca * y;
        }
        rotations.push((ca, cb));
    }
    for (idx, &(ca, cb)) in rotations.iter().enumerate() {
        let k = lo + idx;
        for i in lo..=(k + 2).min(hi) {
            let (x, y) = (h[(i, k)], h[(i, k + 1)]);
            h[(i, k)] = x * ca + y * cb;
            h[(i, k + 1)] = -x * cb.conj() + y * ca.conj();
        }
    }
    for k in lo..=hi {
        h[(k, k)] += shift;
    }
}

/// Householder reduction to upper Hessenberg form (similarity transform).
fn hessenberg<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    let n = m.rows();
    let mut h = m.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex<T>> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = vec_norm(&x);
        if xnorm.is_zero() {
            continue;
        }
        let phase = if x[0].norm().is_zero() {
            Complex::one()
        } else {
            x[0] / cr(x[0].norm())
        };
        let alpha = -phase * cr(xnorm);
        let mut v = x.clone();
        v[0] -= alpha;
        let vnorm = vec_norm(&v);
        if vnorm.is_zero() {
            continue;
        }
        for z in v.iter_mut() {
            *z /= cr(vnorm);
        }
        // H ← (I − 2vv†) H
        for j in 0..n {
            let s = v
                .iter()
                .enumerate()
                .fold(Complex::zero(), |acc, (t, vt)| acc + vt.conj() * h[(k + 1 + t, j)]);
            for (t, vt) in v.iter().enumerate() {
                h[(k + 1 + t, j)] -= cr(T::lit(2.0)) * vt * s;
            }
        }
        // H ← H (I − 2vv†)
        for i in 0..n {
            let s = v
                .iter()
                .enumerate()
                .fold(Complex::zero(), |acc, (t, vt)| acc + h[(i, k + 1 + t)] * vt);
            for (t, vt) in v.iter().enumerate() {
                h[(i, k + 1 + t)] -= cr(T::lit(2.0)) * s * vt.conj();
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Complex::zero();
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    type M = CMatrix<f64>;

    #[test]
    fn diagonal_spectrum_sorted() {
        let m = M::diag(&[c(0., 0.), c(-0.25, 0.), c(1., 0.), c(0.5, 0.)]);
        let r = eig_general(&m, 1e-9).unwrap();
        let got: Vec<f64> = r.eigenvalues.iter().map(|z| z.re).collect();
        assert_eq!(got, vec![1.0, 0.5, -0.25, 0.0]);
        assert!(r.diagonalizable);
    }

    #[test]
    fn rotation_has_conjugate_pair() {
        let (s, co) = (0.3f64.sin(), 0.3f64.cos());
        let m = M::from_real_rows(&[&[co, -s], &[s, co]]).unwrap();
        let r = eig_general(&m, 1e-9).unwrap();
        assert!((r.eigenvalues[0] - c(co, s)).norm() < 1e-14);
        assert!((r.eigenvalues[1] - c(co, -s)).norm() < 1e-14);
        assert!(r.reconstruct().unwrap().max_abs_diff(&m) < 1e-13);
    }

    #[test]
    fn jordan_block_is_flagged() {
        let m = M::from_real_rows(&[&[0.5, 1.0, 0.0], &[0.0, 0.5, 0.0], &[0.0, 0.0, 0.1]]).unwrap();
        let r = eig_general(&m, 1e-9).unwrap();
        assert!(!r.diagonalizable);
        assert!(r.left_vectors.is_none());
        assert_eq!(geometric_multiplicity(&m, c(0.5, 0.), 1e-9), 1);
    }

    #[test]
    fn semisimple_degenerate_is_diagonalizable() {
        let p = M::from_real_rows(&[
            &[1., 2., 0., 1.],
            &[0., 1., 1., 0.],
            &[1., 0., 1., 0.],
            &[0., 0., 1., 1.],
        ])
        .unwrap();
        let d = M::diag(&[c(1., 0.), c(1., 0.), c(0.3, 0.1), c(0.3, 0.1)]);
        let m = &(&p * &d) * &p.inverse().unwrap();
        let r = eig_general(&m, 1e-9).unwrap();
        assert!(r.diagonalizable);
        assert!((r.eigenvalues[0] - c(1., 0.)).norm() < 1e-12);
        assert!((r.eigenvalues[1] - c(1., 0.)).norm() < 1e-12);
        assert!(r.reconstruct().unwrap().max_abs_diff(&m) < 1e-10);
        assert_eq!(geometric_multiplicity(&m, c(1., 0.), 1e-9), 2);
    }

    #[test]
    fn char_poly_of_diagonal() {
        let m = M::diag(&[c(1., 0.), c(2., 0.)]);
        let p = char_poly(&m);
        // λ² − 3λ + 2
        assert!((p[0] - c(2., 0.)).norm() < 1e-14);
        assert!((p[1] - c(-3., 0.)).norm() < 1e-14);
        assert!((p[2] - c(1., 0.)).norm() < 1e-14);
        assert!(poly_eval(&p, c(2., 0.)).norm() < 1e-14);
    }

    #[test]
    fn rejects_oversized() {
        assert!(eig_general(&M::identity(9), 1e-9).is_err());
        assert!(eig_general(&M::zeros(2, 3), 1e-9).is_err());
    }
}
