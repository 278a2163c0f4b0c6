//! Two-qubit gates.
//!
//! Basis order is `|00⟩, |01⟩, |10⟩, |11⟩` with the first tensor factor the
//! left (control) qubit, i.e. composite index `2·left + right`.

mod file;

use num_complex::Complex;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::densemat::CMatrix;
use crate::error::{Error, Result};
use crate::scalar::{c, cr, Real};

pub use file::{gate_from_family, load_gate_file, parse_gate_json, GateFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateFamily {
    Weyl,
    ControlledRotation,
    Squeezing,
    MacroscopicFamily,
    Conjugated,
    Custom,
}

#[derive(Debug, Clone)]
pub struct Gate<T> {
    matrix: CMatrix<T>,
    family: GateFamily,
    params: Vec<T>,
}

impl<T: Real> Gate<T> {
    /// Validates a 4×4 matrix as a gate; rejects with the max deviation of
    /// `U†U` from the identity.
    pub fn from_matrix(matrix: CMatrix<T>, tol: T) -> Result<Self> {
        if matrix.rows() != 4 || matrix.cols() != 4 {
            return Err(Error::DimensionMismatch(format!(
                "gate must be 4x4, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let deviation = matrix.unitarity_deviation();
        if !(deviation <= tol) {
            return Err(Error::NotUnitary {
                deviation: deviation.to_f64_lossy(),
            });
        }
        Ok(Self {
            matrix,
            family: GateFamily::Custom,
            params: Vec::new(),
        })
    }

    pub fn identity() -> Self {
        Self {
            matrix: CMatrix::identity(4),
            family: GateFamily::Custom,
            params: Vec::new(),
        }
    }

    fn tagged(matrix: CMatrix<T>, family: GateFamily, params: Vec<T>) -> Self {
        debug_assert!(matrix.unitarity_deviation() <= T::lit(T::UNITARY_TOL));
        Self { matrix, family, params }
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn family(&self) -> GateFamily {
        self.family
    }

    pub fn params(&self) -> &[T] {
        &self.params
    }

    /// Same gate multiplied by a global phase.
    pub fn with_phase(&self, phi: T) -> Self {
        Self {
            matrix: self.matrix.scale(Complex::from_polar(T::one(), phi)),
            family: self.family,
            params: self.params.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylParams<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
}

/// The four independent entries of a Weyl-chamber gate matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylEntries<T> {
    pub x: Complex<T>,
    pub y: Complex<T>,
    pub z: Complex<T>,
    pub w: Complex<T>,
}

impl<T: Real> WeylParams<T> {
    pub fn entries(&self) -> WeylEntries<T> {
        let half = T::lit(0.5);
        let (a, b, g) = (self.alpha, self.beta, self.gamma);
        let minus_i = c::<T>(0., -1.);
        let e_minus = Complex::from_polar(T::one(), -g * half);
        let e_plus = Complex::from_polar(T::one(), g * half);
        WeylEntries {
            x: e_minus * cr(((a - b) * half).cos()),
            y: minus_i * e_plus * cr(((a + b) * half).sin()),
            z: e_plus * cr(((a + b) * half).cos()),
            w: minus_i * e_minus * cr(((a - b) * half).sin()),
        }
    }
}

/// `exp(−(i/2)(α σx⊗σx + β σy⊗σy + γ σz⊗σz))`.
pub fn weyl_gate<T: Real>(alpha: T, beta: T, gamma: T) -> Gate<T> {
    let WeylEntries { x, y, z, w } = WeylParams { alpha, beta, gamma }.entries();
    let o = Complex::zero();
    let matrix =
        CMatrix::from_rows(&[vec![x, o, o, w], vec![o, z, y, o], vec![o, y, z, o], vec![w, o, o, x]]).expect("4x4");
    Gate::tagged(matrix, GateFamily::Weyl, vec![alpha, beta, gamma])
}

/// Rotation by `a` about y, as a real 2×2 matrix.
pub fn y_rotation<T: Real>(a: T) -> CMatrix<T> {
    let (s, co) = ((a * T::lit(0.5)).sin(), (a * T::lit(0.5)).cos());
    CMatrix::from_rows(&[vec![cr(co), cr(-s)], vec![cr(s), cr(co)]]).expect("2x2")
}

/// `[[cos θ, i sin θ], [i sin θ, cos θ]] = exp(iθσx)`.
pub fn x_rotation<T: Real>(theta: T) -> CMatrix<T> {
    let (s, co) = (theta.sin(), theta.cos());
    let is = Complex::new(T::zero(), s);
    CMatrix::from_rows(&[vec![cr(co), is], vec![is, cr(co)]]).expect("2x2")
}

/// `exp(−iθσz/2)`.
pub fn z_rotation<T: Real>(theta: T) -> CMatrix<T> {
    let half = theta * T::lit(0.5);
    CMatrix::diag(&[
        Complex::from_polar(T::one(), -half),
        Complex::from_polar(T::one(), half),
    ])
}

/// `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ U⁰(a)` with `U⁰` a rotation by `a` about y.
pub fn controlled_rotation<T: Real>(a: T) -> Gate<T> {
    let u0 = y_rotation(a);
    let p0 = CMatrix::unit(2, 0, 0).kron(&CMatrix::identity(2));
    let p1 = CMatrix::unit(2, 1, 1).kron(&u0);
    Gate::tagged(&p0 + &p1, GateFamily::ControlledRotation, vec![a])
}

/// Sequential two-axis twisting gate `exp(−i(χt/2)(σx⊗σx − σy⊗σy))`.
pub fn squeezing_gate<T: Real>(chi_t: T) -> Gate<T> {
    let g = weyl_gate(chi_t, -chi_t, T::zero());
    Gate::tagged(g.matrix, GateFamily::Squeezing, vec![chi_t])
}

/// The two fixed columns (0 and 2) of a gate whose Kraus pair is
/// `√(1−p)·ω(θ)`, `√p·ω(θ′)` with `ω` rotations about x.
pub fn macroscopic_columns<T: Real>(p: T, theta: T, theta_p: T) -> CMatrix<T> {
    columns_with_amplitudes(theta, theta_p, (T::one() - p).sqrt(), p.sqrt(), p.sqrt())
}

/// The same two columns with amplitudes `(1−p)` and `p`, and with the final
/// `cos θ′` entry unscaled. These are not unit vectors for `0 < p < 1`, so no
/// unitary completes them; kept only to document the discrepancy.
pub fn macroscopic_columns_unnormalized<T: Real>(p: T, theta: T, theta_p: T) -> CMatrix<T> {
    columns_with_amplitudes(theta, theta_p, T::one() - p, p, T::one())
}

fn columns_with_amplitudes<T: Real>(theta: T, theta_p: T, a: T, b: T, last: T) -> CMatrix<T> {
    let w = x_rotation(theta);
    let wp = x_rotation(theta_p);
    // (V_i)_{jk} = U_{ik,j0}: column 2j holds row j of V_0 on top of row j of V_1
    let col = |j: usize, last_scale: T| -> Vec<Complex<T>> {
        vec![
            w[(j, 0)] * cr(a),
            w[(j, 1)] * cr(a),
            wp[(j, 0)] * cr(b),
            wp[(j, 1)] * cr(if j == 1 { last_scale } else { b }),
        ]
    };
    CMatrix::from_columns(&[col(0, b), col(1, last)]).expect("4x2")
}

/// Gate realizing the Kraus pair `√(1−p)·ω(θ)`, `√p·ω(θ′)`; the free columns
/// 1 and 3 are a seeded orthonormal completion.
pub fn macroscopic_family<T: Real>(p: T, theta: T, theta_p: T, seed: u64) -> Result<Gate<T>> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::InvalidInput(format!("p must lie in [0, 1], got {p}")));
    }
    let fixed = macroscopic_columns(p, theta, theta_p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let candidates = std::iter::repeat_with(move || gaussian_vector::<T>(&mut rng, 4));
    let basis = CMatrix::complete_orthonormal(&fixed, candidates)?;
    // basis columns: [fixed0, fixed2, free, free] → gate columns [0, 2, 1, 3]
    let order = [0usize, 2, 1, 3];
    let mut matrix = CMatrix::zeros(4, 4);
    for (k, &dst) in order.iter().enumerate() {
        matrix.set_column(dst, &basis.column(k));
    }
    Ok(Gate::tagged(
        matrix,
        GateFamily::MacroscopicFamily,
        vec![p, theta, theta_p, T::lit(seed as f64)],
    ))
}

/// `(r1⊗r2)·g·(r1†⊗r2†)`.
pub fn conjugated_gate<T: Real>(g: &Gate<T>, r1: &CMatrix<T>, r2: &CMatrix<T>) -> Result<Gate<T>> {
    let tol = T::lit(T::UNITARY_TOL);
    for r in [r1, r2] {
        if r.rows() != 2 || r.cols() != 2 {
            return Err(Error::DimensionMismatch("local rotation must be 2x2".into()));
        }
        let dev = r.unitarity_deviation();
        if dev > tol {
            return Err(Error::NotUnitary {
                deviation: dev.to_f64_lossy(),
            });
        }
    }
    let local = r1.kron(r2);
    let matrix = &(&local * &g.matrix) * &local.adjoint();
    Ok(Gate::tagged(matrix, GateFamily::Conjugated, g.params.clone()))
}

/// Haar-distributed gate from a seeded complex Gaussian matrix (QR with
/// positive `R` diagonal via Gram–Schmidt). Deterministic per seed.
pub fn random_gate<T: Real>(seed: u64) -> Gate<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let candidates = std::iter::repeat_with(move || gaussian_vector::<T>(&mut rng, 4));
    let matrix = CMatrix::complete_orthonormal(&CMatrix::zeros(4, 0), candidates).expect("gaussian vectors span");
    Gate {
        matrix,
        family: GateFamily::Custom,
        params: vec![T::lit(seed as f64)],
    }
}

/// Seeded random 2×2 unitary (for local-rotation fixtures).
pub fn random_single_qubit<T: Real>(seed: u64) -> CMatrix<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0001);
    let candidates = std::iter::repeat_with(move || gaussian_vector::<T>(&mut rng, 2));
    CMatrix::complete_orthonormal(&CMatrix::zeros(2, 0), candidates).expect("gaussian vectors span")
}

fn gaussian_vector<T: Real>(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex<T>> {
    (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex::new(T::lit(re), T::lit(im))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn weyl_zero_is_identity() {
        assert!(weyl_gate(0.0f64, 0.0, 0.0).matrix().max_abs_diff(&CMatrix::identity(4)) < 1e-16);
    }

    #[test]
    fn weyl_entries_at_quarter_turns() {
        let e = WeylParams {
            alpha: FRAC_PI_2,
            beta: FRAC_PI_2,
            gamma: FRAC_PI_2,
        }
        .entries();
        assert!((e.x - Complex::from_polar(1.0, -FRAC_PI_4)).norm() < 1e-15);
        assert!((e.y - c::<f64>(0., -1.) * Complex::from_polar(1.0, FRAC_PI_4)).norm() < 1e-15);
        assert!(e.z.norm() < 1e-16);
        assert!(e.w.norm() < 1e-16);
    }

    #[test]
    fn controlled_rotation_cases() {
        assert!(controlled_rotation(0.0f64).matrix().max_abs_diff(&CMatrix::identity(4)) < 1e-16);
        let g = controlled_rotation(PI);
        let m = g.matrix();
        assert!((m[(2, 3)].re + 1.0).abs() < 1e-15 && (m[(3, 2)].re - 1.0).abs() < 1e-15);
        assert!(m[(2, 2)].norm() < 1e-15);
        let h = controlled_rotation(FRAC_PI_2);
        let s = FRAC_PI_4.sin();
        assert!((h.matrix()[(2, 2)].re - FRAC_PI_4.cos()).abs() < 1e-16);
        assert!((h.matrix()[(2, 3)].re + s).abs() < 1e-16);
        assert!((h.matrix()[(3, 2)].re - s).abs() < 1e-16);
    }

    #[test]
    fn squeezing_quarter_pi_entries() {
        let g = squeezing_gate(FRAC_PI_4);
        let m = g.matrix();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((m[(0, 0)] - c(r, 0.)).norm() < 1e-15);
        assert!((m[(0, 3)] - c(0., -r)).norm() < 1e-15);
        assert!((m[(1, 1)] - c(1., 0.)).norm() < 1e-15);
        assert!(m[(1, 2)].norm() < 1e-15);
        assert_eq!(g.family(), GateFamily::Squeezing);
    }

    #[test]
    fn macroscopic_family_rejects_bad_probability() {
        assert!(macroscopic_family(1.5f64, 0.1, 0.2, 0).is_err());
        assert!(macroscopic_family(-0.1f64, 0.1, 0.2, 0).is_err());
    }

    #[test]
    fn macroscopic_family_fixed_columns_orthonormal() {
        for &p in &[0.0, 0.25, 0.5, 1.0] {
            let cols = macroscopic_columns(p, 0.3f64, 1.1);
            assert!(cols.unitarity_deviation() < 1e-14);
            let g = macroscopic_family(p, 0.3f64, 1.1, 7).unwrap();
            assert!(g.matrix().unitarity_deviation() < 1e-12);
            assert_eq!(g.matrix().column(0), cols.column(0));
            assert_eq!(g.matrix().column(2), cols.column(1));
        }
    }

    #[test]
    fn unnormalized_columns_are_not_completable() {
        let cols = macroscopic_columns_unnormalized(0.5f64, 0.3, 1.1);
        assert!(cols.unitarity_deviation() > 0.1);
    }

    #[test]
    fn conjugation_checks_rotations() {
        let g = controlled_rotation(PI - 0.4);
        let bad = CMatrix::<f64>::from_real_rows(&[&[1., 1.], &[0., 1.]]).unwrap();
        assert!(matches!(conjugated_gate(&g, &bad, &bad), Err(Error::NotUnitary { .. })));
        let id = CMatrix::identity(2);
        let same = conjugated_gate(&g, &id, &id).unwrap();
        assert!(same.matrix().max_abs_diff(g.matrix()) < 1e-16);
        let r = random_single_qubit::<f64>(3);
        assert!(conjugated_gate(&g, &r, &r).unwrap().matrix().unitarity_deviation() < 1e-12);
    }

    #[test]
    fn random_gate_is_deterministic_and_unitary() {
        let a = random_gate::<f64>(42);
        let b = random_gate::<f64>(42);
        assert_eq!(a.matrix(), b.matrix());
        assert_ne!(a.matrix(), random_gate::<f64>(43).matrix());
        for seed in 0..50 {
            assert!(random_gate::<f64>(seed).matrix().unitarity_deviation() < 1e-12);
        }
    }

    #[test]
    fn from_matrix_reports_deviation() {
        let m = CMatrix::<f64>::identity(4).scale_real(1.1);
        match Gate::from_matrix(m, 1e-12) {
            Err(Error::NotUnitary { deviation }) => assert!((deviation - 0.21).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }
}
