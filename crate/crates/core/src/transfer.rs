//! Kraus extraction and the bond-dimension-2 transfer operators.
//!
//! Vectorization convention: `vec(|i⟩⟨j|) = |i,j⟩` with composite index
//! `2i + j`, identical to the `kron` convention, so `|I⟩ = |00⟩ + |11⟩`.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::densemat::{eig_general, inner, pauli, vec_norm, CMatrix, EigenResult};
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::scalar::{cr, Real};

#[derive(Debug, Clone)]
pub struct KrausPair<T> {
    pub v0: CMatrix<T>,
    pub v1: CMatrix<T>,
}

impl<T: Real> KrausPair<T> {
    pub fn get(&self, i: usize) -> &CMatrix<T> {
        if i == 0 {
            &self.v0
        } else {
            &self.v1
        }
    }
}

/// Chain length and first-site amplitudes `|φ⟩ = c0|0⟩ + c1|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec<T> {
    pub n: usize,
    pub c0: Complex<T>,
    pub c1: Complex<T>,
}

impl<T: Real> ChainSpec<T> {
    pub fn new(n: usize, c0: Complex<T>, c1: Complex<T>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("chain needs at least 2 sites, got {n}")));
        }
        let norm = c0.norm_sqr() + c1.norm_sqr();
        if !((norm - T::one()).abs() <= T::lit(T::UNITARY_TOL)) {
            return Err(Error::InvalidInput(format!(
                "first-site amplitudes not normalized: |c0|²+|c1|² = {norm}"
            )));
        }
        Ok(Self { n, c0, c1 })
    }

    /// First site in `|0⟩`.
    pub fn ground(n: usize) -> Result<Self> {
        Self::new(n, Complex::one(), Complex::zero())
    }

    /// First site in `(|0⟩ + |1⟩)/√2`.
    pub fn plus(n: usize) -> Result<Self> {
        let h = cr(T::FRAC_1_SQRT_2());
        Self::new(n, h, h)
    }

    pub fn with_len(&self, n: usize) -> Result<Self> {
        Self::new(n, self.c0, self.c1)
    }

    pub fn amplitudes(&self) -> [Complex<T>; 2] {
        [self.c0, self.c1]
    }
}

/// Single-site operator `A`, optionally tagged with its Bloch vector.
#[derive(Debug, Clone)]
pub struct LocalObservable<T> {
    matrix: CMatrix<T>,
    bloch: Option<[T; 3]>,
}

impl<T: Real> LocalObservable<T> {
    pub fn from_matrix(matrix: CMatrix<T>) -> Result<Self> {
        if matrix.rows() != 2 || matrix.cols() != 2 {
            return Err(Error::DimensionMismatch("local observable must be 2x2".into()));
        }
        Ok(Self { matrix, bloch: None })
    }

    /// `n·σ` for a unit vector `n`.
    pub fn bloch(n: [T; 3]) -> Result<Self> {
        let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        if !((norm - T::one()).abs() <= T::lit(T::UNITARY_TOL).sqrt()) {
            return Err(Error::InvalidInput(format!(
                "Bloch vector must have unit norm, got {norm}"
            )));
        }
        Ok(Self {
            matrix: pauli::along(n),
            bloch: Some(n),
        })
    }

    pub fn sigma_x() -> Self {
        Self::bloch([T::one(), T::zero(), T::zero()]).expect("unit")
    }

    pub fn sigma_y() -> Self {
        Self::bloch([T::zero(), T::one(), T::zero()]).expect("unit")
    }

    pub fn sigma_z() -> Self {
        Self::bloch([T::zero(), T::zero(), T::one()]).expect("unit")
    }

    /// `cos θ σx + sin θ σy`.
    pub fn transverse(theta: T) -> Self {
        Self::bloch([theta.cos(), theta.sin(), T::zero()]).expect("unit")
    }

    pub fn identity() -> Self {
        Self {
            matrix: CMatrix::identity(2),
            bloch: None,
        }
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn bloch_vector(&self) -> Option<[T; 3]> {
        self.bloch
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.matrix.is_hermitian(tol)
    }

    pub fn squared(&self) -> Self {
        Self {
            matrix: &self.matrix * &self.matrix,
            bloch: None,
        }
    }

    /// `vec A = Σ A_ij |i,j⟩`.
    pub fn vectorized(&self) -> Vec<Complex<T>> {
        self.matrix.data().to_vec()
    }

    pub fn scaled(&self, s: T) -> Self {
        Self {
            matrix: self.matrix.scale_real(s),
            bloch: None,
        }
    }
}

/// `(V_i)_{jk} = U_{ik,j0}`.
pub fn extract_kraus<T: Real>(g: &Gate<T>) -> KrausPair<T> {
    let u = g.matrix();
    let v = |i: usize| CMatrix::from_fn(2, 2, |j, k| u[(2 * i + k, 2 * j)]);
    KrausPair { v0: v(0), v1: v(1) }
}

/// `‖V0*·V0ᵀ + V1*·V1ᵀ − I‖_max`.
pub fn check_isometry<T: Real>(k: &KrausPair<T>) -> T {
    let s = &(&k.v0.conj() * &k.v0.transpose()) + &(&k.v1.conj() * &k.v1.transpose());
    s.max_abs_diff(&CMatrix::identity(2))
}

/// `E = V0*⊗V0 + V1*⊗V1`.
pub fn transfer_e<T: Real>(k: &KrausPair<T>) -> CMatrix<T> {
    &k.v0.conj().kron(&k.v0) + &k.v1.conj().kron(&k.v1)
}

/// `E_A = Σ_ij ⟨i|A|j⟩ V_i*⊗V_j`.
pub fn dressed_e<T: Real>(k: &KrausPair<T>, a: &LocalObservable<T>) -> CMatrix<T> {
    let mut out = CMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            let aij = a.matrix[(i, j)];
            if aij.is_zero() {
                continue;
            }
            out = &out + &k.get(i).conj().kron(k.get(j)).scale(aij);
        }
    }
    out
}

/// `W_i = |i⟩⟨φ*|` with `⟨φ*| = Σ c_k ⟨k|` taken literally.
fn w_matrix<T: Real>(c: &ChainSpec<T>, i: usize) -> CMatrix<T> {
    let amps = c.amplitudes();
    CMatrix::from_fn(2, 2, |r, k| if r == i { amps[k] } else { Complex::zero() })
}

/// `X = Σ W_i*⊗W_i = |I⟩⟨φ*φ*|`.
pub fn boundary_x<T: Real>(c: &ChainSpec<T>) -> CMatrix<T> {
    dressed_x(c, &LocalObservable::identity())
}

/// `X_A = Σ_ij ⟨i|A|j⟩ W_i*⊗W_j`.
pub fn dressed_x<T: Real>(c: &ChainSpec<T>, a: &LocalObservable<T>) -> CMatrix<T> {
    let mut out = CMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            let aij = a.matrix[(i, j)];
            if aij.is_zero() {
                continue;
            }
            out = &out + &w_matrix(c, i).conj().kron(&w_matrix(c, j)).scale(aij);
        }
    }
    out
}

/// `|I⟩ = |00⟩ + |11⟩`.
pub fn vec_identity<T: Real>() -> Vec<Complex<T>> {
    vec![Complex::one(), Complex::zero(), Complex::zero(), Complex::one()]
}

/// Row vector `⟨b|` with `X = |I⟩⟨b|`; entries `c_k* c_l` at index `2k + l`.
pub fn boundary_row<T: Real>(c: &ChainSpec<T>) -> Vec<Complex<T>> {
    let a = c.amplitudes();
    (0..4).map(|idx| a[idx / 2].conj() * a[idx % 2]).collect()
}

/// Everything needed to evaluate correlators for one gate and boundary.
#[derive(Debug, Clone)]
pub struct TransferSet<T> {
    pub e: CMatrix<T>,
    pub x: CMatrix<T>,
    pub kraus: KrausPair<T>,
    pub chain: ChainSpec<T>,
}

impl<T: Real> TransferSet<T> {
    pub fn new(gate: &Gate<T>, chain: ChainSpec<T>) -> Self {
        let kraus = extract_kraus(gate);
        Self {
            e: transfer_e(&kraus),
            x: boundary_x(&chain),
            kraus,
            chain,
        }
    }

    pub fn e_a(&self, a: &LocalObservable<T>) -> CMatrix<T> {
        dressed_e(&self.kraus, a)
    }

    pub fn x_a(&self, a: &LocalObservable<T>) -> CMatrix<T> {
        dressed_x(&self.chain, a)
    }

    pub fn boundary_row(&self) -> Vec<Complex<T>> {
        boundary_row(&self.chain)
    }

    pub fn spectral(&self, tol: T) -> Result<SpectralData<T>> {
        spectral(&self.e, tol)
    }

    /// Largest violation among `E|I⟩ = |I⟩`, `EX = X`, `X|I⟩ = |I⟩`.
    pub fn invariant_deviation(&self) -> T {
        let id = vec_identity::<T>();
        let ei = self.e.apply(&id);
        let xi = self.x.apply(&id);
        let d1 = ei.iter().zip(&id).map(|(a, b)| (a - b).norm()).fold(T::zero(), T::max);
        let d2 = (&self.e * &self.x).max_abs_diff(&self.x);
        let d3 = xi.iter().zip(&id).map(|(a, b)| (a - b).norm()).fold(T::zero(), T::max);
        d1.max(d2).max(d3)
    }
}

/// Eigen-structure of a transfer matrix with the unit eigenspace singled out.
#[derive(Debug, Clone)]
pub struct SpectralData<T> {
    pub eigenvalues: Vec<Complex<T>>,
    /// Right eigenvectors as columns. When the unit eigenspace is
    /// non-trivial its first basis vector is `|I⟩`.
    pub right: CMatrix<T>,
    /// Rows biorthonormal to `right`; `None` when `E` is defective.
    pub left: Option<CMatrix<T>>,
    /// Indices into `eigenvalues` with `|λ − 1| < tol`.
    pub unit_indices: Vec<usize>,
    /// `4 − rank(E − I)`.
    pub unit_geometric: usize,
    pub diagonalizable: bool,
    /// Algebraic and geometric multiplicity of λ = 1 disagree, or the
    /// decomposition failed to find a full basis.
    pub jordan_warning: bool,
    pub residual: T,
    tol: T,
}

pub fn spectral<T: Real>(e: &CMatrix<T>, tol: T) -> Result<SpectralData<T>> {
    let EigenResult {
        eigenvalues,
        right_vectors,
        left_vectors,
        residual,
        diagonalizable,
    } = eig_general(e, tol)?;
    let one = Complex::<T>::one();
    let unit_indices: Vec<usize> = (0..eigenvalues.len())
        .filter(|&i| (eigenvalues[i] - one).norm() < tol)
        .collect();
    let unit_geometric = 4 - (e - &CMatrix::identity(4)).rank(tol);
    let jordan_warning = unit_indices.len() != unit_geometric || !diagonalizable;

    let (right, left) = if diagonalizable && !unit_indices.is_empty() {
        let right = align_unit_basis(&right_vectors, &unit_indices);
        let left = right.inverse().ok();
        (right, left)
    } else {
        (right_vectors, left_vectors)
    };
    let diagonalizable = left.is_some() && diagonalizable;
    Ok(SpectralData {
        eigenvalues,
        right,
        left,
        unit_indices,
        unit_geometric,
        diagonalizable,
        jordan_warning,
        residual,
        tol,
    })
}

/// Replaces the unit-eigenspace columns by a basis starting with `|I⟩`.
fn align_unit_basis<T: Real>(right: &CMatrix<T>, unit: &[usize]) -> CMatrix<T> {
    let id = vec_identity::<T>();
    let mut basis: Vec<Vec<Complex<T>>> = vec![id.clone()];
    let span: Vec<Vec<Complex<T>>> = unit.iter().map(|&i| right.column(i)).collect();
    // orthonormal copy of the span to pick complements of |I⟩
    let id_norm = vec_norm(&id);
    let mut ortho: Vec<Vec<Complex<T>>> = vec![id.iter().map(|z| z / cr(id_norm)).collect()];
    for v in &span {
        if basis.len() == unit.len() {
            break;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for o in &ortho {
                let p = inner(o, &w);
                for (wi, oi) in w.iter_mut().zip(o) {
                    *wi -= p * oi;
                }
            }
        }
        let nw = vec_norm(&w);
        if nw > T::lit(1e-6) * vec_norm(v) {
            let u: Vec<Complex<T>> = w.iter().map(|z| z / cr(nw)).collect();
            ortho.push(u.clone());
            basis.push(u);
        }
    }
    let mut out = right.clone();
    for (slot, v) in unit.iter().zip(&basis) {
        out.set_column(*slot, v);
    }
    out
}

impl<T: Real> SpectralData<T> {
    pub fn unit_dimension(&self) -> usize {
        self.unit_indices.len()
    }

    pub fn is_unit(&self, i: usize) -> bool {
        self.unit_indices.contains(&i)
    }

    /// Some eigenvalue other than 1 lies on the unit circle.
    pub fn has_peripheral_nonunit(&self) -> bool {
        self.eigenvalues
            .iter()
            .enumerate()
            .any(|(i, l)| !self.is_unit(i) && (l.norm() - T::one()).abs() < self.tol)
    }

    pub fn max_modulus(&self) -> T {
        self.eigenvalues.iter().map(|l| l.norm()).fold(T::zero(), T::max)
    }

    /// Largest modulus among eigenvalues other than the unit ones.
    pub fn subleading_modulus(&self) -> T {
        self.eigenvalues
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.is_unit(*i))
            .map(|(_, l)| l.norm())
            .fold(T::zero(), T::max)
    }

    fn require_left(&self) -> Result<&CMatrix<T>> {
        self.left
            .as_ref()
            .ok_or_else(|| Error::Defective("no complete eigenvector basis".into()))
    }

    /// `|r_i⟩⟨l_i|`.
    pub fn rank_one(&self, i: usize) -> Result<CMatrix<T>> {
        let left = self.require_left()?;
        let r = self.right.column(i);
        let l = left.row(i);
        Ok(CMatrix::from_fn(4, 4, |a, b| r[a] * l[b]))
    }

    /// Spectral projector onto the unit eigenspace.
    pub fn unit_projector(&self) -> Result<CMatrix<T>> {
        let mut p = CMatrix::zeros(4, 4);
        for &i in &self.unit_indices {
            p = &p + &self.rank_one(i)?;
        }
        Ok(p)
    }

    /// `Σ_{λ_j ≠ 1} |r_j⟩⟨l_j| / (1 − λ_j)`, the sum `Σ_k (E(1 − P))^k`.
    pub fn reduced_resolvent(&self) -> Result<CMatrix<T>> {
        if self.has_peripheral_nonunit() {
            return Err(Error::Undefined(
                "eigenvalue of unit modulus other than 1; series does not converge".into(),
            ));
        }
        let mut z = CMatrix::zeros(4, 4);
        for i in 0..self.eigenvalues.len() {
            if self.is_unit(i) {
                continue;
            }
            z = &z
                + &self
                    .rank_one(i)?
                    .scale((Complex::<T>::one() - self.eigenvalues[i]).inv());
        }
        Ok(z)
    }

    /// `Σ λ_i |r_i⟩⟨l_i|`.
    pub fn reconstruct(&self) -> Result<CMatrix<T>> {
        let left = self.require_left()?;
        let d = CMatrix::diag(&self.eigenvalues);
        Ok(&(&self.right * &d) * left)
    }
}

/// Checks that `rho` is a density matrix within `tol`.
pub fn validate_density<T: Real>(rho: &CMatrix<T>, tol: T) -> Result<()> {
    if rho.rows() != 2 || rho.cols() != 2 {
        return Err(Error::DimensionMismatch("density matrix must be 2x2".into()));
    }
    if !rho.is_hermitian(tol) {
        return Err(Error::InvalidInput("density matrix is not Hermitian".into()));
    }
    let tr = rho.trace();
    if (tr - Complex::one()).norm() > tol {
        return Err(Error::InvalidInput(format!("density matrix trace {tr} differs from 1")));
    }
    // 2x2 Hermitian with unit trace: PSD iff det ≥ 0
    let det = (rho[(0, 0)] * rho[(1, 1)] - rho[(0, 1)] * rho[(1, 0)]).re;
    if det < -tol {
        return Err(Error::InvalidInput("density matrix has a negative eigenvalue".into()));
    }
    Ok(())
}

/// One step of `ρ ↦ Σ V_iᵀ ρ V_i*`.
pub fn site_density_recursion<T: Real>(k: &KrausPair<T>, rho: &CMatrix<T>) -> Result<CMatrix<T>> {
    validate_density(rho, T::lit(T::UNITARY_TOL).sqrt())?;
    let step = |v: &CMatrix<T>| &(&v.transpose() * rho) * &v.conj();
    Ok(&step(&k.v0) + &step(&k.v1))
}

/// `|φ⟩⟨φ|` for the first-site amplitudes.
pub fn initial_density<T: Real>(c: &ChainSpec<T>) -> CMatrix<T> {
    let a = c.amplitudes();
    CMatrix::from_fn(2, 2, |i, j| a[i] * a[j].conj())
}
