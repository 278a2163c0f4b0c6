//! Effective size `N_eff` of the sequentially generated state and the
//! structural criterion for a degenerate unit eigenvalue.
//!
//! `N_eff = max_n Var(Σ n·σ_m) / N`. Only its coefficient of `N` is reported
//! here; it is non-zero exactly when the unit eigenvalue of `E` is
//! degenerate, which in turn happens exactly when the two Kraus matrices share
//! an eigenvector `|v⟩` with `|μ₀|² + |μ₁|² = 1`.

use num_complex::Complex;

use crate::correlators::{additive_variance_exact, real_checked, VarianceMethod};
use crate::densemat::{dot, eig_general, inner, vec_norm, CMatrix};
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::scalar::{cr, Real};
use crate::transfer::{boundary_row, vec_identity, ChainSpec, KrausPair, LocalObservable, SpectralData, TransferSet};

const GRID_POINTS: usize = 512;
const REFINE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct MacroReport<T> {
    pub unit_dimension: usize,
    pub neff_coeff: T,
    pub best_direction: [T; 3],
    /// Common eigenvector of the Kraus pair, when one exists.
    pub witness: Option<[Complex<T>; 2]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification<T> {
    pub is_macroscopic: bool,
    pub witness: Option<[Complex<T>; 2]>,
    /// Eigenvalues `(μ₀, μ₁)` of the witness under `V0`, `V1`.
    pub witness_eigenvalues: Option<(Complex<T>, Complex<T>)>,
    /// `‖[V0, V1]‖_max`; vanishes whenever a witness exists.
    pub commutator: T,
    pub unit_dimension: usize,
}

/// Precomputed pieces for evaluating `N_eff` along many directions.
struct NeffModel<T> {
    /// Dressed transfer matrices for σx, σy, σz.
    e_sigma: [CMatrix<T>; 3],
    row: Vec<Complex<T>>,
    sd: SpectralData<T>,
    projector: Option<CMatrix<T>>,
}

impl<T: Real> NeffModel<T> {
    fn new(gate: &Gate<T>, chain: &ChainSpec<T>, tol: T) -> Result<Self> {
        let ts = TransferSet::new(gate, *chain);
        let sd = ts.spectral(tol)?;
        if sd.unit_dimension() > 1 && sd.jordan_warning {
            return Err(Error::Defective(format!(
                "unit eigenvalue has algebraic multiplicity {} but geometric multiplicity {}",
                sd.unit_dimension(),
                sd.unit_geometric
            )));
        }
        let projector = if sd.unit_dimension() > 2 {
            Some(sd.unit_projector()?)
        } else {
            None
        };
        Ok(Self {
            e_sigma: [
                ts.e_a(&LocalObservable::sigma_x()),
                ts.e_a(&LocalObservable::sigma_y()),
                ts.e_a(&LocalObservable::sigma_z()),
            ],
            row: boundary_row(chain),
            sd,
            projector,
        })
    }

    fn e_a(&self, n: [T; 3]) -> CMatrix<T> {
        let [x, y, z] = &self.e_sigma;
        &(&x.scale_real(n[0]) + &y.scale_real(n[1])) + &z.scale_real(n[2])
    }

    fn eval(&self, n: [T; 3]) -> Result<T> {
        match self.sd.unit_dimension() {
            0 | 1 => Ok(T::zero()),
            2 => self.eval_pair(n),
            _ => self.eval_projector(n),
        }
    }

    /// Two-dimensional unit space in the basis `|0⟩ = |I⟩`, `|~0⟩`.
    fn eval_pair(&self, n: [T; 3]) -> Result<T> {
        let left = self
            .sd
            .left
            .as_ref()
            .ok_or_else(|| Error::Defective("no left eigenvectors".into()))?;
        let (i0, i1) = (self.sd.unit_indices[0], self.sd.unit_indices[1]);
        let ea = self.e_a(n);
        let r0 = self.sd.right.column(i0);
        let r1 = self.sd.right.column(i1);
        let (l0, l1) = (left.row(i0), left.row(i1));
        let a = |l: &[Complex<T>], r: &[Complex<T>]| dot(&ea.apply_left(l), r);
        let (a00, a01, a10, a11) = (a(&l0, &r0), a(&l0, &r1), a(&l1, &r0), a(&l1, &r1));
        // X|~0⟩ ∝ |I⟩ with weight ⟨b|~0⟩
        let beta = dot(&self.row, &r1);
        let q = a01 * a10 + beta * a10 * (a11 - a00 - beta * a10);
        real_checked(q, T::one(), "effective size coefficient")
    }

    fn eval_projector(&self, n: [T; 3]) -> Result<T> {
        let p = self.projector.as_ref().expect("projector built for dimension > 2");
        let ea = self.e_a(n);
        let bp = p.apply_left(&self.row);
        let ea_i = ea.apply(&vec_identity());
        let mu = dot(&bp, &ea_i);
        let alpha = dot(&ea.apply_left(&bp), &p.apply(&ea_i));
        real_checked(alpha - mu * mu, T::one(), "effective size coefficient")
    }
}

fn unit_vector<T: Real>(n: [T; 3]) -> Result<[T; 3]> {
    let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    if !((norm - T::one()).abs() <= T::lit(T::UNITARY_TOL).sqrt()) {
        return Err(Error::InvalidInput(format!(
            "direction must have unit norm, got {norm}"
        )));
    }
    Ok(n)
}

/// Coefficient of `N` in `Var(Σ n·σ_m) / N`.
pub fn neff<T: Real>(gate: &Gate<T>, chain: &ChainSpec<T>, n: [T; 3]) -> Result<T> {
    neff_with_tol(gate, chain, n, T::lit(T::EIG_TOL))
}

pub fn neff_with_tol<T: Real>(gate: &Gate<T>, chain: &ChainSpec<T>, n: [T; 3], tol: T) -> Result<T> {
    let n = unit_vector(n)?;
    NeffModel::new(gate, chain, tol)?.eval(n)
}

fn spherical<T: Real>(theta: T, phi: T) -> [T; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// Points of a Fibonacci lattice on the unit sphere, as polar angles.
pub fn fibonacci_sphere<T: Real>(count: usize) -> Vec<(T, T)> {
    let golden = T::PI() * (T::lit(3.0) - T::lit(5.0).sqrt());
    (0..count)
        .map(|k| {
            let z = T::one() - T::lit(2.0) * (T::lit(k as f64) + T::lit(0.5)) / T::lit(count as f64);
            (z.acos(), golden * T::lit(k as f64))
        })
        .collect()
}

/// Maximizes `N_eff` over Bloch directions: Fibonacci-lattice seeding
/// followed by coordinate descent on the polar angles.
pub fn neff_optimize<T: Real>(gate: &Gate<T>, chain: &ChainSpec<T>) -> Result<MacroReport<T>> {
    neff_optimize_with_tol(gate, chain, T::lit(T::EIG_TOL))
}

pub fn neff_optimize_with_tol<T: Real>(gate: &Gate<T>, chain: &ChainSpec<T>, tol: T) -> Result<MacroReport<T>> {
    let model = NeffModel::new(gate, chain, tol)?;
    let f = |th: T, ph: T| model.eval(spherical(th, ph));

    let mut best = (T::zero(), T::zero(), f(T::zero(), T::zero())?);
    for (th, ph) in fibonacci_sphere::<T>(GRID_POINTS) {
        let v = f(th, ph)?;
        if v > best.2 {
            best = (th, ph, v);
        }
    }
    let (mut th, mut ph, mut val) = best;
    let mut step = T::lit(0.2);
    while step > T::lit(REFINE_TOL) {
        let mut moved = false;
        for (dth, dph) in [
            (step, T::zero()),
            (-step, T::zero()),
            (T::zero(), step),
            (T::zero(), -step),
        ] {
            let v = f(th + dth, ph + dph)?;
            if v > val {
                th += dth;
                ph += dph;
                val = v;
                moved = true;
            }
        }
        if !moved {
            step *= T::lit(0.5);
        }
    }

    let witness = find_witness(
        &crate::transfer::extract_kraus(gate),
        tol.max(T::lit(T::UNITARY_TOL).sqrt()),
    )
    .map(|(v, _)| v);
    Ok(MacroReport {
        unit_dimension: model.sd.unit_dimension(),
        neff_coeff: val,
        best_direction: spherical(th, ph),
        witness,
    })
}

fn eigvecs_2x2<T: Real>(m: &CMatrix<T>, tol: T) -> Vec<Vec<Complex<T>>> {
    match eig_general(m, tol) {
        Ok(r) => (0..r.right_vectors.cols()).map(|j| r.right_vectors.column(j)).collect(),
        Err(_) => Vec::new(),
    }
}

/// Common eigenvector and its eigenvalues `(μ₀, μ₁)`.
pub type Witness<T> = ([Complex<T>; 2], (Complex<T>, Complex<T>));

/// Searches for `|v⟩` with `V0|v⟩ = μ₀|v⟩`, `V1|v⟩ = μ₁|v⟩`,
/// `|μ₀|² + |μ₁|² = 1`.
pub fn find_witness<T: Real>(k: &KrausPair<T>, tol: T) -> Option<Witness<T>> {
    let mut candidates = eigvecs_2x2(&k.v0, tol);
    candidates.extend(eigvecs_2x2(&k.v1, tol));
    candidates.push(vec![
        Complex::new(T::one(), T::zero()),
        Complex::new(T::zero(), T::zero()),
    ]);
    for v in candidates {
        let nv = vec_norm(&v);
        if nv == T::zero() {
            continue;
        }
        let v: Vec<Complex<T>> = v.iter().map(|z| z / cr(nv)).collect();
        let eigen = |m: &CMatrix<T>| -> Option<Complex<T>> {
            let mv = m.apply(&v);
            let mu = inner(&v, &mv);
            let res = vec_norm(&mv.iter().zip(&v).map(|(a, b)| a - b * mu).collect::<Vec<_>>());
            (res <= tol).then_some(mu)
        };
        if let (Some(m0), Some(m1)) = (eigen(&k.v0), eigen(&k.v1)) {
            if (m0.norm_sqr() + m1.norm_sqr() - T::one()).abs() <= tol {
                return Some(([v[0], v[1]], (m0, m1)));
            }
        }
    }
    None
}

/// Structural test for macroscopicity, cross-checked against the spectral
/// degeneracy of the unit eigenvalue.
pub fn classify_macroscopic<T: Real>(gate: &Gate<T>, tol: T) -> Result<Classification<T>> {
    let k = crate::transfer::extract_kraus(gate);
    let found = find_witness(&k, tol);
    let commutator = (&(&k.v0 * &k.v1) - &(&k.v1 * &k.v0)).max_abs();
    let ts = TransferSet::new(gate, ChainSpec::ground(2)?);
    let sd = ts.spectral(T::lit(T::EIG_TOL).min(tol))?;
    let structural = found.is_some();
    let spectral = sd.unit_dimension() >= 2;
    if structural != spectral {
        return Err(Error::Inconsistent(format!(
            "common-eigenvector test says {structural} but unit eigenspace has dimension {} (commutator {:.3e})",
            sd.unit_dimension(),
            commutator.to_f64_lossy()
        )));
    }
    Ok(Classification {
        is_macroscopic: structural,
        witness: found.map(|f| f.0),
        witness_eigenvalues: found.map(|f| f.1),
        commutator,
        unit_dimension: sd.unit_dimension(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow<T> {
    pub n: usize,
    pub variance: T,
    /// `Δ ln Var / Δ ln N` against the previous row.
    pub slope: Option<T>,
}

/// Exact variances of `Σ A_m` over a list of chain lengths.
pub fn variance_sweep<T: Real>(
    gate: &Gate<T>,
    chain: &ChainSpec<T>,
    a: &LocalObservable<T>,
    lengths: &[usize],
) -> Result<Vec<SweepRow<T>>> {
    if lengths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("chain lengths must be strictly ascending".into()));
    }
    let ts = TransferSet::new(gate, *chain);
    let mut rows: Vec<SweepRow<T>> = Vec::with_capacity(lengths.len());
    for &n in lengths {
        let variance = additive_variance_exact(&ts, a, n, VarianceMethod::Sweep)?.total;
        let slope = rows.last().and_then(|prev| {
            (prev.variance > T::zero() && variance > T::zero())
                .then(|| (variance / prev.variance).ln() / (T::lit(n as f64) / T::lit(prev.n as f64)).ln())
        });
        rows.push(SweepRow { n, variance, slope });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{controlled_rotation, macroscopic_family, random_gate, weyl_gate};
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn weyl_neff_along_y_and_x() {
        let ch = ChainSpec::ground(4).unwrap();
        for a in [0.2f64, 0.7, 1.3] {
            let y = neff(&weyl_gate(a, FRAC_PI_2, FRAC_PI_2), &ch, [0.0, 1.0, 0.0]).unwrap();
            assert!((y - a.cos().powi(2)).abs() < 1e-10);
            let x = neff(&weyl_gate(FRAC_PI_2, a, FRAC_PI_2), &ch, [1.0, 0.0, 0.0]).unwrap();
            assert!((x - a.cos().powi(2)).abs() < 1e-10);
        }
    }

    #[test]
    fn identity_has_no_effective_size() {
        let ch = ChainSpec::plus(4).unwrap();
        assert_eq!(neff(&Gate::<f64>::identity(), &ch, [0.0, 0.0, 1.0]).unwrap(), 0.0);
        let r = neff_optimize(&Gate::<f64>::identity(), &ch).unwrap();
        assert_eq!(r.unit_dimension, 1);
        assert_eq!(r.neff_coeff, 0.0);
    }

    #[test]
    fn ghz_optimum_is_z() {
        let r = neff_optimize(&controlled_rotation(PI), &ChainSpec::plus(4).unwrap()).unwrap();
        assert!((r.neff_coeff - 1.0).abs() < 1e-10);
        assert!(r.best_direction[2].abs() > 1.0 - 1e-8);
    }

    #[test]
    fn optimizer_finds_y_for_weyl() {
        let r = neff_optimize(&weyl_gate(0.7f64, FRAC_PI_2, FRAC_PI_2), &ChainSpec::ground(4).unwrap()).unwrap();
        assert!((r.neff_coeff - 0.7f64.cos().powi(2)).abs() < 1e-10);
        assert!(r.best_direction[1].abs() > 1.0 - 1e-8);
        let w = r.witness.unwrap();
        // |±x⟩ up to phase
        assert!((w[0].norm() - w[1].norm()).abs() < 1e-9);
    }

    #[test]
    fn classification_examples() {
        let c = classify_macroscopic(&macroscopic_family(0.5f64, 0.3, 1.1, 1).unwrap(), 1e-8).unwrap();
        assert!(c.is_macroscopic && c.commutator < 1e-12);
        let w = c.witness.unwrap();
        let overlap = (w[0] + w[1]).norm() / 2f64.sqrt();
        let overlap_minus = (w[0] - w[1]).norm() / 2f64.sqrt();
        assert!((overlap.max(overlap_minus) - 1.0).abs() < 1e-9);
        assert!(
            classify_macroscopic(&weyl_gate(0.7f64, FRAC_PI_2, FRAC_PI_2), 1e-8)
                .unwrap()
                .is_macroscopic
        );
        for seed in 0..10 {
            assert!(
                !classify_macroscopic(&random_gate::<f64>(seed), 1e-8)
                    .unwrap()
                    .is_macroscopic
            );
        }
    }

    #[test]
    fn ghz_sweep_is_quadratic() {
        let rows = variance_sweep(
            &controlled_rotation(PI),
            &ChainSpec::plus(2).unwrap(),
            &LocalObservable::sigma_z(),
            &[2, 4, 8, 16],
        )
        .unwrap();
        for r in &rows {
            assert!((r.variance - (r.n * r.n) as f64).abs() < 1e-9);
        }
        assert!(rows[0].slope.is_none());
        assert!((rows[3].slope.unwrap() - 2.0).abs() < 1e-12);
        assert!(variance_sweep(
            &controlled_rotation(PI),
            &ChainSpec::plus(2).unwrap(),
            &LocalObservable::sigma_z(),
            &[4, 4]
        )
        .is_err());
    }
}
