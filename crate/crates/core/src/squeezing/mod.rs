//! Spin squeezing produced by the sequential two-axis-twisting gate acting on
//! `|0⟩^N`.
//!
//! Collective operators are `A_μ = Σ_m σ_μ^{(m)}` (no factor ½). The squeezing
//! parameter `ξ² = N Var(A_θ) / ⟨A_z⟩²` is unchanged by the rescaling to
//! `J = A/2`.

mod bound;

pub use bound::{sm_bound, unit_grid, BoundCurve};

use crate::correlators::{additive_variance_exact, asymptotic_variance, collective_mean, to_half_spin, VarianceMethod};
use crate::error::{Error, Result};
use crate::gates::squeezing_gate;
use crate::scalar::Real;
use crate::transfer::{ChainSpec, LocalObservable, TransferSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Exact,
    Asymptotic,
}

fn transfer_set<T: Real>(chi_t: T) -> TransferSet<T> {
    TransferSet::new(&squeezing_gate(chi_t), ChainSpec::ground(2).expect("two sites"))
}

fn eig_tol<T: Real>() -> T {
    T::lit(T::EIG_TOL)
}

/// `(1 − 3 sin²χt) / (1 + sin²χt)`.
pub fn mean_z_coeff_closed<T: Real>(chi_t: T) -> T {
    let s2 = chi_t.sin().powi(2);
    (T::one() - T::lit(3.0) * s2) / (T::one() + s2)
}

/// Linear variance coefficient of `Σ(cos θ σx + sin θ σy)`.
pub fn transverse_coeff_closed<T: Real>(chi_t: T, theta: T) -> T {
    let (s, c) = (chi_t.sin(), chi_t.cos());
    let k = T::lit(2.0) * c * c * s / (T::one() + s * s);
    let u = (T::lit(2.0) * theta).sin();
    T::one() + k * ((T::one() - u) / (T::one() - s) - (T::one() + u) / (T::one() + s))
}

/// `1 − 2 sin 2χt cos χt / ((1 + sin²χt)(1 + sin χt))`.
pub fn squeezed_coeff_closed<T: Real>(chi_t: T) -> T {
    let s = chi_t.sin();
    T::one() - T::lit(2.0) * (T::lit(2.0) * chi_t).sin() * chi_t.cos() / ((T::one() + s * s) * (T::one() + s))
}

/// `⟨A_z⟩`.
pub fn mean_z<T: Real>(chi_t: T, n: usize, mode: Mode) -> Result<T> {
    let ts = transfer_set(chi_t);
    let z = LocalObservable::sigma_z();
    match mode {
        Mode::Exact => collective_mean(&ts, &z, n),
        Mode::Asymptotic => Ok(crate::correlators::asymptotic_mean(&ts, &z, eig_tol())? * T::lit(n as f64)),
    }
}

/// `Var(Σ(cos θ σx + sin θ σy))`.
pub fn transverse_variance<T: Real>(chi_t: T, theta: T, n: usize, mode: Mode) -> Result<T> {
    let ts = transfer_set(chi_t);
    let a = LocalObservable::transverse(theta);
    match mode {
        Mode::Exact => Ok(additive_variance_exact(&ts, &a, n, VarianceMethod::Sweep)?.total),
        Mode::Asymptotic => {
            let asym = asymptotic_variance(&ts, &a, eig_tol())?;
            let lin = asym
                .linear
                .ok_or_else(|| Error::Undefined("linear variance coefficient oscillates".into()))?;
            let nf = T::lit(n as f64);
            Ok(asym.quadratic * nf * nf + lin * nf)
        }
    }
}

/// Linear variance coefficient from the transfer matrix.
pub fn transverse_coeff<T: Real>(chi_t: T, theta: T) -> Result<T> {
    let ts = transfer_set(chi_t);
    asymptotic_variance(&ts, &LocalObservable::transverse(theta), eig_tol())?
        .linear
        .ok_or_else(|| Error::Undefined("linear variance coefficient oscillates".into()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaOptimum<T> {
    pub theta: T,
    pub value: T,
    /// The landscape is flat to within `1e−9`; any angle is optimal.
    pub degenerate: bool,
}

const THETA_GRID: usize = 64;

/// Minimizes the asymptotic transverse coefficient over `θ ∈ [0, π)`: grid
/// scan, then golden-section refinement inside the best bracket.
pub fn optimal_theta<T: Real>(chi_t: T) -> Result<ThetaOptimum<T>> {
    let f = |th: T| transverse_coeff(chi_t, th);
    let h = T::PI() / T::lit(THETA_GRID as f64);
    let values = (0..THETA_GRID)
        .map(|k| f(h * T::lit(k as f64)))
        .collect::<Result<Vec<T>>>()?;
    let (lo, hi) = values
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(a, b), &v| (a.min(v), b.max(v)));
    let k_best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite coefficients"))
        .map(|(k, _)| k)
        .expect("non-empty grid");
    if hi - lo < T::lit(1e-9) {
        return Ok(ThetaOptimum {
            theta: T::zero(),
            value: values[0],
            degenerate: true,
        });
    }

    let centre = h * T::lit(k_best as f64);
    let (mut a, mut b) = (centre - h, centre + h);
    let ratio = (T::lit(5.0).sqrt() - T::one()) * T::lit(0.5);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while b - a > T::lit(1e-10) {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2)?;
        }
    }
    let theta = wrap_pi((a + b) * T::lit(0.5));
    Ok(ThetaOptimum {
        theta,
        value: f(theta)?,
        degenerate: false,
    })
}

fn wrap_pi<T: Real>(x: T) -> T {
    let r = x % T::PI();
    if r < T::zero() {
        r + T::PI()
    } else {
        r
    }
}

/// `N · Var / mean²`, identical for `Σσ` and `½Σσ` inputs.
pub fn xi_squared_from<T: Real>(n: usize, mean: T, variance: T) -> Result<T> {
    let nf = T::lit(n as f64);
    if !(mean.abs() >= T::lit(1e-9) * nf) {
        return Err(Error::Undefined(format!(
            "⟨J_z⟩ = {mean} too small for a squeezing parameter"
        )));
    }
    Ok(nf * variance / (mean * mean))
}

/// Squeezing parameter with the transverse direction at its optimum.
pub fn xi_squared<T: Real>(chi_t: T, n: usize, mode: Mode) -> Result<T> {
    let opt = optimal_theta(chi_t)?;
    let mean = mean_z(chi_t, n, mode)?;
    let var = transverse_variance(chi_t, opt.theta, n, mode)?;
    let xi = xi_squared_from(n, mean, var)?;
    let (hm, hv) = to_half_spin(mean, var);
    let xi_half = xi_squared_from(n, hm, hv)?;
    if (xi - xi_half).abs() > T::lit(1e3) * T::epsilon() * xi.abs().max(T::one()) {
        return Err(Error::Inconsistent(
            "squeezing parameter depends on spin normalization".into(),
        ));
    }
    Ok(xi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeReport<T> {
    pub chi_t: T,
    pub mean_z_coeff: T,
    pub var_coeff: T,
    pub theta_star: T,
    pub xi2: T,
    pub below_separable: bool,
    pub below_pairwise: bool,
}

/// Asymptotic squeezing summary at one `χt`, with `ξ²` evaluated exactly at `n`.
pub fn squeeze_report<T: Real>(
    chi_t: T,
    n: usize,
    separable: &BoundCurve<T>,
    pairwise: &BoundCurve<T>,
) -> Result<SqueezeReport<T>> {
    let p = fig4_point(chi_t, separable, pairwise)?;
    Ok(SqueezeReport {
        chi_t,
        mean_z_coeff: p.m,
        var_coeff: p.v,
        theta_star: p.theta,
        xi2: xi_squared(chi_t, n, Mode::Exact)?,
        below_separable: p.below_separable,
        below_pairwise: p.below_pairwise,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig4Point<T> {
    pub chi_t: T,
    pub theta: T,
    /// `⟨A_z⟩/N` for large `N`.
    pub m: T,
    /// `Var(A_θ*)/N` for large `N`.
    pub v: T,
    pub f_half: Option<T>,
    pub f_one: Option<T>,
    pub below_separable: bool,
    pub below_pairwise: bool,
}

fn fig4_point<T: Real>(chi_t: T, separable: &BoundCurve<T>, pairwise: &BoundCurve<T>) -> Result<Fig4Point<T>> {
    let ts = transfer_set(chi_t);
    let m = crate::correlators::asymptotic_mean(&ts, &LocalObservable::sigma_z(), eig_tol())?;
    let opt = optimal_theta(chi_t)?;
    let v = opt.value;
    let f_half = separable.eval(m);
    let f_one = pairwise.eval(m);
    let margin = T::lit(1e-9);
    Ok(Fig4Point {
        chi_t,
        theta: opt.theta,
        m,
        v,
        f_half,
        f_one,
        below_separable: f_half.is_some_and(|f| v < f - margin),
        below_pairwise: f_one.is_some_and(|f| v < f - margin),
    })
}

/// Large-`N` `(m, v)` trajectory with bound comparisons.
pub fn fig4_curve<T: Real>(
    chi_grid: &[T],
    separable: &BoundCurve<T>,
    pairwise: &BoundCurve<T>,
) -> Result<Vec<Fig4Point<T>>> {
    chi_grid
        .iter()
        .map(|&t| {
            if !(t > T::zero() && t < T::FRAC_PI_2()) {
                return Err(Error::InvalidInput(format!("χt = {t} outside (0, π/2)")));
            }
            fig4_point(t, separable, pairwise)
        })
        .collect()
}
