//! Expectation values, two-point functions and variances of additive
//! observables `Σ_m A_m` on the sequentially generated chain.
//!
//! With `X = |I⟩⟨b|`, every trace in the transfer-matrix formalism collapses
//! to a bilinear form: `tr(Y X) = ⟨b|Y|I⟩` and `tr(Y X_A) = ⟨b|Y|Â⟩`, where
//! `|Â⟩ = vec A`. Sites are numbered `1..=N`.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::densemat::{dot, CMatrix};
use crate::error::{Error, Result};
use crate::scalar::{cr, Real};
use crate::transfer::{vec_identity, LocalObservable, SpectralData, TransferSet};

/// Below this distance eigenvalues are treated as coincident in the
/// geometric sums.
pub const BRANCH_THRESHOLD: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VarianceMethod {
    /// One left-to-right and one right-to-left pass, `O(N)`.
    #[default]
    Sweep,
    /// Every pair `m < n` evaluated separately, `O(N²)`; reference path.
    Pairwise,
    /// Eigen-expansion with closed-form geometric sums, `O(1)` in `N`.
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceBreakdown<T> {
    pub n: usize,
    pub total: T,
    pub mean: T,
    /// Coefficient of `N²`, when the spectrum allows an asymptotic expansion.
    pub quadratic_coeff: Option<T>,
    /// Coefficient of `N`.
    pub linear_coeff: Option<T>,
    /// `total − q N² − ℓ N`.
    pub boundary_remainder: Option<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticVariance<T> {
    pub quadratic: T,
    /// `None` when an eigenvalue other than 1 sits on the unit circle and the
    /// linear part oscillates with `N`.
    pub linear: Option<T>,
}

fn check_len(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("chain length must be at least 2, got {n}")));
    }
    Ok(())
}

fn check_site(m: usize, n: usize) -> Result<()> {
    if m == 0 || m > n {
        return Err(Error::SiteOutOfRange(format!("site {m} not in 1..={n}")));
    }
    Ok(())
}

/// Drops the imaginary part after checking it is negligible relative to `scale`.
pub fn real_checked<T: Real>(z: Complex<T>, scale: T, context: &str) -> Result<T> {
    let tol = T::lit(T::IMAG_TOL) * scale.max(z.re.abs()).max(T::one());
    if !(z.im.abs() <= tol) {
        return Err(Error::ImaginaryResidue {
            residue: z.im.to_f64_lossy(),
            context: context.into(),
        });
    }
    Ok(z.re)
}

fn pow_left<T: Real>(row: &[Complex<T>], e: &CMatrix<T>, k: usize) -> Vec<Complex<T>> {
    (0..k).fold(row.to_vec(), |v, _| e.apply_left(&v))
}

/// `⟨A_m⟩`.
pub fn one_point<T: Real>(ts: &TransferSet<T>, a: &LocalObservable<T>, m: usize, n: usize) -> Result<T> {
    check_len(n)?;
    check_site(m, n)?;
    let row = pow_left(&ts.boundary_row(), &ts.e, m - 1);
    let z = if m < n {
        dot(&row, &ts.e_a(a).apply(&vec_identity()))
    } else {
        dot(&row, &a.vectorized())
    };
    real_checked(z, T::one(), "one-point function")
}

/// `⟨A_m A_n⟩` for `m < n`.
pub fn two_point<T: Real>(ts: &TransferSet<T>, a: &LocalObservable<T>, m: usize, n: usize, len: usize) -> Result<T> {
    check_len(len)?;
    check_site(m, len)?;
    check_site(n, len)?;
    if m >= n {
        return Err(Error::InvalidInput(format!(
            "two-point sites need m < n, got m = {m}, n = {n}"
        )));
    }
    let ea = ts.e_a(a);
    let row = pow_left(&ts.boundary_row(), &ts.e, m - 1);
    let row = pow_left(&ea.apply_left(&row), &ts.e, n - m - 1);
    let z = if n < len {
        dot(&row, &ea.apply(&vec_identity()))
    } else {
        dot(&row, &a.vectorized())
    };
    real_checked(z, T::one(), "two-point function")
}

/// `⟨Σ_m A_m⟩`.
pub fn collective_mean<T: Real>(ts: &TransferSet<T>, a: &LocalObservable<T>, n: usize) -> Result<T> {
    check_len(n)?;
    let ea_i = ts.e_a(a).apply(&vec_identity());
    let mut row = ts.boundary_row();
    let mut sum = Complex::zero();
    for _ in 1..n {
        sum += dot(&row, &ea_i);
        row = ts.e.apply_left(&row);
    }
    sum += dot(&row, &a.vectorized());
    real_checked(sum, T::lit(n as f64), "collective mean")
}

/// All single-site means `⟨A_1⟩, …, ⟨A_N⟩` in one pass.
pub fn site_means<T: Real>(ts: &TransferSet<T>, a: &LocalObservable<T>, n: usize) -> Result<Vec<T>> {
    check_len(n)?;
    let ea_i = ts.e_a(a).apply(&vec_identity());
    let mut row = ts.boundary_row();
    let mut out = Vec::with_capacity(n);
    for _ in 1..n {
        out.push(real_checked(dot(&row, &ea_i), T::one(), "one-point function")?);
        row = ts.e.apply_left(&row);
    }
    out.push(real_checked(
        dot(&row, &a.vectorized()),
        T::one(),
        "one-point function",
    )?);
    Ok(out)
}

/// Raw (complex) moments `Σ⟨A_m⟩`, `Σ⟨A_m²⟩`, `Σ_{m<n}⟨A_m A_n⟩`.
struct Moments<T> {
    first: Complex<T>,
    diagonal: Complex<T>,
    pairs: Complex<T>,
}

fn moments_sweep<T: Real>(ts: &TransferSet<T>, a: &LocalObservable<T>, n: usize) -> Moments<T> {
    let id = vec_identity::<T>();
    let ea = ts.e_a(a);
    let a2 = a.squared();
    let ea_i = ea.apply(&id);
    let ea2_i = ts.e_a(&a2).apply(&id);
    let a_hat = a.vectorized();

    // R_{N−1} = |Â⟩, R_m = E_A|I⟩ + E R_{m+1}
    let mut right = vec![a_hat.clone(); n];
    for m in (1..n.saturating_sub(1)).rev() {
        let er = ts.e.apply(&right[m + 1]);
        right[m] = ea_i.iter().zip(&er).map(|(x, y)| x + y).collect();
    }

    let mut row = ts.boundary_row();
    let (mut first, mut diagonal, mut pairs) = (Complex::zero(), Complex::zero(), Complex::zero());
    for r in &right[1..n] {
        first += dot(&row, &ea_i);
        diagonal += dot(&row, &ea2_i);
        pairs += dot(&ea.apply_left(&row), r);
        row = ts.e.apply_left(&row);
    }
    first += dot(&row, &a_hat);
    diagonal += dot(&row, &a2.vectorized());
    Moments { first, diagonal, pairs }
}

fn moments_pairwise<T: Real>(ts: &TransferSet<T>, a: &LocalObservable<T>, n: usize) -> Result<Moments<T>> {
    let a2 = a.squared();
    let mut first = Complex::zero();
    let mut diagonal = Complex::zero();
    let mut pairs = Complex::zero();
    for m in 1..=n {
        first += cr(one_point(ts, a, m, n)?);
        diagonal += cr(one_point(ts, &a2, m, n)?);
        for k in m + 1..=n {
            pairs += cr(two_point(ts, a, m, k, n)?);
        }
    }
    Ok(Moments { first, diagonal, pairs })
}

/// `Σ_{k=0}^{K−1} λ^k`.
fn geometric<T: Real>(lambda: Complex<T>, k: usize) -> Complex<T> {
    let one = Complex::<T>::one();
    if (one - lambda).norm() < T::lit(BRANCH_THRESHOLD) {
        return cr(T::lit(k as f64));
    }
    (one - lambda.powi(k as i32)) / (one - lambda)
}

/// `Σ_{m=1}^{K} λi^{m−1} λj^{K−m}`.
fn boundary_sum<T: Real>(li: Complex<T>, lj: Complex<T>, k: usize) -> Complex<T> {
    if k == 0 {
        return Complex::zero();
    }
    if (li - lj).norm() < T::lit(BRANCH_THRESHOLD) {
        let mid = (li + lj) * cr(T::lit(0.5));
        return cr(T::lit(k as f64)) * mid.powi(k as i32 - 1);
    }
    (li.powi(k as i32) - lj.powi(k as i32)) / (li - lj)
}

/// `f(λi, λj, N) = Σ_{n=2}^{N−1} Σ_{m=1}^{n−1} λi^{m−1} λj^{n−m−1}`.
///
/// Closed form away from coincidences; the limits `λi = λj` and `λ = 1` are
/// the differentiated geometric series.
pub fn geometric_sum_f<T: Real>(li: Complex<T>, lj: Complex<T>, n: usize) -> Complex<T> {
    if n < 3 {
        return Complex::zero();
    }
    let thr = T::lit(BRANCH_THRESHOLD);
    let one = Complex::<T>::one();
    let nf = T::lit(n as f64);
    let p = (n - 2) as i32;
    let near_one = |l: Complex<T>| (one - l).norm() < thr;
    let both_one = || cr((nf - T::one()) * (nf - T::lit(2.0)) * T::lit(0.5));
    // Σ_{K=1}^{N−2} (1 − λ^K)/(1 − λ)
    let one_and = |l: Complex<T>| {
        let d = one - l;
        cr(nf - T::lit(2.0)) / d - (l - l.powi(p + 1)) / (d * d)
    };

    match (near_one(li), near_one(lj)) {
        (true, true) => both_one(),
        (true, false) => one_and(lj),
        (false, true) => one_and(li),
        (false, false) => {
            if (li - lj).norm() < thr {
                let l = (li + lj) * cr(T::lit(0.5));
                let d = one - l;
                (one - cr(nf - T::one()) * l.powi(p) + cr(nf - T::lit(2.0)) * l.powi(p + 1)) / (d * d)
            } else {
                let s = |l: Complex<T>| l * (one - l.powi(p)) / (one - l);
                (s(li) - s(lj)) / (li - lj)
            }
        }
    }
}

fn moments_spectral<T: Real>(
    ts: &TransferSet<T>,
    a: &LocalObservable<T>,
    n: usize,
    sd: &SpectralData<T>,
) -> Result<Moments<T>> {
    let left = sd
        .left
        .as_ref()
        .ok_or_else(|| Error::Defective("spectral sums need a diagonalizable transfer matrix".into()))?;
    let id = vec_identity::<T>();
    let ea = ts.e_a(a);
    let a2 = a.squared();
    let ea_i = ea.apply(&id);
    let ea2_i = ts.e_a(&a2).apply(&id);
    let a_hat = a.vectorized();
    let a2_hat = a2.vectorized();
    let b = ts.boundary_row();

    let dim = sd.eigenvalues.len();
    let lambda: Vec<Complex<T>> = (0..dim)
        .map(|i| {
            if sd.is_unit(i) {
                Complex::one()
            } else {
                sd.eigenvalues[i]
            }
        })
        .collect();
    let r: Vec<Vec<Complex<T>>> = (0..dim).map(|i| sd.right.column(i)).collect();
    let l: Vec<Vec<Complex<T>>> = (0..dim).map(|i| left.row(i)).collect();
    let bw: Vec<Complex<T>> = r.iter().map(|ri| dot(&b, ri)).collect();

    let k = n - 1;
    let pw = |z: Complex<T>, e: usize| z.powi(e as i32);
    let mut first = Complex::zero();
    let mut diagonal = Complex::zero();
    let mut pairs = Complex::zero();
    for i in 0..dim {
        let g = geometric(lambda[i], k);
        first += bw[i] * (g * dot(&l[i], &ea_i) + pw(lambda[i], k) * dot(&l[i], &a_hat));
        diagonal += bw[i] * (g * dot(&l[i], &ea2_i) + pw(lambda[i], k) * dot(&l[i], &a2_hat));
        let row = ea.apply_left(&l[i]);
        for j in 0..dim {
            let mid = bw[i] * dot(&row, &r[j]);
            pairs += mid
                * (geometric_sum_f(lambda[i], lambda[j], n) * dot(&l[j], &ea_i)
                    + boundary_sum(lambda[i], lambda[j], k) * dot(&l[j], &a_hat));
        }
    }
    Ok(Moments { first, diagonal, pairs })
}

/// Exact variance of `Σ_m A_m` on an `N`-site chain, all boundary terms
/// included.
pub fn additive_variance_exact<T: Real>(
    ts: &TransferSet<T>,
    a: &LocalObservable<T>,
    n: usize,
    method: VarianceMethod,
) -> Result<VarianceBreakdown<T>> {
    check_len(n)?;
    let tol = T::lit(T::EIG_TOL);
    let moments = match method {
        VarianceMethod::Sweep => moments_sweep(ts, a, n),
        VarianceMethod::Pairwise => moments_pairwise(ts, a, n)?,
        VarianceMethod::Spectral => moments_spectral(ts, a, n, &ts.spectral(tol)?)?,
    };
    let nf = T::lit(n as f64);
    let mean = real_checked(moments.first, nf, "collective mean")?;
    let diagonal = real_checked(moments.diagonal, nf, "diagonal second moment")?;
    let pairs = real_checked(moments.pairs, nf * nf, "pair second moment")?;
    let total = diagonal + T::lit(2.0) * pairs - mean * mean;

    let asym = asymptotic_variance(ts, a, tol).ok();
    let quadratic_coeff = asym.map(|v| v.quadratic);
    let linear_coeff = asym.and_then(|v| v.linear);
    let boundary_remainder = match (quadratic_coeff, linear_coeff) {
        (Some(q), Some(l)) => Some(total - q * nf * nf - l * nf),
        _ => None,
    };
    Ok(VarianceBreakdown {
        n,
        total,
        mean,
        quadratic_coeff,
        linear_coeff,
        boundary_remainder,
    })
}

/// Bulk mean per site, `lim ⟨Σ A_m⟩ / N = ⟨b|P E_A|I⟩`.
pub fn asymptotic_mean<T: Real>(ts: &TransferSet<T>, a: &LocalObservable<T>, tol: T) -> Result<T> {
    let sd = ts.spectral(tol)?;
    let p = sd.unit_projector()?;
    let z = dot(&p.apply_left(&ts.boundary_row()), &ts.e_a(a).apply(&vec_identity()));
    real_checked(z, T::one(), "asymptotic mean")
}

/// Coefficients `q`, `ℓ` of `Var(Σ A_m) = q N² + ℓ N + O(1)`.
///
/// Uses the spectral projector `P` onto the unit eigenspace and
/// `Z = Σ_{λ≠1} |r⟩⟨l| / (1 − λ)`. For a non-degenerate unit eigenvalue and
/// a `±1`-valued observable this reduces to
/// `ℓ = 1 + 2 Σ_j (E_A)_{0j}(E_A)_{j0} / (1 − λ_j) − …`.
pub fn asymptotic_variance<T: Real>(
    ts: &TransferSet<T>,
    a: &LocalObservable<T>,
    tol: T,
) -> Result<AsymptoticVariance<T>> {
    let sd = ts.spectral(tol)?;
    if !sd.diagonalizable {
        return Err(Error::Defective(
            "transfer matrix has no eigenbasis; only exact finite-N values are available".into(),
        ));
    }
    asymptotic_from_spectrum(ts, a, &sd)
}

pub fn asymptotic_from_spectrum<T: Real>(
    ts: &TransferSet<T>,
    a: &LocalObservable<T>,
    sd: &SpectralData<T>,
) -> Result<AsymptoticVariance<T>> {
    let id = vec_identity::<T>();
    let b = ts.boundary_row();
    let p = sd.unit_projector()?;
    let ea = ts.e_a(a);
    let ea_i = ea.apply(&id);
    let a_hat = a.vectorized();
    let bp = p.apply_left(&b);

    let mu = dot(&bp, &ea_i);
    let p_ea_i = p.apply(&ea_i);
    let alpha = dot(&ea.apply_left(&bp), &p_ea_i);
    let quad = alpha - mu * mu;
    let scale = T::one() + ea.max_abs();
    let quadratic = real_checked(quad, scale, "quadratic variance coefficient")?;

    let linear = match sd.reduced_resolvent() {
        Ok(z) => {
            let delta = dot(&bp, &ts.e_a(&a.squared()).apply(&id));
            let bz = z.apply_left(&b);
            let t1 = dot(&ea.apply_left(&bz), &p_ea_i);
            let t2 = dot(&ea.apply_left(&bp), &z.apply(&ea_i));
            let beta_b = dot(&ea.apply_left(&bp), &p.apply(&a_hat));
            let nu = dot(&bz, &ea_i) + dot(&bp, &a_hat);
            let two = cr(T::lit(2.0));
            let lin = delta - alpha + two * t1 + two * t2 + two * beta_b - two * mu * nu - two * quad;
            let zscale = scale * (T::one() + z.max_abs());
            Some(real_checked(lin, zscale, "linear variance coefficient")?)
        }
        Err(Error::Undefined(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(AsymptoticVariance { quadratic, linear })
}

/// Converts a mean and variance of `Σσ` into those of `J = ½Σσ`.
pub fn to_half_spin<T: Real>(mean: T, variance: T) -> (T, T) {
    (mean * T::lit(0.5), variance * T::lit(0.25))
}
