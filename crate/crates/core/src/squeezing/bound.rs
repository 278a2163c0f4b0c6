//! Minimum transverse variance at fixed mean spin for ensembles of spin-`j`
//! blocks, in per-qubit `Σσ` units: `m = ⟨J_z⟩/j`, `v = (2/j)·Var(J_x)`.
//! With these axes the separable bound (`j = ½`) is the parabola `v = m²`.

use num_complex::Complex;

use crate::densemat::{eigh, CMatrix};
use crate::error::{Error, Result};
use crate::scalar::{cr, Real};

const SCAN_POINTS: usize = 2001;
const SCAN_MAX: f64 = 20.0;
const BISECTION_STEPS: usize = 200;
/// Shifts `c` of the `(J_x − c)²` branch that are tried.
const SHIFT_STEPS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurve<T> {
    pub j: T,
    /// `(m, F_j(m))`, ascending in `m`, lower convex envelope.
    pub samples: Vec<(T, T)>,
}

impl<T: Real> BoundCurve<T> {
    /// Linear interpolation in `|m|`; `None` outside the sampled range.
    pub fn eval(&self, m: T) -> Option<T> {
        let m = m.abs();
        let s = &self.samples;
        let first = s.first()?;
        let last = s.last()?;
        if m < first.0 || m > last.0 {
            return None;
        }
        let k = s.partition_point(|p| p.0 < m);
        if k == 0 {
            return Some(first.1);
        }
        let (a, b) = (s[k - 1], s[k.min(s.len() - 1)]);
        if b.0 == a.0 {
            return Some(b.1);
        }
        let t = (m - a.0) / (b.0 - a.0);
        Some(a.1 + t * (b.1 - a.1))
    }
}

struct Spin<T> {
    j: T,
    jx: CMatrix<T>,
    jz: CMatrix<T>,
}

impl<T: Real> Spin<T> {
    fn new(j: T) -> Self {
        let dim = (T::lit(2.0) * j).round().to_usize().expect("valid spin") + 1;
        // basis |j, j−k⟩, k = 0..dim
        let mz = |k: usize| j - T::lit(k as f64);
        let jz = CMatrix::from_fn(dim, dim, |a, b| if a == b { cr(mz(a)) } else { cr(T::zero()) });
        let ladder = |m: T| (j * (j + T::one()) - m * (m + T::one())).sqrt();
        // J+ |j,m⟩ = ladder(m) |j,m+1⟩
        let jx = CMatrix::from_fn(dim, dim, |a, b| {
            if a + 1 == b {
                cr(ladder(mz(b)) * T::lit(0.5))
            } else if b + 1 == a {
                cr(ladder(mz(a)) * T::lit(0.5))
            } else {
                cr(T::zero())
            }
        });
        Self { j, jx, jz }
    }

    /// Ground state of `(J_x − c)² − μ J_z`, or `None` when degenerate.
    fn ground(&self, c: T, mu: T) -> Result<Option<Vec<Complex<T>>>> {
        let dim = self.jx.rows();
        let shifted = &self.jx - &CMatrix::identity(dim).scale_real(c);
        let h = &(&shifted * &shifted) - &self.jz.scale_real(mu);
        let (w, v) = eigh(&h, T::lit(T::UNITARY_TOL))?;
        if (w[1] - w[0]).abs() < T::lit(1e3) * T::epsilon() * (T::one() + w[0].abs()) {
            return Ok(None);
        }
        Ok(Some(v.column(0)))
    }

    fn expect(&self, op: &CMatrix<T>, v: &[Complex<T>]) -> T {
        crate::densemat::inner(v, &op.apply(v)).re
    }

    /// `(m, v)` of a state in the normalized axes.
    fn point(&self, v: &[Complex<T>]) -> (T, T) {
        let jx = self.expect(&self.jx, v);
        let jx2 = self.expect(&(&self.jx * &self.jx), v);
        let jz = self.expect(&self.jz, v);
        (jz / self.j, T::lit(2.0) / self.j * (jx2 - jx * jx))
    }

    fn m_at(&self, c: T, mu: T) -> Result<Option<T>> {
        Ok(self.ground(c, mu)?.map(|v| self.point(&v).0))
    }

    /// Minimum variance on the branch with shift `c` at target `m`.
    fn branch_value(&self, c: T, target: T) -> Result<Option<T>> {
        let step = T::lit(SCAN_MAX / (SCAN_POINTS - 1) as f64);
        let mut lo: Option<(T, T)> = None;
        let mut hi: Option<T> = None;
        for k in 0..SCAN_POINTS {
            let mu = step * T::lit(k as f64);
            let Some(m) = self.m_at(c, mu)? else { continue };
            if m <= target {
                lo = Some((mu, m));
            } else {
                hi = Some(mu);
                break;
            }
        }
        let Some((mut a, _)) = lo else { return Ok(None) };
        let mut b = match hi {
            Some(b) => b,
            None => {
                let mut b = T::lit(SCAN_MAX);
                loop {
                    b *= T::lit(2.0);
                    if b > T::lit(1e12) {
                        return Ok(None);
                    }
                    match self.m_at(c, b)? {
                        Some(m) if m > target => break b,
                        _ => a = b,
                    }
                }
            }
        };
        for _ in 0..BISECTION_STEPS {
            let mid = (a + b) * T::lit(0.5);
            if mid <= a || mid >= b {
                break;
            }
            match self.m_at(c, mid)? {
                Some(m) if m <= target => a = mid,
                _ => b = mid,
            }
        }
        let Some(v) = self.ground(c, a)? else { return Ok(None) };
        let (m, var) = self.point(&v);
        if (m - target).abs() > T::lit(1e-9) {
            return Ok(None);
        }
        Ok(Some(var))
    }

    fn minimum(&self, target: T) -> Result<T> {
        if target >= T::one() - T::lit(1e-12) {
            // only the stretched state reaches m = 1
            return Ok(T::one());
        }
        let mut best: Option<T> = None;
        for k in 0..=SHIFT_STEPS {
            let c = self.j * T::lit(k as f64) / T::lit(SHIFT_STEPS as f64);
            if let Some(v) = self.branch_value(c, target)? {
                best = Some(best.map_or(v, |b: T| b.min(v)));
            }
        }
        best.ok_or(Error::NoConvergence {
            iterations: SCAN_POINTS,
        })
    }
}

fn lower_hull<T: Real>(points: &[(T, T)]) -> Vec<(T, T)> {
    let mut hull: Vec<(T, T)> = Vec::with_capacity(points.len());
    for &p in points {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= T::zero() {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

/// `F_j(m)` on `m_grid` for `j ∈ {½, 1}`.
pub fn sm_bound<T: Real>(j: T, m_grid: &[T]) -> Result<BoundCurve<T>> {
    let half = T::lit(0.5);
    if j != half && j != T::one() {
        return Err(Error::InvalidInput(format!("spin {j} not supported; use 1/2 or 1")));
    }
    if m_grid.iter().any(|&m| !(m >= T::zero() && m <= T::one())) {
        return Err(Error::InvalidInput("m grid must lie in [0, 1]".into()));
    }
    let mut grid = m_grid.to_vec();
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    grid.dedup();
    let spin = Spin::new(j);
    let raw = grid
        .iter()
        .map(|&m| Ok((m, spin.minimum(m)?)))
        .collect::<Result<Vec<_>>>()?;
    let hull = lower_hull(&raw);
    let curve = BoundCurve { j, samples: hull };
    let samples = grid
        .iter()
        .map(|&m| (m, curve.eval(m).expect("grid point inside hull")))
        .collect();
    Ok(BoundCurve { j, samples })
}

/// Uniform grid of `count` points on `[0, 1]`.
pub fn unit_grid<T: Real>(count: usize) -> Vec<T> {
    let count = count.max(2);
    (0..count).map(|k| T::lit(k as f64 / (count - 1) as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separable_bound_is_parabola() {
        let grid = unit_grid::<f64>(41);
        let b = sm_bound(0.5, &grid).unwrap();
        for (m, f) in &b.samples {
            assert!((f - m * m).abs() < 1e-8, "m = {m}: {f}");
        }
    }

    #[test]
    fn pairwise_bound_endpoints_and_shape() {
        let grid = unit_grid::<f64>(51);
        let b = sm_bound(1.0, &grid).unwrap();
        assert!(b.samples[0].1.abs() < 1e-10);
        assert!((b.samples.last().unwrap().1 - 1.0).abs() < 1e-10);
        for w in b.samples.windows(2) {
            assert!(w[1].1 >= w[0].1 - 1e-12);
        }
        // pairwise entanglement can beat the separable parabola
        for (m, f) in &b.samples {
            assert!(*f <= m * m + 1e-9);
        }
    }

    #[test]
    fn unsupported_spin_rejected() {
        assert!(sm_bound(1.5f64, &[0.5]).is_err());
        assert!(sm_bound(0.5f64, &[1.5]).is_err());
    }
}
