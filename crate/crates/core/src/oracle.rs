//! Brute-force state-vector simulation of the sequential sweep.
//!
//! Site 1 is the most significant bit of the amplitude index, so site `s`
//! lives at bit `N − s`.

use num_complex::Complex;
use num_traits::Zero;

use crate::densemat::{inner, CMatrix};
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::scalar::Real;
use crate::transfer::{ChainSpec, LocalObservable};

pub const DEFAULT_CAP: usize = 16;

#[derive(Debug, Clone)]
pub struct StateVector<T> {
    n: usize,
    amps: Vec<Complex<T>>,
}

/// Bytes needed to hold `2^n` amplitudes.
pub fn memory_estimate<T>(n: usize) -> u128 {
    (1u128 << n.min(127)) * std::mem::size_of::<Complex<T>>() as u128
}

impl<T: Real> StateVector<T> {
    /// `|φ⟩ ⊗ |0⟩^{N−1}`.
    pub fn initial(chain: &ChainSpec<T>, cap: usize) -> Result<Self> {
        let n = chain.n;
        if n > cap {
            return Err(Error::ChainTooLong {
                n,
                cap,
                bytes: memory_estimate::<T>(n),
            });
        }
        let mut amps = vec![Complex::zero(); 1 << n];
        amps[0] = chain.c0;
        amps[1 << (n - 1)] = chain.c1;
        Ok(Self { n, amps })
    }

    pub fn sites(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    fn bit(&self, site: usize) -> usize {
        self.n - site
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site == 0 || site > self.n {
            return Err(Error::SiteOutOfRange(format!("site {site} not in 1..={}", self.n)));
        }
        Ok(())
    }

    /// Applies `gate` to sites `(s, s+1)`, with site `s` as the left factor.
    pub fn apply_pair(&mut self, gate: &Gate<T>, s: usize) -> Result<()> {
        self.check_site(s)?;
        self.check_site(s + 1)?;
        let u = gate.matrix();
        let hi = 1usize << self.bit(s);
        let lo = 1usize << self.bit(s + 1);
        for base in 0..self.amps.len() {
            if base & (hi | lo) != 0 {
                continue;
            }
            let idx = [base, base | lo, base | hi, base | hi | lo];
            let old = idx.map(|i| self.amps[i]);
            for (r, &dst) in idx.iter().enumerate() {
                self.amps[dst] = (0..4).fold(Complex::zero(), |acc, c| acc + u[(r, c)] * old[c]);
            }
        }
        Ok(())
    }

    /// `A` on site `m`, returned as a new amplitude vector.
    pub fn apply_local(&self, a: &LocalObservable<T>, m: usize) -> Result<Vec<Complex<T>>> {
        self.check_site(m)?;
        Ok(apply_local_raw(&self.amps, a.matrix(), 1 << self.bit(m)))
    }

    pub fn expect_local(&self, a: &LocalObservable<T>, m: usize) -> Result<T> {
        let phi = self.apply_local(a, m)?;
        real_part(inner(&self.amps, &phi), "oracle one-point value")
    }

    /// `⟨A_m A_n⟩` for `m ≠ n`.
    pub fn expect_pair(&self, a: &LocalObservable<T>, m: usize, n: usize) -> Result<T> {
        self.check_site(m)?;
        self.check_site(n)?;
        if m == n {
            return Err(Error::SiteOutOfRange("pair sites must differ".into()));
        }
        let first = apply_local_raw(&self.amps, a.matrix(), 1 << self.bit(n));
        let both = apply_local_raw(&first, a.matrix(), 1 << self.bit(m));
        real_part(inner(&self.amps, &both), "oracle two-point value")
    }

    fn collective(&self, a: &LocalObservable<T>, v: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut out = vec![Complex::zero(); v.len()];
        for m in 1..=self.n {
            let part = apply_local_raw(v, a.matrix(), 1 << self.bit(m));
            for (o, p) in out.iter_mut().zip(part) {
                *o += p;
            }
        }
        out
    }

    /// `⟨Σ_m A_m⟩`.
    pub fn collective_mean(&self, a: &LocalObservable<T>) -> Result<T> {
        let s = self.collective(a, &self.amps);
        real_part(inner(&self.amps, &s), "oracle collective mean")
    }

    /// `⟨(Σ A_m)²⟩ − ⟨Σ A_m⟩²`.
    pub fn collective_variance(&self, a: &LocalObservable<T>) -> Result<T> {
        let s = self.collective(a, &self.amps);
        let s2 = self.collective(a, &s);
        let mean = real_part(inner(&self.amps, &s), "oracle collective mean")?;
        let second = real_part(inner(&self.amps, &s2), "oracle collective second moment")?;
        Ok(second - mean * mean)
    }

    /// Reduced density matrix of site `m`.
    pub fn reduced_density(&self, m: usize) -> Result<CMatrix<T>> {
        self.check_site(m)?;
        let mask = 1usize << self.bit(m);
        let mut rho = CMatrix::zeros(2, 2);
        for base in 0..self.amps.len() {
            if base & mask != 0 {
                continue;
            }
            let v = [self.amps[base], self.amps[base | mask]];
            for i in 0..2 {
                for j in 0..2 {
                    rho[(i, j)] += v[i] * v[j].conj();
                }
            }
        }
        Ok(rho)
    }
}

fn apply_local_raw<T: Real>(v: &[Complex<T>], a: &CMatrix<T>, mask: usize) -> Vec<Complex<T>> {
    let mut out = vec![Complex::zero(); v.len()];
    for base in 0..v.len() {
        if base & mask != 0 {
            continue;
        }
        let (x0, x1) = (v[base], v[base | mask]);
        out[base] = a[(0, 0)] * x0 + a[(0, 1)] * x1;
        out[base | mask] = a[(1, 0)] * x0 + a[(1, 1)] * x1;
    }
    out
}

fn real_part<T: Real>(z: Complex<T>, context: &str) -> Result<T> {
    let tol = T::lit(T::IMAG_TOL) * z.re.abs().max(T::one());
    if z.im.abs() > tol {
        return Err(Error::ImaginaryResidue {
            residue: z.im.to_f64_lossy(),
            context: context.into(),
        });
    }
    Ok(z.re)
}

/// Applies the gate to pairs `(1,2), …, (k−1,k)`.
pub fn sweep_prefix<T: Real>(gate: &Gate<T>, chain: &ChainSpec<T>, k: usize, cap: usize) -> Result<StateVector<T>> {
    let mut psi = StateVector::initial(chain, cap)?;
    if k > chain.n {
        return Err(Error::SiteOutOfRange(format!(
            "prefix {k} exceeds chain length {}",
            chain.n
        )));
    }
    for s in 1..k {
        psi.apply_pair(gate, s)?;
    }
    Ok(psi)
}

/// `U_{N−1,N} ⋯ U_{12} |φ⟩|0⟩^{N−1}`.
pub fn sweep<T: Real>(gate: &Gate<T>, chain: &ChainSpec<T>) -> Result<StateVector<T>> {
    sweep_prefix(gate, chain, chain.n, DEFAULT_CAP)
}

pub fn sweep_with_cap<T: Real>(gate: &Gate<T>, chain: &ChainSpec<T>, cap: usize) -> Result<StateVector<T>> {
    sweep_prefix(gate, chain, chain.n, cap)
}
