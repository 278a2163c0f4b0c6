//! Transfer-matrix analysis of qubit chains prepared by a single sweep of a
//! two-qubit gate.
//!
//! The state produced by applying a gate `U` to sites `(1,2), (2,3), …,
//! (N−1,N)` of `|φ⟩⊗|0⟩^{N−1}` is a matrix product state of bond dimension 2.
//! Everything here works from the 4×4 transfer matrix of that state:
//! correlators, variances of additive observables, effective size, spin
//! squeezing, plus a brute-force state-vector simulator used as ground truth.
//!
//! All numerics are generic over [`scalar::Real`] (`f64` and `f32`); the
//! aliases below fix the double-precision flavour used by the CLI.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod correlators;
pub mod densemat;
pub mod error;
pub mod gates;
pub mod macroscopicity;
pub mod oracle;
pub mod scalar;
pub mod squeezing;
pub mod transfer;

pub mod cli;

pub use error::{Error, Result};
pub use scalar::Real;

pub type CMatrix64 = densemat::CMatrix<f64>;
pub type Gate64 = gates::Gate<f64>;
pub type KrausPair64 = transfer::KrausPair<f64>;
pub type ChainSpec64 = transfer::ChainSpec<f64>;
pub type TransferSet64 = transfer::TransferSet<f64>;
pub type LocalObservable64 = transfer::LocalObservable<f64>;
pub type SpectralData64 = transfer::SpectralData<f64>;
pub type StateVector64 = oracle::StateVector<f64>;

pub type CMatrix32 = densemat::CMatrix<f32>;
pub type Gate32 = gates::Gate<f32>;
pub type TransferSet32 = transfer::TransferSet<f32>;
