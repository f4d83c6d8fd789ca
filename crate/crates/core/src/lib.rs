//! Coincidence-product Fock spaces on a finite lattice.
//!
//! * [`partitions`]: index sets, set partitions, configurations and the
//!   indicator functions of coincidence planes.
//! * [`space`]: weighted sectors `H^⊙N`, their component form and the
//!   truncated Fock space.
//! * [`fieldops`]: k-fold creation and annihilation operators, interaction
//!   operators and the model interaction Hamiltonian.
//! * [`freeham`]: the finite-difference pencil of the coupled singular
//!   Laplacian, spectra and unitary evolution.

pub mod error;
pub mod fieldops;
pub mod freeham;
pub mod partitions;
pub mod rng;
pub mod scalar;
pub mod space;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Cplx, Real};

pub type C64 = Cplx<f64>;
pub type C32 = Cplx<f32>;
pub type WeightedVectorF64 = space::WeightedVector<f64>;
pub type WeightedVectorF32 = space::WeightedVector<f32>;
pub type ComponentVectorF64 = space::ComponentVector<f64>;
pub type ComponentVectorF32 = space::ComponentVector<f32>;
pub type FockVectorF64 = space::FockVector<f64>;
pub type FockVectorF32 = space::FockVector<f32>;
pub type SmearingF64 = fieldops::Smearing<f64>;
pub type SmearingF32 = fieldops::Smearing<f32>;
pub type OperatorMatrixF64 = fieldops::OperatorMatrix<f64>;
pub type OperatorMatrixF32 = fieldops::OperatorMatrix<f32>;
pub type RadialPencilF64 = freeham::RadialPencil<f64>;
pub type RadialPencilF32 = freeham::RadialPencil<f32>;
