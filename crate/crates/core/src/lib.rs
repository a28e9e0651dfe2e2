//! Numerics for the decoherence of quantum discord and entanglement in a
//! two-qubit Heisenberg model with a Dzyaloshinskii–Moriya term along `z`,
//! coupled to independent thermal Markovian reservoirs.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function over small dense complex matrices:
//!
//! - [`qmat`]: dense complex matrices, Hermitian and general eigensolvers,
//!   density matrices, partial traces, von Neumann entropy, X-state entries.
//! - [`spinmodel`]: the Hamiltonian, its exact spectrum, the entangled ground
//!   state and Gibbs states.
//! - [`liouville`]: the column-stacked Lindblad superoperator, spectral time
//!   evolution and an independent Runge–Kutta integrator.
//! - [`dampchan`]: the generalized amplitude damping channel (the `J = 0`
//!   closed form).
//! - [`correlations`]: mutual information, classical correlation, discord
//!   (numeric and X-state closed form) and the X-state entanglement measure.
//!
//! Units: `ħ = k_B = 1`. Entropies are in bits.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![deny(missing_docs)]

extern crate alloc;

mod error;
pub use error::*;

pub mod correlations;
pub mod dampchan;
pub mod liouville;
pub mod qmat;
pub mod spinmodel;

pub use num_complex::Complex64 as C64;

pub use correlations::{CorrelationReport, MeasurementBasis};
pub use liouville::{BathParams, Superoperator};
pub use qmat::{CMatrix, DensityMatrix, Subsystem, XStateEntries};
pub use spinmodel::{ModelParams, SpectrumRecord};
