//! Spectral analysis of the Jaynes-Cummings family of light-matter models.
//!
//! The crate builds the Jaynes-Cummings (JC), anti-Jaynes-Cummings (aJC),
//! anisotropic Rabi (AR) and factorizable anisotropic Rabi (FAR)
//! Hamiltonians on a truncated Fock space, evaluates their closed-form
//! spectra, eigenstates, level crossings and Wigner functions, and checks
//! every closed form against dense numerical diagonalization.
//!
//! Units: `hbar = 1`. Basis ordering is fixed by [`hilbert::HilbertConfig::index`].
//!
//! ```
//! use susyjc_core::hilbert::build_hamiltonian;
//! use susyjc_core::jc::{closed_form_levels, JcModel};
//! use susyjc_core::oracle::diagonalize;
//! use susyjc_core::{HilbertConfig, Model, ModelParams};
//!
//! let params = ModelParams::jc(1.0, 1.2, 0.4)?;
//! let sol = diagonalize(&build_hamiltonian(HilbertConfig::new(40), &params, Model::Jc)?)?;
//! for (k, (_, e)) in closed_form_levels(&params, JcModel::Jc, 6).iter().enumerate() {
//!     assert!((e - sol.eigenvalues[k]).abs() < 1e-10);
//! }
//! # Ok::<(), susyjc_core::Error>(())
//! ```

pub mod algebra;
pub mod anisotropic;
pub mod error;
pub mod far;
pub mod hilbert;
pub mod jc;
pub mod oracle;
pub mod wigner;

pub use error::{Error, Result};
pub use hilbert::{HilbertConfig, Model, ModelParams, OperatorMatrix, Spin, C64};
