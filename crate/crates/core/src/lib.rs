//! Basis entropy of pure quantum states and its typicality.
//!
//! The entropy of a state `|φ⟩` in an orthonormal basis `{|φ_j⟩}` is the
//! Shannon entropy of its weights `|⟨φ_j|φ⟩|²`. For Haar-random states in
//! dimension `N` it concentrates near `ln N` with variance of order `1/N`.
//! This crate provides:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`specfun`] | log-gamma, digamma, trigamma |
//! | [`sampler`] | Haar-random states with counter-based seeding |
//! | [`entropy`] | Shannon, basis and binary entropy kernels |
//! | [`analytic`] | closed-form moments, means and variances |
//! | [`distfit`] | logistic fit of the entropy distribution, KS distance |
//! | [`bipartite`] | reduced states, subsystem and von Neumann entropy |
//! | [`dynamics`] | GOE Hamiltonians, survival probability, relaxation |
//! | [`maxent`] | Gibbs weights from maximal entropy at fixed energy |
//! | [`levy`] | Lipschitz constant and concentration bounds |
//! | [`acceptance`] | end-to-end numerical checks of all of the above |
//!
//! ```
//! use gwvn_core::{analytic, sampler};
//!
//! let state = sampler::haar_state(110, 42).unwrap();
//! let mean = analytic::mean_entropy(110).unwrap();
//! assert!((state.entropy() - mean).abs() < 0.5);
//! ```

pub mod acceptance;
pub mod analytic;
pub mod bipartite;
pub mod distfit;
pub mod dynamics;
pub mod entropy;
pub mod error;
pub mod levy;
pub mod maxent;
pub mod montecarlo;
pub mod sampler;
pub mod specfun;
pub mod state;

pub use analytic::{EntropyStats, MomentQuery};
pub use bipartite::{BipartiteState, EntropyTriple, ReducedState, Side};
pub use distfit::{EmpiricalCdf, FdParams};
pub use dynamics::{CompletedBasis, Hamiltonian, RelaxationTrace};
pub use entropy::{BasisRotation, ProbabilityVector};
pub use error::{Error, Result};
pub use levy::TailReport;
pub use maxent::{GibbsState, Spectrum};
pub use montecarlo::{EntropySample, Summary};
pub use sampler::SampleConfig;
pub use state::StateVector;

pub use num_complex::Complex64;
