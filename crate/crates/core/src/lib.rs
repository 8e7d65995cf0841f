//! Exact simulation of the bipartite entanglement produced by
//! beam-splitting `M` single photons into two `M`-mode systems, and of the
//! witnesses that certify it from photon counting before and after local
//! discrete Fourier transforms.
//!
//! The modules build on each other:
//!
//! - [`fock`]: photon-number patterns, Fock bases, pure states and mixtures.
//! - [`linop`]: mode unitaries (DFT, mode shift, beam splitters) and their
//!   lift to multi-photon states through matrix permanents.
//! - [`entangle`]: the beam-split state and its photon-number partitions.
//! - [`patterns`]: cyclic pattern classes, K-values and shift eigenstates.
//! - [`witness`]: correlation fidelities, separable bounds and the witness
//!   operator.
//!
//! ```
//! use fockwitness::{entangle, witness};
//!
//! let phi = entangle::phi_partition(4, 2)?;
//! let report = witness::evaluate(&phi)?;
//! assert!((report.witness_value - 2.0 / 3.0).abs() < 1e-12);
//! # Ok::<(), fockwitness::Error>(())
//! ```
//!
//! A longer narrative lives in the `book/` directory of the repository; its
//! code listings are compiled and run as doc-tests of this crate.

pub mod entangle;
pub mod error;
pub mod fock;
pub mod io;
pub mod linop;
pub mod patterns;
pub mod rational;
pub mod witness;

pub use error::{Error, Result};
pub use fock::{FockBasis, MixedEnsemble, PhotonPattern, PureState, QuantumState, Space};
pub use linop::{ModeUnitary, Side};
pub use patterns::PatternClass;
pub use witness::{Partition, WitnessReport};

// The guide's chapters, compiled as doc-tests so the listings stay in step
// with the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fock-space.md")]
    mod fock_space {}
    #[doc = include_str!("../../../book/src/linear-optics.md")]
    mod linear_optics {}
    #[doc = include_str!("../../../book/src/entanglement.md")]
    mod entanglement {}
    #[doc = include_str!("../../../book/src/pattern-classes.md")]
    mod pattern_classes {}
    #[doc = include_str!("../../../book/src/witnesses.md")]
    mod witnesses {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
