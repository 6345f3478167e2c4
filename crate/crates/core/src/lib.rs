//! Achievable rate regions for source compression with a helper.
//!
//! Three settings are covered:
//!
//! - a classical source `X` helped by a classical observer of `Y`, with region
//!   `R1 >= H(X|U)`, `R2 >= I(U;Y)` over test channels `p(u|y)`;
//! - a classical source helped by a quantum system `B`, with region
//!   `R1 >= H(X|U)`, `R2 >= I(U;B)_σ` over POVMs on `B`, where `σ_UB` is the
//!   conjugated post-measurement state;
//! - a quantum source `A` helped by `B` with entanglement assistance, with
//!   region `R1 >= H(A|C)_φ`, `R2 >= I(RA;C)_φ / 2` over channels `B -> C`.
//!
//! The [`regions`] module traces lower boundaries by weighted-sum
//! scalarization and multi-start derivative-free search; [`oracles`] checks
//! them by exhaustive enumeration on qubit and binary instances; [`codec`]
//! runs finite-blocklength Monte Carlo simulations of channel synthesis and
//! random-binning decoding.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod cli;
pub mod codec;
pub mod entropy;
pub mod error;
pub mod io;
pub mod linalg;
pub mod measurement;
pub mod optimize;
pub mod oracles;
pub mod regions;
pub mod sources;
pub mod tolerance;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, DensityMatrix, Povm, PureStateVector, C64};
pub use regions::{BoundaryCurve, ChannelIsometry, Membership, RatePoint, TestChannel, Witness};
pub use sources::{BipartiteSource, CQSource, ClassicalJoint};
