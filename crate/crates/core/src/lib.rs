//! Semidefinite-programming bounds for bidirectional quantum channels.
//!
//! The crate is organised bottom-up:
//!
//! - [`qcore`]: dense complex linear algebra on multipartite systems, entropies,
//!   Heisenberg–Weyl operators and seeded random states.
//! - [`conic`]: a small primal-dual interior-point SDP solver over complex
//!   Hermitian variables.
//! - [`divergences`]: max-relative, sandwiched Rényi and hypothesis-testing divergences.
//! - [`measures`]: max-Rains quantities, Rains / PPT relative entropies and
//!   the amortization checks.
//! - [`channels`]: Kraus / Choi / isometry conversions, bidirectional and
//!   controlled channels, covariance checks.
//! - [`protocols`]: teleportation simulation, privacy tests and resource-state bounds.
//! - [`reading`]: private reading rates of wiretap memory cells.
//! - [`cli`]: the JSON/CSV front end used by the `biqap` binary.
//!
//! Runnable walkthroughs live in `examples/`; `cargo run --example <name>`.

pub mod channels;
pub mod cli;
pub mod conic;
pub mod divergences;
pub mod measures;
pub mod protocols;
pub mod qcore;
pub mod reading;

mod error;

pub use error::{Error, Result};
