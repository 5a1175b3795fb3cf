//! Continuous-time quantum walks driven by the signless Laplacian on vertex
//! complemented coronae.
//!
//! The crate builds coronae `G ∘̃ H`, computes their spectral decompositions
//! both numerically and in closed form (for regular `G` and `H`), and decides
//! perfect state transfer, periodicity and pretty good state transfer.

pub mod algebraic;
pub mod corona_spectra;
pub mod graphs;
pub mod spectra;
pub mod state_transfer;
pub mod workflow;
