//! Exact Poincaré polynomials of moduli spaces of rank-2 stable pairs on a
//! Riemann surface, computed by equivariant Morse theory.

pub mod assembly;
pub mod blocks;
pub mod cli;
pub mod error;
pub mod rational;
pub mod series;
pub mod strata;
pub mod verify;

pub use assembly::{total_generic, total_nongeneric, BettiTable, ContributionLedger};
pub use blocks::SurfaceParams;
pub use error::{Error, Result};
pub use rational::ExactRational;
pub use series::{BiTruncSeries, TruncSeries};
pub use strata::{enumerate_delta, DeltaIndex, ModuliParams, StratumClass, StratumDescriptor};
