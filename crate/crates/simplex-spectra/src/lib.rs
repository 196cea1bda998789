//! Tensor eigenpairs of regular simplex frames.
//!
//! The crate builds the order-m symmetric tensor whose rank-one terms are
//! the n vectors of a regular simplex frame in R^{n-1}, enumerates every
//! real eigenpair of that tensor in closed or semi-closed form, classifies
//! each one as a local maximum / minimum / saddle of the associated
//! polynomial optimization problem, and cross-checks the enumeration with
//! gradient-flow and power-iteration experiments.

pub mod classify;
pub mod frame;
pub mod numerics;
pub mod oracle;
pub mod power;
pub mod report;
pub mod stationary;
pub mod tensor;

pub use classify::{classify, Classification, Verdict};
pub use frame::{build_frame, Frame};
pub use power::{basin_experiment, default_shift, power_iterate, BasinReport};
pub use report::{census_csv, census_report, CensusReport};
pub use stationary::{census, Census, StationaryPoint, Structure};
pub use tensor::SymTensor;
