//! Artin-Schreier towers, D4-extensions of k((t)) in characteristic 2, their
//! ramification breaks, and the equicharacteristic deformations that lower them.

pub mod artin_schreier;
pub mod breaks;
pub mod cli;
pub mod d4;
pub mod deform;
pub mod error;
pub mod field;
pub mod input;
pub mod oracle;
pub mod planner;
pub mod report;
pub mod series;

pub use error::{Error, Result};
pub use field::{FieldCtx, FieldElem};
pub use series::{BiRational, LaurentSeries, PiElem, Series};
