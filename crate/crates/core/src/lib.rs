//! Weighted chain decompositions of {0,1}^n and {0,1,2}^n, exact checks of
//! their induced-weight and positivity properties, and a brute-force
//! independent-set oracle for the k-Sperner extremal problem.

pub mod arith;
pub mod asymptotics;
pub mod chain;
pub mod cli;
pub mod closed_forms;
pub mod diagram;
pub mod error;
pub mod grid;
pub mod lemmas;
pub mod oracle;
pub mod report;
pub mod weights;

pub use error::{Error, Result};
