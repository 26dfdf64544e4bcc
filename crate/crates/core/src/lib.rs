//! Twisted homology and cohomology for the Lauricella F_D system with integral
//! parameters allowed.

pub mod chains;
pub mod cli;
pub mod cocycles;
pub mod connection;
pub mod error;
pub mod linalg;
pub mod monodromy;
pub mod numerics;
pub mod parameters;

pub use error::{Error, Result};
