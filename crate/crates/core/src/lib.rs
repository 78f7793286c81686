//! Explicit isomorphisms for split central simple algebras over Q.

pub mod amitsur;
pub mod cli;
pub mod arithmetic;
pub mod csa;
pub mod error;
pub mod etale;
pub mod exact;
pub mod pipeline;

pub use error::{Error, Result};
