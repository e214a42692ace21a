pub mod approach;
pub mod cli;
pub mod domain;
pub mod error;
pub mod interval;
pub mod order;
pub mod scott;
pub mod tnorm;

pub use error::{Error, Result};
pub use tnorm::{Archetype, TNorm, UnitValue, EPS};
