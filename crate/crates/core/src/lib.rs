pub mod algebra;
pub mod billiard;
pub mod cayley;
pub mod conics;
pub mod error;
pub mod exec;

pub use error::{Error, Result};
