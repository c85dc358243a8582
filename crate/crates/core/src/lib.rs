pub mod error;
pub mod linalg;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub mod bipartite;
pub mod cli;
pub mod criteria;
pub mod io;
pub mod states;
