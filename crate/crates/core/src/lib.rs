pub mod ambient;
pub mod domain;
pub mod error;
pub mod extensions;
pub mod field;
pub mod function_rings;
pub mod lattice;
pub mod module;
pub mod pmd;
pub mod sample;
pub mod semistar;
pub mod spec;
pub mod tribool;

pub use error::{Error, Result};
pub use tribool::TriBool;
