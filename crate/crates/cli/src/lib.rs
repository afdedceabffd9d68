//! File formats, the equivalence harness and the `qtmc` command line.

pub mod circuit_code;
pub mod equiv;
pub mod error;
pub mod matrix_text;
pub mod qtm_text;
pub mod random;
pub mod symbols;

pub use error::{CliError, FormatError};
