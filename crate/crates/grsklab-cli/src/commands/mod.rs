//! One module per subcommand family.

pub mod airy;
pub mod arrays;
pub mod laplace;
pub mod sample;
pub mod sweep;
pub mod verify;
