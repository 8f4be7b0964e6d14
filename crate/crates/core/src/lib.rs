pub mod bounds;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod linalg;

pub use error::{Error, Result};
pub mod experiments;
pub mod verify;
