//! Brauer relations in finite groups.

pub mod burnside;
pub mod catalog;
pub mod classifier;
pub mod corpus;
pub mod error;
pub mod group;
pub mod linalg;
pub mod primitivity;
pub mod regulator;
pub mod relations;
pub mod util;

pub use error::{Error, Result};
