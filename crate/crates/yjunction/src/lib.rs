pub mod config;
pub mod error;
pub mod experiment;
pub mod fixture;
pub mod qasm;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use yjunction_core as core;
