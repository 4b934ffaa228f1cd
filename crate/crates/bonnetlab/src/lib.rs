#![doc = include_str!("../README.md")]

pub mod chart;
pub mod error;
pub mod fields;
pub mod pipeline;
pub mod report;
pub mod summary;
pub mod table;

pub use error::{Error, Result};
