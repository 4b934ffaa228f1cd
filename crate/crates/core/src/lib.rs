#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![doc = include_str!("../README.md")]

extern crate alloc;

pub mod analysis;
pub mod bonnet;
pub mod error;
pub mod grid;
pub mod hopf;
pub mod invariants;
pub mod jet;
pub mod surface;
pub mod vec3;

pub use error::{Error, Result};
