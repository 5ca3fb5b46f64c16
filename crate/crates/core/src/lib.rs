//! Categorical data maps: project unique category combinations into the plane,
//! partition the plane around them and measure how fractured each attribute is.
#![cfg_attr(not(feature = "std"), no_std)]
extern crate alloc;

pub mod dataset;
pub mod distance;
pub mod error;
pub mod fracturedness;
pub mod geometry;
pub mod glyph;
pub mod linalg;
pub mod pipeline;
pub mod projection;
pub mod quality;
pub mod render;
pub mod selection;

pub use error::{Error, Result};
