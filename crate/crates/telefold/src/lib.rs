//! File formats, command line and HTTP service around [`telefold_core`].

pub mod cli;
pub mod config;
pub mod obj;
pub mod pgm;
pub mod pipeline;
pub mod service;
pub mod stl;
pub mod tables;

pub use telefold_core as kernel;
