//! Exact computation of Taelman class modules of Drinfeld `F_q[t]`-modules
//! over `L(θ)`, constant-field towers, the length calculus over
//! `F_q[[π]][[T]]`, and different valuations of `Z_p`-extensions.

pub mod base;
pub mod class_module;
pub mod drinfeld;
pub mod error;
pub mod lambda_mu;
pub mod ramification;
pub mod selftest;
pub mod tower;

pub use error::{Error, Result};
