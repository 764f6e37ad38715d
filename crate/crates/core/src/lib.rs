//! Partial group cohomology over products of `Z/p^k` blocks.

pub mod abelian;
pub mod action;
pub mod cli;
pub mod cochain;
pub mod cohomology;
pub mod error;
pub mod fixtures;
pub mod globalize;
pub mod group;
pub mod ring;
pub mod transitivity;
pub mod verify;

pub use error::{Error, Result};
