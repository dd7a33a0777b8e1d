//! Families of twisted Thue inequalities over number fields with at most
//! one real embedding.
//!
//! Starting from a number field given by an integer polynomial, a
//! fundamental system of units, and a twisting element, the crate builds
//! the twisted binary forms, derives explicit upper bounds on the size of
//! integer solutions that hold uniformly in the family parameter, and
//! enumerates the solutions below those bounds. The Stender quartic
//! fields get a dedicated fast path with closed-form coefficient
//! recurrences.

pub mod algnum;
pub mod arith;
pub mod cli;
pub mod dirf;
pub mod diophantine;
pub mod embeddings;
pub mod error;
pub mod fieldspec;
pub mod forms;
pub mod heights;
pub mod poly;
pub mod stender;
pub mod units;

pub use error::{Error, Result};
