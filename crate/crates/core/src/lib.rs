//! Exact computation of special polynomials of characteristic-p zeta and
//! L-series over `F_r[T]` and two Artin–Schreier rings of genus 1 and 2,
//! together with trivial-zero orders at infinity and at finite places.

pub mod character;
pub mod curve;
pub mod digits;
pub mod error;
pub mod export;
pub mod field;
pub mod poly;
pub mod ring;
pub mod scan;
pub mod special;
pub mod vadic;
pub mod zeros;

pub use error::{Error, Result};
