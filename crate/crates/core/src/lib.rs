//! Zeros of Eisenstein series and of the combined forms `E_k^n + E_{nk}` and
//! `E_k E_l ± E_{k+l}` on the lower boundary arc of the SL2(Z) fundamental
//! domain.
//!
//! The crate is organised bottom-up:
//!
//! - [`eisenstein`]: `E_k(τ)` by truncated q-expansion and by truncated
//!   coprime lattice sum, each with an explicit error bound.
//! - [`arc`]: the real-valued arc restrictions `F_k`, `F_{n,k}`, `G_{k,l}`,
//!   their main-term/remainder split and the closed-form bounds.
//! - [`grid`]: weight decompositions, sample angles `2mπ/w` and the counting
//!   arithmetic behind the intermediate-value argument.
//! - [`zeros`]: sign-change isolation and bisection refinement on the arc and
//!   on the left boundary `Re τ = -1/2`, plus fundamental-domain reduction.
//! - [`verify`]: valence budgets and executable checks of every bound and
//!   counting claim over parameter ranges.
//! - [`report`] and [`cli`]: JSON/CSV reports and the command-line driver.

pub mod arc;
pub mod cli;
pub mod eisenstein;
pub mod error;
pub mod grid;
pub mod report;
pub mod verify;
pub mod zeros;

pub use arc::{ArcAngle, ArcValue, FormSpec, Sign};
pub use eisenstein::{SeriesValue, UpperHalfPoint, Weight};
pub use error::{Error, Result};

/// Largest weight handled anywhere in the crate. Beyond this the binary64
/// evaluation envelope is not validated.
pub const MAX_WEIGHT: u32 = 400;
