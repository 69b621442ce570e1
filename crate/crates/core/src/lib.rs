//! Exact computations around split generation for point blowups: Novikov-field
//! arithmetic, stable treed-disk types, A∞ and Hochschild machinery, the toric
//! Blaschke model, open-closed maps and blowup bookkeeping.

pub mod ainfty;
pub mod blowup;
pub mod error;
pub mod hochschild;
pub mod linalg;
pub mod novikov;
pub mod openclosed;
pub mod rational;
pub mod toric;
pub mod trees;
pub mod verify;

pub use error::{Error, Result};
pub use novikov::{CyclotomicNumber, NovikovElement, Valuation};
pub use rational::Rational;
