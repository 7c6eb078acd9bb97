//! Specialisation of Bott-Samelson bimodules at points of the Tits cone.
//!
//! The crate computes, for a Coxeter system with an exact reflection
//! representation `V`, a word `(s, t, ..., u)` and a point `a` of the Tits
//! cone, the splitting of `B(s, t, ..., u) (x)_R K_a` into Bott-Samelson
//! modules for the stabiliser Coxeter systems at the points of the orbit
//! `W a` ([`engine`]). An independent brute-force construction of the same
//! module as commuting exact matrices ([`oracle`]) checks every answer.
//!
//! ```
//! use sbim_core::engine::specialise;
//! use sbim_core::oracle::verify_decomposition;
//! use sbim_core::tits::{orbit_table, Caps};
//! use sbim_core::{BsWord, FieldScalar, Point, Realisation};
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let real = Realisation::named("B2")?;
//! let a = Point::from_pairings(&real, &[FieldScalar::zero(), FieldScalar::one()])?;
//! let word = BsWord::new(vec![0, 1, 0]);
//! let dec = specialise(&real, &word, &a, Caps::default())?;
//! assert_eq!(dec.total_dim(), 8);
//!
//! let table = orbit_table(&real, &a, Caps::default())?;
//! assert!(verify_decomposition(&real, &word, &table)?.pass);
//! # Ok(())
//! # }
//! ```

pub mod coxeter;
pub mod engine;
pub mod field;
pub mod job;
pub mod linalg;
pub mod oracle;
pub mod tits;

pub use coxeter::{CoxeterError, CoxeterMatrix, GroupElement, Realisation, Reflection};
pub use engine::{BsWord, Decomposition, Summand};
pub use field::{FieldError, FieldScalar};
pub use job::{ExitStatus, JobConfig, JobError, JobReport, SweepReport};
pub use linalg::Matrix;
pub use oracle::{FinModule, VerificationReport};
pub use tits::{OrbitTable, Point, StabiliserSystem, TitsError};
