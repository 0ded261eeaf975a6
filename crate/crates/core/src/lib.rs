//! Exact arithmetic for valued fields of characteristic p.
//!
//! The crate models two valued fields over a finite residue field F_q:
//! the complete field F_q((t)) ([`LaurentSeries`], truncated with explicit
//! precision) and the rational function field F_q(t) ([`RatFunc`], exact)
//! with its t-adic valuation. On top of them it provides:
//!
//! * [`artin_schreier`]: roots of X^p - X - b by Frobenius and Newton
//!   iteration, the exact decision of b ∈ {x^p - x : x ∈ F_q(t)}, and the
//!   classification of degree-p Artin-Schreier extensions by (e, f, g, d);
//! * [`pseudo_convergence`]: finite prefixes of pseudo-convergent sequences
//!   approaching a root of X^p - X - b, and the valuation tables they induce;
//! * [`harness`]: batch scans, end-to-end reports and corpus generation.

pub mod artin_schreier;
pub mod error;
pub mod finite_field;
pub mod harness;
pub mod laurent;
mod linalg;
pub mod literal;
pub mod parallel;
pub mod poly;
pub mod pseudo_convergence;
pub mod rational;
pub mod sample;
pub mod value;

pub use error::{Error, Result};
pub use finite_field::{Field, FqElem, ResidueSolutions};
pub use laurent::{LaurentSeries, SeriesValuation, DEFAULT_PREC};
pub use poly::Poly;
pub use rational::RatFunc;
pub use value::Value;
