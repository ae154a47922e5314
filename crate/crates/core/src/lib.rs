//! A constraint solver for hereditarily finite sets, binary relations and
//! linear integer arithmetic, with a Prolog-like clause language on top.
//!
//! Goals are conjunctions and disjunctions of constraints over set terms.
//! [`engine::Engine`] rewrites them into a solved form and enumerates answers
//! lazily: each answer is a substitution plus residual constraints.
//!
//! ```
//! use setlog::engine::Engine;
//!
//! let mut e = Engine::new();
//! let a = e.query("un({1},{2},C).").unwrap().next().unwrap().unwrap();
//! assert_eq!(a.to_string(), "C = {1,2}");
//! ```
//!
//! [`verifier`] turns invariance obligations into goals and proves them by
//! showing unsatisfiability. [`types`] implements the optional type checker.

pub mod arith;
pub mod engine;
pub mod goal;
pub mod seq;
pub mod solver;
pub mod syntax;
pub mod term;
pub mod types;
pub mod verifier;
