//! Exact-arithmetic calculus for strict Lie 2-algebras, crossed modules of
//! Lie algebras, 2-vector spaces, Lie-algebra bibundles with Morita checks,
//! and the finite-groupoid bibundle calculus with linking groupoids.
//!
//! Everything is computed over arbitrary-precision rationals, so all
//! verification checks are exact yes/no answers with counterexamples. See
//! the `examples/` directory for one runnable walkthrough per capability,
//! and the `lie2kit` binary for the file-based verify/build/compose surface.

pub mod cli;
pub mod doc;
pub mod exactla;
pub mod fingpd;
pub mod lie2;
pub mod liealg;
pub mod report;
pub mod testgen;
pub mod twovect;
