//! Std companion of `commrange-core`: matrix and report files, a rayon trial
//! runner, the acceptance battery and the `commrange` command line.

pub mod cli;
pub mod io;
pub mod parallel;
pub mod suite;
