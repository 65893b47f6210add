//! Automata over data words with priority class conditions.
//!
//! The crate covers data words and their classes, finite automata over
//! marked alphabets, the 0-priority analysis of class conditions, data /
//! class / priority-class automata, multicounter machines with prefix zero
//! tests, the compilation of priority-class automata into such machines, and
//! Boolean-state reachability for a small array-accessing language.

pub mod arrayprog;
pub mod classauto;
pub mod cli;
pub mod compile;
pub mod corpus;
pub mod counters;
pub mod dataword;
pub mod error;
pub mod fsm;
pub mod priority;
pub mod samples;

pub use error::{Error, Result};
