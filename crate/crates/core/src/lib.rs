//! Model checking for the least-fixpoint fragment of second-order HyperLTL.

pub mod automata;
pub mod guard;
pub mod formula;
pub mod ltl2nba;
pub mod system;
pub mod firstorder;
pub mod secondorder;
pub mod encodings;
pub mod engine;
