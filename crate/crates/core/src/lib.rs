//! Exact solving, pairing certificates and scripted strategies for the
//! Juniper Green divisor game.
//!
//! Players alternately pick an unused number in `1..=n` that divides or is a
//! multiple of the previous pick; whoever cannot move loses. The first move
//! must be even. The crate answers, for every `n`, whether the first player
//! (`G`) or the second player (`P`) wins, and backs every answer with a
//! checkable piece of evidence.

mod bits;
pub mod classify;
pub mod error;
pub mod graph;
pub mod numset;
pub mod pairing;
pub mod primes;
pub mod simplify;
pub mod solver;
pub mod strategy;

pub use classify::{full_table, ClassificationReport, Classifier, ClassifierConfig, Effort, Evidence, Method};
pub use error::{Error, Result};
pub use graph::{build_graph, initial_position, DivisorGraph, GraphDocument, Position};
pub use numset::NumSet;
pub use pairing::{PairingCertificate, ParityPrediction};
pub use primes::{build_prime_table, PrimeTable};
pub use solver::{solve_initial, GameVerdict, Outcome, SearchStats, Solver, SolverConfig};
pub use strategy::{Policy, SimulationOutcome, TwoPrimeScript};
