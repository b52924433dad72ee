//! Core library for companion-planting ("garden") optimization problems.
//!
//! A garden problem places `n` plants of `t` species into `n` pots on a
//! rectangular grid so that neighbouring plants get along. The problem is
//! compiled to an exact integer QUBO, solved with classical heuristics, and
//! optionally minor-embedded onto annealer hardware graphs.
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats, and the CLI
//! live in the companion `garden-tools` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

pub mod instance;
pub mod qubo;
pub mod rng;
pub mod solver;
pub mod stats;
pub mod topology;

pub use instance::{CompanionsMatrix, GardenGraph, ProblemInstance, SamplingMode};
pub use qubo::{Assignment, EvaluationReport, QuboModel};
pub use solver::{SampleSet, SolverParams};
pub use topology::{Embedding, HardwareGraph, PhysicalModel, TopologyKind};
