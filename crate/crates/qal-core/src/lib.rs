//! Active learning on a qubit lattice with weak and strong measurement.
//!
//! A 21x21 lattice of qubits encodes a binary class in the sign of
//! `<sigma_z>`. Labels are bought by measuring n-copy ensembles, weakly
//! (a wide Gaussian ancilla that barely disturbs the qubit but reads
//! almost nothing per shot) or strongly (projective, destructive), and an
//! active learner decides which qubit to label next: uncertainty sampling
//! on a linear SVM, query-by-committee over four models, or random
//! sampling. The engine runs seeded episodes and replication sweeps with
//! fidelity accounting; the harness exposes the experiments as a CLI with
//! CSV and SVG output.
//!
//! Everything is deterministic for a fixed master seed.

pub mod classifiers;
pub mod engine;
pub mod error;
pub mod harness;
pub mod lattice;
pub mod measurement;
pub mod rng;
pub mod strategies;

pub use error::{Error, Result};
