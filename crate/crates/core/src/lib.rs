//! Diophantine spectra of planar unimodular lattices.
//!
//! Index sequences and lattices are linked through their pivot chains; the
//! Lagrange, Markov, Dirichlet and Mordell-Gruber spectra are then read off
//! the log-systole function or, equivalently, from Perron-type formulas in
//! the continued-fraction tails of the sequence.

pub mod apps;
pub mod cfrac;
pub mod error;
pub mod exact;
pub mod hall;
pub mod lattice;
pub mod mg2;
pub mod perron;
pub mod systole;

pub use cfrac::{ExpansionSequence, OneSided, TailPair, Term};
pub use error::{Error, Result};
pub use exact::{QuadraticSurd, Rational, Real, ValidatedInterval};
pub use hall::{CantorSet, SolverWitness};
pub use lattice::{Lattice2D, PivotChain};
pub use perron::{AccumulationResult, ExtReal, PerronSpec};
pub use systole::SpectrumKind;
