//! Classification workbench for subfactor principal graph pairs at index 5.
//!
//! The crate is organised bottom-up:
//!
//! * [`bigraph`] and [`iso`]: the `bwd...duals...` notation, pair validation
//!   and pair isomorphism.
//! * [`qsqrt5`], [`poly`], [`spectral`]: exact norms via integer
//!   characteristic polynomials and Sturm sequences, and exact
//!   Frobenius–Perron dimensions in Q(√5).
//! * [`graph_ops`]: translation, stability, stable extensions, star shapes.
//! * [`obstructions`]: the elimination battery with re-checkable witnesses.
//! * [`connections`]: bi-unitary connection residuals, a Levenberg–Marquardt
//!   solver, gauge invariants and orbit counting, and the 2222 branch matrix.
//! * [`catalog`]: the embedded graph pairs and the end-to-end pipeline.

pub mod bigraph;
pub mod catalog;
pub mod connections;
pub mod exec;
pub mod graph_ops;
pub mod iso;
pub mod obstructions;
pub mod poly;
pub mod qsqrt5;
pub mod spectral;

pub use bigraph::{
    make_pair, opposite, parse_bigraph, serialize_bigraph, Bigraph, BigraphPair, CodecError, Side, Vertex,
};
pub use exec::Execution;
pub use iso::{pair_automorphisms, pair_isomorphic, PairIso};
pub use qsqrt5::QSqrt5;
pub use spectral::{dimension_vector, norm_squared, supertransitivity, DimensionVector, SpectralData};

/// The index every catalog pair is tested against.
pub const INDEX: i64 = 5;
