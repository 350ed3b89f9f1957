//! Bi-unitary connections on a graph pair.
//!
//! A connection assigns a complex number to every square cell
//! `(a, m, b, n)`. The `(a,b)` blocks must be unitary, and so must the
//! renormalized `(m,n)` blocks with entries
//! `√(μ(a)μ(b)/(μ(m)μ(n))) · conj(W(a,m,b,n))`. Solutions are searched for by
//! multi-start Levenberg–Marquardt and compared modulo gauge and graph
//! automorphisms.

mod branch;
mod cells;
mod gauge;
mod orbits;
mod solve;

pub use branch::{
    allowed_branch_points, allowed_eigenvalue_sums, branch_matrix, f_value, scan_roots, BranchMatrix2222, BranchRoot,
};
pub use cells::{build_cells, Block, Cell, CellAssignment, CellComplex};
pub use gauge::{gauge_invariants, gauge_transform, GaugeBasis};
pub use orbits::{
    cell_automorphisms, cluster, count_gauge_orbits, moduli_dimension, orbit_distance, permute, ModuliEstimate,
    OrbitReport, CLUSTER_TOL, SVD_REL_TOL,
};
pub use solve::{block_residuals, initial_guess, residual, solve, LmOptions, Run, SolveOptions, SolveResult};

use crate::bigraph::Vertex;
use crate::spectral::SpectralError;

#[derive(Debug, thiserror::Error)]
pub enum ConnectionError {
    #[error("pair has an edge of multiplicity greater than one")]
    NotSimplyLaced,
    #[error("graph norm squared is not 5")]
    NotIndexFive,
    #[error("odd vertex {0} has different dimensions in the two graphs")]
    OddDimensionMismatch(Vertex),
    #[error(transparent)]
    Dimension(#[from] SpectralError),
}

#[cfg(test)]
mod tests;
