use serde::Serialize;

use super::cells::{Cell, CellAssignment, CellComplex};
use super::gauge::GaugeBasis;
use super::solve::{residual_and_jacobian, solve, SolveOptions};
use crate::bigraph::Vertex;
use crate::iso::pair_automorphisms;

/// Two solutions are in the same orbit when their invariant vectors agree
/// to this tolerance (max-norm) under some automorphism.
pub const CLUSTER_TOL: f64 = 1e-6;

/// Singular values below `SVD_REL_TOL · σ_max` count as zero.
pub const SVD_REL_TOL: f64 = 1e-6;

/// Local dimension of the solution set modulo gauge at one solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ModuliEstimate {
    /// Dimension of the kernel of the residual Jacobian.
    pub nullity: usize,
    /// Dimension of the gauge orbit.
    pub gauge_rank: usize,
    pub dimension: usize,
}

fn numerical_rank(m: nalgebra::DMatrix<f64>) -> usize {
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > SVD_REL_TOL * max).count()
}

pub fn moduli_dimension(c: &CellComplex, basis: &GaugeBasis, w: &CellAssignment) -> ModuliEstimate {
    let (_, jac) = residual_and_jacobian(c, &w.to_real());
    let nullity = 2 * c.len() - numerical_rank(jac);
    let gauge_rank = numerical_rank(basis.tangent(w));
    ModuliEstimate {
        nullity,
        gauge_rank,
        dimension: nullity.saturating_sub(gauge_rank),
    }
}

/// Cell permutations induced by the pair automorphisms (duals ignored).
pub fn cell_automorphisms(c: &CellComplex) -> Vec<Vec<usize>> {
    pair_automorphisms(&c.pair, false)
        .into_iter()
        .map(|iso| {
            c.cells
                .iter()
                .map(|cell| {
                    let map = |perms: &[Vec<usize>], v: Vertex| Vertex::new(v.depth, perms[v.depth][v.index]);
                    let image = Cell {
                        a: map(&iso.plus, cell.a),
                        m: map(&iso.plus, cell.m),
                        b: map(&iso.minus, cell.b),
                        n: map(&iso.plus, cell.n),
                    };
                    c.cell_index(&image).expect("automorphism maps cells to cells")
                })
                .collect()
        })
        .collect()
}

pub fn permute(w: &CellAssignment, perm: &[usize]) -> CellAssignment {
    let mut values = w.values.clone();
    for (i, &j) in perm.iter().enumerate() {
        values[j] = w.values[i];
    }
    CellAssignment::new(values)
}

fn max_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Smallest invariant distance between `w` and `v` over all automorphisms.
pub fn orbit_distance(basis: &GaugeBasis, autos: &[Vec<usize>], w: &CellAssignment, v: &CellAssignment) -> f64 {
    let target = basis.invariants(v);
    autos
        .iter()
        .map(|p| max_dist(&basis.invariants(&permute(w, p)), &target))
        .fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub cells: usize,
    pub restarts: usize,
    pub converged: usize,
    pub best_residual: f64,
    pub orbit_count: usize,
    pub cluster_sizes: Vec<usize>,
    /// Restart index of each orbit representative.
    pub representative_runs: Vec<usize>,
    pub representatives: Vec<CellAssignment>,
    /// Largest distance of a cluster member from its representative.
    pub max_spread: f64,
    /// Smallest distance between two representatives.
    pub min_separation: f64,
    pub moduli: Vec<ModuliEstimate>,
    pub automorphisms: usize,
    /// Several clusters and a positive-dimensional solution set: the
    /// solutions form a continuum and `orbit_count` is not meaningful.
    pub continuum: bool,
}

/// Greedy clustering by orbit distance. Returns, for each cluster, the
/// member indices (the first is the representative) and the largest spread.
pub fn cluster(basis: &GaugeBasis, autos: &[Vec<usize>], sols: &[CellAssignment], tol: f64) -> (Vec<Vec<usize>>, f64) {
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut spread: f64 = 0.0;
    for (i, w) in sols.iter().enumerate() {
        let hit = clusters
            .iter()
            .enumerate()
            .map(|(k, cl)| (k, orbit_distance(basis, autos, w, &sols[cl[0]])))
            .find(|&(_, d)| d < tol);
        match hit {
            Some((k, d)) => {
                clusters[k].push(i);
                spread = spread.max(d);
            }
            None => clusters.push(vec![i]),
        }
    }
    (clusters, spread)
}

/// Solves, clusters converged solutions into gauge orbits modulo
/// automorphisms and estimates the local moduli dimension.
pub fn count_gauge_orbits(c: &CellComplex, opts: &SolveOptions) -> OrbitReport {
    let result = solve(c, opts);
    let basis = GaugeBasis::new(c);
    let autos = cell_automorphisms(c);
    let runs: Vec<_> = result.converged().collect();
    let sols: Vec<CellAssignment> = runs.iter().map(|r| r.assignment.clone()).collect();
    let (clusters, max_spread) = cluster(&basis, &autos, &sols, CLUSTER_TOL);
    let mut min_separation = f64::INFINITY;
    for i in 0..clusters.len() {
        for j in 0..i {
            let d = orbit_distance(&basis, &autos, &sols[clusters[i][0]], &sols[clusters[j][0]]);
            min_separation = min_separation.min(d);
        }
    }
    let moduli: Vec<ModuliEstimate> = opts
        .execution
        .map(sols.iter().collect(), |w| moduli_dimension(c, &basis, w));
    let mut dims: Vec<usize> = moduli.iter().map(|m| m.dimension).collect();
    dims.sort();
    let median = dims.get(dims.len() / 2).copied().unwrap_or(0);
    OrbitReport {
        cells: c.len(),
        restarts: result.runs.len(),
        converged: sols.len(),
        best_residual: result.best_residual(),
        orbit_count: clusters.len(),
        cluster_sizes: clusters.iter().map(Vec::len).collect(),
        representative_runs: clusters.iter().map(|cl| runs[cl[0]].restart).collect(),
        representatives: clusters.iter().map(|cl| sols[cl[0]].clone()).collect(),
        max_spread,
        min_separation,
        moduli,
        automorphisms: autos.len(),
        continuum: clusters.len() > 1 && median >= 1,
    }
}
