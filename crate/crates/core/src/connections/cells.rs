use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ConnectionError;
use crate::bigraph::{Bigraph, BigraphPair, Vertex};
use crate::spectral::{norm_squared, pair_dimensions, DimensionVector};
use crate::INDEX;

/// A square cell `(a, m, b, n)`: `a` even in the plus graph, `b` even in the
/// minus graph, `m` and `n` shared odd vertices, with `a~m`, `a~n` in the
/// plus graph and `b~m`, `b~n` in the minus graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub a: Vertex,
    pub m: Vertex,
    pub b: Vertex,
    pub n: Vertex,
}

/// One unitarity block. Entry `(j, l)` is cell `cells[j][l]` scaled by
/// `weights[j][l]`, conjugated when `conjugate` is set.
#[derive(Clone, Debug, Serialize)]
pub struct Block {
    pub key: (Vertex, Vertex),
    pub rows: Vec<Vertex>,
    pub cols: Vec<Vertex>,
    pub cells: Vec<Vec<usize>>,
    pub weights: Vec<Vec<f64>>,
    pub conjugate: bool,
}

impl Block {
    pub fn is_square(&self) -> bool {
        self.rows.len() == self.cols.len()
    }

    /// The block as a dense complex matrix.
    pub fn matrix(&self, w: &CellAssignment) -> Vec<Vec<Complex64>> {
        self.cells
            .iter()
            .zip(&self.weights)
            .map(|(row, wt)| {
                row.iter()
                    .zip(wt)
                    .map(|(&c, &s)| {
                        let z = w.values[c] * s;
                        if self.conjugate {
                            z.conj()
                        } else {
                            z
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

/// Index set, unitarity blocks and weights of the connection equations.
#[derive(Clone, Debug)]
pub struct CellComplex {
    pub pair: BigraphPair,
    pub even_plus: Vec<Vertex>,
    pub even_minus: Vec<Vertex>,
    pub odd: Vec<Vertex>,
    pub cells: Vec<Cell>,
    /// Blocks indexed by `(a, b)`; rows and columns are odd vertices.
    pub ab_blocks: Vec<Block>,
    /// Renormalized blocks indexed by `(m, n)`; rows are `a`, columns `b`.
    pub mn_blocks: Vec<Block>,
    pub dims_plus: DimensionVector,
    pub dims_minus: DimensionVector,
    /// `(block, row, col)` of each cell in `ab_blocks`.
    pub cell_ab: Vec<(usize, usize, usize)>,
    /// `(block, row, col)` of each cell in `mn_blocks`.
    pub cell_mn: Vec<(usize, usize, usize)>,
    index: HashMap<Cell, usize>,
}

/// One complex value per cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellAssignment {
    pub values: Vec<Complex64>,
}

impl CellAssignment {
    pub fn new(values: Vec<Complex64>) -> Self {
        CellAssignment { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Interleaved `[re0, im0, re1, im1, ...]`.
    pub fn to_real(&self) -> Vec<f64> {
        self.values.iter().flat_map(|z| [z.re, z.im]).collect()
    }

    pub fn from_real(x: &[f64]) -> Self {
        CellAssignment {
            values: x.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect(),
        }
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

fn odd_neighbors(g: &Bigraph, v: Vertex) -> Vec<Vertex> {
    let mut out: Vec<Vertex> = g.neighbors(v).into_iter().map(|(w, _)| w).collect();
    out.sort();
    out
}

fn intersect(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
    a.iter().copied().filter(|v| b.contains(v)).collect()
}

/// Builds the cell complex of a simply-laced index-5 pair.
pub fn build_cells(p: &BigraphPair) -> Result<CellComplex, ConnectionError> {
    for g in [p.plus(), p.minus()] {
        if !g.is_simply_laced() {
            return Err(ConnectionError::NotSimplyLaced);
        }
        if norm_squared(g, Some(INDEX)).exact_target.is_none() {
            return Err(ConnectionError::NotIndexFive);
        }
    }
    let (dims_plus, dims_minus) = pair_dimensions(p)?;
    let (gp, gm) = (p.plus(), p.minus());
    let even_plus: Vec<Vertex> = gp.vertices().filter(Vertex::is_even).collect();
    let even_minus: Vec<Vertex> = gm.vertices().filter(Vertex::is_even).collect();
    let odd: Vec<Vertex> = gp.vertices().filter(|v| !v.is_even()).collect();
    for &m in &odd {
        if dims_plus.get(m) != dims_minus.get(m) {
            return Err(ConnectionError::OddDimensionMismatch(m));
        }
    }
    let mu_p = |v: Vertex| dims_plus.get(v).to_f64();
    let mu_m = |v: Vertex| dims_minus.get(v).to_f64();

    let mut cells = Vec::new();
    let mut ab_blocks = Vec::new();
    let mut cell_ab = Vec::new();
    for &a in &even_plus {
        let na = odd_neighbors(gp, a);
        for &b in &even_minus {
            let common = intersect(&na, &odd_neighbors(gm, b));
            if common.is_empty() {
                continue;
            }
            let k = ab_blocks.len();
            let mut grid = Vec::new();
            for (j, &m) in common.iter().enumerate() {
                let mut row = Vec::new();
                for (l, &n) in common.iter().enumerate() {
                    row.push(cells.len());
                    cell_ab.push((k, j, l));
                    cells.push(Cell { a, m, b, n });
                }
                grid.push(row);
            }
            ab_blocks.push(Block {
                key: (a, b),
                rows: common.clone(),
                cols: common.clone(),
                weights: vec![vec![1.0; common.len()]; common.len()],
                cells: grid,
                conjugate: false,
            });
        }
    }
    let index: HashMap<Cell, usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();

    let mut mn_blocks = Vec::new();
    let mut cell_mn = vec![(0, 0, 0); cells.len()];
    for &m in &odd {
        for &n in &odd {
            let rows: Vec<Vertex> = even_plus
                .iter()
                .copied()
                .filter(|&a| gp.edge(a, m) > 0 && gp.edge(a, n) > 0)
                .collect();
            let cols: Vec<Vertex> = even_minus
                .iter()
                .copied()
                .filter(|&b| gm.edge(b, m) > 0 && gm.edge(b, n) > 0)
                .collect();
            if rows.is_empty() || cols.is_empty() {
                continue;
            }
            let k = mn_blocks.len();
            let mut grid = Vec::new();
            let mut weights = Vec::new();
            for (j, &a) in rows.iter().enumerate() {
                let mut row = Vec::new();
                let mut wrow = Vec::new();
                for (l, &b) in cols.iter().enumerate() {
                    let c = index[&Cell { a, m, b, n }];
                    cell_mn[c] = (k, j, l);
                    row.push(c);
                    wrow.push((mu_p(a) * mu_m(b) / (mu_p(m) * mu_p(n))).sqrt());
                }
                grid.push(row);
                weights.push(wrow);
            }
            mn_blocks.push(Block {
                key: (m, n),
                rows,
                cols,
                cells: grid,
                weights,
                conjugate: true,
            });
        }
    }

    Ok(CellComplex {
        pair: p.clone(),
        even_plus,
        even_minus,
        odd,
        cells,
        ab_blocks,
        mn_blocks,
        dims_plus,
        dims_minus,
        cell_ab,
        cell_mn,
        index,
    })
}

impl CellComplex {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell_index(&self, c: &Cell) -> Option<usize> {
        self.index.get(c).copied()
    }

    /// Largest `(a, b)` block dimension.
    pub fn max_block(&self) -> usize {
        self.ab_blocks.iter().map(|b| b.rows.len()).max().unwrap_or(0)
    }

    /// Largest `(m, n)` block dimension.
    pub fn max_renormalized_block(&self) -> usize {
        self.mn_blocks
            .iter()
            .map(|b| b.rows.len().max(b.cols.len()))
            .max()
            .unwrap_or(0)
    }

    /// Renormalization weight `√(μ(a)μ(b)/(μ(m)μ(n)))` of a cell.
    pub fn weight(&self, cell: usize) -> f64 {
        let (k, j, l) = self.cell_mn[cell];
        self.mn_blocks[k].weights[j][l]
    }

    /// The renormalized transpose: `W'(a,m,b,n) = weight · conj(W(a,m,b,n))`.
    pub fn renormalize(&self, w: &CellAssignment) -> CellAssignment {
        CellAssignment::new(
            w.values
                .iter()
                .enumerate()
                .map(|(c, z)| z.conj() * self.weight(c))
                .collect(),
        )
    }

    /// Inverse of [`renormalize`](Self::renormalize).
    pub fn unrenormalize(&self, w: &CellAssignment) -> CellAssignment {
        CellAssignment::new(
            w.values
                .iter()
                .enumerate()
                .map(|(c, z)| z.conj() / self.weight(c))
                .collect(),
        )
    }
}
