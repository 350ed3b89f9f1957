use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use super::cells::{CellAssignment, CellComplex};
use crate::bigraph::Vertex;

/// Gauge characters of the cells and the pivot data used to build
/// invariants.
///
/// The gauge group has one phase per edge for each of the four edge roles
/// of a cell: `(a,m)` and `(a,n)` in the plus graph, `(b,m)` and `(b,n)` in
/// the minus graph. Cell `(a,m,b,n)` transforms by
/// `e1(a,m) - e2(a,n) - e3(b,m) + e4(b,n)`.
#[derive(Clone, Debug)]
pub struct GaugeBasis {
    n_params: usize,
    chars: Vec<Vec<(usize, i64)>>,
    pivots: Vec<usize>,
    /// For each non-pivot cell: the denominator `D` and the integer
    /// coefficients `D·q` over pivot positions.
    relations: Vec<(usize, i64, Vec<i64>)>,
}

impl GaugeBasis {
    pub fn new(c: &CellComplex) -> Self {
        let mut plus_edges: HashMap<(Vertex, Vertex), usize> = HashMap::new();
        let mut minus_edges: HashMap<(Vertex, Vertex), usize> = HashMap::new();
        for &a in &c.even_plus {
            for &m in &c.odd {
                if c.pair.plus().edge(a, m) > 0 {
                    let k = plus_edges.len();
                    plus_edges.insert((a, m), k);
                }
            }
        }
        for &b in &c.even_minus {
            for &m in &c.odd {
                if c.pair.minus().edge(b, m) > 0 {
                    let k = minus_edges.len();
                    minus_edges.insert((b, m), k);
                }
            }
        }
        let (ep, em) = (plus_edges.len(), minus_edges.len());
        let n_params = 2 * ep + 2 * em;
        let chars: Vec<Vec<(usize, i64)>> = c
            .cells
            .iter()
            .map(|cell| {
                vec![
                    (plus_edges[&(cell.a, cell.m)], 1),
                    (ep + plus_edges[&(cell.a, cell.n)], -1),
                    (2 * ep + minus_edges[&(cell.b, cell.m)], -1),
                    (2 * ep + em + minus_edges[&(cell.b, cell.n)], 1),
                ]
            })
            .collect();
        let (pivots, relations) = pivot_relations(&chars, n_params);
        GaugeBasis {
            n_params,
            chars,
            pivots,
            relations,
        }
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    /// Rank of the character matrix.
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Character of a cell as a dense integer vector.
    pub fn character(&self, cell: usize) -> Vec<i64> {
        let mut v = vec![0; self.n_params];
        for &(k, s) in &self.chars[cell] {
            v[k] += s;
        }
        v
    }

    /// Number of phase invariants (one per non-pivot cell).
    pub fn invariant_count(&self) -> usize {
        self.relations.len()
    }

    /// Moduli of every cell followed by the real and imaginary parts of one
    /// gauge-invariant monomial per non-pivot cell.
    pub fn invariants(&self, w: &CellAssignment) -> Vec<f64> {
        let mut out: Vec<f64> = w.values.iter().map(|z| z.norm()).collect();
        for z in self.monomials(w) {
            out.push(z.re);
            out.push(z.im);
        }
        out
    }

    /// `W_c^D · Π_p f(W_p, -D q_p)` with `f(w,k) = w^k` for `k ≥ 0` and
    /// `conj(w)^(-k)` otherwise.
    pub fn monomials(&self, w: &CellAssignment) -> Vec<Complex64> {
        self.relations
            .iter()
            .map(|(cell, d, q)| {
                let mut z = ipow(w.values[*cell], *d);
                for (&p, &k) in self.pivots.iter().zip(q) {
                    if k != 0 {
                        z *= ipow(w.values[p], -k);
                    }
                }
                z
            })
            .collect()
    }

    /// Multiplies each cell by `exp(i χ_c · φ)`.
    pub fn transform(&self, w: &CellAssignment, phases: &[f64]) -> CellAssignment {
        assert_eq!(phases.len(), self.n_params);
        CellAssignment::new(
            w.values
                .iter()
                .zip(&self.chars)
                .map(|(z, ch)| {
                    let t: f64 = ch.iter().map(|&(k, s)| s as f64 * phases[k]).sum();
                    z * Complex64::from_polar(1.0, t)
                })
                .collect(),
        )
    }

    pub fn random_transform<R: Rng + ?Sized>(&self, w: &CellAssignment, rng: &mut R) -> CellAssignment {
        let phases: Vec<f64> = (0..self.n_params)
            .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
            .collect();
        self.transform(w, &phases)
    }

    /// A gauge-equivalent assignment whose pivot cells are real and
    /// non-negative.
    pub fn gauge_fix(&self, w: &CellAssignment) -> CellAssignment {
        if self.pivots.is_empty() {
            return w.clone();
        }
        let chi = DMatrix::from_fn(self.pivots.len(), self.n_params, |r, k| {
            self.chars[self.pivots[r]]
                .iter()
                .filter(|&&(j, _)| j == k)
                .map(|&(_, s)| s as f64)
                .sum()
        });
        let theta = DVector::from_iterator(self.pivots.len(), self.pivots.iter().map(|&p| -w.values[p].arg()));
        let svd = chi.svd(true, true);
        match svd.solve(&theta, 1e-12) {
            Ok(phi) => self.transform(w, phi.as_slice()),
            Err(_) => w.clone(),
        }
    }

    /// Real tangent vectors of the gauge orbit through `w`, one column per
    /// gauge parameter, in the interleaved re/im layout.
    pub fn tangent(&self, w: &CellAssignment) -> DMatrix<f64> {
        let mut t = DMatrix::zeros(2 * w.len(), self.n_params);
        for (c, (z, ch)) in w.values.iter().zip(&self.chars).enumerate() {
            for &(k, s) in ch {
                // d/dφ (z e^{iχφ}) = i χ z
                t[(2 * c, k)] += -(s as f64) * z.im;
                t[(2 * c + 1, k)] += s as f64 * z.re;
            }
        }
        t
    }
}

fn ipow(z: Complex64, k: i64) -> Complex64 {
    if k >= 0 {
        z.powi(k as i32)
    } else {
        z.conj().powi((-k) as i32)
    }
}

/// Greedy exact row reduction: pivots are the cells whose characters are
/// independent of the earlier ones; every other character is written as a
/// rational combination of the pivot characters.
fn pivot_relations(chars: &[Vec<(usize, i64)>], n: usize) -> (Vec<usize>, Vec<(usize, i64, Vec<i64>)>) {
    let q = |x: i64| BigRational::from_integer(BigInt::from(x));
    // reduced rows with their leading column and their expression in pivots
    let mut basis: Vec<(usize, Vec<BigRational>, Vec<BigRational>)> = Vec::new();
    let mut pivots = Vec::new();
    let mut relations = Vec::new();
    for (cell, ch) in chars.iter().enumerate() {
        let mut v = vec![BigRational::zero(); n];
        for &(k, s) in ch {
            v[k] += q(s);
        }
        let mut combo = vec![BigRational::zero(); pivots.len()];
        for (lead, row, rc) in &basis {
            if v[*lead].is_zero() {
                continue;
            }
            let t = v[*lead].clone() / row[*lead].clone();
            for (x, y) in v.iter_mut().zip(row) {
                *x -= &t * y;
            }
            for (x, y) in combo.iter_mut().zip(rc) {
                *x += &t * y;
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(lead) => {
                // v_reduced = χ_cell - Σ combo·pivots
                let mut rc: Vec<BigRational> = combo.iter().map(|x| -x.clone()).collect();
                rc.push(BigRational::one());
                for (_, _, other) in basis.iter_mut() {
                    other.push(BigRational::zero());
                }
                basis.push((lead, v, rc));
                pivots.push(cell);
            }
            None => {
                let d = combo.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                let ints: Vec<i64> = combo
                    .iter()
                    .map(|x| {
                        (x * BigRational::from_integer(d.clone()))
                            .to_integer()
                            .to_i64()
                            .unwrap()
                    })
                    .collect();
                relations.push((cell, d.abs().to_i64().unwrap(), ints));
            }
        }
    }
    (pivots, relations)
}

/// Convenience wrapper building the basis on the fly.
pub fn gauge_invariants(c: &CellComplex, w: &CellAssignment) -> Vec<f64> {
    GaugeBasis::new(c).invariants(w)
}

/// Applies a uniformly random gauge transformation.
pub fn gauge_transform<R: Rng + ?Sized>(c: &CellComplex, w: &CellAssignment, rng: &mut R) -> CellAssignment {
    GaugeBasis::new(c).random_transform(w, rng)
}
