//! Exact norms, Frobenius–Perron dimensions and supertransitivity.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::bigraph::{Bigraph, BigraphPair, Vertex};
use crate::poly::{char_poly, isolate_largest_root, Poly};
use crate::qsqrt5::QSqrt5;

/// Width of the rational enclosure of the largest root.
fn enclosure_width() -> BigRational {
    BigRational::new(1.into(), BigInt::from(1u64 << 50))
}

/// Exact spectral data of one graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralData {
    /// Characteristic polynomial of `M Mᵀ` on the even vertices, in `μ = λ²`,
    /// lowest degree first. `M` is the even-by-odd adjacency matrix.
    pub char_poly: Vec<BigInt>,
    /// `(lo, hi]` containing the largest root and no other root.
    pub norm_sq_interval: (BigRational, BigRational),
    /// Set when the requested target is exactly the largest root.
    pub exact_target: Option<BigInt>,
}

impl SpectralData {
    pub fn poly(&self) -> Poly {
        Poly::from_ints(&self.char_poly)
    }

    pub fn norm_sq_f64(&self) -> f64 {
        let (lo, hi) = &self.norm_sq_interval;
        ((lo + hi) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn is_exactly(&self, n: i64) -> bool {
        self.exact_target.as_ref() == Some(&BigInt::from(n)) || largest_root_is(&self.poly(), n)
    }

    pub fn report(&self) -> NormReport {
        NormReport {
            poly: self.char_poly.iter().map(ToString::to_string).collect(),
            isolating_interval: [self.norm_sq_interval.0.to_string(), self.norm_sq_interval.1.to_string()],
            exact: self.exact_target.as_ref().map(ToString::to_string),
            approx: self.norm_sq_f64(),
        }
    }
}

/// JSON view of [`SpectralData`]; coefficients lowest degree first.
#[derive(Clone, Debug, Serialize)]
pub struct NormReport {
    pub poly: Vec<String>,
    pub isolating_interval: [String; 2],
    pub exact: Option<String>,
    pub approx: f64,
}

/// Integer matrix `M Mᵀ` on the even vertices, in depth-then-index order.
pub fn even_gram_matrix(g: &Bigraph) -> Vec<Vec<BigInt>> {
    let even: Vec<Vertex> = g.vertices().filter(Vertex::is_even).collect();
    even.iter()
        .map(|u| {
            even.iter()
                .map(|v| {
                    let n: u32 = g
                        .neighbors(*u)
                        .iter()
                        .map(|&(w, m)| m as u32 * g.edge(w, *v) as u32)
                        .sum();
                    BigInt::from(n)
                })
                .collect()
        })
        .collect()
}

fn largest_root_is(p: &Poly, t: i64) -> bool {
    let t = BigRational::from_integer(t.into());
    if !p.eval(&t).is_zero() {
        return false;
    }
    p.squarefree().sturm().count_above(&t) == 0
}

/// Exact squared norm of `g`, optionally confirming an integer target.
pub fn norm_squared(g: &Bigraph, target: Option<i64>) -> SpectralData {
    let char_poly = char_poly(&even_gram_matrix(g));
    let p = Poly::from_ints(&char_poly);
    let norm_sq_interval =
        isolate_largest_root(&p, &enclosure_width()).expect("a positive semidefinite Gram matrix has real eigenvalues");
    let exact_target = target.filter(|&t| largest_root_is(&p, t)).map(BigInt::from);
    SpectralData {
        char_poly,
        norm_sq_interval,
        exact_target,
    }
}

/// Whether two graphs have exactly the same largest eigenvalue.
pub fn same_norm(a: &SpectralData, b: &SpectralData) -> bool {
    let (lo, hi) = (
        (&a.norm_sq_interval.0).max(&b.norm_sq_interval.0),
        (&a.norm_sq_interval.1).min(&b.norm_sq_interval.1),
    );
    if lo >= hi {
        return false;
    }
    // a common root inside both isolating intervals is the largest root of each
    let g = a.poly().squarefree().gcd(&b.poly().squarefree());
    g.degree().unwrap_or(0) > 0 && g.sturm().count(lo, hi) > 0
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectralError {
    #[error("dimension equations are inconsistent: {delta} squared is not the exact norm squared")]
    Inconsistent { delta: String },
    #[error("dimension equations are underdetermined (rank {rank} of {unknowns})")]
    Underdetermined { rank: usize, unknowns: usize },
    #[error("vertex {vertex} has non-positive dimension {value}")]
    NonPositive { vertex: Vertex, value: String },
}

/// Frobenius–Perron dimensions with the ★ vertex normalized to 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionVector {
    values: Vec<Vec<QSqrt5>>,
}

impl DimensionVector {
    pub fn get(&self, v: Vertex) -> &QSqrt5 {
        &self.values[v.depth][v.index]
    }

    pub fn layer(&self, depth: usize) -> &[QSqrt5] {
        &self.values[depth]
    }

    pub fn layers(&self) -> &[Vec<QSqrt5>] {
        &self.values
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.values
            .iter()
            .map(|l| l.iter().map(QSqrt5::to_f64).collect())
            .collect()
    }

    /// Largest vertex residual `|δ·d(v) - Σ mult·d(u)|`, computed exactly.
    pub fn residual(&self, g: &Bigraph, delta: &QSqrt5) -> QSqrt5 {
        g.vertices()
            .map(|v| {
                let mut r = delta * self.get(v);
                for (u, m) in g.neighbors(v) {
                    r = r - QSqrt5::from_int(m as i64) * self.get(u);
                }
                r.abs()
            })
            .max()
            .unwrap_or_else(QSqrt5::zero)
    }
}

/// Solves `δ·x_v = Σ_{u~v} mult(u,v)·x_u` exactly with `x_★ = 1`.
pub fn dimension_vector(g: &Bigraph, delta: &QSqrt5) -> Result<DimensionVector, SpectralError> {
    let verts: Vec<Vertex> = g.vertices().collect();
    let n = verts.len();
    let pos = |v: Vertex| verts.iter().position(|&w| w == v).unwrap();
    // unknowns: every vertex except ★ (column j ↔ vertex j + 1); last column is the rhs
    let unknowns = n - 1;
    let mut rows: Vec<Vec<QSqrt5>> = verts
        .iter()
        .map(|&v| {
            let mut row = vec![QSqrt5::zero(); n];
            let mut rhs = QSqrt5::zero();
            let mut put = |w: Vertex, coef: QSqrt5| {
                let j = pos(w);
                if j == 0 {
                    rhs = &rhs - &coef;
                } else {
                    row[j - 1] = &row[j - 1] + &coef;
                }
            };
            put(v, delta.clone());
            for (u, m) in g.neighbors(v) {
                put(u, QSqrt5::from_int(-(m as i64)));
            }
            row[unknowns] = rhs;
            row
        })
        .collect();

    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..unknowns {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].inv().unwrap();
        for x in rows[rank].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if rows[rank..].iter().any(|row| !row[unknowns].is_zero()) {
        return Err(SpectralError::Inconsistent {
            delta: delta.to_string(),
        });
    }
    if rank < unknowns {
        return Err(SpectralError::Underdetermined { rank, unknowns });
    }

    let mut values: Vec<Vec<QSqrt5>> = g.layer_sizes().iter().map(|&s| vec![QSqrt5::zero(); s]).collect();
    values[0][0] = QSqrt5::one();
    for (r, &col) in pivots.iter().enumerate() {
        let v = verts[col + 1];
        values[v.depth][v.index] = rows[r][unknowns].clone();
    }
    let dims = DimensionVector { values };
    for v in g.vertices() {
        if !dims.get(v).is_positive() {
            return Err(SpectralError::NonPositive {
                vertex: v,
                value: dims.get(v).to_string(),
            });
        }
    }
    debug_assert!(dims.residual(g, delta).is_zero());
    Ok(dims)
}

/// Dimension vectors of both graphs at `δ = √5`.
pub fn pair_dimensions(p: &BigraphPair) -> Result<(DimensionVector, DimensionVector), SpectralError> {
    let delta = QSqrt5::sqrt5();
    Ok((
        dimension_vector(p.plus(), &delta)?,
        dimension_vector(p.minus(), &delta)?,
    ))
}

/// Largest `n` such that the truncation to depth `n` is a simple path from ★.
pub fn supertransitivity(g: &Bigraph) -> usize {
    (1..=g.max_depth())
        .take_while(|&d| g.layer_size(d) == 1 && g.multiplicity(Vertex::new(d, 0), 0) == 1)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Bigraph {
        s.parse().unwrap()
    }

    fn rs(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn single_edge_norm_one() {
        let s = norm_squared(&g("bwd1duals1"), Some(1));
        assert_eq!(s.char_poly, rs(&[-1, 1]));
        assert_eq!(s.exact_target, Some(BigInt::from(1)));
    }

    #[test]
    fn five_star_norm_five() {
        let s = norm_squared(&g("bwd1v1p1p1p1duals1v4x3x2x1"), Some(5));
        assert_eq!(s.exact_target, Some(BigInt::from(5)));
        assert!((s.norm_sq_f64() - 5.0).abs() < 1e-12);
        // a wrong target is rejected
        assert_eq!(
            norm_squared(&g("bwd1v1p1p1p1duals1v4x3x2x1"), Some(4)).exact_target,
            None
        );
    }

    #[test]
    fn target_below_largest_root_is_rejected() {
        // path of 3 edges: M Mᵀ = [[1,1],[1,2]], roots (3±√5)/2
        let s = norm_squared(&Bigraph::path(3), Some(1));
        assert_eq!(s.char_poly, rs(&[1, -3, 1]));
        assert!(s.exact_target.is_none());
    }

    #[test]
    fn alternating_a5_cubic_factor() {
        let s = norm_squared(&g("bwd1v1v1v1p1p1v0x0x1p0x0x1duals1v1v1x2x3"), Some(5));
        assert_eq!(s.exact_target, Some(BigInt::from(5)));
        let cubic = Poly::from_i64(&[-10, 17, -8, 1]);
        assert!(s.poly().div_rem(&cubic).1.is_zero());
    }

    #[test]
    fn dihedral_dims() {
        let d = dimension_vector(&g("bwd1v1p1v1x1v1duals1v1x2v1"), &QSqrt5::sqrt5()).unwrap();
        let s5 = QSqrt5::sqrt5();
        let two = QSqrt5::from_int(2);
        let one = QSqrt5::one();
        assert_eq!(
            d.layers(),
            &[
                vec![one.clone()],
                vec![s5.clone()],
                vec![two.clone(), two],
                vec![s5],
                vec![one]
            ]
        );
    }

    #[test]
    fn wrong_delta_is_inconsistent() {
        let err = dimension_vector(&g("bwd1v1p1p1p1duals1v4x3x2x1"), &QSqrt5::from_int(2)).unwrap_err();
        assert!(matches!(err, SpectralError::Inconsistent { .. }));
    }

    #[test]
    fn supertransitivity_values() {
        assert_eq!(supertransitivity(&g("bwd1v1p1p1p1duals1v4x3x2x1")), 1);
        assert_eq!(supertransitivity(&g("bwd1v1v1v1p1p1v0x0x1p0x0x1duals1v1v1x2x3")), 3);
        assert_eq!(supertransitivity(&Bigraph::path(4)), 4);
    }

    #[test]
    fn same_norm_detects_difference() {
        let a = norm_squared(&Bigraph::path(3), None);
        let b = norm_squared(&Bigraph::path(4), None);
        assert!(same_norm(&a, &a));
        assert!(!same_norm(&a, &b));
    }
}
