//! Oracles used by the acceptance gate. Each one recomputes a quantity by a
//! method unrelated to the library's own code path.

use num_complex::Complex64;
use subfactor_index5::{Bigraph, DimensionVector, QSqrt5, Vertex};

/// `M Mᵀ` where `M` is the even-by-odd adjacency matrix.
pub fn even_gram(g: &Bigraph) -> Vec<Vec<i64>> {
    let verts: Vec<Vertex> = g.vertices().collect();
    let even: Vec<Vertex> = verts.iter().copied().filter(|v| v.depth % 2 == 0).collect();
    let odd: Vec<Vertex> = verts.iter().copied().filter(|v| v.depth % 2 == 1).collect();
    let m: Vec<Vec<i64>> = even
        .iter()
        .map(|&a| odd.iter().map(|&o| g.edge(a, o) as i64).collect())
        .collect();
    (0..even.len())
        .map(|i| {
            (0..even.len())
                .map(|j| (0..odd.len()).map(|k| m[i][k] * m[j][k]).sum())
                .collect()
        })
        .collect()
}

/// `det(t I - A)` by fraction-free (Bareiss) elimination.
pub fn shifted_det(a: &[Vec<i64>], t: i64) -> i128 {
    let n = a.len();
    let mut m: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (if i == j { t } else { 0 }) as i128 - a[i][j] as i128)
                .collect()
        })
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * m[n - 1][n - 1]
    }
}

/// Largest eigenvalue of a symmetric non-negative matrix by power iteration.
pub fn largest_eigenvalue(a: &[Vec<i64>]) -> f64 {
    let n = a.len();
    let mut x = vec![1.0; n];
    let mut lambda = 0.0;
    for _ in 0..100_000 {
        // shift by the identity so the iteration cannot oscillate
        let y: Vec<f64> = (0..n)
            .map(|i| x[i] + (0..n).map(|j| a[i][j] as f64 * x[j]).sum::<f64>())
            .collect();
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        let next = norm / x.iter().map(|v| v * v).sum::<f64>().sqrt() - 1.0;
        x = y.iter().map(|v| v / norm).collect();
        if (next - lambda).abs() < 1e-15 {
            return next;
        }
        lambda = next;
    }
    lambda
}

/// Whether `dims` is a positive eigenvector of the adjacency matrix with
/// eigenvalue `delta`, normalized at ★. Checked exactly.
pub fn is_pf_eigenvector(g: &Bigraph, dims: &DimensionVector, delta: &QSqrt5) -> bool {
    if dims.get(Vertex::new(0, 0)) != &QSqrt5::one() {
        return false;
    }
    g.vertices().all(|v| {
        let lhs = g
            .vertices()
            .filter(|w| w.depth + 1 == v.depth || v.depth + 1 == w.depth)
            .fold(QSqrt5::zero(), |acc, w| {
                acc + QSqrt5::from_int(g.edge(v, w) as i64) * dims.get(w).clone()
            });
        dims.get(v).is_positive() && lhs == delta.clone() * dims.get(v).clone()
    })
}

/// `Tr(U Uᵀ) - 2` for the 2222 branch matrix, written out entry by entry.
pub fn branch_f(eta: Complex64) -> Complex64 {
    let s = Complex64::new(5f64.sqrt(), 0.0);
    let one = Complex64::new(1.0, 0.0);
    let alpha = (s * eta - one) / (s - eta);
    let u = [
        [-one, s, s, s],
        [s, -s * alpha, eta * alpha, s * eta],
        [s, one, s * eta, -s * eta],
        [s, s * alpha, -s * alpha, one],
    ];
    let mut trace = Complex64::new(0.0, 0.0);
    for i in 0..4 {
        for k in 0..4 {
            // (U Uᵀ)_{ii} = Σ_k U_ik U_ik
            trace += (u[i][k] / 4.0) * (u[i][k] / 4.0);
        }
    }
    trace - 2.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_small_cases() {
        assert_eq!(shifted_det(&[vec![2, 1], vec![1, 2]], 3), 0);
        assert_eq!(shifted_det(&[vec![2, 1], vec![1, 2]], 0), 3);
        assert_eq!(shifted_det(&[vec![0, 0], vec![0, 0]], 2), 4);
    }

    #[test]
    fn power_iteration_on_path() {
        // A3 path: eigenvalues of M Mᵀ on the two ends are {0, 2}
        let g: Bigraph = "bwd1v1duals1v1".parse().unwrap();
        assert!((largest_eigenvalue(&even_gram(&g)) - 2.0).abs() < 1e-12);
    }
}
