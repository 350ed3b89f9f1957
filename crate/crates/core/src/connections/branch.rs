use num_complex::Complex64;
use serde::Serialize;

/// The one-parameter family of 4x4 centre blocks for the 2222 graph.
#[derive(Clone, Debug, Serialize)]
pub struct BranchMatrix2222 {
    pub eta: Complex64,
    pub alpha: Complex64,
    pub u: [[Complex64; 4]; 4],
}

/// `U(η)` with `α = (√5η - 1)/(√5 - η)`.
pub fn branch_matrix(eta: Complex64) -> BranchMatrix2222 {
    let s = 5f64.sqrt();
    let alpha = (eta * s - 1.0) / (Complex64::new(s, 0.0) - eta);
    let r = |x: f64| Complex64::new(x, 0.0);
    let rows = [
        [r(-1.0), r(s), r(s), r(s)],
        [r(s), -alpha * s, eta * alpha, eta * s],
        [r(s), r(1.0), eta * s, -eta * s],
        [r(s), alpha * s, -alpha * s, r(1.0)],
    ];
    let u = rows.map(|row| row.map(|z| z / 4.0));
    BranchMatrix2222 { eta, alpha, u }
}

impl BranchMatrix2222 {
    /// `Tr(U Uᵀ) - 2` with the plain transpose.
    pub fn f(&self) -> Complex64 {
        let mut t = Complex64::new(0.0, 0.0);
        for row in &self.u {
            for z in row {
                t += z * z;
            }
        }
        t - 2.0
    }

    /// `max |(U U*)_{jk} - δ_{jk}|`.
    pub fn unitarity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..4 {
            for k in 0..4 {
                let mut p: Complex64 = (0..4).map(|l| self.u[j][l] * self.u[k][l].conj()).sum();
                if j == k {
                    p -= 1.0;
                }
                worst = worst.max(p.norm());
            }
        }
        worst
    }
}

pub fn f_value(eta: Complex64) -> Complex64 {
    branch_matrix(eta).f()
}

/// Sums `ω + conj(ω)` over cube roots of unity `ω`, sorted descending.
pub fn allowed_eigenvalue_sums() -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for k in 0..3 {
        let w = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 3.0);
        // rational algebraic integers, so exactly integral
        let s = (w + w.conj()).re.round();
        if out.iter().all(|x| (x - s).abs() > 1e-9) {
            out.push(s);
        }
    }
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// A point on the unit circle where `f(η)` hits a target value.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BranchRoot {
    pub target: f64,
    /// `η = exp(iθ)`, `θ ∈ [0, 2π)`.
    pub theta: f64,
    pub eta: Complex64,
    pub error: f64,
}

fn gap(theta: f64, target: f64) -> f64 {
    (f_value(Complex64::from_polar(1.0, theta)) - target).norm()
}

/// All `θ` with `f(exp(iθ)) = target`, found as zeros of `|f - target|`
/// among the local minima of a uniform scan, refined by golden-section
/// search.
pub fn scan_roots(target: f64, samples: usize) -> Vec<BranchRoot> {
    let tau = std::f64::consts::TAU;
    let h = tau / samples as f64;
    let vals: Vec<f64> = (0..samples).map(|i| gap(i as f64 * h, target)).collect();
    let mut roots: Vec<BranchRoot> = Vec::new();
    for i in 0..samples {
        let prev = vals[(i + samples - 1) % samples];
        let next = vals[(i + 1) % samples];
        if !(vals[i] <= prev && vals[i] <= next) {
            continue;
        }
        let (mut lo, mut hi) = ((i as f64 - 1.0) * h, (i as f64 + 1.0) * h);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let mut x1 = hi - g * (hi - lo);
        let mut x2 = lo + g * (hi - lo);
        let (mut f1, mut f2) = (gap(x1, target), gap(x2, target));
        for _ in 0..200 {
            if hi - lo < 1e-15 {
                break;
            }
            if f1 < f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = gap(x1, target);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = gap(x2, target);
            }
        }
        let mut theta = (0.5 * (lo + hi)).rem_euclid(tau);
        if tau - theta < 1e-12 {
            theta = 0.0;
        }
        let error = gap(theta, target);
        if error > 1e-9 {
            continue;
        }
        let circ = |a: f64, b: f64| {
            let d = (a - b).rem_euclid(tau);
            d.min(tau - d)
        };
        if roots.iter().all(|r| circ(r.theta, theta) > 1e-6) {
            roots.push(BranchRoot {
                target,
                theta,
                eta: Complex64::from_polar(1.0, theta),
                error,
            });
        }
    }
    roots.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    roots
}

/// Roots for every allowed eigenvalue sum.
pub fn allowed_branch_points(samples: usize) -> Vec<BranchRoot> {
    allowed_eigenvalue_sums()
        .into_iter()
        .flat_map(|s| scan_roots(s, samples))
        .collect()
}
