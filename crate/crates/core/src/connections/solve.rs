use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::cells::{Block, CellAssignment, CellComplex};
use super::gauge::GaugeBasis;
use crate::exec::Execution;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Squared Frobenius residual of all unitarity conditions.
pub fn residual(c: &CellComplex, w: &CellAssignment) -> f64 {
    residual_vector(c, &w.to_real()).iter().map(|r| r * r).sum()
}

/// Per-block contributions, `(a,b)` blocks first.
pub fn block_residuals(c: &CellComplex, w: &CellAssignment) -> Vec<f64> {
    let x = w.to_real();
    c.ab_blocks
        .iter()
        .chain(&c.mn_blocks)
        .map(|b| {
            let mut out = Vec::new();
            push_block(b, &x, &mut out, None, 0);
            out.iter().map(|r| r * r).sum()
        })
        .collect()
}

pub(crate) fn residual_vector(c: &CellComplex, x: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for b in c.ab_blocks.iter().chain(&c.mn_blocks) {
        push_block(b, x, &mut out, None, 0);
    }
    out
}

/// Residual vector and its Jacobian with respect to the interleaved real
/// parameters.
pub(crate) fn residual_and_jacobian(c: &CellComplex, x: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
    let rows = residual_len(c);
    let mut jac = DMatrix::zeros(rows, 2 * c.len());
    let mut out = Vec::with_capacity(rows);
    for b in c.ab_blocks.iter().chain(&c.mn_blocks) {
        let start = out.len();
        push_block(b, x, &mut out, Some(&mut jac), start);
    }
    (out, jac)
}

pub(crate) fn residual_len(c: &CellComplex) -> usize {
    c.ab_blocks
        .iter()
        .chain(&c.mn_blocks)
        .map(|b| {
            let (r, k) = (b.rows.len(), b.cols.len());
            2 * r * r + if r == k { 0 } else { 2 * k * k }
        })
        .sum()
}

fn entry(b: &Block, x: &[f64], j: usize, l: usize) -> Complex64 {
    let c = b.cells[j][l];
    let z = Complex64::new(x[2 * c], x[2 * c + 1]) * b.weights[j][l];
    if b.conjugate {
        z.conj()
    } else {
        z
    }
}

/// Appends `XX* - I` (and `X*X - I` when `X` is not square) as re/im pairs.
fn push_block(b: &Block, x: &[f64], out: &mut Vec<f64>, jac: Option<&mut DMatrix<f64>>, start: usize) {
    let (nr, nc) = (b.rows.len(), b.cols.len());
    let m: Vec<Vec<Complex64>> = (0..nr).map(|j| (0..nc).map(|l| entry(b, x, j, l)).collect()).collect();
    for j in 0..nr {
        for k in 0..nr {
            let mut p: Complex64 = (0..nc).map(|l| m[j][l] * m[k][l].conj()).sum();
            if j == k {
                p -= 1.0;
            }
            out.push(p.re);
            out.push(p.im);
        }
    }
    if nr != nc {
        for l in 0..nc {
            for q in 0..nc {
                let mut p: Complex64 = (0..nr).map(|j| m[j][l].conj() * m[j][q]).sum();
                if l == q {
                    p -= 1.0;
                }
                out.push(p.re);
                out.push(p.im);
            }
        }
    }
    let Some(jac) = jac else {
        return;
    };
    // d(entry)/d(re), d(entry)/d(im) for the cell at (j0, l0)
    let derivs = |j0: usize, l0: usize| -> [Complex64; 2] {
        let s = b.weights[j0][l0];
        if b.conjugate {
            [Complex64::new(s, 0.0), -I * s]
        } else {
            [Complex64::new(s, 0.0), I * s]
        }
    };
    let row_of = |j: usize, k: usize| start + 2 * (j * nr + k);
    for j0 in 0..nr {
        for l0 in 0..nc {
            let cell = b.cells[j0][l0];
            for (t, d) in derivs(j0, l0).into_iter().enumerate() {
                let col = 2 * cell + t;
                // P_{jk} = Σ_l X_{jl} conj(X_{kl})
                for k in 0..nr {
                    let v = d * m[k][l0].conj();
                    let r = row_of(j0, k);
                    jac[(r, col)] += v.re;
                    jac[(r + 1, col)] += v.im;
                    let v = m[k][l0] * d.conj();
                    let r = row_of(k, j0);
                    jac[(r, col)] += v.re;
                    jac[(r + 1, col)] += v.im;
                }
                if nr != nc {
                    // Q_{lq} = Σ_j conj(X_{jl}) X_{jq}
                    let base = start + 2 * nr * nr;
                    let qrow = |l: usize, q: usize| base + 2 * (l * nc + q);
                    for q in 0..nc {
                        let v = d.conj() * m[j0][q];
                        let r = qrow(l0, q);
                        jac[(r, col)] += v.re;
                        jac[(r + 1, col)] += v.im;
                        let v = m[j0][q].conj() * d;
                        let r = qrow(q, l0);
                        jac[(r, col)] += v.re;
                        jac[(r + 1, col)] += v.im;
                    }
                }
            }
        }
    }
}

/// Parameters of the Levenberg–Marquardt search.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LmOptions {
    pub max_iter: usize,
    /// Stop once the squared residual is below this.
    pub target: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        LmOptions {
            max_iter: 500,
            target: 1e-28,
        }
    }
}

/// Minimizes the squared residual over the parameters listed in `free`,
/// holding the rest of `x` fixed. Returns the squared residual and the
/// iteration count.
pub(crate) fn levenberg_marquardt(c: &CellComplex, x: &mut [f64], free: &[usize], opts: LmOptions) -> (f64, usize) {
    let select =
        |jac: &DMatrix<f64>| -> DMatrix<f64> { DMatrix::from_fn(jac.nrows(), free.len(), |r, k| jac[(r, free[k])]) };
    let (mut r, jac) = residual_and_jacobian(c, x);
    let mut j = select(&jac);
    let mut cost = 0.5 * r.iter().map(|v| v * v).sum::<f64>();
    let mut a = j.tr_mul(&j);
    let mut g = j.tr_mul(&DVector::from_vec(r.clone()));
    let mut mu = 1e-3 * a.diagonal().max().max(1e-12);
    let mut nu = 2.0;
    let mut iter = 0;
    while iter < opts.max_iter {
        if 2.0 * cost < opts.target || g.amax() < 1e-300 {
            break;
        }
        iter += 1;
        let mut damped = a.clone();
        for i in 0..free.len() {
            damped[(i, i)] += mu;
        }
        let step = match damped.cholesky() {
            Some(ch) => ch.solve(&(-&g)),
            None => {
                mu *= nu;
                nu *= 2.0;
                continue;
            }
        };
        let xnorm: f64 = free.iter().map(|&i| x[i] * x[i]).sum::<f64>().sqrt();
        if step.norm() <= 1e-15 * (xnorm + 1e-15) {
            break;
        }
        let mut trial = x.to_vec();
        for (k, &i) in free.iter().enumerate() {
            trial[i] += step[k];
        }
        let rt = residual_vector(c, &trial);
        let cost_t = 0.5 * rt.iter().map(|v| v * v).sum::<f64>();
        let predicted = 0.5 * step.dot(&(&step * mu - &g));
        let rho = if predicted > 0.0 {
            (cost - cost_t) / predicted
        } else {
            -1.0
        };
        if rho > 0.0 {
            x.copy_from_slice(&trial);
            let (rn, jac) = residual_and_jacobian(c, x);
            r = rn;
            j = select(&jac);
            cost = cost_t;
            a = j.tr_mul(&j);
            g = j.tr_mul(&DVector::from_vec(r.clone()));
            mu *= (1.0f64 / 3.0).max(1.0 - (2.0 * rho - 1.0).powi(3));
            nu = 2.0;
        } else {
            mu *= nu;
            nu *= 2.0;
            if !mu.is_finite() || mu > 1e300 {
                break;
            }
        }
    }
    (2.0 * cost, iter)
}

/// Restart count, tolerance and seed of a connection search.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SolveOptions {
    pub restarts: usize,
    /// A run counts as a solution when its squared residual is below this.
    pub tol: f64,
    pub seed: u64,
    pub lm: LmOptions,
    /// Gauge-fix converged runs and re-solve over real cells when the
    /// gauge-fixed form is real up to rounding.
    pub polish: bool,
    pub execution: Execution,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            restarts: 32,
            tol: 1e-10,
            seed: 0,
            lm: LmOptions::default(),
            polish: true,
            execution: Execution::default(),
        }
    }
}

/// One restart of the solver.
#[derive(Clone, Debug, Serialize)]
pub struct Run {
    pub restart: usize,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Set when the polished solution has real cells.
    pub real_form: bool,
    pub assignment: CellAssignment,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveResult {
    pub runs: Vec<Run>,
    pub best: usize,
    pub tol: f64,
}

impl SolveResult {
    pub fn best_run(&self) -> &Run {
        &self.runs[self.best]
    }

    pub fn best_assignment(&self) -> &CellAssignment {
        &self.runs[self.best].assignment
    }

    pub fn best_residual(&self) -> f64 {
        self.runs[self.best].residual
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.runs.iter().map(|r| r.residual).collect()
    }

    pub fn converged(&self) -> impl Iterator<Item = &Run> {
        self.runs.iter().filter(|r| r.converged)
    }

    pub fn any_converged(&self) -> bool {
        self.runs.iter().any(|r| r.converged)
    }
}

/// Random unit phases with moduli fixed where a block is 1x1 and
/// `1/√k` otherwise.
pub fn initial_guess<R: Rng + ?Sized>(c: &CellComplex, rng: &mut R) -> CellAssignment {
    let values = (0..c.len())
        .map(|cell| {
            let (ka, _, _) = c.cell_ab[cell];
            let (km, _, _) = c.cell_mn[cell];
            let ab = &c.ab_blocks[ka];
            let mn = &c.mn_blocks[km];
            let modulus = if ab.rows.len() == 1 {
                1.0
            } else if mn.rows.len() == 1 && mn.cols.len() == 1 {
                1.0 / c.weight(cell)
            } else {
                1.0 / (ab.rows.len() as f64).sqrt()
            };
            let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            Complex64::from_polar(modulus, theta)
        })
        .collect();
    CellAssignment::new(values)
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

/// Multi-start Levenberg–Marquardt search. Restart `i` draws its initial
/// guess from stream `i` of a ChaCha generator seeded with `seed`, so the
/// result does not depend on the execution mode.
pub fn solve(c: &CellComplex, opts: &SolveOptions) -> SolveResult {
    let basis = opts.polish.then(|| GaugeBasis::new(c));
    let runs = opts.execution.map((0..opts.restarts.max(1)).collect(), |restart| {
        let mut rng = restart_rng(opts.seed, restart);
        let w0 = initial_guess(c, &mut rng);
        let mut x = w0.to_real();
        let free: Vec<usize> = (0..x.len()).collect();
        let (mut res, iterations) = levenberg_marquardt(c, &mut x, &free, opts.lm);
        let mut w = CellAssignment::from_real(&x);
        let mut real_form = false;
        if !w.is_finite() {
            res = f64::INFINITY;
        }
        let converged = res < opts.tol;
        if converged {
            if let Some(basis) = &basis {
                let fixed = basis.gauge_fix(&w);
                let fixed_res = residual(c, &fixed);
                if fixed_res.is_finite() {
                    w = fixed;
                    res = fixed_res;
                }
                if let Some((pw, pres)) = polish_real(c, &w, opts.lm) {
                    if pres <= res {
                        w = pw;
                        res = pres;
                        real_form = true;
                    }
                }
            }
        }
        Run {
            restart,
            residual: res,
            iterations,
            converged: res < opts.tol,
            real_form,
            assignment: w,
        }
    });
    let best = runs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.residual.total_cmp(&b.1.residual))
        .map(|(i, _)| i)
        .unwrap_or(0);
    SolveResult {
        runs,
        best,
        tol: opts.tol,
    }
}

/// Drops imaginary parts below `1e-5` and re-solves over the real parts.
fn polish_real(c: &CellComplex, w: &CellAssignment, lm: LmOptions) -> Option<(CellAssignment, f64)> {
    if w.max_abs_imag() >= 1e-5 {
        return None;
    }
    let mut x: Vec<f64> = w.values.iter().flat_map(|z| [z.re, 0.0]).collect();
    let free: Vec<usize> = (0..c.len()).map(|i| 2 * i).collect();
    let (res, _) = levenberg_marquardt(c, &mut x, &free, lm);
    res.is_finite().then(|| (CellAssignment::from_real(&x), res))
}
