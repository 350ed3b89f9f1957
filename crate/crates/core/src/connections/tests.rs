use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::solve::{residual_and_jacobian, residual_vector};
use super::*;
use crate::catalog::{realized, Realized, GAMMA_5521};
use crate::exec::Execution;
use crate::BigraphPair;

fn complex_of(r: Realized) -> CellComplex {
    build_cells(&realized(r)).unwrap()
}

fn quick(restarts: usize, seed: u64) -> SolveOptions {
    SolveOptions {
        restarts,
        seed,
        ..SolveOptions::default()
    }
}

#[test]
fn block_shapes() {
    let z4 = complex_of(Realized::Z4);
    assert_eq!(z4.max_block(), 4);
    let s = complex_of(Realized::S4S5);
    assert!(s.max_block() <= 3);
    assert_eq!(s.len(), 40);
    let z5 = complex_of(Realized::Z5);
    assert_eq!(z5.max_block(), 1);
    assert_eq!(z5.len(), 25);
}

#[test]
fn every_cell_in_one_block_of_each_kind() {
    for r in Realized::ALL {
        let c = complex_of(r);
        for blocks in [&c.ab_blocks, &c.mn_blocks] {
            let mut seen = vec![0; c.len()];
            for b in blocks.iter() {
                assert_eq!(b.cells.len(), b.rows.len());
                for row in &b.cells {
                    assert_eq!(row.len(), b.cols.len());
                    for &i in row {
                        seen[i] += 1;
                    }
                }
            }
            assert!(seen.iter().all(|&k| k == 1), "{}", r.name());
        }
    }
}

#[test]
fn rejects_multiple_edges() {
    let p = BigraphPair::parse("bwd2duals1", "bwd2duals1").unwrap();
    assert!(matches!(build_cells(&p), Err(ConnectionError::NotSimplyLaced)));
}

fn fourier(c: &CellComplex) -> CellAssignment {
    let w = Complex64::from_polar(1.0, std::f64::consts::TAU / 5.0);
    CellAssignment::new(
        c.cells
            .iter()
            .map(|cell| {
                let i = c.even_plus.iter().position(|&v| v == cell.a).unwrap();
                let j = c.even_minus.iter().position(|&v| v == cell.b).unwrap();
                w.powi((i * j) as i32)
            })
            .collect(),
    )
}

#[test]
fn z5_fourier_matrix_is_a_connection() {
    let c = complex_of(Realized::Z5);
    assert!(residual(&c, &fourier(&c)) < 1e-24);
}

#[test]
fn z5_constant_phases_are_not_a_connection() {
    // all 1x1 blocks are unitary, but the single 5x5 renormalized block is
    // rank one
    let c = complex_of(Realized::Z5);
    let w = CellAssignment::new(vec![Complex64::new(1.0, 0.0); c.len()]);
    assert!(block_residuals(&c, &w)[..c.ab_blocks.len()].iter().all(|&r| r < 1e-24));
    assert!(residual(&c, &w) > 1.0);
}

#[test]
fn scaling_a_cell_breaks_unitarity() {
    let c = complex_of(Realized::Z5);
    let mut w = fourier(&c);
    w.values[3] *= 2.0;
    assert!(residual(&c, &w) > 0.1);
}

#[test]
fn jacobian_matches_finite_differences() {
    for r in [Realized::S4S5, Realized::Z4, Realized::A4A5] {
        let c = complex_of(r);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x = initial_guess(&c, &mut rng).to_real();
        let (_, jac) = residual_and_jacobian(&c, &x);
        let h = 1e-6;
        for k in (0..x.len()).step_by(3) {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[k] += h;
            xm[k] -= h;
            let (rp, rm) = (residual_vector(&c, &xp), residual_vector(&c, &xm));
            for i in 0..rp.len() {
                let fd = (rp[i] - rm[i]) / (2.0 * h);
                assert!((fd - jac[(i, k)]).abs() < 1e-6, "{} row {i} col {k}", r.name());
            }
        }
    }
}

#[test]
fn renormalization_round_trip() {
    let c = complex_of(Realized::S4S5);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let w = initial_guess(&c, &mut rng);
    let back = c.unrenormalize(&c.renormalize(&w));
    for (x, y) in back.values.iter().zip(&w.values) {
        assert!((x - y).norm() < 1e-12);
    }
    // the (m,n) block of w is the plain transpose-free matrix of renormalize(w)
    let rw = c.renormalize(&w);
    for b in &c.mn_blocks {
        let m = b.matrix(&w);
        for (j, row) in b.cells.iter().enumerate() {
            for (l, &cell) in row.iter().enumerate() {
                assert!((m[j][l] - rw.values[cell]).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn z5_solves_on_first_restart() {
    let c = complex_of(Realized::Z5);
    let r = solve(&c, &quick(1, 0));
    assert!(r.runs[0].residual < 1e-24, "{}", r.runs[0].residual);
}

#[test]
fn z5_has_one_orbit_and_nontrivial_invariants() {
    let c = complex_of(Realized::Z5);
    let basis = GaugeBasis::new(&c);
    assert_eq!(basis.invariant_count(), 16);
    let rep = count_gauge_orbits(&c, &quick(6, 1));
    assert_eq!(rep.converged, 6);
    assert_eq!(rep.orbit_count, 1);
    assert!(!rep.continuum);
    // the Fourier oracle is in the same orbit
    let autos = cell_automorphisms(&c);
    assert!(orbit_distance(&basis, &autos, &fourier(&c), &rep.representatives[0]) < 1e-8);
}

#[test]
fn solver_is_deterministic_across_modes() {
    let c = complex_of(Realized::A4A5);
    let mut o = quick(4, 11);
    o.execution = Execution::Sequential;
    let a = solve(&c, &o);
    o.execution = Execution::Parallel;
    let b = solve(&c, &o);
    assert_eq!(a.residuals(), b.residuals());
    assert_eq!(a.best, b.best);
    assert_eq!(a.best_assignment(), b.best_assignment());
}

#[test]
fn s4s5_solutions_form_one_orbit() {
    let c = complex_of(Realized::S4S5);
    let rep = count_gauge_orbits(&c, &quick(8, 5));
    assert!(rep.best_residual < 1e-10);
    assert!(rep.converged >= 4, "{rep:?}");
    assert_eq!(rep.orbit_count, 1);
    assert!(rep.max_spread < 1e-8);
    assert!(!rep.continuum);
}

#[test]
fn z4_solutions_form_a_continuum() {
    let c = complex_of(Realized::Z4);
    let rep = count_gauge_orbits(&c, &quick(8, 2));
    assert!(rep.converged >= 4);
    assert!(rep.orbit_count > 1);
    assert!(rep.moduli.iter().all(|m| m.dimension >= 1));
    assert!(rep.continuum);
}

#[test]
fn z4_centre_block_is_unitary() {
    let c = complex_of(Realized::Z4);
    let r = solve(&c, &quick(4, 9));
    let centre = c.ab_blocks.iter().find(|b| b.rows.len() == 4).unwrap();
    for run in r.converged() {
        let m = centre.matrix(&run.assignment);
        for j in 0..4 {
            for k in 0..4 {
                let p: Complex64 = (0..4).map(|l| m[j][l] * m[k][l].conj()).sum();
                let e = if j == k { 1.0 } else { 0.0 };
                assert!((p - e).norm() < 1e-9);
            }
        }
    }
}

#[test]
fn gamma_5521_has_no_connection_evidence() {
    let p = BigraphPair::parse(GAMMA_5521, GAMMA_5521).unwrap();
    let c = build_cells(&p).unwrap();
    let r = solve(&c, &quick(6, 0));
    assert!(r.best_residual() > 1e-3, "{}", r.best_residual());
}

#[test]
fn gauge_fix_keeps_orbit() {
    let c = complex_of(Realized::S4S5);
    let basis = GaugeBasis::new(&c);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let w = initial_guess(&c, &mut rng);
    let fixed = basis.gauge_fix(&w);
    for &p in basis.pivots() {
        assert!(fixed.values[p].im.abs() < 1e-12 && fixed.values[p].re >= 0.0);
    }
    let (a, b) = (basis.invariants(&w), basis.invariants(&fixed));
    assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-12));
}

#[test]
fn branch_matrix_at_one() {
    let b = branch_matrix(Complex64::new(1.0, 0.0));
    assert!((b.alpha - 1.0).norm() < 1e-15);
    assert!(b.unitarity_defect() < 1e-12);
    // U(1) is real orthogonal, so Tr(UUᵀ) = 4
    assert!((b.f() - 2.0).norm() < 1e-12);
}

#[test]
fn branch_roots() {
    assert_eq!(allowed_eigenvalue_sums().len(), 2);
    let twos = scan_roots(2.0, 2048);
    let thetas: Vec<f64> = twos.iter().map(|r| r.theta).collect();
    assert!(thetas
        .iter()
        .any(|t| t.abs() < 1e-6 || (t - std::f64::consts::TAU).abs() < 1e-6));
    let minus = scan_roots(-1.0, 2048);
    assert!(!minus.is_empty());
    let t0 = 2f64.atan();
    assert!(minus.iter().any(|r| (r.theta - t0).abs() < 1e-6));
    for r in twos.iter().chain(&minus) {
        assert!(r.error < 1e-9);
    }
}

fn unit(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn alpha_has_modulus_one(theta in 0.0..std::f64::consts::TAU) {
        let b = branch_matrix(unit(theta));
        prop_assert!((b.alpha.norm() - 1.0).abs() < 1e-12);
        prop_assert!(b.unitarity_defect() < 1e-9);
    }

    #[test]
    fn residual_is_gauge_covariant(seed in any::<u64>(), which in 0usize..5) {
        let c = complex_of(Realized::ALL[which]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = initial_guess(&c, &mut rng);
        let g = gauge_transform(&c, &w, &mut rng);
        prop_assert!((residual(&c, &w) - residual(&c, &g)).abs() <= 1e-12);
    }

    #[test]
    fn invariants_are_gauge_invariant(seed in any::<u64>(), which in 0usize..5) {
        let c = complex_of(Realized::ALL[which]);
        let basis = GaugeBasis::new(&c);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = initial_guess(&c, &mut rng);
        let g = basis.random_transform(&w, &mut rng);
        let (a, b) = (basis.invariants(&w), basis.invariants(&g));
        prop_assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= 1e-12));
    }
}
