//! Measured grid-convergence orders must match the advertised stencil
//! orders. The harmonic well (exact levels 2k+1 for V = x²) is smooth and
//! deep enough that box truncation error at L = 10 sits far below the
//! discretization error probed here.

use num_complex::Complex64;
use ptspec::discretize::{assemble_hamiltonian, Grid, Stencil};
use ptspec::eigensolve::{dense_eigenvalues, richardson_eigenvalues, DenseOptions};
use ptspec::potentials::PotentialSpec;

fn harmonic() -> PotentialSpec {
    PotentialSpec::custom("harmonic", |x: f64| Ok(Complex64::new(x * x, 0.0)))
}

/// Absolute errors of the lowest levels against 2k+1.
fn harmonic_errors(grid: &Grid, stencil: Stencil, count: usize) -> Vec<f64> {
    let m = assemble_hamiltonian(&harmonic(), grid, stencil).unwrap();
    let s = dense_eigenvalues(&m, &DenseOptions::default()).unwrap();
    (0..count)
        .map(|k| (s.eigenvalues[k].re - (2 * k + 1) as f64).abs())
        .collect()
}

/// log2 of the error ratio under one halving of h: the measured order.
fn measured_orders(grid: &Grid, stencil: Stencil, count: usize) -> Vec<f64> {
    let coarse = harmonic_errors(grid, stencil, count);
    let fine = harmonic_errors(&grid.refined(), stencil, count);
    coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (c / f).log2())
        .collect()
}

#[test]
fn three_point_stencil_is_second_order() {
    let grid = Grid::full_line(10.0, 501).unwrap();
    for (k, p) in measured_orders(&grid, Stencil::ThreePoint, 4)
        .iter()
        .enumerate()
    {
        assert!(
            (1.85..2.15).contains(p),
            "mode {k}: measured order {p}, expected ~2"
        );
    }
}

#[test]
fn five_point_stencil_is_fourth_order() {
    let grid = Grid::full_line(10.0, 301).unwrap();
    for (k, p) in measured_orders(&grid, Stencil::FivePoint, 3)
        .iter()
        .enumerate()
    {
        assert!(
            (3.6..4.4).contains(p),
            "mode {k}: measured order {p}, expected ~4"
        );
    }
}

#[test]
fn richardson_extrapolation_beats_the_fine_grid() {
    let grid = Grid::full_line(10.0, 1001).unwrap();
    let fine_errors = harmonic_errors(&grid.refined(), Stencil::ThreePoint, 4);
    let extrapolated = richardson_eigenvalues(
        &harmonic(),
        &grid,
        Stencil::ThreePoint,
        4,
        &DenseOptions::default(),
    )
    .unwrap();
    for (k, e) in extrapolated.iter().enumerate() {
        let err = (e.re - (2 * k + 1) as f64).abs();
        assert!(
            err < fine_errors[k] / 10.0,
            "mode {k}: extrapolated error {err:.3e} not well below fine-grid {:.3e}",
            fine_errors[k]
        );
        assert!(err < 1e-7, "mode {k}: extrapolated error {err:.3e}");
    }
}
