//! Bound-state spectra of one-dimensional Schrödinger operators with complex,
//! PT-symmetric potentials.
//!
//! The Hamiltonian convention is `H = -d²/dx² + V(x)` with `ħ = 1`, `2m = 1`.
//! A potential is PT-symmetric when `V(x) = conj(V(-x))`, i.e. Re V even and
//! Im V odd; such operators can have entirely real discrete spectra even
//! though they are not Hermitian.
//!
//! The crate provides:
//!
//! * [`potentials`] — the built-in potential families (complexified
//!   inverse-power, shifted-quartic, Pöschl–Teller, cubic and quartic
//!   oscillators), superpotentials `W = a + ib` with their SUSY partner pair
//!   `V∓ = W² ∓ W′`, and grid-based symmetry diagnostics.
//! * [`discretize`] — Dirichlet box grids (full-line and half-line with a
//!   cutoff), and 3-point / 5-point finite-difference Hamiltonians stored as
//!   complex symmetric banded matrices.
//! * [`eigensolve`] — two deliberately independent routes to the spectrum: a
//!   dense (or tridiagonal) matrix eigensolver, and a two-sided RK4 shooting
//!   method with complex Newton refinement; plus spectrum classification
//!   (real / conjugate pair / spurious).
//! * [`dynamics`] — Crank–Nicolson propagation with norm, sink and
//!   continuity-defect diagnostics for the non-unitary evolution.
//! * [`analysis`] — well profiling, SUSY partner isospectrality matching, and
//!   the reality "claim check" report combining all of the above.

pub mod analysis;
pub mod discretize;
pub mod dynamics;
pub mod eigensolve;
pub mod potentials;

pub use num_complex::Complex64;
