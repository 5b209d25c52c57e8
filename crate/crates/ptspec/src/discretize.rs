//! Grids and finite-difference Hamiltonians.
//!
//! Two grid kinds are supported: a symmetric full-line box `[-L, L]` with
//! Dirichlet walls (node count odd so that `x = 0` is a node and the node set
//! is exactly mirror-symmetric), and a half-line box `[ε, L]` with a hard
//! cutoff `ε > 0` shielding a singularity at the origin.
//!
//! `assemble_hamiltonian` discretizes `H = -d²/dx² + V` on the interior nodes
//! (Dirichlet boundary values are eliminated) as a complex *symmetric* banded
//! matrix: bandwidth 1 for the 3-point stencil, 2 for the 5-point stencil.
//! On a symmetric grid with a PT-symmetric potential the assembled matrix
//! satisfies `J·conj(M)·J = M` exactly (J = index reversal), which is the
//! discrete form of PT symmetry; node mirroring is exact by construction so
//! the identity holds at the bit level.

use num_complex::Complex64;
use thiserror::Error;

use crate::potentials::{PotentialError, PotentialSpec};

/// Errors from grid construction and Hamiltonian assembly.
#[derive(Debug, Error)]
pub enum DiscretizeError {
    #[error("invalid grid bounds: x_min = {x_min}, x_max = {x_max} (need finite, x_min < x_max)")]
    InvalidBounds { x_min: f64, x_max: f64 },
    #[error("grid needs at least {min} nodes, got {n}")]
    TooFewNodes { n: usize, min: usize },
    #[error("symmetric full-line grid needs an odd node count so x = 0 is a node, got n = {n}")]
    EvenSymmetricGrid { n: usize },
    #[error("half-line cutoff must be positive, got eps = {eps}")]
    NonPositiveCutoff { eps: f64 },
    #[error("grid bounds {x_min}..{x_max} are neither symmetric about 0 nor strictly positive")]
    UnsupportedBounds { x_min: f64, x_max: f64 },
    #[error("5-point stencil needs at least 5 interior nodes, grid has {m}")]
    StencilTooCoarse { m: usize },
    #[error("potential evaluation failed at node {index} (x = {x}): {source}")]
    PotentialAtNode {
        index: usize,
        x: f64,
        source: PotentialError,
    },
}

/// Grid kind: symmetric Dirichlet box or half-line with cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridKind {
    /// `[-L, L]`, odd node count, exactly mirror-symmetric nodes.
    FullLineBox,
    /// `[eps, x_max]` with `eps > 0`; used for potentials singular at x = 0.
    HalfLineCutoff { eps: f64 },
}

/// A uniform 1D grid with Dirichlet walls at both ends.
///
/// Nodes include the walls; the eigenproblem lives on the `n − 2` interior
/// nodes. Spacing is `h = (x_max − x_min)/(n − 1)`.
#[derive(Debug, Clone)]
pub struct Grid {
    kind: GridKind,
    nodes: Vec<f64>,
    h: f64,
}

impl Grid {
    /// Symmetric full-line box `[-half_width, half_width]` with `n` nodes
    /// (odd, ≥ 3). Nodes are mirrored exactly: `x[n-1-j] == -x[j]`.
    pub fn full_line(half_width: f64, n: usize) -> Result<Self, DiscretizeError> {
        build_grid(-half_width, half_width, n)
    }

    /// Half-line box `[eps, x_max]` with `n` nodes (≥ 3), `0 < eps < x_max`.
    pub fn half_line(eps: f64, x_max: f64, n: usize) -> Result<Self, DiscretizeError> {
        if eps <= 0.0 {
            return Err(DiscretizeError::NonPositiveCutoff { eps });
        }
        build_grid(eps, x_max, n)
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    /// Total node count including the two Dirichlet walls.
    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    /// Interior node count (= matrix order).
    pub fn interior_n(&self) -> usize {
        self.nodes.len() - 2
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn x_min(&self) -> f64 {
        self.nodes[0]
    }

    pub fn x_max(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    /// All nodes, walls included.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Interior nodes (walls stripped).
    pub fn interior_nodes(&self) -> &[f64] {
        &self.nodes[1..self.nodes.len() - 1]
    }

    /// True for the mirror-symmetric full-line kind.
    pub fn is_symmetric(&self) -> bool {
        matches!(self.kind, GridKind::FullLineBox)
    }

    /// Same bounds, doubled resolution (`2n − 1` nodes): every original node
    /// is kept, so Richardson extrapolation pairs levels cleanly.
    pub fn refined(&self) -> Self {
        let n = 2 * self.n() - 1;
        match self.kind {
            GridKind::FullLineBox => Grid::full_line(self.x_max(), n).expect("refined grid"),
            GridKind::HalfLineCutoff { eps } => {
                Grid::half_line(eps, self.x_max(), n).expect("refined grid")
            }
        }
    }

    /// Enlarged box for spurious-state scoring, same node count. Full-line
    /// boxes grow `L → factor·L`; half-line boxes additionally *shrink* the
    /// cutoff `ε → ε/factor`, so states clinging to either wall drift.
    pub fn enlarged(&self, factor: f64) -> Self {
        match self.kind {
            GridKind::FullLineBox => {
                Grid::full_line(self.x_max() * factor, self.n()).expect("enlarged grid")
            }
            GridKind::HalfLineCutoff { eps } => {
                Grid::half_line(eps / factor, self.x_max() * factor, self.n())
                    .expect("enlarged grid")
            }
        }
    }
}

/// Build a grid from raw bounds. Symmetric bounds (`x_min == -x_max`) give a
/// [`GridKind::FullLineBox`] and require odd `n`; strictly positive bounds
/// give a [`GridKind::HalfLineCutoff`]. Anything else is rejected.
pub fn build_grid(x_min: f64, x_max: f64, n: usize) -> Result<Grid, DiscretizeError> {
    if !x_min.is_finite() || !x_max.is_finite() || x_min >= x_max {
        return Err(DiscretizeError::InvalidBounds { x_min, x_max });
    }
    if n < 3 {
        return Err(DiscretizeError::TooFewNodes { n, min: 3 });
    }
    let h = (x_max - x_min) / (n - 1) as f64;
    if x_min == -x_max {
        if n.is_multiple_of(2) {
            return Err(DiscretizeError::EvenSymmetricGrid { n });
        }
        // Mirror the nodes exactly: compute the left half, negate for the
        // right half, pin the center to 0. This makes x[n-1-j] == -x[j] hold
        // bit-for-bit, which downstream PT-symmetry checks rely on.
        let mid = (n - 1) / 2;
        let mut nodes = vec![0.0; n];
        for j in 0..mid {
            let x = x_min + j as f64 * h;
            nodes[j] = x;
            nodes[n - 1 - j] = -x;
        }
        nodes[mid] = 0.0;
        nodes[0] = x_min;
        nodes[n - 1] = x_max;
        Ok(Grid {
            kind: GridKind::FullLineBox,
            nodes,
            h,
        })
    } else if x_min > 0.0 {
        let mut nodes: Vec<f64> = (0..n).map(|j| x_min + j as f64 * h).collect();
        nodes[n - 1] = x_max;
        Ok(Grid {
            kind: GridKind::HalfLineCutoff { eps: x_min },
            nodes,
            h,
        })
    } else {
        Err(DiscretizeError::UnsupportedBounds { x_min, x_max })
    }
}

/// Finite-difference stencil order for the kinetic term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    /// Second-order: `-u″ ≈ (2u_j − u_{j−1} − u_{j+1})/h²`.
    ThreePoint,
    /// Fourth-order: `-u″ ≈ (−u_{j−2} + 16u_{j−1} − 30u_j + 16u_{j+1} − u_{j+2})/(−12h²)`
    /// with the Dirichlet odd-image closure at the two boundary-adjacent rows.
    FivePoint,
}

impl Stencil {
    /// Formal convergence order of box eigenvalues.
    pub fn order(self) -> u32 {
        match self {
            Stencil::ThreePoint => 2,
            Stencil::FivePoint => 4,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Stencil::ThreePoint => "3pt",
            Stencil::FivePoint => "5pt",
        }
    }
}

impl std::str::FromStr for Stencil {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "3pt" | "3" | "three" => Ok(Stencil::ThreePoint),
            "5pt" | "5" | "five" => Ok(Stencil::FivePoint),
            other => Err(format!("unknown stencil '{other}' (expected 3pt or 5pt)")),
        }
    }
}

/// Complex *symmetric* banded matrix (equal to its plain transpose, no
/// conjugation). Only the main diagonal and the upper bands are stored, so
/// symmetry holds by construction. Bandwidth is 1 (tridiagonal) or 2
/// (pentadiagonal).
#[derive(Debug, Clone)]
pub struct ComplexBandedMatrix {
    n: usize,
    /// `bands[k][j] = M[j][j+k]`, `k = 0..=half_bandwidth`, `j = 0..n-k`.
    bands: Vec<Vec<Complex64>>,
}

impl ComplexBandedMatrix {
    /// Zero matrix of order `n` with the given half-bandwidth (1 or 2).
    pub fn zero(n: usize, half_bandwidth: usize) -> Self {
        assert!(
            (1..=2).contains(&half_bandwidth),
            "half-bandwidth must be 1 or 2"
        );
        assert!(n >= 1);
        let bands = (0..=half_bandwidth)
            .map(|k| vec![Complex64::new(0.0, 0.0); n - k.min(n - 1)])
            .collect();
        ComplexBandedMatrix { n, bands }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_bandwidth(&self) -> usize {
        self.bands.len() - 1
    }

    /// Entry `M[i][j]`; zero outside the band, symmetric lookup inside.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let k = hi - lo;
        if k < self.bands.len() {
            self.bands[k][lo]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// Set entry `M[i][j]` (and by symmetry `M[j][i]`). Panics outside band.
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let k = hi - lo;
        assert!(k < self.bands.len(), "entry ({i},{j}) outside band");
        self.bands[k][lo] = v;
    }

    /// Main diagonal.
    pub fn diagonal(&self) -> &[Complex64] {
        &self.bands[0]
    }

    /// `k`-th superdiagonal (`k ≥ 1`).
    pub fn superdiagonal(&self, k: usize) -> &[Complex64] {
        &self.bands[k]
    }

    /// True if every stored entry has zero imaginary part (exact test).
    pub fn is_real(&self) -> bool {
        self.bands
            .iter()
            .flat_map(|b| b.iter())
            .all(|z| z.im == 0.0)
    }

    /// Exact discrete PT-symmetry test: `J·conj(M)·J == M` where `J` is index
    /// reversal, i.e. `M[n−1−i][n−1−j] == conj(M[i][j])` for all entries.
    pub fn is_pt_symmetric(&self) -> bool {
        for (k, band) in self.bands.iter().enumerate() {
            let len = band.len();
            for j in 0..len {
                let mirrored = band[len - 1 - j];
                if band[j] != mirrored.conj() {
                    return false;
                }
            }
            let _ = k;
        }
        true
    }

    /// `y = M·x`.
    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![Complex64::new(0.0, 0.0); self.n];
        for (j, (&d, yj)) in self.bands[0].iter().zip(y.iter_mut()).enumerate() {
            *yj = d * x[j];
        }
        for k in 1..self.bands.len() {
            for (j, &b) in self.bands[k].iter().enumerate() {
                y[j] += b * x[j + k];
                y[j + k] += b * x[j];
            }
        }
        y
    }

    /// Row-sum (infinity) norm.
    pub fn inf_norm(&self) -> f64 {
        let mut row = vec![0.0; self.n];
        for (k, band) in self.bands.iter().enumerate() {
            for (j, &b) in band.iter().enumerate() {
                let a = b.norm();
                row[j] += a;
                if k > 0 {
                    row[j + k] += a;
                }
            }
        }
        row.into_iter().fold(0.0, f64::max)
    }
}

/// Discretize `H = -d²/dx² + V` on the interior nodes of `grid` with Dirichlet
/// walls. Fails with the node location if `V` is singular at a node.
pub fn assemble_hamiltonian(
    spec: &PotentialSpec,
    grid: &Grid,
    stencil: Stencil,
) -> Result<ComplexBandedMatrix, DiscretizeError> {
    let xs = grid.interior_nodes();
    let m = xs.len();
    let h = grid.h();
    let mut v = Vec::with_capacity(m);
    for (i, &x) in xs.iter().enumerate() {
        let vx = spec
            .eval(x)
            .map_err(|source| DiscretizeError::PotentialAtNode {
                index: i + 1,
                x,
                source,
            })?;
        v.push(vx);
    }

    match stencil {
        Stencil::ThreePoint => {
            let mut mtx = ComplexBandedMatrix::zero(m, 1);
            let inv_h2 = 1.0 / (h * h);
            for (j, &vj) in v.iter().enumerate() {
                mtx.bands[0][j] = Complex64::new(2.0 * inv_h2, 0.0) + vj;
            }
            for b in mtx.bands[1].iter_mut() {
                *b = Complex64::new(-inv_h2, 0.0);
            }
            Ok(mtx)
        }
        Stencil::FivePoint => {
            if m < 5 {
                return Err(DiscretizeError::StencilTooCoarse { m });
            }
            let mut mtx = ComplexBandedMatrix::zero(m, 2);
            let c = 1.0 / (12.0 * h * h);
            for (j, &vj) in v.iter().enumerate() {
                mtx.bands[0][j] = Complex64::new(30.0 * c, 0.0) + vj;
            }
            // Dirichlet odd-image closure at the wall-adjacent rows: the ghost
            // node mirrors with a sign (u(x_wall − h) = −u(x_wall + h)), which
            // folds into the diagonal and keeps the matrix symmetric.
            mtx.bands[0][0] -= Complex64::new(c, 0.0);
            mtx.bands[0][m - 1] -= Complex64::new(c, 0.0);
            for b in mtx.bands[1].iter_mut() {
                *b = Complex64::new(-16.0 * c, 0.0);
            }
            for b in mtx.bands[2].iter_mut() {
                *b = Complex64::new(c, 0.0);
            }
            Ok(mtx)
        }
    }
}
