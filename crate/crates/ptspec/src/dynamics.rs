//! Time propagation and the probability continuity relation.
//!
//! Crank–Nicolson steps `(I + i·dt/2·H)ψ⁺ = (I − i·dt/2·H)ψ` with the
//! 3-point Hamiltonian. The scheme is exactly norm-preserving for real
//! potentials, so any observed change of `N = h·Σ|ψ|²` is attributable to
//! the imaginary part of `V` alone. With the paper-convention split
//! `V = V_R − i·V_I` (i.e. `V_I = −Im V`), the monitored relation is
//!
//! ```text
//! ∂ₜP + ∂ₓS + 2·V_I·P = 0,   P = |ψ|²,   S = 2·Im(ψ*·∂ₓψ)
//! ```
//!
//! integrated form: `dN/dt = sink_integral = −2h·Σ V_I(x_j)·|ψ_j|²`.

use num_complex::Complex64;
use thiserror::Error;

use crate::discretize::{
    assemble_hamiltonian, ComplexBandedMatrix, DiscretizeError, Grid, Stencil,
};
use crate::eigensolve::banded_lu::BandedLu;
use crate::eigensolve::SolveError;
use crate::potentials::{PotentialError, PotentialSpec};

/// Errors from propagation setup or stepping.
#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("time step must be positive and finite, got {dt}")]
    InvalidTimeStep { dt: f64 },
    #[error("at least 2 steps are required for the centered diagnostics, got {got}")]
    TooFewSteps { got: usize },
    #[error("packet width must be positive and finite, got {width}")]
    InvalidPacketWidth { width: f64 },
    #[error("initial state has {got} samples but the grid has {want} interior nodes")]
    StateGridMismatch { got: usize, want: usize },
    #[error("state norm is not positive and finite (N = {norm:.3e})")]
    DegenerateState { norm: f64 },
    #[error("tridiagonal factorization of (I + i·dt/2·H) hit a zero pivot at column {column}")]
    SingularStep { column: usize },
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Discretize(#[from] DiscretizeError),
}

/// Wave function sampled on the interior nodes of a grid (walls are
/// Dirichlet zeros and not stored), with its time stamp.
#[derive(Debug, Clone)]
pub struct WaveState {
    pub psi: Vec<Complex64>,
    pub t: f64,
}

impl WaveState {
    /// `N = h·Σ|ψ_j|²`.
    pub fn norm(&self, h: f64) -> f64 {
        h * self.psi.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }
}

/// Normalized Gaussian packet `exp(−(x−c)²/(2w²) + i·k·x)` on the interior
/// nodes, scaled so `N = 1`.
pub fn gaussian_packet(
    grid: &Grid,
    center: f64,
    width: f64,
    momentum: f64,
) -> Result<WaveState, DynamicsError> {
    if !(width > 0.0 && width.is_finite()) {
        return Err(DynamicsError::InvalidPacketWidth { width });
    }
    let mut psi: Vec<Complex64> = grid
        .interior_nodes()
        .iter()
        .map(|&x| {
            let arg = -((x - center) * (x - center)) / (2.0 * width * width);
            let phase = momentum * x;
            Complex64::new(arg.exp(), 0.0) * Complex64::new(phase.cos(), phase.sin())
        })
        .collect();
    let n = grid.h() * psi.iter().map(|z| z.norm_sqr()).sum::<f64>();
    if !(n > 0.0 && n.is_finite()) {
        return Err(DynamicsError::DegenerateState { norm: n });
    }
    let scale = n.sqrt().recip();
    for z in &mut psi {
        *z *= scale;
    }
    Ok(WaveState { psi, t: 0.0 })
}

/// Per-step diagnostics of a propagation run. Row `k` describes the state
/// at `t = t0 + k·dt`; there are `steps + 1` rows including the initial
/// state.
#[derive(Debug, Clone)]
pub struct TimeSeries {
    pub dt: f64,
    pub t: Vec<f64>,
    /// `N(t) = h·Σ|ψ|²`.
    pub norm: Vec<f64>,
    /// Centered-difference `dN/dt` (one-sided second order at the ends).
    pub dn_dt: Vec<f64>,
    /// `−2h·Σ V_I(x_j)|ψ_j|²` with `V_I = −Im V`.
    pub sink_integral: Vec<f64>,
    /// Max over interior nodes of `|∂ₜP + ∂ₓS + 2·V_I·P|`, centered
    /// differences in both time and space.
    pub max_defect: Vec<f64>,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// Worst integrated continuity violation:
/// `max_k |dN/dt(t_k) − sink_integral(t_k)| / max(N(t_k), 1e−30)`.
pub fn continuity_defect(series: &TimeSeries) -> f64 {
    series
        .dn_dt
        .iter()
        .zip(&series.sink_integral)
        .zip(&series.norm)
        .map(|((d, s), n)| (d - s).abs() / n.max(1e-30))
        .fold(0.0, f64::max)
}

/// Second-order time derivative of a sampled scalar series at index `k`:
/// centered in the interior, one-sided second order at the ends.
fn ddt(values: &[f64], k: usize, dt: f64) -> f64 {
    let last = values.len() - 1;
    if k == 0 {
        (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * dt)
    } else if k == last {
        (3.0 * values[last] - 4.0 * values[last - 1] + values[last - 2]) / (2.0 * dt)
    } else {
        (values[k + 1] - values[k - 1]) / (2.0 * dt)
    }
}

/// Same stencil applied element-wise to three consecutive P-arrays.
fn ddt_pointwise(window: [&[f64]; 3], position: usize, dt: f64) -> Vec<f64> {
    let [a, b, c] = window;
    match position {
        0 => a
            .iter()
            .zip(b)
            .zip(c)
            .map(|((p0, p1), p2)| (-3.0 * p0 + 4.0 * p1 - p2) / (2.0 * dt))
            .collect(),
        2 => a
            .iter()
            .zip(b)
            .zip(c)
            .map(|((p0, p1), p2)| (3.0 * p2 - 4.0 * p1 + p0) / (2.0 * dt))
            .collect(),
        _ => a
            .iter()
            .zip(c)
            .map(|(p0, p2)| (p2 - p0) / (2.0 * dt))
            .collect(),
    }
}

struct DefectProbe {
    h: f64,
    /// `Im V` on interior nodes (note: `2·V_I·P = −2·Im V·P`).
    im_v: Vec<f64>,
}

impl DefectProbe {
    /// `max_j |dP/dt_j + ∂ₓS_j − 2·Im V_j·P_j|` for the state `psi` whose
    /// pointwise time derivative of `P` is `dp_dt`.
    fn max_defect(&self, psi: &[Complex64], dp_dt: &[f64]) -> f64 {
        let n = psi.len();
        let at = |j: isize| -> Complex64 {
            if j < 0 || j as usize >= n {
                Complex64::new(0.0, 0.0) // Dirichlet walls
            } else {
                psi[j as usize]
            }
        };
        // Node current S_j = 2·Im(ψ*_j · (ψ_{j+1} − ψ_{j−1})/(2h)).
        let s = |j: isize| -> f64 {
            if j < 0 || j as usize >= n {
                0.0
            } else {
                let dpsi = (at(j + 1) - at(j - 1)) / (2.0 * self.h);
                2.0 * (at(j).conj() * dpsi).im
            }
        };
        let mut worst = 0.0f64;
        for j in 0..n {
            let ds = (s(j as isize + 1) - s(j as isize - 1)) / (2.0 * self.h);
            let p = psi[j].norm_sqr();
            let defect = dp_dt[j] + ds - 2.0 * self.im_v[j] * p;
            worst = worst.max(defect.abs());
        }
        worst
    }
}

/// Propagate `psi0` for `steps` Crank–Nicolson steps of size `dt` and
/// return the diagnostics and the final state.
///
/// The Hamiltonian is time-independent, so `(I + i·dt/2·H)` is factored
/// once and each step costs one tridiagonal matvec plus one solve.
pub fn crank_nicolson_propagate(
    spec: &PotentialSpec,
    grid: &Grid,
    psi0: &WaveState,
    dt: f64,
    steps: usize,
) -> Result<(TimeSeries, WaveState), DynamicsError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(DynamicsError::InvalidTimeStep { dt });
    }
    if steps < 2 {
        return Err(DynamicsError::TooFewSteps { got: steps });
    }
    let n = grid.interior_n();
    if psi0.psi.len() != n {
        return Err(DynamicsError::StateGridMismatch {
            got: psi0.psi.len(),
            want: n,
        });
    }
    let h = grid.h();
    let n0 = psi0.norm(h);
    if !(n0 > 0.0 && n0.is_finite()) {
        return Err(DynamicsError::DegenerateState { norm: n0 });
    }

    let hamiltonian = assemble_hamiltonian(spec, grid, Stencil::ThreePoint)?;
    let idt2 = Complex64::new(0.0, 0.5 * dt);
    // Left-hand operator I + i·dt/2·H, factored once. BandedLu factors
    // (A − shift·I), so feed A = i·dt/2·H with shift = −1.
    let mut half_h = ComplexBandedMatrix::zero(n, 1);
    for i in 0..n {
        half_h.set(i, i, idt2 * hamiltonian.get(i, i));
        if i + 1 < n {
            half_h.set(i, i + 1, idt2 * hamiltonian.get(i, i + 1));
        }
    }
    let lu = BandedLu::factor(&half_h, Complex64::new(-1.0, 0.0)).map_err(|e| match e {
        SolveError::SingularShift { column } => DynamicsError::SingularStep { column },
        _ => DynamicsError::SingularStep { column: 0 },
    })?;

    let im_v: Vec<f64> = grid
        .interior_nodes()
        .iter()
        .map(|&x| spec.eval(x).map(|v| v.im))
        .collect::<Result<_, _>>()?;
    let probe = DefectProbe { h, im_v };

    let sink_of = |psi: &[Complex64]| -> f64 {
        // −2h·Σ V_I·P = +2h·Σ Im V·P
        2.0 * h
            * psi
                .iter()
                .zip(&probe.im_v)
                .map(|(z, iv)| iv * z.norm_sqr())
                .sum::<f64>()
    };
    let p_of = |psi: &[Complex64]| -> Vec<f64> { psi.iter().map(|z| z.norm_sqr()).collect() };

    let mut t = Vec::with_capacity(steps + 1);
    let mut norm = Vec::with_capacity(steps + 1);
    let mut sink = Vec::with_capacity(steps + 1);
    let mut max_defect = vec![0.0f64; steps + 1];

    let mut psi = psi0.psi.clone();
    t.push(psi0.t);
    norm.push(n0);
    sink.push(sink_of(&psi));

    // Rolling data for pointwise defects: the P-arrays of the last three
    // states, plus the ψ of the previous state (the defect at step k needs
    // ψ_k together with P_{k−1}, P_k, P_{k+1}).
    let psi_first = psi.clone();
    let mut p_window: Vec<Vec<f64>> = vec![p_of(&psi)];
    let mut psi_prev = psi.clone();

    for k in 1..=steps {
        // r = (I − i·dt/2·H)ψ = ψ − (i·dt/2·H)ψ
        let hv = half_h.matvec(&psi);
        let mut rhs: Vec<Complex64> = psi.iter().zip(&hv).map(|(a, b)| a - b).collect();
        lu.solve(&mut rhs);
        psi = rhs;

        t.push(psi0.t + k as f64 * dt);
        norm.push(h * psi.iter().map(|z| z.norm_sqr()).sum::<f64>());
        sink.push(sink_of(&psi));

        p_window.push(p_of(&psi));
        if p_window.len() == 3 {
            // Interior defect for the middle state of the window.
            let dp = ddt_pointwise([&p_window[0], &p_window[1], &p_window[2]], 1, dt);
            max_defect[k - 1] = probe.max_defect(&psi_prev, &dp);
            if k - 1 == 1 {
                // One-sided defect for the very first state.
                let dp0 = ddt_pointwise([&p_window[0], &p_window[1], &p_window[2]], 0, dt);
                max_defect[0] = probe.max_defect(&psi_first, &dp0);
            }
            if k == steps {
                // One-sided defect for the final state.
                let dpk = ddt_pointwise([&p_window[0], &p_window[1], &p_window[2]], 2, dt);
                max_defect[k] = probe.max_defect(&psi, &dpk);
            }
            p_window.remove(0);
        }
        psi_prev.copy_from_slice(&psi);
    }

    let dn_dt: Vec<f64> = (0..=steps).map(|k| ddt(&norm, k, dt)).collect();

    let series = TimeSeries {
        dt,
        t,
        norm,
        dn_dt,
        sink_integral: sink,
        max_defect,
    };
    let final_state = WaveState {
        psi,
        t: psi0.t + steps as f64 * dt,
    };
    Ok((series, final_state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::build_grid;

    fn harmonic() -> PotentialSpec {
        PotentialSpec::cubic(1.0, 0.0).unwrap()
    }

    #[test]
    fn packet_is_normalized_on_grid() {
        let grid = build_grid(-10.0, 10.0, 801).unwrap();
        let psi = gaussian_packet(&grid, 0.0, 1.0, 0.0).unwrap();
        assert!((psi.norm(grid.h()) - 1.0).abs() < 1e-13);
        let moving = gaussian_packet(&grid, 2.0, 0.5, 3.0).unwrap();
        assert!((moving.norm(grid.h()) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn input_validation_errors() {
        let grid = build_grid(-10.0, 10.0, 401).unwrap();
        let psi = gaussian_packet(&grid, 0.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            gaussian_packet(&grid, 0.0, -1.0, 0.0),
            Err(DynamicsError::InvalidPacketWidth { .. })
        ));
        assert!(matches!(
            crank_nicolson_propagate(&harmonic(), &grid, &psi, -0.1, 10),
            Err(DynamicsError::InvalidTimeStep { .. })
        ));
        assert!(matches!(
            crank_nicolson_propagate(&harmonic(), &grid, &psi, 1e-3, 1),
            Err(DynamicsError::TooFewSteps { got: 1 })
        ));
        let short = WaveState {
            psi: psi.psi[..10].to_vec(),
            t: 0.0,
        };
        assert!(matches!(
            crank_nicolson_propagate(&harmonic(), &grid, &short, 1e-3, 10),
            Err(DynamicsError::StateGridMismatch { .. })
        ));
    }

    #[test]
    fn real_potential_is_unitary_over_many_steps() {
        let grid = build_grid(-10.0, 10.0, 601).unwrap();
        let psi = gaussian_packet(&grid, 0.0, 1.0, 0.0).unwrap();
        let (series, _) = crank_nicolson_propagate(&harmonic(), &grid, &psi, 1e-3, 10_000).unwrap();
        let drift = series
            .norm
            .iter()
            .map(|n| (n - 1.0).abs())
            .fold(0.0, f64::max);
        assert!(drift < 1e-10, "norm drift {drift}");
        // Real potential: both dN/dt and sink vanish; defect is tiny.
        assert!(continuity_defect(&series) < 1e-9);
    }

    #[test]
    fn uniform_sink_decays_exponentially() {
        let grid = build_grid(-10.0, 10.0, 801).unwrap();
        let spec = PotentialSpec::custom("uniform sink", |_| Ok(Complex64::new(0.0, -1.0)));
        let psi = gaussian_packet(&grid, 0.0, 1.0, 0.0).unwrap();
        let (series, final_state) =
            crank_nicolson_propagate(&spec, &grid, &psi, 1e-4, 10_000).unwrap();
        let expect = (-2.0f64).exp();
        let got = final_state.norm(grid.h());
        let rel = (got - expect).abs() / expect;
        assert!(rel < 1e-6, "N(1) = {got}, expected {expect}, rel {rel}");
        assert!(continuity_defect(&series) < 1e-6);
        // Sign law: V_I = 1 ≥ 0 everywhere, so N never increases.
        for w in series.norm.windows(2) {
            assert!(w[1] <= w[0] + 1e-10);
        }
    }

    #[test]
    fn off_center_packet_satisfies_continuity_per_step() {
        let spec = PotentialSpec::poeschl_teller_1(1.0, 2.5).unwrap();
        let grid = build_grid(-15.0, 15.0, 1501).unwrap();
        let psi = gaussian_packet(&grid, 2.0, 1.0, 0.0).unwrap();
        let (series, _) = crank_nicolson_propagate(&spec, &grid, &psi, 1e-3, 300).unwrap();
        let defect = continuity_defect(&series);
        assert!(defect < 1e-3, "integrated defect {defect}");
        let local = series.max_defect.iter().copied().fold(0.0, f64::max);
        assert!(local < 1e-3, "pointwise defect {local}");
        // fixed-step time column
        for (k, w) in series.t.windows(2).enumerate() {
            assert!(w[1] > w[0], "t not increasing at {k}");
            assert!(((w[1] - w[0]) - 1e-3).abs() < 1e-12);
        }
    }

    #[test]
    fn pt_symmetric_state_has_balanced_flow_at_start() {
        // PT potential (Im V odd), real even packet: the gain on x<0
        // offsets the loss on x>0, so dN/dt(0) = 0 even though Im V ≠ 0.
        let spec = PotentialSpec::poeschl_teller_1(1.0, 2.5).unwrap();
        let grid = build_grid(-15.0, 15.0, 1501).unwrap();
        let psi = gaussian_packet(&grid, 0.0, 1.0, 0.0).unwrap();
        let (series, _) = crank_nicolson_propagate(&spec, &grid, &psi, 1e-4, 4).unwrap();
        assert!(
            series.dn_dt[0].abs() < 1e-8,
            "dN/dt(0) = {}",
            series.dn_dt[0]
        );
        assert!(series.sink_integral[0].abs() < 1e-12);
    }

    #[test]
    fn absorbing_potential_never_gains_norm() {
        let spec = PotentialSpec::custom("well with absorber", |x: f64| {
            Ok(Complex64::new(x * x, -0.3 * (-x * x).exp()))
        });
        let grid = build_grid(-10.0, 10.0, 601).unwrap();
        let psi = gaussian_packet(&grid, 1.0, 1.0, 0.0).unwrap();
        let (series, _) = crank_nicolson_propagate(&spec, &grid, &psi, 1e-3, 300).unwrap();
        for w in series.norm.windows(2) {
            assert!(w[1] <= w[0] + 1e-10, "norm increased: {} -> {}", w[0], w[1]);
        }
        assert!(series.norm.last().unwrap() < &1.0);
    }
}
