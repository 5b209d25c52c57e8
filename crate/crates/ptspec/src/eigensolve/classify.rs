//! Classification of raw eigenvalue lists into real levels, conjugate
//! pairs, and numerical artifacts.
//!
//! Order matters and is fixed: artifact screening runs *first*, because a
//! box mode far up the spectrum can carry an imaginary part small enough to
//! pass the reality test while being pure discretization debris. Only
//! entries that survive screening are tested for reality and then paired.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Verdict for a single eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectralClass {
    /// Imaginary part below the scaled tolerance.
    Real,
    /// Member of a conjugate pair; `partner` is the index of the other
    /// member in the same report.
    ConjugatePair { partner: usize },
    /// Numerical artifact: wall-concentrated mode, box-size-dependent
    /// value, or an unpairable complex leftover. Never silently dropped —
    /// always listed with this tag.
    Spurious,
}

/// Thresholds for [`classify_spectrum`]. The reality tolerance is scaled
/// per entry as `tau_real · (1 + |Re E|)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassifyOptions {
    /// Base reality tolerance; `1e-4` for raw matrix output, `1e-7` once
    /// values have been polished by shooting refinement.
    pub tau_real: f64,
    /// Fraction of nodes on *each* side counted as the wall region when
    /// boundary masses are supplied.
    pub boundary_fraction: f64,
    /// Boundary mass above this marks an artifact.
    pub boundary_mass_threshold: f64,
    /// Drift under box enlargement above `drift_factor · tau_real · (1 +
    /// |Re E|)` marks an artifact.
    pub drift_factor: f64,
    /// Trust ceiling on `Re E`; entries above are kept but flagged
    /// unbound. `None` disables the cap.
    pub e_cap: Option<f64>,
    /// Edge of the essential spectrum for families that have one; at or
    /// above it a discrete level cannot exist, so entries there are
    /// flagged unbound.
    pub continuum_edge: Option<f64>,
}

impl ClassifyOptions {
    /// Tolerances for raw matrix eigenvalues.
    pub fn raw() -> Self {
        Self {
            tau_real: 1e-4,
            boundary_fraction: 0.05,
            boundary_mass_threshold: 0.1,
            drift_factor: 100.0,
            e_cap: None,
            continuum_edge: None,
        }
    }

    /// Tighter reality tolerance for shooting-refined values.
    pub fn refined() -> Self {
        Self {
            tau_real: 1e-7,
            ..Self::raw()
        }
    }

    fn scaled_tol(&self, re: f64) -> f64 {
        self.tau_real * (1.0 + re.abs())
    }
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self::raw()
    }
}

/// One classified eigenvalue.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumEntry {
    /// Position in the (re, im)-sorted list.
    pub index: usize,
    pub re: f64,
    pub im: f64,
    pub class: SpectralClass,
    /// Fraction of |ψ|² in the wall regions, when vectors were available.
    pub boundary_mass: Option<f64>,
    /// Distance to the nearest eigenvalue of the enlarged-box spectrum,
    /// when one was supplied.
    pub box_drift: Option<f64>,
    /// Whether the entry sits inside the trusted energy window (below the
    /// continuum edge and the cap). Artifacts are always unbound.
    pub bound: bool,
}

impl SpectrumEntry {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Full classification result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub tau_real: f64,
    pub entries: Vec<SpectrumEntry>,
    pub real_count: usize,
    pub paired_count: usize,
    pub spurious_count: usize,
}

impl SpectrumReport {
    /// Entries that are physical (non-artifact) and inside the trusted
    /// energy window.
    pub fn retained(&self) -> impl Iterator<Item = &SpectrumEntry> {
        self.entries
            .iter()
            .filter(|e| e.bound && e.class != SpectralClass::Spurious)
    }

    /// Retained entries classified as real levels.
    pub fn real_levels(&self) -> impl Iterator<Item = &SpectrumEntry> {
        self.retained().filter(|e| e.class == SpectralClass::Real)
    }
}

/// Classify a raw eigenvalue list.
///
/// `boundary_mass[i]` must correspond to `values[i]` when supplied, as must
/// the ordering of any enlarged-box spectrum (`enlarged` itself need not be
/// aligned; only nearest-distance is used). Entries are re-sorted by
/// `(Re, Im)` internally and the report is in that order.
pub fn classify_spectrum(
    values: &[Complex64],
    boundary_mass: Option<&[f64]>,
    enlarged: Option<&[Complex64]>,
    opts: &ClassifyOptions,
) -> SpectrumReport {
    if let Some(bm) = boundary_mass {
        assert_eq!(
            bm.len(),
            values.len(),
            "one boundary mass per eigenvalue required"
        );
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[a]
            .re
            .total_cmp(&values[b].re)
            .then(values[a].im.total_cmp(&values[b].im))
    });

    let mut entries: Vec<SpectrumEntry> = order
        .iter()
        .enumerate()
        .map(|(index, &src)| {
            let v = values[src];
            let drift = enlarged.map(|es| {
                es.iter()
                    .map(|e| (e - v).norm())
                    .fold(f64::INFINITY, f64::min)
            });
            SpectrumEntry {
                index,
                re: v.re,
                im: v.im,
                class: SpectralClass::Spurious, // placeholder, assigned below
                boundary_mass: boundary_mass.map(|bm| bm[src]),
                box_drift: drift,
                bound: true,
            }
        })
        .collect();

    // Pass 1: artifact screening.
    let mut undecided: Vec<usize> = Vec::new();
    for (i, e) in entries.iter_mut().enumerate() {
        let tol = opts.scaled_tol(e.re);
        let wall_heavy = e
            .boundary_mass
            .map(|m| m > opts.boundary_mass_threshold)
            .unwrap_or(false);
        let drifting = e
            .box_drift
            .map(|d| d > opts.drift_factor * tol)
            .unwrap_or(false);
        if wall_heavy || drifting {
            e.class = SpectralClass::Spurious;
        } else {
            undecided.push(i);
        }
    }

    // Pass 2: reality test on the survivors.
    let mut complex_pool: Vec<usize> = Vec::new();
    for &i in &undecided {
        let tol = opts.scaled_tol(entries[i].re);
        if entries[i].im.abs() < tol {
            entries[i].class = SpectralClass::Real;
        } else {
            complex_pool.push(i);
        }
    }

    // Pass 3: greedy conjugate pairing by |E - conj(E')|, closest first.
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for (a, &i) in complex_pool.iter().enumerate() {
        for &j in &complex_pool[a + 1..] {
            let d = (entries[i].value() - entries[j].value().conj()).norm();
            let tol = opts.scaled_tol(entries[i].re.abs().max(entries[j].re.abs()));
            if d <= tol {
                candidates.push((d, i, j));
            }
        }
    }
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut taken = vec![false; entries.len()];
    for (_, i, j) in candidates {
        if !taken[i] && !taken[j] {
            taken[i] = true;
            taken[j] = true;
            entries[i].class = SpectralClass::ConjugatePair { partner: j };
            entries[j].class = SpectralClass::ConjugatePair { partner: i };
        }
    }
    // Unpairable complex leftovers are artifacts by definition here: a
    // complex level of a conjugation-symmetric problem must have a partner.
    for &i in &complex_pool {
        if !taken[i] && entries[i].class != SpectralClass::Real {
            entries[i].class = SpectralClass::Spurious;
        }
    }

    // Bound flag: trusted energy window, artifacts always excluded.
    for e in &mut entries {
        let above_edge = opts.continuum_edge.map(|c| e.re >= c).unwrap_or(false);
        let above_cap = opts.e_cap.map(|c| e.re > c).unwrap_or(false);
        e.bound = e.class != SpectralClass::Spurious && !above_edge && !above_cap;
    }

    let real_count = entries
        .iter()
        .filter(|e| e.class == SpectralClass::Real)
        .count();
    let paired_count = entries
        .iter()
        .filter(|e| matches!(e.class, SpectralClass::ConjugatePair { .. }))
        .count();
    let spurious_count = entries
        .iter()
        .filter(|e| e.class == SpectralClass::Spurious)
        .count();

    SpectrumReport {
        tau_real: opts.tau_real,
        entries,
        real_count,
        paired_count,
        spurious_count,
    }
}
