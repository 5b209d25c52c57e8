//! Potential families, superpotentials and symmetry diagnostics.
//!
//! All potentials use the convention `H = -d²/dx² + V(x)` (`ħ = 1`, `2m = 1`).
//! The built-in families:
//!
//! | family            | `V(x)`                                                          |
//! |-------------------|------------------------------------------------------------------|
//! | `InversePower1`   | `−λ²/x⁴`                                                           |
//! | `InversePower2`   | `2/x² − λ²/x⁴ − 4iλ/x³` (sign of the imaginary term configurable)  |
//! | `ShiftedQuartic1` | `2/(x+i)² − (x+i)⁴`                                                |
//! | `ShiftedQuartic2` | `−4i(x−i) − (x−i)⁴`                                                |
//! | `PoeschlTeller1`  | `μ²/4 − μ²[λ̃(λ̃−1)+1]sech²μx − 2iλμ sech μx tanh μx`               |
//! | `PoeschlTeller2`  | `μ²/4 − μ²λ̃(λ̃−1)sech²μx`                                          |
//! | `CubicOsc`        | `μx² + igx³`                                                       |
//! | `QuarticOsc`      | `ax⁴ + iβx³ + cx² + iδx`                                           |
//!
//! For the Pöschl–Teller families the shape parameter is tied to the coupling
//! by `λ̃(λ̃−1) = λ²/μ² − 1/4`, i.e. `λ̃ = 1/2 + λ/μ`; only `(μ, λ)` are stored
//! and `λ̃` is always recomputed.
//!
//! `InversePower2` is the SUSY descendant of `W = 1/x − iλ/x²`: the partner
//! construction `V = W² − W′` gives the imaginary term `−4iλ/x³`. The sign
//! printed in the source presentation (`+4iλ/x³`) is also evaluable by setting
//! the `im_sign` parameter to `+1`; the derived `−1` is the default because
//! the superpotential construction is authoritative.
//!
//! Superpotentials are `W = a(x) + i b(x)` with real `a, b`; the SUSY partner
//! pair is `V∓ = W² ∓ W′`, sharing spectra except possibly for one zero mode.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::discretize::Grid;

/// Errors from potential construction and evaluation.
#[derive(Debug, Error)]
pub enum PotentialError {
    #[error("potential {family} is singular at x = {x}")]
    SingularPoint { family: String, x: f64 },
    #[error("potential {family} evaluated to a non-finite value at x = {x}")]
    NonFinite { family: String, x: f64 },
    #[error("parameter '{name}' = {value} rejected for {family}: {reason}")]
    InvalidParameter {
        family: String,
        name: String,
        value: f64,
        reason: String,
    },
    #[error("family {family} does not use parameter '{name}'")]
    UnknownParameter { family: String, name: String },
    #[error("symmetry residuals need a mirror-symmetric grid; grid [{x_min}, {x_max}] is not")]
    AsymmetricGrid { x_min: f64, x_max: f64 },
    #[error("sampled superpotential needs at least 3 strictly increasing samples")]
    BadSamples,
    #[error("x = {x} is outside the sampled superpotential range [{lo}, {hi}]")]
    OutOfSampleRange { x: f64, lo: f64, hi: f64 },
}

/// The built-in potential families plus user-supplied closures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialFamily {
    InversePower1,
    InversePower2,
    ShiftedQuartic1,
    ShiftedQuartic2,
    PoeschlTeller1,
    PoeschlTeller2,
    CubicOsc,
    QuarticOsc,
    Custom,
}

impl PotentialFamily {
    /// Stable lowercase identifier used by the CLI and in report headers.
    pub fn slug(self) -> &'static str {
        match self {
            PotentialFamily::InversePower1 => "inverse-power-1",
            PotentialFamily::InversePower2 => "inverse-power-2",
            PotentialFamily::ShiftedQuartic1 => "shifted-quartic-1",
            PotentialFamily::ShiftedQuartic2 => "shifted-quartic-2",
            PotentialFamily::PoeschlTeller1 => "poeschl-teller-1",
            PotentialFamily::PoeschlTeller2 => "poeschl-teller-2",
            PotentialFamily::CubicOsc => "cubic",
            PotentialFamily::QuarticOsc => "quartic",
            PotentialFamily::Custom => "custom",
        }
    }

    /// True for families singular at `x = 0` (half-line families).
    pub fn is_singular_at_origin(self) -> bool {
        matches!(
            self,
            PotentialFamily::InversePower1 | PotentialFamily::InversePower2
        )
    }

    pub fn from_slug(s: &str) -> Option<Self> {
        Some(match s {
            "inverse-power-1" => PotentialFamily::InversePower1,
            "inverse-power-2" => PotentialFamily::InversePower2,
            "shifted-quartic-1" => PotentialFamily::ShiftedQuartic1,
            "shifted-quartic-2" => PotentialFamily::ShiftedQuartic2,
            "poeschl-teller-1" => PotentialFamily::PoeschlTeller1,
            "poeschl-teller-2" => PotentialFamily::PoeschlTeller2,
            "cubic" => PotentialFamily::CubicOsc,
            "quartic" => PotentialFamily::QuarticOsc,
            "custom" => PotentialFamily::Custom,
            _ => return None,
        })
    }
}

impl fmt::Display for PotentialFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

type CustomFn = Arc<dyn Fn(f64) -> Result<Complex64, PotentialError> + Send + Sync>;

/// A fully specified potential: family plus validated real parameters.
///
/// Parameters live in a sorted map so serialized configurations are
/// deterministic. `Custom` potentials carry a closure (e.g. a SUSY partner
/// built from a superpotential) and a human-readable label.
#[derive(Clone)]
pub struct PotentialSpec {
    family: PotentialFamily,
    params: BTreeMap<String, f64>,
    custom: Option<CustomFn>,
    label: String,
}

impl fmt::Debug for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PotentialSpec")
            .field("family", &self.family)
            .field("params", &self.params)
            .field("label", &self.label)
            .finish()
    }
}

fn require_positive(family: PotentialFamily, name: &str, value: f64) -> Result<(), PotentialError> {
    if !value.is_finite() || value <= 0.0 {
        return Err(PotentialError::InvalidParameter {
            family: family.slug().to_string(),
            name: name.to_string(),
            value,
            reason: "must be finite and > 0".to_string(),
        });
    }
    Ok(())
}

fn require_nonnegative(
    family: PotentialFamily,
    name: &str,
    value: f64,
) -> Result<(), PotentialError> {
    if !value.is_finite() || value < 0.0 {
        return Err(PotentialError::InvalidParameter {
            family: family.slug().to_string(),
            name: name.to_string(),
            value,
            reason: "must be finite and >= 0".to_string(),
        });
    }
    Ok(())
}

fn require_finite(family: PotentialFamily, name: &str, value: f64) -> Result<(), PotentialError> {
    if !value.is_finite() {
        return Err(PotentialError::InvalidParameter {
            family: family.slug().to_string(),
            name: name.to_string(),
            value,
            reason: "must be finite".to_string(),
        });
    }
    Ok(())
}

impl PotentialSpec {
    /// `V = −λ²/x⁴` (half-line, singular at 0). `λ > 0`.
    pub fn inverse_power_1(lambda: f64) -> Result<Self, PotentialError> {
        require_positive(PotentialFamily::InversePower1, "lambda", lambda)?;
        Ok(Self::from_parts(
            PotentialFamily::InversePower1,
            [("lambda", lambda)],
        ))
    }

    /// `V = 2/x² − λ²/x⁴ + s·4iλ/x³` with the derived sign `s = −1` by
    /// default (half-line, singular at 0). `λ > 0`.
    pub fn inverse_power_2(lambda: f64) -> Result<Self, PotentialError> {
        Self::inverse_power_2_signed(lambda, -1.0)
    }

    /// `inverse_power_2` with an explicit sign `±1` for the imaginary term.
    pub fn inverse_power_2_signed(lambda: f64, im_sign: f64) -> Result<Self, PotentialError> {
        require_positive(PotentialFamily::InversePower2, "lambda", lambda)?;
        if im_sign != 1.0 && im_sign != -1.0 {
            return Err(PotentialError::InvalidParameter {
                family: PotentialFamily::InversePower2.slug().to_string(),
                name: "im_sign".to_string(),
                value: im_sign,
                reason: "must be +1 or -1".to_string(),
            });
        }
        Ok(Self::from_parts(
            PotentialFamily::InversePower2,
            [("lambda", lambda), ("im_sign", im_sign)],
        ))
    }

    /// `V = 2/(x+i)² − (x+i)⁴` (regular on the whole real line).
    pub fn shifted_quartic_1() -> Self {
        Self::from_parts(PotentialFamily::ShiftedQuartic1, [])
    }

    /// `V = −4i(x−i) − (x−i)⁴` (regular on the whole real line).
    pub fn shifted_quartic_2() -> Self {
        Self::from_parts(PotentialFamily::ShiftedQuartic2, [])
    }

    /// Complex Pöschl–Teller: `μ²/4 − μ²[λ̃(λ̃−1)+1]sech²μx − 2iλμ sech μx tanh μx`
    /// with `λ̃ = 1/2 + λ/μ`. `μ, λ > 0`.
    pub fn poeschl_teller_1(mu: f64, lambda: f64) -> Result<Self, PotentialError> {
        require_positive(PotentialFamily::PoeschlTeller1, "mu", mu)?;
        require_positive(PotentialFamily::PoeschlTeller1, "lambda", lambda)?;
        Ok(Self::from_parts(
            PotentialFamily::PoeschlTeller1,
            [("mu", mu), ("lambda", lambda)],
        ))
    }

    /// Real Pöschl–Teller partner: `μ²/4 − μ²λ̃(λ̃−1)sech²μx`, `λ̃ = 1/2 + λ/μ`.
    pub fn poeschl_teller_2(mu: f64, lambda: f64) -> Result<Self, PotentialError> {
        require_positive(PotentialFamily::PoeschlTeller2, "mu", mu)?;
        require_positive(PotentialFamily::PoeschlTeller2, "lambda", lambda)?;
        Ok(Self::from_parts(
            PotentialFamily::PoeschlTeller2,
            [("mu", mu), ("lambda", lambda)],
        ))
    }

    /// Pöschl–Teller from the shape parameter `λ̃ > 1/2` instead of `λ`.
    pub fn poeschl_teller_1_from_shape(mu: f64, lambda_tilde: f64) -> Result<Self, PotentialError> {
        Self::poeschl_teller_1(mu, mu * (lambda_tilde - 0.5))
    }

    /// Pöschl–Teller partner from the shape parameter `λ̃ > 1/2`.
    pub fn poeschl_teller_2_from_shape(mu: f64, lambda_tilde: f64) -> Result<Self, PotentialError> {
        Self::poeschl_teller_2(mu, mu * (lambda_tilde - 0.5))
    }

    /// `V = μx² + igx³`. `μ, g ≥ 0` (pure `igx³` allowed with `μ = 0`).
    pub fn cubic(mu: f64, g: f64) -> Result<Self, PotentialError> {
        require_nonnegative(PotentialFamily::CubicOsc, "mu", mu)?;
        require_nonnegative(PotentialFamily::CubicOsc, "g", g)?;
        Ok(Self::from_parts(
            PotentialFamily::CubicOsc,
            [("mu", mu), ("g", g)],
        ))
    }

    /// `V = ax⁴ + iβx³ + cx² + iδx`. Requires `a > 0`.
    pub fn quartic(a: f64, beta: f64, c: f64, delta: f64) -> Result<Self, PotentialError> {
        require_positive(PotentialFamily::QuarticOsc, "a", a)?;
        require_finite(PotentialFamily::QuarticOsc, "beta", beta)?;
        require_finite(PotentialFamily::QuarticOsc, "c", c)?;
        require_finite(PotentialFamily::QuarticOsc, "delta", delta)?;
        Ok(Self::from_parts(
            PotentialFamily::QuarticOsc,
            [("a", a), ("beta", beta), ("c", c), ("delta", delta)],
        ))
    }

    /// User-supplied closed-form potential.
    pub fn custom<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> Result<Complex64, PotentialError> + Send + Sync + 'static,
    {
        PotentialSpec {
            family: PotentialFamily::Custom,
            params: BTreeMap::new(),
            custom: Some(Arc::new(f)),
            label: label.into(),
        }
    }

    /// The free particle `V = 0` (useful for box-spectrum checks).
    pub fn free() -> Self {
        Self::custom("free", |_| Ok(Complex64::new(0.0, 0.0)))
    }

    /// The real projection `x ↦ Re V(x)` of this potential, on the same
    /// domain. Used by the claim check to solve the "real part only" problem
    /// with identical grid and solver settings.
    pub fn real_part(&self) -> PotentialSpec {
        let inner = self.clone();
        let label = format!("re[{}]", inner.describe());
        PotentialSpec::custom(label, move |x| {
            inner.eval(x).map(|v| Complex64::new(v.re, 0.0))
        })
    }

    fn from_parts<const N: usize>(family: PotentialFamily, params: [(&str, f64); N]) -> Self {
        PotentialSpec {
            family,
            params: params
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            custom: None,
            label: family.slug().to_string(),
        }
    }

    pub fn family(&self) -> PotentialFamily {
        self.family
    }

    /// Validated parameters (empty for `Custom`).
    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn param(&self, name: &str) -> Result<f64, PotentialError> {
        self.params
            .get(name)
            .copied()
            .ok_or_else(|| PotentialError::UnknownParameter {
                family: self.family.slug().to_string(),
                name: name.to_string(),
            })
    }

    /// Short human-readable identifier (family slug or custom label).
    pub fn describe(&self) -> &str {
        &self.label
    }

    /// Pöschl–Teller shape parameter `λ̃ = 1/2 + λ/μ`, recomputed from the
    /// stored couplings (never stored independently).
    pub fn lambda_tilde(&self) -> Result<f64, PotentialError> {
        match self.family {
            PotentialFamily::PoeschlTeller1 | PotentialFamily::PoeschlTeller2 => {
                Ok(0.5 + self.param("lambda")? / self.param("mu")?)
            }
            _ => Err(PotentialError::UnknownParameter {
                family: self.family.slug().to_string(),
                name: "lambda_tilde".to_string(),
            }),
        }
    }

    /// Evaluate `V(x)`. Singular points or non-finite results are reported as
    /// domain errors — never returned as NaN/inf values.
    pub fn eval(&self, x: f64) -> Result<Complex64, PotentialError> {
        let v = match self.family {
            PotentialFamily::InversePower1 => {
                let lambda = self.params["lambda"];
                self.check_origin(x)?;
                let x2 = x * x;
                Complex64::new(-lambda * lambda / (x2 * x2), 0.0)
            }
            PotentialFamily::InversePower2 => {
                let lambda = self.params["lambda"];
                let im_sign = self.params["im_sign"];
                self.check_origin(x)?;
                let x2 = x * x;
                Complex64::new(
                    2.0 / x2 - lambda * lambda / (x2 * x2),
                    im_sign * 4.0 * lambda / (x2 * x),
                )
            }
            PotentialFamily::ShiftedQuartic1 => {
                let z = Complex64::new(x, 1.0);
                let z2 = z * z;
                Complex64::new(2.0, 0.0) / z2 - z2 * z2
            }
            PotentialFamily::ShiftedQuartic2 => {
                let z = Complex64::new(x, -1.0);
                let z2 = z * z;
                Complex64::new(0.0, -4.0) * z - z2 * z2
            }
            PotentialFamily::PoeschlTeller1 => {
                let mu = self.params["mu"];
                let lambda = self.params["lambda"];
                let lt = 0.5 + lambda / mu;
                let s = sech(mu * x);
                let t = (mu * x).tanh();
                Complex64::new(
                    mu * mu * (0.25 - (lt * (lt - 1.0) + 1.0) * s * s),
                    -2.0 * lambda * mu * s * t,
                )
            }
            PotentialFamily::PoeschlTeller2 => {
                let mu = self.params["mu"];
                let lambda = self.params["lambda"];
                let lt = 0.5 + lambda / mu;
                let s = sech(mu * x);
                Complex64::new(mu * mu * (0.25 - lt * (lt - 1.0) * s * s), 0.0)
            }
            PotentialFamily::CubicOsc => {
                let mu = self.params["mu"];
                let g = self.params["g"];
                Complex64::new(mu * x * x, g * x * x * x)
            }
            PotentialFamily::QuarticOsc => {
                let a = self.params["a"];
                let beta = self.params["beta"];
                let c = self.params["c"];
                let delta = self.params["delta"];
                let x2 = x * x;
                Complex64::new(a * x2 * x2 + c * x2, beta * x2 * x + delta * x)
            }
            PotentialFamily::Custom => {
                let f = self.custom.as_ref().expect("custom potential closure");
                f(x)?
            }
        };
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(PotentialError::NonFinite {
                family: self.label.clone(),
                x,
            });
        }
        Ok(v)
    }

    /// Evaluate on a batch of points.
    pub fn eval_on(&self, xs: &[f64]) -> Result<Vec<Complex64>, PotentialError> {
        xs.iter().map(|&x| self.eval(x)).collect()
    }

    fn check_origin(&self, x: f64) -> Result<(), PotentialError> {
        if x == 0.0 {
            return Err(PotentialError::SingularPoint {
                family: self.family.slug().to_string(),
                x,
            });
        }
        Ok(())
    }
}

fn sech(y: f64) -> f64 {
    1.0 / y.cosh()
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

enum SuperpotentialKind {
    /// Closed-form `a`, `b` and their derivatives.
    Analytic {
        a: RealFn,
        da: RealFn,
        b: RealFn,
        db: RealFn,
        /// True if `a` or `b` is singular at the origin.
        singular_at_origin: bool,
    },
    /// Uniformly sampled `a`, `b`; derivatives by centered differences,
    /// values in between by linear interpolation.
    Sampled {
        x0: f64,
        dx: f64,
        a: Vec<f64>,
        b: Vec<f64>,
    },
}

/// A superpotential `W(x) = a(x) + i b(x)` with real `a`, `b`.
pub struct SuperpotentialSpec {
    kind: SuperpotentialKind,
    label: String,
}

impl fmt::Debug for SuperpotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SuperpotentialSpec")
            .field("label", &self.label)
            .finish()
    }
}

impl SuperpotentialSpec {
    /// Closed-form superpotential from `a`, `a′`, `b`, `b′`.
    pub fn analytic<A, DA, B, DB>(label: impl Into<String>, a: A, da: DA, b: B, db: DB) -> Self
    where
        A: Fn(f64) -> f64 + Send + Sync + 'static,
        DA: Fn(f64) -> f64 + Send + Sync + 'static,
        B: Fn(f64) -> f64 + Send + Sync + 'static,
        DB: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        SuperpotentialSpec {
            kind: SuperpotentialKind::Analytic {
                a: Arc::new(a),
                da: Arc::new(da),
                b: Arc::new(b),
                db: Arc::new(db),
                singular_at_origin: false,
            },
            label: label.into(),
        }
    }

    fn analytic_singular<A, DA, B, DB>(label: impl Into<String>, a: A, da: DA, b: B, db: DB) -> Self
    where
        A: Fn(f64) -> f64 + Send + Sync + 'static,
        DA: Fn(f64) -> f64 + Send + Sync + 'static,
        B: Fn(f64) -> f64 + Send + Sync + 'static,
        DB: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let mut w = Self::analytic(label, a, da, b, db);
        if let SuperpotentialKind::Analytic {
            singular_at_origin, ..
        } = &mut w.kind
        {
            *singular_at_origin = true;
        }
        w
    }

    /// Superpotential from uniform samples of `a` and `b`. Needs at least 3
    /// samples; derivatives use centered differences (one-sided at the ends).
    pub fn from_samples(
        x0: f64,
        dx: f64,
        a: Vec<f64>,
        b: Vec<f64>,
    ) -> Result<Self, PotentialError> {
        let dx_positive = dx > 0.0; // false for NaN as well
        if a.len() < 3 || a.len() != b.len() || !dx_positive || !x0.is_finite() {
            return Err(PotentialError::BadSamples);
        }
        Ok(SuperpotentialSpec {
            kind: SuperpotentialKind::Sampled { x0, dx, a, b },
            label: "sampled".to_string(),
        })
    }

    pub fn describe(&self) -> &str {
        &self.label
    }

    /// `W(x) = a + ib`.
    pub fn w(&self, x: f64) -> Result<Complex64, PotentialError> {
        match &self.kind {
            SuperpotentialKind::Analytic {
                a,
                b,
                singular_at_origin,
                ..
            } => {
                if *singular_at_origin && x == 0.0 {
                    return Err(PotentialError::SingularPoint {
                        family: self.label.clone(),
                        x,
                    });
                }
                Ok(Complex64::new(a(x), b(x)))
            }
            SuperpotentialKind::Sampled { x0, dx, a, b } => {
                let (i, t) = self.sample_index(x, *x0, *dx, a.len())?;
                let lerp = |s: &[f64]| s[i] + t * (s[i + 1] - s[i]);
                Ok(Complex64::new(lerp(a), lerp(b)))
            }
        }
    }

    /// `W′(x) = a′ + ib′`.
    pub fn dw(&self, x: f64) -> Result<Complex64, PotentialError> {
        match &self.kind {
            SuperpotentialKind::Analytic {
                da,
                db,
                singular_at_origin,
                ..
            } => {
                if *singular_at_origin && x == 0.0 {
                    return Err(PotentialError::SingularPoint {
                        family: self.label.clone(),
                        x,
                    });
                }
                Ok(Complex64::new(da(x), db(x)))
            }
            SuperpotentialKind::Sampled { x0, dx, a, b } => {
                let (i, _) = self.sample_index(x, *x0, *dx, a.len())?;
                // centered difference at the nearer sample; one-sided at ends
                let n = a.len();
                let d = |s: &[f64]| -> f64 {
                    if i == 0 {
                        (s[1] - s[0]) / dx
                    } else if i + 1 >= n - 1 {
                        (s[n - 1] - s[n - 2]) / dx
                    } else {
                        (s[i + 1] - s[i - 1]) / (2.0 * dx)
                    }
                };
                Ok(Complex64::new(d(a), d(b)))
            }
        }
    }

    fn sample_index(
        &self,
        x: f64,
        x0: f64,
        dx: f64,
        n: usize,
    ) -> Result<(usize, f64), PotentialError> {
        let hi = x0 + dx * (n - 1) as f64;
        let s = (x - x0) / dx;
        if s < -1e-9 || s > (n - 1) as f64 + 1e-9 {
            return Err(PotentialError::OutOfSampleRange { x, lo: x0, hi });
        }
        let i = (s.floor().max(0.0) as usize).min(n - 2);
        Ok((i, (s - i as f64).clamp(0.0, 1.0)))
    }

    /// `W = 1/x + iλ/x²` — the half-line superpotential behind the
    /// inverse-power families (singular at 0). Its plus branch collapses to
    /// `inverse_power_1` (`−λ²/x⁴`); the minus branch of the conjugate
    /// coupling `W = 1/x − iλ/x²` gives `inverse_power_2` with the derived
    /// `−4iλ/x³` sign.
    pub fn inverse_power(lambda: f64) -> Self {
        Self::analytic_singular(
            format!("w[1/x + i*{lambda}/x^2]"),
            |x: f64| 1.0 / x,
            |x: f64| -1.0 / (x * x),
            move |x: f64| lambda / (x * x),
            move |x: f64| -2.0 * lambda / (x * x * x),
        )
    }

    /// `W = 1/x − iλ/x²` (conjugate coupling of [`Self::inverse_power`]).
    pub fn inverse_power_conjugate(lambda: f64) -> Self {
        Self::inverse_power(-lambda)
    }

    /// `w₁ = 1/(x+i) − i(x+i)²`, generator of `shifted_quartic_1` via the
    /// minus branch.
    pub fn shifted_quartic_1() -> Self {
        // 1/(x+i) = (x - i)/(x²+1); -i(x+i)² = 2x - i(x²-1)
        Self::analytic(
            "w1[1/(x+i) - i(x+i)^2]",
            |x: f64| x / (x * x + 1.0) + 2.0 * x,
            |x: f64| {
                let d = x * x + 1.0;
                (1.0 - x * x) / (d * d) + 2.0
            },
            |x: f64| -1.0 / (x * x + 1.0) - (x * x - 1.0),
            |x: f64| {
                let d = x * x + 1.0;
                2.0 * x / (d * d) - 2.0 * x
            },
        )
    }

    /// `w₂ = −[1/(x−i) − i(x−i)²]`, generator of `shifted_quartic_2` via the
    /// minus branch.
    pub fn shifted_quartic_2() -> Self {
        // 1/(x-i) = (x + i)/(x²+1); -i(x-i)² = -2x - i(x²-1)
        // w₂ = -[ x/(x²+1) - 2x + i(1/(x²+1) - (x²-1)) ]
        Self::analytic(
            "w2[-(1/(x-i) - i(x-i)^2)]",
            |x: f64| -x / (x * x + 1.0) + 2.0 * x,
            |x: f64| {
                let d = x * x + 1.0;
                -(1.0 - x * x) / (d * d) + 2.0
            },
            |x: f64| -1.0 / (x * x + 1.0) + (x * x - 1.0),
            |x: f64| {
                let d = x * x + 1.0;
                2.0 * x / (d * d) + 2.0 * x
            },
        )
    }

    /// `W = (μ/2)tanh μx − iλ sech μx`, generator of the Pöschl–Teller pair:
    /// minus branch → `poeschl_teller_1`, plus branch → `poeschl_teller_2`.
    pub fn poeschl_teller(mu: f64, lambda: f64) -> Self {
        Self::analytic(
            format!("w[(mu/2)tanh - i*lambda*sech], mu={mu}, lambda={lambda}"),
            move |x: f64| 0.5 * mu * (mu * x).tanh(),
            move |x: f64| {
                let s = sech(mu * x);
                0.5 * mu * mu * s * s
            },
            move |x: f64| -lambda * sech(mu * x),
            move |x: f64| lambda * mu * sech(mu * x) * (mu * x).tanh(),
        )
    }

    /// `W = x`, the harmonic superpotential (partners `x² ∓ 1`).
    pub fn linear() -> Self {
        Self::analytic("w[x]", |x| x, |_| 1.0, |_| 0.0, |_| 0.0)
    }
}

/// SUSY partner pair `(V⁻, V⁺) = (W² − W′, W² + W′)` as custom potentials.
///
/// The pair is isospectral except possibly for one unpaired zero mode on the
/// minus side (when `exp(−∫W)` is normalizable).
pub fn susy_partner_pair(w: &Arc<SuperpotentialSpec>) -> (PotentialSpec, PotentialSpec) {
    let minus = {
        let w = Arc::clone(w);
        PotentialSpec::custom(format!("susy-minus[{}]", w.describe()), move |x| {
            let wx = w.w(x)?;
            Ok(wx * wx - w.dw(x)?)
        })
    };
    let plus = {
        let w = Arc::clone(w);
        PotentialSpec::custom(format!("susy-plus[{}]", w.describe()), move |x| {
            let wx = w.w(x)?;
            Ok(wx * wx + w.dw(x)?)
        })
    };
    (minus, plus)
}

/// Sign pattern of `Im V` on the positive half-line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ImSignPattern {
    /// `Im V ≡ 0` (real potential).
    Zero,
    NonNegativeOnPositiveHalfLine,
    NonPositiveOnPositiveHalfLine,
    Mixed,
}

impl fmt::Display for ImSignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ImSignPattern::Zero => "zero",
            ImSignPattern::NonNegativeOnPositiveHalfLine => "non-negative-on-positive-half-line",
            ImSignPattern::NonPositiveOnPositiveHalfLine => "non-positive-on-positive-half-line",
            ImSignPattern::Mixed => "mixed",
        };
        f.write_str(s)
    }
}

/// Grid-based symmetry diagnostics.
///
/// The parity residuals are only meaningful on a mirror-symmetric grid; on a
/// half-line grid they are `None` ("not applicable"), never a silent zero.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SymmetryReport {
    /// `max_j |V(x_j) − conj(V(−x_j))|`, the PT defect.
    pub pt_residual: Option<f64>,
    /// `max_j |Re V(x_j) − Re V(−x_j)|`.
    pub re_even_residual: Option<f64>,
    /// `max_j |Im V(x_j) + Im V(−x_j)|`.
    pub im_odd_residual: Option<f64>,
    pub im_sign_pattern: ImSignPattern,
}

/// Evaluate PT/parity residuals and the `Im V` sign pattern of `spec` on
/// `grid`. Mirror pairs exist exactly on symmetric grids (node construction
/// guarantees `x[n−1−j] == −x[j]`), so the residuals are free of grid error.
pub fn symmetry_report(
    spec: &PotentialSpec,
    grid: &Grid,
) -> Result<SymmetryReport, PotentialError> {
    let xs = grid.nodes();
    let v = spec.eval_on(xs)?;
    let vmax = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let sign_tol = 1e-12 * vmax.max(1.0);

    let mut any_pos = false;
    let mut any_neg = false;
    for (&x, &vx) in xs.iter().zip(v.iter()) {
        if x > 0.0 {
            if vx.im > sign_tol {
                any_pos = true;
            }
            if vx.im < -sign_tol {
                any_neg = true;
            }
        }
    }
    let im_sign_pattern = match (any_pos, any_neg) {
        (false, false) => ImSignPattern::Zero,
        (true, false) => ImSignPattern::NonNegativeOnPositiveHalfLine,
        (false, true) => ImSignPattern::NonPositiveOnPositiveHalfLine,
        (true, true) => ImSignPattern::Mixed,
    };

    if !grid.is_symmetric() {
        return Ok(SymmetryReport {
            pt_residual: None,
            re_even_residual: None,
            im_odd_residual: None,
            im_sign_pattern,
        });
    }

    let n = xs.len();
    let mut pt = 0.0f64;
    let mut re_even = 0.0f64;
    let mut im_odd = 0.0f64;
    for j in 0..n {
        let vj = v[j];
        let vm = v[n - 1 - j]; // V(-x_j), exact mirror node
        pt = pt.max((vj - vm.conj()).norm());
        re_even = re_even.max((vj.re - vm.re).abs());
        im_odd = im_odd.max((vj.im + vm.im).abs());
    }
    Ok(SymmetryReport {
        pt_residual: Some(pt),
        re_even_residual: Some(re_even),
        im_odd_residual: Some(im_odd),
        im_sign_pattern,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inverse_power_1_reference_value() {
        // V(1) = -λ²/1 = -1 for λ = 1
        let v = PotentialSpec::inverse_power_1(1.0)
            .unwrap()
            .eval(1.0)
            .unwrap();
        assert!((v - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn inverse_power_2_derived_and_printed_signs() {
        let derived = PotentialSpec::inverse_power_2(1.0).unwrap();
        let v = derived.eval(2.0).unwrap();
        // 2/4 - 1/16 - 4i/8 = 0.4375 - 0.5i
        assert!((v - c(0.4375, -0.5)).norm() < 1e-15);
        let printed = PotentialSpec::inverse_power_2_signed(1.0, 1.0).unwrap();
        let vp = printed.eval(2.0).unwrap();
        assert!((vp - c(0.4375, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn singular_families_error_at_origin() {
        for spec in [
            PotentialSpec::inverse_power_1(1.0).unwrap(),
            PotentialSpec::inverse_power_2(2.0).unwrap(),
        ] {
            match spec.eval(0.0) {
                Err(PotentialError::SingularPoint { x, .. }) => assert_eq!(x, 0.0),
                other => panic!("expected SingularPoint, got {other:?}"),
            }
        }
    }

    #[test]
    fn shifted_quartic_1_at_origin() {
        // V(0) = 2/(i)² − i⁴ = −2 − 1 = −3
        let v = PotentialSpec::shifted_quartic_1().eval(0.0).unwrap();
        assert!((v - c(-3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn shifted_quartic_2_at_origin() {
        // V(0) = −4i(−i) − (−i)⁴ = −4 − 1 = −5
        let v = PotentialSpec::shifted_quartic_2().eval(0.0).unwrap();
        assert!((v - c(-5.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn poeschl_teller_shape_parameter_recomputed() {
        let spec = PotentialSpec::poeschl_teller_1(1.0, 2.5).unwrap();
        assert!((spec.lambda_tilde().unwrap() - 3.0).abs() < 1e-14);
        let from_shape = PotentialSpec::poeschl_teller_2_from_shape(2.0, 3.0).unwrap();
        assert!((from_shape.param("lambda").unwrap() - 5.0).abs() < 1e-14);
        // constraint λ̃(λ̃−1) = λ²/μ² − 1/4 holds exactly as an identity
        for (mu, lambda) in [(1.0, 2.5), (2.0, 1.0), (0.7, 3.3)] {
            let s = PotentialSpec::poeschl_teller_2(mu, lambda).unwrap();
            let lt = s.lambda_tilde().unwrap();
            assert!(
                (lt * (lt - 1.0) - (lambda * lambda / (mu * mu) - 0.25)).abs() < 1e-12,
                "shape constraint violated for mu={mu}, lambda={lambda}"
            );
        }
    }

    #[test]
    fn poeschl_teller_values_at_origin() {
        // PT1(0) = μ²/4 − μ²[λ̃(λ̃−1)+1] = 0.25 − 7 = −6.75 for μ=1, λ=2.5 (λ̃=3)
        let v1 = PotentialSpec::poeschl_teller_1(1.0, 2.5)
            .unwrap()
            .eval(0.0)
            .unwrap();
        assert!((v1 - c(-6.75, 0.0)).norm() < 1e-14);
        // PT2(0) = 0.25 − 6 = −5.75
        let v2 = PotentialSpec::poeschl_teller_2(1.0, 2.5)
            .unwrap()
            .eval(0.0)
            .unwrap();
        assert!((v2 - c(-5.75, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn cubic_and_quartic_values() {
        let v = PotentialSpec::cubic(1.0, 1.0).unwrap().eval(2.0).unwrap();
        assert!((v - c(4.0, 8.0)).norm() < 1e-15);
        let v = PotentialSpec::quartic(1.0, 1.0, 1.0, 1.0)
            .unwrap()
            .eval(-1.0)
            .unwrap();
        // 1 - i + 1 - i = 2 - 2i
        assert!((v - c(2.0, -2.0)).norm() < 1e-15);
    }

    #[test]
    fn parameter_validation() {
        assert!(PotentialSpec::inverse_power_1(0.0).is_err());
        assert!(PotentialSpec::inverse_power_1(-1.0).is_err());
        assert!(PotentialSpec::poeschl_teller_1(0.0, 1.0).is_err());
        assert!(PotentialSpec::quartic(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(PotentialSpec::cubic(0.0, 1.0).is_ok()); // pure igx³ allowed
        assert!(PotentialSpec::inverse_power_2_signed(1.0, 0.5).is_err());
    }

    fn max_pointwise_diff(spec: &PotentialSpec, f: impl Fn(f64) -> Complex64, xs: &[f64]) -> f64 {
        xs.iter()
            .map(|&x| (spec.eval(x).unwrap() - f(x)).norm())
            .fold(0.0, f64::max)
    }

    /// Deterministic pseudo-random points in (lo, hi), avoiding 0.
    fn sample_points(lo: f64, hi: f64, count: usize) -> Vec<f64> {
        let mut state: u64 = 0x9e3779b97f4a7c15;
        (0..count)
            .map(|_| {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let u = (state >> 11) as f64 / (1u64 << 53) as f64;
                let x = lo + (hi - lo) * u;
                if x.abs() < 1e-3 {
                    x + 1e-2
                } else {
                    x
                }
            })
            .collect()
    }

    #[test]
    fn susy_minus_branch_reproduces_inverse_power_2() {
        // W = 1/x − iλ/x² (conjugate coupling), V⁻ = W² − W′ = 2/x² − λ²/x⁴ − 4iλ/x³
        let w = Arc::new(SuperpotentialSpec::inverse_power_conjugate(1.0));
        let (minus, _) = susy_partner_pair(&w);
        let target = PotentialSpec::inverse_power_2(1.0).unwrap();
        let xs = sample_points(0.05, 8.0, 100);
        let d = xs
            .iter()
            .map(|&x| (minus.eval(x).unwrap() - target.eval(x).unwrap()).norm())
            .fold(0.0, f64::max);
        assert!(d < 1e-10, "6b construction mismatch: {d}");
    }

    #[test]
    fn susy_plus_branch_reproduces_inverse_power_1() {
        // W = 1/x + iλ/x²: V⁺ = W² + W′ = −λ²/x⁴  (the 2/x² and 4iλ/x³ terms cancel)
        let w = Arc::new(SuperpotentialSpec::inverse_power(1.0));
        let (_, plus) = susy_partner_pair(&w);
        let target = PotentialSpec::inverse_power_1(1.0).unwrap();
        let xs = sample_points(0.05, 8.0, 100);
        let d = xs
            .iter()
            .map(|&x| (plus.eval(x).unwrap() - target.eval(x).unwrap()).norm())
            .fold(0.0, f64::max);
        assert!(d < 1e-10, "6a construction mismatch: {d}");
    }

    #[test]
    fn susy_minus_branches_reproduce_shifted_quartics() {
        let w1 = Arc::new(SuperpotentialSpec::shifted_quartic_1());
        let (minus1, _) = susy_partner_pair(&w1);
        let xs = sample_points(-6.0, 6.0, 100);
        let d1 = max_pointwise_diff(
            &minus1,
            |x| PotentialSpec::shifted_quartic_1().eval(x).unwrap(),
            &xs,
        );
        assert!(d1 < 1e-9, "8a construction mismatch: {d1}");

        let w2 = Arc::new(SuperpotentialSpec::shifted_quartic_2());
        let (minus2, _) = susy_partner_pair(&w2);
        let d2 = max_pointwise_diff(
            &minus2,
            |x| PotentialSpec::shifted_quartic_2().eval(x).unwrap(),
            &xs,
        );
        assert!(d2 < 1e-9, "8b construction mismatch: {d2}");
    }

    #[test]
    fn susy_branches_reproduce_poeschl_teller_pair() {
        let (mu, lambda) = (1.0, 2.5);
        let w = Arc::new(SuperpotentialSpec::poeschl_teller(mu, lambda));
        let (minus, plus) = susy_partner_pair(&w);
        let xs = sample_points(-10.0, 10.0, 100);
        let d_minus = max_pointwise_diff(
            &minus,
            |x| {
                PotentialSpec::poeschl_teller_1(mu, lambda)
                    .unwrap()
                    .eval(x)
                    .unwrap()
            },
            &xs,
        );
        let d_plus = max_pointwise_diff(
            &plus,
            |x| {
                PotentialSpec::poeschl_teller_2(mu, lambda)
                    .unwrap()
                    .eval(x)
                    .unwrap()
            },
            &xs,
        );
        assert!(d_minus < 1e-12, "9a construction mismatch: {d_minus}");
        assert!(d_plus < 1e-12, "9b construction mismatch: {d_plus}");
    }

    #[test]
    fn linear_superpotential_gives_harmonic_partners() {
        let w = Arc::new(SuperpotentialSpec::linear());
        let (minus, plus) = susy_partner_pair(&w);
        for x in [-2.0, -0.5, 0.0, 1.0, 3.0] {
            assert!((minus.eval(x).unwrap() - c(x * x - 1.0, 0.0)).norm() < 1e-14);
            assert!((plus.eval(x).unwrap() - c(x * x + 1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn superpotential_derivatives_match_finite_differences() {
        let ws = [
            SuperpotentialSpec::inverse_power(1.3),
            SuperpotentialSpec::shifted_quartic_1(),
            SuperpotentialSpec::shifted_quartic_2(),
            SuperpotentialSpec::poeschl_teller(1.2, 2.0),
            SuperpotentialSpec::linear(),
        ];
        let xs = sample_points(0.3, 4.0, 50);
        let eps = 1e-6;
        for w in &ws {
            for &x in &xs {
                let fd = (w.w(x + eps).unwrap() - w.w(x - eps).unwrap()) / (2.0 * eps);
                let an = w.dw(x).unwrap();
                assert!(
                    (fd - an).norm() < 1e-5 * (1.0 + an.norm()),
                    "derivative mismatch for {} at x={x}",
                    w.describe()
                );
            }
        }
    }

    #[test]
    fn sampled_superpotential_interpolates() {
        // sample W = x + i·x² on [0, 1]
        let n = 101;
        let dx = 0.01;
        let a: Vec<f64> = (0..n).map(|i| i as f64 * dx).collect();
        let b: Vec<f64> = a.iter().map(|x| x * x).collect();
        let w = SuperpotentialSpec::from_samples(0.0, dx, a, b).unwrap();
        let v = w.w(0.505).unwrap();
        assert!((v.re - 0.505).abs() < 1e-12);
        assert!((v.im - 0.505 * 0.505).abs() < 1e-4);
        let d = w.dw(0.5).unwrap();
        assert!((d.re - 1.0).abs() < 1e-9);
        assert!((d.im - 1.0).abs() < 1e-3);
        assert!(w.w(2.0).is_err());
        assert!(SuperpotentialSpec::from_samples(0.0, 0.01, vec![1.0], vec![1.0]).is_err());
    }

    #[test]
    fn symmetry_report_pure_imaginary_cubic() {
        let grid = Grid::full_line(5.0, 501).unwrap();
        let spec = PotentialSpec::cubic(0.0, 1.0).unwrap();
        let rep = symmetry_report(&spec, &grid).unwrap();
        assert_eq!(rep.pt_residual, Some(0.0));
        assert_eq!(rep.re_even_residual, Some(0.0));
        assert_eq!(rep.im_odd_residual, Some(0.0));
        assert_eq!(
            rep.im_sign_pattern,
            ImSignPattern::NonNegativeOnPositiveHalfLine
        );
    }

    #[test]
    fn symmetry_report_even_imaginary_part_breaks_pt() {
        // V = x² + i·x² on [−1, 1]: Im is even, PT residual = 2·max|Im| = 2
        let grid = Grid::full_line(1.0, 201).unwrap();
        let spec = PotentialSpec::custom("x^2 + i x^2", |x| Ok(Complex64::new(x * x, x * x)));
        let rep = symmetry_report(&spec, &grid).unwrap();
        assert!((rep.pt_residual.unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(rep.re_even_residual, Some(0.0));
        assert!((rep.im_odd_residual.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn symmetry_report_poeschl_teller_1() {
        let grid = Grid::full_line(15.0, 1501).unwrap();
        let spec = PotentialSpec::poeschl_teller_1(1.0, 2.5).unwrap();
        let rep = symmetry_report(&spec, &grid).unwrap();
        assert!(rep.pt_residual.unwrap() < 1e-13);
        // Im V = −2λμ sech·tanh < 0 for x > 0
        assert_eq!(
            rep.im_sign_pattern,
            ImSignPattern::NonPositiveOnPositiveHalfLine
        );
    }

    #[test]
    fn symmetry_report_all_builtin_pt_families_have_zero_residual() {
        let grid = Grid::full_line(8.0, 801).unwrap();
        let specs = [
            PotentialSpec::shifted_quartic_1(),
            PotentialSpec::shifted_quartic_2(),
            PotentialSpec::poeschl_teller_1(1.0, 2.5).unwrap(),
            PotentialSpec::poeschl_teller_2(1.0, 2.5).unwrap(),
            PotentialSpec::cubic(1.0, 1.0).unwrap(),
            PotentialSpec::quartic(1.0, 1.0, 1.0, 1.0).unwrap(),
        ];
        for spec in &specs {
            let rep = symmetry_report(spec, &grid).unwrap();
            let vmax: f64 = grid
                .nodes()
                .iter()
                .map(|&x| spec.eval(x).unwrap().norm())
                .fold(0.0, f64::max);
            assert!(
                rep.pt_residual.unwrap() <= 1e-12 * vmax.max(1.0),
                "{} PT residual {} too large",
                spec.describe(),
                rep.pt_residual.unwrap()
            );
        }
    }

    #[test]
    fn symmetry_report_half_line_not_applicable() {
        let grid = Grid::half_line(0.01, 10.0, 500).unwrap();
        let spec = PotentialSpec::inverse_power_2(1.0).unwrap();
        let rep = symmetry_report(&spec, &grid).unwrap();
        assert!(rep.pt_residual.is_none());
        assert!(rep.re_even_residual.is_none());
        assert!(rep.im_odd_residual.is_none());
        // Im V = −4λ/x³ < 0 on the half-line
        assert_eq!(
            rep.im_sign_pattern,
            ImSignPattern::NonPositiveOnPositiveHalfLine
        );
    }

    #[test]
    fn real_part_projection() {
        let spec = PotentialSpec::cubic(1.0, 1.0).unwrap();
        let re = spec.real_part();
        let v = re.eval(2.0).unwrap();
        assert!((v - c(4.0, 0.0)).norm() < 1e-15);
    }
}
