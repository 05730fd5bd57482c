//! Harmonic oscillator on the deformed Heisenberg algebra
//! `[x, p] = iħ(1 + αx² + βp²)`, which has nonzero minimal uncertainties in
//! both position and momentum when `α, β > 0`.
//!
//! With `α = (q−1)/(4L²)` and `β = (q−1)/(4K²)` the algebra is realized by
//! `x = L(b† + b)`, `p = iK(b† − b)` on maths-type q-bosons with
//! `q = (1 + ħ√(αβ)) / (1 − ħ√(αβ))`.
//!
//! Units: `m` mass, `ω` 1/time, `ħ` action, `α` 1/length², `β` 1/momentum²,
//! `L` length, `K` momentum. `q` is dimensionless.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{FockSpace, OperatorLabel, OperatorMatrix};
use crate::qmath::{q_number, QParam};

/// Relative tolerance of the `α = m²ω²β` matching condition.
pub const MATCH_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillatorConfig {
    pub m: f64,
    pub omega: f64,
    pub hbar: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl OscillatorConfig {
    pub fn new(m: f64, omega: f64, hbar: f64, alpha: f64, beta: f64) -> Result<Self> {
        for (name, v) in [("mass", m), ("omega", omega), ("hbar", hbar)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be >= 0, got {v}")));
            }
        }
        if alpha == 0.0 && beta == 0.0 {
            return Err(Error::Domain(
                "alpha = beta = 0 is the undeformed algebra".into(),
            ));
        }
        let cfg = OscillatorConfig {
            m,
            omega,
            hbar,
            alpha,
            beta,
        };
        if cfg.coupling() >= 1.0 {
            return Err(Error::Domain(format!(
                "hbar*sqrt(alpha*beta) = {} must stay below 1",
                cfg.coupling()
            )));
        }
        Ok(cfg)
    }

    /// `ħ√(αβ)`.
    pub fn coupling(&self) -> f64 {
        self.hbar * (self.alpha * self.beta).sqrt()
    }
}

/// `(q, L, K)` parameterization of the strictly deformed case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeformedFrame {
    #[serde(rename = "q", serialize_with = "ser_q")]
    pub qp: QParam,
    /// `L` (length).
    pub length: f64,
    /// `K` (momentum).
    pub momentum: f64,
    /// Minimal position uncertainty `Δx₀ = L√((q−1)/q)`.
    pub dx0: f64,
    /// Minimal momentum uncertainty `Δp₀ = K√((q−1)/q)`.
    pub dp0: f64,
    pub hbar: f64,
}

fn ser_q<S: serde::Serializer>(qp: &QParam, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(qp.q())
}

impl DeformedFrame {
    /// Frame for a given `q` and length scale; `K` follows from `4KL = ħ(1+q)`.
    pub fn from_q_length(qp: QParam, length: f64, hbar: f64) -> Result<Self> {
        if !(length > 0.0 && hbar > 0.0) {
            return Err(Error::Domain("L and hbar must be positive".into()));
        }
        let momentum = hbar * (1.0 + qp.q()) / (4.0 * length);
        Ok(Self::assemble(qp, length, momentum, hbar))
    }

    fn assemble(qp: QParam, length: f64, momentum: f64, hbar: f64) -> Self {
        let shrink = (qp.qm1() / qp.q()).sqrt();
        DeformedFrame {
            qp,
            length,
            momentum,
            dx0: length * shrink,
            dp0: momentum * shrink,
            hbar,
        }
    }

    /// `α = (q−1)/(4L²)`.
    pub fn alpha(&self) -> f64 {
        self.qp.qm1() / (4.0 * self.length * self.length)
    }

    /// `β = (q−1)/(4K²)`.
    pub fn beta(&self) -> f64 {
        self.qp.qm1() / (4.0 * self.momentum * self.momentum)
    }

    /// `|4KL/(ħ(1+q)) − 1|`.
    pub fn frame_identity_residual(&self) -> f64 {
        (4.0 * self.length * self.momentum / (self.hbar * (1.0 + self.qp.q())) - 1.0).abs()
    }

    /// Declared units of each field.
    pub fn units() -> [(&'static str, &'static str); 6] {
        [
            ("q", "dimensionless"),
            ("length", "length"),
            ("momentum", "momentum"),
            ("dx0", "length"),
            ("dp0", "momentum"),
            ("hbar", "action"),
        ]
    }
}

/// `q` from `ħ√(αβ)`, and `L`, `K` from the reparameterization.
pub fn frame_from_alphabeta(cfg: &OscillatorConfig) -> Result<DeformedFrame> {
    if cfg.alpha == 0.0 || cfg.beta == 0.0 {
        return Err(Error::Domain(
            "alpha or beta is zero; use limit_frames for the boundary cases".into(),
        ));
    }
    let s = cfg.coupling();
    let q = (1.0 + s) / (1.0 - s);
    let qp = QParam::new(q)?;
    // q − 1 = 2s/(1 − s), computed without cancellation.
    let qm1 = 2.0 * s / (1.0 - s);
    let length = (qm1 / (4.0 * cfg.alpha)).sqrt();
    let momentum = (qm1 / (4.0 * cfg.beta)).sqrt();
    Ok(DeformedFrame::assemble(qp, length, momentum, cfg.hbar))
}

/// Boundary cases with only one nonzero deformation parameter. `q → 1`
/// there, so instead of a degenerate `QParam` only the surviving minimal
/// uncertainty is reported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum LimitFrame {
    /// `α = 0, β > 0`: `Δx₀ = ħ√β`, no minimal momentum uncertainty.
    MinimalLength { dx0: f64 },
    /// `α > 0, β = 0`: `Δp₀ = ħ√α`, no minimal length.
    MinimalMomentum { dp0: f64 },
}

impl LimitFrame {
    pub fn dx0(&self) -> f64 {
        match *self {
            LimitFrame::MinimalLength { dx0 } => dx0,
            LimitFrame::MinimalMomentum { .. } => 0.0,
        }
    }

    pub fn dp0(&self) -> f64 {
        match *self {
            LimitFrame::MinimalLength { .. } => 0.0,
            LimitFrame::MinimalMomentum { dp0 } => dp0,
        }
    }
}

pub fn limit_frames(cfg: &OscillatorConfig) -> Result<LimitFrame> {
    match (cfg.alpha == 0.0, cfg.beta == 0.0) {
        (true, false) => Ok(LimitFrame::MinimalLength {
            dx0: cfg.hbar * cfg.beta.sqrt(),
        }),
        (false, true) => Ok(LimitFrame::MinimalMomentum {
            dp0: cfg.hbar * cfg.alpha.sqrt(),
        }),
        _ => Err(Error::Domain(
            "limit frames need exactly one of alpha, beta to vanish".into(),
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XpStatistics {
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
}

/// Position and momentum statistics of `|z⟩_q`:
/// `⟨x⟩ = 2L Re z`, `⟨p⟩ = 2K Im z`, `(Δx)² = L²[1 + (q−1)|z|²]`,
/// `(Δp)² = K²[1 + (q−1)|z|²]`.
pub fn xp_statistics(z: Complex64, frame: &DeformedFrame) -> XpStatistics {
    let growth = 1.0 + frame.qp.qm1() * z.norm_sqr();
    XpStatistics {
        mean_x: 2.0 * frame.length * z.re,
        mean_p: 2.0 * frame.momentum * z.im,
        var_x: frame.length * frame.length * growth,
        var_p: frame.momentum * frame.momentum * growth,
    }
}

/// [`xp_statistics`] from Fock-matrix expectations of `x` and `p`.
pub fn xp_statistics_oracle(
    z: Complex64,
    frame: &DeformedFrame,
    dim: usize,
) -> Result<XpStatistics> {
    let fs = FockSpace::new(dim, frame.qp)?;
    let v = crate::coherent::CoherentState::new(z, frame.qp)?.to_vector(dim);
    let (x, p) = fs.position_momentum(frame.length, frame.momentum);
    // For Hermitian A: ⟨A⟩ = v†Av and ⟨A²⟩ = ‖Av‖².
    let moments = |m: &OperatorMatrix| {
        let av = m.matrix() * &v;
        (v.dotc(&av).re, av.norm_squared())
    };
    let (mean_x, x2) = moments(&x);
    let (mean_p, p2) = moments(&p);
    Ok(XpStatistics {
        mean_x,
        mean_p,
        var_x: x2 - mean_x * mean_x,
        var_p: p2 - mean_p * mean_p,
    })
}

/// Relative gap `|LHS − RHS| / RHS` of the generalized uncertainty relation
/// `Δx Δp ≥ ħ/2 {1 + α[(Δx)² + ⟨x⟩²] + β[(Δp)² + ⟨p⟩²]}` on `|z⟩_q`.
pub fn gur_residual(z: Complex64, frame: &DeformedFrame, cfg: &OscillatorConfig) -> Result<f64> {
    if !(cfg.alpha > 0.0 && cfg.beta > 0.0) {
        return Err(Error::Domain(
            "generalized uncertainty check needs alpha, beta > 0".into(),
        ));
    }
    let consistent = |a: f64, b: f64| (a - b).abs() <= 1e-10 * a.abs().max(b.abs());
    if !(consistent(cfg.alpha, frame.alpha()) && consistent(cfg.beta, frame.beta())) {
        return Err(Error::Domain(
            "configuration does not match the deformed frame".into(),
        ));
    }
    let s = xp_statistics(z, frame);
    let lhs = (s.var_x * s.var_p).sqrt();
    let rhs = 0.5
        * cfg.hbar
        * (1.0
            + cfg.alpha * (s.var_x + s.mean_x * s.mean_x)
            + cfg.beta * (s.var_p + s.mean_p * s.mean_p));
    Ok((lhs - rhs).abs() / rhs)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillatorMatch {
    /// `α = m²ω²β` within [`MATCH_TOLERANCE`].
    pub matched: bool,
    /// `ω₀ = √(α/β)/m`, the frequency at which the condition holds.
    pub omega0: f64,
}

pub fn oscillator_condition(cfg: &OscillatorConfig) -> Result<OscillatorMatch> {
    if cfg.beta == 0.0 {
        return Err(Error::Domain("omega0 is undefined for beta = 0".into()));
    }
    let rhs = cfg.m * cfg.m * cfg.omega * cfg.omega * cfg.beta;
    Ok(OscillatorMatch {
        matched: (cfg.alpha - rhs).abs() <= MATCH_TOLERANCE * cfg.alpha.max(rhs),
        omega0: (cfg.alpha / cfg.beta).sqrt() / cfg.m,
    })
}

/// Coefficient `−K²/2m + mω²L²/2` of `(b†)² + b²` in `p²/2m + mω²x²/2`;
/// vanishes under the matching condition.
pub fn pair_coefficient(cfg: &OscillatorConfig, frame: &DeformedFrame) -> f64 {
    let k2 = frame.momentum * frame.momentum / (2.0 * cfg.m);
    let l2 = 0.5 * cfg.m * cfg.omega * cfg.omega * frame.length * frame.length;
    l2 - k2
}

/// `E_n(q) = ¼(1+q)([n]_q + [n+1]_q) ħω`.
pub fn spectrum(n: u64, qp: QParam, hbar_omega: f64) -> Result<f64> {
    Ok(0.25 * (1.0 + qp.q()) * (q_number(n, qp)? + q_number(n + 1, qp)?) * hbar_omega)
}

/// The equivalent form `¼(1+q){(1+q)[n]_q + 1} ħω`.
pub fn spectrum_alt(n: u64, qp: QParam, hbar_omega: f64) -> Result<f64> {
    let q = qp.q();
    Ok(0.25 * (1.0 + q) * ((1.0 + q) * q_number(n, qp)? + 1.0) * hbar_omega)
}

/// Relative disagreement of [`spectrum`] and [`spectrum_alt`].
pub fn spectrum_forms_residual(n: u64, qp: QParam) -> Result<f64> {
    let a = spectrum(n, qp, 1.0)?;
    let b = spectrum_alt(n, qp, 1.0)?;
    Ok((a - b).abs() / a)
}

/// `H = p²/2m + mω²x²/2` assembled from the Fock matrices of `x` and `p`.
pub fn hamiltonian_from_xp(
    fs: &FockSpace,
    cfg: &OscillatorConfig,
    frame: &DeformedFrame,
) -> OperatorMatrix {
    let (x, p) = fs.position_momentum(frame.length, frame.momentum);
    let h = p.matrix() * p.matrix() * Complex64::new(0.5 / cfg.m, 0.0)
        + x.matrix() * x.matrix() * Complex64::new(0.5 * cfg.m * cfg.omega * cfg.omega, 0.0);
    OperatorMatrix::new(OperatorLabel::H, h)
}

/// Sorted eigenvalues of [`hamiltonian_from_xp`].
pub fn matrix_spectrum(fs: &FockSpace, cfg: &OscillatorConfig, frame: &DeformedFrame) -> Vec<f64> {
    let h = hamiltonian_from_xp(fs, cfg, frame).into_matrix();
    let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}
