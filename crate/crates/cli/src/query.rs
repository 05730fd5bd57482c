//! Single-point observable evaluation with metadata.

use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use qcoherent::coherent::{self, oracle, CoherentState};
use qcoherent::oscillator::{self, frame_from_alphabeta, OscillatorConfig};
use qcoherent::qmath::classical;
use qcoherent::QParam;

use crate::sweep::{matched_config, OscillatorParams};
use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryObservable {
    Weight,
    /// `W_q(t) = E_q(t) W̃_q(t)/π`, the resolution-of-unity weight.
    WeightFull,
    MeanPhoton,
    Mandel,
    Squeeze,
    Snr,
    Metric,
    Spectrum,
    /// Relative gap in the generalized uncertainty relation.
    Gur,
}

impl FromStr for QueryObservable {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Ok(match s {
            "weight" => QueryObservable::Weight,
            "weight-full" => QueryObservable::WeightFull,
            "mean-photon" => QueryObservable::MeanPhoton,
            "mandel" => QueryObservable::Mandel,
            "squeeze" => QueryObservable::Squeeze,
            "snr" => QueryObservable::Snr,
            "metric" => QueryObservable::Metric,
            "spectrum" => QueryObservable::Spectrum,
            "gur" => QueryObservable::Gur,
            other => {
                return Err(CliError::Usage(format!(
                    "unknown observable '{other}' (expected one of: weight, weight-full, \
                     mean-photon, mandel, squeeze, snr, metric, spectrum, gur)"
                )))
            }
        })
    }
}

/// Coherent-state label: either `t = |z|²` (real `z = √t`) or a full complex `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Label {
    T(f64),
    Z(Complex64),
}

impl Label {
    fn z(self) -> Complex64 {
        match self {
            Label::T(t) => Complex64::new(t.sqrt(), 0.0),
            Label::Z(z) => z,
        }
    }

    fn t(self) -> f64 {
        match self {
            Label::T(t) => t,
            Label::Z(z) => z.norm_sqr(),
        }
    }
}

/// Parses `re` or `re,im`.
pub fn parse_complex(s: &str) -> CliResult<Complex64> {
    let bad = || {
        CliError::Usage(format!(
            "cannot parse complex number '{s}' (use re or re,im)"
        ))
    };
    let mut parts = s.split(',').map(|p| p.trim().parse::<f64>());
    let re = parts.next().ok_or_else(bad)?.map_err(|_| bad())?;
    let im = match parts.next() {
        Some(v) => v.map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryRequest {
    pub observable: QueryObservable,
    pub q: Option<f64>,
    pub label: Option<Label>,
    /// Level index for the spectrum.
    pub level: Option<u64>,
    pub oracle_dim: Option<usize>,
    pub oscillator: OscillatorParams,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QueryReport {
    pub observable: QueryObservable,
    pub q: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<u64>,
    pub value: f64,
    /// Coherent-state probability mass beyond the summed terms.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_mass: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_delta: Option<f64>,
}

impl QueryReport {
    pub fn to_plain(&self) -> String {
        let mut s = format!(
            "{} = {}\nq = {}\n",
            observable_name(self.observable),
            self.value,
            self.q
        );
        let mut line = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                s.push_str(&format!("{k} = {v}\n"));
            }
        };
        line("t", self.t.map(|v| v.to_string()));
        line(
            "z",
            self.z_re.zip(self.z_im).map(|(a, b)| format!("{a}{b:+}i")),
        );
        line("n", self.level.map(|v| v.to_string()));
        line("tail_mass", self.tail_mass.map(|v| format!("{v:.3e}")));
        line("oracle_value", self.oracle_value.map(|v| v.to_string()));
        line(
            "oracle_delta",
            self.oracle_delta.map(|v| format!("{v:.3e}")),
        );
        s
    }
}

fn observable_name(o: QueryObservable) -> &'static str {
    match o {
        QueryObservable::Weight => "weight",
        QueryObservable::WeightFull => "weight-full",
        QueryObservable::MeanPhoton => "mean-photon",
        QueryObservable::Mandel => "mandel",
        QueryObservable::Squeeze => "squeeze",
        QueryObservable::Snr => "snr",
        QueryObservable::Metric => "metric",
        QueryObservable::Spectrum => "spectrum",
        QueryObservable::Gur => "gur",
    }
}

fn require<T>(v: Option<T>, what: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Usage(format!("this observable needs {what}")))
}

/// Fock-matrix value of a label-dependent observable.
fn oracle_value(
    obs: QueryObservable,
    z: Complex64,
    qp: QParam,
    dim: usize,
) -> CliResult<Option<f64>> {
    let o = || oracle::observables(z, qp, dim);
    Ok(match obs {
        QueryObservable::MeanPhoton => Some(o()?.mean_n),
        QueryObservable::Mandel => Some(o()?.mandel_q()),
        QueryObservable::Squeeze => Some(o()?.squeeze_ratio()),
        QueryObservable::Snr => Some(o()?.snr()),
        QueryObservable::Metric => Some(oracle::metric_factor(z.norm_sqr(), qp, dim)?),
        _ => None,
    })
}

pub fn run_query(req: &QueryRequest) -> CliResult<QueryReport> {
    if let Some(dim) = req.oracle_dim {
        if dim < 2 {
            return Err(CliError::Usage(format!(
                "--dim must be at least 2, got {dim}"
            )));
        }
    }
    match req.observable {
        QueryObservable::Gur => return gur_query(req),
        QueryObservable::Spectrum => return spectrum_query(req),
        _ => {}
    }
    let q = require(req.q, "--q")?;
    let label = require(req.label, "--t or --z")?;
    let (z, t) = (label.z(), label.t());
    let mut report = QueryReport {
        observable: req.observable,
        q,
        t: Some(t),
        z_re: matches!(label, Label::Z(_)).then_some(z.re),
        z_im: matches!(label, Label::Z(_)).then_some(z.im),
        level: None,
        value: f64::NAN,
        tail_mass: None,
        oracle_value: None,
        oracle_delta: None,
    };
    if q == 1.0 && req.observable == QueryObservable::Weight {
        report.value = classical::weight_tilde(t);
        return Ok(report);
    }
    let qp = QParam::new(q).map_err(|e| CliError::Usage(e.to_string()))?;
    report.value = match req.observable {
        QueryObservable::Weight => coherent::weight_tilde(t, qp)?,
        QueryObservable::WeightFull => coherent::weight_full(t, qp)?,
        QueryObservable::MeanPhoton => coherent::mean_photon(t, qp)?,
        QueryObservable::Mandel => coherent::mandel_q(t, qp)?,
        QueryObservable::Metric => coherent::metric_factor(t, qp)?,
        QueryObservable::Squeeze => 2.0 * coherent::quadrature_variances(z, qp)?.0,
        QueryObservable::Snr => {
            let (mx, _) = coherent::quadrature_means(z, qp)?;
            let (vx, _) = coherent::quadrature_variances(z, qp)?;
            mx * mx / vx
        }
        QueryObservable::Gur | QueryObservable::Spectrum => unreachable!(),
    };
    if !matches!(
        req.observable,
        QueryObservable::Weight | QueryObservable::WeightFull
    ) {
        report.tail_mass = Some(CoherentState::new(z, qp)?.tail_mass());
    }
    if let Some(dim) = req.oracle_dim {
        report.oracle_value = oracle_value(req.observable, z, qp, dim)?;
        report.oracle_delta = report.oracle_value.map(|o| (report.value - o).abs());
    }
    Ok(report)
}

fn spectrum_query(req: &QueryRequest) -> CliResult<QueryReport> {
    let q = require(req.q, "--q")?;
    let n = require(req.level, "--n")?;
    let qp = QParam::new(q).map_err(|e| CliError::Usage(e.to_string()))?;
    let p = req.oscillator;
    let value = oscillator::spectrum(n, qp, p.hbar * p.omega)?;
    let oracle_value = match req.oracle_dim {
        Some(dim) => {
            if n as usize >= dim {
                return Err(CliError::Usage(format!(
                    "level {n} is outside the D = {dim} truncation"
                )));
            }
            let cfg = matched_config(q, p)?;
            let frame = frame_from_alphabeta(&cfg)?;
            let fs = qcoherent::fock::FockSpace::new(dim, frame.qp)?;
            Some(oscillator::matrix_spectrum(&fs, &cfg, &frame)[n as usize])
        }
        None => None,
    };
    Ok(QueryReport {
        observable: req.observable,
        q,
        t: None,
        z_re: None,
        z_im: None,
        level: Some(n),
        value,
        tail_mass: None,
        oracle_value,
        oracle_delta: oracle_value.map(|o| (value - o).abs()),
    })
}

/// `q` is fixed by `--alpha`, `--beta` and `--hbar`.
fn gur_query(req: &QueryRequest) -> CliResult<QueryReport> {
    let alpha = require(req.alpha, "--alpha")?;
    let beta = require(req.beta, "--beta")?;
    let z = require(req.label, "--t or --z")?.z();
    let p = req.oscillator;
    let cfg = OscillatorConfig::new(p.mass, p.omega, p.hbar, alpha, beta)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let frame = frame_from_alphabeta(&cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(QueryReport {
        observable: req.observable,
        q: frame.qp.q(),
        t: Some(z.norm_sqr()),
        z_re: Some(z.re),
        z_im: Some(z.im),
        level: None,
        value: oscillator::gur_residual(z, &frame, &cfg)?,
        tail_mass: None,
        oracle_value: None,
        oracle_delta: None,
    })
}
