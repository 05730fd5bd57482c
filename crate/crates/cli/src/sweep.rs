//! Observable sweeps over a `(q, t)` grid, with CSV and JSON output.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use qcoherent::coherent::{self, oracle};
use qcoherent::fock::FockSpace;
use qcoherent::oscillator::{self, frame_from_alphabeta, matrix_spectrum, OscillatorConfig};
use qcoherent::qmath::{classical, jackson_exp_ln};
use qcoherent::QParam;

use crate::{fmt17, CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    /// Moment-problem weight W̃_q(t).
    Weight,
    /// Mandel parameter Q_q(t).
    Mandel,
    /// Variance ratio R_q(t) = 2(ΔX)² at z = √t.
    Squeeze,
    /// Signal-to-quantum-noise ratio σ_q(t) at z = √t.
    Snr,
    /// Metric factor ω_q(t) = d⟨N⟩/dt.
    Metric,
    /// Oscillator levels E_n; the `t` column holds the level index n.
    Spectrum,
}

impl Observable {
    pub fn name(self) -> &'static str {
        match self {
            Observable::Weight => "weight",
            Observable::Mandel => "mandel",
            Observable::Squeeze => "squeeze",
            Observable::Snr => "snr",
            Observable::Metric => "metric",
            Observable::Spectrum => "spectrum",
        }
    }

    /// Observables whose definition fixes the label to the real `z = √t`.
    fn needs_real_label(self) -> bool {
        matches!(self, Observable::Squeeze | Observable::Snr)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ZConvention {
    /// The label is `z = √t` on the positive real axis.
    #[default]
    RealSqrtT,
    /// Only `|z|² = t` is specified; valid for phase-independent observables.
    ModulusOnly,
}

/// `ħ`, `m`, `ω` for the spectrum sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
}

impl Default for OscillatorParams {
    fn default() -> Self {
        OscillatorParams {
            hbar: 1.0,
            mass: 1.0,
            omega: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub observable: Observable,
    pub q_list: Vec<f64>,
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    pub z_convention: ZConvention,
    /// Fock truncation for the oracle column; `None` omits the column.
    pub oracle_dim: Option<usize>,
    pub oscillator: OscillatorParams,
}

impl SweepSpec {
    /// Grid used for the corresponding figure, or a comparable default for
    /// observables without one.
    pub fn figure_defaults(observable: Observable) -> Self {
        let figs23 = vec![1.1, 1.2, 1.3];
        let (q_list, t_min, t_max, points) = match observable {
            Observable::Weight => (vec![1.0, 1.5, 2.0, 2.5], 0.0, 5.0, 101),
            Observable::Mandel => (figs23, 0.02, 4.0, 200),
            Observable::Squeeze => (figs23, 0.0, 2.0, 101),
            Observable::Snr => (vec![1.2, 1.5], 0.0, 2.0, 101),
            Observable::Metric => (figs23, 0.0, 4.0, 201),
            Observable::Spectrum => (vec![1.5, 2.0, 2.5], 0.0, 20.0, 21),
        };
        SweepSpec {
            observable,
            q_list,
            t_min,
            t_max,
            points,
            z_convention: ZConvention::default(),
            oracle_dim: None,
            oscillator: OscillatorParams::default(),
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        let usage = |m: String| Err(CliError::Usage(m));
        if self.q_list.is_empty() {
            return usage("--q needs at least one value".into());
        }
        for &q in &self.q_list {
            let classical = q == 1.0 && self.observable == Observable::Weight;
            if !(q.is_finite() && (q > 1.0 || classical)) {
                return usage(format!(
                    "q must be > 1 (q = 1 is accepted for the weight only), got {q}"
                ));
            }
        }
        if !(self.t_min.is_finite() && self.t_max.is_finite()) || self.t_min < 0.0 {
            return usage(format!("need finite t_min >= 0, got {}", self.t_min));
        }
        if !(self.t_max > self.t_min) {
            return usage(format!(
                "need t_max > t_min, got [{}, {}]",
                self.t_min, self.t_max
            ));
        }
        if self.points < 2 && self.observable != Observable::Spectrum {
            return usage(format!("need at least 2 points, got {}", self.points));
        }
        if self.observable.needs_real_label() && self.z_convention == ZConvention::ModulusOnly {
            return usage(format!(
                "{} depends on the phase of z and is defined at z = sqrt(t)",
                self.observable.name()
            ));
        }
        if let Some(dim) = self.oracle_dim {
            if dim < 2 {
                return usage(format!("--dim must be at least 2, got {dim}"));
            }
        }
        if self.observable == Observable::Spectrum {
            let p = self.oscillator;
            if !(p.hbar > 0.0 && p.mass > 0.0 && p.omega > 0.0) {
                return usage("--hbar, --mass and --omega must be positive".into());
            }
            if let Some(dim) = self.oracle_dim {
                if self.t_max.floor() as usize >= dim {
                    return usage(format!(
                        "level {} is outside the D = {dim} truncation",
                        self.t_max
                    ));
                }
            }
        }
        Ok(())
    }

    /// The `t` values of the grid, ascending; for the spectrum the integer
    /// levels in `[t_min, t_max]`.
    pub fn grid(&self) -> Vec<f64> {
        if self.observable == Observable::Spectrum {
            let lo = self.t_min.ceil() as u64;
            let hi = self.t_max.floor() as u64;
            return (lo..=hi).map(|n| n as f64).collect();
        }
        let last = self.points - 1;
        let step = (self.t_max - self.t_min) / last as f64;
        (0..self.points)
            .map(|i| {
                if i == last {
                    self.t_max
                } else {
                    self.t_min + step * i as f64
                }
            })
            .collect()
    }
}

/// One row of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservablePoint {
    pub q: f64,
    pub t: f64,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_value: Option<f64>,
    /// `|value − oracle_value|`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_delta: Option<f64>,
}

fn jackson_weight(t: f64, qp: QParam) -> qcoherent::Result<f64> {
    let e = jackson_exp_ln(qp.qm1() * t, 1.0 / qp.q())?;
    Ok(qp.weight_prefactor() * (-e.ln_magnitude()).exp())
}

/// Matched `(α, β)` for given `q`: `ħ√(αβ) = (q−1)/(q+1)` with `α = m²ω²β`.
pub fn matched_config(q: f64, p: OscillatorParams) -> qcoherent::Result<OscillatorConfig> {
    let s = (q - 1.0) / (q + 1.0);
    let beta = s / (p.hbar * p.mass * p.omega);
    let alpha = p.mass * p.mass * p.omega * p.omega * beta;
    OscillatorConfig::new(p.mass, p.omega, p.hbar, alpha, beta)
}

fn spectrum_oracle(q: f64, p: OscillatorParams, dim: usize) -> qcoherent::Result<Vec<f64>> {
    let cfg = matched_config(q, p)?;
    let frame = frame_from_alphabeta(&cfg)?;
    let fs = FockSpace::new(dim, frame.qp)?;
    Ok(matrix_spectrum(&fs, &cfg, &frame))
}

fn value_at(spec: &SweepSpec, q: f64, t: f64) -> qcoherent::Result<f64> {
    if q == 1.0 {
        return Ok(classical::weight_tilde(t));
    }
    let qp = QParam::new(q)?;
    match spec.observable {
        Observable::Weight => coherent::weight_tilde(t, qp),
        Observable::Mandel => coherent::mandel_q(t, qp),
        Observable::Squeeze => coherent::squeeze_ratio(t, qp),
        Observable::Snr => coherent::snr(t, qp),
        Observable::Metric => coherent::metric_factor(t, qp),
        Observable::Spectrum => {
            let p = spec.oscillator;
            oscillator::spectrum(t as u64, qp, p.hbar * p.omega)
        }
    }
}

fn oracle_at(spec: &SweepSpec, q: f64, t: f64, dim: usize) -> qcoherent::Result<f64> {
    if q == 1.0 {
        return Ok((-t).exp());
    }
    let qp = QParam::new(q)?;
    let z = Complex64::new(t.sqrt(), 0.0);
    match spec.observable {
        Observable::Weight => jackson_weight(t, qp),
        Observable::Mandel => {
            if t == 0.0 {
                // Same domain error as the series path.
                return coherent::mandel_q(t, qp);
            }
            Ok(oracle::observables(z, qp, dim)?.mandel_q())
        }
        Observable::Squeeze => Ok(oracle::observables(z, qp, dim)?.squeeze_ratio()),
        Observable::Snr => Ok(oracle::observables(z, qp, dim)?.snr()),
        Observable::Metric => oracle::metric_factor(t, qp, dim),
        Observable::Spectrum => unreachable!("spectrum oracle is computed per q"),
    }
}

/// Evaluates `spec` on its grid, `q` outer and `t` inner, both ascending
/// in the order given.
pub fn run_sweep(spec: &SweepSpec) -> CliResult<Vec<ObservablePoint>> {
    spec.validate()?;
    let grid = spec.grid();
    let mut out = Vec::with_capacity(spec.q_list.len() * grid.len());
    for &q in &spec.q_list {
        let levels = match (spec.observable, spec.oracle_dim) {
            (Observable::Spectrum, Some(dim)) => Some(spectrum_oracle(q, spec.oscillator, dim)?),
            _ => None,
        };
        for &t in &grid {
            let value = value_at(spec, q, t)?;
            let oracle_value = match (&levels, spec.oracle_dim) {
                (Some(levels), _) => Some(levels[t as usize]),
                (None, Some(dim)) => Some(oracle_at(spec, q, t, dim)?),
                (None, None) => None,
            };
            out.push(ObservablePoint {
                q,
                t,
                value,
                oracle_value,
                oracle_delta: oracle_value.map(|o| (value - o).abs()),
            });
        }
    }
    Ok(out)
}

/// Writes `points` as CSV with header `q,t,value[,oracle_value,oracle_delta]`.
pub fn write_csv<W: Write>(points: &[ObservablePoint], with_oracle: bool, w: W) -> CliResult<()> {
    let mut wr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    let mut header = vec!["q", "t", "value"];
    if with_oracle {
        header.extend(["oracle_value", "oracle_delta"]);
    }
    wr.write_record(&header)?;
    for p in points {
        let mut row = vec![fmt17(p.q), fmt17(p.t), fmt17(p.value)];
        if with_oracle {
            let cell = |v: Option<f64>| v.map(fmt17).unwrap_or_default();
            row.push(cell(p.oracle_value));
            row.push(cell(p.oracle_delta));
        }
        wr.write_record(&row)?;
    }
    wr.flush()?;
    Ok(())
}

/// Parses CSV produced by [`write_csv`].
pub fn read_csv<R: Read>(r: R) -> CliResult<Vec<ObservablePoint>> {
    let mut rd = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for row in rd.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

pub fn write_json<W: Write>(points: &[ObservablePoint], mut w: W) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut w, points)?;
    writeln!(w)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(observable: Observable, q: &[f64], t_min: f64, t_max: f64, points: usize) -> SweepSpec {
        SweepSpec {
            q_list: q.to_vec(),
            t_min,
            t_max,
            points,
            ..SweepSpec::figure_defaults(observable)
        }
    }

    #[test]
    fn grid_endpoints() {
        let s = spec(Observable::Weight, &[1.5], 0.0, 5.0, 6);
        assert_eq!(s.grid(), vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        let s = spec(Observable::Spectrum, &[2.0], 0.5, 3.7, 0);
        assert_eq!(s.grid(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn near_classical_weight() {
        let rows = run_sweep(&spec(Observable::Weight, &[1.0001], 0.0, 5.0, 6)).unwrap();
        for r in rows {
            assert!((r.value - (-r.t).exp()).abs() <= 1e-4);
        }
    }

    #[test]
    fn classical_weight_only_for_weight() {
        assert!(run_sweep(&spec(Observable::Weight, &[1.0], 0.0, 1.0, 3)).is_ok());
        let e = run_sweep(&spec(Observable::Mandel, &[1.0], 0.1, 1.0, 3)).unwrap_err();
        assert!(matches!(e, CliError::Usage(_)));
    }

    #[test]
    fn invalid_specs_are_usage_errors() {
        let bad = [
            spec(Observable::Weight, &[1.5], 1.0, 1.0, 3),
            spec(Observable::Weight, &[1.5], -1.0, 1.0, 3),
            spec(Observable::Weight, &[1.5], 0.0, 1.0, 1),
            spec(Observable::Weight, &[0.5], 0.0, 1.0, 3),
            spec(Observable::Weight, &[], 0.0, 1.0, 3),
            SweepSpec {
                z_convention: ZConvention::ModulusOnly,
                ..spec(Observable::Snr, &[1.5], 0.0, 1.0, 3)
            },
        ];
        for s in bad {
            assert!(matches!(run_sweep(&s), Err(CliError::Usage(_))), "{s:?}");
        }
    }

    #[test]
    fn mandel_at_origin_is_a_domain_error() {
        let e = run_sweep(&spec(Observable::Mandel, &[1.2], 0.0, 1.0, 3)).unwrap_err();
        assert_eq!(e.exit_code(), crate::EXIT_DOMAIN);
    }

    #[test]
    fn spectrum_levels_and_oracle() {
        let s = SweepSpec {
            oracle_dim: Some(40),
            ..spec(Observable::Spectrum, &[2.0], 0.0, 5.0, 0)
        };
        let rows = run_sweep(&s).unwrap();
        assert_eq!(rows.len(), 6);
        assert!((rows[0].value - 0.75).abs() < 1e-15);
        for r in rows {
            assert!(r.oracle_delta.unwrap() <= 1e-10 * r.value);
        }
    }

    #[test]
    fn csv_layout() {
        let rows = vec![ObservablePoint {
            q: 1.5,
            t: 0.25,
            value: -1.0 / 3.0,
            oracle_value: None,
            oracle_delta: None,
        }];
        let mut buf = Vec::new();
        write_csv(&rows, false, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "q,t,value\n1.5000000000000000e0,2.5000000000000000e-1,-3.3333333333333331e-1\n"
        );
        assert_eq!(read_csv(text.as_bytes()).unwrap(), rows);
    }
}
