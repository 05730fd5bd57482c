//! Adaptive integration on `[0, ∞)`.
//!
//! The range is split into `[0, 1]`, integrated in `t`, and `[1, T]`,
//! integrated in `u = ln t` so that the log-normal-like moment integrands
//! `tⁿ W̃_q(t)` become smooth bumps. Panels are refined by bisection with a
//! 15-point Kronrod / 7-point Gauss pair; the cutoff `T` grows by a factor of
//! four until the tail beyond it is negligible.

use crate::coherent::weight_tilde_ln;
use crate::error::{Error, Result};
use crate::qmath::{q_factorial_ln, QParam};

pub const DEFAULT_REL_TOL: f64 = 1e-10;
pub const DEFAULT_ABS_TOL: f64 = 1e-14;
pub const MAX_SUBDIVISIONS: usize = 4000;

const INITIAL_CUTOFF: f64 = 16.0;
const CUTOFF_GROWTH: f64 = 4.0;
const MAX_CUTOFF: f64 = 1e300;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub subdivisions: usize,
    /// Bound (or, without an analytic bound, estimate) of `∫_T^∞ f`.
    pub tail_bound: f64,
    /// Final upper cutoff `T`.
    pub cutoff: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Map {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    map: Map,
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

fn eval_mapped<F: Fn(f64) -> f64>(f: &F, map: Map, x: f64) -> Result<f64> {
    let (t, jac) = match map {
        Map::Linear => (x, 1.0),
        Map::Log => {
            let t = x.exp();
            (t, t)
        }
    };
    let v = f(t);
    if !v.is_finite() {
        return Err(Error::NonFiniteIntegrand(t));
    }
    Ok(v * jac)
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, map: Map, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = eval_mapped(f, map, center)?;
    let mut gauss = fc * WG[3];
    let mut kronrod = fc * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = eval_mapped(f, map, center - dx)? + eval_mapped(f, map, center + dx)?;
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok(Panel {
        map,
        a,
        b,
        value: kronrod * half,
        err: ((kronrod - gauss) * half).abs(),
    })
}

fn sorted_totals(panels: &mut [Panel]) -> (f64, f64) {
    // Fixed summation order: linear range first, then by left endpoint.
    panels.sort_by(|p, q| {
        (p.map == Map::Log)
            .cmp(&(q.map == Map::Log))
            .then(p.a.total_cmp(&q.a))
    });
    panels
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.err))
}

fn tolerance(value: f64, rel_tol: f64, abs_tol: f64) -> f64 {
    abs_tol.max(rel_tol * value.abs())
}

/// Bisects the worst panel until the summed error estimate drops below half
/// the tolerance, the panel budget runs out, or bisection stops helping.
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    panels: &mut Vec<Panel>,
    subdivisions: &mut usize,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<()> {
    loop {
        let (value, err) = sorted_totals(panels);
        if err <= 0.5 * tolerance(value, rel_tol, abs_tol) || *subdivisions >= MAX_SUBDIVISIONS {
            return Ok(());
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .expect("at least one panel");
        let p = panels[worst];
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            return Ok(());
        }
        let left = kronrod15(f, p.map, p.a, mid)?;
        let right = kronrod15(f, p.map, mid, p.b)?;
        panels[worst] = left;
        panels.push(right);
        *subdivisions += 1;
    }
}

fn finish(
    value: f64,
    err: f64,
    tail: f64,
    subdivisions: usize,
    cutoff: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<IntegralResult> {
    if err + tail > tolerance(value, rel_tol, abs_tol) {
        return Err(Error::ToleranceNotMet {
            best: value,
            error: err + tail,
        });
    }
    Ok(IntegralResult {
        value,
        abs_error_estimate: err,
        subdivisions,
        tail_bound: tail,
        cutoff,
    })
}

fn check_tolerances(rel_tol: f64, abs_tol: f64) -> Result<()> {
    if !(rel_tol > 0.0 && abs_tol > 0.0) {
        return Err(Error::Domain(format!(
            "tolerances must be positive, got rel {rel_tol}, abs {abs_tol}"
        )));
    }
    Ok(())
}

fn integrate_growing<F, T>(f: F, tail: T, rel_tol: f64, abs_tol: f64) -> Result<IntegralResult>
where
    F: Fn(f64) -> f64,
    T: Fn(f64, &[Panel]) -> f64,
{
    check_tolerances(rel_tol, abs_tol)?;
    let mut cutoff = INITIAL_CUTOFF;
    let mut panels = vec![
        kronrod15(&f, Map::Linear, 0.0, 1.0)?,
        kronrod15(&f, Map::Log, 0.0, cutoff.ln())?,
    ];
    let mut subdivisions = 0;
    loop {
        refine(&f, &mut panels, &mut subdivisions, rel_tol, abs_tol)?;
        let (value, err) = sorted_totals(&mut panels);
        let tail_bound = tail(cutoff, &panels);
        if tail_bound <= 0.1 * tolerance(value, rel_tol, abs_tol) {
            return finish(
                value,
                err,
                tail_bound,
                subdivisions,
                cutoff,
                rel_tol,
                abs_tol,
            );
        }
        if cutoff >= MAX_CUTOFF {
            return Err(Error::ToleranceNotMet {
                best: value,
                error: err + tail_bound,
            });
        }
        let next = (cutoff * CUTOFF_GROWTH).min(MAX_CUTOFF);
        panels.push(kronrod15(&f, Map::Log, cutoff.ln(), next.ln())?);
        cutoff = next;
    }
}

/// `∫₀^∞ f(t) dt` for a smooth integrand decaying faster than `1/t`.
///
/// Without an analytic tail bound the cutoff is grown until the integral
/// over the most recently added range `[T/4, T]` is below a tenth of the
/// tolerance; that piece is reported as the tail estimate.
pub fn integrate_semiinfinite<F>(f: F, rel_tol: f64, abs_tol: f64) -> Result<IntegralResult>
where
    F: Fn(f64) -> f64,
{
    integrate_growing(
        f,
        |cutoff, panels| {
            if cutoff <= INITIAL_CUTOFF {
                return f64::INFINITY;
            }
            let lo = (cutoff / CUTOFF_GROWTH).ln();
            panels
                .iter()
                .filter(|p| p.map == Map::Log && p.a >= lo)
                .map(|p| p.value)
                .sum::<f64>()
                .abs()
        },
        rel_tol,
        abs_tol,
    )
}

/// As [`integrate_semiinfinite`], with `tail(T) ≥ |∫_T^∞ f|` supplied by the
/// caller. The cutoff grows until `tail(T)` is below a tenth of the tolerance.
pub fn integrate_semiinfinite_with_tail<F, T>(
    f: F,
    tail: T,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<IntegralResult>
where
    F: Fn(f64) -> f64,
    T: Fn(f64) -> f64,
{
    integrate_growing(f, |cutoff, _| tail(cutoff), rel_tol, abs_tol)
}

/// `∫₀^upper f(t) dt` with the same panel scheme; `tail_bound` is zero.
pub fn integrate_truncated<F>(
    f: F,
    upper: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<IntegralResult>
where
    F: Fn(f64) -> f64,
{
    check_tolerances(rel_tol, abs_tol)?;
    if !(upper > 0.0) || !upper.is_finite() {
        return Err(Error::Domain(format!(
            "upper limit must be positive, got {upper}"
        )));
    }
    let mut panels = vec![kronrod15(&f, Map::Linear, 0.0, upper.min(1.0))?];
    if upper > 1.0 {
        panels.push(kronrod15(&f, Map::Log, 0.0, upper.ln())?);
    }
    let mut subdivisions = 0;
    refine(&f, &mut panels, &mut subdivisions, rel_tol, abs_tol)?;
    let (value, err) = sorted_totals(&mut panels);
    finish(value, err, 0.0, subdivisions, upper, rel_tol, abs_tol)
}

/// Normalized moment integrand `tⁿ W̃_q(t) / [n]_q!`.
pub fn moment_integrand(n: u32, qp: QParam) -> impl Fn(f64) -> f64 {
    let ln_fact = q_factorial_ln(u64::from(n), qp).ln_magnitude();
    move |t: f64| {
        if t == 0.0 {
            return if n == 0 { qp.weight_prefactor() } else { 0.0 };
        }
        match weight_tilde_ln(t, qp) {
            Ok(lw) => (f64::from(n) * t.ln() + lw - ln_fact).exp(),
            Err(_) => f64::NAN,
        }
    }
}

/// Upper bound on `∫_T^∞ tⁿ W̃_q(t) dt / [n]_q!`.
///
/// Uses `E_q(qt) ≥ (qt)^m / [m]_q!` for any `m`, giving the integrable power
/// law `[m]_q! q^{−m} t^{n−m}`; the best `m` in `n+2 ..= n+200` is taken.
pub fn moment_tail_bound(n: u32, qp: QParam, cutoff: f64) -> f64 {
    let ln_fact_n = q_factorial_ln(u64::from(n), qp).ln_magnitude();
    let ln_t = cutoff.ln();
    let mut ln_fact_m = ln_fact_n;
    let mut best = f64::INFINITY;
    for m in (n + 1)..=(n + 200) {
        ln_fact_m += crate::qmath::q_number_ln(u64::from(m), qp);
        if m < n + 2 {
            continue;
        }
        let excess = f64::from(m - n - 1);
        let ln_bound = ln_fact_m - f64::from(m) * qp.ln_q() - excess * ln_t - excess.ln();
        best = best.min(ln_bound);
    }
    qp.weight_prefactor() * (best - ln_fact_n).exp()
}

/// `∫₀^∞ tⁿ W̃_q(t) dt / [n]_q!` with the analytic moment tail bound.
pub fn moment_integral(n: u32, qp: QParam, rel_tol: f64, abs_tol: f64) -> Result<IntegralResult> {
    integrate_semiinfinite_with_tail(
        moment_integrand(n, qp),
        |cutoff| moment_tail_bound(n, qp, cutoff),
        rel_tol,
        abs_tol,
    )
}

/// Relative error `|∫₀^∞ tⁿ W̃_q(t) dt − [n]_q!| / [n]_q!`.
pub fn moment_check(n: u32, qp: QParam, rel_tol: f64) -> Result<f64> {
    let r = moment_integral(n, qp, rel_tol, DEFAULT_ABS_TOL.min(rel_tol))?;
    Ok((r.value - 1.0).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_integral() {
        let r = integrate_semiinfinite(|t| (-t).exp(), 1e-10, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10, "{r:?}");
        assert!(r.abs_error_estimate >= 0.0 && r.tail_bound >= 0.0);
        assert!(r.abs_error_estimate + r.tail_bound <= 1e-10);
    }

    #[test]
    fn gamma_two() {
        let r = integrate_semiinfinite(|t| t * (-t).exp(), 1e-10, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn second_moment_at_q_one_and_a_half() {
        let qp = QParam::new(1.5).unwrap();
        // normalized by [2]_q! = 2.5
        let r = moment_integral(2, qp, DEFAULT_REL_TOL, DEFAULT_ABS_TOL).unwrap();
        assert!((r.value * 2.5 - 2.5).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn moment_check_examples() {
        assert!(moment_check(0, QParam::new(1.5).unwrap(), 1e-10).unwrap() <= 1e-8);
        assert!(moment_check(1, QParam::new(2.0).unwrap(), 1e-10).unwrap() <= 1e-8);
        assert!(moment_check(8, QParam::new(1.3).unwrap(), 1e-10).unwrap() <= 1e-8);
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let r = integrate_semiinfinite(|t| if t > 0.5 { f64::NAN } else { 1.0 }, 1e-10, 1e-12);
        assert!(matches!(r, Err(Error::NonFiniteIntegrand(_))));
    }

    #[test]
    fn slow_tail_fails_tolerance() {
        // 1/(1+t)^1.01 has a tail far too heavy for any finite cutoff.
        let r = integrate_semiinfinite(|t| (1.0 + t).powf(-1.01), 1e-10, 1e-12);
        assert!(matches!(r, Err(Error::ToleranceNotMet { .. })), "{r:?}");
    }

    #[test]
    fn rejects_bad_tolerances() {
        assert!(integrate_semiinfinite(|t| (-t).exp(), 0.0, 1e-12).is_err());
        assert!(integrate_truncated(|t| t, -1.0, 1e-10, 1e-12).is_err());
    }

    #[test]
    fn truncated_matches_closed_form() {
        let r = integrate_truncated(|t| (-t).exp(), 5.0, 1e-12, 1e-14).unwrap();
        assert!((r.value - (1.0 - (-5f64).exp())).abs() < 1e-12);
        let r = integrate_truncated(|t| t * t, 0.5, 1e-12, 1e-14).unwrap();
        assert!((r.value - 0.125 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn tail_bound_dominates_numerical_tail() {
        let qp = QParam::new(1.5).unwrap();
        let f = moment_integrand(3, qp);
        for cutoff in [50.0, 200.0, 1000.0] {
            let head = integrate_truncated(&f, cutoff, 1e-13, 1e-16).unwrap().value;
            let tail = 1.0 - head;
            assert!(moment_tail_bound(3, qp, cutoff) >= tail - 1e-12, "{cutoff}");
        }
    }
}
