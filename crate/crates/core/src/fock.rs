//! Truncated Fock space `|0⟩ … |D−1⟩` with dense operator matrices.
//!
//! Deformed ladder operators act as `b†|n⟩ = √[n+1]_q |n+1⟩`; the
//! conventional `a`, `a†` (entries `√(n+1)`) share the same basis through
//! `b = a √([N]_q/N)`. Truncation breaks every commutation relation on the
//! top state, so residual checks leave it out.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmath::{q_number, QParam};

pub const DEFAULT_DIM: usize = 80;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorLabel {
    /// Deformed annihilation `b`.
    B,
    /// Deformed creation `b†`.
    BDag,
    /// Number operator `N`.
    N,
    /// `[N]_q`.
    QNumberN,
    /// Conventional annihilation `a`.
    A,
    /// Conventional creation `a†`.
    ADag,
    /// Quadrature `X = (a + a†)/√2`.
    X,
    /// Quadrature `P = (a − a†)/(i√2)`.
    P,
    /// Physical position `x = L(b† + b)`.
    Position,
    /// Physical momentum `p = iK(b† − b)`.
    Momentum,
    /// Hamiltonian.
    H,
    Other,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    label: OperatorLabel,
    matrix: DMatrix<Complex64>,
}

impl OperatorMatrix {
    pub fn new(label: OperatorLabel, matrix: DMatrix<Complex64>) -> Self {
        OperatorMatrix { label, matrix }
    }

    pub fn label(&self) -> OperatorLabel {
        self.label
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    /// `max |M − M†|`.
    pub fn hermiticity_residual(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockSpace {
    dim: usize,
    qp: QParam,
}

impl FockSpace {
    pub fn new(dim: usize, qp: QParam) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Domain(format!(
                "Fock truncation needs D >= 2, got {dim}"
            )));
        }
        Ok(FockSpace { dim, qp })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn qp(&self) -> QParam {
        self.qp
    }

    fn q_number(&self, n: usize) -> f64 {
        // dim is small enough that [n]_q stays finite for any q that is not
        // absurdly large; fall back to inf which makes residuals fail loudly.
        q_number(n as u64, self.qp).unwrap_or(f64::INFINITY)
    }

    fn lowering(&self, label: OperatorLabel, entry: impl Fn(usize) -> f64) -> OperatorMatrix {
        let mut m = DMatrix::from_element(self.dim, self.dim, ZERO);
        for n in 1..self.dim {
            m[(n - 1, n)] = re(entry(n));
        }
        OperatorMatrix::new(label, m)
    }

    /// `(b, b†)` with `b_{n−1,n} = √[n]_q`.
    pub fn build_ladder(&self) -> (OperatorMatrix, OperatorMatrix) {
        let b = self.lowering(OperatorLabel::B, |n| self.q_number(n).sqrt());
        let b_dag = OperatorMatrix::new(OperatorLabel::BDag, b.matrix.adjoint());
        (b, b_dag)
    }

    /// `(a, a†)` with `a_{n−1,n} = √n`.
    pub fn boson_ladder(&self) -> (OperatorMatrix, OperatorMatrix) {
        let a = self.lowering(OperatorLabel::A, |n| (n as f64).sqrt());
        let a_dag = OperatorMatrix::new(OperatorLabel::ADag, a.matrix.adjoint());
        (a, a_dag)
    }

    fn diagonal(&self, label: OperatorLabel, entry: impl Fn(usize) -> f64) -> OperatorMatrix {
        let d = DVector::from_iterator(self.dim, (0..self.dim).map(|n| re(entry(n))));
        OperatorMatrix::new(label, DMatrix::from_diagonal(&d))
    }

    pub fn number(&self) -> OperatorMatrix {
        self.diagonal(OperatorLabel::N, |n| n as f64)
    }

    /// The matrix function `[N]_q`.
    pub fn q_number_operator(&self) -> OperatorMatrix {
        self.diagonal(OperatorLabel::QNumberN, |n| self.q_number(n))
    }

    /// `b = a √([N]_q/N)`, with the `n = 0` entry of `√([N]_q/N)` set to 0.
    pub fn ladder_from_boson_map(&self) -> OperatorMatrix {
        let (a, _) = self.boson_ladder();
        let f = self.diagonal(OperatorLabel::Other, |n| {
            if n == 0 {
                0.0
            } else {
                (self.q_number(n) / n as f64).sqrt()
            }
        });
        OperatorMatrix::new(OperatorLabel::B, a.matrix * f.matrix)
    }

    /// Quadratures `(X, P)` built from the conventional `a`, `a†`.
    pub fn quadratures(&self) -> (OperatorMatrix, OperatorMatrix) {
        let (a, a_dag) = self.boson_ladder();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let x = (&a.matrix + &a_dag.matrix) * re(s);
        let p = (&a.matrix - &a_dag.matrix) * Complex64::new(0.0, -s);
        (
            OperatorMatrix::new(OperatorLabel::X, x),
            OperatorMatrix::new(OperatorLabel::P, p),
        )
    }

    /// Physical `x = L(b† + b)` and `p = iK(b† − b)`.
    pub fn position_momentum(
        &self,
        length: f64,
        momentum: f64,
    ) -> (OperatorMatrix, OperatorMatrix) {
        let (b, b_dag) = self.build_ladder();
        let x = (&b_dag.matrix + &b.matrix) * re(length);
        let p = (&b_dag.matrix - &b.matrix) * Complex64::new(0.0, momentum);
        (
            OperatorMatrix::new(OperatorLabel::Position, x),
            OperatorMatrix::new(OperatorLabel::Momentum, p),
        )
    }

    /// `H = ¼(1+q) ħω {b, b†}`.
    pub fn build_hamiltonian(&self, hbar_omega: f64) -> Result<OperatorMatrix> {
        if !(hbar_omega > 0.0) || !hbar_omega.is_finite() {
            return Err(Error::Domain(format!(
                "hbar*omega must be positive, got {hbar_omega}"
            )));
        }
        let (b, b_dag) = self.build_ladder();
        let anti = &b.matrix * &b_dag.matrix + &b_dag.matrix * &b.matrix;
        Ok(OperatorMatrix::new(
            OperatorLabel::H,
            anti * re(0.25 * (1.0 + self.qp.q()) * hbar_omega),
        ))
    }
}

/// Max over the leading `(D−1)×(D−1)` block of `|bb† − q b†b − I|`, each
/// entry scaled by `1 + |bb†| + q|b†b|` so the check stays at machine
/// precision when `[n]_q` is large.
pub fn commutator_residual(fs: &FockSpace) -> f64 {
    let (b, b_dag) = fs.build_ladder();
    let bbd = &b.matrix * &b_dag.matrix;
    let bdb = &b_dag.matrix * &b.matrix;
    let q = fs.qp.q();
    let m = fs.dim - 1;
    let mut worst: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            let id = if i == j { 1.0 } else { 0.0 };
            let r = bbd[(i, j)] - bdb[(i, j)] * q - re(id);
            let scale = 1.0 + bbd[(i, j)].norm() + q * bdb[(i, j)].norm();
            worst = worst.max(r.norm() / scale);
        }
    }
    worst
}

/// Unscaled `max |bb† − q b†b − I|` over the full matrix, including the
/// truncated top state. Exposes the edge artifact excluded by
/// [`commutator_residual`].
pub fn commutator_residual_full(fs: &FockSpace) -> f64 {
    let (b, b_dag) = fs.build_ladder();
    let r = &b.matrix * &b_dag.matrix
        - &b_dag.matrix * &b.matrix * re(fs.qp.q())
        - DMatrix::identity(fs.dim, fs.dim);
    r.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// `max_n |(b†b)_nn − [n]_q| + max_{n<D−1} |(bb†)_nn − [n+1]_q|`, each term
/// relative to `max(1, [n]_q)`; off-diagonal entries must vanish.
pub fn boson_map_residual(fs: &FockSpace) -> f64 {
    let (b, b_dag) = fs.build_ladder();
    let bdb = &b_dag.matrix * &b.matrix;
    let bbd = &b.matrix * &b_dag.matrix;
    let mut first: f64 = 0.0;
    let mut second: f64 = 0.0;
    for i in 0..fs.dim {
        for j in 0..fs.dim {
            let target = if i == j { fs.q_number(i) } else { 0.0 };
            first = first.max((bdb[(i, j)] - re(target)).norm() / target.max(1.0));
            if i < fs.dim - 1 && j < fs.dim - 1 {
                let target = if i == j { fs.q_number(i + 1) } else { 0.0 };
                second = second.max((bbd[(i, j)] - re(target)).norm() / target.max(1.0));
            }
        }
    }
    first + second
}

/// `max_{n ≤ D−2} |H_nn − E_n(q)| / E_n(q)` against the closed form
/// `E_n = ¼(1+q)([n]_q + [n+1]_q) ħω`.
pub fn spectrum_residual(fs: &FockSpace, hbar_omega: f64) -> Result<f64> {
    let h = fs.build_hamiltonian(hbar_omega)?;
    let q = fs.qp.q();
    Ok((0..fs.dim - 1)
        .map(|n| {
            let e = 0.25 * (1.0 + q) * (fs.q_number(n) + fs.q_number(n + 1)) * hbar_omega;
            (h.matrix[(n, n)] - re(e)).norm() / e
        })
        .fold(0.0, f64::max))
}

/// `⟨ψ|op|ψ⟩` for a state normalized within `1e−10`.
pub fn expectation(op: &OperatorMatrix, state: &DVector<Complex64>) -> Result<Complex64> {
    if state.len() != op.dim() {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            got: state.len(),
        });
    }
    let norm = state.norm_squared();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Domain(format!(
            "state is not normalized: |psi|^2 = {norm}"
        )));
    }
    Ok(state.dotc(&(&op.matrix * state)))
}

/// Fock basis vector `|n⟩`.
pub fn basis_state(dim: usize, n: usize) -> DVector<Complex64> {
    let mut v = DVector::from_element(dim, ZERO);
    v[n] = re(1.0);
    v
}
