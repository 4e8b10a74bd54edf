//! Two-qubit states in Bloch canonical form and their 4×4 density matrices.
//!
//! A state is written as
//! `ρ = ¼ [𝕀⊗𝕀 + Σ xᵢ σᵢ⊗𝕀 + Σ yᵢ 𝕀⊗σᵢ + Σ tᵢⱼ σᵢ⊗σⱼ]`,
//! with `xᵢ = Tr[ρ σᵢ⊗𝕀]`, `yᵢ = Tr[ρ 𝕀⊗σᵢ]` and `tᵢⱼ = Tr[ρ σᵢ⊗σⱼ]`.

use std::fmt;

use nalgebra::{Matrix2, Matrix3, Matrix4, Vector3};

use crate::linalg::{herm4_eigenvalues, kron2, max_abs, paulis};
use crate::{tolerance, Error, Result, C64};

/// Two-qubit state as local Bloch vectors and correlation matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bloch2Q {
    pub x: Vector3<f64>,
    pub y: Vector3<f64>,
    pub t: Matrix3<f64>,
}

impl Bloch2Q {
    pub fn new(x: Vector3<f64>, y: Vector3<f64>, t: Matrix3<f64>) -> Self {
        Self { x, y, t }
    }

    /// 𝕀₄/4.
    pub fn maximally_mixed() -> Self {
        Self::new(Vector3::zeros(), Vector3::zeros(), Matrix3::zeros())
    }

    /// Singlet |ψ⁻⟩, `T = −𝕀`.
    pub fn singlet() -> Self {
        Self::new(Vector3::zeros(), Vector3::zeros(), -Matrix3::identity())
    }

    /// Product of two single-qubit states with Bloch vectors `x` and `y`.
    pub fn product(x: Vector3<f64>, y: Vector3<f64>) -> Self {
        Self::new(x, y, x * y.transpose())
    }

    /// `TᵀT`, whose spectrum drives every criterion.
    pub fn correlation_gram(&self) -> Matrix3<f64> {
        self.t.transpose() * self.t
    }

    pub fn to_density(&self) -> Density4 {
        to_density(self)
    }

    /// Physical-state check: the reconstructed operator must be a valid
    /// density matrix and both local vectors must lie in the Bloch ball.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.x.norm() > 1.0 + tolerance::PSD {
            problems.push(format!("|x| = {} > 1", self.x.norm()));
        }
        if self.y.norm() > 1.0 + tolerance::PSD {
            problems.push(format!("|y| = {} > 1", self.y.norm()));
        }
        let verdict = to_density(self).validate_strict();
        problems.extend(verdict.violations.iter().map(ToString::to_string));
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidState(problems.join("; ")))
        }
    }

    /// Largest absolute difference over all fifteen Bloch parameters.
    pub fn max_deviation(&self, other: &Bloch2Q) -> f64 {
        let dx = (self.x - other.x).amax();
        let dy = (self.y - other.y).amax();
        let dt = (self.t - other.t).amax();
        dx.max(dy).max(dt)
    }
}

/// 4×4 complex matrix interpreted as a two-qubit density operator. Holding a
/// `Density4` does not imply validity; see [`validate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Density4(pub Matrix4<C64>);

impl Density4 {
    pub fn maximally_mixed() -> Self {
        Density4(Matrix4::identity() * C64::new(0.25, 0.0))
    }

    /// `|ψ⟩⟨ψ|` for an amplitude vector in the basis |00⟩, |01⟩, |10⟩, |11⟩.
    pub fn from_pure(psi: &[C64; 4]) -> Self {
        Density4(Matrix4::from_fn(|r, c| psi[r] * psi[c].conj()))
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.0
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        herm4_eigenvalues(&self.0)
    }

    /// Validation against the hard invariants (Hermitian to 1e-12, unit trace
    /// to 1e-12, eigenvalues ≥ −1e-10).
    pub fn validate_strict(&self) -> Validity {
        check(self, tolerance::HERMITIAN, tolerance::TRACE, tolerance::PSD)
    }

    /// Transpose of the second qubit.
    pub fn partial_transpose(&self) -> Matrix4<C64> {
        Matrix4::from_fn(|r, c| {
            let (a, b) = (r / 2, r % 2);
            let (ap, bp) = (c / 2, c % 2);
            self.0[(2 * a + bp, 2 * ap + b)]
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    NotHermitian(f64),
    Trace(f64),
    NegativeEigenvalue(f64),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotHermitian(r) => write!(f, "not Hermitian (residual {r:e})"),
            Violation::Trace(tr) => write!(f, "trace {tr} ≠ 1"),
            Violation::NegativeEigenvalue(e) => write!(f, "negative eigenvalue {e}"),
        }
    }
}

/// Outcome of a density-matrix check. The residuals are always filled in;
/// `violations` is empty iff the state passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Validity {
    pub hermitian_residual: f64,
    pub trace_residual: f64,
    pub min_eigenvalue: f64,
    pub violations: Vec<Violation>,
}

impl Validity {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check(rho: &Density4, herm_tol: f64, trace_tol: f64, psd_tol: f64) -> Validity {
    let m = &rho.0;
    let hermitian_residual = max_abs(&(m - m.adjoint()));
    let trace = m.trace();
    let trace_residual = (trace - C64::new(1.0, 0.0)).norm();
    let min_eigenvalue = herm4_eigenvalues(m)[3];
    let mut violations = Vec::new();
    if hermitian_residual > herm_tol {
        violations.push(Violation::NotHermitian(hermitian_residual));
    }
    if trace_residual > trace_tol {
        violations.push(Violation::Trace(trace.re));
    }
    if min_eigenvalue < -psd_tol {
        violations.push(Violation::NegativeEigenvalue(min_eigenvalue));
    }
    Validity {
        hermitian_residual,
        trace_residual,
        min_eigenvalue,
        violations,
    }
}

/// Checks Hermiticity, unit trace and positivity, each to within `tol`.
pub fn validate(rho: &Density4, tol: f64) -> Validity {
    check(rho, tol, tol, tol)
}

pub fn to_density(s: &Bloch2Q) -> Density4 {
    let p = paulis();
    let id = Matrix2::<C64>::identity();
    let mut m = Matrix4::<C64>::identity();
    for i in 0..3 {
        m += kron2(&p[i], &id) * C64::from(s.x[i]);
        m += kron2(&id, &p[i]) * C64::from(s.y[i]);
        for j in 0..3 {
            m += kron2(&p[i], &p[j]) * C64::from(s.t[(i, j)]);
        }
    }
    Density4(m * C64::new(0.25, 0.0))
}

/// `σ_i[a, perm(a)] = phase(a)` for `i = 0..=3` (`σ₀ = 𝕀`).
fn pauli_entry(i: usize, a: usize) -> (usize, C64) {
    match i {
        0 => (a, C64::new(1.0, 0.0)),
        1 => (1 - a, C64::new(1.0, 0.0)),
        2 => (1 - a, if a == 0 { C64::new(0.0, -1.0) } else { C64::new(0.0, 1.0) }),
        _ => (a, C64::new(if a == 0 { 1.0 } else { -1.0 }, 0.0)),
    }
}

/// `Tr[ρ (σ_i ⊗ σ_j)]`, using that each Pauli product has one nonzero per row.
fn pauli_expectation(rho: &Matrix4<C64>, i: usize, j: usize) -> f64 {
    let mut acc = C64::new(0.0, 0.0);
    for a in 0..2 {
        let (pa, fa) = pauli_entry(i, a);
        for b in 0..2 {
            let (pb, fb) = pauli_entry(j, b);
            acc += rho[(2 * pa + pb, 2 * a + b)] * fa * fb;
        }
    }
    acc.re
}

/// Bloch data by the defining traces, without validating the input.
pub fn bloch_of(rho: &Matrix4<C64>) -> Bloch2Q {
    Bloch2Q {
        x: Vector3::from_fn(|i, _| pauli_expectation(rho, i + 1, 0)),
        y: Vector3::from_fn(|i, _| pauli_expectation(rho, 0, i + 1)),
        t: Matrix3::from_fn(|i, j| pauli_expectation(rho, i + 1, j + 1)),
    }
}

/// Bloch data of a valid density matrix.
pub fn from_density(rho: &Density4) -> Result<Bloch2Q> {
    let v = rho.validate_strict();
    if !v.is_ok() {
        let msg: Vec<String> = v.violations.iter().map(ToString::to_string).collect();
        return Err(Error::InvalidState(msg.join("; ")));
    }
    Ok(bloch_of(&rho.0))
}
