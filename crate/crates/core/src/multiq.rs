//! Dense states on a labeled register of qubits and machine spaces.

use nalgebra::{DMatrix, DVector};

use crate::linalg::{herm_eigenvalues, max_abs};
use crate::{tolerance, Error, Result, C64};

/// A named tensor factor. The first label of a register is the most
/// significant digit of the composite basis index (Kronecker order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Label {
    pub name: String,
    pub dim: usize,
}

impl Label {
    pub fn qubit(name: impl Into<String>) -> Self {
        Label { name: name.into(), dim: 2 }
    }

    pub fn machine(name: impl Into<String>, dim: usize) -> Self {
        Label { name: name.into(), dim }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Repr {
    Pure(DVector<C64>),
    Mixed(DMatrix<C64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiQState {
    labels: Vec<Label>,
    repr: Repr,
}

impl MultiQState {
    pub fn mixed(labels: Vec<Label>, rho: DMatrix<C64>) -> Result<Self> {
        let dim = total_dim(&labels);
        if rho.nrows() != dim || rho.ncols() != dim {
            return Err(Error::Dimension { expected: dim, got: rho.nrows().max(rho.ncols()) });
        }
        Ok(Self { labels, repr: Repr::Mixed(rho) })
    }

    pub fn pure(labels: Vec<Label>, psi: DVector<C64>) -> Result<Self> {
        let dim = total_dim(&labels);
        if psi.len() != dim {
            return Err(Error::Dimension { expected: dim, got: psi.len() });
        }
        Ok(Self { labels, repr: Repr::Pure(psi) })
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn dim(&self) -> usize {
        total_dim(&self.labels)
    }

    /// The density operator, materialized from a pure vector when needed.
    pub fn density(&self) -> DMatrix<C64> {
        match &self.repr {
            Repr::Mixed(m) => m.clone(),
            Repr::Pure(psi) => psi * psi.adjoint(),
        }
    }

    pub fn trace(&self) -> f64 {
        match &self.repr {
            Repr::Mixed(m) => m.trace().re,
            Repr::Pure(psi) => psi.norm_squared(),
        }
    }

    /// Trace within 1e-10, Hermitian, and PSD to within `psd_tol`.
    pub fn validate(&self, psd_tol: f64) -> Result<()> {
        let tr = self.trace();
        if (tr - 1.0).abs() > tolerance::TRACE_SIMULATED {
            return Err(Error::InvalidState(format!("trace {tr} ≠ 1")));
        }
        if let Repr::Mixed(m) = &self.repr {
            let herm = max_abs(&(m - m.adjoint()));
            if herm > tolerance::TRACE_SIMULATED {
                return Err(Error::InvalidState(format!("not Hermitian (residual {herm:e})")));
            }
            let min = herm_eigenvalues(m).last().copied().unwrap_or(0.0);
            if min < -psd_tol {
                return Err(Error::InvalidState(format!("negative eigenvalue {min}")));
            }
        }
        Ok(())
    }

    fn position(&self, name: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l.name == name)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    /// Reduced state on `keep`, with the kept labels in their original order.
    pub fn partial_trace(&self, keep: &[&str]) -> Result<MultiQState> {
        if keep.is_empty() {
            return Err(Error::EmptyKeep);
        }
        let mut kept = vec![false; self.labels.len()];
        for name in keep {
            kept[self.position(name)?] = true;
        }
        let kept_labels: Vec<Label> = self
            .labels
            .iter()
            .zip(&kept)
            .filter(|(_, k)| **k)
            .map(|(l, _)| l.clone())
            .collect();
        let dk = total_dim(&kept_labels);
        let dt = self.dim() / dk;

        // Split every composite index into (kept, traced) sub-indices.
        let split: Vec<(usize, usize)> = (0..self.dim())
            .map(|i| split_index(i, &self.labels, &kept))
            .collect();

        let reduced = match &self.repr {
            Repr::Pure(psi) => {
                let mut amp = DMatrix::<C64>::zeros(dk, dt);
                for (i, &(k, t)) in split.iter().enumerate() {
                    amp[(k, t)] = psi[i];
                }
                &amp * amp.adjoint()
            }
            Repr::Mixed(rho) => {
                let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::new(); dt];
                for (i, &(k, t)) in split.iter().enumerate() {
                    groups[t].push((k, i));
                }
                let mut out = DMatrix::<C64>::zeros(dk, dk);
                for group in &groups {
                    for &(k1, i1) in group {
                        for &(k2, i2) in group {
                            out[(k1, k2)] += rho[(i1, i2)];
                        }
                    }
                }
                out
            }
        };
        MultiQState::mixed(kept_labels, reduced)
    }
}

fn total_dim(labels: &[Label]) -> usize {
    labels.iter().map(|l| l.dim).product()
}

fn split_index(mut i: usize, labels: &[Label], kept: &[bool]) -> (usize, usize) {
    let mut digits = vec![0usize; labels.len()];
    for (pos, l) in labels.iter().enumerate().rev() {
        digits[pos] = i % l.dim;
        i /= l.dim;
    }
    let (mut k, mut t) = (0usize, 0usize);
    for (pos, l) in labels.iter().enumerate() {
        if kept[pos] {
            k = k * l.dim + digits[pos];
        } else {
            t = t * l.dim + digits[pos];
        }
    }
    (k, t)
}
