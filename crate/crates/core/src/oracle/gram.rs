use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// How the state-dependent machine overlaps are filled in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GramConvention {
    /// Stated products taken as written, with `⟨X_ii|X_jk⟩ = μ/2` read as an
    /// overlap with every off-diagonal vector `Y_jk` (`j ≠ i`).
    PaperLiteral,
    /// Original Buzek–Hillery choice: `X_ii` overlaps only the `Y_ji` branches
    /// that carry `|i⟩` into the copy, `⟨X_ii|Y_ji⟩ = μ/2`.
    BhStandard,
}

impl GramConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            GramConvention::PaperLiteral => "paper_literal",
            GramConvention::BhStandard => "bh_standard",
        }
    }
}

impl std::str::FromStr for GramConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper_literal" => Ok(GramConvention::PaperLiteral),
            "bh_standard" => Ok(GramConvention::BhStandard),
            other => Err(Error::InvalidSpec(format!("unknown Gram convention `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GramKind {
    StateIndependent,
    StateDependent(GramConvention),
}

/// Machine vector `X_ii` or `Y_ij` (`i` the input index, `j ≠ i`), 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MachineVector {
    X(usize),
    Y(usize, usize),
}

/// Gram matrix over `X_00 … X_{M−1,M−1}` followed by every ordered `Y_ij`,
/// `i ≠ j`, in lexicographic order; plus the branch coefficients `c`, `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramSpec {
    pub m: usize,
    pub kind: GramKind,
    pub lambda: f64,
    pub mu: f64,
    pub c: f64,
    pub d: f64,
    pub vectors: Vec<MachineVector>,
    pub gram: DMatrix<f64>,
}

fn machine_vectors(m: usize) -> Vec<MachineVector> {
    let mut v: Vec<MachineVector> = (0..m).map(MachineVector::X).collect();
    for i in 0..m {
        for j in 0..m {
            if i != j {
                v.push(MachineVector::Y(i, j));
            }
        }
    }
    v
}

fn check_m(m: usize) -> Result<()> {
    if m == 2 || m == 4 {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("clone dimension M = {m}; expected 2 or 4")))
    }
}

impl GramSpec {
    /// Universal cloner: `c² = 2/(M+1)`, `d² = (1 − c²)/(2(M−1))`, orthonormal
    /// `X_ii` and `Y_ij = X_jj` (so `⟨X_ii|Y_ji⟩ = 1`).
    pub fn state_independent(m: usize) -> Result<Self> {
        check_m(m)?;
        let c2 = 2.0 / (m as f64 + 1.0);
        let d2 = (1.0 - c2) / (2.0 * (m as f64 - 1.0));
        let vectors = machine_vectors(m);
        // every vector is some X_kk; record which
        let target = |v: &MachineVector| match *v {
            MachineVector::X(i) => i,
            MachineVector::Y(_, j) => j,
        };
        let n = vectors.len();
        let gram = DMatrix::from_fn(n, n, |a, b| {
            if target(&vectors[a]) == target(&vectors[b]) {
                1.0
            } else {
                0.0
            }
        });
        Ok(GramSpec {
            m,
            kind: GramKind::StateIndependent,
            lambda: d2,
            mu: 2.0 * (c2 * d2).sqrt(),
            c: c2.sqrt(),
            d: d2.sqrt(),
            vectors,
            gram,
        })
    }

    /// State-dependent cloner (`c = d = 1`) with `μ = 1 − 2λ` (`M = 2`) or
    /// `μ = 1 − 4λ` (`M = 4`).
    pub fn state_dependent(m: usize, lambda: f64, convention: GramConvention) -> Result<Self> {
        check_m(m)?;
        let mu = if m == 2 { 1.0 - 2.0 * lambda } else { 1.0 - 4.0 * lambda };
        Self::state_dependent_with_mu(m, lambda, mu, convention)
    }

    /// State-dependent Gram with `λ` and `μ` set independently.
    ///
    /// `⟨X_ii|X_ii⟩ = 1 − 2(M−1)λ`, `⟨Y_ij|Y_ij⟩ = λ`, distinct `Y`s orthogonal,
    /// `⟨X_ii|X_jj⟩ = ⟨X_ii|Y_ij⟩ = 0`, and the `μ/2` overlaps per convention.
    pub fn state_dependent_with_mu(m: usize, lambda: f64, mu: f64, convention: GramConvention) -> Result<Self> {
        check_m(m)?;
        let vectors = machine_vectors(m);
        let n = vectors.len();
        let x_norm = 1.0 - 2.0 * (m as f64 - 1.0) * lambda;
        let overlap = |x: usize, y: (usize, usize)| -> f64 {
            let (j, k) = y;
            let hit = match convention {
                GramConvention::BhStandard => j != x && k == x,
                GramConvention::PaperLiteral => j != x,
            };
            if hit {
                mu / 2.0
            } else {
                0.0
            }
        };
        let gram = DMatrix::from_fn(n, n, |a, b| match (vectors[a], vectors[b]) {
            (MachineVector::X(i), MachineVector::X(j)) => {
                if i == j {
                    x_norm
                } else {
                    0.0
                }
            }
            (MachineVector::Y(i, j), MachineVector::Y(k, l)) => {
                if (i, j) == (k, l) {
                    lambda
                } else {
                    0.0
                }
            }
            (MachineVector::X(i), MachineVector::Y(j, k)) | (MachineVector::Y(j, k), MachineVector::X(i)) => {
                overlap(i, (j, k))
            }
        });
        Ok(GramSpec {
            m,
            kind: GramKind::StateDependent(convention),
            lambda,
            mu,
            c: 1.0,
            d: 1.0,
            vectors,
            gram,
        })
    }

    pub fn index_of(&self, v: MachineVector) -> usize {
        self.vectors.iter().position(|w| *w == v).expect("machine vector in list")
    }
}
