use nalgebra::DMatrix;

use super::gram::{GramSpec, MachineVector};
use crate::linalg::{max_abs, sym_eigen};
use crate::{tolerance, Error, Result, C64};

/// Cloning isometry on the `M`-dimensional input (blank and machine start in
/// fixed states). Rows index `input ⊗ copy ⊗ machine`, columns the input basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    pub m: usize,
    pub machine_dim: usize,
    pub matrix: DMatrix<C64>,
    /// `‖V†V − I‖_max`.
    pub residual: f64,
}

/// Rows of a factor `L` with `L Lᵀ = G`, one row per machine vector, in an
/// embedding of dimension `rank(G)`.
fn realize(gram: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (values, vectors) = sym_eigen(gram);
    let min = values.last().copied().unwrap_or(0.0);
    if min < -tolerance::GRAM_PSD {
        return Err(Error::Unrealizable(min));
    }
    let scale = values[0].abs().max(1.0);
    let rank = values.iter().filter(|v| **v > tolerance::GRAM_PSD * scale).count().max(1);
    Ok(DMatrix::from_fn(gram.nrows(), rank, |r, k| vectors[(r, k)] * values[k].max(0.0).sqrt()))
}

fn assemble(spec: &GramSpec) -> Result<Isometry> {
    let coords = realize(&spec.gram)?;
    let m = spec.m;
    let dm = coords.ncols();
    let mut v = DMatrix::<C64>::zeros(m * m * dm, m);
    let row = |a0: usize, a1: usize, k: usize| (a0 * m + a1) * dm + k;
    for i in 0..m {
        let xi = spec.index_of(MachineVector::X(i));
        for k in 0..dm {
            v[(row(i, i, k), i)] += C64::from(spec.c * coords[(xi, k)]);
        }
        for j in (0..m).filter(|&j| j != i) {
            let yij = spec.index_of(MachineVector::Y(i, j));
            for k in 0..dm {
                let amp = C64::from(spec.d * coords[(yij, k)]);
                v[(row(i, j, k), i)] += amp;
                v[(row(j, i, k), i)] += amp;
            }
        }
    }
    let residual = max_abs(&(v.adjoint() * &v - DMatrix::<C64>::identity(m, m)));
    if residual > tolerance::ISOMETRY {
        return Err(Error::NotIsometry(residual));
    }
    Ok(Isometry { m, machine_dim: dm, matrix: v, residual })
}

/// Universal Buzek–Hillery cloner for `M ∈ {2, 4}`.
pub fn build_si_isometry(m: usize) -> Result<Isometry> {
    assemble(&GramSpec::state_independent(m)?)
}

/// State-dependent cloner from its Gram specification. Fails when the Gram
/// matrix is not PSD or the resulting map is not an isometry.
pub fn build_sd_isometry(spec: &GramSpec) -> Result<Isometry> {
    assemble(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::gram::GramConvention;

    #[test]
    fn si_isometries() {
        for m in [2, 4] {
            let v = build_si_isometry(m).unwrap();
            assert!(v.residual <= 1e-12, "M = {m}: {}", v.residual);
            assert_eq!(v.machine_dim, m);
            for col in v.matrix.column_iter() {
                assert!((col.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sd_realizable_above_one_sixth() {
        for lambda in [1.0 / 6.0, 0.2, 0.25, 0.4, 0.5] {
            let g = GramSpec::state_dependent(2, lambda, GramConvention::BhStandard).unwrap();
            let v = build_sd_isometry(&g).unwrap();
            assert!(v.residual <= 1e-10);
        }
    }

    #[test]
    fn sd_unrealizable_below_one_sixth() {
        // det of each X/Y block is λ(1 − 2λ) − (1 − 2λ)²/4 < 0 for λ < 1/6
        for lambda in [0.0, 0.1, 1.0 / 6.0 - 1e-3] {
            let g = GramSpec::state_dependent(2, lambda, GramConvention::BhStandard).unwrap();
            assert!(matches!(build_sd_isometry(&g), Err(Error::Unrealizable(_))), "λ = {lambda}");
        }
    }

    #[test]
    fn nonlocal_sd_never_realizable() {
        for convention in [GramConvention::BhStandard, GramConvention::PaperLiteral] {
            for k in 0..=25 {
                let lambda = k as f64 / 100.0;
                let g = GramSpec::state_dependent(4, lambda, convention).unwrap();
                assert!(build_sd_isometry(&g).is_err(), "{convention:?} λ = {lambda}");
            }
        }
    }
}
