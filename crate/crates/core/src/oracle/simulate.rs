use nalgebra::{DMatrix, Matrix4};

use super::gram::{GramConvention, GramSpec};
use super::isometry::{build_sd_isometry, build_si_isometry, Isometry};
use crate::bloch::{bloch_of, Bloch2Q, Density4};
use crate::cloning::{ClonerFamily, ClonerSpec};
use crate::multiq::{Label, MultiQState};
use crate::{tolerance, Error, Result, C64};


fn to_dyn4(m: &Matrix4<C64>) -> DMatrix<C64> {
    DMatrix::from_fn(4, 4, |r, c| m[(r, c)])
}

fn expect_m(v: &Isometry, m: usize) -> Result<()> {
    if v.m == m {
        Ok(())
    } else {
        Err(Error::Dimension { expected: m, got: v.m })
    }
}

fn local_labels(dm: usize) -> Vec<Label> {
    vec![
        Label::qubit("1"),
        Label::qubit("3"),
        Label::machine("mA", dm),
        Label::qubit("2"),
        Label::qubit("4"),
        Label::machine("mB", dm),
    ]
}

/// `(V ⊗ V) op (V ⊗ V)†` for any 4×4 operator on qubits (1, 2). Linear in
/// `op`; no validation.
pub fn apply_local_channel(op: &Matrix4<C64>, v: &Isometry) -> Result<DMatrix<C64>> {
    expect_m(v, 2)?;
    let w = v.matrix.kronecker(&v.matrix);
    Ok(&w * to_dyn4(op) * w.adjoint())
}

/// Clones qubit 1 onto blank 3 and qubit 2 onto blank 4 with independent
/// copies of the `M = 2` isometry `v`.
pub fn run_local_broadcast(rho: &Density4, v: &Isometry) -> Result<MultiQState> {
    let out = apply_local_channel(&rho.0, v)?;
    let state = MultiQState::mixed(local_labels(v.machine_dim), out)?;
    state.validate(tolerance::PSD_SIMULATED)?;
    Ok(state)
}

/// Clones the pair (1, 2) onto the blank pair (3, 4) with the `M = 4` isometry.
pub fn run_nonlocal_broadcast(rho: &Density4, v: &Isometry) -> Result<MultiQState> {
    expect_m(v, 4)?;
    let out = &v.matrix * to_dyn4(&rho.0) * v.matrix.adjoint();
    let labels = vec![
        Label::qubit("1"),
        Label::qubit("2"),
        Label::qubit("3"),
        Label::qubit("4"),
        Label::machine("m", v.machine_dim),
    ];
    let state = MultiQState::mixed(labels, out)?;
    state.validate(tolerance::PSD_SIMULATED)?;
    Ok(state)
}

/// Fidelities `⟨ψ|ρ|ψ⟩` of the original and the copy after cloning a pure
/// qubit with an `M = 2` isometry.
pub fn clone_fidelity(psi: &[C64; 2], v: &Isometry) -> Result<(f64, f64)> {
    expect_m(v, 2)?;
    let rho = DMatrix::from_fn(2, 2, |r, c| psi[r] * psi[c].conj());
    let out = &v.matrix * rho * v.matrix.adjoint();
    let state = MultiQState::mixed(
        vec![Label::qubit("a0"), Label::qubit("a1"), Label::machine("x", v.machine_dim)],
        out,
    )?;
    let fid = |name: &str| -> Result<f64> {
        let r = state.partial_trace(&[name])?.density();
        let mut f = C64::new(0.0, 0.0);
        for a in 0..2 {
            for b in 0..2 {
                f += psi[a].conj() * r[(a, b)] * psi[b];
            }
        }
        Ok(f.re)
    };
    Ok((fid("a0")?, fid("a1")?))
}

/// Full output of a simulated broadcasting run.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub family: ClonerFamily,
    pub state: MultiQState,
    pub isometry_residual: f64,
    pub machine_dim: usize,
}

impl Simulation {
    /// Bloch data of the ordered pair `(first, second)`.
    pub fn pair(&self, first: &str, second: &str) -> Result<Bloch2Q> {
        let reduced = self.state.partial_trace(&[first, second])?;
        let m = reduced.density();
        let rho = Matrix4::from_fn(|r, c| m[(r, c)]);
        let s = bloch_of(&rho);
        if reduced.labels()[0].name == first {
            Ok(s)
        } else {
            Ok(Bloch2Q::new(s.y, s.x, s.t.transpose()))
        }
    }

    /// Pairs described by the family's closed-form map: all four cross-lab
    /// pairs for local cloning, the two copies of the pair for nonlocal.
    pub fn closed_form_pairs(&self, family: ClonerFamily) -> Result<Vec<Bloch2Q>> {
        let pairs: &[(&str, &str)] = if family.is_local() {
            &[("1", "4"), ("3", "2"), ("1", "2"), ("3", "4")]
        } else {
            &[("1", "2"), ("3", "4")]
        };
        pairs.iter().map(|(a, b)| self.pair(a, b)).collect()
    }
}

/// Builds the isometry for `spec` (state-dependent families through the
/// given Gram convention) and simulates broadcasting of `s`.
pub fn simulate_spec(s: &Bloch2Q, spec: &ClonerSpec, convention: GramConvention) -> Result<Simulation> {
    let family = spec.family();
    let iso = match family {
        ClonerFamily::LocalSi => build_si_isometry(2)?,
        ClonerFamily::NonlocalSi => build_si_isometry(4)?,
        ClonerFamily::LocalSd | ClonerFamily::NonlocalSd => {
            let gram = GramSpec::state_dependent(family.clone_dim(), spec.lambda(), convention)?;
            build_sd_isometry(&gram)?
        }
    };
    let rho = s.to_density();
    let state = if family.is_local() {
        run_local_broadcast(&rho, &iso)?
    } else {
        run_nonlocal_broadcast(&rho, &iso)?
    };
    Ok(Simulation {
        family,
        state,
        isometry_residual: iso.residual,
        machine_dim: iso.machine_dim,
    })
}
