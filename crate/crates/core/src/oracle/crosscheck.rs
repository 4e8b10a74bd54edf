use serde::Serialize;

use super::gram::GramConvention;
use super::simulate::simulate_spec;
use crate::bloch::Bloch2Q;
use crate::cloning::{apply, ClonerSpec};
use crate::{ClonerFamily, Result};

/// Agreement threshold between a simulated pair and the closed-form map.
pub const MATCH_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairDeviation {
    /// Ordered pair, Alice's qubit first, e.g. `"14"`.
    pub pair: String,
    #[serde(skip)]
    pub state: Bloch2Q,
    /// Max-norm distance to the closed-form output.
    pub deviation: f64,
    /// Least-squares `a` in `(x', y') ≈ a (x, y)`; absent when the input has
    /// no local Bloch vectors.
    pub vector_shrink: Option<f64>,
    /// Least-squares `b` in `T' ≈ b T`; absent when `T = 0`.
    pub corr_shrink: Option<f64>,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancyReport {
    pub family: ClonerFamily,
    /// Gram convention for state-dependent families.
    pub convention: Option<GramConvention>,
    pub lambda: f64,
    pub mu: f64,
    pub isometry_residual: f64,
    pub machine_dim: usize,
    pub pairs: Vec<PairDeviation>,
    pub matching_pairs: Vec<String>,
    /// `‖ρ̃₁₄ − ρ̃₂₃‖` in Bloch max-norm.
    pub cross_symmetry: f64,
    /// Largest asymmetry of a within-lab pair under exchange of its qubits.
    pub exchange_asymmetry: f64,
}

impl DiscrepancyReport {
    pub fn max_deviation_matching(&self) -> Option<f64> {
        self.pairs.iter().filter(|p| p.matches).map(|p| p.deviation).reduce(f64::max)
    }

    pub fn pair(&self, name: &str) -> Option<&PairDeviation> {
        self.pairs.iter().find(|p| p.pair == name)
    }
}

fn shrink_fits(input: &Bloch2Q, out: &Bloch2Q) -> (Option<f64>, Option<f64>) {
    let vnorm = input.x.norm_squared() + input.y.norm_squared();
    let vector = (vnorm > 1e-12).then(|| (input.x.dot(&out.x) + input.y.dot(&out.y)) / vnorm);
    let tnorm = input.t.norm_squared();
    let corr = (tnorm > 1e-12).then(|| input.t.dot(&out.t) / tnorm);
    (vector, corr)
}

fn swap(s: &Bloch2Q) -> Bloch2Q {
    Bloch2Q::new(s.y, s.x, s.t.transpose())
}

/// Cross-check with the Buzek–Hillery Gram convention.
pub fn crosscheck_reduced_maps(s: &Bloch2Q, spec: &ClonerSpec) -> Result<DiscrepancyReport> {
    crosscheck_with_convention(s, spec, GramConvention::BhStandard)
}

/// Simulates the cloner, reduces to every output pair and compares each one
/// against the family's closed-form map.
pub fn crosscheck_with_convention(
    s: &Bloch2Q,
    spec: &ClonerSpec,
    convention: GramConvention,
) -> Result<DiscrepancyReport> {
    let sim = simulate_spec(s, spec, convention)?;
    let closed = apply(s, spec)?;
    let order = [("1", "4"), ("3", "2"), ("1", "2"), ("3", "4"), ("1", "3"), ("2", "4")];
    let mut pairs = Vec::with_capacity(order.len());
    for (a, b) in order {
        let state = sim.pair(a, b)?;
        let deviation = state.max_deviation(&closed);
        let (vector_shrink, corr_shrink) = shrink_fits(s, &state);
        pairs.push(PairDeviation {
            pair: format!("{a}{b}"),
            state,
            deviation,
            vector_shrink,
            corr_shrink,
            matches: deviation <= MATCH_TOL,
        });
    }
    let matching_pairs = pairs.iter().filter(|p| p.matches).map(|p| p.pair.clone()).collect();
    let cross_symmetry = pairs[0].state.max_deviation(&pairs[1].state);
    let exchange_asymmetry = pairs[4..]
        .iter()
        .map(|p| p.state.max_deviation(&swap(&p.state)))
        .fold(0.0, f64::max);
    Ok(DiscrepancyReport {
        family: spec.family(),
        convention: spec.family().is_state_dependent().then_some(convention),
        lambda: spec.lambda(),
        mu: spec.mu(),
        isometry_residual: sim.isometry_residual,
        machine_dim: sim.machine_dim,
        pairs,
        matching_pairs,
        cross_symmetry,
        exchange_asymmetry,
    })
}
