//! Independent ground truth for the closed-form cloner maps.
//!
//! A cloner is specified by the Gram matrix of its machine vectors
//! ([`GramSpec`]); the vectors themselves come from a spectral factorization,
//! the isometry is assembled from the cloning transformation
//! `|i⟩|0⟩|X⟩ → c|i⟩|i⟩|X_ii⟩ + d Σ_{j≠i} (|i⟩|j⟩ + |j⟩|i⟩)|Y_ij⟩`,
//! and the broadcasting circuit is simulated as a dense density operator.
//!
//! Register labels: Alice holds qubits `1` and `3`, Bob holds `2` and `4`.
//! Local broadcasting clones `1 → (1, 3)` with machine `mA` and `2 → (2, 4)`
//! with machine `mB`; nonlocal broadcasting clones the pair `(1, 2) → (1, 2),
//! (3, 4)` with machine `m`. `ρ̃₁₄` is the pair `(1, 4)` and `ρ̃₂₃` is reported
//! Alice-first as `(3, 2)`.

mod crosscheck;
mod gram;
mod isometry;
mod simulate;

pub use crosscheck::{crosscheck_reduced_maps, crosscheck_with_convention, DiscrepancyReport, PairDeviation};
pub use gram::{GramConvention, GramKind, GramSpec, MachineVector};
pub use isometry::{build_sd_isometry, build_si_isometry, Isometry};
pub use simulate::{
    apply_local_channel, clone_fidelity, run_local_broadcast, run_nonlocal_broadcast, simulate_spec,
    Simulation,
};
