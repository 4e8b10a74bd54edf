//! Numerical tolerances shared by validation and the theorem checks.

/// Hermiticity residual ‖ρ − ρ†‖_max for a two-qubit density matrix.
pub const HERMITIAN: f64 = 1e-12;

/// |Tr ρ − 1| for a two-qubit density matrix.
pub const TRACE: f64 = 1e-12;

/// Minimum eigenvalue floor for hard validation of input states.
pub const PSD: f64 = 1e-10;

/// Minimum eigenvalue floor for states produced by simulation.
pub const PSD_SIMULATED: f64 = 1e-9;

/// Trace tolerance for simulated multi-party states.
pub const TRACE_SIMULATED: f64 = 1e-10;

/// Residual required of every constructed isometry, ‖V†V − I‖_max.
pub const ISOMETRY: f64 = 1e-10;

/// Smallest Gram eigenvalue accepted as PSD.
pub const GRAM_PSD: f64 = 1e-12;

/// Slack for the strict hypotheses `M > 1` and `F₃ > 1`.
pub const HYPOTHESIS: f64 = 1e-12;

/// Slack for closed-form bound comparisons (LHS criterion, theorem intervals).
pub const BOUND: f64 = 1e-12;

/// Exact-match window for the excluded machine parameters λ = 1/6, 1/10.
pub const LAMBDA_EXCLUSION: f64 = 1e-12;

/// Negativity above which a state is reported as entangled.
pub const ENTANGLED: f64 = 1e-10;

/// Singular values below this are treated as zero by the settings optimizer.
pub const RANK: f64 = 1e-12;
