//! Buzek–Hillery cloner parameters and the Bloch-parameter maps they induce
//! on a shared two-qubit state.
//!
//! | family | machine | output pair |
//! |---|---|---|
//! | local, state dependent | `μ = 1 − 2λ`, `λ ∈ [0, ½] ∖ {1/6}` | `{μx, μy, μ²T}` |
//! | nonlocal, state dependent | `μ = 1 − 4λ`, `λ ∈ [0, ¼] ∖ {1/10}` | `{μx, μy, μT}` |
//! | local, universal (`M = 2`) | `c² = 2/3`, `d² = 1/6` | `{ηx, ηy, η²T}`, `η = 2/3` |
//! | nonlocal, universal (`M = 4`) | `c² = 2/5`, `d² = 1/10` | `{ηx, ηy, ηT}`, `η = 3/5` |
//!
//! The universal shrink factors are checked against the simulated isometries
//! in [`crate::oracle`]; the closed forms here never call into the oracle.

use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::bloch::{to_density, Bloch2Q};
use crate::criteria::{correlation_spectrum, report, report_unchecked, NonlocalityReport};
use crate::oracle::{self, GramConvention};
use crate::{tolerance, Error, Result};

/// Shrink factor of the `M = 2` universal cloner (equal to `c²`).
pub const LOCAL_SI_SHRINK: f64 = 2.0 / 3.0;
/// Shrink factor of the `M = 4` universal cloner, `(M + 2) / (2(M + 1))`.
pub const NONLOCAL_SI_SHRINK: f64 = 3.0 / 5.0;

pub const LOCAL_EXCLUDED_LAMBDA: f64 = 1.0 / 6.0;
pub const NONLOCAL_EXCLUDED_LAMBDA: f64 = 1.0 / 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClonerFamily {
    #[serde(alias = "local_state_dependent")]
    LocalSd,
    #[serde(alias = "nonlocal_state_dependent")]
    NonlocalSd,
    #[serde(alias = "local_state_independent")]
    LocalSi,
    #[serde(alias = "nonlocal_state_independent")]
    NonlocalSi,
}

impl ClonerFamily {
    pub fn is_local(self) -> bool {
        matches!(self, ClonerFamily::LocalSd | ClonerFamily::LocalSi)
    }

    pub fn is_state_dependent(self) -> bool {
        matches!(self, ClonerFamily::LocalSd | ClonerFamily::NonlocalSd)
    }

    /// Dimension of the cloned system.
    pub fn clone_dim(self) -> usize {
        if self.is_local() {
            2
        } else {
            4
        }
    }

    /// Schwarz-inequality cap used when none is given.
    pub fn default_mu_cap(self) -> f64 {
        match self {
            ClonerFamily::NonlocalSd | ClonerFamily::NonlocalSi => 1.0 / 6f64.sqrt(),
            ClonerFamily::LocalSd | ClonerFamily::LocalSi => std::f64::consts::FRAC_1_SQRT_2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ClonerFamily::LocalSd => "local_sd",
            ClonerFamily::NonlocalSd => "nonlocal_sd",
            ClonerFamily::LocalSi => "local_si",
            ClonerFamily::NonlocalSi => "nonlocal_si",
        }
    }
}

impl fmt::Display for ClonerFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClonerFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "local_sd" | "local_state_dependent" => Ok(ClonerFamily::LocalSd),
            "nonlocal_sd" | "nonlocal_state_dependent" => Ok(ClonerFamily::NonlocalSd),
            "local_si" | "local_state_independent" => Ok(ClonerFamily::LocalSi),
            "nonlocal_si" | "nonlocal_state_independent" => Ok(ClonerFamily::NonlocalSi),
            other => Err(Error::InvalidSpec(format!("unknown cloner family `{other}`"))),
        }
    }
}

/// A validated cloner. For state-dependent families `mu` is derived from
/// `lambda`; for universal families `lambda = d²` and `mu` is the shrink factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClonerSpec {
    family: ClonerFamily,
    lambda: f64,
    mu: f64,
    mu_cap: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct ClonerSpecJson {
    family: ClonerFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mu_cap: Option<f64>,
}

impl Serialize for ClonerSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ClonerSpecJson {
            family: self.family,
            lambda: self.family.is_state_dependent().then_some(self.lambda),
            mu_cap: Some(self.mu_cap),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ClonerSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = ClonerSpecJson::deserialize(deserializer)?;
        ClonerSpec::new(raw.family, raw.lambda.unwrap_or(f64::NAN), raw.mu_cap).map_err(serde::de::Error::custom)
    }
}

impl ClonerSpec {
    /// Validates `lambda` for state-dependent families; universal families
    /// ignore it. `mu_cap` defaults per family.
    pub fn new(family: ClonerFamily, lambda: f64, mu_cap: Option<f64>) -> Result<Self> {
        let mu_cap = mu_cap.unwrap_or_else(|| family.default_mu_cap());
        if !(mu_cap > 0.0 && mu_cap <= 1.0) {
            return Err(Error::InvalidSpec(format!("mu_cap {mu_cap} outside (0, 1]")));
        }
        let (lambda, mu) = match family {
            ClonerFamily::LocalSi => (1.0 / 6.0, LOCAL_SI_SHRINK),
            ClonerFamily::NonlocalSi => (1.0 / 10.0, NONLOCAL_SI_SHRINK),
            ClonerFamily::LocalSd | ClonerFamily::NonlocalSd => {
                let (max, excluded, slope, label) = if family == ClonerFamily::LocalSd {
                    (0.5, LOCAL_EXCLUDED_LAMBDA, 2.0, "1/6")
                } else {
                    (0.25, NONLOCAL_EXCLUDED_LAMBDA, 4.0, "1/10")
                };
                if !(0.0..=max).contains(&lambda) {
                    return Err(Error::InvalidSpec(format!("λ = {lambda} outside [0, {max}]")));
                }
                if (lambda - excluded).abs() <= tolerance::LAMBDA_EXCLUSION {
                    return Err(Error::InvalidSpec(format!(
                        "λ={label} restricted: the cloner loses its state dependence there"
                    )));
                }
                let mu = 1.0 - slope * lambda;
                if mu > mu_cap + tolerance::BOUND {
                    return Err(Error::InvalidSpec(format!("μ = {mu} exceeds mu_cap {mu_cap}")));
                }
                (lambda, mu)
            }
        };
        Ok(ClonerSpec { family, lambda, mu, mu_cap })
    }

    /// State-dependent spec with the machine parameter chosen through `μ`.
    pub fn from_mu(family: ClonerFamily, mu: f64, mu_cap: Option<f64>) -> Result<Self> {
        let lambda = match family {
            ClonerFamily::LocalSd => (1.0 - mu) / 2.0,
            ClonerFamily::NonlocalSd => (1.0 - mu) / 4.0,
            _ => {
                return Err(Error::InvalidSpec(format!("{family} has no free machine parameter")));
            }
        };
        Self::new(family, lambda, mu_cap)
    }

    pub fn local_si() -> Self {
        Self::new(ClonerFamily::LocalSi, f64::NAN, None).expect("universal spec is always valid")
    }

    pub fn nonlocal_si() -> Self {
        Self::new(ClonerFamily::NonlocalSi, f64::NAN, None).expect("universal spec is always valid")
    }

    pub fn family(&self) -> ClonerFamily {
        self.family
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn mu_cap(&self) -> f64 {
        self.mu_cap
    }

    /// `(c², d²)` of the universal families.
    pub fn si_coefficients(&self) -> Option<(f64, f64)> {
        match self.family {
            ClonerFamily::LocalSi => Some((2.0 / 3.0, 1.0 / 6.0)),
            ClonerFamily::NonlocalSi => Some((2.0 / 5.0, 1.0 / 10.0)),
            _ => None,
        }
    }
}

impl fmt::Display for ClonerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "family={} lambda={} mu={} mu_cap={}",
            self.family, self.lambda, self.mu, self.mu_cap
        )
    }
}

fn require(spec: &ClonerSpec, family: ClonerFamily) -> Result<()> {
    if spec.family == family {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("expected a {family} cloner, got {}", spec.family)))
    }
}

fn scaled(s: &Bloch2Q, local: f64, corr: f64) -> Bloch2Q {
    Bloch2Q::new(s.x * local, s.y * local, s.t * corr)
}

fn checked(out: Bloch2Q) -> Result<Bloch2Q> {
    debug_assert!(out.validate().is_ok(), "cloner map produced an unphysical state");
    Ok(out)
}

/// Output pair of the local state-dependent cloner: `{μx, μy, μ²T}`.
pub fn local_sd_map(s: &Bloch2Q, spec: &ClonerSpec) -> Result<Bloch2Q> {
    require(spec, ClonerFamily::LocalSd)?;
    checked(scaled(s, spec.mu, spec.mu * spec.mu))
}

/// Output pair of the nonlocal state-dependent cloner: `{μx, μy, μT}`.
pub fn nonlocal_sd_map(s: &Bloch2Q, spec: &ClonerSpec) -> Result<Bloch2Q> {
    require(spec, ClonerFamily::NonlocalSd)?;
    checked(scaled(s, spec.mu, spec.mu))
}

/// Cross-lab output pair of two local universal cloners: `{ηx, ηy, η²T}`, `η = 2/3`.
pub fn local_si_map(s: &Bloch2Q) -> Bloch2Q {
    let eta = LOCAL_SI_SHRINK;
    scaled(s, eta, eta * eta)
}

/// Copy pair of the `M = 4` universal cloner: `{ηx, ηy, ηT}`, `η = 3/5`.
pub fn nonlocal_si_map(s: &Bloch2Q) -> Bloch2Q {
    let eta = NONLOCAL_SI_SHRINK;
    scaled(s, eta, eta)
}

/// The closed-form map without the family check or the debug validation.
fn map_raw(s: &Bloch2Q, spec: &ClonerSpec) -> Bloch2Q {
    match spec.family {
        ClonerFamily::LocalSd => scaled(s, spec.mu, spec.mu * spec.mu),
        ClonerFamily::NonlocalSd => scaled(s, spec.mu, spec.mu),
        ClonerFamily::LocalSi => local_si_map(s),
        ClonerFamily::NonlocalSi => nonlocal_si_map(s),
    }
}

/// Closed-form map of any family.
pub fn apply(s: &Bloch2Q, spec: &ClonerSpec) -> Result<Bloch2Q> {
    match spec.family {
        ClonerFamily::LocalSd => local_sd_map(s, spec),
        ClonerFamily::NonlocalSd => nonlocal_sd_map(s, spec),
        ClonerFamily::LocalSi => Ok(local_si_map(s)),
        ClonerFamily::NonlocalSi => Ok(nonlocal_si_map(s)),
    }
}

/// Werner state `p|ψ⁺⟩⟨ψ⁺| + (1 − p)𝕀/4`, i.e. `T = diag(p, −p, p)`.
pub fn werner(p: f64) -> Result<Bloch2Q> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("Werner p = {p} outside [0, 1]")));
    }
    Ok(Bloch2Q::new(
        Default::default(),
        Default::default(),
        Matrix3::from_diagonal(&nalgebra::Vector3::new(p, -p, p)),
    ))
}

/// Bell-diagonal state `T = diag(c₁, c₂, c₃)`; rejected outside the tetrahedron.
pub fn bell_diagonal(c1: f64, c2: f64, c3: f64) -> Result<Bloch2Q> {
    for c in [c1, c2, c3] {
        if !(-1.0..=1.0).contains(&c) {
            return Err(Error::OutOfRange(format!("Bell-diagonal coefficient {c} outside [−1, 1]")));
        }
    }
    let s = Bloch2Q::new(
        Default::default(),
        Default::default(),
        Matrix3::from_diagonal(&nalgebra::Vector3::new(c1, c2, c3)),
    );
    let min = to_density(&s).eigenvalues()[3];
    if min < -tolerance::PSD {
        return Err(Error::UnphysicalTriple { c1, c2, c3, eigenvalue: min });
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// Bell-CHSH violation, `M > 1`.
    Chsh,
    /// Three-setting steering, `F₃ > 1`.
    F3,
    /// Nonzero negativity.
    Entanglement,
}

impl Criterion {
    pub fn holds(self, r: &NonlocalityReport) -> bool {
        match self {
            Criterion::Chsh => r.bell_nonlocal,
            Criterion::F3 => r.steerable3,
            Criterion::Entanglement => r.entangled,
        }
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chsh" => Ok(Criterion::Chsh),
            "f3" => Ok(Criterion::F3),
            "entanglement" | "ent" => Ok(Criterion::Entanglement),
            other => Err(Error::InvalidSpec(format!("unknown criterion `{other}`"))),
        }
    }
}

/// Result of checking one state against the no-broadcasting theorem that
/// matches the cloner family and criterion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    /// 1: local/CHSH, 2: nonlocal/CHSH, 3: local/F₃, 4: nonlocal/F₃.
    pub theorem: u8,
    pub mu: f64,
    /// Eigenvalue sum before cloning (`η₁+η₂` or `η₁+η₂+η₃`).
    pub pre_sum: f64,
    /// The same sum after cloning.
    pub post_sum: f64,
    /// `|post_sum − μᵏ·pre_sum|`.
    pub scaling_residual: f64,
    /// `[μᵏ, n·μᵏ]`, implied by `1 ≤ pre_sum ≤ n`.
    pub interval: (f64, f64),
    /// `n·capᵏ`, the bound quoted at the Schwarz cap.
    pub cap_bound: f64,
    /// Post-cloning `M` (CHSH) or `F₃`.
    pub post_value: f64,
    /// `1 − post_value`; the theorem's conclusion holds iff this is ≥ 0.
    pub margin: f64,
    pub in_interval: bool,
    pub conclusion_holds: bool,
}

impl BoundReport {
    pub fn holds(&self) -> bool {
        self.in_interval && self.conclusion_holds && self.scaling_residual <= tolerance::BOUND
    }
}

/// Computes the theorem quantities without turning violations into errors.
pub fn bound_report(s: &Bloch2Q, spec: &ClonerSpec, criterion: Criterion) -> Result<BoundReport> {
    if !spec.family.is_state_dependent() {
        return Err(Error::InvalidSpec("bound checks apply to state-dependent cloners".into()));
    }
    let local = spec.family.is_local();
    let terms = match criterion {
        Criterion::Chsh => 2,
        Criterion::F3 => 3,
        Criterion::Entanglement => {
            return Err(Error::InvalidSpec("no broadcasting bound for entanglement".into()));
        }
    };
    let pre = correlation_spectrum(s);
    let pre_sum: f64 = pre[..terms].iter().sum();
    if pre_sum.sqrt() <= 1.0 + tolerance::HYPOTHESIS && criterion == Criterion::F3
        || pre_sum <= 1.0 + tolerance::HYPOTHESIS && criterion == Criterion::Chsh
    {
        return Err(Error::Hypothesis(match criterion {
            Criterion::Chsh => format!("M = {pre_sum} does not exceed 1"),
            _ => format!("F3 = {} does not exceed 1", pre_sum.sqrt()),
        }));
    }
    let power = if local { 4 } else { 2 };
    let factor = spec.mu.powi(power);
    let post = map_raw(s, spec);
    let post_sum: f64 = correlation_spectrum(&post)[..terms].iter().sum();
    let scaling_residual = (post_sum - factor * pre_sum).abs();
    let interval = (factor, terms as f64 * factor);
    let cap_bound = terms as f64 * spec.mu_cap.powi(power);
    let post_value = match criterion {
        Criterion::Chsh => post_sum,
        _ => post_sum.sqrt(),
    };
    let tol = tolerance::BOUND;
    let in_interval = post_sum >= interval.0 - tol && post_sum <= interval.1 + tol && post_sum <= cap_bound + tol;
    let theorem = match (local, criterion) {
        (true, Criterion::Chsh) => 1,
        (false, Criterion::Chsh) => 2,
        (true, _) => 3,
        (false, _) => 4,
    };
    Ok(BoundReport {
        theorem,
        mu: spec.mu,
        pre_sum,
        post_sum,
        scaling_residual,
        interval,
        cap_bound,
        post_value,
        margin: 1.0 - post_value,
        in_interval,
        conclusion_holds: post_value <= 1.0 + tol,
    })
}

/// Applies the cloner, checks the post-cloning eigenvalue sum against the
/// theorem interval and asserts that the property is not broadcast.
pub fn theorem_bound_check(s: &Bloch2Q, spec: &ClonerSpec, criterion: Criterion) -> Result<BoundReport> {
    let r = bound_report(s, spec, criterion)?;
    if r.holds() {
        Ok(r)
    } else {
        Err(Error::BoundViolated(format!(
            "theorem {}: post sum {} vs interval [{}, {}] (cap bound {}), post value {}, scaling residual {:e}",
            r.theorem, r.post_sum, r.interval.0, r.interval.1, r.cap_bound, r.post_value, r.scaling_residual
        )))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BroadcastOutcome {
    pub spec: ClonerSpec,
    pub criterion: Criterion,
    pub input_report: NonlocalityReport,
    /// Cross-lab pair from the closed-form map (`ρ̃₁₄ ≡ ρ̃₂₃`).
    #[serde(skip)]
    pub nonlocal_pair_state: Bloch2Q,
    pub nonlocal_pair_report: NonlocalityReport,
    /// Within-lab pairs `(ρ̃₁₃, ρ̃₂₄)`; only known from the oracle.
    #[serde(skip)]
    pub local_pair_states: Option<(Bloch2Q, Bloch2Q)>,
    pub local_pair_reports: Option<(NonlocalityReport, NonlocalityReport)>,
    /// Largest deviation between the closed-form pair and the simulated
    /// cross-lab pairs, when the oracle ran.
    pub oracle_deviation: Option<f64>,
    pub broadcast_achieved: bool,
    /// Broadcast achieved and both within-lab pairs lack the property.
    /// False when the within-lab pairs are unknown.
    pub optimal_broadcast_achieved: bool,
}

pub fn broadcast_pipeline(
    s: &Bloch2Q,
    spec: &ClonerSpec,
    criterion: Criterion,
    use_oracle: bool,
) -> Result<BroadcastOutcome> {
    let input_report = report(s)?;
    let nonlocal_pair_state = apply(s, spec)?;
    let nonlocal_pair_report = report(&nonlocal_pair_state)?;

    let (mut local_pair_states, mut local_pair_reports, mut oracle_deviation) = (None, None, None);
    if use_oracle {
        let sim = oracle::simulate_spec(s, spec, GramConvention::BhStandard).map_err(|e| match e {
            Error::Unrealizable(_) | Error::NotIsometry(_) => Error::OracleUnavailable(format!("{spec}: {e}")),
            other => other,
        })?;
        let (p13, p24) = (sim.pair("1", "3")?, sim.pair("2", "4")?);
        let cross = sim.closed_form_pairs(spec.family)?;
        let dev = cross
            .iter()
            .map(|p| p.max_deviation(&nonlocal_pair_state))
            .fold(0.0, f64::max);
        local_pair_reports = Some((report_unchecked(&p13), report_unchecked(&p24)));
        local_pair_states = Some((p13, p24));
        oracle_deviation = Some(dev);
    }

    let broadcast_achieved = criterion.holds(&nonlocal_pair_report);
    let optimal_broadcast_achieved = broadcast_achieved
        && local_pair_reports
            .map(|(a, b)| !criterion.holds(&a) && !criterion.holds(&b))
            .unwrap_or(false);
    Ok(BroadcastOutcome {
        spec: *spec,
        criterion,
        input_report,
        nonlocal_pair_state,
        nonlocal_pair_report,
        local_pair_states,
        local_pair_reports,
        oracle_deviation,
        broadcast_achieved,
        optimal_broadcast_achieved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{f_n_closed, lhs_unsteerable, m_value};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn local(mu: f64) -> ClonerSpec {
        ClonerSpec::from_mu(ClonerFamily::LocalSd, mu, None).unwrap()
    }

    #[test]
    fn spec_relations() {
        let s = ClonerSpec::new(ClonerFamily::LocalSd, 0.2, None).unwrap();
        assert!((s.mu() - 0.6).abs() < 1e-15);
        let s = ClonerSpec::new(ClonerFamily::NonlocalSd, 0.2, None).unwrap();
        assert!((s.mu() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn excluded_lambdas_rejected() {
        let e = ClonerSpec::new(ClonerFamily::LocalSd, 0.1666666666667, None).unwrap_err();
        assert!(e.to_string().contains("λ=1/6 restricted"), "{e}");
        let e = ClonerSpec::new(ClonerFamily::NonlocalSd, 0.1, Some(1.0)).unwrap_err();
        assert!(e.to_string().contains("λ=1/10 restricted"), "{e}");
        // just outside the window
        assert!(ClonerSpec::new(ClonerFamily::LocalSd, 1.0 / 6.0 + 1e-9, None).is_ok());
    }

    #[test]
    fn lambda_range_and_cap() {
        assert!(ClonerSpec::new(ClonerFamily::LocalSd, 0.6, None).is_err());
        assert!(ClonerSpec::new(ClonerFamily::NonlocalSd, 0.3, None).is_err());
        // μ = 0.9 > 1/√2
        assert!(ClonerSpec::new(ClonerFamily::LocalSd, 0.05, None).is_err());
        assert!(ClonerSpec::new(ClonerFamily::LocalSd, 0.05, Some(1.0)).is_ok());
        assert!(ClonerSpec::new(ClonerFamily::LocalSd, 0.3, Some(0.0)).is_err());
        // μ ≈ 1/√2 right at the cap
        assert!(ClonerSpec::new(ClonerFamily::LocalSd, 0.14645, None).is_ok());
    }

    #[test]
    fn spec_json() {
        let spec: ClonerSpec =
            serde_json::from_str(r#"{"family":"local_sd","lambda":0.25,"mu_cap":0.7071067811865476}"#).unwrap();
        assert_eq!(spec.mu(), 0.5);
        let back: ClonerSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
        let long: ClonerSpec = serde_json::from_str(r#"{"family":"nonlocal_state_independent"}"#).unwrap();
        assert_eq!(long.family(), ClonerFamily::NonlocalSi);
        assert!(serde_json::from_str::<ClonerSpec>(r#"{"family":"local_sd","lambda":0.0}"#).is_err());
    }

    #[test]
    fn maps_fix_maximally_mixed() {
        let mm = Bloch2Q::maximally_mixed();
        assert_eq!(local_sd_map(&mm, &local(0.5)).unwrap(), mm);
        let nl = ClonerSpec::from_mu(ClonerFamily::NonlocalSd, 0.3, None).unwrap();
        assert_eq!(nonlocal_sd_map(&mm, &nl).unwrap(), mm);
        assert_eq!(local_si_map(&mm), mm);
    }

    #[test]
    fn wrong_family_rejected() {
        let mm = Bloch2Q::maximally_mixed();
        assert!(nonlocal_sd_map(&mm, &local(0.5)).is_err());
        assert!(local_sd_map(&mm, &ClonerSpec::local_si()).is_err());
    }

    #[test]
    fn local_sd_werner() {
        let out = local_sd_map(&werner(0.9).unwrap(), &local(FRAC_1_SQRT_2)).unwrap();
        let expect = Matrix3::from_diagonal(&nalgebra::Vector3::new(0.45, -0.45, 0.45));
        assert!((out.t - expect).amax() < 1e-12);
        assert!((m_value(&out) - 0.405).abs() < 1e-12);
    }

    #[test]
    fn nonlocal_sd_singlet() {
        let spec = ClonerSpec::from_mu(ClonerFamily::NonlocalSd, FRAC_1_SQRT_2, Some(FRAC_1_SQRT_2)).unwrap();
        let out = nonlocal_sd_map(&Bloch2Q::singlet(), &spec).unwrap();
        assert!((m_value(&out) - 1.0).abs() < 1e-12);
        let spec = ClonerSpec::from_mu(ClonerFamily::NonlocalSd, 1.0 / 6f64.sqrt(), None).unwrap();
        let out = nonlocal_sd_map(&Bloch2Q::singlet(), &spec).unwrap();
        assert!((f_n_closed(&out, 3).unwrap() - FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn local_si_singlet() {
        let out = local_si_map(&Bloch2Q::singlet());
        assert!((out.t + Matrix3::identity() * (4.0 / 9.0)).amax() < 1e-15);
        assert!((m_value(&out) - 32.0 / 81.0).abs() < 1e-12);
    }

    #[test]
    fn werner_family() {
        assert_eq!(werner(0.0).unwrap(), Bloch2Q::maximally_mixed());
        let ev = werner(1.0).unwrap().to_density().eigenvalues();
        for (a, b) in ev.iter().zip([1.0, 0.0, 0.0, 0.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        let ev = werner(0.5).unwrap().to_density().eigenvalues();
        for (a, b) in ev.iter().zip([0.625, 0.125, 0.125, 0.125]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(werner(1.1).is_err());
        assert!(werner(-0.1).is_err());
    }

    #[test]
    fn bell_diagonal_family() {
        assert_eq!(bell_diagonal(0.0, 0.0, 0.0).unwrap(), Bloch2Q::maximally_mixed());
        assert_eq!(bell_diagonal(-1.0, -1.0, -1.0).unwrap(), Bloch2Q::singlet());
        match bell_diagonal(1.0, 1.0, 1.0) {
            Err(Error::UnphysicalTriple { eigenvalue, .. }) => assert!((eigenvalue + 0.5).abs() < 1e-12),
            other => panic!("expected rejection, got {other:?}"),
        }
        assert!(bell_diagonal(1.5, 0.0, 0.0).is_err());
    }

    #[test]
    fn theorem_one_singlet() {
        let r = theorem_bound_check(&Bloch2Q::singlet(), &local(FRAC_1_SQRT_2), Criterion::Chsh).unwrap();
        assert_eq!(r.theorem, 1);
        assert!((r.post_sum - 0.5).abs() < 1e-12);
        assert!(r.post_sum >= 0.25 - 1e-12 && r.post_sum <= 0.5 + 1e-12);
    }

    #[test]
    fn theorem_four_singlet() {
        let spec = ClonerSpec::from_mu(ClonerFamily::NonlocalSd, 1.0 / 6f64.sqrt(), None).unwrap();
        let r = theorem_bound_check(&Bloch2Q::singlet(), &spec, Criterion::F3).unwrap();
        assert_eq!(r.theorem, 4);
        assert!((r.post_value - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(r.post_value >= 1.0 / 6f64.sqrt() - 1e-12);
    }

    #[test]
    fn theorem_three_werner() {
        let r = theorem_bound_check(&werner(0.75).unwrap(), &local(FRAC_1_SQRT_2), Criterion::F3).unwrap();
        assert!((r.post_value - 0.5 * 3f64.sqrt() * 0.75).abs() < 1e-12);
        assert!(r.post_value <= 3f64.sqrt() / 2.0);
    }

    #[test]
    fn hypothesis_enforced() {
        let e = theorem_bound_check(&werner(0.7).unwrap(), &local(0.5), Criterion::Chsh).unwrap_err();
        assert!(matches!(e, Error::Hypothesis(_)));
        let e = theorem_bound_check(&werner(0.5).unwrap(), &local(0.5), Criterion::F3).unwrap_err();
        assert!(matches!(e, Error::Hypothesis(_)));
    }

    #[test]
    fn cap_mismatch_is_reported_as_violation() {
        // the nonlocal cloner at μ = 1/√2 leaves the singlet 3-steerable
        let spec = ClonerSpec::from_mu(ClonerFamily::NonlocalSd, FRAC_1_SQRT_2, Some(FRAC_1_SQRT_2)).unwrap();
        let e = theorem_bound_check(&Bloch2Q::singlet(), &spec, Criterion::F3).unwrap_err();
        assert!(matches!(e, Error::BoundViolated(_)));
    }

    #[test]
    fn pipeline_without_oracle() {
        let out = broadcast_pipeline(&Bloch2Q::singlet(), &local(FRAC_1_SQRT_2), Criterion::Chsh, false).unwrap();
        assert!(out.input_report.bell_nonlocal);
        assert!(!out.broadcast_achieved);
        assert!(!out.optimal_broadcast_achieved);
        let out = broadcast_pipeline(&Bloch2Q::singlet(), &ClonerSpec::local_si(), Criterion::Chsh, false).unwrap();
        assert!((out.nonlocal_pair_report.m_value - 32.0 / 81.0).abs() < 1e-12);
        assert!(!out.broadcast_achieved);
        for spec in [ClonerSpec::local_si(), ClonerSpec::nonlocal_si(), local(0.5)] {
            let out = broadcast_pipeline(&Bloch2Q::maximally_mixed(), &spec, Criterion::F3, false).unwrap();
            assert!(!out.broadcast_achieved);
        }
    }

    #[test]
    fn werner_lhs_after_local_cloning() {
        for k in 0..=100 {
            let p = k as f64 / 100.0;
            let out = local_sd_map(&werner(p).unwrap(), &local(FRAC_1_SQRT_2)).unwrap();
            assert!(lhs_unsteerable(&out), "p = {p}");
        }
    }
}
