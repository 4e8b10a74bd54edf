//! Numerical suites for the six no-broadcasting theorems.
//!
//! Theorems 1–4 draw states from the purification sampler, keep those that
//! satisfy the hypothesis (`M > 1` or `F₃ > 1`) and push each through the
//! state-dependent cloner across a μ grid. Theorems 5 and 6 sweep the Werner
//! line and the Bell-diagonal tetrahedron through the local cloner and check
//! the LHS criterion.

use serde::Serialize;

use crate::bloch::Bloch2Q;
use crate::cloning::{bell_diagonal, bound_report, local_sd_map, werner, ClonerFamily, ClonerSpec, Criterion};
use crate::criteria::{correlation_spectrum, f_n_closed, lhs_margin, m_value};
use crate::sampling::{seeded, StateSampler};
use crate::{tolerance, Error, Result};

/// Rows kept per theorem, closest to the boundary first.
pub const WORST_KEPT: usize = 10;

const MAX_DRAWS_PER_ACCEPT: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Theorem {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
}

impl Theorem {
    pub const ALL: [Theorem; 6] = [Theorem::T1, Theorem::T2, Theorem::T3, Theorem::T4, Theorem::T5, Theorem::T6];

    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_number(n: u8) -> Result<Self> {
        Self::ALL
            .get((n as usize).wrapping_sub(1))
            .copied()
            .ok_or_else(|| Error::InvalidSpec(format!("no theorem {n}")))
    }

    pub fn family(self) -> ClonerFamily {
        match self {
            Theorem::T2 | Theorem::T4 => ClonerFamily::NonlocalSd,
            _ => ClonerFamily::LocalSd,
        }
    }

    /// `None` for the LHS sweeps.
    pub fn criterion(self) -> Option<Criterion> {
        match self {
            Theorem::T1 | Theorem::T2 => Some(Criterion::Chsh),
            Theorem::T3 | Theorem::T4 => Some(Criterion::F3),
            _ => None,
        }
    }

    /// Theorem 2 is stated with the 1/√2 cap, theorem 4 with 1/√6.
    pub fn default_mu_cap(self) -> f64 {
        match self {
            Theorem::T4 => ClonerFamily::NonlocalSd.default_mu_cap(),
            _ => std::f64::consts::FRAC_1_SQRT_2,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Theorem::T1 => "local SD cloner, CHSH: post M in [mu^4, 2 mu^4], M <= 1",
            Theorem::T2 => "nonlocal SD cloner, CHSH: post M in [mu^2, 2 mu^2], M <= 1",
            Theorem::T3 => "local SD cloner, F3: post F3^2 in [mu^4, 3 mu^4], F3 <= 1",
            Theorem::T4 => "nonlocal SD cloner, F3: post F3^2 in [mu^2, 3 mu^2], F3 <= 1",
            Theorem::T5 => "local SD cloner on Werner states: LHS criterion holds",
            Theorem::T6 => "local SD cloner on Bell-diagonal states: LHS criterion holds",
        }
    }
}

impl std::fmt::Display for Theorem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "T{}", self.number())
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Accepted states per sampled theorem.
    pub count: usize,
    pub seed: u64,
    /// Overrides the default grid for every theorem.
    pub mu_grid: Option<Vec<f64>>,
    /// Overrides the per-theorem cap.
    pub mu_cap: Option<f64>,
    pub werner_step: f64,
    pub bell_step: f64,
    pub sampler: StateSampler,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            count: 1000,
            seed: 0,
            mu_grid: None,
            mu_cap: None,
            werner_step: 0.01,
            bell_step: 0.05,
            sampler: StateSampler::default(),
        }
    }
}

/// One (state, μ) evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseRow {
    pub theorem: Theorem,
    /// Sample index for T1–T4, grid index for T5–T6.
    pub case: usize,
    /// `p=…` or `c=(…)`; empty for sampled states.
    pub params: String,
    pub mu: f64,
    pub lambda: f64,
    /// `M`, `F₃` or `|x|² + 2√η_max` before cloning.
    pub pre_value: f64,
    pub post_value: f64,
    /// Theorem interval on the post-cloning eigenvalue sum; NaN for T5–T6.
    pub lower: f64,
    pub upper: f64,
    pub scaling_residual: f64,
    /// Distance to the failing side; negative means a counterexample.
    pub margin: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremResult {
    pub theorem: Theorem,
    pub description: &'static str,
    pub mu_cap: f64,
    pub mu_grid: Vec<f64>,
    /// Grid values whose λ is excluded for this family.
    pub skipped_mu: Vec<f64>,
    /// States sampled (T1–T4) or grid points visited (T5–T6).
    pub states: usize,
    /// Draws needed to collect `states` (T1–T4 only).
    pub draws: usize,
    /// Unphysical Bell-diagonal triples skipped (T6 only).
    pub skipped_states: usize,
    pub checks: usize,
    pub counterexamples: usize,
    pub max_scaling_residual: f64,
    pub max_post_value: f64,
    pub worst: Vec<CaseRow>,
}

impl TheoremResult {
    pub fn passed(&self) -> bool {
        self.counterexamples == 0 && self.checks > 0
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.draws == 0 {
            f64::NAN
        } else {
            self.states as f64 / self.draws as f64
        }
    }
}

/// `{0.1, 0.2, …} ∩ (0, cap)` followed by `cap` itself.
pub fn default_mu_grid(cap: f64) -> Vec<f64> {
    let mut grid: Vec<f64> = (1..)
        .map(|k| k as f64 / 10.0)
        .take_while(|&mu| mu < cap - tolerance::BOUND)
        .collect();
    grid.push(cap);
    grid
}

/// `start, start + step, …` up to `stop` inclusive, built from integer
/// multiples so the endpoints are exact.
pub fn linear_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !step.is_finite() || step <= 0.0 || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(Error::InvalidSpec(format!("bad grid {start}:{stop}:{step}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=n).map(|k| start + k as f64 * step).collect();
    if let Some(last) = grid.last_mut() {
        if (*last - stop).abs() < 1e-9 * step {
            *last = stop;
        }
    }
    Ok(grid)
}

struct Tally {
    theorem: Theorem,
    rows: Vec<CaseRow>,
    checks: usize,
    counterexamples: usize,
    max_scaling_residual: f64,
    max_post_value: f64,
}

impl Tally {
    fn new(theorem: Theorem) -> Self {
        Tally {
            theorem,
            rows: Vec::new(),
            checks: 0,
            counterexamples: 0,
            max_scaling_residual: 0.0,
            max_post_value: f64::NEG_INFINITY,
        }
    }

    fn push(&mut self, row: CaseRow) {
        self.checks += 1;
        if !row.passed {
            self.counterexamples += 1;
        }
        if row.scaling_residual.is_finite() {
            self.max_scaling_residual = self.max_scaling_residual.max(row.scaling_residual);
        }
        self.max_post_value = self.max_post_value.max(row.post_value);
        self.rows.push(row);
        if self.rows.len() >= 8 * WORST_KEPT {
            self.trim();
        }
    }

    fn trim(&mut self) {
        self.rows.sort_by(|a, b| {
            a.margin
                .total_cmp(&b.margin)
                .then(a.case.cmp(&b.case))
                .then(a.mu.total_cmp(&b.mu))
        });
        self.rows.truncate(WORST_KEPT);
    }

    fn finish(mut self, cap: f64, grid: Vec<f64>, skipped_mu: Vec<f64>) -> TheoremResult {
        self.trim();
        TheoremResult {
            theorem: self.theorem,
            description: self.theorem.description(),
            mu_cap: cap,
            mu_grid: grid,
            skipped_mu,
            states: 0,
            draws: 0,
            skipped_states: 0,
            checks: self.checks,
            counterexamples: self.counterexamples,
            max_scaling_residual: self.max_scaling_residual,
            max_post_value: self.max_post_value,
            worst: self.rows,
        }
    }
}

/// Specs for every admissible grid point plus the μ values that were skipped.
fn specs_for(family: ClonerFamily, cap: f64, grid: &[f64]) -> Result<(Vec<ClonerSpec>, Vec<f64>)> {
    let mut specs = Vec::new();
    let mut skipped = Vec::new();
    for &mu in grid {
        if !(mu > 0.0 && mu <= cap + tolerance::BOUND) {
            return Err(Error::InvalidSpec(format!("μ = {mu} outside (0, {cap}]")));
        }
        match ClonerSpec::from_mu(family, mu, Some(cap)) {
            Ok(spec) => specs.push(spec),
            Err(Error::InvalidSpec(msg)) if msg.contains("restricted") => skipped.push(mu),
            Err(e) => return Err(e),
        }
    }
    Ok((specs, skipped))
}

fn hypothesis_value(s: &Bloch2Q, criterion: Criterion) -> f64 {
    match criterion {
        Criterion::Chsh => m_value(s),
        _ => f_n_closed(s, 3).expect("n = 3 is valid"),
    }
}

/// Rejection-samples `count` states satisfying the hypothesis of `theorem`.
/// Returns the states and the number of draws.
pub fn sample_hypothesis_states(theorem: Theorem, cfg: &VerifyConfig) -> Result<(Vec<Bloch2Q>, usize)> {
    let criterion = theorem
        .criterion()
        .ok_or_else(|| Error::InvalidSpec(format!("{theorem} is a grid sweep")))?;
    let mut rng = seeded(cfg.seed.wrapping_add(theorem.number() as u64));
    let mut states = Vec::with_capacity(cfg.count);
    let mut draws = 0usize;
    let limit = cfg.count.max(1).saturating_mul(MAX_DRAWS_PER_ACCEPT);
    while states.len() < cfg.count {
        if draws >= limit {
            return Err(Error::InvalidSpec(format!(
                "{theorem}: only {} of {} states accepted after {draws} draws",
                states.len(),
                cfg.count
            )));
        }
        draws += 1;
        let s = cfg.sampler.bloch(&mut rng);
        // M ≤ F₃² = ‖T‖²_F, so most draws are rejected without a spectrum
        if s.t.norm_squared() <= 1.0 {
            continue;
        }
        if hypothesis_value(&s, criterion) > 1.0 + tolerance::HYPOTHESIS {
            states.push(s);
        }
    }
    Ok((states, draws))
}

fn sampled_suite(theorem: Theorem, cfg: &VerifyConfig) -> Result<TheoremResult> {
    let criterion = theorem.criterion().expect("sampled theorem");
    let cap = cfg.mu_cap.unwrap_or_else(|| theorem.default_mu_cap());
    let grid = cfg.mu_grid.clone().unwrap_or_else(|| default_mu_grid(cap));
    let (specs, skipped) = specs_for(theorem.family(), cap, &grid)?;
    let (states, draws) = sample_hypothesis_states(theorem, cfg)?;
    let mut tally = Tally::new(theorem);
    for (case, s) in states.iter().enumerate() {
        let pre_value = hypothesis_value(s, criterion);
        for spec in &specs {
            let r = bound_report(s, spec, criterion)?;
            tally.push(CaseRow {
                theorem,
                case,
                params: String::new(),
                mu: spec.mu(),
                lambda: spec.lambda(),
                pre_value,
                post_value: r.post_value,
                lower: r.interval.0,
                upper: r.interval.1,
                scaling_residual: r.scaling_residual,
                margin: r.margin,
                passed: r.holds(),
            });
        }
    }
    let mut result = tally.finish(cap, grid, skipped);
    result.states = states.len();
    result.draws = draws;
    Ok(result)
}

fn lhs_row(theorem: Theorem, case: usize, params: String, s: &Bloch2Q, spec: &ClonerSpec) -> Result<CaseRow> {
    let post = local_sd_map(s, spec)?;
    let pre_value = 1.0 - lhs_margin(s);
    let margin = lhs_margin(&post);
    Ok(CaseRow {
        theorem,
        case,
        params,
        mu: spec.mu(),
        lambda: spec.lambda(),
        pre_value,
        post_value: 1.0 - margin,
        lower: f64::NAN,
        upper: f64::NAN,
        scaling_residual: f64::NAN,
        margin,
        passed: margin >= -tolerance::BOUND,
    })
}

fn werner_suite(cfg: &VerifyConfig) -> Result<TheoremResult> {
    let theorem = Theorem::T5;
    let cap = cfg.mu_cap.unwrap_or_else(|| theorem.default_mu_cap());
    let grid = cfg.mu_grid.clone().unwrap_or_else(|| default_mu_grid(cap));
    let (specs, skipped) = specs_for(ClonerFamily::LocalSd, cap, &grid)?;
    let ps = linear_grid(0.0, 1.0, cfg.werner_step)?;
    let mut tally = Tally::new(theorem);
    for (case, &p) in ps.iter().enumerate() {
        let s = werner(p)?;
        for spec in &specs {
            tally.push(lhs_row(theorem, case, format!("p={p}"), &s, spec)?);
        }
    }
    let mut result = tally.finish(cap, grid, skipped);
    result.states = ps.len();
    Ok(result)
}

fn bell_diagonal_suite(cfg: &VerifyConfig) -> Result<TheoremResult> {
    let theorem = Theorem::T6;
    let cap = cfg.mu_cap.unwrap_or_else(|| theorem.default_mu_cap());
    let grid = cfg.mu_grid.clone().unwrap_or_else(|| default_mu_grid(cap));
    let (specs, skipped) = specs_for(ClonerFamily::LocalSd, cap, &grid)?;
    let axis = linear_grid(-1.0, 1.0, cfg.bell_step)?;
    let mut tally = Tally::new(theorem);
    let mut visited = 0;
    let mut unphysical = 0;
    let mut case = 0;
    for &c1 in &axis {
        for &c2 in &axis {
            for &c3 in &axis {
                let idx = case;
                case += 1;
                let s = match bell_diagonal(c1, c2, c3) {
                    Ok(s) => s,
                    Err(Error::UnphysicalTriple { .. }) => {
                        unphysical += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                visited += 1;
                for spec in &specs {
                    tally.push(lhs_row(theorem, idx, format!("c=({c1},{c2},{c3})"), &s, spec)?);
                }
            }
        }
    }
    let mut result = tally.finish(cap, grid, skipped);
    result.states = visited;
    result.skipped_states = unphysical;
    Ok(result)
}

pub fn verify_theorem(theorem: Theorem, cfg: &VerifyConfig) -> Result<TheoremResult> {
    match theorem {
        Theorem::T5 => werner_suite(cfg),
        Theorem::T6 => bell_diagonal_suite(cfg),
        _ => sampled_suite(theorem, cfg),
    }
}

/// Post-cloning eigenvalue sums for a single state, exposed for callers that
/// want the raw numbers rather than a pass/fail.
pub fn post_sums(s: &Bloch2Q, spec: &ClonerSpec) -> Result<(f64, f64)> {
    let post = crate::cloning::apply(s, spec)?;
    let eta = correlation_spectrum(&post);
    Ok((eta[0] + eta[1], eta[0] + eta[1] + eta[2]))
}
