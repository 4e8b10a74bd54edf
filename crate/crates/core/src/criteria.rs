//! Nonlocality, steering, LHS and entanglement criteria on two-qubit states.
//!
//! Everything except [`negativity`] is a function of the spectrum
//! `η₁ ≥ η₂ ≥ η₃` of `TᵀT`:
//!
//! - Horodecki: `M = η₁ + η₂`, maximal CHSH value `S = 2√M`, violation iff `M > 1`.
//! - CJWR: `F_n` maximized over settings is `√(η₁ + … + η_n)`; `F_n > 1` witnesses
//!   steering with `n` settings.
//! - LHS: `|x|² + 2√η₁ ≤ 1` is sufficient for an LHS model (unsteerable under
//!   any number of settings). It is a sufficient condition only.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::bloch::{to_density, Bloch2Q, Density4};
use crate::linalg::{givens3, herm4_eigenvalues, sym3_eigen, sym3_eigenvalues};
use crate::{tolerance, Error, Result};

/// Eigenvalues of `TᵀT`, descending, clamped at zero.
pub fn correlation_spectrum(s: &Bloch2Q) -> [f64; 3] {
    sym3_eigenvalues(&s.correlation_gram()).map(|e| e.max(0.0))
}

/// Sum of the two largest eigenvalues of `TᵀT`.
pub fn m_value(s: &Bloch2Q) -> f64 {
    let e = correlation_spectrum(s);
    e[0] + e[1]
}

/// Maximal Bell-CHSH value `2√M`.
pub fn chsh_value(s: &Bloch2Q) -> f64 {
    2.0 * m_value(s).sqrt()
}

pub fn violates_chsh(s: &Bloch2Q) -> bool {
    m_value(s) > 1.0 + tolerance::HYPOTHESIS
}

fn check_n(n: usize) -> Result<()> {
    if n == 2 || n == 3 {
        Ok(())
    } else {
        Err(Error::SettingsCount(n))
    }
}

/// Maximum of `F_n` over all settings: `√` of the `n` largest eigenvalues of `TᵀT`.
pub fn f_n_closed(s: &Bloch2Q, n: usize) -> Result<f64> {
    check_n(n)?;
    let e = correlation_spectrum(s);
    Ok(e[..n].iter().sum::<f64>().sqrt())
}

/// Measurement directions for the `n`-setting steering functional: Alice
/// measures `ûᵢ·σ`, Bob measures `v̂ᵢ·σ` with the `v̂ᵢ` orthonormal.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasSettings {
    u: Vec<Vector3<f64>>,
    v: Vec<Vector3<f64>>,
}

impl MeasSettings {
    pub fn new(u: Vec<Vector3<f64>>, v: Vec<Vector3<f64>>) -> Result<Self> {
        let m = Self::new_unchecked(u, v);
        m.validate()?;
        Ok(m)
    }

    pub fn new_unchecked(u: Vec<Vector3<f64>>, v: Vec<Vector3<f64>>) -> Self {
        MeasSettings { u, v }
    }

    pub fn n(&self) -> usize {
        self.u.len()
    }

    pub fn u(&self) -> &[Vector3<f64>] {
        &self.u
    }

    pub fn v(&self) -> &[Vector3<f64>] {
        &self.v
    }

    pub fn validate(&self) -> Result<()> {
        let tol = 1e-10;
        check_n(self.u.len())?;
        if self.v.len() != self.u.len() {
            return Err(Error::InvalidSettings(format!(
                "{} Alice directions but {} Bob directions",
                self.u.len(),
                self.v.len()
            )));
        }
        for (i, u) in self.u.iter().enumerate() {
            if (u.norm() - 1.0).abs() > tol {
                return Err(Error::InvalidSettings(format!("|u_{}| = {}", i + 1, u.norm())));
            }
        }
        for (i, a) in self.v.iter().enumerate() {
            for (j, b) in self.v.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                if (a.dot(b) - want).abs() > tol {
                    return Err(Error::InvalidSettings(format!(
                        "v_{}·v_{} = {} (expected {want})",
                        i + 1,
                        j + 1,
                        a.dot(b)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `F_n` for explicit settings: `(1/√n)|Σ ûᵢᵀ T v̂ᵢ|`, using
/// `⟨(û·σ)⊗(v̂·σ)⟩ = ûᵀTv̂`.
pub fn f_n_direct(s: &Bloch2Q, m: &MeasSettings) -> Result<f64> {
    m.validate()?;
    let n = m.n();
    let sum: f64 = m.u.iter().zip(&m.v).map(|(u, v)| u.dot(&(s.t * v))).sum();
    Ok(sum.abs() / (n as f64).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FnOptimum {
    pub value: f64,
    pub settings: MeasSettings,
    /// `T` has fewer than `n` nonzero singular values.
    pub degenerate: bool,
}

const MAX_SWEEPS: usize = 200;
const SWEEP_TOL: f64 = 1e-12;
const ANGLE_GRID: usize = 96;

fn frame_score(t: &Matrix3<f64>, frame: &Matrix3<f64>, n: usize) -> f64 {
    (0..n).map(|i| (t * frame.column(i)).norm()).sum()
}

/// Best rotation angle in plane `(a, b)` by grid search plus golden-section
/// refinement. The score has period π in the angle.
fn best_angle(t: &Matrix3<f64>, frame: &Matrix3<f64>, n: usize, a: usize, b: usize) -> (f64, f64) {
    let score = |theta: f64| frame_score(t, &(frame * givens3(a, b, theta)), n);
    let step = std::f64::consts::PI / ANGLE_GRID as f64;
    let (mut best_theta, mut best) = (0.0, score(0.0));
    for k in 1..ANGLE_GRID {
        let theta = k as f64 * step;
        let v = score(theta);
        if v > best {
            best = v;
            best_theta = theta;
        }
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (best_theta - step, best_theta + step);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (score(c), score(d));
    while hi - lo > 1e-13 {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = score(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = score(d);
        }
    }
    let mid = 0.5 * (lo + hi);
    let v = score(mid);
    if v > best {
        (mid, v)
    } else {
        (best_theta, best)
    }
}

/// Settings maximizing `F_n`. The `v̂` frame starts from the right-singular
/// basis of `T` and is refined by coordinate ascent over rotations in the three
/// coordinate planes; `ûᵢ = Tv̂ᵢ/‖Tv̂ᵢ‖`.
pub fn optimize_f_n(s: &Bloch2Q, n: usize) -> Result<FnOptimum> {
    check_n(n)?;
    let t = s.t;
    let (eta, basis) = sym3_eigen(&(t.transpose() * t));
    let degenerate = eta[n - 1].max(0.0).sqrt() < tolerance::RANK;

    let mut frame = basis;
    let mut current = frame_score(&t, &frame, n);
    for _ in 0..MAX_SWEEPS {
        let start = current;
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let (theta, value) = best_angle(&t, &frame, n, a, b);
            if value > current {
                frame *= givens3(a, b, theta);
                current = value;
            }
        }
        if current - start < SWEEP_TOL {
            break;
        }
    }

    let v: Vec<Vector3<f64>> = (0..n).map(|i| frame.column(i).into_owned()).collect();
    let u: Vec<Vector3<f64>> = v
        .iter()
        .map(|vi| {
            let tv = t * vi;
            let norm = tv.norm();
            if norm > tolerance::RANK {
                tv / norm
            } else {
                *vi
            }
        })
        .collect();
    let settings = MeasSettings::new(u, v)?;
    let value = f_n_direct(s, &settings)?;
    Ok(FnOptimum { value, settings, degenerate })
}

/// `1 − (|x|² + 2√η_max)`; nonnegative iff the LHS criterion holds.
pub fn lhs_margin(s: &Bloch2Q) -> f64 {
    let eta_max = correlation_spectrum(s)[0];
    1.0 - (s.x.norm_squared() + 2.0 * eta_max.sqrt())
}

/// Sufficient condition for an LHS model with `x` the steering party's Bloch
/// vector: `|x|² + 2√η_max ≤ 1`.
pub fn lhs_unsteerable(s: &Bloch2Q) -> bool {
    lhs_margin(s) >= -tolerance::BOUND
}

/// Sum of the magnitudes of the negative eigenvalues of `ρ^{T_B}`.
pub fn negativity(rho: &Density4) -> f64 {
    herm4_eigenvalues(&rho.partial_transpose())
        .iter()
        .filter(|e| **e < 0.0)
        .fold(0.0, |acc, e| acc - e)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonlocalityReport {
    pub m_value: f64,
    pub chsh_s: f64,
    pub f2: f64,
    pub f3: f64,
    pub bell_nonlocal: bool,
    pub steerable3: bool,
    pub lhs_unsteerable: bool,
    pub negativity: f64,
    pub entangled: bool,
}

/// Every criterion for a validated state.
pub fn report(s: &Bloch2Q) -> Result<NonlocalityReport> {
    s.validate()?;
    Ok(report_unchecked(s))
}

/// [`report`] without the validation step, for states already known to be
/// physical up to simulation roundoff.
pub fn report_unchecked(s: &Bloch2Q) -> NonlocalityReport {
    let e = correlation_spectrum(s);
    let m = e[0] + e[1];
    let f2 = m.sqrt();
    let f3 = (m + e[2]).sqrt();
    let neg = negativity(&to_density(s));
    NonlocalityReport {
        m_value: m,
        chsh_s: 2.0 * f2,
        f2,
        f3,
        bell_nonlocal: m > 1.0 + tolerance::HYPOTHESIS,
        steerable3: f3 > 1.0 + tolerance::HYPOTHESIS,
        lhs_unsteerable: lhs_unsteerable(s),
        negativity: neg,
        entangled: neg > tolerance::ENTANGLED,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloning::werner;
    use nalgebra::Matrix3;

    fn diag(a: f64, b: f64, c: f64) -> Bloch2Q {
        Bloch2Q::new(
            Vector3::zeros(),
            Vector3::zeros(),
            Matrix3::from_diagonal(&Vector3::new(a, b, c)),
        )
    }

    #[test]
    fn zero_correlations() {
        let s = Bloch2Q::maximally_mixed();
        assert_eq!(m_value(&s), 0.0);
        assert_eq!(chsh_value(&s), 0.0);
        assert_eq!(f_n_closed(&s, 3).unwrap(), 0.0);
    }

    #[test]
    fn werner_one_has_m_two() {
        assert!((m_value(&werner(1.0).unwrap()) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn singlet_values() {
        let s = Bloch2Q::singlet();
        assert!((chsh_value(&s) - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((f_n_closed(&s, 2).unwrap() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn werner_chsh_threshold() {
        let p = std::f64::consts::FRAC_1_SQRT_2;
        assert!((chsh_value(&werner(p).unwrap()) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn werner_f3() {
        let f3 = f_n_closed(&werner(0.6).unwrap(), 3).unwrap();
        assert!((f3 - 3f64.sqrt() * 0.6).abs() < 1e-12);
        assert!(f3 > 1.0);
    }

    #[test]
    fn f_n_rejects_bad_n() {
        let s = Bloch2Q::singlet();
        assert!(matches!(f_n_closed(&s, 4), Err(Error::SettingsCount(4))));
        assert!(matches!(optimize_f_n(&s, 1), Err(Error::SettingsCount(1))));
    }

    #[test]
    fn direct_sign_matched_werner() {
        let e = Matrix3::<f64>::identity();
        let v: Vec<_> = (0..3).map(|i| e.column(i).into_owned()).collect();
        let u = vec![v[0], -v[1], v[2]];
        let m = MeasSettings::new(u, v).unwrap();
        let f = f_n_direct(&werner(1.0).unwrap(), &m).unwrap();
        assert!((f - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn direct_vanishes_for_orthogonal_alice() {
        let s = diag(0.7, -0.4, 0.2);
        let v = vec![Vector3::x(), Vector3::y()];
        // T v̂₁ ∥ x̂ and T v̂₂ ∥ ŷ, so pick û ⊥ those images.
        let u = vec![Vector3::z(), Vector3::z()];
        let m = MeasSettings::new(u, v).unwrap();
        assert_eq!(f_n_direct(&s, &m).unwrap(), 0.0);
    }

    #[test]
    fn settings_validation() {
        let bad_u = MeasSettings::new(vec![Vector3::new(2.0, 0.0, 0.0); 2], vec![Vector3::x(), Vector3::y()]);
        assert!(matches!(bad_u, Err(Error::InvalidSettings(_))));
        let bad_v = MeasSettings::new(vec![Vector3::x(); 2], vec![Vector3::x(), Vector3::x()]);
        assert!(matches!(bad_v, Err(Error::InvalidSettings(_))));
        let mismatched = MeasSettings::new(vec![Vector3::x(); 2], vec![Vector3::x()]);
        assert!(mismatched.is_err());
    }

    #[test]
    fn optimizer_reaches_closed_form() {
        let o = optimize_f_n(&werner(0.8).unwrap(), 3).unwrap();
        assert!((o.value - 3f64.sqrt() * 0.8).abs() < 1e-6);
        assert!(!o.degenerate);
        let o = optimize_f_n(&Bloch2Q::singlet(), 2).unwrap();
        assert!((o.value - 2f64.sqrt()).abs() < 1e-6);
        let o = optimize_f_n(&diag(0.9, -0.5, 0.1), 3).unwrap();
        assert!((o.value - (0.81f64 + 0.25 + 0.01).sqrt()).abs() < 1e-6);
    }

    #[test]
    fn optimizer_rank_one() {
        let o = optimize_f_n(&diag(0.6, 0.0, 0.0), 2).unwrap();
        assert!(o.degenerate);
        assert!((o.value - 0.6).abs() < 1e-6);
    }

    #[test]
    fn lhs_examples() {
        assert!(lhs_unsteerable(&werner(0.5).unwrap()));
        assert!(!lhs_unsteerable(&werner(1.0).unwrap()));
    }

    #[test]
    fn negativity_examples() {
        assert!((negativity(&to_density(&Bloch2Q::singlet())) - 0.5).abs() < 1e-12);
        let prod = Bloch2Q::product(Vector3::new(0.3, 0.1, -0.5), Vector3::new(0.0, 0.9, 0.2));
        assert!(negativity(&to_density(&prod)) < 1e-12);
        assert!(negativity(&to_density(&werner(1.0 / 3.0).unwrap())) < 1e-12);
        assert!(negativity(&to_density(&werner(0.4).unwrap())) > 0.0);
    }

    #[test]
    fn report_examples() {
        let r = report(&Bloch2Q::maximally_mixed()).unwrap();
        assert_eq!(r.m_value, 0.0);
        assert_eq!(r.chsh_s, 0.0);
        assert_eq!(r.f3, 0.0);
        assert!(!r.bell_nonlocal && !r.steerable3 && !r.entangled);
        assert!(r.lhs_unsteerable);
        assert!(r.negativity == 0.0 && r.negativity.is_sign_positive());

        let r = report(&Bloch2Q::singlet()).unwrap();
        assert!((r.m_value - 2.0).abs() < 1e-12);
        assert!((r.chsh_s - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((r.f3 - 3f64.sqrt()).abs() < 1e-12);
        assert!(r.bell_nonlocal && r.steerable3 && r.entangled && !r.lhs_unsteerable);
        assert!((r.negativity - 0.5).abs() < 1e-12);

        let r = report(&werner(0.65).unwrap()).unwrap();
        assert!((r.m_value - 0.845).abs() < 1e-12);
        assert!(!r.bell_nonlocal);
        assert!(r.steerable3);
        assert!(r.entangled);
    }

    #[test]
    fn report_rejects_unphysical() {
        let e1 = Vector3::x();
        let s = Bloch2Q::new(e1, e1, Matrix3::zeros());
        assert!(report(&s).is_err());
    }
}
