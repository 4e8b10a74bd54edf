//! Seeded random states, rotations and measurement settings.
//!
//! Mixed states come from purification: draw a complex Gaussian pure state on
//! 2⊗2⊗k and trace out the k-dimensional ancilla. With the default `k = 4`
//! this is the Hilbert–Schmidt measure on two-qubit states; `k = 1` gives
//! Haar-random pure states.

use nalgebra::{Matrix3, Matrix4, Quaternion, UnitQuaternion, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bloch::{bloch_of, Bloch2Q, Density4};
use crate::criteria::MeasSettings;
use crate::C64;

pub const DEFAULT_ANCILLA_DIM: usize = 4;

/// Deterministic generator used by every seeded suite.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

#[derive(Debug, Clone, Copy)]
pub struct StateSampler {
    pub ancilla_dim: usize,
}

impl Default for StateSampler {
    fn default() -> Self {
        StateSampler { ancilla_dim: DEFAULT_ANCILLA_DIM }
    }
}

impl StateSampler {
    pub fn new(ancilla_dim: usize) -> Self {
        assert!(ancilla_dim >= 1, "ancilla dimension must be at least 1");
        StateSampler { ancilla_dim }
    }

    pub fn density<R: Rng + ?Sized>(&self, rng: &mut R) -> Density4 {
        let k = self.ancilla_dim;
        // Amplitudes ψ[s, a] for system index s and ancilla index a.
        let amp: Vec<C64> = (0..4 * k).map(|_| gaussian_c64(rng)).collect();
        let norm2: f64 = amp.iter().map(|z| z.norm_sqr()).sum();
        let rho = Matrix4::from_fn(|r, c| {
            (0..k).map(|a| amp[r * k + a] * amp[c * k + a].conj()).sum::<C64>() / norm2
        });
        Density4(rho)
    }

    pub fn bloch<R: Rng + ?Sized>(&self, rng: &mut R) -> Bloch2Q {
        bloch_of(&self.density(rng).0)
    }
}

/// Haar-random single-qubit pure state.
pub fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> [C64; 2] {
    let a = gaussian_c64(rng);
    let b = gaussian_c64(rng);
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    [a / n, b / n]
}

pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        if n > 1e-12 {
            return v / n;
        }
    }
}

/// Haar-random proper rotation from a normalized Gaussian quaternion.
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> Matrix3<f64> {
    let q = Quaternion::new(
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
    );
    UnitQuaternion::from_quaternion(q).to_rotation_matrix().into_inner()
}

/// Random settings: independent unit `û_i`, and `v̂_i` the first `n` columns
/// of a random rotation.
pub fn random_settings<R: Rng + ?Sized>(n: usize, rng: &mut R) -> MeasSettings {
    let rot = random_rotation(rng);
    let u = (0..n).map(|_| random_unit_vector(rng)).collect();
    let v = (0..n).map(|i| rot.column(i).into_owned()).collect();
    MeasSettings::new_unchecked(u, v)
}
