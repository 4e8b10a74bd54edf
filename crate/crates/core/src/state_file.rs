//! JSON state files.
//!
//! ```json
//! {"bloch": {"x": [0, 0, 0], "y": [0, 0, 0], "T": [[-1, 0, 0], [0, -1, 0], [0, 0, -1]]}}
//! {"density": {"re": [[...4...], ...], "im": [[...4...], ...]}}
//! ```
//!
//! Matrices are row-major. States are validated on load.

use std::path::Path;

use nalgebra::{Matrix3, Matrix4, Vector3};
use serde::{Deserialize, Serialize};

use crate::bloch::{from_density, Bloch2Q, Density4};
use crate::{Result, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlochJson {
    pub x: [f64; 3],
    pub y: [f64; 3],
    #[serde(rename = "T")]
    pub t: [[f64; 3]; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityJson {
    pub re: [[f64; 4]; 4],
    pub im: [[f64; 4]; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateFile {
    Bloch(BlochJson),
    Density(DensityJson),
}

impl From<&Bloch2Q> for StateFile {
    fn from(s: &Bloch2Q) -> Self {
        StateFile::Bloch(BlochJson {
            x: [s.x[0], s.x[1], s.x[2]],
            y: [s.y[0], s.y[1], s.y[2]],
            t: std::array::from_fn(|i| std::array::from_fn(|j| s.t[(i, j)])),
        })
    }
}

impl StateFile {
    /// Bloch data, validated.
    pub fn to_bloch(&self) -> Result<Bloch2Q> {
        match self {
            StateFile::Bloch(b) => {
                let s = Bloch2Q::new(
                    Vector3::from(b.x),
                    Vector3::from(b.y),
                    Matrix3::from_fn(|i, j| b.t[i][j]),
                );
                s.validate()?;
                Ok(s)
            }
            StateFile::Density(d) => {
                let rho = Density4(Matrix4::from_fn(|i, j| C64::new(d.re[i][j], d.im[i][j])));
                from_density(&rho)
            }
        }
    }
}

/// Parses and validates a state from JSON text.
pub fn parse_state(json: &str) -> Result<Bloch2Q> {
    let file: StateFile = serde_json::from_str(json)?;
    file.to_bloch()
}

pub fn read_state(path: impl AsRef<Path>) -> Result<Bloch2Q> {
    parse_state(&std::fs::read_to_string(path)?)
}

pub fn bloch_json(s: &Bloch2Q) -> String {
    serde_json::to_string_pretty(&StateFile::from(s)).expect("state serializes")
}

pub fn write_state(path: impl AsRef<Path>, s: &Bloch2Q) -> Result<()> {
    std::fs::write(path, bloch_json(s) + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    #[test]
    fn bloch_and_density_forms_agree() {
        let bloch = r#"{"bloch": {"x": [0,0,0], "y": [0,0,0], "T": [[-1,0,0],[0,-1,0],[0,0,-1]]}}"#;
        let density = r#"{"density": {
            "re": [[0,0,0,0],[0,0.5,-0.5,0],[0,-0.5,0.5,0],[0,0,0,0]],
            "im": [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}}"#;
        let a = parse_state(bloch).unwrap();
        let b = parse_state(density).unwrap();
        assert!(a.max_deviation(&b) < 1e-12);
        assert_eq!(a, Bloch2Q::singlet());
    }

    #[test]
    fn round_trip() {
        let s = crate::cloning::werner(0.3).unwrap();
        assert_eq!(parse_state(&bloch_json(&s)).unwrap(), s);
    }

    #[test]
    fn missing_field_is_named() {
        let err = parse_state(r#"{"bloch": {"x": [0,0,0], "T": [[0,0,0],[0,0,0],[0,0,0]]}}"#).unwrap_err();
        assert!(matches!(err, Error::Json(_)));
        assert!(err.to_string().contains("`y`"), "{err}");
    }

    #[test]
    fn unphysical_rejected() {
        let err = parse_state(r#"{"bloch": {"x": [1,0,0], "y": [1,0,0], "T": [[0,0,0],[0,0,0],[0,0,0]]}}"#)
            .unwrap_err();
        assert!(matches!(err, Error::InvalidState(_)));
    }
}
