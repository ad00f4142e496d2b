//! Strategy constants, all expressed as coefficients of powers of `r`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("coefficient `{0}` must be positive and finite")]
    NonPositive(&'static str),
    #[error("cannot read profile: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse profile: {0}")]
    Parse(#[from] serde_json::Error),
}

/// Multiplicative constants of the cop strategy and the occupancy cover.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleProfile {
    pub name: String,
    /// Minimum cop-robber separation after a cop move, `k₁r²`.
    pub keep_coeff: f64,
    /// Guaranteed per-step potential gain, `k₂r²`.
    pub gain_coeff: f64,
    /// Snapping region height, `k₃r²`.
    pub height_coeff: f64,
    /// Snapping region base radius (half-width in the plane), `k₄r³`.
    pub base_coeff: f64,
    /// Cover rectangle width (and grid spacing), times `r³`.
    pub cover_width_coeff: f64,
    /// Cover rectangle height, times `r²`.
    pub cover_height_coeff: f64,
}

impl ScaleProfile {
    /// The printed constants. The planar base is a full length `r³/10⁵`,
    /// hence a half-width of `r³/(2·10⁵)`; the cone base is a radius.
    pub fn paper(d: usize) -> Self {
        Self {
            name: "paper".into(),
            keep_coeff: 1e-2,
            gain_coeff: 0.2,
            height_coeff: 1e-2,
            base_coeff: if d <= 2 { 0.5e-5 } else { 1e-5 },
            cover_width_coeff: 1e-6,
            cover_height_coeff: 1e-6,
        }
    }

    /// Relaxed region (`r²/4` by `r³/4`) that is occupied at feasible `n`.
    /// Cover rectangles are a quarter of the region in each direction, which
    /// keeps every region containing a full cover rectangle.
    pub fn desk() -> Self {
        Self {
            name: "desk".into(),
            keep_coeff: 1e-2,
            gain_coeff: 0.2,
            height_coeff: 0.25,
            base_coeff: 0.25,
            cover_width_coeff: 1.0 / 16.0,
            cover_height_coeff: 1.0 / 16.0,
        }
    }

    pub fn from_json_file(path: &Path) -> Result<Self, ProfileError> {
        let text = std::fs::read_to_string(path)?;
        let profile: Self = serde_json::from_str(&text)?;
        profile.validate()?;
        Ok(profile)
    }

    pub fn validate(&self) -> Result<(), ProfileError> {
        let fields = [
            ("keep_coeff", self.keep_coeff),
            ("gain_coeff", self.gain_coeff),
            ("height_coeff", self.height_coeff),
            ("base_coeff", self.base_coeff),
            ("cover_width_coeff", self.cover_width_coeff),
            ("cover_height_coeff", self.cover_height_coeff),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(ProfileError::NonPositive(name));
            }
        }
        Ok(())
    }

    pub fn separation(&self, r: f64) -> f64 {
        self.keep_coeff * r * r
    }

    pub fn min_gain(&self, r: f64) -> f64 {
        self.gain_coeff * r * r
    }
}
