//! Probability arithmetic for the occupancy argument, kept in log space so
//! that `n·area ≫ 1` and `area ≪ 1` are both safe.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::cover::{CoverError, CoverFamily};
use crate::geometry::{OrientedRectangle, Point};
use crate::profile::ScaleProfile;
use crate::seed::{child_seed, rng_from_seed};

/// `ln((1 - area)^n)`.
pub fn log_empty_probability(area: f64, n: u64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&area));
    if area >= 1.0 {
        return if n == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    n as f64 * (-area).ln_1p()
}

/// Chance that a fixed region of the given area receives none of `n`
/// uniform points.
pub fn empty_probability_bound(area: f64, n: u64) -> f64 {
    log_empty_probability(area, n).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdParams {
    pub c: f64,
    pub n: u64,
    pub r: f64,
    pub d: usize,
}

impl ThresholdParams {
    /// Radius at the connectivity-style threshold `r^(3d-1) = c ln n / n`.
    pub fn at_threshold(c: f64, n: u64, d: usize) -> Self {
        let exp = (3 * d - 1) as f64;
        let r = (c * (n as f64).ln() / n as f64).powf(1.0 / exp);
        Self { c, n, r, d }
    }
}

/// Union bound over a cover: `count · (1 - area)^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnionBound {
    pub rectangles: u64,
    pub area: f64,
    pub log_bound: f64,
}

impl UnionBound {
    pub fn value(&self) -> f64 {
        self.log_bound.exp()
    }
}

pub fn union_bound_threshold(
    params: &ThresholdParams,
    profile: &ScaleProfile,
) -> Result<UnionBound, CoverError> {
    if params.d != 2 {
        return Err(CoverError::NotPlanar(params.d));
    }
    let cover = CoverFamily::build(params.r, profile)?;
    let area = cover.rect_area();
    let log_bound = if cover.is_empty() {
        f64::NEG_INFINITY
    } else {
        (cover.len() as f64).ln() + log_empty_probability(area.min(1.0), params.n)
    };
    Ok(UnionBound {
        rectangles: cover.len(),
        area,
        log_bound,
    })
}

/// The symbolic form of the argument: `n²` rectangles, each of area
/// `area_coeff · c ln n / n`. Returns the natural log of the bound.
pub fn symbolic_log_bound(c: f64, n: u64, area_coeff: f64) -> f64 {
    let nf = n as f64;
    let area = area_coeff * c * nf.ln() / nf;
    2.0 * nf.ln() + log_empty_probability(area, n)
}

/// Number of trials, out of `trials`, in which `n` uniform points in the
/// unit square all miss `rect`.
pub fn occupancy_trials(rect: &OrientedRectangle, n: u64, trials: u64, master_seed: u64) -> u64 {
    (0..trials)
        .into_par_iter()
        .filter(|&t| {
            let mut rng = rng_from_seed(child_seed(master_seed, t));
            let mut p = Point::new(vec![0.0, 0.0]);
            !(0..n).any(|_| {
                p = Point::new(vec![rng.gen(), rng.gen()]);
                rect.contains(&p)
            })
        })
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_values() {
        assert_eq!(empty_probability_bound(0.5, 1), 0.5);
        assert_eq!(empty_probability_bound(0.0, 12345), 1.0);
        assert_eq!(empty_probability_bound(1.0, 3), 0.0);
    }

    #[test]
    fn matches_naive_power() {
        let p = empty_probability_bound(5e-4, 10_000);
        let naive = (1.0f64 - 5e-4).powi(10_000);
        assert!((p - naive).abs() < 1e-12 * p, "{p} {naive}");
        // 40-digit reference evaluation
        assert!((p - 6.729527022142960e-3).abs() < 1e-14 * p);
    }

    #[test]
    fn threshold_radius() {
        let p = ThresholdParams::at_threshold(1.0, 1_000_000, 2);
        assert!((p.r.powi(5) - (1e6f64).ln() / 1e6).abs() < 1e-18);
    }

    #[test]
    fn symbolic_bound_is_below_n_minus_8() {
        let n = 1_000_000u64;
        let lb = symbolic_log_bound(1e13, n, 1e-12);
        assert!(lb < -8.0 * (n as f64).ln());
    }
}
