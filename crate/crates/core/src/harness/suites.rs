//! The `lemma` and `oracle` check suites.

use serde::Serialize;

use crate::geometry::{OrientedRectangle, Point, UnitVector};
use crate::profile::ScaleProfile;
use crate::rgg::{Rgg, RggParams};
use crate::seed::{child_seed, rng_from_seed};
use crate::verification::{
    check_regions_nonempty, copwin_bruteforce, cover_property_trials, empty_probability_bound,
    is_dismantlable, occupancy_trials, random_connected_rgg, union_bound_threshold, CoverError,
    CoverFamily, CoverProperty, ThresholdParams,
};

#[derive(Debug, Clone, Serialize)]
pub struct Occupancy {
    pub area: f64,
    pub n: u64,
    pub trials: u64,
    pub empty: u64,
    pub expected_fraction: f64,
    pub observed_fraction: f64,
    pub standard_error: f64,
    /// `|observed - expected| / standard_error`.
    pub z: f64,
}

/// A square of the given area, anchored halfway between the center and an
/// edge and pointing at the center.
pub fn probe_rectangle(area: f64) -> OrientedRectangle {
    let side = area.sqrt();
    OrientedRectangle {
        anchor: Point::new(vec![0.5, 0.25]),
        toward: UnitVector::axis(2, 1),
        width: side,
        height: side,
    }
}

pub fn occupancy_check(area: f64, n: u64, trials: u64, seed: u64) -> Occupancy {
    let empty = occupancy_trials(&probe_rectangle(area), n, trials, seed);
    let p = empty_probability_bound(area, n);
    let observed = empty as f64 / trials as f64;
    let se = (p * (1.0 - p) / trials as f64).sqrt();
    Occupancy {
        area,
        n,
        trials,
        empty,
        expected_fraction: p,
        observed_fraction: observed,
        standard_error: se,
        z: (observed - p).abs() / se,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub profile: String,
    pub r: f64,
    pub n: u64,
    pub seed: u64,
    pub rectangles: u64,
    pub grid_step: f64,
    pub rect_area: f64,
    pub cover_property: CoverProperty,
    /// Empty cover rectangles in one sampled graph, when it can be checked.
    pub empty_rectangles: Option<u64>,
    pub union_bound: f64,
    pub log_union_bound: f64,
    pub occupancy: Occupancy,
}

pub struct LemmaSettings {
    pub r: f64,
    pub n: u64,
    pub seed: u64,
    pub profile: ScaleProfile,
    pub cover_trials: u64,
    pub occupancy_area: f64,
    pub occupancy_n: u64,
    pub occupancy_trials: u64,
}

pub fn lemma_report(s: &LemmaSettings) -> Result<LemmaReport, CoverError> {
    let cover = CoverFamily::build(s.r, &s.profile)?;
    let cover_property =
        cover_property_trials(&cover, &s.profile, s.cover_trials, child_seed(s.seed, 0));
    let empty_rectangles = if s.n > 0 {
        Rgg::generate(RggParams {
            n: s.n as usize,
            r: s.r,
            d: 2,
            seed: child_seed(s.seed, 1),
        })
        .ok()
        .and_then(|g| check_regions_nonempty(&g, &cover).ok())
    } else {
        None
    };
    let bound = union_bound_threshold(
        &ThresholdParams {
            c: 1.0,
            n: s.n,
            r: s.r,
            d: 2,
        },
        &s.profile,
    )?;
    Ok(LemmaReport {
        profile: s.profile.name.clone(),
        r: s.r,
        n: s.n,
        seed: s.seed,
        rectangles: cover.len(),
        grid_step: cover.grid_step(),
        rect_area: cover.rect_area(),
        cover_property,
        empty_rectangles,
        union_bound: bound.value(),
        log_union_bound: bound.log_bound,
        occupancy: occupancy_check(
            s.occupancy_area,
            s.occupancy_n,
            s.occupancy_trials,
            child_seed(s.seed, 2),
        ),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleRow {
    pub trial: u64,
    pub n: usize,
    pub edges: usize,
    pub dismantlable: bool,
    pub copwin: bool,
    pub agree: bool,
}

/// Compares the two cop-win oracles on `trials` random connected graphs of
/// at most `max_n` vertices.
pub fn oracle_suite(trials: u64, max_n: usize, seed: u64) -> Vec<OracleRow> {
    (0..trials)
        .map(|trial| {
            let mut rng = rng_from_seed(child_seed(seed, trial));
            let g = random_connected_rgg(&mut rng, max_n);
            let dismantlable = is_dismantlable(&g);
            let copwin = copwin_bruteforce(&g).expect("generator yields connected graphs");
            OracleRow {
                trial,
                n: g.n(),
                edges: g.edge_count(),
                dismantlable,
                copwin,
                agree: dismantlable == copwin,
            }
        })
        .collect()
}
