pub mod cover;
pub mod lemma;
pub mod oracle;
pub mod smallgraph;

pub use cover::{
    check_regions_nonempty, cover_property_trials, AnchorIndex, CoverError, CoverFamily,
    CoverProperty,
};
pub use lemma::{
    empty_probability_bound, log_empty_probability, occupancy_trials, symbolic_log_bound,
    union_bound_threshold, ThresholdParams, UnionBound,
};
pub use oracle::{copwin_bruteforce, is_dismantlable, OracleError};
pub use smallgraph::{random_connected_rgg, SmallGraph};

/// Builds the planar rectangle cover for radius `r`.
pub fn build_cover(
    r: f64,
    profile: &crate::profile::ScaleProfile,
) -> Result<CoverFamily, CoverError> {
    CoverFamily::build(r, profile)
}
