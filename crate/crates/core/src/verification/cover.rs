//! The rectangle cover used for the occupancy argument in the plane.
//!
//! Anchors sit at the centers of an `N × N` grid, `N = ⌈1/(c_w r³)⌉`, so the
//! actual spacing `1/N` never exceeds the nominal one. Each anchor `Y` owns
//! the rectangle of width `1/N` and height `c_h r²` whose short edge far
//! from the center has midpoint `Y` and whose long side points from `Y` to
//! `O`. Anchors closer to `O` than any region `T(X)` reaches, that is
//! within `r/2 - k₃r²` (but never less than `r/4`), are dropped. The family
//! is never materialized; rectangles are produced on demand.

use thiserror::Error;

use crate::geometry::{cone_contains, make_region, ApexCone, OrientedRectangle, Point, UnitVector};
use crate::profile::ScaleProfile;
use crate::rgg::Rgg;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoverError {
    #[error("the cover is planar; got d = {0}")]
    NotPlanar(usize),
    #[error("grid spacing {0} is not below 1")]
    CoarseGrid(f64),
    #[error("cover has {0} anchors, too many to track individually")]
    TooLarge(u64),
}

#[derive(Debug, Clone)]
pub struct CoverFamily {
    r: f64,
    excluded_radius: f64,
    per_axis: u64,
    grid_step: f64,
    rect_height: f64,
    count: u64,
}

/// Index of an anchor on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AnchorIndex {
    pub i: u64,
    pub j: u64,
}

impl CoverFamily {
    pub fn build(r: f64, profile: &ScaleProfile) -> Result<Self, CoverError> {
        let nominal = profile.cover_width_coeff * r * r * r;
        if !(nominal > 0.0 && nominal < 1.0) {
            return Err(CoverError::CoarseGrid(nominal));
        }
        let per_axis = (1.0 / nominal).ceil() as u64;
        let mut family = Self {
            r,
            excluded_radius: (r / 2.0 - profile.height_coeff * r * r).max(r / 4.0),
            per_axis,
            grid_step: 1.0 / per_axis as f64,
            rect_height: profile.cover_height_coeff * r * r,
            count: 0,
        };
        family.count = per_axis * per_axis - family.excluded_count();
        Ok(family)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn grid_step(&self) -> f64 {
        self.grid_step
    }

    pub fn per_axis(&self) -> u64 {
        self.per_axis
    }

    /// Number of rectangles in the family.
    pub fn len(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn rect_width(&self) -> f64 {
        self.grid_step
    }

    pub fn rect_height(&self) -> f64 {
        self.rect_height
    }

    pub fn rect_area(&self) -> f64 {
        self.grid_step * self.rect_height
    }

    fn coord(&self, i: u64) -> f64 {
        (i as f64 + 0.5) * self.grid_step
    }

    pub fn anchor(&self, at: AnchorIndex) -> Point {
        Point::new(vec![self.coord(at.i), self.coord(at.j)])
    }

    pub fn excluded_radius(&self) -> f64 {
        self.excluded_radius
    }

    fn excluded_xy(&self, x: f64, y: f64) -> bool {
        let half = self.excluded_radius;
        (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5) < half * half
    }

    pub fn is_member(&self, at: AnchorIndex) -> bool {
        at.i < self.per_axis
            && at.j < self.per_axis
            && !self.excluded_xy(self.coord(at.i), self.coord(at.j))
    }

    /// Anchors dropped for being within `r/2` of the center, counted row
    /// by row.
    fn excluded_count(&self) -> u64 {
        let n = self.per_axis;
        let half = self.excluded_radius;
        let mut total = 0;
        for j in 0..n {
            let dy = self.coord(j) - 0.5;
            if dy * dy >= half * half {
                continue;
            }
            let reach = (half * half - dy * dy).sqrt();
            let y = self.coord(j);
            let guess = |x: f64| ((x / self.grid_step) - 0.5).clamp(0.0, (n - 1) as f64) as u64;
            let mut lo = guess(0.5 - reach);
            let mut hi = guess(0.5 + reach);
            while lo > 0 && self.excluded_xy(self.coord(lo - 1), y) {
                lo -= 1;
            }
            while lo <= hi && !self.excluded_xy(self.coord(lo), y) {
                lo += 1;
            }
            while hi + 1 < n && self.excluded_xy(self.coord(hi + 1), y) {
                hi += 1;
            }
            while hi >= lo && !self.excluded_xy(self.coord(hi), y) {
                if hi == 0 {
                    break;
                }
                hi -= 1;
            }
            if lo <= hi && self.excluded_xy(self.coord(lo), y) {
                total += hi - lo + 1;
            }
        }
        total
    }

    pub fn rectangle(&self, at: AnchorIndex) -> Option<OrientedRectangle> {
        if !self.is_member(at) {
            return None;
        }
        let anchor = self.anchor(at);
        let toward = UnitVector::between(&anchor, &Point::center(2))?;
        Some(OrientedRectangle {
            anchor,
            toward,
            width: self.grid_step,
            height: self.rect_height,
        })
    }

    /// All rectangles, row by row.
    pub fn iter(&self) -> impl Iterator<Item = OrientedRectangle> + '_ {
        (0..self.per_axis)
            .flat_map(move |j| (0..self.per_axis).map(move |i| AnchorIndex { i, j }))
            .filter_map(|at| self.rectangle(at))
    }

    fn index_range(&self, lo: f64, hi: f64) -> std::ops::RangeInclusive<u64> {
        let n = self.per_axis as f64;
        let a = ((lo * n - 0.5).floor().max(0.0)) as u64;
        let b = ((hi * n - 0.5).ceil().min(n - 1.0).max(0.0)) as u64;
        a..=b
    }

    /// Calls `f` with every member whose rectangle contains `p`.
    pub fn for_each_containing(&self, p: &Point, mut f: impl FnMut(AnchorIndex)) {
        let reach = self.rect_height + self.grid_step;
        let (x, y) = (p.coords()[0], p.coords()[1]);
        for j in self.index_range(y - reach, y + reach) {
            for i in self.index_range(x - reach, x + reach) {
                let at = AnchorIndex { i, j };
                if let Some(rect) = self.rectangle(at) {
                    if rect.contains(p) {
                        f(at);
                    }
                }
            }
        }
    }

    /// Some member lying entirely inside `region`, searched by walking the
    /// region's axis from the depth where it first becomes as wide as a
    /// rectangle.
    pub fn find_inside(&self, region: &ApexCone) -> Option<OrientedRectangle> {
        let w = self.grid_step;
        let start = (region.height * (w / 2.0) / region.base_radius).min(region.height);
        let stop = region.height - self.rect_height;
        if stop < start {
            return None;
        }
        let reach = region.base_radius + w;
        let mut t = start;
        while t <= stop + w / 2.0 {
            let c = region.apex.offset(region.axis.coords(), t.min(stop));
            let (x, y) = (c.coords()[0], c.coords()[1]);
            for j in self.index_range(y - reach, y + reach) {
                for i in self.index_range(x - reach, x + reach) {
                    if let Some(rect) = self.rectangle(AnchorIndex { i, j }) {
                        if rect.corners().iter().all(|q| cone_contains(region, q)) {
                            return Some(rect);
                        }
                    }
                }
            }
            t += w / 2.0;
        }
        None
    }
}

/// Outcome of the cover-property Monte Carlo.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct CoverProperty {
    pub trials: u64,
    pub covered: u64,
}

/// Draws `trials` apex points `X` for which `T(X)` is defined and counts
/// those whose region fully contains some rectangle of `cover`.
pub fn cover_property_trials(
    cover: &CoverFamily,
    profile: &ScaleProfile,
    trials: u64,
    master_seed: u64,
) -> CoverProperty {
    use rand::Rng;
    use rayon::prelude::*;
    let center = Point::center(2);
    let covered = (0..trials)
        .into_par_iter()
        .filter(|&t| {
            let mut rng = crate::seed::rng_from_seed(crate::seed::child_seed(master_seed, t));
            let region = loop {
                let x = Point::new(vec![rng.gen(), rng.gen()]);
                if let Ok(region) = make_region(&x, &center, profile, cover.r) {
                    break region;
                }
            };
            cover.find_inside(&region).is_some()
        })
        .count() as u64;
    CoverProperty { trials, covered }
}

/// Number of cover rectangles containing no vertex of `g`.
pub fn check_regions_nonempty(g: &Rgg, cover: &CoverFamily) -> Result<u64, CoverError> {
    if g.d() != 2 {
        return Err(CoverError::NotPlanar(g.d()));
    }
    let cells = cover.per_axis * cover.per_axis;
    if cells > 1 << 32 {
        return Err(CoverError::TooLarge(cells));
    }
    let mut hit = vec![false; cells as usize];
    let mut occupied = 0u64;
    for v in g.vertices() {
        cover.for_each_containing(&g.position(v), |at| {
            let slot = &mut hit[(at.j * cover.per_axis + at.i) as usize];
            if !*slot {
                *slot = true;
                occupied += 1;
            }
        });
    }
    Ok(cover.len() - occupied)
}
