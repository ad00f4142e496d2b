//! Dimension-generic vector math on the unit cube, the apex-cone snapping
//! region and the cop's candidate-point construction.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::profile::ScaleProfile;

/// Largest dimension the engine accepts.
pub const MAX_DIM: usize = 8;

/// Relative tolerance for length comparisons at unit scale.
pub const LENGTH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("dimension {0} outside 1..={MAX_DIM}")]
    BadDimension(usize),
    #[error("apex is closer than r/2 to the center ({distance} < {limit})")]
    XTooCloseToCenter { distance: f64, limit: f64 },
    #[error("snapping region leaves the unit cube")]
    XTooCloseToBoundary,
    #[error("robber is above the cop's level ({robber} < {cop}); capture was missed")]
    AbovePerpendicular { robber: f64, cop: f64 },
    #[error("direction undefined for coincident points")]
    DegenerateDirection,
    #[error("no perpendicular direction exists in dimension 1")]
    NoPerpendicular,
}

/// A position in `[0,1]^d` (intermediate geometry may leave the cube).
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point {
    coords: Vec<f64>,
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point{:?}", self.coords)
    }
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    /// The cube center `(0.5, ..., 0.5)`.
    pub fn center(d: usize) -> Self {
        Self::new(vec![0.5; d])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn in_unit_cube(&self) -> bool {
        self.coords.iter().all(|&x| (0.0..=1.0).contains(&x))
    }

    /// Like [`Point::in_unit_cube`] but forgives rounding-sized excursions.
    pub fn in_unit_cube_tol(&self, tol: f64) -> bool {
        self.coords.iter().all(|&x| x >= -tol && x <= 1.0 + tol)
    }

    pub fn clamped_to_cube(&self) -> Self {
        Self::new(self.coords.iter().map(|x| x.clamp(0.0, 1.0)).collect())
    }

    pub fn sub(&self, other: &Point) -> Vec<f64> {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect()
    }

    /// `self + t * dir`.
    pub fn offset(&self, dir: &[f64], t: f64) -> Self {
        debug_assert_eq!(self.dim(), dir.len());
        Self::new(
            self.coords
                .iter()
                .zip(dir)
                .map(|(a, v)| a + t * v)
                .collect(),
        )
    }

    pub fn dist(&self, other: &Point) -> f64 {
        dist_slices(&self.coords, &other.coords)
    }

    pub fn dist_sq(&self, other: &Point) -> f64 {
        dist_sq_slices(&self.coords, &other.coords)
    }

    /// Squared distance from the cube center; the cop's potential.
    pub fn potential(&self) -> f64 {
        self.coords.iter().map(|x| (x - 0.5) * (x - 0.5)).sum()
    }
}

/// A direction of unit Euclidean length.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UnitVector {
    coords: Vec<f64>,
}

impl fmt::Debug for UnitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnitVector{:?}", self.coords)
    }
}

impl UnitVector {
    /// Normalizes `v`; `None` for the zero vector.
    pub fn new(v: Vec<f64>) -> Option<Self> {
        let n = norm(&v);
        if n == 0.0 || !n.is_finite() {
            return None;
        }
        Some(Self {
            coords: v.into_iter().map(|x| x / n).collect(),
        })
    }

    /// Unit direction from `from` to `to`.
    pub fn between(from: &Point, to: &Point) -> Option<Self> {
        Self::new(to.sub(from))
    }

    pub fn axis(d: usize, i: usize) -> Self {
        let mut coords = vec![0.0; d];
        coords[i] = 1.0;
        Self { coords }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn negated(&self) -> Self {
        Self {
            coords: self.coords.iter().map(|x| -x).collect(),
        }
    }

    pub fn dot(&self, v: &[f64]) -> f64 {
        dot(&self.coords, v)
    }
}

/// The snapping region: apex at `X`, axis pointing toward the center, a
/// triangle in the plane and a circular cone in higher dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApexCone {
    pub apex: Point,
    pub axis: UnitVector,
    pub height: f64,
    pub base_radius: f64,
}

impl ApexCone {
    pub fn contains(&self, p: &Point) -> bool {
        cone_contains(self, p)
    }

    /// Per-coordinate bounding box `(lo, hi)` of the cone.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let base = self.apex.offset(self.axis.coords(), self.height);
        let mut lo = Vec::with_capacity(self.apex.dim());
        let mut hi = Vec::with_capacity(self.apex.dim());
        for i in 0..self.apex.dim() {
            let a = self.axis.coords()[i];
            let spread = self.base_radius * (1.0 - a * a).max(0.0).sqrt();
            let b = base.coords()[i];
            lo.push(self.apex.coords()[i].min(b - spread));
            hi.push(self.apex.coords()[i].max(b + spread));
        }
        (lo, hi)
    }

    /// True if the whole cone lies in `[0,1]^d`.
    pub fn inside_unit_cube(&self) -> bool {
        let (lo, hi) = self.bounding_box();
        let tol = 1e-12;
        lo.iter().all(|&x| x >= -tol) && hi.iter().all(|&x| x <= 1.0 + tol)
    }
}

/// Planar rectangle: `anchor` is the midpoint of the short edge farther
/// from the center; the rectangle extends `height` along `toward`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientedRectangle {
    pub anchor: Point,
    pub toward: UnitVector,
    pub width: f64,
    pub height: f64,
}

impl OrientedRectangle {
    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    pub fn contains(&self, p: &Point) -> bool {
        let v = p.sub(&self.anchor);
        let along = self.toward.dot(&v);
        let t = self.toward.coords();
        let across = -t[1] * v[0] + t[0] * v[1];
        (0.0..=self.height).contains(&along) && across.abs() <= self.width / 2.0
    }

    pub fn corners(&self) -> [Point; 4] {
        let t = self.toward.coords();
        let perp = [-t[1], t[0]];
        let half = self.width / 2.0;
        let far = self.anchor.offset(t, self.height);
        [
            self.anchor.offset(&perp, half),
            self.anchor.offset(&perp, -half),
            far.offset(&perp, half),
            far.offset(&perp, -half),
        ]
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

pub(crate) fn dist_sq_slices(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub(crate) fn dist_slices(a: &[f64], b: &[f64]) -> f64 {
    dist_sq_slices(a, b).sqrt()
}

fn check_dims(a: usize, b: usize) -> Result<(), GeometryError> {
    if a != b {
        return Err(GeometryError::DimensionMismatch(a, b));
    }
    Ok(())
}

/// Euclidean distance.
pub fn distance(a: &Point, b: &Point) -> Result<f64, GeometryError> {
    check_dims(a.dim(), b.dim())?;
    Ok(a.dist(b))
}

/// Builds `T(X)`: apex `x`, axis toward `center`, height `k₃r²` and base
/// radius `k₄r³`.
pub fn make_region(
    x: &Point,
    center: &Point,
    profile: &ScaleProfile,
    r: f64,
) -> Result<ApexCone, GeometryError> {
    check_dims(x.dim(), center.dim())?;
    let distance = x.dist(center);
    let limit = r / 2.0;
    if distance < limit {
        return Err(GeometryError::XTooCloseToCenter { distance, limit });
    }
    let axis = UnitVector::between(x, center).ok_or(GeometryError::DegenerateDirection)?;
    let region = ApexCone {
        apex: x.clone(),
        axis,
        height: profile.height_coeff * r * r,
        base_radius: profile.base_coeff * r * r * r,
    };
    if !region.inside_unit_cube() {
        return Err(GeometryError::XTooCloseToBoundary);
    }
    Ok(region)
}

/// Membership in the closed cone.
pub fn cone_contains(region: &ApexCone, p: &Point) -> bool {
    if p.dim() != region.apex.dim() {
        return false;
    }
    let v = p.sub(&region.apex);
    let t = region.axis.dot(&v);
    let slack = 1e-12 * region.height;
    if t < -slack || t > region.height + slack {
        return false;
    }
    let radial_sq = (dot(&v, &v) - t * t).max(0.0);
    let allowed = region.base_radius * (t.max(0.0) / region.height);
    radial_sq.sqrt() <= allowed + 1e-12 * region.base_radius
}

/// The point `C'` on line `O-R'` at the same level as `C` along `u = unit(C−O)`.
pub fn candidate_point(
    center: &Point,
    cop: &Point,
    robber: &Point,
) -> Result<Point, GeometryError> {
    check_dims(center.dim(), cop.dim())?;
    check_dims(center.dim(), robber.dim())?;
    let u = UnitVector::between(center, cop).ok_or(GeometryError::DegenerateDirection)?;
    let to_robber = robber.sub(center);
    if norm(&to_robber) == 0.0 {
        return Err(GeometryError::DegenerateDirection);
    }
    let cop_level = u.dot(&cop.sub(center));
    let robber_level = u.dot(&to_robber);
    if robber_level < cop_level {
        return Err(GeometryError::AbovePerpendicular {
            robber: robber_level,
            cop: cop_level,
        });
    }
    Ok(center.offset(&to_robber, cop_level / robber_level))
}

/// Two opposite unit vectors orthogonal to `dir`.
///
/// In the plane this is the rotation by +90° followed by −90°. In higher
/// dimensions the first coordinate axis that is not (nearly) parallel to
/// `dir` is orthogonalized against it.
pub fn perpendicular_pair(dir: &UnitVector) -> Result<(UnitVector, UnitVector), GeometryError> {
    let c = dir.coords();
    match c.len() {
        0 | 1 => Err(GeometryError::NoPerpendicular),
        2 => {
            let p = UnitVector {
                coords: vec![-c[1], c[0]],
            };
            let q = p.negated();
            Ok((p, q))
        }
        d => {
            for i in 0..d {
                let mut v = vec![0.0; d];
                v[i] = 1.0;
                let along = c[i];
                for (vj, cj) in v.iter_mut().zip(c) {
                    *vj -= along * cj;
                }
                if norm(&v) > 1e-6 {
                    let p = UnitVector::new(v).expect("nonzero residual");
                    let q = p.negated();
                    return Ok((p, q));
                }
            }
            unreachable!("a unit vector is parallel to at most one axis")
        }
    }
}
