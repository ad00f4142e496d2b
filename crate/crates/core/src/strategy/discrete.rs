//! Graph play: both players follow their continuous rules and then snap to a
//! vertex. The cop snaps into the region `T(X)` behind its continuous target
//! `X`; the robber picks a neighbor at least as far from the cop as its
//! continuous target would be.

use thiserror::Error;

use crate::game::{CopStrategy, Notes, RobberStrategy};
use crate::geometry::{make_region, GeometryError, Point, UnitVector};
use crate::profile::ScaleProfile;
use crate::rgg::{Rgg, VertexId};
use crate::strategy::continuous::{plan_move, robber_step_or_clamp, ContinuousError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiscreteError {
    #[error("EmptyRegion: no vertex inside T(X) for X = {target:?}")]
    EmptyRegion { target: Point },
    #[error("MoveTooLong: {0}")]
    MoveTooLong(String),
    #[error(transparent)]
    Plan(#[from] ContinuousError),
}

impl DiscreteError {
    pub fn is_empty_region(&self) -> bool {
        matches!(self, DiscreteError::EmptyRegion { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SnapStep {
    Capture,
    Move {
        vertex: VertexId,
        /// The continuous target `X`.
        target: Point,
        /// Distance from the chosen vertex to `X`.
        snap_distance: f64,
        /// Angle at `R'` between the lines `R'x` and `R'O`.
        angle: f64,
    },
    /// `T(X)` is undefined; the cop keeps its vertex for this round.
    Stay {
        reason: String,
    },
}

/// The vertex nearest the center, smallest id on ties.
pub fn cop_initial_vertex(g: &Rgg) -> VertexId {
    let center = Point::center(g.d());
    let mut radius = g.r().min(0.5);
    loop {
        let nearest = g
            .neighbors_within(&center, radius)
            .into_iter()
            .map(|v| (g.position(v).dist_sq(&center), v))
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        if let Some((_, v)) = nearest {
            return v;
        }
        radius *= 2.0;
    }
}

/// Robber start: the vertex nearest `O + min(2r, 1/4)·e₁` among those
/// farther than `r` from the cop; if there is none, the vertex farthest
/// from the cop.
pub fn robber_initial_vertex(g: &Rgg, cop: VertexId) -> VertexId {
    let r = g.r();
    let goal =
        Point::center(g.d()).offset(UnitVector::axis(g.d(), 0).coords(), (2.0 * r).min(0.25));
    let cop_at = g.position(cop);
    let clear = g
        .vertices()
        .filter(|&v| g.dist(v, cop) > r)
        .map(|v| (g.position(v).dist(&goal), v))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    match clear {
        Some((_, v)) => v,
        None => g
            .vertices()
            .map(|v| (g.position(v).dist(&cop_at), v))
            .max_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)))
            .map(|(_, v)| v)
            .unwrap_or(cop),
    }
}

/// Ray parameter on `O + λ·ray` at distance exactly `r` from `cop`, moved
/// from `level` toward the cop's foot point. `None` if the ray never comes
/// within `r`.
fn pull_within(center: &Point, ray: &UnitVector, level: f64, cop: &Point, r: f64) -> Option<f64> {
    let rel = cop.sub(center);
    let foot = ray.dot(&rel);
    let off_sq = (crate::geometry::dot(&rel, &rel) - foot * foot).max(0.0);
    let room = r * r - off_sq;
    if room < 0.0 {
        return None;
    }
    let half = room.sqrt() * (1.0 - 1e-12);
    Some(level.clamp(foot - half, foot + half))
}

/// One cop response on the graph.
pub fn cop_snap_step(
    g: &Rgg,
    center: &Point,
    cop: VertexId,
    robber: VertexId,
    profile: &ScaleProfile,
    r: f64,
) -> Result<SnapStep, DiscreteError> {
    if cop == robber || g.adjacent(cop, robber) {
        return Ok(SnapStep::Capture);
    }
    let cop_at = g.position(cop);
    let robber_at = g.position(robber);
    let plan = plan_move(center, &cop_at, &robber_at, r, profile, true)?;
    let mut target = plan.target.clone();
    if cop_at.dist(&target) > r {
        let level = pull_within(center, &plan.ray, plan.level, &cop_at, r).ok_or_else(|| {
            DiscreteError::MoveTooLong(format!(
                "line O-R' is farther than r from the cop at {cop_at:?}"
            ))
        })?;
        target = center.offset(plan.ray.coords(), level);
    }

    let region = match make_region(&target, center, profile, r) {
        Ok(region) => region,
        Err(e @ (GeometryError::XTooCloseToCenter { .. } | GeometryError::XTooCloseToBoundary)) => {
            return Ok(SnapStep::Stay {
                reason: e.to_string(),
            });
        }
        Err(e) => return Err(ContinuousError::from(e).into()),
    };
    let inside = g.vertices_in_cone(&region);
    if inside.is_empty() {
        return Err(DiscreteError::EmptyRegion { target });
    }
    let vertex = inside
        .iter()
        .copied()
        .find(|&x| x == cop || g.adjacent(x, cop))
        .ok_or_else(|| {
            DiscreteError::MoveTooLong(format!(
                "none of the {} vertices in T(X) is adjacent to {cop}",
                inside.len()
            ))
        })?;
    let x = g.position(vertex);
    let angle = match (
        UnitVector::between(&robber_at, &x),
        UnitVector::between(&robber_at, center),
    ) {
        (Some(a), Some(b)) => a.dot(b.coords()).clamp(-1.0, 1.0).acos(),
        _ => 0.0,
    };
    Ok(SnapStep::Move {
        vertex,
        snap_distance: x.dist(&target),
        target,
        angle,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RobberSnap {
    pub vertex: VertexId,
    /// No neighbor kept the continuous separation from the cop.
    pub shortfall: bool,
    /// Both perpendicular moves left the cube; the target was clamped.
    pub clamped: bool,
}

/// One robber move on the graph.
pub fn robber_snap_step(
    g: &Rgg,
    center: &Point,
    cop: VertexId,
    robber: VertexId,
    r: f64,
) -> Result<RobberSnap, ContinuousError> {
    let cop_at = g.position(cop);
    let here = g.position(robber);
    let (ideal, clamped) = robber_step_or_clamp(center, &cop_at, &here, r)?;
    let need = ideal.dist(&cop_at);
    let options = g.neighbors_within(&here, r);

    let keeps_distance = options
        .iter()
        .copied()
        .filter(|&v| g.position(v).dist(&cop_at) >= need)
        .map(|v| (g.position(v).dist(&ideal), v))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    if let Some((_, vertex)) = keeps_distance {
        return Ok(RobberSnap {
            vertex,
            shortfall: false,
            clamped,
        });
    }
    let vertex = options
        .iter()
        .copied()
        .map(|v| (g.position(v).dist(&cop_at), v))
        .max_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)))
        .map(|(_, v)| v)
        .unwrap_or(robber);
    Ok(RobberSnap {
        vertex,
        shortfall: true,
        clamped,
    })
}

/// Running diagnostics of a [`GraphCop`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SnapStats {
    pub moves: u32,
    pub stays: u32,
    pub max_snap_distance: f64,
    pub max_angle: f64,
}

/// The snapping cop.
#[derive(Debug, Clone)]
pub struct GraphCop {
    center: Point,
    r: f64,
    profile: ScaleProfile,
    pub stats: SnapStats,
}

impl GraphCop {
    pub fn new(d: usize, r: f64, profile: ScaleProfile) -> Self {
        Self {
            center: Point::center(d),
            r,
            profile,
            stats: SnapStats::default(),
        }
    }
}

impl CopStrategy<Rgg> for GraphCop {
    fn place(&mut self, g: &Rgg) -> Result<VertexId, String> {
        Ok(cop_initial_vertex(g))
    }

    fn respond(
        &mut self,
        g: &Rgg,
        cop: &VertexId,
        robber: &VertexId,
        notes: &mut Notes,
    ) -> Result<VertexId, String> {
        match cop_snap_step(g, &self.center, *cop, *robber, &self.profile, self.r)
            .map_err(|e| e.to_string())?
        {
            SnapStep::Capture => Ok(*robber),
            SnapStep::Stay { reason } => {
                self.stats.stays += 1;
                notes.push(format!("cop stays: {reason}"));
                Ok(*cop)
            }
            SnapStep::Move {
                vertex,
                snap_distance,
                angle,
                ..
            } => {
                self.stats.moves += 1;
                self.stats.max_snap_distance = self.stats.max_snap_distance.max(snap_distance);
                self.stats.max_angle = self.stats.max_angle.max(angle);
                Ok(vertex)
            }
        }
    }
}

/// The snapping robber.
#[derive(Debug, Clone)]
pub struct GraphRobber {
    center: Point,
    r: f64,
    pub shortfalls: u32,
}

impl GraphRobber {
    pub fn new(d: usize, r: f64) -> Self {
        Self {
            center: Point::center(d),
            r,
            shortfalls: 0,
        }
    }
}

impl RobberStrategy<Rgg> for GraphRobber {
    fn place(&mut self, g: &Rgg, cop: &VertexId) -> Result<VertexId, String> {
        Ok(robber_initial_vertex(g, *cop))
    }

    fn step(
        &mut self,
        g: &Rgg,
        cop: &VertexId,
        robber: &VertexId,
        notes: &mut Notes,
    ) -> Result<VertexId, String> {
        let snap =
            robber_snap_step(g, &self.center, *cop, *robber, self.r).map_err(|e| e.to_string())?;
        if snap.shortfall {
            self.shortfalls += 1;
            notes.push("robber: separation shortfall".into());
        }
        if snap.clamped {
            notes.push("robber: both perpendicular moves exit the cube; clamped".into());
        }
        Ok(snap.vertex)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rgg::RggParams;

    fn p(c: &[f64]) -> Point {
        Point::new(c.to_vec())
    }

    #[test]
    fn initial_vertex_small_cases() {
        let g = Rgg::from_positions(&[p(&[0.1, 0.9])], 0.1).unwrap();
        assert_eq!(cop_initial_vertex(&g), VertexId(0));
        let g = Rgg::from_positions(&[p(&[0.9, 0.9]), p(&[0.5, 0.5])], 0.1).unwrap();
        assert_eq!(cop_initial_vertex(&g), VertexId(1));
        // tie goes to the smaller id
        let g = Rgg::from_positions(&[p(&[0.6, 0.5]), p(&[0.4, 0.5])], 0.01).unwrap();
        assert_eq!(cop_initial_vertex(&g), VertexId(0));
    }

    #[test]
    fn initial_vertex_matches_scan() {
        for seed in 0..20 {
            let g = Rgg::generate(RggParams {
                n: 100,
                r: 0.05,
                d: 2,
                seed,
            })
            .unwrap();
            let o = Point::center(2);
            let scan = g
                .vertices()
                .min_by(|&a, &b| {
                    g.position(a)
                        .dist(&o)
                        .total_cmp(&g.position(b).dist(&o))
                        .then(a.cmp(&b))
                })
                .unwrap();
            assert_eq!(cop_initial_vertex(&g), scan);
        }
    }

    #[test]
    fn snap_captures_adjacent_robber() {
        let g = Rgg::from_positions(&[p(&[0.5, 0.5]), p(&[0.5, 0.6])], 0.2).unwrap();
        let s = cop_snap_step(
            &g,
            &Point::center(2),
            VertexId(0),
            VertexId(1),
            &ScaleProfile::desk(),
            0.2,
        );
        assert_eq!(s, Ok(SnapStep::Capture));
    }

    /// Cop at C=(0.5,0.4), robber at (0.5,0.1), r = 0.2: the continuous
    /// target is X = (0.5, 0.2) (collinear advance by r).
    fn planted(extra: &[Point]) -> Rgg {
        let mut pts = vec![p(&[0.5, 0.4]), p(&[0.5, 0.1])];
        pts.extend_from_slice(extra);
        Rgg::from_positions(&pts, 0.2).unwrap()
    }

    #[test]
    fn snap_picks_vertex_at_apex() {
        let g = planted(&[p(&[0.5, 0.21]), p(&[0.5, 0.2])]);
        let s = cop_snap_step(
            &g,
            &Point::center(2),
            VertexId(0),
            VertexId(1),
            &ScaleProfile::desk(),
            0.2,
        )
        .unwrap();
        let SnapStep::Move {
            vertex,
            target,
            snap_distance,
            ..
        } = s
        else {
            panic!("{s:?}")
        };
        assert!(target.dist(&p(&[0.5, 0.2])) < 1e-12);
        assert_eq!(vertex, VertexId(3));
        assert!(snap_distance < 1e-12);
    }

    #[test]
    fn snap_reports_empty_region() {
        let g = planted(&[p(&[0.9, 0.9])]);
        let s = cop_snap_step(
            &g,
            &Point::center(2),
            VertexId(0),
            VertexId(1),
            &ScaleProfile::desk(),
            0.2,
        );
        assert!(matches!(s, Err(ref e) if e.is_empty_region()), "{s:?}");
    }

    #[test]
    fn snap_stays_when_target_near_center() {
        // A large standoff blocks the advance from O, leaving X within r/2 of O.
        let g = Rgg::from_positions(&[p(&[0.5, 0.5]), p(&[0.5, 0.5 - 0.2001])], 0.2).unwrap();
        let mut profile = ScaleProfile::desk();
        profile.keep_coeff = 4.0; // standoff 0.16 puts X within r/2 of O
        let s = cop_snap_step(
            &g,
            &Point::center(2),
            VertexId(0),
            VertexId(1),
            &profile,
            0.2,
        )
        .unwrap();
        assert!(
            matches!(s, SnapStep::Stay { ref reason } if reason.contains("r/2")),
            "{s:?}"
        );
    }

    #[test]
    fn robber_prefers_exact_target() {
        // cop (0.5,0.4), robber (0.5,0.2): continuous target (0.4,0.2)
        let g = Rgg::from_positions(
            &[
                p(&[0.5, 0.4]),
                p(&[0.5, 0.2]),
                p(&[0.4, 0.2]),
                p(&[0.45, 0.2]),
            ],
            0.1,
        )
        .unwrap();
        let s = robber_snap_step(&g, &Point::center(2), VertexId(0), VertexId(1), 0.1).unwrap();
        assert_eq!(
            s,
            RobberSnap {
                vertex: VertexId(2),
                shortfall: false,
                clamped: false
            }
        );
    }

    #[test]
    fn lonely_robber_stays() {
        let g = Rgg::from_positions(&[p(&[0.5, 0.4]), p(&[0.5, 0.2])], 0.1).unwrap();
        let s = robber_snap_step(&g, &Point::center(2), VertexId(0), VertexId(1), 0.1).unwrap();
        assert_eq!(s.vertex, VertexId(1));
        assert!(s.shortfall);
    }

    #[test]
    fn robber_initial_vertex_rule() {
        let g = Rgg::from_positions(
            &[
                p(&[0.5, 0.5]),
                p(&[0.7, 0.5]),
                p(&[0.62, 0.5]),
                p(&[0.9, 0.9]),
            ],
            0.1,
        )
        .unwrap();
        // goal (0.7, 0.5); vertex 2 is too close to the cop
        assert_eq!(robber_initial_vertex(&g, VertexId(0)), VertexId(1));
        let g = Rgg::from_positions(&[p(&[0.5, 0.5]), p(&[0.55, 0.5])], 0.1).unwrap();
        assert_eq!(robber_initial_vertex(&g, VertexId(0)), VertexId(1));
    }
}
