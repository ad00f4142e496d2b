//! Cop and robber strategies on the continuous cube.
//!
//! The cop stays on the segment from the center `O` to the robber, never
//! closer than `k₁r²` to it, and raises its squared distance from `O` by at
//! least `k₂r²` each round. The robber side-steps perpendicular to the
//! cop-robber line, which costs it at most `r²` of its own budget per round.

use rand::Rng;
use thiserror::Error;

use crate::game::{Arena, CopStrategy, Cube, Notes, RobberStrategy};
use crate::geometry::{
    candidate_point, perpendicular_pair, GeometryError, Point, UnitVector, LENGTH_TOL,
};
use crate::profile::ScaleProfile;
use crate::seed::TrialRng;

/// Largest `r` for which the per-step gain `k₂r²` is asserted.
pub const GAIN_ASSERT_MAX_R: f64 = 0.3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContinuousError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("GainViolation: gain {gain} below {required}")]
    GainViolation { gain: f64, required: f64 },
    #[error("SeparationViolation: separation {separation} below {required}")]
    SeparationViolation { separation: f64, required: f64 },
    #[error("MoveTooLong: move of length {length} exceeds r = {r}")]
    MoveTooLong { length: f64, r: f64 },
    #[error("NoValidPlacement: no robber start for r = {r}")]
    NoValidPlacement { r: f64 },
    #[error("BothDirectionsExitCube: both perpendicular moves leave the cube")]
    BothDirectionsExitCube,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepCase {
    /// `|CC'| > r/2`: move to `C'`.
    Sideways,
    /// `|CC'| ≤ r/2`: move to `C'`, then advance along `O-R'`.
    Advance,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CopDecision {
    Capture,
    MoveTo {
        target: Point,
        gain: f64,
        case: StepCase,
        back_shifted: bool,
    },
}

/// The continuous target before any assertions.
#[derive(Debug, Clone)]
pub(crate) struct Plan {
    pub target: Point,
    pub case: StepCase,
    pub back_shifted: bool,
    /// Unit direction `O → R'`.
    pub ray: UnitVector,
    /// Distance of the target from `O` along `ray`.
    pub level: f64,
}

pub fn cop_initial(d: usize) -> Point {
    Point::center(d)
}

/// Computes `C'`, applies Case 1 / Case 2 and the back-shift.
///
/// With `lenient`, a robber above the cop's level (possible only when the
/// cop is off the line `O-R`, as on a graph) is handled by keeping the
/// cop's distance from `O` and rotating onto the robber's ray.
pub(crate) fn plan_move(
    center: &Point,
    cop: &Point,
    robber: &Point,
    r: f64,
    profile: &ScaleProfile,
    lenient: bool,
) -> Result<Plan, ContinuousError> {
    let ray = UnitVector::between(center, robber).ok_or(GeometryError::DegenerateDirection)?;
    let reach = center.dist(robber);
    let cop_radius = center.dist(cop);

    let candidate_level = if cop_radius <= 1e-12 {
        0.0
    } else {
        match candidate_point(center, cop, robber) {
            Ok(c) => center.dist(&c),
            Err(GeometryError::AbovePerpendicular { .. }) if lenient => cop_radius.min(reach),
            Err(e) => return Err(e.into()),
        }
    };
    let candidate = center.offset(ray.coords(), candidate_level);
    let sideways = cop.dist(&candidate);
    let separation = profile.separation(r);

    let (case, mut level) = if sideways > r / 2.0 {
        (StepCase::Sideways, candidate_level)
    } else {
        let advance = (r - sideways)
            .min(reach - candidate_level - separation)
            .max(0.0);
        (StepCase::Advance, candidate_level + advance)
    };
    let back_shifted = reach - level < separation;
    if back_shifted {
        level = (reach - separation).max(0.0);
    }
    Ok(Plan {
        target: center.offset(ray.coords(), level),
        case,
        back_shifted,
        ray,
        level,
    })
}

/// One cop response with the strategy's guarantees checked.
pub fn cop_step(
    center: &Point,
    cop: &Point,
    robber: &Point,
    r: f64,
    profile: &ScaleProfile,
) -> Result<CopDecision, ContinuousError> {
    if cop.dist(robber) <= r {
        return Ok(CopDecision::Capture);
    }
    let plan = plan_move(center, cop, robber, r, profile, false)?;
    let target = plan.target;

    let length = cop.dist(&target);
    if length > r * (1.0 + LENGTH_TOL) {
        return Err(ContinuousError::MoveTooLong { length, r });
    }
    let separation = target.dist(robber);
    let required = profile.separation(r);
    if separation < required * (1.0 - LENGTH_TOL) {
        return Err(ContinuousError::SeparationViolation {
            separation,
            required,
        });
    }
    let gain = target.dist_sq(center) - cop.dist_sq(center);
    let required = profile.min_gain(r);
    if r <= GAIN_ASSERT_MAX_R && gain < required * (1.0 - LENGTH_TOL) {
        return Err(ContinuousError::GainViolation { gain, required });
    }
    Ok(CopDecision::MoveTo {
        target,
        gain,
        case: plan.case,
        back_shifted: plan.back_shifted,
    })
}

/// `O + min(2r, 1/4)·e₁`, or the opposite axis direction when that point
/// is within `r` of the cop.
pub fn robber_initial(center: &Point, cop: &Point, r: f64) -> Result<Point, ContinuousError> {
    if r >= 0.25 {
        return Err(ContinuousError::NoValidPlacement { r });
    }
    let e1 = UnitVector::axis(center.dim(), 0);
    let reach = (2.0 * r).min(0.25);
    let first = center.offset(e1.coords(), reach);
    if first.dist(cop) > r {
        return Ok(first);
    }
    let second = center.offset(e1.coords(), -reach);
    if second.dist(cop) > r {
        return Ok(second);
    }
    Err(ContinuousError::NoValidPlacement { r })
}

/// Uniform start in the ball of radius `1/4` around `O`, farther than `r`
/// from the cop.
pub fn robber_initial_random(
    center: &Point,
    cop: &Point,
    r: f64,
    rng: &mut TrialRng,
) -> Result<Point, ContinuousError> {
    const RADIUS: f64 = 0.25;
    for _ in 0..100_000 {
        let p = Point::new(
            center
                .coords()
                .iter()
                .map(|c| c + rng.gen_range(-RADIUS..=RADIUS))
                .collect(),
        );
        if p.dist(center) <= RADIUS && p.dist(cop) > r {
            return Ok(p);
        }
    }
    Err(ContinuousError::NoValidPlacement { r })
}

fn perpendicular_preference(
    center: &Point,
    cop: &Point,
    robber: &Point,
) -> Result<[UnitVector; 2], ContinuousError> {
    let toward_cop = UnitVector::between(robber, cop).ok_or(GeometryError::DegenerateDirection)?;
    let (first, second) = perpendicular_pair(&toward_cop)?;
    let inward = center.sub(robber);
    let slack = LENGTH_TOL * crate::geometry::norm(&inward);
    // angle O-R-R' at most π/2, first element on ties
    if first.dot(&inward) >= -slack {
        Ok([first, second])
    } else {
        Ok([second, first])
    }
}

/// Moves distance `r` perpendicular to `RC`, on the side that raises the
/// squared distance from `O` by at most `r²`; the other side is used only
/// when the preferred one leaves the cube.
pub fn robber_step(
    center: &Point,
    cop: &Point,
    robber: &Point,
    r: f64,
) -> Result<Point, ContinuousError> {
    for dir in perpendicular_preference(center, cop, robber)? {
        let next = robber.offset(dir.coords(), r);
        if next.in_unit_cube_tol(1e-12) {
            return Ok(next.clamped_to_cube());
        }
    }
    Err(ContinuousError::BothDirectionsExitCube)
}

/// [`robber_step`], falling back to the preferred perpendicular move
/// clamped into the cube once both directions leave it. The flag reports
/// the fallback.
pub(crate) fn robber_step_or_clamp(
    center: &Point,
    cop: &Point,
    robber: &Point,
    r: f64,
) -> Result<(Point, bool), ContinuousError> {
    match robber_step(center, cop, robber, r) {
        Ok(p) => Ok((p, false)),
        Err(ContinuousError::BothDirectionsExitCube) => {
            let [dir, _] = perpendicular_preference(center, cop, robber)?;
            Ok((robber.offset(dir.coords(), r).clamped_to_cube(), true))
        }
        Err(e) => Err(e),
    }
}

/// The capture strategy with all per-step assertions enabled.
#[derive(Debug, Clone)]
pub struct PaperCop {
    center: Point,
    r: f64,
    profile: ScaleProfile,
}

impl PaperCop {
    pub fn new(d: usize, r: f64, profile: ScaleProfile) -> Self {
        Self {
            center: Point::center(d),
            r,
            profile,
        }
    }
}

impl CopStrategy<Cube> for PaperCop {
    fn place(&mut self, arena: &Cube) -> Result<Point, String> {
        Ok(cop_initial(arena.dim()))
    }

    fn respond(
        &mut self,
        _: &Cube,
        cop: &Point,
        robber: &Point,
        _: &mut Notes,
    ) -> Result<Point, String> {
        match cop_step(&self.center, cop, robber, self.r, &self.profile)
            .map_err(|e| e.to_string())?
        {
            CopDecision::Capture => Ok(robber.clone()),
            CopDecision::MoveTo { target, .. } => Ok(target),
        }
    }
}

/// Walks straight at the robber, keeping the same `k₁r²` standoff as the
/// `PaperCop` when it cannot capture.
#[derive(Debug, Clone)]
pub struct GreedyCop {
    r: f64,
    standoff: f64,
}

impl GreedyCop {
    pub fn new(r: f64, profile: &ScaleProfile) -> Self {
        Self {
            r,
            standoff: profile.separation(r),
        }
    }
}

impl CopStrategy<Cube> for GreedyCop {
    fn place(&mut self, arena: &Cube) -> Result<Point, String> {
        Ok(Point::center(arena.dim()))
    }

    fn respond(
        &mut self,
        _: &Cube,
        cop: &Point,
        robber: &Point,
        _: &mut Notes,
    ) -> Result<Point, String> {
        let gap = cop.dist(robber);
        if gap <= self.r {
            return Ok(robber.clone());
        }
        let dir = UnitVector::between(cop, robber).ok_or("cop and robber coincide")?;
        Ok(cop.offset(dir.coords(), self.r.min(gap - self.standoff).max(0.0)))
    }
}

/// A cop that never leaves the center.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdleCop;

impl CopStrategy<Cube> for IdleCop {
    fn place(&mut self, arena: &Cube) -> Result<Point, String> {
        Ok(Point::center(arena.dim()))
    }

    fn respond(
        &mut self,
        _: &Cube,
        cop: &Point,
        _: &Point,
        _: &mut Notes,
    ) -> Result<Point, String> {
        Ok(cop.clone())
    }
}

/// How a robber picks its first position.
#[derive(Debug, Clone)]
pub enum RobberStart {
    /// [`robber_initial`].
    Fixed,
    /// [`robber_initial_random`].
    Random(TrialRng),
    At(Point),
}

impl RobberStart {
    fn place(&mut self, center: &Point, cop: &Point, r: f64) -> Result<Point, String> {
        match self {
            RobberStart::Fixed => robber_initial(center, cop, r),
            RobberStart::Random(rng) => robber_initial_random(center, cop, r, rng),
            RobberStart::At(p) => Ok(p.clone()),
        }
        .map_err(|e| e.to_string())
    }
}

/// Perpendicular escape, clamped into the cube once the budget runs out.
#[derive(Debug, Clone)]
pub struct PaperRobber {
    start: RobberStart,
    r: f64,
    center: Point,
}

impl PaperRobber {
    pub fn new(d: usize, r: f64, start: RobberStart) -> Self {
        Self {
            start,
            r,
            center: Point::center(d),
        }
    }
}

impl RobberStrategy<Cube> for PaperRobber {
    fn place(&mut self, _: &Cube, cop: &Point) -> Result<Point, String> {
        self.start.place(&self.center, cop, self.r)
    }

    fn step(
        &mut self,
        _: &Cube,
        cop: &Point,
        robber: &Point,
        notes: &mut Notes,
    ) -> Result<Point, String> {
        let (next, clamped) =
            robber_step_or_clamp(&self.center, cop, robber, self.r).map_err(|e| e.to_string())?;
        if clamped {
            notes.push("robber: both perpendicular moves exit the cube; clamped".into());
        }
        Ok(next)
    }
}

/// Jumps to a uniform point of the `r`-ball around itself inside the cube.
#[derive(Debug, Clone)]
pub struct RandomRobber {
    start: RobberStart,
    rng: TrialRng,
    r: f64,
    center: Point,
}

impl RandomRobber {
    pub fn new(d: usize, r: f64, start: RobberStart, rng: TrialRng) -> Self {
        Self {
            start,
            rng,
            r,
            center: Point::center(d),
        }
    }
}

impl RobberStrategy<Cube> for RandomRobber {
    fn place(&mut self, _: &Cube, cop: &Point) -> Result<Point, String> {
        self.start.place(&self.center, cop, self.r)
    }

    fn step(
        &mut self,
        _: &Cube,
        _: &Point,
        robber: &Point,
        _: &mut Notes,
    ) -> Result<Point, String> {
        let r = self.r;
        let bounds: Vec<(f64, f64)> = robber
            .coords()
            .iter()
            .map(|&x| ((x - r).max(0.0), (x + r).min(1.0)))
            .collect();
        for _ in 0..100_000 {
            let p = Point::new(
                bounds
                    .iter()
                    .map(|&(lo, hi)| self.rng.gen_range(lo..=hi))
                    .collect(),
            );
            if p.dist(robber) <= r {
                return Ok(p);
            }
        }
        Ok(robber.clone())
    }
}

/// Runs straight away from the cop, clamped into the cube.
#[derive(Debug, Clone)]
pub struct FleeingRobber {
    start: RobberStart,
    r: f64,
    center: Point,
}

impl FleeingRobber {
    pub fn new(d: usize, r: f64, start: RobberStart) -> Self {
        Self {
            start,
            r,
            center: Point::center(d),
        }
    }
}

impl RobberStrategy<Cube> for FleeingRobber {
    fn place(&mut self, _: &Cube, cop: &Point) -> Result<Point, String> {
        self.start.place(&self.center, cop, self.r)
    }

    fn step(
        &mut self,
        _: &Cube,
        cop: &Point,
        robber: &Point,
        _: &mut Notes,
    ) -> Result<Point, String> {
        let away = UnitVector::between(cop, robber).ok_or("cop and robber coincide")?;
        Ok(robber.offset(away.coords(), self.r).clamped_to_cube())
    }
}
