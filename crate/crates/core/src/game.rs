//! The game loop shared by continuous and graph play.
//!
//! Order of play: the cop places, then each round `t` consists of a robber
//! move (its placement when `t = 1`) followed by the cop's response. Capture
//! is checked at the start of the cop's turn; when the robber is within `r`
//! the cop steps onto it and the game ends.

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Point, LENGTH_TOL, MAX_DIM};
use crate::profile::ScaleProfile;
use crate::rgg::{Rgg, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Continuous,
    Discrete,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("max_rounds must be at least 1")]
    NoRounds,
    #[error("r must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("d must be in 1..={MAX_DIM}, got {0}")]
    BadDimension(usize),
}

#[derive(Debug, Clone)]
pub struct GameConfig {
    pub d: usize,
    pub r: f64,
    pub max_rounds: u32,
    pub profile: ScaleProfile,
    pub mode: Mode,
}

impl GameConfig {
    /// Config whose round limit is [`max_round_bound`] times `slack`.
    pub fn with_bound(d: usize, r: f64, profile: ScaleProfile, mode: Mode, slack: u32) -> Self {
        let max_rounds = max_round_bound(d, r, &profile) * slack;
        Self {
            d,
            r,
            max_rounds,
            profile,
            mode,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.max_rounds == 0 {
            return Err(ConfigError::NoRounds);
        }
        if !(self.r.is_finite() && self.r > 0.0) {
            return Err(ConfigError::BadRadius(self.r));
        }
        if !(1..=MAX_DIM).contains(&self.d) {
            return Err(ConfigError::BadDimension(self.d));
        }
        Ok(())
    }
}

/// `⌈(d/4)/(k₂r²)⌉ + 2`: the cop's potential is at most `d/4` and grows by
/// at least `k₂r²` per non-capturing round.
pub fn max_round_bound(d: usize, r: f64, profile: &ScaleProfile) -> u32 {
    let x = (d as f64 / 4.0) / (profile.gain_coeff * r * r);
    let nearest = x.round();
    let steps = if (x - nearest).abs() <= 1e-9 * x.max(1.0) {
        nearest
    } else {
        x.ceil()
    };
    (steps.min(u32::MAX as f64 - 2.0) as u32) + 2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Outcome {
    Captured { round: u32 },
    Escaped { rounds: u32 },
    Fault { round: u32, reason: String },
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Captured { .. } => "captured",
            Outcome::Escaped { .. } => "escaped",
            Outcome::Fault { .. } => "fault",
        }
    }

    pub fn is_captured(&self) -> bool {
        matches!(self, Outcome::Captured { .. })
    }

    pub fn captured_round(&self) -> Option<u32> {
        match self {
            Outcome::Captured { round } => Some(*round),
            _ => None,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Captured { round } => write!(f, "captured at round {round}"),
            Outcome::Escaped { rounds } => write!(f, "escaped after {rounds} rounds"),
            Outcome::Fault { round, reason } => write!(f, "fault at round {round}: {reason}"),
        }
    }
}

/// Positions after the cop's response in one round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: u32,
    pub cop: Point,
    pub robber: Point,
    /// Change of the cop's squared distance from the center.
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub round: u32,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameTrace {
    pub cop_start: Option<Point>,
    pub rounds: Vec<RoundRecord>,
    pub outcome: Outcome,
    pub events: Vec<TraceEvent>,
}

impl GameTrace {
    pub fn rounds_played(&self) -> u32 {
        self.rounds.len() as u32
    }

    /// Smallest cop gain over the rounds that did not end in capture.
    pub fn min_step_gain(&self) -> Option<f64> {
        let captured = self.outcome.captured_round();
        self.rounds
            .iter()
            .filter(|rec| Some(rec.round) != captured)
            .map(|rec| rec.gain)
            .min_by(f64::total_cmp)
    }

    /// Displacement of both players never exceeds `r(1 + 1e-9)`.
    pub fn steps_within(&self, r: f64) -> bool {
        let limit = r * (1.0 + LENGTH_TOL);
        let mut cop = self.cop_start.clone();
        let mut robber: Option<&Point> = None;
        for rec in &self.rounds {
            if let Some(prev) = robber {
                if prev.dist(&rec.robber) > limit {
                    return false;
                }
            }
            if let Some(prev) = &cop {
                if prev.dist(&rec.cop) > limit {
                    return false;
                }
            }
            robber = Some(&rec.robber);
            cop = Some(rec.cop.clone());
        }
        true
    }

    /// One JSON object per round: round, cop, robber, gain.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for rec in &self.rounds {
            serde_json::to_writer(&mut out, rec)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// The board a game is played on.
pub trait Arena {
    type Pos: Clone + PartialEq + fmt::Debug;

    fn dim(&self) -> usize;
    fn point(&self, p: &Self::Pos) -> Point;
    fn check_position(&self, p: &Self::Pos) -> Result<(), String>;
    fn check_move(&self, from: &Self::Pos, to: &Self::Pos, r: f64) -> Result<(), String>;
    fn captures(&self, cop: &Self::Pos, robber: &Self::Pos, r: f64) -> bool;
}

/// The continuous board `[0,1]^d`.
#[derive(Debug, Clone, Copy)]
pub struct Cube {
    pub d: usize,
}

/// Rounding allowance for positions computed on the cube.
const CUBE_TOL: f64 = 1e-12;

impl Arena for Cube {
    type Pos = Point;

    fn dim(&self) -> usize {
        self.d
    }

    fn point(&self, p: &Point) -> Point {
        p.clone()
    }

    fn check_position(&self, p: &Point) -> Result<(), String> {
        if p.dim() != self.d {
            return Err(format!(
                "position has dimension {} in a {}-cube",
                p.dim(),
                self.d
            ));
        }
        if !p.coords().iter().all(|x| x.is_finite()) || !p.in_unit_cube_tol(CUBE_TOL) {
            return Err(format!("position {p:?} outside the unit cube"));
        }
        Ok(())
    }

    fn check_move(&self, from: &Point, to: &Point, r: f64) -> Result<(), String> {
        let len = from.dist(to);
        if len > r * (1.0 + LENGTH_TOL) {
            return Err(format!("move of length {len} exceeds r = {r}"));
        }
        Ok(())
    }

    fn captures(&self, cop: &Point, robber: &Point, r: f64) -> bool {
        cop.dist(robber) <= r
    }
}

impl Arena for Rgg {
    type Pos = VertexId;

    fn dim(&self) -> usize {
        self.d()
    }

    fn point(&self, v: &VertexId) -> Point {
        self.position(*v)
    }

    fn check_position(&self, v: &VertexId) -> Result<(), String> {
        if v.index() >= self.n() {
            return Err(format!("vertex {v} does not exist"));
        }
        Ok(())
    }

    fn check_move(&self, from: &VertexId, to: &VertexId, _r: f64) -> Result<(), String> {
        if from != to && !self.adjacent(*from, *to) {
            return Err(format!(
                "{from} -> {to} is not an edge (length {})",
                self.dist(*from, *to)
            ));
        }
        Ok(())
    }

    fn captures(&self, cop: &VertexId, robber: &VertexId, _r: f64) -> bool {
        cop == robber || self.adjacent(*cop, *robber)
    }
}

/// Notes a strategy wants recorded in the trace for the current round.
pub type Notes = Vec<String>;

pub trait CopStrategy<A: Arena> {
    fn place(&mut self, arena: &A) -> Result<A::Pos, String>;
    /// Called only when the robber is not capturable.
    fn respond(
        &mut self,
        arena: &A,
        cop: &A::Pos,
        robber: &A::Pos,
        notes: &mut Notes,
    ) -> Result<A::Pos, String>;
}

pub trait RobberStrategy<A: Arena> {
    fn place(&mut self, arena: &A, cop: &A::Pos) -> Result<A::Pos, String>;
    fn step(
        &mut self,
        arena: &A,
        cop: &A::Pos,
        robber: &A::Pos,
        notes: &mut Notes,
    ) -> Result<A::Pos, String>;
}

/// Plays one game. Strategy errors and illegal moves end the game with
/// [`Outcome::Fault`]; this function itself never fails.
pub fn play<A, C, R>(
    config: &GameConfig,
    cop_strategy: &mut C,
    robber_strategy: &mut R,
    arena: &A,
) -> GameTrace
where
    A: Arena,
    C: CopStrategy<A> + ?Sized,
    R: RobberStrategy<A> + ?Sized,
{
    let mut trace = GameTrace {
        cop_start: None,
        rounds: Vec::new(),
        outcome: Outcome::Escaped {
            rounds: config.max_rounds,
        },
        events: Vec::new(),
    };
    let fault = |trace: &mut GameTrace, round: u32, reason: String| {
        trace.outcome = Outcome::Fault { round, reason };
    };
    if let Err(e) = config.validate() {
        fault(&mut trace, 0, e.to_string());
        return trace;
    }
    let r = config.r;

    let mut cop = match cop_strategy
        .place(arena)
        .and_then(|c| arena.check_position(&c).map(|_| c))
    {
        Ok(c) => c,
        Err(reason) => {
            fault(&mut trace, 0, format!("cop placement: {reason}"));
            return trace;
        }
    };
    trace.cop_start = Some(arena.point(&cop));
    let mut robber: Option<A::Pos> = None;
    let mut notes = Notes::new();

    for round in 1..=config.max_rounds {
        let moved = match &robber {
            None => robber_strategy.place(arena, &cop),
            Some(prev) => robber_strategy
                .step(arena, &cop, prev, &mut notes)
                .and_then(|next| arena.check_move(prev, &next, r).map(|_| next)),
        }
        .and_then(|next| arena.check_position(&next).map(|_| next));
        flush_notes(&mut trace, round, &mut notes);
        let next_robber = match moved {
            Ok(p) => p,
            Err(reason) => {
                fault(&mut trace, round, format!("robber: {reason}"));
                return trace;
            }
        };
        let before = arena.point(&cop).potential();

        if arena.captures(&cop, &next_robber, r) {
            let at = arena.point(&next_robber);
            trace.rounds.push(RoundRecord {
                round,
                gain: at.potential() - before,
                cop: at.clone(),
                robber: at,
            });
            trace.outcome = Outcome::Captured { round };
            return trace;
        }

        let response = cop_strategy
            .respond(arena, &cop, &next_robber, &mut notes)
            .and_then(|next| arena.check_move(&cop, &next, r).map(|_| next))
            .and_then(|next| arena.check_position(&next).map(|_| next));
        flush_notes(&mut trace, round, &mut notes);
        match response {
            Ok(next) => cop = next,
            Err(reason) => {
                fault(&mut trace, round, format!("cop: {reason}"));
                return trace;
            }
        }
        let cop_at = arena.point(&cop);
        trace.rounds.push(RoundRecord {
            round,
            gain: cop_at.potential() - before,
            cop: cop_at,
            robber: arena.point(&next_robber),
        });
        robber = Some(next_robber);
    }
    trace
}

fn flush_notes(trace: &mut GameTrace, round: u32, notes: &mut Notes) {
    trace
        .events
        .extend(notes.drain(..).map(|note| TraceEvent { round, note }));
}
