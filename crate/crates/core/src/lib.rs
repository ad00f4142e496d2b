//! Pursuit on random geometric graphs: a continuous lion-and-man engine in
//! the unit cube, its snapped counterpart on random geometric graphs, and
//! independent checks for both.

pub mod game;
pub mod geometry;
pub mod harness;
pub mod profile;
pub mod rgg;
pub mod seed;
pub mod strategy;
pub mod verification;

pub use game::{max_round_bound, play, GameConfig, GameTrace, Mode, Outcome};
pub use geometry::{ApexCone, OrientedRectangle, Point, UnitVector};
pub use profile::ScaleProfile;
pub use rgg::{Rgg, RggParams, VertexId};
