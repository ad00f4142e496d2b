//! Turning a trial description and a seed into a game and a row.

use std::time::Instant;

use rayon::prelude::*;

use super::row::ExperimentRow;
use crate::game::{
    max_round_bound, play, CopStrategy, Cube, GameConfig, GameTrace, Mode, Outcome, RobberStrategy,
};
use crate::profile::ScaleProfile;
use crate::rgg::{Rgg, RggParams};
use crate::seed::{child_seed, rng_from_seed};
use crate::strategy::continuous::{
    FleeingRobber, GreedyCop, PaperCop, PaperRobber, RandomRobber, RobberStart,
};
use crate::strategy::discrete::{GraphCop, GraphRobber};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CopKind {
    Paper,
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RobberKind {
    Paper,
    Random,
    /// Runs straight away from the cop.
    Greedy,
}

/// Where a continuous robber starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum StartKind {
    /// Deterministic: min(2r, 1/4) from the center along the first axis.
    Fixed,
    /// Uniform in the ball of radius 1/4 about the center, drawn from the trial seed.
    Random,
}

/// Everything about a trial except its seed.
#[derive(Debug, Clone)]
pub struct TrialSpec {
    pub mode: Mode,
    pub d: usize,
    pub r: f64,
    /// Vertex count; ignored in continuous mode.
    pub n: usize,
    pub profile: ScaleProfile,
    /// Defaults to the round bound (continuous) or twice it (discrete).
    pub max_rounds: Option<u32>,
    pub cop: CopKind,
    pub robber: RobberKind,
    pub start: StartKind,
}

impl TrialSpec {
    pub fn continuous(
        d: usize,
        r: f64,
        profile: ScaleProfile,
        cop: CopKind,
        robber: RobberKind,
    ) -> Self {
        Self {
            mode: Mode::Continuous,
            d,
            r,
            n: 0,
            profile,
            max_rounds: None,
            cop,
            robber,
            start: StartKind::Fixed,
        }
    }

    pub fn discrete(d: usize, r: f64, n: usize, profile: ScaleProfile) -> Self {
        Self {
            mode: Mode::Discrete,
            d,
            r,
            n,
            profile,
            max_rounds: None,
            cop: CopKind::Paper,
            robber: RobberKind::Paper,
            start: StartKind::Fixed,
        }
    }

    pub fn config(&self) -> GameConfig {
        let slack = match self.mode {
            Mode::Continuous => 1,
            Mode::Discrete => 2,
        };
        let max_rounds = self
            .max_rounds
            .unwrap_or_else(|| max_round_bound(self.d, self.r, &self.profile) * slack);
        GameConfig {
            d: self.d,
            r: self.r,
            max_rounds,
            profile: self.profile.clone(),
            mode: self.mode,
        }
    }
}

pub struct TrialResult {
    pub row: ExperimentRow,
    pub trace: GameTrace,
}

fn fault_trace(reason: String) -> GameTrace {
    GameTrace {
        cop_start: None,
        rounds: Vec::new(),
        outcome: Outcome::Fault { round: 0, reason },
        events: Vec::new(),
    }
}

fn play_continuous(spec: &TrialSpec, config: &GameConfig, seed: u64) -> GameTrace {
    let (d, r) = (spec.d, spec.r);
    let start = match spec.start {
        StartKind::Fixed => RobberStart::Fixed,
        StartKind::Random => RobberStart::Random(rng_from_seed(seed)),
    };
    let mut cop: Box<dyn CopStrategy<Cube>> = match spec.cop {
        CopKind::Paper => Box::new(PaperCop::new(d, r, spec.profile.clone())),
        CopKind::Greedy => Box::new(GreedyCop::new(r, &spec.profile)),
    };
    let mut robber: Box<dyn RobberStrategy<Cube>> = match spec.robber {
        RobberKind::Paper => Box::new(PaperRobber::new(d, r, start)),
        RobberKind::Random => Box::new(RandomRobber::new(
            d,
            r,
            start,
            rng_from_seed(child_seed(seed, 1)),
        )),
        RobberKind::Greedy => Box::new(FleeingRobber::new(d, r, start)),
    };
    play(config, cop.as_mut(), robber.as_mut(), &Cube { d })
}

fn play_discrete(spec: &TrialSpec, config: &GameConfig, seed: u64) -> GameTrace {
    let params = RggParams {
        n: spec.n,
        r: spec.r,
        d: spec.d,
        seed,
    };
    match Rgg::generate(params) {
        Ok(g) => {
            let mut cop = GraphCop::new(spec.d, spec.r, spec.profile.clone());
            let mut robber = GraphRobber::new(spec.d, spec.r);
            play(config, &mut cop, &mut robber, &g)
        }
        Err(e) => fault_trace(format!("graph: {e}")),
    }
}

pub fn run_trial(spec: &TrialSpec, trial: u64, seed: u64) -> TrialResult {
    let started = Instant::now();
    let config = spec.config();
    let trace = match spec.mode {
        Mode::Continuous => play_continuous(spec, &config, seed),
        Mode::Discrete => play_discrete(spec, &config, seed),
    };
    let fault_reason = match &trace.outcome {
        Outcome::Fault { reason, .. } => Some(reason.clone()),
        _ => None,
    };
    let row = ExperimentRow {
        trial,
        seed,
        n: spec.n as u64,
        r: spec.r,
        d: spec.d,
        profile: spec.profile.name.clone(),
        outcome: trace.outcome.label().to_string(),
        rounds: trace.rounds_played(),
        min_step_gain: trace.min_step_gain(),
        fault_reason,
        wallclock_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    TrialResult { row, trace }
}

/// Trial `t` at radius index `i` gets index `i·trials + t` and seed
/// `child_seed(master_seed, index)`. Rows come back in index order. `jobs`
/// of `Some(1)` runs serially, `None` uses every core.
pub fn run_sweep(
    base: &TrialSpec,
    radii: &[f64],
    trials: u64,
    master_seed: u64,
    jobs: Option<usize>,
) -> Result<Vec<ExperimentRow>, rayon::ThreadPoolBuildError> {
    let tasks: Vec<(u64, TrialSpec)> = radii
        .iter()
        .enumerate()
        .flat_map(|(i, &r)| {
            (0..trials).map(move |t| (i as u64 * trials + t, TrialSpec { r, ..base.clone() }))
        })
        .collect();
    let one = |(index, spec): &(u64, TrialSpec)| {
        run_trial(spec, *index, child_seed(master_seed, *index)).row
    };
    if jobs == Some(1) {
        return Ok(tasks.iter().map(one).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()?;
    Ok(pool.install(|| tasks.par_iter().map(one).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn continuous_game_is_captured_within_bound() {
        let spec = TrialSpec::continuous(
            2,
            0.1,
            ScaleProfile::paper(2),
            CopKind::Paper,
            RobberKind::Paper,
        );
        let res = run_trial(&spec, 0, child_seed(1, 0));
        assert_eq!(res.row.outcome, "captured", "{:?}", res.row.fault_reason);
        assert!(res.row.rounds <= 252);
        assert!(res.row.min_step_gain.unwrap() >= 0.2 * 0.01 * (1.0 - 1e-9));
    }

    #[test]
    fn bad_graph_params_fault() {
        let spec = TrialSpec::discrete(2, 0.3, 0, ScaleProfile::desk());
        let res = run_trial(&spec, 0, 5);
        assert_eq!(res.row.outcome, "fault");
        assert_eq!(res.row.rounds, 0);
    }

    #[test]
    fn sweep_indexing_and_order() {
        let spec = TrialSpec::continuous(
            2,
            0.2,
            ScaleProfile::paper(2),
            CopKind::Paper,
            RobberKind::Random,
        );
        let rows = run_sweep(&spec, &[0.3, 0.2], 3, 7, Some(1)).unwrap();
        assert_eq!(
            rows.iter().map(|r| r.trial).collect::<Vec<_>>(),
            vec![0, 1, 2, 3, 4, 5]
        );
        assert_eq!(rows[4].r, 0.2);
        assert_eq!(rows[4].seed, child_seed(7, 4));
    }
}
