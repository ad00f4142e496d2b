//! Exit criteria. Each criterion prints one `PASS`/`FAIL` line; the process
//! exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use rgg_pursuit::game::{max_round_bound, GameTrace, Outcome};
use rgg_pursuit::geometry::{cone_contains, make_region, Point};
use rgg_pursuit::harness::suites::{occupancy_check, oracle_suite};
use rgg_pursuit::harness::{
    fit_capture_scaling, run_sweep, run_trial, write_csv, CopKind, ExperimentRow, RobberKind,
    StartKind, TrialSpec,
};
use rgg_pursuit::profile::ScaleProfile;
use rgg_pursuit::rgg::{Rgg, RggParams, VertexId};
use rgg_pursuit::seed::{child_seed, rng_from_seed};
use rgg_pursuit::verification::{
    log_empty_probability, symbolic_log_bound, union_bound_threshold, ThresholdParams,
};

const MASTER_SEED: u64 = 20_240_601;
const GAMES: u64 = 100;
const REL_TOL: f64 = 1e-9;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

/// Smallest cop-robber distance after a non-capturing cop move.
fn min_separation(trace: &GameTrace) -> Option<f64> {
    let captured = trace.outcome.captured_round();
    trace
        .rounds
        .iter()
        .filter(|rec| Some(rec.round) != captured)
        .map(|rec| rec.cop.dist(&rec.robber))
        .min_by(f64::total_cmp)
}

fn random_start(d: usize, r: f64, robber: RobberKind) -> TrialSpec {
    let mut spec = TrialSpec::continuous(d, r, ScaleProfile::paper(d), CopKind::Paper, robber);
    spec.start = StartKind::Random;
    spec
}

/// `PaperCop` against three robbers: every game captured within the bound
/// with the per-step gain and separation guarantees.
fn capture_bound(d: usize, radii: &[f64], expected_bound: impl Fn(f64) -> u32) -> Verdict {
    let mut notes = Vec::new();
    let mut pass = true;
    for (ri, &r) in radii.iter().enumerate() {
        let profile = ScaleProfile::paper(d);
        let bound = max_round_bound(d, r, &profile);
        if bound != expected_bound(r) {
            pass = false;
            notes.push(format!(
                "bound({r}) = {bound}, expected {}",
                expected_bound(r)
            ));
        }
        for (ki, robber) in [RobberKind::Paper, RobberKind::Random, RobberKind::Greedy]
            .into_iter()
            .enumerate()
        {
            let spec = random_start(d, r, robber);
            let worst = (0..GAMES)
                .into_par_iter()
                .map(|t| {
                    let index = (ri as u64 * 3 + ki as u64) * GAMES + t;
                    let res = run_trial(&spec, index, child_seed(MASTER_SEED, index));
                    let ok_outcome =
                        matches!(res.trace.outcome, Outcome::Captured { round } if round <= bound);
                    let gain = res.trace.min_step_gain().unwrap_or(f64::INFINITY);
                    let sep = min_separation(&res.trace).unwrap_or(f64::INFINITY);
                    (ok_outcome, res.row.rounds, gain, sep)
                })
                .reduce(
                    || (true, 0, f64::INFINITY, f64::INFINITY),
                    |a, b| (a.0 && b.0, a.1.max(b.1), a.2.min(b.2), a.3.min(b.3)),
                );
            let gain_ok = worst.2 >= profile.min_gain(r) * (1.0 - REL_TOL);
            let sep_ok = worst.3 >= profile.separation(r) * (1.0 - REL_TOL);
            pass &= worst.0 && gain_ok && sep_ok;
            notes.push(format!(
                "r={r} {robber:?}: max rounds {}/{bound}, min gain {:.3e}, min sep {:.3e}{}",
                worst.1,
                worst.2,
                worst.3,
                if worst.0 && gain_ok && sep_ok {
                    ""
                } else {
                    " VIOLATION"
                }
            ));
        }
    }
    verdict(pass, notes.join("; "))
}

fn criterion_1() -> Verdict {
    capture_bound(2, &[0.2, 0.1, 0.05], |r| {
        (2.5 / (r * r) - 1e-9).ceil() as u32 + 2
    })
}

fn criterion_2() -> Verdict {
    let mut notes = Vec::new();
    let mut pass = true;
    for r in [0.1f64, 0.05] {
        let floor = (3.0 / (16.0 * r * r)).floor() as u32;
        for cop in [CopKind::Paper, CopKind::Greedy] {
            let mut spec = random_start(2, r, RobberKind::Paper);
            spec.cop = cop;
            let shortest = (0..GAMES)
                .into_par_iter()
                .map(|t| {
                    let res = run_trial(&spec, t, child_seed(MASTER_SEED ^ 2, t));
                    match res.trace.outcome {
                        Outcome::Captured { round } => round - 1,
                        Outcome::Escaped { rounds } => rounds,
                        Outcome::Fault { round, .. } => round.saturating_sub(1),
                    }
                })
                .min()
                .unwrap();
            pass &= shortest >= floor;
            notes.push(format!(
                "r={r} {cop:?} cop: shortest survival {shortest} (floor {floor})"
            ));
        }
    }
    let base = TrialSpec::continuous(
        2,
        0.1,
        ScaleProfile::paper(2),
        CopKind::Paper,
        RobberKind::Paper,
    );
    let rows = run_sweep(&base, &[0.2, 0.1, 0.05], 50, MASTER_SEED, None).unwrap();
    match fit_capture_scaling(&rows) {
        Ok(fit) => {
            let ok = (0.8..=1.2).contains(&fit.exponent);
            pass &= ok;
            notes.push(format!(
                "sweep exponent {:.4} (coefficient {:.4})",
                fit.exponent, fit.coefficient
            ));
        }
        Err(e) => {
            pass = false;
            notes.push(format!("sweep fit: {e}"));
        }
    }
    verdict(pass, notes.join("; "))
}

fn criterion_3() -> Verdict {
    capture_bound(3, &[0.2, 0.1, 0.05], |r| {
        ((0.75 / (r * r / 5.0)) - 1e-9).ceil() as u32 + 2
    })
}

fn criterion_4() -> Verdict {
    let (d, n, r) = (2, 200_000usize, 0.25);
    let profile = ScaleProfile::desk();
    let bound = union_bound_threshold(
        &ThresholdParams {
            c: 1.0,
            n: n as u64,
            r,
            d,
        },
        &profile,
    )
    .unwrap();
    let union_ok = bound.value() < 1e-3;

    let spec = TrialSpec::discrete(d, r, n, profile.clone());
    let limit = 2 * max_round_bound(d, r, &profile);
    let rows: Vec<ExperimentRow> = (0..30u64)
        .into_par_iter()
        .map(|t| run_trial(&spec, t, child_seed(MASTER_SEED, t)).row)
        .collect();
    let clean = rows
        .iter()
        .filter(|row| {
            !row.fault_reason
                .as_deref()
                .unwrap_or("")
                .contains("EmptyRegion")
        })
        .count();
    let fault_free: Vec<_> = rows.iter().filter(|row| row.outcome != "fault").collect();
    let captured = fault_free
        .iter()
        .filter(|row| row.outcome == "captured" && row.rounds <= limit)
        .count();
    let pass = union_ok && clean >= 28 && captured == fault_free.len();
    verdict(
        pass,
        format!(
            "union bound {:.3e} over {} rectangles (need < 1e-3: {}); runs free of EmptyRegion {clean}/30 (need 28); \
             fault-free runs captured within {limit}: {captured}/{}",
            bound.value(),
            bound.rectangles,
            if union_ok { "ok" } else { "not met" },
            fault_free.len()
        ),
    )
}

fn criterion_5() -> Verdict {
    let (c, n, coeff) = (1e13, 1_000_000u64, 1e-12);
    let ln_n = (n as f64).ln();
    let target = -8.0 * ln_n;
    let symbolic = symbolic_log_bound(c, n, coeff);
    // 50-digit evaluation of 2 ln n + n ln(1 - 10 ln n / n).
    let reference = -110.533_628_759_385_29;
    let agree = (symbolic - reference).abs() <= 1e-12 * reference.abs();
    let single = log_empty_probability(coeff * c * ln_n / n as f64, n);

    // Far enough out that the threshold radius is below 1 and the cover is
    // non-degenerate.
    let far = ThresholdParams::at_threshold(c, 10u64.pow(16), 2);
    let cover = union_bound_threshold(&far, &ScaleProfile::paper(2)).unwrap();
    let far_target = -8.0 * (far.n as f64).ln();
    let pass = symbolic < target && agree && cover.log_bound < far_target;
    verdict(
        pass,
        format!(
            "ln bound at n=1e6: {symbolic:.6} (per rectangle {single:.4}) vs -8 ln n = {target:.6}; cover bound at n=1e16 (r={:.4}, {} rectangles): \
             ln {:.3} vs {far_target:.3}",
            far.r, cover.rectangles, cover.log_bound
        ),
    )
}

fn criterion_6() -> Verdict {
    let occ = occupancy_check(5e-4, 10_000, 10_000, MASTER_SEED);
    verdict(
        occ.z <= 3.0,
        format!(
            "empty {}/{} = {:.5} vs {:.5}, {:.2} standard errors",
            occ.empty, occ.trials, occ.observed_fraction, occ.expected_fraction, occ.z
        ),
    )
}

fn criterion_7() -> Verdict {
    let rows = oracle_suite(50, 12, MASTER_SEED);
    let agree = rows.iter().filter(|row| row.agree).count();
    let copwin = rows.iter().filter(|row| row.copwin).count();
    verdict(
        agree == rows.len(),
        format!("{agree}/{} agree ({copwin} cop-win)", rows.len()),
    )
}

fn criterion_8() -> Verdict {
    let mismatches: usize = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(child_seed(MASTER_SEED ^ 8, i));
            let d = rng.gen_range(2..=3);
            let n = rng.gen_range(1..=1000);
            let r = rng.gen_range(0.02..0.4);
            let g = Rgg::generate(RggParams {
                n,
                r,
                d,
                seed: rng.gen(),
            })
            .unwrap();
            let center = Point::center(d);
            let mut bad = 0;
            for _ in 0..20 {
                let q = Point::new((0..d).map(|_| rng.gen()).collect());
                let radius = rng.gen_range(0.0..2.0 * r);
                let slow: Vec<VertexId> = g
                    .vertices()
                    .filter(|&v| g.position(v).dist(&q) <= radius)
                    .collect();
                bad += usize::from(g.neighbors_within(&q, radius) != slow);
                if let Ok(region) = make_region(&q, &center, &ScaleProfile::desk(), r) {
                    let mut slow: Vec<VertexId> = g
                        .vertices()
                        .filter(|&v| cone_contains(&region, &g.position(v)))
                        .collect();
                    slow.sort_by(|&a, &b| {
                        g.position(a)
                            .dist_sq(&q)
                            .total_cmp(&g.position(b).dist_sq(&q))
                            .then(a.cmp(&b))
                    });
                    bad += usize::from(g.vertices_in_cone(&region) != slow);
                }
            }
            bad
        })
        .sum();
    verdict(
        mismatches == 0,
        format!("{mismatches} mismatching queries over 100 instances"),
    )
}

fn csv_without_wallclock(rows: &[ExperimentRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).unwrap();
    String::from_utf8(buf)
        .unwrap()
        .lines()
        .map(|line| {
            line.rsplit_once(',')
                .map_or(line, |(head, _)| head)
                .to_string()
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn criterion_9() -> Verdict {
    let base = TrialSpec::continuous(
        2,
        0.1,
        ScaleProfile::paper(2),
        CopKind::Paper,
        RobberKind::Random,
    );
    let mut random_start = base.clone();
    random_start.start = StartKind::Random;
    let mut ok = true;
    for spec in [base, random_start] {
        let serial = csv_without_wallclock(&run_sweep(&spec, &[0.2, 0.1], 20, 7, Some(1)).unwrap());
        let parallel =
            csv_without_wallclock(&run_sweep(&spec, &[0.2, 0.1], 20, 7, Some(4)).unwrap());
        let again = csv_without_wallclock(&run_sweep(&spec, &[0.2, 0.1], 20, 7, None).unwrap());
        ok &= serial == parallel && serial == again;
    }
    let discrete = TrialSpec::discrete(2, 0.25, 20_000, ScaleProfile::desk());
    let a = csv_without_wallclock(&run_sweep(&discrete, &[0.25], 4, 7, Some(1)).unwrap());
    let b = csv_without_wallclock(&run_sweep(&discrete, &[0.25], 4, 7, Some(3)).unwrap());
    ok &= a == b;
    verdict(
        ok,
        "serial, parallel and repeated sweeps compared byte for byte",
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("continuous capture bound, d=2", criterion_1),
        ("robber survival floor and scaling fit", criterion_2),
        ("continuous capture bound, d=3", criterion_3),
        ("discrete end-to-end, desk profile", criterion_4),
        ("union bound algebra", criterion_5),
        ("occupancy statistics", criterion_6),
        ("cop-win oracle equivalence", criterion_7),
        ("spatial index against scans", criterion_8),
        ("sweep determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let v = check();
        failed += usize::from(!v.pass);
        println!(
            "{} criterion {} ({name}) [{:.1}s]: {}",
            if v.pass { "PASS" } else { "FAIL" },
            i + 1,
            started.elapsed().as_secs_f64(),
            v.detail
        );
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
