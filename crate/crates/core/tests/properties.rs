use proptest::prelude::*;

use rgg_pursuit::game::{play, Cube, GameConfig, Mode, Outcome};
use rgg_pursuit::geometry::{
    candidate_point, cone_contains, make_region, perpendicular_pair, Point, UnitVector,
};
use rgg_pursuit::profile::ScaleProfile;
use rgg_pursuit::rgg::{Rgg, RggParams, VertexId};
use rgg_pursuit::seed::rng_from_seed;
use rgg_pursuit::strategy::continuous::{
    cop_step, robber_step, CopDecision, PaperCop, RandomRobber, RobberStart,
};
use rgg_pursuit::verification::{
    copwin_bruteforce, empty_probability_bound, is_dismantlable, random_connected_rgg,
};

fn point(d: usize) -> impl Strategy<Value = Point> {
    prop::collection::vec(0.0..=1.0f64, d).prop_map(Point::new)
}

/// Distance of `p` from the line through `a` with direction `a → b`.
fn off_line(a: &Point, b: &Point, p: &Point) -> f64 {
    let u = UnitVector::between(a, b).unwrap();
    let v = p.sub(a);
    let t = u.dot(&v);
    v.iter()
        .zip(u.coords())
        .map(|(x, e)| (x - t * e).powi(2))
        .sum::<f64>()
        .sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 512, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn region_contains_its_apex(x in point(2), y in point(3), r in 0.02..0.4f64) {
        for (x, profile) in [(x, ScaleProfile::desk()), (y, ScaleProfile::paper(3))] {
            let center = Point::center(x.dim());
            if let Ok(region) = make_region(&x, &center, &profile, r) {
                prop_assert!(cone_contains(&region, &x));
            }
        }
    }

    #[test]
    fn candidate_point_keeps_level_and_lies_on_ray(c in point(3), rp in point(3)) {
        let o = Point::center(3);
        if let Ok(cp) = candidate_point(&o, &c, &rp) {
            let u = UnitVector::between(&o, &c).unwrap();
            prop_assert!((u.dot(&cp.sub(&o)) - u.dot(&c.sub(&o))).abs() <= 1e-9);
            let s = cp.dist(&o) / rp.dist(&o);
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&s));
            prop_assert!(off_line(&o, &rp, &cp) <= 1e-9);
        }
    }

    #[test]
    fn cop_shift_is_at_most_robber_step(
        r in point(2), lambda in 0.05..1.0f64, ahead in 0.0..0.5f64, side in -0.5..0.5f64,
    ) {
        let o = Point::center(2);
        prop_assume!(r.dist(&o) > 1e-3);
        let c = o.offset(&r.sub(&o), lambda);
        let u = UnitVector::between(&o, &c).unwrap();
        let e = u.coords();
        let rp = c.offset(e, ahead).offset(&[-e[1], e[0]], side);
        let cp = candidate_point(&o, &c, &rp).unwrap();
        prop_assert!(c.dist(&cp) <= r.dist(&rp) * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn perpendicular_pair_is_orthogonal_and_opposite(d in 2usize..=8, seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = rng_from_seed(seed);
        let dir = UnitVector::new((0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let (p, q) = perpendicular_pair(&dir).unwrap();
        prop_assert_eq!(p.negated(), q.clone());
        prop_assert!(dir.dot(p.coords()).abs() < 1e-12);
        let norm: f64 = p.coords().iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() < 1e-12);
    }

    /// With the cop on segment `O-R`, both perpendicular moves gain exactly
    /// `r²`, so the flip at the wall cannot raise the gain.
    #[test]
    fn robber_gain_is_at_most_r_squared(rob in point(2), lambda in 0.0..0.99f64, r in 0.01..0.3f64) {
        let o = Point::center(2);
        prop_assume!(rob.dist(&o) > 1e-6);
        let c = o.offset(&rob.sub(&o), lambda);
        if let Ok(next) = robber_step(&o, &c, &rob, r) {
            prop_assert!(next.dist_sq(&o) - rob.dist_sq(&o) <= r * r * (1.0 + 1e-9));
            prop_assert!((next.dist(&rob) - r).abs() <= 1e-12);
        }
    }

    /// The inductive step: from a cop on segment `O-R` at separation at
    /// least `k₁r²`, any robber move of length at most `r` is answered by a
    /// capture or a move meeting every guarantee.
    #[test]
    fn cop_step_guarantees(
        d in 2usize..=3,
        seed in any::<u64>(),
        r in 0.01..0.3f64,
        lambda in 0.0..1.0f64,
        step in 0.0..=1.0f64,
    ) {
        use rand::Rng;
        let mut rng = rng_from_seed(seed);
        let profile = ScaleProfile::paper(d);
        let o = Point::center(d);
        let rob = Point::new((0..d).map(|_| rng.gen()).collect());
        let len = rob.dist(&o);
        let sep = profile.separation(r);
        prop_assume!(len > sep);
        let c = o.offset(UnitVector::between(&o, &rob).unwrap().coords(), lambda * (len - sep));
        let dir = UnitVector::new((0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let rp = rob.offset(dir.coords(), step * r);
        prop_assume!(rp.dist(&o) > 0.0);
        match cop_step(&o, &c, &rp, r, &profile) {
            Ok(CopDecision::Capture) => prop_assert!(c.dist(&rp) <= r),
            Ok(CopDecision::MoveTo { target, gain, .. }) => {
                prop_assert!(c.dist(&target) <= r * (1.0 + 1e-9));
                prop_assert!(target.dist(&rp) >= sep * (1.0 - 1e-9));
                prop_assert!(gain >= profile.min_gain(r) * (1.0 - 1e-9));
                prop_assert!(off_line(&o, &rp, &target) <= 1e-9);
                prop_assert!(target.dist(&o) <= rp.dist(&o));
            }
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn empty_bound_is_monotone(a in 0.0..0.5f64, b in 0.0..0.5f64, n in 0u64..100_000, m in 0u64..100_000) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(empty_probability_bound(hi, n) <= empty_probability_bound(lo, n));
        let (few, many) = if n <= m { (n, m) } else { (m, n) };
        prop_assert!(empty_probability_bound(a, many) <= empty_probability_bound(a, few));
    }

    #[test]
    fn grid_queries_match_scans(seed in any::<u64>(), n in 1usize..400, r in 0.02..0.5f64, d in 1usize..=3, q in point(3), radius in 0.0..0.6f64) {
        let g = Rgg::generate(RggParams { n, r, d, seed }).unwrap();
        let center = Point::new(q.coords()[..d].to_vec());
        let fast = g.neighbors_within(&center, radius);
        let slow: Vec<VertexId> = g.vertices().filter(|&v| g.position(v).dist(&center) <= radius).collect();
        prop_assert_eq!(fast, slow);
        if d >= 2 {
            if let Ok(region) = make_region(&center, &Point::center(d), &ScaleProfile::desk(), r) {
                let mut slow: Vec<VertexId> = g.vertices().filter(|&v| cone_contains(&region, &g.position(v))).collect();
                slow.sort_by(|&a, &b| {
                    g.position(a).dist_sq(&center).total_cmp(&g.position(b).dist_sq(&center)).then(a.cmp(&b))
                });
                prop_assert_eq!(g.vertices_in_cone(&region), slow);
            }
        }
    }

    #[test]
    fn generation_is_deterministic(seed in any::<u64>(), n in 1usize..200) {
        let p = RggParams { n, r: 0.1, d: 2, seed };
        let a = Rgg::generate(p).unwrap();
        let b = Rgg::generate(p).unwrap();
        for v in a.vertices() {
            prop_assert_eq!(a.coords(v), b.coords(v));
        }
    }

    #[test]
    fn random_robber_traces_are_well_formed(seed in any::<u64>(), r in 0.05..0.2f64) {
        let profile = ScaleProfile::paper(2);
        let config = GameConfig::with_bound(2, r, profile.clone(), Mode::Continuous, 1);
        let mut cop = PaperCop::new(2, r, profile);
        let start = RobberStart::Random(rng_from_seed(seed));
        let mut robber = RandomRobber::new(2, r, start, rng_from_seed(seed ^ 1));
        let trace = play(&config, &mut cop, &mut robber, &Cube { d: 2 });
        prop_assert!(trace.steps_within(r));
        match &trace.outcome {
            Outcome::Captured { .. } => {
                let last = trace.rounds.last().unwrap();
                prop_assert_eq!(&last.cop, &last.robber);
            }
            Outcome::Fault { reason, .. } => prop_assert!(!reason.is_empty()),
            Outcome::Escaped { .. } => prop_assert!(false, "escaped within the bound"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn dismantlable_iff_copwin(seed in any::<u64>(), max_n in 1usize..=12) {
        let g = random_connected_rgg(&mut rng_from_seed(seed), max_n);
        prop_assert_eq!(is_dismantlable(&g), copwin_bruteforce(&g).unwrap());
    }
}
