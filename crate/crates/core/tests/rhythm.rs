use proptest::prelude::*;
use rhythmic::geometry::{min_gap_t, IntersectionSpec, LaneId, LegLanes, VehicleParams};
use rhythmic::rhythm::{
    audit, entry_schedule, geometric_oracle, row_profile, solve_travel_times, Condition,
    RhythmTiming, SegmentLengths, SpeedBand,
};

fn toy_timing() -> RhythmTiming {
    RhythmTiming {
        t1: 0.625,
        t2: 1.214,
        t3: 0.697,
        t4: 0.625,
        t5: vec![0.625],
    }
}

fn default_timing(spec: &IntersectionSpec) -> RhythmTiming {
    let v = VehicleParams::default();
    let t1 = min_gap_t(&v).unwrap();
    let lengths = SegmentLengths::uniform(v.v_max * t1, spec.n_l());
    solve_travel_times(spec, &v, &lengths, SpeedBand { lo: 3.0, hi: 10.0 }).unwrap()
}

#[test]
fn toy_schedule_offsets() {
    let spec = IntersectionSpec::symmetric(2, 1).unwrap();
    let s = entry_schedule(&spec, &toy_timing());
    assert!((s.period - 1.25).abs() < 1e-12);
    let off = |lane| s.lane(LaneId::new(1, lane)).unwrap().offset;
    assert!((off(1) - 0.625).abs() < 1e-12);
    assert!(off(2).abs() < 1e-12);
    // 0.625 + 2 T4 + T2 + T3 reduced modulo 1.25.
    assert!((off(3) - 0.036).abs() < 1e-9);
    let entries = s.entries(LaneId::new(1, 3), 5.0);
    assert!(entries.iter().any(|&t| (t - 2.536).abs() < 1e-9));
}

#[test]
fn toy_row_profile_blank() {
    let spec = IntersectionSpec::symmetric(2, 1).unwrap();
    let s = entry_schedule(&spec, &toy_timing());
    let lane = LaneId::new(1, 1);
    let p = row_profile(&s, 10.0, 0.125, s.t1).unwrap();
    let bars = &p.intervals.iter().find(|(l, _)| *l == lane).unwrap().1;
    for w in bars.windows(2) {
        assert!((w[1].0 - w[0].1 - 0.625).abs() < 1e-9);
    }
    let v = VehicleParams::default();
    let hold = v.length / v.v_max;
    let p = row_profile(&s, 10.0, 0.125, hold).unwrap();
    let bars = &p.intervals.iter().find(|(l, _)| *l == lane).unwrap().1;
    assert!((bars[1].0 - bars[0].1 - (2.0 * s.t1 - hold)).abs() < 1e-9);
    assert!(row_profile(&s, 10.0, 0.2, hold).is_err());
}

#[test]
fn default_timing_is_clean() {
    let spec = IntersectionSpec::symmetric(3, 2).unwrap();
    let t = default_timing(&spec);
    let t1 = t.t1;
    for x in [t.t2, t.t3, t.t4, t.t5[0], t.t5[1]] {
        assert!((x - t1).abs() < 1e-12);
    }
}

#[test]
fn audit_passes_symmetric() {
    let spec = IntersectionSpec::symmetric(3, 2).unwrap();
    let t = default_timing(&spec);
    let r = audit(&spec, &VehicleParams::default(), &t, 200).unwrap();
    assert_eq!(r.points.len(), 100);
    assert!(r.pass(), "{}", r.summary());
    assert!(r.routes_agree());
    assert!(r.points.iter().all(|p| p.odd_multiple));
    assert!((r.min_gap() - t.t1).abs() < 1e-9);
}

#[test]
fn audit_passes_asymmetric() {
    let big = LegLanes {
        through: 3,
        left: 2,
    };
    let small = LegLanes {
        through: 1,
        left: 1,
    };
    let spec = IntersectionSpec::from_legs([big, small, big, small]).unwrap();
    let t = default_timing(&spec);
    let r = audit(&spec, &VehicleParams::default(), &t, 50).unwrap();
    assert!(r.pass());
    assert!(r.points.len() < 100);
}

#[test]
fn even_t4_fails_on_left_pairs() {
    let spec = IntersectionSpec::symmetric(3, 2).unwrap();
    let mut t = default_timing(&spec);
    t.t4 = 2.0 * t.t1;
    let r = audit(&spec, &VehicleParams::default(), &t, 20).unwrap();
    assert!(!r.pass());
    assert_eq!(r.violations, vec![Condition::T4Odd]);
    assert!(r
        .failures()
        .all(|p| p.point.ctype == rhythmic::geometry::ConflictType::D));
    assert!(r.failures().all(|p| p.min_gap() < 1e-9));
}

#[test]
fn short_period_fails_everywhere() {
    let spec = IntersectionSpec::symmetric(2, 1).unwrap();
    let mut t = default_timing(&spec);
    let scale = 0.9;
    t.t1 *= scale;
    let r = audit(&spec, &VehicleParams::default(), &t, 10).unwrap();
    assert!(r.failures().count() == r.points.len());
}

#[test]
fn window_too_small() {
    let spec = IntersectionSpec::symmetric(1, 0).unwrap();
    let t = default_timing(&spec);
    assert!(audit(&spec, &VehicleParams::default(), &t, 1).is_err());
}

#[test]
fn oracle_collision_and_threshold() {
    let v = VehicleParams::default();
    let t1 = min_gap_t(&v).unwrap();
    assert!(geometric_oracle(&v, 0.0, 20_000) < v.min_gap);
    assert!(geometric_oracle(&v, 0.9 * t1, 20_000) < v.min_gap);
    let d = geometric_oracle(&v, t1, 200_000);
    assert!((d - v.min_gap).abs() < 1e-4, "{d}");
    let d2 = geometric_oracle(&v, 2.0 * t1, 200_000);
    let expect = (v.length + v.width) / 2f64.sqrt() + 2.0 * v.min_gap;
    assert!((d2 - expect).abs() < 1e-4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solved_timing_satisfies_conditions_and_audits(
        n_s in 1u8..=4,
        n_l in 0u8..=3,
        cat2 in 2.0f64..20.0,
        cat3 in 2.0f64..20.0,
        cat4 in 2.0f64..20.0,
        cat5 in proptest::collection::vec(2.0f64..20.0, 3),
    ) {
        let spec = IntersectionSpec::symmetric(n_s, n_l).unwrap();
        let v = VehicleParams::default();
        let lengths = SegmentLengths { cat2, cat3, cat4, cat5 };
        let t = solve_travel_times(&spec, &v, &lengths, SpeedBand { lo: 1.0, hi: 10.0 }).unwrap();
        prop_assert!(t.violations(min_gap_t(&v).unwrap(), n_l).is_empty());
        let r = audit(&spec, &v, &t, 4).unwrap();
        prop_assert!(r.pass());
        prop_assert!(r.routes_agree());
        prop_assert!(r.points.iter().all(|p| p.odd_multiple));
    }

    #[test]
    fn passing_gaps_are_geometrically_safe(m in 0u32..4) {
        let v = VehicleParams::default();
        let t1 = min_gap_t(&v).unwrap();
        let gap = (2 * m + 1) as f64 * t1;
        prop_assert!(geometric_oracle(&v, gap, 100_000) >= v.min_gap - 1e-4);
    }
}
