use proptest::prelude::*;
use rhythmic::geometry::{min_gap_t, IntersectionSpec, LaneId, VehicleParams};
use rhythmic::rhythm::{entry_schedule, solve_travel_times, SegmentLengths, SpeedBand};
use rhythmic::trajectory::{assign_curve, spacing_check, AdjustmentZone, SpeedCurve};
use rhythmic::Error;

fn setup() -> (AdjustmentZone, rhythmic::rhythm::EntrySchedule) {
    let v = VehicleParams::default();
    let spec = IntersectionSpec::symmetric(3, 2).unwrap();
    let t1 = min_gap_t(&v).unwrap();
    let timing = solve_travel_times(
        &spec,
        &v,
        &SegmentLengths::uniform(v.v_max * t1, 2),
        SpeedBand { lo: 3.0, hi: 10.0 },
    )
    .unwrap();
    (
        AdjustmentZone::new(100.0, v).unwrap(),
        entry_schedule(&spec, &timing),
    )
}

fn check_curve(zone: &AdjustmentZone, c: &SpeedCurve) {
    let v = &zone.vehicle;
    assert!((c.position(c.target) - zone.length).abs() < 1e-8);
    assert!((c.speed(c.target) - v.v_max).abs() < 1e-9);
    assert!(c.ts >= c.t0 - 1e-9 && c.te <= c.target + 1e-9);
    let n = 2000;
    let dt = (c.target - c.t0) / n as f64;
    for i in 0..=n {
        let t = c.t0 + i as f64 * dt;
        let s = c.speed(t);
        assert!(s <= v.v_max + 1e-12 && s >= zone.v_q - 1e-12);
        assert!(c.accel(t).abs() <= v.a_max + 1e-12);
    }
}

#[test]
fn platoon_keeps_spacing() {
    let (zone, schedule) = setup();
    let lane = LaneId::new(1, 1);
    let h = zone.vehicle.follow_headway();
    let mut prev: Option<SpeedCurve> = None;
    let mut t0 = 0.0;
    for _ in 0..12 {
        let c = assign_curve(&zone, t0, prev.as_ref(), &schedule, lane).unwrap();
        check_curve(&zone, &c);
        if let Some(p) = &prev {
            assert!(c.target - p.target >= schedule.period - 1e-9);
            let gap = spacing_check(p, &c, zone.vehicle.length, 1e-3);
            assert!(gap >= zone.vehicle.min_gap - 1e-6, "gap {gap}");
        }
        prev = Some(c);
        t0 += h;
    }
}

#[test]
fn queue_beyond_zone_errors() {
    let (zone, schedule) = setup();
    let lane = LaneId::new(1, 2);
    let h = zone.vehicle.follow_headway();
    let mut prev: Option<SpeedCurve> = None;
    let mut failed = false;
    for i in 0..60 {
        match assign_curve(&zone, i as f64 * h, prev.as_ref(), &schedule, lane) {
            Ok(c) => prev = Some(c),
            Err(Error::ZoneTooShort(_)) => {
                failed = true;
                break;
            }
            Err(e) => panic!("{e}"),
        }
    }
    assert!(failed);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn random_pairs_are_safe(
        lane in 1u8..=5,
        t0 in 0.0f64..50.0,
        extra in 0.0f64..3.0,
        lead_delay in 0.0f64..6.0,
    ) {
        let (zone, schedule) = setup();
        let lane = LaneId::new(2, lane);
        let lead = assign_curve(&zone, t0, None, &schedule, lane).unwrap();
        let lead = if lead_delay > 0.0 {
            let slot = schedule.next_slot(lane, lead.target + lead_delay).unwrap().1;
            SpeedCurve::new(&zone, t0, slot, slot).unwrap()
        } else {
            lead
        };
        let t0b = t0 + zone.vehicle.follow_headway() + extra;
        match assign_curve(&zone, t0b, Some(&lead), &schedule, lane) {
            Ok(f) => {
                check_curve(&zone, &f);
                let gap = spacing_check(&lead, &f, zone.vehicle.length, 1e-3);
                prop_assert!(gap >= zone.vehicle.min_gap - 1e-6);
            }
            Err(Error::ZoneTooShort(_)) => {}
            Err(e) => panic!("{e}"),
        }
    }
}
