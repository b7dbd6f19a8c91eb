//! Speed curves that shift a platoon entering the adjustment zone onto its
//! lane's entry slots, with the spacing to each leader.
//!
//! Run with `cargo run --example speed_curves`.

use rhythmic::geometry::{min_gap_t, IntersectionSpec, LaneId, VehicleParams};
use rhythmic::rhythm::{entry_schedule, solve_travel_times, SegmentLengths, SpeedBand};
use rhythmic::trajectory::{assign_curve, spacing_check, AdjustmentZone, SpeedCurve};

fn main() -> rhythmic::Result<()> {
    let vehicle = VehicleParams::default();
    let spec = IntersectionSpec::symmetric(3, 2)?;
    let t1 = min_gap_t(&vehicle)?;
    let lengths = SegmentLengths::uniform(vehicle.v_max * t1, 2);
    let timing = solve_travel_times(&spec, &vehicle, &lengths, SpeedBand { lo: 3.0, hi: 10.0 })?;
    let schedule = entry_schedule(&spec, &timing);
    let zone = AdjustmentZone::new(100.0, vehicle)?;
    println!(
        "zone {} m, queue speed {:.3} m/s, longest stay {:.2} s",
        zone.length,
        zone.v_q,
        zone.max_travel_time()
    );

    let lane = LaneId::new(1, 2);
    let entries = [0.0, 0.6, 1.2, 1.8, 2.4, 4.0, 9.0];
    let mut prev: Option<SpeedCurve> = None;
    println!(
        "\n{:>6} {:>8} {:>8} {:>8} {:>10} {:>8} {:>8}",
        "t0", "target", "ts", "te", "shape", "v_min", "spacing"
    );
    for t0 in entries {
        let c = assign_curve(&zone, t0, prev.as_ref(), &schedule, lane)?;
        let spacing = prev
            .as_ref()
            .map(|p| spacing_check(p, &c, vehicle.length, 1e-3))
            .map_or("-".into(), |g| format!("{g:.3}"));
        println!(
            "{t0:>6.2} {:>8.3} {:>8.3} {:>8.3} {:>10} {:>8.3} {:>8}",
            c.target,
            c.ts,
            c.te,
            format!("{:?}", c.shape),
            c.dip,
            spacing
        );
        prev = Some(c);
    }

    let c = prev.expect("at least one vehicle");
    println!("\nlast vehicle, every second:");
    let mut t = c.t0;
    while t <= c.target {
        println!(
            "  t {t:>6.2}  x {:>7.2} m  v {:>5.2} m/s",
            c.position(t),
            c.speed(t)
        );
        t += 1.0;
    }
    Ok(())
}
