//! An intersection whose legs differ, padded with virtual lanes so one rhythm
//! covers it, plus a closed lane whose demand moves to its neighbours.
//!
//! Run with `cargo run --release --example asymmetric_intersection`.

use rhythmic::geometry::{min_gap_t, IntersectionSpec, LaneId, LegLanes, VehicleParams};
use rhythmic::rhythm::{audit, entry_schedule, solve_travel_times, SegmentLengths, SpeedBand};
use rhythmic::simulator::{lane_rates, run_rc, ArrivalPattern, Scenario, BALANCED};

fn main() -> rhythmic::Result<()> {
    let legs = [
        LegLanes {
            through: 3,
            left: 2,
        },
        LegLanes {
            through: 2,
            left: 1,
        },
        LegLanes {
            through: 3,
            left: 1,
        },
        LegLanes {
            through: 1,
            left: 0,
        },
    ];
    let mut spec = IntersectionSpec::from_legs(legs)?;
    spec.disable_lane(LaneId::new(1, 2))?;
    let vehicle = VehicleParams::default();
    let t1 = min_gap_t(&vehicle)?;
    let lengths = SegmentLengths::uniform(vehicle.v_max * t1, spec.n_l());
    let timing = solve_travel_times(&spec, &vehicle, &lengths, SpeedBand { lo: 3.0, hi: 10.0 })?;
    let schedule = entry_schedule(&spec, &timing);

    println!("lane   state     offset");
    for l in &schedule.lanes {
        let state = if spec.is_virtual(l.lane) {
            "virtual"
        } else if !spec.is_active(l.lane) {
            "disabled"
        } else {
            "active"
        };
        println!("{:<6} {state:<9} {:.3}", l.lane.to_string(), l.offset);
    }

    let report = audit(&spec, &vehicle, &timing, 200)?;
    println!(
        "\naudit {} over {} active conflict points, min gap {:.4} s",
        if report.pass() { "PASS" } else { "FAIL" },
        report.points.iter().filter(|p| p.point.active).count(),
        report.min_gap()
    );

    let scenario = Scenario {
        name: "balanced".into(),
        demand: BALANCED,
        alpha: 1.0,
        pattern: ArrivalPattern::Stationary,
        duration: 3600.0,
        seed: 3,
    };
    println!("\nleg 1 lane rates (veh/h):");
    for (lane, rate) in lane_rates(&spec, &scenario)? {
        if lane.leg == 1 {
            println!("  {lane}: {:.0}", rate * 3600.0);
        }
    }
    let r = run_rc(&scenario, &spec, &vehicle, &schedule, 1.0)?;
    println!(
        "\nRC: {} vehicles, mean delay {:.2} s",
        r.records.len(),
        r.avg_delay
    );
    Ok(())
}
