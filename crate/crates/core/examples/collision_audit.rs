//! Audits the solved rhythm at every conflict point, then breaks each timing
//! condition in turn and shows which conflict types start to collide.
//!
//! Run with `cargo run --example collision_audit [n_s] [n_l]`.

use rhythmic::geometry::{min_gap_t, IntersectionSpec, VehicleParams};
use rhythmic::rhythm::{audit, solve_travel_times, Condition, SegmentLengths, SpeedBand};

fn main() -> rhythmic::Result<()> {
    let args: Vec<u8> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let (n_s, n_l) = (*args.first().unwrap_or(&3), *args.get(1).unwrap_or(&2));
    let spec = IntersectionSpec::symmetric(n_s, n_l)?;
    let vehicle = VehicleParams::default();
    let t = min_gap_t(&vehicle)?;
    let lengths = SegmentLengths::uniform(vehicle.v_max * t, n_l);
    let timing = solve_travel_times(&spec, &vehicle, &lengths, SpeedBand { lo: 3.0, hi: 10.0 })?;

    let report = audit(&spec, &vehicle, &timing, 200)?;
    print!("{}", report.summary());

    for c in Condition::ALL {
        if !c.applies(n_l) {
            println!("\n{c:?}: constrains no conflict point with {n_l} left lanes");
            continue;
        }
        let mut m = timing.clone();
        match c {
            Condition::GapEqualsT => m.t1 = 0.9 * t,
            Condition::T4Odd => m.t4 += m.t1,
            Condition::ThroughMiddleOdd => m.t2 += m.t1 / 2.0,
            Condition::LeftMiddleOdd => m.t5.iter_mut().for_each(|x| *x += timing.t1 / 2.0),
            Condition::LeftEvenSpread => m.t5[0] += m.t1,
        }
        let r = audit(&spec, &vehicle, &m, 200)?;
        let mut types: Vec<String> = r.failures().map(|p| p.point.ctype.to_string()).collect();
        types.dedup();
        println!(
            "\nbroken {c:?}: audit {}, {} failing points, types {}, min gap {:.4} s",
            if r.pass() { "PASS" } else { "FAIL" },
            r.failures().count(),
            types.join(","),
            r.min_gap()
        );
    }
    Ok(())
}
