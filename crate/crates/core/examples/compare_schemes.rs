//! One hour of traffic under rhythmic control, a Webster signal plan and
//! first-come-first-served reservations, on identical arrivals.
//!
//! Run with `cargo run --release --example compare_schemes [alpha]`.

use rhythmic::geometry::{min_gap_t, IntersectionSpec, VehicleParams};
use rhythmic::rhythm::{entry_schedule, solve_travel_times, SegmentLengths, SpeedBand};
use rhythmic::simulator::{
    run_tsc, ArrivalPattern, Scenario, Scheme, SimContext, TscParams, BALANCED,
};

fn main() -> rhythmic::Result<()> {
    let alpha: f64 = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(1.0);
    let spec = IntersectionSpec::symmetric(3, 2)?;
    let vehicle = VehicleParams::default();
    let t1 = min_gap_t(&vehicle)?;
    let lengths = SegmentLengths::uniform(vehicle.v_max * t1, 2);
    let timing = solve_travel_times(&spec, &vehicle, &lengths, SpeedBand { lo: 3.0, hi: 10.0 })?;
    let ctx = SimContext {
        schedule: entry_schedule(&spec, &timing),
        spec,
        vehicle,
        timing,
        rc_systematic_delay: 1.0,
        tsc: TscParams::default(),
        fcfs_tick: 0.1,
    };
    let scenario = Scenario {
        name: "balanced".into(),
        demand: BALANCED,
        alpha,
        pattern: ArrivalPattern::Stationary,
        duration: 3600.0,
        seed: 11,
    };

    let (_, plan) = run_tsc(&scenario, &ctx.spec, &ctx.vehicle, &ctx.tsc)?;
    println!(
        "signal plan: cycle {:.1} s, greens {:?}{}",
        plan.cycle,
        plan.greens
            .iter()
            .map(|g| (g * 10.0).round() / 10.0)
            .collect::<Vec<_>>(),
        if plan.oversaturated {
            " (oversaturated)"
        } else {
            ""
        }
    );
    println!(
        "\n{:>5} {:>10} {:>9} {:>12} {:>9}",
        "", "vehicles", "delay s", "throughput", "residual"
    );
    for scheme in [Scheme::Rc, Scheme::Tsc, Scheme::Fcfs] {
        let r = ctx.run(scheme, &scenario)?;
        println!(
            "{:>5} {:>10} {:>9.2} {:>12} {:>9}",
            scheme.to_string(),
            r.records.len(),
            r.avg_delay,
            r.throughput,
            r.residual_queue
        );
    }
    Ok(())
}
