//! Average delay of RC, TSC and FCFS as demand scales up.
//!
//! Run with `cargo run --release --example demand_sweep [balanced|imbalanced|heavy] [bursty]`.

use rhythmic::geometry::{min_gap_t, IntersectionSpec, VehicleParams};
use rhythmic::rhythm::{entry_schedule, solve_travel_times, SegmentLengths, SpeedBand};
use rhythmic::simulator::{
    sweep, ArrivalPattern, ScenarioTemplate, Scheme, SimContext, SweepGrid, TscParams, BALANCED,
    HEAVY_APPROACH, IMBALANCED,
};

fn main() -> rhythmic::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (name, demand) = match args.first().map(String::as_str) {
        Some("imbalanced") => ("imbalanced", IMBALANCED),
        Some("heavy") => ("heavy", HEAVY_APPROACH),
        _ => ("balanced", BALANCED),
    };
    let pattern = if args.iter().any(|a| a == "bursty") {
        ArrivalPattern::DEFAULT_BURSTY
    } else {
        ArrivalPattern::Stationary
    };

    let spec = IntersectionSpec::symmetric(3, 2)?;
    let vehicle = VehicleParams::default();
    let t1 = min_gap_t(&vehicle)?;
    let lengths = SegmentLengths::uniform(vehicle.v_max * t1, spec.n_l());
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
    let alphas: Vec<f64> = (3..=18).map(|i| i as f64 / 10.0).collect();
    let grid = SweepGrid {
        schemes: vec![Scheme::Rc, Scheme::Tsc, Scheme::Fcfs],
        scenarios: vec![ScenarioTemplate {
            name: name.into(),
            demand,
            pattern,
        }],
        alphas: alphas.clone(),
        replications: 3,
        duration: 3600.0,
        seed: 2024,
    };
    let rows = sweep(&ctx, &grid)?;

    println!("{name} demand, {pattern:?}");
    println!("{:>6} {:>10} {:>10} {:>10}", "alpha", "rc", "tsc", "fcfs");
    for &alpha in &alphas {
        let mean = |s: Scheme| {
            let v: Vec<f64> = rows
                .iter()
                .filter(|r| r.scheme == s && r.alpha == alpha)
                .map(|r| r.avg_delay)
                .collect();
            v.iter().sum::<f64>() / v.len() as f64
        };
        println!(
            "{alpha:>6.1} {:>10.2} {:>10.2} {:>10.2}",
            mean(Scheme::Rc),
            mean(Scheme::Tsc),
            mean(Scheme::Fcfs)
        );
    }
    Ok(())
}
