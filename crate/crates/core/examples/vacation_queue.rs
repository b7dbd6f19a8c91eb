//! Queue of a single lane served once per rhythm period: steady-state
//! distribution, mean delay against the Poisson closed form, the bound for
//! bunched arrivals and a Monte-Carlo check.
//!
//! Run with `cargo run --release --example vacation_queue`.

use rhythmic::geometry::{min_gap_t, VehicleParams};
use rhythmic::queueing::{
    admissible_rate, average_delay, delay_bound, lee_vacation_wait, poisson_delay, simulate_chain,
    steady_state, ArrivalDistribution,
};

fn main() -> rhythmic::Result<()> {
    let t1 = min_gap_t(&VehicleParams::default())?;
    println!(
        "T1 = {t1:.4} s, admissible rate {:.4} veh/s ({:.0} veh/h)\n",
        admissible_rate(t1),
        admissible_rate(t1) * 3600.0
    );

    println!(
        "{:>6} {:>10} {:>10} {:>10} {:>10}",
        "load", "p0", "steady", "closed", "vacation"
    );
    for load in [0.1, 0.3, 0.5, 0.7, 0.9, 0.95] {
        let theta = load / (2.0 * t1);
        let a = ArrivalDistribution::poisson(theta, t1)?;
        let s = steady_state(&a, 64, 1e-12)?;
        let d = average_delay(&s, theta, t1);
        // M/D/1 with deterministic service 2 T1 plus the wait for the next slot.
        let lee = lee_vacation_wait(theta, 1.0 / (2.0 * t1), 2.0 * t1).ok();
        println!(
            "{load:>6.2} {:>10.4} {:>10.4} {:>10.4} {:>10}",
            s.p0(),
            d.mean_delay,
            poisson_delay(theta, t1)?,
            lee.map_or("-".into(), |w| format!("{w:.4}"))
        );
    }

    println!("\nat most two arrivals per period, load 0.8");
    println!(
        "{:>6} {:>6} {:>10} {:>10} {:>10}",
        "P1", "P2", "analytic", "sim", "bound"
    );
    for p2 in [0.0, 0.1, 0.2, 0.3, 0.4] {
        let p1: f64 = 0.8 - 2.0 * p2;
        let a = ArrivalDistribution::from_probs(vec![1.0 - p1 - p2, p1, p2], t1)?;
        let s = steady_state(&a, 64, 1e-12)?;
        let d = average_delay(&s, a.theta, t1);
        let mc = simulate_chain(&a, 1_000_000, 7);
        println!(
            "{p1:>6.2} {p2:>6.2} {:>10.4} {:>10.4} {:>10.4}",
            d.mean_delay,
            mc.mean_delay,
            delay_bound(a.theta, t1)?
        );
    }
    Ok(())
}
