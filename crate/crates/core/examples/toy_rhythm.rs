//! Entry rhythm of a two-through, one-left intersection with `T1 = 0.625 s`,
//! printed as lane offsets and a text right-of-way chart.
//!
//! Run with `cargo run --example toy_rhythm`.

use rhythmic::geometry::{IntersectionSpec, LaneId};
use rhythmic::rhythm::{entry_schedule, row_profile, RhythmTiming};

fn main() -> rhythmic::Result<()> {
    let spec = IntersectionSpec::symmetric(2, 1)?;
    let timing = RhythmTiming {
        t1: 0.625,
        t2: 1.214,
        t3: 0.697,
        t4: 0.625,
        t5: vec![0.625],
    };
    let schedule = entry_schedule(&spec, &timing);
    println!("period {:.3} s", schedule.period);
    for l in &schedule.lanes {
        let first: Vec<String> = schedule
            .entries(l.lane, 5.0)
            .iter()
            .map(|t| format!("{t:.3}"))
            .collect();
        println!(
            "lane {} {:<8} offset {:.3} s, entries {}",
            l.lane,
            format!("{:?}", l.movement),
            l.offset,
            first.join(" ")
        );
    }

    let profile = row_profile(&schedule, 5.0, 0.125, timing.t1)?;
    println!("\nright of way on leg 1 (# = held), 0.125 s per column");
    for (i, (lane, _)) in profile.intervals.iter().enumerate() {
        if lane.leg != 1 {
            continue;
        }
        let bar: String = profile.occupied[i]
            .iter()
            .map(|&o| if o { '#' } else { '.' })
            .collect();
        println!("{lane}  {bar}");
    }
    let lane = LaneId::new(1, 3);
    println!(
        "\nleft lane {lane} enters at {:.3} s in the third period",
        schedule
            .next_slot(lane, 2.5)
            .map(|(_, t)| t)
            .unwrap_or(f64::NAN)
    );
    Ok(())
}
