//! Closest approach of two perpendicular vehicles crossing the same point,
//! as a function of the time gap between them.
//!
//! Run with `cargo run --example geometric_gap`.

use rhythmic::geometry::{min_gap_t, VehicleParams};
use rhythmic::rhythm::geometric_oracle;

fn main() -> rhythmic::Result<()> {
    let v = VehicleParams::default();
    let t1 = min_gap_t(&v)?;
    println!(
        "minimum gap T1 = {t1:.4} s for a {} m safety distance",
        v.min_gap
    );
    println!("{:>8} {:>10} {:>12}", "gap/T1", "gap s", "distance m");
    for k in [0.0, 0.5, 0.8, 0.9, 0.95, 1.0, 1.1, 1.5, 2.0, 3.0] {
        let d = geometric_oracle(&v, k * t1, 100_001);
        let mark = if d < v.min_gap - 1e-6 { "  unsafe" } else { "" };
        println!("{k:>8.2} {:>10.4} {d:>12.4}{mark}", k * t1);
    }
    Ok(())
}
