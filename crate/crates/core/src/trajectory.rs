//! Speed curves in the adjustment zone upstream of the stop line.
//!
//! A vehicle enters the zone at `t0` with `v_max` and must reach the stop
//! line (distance `s`) at its scheduled slot, again at `v_max`. Any excess
//! time is absorbed by one speed dip: brake at `a_max`, optionally cruise at
//! the queue speed `v_q`, then accelerate back to `v_max`.

use crate::error::{Error, Result};
use crate::geometry::{min_gap_t, LaneId, VehicleParams};
use crate::rhythm::{EntrySchedule, EPS_TIME};

/// Absolute tolerance for distance comparisons, metres.
pub const EPS_DIST: f64 = 1e-6;

/// Speed of a vehicle in a slowly advancing queue, `(L + delta) / (2 T1)`.
pub fn cruise_speed_vq(v: &VehicleParams) -> Result<f64> {
    Ok((v.length + v.min_gap) / (2.0 * min_gap_t(v)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjustmentZone {
    pub length: f64,
    pub vehicle: VehicleParams,
    pub v_q: f64,
}

impl AdjustmentZone {
    /// The zone must hold a full brake from `v_max` to `v_q` and back.
    pub fn new(length: f64, vehicle: VehicleParams) -> Result<Self> {
        let v_q = cruise_speed_vq(&vehicle)?;
        let need = (vehicle.v_max.powi(2) - v_q.powi(2)) / vehicle.a_max;
        if !(length >= need) {
            return Err(Error::ZoneTooShort(format!(
                "{length} m cannot hold a full speed dip of {need:.3} m"
            )));
        }
        Ok(Self {
            length,
            vehicle,
            v_q,
        })
    }

    pub fn free_flow_time(&self) -> f64 {
        self.length / self.vehicle.v_max
    }

    /// Distance lost by a full dip that just reaches `v_q`.
    fn triangular_limit(&self) -> f64 {
        (self.vehicle.v_max - self.v_q).powi(2) / self.vehicle.a_max
    }

    /// Longest time a vehicle can spend in the zone.
    pub fn max_travel_time(&self) -> f64 {
        (self.length - self.triangular_limit()) / self.v_q
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveShape {
    /// No slowdown needed.
    Free,
    /// Brake and accelerate without reaching `v_q`.
    Triangular,
    /// Brake to `v_q`, cruise, accelerate.
    Plateau,
}

/// Dip duration `te - ts` that makes the vehicle arrive at `target`.
pub fn solve_delta_t(zone: &AdjustmentZone, t0: f64, target: f64) -> Result<(f64, CurveShape)> {
    let v = &zone.vehicle;
    let lost = v.v_max * (target - t0) - zone.length;
    if lost < -EPS_DIST {
        return Err(Error::TargetTooEarly {
            target,
            free_flow: t0 + zone.free_flow_time(),
        });
    }
    let (dt, shape) = if lost <= 0.0 {
        (0.0, CurveShape::Free)
    } else if lost <= zone.triangular_limit() {
        (2.0 * (lost / v.a_max).sqrt(), CurveShape::Triangular)
    } else {
        let dv = v.v_max - zone.v_q;
        (lost / dv + dv / v.a_max, CurveShape::Plateau)
    };
    if dt > target - t0 + EPS_TIME {
        return Err(Error::ZoneTooShort(format!(
            "arriving {:.3} s after entry needs a {dt:.3} s dip",
            target - t0
        )));
    }
    Ok((dt, shape))
}

/// A piecewise speed profile; positions are measured from the zone entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedCurve {
    pub t0: f64,
    pub ts: f64,
    pub te: f64,
    pub target: f64,
    pub shape: CurveShape,
    /// Lowest speed of the dip.
    pub dip: f64,
    pub v_max: f64,
    pub a_max: f64,
    pub zone_length: f64,
}

impl SpeedCurve {
    /// Curve entering at `t0`, arriving at `target` and ending its dip at `te`.
    pub fn new(zone: &AdjustmentZone, t0: f64, target: f64, te: f64) -> Result<Self> {
        let (dt, shape) = solve_delta_t(zone, t0, target)?;
        let v = &zone.vehicle;
        if te < t0 + dt - EPS_TIME || te > target + EPS_TIME {
            return Err(Error::ZoneTooShort(format!(
                "dip end {te:.6} s outside [{:.6}, {target:.6}]",
                t0 + dt
            )));
        }
        let dip = match shape {
            CurveShape::Free => v.v_max,
            CurveShape::Triangular => v.v_max - v.a_max * dt / 2.0,
            CurveShape::Plateau => zone.v_q,
        };
        Ok(Self {
            t0,
            ts: te - dt,
            te,
            target,
            shape,
            dip,
            v_max: v.v_max,
            a_max: v.a_max,
            zone_length: zone.length,
        })
    }

    pub fn delta_t(&self) -> f64 {
        self.te - self.ts
    }

    fn ramp(&self) -> f64 {
        (self.v_max - self.dip) / self.a_max
    }

    pub fn speed(&self, t: f64) -> f64 {
        if t <= self.ts || t >= self.te {
            return self.v_max;
        }
        let ramp = self.ramp();
        let u = t - self.ts;
        let r = self.te - t;
        if u < ramp {
            self.v_max - self.a_max * u
        } else if r < ramp {
            self.v_max - self.a_max * r
        } else {
            self.dip
        }
    }

    pub fn accel(&self, t: f64) -> f64 {
        if t <= self.ts || t >= self.te {
            return 0.0;
        }
        let ramp = self.ramp();
        if t - self.ts < ramp {
            -self.a_max
        } else if self.te - t < ramp {
            self.a_max
        } else {
            0.0
        }
    }

    /// Distance lost against constant `v_max` up to time `t`.
    fn lost(&self, t: f64) -> f64 {
        let ramp = self.ramp();
        let dv = self.v_max - self.dip;
        let total = dv * (self.delta_t() - ramp);
        if t <= self.ts {
            0.0
        } else if t >= self.te {
            total
        } else if t - self.ts < ramp {
            0.5 * self.a_max * (t - self.ts).powi(2)
        } else if self.te - t < ramp {
            total - 0.5 * self.a_max * (self.te - t).powi(2)
        } else {
            0.5 * self.a_max * ramp * ramp + dv * (t - self.ts - ramp)
        }
    }

    /// Position from the zone entry; extrapolated at `v_max` before `t0`.
    pub fn position(&self, t: f64) -> f64 {
        self.v_max * (t - self.t0) - self.lost(t)
    }

    fn breakpoints(&self) -> [f64; 6] {
        let ramp = self.ramp();
        [
            self.t0,
            self.ts,
            self.ts + ramp,
            self.te - ramp,
            self.te,
            self.target,
        ]
    }
}

/// Minimum bumper-to-bumper gap between a leader and its follower on the
/// same lane while both are in the zone, sampled every `step` seconds and at
/// every breakpoint.
pub fn spacing_check(leader: &SpeedCurve, follower: &SpeedCurve, length: f64, step: f64) -> f64 {
    let (start, end) = (follower.t0, leader.target);
    if end < start {
        return f64::INFINITY;
    }
    let gap = |t: f64| leader.position(t) - follower.position(t) - length;
    let n = ((end - start) / step).ceil() as usize;
    let sampled = (0..=n).map(|i| (start + i as f64 * step).min(end));
    let corners = leader
        .breakpoints()
        .into_iter()
        .chain(follower.breakpoints())
        .filter(|&t| t >= start && t <= end);
    sampled
        .chain(corners)
        .map(gap)
        .fold(f64::INFINITY, f64::min)
}

/// Sampling step used when checking spacing inside [`assign_curve`].
pub const SPACING_STEP: f64 = 1e-2;

/// Picks the earliest feasible slot for a vehicle entering the zone at `t0`
/// and builds its speed curve.
///
/// The dip first ends at the target. If that violates spacing with the
/// predecessor, the dip end moves to the predecessor's dip end (when this
/// dip is at least as long) or `(L + sqrt(2) delta + 2 w) / (v_max - v_q)`
/// after it. When the shifted dip end passes the target, the target moves to
/// a later slot.
pub fn assign_curve(
    zone: &AdjustmentZone,
    t0: f64,
    predecessor: Option<&SpeedCurve>,
    schedule: &EntrySchedule,
    lane: LaneId,
) -> Result<SpeedCurve> {
    let v = &zone.vehicle;
    let earliest = t0 + zone.free_flow_time();
    let after_pred = predecessor.map_or(f64::NEG_INFINITY, |p| p.target + EPS_TIME);
    let slot = |t: f64| {
        schedule
            .next_slot(lane, t)
            .map(|(_, s)| s)
            .ok_or_else(|| Error::InvalidLane(format!("{lane} has no schedule")))
    };
    let mut target = slot(earliest.max(after_pred) - EPS_TIME)?;
    if target <= after_pred {
        target += schedule.period;
    }
    let shift =
        (v.length + std::f64::consts::SQRT_2 * v.min_gap + 2.0 * v.width) / (v.v_max - zone.v_q);
    let safe = |c: &SpeedCurve| match predecessor {
        None => true,
        Some(p) => spacing_check(p, c, v.length, SPACING_STEP) >= v.min_gap - EPS_DIST,
    };
    for _ in 0..10_000 {
        let curve = SpeedCurve::new(zone, t0, target, target)?;
        if safe(&curve) {
            return Ok(curve);
        }
        let p = predecessor.expect("spacing only fails behind a predecessor");
        let te = if curve.delta_t() >= p.delta_t() {
            p.te
        } else {
            p.te + shift
        };
        let te = te.max(t0 + curve.delta_t());
        if te <= target + EPS_TIME {
            let shifted = SpeedCurve::new(zone, t0, target, te.min(target))?;
            if safe(&shifted) {
                return Ok(shifted);
            }
            target += schedule.period;
        } else {
            target = slot(te - EPS_TIME)?;
        }
    }
    Err(Error::ZoneTooShort(format!(
        "no safe slot found for entry at {t0} s"
    )))
}
