//! Travel-time selection, periodic entry schedules and the collision audit.

use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    conflict_points, lane_path, min_gap_t, ConflictPoint, ConflictType, IntersectionSpec, LaneId,
    Movement, SegmentClass, VehicleParams,
};

/// Absolute tolerance for time comparisons, seconds.
pub const EPS_TIME: f64 = 1e-9;

/// Admissible segment speeds, m/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeedBand {
    pub lo: f64,
    pub hi: f64,
}

/// Lengths of the non-`Cat1` segment categories, metres.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentLengths {
    pub cat2: f64,
    pub cat3: f64,
    pub cat4: f64,
    /// One entry per left lane, outermost first.
    pub cat5: Vec<f64>,
}

impl SegmentLengths {
    pub fn uniform(length: f64, n_l: u8) -> Self {
        Self {
            cat2: length,
            cat3: length,
            cat4: length,
            cat5: vec![length; n_l as usize],
        }
    }
}

/// Segment travel times. `t5[j - 1]` belongs to left lane `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhythmTiming {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub t4: f64,
    pub t5: Vec<f64>,
}

/// One of the five timing conditions that guarantee collision freedom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    /// `T1` equals the minimum gap `T`.
    GapEqualsT,
    /// `T4` is an odd multiple of `T1`.
    T4Odd,
    /// `2 T2 + T3` is an odd multiple of `T1`.
    ThroughMiddleOdd,
    /// `2 T5 + T3` is an odd multiple of `T1` for every left lane.
    LeftMiddleOdd,
    /// `T5` values differ pairwise by even multiples of `T1`.
    LeftEvenSpread,
}

impl Condition {
    pub const ALL: [Condition; 5] = [
        Condition::GapEqualsT,
        Condition::T4Odd,
        Condition::ThroughMiddleOdd,
        Condition::LeftMiddleOdd,
        Condition::LeftEvenSpread,
    ];

    /// Whether the condition constrains any conflict point of the layout.
    pub fn applies(self, n_l: u8) -> bool {
        match self {
            Condition::GapEqualsT => true,
            Condition::ThroughMiddleOdd | Condition::LeftMiddleOdd => n_l >= 1,
            Condition::T4Odd | Condition::LeftEvenSpread => n_l >= 2,
        }
    }
}

fn nearest_multiple(x: f64, t1: f64) -> (i64, f64) {
    let m = (x / t1).round();
    (m as i64, (x - m * t1).abs())
}

fn is_odd_multiple(x: f64, t1: f64) -> bool {
    let q = x / t1;
    let odd = 2.0 * ((q - 1.0) / 2.0).round() + 1.0;
    (x - odd * t1).abs() <= EPS_TIME
}

fn is_even_multiple(x: f64, t1: f64) -> bool {
    let (m, err) = nearest_multiple(x, t1);
    err <= EPS_TIME && m % 2 == 0
}

impl RhythmTiming {
    /// Travel time of a segment; `left` is the left-lane index for `Cat5`.
    pub fn segment_time(&self, seg: SegmentClass, left: Option<u8>) -> f64 {
        match seg {
            SegmentClass::Cat1 => self.t1,
            SegmentClass::Cat2 => self.t2,
            SegmentClass::Cat3 => self.t3,
            SegmentClass::Cat4 => self.t4,
            SegmentClass::Cat5 => {
                let j = left.expect("Cat5 segments lie on left paths") as usize;
                self.t5[j - 1]
            }
        }
    }

    /// Conditions that fail by direct substitution, given the required gap.
    pub fn violations(&self, t_required: f64, n_l: u8) -> Vec<Condition> {
        let t1 = self.t1;
        let mut out = Vec::new();
        if (t1 - t_required).abs() > EPS_TIME {
            out.push(Condition::GapEqualsT);
        }
        if n_l == 0 {
            return out;
        }
        if !is_odd_multiple(self.t4, t1) {
            out.push(Condition::T4Odd);
        }
        if !is_odd_multiple(2.0 * self.t2 + self.t3, t1) {
            out.push(Condition::ThroughMiddleOdd);
        }
        let lefts = &self.t5[..n_l as usize];
        if lefts
            .iter()
            .any(|&t5| !is_odd_multiple(2.0 * t5 + self.t3, t1))
        {
            out.push(Condition::LeftMiddleOdd);
        }
        if lefts.iter().any(|&t5| !is_even_multiple(t5 - lefts[0], t1)) {
            out.push(Condition::LeftEvenSpread);
        }
        out
    }
}

fn fmt_speed(v: Option<f64>) -> String {
    v.map_or_else(|| "none".to_string(), |v| format!("{v:.3} m/s"))
}

/// Smallest odd `m` (optionally restricted to `m % 4 == residue`) whose
/// segment time `time_of(m)` gives a speed inside the band.
fn pick_odd(
    category: &str,
    length: f64,
    band: SpeedBand,
    time_of: impl Fn(i64) -> f64,
    residue: Option<i64>,
) -> Result<i64> {
    let tol = 1e-12 * band.hi;
    let mut above = None;
    let below;
    let mut m = 1i64;
    loop {
        let t = time_of(m);
        if t > 0.0 {
            let v = length / t;
            if v > band.hi + tol {
                above = Some(v);
            } else if v < band.lo - tol {
                below = Some(v);
                break;
            } else if residue.is_none_or(|r| m % 4 == r) {
                return Ok(m);
            }
        }
        m += 2;
    }
    Err(Error::InfeasibleBand {
        category: category.to_string(),
        length,
        lo: band.lo,
        hi: band.hi,
        below: fmt_speed(below),
        above: fmt_speed(above),
    })
}

/// Chooses segment travel times for the given minimum gap `t1`.
///
/// `T3` is the fastest admissible crossing of its segment. `T2`, `T4` and
/// each `T5` then take the smallest odd multiple of `T1` (through the
/// relevant condition) whose implied speed lies in the band. All `T5` share
/// one residue class so their pairwise differences are even multiples.
pub fn solve_travel_times_with_t1(
    t1: f64,
    n_l: u8,
    lengths: &SegmentLengths,
    band: SpeedBand,
) -> Result<RhythmTiming> {
    if !(band.lo > 0.0 && band.hi >= band.lo && band.hi.is_finite()) {
        return Err(Error::InfeasibleBand {
            category: "band".into(),
            length: 0.0,
            lo: band.lo,
            hi: band.hi,
            below: "none".into(),
            above: "none".into(),
        });
    }
    if lengths.cat5.len() < n_l as usize {
        return Err(Error::InvalidLaneCount(format!(
            "{} Cat5 lengths for {n_l} left lanes",
            lengths.cat5.len()
        )));
    }
    let mut all = [lengths.cat2, lengths.cat3, lengths.cat4]
        .into_iter()
        .chain(lengths.cat5.iter().copied());
    if all.any(|l| !(l.is_finite() && l > 0.0)) {
        return Err(Error::InvalidLaneCount(
            "segment lengths must be positive".into(),
        ));
    }
    let t3 = lengths.cat3 / band.hi;
    let half = |m: i64| (m as f64 * t1 - t3) / 2.0;
    let m2 = pick_odd("Cat2", lengths.cat2, band, half, None)?;
    let m4 = pick_odd("Cat4", lengths.cat4, band, |m| m as f64 * t1, None)?;

    let cat5 = &lengths.cat5[..n_l as usize];
    let mut t5 = Vec::with_capacity(cat5.len());
    if let Some(&first) = cat5.first() {
        let m_first = pick_odd("Cat5", first, band, half, None)?;
        let mut last_err = None;
        for residue in [m_first % 4, (m_first + 2) % 4] {
            let ms: Result<Vec<i64>> = cat5
                .iter()
                .map(|&len| pick_odd("Cat5", len, band, half, Some(residue)))
                .collect();
            match ms {
                Ok(ms) => {
                    t5 = ms.into_iter().map(half).collect();
                    last_err = None;
                    break;
                }
                Err(e) => last_err = Some(e),
            }
        }
        if let Some(e) = last_err {
            return Err(e);
        }
    }
    Ok(RhythmTiming {
        t1,
        t2: half(m2),
        t3,
        t4: m4 as f64 * t1,
        t5,
    })
}

/// [`solve_travel_times_with_t1`] with `T1` from the vehicle parameters.
/// The band's upper end must not exceed `v_max`.
pub fn solve_travel_times(
    spec: &IntersectionSpec,
    vehicle: &VehicleParams,
    lengths: &SegmentLengths,
    band: SpeedBand,
) -> Result<RhythmTiming> {
    let t1 = min_gap_t(vehicle)?;
    if band.hi > vehicle.v_max + 1e-12 {
        return Err(Error::InfeasibleBand {
            category: "band".into(),
            length: 0.0,
            lo: band.lo,
            hi: band.hi,
            below: "none".into(),
            above: fmt_speed(Some(vehicle.v_max)),
        });
    }
    solve_travel_times_with_t1(t1, spec.n_l(), lengths, band)
}

/// Entry pattern of one lane: slots at `offset + k * period`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaneSchedule {
    pub lane: LaneId,
    pub movement: Movement,
    /// Entry time for `k = 0` before reduction modulo the period.
    pub anchor: f64,
    /// `anchor` reduced into `[0, period)`.
    pub offset: f64,
    pub schedulable: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntrySchedule {
    pub t1: f64,
    pub period: f64,
    pub lanes: Vec<LaneSchedule>,
}

/// Builds the periodic entry schedule. Through lane `l` enters at
/// `(2k + l) T1`; left lane `j` enters at
/// `(2k + n_s - 1) T1 + c_j T4 + T2 + T3` with `c_j = 2 n_l` for odd `j`
/// and `2 n_l - 1` for even `j`.
pub fn entry_schedule(spec: &IntersectionSpec, timing: &RhythmTiming) -> EntrySchedule {
    let t1 = timing.t1;
    let period = 2.0 * t1;
    let n_s = spec.n_s() as f64;
    let n_l = spec.n_l() as f64;
    let lanes = spec
        .all_lanes()
        .into_iter()
        .map(|lane| {
            let movement = spec.movement(lane);
            let anchor = match spec.left_index(lane) {
                None => lane.lane as f64 * t1,
                Some(j) => {
                    let c = if j % 2 == 1 {
                        2.0 * n_l
                    } else {
                        2.0 * n_l - 1.0
                    };
                    (n_s - 1.0) * t1 + c * timing.t4 + timing.t2 + timing.t3
                }
            };
            LaneSchedule {
                lane,
                movement,
                anchor,
                offset: anchor.rem_euclid(period),
                schedulable: spec.is_active(lane),
            }
        })
        .collect();
    EntrySchedule { t1, period, lanes }
}

impl EntrySchedule {
    pub fn lane(&self, id: LaneId) -> Option<&LaneSchedule> {
        self.lanes.iter().find(|l| l.lane == id)
    }

    /// Earliest slot index and time at or after `t` on `lane`.
    pub fn next_slot(&self, lane: LaneId, t: f64) -> Option<(i64, f64)> {
        let ls = self.lane(lane)?;
        let k = ((t - ls.offset) / self.period - 1e-12).ceil() as i64;
        Some((k, ls.offset + k as f64 * self.period))
    }

    /// Entry times in `[0, horizon]` for a schedulable lane.
    pub fn entries(&self, lane: LaneId, horizon: f64) -> Vec<f64> {
        let Some(ls) = self.lane(lane).filter(|l| l.schedulable) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        let mut t = ls.offset;
        let mut k = 0;
        while t <= horizon + EPS_TIME {
            out.push(t);
            k += 1;
            t = ls.offset + k as f64 * self.period;
        }
        out
    }
}

/// Right-of-way intervals per lane, plus a sampled occupancy grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RowProfile {
    pub hold: f64,
    pub resolution: f64,
    pub intervals: Vec<(LaneId, Vec<(f64, f64)>)>,
    pub sample_times: Vec<f64>,
    /// `occupied[i][s]` is true when lane `i` holds ROW at `sample_times[s]`.
    pub occupied: Vec<Vec<bool>>,
}

/// Right-of-way bars over `[0, horizon]`. A lane holds ROW for `hold`
/// seconds from each entry.
pub fn row_profile(
    schedule: &EntrySchedule,
    horizon: f64,
    resolution: f64,
    hold: f64,
) -> Result<RowProfile> {
    let limit = schedule.t1 / 4.0;
    if !(resolution > 0.0 && resolution <= limit + EPS_TIME) {
        return Err(Error::ResolutionTooCoarse { resolution, limit });
    }
    let n = (horizon / resolution).floor() as usize + 1;
    let sample_times: Vec<f64> = (0..n).map(|i| i as f64 * resolution).collect();
    let mut intervals = Vec::new();
    let mut occupied = Vec::new();
    for ls in schedule.lanes.iter().filter(|l| l.schedulable) {
        let bars: Vec<(f64, f64)> = schedule
            .entries(ls.lane, horizon)
            .into_iter()
            .map(|t| (t, (t + hold).min(horizon)))
            .collect();
        let row = sample_times
            .iter()
            .map(|&s| bars.iter().any(|&(a, b)| s >= a && s < b))
            .collect();
        intervals.push((ls.lane, bars));
        occupied.push(row);
    }
    Ok(RowProfile {
        hold,
        resolution,
        intervals,
        sample_times,
        occupied,
    })
}

/// Audit outcome for one active conflict point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointAudit {
    pub point: ConflictPoint,
    /// Minimum arrival gap from the closed-form arrival expressions.
    pub closed_form_gap: f64,
    /// Minimum arrival gap from propagating the entry schedule along paths.
    pub enumerated_gap: f64,
    /// Every pairwise gap is an odd multiple of `T1`.
    pub odd_multiple: bool,
    pub pass: bool,
}

impl PointAudit {
    pub fn min_gap(&self) -> f64 {
        self.closed_form_gap.min(self.enumerated_gap)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub t_required: f64,
    pub window: usize,
    pub points: Vec<PointAudit>,
    pub violations: Vec<Condition>,
}

impl AuditReport {
    pub fn pass(&self) -> bool {
        self.points.iter().all(|p| p.pass)
    }

    /// The two computation routes agree at every point.
    pub fn routes_agree(&self) -> bool {
        self.points
            .iter()
            .all(|p| (p.closed_form_gap - p.enumerated_gap).abs() <= EPS_TIME)
    }

    pub fn min_gap(&self) -> f64 {
        self.points
            .iter()
            .map(PointAudit::min_gap)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PointAudit> {
        self.points.iter().filter(|p| !p.pass)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "point_id",
            "type",
            "lane_a",
            "lane_b",
            "closed_form_gap_s",
            "enumerated_gap_s",
            "odd_multiple",
            "pass",
        ])?;
        for p in &self.points {
            w.write_record([
                p.point.id.to_string(),
                p.point.ctype.to_string(),
                p.point.a.to_string(),
                p.point.b.to_string(),
                format!("{:.12}", p.closed_form_gap),
                format!("{:.12}", p.enumerated_gap),
                p.odd_multiple.to_string(),
                p.pass.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Human-readable summary.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let verdict = if self.pass() { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "audit: {verdict}");
        let _ = writeln!(s, "required gap T: {:.9} s", self.t_required);
        let _ = writeln!(s, "window: k in [-{0}, {0}]", self.window);
        let _ = writeln!(s, "active points: {}", self.points.len());
        for t in [
            ConflictType::A,
            ConflictType::B,
            ConflictType::C,
            ConflictType::D,
        ] {
            let of_type: Vec<_> = self.points.iter().filter(|p| p.point.ctype == t).collect();
            if of_type.is_empty() {
                continue;
            }
            let min = of_type
                .iter()
                .map(|p| p.min_gap())
                .fold(f64::INFINITY, f64::min);
            let failed = of_type.iter().filter(|p| !p.pass).count();
            let _ = writeln!(
                s,
                "type {t}: {} points, min gap {min:.9} s, {failed} failing",
                of_type.len()
            );
        }
        let _ = writeln!(s, "routes agree: {}", self.routes_agree());
        if !self.violations.is_empty() {
            let _ = writeln!(s, "violated conditions: {:?}", self.violations);
        }
        for p in self.failures().take(20) {
            let _ = writeln!(
                s,
                "  point {} ({}) {} x {}: gap {:.9} s",
                p.point.id,
                p.point.ctype,
                p.point.a,
                p.point.b,
                p.min_gap()
            );
        }
        s
    }
}

/// Closed-form arrival times at a point for `k = 0` on both lanes.
fn closed_form_base(spec: &IntersectionSpec, t: &RhythmTiming, p: &ConflictPoint) -> (f64, f64) {
    let n_s = spec.n_s() as f64;
    let n_l = spec.n_l() as f64;
    let l1 = p.a.lane as f64;
    let l2 = p.b.lane as f64;
    let t5 = |lane: LaneId| t.t5[(lane.lane - spec.n_s()) as usize - 1];
    match p.ctype {
        ConflictType::A => {
            let middle = if spec.n_l() == 0 {
                t.t1
            } else {
                2.0 * t.t2 + t.t3 + 2.0 * (n_l - 1.0) * t.t4
            };
            (
                (l1 + l2 - 1.0) * t.t1,
                l2 * t.t1 + middle + (2.0 * n_s - 1.0 - l1) * t.t1,
            )
        }
        ConflictType::B => (
            (l1 + n_s - 1.0) * t.t1 + t.t2 + (l2 - n_s - 1.0) * t.t4,
            (3.0 * n_s + 2.0 * n_l - l1 - 3.0) * t.t1
                + (2.0 * n_l + n_s - l2 - 1.0) * t.t4
                + t.t2
                + t.t3
                + 2.0 * t5(p.b),
        ),
        ConflictType::C => {
            let common = (2.0 * n_l + n_s - l2 - 1.0) * t.t4 + t.t2 + t.t3;
            (
                (l1 + n_s - 1.0) * t.t1 + common,
                (l1 + n_s - 2.0) * t.t1 + common,
            )
        }
        ConflictType::D => (
            (3.0 * n_s + n_l - l2 - 2.0) * t.t1
                + (2.0 * n_l + n_s - l1 - 1.0) * t.t4
                + t.t2
                + t.t3
                + t5(p.a),
            (n_s + n_l + l1 - 3.0) * t.t1
                + (2.0 * n_l + n_s - l2 - 1.0) * t.t4
                + t.t2
                + t.t3
                + t5(p.b),
        ),
    }
}

/// Travel time from a lane's first conflict point to each point on its path.
pub fn path_offsets(
    spec: &IntersectionSpec,
    timing: &RhythmTiming,
    lane: LaneId,
) -> Result<Vec<f64>> {
    let left = spec.left_index(lane);
    let mut acc = 0.0;
    Ok(lane_path(spec, lane)?
        .into_iter()
        .map(|p| {
            if let Some(seg) = p.segment {
                acc += timing.segment_time(seg, left);
            }
            acc
        })
        .collect())
}

fn arrivals(base: f64, period: f64, center: i64, window: usize) -> Vec<f64> {
    let w = window as i64;
    (center - w..=center + w)
        .map(|k| base + k as f64 * period)
        .collect()
}

/// Arrival sets of both lanes at a point. Lane `b`'s window is centred on
/// the vehicle that meets lane `a`'s `k = 0` vehicle.
fn arrival_sets(base_a: f64, base_b: f64, period: f64, window: usize) -> (Vec<f64>, Vec<f64>) {
    let center = ((base_a - base_b) / period).round() as i64;
    (
        arrivals(base_a, period, 0, window),
        arrivals(base_b, period, center, window),
    )
}

/// Smallest `|x - y|` over two ascending sequences.
fn min_pairwise_gap(xs: &[f64], ys: &[f64]) -> f64 {
    let (mut i, mut j) = (0, 0);
    let mut best = f64::INFINITY;
    while i < xs.len() && j < ys.len() {
        best = best.min((xs[i] - ys[j]).abs());
        if xs[i] < ys[j] {
            i += 1;
        } else {
            j += 1;
        }
    }
    best
}

/// Checks every active conflict point over `k in [-window, window]`.
///
/// The required gap is `T` from the vehicle parameters, not the timing's own
/// `T1`, so a timing with the wrong period fails.
pub fn audit(
    spec: &IntersectionSpec,
    vehicle: &VehicleParams,
    timing: &RhythmTiming,
    window: usize,
) -> Result<AuditReport> {
    if window < 2 {
        return Err(Error::WindowTooSmall(window));
    }
    let t_required = min_gap_t(vehicle)?;
    if timing.t5.len() < spec.n_l() as usize {
        return Err(Error::InvalidLaneCount(format!(
            "timing has {} T5 values for {} left lanes",
            timing.t5.len(),
            spec.n_l()
        )));
    }
    let schedule = entry_schedule(spec, timing);
    let period = schedule.period;
    let offsets: Vec<(LaneId, Vec<f64>)> = spec
        .all_lanes()
        .into_iter()
        .map(|l| Ok((l, path_offsets(spec, timing, l)?)))
        .collect::<Result<_>>()?;
    let enumerated_base = |lane: LaneId, pos: usize| {
        let anchor = schedule.lane(lane).expect("lane in schedule").anchor;
        let off = &offsets
            .iter()
            .find(|(l, _)| *l == lane)
            .expect("lane offsets")
            .1;
        anchor + off[pos]
    };

    let mut points = Vec::new();
    for p in conflict_points(spec).into_iter().filter(|p| p.active) {
        let (ca, cb) = closed_form_base(spec, timing, &p);
        let ea = enumerated_base(p.a, p.pos_a);
        let eb = enumerated_base(p.b, p.pos_b);
        let (xa, xb) = arrival_sets(ca, cb, period, window);
        let closed_form_gap = min_pairwise_gap(&xa, &xb);
        let (ya, yb) = arrival_sets(ea, eb, period, window);
        let enumerated_gap = min_pairwise_gap(&ya, &yb);
        let odd_multiple = xa
            .iter()
            .all(|&a| xb.iter().all(|&b| is_odd_multiple(a - b, timing.t1)));
        let pass =
            closed_form_gap >= t_required - EPS_TIME && enumerated_gap >= t_required - EPS_TIME;
        points.push(PointAudit {
            point: p,
            closed_form_gap,
            enumerated_gap,
            odd_multiple,
            pass,
        });
    }
    Ok(AuditReport {
        t_required,
        window,
        points,
        violations: timing.violations(t_required, spec.n_l()),
    })
}

/// Minimum separation between two perpendicular vehicles crossing the same
/// point at `v_max`, the second `t_prime` seconds behind the first.
///
/// Both bodies are rectangles moving along their lane axes; the distance is
/// the Euclidean gap between the rectangles (zero when they overlap),
/// minimised over `samples` evenly spaced instants.
pub fn geometric_oracle(v: &VehicleParams, t_prime: f64, samples: usize) -> f64 {
    let (l, w, speed) = (v.length, v.width, v.v_max);
    let reach = (l + w) / speed + 1.0;
    let t_start = -t_prime - reach;
    let t_end = reach;
    let n = samples.max(2);
    let step = (t_end - t_start) / (n - 1) as f64;
    let gap = |lo_a: f64, hi_a: f64, lo_b: f64, hi_b: f64| (lo_b - hi_a).max(lo_a - hi_b).max(0.0);
    (0..n)
        .map(|i| {
            let t = t_start + i as f64 * step;
            // First vehicle heads north along x = 0 and is at the point at t = -t_prime.
            let y1 = speed * (t + t_prime);
            // Second vehicle heads east along y = 0 and is at the point at t = 0.
            let x2 = speed * t;
            let dx = gap(-w / 2.0, w / 2.0, x2 - l / 2.0, x2 + l / 2.0);
            let dy = gap(y1 - l / 2.0, y1 + l / 2.0, -w / 2.0, w / 2.0);
            dx.hypot(dy)
        })
        .fold(f64::INFINITY, f64::min)
}
