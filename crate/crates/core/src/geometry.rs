//! Intersection layout, lane paths and conflict points.
//!
//! Legs are numbered counter-clockwise 1..=4 (1 = south approach heading
//! north, 2 = east, 3 = north, 4 = west). Within a leg, lanes are numbered
//! from the curb: through lanes are `1..=n_s`, left-turn lanes are
//! `n_s + 1..=n_s + n_l` where `n_s + 1` is the outermost left lane.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vehicle dimensions and kinematic limits, SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VehicleParams {
    pub length: f64,
    pub width: f64,
    /// Minimum safety distance between any two vehicles.
    pub min_gap: f64,
    pub v_max: f64,
    pub a_max: f64,
}

impl Default for VehicleParams {
    fn default() -> Self {
        Self {
            length: 4.5,
            width: 2.0,
            min_gap: 1.0,
            v_max: 10.0,
            a_max: 3.0,
        }
    }
}

impl VehicleParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("length", self.length),
            ("width", self.width),
            ("min_gap", self.min_gap),
            ("v_max", self.v_max),
            ("a_max", self.a_max),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidVehicleParams(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        Ok(())
    }

    /// Minimum same-lane following headway at full speed, `(L + delta) / v_m`.
    pub fn follow_headway(&self) -> f64 {
        (self.length + self.min_gap) / self.v_max
    }
}

/// Minimum time gap `T1 = (L + w + sqrt(2) delta) / v_m` between two
/// vehicles passing the same conflict point at full speed.
pub fn min_gap_t(v: &VehicleParams) -> Result<f64> {
    v.validate()?;
    Ok((v.length + v.width + std::f64::consts::SQRT_2 * v.min_gap) / v.v_max)
}

/// Returns `leg + delta` on the cyclic leg numbering 1..=4.
pub fn leg_offset(leg: u8, delta: i32) -> u8 {
    ((leg as i32 - 1 + delta).rem_euclid(4) + 1) as u8
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LaneId {
    pub leg: u8,
    pub lane: u8,
}

impl LaneId {
    pub const fn new(leg: u8, lane: u8) -> Self {
        Self { leg, lane }
    }
}

impl fmt::Display for LaneId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.leg, self.lane)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Movement {
    Through,
    Left,
}

/// Real lane counts of one leg.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegLanes {
    pub through: u8,
    pub left: u8,
}

/// An intersection virtualized to the symmetric `(n_s, n_l)` layout.
///
/// Legs with fewer real lanes receive virtual lanes that never carry
/// traffic. Real through lanes occupy the lowest through indices and real
/// left lanes the outermost left positions. Individual real lanes can also
/// be disabled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionSpec {
    n_s: u8,
    n_l: u8,
    legs: [LegLanes; 4],
    disabled: BTreeSet<LaneId>,
}

impl IntersectionSpec {
    pub fn symmetric(n_s: u8, n_l: u8) -> Result<Self> {
        let leg = LegLanes {
            through: n_s,
            left: n_l,
        };
        Self::from_legs([leg; 4])
    }

    pub fn from_legs(legs: [LegLanes; 4]) -> Result<Self> {
        let n_s = legs.iter().map(|l| l.through).max().unwrap_or(0);
        let n_l = legs.iter().map(|l| l.left).max().unwrap_or(0);
        if n_s < 1 {
            return Err(Error::InvalidLaneCount(
                "at least one leg needs a through lane".into(),
            ));
        }
        if n_s as u32 + n_l as u32 > 32 {
            return Err(Error::InvalidLaneCount(format!(
                "{n_s} through + {n_l} left lanes per leg is beyond the supported 32"
            )));
        }
        Ok(Self {
            n_s,
            n_l,
            legs,
            disabled: BTreeSet::new(),
        })
    }

    pub fn n_s(&self) -> u8 {
        self.n_s
    }

    pub fn n_l(&self) -> u8 {
        self.n_l
    }

    pub fn lanes_per_leg(&self) -> u8 {
        self.n_s + self.n_l
    }

    pub fn legs(&self) -> &[LegLanes; 4] {
        &self.legs
    }

    pub fn disabled(&self) -> &BTreeSet<LaneId> {
        &self.disabled
    }

    pub fn is_symmetric(&self) -> bool {
        self.legs
            .iter()
            .all(|l| l.through == self.n_s && l.left == self.n_l)
    }

    fn check_lane(&self, id: LaneId) -> Result<()> {
        if !(1..=4).contains(&id.leg) || id.lane < 1 || id.lane > self.lanes_per_leg() {
            return Err(Error::InvalidLane(format!(
                "{id} is outside 4 legs x {} lanes",
                self.lanes_per_leg()
            )));
        }
        Ok(())
    }

    pub fn movement(&self, id: LaneId) -> Movement {
        if id.lane <= self.n_s {
            Movement::Through
        } else {
            Movement::Left
        }
    }

    /// Index of a left lane counted from the outermost (1) inward.
    pub fn left_index(&self, id: LaneId) -> Option<u8> {
        (id.lane > self.n_s).then(|| id.lane - self.n_s)
    }

    pub fn is_virtual(&self, id: LaneId) -> bool {
        let leg = self.legs[(id.leg - 1) as usize];
        match self.left_index(id) {
            None => id.lane > leg.through,
            Some(j) => j > leg.left,
        }
    }

    pub fn is_active(&self, id: LaneId) -> bool {
        !self.is_virtual(id) && !self.disabled.contains(&id)
    }

    pub fn disable_lane(&mut self, id: LaneId) -> Result<()> {
        self.check_lane(id)?;
        if self.is_virtual(id) {
            return Err(Error::InvalidLane(format!("{id} is virtual")));
        }
        self.disabled.insert(id);
        Ok(())
    }

    pub fn enable_lane(&mut self, id: LaneId) {
        self.disabled.remove(&id);
    }

    /// All lanes of the virtualized layout, including virtual ones.
    pub fn all_lanes(&self) -> Vec<LaneId> {
        (1..=4)
            .flat_map(|leg| (1..=self.lanes_per_leg()).map(move |lane| LaneId::new(leg, lane)))
            .collect()
    }

    pub fn active_lanes(&self) -> Vec<LaneId> {
        self.all_lanes()
            .into_iter()
            .filter(|&id| self.is_active(id))
            .collect()
    }
}

/// Segment categories between consecutive conflict points on a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SegmentClass {
    /// Between two through lanes; always traversed in `T1`.
    Cat1,
    /// Through path, between a through lane and a left lane.
    Cat2,
    /// Through path, between the two groups of left lanes.
    Cat3,
    /// Through path, between two left lanes of the same leg.
    Cat4,
    /// Left path, between a through lane and a left lane.
    Cat5,
}

/// One conflict point on a lane's path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathPoint {
    /// The crossing lane.
    pub other: LaneId,
    /// Segment leading into this point; `None` for the first point.
    pub segment: Option<SegmentClass>,
}

/// Ordered conflict points met by a vehicle on `lane`, virtual lanes included.
pub fn lane_path(spec: &IntersectionSpec, lane: LaneId) -> Result<Vec<PathPoint>> {
    spec.check_lane(lane)?;
    let n_s = spec.n_s;
    let n_l = spec.n_l;
    let p = lane.leg;
    let mut path = Vec::with_capacity(2 * (n_s + n_l) as usize);
    let mut push = |other: LaneId, seg: SegmentClass| {
        let segment = if path.is_empty() { None } else { Some(seg) };
        path.push(PathPoint { other, segment });
    };
    let prev = leg_offset(p, -1);
    let next = leg_offset(p, 1);
    let opposite = leg_offset(p, 2);
    for i in 1..=n_s {
        push(LaneId::new(prev, i), SegmentClass::Cat1);
    }
    match spec.left_index(lane) {
        None => {
            let far_seg = if n_l == 0 {
                SegmentClass::Cat1
            } else {
                for j in 1..=n_l {
                    let seg = if j == 1 {
                        SegmentClass::Cat2
                    } else {
                        SegmentClass::Cat4
                    };
                    push(LaneId::new(opposite, n_s + j), seg);
                }
                for j in (1..=n_l).rev() {
                    let seg = if j == n_l {
                        SegmentClass::Cat3
                    } else {
                        SegmentClass::Cat4
                    };
                    push(LaneId::new(next, n_s + j), seg);
                }
                SegmentClass::Cat2
            };
            for i in (1..=n_s).rev() {
                let seg = if i == n_s {
                    far_seg
                } else {
                    SegmentClass::Cat1
                };
                push(LaneId::new(next, i), seg);
            }
        }
        Some(_) => {
            for j in (1..=n_l).rev() {
                let seg = if j == n_l {
                    SegmentClass::Cat5
                } else {
                    SegmentClass::Cat1
                };
                push(LaneId::new(next, n_s + j), seg);
            }
            for j in 1..=n_l {
                push(LaneId::new(prev, n_s + j), SegmentClass::Cat1);
            }
            for i in (1..=n_s).rev() {
                let seg = if i == n_s {
                    SegmentClass::Cat5
                } else {
                    SegmentClass::Cat1
                };
                push(LaneId::new(opposite, i), seg);
            }
        }
    }
    Ok(path)
}

/// Conflict point classes by the pair of path groups that meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConflictType {
    /// Through lane (near group) crossing a through lane (far group).
    A,
    /// Through lane crossing the far group of a left lane.
    B,
    /// Through lane crossing the near group of a left lane.
    C,
    /// Two left lanes from perpendicular legs.
    D,
}

impl fmt::Display for ConflictType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A crossing of lanes `a` and `b`. Orientation follows the type:
/// for A, `b` is in the near group of `a`; for B and C, `a` is the through
/// lane; for D, `b` is in the first left group of `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConflictPoint {
    pub id: usize,
    pub ctype: ConflictType,
    pub a: LaneId,
    pub b: LaneId,
    /// Index of this point on `a`'s path.
    pub pos_a: usize,
    pub pos_b: usize,
    pub active: bool,
}

/// Every conflict point of the virtualized layout, sorted by `(type, a, b)`.
pub fn conflict_points(spec: &IntersectionSpec) -> Vec<ConflictPoint> {
    let n_s = spec.n_s as usize;
    let n_l = spec.n_l as usize;
    let mut points = Vec::new();
    for a in spec.all_lanes() {
        let path = lane_path(spec, a).expect("lane from all_lanes is valid");
        for (pos_a, pt) in path.iter().enumerate() {
            let b = pt.other;
            let ctype = match (spec.movement(a), spec.movement(b)) {
                (Movement::Through, Movement::Through) if pos_a < n_s => ConflictType::A,
                (Movement::Through, Movement::Left) if pos_a < n_s + n_l => ConflictType::B,
                (Movement::Through, Movement::Left) => ConflictType::C,
                (Movement::Left, Movement::Left) if pos_a < n_s + n_l => ConflictType::D,
                _ => continue,
            };
            let pos_b = lane_path(spec, b)
                .expect("crossing lane is valid")
                .iter()
                .position(|q| q.other == a)
                .expect("conflict incidence is symmetric");
            points.push(ConflictPoint {
                id: 0,
                ctype,
                a,
                b,
                pos_a,
                pos_b,
                active: spec.is_active(a) && spec.is_active(b),
            });
        }
    }
    points.sort_by_key(|p| (p.ctype, p.a, p.b));
    for (i, p) in points.iter_mut().enumerate() {
        p.id = i;
    }
    points
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_min_gap() {
        let t1 = min_gap_t(&VehicleParams::default()).unwrap();
        assert!((t1 - 0.791_421_356_237_309_5).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_positive_params() {
        let v = VehicleParams {
            width: 0.0,
            ..Default::default()
        };
        assert!(matches!(min_gap_t(&v), Err(Error::InvalidVehicleParams(_))));
    }

    #[test]
    fn rejects_zero_through() {
        assert!(matches!(
            IntersectionSpec::symmetric(0, 2),
            Err(Error::InvalidLaneCount(_))
        ));
    }

    #[test]
    fn path_lengths() {
        let spec = IntersectionSpec::symmetric(3, 2).unwrap();
        for lane in spec.all_lanes() {
            assert_eq!(lane_path(&spec, lane).unwrap().len(), 10);
        }
    }

    #[test]
    fn through_path_shape() {
        let spec = IntersectionSpec::symmetric(2, 1).unwrap();
        let path = lane_path(&spec, LaneId::new(1, 1)).unwrap();
        let others: Vec<_> = path.iter().map(|p| p.other).collect();
        assert_eq!(
            others,
            vec![
                LaneId::new(4, 1),
                LaneId::new(4, 2),
                LaneId::new(3, 3),
                LaneId::new(2, 3),
                LaneId::new(2, 2),
                LaneId::new(2, 1),
            ]
        );
        let segs: Vec<_> = path.iter().map(|p| p.segment).collect();
        use SegmentClass::*;
        assert_eq!(
            segs,
            vec![
                None,
                Some(Cat1),
                Some(Cat2),
                Some(Cat3),
                Some(Cat2),
                Some(Cat1)
            ]
        );
    }

    #[test]
    fn no_left_lanes_joins_groups_with_cat1() {
        let spec = IntersectionSpec::symmetric(2, 0).unwrap();
        let path = lane_path(&spec, LaneId::new(1, 2)).unwrap();
        assert!(path[1..]
            .iter()
            .all(|p| p.segment == Some(SegmentClass::Cat1)));
    }

    #[test]
    fn asymmetric_virtual_lanes() {
        let big = LegLanes {
            through: 3,
            left: 2,
        };
        let small = LegLanes {
            through: 1,
            left: 1,
        };
        let spec = IntersectionSpec::from_legs([big, small, big, small]).unwrap();
        assert_eq!((spec.n_s(), spec.n_l()), (3, 2));
        assert!(spec.is_active(LaneId::new(2, 1)));
        assert!(spec.is_virtual(LaneId::new(2, 2)));
        assert!(spec.is_active(LaneId::new(2, 4)));
        assert!(spec.is_virtual(LaneId::new(2, 5)));
        assert_eq!(spec.active_lanes().len(), 5 + 2 + 5 + 2);
        let pts = conflict_points(&spec);
        assert_eq!(pts.len(), 100);
        assert!(pts.iter().filter(|p| p.active).count() < 100);
    }

    #[test]
    fn disabling_virtual_lane_fails() {
        let mut spec = IntersectionSpec::from_legs([
            LegLanes {
                through: 2,
                left: 1,
            },
            LegLanes {
                through: 1,
                left: 1,
            },
            LegLanes {
                through: 2,
                left: 1,
            },
            LegLanes {
                through: 1,
                left: 1,
            },
        ])
        .unwrap();
        assert!(spec.disable_lane(LaneId::new(2, 2)).is_err());
        spec.disable_lane(LaneId::new(1, 2)).unwrap();
        assert!(!spec.is_active(LaneId::new(1, 2)));
    }
}
