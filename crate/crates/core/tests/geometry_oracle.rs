//! Independent check of the conflict topology against a grid drawing of the
//! intersection. Through lanes are straight lines, left lanes are L-shaped.
//! Left-left crossings are counted by endpoint interleaving on the boundary,
//! since any two rectilinear left paths from opposite legs touch twice.

use std::collections::BTreeSet;

use rhythmic::geometry::{conflict_points, lane_path, ConflictType, IntersectionSpec, LaneId};

type P = (f64, f64);

struct Drawing {
    n_s: u8,
    n_l: u8,
    r: f64,
}

impl Drawing {
    fn rotate((x, y): P, leg: u8) -> P {
        let mut p = (x, y);
        for _ in 1..leg {
            p = (-p.1, p.0);
        }
        p
    }

    fn polyline(&self, id: LaneId) -> Vec<P> {
        let n = (self.n_s + self.n_l) as f64;
        let r = self.r;
        let base = if id.lane <= self.n_s {
            let x = n - id.lane as f64 + 0.5;
            vec![(x, -r), (x, r)]
        } else {
            let j = (id.lane - self.n_s) as f64;
            let eps = self.n_l as f64 - j + 0.5;
            let tau = self.n_l as f64 - j + 0.75;
            vec![(eps, -r), (eps, tau), (-r, tau)]
        };
        base.into_iter().map(|p| Self::rotate(p, id.leg)).collect()
    }

    /// Position of a boundary point along the square's perimeter.
    fn perimeter(&self, (x, y): P) -> f64 {
        let r = self.r;
        if (y + r).abs() < 1e-9 {
            x + r
        } else if (x - r).abs() < 1e-9 {
            2.0 * r + y + r
        } else if (y - r).abs() < 1e-9 {
            4.0 * r + r - x
        } else {
            6.0 * r + r - y
        }
    }
}

fn seg_intersect(a: P, b: P, c: P, d: P) -> Option<f64> {
    let rx = b.0 - a.0;
    let ry = b.1 - a.1;
    let sx = d.0 - c.0;
    let sy = d.1 - c.1;
    let den = rx * sy - ry * sx;
    if den.abs() < 1e-12 {
        return None;
    }
    let t = ((c.0 - a.0) * sy - (c.1 - a.1) * sx) / den;
    let u = ((c.0 - a.0) * ry - (c.1 - a.1) * rx) / den;
    ((0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u)).then_some(t)
}

/// Arc-length positions along `a` where it crosses `b`.
fn crossings(pa: &[P], pb: &[P]) -> Vec<f64> {
    let mut out = Vec::new();
    let mut acc = 0.0;
    for w in pa.windows(2) {
        let len = ((w[1].0 - w[0].0).powi(2) + (w[1].1 - w[0].1).powi(2)).sqrt();
        for v in pb.windows(2) {
            if let Some(t) = seg_intersect(w[0], w[1], v[0], v[1]) {
                out.push(acc + t * len);
            }
        }
        acc += len;
    }
    out
}

fn interleaved(d: &Drawing, a: &[P], b: &[P]) -> bool {
    let (a0, a1) = (d.perimeter(a[0]), d.perimeter(*a.last().unwrap()));
    let (lo, hi) = if a0 < a1 { (a0, a1) } else { (a1, a0) };
    let inside = |p: P| {
        let s = d.perimeter(p);
        s > lo && s < hi
    };
    inside(b[0]) != inside(*b.last().unwrap())
}

fn check_layout(n_s: u8, n_l: u8) {
    let spec = IntersectionSpec::symmetric(n_s, n_l).unwrap();
    let d = Drawing {
        n_s,
        n_l,
        r: (n_s + n_l) as f64 + 2.0,
    };
    let lanes = spec.all_lanes();
    let is_left = |id: LaneId| id.lane > n_s;

    let mut expected_pairs = BTreeSet::new();
    for &a in &lanes {
        for &b in &lanes {
            if a >= b || a.leg == b.leg {
                continue;
            }
            let (pa, pb) = (d.polyline(a), d.polyline(b));
            let cross = if is_left(a) && is_left(b) {
                interleaved(&d, &pa, &pb) as usize
            } else {
                let n = crossings(&pa, &pb).len();
                assert!(n <= 1, "{a} and {b} cross {n} times");
                assert_eq!(n == 1, interleaved(&d, &pa, &pb), "{a} x {b}");
                n
            };
            if cross == 1 {
                expected_pairs.insert((a, b));
            }
        }
    }

    let points = conflict_points(&spec);
    let got: BTreeSet<_> = points
        .iter()
        .map(|p| if p.a < p.b { (p.a, p.b) } else { (p.b, p.a) })
        .collect();
    assert_eq!(got.len(), points.len(), "duplicate pair");
    assert_eq!(got, expected_pairs, "layout ({n_s},{n_l})");

    let count = |t| points.iter().filter(|p| p.ctype == t).count();
    let (s, l) = (n_s as usize, n_l as usize);
    assert_eq!(count(ConflictType::A), 4 * s * s);
    assert_eq!(count(ConflictType::B), 4 * s * l);
    assert_eq!(count(ConflictType::C), 4 * s * l);
    assert_eq!(count(ConflictType::D), 4 * l * l);

    // Crossing order along every through path, and along the through-lane
    // groups of every left path.
    for &a in &lanes {
        let pa = d.polyline(a);
        let mut geo: Vec<(f64, LaneId)> = lanes
            .iter()
            .filter(|&&b| b.leg != a.leg && !(is_left(a) && is_left(b)))
            .flat_map(|&b| {
                crossings(&pa, &d.polyline(b))
                    .into_iter()
                    .map(move |s| (s, b))
            })
            .collect();
        geo.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        let geo: Vec<LaneId> = geo.into_iter().map(|x| x.1).collect();
        let path: Vec<LaneId> = lane_path(&spec, a)
            .unwrap()
            .into_iter()
            .map(|p| p.other)
            .filter(|&b| !(is_left(a) && is_left(b)))
            .collect();
        assert_eq!(geo, path, "order along {a} in ({n_s},{n_l})");
    }
}

#[test]
fn topology_matches_grid_drawing() {
    for n_s in 1..=4 {
        for n_l in 0..=3 {
            check_layout(n_s, n_l);
        }
    }
}

#[test]
fn incidence_is_symmetric() {
    let spec = IntersectionSpec::symmetric(3, 2).unwrap();
    for a in spec.all_lanes() {
        for p in lane_path(&spec, a).unwrap() {
            let back = lane_path(&spec, p.other).unwrap();
            assert_eq!(back.iter().filter(|q| q.other == a).count(), 1);
        }
    }
}
