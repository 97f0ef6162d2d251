//! Marching squares on a node-valued grid, with segments chained into polylines.

use std::collections::HashMap;

/// A traced level curve. Open polylines end on the grid boundary.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Polyline {
    pub points: Vec<[f64; 2]>,
    pub closed: bool,
}

/// Node values `values[i * ny + j]` at `(xs[i], ys[j])`.
pub struct Grid<'a> {
    pub xs: &'a [f64],
    pub ys: &'a [f64],
    pub values: &'a [f64],
}

impl Grid<'_> {
    fn v(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.ys.len() + j]
    }
}

/// Edge identifiers: horizontal edge `(i, j)` joins nodes `(i, j)`-`(i+1, j)`;
/// vertical edge joins `(i, j)`-`(i, j+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum EdgeId {
    H(usize, usize),
    V(usize, usize),
}

fn crossing(g: &Grid, e: EdgeId, level: f64) -> [f64; 2] {
    let (a, b, pa, pb) = match e {
        EdgeId::H(i, j) => (g.v(i, j), g.v(i + 1, j), [g.xs[i], g.ys[j]], [g.xs[i + 1], g.ys[j]]),
        EdgeId::V(i, j) => (g.v(i, j), g.v(i, j + 1), [g.xs[i], g.ys[j]], [g.xs[i], g.ys[j + 1]]),
    };
    let t = if a == b { 0.5 } else { ((level - a) / (b - a)).clamp(0.0, 1.0) };
    [pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])]
}

/// Level set `value = level`; a node counts as above when `value > level`.
pub fn contour(g: &Grid, level: f64) -> Vec<Polyline> {
    let (nx, ny) = (g.xs.len(), g.ys.len());
    if nx < 2 || ny < 2 {
        return Vec::new();
    }
    let above = |i: usize, j: usize| g.v(i, j) > level;
    let mut segments: Vec<(EdgeId, EdgeId)> = Vec::new();
    for i in 0..nx - 1 {
        for j in 0..ny - 1 {
            // corners counterclockwise from (i, j)
            let c = [above(i, j), above(i + 1, j), above(i + 1, j + 1), above(i, j + 1)];
            let sides = [EdgeId::H(i, j), EdgeId::V(i + 1, j), EdgeId::H(i, j + 1), EdgeId::V(i, j)];
            let cut: Vec<usize> = (0..4).filter(|&s| c[s] != c[(s + 1) % 4]).collect();
            match cut.len() {
                2 => segments.push((sides[cut[0]], sides[cut[1]])),
                4 => {
                    let center = 0.25 * (g.v(i, j) + g.v(i + 1, j) + g.v(i + 1, j + 1) + g.v(i, j + 1));
                    // join around the corners that disagree with the center
                    if (center > level) == c[0] {
                        segments.push((sides[0], sides[1]));
                        segments.push((sides[2], sides[3]));
                    } else {
                        segments.push((sides[3], sides[0]));
                        segments.push((sides[1], sides[2]));
                    }
                }
                _ => {}
            }
        }
    }
    chain(g, &segments, level)
}

fn chain(g: &Grid, segments: &[(EdgeId, EdgeId)], level: f64) -> Vec<Polyline> {
    let mut incident: HashMap<EdgeId, Vec<usize>> = HashMap::new();
    for (s, &(a, b)) in segments.iter().enumerate() {
        incident.entry(a).or_default().push(s);
        incident.entry(b).or_default().push(s);
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();

    let walk = |start_seg: usize, from: EdgeId, used: &mut Vec<bool>| -> (Vec<EdgeId>, bool) {
        let mut path = vec![from];
        let mut seg = start_seg;
        let mut at = from;
        loop {
            used[seg] = true;
            let (a, b) = segments[seg];
            let next = if a == at { b } else { a };
            path.push(next);
            if next == from {
                return (path, true);
            }
            match incident[&next].iter().find(|&&s| !used[s]) {
                Some(&s) => {
                    seg = s;
                    at = next;
                }
                None => return (path, false),
            }
        }
    };

    // open chains start at edges with a single incident segment
    let mut ends: Vec<EdgeId> = incident.iter().filter(|(_, v)| v.len() == 1).map(|(e, _)| *e).collect();
    ends.sort_by_key(|e| match *e {
        EdgeId::H(i, j) => (0, i, j),
        EdgeId::V(i, j) => (1, i, j),
    });
    for e in ends {
        let s = incident[&e][0];
        if used[s] {
            continue;
        }
        let (path, _) = walk(s, e, &mut used);
        out.push(Polyline {
            points: path.iter().map(|&p| crossing(g, p, level)).collect(),
            closed: false,
        });
    }
    for s in 0..segments.len() {
        if used[s] {
            continue;
        }
        let (path, closed) = walk(s, segments[s].0, &mut used);
        let mut points: Vec<[f64; 2]> = path.iter().map(|&p| crossing(g, p, level)).collect();
        if closed {
            points.pop();
        }
        out.push(Polyline { points, closed });
    }
    out
}

/// Evenly spaced nodes on `[a, b]`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (a + b)];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}
