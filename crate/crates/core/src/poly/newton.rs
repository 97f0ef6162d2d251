use serde::{Deserialize, Serialize};

use super::Exponent;

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn cross(o: Exponent, a: Exponent, b: Exponent) -> i64 {
    (a.j - o.j) * (b.k - o.k) - (a.k - o.k) * (b.j - o.j)
}

/// A side of the Newton polygon, walked counterclockwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub start: Exponent,
    /// Primitive lattice direction from `start` towards the next vertex.
    pub direction: (i64, i64),
    /// Integer length `d_k`: lattice points strictly inside the side, plus one.
    pub length: u64,
}

impl Edge {
    pub fn end(&self) -> Exponent {
        let d = self.length as i64;
        Exponent::new(self.start.j + d * self.direction.0, self.start.k + d * self.direction.1)
    }

    /// Primitive outward normal; for a counterclockwise polygon this is `(dy, -dx)`.
    pub fn outward_normal(&self) -> (i64, i64) {
        (self.direction.1, -self.direction.0)
    }

    /// The `d_k + 1` lattice points of the side from `start` to `end`.
    pub fn lattice_points(&self) -> impl Iterator<Item = Exponent> + '_ {
        (0..=self.length as i64).map(move |m| {
            Exponent::new(
                self.start.j + m * self.direction.0,
                self.start.k + m * self.direction.1,
            )
        })
    }
}

/// Convex hull of an exponent support with its lattice data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    vertices: Vec<Exponent>,
    edges: Vec<Edge>,
    twice_area: u64,
    interior_count: u64,
}

impl NewtonPolygon {
    pub fn from_support(points: impl IntoIterator<Item = Exponent>) -> Self {
        let mut pts: Vec<Exponent> = points.into_iter().collect();
        pts.sort();
        pts.dedup();
        assert!(!pts.is_empty(), "Newton polygon of an empty support");

        let vertices = if pts.len() <= 2 {
            pts
        } else {
            // Andrew's monotone chain; collinear points are dropped.
            let mut lower: Vec<Exponent> = Vec::new();
            for &p in &pts {
                while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
                    lower.pop();
                }
                lower.push(p);
            }
            let mut upper: Vec<Exponent> = Vec::new();
            for &p in pts.iter().rev() {
                while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
                    upper.pop();
                }
                upper.push(p);
            }
            lower.pop();
            upper.pop();
            lower.extend(upper);
            lower
        };

        let edges = match vertices.len() {
            1 => Vec::new(),
            n => (0..n)
                .map(|i| {
                    let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                    let (dx, dy) = (b.j - a.j, b.k - a.k);
                    let d = gcd(dx, dy);
                    Edge {
                        start: a,
                        direction: (dx / d, dy / d),
                        length: d as u64,
                    }
                })
                .collect(),
        };

        let twice_area = if vertices.len() < 3 {
            0
        } else {
            let n = vertices.len();
            let s: i64 = (0..n)
                .map(|i| {
                    let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                    a.j * b.k - a.k * b.j
                })
                .sum();
            s.unsigned_abs()
        };

        let boundary: u64 = edges.iter().map(|e| e.length).sum();
        // Pick: 2A = 2I + B - 2
        let interior_count = if twice_area > 0 {
            (twice_area + 2 - boundary) / 2
        } else {
            0
        };

        Self {
            vertices,
            edges,
            twice_area,
            interior_count,
        }
    }

    /// Counterclockwise vertices.
    pub fn vertices(&self) -> &[Exponent] {
        &self.vertices
    }

    /// Sides in cyclic (counterclockwise) order. A segment has two opposite sides, a point none.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Twice the Euclidean area; an integer for lattice polygons.
    pub fn twice_area(&self) -> u64 {
        self.twice_area
    }

    pub fn area(&self) -> f64 {
        self.twice_area as f64 / 2.0
    }

    pub fn is_degenerate(&self) -> bool {
        self.twice_area == 0
    }

    /// Number `g` of lattice points strictly inside.
    pub fn interior_count(&self) -> u64 {
        self.interior_count
    }

    /// Number of lattice points on the boundary.
    pub fn boundary_count(&self) -> u64 {
        match self.vertices.len() {
            1 => 1,
            2 => self.edges[0].length + 1,
            _ => self.edges.iter().map(|e| e.length).sum(),
        }
    }

    /// `Σ d_k` over the sides.
    pub fn total_edge_length(&self) -> u64 {
        if self.is_degenerate() {
            return 0;
        }
        self.edges.iter().map(|e| e.length).sum()
    }

    /// Upper bound `g + Σ d_k` on the number of components of a real curve in `(ℝ*)²`.
    pub fn component_bound(&self) -> u64 {
        self.interior_count + self.total_edge_length()
    }

    /// Closed-polygon membership test for a lattice point.
    pub fn contains(&self, p: Exponent) -> bool {
        match self.vertices.len() {
            1 => p == self.vertices[0],
            2 => {
                let (a, b) = (self.vertices[0], self.vertices[1]);
                cross(a, b, p) == 0
                    && p.j >= a.j.min(b.j)
                    && p.j <= a.j.max(b.j)
                    && p.k >= a.k.min(b.k)
                    && p.k <= a.k.max(b.k)
            }
            n => (0..n).all(|i| cross(self.vertices[i], self.vertices[(i + 1) % n], p) >= 0),
        }
    }

    pub fn is_interior(&self, p: Exponent) -> bool {
        let n = self.vertices.len();
        n >= 3 && (0..n).all(|i| cross(self.vertices[i], self.vertices[(i + 1) % n], p) > 0)
    }

    /// All lattice points of the closed polygon, in lexicographic order.
    pub fn lattice_points(&self) -> Vec<Exponent> {
        let jmin = self.vertices.iter().map(|v| v.j).min().unwrap();
        let jmax = self.vertices.iter().map(|v| v.j).max().unwrap();
        let kmin = self.vertices.iter().map(|v| v.k).min().unwrap();
        let kmax = self.vertices.iter().map(|v| v.k).max().unwrap();
        let mut out = Vec::new();
        for j in jmin..=jmax {
            for k in kmin..=kmax {
                let p = Exponent::new(j, k);
                if self.contains(p) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Parses `"(0,0),(3,0),(0,3)"` style vertex lists.
    pub fn parse_vertices(text: &str) -> Option<Self> {
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pts = Vec::new();
        for chunk in cleaned.split(')') {
            let chunk = chunk.trim_start_matches(',').trim_start_matches('(');
            if chunk.is_empty() {
                continue;
            }
            let (a, b) = chunk.split_once(',')?;
            pts.push(Exponent::new(a.parse().ok()?, b.parse().ok()?));
        }
        (!pts.is_empty()).then(|| Self::from_support(pts))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(points: &[(i64, i64)]) -> NewtonPolygon {
        NewtonPolygon::from_support(points.iter().map(|&(j, k)| Exponent::new(j, k)))
    }

    #[test]
    fn unit_triangle() {
        let p = poly(&[(0, 0), (1, 0), (0, 1)]);
        assert_eq!(p.vertices(), &[Exponent::new(0, 0), Exponent::new(1, 0), Exponent::new(0, 1)]);
        assert_eq!(p.edges().iter().map(|e| e.length).collect::<Vec<_>>(), vec![1, 1, 1]);
        assert_eq!(p.interior_count(), 0);
        assert_eq!(p.area(), 0.5);
    }

    #[test]
    fn cubic_triangle() {
        let p = poly(&[(0, 0), (3, 0), (0, 3), (1, 1)]);
        assert_eq!(p.interior_count(), 1);
        assert_eq!(p.area(), 4.5);
        assert_eq!(p.total_edge_length(), 9);
        assert_eq!(p.lattice_points().len(), 10);
    }

    #[test]
    fn unit_square() {
        let p = poly(&[(0, 0), (1, 0), (0, 1), (1, 1)]);
        assert_eq!(p.edges().iter().map(|e| e.length).collect::<Vec<_>>(), vec![1, 1, 1, 1]);
        assert_eq!(p.interior_count(), 0);
        assert_eq!(p.area(), 1.0);
    }

    #[test]
    fn degenerate_hulls() {
        let pt = poly(&[(2, 3)]);
        assert!(pt.is_degenerate());
        assert!(pt.edges().is_empty());
        let seg = poly(&[(0, 0), (1, 1), (3, 3)]);
        assert!(seg.is_degenerate());
        assert_eq!(seg.vertices().len(), 2);
        assert_eq!(seg.edges()[0].length, 3);
        assert_eq!(seg.boundary_count(), 4);
    }

    #[test]
    fn outward_normals_point_away() {
        let p = poly(&[(0, 0), (2, 0), (0, 2)]);
        let centroid = (2.0 / 3.0, 2.0 / 3.0);
        for e in p.edges() {
            let (nx, ny) = e.outward_normal();
            let mid = (
                e.start.j as f64 + e.direction.0 as f64 * e.length as f64 / 2.0,
                e.start.k as f64 + e.direction.1 as f64 * e.length as f64 / 2.0,
            );
            assert!(nx as f64 * (mid.0 - centroid.0) + ny as f64 * (mid.1 - centroid.1) > 0.0);
        }
    }

    #[test]
    fn parse_vertex_list() {
        let p = NewtonPolygon::parse_vertices("(0,0),(3,0),(0,3)").unwrap();
        assert_eq!(p.twice_area(), 9);
        assert!(NewtonPolygon::parse_vertices("(0,0),(1,").is_none());
    }

    proptest! {
        #[test]
        fn pick_and_closure(points in prop::collection::vec((-4i64..5, -4i64..5), 1..12)) {
            let p = poly(&points);
            let closure = p.edges().iter().fold((0, 0), |acc, e| {
                (acc.0 + e.direction.0 * e.length as i64, acc.1 + e.direction.1 * e.length as i64)
            });
            prop_assert_eq!(closure, (0, 0));
            if !p.is_degenerate() {
                let lattice = p.lattice_points().len() as u64;
                let interior = p.lattice_points().iter().filter(|q| p.is_interior(**q)).count() as u64;
                prop_assert_eq!(interior, p.interior_count());
                prop_assert_eq!(lattice - interior, p.boundary_count());
                prop_assert_eq!(p.twice_area() + 2, 2 * p.interior_count() + p.boundary_count());
            }
        }
    }
}
