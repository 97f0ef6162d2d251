//! Topology of the real part `RA = {f = 0} ∩ (ℝ*)²` of a real curve.
//!
//! Each of the four open quadrants is charted in log coordinates `u = (log|x|, log|y|)` and the
//! sign field of `f(±e^{u1}, ±e^{u2})` is contoured. Unbounded arcs leave the chart along the
//! tentacles, where the terms of one side of the Newton polygon dominate; the real roots of
//! that side's polynomial are the points where the closure of `RA` meets the corresponding
//! toric axis, and gluing arc ends through them gives the components of the compactified curve.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::amoeba::Window;
use crate::contour::{self, linspace, Polyline};
use crate::poly::{LaurentPolynomial, NewtonPolygon};
use crate::roots;

pub type Quadrant = (i8, i8);
pub const QUADRANTS: [Quadrant; 4] = [(1, 1), (-1, 1), (-1, -1), (1, -1)];

pub const DEFAULT_RESOLUTION: usize = 512;
/// Arc ends whose edge terms beat the rest by less than this (in log units) are unclassified.
const EXIT_MARGIN: f64 = 1.0;
/// Largest accepted distance between an arc exit and its axis root, in log units.
const EXIT_MISMATCH: f64 = 1.0;
/// Relative distance under which two edge roots count as a multiple root.
const MULTIPLE_ROOT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RealLocusError {
    #[error("coefficients are not real")]
    NotReal,
    #[error("{found} components exceed the bound g + Σd_k = {bound}; retrace finer")]
    ResolutionInsufficient { found: usize, bound: u64 },
}

/// Where an unbounded arc leaves the chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcEnd {
    pub point: [f64; 2],
    /// Polygon side whose terms dominate at the exit.
    pub edge: Option<usize>,
    /// `⟨direction of the side, u⟩`, comparable with `log|t|` of its edge-polynomial roots.
    pub position: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadrantChart {
    pub quadrant: Quadrant,
    pub arcs: Vec<Polyline>,
    pub ovals: Vec<Polyline>,
    pub ends: Vec<[ArcEnd; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealCurveTopology {
    pub window: Window,
    pub resolution: usize,
    pub charts: Vec<QuadrantChart>,
    /// Components in `(ℝ*)²`: arcs plus ovals.
    pub components: usize,
    pub ovals: usize,
    pub unbounded: usize,
    /// `g + Σ d_k`.
    pub bound: u64,
}

impl RealCurveTopology {
    /// Per-quadrant `(arcs, ovals)`, the data compared between resolutions.
    pub fn signature(&self) -> Vec<(usize, usize)> {
        self.charts.iter().map(|c| (c.arcs.len(), c.ovals.len())).collect()
    }

    /// All traced points, in log coordinates (the image of `RA` under `Log`).
    pub fn log_points(&self) -> impl Iterator<Item = [f64; 2]> + '_ {
        self.charts
            .iter()
            .flat_map(|c| c.arcs.iter().chain(&c.ovals))
            .flat_map(|p| p.points.iter().copied())
    }
}

fn require_real(f: &LaurentPolynomial) -> Result<(), RealLocusError> {
    if f.is_real(1e-12) {
        Ok(())
    } else {
        Err(RealLocusError::NotReal)
    }
}

/// Real terms `(j, k, a)`.
fn real_terms(f: &LaurentPolynomial) -> Vec<(i64, i64, f64)> {
    f.terms().map(|(e, c)| (e.j, e.k, c.re)).collect()
}

/// `f(s1 e^{u1}, s2 e^{u2})` divided by its largest term, so values stay in `[-#terms, #terms]`.
fn normalized(terms: &[(i64, i64, f64)], q: Quadrant, u: [f64; 2]) -> f64 {
    let mut top = f64::NEG_INFINITY;
    for &(j, k, a) in terms {
        top = top.max(a.abs().ln() + j as f64 * u[0] + k as f64 * u[1]);
    }
    let mut s = 0.0;
    for &(j, k, a) in terms {
        let sign = a.signum() * if j % 2 != 0 { q.0 as f64 } else { 1.0 } * if k % 2 != 0 { q.1 as f64 } else { 1.0 };
        s += sign * (a.abs().ln() + j as f64 * u[0] + k as f64 * u[1] - top).exp();
    }
    s
}

/// Real roots of each side polynomial with their sign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisIncidence {
    pub edge: usize,
    pub d: u64,
    /// Real roots, ascending.
    pub roots: Vec<f64>,
    pub real_count: usize,
    pub simple: bool,
    /// Some root is within `1e-6` (relative) of another: multiplicity undecided.
    pub ambiguous: bool,
}

pub fn axis_intersections(f: &LaurentPolynomial) -> Result<Vec<AxisIncidence>, RealLocusError> {
    require_real(f)?;
    let polygon = f.newton_polygon();
    let mut out = Vec::new();
    for (k, e) in polygon.edges().iter().enumerate() {
        let p = f.edge_polynomial(k).expect("edge index in range");
        let all = roots::roots(&p, None).roots;
        let mut real = Vec::new();
        let mut ambiguous = false;
        for (i, z) in all.iter().enumerate() {
            let close = all
                .iter()
                .enumerate()
                .any(|(j, w)| j != i && (z - w).norm() <= MULTIPLE_ROOT * z.norm().max(w.norm()));
            if z.im.abs() <= 1e-9 * z.norm() {
                ambiguous |= close;
                real.push(z.re);
            } else if close && z.im.abs() <= 1e-4 * z.norm() {
                // a near-double pair that might be real
                ambiguous = true;
            }
        }
        real.sort_by(f64::total_cmp);
        out.push(AxisIncidence {
            edge: k,
            d: e.length,
            real_count: real.len(),
            simple: !ambiguous,
            roots: real,
            ambiguous,
        });
    }
    Ok(out)
}

/// Box around the tropical vertices and the tentacle lines of the real axis roots.
pub fn default_window(f: &LaurentPolynomial) -> Window {
    let core = Window::core(f, 0.0);
    let c = [0.5 * (core.x1_min + core.x1_max), 0.5 * (core.x2_min + core.x2_max)];
    let mut w = core;
    let polygon = f.newton_polygon();
    for (k, e) in polygon.edges().iter().enumerate() {
        let p = f.edge_polynomial(k).expect("edge index in range");
        let (d1, d2) = (e.direction.0 as f64, e.direction.1 as f64);
        let n2 = d1 * d1 + d2 * d2;
        for z in roots::roots(&p, None).roots {
            if z.norm() == 0.0 {
                continue;
            }
            let t = (z.norm().ln() - (d1 * c[0] + d2 * c[1])) / n2;
            let a = [c[0] + t * d1, c[1] + t * d2];
            w.x1_min = w.x1_min.min(a[0]);
            w.x1_max = w.x1_max.max(a[0]);
            w.x2_min = w.x2_min.min(a[1]);
            w.x2_max = w.x2_max.max(a[1]);
        }
    }
    w.grow(3.0 + (f.len() as f64).ln() + 1.0)
}

fn classify_end(terms: &[(i64, i64, f64)], polygon: &NewtonPolygon, u: [f64; 2]) -> ArcEnd {
    let level = |j: i64, k: i64, a: f64| a.abs().ln() + j as f64 * u[0] + k as f64 * u[1];
    let mut best: Option<(usize, f64)> = None;
    for (idx, e) in polygon.edges().iter().enumerate() {
        let on: Vec<bool> = terms
            .iter()
            .map(|&(j, k, _)| {
                let (dj, dk) = (j - e.start.j, k - e.start.k);
                dj * e.direction.1 - dk * e.direction.0 == 0
            })
            .collect();
        let mut top_on = f64::NEG_INFINITY;
        let mut top_off = f64::NEG_INFINITY;
        for (t, &o) in terms.iter().zip(&on) {
            let l = level(t.0, t.1, t.2);
            if o {
                top_on = top_on.max(l);
            } else {
                top_off = top_off.max(l);
            }
        }
        let m = top_on - top_off;
        if best.map_or(true, |b| m > b.1) {
            best = Some((idx, m));
        }
    }
    let (edge, margin) = best.expect("polygon has edges");
    let e = polygon.edges()[edge];
    ArcEnd {
        point: u,
        edge: (margin >= EXIT_MARGIN).then_some(edge),
        position: e.direction.0 as f64 * u[0] + e.direction.1 as f64 * u[1],
        margin,
    }
}

pub fn trace_topology(f: &LaurentPolynomial, window: Window, resolution: usize) -> Result<RealCurveTopology, RealLocusError> {
    require_real(f)?;
    let terms = real_terms(f);
    let polygon = f.newton_polygon();
    let xs = linspace(window.x1_min, window.x1_max, resolution);
    let ys = linspace(window.x2_min, window.x2_max, resolution);
    let charts: Vec<QuadrantChart> = QUADRANTS
        .iter()
        .map(|&q| {
            let mut values = Vec::with_capacity(xs.len() * ys.len());
            for &x in &xs {
                for &y in &ys {
                    values.push(normalized(&terms, q, [x, y]));
                }
            }
            let lines = contour::contour(
                &contour::Grid {
                    xs: &xs,
                    ys: &ys,
                    values: &values,
                },
                0.0,
            );
            let (ovals, arcs): (Vec<Polyline>, Vec<Polyline>) = lines.into_iter().partition(|p| p.closed);
            let ends = arcs
                .iter()
                .map(|a| {
                    [
                        classify_end(&terms, &polygon, a.points[0]),
                        classify_end(&terms, &polygon, *a.points.last().unwrap()),
                    ]
                })
                .collect();
            QuadrantChart {
                quadrant: q,
                arcs,
                ovals,
                ends,
            }
        })
        .collect();
    let unbounded = charts.iter().map(|c| c.arcs.len()).sum();
    let ovals = charts.iter().map(|c| c.ovals.len()).sum();
    let bound = polygon.component_bound();
    let components = unbounded + ovals;
    if !polygon.is_degenerate() && components as u64 > bound {
        return Err(RealLocusError::ResolutionInsufficient { found: components, bound });
    }
    Ok(RealCurveTopology {
        window,
        resolution,
        charts,
        components,
        ovals,
        unbounded,
        bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SingularKind {
    A1PlusIsolated,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub location: [f64; 2],
    pub kind: SingularKind,
    /// Numbers of positive and negative Hessian eigenvalues.
    pub signature: (u8, u8),
}

fn term_scale(terms: &[(i64, i64, f64)], x: f64, y: f64) -> f64 {
    terms
        .iter()
        .map(|&(j, k, a)| a.abs() * x.abs().powi(j as i32) * y.abs().powi(k as i32))
        .sum()
}

const SEED_GRID: usize = 160;
const SEED_BELOW: f64 = 0.2;

/// Singular points of `RA`: Newton on `∇f = 0` from small-`|f|` seeds, kept when `f` vanishes too.
pub fn find_real_singularities(f: &LaurentPolynomial, window: Window) -> Result<Vec<SingularPoint>, RealLocusError> {
    require_real(f)?;
    let terms = real_terms(f);
    let xs = linspace(window.x1_min, window.x1_max, SEED_GRID);
    let ys = linspace(window.x2_min, window.x2_max, SEED_GRID);
    let mut found: Vec<SingularPoint> = Vec::new();
    for &q in &QUADRANTS {
        let v: Vec<f64> = xs
            .iter()
            .flat_map(|&x| ys.iter().map(move |&y| (x, y)))
            .map(|(x, y)| normalized(&terms, q, [x, y]).abs())
            .collect();
        let n = SEED_GRID;
        for i in 1..n - 1 {
            for j in 1..n - 1 {
                let c = v[i * n + j];
                if c > SEED_BELOW {
                    continue;
                }
                let is_min = (i - 1..=i + 1).all(|a| (j - 1..=j + 1).all(|b| v[a * n + b] >= c));
                if !is_min {
                    continue;
                }
                let seed = [q.0 as f64 * xs[i].exp(), q.1 as f64 * ys[j].exp()];
                if let Some(p) = newton_critical(f, &terms, seed) {
                    if !found
                        .iter()
                        .any(|s| (s.location[0] - p.location[0]).abs() + (s.location[1] - p.location[1]).abs() < 1e-6 * (1.0 + p.location[0].abs() + p.location[1].abs()))
                    {
                        found.push(p);
                    }
                }
            }
        }
    }
    found.sort_by(|a, b| a.location[0].total_cmp(&b.location[0]).then(a.location[1].total_cmp(&b.location[1])));
    Ok(found)
}

fn newton_critical(f: &LaurentPolynomial, terms: &[(i64, i64, f64)], seed: [f64; 2]) -> Option<SingularPoint> {
    let (mut x, mut y) = (seed[0], seed[1]);
    for _ in 0..60 {
        let g = f.gradient_real(x, y);
        let h = f.hessian_real(x, y);
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dx = (h[1][1] * g[0] - h[0][1] * g[1]) / det;
        let dy = (h[0][0] * g[1] - h[1][0] * g[0]) / det;
        // stay inside the quadrant
        let mut t = 1.0;
        while t > 1e-6 && ((x - t * dx) * x <= 0.0 || (y - t * dy) * y <= 0.0) {
            t *= 0.5;
        }
        x -= t * dx;
        y -= t * dy;
        if (t * dx).abs() <= 1e-15 * x.abs() && (t * dy).abs() <= 1e-15 * y.abs() {
            break;
        }
    }
    let s = term_scale(terms, x, y);
    let g = f.gradient_real(x, y);
    if !(s.is_finite() && s > 0.0) {
        return None;
    }
    if f.eval_real(x, y).abs() > 1e-9 * s || (g[0] * x).abs().max((g[1] * y).abs()) > 1e-7 * s {
        return None;
    }
    let h = f.hessian_real(x, y);
    let tr = h[0][0] + h[1][1];
    let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    let disc = (0.25 * (h[0][0] - h[1][1]).powi(2) + h[0][1] * h[0][1]).sqrt();
    let (l1, l2) = (0.5 * tr + disc, 0.5 * tr - disc);
    let tol = 1e-8 * s / (x * y).abs();
    let signature = (
        [l1, l2].iter().filter(|&&l| l > tol).count() as u8,
        [l1, l2].iter().filter(|&&l| l < -tol).count() as u8,
    );
    let kind = if det > 0.0 && (signature == (2, 0) || signature == (0, 2)) {
        SingularKind::A1PlusIsolated
    } else {
        SingularKind::Other
    };
    Some(SingularPoint {
        location: [x, y],
        kind,
        signature,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Verdict {
    Harnack,
    SingularHarnack,
    NotHarnack(String),
    Undecided(String),
}

impl Verdict {
    pub fn is_harnack(&self) -> bool {
        matches!(self, Verdict::Harnack | Verdict::SingularHarnack)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnackVerdict {
    pub verdict: Verdict,
    /// Components in `(ℝ*)²`.
    pub components: usize,
    /// Components of the closure in the toric surface, when the gluing succeeded.
    pub compactified: Option<usize>,
    pub ovals: usize,
    pub unbounded: usize,
    pub a1_plus: usize,
    /// Whether the axis points on the exceptional component form consecutive blocks.
    pub axis_pattern: Option<bool>,
    pub g: u64,
    pub axis: Vec<AxisIncidence>,
}

/// Result of gluing arc ends through the axis roots.
#[derive(Debug, Clone, PartialEq)]
struct Gluing {
    /// Compactified components: classes of glued arcs, plus ovals.
    components: usize,
    /// Number of arc classes.
    arc_classes: usize,
    /// Side labels of the axis points in order along the arc class, when there is one class.
    cycle: Option<Vec<usize>>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, a: usize) -> usize {
        let mut r = a;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut a = a;
        while self.0[a] != r {
            let next = self.0[a];
            self.0[a] = r;
            a = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

fn quadrant_sign(q: Quadrant, dir: (i64, i64)) -> f64 {
    let s1 = if dir.0 % 2 != 0 { q.0 as f64 } else { 1.0 };
    let s2 = if dir.1 % 2 != 0 { q.1 as f64 } else { 1.0 };
    s1 * s2
}

fn glue(polygon: &NewtonPolygon, topo: &RealCurveTopology, axis: &[AxisIncidence]) -> Result<Gluing, String> {
    // arc ends as (arc index, end index)
    let mut arcs: Vec<[ArcEnd; 2]> = Vec::new();
    let mut arc_quadrant: Vec<Quadrant> = Vec::new();
    for c in &topo.charts {
        for e in &c.ends {
            arcs.push(*e);
            arc_quadrant.push(c.quadrant);
        }
    }
    if arcs.iter().flatten().any(|e| e.edge.is_none()) {
        return Err("an arc leaves the window away from every tentacle".into());
    }
    // axis point id -> the two arc ends through it
    let mut through: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for (k, edge) in polygon.edges().iter().enumerate() {
        for &q in &QUADRANTS {
            let sign = quadrant_sign(q, edge.direction);
            let mut ends: Vec<(f64, usize, usize)> = Vec::new();
            for (a, pair) in arcs.iter().enumerate() {
                if arc_quadrant[a] != q {
                    continue;
                }
                for (i, e) in pair.iter().enumerate() {
                    if e.edge == Some(k) {
                        ends.push((e.position, a, i));
                    }
                }
            }
            let roots: Vec<(f64, usize)> = axis[k]
                .roots
                .iter()
                .enumerate()
                .filter(|(_, &t)| t.signum() == sign)
                .map(|(i, &t)| (t.abs().ln(), i))
                .collect();
            if ends.len() != roots.len() {
                return Err(format!(
                    "side {k}, quadrant {q:?}: {} arc ends but {} axis roots",
                    ends.len(),
                    roots.len()
                ));
            }
            ends.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut roots = roots;
            roots.sort_by(|a, b| a.0.total_cmp(&b.0));
            for (e, r) in ends.iter().zip(&roots) {
                if (e.0 - r.0).abs() > EXIT_MISMATCH {
                    return Err(format!("side {k}: arc exit {:.3} far from axis root {:.3}", e.0, r.0));
                }
                through.entry((k, r.1)).or_default().push((e.1, e.2));
            }
        }
    }
    let mut uf = UnionFind((0..arcs.len()).collect());
    for ends in through.values() {
        if ends.len() != 2 {
            return Err(format!("an axis point carries {} arc ends", ends.len()));
        }
        uf.union(ends[0].0, ends[1].0);
    }
    let mut roots: Vec<usize> = (0..arcs.len()).map(|a| uf.find(a)).collect();
    roots.sort();
    roots.dedup();
    let arc_classes = roots.len();

    let cycle = (arc_classes == 1 && !through.is_empty()).then(|| {
        let at_end: BTreeMap<(usize, usize), (usize, usize)> = through
            .iter()
            .flat_map(|(&p, v)| v.iter().map(move |&e| (e, p)))
            .collect();
        let start = *through.keys().next().unwrap();
        let mut labels = vec![start.0];
        let mut came = through[&start][0];
        loop {
            // along the arc to its other end
            let other = (came.0, 1 - came.1);
            let next = at_end[&other];
            if next == start {
                break;
            }
            labels.push(next.0);
            came = *through[&next].iter().find(|&&e| e != other).unwrap();
            if labels.len() > through.len() {
                break;
            }
        }
        labels
    });
    Ok(Gluing {
        components: arc_classes + topo.ovals,
        arc_classes,
        cycle,
    })
}

/// Cyclic label sequence made of one block per side, `d_k` long, in polygon order either way.
fn blocks_are_consecutive(labels: &[usize], polygon: &NewtonPolygon) -> bool {
    let n = polygon.edges().len();
    if labels.is_empty() {
        return false;
    }
    // rotate so that the sequence starts at a block boundary
    let m = labels.len();
    let Some(s) = (0..m).find(|&i| labels[i] != labels[(i + m - 1) % m]) else {
        return n == 1;
    };
    let rotated: Vec<usize> = (0..m).map(|i| labels[(s + i) % m]).collect();
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for &l in &rotated {
        match runs.last_mut() {
            Some(r) if r.0 == l => r.1 += 1,
            _ => runs.push((l, 1)),
        }
    }
    if runs.len() != n || runs.iter().any(|&(l, c)| c as u64 != polygon.edges()[l].length) {
        return false;
    }
    let order: Vec<usize> = runs.iter().map(|r| r.0).collect();
    let forward = (0..n).all(|i| order[(i + 1) % n] == (order[i] + 1) % n);
    let backward = (0..n).all(|i| order[(i + 1) % n] == (order[i] + n - 1) % n);
    forward || backward
}

/// Full analysis at one window; topology is traced at `resolution` and `2·resolution`.
pub fn harnack_analysis(
    f: &LaurentPolynomial,
    window: Window,
    resolution: usize,
) -> Result<(HarnackVerdict, RealCurveTopology), RealLocusError> {
    require_real(f)?;
    let polygon = f.newton_polygon();
    let g = polygon.interior_count();
    let axis = axis_intersections(f)?;
    let coarse = trace_topology(f, window, resolution);
    let fine = trace_topology(f, window, 2 * resolution);
    let (coarse, fine) = match (coarse, fine) {
        (Ok(c), Ok(f)) => (c, f),
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    let singular = find_real_singularities(f, window)?;
    let a1_plus = singular.iter().filter(|s| s.kind == SingularKind::A1PlusIsolated).count();

    let mut v = HarnackVerdict {
        verdict: Verdict::Undecided(String::new()),
        components: fine.components,
        compactified: None,
        ovals: fine.ovals,
        unbounded: fine.unbounded,
        a1_plus,
        axis_pattern: None,
        g,
        axis: axis.clone(),
    };
    let verdict = 'v: {
        if polygon.is_degenerate() {
            break 'v Verdict::Undecided("Newton polygon has zero area".into());
        }
        if axis.iter().any(|a| a.ambiguous) {
            break 'v Verdict::Undecided("near-multiple root of a side polynomial".into());
        }
        if let Some(a) = axis.iter().find(|a| (a.real_count as u64) < a.d) {
            break 'v Verdict::NotHarnack(format!(
                "side {} meets its axis in {} real points, fewer than d = {}",
                a.edge, a.real_count, a.d
            ));
        }
        if singular.iter().any(|s| s.kind == SingularKind::Other) {
            break 'v Verdict::NotHarnack("singular point that is not an isolated real double point".into());
        }
        if coarse.signature() != fine.signature() {
            break 'v Verdict::Undecided(format!(
                "topology differs between resolutions {} and {}",
                resolution,
                2 * resolution
            ));
        }
        let gl = match glue(&polygon, &fine, &axis) {
            Ok(gl) => gl,
            Err(e) => break 'v Verdict::Undecided(e),
        };
        v.compactified = Some(gl.components);
        if gl.arc_classes != 1 {
            break 'v Verdict::NotHarnack(format!("axis points spread over {} components", gl.arc_classes));
        }
        let pattern = gl.cycle.as_deref().is_some_and(|c| blocks_are_consecutive(c, &polygon));
        v.axis_pattern = Some(pattern);
        if !pattern {
            break 'v Verdict::NotHarnack("axis points are not in consecutive blocks".into());
        }
        let total = gl.components as u64 + a1_plus as u64;
        if total != g + 1 {
            break 'v Verdict::NotHarnack(format!(
                "{} compactified components (with {} contracted ovals), expected g + 1 = {}",
                gl.components,
                a1_plus,
                g + 1
            ));
        }
        if a1_plus > 0 {
            Verdict::SingularHarnack
        } else {
            Verdict::Harnack
        }
    };
    v.verdict = verdict;
    Ok((v, fine))
}

pub fn harnack_verdict(f: &LaurentPolynomial) -> Result<HarnackVerdict, RealLocusError> {
    let window = default_window(f);
    harnack_analysis(f, window, DEFAULT_RESOLUTION).map(|r| r.0)
}

#[derive(Serialize)]
struct TopologyExport<'a> {
    quadrants: &'a [QuadrantChart],
    components: usize,
    ovals: usize,
    axis_incidence: &'a [AxisIncidence],
    verdict: &'a Verdict,
}

pub fn topology_json(topo: &RealCurveTopology, verdict: &HarnackVerdict) -> String {
    serde_json::to_string(&TopologyExport {
        quadrants: &topo.charts,
        components: topo.components,
        ovals: topo.ovals,
        axis_incidence: &verdict.axis,
        verdict: &verdict.verdict,
    })
    .expect("topology serializes")
}
