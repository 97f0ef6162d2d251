//! Harnack polynomials by combinatorial patchworking.
//!
//! A regular primitive triangulation of the polygon together with a sign at every lattice point
//! gives the family `f_t = Σ ε(j,k)·t^{ν(j,k)}·x^j y^k`. Candidates are accepted only when the
//! real-locus verifier says Harnack at two consecutive values of `t`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::poly::{Exponent, LaurentPolynomial, NewtonPolygon};
use crate::real_locus::{harnack_verdict, HarnackVerdict, Verdict};

pub const DEFAULT_T_SCHEDULE: [f64; 5] = [0.5, 0.2, 0.1, 0.05, 0.02];
/// Exhaustive search is limited to this many lattice points.
pub const EXHAUSTIVE_LIMIT: usize = 16;
const LIFTING_RETRIES: u64 = 64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ForgeError {
    #[error("Newton polygon has zero area")]
    DegeneratePolygon,
    #[error("no primitive regular triangulation after {0} liftings")]
    RetryCapExceeded(u64),
    #[error("{0} lattice points is too many for exhaustive search")]
    TooManyPoints(usize),
    #[error("t must lie in (0, 1), got {0}")]
    BadT(f64),
    #[error("no Harnack candidate found among {tried} sign distributions; best partial verdicts: {best:?}")]
    NotFound { tried: usize, best: Vec<String> },
    #[error("unknown curated entry {0:?}")]
    UnknownName(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimitiveTriangulation {
    pub polygon: NewtonPolygon,
    pub triangles: Vec<[Exponent; 3]>,
    /// Integer heights `ν(j,k)` of the lifting, in lattice-point order.
    pub lifting: Vec<(Exponent, i64)>,
}

impl PrimitiveTriangulation {
    pub fn height(&self, p: Exponent) -> Option<i64> {
        self.lifting.iter().find(|(q, _)| *q == p).map(|&(_, h)| h)
    }
}

/// `ε(j,k)` on every lattice point of the polygon, in lattice-point order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignDistribution(pub Vec<(Exponent, i8)>);

impl SignDistribution {
    pub fn from_fn(polygon: &NewtonPolygon, mut f: impl FnMut(Exponent) -> i8) -> Self {
        Self(polygon.lattice_points().into_iter().map(|p| (p, f(p))).collect())
    }

    /// The seeded rule `(−1)^{jk}`.
    pub fn checkerboard(polygon: &NewtonPolygon) -> Self {
        Self::from_fn(polygon, |p| if (p.j * p.k).rem_euclid(2) == 0 { 1 } else { -1 })
    }

    pub fn get(&self, p: Exponent) -> Option<i8> {
        self.0.iter().find(|(q, _)| *q == p).map(|&(_, s)| s)
    }

    /// The image under `(x, y) ↦ (s1·x, s2·y)`, times `c`.
    pub fn flipped(&self, s1: i8, s2: i8, c: i8) -> Self {
        Self(
            self.0
                .iter()
                .map(|&(p, s)| {
                    let a = if p.j.rem_euclid(2) == 1 { s1 } else { 1 };
                    let b = if p.k.rem_euclid(2) == 1 { s2 } else { 1 };
                    (p, s * a * b * c)
                })
                .collect(),
        )
    }

    fn signs(&self) -> Vec<i8> {
        self.0.iter().map(|&(_, s)| s).collect()
    }

    /// Smallest sign vector in the orbit of quadrant flips and global sign.
    fn canonical(&self) -> Vec<i8> {
        let mut best = self.signs();
        for s1 in [1, -1] {
            for s2 in [1, -1] {
                for c in [1, -1] {
                    best = best.min(self.flipped(s1, s2, c).signs());
                }
            }
        }
        best
    }
}

/// `det` of the lifted triple `(b−a, c−a, d−a)`; positive when `d` lies above the plane of a ccw triangle.
fn orient(a: (i64, i64, i64), b: (i64, i64, i64), c: (i64, i64, i64), d: (i64, i64, i64)) -> i128 {
    let u = [(b.0 - a.0) as i128, (b.1 - a.1) as i128, (b.2 - a.2) as i128];
    let v = [(c.0 - a.0) as i128, (c.1 - a.1) as i128, (c.2 - a.2) as i128];
    let w = [(d.0 - a.0) as i128, (d.1 - a.1) as i128, (d.2 - a.2) as i128];
    u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0]) + u[2] * (v[0] * w[1] - v[1] * w[0])
}

fn lower_hull(points: &[(i64, i64, i64)]) -> Option<Vec<[usize; 3]>> {
    let n = points.len();
    let mut faces = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let (pa, pb, pc) = (points[a], points[b], points[c]);
                let cross = (pb.0 - pa.0) * (pc.1 - pa.1) - (pb.1 - pa.1) * (pc.0 - pa.0);
                if cross == 0 {
                    continue;
                }
                let (b, c) = if cross > 0 { (b, c) } else { (c, b) };
                let mut lower = true;
                let mut tie = false;
                for d in 0..n {
                    if d == a || d == b || d == c {
                        continue;
                    }
                    let o = orient(points[a], points[b], points[c], points[d]);
                    tie |= o == 0;
                    if o < 0 {
                        lower = false;
                        break;
                    }
                }
                if lower && tie {
                    // a lower face through four coplanar lifted points: not generic
                    return None;
                }
                if lower {
                    faces.push([a, b, c]);
                }
            }
        }
    }
    Some(faces)
}

/// Lower-hull triangulation of a perturbed convex quadratic lifting, retried until primitive.
pub fn regular_triangulation(polygon: &NewtonPolygon, seed: u64) -> Result<PrimitiveTriangulation, ForgeError> {
    if polygon.is_degenerate() {
        return Err(ForgeError::DegeneratePolygon);
    }
    let pts = polygon.lattice_points();
    let n = pts.len() as i64;
    // center the quadratic so heights stay small
    let cj = (pts.iter().map(|p| p.j).sum::<i64>() as f64 / n as f64).round() as i64;
    let ck = (pts.iter().map(|p| p.k).sum::<i64>() as f64 / n as f64).round() as i64;
    for attempt in 0..LIFTING_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let mut heights: Vec<i64> = pts
            .iter()
            .map(|p| 2 * ((p.j - cj).pow(2) + (p.k - ck).pow(2)) + rng.gen_range(0..=1))
            .collect();
        let lo = *heights.iter().min().unwrap();
        heights.iter_mut().for_each(|h| *h -= lo);
        let lifted: Vec<(i64, i64, i64)> = pts.iter().zip(&heights).map(|(p, &h)| (p.j, p.k, h)).collect();
        let Some(faces) = lower_hull(&lifted) else { continue };
        let twice: Vec<i64> = faces
            .iter()
            .map(|f| {
                let (a, b, c) = (lifted[f[0]], lifted[f[1]], lifted[f[2]]);
                (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
            })
            .collect();
        if twice.iter().any(|&t| t != 1) || twice.iter().sum::<i64>() as u64 != polygon.twice_area() {
            continue;
        }
        return Ok(PrimitiveTriangulation {
            polygon: polygon.clone(),
            triangles: faces.iter().map(|f| [pts[f[0]], pts[f[1]], pts[f[2]]]).collect(),
            lifting: pts.iter().copied().zip(heights).collect(),
        });
    }
    Err(ForgeError::RetryCapExceeded(LIFTING_RETRIES))
}

pub fn viro_polynomial(tri: &PrimitiveTriangulation, signs: &SignDistribution, t: f64) -> Result<LaurentPolynomial, ForgeError> {
    if !(t > 0.0 && t < 1.0) {
        return Err(ForgeError::BadT(t));
    }
    let terms = tri.lifting.iter().map(|&(p, h)| {
        let s = signs.get(p).unwrap_or(1) as f64;
        (p, s * t.powi(h as i32))
    });
    Ok(LaurentPolynomial::from_real_terms(terms).expect("nonzero coefficients"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignStrategy {
    /// The checkerboard rule and its symmetry images only.
    Seeded,
    /// Seeded candidates first, then every distribution modulo quadrant flips.
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub t_schedule: Vec<f64>,
    pub strategy: SignStrategy,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            t_schedule: DEFAULT_T_SCHEDULE.to_vec(),
            strategy: SignStrategy::Exhaustive,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnackCandidate {
    pub triangulation: PrimitiveTriangulation,
    pub signs: SignDistribution,
    /// The larger of the two consecutive `t` values that both verified.
    pub t: f64,
    pub confirmed_at: f64,
    pub polynomial: LaurentPolynomial,
    pub verdict: HarnackVerdict,
}

fn seeded_candidates(polygon: &NewtonPolygon) -> Vec<SignDistribution> {
    let base = SignDistribution::checkerboard(polygon);
    let transposed = SignDistribution::from_fn(polygon, |p| {
        base.get(Exponent::new(p.k, p.j)).unwrap_or(if (p.j * p.k).rem_euclid(2) == 0 { 1 } else { -1 })
    });
    let mut out: Vec<SignDistribution> = Vec::new();
    for b in [&base, &transposed] {
        for s1 in [1, -1] {
            for s2 in [1, -1] {
                let c = b.flipped(s1, s2, 1);
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
    }
    out
}

fn exhaustive_candidates(polygon: &NewtonPolygon) -> Vec<SignDistribution> {
    let pts = polygon.lattice_points();
    let n = pts.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let d = SignDistribution(
            pts.iter()
                .enumerate()
                .map(|(i, &p)| (p, if mask >> i & 1 == 1 { -1 } else { 1 }))
                .collect(),
        );
        if d.canonical() == d.signs() {
            out.push(d);
        }
    }
    out
}

enum Outcome {
    Found(HarnackCandidate),
    Failed(String),
}

fn try_candidate(tri: &PrimitiveTriangulation, signs: &SignDistribution, schedule: &[f64]) -> Outcome {
    let mut previous: Option<(f64, LaurentPolynomial, HarnackVerdict)> = None;
    let mut last = String::from("no t tried");
    for &t in schedule {
        let f = match viro_polynomial(tri, signs, t) {
            Ok(f) => f,
            Err(e) => return Outcome::Failed(e.to_string()),
        };
        let v = match harnack_verdict(&f) {
            Ok(v) => v,
            Err(e) => {
                last = format!("t = {t}: {e}");
                previous = None;
                continue;
            }
        };
        if v.verdict == Verdict::Harnack {
            if let Some((t0, f0, v0)) = &previous {
                if v0.components == v.components && v0.compactified == v.compactified {
                    return Outcome::Found(HarnackCandidate {
                        triangulation: tri.clone(),
                        signs: signs.clone(),
                        t: *t0,
                        confirmed_at: t,
                        polynomial: f0.clone(),
                        verdict: v0.clone(),
                    });
                }
            }
            previous = Some((t, f, v));
        } else {
            last = format!("t = {t}: {:?}", v.verdict);
            previous = None;
        }
    }
    Outcome::Failed(last)
}

/// First candidate (in a fixed order) that verifies as Harnack at two consecutive `t`.
pub fn search_harnack(polygon: &NewtonPolygon, options: &SearchOptions) -> Result<HarnackCandidate, ForgeError> {
    if polygon.is_degenerate() {
        return Err(ForgeError::DegeneratePolygon);
    }
    let n = polygon.lattice_points().len();
    if options.strategy == SignStrategy::Exhaustive && n > EXHAUSTIVE_LIMIT {
        return Err(ForgeError::TooManyPoints(n));
    }
    let tri = regular_triangulation(polygon, options.seed)?;
    let mut best = Vec::new();
    let mut tried = 0;
    let mut batches = vec![seeded_candidates(polygon)];
    if options.strategy == SignStrategy::Exhaustive {
        let seen: Vec<Vec<i8>> = batches[0].iter().map(|s| s.canonical()).collect();
        batches.push(
            exhaustive_candidates(polygon)
                .into_iter()
                .filter(|d| !seen.contains(&d.signs()))
                .collect(),
        );
    }
    for batch in batches {
        tried += batch.len();
        let outcomes: Vec<Outcome> = batch
            .par_iter()
            .map(|s| try_candidate(&tri, s, &options.t_schedule))
            .collect();
        for o in outcomes {
            match o {
                Outcome::Found(c) => return Ok(c),
                Outcome::Failed(why) if best.len() < 8 => best.push(why),
                Outcome::Failed(_) => {}
            }
        }
    }
    Err(ForgeError::NotFound { tried, best })
}

/// One line of the curated store.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredHarnack {
    pub name: String,
    pub polygon: Vec<Exponent>,
    pub signs: Option<SignDistribution>,
    pub lifting: Option<Vec<(Exponent, i64)>>,
    pub t: Option<f64>,
    pub polynomial: String,
    pub verdict: Verdict,
    pub components: usize,
    pub report_hash: String,
}

impl StoredHarnack {
    pub fn from_candidate(name: &str, c: &HarnackCandidate) -> Self {
        Self {
            name: name.to_string(),
            polygon: c.triangulation.polygon.vertices().to_vec(),
            signs: Some(c.signs.clone()),
            lifting: Some(c.triangulation.lifting.clone()),
            t: Some(c.t),
            polynomial: c.polynomial.to_json(),
            verdict: c.verdict.verdict.clone(),
            components: c.verdict.components,
            report_hash: verdict_hash(&c.verdict),
        }
    }

    pub fn polynomial(&self) -> LaurentPolynomial {
        LaurentPolynomial::from_json(&self.polynomial).expect("stored polynomial parses")
    }
}

pub fn verdict_hash(v: &HarnackVerdict) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(serde_json::to_vec(v).expect("verdict serializes")))
}

const STORE: &str = include_str!("../data/harnack.jsonl");

pub fn stored_entries() -> Vec<StoredHarnack> {
    STORE
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).expect("curated store is valid JSON lines"))
        .collect()
}

pub fn known_names() -> Vec<String> {
    stored_entries().into_iter().map(|e| e.name).collect()
}

pub fn known_harnack(name: &str) -> Result<LaurentPolynomial, ForgeError> {
    stored_entries()
        .into_iter()
        .find(|e| e.name == name)
        .map(|e| e.polynomial())
        .ok_or_else(|| ForgeError::UnknownName(name.to_string()))
}
