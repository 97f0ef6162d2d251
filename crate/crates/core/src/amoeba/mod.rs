//! The amoeba `Log(A)` of a curve: membership, fibers of `Log`, rasters and area.

mod area;
mod raster;
mod sweep;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::poly::{Exponent, LaurentPolynomial};

pub use area::{area_estimate, area_ratio, column_slice_length, AreaEstimate, AREA_CAP_FACTOR};
pub use raster::{rasterize, AmoebaRaster, Cell, RasterExport};
pub use sweep::{ColumnForm, ColumnSweep, FiberPoint};

/// Default number of `φ` samples for a fiber sweep.
pub const DEFAULT_SWEEP: usize = 1024;
/// Minimum branch gap under which a sweep verdict is not trusted.
pub const UNDECIDED_GAP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogPoint {
    pub x1: f64,
    pub x2: f64,
}

impl LogPoint {
    pub fn new(x1: f64, x2: f64) -> Self {
        Self { x1, x2 }
    }
}

/// Axis-aligned rectangle in log coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x1_min: f64,
    pub x1_max: f64,
    pub x2_min: f64,
    pub x2_max: f64,
}

impl Window {
    pub fn new(x1_min: f64, x1_max: f64, x2_min: f64, x2_max: f64) -> Self {
        Self {
            x1_min,
            x1_max,
            x2_min,
            x2_max,
        }
    }

    pub fn square(half: f64) -> Self {
        Self::new(-half, half, -half, half)
    }

    pub fn is_empty(&self) -> bool {
        !(self.x1_max > self.x1_min && self.x2_max > self.x2_min)
    }

    pub fn grow(&self, by: f64) -> Self {
        Self::new(self.x1_min - by, self.x1_max + by, self.x2_min - by, self.x2_max + by)
    }

    pub fn width(&self) -> f64 {
        self.x1_max - self.x1_min
    }

    pub fn height(&self) -> f64 {
        self.x2_max - self.x2_min
    }

    pub fn contains(&self, p: LogPoint) -> bool {
        (self.x1_min..=self.x1_max).contains(&p.x1) && (self.x2_min..=self.x2_max).contains(&p.x2)
    }

    /// Bounding box of the tropical vertices of `f`, grown by `margin`.
    pub fn core(f: &LaurentPolynomial, margin: f64) -> Self {
        let v = f.tropical_vertices();
        if v.is_empty() {
            return Self::square(margin);
        }
        let mut w = Self::new(v[0][0], v[0][0], v[0][1], v[0][1]);
        for p in &v[1..] {
            w.x1_min = w.x1_min.min(p[0]);
            w.x1_max = w.x1_max.max(p[0]);
            w.x2_min = w.x2_min.min(p[1]);
            w.x2_max = w.x2_max.max(p[1]);
        }
        w.grow(margin)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AmoebaError {
    #[error("Newton polygon has zero area")]
    DegenerateNewtonPolygon,
    #[error("sweep resolution {0} below the minimum of 64")]
    ResolutionTooLow(usize),
    #[error("root branches collide within the sweep resolution at x1 = {x1}; increase n")]
    BranchTrackingFailure { x1: f64 },
    #[error("the polynomial vanishes on a whole circle of the fiber over x1 = {x1}")]
    DegenerateFiber { x1: f64 },
    #[error("membership undecided at ({}, {}): branch gap {gap:e}", .at.x1, .at.x2)]
    Undecided { at: LogPoint, gap: f64 },
    #[error("area did not converge; last estimates {last:?}")]
    NoConvergence { last: [f64; 2] },
    #[error("area estimate {area} exceeds the bound {bound}; membership is broken")]
    AreaBoundViolated { area: f64, bound: f64 },
    #[error("every sample point failed: {0}")]
    AllSamplesFailed(String),
}

fn require_area(f: &LaurentPolynomial) -> Result<(), AmoebaError> {
    if f.newton_polygon().is_degenerate() {
        Err(AmoebaError::DegenerateNewtonPolygon)
    } else {
        Ok(())
    }
}

/// The solutions of `f = 0` on the torus `Log⁻¹(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusFiberSolutions {
    pub base: LogPoint,
    pub solutions: Vec<FiberPoint>,
    pub sweep_resolution: usize,
    /// Odd count: `x` sits on (or numerically at) a fold.
    pub tangential: bool,
}

impl TorusFiberSolutions {
    pub fn count(&self) -> usize {
        self.solutions.len()
    }
}

pub fn fiber_solutions(f: &LaurentPolynomial, x: LogPoint, n: usize) -> Result<TorusFiberSolutions, AmoebaError> {
    require_area(f)?;
    if n < 64 {
        return Err(AmoebaError::ResolutionTooLow(n));
    }
    let sweep = ColumnSweep::new(f, x.x1, n);
    fiber_from_sweep(&sweep, x, n)
}

fn fiber_from_sweep(sweep: &ColumnSweep, x: LogPoint, n: usize) -> Result<TorusFiberSolutions, AmoebaError> {
    if sweep.is_degenerate() {
        return Err(AmoebaError::DegenerateFiber { x1: x.x1 });
    }
    let solutions = sweep
        .solutions(x.x2)
        .map_err(|_| AmoebaError::BranchTrackingFailure { x1: x.x1 })?;
    Ok(TorusFiberSolutions {
        base: x,
        tangential: solutions.len() % 2 == 1,
        solutions,
        sweep_resolution: n,
    })
}

/// Why a point is outside the amoeba.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum OutCertificate {
    /// One term exceeds the sum of the moduli of all others.
    DominantTerm(Exponent),
    /// No branch of the fiber sweep reaches the level; `gap` is the distance to the nearest one.
    SweepGap { gap: f64, resolution: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Membership {
    In(Vec<FiberPoint>),
    Out(OutCertificate),
}

impl Membership {
    pub fn is_in(&self) -> bool {
        matches!(self, Membership::In(_))
    }
}

/// The term whose modulus at `x` exceeds the sum of the others, if any.
pub fn dominating_term(f: &LaurentPolynomial, x: LogPoint) -> Option<Exponent> {
    let mut logs: Vec<(Exponent, f64)> = f
        .terms()
        .map(|(e, c)| (e, c.norm().ln() + e.j as f64 * x.x1 + e.k as f64 * x.x2))
        .collect();
    logs.sort_by(|a, b| b.1.total_cmp(&a.1));
    let (top, lt) = logs[0];
    let rest: f64 = logs[1..].iter().map(|&(_, l)| (l - lt).exp()).sum();
    (rest < 1.0).then_some(top)
}

pub fn membership(f: &LaurentPolynomial, x: LogPoint) -> Result<Membership, AmoebaError> {
    membership_at(f, x, DEFAULT_SWEEP)
}

pub fn membership_at(f: &LaurentPolynomial, x: LogPoint, n: usize) -> Result<Membership, AmoebaError> {
    require_area(f)?;
    if let Some(e) = dominating_term(f, x) {
        return Ok(Membership::Out(OutCertificate::DominantTerm(e)));
    }
    let sweep = ColumnSweep::new(f, x.x1, n);
    if let Some(&phi) = sweep.degenerate_angles().first() {
        // the whole circle {z1 = e^{x1+iφ}} × T¹ is on the curve
        return Ok(Membership::In(vec![FiberPoint { phi, psi: 0.0 }]));
    }
    match sweep.solutions(x.x2) {
        Ok(s) if !s.is_empty() => Ok(Membership::In(s)),
        Ok(_) => {
            let gap = sweep.level_gap(x.x2);
            if gap < UNDECIDED_GAP {
                Err(AmoebaError::Undecided { at: x, gap })
            } else {
                Ok(Membership::Out(OutCertificate::SweepGap { gap, resolution: n }))
            }
        }
        Err(_) => Err(AmoebaError::BranchTrackingFailure { x1: x.x1 }),
    }
}

/// Result of a fiber-count survey.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberCount {
    pub max_count: usize,
    pub witness: Option<LogPoint>,
    /// Final per-sample counts (after re-sampling odd ones), `None` where the sweep failed.
    pub counts: Vec<Option<usize>>,
    pub resampled: usize,
    /// Samples still odd after every re-sampling attempt.
    pub odd: usize,
}

const RESAMPLE_TRIES: usize = 4;
const RESAMPLE_RADIUS: f64 = 1e-3;

pub fn max_fiber_count(f: &LaurentPolynomial, samples: &[LogPoint], n: usize) -> Result<FiberCount, AmoebaError> {
    require_area(f)?;
    let results: Vec<(Result<(usize, LogPoint), AmoebaError>, usize)> = samples
        .par_iter()
        .enumerate()
        .map(|(i, &p)| {
            let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
            let mut at = p;
            let mut tries = 0;
            loop {
                match fiber_solutions(f, at, n) {
                    Ok(s) if s.tangential && tries < RESAMPLE_TRIES => {
                        tries += 1;
                        at = LogPoint::new(
                            p.x1 + rng.gen_range(-RESAMPLE_RADIUS..RESAMPLE_RADIUS),
                            p.x2 + rng.gen_range(-RESAMPLE_RADIUS..RESAMPLE_RADIUS),
                        );
                    }
                    Ok(s) => return (Ok((s.count(), at)), tries),
                    // a circle in the fiber is an infinite count
                    Err(AmoebaError::DegenerateFiber { .. }) => return (Ok((usize::MAX, at)), tries),
                    Err(e) => return (Err(e), tries),
                }
            }
        })
        .collect();

    let mut out = FiberCount {
        max_count: 0,
        witness: None,
        counts: Vec::with_capacity(samples.len()),
        resampled: 0,
        odd: 0,
    };
    let mut last_err = None;
    for (r, tries) in results {
        out.resampled += (tries > 0) as usize;
        match r {
            Ok((c, at)) => {
                if c != usize::MAX && c % 2 == 1 {
                    out.odd += 1;
                }
                if out.witness.is_none() || c > out.max_count {
                    out.max_count = c;
                    out.witness = Some(at);
                }
                out.counts.push(Some(c));
            }
            Err(e) => {
                out.counts.push(None);
                last_err = Some(e);
            }
        }
    }
    if out.witness.is_none() {
        if let Some(e) = last_err {
            return Err(AmoebaError::AllSamplesFailed(e.to_string()));
        }
    }
    Ok(out)
}

/// Random points of the amoeba inside `window`, at least `margin` away (vertically) from the
/// slice ends so that they avoid the fold locus. Returns fewer points only if the amoeba
/// misses the window.
pub fn sample_in_points(f: &LaurentPolynomial, window: Window, count: usize, margin: f64, seed: u64) -> Vec<LogPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let form = ColumnForm::new(f);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < 50 * count.max(1) {
        attempts += 1;
        let x1 = rng.gen_range(window.x1_min..window.x1_max);
        let sweep = ColumnSweep::from_form(form.clone(), x1, 256);
        if sweep.is_degenerate() {
            continue;
        }
        let pieces: Vec<(f64, f64)> = sweep
            .intervals()
            .into_iter()
            .map(|(a, b)| ((a + margin).max(window.x2_min), (b - margin).min(window.x2_max)))
            .filter(|(a, b)| b > a)
            .collect();
        let total: f64 = pieces.iter().map(|(a, b)| b - a).sum();
        if total <= 0.0 {
            continue;
        }
        let mut t = rng.gen_range(0.0..total);
        for (a, b) in pieces {
            if t <= b - a {
                out.push(LogPoint::new(x1, a + t));
                break;
            }
            t -= b - a;
        }
    }
    out
}
