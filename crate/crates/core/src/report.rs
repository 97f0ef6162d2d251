//! The maximality report: area ratio, fiber counts and the real/Harnack test side by side,
//! with a check that the amoeba outline and the logarithmic image of the real curve agree.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::amoeba::{
    area_ratio, max_fiber_count, rasterize, sample_in_points, AmoebaError, AmoebaRaster, Cell, LogPoint, Window,
};
use crate::poly::{real_up_to_constant, LaurentPolynomial, RealityWitness};
use crate::real_locus::{default_window, harnack_analysis, trace_topology, HarnackVerdict, RealLocusError, Verdict};

pub const MAXIMAL_RATIO: f64 = 0.95;
pub const NON_MAXIMAL_RATIO: f64 = 0.9;
/// Largest two-sided distance, in raster cells, accepted between `∂A` and `Log(RA)`.
pub const BOUNDARY_CELLS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Fast,
    #[default]
    Default,
    Thorough,
}

impl std::str::FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fast" => Ok(Profile::Fast),
            "default" => Ok(Profile::Default),
            "thorough" => Ok(Profile::Thorough),
            _ => Err(format!("unknown profile {s:?}")),
        }
    }
}

/// What a profile buys.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub raster: usize,
    pub fiber_samples: usize,
    pub fiber_resolution: usize,
    pub area_tol: f64,
    pub locus_resolution: usize,
    pub seed: u64,
}

impl Profile {
    pub fn budget(self) -> Budget {
        match self {
            Profile::Fast => Budget {
                raster: 128,
                fiber_samples: 50,
                fiber_resolution: 256,
                area_tol: 0.02,
                locus_resolution: 256,
                seed: 0,
            },
            Profile::Default => Budget {
                raster: 256,
                fiber_samples: 200,
                fiber_resolution: 1024,
                area_tol: 0.02,
                locus_resolution: 512,
                seed: 0,
            },
            Profile::Thorough => Budget {
                raster: 512,
                fiber_samples: 400,
                fiber_resolution: 2048,
                area_tol: 0.01,
                locus_resolution: 512,
                seed: 0,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaPart {
    pub ratio: Option<f64>,
    pub area: Option<f64>,
    pub converged: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberPart {
    /// `None` when every sample failed; `usize::MAX` stands for a circle in the fiber.
    pub max_count: Option<usize>,
    pub witness: Option<LogPoint>,
    pub samples: usize,
    pub failed: usize,
    pub odd: usize,
    pub error: Option<String>,
}

/// Two-sided cell distance between the raster outline and the cells met by `Log(RA)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryIdentity {
    pub resolution: usize,
    pub window: Window,
    /// Largest distance from an outline cell to the real locus.
    pub outline_to_locus: usize,
    /// Largest distance from a real-locus cell to the outline.
    pub locus_to_outline: usize,
    pub distance: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Consistency {
    ConsistentMaximal,
    ConsistentNonMaximal,
    Inconsistent(String),
    Undecided(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalityReport {
    pub polynomial: String,
    pub profile: Profile,
    pub area: AreaPart,
    pub fibers: FiberPart,
    pub reality: Option<RealityWitness>,
    pub harnack: Option<HarnackVerdict>,
    pub harnack_error: Option<String>,
    pub boundary_identity: Option<BoundaryIdentity>,
    pub consistency: Consistency,
}

impl MaximalityReport {
    /// Deterministic JSON (struct field order, shortest round-trip floats).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }
}

fn multi_source_distance(nx: usize, ny: usize, sources: &[(usize, usize)]) -> Vec<usize> {
    let mut dist = vec![usize::MAX; nx * ny];
    let mut queue = VecDeque::new();
    for &(i, j) in sources {
        if dist[j * nx + i] != 0 {
            dist[j * nx + i] = 0;
            queue.push_back((i, j));
        }
    }
    while let Some((i, j)) = queue.pop_front() {
        let d = dist[j * nx + i];
        for di in -1i64..=1 {
            for dj in -1i64..=1 {
                let (a, b) = (i as i64 + di, j as i64 + dj);
                if a < 0 || b < 0 || a >= nx as i64 || b >= ny as i64 {
                    continue;
                }
                let k = b as usize * nx + a as usize;
                if dist[k] == usize::MAX {
                    dist[k] = d + 1;
                    queue.push_back((a as usize, b as usize));
                }
            }
        }
    }
    dist
}

/// Compares raster outline cells with the cells containing points of `Log(RA)`.
pub fn boundary_identity(raster: &AmoebaRaster, locus: impl IntoIterator<Item = [f64; 2]>) -> Option<BoundaryIdentity> {
    let (nx, ny) = raster.resolution;
    let mut real: Vec<(usize, usize)> = locus.into_iter().filter_map(|p| raster.locate(p)).collect();
    real.sort_unstable();
    real.dedup();
    // the outline proper: member cells next to an Out cell
    let outline: Vec<(usize, usize)> = (0..ny)
        .flat_map(|j| (0..nx).map(move |i| (i, j)))
        .filter(|&(i, j)| raster.get(i, j) == Cell::Boundary)
        .collect();
    if real.is_empty() || outline.is_empty() {
        return None;
    }
    let from_real = multi_source_distance(nx, ny, &real);
    let from_outline = multi_source_distance(nx, ny, &outline);
    let outline_to_locus = outline.iter().map(|&(i, j)| from_real[j * nx + i]).max().unwrap();
    let locus_to_outline = real.iter().map(|&(i, j)| from_outline[j * nx + i]).max().unwrap();
    Some(BoundaryIdentity {
        resolution: nx,
        window: raster.window,
        outline_to_locus,
        locus_to_outline,
        distance: outline_to_locus.max(locus_to_outline),
    })
}

fn fiber_part(f: &LaurentPolynomial, budget: &Budget) -> FiberPart {
    // tropical vertices first: that is where circles in the fiber of reducible curves sit
    let mut samples: Vec<LogPoint> = f.tropical_vertices().iter().map(|v| LogPoint::new(v[0], v[1])).collect();
    samples.truncate(budget.fiber_samples / 4);
    let window = Window::core(f, 2.0);
    samples.extend(sample_in_points(
        f,
        window,
        budget.fiber_samples - samples.len(),
        1e-3,
        budget.seed,
    ));
    match max_fiber_count(f, &samples, budget.fiber_resolution) {
        Ok(c) => FiberPart {
            max_count: Some(c.max_count),
            witness: c.witness,
            samples: samples.len(),
            failed: c.counts.iter().filter(|x| x.is_none()).count(),
            odd: c.odd,
            error: None,
        },
        Err(e) => FiberPart {
            max_count: None,
            witness: None,
            samples: samples.len(),
            failed: samples.len(),
            odd: 0,
            error: Some(e.to_string()),
        },
    }
}

fn describe(r: &MaximalityReport) -> String {
    let ratio = r.area.ratio.map_or("unavailable".to_string(), |x| format!("{x:.4}"));
    let fibers = match r.fibers.max_count {
        Some(usize::MAX) => "a circle in some fiber".to_string(),
        Some(c) => c.to_string(),
        None => "unavailable".to_string(),
    };
    let real = match (&r.reality, &r.harnack) {
        (None, _) => "not real".to_string(),
        (Some(_), Some(h)) => format!("{:?}", h.verdict),
        (Some(_), None) => "real, verdict unavailable".to_string(),
    };
    format!("area ratio {ratio}, max fiber count {fibers}, {real}")
}

fn consistency(r: &MaximalityReport) -> Consistency {
    let ratio = r.area.ratio;
    let harnack = r.harnack.as_ref().map(|h| &h.verdict);
    let is_harnack = r.reality.is_some() && harnack.is_some_and(|v| v.is_harnack());
    let against = r.fibers.max_count.is_some_and(|c| c >= 3)
        || r.reality.is_none()
        || matches!(harnack, Some(Verdict::NotHarnack(_)));
    let fibers_ok = r.fibers.max_count.is_some_and(|c| c <= 2);
    match ratio {
        Some(x) if x >= MAXIMAL_RATIO => {
            if against {
                Consistency::Inconsistent(describe(r))
            } else if fibers_ok && is_harnack {
                match &r.boundary_identity {
                    Some(b) if b.distance <= BOUNDARY_CELLS => Consistency::ConsistentMaximal,
                    Some(b) => Consistency::Inconsistent(format!(
                        "{}; outline and real locus are {} cells apart",
                        describe(r),
                        b.distance
                    )),
                    None => Consistency::Undecided(format!("{}; outline comparison unavailable", describe(r))),
                }
            } else {
                Consistency::Undecided(describe(r))
            }
        }
        Some(x) if x <= NON_MAXIMAL_RATIO => {
            if is_harnack {
                // a Harnack curve always has the maximal area
                Consistency::Inconsistent(describe(r))
            } else if against {
                Consistency::ConsistentNonMaximal
            } else {
                Consistency::Undecided(describe(r))
            }
        }
        _ => Consistency::Undecided(describe(r)),
    }
}

pub fn maximality_report(f: &LaurentPolynomial, profile: Profile) -> Result<MaximalityReport, AmoebaError> {
    let budget = profile.budget();
    if f.newton_polygon().is_degenerate() {
        return Err(AmoebaError::DegenerateNewtonPolygon);
    }
    let (area, (fibers, real)) = rayon::join(
        || match area_ratio(f, budget.area_tol) {
            Ok((ratio, est)) => AreaPart {
                ratio: Some(ratio),
                area: Some(est.area),
                converged: est.converged,
                error: None,
            },
            Err(e) => AreaPart {
                ratio: None,
                area: None,
                converged: false,
                error: Some(e.to_string()),
            },
        },
        || rayon::join(|| fiber_part(f, &budget), || real_part(f, &budget)),
    );
    let (reality, harnack, harnack_error, boundary) = real;
    let mut report = MaximalityReport {
        polynomial: f.to_string(),
        profile,
        area,
        fibers,
        reality,
        harnack,
        harnack_error,
        boundary_identity: boundary,
        consistency: Consistency::Undecided(String::new()),
    };
    report.consistency = consistency(&report);
    Ok(report)
}

type RealPart = (
    Option<RealityWitness>,
    Option<HarnackVerdict>,
    Option<String>,
    Option<BoundaryIdentity>,
);

fn real_part(f: &LaurentPolynomial, budget: &Budget) -> RealPart {
    let Some(w) = real_up_to_constant(f) else {
        return (None, None, None, None);
    };
    let g = w.realify(f);
    let window = default_window(&g);
    let harnack = harnack_analysis(&g, window, budget.locus_resolution);
    let (verdict, error) = match &harnack {
        Ok((v, _)) => (Some(v.clone()), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let boundary = boundary_check(&g, window, budget);
    (Some(w), verdict, error, boundary)
}

fn boundary_check(g: &LaurentPolynomial, window: Window, budget: &Budget) -> Option<BoundaryIdentity> {
    let raster = rasterize(g, window, (budget.raster, budget.raster)).ok()?;
    let locus = match trace_topology(g, window, 2 * budget.raster) {
        Ok(t) => t,
        Err(RealLocusError::ResolutionInsufficient { .. }) => trace_topology(g, window, 4 * budget.raster).ok()?,
        Err(_) => return None,
    };
    boundary_identity(&raster, locus.log_points())
}
