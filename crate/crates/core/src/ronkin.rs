//! The Ronkin function `N_f(x)`, the mean of `log|f|` over the torus `Log⁻¹(x)`, with its
//! gradient (the order map), Hessian and Monge–Ampère mass.
//!
//! Values come from two independent routes. The grid route averages `log|f|` over a jittered
//! `φ × ψ` grid. The Jensen route integrates out `ψ` exactly,
//! `(1/2π)∫ log|P(e^{x2+iψ})| dψ = log|lead P| + Σ max(x2, log|root|)`, and integrates the
//! remaining smooth-between-crossings function of `φ` adaptively. The gradient has an exact
//! form too: `∂N/∂x2` is `k_min` plus the average number of `z2`-roots inside `|z2| = e^{x2}`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amoeba::{
    dominating_term, membership, AmoebaError, ColumnForm, ColumnSweep, FiberPoint, LogPoint, Membership,
    TorusFiberSolutions, Window,
};
use crate::poly::{Exponent, LaurentPolynomial};
use crate::{quad, roots};

pub const GRADIENT_STEP: f64 = 1e-3;
pub const HESSIAN_STEP: f64 = 1e-2;
/// Sweep resolution for the exact gradient.
const GRADIENT_SWEEP: usize = 256;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RonkinError {
    #[error("point ({}, {}) is not outside the amoeba", .0.x1, .0.x2)]
    NotOutside(LogPoint),
    #[error("gradient {gradient:?} is not within 0.05 of a lattice point; too close to the amoeba")]
    NotLocallyAffine { gradient: [f64; 2] },
    #[error("fiber point {0:?} is critical for Log; neither sign gives a definite term")]
    Fold(FiberPoint),
    #[error(transparent)]
    Amoeba(#[from] AmoebaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadrature {
    pub n_phi: usize,
    pub n_psi: usize,
    pub seed: u64,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            n_phi: 1024,
            n_psi: 1024,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RonkinValue {
    pub value: f64,
    pub quadrature_error: f64,
}

/// Relative size of `|f|` below which a grid cell is refined.
const REFINE_BELOW: f64 = 1e-8;
const REFINE_SPLIT: usize = 4;

/// Grid route: jittered midpoint rule, two independent jitters.
pub fn ronkin_value(f: &LaurentPolynomial, x: LogPoint, q: Quadrature) -> RonkinValue {
    let form = ColumnForm::new(f);
    let shift = form.shift(x.x1);
    let mut rng = ChaCha8Rng::seed_from_u64(q.seed);
    let passes: Vec<f64> = (0..2)
        .map(|_| {
            let (u, v): (f64, f64) = (rng.gen(), rng.gen());
            grid_pass(&form, x, shift, q, u, v)
        })
        .collect();
    let base = form.kmin() as f64 * x.x2 + shift;
    RonkinValue {
        value: base + 0.5 * (passes[0] + passes[1]),
        quadrature_error: (passes[0] - passes[1]).abs(),
    }
}

fn grid_pass(form: &ColumnForm, x: LogPoint, shift: f64, q: Quadrature, u: f64, v: f64) -> f64 {
    let (np, nq) = (q.n_phi, q.n_psi);
    let d = form.degree();
    let (dp, dq) = (TAU / np as f64, TAU / nq as f64);
    // |w|^k e^{ikψ} for the jittered ψ nodes
    let wpow = |psi: f64| -> Vec<Complex64> {
        (0..=d)
            .map(|k| Complex64::from_polar((k as f64 * x.x2).exp(), k as f64 * psi))
            .collect()
    };
    let wnodes: Vec<Vec<Complex64>> = (0..nq).map(|l| wpow((l as f64 + v) * dq)).collect();
    let eval = |c: &[Complex64], w: &[Complex64]| -> (f64, f64) {
        let mut s = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for (a, b) in c.iter().zip(w) {
            let t = a * b;
            s += t;
            scale += t.norm();
        }
        (s.norm(), scale)
    };
    let total: f64 = (0..np)
        .into_par_iter()
        .map(|i| {
            let phi = (i as f64 + u) * dp;
            let c = form.coeffs(x.x1, phi, shift);
            let mut row = 0.0;
            for (l, w) in wnodes.iter().enumerate() {
                let (m, scale) = eval(&c, w);
                if m > REFINE_BELOW * scale {
                    row += m.ln();
                    continue;
                }
                // log singularity in this cell: average over a finer sub-grid
                let mut sub = 0.0;
                let h = 1.0 / REFINE_SPLIT as f64;
                for a in 0..REFINE_SPLIT {
                    let cs = form.coeffs(x.x1, (i as f64 + (a as f64 + 0.5) * h) * dp, shift);
                    for b in 0..REFINE_SPLIT {
                        let ws = wpow((l as f64 + (b as f64 + 0.5) * h) * dq);
                        let (m, _) = eval(&cs, &ws);
                        sub += m.max(f64::MIN_POSITIVE).ln();
                    }
                }
                row += sub / (REFINE_SPLIT * REFINE_SPLIT) as f64;
            }
            row
        })
        .sum();
    total / (np * nq) as f64
}

/// Jensen route; accurate to about `1e-11` away from degenerate fibers.
pub fn ronkin_exact(f: &LaurentPolynomial, x: LogPoint) -> RonkinValue {
    let form = ColumnForm::new(f);
    let shift = form.shift(x.x1);
    let sweep = ColumnSweep::from_form(form.clone(), x.x1, 128);
    let (pts, _) = sweep.refined_crossings(x.x2);
    let breaks: Vec<f64> = pts.iter().map(|p| p.phi).collect();
    let mut buf = Vec::new();
    let integrand = |phi: f64| {
        form.coeffs_into(x.x1, phi, shift, &mut buf);
        let Some(top) = buf.iter().rposition(|c| c.norm() > 0.0) else {
            return f64::NEG_INFINITY;
        };
        let lead = buf[top].norm().ln();
        let r = roots::roots(&buf[..=top], None);
        lead + r.roots.iter().map(|z| z.norm().ln().max(x.x2)).sum::<f64>()
    };
    let (v, err) = quad::integrate(integrand, 0.0, TAU, &breaks, 1e-12, 4000);
    RonkinValue {
        value: form.kmin() as f64 * x.x2 + shift + v / TAU,
        quadrature_error: err / TAU,
    }
}

/// Exact gradient of `N_f`: the average number of roots inside the fiber circle, per variable.
pub fn ronkin_gradient(f: &LaurentPolynomial, x: LogPoint) -> [f64; 2] {
    let cols = ColumnForm::new(f);
    let rows = ColumnForm::new(&f.swap_variables());
    let col = ColumnSweep::from_form(cols.clone(), x.x1, GRADIENT_SWEEP);
    let row = ColumnSweep::from_form(rows.clone(), x.x2, GRADIENT_SWEEP);
    [
        rows.kmin() as f64 + row.below_measure(x.x1) / TAU,
        cols.kmin() as f64 + col.below_measure(x.x2) / TAU,
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RonkinSample {
    pub x: LogPoint,
    pub value: f64,
    pub gradient: [f64; 2],
    pub hessian: [[f64; 2]; 2],
    pub quadrature_error: f64,
}

impl RonkinSample {
    pub fn det(&self) -> f64 {
        let h = self.hessian;
        h[0][0] * h[1][1] - h[0][1] * h[1][0]
    }
}

/// Jensen-route value with central finite differences: gradient at step `1e-3`, Hessian at `1e-2`.
pub fn ronkin_sample(f: &LaurentPolynomial, x: LogPoint) -> RonkinSample {
    let n = |dx: f64, dy: f64| ronkin_exact(f, LogPoint::new(x.x1 + dx, x.x2 + dy));
    let c = n(0.0, 0.0);
    let (g, h) = (GRADIENT_STEP, HESSIAN_STEP);
    let gradient = [
        (n(g, 0.0).value - n(-g, 0.0).value) / (2.0 * g),
        (n(0.0, g).value - n(0.0, -g).value) / (2.0 * g),
    ];
    let h11 = (n(h, 0.0).value - 2.0 * c.value + n(-h, 0.0).value) / (h * h);
    let h22 = (n(0.0, h).value - 2.0 * c.value + n(0.0, -h).value) / (h * h);
    let h12 = (n(h, h).value - n(h, -h).value - n(-h, h).value + n(-h, -h).value) / (4.0 * h * h);
    RonkinSample {
        x,
        value: c.value,
        gradient,
        hessian: [[h11, h12], [h12, h22]],
        quadrature_error: c.quadrature_error,
    }
}

/// The lattice point `grad N_f(x)` of the complement component containing `x`.
pub fn order_of_component(f: &LaurentPolynomial, x: LogPoint) -> Result<Exponent, RonkinError> {
    if membership(f, x)?.is_in() {
        return Err(RonkinError::NotOutside(x));
    }
    let s = ronkin_sample(f, x);
    let (j, k) = (s.gradient[0].round(), s.gradient[1].round());
    if (s.gradient[0] - j).abs() > 0.05 || (s.gradient[1] - k).abs() > 0.05 {
        return Err(RonkinError::NotLocallyAffine { gradient: s.gradient });
    }
    Ok(Exponent::new(j as i64, k as i64))
}

/// One term of the branch decomposition of `Hess N_f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchTerm {
    pub solution: FiberPoint,
    /// `±[[∂ψ/∂x1, ∂ψ/∂x2], [−∂φ/∂x1, −∂φ/∂x2]]`, sign chosen to make it positive definite.
    pub matrix: [[f64; 2]; 2],
    pub sign: f64,
}

impl BranchTerm {
    pub fn det(&self) -> f64 {
        det(self.matrix)
    }

    pub fn symmetry_defect(&self) -> f64 {
        (self.matrix[0][1] - self.matrix[1][0]).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchHessian {
    pub terms: Vec<BranchTerm>,
    /// `(1/2π)·Σ terms`, which equals `Hess N_f`.
    pub sum: [[f64; 2]; 2],
}

fn det(m: [[f64; 2]; 2]) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Implicit derivatives of the fiber solutions. Along the curve,
/// `F1·(dx1 + i dφ) + F2·(dx2 + i dψ) = 0` with `F_i = z_i ∂f/∂z_i`, which gives the matrix as
/// the Gram matrix of `F1, F2` over `Im(F2·conj F1)`.
pub fn branch_hessian(f: &LaurentPolynomial, fiber: &TorusFiberSolutions) -> Result<BranchHessian, RonkinError> {
    let x = fiber.base;
    let mut terms = Vec::with_capacity(fiber.solutions.len());
    let mut sum = [[0.0; 2]; 2];
    for &p in &fiber.solutions {
        let z1 = Complex64::from_polar(x.x1.exp(), p.phi);
        let z2 = Complex64::from_polar(x.x2.exp(), p.psi);
        let (mut a, mut b) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        let mut scale: f64 = 0.0;
        for (e, c) in f.terms() {
            let t = c * z1.powi(e.j as i32) * z2.powi(e.k as i32);
            a += t * e.j as f64;
            b += t * e.k as f64;
            scale = scale.max(t.norm());
        }
        let cross = b * a.conj();
        if cross.im.abs() <= 1e-12 * scale * scale {
            return Err(RonkinError::Fold(p));
        }
        let s = cross.im;
        let m = [[a.norm_sqr() / s, cross.re / s], [cross.re / s, b.norm_sqr() / s]];
        let sign = if m[0][0] + m[1][1] >= 0.0 { 1.0 } else { -1.0 };
        let m = [[sign * m[0][0], sign * m[0][1]], [sign * m[1][0], sign * m[1][1]]];
        for r in 0..2 {
            for c in 0..2 {
                sum[r][c] += m[r][c] / TAU;
            }
        }
        terms.push(BranchTerm {
            solution: p,
            matrix: m,
            sign,
        });
    }
    Ok(BranchHessian { terms, sum })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MassMethod {
    HessianIntegral,
    GradientImage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MongeAmpereEstimate {
    pub region: Window,
    pub mass: f64,
    pub method: MassMethod,
    pub grid: usize,
    /// Mass by the other method.
    pub cross_check: f64,
    /// Cells whose finite-difference Hessian has an eigenvalue below `-NEGATIVE_TOL`.
    pub negative_cells: usize,
}

const NEGATIVE_TOL: f64 = 1e-3;

/// Gradients along one axis-parallel line, sharing a single sweep.
struct GradientLine {
    sweep: ColumnSweep,
    offset: f64,
}

impl GradientLine {
    fn new(form: &ColumnForm, at: f64) -> Self {
        Self {
            sweep: ColumnSweep::from_form(form.clone(), at, GRADIENT_SWEEP),
            offset: form.kmin() as f64,
        }
    }

    fn at(&self, level: f64) -> f64 {
        self.offset + self.sweep.below_measure(level) / TAU
    }
}

/// Total Monge–Ampère mass of `region`, integrating `det Hess N_f` (clamped at 0) with the
/// Hessian from central differences of the exact gradient; the area of the gradient image of
/// the node grid is the cross-check.
pub fn monge_ampere_mass(f: &LaurentPolynomial, region: Window, grid: usize) -> Result<MongeAmpereEstimate, RonkinError> {
    if f.newton_polygon().is_degenerate() {
        return Err(AmoebaError::DegenerateNewtonPolygon.into());
    }
    let n = grid.max(64);
    let cols = ColumnForm::new(f);
    let rows = ColumnForm::new(&f.swap_variables());
    let (hx, hy) = (region.width() / n as f64, region.height() / n as f64);
    let xc: Vec<f64> = (0..n).map(|i| region.x1_min + (i as f64 + 0.5) * hx).collect();
    let yc: Vec<f64> = (0..n).map(|j| region.x2_min + (j as f64 + 0.5) * hy).collect();
    let h = HESSIAN_STEP;

    let lines = |form: &ColumnForm, at: &[f64]| -> Vec<[GradientLine; 3]> {
        at.par_iter()
            .map(|&t| [GradientLine::new(form, t - h), GradientLine::new(form, t), GradientLine::new(form, t + h)])
            .collect()
    };
    let col_lines = lines(&cols, &xc);
    let row_lines = lines(&rows, &yc);

    let cells: Vec<(f64, bool)> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k % n, k / n);
            let (x, y) = (xc[i], yc[j]);
            let c = &col_lines[i];
            let r = &row_lines[j];
            let h22 = (c[1].at(y + h) - c[1].at(y - h)) / (2.0 * h);
            let h12 = (c[2].at(y) - c[0].at(y)) / (2.0 * h);
            let h21 = (r[2].at(x) - r[0].at(x)) / (2.0 * h);
            let h11 = (r[1].at(x + h) - r[1].at(x - h)) / (2.0 * h);
            let m = 0.5 * (h12 + h21);
            let d = h11 * h22 - m * m;
            let tr = h11 + h22;
            let disc = (0.25 * (h11 - h22).powi(2) + m * m).sqrt();
            let lam_min = 0.5 * tr - disc;
            (d.max(0.0), lam_min < -NEGATIVE_TOL)
        })
        .collect();
    let mass = cells.iter().map(|c| c.0).sum::<f64>() * hx * hy;
    let negative_cells = cells.iter().filter(|c| c.1).count();

    // gradient image of the node grid
    let xn: Vec<f64> = (0..=n).map(|i| region.x1_min + i as f64 * hx).collect();
    let yn: Vec<f64> = (0..=n).map(|j| region.x2_min + j as f64 * hy).collect();
    let col_nodes: Vec<GradientLine> = xn.par_iter().map(|&t| GradientLine::new(&cols, t)).collect();
    let row_nodes: Vec<GradientLine> = yn.par_iter().map(|&t| GradientLine::new(&rows, t)).collect();
    let grads: Vec<[f64; 2]> = (0..(n + 1) * (n + 1))
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k % (n + 1), k / (n + 1));
            [row_nodes[j].at(xn[i]), col_nodes[i].at(yn[j])]
        })
        .collect();
    let g = |i: usize, j: usize| grads[j * (n + 1) + i];
    let mut image = 0.0;
    for j in 0..n {
        for i in 0..n {
            let q = [g(i, j), g(i + 1, j), g(i + 1, j + 1), g(i, j + 1)];
            let mut a = 0.0;
            for t in 0..4 {
                let (p, r) = (q[t], q[(t + 1) % 4]);
                a += p[0] * r[1] - p[1] * r[0];
            }
            image += 0.5 * a.abs();
        }
    }

    Ok(MongeAmpereEstimate {
        region,
        mass,
        method: MassMethod::HessianIntegral,
        grid: n,
        cross_check: image,
        negative_cells,
    })
}

/// Samples of `N_f` on the cell centers of a window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RonkinField {
    pub window: Window,
    pub resolution: (usize, usize),
    pub samples: Vec<RonkinSample>,
}

pub fn ronkin_field(f: &LaurentPolynomial, window: Window, resolution: (usize, usize)) -> RonkinField {
    let (nx, ny) = resolution;
    let (hx, hy) = (window.width() / nx as f64, window.height() / ny as f64);
    let samples = (0..nx * ny)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k % nx, k / nx);
            let x = LogPoint::new(window.x1_min + (i as f64 + 0.5) * hx, window.x2_min + (j as f64 + 0.5) * hy);
            ronkin_sample(f, x)
        })
        .collect();
    RonkinField {
        window,
        resolution,
        samples,
    }
}

#[derive(Serialize)]
struct FieldRecord {
    x: [f64; 2],
    #[serde(rename = "N")]
    n: f64,
    grad: [f64; 2],
    hess: [[f64; 2]; 2],
    det: f64,
}

impl RonkinField {
    pub fn to_json(&self) -> String {
        let recs: Vec<FieldRecord> = self
            .samples
            .iter()
            .map(|s| FieldRecord {
                x: [s.x.x1, s.x.x2],
                n: s.value,
                grad: s.gradient,
                hess: s.hessian,
                det: s.det(),
            })
            .collect();
        serde_json::to_string(&recs).expect("field records serialize")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x1,x2,N,grad1,grad2,h11,h12,h22,det\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                s.x.x1,
                s.x.x2,
                s.value,
                s.gradient[0],
                s.gradient[1],
                s.hessian[0][0],
                s.hessian[0][1],
                s.hessian[1][1],
                s.det()
            ));
        }
        out
    }
}

/// `√det(A+B) ≥ √det A + √det B` for positive definite `A, B`.
pub fn det_superadditivity_gap(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> f64 {
    let s = [[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]];
    det(s).sqrt() - det(a).sqrt() - det(b).sqrt()
}

/// True when `x` is certainly off the amoeba because one term dominates.
pub fn is_lopsided(f: &LaurentPolynomial, x: LogPoint) -> bool {
    dominating_term(f, x).is_some()
}

/// Whether `x` is outside the amoeba, for callers that only need a boolean.
pub fn is_outside(f: &LaurentPolynomial, x: LogPoint) -> Result<bool, RonkinError> {
    Ok(matches!(membership(f, x)?, Membership::Out(_)))
}

/// `(1/2π)·Σ` of two equal determinant-one terms has determinant `1/π²`.
pub const EQUALITY_DENSITY: f64 = 1.0 / (PI * PI);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amoeba::{fiber_solutions, sample_in_points};
    use crate::poly::parse_polynomial;
    use proptest::prelude::*;

    fn line() -> LaurentPolynomial {
        parse_polynomial("1+x+y").unwrap()
    }

    /// Mahler measure of `1+x+y`: `(3√3/4π)·L(χ₋₃, 2)`, with `L(χ₋₃, 2) = 0.78130241289648...`.
    const M_LINE: f64 = 0.323_065_947_219_826_5;

    #[test]
    fn monomial_is_affine() {
        let f = parse_polynomial("3*x^2*y^-1").unwrap();
        for x in [LogPoint::new(0.3, -1.2), LogPoint::new(-4.0, 2.5)] {
            let exact = 3f64.ln() + 2.0 * x.x1 - x.x2;
            assert!((ronkin_exact(&f, x).value - exact).abs() < 1e-12);
            let q = Quadrature {
                n_phi: 64,
                n_psi: 64,
                seed: 1,
            };
            assert!((ronkin_value(&f, x, q).value - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn jensen_formula_for_a_linear_factor() {
        // f = x − c: N = max(log|c|, x1)
        let f = parse_polynomial("x-3").unwrap();
        let c = 3f64.ln();
        for x1 in [-1.0, 0.5, 2.0] {
            let v = ronkin_exact(&f, LogPoint::new(x1, 0.0)).value;
            assert!((v - x1.max(c)).abs() < 1e-12, "{x1}: {v}");
        }
    }

    #[test]
    fn line_at_origin_is_the_mahler_measure() {
        let v = ronkin_exact(&line(), LogPoint::new(0.0, 0.0));
        assert!((v.value - M_LINE).abs() < 1e-10, "{v:?}");
        let q = Quadrature {
            n_phi: 1024,
            n_psi: 1024,
            seed: 5,
        };
        let g = ronkin_value(&line(), LogPoint::new(0.0, 0.0), q);
        let g2 = ronkin_value(
            &line(),
            LogPoint::new(0.0, 0.0),
            Quadrature {
                n_phi: 2048,
                n_psi: 2048,
                seed: 9,
            },
        );
        assert!((g.value - M_LINE).abs() < 1e-4, "{g:?}");
        assert!((g.value - g2.value).abs() < 1e-4);
    }

    #[test]
    fn exact_gradient_matches_finite_differences() {
        let f = parse_polynomial("1+x+y+0.3*x*y").unwrap();
        for x in [LogPoint::new(0.1, -0.2), LogPoint::new(1.0, 0.4), LogPoint::new(-2.0, 3.0)] {
            let s = ronkin_sample(&f, x);
            let g = ronkin_gradient(&f, x);
            assert!((s.gradient[0] - g[0]).abs() < 1e-6 && (s.gradient[1] - g[1]).abs() < 1e-6, "{x:?} {s:?} {g:?}");
        }
    }

    #[test]
    fn order_of_component_examples() {
        let f = line();
        assert_eq!(order_of_component(&f, LogPoint::new(10.0, 0.0)).unwrap(), Exponent::new(1, 0));
        assert_eq!(order_of_component(&f, LogPoint::new(-10.0, -10.0)).unwrap(), Exponent::new(0, 0));
        assert_eq!(order_of_component(&f, LogPoint::new(0.0, 10.0)).unwrap(), Exponent::new(0, 1));
        assert!(matches!(
            order_of_component(&f, LogPoint::new(0.0, 0.0)),
            Err(RonkinError::NotOutside(_))
        ));
    }

    #[test]
    fn bounded_component_has_interior_order() {
        // the middle term dominates at the origin: a bounded component of order (1,1)
        let f = parse_polynomial("1+x+y+x^2*y+x*y^2-10*x*y").unwrap();
        let o = order_of_component(&f, LogPoint::new(0.0, 0.0)).unwrap();
        assert_eq!(o, Exponent::new(1, 1));
    }

    #[test]
    fn branch_terms_at_line_origin() {
        let f = line();
        let fib = fiber_solutions(&f, LogPoint::new(0.0, 0.0), 1024).unwrap();
        let b = branch_hessian(&f, &fib).unwrap();
        assert_eq!(b.terms.len(), 2);
        // the two solutions are conjugate, so the terms agree
        for r in 0..2 {
            for c in 0..2 {
                assert!((b.terms[0].matrix[r][c] - b.terms[1].matrix[r][c]).abs() < 1e-12);
            }
        }
        for t in &b.terms {
            assert!((t.det() - 1.0).abs() < 1e-12);
            assert!(t.symmetry_defect() < 1e-12);
        }
        assert!((det(b.sum) - EQUALITY_DENSITY).abs() < 1e-12);
        let s = ronkin_sample(&f, LogPoint::new(0.0, 0.0));
        for r in 0..2 {
            for c in 0..2 {
                assert!((s.hessian[r][c] - b.sum[r][c]).abs() < 1e-3 * b.sum[r][c].abs().max(1.0), "{s:?} {b:?}");
            }
        }
    }

    /// Branch terms against finite differences of the tracked solutions.
    #[test]
    fn branch_terms_match_displaced_solutions() {
        let f = parse_polynomial("1+x+y+0.2*x*y").unwrap();
        let x = LogPoint::new(0.2, -0.1);
        let h = 1e-4;
        let base = fiber_solutions(&f, x, 1024).unwrap();
        let b = branch_hessian(&f, &base).unwrap();
        let near = |p: FiberPoint, y: LogPoint| -> FiberPoint {
            let s = fiber_solutions(&f, y, 1024).unwrap();
            *s.solutions
                .iter()
                .min_by(|a, c| ((a.phi - p.phi).abs() + (a.psi - p.psi).abs()).total_cmp(&((c.phi - p.phi).abs() + (c.psi - p.psi).abs())))
                .unwrap()
        };
        for t in &b.terms {
            let p = t.solution;
            let d1 = (near(p, LogPoint::new(x.x1 + h, x.x2)), near(p, LogPoint::new(x.x1 - h, x.x2)));
            let d2 = (near(p, LogPoint::new(x.x1, x.x2 + h)), near(p, LogPoint::new(x.x1, x.x2 - h)));
            let fd = [
                [(d1.0.psi - d1.1.psi) / (2.0 * h), (d2.0.psi - d2.1.psi) / (2.0 * h)],
                [-(d1.0.phi - d1.1.phi) / (2.0 * h), -(d2.0.phi - d2.1.phi) / (2.0 * h)],
            ];
            for r in 0..2 {
                for c in 0..2 {
                    assert!((t.sign * fd[r][c] - t.matrix[r][c]).abs() < 1e-4, "{fd:?} {t:?}");
                }
            }
        }
    }

    #[test]
    fn mass_of_the_line() {
        let m = monge_ampere_mass(&line(), Window::square(8.0), 64).unwrap();
        assert!((m.mass - 0.5).abs() < 0.025, "{m:?}");
        assert!((m.cross_check - 0.5).abs() < 0.025, "{m:?}");
    }

    #[test]
    fn mass_vanishes_off_the_amoeba() {
        let m = monge_ampere_mass(&line(), Window::new(9.0, 11.0, -1.0, 1.0), 64).unwrap();
        assert!(m.mass <= 1e-3 && m.cross_check <= 1e-3);
    }

    #[test]
    fn field_exports() {
        let fld = ronkin_field(&line(), Window::square(2.0), (3, 2));
        assert_eq!(fld.samples.len(), 6);
        assert_eq!(fld.to_csv().lines().count(), 7);
        let v: serde_json::Value = serde_json::from_str(&fld.to_json()).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 6);
        assert!(v[0]["N"].is_number());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn convexity(a1 in -3.0f64..3.0, a2 in -3.0f64..3.0, b1 in -3.0f64..3.0, b2 in -3.0f64..3.0, t in 0.05f64..0.95) {
            let f = parse_polynomial("1+x+y-0.5*x*y").unwrap();
            let na = ronkin_exact(&f, LogPoint::new(a1, a2)).value;
            let nb = ronkin_exact(&f, LogPoint::new(b1, b2)).value;
            let nm = ronkin_exact(&f, LogPoint::new(t * a1 + (1.0 - t) * b1, t * a2 + (1.0 - t) * b2)).value;
            prop_assert!(nm <= t * na + (1.0 - t) * nb + 1e-9);
        }

        #[test]
        fn additivity(x1 in -3.0f64..3.0, x2 in -3.0f64..3.0) {
            let f = parse_polynomial("1+x+y").unwrap();
            let g = parse_polynomial("2-x+3*y").unwrap();
            let fg = &f * &g;
            let x = LogPoint::new(x1, x2);
            let lhs = ronkin_exact(&fg, x).value;
            let rhs = ronkin_exact(&f, x).value + ronkin_exact(&g, x).value;
            prop_assert!((lhs - rhs).abs() < 1e-9);
        }
    }

    #[test]
    fn superadditivity_on_branch_terms() {
        let f = parse_polynomial("1+x+y+x^2*y+x*y^2-10*x*y").unwrap();
        let pts = sample_in_points(&f, Window::square(3.0), 10, 0.05, 11);
        for p in pts {
            let fib = fiber_solutions(&f, p, 1024).unwrap();
            let b = branch_hessian(&f, &fib).unwrap();
            for i in 0..b.terms.len() {
                for j in i + 1..b.terms.len() {
                    let (a, c) = (b.terms[i].matrix, b.terms[j].matrix);
                    let gap = det_superadditivity_gap(a, c);
                    assert!(gap >= -1e-9);
                    // equality exactly for proportional (here: equal, det 1) terms
                    let diff = (a[0][0] - c[0][0]).abs() + (a[0][1] - c[0][1]).abs() + (a[1][1] - c[1][1]).abs();
                    if gap < 1e-2 {
                        assert!(diff < 0.2 * (a[0][0] + a[1][1]), "{gap} {diff}");
                    }
                }
            }
        }
    }
}
