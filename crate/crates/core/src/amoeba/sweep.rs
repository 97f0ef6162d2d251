//! Column sweeps: for a fixed `x1`, the roots in `z2` of `f(e^{x1+iφ}, z2)` tracked as
//! continuous branches over `φ ∈ [0, 2π)`.
//!
//! Everything about the amoeba along the vertical line through `x1` is read off the branch
//! values `L_m(φ) = log|w_m(φ)|`: the fiber over `(x1, x2)` is the set of level crossings
//! `L_m(φ) = x2`, and the slice of the amoeba is the union of the ranges of the `L_m`.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::poly::LaurentPolynomial;
use crate::roots;

/// Relative tolerance for a whole circle of the fiber lying on the curve.
const DEGENERATE_TOL: f64 = 1e-9;
/// Largest number of step halvings while tracking through near-collisions.
const MAX_HALVINGS: u32 = 10;

/// Coefficients of `f` as a polynomial in `z2` whose coefficients are Laurent polynomials in `z1`.
#[derive(Debug, Clone)]
pub struct ColumnForm {
    kmin: i64,
    /// `rows[k - kmin]` lists `(j, log|a_jk|, arg a_jk)`.
    rows: Vec<Vec<(i64, f64, f64)>>,
}

impl ColumnForm {
    pub fn new(f: &LaurentPolynomial) -> Self {
        let (kmin, kmax) = f.degree_range_in_y();
        let mut rows = vec![Vec::new(); (kmax - kmin + 1) as usize];
        for (e, c) in f.terms() {
            rows[(e.k - kmin) as usize].push((e.j, c.norm().ln(), c.arg()));
        }
        Self { kmin, rows }
    }

    pub fn kmin(&self) -> i64 {
        self.kmin
    }

    pub fn degree(&self) -> usize {
        self.rows.len() - 1
    }

    /// Normalizing shift for column `x1`: the largest `log|a_jk| + j·x1`.
    pub fn shift(&self, x1: f64) -> f64 {
        self.rows
            .iter()
            .flatten()
            .map(|&(j, la, _)| la + j as f64 * x1)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `c_k(e^{x1+iφ}) · e^{-shift}` for every `k`, ascending.
    pub fn coeffs_into(&self, x1: f64, phi: f64, shift: f64, out: &mut Vec<Complex64>) {
        out.clear();
        for row in &self.rows {
            let mut c = Complex64::new(0.0, 0.0);
            for &(j, la, arg) in row {
                c += Complex64::from_polar((la + j as f64 * x1 - shift).exp(), arg + j as f64 * phi);
            }
            out.push(c);
        }
    }

    pub fn coeffs(&self, x1: f64, phi: f64, shift: f64) -> Vec<Complex64> {
        let mut v = Vec::with_capacity(self.rows.len());
        self.coeffs_into(x1, phi, shift, &mut v);
        v
    }

    /// Angles `φ` at which every coefficient vanishes, so that the whole circle
    /// `{e^{x1+iφ}} × T¹` lies in the fiber.
    pub fn degenerate_angles(&self, x1: f64) -> Vec<f64> {
        // the sparsest row has the fewest candidate roots
        let Some(row) = self.rows.iter().filter(|r| !r.is_empty()).min_by_key(|r| r.len()) else {
            return Vec::new();
        };
        if row.len() < 2 {
            return Vec::new();
        }
        let jmin = row.iter().map(|t| t.0).min().unwrap();
        let jmax = row.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (jmax - jmin + 1) as usize];
        for &(j, la, arg) in row {
            coeffs[(j - jmin) as usize] = Complex64::from_polar(la.exp(), arg);
        }
        let radius = x1.exp();
        let shift = self.shift(x1);
        let mut out = Vec::new();
        for z in roots::roots(&coeffs, None).roots {
            if z.norm() == 0.0 || ((z.norm() - radius) / radius).abs() > DEGENERATE_TOL {
                continue;
            }
            let phi = z.arg().rem_euclid(TAU);
            let c = self.coeffs(x1, phi, shift);
            if c.iter().all(|a| a.norm() <= DEGENERATE_TOL * 1e2) {
                out.push(phi);
            }
        }
        out
    }
}

/// Distance between two nonzero complex numbers measured in `log z`.
fn log_dist(a: Complex64, b: Complex64) -> f64 {
    let (na, nb) = (a.norm(), b.norm());
    if na == 0.0 || nb == 0.0 {
        return if na == nb { 0.0 } else { f64::INFINITY };
    }
    let dl = na.ln() - nb.ln();
    let mut da = (a.arg() - b.arg()).abs();
    if da > PI {
        da = TAU - da;
    }
    (dl * dl + da * da).sqrt()
}

fn min_pair_dist(r: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..r.len() {
        for j in i + 1..r.len() {
            best = best.min(log_dist(r[i], r[j]));
        }
    }
    best
}

/// Greedy nearest matching of `new` to the order of `old`; returns the reordered roots and
/// the largest displacement.
fn match_roots(old: &[Complex64], new: &[Complex64]) -> (Vec<Complex64>, f64) {
    let n = old.len();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for (i, &a) in old.iter().enumerate() {
        for (j, &b) in new.iter().enumerate() {
            pairs.push((log_dist(a, b), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let (mut used_old, mut used_new) = (vec![false; n], vec![false; n]);
    let mut worst: f64 = 0.0;
    for (d, i, j) in pairs {
        if used_old[i] || used_new[j] {
            continue;
        }
        used_old[i] = true;
        used_new[j] = true;
        out[i] = new[j];
        worst = worst.max(d);
    }
    (out, worst)
}

/// A fiber point `(φ, ψ)` on the torus `Log⁻¹(x)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FiberPoint {
    pub phi: f64,
    pub psi: f64,
}

/// A sign change of `L_m − x2` on one tracked step, or a pair of them around an extremum.
#[derive(Debug, Clone, Copy)]
struct Crossing {
    phi_a: f64,
    phi_b: f64,
    root_a: Complex64,
    root_b: Complex64,
    ambiguous: bool,
}

/// Tracked root branches of one column.
#[derive(Debug, Clone)]
pub struct ColumnSweep {
    x1: f64,
    form: ColumnForm,
    shift: f64,
    phis: Vec<f64>,
    roots: Vec<Vec<Complex64>>,
    /// Branch `m` at the last sample continues as branch `wrap[m]` at sample 0.
    wrap: Vec<usize>,
    /// Tracking across step `i → i+1` (the last one closes the circle) was ambiguous.
    ambiguous: Vec<bool>,
    degenerate: Vec<f64>,
    converged: bool,
    extrema: OnceLock<Vec<Extremum>>,
}

/// A local extremum of a branch, refined between samples.
#[derive(Debug, Clone, Copy)]
struct Extremum {
    i: usize,
    m: usize,
    maximize: bool,
    value: f64,
    phi: f64,
    root: Complex64,
}

impl ColumnSweep {
    pub fn new(f: &LaurentPolynomial, x1: f64, resolution: usize) -> Self {
        Self::from_form(ColumnForm::new(f), x1, resolution)
    }

    pub fn from_form(form: ColumnForm, x1: f64, resolution: usize) -> Self {
        let n = resolution.max(8);
        let shift = form.shift(x1);
        let degenerate = form.degenerate_angles(x1);
        let base = TAU / n as f64;
        let phi0 = 0.5 * base;
        let mut converged = true;

        let mut buf = Vec::new();
        let mut solve = |phi: f64, warm: Option<&[Complex64]>, converged: &mut bool| {
            form.coeffs_into(x1, phi, shift, &mut buf);
            let r = roots::roots(&buf, warm);
            *converged &= r.converged;
            r.roots
        };

        let first = solve(phi0, None, &mut converged);
        let degree = first.len();
        let mut phis = vec![phi0];
        let mut roots_list = vec![first];
        let mut ambiguous = Vec::new();
        let end = phi0 + TAU;
        let mut phi = phi0;
        let mut wrap = (0..degree).collect::<Vec<_>>();

        while phi < end - 1e-12 {
            let mut step = base.min(end - phi);
            let prev = roots_list.last().unwrap().clone();
            let sep_prev = min_pair_dist(&prev);
            let mut halvings = 0;
            let (next_roots, amb) = loop {
                let cand = solve(phi + step, Some(&prev), &mut converged);
                if cand.len() != prev.len() {
                    // degree drop at an exact coefficient zero; step past it
                    if halvings < MAX_HALVINGS {
                        step *= 0.5;
                        halvings += 1;
                        continue;
                    }
                    let mut padded = cand;
                    padded.resize(prev.len(), Complex64::new(f64::INFINITY, 0.0));
                    break (padded, true);
                }
                let (ordered, worst) = match_roots(&prev, &cand);
                let sep = sep_prev.min(min_pair_dist(&ordered));
                let amb = worst > 0.3 * sep;
                if amb && halvings < MAX_HALVINGS {
                    step *= 0.5;
                    halvings += 1;
                    continue;
                }
                break (ordered, amb);
            };
            phi += step;
            ambiguous.push(amb);
            if phi >= end - 1e-12 {
                // closing step: map the continued roots back onto sample 0
                let first = &roots_list[0];
                for (m, r) in next_roots.iter().enumerate() {
                    wrap[m] = first
                        .iter()
                        .enumerate()
                        .min_by(|a, b| log_dist(*a.1, *r).total_cmp(&log_dist(*b.1, *r)))
                        .map(|(i, _)| i)
                        .unwrap_or(m);
                }
                break;
            }
            phis.push(phi);
            roots_list.push(next_roots);
        }

        Self {
            x1,
            form,
            shift,
            phis,
            roots: roots_list,
            wrap,
            ambiguous,
            degenerate,
            converged,
            extrema: OnceLock::new(),
        }
    }

    pub fn x1(&self) -> f64 {
        self.x1
    }

    pub fn degree(&self) -> usize {
        self.roots.first().map_or(0, |r| r.len())
    }

    pub fn samples(&self) -> usize {
        self.phis.len()
    }

    pub fn is_degenerate(&self) -> bool {
        !self.degenerate.is_empty()
    }

    pub fn degenerate_angles(&self) -> &[f64] {
        &self.degenerate
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    pub fn any_ambiguous(&self) -> bool {
        self.ambiguous.iter().any(|&a| a)
    }

    /// Smallest separation (in `log z`) between distinct roots over all samples.
    pub fn min_root_separation(&self) -> f64 {
        self.roots.iter().map(|r| min_pair_dist(r)).fold(f64::INFINITY, f64::min)
    }

    fn level(&self, i: usize, m: usize) -> f64 {
        let n = self.roots[i][m].norm();
        if n == 0.0 {
            f64::NEG_INFINITY
        } else {
            n.ln()
        }
    }

    /// Successor of sample `(i, m)` along its branch, with the unwrapped angle.
    fn next(&self, i: usize, m: usize) -> (usize, usize, f64) {
        if i + 1 < self.phis.len() {
            (i + 1, m, self.phis[i + 1])
        } else {
            (0, self.wrap[m], self.phis[0] + TAU)
        }
    }

    /// Predecessor of sample `(i, m)` along its branch, with the unwrapped angle.
    fn prev(&self, i: usize, m: usize) -> (usize, usize, f64) {
        if i > 0 {
            (i - 1, m, self.phis[i - 1])
        } else {
            let last = self.phis.len() - 1;
            let mm = self.wrap.iter().position(|&w| w == m).unwrap_or(m);
            (last, mm, self.phis[last] - TAU)
        }
    }

    /// All roots at an arbitrary angle, warm-started from the nearest stored sample.
    fn roots_at(&self, phi: f64) -> Vec<Complex64> {
        let p = phi.rem_euclid(TAU);
        let idx = match self.phis.binary_search_by(|a| a.total_cmp(&p)) {
            Ok(i) => i,
            Err(i) => i.min(self.phis.len() - 1),
        };
        let c = self.form.coeffs(self.x1, p, self.shift);
        roots::roots(&c, Some(&self.roots[idx])).roots
    }

    fn root_near(&self, phi: f64, guess: Complex64) -> Complex64 {
        self.roots_at(phi)
            .into_iter()
            .min_by(|a, b| log_dist(*a, guess).total_cmp(&log_dist(*b, guess)))
            .unwrap_or(guess)
    }

    /// Golden-section search for an extremum of `L` near sample `(i, m)`.
    /// Returns `(value, angle, root)`.
    fn refine_extremum(&self, i: usize, m: usize, maximize: bool) -> (f64, f64, Complex64) {
        let (_, _, lo) = self.prev(i, m);
        let (_, _, hi) = self.next(i, m);
        let guess = self.roots[i][m];
        let sign = if maximize { 1.0 } else { -1.0 };
        let eval = |phi: f64| {
            let r = self.root_near(phi, guess);
            (sign * r.norm().ln(), r)
        };
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let (mut a, mut b) = (lo, hi);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let (mut fc, mut rc) = eval(c);
        let (mut fd, mut rd) = eval(d);
        for _ in 0..32 {
            if fc > fd {
                b = d;
                (d, fd, rd) = (c, fc, rc);
                c = b - g * (b - a);
                (fc, rc) = eval(c);
            } else {
                a = c;
                (c, fc, rc) = (d, fd, rd);
                d = a + g * (b - a);
                (fd, rd) = eval(d);
            }
        }
        let sampled = sign * self.level(i, m);
        let (best, phi, root) = if fc > fd { (fc, c, rc) } else { (fd, d, rd) };
        if best >= sampled {
            (sign * best, phi, root)
        } else {
            (self.level(i, m), self.phis[i], guess)
        }
    }

    /// Sample indices that are local extrema of their branch (strict on at least one side).
    fn extrema(&self, maximize: bool) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.phis.len() {
            for m in 0..self.degree() {
                let v = self.level(i, m);
                if !v.is_finite() {
                    continue;
                }
                let (pi, pm, _) = self.prev(i, m);
                let (ni, nm, _) = self.next(i, m);
                let (a, b) = (self.level(pi, pm), self.level(ni, nm));
                let is_ext = if maximize {
                    v >= a && v >= b && (v > a || v > b)
                } else {
                    v <= a && v <= b && (v < a || v < b)
                };
                if is_ext {
                    out.push((i, m));
                }
            }
        }
        out
    }

    fn refined_extrema(&self) -> &[Extremum] {
        self.extrema.get_or_init(|| {
            let mut out = Vec::new();
            for maximize in [true, false] {
                for (i, m) in self.extrema(maximize) {
                    let (value, phi, root) = self.refine_extremum(i, m, maximize);
                    out.push(Extremum { i, m, maximize, value, phi, root });
                }
            }
            out
        })
    }

    /// The vertical slice `{x2 : (x1, x2) ∈ amoeba}` as sorted disjoint closed intervals.
    /// A degenerate column is the whole line.
    pub fn intervals(&self) -> Vec<(f64, f64)> {
        if self.is_degenerate() {
            return vec![(f64::NEG_INFINITY, f64::INFINITY)];
        }
        let d = self.degree();
        if d == 0 {
            return Vec::new();
        }
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for i in 0..self.phis.len() {
            for m in 0..d {
                let v = self.level(i, m);
                lo[m] = lo[m].min(v);
                hi[m] = hi[m].max(v);
            }
        }
        for e in self.refined_extrema() {
            if e.maximize {
                hi[e.m] = hi[e.m].max(e.value);
            } else {
                lo[e.m] = lo[e.m].min(e.value);
            }
        }
        let mut iv: Vec<(f64, f64)> = lo.into_iter().zip(hi).filter(|(a, b)| a <= b).collect();
        iv.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for (a, b) in iv {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        merged
    }

    /// Sign changes of `L_m − x2`, including pairs hidden between samples near an extremum.
    fn crossings(&self, x2: f64) -> Vec<Crossing> {
        let mut out = Vec::new();
        let d = self.degree();
        for i in 0..self.phis.len() {
            for m in 0..d {
                let (ni, nm, nphi) = self.next(i, m);
                let a = self.level(i, m) - x2;
                let b = self.level(ni, nm) - x2;
                if (a < 0.0) != (b < 0.0) {
                    out.push(Crossing {
                        phi_a: self.phis[i],
                        phi_b: nphi,
                        root_a: self.roots[i][m],
                        root_b: self.roots[ni][nm],
                        ambiguous: self.ambiguous[i],
                    });
                }
            }
        }
        // near-misses: an extremum on the far side of the level, invisible at the samples
        {
            for &Extremum { i, m, maximize, value: val, phi: phi_ext, root: root_ext } in self.refined_extrema() {
                let v = self.level(i, m) - x2;
                let hidden = if maximize { v < 0.0 } else { v >= 0.0 };
                if !hidden {
                    continue;
                }
                let (pi, pm, pphi) = self.prev(i, m);
                let (ni, nm, nphi) = self.next(i, m);
                if (val - x2 < 0.0) == (v < 0.0) {
                    continue;
                }
                let amb = self.ambiguous[pi] || self.ambiguous[i];
                out.push(Crossing {
                    phi_a: pphi,
                    phi_b: phi_ext,
                    root_a: self.roots[pi][pm],
                    root_b: root_ext,
                    ambiguous: amb,
                });
                out.push(Crossing {
                    phi_a: phi_ext,
                    phi_b: nphi,
                    root_a: root_ext,
                    root_b: self.roots[ni][nm],
                    ambiguous: amb,
                });
            }
        }
        out
    }

    /// Distance from `x2` to the nearest branch value, after extremum refinement.
    pub fn level_gap(&self, x2: f64) -> f64 {
        let iv = self.intervals();
        iv.iter()
            .map(|&(a, b)| {
                if x2 < a {
                    a - x2
                } else if x2 > b {
                    x2 - b
                } else {
                    0.0
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Refined fiber points over `(x1, x2)`; `Err(true)` if a crossing sits on an
    /// ambiguous tracking step.
    pub fn solutions(&self, x2: f64) -> Result<Vec<FiberPoint>, bool> {
        match self.refined_crossings(x2) {
            (_, true) => Err(true),
            (pts, false) => Ok(pts),
        }
    }

    /// Refined crossings sorted by `φ`, and whether any lies on an ambiguous step.
    pub fn refined_crossings(&self, x2: f64) -> (Vec<FiberPoint>, bool) {
        let mut pts: Vec<FiberPoint> = Vec::new();
        let mut ambiguous = false;
        for c in self.crossings(x2) {
            ambiguous |= c.ambiguous;
            let (mut a, mut b) = (c.phi_a, c.phi_b);
            let sign_a = c.root_a.norm().ln() - x2 < 0.0;
            let interp = |phi: f64| {
                let t = ((phi - c.phi_a) / (c.phi_b - c.phi_a)).clamp(0.0, 1.0);
                let la_c = c.root_a.ln();
                let mut dl = c.root_b.ln() - la_c;
                if dl.im > PI {
                    dl.im -= TAU;
                } else if dl.im < -PI {
                    dl.im += TAU;
                }
                (la_c + dl * t).exp()
            };
            let mut root = c.root_a;
            while b - a > 1e-11 {
                let mid = 0.5 * (a + b);
                root = self.root_near(mid, interp(mid));
                if (root.norm().ln() - x2 < 0.0) == sign_a {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            let phi = (0.5 * (a + b)).rem_euclid(TAU);
            let psi = root.arg().rem_euclid(TAU);
            let dup = pts.iter().any(|p| {
                let dp = (p.phi - phi).abs();
                let dq = (p.psi - psi).abs();
                dp.min(TAU - dp) < 1e-8 && dq.min(TAU - dq) < 1e-8
            });
            if !dup {
                pts.push(FiberPoint { phi, psi });
            }
        }
        pts.sort_by(|a, b| a.phi.total_cmp(&b.phi));
        (pts, ambiguous)
    }

    /// Number of `z2`-roots with `log|z2| < x2` at angle `φ`.
    pub fn count_below(&self, phi: f64, x2: f64) -> usize {
        self.roots_at(phi).iter().filter(|r| r.norm().ln() < x2).count()
    }

    /// `∫ #{m : L_m(φ) < x2} dφ` over the circle; the count is constant between crossings.
    pub fn below_measure(&self, x2: f64) -> f64 {
        let (pts, _) = self.refined_crossings(x2);
        let mut angles: Vec<f64> = pts.iter().map(|p| p.phi).collect();
        angles.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        if angles.is_empty() {
            return TAU * self.count_below(0.0, x2) as f64;
        }
        let n = angles.len();
        (0..n)
            .map(|i| {
                let a = angles[i];
                let b = if i + 1 < n { angles[i + 1] } else { angles[0] + TAU };
                (b - a) * self.count_below(0.5 * (a + b), x2) as f64
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    #[test]
    fn line_column_at_zero_has_two_crossings() {
        let f = parse_polynomial("1+x+y").unwrap();
        let s = ColumnSweep::new(&f, 0.0, 1024);
        let sol = s.solutions(0.0).unwrap();
        assert_eq!(sol.len(), 2);
        let third = TAU / 3.0;
        assert!((sol[0].phi - third).abs() < 1e-9 && (sol[0].psi - 2.0 * third).abs() < 1e-9);
        assert!((sol[1].phi - 2.0 * third).abs() < 1e-9 && (sol[1].psi - third).abs() < 1e-9);
    }

    #[test]
    fn line_slice_is_exact_interval() {
        // w = -(1 + z1): |w| ranges over [|1 - e^x1|, 1 + e^x1]
        let f = parse_polynomial("1+x+y").unwrap();
        for x1 in [-2.0, -0.3, 0.7, 3.0] {
            let s = ColumnSweep::new(&f, x1, 256);
            let iv = s.intervals();
            assert_eq!(iv.len(), 1);
            let e: f64 = f64::exp(x1);
            assert!((iv[0].0 - (1.0 - e).abs().ln()).abs() < 1e-9, "{x1}: {iv:?}");
            assert!((iv[0].1 - (1.0 + e).ln()).abs() < 1e-9);
        }
    }

    #[test]
    fn product_column_through_factor_is_degenerate() {
        let f = parse_polynomial("(1+x)*(1+y)").unwrap();
        let s = ColumnSweep::new(&f, 0.0, 256);
        assert!(s.is_degenerate());
        assert!((s.degenerate_angles()[0] - PI).abs() < 1e-9);
        let t = ColumnSweep::new(&f, 0.01, 256);
        assert!(!t.is_degenerate());
        let iv = t.intervals();
        assert_eq!(iv.len(), 1);
        assert!(iv[0].0.abs() < 1e-12 && iv[0].1.abs() < 1e-12);
    }

    #[test]
    fn hidden_crossings_near_extremum_are_found() {
        // a level just below the slice maximum, between samples at coarse resolution
        let f = parse_polynomial("1+x+y").unwrap();
        let x1: f64 = 0.5;
        let top = (1.0 + x1.exp()).ln();
        let s = ColumnSweep::new(&f, x1, 16);
        let sol = s.solutions(top - 1e-5).unwrap();
        assert_eq!(sol.len(), 2);
        for p in sol {
            let z1 = Complex64::from_polar(x1.exp(), p.phi);
            let z2 = Complex64::from_polar((top - 1e-5).exp(), p.psi);
            assert!(f.eval(z1, z2).norm() < 1e-8);
        }
    }

    #[test]
    fn monodromy_closes_cycles() {
        // y^2 = x: going once around the circle swaps the two square roots
        let f = parse_polynomial("y^2 - x").unwrap();
        let s = ColumnSweep::new(&f, 0.0, 64);
        assert_eq!(s.wrap, vec![1, 0]);
        let sol = s.solutions(0.0);
        // |y| = 1 for all φ: every sample sits on the level, so this is a tangential case
        assert!(sol.is_ok());
    }
}
