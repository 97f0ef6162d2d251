//! Univariate complex polynomial roots.
//!
//! The workhorse is Aberth–Ehrlich with starting points read off the Newton polygon of
//! `log|c_k|`, which keeps relative accuracy when root moduli differ by many orders of
//! magnitude. Warm starts make continuation along a parameter cheap. The companion-matrix
//! eigenvalue route is kept as a fallback and an independent check.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

const MAX_ITER: usize = 200;

/// Drops exactly-zero leading coefficients.
fn trim(coeffs: &[Complex64]) -> &[Complex64] {
    let mut n = coeffs.len();
    while n > 0 && coeffs[n - 1].norm() == 0.0 {
        n -= 1;
    }
    &coeffs[..n]
}

/// Ascending-coefficient Horner evaluation of `p(z)` and `p'(z)`.
fn eval_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = c[c.len() - 1];
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c[..c.len() - 1].iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

pub fn eval(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

/// Newton correction `p(z)/p'(z)`, evaluated through the reversed polynomial when `|z| > 1`
/// so that large roots do not overflow.
fn newton_ratio(c: &[Complex64], z: Complex64) -> Complex64 {
    let n = c.len() - 1;
    if z.norm() <= 1.0 {
        let (p, dp) = eval_with_derivative(c, z);
        return p / dp;
    }
    let y = z.inv();
    let rev: Vec<Complex64> = c.iter().rev().copied().collect();
    let (q, dq) = eval_with_derivative(&rev, y);
    // p(z) = z^n q(1/z), p'(z) = z^{n-1} (n q(y) - y q'(y))
    z * q / (Complex64::new(n as f64, 0.0) * q - y * dq)
}

/// Starting points on circles whose radii come from the upper hull of `(k, log|c_k|)`.
pub fn newton_polygon_guesses(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let pts: Vec<(usize, f64)> = c
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 0.0)
        .map(|(k, a)| (k, a.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) as f64 * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0) as f64;
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(n);
    // zero low coefficients: roots at the origin are handled by the caller
    for w in hull.windows(2) {
        let (i, li) = w[0];
        let (j, lj) = w[1];
        let m = j - i;
        let r = ((li - lj) / m as f64).exp();
        for s in 0..m {
            let theta = 2.0 * PI * s as f64 / m as f64 + PI / (2.0 * n as f64) + 0.4;
            out.push(Complex64::from_polar(r, theta));
        }
    }
    out
}

/// Result of a root computation; `converged` is false when the iteration cap was hit.
#[derive(Debug, Clone)]
pub struct Roots {
    pub roots: Vec<Complex64>,
    pub converged: bool,
}

fn closed_form(c: &[Complex64]) -> Option<Vec<Complex64>> {
    match c.len() {
        2 => Some(vec![-c[0] / c[1]]),
        3 => {
            let (a, b, cc) = (c[2], c[1], c[0]);
            let disc = (b * b - 4.0 * a * cc).sqrt();
            // pick the sign that avoids cancellation
            let s = if (b.conj() * disc).re >= 0.0 { disc } else { -disc };
            let q = -(b + s) / 2.0;
            if q.norm() == 0.0 {
                return Some(vec![Complex64::new(0.0, 0.0); 2]);
            }
            Some(vec![q / a, cc / q])
        }
        _ => None,
    }
}

/// All roots of `Σ c_k z^k` (ascending coefficients), optionally warm-started.
///
/// Exactly-zero leading coefficients lower the degree; zero trailing coefficients give roots at 0.
pub fn roots(coeffs: &[Complex64], warm: Option<&[Complex64]>) -> Roots {
    let c = trim(coeffs);
    if c.len() <= 1 {
        return Roots {
            roots: Vec::new(),
            converged: true,
        };
    }
    let zeros = c.iter().take_while(|a| a.norm() == 0.0).count();
    let c = &c[zeros..];
    let mut out = vec![Complex64::new(0.0, 0.0); zeros];
    if let Some(r) = closed_form(c) {
        out.extend(r);
        return Roots {
            roots: out,
            converged: true,
        };
    }
    let n = c.len() - 1;
    let mut z: Vec<Complex64> = match warm {
        Some(w) if w.len() == n && w.iter().all(|r| r.norm().is_finite() && r.norm() > 0.0) => {
            w.to_vec()
        }
        _ => newton_polygon_guesses(c),
    };
    let converged = aberth(c, &mut z);
    if !converged {
        if let Some(eig) = companion_roots(c) {
            out.extend(eig);
            return Roots {
                roots: out,
                converged: true,
            };
        }
    }
    out.extend(z);
    Roots {
        roots: out,
        converged,
    }
}

fn aberth(c: &[Complex64], z: &mut [Complex64]) -> bool {
    let n = z.len();
    for _ in 0..MAX_ITER {
        let mut done = true;
        for i in 0..n {
            let ratio = newton_ratio(c, z[i]);
            if !ratio.norm().is_finite() {
                // landed on a critical point; nudge
                z[i] *= Complex64::from_polar(1.0 + 1e-8, 1e-8);
                done = false;
                continue;
            }
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            let w = if w.norm().is_finite() { w } else { ratio };
            z[i] -= w;
            if w.norm() > 4.0 * f64::EPSILON * z[i].norm() {
                done = false;
            }
        }
        if done {
            return true;
        }
    }
    false
}

/// Eigenvalues of the companion matrix (Schur form), leading coefficient must be nonzero.
pub fn companion_roots(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let c = trim(coeffs);
    let n = c.len().checked_sub(1)?;
    if n == 0 {
        return Some(Vec::new());
    }
    let lead = c[n];
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / lead;
    }
    let schur = Schur::try_new(m, 1e-15, 10_000)?;
    let (_, t) = schur.unpack();
    Some((0..n).map(|i| t[(i, i)]).collect())
}

/// Real roots (imaginary part below `tol` relative), sorted ascending.
pub fn real_roots(coeffs: &[Complex64], tol: f64) -> Vec<f64> {
    let mut out: Vec<f64> = roots(coeffs, None)
        .roots
        .into_iter()
        .filter(|z| z.im.abs() <= tol * z.norm().max(1.0))
        .map(|z| z.re)
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Smallest relative distance between two roots; infinite for fewer than two roots.
pub fn min_separation(roots: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let scale = roots[i].norm().max(roots[j].norm()).max(1e-300);
            best = best.min((roots[i] - roots[j]).norm() / scale);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn from_roots(rs: &[Complex64]) -> Vec<Complex64> {
        let mut p = vec![c(1.0, 0.0)];
        for &r in rs {
            let mut q = vec![c(0.0, 0.0); p.len() + 1];
            for (k, &a) in p.iter().enumerate() {
                q[k + 1] += a;
                q[k] -= a * r;
            }
            p = q;
        }
        p
    }

    fn matched(mut a: Vec<Complex64>, b: &[Complex64], tol: f64) -> bool {
        b.iter().all(|r| {
            let (i, d) = a
                .iter()
                .enumerate()
                .map(|(i, z)| (i, (z - r).norm() / r.norm().max(1.0)))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            a.swap_remove(i);
            d < tol
        })
    }

    #[test]
    fn cubic_roots_of_unity() {
        let p = [c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        let r = roots(&p, None);
        assert!(r.converged);
        let expect: Vec<_> = (0..3).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 3.0)).collect();
        assert!(matched(r.roots, &expect, 1e-13));
    }

    #[test]
    fn widely_spread_moduli_keep_relative_accuracy() {
        let rs = [c(1e-30, 0.0), c(-2.0, 1.0), c(3e25, -1e25), c(0.5e-10, 0.0)];
        let p = from_roots(&rs);
        let r = roots(&p, None);
        assert!(matched(r.roots, &rs, 1e-9));
    }

    #[test]
    fn zero_and_degenerate_inputs() {
        assert!(roots(&[c(3.0, 0.0)], None).roots.is_empty());
        let r = roots(&[c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)], None);
        assert_eq!(r.roots.len(), 2);
        assert!(r.roots.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn real_roots_of_cubic() {
        // (t-1)(t+2)(t^2+1)
        let p = from_roots(&[c(1.0, 0.0), c(-2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)]);
        let r = real_roots(&p, 1e-9);
        assert_eq!(r.len(), 2);
        assert!((r[0] + 2.0).abs() < 1e-12 && (r[1] - 1.0).abs() < 1e-12);
    }

    proptest! {
        /// Aberth and the companion-matrix eigenvalues agree.
        #[test]
        fn aberth_matches_companion(
            rs in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 3..8)
        ) {
            let rs: Vec<Complex64> = rs.into_iter().map(|(a, b)| c(a, b)).collect();
            prop_assume!(min_separation(&rs) > 1e-2);
            let p = from_roots(&rs);
            let a = roots(&p, None);
            prop_assert!(a.converged);
            let e = companion_roots(&p).unwrap();
            prop_assert!(matched(a.roots.clone(), &e, 1e-7));
            prop_assert!(matched(a.roots, &rs, 1e-7));
        }

        #[test]
        fn warm_start_reaches_same_roots(
            rs in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 3..6),
            jitter in 0.0f64..0.05,
        ) {
            let rs: Vec<Complex64> = rs.into_iter().map(|(a, b)| c(a, b)).collect();
            prop_assume!(min_separation(&rs) > 1e-1);
            let p = from_roots(&rs);
            let warm: Vec<Complex64> = rs.iter().map(|z| z + c(jitter, -jitter)).collect();
            let r = roots(&p, Some(&warm));
            prop_assert!(matched(r.roots, &rs, 1e-8));
        }
    }
}
