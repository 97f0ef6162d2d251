//! Area by integrating exact vertical slice lengths over `x1`.
//!
//! The slice through a column is computed in full, so vertical tentacles are integrated to
//! infinity for free; only the horizontal extent needs a window, which is grown until the
//! estimate settles.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{require_area, AmoebaError, ColumnForm, ColumnSweep, Window};
use crate::poly::LaurentPolynomial;

/// Estimates above this multiple of `π²·Area(Δ)` mean a membership bug.
pub const AREA_CAP_FACTOR: f64 = 1.1;
const COLUMN_SWEEP: usize = 256;
const START_DENSITY: f64 = 16.0;
const MAX_DENSITY: f64 = 256.0;
const GROWTH: f64 = 2.0;
const MAX_ROUNDS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaEstimate {
    pub area: f64,
    pub window: Window,
    pub converged: bool,
    /// Estimates of every refinement round.
    pub history: Vec<f64>,
}

/// Length of the amoeba's vertical slice at `x1`. A circle in the fiber gives an infinite
/// slice; such columns have measure zero and count as 0 in the integral below.
pub fn column_slice_length(form: &ColumnForm, x1: f64) -> f64 {
    let sweep = ColumnSweep::from_form(form.clone(), x1, COLUMN_SWEEP);
    let sweep = if sweep.any_ambiguous() {
        ColumnSweep::from_form(form.clone(), x1, 4 * COLUMN_SWEEP)
    } else {
        sweep
    };
    if sweep.is_degenerate() {
        return f64::INFINITY;
    }
    sweep.intervals().iter().map(|(a, b)| b - a).sum()
}

fn integrate(form: &ColumnForm, a: f64, b: f64, density: f64) -> f64 {
    let n = ((b - a) * density).ceil().max(1.0) as usize;
    let h = (b - a) / n as f64;
    let total: f64 = (0..n)
        .into_par_iter()
        .map(|i| {
            let l = column_slice_length(form, a + (i as f64 + 0.5) * h);
            if l.is_finite() {
                l
            } else {
                0.0
            }
        })
        .sum();
    total * h
}

pub fn area_estimate(f: &LaurentPolynomial, rel_tol: f64) -> Result<AreaEstimate, AmoebaError> {
    require_area(f)?;
    let bound = AREA_CAP_FACTOR * PI * PI * f.newton_polygon().area();
    let form = ColumnForm::new(f);
    let mut window = Window::core(f, GROWTH);
    let mut density = START_DENSITY;
    let mut history = Vec::new();
    let mut calm = 0;
    for _ in 0..MAX_ROUNDS {
        let area = integrate(&form, window.x1_min, window.x1_max, density);
        if area > bound {
            return Err(AmoebaError::AreaBoundViolated { area, bound });
        }
        if let Some(&prev) = history.last() {
            let prev: f64 = prev;
            if (area - prev).abs() <= rel_tol * area {
                calm += 1;
            } else {
                calm = 0;
            }
        }
        history.push(area);
        if calm >= 2 {
            return Ok(AreaEstimate {
                area,
                window,
                converged: true,
                history,
            });
        }
        window = window.grow(GROWTH);
        density = (2.0 * density).min(MAX_DENSITY);
    }
    let n = history.len();
    Err(AmoebaError::NoConvergence {
        last: [history[n - 2], history[n - 1]],
    })
}

/// `Area(amoeba) / (π²·Area(Δ))`.
pub fn area_ratio(f: &LaurentPolynomial, rel_tol: f64) -> Result<(f64, AreaEstimate), AmoebaError> {
    let est = area_estimate(f, rel_tol)?;
    Ok((est.area / (PI * PI * f.newton_polygon().area()), est))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    #[test]
    fn line_slice_length_is_exact() {
        let form = ColumnForm::new(&parse_polynomial("1+x+y").unwrap());
        for x1 in [-3.0f64, -0.5, 0.25, 2.0] {
            let e = x1.exp();
            let exact = (1.0 + e).ln() - (1.0 - e).abs().ln();
            assert!((column_slice_length(&form, x1) - exact).abs() < 1e-9);
        }
    }

    #[test]
    fn segment_polygon_is_rejected() {
        let f = parse_polynomial("x+y").unwrap();
        assert_eq!(area_estimate(&f, 0.02), Err(AmoebaError::DegenerateNewtonPolygon));
    }

    #[test]
    fn product_has_zero_area() {
        let f = parse_polynomial("(1+x)*(1+y)").unwrap();
        let a = area_estimate(&f, 0.02);
        // every increment is zero; the estimate settles at once
        let a = a.unwrap();
        assert!(a.area < 1e-9);
    }
}
