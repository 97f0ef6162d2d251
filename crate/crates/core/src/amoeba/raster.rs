//! Windowed verdict grids.
//!
//! A cell is `In` when the amoeba meets it along the vertical line through its center or
//! along the horizontal one. Both lines are exact slices from column sweeps (of `f` and of
//! `f` with its variables swapped), so thin parts of the amoeba narrower than a cell are not
//! lost between cell centers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{require_area, AmoebaError, ColumnForm, ColumnSweep, Window};
use crate::contour::{self, Polyline};
use crate::poly::LaurentPolynomial;

/// Sweep resolution used per raster line.
const LINE_SWEEP: usize = 256;
/// Relative tail mass beyond the window below which the window is considered large enough.
const TAIL_TOL: f64 = 2e-2;
const TOUCH_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cell {
    In,
    Out,
    Boundary,
}

impl Cell {
    fn code(self) -> char {
        match self {
            Cell::In => 'I',
            Cell::Out => 'O',
            Cell::Boundary => 'B',
        }
    }

    fn from_code(c: char) -> Option<Self> {
        match c {
            'I' => Some(Cell::In),
            'O' => Some(Cell::Out),
            'B' => Some(Cell::Boundary),
            _ => None,
        }
    }

    pub fn is_member(self) -> bool {
        self != Cell::Out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmoebaRaster {
    pub window: Window,
    pub resolution: (usize, usize),
    /// `cells[iy * nx + ix]`, `ix` along `x1`.
    pub cells: Vec<Cell>,
    pub area_estimate: f64,
    pub tail_converged: bool,
    /// Cells whose verdict rests on an ambiguous sweep; stored as `Boundary`.
    pub undecided: usize,
}

/// Slice of the amoeba along one raster line.
struct Line {
    intervals: Vec<(f64, f64)>,
    ambiguous: bool,
}

fn slice(form: &ColumnForm, at: f64) -> Line {
    let sweep = ColumnSweep::from_form(form.clone(), at, LINE_SWEEP);
    let sweep = if sweep.any_ambiguous() {
        ColumnSweep::from_form(form.clone(), at, 4 * LINE_SWEEP)
    } else {
        sweep
    };
    Line {
        intervals: sweep.intervals(),
        ambiguous: sweep.any_ambiguous(),
    }
}

fn meets(intervals: &[(f64, f64)], lo: f64, hi: f64) -> bool {
    intervals.iter().any(|&(a, b)| a <= hi + TOUCH_EPS && b >= lo - TOUCH_EPS)
}

fn gap_to(intervals: &[(f64, f64)], lo: f64, hi: f64) -> f64 {
    intervals
        .iter()
        .map(|&(a, b)| (a - hi).max(lo - b).max(0.0))
        .fold(f64::INFINITY, f64::min)
}

fn slice_length(intervals: &[(f64, f64)]) -> f64 {
    intervals.iter().map(|(a, b)| b - a).sum()
}

pub fn rasterize(f: &LaurentPolynomial, window: Window, resolution: (usize, usize)) -> Result<AmoebaRaster, AmoebaError> {
    require_area(f)?;
    let (nx, ny) = resolution;
    if nx < 32 || ny < 32 {
        return Err(AmoebaError::ResolutionTooLow(nx.min(ny)));
    }
    assert!(!window.is_empty(), "empty raster window");
    let (hx, hy) = (window.width() / nx as f64, window.height() / ny as f64);
    let xc = |i: usize| window.x1_min + (i as f64 + 0.5) * hx;
    let yc = |j: usize| window.x2_min + (j as f64 + 0.5) * hy;

    let cols_form = ColumnForm::new(f);
    let rows_form = ColumnForm::new(&f.swap_variables());
    let cols: Vec<Line> = (0..nx).into_par_iter().map(|i| slice(&cols_form, xc(i))).collect();
    let rows: Vec<Line> = (0..ny).into_par_iter().map(|j| slice(&rows_form, yc(j))).collect();

    let mut cells = vec![Cell::Out; nx * ny];
    let mut undecided = 0;
    for j in 0..ny {
        let (ylo, yhi) = (yc(j) - 0.5 * hy, yc(j) + 0.5 * hy);
        for i in 0..nx {
            let (xlo, xhi) = (xc(i) - 0.5 * hx, xc(i) + 0.5 * hx);
            let c = &mut cells[j * nx + i];
            if meets(&cols[i].intervals, ylo, yhi) || meets(&rows[j].intervals, xlo, xhi) {
                *c = Cell::In;
            } else if (cols[i].ambiguous && gap_to(&cols[i].intervals, ylo, yhi) < hy)
                || (rows[j].ambiguous && gap_to(&rows[j].intervals, xlo, xhi) < hx)
            {
                *c = Cell::Boundary;
                undecided += 1;
            }
        }
    }
    let member = cells.iter().map(|c| c.is_member()).collect::<Vec<_>>();
    for j in 0..ny {
        for i in 0..nx {
            if cells[j * nx + i] != Cell::In {
                continue;
            }
            let out_nb = (i > 0 && !member[j * nx + i - 1])
                || (i + 1 < nx && !member[j * nx + i + 1])
                || (j > 0 && !member[(j - 1) * nx + i])
                || (j + 1 < ny && !member[(j + 1) * nx + i]);
            if out_nb {
                cells[j * nx + i] = Cell::Boundary;
            }
        }
    }
    let n_in = cells.iter().filter(|&&c| c == Cell::In).count();
    let n_b = cells.iter().filter(|&&c| c == Cell::Boundary).count();
    let area_estimate = hx * hy * (n_in as f64 + 0.5 * n_b as f64);

    // mass past the window edges, bounded by the slice lengths along them
    let edges = [
        slice(&cols_form, window.x1_min),
        slice(&cols_form, window.x1_max),
        slice(&rows_form, window.x2_min),
        slice(&rows_form, window.x2_max),
    ];
    let tail: f64 = edges.iter().map(|l| slice_length(&l.intervals)).sum();
    let tail_converged = tail.is_finite() && tail <= TAIL_TOL * area_estimate.max(hx * hy);

    Ok(AmoebaRaster {
        window,
        resolution,
        cells,
        area_estimate,
        tail_converged,
        undecided,
    })
}

/// JSON form of a raster with a run-length encoded verdict grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RasterExport {
    pub window: Window,
    pub resolution: (usize, usize),
    /// Runs like `"12O3B5I"`, row by row from the bottom.
    pub rle: String,
    pub area_estimate: f64,
    pub converged: bool,
    pub undecided: usize,
}

impl AmoebaRaster {
    pub fn cell_size(&self) -> (f64, f64) {
        (
            self.window.width() / self.resolution.0 as f64,
            self.window.height() / self.resolution.1 as f64,
        )
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> [f64; 2] {
        let (hx, hy) = self.cell_size();
        [
            self.window.x1_min + (ix as f64 + 0.5) * hx,
            self.window.x2_min + (iy as f64 + 0.5) * hy,
        ]
    }

    pub fn get(&self, ix: usize, iy: usize) -> Cell {
        self.cells[iy * self.resolution.0 + ix]
    }

    /// Cell containing a log-space point, if inside the window.
    pub fn locate(&self, p: [f64; 2]) -> Option<(usize, usize)> {
        let (hx, hy) = self.cell_size();
        let ix = ((p[0] - self.window.x1_min) / hx).floor();
        let iy = ((p[1] - self.window.x2_min) / hy).floor();
        let (nx, ny) = self.resolution;
        (ix >= 0.0 && iy >= 0.0 && (ix as usize) < nx && (iy as usize) < ny).then(|| (ix as usize, iy as usize))
    }

    pub fn count(&self, c: Cell) -> usize {
        self.cells.iter().filter(|&&x| x == c).count()
    }

    pub fn boundary_cells(&self) -> Vec<(usize, usize)> {
        let nx = self.resolution.0;
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == Cell::Boundary)
            .map(|(k, _)| (k % nx, k / nx))
            .collect()
    }

    /// Outline of the member region by marching squares on the cell-center grid.
    pub fn boundary_polylines(&self) -> Vec<Polyline> {
        let (nx, ny) = self.resolution;
        // pad by one Out cell so that every outline closes or ends on the padding
        let xs: Vec<f64> = (0..nx + 2).map(|i| self.cell_center(0, 0)[0] + (i as f64 - 1.0) * self.cell_size().0).collect();
        let ys: Vec<f64> = (0..ny + 2).map(|j| self.cell_center(0, 0)[1] + (j as f64 - 1.0) * self.cell_size().1).collect();
        let mut values = vec![0.0; (nx + 2) * (ny + 2)];
        for i in 0..nx {
            for j in 0..ny {
                if self.get(i, j).is_member() {
                    values[(i + 1) * (ny + 2) + j + 1] = 1.0;
                }
            }
        }
        contour::contour(
            &contour::Grid {
                xs: &xs,
                ys: &ys,
                values: &values,
            },
            0.5,
        )
    }

    pub fn export(&self) -> RasterExport {
        let mut rle = String::new();
        let mut run: Option<(Cell, usize)> = None;
        for &c in &self.cells {
            run = match run {
                Some((d, n)) if d == c => Some((d, n + 1)),
                Some((d, n)) => {
                    rle.push_str(&format!("{n}{}", d.code()));
                    Some((c, 1))
                }
                None => Some((c, 1)),
            };
        }
        if let Some((d, n)) = run {
            rle.push_str(&format!("{n}{}", d.code()));
        }
        RasterExport {
            window: self.window,
            resolution: self.resolution,
            rle,
            area_estimate: self.area_estimate,
            converged: self.tail_converged,
            undecided: self.undecided,
        }
    }

    pub fn from_export(e: &RasterExport) -> Option<Self> {
        let mut cells = Vec::with_capacity(e.resolution.0 * e.resolution.1);
        let mut num = 0usize;
        for ch in e.rle.chars() {
            if let Some(d) = ch.to_digit(10) {
                num = num * 10 + d as usize;
            } else {
                let c = Cell::from_code(ch)?;
                cells.extend(std::iter::repeat(c).take(num));
                num = 0;
            }
        }
        (cells.len() == e.resolution.0 * e.resolution.1).then(|| Self {
            window: e.window,
            resolution: e.resolution,
            cells,
            area_estimate: e.area_estimate,
            tail_converged: e.converged,
            undecided: e.undecided,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amoeba::{membership, LogPoint};
    use crate::poly::parse_polynomial;

    #[test]
    fn line_raster_is_symmetric() {
        let f = parse_polynomial("1+x+y").unwrap();
        let r = rasterize(&f, Window::square(5.0), (64, 64)).unwrap();
        for i in 0..64 {
            for j in 0..64 {
                assert_eq!(r.get(i, j).is_member(), r.get(j, i).is_member(), "({i},{j})");
            }
        }
        assert!(r.tail_converged);
        assert_eq!(r.undecided, 0);
    }

    #[test]
    fn raster_agrees_with_pointwise_membership_away_from_the_boundary() {
        let f = parse_polynomial("1+x+y").unwrap();
        let r = rasterize(&f, Window::square(4.0), (32, 32)).unwrap();
        for i in 0..32 {
            for j in 0..32 {
                if r.get(i, j) == Cell::Boundary {
                    continue;
                }
                let c = r.cell_center(i, j);
                let m = membership(&f, LogPoint::new(c[0], c[1])).unwrap();
                assert_eq!(m.is_in(), r.get(i, j) == Cell::In, "({i},{j})");
            }
        }
    }

    #[test]
    fn monomial_raster_is_empty() {
        // a single monomial has no zeros; it fails the area precondition
        let f = parse_polynomial("x^2*y^3").unwrap();
        assert!(rasterize(&f, Window::square(5.0), (32, 32)).is_err());
        // a polynomial with positive area whose window misses the amoeba
        let g = parse_polynomial("1+x+y").unwrap();
        let r = rasterize(&g, Window::new(3.0, 5.0, 0.0, 2.0), (32, 32)).unwrap();
        assert_eq!(r.count(Cell::Out), 32 * 32);
        assert_eq!(r.area_estimate, 0.0);
    }

    #[test]
    fn product_raster_is_two_thin_lines() {
        let f = parse_polynomial("(1+x)*(1+y)").unwrap();
        let r = rasterize(&f, Window::square(5.0), (128, 128)).unwrap();
        let (h, _) = r.cell_size();
        for i in 0..128 {
            for j in 0..128 {
                if r.get(i, j).is_member() {
                    let c = r.cell_center(i, j);
                    assert!(c[0].abs() <= h || c[1].abs() <= h, "{c:?}");
                }
            }
        }
        // only the four cells around the crossing have no Out neighbour
        assert!(r.count(Cell::In) <= 4);
    }

    #[test]
    fn export_round_trips() {
        let f = parse_polynomial("1+x+y").unwrap();
        let r = rasterize(&f, Window::square(5.0), (40, 32)).unwrap();
        let e = r.export();
        let json = serde_json::to_string(&e).unwrap();
        let back: RasterExport = serde_json::from_str(&json).unwrap();
        assert_eq!(AmoebaRaster::from_export(&back).unwrap(), r);
    }

    #[test]
    fn line_outline_is_one_curve() {
        let f = parse_polynomial("1+x+y").unwrap();
        let r = rasterize(&f, Window::square(5.0), (64, 64)).unwrap();
        // one outline around the body; the thin diagonal tentacle breaks into islands
        // where it only touches cells at their corners
        let mut p = r.boundary_polylines();
        p.sort_by_key(|q| std::cmp::Reverse(q.points.len()));
        assert!(p[0].closed && p[0].points.len() > 100);
        for q in &p[1..] {
            assert!(q.closed);
            for pt in &q.points {
                assert!(pt[0] > 1.0 && (pt[0] - pt[1]).abs() < 0.5, "{pt:?}");
            }
        }
    }
}
