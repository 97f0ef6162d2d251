//! Laurent polynomials in two variables with complex coefficients.

mod newton;
mod parse;
mod reality;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use newton::{Edge, NewtonPolygon};
pub use parse::parse_polynomial;
pub use reality::{real_up_to_constant, RealityWitness};

/// Lattice exponent `(j, k)` of the monomial `x^j y^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Exponent {
    pub j: i64,
    pub k: i64,
}

impl Exponent {
    pub const fn new(j: i64, k: i64) -> Self {
        Self { j, k }
    }
}

impl From<(i64, i64)> for Exponent {
    fn from((j, k): (i64, i64)) -> Self {
        Self { j, k }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("polynomial is empty after combining like terms")]
    EmptyPolynomial,
    #[error("matrix {0:?} is not unimodular")]
    NotUnimodular([[i64; 2]; 2]),
    #[error("edge index {index} out of range (polygon has {count} edges)")]
    NoSuchEdge { index: usize, count: usize },
    #[error("invalid JSON polynomial: {0}")]
    Json(String),
}

/// One serialized term, the JSON interchange form of a polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub j: i64,
    pub k: i64,
    pub re: f64,
    pub im: f64,
}

/// A finite sum `Σ a_jk x^j y^k` with nonzero complex coefficients.
///
/// Every stored coefficient is nonzero and there is at least one term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<TermRecord>", into = "Vec<TermRecord>")]
pub struct LaurentPolynomial {
    terms: BTreeMap<Exponent, Complex64>,
}

impl LaurentPolynomial {
    /// Collects terms, combining like exponents and dropping exact zeros.
    pub fn from_terms<I, E>(terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (E, Complex64)>,
        E: Into<Exponent>,
    {
        let mut map: BTreeMap<Exponent, Complex64> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e.into()).or_default() += c;
        }
        map.retain(|_, c| c.norm() != 0.0);
        if map.is_empty() {
            return Err(PolyError::EmptyPolynomial);
        }
        Ok(Self { terms: map })
    }

    /// Real-coefficient convenience constructor.
    pub fn from_real_terms<I, E>(terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (E, f64)>,
        E: Into<Exponent>,
    {
        Self::from_terms(terms.into_iter().map(|(e, c)| (e, Complex64::new(c, 0.0))))
    }

    pub fn monomial(e: impl Into<Exponent>, c: Complex64) -> Result<Self, PolyError> {
        Self::from_terms([(e.into(), c)])
    }

    pub fn from_json(text: &str) -> Result<Self, PolyError> {
        serde_json::from_str(text).map_err(|e| PolyError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("term records always serialize")
    }

    pub fn terms(&self) -> impl ExactSizeIterator<Item = (Exponent, Complex64)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: Exponent) -> Complex64 {
        self.terms.get(&e).copied().unwrap_or_default()
    }

    pub fn support(&self) -> Vec<Exponent> {
        self.terms.keys().copied().collect()
    }

    pub fn max_modulus(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| c * z1.powi(e.j as i32) * z2.powi(e.k as i32))
            .sum()
    }

    /// Evaluates the real part of the coefficients at a real point.
    pub fn eval_real(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c.re * x.powi(e.j as i32) * y.powi(e.k as i32))
            .sum()
    }

    /// `(∂f/∂x, ∂f/∂y)` at a real point, real parts of coefficients only.
    pub fn gradient_real(&self, x: f64, y: f64) -> [f64; 2] {
        let mut g = [0.0; 2];
        for (e, c) in &self.terms {
            if e.j != 0 {
                g[0] += c.re * e.j as f64 * x.powi(e.j as i32 - 1) * y.powi(e.k as i32);
            }
            if e.k != 0 {
                g[1] += c.re * e.k as f64 * x.powi(e.j as i32) * y.powi(e.k as i32 - 1);
            }
        }
        g
    }

    /// Second derivatives `[[f_xx, f_xy], [f_xy, f_yy]]` at a real point.
    pub fn hessian_real(&self, x: f64, y: f64) -> [[f64; 2]; 2] {
        let mut h = [[0.0; 2]; 2];
        for (e, c) in &self.terms {
            let (j, k) = (e.j as f64, e.k as f64);
            let (ji, ki) = (e.j as i32, e.k as i32);
            h[0][0] += c.re * j * (j - 1.0) * x.powi(ji - 2) * y.powi(ki);
            h[1][1] += c.re * k * (k - 1.0) * x.powi(ji) * y.powi(ki - 2);
            h[0][1] += c.re * j * k * x.powi(ji - 1) * y.powi(ki - 1);
        }
        h[1][0] = h[0][1];
        h
    }

    /// `true` when every imaginary part is below `rel_tol` times the largest modulus.
    pub fn is_real(&self, rel_tol: f64) -> bool {
        let scale = self.max_modulus();
        self.terms.values().all(|c| c.im.abs() <= rel_tol * scale)
    }

    /// Drops imaginary parts. Fails only if every real part is zero.
    pub fn real_part(&self) -> Result<Self, PolyError> {
        Self::from_real_terms(self.terms.iter().map(|(e, c)| (*e, c.re)))
    }

    pub fn scale(&self, c: Complex64) -> Result<Self, PolyError> {
        Self::from_terms(self.terms.iter().map(|(e, a)| (*e, a * c)))
    }

    /// `a · f(z1/b1, z2/b2)`: the `(j, k)` coefficient is multiplied by `a · b1^-j · b2^-k`.
    pub fn scale_variables(&self, a: Complex64, b1: Complex64, b2: Complex64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (*e, a * c * b1.powi(-(e.j as i32)) * b2.powi(-(e.k as i32))))
            .collect();
        Self { terms }
    }

    /// Complex conjugate of every coefficient, i.e. `z ↦ conj(f(conj z))`.
    pub fn conjugate_reflect(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (*e, c.conj())).collect();
        Self { terms }
    }

    /// Monomial substitution `(j, k) ↦ M·(j, k)`.
    pub fn apply_unimodular(&self, m: &Unimodular) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (m.apply(*e), *c)).collect();
        Self { terms }
    }

    /// Exchanges the roles of `x` and `y`.
    pub fn swap_variables(&self) -> Self {
        self.apply_unimodular(&Unimodular::SWAP)
    }

    /// Multiplies by `x^dj y^dk`.
    pub fn shift(&self, dj: i64, dk: i64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (Exponent::new(e.j + dj, e.k + dk), *c))
            .collect();
        Self { terms }
    }

    pub fn newton_polygon(&self) -> NewtonPolygon {
        NewtonPolygon::from_support(self.terms.keys().copied())
    }

    /// Truncation of `f` to edge `index`, in the primitive coordinate along the edge.
    ///
    /// Coefficient `m` (ascending) is `a_{start + m·direction}`; the degree is `d_k`.
    pub fn edge_polynomial(&self, index: usize) -> Result<Vec<Complex64>, PolyError> {
        let polygon = self.newton_polygon();
        let edge = polygon.edges().get(index).ok_or(PolyError::NoSuchEdge {
            index,
            count: polygon.edges().len(),
        })?;
        Ok(edge
            .lattice_points()
            .map(|p| self.coeff(p))
            .collect::<Vec<_>>())
    }

    /// Largest absolute value of the exponents, useful for scaling heuristics.
    pub fn max_exponent(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| e.j.abs().max(e.k.abs()))
            .max()
            .unwrap_or(0)
    }

    pub fn degree_range_in_y(&self) -> (i64, i64) {
        let lo = self.terms.keys().map(|e| e.k).min().unwrap_or(0);
        let hi = self.terms.keys().map(|e| e.k).max().unwrap_or(0);
        (lo, hi)
    }

    /// `max over terms of log|a| + <e, x>`, the log of the dominant term magnitude.
    pub fn log_max_term(&self, x1: f64, x2: f64) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c.norm().ln() + e.j as f64 * x1 + e.k as f64 * x2)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Points of log space where three non-collinear terms tie for the maximum modulus:
    /// the vertices of the tropical curve built from `log|a_jk|`.
    pub fn tropical_vertices(&self) -> Vec<[f64; 2]> {
        let t: Vec<(Exponent, f64)> = self.terms.iter().map(|(e, c)| (*e, c.norm().ln())).collect();
        let mut out: Vec<[f64; 2]> = Vec::new();
        for a in 0..t.len() {
            for b in a + 1..t.len() {
                for c in b + 1..t.len() {
                    let (p, q, r) = (t[a], t[b], t[c]);
                    let (u1, u2) = ((q.0.j - p.0.j) as f64, (q.0.k - p.0.k) as f64);
                    let (v1, v2) = ((r.0.j - p.0.j) as f64, (r.0.k - p.0.k) as f64);
                    let det = u1 * v2 - u2 * v1;
                    if det == 0.0 {
                        continue;
                    }
                    let (rhs1, rhs2) = (p.1 - q.1, p.1 - r.1);
                    let x = [(rhs1 * v2 - rhs2 * u2) / det, (u1 * rhs2 - v1 * rhs1) / det];
                    let level = p.1 + p.0.j as f64 * x[0] + p.0.k as f64 * x[1];
                    let top = self.log_max_term(x[0], x[1]);
                    if top <= level + 1e-9 * (1.0 + level.abs())
                        && !out.iter().any(|y| (y[0] - x[0]).abs() + (y[1] - x[1]).abs() < 1e-9)
                    {
                        out.push(x);
                    }
                }
            }
        }
        out
    }

    /// Index of a term whose modulus exceeds the sum of all the others at `Log⁻¹(x)`.
    pub fn dominant_term(&self, x1: f64, x2: f64) -> Option<Exponent> {
        let logs: Vec<(Exponent, f64)> = self
            .terms
            .iter()
            .map(|(e, c)| (*e, c.norm().ln() + e.j as f64 * x1 + e.k as f64 * x2))
            .collect();
        let (best, top) = logs
            .iter()
            .copied()
            .max_by(|a, b| a.1.total_cmp(&b.1))?;
        let rest: f64 = logs
            .iter()
            .filter(|(e, _)| *e != best)
            .map(|(_, l)| (l - top).exp())
            .sum();
        (rest < 1.0).then_some(best)
    }
}

impl TryFrom<Vec<TermRecord>> for LaurentPolynomial {
    type Error = PolyError;

    fn try_from(records: Vec<TermRecord>) -> Result<Self, Self::Error> {
        Self::from_terms(
            records
                .into_iter()
                .map(|r| (Exponent::new(r.j, r.k), Complex64::new(r.re, r.im))),
        )
    }
}

impl From<LaurentPolynomial> for Vec<TermRecord> {
    fn from(p: LaurentPolynomial) -> Self {
        p.terms
            .into_iter()
            .map(|(e, c)| TermRecord {
                j: e.j,
                k: e.k,
                re: c.re,
                im: c.im,
            })
            .collect()
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn mul(self, rhs: Self) -> LaurentPolynomial {
        let mut map: BTreeMap<Exponent, Complex64> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                *map.entry(Exponent::new(a.j + b.j, a.k + b.k)).or_default() += ca * cb;
            }
        }
        map.retain(|_, c| c.norm() != 0.0);
        // a product of nonzero Laurent polynomials is nonzero
        debug_assert!(!map.is_empty());
        LaurentPolynomial { terms: map }
    }
}

fn fmt_coeff(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else {
        format!("({},{})", c.re, c.im)
    }
}

impl fmt::Display for LaurentPolynomial {
    /// Writes a string accepted by [`parse_polynomial`] that round-trips exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            f.write_str(&fmt_coeff(*c))?;
            if e.j != 0 {
                write!(f, "*x^{}", e.j)?;
            }
            if e.k != 0 {
                write!(f, "*y^{}", e.k)?;
            }
        }
        Ok(())
    }
}

/// A 2×2 integer matrix with determinant ±1, acting on exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Unimodular([[i64; 2]; 2]);

impl Unimodular {
    pub const IDENTITY: Unimodular = Unimodular([[1, 0], [0, 1]]);
    pub const SWAP: Unimodular = Unimodular([[0, 1], [1, 0]]);

    pub fn new(m: [[i64; 2]; 2]) -> Result<Self, PolyError> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det.abs() != 1 {
            return Err(PolyError::NotUnimodular(m));
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.0
    }

    pub fn det(&self) -> i64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn apply(&self, e: Exponent) -> Exponent {
        let m = &self.0;
        Exponent::new(m[0][0] * e.j + m[0][1] * e.k, m[1][0] * e.j + m[1][1] * e.k)
    }

    pub fn inverse(&self) -> Self {
        let m = &self.0;
        let d = self.det();
        Self([[d * m[1][1], -d * m[0][1]], [-d * m[1][0], d * m[0][0]]])
    }

    /// How log-space points move: the amoeba of `f∘M` is `M^{-T}` applied to the amoeba of `f`.
    pub fn log_map(&self, x: [f64; 2]) -> [f64; 2] {
        let inv = self.inverse().0;
        // M^{-T} x
        [
            inv[0][0] as f64 * x[0] + inv[1][0] as f64 * x[1],
            inv[0][1] as f64 * x[0] + inv[1][1] as f64 * x[1],
        ]
    }

    pub fn compose(&self, other: &Unimodular) -> Self {
        let (a, b) = (&self.0, &other.0);
        Self([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }

    /// Product of random elementary shears and swaps, for invariance checks.
    pub fn random<R: rand::Rng>(rng: &mut R, steps: usize) -> Self {
        let mut m = Self::IDENTITY;
        for _ in 0..steps {
            let s = if rng.gen_bool(0.5) { 1 } else { -1 };
            let g = match rng.gen_range(0..3) {
                0 => Self([[1, s], [0, 1]]),
                1 => Self([[1, 0], [s, 1]]),
                _ => Self::SWAP,
            };
            m = g.compose(&m);
        }
        m
    }
}
