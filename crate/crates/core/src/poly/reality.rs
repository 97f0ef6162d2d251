//! "Real up to multiplication by a constant": find unit `a, b1, b2` with
//! `a·f(z1/b1, z2/b2)` real.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Exponent, LaurentPolynomial};

/// Congruence residual accepted when checking the phase system.
pub const PHASE_TOL: f64 = 1e-9;

/// Unit constants that turn `f` into a real polynomial.
///
/// Applying the witness multiplies the `(j, k)` coefficient by `a · b1^-j · b2^-k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealityWitness {
    pub a: Complex64,
    pub b1: Complex64,
    pub b2: Complex64,
}

impl RealityWitness {
    pub const IDENTITY: RealityWitness = RealityWitness {
        a: Complex64::new(1.0, 0.0),
        b1: Complex64::new(1.0, 0.0),
        b2: Complex64::new(1.0, 0.0),
    };

    pub fn from_phases(alpha: f64, beta1: f64, beta2: f64) -> Self {
        Self {
            a: Complex64::from_polar(1.0, alpha),
            b1: Complex64::from_polar(1.0, beta1),
            b2: Complex64::from_polar(1.0, beta2),
        }
    }

    /// `a·f(z1/b1, z2/b2)`, still complex-typed.
    pub fn apply(&self, f: &LaurentPolynomial) -> LaurentPolynomial {
        f.scale_variables(self.a, self.b1, self.b2)
    }

    /// Applies the witness and drops the (round-off sized) imaginary parts.
    pub fn realify(&self, f: &LaurentPolynomial) -> LaurentPolynomial {
        self.apply(f)
            .real_part()
            .expect("a witness never maps a term to a purely imaginary one")
    }

    /// Largest imaginary part after application, relative to the largest modulus.
    pub fn residual(&self, f: &LaurentPolynomial) -> f64 {
        let g = self.apply(f);
        let scale = g.max_modulus();
        g.terms().map(|(_, c)| c.im.abs()).fold(0.0, f64::max) / scale
    }
}

fn wrap_pi(t: f64) -> f64 {
    t.rem_euclid(PI)
}

fn dist_to_pi_multiple(t: f64) -> f64 {
    let r = wrap_pi(t);
    r.min(PI - r)
}

struct Row {
    v: [i64; 2],
    phase: f64,
}

/// Solves `α − j·β1 − k·β2 + arg a_jk ≡ 0 (mod π)` over the support.
///
/// Rows `(p − p0, θ_p − θ_0)` are reduced by integer row operations (phases carried mod π)
/// to echelon form; zero rows must carry a zero phase, and the pivot rows are solved exactly.
pub fn real_up_to_constant(f: &LaurentPolynomial) -> Option<RealityWitness> {
    let terms: Vec<(Exponent, Complex64)> = f.terms().collect();
    let (p0, c0) = terms[0];
    let theta0 = c0.arg();
    let mut rows: Vec<Row> = terms[1..]
        .iter()
        .map(|(p, c)| Row {
            v: [p.j - p0.j, p.k - p0.k],
            phase: wrap_pi(c.arg() - theta0),
        })
        .collect();

    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, column)
    let mut next = 0;
    for col in 0..2 {
        loop {
            let candidate = (next..rows.len())
                .filter(|&r| rows[r].v[col] != 0)
                .min_by_key(|&r| rows[r].v[col].abs());
            let Some(pr) = candidate else { break };
            rows.swap(next, pr);
            let (pv, pphase, pvec) = (rows[next].v[col], rows[next].phase, rows[next].v);
            let mut reduced_any = false;
            for r in next + 1..rows.len() {
                let e = rows[r].v[col];
                if e == 0 {
                    continue;
                }
                let q = e.div_euclid(pv);
                rows[r].v[0] -= q * pvec[0];
                rows[r].v[1] -= q * pvec[1];
                rows[r].phase = wrap_pi(rows[r].phase - q as f64 * pphase);
                reduced_any |= rows[r].v[col] != 0;
            }
            if !reduced_any {
                pivots.push((next, col));
                next += 1;
                break;
            }
        }
    }

    if rows[next..].iter().any(|r| dist_to_pi_multiple(r.phase) > PHASE_TOL) {
        return None;
    }

    let mut beta = [0.0f64; 2];
    for &(r, col) in pivots.iter().rev() {
        let other = 1 - col;
        let rest = if other > col {
            rows[r].v[other] as f64 * beta[other]
        } else {
            0.0
        };
        beta[col] = (rows[r].phase - rest) / rows[r].v[col] as f64;
    }
    let alpha = p0.j as f64 * beta[0] + p0.k as f64 * beta[1] - theta0;

    let ok = terms.iter().all(|(p, c)| {
        let r = alpha - p.j as f64 * beta[0] - p.k as f64 * beta[1] + c.arg();
        dist_to_pi_multiple(r) <= PHASE_TOL
    });
    ok.then(|| RealityWitness::from_phases(alpha, beta[0], beta[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use proptest::prelude::*;

    #[test]
    fn real_polynomial_gets_trivial_witness() {
        let f = parse_polynomial("1+x+y").unwrap();
        let w = real_up_to_constant(&f).unwrap();
        for z in [w.a, w.b1, w.b2] {
            // phases are multiples of π; the identity up to sign
            assert!(z.im.abs() < 1e-12);
        }
        assert!(w.residual(&f) < 1e-12);
    }

    #[test]
    fn single_phase_absorbed_by_b2() {
        let f = parse_polynomial("1+x+i*y").unwrap();
        let w = real_up_to_constant(&f).unwrap();
        assert!(w.residual(&f) < 1e-12);
        // b2 = ±i, a and b1 real
        assert!(w.b2.re.abs() < 1e-12);
        assert!(w.a.im.abs() < 1e-12 && w.b1.im.abs() < 1e-12);
    }

    /// Brute force over a phase grid: the four congruences of the square with a
    /// π/4 twist have no common solution. Summing them with signs (+,−,−,+) leaves π/4,
    /// so some residual is always at least π/16.
    #[test]
    fn twisted_square_has_no_witness_by_grid_oracle() {
        let f = parse_polynomial("1+x+y+e^{i pi/4}*x*y").unwrap();
        assert!(real_up_to_constant(&f).is_none());

        let n = 180;
        let step = PI / n as f64;
        let mut best = f64::INFINITY;
        for ia in 0..n {
            for ib in 0..2 * n {
                for ic in 0..2 * n {
                    let (a, b1, b2) = (ia as f64 * step, ib as f64 * step, ic as f64 * step);
                    let worst = f
                        .terms()
                        .map(|(p, c)| {
                            dist_to_pi_multiple(a - p.j as f64 * b1 - p.k as f64 * b2 + c.arg())
                        })
                        .fold(0.0, f64::max);
                    best = best.min(worst);
                }
            }
        }
        assert!(best > PI / 16.0 - step, "best residual {best}");
        assert!(best > 1e3 * PHASE_TOL);
    }

    #[test]
    fn non_basis_support_is_handled() {
        // differences (2,0) and (3,0) generate (1,0) only through integer combinations
        let f = LaurentPolynomial::from_terms([
            ((0, 0), Complex64::new(1.0, 0.0)),
            ((2, 0), Complex64::from_polar(1.0, 0.4)),
            ((3, 0), Complex64::from_polar(2.0, 0.6)),
            ((0, 1), Complex64::from_polar(1.0, -1.0)),
        ])
        .unwrap();
        let w = real_up_to_constant(&f).unwrap();
        assert!(w.residual(&f) < 1e-12);

        let g = LaurentPolynomial::from_terms([
            ((0, 0), Complex64::new(1.0, 0.0)),
            ((2, 0), Complex64::from_polar(1.0, 0.4)),
            ((3, 0), Complex64::from_polar(2.0, 0.5)),
        ])
        .unwrap();
        assert!(real_up_to_constant(&g).is_none());
    }

    proptest! {
        #[test]
        fn recovers_random_phases(
            coeffs in prop::collection::vec(((-3i64..4, -3i64..4), 0.2f64..3.0, any::<bool>()), 1..10),
            alpha in 0.0f64..6.28, beta1 in 0.0f64..6.28, beta2 in 0.0f64..6.28,
        ) {
            let f = LaurentPolynomial::from_real_terms(
                coeffs.iter().map(|&(e, m, s)| (e, if s { m } else { -m }))
            );
            prop_assume!(f.is_ok());
            let f = f.unwrap();
            let twisted = f.scale_variables(
                Complex64::from_polar(1.0, alpha),
                Complex64::from_polar(1.0, beta1),
                Complex64::from_polar(1.0, beta2),
            );
            let w = real_up_to_constant(&twisted);
            prop_assert!(w.is_some());
            prop_assert!(w.unwrap().residual(&twisted) < 1e-9);
        }
    }
}
