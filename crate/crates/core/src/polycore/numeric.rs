//! Floating images of exact polynomials and certified evaluation.
//!
//! `CPoly` is the f64-complex shadow of an `MPoly`, used inside sampling
//! loops where exact arithmetic would be wasteful. Every evaluation returns
//! a running rounding-error bound relative to the accumulated term
//! magnitudes; when a caller finds the bound too large it re-evaluates in
//! the paired-limb extended mode.

use num_complex::Complex64;

use super::dd::Cdd;
use super::mpoly::{MPoly, VarSet};

const EPS: f64 = 2.220446049250313e-16;
const EPS_DD: f64 = 4.93e-32;

/// Complex floating point in either working precision.
#[derive(Clone, Debug)]
pub struct CPoint {
    pub coords: Vec<Complex64>,
    pub precision_bits: u32,
}

impl CPoint {
    pub fn new(coords: Vec<Complex64>) -> Self {
        CPoint {
            coords,
            precision_bits: 53,
        }
    }

    pub fn with_precision(coords: Vec<Complex64>, precision_bits: u32) -> Self {
        assert!(precision_bits >= 53, "precision below 53 bits");
        CPoint {
            coords,
            precision_bits,
        }
    }
}

/// Value with an accumulated rounding-error bound (absolute).
#[derive(Copy, Clone, Debug)]
pub struct Certified {
    pub value: Complex64,
    pub bound: f64,
}

/// f64 shadow of an exact polynomial: flat term list, exponents aligned
/// with the variable set.
#[derive(Clone, Debug)]
pub struct CPoly {
    vars: VarSet,
    terms: Vec<(Vec<u32>, Complex64)>,
    max_deg: u32,
}

impl CPoly {
    pub fn from_mpoly(p: &MPoly) -> Self {
        let terms: Vec<(Vec<u32>, Complex64)> = p
            .terms()
            .map(|(m, c)| (m.exps().to_vec(), c.to_c64()))
            .collect();
        CPoly {
            vars: p.vars().clone(),
            terms,
            max_deg: p.degree(),
        }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Evaluate with a running error bound.
    pub fn eval(&self, point: &[Complex64]) -> Certified {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut mag = 0.0f64;
        for (exps, c) in &self.terms {
            let mut t = *c;
            for (x, &e) in point.iter().zip(exps) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
            mag += t.norm();
        }
        let ops = (self.max_deg as f64 + 2.0) * 2.0;
        Certified {
            value: acc,
            bound: mag * EPS * ops,
        }
    }

    /// Extended-precision evaluation via paired-limb arithmetic.
    pub fn eval_dd(&self, point: &[Cdd]) -> Certified {
        let mut acc = Cdd::ZERO;
        let mut mag = 0.0f64;
        for (exps, c) in &self.terms {
            let mut t = Cdd::from_c64(*c);
            for (x, &e) in point.iter().zip(exps) {
                for _ in 0..e {
                    t = t.mul(*x);
                }
            }
            acc = acc.add(t);
            mag += t.norm();
        }
        let ops = (self.max_deg as f64 + 2.0) * 2.0;
        Certified {
            value: acc.to_c64(),
            bound: mag * EPS_DD * ops,
        }
    }

    /// Evaluation generic over the working scalar.
    pub fn eval_scalar<S: super::dd::CScalar>(&self, point: &[S]) -> S {
        let mut acc = S::s_zero();
        for (exps, c) in &self.terms {
            let mut t = S::from_c64(*c);
            for (x, &e) in point.iter().zip(exps) {
                for _ in 0..e {
                    t = t * *x;
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Dense univariate coefficient vector in `var` with the remaining
    /// coordinates fixed. `point` is indexed by the full variable set; the
    /// entry at `var` is ignored.
    pub fn univariate_at(&self, var: usize, point: &[Complex64]) -> Vec<Complex64> {
        let deg = self
            .terms
            .iter()
            .map(|(e, _)| e[var])
            .max()
            .unwrap_or(0) as usize;
        let mut out = vec![Complex64::new(0.0, 0.0); deg + 1];
        for (exps, c) in &self.terms {
            let mut t = *c;
            for (i, (x, &e)) in point.iter().zip(exps).enumerate() {
                if i == var {
                    continue;
                }
                for _ in 0..e {
                    t *= x;
                }
            }
            out[exps[var] as usize] += t;
        }
        out
    }

    pub fn univariate_at_dd(&self, var: usize, point: &[Cdd]) -> Vec<Cdd> {
        let deg = self
            .terms
            .iter()
            .map(|(e, _)| e[var])
            .max()
            .unwrap_or(0) as usize;
        let mut out = vec![Cdd::ZERO; deg + 1];
        for (exps, c) in &self.terms {
            let mut t = Cdd::from_c64(*c);
            for (i, (x, &e)) in point.iter().zip(exps).enumerate() {
                if i == var {
                    continue;
                }
                for _ in 0..e {
                    t = t.mul(*x);
                }
            }
            out[exps[var] as usize] = out[exps[var] as usize].add(t);
        }
        out
    }
}

/// Certified evaluation of an exact polynomial at a floating point,
/// switching to extended precision when the f64 bound is too loose
/// relative to the requested tolerance.
pub fn eval_complex(p: &MPoly, point: &CPoint) -> Certified {
    assert_eq!(
        point.coords.len(),
        p.vars().len(),
        "point arity mismatches variable count"
    );
    let cp = CPoly::from_mpoly(p);
    let first = cp.eval(&point.coords);
    if point.precision_bits <= 53 {
        return first;
    }
    let dd_point: Vec<Cdd> = point.coords.iter().map(|&z| Cdd::from_c64(z)).collect();
    cp.eval_dd(&dd_point)
}

/// Horner evaluation of a dense univariate complex polynomial.
pub fn horner(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Horner value together with the standard running bound
/// `eps * sum |c_k| |x|^k * (2k+1)`.
pub fn horner_certified(coeffs: &[Complex64], x: Complex64) -> Certified {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut mag = 0.0f64;
    let ax = x.norm();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
        mag = mag * ax + c.norm();
    }
    Certified {
        value: acc,
        bound: mag * EPS * (2.0 * coeffs.len() as f64 + 1.0),
    }
}

pub fn horner_dd(coeffs: &[Cdd], x: Cdd) -> Cdd {
    let mut acc = Cdd::ZERO;
    for c in coeffs.iter().rev() {
        acc = acc.mul(x).add(*c);
    }
    acc
}

/// Derivative coefficients of a dense univariate polynomial.
pub fn derive_coeffs(coeffs: &[Complex64]) -> Vec<Complex64> {
    if coeffs.len() <= 1 {
        return vec![Complex64::new(0.0, 0.0)];
    }
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse_poly;
    use super::*;

    #[test]
    fn eval_with_bound() {
        let v = VarSet::new(vec!["p"]);
        let f = parse_poly("p^2 - p", &v).unwrap();
        let got = eval_complex(&f, &CPoint::new(vec![Complex64::new(2.0, 0.0)]));
        assert_eq!(got.value, Complex64::new(2.0, 0.0));
        assert!(got.bound < 1e-13);
    }

    #[test]
    fn eval_relative_bound_at_exact_root() {
        let v = VarSet::new(vec!["p", "q"]);
        let f = parse_poly("4*p*q*(p + q - 1)", &v).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let at_11 = eval_complex(&f, &CPoint::new(vec![one, one]));
        assert!((at_11.value - Complex64::new(4.0, 0.0)).norm() < 1e-12);
        let on_q0 = eval_complex(&f, &CPoint::new(vec![Complex64::new(0.7, 0.3), Complex64::new(0.0, 0.0)]));
        assert!(on_q0.value.norm() <= on_q0.bound);
    }

    #[test]
    fn dd_eval_tightens_bound() {
        let v = VarSet::new(vec!["x"]);
        let f = parse_poly("x^8 - 1", &v).unwrap();
        let z = Complex64::new(1.0000001, 0.0);
        let plain = eval_complex(&f, &CPoint::new(vec![z]));
        let wide = eval_complex(&f, &CPoint::with_precision(vec![z], 106));
        assert!(wide.bound < plain.bound);
        assert!((wide.value - plain.value).norm() < plain.bound);
    }
}
