//! Simultaneous polynomial root finding (Aberth–Ehrlich) with residual
//! certification, plus recognition of Gaussian-rational roots.
//!
//! Initial guesses sit on a circle sized by the Cauchy bound with a
//! deterministic, seed-dependent angular offset, so runs reproduce exactly
//! for a fixed seed.

use num_complex::Complex64;

use super::dd::Cdd;
use super::mpoly::MPoly;
use super::numeric::{derive_coeffs, horner, horner_dd};
use super::scalar::{rat, GaussRat, Rat};
use crate::rng::SplitMix64;

#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// |p(root)| / scale(root), scale = sum |c_k||x|^k.
    pub residuals: Vec<f64>,
    pub iterations: u32,
    pub converged: bool,
    /// Minimal pairwise separation relative to max(1, |root|).
    pub min_separation: f64,
}

/// All roots of a dense univariate complex polynomial (low to high degree
/// coefficients). Leading zeros must be trimmed by the caller; a zero or
/// constant polynomial returns no roots.
pub fn all_roots(coeffs: &[Complex64], seed: u64) -> RootSet {
    let mut cs = coeffs.to_vec();
    while cs.len() > 1 && cs.last().map_or(false, |c| c.norm() == 0.0) {
        cs.pop();
    }
    let n = cs.len().saturating_sub(1);
    if n == 0 {
        return RootSet {
            roots: vec![],
            residuals: vec![],
            iterations: 0,
            converged: true,
            min_separation: f64::INFINITY,
        };
    }
    let lead = cs[n];
    // Cauchy-style radius: 1 + max |c_k / c_n|
    let radius = 1.0
        + cs[..n]
            .iter()
            .map(|c| (c / lead).norm())
            .fold(0.0, f64::max)
            .min(1e6);
    let mut rng = SplitMix64::new(seed ^ 0x9e37_79b9_7f4a_7c15);
    let theta0 = rng.next_f64() * std::f64::consts::TAU;
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| {
            let th = theta0 + std::f64::consts::TAU * (k as f64 + 0.5) / n as f64 + 0.01 * k as f64;
            Complex64::from_polar(0.5 * radius + 0.1 * k as f64 / n as f64, th)
        })
        .collect();

    let deriv = derive_coeffs(&cs);
    let mut iterations = 0;
    let max_iter = 300;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        let mut max_step = 0.0f64;
        for i in 0..n {
            let x = roots[i];
            let p = horner(&cs, x);
            if p.norm() == 0.0 {
                continue;
            }
            let dp = horner(&deriv, x);
            let newton = if dp.norm() > 0.0 { p / dp } else { p };
            let mut s = Complex64::new(0.0, 0.0);
            for (j, r) in roots.iter().enumerate() {
                if j != i {
                    let d = x - r;
                    if d.norm() > 1e-300 {
                        s += Complex64::new(1.0, 0.0) / d;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * s;
            let w = if denom.norm() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            roots[i] = x - w;
            let rel = w.norm() / (1.0 + roots[i].norm());
            max_step = max_step.max(rel);
        }
        if max_step < 1e-14 {
            converged = true;
            break;
        }
    }
    // Newton polish.
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let p = horner(&cs, *r);
            let dp = horner(&deriv, *r);
            if dp.norm() > 0.0 {
                let step = p / dp;
                if step.norm() < 1.0 {
                    *r -= step;
                }
            }
        }
    }
    let residuals: Vec<f64> = roots.iter().map(|&r| relative_residual(&cs, r)).collect();
    let min_separation = min_sep(&roots);
    RootSet {
        roots,
        residuals,
        iterations,
        converged,
        min_separation,
    }
}

pub fn relative_residual(coeffs: &[Complex64], x: Complex64) -> f64 {
    let mut scale = 0.0f64;
    let ax = x.norm();
    let mut pw = 1.0f64;
    for c in coeffs {
        scale += c.norm() * pw;
        pw *= ax;
    }
    if scale == 0.0 {
        return 0.0;
    }
    horner(coeffs, x).norm() / scale
}

fn min_sep(roots: &[Complex64]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let d = (roots[i] - roots[j]).norm() / (1.0 + roots[i].norm().max(roots[j].norm()));
            m = m.min(d);
        }
    }
    m
}

/// Newton refinement from given starting guesses (root tracking across a
/// small step in parameters). Returns refined roots and relative residuals.
pub fn refine_tracked(coeffs: &[Complex64], guesses: &[Complex64]) -> (Vec<Complex64>, Vec<f64>) {
    let deriv = derive_coeffs(coeffs);
    let mut out = Vec::with_capacity(guesses.len());
    for &g in guesses {
        let mut x = g;
        for _ in 0..8 {
            let p = horner(coeffs, x);
            let dp = horner(&deriv, x);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            x -= step;
            if step.norm() < 1e-15 * (1.0 + x.norm()) {
                break;
            }
        }
        out.push(x);
    }
    let res = out.iter().map(|&r| relative_residual(coeffs, r)).collect();
    (out, res)
}

/// Newton refinement entirely in paired-limb arithmetic, against
/// paired-limb coefficients; removes the f64 coefficient-rounding bias
/// that dominates near-multiple roots.
pub fn polish_root_dd(coeffs: &[Cdd], x: Cdd) -> Cdd {
    if coeffs.len() <= 1 {
        return x;
    }
    let deriv: Vec<Cdd> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.mul(Cdd::from_parts(k as f64, 0.0)))
        .collect();
    let mut z = x;
    for _ in 0..6 {
        let p = horner_dd(coeffs, z);
        let dp = horner_dd(&deriv, z);
        if dp.norm() == 0.0 {
            break;
        }
        let step = p.div(dp);
        z = z.sub(step);
        if step.norm() < 1e-30 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

/// One extra Newton step in paired-limb precision.
pub fn polish_dd(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    let cs_dd: Vec<Cdd> = coeffs.iter().map(|&c| Cdd::from_c64(c)).collect();
    let deriv: Vec<Cdd> = derive_coeffs(coeffs)
        .iter()
        .map(|&c| Cdd::from_c64(c))
        .collect();
    let mut z = Cdd::from_c64(x);
    for _ in 0..3 {
        let p = horner_dd(&cs_dd, z);
        let dp = horner_dd(&deriv, z);
        if dp.norm() == 0.0 {
            break;
        }
        z = z.sub(p.div(dp));
    }
    z.to_c64()
}

/// Exact coefficient vector of a univariate polynomial as two-limb
/// complexes; the other variables must not occur.
pub fn exact_coeffs_dd(poly: &MPoly, var: usize) -> Vec<Cdd> {
    let deg = poly.degree_in(var) as usize;
    let mut out = vec![Cdd::ZERO; deg + 1];
    for (m, c) in poly.terms() {
        debug_assert!(m
            .exps()
            .iter()
            .enumerate()
            .all(|(i, &e)| i == var || e == 0));
        out[m.exps()[var] as usize] = out[m.exps()[var] as usize].add(c.to_cdd());
    }
    out
}

/// Roots of an exact univariate polynomial: f64 simultaneous iteration for
/// isolation, then a paired-limb Newton polish against two-limb exact
/// coefficients. Large integer coefficients (far beyond one f64 mantissa)
/// would otherwise cap the attainable accuracy.
pub fn accurate_roots(poly: &MPoly, var: usize, seed: u64) -> Vec<Complex64> {
    let dd = exact_coeffs_dd(poly, var);
    let f64_coeffs: Vec<Complex64> = dd.iter().map(|c| c.to_c64()).collect();
    let rs = all_roots(&f64_coeffs, seed);
    rs.roots
        .iter()
        .map(|&r| polish_root_dd(&dd, Cdd::from_c64(r)).to_c64())
        .collect()
}

/// All Gaussian-rational roots of an exact univariate polynomial, by
/// recognize-verify-deflate rounds: each exactly verified root is divided
/// out and the smaller polynomial re-solved, which keeps the floating
/// isolation well-conditioned even when the original coefficients are
/// huge. Returns the verified roots (with multiplicity) and the floating
/// roots of the unrecognized remainder.
pub fn rational_roots_deflating(
    poly: &MPoly,
    var: usize,
    seed: u64,
) -> (Vec<GaussRat>, Vec<Complex64>) {
    let mut rem = poly.clone();
    let mut exact: Vec<GaussRat> = Vec::new();
    let mut round = 0u64;
    loop {
        if rem.degree_in(var) == 0 {
            return (exact, vec![]);
        }
        let roots = accurate_roots(&rem, var, seed ^ round);
        round += 1;
        let mut progress = false;
        for r in &roots {
            // loose candidate tolerance: exact verification is the gate
            let Some(cand) = recognize_gauss_rat(*r, 1 << 24, 1e-5) else {
                continue;
            };
            let mut pt = vec![GaussRat::zero(); rem.vars().len()];
            pt[var] = cand.clone();
            if !rem.eval_exact(&pt).is_zero() {
                continue;
            }
            // divide out (var - cand) maximally
            let mut exps = vec![0u32; rem.vars().len()];
            exps[var] = 1;
            let lin = MPoly::from_terms(
                rem.vars(),
                vec![(exps, GaussRat::one()), (vec![0; rem.vars().len()], -&cand)],
            );
            let (q, e) = crate::polycore::elim::divide_out_maximal(&rem, &lin);
            debug_assert!(e >= 1);
            for _ in 0..e {
                exact.push(cand.clone());
            }
            rem = q;
            progress = true;
            break;
        }
        if !progress {
            let float_roots = accurate_roots(&rem, var, seed ^ 0xf10a7 ^ round);
            return (exact, float_roots);
        }
    }
}

/// Try to interpret a floating complex number as a Gaussian rational with
/// small denominator. The caller must verify exactly before trusting it.
pub fn recognize_gauss_rat(z: Complex64, max_den: u64, tol: f64) -> Option<GaussRat> {
    let re = recognize_rat(z.re, max_den, tol)?;
    let im = recognize_rat(z.im, max_den, tol)?;
    Some(GaussRat::new(re, im))
}

fn recognize_rat(x: f64, max_den: u64, tol: f64) -> Option<Rat> {
    if !x.is_finite() {
        return None;
    }
    // Continued-fraction best approximation with bounded denominator.
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, x.floor() as i64, 1i64);
    let mut frac = x - x.floor();
    for _ in 0..40 {
        let approx = p1 as f64 / q1 as f64;
        if (approx - x).abs() <= tol * (1.0 + x.abs()) {
            return Some(rat(p1, q1));
        }
        if frac.abs() < 1e-15 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        if !a.is_finite() || a.abs() > 1e17 {
            break;
        }
        frac = inv - a;
        let p2 = (a as i64).checked_mul(p1)?.checked_add(p0)?;
        let q2 = (a as i64).checked_mul(q1)?.checked_add(q0)?;
        if q2 as u64 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    let approx = p1 as f64 / q1 as f64;
    if (approx - x).abs() <= tol * (1.0 + x.abs()) {
        return Some(rat(p1, q1));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
        let mut cs = vec![c(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![c(0.0, 0.0); cs.len() + 1];
            for (k, &co) in cs.iter().enumerate() {
                next[k + 1] += co;
                next[k] -= co * r;
            }
            cs = next;
        }
        cs
    }

    #[test]
    fn recovers_known_roots() {
        let want = vec![c(1.0, 0.0), c(-2.0, 0.0), c(0.5, 1.5), c(0.5, -1.5), c(3.0, 0.25)];
        let cs = poly_from_roots(&want);
        let got = all_roots(&cs, 7);
        assert!(got.converged);
        for w in &want {
            let best = got
                .roots
                .iter()
                .map(|r| (r - w).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(best < 1e-9, "missed root {w}: {best}");
        }
        for r in &got.residuals {
            assert!(*r < 1e-12, "residual {r}");
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let cs = poly_from_roots(&[c(1.0, 0.0), c(2.0, 0.0), c(0.0, 1.0)]);
        let a = all_roots(&cs, 5);
        let b = all_roots(&cs, 5);
        assert_eq!(a.roots, b.roots);
    }

    #[test]
    fn quadratic_fixture() {
        // 2x^2 + 12x + 6: roots -3 ± sqrt(6)
        let cs = vec![c(6.0, 0.0), c(12.0, 0.0), c(2.0, 0.0)];
        let got = all_roots(&cs, 1);
        let s6 = 6.0f64.sqrt();
        let mut roots = got.roots.clone();
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((roots[0] - c(-3.0 - s6, 0.0)).norm() < 1e-12);
        assert!((roots[1] - c(-3.0 + s6, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn recognition_roundtrip() {
        let z = c(0.75, -2.0 / 3.0);
        let g = recognize_gauss_rat(z, 1 << 20, 1e-9).unwrap();
        assert_eq!(g, GaussRat::new(rat(3, 4), rat(-2, 3)));
        assert!(recognize_gauss_rat(c(std::f64::consts::SQRT_2, 0.0), 1 << 10, 1e-11).is_none());
    }

    #[test]
    fn clustered_roots_flagged_by_separation() {
        let cs = poly_from_roots(&[c(1.0, 0.0), c(1.0 + 1e-8, 0.0), c(-1.0, 0.0)]);
        let got = all_roots(&cs, 3);
        assert!(got.min_separation < 1e-6);
    }
}
