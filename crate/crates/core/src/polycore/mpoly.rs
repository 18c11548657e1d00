//! Sparse multivariate polynomials over Q(i).
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors under graded
//! lexicographic order (total degree first, then lex with earlier variables
//! more significant). No zero coefficient is ever stored, so structural
//! equality is semantic equality. All operations are pure; values are
//! immutable after construction.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::scalar::{GaussRat, Rat};

/// Ordered variable list shared between polynomials of one ring.
#[derive(Clone, Debug)]
pub struct VarSet(Arc<[String]>);

impl VarSet {
    pub fn new<S: Into<String>>(names: Vec<S>) -> Self {
        let v: Vec<String> = names.into_iter().map(Into::into).collect();
        VarSet(v.into())
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }
}

impl PartialEq for VarSet {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}
impl Eq for VarSet {}

/// Exponent vector with graded-lex ordering.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono(Box<[u32]>);

impl Mono {
    pub fn new(exps: Vec<u32>) -> Self {
        Mono(exps.into())
    }

    pub fn unit(nvars: usize) -> Self {
        Mono(vec![0; nvars].into())
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Componentwise subtraction; `None` when not divisible.
    pub fn try_div(&self, other: &Mono) -> Option<Mono> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Mono(out.into()))
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with Gaussian-rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    vars: VarSet,
    terms: BTreeMap<Mono, GaussRat>,
}

impl MPoly {
    pub fn zero(vars: &VarSet) -> Self {
        MPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &VarSet, c: GaussRat) -> Self {
        let mut p = MPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Mono::unit(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &VarSet) -> Self {
        MPoly::constant(vars, GaussRat::one())
    }

    pub fn int(vars: &VarSet, n: i64) -> Self {
        MPoly::constant(vars, GaussRat::from_int(n))
    }

    /// The monomial `name^1`; panics when the variable is not declared.
    pub fn var(vars: &VarSet, name: &str) -> Self {
        let idx = vars
            .index_of(name)
            .unwrap_or_else(|| panic!("undeclared variable `{name}`"));
        let mut exps = vec![0u32; vars.len()];
        exps[idx] = 1;
        let mut p = MPoly::zero(vars);
        p.terms.insert(Mono::new(exps), GaussRat::one());
        p
    }

    pub fn from_terms(vars: &VarSet, terms: Vec<(Vec<u32>, GaussRat)>) -> Self {
        let mut p = MPoly::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent arity mismatch");
            p.add_term(Mono::new(e), c);
        }
        p
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &GaussRat)> {
        self.terms.iter()
    }

    /// Total degree; zero polynomial reports 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, |m| m.degree())
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exps()[var])
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in_name(&self, name: &str) -> u32 {
        match self.vars.index_of(name) {
            Some(i) => self.degree_in(i),
            None => 0,
        }
    }

    pub fn coeff(&self, mono: &Mono) -> GaussRat {
        self.terms.get(mono).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn constant_term(&self) -> GaussRat {
        self.coeff(&Mono::unit(self.vars.len()))
    }

    /// Leading term under graded-lex.
    pub fn leading(&self) -> Option<(&Mono, &GaussRat)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Mono, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = &*e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn assert_same_ring(&self, other: &MPoly) {
        assert!(
            self.vars == other.vars,
            "variable sets differ: {:?} vs {:?}",
            self.vars.names(),
            other.vars.names()
        );
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        self.assert_same_ring(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.assert_same_ring(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        let mut out = MPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        self.assert_same_ring(other);
        let mut out = MPoly::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussRat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.vars);
        }
        let mut out = MPoly::zero(&self.vars);
        for (m, k) in &self.terms {
            out.terms.insert(m.clone(), k * c);
        }
        out
    }

    pub fn mul_var_power(&self, var: usize, e: u32) -> MPoly {
        let mut out = MPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut exps = m.exps().to_vec();
            exps[var] += e;
            out.terms.insert(Mono::new(exps), c.clone());
        }
        out
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> MPoly {
        let mut out = MPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.exps()[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[var] = e - 1;
            out.add_term(Mono::new(exps), c * &GaussRat::from_int(e as i64));
        }
        out
    }

    /// Dense coefficient vector in `var`: result[k] is the coefficient of
    /// `var^k`, a polynomial in the remaining variables (same ring, `var`
    /// exponent zero).
    pub fn coeffs_in(&self, var: usize) -> Vec<MPoly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![MPoly::zero(&self.vars); deg + 1];
        for (m, c) in &self.terms {
            let k = m.exps()[var] as usize;
            let mut exps = m.exps().to_vec();
            exps[var] = 0;
            out[k].add_term(Mono::new(exps), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(vars: &VarSet, var: usize, coeffs: &[MPoly]) -> MPoly {
        let mut out = MPoly::zero(vars);
        for (k, c) in coeffs.iter().enumerate() {
            out = out.add(&c.mul_var_power(var, k as u32));
        }
        out
    }

    pub fn leading_coeff_in(&self, var: usize) -> MPoly {
        let mut cs = self.coeffs_in(var);
        cs.pop().unwrap_or_else(|| MPoly::zero(&self.vars))
    }

    /// Substitute `var := value` where `value` lives in the same ring.
    /// Horner evaluation in `var`, exact expansion.
    pub fn substitute(&self, var: usize, value: &MPoly) -> MPoly {
        self.assert_same_ring(value);
        let coeffs = self.coeffs_in(var);
        let mut acc = MPoly::zero(&self.vars);
        for c in coeffs.iter().rev() {
            acc = acc.mul(value).add(c);
        }
        acc
    }

    pub fn substitute_name(&self, name: &str, value: &MPoly) -> MPoly {
        let idx = self
            .vars
            .index_of(name)
            .unwrap_or_else(|| panic!("undeclared variable `{name}`"));
        self.substitute(idx, value)
    }

    /// Set `var := 1`.
    pub fn dehomogenize(&self, var: usize) -> MPoly {
        let mut out = MPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut exps = m.exps().to_vec();
            exps[var] = 0;
            out.add_term(Mono::new(exps), c.clone());
        }
        out
    }

    /// Multiply every term by the power of `var` that lifts it to total
    /// degree `target`. Errors when `target` is below the total degree.
    pub fn homogenize(&self, var: usize, target: u32) -> Result<MPoly, String> {
        let d = self.degree();
        if d > target {
            return Err(format!(
                "homogenization target {target} below total degree {d}"
            ));
        }
        let mut out = MPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut exps = m.exps().to_vec();
            exps[var] += target - m.degree();
            out.terms.insert(Mono::new(exps), c.clone());
        }
        Ok(out)
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        self.terms.keys().all(|m| m.degree() == d)
    }

    /// Exact evaluation at Gaussian-rational coordinates.
    pub fn eval_exact(&self, point: &[GaussRat]) -> GaussRat {
        assert_eq!(point.len(), self.vars.len(), "point arity mismatch");
        let mut acc = GaussRat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exps()) {
                if e > 0 {
                    t = &t * &x.pow(e);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Which declared variables actually occur.
    pub fn used_vars(&self) -> Vec<usize> {
        let n = self.vars.len();
        let mut used = vec![false; n];
        for m in self.terms.keys() {
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        (0..n).filter(|&i| used[i]).collect()
    }

    /// Reinterpret in another ring, matching variables by name. Variables
    /// that occur must all be present in `new_vars`.
    pub fn with_vars(&self, new_vars: &VarSet) -> MPoly {
        let map: Vec<Option<usize>> = self
            .vars
            .names()
            .iter()
            .map(|n| new_vars.index_of(n))
            .collect();
        let mut out = MPoly::zero(new_vars);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; new_vars.len()];
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    let j = map[i].unwrap_or_else(|| {
                        panic!("variable `{}` missing in target ring", self.vars.names()[i])
                    });
                    exps[j] = e;
                }
            }
            out.add_term(Mono::new(exps), c.clone());
        }
        out
    }

    /// `self * lc(other) == other * lc(self)`: equality up to a scalar unit.
    pub fn eq_up_to_scalar(&self, other: &MPoly) -> bool {
        match (self.leading(), other.leading()) {
            (None, None) => true,
            (Some(_), None) | (None, Some(_)) => false,
            (Some((_, ca)), Some((_, cb))) => self.scale(cb) == other.scale(ca),
        }
    }

    /// Canonical representative of the scalar class: coefficients are
    /// coprime Gaussian integers and the leading coefficient points into
    /// the half-plane `re > 0 || (re == 0 && im > 0)`.
    pub fn unit_normal(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.re.denom());
            den_lcm = den_lcm.lcm(c.im.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            let re_n = (&c.re * Rat::from_integer(den_lcm.clone())).to_integer();
            let im_n = (&c.im * Rat::from_integer(den_lcm.clone())).to_integer();
            num_gcd = num_gcd.gcd(&re_n).gcd(&im_n);
        }
        if num_gcd.is_zero() {
            num_gcd = BigInt::one();
        }
        let scale = GaussRat::from_rat(Rat::new(den_lcm, num_gcd));
        let mut out = self.scale(&scale);
        let lead = out.leading().expect("nonzero").1.clone();
        let unit = if lead.re.is_positive() || (lead.re.is_zero() && lead.im.is_positive()) {
            GaussRat::one()
        } else {
            GaussRat::from_int(-1)
        };
        if !unit.is_one() {
            out = out.scale(&unit);
        }
        out
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> MPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.inv();
                self.scale(&inv)
            }
        }
    }

    /// Largest power of `var` dividing every term (0 for the zero poly).
    pub fn var_content_power(&self, var: usize) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exps()[var])
            .min()
            .unwrap_or(0)
    }

    /// Divide out `var^e`; panics if not divisible.
    pub fn div_var_power(&self, var: usize, e: u32) -> MPoly {
        let mut out = MPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut exps = m.exps().to_vec();
            assert!(exps[var] >= e, "not divisible by variable power");
            exps[var] -= e;
            out.terms.insert(Mono::new(exps), c.clone());
        }
        out
    }

    /// Max |coefficient| as f64, for conditioning estimates.
    pub fn max_coeff_abs(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.abs_f64())
            .fold(0.0, f64::max)
    }
}

impl std::fmt::Debug for MPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse_poly;
    use super::*;

    fn ring() -> VarSet {
        VarSet::new(vec!["x", "y"])
    }

    #[test]
    fn grlex_order() {
        // x^2 > xy > y^2 > x > y > 1 under grlex with x before y.
        let a = Mono::new(vec![2, 0]);
        let b = Mono::new(vec![1, 1]);
        let c = Mono::new(vec![0, 2]);
        let d = Mono::new(vec![1, 0]);
        assert!(a > b && b > c && c > d);
    }

    #[test]
    fn arithmetic_identities() {
        let v = ring();
        let x = MPoly::var(&v, "x");
        let y = MPoly::var(&v, "y");
        let p = x.add(&y).pow(2);
        let q = x.pow(2).add(&x.mul(&y).scale(&GaussRat::from_int(2))).add(&y.pow(2));
        assert_eq!(p, q);
        assert!(p.sub(&q).is_zero());
    }

    #[test]
    fn substitute_expands() {
        let v = VarSet::new(vec!["x", "y", "p", "q"]);
        let f = parse_poly("y^2 - y", &v).unwrap();
        let val = parse_poly("p*x + q", &v).unwrap();
        let got = f.substitute_name("y", &val);
        let want = parse_poly("p^2*x^2 + 2*p*q*x + q^2 - p*x - q", &v).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn homogenize_dehomogenize() {
        let v = VarSet::new(vec!["x", "z"]);
        let f = parse_poly("x^2 - x", &v).unwrap();
        let h = f.homogenize(1, 2).unwrap();
        assert_eq!(h, parse_poly("x^2 - x*z", &v).unwrap());
        assert_eq!(h.dehomogenize(1), f);
        assert!(f.homogenize(1, 1).is_err());
    }

    #[test]
    fn eval_exact_point() {
        let v = ring();
        let f = parse_poly("x^2*y - 3*y + 1/2", &v).unwrap();
        let val = f.eval_exact(&[GaussRat::from_int(2), GaussRat::from_ratio(1, 2)]);
        // 4*(1/2) - 3/2 + 1/2 = 1
        assert_eq!(val, GaussRat::one());
    }

    #[test]
    fn unit_normal_canonicalizes_sign_and_content() {
        let v = ring();
        let f = parse_poly("2*x + 4*y", &v).unwrap();
        let g = parse_poly("-3*x - 6*y", &v).unwrap();
        assert_eq!(f.unit_normal(), g.unit_normal());
        assert!(f.eq_up_to_scalar(&g));
    }
}
