//! Lines in the plane, linear-factor extraction, invariant lines, and
//! convexity certification.
//!
//! Linear factors of a homogeneous curve H are found by a direction scan:
//! after stripping z-powers, every remaining linear factor restricts on
//! z = 0 to a root direction of H(x, y, 0). Directions with
//! Gaussian-rational coordinates are certified by exact trial division; the
//! rest are certified in floating mode by residuals on sampled points.

use num_complex::Complex64;
use num_traits::Zero;

use crate::polycore::{
    divide_out_maximal, divides, is_squarefree, squarefree_part, CPoly, GaussRat, MPoly, VarSet,
};
use crate::polycore::roots::{accurate_roots, all_roots, recognize_gauss_rat};
use crate::rng::SplitMix64;

use super::{hom_ring, Foliation};

/// Tolerances for floating-line certification, relative to the curve's
/// coefficient scale at the sampled points.
const LINE_ACCEPT: f64 = 1e-9;
const LINE_REJECT: f64 = 1e-5;

/// Projective line `alpha*x + beta*y + gamma*z = 0` with exact
/// coefficients, canonicalized so the first nonzero coefficient is 1;
/// scaling-equivalent forms compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LineInPlane {
    coeffs: [GaussRat; 3],
}

impl LineInPlane {
    pub fn new(alpha: GaussRat, beta: GaussRat, gamma: GaussRat) -> Result<Self, String> {
        if alpha.is_zero() && beta.is_zero() && gamma.is_zero() {
            return Err("zero line coefficients".into());
        }
        let mut coeffs = [alpha, beta, gamma];
        let pivot = coeffs
            .iter()
            .find(|c| !c.is_zero())
            .expect("nonzero")
            .clone();
        for c in coeffs.iter_mut() {
            *c = &*c / &pivot;
        }
        Ok(LineInPlane { coeffs })
    }

    pub fn from_ints(alpha: i64, beta: i64, gamma: i64) -> Self {
        LineInPlane::new(
            GaussRat::from_int(alpha),
            GaussRat::from_int(beta),
            GaussRat::from_int(gamma),
        )
        .expect("nonzero")
    }

    pub fn coeffs(&self) -> &[GaussRat; 3] {
        &self.coeffs
    }

    pub fn as_mpoly(&self) -> MPoly {
        let hom = hom_ring();
        MPoly::var(&hom, "x")
            .scale(&self.coeffs[0])
            .add(&MPoly::var(&hom, "y").scale(&self.coeffs[1]))
            .add(&MPoly::var(&hom, "z").scale(&self.coeffs[2]))
    }

    pub fn from_mpoly(p: &MPoly) -> Option<Self> {
        let hom = hom_ring();
        let p = p.with_vars(&hom);
        if p.degree() != 1 || !p.is_homogeneous() {
            return None;
        }
        let coeff_of = |name: &str| {
            let idx = hom.index_of(name).unwrap();
            let mut exps = vec![0u32; 3];
            exps[idx] = 1;
            p.coeff(&crate::polycore::Mono::new(exps))
        };
        LineInPlane::new(coeff_of("x"), coeff_of("y"), coeff_of("z")).ok()
    }

    /// Dual point of the line, as a projective triple.
    pub fn dual_point(&self) -> [GaussRat; 3] {
        self.coeffs.clone()
    }

    /// Dual chart coordinates (p0, q0) of the line `y = p0 x + q0`.
    /// None for lines through [0:1:0] (verticals and the infinity line).
    pub fn dual_pq(&self) -> Option<(GaussRat, GaussRat)> {
        let [alpha, beta, gamma] = &self.coeffs;
        if beta.is_zero() {
            return None;
        }
        let inv = beta.inv();
        Some((-&(alpha * &inv), -&(gamma * &inv)))
    }

    /// Lines through [0:1:0] cannot be dualized in the (p, q) chart and
    /// force a preliminary rotation of the plane.
    pub fn through_vertical_axis_point(&self) -> bool {
        self.coeffs[1].is_zero()
    }

    /// Does the exact projective point lie on the line?
    pub fn contains(&self, point: &[GaussRat; 3]) -> bool {
        let mut acc = GaussRat::zero();
        for (c, p) in self.coeffs.iter().zip(point.iter()) {
            acc = &acc + &(c * p);
        }
        acc.is_zero()
    }

    /// Pull back along `x -> M x`: coefficients map by the transpose.
    pub fn transform(&self, m: &[[GaussRat; 3]; 3]) -> LineInPlane {
        let c = &self.coeffs;
        let new: Vec<GaussRat> = (0..3)
            .map(|i| {
                let mut acc = GaussRat::zero();
                for (j, cj) in c.iter().enumerate() {
                    acc = &acc + &(&m[j][i] * cj);
                }
                acc
            })
            .collect();
        LineInPlane::new(new[0].clone(), new[1].clone(), new[2].clone())
            .expect("transform of a line is a line")
    }
}

impl std::fmt::Debug for LineInPlane {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{} = 0}}", self.as_mpoly())
    }
}

impl std::fmt::Display for LineInPlane {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.as_mpoly())
    }
}

/// Line with floating coefficients, certified by residuals only.
#[derive(Clone, Debug)]
pub struct FloatLine {
    pub coeffs: [Complex64; 3],
    /// Max relative residual of the divided curve on sampled points.
    pub residual: f64,
}

impl FloatLine {
    fn canonical(mut coeffs: [Complex64; 3]) -> [Complex64; 3] {
        let pivot = coeffs
            .iter()
            .cloned()
            .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
            .unwrap();
        for c in coeffs.iter_mut() {
            *c /= pivot;
        }
        coeffs
    }

    pub fn eval(&self, p: &[Complex64; 3]) -> Complex64 {
        self.coeffs[0] * p[0] + self.coeffs[1] * p[1] + self.coeffs[2] * p[2]
    }

    /// Two points spanning the line, for sampling.
    pub fn span_points(&self, rng: &mut SplitMix64) -> [[Complex64; 3]; 2] {
        let [a, b, c] = self.coeffs;
        let mut pts = Vec::new();
        for _ in 0..2 {
            // pick two coordinates at random, solve the third
            let (s, t) = (
                Complex64::new(rng.next_symmetric(1.0), rng.next_symmetric(1.0)),
                Complex64::new(rng.next_symmetric(1.0), rng.next_symmetric(1.0)),
            );
            let p = if c.norm() >= a.norm().max(b.norm()) {
                [s, t, -(a * s + b * t) / c]
            } else if a.norm() >= b.norm() {
                [-(b * s + c * t) / a, s, t]
            } else {
                [s, -(a * s + c * t) / b, t]
            };
            pts.push(p);
        }
        [pts[0], pts[1]]
    }
}

#[derive(Clone, Debug)]
pub enum CertifiedLine {
    Exact(LineInPlane),
    Floating(FloatLine),
}

impl CertifiedLine {
    pub fn is_exact(&self) -> bool {
        matches!(self, CertifiedLine::Exact(_))
    }

    pub fn coeffs_c64(&self) -> [Complex64; 3] {
        match self {
            CertifiedLine::Exact(l) => {
                let c = l.coeffs();
                [c[0].to_c64(), c[1].to_c64(), c[2].to_c64()]
            }
            CertifiedLine::Floating(l) => l.coeffs,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Certification {
    Exact,
    Floating,
}

/// Result of scanning a homogeneous curve for linear factors.
#[derive(Debug)]
pub struct LinearFactorScan {
    pub exact: Vec<(LineInPlane, u32)>,
    pub floating: Vec<(FloatLine, u32)>,
    /// Curve after dividing out all exact linear factors.
    pub residual: MPoly,
}

/// All linear factors of a homogeneous trivariate curve.
pub fn linear_factors(curve: &MPoly, seed: u64) -> LinearFactorScan {
    let hom = hom_ring();
    let h = curve.with_vars(&hom);
    let mut rng = SplitMix64::new(seed ^ 0x11e5);
    let mut exact: Vec<(LineInPlane, u32)> = Vec::new();
    let mut floating: Vec<(FloatLine, u32)> = Vec::new();
    let mut res = h.clone();

    // z-power.
    let z = MPoly::var(&hom, "z");
    let (rest, ze) = divide_out_maximal(&res, &z);
    if ze > 0 {
        exact.push((LineInPlane::from_ints(0, 0, 1), ze));
        res = rest;
    }

    // Directions from roots of H(x, y, 0).
    let zi = hom.index_of("z").unwrap();
    let h0 = res.coeffs_in(zi).into_iter().next().unwrap();
    debug_assert!(!h0.is_zero());
    let (dirs_exact, dirs_float) = direction_roots(&h0, &mut rng);

    for dir in dirs_exact {
        // Candidate pencil: dir.0 * x + dir.1 * y + g * z.
        let (cands, float_gammas) = gammas_for_direction(&res, &dir, &mut rng);
        for gamma in cands {
            if let Ok(line) = LineInPlane::new(dir.0.clone(), dir.1.clone(), gamma) {
                let lp = line.as_mpoly();
                let (rest, e) = divide_out_maximal(&res, &lp);
                if e > 0 {
                    res = rest;
                    exact.push((line, e));
                }
            }
        }
        // Exact direction, irrational offset: keep as a floating line.
        for gamma in float_gammas {
            let coeffs = FloatLine::canonical([dir.0.to_c64(), dir.1.to_c64(), gamma]);
            floating.push((
                FloatLine {
                    coeffs,
                    residual: 0.0,
                },
                1,
            ));
        }
    }

    // Floating factors of whatever exact division left behind.
    if res.degree() > 0 && !dirs_float.is_empty() {
        let fl = float_lines_of(&res, &dirs_float, &mut rng);
        floating.extend(fl);
    }

    exact.sort_by_key(|(l, _)| l.as_mpoly().to_string());
    floating.sort_by(|(a, _), (b, _)| {
        a.coeffs
            .iter()
            .map(|c| (c.re, c.im))
            .partial_cmp(b.coeffs.iter().map(|c| (c.re, c.im)))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    LinearFactorScan {
        exact,
        floating,
        residual: res,
    }
}

/// Root directions of a bivariate homogeneous form h(x, y): points [u:v]
/// with h(u, v) = 0, returned as line-direction pairs (v, -u) meaning the
/// factor v*x - u*y.
fn direction_roots(
    h0: &MPoly,
    rng: &mut SplitMix64,
) -> (Vec<(GaussRat, GaussRat)>, Vec<(Complex64, Complex64)>) {
    let hom = hom_ring();
    let xi = hom.index_of("x").unwrap();
    let yi = hom.index_of("y").unwrap();
    let mut exact = Vec::new();
    let mut float = Vec::new();

    let mut rest = h0.clone();
    // factor x^k: direction [0:1] -> factor x
    let ex = rest.var_content_power(xi);
    if ex > 0 {
        exact.push((GaussRat::one(), GaussRat::zero()));
        rest = rest.div_var_power(xi, ex);
    }
    let ey = rest.var_content_power(yi);
    if ey > 0 {
        exact.push((GaussRat::zero(), GaussRat::one()));
        rest = rest.div_var_power(yi, ey);
    }
    // Remaining roots [1:t], t a root of rest(1, t). Work on the
    // squarefree part so the root finder sees simple roots; multiplicities
    // are recovered later by maximal division.
    let uni = rest.dehomogenize(xi); // polynomial in y alone
    if uni.degree_in(yi) > 0 {
        let sqf = squarefree_part(&uni);
        let roots = accurate_roots(&sqf, yi, rng.next_u64());
        for r in &roots {
            let recognized = recognize_gauss_rat(*r, 1 << 24, 1e-9).filter(|g| {
                sqf.eval_exact(&[GaussRat::zero(), g.clone(), GaussRat::zero()])
                    .is_zero()
            });
            match recognized {
                // factor (y - t): direction [1:t] -> (t, -1) meaning t*x - y
                Some(g) => exact.push((g, GaussRat::from_int(-1))),
                None => float.push((*r, Complex64::new(-1.0, 0.0))),
            }
        }
    }
    // dedupe float clusters
    float.sort_by(|a, b| (a.0.re, a.0.im).partial_cmp(&(b.0.re, b.0.im)).unwrap());
    float.dedup_by(|a, b| (a.0 - b.0).norm() < 1e-8);
    (exact, float)
}

/// Gamma values such that dir.0*x + dir.1*y + gamma*z divides `res`,
/// split into exactly verified ones and floating leftovers.
fn gammas_for_direction(
    res: &MPoly,
    dir: &(GaussRat, GaussRat),
    rng: &mut SplitMix64,
) -> (Vec<GaussRat>, Vec<Complex64>) {
    let pring = VarSet::new(vec!["Y", "Z", "g"]);
    let hom = hom_ring();
    let (alpha, beta) = dir;
    let yv = MPoly::var(&pring, "Y");
    let zv = MPoly::var(&pring, "Z");
    let gv = MPoly::var(&pring, "g");
    // Parametrize the zero set of alpha*x + beta*y + g*z.
    let targets: Vec<MPoly> = if !beta.is_zero() {
        // x = Y, y = (-alpha*Y - g*Z)/beta, z = Z; scale by beta
        vec![
            yv.scale(beta),
            yv.scale(&-alpha).sub(&gv.mul(&zv)),
            zv.scale(beta),
        ]
    } else {
        // alpha*x + g*z = 0: x = -g*Z, y = alpha*Y, z = alpha*Z
        vec![gv.mul(&zv).neg(), yv.scale(alpha), zv.scale(alpha)]
    };
    let t = super::compose(&res.with_vars(&hom), &targets, &pring);
    // Collect the coefficient polynomials in g of each (Y, Z) monomial.
    let gi = pring.index_of("g").unwrap();
    let mut coeff_polys: Vec<MPoly> = Vec::new();
    {
        use std::collections::BTreeMap;
        let mut buckets: BTreeMap<(u32, u32), Vec<(Vec<u32>, GaussRat)>> = BTreeMap::new();
        for (m, c) in t.terms() {
            let e = m.exps();
            let key = (e[0], e[1]);
            let mut ge = vec![0u32; 3];
            ge[gi] = e[gi];
            buckets.entry(key).or_default().push((ge, c.clone()));
        }
        for (_, terms) in buckets {
            coeff_polys.push(MPoly::from_terms(&pring, terms));
        }
    }
    if coeff_polys.is_empty() {
        return (vec![], vec![]);
    }
    let refs: Vec<&MPoly> = coeff_polys.iter().collect();
    let g = crate::polycore::gcd_many(&refs);
    if g.is_constant() || g.degree_in(gi) == 0 {
        return (vec![], vec![]);
    }
    // Roots of the exact univariate gcd in g, squarefree-reduced so
    // repeated lines do not degrade the root accuracy.
    let g = squarefree_part(&g);
    let roots = accurate_roots(&g, gi, rng.next_u64());
    let mut out = Vec::new();
    let mut float_out: Vec<Complex64> = Vec::new();
    for r in &roots {
        if let Some(cand) = recognize_gauss_rat(*r, 1 << 24, 1e-9) {
            let val = g.eval_exact(&[GaussRat::zero(), GaussRat::zero(), cand.clone()]);
            if val.is_zero() {
                if !out.contains(&cand) {
                    out.push(cand);
                }
                continue;
            }
        }
        if !float_out.iter().any(|f| (f - r).norm() < 1e-8) {
            float_out.push(*r);
        }
    }
    (out, float_out)
}

/// Floating linear factors via two generic slices: intersect the curve with
/// two exact lines, pair up the intersection roots whose connecting line
/// matches a floating direction, and certify by sampling.
fn float_lines_of(
    res: &MPoly,
    dirs: &[(Complex64, Complex64)],
    rng: &mut SplitMix64,
) -> Vec<(FloatLine, u32)> {
    let cp = CPoly::from_mpoly(res);
    let scale = res.max_coeff_abs().max(1.0);
    // Slice z = 1, y = m x + c for two exact random (m, c).
    let slice_roots = |m: i64, c: i64, rng: &mut SplitMix64| -> Vec<Complex64> {
        let aff = VarSet::new(vec!["x", "y", "z"]);
        let mv = MPoly::int(&aff, m);
        let cv = MPoly::int(&aff, c);
        let x = MPoly::var(&aff, "x");
        let line_y = mv.mul(&x).add(&cv);
        let restricted = res
            .with_vars(&aff)
            .substitute_name("y", &line_y)
            .substitute_name("z", &MPoly::one(&aff));
        let cpu = CPoly::from_mpoly(&restricted);
        let coeffs = cpu.univariate_at(0, &[Complex64::zero(); 3]);
        all_roots(&coeffs, rng.next_u64()).roots
    };
    let (m1, c1, m2, c2) = (3, 1, -2, 2);
    let r1 = slice_roots(m1, c1, rng);
    let r2 = slice_roots(m2, c2, rng);
    let pt = |x: Complex64, m: i64, c: i64| {
        [
            x,
            Complex64::new(m as f64, 0.0) * x + Complex64::new(c as f64, 0.0),
            Complex64::new(1.0, 0.0),
        ]
    };
    let mut out: Vec<(FloatLine, u32)> = Vec::new();
    for &x1 in &r1 {
        let p1 = pt(x1, m1, c1);
        for &x2 in &r2 {
            let p2 = pt(x2, m2, c2);
            // Line through p1 and p2: cross product of the two triples.
            let coeffs = cross3(&p1, &p2);
            let n = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
            if n < 1e-10 {
                continue;
            }
            let coeffs = FloatLine::canonical(coeffs.map(|c| c / n));
            // Direction on z=0: (alpha, beta) must match a float direction
            // (v x - u y with [1:t]: alpha = t... compare projectively)
            let matches_dir = dirs.iter().any(|(a, b)| {
                let cand = coeffs[0] * b - coeffs[1] * a;
                cand.norm() < 1e-5 * (coeffs[0].norm() + coeffs[1].norm()).max(1e-10)
            });
            if !matches_dir {
                continue;
            }
            let fl = FloatLine {
                coeffs,
                residual: 0.0,
            };
            // Certify: sample 8 points on the line.
            let mut max_rel = 0.0f64;
            let mut local = SplitMix64::new(rng.next_u64());
            for _ in 0..4 {
                for p in fl.span_points(&mut local) {
                    let val = cp.eval(&p).value.norm();
                    let psc = p.iter().map(|c| c.norm()).fold(1.0f64, f64::max);
                    let rel = val / (scale * psc.powi(res.degree() as i32));
                    max_rel = max_rel.max(rel);
                }
            }
            if max_rel < LINE_ACCEPT {
                let dup = out.iter().any(|(l, _)| {
                    l.coeffs
                        .iter()
                        .zip(coeffs.iter())
                        .map(|(a, b)| (a - b).norm())
                        .fold(0.0, f64::max)
                        < 1e-6
                });
                if !dup {
                    out.push((
                        FloatLine {
                            coeffs,
                            residual: max_rel,
                        },
                        1,
                    ));
                }
            }
        }
    }
    out
}

fn cross3(a: &[Complex64; 3], b: &[Complex64; 3]) -> [Complex64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Invariance of an exact line: `L | X(L)` with X the vector-field lift.
pub fn is_invariant_line(fol: &Foliation, line: &LineInPlane) -> bool {
    let lp = line.as_mpoly();
    let xl = fol.apply_field(&lp);
    xl.is_zero() || divides(&lp, &xl)
}

/// Floating invariance: |X(L)| small on sampled points of the line.
/// Returns Some(true/false) or None when numerically uncertain.
pub fn is_invariant_line_float(fol: &Foliation, line: &FloatLine, seed: u64) -> Option<bool> {
    let lift = fol.vector_field_lift();
    // X(L) with float line coefficients: alpha*P + beta*Q + gamma*R.
    let parts: Vec<CPoly> = lift.iter().map(CPoly::from_mpoly).collect();
    let scale: f64 = lift
        .iter()
        .map(|p| p.max_coeff_abs())
        .fold(0.0, f64::max)
        .max(1.0);
    let deg = lift[0].degree().max(lift[1].degree()).max(lift[2].degree());
    let mut rng = SplitMix64::new(seed);
    let mut max_rel = 0.0f64;
    for _ in 0..6 {
        let [p, _] = line.span_points(&mut rng);
        let mut val = Complex64::zero();
        for (c, cp) in line.coeffs.iter().zip(parts.iter()) {
            val += c * cp.eval(&p).value;
        }
        let psc = p.iter().map(|c| c.norm()).fold(1.0f64, f64::max);
        let rel = val.norm() / (scale * psc.powi(deg as i32));
        max_rel = max_rel.max(rel);
    }
    if max_rel < LINE_ACCEPT {
        Some(true)
    } else if max_rel > LINE_REJECT {
        Some(false)
    } else {
        None
    }
}

/// All invariant lines of a foliation: the linear factors of the inflection
/// divisor that pass the invariance test (every invariant line divides the
/// inflection divisor).
#[derive(Debug)]
pub struct InvariantLines {
    pub exact: Vec<LineInPlane>,
    pub floating: Vec<FloatLine>,
    /// Floating candidates that could not be certified either way.
    pub uncertified: Vec<FloatLine>,
}

pub fn invariant_lines(fol: &Foliation, seed: u64) -> Result<InvariantLines, super::FoliationError> {
    let infl = fol.inflection_divisor()?;
    let scan = linear_factors(&infl, seed);
    let mut exact = Vec::new();
    for (line, _) in &scan.exact {
        if is_invariant_line(fol, line) {
            exact.push(line.clone());
        }
    }
    let mut floating = Vec::new();
    let mut uncertified = Vec::new();
    for (line, _) in &scan.floating {
        match is_invariant_line_float(fol, line, seed ^ 0xf10a) {
            Some(true) => floating.push(line.clone()),
            Some(false) => {}
            None => uncertified.push(line.clone()),
        }
    }
    Ok(InvariantLines {
        exact,
        floating,
        uncertified,
    })
}

/// Divisor presented as certified factors times a residual.
#[derive(Debug)]
pub struct DivisorFactorization {
    pub exact_factors: Vec<(MPoly, u32)>,
    pub float_factors: Vec<(FloatLine, u32)>,
    pub residual: MPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConvexVerdict {
    Convex(Certification),
    NotConvex(Certification),
    Inconclusive,
}

#[derive(Debug)]
pub struct ConvexityReport {
    pub verdict: ConvexVerdict,
    /// Exact squarefreeness of the inflection divisor.
    pub reduced: bool,
    pub lines: InvariantLines,
    /// A factor of the inflection divisor that is not a product of
    /// invariant lines, when the foliation is not convex.
    pub witness: Option<MPoly>,
}

impl ConvexityReport {
    pub fn is_convex(&self) -> bool {
        matches!(self.verdict, ConvexVerdict::Convex(_))
    }

    pub fn is_reduced_convex(&self) -> bool {
        self.is_convex() && self.reduced
    }
}

/// Convexity: the inflection divisor equals (up to unit) the
/// multiplicity-weighted product of invariant lines. Certification is exact
/// when the verdict never consulted floating data.
pub fn convexity(fol: &Foliation, seed: u64) -> Result<ConvexityReport, super::FoliationError> {
    let infl = fol.inflection_divisor()?;
    let reduced = is_squarefree(&infl);
    let scan = linear_factors(&infl, seed);
    let lines = invariant_lines(fol, seed)?;

    // Any linear factor failing invariance disproves convexity outright.
    for (line, _) in &scan.exact {
        if !is_invariant_line(fol, line) {
            return Ok(ConvexityReport {
                verdict: ConvexVerdict::NotConvex(Certification::Exact),
                reduced,
                lines,
                witness: Some(line.as_mpoly()),
            });
        }
    }

    // Divide out the exact invariant lines maximally.
    let mut res = infl.clone();
    for line in &lines.exact {
        let (rest, _) = divide_out_maximal(&res, &line.as_mpoly());
        res = rest;
    }
    if res.is_constant() {
        return Ok(ConvexityReport {
            verdict: ConvexVerdict::Convex(Certification::Exact),
            reduced,
            lines,
            witness: None,
        });
    }

    // Remaining blocks must each split into invariant lines.
    let mut used_float = false;
    let blocks = crate::polycore::split_variable_blocks(&res);
    for block in &blocks {
        if block.degree() == 1 {
            // a line that survived maximal division cannot be invariant
            return Ok(ConvexityReport {
                verdict: ConvexVerdict::NotConvex(Certification::Exact),
                reduced,
                lines,
                witness: Some(block.clone()),
            });
        }
        if block.used_vars().len() <= 2 && block.is_homogeneous() {
            // Bivariate homogeneous blocks split into lines over C
            // automatically; invariance of all of them is the exact test
            // srf(block) | X(srf(block)).
            let u = squarefree_part(block);
            let xu = fol.apply_field(&u);
            let ok = xu.is_zero() || divides(&u, &xu);
            if !ok {
                return Ok(ConvexityReport {
                    verdict: ConvexVerdict::NotConvex(Certification::Exact),
                    reduced,
                    lines,
                    witness: Some(block.clone()),
                });
            }
        } else {
            // Trivariate block: certify against the floating invariant
            // lines by degree accounting and sampled agreement.
            used_float = true;
            let mut covered: u32 = 0;
            let cp = CPoly::from_mpoly(block);
            let scale = block.max_coeff_abs().max(1.0);
            let mut rng = SplitMix64::new(seed ^ 0xb10c);
            for fl in &lines.floating {
                let mut max_rel = 0.0f64;
                for _ in 0..4 {
                    let [p, q] = fl.span_points(&mut rng);
                    for pt in [p, q] {
                        let v = cp.eval(&pt).value.norm();
                        let psc = pt.iter().map(|c| c.norm()).fold(1.0f64, f64::max);
                        max_rel = max_rel.max(v / (scale * psc.powi(block.degree() as i32)));
                    }
                }
                if max_rel < LINE_ACCEPT {
                    covered += 1;
                }
            }
            if covered < block.degree() {
                // Some component of the block is not an invariant line.
                return Ok(ConvexityReport {
                    verdict: ConvexVerdict::NotConvex(Certification::Floating),
                    reduced,
                    lines,
                    witness: Some(block.clone()),
                });
            }
        }
    }

    Ok(ConvexityReport {
        verdict: ConvexVerdict::Convex(if used_float {
            Certification::Floating
        } else {
            Certification::Exact
        }),
        reduced,
        lines,
        witness: None,
    })
}

/// Factor a divisor into invariant lines of the given foliations plus a
/// residual; a factor counts only when invariant for every foliation.
pub fn factor_into_common_invariant_lines(
    divisor: &MPoly,
    fols: &[&Foliation],
    seed: u64,
) -> DivisorFactorization {
    let scan = linear_factors(divisor, seed);
    let mut exact_factors = Vec::new();
    let mut res = divisor.clone();
    for (line, _) in &scan.exact {
        if fols.iter().all(|f| is_invariant_line(f, line)) {
            let (rest, e) = divide_out_maximal(&res, &line.as_mpoly());
            if e > 0 {
                exact_factors.push((line.as_mpoly(), e));
                res = rest;
            }
        }
    }
    let mut float_factors = Vec::new();
    for (line, mult) in &scan.floating {
        let inv_all = fols
            .iter()
            .all(|f| is_invariant_line_float(f, line, seed ^ 0xfac) == Some(true));
        if inv_all {
            float_factors.push((line.clone(), *mult));
        }
    }
    DivisorFactorization {
        exact_factors,
        float_factors,
        residual: res,
    }
}
