//! Singular points: location (exact when recognizable), intersection
//! multiplicity, algebraic multiplicity nu, radial order, and the dual
//! lines of the special ones.
//!
//! Points are found chartwise by resultant elimination with an exact shear
//! when the projection is not generic, then refined/recognized. nu and the
//! radial test come from the first nonzero jet of the chart vector field:
//! the singularity is radial of order nu exactly when the tangent-cone
//! polynomial x*B_nu - y*A_nu vanishes identically.

use num_complex::Complex64;
use num_traits::Zero;

use crate::polycore::dd::Cdd;
use crate::polycore::roots::{
    accurate_roots, polish_root_dd, rational_roots_deflating, recognize_gauss_rat,
};
use crate::polycore::{exact_div, gcd, resultant, CPoly, GaussRat, MPoly, VarSet};
use crate::rng::SplitMix64;

use super::{aff_ring, compose, hom_ring, Foliation, FoliationError};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Chart {
    /// z = 1, coordinates (x, y)
    Z,
    /// x = 1, coordinates (u, w) = (y/x, z/x)
    X,
    /// y = 1, coordinates (u, w) = (x/y, z/y)
    Y,
}

/// Projective point, normalized: exact triples scale the last nonzero
/// coordinate to 1; floating triples scale the largest coordinate to 1.
#[derive(Clone, Debug)]
pub enum ProjPoint {
    Exact([GaussRat; 3]),
    Float([Complex64; 3]),
}

impl ProjPoint {
    pub fn exact(x: GaussRat, y: GaussRat, z: GaussRat) -> Self {
        let mut t = [x, y, z];
        let pivot = t
            .iter()
            .rev()
            .find(|c| !c.is_zero())
            .expect("nonzero projective point")
            .clone();
        for c in t.iter_mut() {
            *c = &*c / &pivot;
        }
        ProjPoint::Exact(t)
    }

    pub fn float(x: Complex64, y: Complex64, z: Complex64) -> Self {
        let mut t = [x, y, z];
        let pivot = t
            .iter()
            .cloned()
            .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
            .unwrap();
        for c in t.iter_mut() {
            *c /= pivot;
        }
        ProjPoint::Float(t)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ProjPoint::Exact(_))
    }

    pub fn to_c64(&self) -> [Complex64; 3] {
        match self {
            ProjPoint::Exact(t) => [t[0].to_c64(), t[1].to_c64(), t[2].to_c64()],
            ProjPoint::Float(t) => *t,
        }
    }

    /// Affine (x, y) when z != 0.
    pub fn affine_xy(&self) -> Option<(GaussRat, GaussRat)> {
        match self {
            ProjPoint::Exact(t) if !t[2].is_zero() => {
                let inv = t[2].inv();
                Some((&t[0] * &inv, &t[1] * &inv))
            }
            _ => None,
        }
    }

    pub fn at_infinity(&self) -> bool {
        match self {
            ProjPoint::Exact(t) => t[2].is_zero(),
            ProjPoint::Float(t) => t[2].norm() < 1e-12,
        }
    }

    /// Deterministic sort key.
    pub fn sort_key(&self) -> (u8, String) {
        match self {
            ProjPoint::Exact(t) => (0, format!("{}|{}|{}", t[0], t[1], t[2])),
            ProjPoint::Float(t) => (
                1,
                t.iter()
                    .map(|c| format!("{:.12e},{:.12e}", c.re, c.im))
                    .collect::<Vec<_>>()
                    .join("|"),
            ),
        }
    }

    /// Projective equality within a floating tolerance.
    pub fn approx_eq(&self, other: &ProjPoint, tol: f64) -> bool {
        let a = self.to_c64();
        let b = other.to_c64();
        let cross = [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
        cross.iter().map(|c| c.norm()).fold(0.0, f64::max) < tol
    }
}

#[derive(Clone, Debug)]
pub enum Classification {
    Done {
        /// Algebraic multiplicity: degree of the first nonzero jet.
        nu: u32,
        /// Set to nu when the first jet is a multiple of the radial field.
        radial_order: Option<u32>,
        /// nu >= 2 or radial.
        special: bool,
    },
    Inconclusive {
        reason: String,
    },
}

impl Classification {
    pub fn is_special(&self) -> Option<bool> {
        match self {
            Classification::Done { special, .. } => Some(*special),
            Classification::Inconclusive { .. } => None,
        }
    }

    pub fn is_radial(&self) -> bool {
        matches!(
            self,
            Classification::Done {
                radial_order: Some(_),
                ..
            }
        )
    }
}

#[derive(Clone, Debug)]
pub struct SingularityRecord {
    pub location: ProjPoint,
    /// Intersection multiplicity of the defining pair at the point; these
    /// sum to d^2 + d + 1.
    pub mu: u32,
    pub class: Classification,
}

impl SingularityRecord {
    pub fn nu(&self) -> Option<u32> {
        match &self.class {
            Classification::Done { nu, .. } => Some(*nu),
            _ => None,
        }
    }

    pub fn radial_order(&self) -> Option<u32> {
        match &self.class {
            Classification::Done { radial_order, .. } => *radial_order,
            _ => None,
        }
    }
}

/// 1-form components of the foliation in an affine chart, saturated.
/// Chart Z: (A, B)|z=1; chart X: (B, C)|x=1 in (u, w) = (y/x, z/x);
/// chart Y: (A, C)|y=1 in (u, w) = (x/y, z/y).
pub fn chart_pair(fol: &Foliation, chart: Chart) -> (MPoly, MPoly) {
    let hom = hom_ring();
    let aff = aff_ring();
    let [big_a, big_b, big_c] = fol.homogeneous_triple();
    let subs = |f: &MPoly, one_var: &str, u_var: &str, w_var: &str| -> MPoly {
        let u = MPoly::var(&aff, "x");
        let w = MPoly::var(&aff, "y");
        let one = MPoly::one(&aff);
        let targets = hom
            .names()
            .iter()
            .map(|n| {
                if n == one_var {
                    one.clone()
                } else if n == u_var {
                    u.clone()
                } else if n == w_var {
                    w.clone()
                } else {
                    unreachable!()
                }
            })
            .collect::<Vec<_>>();
        compose(&f.with_vars(&hom), &targets, &aff)
    };
    let (mut a, mut b) = match chart {
        Chart::Z => (subs(big_a, "z", "x", "y"), subs(big_b, "z", "x", "y")),
        Chart::X => (subs(big_b, "x", "y", "z"), subs(big_c, "x", "y", "z")),
        Chart::Y => (subs(big_a, "y", "x", "z"), subs(big_c, "y", "x", "z")),
    };
    let g = gcd(&a, &b);
    if !g.is_constant() {
        a = exact_div(&a, &g).expect("gcd divides");
        b = exact_div(&b, &g).expect("gcd divides");
    }
    (a, b)
}

/// Chart-local coordinates of a projective point, when the chart contains it.
pub fn chart_coords(point: &ProjPoint, chart: Chart) -> Option<(PointCoord, PointCoord)> {
    let (num1, num2, den) = match chart {
        Chart::Z => (0usize, 1usize, 2usize),
        Chart::X => (1, 2, 0),
        Chart::Y => (0, 2, 1),
    };
    match point {
        ProjPoint::Exact(t) => {
            if t[den].is_zero() {
                return None;
            }
            let inv = t[den].inv();
            Some((
                PointCoord::Exact(&t[num1] * &inv),
                PointCoord::Exact(&t[num2] * &inv),
            ))
        }
        ProjPoint::Float(t) => {
            if t[den].norm() < 1e-9 {
                return None;
            }
            Some((
                PointCoord::Float(t[num1] / t[den]),
                PointCoord::Float(t[num2] / t[den]),
            ))
        }
    }
}

#[derive(Clone, Debug)]
pub enum PointCoord {
    Exact(GaussRat),
    Float(Complex64),
}

impl PointCoord {
    pub fn to_c64(&self) -> Complex64 {
        match self {
            PointCoord::Exact(g) => g.to_c64(),
            PointCoord::Float(c) => *c,
        }
    }
}

/// Common zeros of a saturated affine pair with intersection
/// multiplicities; exact coordinates whenever recognizable.
fn common_zeros(
    a: &MPoly,
    b: &MPoly,
    seed: u64,
) -> Result<Vec<(PointCoord, PointCoord, u32)>, FoliationError> {
    let aff = aff_ring();
    let a = a.with_vars(&aff);
    let b = b.with_vars(&aff);
    if a.is_zero() || b.is_zero() {
        return Err(FoliationError::Other(
            "chart pair component vanished; pair not saturated".into(),
        ));
    }
    if a.is_constant() || b.is_constant() {
        return Ok(vec![]);
    }
    let mut rng = SplitMix64::new(seed);
    'shear: for shear in 0i64..8 {
        // x -> x + s*y
        let x = MPoly::var(&aff, "x");
        let y = MPoly::var(&aff, "y");
        let xs = x.add(&y.scale(&GaussRat::from_int(shear)));
        let a_s = a.substitute_name("x", &xs);
        let b_s = b.substitute_name("x", &xs);
        // Generic leading coefficients in y: constants.
        let yi = aff.index_of("y").unwrap();
        if !a_s.leading_coeff_in(yi).is_constant() || !b_s.leading_coeff_in(yi).is_constant() {
            continue 'shear;
        }
        let r = resultant(&a_s, &b_s, yi)?;
        if r.is_zero() {
            return Err(FoliationError::Other(
                "resultant vanished identically: common factor in the chart pair".into(),
            ));
        }
        if r.is_constant() {
            return Ok(vec![]);
        }
        // Squarefree decomposition of the univariate resultant.
        let parts = univariate_squarefree_decomposition(&r, 0);
        let mut out = Vec::new();
        for (factor, mult) in parts {
            let (exact_roots, float_roots) = rational_roots_deflating(&factor, 0, rng.next_u64());
            {
                let mut all: Vec<Complex64> = exact_roots.iter().map(|g| g.to_c64()).collect();
                all.extend(float_roots.iter().cloned());
                let mut min_sep = f64::INFINITY;
                for i in 0..all.len() {
                    for j in i + 1..all.len() {
                        min_sep = min_sep.min((all[i] - all[j]).norm());
                    }
                }
                if min_sep < 1e-7 {
                    // ill-conditioned cluster: flag rather than silently merge
                    return Err(FoliationError::Other(
                        "clustered resultant roots could not be separated".into(),
                    ));
                }
            }
            let tagged: Vec<(Option<GaussRat>, Complex64)> = exact_roots
                .iter()
                .map(|g| (Some(g.clone()), g.to_c64()))
                .chain(float_roots.iter().map(|r| (None, *r)))
                .collect();
            for (exact_root, root) in &tagged {
                let root = root;
                let mut handled_exact = false;
                if let Some(xbar) = exact_root.clone() {
                    let ay = a_s.substitute_name("x", &MPoly::constant(&aff, xbar.clone()));
                    let by = b_s.substitute_name("x", &MPoly::constant(&aff, xbar.clone()));
                    let g = gcd(&ay, &by);
                    match exact_univariate_roots(&g, yi, &mut rng) {
                        Some(ys) if ys.len() == 1 => {
                            let yv = ys.into_iter().next().unwrap();
                            // un-shear: x = xbar + s*ybar
                            let xv = &xbar + &(&GaussRat::from_int(shear) * &yv);
                            out.push((PointCoord::Exact(xv), PointCoord::Exact(yv), mult));
                            handled_exact = true;
                        }
                        Some(ys) if ys.is_empty() => {
                            return Err(FoliationError::Other(
                                "resultant root with no common y-solution".into(),
                            ));
                        }
                        Some(_) => continue 'shear, // several points share x: reshear
                        None => {} // irrational y over exact x: float matching below
                    }
                }
                if !handled_exact {
                    // floating root: intersect the y-roots of both, with
                    // paired-limb coefficient extraction at the root
                    let ra = uni_roots_at_dd(&a_s, yi, 0, *root, rng.next_u64());
                    let rb = uni_roots_at_dd(&b_s, yi, 0, *root, rng.next_u64());
                    let mut matches: Vec<Complex64> = Vec::new();
                    for cand in &ra {
                        if rb.iter().any(|r2| (cand - r2).norm() < 1e-6) {
                            matches.push(*cand);
                        }
                    }
                    matches.dedup_by(|p, q| (*p - *q).norm() < 1e-6);
                    match matches.len() {
                        1 => {
                            let yv = matches[0];
                            let xv = root + Complex64::new(shear as f64, 0.0) * yv;
                            out.push((PointCoord::Float(xv), PointCoord::Float(yv), mult));
                        }
                        0 => {
                            return Err(FoliationError::Other(
                                "floating resultant root with no matching y".into(),
                            ));
                        }
                        _ => continue 'shear,
                    }
                }
            }
        }
        return Ok(out);
    }
    Err(FoliationError::Other(
        "no generic shear found for singularity solving".into(),
    ))
}

/// Roots in `var` of a bivariate exact polynomial with the other variable
/// fixed at a floating value; coefficients extracted in paired-limb
/// precision so huge exact coefficients do not wash out the accuracy.
fn uni_roots_at_dd(
    poly: &MPoly,
    var: usize,
    fixed_var: usize,
    at: Complex64,
    seed: u64,
) -> Vec<Complex64> {
    let deg = poly.degree_in(var) as usize;
    let at_dd = Cdd::from_c64(at);
    let mut coeffs = vec![Cdd::ZERO; deg + 1];
    for (m, c) in poly.terms() {
        let mut t = c.to_cdd();
        let e = m.exps()[fixed_var];
        for _ in 0..e {
            t = t.mul(at_dd);
        }
        let k = m.exps()[var] as usize;
        coeffs[k] = coeffs[k].add(t);
    }
    let f64_coeffs: Vec<Complex64> = coeffs.iter().map(|c| c.to_c64()).collect();
    let rs = crate::polycore::roots::all_roots(&f64_coeffs, seed);
    rs.roots
        .iter()
        .map(|&r| polish_root_dd(&coeffs, Cdd::from_c64(r)).to_c64())
        .collect()
}

/// Squarefree decomposition of a univariate exact polynomial by repeated
/// gcd with the derivative: returns pairwise products (factor, multiplicity).
fn univariate_squarefree_decomposition(r: &MPoly, var: usize) -> Vec<(MPoly, u32)> {
    let mut out = Vec::new();
    let mut current = r.clone();
    let mut mult = 1u32;
    loop {
        if current.degree_in(var) == 0 {
            break;
        }
        let d = current.derivative(var);
        let g = gcd(&current, &d);
        let squarefree = exact_div(&current, &g).expect("gcd divides");
        // factors appearing exactly `mult` times: squarefree / gcd(squarefree, g)
        let next = g;
        let only_here = exact_div(
            &squarefree,
            &gcd(&squarefree, &next),
        )
        .expect("gcd divides");
        if only_here.degree_in(var) > 0 {
            out.push((only_here, mult));
        }
        current = next;
        mult += 1;
    }
    out
}

/// All roots of an exact univariate polynomial when they are Gaussian
/// rationals; None when some root fails recognition.
fn exact_univariate_roots(
    g: &MPoly,
    var: usize,
    rng: &mut SplitMix64,
) -> Option<Vec<GaussRat>> {
    if g.degree_in(var) == 0 {
        return Some(vec![]);
    }
    let sq = {
        let d = g.derivative(var);
        let gg = gcd(g, &d);
        exact_div(g, &gg).expect("gcd divides")
    };
    let roots = accurate_roots(&sq, var, rng.next_u64());
    let mut out = Vec::new();
    for r in &roots {
        let cand = recognize_gauss_rat(*r, 1 << 24, 1e-9)?;
        let mut pt = vec![GaussRat::zero(); 2];
        pt[var] = cand.clone();
        if !sq.eval_exact(&pt).is_zero() {
            return None;
        }
        out.push(cand);
    }
    Some(out)
}

/// Classify a singular point from the chart vector field
/// `V = -b d/du + a d/dw`: nu is the degree of the first nonzero jet and
/// the point is radial (order nu) when the tangent cone u*B_nu - w*A_nu
/// vanishes identically.
pub fn classify_in_chart(
    fol: &Foliation,
    chart: Chart,
    u0: &PointCoord,
    w0: &PointCoord,
) -> Classification {
    let aff = aff_ring();
    let (a, b) = chart_pair(fol, chart);
    let v1 = b.neg();
    let v2 = a;
    match (u0, w0) {
        (PointCoord::Exact(ue), PointCoord::Exact(we)) => {
            let u = MPoly::var(&aff, "x").add(&MPoly::constant(&aff, ue.clone()));
            let w = MPoly::var(&aff, "y").add(&MPoly::constant(&aff, we.clone()));
            let targets = vec![u, w];
            let lv1 = compose(&v1, &targets, &aff);
            let lv2 = compose(&v2, &targets, &aff);
            classify_exact_jets(&lv1, &lv2)
        }
        _ => classify_float_jets(&v1, &v2, u0.to_c64(), w0.to_c64()),
    }
}

fn classify_exact_jets(v1: &MPoly, v2: &MPoly) -> Classification {
    let aff = aff_ring();
    let max_deg = v1.degree().max(v2.degree());
    for nu in 0..=max_deg {
        let j1 = homogeneous_part(v1, nu);
        let j2 = homogeneous_part(v2, nu);
        if j1.is_zero() && j2.is_zero() {
            continue;
        }
        if nu == 0 {
            return Classification::Inconclusive {
                reason: "point is not singular".into(),
            };
        }
        let u = MPoly::var(&aff, "x");
        let w = MPoly::var(&aff, "y");
        let cone = u.mul(&j2).sub(&w.mul(&j1));
        let radial_order = if cone.is_zero() { Some(nu) } else { None };
        return Classification::Done {
            nu,
            radial_order,
            special: nu >= 2 || radial_order.is_some(),
        };
    }
    Classification::Inconclusive {
        reason: "vector field vanished to all orders".into(),
    }
}

fn homogeneous_part(p: &MPoly, deg: u32) -> MPoly {
    let mut terms = Vec::new();
    for (m, c) in p.terms() {
        if m.degree() == deg {
            terms.push((m.exps().to_vec(), c.clone()));
        }
    }
    MPoly::from_terms(p.vars(), terms)
}

/// Floating jets by evaluating exact partial derivatives at the point;
/// thresholds leave a deliberate gap so borderline jets surface as
/// inconclusive instead of silently classifying.
fn classify_float_jets(
    v1: &MPoly,
    v2: &MPoly,
    u0: Complex64,
    w0: Complex64,
) -> Classification {
    const NONZERO: f64 = 1e-7;
    const ZERO: f64 = 1e-10;
    let max_deg = v1.degree().max(v2.degree());
    let scale = v1.max_coeff_abs().max(v2.max_coeff_abs()).max(1.0);
    let psc = (1.0 + u0.norm().max(w0.norm())).powi(max_deg as i32);
    let mut fact = vec![1.0f64; (max_deg + 2) as usize];
    for k in 1..fact.len() {
        fact[k] = fact[k - 1] * k as f64;
    }
    // jet coefficients c_{i,j} = d^{i+j} f / (du^i dw^j) / (i! j!)
    let jet_coeffs = |f: &MPoly, i: u32, j: u32| -> Complex64 {
        let mut d = f.clone();
        for _ in 0..i {
            d = d.derivative(0);
        }
        for _ in 0..j {
            d = d.derivative(1);
        }
        let cp = CPoly::from_mpoly(&d);
        cp.eval(&[u0, w0]).value / (fact[i as usize] * fact[j as usize])
    };
    for nu in 0u32..=max_deg {
        let mut max_mag = 0.0f64;
        let mut coeffs1 = Vec::new();
        let mut coeffs2 = Vec::new();
        for i in 0..=nu {
            let j = nu - i;
            let c1 = jet_coeffs(v1, i, j);
            let c2 = jet_coeffs(v2, i, j);
            max_mag = max_mag.max(c1.norm()).max(c2.norm());
            coeffs1.push(c1);
            coeffs2.push(c2);
        }
        let rel = max_mag / (scale * psc);
        if rel < ZERO {
            continue;
        }
        if rel < NONZERO {
            return Classification::Inconclusive {
                reason: format!("jet magnitude {rel:.3e} in the uncertain band at order {nu}"),
            };
        }
        if nu == 0 {
            return Classification::Inconclusive {
                reason: "point is not singular (floating)".into(),
            };
        }
        // tangent cone u*B - w*A: coefficient of u^{i+1} w^{j} gets
        // contributions B_{i,j} and -A_{i+1, j-1}
        let mut cone_max = 0.0f64;
        for k in 0..=(nu + 1) {
            // coefficient of u^k w^{nu+1-k}
            let mut c = Complex64::zero();
            if k >= 1 {
                // from u * B: B term with i = k-1, j = nu+1-k
                let i = k - 1;
                c += coeffs2[i as usize];
            }
            if k <= nu {
                // from -w * A: A term with i = k, j = nu - k
                c -= coeffs1[k as usize];
            }
            cone_max = cone_max.max(c.norm());
        }
        let cone_rel = cone_max / (scale * psc);
        let radial_order = if cone_rel < ZERO {
            Some(nu)
        } else if cone_rel < NONZERO {
            return Classification::Inconclusive {
                reason: format!("tangent cone magnitude {cone_rel:.3e} in the uncertain band"),
            };
        } else {
            None
        };
        return Classification::Done {
            nu,
            radial_order,
            special: nu >= 2 || radial_order.is_some(),
        };
    }
    Classification::Inconclusive {
        reason: "all jets below the floating zero threshold".into(),
    }
}

/// All singular points of the foliation with multiplicities and
/// classification, in deterministic order.
pub fn singular_points(
    fol: &Foliation,
    seed: u64,
) -> Result<Vec<SingularityRecord>, FoliationError> {
    let mut records: Vec<SingularityRecord> = Vec::new();

    // Affine chart z = 1.
    let (a, b) = chart_pair(fol, Chart::Z);
    for (xv, yv, mu) in common_zeros(&a, &b, seed ^ 0x5a)? {
        let class = classify_in_chart(fol, Chart::Z, &xv, &yv);
        let location = match (&xv, &yv) {
            (PointCoord::Exact(x), PointCoord::Exact(y)) => {
                ProjPoint::exact(x.clone(), y.clone(), GaussRat::one())
            }
            _ => ProjPoint::float(xv.to_c64(), yv.to_c64(), Complex64::new(1.0, 0.0)),
        };
        records.push(SingularityRecord {
            location,
            mu,
            class,
        });
    }

    // Chart x = 1: keep only points with w = 0 (at infinity, x != 0).
    let (a, b) = chart_pair(fol, Chart::X);
    for (uv, wv, mu) in common_zeros(&a, &b, seed ^ 0x5b)? {
        let at_inf = match &wv {
            PointCoord::Exact(w) => w.is_zero(),
            PointCoord::Float(w) => w.norm() < 1e-9,
        };
        if !at_inf {
            continue;
        }
        let class = classify_in_chart(fol, Chart::X, &uv, &wv);
        let location = match &uv {
            PointCoord::Exact(u) => ProjPoint::exact(GaussRat::one(), u.clone(), GaussRat::zero()),
            PointCoord::Float(u) => {
                ProjPoint::float(Complex64::new(1.0, 0.0), *u, Complex64::zero())
            }
        };
        records.push(SingularityRecord {
            location,
            mu,
            class,
        });
    }

    // The remaining point [0:1:0], via chart y = 1 at the origin.
    let (a, b) = chart_pair(fol, Chart::Y);
    let zero2 = [GaussRat::zero(), GaussRat::zero()];
    if a.eval_exact(&zero2).is_zero() && b.eval_exact(&zero2).is_zero() {
        for (uv, wv, mu) in common_zeros(&a, &b, seed ^ 0x5c)? {
            let at_origin = match (&uv, &wv) {
                (PointCoord::Exact(u), PointCoord::Exact(w)) => u.is_zero() && w.is_zero(),
                _ => uv.to_c64().norm() < 1e-9 && wv.to_c64().norm() < 1e-9,
            };
            if !at_origin {
                continue;
            }
            let class = classify_in_chart(fol, Chart::Y, &uv, &wv);
            records.push(SingularityRecord {
                location: ProjPoint::exact(GaussRat::zero(), GaussRat::one(), GaussRat::zero()),
                mu,
                class,
            });
        }
    }

    records.sort_by_key(|r| r.location.sort_key());
    Ok(records)
}

/// Dual line of a projective point, in the (p, q) chart of the dual plane:
/// the point [x0:y0:z0] dualizes to {x0*p + z0*q - y0 = 0}; [0:1:0]
/// dualizes to the chart's infinity line.
#[derive(Clone, Debug)]
pub enum DualLine {
    Affine(MPoly),
    FloatAffine {
        p_coeff: Complex64,
        q_coeff: Complex64,
        constant: Complex64,
    },
    ChartInfinity,
}

pub fn dual_ring() -> VarSet {
    VarSet::new(vec!["p", "q"])
}

pub fn dual_line_of_point(point: &ProjPoint) -> DualLine {
    match point {
        ProjPoint::Exact(t) => {
            if t[0].is_zero() && t[2].is_zero() {
                return DualLine::ChartInfinity;
            }
            let pq = dual_ring();
            let poly = MPoly::var(&pq, "p")
                .scale(&t[0])
                .add(&MPoly::var(&pq, "q").scale(&t[2]))
                .sub(&MPoly::constant(&pq, t[1].clone()));
            DualLine::Affine(poly.unit_normal())
        }
        ProjPoint::Float(t) => {
            if t[0].norm() < 1e-12 && t[2].norm() < 1e-12 {
                return DualLine::ChartInfinity;
            }
            DualLine::FloatAffine {
                p_coeff: t[0],
                q_coeff: t[2],
                constant: -t[1],
            }
        }
    }
}

#[derive(Debug)]
pub struct SpecialsReport {
    pub special: Vec<SingularityRecord>,
    pub radial: Vec<SingularityRecord>,
    pub special_duals: Vec<DualLine>,
    pub radial_duals: Vec<DualLine>,
    pub inconclusive: Vec<SingularityRecord>,
}

/// Filter the singular points to the special ones (nu >= 2 or radial) and
/// attach the dual lines.
pub fn special_singularities(
    fol: &Foliation,
    seed: u64,
) -> Result<SpecialsReport, FoliationError> {
    let all = singular_points(fol, seed)?;
    let mut special = Vec::new();
    let mut radial = Vec::new();
    let mut inconclusive = Vec::new();
    for rec in all {
        match &rec.class {
            Classification::Done {
                special: is_special,
                radial_order,
                ..
            } => {
                if radial_order.is_some() {
                    radial.push(rec.clone());
                }
                if *is_special {
                    special.push(rec);
                }
            }
            Classification::Inconclusive { .. } => inconclusive.push(rec),
        }
    }
    let special_duals = special
        .iter()
        .map(|r| dual_line_of_point(&r.location))
        .collect();
    let radial_duals = radial
        .iter()
        .map(|r| dual_line_of_point(&r.location))
        .collect();
    Ok(SpecialsReport {
        special,
        radial,
        special_duals,
        radial_duals,
        inconclusive,
    })
}
