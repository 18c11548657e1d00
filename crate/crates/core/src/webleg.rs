//! Formal web products, implicit presentations, the Legendre transform,
//! and dual-web discriminants (structural and resultant-based).
//!
//! The dual chart is (p, q) <-> the line {y = p x + q}; a dual implicit
//! presentation F(p, q; x) = 0 carries the slope convention dq/dp = -x.
//! A foliation member contributes the factor F(x, px+q; p) of the dual
//! polynomial; a line member with dual point (p0, q0) contributes the
//! pencil factor (q - q0) + (p - p0) x.

use num_complex::Complex64;
use num_traits::Zero;

use thiserror::Error;

use crate::foliation::sing::{
    dual_line_of_point, special_singularities, Classification, DualLine, ProjPoint,
};
use crate::foliation::{
    aff_ring, compose, hom_ring, is_invariant_line, random_invertible_matrix, Foliation,
    FoliationError, LineInPlane,
};
use crate::polycore::roots::all_roots;
use crate::polycore::{
    discriminant_in, divides, resultant, CPoly, ElimError, GaussRat, MPoly, VarSet,
};
use crate::rng::SplitMix64;

#[derive(Debug, Error)]
pub enum WebError {
    #[error("web has no members")]
    Empty,
    #[error("repeated component: identically zero discriminant")]
    RepeatedComponent,
    #[error("line through [0:1:0] has no affine dual point; rotate the plane first")]
    VerticalPencil,
    #[error("vertical affine pencil (b = 0); rotate the chart first")]
    VerticalFoliationChart,
    #[error(transparent)]
    Foliation(#[from] FoliationError),
    #[error("elimination failure: {0}")]
    Elim(#[from] ElimError),
}

/// Formal product of lines and foliations.
#[derive(Clone, Debug)]
pub struct WebSpec {
    pub lines: Vec<LineInPlane>,
    pub foliations: Vec<Foliation>,
}

impl WebSpec {
    pub fn new(lines: Vec<LineInPlane>, foliations: Vec<Foliation>) -> Result<Self, WebError> {
        if lines.is_empty() && foliations.is_empty() {
            return Err(WebError::Empty);
        }
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                if lines[i] == lines[j] {
                    return Err(WebError::RepeatedComponent);
                }
            }
        }
        for i in 0..foliations.len() {
            for j in i + 1..foliations.len() {
                if foliations[i].same_foliation(&foliations[j]) {
                    return Err(WebError::RepeatedComponent);
                }
            }
        }
        Ok(WebSpec { lines, foliations })
    }

    pub fn single(fol: Foliation) -> Self {
        WebSpec {
            lines: vec![],
            foliations: vec![fol],
        }
    }

    /// Total number of dual directions: lines + sum of degrees.
    pub fn direction_count(&self) -> u32 {
        self.lines.len() as u32 + self.foliations.iter().map(|f| f.degree()).sum::<u32>()
    }

    pub fn needs_rotation(&self) -> bool {
        self.lines.iter().any(|l| l.through_vertical_axis_point())
    }

    /// Apply a projective change to every member.
    pub fn transform(&self, m: &[[GaussRat; 3]; 3]) -> Result<WebSpec, WebError> {
        let lines = self.lines.iter().map(|l| l.transform(m)).collect();
        let mut fols = Vec::new();
        for f in &self.foliations {
            fols.push(f.transform(m)?);
        }
        WebSpec::new(lines, fols)
    }
}

/// Exact random rotation making every line member dualizable in the
/// (p, q) chart. Identity when none is needed.
pub fn rotate_if_needed(
    web: &WebSpec,
    seed: u64,
) -> Result<(WebSpec, Option<[[GaussRat; 3]; 3]>), WebError> {
    if !web.needs_rotation() {
        return Ok((web.clone(), None));
    }
    let mut rng = SplitMix64::new(seed ^ 0x07a7e);
    for _ in 0..32 {
        let m = random_invertible_matrix(&mut rng);
        let rotated = web.transform(&m)?;
        if !rotated.needs_rotation() {
            return Ok((rotated, Some(m)));
        }
    }
    Err(WebError::VerticalPencil)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SlopeConvention {
    /// F(x, y; p) with p = dy/dx.
    Primal,
    /// F(p, q; x) with dq/dp = -x.
    Dual,
}

#[derive(Clone, Debug)]
pub struct ImplicitWeb {
    pub poly: MPoly,
    pub convention: SlopeConvention,
    pub degree_in_slope: u32,
}

/// Ring of the primal presentation (x, y, p).
pub fn primal_ring() -> VarSet {
    VarSet::new(vec!["x", "y", "p"])
}

/// Ring of the dual presentation (p, q, x).
pub fn dual_web_ring() -> VarSet {
    VarSet::new(vec!["p", "q", "x"])
}

/// Implicit affine presentation F(x, y; p) = a + p*b of a single foliation.
pub fn implicit_presentation(fol: &Foliation) -> Result<ImplicitWeb, WebError> {
    let (a, b) = fol.affine_pair();
    if b.is_zero() {
        return Err(WebError::VerticalFoliationChart);
    }
    let ring = primal_ring();
    let p = MPoly::var(&ring, "p");
    let poly = a.with_vars(&ring).add(&p.mul(&b.with_vars(&ring)));
    Ok(ImplicitWeb {
        poly,
        convention: SlopeConvention::Primal,
        degree_in_slope: 1,
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MemberTag {
    Line(usize),
    Foliation(usize),
}

/// Legendre transform of a web: the dual implicit polynomial together with
/// its per-member factors.
#[derive(Clone, Debug)]
pub struct DualWeb {
    pub implicit: ImplicitWeb,
    pub factors: Vec<(MemberTag, MPoly)>,
    pub source: WebSpec,
}

impl DualWeb {
    pub fn degree_in_x(&self) -> u32 {
        self.implicit.degree_in_slope
    }
}

/// Dual factor of a single foliation: F(x, p x + q; p).
pub fn legendre_factor_foliation(fol: &Foliation) -> Result<MPoly, WebError> {
    let primal = implicit_presentation(fol)?;
    let ring = dual_web_ring();
    // embed F(x, y, p) into (p, q, x, y), substitute y -> p x + q, project
    let wide = VarSet::new(vec!["p", "q", "x", "y"]);
    let f = primal.poly.with_vars(&wide);
    let sub = MPoly::var(&wide, "p")
        .mul(&MPoly::var(&wide, "x"))
        .add(&MPoly::var(&wide, "q"));
    let fhat = f.substitute_name("y", &sub);
    // Primitive scaling: slopes only see the vanishing locus, and integer
    // coefficients stay exact in the f64 evaluation shadows.
    let out = fhat.with_vars(&ring).unit_normal();
    debug_assert_eq!(out.degree_in_name("x"), fol.degree());
    Ok(out)
}

/// Dual factor of a line member: the pencil through its dual point,
/// (q - q0) + (p - p0) x.
pub fn legendre_factor_line(line: &LineInPlane) -> Result<MPoly, WebError> {
    let (p0, q0) = line.dual_pq().ok_or(WebError::VerticalPencil)?;
    let ring = dual_web_ring();
    let p = MPoly::var(&ring, "p");
    let q = MPoly::var(&ring, "q");
    let x = MPoly::var(&ring, "x");
    // Primitive scaling, as for the foliation factors.
    Ok(q.sub(&MPoly::constant(&ring, q0))
        .add(&p.sub(&MPoly::constant(&ring, p0)).mul(&x))
        .unit_normal())
}

/// Legendre transform: product of the member factors. Rejects repeated
/// members (the dual would have identically zero discriminant) and line
/// members without an affine dual point.
pub fn legendre(web: &WebSpec) -> Result<DualWeb, WebError> {
    if web.lines.is_empty() && web.foliations.is_empty() {
        return Err(WebError::Empty);
    }
    let ring = dual_web_ring();
    let mut factors: Vec<(MemberTag, MPoly)> = Vec::new();
    for (i, line) in web.lines.iter().enumerate() {
        factors.push((MemberTag::Line(i), legendre_factor_line(line)?));
    }
    for (i, fol) in web.foliations.iter().enumerate() {
        factors.push((MemberTag::Foliation(i), legendre_factor_foliation(fol)?));
    }
    let mut poly = MPoly::one(&ring);
    for (_, f) in &factors {
        poly = poly.mul(f);
    }
    let xi = ring.index_of("x").unwrap();
    let degree_in_slope = poly.degree_in(xi);
    debug_assert_eq!(degree_in_slope, web.direction_count());
    Ok(DualWeb {
        implicit: ImplicitWeb {
            poly,
            convention: SlopeConvention::Dual,
            degree_in_slope,
        },
        factors,
        source: web.clone(),
    })
}

/// (number of directions, max total (p, q)-degree of the implicit form).
pub fn legendre_degree_check(dual: &DualWeb) -> (u32, u32) {
    let ring = dual_web_ring();
    let pi = ring.index_of("p").unwrap();
    let qi = ring.index_of("q").unwrap();
    let pq_deg = dual
        .implicit
        .poly
        .terms()
        .map(|(m, _)| m.exps()[pi] + m.exps()[qi])
        .max()
        .unwrap_or(0);
    (dual.implicit.degree_in_slope, pq_deg)
}

/// Resultant-route discriminant: product over factors of disc_x times the
/// squared pairwise resultants, content-normalized. Equals disc_x of the
/// product up to a unit and avoids eliminating x from the full product.
pub fn discriminant_resultant(dual: &DualWeb) -> Result<MPoly, WebError> {
    let ring = dual_web_ring();
    let xi = ring.index_of("x").unwrap();
    let mut acc = MPoly::one(&ring);
    for (_, f) in &dual.factors {
        if f.degree_in(xi) >= 1 {
            let d = discriminant_in(f, xi)?;
            if d.is_zero() {
                return Err(WebError::RepeatedComponent);
            }
            if f.degree_in(xi) >= 2 {
                acc = acc.mul(&d);
            }
        }
    }
    for i in 0..dual.factors.len() {
        for j in i + 1..dual.factors.len() {
            let (fi, fj) = (&dual.factors[i].1, &dual.factors[j].1);
            if fi.degree_in(xi) == 0 || fj.degree_in(xi) == 0 {
                continue;
            }
            let r = resultant(fi, fj, xi)?;
            if r.is_zero() {
                return Err(WebError::RepeatedComponent);
            }
            acc = acc.mul(&r).mul(&r);
        }
    }
    // The web discriminant lives in (p, q).
    Ok(acc.unit_normal())
}

/// Discriminant of the dual of a single foliation, computed directly.
pub fn discriminant_direct(dual: &DualWeb) -> Result<MPoly, WebError> {
    let ring = dual_web_ring();
    let xi = ring.index_of("x").unwrap();
    if dual.implicit.poly.degree_in(xi) < 1 {
        return Ok(MPoly::one(&ring));
    }
    if dual.implicit.poly.degree_in(xi) == 1 {
        return Ok(MPoly::one(&ring));
    }
    Ok(discriminant_in(&dual.implicit.poly, xi)?.unit_normal())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    /// Dual line of a radial singularity.
    RadialDual,
    /// Dual line of a non-radial singularity with nu >= 2 (the dual of the
    /// origin for homogeneous members).
    MultipleDual,
    /// Dual line of a foliation singularity lying on a line member.
    SingOnLineDual,
    /// Dual line of the intersection point of two line members.
    LinePairDual,
    /// Dual line of a point singular for two distinct foliation members:
    /// both dual factors share the root there, so the product web
    /// degenerates along it even when the point is non-special.
    SharedSingDual,
    /// Gauss image of a non-invariant tangency line, itself a line.
    GaussImageLine,
    /// Gauss image of a tangency component, as sampled points.
    GaussImageCloud,
}

#[derive(Clone, Debug)]
pub struct StructuralComponent {
    pub kind: ComponentKind,
    pub line: Option<DualLine>,
    pub cloud: Vec<(Complex64, Complex64)>,
    /// Which member(s) produced it, for the report.
    pub provenance: String,
}

#[derive(Debug)]
pub struct DiscriminantReport {
    pub components: Vec<StructuralComponent>,
    pub resultant_poly: Option<MPoly>,
    /// Some(true/false) after the cross-check is run.
    pub agreement: Option<bool>,
    /// Points witnessing disagreement, when any.
    pub mismatch_witnesses: Vec<(Complex64, Complex64)>,
    /// True when some singularity failed classification.
    pub partial: bool,
}

/// Gauss image of a line under a foliation: either an exact line of the
/// dual plane or a sampled point cloud.
pub enum GaussImage {
    Line(DualLine),
    Cloud(Vec<(Complex64, Complex64)>),
}

pub fn gauss_image_of_line(
    fol: &Foliation,
    line: &LineInPlane,
    samples: usize,
    seed: u64,
) -> GaussImage {
    let hom = hom_ring();
    // Parametrize the line by two exact spanning points.
    let (b0, b1) = exact_span(line);
    let tring = VarSet::new(vec!["t"]);
    let t = MPoly::var(&tring, "t");
    let param: Vec<MPoly> = (0..3)
        .map(|i| {
            MPoly::constant(&tring, b0[i].clone())
                .add(&t.mul(&MPoly::constant(&tring, b1[i].clone())))
        })
        .collect();
    let imgs: Vec<MPoly> = fol
        .homogeneous_triple()
        .iter()
        .map(|f| compose(&f.with_vars(&hom), &param, &tring))
        .collect();
    // Image is a line iff some exact combination c1*A + c2*B + c3*C = 0.
    if let Some(kernel) = nullspace3(&imgs, &tring) {
        return GaussImage::Line(dual_line_of_point(&ProjPoint::exact(
            kernel[0].clone(),
            kernel[1].clone(),
            kernel[2].clone(),
        )));
    }
    // Sampled image points in the (p, q) chart.
    let mut rng = SplitMix64::new(seed ^ 0x6a55);
    let mut cloud = Vec::new();
    let mut attempts = 0;
    while cloud.len() < samples && attempts < samples * 20 {
        attempts += 1;
        let tv = Complex64::new(rng.next_symmetric(2.0), rng.next_symmetric(2.0));
        let pt: Vec<Complex64> = (0..3)
            .map(|i| b0[i].to_c64() + tv * b1[i].to_c64())
            .collect();
        let vals: Vec<Complex64> = imgs
            .iter()
            .map(|f| {
                // imgs are polynomials in t only
                CPoly::from_mpoly(f).eval(&[tv]).value
            })
            .collect();
        let _ = pt;
        // chart (p, q) = (alpha / -beta, gamma / -beta) for [alpha:beta:gamma]
        if vals[1].norm() < 1e-9 * (vals[0].norm() + vals[2].norm()).max(1e-300) {
            continue;
        }
        let p = -vals[0] / vals[1];
        let q = -vals[2] / vals[1];
        if p.norm() > 1e6 || q.norm() > 1e6 {
            continue;
        }
        cloud.push((p, q));
    }
    GaussImage::Cloud(cloud)
}

/// Two exact points spanning a line.
fn exact_span(line: &LineInPlane) -> ([GaussRat; 3], [GaussRat; 3]) {
    let c = line.coeffs();
    let zero = GaussRat::zero;
    let one = GaussRat::one;
    // Pick the pivot coordinate with nonzero coefficient, solve for it.
    if !c[0].is_zero() {
        let inv = c[0].inv();
        // x = -(beta*y + gamma*z)/alpha
        (
            [-&(&c[1] * &inv), one(), zero()],
            [-&(&c[2] * &inv), zero(), one()],
        )
    } else if !c[1].is_zero() {
        let inv = c[1].inv();
        (
            [one(), -&(&c[0] * &inv), zero()],
            [zero(), -&(&c[2] * &inv), one()],
        )
    } else {
        ([one(), zero(), zero()], [zero(), one(), zero()])
    }
}

/// Exact kernel vector of the 3-column coefficient matrix of (A(t), B(t),
/// C(t)), when the columns are linearly dependent.
fn nullspace3(polys: &[MPoly], tring: &VarSet) -> Option<[GaussRat; 3]> {
    let ti = tring.index_of("t").unwrap();
    let deg = polys.iter().map(|p| p.degree_in(ti)).max().unwrap_or(0) as usize;
    // rows: coefficient of t^k, columns: the three polynomials
    let mut rows: Vec<[GaussRat; 3]> = Vec::new();
    let coeff_lists: Vec<Vec<MPoly>> = polys.iter().map(|p| p.coeffs_in(ti)).collect();
    for k in 0..=deg {
        let mut row = [GaussRat::zero(), GaussRat::zero(), GaussRat::zero()];
        for (c, list) in row.iter_mut().zip(&coeff_lists) {
            if k < list.len() {
                *c = list[k].constant_term();
            }
        }
        rows.push(row);
    }
    // Gaussian elimination to find a kernel vector of the 3-column matrix.
    let mut pivots: Vec<(usize, [GaussRat; 3])> = Vec::new();
    for row in rows {
        let mut r = row;
        for (col, prow) in &pivots {
            if !r[*col].is_zero() {
                let factor = r[*col].clone();
                for k in 0..3 {
                    r[k] = &r[k] - &(&factor * &prow[k]);
                }
            }
        }
        if let Some(col) = (0..3).find(|&k| !r[k].is_zero()) {
            let inv = r[col].inv();
            for k in 0..3 {
                r[k] = &r[k] * &inv;
            }
            pivots.push((col, r));
            if pivots.len() == 3 {
                return None; // full rank: image is a genuine curve
            }
        }
    }
    // Build a kernel vector from the missing pivot column.
    let pivot_cols: Vec<usize> = pivots.iter().map(|(c, _)| *c).collect();
    let free = (0..3).find(|c| !pivot_cols.contains(c))?;
    let mut v = [GaussRat::zero(), GaussRat::zero(), GaussRat::zero()];
    v[free] = GaussRat::one();
    // back-substitute pivot rows (they are reduced against earlier pivots)
    for (col, row) in pivots.iter().rev() {
        // row has 1 at *col; solve row . v = 0
        let mut s = GaussRat::zero();
        for k in 0..3 {
            if k != *col {
                s = &s + &(&row[k] * &v[k]);
            }
        }
        v[*col] = -&s;
    }
    Some(v)
}

/// Assemble the structural discriminant of the dual web: dual lines of
/// special singularities, of singularities on the member lines, of
/// line-pair intersections, and Gauss images of non-invariant tangency
/// components.
pub fn discriminant_structural(web: &WebSpec, seed: u64) -> Result<DiscriminantReport, WebError> {
    let mut components: Vec<StructuralComponent> = Vec::new();
    let mut partial = false;

    // Special singularities per foliation member.
    let mut specials_per_fol = Vec::new();
    for (i, fol) in web.foliations.iter().enumerate() {
        let rep = special_singularities(fol, seed ^ ((i as u64) << 8))?;
        partial |= !rep.inconclusive.is_empty();
        for (rec, dual) in rep.special.iter().zip(rep.special_duals.iter()) {
            let kind = if matches!(
                rec.class,
                Classification::Done {
                    radial_order: Some(_),
                    ..
                }
            ) {
                ComponentKind::RadialDual
            } else {
                ComponentKind::MultipleDual
            };
            components.push(StructuralComponent {
                kind,
                line: Some(dual.clone()),
                cloud: vec![],
                provenance: format!("foliation {i} singularity {:?}", rec.location),
            });
        }
        specials_per_fol.push(rep);
    }

    // Singularities on member lines.
    for (j, line) in web.lines.iter().enumerate() {
        for (i, fol) in web.foliations.iter().enumerate() {
            let all = crate::foliation::sing::singular_points(fol, seed ^ 0x11 ^ ((i as u64) << 4))?;
            for rec in &all {
                let on_line = match &rec.location {
                    ProjPoint::Exact(t) => line.contains(&[t[0].clone(), t[1].clone(), t[2].clone()]),
                    ProjPoint::Float(t) => {
                        let c = line.coeffs();
                        let v = c[0].to_c64() * t[0] + c[1].to_c64() * t[1] + c[2].to_c64() * t[2];
                        v.norm() < 1e-8
                    }
                };
                if on_line {
                    components.push(StructuralComponent {
                        kind: ComponentKind::SingOnLineDual,
                        line: Some(dual_line_of_point(&rec.location)),
                        cloud: vec![],
                        provenance: format!("foliation {i} singularity on line {j}"),
                    });
                }
            }
            // Non-invariant member line: its Gauss image is a component.
            if !is_invariant_line(fol, line) {
                let img = gauss_image_of_line(fol, line, 24, seed ^ 0x33 ^ (j as u64));
                components.push(match img {
                    GaussImage::Line(l) => StructuralComponent {
                        kind: ComponentKind::GaussImageLine,
                        line: Some(l),
                        cloud: vec![],
                        provenance: format!("Gauss image of member line {j} under foliation {i}"),
                    },
                    GaussImage::Cloud(c) => StructuralComponent {
                        kind: ComponentKind::GaussImageCloud,
                        line: None,
                        cloud: c,
                        provenance: format!("Gauss image of member line {j} under foliation {i}"),
                    },
                });
            }
        }
    }

    // Intersections of member-line pairs.
    for j in 0..web.lines.len() {
        for k in j + 1..web.lines.len() {
            let a = web.lines[j].coeffs();
            let b = web.lines[k].coeffs();
            let cross = [
                &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
                &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
                &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
            ];
            if cross.iter().all(|c| c.is_zero()) {
                continue;
            }
            let pt = ProjPoint::exact(cross[0].clone(), cross[1].clone(), cross[2].clone());
            components.push(StructuralComponent {
                kind: ComponentKind::LinePairDual,
                line: Some(dual_line_of_point(&pt)),
                cloud: vec![],
                provenance: format!("intersection of member lines {j} and {k}"),
            });
        }
    }

    // Common singular points of foliation pairs: the two dual factors
    // share a root along the dual line of such a point.
    for i in 0..web.foliations.len() {
        for j in i + 1..web.foliations.len() {
            let sing_i =
                crate::foliation::sing::singular_points(&web.foliations[i], seed ^ 0xaa ^ (i as u64))?;
            let sing_j =
                crate::foliation::sing::singular_points(&web.foliations[j], seed ^ 0xaa ^ (j as u64))?;
            for ri in &sing_i {
                for rj in &sing_j {
                    if ri.location.approx_eq(&rj.location, 1e-9) {
                        components.push(StructuralComponent {
                            kind: ComponentKind::SharedSingDual,
                            line: Some(dual_line_of_point(&ri.location)),
                            cloud: vec![],
                            provenance: format!(
                                "shared singularity of foliations {i} and {j} at {:?}",
                                ri.location
                            ),
                        });
                    }
                }
            }
        }
    }

    // Tangency components of foliation pairs.
    for i in 0..web.foliations.len() {
        for j in i + 1..web.foliations.len() {
            let t = web.foliations[i].tangency_divisor(&web.foliations[j])?;
            let scan = crate::foliation::lines::linear_factors(&t, seed ^ 0x77);
            for (line, _) in &scan.exact {
                let inv_both = is_invariant_line(&web.foliations[i], line)
                    && is_invariant_line(&web.foliations[j], line);
                if inv_both {
                    continue; // Gauss image of an invariant line is a point
                }
                for fol_idx in [i, j] {
                    let img = gauss_image_of_line(
                        &web.foliations[fol_idx],
                        line,
                        24,
                        seed ^ 0x55 ^ ((fol_idx as u64) << 3),
                    );
                    components.push(match img {
                        GaussImage::Line(l) => StructuralComponent {
                            kind: ComponentKind::GaussImageLine,
                            line: Some(l),
                            cloud: vec![],
                            provenance: format!(
                                "Gauss image under foliation {fol_idx} of tangency line of ({i},{j})"
                            ),
                        },
                        GaussImage::Cloud(c) => StructuralComponent {
                            kind: ComponentKind::GaussImageCloud,
                            line: None,
                            cloud: c,
                            provenance: format!(
                                "Gauss image under foliation {fol_idx} of tangency component of ({i},{j})"
                            ),
                        },
                    });
                }
            }
            if scan.residual.degree() > 0 {
                // Non-line tangency component: sample its Gauss image.
                let cloud = sample_curve_gauss_image(
                    &web.foliations[i],
                    &scan.residual,
                    24,
                    seed ^ 0x99,
                );
                components.push(StructuralComponent {
                    kind: ComponentKind::GaussImageCloud,
                    line: None,
                    cloud,
                    provenance: format!("Gauss image of non-line tangency of ({i},{j})"),
                });
                partial = true;
            }
        }
    }

    dedupe_components(&mut components);
    Ok(DiscriminantReport {
        components,
        resultant_poly: None,
        agreement: None,
        mismatch_witnesses: vec![],
        partial,
    })
}

/// Sample points on {curve = 0} (slices by random lines) and push them
/// through the Gauss map into the (p, q) chart.
fn sample_curve_gauss_image(
    fol: &Foliation,
    curve: &MPoly,
    samples: usize,
    seed: u64,
) -> Vec<(Complex64, Complex64)> {
    let hom = hom_ring();
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::new();
    let triple: Vec<CPoly> = fol.homogeneous_triple().iter().map(CPoly::from_mpoly).collect();
    let mut guard = 0;
    while out.len() < samples && guard < samples * 10 {
        guard += 1;
        // slice y = m x + c, z = 1
        let m = rng.next_range_i64(-9, 9);
        let c = rng.next_range_i64(-9, 9);
        let aff = hom.clone();
        let x = MPoly::var(&aff, "x");
        let line_y = x.scale(&GaussRat::from_int(m)).add(&MPoly::int(&aff, c));
        let restricted = curve
            .with_vars(&aff)
            .substitute_name("y", &line_y)
            .substitute_name("z", &MPoly::one(&aff));
        let coeffs = CPoly::from_mpoly(&restricted).univariate_at(0, &[Complex64::zero(); 3]);
        let roots = all_roots(&coeffs, rng.next_u64());
        for r in roots.roots.iter().take(2) {
            let pt = [
                *r,
                Complex64::new(m as f64, 0.0) * r + Complex64::new(c as f64, 0.0),
                Complex64::new(1.0, 0.0),
            ];
            let vals: Vec<Complex64> = triple.iter().map(|f| f.eval(&pt).value).collect();
            if vals[1].norm() < 1e-9 * (vals[0].norm() + vals[2].norm()).max(1e-300) {
                continue;
            }
            out.push((-vals[0] / vals[1], -vals[2] / vals[1]));
        }
    }
    out
}

fn dedupe_components(components: &mut Vec<StructuralComponent>) {
    let mut seen_exact: Vec<MPoly> = Vec::new();
    let mut seen_float: Vec<[Complex64; 3]> = Vec::new();
    let mut seen_infinity = false;
    let mut kept = Vec::new();
    for comp in components.drain(..) {
        match &comp.line {
            Some(DualLine::Affine(p)) => {
                if seen_exact.iter().any(|q| q == p) {
                    continue;
                }
                seen_exact.push(p.clone());
            }
            Some(DualLine::FloatAffine {
                p_coeff,
                q_coeff,
                constant,
            }) => {
                let norm = p_coeff.norm().max(q_coeff.norm()).max(constant.norm());
                let key = [p_coeff / norm, q_coeff / norm, constant / norm];
                if seen_float.iter().any(|s| {
                    s.iter()
                        .zip(key.iter())
                        .map(|(a, b)| (a - b).norm().min((a + b).norm()))
                        .fold(0.0, f64::max)
                        < 1e-7
                }) {
                    continue;
                }
                seen_float.push(key);
            }
            Some(DualLine::ChartInfinity) => {
                if seen_infinity {
                    continue;
                }
                seen_infinity = true;
            }
            None => {}
        }
        kept.push(comp);
    }
    kept.sort_by_key(|c| {
        (
            format!("{:?}", c.kind),
            c.line
                .as_ref()
                .map(|l| format!("{l:?}"))
                .unwrap_or_default(),
            c.provenance.clone(),
        )
    });
    *components = kept;
}

/// Cross-check: every structural line divides the resultant discriminant
/// (exact or residual-certified), and the resultant's zero set is covered
/// by structural components on sampled points. Coverage points are sampled
/// on the squarefree parts of the per-factor discriminants and pairwise
/// resultants, where the roots are simple and the root finder is accurate;
/// the union of those zero sets is the discriminant's zero set.
pub fn cross_check_discriminant(
    report: &mut DiscriminantReport,
    dual: &DualWeb,
    seed: u64,
    coverage_samples: usize,
) -> Result<bool, WebError> {
    let disc = discriminant_resultant(dual)?;
    let ring = dual_web_ring();
    let xi = ring.index_of("x").unwrap();
    let pi = ring.index_of("p").unwrap();
    let qi = ring.index_of("q").unwrap();
    let mut ok = true;
    let mut witnesses = Vec::new();

    // Squarefree sampling pieces from the product structure.
    let mut pieces: Vec<MPoly> = Vec::new();
    for (_, f) in &dual.factors {
        if f.degree_in(xi) >= 2 {
            let d = discriminant_in(f, xi)?;
            if !d.is_constant() {
                pieces.push(crate::polycore::squarefree_part(&d));
            }
        }
    }
    for i in 0..dual.factors.len() {
        for j in i + 1..dual.factors.len() {
            let (fi, fj) = (&dual.factors[i].1, &dual.factors[j].1);
            if fi.degree_in(xi) == 0 || fj.degree_in(xi) == 0 {
                continue;
            }
            let r = resultant(fi, fj, xi)?;
            if !r.is_constant() {
                pieces.push(crate::polycore::squarefree_part(&r));
            }
        }
    }

    let disc_cp = CPoly::from_mpoly(&disc);
    let scale = disc.max_coeff_abs().max(1.0);

    // Divisibility of structural lines into the resultant polynomial.
    for comp in &report.components {
        match &comp.line {
            Some(DualLine::Affine(l)) => {
                let l3 = l.with_vars(&ring);
                if !divides(&l3, &disc) {
                    ok = false;
                }
            }
            Some(DualLine::FloatAffine {
                p_coeff,
                q_coeff,
                constant,
            }) => {
                // residual-certified: sample points on the line
                let mut rng = SplitMix64::new(seed ^ 0xc0de);
                for _ in 0..8 {
                    let (p, q) = if q_coeff.norm() > p_coeff.norm() {
                        let p = Complex64::new(rng.next_symmetric(2.0), rng.next_symmetric(2.0));
                        ((p), -(p_coeff * p + constant) / q_coeff)
                    } else {
                        let q = Complex64::new(rng.next_symmetric(2.0), rng.next_symmetric(2.0));
                        (-(q_coeff * q + constant) / p_coeff, q)
                    };
                    let val = disc_cp.eval(&[p, q, Complex64::zero()]).value;
                    let psc = (1.0 + p.norm().max(q.norm())).powi(disc.degree() as i32);
                    if val.norm() / (scale * psc) > 1e-10 {
                        ok = false;
                        witnesses.push((p, q));
                    }
                }
            }
            _ => {}
        }
    }

    // Coverage: points on the zero set must lie on some structural
    // component. Alternate between solving in q at fixed p and in p at
    // fixed q so components parallel to either axis are sampled.
    let mut rng = SplitMix64::new(seed ^ 0xc0ff);
    let mut covered_checked = 0;
    let mut guard = 0;
    let mut solve_in_q = false;
    while covered_checked < coverage_samples && guard < coverage_samples * 10 && !pieces.is_empty()
    {
        guard += 1;
        solve_in_q = !solve_in_q;
        let piece = &pieces[guard % pieces.len()];
        let piece_cp = CPoly::from_mpoly(piece);
        let fixed = Complex64::new(rng.next_symmetric(2.0), rng.next_symmetric(2.0));
        let coeffs = if solve_in_q {
            piece_cp.univariate_at(qi, &[fixed, Complex64::zero(), Complex64::zero()])
        } else {
            piece_cp.univariate_at(pi, &[Complex64::zero(), fixed, Complex64::zero()])
        };
        if coeffs.len() <= 1 {
            continue;
        }
        let roots = all_roots(&coeffs, rng.next_u64());
        for r in &roots.roots {
            if r.norm() > 1e5 {
                continue;
            }
            let (p0, q0) = if solve_in_q { (fixed, *r) } else { (*r, fixed) };
            covered_checked += 1;
            if !point_covered(&report.components, p0, q0) {
                ok = false;
                witnesses.push((p0, q0));
            }
        }
    }

    report.resultant_poly = Some(disc);
    report.agreement = Some(ok);
    report.mismatch_witnesses = witnesses;
    Ok(ok)
}

fn point_covered(components: &[StructuralComponent], p: Complex64, q: Complex64) -> bool {
    const LINE_TOL: f64 = 1e-6;
    const CLOUD_TOL: f64 = 0.08;
    for comp in components {
        match &comp.line {
            Some(DualLine::Affine(l)) => {
                let cp = CPoly::from_mpoly(&l.with_vars(&dual_web_ring()));
                let v = cp.eval(&[p, q, Complex64::zero()]).value;
                let g = l.max_coeff_abs().max(1e-12) * (1.0 + p.norm() + q.norm());
                if v.norm() / g < LINE_TOL {
                    return true;
                }
            }
            Some(DualLine::FloatAffine {
                p_coeff,
                q_coeff,
                constant,
            }) => {
                let v = p_coeff * p + q_coeff * q + constant;
                let g = p_coeff.norm().max(q_coeff.norm()).max(constant.norm())
                    * (1.0 + p.norm() + q.norm());
                if v.norm() / g < LINE_TOL {
                    return true;
                }
            }
            Some(DualLine::ChartInfinity) => {}
            None => {}
        }
        if !comp.cloud.is_empty() {
            let d = comp
                .cloud
                .iter()
                .map(|(cp_, cq)| (cp_ - p).norm().hypot((cq - q).norm()))
                .fold(f64::INFINITY, f64::min);
            if d < CLOUD_TOL {
                return true;
            }
        }
    }
    false
}

/// Primal-route tangency abscissas of the web with the line {y = p0 x + q0}:
/// an independent float path (binomial expansion per member) used as the
/// biduality oracle against the x-roots of the dual polynomial.
pub fn primal_tangency_abscissas(
    web: &WebSpec,
    p0: Complex64,
    q0: Complex64,
    seed: u64,
) -> Vec<Complex64> {
    let mut out = Vec::new();
    for line in &web.lines {
        let c = line.coeffs();
        // alpha x + beta (p0 x + q0) + gamma = 0
        let (alpha, beta, gamma) = (c[0].to_c64(), c[1].to_c64(), c[2].to_c64());
        let den = alpha + beta * p0;
        if den.norm() > 1e-12 {
            out.push(-(beta * q0 + gamma) / den);
        }
    }
    for fol in &web.foliations {
        let (a, b) = fol.affine_pair();
        let ca = restrict_to_line_coeffs(a, p0, q0);
        let cb = restrict_to_line_coeffs(b, p0, q0);
        // h(x) = a(x, p0 x + q0) + p0 * b(x, p0 x + q0)
        let n = ca.len().max(cb.len());
        let mut h = vec![Complex64::zero(); n];
        for (k, v) in ca.iter().enumerate() {
            h[k] += v;
        }
        for (k, v) in cb.iter().enumerate() {
            h[k] += p0 * v;
        }
        let roots = all_roots(&h, seed);
        out.extend(roots.roots);
    }
    out
}

/// Coefficients in x of f(x, p0 x + q0), by direct binomial expansion.
fn restrict_to_line_coeffs(f: &MPoly, p0: Complex64, q0: Complex64) -> Vec<Complex64> {
    let aff = aff_ring();
    let f = f.with_vars(&aff);
    let deg = f.degree() as usize;
    let mut out = vec![Complex64::zero(); deg + 1];
    // binomial table
    let mut binom = vec![vec![0.0f64; deg + 2]; deg + 2];
    for n in 0..deg + 2 {
        binom[n][0] = 1.0;
        for k in 1..=n {
            binom[n][k] = binom[n - 1][k - 1] + if k <= n - 1 { binom[n - 1][k] } else { 0.0 };
        }
    }
    for (m, c) in f.terms() {
        let (i, j) = (m.exps()[0] as usize, m.exps()[1] as usize);
        let cc = c.to_c64();
        // (p0 x + q0)^j = sum_k C(j,k) p0^k q0^(j-k) x^k
        let mut p_pow = Complex64::new(1.0, 0.0);
        for k in 0..=j {
            let term = cc * binom[j][k] * p_pow * q0.powu((j - k) as u32);
            out[i + k] += term;
            p_pow *= p0;
        }
    }
    out
}
