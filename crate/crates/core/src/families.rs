//! Built-in generators: Fermat-type foliations, the homogeneous one-form
//! family, the two-foliation transversal-tangency 3-web, seeded random
//! foliations, and the checked web builders used by the verification suite.

use thiserror::Error;

use crate::foliation::lines::{convexity, factor_into_common_invariant_lines};
use crate::foliation::{
    is_invariant_line, Certification, ConvexVerdict, Foliation, FoliationError, LineInPlane,
};
use crate::polycore::{GaussRat, MPoly};
use crate::rng::SplitMix64;
use crate::webleg::{WebError, WebSpec};

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("degree must be at least 2")]
    DegreeTooSmall,
    #[error("parameter lambda must be nonzero")]
    ZeroLambda,
    #[error("transversal factor {0} is invariant for a member; the web degenerates")]
    TransversalInvariant(String),
    #[error(transparent)]
    Foliation(#[from] FoliationError),
    #[error(transparent)]
    Web(#[from] WebError),
}

/// Foliation of the vector field `(x^d - x) d/dx + (y^d - y) d/dy`.
pub fn fermat(d: u32) -> Result<Foliation, FamilyError> {
    if d < 2 {
        return Err(FamilyError::DegreeTooSmall);
    }
    let aff = crate::foliation::aff_ring();
    let x = MPoly::var(&aff, "x");
    let y = MPoly::var(&aff, "y");
    let va = x.pow(d).sub(&x);
    let vb = y.pow(d).sub(&y);
    Ok(Foliation::from_vector_field(&va, &vb)?)
}

/// Foliation of the 1-form `y^d dx - x^d dy`.
pub fn homogeneous(d: u32) -> Result<Foliation, FamilyError> {
    if d < 2 {
        return Err(FamilyError::DegreeTooSmall);
    }
    let aff = crate::foliation::aff_ring();
    let x = MPoly::var(&aff, "x");
    let y = MPoly::var(&aff, "y");
    Ok(Foliation::new(&y.pow(d), &x.pow(d).neg())?)
}

/// The 3-web of `lambda*y dx + x dy` and `y^2 dx + x^2 dy`; the pairwise
/// tangency carries the transversal line `lambda*x - y`.
pub fn transversal_pair(lambda: &GaussRat) -> Result<WebSpec, FamilyError> {
    if lambda.is_zero() {
        return Err(FamilyError::ZeroLambda);
    }
    let aff = crate::foliation::aff_ring();
    let x = MPoly::var(&aff, "x");
    let y = MPoly::var(&aff, "y");
    let f1 = Foliation::new(&y.scale(lambda), &x)?;
    let f2 = Foliation::new(&y.pow(2), &x.pow(2))?;
    let t = LineInPlane::new(lambda.clone(), GaussRat::from_int(-1), GaussRat::zero())
        .expect("nonzero");
    for fol in [&f1, &f2] {
        if is_invariant_line(fol, &t) {
            return Err(FamilyError::TransversalInvariant(t.to_string()));
        }
    }
    Ok(WebSpec::new(vec![], vec![f1, f2])?)
}

/// Seeded random foliation of degree d with small Gaussian-rational
/// coefficients; redrawn until saturated with the requested degree.
pub fn random_foliation(d: u32, seed: u64) -> Result<Foliation, FamilyError> {
    let aff = crate::foliation::aff_ring();
    let mut rng = SplitMix64::new(seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(d as u64));
    for _ in 0..64 {
        let draw = |deg: u32, rng: &mut SplitMix64| -> MPoly {
            let mut terms = Vec::new();
            for i in 0..=deg {
                for j in 0..=(deg - i) {
                    let num = rng.next_range_i64(-4, 4);
                    let den = rng.next_range_i64(1, 3);
                    let im = if rng.next_range_i64(0, 7) == 0 {
                        rng.next_range_i64(-1, 1)
                    } else {
                        0
                    };
                    let c = GaussRat::new(
                        crate::polycore::rat(num, den),
                        crate::polycore::rat(im, 1),
                    );
                    terms.push((vec![i, j], c));
                }
            }
            MPoly::from_terms(&aff, terms)
        };
        let a = draw(d, &mut rng);
        let b = draw(d, &mut rng);
        if a.is_zero() && b.is_zero() {
            continue;
        }
        if let Ok(f) = Foliation::new(&a, &b) {
            if f.degree() == d {
                return Ok(f);
            }
        }
    }
    Err(FamilyError::Foliation(FoliationError::Other(
        "failed to draw a saturated foliation of the requested degree".into(),
    )))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ScenarioKind {
    /// Members must be reduced convex foliations; pairwise tangencies must
    /// be formed by lines invariant for both members.
    ConvexReduced,
    /// Members must be convex and homogeneous in the chart; pairwise
    /// tangencies must be the infinity line plus common invariant lines.
    ConvexHomogeneous,
}

#[derive(Clone, Debug)]
pub struct HypothesisCheck {
    pub name: String,
    pub pass: bool,
    pub certification: Certification,
    pub details: String,
}

#[derive(Clone, Debug)]
pub struct HypothesisReport {
    pub kind: ScenarioKind,
    pub checks: Vec<HypothesisCheck>,
}

impl HypothesisReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Build the web and verify every scenario hypothesis; failures are
/// reported and the web is still returned.
pub fn checked_web(
    kind: ScenarioKind,
    lines: Vec<LineInPlane>,
    fols: Vec<Foliation>,
    seed: u64,
) -> Result<(WebSpec, HypothesisReport), FamilyError> {
    let mut checks = Vec::new();

    for (i, f) in fols.iter().enumerate() {
        let conv = convexity(f, seed ^ (i as u64))?;
        let (pass, cert, what) = match (&kind, &conv.verdict) {
            (ScenarioKind::ConvexReduced, ConvexVerdict::Convex(c)) => {
                (conv.reduced, *c, "convex reduced")
            }
            (ScenarioKind::ConvexHomogeneous, ConvexVerdict::Convex(c)) => {
                (f.is_homogeneous_field(), *c, "convex homogeneous")
            }
            (_, ConvexVerdict::NotConvex(c)) => (false, *c, "convex"),
            (_, ConvexVerdict::Inconclusive) => (false, Certification::Floating, "convex"),
        };
        checks.push(HypothesisCheck {
            name: format!("member {i} {what}"),
            pass,
            certification: cert,
            details: format!("degree {}, verdict {:?}", f.degree(), conv.verdict),
        });
    }

    for i in 0..fols.len() {
        for j in i + 1..fols.len() {
            let t = fols[i].tangency_divisor(&fols[j])?;
            let t = match kind {
                ScenarioKind::ConvexReduced => t,
                ScenarioKind::ConvexHomogeneous => {
                    let hom = crate::foliation::hom_ring();
                    let z = MPoly::var(&hom, "z");
                    let (rest, ze) = crate::polycore::divide_out_maximal(&t, &z);
                    checks.push(HypothesisCheck {
                        name: format!("tangency({i},{j}) contains the infinity line"),
                        pass: ze >= 1,
                        certification: Certification::Exact,
                        details: format!("z-multiplicity {ze}"),
                    });
                    rest
                }
            };
            let fact = factor_into_common_invariant_lines(
                &t,
                &[&fols[i], &fols[j]],
                seed ^ 0x7a ^ ((i * 31 + j) as u64),
            );
            let float_deg: u32 = fact.float_factors.iter().map(|(_, m)| m).sum();
            let covered = fact.residual.is_constant()
                || (float_deg > 0 && fact.residual.degree() == float_deg);
            let cert = if fact.residual.is_constant() && fact.float_factors.is_empty() {
                Certification::Exact
            } else {
                Certification::Floating
            };
            checks.push(HypothesisCheck {
                name: format!("tangency({i},{j}) formed by common invariant lines"),
                pass: covered,
                certification: cert,
                details: format!(
                    "exact factors {}, floating {}, residual degree {}",
                    fact.exact_factors.len(),
                    fact.float_factors.len(),
                    fact.residual.degree()
                ),
            });
        }
    }

    for (k, line) in lines.iter().enumerate() {
        let pass = fols.iter().all(|f| is_invariant_line(f, line));
        checks.push(HypothesisCheck {
            name: format!("line {k} ({line}) invariant for all members"),
            pass,
            certification: Certification::Exact,
            details: String::new(),
        });
    }

    let web = WebSpec::new(lines, fols)?;
    Ok((web, HypothesisReport { kind, checks }))
}

/// Squarefree-and-common-invariant test for a pairwise tangency divisor.
pub fn tangency_reduced_and_invariant(
    f: &Foliation,
    g: &Foliation,
    seed: u64,
) -> Result<bool, FamilyError> {
    let t = f.tangency_divisor(g)?;
    if !crate::polycore::is_squarefree(&t) {
        return Ok(false);
    }
    let fact = factor_into_common_invariant_lines(&t, &[f, g], seed);
    let float_deg: u32 = fact.float_factors.iter().map(|(_, m)| m).sum();
    Ok(fact.residual.is_constant() || (float_deg > 0 && fact.residual.degree() == float_deg))
}
