//! Foliations of the projective plane: construction from an affine 1-form,
//! inflection divisor, Gauss map, invariant lines, convexity, tangency
//! divisors, and singularity classification.
//!
//! Conventions. A foliation is given affinely by `omega = a(x,y) dx +
//! b(x,y) dy` with isolated zeros, or by a vector field `A d/dx + B d/dy`
//! with `omega = B dx - A dy`. The homogeneous presentation is a triple
//! `(A, B, C)` of degree d+1 forms with `x*A + y*B + z*C = 0`; the degree of
//! the foliation is d.

pub mod lines;
pub mod sing;

use thiserror::Error;

use crate::polycore::{exact_div, gcd, gcd_many, ElimError, GaussRat, MPoly, VarSet};

pub use lines::{
    is_invariant_line, CertifiedLine, Certification, ConvexVerdict, ConvexityReport,
    DivisorFactorization, FloatLine, LineInPlane, LinearFactorScan,
};
pub use sing::{Chart, Classification, ProjPoint, SingularityRecord, SpecialsReport};

#[derive(Debug, Error)]
pub enum FoliationError {
    #[error("zero 1-form does not define a foliation")]
    ZeroForm,
    #[error("degree-0 foliation (pencil of lines) has no inflection divisor")]
    DegenerateInflection,
    #[error("Gauss map undefined at a singular point")]
    GaussUndefined,
    #[error("tangency of a foliation with itself is identically zero")]
    IdenticalFoliations,
    #[error("Euler relation violated (internal invariant)")]
    EulerViolated,
    #[error("elimination failure: {0}")]
    Elim(#[from] ElimError),
    #[error("{0}")]
    Other(String),
}

/// Affine chart ring (x, y).
pub fn aff_ring() -> VarSet {
    VarSet::new(vec!["x", "y"])
}

/// Homogeneous ring (x, y, z).
pub fn hom_ring() -> VarSet {
    VarSet::new(vec!["x", "y", "z"])
}

/// Substitute all variables of `p` simultaneously by `targets` (one per
/// variable of `p`, all living in `ring`). Exact expansion.
pub fn compose(p: &MPoly, targets: &[MPoly], ring: &VarSet) -> MPoly {
    assert_eq!(targets.len(), p.vars().len());
    let mut acc = MPoly::zero(ring);
    for (m, c) in p.terms() {
        let mut t = MPoly::constant(ring, c.clone());
        for (target, &e) in targets.iter().zip(m.exps()) {
            if e > 0 {
                t = t.mul(&target.pow(e));
            }
        }
        acc = acc.add(&t);
    }
    acc
}

#[derive(Clone)]
pub struct Foliation {
    /// Saturated affine pair (a, b) in the ring (x, y).
    affine: (MPoly, MPoly),
    /// Homogeneous triple (A, B, C), all of degree d+1, Euler-exact.
    homog: [MPoly; 3],
    degree: u32,
}

impl std::fmt::Debug for Foliation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Foliation(d={}, a={}, b={})",
            self.degree, self.affine.0, self.affine.1
        )
    }
}

impl Foliation {
    /// Build from an affine 1-form `a dx + b dy`: saturate, homogenize via
    /// `Omega = z*a~ dx + z*b~ dy - (x*a~ + y*b~) dz`, strip the z-power
    /// content, and read the degree off the coefficient degree.
    pub fn new(a: &MPoly, b: &MPoly) -> Result<Foliation, FoliationError> {
        let aff = aff_ring();
        let a = a.with_vars(&aff);
        let b = b.with_vars(&aff);
        if a.is_zero() && b.is_zero() {
            return Err(FoliationError::ZeroForm);
        }
        let g = gcd(&a, &b);
        let (a, b) = if g.is_constant() {
            (a, b)
        } else {
            (
                exact_div(&a, &g).expect("gcd divides"),
                exact_div(&b, &g).expect("gcd divides"),
            )
        };
        let hom = hom_ring();
        let zi = hom.index_of("z").unwrap();
        let common = a.degree().max(b.degree());
        let ah = a.with_vars(&hom).homogenize(zi, common).expect("degree fits");
        let bh = b.with_vars(&hom).homogenize(zi, common).expect("degree fits");
        let x = MPoly::var(&hom, "x");
        let y = MPoly::var(&hom, "y");
        let z = MPoly::var(&hom, "z");
        let big_a = z.mul(&ah);
        let big_b = z.mul(&bh);
        let big_c = x.mul(&ah).add(&y.mul(&bh)).neg();
        Foliation::from_homogeneous([big_a, big_b, big_c])
    }

    /// Build from a vector field `A d/dx + B d/dy` (the `omega = B dx - A dy`
    /// convention).
    pub fn from_vector_field(va: &MPoly, vb: &MPoly) -> Result<Foliation, FoliationError> {
        Foliation::new(vb, &va.neg())
    }

    /// Build from a homogeneous triple satisfying the Euler relation;
    /// divides out any polynomial content.
    pub fn from_homogeneous(triple: [MPoly; 3]) -> Result<Foliation, FoliationError> {
        let hom = hom_ring();
        let [mut big_a, mut big_b, mut big_c] = triple;
        if big_a.is_zero() && big_b.is_zero() && big_c.is_zero() {
            return Err(FoliationError::ZeroForm);
        }
        let x = MPoly::var(&hom, "x");
        let y = MPoly::var(&hom, "y");
        let z = MPoly::var(&hom, "z");
        let euler = x
            .mul(&big_a)
            .add(&y.mul(&big_b))
            .add(&z.mul(&big_c));
        if !euler.is_zero() {
            return Err(FoliationError::EulerViolated);
        }
        let content = gcd_many(&[&big_a, &big_b, &big_c]);
        if !content.is_constant() {
            big_a = exact_div(&big_a, &content).expect("content divides");
            big_b = exact_div(&big_b, &content).expect("content divides");
            big_c = exact_div(&big_c, &content).expect("content divides");
        }
        let coeff_deg = big_a
            .degree()
            .max(big_b.degree())
            .max(big_c.degree());
        if coeff_deg == 0 {
            return Err(FoliationError::ZeroForm);
        }
        let degree = coeff_deg - 1;
        // Affine pair: dehomogenize (A, B) at z = 1 and saturate.
        let zi = hom.index_of("z").unwrap();
        let aff = aff_ring();
        let a_aff = big_a.dehomogenize(zi).with_vars(&aff);
        let b_aff = big_b.dehomogenize(zi).with_vars(&aff);
        let g = gcd(&a_aff, &b_aff);
        let affine = if g.is_constant() {
            (a_aff, b_aff)
        } else {
            (
                exact_div(&a_aff, &g).expect("gcd divides"),
                exact_div(&b_aff, &g).expect("gcd divides"),
            )
        };
        Ok(Foliation {
            affine,
            homog: [big_a, big_b, big_c],
            degree,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn affine_pair(&self) -> (&MPoly, &MPoly) {
        (&self.affine.0, &self.affine.1)
    }

    pub fn homogeneous_triple(&self) -> &[MPoly; 3] {
        &self.homog
    }

    /// Two foliations are equal when their saturated triples are
    /// proportional.
    pub fn same_foliation(&self, other: &Foliation) -> bool {
        if self.degree != other.degree {
            return false;
        }
        let [a1, b1, _] = &self.homog;
        let [a2, b2, c2] = &other.homog;
        let [_, _, c1] = &self.homog;
        a1.mul(b2) == a2.mul(b1) && a1.mul(c2) == a2.mul(c1) && b1.mul(c2) == b2.mul(c1)
    }

    /// True when the defining affine vector field is homogeneous (one
    /// chart-centered homogeneity witness; used by the homogeneous-scenario
    /// hypothesis checks).
    pub fn is_homogeneous_field(&self) -> bool {
        let (a, b) = (&self.affine.0, &self.affine.1);
        a.is_homogeneous()
            && b.is_homogeneous()
            && a.degree() == b.degree()
            && a.degree() == self.degree
    }

    /// Canonical homogeneous vector-field lift `X = P dx + Q dy + R dz` of
    /// degree d with `A = yR - zQ`, `B = zP - xR`, `C = xQ - yP`.
    /// Any two lifts differ by a multiple of the radial field, which leaves
    /// the inflection determinant unchanged.
    pub fn vector_field_lift(&self) -> [MPoly; 3] {
        let hom = hom_ring();
        let zi = hom.index_of("z").unwrap();
        let [big_a, big_b, _] = &self.homog;
        // R(x, y) = -B(x, y, 0) / x; Euler at z=0 guarantees divisibility.
        let b0 = {
            let mut t = big_b.clone();
            // set z = 0: drop all terms with positive z exponent
            let coeffs = t.coeffs_in(zi);
            t = coeffs.into_iter().next().unwrap_or_else(|| MPoly::zero(&hom));
            t
        };
        let r = if b0.is_zero() {
            MPoly::zero(&hom)
        } else {
            let x = MPoly::var(&hom, "x");
            exact_div(&b0, &x).expect("Euler at z=0 forces x | B(x,y,0)").neg()
        };
        let x = MPoly::var(&hom, "x");
        let y = MPoly::var(&hom, "y");
        let z = MPoly::var(&hom, "z");
        let p = exact_div(&big_b.add(&x.mul(&r)), &z).expect("z divides B + xR");
        let q = exact_div(&y.mul(&r).sub(big_a), &z).expect("z divides yR - A");
        [p, q, r]
    }

    /// Apply the lift as a derivation: `X(f) = P f_x + Q f_y + R f_z`.
    pub fn apply_field(&self, f: &MPoly) -> MPoly {
        let [p, q, r] = self.vector_field_lift();
        apply_derivation(&[p, q, r], f)
    }

    /// Inflection divisor: determinant of the rows (coordinates, X of the
    /// coordinates, X^2 of the coordinates), unit-normalized. Exact degree
    /// is 3d for any saturated foliation of degree d >= 1.
    pub fn inflection_divisor(&self) -> Result<MPoly, FoliationError> {
        if self.degree == 0 {
            return Err(FoliationError::DegenerateInflection);
        }
        let hom = hom_ring();
        let lift = self.vector_field_lift();
        let [p, q, r] = &lift;
        let xp = apply_derivation(&lift, p);
        let xq = apply_derivation(&lift, q);
        let xr = apply_derivation(&lift, r);
        let x = MPoly::var(&hom, "x");
        let y = MPoly::var(&hom, "y");
        let z = MPoly::var(&hom, "z");
        let det = x
            .mul(&q.mul(&xr).sub(&r.mul(&xq)))
            .sub(&y.mul(&p.mul(&xr).sub(&r.mul(&xp))))
            .add(&z.mul(&p.mul(&xq).sub(&q.mul(&xp))));
        if det.is_zero() {
            return Err(FoliationError::Other(
                "inflection determinant vanished identically".into(),
            ));
        }
        Ok(det.unit_normal())
    }

    /// Gauss map at an exact projective point: `[A(p) : B(p) : C(p)]`.
    pub fn gauss_map(&self, point: &[GaussRat; 3]) -> Result<[GaussRat; 3], FoliationError> {
        let vals: Vec<GaussRat> = self
            .homog
            .iter()
            .map(|f| f.eval_exact(point.as_slice()))
            .collect();
        if vals.iter().all(|v| v.is_zero()) {
            return Err(FoliationError::GaussUndefined);
        }
        Ok([vals[0].clone(), vals[1].clone(), vals[2].clone()])
    }

    /// Homogeneous tangency divisor with another foliation:
    /// `(A_F B_G - A_G B_F) / z`, of degree d_F + d_G + 1. The affine part
    /// is `a_F b_G - a_G b_F`; the z-power factor carries the
    /// line-at-infinity multiplicity.
    pub fn tangency_divisor(&self, other: &Foliation) -> Result<MPoly, FoliationError> {
        let hom = hom_ring();
        let z = MPoly::var(&hom, "z");
        let num = self.homog[0]
            .mul(&other.homog[1])
            .sub(&other.homog[0].mul(&self.homog[1]));
        if num.is_zero() {
            return Err(FoliationError::IdenticalFoliations);
        }
        let t = exact_div(&num, &z)?;
        Ok(t.unit_normal())
    }

    /// Pull back along the linear change `x -> M x` (projective
    /// transformation of the plane).
    pub fn transform(&self, m: &[[GaussRat; 3]; 3]) -> Result<Foliation, FoliationError> {
        let hom = hom_ring();
        let coords = ["x", "y", "z"];
        // Linear forms L_j = sum_k M[j][k] x_k.
        let linear: Vec<MPoly> = (0..3)
            .map(|j| {
                let mut acc = MPoly::zero(&hom);
                for (k, name) in coords.iter().enumerate() {
                    acc = acc.add(&MPoly::var(&hom, name).scale(&m[j][k]));
                }
                acc
            })
            .collect();
        // (Phi^* omega)_i = sum_j M[j][i] * A_j(M x)
        let composed: Vec<MPoly> = self
            .homog
            .iter()
            .map(|f| compose(f, &linear, &hom))
            .collect();
        let mut new_triple = [
            MPoly::zero(&hom),
            MPoly::zero(&hom),
            MPoly::zero(&hom),
        ];
        for (i, slot) in new_triple.iter_mut().enumerate() {
            let mut acc = MPoly::zero(&hom);
            for (j, comp) in composed.iter().enumerate() {
                acc = acc.add(&comp.scale(&m[j][i]));
            }
            *slot = acc;
        }
        Foliation::from_homogeneous(new_triple)
    }
}

pub fn apply_derivation(field: &[MPoly; 3], f: &MPoly) -> MPoly {
    let mut acc = MPoly::zero(f.vars());
    for (i, comp) in field.iter().enumerate() {
        acc = acc.add(&comp.mul(&f.derivative(i)));
    }
    acc
}

/// Determinant identity check used by tests: pairwise tangency between
/// distinct members never vanishes identically once saturated.
pub fn pairwise_distinct(fols: &[&Foliation]) -> bool {
    for i in 0..fols.len() {
        for j in i + 1..fols.len() {
            if fols[i].same_foliation(fols[j]) {
                return false;
            }
        }
    }
    true
}

/// An invertible 3x3 exact matrix drawn from small integers; used for
/// projective-invariance property tests and chart rotations.
pub fn random_invertible_matrix(rng: &mut crate::rng::SplitMix64) -> [[GaussRat; 3]; 3] {
    loop {
        let m: [[GaussRat; 3]; 3] = std::array::from_fn(|_| {
            std::array::from_fn(|_| GaussRat::from_int(rng.next_range_i64(-3, 3)))
        });
        if !det3(&m).is_zero() {
            return m;
        }
    }
}

pub fn det3(m: &[[GaussRat; 3]; 3]) -> GaussRat {
    let d = |a: &GaussRat, b: &GaussRat, c: &GaussRat, e: &GaussRat| &(a * b) - &(c * e);
    let m00 = d(&m[1][1], &m[2][2], &m[1][2], &m[2][1]);
    let m01 = d(&m[1][0], &m[2][2], &m[1][2], &m[2][0]);
    let m02 = d(&m[1][0], &m[2][1], &m[1][1], &m[2][0]);
    &(&(&m[0][0] * &m00) - &(&m[0][1] * &m01)) + &(&m[0][2] * &m02)
}
