//! Fixtures for the foliation layer: construction and degrees, the
//! inflection divisor, Gauss map, invariant lines, convexity, tangency
//! divisors, and singularity classification. Expected polynomials are
//! either direct constructions or hand-derived and frozen here.

use num_traits::Zero as _;

use webflat_core::families::{fermat, homogeneous, random_foliation, transversal_pair};
use webflat_core::foliation::lines::{convexity, invariant_lines, is_invariant_line};
use webflat_core::foliation::sing::{
    classify_in_chart, singular_points, special_singularities, Chart, Classification, DualLine,
    PointCoord, ProjPoint,
};
use webflat_core::foliation::{
    aff_ring, apply_derivation, hom_ring, random_invertible_matrix, ConvexVerdict, Foliation,
    LineInPlane,
};
use webflat_core::polycore::{parse_poly, GaussRat, MPoly};
use webflat_core::rng::SplitMix64;

fn hom(p: &str) -> MPoly {
    parse_poly(p, &hom_ring()).unwrap()
}

fn aff(p: &str) -> MPoly {
    parse_poly(p, &aff_ring()).unwrap()
}

#[test]
fn construction_recipe_fixtures() {
    // Fermat-type degree 2 from omega = (y^2-y) dx - (x^2-x) dy.
    let f = fermat(2).unwrap();
    assert_eq!(f.degree(), 2);
    let [a, b, c] = f.homogeneous_triple();
    assert!(a.eq_up_to_scalar(&hom("z*(y^2 - y*z)")), "A = {a}");
    assert!(b.eq_up_to_scalar(&hom("-z*(x^2 - x*z)")), "B = {b}");
    assert!(c.eq_up_to_scalar(&hom("-x*y^2 + x^2*y")), "C = {c}");

    // Euler relation, exactly.
    let euler = hom("x")
        .mul(a)
        .add(&hom("y").mul(b))
        .add(&hom("z").mul(c));
    assert!(euler.is_zero());

    // Radial pencil: triple saturates to [-y, x, 0] and the degree is 0.
    let radial = Foliation::new(&aff("-y"), &aff("x")).unwrap();
    assert_eq!(radial.degree(), 0);
    let [a, b, c] = radial.homogeneous_triple();
    assert!(a.eq_up_to_scalar(&hom("-y")));
    assert!(b.eq_up_to_scalar(&hom("x")));
    assert!(c.is_zero());

    // Homogeneous family: omega_d = y^d dx - x^d dy has degree d.
    for d in 2..=5 {
        assert_eq!(homogeneous(d).unwrap().degree(), d);
        assert_eq!(fermat(d).unwrap().degree(), d);
    }

    assert!(Foliation::new(&aff("0"), &aff("0")).is_err());
}

#[test]
fn inflection_divisor_fermat2_fixture() {
    // Hand expansion of the 3x3 determinant for the canonical lift gives
    // 2*xyz(x-z)(y-z)(x-y); cross-checked against the product of the six
    // invariant lines.
    let f = fermat(2).unwrap();
    let infl = f.inflection_divisor().unwrap();
    let want = hom("x*y*z*(x-z)*(y-z)*(x-y)");
    assert!(infl.eq_up_to_scalar(&want), "I = {infl}");
    assert_eq!(infl.degree(), 6);
}

#[test]
fn inflection_degree_law() {
    for d in 2..=5 {
        let f = fermat(d).unwrap();
        assert_eq!(f.inflection_divisor().unwrap().degree(), 3 * d, "fermat({d})");
        let h = homogeneous(d).unwrap();
        assert_eq!(h.inflection_divisor().unwrap().degree(), 3 * d, "homog({d})");
    }
}

#[test]
fn inflection_determinant_is_lift_invariant() {
    // Adding g * (radial field) to the lift must not change the
    // determinant: the modified rows are row combinations.
    let f = fermat(2).unwrap();
    let homr = hom_ring();
    let lift = f.vector_field_lift();
    let g = hom("x - 2*y + 3*z"); // any degree d-1 form
    let radial = [
        MPoly::var(&homr, "x"),
        MPoly::var(&homr, "y"),
        MPoly::var(&homr, "z"),
    ];
    let shifted: [MPoly; 3] = std::array::from_fn(|i| lift[i].add(&g.mul(&radial[i])));
    let det_of = |field: &[MPoly; 3]| {
        let xp = apply_derivation(field, &field[0]);
        let xq = apply_derivation(field, &field[1]);
        let xr = apply_derivation(field, &field[2]);
        let x = MPoly::var(&homr, "x");
        let y = MPoly::var(&homr, "y");
        let z = MPoly::var(&homr, "z");
        x.mul(&field[1].mul(&xr).sub(&field[2].mul(&xq)))
            .sub(&y.mul(&field[0].mul(&xr).sub(&field[2].mul(&xp))))
            .add(&z.mul(&field[0].mul(&xq).sub(&field[1].mul(&xp))))
    };
    assert_eq!(det_of(&lift), det_of(&shifted));
}

#[test]
fn inflection_projective_invariance() {
    // I(T.F) equals the pullback of I(F) up to a unit, for random exact T.
    let f = fermat(2).unwrap();
    let infl = f.inflection_divisor().unwrap();
    let mut rng = SplitMix64::new(31337);
    for _ in 0..3 {
        let m = random_invertible_matrix(&mut rng);
        let tf = f.transform(&m).unwrap();
        let infl_t = tf.inflection_divisor().unwrap();
        // pullback of I(F): substitute x -> Mx
        let homr = hom_ring();
        let coords = ["x", "y", "z"];
        let linear: Vec<MPoly> = (0..3)
            .map(|j| {
                let mut acc = MPoly::zero(&homr);
                for (k, name) in coords.iter().enumerate() {
                    acc = acc.add(&MPoly::var(&homr, name).scale(&m[j][k]));
                }
                acc
            })
            .collect();
        let pulled = webflat_core::foliation::compose(&infl, &linear, &homr);
        assert!(infl_t.eq_up_to_scalar(&pulled));
    }
}

#[test]
fn gauss_map_fixtures() {
    // Radial pencil at (x0, y0, 1): [-y0 : x0 : 0].
    let radial = Foliation::new(&aff("-y"), &aff("x")).unwrap();
    let g = |x: i64, y: i64| {
        radial
            .gauss_map(&[
                GaussRat::from_int(x),
                GaussRat::from_int(y),
                GaussRat::one(),
            ])
            .unwrap()
    };
    let img = g(3, 5);
    assert_eq!(img[0], GaussRat::from_int(-5));
    assert_eq!(img[1], GaussRat::from_int(3));
    assert!(img[2].is_zero());

    // Scaling the point scales the image: same projective point.
    let f = fermat(2).unwrap();
    let p1 = f
        .gauss_map(&[
            GaussRat::from_int(2),
            GaussRat::from_int(3),
            GaussRat::one(),
        ])
        .unwrap();
    let p2 = f
        .gauss_map(&[
            GaussRat::from_int(4),
            GaussRat::from_int(6),
            GaussRat::from_int(2),
        ])
        .unwrap();
    // cross-ratios equal: p1 x p2 = 0
    let cross_zero = (0..3).all(|i| {
        let j = (i + 1) % 3;
        (&(&p1[i] * &p2[j]) - &(&p1[j] * &p2[i])).is_zero()
    });
    assert!(cross_zero);

    // Along the invariant line {y=0} of fermat(2), the Gauss image is the
    // constant dual point [0:1:0].
    for t in [2i64, 3, 7] {
        let img = f
            .gauss_map(&[GaussRat::from_int(t), GaussRat::zero(), GaussRat::one()])
            .unwrap();
        assert!(img[0].is_zero() && img[2].is_zero() && !img[1].is_zero());
    }

    // Singular point: undefined.
    assert!(f
        .gauss_map(&[GaussRat::zero(), GaussRat::zero(), GaussRat::one()])
        .is_err());
}

#[test]
fn invariant_lines_fermat2_and_homog3() {
    let f = fermat(2).unwrap();
    let lines = invariant_lines(&f, 42).unwrap();
    assert!(lines.floating.is_empty());
    assert!(lines.uncertified.is_empty());
    let got: Vec<String> = lines.exact.iter().map(|l| l.to_string()).collect();
    for want in ["z", "x", "y", "x - z", "y - z", "x - y"] {
        let w = LineInPlane::from_mpoly(&hom(want)).unwrap();
        assert!(
            lines.exact.contains(&w),
            "missing line {want}; got {got:?}"
        );
    }
    assert_eq!(lines.exact.len(), 6);

    let h = homogeneous(3).unwrap();
    let lines = invariant_lines(&h, 42).unwrap();
    assert_eq!(lines.exact.len(), 5, "{:?}", lines.exact);
    for want in ["z", "x", "y", "x - y", "x + y"] {
        let w = LineInPlane::from_mpoly(&hom(want)).unwrap();
        assert!(lines.exact.contains(&w), "missing {want}");
    }
}

#[test]
fn invariant_lines_fermat5_exact_count() {
    // xi^4 = 1 stays inside the Gaussian rationals: all 15 lines exact.
    let f = fermat(5).unwrap();
    let lines = invariant_lines(&f, 7).unwrap();
    assert_eq!(lines.exact.len(), 15);
    assert!(lines.floating.is_empty());
}

#[test]
fn invariant_lines_fermat4_mixed_certification() {
    // xi^3 = 1 has two non-Gaussian roots: 6 exact lines + 6 floating.
    let f = fermat(4).unwrap();
    let lines = invariant_lines(&f, 7).unwrap();
    assert_eq!(lines.exact.len(), 6, "exact: {:?}", lines.exact);
    assert_eq!(lines.floating.len(), 6, "floating: {:?}", lines.floating);
    assert!(lines.uncertified.is_empty());
}

#[test]
fn generic_foliation_lines_pass_invariance() {
    // A generic foliation may have no invariant line at all; whatever is
    // returned must pass the invariance test and divide the inflection
    // divisor exactly.
    let f = random_foliation(2, 99).unwrap();
    let lines = invariant_lines(&f, 5).unwrap();
    let infl = f.inflection_divisor().unwrap();
    for l in &lines.exact {
        assert!(is_invariant_line(&f, l));
        assert!(webflat_core::polycore::divides(&l.as_mpoly(), &infl));
    }
    // and on a structured example with many lines
    let f5 = fermat(5).unwrap();
    let infl5 = f5.inflection_divisor().unwrap();
    for l in &invariant_lines(&f5, 5).unwrap().exact {
        assert!(webflat_core::polycore::divides(&l.as_mpoly(), &infl5));
    }
}

#[test]
fn convexity_verdicts() {
    for d in [2u32, 3, 4, 5] {
        let rep = convexity(&fermat(d).unwrap(), 11).unwrap();
        assert!(rep.is_convex(), "fermat({d}): {:?}", rep.verdict);
        assert!(rep.reduced, "fermat({d}) reduced");
        let rep = convexity(&homogeneous(d).unwrap(), 11).unwrap();
        assert!(rep.is_convex(), "homog({d}): {:?}", rep.verdict);
        if d >= 2 {
            assert!(!rep.reduced, "homog({d}) is non-reduced");
        }
    }

    // Generic degree-2 foliation: not convex, with a witness factor.
    let f = random_foliation(2, 42).unwrap();
    let rep = convexity(&f, 11).unwrap();
    assert!(
        matches!(rep.verdict, ConvexVerdict::NotConvex(_)),
        "verdict {:?}",
        rep.verdict
    );
    let w = rep.witness.expect("witness factor");
    assert!(w.degree() >= 2, "witness should be a non-line factor: {w}");
}

#[test]
fn tangency_divisor_fixtures() {
    // Tang(omega_d, omega_{d+1}) has affine part x^d y^d (y - x).
    for d in [2u32, 3, 4] {
        let t = homogeneous(d)
            .unwrap()
            .tangency_divisor(&homogeneous(d + 1).unwrap())
            .unwrap();
        assert_eq!(t.degree(), 2 * d + 2);
        let zi = hom_ring().index_of("z").unwrap();
        let affine_part = t.dehomogenize(zi).with_vars(&aff_ring());
        let want = aff("x")
            .pow(d)
            .mul(&aff("y").pow(d))
            .mul(&aff("y - x"));
        assert!(affine_part.eq_up_to_scalar(&want), "affine tang = {affine_part}");
    }

    // Tang(fermat(2), fermat(3)) = unit * xyz(x-z)(y-z)(x-y), degree 6.
    let t = fermat(2)
        .unwrap()
        .tangency_divisor(&fermat(3).unwrap())
        .unwrap();
    assert!(t.eq_up_to_scalar(&hom("x*y*z*(x-z)*(y-z)*(x-y)")), "t = {t}");
    assert_eq!(t.degree(), 2 + 3 + 1);

    // Degree law on random pairs.
    let f = random_foliation(2, 3).unwrap();
    let g = random_foliation(3, 4).unwrap();
    let t = f.tangency_divisor(&g).unwrap();
    assert_eq!(t.degree(), f.degree() + g.degree() + 1);

    // Identical foliations are rejected.
    assert!(fermat(2)
        .unwrap()
        .tangency_divisor(&fermat(2).unwrap())
        .is_err());
}

#[test]
fn transversal_pair_tangency() {
    // omega_1 = 2y dx + x dy, omega_2 = y^2 dx + x^2 dy: affine tangency
    // xy(2x - y); {x=0} and {y=0} invariant for both, 2x - y transversal.
    let web = transversal_pair(&GaussRat::from_int(2)).unwrap();
    let t = web.foliations[0]
        .tangency_divisor(&web.foliations[1])
        .unwrap();
    let zi = hom_ring().index_of("z").unwrap();
    let affine_part = t.dehomogenize(zi).with_vars(&aff_ring());
    assert!(
        affine_part.eq_up_to_scalar(&aff("x*y*(2*x - y)")),
        "t = {affine_part}"
    );
    for axis in ["x", "y"] {
        let l = LineInPlane::from_mpoly(&hom(axis)).unwrap();
        assert!(is_invariant_line(&web.foliations[0], &l));
        assert!(is_invariant_line(&web.foliations[1], &l));
    }
    let t_line = LineInPlane::from_mpoly(&hom("2*x - y")).unwrap();
    assert!(!is_invariant_line(&web.foliations[0], &t_line));

    // lambda = -1 makes the transversal factor invariant: rejected.
    assert!(transversal_pair(&GaussRat::from_int(-1)).is_err());
    assert!(transversal_pair(&GaussRat::zero()).is_err());
}

#[test]
fn singular_points_fermat2() {
    let f = fermat(2).unwrap();
    let recs = singular_points(&f, 9).unwrap();
    assert_eq!(recs.len(), 7);
    let total_mu: u32 = recs.iter().map(|r| r.mu).sum();
    assert_eq!(total_mu, 7); // d^2 + d + 1
    let mut expected: Vec<ProjPoint> = vec![
        ProjPoint::exact(GaussRat::zero(), GaussRat::zero(), GaussRat::one()),
        ProjPoint::exact(GaussRat::one(), GaussRat::zero(), GaussRat::one()),
        ProjPoint::exact(GaussRat::zero(), GaussRat::one(), GaussRat::one()),
        ProjPoint::exact(GaussRat::one(), GaussRat::one(), GaussRat::one()),
        ProjPoint::exact(GaussRat::one(), GaussRat::zero(), GaussRat::zero()),
        ProjPoint::exact(GaussRat::zero(), GaussRat::one(), GaussRat::zero()),
        ProjPoint::exact(GaussRat::one(), GaussRat::one(), GaussRat::zero()),
    ];
    expected.sort_by_key(|p| p.sort_key());
    let got: Vec<_> = recs.iter().map(|r| r.location.sort_key()).collect();
    let want: Vec<_> = expected.iter().map(|p| p.sort_key()).collect();
    assert_eq!(got, want);
}

#[test]
fn singular_count_matches_degree_formula() {
    // Multiplicity-weighted count d^2 + d + 1.
    for (f, d) in [
        (fermat(3).unwrap(), 3u32),
        (homogeneous(2).unwrap(), 2),
        (homogeneous(3).unwrap(), 3),
        (random_foliation(2, 17).unwrap(), 2),
    ] {
        let recs = singular_points(&f, 23).unwrap();
        let total: u32 = recs.iter().map(|r| r.mu).sum();
        assert_eq!(total, d * d + d + 1, "foliation {f:?}");
    }
}

#[test]
fn homogeneous_singularities_origin_plus_infinity() {
    let h = homogeneous(3).unwrap();
    let recs = singular_points(&h, 5).unwrap();
    // origin (mu = 9) plus 4 points on the infinity line
    let affine: Vec<_> = recs.iter().filter(|r| !r.location.at_infinity()).collect();
    assert_eq!(affine.len(), 1);
    assert_eq!(affine[0].mu, 9);
    let inf: Vec<_> = recs.iter().filter(|r| r.location.at_infinity()).collect();
    assert_eq!(inf.len(), 4);
}

#[test]
fn classification_fixtures() {
    let f = fermat(2).unwrap();
    // (0,0): nu = 1, radial of order 1.
    let class = classify_in_chart(
        &f,
        Chart::Z,
        &PointCoord::Exact(GaussRat::zero()),
        &PointCoord::Exact(GaussRat::zero()),
    );
    match class {
        Classification::Done {
            nu,
            radial_order,
            special,
        } => {
            assert_eq!(nu, 1);
            assert_eq!(radial_order, Some(1));
            assert!(special);
        }
        other => panic!("unexpected {other:?}"),
    }
    // (1,0): nu = 1, not radial, not special.
    let class = classify_in_chart(
        &f,
        Chart::Z,
        &PointCoord::Exact(GaussRat::one()),
        &PointCoord::Exact(GaussRat::zero()),
    );
    match class {
        Classification::Done {
            nu,
            radial_order,
            special,
        } => {
            assert_eq!(nu, 1);
            assert_eq!(radial_order, None);
            assert!(!special);
        }
        other => panic!("unexpected {other:?}"),
    }
    // [1:0:0] in chart X: radial of order 1 (jet (u - u^2, w - w^2)).
    let class = classify_in_chart(
        &f,
        Chart::X,
        &PointCoord::Exact(GaussRat::zero()),
        &PointCoord::Exact(GaussRat::zero()),
    );
    assert!(class.is_radial(), "{class:?}");

    // Homogeneous origin: nu = d, not radial, special.
    for d in [2u32, 3, 4] {
        let h = homogeneous(d).unwrap();
        let class = classify_in_chart(
            &h,
            Chart::Z,
            &PointCoord::Exact(GaussRat::zero()),
            &PointCoord::Exact(GaussRat::zero()),
        );
        match class {
            Classification::Done {
                nu,
                radial_order,
                special,
            } => {
                assert_eq!(nu, d);
                assert_eq!(radial_order, None);
                assert!(special);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}

#[test]
fn classification_is_chart_independent() {
    // [1:1:0] is singular for fermat(2); classify in charts X and Y.
    let f = fermat(2).unwrap();
    let in_x = classify_in_chart(
        &f,
        Chart::X,
        &PointCoord::Exact(GaussRat::one()),
        &PointCoord::Exact(GaussRat::zero()),
    );
    let in_y = classify_in_chart(
        &f,
        Chart::Y,
        &PointCoord::Exact(GaussRat::one()),
        &PointCoord::Exact(GaussRat::zero()),
    );
    match (in_x, in_y) {
        (
            Classification::Done {
                nu: n1,
                radial_order: r1,
                ..
            },
            Classification::Done {
                nu: n2,
                radial_order: r2,
                ..
            },
        ) => {
            assert_eq!(n1, n2);
            assert_eq!(r1, r2);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn special_singularities_fermat2_duals() {
    // Radial points: (0,0), (1,1), [1:0:0], [0:1:0]; dual lines
    // {q=0}, {p+q-1=0}, {p=0}, and the chart's infinity line.
    let f = fermat(2).unwrap();
    let rep = special_singularities(&f, 3).unwrap();
    assert_eq!(rep.radial.len(), 4, "{:?}", rep.radial);
    assert!(rep.inconclusive.is_empty());
    let pq = webflat_core::foliation::sing::dual_ring();
    let mut affine_duals: Vec<String> = rep
        .radial_duals
        .iter()
        .filter_map(|d| match d {
            DualLine::Affine(l) => Some(l.to_string()),
            _ => None,
        })
        .collect();
    affine_duals.sort();
    let mut want: Vec<String> = ["q", "p + q - 1", "p"]
        .iter()
        .map(|s| parse_poly(s, &pq).unwrap().unit_normal().to_string())
        .collect();
    want.sort();
    assert_eq!(affine_duals, want);
    assert!(rep
        .radial_duals
        .iter()
        .any(|d| matches!(d, DualLine::ChartInfinity)));

    // Nothing else is special for fermat(2): all four specials radial.
    assert_eq!(rep.special.len(), 4);
}

#[test]
fn generic_foliation_has_no_radial_singularities() {
    // Generic linear parts are not multiples of the identity.
    let f = random_foliation(2, 17).unwrap();
    let rep = special_singularities(&f, 5).unwrap();
    assert!(rep.radial.is_empty(), "{:?}", rep.radial);
}

#[test]
fn invariant_line_counts_for_family_degrees() {
    // fermat(3): 9 exact lines (xi in {1, -1}); homog(4): 4 exact plus 2
    // floating (xi^3 = 1 has one rational root).
    let lines = invariant_lines(&fermat(3).unwrap(), 3).unwrap();
    assert_eq!(lines.exact.len(), 9);
    assert!(lines.floating.is_empty());
    let lines = invariant_lines(&homogeneous(4).unwrap(), 3).unwrap();
    assert_eq!(lines.exact.len(), 4, "{:?}", lines.exact);
    assert_eq!(lines.floating.len(), 2);
}

#[test]
fn homogeneous_origin_dual_is_q_axis() {
    // The origin is special (nu = d >= 2, not radial); its dual line in
    // the (p, q) chart is {q = 0}.
    let h = homogeneous(3).unwrap();
    let rep = special_singularities(&h, 3).unwrap();
    let origin_dual = rep
        .special
        .iter()
        .zip(rep.special_duals.iter())
        .find(|(r, _)| !r.location.at_infinity())
        .map(|(_, d)| d)
        .expect("origin is special");
    match origin_dual {
        DualLine::Affine(l) => {
            let pq = webflat_core::foliation::sing::dual_ring();
            assert!(l.eq_up_to_scalar(&parse_poly("q", &pq).unwrap()));
        }
        other => panic!("unexpected dual {other:?}"),
    }
}
