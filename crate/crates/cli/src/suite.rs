//! The built-in verification suite: every check the tool's guarantees rest
//! on, runnable end to end with one command and mirrored one-to-one by the
//! acceptance test target.

use num_complex::Complex64;

use webflat_core::curvature::{
    curvature_at, curvature_expansion_check, eta_for_triple, flatness_test,
    homothety_scaling_check, slope_fan, FlatStatus, WebEval,
};
use webflat_core::families::{
    fermat, homogeneous, random_foliation, tangency_reduced_and_invariant, transversal_pair,
};
use webflat_core::foliation::lines::{convexity, invariant_lines};
use webflat_core::foliation::sing::DualLine;
use webflat_core::foliation::{aff_ring, hom_ring, LineInPlane};
use webflat_core::polycore::{divides, parse_poly, GaussRat, MPoly};
use webflat_core::report::Json;
use webflat_core::rng::SplitMix64;
use webflat_core::webleg::{
    cross_check_discriminant, discriminant_resultant, discriminant_structural, dual_web_ring,
    legendre, ImplicitWeb, SlopeConvention, WebSpec,
};

use crate::run::RunConfig;

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &str, out: Result<(bool, String), String>) -> CheckOutcome {
    match out {
        Ok((pass, detail)) => CheckOutcome {
            name: name.to_string(),
            pass,
            detail,
        },
        Err(e) => CheckOutcome {
            name: name.to_string(),
            pass: false,
            detail: format!("error: {e}"),
        },
    }
}

fn hom(p: &str) -> MPoly {
    parse_poly(p, &hom_ring()).unwrap()
}

/// 1. Inflection degree law: deg I(F) = 3d for the two families and seeded
/// random foliations, d in 2..=5.
pub fn check_inflection_degree_law() -> Result<(bool, String), String> {
    let mut detail = Vec::new();
    let mut pass = true;
    for d in 2u32..=5 {
        for (name, fol) in [
            ("fermat", fermat(d).map_err(|e| e.to_string())?),
            ("homog", homogeneous(d).map_err(|e| e.to_string())?),
        ] {
            let deg = fol
                .inflection_divisor()
                .map_err(|e| e.to_string())?
                .degree();
            pass &= deg == 3 * d;
            detail.push(format!("{name}({d}): {deg}"));
        }
    }
    for (i, seed) in [11u64, 12, 13, 14, 15].iter().enumerate() {
        let d = 2 + (i as u32 % 4);
        let fol = random_foliation(d, *seed).map_err(|e| e.to_string())?;
        let deg = fol
            .inflection_divisor()
            .map_err(|e| e.to_string())?
            .degree();
        pass &= deg == 3 * d;
        detail.push(format!("rand(d={d},seed={seed}): {deg}"));
    }
    Ok((pass, detail.join(", ")))
}

/// 2. The 6 invariant lines of the degree-2 member and the exact product
/// identity with its inflection divisor.
pub fn check_fermat2_structure() -> Result<(bool, String), String> {
    let f = fermat(2).map_err(|e| e.to_string())?;
    let lines = invariant_lines(&f, 2).map_err(|e| e.to_string())?;
    let want: Vec<LineInPlane> = ["z", "x", "y", "x-z", "y-z", "x-y"]
        .iter()
        .map(|s| LineInPlane::from_mpoly(&hom(s)).unwrap())
        .collect();
    let set_ok = lines.exact.len() == 6 && want.iter().all(|w| lines.exact.contains(w));
    let infl = f.inflection_divisor().map_err(|e| e.to_string())?;
    let mut product = MPoly::one(&hom_ring());
    for w in &want {
        product = product.mul(&w.as_mpoly());
    }
    let product_ok = infl.eq_up_to_scalar(&product);
    Ok((
        set_ok && product_ok,
        format!("lines {} of 6, product identity {product_ok}", lines.exact.len()),
    ))
}

/// 3. Pairwise tangency of the Fermat-type family is reduced and formed by
/// common invariant lines exactly for degree pairs (l, 2l-1).
pub fn check_fermat_pair_tangency_law() -> Result<(bool, String), String> {
    let mut detail = Vec::new();
    let mut pass = true;
    for (l, d, want) in [
        (2u32, 3u32, true),
        (3, 5, true),
        (2, 4, false),
        (3, 4, false),
        (2, 5, false),
        (4, 6, false),
    ] {
        let fl = fermat(l).map_err(|e| e.to_string())?;
        let fd = fermat(d).map_err(|e| e.to_string())?;
        let got = tangency_reduced_and_invariant(&fl, &fd, 7).map_err(|e| e.to_string())?;
        pass &= got == want;
        detail.push(format!("({l},{d}): {got} (want {want})"));
    }
    Ok((pass, detail.join(", ")))
}

/// 4. Discriminant agreement for the degree-2 member: resultant route
/// equals unit * p q (p+q-1); structural route lists exactly the three
/// radial dual lines plus the chart infinity; cross-check with 200-point
/// coverage.
pub fn check_discriminant_agreement(config: &RunConfig) -> Result<(bool, String), String> {
    let web = WebSpec::single(fermat(2).map_err(|e| e.to_string())?);
    let dual = legendre(&web).map_err(|e| e.to_string())?;
    let disc = discriminant_resultant(&dual).map_err(|e| e.to_string())?;
    let want = parse_poly("p*q*(p+q-1)", &dual_web_ring()).unwrap();
    let disc_ok = disc.eq_up_to_scalar(&want);
    let mut report = discriminant_structural(&web, config.seed).map_err(|e| e.to_string())?;
    let pq = webflat_core::foliation::sing::dual_ring();
    let mut affine: Vec<String> = report
        .components
        .iter()
        .filter_map(|c| match &c.line {
            Some(DualLine::Affine(l)) => Some(l.to_string()),
            _ => None,
        })
        .collect();
    affine.sort();
    let mut expect: Vec<String> = ["p", "q", "p+q-1"]
        .iter()
        .map(|s| parse_poly(s, &pq).unwrap().unit_normal().to_string())
        .collect();
    expect.sort();
    let structural_ok = affine == expect
        && report
            .components
            .iter()
            .any(|c| matches!(c.line, Some(DualLine::ChartInfinity)));
    let agree =
        cross_check_discriminant(&mut report, &dual, config.seed, 200).map_err(|e| e.to_string())?;
    Ok((
        disc_ok && structural_ok && agree,
        format!("resultant {disc_ok}, structural {structural_ok}, cross-check {agree}"),
    ))
}

fn flat_verdict(web: &WebSpec, config: &RunConfig) -> Result<(FlatStatus, String), String> {
    let v = flatness_test(web, &config.flatness()).map_err(|e| e.to_string())?;
    Ok((
        v.status,
        format!(
            "reliable {}/{} samples, max |K|/scale {:.3e}, {} probes",
            v.reliable_count,
            v.samples.len(),
            v.max_relative_k,
            v.probes.len()
        ),
    ))
}

/// 5. Flatness of the line-product scenario web: two shared invariant
/// lines with the degree-2 and degree-3 members.
pub fn check_convex_reduced_scenario_flatness(config: &RunConfig) -> Result<(bool, String), String> {
    let web = WebSpec::new(
        vec![
            LineInPlane::from_ints(1, -1, 0),
            LineInPlane::from_ints(1, 0, 0),
        ],
        vec![
            fermat(2).map_err(|e| e.to_string())?,
            fermat(3).map_err(|e| e.to_string())?,
        ],
    )
    .map_err(|e| e.to_string())?;
    let (status, detail) = flat_verdict(&web, config)?;
    Ok((status == FlatStatus::FlatConsistent, detail))
}

/// 6. Flatness of the degree-3 x degree-5 member pair (8-web).
pub fn check_f3xf5_flatness(config: &RunConfig) -> Result<(bool, String), String> {
    let web = WebSpec::new(
        vec![],
        vec![
            fermat(3).map_err(|e| e.to_string())?,
            fermat(5).map_err(|e| e.to_string())?,
        ],
    )
    .map_err(|e| e.to_string())?;
    let (status, detail) = flat_verdict(&web, config)?;
    Ok((status == FlatStatus::FlatConsistent, detail))
}

/// 7. Flatness of the homogeneous scenario 13-web plus the three exact
/// tangency fixtures.
pub fn check_homogeneous_scenario_flatness(config: &RunConfig) -> Result<(bool, String), String> {
    let h3 = homogeneous(3).map_err(|e| e.to_string())?;
    let h4 = homogeneous(4).map_err(|e| e.to_string())?;
    let h5 = homogeneous(5).map_err(|e| e.to_string())?;
    let aff = aff_ring();
    let zi = hom_ring().index_of("z").unwrap();
    let mut tang_ok = true;
    for (a, b, want) in [
        (&h3, &h4, "x^3*y^3*(y-x)"),
        (&h3, &h5, "x^3*y^3*(y^2-x^2)"),
        (&h4, &h5, "x^4*y^4*(y-x)"),
    ] {
        let t = a.tangency_divisor(b).map_err(|e| e.to_string())?;
        let affine = t.dehomogenize(zi).with_vars(&aff);
        tang_ok &= affine.eq_up_to_scalar(&parse_poly(want, &aff).unwrap());
    }
    let web = WebSpec::new(vec![LineInPlane::from_ints(1, -1, 0)], vec![h3, h4, h5])
        .map_err(|e| e.to_string())?;
    let (status, detail) = flat_verdict(&web, config)?;
    Ok((
        status == FlatStatus::FlatConsistent && tang_ok,
        format!("{detail}; tangency fixtures {tang_ok}"),
    ))
}

/// 8. Non-flat witnesses: the transversal-tangency 3-web shows a pole
/// growing >= 10x per decade toward the Gauss image of the transversal
/// line, and a random foliation with a generic line is non-flat.
pub fn check_nonflat_witnesses(config: &RunConfig) -> Result<(bool, String), String> {
    let web = transversal_pair(&GaussRat::from_int(2)).map_err(|e| e.to_string())?;
    let v = flatness_test(&web, &config.flatness()).map_err(|e| e.to_string())?;
    let pole = v
        .probes
        .iter()
        .filter(|p| p.component.contains("Gauss image"))
        .map(|p| p.growth_per_decade)
        .fold(0.0f64, f64::max);
    let witness = v
        .samples
        .iter()
        .filter(|s| s.reliable)
        .any(|s| s.k.norm() > config.nonflat_floor * s.scale.max(1e-300));
    let first_ok = v.status == FlatStatus::NonFlat && pole >= 10.0 && witness;

    let web2 = WebSpec::new(
        vec![LineInPlane::from_ints(1, 2, 3)],
        vec![random_foliation(2, 7).map_err(|e| e.to_string())?],
    )
    .map_err(|e| e.to_string())?;
    let v2 = flatness_test(&web2, &config.flatness()).map_err(|e| e.to_string())?;
    let second_ok = v2.status == FlatStatus::NonFlat;
    Ok((
        first_ok && second_ok,
        format!(
            "3-web pole growth {pole:.1}x/decade, witness {witness}; line-product verdict {:?}",
            v2.status
        ),
    ))
}

/// 9. Homothety scaling identity on the homogeneous pair, lambda = 2,
/// 20 random points, relative error < 1e-8.
pub fn check_homothety_identity(config: &RunConfig) -> Result<(bool, String), String> {
    let web = WebSpec::new(
        vec![],
        vec![
            homogeneous(3).map_err(|e| e.to_string())?,
            homogeneous(4).map_err(|e| e.to_string())?,
        ],
    )
    .map_err(|e| e.to_string())?;
    let mut rng = SplitMix64::new(config.seed ^ 0x60d);
    let mut max_err = 0.0f64;
    let mut done = 0;
    while done < 20 {
        let a = Complex64::new(1.5 + rng.next_symmetric(1.0), rng.next_symmetric(1.0));
        let b = Complex64::new(1.5 + rng.next_symmetric(1.0), rng.next_symmetric(1.0));
        match homothety_scaling_check(&web, a, b, 2.0, rng.next_u64()) {
            Ok(e) => {
                max_err = max_err.max(e);
                done += 1;
            }
            Err(_) => continue,
        }
    }
    Ok((max_err < 1e-8, format!("max relative error {max_err:.3e}")))
}

/// 10. Numerical core: implicit partials converge at the h^2 rate against
/// central differences, eta consistency < 1e-9, the trivial 3-web has
/// |K| < 1e-12, and the line-product expansion identity holds to 1e-8 on
/// three fixtures.
pub fn check_numerical_core(config: &RunConfig) -> Result<(bool, String), String> {
    // h^2 convergence on the dual of the degree-2 member.
    let web = WebSpec::single(fermat(2).map_err(|e| e.to_string())?);
    let eval = WebEval::from_dual(&legendre(&web).map_err(|e| e.to_string())?);
    let p0 = Complex64::new(1.7, 0.4);
    let q0 = Complex64::new(-0.8, 0.9);
    let base = slope_fan::<Complex64>(&eval, p0, q0, config.seed).map_err(|e| format!("{e:?}"))?;
    let track = |p: Complex64, q: Complex64, i: usize| -> Result<Complex64, String> {
        let fan = slope_fan::<Complex64>(&eval, p, q, config.seed).map_err(|e| format!("{e:?}"))?;
        Ok(*fan
            .roots
            .iter()
            .min_by(|a, b| {
                (*a - base.roots[i])
                    .norm()
                    .partial_cmp(&(*b - base.roots[i]).norm())
                    .unwrap()
            })
            .unwrap())
    };
    let mut rate_ok = true;
    let mut min_ratio = f64::INFINITY;
    for i in 0..base.roots.len() {
        let defect = |h: f64| -> Result<f64, String> {
            let xp = (track(p0 + Complex64::new(h, 0.0), q0, i)?
                - track(p0 - Complex64::new(h, 0.0), q0, i)?)
                / (2.0 * h);
            Ok((xp + base.slopes[i].mp).norm())
        };
        let d1 = defect(1e-2)?;
        let d2 = defect(5e-3)?;
        let ratio = d1 / d2;
        min_ratio = min_ratio.min(ratio);
        rate_ok &= ratio >= 3.5;
    }

    // eta consistency on a 5-web fan.
    let web5 = WebSpec::new(
        vec![],
        vec![
            fermat(2).map_err(|e| e.to_string())?,
            fermat(3).map_err(|e| e.to_string())?,
        ],
    )
    .map_err(|e| e.to_string())?;
    let eval5 = WebEval::from_dual(&legendre(&web5).map_err(|e| e.to_string())?);
    let fan = slope_fan::<Complex64>(
        &eval5,
        Complex64::new(0.9, 0.3),
        Complex64::new(-0.6, 0.5),
        config.seed,
    )
    .map_err(|e| format!("{e:?}"))?;
    let mut eta_max = 0.0f64;
    for i in 0..fan.slopes.len() {
        for j in i + 1..fan.slopes.len() {
            for k in j + 1..fan.slopes.len() {
                eta_max = eta_max.max(eta_for_triple(&fan, i, j, k).consistency_residual);
            }
        }
    }
    let eta_ok = eta_max < 1e-9;

    // trivial 3-web.
    let trivial = WebEval::from_implicit(&ImplicitWeb {
        poly: parse_poly("x^3 - x", &dual_web_ring()).unwrap(),
        convention: SlopeConvention::Dual,
        degree_in_slope: 3,
    });
    let s = curvature_at(
        &trivial,
        Complex64::new(0.3, 0.1),
        Complex64::new(-0.2, 0.4),
        config.seed,
        false,
    )
    .map_err(|e| format!("{e:?}"))?;
    let trivial_ok = s.k.norm() < 1e-12;

    // expansion identity on three fixtures.
    let p = Complex64::new(0.83, 0.21);
    let q = Complex64::new(-0.41, 0.37);
    let l1 = LineInPlane::from_ints(1, -1, 0);
    let l2 = LineInPlane::from_ints(0, 1, -1);
    let l3 = LineInPlane::from_ints(1, 1, -3);
    let rest1 = WebSpec::single(fermat(2).map_err(|e| e.to_string())?);
    let rest2 = web5.clone();
    let r1 = curvature_expansion_check(&[l1.clone(), l2.clone()], &rest1, p, q, config.seed)
        .map_err(|e| e.to_string())?;
    let r2 = curvature_expansion_check(&[l1.clone(), l2.clone(), l3.clone()], &rest1, p, q, config.seed)
        .map_err(|e| e.to_string())?;
    let r3 = curvature_expansion_check(&[l1, l2, l3], &rest2, p, q, config.seed)
        .map_err(|e| e.to_string())?;
    let expansion_ok = r1 < 1e-8 && r2 < 1e-8 && r3 < 1e-8;

    Ok((
        rate_ok && eta_ok && trivial_ok && expansion_ok,
        format!(
            "h^2 min ratio {min_ratio:.2}, eta max {eta_max:.2e}, trivial |K| {:.2e}, \
             expansion residuals {r1:.2e}/{r2:.2e}/{r3:.2e}",
            s.k.norm()
        ),
    ))
}

/// Families sanity: convexity verdicts across the generator degrees.
pub fn check_family_convexity() -> Result<(bool, String), String> {
    let mut pass = true;
    let mut detail = Vec::new();
    for d in 2u32..=5 {
        let f = convexity(&fermat(d).map_err(|e| e.to_string())?, 3).map_err(|e| e.to_string())?;
        pass &= f.is_reduced_convex();
        let h =
            convexity(&homogeneous(d).map_err(|e| e.to_string())?, 3).map_err(|e| e.to_string())?;
        pass &= h.is_convex() && !h.reduced;
        detail.push(format!(
            "d={d}: fermat reduced-convex {}, homog convex {}",
            f.is_reduced_convex(),
            h.is_convex()
        ));
    }
    Ok((pass, detail.join("; ")))
}

/// Run the whole matrix.
pub fn run_suite(config: &RunConfig) -> Vec<CheckOutcome> {
    vec![
        check("inflection degree law", check_inflection_degree_law()),
        check("fermat(2) line structure", check_fermat2_structure()),
        check(
            "fermat pair tangency law",
            check_fermat_pair_tangency_law(),
        ),
        check(
            "fermat(2) discriminant agreement",
            check_discriminant_agreement(config),
        ),
        check("convex-reduced scenario flatness", check_convex_reduced_scenario_flatness(config)),
        check("fermat(3) x fermat(5) flatness", check_f3xf5_flatness(config)),
        check("homogeneous scenario flatness", check_homogeneous_scenario_flatness(config)),
        check("non-flat witnesses", check_nonflat_witnesses(config)),
        check("homothety identity", check_homothety_identity(config)),
        check("numerical core", check_numerical_core(config)),
        check("family convexity", check_family_convexity()),
    ]
}

pub fn suite_report(config: &RunConfig, outcomes: &[CheckOutcome]) -> (Json, bool) {
    let all_pass = outcomes.iter().all(|o| o.pass);
    let cases: Vec<Json> = outcomes
        .iter()
        .map(|o| {
            Json::obj()
                .with("name", Json::Str(o.name.clone()))
                .with("pass", Json::Bool(o.pass))
                .with("detail", Json::Str(o.detail.clone()))
        })
        .collect();
    let report = crate::run::report_header("suite", config)
        .with("cases", Json::Arr(cases))
        .with("all_pass", Json::Bool(all_pass));
    (report, all_pass)
}

#[allow(unused)]
fn line_divides(t: &MPoly, l: &LineInPlane) -> bool {
    divides(&l.as_mpoly(), t)
}
