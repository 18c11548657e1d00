//! Elimination primitives checked against independent routes: the
//! subresultant resultant against a fraction-free Sylvester determinant,
//! and the fixed worked examples for resultants, discriminants, gcd and
//! squarefree parts.

use webflat_core::polycore::{
    discriminant_in, exact_div, gcd, is_squarefree, parse_poly, resultant, squarefree_part,
    GaussRat, MPoly, VarSet,
};
use webflat_core::rng::SplitMix64;

/// Fraction-free (Bareiss) determinant; independent of the subresultant
/// code path, used only as a test oracle.
fn bareiss_det(mut m: Vec<Vec<MPoly>>, vars: &VarSet) -> MPoly {
    let n = m.len();
    if n == 0 {
        return MPoly::one(vars);
    }
    let mut sign_neg = false;
    let mut prev = MPoly::one(vars);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return MPoly::zero(vars);
            };
            m.swap(k, swap);
            sign_neg = !sign_neg;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = exact_div(&num, &prev).expect("bareiss division is exact");
            }
            m[i][k] = MPoly::zero(vars);
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_neg {
        det.neg()
    } else {
        det
    }
}

/// Sylvester-matrix resultant eliminating `var`.
fn sylvester_resultant(f: &MPoly, g: &MPoly, var: usize) -> MPoly {
    let vars = f.vars().clone();
    let mut fc = f.coeffs_in(var);
    let mut gc = g.coeffs_in(var);
    while fc.len() > 1 && fc.last().unwrap().is_zero() {
        fc.pop();
    }
    while gc.len() > 1 && gc.last().unwrap().is_zero() {
        gc.pop();
    }
    let n = fc.len() - 1;
    let m = gc.len() - 1;
    if n == 0 && m == 0 {
        return MPoly::one(&vars);
    }
    if n == 0 {
        return fc[0].pow(m as u32);
    }
    if m == 0 {
        return gc[0].pow(n as u32);
    }
    let size = n + m;
    let zero = MPoly::zero(&vars);
    let mut mat = vec![vec![zero.clone(); size]; size];
    for row in 0..m {
        for (k, c) in fc.iter().rev().enumerate() {
            mat[row][row + k] = c.clone();
        }
    }
    for row in 0..n {
        for (k, c) in gc.iter().rev().enumerate() {
            mat[m + row][row + k] = c.clone();
        }
    }
    bareiss_det(mat, &vars)
}

fn random_poly(rng: &mut SplitMix64, vars: &VarSet, max_deg: u32, nterms: usize) -> MPoly {
    let nv = vars.len();
    let mut terms = Vec::new();
    for _ in 0..nterms {
        let mut exps = vec![0u32; nv];
        for e in exps.iter_mut() {
            *e = rng.next_range_i64(0, max_deg as i64) as u32;
        }
        let c = GaussRat::from_int(rng.next_range_i64(-4, 4));
        terms.push((exps, c));
    }
    MPoly::from_terms(vars, terms)
}

#[test]
fn subresultant_matches_sylvester_on_random_instances() {
    let vars = VarSet::new(vec!["x", "y", "z"]);
    let mut rng = SplitMix64::new(2024);
    let mut checked = 0;
    while checked < 25 {
        let f = random_poly(&mut rng, &vars, 3, 5);
        let g = random_poly(&mut rng, &vars, 3, 4);
        if f.degree_in(0) == 0 || g.degree_in(0) == 0 {
            continue;
        }
        let sub = resultant(&f, &g, 0).unwrap();
        let syl = sylvester_resultant(&f, &g, 0);
        assert_eq!(sub, syl, "resultant mismatch for f={f}, g={g}");
        checked += 1;
    }
}

#[test]
fn resultant_orientation_sign_rule() {
    let vars = VarSet::new(vec!["x", "y"]);
    let mut rng = SplitMix64::new(77);
    let mut checked = 0;
    while checked < 20 {
        let f = random_poly(&mut rng, &vars, 3, 4);
        let g = random_poly(&mut rng, &vars, 3, 4);
        let (df, dg) = (f.degree_in(0), g.degree_in(0));
        if df == 0 || dg == 0 {
            continue;
        }
        let fg = resultant(&f, &g, 0).unwrap();
        let gf = resultant(&g, &f, 0).unwrap();
        let expect = if (df * dg) % 2 == 1 { gf.neg() } else { gf };
        assert_eq!(fg, expect, "orientation rule failed for f={f}, g={g}");
        checked += 1;
    }
}

#[test]
fn resultant_fixtures() {
    let v = VarSet::new(vec!["x"]);
    let f = parse_poly("x - 1", &v).unwrap();
    let g = parse_poly("x + 1", &v).unwrap();
    assert_eq!(resultant(&f, &g, 0).unwrap(), MPoly::int(&v, 2));

    let h = parse_poly("x^3 - 2*x + 5", &v).unwrap();
    assert!(resultant(&h, &h, 0).unwrap().is_zero());

    let c1 = parse_poly("3", &v).unwrap();
    assert!(resultant(&c1, &c1, 0).is_err()); // variable absent from both
}

#[test]
fn legendre_quadratic_discriminant_fixture() {
    // disc_x of (p^2-p)x^2 + 2pq x + (q^2-q) is 4pq(p+q-1) up to a unit
    // (hand computation: B^2 - 4AC = 4p^2q^2 - 4(p^2-p)(q^2-q)).
    let v = VarSet::new(vec!["p", "q", "x"]);
    let f = parse_poly("(p^2-p)*x^2 + 2*p*q*x + (q^2-q)", &v).unwrap();
    let x = v.index_of("x").unwrap();
    let disc = discriminant_in(&f, x).unwrap();
    let want = parse_poly("4*p*q*(p+q-1)", &v).unwrap();
    assert!(disc.eq_up_to_scalar(&want), "disc = {disc}");
}

#[test]
fn discriminant_fixtures() {
    let v = VarSet::new(vec!["x", "a"]);
    let sq = parse_poly("(x-a)^2", &v).unwrap();
    assert!(discriminant_in(&sq, 0).unwrap().is_zero());

    let f = parse_poly("x^2 - 1", &v).unwrap();
    let d = discriminant_in(&f, 0).unwrap();
    assert!(d.eq_up_to_scalar(&MPoly::int(&v, 4)), "disc(x^2-1) = {d}");

    let c = parse_poly("a", &v).unwrap();
    assert!(discriminant_in(&c, 0).is_err()); // constant in x
}

#[test]
fn disc_of_product_divisibility() {
    // disc(fg) equals unit * disc(f) disc(g) Res(f,g)^2; checked as exact
    // divisibility both ways on random instances.
    let vars = VarSet::new(vec!["x", "t"]);
    let mut rng = SplitMix64::new(11);
    let mut checked = 0;
    while checked < 20 {
        let f = random_poly(&mut rng, &vars, 2, 3);
        let g = random_poly(&mut rng, &vars, 2, 3);
        if f.degree_in(0) == 0 || g.degree_in(0) == 0 {
            continue;
        }
        let prod = f.mul(&g);
        let dprod = discriminant_in(&prod, 0).unwrap();
        let df = discriminant_in(&f, 0).unwrap();
        let dg = discriminant_in(&g, 0).unwrap();
        let r = resultant(&f, &g, 0).unwrap();
        let rhs = df.mul(&dg).mul(&r).mul(&r);
        if rhs.is_zero() {
            assert!(dprod.is_zero(), "f={f} g={g}");
        } else {
            assert!(
                dprod.eq_up_to_scalar(&rhs),
                "disc(fg) != unit*disc f*disc g*Res^2 for f={f}, g={g}"
            );
        }
        checked += 1;
    }
}

#[test]
fn gcd_and_squarefree_fixtures() {
    let v = VarSet::new(vec!["x", "y", "z"]);
    let a = parse_poly("x^2 - 1", &v).unwrap();
    let b = parse_poly("x^2 - 2*x + 1", &v).unwrap();
    let g = gcd(&a, &b);
    assert!(g.eq_up_to_scalar(&parse_poly("x - 1", &v).unwrap()), "gcd = {g}");

    let f = parse_poly("x^2*y", &v).unwrap();
    let s = squarefree_part(&f);
    assert!(s.eq_up_to_scalar(&parse_poly("x*y", &v).unwrap()), "sqf = {s}");

    // Pairwise-distinct linear factors stay untouched; distinctness is
    // witnessed by pairwise nonzero resultants.
    let big = parse_poly("x*y*z*(x-z)*(y-z)*(x-y)", &v).unwrap();
    let factors = ["x", "y", "z", "x-z", "y-z", "x-y"];
    for i in 0..factors.len() {
        for j in i + 1..factors.len() {
            let fi = parse_poly(factors[i], &v).unwrap();
            let fj = parse_poly(factors[j], &v).unwrap();
            let var = (0..3).find(|&k| fi.degree_in(k) > 0 || fj.degree_in(k) > 0).unwrap();
            assert!(!resultant(&fi, &fj, var).unwrap().is_zero());
        }
    }
    assert!(squarefree_part(&big).eq_up_to_scalar(&big));
    assert!(is_squarefree(&big));
    assert!(!is_squarefree(&f));
}

#[test]
fn squarefree_part_coprime_with_derivatives() {
    let vars = VarSet::new(vec!["x", "y"]);
    let mut rng = SplitMix64::new(5150);
    for _ in 0..10 {
        let f = random_poly(&mut rng, &vars, 2, 3);
        let g = random_poly(&mut rng, &vars, 2, 3);
        let sq = f.mul(&f).mul(&g);
        if sq.is_zero() || sq.is_constant() {
            continue;
        }
        let s = squarefree_part(&sq);
        // Squarefreeness of the result: the joint gcd with all partial
        // derivatives is constant. (A single partial may share a factor
        // that is y-free with a squarefree s; the joint gcd may not.)
        let mut g = s.clone();
        for v in s.used_vars() {
            g = gcd(&g, &s.derivative(v));
            if g.is_constant() {
                break;
            }
        }
        assert!(g.is_constant(), "joint gcd = {g} for s = {s}");
        assert!(is_squarefree(&s), "squarefree_part not squarefree: {s}");
    }
}

#[test]
fn substitute_then_evaluate_commutes() {
    // substitute(y := px+q) then evaluate equals evaluate-then-substitute
    // at exact random points, 100 instances, exact equality.
    let vars = VarSet::new(vec!["x", "y", "p", "q"]);
    let mut rng = SplitMix64::new(909);
    let f = parse_poly("y^2 - y - p*(x^2 - x)", &vars).unwrap();
    let sub = parse_poly("p*x + q", &vars).unwrap();
    let fsub = f.substitute_name("y", &sub);
    for _ in 0..100 {
        let pt: Vec<GaussRat> = (0..4)
            .map(|_| {
                GaussRat::new(
                    webflat_core::polycore::rat(rng.next_range_i64(-6, 6), rng.next_range_i64(1, 3)),
                    webflat_core::polycore::rat(rng.next_range_i64(-2, 2), 1),
                )
            })
            .collect();
        // evaluate-then-substitute: plug y = p*x+q evaluated at the point
        let y_val = sub.eval_exact(&pt);
        let mut pt2 = pt.clone();
        pt2[1] = y_val;
        let lhs = fsub.eval_exact(&pt);
        let rhs = f.eval_exact(&pt2);
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn substitution_fixture_from_hand_expansion() {
    let vars = VarSet::new(vec!["x", "y", "p", "q"]);
    let f = parse_poly("(y^2-y) - p*(x^2-x)", &vars).unwrap();
    let sub = parse_poly("p*x + q", &vars).unwrap();
    let got = f.substitute_name("y", &sub);
    let want = parse_poly("(p^2-p)*x^2 + 2*p*q*x + (q^2-q)", &vars).unwrap();
    assert_eq!(got, want);
}

#[test]
fn exact_divide_fixture() {
    let v = VarSet::new(vec!["x"]);
    let num = parse_poly("x^2 - 1", &v).unwrap();
    let den = parse_poly("x - 1", &v).unwrap();
    assert_eq!(exact_div(&num, &den).unwrap(), parse_poly("x + 1", &v).unwrap());
    let bad = parse_poly("x + 2", &v).unwrap();
    assert!(exact_div(&num, &bad).is_err());
}
