//! Elimination primitives: exact division, subresultant resultants,
//! multivariate gcd, content, squarefree parts, discriminants.
//!
//! Resultants run the subresultant polynomial remainder sequence with the
//! polynomial treated as univariate in the eliminated variable and
//! coefficients in the remaining ones; this keeps coefficient growth under
//! control at the degrees this crate works at.

use thiserror::Error;

use super::mpoly::{MPoly, VarSet};
use super::scalar::GaussRat;

#[derive(Debug, Error)]
pub enum ElimError {
    #[error("exact division failed: nonzero remainder `{remainder}`")]
    NotDivisible { remainder: MPoly },
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("variable `{0}` does not occur in either input")]
    VariableAbsent(String),
    #[error("polynomial is constant in `{0}`")]
    ConstantIn(String),
}

/// Exact multivariate division; errors with the remainder when `num` is not
/// a multiple of `den`.
pub fn exact_div(num: &MPoly, den: &MPoly) -> Result<MPoly, ElimError> {
    if den.is_zero() {
        return Err(ElimError::DivisionByZero);
    }
    let vars = num.vars().clone();
    let mut rem = num.clone();
    let mut quot = MPoly::zero(&vars);
    let (dm, dc) = {
        let (m, c) = den.leading().expect("nonzero divisor");
        (m.clone(), c.clone())
    };
    while let Some((rm, rc)) = rem.leading() {
        let Some(q_mono) = rm.try_div(&dm) else {
            return Err(ElimError::NotDivisible { remainder: rem });
        };
        let q_coeff = rc / &dc;
        let t = MPoly::from_terms(&vars, vec![(q_mono.exps().to_vec(), q_coeff)]);
        rem = rem.sub(&t.mul(den));
        quot = quot.add(&t);
    }
    Ok(quot)
}

pub fn divides(den: &MPoly, num: &MPoly) -> bool {
    exact_div(num, den).is_ok()
}

/// Pseudo-remainder of `a` by `b` as dense coefficient vectors:
/// `lc(b)^(da-db+1) * a = q*b + prem`. The trailing power correction keeps
/// the exact normalization the subresultant chain divides by, even when a
/// reduction step drops the degree by more than one.
fn pseudo_rem(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let db = b.len() - 1;
    let da = a.len() - 1;
    debug_assert!(db >= 1 && da >= db);
    let lc_b = &b[db];
    let mut r: Vec<MPoly> = a.to_vec();
    let mut steps = 0u32;
    while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        let lead = r[dr].clone();
        // r := lc_b * r - lead * x^(dr-db) * b
        for c in r.iter_mut() {
            *c = c.mul(lc_b);
        }
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            let t = bc.mul(&lead);
            r[shift + i] = r[shift + i].sub(&t);
        }
        steps += 1;
        while r.len() > 1 && r.last().map_or(false, |c| c.is_zero()) {
            r.pop();
        }
    }
    let target = (da - db + 1) as u32;
    if steps < target {
        let extra = lc_b.pow(target - steps);
        for c in r.iter_mut() {
            *c = c.mul(&extra);
        }
    }
    r
}

fn to_coeffs(f: &MPoly, var: usize) -> Vec<MPoly> {
    let mut cs = f.coeffs_in(var);
    while cs.len() > 1 && cs.last().map_or(false, |c| c.is_zero()) {
        cs.pop();
    }
    cs
}

/// Classical resultant eliminating `var`, by the subresultant PRS.
/// Zero iff the inputs share a factor involving `var`.
pub fn resultant(f: &MPoly, g: &MPoly, var: usize) -> Result<MPoly, ElimError> {
    let vars = f.vars().clone();
    if f.degree_in(var) == 0 && g.degree_in(var) == 0 {
        return Err(ElimError::VariableAbsent(vars.names()[var].clone()));
    }
    if f.is_zero() || g.is_zero() {
        return Ok(MPoly::zero(&vars));
    }
    let mut a = to_coeffs(f, var);
    let mut b = to_coeffs(g, var);
    let mut sign_neg = false;
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
        if (a.len() - 1) % 2 == 1 && (b.len() - 1) % 2 == 1 {
            sign_neg = !sign_neg;
        }
    }
    // deg b == 0: Res = lc(b)^deg(a) with b constant in var.
    if b.len() == 1 {
        let da = (a.len() - 1) as u32;
        if da == 0 {
            // both constant in var was rejected above unless one is zero
            return Ok(MPoly::one(&vars));
        }
        let r = b[0].pow(da);
        return Ok(if sign_neg { r.neg() } else { r });
    }

    let one = MPoly::one(&vars);
    let mut g_scale = one.clone();
    let mut h_scale = one.clone();
    let mut res_sign_neg = sign_neg;
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            res_sign_neg = !res_sign_neg;
        }
        let mut r = pseudo_rem(&a, &b);
        if r.len() == 1 && r[0].is_zero() {
            return Ok(MPoly::zero(&vars));
        }
        // divisor g * h^delta is an exact divisor of every coefficient
        let divisor = g_scale.mul(&h_scale.pow(delta));
        for c in r.iter_mut() {
            *c = exact_div(c, &divisor)?;
        }
        a = b;
        b = r;
        g_scale = a.last().expect("nonzero").clone();
        h_scale = if delta == 0 {
            h_scale
        } else {
            // h := g^delta * h^(1-delta), fraction-free
            exact_div(&g_scale.pow(delta), &h_scale.pow(delta - 1))?
        };
        if b.len() == 1 {
            // deg b == 0: res = h^(1-da') * b^(da') with da' = deg a
            let da2 = (a.len() - 1) as u32;
            let num = b[0].pow(da2);
            let res = if da2 == 0 {
                num
            } else {
                exact_div(&num, &h_scale.pow(da2 - 1))?
            };
            return Ok(if res_sign_neg { res.neg() } else { res });
        }
    }
}

/// Discriminant in `var`: `(-1)^(n(n-1)/2) * Res(f, f_var) / lc_var(f)`.
pub fn discriminant_in(f: &MPoly, var: usize) -> Result<MPoly, ElimError> {
    let n = f.degree_in(var);
    if n == 0 {
        return Err(ElimError::ConstantIn(f.vars().names()[var].clone()));
    }
    let df = f.derivative(var);
    let res = resultant(f, &df, var)?;
    if res.is_zero() {
        return Ok(res);
    }
    let lc = f.leading_coeff_in(var);
    let q = exact_div(&res, &lc)?;
    Ok(if (n as u64) * ((n as u64) - 1) / 2 % 2 == 1 {
        q.neg()
    } else {
        q
    })
}

/// Scalar-coefficient gcd is trivial over a field; multivariate gcd works
/// recursively: content/primitive split in a main variable, subresultant PRS
/// on the primitive parts.
pub fn gcd(f: &MPoly, g: &MPoly) -> MPoly {
    let vars = f.vars().clone();
    if f.is_zero() {
        return g.unit_normal();
    }
    if g.is_zero() {
        return f.unit_normal();
    }
    let used: Vec<usize> = {
        let mut u = f.used_vars();
        for v in g.used_vars() {
            if !u.contains(&v) {
                u.push(v);
            }
        }
        u
    };
    // Main variable: occurs in both if possible, else gcd is over a split.
    let both: Vec<usize> = used
        .iter()
        .copied()
        .filter(|&v| f.degree_in(v) > 0 && g.degree_in(v) > 0)
        .collect();
    let Some(&var) = both.iter().min_by_key(|&&v| f.degree_in(v).min(g.degree_in(v))) else {
        // No variable occurs in both: over a coefficient field the gcd is 1.
        return MPoly::one(&vars);
    };

    let (cf, pf) = content_primitive_in(f, var);
    let (cg, pg) = content_primitive_in(g, var);
    let content_gcd = gcd(&cf, &cg);

    let prim_gcd = primitive_prs_gcd(&pf, &pg, var, &vars);
    content_gcd.mul(&prim_gcd).unit_normal()
}

/// Content (gcd of coefficients) and primitive part of `f` in `var`.
pub fn content_primitive_in(f: &MPoly, var: usize) -> (MPoly, MPoly) {
    let coeffs = to_coeffs(f, var);
    let mut c = MPoly::zero(f.vars());
    for co in &coeffs {
        if co.is_zero() {
            continue;
        }
        c = gcd(&c, co);
        if c.is_constant() {
            break;
        }
    }
    if c.is_zero() {
        return (MPoly::zero(f.vars()), MPoly::zero(f.vars()));
    }
    let p = exact_div(f, &c).expect("content divides");
    (c, p)
}

fn primitive_prs_gcd(pf: &MPoly, pg: &MPoly, var: usize, vars: &VarSet) -> MPoly {
    let mut a = to_coeffs(pf, var);
    let mut b = to_coeffs(pg, var);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    if b.len() == 1 {
        // primitive and constant in var => unit
        return MPoly::one(vars);
    }
    let one = MPoly::one(vars);
    let mut g_scale = one.clone();
    let mut h_scale = one;
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        let delta = (da - db) as u32;
        let mut r = pseudo_rem(&a, &b);
        if r.len() == 1 && r[0].is_zero() {
            // gcd is the primitive part of b
            let bp = MPoly::from_coeffs_in(vars, var, &b);
            let (_, prim) = content_primitive_in(&bp, var);
            return prim;
        }
        let divisor = g_scale.mul(&h_scale.pow(delta));
        for c in r.iter_mut() {
            *c = exact_div(c, &divisor).expect("subresultant divisor divides");
        }
        a = b;
        b = r;
        g_scale = a.last().expect("nonzero").clone();
        h_scale = if delta == 0 {
            h_scale
        } else {
            exact_div(&g_scale.pow(delta), &h_scale.pow(delta - 1))
                .expect("subresultant scale divides")
        };
        if b.len() == 1 {
            // last nonzero remainder constant in var: primitive gcd is a unit
            return MPoly::one(vars);
        }
    }
}

pub fn gcd_many(polys: &[&MPoly]) -> MPoly {
    assert!(!polys.is_empty());
    let mut acc = polys[0].clone();
    for p in &polys[1..] {
        if acc.is_constant() && !acc.is_zero() {
            break;
        }
        acc = gcd(&acc, p);
    }
    acc.unit_normal()
}

/// Squarefree part: `f / gcd(f, df/dx1, ..., df/dxn)`, unit-normalized.
pub fn squarefree_part(f: &MPoly) -> MPoly {
    if f.is_zero() || f.is_constant() {
        return f.unit_normal();
    }
    let mut g = f.clone();
    for v in f.used_vars() {
        g = gcd(&g, &f.derivative(v));
        if g.is_constant() {
            break;
        }
    }
    exact_div(f, &g).expect("gcd divides").unit_normal()
}

/// True iff no repeated factor: gcd(f, all partials) is constant.
pub fn is_squarefree(f: &MPoly) -> bool {
    if f.is_zero() {
        return false;
    }
    if f.is_constant() {
        return true;
    }
    let mut g = f.clone();
    for v in f.used_vars() {
        g = gcd(&g, &f.derivative(v));
        if g.is_constant() {
            return true;
        }
    }
    g.is_constant()
}

/// Maximal e with `den^e | num`; also returns `num / den^e`.
pub fn divide_out_maximal(num: &MPoly, den: &MPoly) -> (MPoly, u32) {
    assert!(!den.is_constant(), "divisor must be nonconstant");
    let mut n = num.clone();
    let mut e = 0;
    loop {
        match exact_div(&n, den) {
            Ok(q) => {
                n = q;
                e += 1;
            }
            Err(_) => return (n, e),
        }
    }
}

/// Split a polynomial into blocks by iterated content extraction across all
/// variables. Each returned block has trivial content in every variable; a
/// product of factors living in different variable subsets separates.
pub fn split_variable_blocks(f: &MPoly) -> Vec<MPoly> {
    let mut queue = vec![f.clone()];
    let mut out = Vec::new();
    'next: while let Some(p) = queue.pop() {
        if p.is_constant() {
            continue;
        }
        for v in p.used_vars() {
            let (c, prim) = content_primitive_in(&p, v);
            if !c.is_constant() {
                queue.push(c);
                queue.push(prim);
                continue 'next;
            }
        }
        out.push(p.unit_normal());
    }
    out.sort_by(|a, b| a.to_string().cmp(&b.to_string()));
    out
}

/// Constant polynomial as a scalar, when it is one.
pub fn as_constant(f: &MPoly) -> Option<GaussRat> {
    if f.is_constant() {
        Some(f.constant_term())
    } else {
        None
    }
}
