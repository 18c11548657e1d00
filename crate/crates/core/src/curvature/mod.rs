//! Numerical curvature of dual webs.
//!
//! At a base point (p, q) off the discriminant, the web splits into
//! deg_x(F) local foliations with slopes m_i = dq/dp = -x_i, the x_i being
//! the roots of the implicit polynomial. For a 3-subweb {i, j, k} the
//! connection form eta = A dp + B dq solves
//!
//!   A + B*m_t = (d_p delta_rs + m_t d_q delta_rs)/delta_rs + d_q m_t
//!
//! for each assignment with {r, s} = {i, j, k} minus {t} and
//! delta_rs = m_s - m_r; the 3-subweb curvature is K_ijk = d_p B - d_q A,
//! and the web curvature is the sum over all 3-subsets.
//!
//! Slope derivatives come from exact implicit differentiation of the
//! defining factor, carried as second-order jets; d_p B - d_q A is then a
//! first-order jet computation. The pipeline is generic over the working
//! scalar: f64 complexes for generic samples, paired-limb complexes for
//! near-discriminant probes, where the 3-subweb summands blow up and the
//! cancellation needs the extra headroom. Every f64 sample is additionally
//! cross-validated by Richardson-extrapolated finite differences of the
//! eta sums.

pub mod flatness;

use num_complex::Complex64;
use num_traits::Zero;

use crate::polycore::dd::{CScalar, Cdd};
use crate::polycore::roots::{all_roots, polish_dd, polish_root_dd, refine_tracked, relative_residual};
use crate::polycore::{CPoly, MPoly};
use crate::webleg::{dual_web_ring, DualWeb, ImplicitWeb, MemberTag};

pub use flatness::{
    curvature_expansion_check, curvature_expansion_terms, curvature_of_web_at, flatness_test,
    homothety_scaling_check, ExpansionTerms, FlatStatus, FlatnessConfig, FlatnessVerdict,
    ProbeRecord,
};

const ROOT_RESIDUAL_TOL: f64 = 1e-12;
pub const CLUSTER_TOL: f64 = 1e-6;
const ETA_CONSISTENCY_TOL: f64 = 1e-9;
const FD_AGREE_TOL: f64 = 1e-6;

/// Value with first-order (p, q) derivatives.
#[derive(Copy, Clone, Debug)]
struct Jet1<S: CScalar> {
    v: S,
    dp: S,
    dq: S,
}

impl<S: CScalar> Jet1<S> {
    fn add(self, o: Jet1<S>) -> Jet1<S> {
        Jet1 {
            v: self.v + o.v,
            dp: self.dp + o.dp,
            dq: self.dq + o.dq,
        }
    }
    fn sub(self, o: Jet1<S>) -> Jet1<S> {
        Jet1 {
            v: self.v - o.v,
            dp: self.dp - o.dp,
            dq: self.dq - o.dq,
        }
    }
    fn mul(self, o: Jet1<S>) -> Jet1<S> {
        Jet1 {
            v: self.v * o.v,
            dp: self.dp * o.v + self.v * o.dp,
            dq: self.dq * o.v + self.v * o.dq,
        }
    }
    fn div(self, o: Jet1<S>) -> Jet1<S> {
        let v = self.v / o.v;
        Jet1 {
            v,
            dp: (self.dp - v * o.dp) / o.v,
            dq: (self.dq - v * o.dq) / o.v,
        }
    }
}

/// Slope with first and second (p, q) partials.
#[derive(Copy, Clone, Debug)]
pub struct SlopeJet<S: CScalar> {
    pub m: S,
    pub mp: S,
    pub mq: S,
    pub mpp: S,
    pub mpq: S,
    pub mqq: S,
}

impl<S: CScalar> SlopeJet<S> {
    fn value_jet(&self) -> Jet1<S> {
        Jet1 {
            v: self.m,
            dp: self.mp,
            dq: self.mq,
        }
    }
    fn dq_jet(&self) -> Jet1<S> {
        Jet1 {
            v: self.mq,
            dp: self.mpq,
            dq: self.mqq,
        }
    }
}

/// Evaluator for one dual factor: the polynomial and its nine partials as
/// float shadows.
pub struct FactorEval {
    pub tag: Option<MemberTag>,
    f: CPoly,
    fp: CPoly,
    fq: CPoly,
    fx: CPoly,
    fpp: CPoly,
    fpq: CPoly,
    fqq: CPoly,
    fpx: CPoly,
    fqx: CPoly,
    fxx: CPoly,
    pub deg_x: u32,
    coeff_scale: f64,
}

impl FactorEval {
    fn new(tag: Option<MemberTag>, poly: &MPoly) -> FactorEval {
        let ring = dual_web_ring();
        let pi = ring.index_of("p").unwrap();
        let qi = ring.index_of("q").unwrap();
        let xi = ring.index_of("x").unwrap();
        let p = poly.with_vars(&ring);
        let dp = p.derivative(pi);
        let dq = p.derivative(qi);
        let dx = p.derivative(xi);
        FactorEval {
            tag,
            f: CPoly::from_mpoly(&p),
            fp: CPoly::from_mpoly(&dp),
            fq: CPoly::from_mpoly(&dq),
            fx: CPoly::from_mpoly(&dx),
            fpp: CPoly::from_mpoly(&dp.derivative(pi)),
            fpq: CPoly::from_mpoly(&dp.derivative(qi)),
            fqq: CPoly::from_mpoly(&dq.derivative(qi)),
            fpx: CPoly::from_mpoly(&dp.derivative(xi)),
            fqx: CPoly::from_mpoly(&dq.derivative(xi)),
            fxx: CPoly::from_mpoly(&dx.derivative(xi)),
            deg_x: p.degree_in(xi),
            coeff_scale: p.max_coeff_abs().max(1.0),
        }
    }

    fn uni_coeffs(&self, p: Complex64, q: Complex64) -> Vec<Complex64> {
        let ring = dual_web_ring();
        let xi = ring.index_of("x").unwrap();
        self.f.univariate_at(xi, &[p, q, Complex64::zero()])
    }

    fn uni_coeffs_dd(&self, p: Complex64, q: Complex64) -> Vec<Cdd> {
        let ring = dual_web_ring();
        let xi = ring.index_of("x").unwrap();
        self.f
            .univariate_at_dd(xi, &[Cdd::from_c64(p), Cdd::from_c64(q), Cdd::ZERO])
    }
}

/// Evaluator for a full dual web.
pub struct WebEval {
    pub factors: Vec<FactorEval>,
    pub deg_x: u32,
}

impl WebEval {
    pub fn from_dual(dual: &DualWeb) -> WebEval {
        let factors: Vec<FactorEval> = dual
            .factors
            .iter()
            .map(|(tag, f)| FactorEval::new(Some(*tag), f))
            .collect();
        WebEval {
            deg_x: dual.implicit.degree_in_slope,
            factors,
        }
    }

    pub fn from_implicit(web: &ImplicitWeb) -> WebEval {
        let f = FactorEval::new(None, &web.poly);
        WebEval {
            deg_x: f.deg_x,
            factors: vec![f],
        }
    }
}

/// Non-fatal sampling signals.
#[derive(Clone, Debug, PartialEq)]
pub enum FanSignal {
    /// Leading x-coefficient vanished at the point: resample.
    DegreeDrop,
    /// Roots closer than the cluster tolerance: near the discriminant.
    NearDiscriminant { separation: f64 },
    /// Root refinement failed the residual certificate.
    Unresolved(String),
}

#[derive(Clone, Debug)]
pub struct SlopeFan<S: CScalar> {
    pub p: Complex64,
    pub q: Complex64,
    pub slopes: Vec<SlopeJet<S>>,
    /// x-roots, aligned with slopes (m = -x).
    pub roots: Vec<Complex64>,
    /// Which member each direction belongs to, aligned with slopes.
    pub members: Vec<Option<MemberTag>>,
    pub residuals: Vec<f64>,
    pub min_separation: f64,
    /// Max mismatch of the per-factor root-sum identity.
    pub root_sum_error: f64,
}

/// All slopes with first and second partials at a base point. The roots
/// come from the f64 simultaneous iteration; in extended mode they are
/// polished in paired-limb arithmetic and the jets evaluated there too.
pub fn slope_fan<S: CScalar>(
    web: &WebEval,
    p: Complex64,
    q: Complex64,
    seed: u64,
) -> Result<SlopeFan<S>, FanSignal> {
    let ring = dual_web_ring();
    let xi = ring.index_of("x").unwrap();
    let extended = S::EPS < 1e-20;
    let mut slopes = Vec::new();
    let mut roots_all: Vec<Complex64> = Vec::new();
    let mut members = Vec::new();
    let mut residuals = Vec::new();
    let mut root_sum_error = 0.0f64;
    let ps = S::from_c64(p);
    let qs = S::from_c64(q);
    for factor in &web.factors {
        let coeffs = factor.uni_coeffs(p, q);
        let coeff_mag: f64 = coeffs.iter().map(|c| c.norm()).sum::<f64>().max(1e-300);
        let lead = coeffs.last().copied().unwrap_or_else(Complex64::zero);
        if coeffs.len() as u32 != factor.deg_x + 1 || lead.norm() < 1e-12 * coeff_mag {
            return Err(FanSignal::DegreeDrop);
        }
        let rs = all_roots(&coeffs, seed);
        let mut roots = rs.roots;
        // Extended mode re-extracts the univariate coefficients in
        // paired-limb precision and polishes the roots there: the f64
        // coefficient rounding (otherwise O(eps / separation) in the root)
        // dominates near-discriminant jets.
        let coeffs_dd: Option<Vec<Cdd>> = if extended {
            Some(factor.uni_coeffs_dd(p, q))
        } else {
            None
        };
        let mut roots_s: Vec<S> = Vec::with_capacity(roots.len());
        for r in roots.iter_mut() {
            if let Some(cdd) = &coeffs_dd {
                let xd = polish_root_dd(cdd, Cdd::from_c64(*r));
                *r = xd.to_c64();
                roots_s.push(S::from_cdd(xd));
            } else {
                roots_s.push(S::from_c64(*r));
            }
            let res = relative_residual(&coeffs, *r);
            if res > ROOT_RESIDUAL_TOL {
                let polished = polish_dd(&coeffs, *r);
                let res2 = relative_residual(&coeffs, polished);
                if res2 > ROOT_RESIDUAL_TOL {
                    return Err(FanSignal::Unresolved(format!(
                        "root residual {res2:.3e} above certificate"
                    )));
                }
            }
        }
        // Root-sum identity: sum x_i = -c_{n-1}/c_n.
        if factor.deg_x >= 1 {
            let sum: Complex64 = roots.iter().sum();
            let expect = -coeffs[coeffs.len() - 2] / lead;
            let denom = 1.0 + expect.norm();
            root_sum_error = root_sum_error.max((sum - expect).norm() / denom);
        }
        for (&x, &xs) in roots.iter().zip(roots_s.iter()) {
            let pt = [ps, qs, xs];
            let gx = factor.fx.eval_scalar(&pt);
            let gp = factor.fp.eval_scalar(&pt);
            let gq = factor.fq.eval_scalar(&pt);
            if gx.norm() < 1e-10 * factor.coeff_scale * (1.0 + x.norm()).powi(factor.deg_x as i32)
            {
                return Err(FanSignal::NearDiscriminant {
                    separation: gx.norm(),
                });
            }
            let xp = -(gp / gx);
            let xq = -(gq / gx);
            let gpp = factor.fpp.eval_scalar(&pt);
            let gpq = factor.fpq.eval_scalar(&pt);
            let gqq = factor.fqq.eval_scalar(&pt);
            let gpx = factor.fpx.eval_scalar(&pt);
            let gqx = factor.fqx.eval_scalar(&pt);
            let gxx = factor.fxx.eval_scalar(&pt);
            // x_ab = -[(F_ab + F_ax x_b) F_x - F_a (F_bx + F_xx x_b)]/F_x^2
            let xpp = -(((gpp + gpx * xp) - gp / gx * (gpx + gxx * xp)) / gx);
            let xpq = -(((gpq + gpx * xq) - gp / gx * (gqx + gxx * xq)) / gx);
            let xqq = -(((gqq + gqx * xq) - gq / gx * (gqx + gxx * xq)) / gx);
            slopes.push(SlopeJet {
                m: -xs,
                mp: -xp,
                mq: -xq,
                mpp: -xpp,
                mpq: -xpq,
                mqq: -xqq,
            });
            roots_all.push(x);
            members.push(factor.tag);
            residuals.push(relative_residual(&coeffs, x));
        }
    }
    let _ = xi;
    // Pairwise separation across the whole fan.
    let mut min_sep = f64::INFINITY;
    for i in 0..roots_all.len() {
        for j in i + 1..roots_all.len() {
            let d = (roots_all[i] - roots_all[j]).norm()
                / (1.0 + roots_all[i].norm().max(roots_all[j].norm()));
            min_sep = min_sep.min(d);
        }
    }
    if min_sep < CLUSTER_TOL {
        return Err(FanSignal::NearDiscriminant {
            separation: min_sep,
        });
    }
    Ok(SlopeFan {
        p,
        q,
        slopes,
        roots: roots_all,
        members,
        residuals,
        min_separation: min_sep,
        root_sum_error,
    })
}

/// Eta form of one 3-subweb, with the redundant third equation evaluated
/// as a consistency residual.
#[derive(Clone, Debug)]
pub struct EtaForm {
    pub triple: (usize, usize, usize),
    pub a: Complex64,
    pub b: Complex64,
    pub a_dp: Complex64,
    pub a_dq: Complex64,
    pub b_dp: Complex64,
    pub b_dq: Complex64,
    pub consistency_residual: f64,
}

impl EtaForm {
    /// Coefficient of dp^dq in d(eta).
    pub fn k(&self) -> Complex64 {
        self.b_dp - self.a_dq
    }
}

fn rhs_jet<S: CScalar>(fan: &SlopeFan<S>, t: usize, r: usize, s: usize) -> Jet1<S> {
    let (mt, mr, ms) = (&fan.slopes[t], &fan.slopes[r], &fan.slopes[s]);
    // delta = m_s - m_r carried as a second-order jet
    let d = Jet1 {
        v: ms.m - mr.m,
        dp: ms.mp - mr.mp,
        dq: ms.mq - mr.mq,
    };
    let d_p = Jet1 {
        v: ms.mp - mr.mp,
        dp: ms.mpp - mr.mpp,
        dq: ms.mpq - mr.mpq,
    };
    let d_q = Jet1 {
        v: ms.mq - mr.mq,
        dp: ms.mpq - mr.mpq,
        dq: ms.mqq - mr.mqq,
    };
    d_p.add(mt.value_jet().mul(d_q)).div(d).add(mt.dq_jet())
}

pub fn eta_for_triple<S: CScalar>(fan: &SlopeFan<S>, i: usize, j: usize, k: usize) -> EtaForm {
    let rhs_i = rhs_jet(fan, i, j, k);
    let rhs_j = rhs_jet(fan, j, k, i);
    let rhs_k = rhs_jet(fan, k, i, j);
    let mi = fan.slopes[i].value_jet();
    let mj = fan.slopes[j].value_jet();
    let mk = fan.slopes[k].value_jet();
    // A + B m_i = rhs_i; A + B m_j = rhs_j
    let b = rhs_i.sub(rhs_j).div(mi.sub(mj));
    let a = rhs_i.sub(b.mul(mi));
    let scale = rhs_i
        .v
        .norm()
        .max(rhs_j.v.norm())
        .max(rhs_k.v.norm())
        .max(a.v.norm())
        .max((b.v * mk.v).norm())
        .max(1e-300);
    let consistency_residual = (a.v + b.v * mk.v - rhs_k.v).norm() / scale;
    EtaForm {
        triple: (i, j, k),
        a: a.v.to_c64(),
        b: b.v.to_c64(),
        a_dp: a.dp.to_c64(),
        a_dq: a.dq.to_c64(),
        b_dp: b.dp.to_c64(),
        b_dq: b.dq.to_c64(),
        consistency_residual,
    }
}

/// Value-level eta sums over all triples: (sum A, sum B) from slope values
/// and first partials only. Used by the finite-difference cross-validation.
fn eta_sums_values(ms: &[(Complex64, Complex64, Complex64)]) -> (Complex64, Complex64) {
    let n = ms.len();
    let mut sa = Complex64::zero();
    let mut sb = Complex64::zero();
    let rhs = |t: usize, r: usize, s: usize| -> Complex64 {
        let d = ms[s].0 - ms[r].0;
        let dp = ms[s].1 - ms[r].1;
        let dq = ms[s].2 - ms[r].2;
        (dp + ms[t].0 * dq) / d + ms[t].2
    };
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let ri = rhs(i, j, k);
                let rj = rhs(j, k, i);
                let b = (ri - rj) / (ms[i].0 - ms[j].0);
                let a = ri - b * ms[i].0;
                sa += a;
                sb += b;
            }
        }
    }
    (sa, sb)
}

/// First-order slope data at a stencil point, tracking roots from
/// predictions.
fn fan_values_at(
    web: &WebEval,
    p: Complex64,
    q: Complex64,
    predicted: &[(Option<MemberTag>, Complex64)],
) -> Option<Vec<(Complex64, Complex64, Complex64)>> {
    let mut out = Vec::with_capacity(predicted.len());
    let mut per_factor: Vec<Vec<Complex64>> = Vec::new();
    for factor in &web.factors {
        let coeffs = factor.uni_coeffs(p, q);
        let guesses: Vec<Complex64> = predicted
            .iter()
            .filter(|(tag, _)| *tag == factor.tag)
            .map(|(_, x)| *x)
            .collect();
        let (refined, residuals) = refine_tracked(&coeffs, &guesses);
        if residuals.iter().any(|r| *r > 1e-9) {
            return None;
        }
        per_factor.push(refined);
    }
    let mut idx = vec![0usize; web.factors.len()];
    for (tag, _) in predicted {
        let f = web
            .factors
            .iter()
            .position(|fa| fa.tag == *tag)
            .expect("tag present");
        let x = per_factor[f][idx[f]];
        idx[f] += 1;
        let factor = &web.factors[f];
        let pt = [p, q, x];
        let gx = factor.fx.eval(&pt).value;
        if gx.norm() == 0.0 {
            return None;
        }
        let gp = factor.fp.eval(&pt).value;
        let gq = factor.fq.eval(&pt).value;
        // m = -x, m_p = G_p/G_x, m_q = G_q/G_x
        out.push((-x, gp / gx, gq / gx));
    }
    Some(out)
}

#[derive(Clone, Debug)]
pub struct CurvatureSample {
    pub p: Complex64,
    pub q: Complex64,
    /// Sum over 3-subwebs of d(eta), coefficient of dp^dq.
    pub k: Complex64,
    /// Median |K_ijk| summand magnitude: the comparison scale.
    pub scale: f64,
    /// Cancellation floor of the summation: eps * sum |K_ijk| amplified by
    /// the slope-separation conditioning. A measured |K| below a few times
    /// this floor is indistinguishable from zero.
    pub noise_floor: f64,
    pub eta_residual_max: f64,
    /// |K_analytic - K_fd| / max(scale, |K|), when the FD route succeeded.
    pub fd_agreement: Option<f64>,
    pub reliable: bool,
    pub min_separation: f64,
    pub root_sum_error: f64,
}

fn curvature_core<S: CScalar>(fan: &SlopeFan<S>) -> (Complex64, f64, f64, f64) {
    let n = fan.slopes.len();
    let mut k = S::s_zero();
    let mut mags = Vec::new();
    let mut eta_residual_max = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            for kk in j + 1..n {
                let rhs_i = rhs_jet(fan, i, j, kk);
                let rhs_j = rhs_jet(fan, j, kk, i);
                let rhs_k = rhs_jet(fan, kk, i, j);
                let mi = fan.slopes[i].value_jet();
                let mj = fan.slopes[j].value_jet();
                let mk = fan.slopes[kk].value_jet();
                let b = rhs_i.sub(rhs_j).div(mi.sub(mj));
                let a = rhs_i.sub(b.mul(mi));
                let scale = rhs_i
                    .v
                    .norm()
                    .max(rhs_j.v.norm())
                    .max(rhs_k.v.norm())
                    .max(a.v.norm())
                    .max((b.v * mk.v).norm())
                    .max(1e-300);
                eta_residual_max =
                    eta_residual_max.max((a.v + b.v * mk.v - rhs_k.v).norm() / scale);
                let kijk = b.dp - a.dq;
                mags.push(kijk.norm());
                k = k + kijk;
            }
        }
    }
    if mags.is_empty() {
        return (Complex64::zero(), 0.0, 0.0, 0.0);
    }
    let mag_sum: f64 = mags.iter().sum();
    let cond = 1.0 + 1.0 / fan.min_separation.max(1e-12);
    let noise_floor = S::EPS * mag_sum * cond;
    mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let scale = mags[mags.len() / 2].max(1e-300);
    (k.to_c64(), scale, noise_floor, eta_residual_max)
}

/// Curvature at a point: analytic jets summed over all 3-subwebs, finite
/// differences as the cross-validator. `extended` switches the jet
/// pipeline to paired-limb arithmetic.
pub fn curvature_at(
    web: &WebEval,
    p: Complex64,
    q: Complex64,
    seed: u64,
    extended: bool,
) -> Result<CurvatureSample, FanSignal> {
    let (k, scale, noise_floor, eta_residual_max, fanstats) = if extended {
        let fan = slope_fan::<Cdd>(web, p, q, seed)?;
        let core = curvature_core(&fan);
        (
            core.0,
            core.1,
            core.2,
            core.3,
            (fan.min_separation, fan.root_sum_error, fan.members, fan.roots),
        )
    } else {
        let fan = slope_fan::<Complex64>(web, p, q, seed)?;
        let core = curvature_core(&fan);
        (
            core.0,
            core.1,
            core.2,
            core.3,
            (fan.min_separation, fan.root_sum_error, fan.members, fan.roots),
        )
    };
    let (min_separation, root_sum_error, members, roots) = fanstats;
    if roots.len() < 3 {
        return Ok(CurvatureSample {
            p,
            q,
            k: Complex64::zero(),
            scale: 0.0,
            noise_floor: 0.0,
            eta_residual_max: 0.0,
            fd_agreement: Some(0.0),
            reliable: true,
            min_separation,
            root_sum_error,
        });
    }

    // Finite-difference cross-validation with Richardson extrapolation.
    let h0 = 1e-4 * (1.0 + p.norm().max(q.norm()));
    let predicted: Vec<(Option<MemberTag>, Complex64)> =
        members.iter().cloned().zip(roots.iter().cloned()).collect();
    let fd = |h: f64| -> Option<Complex64> {
        let hp = Complex64::new(h, 0.0);
        let sum_at = |pp: Complex64, qq: Complex64| -> Option<(Complex64, Complex64)> {
            let vals = fan_values_at(web, pp, qq, &predicted)?;
            Some(eta_sums_values(&vals))
        };
        let (_, b_pp) = sum_at(p + hp, q)?;
        let (_, b_pm) = sum_at(p - hp, q)?;
        let (a_qp, _) = sum_at(p, q + hp)?;
        let (a_qm, _) = sum_at(p, q - hp)?;
        Some((b_pp - b_pm) / (2.0 * h) - (a_qp - a_qm) / (2.0 * h))
    };
    let fd_agreement = match (fd(h0), fd(h0 / 2.0)) {
        (Some(d1), Some(d2)) => {
            let richardson = (d2 * 4.0 - d1) / 3.0;
            Some((k - richardson).norm() / scale.max(k.norm()))
        }
        _ => None,
    };
    let reliable = root_sum_error < 1e-8
        && eta_residual_max < ETA_CONSISTENCY_TOL
        && matches!(fd_agreement, Some(a) if a < FD_AGREE_TOL);
    Ok(CurvatureSample {
        p,
        q,
        k,
        scale,
        noise_floor,
        eta_residual_max,
        fd_agreement,
        reliable,
        min_separation,
        root_sum_error,
    })
}

/// Curvature of the sub-web spanned by a subset of fan directions, from a
/// shared fan (used by regrouping identities).
pub fn curvature_of_subset<S: CScalar>(fan: &SlopeFan<S>, subset: &[usize]) -> Complex64 {
    let mut k = Complex64::zero();
    for a in 0..subset.len() {
        for b in a + 1..subset.len() {
            for c in b + 1..subset.len() {
                let eta = eta_for_triple(fan, subset[a], subset[b], subset[c]);
                k += eta.k();
            }
        }
    }
    k
}
