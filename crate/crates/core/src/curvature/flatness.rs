//! Sampling-based flatness certification with near-discriminant probing,
//! the homothety scaling identity for homogeneous webs, and the
//! line-product curvature expansion identity.

use num_complex::Complex64;
use num_traits::Zero;

use crate::foliation::sing::DualLine;
use crate::foliation::LineInPlane;
use crate::rng::SplitMix64;
use crate::webleg::{
    discriminant_structural, legendre, rotate_if_needed, StructuralComponent, WebError, WebSpec,
};

use super::{curvature_at, CurvatureSample, FanSignal, WebEval};

#[derive(Clone, Debug)]
pub struct FlatnessConfig {
    pub samples: usize,
    pub seed: u64,
    pub flat_tol: f64,
    pub nonflat_floor: f64,
    pub precision_bits: u32,
    /// Probe distances 1e-2 .. 1e-(1+decades).
    pub probe_decades: u32,
}

impl Default for FlatnessConfig {
    fn default() -> Self {
        FlatnessConfig {
            samples: 200,
            seed: 1_7320_5080,
            flat_tol: 1e-8,
            nonflat_floor: 1e-4,
            precision_bits: 53,
            probe_decades: 4,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum FlatStatus {
    FlatConsistent,
    NonFlat,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct ProbeRecord {
    pub component: String,
    pub distances: Vec<f64>,
    pub k_magnitudes: Vec<f64>,
    /// Cancellation floors per rung; a |K| below a few floors is noise.
    pub noise_floors: Vec<f64>,
    /// |K|/scale per rung, for the report.
    pub relative_magnitudes: Vec<f64>,
    /// Geometric-mean growth per decade of |K| across rungs where |K|
    /// stands above the noise floor; 1.0 when no trend is measurable.
    pub growth_per_decade: f64,
    /// Rung indices with |K| above the noise floor.
    pub signal_rungs: Vec<usize>,
}

impl ProbeRecord {
    /// Holomorphic-compatible: every above-floor rung stays within a
    /// factor of 3 of the first rung (or below the flat threshold).
    fn bounded(&self, flat_tol: f64, scale_ref: f64) -> bool {
        let base = self
            .k_magnitudes
            .first()
            .copied()
            .unwrap_or(0.0)
            .max(flat_tol * scale_ref);
        for &i in &self.signal_rungs {
            if self.k_magnitudes[i] > 3.0 * base {
                return false;
            }
        }
        true
    }

    fn pole_signature(&self, nonflat_floor: f64, scale_ref: f64) -> bool {
        if self.signal_rungs.len() < 2 {
            return false;
        }
        let last = *self.signal_rungs.last().unwrap();
        self.growth_per_decade >= 10.0 && self.k_magnitudes[last] > nonflat_floor * scale_ref
    }
}

#[derive(Debug)]
pub struct FlatnessVerdict {
    pub status: FlatStatus,
    pub samples: Vec<CurvatureSample>,
    pub probes: Vec<ProbeRecord>,
    pub flat_tol: f64,
    pub nonflat_floor: f64,
    pub seed: u64,
    pub precision_bits: u32,
    pub rotated: bool,
    pub notes: Vec<String>,
    /// Verdict-relevant summary counters.
    pub reliable_count: usize,
    pub max_relative_k: f64,
}

/// Reject points too close to a structural component or otherwise
/// degenerate for sampling.
fn far_from_components(components: &[StructuralComponent], p: Complex64, q: Complex64) -> bool {
    const REJECT: f64 = 0.02;
    for comp in components {
        match &comp.line {
            Some(DualLine::Affine(l)) => {
                let cp = crate::polycore::CPoly::from_mpoly(
                    &l.with_vars(&crate::webleg::dual_web_ring()),
                );
                let v = cp.eval(&[p, q, Complex64::zero()]).value;
                let g = l.max_coeff_abs().max(1e-12) * (1.0 + p.norm() + q.norm());
                if v.norm() / g < REJECT {
                    return false;
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
                if v.norm() / g < REJECT {
                    return false;
                }
            }
            _ => {}
        }
        for (cp_, cq) in &comp.cloud {
            if (cp_ - p).norm().hypot((cq - q).norm()) < REJECT {
                return false;
            }
        }
    }
    true
}

/// A deterministic generic point on a structural component, plus a unit
/// normal direction for the probe ladder.
fn probe_anchor(
    comp: &StructuralComponent,
    rng: &mut SplitMix64,
) -> Option<((Complex64, Complex64), (Complex64, Complex64))> {
    match &comp.line {
        Some(DualLine::Affine(l)) => {
            let ring = crate::webleg::dual_web_ring();
            let lp = l.with_vars(&ring);
            let cp = crate::polycore::CPoly::from_mpoly(&lp);
            // line c_p * p + c_q * q + c_0 = 0
            let pi = ring.index_of("p").unwrap();
            let qi = ring.index_of("q").unwrap();
            let zero = [Complex64::zero(); 3];
            let c0 = cp.eval(&zero).value;
            let mut ep = zero;
            ep[pi] = Complex64::new(1.0, 0.0);
            let c_p = cp.eval(&ep).value - c0;
            let mut eq = zero;
            eq[qi] = Complex64::new(1.0, 0.0);
            let c_q = cp.eval(&eq).value - c0;
            anchor_on_line(c_p, c_q, c0, rng)
        }
        Some(DualLine::FloatAffine {
            p_coeff,
            q_coeff,
            constant,
        }) => anchor_on_line(*p_coeff, *q_coeff, *constant, rng),
        Some(DualLine::ChartInfinity) => None,
        None => {
            if comp.cloud.is_empty() {
                return None;
            }
            let idx = (rng.next_u64() as usize) % comp.cloud.len();
            let (p0, q0) = comp.cloud[idx];
            let theta = rng.next_f64() * std::f64::consts::TAU;
            Some((
                (p0, q0),
                (
                    Complex64::from_polar(1.0, theta),
                    Complex64::from_polar(1.0, theta + 1.0),
                ),
            ))
        }
    }
}

fn anchor_on_line(
    c_p: Complex64,
    c_q: Complex64,
    c_0: Complex64,
    rng: &mut SplitMix64,
) -> Option<((Complex64, Complex64), (Complex64, Complex64))> {
    let n = c_p.norm().hypot(c_q.norm());
    if n < 1e-12 {
        return None;
    }
    // generic point: pick the free coordinate, solve the other
    let t = Complex64::new(
        0.6 + 0.2 * rng.next_f64(),
        0.3 + 0.2 * rng.next_f64(),
    );
    let (p0, q0) = if c_q.norm() >= c_p.norm() {
        (t, -(c_p * t + c_0) / c_q)
    } else {
        (-(c_q * t + c_0) / c_p, t)
    };
    // normal direction in (p, q): conjugate gradient, normalized
    let np = c_p.conj() / n;
    let nq = c_q.conj() / n;
    Some(((p0, q0), (np, nq)))
}

/// Flatness of the Legendre transform of a web, by generic sampling away
/// from the discriminant plus probe ladders toward each structural
/// component. The verdict is three-valued; thresholds come pinned in the
/// config.
pub fn flatness_test(web: &WebSpec, config: &FlatnessConfig) -> Result<FlatnessVerdict, WebError> {
    let mut notes = Vec::new();
    let (web, rotation) = rotate_if_needed(web, config.seed)?;
    if rotation.is_some() {
        notes.push("applied an exact projective rotation for vertical members".to_string());
    }
    let dual = legendre(&web)?;
    let report = discriminant_structural(&web, config.seed)?;
    if report.partial {
        notes.push("discriminant report is partial (unclassified singularities)".to_string());
    }
    let eval = WebEval::from_dual(&dual);
    let extended = config.precision_bits > 53;

    let mut rng = SplitMix64::new(config.seed);
    let mut samples: Vec<CurvatureSample> = Vec::new();
    let mut attempts = 0usize;
    let max_attempts = config.samples * 60 + 1000;
    while samples.len() < config.samples && attempts < max_attempts {
        attempts += 1;
        let p = Complex64::new(rng.next_symmetric(1.5), rng.next_symmetric(1.5));
        let q = Complex64::new(rng.next_symmetric(1.5), rng.next_symmetric(1.5));
        if !far_from_components(&report.components, p, q) {
            continue;
        }
        match curvature_at(&eval, p, q, config.seed ^ samples.len() as u64, extended) {
            Ok(sample) => samples.push(sample),
            Err(FanSignal::DegreeDrop | FanSignal::NearDiscriminant { .. }) => continue,
            Err(FanSignal::Unresolved(msg)) => {
                notes.push(format!("unresolved sample at ({p}, {q}): {msg}"));
            }
        }
    }

    let reliable: Vec<&CurvatureSample> = samples.iter().filter(|s| s.reliable).collect();
    let reliable_count = reliable.len();
    let max_relative_k = reliable
        .iter()
        .map(|s| s.k.norm() / s.scale.max(1e-300))
        .fold(0.0f64, f64::max);

    // Probe ladders toward each structural component.
    let mut probes = Vec::new();
    let mut probe_rng = SplitMix64::new(config.seed ^ 0x9b0b
    );
    for comp in &report.components {
        let mut distances = Vec::new();
        let mut k_mags = Vec::new();
        let mut floors = Vec::new();
        let mut rel_mags = Vec::new();
        // Retry with fresh anchor points when rungs fail to resolve.
        for _anchor_attempt in 0..3 {
            let Some(((p0, q0), (np, nq))) = probe_anchor(comp, &mut probe_rng) else {
                break;
            };
            distances.clear();
            k_mags.clear();
            floors.clear();
            rel_mags.clear();
            for decade in 0..config.probe_decades {
                let dist = 10f64.powi(-(2 + decade as i32));
                let p = p0 + np * dist;
                let q = q0 + nq * dist;
                // near-discriminant probes run in extended precision
                match curvature_at(&eval, p, q, config.seed ^ 0xdeca ^ decade as u64, true) {
                    Ok(s) => {
                        distances.push(dist);
                        k_mags.push(s.k.norm());
                        floors.push(s.noise_floor);
                        rel_mags.push(s.k.norm() / s.scale.max(1e-300));
                    }
                    Err(_) => {
                        // cluster too tight at this distance; skip the rung
                    }
                }
            }
            if distances.len() >= 2 {
                break;
            }
        }
        if distances.len() >= 2 {
            let signal_rungs: Vec<usize> = (0..k_mags.len())
                .filter(|&i| k_mags[i] > 10.0 * floors[i])
                .collect();
            let growth = if signal_rungs.len() >= 2 {
                let first = signal_rungs[0];
                let last = *signal_rungs.last().unwrap();
                let decades = (distances[first] / distances[last]).log10();
                (k_mags[last].max(1e-300) / k_mags[first].max(1e-300))
                    .powf(1.0 / decades.max(1e-9))
            } else {
                1.0
            };
            probes.push(ProbeRecord {
                component: comp.provenance.clone(),
                distances,
                k_magnitudes: k_mags,
                noise_floors: floors,
                relative_magnitudes: rel_mags,
                growth_per_decade: growth,
                signal_rungs,
            });
        }
    }

    // Verdict. Probe trends are judged against each rung's cancellation
    // floor and a reference scale from the generic samples.
    let scale_ref = {
        let mut scales: Vec<f64> = reliable.iter().map(|s| s.scale).collect();
        scales.sort_by(|a, b| a.partial_cmp(b).unwrap());
        scales.get(scales.len() / 2).copied().unwrap_or(1.0).max(1e-300)
    };
    let min_reliable = (config.samples / 2).max(8).min(config.samples);
    let witness = reliable
        .iter()
        .find(|s| s.k.norm() > config.nonflat_floor * s.scale.max(1e-300));
    let pole = probes
        .iter()
        .find(|p| p.pole_signature(config.nonflat_floor, scale_ref));
    let all_small = reliable
        .iter()
        .all(|s| s.k.norm() < config.flat_tol * s.scale.max(1e-300));
    let probes_bounded = probes
        .iter()
        .all(|p| p.bounded(config.flat_tol, scale_ref));

    let status = if witness.is_some() || pole.is_some() {
        FlatStatus::NonFlat
    } else if reliable_count < min_reliable {
        notes.push(format!(
            "only {reliable_count} reliable samples of {} requested",
            config.samples
        ));
        FlatStatus::Inconclusive
    } else if all_small && probes_bounded {
        FlatStatus::FlatConsistent
    } else {
        FlatStatus::Inconclusive
    };

    Ok(FlatnessVerdict {
        status,
        samples,
        probes,
        flat_tol: config.flat_tol,
        nonflat_floor: config.nonflat_floor,
        seed: config.seed,
        precision_bits: config.precision_bits,
        rotated: rotation.is_some(),
        notes,
        reliable_count,
        max_relative_k,
    })
}

/// Curvature of the dual web at one dual-chart point, by a fresh Legendre
/// transform. Webs with fewer than three directions have zero curvature by
/// convention.
pub fn curvature_of_web_at(
    web: &WebSpec,
    p: Complex64,
    q: Complex64,
    seed: u64,
) -> Result<CurvatureSample, WebError> {
    let dual = legendre(web)?;
    let eval = WebEval::from_dual(&dual);
    curvature_at(&eval, p, q, seed, false).map_err(|e| {
        WebError::Foliation(crate::foliation::FoliationError::Other(format!(
            "curvature sample failed: {e:?}"
        )))
    })
}

/// Homothety identity for webs of homogeneous members (and lines through
/// the origin): in the chart (a, b) of lines {a x + b y = 1}, the
/// curvature coefficient satisfies lambda^2 kappa(a, b) =
/// kappa(a/lambda, b/lambda). Returns the relative error at one point.
///
/// Chart change: (p, q) = (-a/b, 1/b) and kappa_ab = q^3 kappa_pq.
pub fn homothety_scaling_check(
    web: &WebSpec,
    a: Complex64,
    b: Complex64,
    lambda: f64,
    seed: u64,
) -> Result<f64, WebError> {
    for fol in &web.foliations {
        if !fol.is_homogeneous_field() {
            return Err(WebError::Foliation(crate::foliation::FoliationError::Other(
                "homothety check requires homogeneous members".into(),
            )));
        }
    }
    for line in &web.lines {
        let c = line.coeffs();
        if !c[2].is_zero() {
            return Err(WebError::Foliation(crate::foliation::FoliationError::Other(
                "homothety check requires lines through the origin".into(),
            )));
        }
        if c[1].is_zero() {
            return Err(WebError::VerticalPencil);
        }
    }
    if b.norm() < 1e-6 {
        return Err(WebError::Foliation(crate::foliation::FoliationError::Other(
            "chart conversion degenerate near b = 0; resample".into(),
        )));
    }
    let lam = Complex64::new(lambda, 0.0);
    let p = -a / b;
    let q1 = b.inv();
    let q2 = lam * q1;
    // Same seed for both: at lambda = 1 the two evaluations coincide
    // bitwise and the reported error is exactly zero.
    let s1 = curvature_of_web_at(web, p, q1, seed)?;
    let s2 = curvature_of_web_at(web, p, q2, seed)?;
    let kab1 = s1.k * q1.powu(3);
    let kab2 = s2.k * q2.powu(3);
    let lhs = lam * lam * kab1;
    let scale = lhs
        .norm()
        .max(kab2.norm())
        .max(lam.norm().powi(2) * s1.scale * q1.norm().powi(3))
        .max(s2.scale * q2.norm().powi(3))
        .max(1e-300);
    Ok((lhs - kab2).norm() / scale)
}

/// Both sides of the line-product curvature expansion
///
///   K(W' x W'') = K(W') - (k-2) sum_i K(Leg l_i x W'')
///                 + sum_{i<j} K(Leg l_i x Leg l_j x W'')
///                 + C(k-1, 2) K(W'')
///
/// where W' is the dual of the k lines and W'' the dual of `rest`; each
/// term is evaluated from its own freshly built web. Returns the relative
/// residual at the point.
pub fn curvature_expansion_check(
    lines: &[LineInPlane],
    rest: &WebSpec,
    p: Complex64,
    q: Complex64,
    seed: u64,
) -> Result<f64, WebError> {
    let t = curvature_expansion_terms(lines, rest, p, q, seed)?;
    Ok(t.residual())
}

/// Both sides of the expansion as separately evaluated terms, so tests can
/// corrupt one sub-evaluation and watch the residual blow up.
#[derive(Clone, Debug)]
pub struct ExpansionTerms {
    pub lhs: Complex64,
    pub k_lines: Complex64,
    pub s1: Complex64,
    pub s2: Complex64,
    pub k_rest: Complex64,
    pub line_count: usize,
    pub scale: f64,
}

impl ExpansionTerms {
    pub fn rhs(&self) -> Complex64 {
        let k = self.line_count as f64;
        let binom = ((self.line_count as i64 - 1) * (self.line_count as i64 - 2) / 2) as f64;
        self.k_lines - (k - 2.0) * self.s1 + self.s2 + binom * self.k_rest
    }

    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs()).norm() / self.scale.max(self.lhs.norm())
    }
}

pub fn curvature_expansion_terms(
    lines: &[LineInPlane],
    rest: &WebSpec,
    p: Complex64,
    q: Complex64,
    seed: u64,
) -> Result<ExpansionTerms, WebError> {
    let k = lines.len();
    let full = {
        let mut ls = rest.lines.clone();
        ls.extend(lines.iter().cloned());
        WebSpec::new(ls, rest.foliations.clone())?
    };
    let lhs_sample = curvature_of_web_at(&full, p, q, seed)?;
    let lhs = lhs_sample.k;
    let scale = lhs_sample.scale.max(1e-300);

    let k_of = |web: &WebSpec, salt: u64| -> Result<Complex64, WebError> {
        if web.direction_count() < 3 {
            return Ok(Complex64::zero());
        }
        Ok(curvature_of_web_at(web, p, q, seed ^ salt)?.k)
    };

    // K(W'): the k lines alone.
    let k_lines = if k >= 1 {
        k_of(&WebSpec::new(lines.to_vec(), vec![])?, 0x100)?
    } else {
        Complex64::zero()
    };
    // K(W'')
    let k_rest = k_of(rest, 0x200)?;
    // sum_i K(Leg l_i x W'')
    let mut s1 = Complex64::zero();
    for (i, line) in lines.iter().enumerate() {
        let mut ls = rest.lines.clone();
        ls.push(line.clone());
        let web = WebSpec::new(ls, rest.foliations.clone())?;
        s1 += k_of(&web, 0x300 + i as u64)?;
    }
    // sum_{i<j} K(Leg l_i x Leg l_j x W'')
    let mut s2 = Complex64::zero();
    for i in 0..k {
        for j in i + 1..k {
            let mut ls = rest.lines.clone();
            ls.push(lines[i].clone());
            ls.push(lines[j].clone());
            let web = WebSpec::new(ls, rest.foliations.clone())?;
            s2 += k_of(&web, 0x400 + (i * 31 + j) as u64)?;
        }
    }
    Ok(ExpansionTerms {
        lhs,
        k_lines,
        s1,
        s2,
        k_rest,
        line_count: k,
        scale,
    })
}
