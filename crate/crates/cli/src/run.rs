//! Command execution and JSON report assembly.

use num_complex::Complex64;

use webflat_core::curvature::{flatness_test, FlatStatus, FlatnessConfig};
use webflat_core::foliation::lines::{convexity, invariant_lines};
use webflat_core::foliation::sing::{singular_points, Classification, DualLine};
use webflat_core::foliation::{ConvexVerdict, Foliation};
use webflat_core::polycore::divide_out_maximal;
use webflat_core::report::{verdict_to_json, Json};
use webflat_core::webleg::{
    cross_check_discriminant, discriminant_structural, legendre, legendre_degree_check, WebSpec,
};

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub samples: usize,
    pub seed: u64,
    pub flat_tol: f64,
    pub nonflat_floor: f64,
    pub precision_bits: u32,
    pub probe_decades: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        let f = FlatnessConfig::default();
        RunConfig {
            samples: f.samples,
            seed: f.seed,
            flat_tol: f.flat_tol,
            nonflat_floor: f.nonflat_floor,
            precision_bits: f.precision_bits,
            probe_decades: f.probe_decades,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.samples == 0 {
            return Err("samples must be positive".into());
        }
        if !(self.flat_tol > 0.0) || !(self.nonflat_floor > 0.0) {
            return Err("tolerances must be positive".into());
        }
        if self.flat_tol >= self.nonflat_floor {
            return Err("flat tolerance must stay below the non-flat floor".into());
        }
        if self.precision_bits < 53 {
            return Err("precision must be at least 53 bits".into());
        }
        if self.probe_decades == 0 {
            return Err("probe decades must be positive".into());
        }
        Ok(())
    }

    pub fn flatness(&self) -> FlatnessConfig {
        FlatnessConfig {
            samples: self.samples,
            seed: self.seed,
            flat_tol: self.flat_tol,
            nonflat_floor: self.nonflat_floor,
            precision_bits: self.precision_bits,
            probe_decades: self.probe_decades,
        }
    }

    pub fn echo_json(&self) -> Json {
        Json::obj()
            .with("samples", Json::Int(self.samples as i64))
            .with("seed", Json::Int(self.seed as i64))
            .with("flat_tol", Json::Num(self.flat_tol))
            .with("nonflat_floor", Json::Num(self.nonflat_floor))
            .with("precision_bits", Json::Int(self.precision_bits as i64))
            .with("probe_decades", Json::Int(self.probe_decades as i64))
    }
}

pub fn report_header(command: &str, config: &RunConfig) -> Json {
    Json::obj()
        .with("tool", Json::Str("webflat".into()))
        .with("version", Json::Str(env!("CARGO_PKG_VERSION").into()))
        .with("schema", Json::Int(1))
        .with("command", Json::Str(command.into()))
        .with("config", config.echo_json())
}

fn complex_json(z: Complex64) -> Json {
    Json::obj()
        .with("re", Json::Num(z.re))
        .with("im", Json::Num(z.im))
}

fn dual_line_json(d: &DualLine) -> Json {
    match d {
        DualLine::Affine(l) => Json::obj().with("line", Json::Str(l.to_string())),
        DualLine::FloatAffine {
            p_coeff,
            q_coeff,
            constant,
        } => Json::obj()
            .with("p_coeff", complex_json(*p_coeff))
            .with("q_coeff", complex_json(*q_coeff))
            .with("constant", complex_json(*constant)),
        DualLine::ChartInfinity => Json::obj().with("line", Json::Str("chart infinity".into())),
    }
}

/// `analyze`: degree, inflection divisor with its line factorization,
/// invariant lines, convexity, and the singularity table.
pub fn cmd_analyze(fol: &Foliation, config: &RunConfig) -> Result<Json, String> {
    let mut report = report_header("analyze", config);
    let (a, b) = fol.affine_pair();
    report.push(
        "foliation",
        Json::obj()
            .with("degree", Json::Int(fol.degree() as i64))
            .with("a", Json::Str(a.to_string()))
            .with("b", Json::Str(b.to_string())),
    );

    let infl = fol.inflection_divisor().map_err(|e| e.to_string())?;
    let conv = convexity(fol, config.seed).map_err(|e| e.to_string())?;
    let lines = invariant_lines(fol, config.seed).map_err(|e| e.to_string())?;

    let mut factors = Vec::new();
    let mut residual = infl.clone();
    for line in &lines.exact {
        let (rest, e) = divide_out_maximal(&residual, &line.as_mpoly());
        if e > 0 {
            residual = rest;
            factors.push(
                Json::obj()
                    .with("line", Json::Str(line.to_string()))
                    .with("multiplicity", Json::Int(e as i64)),
            );
        }
    }
    report.push(
        "inflection",
        Json::obj()
            .with("divisor", Json::Str(infl.to_string()))
            .with("degree", Json::Int(infl.degree() as i64))
            .with("line_factors", Json::Arr(factors))
            .with("residual", Json::Str(residual.unit_normal().to_string())),
    );

    let float_lines: Vec<Json> = lines
        .floating
        .iter()
        .map(|l| {
            Json::obj()
                .with(
                    "coeffs",
                    Json::Arr(l.coeffs.iter().map(|c| complex_json(*c)).collect()),
                )
                .with("residual", Json::Num(l.residual))
        })
        .collect();
    report.push(
        "invariant_lines",
        Json::obj()
            .with(
                "exact",
                Json::Arr(
                    lines
                        .exact
                        .iter()
                        .map(|l| Json::Str(l.to_string()))
                        .collect(),
                ),
            )
            .with("floating", Json::Arr(float_lines))
            .with("uncertified", Json::Int(lines.uncertified.len() as i64)),
    );

    let verdict = match &conv.verdict {
        ConvexVerdict::Convex(c) => format!("convex ({c:?})"),
        ConvexVerdict::NotConvex(c) => format!("not convex ({c:?})"),
        ConvexVerdict::Inconclusive => "inconclusive".to_string(),
    };
    report.push(
        "convexity",
        Json::obj()
            .with("verdict", Json::Str(verdict))
            .with("reduced", Json::Bool(conv.reduced))
            .with(
                "witness",
                match &conv.witness {
                    Some(w) => Json::Str(w.to_string()),
                    None => Json::Null,
                },
            ),
    );

    let sing = singular_points(fol, config.seed).map_err(|e| e.to_string())?;
    let mut rows = Vec::new();
    for rec in &sing {
        let (nu, radial, special) = match &rec.class {
            Classification::Done {
                nu,
                radial_order,
                special,
            } => (
                Json::Int(*nu as i64),
                radial_order.map(|r| Json::Int(r as i64)).unwrap_or(Json::Null),
                Json::Bool(*special),
            ),
            Classification::Inconclusive { reason } => {
                (Json::Null, Json::Null, Json::Str(format!("inconclusive: {reason}")))
            }
        };
        rows.push(
            Json::obj()
                .with("location", Json::Str(format!("{:?}", rec.location)))
                .with("mu", Json::Int(rec.mu as i64))
                .with("nu", nu)
                .with("radial_order", radial)
                .with("special", special),
        );
    }
    report.push("singularities", Json::Arr(rows));
    Ok(report)
}

/// `legendre`: the dual polynomial, degree data, both discriminants, and
/// the cross-check verdict.
pub fn cmd_legendre(web: &WebSpec, config: &RunConfig) -> Result<Json, String> {
    let mut report = report_header("legendre", config);
    let dual = legendre(web).map_err(|e| e.to_string())?;
    let (directions, pq_degree) = legendre_degree_check(&dual);
    report.push(
        "dual",
        Json::obj()
            .with("poly", Json::Str(dual.implicit.poly.to_string()))
            .with("directions", Json::Int(directions as i64))
            .with("pq_degree", Json::Int(pq_degree as i64)),
    );
    let mut disc_report = discriminant_structural(web, config.seed).map_err(|e| e.to_string())?;
    let agree = cross_check_discriminant(&mut disc_report, &dual, config.seed, 200)
        .map_err(|e| e.to_string())?;
    let components: Vec<Json> = disc_report
        .components
        .iter()
        .map(|c| {
            let mut j = Json::obj()
                .with("kind", Json::Str(format!("{:?}", c.kind)))
                .with("provenance", Json::Str(c.provenance.clone()));
            if let Some(line) = &c.line {
                j.push("dual_line", dual_line_json(line));
            }
            if !c.cloud.is_empty() {
                j.push(
                    "cloud",
                    Json::Arr(
                        c.cloud
                            .iter()
                            .take(8)
                            .map(|(p, q)| {
                                Json::obj()
                                    .with("p", complex_json(*p))
                                    .with("q", complex_json(*q))
                            })
                            .collect(),
                    ),
                );
            }
            j
        })
        .collect();
    report.push(
        "discriminant",
        Json::obj()
            .with(
                "resultant",
                Json::Str(
                    disc_report
                        .resultant_poly
                        .as_ref()
                        .map(|p| p.to_string())
                        .unwrap_or_default(),
                ),
            )
            .with("structural", Json::Arr(components))
            .with("agreement", Json::Bool(agree))
            .with(
                "mismatch_witnesses",
                Json::Arr(
                    disc_report
                        .mismatch_witnesses
                        .iter()
                        .take(8)
                        .map(|(p, q)| {
                            Json::obj()
                                .with("p", complex_json(*p))
                                .with("q", complex_json(*q))
                        })
                        .collect(),
                ),
            ),
    );
    Ok(report)
}

/// `flatness`: the three-valued verdict plus its exit code.
pub fn cmd_flatness(web: &WebSpec, config: &RunConfig) -> Result<(Json, i32), String> {
    let verdict = flatness_test(web, &config.flatness()).map_err(|e| e.to_string())?;
    let code = match verdict.status {
        FlatStatus::FlatConsistent => 0,
        FlatStatus::NonFlat => 1,
        FlatStatus::Inconclusive => 2,
    };
    let report = report_header("flatness", config).with("verdict", verdict_to_json(&verdict));
    Ok((report, code))
}
