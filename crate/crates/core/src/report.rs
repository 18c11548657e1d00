//! Minimal canonical JSON writer.
//!
//! Reports must be byte-identical across runs for a fixed config, so the
//! writer is deliberately small and fully pinned: objects serialize in
//! insertion order, floats print with Rust's shortest-roundtrip format,
//! and non-finite values become null.

#[derive(Clone, Debug, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl Json {
    pub fn obj() -> Json {
        Json::Obj(Vec::new())
    }

    pub fn push(&mut self, key: &str, value: Json) {
        match self {
            Json::Obj(fields) => fields.push((key.to_string(), value)),
            _ => panic!("push on non-object"),
        }
    }

    pub fn with(mut self, key: &str, value: Json) -> Json {
        self.push(key, value);
        self
    }

    pub fn to_string_pretty(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0, true);
        out.push('\n');
        out
    }

    pub fn to_string_compact(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0, false);
        out
    }

    fn write(&self, out: &mut String, indent: usize, pretty: bool) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => out.push_str(&i.to_string()),
            Json::Num(x) => {
                if x.is_finite() {
                    let s = format!("{x:?}");
                    out.push_str(&s);
                } else {
                    out.push_str("null");
                }
            }
            Json::Str(s) => write_escaped(out, s),
            Json::Arr(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    if pretty {
                        out.push('\n');
                        out.push_str(&"  ".repeat(indent + 1));
                    }
                    item.write(out, indent + 1, pretty);
                }
                if pretty {
                    out.push('\n');
                    out.push_str(&"  ".repeat(indent));
                }
                out.push(']');
            }
            Json::Obj(fields) => {
                if fields.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push('{');
                for (i, (k, v)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    if pretty {
                        out.push('\n');
                        out.push_str(&"  ".repeat(indent + 1));
                    }
                    write_escaped(out, k);
                    out.push(':');
                    if pretty {
                        out.push(' ');
                    }
                    v.write(out, indent + 1, pretty);
                }
                if pretty {
                    out.push('\n');
                    out.push_str(&"  ".repeat(indent));
                }
                out.push('}');
            }
        }
    }
}

fn write_escaped(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
}

/// Verdict serialization: {status, seed, precision_bits, thresholds,
/// samples: [...], probes: [...]}; byte-exact for a fixed config.
pub fn verdict_to_json(v: &crate::curvature::FlatnessVerdict) -> Json {
    let status = match v.status {
        crate::curvature::FlatStatus::FlatConsistent => "flat-consistent",
        crate::curvature::FlatStatus::NonFlat => "non-flat",
        crate::curvature::FlatStatus::Inconclusive => "inconclusive",
    };
    let mut samples = Vec::new();
    for s in &v.samples {
        samples.push(
            Json::obj()
                .with("p_re", Json::Num(s.p.re))
                .with("p_im", Json::Num(s.p.im))
                .with("q_re", Json::Num(s.q.re))
                .with("q_im", Json::Num(s.q.im))
                .with("K_re", Json::Num(s.k.re))
                .with("K_im", Json::Num(s.k.im))
                .with("scale", Json::Num(s.scale))
                .with("reliable", Json::Bool(s.reliable)),
        );
    }
    let mut probes = Vec::new();
    for p in &v.probes {
        probes.push(
            Json::obj()
                .with("component", Json::Str(p.component.clone()))
                .with(
                    "distances",
                    Json::Arr(p.distances.iter().map(|d| Json::Num(*d)).collect()),
                )
                .with(
                    "K_magnitudes",
                    Json::Arr(p.k_magnitudes.iter().map(|d| Json::Num(*d)).collect()),
                )
                .with(
                    "noise_floors",
                    Json::Arr(p.noise_floors.iter().map(|d| Json::Num(*d)).collect()),
                )
                .with(
                    "relative_magnitudes",
                    Json::Arr(
                        p.relative_magnitudes
                            .iter()
                            .map(|d| Json::Num(*d))
                            .collect(),
                    ),
                )
                .with("growth_per_decade", Json::Num(p.growth_per_decade)),
        );
    }
    Json::obj()
        .with("status", Json::Str(status.to_string()))
        .with("seed", Json::Int(v.seed as i64))
        .with("precision_bits", Json::Int(v.precision_bits as i64))
        .with(
            "thresholds",
            Json::obj()
                .with("flat_tol", Json::Num(v.flat_tol))
                .with("nonflat_floor", Json::Num(v.nonflat_floor)),
        )
        .with("rotated", Json::Bool(v.rotated))
        .with("reliable_count", Json::Int(v.reliable_count as i64))
        .with("max_relative_K", Json::Num(v.max_relative_k))
        .with("samples", Json::Arr(samples))
        .with("probes", Json::Arr(probes))
        .with(
            "notes",
            Json::Arr(v.notes.iter().map(|n| Json::Str(n.clone())).collect()),
        )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_output() {
        let j = Json::obj()
            .with("b", Json::Int(1))
            .with("a", Json::Arr(vec![Json::Num(0.5), Json::Null, Json::Bool(true)]))
            .with("s", Json::Str("x\"y\\z".into()));
        assert_eq!(
            j.to_string_compact(),
            r#"{"b":1,"a":[0.5,null,true],"s":"x\"y\\z"}"#
        );
    }

    #[test]
    fn floats_roundtrip_shortest() {
        assert_eq!(Json::Num(1e-12).to_string_compact(), "1e-12");
        assert_eq!(Json::Num(1.0).to_string_compact(), "1.0");
        assert_eq!(Json::Num(f64::NAN).to_string_compact(), "null");
    }
}
