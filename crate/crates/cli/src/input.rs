//! Input resolution: family specs (`fermat:2`, `homog:3`, `ex3:2`,
//! `line:1,-1,0`, `rand:2:42`) and the text grammars
//! `foliation { a = ...; b = ...; }`, `vectorfield { A = ...; B = ...; }`
//! (the `omega = B dx - A dy` convention), and
//! `web { line: a,b,c; foliation: <spec>; ... }`.

use webflat_core::families;
use webflat_core::foliation::{aff_ring, Foliation, LineInPlane};
use webflat_core::polycore::{parse_poly, rat, GaussRat, Rat};
use webflat_core::webleg::WebSpec;

#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for InputError {}

fn err<T>(msg: impl Into<String>) -> Result<T, InputError> {
    Err(InputError(msg.into()))
}

/// One resolved member or member group.
pub enum Fragment {
    Line(LineInPlane),
    Foliation(Foliation),
    Web(Vec<LineInPlane>, Vec<Foliation>),
}

fn parse_rat_token(tok: &str) -> Result<Rat, InputError> {
    let parse_int = |s: &str| -> Result<i64, InputError> {
        s.trim()
            .parse::<i64>()
            .map_err(|_| InputError(format!("invalid integer `{s}`")))
    };
    match tok.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d == 0 {
                return err("zero denominator");
            }
            Ok(rat(parse_int(n)?, d))
        }
        None => Ok(rat(parse_int(tok)?, 1)),
    }
}

/// Resolve one spec token.
pub fn resolve_spec(token: &str) -> Result<Fragment, InputError> {
    // File input?
    if std::path::Path::new(token).is_file() {
        let text = std::fs::read_to_string(token)
            .map_err(|e| InputError(format!("cannot read `{token}`: {e}")))?;
        return parse_input_text(&text);
    }
    let mut parts = token.split(':');
    let head = parts.next().unwrap_or_default();
    let rest: Vec<&str> = parts.collect();
    match head {
        "fermat" => {
            let [d] = rest.as_slice() else {
                return err("usage: fermat:<d>");
            };
            let d: u32 = d.parse().map_err(|_| InputError("bad degree".into()))?;
            Ok(Fragment::Foliation(
                families::fermat(d).map_err(|e| InputError(e.to_string()))?,
            ))
        }
        "homog" => {
            let [d] = rest.as_slice() else {
                return err("usage: homog:<d>");
            };
            let d: u32 = d.parse().map_err(|_| InputError("bad degree".into()))?;
            Ok(Fragment::Foliation(
                families::homogeneous(d).map_err(|e| InputError(e.to_string()))?,
            ))
        }
        "ex3" => {
            let [lambda] = rest.as_slice() else {
                return err("usage: ex3:<lambda>");
            };
            let lambda = GaussRat::from_rat(parse_rat_token(lambda)?);
            let web =
                families::transversal_pair(&lambda).map_err(|e| InputError(e.to_string()))?;
            Ok(Fragment::Web(web.lines, web.foliations))
        }
        "rand" => {
            let [d, seed] = rest.as_slice() else {
                return err("usage: rand:<d>:<seed>");
            };
            let d: u32 = d.parse().map_err(|_| InputError("bad degree".into()))?;
            let seed: u64 = seed.parse().map_err(|_| InputError("bad seed".into()))?;
            Ok(Fragment::Foliation(
                families::random_foliation(d, seed).map_err(|e| InputError(e.to_string()))?,
            ))
        }
        "line" => {
            let [coeffs] = rest.as_slice() else {
                return err("usage: line:<a>,<b>,<c>");
            };
            let cs: Vec<&str> = coeffs.split(',').collect();
            if cs.len() != 3 {
                return err("line needs three coefficients");
            }
            let a = GaussRat::from_rat(parse_rat_token(cs[0])?);
            let b = GaussRat::from_rat(parse_rat_token(cs[1])?);
            let c = GaussRat::from_rat(parse_rat_token(cs[2])?);
            Ok(Fragment::Line(
                LineInPlane::new(a, b, c).map_err(InputError)?,
            ))
        }
        _ => err(format!(
            "unknown spec `{token}` (expected fermat:<d>, homog:<d>, ex3:<lambda>, \
             rand:<d>:<seed>, line:<a>,<b>,<c>, or a file path)"
        )),
    }
}

/// Assemble a web from spec tokens.
pub fn resolve_web(tokens: &[String]) -> Result<WebSpec, InputError> {
    let mut lines = Vec::new();
    let mut fols = Vec::new();
    for t in tokens {
        match resolve_spec(t)? {
            Fragment::Line(l) => lines.push(l),
            Fragment::Foliation(f) => fols.push(f),
            Fragment::Web(ls, fs) => {
                lines.extend(ls);
                fols.extend(fs);
            }
        }
    }
    WebSpec::new(lines, fols).map_err(|e| InputError(e.to_string()))
}

/// Resolve a single foliation (for `analyze`).
pub fn resolve_foliation(token: &str) -> Result<Foliation, InputError> {
    match resolve_spec(token)? {
        Fragment::Foliation(f) => Ok(f),
        Fragment::Web(_, mut fs) if fs.len() == 1 => Ok(fs.remove(0)),
        _ => err("expected a single foliation"),
    }
}

/// Parse the block grammars.
pub fn parse_input_text(text: &str) -> Result<Fragment, InputError> {
    let trimmed = text.trim();
    if let Some(body) = block_body(trimmed, "foliation") {
        let fields = parse_fields(body)?;
        let a = field_poly(&fields, "a")?;
        let b = field_poly(&fields, "b")?;
        return Ok(Fragment::Foliation(
            Foliation::new(&a, &b).map_err(|e| InputError(e.to_string()))?,
        ));
    }
    if let Some(body) = block_body(trimmed, "vectorfield") {
        let fields = parse_fields(body)?;
        let va = field_poly(&fields, "A")?;
        let vb = field_poly(&fields, "B")?;
        return Ok(Fragment::Foliation(
            Foliation::from_vector_field(&va, &vb).map_err(|e| InputError(e.to_string()))?,
        ));
    }
    if let Some(body) = block_body(trimmed, "web") {
        let mut lines = Vec::new();
        let mut fols = Vec::new();
        for item in body.split(';') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let Some((key, value)) = item.split_once(':') else {
                return err(format!("expected `line: ...` or `foliation: ...`, got `{item}`"));
            };
            match key.trim() {
                "line" => match resolve_spec(&format!("line:{}", value.trim()))? {
                    Fragment::Line(l) => lines.push(l),
                    _ => unreachable!(),
                },
                "foliation" => match resolve_spec(value.trim())? {
                    Fragment::Foliation(f) => fols.push(f),
                    Fragment::Web(ls, fs) => {
                        lines.extend(ls);
                        fols.extend(fs);
                    }
                    Fragment::Line(_) => return err("`foliation:` resolved to a line"),
                },
                other => return err(format!("unknown web field `{other}`")),
            }
        }
        return Ok(Fragment::Web(lines, fols));
    }
    err("expected a `foliation { ... }`, `vectorfield { ... }`, or `web { ... }` block")
}

fn block_body<'a>(text: &'a str, keyword: &str) -> Option<&'a str> {
    let rest = text.strip_prefix(keyword)?.trim_start();
    let rest = rest.strip_prefix('{')?;
    let end = rest.rfind('}')?;
    Some(&rest[..end])
}

fn parse_fields(body: &str) -> Result<Vec<(String, String)>, InputError> {
    let mut out = Vec::new();
    for item in body.split(';') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let Some((k, v)) = item.split_once('=') else {
            return err(format!("expected `name = polynomial`, got `{item}`"));
        };
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn field_poly(
    fields: &[(String, String)],
    name: &str,
) -> Result<webflat_core::polycore::MPoly, InputError> {
    let (_, v) = fields
        .iter()
        .find(|(k, _)| k == name)
        .ok_or_else(|| InputError(format!("missing field `{name}`")))?;
    parse_poly(v, &aff_ring()).map_err(|e| InputError(e.to_string()))
}
