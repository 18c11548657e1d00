//! Canonical polynomial printing.
//!
//! Terms are emitted in descending graded-lex order. Each Gaussian-rational
//! coefficient prints as up to two grammar terms (real part, then imaginary
//! part), so output stays inside the parse grammar and round-trips
//! byte-exactly.

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::mpoly::{MPoly, Mono};
use super::scalar::Rat;

fn push_rat_term(out: &mut String, first: bool, r: &Rat, imag: bool, mono_txt: &str) {
    let neg = r.is_negative();
    if first {
        if neg {
            out.push('-');
        }
    } else if neg {
        out.push_str(" - ");
    } else {
        out.push_str(" + ");
    }
    let a = r.abs();
    let mut factors: Vec<String> = Vec::new();
    let coeff_is_one = a.is_one();
    if !coeff_is_one || (!imag && mono_txt.is_empty()) {
        if a.denom().is_one() {
            factors.push(a.numer().to_string());
        } else {
            factors.push(format!("{}/{}", a.numer(), a.denom()));
        }
    }
    if imag {
        factors.push("i".to_string());
    }
    if !mono_txt.is_empty() {
        factors.push(mono_txt.to_string());
    }
    out.push_str(&factors.join("*"));
}

fn mono_text(m: &Mono, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (name, &e) in names.iter().zip(m.exps()) {
        match e {
            0 => {}
            1 => parts.push(name.clone()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = self.vars().names();
        let mut out = String::new();
        let mut first = true;
        // BTreeMap iterates ascending; canonical order is descending grlex.
        for (m, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let mt = mono_text(m, names);
            if !c.re.is_zero() {
                push_rat_term(&mut out, first, &c.re, false, &mt);
                first = false;
            }
            if !c.im.is_zero() {
                push_rat_term(&mut out, first, &c.im, true, &mt);
                first = false;
            }
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::super::mpoly::VarSet;
    use super::super::parse::parse_poly;
    use super::*;

    #[test]
    fn canonical_form() {
        let v = VarSet::new(vec!["p", "q", "x"]);
        let f = parse_poly("(q^2-q) + 2*p*q*x + (p^2-p)*x^2", &v).unwrap();
        assert_eq!(f.to_string(), "p^2*x^2 + 2*p*q*x - p*x^2 + q^2 - q");
    }

    #[test]
    fn coefficient_shapes() {
        let v = VarSet::new(vec!["x"]);
        for s in [
            "0",
            "1",
            "-1",
            "i",
            "-i",
            "x",
            "-x",
            "3/2",
            "x^2 + i*x - 2/3",
            "1/2*i*x^3 - i",
            "x + 1+i", // re+im on the constant term
        ] {
            let f = parse_poly(s, &v).unwrap();
            let printed = f.to_string();
            let back = parse_poly(&printed, &v).unwrap();
            assert_eq!(back, f, "round-trip failed for `{s}` -> `{printed}`");
        }
    }

    #[test]
    fn roundtrip_is_byte_exact() {
        let v = VarSet::new(vec!["x", "y"]);
        let f = parse_poly("-2*x^2*y + 1/3*x - i*y + 4", &v).unwrap();
        let s1 = f.to_string();
        let f2 = parse_poly(&s1, &v).unwrap();
        assert_eq!(f2.to_string(), s1);
        assert_eq!(f2, f);
    }
}
