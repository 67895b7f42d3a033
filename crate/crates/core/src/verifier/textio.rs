//! Text serialization of multilinear forms.
//!
//! The format is line-oriented: a four-line header (`m`, `N`, `field`,
//! `layout row-major`), then one tensor entry per line in row-major
//! lexicographic order on `(i_1, ..., i_m)`. Real entries are one number,
//! complex entries are a `re im` pair. Blank lines and lines starting with
//! `#` are ignored. Numbers are written with 17 significant digits, so
//! `f64` values round-trip exactly.

use std::io;

use num_complex::Complex;

use crate::error::{Error, Result};

use super::{Form, MultilinearForm, ScalarField};

/// Writes a form in the text tensor format.
pub fn write_form<W: io::Write>(mut w: W, form: &Form) -> io::Result<()> {
    writeln!(w, "# multilinear form tensor")?;
    writeln!(w, "m {}", form.degree())?;
    writeln!(w, "N {}", form.dim())?;
    writeln!(w, "field {}", form.field())?;
    writeln!(w, "layout row-major")?;
    match form {
        Form::Real(f) => {
            for &c in f.coeffs() {
                writeln!(w, "{c:.16e}")?;
            }
        }
        Form::Complex(f) => {
            for c in f.coeffs() {
                writeln!(w, "{:.16e} {:.16e}", c.re, c.im)?;
            }
        }
    }
    Ok(())
}

/// The text form as a string.
pub fn form_to_string(form: &Form) -> String {
    let mut out = Vec::new();
    write_form(&mut out, form).expect("writing to a Vec cannot fail");
    String::from_utf8(out).expect("the format is ASCII")
}

fn header_value<'a>(line: &'a str, key: &str) -> Result<&'a str> {
    let rest = line
        .strip_prefix(key)
        .ok_or_else(|| Error::Parse(format!("expected `{key} ...`, found `{line}`")))?;
    let value = rest.trim();
    if value.is_empty() || !rest.starts_with(char::is_whitespace) {
        return Err(Error::Parse(format!("expected `{key} <value>`, found `{line}`")));
    }
    Ok(value)
}

fn parse_number(token: &str, line_no: usize) -> Result<f64> {
    let v: f64 = token
        .parse()
        .map_err(|_| Error::Parse(format!("line {line_no}: `{token}` is not a number")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("line {line_no}: non-finite entry `{token}`")));
    }
    Ok(v)
}

/// Parses the text tensor format produced by [`write_form`].
pub fn parse_form(text: &str) -> Result<Form> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let mut next = || {
        lines
            .next()
            .ok_or_else(|| Error::Parse("unexpected end of input".into()))
    };

    let degree: u32 = header_value(next()?.1, "m")?
        .parse()
        .map_err(|_| Error::Parse("`m` must be a positive integer".into()))?;
    let dim: usize = header_value(next()?.1, "N")?
        .parse()
        .map_err(|_| Error::Parse("`N` must be a positive integer".into()))?;
    let field = match header_value(next()?.1, "field")? {
        "real" => ScalarField::Real,
        "complex" => ScalarField::Complex,
        other => {
            return Err(Error::Parse(format!(
                "field must be `real` or `complex`, found `{other}`"
            )))
        }
    };
    let layout = header_value(next()?.1, "layout")?;
    if layout != "row-major" {
        return Err(Error::Parse(format!(
            "layout must be `row-major`, found `{layout}`"
        )));
    }

    let expected = super::tensor_len(degree, dim)?;
    match field {
        ScalarField::Real => {
            let mut coeffs = Vec::with_capacity(expected);
            for (line_no, line) in lines {
                let mut tokens = line.split_whitespace();
                let value = parse_number(
                    tokens
                        .next()
                        .ok_or_else(|| Error::Parse(format!("line {line_no}: empty entry")))?,
                    line_no,
                )?;
                if tokens.next().is_some() {
                    return Err(Error::Parse(format!(
                        "line {line_no}: real entries take one number per line"
                    )));
                }
                coeffs.push(value);
            }
            if coeffs.len() != expected {
                return Err(Error::Parse(format!(
                    "expected {expected} entries, found {}",
                    coeffs.len()
                )));
            }
            Ok(Form::Real(MultilinearForm::new(degree, dim, coeffs)?))
        }
        ScalarField::Complex => {
            let mut coeffs = Vec::with_capacity(expected);
            for (line_no, line) in lines {
                let tokens: Vec<&str> = line.split_whitespace().collect();
                if tokens.len() != 2 {
                    return Err(Error::Parse(format!(
                        "line {line_no}: complex entries take `re im` pairs"
                    )));
                }
                let re = parse_number(tokens[0], line_no)?;
                let im = parse_number(tokens[1], line_no)?;
                coeffs.push(Complex::new(re, im));
            }
            if coeffs.len() != expected {
                return Err(Error::Parse(format!(
                    "expected {expected} entries, found {}",
                    coeffs.len()
                )));
            }
            Ok(Form::Complex(MultilinearForm::new(degree, dim, coeffs)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::{littlewood_form, random_form, Dist};
    use proptest::prelude::*;

    #[test]
    fn littlewood_round_trips() {
        let form = Form::Real(littlewood_form::<f64>());
        let text = form_to_string(&form);
        assert!(text.contains("m 2"));
        assert!(text.contains("field real"));
        assert_eq!(parse_form(&text).unwrap(), form);
    }

    #[test]
    fn parses_hand_written_input_with_comments() {
        let text = "\
# a bilinear form
m 2
N 2

field complex
layout row-major
1 0
0 1
0 -1
1 0
";
        let form = parse_form(text).unwrap();
        assert_eq!(form.field(), ScalarField::Complex);
        assert_eq!(form.degree(), 2);
        assert_eq!(form.dim(), 2);
    }

    #[test]
    fn rejects_malformed_inputs() {
        assert!(parse_form("").is_err());
        assert!(parse_form("m 2\nN 2\nfield real\nlayout column-major\n").is_err());
        assert!(parse_form("m 2\nN 2\nfield quaternion\nlayout row-major\n").is_err());
        // Wrong entry count.
        assert!(parse_form("m 2\nN 2\nfield real\nlayout row-major\n1\n1\n1\n").is_err());
        // Too many numbers on a real line.
        assert!(parse_form("m 2\nN 1\nfield real\nlayout row-major\n1 2\n").is_err());
        // Non-finite entry.
        assert!(parse_form("m 2\nN 1\nfield real\nlayout row-major\ninf\n").is_err());
        // Complex entry missing the imaginary part.
        assert!(parse_form("m 2\nN 1\nfield complex\nlayout row-major\n1\n").is_err());
        // Degree below 2.
        assert!(parse_form("m 1\nN 2\nfield real\nlayout row-major\n1\n1\n").is_err());
    }

    proptest! {
        #[test]
        fn random_forms_round_trip(seed in 0u64..200, complex_field in proptest::bool::ANY) {
            let field = if complex_field { ScalarField::Complex } else { ScalarField::Real };
            let dist = if seed % 2 == 0 { Dist::Gaussian } else { Dist::SignUniform };
            let form = random_form(2 + (seed % 2) as u32, 2 + (seed % 3) as usize,
                                   field, dist, seed, 0).unwrap();
            let text = form_to_string(&form);
            prop_assert_eq!(parse_form(&text).unwrap(), form);
        }
    }
}
