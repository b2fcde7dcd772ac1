//! Plain-text form format.
//!
//! ```text
//! form nvars=3 degree=2 p=31991
//! 1  2 0 0
//! 31990  0 1 1
//! ```
//!
//! One term per line, coefficient first. Terms are written in canonical
//! monomial order with coefficients in `[0, p)`, so emitting a parsed form
//! reproduces the input byte for byte. The parser also accepts signed
//! coefficients, any term order, blank lines and `#` comments.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::form::HomogeneousForm;
use crate::error::{Error, Result};
use crate::exactlin::Field;

/// Non-blank, non-comment lines with 1-based line numbers.
pub(crate) struct LineReader<'a> {
    lines: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last_line: usize,
}

impl<'a> LineReader<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.trim()))
                .filter(|(_, l)| !l.is_empty() && !l.starts_with('#')),
        );
        LineReader {
            lines: it.peekable(),
            last_line: 0,
        }
    }

    pub(crate) fn peek(&mut self) -> Option<(usize, &'a str)> {
        self.lines.peek().copied()
    }

    pub(crate) fn next_line(&mut self) -> Option<(usize, &'a str)> {
        let next = self.lines.next();
        if let Some((n, _)) = next {
            self.last_line = n;
        }
        next
    }

    pub(crate) fn expect_line(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let last = self.last_line;
        self.next_line()
            .ok_or_else(|| Error::parse(last + 1, format!("unexpected end of input, expected {what}")))
    }
}

/// Parses `keyword k1=v1 k2=v2 ...` into a key map.
pub(crate) fn parse_header<'a>(
    line_no: usize,
    line: &'a str,
    keyword: &str,
) -> Result<HashMap<&'a str, &'a str>> {
    let mut words = line.split_whitespace();
    if words.next() != Some(keyword) {
        return Err(Error::parse(line_no, format!("expected `{keyword}` header")));
    }
    words
        .map(|w| {
            w.split_once('=')
                .ok_or_else(|| Error::parse(line_no, format!("malformed header field `{w}`")))
        })
        .collect()
}

pub(crate) fn header_value<T: std::str::FromStr>(
    fields: &HashMap<&str, &str>,
    key: &str,
    line_no: usize,
) -> Result<T> {
    let raw = fields
        .get(key)
        .ok_or_else(|| Error::parse(line_no, format!("missing header field `{key}`")))?;
    raw.parse()
        .map_err(|_| Error::parse(line_no, format!("invalid value `{raw}` for `{key}`")))
}

pub(crate) fn header_field(fields: &HashMap<&str, &str>, line_no: usize) -> Result<Field> {
    let p: u64 = header_value(fields, "p", line_no)?;
    Field::new(p).map_err(|e| Error::parse(line_no, e.to_string()))
}

pub(crate) fn parse_int<T: std::str::FromStr>(tok: &str, line_no: usize) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::parse(line_no, format!("invalid integer `{tok}`")))
}

fn is_form_header(line: &str) -> bool {
    line.split_whitespace().next() == Some("form")
}

pub(crate) fn read_form(reader: &mut LineReader<'_>) -> Result<HomogeneousForm> {
    let (hline, header) = reader.expect_line("form header")?;
    let fields = parse_header(hline, header, "form")?;
    let field = header_field(&fields, hline)?;
    let nvars: usize = header_value(&fields, "nvars", hline)?;
    let degree: i32 = header_value(&fields, "degree", hline)?;
    if nvars == 0 {
        return Err(Error::parse(hline, "nvars must be positive"));
    }
    let mut seen = std::collections::HashSet::new();
    let mut terms = Vec::new();
    while let Some((n, line)) = reader.peek() {
        let first = line.split_whitespace().next().unwrap_or("");
        if first.parse::<i64>().is_err() {
            break;
        }
        reader.next_line();
        let mut toks = line.split_whitespace();
        let coeff: i64 = parse_int(toks.next().unwrap_or(""), n)?;
        let exps: Vec<u32> = toks.map(|t| parse_int(t, n)).collect::<Result<_>>()?;
        if exps.len() != nvars {
            return Err(Error::parse(
                n,
                format!("expected {nvars} exponents, found {}", exps.len()),
            ));
        }
        if exps.iter().sum::<u32>() as i64 != degree as i64 {
            return Err(Error::parse(n, format!("term degree differs from {degree}")));
        }
        if !seen.insert(exps.clone()) {
            return Err(Error::parse(n, "repeated monomial"));
        }
        terms.push((exps, field.from_i64(coeff)));
    }
    HomogeneousForm::from_terms(field, nvars, degree, terms)
        .map_err(|e| Error::parse(hline, e.to_string()))
}

/// Parses exactly one form.
pub fn parse_form(text: &str) -> Result<HomogeneousForm> {
    let mut reader = LineReader::new(text);
    let form = read_form(&mut reader)?;
    if let Some((n, _)) = reader.peek() {
        return Err(Error::parse(n, "trailing content after form"));
    }
    Ok(form)
}

/// Parses a sequence of concatenated forms.
pub fn parse_forms(text: &str) -> Result<Vec<HomogeneousForm>> {
    let mut reader = LineReader::new(text);
    let mut out = Vec::new();
    while let Some((n, line)) = reader.peek() {
        if !is_form_header(line) {
            return Err(Error::parse(n, "expected `form` header"));
        }
        out.push(read_form(&mut reader)?);
    }
    Ok(out)
}

impl HomogeneousForm {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        self.write_text(&mut s);
        s
    }

    pub(crate) fn write_text(&self, out: &mut String) {
        let _ = writeln!(
            out,
            "form nvars={} degree={} p={}",
            self.nvars(),
            self.degree(),
            self.field().modulus()
        );
        for (m, c) in self.terms() {
            let _ = write!(out, "{c} ");
            for e in m.exponents() {
                let _ = write!(out, " {e}");
            }
            out.push('\n');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parses_signed_and_unordered_terms() {
        let text = "# a conic\nform nvars=3 degree=2 p=31991\n-1  0 1 1\n\n1 2 0 0\n";
        let f = parse_form(text).unwrap();
        assert_eq!(
            f.to_text(),
            "form nvars=3 degree=2 p=31991\n1  2 0 0\n31990  0 1 1\n"
        );
    }

    #[test]
    fn errors_cite_lines() {
        let bad = "form nvars=3 degree=2 p=31991\n1  2 0 0\n1  1 1 0 0\n";
        assert_eq!(
            parse_form(bad).unwrap_err(),
            Error::parse(3, "expected 3 exponents, found 4")
        );
        let bad = "form nvars=3 degree=2 p=31991\n1  2 0\n";
        assert!(matches!(parse_form(bad), Err(Error::Parse { line: 2, .. })));
        let bad = "form nvars=3 degree=2 p=31990\n";
        assert!(matches!(parse_form(bad), Err(Error::Parse { line: 1, .. })));
        let bad = "form nvars=3 degree=2 p=31991\n1  2 0 0\n2  2 0 0\n";
        assert!(matches!(parse_form(bad), Err(Error::Parse { line: 3, .. })));
        let bad = "form nvars=3 p=31991\n";
        assert!(matches!(parse_form(bad), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn zero_form_round_trips() {
        let z = HomogeneousForm::zero(Field::default_prime(), 4, -2);
        assert_eq!(parse_form(&z.to_text()).unwrap(), z);
    }

    proptest! {
        #[test]
        fn emit_parse_is_identity(seed in any::<u64>(), d in 0i32..5, n in 1usize..5, count in 1usize..4) {
            let f = Field::default_prime();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let forms: Vec<_> = (0..count).map(|_| HomogeneousForm::random(f, n, d, &mut rng)).collect();
            let text: String = forms.iter().map(|g| g.to_text()).collect();
            let parsed = parse_forms(&text).unwrap();
            let again: String = parsed.iter().map(|g| g.to_text()).collect();
            prop_assert_eq!(&parsed, &forms);
            prop_assert_eq!(again, text);
        }
    }
}
