//! Plain-text matrix format.
//!
//! ```text
//! gradedmatrix p=31991 nvars=3 symmetry=general
//! row_twists 0 0
//! col_twists -1 -1
//! form nvars=3 degree=1 p=31991
//! 1  1 0 0
//! ...
//! ```
//!
//! The header is followed by the twist lines and then one form per entry in
//! row-major order.

use std::fmt::Write as _;

use super::{GradedMatrix, Symmetry};
use crate::error::{Error, Result};
use crate::mpoly::{header_field, header_value, parse_header, parse_int, read_form, LineReader};

fn read_twists(reader: &mut LineReader<'_>, keyword: &str) -> Result<Vec<i32>> {
    let (n, line) = reader.expect_line(keyword)?;
    let mut toks = line.split_whitespace();
    if toks.next() != Some(keyword) {
        return Err(Error::parse(n, format!("expected `{keyword}` line")));
    }
    toks.map(|t| parse_int(t, n)).collect()
}

pub fn parse_graded_matrix(text: &str) -> Result<GradedMatrix> {
    let mut reader = LineReader::new(text);
    let (hline, header) = reader.expect_line("gradedmatrix header")?;
    let fields = parse_header(hline, header, "gradedmatrix")?;
    let field = header_field(&fields, hline)?;
    let nvars: usize = header_value(&fields, "nvars", hline)?;
    let symmetry: Symmetry = header_value(&fields, "symmetry", hline)?;
    let rows = read_twists(&mut reader, "row_twists")?;
    let cols = read_twists(&mut reader, "col_twists")?;
    let mut entries = Vec::with_capacity(rows.len() * cols.len());
    for _ in 0..rows.len() * cols.len() {
        let line = reader.peek().map(|(n, _)| n).unwrap_or(0);
        let form = read_form(&mut reader)?;
        if form.field() != field {
            return Err(Error::parse(line, "entry modulus differs from header"));
        }
        entries.push(form);
    }
    if let Some((n, _)) = reader.peek() {
        return Err(Error::parse(n, "trailing content after matrix"));
    }
    GradedMatrix::new(field, nvars, rows, cols, symmetry, entries)
        .map_err(|e| Error::parse(hline, e.to_string()))
}

impl GradedMatrix {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "gradedmatrix p={} nvars={} symmetry={}",
            self.field().modulus(),
            self.nvars(),
            self.symmetry()
        );
        let join = |v: &[i32]| v.iter().map(i32::to_string).collect::<Vec<_>>().join(" ");
        let _ = writeln!(s, "row_twists {}", join(self.row_twists()));
        let _ = writeln!(s, "col_twists {}", join(self.col_twists()));
        for e in self.entries() {
            e.write_text(&mut s);
        }
        s
    }
}
