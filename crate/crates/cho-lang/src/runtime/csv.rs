//! CSV interchange for view tables.
//!
//! First line is a header of column names `L<i>`, `I<i>`, `R<i>` with
//! zero-based indices dense within each prefix; each following line holds one
//! run as `0`/`1` tokens. LF line endings, no quoting. Headers may list the
//! groups in any order; columns are regrouped by prefix on parse.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use super::view::ViewTable;

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("header mismatch: {0}")]
    HeaderMismatch(String),
    #[error("line {line}: `{token}` is not a bit")]
    NonBitValue { line: usize, token: String },
    #[error("line {line}: expected {expected} fields, found {found}")]
    RaggedRow {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Write a view table in canonical column order (`L*`, `I*`, `R*`).
pub fn emit_csv(v: &ViewTable, sink: &mut impl Write) -> io::Result<()> {
    let mut header = Vec::with_capacity(v.l.len() + v.i.len() + v.r.len());
    for (prefix, group) in [("L", &v.l), ("I", &v.i), ("R", &v.r)] {
        for idx in 0..group.len() {
            header.push(format!("{prefix}{idx}"));
        }
    }
    sink.write_all(header.join(",").as_bytes())?;
    sink.write_all(b"\n")?;
    let mut line = String::with_capacity(header.len() * 2);
    for row in 0..v.rows {
        line.clear();
        for (n, col) in v.l.iter().chain(&v.i).chain(&v.r).enumerate() {
            if n > 0 {
                line.push(',');
            }
            line.push(if col[row] == 1 { '1' } else { '0' });
        }
        line.push('\n');
        sink.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// Parse a view-table CSV. Accepts any column order in the header as long as
/// each prefix's indices are dense from zero.
pub fn parse_csv(source: impl BufRead) -> Result<ViewTable, CsvError> {
    let mut lines = source.lines();
    let header_line = match lines.next() {
        Some(line) => line?,
        None => {
            return Err(CsvError::HeaderMismatch("empty input".into()));
        }
    };

    // (group, index) per CSV column, where group 0/1/2 = L/I/R.
    let mut layout = Vec::new();
    let mut widths = [0usize; 3];
    for name in header_line.trim_end().split(',') {
        let group = match name.as_bytes().first() {
            Some(b'L') => 0,
            Some(b'I') => 1,
            Some(b'R') => 2,
            _ => {
                return Err(CsvError::HeaderMismatch(format!(
                    "column `{name}` must start with L, I, or R"
                )))
            }
        };
        let idx: usize = name[1..]
            .parse()
            .map_err(|_| CsvError::HeaderMismatch(format!("column `{name}` has no index")))?;
        layout.push((group, idx));
        widths[group] = widths[group].max(idx + 1);
    }
    for group in 0..3 {
        let mut seen = vec![false; widths[group]];
        for &(g, idx) in &layout {
            if g == group {
                if seen[idx] {
                    return Err(CsvError::HeaderMismatch(format!(
                        "duplicate column {}{idx}",
                        ["L", "I", "R"][group]
                    )));
                }
                seen[idx] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(CsvError::HeaderMismatch(format!(
                "{} indices are not dense from zero",
                ["L", "I", "R"][group]
            )));
        }
    }

    let mut cols: [Vec<Vec<u8>>; 3] = widths.map(|w| vec![Vec::new(); w]);
    let mut rows = 0usize;
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let mut found = 0usize;
        for (n, token) in line.trim_end().split(',').enumerate() {
            found += 1;
            if n >= layout.len() {
                continue;
            }
            let bit = match token {
                "0" => 0,
                "1" => 1,
                other => {
                    return Err(CsvError::NonBitValue {
                        line: lineno + 2,
                        token: other.to_string(),
                    })
                }
            };
            let (group, idx) = layout[n];
            cols[group][idx].push(bit);
        }
        if found != layout.len() {
            return Err(CsvError::RaggedRow {
                line: lineno + 2,
                expected: layout.len(),
                found,
            });
        }
        rows += 1;
    }
    let [l, i, r] = cols;
    Ok(ViewTable { rows, l, i, r })
}
