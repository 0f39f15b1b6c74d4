//! Incidence matrix interchange formats: dense text (one row of 0/1 per
//! line), sparse JSON, and the alist sparse parity-check format. All three
//! round-trip bit-exactly.

use super::IncidenceMatrix;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
struct SparseJson {
    v: usize,
    k: u64,
    rows: Vec<Vec<usize>>,
}

impl IncidenceMatrix {
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.n_rows() * (self.n_cols() + 1));
        for r in 0..self.n_rows() {
            for c in 0..self.n_cols() {
                out.push(if self.get(r, c) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<IncidenceMatrix> {
        let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        if lines.is_empty() {
            return Err(Error::Parse("empty matrix text".into()));
        }
        let n_cols = lines[0].trim().len();
        let mut m = IncidenceMatrix::zero(lines.len(), n_cols);
        for (r, line) in lines.iter().enumerate() {
            let line = line.trim();
            if line.len() != n_cols {
                return Err(Error::Parse(format!("row {r} has ragged length")));
            }
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    '1' => m.set(r, c, true),
                    '0' => {}
                    other => return Err(Error::Parse(format!("bad character {other:?}"))),
                }
            }
        }
        Ok(m)
    }

    /// Sparse JSON `{"v":..., "k":..., "rows":[[cols...]]}`; square matrices
    /// only. `k` records the first-row weight.
    pub fn to_sparse_json(&self) -> Result<String> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(
                "sparse JSON export is defined for square matrices".into(),
            ));
        }
        let payload = SparseJson {
            v: self.n_rows(),
            k: if self.n_rows() > 0 { self.row_weight(0) as u64 } else { 0 },
            rows: (0..self.n_rows())
                .map(|r| self.row(r).iter_ones().collect())
                .collect(),
        };
        Ok(serde_json::to_string(&payload)?)
    }

    pub fn from_sparse_json(s: &str) -> Result<IncidenceMatrix> {
        let payload: SparseJson = serde_json::from_str(s)?;
        if payload.rows.len() != payload.v {
            return Err(Error::Parse(format!(
                "{} rows listed for v = {}",
                payload.rows.len(),
                payload.v
            )));
        }
        let mut m = IncidenceMatrix::zero(payload.v, payload.v);
        for (r, cols) in payload.rows.iter().enumerate() {
            for &c in cols {
                if c >= payload.v {
                    return Err(Error::Parse(format!("column {c} out of range in row {r}")));
                }
                m.set(r, c, true);
            }
        }
        Ok(m)
    }

    /// alist export (rows are checks, columns are variables), 1-based and
    /// zero-padded per the usual convention.
    pub fn to_alist(&self) -> String {
        let (n, m) = (self.n_cols(), self.n_rows());
        let col_lists: Vec<Vec<usize>> = {
            let mut lists = vec![Vec::new(); n];
            for r in 0..m {
                for c in self.row(r).iter_ones() {
                    lists[c].push(r);
                }
            }
            lists
        };
        let row_lists: Vec<Vec<usize>> =
            (0..m).map(|r| self.row(r).iter_ones().collect()).collect();
        let cmax = col_lists.iter().map(Vec::len).max().unwrap_or(0);
        let rmax = row_lists.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = format!("{n} {m}\n{cmax} {rmax}\n");
        out.push_str(
            &col_lists
                .iter()
                .map(|l| l.len().to_string())
                .collect::<Vec<_>>()
                .join(" "),
        );
        out.push('\n');
        out.push_str(
            &row_lists
                .iter()
                .map(|l| l.len().to_string())
                .collect::<Vec<_>>()
                .join(" "),
        );
        out.push('\n');
        for list in &col_lists {
            let mut entries: Vec<String> = list.iter().map(|&r| (r + 1).to_string()).collect();
            entries.resize(cmax, "0".into());
            out.push_str(&entries.join(" "));
            out.push('\n');
        }
        for list in &row_lists {
            let mut entries: Vec<String> = list.iter().map(|&c| (c + 1).to_string()).collect();
            entries.resize(rmax, "0".into());
            out.push_str(&entries.join(" "));
            out.push('\n');
        }
        out
    }

    /// Reads padded and unpadded alist files; the flavour is detected from
    /// the total token count.
    pub fn from_alist(text: &str) -> Result<IncidenceMatrix> {
        let tokens: Vec<usize> = text
            .split_ascii_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad alist token {tok:?}: {e}")))
            })
            .collect::<Result<_>>()?;
        let mut it = tokens.iter().copied();
        let mut next = |what: &str| {
            it.next()
                .ok_or_else(|| Error::Parse(format!("alist truncated at {what}")))
        };
        let n = next("column count")?;
        let m = next("row count")?;
        let cmax = next("max column degree")?;
        let rmax = next("max row degree")?;
        let col_deg: Vec<usize> = (0..n).map(|_| next("column degree")).collect::<Result<_>>()?;
        let row_deg: Vec<usize> = (0..m).map(|_| next("row degree")).collect::<Result<_>>()?;
        let body = 4 + n + m;
        let padded = tokens.len() == body + n * cmax + m * rmax;
        let unpadded = tokens.len()
            == body + col_deg.iter().sum::<usize>() + row_deg.iter().sum::<usize>();
        if !padded && !unpadded {
            return Err(Error::Parse("alist token count matches neither flavour".into()));
        }
        let mut matrix = IncidenceMatrix::zero(m, n);
        for (c, &deg) in col_deg.iter().enumerate() {
            let count = if padded { cmax } else { deg };
            for i in 0..count {
                let r = next("column entry")?;
                if i < deg {
                    if r == 0 || r > m {
                        return Err(Error::Parse(format!("row index {r} out of range")));
                    }
                    matrix.set(r - 1, c, true);
                }
            }
        }
        for (r, &deg) in row_deg.iter().enumerate() {
            let count = if padded { rmax } else { deg };
            for i in 0..count {
                let c = next("row entry")?;
                if i < deg {
                    if c == 0 || c > n {
                        return Err(Error::Parse(format!("column index {c} out of range")));
                    }
                    if !matrix.get(r, c - 1) {
                        return Err(Error::Parse(format!(
                            "row list names ({r},{c}) absent from the column lists"
                        )));
                    }
                }
            }
        }
        Ok(matrix)
    }
}
