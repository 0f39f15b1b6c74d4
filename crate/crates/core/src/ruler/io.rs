//! Ruler interchange formats: a one-line text form `v:k:a1,a2,...,ak` and a
//! JSON object `{"v":..., "marks":[...]}`. Both round-trip bit-exactly.

use super::ModularRuler;
use crate::error::{Error, Result};

impl ModularRuler {
    pub fn to_line(&self) -> String {
        let marks: Vec<String> = self.marks().iter().map(u64::to_string).collect();
        format!("{}:{}:{}", self.v(), self.k(), marks.join(","))
    }

    pub fn from_line(line: &str) -> Result<ModularRuler> {
        let mut parts = line.trim().splitn(3, ':');
        let v: u64 = parts
            .next()
            .ok_or_else(|| Error::Parse("missing modulus".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad modulus: {e}")))?;
        let k: usize = parts
            .next()
            .ok_or_else(|| Error::Parse("missing mark count".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad mark count: {e}")))?;
        let marks_part = parts.next().unwrap_or("");
        let marks: Vec<u64> = if marks_part.is_empty() {
            Vec::new()
        } else {
            marks_part
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|e| Error::Parse(format!("bad mark {s:?}: {e}")))
                })
                .collect::<Result<_>>()?
        };
        if marks.len() != k {
            return Err(Error::Parse(format!(
                "mark count {k} does not match {} marks",
                marks.len()
            )));
        }
        ModularRuler::new(marks, v)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("ruler serialisation cannot fail")
    }

    pub fn from_json(s: &str) -> Result<ModularRuler> {
        let raw: ModularRuler = serde_json::from_str(s)?;
        // re-run the structural checks; serde bypasses the constructor
        ModularRuler::new(raw.marks().to_vec(), raw.v())
    }
}
