//! Provenance-chained evidence that a (v,k) pair is achieved.
//!
//! A witness is a recipe, not a blob: replaying the chain from scratch must
//! reproduce a structure that validates with the stated parameters. The
//! database is a JSON-lines file, one witness per line, deduplicated on
//! (v, k, cyclic) keeping the shortest chain.

use super::registry::KnownFacts;
use crate::construct;
use crate::error::{Error, Result};
use crate::extend;
use crate::matrix::{self, BdcMatrix, IncidenceMatrix};
use crate::ruler::{retest_modulus, ModularRuler};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::{BufRead, Write};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "gen", rename_all = "snake_case")]
pub enum PointGenerator {
    ConicExternal,
    ConicInternal,
    HermitianComplement,
    BaerUnion { c: u64 },
    SingerSuborbit { t: u64, j: u64 },
}

/// One step of a witness chain. Ruler steps flow into matrix steps through
/// `Circulant` / `BdcAssemble` + `Expand`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Step {
    Singer { q: u64 },
    Bose { q: u64 },
    Ruzsa { p: u64, g: u64 },
    /// A ruler given by its marks (e.g. found by the oracle); replay
    /// revalidates it.
    ExplicitRuler { v: u64, marks: Vec<u64>, source: String },
    AffineMap { m: u64, b: u64 },
    DeleteMarks { subset: Vec<u64> },
    /// Keep the marks, change the modulus (revalidated on replay).
    RetestModulus { v: u64 },
    Circulant,
    BdcAssemble { t: u64 },
    TrimUniform { deltas: Vec<u64> },
    SelectBlocks { j: u64, c: u64 },
    SelectBlocksAlternating { j: u64, f: u64 },
    Expand,
    RemovalFamily { q: u64, s: u64, point_on_line: bool },
    ExtensionAg { q: u64, s: u64, delta: u64, theta: u64 },
    ConstructionA { q: u64, generator: PointGenerator, k: u64 },
    RemovePermutations { k: u64, delta: u64 },
    ExtendMany { k: u64, theta: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub v: u64,
    pub k: u64,
    pub cyclic: bool,
    pub chain: Vec<Step>,
}

#[derive(Debug)]
enum Payload {
    Empty,
    Ruler(ModularRuler),
    Bdc(BdcMatrix),
    Matrix(IncidenceMatrix),
}

impl Payload {
    fn kind(&self) -> &'static str {
        match self {
            Payload::Empty => "nothing",
            Payload::Ruler(_) => "ruler",
            Payload::Bdc(_) => "bdc",
            Payload::Matrix(_) => "matrix",
        }
    }
}

fn mismatch(step: usize, detail: impl Into<String>) -> Error {
    Error::ReplayMismatch {
        step,
        detail: detail.into(),
    }
}

impl Witness {
    pub fn ruler(v: u64, k: u64, chain: Vec<Step>) -> Witness {
        Witness {
            v,
            k,
            cyclic: true,
            chain,
        }
    }

    pub fn matrix(v: u64, k: u64, chain: Vec<Step>) -> Witness {
        Witness {
            v,
            k,
            cyclic: false,
            chain,
        }
    }

    /// Replay the chain from scratch. Succeeds only when the final structure
    /// validates and matches the stated (v, k, cyclic).
    pub fn replay(&self) -> Result<()> {
        let mut payload = Payload::Empty;
        for (i, step) in self.chain.iter().enumerate() {
            payload = apply_step(payload, step, i)?;
        }
        let last = self.chain.len();
        match payload {
            Payload::Ruler(r) => {
                if !self.cyclic {
                    return Err(mismatch(last, "ruler witness not marked cyclic"));
                }
                if r.v() != self.v || r.k() != self.k {
                    return Err(mismatch(
                        last,
                        format!("replayed ({},{}), stated ({},{})", r.v(), r.k(), self.v, self.k),
                    ));
                }
                if !r.is_valid() {
                    return Err(mismatch(last, "replayed ruler is invalid"));
                }
                Ok(())
            }
            Payload::Matrix(m) => {
                if self.cyclic {
                    return Err(mismatch(last, "matrix witness marked cyclic"));
                }
                if m.n_rows() as u64 != self.v {
                    return Err(mismatch(
                        last,
                        format!("replayed v = {}, stated {}", m.n_rows(), self.v),
                    ));
                }
                m.check_configuration(self.k)
                    .map_err(|d| mismatch(last, d))
            }
            other => Err(mismatch(last, format!("chain ended in {}", other.kind()))),
        }
    }
}

fn apply_step(payload: Payload, step: &Step, i: usize) -> Result<Payload> {
    let want = |payload: &Payload, kind: &str| -> Error {
        mismatch(i, format!("step needs a {kind}, found {}", payload.kind()))
    };
    Ok(match step {
        Step::Singer { q } => Payload::Ruler(construct::singer_ruler(*q)?),
        Step::Bose { q } => Payload::Ruler(construct::bose_ruler(*q)?),
        Step::Ruzsa { p, g } => Payload::Ruler(construct::ruzsa_ruler(*p, Some(*g))?),
        Step::ExplicitRuler { v, marks, .. } => {
            Payload::Ruler(ModularRuler::validated(marks.clone(), *v)?)
        }
        Step::AffineMap { m, b } => match payload {
            Payload::Ruler(r) => Payload::Ruler(r.affine_map(*m, *b)?),
            other => return Err(want(&other, "ruler")),
        },
        Step::DeleteMarks { subset } => match payload {
            Payload::Ruler(r) => Payload::Ruler(r.delete_marks(subset)?),
            other => return Err(want(&other, "ruler")),
        },
        Step::RetestModulus { v } => match payload {
            Payload::Ruler(r) => {
                if !retest_modulus(r.marks(), *v)? {
                    return Err(mismatch(i, format!("marks are not a ruler mod {v}")));
                }
                Payload::Ruler(ModularRuler::new(r.marks().to_vec(), *v)?)
            }
            other => return Err(want(&other, "ruler")),
        },
        Step::Circulant => match payload {
            Payload::Ruler(r) => Payload::Matrix(matrix::circulant_from_ruler(&r)?),
            other => return Err(want(&other, "ruler")),
        },
        Step::BdcAssemble { t } => match payload {
            Payload::Ruler(r) => Payload::Bdc(matrix::bdc_assemble(&r, *t)?),
            other => return Err(want(&other, "ruler")),
        },
        Step::TrimUniform { deltas } => match payload {
            Payload::Bdc(b) => Payload::Bdc(b.trim_uniform(deltas)?),
            other => return Err(want(&other, "bdc")),
        },
        Step::SelectBlocks { j, c } => match payload {
            Payload::Bdc(b) => Payload::Bdc(b.select_blocks(*j, *c)?),
            other => return Err(want(&other, "bdc")),
        },
        Step::SelectBlocksAlternating { j, f } => match payload {
            Payload::Bdc(b) => Payload::Bdc(b.select_blocks_alternating(*j, *f)?),
            other => return Err(want(&other, "bdc")),
        },
        Step::Expand => match payload {
            Payload::Bdc(b) => Payload::Matrix(b.expand()),
            other => return Err(want(&other, "bdc")),
        },
        Step::RemovalFamily { q, s, point_on_line } => {
            Payload::Matrix(construct::removal_family(*q, *s, *point_on_line)?)
        }
        Step::ExtensionAg { q, s, delta, theta } => {
            Payload::Matrix(extend::extension_family_ag(*q, *s, *delta, *theta)?)
        }
        Step::ConstructionA { q, generator, k } => {
            let points = match generator {
                PointGenerator::ConicExternal => construct::conic_points(*q)?.0,
                PointGenerator::ConicInternal => construct::conic_points(*q)?.1,
                PointGenerator::HermitianComplement => construct::hermitian_complement(*q)?,
                PointGenerator::BaerUnion { c } => construct::baer_union(*q, *c)?,
                PointGenerator::SingerSuborbit { t, j } => construct::singer_suborbit(*q, *t, *j)?,
            };
            match construct::construction_a(&points, *k)? {
                construct::ConstructionOutcome::Symmetric(m) => Payload::Matrix(m),
                construct::ConstructionOutcome::NonSymmetric { r, .. } => {
                    return Err(mismatch(i, format!("line degree r = {r} is not k = {k}")))
                }
            }
        }
        Step::RemovePermutations { k, delta } => match payload {
            Payload::Matrix(m) => Payload::Matrix(matrix::remove_permutations(&m, *k, *delta)?),
            other => return Err(want(&other, "matrix")),
        },
        Step::ExtendMany { k, theta } => match payload {
            Payload::Matrix(m) => Payload::Matrix(extend::extend_many(&m, *k, *theta)?),
            other => return Err(want(&other, "matrix")),
        },
    })
}

/// Full replay plus validation; true exactly when the witness holds up.
pub fn verify_witness(w: &Witness) -> bool {
    w.replay().is_ok()
}

/// In-memory witness store with JSON-lines persistence. Keyed by
/// (k, v, cyclic); shorter chains win on duplicate keys, serialised order
/// breaks ties so merges are order-independent.
#[derive(Debug, Default, Clone)]
pub struct WitnessDb {
    entries: BTreeMap<(u64, u64, bool), Witness>,
}

impl WitnessDb {
    pub fn new() -> WitnessDb {
        WitnessDb::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Witness> {
        self.entries.values()
    }

    pub fn get(&self, v: u64, k: u64, cyclic: bool) -> Option<&Witness> {
        self.entries.get(&(k, v, cyclic))
    }

    /// Insert after a registry check. Returns whether the witness was kept
    /// (a shorter or lexicographically earlier chain for the same key wins).
    pub fn insert(&mut self, w: Witness, registry: &KnownFacts) -> Result<bool> {
        registry.check_witness(w.v, w.k, w.cyclic)?;
        let key = (w.k, w.v, w.cyclic);
        match self.entries.get(&key) {
            Some(existing) if !chain_precedes(&w, existing) => Ok(false),
            _ => {
                self.entries.insert(key, w);
                Ok(true)
            }
        }
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        for w in self.entries.values() {
            serde_json::to_writer(&mut out, w)?;
            out.write_all(b"\n")?;
        }
        out.flush()?;
        Ok(())
    }

    /// Load a JSON-lines file, verifying every witness by replay and
    /// checking it against the registry.
    pub fn load(path: &std::path::Path, registry: &KnownFacts) -> Result<WitnessDb> {
        let mut db = WitnessDb::new();
        let file = std::io::BufReader::new(std::fs::File::open(path)?);
        for (lineno, line) in file.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let w: Witness = serde_json::from_str(&line)?;
            w.replay().map_err(|e| {
                Error::ReplayMismatch {
                    step: lineno,
                    detail: format!("line {}: {e}", lineno + 1),
                }
            })?;
            db.insert(w, registry)?;
        }
        Ok(db)
    }
}

fn chain_precedes(a: &Witness, b: &Witness) -> bool {
    let (la, lb) = (a.chain.len(), b.chain.len());
    la < lb
        || la == lb
            && serde_json::to_string(&a.chain).unwrap() < serde_json::to_string(&b.chain).unwrap()
}
