//! Golomb rulers and (v,k) modular Golomb rulers.
//!
//! A set of k residues mod v whose ordered pairwise differences are distinct
//! and nonzero is equivalent to a cyclic symmetric configuration v_k (the
//! circulant matrix with the marks as first row) and to a deficient cyclic
//! difference set. This module holds the ruler algebra: validation,
//! deficiency, affine images, mark deletions, modulus rescans, quotients,
//! and the exhaustive existence oracle.

mod bounds;
mod io;
mod oracle;

pub use bounds::{golomb_bound, plane_bound, GOLOMB_BOUND_MAX_K};
pub use oracle::{oracle_exists, oracle_exists_with_threads, OracleResult};

use crate::bits::BitVec;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// k residue marks mod v, strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModularRuler {
    v: u64,
    marks: Vec<u64>,
}

/// Difference coverage of a mark set mod v.
#[derive(Debug, Clone)]
pub struct DifferenceProfile {
    /// `covered[r]` for r in 1..v marks residues represented by some difference.
    pub covered: BitVec,
    /// Residues hit by more than one ordered difference, increasing.
    pub collisions: Vec<u64>,
    /// Number of nonzero residues not represented by any difference.
    pub uncovered_count: u64,
}

impl DifferenceProfile {
    /// Residues in 1..v not represented by any difference, increasing.
    pub fn uncovered(&self) -> Vec<u64> {
        (1..self.covered.len() as u64)
            .filter(|&r| !self.covered.get(r as usize))
            .collect()
    }
}

/// Check whether `marks` form a (v,k) modular Golomb ruler: all ordered
/// differences distinct and nonzero mod v. A coverage profile is returned
/// either way.
pub fn validate_modular(marks: &[u64], v: u64) -> Result<(bool, DifferenceProfile)> {
    if v == 0 || !is_strictly_increasing_below(marks, v) {
        return Err(Error::BadMarks { v });
    }
    let mut covered = BitVec::new(v as usize);
    let mut collisions = Vec::new();
    let mut ok = true;
    for (i, &a) in marks.iter().enumerate() {
        for &b in &marks[..i] {
            let d = a - b;
            for r in [d, v - d] {
                if covered.get(r as usize) {
                    ok = false;
                    collisions.push(r);
                } else {
                    covered.set(r as usize, true);
                }
            }
            if d == v - d {
                // a difference equal to its own negation collides with itself
                ok = false;
                collisions.push(d);
            }
        }
    }
    collisions.sort_unstable();
    collisions.dedup();
    let uncovered_count = (v - 1) - covered.count_ones() as u64;
    Ok((
        ok,
        DifferenceProfile {
            covered,
            collisions,
            uncovered_count,
        },
    ))
}

fn is_strictly_increasing_below(marks: &[u64], v: u64) -> bool {
    marks.windows(2).all(|w| w[0] < w[1]) && marks.last().is_none_or(|&m| m < v)
}

impl ModularRuler {
    /// Structural construction: marks strictly increasing in [0, v). The
    /// Golomb property is not checked here; see [`ModularRuler::validated`].
    pub fn new(marks: Vec<u64>, v: u64) -> Result<ModularRuler> {
        if v == 0 || !is_strictly_increasing_below(&marks, v) {
            return Err(Error::BadMarks { v });
        }
        Ok(ModularRuler { v, marks })
    }

    /// Construction that also requires the ruler to be valid.
    pub fn validated(marks: Vec<u64>, v: u64) -> Result<ModularRuler> {
        let (ok, _) = validate_modular(&marks, v)?;
        if !ok {
            return Err(Error::InvalidRuler { v });
        }
        Ok(ModularRuler { v, marks })
    }

    pub fn v(&self) -> u64 {
        self.v
    }

    pub fn k(&self) -> u64 {
        self.marks.len() as u64
    }

    pub fn marks(&self) -> &[u64] {
        &self.marks
    }

    pub fn validate(&self) -> (bool, DifferenceProfile) {
        validate_modular(&self.marks, self.v).expect("structurally sound by construction")
    }

    pub fn is_valid(&self) -> bool {
        self.validate().0
    }

    /// Deficiency d = v - (k^2 - k + 1) together with the uncovered residues.
    /// Errors when the ruler is not valid.
    pub fn deficiency(&self) -> Result<(u64, Vec<u64>)> {
        let (ok, profile) = self.validate();
        if !ok {
            return Err(Error::InvalidRuler { v: self.v });
        }
        let k = self.k();
        let d = self.v - (k * k - k + 1);
        let uncovered = profile.uncovered();
        debug_assert_eq!(d, uncovered.len() as u64);
        Ok((d, uncovered))
    }

    /// The image { m*a + b mod v } sorted; valid whenever the input is,
    /// provided gcd(m, v) = 1.
    pub fn affine_map(&self, m: u64, b: u64) -> Result<ModularRuler> {
        if gcd(m % self.v, self.v) != 1 {
            return Err(Error::NotCoprime { m, v: self.v });
        }
        let mut marks: Vec<u64> = self
            .marks
            .iter()
            .map(|&a| (m % self.v * a + b % self.v) % self.v)
            .collect();
        marks.sort_unstable();
        ModularRuler::new(marks, self.v)
    }

    /// Remove a subset of the marks; validity is inherited.
    pub fn delete_marks(&self, subset: &[u64]) -> Result<ModularRuler> {
        if !subset.iter().all(|s| self.marks.contains(s)) {
            return Err(Error::NotASubset);
        }
        let marks = self
            .marks
            .iter()
            .copied()
            .filter(|a| !subset.contains(a))
            .collect();
        ModularRuler::new(marks, self.v)
    }

    /// Translate so the first mark is 0 (same ruler up to translation).
    pub fn normalized(&self) -> ModularRuler {
        match self.marks.first() {
            None | Some(0) => self.clone(),
            Some(&a0) => {
                let mut marks: Vec<u64> =
                    self.marks.iter().map(|&a| (a + self.v - a0) % self.v).collect();
                marks.sort_unstable();
                ModularRuler { v: self.v, marks }
            }
        }
    }

    /// Lexicographic minimum over the full symmetry group: translations and
    /// unit multipliers (which include the reflection x -> -x). Quadratic in
    /// phi(v)*k, so this is for explicit deduplication, not hot paths.
    pub fn canonical(&self) -> ModularRuler {
        let mut best: Option<Vec<u64>> = None;
        for m in 1..self.v {
            if gcd(m, self.v) != 1 {
                continue;
            }
            let mut mapped: Vec<u64> = self.marks.iter().map(|&a| m * a % self.v).collect();
            mapped.sort_unstable();
            for i in 0..mapped.len() {
                let shift = mapped[i];
                let mut cand: Vec<u64> =
                    mapped.iter().map(|&a| (a + self.v - shift) % self.v).collect();
                cand.sort_unstable();
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        ModularRuler {
            v: self.v,
            marks: best.unwrap_or_default(),
        }
    }

    /// Quotient rulers: for each residue class h mod t, B_h = {(a-h)/t} over
    /// the marks with a = h (mod t), a ruler mod d = v/t of weight w_h.
    /// Weights sum to k.
    pub fn quotient(&self, t: u64) -> Result<Vec<(ModularRuler, u64)>> {
        if t == 0 || !self.v.is_multiple_of(t) {
            return Err(Error::NotADivisor { t, v: self.v });
        }
        let d = self.v / t;
        let mut out = Vec::with_capacity(t as usize);
        for h in 0..t {
            let marks: Vec<u64> = self
                .marks
                .iter()
                .filter(|&&a| a % t == h)
                .map(|&a| (a - h) / t)
                .collect();
            let w = marks.len() as u64;
            out.push((ModularRuler::new(marks, d)?, w));
        }
        debug_assert_eq!(out.iter().map(|(_, w)| w).sum::<u64>(), self.k());
        Ok(out)
    }
}

/// Whether the same marks stay a valid ruler under a different modulus
/// v' > max(marks).
pub fn retest_modulus(marks: &[u64], v_new: u64) -> Result<bool> {
    let max = marks.last().copied().unwrap_or(0);
    if v_new <= max {
        return Err(Error::ModulusTooSmall { v: v_new, max });
    }
    Ok(validate_modular(marks, v_new)?.0)
}

/// All moduli v' in [v_low, v_high] under which `marks` form a valid ruler.
///
/// Computed from the positive-difference multiset: with all marks below the
/// modulus, a collision mod v' happens exactly when two positive differences
/// are equal as integers (no modulus works) or when d + d' = v' for a pair of
/// positive differences (including d = d', i.e. 2d = v'). So one pass builds
/// the multiset and the forbidden-sum table, and each modulus is a lookup.
pub fn delta_scan(marks: &[u64], v_low: u64, v_high: u64) -> Result<Vec<u64>> {
    let max = marks.last().copied().unwrap_or(0);
    if v_low <= max {
        return Err(Error::ModulusTooSmall { v: v_low, max });
    }
    if v_high < v_low {
        return Err(Error::EmptyRange);
    }
    let mut diffs = Vec::with_capacity(marks.len() * (marks.len() - 1) / 2);
    for (i, &a) in marks.iter().enumerate() {
        for &b in &marks[..i] {
            diffs.push(a - b);
        }
    }
    let mut sorted = diffs.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Ok(Vec::new()); // equal integer differences collide mod everything
    }
    let mut forbidden_sum = BitVec::new(2 * max as usize + 2);
    for (i, &d) in sorted.iter().enumerate() {
        for &e in &sorted[i..] {
            forbidden_sum.set((d + e) as usize, true);
        }
    }
    Ok((v_low..=v_high)
        .filter(|&v| v > 2 * max || !forbidden_sum.get(v as usize))
        .collect())
}

/// A Golomb ruler: integer marks with all positive pairwise differences
/// distinct, normalised so the first mark is 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GolombRuler {
    marks: Vec<u64>,
}

impl GolombRuler {
    pub fn new(marks: Vec<u64>) -> Result<GolombRuler> {
        if marks.is_empty() || marks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NotGolomb);
        }
        let base = marks[0];
        let marks: Vec<u64> = marks.iter().map(|&a| a - base).collect();
        let mut diffs = Vec::new();
        for (i, &a) in marks.iter().enumerate() {
            for &b in &marks[..i] {
                diffs.push(a - b);
            }
        }
        diffs.sort_unstable();
        if diffs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotGolomb);
        }
        Ok(GolombRuler { marks })
    }

    pub fn k(&self) -> u64 {
        self.marks.len() as u64
    }

    /// Length L = largest mark.
    pub fn length(&self) -> u64 {
        self.marks.last().copied().unwrap_or(0)
    }

    pub fn marks(&self) -> &[u64] {
        &self.marks
    }
}

/// Any Golomb ruler of length L is a (v,k) modular Golomb ruler for all
/// v >= 2L + 1. The modular property is guaranteed and only rechecked in
/// debug builds.
pub fn modular_from_golomb(g: &GolombRuler, v: u64) -> Result<ModularRuler> {
    let bound = 2 * g.length() + 1;
    if v < bound {
        return Err(Error::ModulusBelowGolombBound { v, bound });
    }
    let r = ModularRuler::new(g.marks().to_vec(), v)?;
    debug_assert!(r.is_valid());
    Ok(r)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Units mod v in increasing order.
pub fn units(v: u64) -> Vec<u64> {
    (1..v).filter(|&m| gcd(m, v) == 1).collect()
}
