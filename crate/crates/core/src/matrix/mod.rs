//! Incidence matrices of configurations and their structure.
//!
//! Rows are lines, columns are points. A square 0/1 matrix with k units in
//! every row and column and no 2x2 all-ones submatrix (J2-free) is exactly
//! an incidence matrix of a symmetric configuration v_k; J2-freeness is the
//! girth >= 6 condition of the Levi graph.

mod bdc;
mod io;
pub(crate) mod koenig;

pub use bdc::{bdc_assemble, sigma_t, BdcMatrix};
pub use koenig::{koenig_decompose, remove_permutations, PermDecomposition};

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::ruler::ModularRuler;

#[derive(Debug, Clone)]
pub struct IncidenceMatrix {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<BitVec>,
    block_shape: Option<(u64, u64)>,
    provenance: Vec<String>,
}

/// Equality is structural (dimensions and entries); block-shape hints and
/// provenance notes do not make two matrices different.
impl PartialEq for IncidenceMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n_rows == other.n_rows && self.n_cols == other.n_cols && self.rows == other.rows
    }
}

impl Eq for IncidenceMatrix {}

impl IncidenceMatrix {
    pub fn zero(n_rows: usize, n_cols: usize) -> IncidenceMatrix {
        IncidenceMatrix {
            n_rows,
            n_cols,
            rows: (0..n_rows).map(|_| BitVec::new(n_cols)).collect(),
            block_shape: None,
            provenance: Vec::new(),
        }
    }

    /// Build from explicit per-row column lists.
    pub fn from_row_supports(
        n_rows: usize,
        n_cols: usize,
        supports: &[Vec<usize>],
    ) -> IncidenceMatrix {
        let mut m = IncidenceMatrix::zero(n_rows, n_cols);
        for (i, cols) in supports.iter().enumerate() {
            for &c in cols {
                m.set(i, c, true);
            }
        }
        m
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.rows[r].count_ones()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0usize; self.n_cols];
        for row in &self.rows {
            for c in row.iter_ones() {
                w[c] += 1;
            }
        }
        w
    }

    pub fn block_shape(&self) -> Option<(u64, u64)> {
        self.block_shape
    }

    pub fn set_block_shape(&mut self, shape: Option<(u64, u64)>) {
        self.block_shape = shape;
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    pub fn push_provenance(&mut self, step: impl Into<String>) {
        self.provenance.push(step.into());
    }

    /// Total number of units.
    pub fn ones(&self) -> usize {
        self.rows.iter().map(BitVec::count_ones).sum()
    }

    /// Configuration test: square, k units in every row and column, and no
    /// two rows sharing two or more columns. On failure the diagnostic names
    /// the first violation in row-major order.
    pub fn check_configuration(&self, k: u64) -> std::result::Result<(), String> {
        if !self.is_square() {
            return Err(format!("matrix is {}x{}, not square", self.n_rows, self.n_cols));
        }
        for (i, row) in self.rows.iter().enumerate() {
            let w = row.count_ones() as u64;
            if w != k {
                return Err(format!("row {i} has weight {w}, expected {k}"));
            }
        }
        for (c, w) in self.col_weights().into_iter().enumerate() {
            if w as u64 != k {
                return Err(format!("column {c} has weight {w}, expected {k}"));
            }
        }
        // J2 search: a column pair repeating across rows
        let pair_capacity = self.n_rows * (k as usize * k.saturating_sub(1) as usize) / 2;
        let mut pairs: Vec<u64> = Vec::with_capacity(pair_capacity);
        for row in &self.rows {
            let ones: Vec<usize> = row.iter_ones().collect();
            for (i, &c1) in ones.iter().enumerate() {
                for &c2 in &ones[i + 1..] {
                    pairs.push(c1 as u64 * self.n_cols as u64 + c2 as u64);
                }
            }
        }
        pairs.sort_unstable();
        if let Some(w) = pairs.windows(2).find(|w| w[0] == w[1]) {
            let (c1, c2) = (w[0] / self.n_cols as u64, w[0] % self.n_cols as u64);
            let guilty: Vec<usize> = (0..self.n_rows)
                .filter(|&r| self.get(r, c1 as usize) && self.get(r, c2 as usize))
                .collect();
            return Err(format!(
                "rows {guilty:?} share columns {c1} and {c2} (J2 submatrix)"
            ));
        }
        Ok(())
    }

    pub fn is_configuration(&self, k: u64) -> bool {
        self.check_configuration(k).is_ok()
    }

    /// Structure test: viewed as a t x t grid of d x d blocks, every block
    /// is a permutation matrix or zero. This is the shape that guarantees
    /// extension capacity t * floor(d/(k-1)).
    pub fn structure_e_check(&self, t: u64, d: u64) -> Result<bool> {
        if !self.is_square() || t * d != self.n_rows as u64 {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} does not split into {t}x{t} blocks of size {d}",
                self.n_rows, self.n_cols
            )));
        }
        let k = self.rows.first().map_or(0, |r| r.count_ones()) as u64;
        if t < k || d + 1 < k {
            return Err(Error::ShapeMismatch(format!(
                "need t >= k and d >= k-1, got t={t}, d={d}, k={k}"
            )));
        }
        for bi in 0..t as usize {
            for bj in 0..t as usize {
                if self.block_kind(bi, bj, d as usize).is_none() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `Some(None)` for a zero block, `Some(perm)` for a permutation block
    /// (perm[r] = the column of the unit in block row r), `None` otherwise.
    pub(crate) fn block_kind(&self, bi: usize, bj: usize, d: usize) -> Option<Option<Vec<usize>>> {
        let mut perm = Vec::with_capacity(d);
        let mut col_seen = vec![false; d];
        let mut zeros = 0usize;
        for r in 0..d {
            let row = &self.rows[bi * d + r];
            let mut hit = None;
            for c in 0..d {
                if row.get(bj * d + c) {
                    if hit.is_some() {
                        return None; // two units in a block row
                    }
                    hit = Some(c);
                }
            }
            match hit {
                Some(c) => {
                    if col_seen[c] {
                        return None;
                    }
                    col_seen[c] = true;
                    perm.push(c);
                }
                None => zeros += 1,
            }
        }
        if zeros == d {
            Some(None)
        } else if zeros == 0 {
            Some(Some(perm))
        } else {
            None
        }
    }
}

/// The circulant incidence matrix of a valid ruler: row i has units at
/// { a + i mod v }. The result is an incidence matrix of the cyclic
/// symmetric configuration v_k.
pub fn circulant_from_ruler(r: &ModularRuler) -> Result<IncidenceMatrix> {
    if !r.is_valid() {
        return Err(Error::InvalidRuler { v: r.v() });
    }
    let v = r.v() as usize;
    let mut m = IncidenceMatrix::zero(v, v);
    for i in 0..v {
        for &a in r.marks() {
            m.set(i, (a as usize + i) % v, true);
        }
    }
    m.push_provenance(format!("circulant({})", r.to_line()));
    Ok(m)
}
