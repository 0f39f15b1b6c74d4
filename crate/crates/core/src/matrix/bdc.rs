//! Block double-circulant matrices.
//!
//! A BDC matrix is a t x t grid of d x d circulant blocks whose weights form
//! a circulant t x t weight matrix. Every cyclic configuration with v = td
//! has a BDC incidence matrix: permute indices by sigma_t(ad + b) = bt + a
//! and the blocks of the permuted circulant are the circulants of the
//! quotient rulers B_h, with the sub-diagonal copies shifted right by one.
//! Keeping only the first-row indicator of every block makes weight surgery
//! (uniform trims, block selections) cheap and exact.

use super::IncidenceMatrix;
use crate::error::{Error, Result};
use crate::ruler::ModularRuler;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BdcMatrixRaw")]
pub struct BdcMatrix {
    t: u64,
    d: u64,
    /// blocks[i][j] is the sorted first-row indicator of the circulant block
    /// in grid position (i, j).
    blocks: Vec<Vec<Vec<u64>>>,
}

/// Deserialisation goes through the shape checks of [`BdcMatrix::from_blocks`].
#[derive(Deserialize)]
struct BdcMatrixRaw {
    t: u64,
    d: u64,
    blocks: Vec<Vec<Vec<u64>>>,
}

impl TryFrom<BdcMatrixRaw> for BdcMatrix {
    type Error = Error;
    fn try_from(raw: BdcMatrixRaw) -> Result<BdcMatrix> {
        BdcMatrix::from_blocks(raw.t, raw.d, raw.blocks)
    }
}

impl BdcMatrix {
    pub fn from_blocks(t: u64, d: u64, blocks: Vec<Vec<Vec<u64>>>) -> Result<BdcMatrix> {
        let b = BdcMatrix { t, d, blocks };
        b.check_shape()?;
        Ok(b)
    }

    fn check_shape(&self) -> Result<()> {
        let t = self.t as usize;
        if self.blocks.len() != t || self.blocks.iter().any(|row| row.len() != t) {
            return Err(Error::ShapeMismatch(format!(
                "expected a {t}x{t} block grid"
            )));
        }
        for row in &self.blocks {
            for ind in row {
                if ind.windows(2).any(|w| w[0] >= w[1]) || ind.last().is_some_and(|&x| x >= self.d)
                {
                    return Err(Error::ShapeMismatch(
                        "block indicator not strictly increasing below d".into(),
                    ));
                }
            }
        }
        // equal weights along block diagonals (Definition of a BDC matrix)
        for i in 0..t {
            for j in 0..t {
                let h = (j + t - i) % t;
                if self.blocks[i][j].len() != self.blocks[0][h].len() {
                    return Err(Error::ShapeMismatch(format!(
                        "block ({i},{j}) weight differs from its class {h}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn v(&self) -> u64 {
        self.t * self.d
    }

    pub fn block(&self, i: u64, j: u64) -> &[u64] {
        &self.blocks[i as usize][j as usize]
    }

    /// (w_0, ..., w_{t-1}): weights of the first block row.
    pub fn weight_vector(&self) -> Vec<u64> {
        self.blocks[0].iter().map(|b| b.len() as u64).collect()
    }

    /// The circulant t x t weight matrix, entry (i,j) = w_{j-i mod t}.
    pub fn weight_matrix(&self) -> Vec<Vec<u64>> {
        let w = self.weight_vector();
        let t = self.t as usize;
        (0..t)
            .map(|i| (0..t).map(|j| w[(j + t - i) % t]).collect())
            .collect()
    }

    pub fn k(&self) -> u64 {
        self.weight_vector().iter().sum()
    }

    /// Expand the block grid into the full v x v incidence matrix.
    pub fn expand(&self) -> IncidenceMatrix {
        let (t, d) = (self.t as usize, self.d as usize);
        let v = t * d;
        let mut m = IncidenceMatrix::zero(v, v);
        for bi in 0..t {
            for bj in 0..t {
                for r in 0..d {
                    for &s in &self.blocks[bi][bj] {
                        m.set(bi * d + r, bj * d + (s as usize + r) % d, true);
                    }
                }
            }
        }
        m.set_block_shape(Some((self.t, self.d)));
        m
    }

    /// Dismiss `deltas[h]` units per row from every block of weight class h
    /// (lowest indicator residues first), keeping every block circulant.
    /// The expansion stays a configuration, now of degree k - sum(deltas).
    pub fn trim_uniform(&self, deltas: &[u64]) -> Result<BdcMatrix> {
        let w = self.weight_vector();
        if deltas.len() != self.t as usize {
            return Err(Error::ShapeMismatch(format!(
                "expected {} deltas, got {}",
                self.t,
                deltas.len()
            )));
        }
        for (h, (&delta, &wh)) in deltas.iter().zip(&w).enumerate() {
            if delta > wh {
                return Err(Error::DeltaTooBig { delta, w: w[h] });
            }
        }
        let t = self.t as usize;
        let blocks = (0..t)
            .map(|i| {
                (0..t)
                    .map(|j| {
                        let h = (j + t - i) % t;
                        self.blocks[i][j][deltas[h] as usize..].to_vec()
                    })
                    .collect()
            })
            .collect();
        BdcMatrix::from_blocks(self.t, self.d, blocks)
    }

    /// Rotate the block columns so class j becomes the diagonal class, trim
    /// every off-diagonal class to the minimum off-diagonal weight, and keep
    /// the top-left c x c grid. Gives v' = c*d, k' = w_j + (c-1)*min.
    pub fn select_blocks(&self, j: u64, c: u64) -> Result<BdcMatrix> {
        if j >= self.t {
            return Err(Error::PreconditionFailed(format!(
                "class index {j} out of range 0..{}",
                self.t
            )));
        }
        if c == 0 || c > self.t {
            return Err(Error::BadC { c, t: self.t });
        }
        let shifted = self.rotate_classes(j);
        let w = shifted.weight_vector();
        let min_off = w[1..].iter().copied().min().unwrap_or(0);
        let deltas: Vec<u64> = w
            .iter()
            .enumerate()
            .map(|(h, &wh)| if h == 0 { 0 } else { wh - min_off })
            .collect();
        let trimmed = shifted.trim_uniform(&deltas)?;
        trimmed.truncate(c)
    }

    /// The alternating-parity variant for even t: after rotating class j to
    /// the diagonal, trim odd classes to their minimum and even nonzero
    /// classes to theirs, then keep a 2f x 2f grid. Gives v' = 2f*d,
    /// k' = w_j + w_od + (f-1)(w_ev + w_od).
    pub fn select_blocks_alternating(&self, j: u64, f: u64) -> Result<BdcMatrix> {
        if !self.t.is_multiple_of(2) {
            return Err(Error::TOdd(self.t));
        }
        if j >= self.t {
            return Err(Error::PreconditionFailed(format!(
                "class index {j} out of range 0..{}",
                self.t
            )));
        }
        if f == 0 || f > self.t / 2 {
            return Err(Error::BadF {
                f,
                half: self.t / 2,
            });
        }
        let shifted = self.rotate_classes(j);
        let w = shifted.weight_vector();
        let w_od = (1..self.t as usize)
            .step_by(2)
            .map(|h| w[h])
            .min()
            .expect("t >= 2");
        let w_ev = (2..self.t as usize).step_by(2).map(|h| w[h]).min();
        let deltas: Vec<u64> = w
            .iter()
            .enumerate()
            .map(|(h, &wh)| match (h, h % 2) {
                (0, _) => 0,
                (_, 1) => wh - w_od,
                _ => wh - w_ev.expect("even class exists when h >= 2"),
            })
            .collect();
        let trimmed = shifted.trim_uniform(&deltas)?;
        trimmed.truncate(2 * f)
    }

    /// Cyclically shift all block rows left by j positions (a relabelling of
    /// the block columns), so class j becomes class 0.
    fn rotate_classes(&self, j: u64) -> BdcMatrix {
        let t = self.t as usize;
        let blocks = (0..t)
            .map(|i| {
                (0..t)
                    .map(|jj| self.blocks[i][(jj + j as usize) % t].clone())
                    .collect()
            })
            .collect();
        BdcMatrix {
            t: self.t,
            d: self.d,
            blocks,
        }
    }

    /// Keep the top-left c x c block grid. Requires all off-diagonal classes
    /// to share one weight, so the truncation stays a BDC configuration.
    fn truncate(&self, c: u64) -> Result<BdcMatrix> {
        let w = self.weight_vector();
        debug_assert!(
            w[1..].windows(2).all(|p| p[0] == p[1]) || {
                // alternating selections: equal weights per parity class
                let odd: Vec<u64> = (1..w.len()).step_by(2).map(|h| w[h]).collect();
                let even: Vec<u64> = (2..w.len()).step_by(2).map(|h| w[h]).collect();
                odd.windows(2).all(|p| p[0] == p[1]) && even.windows(2).all(|p| p[0] == p[1])
            }
        );
        let c = c as usize;
        let blocks: Vec<Vec<Vec<u64>>> = (0..c)
            .map(|i| (0..c).map(|j| self.blocks[i][j].clone()).collect())
            .collect();
        // the truncated weight function depends on j - i through the parity
        // and zero-ness only, which both survive reduction mod the new t
        BdcMatrix::from_blocks(c as u64, self.d, blocks)
    }
}

/// Assemble the BDC form of a valid ruler for a divisor t of v: block (i,j)
/// is the circulant of the quotient ruler B_h with h = j - i mod t, shifted
/// right by one below the block diagonal. The expansion equals the plain
/// circulant conjugated by sigma_t(ad + b) = bt + a.
pub fn bdc_assemble(r: &ModularRuler, t: u64) -> Result<BdcMatrix> {
    if t == 0 || !r.v().is_multiple_of(t) {
        return Err(Error::NotADivisor { t, v: r.v() });
    }
    if !r.is_valid() {
        return Err(Error::InvalidRuler { v: r.v() });
    }
    let d = r.v() / t;
    let quotients = r.quotient(t)?;
    let t_us = t as usize;
    let blocks = (0..t_us)
        .map(|i| {
            (0..t_us)
                .map(|j| {
                    let h = (j + t_us - i) % t_us;
                    let base = quotients[h].0.marks();
                    if j >= i {
                        base.to_vec()
                    } else {
                        // sub-diagonal: rows shifted right by one
                        let mut shifted: Vec<u64> = base.iter().map(|&x| (x + 1) % d).collect();
                        shifted.sort_unstable();
                        shifted
                    }
                })
                .collect()
        })
        .collect();
    BdcMatrix::from_blocks(t, d, blocks)
}

/// The sigma_t index permutation: sigma_t(a*d + b) = b*t + a.
pub fn sigma_t(v: u64, t: u64, idx: u64) -> u64 {
    let d = v / t;
    let (a, b) = (idx / d, idx % d);
    b * t + a
}
