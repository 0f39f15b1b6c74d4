//! Decomposition of a k-regular 0/1 matrix into k permutation matrices.
//!
//! A k-regular bipartite graph always splits into k perfect matchings; peel
//! one matching per round. The matching rule is fixed (augmenting paths
//! scanned in row order, lowest-index column preferred) so the decomposition
//! and everything derived from it is reproducible.

use super::IncidenceMatrix;
use crate::error::{Error, Result};

/// k permutations of [0, v); superposing them gives back the source matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermDecomposition {
    perms: Vec<Vec<usize>>,
}

impl PermDecomposition {
    pub fn k(&self) -> u64 {
        self.perms.len() as u64
    }

    /// `perms()[r][row]` = column of the unit in permutation r.
    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }

    /// Rebuild the superposition matrix.
    pub fn superpose(&self, v: usize) -> IncidenceMatrix {
        let mut m = IncidenceMatrix::zero(v, v);
        for perm in &self.perms {
            for (row, &col) in perm.iter().enumerate() {
                debug_assert!(!m.get(row, col), "permutations must be disjoint");
                m.set(row, col, true);
            }
        }
        m
    }
}

fn kuhn_augment(
    row: usize,
    adj: &[Vec<usize>],
    visited: &mut [bool],
    owner: &mut [Option<usize>],
) -> bool {
    for &c in &adj[row] {
        if visited[c] {
            continue;
        }
        visited[c] = true;
        if owner[c].is_none() || kuhn_augment(owner[c].unwrap(), adj, visited, owner) {
            owner[c] = Some(row);
            return true;
        }
    }
    false
}

/// Deterministic perfect matching (row -> column) on an explicit bipartite
/// adjacency, or None when no perfect matching exists. Rows are processed in
/// index order with lowest-index columns preferred.
pub(crate) fn perfect_matching(adj: &[Vec<usize>], n_cols: usize) -> Option<Vec<usize>> {
    let mut owner: Vec<Option<usize>> = vec![None; n_cols];
    for row in 0..adj.len() {
        let mut visited = vec![false; n_cols];
        if !kuhn_augment(row, adj, &mut visited, &mut owner) {
            return None;
        }
    }
    let mut perm = vec![usize::MAX; adj.len()];
    for (c, &o) in owner.iter().enumerate() {
        if let Some(r) = o {
            perm[r] = c;
        }
    }
    perm.iter().all(|&c| c != usize::MAX).then_some(perm)
}

/// Split a k-regular square matrix into k permutation matrices.
pub fn koenig_decompose(m: &IncidenceMatrix, k: u64) -> Result<PermDecomposition> {
    if !m.is_square() {
        return Err(Error::NotRegular {
            k,
            detail: format!("matrix is {}x{}", m.n_rows(), m.n_cols()),
        });
    }
    let v = m.n_rows();
    for r in 0..v {
        if m.row_weight(r) as u64 != k {
            return Err(Error::NotRegular {
                k,
                detail: format!("row {r} has weight {}", m.row_weight(r)),
            });
        }
    }
    for (c, w) in m.col_weights().into_iter().enumerate() {
        if w as u64 != k {
            return Err(Error::NotRegular {
                k,
                detail: format!("column {c} has weight {w}"),
            });
        }
    }
    // circulant matrices split by mark: one shift permutation per unit of
    // the first row, which keeps deletions of the last permutations cyclic
    if let Some(marks) = circulant_marks(m) {
        let perms = marks
            .into_iter()
            .map(|a| (0..v).map(|r| (r + a) % v).collect())
            .collect();
        return Ok(PermDecomposition { perms });
    }
    let mut adj: Vec<Vec<usize>> = (0..v).map(|r| m.row(r).iter_ones().collect()).collect();
    let mut perms = Vec::with_capacity(k as usize);
    for _ in 0..k {
        let mut owner: Vec<Option<usize>> = vec![None; v];
        for row in 0..v {
            let mut visited = vec![false; v];
            if !kuhn_augment(row, &adj, &mut visited, &mut owner) {
                return Err(Error::MatchingFailed);
            }
        }
        let mut perm = vec![0usize; v];
        for (c, &o) in owner.iter().enumerate() {
            match o {
                Some(r) => perm[r] = c,
                None => return Err(Error::MatchingFailed),
            }
        }
        for (r, &c) in perm.iter().enumerate() {
            adj[r].retain(|&x| x != c);
        }
        perms.push(perm);
    }
    Ok(PermDecomposition { perms })
}

/// Sorted first-row marks when every row is the first row shifted right by
/// its index, None otherwise.
fn circulant_marks(m: &IncidenceMatrix) -> Option<Vec<usize>> {
    let v = m.n_rows();
    let marks: Vec<usize> = m.row(0).iter_ones().collect();
    for r in 1..v {
        let row: Vec<usize> = m.row(r).iter_ones().collect();
        if row.len() != marks.len() || !marks.iter().all(|&a| m.get(r, (a + r) % v)) {
            return None;
        }
    }
    Some(marks)
}

/// Remove the last `delta` permutations of the deterministic decomposition,
/// leaving a configuration of degree k - delta. On circulant input this is
/// exactly the dismissal of the delta highest units of the first row, so the
/// result stays circulant.
pub fn remove_permutations(m: &IncidenceMatrix, k: u64, delta: u64) -> Result<IncidenceMatrix> {
    if delta >= k && !(delta == 0 && k == 0) {
        return Err(Error::PreconditionFailed(format!(
            "delta = {delta} must be smaller than k = {k}"
        )));
    }
    if delta == 0 {
        return Ok(m.clone());
    }
    let decomposition = koenig_decompose(m, k)?;
    let mut out = m.clone();
    for perm in &decomposition.perms()[(k - delta) as usize..] {
        for (row, &col) in perm.iter().enumerate() {
            out.set(row, col, false);
        }
    }
    out.push_provenance(format!("remove_permutations(delta={delta})"));
    Ok(out)
}
