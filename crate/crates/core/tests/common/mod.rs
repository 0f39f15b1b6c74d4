//! Shared test helpers: an independent naive ruler checker kept deliberately
//! separate from the library's incremental implementation, and a rejection
//! sampler for random valid rulers.

use configura_core::ruler::ModularRuler;
use rand::Rng;

/// Literal quadratic-time definition: all ordered differences a_i - a_j
/// (i != j) distinct and nonzero mod v.
pub fn naive_validate(marks: &[u64], v: u64) -> bool {
    let mut seen = vec![false; v as usize];
    for (i, &a) in marks.iter().enumerate() {
        for (j, &b) in marks.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = ((a + v) - b) % v;
            if d == 0 || seen[d as usize] {
                return false;
            }
            seen[d as usize] = true;
        }
    }
    true
}

/// All pairwise sums a_i + a_j (i <= j) distinct mod v: the Sidon-set test.
#[allow(dead_code)] // each test binary uses its own subset of these helpers
pub fn naive_sidon(marks: &[u64], v: u64) -> bool {
    let mut seen = vec![false; v as usize];
    for (i, &a) in marks.iter().enumerate() {
        for &b in &marks[i..] {
            let s = ((a + b) % v) as usize;
            if seen[s] {
                return false;
            }
            seen[s] = true;
        }
    }
    true
}

/// Random sorted mark set of size k in [0, v).
pub fn random_marks(rng: &mut impl Rng, v: u64, k: usize) -> Vec<u64> {
    let mut set = std::collections::BTreeSet::new();
    while set.len() < k {
        set.insert(rng.gen_range(0..v));
    }
    set.into_iter().collect()
}

/// Rejection-sample a random valid (v,k) modular Golomb ruler.
pub fn random_valid_ruler(rng: &mut impl Rng, v: u64, k: usize) -> Option<ModularRuler> {
    for _ in 0..2000 {
        let marks = random_marks(rng, v, k);
        if naive_validate(&marks, v) {
            return Some(ModularRuler::new(marks, v).expect("sorted in-range marks"));
        }
    }
    None
}
