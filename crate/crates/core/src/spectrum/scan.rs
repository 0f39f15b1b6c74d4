//! The spectrum scans: assemble base rulers, run multiplier and modulus
//! rescans for cyclic configurations, run the family and extension grids for
//! non-cyclic ones, and keep every hit as a replayable witness.

use super::config::ScanConfig;
use super::registry::KnownFacts;
use super::witness::{PointGenerator, Step, Witness, WitnessDb};
use crate::construct;
use crate::error::{Error, Result};
use crate::extend;
use crate::gf::prime_power;
use crate::matrix;
use crate::ruler::{
    delta_scan, golomb_bound, oracle_exists, plane_bound, units, ModularRuler, OracleResult,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeSet;

/// Per-k spectrum summary over the scan window [P(k), scanned_to].
#[derive(Debug, Clone)]
pub struct SpectrumRecord {
    pub k: u64,
    pub p_bound: u64,
    pub g_bound: u64,
    pub scanned_to: u64,
    pub achieved_cyclic: BTreeSet<u64>,
    pub achieved_any: BTreeSet<u64>,
    /// Values whose cyclic nonexistence this run confirmed by exhaustion.
    pub oracle_confirmed_gaps: BTreeSet<u64>,
    /// Values the oracle gave up on within the budget.
    pub oracle_unresolved: BTreeSet<u64>,
}

impl SpectrumRecord {
    fn require_fully_scanned(&self) -> Result<()> {
        if self.scanned_to + 1 < self.g_bound {
            return Err(Error::NotPopulated {
                k: self.k,
                scanned: self.scanned_to,
                need: self.g_bound - 1,
            });
        }
        Ok(())
    }

    /// Smallest v0 such that every v in [v0, G(k)) is achieved cyclically;
    /// G(k) itself always counts as achieved.
    pub fn ec_upper_bound(&self) -> Result<u64> {
        self.require_fully_scanned()?;
        Ok(lowest_full_suffix(&self.achieved_cyclic, self.g_bound))
    }

    /// Same threshold over all (not necessarily cyclic) witnesses.
    pub fn e_upper_bound(&self) -> Result<u64> {
        self.require_fully_scanned()?;
        Ok(lowest_full_suffix(&self.achieved_any, self.g_bound))
    }

    pub fn gaps_cyclic(&self) -> Vec<u64> {
        (self.p_bound..=self.scanned_to)
            .filter(|v| !self.achieved_cyclic.contains(v))
            .collect()
    }

    pub fn gaps_any(&self) -> Vec<u64> {
        (self.p_bound..=self.scanned_to)
            .filter(|v| !self.achieved_any.contains(v))
            .collect()
    }
}

fn lowest_full_suffix(achieved: &BTreeSet<u64>, bound: u64) -> u64 {
    let mut v0 = bound;
    while v0 > 0 && achieved.contains(&(v0 - 1)) {
        v0 -= 1;
    }
    v0
}

/// Build the spectrum record for k from whatever the database holds.
pub fn record_from_db(k: u64, db: &WitnessDb, scanned_to: u64) -> Result<SpectrumRecord> {
    let p = plane_bound(k);
    let g = golomb_bound(k)?;
    let mut achieved_cyclic = BTreeSet::new();
    let mut achieved_any = BTreeSet::new();
    for w in db.iter().filter(|w| w.k == k) {
        if w.cyclic {
            achieved_cyclic.insert(w.v);
        }
        achieved_any.insert(w.v);
    }
    Ok(SpectrumRecord {
        k,
        p_bound: p,
        g_bound: g,
        scanned_to,
        achieved_cyclic,
        achieved_any,
        oracle_confirmed_gaps: BTreeSet::new(),
        oracle_unresolved: BTreeSet::new(),
    })
}

fn prime_powers(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo.max(2)..=hi).filter(|&q| prime_power(q).is_some())
}

fn mix_seed(seed: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(seed, |acc, &p| {
        (acc ^ p.wrapping_mul(0x9E37_79B9_7F4A_7C15)).rotate_left(17)
    })
}

/// Deletion subsets of `marks` of size delta: all of them when delta is
/// small, a seeded sample otherwise.
fn deletion_subsets(marks: &[u64], delta: u64, cfg: &ScanConfig, site_seed: u64) -> Vec<Vec<u64>> {
    if delta == 0 {
        return vec![Vec::new()];
    }
    let k = marks.len();
    if delta as usize > k {
        return Vec::new();
    }
    if delta <= cfg.deletion_exhaustive_delta {
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..delta as usize).collect();
        loop {
            out.push(idx.iter().map(|&i| marks[i]).collect());
            // next combination in lexicographic order
            let mut i = delta as usize;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if idx[i] != i + k - delta as usize {
                    break;
                }
            }
            idx[i] += 1;
            for j in i + 1..delta as usize {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(site_seed);
    let mut seen = BTreeSet::new();
    let mut attempts = 0u64;
    while (seen.len() as u64) < cfg.deletion_sample && attempts < cfg.deletion_sample * 20 {
        attempts += 1;
        let mut pool: Vec<u64> = marks.to_vec();
        pool.shuffle(&mut rng);
        let mut subset: Vec<u64> = pool[..delta as usize].to_vec();
        subset.sort_unstable();
        seen.insert(subset);
    }
    seen.into_iter().collect()
}

/// The base rulers for degree k: Singer, Bose, and Ruzsa rulers within the
/// modulus cap, together with their mark deletions down to k marks.
pub fn base_rulers(k: u64, cfg: &ScanConfig) -> Result<Vec<BaseRulerEntry>> {
    let g = golomb_bound(k)?;
    let v_cap = g * cfg.base_v_cap_factor;
    let mut bases: Vec<(ModularRuler, Vec<Step>)> = Vec::new();

    for q in prime_powers(2, 128) {
        if q * q + q < v_cap && q + 1 >= k {
            bases.push((construct::singer_ruler(q)?, vec![Step::Singer { q }]));
        }
    }
    for q in prime_powers(2, 128) {
        if q * q - 1 <= v_cap && q >= k {
            bases.push((construct::bose_ruler(q)?, vec![Step::Bose { q }]));
        }
    }
    for p in prime_powers(3, 128).filter(|&p| prime_power(p) == Some((p, 1))) {
        if p * p - p <= v_cap && p > k {
            let g_root = crate::gf::smallest_primitive_root(p);
            bases.push((
                construct::ruzsa_ruler(p, Some(g_root))?,
                vec![Step::Ruzsa { p, g: g_root }],
            ));
        }
    }

    let mut out = Vec::new();
    for (ruler, chain) in bases {
        let delta = ruler.k() - k;
        let site = mix_seed(cfg.seed, &[ruler.v(), ruler.k(), delta]);
        for subset in deletion_subsets(ruler.marks(), delta, cfg, site) {
            let (r, mut chain) = (ruler.clone(), chain.clone());
            let r = if subset.is_empty() {
                r
            } else {
                chain.push(Step::DeleteMarks {
                    subset: subset.clone(),
                });
                r.delete_marks(&subset)?
            };
            out.push(BaseRulerEntry { ruler: r, chain });
        }
    }
    Ok(out)
}

pub struct BaseRulerEntry {
    pub ruler: ModularRuler,
    pub chain: Vec<Step>,
}

fn multipliers_for(v: u64, cfg: &ScanConfig) -> Vec<u64> {
    let all = units(v);
    if v <= cfg.multiplier_full_below || all.len() as u64 <= cfg.multiplier_sample {
        return all;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, &[v, 0x6d756c]));
    let mut picked = BTreeSet::new();
    picked.insert(1u64); // keep the identity multiplier
    while (picked.len() as u64) < cfg.multiplier_sample {
        picked.insert(all[rng.gen_range(0..all.len())]);
    }
    picked.into_iter().collect()
}

/// Cyclic scan: for every base ruler and multiplier, rescan the modulus over
/// [P(k), v_max] and record each valid hit as a witness; optionally close
/// remaining holes with the exhaustive oracle. Results are deterministic and
/// independent of the worker count.
pub fn cyclic_scan(
    k: u64,
    cfg: &ScanConfig,
    registry: &KnownFacts,
    db: &mut WitnessDb,
) -> Result<SpectrumRecord> {
    let p = plane_bound(k);
    let g = golomb_bound(k)?;
    let v_max = cfg.v_max.unwrap_or(g - 1).min(g - 1);
    let bases = base_rulers(k, cfg)?;

    let mut candidates: Vec<(u64, Witness)> = bases
        .par_iter()
        .flat_map_iter(|base| {
            let mut local: Vec<(u64, Witness)> = Vec::new();
            let v = base.ruler.v();
            if (p..=v_max).contains(&v) {
                local.push((v, Witness::ruler(v, k, base.chain.clone())));
            }
            for m in multipliers_for(v, cfg) {
                let mapped = base
                    .ruler
                    .affine_map(m, 0)
                    .expect("units are coprime to the modulus");
                let lo = p.max(mapped.marks().last().copied().unwrap_or(0) + 1);
                if lo > v_max {
                    continue;
                }
                for v_new in delta_scan(mapped.marks(), lo, v_max)
                    .expect("scan bounds are checked above")
                {
                    let mut chain = base.chain.clone();
                    chain.push(Step::AffineMap { m, b: 0 });
                    chain.push(Step::RetestModulus { v: v_new });
                    local.push((v_new, Witness::ruler(v_new, k, chain)));
                }
            }
            local
        })
        .collect();

    // deterministic merge: shortest chain first, ties by serialised chain
    candidates.sort_by(|(va, wa), (vb, wb)| {
        va.cmp(vb)
            .then(wa.chain.len().cmp(&wb.chain.len()))
            .then_with(|| {
                serde_json::to_string(&wa.chain)
                    .unwrap()
                    .cmp(&serde_json::to_string(&wb.chain).unwrap())
            })
    });
    candidates.dedup_by(|(va, _), (vb, _)| va == vb);
    for (_, w) in candidates {
        debug_assert!(super::witness::verify_witness(&w));
        db.insert(w, registry)?;
    }

    // close the remaining holes with the oracle where that is cheap
    let mut confirmed = BTreeSet::new();
    let mut unresolved = BTreeSet::new();
    if k <= cfg.oracle_fill_max_k {
        for v in p..=v_max {
            if db.get(v, k, true).is_some() || registry.no_cyclic(v, k) {
                continue;
            }
            match oracle_exists(v, k, cfg.oracle_budget) {
                OracleResult::Exists(r) => {
                    let w = Witness::ruler(
                        v,
                        k,
                        vec![Step::ExplicitRuler {
                            v,
                            marks: r.marks().to_vec(),
                            source: "oracle".into(),
                        }],
                    );
                    db.insert(w, registry)?;
                }
                OracleResult::NotExists => {
                    confirmed.insert(v);
                }
                OracleResult::BudgetExceeded(_) => {
                    unresolved.insert(v);
                }
            }
        }
    }

    let mut record = record_from_db(k, db, v_max)?;
    record.oracle_confirmed_gaps = confirmed;
    record.oracle_unresolved = unresolved;
    Ok(record)
}

/// Non-cyclic scan: removal families, affine extension grids, point-orbit
/// constructions, and the binary-weight block families, each validated and
/// recorded as a matrix witness.
pub fn noncyclic_scan(
    k: u64,
    cfg: &ScanConfig,
    registry: &KnownFacts,
    db: &mut WitnessDb,
) -> Result<SpectrumRecord> {
    let p = plane_bound(k);
    let g = golomb_bound(k)?;
    let v_max = cfg.v_max.unwrap_or(g - 1).min(g - 1);
    let in_range = |v: u64| (p..=v_max).contains(&v);
    let insert = |db: &mut WitnessDb, v: u64, chain: Vec<Step>| -> Result<()> {
        let w = Witness::matrix(v, k, chain);
        debug_assert!(super::witness::verify_witness(&w));
        db.insert(w, registry)?;
        Ok(())
    };

    // removal families around a flag / anti-flag of PG(2,q)
    for q in prime_powers(k.max(2), 64) {
        for s in 0..q {
            let k_built = q - s;
            if k_built < k || k_built - k > cfg.matrix_delta_cap || (k_built - k > 0 && k < 2) {
                continue;
            }
            let delta = k_built - k;
            for (point_on_line, v_formula) in
                [(true, q * q - q * s), (false, q * q - (q - 1) * s - 1)]
            {
                if !in_range(v_formula) {
                    continue;
                }
                let m = construct::removal_family(q, s, point_on_line)?;
                let mut chain = vec![Step::RemovalFamily {
                    q,
                    s,
                    point_on_line,
                }];
                if delta > 0 {
                    matrix::remove_permutations(&m, k_built, delta)?;
                    chain.push(Step::RemovePermutations { k: k_built, delta });
                }
                insert(db, v_formula, chain)?;
            }
        }
    }

    // affine extension grid
    for q in prime_powers(k.max(2), 64) {
        for delta in 0..=cfg.matrix_delta_cap.min(q - 1) {
            let Some(s) = (q).checked_sub(k + delta) else {
                continue;
            };
            if s >= q {
                continue;
            }
            if k < 2 {
                continue;
            }
            for theta in 0..=(q - s + 1) {
                let v = q * q - q * s + theta;
                if !in_range(v) {
                    continue;
                }
                extend::extension_family_ag(q, s, delta, theta)?;
                insert(
                    db,
                    v,
                    vec![Step::ExtensionAg {
                        q,
                        s,
                        delta,
                        theta,
                    }],
                )?;
            }
        }
    }

    // point-orbit constructions
    let mut orbit_targets: Vec<(u64, u64, u64, PointGenerator)> = Vec::new();
    for q in prime_powers(3, 32) {
        let root = (q as f64).sqrt().round() as u64;
        if q % 2 == 1 {
            orbit_targets.push((q * (q - 1) / 2, q.div_ceil(2), q, PointGenerator::ConicInternal));
            orbit_targets.push((q * (q + 1) / 2, (q - 1) / 2, q, PointGenerator::ConicExternal));
        }
        if root * root == q {
            orbit_targets.push((
                q * q + q - q * root,
                q - root,
                q,
                PointGenerator::HermitianComplement,
            ));
            for c in 2..=(q - root) {
                orbit_targets.push((
                    c * (q + root + 1),
                    root + c,
                    q,
                    PointGenerator::BaerUnion { c },
                ));
            }
        }
    }
    for (v, k_built, q, generator) in orbit_targets {
        if k_built < k || k_built - k > cfg.matrix_delta_cap || !in_range(v) || k < 2 {
            continue;
        }
        let delta = k_built - k;
        let mut chain = vec![Step::ConstructionA {
            q,
            generator,
            k: k_built,
        }];
        if delta > 0 {
            chain.push(Step::RemovePermutations { k: k_built, delta });
        }
        let w = Witness::matrix(v, k, chain);
        if w.replay().is_ok() {
            db.insert(w, registry)?;
        }
    }

    // block families with 0/1 weight vectors; a source is only worth
    // building when even its smallest member 2d fits the window
    let mut family_sources: Vec<(Vec<Step>, ModularRuler, u64)> = Vec::new();
    for p_prime in prime_powers(3, 64).filter(|&p| prime_power(p) == Some((p, 1))) {
        if 2 * (p_prime - 1) > v_max {
            continue;
        }
        let g_root = crate::gf::smallest_primitive_root(p_prime);
        let base = construct::ruzsa_ruler(p_prime, Some(g_root))?;
        let chain = vec![Step::Ruzsa {
            p: p_prime,
            g: g_root,
        }];
        family_sources.push((chain.clone(), base.clone(), p_prime - 1));
        family_sources.push((chain, base, p_prime));
    }
    for q in prime_powers(3, 64) {
        if 2 * (q - 1) > v_max {
            continue;
        }
        family_sources.push((vec![Step::Bose { q }], construct::bose_ruler(q)?, q + 1));
    }
    for (base_chain, base, t) in family_sources {
        if base.v() % t != 0 {
            continue;
        }
        let bdc = matrix::bdc_assemble(&base, t)?;
        let weights = bdc.weight_vector();
        if weights.iter().any(|&w| w > 1) {
            continue;
        }
        let entries = extend::family_from_weights(&bdc)?;
        for entry in entries {
            if entry.k != k || !in_range(entry.v) {
                continue;
            }
            extend::build_family_entry(&bdc, &entry)?;
            let mut chain = base_chain.clone();
            chain.push(Step::BdcAssemble { t });
            chain.push(Step::SelectBlocks {
                j: entry.recipe.j,
                c: entry.recipe.c,
            });
            chain.push(Step::Expand);
            chain.push(Step::ExtendMany {
                k: entry.k,
                theta: entry.recipe.theta,
            });
            insert(db, entry.v, chain)?;
        }
    }

    record_from_db(k, db, v_max)
}

/// Run both scans and produce the combined record.
pub fn full_scan(
    k: u64,
    cfg: &ScanConfig,
    registry: &KnownFacts,
    db: &mut WitnessDb,
) -> Result<SpectrumRecord> {
    let cyclic = cyclic_scan(k, cfg, registry, db)?;
    let mut record = noncyclic_scan(k, cfg, registry, db)?;
    record.oracle_confirmed_gaps = cyclic.oracle_confirmed_gaps;
    record.oracle_unresolved = cyclic.oracle_unresolved;
    Ok(record)
}
