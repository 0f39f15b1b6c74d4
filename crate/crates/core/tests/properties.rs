//! Property suites: validity preservation of the ruler operations, matrix
//! structure after every surgery, decomposition exactness, and witness
//! replay integrity. The naive quadratic checker in `common` is the oracle
//! for everything the incremental implementations claim.

mod common;

use configura_core::construct::{bose_ruler, ruzsa_ruler, singer_ruler};
use configura_core::extend::{apply_extension, extend_many, find_e_aggregates, extension_family_ag};
use configura_core::matrix::{bdc_assemble, circulant_from_ruler, koenig_decompose, remove_permutations};
use configura_core::ruler::{
    delta_scan, modular_from_golomb, oracle_exists, retest_modulus, units, validate_modular,
    GolombRuler, OracleResult,
};
use configura_core::spectrum::{self, KnownFacts, ScanConfig, WitnessDb};
use proptest::prelude::*;
use rand::SeedableRng;

fn seeded(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    /// The incremental difference-coverage check agrees with the literal
    /// all-ordered-pairs definition.
    #[test]
    fn validate_agrees_with_naive(v in 2u64..200, k in 1usize..8, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let k = k.min(v as usize);
        let marks = common::random_marks(&mut rng, v, k);
        let (ok, _) = validate_modular(&marks, v).unwrap();
        prop_assert_eq!(ok, common::naive_validate(&marks, v));
    }

    /// Distinct pairwise sums (mod v) and distinct pairwise differences are
    /// the same condition.
    #[test]
    fn sidon_sets_are_exactly_modular_rulers(v in 2u64..200, k in 1usize..8, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let k = k.min(v as usize);
        let marks = common::random_marks(&mut rng, v, k);
        let (ok, _) = validate_modular(&marks, v).unwrap();
        prop_assert_eq!(ok, common::naive_sidon(&marks, v));
    }

    /// Affine images under unit multipliers stay valid.
    #[test]
    fn affine_map_preserves_validity(v in 7u64..300, seed in any::<u64>(), pick in any::<u64>(), b in any::<u64>()) {
        let mut rng = seeded(seed);
        if let Some(ruler) = common::random_valid_ruler(&mut rng, v, 4) {
            let us = units(v);
            let m = us[(pick % us.len() as u64) as usize];
            let image = ruler.affine_map(m, b % v).unwrap();
            prop_assert!(image.is_valid());
            prop_assert!(common::naive_validate(image.marks(), v));
        }
    }

    /// Every deletion subset of a valid ruler is valid.
    #[test]
    fn deletion_preserves_validity(v in 13u64..300, seed in any::<u64>(), mask in any::<u32>()) {
        let mut rng = seeded(seed);
        if let Some(ruler) = common::random_valid_ruler(&mut rng, v, 5) {
            let subset: Vec<u64> = ruler
                .marks()
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &a)| a)
                .collect();
            let smaller = ruler.delete_marks(&subset).unwrap();
            prop_assert!(smaller.is_valid());
        }
    }

    /// Quotients by any divisor are valid rulers whose weights sum to k.
    #[test]
    fn quotient_validity_and_weight_sum(v in 12u64..400, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        if let Some(ruler) = common::random_valid_ruler(&mut rng, v, 4) {
            for t in (1..=v).filter(|t| v % t == 0) {
                let parts = ruler.quotient(t).unwrap();
                prop_assert_eq!(parts.iter().map(|&(_, w)| w).sum::<u64>(), ruler.k());
                for (b, w) in parts {
                    prop_assert_eq!(b.k(), w);
                    prop_assert!(b.is_valid(), "t={} class invalid", t);
                }
            }
        }
    }

    /// A Golomb ruler works as a modular ruler for every v >= 2L+1.
    #[test]
    fn golomb_rulers_embed_above_twice_their_length(seed in any::<u64>(), extra in 0u64..200) {
        let mut rng = seeded(seed);
        // a valid ruler mod a huge modulus is a Golomb ruler on its marks
        if let Some(r) = common::random_valid_ruler(&mut rng, 4000, 5) {
            if let Ok(g) = GolombRuler::new(r.marks().to_vec()) {
                let v = 2 * g.length() + 1 + extra;
                let embedded = modular_from_golomb(&g, v).unwrap();
                prop_assert!(embedded.is_valid());
            }
        }
    }

    /// The incremental modulus rescan matches one-by-one revalidation.
    #[test]
    fn delta_scan_matches_pointwise_retest(v in 20u64..200, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        if let Some(ruler) = common::random_valid_ruler(&mut rng, v, 4) {
            let lo = ruler.marks().last().unwrap() + 1;
            let hi = lo + 60;
            let hits = delta_scan(ruler.marks(), lo, hi).unwrap();
            for v_new in lo..=hi {
                prop_assert_eq!(
                    hits.contains(&v_new),
                    retest_modulus(ruler.marks(), v_new).unwrap(),
                    "modulus {}", v_new
                );
            }
        }
    }

    /// Decomposition into permutations: superposition is exact and the
    /// permutations are disjoint.
    #[test]
    fn koenig_superposition_is_exact(v in 7u64..80, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        if let Some(ruler) = common::random_valid_ruler(&mut rng, v, 3) {
            let m = circulant_from_ruler(&ruler).unwrap();
            let d = koenig_decompose(&m, 3).unwrap();
            prop_assert_eq!(d.superpose(v as usize), m.clone());
            let smaller = remove_permutations(&m, 3, 1).unwrap();
            prop_assert!(smaller.is_configuration(2));
        }
    }

    /// Weight surgery on the block form keeps the expansion a configuration.
    #[test]
    fn block_surgery_keeps_configurations(v in 20u64..240, seed in any::<u64>(), raw_c in any::<u64>()) {
        let mut rng = seeded(seed);
        let divisors: Vec<u64> = (2..v / 2).filter(|t| v % t == 0).collect();
        if divisors.is_empty() {
            return Ok(());
        }
        if let Some(ruler) = common::random_valid_ruler(&mut rng, v, 4) {
            let t = divisors[(raw_c % divisors.len() as u64) as usize];
            let b = bdc_assemble(&ruler, t).unwrap();
            // uniform trim of one unit from the heaviest class
            let w = b.weight_vector();
            let heavy = (0..t as usize).max_by_key(|&h| w[h]).unwrap();
            let mut deltas = vec![0u64; t as usize];
            if w[heavy] > 0 {
                deltas[heavy] = 1;
                let trimmed = b.trim_uniform(&deltas).unwrap();
                prop_assert!(trimmed.expand().is_configuration(ruler.k() - 1));
            }
            // block selection for every c and the lightest off-class
            let c = 1 + raw_c % t;
            let sel = b.select_blocks(0, c).unwrap();
            prop_assert!(sel.expand().is_configuration(sel.k()));
            if t.is_multiple_of(2) {
                let f = 1 + raw_c % (t / 2);
                let alt = b.select_blocks_alternating(0, f).unwrap();
                prop_assert!(alt.expand().is_configuration(alt.k()));
            }
        }
    }
}

#[test]
fn deficiency_equals_uncovered_count_small_moduli() {
    let mut rng = seeded(0xdef1c);
    let mut checked = 0;
    while checked < 200 {
        let v = 7 + (rand::Rng::gen_range(&mut rng, 0..94u64));
        let k = 2 + (v as usize % 3);
        let Some(ruler) = common::random_valid_ruler(&mut rng, v, k) else {
            continue;
        };
        let (d, uncovered) = ruler.deficiency().unwrap();
        assert_eq!(d, v - (ruler.k() * ruler.k() - ruler.k() + 1));
        assert_eq!(d, uncovered.len() as u64);
        checked += 1;
    }
}

/// Every constructor output within oracle reach is confirmed by the
/// exhaustive search.
#[test]
fn oracle_confirms_constructor_outputs() {
    let mut targets: Vec<(u64, u64)> = Vec::new();
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let r = singer_ruler(q).unwrap();
        targets.push((r.v(), r.k()));
    }
    for q in [3u64, 4, 5, 7, 8, 9, 11] {
        let r = bose_ruler(q).unwrap();
        targets.push((r.v(), r.k()));
    }
    for p in [3u64, 5, 7, 11] {
        let r = ruzsa_ruler(p, None).unwrap();
        targets.push((r.v(), r.k()));
    }
    for (v, k) in targets.into_iter().filter(|&(v, _)| v <= 120) {
        match oracle_exists(v, k, 1 << 32) {
            OracleResult::Exists(r) => assert!(r.is_valid()),
            other => panic!("({v},{k}) constructed but oracle said {other:?}"),
        }
    }
}

/// Matrices with Structure E yield at least t pairwise disjoint aggregates,
/// and 0/1-weight block matrices admit t+1 extensions.
#[test]
fn structure_e_capacity_is_realised() {
    for (q, s) in [(4u64, 0u64), (5, 0), (5, 1), (7, 2)] {
        let m = extension_family_ag(q, s, 0, 0).unwrap();
        let t = q - s;
        let k = q - s;
        let plan = find_e_aggregates(&m, k, u64::MAX >> 1).unwrap();
        assert!(plan.complete);
        assert!(
            plan.aggregates.len() as u64 >= t,
            "q={q} s={s}: only {} aggregates",
            plan.aggregates.len()
        );
    }
    // 0/1 weight vectors admit t+1 extensions
    let ruzsa = ruzsa_ruler(5, Some(2)).unwrap();
    let b = bdc_assemble(&ruzsa, 4).unwrap();
    assert_eq!(b.weight_vector(), vec![1, 1, 1, 1]);
    let extended = extend_many(&b.expand(), 4, 5).unwrap();
    assert!(extended.is_configuration(4));
    let bose = bose_ruler(4).unwrap();
    let b5 = bdc_assemble(&bose, 5).unwrap();
    let mut w = b5.weight_vector();
    w.sort_unstable();
    assert_eq!(w, vec![0, 1, 1, 1, 1]);
    let extended = extend_many(&b5.expand(), 4, 6).unwrap();
    assert!(extended.is_configuration(4));
}

/// For degree-3 inputs one extension step is the classical move: two
/// parallel lines and two non-collinear points.
#[test]
fn martinetti_step_on_the_9_3_configuration() {
    let m = extension_family_ag(3, 0, 0, 0).unwrap();
    let plan = find_e_aggregates(&m, 3, 1).unwrap();
    let agg = &plan.aggregates[0];
    assert_eq!(agg.rows.len(), 2);
    assert_eq!(agg.cols.len(), 2);
    // parallel lines: the two rows share no column
    assert_eq!(m.row(agg.rows[0]).and_count(m.row(agg.rows[1])), 0);
    // non-collinear points: no row covers both columns
    assert!((0..9).all(|r| !(m.get(r, agg.cols[0]) && m.get(r, agg.cols[1]))));
    let bigger = apply_extension(&m, 3, agg).unwrap();
    assert_eq!(bigger.n_rows(), 10);
    assert!(bigger.is_configuration(3));
}

/// The removal families deliver their advertised parameters over the whole
/// desk-scale grid.
#[test]
fn removal_family_full_grid_up_to_q16() {
    for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
        for s in 0..q {
            for (point_on_line, expected_v) in
                [(true, q * q - q * s), (false, q * q - (q - 1) * s - 1)]
            {
                let m = configura_core::construct::removal_family(q, s, point_on_line).unwrap();
                assert_eq!(m.n_rows() as u64, expected_v, "q={q} s={s} flag={point_on_line}");
                assert!(m.is_configuration(q - s), "q={q} s={s} flag={point_on_line}");
            }
        }
    }
}

/// Two points lie on exactly one common line, also for the larger planes.
#[test]
fn plane_axiom_for_larger_q() {
    for q in [13u64, 16] {
        let plane = configura_core::construct::pg_incidence(q).unwrap();
        let n = plane.n_points();
        let mut seen = vec![0u8; n * n];
        for line in &plane.lines {
            for (i, &a) in line.iter().enumerate() {
                for &b in &line[i + 1..] {
                    seen[a * n + b] += 1;
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                assert_eq!(seen[a * n + b], 1, "q={q} pair ({a},{b})");
            }
        }
    }
}

/// Cross-module consistency: the line-intersection multiset of a cyclic
/// point orbit equals the quotient weights of the underlying plane ruler.
#[test]
fn suborbit_line_intersections_match_quotient_weights() {
    for (q, t) in [(4u64, 3u64), (4, 7), (16, 7), (16, 13)] {
        let orbit = configura_core::construct::singer_suborbit(q, t, 0).unwrap();
        let mut member = vec![false; orbit.plane.n_points()];
        for &p in &orbit.indices {
            member[p] = true;
        }
        let mut line_counts: Vec<u64> = orbit
            .plane
            .lines
            .iter()
            .map(|line| line.iter().filter(|&&p| member[p]).count() as u64)
            .collect();
        line_counts.sort_unstable();
        // every line orbit meets the point orbit in one of the quotient
        // weights, and each weight class contains exactly d line orbits
        let d = (q * q + q + 1) / t;
        let mut weights: Vec<u64> = singer_ruler(q)
            .unwrap()
            .quotient(t)
            .unwrap()
            .iter()
            .flat_map(|&(_, w)| std::iter::repeat_n(w, d as usize))
            .collect();
        weights.sort_unstable();
        assert_eq!(line_counts, weights, "q={q} t={t}");
    }
}

/// 100% of the witnesses produced by a scan replay successfully, and the
/// existence bound never worsens as more witnesses arrive.
#[test]
fn witness_database_integrity_and_bound_monotonicity() {
    let cfg = ScanConfig::default();
    let registry = KnownFacts::standard();
    let mut db = WitnessDb::new();
    let record7 = spectrum::cyclic_scan(7, &cfg, &registry, &mut db).unwrap();
    assert!(db.len() >= 3);
    for w in db.iter() {
        assert!(spectrum::verify_witness(w), "({}, {}) failed replay", w.v, w.k);
    }
    let ec_before = record7.ec_upper_bound().unwrap();
    let record_after = spectrum::full_scan(7, &cfg, &registry, &mut db).unwrap();
    let ec_after = record_after.ec_upper_bound().unwrap();
    assert!(ec_after <= ec_before);

    // serialisation round trip preserves every witness
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("db.jsonl");
    db.save(&path).unwrap();
    let loaded = WitnessDb::load(&path, &registry).unwrap();
    assert_eq!(loaded.len(), db.len());
}
