//! The two standing bounds on cyclic symmetric configurations.
//!
//! `plane_bound(k) = k^2 - k + 1` is the smallest conceivable v (attained
//! exactly by projective planes of order k-1). `golomb_bound(k) = 2L+1`,
//! with L the length of the shortest known Golomb ruler of order k, is the
//! threshold beyond which a cyclic configuration v_k always exists: any
//! Golomb ruler works as a modular ruler for every v >= 2L+1.

use crate::error::{Error, Result};

/// 2L+1 for the shortest known Golomb ruler of order k, for k = 2..=83.
/// Lengths follow Shearer's tables and the OGR project results as of the
/// late 2000s; optimal rulers are known for k <= 25, shortest-known above.
const GOLOMB_BOUND: [u64; 82] = [
    3,     // k=2,  L=1
    7,     // k=3,  L=3
    13,    // k=4,  L=6
    23,    // k=5,  L=11
    35,    // k=6,  L=17
    51,    // k=7,  L=25
    69,    // k=8,  L=34
    89,    // k=9,  L=44
    111,   // k=10, L=55
    145,   // k=11, L=72
    171,   // k=12, L=85
    213,   // k=13, L=106
    255,   // k=14, L=127
    303,   // k=15, L=151
    355,   // k=16, L=177
    399,   // k=17, L=199
    433,   // k=18, L=216
    493,   // k=19, L=246
    567,   // k=20, L=283
    667,   // k=21, L=333
    713,   // k=22, L=356
    745,   // k=23, L=372
    851,   // k=24, L=425
    961,   // k=25, L=480
    985,   // k=26, L=492
    1107,  // k=27, L=553
    1171,  // k=28, L=585
    1247,  // k=29, L=623
    1361,  // k=30, L=680
    1495,  // k=31, L=747
    1569,  // k=32, L=784
    1719,  // k=33, L=859
    1877,  // k=34, L=938
    1975,  // k=35, L=987
    2011,  // k=36, L=1005
    2199,  // k=37, L=1099
    2293,  // k=38, L=1146
    2505,  // k=39, L=1252
    2565,  // k=40, L=1282
    2611,  // k=41, L=1305
    2795,  // k=42, L=1397
    3015,  // k=43, L=1507
    3193,  // k=44, L=1596
    3375,  // k=45, L=1687
    3407,  // k=46, L=1703
    3609,  // k=47, L=1804
    3775,  // k=48, L=1887
    3917,  // k=49, L=1958
    4189,  // k=50, L=2094
    4381,  // k=51, L=2190
    4541,  // k=52, L=2270
    4695,  // k=53, L=2347
    4747,  // k=54, L=2373
    5197,  // k=55, L=2598
    5451,  // k=56, L=2725
    5547,  // k=57, L=2773
    5703,  // k=58, L=2851
    5823,  // k=59, L=2911
    6039,  // k=60, L=3019
    6269,  // k=61, L=3134
    6431,  // k=62, L=3215
    6783,  // k=63, L=3391
    7055,  // k=64, L=3527
    7187,  // k=65, L=3593
    7515,  // k=66, L=3757
    7639,  // k=67, L=3819
    7913,  // k=68, L=3956
    8291,  // k=69, L=4145
    8435,  // k=70, L=4217
    8661,  // k=71, L=4330
    8947,  // k=72, L=4473
    9027,  // k=73, L=4513
    9507,  // k=74, L=4753
    9965,  // k=75, L=4982
    10179, // k=76, L=5089
    10409, // k=77, L=5204
    10599, // k=78, L=5299
    10817, // k=79, L=5408
    11127, // k=80, L=5563
    11435, // k=81, L=5717
    11629, // k=82, L=5814
    12041, // k=83, L=6020
];

pub const GOLOMB_BOUND_MAX_K: u64 = 83;

/// Projective plane bound P(k) = k^2 - k + 1.
pub fn plane_bound(k: u64) -> u64 {
    k * k - k + 1
}

/// Golomb bound G(k) = 2L+1 from the embedded shortest-known ruler table,
/// 2 <= k <= 83.
pub fn golomb_bound(k: u64) -> Result<u64> {
    if !(2..=GOLOMB_BOUND_MAX_K).contains(&k) {
        return Err(Error::OutOfTable(k));
    }
    Ok(GOLOMB_BOUND[(k - 2) as usize])
}
