//! Registry of known existence and nonexistence facts from the literature.
//!
//! The scans must never produce a witness contradicting one of these facts;
//! such a contradiction means a bug, and the pipeline aborts on it. Facts
//! are either total (no configuration v_k at all) or cyclic-only, plus a
//! short list of sporadic configurations known to exist but out of reach of
//! the constructions here.

use crate::error::{Error, Result};
use crate::ruler::plane_bound;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactStatus {
    /// No symmetric configuration v_k exists.
    NoConfig,
    /// No cyclic symmetric configuration v_k exists (non-cyclic ones may).
    NoCyclicConfig,
    /// A sporadic configuration v_k is known to exist (without a
    /// construction in this crate).
    SporadicExists,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnownFact {
    pub v: u64,
    pub k: u64,
    pub status: FactStatus,
    pub citation: &'static str,
}

/// There is no symmetric configuration of deficiency one, (k^2-k+2)_k, when
/// 5 <= k <= 10 or when neither k nor k-2 is a perfect square.
pub fn deficiency_one_nonexistence(k: u64) -> bool {
    if k < 2 {
        return false;
    }
    let is_square = |n: u64| {
        let r = (n as f64).sqrt().round() as u64;
        r * r == n
    };
    (5..=10).contains(&k) || (!is_square(k) && !is_square(k - 2))
}

/// Smallest v for which a (v,k) modular Golomb ruler exists, k = 2..=16
/// (settled values from the modular Sidon set literature).
pub fn v_delta(k: u64) -> Option<u64> {
    const TABLE: [u64; 15] = [3, 7, 13, 21, 31, 48, 57, 73, 91, 120, 133, 168, 183, 255, 255];
    (2..=16).contains(&k).then(|| TABLE[(k - 2) as usize])
}

#[derive(Debug, Clone, Default)]
pub struct KnownFacts {
    facts: BTreeMap<(u64, u64), Vec<KnownFact>>,
}

impl KnownFacts {
    pub fn empty() -> KnownFacts {
        KnownFacts::default()
    }

    /// The embedded registry: plane-order nonexistence, deficiency-one
    /// nonexistence, sporadic cyclic nonexistence scans, the thresholds
    /// implied by the settled smallest-modulus values, and the sporadic
    /// existence results.
    pub fn standard() -> KnownFacts {
        let mut reg = KnownFacts::empty();

        // no projective plane of the matching order
        for (v, k, citation) in [
            (43u64, 7u64, "tarry-euler-36-officers"),
            (111, 11, "lam-thiel-swiercz-order-10"),
            (211, 15, "bruck-ryser"),
            (463, 22, "bruck-ryser"),
            (507, 23, "bruck-ryser"),
            (931, 31, "bruck-ryser"),
            (1123, 34, "bruck-ryser"),
            (1483, 39, "bruck-ryser"),
        ] {
            reg.push(KnownFact {
                v,
                k,
                status: FactStatus::NoConfig,
                citation,
            });
        }

        // deficiency one, from the nonexistence theorem
        for k in 2..=83 {
            if deficiency_one_nonexistence(k) {
                reg.push(KnownFact {
                    v: plane_bound(k) + 1,
                    k,
                    status: FactStatus::NoConfig,
                    citation: "deficiency-one-theorem",
                });
            }
        }

        // individual total nonexistence results
        for (v, k, citation) in [(32u64, 6u64, "gropp-nk"), (33, 6, "kaski-ostergard"), (112, 11, "kaski-ostergard")] {
            reg.push(KnownFact {
                v,
                k,
                status: FactStatus::NoConfig,
                citation,
            });
        }

        // cyclic-only nonexistence from exhaustive scans in the literature
        reg.push(KnownFact {
            v: 34,
            k: 6,
            status: FactStatus::NoCyclicConfig,
            citation: "lipman",
        });
        for v in 59..=62 {
            reg.push(KnownFact {
                v,
                k: 8,
                status: FactStatus::NoCyclicConfig,
                citation: "lipman",
            });
        }
        for v in (75..=79).chain(81..=84) {
            reg.push(KnownFact {
                v,
                k: 9,
                status: FactStatus::NoCyclicConfig,
                citation: "funk",
            });
        }
        // below the settled smallest modulus no cyclic configuration exists
        for k in 2..=16 {
            if let Some(vd) = v_delta(k) {
                for v in plane_bound(k)..vd {
                    reg.push(KnownFact {
                        v,
                        k,
                        status: FactStatus::NoCyclicConfig,
                        citation: "modular-ruler-tables",
                    });
                }
            }
        }

        // sporadic existence results
        for (v, k, citation) in [
            (45u64, 7u64, "baker"),
            (82, 9, "funk-labbate-napolitano"),
            (135, 12, "mathon-bcc-1987"),
            (34, 6, "krcadinac"),
        ] {
            reg.push(KnownFact {
                v,
                k,
                status: FactStatus::SporadicExists,
                citation,
            });
        }
        reg
    }

    fn push(&mut self, fact: KnownFact) {
        let entry = self.facts.entry((fact.v, fact.k)).or_default();
        if !entry.contains(&fact) {
            entry.push(fact);
        }
    }

    pub fn at(&self, v: u64, k: u64) -> &[KnownFact] {
        self.facts.get(&(v, k)).map_or(&[], Vec::as_slice)
    }

    pub fn no_config(&self, v: u64, k: u64) -> bool {
        self.at(v, k)
            .iter()
            .any(|f| f.status == FactStatus::NoConfig)
    }

    pub fn no_cyclic(&self, v: u64, k: u64) -> bool {
        self.at(v, k)
            .iter()
            .any(|f| matches!(f.status, FactStatus::NoConfig | FactStatus::NoCyclicConfig))
    }

    pub fn sporadic_exists(&self, v: u64, k: u64) -> bool {
        self.at(v, k)
            .iter()
            .any(|f| f.status == FactStatus::SporadicExists)
    }

    pub fn iter(&self) -> impl Iterator<Item = &KnownFact> {
        self.facts.values().flatten()
    }

    /// Abort check for produced witnesses: a witness that contradicts a
    /// nonexistence fact means the pipeline itself is broken.
    pub fn check_witness(&self, v: u64, k: u64, cyclic: bool) -> Result<()> {
        for fact in self.at(v, k) {
            let conflict = match fact.status {
                FactStatus::NoConfig => true,
                FactStatus::NoCyclicConfig => cyclic,
                FactStatus::SporadicExists => false,
            };
            if conflict {
                return Err(Error::RegistryConflict {
                    v,
                    k,
                    fact: format!("{:?} ({})", fact.status, fact.citation),
                });
            }
        }
        Ok(())
    }

    /// Internal consistency: a sporadic-existence fact may coexist with a
    /// cyclic-only nonexistence fact, never with a total one.
    pub fn self_check(&self) -> Result<()> {
        for facts in self.facts.values() {
            let total = facts.iter().any(|f| f.status == FactStatus::NoConfig);
            let sporadic = facts.iter().any(|f| f.status == FactStatus::SporadicExists);
            if total && sporadic {
                let f = &facts[0];
                return Err(Error::RegistryConflict {
                    v: f.v,
                    k: f.k,
                    fact: "total nonexistence listed together with existence".into(),
                });
            }
        }
        Ok(())
    }
}
