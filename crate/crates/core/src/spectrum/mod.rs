//! Orchestration of the spectrum searches: base rulers, multiplier and
//! modulus rescans, non-cyclic family grids, the witness database, the
//! known-facts registry, and table emission/comparison.

pub mod config;
pub mod reference;
pub mod registry;
pub mod scan;
pub mod tables;
pub mod witness;

pub use config::ScanConfig;
pub use registry::{deficiency_one_nonexistence, v_delta, FactStatus, KnownFact, KnownFacts};
pub use scan::{base_rulers, cyclic_scan, full_scan, noncyclic_scan, record_from_db, SpectrumRecord};
pub use tables::{compare_reference, emit_tables, intervals, DiffReport, Discrepancy, TableFormat};
pub use witness::{verify_witness, PointGenerator, Step, Witness, WitnessDb};
