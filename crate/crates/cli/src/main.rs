//! Command line front end: generators, validation, block machinery, the
//! existence oracle, spectrum scans, and the witness database.
//!
//! Exit codes: 0 ok, 1 validation failure, 2 registry conflict, 3 budget
//! exceeded.

use clap::{Args, Parser, Subcommand};
use configura_core::error::Error;
use configura_core::matrix::{bdc_assemble, circulant_from_ruler, BdcMatrix, IncidenceMatrix};
use configura_core::ruler::{oracle_exists, validate_modular, ModularRuler, OracleResult};
use configura_core::spectrum::{
    self, KnownFacts, ScanConfig, SpectrumRecord, TableFormat, WitnessDb,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 1;
const EXIT_REGISTRY: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "configura",
    about = "Symmetric configurations v_k and modular Golomb rulers",
    version
)]
struct Cli {
    /// TOML config file (seeds, caps, budgets, threads)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one of the generators and print or save the result
    Construct {
        #[command(subcommand)]
        generator: Generator,
    },
    /// Validate a ruler or matrix file and print the verdict
    Validate {
        file: PathBuf,
        /// Expected degree for matrix inputs
        #[arg(long)]
        k: Option<u64>,
    },
    /// Split a ruler into quotient rulers mod v/t
    Quotient {
        file: PathBuf,
        #[arg(long)]
        t: u64,
    },
    /// Assemble the block double-circulant form of a ruler
    Bdc {
        file: PathBuf,
        #[arg(long)]
        t: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Trim block weight classes of a BDC matrix (JSON format)
    Trim {
        file: PathBuf,
        /// Per-class deltas, e.g. 1,0,0
        #[arg(long, value_delimiter = ',')]
        deltas: Vec<u64>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Extend a configuration matrix theta times
    Extend {
        file: PathBuf,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        theta: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive existence search for a (v,k) modular Golomb ruler
    Oracle {
        v: u64,
        k: u64,
        #[arg(long, default_value_t = 1 << 26)]
        budget: u64,
    },
    /// Scan the spectrum for one k and record witnesses
    Scan {
        k: u64,
        /// Only the cyclic (ruler) pipeline
        #[arg(long, conflicts_with = "all")]
        cyclic: bool,
        /// Cyclic and non-cyclic pipelines (default)
        #[arg(long)]
        all: bool,
        #[arg(long)]
        vmax: Option<u64>,
        /// Witness database (JSON lines); merged and rewritten
        #[arg(long, default_value = "witnesses.jsonl")]
        db: PathBuf,
    },
    /// Emit spectrum tables from the witness database
    Tables {
        #[arg(long, default_value = "md")]
        format: String,
        #[arg(long, default_value = "witnesses.jsonl")]
        db: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Ks to include (default: every k in the database)
        #[arg(long, value_delimiter = ',')]
        k: Vec<u64>,
    },
    /// Replay and verify every witness in the database
    VerifyDb {
        #[arg(long, default_value = "witnesses.jsonl")]
        db: PathBuf,
    },
}

#[derive(Subcommand)]
enum Generator {
    /// Perfect difference set of the cyclic projective plane
    Singer(SingleQ),
    /// Ruler of the cyclic starred affine plane
    Bose(SingleQ),
    /// Ruzsa's ruler mod p^2 - p
    Ruzsa {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        g: Option<u64>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Flag / anti-flag removal family from PG(2,q)
    Removal {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 0)]
        s: u64,
        /// Anti-flag variant (base point off the base line)
        #[arg(long)]
        anti_flag: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Affine extension family (q^2 - qs + theta)_(q - s - delta)
    ExtensionAg {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 0)]
        s: u64,
        #[arg(long, default_value_t = 0)]
        delta: u64,
        #[arg(long, default_value_t = 0)]
        theta: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Circulant incidence matrix of a ruler file
    Circulant {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "text")]
        format: String,
    },
}

#[derive(Args)]
struct SingleQ {
    #[arg(long)]
    q: u64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match &cli.config {
        Some(path) => match ScanConfig::load(path) {
            Ok(cfg) => cfg,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_INVALID);
            }
        },
        None => ScanConfig::default(),
    };
    cfg.init_thread_pool();
    match run(cli.command, &cfg) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::RegistryConflict { .. } => EXIT_REGISTRY,
                Error::InvalidRuler { .. }
                | Error::NotAConfiguration(_)
                | Error::ReplayMismatch { .. } => EXIT_INVALID,
                _ => EXIT_INVALID,
            })
        }
    }
}

fn write_or_print(out: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => Ok(std::fs::write(path, content)?),
        None => {
            print!("{content}");
            if !content.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn save_ruler(r: &ModularRuler, out: &Option<PathBuf>) -> Result<(), Error> {
    let line = match out.as_deref().and_then(Path::extension).and_then(|e| e.to_str()) {
        Some("json") => r.to_json(),
        _ => r.to_line(),
    };
    write_or_print(out, &line)
}

fn save_matrix(m: &IncidenceMatrix, out: &Option<PathBuf>, format: &str) -> Result<(), Error> {
    let content = match format {
        "text" => m.to_text(),
        "json" => m.to_sparse_json()?,
        "alist" => m.to_alist(),
        other => {
            return Err(Error::Parse(format!(
                "unknown matrix format {other:?} (text, json, alist)"
            )))
        }
    };
    write_or_print(out, &content)
}

fn load_ruler(path: &Path) -> Result<ModularRuler, Error> {
    let text = std::fs::read_to_string(path)?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        ModularRuler::from_json(trimmed)
    } else {
        ModularRuler::from_line(trimmed)
    }
}

fn load_matrix(path: &Path) -> Result<IncidenceMatrix, Error> {
    let text = std::fs::read_to_string(path)?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        IncidenceMatrix::from_sparse_json(trimmed)
    } else if trimmed.lines().next().is_some_and(|l| {
        !l.trim().is_empty() && l.trim().chars().all(|c| c == '0' || c == '1')
    }) {
        IncidenceMatrix::from_text(trimmed)
    } else {
        IncidenceMatrix::from_alist(trimmed)
    }
}

fn run(command: Command, cfg: &ScanConfig) -> Result<u8, Error> {
    match command {
        Command::Construct { generator } => run_construct(generator),
        Command::Validate { file, k } => run_validate(&file, k),
        Command::Quotient { file, t } => {
            let r = load_ruler(&file)?;
            for (h, (b, w)) in r.quotient(t)?.into_iter().enumerate() {
                println!("h={h} w={w} {}", b.to_line());
            }
            Ok(EXIT_OK)
        }
        Command::Bdc { file, t, out } => {
            let r = load_ruler(&file)?;
            let b = bdc_assemble(&r, t)?;
            println!(
                "t={} d={} weights={:?}",
                b.t(),
                b.d(),
                b.weight_vector()
            );
            if let Some(path) = out {
                std::fs::write(path, serde_json::to_string(&b)?)?;
            }
            Ok(EXIT_OK)
        }
        Command::Trim { file, deltas, out } => {
            let b: BdcMatrix = serde_json::from_str(&std::fs::read_to_string(&file)?)?;
            let trimmed = b.trim_uniform(&deltas)?;
            println!("weights={:?} k={}", trimmed.weight_vector(), trimmed.k());
            if let Some(path) = out {
                std::fs::write(path, serde_json::to_string(&trimmed)?)?;
            }
            Ok(EXIT_OK)
        }
        Command::Extend {
            file,
            k,
            theta,
            out,
        } => {
            let m = load_matrix(&file)?;
            let extended = configura_core::extend::extend_many(&m, k, theta)?;
            println!(
                "extended {} -> {} (degree {k})",
                m.n_rows(),
                extended.n_rows()
            );
            save_matrix(&extended, &out, "text")?;
            Ok(EXIT_OK)
        }
        Command::Oracle { v, k, budget } => match oracle_exists(v, k, budget) {
            OracleResult::Exists(r) => {
                println!("exists {}", r.to_line());
                Ok(EXIT_OK)
            }
            OracleResult::NotExists => {
                println!("not-exists v={v} k={k}");
                Ok(EXIT_OK)
            }
            OracleResult::BudgetExceeded(nodes) => {
                println!("budget-exceeded v={v} k={k} nodes={nodes}");
                Ok(EXIT_BUDGET)
            }
        },
        Command::Scan {
            k,
            cyclic,
            all: _,
            vmax,
            db,
        } => run_scan(k, cyclic, vmax, &db, cfg),
        Command::Tables { format, db, out, k } => run_tables(&format, &db, out, &k),
        Command::VerifyDb { db } => {
            let registry = KnownFacts::standard();
            let loaded = WitnessDb::load(&db, &registry)?;
            println!("{} witnesses verified", loaded.len());
            Ok(EXIT_OK)
        }
    }
}

fn run_construct(generator: Generator) -> Result<u8, Error> {
    match generator {
        Generator::Singer(SingleQ { q, out }) => {
            save_ruler(&configura_core::construct::singer_ruler(q)?, &out)?
        }
        Generator::Bose(SingleQ { q, out }) => {
            save_ruler(&configura_core::construct::bose_ruler(q)?, &out)?
        }
        Generator::Ruzsa { p, g, out } => {
            save_ruler(&configura_core::construct::ruzsa_ruler(p, g)?, &out)?
        }
        Generator::Removal {
            q,
            s,
            anti_flag,
            out,
            format,
        } => {
            let m = configura_core::construct::removal_family(q, s, !anti_flag)?;
            eprintln!("{}_{} configuration", m.n_rows(), q - s);
            save_matrix(&m, &out, &format)?;
        }
        Generator::ExtensionAg {
            q,
            s,
            delta,
            theta,
            out,
            format,
        } => {
            let m = configura_core::extend::extension_family_ag(q, s, delta, theta)?;
            eprintln!("{}_{} configuration", m.n_rows(), q - s - delta);
            save_matrix(&m, &out, &format)?;
        }
        Generator::Circulant { file, out, format } => {
            let r = load_ruler(&file)?;
            save_matrix(&circulant_from_ruler(&r)?, &out, &format)?;
        }
    }
    Ok(EXIT_OK)
}

fn run_validate(file: &Path, k: Option<u64>) -> Result<u8, Error> {
    let text = std::fs::read_to_string(file)?;
    let trimmed = text.trim();
    let looks_like_ruler = trimmed.contains(':') && !trimmed.contains('\n')
        || trimmed.starts_with('{') && trimmed.contains("\"marks\"");
    if looks_like_ruler && k.is_none() {
        let r = load_ruler(file)?;
        let (ok, profile) = validate_modular(r.marks(), r.v())?;
        if ok {
            let (d, uncovered) = r.deficiency()?;
            println!(
                "valid ({},{}) modular Golomb ruler, deficiency {d}, uncovered {:?}",
                r.v(),
                r.k(),
                uncovered
            );
            Ok(EXIT_OK)
        } else {
            println!(
                "INVALID: collisions at residues {:?} ({} residues uncovered)",
                profile.collisions, profile.uncovered_count
            );
            Ok(EXIT_INVALID)
        }
    } else {
        let m = load_matrix(file)?;
        let k = k.unwrap_or_else(|| m.row_weight(0) as u64);
        match m.check_configuration(k) {
            Ok(()) => {
                println!("valid {}_{} configuration", m.n_rows(), k);
                Ok(EXIT_OK)
            }
            Err(diag) => {
                println!("INVALID: {diag}");
                Ok(EXIT_INVALID)
            }
        }
    }
}

fn run_scan(
    k: u64,
    cyclic_only: bool,
    vmax: Option<u64>,
    db_path: &Path,
    cfg: &ScanConfig,
) -> Result<u8, Error> {
    let mut cfg = cfg.clone();
    if vmax.is_some() {
        cfg.v_max = vmax;
    }
    let registry = KnownFacts::standard();
    let mut db = if db_path.exists() {
        WitnessDb::load(db_path, &registry)?
    } else {
        WitnessDb::new()
    };
    let record = if cyclic_only {
        spectrum::cyclic_scan(k, &cfg, &registry, &mut db)?
    } else {
        spectrum::full_scan(k, &cfg, &registry, &mut db)?
    };
    db.save(db_path)?;
    print_record(&record);
    println!("witness database: {} entries -> {}", db.len(), db_path.display());
    Ok(EXIT_OK)
}

fn print_record(r: &SpectrumRecord) {
    println!(
        "k={} window=[{}, {}] G={}",
        r.k, r.p_bound, r.scanned_to, r.g_bound
    );
    println!("  cyclic: {}", spectrum::intervals(&r.achieved_cyclic));
    println!("  any:    {}", spectrum::intervals(&r.achieved_any));
    match (r.ec_upper_bound(), r.e_upper_bound()) {
        (Ok(ec), Ok(e)) => println!("  E_c <= {ec}, E <= {e}"),
        _ => println!("  bounds unavailable (window not fully scanned)"),
    }
    if !r.oracle_confirmed_gaps.is_empty() {
        println!(
            "  gaps confirmed by exhaustion: {}",
            spectrum::intervals(&r.oracle_confirmed_gaps)
        );
    }
    if !r.oracle_unresolved.is_empty() {
        println!(
            "  unresolved within budget: {}",
            spectrum::intervals(&r.oracle_unresolved)
        );
    }
}

fn run_tables(
    format: &str,
    db_path: &Path,
    out: Option<PathBuf>,
    ks: &[u64],
) -> Result<u8, Error> {
    let format: TableFormat = format.parse()?;
    let registry = KnownFacts::standard();
    let db = WitnessDb::load(db_path, &registry)?;
    let mut all_ks: Vec<u64> = if ks.is_empty() {
        let mut seen: Vec<u64> = db.iter().map(|w| w.k).collect();
        seen.sort_unstable();
        seen.dedup();
        seen
    } else {
        ks.to_vec()
    };
    all_ks.retain(|&k| configura_core::ruler::golomb_bound(k).is_ok());
    let records: Vec<SpectrumRecord> = all_ks
        .iter()
        .map(|&k| {
            let g = configura_core::ruler::golomb_bound(k).expect("filtered above");
            spectrum::record_from_db(k, &db, g - 1)
        })
        .collect::<Result<_, _>>()?;
    let rendered = spectrum::emit_tables(&records, format);
    write_or_print(&out, &rendered)?;
    let report = spectrum::compare_reference(&records, &registry);
    if report.registry_conflicts() > 0 {
        eprintln!("registry conflicts detected: {}", report.registry_conflicts());
        return Ok(EXIT_REGISTRY);
    }
    for d in &report.discrepancies {
        if let spectrum::Discrepancy::MissingWitness { k, v } = d {
            eprintln!("note: reference lists {v}_{k}, not reached in this database");
        }
    }
    Ok(EXIT_OK)
}
