//! Command-line interface for validating, classifying, and inspecting
//! finite symmetry data with a single scalar automorphism group.
//!
//! Subcommands:
//! * `validate`  — load a 2-group description and re-check every structural
//!   invariant (group axioms, module action, associator normalization and
//!   closedness).
//! * `classify`  — enumerate equivalence classes of representation data up
//!   to a dimension bound, as a table or as JSON.
//! * `homcat`    — summarize the morphism category between two classes from
//!   the classification: orbits, stabilizers, cocycle classes, terminality.
//! * `selftest`  — run the deterministic randomized property suite.
//!
//! Exit codes: 0 success, 2 unreadable/unparsable input, 3 well-formed but
//! invalid data (or out-of-range index), 4 configured computation cap
//! exceeded.  Caps are adjustable via `TWOREP_MAX_GROUP`, `TWOREP_MAX_DIM`,
//! `TWOREP_MAX_SCALAR`, and `TWOREP_MAX_COCHAINS`.

mod render;
mod specfile;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use render::ClassRow;
use specfile::{Caps, CliError, LoadedSpec};
use tworep::rep::{
    enumerate_reps, equivalent_quadruples, pi0_rep, EnumMode, RepError, RepQuadruple,
};
use tworep::selftest::{run_selftest, SelftestOptions};
use tworep::twogroup::SpecialTwoGroup;

#[derive(Parser)]
#[command(
    name = "tworep",
    about = "exact classification of 2-group representation data",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// One representative cocycle per coboundary class during enumeration.
    Canonical,
    /// Every cochain below the cap; classes still merge equivalent data.
    All,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Canonical => "canonical",
            Mode::All => "all",
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check a 2-group description file and report its invariants.
    Validate {
        /// TOML description of the 2-group.
        path: PathBuf,
    },
    /// Enumerate equivalence classes of representation data.
    Classify {
        /// TOML description of the 2-group.
        path: PathBuf,
        /// Largest dimension (object size) to enumerate.
        #[arg(long = "max-dim", default_value_t = 2)]
        max_dim: usize,
        /// Enumeration strategy.
        #[arg(long, value_enum, default_value_t = Mode::Canonical)]
        mode: Mode,
        /// Output format.
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Summarize the morphism category between two classified classes.
    Homcat {
        /// TOML description of the 2-group.
        path: PathBuf,
        /// Class index of the source, as reported by `classify`.
        #[arg(long)]
        source: usize,
        /// Class index of the target, as reported by `classify`.
        #[arg(long)]
        target: usize,
        /// Largest dimension used to build the class list (match `classify`).
        #[arg(long = "max-dim", default_value_t = 2)]
        max_dim: usize,
        /// Enumeration strategy used to build the class list (match `classify`).
        #[arg(long, value_enum, default_value_t = Mode::Canonical)]
        mode: Mode,
        /// Output format.
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Run the deterministic property-test suite.
    Selftest {
        /// Seed for the pseudorandom generators.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Case-count multiplier for every section.
        #[arg(long, default_value_t = 1)]
        size: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { path } => cmd_validate(&path),
        Command::Classify {
            path,
            max_dim,
            mode,
            format,
        } => cmd_classify(&path, max_dim, mode, format),
        Command::Homcat {
            path,
            source,
            target,
            max_dim,
            mode,
            format,
        } => cmd_homcat(&path, source, target, max_dim, mode, format),
        Command::Selftest { seed, size } => return cmd_selftest(seed, size),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn cmd_validate(path: &std::path::Path) -> Result<(), CliError> {
    let caps = Caps::from_env()?;
    let loaded = specfile::load(path, &caps)?;
    println!(
        "valid: pi0 {}; pi1 {}; associator {}; scalar order {}",
        loaded.pi0_desc, loaded.pi1_desc, loaded.alpha_desc, loaded.scalar_order
    );
    println!("  group-axioms           ok");
    println!("  module-action          ok");
    println!("  associator-normalized  ok");
    println!("  associator-closed      ok");
    Ok(())
}

/// Merges a list of quadruples into equivalence classes, returning
/// `(representative index, member count)` pairs ordered by representative.
fn union_classes(quads: &[RepQuadruple]) -> Vec<(usize, usize)> {
    let mut parent: Vec<usize> = (0..quads.len()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for i in 0..quads.len() {
        for j in i + 1..quads.len() {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj && equivalent_quadruples(&quads[i], &quads[j]).is_some() {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut seen = std::collections::BTreeMap::new();
    for i in 0..quads.len() {
        let root = find(&mut parent, i);
        *seen.entry(root).or_insert(0usize) += 1;
    }
    seen.into_iter().collect()
}

fn map_rep_err(err: RepError) -> CliError {
    match err {
        RepError::Cochain(tworep::cochain::CochainError::CapExceeded(n)) => CliError::Limit(
            format!("cochain enumeration would visit more than {n} entries"),
        ),
        other => CliError::Invalid(other.to_string()),
    }
}

/// The class list shown by `classify` and indexed by `homcat`.
fn class_rows(
    twogroup: &SpecialTwoGroup,
    scalar_order: u64,
    max_dim: usize,
    mode: Mode,
    caps: &Caps,
) -> Result<Vec<ClassRow>, CliError> {
    if max_dim > caps.dim {
        return Err(CliError::Limit(format!(
            "requested max dimension {max_dim} exceeds cap {} (set TWOREP_MAX_DIM to raise)",
            caps.dim
        )));
    }
    match mode {
        Mode::All => {
            let classes = pi0_rep(twogroup, max_dim, scalar_order, caps.cochains)
                .map_err(map_rep_err)?;
            Ok(classes
                .into_iter()
                .enumerate()
                .map(|(index, class)| ClassRow {
                    index,
                    dim: class.dim,
                    members: class.members,
                    rep: class.representative,
                })
                .collect())
        }
        Mode::Canonical => {
            let mut rows = vec![ClassRow {
                index: 0,
                dim: 0,
                members: 1,
                rep: None,
            }];
            for n in 1..=max_dim {
                let quads = enumerate_reps(
                    twogroup,
                    n,
                    scalar_order,
                    EnumMode::CanonicalOnly,
                    caps.cochains,
                )
                .map_err(map_rep_err)?;
                for (root, members) in union_classes(&quads) {
                    let index = rows.len();
                    rows.push(ClassRow {
                        index,
                        dim: n,
                        members,
                        rep: Some(quads[root].clone()),
                    });
                }
            }
            Ok(rows)
        }
    }
}

fn cmd_classify(
    path: &std::path::Path,
    max_dim: usize,
    mode: Mode,
    format: Format,
) -> Result<(), CliError> {
    let caps = Caps::from_env()?;
    let loaded = specfile::load(path, &caps)?;
    let rows = class_rows(&loaded.twogroup, loaded.scalar_order, max_dim, mode, &caps)?;
    match format {
        Format::Table => {
            println!(
                "classes for pi0 {}; pi1 {}; scalar order {} (max dim {max_dim}, mode {})",
                loaded.pi0_desc,
                loaded.pi1_desc,
                loaded.scalar_order,
                mode.name()
            );
            render::print_class_table(loaded.twogroup.group(), &rows);
        }
        Format::Json => {
            let doc = render::classify_json(
                loaded.twogroup.group(),
                loaded.scalar_order,
                max_dim,
                mode.name(),
                &rows,
            );
            println!("{}", serde_json::to_string_pretty(&doc).expect("serialize"));
        }
    }
    Ok(())
}

fn cmd_homcat(
    path: &std::path::Path,
    source: usize,
    target: usize,
    max_dim: usize,
    mode: Mode,
    format: Format,
) -> Result<(), CliError> {
    let caps = Caps::from_env()?;
    let loaded = specfile::load(path, &caps)?;
    let rows = class_rows(&loaded.twogroup, loaded.scalar_order, max_dim, mode, &caps)?;
    for idx in [source, target] {
        if idx >= rows.len() {
            return Err(CliError::Invalid(format!(
                "index {idx} out of range: classification produced {} classes",
                rows.len()
            )));
        }
    }
    let summary = summarize_pair(&loaded, &rows[source], &rows[target])?;
    match format {
        Format::Table => {
            println!("hom category: class {source} -> class {target}");
            render::print_homcat_table(&summary);
        }
        Format::Json => {
            let doc = render::homcat_json(source, target, &summary);
            println!("{}", serde_json::to_string_pretty(&doc).expect("serialize"));
        }
    }
    Ok(())
}

fn summarize_pair(
    loaded: &LoadedSpec,
    source: &ClassRow,
    target: &ClassRow,
) -> Result<tworep::intertwiner::HomCategorySummary, CliError> {
    match (&source.rep, &target.rep) {
        (Some(s), Some(t)) => tworep::intertwiner::hom_category_summary(&loaded.twogroup, s, t)
            .map_err(|e| CliError::Invalid(e.to_string())),
        // The zero-dimensional class admits exactly one morphism from or to
        // anything, so the category is terminal with no translation orbits.
        _ => Ok(tworep::intertwiner::HomCategorySummary {
            terminal: true,
            orbits: Vec::new(),
            character: None,
        }),
    }
}

fn cmd_selftest(seed: u64, size: u32) -> ExitCode {
    let report = run_selftest(&SelftestOptions {
        seed,
        size,
        inject_fault: cfg!(feature = "inject-fault"),
    });
    println!("{report}");
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
