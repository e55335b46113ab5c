//! Text and JSON rendering of classification and hom-category results.
//!
//! Output is a deterministic function of the data: table columns and JSON
//! field orders are fixed, and every collection is emitted in its stored
//! (sorted) order.

use serde::Serialize;

use tworep::cochain::Cochain;
use tworep::group::{FinGroup, Perm};
use tworep::intertwiner::HomCategorySummary;
use tworep::rep::RepQuadruple;

/// Disjoint cycle notation with fixed points omitted; the identity is
/// rendered as `()`.
pub fn cycles(p: &Perm) -> String {
    let n = p.degree();
    let mut seen = vec![false; n];
    let mut out = String::new();
    for start in 0..n {
        if seen[start] || p.apply(start) == start {
            seen[start] = true;
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut x = p.apply(start);
        while x != start {
            seen[x] = true;
            cycle.push(x);
            x = p.apply(x);
        }
        out.push('(');
        out.push_str(
            &cycle
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" "),
        );
        out.push(')');
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

/// The permutation action described by the images of the group's
/// generating set.
pub fn rho_desc(group: &FinGroup, rho: &[Perm]) -> String {
    let gens = group.generators();
    if gens.is_empty() {
        return "trivial".into();
    }
    gens.iter()
        .map(|&g| format!("g{g}={}", cycles(&rho[g])))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Sparse cochain notation: `args->value` entries in stored order.
pub fn cochain_desc(c: &Cochain) -> String {
    if c.is_zero() {
        return "0".into();
    }
    c.support()
        .iter()
        .map(|(args, v)| {
            format!(
                "{}->{v:?}",
                args.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// One row of the classification table.
pub struct ClassRow {
    pub index: usize,
    pub dim: usize,
    pub members: usize,
    pub rep: Option<RepQuadruple>,
}

#[derive(Serialize)]
pub struct ClassifyJson {
    pub scalar_order: u64,
    pub max_dim: usize,
    pub mode: String,
    pub generators: Vec<usize>,
    pub classes: Vec<ClassJson>,
}

#[derive(Serialize)]
pub struct ClassJson {
    pub index: usize,
    pub dim: usize,
    pub members: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<Vec<GenImage>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<Vec<u64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cochain: Option<Vec<CochainEntryJson>>,
}

#[derive(Serialize)]
pub struct GenImage {
    pub element: usize,
    pub images: Vec<usize>,
    pub cycles: String,
}

#[derive(Serialize)]
pub struct CochainEntryJson {
    pub args: Vec<usize>,
    pub value: Vec<u64>,
}

pub fn cochain_entries(c: &Cochain) -> Vec<CochainEntryJson> {
    c.support()
        .iter()
        .map(|(args, value)| CochainEntryJson {
            args: args.clone(),
            value: value.clone(),
        })
        .collect()
}

pub fn classify_json(
    group: &FinGroup,
    scalar_order: u64,
    max_dim: usize,
    mode: &str,
    rows: &[ClassRow],
) -> ClassifyJson {
    let classes = rows
        .iter()
        .map(|row| {
            let rho = row.rep.as_ref().map(|q| {
                group
                    .generators()
                    .iter()
                    .map(|&g| GenImage {
                        element: g,
                        images: q.rho[g].images().to_vec(),
                        cycles: cycles(&q.rho[g]),
                    })
                    .collect()
            });
            ClassJson {
                index: row.index,
                dim: row.dim,
                members: row.members,
                rho,
                beta: row.rep.as_ref().map(|q| q.beta.clone()),
                cochain: row.rep.as_ref().map(|q| cochain_entries(&q.c)),
            }
        })
        .collect();
    ClassifyJson {
        scalar_order,
        max_dim,
        mode: mode.to_string(),
        generators: group.generators().to_vec(),
        classes,
    }
}

pub fn print_class_table(group: &FinGroup, rows: &[ClassRow]) {
    println!("{:<5} {:<4} {:<8} {:<28} {:<16} c", "idx", "dim", "members", "rho", "beta");
    for row in rows {
        match &row.rep {
            None => println!(
                "{:<5} {:<4} {:<8} {:<28} {:<16} -",
                row.index, row.dim, row.members, "-", "-"
            ),
            Some(q) => println!(
                "{:<5} {:<4} {:<8} {:<28} {:<16} {}",
                row.index,
                row.dim,
                row.members,
                rho_desc(group, &q.rho),
                format!("{:?}", q.beta),
                cochain_desc(&q.c)
            ),
        }
    }
}

#[derive(Serialize)]
pub struct HomcatJson {
    pub source: usize,
    pub target: usize,
    pub terminal: bool,
    pub orbits: Vec<OrbitJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub character: Option<CharacterJson>,
}

#[derive(Serialize)]
pub struct OrbitJson {
    pub index: usize,
    pub points: Vec<(usize, usize)>,
    pub stabilizer: Vec<usize>,
    pub intertwining: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<Vec<CochainEntryJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cocycle_class_trivial: Option<bool>,
}

#[derive(Serialize)]
pub struct CharacterJson {
    pub aligned: bool,
    pub cocycle_class_trivial: bool,
    pub equivalent_to_matrix_reps: bool,
}

pub fn homcat_json(source: usize, target: usize, summary: &HomCategorySummary) -> HomcatJson {
    HomcatJson {
        source,
        target,
        terminal: summary.terminal,
        orbits: summary
            .orbits
            .iter()
            .enumerate()
            .map(|(index, o)| OrbitJson {
                index,
                points: o.points.clone(),
                stabilizer: o.stabilizer.clone(),
                intertwining: o.intertwining,
                cocycle: o.cocycle.as_ref().map(cochain_entries),
                cocycle_class_trivial: o.cocycle_class_trivial,
            })
            .collect(),
        character: summary.character.as_ref().map(|c| CharacterJson {
            aligned: c.aligned,
            cocycle_class_trivial: c.cocycle_class_trivial,
            equivalent_to_matrix_reps: c.equivalent_to_matrix_reps,
        }),
    }
}

pub fn print_homcat_table(summary: &HomCategorySummary) {
    println!("terminal: {}", if summary.terminal { "yes" } else { "no" });
    if summary.orbits.is_empty() {
        println!("orbits: none");
    } else {
        println!(
            "{:<6} {:<5} {:<11} {:<13} cocycle-class",
            "orbit", "size", "stabilizer", "intertwining"
        );
        for (index, o) in summary.orbits.iter().enumerate() {
            let class = match o.cocycle_class_trivial {
                Some(true) => "trivial",
                Some(false) => "nontrivial",
                None => "-",
            };
            println!(
                "{:<6} {:<5} {:<11} {:<13} {class}",
                index,
                o.points.len(),
                o.stabilizer.len(),
                if o.intertwining { "yes" } else { "no" }
            );
        }
    }
    if let Some(c) = &summary.character {
        println!(
            "characters: aligned={}, cocycle class trivial={}",
            c.aligned, c.cocycle_class_trivial
        );
        if c.equivalent_to_matrix_reps {
            println!("note: the hom category is equivalent to Rep(pi0)");
        }
    }
}
