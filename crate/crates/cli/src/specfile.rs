//! The structured text format for 2-group inputs and its loader.
//!
//! A file describes the classifying data of a 2-group: the object group
//! (by a named family or a full multiplication table), the loop module as
//! a product of cyclic factors with a per-generator action, a sparse
//! associator table, and the scalar order used by the representation
//! commands. Loading re-runs every structural check, so a successfully
//! loaded file is a valid 2-group.

use std::collections::BTreeSet;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use tworep::cochain::Cochain;
use tworep::group::{FinGroup, FinModule};
use tworep::twogroup::{SpecialTwoGroup, TwoGroupError};

/// A command failure with its process exit code: 2 for unreadable or
/// unparsable input, 3 for input that parses but violates a structural
/// check, 4 for work beyond the configured size limits.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid specification: {0}")]
    Invalid(String),
    #[error("computation limit exceeded: {0}")]
    Limit(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Invalid(_) => 3,
            CliError::Limit(_) => 4,
        }
    }
}

/// Size limits, overridable through environment variables: the orders of
/// the object group and the loop module (`TWOREP_MAX_GROUP`), the
/// dimension bound (`TWOREP_MAX_DIM`), the scalar order
/// (`TWOREP_MAX_SCALAR`), and the cochain solution-family bound
/// (`TWOREP_MAX_COCHAINS`).
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub group: u128,
    pub dim: usize,
    pub scalar: u64,
    pub cochains: u64,
}

impl Caps {
    pub fn from_env() -> Result<Caps, CliError> {
        Ok(Caps {
            group: read_env("TWOREP_MAX_GROUP", 64)?,
            dim: read_env("TWOREP_MAX_DIM", 4)?,
            scalar: read_env("TWOREP_MAX_SCALAR", 16)?,
            cochains: read_env("TWOREP_MAX_COCHAINS", 10_000)?,
        })
    }
}

fn read_env<T: std::str::FromStr>(name: &str, default: T) -> Result<T, CliError> {
    match std::env::var(name) {
        Ok(s) => s.parse().map_err(|_| {
            CliError::Parse(format!("environment override {name}={s} is not a number"))
        }),
        Err(_) => Ok(default),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    scalar_order: u64,
    pi0: Pi0Spec,
    pi1: Pi1Spec,
    #[serde(default)]
    action: ActionSpec,
    #[serde(default)]
    alpha: AlphaSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Pi0Spec {
    kind: Pi0Kind,
    #[serde(default)]
    parameter: Option<usize>,
    #[serde(default)]
    table: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Pi0Kind {
    Cyclic,
    Symmetric,
    Dihedral,
    Table,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Pi1Spec {
    cyclic_factors: Vec<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionSpec {
    #[serde(default)]
    generators: Vec<GeneratorAction>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorAction {
    element: usize,
    matrix: Vec<Vec<u64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlphaSpec {
    #[serde(default)]
    entries: Vec<AlphaEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlphaEntry {
    triple: Vec<usize>,
    value: Vec<u64>,
}

/// A loaded and fully validated input.
pub struct LoadedSpec {
    pub twogroup: SpecialTwoGroup,
    pub scalar_order: u64,
    pub pi0_desc: String,
    pub pi1_desc: String,
    pub alpha_desc: String,
}

pub fn load(path: &Path, caps: &Caps) -> Result<LoadedSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    let spec: SpecFile = toml::from_str(&text).map_err(|e| CliError::Parse(e.to_string()))?;

    let order = pi0_order(&spec.pi0)?;
    if order > caps.group {
        return Err(CliError::Limit(format!(
            "object group of order {order} exceeds the cap {}",
            caps.group
        )));
    }
    let module_size = spec
        .pi1
        .cyclic_factors
        .iter()
        .try_fold(1u128, |acc, &m| acc.checked_mul(u128::from(m)))
        .unwrap_or(u128::MAX);
    if module_size > caps.group {
        return Err(CliError::Limit(format!(
            "loop module of order {module_size} exceeds the cap {}",
            caps.group
        )));
    }
    if spec.scalar_order > caps.scalar {
        return Err(CliError::Limit(format!(
            "scalar order {} exceeds the cap {}",
            spec.scalar_order, caps.scalar
        )));
    }
    if spec.scalar_order == 0 {
        return Err(CliError::Invalid("scalar order must be positive".into()));
    }

    let (group, pi0_desc) = build_group(&spec.pi0)?;
    if spec.pi1.cyclic_factors.contains(&0) {
        return Err(CliError::Invalid(
            "module-action: cyclic factors must be positive".into(),
        ));
    }
    let module = build_module(&spec, &group)?;
    let alpha = build_alpha(&spec, &group, &module)?;
    let alpha_desc = match alpha.support().len() {
        0 => "zero".to_string(),
        1 => "nonzero (1 entry)".to_string(),
        n => format!("nonzero ({n} entries)"),
    };
    let twogroup = SpecialTwoGroup::new(group, module, alpha).map_err(|e| match e {
        TwoGroupError::NotACocycle => CliError::Invalid(describe_cocycle_failure(&spec)),
        other => CliError::Invalid(format!("associator-closed: {other}")),
    })?;
    let pi1_desc = factors_desc(&spec.pi1.cyclic_factors);
    Ok(LoadedSpec {
        twogroup,
        scalar_order: spec.scalar_order,
        pi0_desc,
        pi1_desc,
        alpha_desc,
    })
}

fn pi0_order(pi0: &Pi0Spec) -> Result<u128, CliError> {
    match pi0.kind {
        Pi0Kind::Cyclic | Pi0Kind::Dihedral | Pi0Kind::Symmetric => {
            let n = pi0.parameter.ok_or_else(|| {
                CliError::Invalid("group-axioms: this kind requires a parameter".into())
            })?;
            if n == 0 {
                return Err(CliError::Invalid(
                    "group-axioms: the parameter must be at least 1".into(),
                ));
            }
            Ok(match pi0.kind {
                Pi0Kind::Cyclic => n as u128,
                Pi0Kind::Dihedral => 2 * n as u128,
                Pi0Kind::Symmetric => (1..=n as u128).try_fold(1u128, u128::checked_mul)
                    .unwrap_or(u128::MAX),
                Pi0Kind::Table => unreachable!(),
            })
        }
        Pi0Kind::Table => {
            let t = pi0.table.as_ref().ok_or_else(|| {
                CliError::Invalid("group-axioms: kind \"table\" requires a table".into())
            })?;
            Ok(t.len() as u128)
        }
    }
}

fn build_group(pi0: &Pi0Spec) -> Result<(FinGroup, String), CliError> {
    if pi0.kind != Pi0Kind::Table && pi0.table.is_some() {
        return Err(CliError::Invalid(
            "group-axioms: a table is only allowed for kind \"table\"".into(),
        ));
    }
    if pi0.kind == Pi0Kind::Table && pi0.parameter.is_some() {
        return Err(CliError::Invalid(
            "group-axioms: a parameter is only allowed for named kinds".into(),
        ));
    }
    match pi0.kind {
        Pi0Kind::Cyclic => {
            let n = pi0.parameter.expect("checked by pi0_order");
            Ok((FinGroup::cyclic(n), format!("cyclic({n}) of order {n}")))
        }
        Pi0Kind::Symmetric => {
            let n = pi0.parameter.expect("checked by pi0_order");
            let g = FinGroup::symmetric(n);
            let desc = format!("symmetric({n}) of order {}", g.order());
            Ok((g, desc))
        }
        Pi0Kind::Dihedral => {
            let m = pi0.parameter.expect("checked by pi0_order");
            Ok((FinGroup::dihedral(m), format!("dihedral({m}) of order {}", 2 * m)))
        }
        Pi0Kind::Table => {
            let rows = pi0.table.clone().expect("checked by pi0_order");
            let g = FinGroup::from_table(rows)
                .map_err(|e| CliError::Invalid(format!("group-axioms: {e}")))?;
            let desc = format!("table of order {}", g.order());
            Ok((g, desc))
        }
    }
}

/// Extends the listed per-generator matrices to the whole group by closing
/// under products, then revalidates the result as a module action.
fn build_module(spec: &SpecFile, group: &FinGroup) -> Result<FinModule, CliError> {
    let factors = spec.pi1.cyclic_factors.clone();
    let k = factors.len();
    if spec.action.generators.is_empty() {
        return Ok(FinModule::trivial(group.clone(), factors));
    }
    for g in &spec.action.generators {
        if g.element >= group.order() {
            return Err(CliError::Invalid(format!(
                "module-action: generator element {} is out of range",
                g.element
            )));
        }
        if g.matrix.len() != k || g.matrix.iter().any(|row| row.len() != k) {
            return Err(CliError::Invalid(format!(
                "module-action: the matrix for element {} is not {k} x {k}",
                g.element
            )));
        }
    }
    let identity_matrix: Vec<Vec<u64>> = (0..k)
        .map(|i| (0..k).map(|j| u64::from(i == j) % factors[i]).collect())
        .collect();
    let reduce = |m: &[Vec<u64>]| -> Vec<Vec<u64>> {
        m.iter()
            .enumerate()
            .map(|(i, row)| row.iter().map(|x| x % factors[i]).collect())
            .collect()
    };
    let product = |a: &[Vec<u64>], b: &[Vec<u64>]| -> Vec<Vec<u64>> {
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        (0..k).fold(0u64, |acc, l| {
                            (acc + a[i][l] % factors[i] * (b[l][j] % factors[i])) % factors[i]
                        })
                    })
                    .collect()
            })
            .collect()
    };
    let mut assigned: Vec<Option<Vec<Vec<u64>>>> = vec![None; group.order()];
    assigned[group.identity()] = Some(identity_matrix);
    let mut frontier = vec![group.identity()];
    while let Some(g) = frontier.pop() {
        let base = assigned[g].clone().expect("frontier elements are assigned");
        for gen in &spec.action.generators {
            let h = group.mul(g, gen.element);
            let extended = product(&base, &reduce(&gen.matrix));
            match &assigned[h] {
                Some(existing) => {
                    if existing != &extended {
                        return Err(CliError::Invalid(format!(
                            "module-action: the generator matrices are inconsistent at \
                             element {h}"
                        )));
                    }
                }
                None => {
                    assigned[h] = Some(extended);
                    frontier.push(h);
                }
            }
        }
    }
    let mut action = Vec::with_capacity(group.order());
    for (g, slot) in assigned.into_iter().enumerate() {
        action.push(slot.ok_or_else(|| {
            CliError::Invalid(format!(
                "module-action: the listed elements do not generate the object group \
                 (element {g} is unreachable)"
            ))
        })?);
    }
    FinModule::new(group.clone(), factors, action)
        .map_err(|e| CliError::Invalid(format!("module-action: {e}")))
}

fn build_alpha(
    spec: &SpecFile,
    group: &FinGroup,
    module: &FinModule,
) -> Result<Cochain, CliError> {
    let mut alpha = Cochain::zero(module.clone(), 3);
    let mut seen = BTreeSet::new();
    for entry in &spec.alpha.entries {
        if entry.triple.len() != 3 {
            return Err(CliError::Invalid(format!(
                "associator-normalized: the entry at {:?} is not a triple",
                entry.triple
            )));
        }
        if entry.triple.iter().any(|&g| g >= group.order()) {
            return Err(CliError::Invalid(format!(
                "associator-normalized: the triple {:?} has an element out of range",
                entry.triple
            )));
        }
        if entry.triple.iter().any(|&g| g == group.identity()) {
            return Err(CliError::Invalid(format!(
                "associator-normalized: the triple {:?} touches the identity; \
                 normalized entries must be omitted",
                entry.triple
            )));
        }
        if entry.value.len() != module.rank() {
            return Err(CliError::Invalid(format!(
                "associator-normalized: the value at {:?} has {} coordinates, \
                 expected {}",
                entry.triple,
                entry.value.len(),
                module.rank()
            )));
        }
        if !seen.insert(entry.triple.clone()) {
            return Err(CliError::Invalid(format!(
                "associator-normalized: duplicate entry at {:?}",
                entry.triple
            )));
        }
        alpha.set(&entry.triple, entry.value.clone());
    }
    Ok(alpha)
}

/// Rebuilds the failing associator so the error can name the first tuple
/// where its coboundary does not vanish.
fn describe_cocycle_failure(spec: &SpecFile) -> String {
    let rebuilt = (|| -> Result<Cochain, CliError> {
        let (group, _) = build_group(&spec.pi0)?;
        let module = build_module(spec, &group)?;
        build_alpha(spec, &group, &module)
    })();
    match rebuilt {
        Ok(alpha) => match alpha.coboundary().support().first_key_value() {
            Some((tuple, _)) => format!(
                "associator-closed: the coboundary is nonzero at ({}, {}, {}, {})",
                tuple[0], tuple[1], tuple[2], tuple[3]
            ),
            None => "associator-closed: the associator is not a cocycle".into(),
        },
        Err(_) => "associator-closed: the associator is not a cocycle".into(),
    }
}

fn factors_desc(factors: &[u64]) -> String {
    if factors.is_empty() {
        return "trivial".into();
    }
    factors
        .iter()
        .map(|m| format!("Z/{m}"))
        .collect::<Vec<_>>()
        .join(" x ")
}
