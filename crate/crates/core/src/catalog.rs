//! Declarative catalog entries: abelian covers, generating pairs and bare
//! invariant records, each with the values a run is expected to reproduce.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::abgroup::GroupSpec;
use crate::bounds::{Case, Status, SurfaceRecord};
use crate::canmap::DeclaredFact;
use crate::cover::{BranchComponent, BuildingData, ConfigurationAssumption, TriState};
use crate::error::{Error, Result};
use crate::expr::{IntExpr, Params};
use crate::genpair::{GeneratingPairSpec, LinearIdentity};
use crate::picard::{BaseSurface, Cohomology, CurveBundleGenerator, CurveFactor, DivisorClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKind {
    AbelianCover,
    GeneratingPair,
    RecordOnly,
}

/// Where an expected value comes from: stated in the literature, or derived
/// here from stated data.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    #[default]
    Published,
    Derived,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSpec {
    pub default: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveH0 {
    pub class: Vec<i64>,
    pub h0: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub genus: i64,
    pub generators: Vec<CurveBundleGenerator>,
    pub canonical: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub h0: Vec<CurveH0>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CohomologyRow {
    pub class: Vec<i64>,
    pub h: [i64; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfaceSpec {
    ProjectivePlane {},
    Quadric {},
    DelPezzo {
        points: u8,
    },
    DeclaredProduct {
        curve: CurveSpec,
    },
    Declared {
        gram: Vec<Vec<i64>>,
        canonical: Vec<i64>,
        q: i64,
        pg: i64,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        cohomology: Vec<CohomologyRow>,
    },
}

impl SurfaceSpec {
    pub fn build(&self) -> Result<BaseSurface> {
        match self {
            SurfaceSpec::ProjectivePlane {} => Ok(BaseSurface::projective_plane()),
            SurfaceSpec::Quadric {} => Ok(BaseSurface::quadric()),
            SurfaceSpec::DelPezzo { points } => BaseSurface::del_pezzo(*points),
            SurfaceSpec::DeclaredProduct { curve } => {
                let c = CurveFactor::new(
                    curve.genus,
                    curve.generators.clone(),
                    curve.canonical.clone(),
                    curve.h0.iter().map(|r| (r.class.clone(), r.h0)).collect(),
                )?;
                BaseSurface::declared_product(c)
            }
            SurfaceSpec::Declared {
                gram,
                canonical,
                q,
                pg,
                cohomology,
            } => BaseSurface::declared(
                gram.clone(),
                DivisorClass::new(canonical.clone()),
                *q,
                *pg,
                cohomology
                    .iter()
                    .map(|r| {
                        (
                            DivisorClass::new(r.class.clone()),
                            Cohomology::new(r.h[0], r.h[1], r.h[2]),
                        )
                    })
                    .collect(),
            ),
        }
    }

    fn dim(&self) -> usize {
        match self {
            SurfaceSpec::ProjectivePlane {} => 1,
            SurfaceSpec::Quadric {} => 2,
            SurfaceSpec::DelPezzo { points } => *points as usize + 1,
            SurfaceSpec::DeclaredProduct { curve } => curve.generators.len() + 1,
            SurfaceSpec::Declared { canonical, .. } => canonical.len(),
        }
    }
}

fn yes() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchSpec {
    pub label: String,
    pub v: Vec<i64>,
    pub class: Vec<IntExpr>,
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub smooth: bool,
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub irreducible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSpec {
    pub chi: Vec<i64>,
    pub class: Vec<IntExpr>,
}

fn general_position() -> ConfigurationAssumption {
    ConfigurationAssumption::GeneralPosition
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverSpec {
    pub surface: SurfaceSpec,
    pub group: Vec<i64>,
    pub branch: Vec<BranchSpec>,
    /// Reduced data `L_chi` for a basis of characters; solved when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced_l: Option<Vec<ClassSpec>>,
    #[serde(default = "general_position")]
    pub configuration: ConfigurationAssumption,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_connected: Option<bool>,
}

fn eval_class(c: &[IntExpr], params: &Params) -> Result<DivisorClass> {
    Ok(DivisorClass::new(
        c.iter().map(|x| x.eval(params)).collect::<Result<_>>()?,
    ))
}

impl CoverSpec {
    pub fn build(&self, params: &Params) -> Result<BuildingData> {
        let surface = self.surface.build()?;
        let group = GroupSpec::new(self.group.clone())?;
        let branch = self
            .branch
            .iter()
            .map(|b| {
                Ok(BranchComponent {
                    label: b.label.clone(),
                    v: group.element(&b.v)?,
                    cls: eval_class(&b.class, params)?,
                    declared_smooth: b.smooth,
                    declared_irreducible: b.irreducible,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let bd = match &self.reduced_l {
            Some(red) => {
                let reduced = red
                    .iter()
                    .map(|c| Ok((group.character(&c.chi)?, eval_class(&c.class, params)?)))
                    .collect::<Result<Vec<_>>>()?;
                BuildingData::from_reduced(
                    surface,
                    group,
                    branch,
                    reduced,
                    self.configuration.clone(),
                )?
            }
            None => BuildingData::from_branch(surface, group, branch, self.configuration.clone())?,
        };
        let bd = bd.with_declared_connected(self.declared_connected);
        bd.validate()?;
        Ok(bd)
    }
}

/// An expected value and where it comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected<T> {
    pub value: T,
    #[serde(default)]
    pub origin: Origin,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharH0 {
    pub chi: Vec<i64>,
    pub h0: IntExpr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassH0 {
    pub class: Vec<IntExpr>,
    pub h0: IntExpr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceRow {
    pub n: i64,
    pub pg: i64,
    pub q_x: i64,
    pub k2_x: i64,
    pub k2_sigma: i64,
    pub degree: i64,
    pub case: Case,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictExpect {
    pub rule: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slack: Option<i64>,
}

type Ex<T> = Option<Expected<T>>;

/// Expected outputs. Rationals are `[num, den]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expect {
    // invariants
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k2: Ex<IntExpr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pg: Ex<IntExpr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Ex<IntExpr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Ex<Vec<ClassSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h0: Ex<Vec<ClassH0>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smooth: Ex<TriState>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimal_general_type: Ex<TriState>,
    // canonical map
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contributing: Ex<Vec<CharH0>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Ex<Vec<Vec<i64>>>,
    /// Partition of the surviving branch components, by original inertia.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient_groups: Ex<Vec<Vec<Vec<i64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pg_z: Ex<IntExpr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k2_z: Ex<[IntExpr; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient_adjunction: Ex<Vec<IntExpr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Ex<IntExpr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Ex<Case>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_part: Ex<BTreeMap<String, IntExpr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isolated_points: Ex<IntExpr>,
    // generating pairs
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Ex<Vec<SequenceRow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identities: Ex<Vec<LinearIdentity>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope_limit: Ex<[i64; 2]>,
    // bounds
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdicts: Ex<Vec<VerdictExpect>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Ex<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub id: String,
    pub kind: EntryKind,
    pub title: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, ParamSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<CoverSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<GeneratingPairSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record: Option<SurfaceRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub declared_facts: Vec<DeclaredFact>,
    #[serde(default)]
    pub expect: Expect,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CatalogEntry {
    /// Defaults overridden by `overrides`; unknown names and values below
    /// the declared minimum are errors.
    pub fn resolve_params(&self, overrides: &Params) -> Result<Params> {
        let mut out: Params = self
            .params
            .iter()
            .map(|(k, p)| (k.clone(), p.default))
            .collect();
        for (k, v) in overrides {
            if !self.params.contains_key(k) {
                return Err(Error::Schema(format!("{}: unknown parameter {k}", self.id)));
            }
            out.insert(k.clone(), *v);
        }
        for (k, p) in &self.params {
            if let Some(min) = p.min {
                if out[k] < min {
                    return Err(Error::Schema(format!(
                        "{}: parameter {k} = {} is below its minimum {min}",
                        self.id, out[k]
                    )));
                }
            }
        }
        Ok(out)
    }

    /// Structural checks beyond what deserialization enforces.
    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(Error::Schema(format!("{}: {m}", self.id)));
        if self.id.is_empty() {
            return Err(Error::Schema("entry with empty id".into()));
        }
        let payloads = (
            self.cover.is_some(),
            self.pair.is_some(),
            self.record.is_some(),
        );
        let expected = match self.kind {
            EntryKind::AbelianCover => (true, false, false),
            EntryKind::GeneratingPair => (false, true, false),
            EntryKind::RecordOnly => (false, false, true),
        };
        if payloads != expected {
            return err(format!("payload does not match kind {:?}", self.kind));
        }
        for (k, p) in &self.params {
            if p.min.is_some_and(|m| p.default < m) {
                return err(format!("default of {k} is below its minimum"));
            }
        }
        if let Some(c) = &self.cover {
            let group = GroupSpec::new(c.group.clone())
                .map_err(|e| Error::Schema(format!("{}: {e}", self.id)))?;
            let dim = c.surface.dim();
            for b in &c.branch {
                let v = group
                    .element(&b.v)
                    .map_err(|e| Error::Schema(format!("{}: branch {}: {e}", self.id, b.label)))?;
                if v.is_zero() {
                    return err(format!("branch {} has inertia v = 0", b.label));
                }
                if b.class.len() != dim {
                    return err(format!(
                        "branch {} class has {} coordinates, expected {dim}",
                        b.label,
                        b.class.len()
                    ));
                }
            }
            for l in c.reduced_l.iter().flatten() {
                group
                    .character(&l.chi)
                    .map_err(|e| Error::Schema(format!("{}: {e}", self.id)))?;
                if l.class.len() != dim {
                    return err(format!(
                        "L{:?} has {} coordinates, expected {dim}",
                        l.chi,
                        l.class.len()
                    ));
                }
            }
        }
        if let Some(r) = &self.record {
            if let Some(p) = r.problems().first() {
                return err(p.clone());
            }
        }
        Ok(())
    }
}

fn parse_entries(text: &str, origin: &str) -> Result<Vec<CatalogEntry>> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Schema(format!("{origin}: {e}")))?;
    let items = match value {
        serde_json::Value::Array(items) => items,
        other => vec![other],
    };
    items
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            let e: CatalogEntry = serde_json::from_value(v)
                .map_err(|e| Error::Schema(format!("{origin}[{i}]: {e}")))?;
            e.validate()?;
            Ok(e)
        })
        .collect()
}

fn finish(mut entries: Vec<CatalogEntry>) -> Result<Vec<CatalogEntry>> {
    entries.sort_by(|a, b| a.id.cmp(&b.id));
    if let Some(w) = entries.windows(2).find(|w| w[0].id == w[1].id) {
        return Err(Error::Schema(format!("duplicate entry id {}", w[0].id)));
    }
    Ok(entries)
}

/// Loads a single JSON document (one entry or an array) or every `*.json`
/// in a directory. Entries are sorted by id.
pub fn load_catalog(path: &Path) -> Result<Vec<CatalogEntry>> {
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
    let mut entries = Vec::new();
    if path.is_dir() {
        let mut files: Vec<_> = fs::read_dir(path)
            .map_err(io)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        for f in files {
            let text =
                fs::read_to_string(&f).map_err(|e| Error::Io(format!("{}: {e}", f.display())))?;
            entries.extend(parse_entries(&text, &f.display().to_string())?);
        }
    } else {
        let text = fs::read_to_string(path).map_err(io)?;
        entries.extend(parse_entries(&text, &path.display().to_string())?);
    }
    finish(entries)
}

pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>> {
    finish(parse_entries(text, "<input>")?)
}

macro_rules! builtin_files {
    ($($f:literal),* $(,)?) => {
        &[$(($f, include_str!(concat!("../catalog/", $f)))),*]
    };
}

const BUILTIN: &[(&str, &str)] = builtin_files!(
    "abelian_covers.json",
    "generating_pairs.json",
    "records.json",
);

/// The catalog shipped with the library.
pub fn builtin() -> Vec<CatalogEntry> {
    let mut all = Vec::new();
    for (name, text) in BUILTIN {
        all.extend(parse_entries(text, name).unwrap_or_else(|e| panic!("shipped catalog: {e}")));
    }
    finish(all).expect("shipped catalog ids are unique")
}

pub fn find<'a>(entries: &'a [CatalogEntry], id: &str) -> Result<&'a CatalogEntry> {
    entries
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::Schema(format!("no catalog entry {id}")))
}
