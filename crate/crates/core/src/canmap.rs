//! The canonical system of an abelian cover: its character decomposition,
//! the subgroup it factors through, the divisorial base locus and a
//! rule-traced report on the degree of the canonical map.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::abgroup::{Character, Element, Quotient, Subgroup};
use crate::bounds::Case;
use crate::cover::{self, BranchComponent, BuildingData, ConfigurationAssumption, IncidencePoint};
use crate::error::Result;
use crate::picard::{BaseSurface, DivisorClass, Rational, SurfaceKind};

/// Facts about a cover that the engine cannot derive and takes on trust.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "fact", rename_all = "snake_case", deny_unknown_fields)]
pub enum DeclaredFact {
    /// Degree of the map defined by `|K_Y + L_chi|` onto its image.
    LinearSystemDegree { degree: i64 },
    /// `|K_X|` has no base points.
    CanonicalSystemFree {},
    /// The canonical map of (a smooth model of) `X / Gamma` is birational.
    QuotientCanonicalBirational {},
    /// The canonical map of `X / Gamma` has this degree onto an image of the given case.
    QuotientCanonicalDegree { degree: i64, image_case: Case },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionEntry {
    pub chi: Character,
    pub bundle: DivisorClass,
    pub h0: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalDecomposition {
    pub entries: Vec<DecompositionEntry>,
}

impl CanonicalDecomposition {
    pub fn pg(&self) -> i64 {
        self.entries.iter().map(|e| e.h0).sum()
    }

    /// Characters with `h0 > 0`, the trivial one included.
    pub fn contributing(&self) -> Vec<&DecompositionEntry> {
        self.entries.iter().filter(|e| e.h0 > 0).collect()
    }
}

/// `H^0(K_X) = H^0(K_Y) + sum_chi H^0(K_Y + L_chi)`, one entry per character.
pub fn decompose(bd: &BuildingData) -> Result<CanonicalDecomposition> {
    let s = &bd.surface;
    let entries = bd
        .group
        .characters()
        .into_iter()
        .map(|chi| {
            let bundle = &s.canonical + &bd.l(&chi);
            let h0 = if chi.is_trivial() {
                s.pg
            } else {
                s.h0(&bundle)?
            };
            Ok(DecompositionEntry { chi, bundle, h0 })
        })
        .collect::<Result<_>>()?;
    Ok(CanonicalDecomposition { entries })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientGroup {
    pub v: Element,
    pub labels: Vec<String>,
    /// Inertia data of the original components.
    pub sources: Vec<Element>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorizationReport {
    pub contributing: Vec<Character>,
    pub gamma: Subgroup,
    pub quotient: Quotient,
    pub quotient_bd: BuildingData,
    pub groups: Vec<QuotientGroup>,
    pub pg_z: i64,
    pub q_z: i64,
    pub k2_z: Rational,
    pub degree_factor: i64,
    pub classification_hint: Option<Case>,
    pub degree: Option<i64>,
    pub trace: Vec<String>,
}

/// Pushes the building data down to `G / Gamma`: branch components whose
/// inertia lies in `Gamma` disappear, `L_chibar = L_{lift chibar}`.
pub fn quotient_building_data(
    bd: &BuildingData,
    gamma: &Subgroup,
) -> Result<(Quotient, BuildingData)> {
    let quotient = bd.group.quotient(gamma);
    let target = quotient.target().clone();
    let branch: Vec<BranchComponent> = bd
        .branch
        .iter()
        .filter_map(|b| {
            let v = quotient.project(&b.v);
            (!v.is_zero()).then(|| BranchComponent { v, ..b.clone() })
        })
        .collect();
    let l = target
        .characters()
        .into_iter()
        .filter(|c| !c.is_trivial())
        .map(|c| {
            let lift = quotient.lift_character(&c);
            (c, bd.l(&lift))
        })
        .collect();
    let config = match &bd.config {
        ConfigurationAssumption::ExplicitPoints(points) => ConfigurationAssumption::ExplicitPoints(
            points
                .iter()
                .map(|p| IncidencePoint {
                    id: p.id.clone(),
                    labels: p
                        .labels
                        .iter()
                        .filter(|x| branch.iter().any(|b| &&b.label == x))
                        .cloned()
                        .collect(),
                })
                .filter(|p| p.labels.len() > 1)
                .collect(),
        ),
        other => other.clone(),
    };
    let qbd = BuildingData::from_parts(bd.surface.clone(), target, branch, l, config)?
        .with_declared_connected(bd.declared_connected);
    qbd.validate()?;
    Ok((quotient, qbd))
}

fn is_prime(n: i64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

/// Degree of `|A|` when it is evidently an embedding of the base.
fn known_embedding(s: &BaseSurface, a: &DivisorClass) -> bool {
    match s.kind {
        SurfaceKind::ProjectivePlane => a.coeffs()[0] >= 1,
        SurfaceKind::QuadricProduct => a.coeffs().iter().all(|&c| c >= 1),
        _ => false,
    }
}

pub fn factorization(bd: &BuildingData, facts: &[DeclaredFact]) -> Result<FactorizationReport> {
    let dec = decompose(bd)?;
    let pg = dec.pg();
    let contributing: Vec<Character> = dec.contributing().iter().map(|e| e.chi.clone()).collect();
    let gamma = bd.group.annihilator(&contributing);
    let mut trace = vec![format!(
        "contributing characters {}; Gamma = annihilator = {gamma} of order {}",
        contributing
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(", "),
        gamma.order()
    )];
    let (quotient, qbd) = quotient_building_data(bd, &gamma)?;
    debug_assert!(contributing
        .iter()
        .all(|c| quotient.push_character(c).is_some()));

    let mut groups: BTreeMap<Element, QuotientGroup> = BTreeMap::new();
    for (orig, b) in bd
        .branch
        .iter()
        .filter(|b| !gamma.contains(&b.v))
        .zip(&qbd.branch)
    {
        let g = groups.entry(b.v.clone()).or_insert_with(|| QuotientGroup {
            v: b.v.clone(),
            labels: vec![],
            sources: vec![],
        });
        g.labels.push(b.label.clone());
        g.sources.push(orig.v.clone());
    }
    let (pg_z, q_z) = cover::pg_q(&qbd)?;
    let k2_z = cover::k2_rational(&qbd)?;
    trace.push(format!(
        "quotient {}: pg_Z = {pg_z}, q_Z = {q_z}",
        qbd.group
    ));
    let degree_factor = gamma.order();
    let g_order = bd.group.cardinality();

    let mut degree = None;
    let mut hint = None;
    let nontrivial: Vec<_> = dec
        .contributing()
        .into_iter()
        .filter(|e| !e.chi.is_trivial())
        .collect();
    let fixed_empty = base_locus(bd, &dec)?.fixed_part.values().all(|&m| m == 0);

    // (a) one contributing character: phi_X = phi_{|K_Y + L_chi|} o f
    if degree.is_none() && nontrivial.len() == 1 && bd.surface.pg == 0 {
        let e = nontrivial[0];
        let map_degree =
            if bd.surface.kind.is_computable() && known_embedding(&bd.surface, &e.bundle) {
                trace.push(format!(
                    "|{}| embeds the base",
                    bd.surface.describe(&e.bundle)
                ));
                Some(1)
            } else {
                facts.iter().find_map(|f| match f {
                    DeclaredFact::LinearSystemDegree { degree } => {
                        trace.push(format!(
                            "declared: |{}| maps with degree {degree}",
                            bd.surface.describe(&e.bundle)
                        ));
                        Some(*degree)
                    }
                    _ => None,
                })
            };
        match map_degree {
            Some(k) => {
                trace.push(format!(
                    "single contributing character {}: degree = |G| * {k} = {}",
                    e.chi,
                    g_order * k
                ));
                degree = Some(g_order * k);
                hint = Some(Case::A);
            }
            None => trace.push(format!(
                "single contributing character {} but the degree of |{}| is unknown",
                e.chi,
                bd.surface.describe(&e.bundle)
            )),
        }
    }

    // (e) pg = 3 with a free canonical system: a K^2-to-1 map onto the plane
    if degree.is_none()
        && pg == 3
        && fixed_empty
        && facts.contains(&DeclaredFact::CanonicalSystemFree {})
    {
        let k2 = cover::k2_rational(bd)?;
        if k2.is_integer() {
            trace.push(format!(
                "pg = 3, no fixed part, declared free: canonical map onto P^2 of degree K^2 = {k2}"
            ));
            degree = Some(k2.to_integer());
            hint = Some(Case::A);
        }
    }

    // (b) prime quotient whose canonical class is pulled back from A with h0(A) < pg_Z
    if degree.is_none() && is_prime(qbd.group.cardinality()) {
        if let Some(a) = cover::adjunction_class(&qbd).to_integral() {
            let h0a = bd.surface.h0(&a)?;
            if pg_z > h0a {
                trace.push(format!(
                    "K_Z pulls back {} with h0 = {h0a} < pg_Z = {pg_z}: phi_Z is not composed with the \
                     prime-degree cover Z -> Y, hence birational",
                    bd.surface.describe(&a)
                ));
                trace.push(format!("degree = |Gamma| = {degree_factor}"));
                degree = Some(degree_factor);
                hint = Some(Case::B);
            }
        }
    }

    // (c) declared behaviour of phi_Z
    if degree.is_none() {
        for f in facts {
            match f {
                DeclaredFact::QuotientCanonicalBirational {} => {
                    trace.push(format!(
                        "declared: phi_Z birational; degree = |Gamma| = {degree_factor}"
                    ));
                    degree = Some(degree_factor);
                    hint = Some(Case::B);
                    break;
                }
                DeclaredFact::QuotientCanonicalDegree {
                    degree: k,
                    image_case,
                } => {
                    trace.push(format!(
                        "declared: phi_Z has degree {k}; degree = |Gamma| * {k} = {}",
                        degree_factor * k
                    ));
                    degree = Some(degree_factor * k);
                    hint = Some(*image_case);
                    break;
                }
                _ => {}
            }
        }
    }
    if degree.is_none() {
        trace.push("no rule applies: degree undetermined".into());
    }

    Ok(FactorizationReport {
        contributing,
        gamma,
        quotient,
        quotient_bd: qbd,
        groups: groups.into_values().collect(),
        pg_z,
        q_z,
        k2_z,
        degree_factor,
        classification_hint: hint,
        degree,
        trace,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseLocusReport {
    pub per_char: BTreeMap<Character, BTreeMap<String, i64>>,
    pub fixed_part: BTreeMap<String, i64>,
    pub isolated_point_count: Option<i64>,
    pub note: Option<String>,
}

/// Each contributing `chi` spans `f^*|K_Y + L_chi| + sum (m_v - 1 - r_chi(v)) R_v`;
/// the fixed part is the componentwise minimum over those subsystems.
pub fn base_locus(bd: &BuildingData, dec: &CanonicalDecomposition) -> Result<BaseLocusReport> {
    let g = &bd.group;
    let mut per_char = BTreeMap::new();
    for e in dec.contributing() {
        let mut mult = BTreeMap::new();
        for b in &bd.branch {
            let m = g.order(&b.v);
            mult.insert(b.label.clone(), m - 1 - g.r_value(&e.chi, &b.v)?);
        }
        per_char.insert(e.chi.clone(), mult);
    }
    let mut fixed_part = BTreeMap::new();
    for b in &bd.branch {
        let min = per_char.values().map(|m| m[&b.label]).min().unwrap_or(0);
        fixed_part.insert(b.label.clone(), min);
    }

    let mut isolated_point_count = None;
    let mut note = None;
    let contributing = dec.contributing();
    let general = !matches!(bd.config, ConfigurationAssumption::ExplicitPoints(_));
    if contributing.len() == 2 && general && bd.surface.kind.is_computable() {
        let free = contributing
            .iter()
            .map(|e| bd.surface.is_nef(&e.bundle))
            .collect::<Result<Vec<_>>>()?;
        if free.iter().all(|&x| x) {
            let moving = |chi: &Character| -> Vec<&BranchComponent> {
                bd.branch
                    .iter()
                    .filter(|b| per_char[chi][&b.label] > fixed_part[&b.label])
                    .collect()
            };
            let a = moving(&contributing[0].chi);
            let b = moving(&contributing[1].chi);
            let mut count = 0;
            for x in &a {
                for y in &b {
                    if x.label == y.label {
                        continue;
                    }
                    let meet = bd.surface.intersect(&x.cls, &y.cls)?;
                    let stab = g.subgroup(&[x.v.clone(), y.v.clone()]).order();
                    count += meet * g.cardinality() / stab;
                }
            }
            isolated_point_count = Some(count);
        } else {
            note = Some("a contributing subsystem is not base point free".into());
        }
    } else {
        note = Some(
            "isolated base points computed only for two free subsystems in general position".into(),
        );
    }
    Ok(BaseLocusReport {
        per_char,
        fixed_part,
        isolated_point_count,
        note,
    })
}
