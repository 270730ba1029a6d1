//! Building data of abelian covers `f: X -> Y` and the invariants of `X`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::abgroup::{Character, Element, GroupSpec};
use crate::error::{Error, Result};
use crate::picard::{BaseSurface, DivisorClass, Rational, RationalClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriState {
    Yes,
    No,
    Undetermined,
}

impl fmt::Display for TriState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriState::Yes => "yes",
            TriState::No => "no",
            TriState::Undetermined => "undetermined",
        })
    }
}

/// A branch component `D` with inertia datum `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchComponent {
    pub label: String,
    pub v: Element,
    pub cls: DivisorClass,
    pub declared_smooth: bool,
    pub declared_irreducible: bool,
}

impl BranchComponent {
    pub fn new(label: impl Into<String>, v: Element, cls: DivisorClass) -> Self {
        BranchComponent {
            label: label.into(),
            v,
            cls,
            declared_smooth: true,
            declared_irreducible: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidencePoint {
    pub id: String,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "points", rename_all = "snake_case")]
pub enum ConfigurationAssumption {
    /// Pairwise transverse, no triple points.
    GeneralPosition,
    ExplicitPoints(Vec<IncidencePoint>),
    SimpleNormalCrossings,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildingData {
    pub surface: BaseSurface,
    pub group: GroupSpec,
    pub branch: Vec<BranchComponent>,
    l: BTreeMap<Character, DivisorClass>,
    pub config: ConfigurationAssumption,
    /// Connectedness declaration for bases whose Picard group has torsion.
    pub declared_connected: Option<bool>,
}

/// A pair `(chi, chi')` for which the fundamental relation fails, with the
/// lattice discrepancy `L_chi + L_chi' - L_{chi chi'} - sum eps D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub chi: Character,
    pub chi2: Character,
    pub discrepancy: DivisorClass,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "L{} + L{} - L(sum) - sum eps D = {}",
            self.chi, self.chi2, self.discrepancy
        )
    }
}

fn check_branch(
    surface: &BaseSurface,
    group: &GroupSpec,
    branch: &[BranchComponent],
) -> Result<()> {
    let mut labels = BTreeSet::new();
    for b in branch {
        if !labels.insert(b.label.as_str()) {
            return Err(Error::BuildingData(format!(
                "duplicate branch label {}",
                b.label
            )));
        }
        if b.v.0.len() != group.rank() {
            return Err(Error::BuildingData(format!(
                "inertia datum {} of {} does not belong to {group}",
                b.v, b.label
            )));
        }
        if b.v.is_zero() {
            return Err(Error::BuildingData(format!(
                "inertia datum of {} is zero",
                b.label
            )));
        }
        surface.check(&b.cls)?;
    }
    Ok(())
}

/// `R = sum_v (d r_chi(v) / m_v) D_v` for a character of order `d`.
fn power_relation_rhs(
    surface: &BaseSurface,
    group: &GroupSpec,
    branch: &[BranchComponent],
    chi: &Character,
) -> Result<DivisorClass> {
    let d = group.character_order(chi);
    let mut rhs = DivisorClass::zero(surface.dim());
    for b in branch {
        let m = group.order(&b.v);
        let r = group.r_value(chi, &b.v)?;
        debug_assert_eq!((d * r) % m, 0);
        rhs = &rhs + &b.cls.scale(d * r / m);
    }
    Ok(rhs)
}

fn has_torsion(surface: &BaseSurface) -> bool {
    surface
        .curve_factor()
        .is_some_and(|c| c.generators.iter().any(|g| g.torsion.is_some()))
}

/// Solves `d_i L_i = sum (d_i r_i / m) D` for each basis character.
pub fn solve_reduced(
    surface: &BaseSurface,
    group: &GroupSpec,
    branch: &[BranchComponent],
    basis: &[Character],
) -> Result<Vec<(Character, DivisorClass)>> {
    check_branch(surface, group, branch)?;
    if !group.is_character_basis(basis) {
        return Err(Error::Group(format!(
            "characters {basis:?} are not a basis of the character group"
        )));
    }
    if has_torsion(surface) {
        return Err(Error::Unsupported(
            "reduced building data must be declared on a base with torsion in Pic".into(),
        ));
    }
    basis
        .iter()
        .map(|chi| {
            let d = group.character_order(chi);
            let rhs = power_relation_rhs(surface, group, branch, chi)?;
            if rhs.coeffs().iter().any(|c| c % d != 0) {
                return Err(Error::NonDivisible(format!(
                    "{d} L{chi} = {rhs} has no solution in the lattice"
                )));
            }
            let l = DivisorClass::new(rhs.coeffs().iter().map(|c| c / d).collect());
            Ok((chi.clone(), l))
        })
        .collect()
}

/// Extends reduced data to every character via the floor formula
/// `L_chi = sum a_i L_i - sum_v floor(sum a_i r_i(v) / m_v) D_v`.
pub fn all_l_chi(
    surface: &BaseSurface,
    group: &GroupSpec,
    branch: &[BranchComponent],
    reduced: &[(Character, DivisorClass)],
) -> Result<BTreeMap<Character, DivisorClass>> {
    let basis: Vec<Character> = reduced.iter().map(|(c, _)| c.clone()).collect();
    if !group.is_character_basis(&basis) {
        return Err(Error::Group(format!(
            "characters {basis:?} are not a basis of the character group"
        )));
    }
    let orders: Vec<i64> = basis.iter().map(|c| group.character_order(c)).collect();
    let r: Vec<Vec<i64>> = branch
        .iter()
        .map(|b| basis.iter().map(|c| group.r_value(c, &b.v)).collect())
        .collect::<Result<_>>()?;
    let mut out = BTreeMap::new();
    let mut alpha = vec![0i64; basis.len()];
    loop {
        let chi = basis
            .iter()
            .zip(&alpha)
            .fold(group.trivial_character(), |acc, (c, &a)| {
                group.char_add(&acc, &group.char_scale(a, c))
            });
        if !chi.is_trivial() {
            let mut l = DivisorClass::zero(surface.dim());
            for ((_, li), &a) in reduced.iter().zip(&alpha) {
                l = &l + &li.scale(a);
            }
            for (b, rb) in branch.iter().zip(&r) {
                let m = group.order(&b.v);
                let s: i64 = rb.iter().zip(&alpha).map(|(ri, a)| ri * a).sum();
                l = &l - &b.cls.scale(s / m);
            }
            out.insert(chi, surface.normalize(&l));
        }
        // odometer over alpha
        let mut i = 0;
        while i < alpha.len() {
            alpha[i] += 1;
            if alpha[i] < orders[i] {
                break;
            }
            alpha[i] = 0;
            i += 1;
        }
        if i == alpha.len() {
            break;
        }
    }
    Ok(out)
}

impl BuildingData {
    /// Assembles building data without checking the fundamental relations.
    pub fn from_parts(
        surface: BaseSurface,
        group: GroupSpec,
        branch: Vec<BranchComponent>,
        l: BTreeMap<Character, DivisorClass>,
        config: ConfigurationAssumption,
    ) -> Result<Self> {
        check_branch(&surface, &group, &branch)?;
        for (chi, cls) in &l {
            group.character(&chi.0)?;
            surface.check(cls)?;
        }
        if let ConfigurationAssumption::ExplicitPoints(points) = &config {
            for p in points {
                if let Some(bad) = p
                    .labels
                    .iter()
                    .find(|x| !branch.iter().any(|b| &b.label == *x))
                {
                    return Err(Error::BuildingData(format!(
                        "point {} references unknown component {bad}",
                        p.id
                    )));
                }
            }
        }
        Ok(BuildingData {
            surface,
            group,
            branch,
            l,
            config,
            declared_connected: None,
        })
    }

    /// Solves the reduced relations for the dual basis and extends them.
    pub fn from_branch(
        surface: BaseSurface,
        group: GroupSpec,
        branch: Vec<BranchComponent>,
        config: ConfigurationAssumption,
    ) -> Result<Self> {
        let reduced = solve_reduced(&surface, &group, &branch, &group.dual_basis())?;
        Self::from_reduced(surface, group, branch, reduced, config)
    }

    /// Checks declared reduced data against the reduced relations and extends them.
    pub fn from_reduced(
        surface: BaseSurface,
        group: GroupSpec,
        branch: Vec<BranchComponent>,
        reduced: Vec<(Character, DivisorClass)>,
        config: ConfigurationAssumption,
    ) -> Result<Self> {
        check_branch(&surface, &group, &branch)?;
        for (chi, l) in &reduced {
            surface.check(l)?;
            let d = group.character_order(chi);
            let rhs = power_relation_rhs(&surface, &group, &branch, chi)?;
            if !surface.classes_equal(&l.scale(d), &rhs) {
                return Err(Error::BuildingData(format!(
                    "reduced relation fails for {chi}: {d} L = {} but the branch data give {rhs}",
                    l.scale(d)
                )));
            }
        }
        let l = all_l_chi(&surface, &group, &branch, &reduced)?;
        let bd = Self::from_parts(surface, group, branch, l, config)?;
        bd.validate()?;
        Ok(bd)
    }

    pub fn with_declared_connected(mut self, connected: Option<bool>) -> Self {
        self.declared_connected = connected;
        self
    }

    /// Fundamental relations and the connectedness surrogate.
    pub fn validate(&self) -> Result<()> {
        if let Some(v) = verify_fundamental(self).first() {
            return Err(Error::BuildingData(format!(
                "fundamental relation violated: {v}"
            )));
        }
        if self.declared_connected == Some(false) {
            return Err(Error::BuildingData("cover declared disconnected".into()));
        }
        for chi in self.group.characters().iter().filter(|c| !c.is_trivial()) {
            if self.surface.is_trivial(&self.l(chi)) {
                return Err(Error::BuildingData(format!(
                    "L{chi} is trivial, the cover would be disconnected"
                )));
            }
        }
        Ok(())
    }

    /// `L_chi`; the trivial character gives the zero class.
    pub fn l(&self, chi: &Character) -> DivisorClass {
        self.l
            .get(chi)
            .cloned()
            .unwrap_or_else(|| DivisorClass::zero(self.surface.dim()))
    }

    pub fn l_map(&self) -> &BTreeMap<Character, DivisorClass> {
        &self.l
    }

    pub fn component(&self, label: &str) -> Option<&BranchComponent> {
        self.branch.iter().find(|b| b.label == label)
    }

    /// Total branch divisor.
    pub fn total_branch(&self) -> DivisorClass {
        self.branch
            .iter()
            .fold(DivisorClass::zero(self.surface.dim()), |acc, b| {
                &acc + &b.cls
            })
    }
}

pub fn verify_fundamental(bd: &BuildingData) -> Vec<Violation> {
    let g = &bd.group;
    let s = &bd.surface;
    let chars = g.characters();
    let mut out = Vec::new();
    for chi in &chars {
        for chi2 in &chars {
            let sum = g.char_add(chi, chi2);
            let mut disc = &(&bd.l(chi) + &bd.l(chi2)) - &bd.l(&sum);
            for b in &bd.branch {
                if g.epsilon(chi, chi2, &b.v).unwrap_or(0) == 1 {
                    disc = &disc - &b.cls;
                }
            }
            let disc = s.normalize(&disc);
            if !disc.is_zero() {
                out.push(Violation {
                    chi: chi.clone(),
                    chi2: chi2.clone(),
                    discrepancy: disc,
                });
            }
        }
    }
    out
}

/// Characters for which `ord(chi) L_chi = sum (ord(chi) r / m) D` fails.
pub fn d_power_failures(bd: &BuildingData) -> Result<Vec<(Character, DivisorClass)>> {
    let mut out = Vec::new();
    for chi in bd.group.characters().iter().filter(|c| !c.is_trivial()) {
        let d = bd.group.character_order(chi);
        let rhs = power_relation_rhs(&bd.surface, &bd.group, &bd.branch, chi)?;
        let lhs = bd.l(chi).scale(d);
        if !bd.surface.classes_equal(&lhs, &rhs) {
            out.push((chi.clone(), &lhs - &rhs));
        }
    }
    Ok(out)
}

/// True iff the inertia data generate `G`, i.e. no nontrivial étale part.
pub fn totally_ramified(bd: &BuildingData) -> bool {
    let gens: Vec<Element> = bd.branch.iter().map(|b| b.v.clone()).collect();
    bd.group.subgroup(&gens).order() == bd.group.cardinality()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailingPoint {
    pub labels: Vec<String>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothnessReport {
    pub smooth: TriState,
    pub points_checked: usize,
    pub failing: Vec<FailingPoint>,
}

// <v_1> + ... + <v_s> -> G is injective iff the sum has the product order.
fn inertia_injective(g: &GroupSpec, vs: &[&Element]) -> bool {
    let gens: Vec<Element> = vs.iter().map(|v| (*v).clone()).collect();
    let prod: i64 = vs.iter().map(|v| g.order(v)).product();
    g.subgroup(&gens).order() == prod
}

/// Group-theoretic smoothness test over the points implied by the
/// configuration; local smoothness and normal crossings are declarations.
pub fn smoothness_check(bd: &BuildingData) -> Result<SmoothnessReport> {
    let g = &bd.group;
    let mut points: Vec<Vec<&BranchComponent>> = Vec::new();
    match &bd.config {
        ConfigurationAssumption::GeneralPosition
        | ConfigurationAssumption::SimpleNormalCrossings => {
            for (i, a) in bd.branch.iter().enumerate() {
                for b in &bd.branch[i + 1..] {
                    if bd.surface.intersect(&a.cls, &b.cls)? > 0 {
                        points.push(vec![a, b]);
                    }
                }
            }
        }
        ConfigurationAssumption::ExplicitPoints(list) => {
            for p in list {
                points.push(p.labels.iter().filter_map(|l| bd.component(l)).collect());
            }
        }
    }
    let mut failing = Vec::new();
    for comps in &points {
        let vs: Vec<&Element> = comps.iter().map(|c| &c.v).collect();
        if !inertia_injective(g, &vs) {
            failing.push(FailingPoint {
                labels: comps.iter().map(|c| c.label.clone()).collect(),
                reason: format!(
                    "inertia sum {} -> {g} is not injective",
                    vs.iter()
                        .map(|v| format!("<{v}>"))
                        .collect::<Vec<_>>()
                        .join("+")
                ),
            });
        }
    }
    for b in bd.branch.iter().filter(|b| !b.declared_smooth) {
        failing.push(FailingPoint {
            labels: vec![b.label.clone()],
            reason: "component not declared smooth".into(),
        });
    }
    let group_fail = failing.iter().any(|f| f.reason.starts_with("inertia"));
    let smooth = if group_fail {
        TriState::No
    } else if failing.is_empty() {
        TriState::Yes
    } else {
        TriState::Undetermined
    };
    Ok(SmoothnessReport {
        smooth,
        points_checked: points.len(),
        failing,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverInvariants {
    pub k2: i64,
    pub pg: i64,
    pub q: i64,
    pub chi: i64,
    pub adjunction_class: RationalClass,
    pub minimal_general_type: TriState,
}

/// `K_Y + sum (1 - 1/m_v) D_v`, whose pullback is `K_X`.
pub fn adjunction_class(bd: &BuildingData) -> RationalClass {
    let mut c = bd.surface.canonical.to_rational();
    for b in &bd.branch {
        let m = bd.group.order(&b.v);
        c.add_scaled(Rational::one() - Rational::new(1, m), &b.cls);
    }
    c
}

/// `|G| (K_Y + sum (1 - 1/m) D)^2` as an exact rational.
pub fn k2_rational(bd: &BuildingData) -> Result<Rational> {
    let a = adjunction_class(bd);
    Ok(bd.surface.intersect_rational(&a, &a)? * bd.group.cardinality())
}

/// `(pg, q)` from the character decomposition; valid for normal covers with
/// rational singularities too.
pub fn pg_q(bd: &BuildingData) -> Result<(i64, i64)> {
    let s = &bd.surface;
    let mut q = s.q;
    let mut pg = s.pg;
    for l in bd.l.values() {
        q += s.cohomology(&-l)?.h1;
        pg += s.h0(&(&s.canonical + l))?;
    }
    Ok((pg, q))
}

pub fn invariants(bd: &BuildingData) -> Result<CoverInvariants> {
    let s = &bd.surface;
    let k2 = k2_rational(bd)?;
    if !k2.is_integer() {
        return Err(Error::NonIntegralK2(k2.to_string()));
    }
    let k2 = k2.to_integer();
    let (pg, q) = pg_q(bd)?;
    let adj = adjunction_class(bd);
    let minimal_general_type = if s.kind.is_computable() {
        let (_, integral) = adj.clear_denominators();
        match (s.is_nef(&integral)?, k2 > 0) {
            (true, true) => TriState::Yes,
            (true, false) => TriState::No,
            _ => TriState::Undetermined,
        }
    } else {
        TriState::Undetermined
    };
    Ok(CoverInvariants {
        k2,
        pg,
        q,
        chi: 1 - q + pg,
        adjunction_class: adj,
        minimal_general_type,
    })
}

/// `chi(O_Y) + sum chi(-L_chi)` by Riemann-Roch alone.
pub fn chi_riemann_roch(bd: &BuildingData) -> Result<i64> {
    let s = &bd.surface;
    bd.l.values()
        .try_fold(s.chi_o(), |acc, l| Ok(acc + s.riemann_roch(&-l)?))
}

/// `K_Y + (d - 1) L` for a simple cyclic cover `d L = D`.
pub fn simple_cyclic_adjunction(bd: &BuildingData) -> Result<DivisorClass> {
    let g = &bd.group;
    if g.rank() != 1 {
        return Err(Error::BuildingData(format!(
            "{g} is not presented as a cyclic group"
        )));
    }
    let d = g.cardinality();
    let v = match bd.branch.first() {
        Some(b) if bd.branch.iter().all(|c| c.v == b.v) => &b.v,
        _ => {
            return Err(Error::BuildingData(
                "a simple cyclic cover has a single inertia datum".into(),
            ))
        }
    };
    if g.order(v) != d {
        return Err(Error::BuildingData(format!("{v} does not generate {g}")));
    }
    let chi = g
        .characters()
        .into_iter()
        .find(|c| g.r_value(c, v).ok() == Some(1))
        .expect("a generator pairs to 1/d with some character");
    let l = bd.l(&chi);
    if !bd.surface.classes_equal(&l.scale(d), &bd.total_branch()) {
        return Err(Error::BuildingData(format!("{d} L{chi} != D")));
    }
    let k = &bd.surface.canonical + &l.scale(d - 1);
    debug_assert!(adjunction_class(bd)
        .to_integral()
        .is_some_and(|a| bd.surface.classes_equal(&a, &k)));
    Ok(k)
}
