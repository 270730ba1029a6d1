#![allow(dead_code)]

use candeg::abgroup::{Element, GroupSpec, Subgroup};
use candeg::cover::{BranchComponent, BuildingData, ConfigurationAssumption};
use candeg::picard::{BaseSurface, DivisorClass};
use proptest::prelude::*;

/// Groups of order at most 81, as lists of cyclic orders.
pub const GROUPS: &[&[i64]] = &[
    &[2],
    &[3],
    &[4],
    &[5],
    &[6],
    &[7],
    &[8],
    &[9],
    &[12],
    &[2, 2],
    &[2, 4],
    &[3, 3],
    &[2, 6],
    &[4, 4],
    &[5, 5],
    &[3, 9],
    &[6, 6],
    &[2, 2, 2],
    &[2, 2, 4],
    &[3, 3, 3],
    &[2, 2, 2, 2],
    &[9, 9],
    &[3, 27],
];

#[derive(Clone, Debug)]
pub struct RawCover {
    pub plane: bool,
    pub orders: Vec<i64>,
    /// `(v, class)` pairs before reduction modulo the orders.
    pub comps: Vec<(Vec<i64>, Vec<i64>)>,
}

pub fn raw_cover() -> impl Strategy<Value = RawCover> {
    (any::<bool>(), 0..GROUPS.len()).prop_flat_map(|(plane, gi)| {
        let orders = GROUPS[gi].to_vec();
        let rank = if plane { 1 } else { 2 };
        let comp = (
            proptest::collection::vec(0..81i64, orders.len()),
            proptest::collection::vec(0..5i64, rank),
        );
        proptest::collection::vec(comp, 0..5).prop_map(move |extra| RawCover {
            plane,
            orders: orders.clone(),
            comps: extra,
        })
    })
}

impl RawCover {
    pub fn surface(&self) -> BaseSurface {
        if self.plane {
            BaseSurface::projective_plane()
        } else {
            BaseSurface::quadric()
        }
    }

    /// Building data whose branch components generate the group and whose
    /// reduced relations are solvable. Classes are scaled by the exponent when
    /// the raw choice is not divisible.
    pub fn build(&self) -> BuildingData {
        let g = GroupSpec::new(self.orders.clone()).unwrap();
        let rank = if self.plane { 1 } else { 2 };
        let mut comps: Vec<(Element, DivisorClass)> = Vec::new();
        for i in 0..g.rank() {
            let mut v = vec![0; g.rank()];
            v[i] = 1;
            let mut c = vec![1; rank];
            c[0] = 1 + i as i64 % 3;
            comps.push((g.element(&v).unwrap(), DivisorClass::new(c)));
        }
        for (v, c) in &self.comps {
            let v = g.element(v).unwrap();
            if v.is_zero() || c.iter().all(|x| *x == 0) {
                continue;
            }
            comps.push((v, DivisorClass::new(c.clone())));
        }
        let branch = |scale: i64| -> Vec<BranchComponent> {
            comps
                .iter()
                .enumerate()
                .map(|(i, (v, c))| BranchComponent::new(format!("D{i}"), v.clone(), c.scale(scale)))
                .collect()
        };
        let config = ConfigurationAssumption::GeneralPosition;
        BuildingData::from_branch(self.surface(), g.clone(), branch(1), config.clone())
            .or_else(|_| {
                BuildingData::from_branch(self.surface(), g.clone(), branch(g.exponent()), config)
            })
            .expect("scaled branch data are solvable")
    }
}

/// Every subgroup, deduplicated by element set.
pub fn all_subgroups(g: &GroupSpec) -> Vec<Subgroup> {
    let els = g.elements();
    let mut out: Vec<Subgroup> = Vec::new();
    let mut push = |s: Subgroup| {
        if !out.iter().any(|t| t.same_elements(&s)) {
            out.push(s);
        }
    };
    push(g.subgroup(&[]));
    for a in &els {
        for b in &els {
            if g.rank() > 2 {
                for c in &els {
                    push(g.subgroup(&[a.clone(), b.clone(), c.clone()]));
                }
            } else {
                push(g.subgroup(&[a.clone(), b.clone()]));
            }
        }
    }
    out
}

pub fn is_subset(a: &Subgroup, b: &Subgroup) -> bool {
    a.elements().iter().all(|x| b.contains(x))
}

/// Quotienting by `H1` and then by the image of `H2` agrees with `G / H2`.
pub fn check_composition(orders: Vec<i64>) -> usize {
    let g = GroupSpec::new(orders).unwrap();
    let subs = all_subgroups(&g);
    let mut chains = 0;
    for h1 in &subs {
        for h2 in subs.iter().filter(|h2| is_subset(h1, h2)) {
            let q1 = g.quotient(h1);
            let images: Vec<_> = h2.generators().iter().map(|x| q1.project(x)).collect();
            let h2_bar = q1.target().subgroup(&images);
            let q2 = q1.target().quotient(&h2_bar);
            let direct = g.quotient(h2);
            assert_eq!(q2.target().cardinality(), direct.target().cardinality());
            let mut a = q2.target().orders().to_vec();
            let mut b = direct.target().orders().to_vec();
            a.sort();
            b.sort();
            assert_eq!(a, b, "{g}: {h1} < {h2}");
            for x in g.elements() {
                let composed = q2.project(&q1.project(&x));
                assert_eq!(
                    composed.is_zero(),
                    h2.contains(&x),
                    "{g}: {h1} < {h2} at {x}"
                );
            }
            // characters of G/H2 pulled back in two steps are trivial on H2
            for chi in q2.target().characters() {
                let up = q1.lift_character(&q2.lift_character(&chi));
                for y in h2.elements() {
                    assert_eq!(g.pairing_numerator(&up, y) % g.exponent(), 0);
                }
            }
            chains += 1;
        }
    }
    assert!(chains > subs.len());
    chains
}
