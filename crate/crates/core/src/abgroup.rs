//! Finite abelian groups `Z_{d_1} x ... x Z_{d_k}` and their characters.
//!
//! Characters are identified with integer tuples through the pairing
//! `<chi, v> = sum chi_j v_j / d_j  (mod 1)`, so roots of unity are never
//! materialized. A nonzero element `v` of order `m` stands for the inertia
//! pair `(<v>, psi_v)` with `psi_v(v) = exp(2 pi i / m)`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::picard::Rational;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(pub Vec<i64>);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Character(pub Vec<i64>);

fn write_tuple(f: &mut fmt::Formatter<'_>, v: &[i64]) -> fmt::Result {
    write!(f, "(")?;
    for (i, c) in v.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{c}")?;
    }
    write!(f, ")")
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

impl Element {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl Character {
    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupSpec {
    orders: Vec<i64>,
}

impl GroupSpec {
    /// The empty list gives the trivial group.
    pub fn new(orders: Vec<i64>) -> Result<Self> {
        if let Some(d) = orders.iter().find(|&&d| d < 2) {
            return Err(Error::Group(format!(
                "cyclic factor of order {d} (need >= 2)"
            )));
        }
        Ok(GroupSpec { orders })
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn cardinality(&self) -> i64 {
        self.orders.iter().product()
    }

    pub fn exponent(&self) -> i64 {
        self.orders.iter().fold(1, |a, &d| a.lcm(&d))
    }

    pub fn is_cyclic(&self) -> bool {
        self.orders.iter().fold(1, |a, &d| a.lcm(&d)) == self.cardinality()
    }

    fn reduce(&self, v: &[i64]) -> Vec<i64> {
        v.iter()
            .zip(&self.orders)
            .map(|(x, d)| x.rem_euclid(*d))
            .collect()
    }

    fn check_len(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::Group(format!(
                "tuple {v:?} has {} coordinates, group has rank {}",
                v.len(),
                self.rank()
            )));
        }
        Ok(())
    }

    pub fn element(&self, v: &[i64]) -> Result<Element> {
        self.check_len(v)?;
        Ok(Element(self.reduce(v)))
    }

    pub fn character(&self, v: &[i64]) -> Result<Character> {
        self.check_len(v)?;
        Ok(Character(self.reduce(v)))
    }

    pub fn zero(&self) -> Element {
        Element(vec![0; self.rank()])
    }

    pub fn trivial_character(&self) -> Character {
        Character(vec![0; self.rank()])
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        let s: Vec<i64> = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
        Element(self.reduce(&s))
    }

    pub fn scale(&self, k: i64, a: &Element) -> Element {
        let s: Vec<i64> = a.0.iter().map(|x| k * x).collect();
        Element(self.reduce(&s))
    }

    pub fn char_add(&self, a: &Character, b: &Character) -> Character {
        let s: Vec<i64> = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
        Character(self.reduce(&s))
    }

    pub fn char_scale(&self, k: i64, a: &Character) -> Character {
        let s: Vec<i64> = a.0.iter().map(|x| k * x).collect();
        Character(self.reduce(&s))
    }

    fn tuples(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::with_capacity(self.rank())];
        for &d in &self.orders {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (0..d).map(move |x| {
                        let mut t = t.clone();
                        t.push(x);
                        t
                    })
                })
                .collect();
        }
        out
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> Vec<Element> {
        self.tuples().into_iter().map(Element).collect()
    }

    pub fn characters(&self) -> Vec<Character> {
        self.tuples().into_iter().map(Character).collect()
    }

    /// The dual basis of the canonical basis of `G`.
    pub fn dual_basis(&self) -> Vec<Character> {
        (0..self.rank())
            .map(|i| {
                let mut c = vec![0; self.rank()];
                c[i] = 1;
                Character(c)
            })
            .collect()
    }

    fn tuple_order(&self, v: &[i64]) -> i64 {
        v.iter()
            .zip(&self.orders)
            .fold(1, |acc, (&x, &d)| acc.lcm(&(d / d.gcd(&x))))
    }

    pub fn order(&self, v: &Element) -> i64 {
        self.tuple_order(&v.0)
    }

    pub fn character_order(&self, chi: &Character) -> i64 {
        self.tuple_order(&chi.0)
    }

    /// Numerator of `<chi, v>` over the exponent, in `[0, exponent)`.
    pub fn pairing_numerator(&self, chi: &Character, v: &Element) -> i64 {
        let e = self.exponent();
        chi.0
            .iter()
            .zip(&v.0)
            .zip(&self.orders)
            .map(|((&c, &x), &d)| c * x * (e / d))
            .sum::<i64>()
            .rem_euclid(e)
    }

    /// `<chi, v>` as an exact rational in `[0, 1)`.
    pub fn pairing(&self, chi: &Character, v: &Element) -> Rational {
        Rational::new(self.pairing_numerator(chi, v), self.exponent())
    }

    /// The exponent `r` with `chi|_H = psi^r` for the pair encoded by `v`.
    pub fn r_value(&self, chi: &Character, v: &Element) -> Result<i64> {
        if v.is_zero() {
            return Err(Error::Group(
                "r-value undefined for the zero element".into(),
            ));
        }
        let m = self.order(v);
        let r = self.pairing(chi, v) * m;
        debug_assert!(r.is_integer());
        Ok(r.to_integer())
    }

    pub fn epsilon(&self, chi: &Character, chi2: &Character, v: &Element) -> Result<i64> {
        let m = self.order(v);
        Ok(i64::from(
            self.r_value(chi, v)? + self.r_value(chi2, v)? >= m,
        ))
    }

    /// Inertia pair of `v`: the cyclic subgroup `<v>` with `psi_v` given by
    /// its values in `Q/Z` on every element of `<v>`.
    pub fn inertia_pair(&self, v: &Element) -> Result<(Subgroup, BTreeMap<Element, Rational>)> {
        if v.is_zero() {
            return Err(Error::Group("the zero element has no inertia pair".into()));
        }
        let m = self.order(v);
        let psi = (0..m)
            .map(|k| (self.scale(k, v), Rational::new(k, m)))
            .collect();
        Ok((self.subgroup(std::slice::from_ref(v)), psi))
    }

    pub fn subgroup(&self, gens: &[Element]) -> Subgroup {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([self.zero()]);
        seen.insert(self.zero());
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = self.add(&x, g);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        Subgroup {
            generators: gens.to_vec(),
            elements: seen,
        }
    }

    /// Subgroup of `G^*` generated by `gens`.
    pub fn character_span(&self, gens: &[Character]) -> BTreeSet<Character> {
        let as_elems: Vec<Element> = gens.iter().map(|c| Element(c.0.clone())).collect();
        self.subgroup(&as_elems)
            .elements
            .into_iter()
            .map(|e| Character(e.0))
            .collect()
    }

    /// `{v : <chi, v> = 0 for all chi in chars}`.
    pub fn annihilator(&self, chars: &[Character]) -> Subgroup {
        let elems: Vec<Element> = self
            .elements()
            .into_iter()
            .filter(|v| chars.iter().all(|c| self.pairing_numerator(c, v) == 0))
            .collect();
        let gens = minimal_generators(self, &elems);
        Subgroup {
            generators: gens,
            elements: elems.into_iter().collect(),
        }
    }

    /// `{chi : <chi, v> = 0 for all v in gamma}`.
    pub fn perp(&self, gamma: &Subgroup) -> Vec<Character> {
        self.characters()
            .into_iter()
            .filter(|c| {
                gamma
                    .generators
                    .iter()
                    .all(|v| self.pairing_numerator(c, v) == 0)
            })
            .collect()
    }

    /// Whether `chars` is a basis, i.e. `G^*` is the internal direct sum of
    /// the cyclic groups they generate.
    pub fn is_character_basis(&self, chars: &[Character]) -> bool {
        let prod: i64 = chars.iter().map(|c| self.character_order(c)).product();
        prod == self.cardinality() && self.character_span(chars).len() as i64 == prod
    }

    pub fn quotient(&self, gamma: &Subgroup) -> Quotient {
        Quotient::new(self, gamma)
    }
}

// Greedy generating set: add elements not yet in the span.
fn minimal_generators(g: &GroupSpec, elems: &[Element]) -> Vec<Element> {
    let mut gens: Vec<Element> = Vec::new();
    let mut span = g.subgroup(&gens);
    let mut sorted: Vec<&Element> = elems.iter().filter(|e| !e.is_zero()).collect();
    sorted.sort_by_key(|e| (std::cmp::Reverse(g.order(e)), (*e).clone()));
    for e in sorted {
        if !span.contains(e) {
            gens.push(e.clone());
            span = g.subgroup(&gens);
        }
    }
    gens
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.orders.iter().map(|d| format!("Z{d}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    generators: Vec<Element>,
    elements: BTreeSet<Element>,
}

impl Subgroup {
    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn elements(&self) -> &BTreeSet<Element> {
        &self.elements
    }

    pub fn order(&self) -> i64 {
        self.elements.len() as i64
    }

    pub fn contains(&self, v: &Element) -> bool {
        self.elements.contains(v)
    }

    pub fn same_elements(&self, other: &Subgroup) -> bool {
        self.elements == other.elements
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ">")
    }
}

/// Diagonalization `A V = U^{-1} S` of an integer relation matrix; only the
/// column transform and its inverse are kept.
struct Smith {
    diag: Vec<i64>,
    v: Vec<Vec<i64>>,
    vinv: Vec<Vec<i64>>,
}

fn identity(k: usize) -> Vec<Vec<i64>> {
    (0..k)
        .map(|i| (0..k).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn smith_normal_form(mut a: Vec<Vec<i64>>, k: usize) -> Smith {
    let m = a.len();
    let mut v = identity(k);
    let mut vinv = identity(k);

    let swap_cols = |a: &mut Vec<Vec<i64>>,
                     v: &mut Vec<Vec<i64>>,
                     vinv: &mut Vec<Vec<i64>>,
                     i: usize,
                     j: usize| {
        if i == j {
            return;
        }
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
        vinv.swap(i, j);
    };
    // col_j -= q * col_t
    let col_op = |a: &mut Vec<Vec<i64>>,
                  v: &mut Vec<Vec<i64>>,
                  vinv: &mut Vec<Vec<i64>>,
                  t: usize,
                  j: usize,
                  q: i64| {
        for row in a.iter_mut() {
            row[j] -= q * row[t];
        }
        for row in v.iter_mut() {
            row[j] -= q * row[t];
        }
        let rj = vinv[j].clone();
        for (x, y) in vinv[t].iter_mut().zip(rj) {
            *x += q * y;
        }
    };

    let mut diag = vec![0; k];
    for t in 0..m.min(k) {
        let pivot = (t..m)
            .flat_map(|i| (t..k).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].abs());
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        swap_cols(&mut a, &mut v, &mut vinv, t, pj);
        loop {
            // bring the smallest nonzero entry of row t / column t to the pivot
            let best_row = (t..m)
                .filter(|&i| a[i][t] != 0)
                .min_by_key(|&i| a[i][t].abs());
            let best_col = (t..k)
                .filter(|&j| a[t][j] != 0)
                .min_by_key(|&j| a[t][j].abs());
            match (best_row, best_col) {
                (Some(i), Some(j)) if a[i][t].abs() < a[t][j].abs() => a.swap(t, i),
                (_, Some(j)) => swap_cols(&mut a, &mut v, &mut vinv, t, j),
                (Some(i), None) => a.swap(t, i),
                (None, None) => unreachable!("pivot row and column vanished"),
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..m {
                let q = a[i][t] / p;
                if q != 0 {
                    let rt = a[t].clone();
                    for (x, y) in a[i].iter_mut().zip(rt) {
                        *x -= q * y;
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..k {
                let q = a[t][j] / p;
                if q != 0 {
                    col_op(&mut a, &mut v, &mut vinv, t, j, q);
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..k).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    let ri = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(ri) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            for x in a[t].iter_mut() {
                *x = -*x;
            }
        }
        diag[t] = a[t][t];
    }
    Smith { diag, v, vinv }
}

/// The quotient `G / Gamma` in Smith form, with element projection and the
/// identification of its characters with `Gamma^perp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    source: GroupSpec,
    target: GroupSpec,
    kernel: Subgroup,
    // columns of the transform that survive (invariant factor > 1)
    kept: Vec<usize>,
    v: Vec<Vec<i64>>,
    lifts: Vec<Element>,
}

impl Quotient {
    fn new(g: &GroupSpec, gamma: &Subgroup) -> Self {
        let k = g.rank();
        let mut rel: Vec<Vec<i64>> = (0..k)
            .map(|i| {
                let mut r = vec![0; k];
                r[i] = g.orders[i];
                r
            })
            .collect();
        rel.extend(gamma.generators.iter().map(|e| e.0.clone()));
        let s = smith_normal_form(rel, k);
        let kept: Vec<usize> = (0..k).filter(|&i| s.diag[i] > 1).collect();
        let target = GroupSpec {
            orders: kept.iter().map(|&i| s.diag[i]).collect(),
        };
        let lifts = kept
            .iter()
            .map(|&i| Element(g.reduce(&s.vinv[i])))
            .collect();
        let q = Quotient {
            source: g.clone(),
            target,
            kernel: gamma.clone(),
            kept,
            v: s.v,
            lifts,
        };
        debug_assert_eq!(q.target.cardinality() * gamma.order(), g.cardinality());
        q
    }

    pub fn source(&self) -> &GroupSpec {
        &self.source
    }

    pub fn target(&self) -> &GroupSpec {
        &self.target
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    pub fn project(&self, x: &Element) -> Element {
        let w: Vec<i64> = self
            .kept
            .iter()
            .map(|&c| {
                x.0.iter()
                    .enumerate()
                    .map(|(r, &xr)| xr * self.v[r][c])
                    .sum()
            })
            .collect();
        Element(self.target.reduce(&w))
    }

    /// Representatives in `G` of the standard generators of the quotient.
    pub fn generator_lifts(&self) -> &[Element] {
        &self.lifts
    }

    /// Pulls a character of `G/Gamma` back to `G`; the image is `Gamma^perp`.
    pub fn lift_character(&self, chi_bar: &Character) -> Character {
        let g = &self.source;
        let c: Vec<i64> = (0..g.rank())
            .map(|j| {
                let mut ej = vec![0; g.rank()];
                ej[j] = 1;
                let img = self.project(&Element(ej));
                let r = self.target.pairing(chi_bar, &img) * g.orders[j];
                debug_assert!(r.is_integer());
                r.to_integer()
            })
            .collect();
        Character(g.reduce(&c))
    }

    /// The character of `G/Gamma` inducing `chi`, if `chi` kills `Gamma`.
    pub fn push_character(&self, chi: &Character) -> Option<Character> {
        let g = &self.source;
        if self
            .kernel
            .generators
            .iter()
            .any(|v| g.pairing_numerator(chi, v) != 0)
        {
            return None;
        }
        let c: Vec<i64> = self
            .lifts
            .iter()
            .zip(&self.target.orders)
            .map(|(u, &s)| {
                let r = g.pairing(chi, u) * s;
                debug_assert!(r.is_integer());
                r.to_integer()
            })
            .collect();
        Some(Character(self.target.reduce(&c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(orders: &[i64]) -> GroupSpec {
        GroupSpec::new(orders.to_vec()).unwrap()
    }

    fn e(v: &[i64]) -> Element {
        Element(v.to_vec())
    }

    fn c(v: &[i64]) -> Character {
        Character(v.to_vec())
    }

    #[test]
    fn element_orders() {
        assert_eq!(g(&[3, 3]).order(&e(&[1, 2])), 3);
        assert_eq!(g(&[2, 2, 2, 2]).order(&e(&[1, 1, 0, 0])), 2);
        assert_eq!(g(&[6, 2]).order(&e(&[2, 1])), 6);
        assert_eq!(g(&[6, 2]).order(&e(&[0, 0])), 1);
        assert_eq!(g(&[5, 5]).exponent(), 5);
        assert_eq!(g(&[6, 4]).exponent(), 12);
    }

    #[test]
    fn r_values() {
        assert_eq!(g(&[5, 5]).r_value(&c(&[4, 0]), &e(&[1, 3])).unwrap(), 4);
        assert_eq!(g(&[3, 3]).r_value(&c(&[1, 2]), &e(&[1, 1])).unwrap(), 0);
        assert_eq!(g(&[6, 2]).r_value(&c(&[0, 0]), &e(&[2, 1])).unwrap(), 0);
        assert!(g(&[3]).r_value(&c(&[1]), &e(&[0])).is_err());
        // v of order 3 inside Z6: chi = 1 restricts to psi^1 on <2>
        assert_eq!(g(&[6]).r_value(&c(&[1]), &e(&[2])).unwrap(), 1);
        assert_eq!(g(&[6]).r_value(&c(&[1]), &e(&[4])).unwrap(), 2);
    }

    #[test]
    fn epsilons() {
        assert_eq!(g(&[2]).epsilon(&c(&[1]), &c(&[1]), &e(&[1])).unwrap(), 1);
        assert_eq!(
            g(&[3, 3])
                .epsilon(&c(&[1, 0]), &c(&[1, 0]), &e(&[1, 0]))
                .unwrap(),
            0
        );
        assert_eq!(
            g(&[5, 5])
                .epsilon(&c(&[4, 0]), &c(&[3, 0]), &e(&[1, 0]))
                .unwrap(),
            1
        );
    }

    #[test]
    fn annihilators() {
        let z33 = g(&[3, 3]);
        let gamma = z33.annihilator(&[c(&[1, 1]), c(&[2, 2])]);
        assert!(gamma.same_elements(&z33.subgroup(&[e(&[1, 2])])));
        let gamma = z33.annihilator(&[c(&[1, 2]), c(&[2, 1])]);
        assert!(gamma.same_elements(&z33.subgroup(&[e(&[1, 1])])));
        let all = z33.annihilator(&z33.characters());
        assert_eq!(all.order(), 1);
        let none = z33.annihilator(&[]);
        assert_eq!(none.order(), 9);
        let z55 = g(&[5, 5]);
        let gamma = z55.annihilator(&[c(&[3, 0]), c(&[4, 0])]);
        assert!(gamma.same_elements(&z55.subgroup(&[e(&[0, 1])])));
        let perp = z55.perp(&gamma);
        assert_eq!(perp.len(), 5);
        assert!(perp.iter().all(|ch| ch.0[1] == 0));
    }

    #[test]
    fn cyclic_quotient_of_z5_squared() {
        let z55 = g(&[5, 5]);
        let q = z55.quotient(&z55.subgroup(&[e(&[0, 1])]));
        assert_eq!(q.target().orders(), &[5]);
        let img = q.project(&e(&[1, 0]));
        for b in 0..5 {
            assert_eq!(q.project(&e(&[1, b])), img);
        }
        assert!(!img.is_zero());
    }

    #[test]
    fn quotient_regroups_branch_data() {
        let z33 = g(&[3, 3]);
        let q = z33.quotient(&z33.subgroup(&[e(&[1, 1])]));
        assert_eq!(q.target().orders(), &[3]);
        let a = q.project(&e(&[1, 0]));
        assert_eq!(q.project(&e(&[0, 2])), a);
        assert_eq!(q.project(&e(&[2, 1])), a);
        let b = q.project(&e(&[2, 0]));
        assert_ne!(a, b);
        assert!(q.project(&e(&[2, 2])).is_zero());
    }

    #[test]
    fn quotient_by_everything() {
        let z23 = g(&[2, 2, 2]);
        let all = z23.subgroup(&z23.elements());
        let q = z23.quotient(&all);
        assert_eq!(q.target().cardinality(), 1);
        assert!(z23.elements().iter().all(|v| q.project(v).is_zero()));
    }

    #[test]
    fn quotient_characters_match_perp() {
        for (orders, gens) in [
            (vec![3, 3], vec![vec![1, 1]]),
            (vec![5, 5], vec![vec![0, 1]]),
            (vec![6, 2], vec![vec![3, 1]]),
            (vec![4, 2], vec![vec![2, 0]]),
            (vec![2, 2, 2], vec![vec![0, 0, 1], vec![1, 1, 0]]),
        ] {
            let grp = g(&orders);
            let gens: Vec<Element> = gens.into_iter().map(Element).collect();
            let gamma = grp.subgroup(&gens);
            let q = grp.quotient(&gamma);
            assert_eq!(q.target().cardinality() * gamma.order(), grp.cardinality());
            let kernel: BTreeSet<Element> = grp
                .elements()
                .into_iter()
                .filter(|v| q.project(v).is_zero())
                .collect();
            assert_eq!(&kernel, gamma.elements());
            let perp: BTreeSet<Character> = grp.perp(&gamma).into_iter().collect();
            let lifted: BTreeSet<Character> = q
                .target()
                .characters()
                .iter()
                .map(|cb| q.lift_character(cb))
                .collect();
            assert_eq!(lifted, perp);
            for cb in q.target().characters() {
                let chi = q.lift_character(&cb);
                assert_eq!(q.push_character(&chi), Some(cb.clone()));
                for v in grp.elements() {
                    assert_eq!(
                        grp.pairing(&chi, &v),
                        q.target().pairing(&cb, &q.project(&v))
                    );
                }
            }
        }
    }

    #[test]
    fn smith_form_is_a_divisibility_chain() {
        let s = smith_normal_form(vec![vec![4, 0], vec![0, 6], vec![2, 3]], 2);
        let nz: Vec<i64> = s.diag.iter().copied().filter(|&d| d != 0).collect();
        for w in nz.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
        // V * Vinv = I
        for i in 0..2 {
            for j in 0..2 {
                let x: i64 = (0..2).map(|t| s.v[i][t] * s.vinv[t][j]).sum();
                assert_eq!(x, i64::from(i == j));
            }
        }
    }

    #[test]
    fn character_basis_detection() {
        let z33 = g(&[3, 3]);
        assert!(z33.is_character_basis(&z33.dual_basis()));
        assert!(z33.is_character_basis(&[c(&[1, 1]), c(&[1, 2])]));
        assert!(!z33.is_character_basis(&[c(&[1, 1]), c(&[2, 2])]));
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(GroupSpec::new(vec![3, 1]).is_err());
        assert!(g(&[3]).element(&[1, 1]).is_err());
    }
}
