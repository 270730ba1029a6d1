//! Picard lattices of the supported base surfaces.
//!
//! Divisor classes are integer vectors in a fixed basis. For the rational
//! bases (plane, quadric, del Pezzo blow-ups of at most three points) the
//! cohomology of every class is computed exactly; the irregular product
//! `C x P^1` and fully declared surfaces rely on user-supplied tables that
//! are cross-checked against Riemann-Roch where possible.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass(Vec<i64>);

impl DivisorClass {
    pub fn new(coeffs: Vec<i64>) -> Self {
        DivisorClass(coeffs)
    }

    pub fn zero(len: usize) -> Self {
        DivisorClass(vec![0; len])
    }

    /// The `i`-th basis vector of a lattice with `len` coordinates.
    pub fn basis(len: usize, i: usize) -> Self {
        let mut c = vec![0; len];
        c[i] = 1;
        DivisorClass(c)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        DivisorClass(self.0.iter().map(|c| c * k).collect())
    }

    pub fn to_rational(&self) -> RationalClass {
        RationalClass(self.0.iter().map(|&c| Rational::from_integer(c)).collect())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(i64, i64) -> i64) -> Self {
        assert_eq!(
            self.len(),
            other.len(),
            "divisor classes of different lattices"
        );
        DivisorClass(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: Self) -> DivisorClass {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: Self) -> DivisorClass {
        &self + &rhs
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: Self) -> DivisorClass {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: Self) -> DivisorClass {
        &self - &rhs
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.scale(-1)
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.scale(-1)
    }
}

impl Mul<&DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scale(self)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// A class with exact rational coefficients, e.g. `K_Y + sum (1 - 1/m) D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalClass(Vec<Rational>);

impl RationalClass {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        RationalClass(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn add_scaled(&mut self, k: Rational, d: &DivisorClass) {
        assert_eq!(self.0.len(), d.len());
        for (a, &b) in self.0.iter_mut().zip(d.coeffs()) {
            *a += k * b;
        }
    }

    /// Returns the integral class if every coefficient is an integer.
    pub fn to_integral(&self) -> Option<DivisorClass> {
        self.0
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(DivisorClass)
    }

    /// Smallest positive multiple with integer coefficients.
    pub fn clear_denominators(&self) -> (i64, DivisorClass) {
        let den = self
            .0
            .iter()
            .fold(1i64, |acc, c| num_integer::lcm(acc, *c.denom()));
        let cls = self.0.iter().map(|c| (c * den).to_integer()).collect();
        (den, DivisorClass(cls))
    }
}

impl fmt::Display for RationalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cohomology {
    pub h0: i64,
    pub h1: i64,
    pub h2: i64,
}

impl Cohomology {
    pub fn new(h0: i64, h1: i64, h2: i64) -> Self {
        Cohomology { h0, h1, h2 }
    }

    pub fn euler(&self) -> i64 {
        self.h0 - self.h1 + self.h2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    ProjectivePlane,
    QuadricProduct,
    DelPezzoBlowup { points: u8 },
    DeclaredProduct,
    Declared,
}

impl SurfaceKind {
    pub fn is_computable(&self) -> bool {
        matches!(
            self,
            SurfaceKind::ProjectivePlane
                | SurfaceKind::QuadricProduct
                | SurfaceKind::DelPezzoBlowup { .. }
        )
    }
}

/// A generator of the Picard group of the curve factor of `C x P^1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveBundleGenerator {
    pub name: String,
    pub degree: i64,
    /// Order of the generator if it is torsion.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torsion: Option<i64>,
}

/// Curve factor `C` of a declared product `C x P^1`.
///
/// Line bundles on `C` are integer combinations of the declared generators,
/// torsion coordinates being reduced modulo their order. `h0` values not
/// forced by degree are read from `table`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveFactor {
    pub genus: i64,
    pub generators: Vec<CurveBundleGenerator>,
    pub canonical: Vec<i64>,
    table: Vec<(Vec<i64>, i64)>,
}

impl CurveFactor {
    pub fn new(
        genus: i64,
        generators: Vec<CurveBundleGenerator>,
        canonical: Vec<i64>,
        table: Vec<(Vec<i64>, i64)>,
    ) -> Result<Self> {
        let n = generators.len();
        if canonical.len() != n || table.iter().any(|(c, _)| c.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: canonical.len(),
            });
        }
        if genus < 0 {
            return Err(Error::Schema(format!("negative curve genus {genus}")));
        }
        let mut curve = CurveFactor {
            genus,
            generators,
            canonical,
            table: Vec::new(),
        };
        let kdeg = curve.degree(&curve.canonical);
        if kdeg != 2 * genus - 2 {
            return Err(Error::Schema(format!(
                "curve canonical class has degree {kdeg}, expected {}",
                2 * genus - 2
            )));
        }
        curve.canonical = curve.normalize(&curve.canonical);
        curve.table = table
            .into_iter()
            .map(|(c, h0)| (curve.normalize(&c), h0))
            .collect();
        curve.check_table()?;
        Ok(curve)
    }

    pub fn degree(&self, a: &[i64]) -> i64 {
        a.iter()
            .zip(&self.generators)
            .map(|(c, g)| c * g.degree)
            .sum()
    }

    pub fn normalize(&self, a: &[i64]) -> Vec<i64> {
        a.iter()
            .zip(&self.generators)
            .map(|(&c, g)| match g.torsion {
                Some(t) => c.rem_euclid(t),
                None => c,
            })
            .collect()
    }

    pub fn euler(&self, a: &[i64]) -> i64 {
        self.degree(a) + 1 - self.genus
    }

    fn dual(&self, a: &[i64]) -> Vec<i64> {
        let k: Vec<i64> = self.canonical.iter().zip(a).map(|(k, c)| k - c).collect();
        self.normalize(&k)
    }

    fn lookup(&self, a: &[i64]) -> Option<i64> {
        self.table.iter().find(|(c, _)| c == a).map(|&(_, h)| h)
    }

    fn check_table(&self) -> Result<()> {
        for (a, h0) in &self.table {
            let chi = self.euler(a);
            if *h0 < 0 || *h0 < chi {
                return Err(Error::Schema(format!(
                    "declared h0 {h0} of curve bundle {a:?} is below max(0, chi={chi})"
                )));
            }
            if let Some(h0_dual) = self.lookup(&self.dual(a)) {
                if h0 - h0_dual != chi {
                    return Err(Error::Schema(format!(
                        "declared h0 of curve bundle {a:?} and its Serre dual violate Riemann-Roch: {h0} - {h0_dual} != {chi}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn h0(&self, a: &[i64]) -> Result<i64> {
        let a = self.normalize(a);
        let deg = self.degree(&a);
        if deg < 0 {
            return Ok(0);
        }
        if a.iter().all(|&c| c == 0) {
            return Ok(1);
        }
        if a == self.canonical {
            return Ok(self.genus);
        }
        if deg > 2 * self.genus - 2 {
            return Ok(deg + 1 - self.genus);
        }
        if let Some(h) = self.lookup(&a) {
            return Ok(h);
        }
        if let Some(h) = self.lookup(&self.dual(&a)) {
            return Ok(h + self.euler(&a));
        }
        Err(Error::UnresolvableCohomology(format!(
            "curve bundle {a:?} of degree {deg} missing from declared table"
        )))
    }

    pub fn h1(&self, a: &[i64]) -> Result<i64> {
        Ok(self.h0(a)? - self.euler(a))
    }
}

/// `h^0` of `O(n)` on the projective line.
pub fn line_h0(n: i64) -> i64 {
    if n >= 0 {
        n + 1
    } else {
        0
    }
}

/// `h^1` of `O(n)` on the projective line.
pub fn line_h1(n: i64) -> i64 {
    if n <= -2 {
        -n - 1
    } else {
        0
    }
}

fn kunneth(a: (i64, i64), b: (i64, i64)) -> Cohomology {
    Cohomology::new(a.0 * b.0, a.0 * b.1 + a.1 * b.0, a.1 * b.1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseSurface {
    pub kind: SurfaceKind,
    /// Numerical rank of the lattice.
    pub rank: usize,
    /// Intersection form on the numerical lattice.
    pub gram: Vec<Vec<i64>>,
    pub canonical: DivisorClass,
    pub q: i64,
    pub pg: i64,
    /// Curves spanning the cone of curves; used for nef tests and peeling.
    pub neg_curve_list: Vec<DivisorClass>,
    pub basis_names: Vec<String>,
    cohomology_table: Vec<(DivisorClass, Cohomology)>,
    curve: Option<CurveFactor>,
}

impl BaseSurface {
    pub fn projective_plane() -> Self {
        BaseSurface {
            kind: SurfaceKind::ProjectivePlane,
            rank: 1,
            gram: vec![vec![1]],
            canonical: DivisorClass::new(vec![-3]),
            q: 0,
            pg: 0,
            neg_curve_list: vec![DivisorClass::new(vec![1])],
            basis_names: vec!["h".into()],
            cohomology_table: Vec::new(),
            curve: None,
        }
    }

    /// `P^1 x P^1` in the basis of the two rulings `F1, F2`.
    pub fn quadric() -> Self {
        BaseSurface {
            kind: SurfaceKind::QuadricProduct,
            rank: 2,
            gram: vec![vec![0, 1], vec![1, 0]],
            canonical: DivisorClass::new(vec![-2, -2]),
            q: 0,
            pg: 0,
            neg_curve_list: vec![DivisorClass::new(vec![1, 0]), DivisorClass::new(vec![0, 1])],
            basis_names: vec!["F1".into(), "F2".into()],
            cohomology_table: Vec::new(),
            curve: None,
        }
    }

    /// Blow-up of the plane in `points` general points, basis `h, e_1, ..., e_r`.
    pub fn del_pezzo(points: u8) -> Result<Self> {
        let r = points as usize;
        if !(1..=3).contains(&r) {
            return Err(Error::Unsupported(format!(
                "del Pezzo blow-up of {points} points (supported: 1..=3)"
            )));
        }
        let n = r + 1;
        let mut gram = vec![vec![0; n]; n];
        gram[0][0] = 1;
        for (i, row) in gram.iter_mut().enumerate().skip(1) {
            row[i] = -1;
        }
        let mut canonical = vec![1; n];
        canonical[0] = -3;
        let mut curves: Vec<DivisorClass> = (1..n).map(|i| DivisorClass::basis(n, i)).collect();
        if r == 1 {
            // the cone of curves of F_1 is spanned by e_1 and the fibre h - e_1
            curves.push(DivisorClass::new(vec![1, -1]));
        }
        for i in 1..n {
            for j in i + 1..n {
                let mut c = vec![0; n];
                c[0] = 1;
                c[i] = -1;
                c[j] = -1;
                curves.push(DivisorClass::new(c));
            }
        }
        let mut names = vec!["h".to_string()];
        names.extend((1..n).map(|i| format!("e{i}")));
        Ok(BaseSurface {
            kind: SurfaceKind::DelPezzoBlowup { points },
            rank: n,
            gram,
            canonical: DivisorClass::new(canonical),
            q: 0,
            pg: 0,
            neg_curve_list: curves,
            basis_names: names,
            cohomology_table: Vec::new(),
            curve: None,
        })
    }

    /// `C x P^1`: coordinates are the curve generators followed by the
    /// degree on the `P^1` factor.
    pub fn declared_product(curve: CurveFactor) -> Result<Self> {
        let mut canonical = curve.canonical.clone();
        canonical.push(-2);
        let mut names: Vec<String> = curve.generators.iter().map(|g| g.name.clone()).collect();
        names.push("F".into());
        let q = curve.genus;
        let mut s = BaseSurface {
            kind: SurfaceKind::DeclaredProduct,
            rank: 2,
            gram: vec![vec![0, 1], vec![1, 0]],
            canonical: DivisorClass::new(canonical),
            q,
            pg: 0,
            neg_curve_list: Vec::new(),
            basis_names: names,
            cohomology_table: Vec::new(),
            curve: Some(curve),
        };
        let o = s.cohomology(&DivisorClass::zero(s.dim()))?;
        s.q = o.h1;
        s.pg = o.h2;
        Ok(s)
    }

    pub fn declared(
        gram: Vec<Vec<i64>>,
        canonical: DivisorClass,
        q: i64,
        pg: i64,
        table: Vec<(DivisorClass, Cohomology)>,
    ) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|row| row.len() != n) || canonical.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: canonical.len(),
            });
        }
        let symmetric = gram
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, x)| *x == gram[j][i]));
        if !symmetric {
            return Err(Error::Schema(
                "declared intersection form is not symmetric".into(),
            ));
        }
        if let Some((d, _)) = table.iter().find(|(d, _)| d.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: d.len(),
            });
        }
        Ok(BaseSurface {
            kind: SurfaceKind::Declared,
            rank: n,
            gram,
            canonical,
            q,
            pg,
            neg_curve_list: Vec::new(),
            basis_names: (0..n).map(|i| format!("b{i}")).collect(),
            cohomology_table: table,
            curve: None,
        })
    }

    /// Number of coordinates of a divisor class on this surface.
    pub fn dim(&self) -> usize {
        self.canonical.len()
    }

    pub fn chi_o(&self) -> i64 {
        1 - self.q + self.pg
    }

    pub fn curve_factor(&self) -> Option<&CurveFactor> {
        self.curve.as_ref()
    }

    pub fn check(&self, d: &DivisorClass) -> Result<()> {
        if d.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: d.len(),
            });
        }
        Ok(())
    }

    /// Canonical representative: torsion coordinates reduced.
    pub fn normalize(&self, d: &DivisorClass) -> DivisorClass {
        match &self.curve {
            Some(c) => {
                let n = d.len();
                let mut v = c.normalize(&d.coeffs()[..n - 1]);
                v.push(d.coeffs()[n - 1]);
                DivisorClass::new(v)
            }
            None => d.clone(),
        }
    }

    pub fn classes_equal(&self, a: &DivisorClass, b: &DivisorClass) -> bool {
        self.normalize(a) == self.normalize(b)
    }

    /// Whether the class is trivial in the Picard group.
    pub fn is_trivial(&self, d: &DivisorClass) -> bool {
        self.normalize(d).is_zero()
    }

    /// Image in the numerical lattice.
    fn numerical(&self, d: &DivisorClass) -> Vec<Rational> {
        match &self.curve {
            Some(c) => {
                let n = d.len();
                vec![
                    Rational::from_integer(c.degree(&d.coeffs()[..n - 1])),
                    Rational::from_integer(d.coeffs()[n - 1]),
                ]
            }
            None => d
                .coeffs()
                .iter()
                .map(|&x| Rational::from_integer(x))
                .collect(),
        }
    }

    fn numerical_rational(&self, d: &RationalClass) -> Vec<Rational> {
        match &self.curve {
            Some(c) => {
                let n = d.coeffs().len();
                let deg = d.coeffs()[..n - 1]
                    .iter()
                    .zip(&c.generators)
                    .map(|(x, g)| x * g.degree)
                    .fold(Rational::zero(), |a, b| a + b);
                vec![deg, d.coeffs()[n - 1]]
            }
            None => d.coeffs().to_vec(),
        }
    }

    fn form(&self, a: &[Rational], b: &[Rational]) -> Rational {
        let mut s = Rational::zero();
        for (i, row) in self.gram.iter().enumerate() {
            for (j, &g) in row.iter().enumerate() {
                if g != 0 {
                    s += a[i] * b[j] * g;
                }
            }
        }
        s
    }

    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> Result<i64> {
        self.check(a)?;
        self.check(b)?;
        Ok(self
            .form(&self.numerical(a), &self.numerical(b))
            .to_integer())
    }

    pub fn intersect_rational(&self, a: &RationalClass, b: &RationalClass) -> Result<Rational> {
        for c in [a, b] {
            if c.coeffs().len() != self.dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.dim(),
                    found: c.coeffs().len(),
                });
            }
        }
        Ok(self.form(&self.numerical_rational(a), &self.numerical_rational(b)))
    }

    pub fn square(&self, a: &DivisorClass) -> Result<i64> {
        self.intersect(a, a)
    }

    /// Riemann-Roch: `chi(O_Y) + D.(D - K)/2`.
    pub fn riemann_roch(&self, d: &DivisorClass) -> Result<i64> {
        let dk = d - &self.canonical;
        let num = self.intersect(d, &dk)?;
        debug_assert!(num % 2 == 0, "D.(D-K) is even on a surface");
        Ok(self.chi_o() + num / 2)
    }

    pub fn is_nef(&self, d: &DivisorClass) -> Result<bool> {
        self.check(d)?;
        if !self.kind.is_computable() {
            return Err(Error::Unsupported(format!(
                "nef test on a {:?} surface",
                self.kind
            )));
        }
        for c in &self.neg_curve_list {
            if self.intersect(d, c)? < 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Strictly positive on the cone of curves (Kleiman).
    pub fn is_ample(&self, d: &DivisorClass) -> Result<bool> {
        self.check(d)?;
        if !self.kind.is_computable() {
            return Err(Error::Unsupported(format!(
                "ampleness test on a {:?} surface",
                self.kind
            )));
        }
        for c in &self.neg_curve_list {
            if self.intersect(d, c)? <= 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn cohomology(&self, d: &DivisorClass) -> Result<Cohomology> {
        self.check(d)?;
        let c = d.coeffs();
        match self.kind {
            SurfaceKind::ProjectivePlane => {
                let h0 = |a: i64| if a >= 0 { (a + 1) * (a + 2) / 2 } else { 0 };
                Ok(Cohomology::new(h0(c[0]), 0, h0(-3 - c[0])))
            }
            SurfaceKind::QuadricProduct => Ok(kunneth(
                (line_h0(c[0]), line_h1(c[0])),
                (line_h0(c[1]), line_h1(c[1])),
            )),
            SurfaceKind::DelPezzoBlowup { .. } => {
                let h0 = self.del_pezzo_h0(d)?;
                let h2 = self.del_pezzo_h0(&(&self.canonical - d))?;
                let chi = self.riemann_roch(d)?;
                let h1 = h0 + h2 - chi;
                if h1 < 0 {
                    return Err(Error::UnresolvableCohomology(format!(
                        "negative h1 for class {d}"
                    )));
                }
                Ok(Cohomology::new(h0, h1, h2))
            }
            SurfaceKind::DeclaredProduct => {
                let curve = self
                    .curve
                    .as_ref()
                    .expect("declared product has a curve factor");
                let n = c.len();
                let a = &c[..n - 1];
                let b = c[n - 1];
                Ok(kunneth(
                    (curve.h0(a)?, curve.h1(a)?),
                    (line_h0(b), line_h1(b)),
                ))
            }
            SurfaceKind::Declared => self
                .cohomology_table
                .iter()
                .find(|(k, _)| k == d)
                .map(|&(_, h)| h)
                .ok_or_else(|| {
                    Error::UnresolvableCohomology(format!("class {d} missing from declared table"))
                }),
        }
    }

    pub fn h0(&self, d: &DivisorClass) -> Result<i64> {
        Ok(self.cohomology(d)?.h0)
    }

    // Peel (-1)-curves meeting the class negatively until it is nef. A
    // negative degree against -K (ample) or a nef curve class means no
    // sections; each peel lowers D.(-K) by one, so this terminates.
    fn del_pezzo_h0(&self, d: &DivisorClass) -> Result<i64> {
        let anti = -&self.canonical;
        let mut d = d.clone();
        loop {
            if self.intersect(&d, &anti)? < 0 {
                return Ok(0);
            }
            let negative = self
                .neg_curve_list
                .iter()
                .map(|c| Ok((c, self.intersect(&d, c)?)))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .find(|&(_, x)| x < 0);
            match negative {
                None => {
                    let chi = self.riemann_roch(&d)?;
                    if chi < 0 {
                        return Err(Error::UnresolvableCohomology(format!(
                            "nef class {d} with negative Euler characteristic"
                        )));
                    }
                    return Ok(chi);
                }
                Some((c, _)) if self.square(c)? < 0 => d = &d - c,
                Some(_) => return Ok(0),
            }
        }
    }

    /// Human-readable class using the basis names, e.g. `3h-e1-e2-e3`.
    pub fn describe(&self, d: &DivisorClass) -> String {
        let mut s = String::new();
        for (c, name) in d.coeffs().iter().zip(&self.basis_names) {
            if *c == 0 {
                continue;
            }
            if !s.is_empty() && *c > 0 {
                s.push('+');
            }
            match *c {
                1 => {}
                -1 => s.push('-'),
                c => s.push_str(&c.to_string()),
            }
            s.push_str(name);
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dc(v: &[i64]) -> DivisorClass {
        DivisorClass::new(v.to_vec())
    }

    #[test]
    fn intersections() {
        let p2 = BaseSurface::projective_plane();
        assert_eq!(p2.intersect(&dc(&[1]), &dc(&[1])).unwrap(), 1);
        let q = BaseSurface::quadric();
        assert_eq!(q.intersect(&dc(&[1, 0]), &dc(&[0, 1])).unwrap(), 1);
        assert_eq!(q.intersect(&dc(&[1, 0]), &dc(&[1, 0])).unwrap(), 0);
        let dp = BaseSurface::del_pezzo(3).unwrap();
        assert_eq!(
            dp.intersect(&dc(&[1, -1, 0, 0]), &dc(&[1, 0, -1, 0]))
                .unwrap(),
            1
        );
        assert!(matches!(
            p2.intersect(&dc(&[1, 0]), &dc(&[1])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn plane_cohomology() {
        let p2 = BaseSurface::projective_plane();
        assert_eq!(p2.cohomology(&dc(&[4])).unwrap(), Cohomology::new(15, 0, 0));
        assert_eq!(p2.cohomology(&dc(&[-4])).unwrap(), Cohomology::new(0, 0, 3));
        assert_eq!(p2.cohomology(&dc(&[-3])).unwrap(), Cohomology::new(0, 0, 1));
        assert_eq!(p2.cohomology(&dc(&[-1])).unwrap(), Cohomology::new(0, 0, 0));
    }

    #[test]
    fn quadric_kunneth() {
        let q = BaseSurface::quadric();
        assert_eq!(
            q.cohomology(&dc(&[0, -1])).unwrap(),
            Cohomology::new(0, 0, 0)
        );
        assert_eq!(
            q.cohomology(&dc(&[-2, 0])).unwrap(),
            Cohomology::new(0, 1, 0)
        );
        assert_eq!(
            q.cohomology(&dc(&[-2, -2])).unwrap(),
            Cohomology::new(0, 0, 1)
        );
        assert_eq!(
            q.cohomology(&dc(&[2, 3])).unwrap(),
            Cohomology::new(12, 0, 0)
        );
        // h1(O(-3) x O(2)) = h1(O(-3)) h0(O(2)) = 2 * 3
        assert_eq!(
            q.cohomology(&dc(&[-3, 2])).unwrap(),
            Cohomology::new(0, 6, 0)
        );
    }

    #[test]
    fn sextic_del_pezzo() {
        let dp = BaseSurface::del_pezzo(3).unwrap();
        let anti = dc(&[3, -1, -1, -1]);
        assert_eq!(dp.h0(&anti).unwrap(), 7);
        assert!(dp.is_nef(&anti).unwrap());
        assert!(dp.is_ample(&anti).unwrap());
        // e2 - e3: peel e2, then -e3 has negative anticanonical degree
        assert_eq!(dp.h0(&dc(&[0, 0, 1, -1])).unwrap(), 0);
        // 2h - 2e1: peeling is not needed, fibre class doubled
        assert_eq!(dp.h0(&dc(&[2, -2, 0, 0])).unwrap(), 3);
        // h + e1 has e1 as fixed component
        assert_eq!(dp.h0(&dc(&[1, 1, 0, 0])).unwrap(), 3);
        assert_eq!(
            dp.cohomology(&dp.canonical).unwrap(),
            Cohomology::new(0, 0, 1)
        );
    }

    #[test]
    fn nef_tests() {
        let p2 = BaseSurface::projective_plane();
        assert!(p2.is_nef(&dc(&[2])).unwrap());
        let q = BaseSurface::quadric();
        assert!(!q.is_nef(&dc(&[1, -1])).unwrap());
        let dp1 = BaseSurface::del_pezzo(1).unwrap();
        assert!(dp1.is_nef(&dc(&[1, -1])).unwrap());
        assert!(!dp1.is_nef(&dc(&[1, -2])).unwrap());
        let decl = BaseSurface::declared(vec![vec![1]], dc(&[-3]), 0, 0, vec![]).unwrap();
        assert!(matches!(decl.is_nef(&dc(&[1])), Err(Error::Unsupported(_))));
        assert!(BaseSurface::del_pezzo(4).is_err());
    }

    fn genus3_with_eta() -> CurveFactor {
        CurveFactor::new(
            3,
            vec![
                CurveBundleGenerator {
                    name: "K".into(),
                    degree: 4,
                    torsion: None,
                },
                CurveBundleGenerator {
                    name: "eta".into(),
                    degree: 0,
                    torsion: Some(2),
                },
            ],
            vec![1, 0],
            vec![(vec![0, 1], 0), (vec![1, 1], 2)],
        )
        .unwrap()
    }

    #[test]
    fn declared_product_cohomology() {
        let y = BaseSurface::declared_product(genus3_with_eta()).unwrap();
        assert_eq!((y.q, y.pg), (3, 0));
        // (K + eta) x O(1)
        assert_eq!(y.h0(&dc(&[1, 1, 1])).unwrap(), 4);
        // -(eta x O(3)) has torsion coordinate -1 = 1 mod 2
        assert_eq!(y.cohomology(&dc(&[0, -1, -3])).unwrap().h1, 0);
        assert!(y.classes_equal(&dc(&[0, 2, 5]), &dc(&[0, 0, 5])));
        assert_eq!(
            y.intersect(&dc(&[1, 0, -2]), &dc(&[1, 1, 1])).unwrap(),
            4 + 4 * -2
        );
        assert_eq!(y.h0(&dc(&[0, 0, 0])).unwrap(), 1);
        assert_eq!(y.h0(&dc(&[0, 1, 2])).unwrap(), 0);
    }

    #[test]
    fn declared_curve_table_is_checked() {
        let bad = CurveFactor::new(
            3,
            vec![
                CurveBundleGenerator {
                    name: "K".into(),
                    degree: 4,
                    torsion: None,
                },
                CurveBundleGenerator {
                    name: "eta".into(),
                    degree: 0,
                    torsion: Some(2),
                },
            ],
            vec![1, 0],
            vec![(vec![0, 1], 0), (vec![1, 1], 3)],
        );
        assert!(matches!(bad, Err(Error::Schema(_))));
    }

    #[test]
    fn declared_table_lookup() {
        let s = BaseSurface::declared(
            vec![vec![1]],
            dc(&[-3]),
            0,
            0,
            vec![(dc(&[2]), Cohomology::new(6, 0, 0))],
        )
        .unwrap();
        assert_eq!(s.h0(&dc(&[2])).unwrap(), 6);
        assert!(matches!(
            s.cohomology(&dc(&[5])),
            Err(Error::UnresolvableCohomology(_))
        ));
    }

    #[test]
    fn describe_classes() {
        let dp = BaseSurface::del_pezzo(3).unwrap();
        assert_eq!(dp.describe(&dc(&[3, -1, -1, -1])), "3h-e1-e2-e3");
        assert_eq!(dp.describe(&dc(&[0, 0, 0, 0])), "0");
    }
}
