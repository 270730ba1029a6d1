//! Generating pairs `(h: V -> W, L)` and the surfaces `X_n -> Sigma_n`
//! cut out of `V x P^1` and `W x P^1` by `|L (x) O(n)|`.
//!
//! Pairs are numeric records only; `V` and `W` are never modelled.

use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::bounds::{Case, SurfaceRecord};
use crate::error::{Error, Result};
use crate::picard::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratingPairSpec {
    pub name: String,
    pub nu: i64,
    pub pg_w: i64,
    pub pg_v: i64,
    pub k2_w: i64,
    pub k2_v: i64,
    pub l2: i64,
    pub h0_l: i64,
    /// Genus of a general `C` in `|L|`.
    pub g: i64,
    /// Genus of `h^* C`.
    pub g_bar: i64,
    pub c_hyperelliptic: bool,
    /// `L = K_W`, which makes adjunction checkable.
    #[serde(default)]
    pub l_is_canonical: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Violation,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairIssue {
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for PairIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Violation => "violation",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}: {}", self.message)
    }
}

pub fn validate_pair(p: &GeneratingPairSpec) -> Vec<PairIssue> {
    let mut out = Vec::new();
    let mut violation = |m: String| {
        out.push(PairIssue {
            severity: Severity::Violation,
            message: m,
        })
    };
    if p.nu < 2 {
        violation(format!("nu = {} < 2", p.nu));
    }
    if p.pg_w != p.pg_v {
        violation(format!(
            "pg(W) = {} differs from pg(V) = {}",
            p.pg_w, p.pg_v
        ));
    }
    if p.l2 <= 0 {
        violation(format!("L^2 = {} is not positive", p.l2));
    }
    if p.h0_l < 2 {
        violation(format!("h0(L) = {} < 2", p.h0_l));
    }
    if p.g < 2 {
        violation(format!("g = {} < 2", p.g));
    }
    if p.g_bar - p.g <= 0 {
        violation(format!(
            "q(V) = g_bar - g = {} is not positive",
            p.g_bar - p.g
        ));
    }
    if p.l_is_canonical {
        if p.k2_w != p.l2 {
            violation(format!("L = K_W but K_W^2 = {} != L^2 = {}", p.k2_w, p.l2));
        }
        if 2 * p.g - 2 != 2 * p.l2 {
            violation(format!(
                "adjunction: 2g - 2 = {} but L^2 + K_W.L = {}",
                2 * p.g - 2,
                2 * p.l2
            ));
        }
    }
    if p.nu > 4 || (p.nu > 3 && !p.c_hyperelliptic) {
        out.push(PairIssue {
            severity: Severity::Warning,
            message: format!(
                "nu = {} exceeds the bound {} allowed for {} C",
                p.nu,
                if p.c_hyperelliptic { 4 } else { 3 },
                if p.c_hyperelliptic {
                    "hyperelliptic"
                } else {
                    "non-hyperelliptic"
                }
            ),
        });
    }
    out
}

pub fn is_valid(p: &GeneratingPairSpec) -> bool {
    validate_pair(p)
        .iter()
        .all(|i| i.severity != Severity::Violation)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceInvariants {
    pub n: i64,
    pub pg: i64,
    pub q_x: i64,
    pub q_sigma: i64,
    pub k2_x: i64,
    pub k2_sigma: i64,
    pub degree: i64,
    pub case: Case,
}

impl SequenceInvariants {
    pub fn chi_x(&self) -> i64 {
        1 - self.q_x + self.pg
    }

    pub fn record(&self) -> SurfaceRecord {
        SurfaceRecord::new(self.case, self.degree, self.pg, self.q_x, self.q_sigma)
            .with_k2(self.k2_x)
    }
}

pub fn sequence(p: &GeneratingPairSpec, n: i64) -> Result<SequenceInvariants> {
    if n < 3 {
        return Err(Error::GeneratingPair(format!("n = {n} < 3")));
    }
    if let Some(v) = validate_pair(p)
        .into_iter()
        .find(|i| i.severity == Severity::Violation)
    {
        return Err(Error::GeneratingPair(format!("{}: {}", p.name, v.message)));
    }
    let (degree, case) = if p.c_hyperelliptic {
        (2 * p.nu, Case::A)
    } else {
        (p.nu, Case::B)
    };
    Ok(SequenceInvariants {
        n,
        pg: n * p.pg_w + (n - 1) * p.g,
        q_x: p.g_bar - p.g,
        q_sigma: 0,
        k2_x: n * (p.k2_v - p.nu * p.l2) + 8 * (n - 1) * (p.g_bar - 1),
        k2_sigma: n * (p.k2_w - p.l2) + 8 * (n - 1) * (p.g - 1),
        degree,
        case,
    })
}

/// `lim K^2_{X_n} / chi(O_{X_n})`.
pub fn slope_limit(p: &GeneratingPairSpec) -> Rational {
    Rational::new(p.k2_v - p.nu * p.l2 + 8 * (p.g_bar - 1), p.pg_w + p.g)
}

/// `C` with `|K^2/chi - limit| <= C/n` for all `n >= 3`.
///
/// With `K^2 = a n + b` and `chi = c n + e` the difference is
/// `(bc - ae) / (c (cn + e))`.
pub fn slope_error_constant(p: &GeneratingPairSpec) -> Rational {
    let a = p.k2_v - p.nu * p.l2 + 8 * (p.g_bar - 1);
    let b = -8 * (p.g_bar - 1);
    let c = p.pg_w + p.g;
    let e = 1 - (p.g_bar - p.g) - p.g;
    let num = Rational::from_integer(b * c - a * e).abs() / c;
    // n / (cn + e) is monotone; bound it by its value at n = 3 or its limit 1/c
    let at3 = Rational::new(3, 3 * c + e);
    let lim = Rational::new(1, c);
    num * if at3 > lim { at3 } else { lim }
}

/// `k2_coeff * K^2 = pg_coeff * pg + constant` along a sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearIdentity {
    pub surface: SequenceSurface,
    pub k2_coeff: i64,
    pub pg_coeff: i64,
    pub constant: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SequenceSurface {
    X,
    Sigma,
}

impl LinearIdentity {
    pub fn holds(&self, s: &SequenceInvariants) -> bool {
        let k2 = match self.surface {
            SequenceSurface::X => s.k2_x,
            SequenceSurface::Sigma => s.k2_sigma,
        };
        self.k2_coeff * k2 == self.pg_coeff * s.pg + self.constant
    }
}

impl fmt::Display for LinearIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.surface {
            SequenceSurface::X => "X",
            SequenceSurface::Sigma => "Sigma",
        };
        let lhs = if self.k2_coeff == 1 {
            format!("K^2_{s}")
        } else {
            format!("{}K^2_{s}", self.k2_coeff)
        };
        write!(f, "{lhs} = {}pg {:+}", self.pg_coeff, self.constant)
    }
}
