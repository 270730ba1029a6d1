//! Numerical constraints on the degree of the canonical map.
//!
//! Write `K_X = M + Z` with `Z` the fixed part, `d` the degree of the
//! canonical map and `Sigma` its image. Case A means `pg(Sigma) = 0`, case B
//! means `Sigma` is itself a canonically embedded surface.

use std::fmt;
use std::ops::RangeInclusive;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Case {
    A,
    B,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::A => "A",
            Case::B => "B",
        })
    }
}

impl std::str::FromStr for Case {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "A" | "a" => Ok(Case::A),
            "B" | "b" => Ok(Case::B),
            _ => Err(format!("unknown case {s:?}, expected A or B")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceRecord {
    pub case: Case,
    pub d: i64,
    pub pg: i64,
    #[serde(default)]
    pub q_x: i64,
    #[serde(default)]
    pub q_sigma: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k2: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m2: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deg_sigma: Option<i64>,
}

impl SurfaceRecord {
    pub fn new(case: Case, d: i64, pg: i64, q_x: i64, q_sigma: i64) -> Self {
        SurfaceRecord {
            case,
            d,
            pg,
            q_x,
            q_sigma,
            k2: None,
            m2: None,
            deg_sigma: None,
        }
    }

    pub fn with_k2(mut self, k2: i64) -> Self {
        self.k2 = Some(k2);
        self
    }

    /// Structural problems with the record itself.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.d < 2 {
            out.push(format!("d = {} < 2", self.d));
        }
        if self.pg < 3 {
            out.push(format!("pg = {} < 3", self.pg));
        }
        if self.q_x < 0 || self.q_sigma < 0 {
            out.push("irregularities must be nonnegative".into());
        }
        if let (Some(k2), Some(m2)) = (self.k2, self.m2) {
            if k2 < m2 {
                out.push(format!("K^2 = {k2} < M^2 = {m2}"));
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inapplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inapplicable => "inapplicable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub rule: &'static str,
    pub status: Status,
    pub citation: &'static str,
    /// `lhs - rhs` of the inequality as written in the citation.
    pub slack: Option<i64>,
}

impl Verdict {
    fn from_slack(rule: &'static str, citation: &'static str, slack: Option<i64>) -> Self {
        let status = match slack {
            None => Status::Inapplicable,
            Some(s) if s >= 0 => Status::Pass,
            Some(_) => Status::Fail,
        };
        Verdict {
            rule,
            status,
            citation,
            slack,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.slack {
            Some(s) => write!(
                f,
                "{:<5} {:<12} slack {:>4}  {}",
                self.rule, self.status, s, self.citation
            ),
            None => write!(
                f,
                "{:<5} {:<12}             {}",
                self.rule, self.status, self.citation
            ),
        }
    }
}

const XIAO_PG: i64 = 132;

/// One verdict per rule, in a fixed order.
pub fn check(r: &SurfaceRecord) -> Vec<Verdict> {
    let a = r.case == Case::A;
    let b = r.case == Case::B;
    let when = |c: bool, v: Option<i64>| if c { v } else { None };
    vec![
        Verdict::from_slack(
            "R1",
            "M^2 >= d deg(Sigma)",
            r.m2.zip(r.deg_sigma).map(|(m2, deg)| m2 - r.d * deg),
        ),
        Verdict::from_slack(
            "R2-A",
            "deg(Sigma) >= pg - 2 (Sigma spans P^{pg-1})",
            when(a, r.deg_sigma.map(|deg| deg - (r.pg - 2))),
        ),
        Verdict::from_slack(
            "R2-B",
            "deg(Sigma) >= 3pg + q(Sigma) - 7 (Debarre)",
            when(b, r.deg_sigma.map(|deg| deg - (3 * r.pg + r.q_sigma - 7))),
        ),
        Verdict::from_slack(
            "R3-A",
            "K^2 >= d(pg - 2)",
            when(a, r.k2.map(|k2| k2 - r.d * (r.pg - 2))),
        ),
        Verdict::from_slack(
            "R3-B",
            "K^2 >= d(3pg + q(Sigma) - 7)",
            when(b, r.k2.map(|k2| k2 - r.d * (3 * r.pg + r.q_sigma - 7))),
        ),
        Verdict::from_slack(
            "R4",
            "K^2 <= 9 chi(O_X) (Bogomolov-Miyaoka-Yau)",
            r.k2.map(|k2| 9 * (1 - r.q_x + r.pg) - k2),
        ),
        Verdict::from_slack(
            "R5",
            "27 - 9q(X) >= (d - 9)(pg - 2)",
            when(a, Some(27 - 9 * r.q_x - (r.d - 9) * (r.pg - 2))),
        ),
        Verdict::from_slack(
            "R6",
            "30 - 9q(X) - d q(Sigma) >= (d - 3)(3pg - 7)",
            when(
                b,
                Some(30 - 9 * r.q_x - r.d * r.q_sigma - (r.d - 3) * (3 * r.pg - 7)),
            ),
        ),
        Verdict::from_slack(
            "R7",
            "d = 2: K^2 >= 6pg + 2q(Sigma) - 14",
            when(
                b && r.d == 2,
                r.k2.map(|k2| k2 - (6 * r.pg + 2 * r.q_sigma - 14)),
            ),
        ),
        Verdict::from_slack(
            "R8",
            "d = 3: K^2 >= 9pg + 3q(Sigma) - 21",
            when(
                b && r.d == 3,
                r.k2.map(|k2| k2 - (9 * r.pg + 3 * r.q_sigma - 21)),
            ),
        ),
        Verdict::from_slack(
            "R9",
            "pg > 132: d <= 8 (Xiao)",
            when(a && r.pg > XIAO_PG, Some(8 - r.d)),
        ),
    ]
}

pub fn all_pass(verdicts: &[Verdict]) -> bool {
    verdicts.iter().all(|v| v.status != Status::Fail)
}

/// Largest `d >= 2` allowed by R5 (case A, with the Xiao cap) or R6 (case B, pg >= 4).
pub fn max_degree(case: Case, pg: i64, q_x: i64, q_sigma: i64) -> Option<i64> {
    if pg < 3 {
        return None;
    }
    let d = match case {
        Case::A => {
            let d = 9 + Integer::div_floor(&(27 - 9 * q_x), &(pg - 2));
            if pg > XIAO_PG {
                d.min(8)
            } else {
                d
            }
        }
        Case::B => {
            if pg < 4 {
                return None;
            }
            Integer::div_floor(&(9 * (1 + pg - q_x)), &(3 * pg - 7 + q_sigma))
        }
    };
    (d >= 2).then_some(d)
}

/// Published case-B bounds on pg for `q = 0`.
pub fn published_case_b_bound(d: i64) -> Option<i64> {
    match d {
        4 => Some(9),
        5 => Some(7),
        6 => Some(5),
        7..=9 => Some(4),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibleRow {
    pub d: i64,
    /// Largest admissible pg in the scanned window; `None` if none is.
    pub max_pg: Option<i64>,
    /// Every pg in the window is admissible.
    pub unbounded: bool,
    pub published: Option<i64>,
    pub discrepancy: bool,
}

fn admissible(case: Case, d: i64, pg: i64, q_x: i64, q_sigma: i64) -> bool {
    let rec = SurfaceRecord::new(case, d, pg, q_x, q_sigma);
    if case == Case::B && pg < 4 {
        return false;
    }
    all_pass(&check(&rec))
}

/// For each `d`, the largest pg up to `pg_max` passing R5/R6 (and the Xiao cap).
pub fn enumerate_feasible(
    case: Case,
    degrees: RangeInclusive<i64>,
    q_x: i64,
    q_sigma: i64,
    pg_max: i64,
) -> Vec<FeasibleRow> {
    degrees
        .map(|d| {
            let ok: Vec<i64> = (3..=pg_max)
                .filter(|&pg| admissible(case, d, pg, q_x, q_sigma))
                .collect();
            let max_pg = ok.last().copied();
            let lo = if case == Case::B { 4 } else { 3 };
            let unbounded = max_pg == Some(pg_max) && ok.len() as i64 == pg_max - lo + 1;
            let published = if case == Case::B && q_x == 0 && q_sigma == 0 {
                published_case_b_bound(d)
            } else {
                None
            };
            let discrepancy = published.is_some() && published != max_pg;
            FeasibleRow {
                d,
                max_pg,
                unbounded,
                published,
                discrepancy,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn verdict<'a>(v: &'a [Verdict], rule: &str) -> &'a Verdict {
        v.iter().find(|x| x.rule == rule).unwrap()
    }

    #[test]
    fn rito_extremes() {
        let v = check(&SurfaceRecord::new(Case::A, 36, 3, 0, 0));
        assert_eq!(verdict(&v, "R5").slack, Some(0));
        let v = check(&SurfaceRecord::new(Case::A, 28, 3, 1, 0));
        assert_eq!(verdict(&v, "R5").status, Status::Fail);
        let v = check(&SurfaceRecord::new(Case::A, 27, 3, 1, 0).with_k2(27));
        assert!(all_pass(&v));
        assert_eq!(verdict(&v, "R5").slack, Some(0));
    }

    #[test]
    fn case_b_triple_cover_irregularity() {
        let v = check(&SurfaceRecord::new(Case::B, 3, 4, 4, 0));
        assert_eq!(verdict(&v, "R6").status, Status::Fail);
        let v = check(&SurfaceRecord::new(Case::B, 3, 4, 3, 0));
        assert_eq!(verdict(&v, "R6").status, Status::Pass);
    }

    #[test]
    fn double_cover_floor() {
        let v = check(&SurfaceRecord::new(Case::B, 2, 9, 2, 2).with_k2(44));
        assert_eq!(verdict(&v, "R7").slack, Some(0));
        let v = check(&SurfaceRecord::new(Case::B, 2, 9, 2, 0).with_k2(44));
        assert_eq!(verdict(&v, "R7").slack, Some(4));
    }

    #[test]
    fn inapplicable_rules_have_no_slack() {
        let v = check(&SurfaceRecord::new(Case::A, 4, 5, 0, 0));
        for rule in [
            "R1", "R2-A", "R2-B", "R3-A", "R3-B", "R4", "R6", "R7", "R8", "R9",
        ] {
            assert_eq!(verdict(&v, rule).status, Status::Inapplicable, "{rule}");
            assert_eq!(verdict(&v, rule).slack, None);
        }
    }

    #[test]
    fn max_degrees() {
        assert_eq!(max_degree(Case::A, 3, 0, 0), Some(36));
        assert_eq!(max_degree(Case::A, 3, 1, 0), Some(27));
        assert_eq!(max_degree(Case::B, 4, 0, 0), Some(9));
        assert_eq!(max_degree(Case::B, 3, 0, 0), None);
        for pg in 30..=132 {
            assert_eq!(max_degree(Case::A, pg, 0, 0), Some(9));
        }
        assert_eq!(max_degree(Case::A, 133, 0, 0), Some(8));
        assert_eq!(max_degree(Case::B, 13, 0, 0), Some(3));
    }

    #[test]
    fn case_b_table() {
        let rows = enumerate_feasible(Case::B, 4..=9, 0, 0, 200);
        let got: Vec<_> = rows
            .iter()
            .map(|r| (r.d, r.max_pg, r.discrepancy))
            .collect();
        assert_eq!(
            got,
            vec![
                (4, Some(12), true),
                (5, Some(7), false),
                (6, Some(5), false),
                (7, Some(4), false),
                (8, Some(4), false),
                (9, Some(4), false),
            ]
        );
        let rows = enumerate_feasible(Case::B, 2..=3, 0, 0, 50);
        assert!(rows.iter().all(|r| r.unbounded));
    }

    #[test]
    fn record_round_trip() {
        let r = SurfaceRecord::new(Case::B, 2, 9, 2, 0).with_k2(40);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<SurfaceRecord>(&s).unwrap(), r);
        assert!(serde_json::from_str::<SurfaceRecord>(r#"{"case":"C","d":2,"pg":3}"#).is_err());
    }
}
