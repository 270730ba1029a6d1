//! Runs catalog entries through the pipeline and diffs against `expect`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::abgroup::{Element, GroupSpec};
use crate::bounds::{self, Case, Status, SurfaceRecord, Verdict};
use crate::canmap;
use crate::catalog::{CatalogEntry, EntryKind, Expect, Expected, Origin, VerdictExpect};
use crate::cover::{self, BuildingData};
use crate::error::{Error, Result};
use crate::expr::{IntExpr, Params};
use crate::genpair::{self, GeneratingPairSpec, Severity};
use crate::picard::{DivisorClass, Rational};

/// Sequence indices checked for generating pairs.
pub const SEQUENCE_RANGE: std::ops::RangeInclusive<i64> = 3..=50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verb {
    Verify,
    Invariants,
    Canonical,
    Sequence,
    Bounds,
}

impl Verb {
    pub const ALL: [Verb; 5] = [
        Verb::Verify,
        Verb::Invariants,
        Verb::Canonical,
        Verb::Sequence,
        Verb::Bounds,
    ];
}

impl FromStr for Verb {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "verify" => Verb::Verify,
            "invariants" => Verb::Invariants,
            "canonical" => Verb::Canonical,
            "sequence" => Verb::Sequence,
            "bounds" => Verb::Bounds,
            _ => return Err(format!("unknown verb {s}")),
        })
    }
}

impl fmt::Display for Verb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verb::Verify => "verify",
            Verb::Invariants => "invariants",
            Verb::Canonical => "canonical",
            Verb::Sequence => "sequence",
            Verb::Bounds => "bounds",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub key: String,
    pub expected: String,
    pub computed: String,
    pub ok: bool,
    pub origin: Origin,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub id: String,
    pub kind: EntryKind,
    pub params: Params,
    pub computed: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
    pub verdicts: Vec<Verdict>,
    pub trace: Vec<String>,
    pub error: Option<String>,
    pub exit: i32,
}

impl RunReport {
    fn new(entry: &CatalogEntry) -> Self {
        RunReport {
            id: entry.id.clone(),
            kind: entry.kind,
            params: Params::new(),
            computed: BTreeMap::new(),
            checks: Vec::new(),
            violations: Vec::new(),
            warnings: Vec::new(),
            verdicts: Vec::new(),
            trace: Vec::new(),
            error: None,
            exit: 0,
        }
    }

    pub fn deltas(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.ok)
    }

    fn put(&mut self, key: &str, v: impl Serialize) {
        self.computed.insert(
            key.to_string(),
            serde_json::to_value(v).expect("serializable"),
        );
    }

    fn compare<T>(
        &mut self,
        key: &str,
        exp: &Option<Expected<T>>,
        computed: String,
        ok: impl FnOnce(&T) -> Result<(bool, String)>,
    ) -> Result<()> {
        if let Some(e) = exp {
            let (good, shown) = ok(&e.value)?;
            self.checks.push(Check {
                key: key.to_string(),
                expected: shown,
                computed,
                ok: good,
                origin: e.origin,
            });
        }
        Ok(())
    }

    fn compare_int(&mut self, key: &str, exp: &Option<Expected<IntExpr>>, got: i64) -> Result<()> {
        let params = self.params.clone();
        self.compare(key, exp, got.to_string(), |v| {
            let want = v.eval(&params)?;
            Ok((want == got, want.to_string()))
        })
    }

    fn finish(mut self) -> Self {
        self.exit = if self.deltas().next().is_some() || !self.violations.is_empty() {
            1
        } else {
            0
        };
        self
    }

    fn fail(mut self, e: &Error) -> Self {
        let msg = e.to_string();
        self.error = Some(if msg.contains(&self.id) {
            msg
        } else {
            format!("{}: {msg}", self.id)
        });
        self.exit = e.exit_code();
        self
    }
}

/// Runs the applicable verbs. Errors are folded into the report.
pub fn run(entry: &CatalogEntry, verbs: &[Verb], overrides: &Params) -> RunReport {
    let mut rep = RunReport::new(entry);
    let verbs: BTreeSet<Verb> = verbs.iter().copied().collect();
    let result = entry.resolve_params(overrides).and_then(|p| {
        rep.params = p;
        match entry.kind {
            EntryKind::AbelianCover => run_cover(entry, &verbs, &mut rep),
            EntryKind::GeneratingPair => run_pair(
                entry.pair.as_ref().expect("validated"),
                &entry.expect,
                &verbs,
                &mut rep,
            ),
            EntryKind::RecordOnly => run_record(
                entry.record.as_ref().expect("validated"),
                &entry.expect,
                &verbs,
                &mut rep,
            ),
        }
    });
    match result {
        Ok(()) => rep.finish(),
        Err(e) => rep.fail(&e),
    }
}

fn eval_class(c: &[IntExpr], params: &Params) -> Result<DivisorClass> {
    Ok(DivisorClass::new(
        c.iter().map(|x| x.eval(params)).collect::<Result<_>>()?,
    ))
}

fn sorted_partition(mut p: Vec<Vec<Vec<i64>>>) -> Vec<Vec<Vec<i64>>> {
    for part in &mut p {
        part.sort();
    }
    p.sort();
    p
}

fn run_cover(entry: &CatalogEntry, verbs: &BTreeSet<Verb>, rep: &mut RunReport) -> Result<()> {
    let params = rep.params.clone();
    let bd = entry.cover.as_ref().expect("validated").build(&params)?;
    let x = &entry.expect;
    let s = &bd.surface;

    if verbs.contains(&Verb::Verify) {
        for v in cover::verify_fundamental(&bd) {
            rep.violations.push(format!("fundamental relation: {v}"));
        }
        for (chi, r) in cover::d_power_failures(&bd)? {
            rep.violations
                .push(format!("power relation for {chi}: residual {r}"));
        }
        let smooth = cover::smoothness_check(&bd)?;
        for f in &smooth.failing {
            rep.trace.push(format!(
                "smoothness at {}: {}",
                f.labels.join("/"),
                f.reason
            ));
        }
        rep.put("smooth", smooth.smooth);
        rep.put("totally_ramified", cover::totally_ramified(&bd));
        rep.put(
            "l",
            bd.l_map()
                .iter()
                .map(|(c, l)| (c.to_string(), s.describe(l)))
                .collect::<BTreeMap<_, _>>(),
        );
        rep.compare("smooth", &x.smooth, smooth.smooth.to_string(), |v| {
            Ok((*v == smooth.smooth, v.to_string()))
        })?;
        if let Some(e) = &x.l {
            for c in &e.value {
                let chi = bd.group.character(&c.chi)?;
                let want = eval_class(&c.class, &params)?;
                let got = bd.l(&chi);
                rep.checks.push(Check {
                    key: format!("L{chi}"),
                    expected: s.describe(&want),
                    computed: s.describe(&got),
                    ok: s.classes_equal(&want, &got),
                    origin: e.origin,
                });
            }
        }
    }

    let mut pg = None;
    let mut q = None;
    let mut k2 = None;
    if verbs.contains(&Verb::Invariants) || verbs.contains(&Verb::Bounds) {
        let inv = cover::invariants(&bd)?;
        let chi_rr = cover::chi_riemann_roch(&bd)?;
        if chi_rr != inv.chi {
            rep.violations.push(format!(
                "chi(O_X) = {} from cohomology but {chi_rr} from Riemann-Roch",
                inv.chi
            ));
        }
        rep.put("k2", inv.k2);
        rep.put("pg", inv.pg);
        rep.put("q", inv.q);
        rep.put("chi", inv.chi);
        rep.put("adjunction_class", inv.adjunction_class.to_string());
        rep.put("minimal_general_type", inv.minimal_general_type);
        rep.compare_int("k2", &x.k2, inv.k2)?;
        rep.compare_int("pg", &x.pg, inv.pg)?;
        rep.compare_int("q", &x.q, inv.q)?;
        rep.compare(
            "minimal_general_type",
            &x.minimal_general_type,
            inv.minimal_general_type.to_string(),
            |v| Ok((*v == inv.minimal_general_type, v.to_string())),
        )?;
        if let Some(e) = &x.h0 {
            for row in &e.value {
                let cls = eval_class(&row.class, &params)?;
                let got = s.h0(&cls)?;
                let want = row.h0.eval(&params)?;
                rep.checks.push(Check {
                    key: format!("h0({})", s.describe(&cls)),
                    expected: want.to_string(),
                    computed: got.to_string(),
                    ok: want == got,
                    origin: e.origin,
                });
            }
        }
        pg = Some(inv.pg);
        q = Some(inv.q);
        k2 = Some(inv.k2);
    }

    let mut canonical = None;
    if verbs.contains(&Verb::Canonical) || verbs.contains(&Verb::Bounds) {
        let rep_c = canonical_report(&bd, entry, rep)?;
        canonical = Some(rep_c);
    }

    if verbs.contains(&Verb::Bounds) {
        let (degree, case, q_z) = canonical.expect("computed above");
        match (degree, case) {
            (Some(d), Some(case)) => {
                let q_sigma = if case == Case::B { q_z } else { 0 };
                let record = SurfaceRecord {
                    case,
                    d,
                    pg: pg.expect("computed"),
                    q_x: q.expect("computed"),
                    q_sigma,
                    k2,
                    m2: None,
                    deg_sigma: None,
                };
                bounds_checks(&record, &x.verdicts, rep, "")?;
                rep.put("record", &record);
            }
            _ => rep
                .warnings
                .push("bounds skipped: canonical degree or case undetermined".into()),
        }
    }
    Ok(())
}

/// Returns `(degree, case, q_Z)`.
fn canonical_report(
    bd: &BuildingData,
    entry: &CatalogEntry,
    rep: &mut RunReport,
) -> Result<(Option<i64>, Option<Case>, i64)> {
    let x = &entry.expect;
    let params = rep.params.clone();
    let s = &bd.surface;
    let dec = canmap::decompose(bd)?;
    let fac = canmap::factorization(bd, &entry.declared_facts)?;
    let bl = canmap::base_locus(bd, &dec)?;
    rep.trace.extend(fac.trace.iter().cloned());

    let contributing: Vec<(String, i64)> = dec
        .contributing()
        .iter()
        .map(|e| (e.chi.to_string(), e.h0))
        .collect();
    rep.put("contributing", &contributing);
    rep.put("gamma", fac.gamma.to_string());
    rep.put("quotient_group", fac.quotient_bd.group.to_string());
    rep.put(
        "quotient_groups",
        fac.groups
            .iter()
            .map(|g| json!({"v": g.v.to_string(), "labels": g.labels}))
            .collect::<Vec<_>>(),
    );
    rep.put("pg_z", fac.pg_z);
    rep.put("q_z", fac.q_z);
    rep.put("k2_z", [*fac.k2_z.numer(), *fac.k2_z.denom()]);
    rep.put("degree", fac.degree);
    rep.put("case", fac.classification_hint);
    rep.put("fixed_part", &bl.fixed_part);
    rep.put("isolated_points", bl.isolated_point_count);

    if fac.pg_z != dec.pg() {
        rep.violations.push(format!(
            "pg of the quotient {} differs from pg(X) = {}",
            fac.pg_z,
            dec.pg()
        ));
    }

    if let Some(e) = &x.contributing {
        let want: Vec<(String, i64)> = e
            .value
            .iter()
            .map(|c| Ok((bd.group.character(&c.chi)?.to_string(), c.h0.eval(&params)?)))
            .collect::<Result<_>>()?;
        let mut want_sorted = want.clone();
        want_sorted.sort();
        let mut got_sorted = contributing.clone();
        got_sorted.sort();
        rep.checks.push(Check {
            key: "contributing".into(),
            expected: format!("{want:?}"),
            computed: format!("{contributing:?}"),
            ok: want_sorted == got_sorted,
            origin: e.origin,
        });
    }
    let group: &GroupSpec = &bd.group;
    rep.compare("gamma", &x.gamma, fac.gamma.to_string(), |gens| {
        let els = gens
            .iter()
            .map(|g| group.element(g))
            .collect::<Result<Vec<Element>>>()?;
        let want = group.subgroup(&els);
        Ok((want.same_elements(&fac.gamma), want.to_string()))
    })?;
    let got_partition = sorted_partition(
        fac.groups
            .iter()
            .map(|g| g.sources.iter().map(|v| v.0.clone()).collect())
            .collect(),
    );
    rep.compare(
        "quotient_groups",
        &x.quotient_groups,
        format!("{got_partition:?}"),
        |want| {
            let w = sorted_partition(want.clone());
            Ok((w == got_partition, format!("{w:?}")))
        },
    )?;
    rep.compare_int("pg_z", &x.pg_z, fac.pg_z)?;
    let k2z = fac.k2_z;
    rep.compare("k2_z", &x.k2_z, k2z.to_string(), |[n, d]| {
        let want = Rational::new(n.eval(&params)?, d.eval(&params)?);
        Ok((want == k2z, want.to_string()))
    })?;
    let adj = cover::adjunction_class(&fac.quotient_bd);
    let shown = adj
        .to_integral()
        .map_or(adj.to_string(), |a| s.describe(&a));
    rep.compare("quotient_adjunction", &x.quotient_adjunction, shown, |c| {
        let want = eval_class(c, &params)?;
        let ok = adj
            .to_integral()
            .is_some_and(|a| s.classes_equal(&a, &want));
        Ok((ok, s.describe(&want)))
    })?;
    let shown = fac
        .degree
        .map_or("undetermined".to_string(), |d| d.to_string());
    rep.compare("degree", &x.degree, shown, |v| {
        let want = v.eval(&params)?;
        Ok((fac.degree == Some(want), want.to_string()))
    })?;
    let shown = fac
        .classification_hint
        .map_or("undetermined".to_string(), |c| c.to_string());
    rep.compare("case", &x.case, shown, |c| {
        Ok((fac.classification_hint == Some(*c), c.to_string()))
    })?;
    if let Some(e) = &x.fixed_part {
        for (label, m) in &e.value {
            let want = m.eval(&params)?;
            let got = bl.fixed_part.get(label).copied();
            rep.checks.push(Check {
                key: format!("fixed_part[{label}]"),
                expected: want.to_string(),
                computed: got.map_or("missing".into(), |g| g.to_string()),
                ok: got == Some(want),
                origin: e.origin,
            });
        }
    }
    let shown = bl
        .isolated_point_count
        .map_or("not computed".to_string(), |c| c.to_string());
    rep.compare("isolated_points", &x.isolated_points, shown, |v| {
        let want = v.eval(&params)?;
        Ok((bl.isolated_point_count == Some(want), want.to_string()))
    })?;
    Ok((fac.degree, fac.classification_hint, fac.q_z))
}

fn bounds_checks(
    record: &SurfaceRecord,
    exp: &Option<Expected<Vec<VerdictExpect>>>,
    rep: &mut RunReport,
    suffix: &str,
) -> Result<()> {
    let verdicts = bounds::check(record);
    for v in verdicts.iter().filter(|v| v.status == Status::Fail) {
        rep.violations.push(format!(
            "{}{suffix} fails: {} (slack {})",
            v.rule,
            v.citation,
            v.slack.unwrap_or_default()
        ));
    }
    if let Some(e) = exp {
        for want in &e.value {
            let got = verdicts.iter().find(|v| v.rule == want.rule);
            let ok = got.is_some_and(|g| {
                g.status == want.status && (want.slack.is_none() || want.slack == g.slack)
            });
            let show = |s: Status, sl: Option<i64>| match sl {
                Some(x) => format!("{s} (slack {x})"),
                None => s.to_string(),
            };
            rep.checks.push(Check {
                key: format!("{}{suffix}", want.rule),
                expected: show(want.status, want.slack),
                computed: got.map_or("no such rule".into(), |g| show(g.status, g.slack)),
                ok,
                origin: e.origin,
            });
        }
    }
    if rep.verdicts.is_empty() {
        rep.verdicts = verdicts;
    }
    Ok(())
}

fn run_pair(
    p: &GeneratingPairSpec,
    x: &Expect,
    verbs: &BTreeSet<Verb>,
    rep: &mut RunReport,
) -> Result<()> {
    let issues = genpair::validate_pair(p);
    if verbs.contains(&Verb::Verify) {
        for i in &issues {
            match i.severity {
                Severity::Violation => rep.violations.push(i.message.clone()),
                Severity::Warning => rep.warnings.push(i.message.clone()),
            }
        }
    }
    if !genpair::is_valid(p) {
        return Ok(());
    }
    let rows: Vec<_> = SEQUENCE_RANGE
        .map(|n| genpair::sequence(p, n))
        .collect::<Result<_>>()?;

    if verbs.contains(&Verb::Sequence) || verbs.contains(&Verb::Invariants) {
        rep.put("sequence_n3", &rows[0]);
        let lim = genpair::slope_limit(p);
        let c = genpair::slope_error_constant(p);
        rep.put("slope_limit", [*lim.numer(), *lim.denom()]);
        rep.put("slope_error_constant", [*c.numer(), *c.denom()]);
        for r in &rows {
            let gap = Rational::new(r.k2_x, r.chi_x()) - lim;
            let gap = if gap < Rational::from_integer(0) {
                -gap
            } else {
                gap
            };
            if gap * r.n > c {
                rep.violations
                    .push(format!("n = {}: slope is {gap} away from its limit", r.n));
            }
        }
        if let Some(e) = &x.sequence {
            for want in &e.value {
                let got = genpair::sequence(p, want.n)?;
                let got_t = (
                    got.pg,
                    got.q_x,
                    got.k2_x,
                    got.k2_sigma,
                    got.degree,
                    got.case,
                );
                let want_t = (
                    want.pg,
                    want.q_x,
                    want.k2_x,
                    want.k2_sigma,
                    want.degree,
                    want.case,
                );
                rep.checks.push(Check {
                    key: format!("sequence[n={}]", want.n),
                    expected: format!("{want_t:?}"),
                    computed: format!("{got_t:?}"),
                    ok: got_t == want_t,
                    origin: e.origin,
                });
            }
        }
        if let Some(e) = &x.identities {
            for id in &e.value {
                let bad = rows.iter().find(|r| !id.holds(r));
                rep.checks.push(Check {
                    key: format!("identity {id}"),
                    expected: format!(
                        "holds for n in {}..={}",
                        SEQUENCE_RANGE.start(),
                        SEQUENCE_RANGE.end()
                    ),
                    computed: bad.map_or("holds".into(), |r| format!("fails at n = {}", r.n)),
                    ok: bad.is_none(),
                    origin: e.origin,
                });
            }
        }
        rep.compare("slope_limit", &x.slope_limit, lim.to_string(), |[n, d]| {
            let want = Rational::new(*n, *d);
            Ok((want == lim, want.to_string()))
        })?;
    }

    if verbs.contains(&Verb::Bounds) {
        for r in &rows {
            let before = rep.checks.len();
            bounds_checks(&r.record(), &x.verdicts, rep, &format!("[n={}]", r.n))?;
            // keep only failing per-n verdict checks, plus one summary per rule
            let (keep, drop): (Vec<_>, Vec<_>) = rep.checks.drain(before..).partition(|c| !c.ok);
            rep.checks.extend(keep);
            if r.n == *SEQUENCE_RANGE.end() {
                if let Some(e) = &x.verdicts {
                    for want in &e.value {
                        let failed = rep
                            .checks
                            .iter()
                            .any(|c| !c.ok && c.key.starts_with(&want.rule));
                        if !failed {
                            rep.checks.push(Check {
                                key: format!("{} for all n", want.rule),
                                expected: format!("{:?}", want.status).to_lowercase(),
                                computed: drop
                                    .iter()
                                    .find(|c| c.key.starts_with(&want.rule))
                                    .map_or("as expected".into(), |c| c.computed.clone()),
                                ok: true,
                                origin: e.origin,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn run_record(
    r: &SurfaceRecord,
    x: &Expect,
    verbs: &BTreeSet<Verb>,
    rep: &mut RunReport,
) -> Result<()> {
    if verbs.contains(&Verb::Verify) {
        rep.violations.extend(r.problems());
    }
    if verbs.contains(&Verb::Bounds) {
        bounds_checks(r, &x.verdicts, rep, "")?;
        let m = bounds::max_degree(r.case, r.pg, r.q_x, r.q_sigma);
        rep.put("max_degree", m);
        rep.compare("max_degree", &x.max_degree, format!("{m:?}"), |want| {
            Ok((m == Some(*want), want.to_string()))
        })?;
    }
    rep.put("record", r);
    Ok(())
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.exit {
            0 => "ok",
            1 => "MISMATCH",
            3 => "UNRESOLVED",
            _ => "ERROR",
        };
        write!(f, "{} [{status}]", self.id)?;
        if !self.params.is_empty() {
            let p: Vec<String> = self
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            write!(f, " ({})", p.join(", "))?;
        }
        writeln!(f)?;
        if let Some(e) = &self.error {
            writeln!(f, "  error: {e}")?;
        }
        for (k, v) in &self.computed {
            writeln!(f, "  {k:<22} {v}")?;
        }
        for c in &self.checks {
            let mark = if c.ok { "ok  " } else { "FAIL" };
            let origin = match c.origin {
                Origin::Published => "published",
                Origin::Derived => "derived",
            };
            writeln!(
                f,
                "  {mark} {:<26} expected {} computed {} [{origin}]",
                c.key, c.expected, c.computed
            )?;
        }
        for v in &self.verdicts {
            writeln!(f, "  {v}")?;
        }
        for t in &self.trace {
            writeln!(f, "  trace: {t}")?;
        }
        for w in &self.warnings {
            writeln!(f, "  warning: {w}")?;
        }
        for v in &self.violations {
            writeln!(f, "  violation: {v}")?;
        }
        Ok(())
    }
}
