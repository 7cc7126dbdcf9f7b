//! Suite manifests: instances with pinned expected verdicts, and the extension-pair report.

use serde::Deserialize;
use serde_json::{json, Value};

use semistar_core::extensions::pair_check;
use semistar_core::pmd::{pmd_decide, verify_theorem};
use semistar_core::sample::RunConfig;
use semistar_core::spec::{self, DomainSpec, ExtensionDoc, ExtensionSpec, InstanceDoc, OpSpec};
use semistar_core::Error;

use crate::{from_check, from_status, render, Outcome};

const BUNDLED_EXAMPLES: &str = include_str!("../suites/paper-examples.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
enum Expect {
    #[serde(rename = "YES")]
    Yes,
    #[serde(rename = "NO")]
    No,
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "UNKNOWN")]
    Unknown,
}

impl Expect {
    fn outcome(self) -> Outcome {
        match self {
            Expect::Yes | Expect::Pass => Outcome::Pass,
            Expect::No | Expect::Fail => Outcome::Fail,
            Expect::Unknown => Outcome::Unknown,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case", deny_unknown_fields)]
enum Entry {
    Pmd { name: String, domain: DomainSpec, op: OpSpec, expect: Expect },
    Verify { name: String, theorem: String, instance: InstanceDoc, expect: Expect },
    Pair { name: String, extension: ExtensionSpec, config: Option<RunConfig>, expect: Expect },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    suite: String,
    entries: Vec<Entry>,
}

fn label(o: Outcome, verdict_style: bool) -> &'static str {
    match (o, verdict_style) {
        (Outcome::Pass, true) => "YES",
        (Outcome::Fail, true) => "NO",
        (Outcome::Pass, false) => "PASS",
        (Outcome::Fail, false) => "FAIL",
        (Outcome::Unknown, _) => "UNKNOWN",
    }
}

pub fn run_pair(doc: &ExtensionDoc) -> Result<(Value, Outcome), Error> {
    let pair = spec::build_pair(doc)?;
    let cfg = doc.config.unwrap_or_default();
    let r = pair_check(&pair, 100, cfg.seed)?;
    let outcome = match r.pass() {
        Some(true) => Outcome::Pass,
        Some(false) => Outcome::Fail,
        None => Outcome::Unknown,
    };
    let failures: Vec<Value> = r
        .krull_failures
        .iter()
        .map(|c| json!({ "e": c.e.text(), "lhs": c.lhs.text(), "rhs": c.rhs.text() }))
        .collect();
    let v = json!({
        "lower": pair.lower().describe(),
        "upper": pair.upper().describe(),
        "pvmd_lower": r.ascent_descent.lower.status(),
        "pvmd_upper": r.ascent_descent.upper.status(),
        "ascent_descent": r.ascent_descent.pass,
        "krull_samples": r.krull_samples,
        "krull_failures": failures,
        "overline_pmd": r.overline.as_ref().map(|v| v.status()),
        "seed": cfg.seed,
        "verdict": label(outcome, false),
    });
    Ok((v, outcome))
}

fn run_entry(e: &Entry) -> Result<(Outcome, bool, Value), Error> {
    match e {
        Entry::Pmd { domain, op, .. } => {
            let d = spec::build_domain(domain, RunConfig::default().prime_bound, "/domain")?;
            let op = spec::build_op(&d, op, "/op")?;
            let v = pmd_decide(&op)?;
            Ok((from_status(v.status()), true, render::pmd(&op, &v)))
        }
        Entry::Verify { theorem, instance, .. } => {
            let inst = spec::build_instance(instance)?;
            let r = verify_theorem(theorem, &inst)?;
            Ok((from_check(r.overall()), false, render::theorem(&r)))
        }
        Entry::Pair { extension, config, .. } => {
            let doc = ExtensionDoc { extension: extension.clone(), config: *config };
            let (v, o) = run_pair(&doc)?;
            Ok((o, false, v))
        }
    }
}

/// Exit outcome: Pass if every entry met its expectation, Fail if some entry contradicted it,
/// Unknown if the only misses are inconclusive entries.
pub fn run_suite(name: &str) -> Result<(Value, Outcome), Error> {
    let text = if name == "paper-examples" {
        BUNDLED_EXAMPLES.to_string()
    } else {
        std::fs::read_to_string(name)
            .map_err(|e| Error::Schema { path: String::new(), msg: format!("unknown suite '{name}': {e}") })?
    };
    let manifest: Manifest = spec::parse(&text)?;
    let mut rows = Vec::new();
    let (mut ok_n, mut fail_n, mut unknown_n) = (0, 0, 0);
    for e in &manifest.entries {
        let (name, command, expect) = match e {
            Entry::Pmd { name, expect, .. } => (name, "pmd", *expect),
            Entry::Verify { name, expect, .. } => (name, "verify", *expect),
            Entry::Pair { name, expect, .. } => (name, "pair", *expect),
        };
        let verdict_style = matches!(expect, Expect::Yes | Expect::No);
        let (observed, detail) = match run_entry(e) {
            Ok((o, _, v)) => (Some(o), v),
            Err(err) => (None, json!({ "error": err.to_string() })),
        };
        let ok = observed == Some(expect.outcome());
        match (ok, observed) {
            (true, _) => ok_n += 1,
            (false, Some(Outcome::Unknown)) => unknown_n += 1,
            (false, _) => fail_n += 1,
        }
        rows.push(json!({
            "name": name,
            "command": command,
            "expected": label(expect.outcome(), verdict_style),
            "observed": observed.map_or("ERROR", |o| label(o, verdict_style)),
            "ok": ok,
            "detail": detail,
        }));
    }
    let outcome = if fail_n > 0 {
        Outcome::Fail
    } else if unknown_n > 0 {
        Outcome::Unknown
    } else {
        Outcome::Pass
    };
    let v = json!({
        "suite": manifest.suite,
        "entries": rows,
        "summary": { "as_expected": ok_n, "contradicted": fail_n, "inconclusive": unknown_n },
    });
    Ok((v, outcome))
}
