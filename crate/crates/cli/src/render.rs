//! JSON renderings of library reports.

use serde_json::{json, Value};

use semistar_core::domain::PrimeIdeal;
use semistar_core::pmd::{PmdVerdict, TheoremReport};
use semistar_core::semistar::{QuasiMaxStatus, SemistarOp};

fn prime(q: &PrimeIdeal) -> Value {
    json!({ "label": q.label(), "ideal": q.under.text(), "contains_conductor": q.contains_conductor })
}

pub fn quasi_max(s: QuasiMaxStatus) -> &'static str {
    match s {
        QuasiMaxStatus::Enumerated => "ENUMERATED",
        QuasiMaxStatus::WitnessOnly => "WITNESS_ONLY",
        QuasiMaxStatus::Unsupported => "UNSUPPORTED",
    }
}

pub fn pmd(op: &SemistarOp, v: &PmdVerdict) -> Value {
    let evidence: Vec<Value> = v
        .evidence
        .iter()
        .map(|(q, val)| {
            let mut p = prime(q);
            p["valuation"] = json!(val);
            p
        })
        .collect();
    json!({
        "domain": op.domain().describe(),
        "op": op.describe(),
        "status": v.status(),
        "certificate": v.certificate,
        "evidence": evidence,
        "witness": v.witness.as_ref().map(prime),
        "quasi_max": v.quasi_max.map(quasi_max),
    })
}

pub fn theorem(r: &TheoremReport) -> Value {
    let mut v = serde_json::to_value(r).expect("reports serialize");
    v["overall"] = json!(r.overall());
    v
}
