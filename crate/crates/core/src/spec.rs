//! JSON documents describing domains, operations, theorem instances and extension pairs, and
//! their resolution against the domain registry. Schema errors carry a JSON pointer.

use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::ambient::{Ambient, Point};
use crate::domain::{Domain, LocalizeAt, Overring};
use crate::error::{Error, Result};
use crate::extensions::{ExtensionPair, Relation};
use crate::field::FieldTag;
use crate::module::Scope;
use crate::pmd::Instance;
use crate::sample::RunConfig;
use crate::semistar::SemistarOp;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimeRef {
    pub p: i64,
    pub index: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKindSpec {
    Integers,
    LocalizedIntegers,
    QuadraticOrder,
    LocalizedOrder,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub kind: DomainKindSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conductor: Option<i64>,
    #[serde(default, rename = "S", skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<PrimeRef>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpKindSpec {
    Identity,
    V,
    T,
    B,
    Spectral,
    OverringFamily,
    ValuationFamily,
    Induced,
    Restricted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpSpec {
    pub kind: OpKindSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primes: Option<Vec<PrimeRef>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overrings: Option<Vec<DomainSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overring: Option<DomainSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<Box<OpSpec>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainDoc {
    pub domain: DomainSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpDoc {
    pub op: OpSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub domain: DomainSpec,
    pub op: OpSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overring: Option<DomainSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<RunConfig>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationSpec {
    IntegralClosure,
    Contains,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSpec {
    pub d: i64,
    #[serde(rename = "D")]
    pub lower: DomainSpec,
    #[serde(rename = "T")]
    pub upper: DomainSpec,
    pub relation: RelationSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionDoc {
    pub extension: ExtensionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<RunConfig>,
}

/// Parses a document; structural errors report the JSON pointer of the offending value.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = pointer(e.path());
        Error::Schema { path, msg: e.into_inner().to_string() }
    })
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

/// Canonical text of any document: compact JSON with sorted keys.
pub fn print<T: Serialize>(doc: &T) -> String {
    let v = serde_json::to_value(doc).expect("spec documents serialize");
    v.to_string()
}

fn schema(path: &str, msg: impl Into<String>) -> Error {
    Error::Schema { path: path.to_string(), msg: msg.into() }
}

fn at_path(path: &str, e: Error) -> Error {
    match e {
        Error::BadSpec(m) | Error::NotRepresentable(m) => schema(path, m),
        Error::PrimeTooLarge { p, bound } => schema(path, format!("prime {p} exceeds the bound {bound}")),
        other => other,
    }
}

fn wide(s: &[i64]) -> Vec<i128> {
    s.iter().map(|&p| i128::from(p)).collect()
}

fn forbid<T>(v: &Option<T>, path: &str, key: &str, kind: &str) -> Result<()> {
    match v {
        Some(_) => Err(schema(&format!("{path}/{key}"), format!("not allowed for kind {kind}"))),
        None => Ok(()),
    }
}

fn require<'a, T>(v: &'a Option<T>, path: &str, key: &str) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| schema(&format!("{path}/{key}"), "missing"))
}

/// Builds a domain in a fresh ambient, or inside `amb` when one is given (overrings).
fn build_in(spec: &DomainSpec, amb: Option<&Arc<Ambient>>, bound: i64, path: &str) -> Result<Domain> {
    let kind_name = format!("{:?}", spec.kind);
    let quadratic = |amb: Option<&Arc<Ambient>>| -> Result<(Arc<Ambient>, i128)> {
        let d = *require(&spec.d, path, "d")?;
        let f = i128::from(spec.conductor.unwrap_or(1));
        if f < 1 {
            return Err(schema(&format!("{path}/conductor"), format!("conductor {f} < 1")));
        }
        match amb {
            None => Ok((Ambient::quadratic(d, f).map_err(|e| at_path(&format!("{path}/d"), e))?, f)),
            Some(a) => {
                if a.tag != FieldTag::quadratic(d).map_err(|e| at_path(&format!("{path}/d"), e))? {
                    return Err(schema(&format!("{path}/d"), "overring lives over a different field"));
                }
                if a.f0 % f != 0 {
                    return Err(schema(&format!("{path}/conductor"), format!("conductor {f} does not divide {}", a.f0)));
                }
                Ok((a.clone(), f))
            }
        }
    };
    let rational = |amb: Option<&Arc<Ambient>>| -> Result<Arc<Ambient>> {
        match amb {
            Some(a) if a.tag != FieldTag::Rational => Err(schema(&format!("{path}/kind"), "overring lives over a different field")),
            _ => Ok(Ambient::rational()),
        }
    };
    let dom = match spec.kind {
        DomainKindSpec::Integers => {
            forbid(&spec.d, path, "d", &kind_name)?;
            forbid(&spec.conductor, path, "conductor", &kind_name)?;
            forbid(&spec.s, path, "S", &kind_name)?;
            forbid(&spec.at, path, "at", &kind_name)?;
            Domain::in_ambient(&rational(amb)?, 1, Scope::All)
        }
        DomainKindSpec::LocalizedIntegers => {
            forbid(&spec.d, path, "d", &kind_name)?;
            forbid(&spec.conductor, path, "conductor", &kind_name)?;
            forbid(&spec.at, path, "at", &kind_name)?;
            let s = require(&spec.s, path, "S")?;
            rational(amb)?;
            Domain::localized_integers(&wide(s)).map_err(|e| at_path(&format!("{path}/S"), e))
        }
        DomainKindSpec::QuadraticOrder => {
            forbid(&spec.s, path, "S", &kind_name)?;
            forbid(&spec.at, path, "at", &kind_name)?;
            let (a, f) = quadratic(amb)?;
            Domain::in_ambient(&a, f, Scope::All)
        }
        DomainKindSpec::LocalizedOrder => {
            let (a, f) = quadratic(amb)?;
            let (at, key) = match (&spec.at, &spec.s) {
                (Some(r), None) => (LocalizeAt::Prime { p: r.p.into(), index: r.index }, "at"),
                (None, Some(s)) => (LocalizeAt::Primes(wide(s)), "S"),
                _ => return Err(schema(path, "localized_order needs exactly one of 'at' and 'S'")),
            };
            Domain::localized_in(&a, f, &at).map_err(|e| at_path(&format!("{path}/{key}"), e))
        }
    }
    .map_err(|e| at_path(path, e))?;
    Ok(dom.with_prime_bound(bound.into()))
}

pub fn build_domain(spec: &DomainSpec, bound: i64, path: &str) -> Result<Domain> {
    build_in(spec, None, bound, path)
}

/// An overring of `base`, built inside base's ambient.
pub fn build_overring(base: &Domain, spec: &DomainSpec, path: &str) -> Result<Overring> {
    let t = build_in(spec, Some(base.amb()), i64::try_from(base.prime_bound()).unwrap_or(i64::MAX), path)?;
    Overring::new(base, &t).map_err(|e| match e {
        Error::BadSpec(_) | Error::DomainMismatch | Error::NotRepresentable(_) => {
            schema(path, format!("{t} is not an overring of {base}"))
        }
        other => other,
    })
}

pub fn build_op(d: &Domain, spec: &OpSpec, path: &str) -> Result<SemistarOp> {
    let kind_name = format!("{:?}", spec.kind);
    let none_but = |allowed: &[&str]| -> Result<()> {
        let present = [
            ("primes", spec.primes.is_some()),
            ("overrings", spec.overrings.is_some()),
            ("overring", spec.overring.is_some()),
            ("parent", spec.parent.is_some()),
        ];
        for (k, set) in present {
            if set && !allowed.contains(&k) {
                return Err(schema(&format!("{path}/{k}"), format!("not allowed for kind {kind_name}")));
            }
        }
        Ok(())
    };
    match spec.kind {
        OpKindSpec::Identity => {
            none_but(&[])?;
            SemistarOp::identity(d)
        }
        OpKindSpec::V => {
            none_but(&[])?;
            SemistarOp::v(d)
        }
        OpKindSpec::T => {
            none_but(&[])?;
            SemistarOp::t(d)
        }
        OpKindSpec::B => {
            none_but(&[])?;
            SemistarOp::b(d)
        }
        OpKindSpec::Spectral => {
            none_but(&["primes"])?;
            let refs = require(&spec.primes, path, "primes")?;
            let mut primes = Vec::new();
            for (i, r) in refs.iter().enumerate() {
                let pp = format!("{path}/primes/{i}");
                let above = d.primes_above(r.p.into()).map_err(|e| at_path(&format!("{pp}/p"), e))?;
                let q = above.get(r.index).ok_or_else(|| {
                    schema(&format!("{pp}/index"), format!("{} has {} primes above {}", d, above.len(), r.p))
                })?;
                primes.push(q.clone());
            }
            SemistarOp::spectral(d, &primes)
        }
        OpKindSpec::ValuationFamily => {
            none_but(&["primes"])?;
            let refs = require(&spec.primes, path, "primes")?;
            let mut family = Vec::new();
            for (i, r) in refs.iter().enumerate() {
                let pp = format!("{path}/primes/{i}");
                if !crate::field::is_prime(r.p.into()) {
                    return Err(schema(&format!("{pp}/p"), format!("{} is not prime", r.p)));
                }
                let pts = d.amb().points_above(r.p.into());
                if r.index >= pts.len() {
                    return Err(schema(&format!("{pp}/index"), format!("{} valuations lie above {}", pts.len(), r.p)));
                }
                let pt = Point { p: r.p.into(), idx: r.index };
                family.push(d.dvr_at(pt).map_err(|e| at_path(&pp, e))?);
            }
            SemistarOp::valuation_family(d, &family)
        }
        OpKindSpec::OverringFamily => {
            none_but(&["overrings"])?;
            let specs = require(&spec.overrings, path, "overrings")?;
            let mut family = Vec::new();
            for (i, s) in specs.iter().enumerate() {
                family.push(build_overring(d, s, &format!("{path}/overrings/{i}"))?);
            }
            SemistarOp::overring_family(d, &family)
        }
        OpKindSpec::Induced => {
            none_but(&["overring", "parent"])?;
            let t = build_overring(d, require(&spec.overring, path, "overring")?, &format!("{path}/overring"))?;
            let parent = build_op(d, require(&spec.parent, path, "parent")?, &format!("{path}/parent"))?;
            SemistarOp::induced(&parent, &t)
        }
        OpKindSpec::Restricted => {
            none_but(&["overring", "parent"])?;
            let t = build_overring(d, require(&spec.overring, path, "overring")?, &format!("{path}/overring"))?;
            let inner = build_op(&t.target, require(&spec.parent, path, "parent")?, &format!("{path}/parent"))?;
            SemistarOp::restricted(&inner, &t)
        }
    }
}

pub fn build_instance(doc: &InstanceDoc) -> Result<Instance> {
    let config = doc.config.unwrap_or_default();
    let d = build_domain(&doc.domain, config.prime_bound, "/domain")?;
    let op = build_op(&d, &doc.op, "/op")?;
    let overring = match &doc.overring {
        Some(s) => Some(build_overring(&d, s, "/overring")?),
        None => None,
    };
    Ok(Instance { op, overring, config })
}

pub fn build_pair(doc: &ExtensionDoc) -> Result<ExtensionPair> {
    let bound = doc.config.unwrap_or_default().prime_bound;
    let x = &doc.extension;
    let lower = build_domain(&x.lower, bound, "/extension/D")?;
    if lower.tag() != FieldTag::Rational {
        return Err(schema("/extension/D/kind", "D must live over the rationals"));
    }
    let upper = build_domain(&x.upper, bound, "/extension/T")?;
    if upper.tag().d() != Some(x.d) {
        return Err(schema("/extension/T/d", format!("T must live over Q(sqrt({}))", x.d)));
    }
    let relation = match x.relation {
        RelationSpec::IntegralClosure => Relation::IntegralClosure,
        RelationSpec::Contains => Relation::Contains,
    };
    ExtensionPair::new(&lower, &upper, relation).map_err(|e| at_path("/extension", e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmd::{pmd_decide, PmdStatus};
    use crate::semistar::OpKind;

    const ZI3: &str = r#"{"domain":{"kind":"quadratic_order","d":-1,"conductor":3}}"#;

    fn zi3() -> Domain {
        let doc: DomainDoc = parse(ZI3).unwrap();
        build_domain(&doc.domain, 97, "/domain").unwrap()
    }

    #[test]
    fn domain_round_trip() {
        let doc: DomainDoc = parse(ZI3).unwrap();
        let once = print(&doc);
        let again: DomainDoc = parse(&once).unwrap();
        assert_eq!(print(&again), once);
        assert_eq!(once, r#"{"domain":{"conductor":3,"d":-1,"kind":"quadratic_order"}}"#);
    }

    #[test]
    fn schema_errors_carry_pointers() {
        let e = parse::<DomainDoc>(r#"{"domain":{"kind":"integers","bogus":1}}"#).unwrap_err();
        assert!(matches!(e, Error::Schema { ref path, .. } if path == "/domain/bogus"), "{e:?}");
        let e = parse::<OpDoc>(r#"{"op":{"kind":"spectral","primes":[{"p":"x","index":0}]}}"#).unwrap_err();
        assert!(matches!(e, Error::Schema { ref path, .. } if path == "/op/primes/0/p"), "{e:?}");
        let op: OpDoc = parse(r#"{"op":{"kind":"spectral","primes":[{"p":5,"index":2}]}}"#).unwrap();
        let e = build_op(&zi3(), &op.op, "/op").unwrap_err();
        assert!(matches!(e, Error::Schema { ref path, .. } if path == "/op/primes/0/index"), "{e:?}");
        let bad: DomainDoc = parse(r#"{"domain":{"kind":"quadratic_order","d":4}}"#).unwrap();
        assert!(matches!(build_domain(&bad.domain, 97, "/domain"), Err(Error::Schema { .. })));
    }

    #[test]
    fn nested_restricted_spec() {
        let text = r#"{
            "domain": {"kind":"localized_order","d":-1,"conductor":3,"at":{"p":3,"index":0}},
            "op": {"kind":"restricted",
                   "overring": {"kind":"localized_order","d":-1,"conductor":1,"at":{"p":3,"index":0}},
                   "parent": {"kind":"identity"}}
        }"#;
        let doc: InstanceDoc = parse(text).unwrap();
        let inst = build_instance(&doc).unwrap();
        assert!(matches!(inst.op.kind(), OpKind::Restricted { .. }));
        assert_eq!(pmd_decide(&inst.op).unwrap().status(), PmdStatus::No);
        let printed = print(&doc);
        assert_eq!(print(&parse::<InstanceDoc>(&printed).unwrap()), printed);
    }

    #[test]
    fn overrings_share_the_base_ambient() {
        let d = zi3();
        let t = build_overring(&d, &DomainSpec { kind: DomainKindSpec::QuadraticOrder, d: Some(-1), conductor: Some(1), s: None, at: None }, "/o").unwrap();
        assert_eq!(t.target.amb(), d.amb());
        assert!(t.flat.is_no());
    }
}
