//! Semistar operations on the registered domains, their closures, and the decidable or
//! falsifiable predicates built on them.
//!
//! Every closure computed here is the finite-type one: a module outside the f.g. class is
//! closed as the localization of the closure of its f.g. hull.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::ambient::Point;
use crate::domain::{Domain, Dvr, Overring, PrimeIdeal};
use crate::error::{Error, Result};
use crate::extensions::ExtensionPair;
use crate::module::{Module, Scope};
use crate::tribool::TriBool;

#[derive(Clone, Debug)]
pub enum OpKind {
    Identity,
    /// v
    Divisorial,
    /// t = v_f
    FiniteDivisorial,
    Spectral(Vec<PrimeIdeal>),
    OverringFamily(Vec<Overring>),
    ValuationFamily(Vec<Dvr>),
    /// b: E ↦ E·D′
    IntegralB { closure_ring: Module },
    /// parent op on D, applied to modules over the overring T
    Induced { parent: SemistarOp, overring: Overring },
    /// op on the overring T, pulled back to D by E ↦ (ET)^⋆
    Restricted { inner: SemistarOp, overring: Overring },
    /// op on T over a field extension, pulled back by E ↦ (ET)^⋆ ∩ K
    Underline { inner: SemistarOp, pair: ExtensionPair },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Meta {
    pub finite_type: TriBool,
    pub stable: TriBool,
    pub eab: TriBool,
    pub is_star: TriBool,
}

#[derive(Debug)]
struct OpInner {
    domain: Domain,
    kind: OpKind,
    meta: Meta,
}

#[derive(Clone, Debug)]
pub struct SemistarOp(Arc<OpInner>);

impl SemistarOp {
    pub fn identity(d: &Domain) -> Result<SemistarOp> {
        SemistarOp::build(d, OpKind::Identity)
    }

    pub fn v(d: &Domain) -> Result<SemistarOp> {
        SemistarOp::build(d, OpKind::Divisorial)
    }

    pub fn t(d: &Domain) -> Result<SemistarOp> {
        SemistarOp::build(d, OpKind::FiniteDivisorial)
    }

    pub fn b(d: &Domain) -> Result<SemistarOp> {
        let closure_ring = d.integral_closure()?.ring().clone();
        SemistarOp::build(d, OpKind::IntegralB { closure_ring })
    }

    pub fn spectral(d: &Domain, primes: &[PrimeIdeal]) -> Result<SemistarOp> {
        if primes.is_empty() {
            return Err(Error::EmptyFamily);
        }
        for q in primes {
            if d.prime(q.p, q.index)? != *q {
                return Err(Error::DomainMismatch);
            }
        }
        let mut ps = primes.to_vec();
        ps.sort_by_key(|q| (q.p, q.index));
        ps.dedup();
        SemistarOp::build(d, OpKind::Spectral(ps))
    }

    pub fn overring_family(d: &Domain, family: &[Overring]) -> Result<SemistarOp> {
        if family.is_empty() {
            return Err(Error::EmptyFamily);
        }
        if family.iter().any(|t| t.base != *d) {
            return Err(Error::DomainMismatch);
        }
        SemistarOp::build(d, OpKind::OverringFamily(family.to_vec()))
    }

    pub fn valuation_family(d: &Domain, family: &[Dvr]) -> Result<SemistarOp> {
        if family.is_empty() {
            return Err(Error::EmptyFamily);
        }
        if family.iter().any(|w| w.ring.amb() != d.amb() || !w.ring.contains(d.ring()).unwrap_or(false)) {
            return Err(Error::DomainMismatch);
        }
        SemistarOp::build(d, OpKind::ValuationFamily(family.to_vec()))
    }

    /// ⋆̇ᵀ: the parent's closure on modules over the overring T.
    pub fn induced(parent: &SemistarOp, overring: &Overring) -> Result<SemistarOp> {
        if overring.base != *parent.domain() {
            return Err(Error::DomainMismatch);
        }
        SemistarOp::build(
            &overring.target,
            OpKind::Induced { parent: parent.clone(), overring: overring.clone() },
        )
    }

    /// ⋆̣_D: E ↦ (ET)^⋆ for an operation on the overring T.
    pub fn restricted(inner: &SemistarOp, overring: &Overring) -> Result<SemistarOp> {
        if overring.target != *inner.domain() {
            return Err(Error::DomainMismatch);
        }
        SemistarOp::build(
            &overring.base,
            OpKind::Restricted { inner: inner.clone(), overring: overring.clone() },
        )
    }

    /// E ↦ (ET)^⋆ ∩ K for an operation on the upper domain of an extension pair.
    pub fn underline(inner: &SemistarOp, pair: &ExtensionPair) -> Result<SemistarOp> {
        if pair.upper() != inner.domain() {
            return Err(Error::DomainMismatch);
        }
        SemistarOp::build(pair.lower(), OpKind::Underline { inner: inner.clone(), pair: pair.clone() })
    }

    fn build(d: &Domain, kind: OpKind) -> Result<SemistarOp> {
        let prufer = d.certs().is_prufer.is_yes();
        let (finite_type, stable, eab) = match &kind {
            OpKind::Identity => (TriBool::Yes, TriBool::Yes, TriBool::Unknown),
            OpKind::Divisorial => (TriBool::Unknown, TriBool::Unknown, TriBool::Unknown),
            OpKind::FiniteDivisorial => (TriBool::Yes, TriBool::Unknown, TriBool::Unknown),
            OpKind::Spectral(_) => (TriBool::Yes, TriBool::Yes, TriBool::Unknown),
            OpKind::OverringFamily(ts) => {
                let flat = ts.iter().all(|t| t.flat.is_yes());
                (TriBool::Yes, if flat { TriBool::Yes } else { TriBool::Unknown }, TriBool::Unknown)
            }
            OpKind::ValuationFamily(_) | OpKind::IntegralB { .. } => (TriBool::Yes, TriBool::Unknown, TriBool::Yes),
            OpKind::Induced { parent, .. } => (parent.meta().finite_type, parent.meta().stable, TriBool::Unknown),
            OpKind::Restricted { inner, overring } => {
                let stable = if inner.meta().stable.is_yes() && overring.flat.is_yes() {
                    TriBool::Yes
                } else {
                    TriBool::Unknown
                };
                (if inner.meta().finite_type.is_yes() { TriBool::Yes } else { TriBool::Unknown }, stable, TriBool::Unknown)
            }
            OpKind::Underline { inner, .. } => (inner.meta().finite_type, inner.meta().stable, TriBool::Unknown),
        };
        // every semistar operation on a Prüfer domain is a.b.
        let eab = if prufer { TriBool::Yes } else { eab };
        let mut op = SemistarOp(Arc::new(OpInner {
            domain: d.clone(),
            kind,
            meta: Meta { finite_type, stable, eab, is_star: TriBool::Unknown },
        }));
        let top = op.closure(d.ring())?;
        if top.is_whole() {
            return Err(Error::TrivialOperation);
        }
        let is_star = TriBool::from_bool(top == *d.ring());
        Arc::get_mut(&mut op.0).expect("fresh operation").meta.is_star = is_star;
        Ok(op)
    }

    pub fn domain(&self) -> &Domain {
        &self.0.domain
    }

    pub fn kind(&self) -> &OpKind {
        &self.0.kind
    }

    pub fn meta(&self) -> Meta {
        self.0.meta
    }

    pub fn describe(&self) -> String {
        match &self.0.kind {
            OpKind::Identity => "d".into(),
            OpKind::Divisorial => "v".into(),
            OpKind::FiniteDivisorial => "t".into(),
            OpKind::IntegralB { .. } => "b".into(),
            OpKind::Spectral(ps) => {
                let l: Vec<String> = ps.iter().map(|q| q.label()).collect();
                format!("spectral[{}]", l.join(","))
            }
            OpKind::OverringFamily(ts) => {
                let l: Vec<String> = ts.iter().map(|t| t.target.describe()).collect();
                format!("overring_family[{}]", l.join(","))
            }
            OpKind::ValuationFamily(ws) => {
                let l: Vec<String> = ws.iter().map(|w| w.label()).collect();
                format!("valuation_family[{}]", l.join(","))
            }
            OpKind::Induced { parent, overring } => {
                format!("induced({}; {})", parent.describe(), overring.target.describe())
            }
            OpKind::Restricted { inner, overring } => {
                format!("restricted({}; {})", inner.describe(), overring.target.describe())
            }
            OpKind::Underline { inner, pair } => {
                format!("underline({}; {})", inner.describe(), pair.upper().describe())
            }
        }
    }

    /// E^⋆ (finite-type semantics).
    pub fn closure(&self, e: &Module) -> Result<Module> {
        let d = &self.0.domain;
        if e.amb() != d.amb() {
            return Err(Error::DomainMismatch);
        }
        let Some(se) = e.scope() else {
            return Ok(e.clone());
        };
        if se == d.scope() {
            self.closure_fg(e)
        } else if se.is_subset(d.scope()) {
            Ok(self.closure_fg(&d.saturate_scope(e))?.localize(se))
        } else {
            Err(Error::DomainMismatch)
        }
    }

    fn closure_fg(&self, e: &Module) -> Result<Module> {
        let d = &self.0.domain;
        match &self.0.kind {
            OpKind::Identity => Ok(e.clone()),
            OpKind::Divisorial | OpKind::FiniteDivisorial => {
                let inv = d.ring().colon(e)?.ok_or(Error::ZeroModule)?;
                Ok(d.ring().colon(&inv)?.unwrap_or_else(|| Module::whole(d.amb())))
            }
            OpKind::Spectral(ps) => Ok(e.localize(&Scope::points(ps.iter().map(|q| q.point)))),
            OpKind::OverringFamily(ts) => {
                intersect_all(ts.iter().map(|t| e.product(t.target.ring())), d)
            }
            OpKind::ValuationFamily(ws) => intersect_all(ws.iter().map(|w| e.product(&w.ring)), d),
            OpKind::IntegralB { closure_ring } => e.product(closure_ring),
            OpKind::Induced { parent, .. } => parent.closure(e),
            OpKind::Restricted { inner, overring } => inner.closure(&e.product(overring.target.ring())?),
            OpKind::Underline { inner, pair } => {
                let up = inner.closure(&pair.extend(e)?)?;
                pair.contract(&up)
            }
        }
    }

    pub fn closure_of_domain(&self) -> Result<Module> {
        self.closure(self.0.domain.ring())
    }
}

impl fmt::Display for SemistarOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {}", self.describe(), self.0.domain)
    }
}

fn intersect_all<I: Iterator<Item = Result<Module>>>(mut it: I, d: &Domain) -> Result<Module> {
    let mut acc = match it.next() {
        Some(m) => m?,
        None => return Ok(Module::whole(d.amb())),
    };
    for m in it {
        acc = acc.intersect(&m?)?;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------------------------
// comparison, stability, cancellation

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Le,
    Ge,
    Eq,
    Incomparable,
}

#[derive(Clone, Debug)]
pub struct CompareReport {
    pub verdict: Comparison,
    /// E with E^⋆₁ ⊄ E^⋆₂
    pub le_violation: Option<Module>,
    /// E with E^⋆₂ ⊄ E^⋆₁
    pub ge_violation: Option<Module>,
    pub samples: usize,
}

/// ⋆₁ ≤ ⋆₂ tested pointwise on the pool (sampled semantics).
pub fn compare_ops(op1: &SemistarOp, op2: &SemistarOp, pool: &[Module]) -> Result<CompareReport> {
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    if op1.domain() != op2.domain() {
        return Err(Error::DomainMismatch);
    }
    let (mut le, mut ge) = (None, None);
    for e in pool {
        let (c1, c2) = (op1.closure(e)?, op2.closure(e)?);
        if le.is_none() && !c2.contains(&c1)? {
            le = Some(e.clone());
        }
        if ge.is_none() && !c1.contains(&c2)? {
            ge = Some(e.clone());
        }
        if le.is_some() && ge.is_some() {
            break;
        }
    }
    let verdict = match (le.is_none(), ge.is_none()) {
        (true, true) => Comparison::Eq,
        (true, false) => Comparison::Le,
        (false, true) => Comparison::Ge,
        (false, false) => Comparison::Incomparable,
    };
    Ok(CompareReport { verdict, le_violation: le, ge_violation: ge, samples: pool.len() })
}

#[derive(Clone, Debug)]
pub struct StabilityReport {
    pub verdict: TriBool,
    pub witness: Option<(Module, Module)>,
    pub certificate: Option<&'static str>,
    pub samples: usize,
}

/// (E∩F)^⋆ = E^⋆ ∩ F^⋆ over the pool, with certificates where one is known.
pub fn is_stable(op: &SemistarOp, pairs: &[(Module, Module)]) -> Result<StabilityReport> {
    let cert = if matches!(op.kind(), OpKind::Spectral(_)) {
        Some("spectral operations are stable")
    } else if matches!(op.kind(), OpKind::Identity) {
        Some("d is stable")
    } else if op.domain().certs().is_prufer.is_yes() && op.meta().is_star.is_yes() && op.meta().finite_type.is_yes()
    {
        Some("a star operation of finite type on a Prüfer domain is d")
    } else {
        None
    };
    for (e, f) in pairs {
        let lhs = op.closure(&e.intersect(f)?)?;
        let rhs = op.closure(e)?.intersect(&op.closure(f)?)?;
        if lhs != rhs {
            if cert.is_some() {
                return Err(Error::RoutesDisagree(format!("stability certificate broken at {e} / {f}")));
            }
            return Ok(StabilityReport {
                verdict: TriBool::No,
                witness: Some((e.clone(), f.clone())),
                certificate: None,
                samples: pairs.len(),
            });
        }
    }
    let verdict = if cert.is_some() || op.meta().stable.is_yes() { TriBool::Yes } else { TriBool::Unknown };
    Ok(StabilityReport { verdict, witness: None, certificate: cert, samples: pairs.len() })
}

#[derive(Clone, Debug)]
pub enum EabVerdict {
    NoCounterexample { certificate: Option<&'static str>, samples: usize },
    Witness { e: Box<Module>, f: Box<Module>, g: Box<Module> },
}

/// Searches (EF)^⋆ ⊆ (EG)^⋆ with F^⋆ ⊄ G^⋆.
pub fn eab_falsifier(op: &SemistarOp, triples: &[(Module, Module, Module)]) -> Result<EabVerdict> {
    let certificate = match op.kind() {
        OpKind::ValuationFamily(_) | OpKind::IntegralB { .. } => Some("valuation-family operations are a.b."),
        _ if op.domain().certs().is_prufer.is_yes() => Some("every semistar operation on a Prüfer domain is a.b."),
        _ => None,
    };
    if let Some(c) = certificate {
        return Ok(EabVerdict::NoCounterexample { certificate: Some(c), samples: 0 });
    }
    eab_search(op, triples)
}

/// The cancellation search on its own, with no certificate shortcut.
pub fn eab_search(op: &SemistarOp, triples: &[(Module, Module, Module)]) -> Result<EabVerdict> {
    for (e, f, g) in triples {
        let ef = op.closure(&e.product(f)?)?;
        let eg = op.closure(&e.product(g)?)?;
        if eg.contains(&ef)? && !op.closure(g)?.contains(&op.closure(f)?)? {
            return Ok(EabVerdict::Witness { e: Box::new(e.clone()), f: Box::new(f.clone()), g: Box::new(g.clone()) });
        }
    }
    Ok(EabVerdict::NoCounterexample { certificate: None, samples: triples.len() })
}

// ---------------------------------------------------------------------------------------------
// quasi-⋆-maximals and the derived operations

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuasiMaxStatus {
    Enumerated,
    WitnessOnly,
    Unsupported,
}

#[derive(Clone, Debug)]
pub struct QuasiMaxReport {
    pub status: QuasiMaxStatus,
    /// Conductor primes first.
    pub primes: Vec<PrimeIdeal>,
}

/// P^⋆ ∩ D ≠ D, i.e. 1 ∉ P^⋆; for a maximal P this is P^⋆ ∩ D = P.
pub fn is_quasi_star_prime(op: &SemistarOp, pr: &PrimeIdeal) -> Result<bool> {
    Ok(!op.closure(&pr.under)?.contains_elem(&op.domain().amb().one()))
}

pub fn quasi_star_maximals(op: &SemistarOp) -> Result<QuasiMaxReport> {
    let d = op.domain();
    let top = op.closure_of_domain()?;
    let (status, candidates) = match top.scope() {
        // primes outside the scope of D^⋆ have closure D^⋆
        Some(Scope::Points(u)) => (QuasiMaxStatus::Enumerated, d.primes_at(u)?),
        _ => (QuasiMaxStatus::WitnessOnly, d.conductor_primes()?),
    };
    let mut primes = Vec::new();
    for q in candidates {
        if is_quasi_star_prime(op, &q)? {
            primes.push(q);
        }
    }
    primes.sort_by_key(|q| (!q.contains_conductor, q.p, q.index));
    let status = if status == QuasiMaxStatus::WitnessOnly && primes.is_empty() {
        QuasiMaxStatus::Unsupported
    } else {
        status
    };
    Ok(QuasiMaxReport { status, primes })
}

/// ⋆̃ = ⋆_{ℳ(⋆_f)}.
pub fn tilde(op: &SemistarOp) -> Result<SemistarOp> {
    let rep = quasi_star_maximals(op)?;
    if rep.status != QuasiMaxStatus::Enumerated || rep.primes.is_empty() {
        return Err(Error::TildeUnsupported);
    }
    SemistarOp::spectral(op.domain(), &rep.primes)
}

/// The ⋆-valuation overrings of D, when they form a finite or otherwise explicit family.
#[derive(Clone, Debug)]
pub enum ValuationFamily {
    Finite(Vec<Dvr>),
    /// every DVR overring: membership reduces to D′-content inclusion
    AllOf { closure_ring: Module },
}

pub fn star_valuation_family(op: &SemistarOp) -> Result<ValuationFamily> {
    match op.kind() {
        OpKind::ValuationFamily(ws) => return Ok(ValuationFamily::Finite(ws.clone())),
        OpKind::IntegralB { closure_ring } => {
            return Ok(ValuationFamily::AllOf { closure_ring: closure_ring.clone() })
        }
        _ => {}
    }
    let top = op.closure_of_domain()?;
    let Some(Scope::Points(u)) = top.scope() else {
        return Err(Error::NoValuationFamily);
    };
    let mut out = Vec::new();
    for pt in u {
        let w = op.domain().dvr_at(*pt)?;
        if op.closure(&w.ring)? == w.ring {
            out.push(w);
        }
    }
    if out.is_empty() {
        return Err(Error::NoValuationFamily);
    }
    Ok(ValuationFamily::Finite(out))
}

/// ⋆_a as an operation, when a certificate or an explicit ⋆-valuation family is available.
pub fn eab_associated_exact(op: &SemistarOp) -> Result<SemistarOp> {
    match op.kind() {
        OpKind::ValuationFamily(_) | OpKind::IntegralB { .. } => return Ok(op.clone()),
        _ if op.meta().eab.is_yes() && op.meta().finite_type.is_yes() => return Ok(op.clone()),
        _ => {}
    }
    match star_valuation_family(op) {
        Ok(ValuationFamily::Finite(ws)) => SemistarOp::valuation_family(op.domain(), &ws),
        Ok(ValuationFamily::AllOf { .. }) => SemistarOp::b(op.domain()),
        Err(Error::NoValuationFamily) => Err(Error::NotEab),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedClosure {
    pub value: Module,
    /// no growth when the pool was extended by one round
    pub stabilized: bool,
    pub pool_used: usize,
}

/// Union of `term(H)` over H ∈ {D} ∪ pool, then over one extra round of products.
fn bounded_union<F>(d: &Domain, pool: &[Module], term: F) -> Result<BoundedClosure>
where
    F: Fn(&Module) -> Result<Option<Module>>,
{
    let mut acc: Option<Module> = None;
    let add = |acc: &mut Option<Module>, m: Module| -> Result<()> {
        *acc = Some(match acc.take() {
            None => m,
            Some(a) => a.sum(&m)?,
        });
        Ok(())
    };
    let mut first: Vec<Module> = vec![d.ring().clone()];
    first.extend(pool.iter().cloned());
    for h in &first {
        if let Some(m) = term(h)? {
            add(&mut acc, m)?;
        }
    }
    let before = acc.clone();
    for w in pool.windows(2) {
        if let Some(m) = term(&w[0].product(&w[1])?)? {
            add(&mut acc, m)?;
        }
    }
    let value = acc.ok_or(Error::EmptyPool)?;
    Ok(BoundedClosure { stabilized: before.as_ref() == Some(&value), value, pool_used: pool.len() })
}

/// ∪_H ((FH)^⋆ : H).
pub fn eab_associated_bounded(op: &SemistarOp, f: &Module, pool: &[Module]) -> Result<BoundedClosure> {
    bounded_union(op.domain(), pool, |h| op.closure(&f.product(h)?)?.colon(h))
}

/// ∪_H ((H^⋆ : H)E)^⋆.
pub fn semistar_integral_closure_bounded(op: &SemistarOp, e: &Module, pool: &[Module]) -> Result<BoundedClosure> {
    bounded_union(op.domain(), pool, |h| match op.closure(h)?.colon(h)? {
        Some(r) => Ok(Some(op.closure(&r.product(e)?)?)),
        None => Ok(None),
    })
}

/// ∪ {(E:H) : H^⋆ = D^⋆}.
pub fn w_closure_bounded(op: &SemistarOp, e: &Module, pool: &[Module]) -> Result<BoundedClosure> {
    let top = op.closure_of_domain()?;
    bounded_union(op.domain(), pool, |h| {
        if op.closure(h)? == top {
            e.colon(h)
        } else {
            Ok(None)
        }
    })
}

/// x ∈ E^⋆̃ decided by the colon ideal: (E :_D x)^⋆ = D^⋆.
pub fn tilde_member_by_colon(op: &SemistarOp, e: &Module, x: &crate::field::FieldElem) -> Result<bool> {
    if x.is_zero() {
        return Ok(true);
    }
    let d = op.domain();
    let j = colon_in_domain(d, e, x)?;
    Ok(op.closure(&j)? == op.closure_of_domain()?)
}

/// (E :_D x) = {r ∈ D : r·x ∈ E}.
pub fn colon_in_domain(d: &Domain, e: &Module, x: &crate::field::FieldElem) -> Result<Module> {
    let xd = d.principal(x)?;
    let c = e.colon(&xd)?.ok_or(Error::ZeroModule)?;
    c.intersect(d.ring())
}

/// Is the DVR overring V a ⋆-valuation overring (V^⋆ = V)?
pub fn is_star_valuation_overring(op: &SemistarOp, v: &Overring) -> Result<TriBool> {
    if !v.is_dvr() {
        return Err(Error::NotDvrDescriptor);
    }
    if v.base != *op.domain() {
        return Err(Error::DomainMismatch);
    }
    Ok(TriBool::from_bool(op.closure(v.target.ring())? == *v.target.ring()))
}

/// Points where D^⋆ lives, when finitely many.
pub fn closure_points(op: &SemistarOp) -> Result<Option<BTreeSet<Point>>> {
    Ok(op.closure_of_domain()?.scope().and_then(|s| s.finite_points().cloned()))
}
