//! Concrete base domains: ℤ, its semilocalizations, quadratic orders and their localizations.
//!
//! A domain is R·O_U inside a fixed ambient order O, where R is the order of conductor f
//! (f dividing the ambient conductor) and U is a scope of ambient points. Overrings that share
//! the ambient can therefore be compared, multiplied and intersected directly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_integer::Integer;

use crate::ambient::{Ambient, Point, Splitting};
use crate::error::{Error, Result};
use crate::field::{is_prime, prime_factors, vp_q, FieldElem, FieldTag};
use crate::lattice::Lattice;
use crate::module::{Module, Scope};
use crate::tribool::TriBool;

pub const DEFAULT_PRIME_BOUND: i128 = 97;

/// Imaginary and real quadratic fields whose maximal order is a PID.
const CLASS_NUMBER_ONE: [i64; 9] = [-1, -2, -3, -7, -11, 2, 3, 5, 13];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DomainKind {
    Integers,
    LocalizedIntegers { s: Vec<i128> },
    QuadraticOrder { d: i64, f: i128 },
    LocalizedOrder { d: i64, f: i128 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Certificates {
    pub is_pid: TriBool,
    pub is_prufer: TriBool,
    pub is_integrally_closed: TriBool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    pub under: Module,
    pub p: i128,
    /// Position among the primes of the domain above p.
    pub index: usize,
    pub point: Point,
    pub contains_conductor: bool,
    /// |D/P|.
    pub residue_size: i128,
}

impl PrimeIdeal {
    pub fn label(&self) -> String {
        format!("P({},{})", self.p, self.index)
    }
}

#[derive(Debug)]
struct Inner {
    amb: Arc<Ambient>,
    f: i128,
    scope: Scope,
    order: Lattice,
    ring: Module,
    kind: DomainKind,
    certs: Certificates,
    prime_bound: i128,
    cache: Mutex<BTreeMap<i128, Vec<PrimeIdeal>>>,
}

#[derive(Clone, Debug)]
pub struct Domain(Arc<Inner>);

impl PartialEq for Domain {
    fn eq(&self, other: &Domain) -> bool {
        self.0.amb == other.0.amb && self.0.f == other.0.f && self.0.scope == other.0.scope
    }
}

impl Eq for Domain {}

impl std::hash::Hash for Domain {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.amb.hash(state);
        self.0.f.hash(state);
        self.0.scope.hash(state);
    }
}

/// Where a localized order is localized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalizeAt {
    /// The prime with this index among the order's primes above p.
    Prime { p: i128, index: usize },
    /// All primes above each listed rational prime.
    Primes(Vec<i128>),
}

impl Domain {
    pub fn integers() -> Domain {
        Domain::in_ambient(&Ambient::rational(), 1, Scope::All).expect("ℤ is well formed")
    }

    pub fn localized_integers(s: &[i128]) -> Result<Domain> {
        let s: BTreeSet<i128> = s.iter().copied().collect();
        if s.is_empty() {
            return Err(Error::BadSpec("empty prime set S".into()));
        }
        if let Some(p) = s.iter().find(|p| !is_prime(**p)) {
            return Err(Error::BadSpec(format!("{p} is not prime")));
        }
        let amb = Ambient::rational();
        Domain::in_ambient(&amb, 1, Scope::points(s.iter().map(|&p| Point { p, idx: 0 })))
    }

    pub fn quadratic_order(d: i64, f: i128) -> Result<Domain> {
        let amb = Ambient::quadratic(d, f)?;
        Domain::in_ambient(&amb, f, Scope::All)
    }

    pub fn localized_order(d: i64, f: i128, at: &LocalizeAt) -> Result<Domain> {
        Domain::localized_in(&Ambient::quadratic(d, f)?, f, at)
    }

    /// The order of conductor f of `amb`, localized as `at` says.
    pub fn localized_in(amb: &Arc<Ambient>, f: i128, at: &LocalizeAt) -> Result<Domain> {
        let pts = match at {
            LocalizeAt::Prime { p, index } => {
                check_prime(*p)?;
                let primes = amb.order_primes(f, *p);
                let pr = primes
                    .get(*index)
                    .ok_or_else(|| Error::BadSpec(format!("no prime with index {index} above {p}")))?;
                vec![amb.point_under(&pr.lattice, *p)?]
            }
            LocalizeAt::Primes(s) => {
                if s.is_empty() {
                    return Err(Error::BadSpec("empty prime set S".into()));
                }
                let mut v = Vec::new();
                for &p in s {
                    check_prime(p)?;
                    v.extend(amb.points_above(p));
                }
                v
            }
        };
        Domain::in_ambient(amb, f, Scope::points(pts))
    }

    /// R·O_U where R is the order of conductor f of the ambient field.
    pub fn in_ambient(amb: &Arc<Ambient>, f: i128, scope: Scope) -> Result<Domain> {
        if f < 1 {
            return Err(Error::BadSpec(format!("conductor {f} < 1")));
        }
        if amb.f0 % f != 0 {
            return Err(Error::BadSpec(format!("conductor {f} does not divide the ambient conductor {}", amb.f0)));
        }
        if let Scope::Points(s) = &scope {
            if s.is_empty() {
                return Err(Error::BadSpec("empty localization".into()));
            }
        }
        let order = amb.order(f);
        // ring axioms on the generator lattice
        if !order.contains_elem(&amb.one()) || !order.contains(&order.product(amb.tag, &order)) {
            return Err(Error::BadSpec("generators do not span a subring".into()));
        }
        // a regular prime of R sitting over a singular point of O must be the only one there
        for p in prime_factors(amb.f0) {
            if f % p != 0 && scope.contains(&Point { p, idx: 0 }) && amb.order_primes(f, p).len() > 1 {
                return Err(Error::NotRepresentable(format!(
                    "order of conductor {f} splits above {p}, where the ambient order is singular"
                )));
            }
        }
        let ring = Module::local(amb, scope.clone(), &order);
        let kind = match (amb.tag, &scope) {
            (FieldTag::Rational, Scope::All) => DomainKind::Integers,
            (FieldTag::Rational, Scope::Points(s)) => {
                DomainKind::LocalizedIntegers { s: s.iter().map(|pt| pt.p).collect() }
            }
            (FieldTag::Quadratic(d), Scope::All) => DomainKind::QuadraticOrder { d, f },
            (FieldTag::Quadratic(d), Scope::Points(_)) => DomainKind::LocalizedOrder { d, f },
        };
        let certs = certificates(&kind, &scope, f);
        Ok(Domain(Arc::new(Inner {
            amb: amb.clone(),
            f,
            scope,
            order,
            ring,
            kind,
            certs,
            prime_bound: DEFAULT_PRIME_BOUND,
            cache: Mutex::new(BTreeMap::new()),
        })))
    }

    pub fn with_prime_bound(&self, bound: i128) -> Domain {
        Domain(Arc::new(Inner {
            amb: self.0.amb.clone(),
            f: self.0.f,
            scope: self.0.scope.clone(),
            order: self.0.order.clone(),
            ring: self.0.ring.clone(),
            kind: self.0.kind.clone(),
            certs: self.0.certs,
            prime_bound: bound,
            cache: Mutex::new(BTreeMap::new()),
        }))
    }

    pub fn amb(&self) -> &Arc<Ambient> {
        &self.0.amb
    }

    pub fn tag(&self) -> FieldTag {
        self.0.amb.tag
    }

    pub fn ring(&self) -> &Module {
        &self.0.ring
    }

    /// ℤ-lattice of the order R.
    pub fn order(&self) -> &Lattice {
        &self.0.order
    }

    pub fn conductor(&self) -> i128 {
        self.0.f
    }

    pub fn scope(&self) -> &Scope {
        &self.0.scope
    }

    pub fn kind(&self) -> &DomainKind {
        &self.0.kind
    }

    pub fn certs(&self) -> Certificates {
        self.0.certs
    }

    pub fn prime_bound(&self) -> i128 {
        self.0.prime_bound
    }

    pub fn is_semilocal(&self) -> bool {
        self.0.scope.is_finite()
    }

    pub fn describe(&self) -> String {
        let base = match &self.0.kind {
            DomainKind::Integers | DomainKind::LocalizedIntegers { .. } => "Z".to_string(),
            DomainKind::QuadraticOrder { d, f } | DomainKind::LocalizedOrder { d, f } => {
                format!("O(d={d},f={f})")
            }
        };
        match &self.0.scope {
            Scope::All => base,
            Scope::Points(s) => {
                let pts: Vec<String> = s.iter().map(|p| p.to_string()).collect();
                format!("{base}_[{}]", pts.join(","))
            }
        }
    }

    /// D-module generated by the given elements.
    pub fn ideal(&self, gens: &[FieldElem]) -> Result<Module> {
        let gens: Vec<FieldElem> = gens.iter().copied().filter(|g| !g.is_zero()).collect();
        if gens.is_empty() {
            return Err(Error::ZeroModule);
        }
        if gens.iter().any(|g| g.tag != self.tag()) {
            return Err(Error::DomainMismatch);
        }
        Module::generated(&self.0.amb, &self.0.scope, &self.0.order, &gens)
    }

    pub fn principal(&self, x: &FieldElem) -> Result<Module> {
        self.ideal(&[*x])
    }

    /// The D-module with the given lattice; rejects lattices that are not D-stable.
    pub fn module_from_lattice(&self, l: &Lattice) -> Result<Module> {
        if l.dim() != self.tag().dim() || !l.is_full_rank() {
            return Err(Error::BadSpec("lattice has the wrong rank for this domain".into()));
        }
        let m = Module::local(&self.0.amb, self.0.scope.clone(), l);
        let stable = m.product(&self.0.ring)?;
        if stable != m {
            return Err(Error::BadSpec("lattice is not closed under multiplication by the domain".into()));
        }
        Ok(m)
    }

    /// Every D-module M in the representable class, as an f.g. D-module with the same
    /// components at the points of D's scope: the lattice of M made D-stable.
    pub fn saturate_scope(&self, m: &Module) -> Module {
        match m.lattice() {
            None => m.clone(),
            Some(l) => Module::local(&self.0.amb, self.0.scope.clone(), &l.product(self.tag(), &self.0.order)),
        }
    }

    pub fn primes_above(&self, p: i128) -> Result<Vec<PrimeIdeal>> {
        check_prime(p)?;
        if p > self.0.prime_bound {
            return Err(Error::PrimeTooLarge { p, bound: self.0.prime_bound });
        }
        if let Some(v) = self.0.cache.lock().expect("cache lock").get(&p) {
            return Ok(v.clone());
        }
        let amb = &self.0.amb;
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for op in amb.order_primes(self.0.f, p) {
            let point = amb.point_under(&op.lattice, p)?;
            if !self.0.scope.contains(&point) {
                continue;
            }
            if !seen.insert(point) {
                return Err(Error::NotRepresentable(format!("two primes of the domain over the point {point}")));
            }
            let residue_size = (op.lattice.covolume() / self.0.order.covolume()).to_integer();
            if !residue_ring_is_field(amb, self.0.f, &op.lattice) {
                return Err(Error::NotRepresentable(format!("residue ring above {p} is not a field")));
            }
            let under = Module::local(amb, self.0.scope.clone(), &op.lattice);
            out.push(PrimeIdeal {
                under,
                p,
                index: out.len(),
                point,
                contains_conductor: self.0.f % p == 0,
                residue_size,
            });
        }
        self.0.cache.lock().expect("cache lock").insert(p, out.clone());
        Ok(out)
    }

    pub fn prime(&self, p: i128, index: usize) -> Result<PrimeIdeal> {
        self.primes_above(p)?
            .into_iter()
            .nth(index)
            .ok_or_else(|| Error::BadSpec(format!("no prime with index {index} above {p}")))
    }

    /// Primes of D lying at the given ambient points.
    pub fn primes_at(&self, pts: &BTreeSet<Point>) -> Result<Vec<PrimeIdeal>> {
        let ps: BTreeSet<i128> = pts.iter().map(|pt| pt.p).collect();
        let mut out = Vec::new();
        for p in ps {
            out.extend(self.primes_above(p)?.into_iter().filter(|q| pts.contains(&q.point)));
        }
        Ok(out)
    }

    /// Max(D) when D is semilocal.
    pub fn maximal_ideals(&self) -> Result<Option<Vec<PrimeIdeal>>> {
        match &self.0.scope {
            Scope::All => Ok(None),
            Scope::Points(s) => Ok(Some(self.primes_at(s)?)),
        }
    }

    /// Primes containing the conductor of R (the non-regular primes).
    pub fn conductor_primes(&self) -> Result<Vec<PrimeIdeal>> {
        let mut out = Vec::new();
        for p in prime_factors(self.0.f) {
            out.extend(self.primes_above(p)?);
        }
        Ok(out)
    }

    /// Is D_P a valuation domain? Tested as P·(D:P) ⊄ P.
    pub fn is_valuation_at(&self, pr: &PrimeIdeal) -> Result<bool> {
        let inv = self.0.ring.colon(&pr.under)?.ok_or(Error::ZeroModule)?;
        let prod = pr.under.product(&inv)?;
        Ok(!pr.under.contains(&prod)?)
    }

    pub fn integral_closure(&self) -> Result<Domain> {
        if self.0.f == 1 {
            return Ok(self.clone());
        }
        Ok(Domain::in_ambient(&self.0.amb, 1, self.0.scope.clone())?.with_prime_bound(self.0.prime_bound))
    }

    /// D localized at a set of its primes.
    pub fn localize(&self, primes: &[PrimeIdeal]) -> Result<Domain> {
        let pts = Scope::points(primes.iter().map(|q| q.point));
        self.localize_points(&pts)
    }

    pub fn localize_points(&self, pts: &Scope) -> Result<Domain> {
        let scope = self.0.scope.meet(pts);
        Ok(Domain::in_ambient(&self.0.amb, self.0.f, scope)?.with_prime_bound(self.0.prime_bound))
    }

    /// The DVR of the integral closure at an ambient point of D's scope.
    pub fn dvr_at(&self, pt: Point) -> Result<Dvr> {
        if !self.0.scope.contains(&pt) {
            return Err(Error::BadSpec(format!("point {pt} is outside the domain")));
        }
        let closure = self.integral_closure()?;
        let ring = closure.ring().localize(&Scope::points([pt]));
        let amb = self.0.amb.clone();
        let res_deg = if amb.is_regular(pt) {
            1
        } else {
            let primes = amb.order_primes(1, pt.p);
            if primes.len() != 1 {
                return Err(Error::NotRepresentable(format!("integral closure splits above {}", pt.p)));
            }
            if primes[0].splitting == Splitting::Inert {
                2
            } else {
                1
            }
        };
        Ok(Dvr { point: pt, ring, amb, res_deg })
    }

    /// Is `other` ⊆ self as subsets of K?
    pub fn contains_domain(&self, other: &Domain) -> Result<bool> {
        self.0.ring.contains(other.ring())
    }

    /// The registered overring whose underlying set is `m` (an overring R'·O_U with R' ⊇ R).
    pub fn overring_from_module(&self, m: &Module) -> Result<Domain> {
        let not_ring = || Error::NotRepresentable(format!("{m} is not a registered overring of {self}"));
        let scope = m.scope().ok_or_else(not_ring)?;
        for g in (1..=self.0.f).filter(|g| self.0.f % g == 0) {
            let Ok(t) = Domain::in_ambient(&self.0.amb, g, scope.clone()) else {
                continue;
            };
            if t.ring() == m {
                return Ok(t.with_prime_bound(self.0.prime_bound));
            }
        }
        Err(not_ring())
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

fn check_prime(p: i128) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::BadSpec(format!("{p} is not prime")))
    }
}

fn certificates(kind: &DomainKind, scope: &Scope, f: i128) -> Certificates {
    let all = |t: TriBool| Certificates { is_pid: t, is_prufer: t, is_integrally_closed: t };
    match kind {
        DomainKind::Integers | DomainKind::LocalizedIntegers { .. } => all(TriBool::Yes),
        DomainKind::QuadraticOrder { d, f } => {
            if *f == 1 {
                Certificates {
                    is_pid: if CLASS_NUMBER_ONE.contains(d) { TriBool::Yes } else { TriBool::Unknown },
                    is_prufer: TriBool::Yes,
                    is_integrally_closed: TriBool::Yes,
                }
            } else {
                all(TriBool::No)
            }
        }
        DomainKind::LocalizedOrder { .. } => {
            let pts = scope.finite_points().expect("localized order has finite scope");
            // semilocal Dedekind rings are PIDs
            all(TriBool::from_bool(pts.iter().all(|pt| f % pt.p != 0)))
        }
    }
}

/// Decides whether R/P is a field by checking x^(|R/P|-1) = 1 for every nonzero residue x.
fn residue_ring_is_field(amb: &Ambient, f: i128, prime: &Lattice) -> bool {
    let modpow = |mut b: i128, mut e: i128, m: i128| {
        let mut r = 1 % m;
        b = b.rem_euclid(m);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % m;
            }
            b = b * b % m;
            e >>= 1;
        }
        r
    };
    if amb.tag == FieldTag::Rational {
        let p = prime.rows()[0][0] / prime.den();
        return (1..p).all(|x| modpow(x, p - 1, p) == 1);
    }
    // coordinates on {1, w} with w² = t·w − n
    let w = amb.order_gen(f);
    let (t, n) = (w.trace().to_integer(), w.norm().to_integer());
    let coords: Vec<(i128, i128)> = prime
        .basis(amb.tag)
        .iter()
        .map(|e| {
            let beta = e.b / w.b;
            let alpha = e.a - beta * w.a;
            debug_assert!(alpha.is_integer() && beta.is_integer());
            (alpha.to_integer(), beta.to_integer())
        })
        .collect();
    let [(a1, b1), (a2, b2)] = [coords[0], coords[1]];
    let g = b1.extended_gcd(&b2);
    let (bb, c) = (g.gcd, g.x * a1 + g.y * a2);
    let (bb, c) = if bb < 0 { (-bb, -c) } else { (bb, c) };
    let aa = ((b2 / g.gcd) * a1 - (b1 / g.gcd) * a2).abs();
    if aa == 0 || bb == 0 {
        return false;
    }
    let red = |a: i128, b: i128| {
        let k = b.div_euclid(bb);
        ((a - k * c).rem_euclid(aa), b - k * bb)
    };
    let mul = |x: (i128, i128), y: (i128, i128)| {
        let a = x.0 * y.0 - x.1 * y.1 * n;
        let b = x.0 * y.1 + x.1 * y.0 + x.1 * y.1 * t;
        red(a, b)
    };
    let size = aa * bb;
    let one = red(1, 0);
    for b in 0..bb {
        for a in 0..aa {
            if a == 0 && b == 0 {
                continue;
            }
            let (mut r, mut base, mut e) = (one, (a, b), size - 1);
            while e > 0 {
                if e & 1 == 1 {
                    r = mul(r, base);
                }
                base = mul(base, base);
                e >>= 1;
            }
            if r != one {
                return false;
            }
        }
    }
    true
}

/// A discrete valuation overring: the integral closure localized at one point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dvr {
    pub point: Point,
    pub ring: Module,
    amb: Arc<Ambient>,
    res_deg: i64,
}

impl Dvr {
    /// Valuation of a module; `None` is −∞ (the module is not a fractional ideal of the DVR).
    pub fn val_module(&self, m: &Module) -> Option<i64> {
        let scope = m.scope()?;
        if !scope.contains(&self.point) {
            return None;
        }
        let l = m.lattice().expect("local module has a lattice");
        Some(self.val_lattice(l))
    }

    fn val_lattice(&self, l: &Lattice) -> i64 {
        if self.amb.is_regular(self.point) {
            return self.amb.val(l, self.point);
        }
        let r = self.amb.order(1);
        let lr = l.product(self.amb.tag, &r);
        let k = vp_q(&(lr.covolume() / r.covolume()), self.point.p);
        debug_assert_eq!(k % self.res_deg, 0);
        k / self.res_deg
    }

    /// Valuation of an element; `None` for zero.
    pub fn val_elem(&self, x: &FieldElem) -> Option<i64> {
        if x.is_zero() {
            return None;
        }
        let l = self.amb.base().scale(self.amb.tag, x).ok()?;
        Some(self.val_lattice(&l))
    }

    pub fn label(&self) -> String {
        format!("V{}", self.point)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OverringKind {
    Localization,
    IntegralClosure,
    Explicit,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Overring {
    pub base: Domain,
    pub target: Domain,
    pub kind: OverringKind,
    pub flat: TriBool,
    pub flat_witness: Option<PrimeIdeal>,
}

impl Overring {
    pub fn new(base: &Domain, target: &Domain) -> Result<Overring> {
        if base.amb() != target.amb() {
            return Err(Error::DomainMismatch);
        }
        if !target.contains_domain(base)? {
            return Err(Error::BadSpec(format!("{target} is not an overring of {base}")));
        }
        let kind = if target.conductor() == base.conductor() {
            OverringKind::Localization
        } else if target.conductor() == 1 && target.scope() == base.scope() {
            OverringKind::IntegralClosure
        } else {
            OverringKind::Explicit
        };
        let candidates = flatness_candidates(base, target)?;
        let (flat, flat_witness) = is_flat_overring(base, target, kind, &candidates)?;
        Ok(Overring { base: base.clone(), target: target.clone(), kind, flat, flat_witness })
    }

    pub fn is_dvr(&self) -> bool {
        self.target.is_semilocal()
            && self.target.certs().is_prufer.is_yes()
            && self.target.scope().finite_points().is_some_and(|s| s.len() == 1)
    }
}

/// Maximal ideals of T over the points where D is not regular: the only places where
/// T_N and D_{N∩D} can differ.
fn flatness_candidates(base: &Domain, target: &Domain) -> Result<Vec<PrimeIdeal>> {
    let mut out = Vec::new();
    for p in prime_factors(base.conductor()) {
        out.extend(target.primes_above(p)?);
    }
    Ok(out)
}

/// Richman's criterion T_N = D_{N∩D} on the candidate maximal ideals of T.
pub fn is_flat_overring(
    base: &Domain,
    target: &Domain,
    kind: OverringKind,
    candidates: &[PrimeIdeal],
) -> Result<(TriBool, Option<PrimeIdeal>)> {
    if kind == OverringKind::Localization {
        return Ok((TriBool::Yes, None));
    }
    for n in candidates {
        let pt = Scope::points([n.point]);
        let tn = target.ring().localize(&pt);
        let dn = base.ring().localize(&pt);
        if tn != dn {
            return Ok((TriBool::No, Some(n.clone())));
        }
    }
    let needed = flatness_candidates(base, target)?;
    let covered = needed.iter().all(|n| candidates.iter().any(|c| c.under == n.under));
    Ok((if covered { TriBool::Yes } else { TriBool::Unknown }, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z3i() -> Domain {
        Domain::quadratic_order(-1, 3).unwrap()
    }

    #[test]
    fn build_and_certificates() {
        let z = Domain::integers();
        assert!(z.certs().is_pid.is_yes());
        let d = z3i();
        assert!(d.certs().is_integrally_closed.is_no());
        assert_eq!(d.order().text(), "den=1; basis=[[1,0],[0,3]]");
        let k = d.tag();
        // 3i·i = −3 ∈ D while i ∉ D
        assert!(d.ring().contains_elem(&(FieldElem::ints(k, 0, 3) * FieldElem::ints(k, 0, 1))));
        assert!(!d.ring().contains_elem(&FieldElem::ints(k, 0, 1)));
        assert!(Domain::quadratic_order(-1, 1).unwrap().certs().is_pid.is_yes());
        assert!(Domain::quadratic_order(-5, 1).unwrap().certs().is_pid == TriBool::Unknown);
        assert!(Domain::quadratic_order(12, 1).is_err());
        assert!(Domain::quadratic_order(-1, 0).is_err());
    }

    #[test]
    fn primes_of_z3i() {
        let d = z3i();
        let p3 = d.primes_above(3).unwrap();
        assert_eq!(p3.len(), 1);
        assert!(p3[0].contains_conductor);
        assert_eq!(p3[0].under.text(), "den=1; basis=[[3,0],[0,3]]");
        let p5 = d.primes_above(5).unwrap();
        let t: Vec<String> = p5.iter().map(|q| q.under.text()).collect();
        assert_eq!(t, ["den=1; basis=[[5,0],[1,3]]", "den=1; basis=[[5,0],[4,3]]"]);
        assert!(p5.iter().all(|q| !q.contains_conductor));
        assert_eq!(p5[0].residue_size, 5);
        assert_eq!(d.primes_above(7).unwrap()[0].residue_size, 49);
        assert!(matches!(d.primes_above(101), Err(Error::PrimeTooLarge { .. })));
        // Q5 = (2+i)ℤ[i] ∩ D
        let zi = d.integral_closure().unwrap();
        let k = d.tag();
        let q = zi.principal(&FieldElem::ints(k, 2, 1)).unwrap().intersect(d.ring()).unwrap();
        assert!(p5.iter().any(|pr| pr.under == q));
    }

    #[test]
    fn valuation_test_matches_conductor() {
        let d = z3i();
        for p in [2, 3, 5, 7, 11, 13] {
            for pr in d.primes_above(p).unwrap() {
                assert_eq!(d.is_valuation_at(&pr).unwrap(), !pr.contains_conductor, "p = {p}");
            }
        }
        let z = Domain::integers();
        assert!(z.is_valuation_at(&z.primes_above(5).unwrap()[0]).unwrap());
    }

    #[test]
    fn integral_closure_and_flatness() {
        let d = z3i();
        let zi = d.integral_closure().unwrap();
        assert_eq!(zi.integral_closure().unwrap(), zi);
        assert!(zi.certs().is_integrally_closed.is_yes());
        let ov = Overring::new(&d, &zi).unwrap();
        assert_eq!(ov.kind, OverringKind::IntegralClosure);
        assert_eq!(ov.flat, TriBool::No);
        assert_eq!(ov.flat_witness.as_ref().unwrap().p, 3);
        let q5 = d.primes_above(5).unwrap()[0].clone();
        let loc = Overring::new(&d, &d.localize(&[q5]).unwrap()).unwrap();
        assert_eq!(loc.flat, TriBool::Yes);
        let z = Domain::integers();
        let z5 = Overring::new(&z, &Domain::localized_integers(&[5]).unwrap()).unwrap();
        assert_eq!(z5.flat, TriBool::Yes);
    }

    #[test]
    fn localized_order_primes() {
        let d = Domain::localized_order(-1, 3, &LocalizeAt::Prime { p: 3, index: 0 }).unwrap();
        assert!(d.is_semilocal());
        let max = d.maximal_ideals().unwrap().unwrap();
        assert_eq!(max.len(), 1);
        assert!(!d.is_valuation_at(&max[0]).unwrap());
        assert!(d.primes_above(5).unwrap().is_empty());
        let t = d.integral_closure().unwrap();
        assert!(t.certs().is_prufer.is_yes());
    }

    #[test]
    fn dvr_valuations() {
        let d = z3i();
        let k = d.tag();
        let v3 = d.dvr_at(Point { p: 3, idx: 0 }).unwrap();
        assert_eq!(v3.val_elem(&FieldElem::int(k, 9)), Some(2));
        assert_eq!(v3.val_elem(&FieldElem::ints(k, 0, 3)), Some(1));
        assert_eq!(v3.val_module(d.ring()), Some(0));
        let v5 = d.dvr_at(Point { p: 5, idx: 0 }).unwrap();
        assert_eq!(v5.val_elem(&FieldElem::int(k, 5)), Some(1));
        let x = FieldElem::ints(k, 2, 1);
        let vals = [v5.val_elem(&x).unwrap(), d.dvr_at(Point { p: 5, idx: 1 }).unwrap().val_elem(&x).unwrap()];
        assert_eq!(vals.iter().sum::<i64>(), 1);
    }
}
