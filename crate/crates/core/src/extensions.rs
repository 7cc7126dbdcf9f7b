//! The extension ℚ ⊆ ℚ(√d): a domain D over ℚ and a domain T over ℚ(√d) with D = T ∩ ℚ,
//! extension E ↦ ET and contraction M ↦ M ∩ ℚ, and the operations and checks built on them.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::ambient::{Ambient, Point};
use crate::domain::{Domain, PrimeIdeal};
use crate::error::{Error, Result};
use crate::field::{vp_q, FieldElem, FieldTag, Q};
use crate::lattice::Lattice;
use crate::module::{Module, Scope};
use crate::pmd::{pmd_decide, PmdStatus, PmdVerdict};
use crate::semistar::{quasi_star_maximals, QuasiMaxStatus, SemistarOp};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// T is the integral closure of D in the larger field
    IntegralClosure,
    Contains,
}

#[derive(Debug)]
struct PairInner {
    lower: Domain,
    upper: Domain,
    relation: Relation,
}

#[derive(Clone, Debug)]
pub struct ExtensionPair(Arc<PairInner>);

impl ExtensionPair {
    pub fn new(lower: &Domain, upper: &Domain, relation: Relation) -> Result<ExtensionPair> {
        if lower.tag() != FieldTag::Rational || upper.tag() == FieldTag::Rational {
            return Err(Error::NoSubfieldRegistered);
        }
        if relation == Relation::IntegralClosure && upper.conductor() != 1 {
            return Err(Error::BadSpec(format!("{upper} is not integrally closed")));
        }
        let pair = ExtensionPair(Arc::new(PairInner { lower: lower.clone(), upper: upper.clone(), relation }));
        if pair.contract(upper.ring())? != *lower.ring() {
            return Err(Error::BadSpec(format!("{lower} is not {upper} ∩ ℚ")));
        }
        if relation == Relation::IntegralClosure {
            // T is generated over D by the maximal order, so it suffices that ET = T for E = D
            if pair.extend(lower.ring())? != *upper.ring() {
                return Err(Error::BadSpec(format!("{upper} is not the integral closure of {lower}")));
            }
        }
        Ok(pair)
    }

    pub fn lower(&self) -> &Domain {
        &self.0.lower
    }

    pub fn upper(&self) -> &Domain {
        &self.0.upper
    }

    pub fn relation(&self) -> Relation {
        self.0.relation
    }

    /// Primes of T above p.
    pub fn primes_over(&self, p: i128) -> Result<Vec<PrimeIdeal>> {
        self.0.upper.primes_above(p)
    }

    /// E·T for a D-module E.
    pub fn extend(&self, e: &Module) -> Result<Module> {
        let t = &self.0.upper;
        if e.amb().tag != FieldTag::Rational {
            return Err(Error::DomainMismatch);
        }
        let (Some(scope), Some(lat)) = (e.scope(), e.lattice()) else {
            return Ok(Module::whole(t.amb()));
        };
        let q = lat.rational_slice().ok_or(Error::ZeroModule)?;
        let scope = match scope {
            Scope::All => t.scope().clone(),
            Scope::Points(s) => {
                let pts: BTreeSet<Point> = s
                    .iter()
                    .flat_map(|pt| t.amb().points_above(pt.p))
                    .filter(|pt| t.scope().contains(pt))
                    .collect();
                if pts.is_empty() {
                    return Ok(Module::whole(t.amb()));
                }
                Scope::Points(pts)
            }
        };
        Module::generated(t.amb(), &scope, t.order(), &[FieldElem::rational(t.tag(), q)])
    }

    /// M ∩ ℚ for a module M over T.
    pub fn contract(&self, m: &Module) -> Result<Module> {
        let amb = m.amb();
        if amb.tag == FieldTag::Rational || amb != self.0.upper.amb() {
            return Err(Error::NoSubfieldRegistered);
        }
        let rat = Ambient::rational();
        let (Some(scope), Some(lat)) = (m.scope(), m.lattice()) else {
            return Ok(Module::whole(&rat));
        };
        match scope {
            Scope::All => {
                let q = lat.rational_slice().ok_or(Error::ZeroContraction)?;
                Ok(Module::local(&rat, Scope::All, &rational_lattice(q)?))
            }
            Scope::Points(u) => {
                let ps: BTreeSet<i128> = u.iter().map(|pt| pt.p).collect();
                let slice = lat.rational_slice().ok_or(Error::ZeroContraction)?;
                let mut q = Q::from_integer(1);
                for &p in &ps {
                    let above = amb.points_above(p);
                    let k = if above.iter().all(|pt| u.contains(pt)) {
                        vp_q(&slice, p)
                    } else {
                        // one point of a split prime: rational elements have equal valuations
                        let pt = above.iter().find(|pt| u.contains(pt)).expect("a point above p");
                        amb.val(lat, *pt)
                    };
                    q *= pow_q(p, k);
                }
                let scope = Scope::points(ps.iter().map(|&p| Point { p, idx: 0 }));
                Ok(Module::local(&rat, scope, &rational_lattice(q)?))
            }
        }
    }
}

fn rational_lattice(q: Q) -> Result<Lattice> {
    Lattice::from_vectors(1, *q.denom(), &[[*q.numer(), 0]])
}

fn pow_q(p: i128, k: i64) -> Q {
    let base = Q::from_integer(p.pow(k.unsigned_abs() as u32));
    if k >= 0 {
        base
    } else {
        base.recip()
    }
}

/// E ↦ (ET)^⋆ ∩ ℚ.
pub fn underline_restriction_op(star_t: &SemistarOp, pair: &ExtensionPair) -> Result<SemistarOp> {
    SemistarOp::underline(star_t, pair)
}

/// The valuation-family operation on T over the T-localizations above each quasi-⋆-maximal of D.
pub fn overline_extension_op(star_d: &SemistarOp, pair: &ExtensionPair) -> Result<SemistarOp> {
    if star_d.domain() != pair.lower() {
        return Err(Error::DomainMismatch);
    }
    let rep = quasi_star_maximals(star_d)?;
    if rep.status != QuasiMaxStatus::Enumerated {
        return Err(Error::PreconditionNotMet("quasi-⋆-maximals are not enumerated".into()));
    }
    let t = pair.upper();
    let mut family = Vec::new();
    for q in &rep.primes {
        if !star_d.domain().is_valuation_at(q)? {
            return Err(Error::PreconditionNotMet(format!("{} is not a DVR localization", q.label())));
        }
        let above = pair.primes_over(q.p)?;
        if above.is_empty() {
            return Err(Error::CorrespondenceIncomplete(q.label()));
        }
        for n in above {
            family.push(t.dvr_at(n.point)?);
        }
    }
    SemistarOp::valuation_family(t, &family)
}

#[derive(Clone, Debug)]
pub struct KrullCheck {
    pub e: Module,
    /// (ET)^v ∩ ℚ
    pub lhs: Module,
    /// E^v
    pub rhs: Module,
    pub holds: bool,
}

/// (ET)^v ∩ K = E^v over the samples.
pub fn krull_formula_check(pair: &ExtensionPair, samples: &[Module]) -> Result<Vec<KrullCheck>> {
    if pair.relation() != Relation::IntegralClosure || !pair.lower().certs().is_integrally_closed.is_yes() {
        return Err(Error::PreconditionNotMet("D must be integrally closed with T its integral closure".into()));
    }
    let vt = SemistarOp::v(pair.upper())?;
    let vd = SemistarOp::v(pair.lower())?;
    samples
        .iter()
        .map(|e| {
            let lhs = pair.contract(&vt.closure(&pair.extend(e)?)?)?;
            let rhs = vd.closure(e)?;
            Ok(KrullCheck { e: e.clone(), holds: lhs == rhs, lhs, rhs })
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct AscentDescentReport {
    pub lower: PmdVerdict,
    pub upper: PmdVerdict,
    /// verdicts match; an unknown on either side gives `None`
    pub pass: Option<bool>,
}

/// D is a PvMD iff T is, for T the integral closure of D.
pub fn pvmd_ascent_descent_check(pair: &ExtensionPair) -> Result<AscentDescentReport> {
    if pair.relation() != Relation::IntegralClosure {
        return Err(Error::PreconditionNotMet("T must be the integral closure of D".into()));
    }
    let lower = pmd_decide(&SemistarOp::v(pair.lower())?)?;
    let upper = pmd_decide(&SemistarOp::v(pair.upper())?)?;
    let pass = match (lower.status(), upper.status()) {
        (PmdStatus::Unknown, _) | (_, PmdStatus::Unknown) => None,
        (a, b) => Some(a == b),
    };
    Ok(AscentDescentReport { lower, upper, pass })
}

/// Everything checkable on one pair: PvMD ascent/descent, Krull's formula on a seeded pool
/// (when D is integrally closed) and the overline of d on D (when Max(D) is enumerated).
#[derive(Clone, Debug)]
pub struct PairReport {
    pub ascent_descent: AscentDescentReport,
    pub krull_samples: usize,
    pub krull_failures: Vec<KrullCheck>,
    pub overline: Option<PmdVerdict>,
}

impl PairReport {
    /// `None` when some part could not conclude.
    pub fn pass(&self) -> Option<bool> {
        let overline_ok = self.overline.as_ref().map(|v| v.status());
        match (self.ascent_descent.pass, overline_ok) {
            (Some(false), _) | (_, Some(PmdStatus::No)) => Some(false),
            _ if !self.krull_failures.is_empty() => Some(false),
            (None, _) | (_, Some(PmdStatus::Unknown)) => None,
            _ => Some(true),
        }
    }
}

pub fn pair_check(pair: &ExtensionPair, krull_samples: usize, seed: u64) -> Result<PairReport> {
    let ascent_descent = pvmd_ascent_descent_check(pair)?;
    let (n, krull_failures) = if pair.lower().certs().is_integrally_closed.is_yes() {
        let pool = crate::sample::ideal_pool(pair.lower(), krull_samples, seed)?;
        let checks = krull_formula_check(pair, &pool)?;
        (checks.len(), checks.into_iter().filter(|c| !c.holds).collect())
    } else {
        (0, Vec::new())
    };
    let d = SemistarOp::identity(pair.lower())?;
    let overline = match overline_extension_op(&d, pair) {
        Ok(op) => Some(pmd_decide(&op)?),
        Err(Error::PreconditionNotMet(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(PairReport { ascent_descent, krull_samples: n, krull_failures, overline })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;

    fn z_zi() -> ExtensionPair {
        ExtensionPair::new(&Domain::integers(), &Domain::quadratic_order(-1, 1).unwrap(), Relation::IntegralClosure)
            .unwrap()
    }

    fn ideal_q(d: &Domain, xs: &[Q]) -> Module {
        let gens: Vec<FieldElem> = xs.iter().map(|&q| FieldElem::rational(d.tag(), q)).collect();
        d.ideal(&gens).unwrap()
    }

    #[test]
    fn contraction_examples() {
        let pair = z_zi();
        let t = pair.upper().clone();
        let k = t.tag();
        let m = t.principal(&FieldElem::rational(k, Q::new(2, 3))).unwrap();
        assert_eq!(pair.contract(&m).unwrap(), ideal_q(pair.lower(), &[Q::new(2, 3)]));
        let m = t.principal(&FieldElem::ints(k, 1, 1)).unwrap();
        assert_eq!(pair.contract(&m).unwrap(), ideal_q(pair.lower(), &[Q::from_integer(2)]));
        // P3 ∩ ℚ = 3ℤ over ℤ[3i]
        let d = Domain::quadratic_order(-1, 3).unwrap();
        let p3 = d.primes_above(3).unwrap()[0].under.clone();
        let zi3 = Domain::in_ambient(d.amb(), 1, Scope::All).unwrap();
        let pair3 = ExtensionPair::new(&Domain::integers(), &zi3, Relation::IntegralClosure).unwrap();
        assert_eq!(pair3.contract(&p3).unwrap(), ideal_q(pair.lower(), &[Q::from_integer(3)]));
    }

    #[test]
    fn semilocal_pair_and_split_contraction() {
        let zs = Domain::localized_integers(&[2, 3]).unwrap();
        let zis = Domain::localized_order(-1, 1, &crate::domain::LocalizeAt::Primes(vec![2, 3])).unwrap();
        let pair = ExtensionPair::new(&zs, &zis, Relation::IntegralClosure).unwrap();
        let six = ideal_q(&zs, &[Q::from_integer(6)]);
        assert_eq!(pair.contract(&pair.extend(&six).unwrap()).unwrap(), six);
        // ℤ[i] localized at one prime above 5 contracts to ℤ_(5)
        let zi = Domain::quadratic_order(-1, 1).unwrap();
        let q5 = zi.primes_above(5).unwrap()[0].clone();
        let t = zi.localize(&[q5]).unwrap();
        let pair5 = ExtensionPair::new(&Domain::localized_integers(&[5]).unwrap(), &t, Relation::Contains).unwrap();
        let m = t.principal(&FieldElem::ints(t.tag(), 2, 1)).unwrap();
        let c = pair5.contract(&m).unwrap();
        assert_eq!(c, ideal_q(pair5.lower(), &[Q::from_integer(5)]));
    }

    #[test]
    fn underline_and_krull() {
        let pair = z_zi();
        let z = pair.lower().clone();
        let e = ideal_q(&z, &[Q::from_integer(4), Q::from_integer(6)]);
        let vt = SemistarOp::v(pair.upper()).unwrap();
        let u = underline_restriction_op(&vt, &pair).unwrap();
        assert_eq!(u.closure(&e).unwrap(), ideal_q(&z, &[Q::from_integer(2)]));
        let checks = krull_formula_check(&pair, &[e, ideal_q(&z, &[Q::new(2, 3)])]).unwrap();
        assert!(checks.iter().all(|c| c.holds));
    }

    #[test]
    fn overline_family_on_semilocal_pair() {
        let zs = Domain::localized_integers(&[2, 3]).unwrap();
        let zis = Domain::localized_order(-1, 1, &crate::domain::LocalizeAt::Primes(vec![2, 3])).unwrap();
        let pair = ExtensionPair::new(&zs, &zis, Relation::IntegralClosure).unwrap();
        let d = SemistarOp::identity(&zs).unwrap();
        let over = overline_extension_op(&d, &pair).unwrap();
        assert_eq!(over.closure(zis.ring()).unwrap(), *zis.ring());
        assert!(pmd_decide(&over).unwrap().status() == PmdStatus::Yes);
        let rep = pvmd_ascent_descent_check(&pair).unwrap();
        assert_eq!(rep.pass, Some(true));
    }
}
