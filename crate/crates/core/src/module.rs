//! Submodules of K of the form L·O_U: an O-lattice L localized at a set U of points of the
//! ambient order O (all points, or finitely many), plus K itself.
//!
//! The lattice is kept canonical: it agrees with L at the points of U and with O elsewhere, so
//! structural equality is set equality. Fractional ideals of every registered domain, and the
//! closures of such ideals under every registered operation, live in this class.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::ambient::{Ambient, Point};
use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::lattice::Lattice;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scope {
    All,
    Points(BTreeSet<Point>),
}

impl Scope {
    pub fn points<I: IntoIterator<Item = Point>>(it: I) -> Scope {
        Scope::Points(it.into_iter().collect())
    }

    pub fn contains(&self, pt: &Point) -> bool {
        match self {
            Scope::All => true,
            Scope::Points(s) => s.contains(pt),
        }
    }

    pub fn is_subset(&self, other: &Scope) -> bool {
        match (self, other) {
            (_, Scope::All) => true,
            (Scope::All, Scope::Points(_)) => false,
            (Scope::Points(a), Scope::Points(b)) => a.is_subset(b),
        }
    }

    pub fn meet(&self, other: &Scope) -> Scope {
        match (self, other) {
            (Scope::All, s) | (s, Scope::All) => s.clone(),
            (Scope::Points(a), Scope::Points(b)) => Scope::Points(a.intersection(b).cloned().collect()),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Scope::Points(_))
    }

    pub fn finite_points(&self) -> Option<&BTreeSet<Point>> {
        match self {
            Scope::All => None,
            Scope::Points(s) => Some(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Body {
    Whole,
    Local { scope: Scope, lat: Lattice },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Module {
    amb: Arc<Ambient>,
    body: Body,
}

impl Module {
    pub fn whole(amb: &Arc<Ambient>) -> Module {
        Module { amb: amb.clone(), body: Body::Whole }
    }

    /// L·O_U in canonical form (K when U is empty).
    pub fn local(amb: &Arc<Ambient>, scope: Scope, lat: &Lattice) -> Module {
        let body = match &scope {
            Scope::All => Body::Local { scope, lat: lat.clone() },
            Scope::Points(pts) if pts.is_empty() => Body::Whole,
            Scope::Points(pts) => {
                let lat = amb.canon(lat, pts);
                Body::Local { scope, lat }
            }
        };
        Module { amb: amb.clone(), body }
    }

    /// Module over the ring `ring·O_U` generated by the given elements.
    pub fn generated(amb: &Arc<Ambient>, scope: &Scope, ring: &Lattice, gens: &[FieldElem]) -> Result<Module> {
        let basis = ring.basis(amb.tag);
        let mut elems = Vec::with_capacity(gens.len() * basis.len());
        for g in gens {
            for r in &basis {
                elems.push(*g * *r);
            }
        }
        let lat = Lattice::from_elems(amb.tag, &elems)?;
        Ok(Module::local(amb, scope.clone(), &lat))
    }

    pub fn amb(&self) -> &Arc<Ambient> {
        &self.amb
    }

    pub fn is_whole(&self) -> bool {
        matches!(self.body, Body::Whole)
    }

    pub fn scope(&self) -> Option<&Scope> {
        match &self.body {
            Body::Whole => None,
            Body::Local { scope, .. } => Some(scope),
        }
    }

    pub fn lattice(&self) -> Option<&Lattice> {
        match &self.body {
            Body::Whole => None,
            Body::Local { lat, .. } => Some(lat),
        }
    }

    fn same_amb(&self, other: &Module) -> Result<()> {
        if self.amb == other.amb {
            Ok(())
        } else {
            Err(Error::DomainMismatch)
        }
    }

    /// Points that matter for the component data: the scope, or the lattice's support.
    fn active_points(&self, scope: &Scope, lat: &Lattice) -> BTreeSet<Point> {
        match scope {
            Scope::Points(s) => s.clone(),
            Scope::All => self.amb.support(lat).into_iter().collect(),
        }
    }

    pub fn intersect(&self, other: &Module) -> Result<Module> {
        self.same_amb(other)?;
        let (Body::Local { scope: s1, lat: l1 }, Body::Local { scope: s2, lat: l2 }) = (&self.body, &other.body)
        else {
            return Ok(if self.is_whole() { other.clone() } else { self.clone() });
        };
        if let (Scope::All, Scope::All) = (s1, s2) {
            return Ok(Module::local(&self.amb, Scope::All, &l1.intersect(l2)?));
        }
        let mut pts = self.active_points(s1, l1);
        pts.extend(self.active_points(s2, l2));
        let both = l1.intersect(l2)?;
        let comps: Vec<(Point, Lattice)> = pts
            .iter()
            .map(|pt| {
                let c = match (s1.contains(pt), s2.contains(pt)) {
                    (true, true) => both.clone(),
                    (true, false) => l1.clone(),
                    _ => l2.clone(),
                };
                (*pt, c)
            })
            .collect();
        let lat = self.amb.assemble(&comps);
        let scope = match (s1, s2) {
            (Scope::Points(a), Scope::Points(b)) => Scope::Points(a.union(b).cloned().collect()),
            _ => Scope::All,
        };
        Ok(Module { amb: self.amb.clone(), body: Body::Local { scope, lat } })
    }

    pub fn product(&self, other: &Module) -> Result<Module> {
        self.same_amb(other)?;
        match (&self.body, &other.body) {
            (Body::Local { scope: s1, lat: l1 }, Body::Local { scope: s2, lat: l2 }) => {
                Ok(Module::local(&self.amb, s1.meet(s2), &l1.product(self.amb.tag, l2)))
            }
            _ => Ok(Module::whole(&self.amb)),
        }
    }

    /// Sum; defined when one scope refines the other in a way that keeps the class closed.
    pub fn sum(&self, other: &Module) -> Result<Module> {
        self.same_amb(other)?;
        match (&self.body, &other.body) {
            (Body::Local { scope: s1, lat: l1 }, Body::Local { scope: s2, lat: l2 }) => {
                if s1 == s2 {
                    Ok(Module::local(&self.amb, s1.clone(), &l1.sum(l2)))
                } else if self.contains(other)? {
                    Ok(self.clone())
                } else if other.contains(self)? {
                    Ok(other.clone())
                } else {
                    Err(Error::NotRepresentable("sum of modules over incomparable localizations".into()))
                }
            }
            _ => Ok(Module::whole(&self.amb)),
        }
    }

    /// (self : other) = {x : x·other ⊆ self}; `None` is the zero module.
    pub fn colon(&self, other: &Module) -> Result<Option<Module>> {
        self.same_amb(other)?;
        match (&self.body, &other.body) {
            (Body::Whole, _) => Ok(Some(self.clone())),
            (_, Body::Whole) => Ok(None),
            (Body::Local { scope: s1, lat: l1 }, Body::Local { scope: s2, lat: l2 }) => {
                if !s1.is_subset(s2) {
                    return Ok(None);
                }
                let lat = Lattice::colon(self.amb.tag, l1, l2)?;
                Ok(Some(Module::local(&self.amb, s1.clone(), &lat)))
            }
        }
    }

    /// Is `other` ⊆ `self`?
    pub fn contains(&self, other: &Module) -> Result<bool> {
        self.same_amb(other)?;
        Ok(match (&self.body, &other.body) {
            (Body::Whole, _) => true,
            (_, Body::Whole) => false,
            (Body::Local { scope: s1, lat: l1 }, Body::Local { scope: s2, lat: l2 }) => {
                if !s1.is_subset(s2) {
                    false
                } else if s1 == s2 {
                    l1.contains(l2)
                } else {
                    let s = s1.finite_points().expect("strict subset of a scope is finite");
                    l1.contains(&self.amb.canon(l2, s))
                }
            }
        })
    }

    pub fn contains_elem(&self, x: &FieldElem) -> bool {
        if x.is_zero() {
            return true;
        }
        match &self.body {
            Body::Whole => true,
            Body::Local { scope, lat } => {
                let xo = self.amb.base().scale(self.amb.tag, x).expect("nonzero scalar");
                let xo = match scope {
                    Scope::All => xo,
                    Scope::Points(s) => self.amb.canon(&xo, s),
                };
                lat.contains(&xo)
            }
        }
    }

    pub fn scale(&self, x: &FieldElem) -> Result<Module> {
        match &self.body {
            Body::Whole => Ok(self.clone()),
            Body::Local { scope, lat } => Ok(Module::local(&self.amb, scope.clone(), &lat.scale(self.amb.tag, x)?)),
        }
    }

    /// M·O_U for a further set of points U.
    pub fn localize(&self, pts: &Scope) -> Module {
        match &self.body {
            Body::Whole => self.clone(),
            Body::Local { scope, lat } => Module::local(&self.amb, scope.meet(pts), lat),
        }
    }

    /// Human-readable canonical text; the localization points follow the lattice.
    pub fn text(&self) -> String {
        match &self.body {
            Body::Whole => "K".to_string(),
            Body::Local { scope: Scope::All, lat } => lat.text(),
            Body::Local { scope: Scope::Points(s), lat } => {
                let pts: Vec<String> = s.iter().map(|p| format!("[{},{}]", p.p, p.idx)).collect();
                format!("{}; at=[{}]", lat.text(), pts.join(","))
            }
        }
    }
}

impl fmt::Display for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;

    fn setup() -> (Arc<Ambient>, Module) {
        let a = Ambient::quadratic(-1, 3).unwrap();
        let d = Module::local(&a, Scope::All, &a.base());
        (a, d)
    }

    #[test]
    fn localized_ring_and_membership() {
        let (a, d) = setup();
        let q5 = Point { p: 5, idx: 0 };
        let dq = d.localize(&Scope::points([q5]));
        let third = FieldElem::rational(a.tag, Q::new(1, 3));
        assert!(dq.contains_elem(&third));
        assert!(!d.contains_elem(&third));
        assert!(dq.contains(&d).unwrap());
        assert!(!d.contains(&dq).unwrap());
        // a generator of Q5 is a non-unit of D_{Q5}
        let g = FieldElem::ints(a.tag, 1, 3); // generator of Q5 mod 5
        assert!(!dq.contains_elem(&g.inv().unwrap()));
    }

    #[test]
    fn colon_against_smaller_scope_is_zero() {
        let (a, d) = setup();
        let dq = d.localize(&Scope::points([Point { p: 5, idx: 0 }]));
        assert_eq!(d.colon(&dq).unwrap(), None);
        assert_eq!(dq.colon(&d).unwrap(), Some(dq.clone()));
        let _ = a;
    }

    #[test]
    fn intersection_of_two_localizations() {
        let (_a, d) = setup();
        let q5 = Point { p: 5, idx: 0 };
        let q5b = Point { p: 5, idx: 1 };
        let x = d.localize(&Scope::points([q5])).intersect(&d.localize(&Scope::points([q5b]))).unwrap();
        assert_eq!(x, d.localize(&Scope::points([q5, q5b])));
    }
}
