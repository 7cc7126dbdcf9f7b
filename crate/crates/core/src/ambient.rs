//! The ambient order O of a field and its local data: primes, local parts of lattices,
//! valuations at regular primes, supports.
//!
//! Every module handled by the crate is an O-lattice localized at a set of primes of O, so all
//! local questions reduce to the primes listed here.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{prime_factors, vp, FieldElem, FieldTag, Q};
use crate::lattice::Lattice;

/// A maximal ideal of the ambient order: index `idx` in the sorted list of primes above `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub p: i128,
    pub idx: usize,
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.p, self.idx)
    }
}

/// How a rational prime behaves in an order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Splitting {
    Split,
    Ramified,
    Inert,
    /// p divides the conductor: one prime, local ring not a DVR.
    Singular,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderPrime {
    pub p: i128,
    pub lattice: Lattice,
    pub splitting: Splitting,
}

#[derive(Debug, PartialEq, Eq, Hash, Clone)]
pub struct Ambient {
    pub tag: FieldTag,
    /// Conductor of the ambient order.
    pub f0: i128,
}

impl Ambient {
    pub fn rational() -> Arc<Ambient> {
        Arc::new(Ambient { tag: FieldTag::Rational, f0: 1 })
    }

    pub fn quadratic(d: i64, f0: i128) -> Result<Arc<Ambient>> {
        if f0 < 1 {
            return Err(Error::BadSpec(format!("conductor {f0} < 1")));
        }
        Ok(Arc::new(Ambient { tag: FieldTag::quadratic(d)?, f0 }))
    }

    fn d(&self) -> i128 {
        self.tag.d().unwrap_or(0) as i128
    }

    fn d_is_1mod4(&self) -> bool {
        self.d().rem_euclid(4) == 1
    }

    /// Generator f·ω of the order of conductor f (1 over ℚ).
    pub fn order_gen(&self, f: i128) -> FieldElem {
        match self.tag {
            FieldTag::Rational => FieldElem::one(self.tag),
            FieldTag::Quadratic(_) => {
                let fq = Q::from_integer(f);
                if self.d_is_1mod4() {
                    FieldElem::new(self.tag, fq / 2, fq / 2).unwrap()
                } else {
                    FieldElem::new(self.tag, Q::zero(), fq).unwrap()
                }
            }
        }
    }

    /// ℤ-lattice of the order of conductor f.
    pub fn order(&self, f: i128) -> Lattice {
        let one = FieldElem::one(self.tag);
        match self.tag {
            FieldTag::Rational => Lattice::from_elems(self.tag, &[one]).unwrap(),
            FieldTag::Quadratic(_) => Lattice::from_elems(self.tag, &[one, self.order_gen(f)]).unwrap(),
        }
    }

    /// The ambient order O itself.
    pub fn base(&self) -> Lattice {
        self.order(self.f0)
    }

    /// Primes of the order of conductor f above p, sorted canonically.
    pub fn order_primes(&self, f: i128, p: i128) -> Vec<OrderPrime> {
        let o = self.order(f);
        if self.tag == FieldTag::Rational {
            let lat = Lattice::from_vectors(1, 1, &[[p, 0]]).unwrap();
            return vec![OrderPrime { p, lattice: lat, splitting: Splitting::Split }];
        }
        let w = self.order_gen(f);
        let tr = w.trace();
        let nm = w.norm();
        // w² − tr·w + nm = 0 with tr, nm integers
        let (t, n) = (tr.to_integer(), nm.to_integer());
        let roots: Vec<i128> =
            (0..p).filter(|r| (r * r - t * r + n).rem_euclid(p) == 0).collect();
        let one = FieldElem::one(self.tag);
        let pe = FieldElem::int(self.tag, p);
        let mut out: Vec<OrderPrime> = if roots.is_empty() {
            let lat = o.scale_q(Q::from_integer(p)).unwrap();
            vec![OrderPrime { p, lattice: lat, splitting: Splitting::Inert }]
        } else {
            roots
                .iter()
                .map(|&r| {
                    let g = w - FieldElem::int(self.tag, r);
                    let lat = Lattice::from_elems(self.tag, &[pe, pe * w, g * one, g * w]).unwrap();
                    OrderPrime { p, lattice: lat, splitting: Splitting::Split }
                })
                .collect()
        };
        if out.len() == 1 && !roots.is_empty() {
            out[0].splitting = if f % p == 0 { Splitting::Singular } else { Splitting::Ramified };
        }
        out.sort_by(|a, b| a.lattice.cmp(&b.lattice));
        out
    }

    pub fn primes(&self, p: i128) -> Vec<OrderPrime> {
        self.order_primes(self.f0, p)
    }

    pub fn points_above(&self, p: i128) -> Vec<Point> {
        (0..self.primes(p).len()).map(|idx| Point { p, idx }).collect()
    }

    pub fn prime(&self, pt: Point) -> Result<OrderPrime> {
        self.primes(pt.p)
            .into_iter()
            .nth(pt.idx)
            .ok_or_else(|| Error::BadSpec(format!("no prime with index {} above {}", pt.idx, pt.p)))
    }

    /// Is the local ring of O at this point a DVR?
    pub fn is_regular(&self, pt: Point) -> bool {
        self.f0 % pt.p != 0
    }

    /// The point of O lying under a prime of an intermediate order.
    pub fn point_under(&self, prime_lattice: &Lattice, p: i128) -> Result<Point> {
        let contracted = prime_lattice.intersect(&self.base())?;
        self.primes(p)
            .iter()
            .position(|q| q.lattice == contracted)
            .map(|idx| Point { p, idx })
            .ok_or_else(|| Error::NotRepresentable("contraction is not an ambient prime".into()))
    }

    /// Integer c with c·L ⊆ O.
    fn clearing(&self, l: &Lattice) -> i128 {
        l.den() * self.f0
    }

    /// Index [O : L] for L ⊆ O of full rank.
    fn index_in_base(&self, l: &Lattice) -> i128 {
        let q = l.covolume() / self.base().covolume();
        assert!(q.is_integer(), "lattice not inside the ambient order");
        q.to_integer()
    }

    /// Lattice with the same component as L at p and trivial components elsewhere.
    pub fn part_p(&self, l: &Lattice, p: i128) -> Lattice {
        let c = self.clearing(l);
        let cl = l.scale_q(Q::from_integer(c)).unwrap();
        let a = vp(self.index_in_base(&cl), p) as u32;
        let m = cl.sum(&self.base().scale_q(Q::from_integer(p.pow(a))).unwrap());
        m.scale_q(Q::new(1, p.pow(vp(c, p) as u32))).unwrap()
    }

    /// Positive or negative power of a regular prime.
    pub fn prime_power(&self, pt: Point, k: i64) -> Result<Lattice> {
        let o = self.base();
        let pl = self.prime(pt)?.lattice;
        let step = if k >= 0 { pl } else { Lattice::colon(self.tag, &o, &pl)? };
        let mut acc = o;
        for _ in 0..k.unsigned_abs() {
            acc = acc.product(self.tag, &step);
        }
        Ok(acc)
    }

    /// Valuation of a lattice at a regular point.
    pub fn val(&self, l: &Lattice, pt: Point) -> i64 {
        assert!(self.is_regular(pt), "valuation at a singular point");
        let op = self.prime(pt).unwrap();
        let e = if op.splitting == Splitting::Ramified { 2 } else { 1 };
        let c = self.clearing(l);
        let cl = l.scale_q(Q::from_integer(c)).unwrap();
        let mut k = 0i64;
        let mut pow = self.base();
        loop {
            let next = pow.product(self.tag, &op.lattice);
            if next.contains(&cl) {
                k += 1;
                pow = next;
            } else {
                break;
            }
        }
        k - e * vp(c, pt.p)
    }

    /// Lattice agreeing with L at `pt` and with O at every other point.
    pub fn part(&self, l: &Lattice, pt: Point) -> Lattice {
        let split = self.is_regular(pt)
            && self.tag != FieldTag::Rational
            && self.primes(pt.p).len() == 2;
        if split {
            self.prime_power(pt, self.val(l, pt)).unwrap()
        } else {
            self.part_p(l, pt.p)
        }
    }

    /// Points where L differs from O.
    pub fn support(&self, l: &Lattice) -> Vec<Point> {
        let o = self.base();
        let c = self.clearing(l);
        let cl = l.scale_q(Q::from_integer(c)).unwrap();
        let n = self.index_in_base(&cl);
        let mut out = Vec::new();
        for p in prime_factors(c * n) {
            for pt in self.points_above(p) {
                if self.part(l, pt) != o {
                    out.push(pt);
                }
            }
        }
        out
    }

    /// Canonical representative of L·O_U for a finite set U of points.
    pub fn canon(&self, l: &Lattice, pts: &BTreeSet<Point>) -> Lattice {
        let mut zs: Vec<(i128, Lattice)> = Vec::new();
        for pt in pts {
            if zs.last().is_some_and(|(p, _)| *p == pt.p) {
                continue;
            }
            let all_above = self.points_above(pt.p).iter().all(|q| pts.contains(q));
            let z = if all_above { self.part_p(l, pt.p) } else { self.part(l, *pt) };
            zs.push((pt.p, z));
        }
        self.glue(&zs)
    }

    /// Canonical lattice with prescribed components: `comps` maps points to lattices whose
    /// component there is wanted; the result is O everywhere else.
    pub fn assemble(&self, comps: &[(Point, Lattice)]) -> Lattice {
        let mut by_p: Vec<(i128, Lattice)> = Vec::new();
        for (pt, l) in comps {
            let z = self.part(l, *pt);
            match by_p.iter_mut().find(|(p, _)| *p == pt.p) {
                // two points over a split prime: the components multiply
                Some((_, acc)) => *acc = acc.product(self.tag, &z),
                None => by_p.push((pt.p, z)),
            }
        }
        self.glue(&by_p)
    }

    /// Lattice agreeing with each Z_p at p (the Z_p differ from O only at p, primes distinct)
    /// and with O at every other prime.
    fn glue(&self, zs: &[(i128, Lattice)]) -> Lattice {
        let o = self.base();
        let mut acc = o.clone();
        let mut c = Q::from_integer(1);
        for (p, z) in zs {
            let k = vp(self.clearing(z), *p) as u32;
            let pk = Q::from_integer(p.pow(k));
            let w = z.scale_q(pk).unwrap();
            debug_assert!(o.contains(&w));
            acc = acc.intersect(&w).unwrap();
            c *= pk;
        }
        acc.scale_q(c.recip()).unwrap()
    }

    pub fn contains_conductor(&self, pt: Point) -> bool {
        !self.is_regular(pt)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::one(self.tag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z3i() -> Arc<Ambient> {
        Ambient::quadratic(-1, 3).unwrap()
    }

    #[test]
    fn order_lattices() {
        let a = z3i();
        assert_eq!(a.base().text(), "den=1; basis=[[1,0],[0,3]]");
        let g = Ambient::quadratic(5, 1).unwrap();
        assert_eq!(g.base().text(), "den=2; basis=[[2,0],[1,1]]");
    }

    #[test]
    fn primes_of_z3i() {
        let a = z3i();
        let p3 = a.primes(3);
        assert_eq!(p3.len(), 1);
        assert_eq!(p3[0].splitting, Splitting::Singular);
        assert_eq!(p3[0].lattice.text(), "den=1; basis=[[3,0],[0,3]]");
        let p5 = a.primes(5);
        let texts: Vec<String> = p5.iter().map(|q| q.lattice.text()).collect();
        assert_eq!(texts, vec!["den=1; basis=[[5,0],[1,3]]", "den=1; basis=[[5,0],[4,3]]"]);
        assert_eq!(a.primes(7)[0].splitting, Splitting::Inert);
        assert_eq!(Ambient::quadratic(-1, 1).unwrap().primes(2)[0].splitting, Splitting::Ramified);
    }

    #[test]
    fn parts_and_valuations() {
        let a = Ambient::quadratic(-1, 1).unwrap();
        let k = a.tag;
        // (2+i)²·3 has valuation 2 at one prime above 5, 0 at the other.
        let x = FieldElem::ints(k, 2, 1);
        let l = a.base().scale(k, &(x * x * FieldElem::int(k, 3))).unwrap();
        let pts = a.points_above(5);
        let vals: Vec<i64> = pts.iter().map(|pt| a.val(&l, *pt)).collect();
        assert_eq!(vals.iter().sum::<i64>(), 2);
        assert!(vals.contains(&2));
        let sup = a.support(&l);
        assert_eq!(sup.len(), 2); // the 5-prime and the inert 3
        let canon = a.canon(&l, &[Point { p: 3, idx: 0 }].into_iter().collect());
        assert_eq!(canon, a.base().scale_q(Q::from_integer(3)).unwrap());
    }
}
