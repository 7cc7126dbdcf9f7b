//! Polynomials over K, contents, and membership in the Nagata ring Na(D,⋆) and the Kronecker
//! ring Kr(D,⋆).

use std::fmt;

use crate::domain::{Domain, Dvr};
use crate::error::{Error, Result};
use crate::field::{parse_elem, FieldElem, FieldTag};
use crate::module::Module;
use crate::semistar::{
    eab_associated_exact, quasi_star_maximals, star_valuation_family, tilde, QuasiMaxStatus, SemistarOp,
    ValuationFamily,
};
use crate::tribool::TriBool;

/// Dense polynomial over K; trailing zero coefficients are trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    tag: FieldTag,
    coeffs: Vec<FieldElem>,
}

impl Poly {
    pub fn new(tag: FieldTag, mut coeffs: Vec<FieldElem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { tag, coeffs }
    }

    pub fn constant(c: FieldElem) -> Poly {
        Poly::new(c.tag, vec![c])
    }

    /// aX + b
    pub fn linear(a: FieldElem, b: FieldElem) -> Poly {
        Poly::new(a.tag, vec![b, a])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn tag(&self) -> FieldTag {
        self.tag
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::new(self.tag, Vec::new());
        }
        let mut c = vec![FieldElem::zero(self.tag); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = c[i + j] + *a * *b;
            }
        }
        Poly::new(self.tag, c)
    }

    pub fn scale(&self, x: &FieldElem) -> Poly {
        Poly::new(self.tag, self.coeffs.iter().map(|c| *c * *x).collect())
    }

    /// Polynomial with the given coefficients in increasing degree, `Σ gᵢ Xⁱ`.
    pub fn from_generators(gens: &[FieldElem]) -> Poly {
        let tag = gens.first().map(|g| g.tag).unwrap_or(FieldTag::Rational);
        Poly::new(tag, gens.to_vec())
    }

    /// Least valuation of a coefficient; `None` for the zero polynomial.
    pub fn min_val(&self, w: &Dvr) -> Option<i64> {
        self.coeffs.iter().filter_map(|c| w.val_elem(c)).min()
    }

    /// `[c0,c1,...]` with each coefficient in element syntax.
    pub fn parse(tag: FieldTag, s: &str) -> Result<Poly> {
        let s = s.trim();
        let inner = s
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("bad polynomial '{s}'")))?;
        let coeffs = split_top_level(inner)
            .into_iter()
            .filter(|p| !p.trim().is_empty())
            .map(|p| parse_elem(tag, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(tag, coeffs))
    }

    pub fn text(&self) -> String {
        let c: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("[{}]", c.join(","))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

/// Splits on commas outside brackets.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// f/g, kept as given.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<RationalFunction> {
        if den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(RationalFunction { num, den })
    }

    /// x = (x·h)/h
    pub fn constant_over(x: &FieldElem, h: &Poly) -> Result<RationalFunction> {
        RationalFunction::new(h.scale(x), h.clone())
    }

    /// `num=[...]; den=[...]`
    pub fn parse(tag: FieldTag, s: &str) -> Result<RationalFunction> {
        let bad = || Error::Parse(format!("bad rational function '{s}'"));
        let (a, b) = s.split_once(';').ok_or_else(bad)?;
        let num = a.trim().strip_prefix("num=").ok_or_else(bad)?;
        let den = b.trim().strip_prefix("den=").ok_or_else(bad)?;
        RationalFunction::new(Poly::parse(tag, num)?, Poly::parse(tag, den)?)
    }

    pub fn text(&self) -> String {
        format!("num={}; den={}", self.num, self.den)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

/// c(f): the D-module generated by the coefficients.
pub fn content(f: &Poly, d: &Domain) -> Result<Module> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let gens: Vec<FieldElem> = f.coeffs.iter().filter(|c| !c.is_zero()).copied().collect();
    d.ideal(&gens)
}

/// Generators of a module over its domain: the lattice basis.
pub fn generators(m: &Module) -> Result<Vec<FieldElem>> {
    let l = m.lattice().ok_or_else(|| Error::NotRepresentable("K has no finite generating set".into()))?;
    Ok(l.basis(m.amb().tag))
}

#[derive(Clone, Debug)]
pub struct DedekindMertens {
    /// least m with c(f)c(g)c(f)^m = c(fg)c(f)^m, searched up to deg(g)+1
    pub m: Option<usize>,
    pub lhs: Module,
    pub rhs: Module,
}

pub fn dedekind_mertens_check(f: &Poly, g: &Poly, d: &Domain) -> Result<DedekindMertens> {
    let (cf, cg, cfg) = (content(f, d)?, content(g, d)?, content(&f.mul(g), d)?);
    let top = g.degree().unwrap_or(0) + 1;
    let mut pow = d.ring().clone();
    let mut last = None;
    for m in 0..=top {
        let lhs = cf.product(&cg)?.product(&pow)?;
        let rhs = cfg.product(&pow)?;
        if lhs == rhs {
            return Ok(DedekindMertens { m: Some(m), lhs, rhs });
        }
        last = Some((lhs, rhs));
        pow = pow.product(&cf)?;
    }
    let (lhs, rhs) = last.expect("at least one round");
    Ok(DedekindMertens { m: None, lhs, rhs })
}

// ---------------------------------------------------------------------------------------------
// Nagata ring

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NaMode {
    /// yes iff c(g)^⋆ = D^⋆, otherwise unknown
    Certified,
    /// exact, through the localizations at the quasi-⋆-maximals
    Local,
}

fn is_star_unit(op: &SemistarOp, c: &Module) -> Result<bool> {
    Ok(op.closure(c)? == op.closure_of_domain()?)
}

/// u ∈ Na(D,⋆)?
pub fn na_membership(op: &SemistarOp, u: &RationalFunction, mode: NaMode) -> Result<TriBool> {
    let d = op.domain();
    if u.num.is_zero() {
        return Ok(TriBool::Yes);
    }
    let (cf, cg) = (content(&u.num, d)?, content(&u.den, d)?);
    match mode {
        NaMode::Certified => {
            require_integral(d, u)?;
            Ok(if is_star_unit(op, &cg)? { TriBool::Yes } else { TriBool::Unknown })
        }
        NaMode::Local => {
            let rep = quasi_star_maximals(op)?;
            if rep.status != QuasiMaxStatus::Enumerated {
                return Err(Error::UnsupportedMode("quasi-⋆-maximals are not enumerated".into()));
            }
            for q in &rep.primes {
                let inside = if d.is_valuation_at(q)? {
                    let w = d.dvr_at(q.point)?;
                    u.num.min_val(&w) >= u.den.min_val(&w)
                } else if !q.under.contains(&cg)? {
                    // g is a unit of D_Q(X): u ∈ D_Q(X) iff c(f)D_Q ⊆ c(g)D_Q = D_Q
                    let dq = d.ring().localize(&crate::module::Scope::points([q.point]));
                    dq.contains(&cf.localize(&crate::module::Scope::points([q.point])))?
                } else {
                    return Err(Error::UnsupportedMode(format!("{} is not a DVR localization", q.label())));
                };
                if !inside {
                    return Ok(TriBool::No);
                }
            }
            Ok(TriBool::Yes)
        }
    }
}

/// f/g with f, g ∈ D[X] is a unit of Na(D,⋆) iff c(f)^⋆ = c(g)^⋆ = D^⋆.
pub fn na_unit(op: &SemistarOp, u: &RationalFunction) -> Result<TriBool> {
    if u.num.is_zero() {
        return Ok(TriBool::No);
    }
    let d = op.domain();
    require_integral(d, u)?;
    let (cf, cg) = (content(&u.num, d)?, content(&u.den, d)?);
    Ok(TriBool::from_bool(is_star_unit(op, &cf)? && is_star_unit(op, &cg)?))
}

fn require_integral(d: &Domain, u: &RationalFunction) -> Result<()> {
    let ok = u.num.coeffs().iter().chain(u.den.coeffs()).all(|c| d.ring().contains_elem(c));
    if ok {
        Ok(())
    } else {
        Err(Error::PreconditionNotMet("numerator and denominator must lie in D[X]".into()))
    }
}

/// E·Na(D,⋆) ∩ K = E^⋆̃.
pub fn na_extension_contraction(op: &SemistarOp, e: &Module) -> Result<Module> {
    tilde(op)?.closure(e)
}

/// x ∈ E·Na(D,⋆) by the polynomial route: with J = (E :_D x) and h = Σ jᵢXⁱ over generators of
/// J, x·h ∈ E[X], so x = (xh)/h lies in E·Na exactly when h ∈ N(⋆), i.e. c(h)^⋆ = D^⋆.
pub fn na_contraction_member(op: &SemistarOp, e: &Module, x: &FieldElem) -> Result<bool> {
    if x.is_zero() {
        return Ok(true);
    }
    let d = op.domain();
    let j = crate::semistar::colon_in_domain(d, e, x)?;
    let h = Poly::from_generators(&generators(&j)?);
    let u = RationalFunction::constant_over(x, &h)?;
    let xe_ok = u.num.coeffs().iter().all(|c| e.contains_elem(c));
    debug_assert!(xe_ok);
    Ok(xe_ok && is_star_unit(op, &content(&u.den, d)?)?)
}

// ---------------------------------------------------------------------------------------------
// Kronecker ring

#[derive(Clone, Copy, Debug)]
pub enum KrMode<'a> {
    ValuationExact,
    /// contents of the auxiliary h range over {D} ∪ pool
    BoundedH(&'a [Module]),
}

/// u ∈ Kr(D,⋆)?
pub fn kr_membership(op: &SemistarOp, u: &RationalFunction, mode: KrMode<'_>) -> Result<TriBool> {
    let d = op.domain();
    if u.num.is_zero() {
        return Ok(TriBool::Yes);
    }
    match mode {
        KrMode::ValuationExact => match star_valuation_family(op)? {
            ValuationFamily::Finite(ws) => {
                Ok(TriBool::from_bool(ws.iter().all(|w| u.num.min_val(w) >= u.den.min_val(w))))
            }
            ValuationFamily::AllOf { closure_ring } => {
                let cf = content(&u.num, d)?.product(&closure_ring)?;
                let cg = content(&u.den, d)?.product(&closure_ring)?;
                Ok(TriBool::from_bool(cg.contains(&cf)?))
            }
        },
        KrMode::BoundedH(pool) => {
            let (cf, cg) = (content(&u.num, d)?, content(&u.den, d)?);
            for h in std::iter::once(d.ring()).chain(pool.iter()) {
                let a = op.closure(&cf.product(h)?)?;
                let b = op.closure(&cg.product(h)?)?;
                if b.contains(&a)? {
                    return Ok(TriBool::Yes);
                }
            }
            Ok(TriBool::Unknown)
        }
    }
}

#[derive(Clone, Debug)]
pub enum ProbeOutcome {
    Agree,
    Witness { u: RationalFunction, na: TriBool, kr: TriBool },
}

#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub outcome: ProbeOutcome,
    pub samples: usize,
    /// samples where one side was unknown
    pub unknown: usize,
}

/// Na(D,⋆₁) against Kr(D,⋆₂) on samples.
pub fn na_eq_kr_probe(op_na: &SemistarOp, op_kr: &SemistarOp, samples: &[RationalFunction]) -> Result<ProbeReport> {
    if samples.is_empty() {
        return Err(Error::EmptyPool);
    }
    let mut unknown = 0;
    for u in samples {
        let na = match na_membership(op_na, u, NaMode::Local) {
            Ok(t) => t,
            Err(Error::UnsupportedMode(_)) => na_membership(op_na, u, NaMode::Certified)?,
            Err(e) => return Err(e),
        };
        let kr = kr_membership(op_kr, u, KrMode::ValuationExact)?;
        match (na, kr) {
            (TriBool::Unknown, _) | (_, TriBool::Unknown) => unknown += 1,
            (a, b) if a != b => {
                return Ok(ProbeReport {
                    outcome: ProbeOutcome::Witness { u: u.clone(), na, kr },
                    samples: samples.len(),
                    unknown,
                })
            }
            _ => {}
        }
    }
    Ok(ProbeReport { outcome: ProbeOutcome::Agree, samples: samples.len(), unknown })
}

#[derive(Clone, Debug)]
pub struct PrincipalGeneration {
    /// f with coefficients the generators of F
    pub f: Poly,
    /// F^⋆ₐ
    pub eab_closure: Module,
    /// x with x ∈ F·Kr ∩ K differing from x ∈ F^⋆ₐ
    pub mismatches: Vec<FieldElem>,
    pub samples: usize,
}

/// F·Kr(D,⋆) = f·Kr(D,⋆) and F·Kr ∩ K = F^⋆ₐ, checked pointwise on samples x ∈ K.
pub fn kr_principal_generation_check(op: &SemistarOp, big_f: &Module, xs: &[FieldElem]) -> Result<PrincipalGeneration> {
    let f = Poly::from_generators(&generators(big_f)?);
    let a = eab_associated_exact(op).map_err(|e| match e {
        Error::NotEab => Error::NoValuationFamily,
        e => e,
    })?;
    let eab_closure = a.closure(big_f)?;
    let mut mismatches = Vec::new();
    for x in xs {
        // x ∈ f·Kr iff x/f ∈ Kr
        let u = RationalFunction::new(Poly::constant(*x), f.clone())?;
        let in_kr = kr_membership(op, &u, KrMode::ValuationExact)?.is_yes();
        if in_kr != eab_closure.contains_elem(x) {
            mismatches.push(*x);
        }
    }
    Ok(PrincipalGeneration { f, eab_closure, mismatches, samples: xs.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;

    fn int(k: FieldTag, a: i128) -> FieldElem {
        FieldElem::int(k, a)
    }

    fn p(k: FieldTag, cs: &[i128]) -> Poly {
        Poly::new(k, cs.iter().map(|&c| int(k, c)).collect())
    }

    #[test]
    fn contents() {
        let z = Domain::integers();
        let k = z.tag();
        assert_eq!(content(&p(k, &[3, 2]), &z).unwrap(), *z.ring());
        assert_eq!(content(&p(k, &[4, 2]), &z).unwrap(), z.principal(&int(k, 2)).unwrap());
        let d = Domain::quadratic_order(-1, 3).unwrap();
        let f = Poly::linear(int(d.tag(), 3), FieldElem::ints(d.tag(), 0, 3));
        assert_eq!(content(&f, &d).unwrap(), d.primes_above(3).unwrap()[0].under);
        assert!(matches!(content(&Poly::new(k, vec![]), &z), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn dedekind_mertens() {
        let z = Domain::integers();
        let k = z.tag();
        let r = dedekind_mertens_check(&p(k, &[1, 1]), &p(k, &[-1, 1]), &z).unwrap();
        assert_eq!(r.m, Some(0));
        let r = dedekind_mertens_check(&p(k, &[3, 2]), &p(k, &[2, 3]), &z).unwrap();
        assert!(r.m.is_some_and(|m| m <= 2));
        let d = Domain::quadratic_order(-1, 3).unwrap();
        let kd = d.tag();
        let f = Poly::linear(int(kd, 3), FieldElem::ints(kd, 0, 3));
        let g = Poly::linear(FieldElem::ints(kd, 0, 3), int(kd, 3));
        assert!(dedekind_mertens_check(&f, &g, &d).unwrap().m.is_some());
    }

    #[test]
    fn nagata_on_semilocal_integers() {
        let zs = Domain::localized_integers(&[2, 3]).unwrap();
        let k = zs.tag();
        let d = SemistarOp::identity(&zs).unwrap();
        let u = RationalFunction::new(p(k, &[1, 1]), p(k, &[0, 1])).unwrap();
        assert_eq!(na_membership(&d, &u, NaMode::Local).unwrap(), TriBool::Yes);
        let u = RationalFunction::new(p(k, &[0, 1]), p(k, &[2])).unwrap();
        assert_eq!(na_membership(&d, &u, NaMode::Local).unwrap(), TriBool::No);
        let u = RationalFunction::new(p(k, &[5, 0, 7]), p(k, &[1])).unwrap();
        assert_eq!(na_membership(&d, &u, NaMode::Certified).unwrap(), TriBool::Yes);
    }

    #[test]
    fn kronecker_for_b_on_integers() {
        let z = Domain::integers();
        let k = z.tag();
        let b = SemistarOp::b(&z).unwrap();
        let u = RationalFunction::new(p(k, &[2]), p(k, &[0, 1])).unwrap();
        assert_eq!(kr_membership(&b, &u, KrMode::ValuationExact).unwrap(), TriBool::Yes);
        let u = RationalFunction::new(p(k, &[0, 1]), p(k, &[2])).unwrap();
        assert_eq!(kr_membership(&b, &u, KrMode::ValuationExact).unwrap(), TriBool::No);
        let f = p(k, &[3, 0, 5]);
        let u = RationalFunction::new(f.clone(), f).unwrap();
        assert_eq!(kr_membership(&b, &u, KrMode::ValuationExact).unwrap(), TriBool::Yes);
        // F = (4,6) generates 2ℤ = F^b
        let big_f = z.ideal(&[int(k, 4), int(k, 6)]).unwrap();
        let xs = crate::sample::elem_pool(k, 50, 3);
        let r = kr_principal_generation_check(&b, &big_f, &xs).unwrap();
        assert!(r.mismatches.is_empty());
        assert_eq!(r.eab_closure, z.principal(&int(k, 2)).unwrap());
    }

    #[test]
    fn contraction_route_matches_tilde() {
        let d = Domain::quadratic_order(-1, 3).unwrap();
        let q5 = d.primes_above(5).unwrap()[0].clone();
        let s = SemistarOp::spectral(&d, &[q5]).unwrap();
        let p3 = d.primes_above(3).unwrap()[0].under.clone();
        let c = na_extension_contraction(&s, &p3).unwrap();
        assert_eq!(c, s.closure(&p3).unwrap());
        for x in crate::sample::elem_pool(d.tag(), 40, 11) {
            assert_eq!(na_contraction_member(&s, &p3, &x).unwrap(), c.contains_elem(&x), "x = {x}");
        }
        let _ = Q::from_integer(1);
    }

    #[test]
    fn parse_roundtrip() {
        let k = FieldTag::quadratic(-1).unwrap();
        let u = RationalFunction::parse(k, "num=[[1,3],2]; den=[1/2]").unwrap();
        assert_eq!(RationalFunction::parse(k, &u.text()).unwrap(), u);
    }
}
