//! Seeded sample pools: ideals, pairs, triples, elements and rational functions. Structural
//! samples (the domain, its small primes, conductor ideals) always come first.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::Domain;
use crate::error::Result;
use crate::field::{FieldElem, FieldTag, Q};
use crate::function_rings::{Poly, RationalFunction};
use crate::module::Module;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    pub pool_size: usize,
    pub prime_bound: i64,
    pub degree_bound: usize,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig { seed: 0, pool_size: 200, prime_bound: 97, degree_bound: 8 }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small primes that seed the structural part of every pool.
const SMALL: [i128; 4] = [2, 3, 5, 7];

/// The domain, its primes over small p and over the conductor, their squares and pairwise
/// products, and a few scalings.
pub fn structural_ideals(d: &Domain) -> Result<Vec<Module>> {
    let k = d.tag();
    let mut primes = Vec::new();
    for p in SMALL {
        if p <= d.prime_bound() {
            primes.extend(d.primes_above(p)?);
        }
    }
    primes.sort_by_key(|q| (!q.contains_conductor, q.p, q.index));
    let mut out = vec![d.ring().clone()];
    for q in &primes {
        out.push(q.under.clone());
    }
    for (i, a) in primes.iter().enumerate() {
        for b in &primes[i..] {
            out.push(a.under.product(&b.under)?);
        }
    }
    for q in [Q::from_integer(2), Q::from_integer(3), Q::new(1, 2), Q::new(1, 3), Q::new(2, 3)] {
        out.push(d.ring().scale(&FieldElem::rational(k, q))?);
    }
    if let Some(q) = primes.first() {
        out.push(q.under.scale(&FieldElem::rational(k, Q::new(1, q.p)))?);
    }
    dedup(&mut out);
    Ok(out)
}

fn dedup(v: &mut Vec<Module>) {
    let mut seen = std::collections::HashSet::new();
    v.retain(|m| seen.insert(m.clone()));
}

/// A random nonzero element of K with small coordinates.
pub fn random_elem<R: Rng>(rng: &mut R, tag: FieldTag, bound: i128) -> FieldElem {
    const DENS: [i128; 6] = [1, 1, 1, 2, 3, 6];
    loop {
        let den = *DENS.choose(rng).expect("nonempty");
        let a = Q::new(rng.gen_range(-bound..=bound), den);
        let b = match tag {
            FieldTag::Rational => Q::from_integer(0),
            FieldTag::Quadratic(_) => Q::new(rng.gen_range(-bound..=bound), den),
        };
        let x = FieldElem::new(tag, a, b).expect("coordinates match the tag");
        if !x.is_zero() {
            return x;
        }
    }
}

/// A random nonzero element of the order of D (not of its localization).
pub fn random_integral<R: Rng>(rng: &mut R, d: &Domain, bound: i128) -> FieldElem {
    let g = d.amb().order_gen(d.conductor());
    loop {
        let a = FieldElem::int(d.tag(), rng.gen_range(-bound..=bound));
        let x = match d.tag() {
            FieldTag::Rational => a,
            FieldTag::Quadratic(_) => a + g * FieldElem::int(d.tag(), rng.gen_range(-bound..=bound)),
        };
        if !x.is_zero() {
            return x;
        }
    }
}

/// `n` ideals: the structural ones, then random ideals on one to three generators.
pub fn ideal_pool(d: &Domain, n: usize, seed: u64) -> Result<Vec<Module>> {
    let mut out = structural_ideals(d)?;
    let mut r = rng(seed);
    while out.len() < n {
        let k = r.gen_range(1..=3);
        let gens: Vec<FieldElem> = (0..k).map(|_| random_elem(&mut r, d.tag(), 9)).collect();
        out.push(d.ideal(&gens)?);
    }
    out.truncate(n);
    Ok(out)
}

pub fn pair_pool(pool: &[Module], n: usize, seed: u64) -> Vec<(Module, Module)> {
    if pool.is_empty() {
        return Vec::new();
    }
    let mut r = rng(seed ^ 0x5eed_0002);
    let s = pool.len().min(8);
    let mut out: Vec<(Module, Module)> = Vec::new();
    for i in 0..s {
        for j in i + 1..s {
            out.push((pool[i].clone(), pool[j].clone()));
        }
    }
    while out.len() < n {
        let a = pool.choose(&mut r).expect("nonempty").clone();
        let b = pool.choose(&mut r).expect("nonempty").clone();
        out.push((a, b));
    }
    out.truncate(n);
    out
}

/// Triples for cancellation tests: (P, P, pD) for each conductor prime P first.
pub fn triple_pool(d: &Domain, pool: &[Module], n: usize, seed: u64) -> Result<Vec<(Module, Module, Module)>> {
    let mut out = Vec::new();
    for q in d.conductor_primes()? {
        let pd = d.ring().scale(&FieldElem::int(d.tag(), q.p))?;
        out.push((q.under.clone(), q.under.clone(), pd));
    }
    if pool.is_empty() {
        return Ok(out);
    }
    let mut r = rng(seed ^ 0x5eed_0003);
    while out.len() < n {
        let pick = |r: &mut ChaCha8Rng| pool.choose(r).expect("nonempty").clone();
        let t = (pick(&mut r), pick(&mut r), pick(&mut r));
        out.push(t);
    }
    out.truncate(n.max(1));
    Ok(out)
}

/// `n` nonzero elements of K.
pub fn elem_pool(tag: FieldTag, n: usize, seed: u64) -> Vec<FieldElem> {
    let mut r = rng(seed ^ 0x5eed_0004);
    (0..n).map(|_| random_elem(&mut r, tag, 12)).collect()
}

fn random_poly<R: Rng>(r: &mut R, d: &Domain, max_deg: usize) -> Poly {
    loop {
        let deg = r.gen_range(0..=max_deg);
        let coeffs: Vec<FieldElem> = (0..=deg)
            .map(|_| if r.gen_bool(0.2) { FieldElem::zero(d.tag()) } else { random_integral(r, d, 12) })
            .collect();
        let p = Poly::new(d.tag(), coeffs);
        if !p.is_zero() {
            return p;
        }
    }
}

/// `n` quotients of nonzero polynomials over the order of D, of degree at most `max_deg`.
pub fn rational_function_pool(d: &Domain, n: usize, max_deg: usize, seed: u64) -> Vec<RationalFunction> {
    let mut r = rng(seed ^ 0x5eed_0005);
    (0..n)
        .map(|_| {
            let num = random_poly(&mut r, d, max_deg);
            let den = random_poly(&mut r, d, max_deg);
            RationalFunction::new(num, den).expect("denominator is nonzero")
        })
        .collect()
}

/// `n` pairs (a, b) of nonzero elements of the order of D.
pub fn linear_pairs(d: &Domain, n: usize, seed: u64) -> Vec<(FieldElem, FieldElem)> {
    let mut r = rng(seed ^ 0x5eed_0006);
    (0..n).map(|_| (random_integral(&mut r, d, 30), random_integral(&mut r, d, 30))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pools_are_deterministic_and_structural_first() {
        let d = Domain::quadratic_order(-1, 3).unwrap();
        let a = ideal_pool(&d, 40, 7).unwrap();
        let b = ideal_pool(&d, 40, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[0], *d.ring());
        assert_eq!(a[1], d.primes_above(3).unwrap()[0].under);
        let t = triple_pool(&d, &a, 10, 7).unwrap();
        assert_eq!(t[0].0, a[1]);
    }
}
