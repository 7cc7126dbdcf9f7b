//! Integer lattices in ℚ or ℚ(√d) with a common denominator, in canonical Hermite normal form.
//!
//! A full-rank lattice in the plane is stored as `(1/den)·span{(a,0), (b,c)}` with
//! `a, c > 0`, `0 ≤ b < a` and `gcd(den, a, b, c) = 1`. Over ℚ it is `(1/den)·aℤ`.

use std::fmt;

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::{parse_q, FieldElem, FieldTag, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice {
    den: i128,
    rows: Vec<[i128; 2]>,
    dim: u8,
}

fn mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("integer overflow in lattice arithmetic")
}

fn sub_mul(x: i128, q: i128, y: i128) -> i128 {
    x.checked_sub(mul(q, y)).expect("integer overflow in lattice arithmetic")
}

/// Row echelon form over ℤ: pivots strictly move right, pivot entries positive.
fn echelon(mut m: Vec<Vec<i128>>, ncols: usize) -> Vec<Vec<i128>> {
    let mut r = 0;
    for col in 0..ncols {
        if r >= m.len() {
            break;
        }
        loop {
            let pivot = (r..m.len())
                .filter(|&i| m[i][col] != 0)
                .min_by_key(|&i| m[i][col].abs());
            let Some(pi) = pivot else { break };
            m.swap(r, pi);
            let mut done = true;
            for j in r + 1..m.len() {
                if m[j][col] != 0 {
                    let q = Integer::div_floor(&m[j][col], &m[r][col]);
                    let (head, tail) = m.split_at_mut(j);
                    let pr = &head[r];
                    for (c, v) in tail[0].iter_mut().enumerate() {
                        *v = sub_mul(*v, q, pr[c]);
                    }
                    if m[j][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r < m.len() && m[r][col] != 0 {
            if m[r][col] < 0 {
                for v in m[r].iter_mut() {
                    *v = -*v;
                }
            }
            r += 1;
        }
    }
    m.retain(|row| row.iter().any(|v| *v != 0));
    m
}

impl Lattice {
    /// Canonical lattice spanned by `vectors / den`. Errors on the zero module.
    pub fn from_vectors(dim: usize, den: i128, vectors: &[[i128; 2]]) -> Result<Lattice> {
        assert!(dim == 1 || dim == 2);
        assert!(den != 0, "zero denominator");
        let sign = den.signum();
        // Echelon on (second, first) coordinates gives the lower triangular shape.
        let m: Vec<Vec<i128>> = vectors
            .iter()
            .map(|v| vec![if dim == 1 { 0 } else { v[1] * sign }, v[0] * sign])
            .collect();
        let e = echelon(m, 2);
        let rows: Vec<[i128; 2]> = match e.as_slice() {
            [] => return Err(Error::ZeroModule),
            [r0] if r0[0] == 0 => vec![[r0[1], 0]],
            [r0] => vec![[r0[1], r0[0]]],
            [r0, r1] => {
                let a = r1[1];
                vec![[a, 0], [r0[1].rem_euclid(a), r0[0]]]
            }
            _ => unreachable!("rank exceeds two"),
        };
        let mut l = Lattice { den: den.abs(), rows, dim: dim as u8 };
        l.reduce();
        Ok(l)
    }

    fn reduce(&mut self) {
        let mut g = self.den;
        for r in &self.rows {
            g = g.gcd(&r[0]).gcd(&r[1]);
        }
        if g > 1 {
            self.den /= g;
            for r in self.rows.iter_mut() {
                r[0] /= g;
                r[1] /= g;
            }
        }
    }

    /// Lattice spanned by the given field elements.
    pub fn from_elems(tag: FieldTag, elems: &[FieldElem]) -> Result<Lattice> {
        let den = elems.iter().fold(1i128, |acc, e| acc.lcm(&e.denom()));
        let vecs: Vec<[i128; 2]> = elems
            .iter()
            .map(|e| {
                let a = e.a * Q::from_integer(den);
                let b = e.b * Q::from_integer(den);
                [a.to_integer(), b.to_integer()]
            })
            .collect();
        Lattice::from_vectors(tag.dim(), den, &vecs)
    }

    pub fn den(&self) -> i128 {
        self.den
    }

    pub fn rows(&self) -> &[[i128; 2]] {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim()
    }

    pub fn basis(&self, tag: FieldTag) -> Vec<FieldElem> {
        self.rows
            .iter()
            .map(|r| {
                FieldElem::new(tag, Q::new(r[0], self.den), Q::new(r[1], self.den))
                    .expect("lattice coordinates match the field")
            })
            .collect()
    }

    /// Covolume of a full-rank lattice.
    pub fn covolume(&self) -> Q {
        assert!(self.is_full_rank(), "covolume of a degenerate lattice");
        let mut v = Q::from_integer(1);
        for (i, r) in self.rows.iter().enumerate() {
            v *= Q::new(r[i], self.den);
        }
        v
    }

    /// The same lattice multiplied by a rational scalar.
    pub fn scale_q(&self, q: Q) -> Result<Lattice> {
        if q.is_zero() {
            return Err(Error::ZeroModule);
        }
        let vecs: Vec<[i128; 2]> =
            self.rows.iter().map(|r| [mul(r[0], *q.numer()), mul(r[1], *q.numer())]).collect();
        Lattice::from_vectors(self.dim(), mul(self.den, *q.denom()), &vecs)
    }

    /// x·L for a field element x.
    pub fn scale(&self, tag: FieldTag, x: &FieldElem) -> Result<Lattice> {
        if x.is_zero() {
            return Err(Error::ZeroModule);
        }
        let elems: Vec<FieldElem> = self.basis(tag).into_iter().map(|e| e * *x).collect();
        Lattice::from_elems(tag, &elems)
    }

    fn common(&self, other: &Lattice) -> (i128, Vec<[i128; 2]>, Vec<[i128; 2]>) {
        let den = self.den.lcm(&other.den);
        let s = den / self.den;
        let t = den / other.den;
        let a = self.rows.iter().map(|r| [mul(r[0], s), mul(r[1], s)]).collect();
        let b = other.rows.iter().map(|r| [mul(r[0], t), mul(r[1], t)]).collect();
        (den, a, b)
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let (den, mut a, b) = self.common(other);
        a.extend(b);
        Lattice::from_vectors(self.dim(), den, &a).expect("sum of nonzero lattices is nonzero")
    }

    /// Lattice intersection, via the kernel of the stacked bases.
    pub fn intersect(&self, other: &Lattice) -> Result<Lattice> {
        let (den, a, b) = self.common(other);
        let mut m: Vec<Vec<i128>> = Vec::new();
        for r in &a {
            m.push(vec![r[0], r[1], r[0], r[1]]);
        }
        for r in &b {
            m.push(vec![r[0], r[1], 0, 0]);
        }
        let e = echelon(m, 4);
        let vecs: Vec<[i128; 2]> =
            e.iter().filter(|r| r[0] == 0 && r[1] == 0).map(|r| [r[2], r[3]]).collect();
        Lattice::from_vectors(self.dim(), den, &vecs)
    }

    /// Span of all pairwise products.
    pub fn product(&self, tag: FieldTag, other: &Lattice) -> Lattice {
        let xs = self.basis(tag);
        let ys = other.basis(tag);
        let mut prods = Vec::with_capacity(xs.len() * ys.len());
        for x in &xs {
            for y in &ys {
                prods.push(*x * *y);
            }
        }
        Lattice::from_elems(tag, &prods).expect("product of nonzero lattices is nonzero")
    }

    /// {x : x·F ⊆ E} for full-rank E, F; it is the intersection of f⁻¹E over a basis of F.
    pub fn colon(tag: FieldTag, e: &Lattice, f: &Lattice) -> Result<Lattice> {
        let mut acc: Option<Lattice> = None;
        for g in f.basis(tag) {
            let part = e.scale(tag, &g.inv()?)?;
            acc = Some(match acc {
                None => part,
                Some(a) => a.intersect(&part)?,
            });
        }
        acc.ok_or(Error::ZeroModule)
    }

    /// Does the lattice contain the vector with the given rational coordinates?
    pub fn contains_coords(&self, v: [Q; 2]) -> bool {
        let w0 = v[0] * Q::from_integer(self.den);
        let w1 = v[1] * Q::from_integer(self.den);
        if !w0.is_integer() || !w1.is_integer() {
            return false;
        }
        let (x, y) = (w0.to_integer(), w1.to_integer());
        match self.rows.as_slice() {
            [[a, 0]] => y == 0 && x % a == 0,
            [[x0, g]] => {
                // rank one, not on the first axis
                y % g == 0 && x == (y / g) * x0
            }
            [[a, _], [b, c]] => {
                if y % c != 0 {
                    return false;
                }
                let t = y / c;
                sub_mul(x, t, *b) % a == 0
            }
            _ => false,
        }
    }

    pub fn contains_elem(&self, x: &FieldElem) -> bool {
        self.contains_coords(x.coords())
    }

    /// Is `other` a subset of `self`?
    pub fn contains(&self, other: &Lattice) -> bool {
        other
            .rows
            .iter()
            .all(|r| self.contains_coords([Q::new(r[0], other.den), Q::new(r[1], other.den)]))
    }

    /// Generator of L ∩ ℚ (the first HNF row), if the slice is nonzero.
    pub fn rational_slice(&self) -> Option<Q> {
        match self.rows.as_slice() {
            [[a, 0], ..] => Some(Q::new(*a, self.den)),
            _ => None,
        }
    }

    /// `den=<n>; basis=[[a,b],[c,e]]`.
    pub fn text(&self) -> String {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| if self.dim == 1 { format!("[{}]", r[0]) } else { format!("[{},{}]", r[0], r[1]) })
            .collect();
        format!("den={}; basis=[{}]", self.den, rows.join(","))
    }

    /// Parses the canonical text (spaces optional), renormalizing to HNF.
    pub fn parse(dim: usize, s: &str) -> Result<Lattice> {
        let bad = |m: &str| Error::Parse(format!("{m} in ideal text '{s}'"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (den_part, basis_part) = compact.split_once(';').ok_or_else(|| bad("missing ';'"))?;
        let den_txt = den_part.strip_prefix("den=").ok_or_else(|| bad("missing den="))?;
        let den = parse_q(den_txt)?;
        if !den.is_integer() || den.to_integer() <= 0 {
            return Err(bad("den must be a positive integer"));
        }
        let body = basis_part
            .strip_prefix("basis=[")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| bad("missing basis=[...]"))?;
        let mut vecs = Vec::new();
        for chunk in body.split("],") {
            let chunk = chunk.trim_start_matches('[').trim_end_matches(']');
            if chunk.is_empty() {
                continue;
            }
            let nums: Vec<i128> = chunk
                .split(',')
                .map(|t| t.parse::<i128>().map_err(|_| bad("non-integer entry")))
                .collect::<Result<_>>()?;
            match (dim, nums.as_slice()) {
                (1, [a]) => vecs.push([*a, 0]),
                (2, [a, b]) => vecs.push([*a, *b]),
                _ => return Err(bad("wrong vector length")),
            }
        }
        Lattice::from_vectors(dim, den.to_integer(), &vecs)
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zi() -> FieldTag {
        FieldTag::quadratic(-1).unwrap()
    }

    #[test]
    fn redundant_generator_drops() {
        let l = Lattice::from_vectors(2, 1, &[[2, 0], [0, 2], [2, 2]]).unwrap();
        assert_eq!(l.rows(), &[[2, 0], [0, 2]]);
    }

    #[test]
    fn denominator_cancels() {
        let l = Lattice::from_vectors(1, 2, &[[2, 0]]).unwrap();
        assert_eq!(l.text(), "den=1; basis=[[1]]");
    }

    #[test]
    fn off_diagonal_entry_is_reduced() {
        let l = Lattice::from_vectors(2, 1, &[[5, 0], [6, 3]]).unwrap();
        assert_eq!(l.rows(), &[[5, 0], [1, 3]]);
        let again = Lattice::from_vectors(2, 1, &[[1, 3], [5, 0]]).unwrap();
        assert_eq!(l, again);
    }

    #[test]
    fn zero_module_rejected() {
        assert_eq!(Lattice::from_vectors(2, 1, &[[0, 0]]), Err(Error::ZeroModule));
    }

    #[test]
    fn scalar_ops_over_q() {
        let two = Lattice::from_vectors(1, 1, &[[2, 0]]).unwrap();
        let three = Lattice::from_vectors(1, 1, &[[3, 0]]).unwrap();
        let six = Lattice::from_vectors(1, 1, &[[6, 0]]).unwrap();
        assert_eq!(two.product(FieldTag::Rational, &three), six);
        assert_eq!(two.intersect(&three).unwrap(), six);
        assert!(two.contains(&six) && !six.contains(&two));
        let z = Lattice::from_vectors(1, 1, &[[1, 0]]).unwrap();
        let half = Lattice::colon(FieldTag::Rational, &z, &two).unwrap();
        assert_eq!(half.text(), "den=2; basis=[[1]]");
    }

    #[test]
    fn gaussian_slice() {
        // (1+i)Z[i] is spanned by 1+i and (1+i)i = -1+i.
        let l = Lattice::from_elems(zi(), &[FieldElem::ints(zi(), 1, 1), FieldElem::ints(zi(), -1, 1)])
            .unwrap();
        assert_eq!(l.rows(), &[[2, 0], [1, 1]]);
        assert_eq!(l.rational_slice(), Some(Q::from_integer(2)));
    }

    #[test]
    fn parse_accepts_both_spacings() {
        let a = Lattice::parse(1, "den=1;basis=[[6]]").unwrap();
        let b = Lattice::parse(1, "den=1; basis=[[6]]").unwrap();
        assert_eq!(a, b);
        let c = Lattice::parse(2, "den=1; basis=[[5,0],[6,3]]").unwrap();
        assert_eq!(c.text(), "den=1; basis=[[5,0],[1,3]]");
    }
}
