//! Polynomials in weighted time variables `t_1, t_2, ...`, possibly on several
//! disjoint variable sets, truncated by weighted degree per set.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::scalar::{format_q, q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarSet {
    T,
    T1,
    T2,
    /// The single Abel variable `u`, of weight one.
    U,
}

impl VarSet {
    pub const TIMES: [VarSet; 3] = [VarSet::T, VarSet::T1, VarSet::T2];

    fn suffix(&self) -> &'static str {
        match self {
            VarSet::T => "",
            VarSet::T1 => "'",
            VarSet::T2 => "''",
            VarSet::U => "",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub set: VarSet,
    pub index: u32,
}

impl Var {
    pub fn t(index: u32) -> Self {
        Var { set: VarSet::T, index }
    }

    pub fn new(set: VarSet, index: u32) -> Self {
        Var { set, index }
    }

    pub fn u() -> Self {
        Var { set: VarSet::U, index: 1 }
    }

    pub fn weight(&self) -> u32 {
        match self.set {
            VarSet::U => 1,
            _ => self.index,
        }
    }
}

/// Sorted list of `(variable, exponent)` with positive exponents.
pub type Monomial = Vec<(Var, u32)>;

pub fn monomial_weight(m: &Monomial, set: VarSet) -> u32 {
    m.iter().filter(|(v, _)| v.set == set).map(|(v, e)| v.weight() * e).sum()
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn fits_weight(weight: Option<u32>, m: &Monomial) -> bool {
    match weight {
        None => true,
        Some(w) => [VarSet::T, VarSet::T1, VarSet::T2, VarSet::U]
            .iter()
            .all(|s| monomial_weight(m, *s) <= w),
    }
}

/// A polynomial over Q truncated at weight `W` in every variable set: a
/// monomial is kept only if its weighted degree in each set is at most `W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TPoly {
    terms: BTreeMap<Monomial, Q>,
    weight: Option<u32>,
}

impl TPoly {
    pub fn zero(weight: Option<u32>) -> Self {
        TPoly {
            terms: BTreeMap::new(),
            weight,
        }
    }

    pub fn constant(c: Q, weight: Option<u32>) -> Self {
        let mut p = Self::zero(weight);
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    pub fn one(weight: Option<u32>) -> Self {
        Self::constant(Q::one(), weight)
    }

    pub fn var(v: Var, weight: Option<u32>) -> Self {
        Self::from_terms([(vec![(v, 1)], Q::one())], weight)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Q)>, weight: Option<u32>) -> Self {
        let mut p = Self::zero(weight);
        for (mut m, c) in terms {
            m.retain(|(_, e)| *e > 0);
            m.sort();
            let m = m.into_iter().fold(Vec::new(), |acc: Monomial, x| mono_mul(&acc, &vec![x]));
            p.add_term(m, c);
        }
        p
    }

    pub fn weight(&self) -> Option<u32> {
        self.weight
    }

    pub fn fits(&self, m: &Monomial) -> bool {
        fits_weight(self.weight, m)
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() || !self.fits(&m) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Vec::new())
    }

    /// Highest weighted degree in `set` among the terms.
    pub fn max_weight(&self, set: VarSet) -> u32 {
        self.terms.keys().map(|m| monomial_weight(m, set)).max().unwrap_or(0)
    }

    /// True when every term has weighted degree exactly `d` in `set`.
    pub fn is_homogeneous(&self, set: VarSet, d: u32) -> bool {
        self.terms.keys().all(|m| monomial_weight(m, set) == d)
    }

    /// Part of weighted degree exactly `d` in `set`.
    pub fn homogeneous_part(&self, set: VarSet, d: u32) -> Self {
        TPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| monomial_weight(m, set) == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
            weight: self.weight,
        }
    }

    /// Lowers the truncation weight, dropping monomials that no longer fit.
    pub fn truncate(&self, weight: u32) -> Self {
        let w = self.weight.map_or(weight, |x| x.min(weight));
        let mut p = Self::zero(Some(w));
        for (m, c) in &self.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    fn meet(a: Option<u32>, b: Option<u32>) -> Option<u32> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = Self::zero(Self::meet(self.weight, other.weight));
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.weight = Self::meet(self.weight, other.weight);
        if self.weight.is_some() {
            let w = self.weight;
            self.terms.retain(|m, _| fits_weight(w, m));
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&q(-1))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.weight);
        }
        TPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
            weight: self.weight,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero(Self::meet(self.weight, other.weight));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                p.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        p
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(self.weight);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Moves every variable of set `from` to set `to`.
    pub fn rename(&self, from: VarSet, to: VarSet) -> Self {
        let terms = self.terms.iter().map(|(m, c)| {
            let m: Monomial = m
                .iter()
                .map(|(v, e)| {
                    let set = if v.set == from { to } else { v.set };
                    (Var { set, index: v.index }, *e)
                })
                .collect();
            (m, c.clone())
        });
        Self::from_terms(terms, self.weight)
    }

    /// Applies `t_i -> -t_i` on one set.
    pub fn negate_set(&self, set: VarSet) -> Self {
        TPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let deg: u32 = m.iter().filter(|(v, _)| v.set == set).map(|(_, e)| e).sum();
                    (m.clone(), if deg % 2 == 1 { -c } else { c.clone() })
                })
                .collect(),
            weight: self.weight,
        }
    }

    /// Substitutes `image(v)` for every variable `v` of `set`.
    pub fn substitute(&self, set: VarSet, image: &dyn Fn(&Var) -> TPoly, weight: Option<u32>) -> Self {
        let mut out = Self::zero(weight);
        let mut cache: BTreeMap<(Var, u32), TPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut acc = Self::constant(c.clone(), weight);
            for &(v, e) in m {
                let factor = if v.set == set {
                    cache
                        .entry((v, e))
                        .or_insert_with(|| image(&v).pow(e))
                        .clone()
                } else {
                    Self::from_terms([(vec![(v, e)], Q::one())], weight)
                };
                acc = acc.mul(&factor);
            }
            out.add_assign(&acc);
        }
        out
    }

    /// Evaluates the variables of `set` at scalars.
    pub fn evaluate(&self, set: VarSet, value: &dyn Fn(&Var) -> Q) -> Self {
        let mut out = Self::zero(self.weight);
        for (m, c) in &self.terms {
            let mut c = c.clone();
            let mut rest = Vec::new();
            for &(v, e) in m {
                if v.set == set {
                    c *= num_traits::pow(value(&v), e as usize);
                } else {
                    rest.push((v, e));
                }
            }
            out.add_term(rest, c);
        }
        out
    }

    /// Partial derivative in `v`.
    pub fn derivative(&self, v: &Var) -> Self {
        let mut out = Self::zero(self.weight);
        for (m, c) in &self.terms {
            if let Some(pos) = m.iter().position(|(x, _)| x == v) {
                let e = m[pos].1;
                let mut m2 = m.clone();
                if e == 1 {
                    m2.remove(pos);
                } else {
                    m2[pos].1 = e - 1;
                }
                out.add_term(m2, c * q(e as i64));
            }
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&Q) -> Q) -> Self {
        let mut out = Self::zero(self.weight);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", format_q(c))?;
            for (v, e) in m {
                let name = match v.set {
                    VarSet::U => "u".to_string(),
                    s => format!("t{}{}", v.index, s.suffix()),
                };
                if *e == 1 {
                    write!(f, "*{name}")?;
                } else {
                    write!(f, "*{name}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qr;

    fn t(i: u32) -> TPoly {
        TPoly::var(Var::t(i), Some(4))
    }

    #[test]
    fn truncation_by_weight() {
        let p = t(1).add(&t(2));
        let sq = p.mul(&p);
        // t1^2 + 2 t1 t2 + t2^2, the last two survive at weight 4
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.pow(2).max_weight(VarSet::T), 4);
        assert!(t(1).pow(5).is_zero());
    }

    #[test]
    fn rename_and_negate() {
        let p = t(1).mul(&t(2)).add(&t(3));
        let r = p.rename(VarSet::T, VarSet::T1);
        assert_eq!(r.max_weight(VarSet::T), 0);
        assert_eq!(r.max_weight(VarSet::T1), 3);
        let n = p.negate_set(VarSet::T);
        assert_eq!(n.add(&p).len(), 1);
    }

    #[test]
    fn calculus() {
        let p = t(1).pow(3).scale(&qr(1, 6));
        let d = p.derivative(&Var::t(1));
        assert_eq!(d, t(1).pow(2).scale(&qr(1, 2)));
        let v = p.evaluate(VarSet::T, &|_| q(2));
        assert_eq!(v.constant_term(), qr(4, 3));
        let s = p.substitute(VarSet::T, &|_| t(1).add(&TPoly::one(Some(4))), Some(4));
        assert_eq!(s.constant_term(), qr(1, 6));
    }
}
