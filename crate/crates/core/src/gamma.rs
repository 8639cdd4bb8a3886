//! The formal groups `Γ_-` and `Γ_+` at finite truncation: the universal
//! element, the Abel element, both exponential maps, and a factorization of
//! scalar units.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::laurent::{LaurentSeries, INF};
use crate::scalar::{q, FieldSpec, Q};
use crate::tpoly::{TPoly, Var, VarSet};

/// A Laurent series in `z` whose coefficients are [`TPoly`]s, known on the
/// z-window `[lo, hi)` (or everywhere when exact).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiSeries {
    coeffs: BTreeMap<i64, TPoly>,
    lo: i64,
    hi: i64,
    exact: bool,
    weight: Option<u32>,
}

impl BiSeries {
    pub fn new(
        lo: i64,
        hi: i64,
        exact: bool,
        weight: Option<u32>,
        coeffs: impl IntoIterator<Item = (i64, TPoly)>,
    ) -> Self {
        let coeffs = coeffs
            .into_iter()
            .filter(|(e, p)| *e >= lo && (exact || *e < hi) && !p.is_zero())
            .map(|(e, p)| (e, weight.map_or(p.clone(), |w| p.truncate(w))))
            .filter(|(_, p)| !p.is_zero())
            .collect();
        BiSeries {
            coeffs,
            lo,
            hi,
            exact,
            weight,
        }
    }

    pub fn one(weight: Option<u32>) -> Self {
        Self::new(0, 1, true, weight, [(0, TPoly::one(weight))])
    }

    /// Constant-in-`t` series from a rational Laurent series.
    pub fn from_laurent(s: &LaurentSeries, weight: Option<u32>) -> Self {
        Self::new(
            s.lo(),
            s.hi(),
            s.is_exact(),
            weight,
            s.terms().map(|(e, c)| (e, TPoly::constant(c.clone(), weight))),
        )
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn eff_hi(&self) -> i64 {
        if self.exact {
            INF
        } else {
            self.hi
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn weight(&self) -> Option<u32> {
        self.weight
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &TPoly)> {
        self.coeffs.iter().map(|(e, p)| (*e, p))
    }

    pub fn coeff(&self, e: i64) -> Result<TPoly> {
        if e >= self.eff_hi() {
            return Err(Error::precision(format!("z^{e} coefficient"), e + 1, self.hi));
        }
        Ok(self.coeffs.get(&e).cloned().unwrap_or_else(|| TPoly::zero(self.weight)))
    }

    fn meet(a: Option<u32>, b: Option<u32>) -> Option<u32> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let eff = self.eff_hi().min(other.eff_hi());
        let weight = Self::meet(self.weight, other.weight);
        let mut out: BTreeMap<i64, TPoly> = BTreeMap::new();
        for (e, p) in self.coeffs.iter().chain(other.coeffs.iter()) {
            if *e < eff {
                out.entry(*e).or_insert_with(|| TPoly::zero(weight)).add_assign(p);
            }
        }
        let exact = self.exact && other.exact;
        let hi = if exact { self.hi.max(other.hi) } else { eff };
        Self::new(self.lo.min(other.lo), hi, exact, weight, out)
    }

    pub fn scale(&self, c: &TPoly) -> Self {
        let weight = Self::meet(self.weight, c.weight());
        Self::new(self.lo, self.hi, self.exact, weight, self.coeffs.iter().map(|(e, p)| (*e, p.mul(c))))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let lo = self.lo + other.lo;
        let eff = sat(self.lo, other.eff_hi()).min(sat(other.lo, self.eff_hi()));
        if eff < lo {
            return Err(Error::precision("product window", lo, eff));
        }
        let weight = Self::meet(self.weight, other.weight);
        let mut out: BTreeMap<i64, TPoly> = BTreeMap::new();
        for (ea, pa) in &self.coeffs {
            for (eb, pb) in &other.coeffs {
                let e = ea + eb;
                if e >= eff {
                    break;
                }
                out.entry(e).or_insert_with(|| TPoly::zero(weight)).add_assign(&pa.mul(pb));
            }
        }
        let exact = self.exact && other.exact;
        let hi = if exact { self.hi + other.hi } else { eff };
        Ok(Self::new(lo, hi, exact, weight, out))
    }

    /// Forgets every z-coefficient at exponent `hi` and above.
    pub fn truncate_z(&self, hi: i64) -> Self {
        let hi = hi.min(self.eff_hi());
        Self::new(self.lo.min(hi), hi, false, self.weight, self.coeffs.clone())
    }

    /// Inverse of `1 + N` where every coefficient of `N` has no constant
    /// term in `t`, so that `N` is nilpotent under the weight truncation.
    pub fn invert_unipotent(&self) -> Result<Self> {
        let w = self
            .weight
            .ok_or_else(|| Error::NotUnit("unipotent inverse needs a weight truncation".into()))?;
        let one = Self::one(self.weight);
        let n = self.add(&one.scale(&TPoly::constant(q(-1), self.weight)));
        if n.coeffs.values().any(|p| !p.constant_term().is_zero()) {
            return Err(Error::NotUnit("series is not 1 + nilpotent".into()));
        }
        let minus_n = n.scale(&TPoly::constant(q(-1), self.weight));
        let mut acc = one.clone();
        let mut power = one;
        for _ in 0..w {
            power = power.mul(&minus_n)?;
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(acc)
    }

    /// Substitutes into the `t`-coefficients.
    pub fn substitute(&self, set: VarSet, image: &dyn Fn(&Var) -> TPoly, weight: Option<u32>) -> Self {
        Self::new(
            self.lo,
            self.hi,
            self.exact,
            weight,
            self.coeffs.iter().map(|(e, p)| (*e, p.substitute(set, image, weight))),
        )
    }

    pub fn map(&self, f: impl Fn(&TPoly) -> TPoly) -> Self {
        Self::new(self.lo, self.hi, self.exact, self.weight, self.coeffs.iter().map(|(e, p)| (*e, f(p))))
    }
}

fn sat(a: i64, b: i64) -> i64 {
    if b >= INF {
        INF
    } else {
        a + b
    }
}

impl fmt::Display for BiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, p) in &self.coeffs {
            writeln!(f, "z^{e}: {p}")?;
        }
        if !self.exact {
            writeln!(f, "O(z^{})", self.hi)?;
        }
        Ok(())
    }
}

/// `v(t, z) = 1 + Σ_{i=1..W} t_i z^{-i}`.
pub fn universal_element(w: u32) -> BiSeries {
    let terms = (1..=w).map(|i| (-(i as i64), TPoly::var(Var::t(i), Some(w))));
    let lo = -(w as i64);
    BiSeries::new(lo, 1, true, Some(w), std::iter::once((0, TPoly::one(Some(w)))).chain(terms))
}

/// `(1 - u/z)^{-1} = 1 + Σ_{i=1..W} u^i z^{-i}`.
pub fn abel_element(w: u32) -> BiSeries {
    let u = TPoly::var(Var::u(), Some(w));
    let terms = (1..=w).map(|i| (-(i as i64), u.pow(i)));
    BiSeries::new(-(w as i64), 1, true, Some(w), std::iter::once((0, TPoly::one(Some(w)))).chain(terms))
}

/// `exp(Σ a_i w^i)` as a series in `w`, known below `w^{W+1}` where `W` is
/// the length of `a`. For `Γ_-` read `w = z^{-1}`, for `Γ_+` read `w = z`.
pub fn exp_char0(field: FieldSpec, a: &[Q]) -> Result<LaurentSeries> {
    field.require_char0()?;
    let w = a.len();
    let mut e: Vec<Q> = vec![Q::one()];
    for k in 1..=w {
        // k E_k = Σ_{i=1..k} i a_i E_{k-i}
        let mut s = Q::zero();
        for i in 1..=k {
            s += &a[i - 1] * q(i as i64) * &e[k - i];
        }
        e.push(s / q(k as i64));
    }
    LaurentSeries::new(field, 0, w as i64 + 1, false, e.into_iter().enumerate().map(|(k, c)| (k as i64, c)))
}

/// `Π_i (1 - a_i w^i)` as a series in `w`, known below `w^{W+1}`.
pub fn exp_charp(field: FieldSpec, a: &[Q]) -> Result<LaurentSeries> {
    let w = a.len() as i64;
    let mut acc = LaurentSeries::one(field).truncate(w + 1);
    for (i, ai) in a.iter().enumerate() {
        let ai = field.reduce(ai)?;
        let factor = LaurentSeries::poly(field, [(0, Q::one()), (i as i64 + 1, field.neg(&ai))]);
        acc = acc.mul(&factor)?;
    }
    Ok(acc)
}

/// `g = c z^k h` with `h ∈ 1 + z k[[z]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitFactors {
    pub power: i64,
    pub constant: Q,
    pub positive: LaurentSeries,
}

pub fn factor_unit(g: &LaurentSeries) -> Result<UnitFactors> {
    let f = g.field();
    let (k, c) = g.leading().ok_or_else(|| Error::NotUnit(format!("{g}")))?;
    let c = c.clone();
    let inv = f.inv(&c)?;
    let positive = g.monomial_shift(-k).scale(&inv);
    Ok(UnitFactors {
        power: k,
        constant: c,
        positive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qr;

    const QF: FieldSpec = FieldSpec::Rational;

    #[test]
    fn universal_and_inverse() {
        assert_eq!(universal_element(0), BiSeries::one(Some(0)));
        let v = universal_element(1);
        assert_eq!(v.coeff(-1).unwrap(), TPoly::var(Var::t(1), Some(1)));
        let v = universal_element(5);
        let vi = v.invert_unipotent().unwrap();
        let prod = v.mul(&vi).unwrap();
        let terms: Vec<(i64, TPoly)> = prod.terms().map(|(e, p)| (e, p.clone())).collect();
        assert_eq!(terms, vec![(0, TPoly::one(Some(5)))]);
    }

    #[test]
    fn abel_is_universal_on_powers() {
        let w = 4;
        let a = abel_element(w);
        let u = TPoly::var(Var::u(), Some(w));
        let sub = universal_element(w).substitute(VarSet::T, &|v| u.pow(v.index), Some(w));
        assert_eq!(sub, a);
        let one_minus = BiSeries::new(-1, 1, true, Some(w), [(0, TPoly::one(Some(w))), (-1, u.neg())]);
        let prod = one_minus.mul(&a).unwrap();
        assert_eq!(prod.terms().count(), 1);
        assert_eq!(a.substitute(VarSet::U, &|_| TPoly::zero(Some(w)), Some(w)).terms().count(), 1);
    }

    #[test]
    fn exponentials() {
        assert_eq!(exp_char0(QF, &[q(0), q(0)]).unwrap(), LaurentSeries::one(QF).truncate(3));
        let a = [q(1), qr(-2, 3), q(5)];
        let na: Vec<Q> = a.iter().map(|x| -x).collect();
        let p = exp_char0(QF, &a).unwrap().mul(&exp_char0(QF, &na).unwrap()).unwrap();
        assert!(p.agrees_with(&LaurentSeries::one(QF)));
        // exp(Σ t^i/i w^i) = (1 - t w)^{-1}
        let t = qr(2, 5);
        let logs: Vec<Q> = (1..=5).map(|i| num_traits::pow(t.clone(), i) / q(i as i64)).collect();
        let e = exp_char0(QF, &logs).unwrap();
        for k in 0..=5 {
            assert_eq!(e.coeff(k).unwrap(), num_traits::pow(t.clone(), k as usize));
        }
        assert!(exp_char0(FieldSpec::Prime(5), &[q(1)]).is_err());
    }

    #[test]
    fn char_p_products() {
        let f2 = FieldSpec::Prime(2);
        let a = [q(1), q(0)];
        assert_eq!(exp_charp(f2, &a).unwrap().coeff(1).unwrap(), q(1));
        let prod = exp_charp(f2, &a).unwrap().mul(&exp_charp(f2, &a).unwrap()).unwrap();
        let sum = exp_charp(f2, &[q(0), q(0)]).unwrap();
        assert_eq!(prod.coeff(2).unwrap(), q(1));
        assert!(!prod.agrees_with(&sum));
    }

    #[test]
    fn unit_factorization() {
        let g = LaurentSeries::poly_int(QF, &[(-2, 3), (-1, 6)]);
        let u = factor_unit(&g).unwrap();
        assert_eq!((u.power, u.constant.clone()), (-2, q(3)));
        assert_eq!(u.positive, LaurentSeries::poly_int(QF, &[(0, 1), (1, 2)]));
    }
}
