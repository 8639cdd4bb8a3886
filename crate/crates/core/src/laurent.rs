//! Truncated formal Laurent series with an explicit precision window.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_q, q, FieldSpec, Q};

/// Stand-in for an infinite precision wall on exact series.
pub const INF: i64 = i64::MAX / 4;

/// A Laurent series known on the window `[lo, hi)`.
///
/// Coefficients below `lo` are zero. Coefficients at `hi` and above are
/// unknown unless the series is flagged exact, in which case they are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    field: FieldSpec,
    lo: i64,
    hi: i64,
    exact: bool,
    coeffs: BTreeMap<i64, Q>,
}

impl LaurentSeries {
    pub fn new(
        field: FieldSpec,
        lo: i64,
        hi: i64,
        exact: bool,
        coeffs: impl IntoIterator<Item = (i64, Q)>,
    ) -> Result<Self> {
        if lo > hi {
            return Err(Error::precision("series window", lo, hi));
        }
        let mut map = BTreeMap::new();
        for (e, c) in coeffs {
            let c = field.reduce(&c)?;
            if c.is_zero() {
                continue;
            }
            if e < lo || e >= hi {
                return Err(Error::Parse(format!(
                    "coefficient at z^{e} outside window [{lo}, {hi})"
                )));
            }
            let slot = map.entry(e).or_insert_with(Q::zero);
            *slot = field.add(slot, &c);
        }
        map.retain(|_, c: &mut Q| !c.is_zero());
        Ok(LaurentSeries {
            field,
            lo,
            hi,
            exact,
            coeffs: map,
        })
    }

    /// An exact Laurent polynomial.
    pub fn poly(field: FieldSpec, terms: impl IntoIterator<Item = (i64, Q)>) -> Self {
        let terms: Vec<(i64, Q)> = terms.into_iter().collect();
        let lo = terms.iter().map(|t| t.0).min().unwrap_or(0);
        let hi = terms.iter().map(|t| t.0 + 1).max().unwrap_or(0);
        Self::new(field, lo, hi, true, terms).expect("terms lie in their own window")
    }

    /// Exact Laurent polynomial with integer coefficients.
    pub fn poly_int(field: FieldSpec, terms: &[(i64, i64)]) -> Self {
        Self::poly(field, terms.iter().map(|&(e, c)| (e, q(c))))
    }

    pub fn monomial(field: FieldSpec, e: i64, c: Q) -> Self {
        Self::poly(field, [(e, c)])
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::monomial(field, 0, Q::one())
    }

    pub fn zero(field: FieldSpec) -> Self {
        Self::poly(field, [])
    }

    /// The zero series known only below `hi`.
    pub fn zero_to(field: FieldSpec, hi: i64) -> Self {
        LaurentSeries {
            field,
            lo: hi,
            hi,
            exact: false,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Declared precision bound.
    pub fn hi(&self) -> i64 {
        self.hi
    }

    /// Precision bound used by arithmetic: infinite for exact series.
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

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero coefficients in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Q)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// Coefficient of `z^e`, failing when the window does not determine it.
    pub fn coeff(&self, e: i64) -> Result<Q> {
        if e >= self.eff_hi() {
            return Err(Error::precision(format!("coefficient of z^{e}"), e + 1, self.hi));
        }
        Ok(self.coeff_unchecked(e))
    }

    /// Coefficient of `z^e`, reading unknown coefficients as zero.
    pub fn coeff_unchecked(&self, e: i64) -> Q {
        self.coeffs.get(&e).cloned().unwrap_or_else(Q::zero)
    }

    /// Least exponent with a nonzero coefficient inside the window.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn leading(&self) -> Option<(i64, &Q)> {
        self.coeffs.iter().next().map(|(e, c)| (*e, c))
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        self.field.check_same(&other.field)
    }

    fn build(&self, lo: i64, eff_hi: i64, hi_exact: i64, exact: bool, coeffs: BTreeMap<i64, Q>) -> Self {
        let hi = if exact { hi_exact } else { eff_hi };
        let lo = lo.min(hi);
        let mut coeffs = coeffs;
        coeffs.retain(|e, c| !c.is_zero() && *e < hi.max(lo));
        LaurentSeries {
            field: self.field,
            lo,
            hi,
            exact,
            coeffs,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let f = self.field;
        let exact = self.exact && other.exact;
        let eff = self.eff_hi().min(other.eff_hi());
        let mut out = BTreeMap::new();
        for (e, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            if *e >= eff {
                continue;
            }
            let slot = out.entry(*e).or_insert_with(Q::zero);
            *slot = f.add(slot, c);
        }
        Ok(self.build(
            self.lo.min(other.lo),
            eff,
            self.hi.max(other.hi),
            exact,
            out,
        ))
    }

    pub fn neg(&self) -> Self {
        self.scale(&q(-1))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> Self {
        let c = self.field.reduce(c).expect("scalar must lie in the field");
        let coeffs = self
            .coeffs
            .iter()
            .map(|(e, x)| (*e, self.field.mul(x, &c)))
            .collect();
        let mut out = self.clone();
        out.coeffs = coeffs;
        out.coeffs.retain(|_, x| !x.is_zero());
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let f = self.field;
        let lo = self.lo + other.lo;
        let eff = sat_add(self.lo, other.eff_hi()).min(sat_add(other.lo, self.eff_hi()));
        if eff < lo {
            return Err(Error::precision("product window", lo, eff));
        }
        let exact = self.exact && other.exact;
        let mut out: BTreeMap<i64, Q> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                let e = ea + eb;
                if e >= eff {
                    break;
                }
                let slot = out.entry(e).or_insert_with(Q::zero);
                *slot = f.add(slot, &f.mul(ca, cb));
            }
        }
        Ok(self.build(lo, eff, self.hi + other.hi, exact, out))
    }

    /// Multiplicative inverse known below `hi_out`.
    pub fn invert(&self, hi_out: i64) -> Result<Self> {
        let f = self.field;
        let (v, c0) = match self.leading() {
            Some((v, c)) => (v, c.clone()),
            None if self.exact => return Err(Error::ZeroSeries),
            None => return Err(Error::precision("inverse of undetermined series", self.hi + 1, self.hi)),
        };
        let inv0 = f.inv(&c0)?;
        if self.exact && self.coeffs.len() == 1 {
            return Ok(Self::monomial(f, -v, inv0));
        }
        // b_k, k = 0.., with b = z^{-v} * sum b_k z^k
        let known = self.eff_hi().saturating_sub(v);
        let needed = hi_out + v;
        if needed > known {
            return Err(Error::precision("series inverse", needed + v, self.eff_hi()));
        }
        let n = needed.max(0) as usize;
        let a: Vec<Q> = (0..n as i64).map(|k| self.coeff_unchecked(v + k)).collect();
        let mut b: Vec<Q> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                b.push(inv0.clone());
                continue;
            }
            let mut s = Q::zero();
            for j in 1..=k {
                if !a[j].is_zero() {
                    s = f.add(&s, &f.mul(&a[j], &b[k - j]));
                }
            }
            b.push(f.neg(&f.mul(&s, &inv0)));
        }
        let coeffs = b.into_iter().enumerate().map(|(k, c)| (k as i64 - v, c));
        Self::new(f, -v, hi_out.max(-v), false, coeffs)
    }

    /// Coefficient of `z^{-1}`.
    pub fn residue(&self) -> Result<Q> {
        if self.lo > -1 {
            return Ok(Q::zero());
        }
        self.coeff(-1)
    }

    /// Multiplication by `z^n`.
    pub fn monomial_shift(&self, n: i64) -> Self {
        LaurentSeries {
            field: self.field,
            lo: self.lo + n,
            hi: self.hi + n,
            exact: self.exact,
            coeffs: self.coeffs.iter().map(|(e, c)| (e + n, c.clone())).collect(),
        }
    }

    /// Formal derivative `d/dz`.
    pub fn derivative(&self) -> Self {
        let f = self.field;
        let coeffs = self
            .coeffs
            .iter()
            .map(|(e, c)| (e - 1, f.mul(c, &f.from_int(*e))))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        LaurentSeries {
            field: f,
            lo: self.lo - 1,
            hi: self.hi - 1,
            exact: self.exact,
            coeffs,
        }
    }

    /// Forgets every coefficient at exponent `hi` and above.
    pub fn truncate(&self, hi: i64) -> Self {
        let hi = hi.min(self.eff_hi());
        let lo = self.lo.min(hi);
        LaurentSeries {
            field: self.field,
            lo,
            hi,
            exact: false,
            coeffs: self.coeffs.range(..hi).map(|(e, c)| (*e, c.clone())).collect(),
        }
    }

    /// True when both series agree on the window they both determine.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let hi = self.eff_hi().min(other.eff_hi());
        self.coeffs.range(..hi).eq(other.coeffs.range(..hi))
    }
}

fn sat_add(a: i64, b: i64) -> i64 {
    if b >= INF {
        INF
    } else {
        a + b
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{}", format_q(c))?,
                _ => write!(f, "{}*z^{}", format_q(c), e)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if !self.exact {
            write!(f, " + O(z^{})", self.hi)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const QF: FieldSpec = FieldSpec::Rational;

    fn s(lo: i64, hi: i64, terms: &[(i64, i64)]) -> LaurentSeries {
        LaurentSeries::new(QF, lo, hi, false, terms.iter().map(|&(e, c)| (e, q(c)))).unwrap()
    }

    #[test]
    fn add_window_rule() {
        let a = s(0, 3, &[(0, 1), (1, 1)]);
        let b = s(0, 2, &[(0, 1)]);
        let c = a.add(&b).unwrap();
        assert_eq!(c, s(0, 2, &[(0, 2), (1, 1)]));
        let x = LaurentSeries::poly_int(QF, &[(-1, 1), (0, 1)]);
        let y = LaurentSeries::poly_int(QF, &[(0, -1), (1, 1)]);
        assert_eq!(
            x.add(&y).unwrap().terms().map(|(e, _)| e).collect::<Vec<_>>(),
            vec![-1, 1]
        );
    }

    #[test]
    fn mul_precision() {
        let a = s(-1, 2, &[(-1, 1), (0, 1)]);
        let b = LaurentSeries::monomial(QF, -1, q(1));
        let c = a.mul(&b).unwrap();
        assert_eq!(c.hi(), 1);
        assert_eq!(c.lo(), -2);
        assert_eq!(c.coeff(-2).unwrap(), q(1));
        assert_eq!(c.coeff(-1).unwrap(), q(1));
        assert!(c.coeff(1).is_err());
        let p = s(0, 4, &[(0, 1), (1, 1)]).mul(&s(0, 4, &[(0, 1), (1, -1)])).unwrap();
        assert_eq!(p, s(0, 4, &[(0, 1), (2, -1)]));
    }

    #[test]
    fn inverse() {
        let z = LaurentSeries::monomial(QF, 1, q(1));
        assert_eq!(z.invert(5).unwrap(), LaurentSeries::monomial(QF, -1, q(1)));
        let a = LaurentSeries::poly_int(QF, &[(0, 1), (1, 1)]);
        assert_eq!(a.invert(4).unwrap(), s(0, 4, &[(0, 1), (1, -1), (2, 1), (3, -1)]));
        let f5 = FieldSpec::Prime(5);
        let b = LaurentSeries::poly_int(f5, &[(0, 2), (1, 1)]);
        let bi = b.invert(2).unwrap();
        assert_eq!(bi.coeff(0).unwrap(), q(3));
        let one = b.mul(&bi).unwrap();
        assert!(one.agrees_with(&LaurentSeries::one(f5)));
        assert_eq!(LaurentSeries::zero(QF).invert(3), Err(Error::ZeroSeries));
        assert!(s(0, 2, &[(0, 1), (1, 1)]).invert(3).unwrap_err().is_precision());
    }

    #[test]
    fn residues() {
        assert_eq!(LaurentSeries::monomial(QF, -1, q(1)).residue().unwrap(), q(1));
        let a = LaurentSeries::poly_int(QF, &[(-2, 3), (-1, 5), (0, 7)]);
        assert_eq!(a.residue().unwrap(), q(5));
        let g = LaurentSeries::poly_int(QF, &[(0, 1), (1, -1)]).invert(3).unwrap();
        let r = g.mul(&LaurentSeries::monomial(QF, -1, q(1))).unwrap();
        assert_eq!(r.residue().unwrap(), q(1));
        assert!(s(-3, -1, &[(-2, 1)]).residue().is_err());
    }

    #[test]
    fn shifts() {
        let a = s(-1, 2, &[(-1, 1), (0, 1)]);
        let b = a.monomial_shift(-2);
        assert_eq!((b.lo(), b.hi()), (-3, 0));
        assert_eq!(b.coeff(-3).unwrap(), q(1));
        assert_eq!(b.monomial_shift(2), a);
        assert_eq!(
            LaurentSeries::one(QF).monomial_shift(3),
            LaurentSeries::monomial(QF, 3, q(1))
        );
    }

    #[test]
    fn exact_differentials_have_no_residue() {
        let f = LaurentSeries::poly_int(QF, &[(-3, 2), (-1, 4), (0, 1), (2, -5)]);
        assert_eq!(f.derivative().residue().unwrap(), q(0));
    }
}
