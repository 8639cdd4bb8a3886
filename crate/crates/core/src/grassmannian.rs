//! Points of the Sato Grassmannian at finite depth and precision.
//!
//! A point `U ⊂ k((z))` is stored by its reduced echelon frame: for every
//! valuation `v` in `T ∩ [-M, ∞)` one member `e_v` with coefficient 1 at `v`
//! and 0 at every other valuation of `T`, known below the precision `D`.
//! Every integer below `-M` lies in `T`; the corresponding members are not
//! stored. They never enter Plücker minors, and they only affect the perp
//! at exponents `>= M`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::laurent::LaurentSeries;
use crate::linalg;
use crate::partitions::{partition_of_valuations, valuations_of_partition, MayaDiagram, Partition, ValuationSet};
use crate::scalar::{FieldSpec, Q};

type Row = BTreeMap<i64, Q>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrassPoint {
    field: FieldSpec,
    frame: BTreeMap<i64, LaurentSeries>,
    depth: i64,
    precision: i64,
    valuations: ValuationSet,
}

fn axpy(f: FieldSpec, row: &mut Row, c: &Q, other: &Row) {
    for (e, x) in other {
        let slot = row.entry(*e).or_insert_with(Q::zero);
        *slot = f.sub(slot, &f.mul(c, x));
        if slot.is_zero() {
            row.remove(e);
        }
    }
}

impl GrassPoint {
    /// Echelonizes `frame`, declaring every valuation below `-depth` to lie
    /// in the point and every coefficient at exponents `>= precision` unknown.
    pub fn normalize(field: FieldSpec, frame: &[LaurentSeries], depth: i64, precision: i64) -> Result<Self> {
        let mut rows: BTreeMap<i64, Row> = BTreeMap::new();
        let mut depth = depth;
        for s in frame {
            field.check_same(&s.field())?;
            if s.eff_hi() < precision {
                return Err(Error::precision("frame member", precision, s.hi()));
            }
            let mut r: Row = s.terms().filter(|(e, _)| *e < precision).map(|(e, c)| (e, c.clone())).collect();
            loop {
                let Some((&v, c)) = r.iter().next() else {
                    return Err(Error::DependentFrame(format!(
                        "member {s} reduces to zero below z^{precision}"
                    )));
                };
                if let Some(p) = rows.get(&v) {
                    let c = c.clone();
                    axpy(field, &mut r, &c, p);
                } else {
                    let inv = field.inv(c)?;
                    for x in r.values_mut() {
                        *x = field.mul(x, &inv);
                    }
                    depth = depth.max(-v);
                    rows.insert(v, r);
                    break;
                }
            }
        }
        let pivots: Vec<i64> = rows.keys().copied().collect();
        for &v in pivots.iter().rev() {
            let mut r = rows.remove(&v).expect("pivot row");
            for &p in pivots.iter().filter(|&&p| p > v) {
                if let Some(c) = r.get(&p).cloned() {
                    axpy(field, &mut r, &c, &rows[&p]);
                }
            }
            rows.insert(v, r);
        }
        let frame: BTreeMap<i64, LaurentSeries> = rows
            .into_iter()
            .map(|(v, r)| Ok((v, LaurentSeries::new(field, v, precision, false, r)?)))
            .collect::<Result<_>>()?;
        let valuations = ValuationSet::new(-depth, frame.keys().copied());
        Ok(GrassPoint {
            field,
            frame,
            depth,
            precision,
            valuations,
        })
    }

    /// The monomial point spanned by `z^v`, `v ∈ T`.
    pub fn from_valuations(field: FieldSpec, t: &ValuationSet, depth: i64, precision: i64) -> Result<Self> {
        if t.max() >= precision {
            return Err(Error::precision("monomial point", t.max() + 1, precision));
        }
        let depth = depth.max(-t.tail_start());
        let frame: Vec<LaurentSeries> = t
            .members_from(-depth)
            .into_iter()
            .map(|v| LaurentSeries::monomial(field, v, Q::one()).truncate(precision))
            .collect();
        Self::normalize(field, &frame, depth, precision)
    }

    /// `V_- = span{z^{-1}, z^{-2}, ...}`.
    pub fn vacuum(field: FieldSpec, depth: i64, precision: i64) -> Result<Self> {
        Self::from_valuations(field, &ValuationSet::new(0, []), depth, precision)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn depth(&self) -> i64 {
        self.depth
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn valuations(&self) -> &ValuationSet {
        &self.valuations
    }

    pub fn index(&self) -> i64 {
        self.valuations.index()
    }

    /// Frame members in increasing valuation order.
    pub fn frame(&self) -> impl Iterator<Item = (i64, &LaurentSeries)> {
        self.frame.iter().map(|(v, s)| (*v, s))
    }

    pub fn member(&self, v: i64) -> Option<&LaurentSeries> {
        self.frame.get(&v)
    }

    /// The Maya diagram `S = Z - T` and its partition.
    pub fn stratum(&self) -> (Partition, MayaDiagram) {
        let lam = partition_of_valuations(&self.valuations, self.index())
            .expect("index is computed from the same valuation set");
        (lam, self.valuations.complement())
    }

    /// Plücker coordinate `Ω_λ(U)` on the component of the point's index.
    pub fn pluecker(&self, lambda: &Partition) -> Result<Q> {
        let t = &self.valuations;
        let tp = valuations_of_partition(lambda, self.index());
        let lo = t.tail_start().min(tp.tail_start()) - 1;
        let rows_only: Vec<i64> = tp.members_from(lo).into_iter().filter(|&v| !t.contains(v)).collect();
        let cols_only: Vec<i64> = t.members_from(lo).into_iter().filter(|&v| !tp.contains(v)).collect();
        if let Some(&v) = cols_only.first() {
            if v < -self.depth {
                return Err(Error::depth(format!("Plücker coordinate {lambda}"), -v, self.depth));
            }
        }
        if let Some(&r) = rows_only.last() {
            if r >= self.precision {
                return Err(Error::precision(format!("Plücker coordinate {lambda}"), r + 1, self.precision));
            }
        }
        // sign of moving the shared valuations to the front of both lists
        let shared_above = |a: i64| -> usize {
            t.members_from(a + 1).into_iter().filter(|&b| tp.contains(b)).count()
        };
        let inversions: usize = rows_only.iter().chain(&cols_only).map(|&a| shared_above(a)).sum();
        let b: Vec<Vec<Q>> = rows_only
            .iter()
            .map(|&r| cols_only.iter().map(|v| self.frame[v].coeff_unchecked(r)).collect())
            .collect();
        let d = linalg::det(self.field, &b);
        Ok(if inversions % 2 == 1 { self.field.neg(&d) } else { d })
    }

    /// All nonzero Plücker coordinates with `|λ| <= w`, in canonical order.
    pub fn pluecker_all(&self, w: u32) -> Result<Vec<(Partition, Q)>> {
        let mut out = Vec::new();
        for lam in Partition::up_to(w) {
            let c = self.pluecker(&lam)?;
            if !c.is_zero() {
                out.push((lam, c));
            }
        }
        Ok(out)
    }

    /// Reduces `f` against the frame. The residual vanishes on its window
    /// exactly when `f` lies in the point to that precision.
    pub fn reduce(&self, f: &LaurentSeries) -> Result<LaurentSeries> {
        self.field.check_same(&f.field())?;
        let hi = f.eff_hi().min(self.precision);
        let mut r: Row = f.terms().filter(|(e, _)| *e < hi).map(|(e, c)| (e, c.clone())).collect();
        if let Some((&v, _)) = r.iter().next() {
            if v < -self.depth {
                return Err(Error::depth("membership test", -v, self.depth));
            }
        }
        for (&v, e) in &self.frame {
            if v >= hi {
                break;
            }
            if let Some(c) = r.get(&v).cloned() {
                let other: Row = e.terms().filter(|(x, _)| *x < hi).map(|(x, c)| (x, c.clone())).collect();
                axpy(self.field, &mut r, &c, &other);
            }
        }
        let lo = f.lo().min(hi);
        LaurentSeries::new(self.field, lo, hi, false, r)
    }

    /// `Ok(())` when `f` lies in the point to precision, otherwise the first
    /// exponent where the residual is nonzero and its coefficient.
    pub fn membership(&self, f: &LaurentSeries) -> Result<std::result::Result<(), (i64, Q)>> {
        let r = self.reduce(f)?;
        Ok(match r.leading() {
            None => Ok(()),
            Some((e, c)) => Err((e, c.clone())),
        })
    }

    /// The annihilator under `(f, g) = res f g dz`, with depth `m2` and
    /// precision `d2`.
    pub fn perp(&self, m2: i64, d2: i64) -> Result<Self> {
        let f = self.field;
        if d2 > self.depth {
            return Err(Error::depth("perp precision", d2, self.depth));
        }
        if m2 > self.precision {
            return Err(Error::precision("perp depth", m2, self.precision));
        }
        if self.valuations.max() >= m2 {
            return Err(Error::depth("perp depth below the top valuation", self.valuations.max() + 1, m2));
        }
        let mut frame = Vec::new();
        for s in self.valuations.complement().exceptional().chain(self.valuations.max() + 1..m2) {
            if self.valuations.contains(s) {
                continue;
            }
            let w = -1 - s;
            if w >= d2 {
                return Err(Error::precision("perp member", w + 1, d2));
            }
            let mut terms = vec![(w, Q::one())];
            for (v, e) in self.frame.range(..s) {
                let c = e.coeff_unchecked(s);
                if !c.is_zero() {
                    terms.push((-1 - v, f.neg(&c)));
                }
            }
            frame.push(LaurentSeries::poly(f, terms).truncate(d2));
        }
        Self::normalize(f, &frame, m2, d2)
    }

    /// `perp` with depth and precision exchanged, so that `perp` is an
    /// involution on points.
    pub fn perp_default(&self) -> Result<Self> {
        self.perp(self.precision, self.depth)
    }

    /// `g U` for a scalar unit `g`.
    pub fn act(&self, g: &LaurentSeries) -> Result<Self> {
        self.field.check_same(&g.field())?;
        let (k, _) = g
            .leading()
            .ok_or_else(|| Error::NotUnit(format!("{g}")))?;
        let frame: Vec<LaurentSeries> = self.frame.values().map(|e| g.mul(e)).collect::<Result<_>>()?;
        let precision = frame.iter().map(|s| s.eff_hi()).min().unwrap_or(self.precision + k).min(self.precision + k);
        Self::normalize(self.field, &frame, self.depth - k, precision)
    }

    /// `z^n U`.
    pub fn shift(&self, n: i64) -> Self {
        GrassPoint {
            field: self.field,
            frame: self.frame.iter().map(|(v, s)| (v + n, s.monomial_shift(n))).collect(),
            depth: self.depth - n,
            precision: self.precision + n,
            valuations: self.valuations.shift(n),
        }
    }

    /// Restricts to a smaller depth and precision.
    pub fn restrict(&self, depth: i64, precision: i64) -> Result<Self> {
        if depth > self.depth {
            return Err(Error::depth("restriction", depth, self.depth));
        }
        if precision > self.precision {
            return Err(Error::precision("restriction", precision, self.precision));
        }
        let frame: Vec<LaurentSeries> = self
            .frame
            .range(-depth..)
            .map(|(_, s)| s.truncate(precision))
            .collect();
        Self::normalize(self.field, &frame, depth, precision)
    }

    /// True when both points agree on the depth and precision they share.
    pub fn same_point(&self, other: &Self) -> bool {
        let m = self.depth.min(other.depth);
        let d = self.precision.min(other.precision);
        match (self.restrict(m, d), other.restrict(m, d)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    const QF: FieldSpec = FieldSpec::Rational;

    fn cusp() -> GrassPoint {
        GrassPoint::from_valuations(QF, &ValuationSet::new(-1, [0]), 8, 8).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let frame = [
            LaurentSeries::poly_int(QF, &[(0, 1)]),
            LaurentSeries::poly_int(QF, &[(-2, 1)]),
            LaurentSeries::poly_int(QF, &[(-3, 1)]),
        ];
        let u = GrassPoint::normalize(QF, &frame, 3, 4).unwrap();
        assert_eq!(u.index(), 0);
        assert_eq!(u.stratum().0, Partition::new(vec![1]).unwrap());
        let v = GrassPoint::normalize(
            QF,
            &[LaurentSeries::poly_int(QF, &[(-2, 1), (0, 1)]), LaurentSeries::poly_int(QF, &[(-2, 1)])],
            2,
            3,
        )
        .unwrap();
        assert_eq!(v.member(0).unwrap().terms().count(), 1);
        let bad = GrassPoint::normalize(
            QF,
            &[LaurentSeries::poly_int(QF, &[(-1, 1)]), LaurentSeries::poly_int(QF, &[(-1, 2)])],
            1,
            3,
        );
        assert!(matches!(bad, Err(Error::DependentFrame(_))));
    }

    #[test]
    fn strata() {
        let vac = GrassPoint::vacuum(QF, 5, 5).unwrap();
        let (lam, s) = vac.stratum();
        assert!(lam.is_empty());
        assert_eq!(s, MayaDiagram::vacuum());
        let (lam, s) = cusp().stratum();
        assert_eq!(lam, Partition::new(vec![1]).unwrap());
        assert_eq!(s, MayaDiagram::new(1, [-1]));
        let line = GrassPoint::from_valuations(QF, &ValuationSet::new(1, []), 5, 5).unwrap();
        assert_eq!(line.index(), 1);
        assert_eq!(line.stratum(), (Partition::empty(), MayaDiagram::new(1, [])));
    }

    #[test]
    fn pluecker_of_monomial_points() {
        let vac = GrassPoint::vacuum(QF, 6, 6).unwrap();
        assert_eq!(vac.pluecker(&Partition::empty()).unwrap(), q(1));
        let c = cusp();
        for lam in Partition::up_to(4) {
            let want = if lam.parts() == [1] { q(1) } else { q(0) };
            assert_eq!(c.pluecker(&lam).unwrap(), want);
        }
    }

    #[test]
    fn pluecker_one_parameter() {
        // span{z^{-1} + a z, z^{-2}, ...}
        let a = q(3);
        let mut frame = vec![LaurentSeries::poly(QF, [(-1, q(1)), (1, a.clone())]).truncate(6)];
        for v in 2..=6 {
            frame.push(LaurentSeries::monomial(QF, -v, q(1)).truncate(6));
        }
        let u = GrassPoint::normalize(QF, &frame, 6, 6).unwrap();
        assert_eq!(u.pluecker(&Partition::empty()).unwrap(), q(1));
        // row 1 replaces row -1: T' = {1, -2, -3, ...} is the partition (2)
        assert_eq!(u.pluecker(&Partition::new(vec![2]).unwrap()).unwrap(), a);
        assert_eq!(u.pluecker(&Partition::new(vec![1]).unwrap()).unwrap(), q(0));
    }

    #[test]
    fn perp_examples() {
        let line = GrassPoint::from_valuations(QF, &ValuationSet::new(1, []), 6, 6).unwrap();
        let lp = line.perp_default().unwrap();
        assert_eq!(lp.index(), -1);
        assert_eq!(lp.valuations(), &ValuationSet::new(-1, []));
        let vac = GrassPoint::vacuum(QF, 6, 6).unwrap();
        assert!(vac.perp_default().unwrap().same_point(&vac));
        assert!(cusp().perp_default().unwrap().perp_default().unwrap().same_point(&cusp()));
    }

    #[test]
    fn act_by_units() {
        let c = cusp();
        let z2 = LaurentSeries::monomial(QF, -2, q(1));
        let shifted = c.act(&z2).unwrap();
        assert_eq!(shifted.index(), c.index() - 2);
        assert!(shifted.same_point(&c.shift(-2)));
        assert!(c.act(&LaurentSeries::one(QF)).unwrap().same_point(&c));
        let g = LaurentSeries::poly_int(QF, &[(0, 1), (1, 2)]);
        let gi = g.invert(30).unwrap();
        let back = c.act(&g).unwrap().act(&gi).unwrap();
        assert!(back.same_point(&c));
    }

    #[test]
    fn membership() {
        let c = cusp();
        let f = LaurentSeries::poly_int(QF, &[(-3, 2), (0, 5)]);
        assert_eq!(c.membership(&f).unwrap(), Ok(()));
        let g = LaurentSeries::poly_int(QF, &[(-1, 1)]);
        assert_eq!(c.membership(&g).unwrap(), Err((-1, q(1))));
    }
}
