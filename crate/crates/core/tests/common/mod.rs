#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sato_core::grassmannian::GrassPoint;
use sato_core::krichever::{krichever_map, CurveSpec};
use sato_core::partitions::ValuationSet;
use sato_core::{FieldSpec, LaurentSeries, Q};

pub const QF: FieldSpec = FieldSpec::Rational;
pub const DEPTH: i64 = 16;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn qs(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&c| q(c)).collect()
}

pub fn line() -> CurveSpec {
    CurveSpec::superelliptic(QF, 2, qs(&[0, 1])).unwrap()
}

pub fn elliptic() -> CurveSpec {
    CurveSpec::superelliptic(QF, 2, qs(&[0, -1, 0, 1])).unwrap()
}

pub fn trigonal() -> CurveSpec {
    CurveSpec::superelliptic(QF, 3, qs(&[1, 0, 0, 0, 1])).unwrap()
}

pub fn curve_point(c: &CurveSpec) -> GrassPoint {
    krichever_map(c, DEPTH, DEPTH).unwrap()
}

pub fn monomial_point(t: &ValuationSet) -> GrassPoint {
    GrassPoint::from_valuations(QF, t, DEPTH, DEPTH).unwrap()
}

pub fn vacuum() -> GrassPoint {
    GrassPoint::vacuum(QF, DEPTH, DEPTH).unwrap()
}

pub fn cusp() -> GrassPoint {
    monomial_point(&ValuationSet::new(-1, [0]))
}

/// Members `z^v` for `v ∈ t`, with `extra` added to the member of valuation `v`.
pub fn frame_point(t: &ValuationSet, extra: &[(i64, &[(i64, i64)])]) -> GrassPoint {
    let frame: Vec<LaurentSeries> = t
        .members_from(-DEPTH)
        .into_iter()
        .map(|v| {
            let mut terms = vec![(v, q(1))];
            for (w, add) in extra {
                if *w == v {
                    terms.extend(add.iter().map(|&(e, c)| (e, q(c))));
                }
            }
            LaurentSeries::new(QF, v, DEPTH, false, terms).unwrap()
        })
        .collect();
    GrassPoint::normalize(QF, &frame, DEPTH, DEPTH).unwrap()
}

/// `u` with `z` added to its frame member of valuation `v`.
pub fn perturbed(u: &GrassPoint, v: i64) -> GrassPoint {
    let frame: Vec<LaurentSeries> = u
        .frame()
        .map(|(w, e)| {
            if w == v {
                e.add(&LaurentSeries::monomial(QF, 1, q(1)).truncate(u.precision())).unwrap()
            } else {
                e.clone()
            }
        })
        .collect();
    GrassPoint::normalize(QF, &frame, u.depth(), u.precision()).unwrap()
}

/// A point with valuation set `t` whose members carry random corrections.
pub fn random_point(t: &ValuationSet, seed: u64) -> GrassPoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let frame: Vec<LaurentSeries> = t
        .members_from(-DEPTH)
        .into_iter()
        .map(|v| {
            let mut terms = vec![(v, q(1))];
            for e in v + 1..DEPTH {
                if !t.contains(e) || rng.gen_bool(0.3) {
                    terms.push((e, q(rng.gen_range(-3..=3))));
                }
            }
            LaurentSeries::new(QF, v, DEPTH, false, terms).unwrap()
        })
        .collect();
    GrassPoint::normalize(QF, &frame, DEPTH, DEPTH).unwrap()
}

/// `span{1 + z, z^{-2} + z, z^{-3}, ...}`.
pub fn shifted_unit_point() -> GrassPoint {
    frame_point(&ValuationSet::new(-1, [0]), &[(0, &[(1, 1)]), (-2, &[(1, 1)])])
}

/// `span{1, z^{-2} + z, z^{-3}, ...}`: contains 1, not closed.
pub fn open_cusp() -> GrassPoint {
    frame_point(&ValuationSet::new(-1, [0]), &[(-2, &[(1, 1)])])
}
