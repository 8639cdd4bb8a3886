mod common;

use common::*;
use proptest::prelude::*;
use sato_core::cli::{point_from_json, point_json, series_from_json, series_json, tau_from_json};
use sato_core::partitions::{partition_of_valuations, schur, valuations_of_partition, Partition, ValuationSet};
use sato_core::tau_ba::tau_expand;
use sato_core::tpoly::TPoly;
use serde_json::json;

fn partitions() -> impl Strategy<Value = Partition> {
    prop::collection::vec(0u32..=6, 0..=5).prop_map(|mut parts| {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        parts.retain(|&p| p > 0);
        Partition::new(parts).unwrap()
    })
}

proptest! {
    #[test]
    fn partitions_and_valuation_sets(lambda in partitions(), n in -4i64..=4) {
        let t = valuations_of_partition(&lambda, n);
        prop_assert_eq!(t.index(), n);
        prop_assert_eq!(partition_of_valuations(&t, n).unwrap(), lambda.clone());
        prop_assert_eq!(t.complement().complement(), t.clone());
        prop_assert_eq!(lambda.transpose().transpose(), lambda);
    }

    #[test]
    fn monomial_points_sit_in_their_stratum(lambda in partitions(), n in -2i64..=2) {
        let t = valuations_of_partition(&lambda, n);
        let u = monomial_point(&t);
        prop_assert_eq!(u.index(), n);
        prop_assert_eq!(u.stratum().0, lambda);
    }
}

#[test]
fn points_survive_json() {
    let points = [
        vacuum(),
        cusp(),
        curve_point(&trigonal()),
        random_point(&ValuationSet::new(-2, [-1, 1]), 71),
        open_cusp(),
    ];
    for u in &points {
        let v = point_json(u);
        let text = serde_json::to_string(&v).unwrap();
        let back = point_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert!(back.same_point(u));
        assert_eq!(back.index(), u.index());
        assert_eq!(serde_json::to_string(&point_json(&back)).unwrap(), text);
    }
}

#[test]
fn series_survive_json() {
    let s = sato_core::LaurentSeries::new(QF, -3, 4, false, [(-3, qr(1, 2)), (0, q(-7)), (3, qr(5, 9))]).unwrap();
    assert_eq!(series_from_json(&series_json(&s)).unwrap(), s);
    let bad = json!({"field": "Q", "lo": 0, "hi": 2, "coeffs": [[5, "1"]]});
    assert!(series_from_json(&bad).is_err());
}

#[test]
fn tau_files_follow_pluecker_coordinates() {
    let u = random_point(&ValuationSet::new(-1, [0]), 72);
    let w = 5;
    let coefficients: Vec<_> = u
        .pluecker_all(w)
        .unwrap()
        .into_iter()
        .map(|(l, c)| json!({"partition": l.parts(), "coefficient": sato_core::scalar::format_q(&c)}))
        .collect();
    let tau = tau_from_json(&json!({"schema_version": 1, "weight": w, "coefficients": coefficients})).unwrap();
    assert_eq!(tau, tau_expand(&u, w).unwrap());
    let mut sum = TPoly::zero(Some(w));
    for (l, c) in u.pluecker_all(w).unwrap() {
        sum = sum.add(&schur(&l, w).unwrap().scale(&c));
    }
    assert_eq!(sum, tau);
}
