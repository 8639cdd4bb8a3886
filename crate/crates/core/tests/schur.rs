mod common;

use common::{q, qr, QF};
use proptest::prelude::*;
use sato_core::gamma::exp_char0;
use sato_core::partitions::{horizontal_strips, schur, schur_by_alternants, DiffOperator, Partition};
use sato_core::tpoly::{TPoly, VarSet};
use sato_core::Q;

fn dual(lambda: &Partition) -> DiffOperator {
    DiffOperator::chi(lambda, VarSet::T, false).evaluated_at_zero(&[VarSet::T])
}

#[test]
fn orthonormal_through_weight_6() {
    let ps = Partition::up_to(6);
    let chis: Vec<TPoly> = ps.iter().map(|l| schur(l, 6).unwrap()).collect();
    for l in &ps {
        let op = dual(l);
        for (m, chi) in ps.iter().zip(&chis) {
            let expected = if l == m { q(1) } else { q(0) };
            assert_eq!(op.apply(chi).unwrap().constant_term(), expected, "{l} against {m}");
        }
    }
}

#[test]
fn jacobi_trudi_matches_alternants() {
    let xs = [q(2), qr(-1, 3), q(5), qr(7, 2)];
    for lam in Partition::up_to(6) {
        for n in lam.len().max(1)..=xs.len() {
            let x = &xs[..n];
            let chi = schur(&lam, 6).unwrap();
            // t_i = (1/i) Σ x_j^i
            let at = chi.evaluate(VarSet::T, &|v| {
                x.iter().map(|xj| num_traits::pow(xj.clone(), v.index as usize)).sum::<Q>() / q(v.index as i64)
            });
            assert_eq!(at.constant_term(), schur_by_alternants(&lam, x), "{lam} in {n} variables");
        }
    }
}

#[test]
fn pieri_rule() {
    // p_a χ_μ = Σ χ_λ over λ with λ/μ a horizontal a-strip
    for lam in Partition::up_to(5) {
        for a in 0..=lam.weight() {
            let pa = schur(&Partition::from_padded(&[a as i64]).unwrap(), 6).unwrap();
            let strips = horizontal_strips(&lam, a);
            for mu in Partition::of_weight(lam.weight() - a) {
                let product = pa.mul(&schur(&mu, 6).unwrap());
                let coeff = dual(&lam).apply(&product).unwrap().constant_term();
                assert_eq!(coeff, if strips.contains(&mu) { q(1) } else { q(0) }, "{lam} {a} {mu}");
            }
        }
    }
}

fn rationals(n: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((-9i64..=9, 1i64..=6).prop_map(|(a, b)| qr(a, b)), n)
}

proptest! {
    #[test]
    fn exp_char0_is_a_homomorphism(a in rationals(5), b in rationals(5)) {
        let sum: Vec<Q> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let lhs = exp_char0(QF, &sum).unwrap();
        let rhs = exp_char0(QF, &a).unwrap().mul(&exp_char0(QF, &b).unwrap()).unwrap();
        prop_assert!(lhs.agrees_with(&rhs));
        let neg: Vec<Q> = a.iter().map(|x| -x).collect();
        let one = exp_char0(QF, &a).unwrap().mul(&exp_char0(QF, &neg).unwrap()).unwrap();
        prop_assert!(one.agrees_with(&sato_core::LaurentSeries::one(QF)));
    }
}
