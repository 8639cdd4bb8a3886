//! The bilinear residue identity, the KP equations, the moduli equations and
//! the unit condition, each as a residue of BA numerators and as a
//! differential operator applied to products of tau functions.
//!
//! Residues are taken of `Φ = τψ` and `Φ* = τψ*`, so they differ from the
//! residues of `ψ` and `ψ*` by the factor `τ(t)τ(t′)…`, which does not affect
//! vanishing.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gamma::BiSeries;
use crate::grassmannian::GrassPoint;
use crate::partitions::{DiffOperator, Partition};
use crate::scalar::{format_q, Q};
use crate::tau_ba::{phi, phi_direct};
use crate::tpoly::{Monomial, TPoly, VarSet};

/// `[z^k]` of a product of numerators placed on distinct variable sets.
fn product_coefficient(factors: &[(VarSet, &BiSeries)], k: i64, w: u32) -> Result<TPoly> {
    fn go(factors: &[(VarSet, &BiSeries)], k: i64, acc: &TPoly, out: &mut TPoly) -> Result<()> {
        let Some(((set, s), rest)) = factors.split_first() else {
            return Ok(());
        };
        if rest.is_empty() {
            let c = s.coeff(k)?;
            if !c.is_zero() {
                out.add_assign(&acc.mul(&c.rename(VarSet::T, *set)));
            }
            return Ok(());
        }
        // the remaining factors start at z^{lo}
        let rest_lo: i64 = rest.iter().map(|(_, r)| r.lo()).sum();
        for (a, c) in s.terms() {
            if a > k - rest_lo {
                break;
            }
            let next = acc.mul(&c.rename(VarSet::T, *set));
            if !next.is_zero() {
                go(rest, k - a, &next, out)?;
            }
        }
        Ok(())
    }
    let mut out = TPoly::zero(Some(w));
    go(factors, k, &TPoly::one(Some(w)), &mut out)?;
    Ok(out)
}

fn same_index(u: &GrassPoint, u2: &GrassPoint) -> Result<()> {
    if u.index() != u2.index() {
        return Err(Error::IndexMismatch(format!(
            "bilinear identity needs equal indices, got {} and {}",
            u.index(),
            u2.index()
        )));
    }
    Ok(())
}

/// `res_{z=0} Φ_U(z, t) Φ*_{U′}(z, t′) dz/z²` to weight `w` in `t` and `t′`.
pub fn bilinear_residue(u: &GrassPoint, u2: &GrassPoint, w: u32) -> Result<TPoly> {
    same_index(u, u2)?;
    let hi = w as i64 + 2;
    let a = phi(u, w, hi, false)?;
    let b = phi(u2, w, hi, true)?;
    product_coefficient(&[(VarSet::T, &a), (VarSet::T1, &b)], 1, w)
}

/// The same residue computed from two tau functions alone, which need
/// weight `2w + 1`.
pub fn bilinear_residue_of_taus(tau: &TPoly, tau2: &TPoly, w: u32) -> Result<TPoly> {
    let hi = w as i64 + 2;
    let a = phi_direct(tau, w, hi, false)?;
    let b = phi_direct(tau2, w, hi, true)?;
    product_coefficient(&[(VarSet::T, &a), (VarSet::T1, &b)], 1, w)
}

fn genus_index(u: &GrassPoint, g: i64) -> Result<()> {
    if u.index() != 1 - g {
        return Err(Error::IndexMismatch(format!(
            "genus {g} needs index {}, point has index {}",
            1 - g,
            u.index()
        )));
    }
    Ok(())
}

/// `res_{z=0} Φ_U(z,t) Φ_U(z,t′) Φ*_U(z,t″) z^{n−3} dz` with `n = 1 − g`, to
/// weight `w` in each set.
pub fn moduli_residue(u: &GrassPoint, g: i64, w: u32) -> Result<TPoly> {
    genus_index(u, g)?;
    let k = 1 + g;
    let hi = k + 2 * w as i64 + 1;
    let a = phi(u, w, hi, false)?;
    let b = phi(u, w, hi, true)?;
    product_coefficient(&[(VarSet::T, &a), (VarSet::T1, &a), (VarSet::T2, &b)], k, w)
}

/// The moduli residue from three tau functions alone; they need weight
/// `3w + 2 + g`.
pub fn moduli_residue_of_taus(taus: [&TPoly; 3], g: i64, w: u32) -> Result<TPoly> {
    let k = 1 + g;
    let hi = k + 2 * w as i64 + 1;
    let a = phi_direct(taus[0], w, hi, false)?;
    let b = phi_direct(taus[1], w, hi, false)?;
    let c = phi_direct(taus[2], w, hi, true)?;
    product_coefficient(&[(VarSet::T, &a), (VarSet::T1, &b), (VarSet::T2, &c)], k, w)
}

/// `res_{z=0} Φ*_U(z, t) dz/z^{n+1} = [z^n] Φ*_U`, `n` the index.
pub fn unit_residue(u: &GrassPoint, w: u32) -> Result<TPoly> {
    let n = u.index();
    let b = phi(u, w, n.max(-(w as i64)) + 1, true)?;
    if n < b.lo() {
        return Ok(TPoly::zero(Some(w)));
    }
    b.coeff(n)
}

/// `Σ_{β−α=m} p_β(±∂̃) D_{λ,α}(∓∂̃)` on `set`; `p_negate` selects the sign
/// inside `p`, and `D` takes the other sign.
fn block(lambda: &Partition, m: i64, set: VarSet, p_negate: bool) -> DiffOperator {
    let mut op = DiffOperator::from_symbol(TPoly::zero(None));
    for alpha in 0..=lambda.weight() {
        let beta = m + alpha as i64;
        if beta < 0 {
            continue;
        }
        let d = DiffOperator::d_operator(lambda, alpha, set, !p_negate);
        if d.is_zero() {
            continue;
        }
        op = op.add(&DiffOperator::p(beta as u32, set, p_negate).compose(&d));
    }
    op
}

/// Sum of `Π_i block_i(m_i)` over `m_1 + ... = total`. Each `m_i` lies in
/// `[−|λ_i|, total + Σ_{j≠i} |λ_j|]` since `D_{λ,α}` vanishes for `α > |λ|`
/// and `β >= 0`; this is the finiteness bound of the tuple sums.
fn tuple_sum(parts: &[(Partition, VarSet, bool)], total: i64) -> DiffOperator {
    let weight: i64 = parts.iter().map(|(l, _, _)| l.weight() as i64).sum();
    fn go(
        parts: &[(Partition, VarSet, bool)],
        total: i64,
        weight: i64,
        acc: &DiffOperator,
        out: &mut DiffOperator,
    ) {
        let Some(((lam, set, neg), rest)) = parts.split_first() else {
            return;
        };
        if rest.is_empty() {
            let b = block(lam, total, *set, *neg);
            *out = out.add(&acc.compose(&b));
            return;
        }
        let lo = -(lam.weight() as i64);
        let hi = total + weight - lam.weight() as i64;
        for m in lo..=hi {
            let b = block(lam, m, *set, *neg);
            if b.is_zero() {
                continue;
            }
            go(rest, total - m, weight - lam.weight() as i64, &acc.compose(&b), out);
        }
    }
    let mut out = DiffOperator::from_symbol(TPoly::zero(None));
    go(parts, total, weight, &DiffOperator::identity(), &mut out);
    out
}

/// `Σ p_{β1}(∂̃_t) D_{λ1,α1}(−∂̃_t) p_{β2}(−∂̃_{t′}) D_{λ2,α2}(∂̃_{t′})` over
/// `−α1 + β1 − α2 + β2 = 1`, evaluated at `t = t′ = 0`.
pub fn kp_operator(l1: &Partition, l2: &Partition) -> DiffOperator {
    tuple_sum(&[(l1.clone(), VarSet::T, false), (l2.clone(), VarSet::T1, true)], 1)
        .evaluated_at_zero(&[VarSet::T, VarSet::T1])
}

/// `kp_operator(λ1, λ2)` applied to `τ(t) τ(t′)` at zero.
pub fn kp_check(tau: &TPoly, l1: &Partition, l2: &Partition) -> Result<Q> {
    kp_operator(l1, l2).pair_product(&[(VarSet::T, tau), (VarSet::T1, tau)])
}

/// `P(λ1, λ2, λ3)` of the moduli equations for genus `g`: the signs of the
/// first two sets as in the KP operator, the third with `p(−∂̃) D(∂̃)`, over
/// `Σ(β_i − α_i) = 1 + g`.
pub fn moduli_operator(l1: &Partition, l2: &Partition, l3: &Partition, g: i64) -> DiffOperator {
    tuple_sum(
        &[
            (l1.clone(), VarSet::T, false),
            (l2.clone(), VarSet::T1, false),
            (l3.clone(), VarSet::T2, true),
        ],
        1 + g,
    )
    .evaluated_at_zero(&[VarSet::T, VarSet::T1, VarSet::T2])
}

/// `moduli_operator(λ1, λ2, λ3, g)` applied to `τ(t) τ(t′) τ(t″)` at zero.
pub fn moduli_check(tau: &TPoly, l: [&Partition; 3], g: i64) -> Result<Q> {
    moduli_operator(l[0], l[1], l[2], g).pair_product(&[(VarSet::T, tau), (VarSet::T1, tau), (VarSet::T2, tau)])
}

/// `Σ_{−α+β=1−g} p_β(−∂̃) D_{λ,α}(∂̃)` at zero.
pub fn unit_operator(lambda: &Partition, g: i64) -> DiffOperator {
    block(lambda, 1 - g, VarSet::T, true).evaluated_at_zero(&[VarSet::T])
}

/// `unit_operator(λ, g)` applied to `τ` at zero.
pub fn unit_condition(tau: &TPoly, g: i64, lambda: &Partition) -> Result<Q> {
    unit_operator(lambda, g).pair_product(&[(VarSet::T, tau)])
}

/// `op(f)|_0` for an operator evaluated at zero on every set it touches.
pub fn pairing(op: &DiffOperator, f: &TPoly) -> Result<Q> {
    Ok(op.apply(f)?.constant_term())
}

/// The Hirota form of KP, `(D_1^4 + 3D_2^2 − 4D_1D_3) τ·τ` at zero, as an
/// operator on `τ(t) τ(t′)` with `D_i = ∂_{t_i} − ∂_{t′_i} = i(∂̃_i − ∂̃′_i)`.
pub fn hirota_kp() -> DiffOperator {
    use crate::tpoly::Var;
    let d = |i: u32| {
        TPoly::var(Var::new(VarSet::T, i), None)
            .sub(&TPoly::var(Var::new(VarSet::T1, i), None))
            .scale(&Q::from_integer((i as i64).into()))
    };
    let sym = d(1)
        .pow(4)
        .add(&d(2).pow(2).scale(&Q::from_integer(3.into())))
        .sub(&d(1).mul(&d(3)).scale(&Q::from_integer(4.into())));
    DiffOperator::from_symbol(sym).evaluated_at_zero(&[VarSet::T, VarSet::T1])
}

/// Average of an operator on `(t, t′)` and its image under `t ↔ t′`; two
/// operators agree on every `τ(t)τ(t′)` exactly when these agree.
pub fn symmetrized(op: &DiffOperator) -> DiffOperator {
    let s = op.symbol();
    let swapped = s.rename(VarSet::T, VarSet::T2).rename(VarSet::T1, VarSet::T).rename(VarSet::T2, VarSet::T1);
    DiffOperator::from_symbol(s.add(&swapped).scale(&(Q::one() / Q::from_integer(2.into()))))
        .evaluated_at_zero(&op.at_zero().iter().copied().collect::<Vec<_>>())
}

/// The diagram pair whose KP operator is a multiple of [`hirota_kp`] on
/// symmetric arguments, and the multiple.
pub fn hirota_pair() -> (Partition, Partition, Q) {
    let (a, b, c) = HIROTA;
    (
        Partition::new(a.to_vec()).expect("valid partition"),
        Partition::new(b.to_vec()).expect("valid partition"),
        Q::new(c.0.into(), c.1.into()),
    )
}

const HIROTA: (&[u32], &[u32], (i64, i64)) = (&[], &[1, 1, 1], (1, 24));

/// Nonzero `c` with `symmetrized(a) = c·symmetrized(b)`, if any.
pub fn proportional(a: &DiffOperator, b: &DiffOperator) -> Option<Q> {
    let (sa, sb) = (symmetrized(a), symmetrized(b));
    let (m, cb) = sb.symbol().terms().next()?;
    let c = sa.symbol().coeff(m) / cb;
    if c.is_zero() {
        return None;
    }
    (sa.symbol() == &sb.symbol().scale(&c)).then_some(c)
}

/// Outcome of a vanishing check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Every tested coefficient is exactly zero.
    Consistent,
    Failed,
}

/// A nonzero coefficient and where it sits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(rename = "witness_location")]
    pub location: String,
    #[serde(rename = "witness_coefficient")]
    pub coefficient: String,
}

/// Machine-readable result of a check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub point: String,
    pub weight: u32,
    pub status: Status,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl CheckReport {
    pub fn new(check: &str, point: &str, weight: u32, witness: Option<Witness>) -> Self {
        CheckReport {
            check: check.into(),
            point: point.into(),
            weight,
            status: if witness.is_some() { Status::Failed } else { Status::Consistent },
            witness,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Consistent
    }
}

/// First nonzero coefficient of a polynomial, in monomial order.
pub fn polynomial_witness(f: &TPoly) -> Option<Witness> {
    f.terms().next().map(|(m, c)| Witness {
        location: monomial_name(m),
        coefficient: format_q(c),
    })
}

fn monomial_name(m: &Monomial) -> String {
    if m.is_empty() {
        return "1".into();
    }
    let body = TPoly::from_terms([(m.clone(), Q::one())], None).to_string();
    body.trim_start_matches("1*").to_string()
}

/// Every diagram tuple of total weight at most `max_weight`, in canonical
/// order.
pub fn diagram_tuples(arity: usize, max_weight: u32) -> Vec<Vec<Partition>> {
    let mut out: Vec<Vec<Partition>> = vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::new();
        for t in &out {
            let used: u32 = t.iter().map(|l| l.weight()).sum();
            for lam in Partition::up_to(max_weight - used) {
                let mut t2 = t.clone();
                t2.push(lam);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

fn scan(tuples: Vec<Vec<Partition>>, f: impl Fn(&[Partition]) -> Result<Q> + Sync) -> Result<Option<Witness>> {
    let values: Vec<Result<Q>> = tuples.par_iter().map(|t| f(t)).collect();
    for (t, v) in tuples.iter().zip(values) {
        let v = v?;
        if !v.is_zero() {
            let names: Vec<String> = t.iter().map(|l| l.to_string()).collect();
            return Ok(Some(Witness {
                location: names.join(" "),
                coefficient: format_q(&v),
            }));
        }
    }
    Ok(None)
}

/// KP equations for every pair with `|λ1| + |λ2| <= max_weight`.
pub fn kp_scan(tau: &TPoly, max_weight: u32) -> Result<Option<Witness>> {
    scan(diagram_tuples(2, max_weight), |t| kp_check(tau, &t[0], &t[1]))
}

/// Moduli equations for every triple with `Σ|λ_i| <= max_weight`.
pub fn moduli_scan(tau: &TPoly, g: i64, max_weight: u32) -> Result<Option<Witness>> {
    scan(diagram_tuples(3, max_weight), |t| moduli_check(tau, [&t[0], &t[1], &t[2]], g))
}

/// Unit condition for every `|λ| <= max_weight`.
pub fn unit_scan(tau: &TPoly, g: i64, max_weight: u32) -> Result<Option<Witness>> {
    scan(diagram_tuples(1, max_weight), |t| unit_condition(tau, g, &t[0]))
}
