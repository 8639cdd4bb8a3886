//! Tau functions, Baker-Akhiezer functions and the Addition Formula.
//!
//! Times are exponential coordinates: the group element attached to `t` is
//! `v(t, z) = exp(Σ t_i z^{-i}) = Σ_k p_k(t) z^{-k}`. A point of index `n`
//! is handled through `U_0 = z^{-n} U`, which has index 0.
//!
//! Nothing here divides by `τ` except [`ba`] and [`ba_adjoint`]. Everything
//! else works with the numerators `Φ = τ(t)·ψ(z, t) = v^{-1} τ(t + [z])` and
//! `Φ* = τ(t)·ψ*(z, t) = v τ(t − [z])`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gamma::BiSeries;
use crate::grassmannian::GrassPoint;
use crate::laurent::LaurentSeries;
use crate::partitions::schur::poly_det;
use crate::partitions::{elementary_schur, schur, DiffOperator};
use crate::scalar::{FieldSpec, Q};
use crate::tpoly::{monomial_weight, Monomial, TPoly, VarSet};

/// `z^{-n} U`, the index-0 representative.
pub fn index_zero(u: &GrassPoint) -> GrassPoint {
    u.shift(-u.index())
}

/// Sufficiency rule for `τ` through weight `w`: the index-0 representative
/// must have depth and precision at least `w`.
fn budget(u0: &GrassPoint, w: u32) -> Result<()> {
    if u0.depth() < w as i64 {
        return Err(Error::depth(format!("tau through weight {w}"), w as i64, u0.depth()));
    }
    if u0.precision() < w as i64 {
        return Err(Error::precision(format!("tau through weight {w}"), w as i64, u0.precision()));
    }
    Ok(())
}

/// `τ_U = Σ_{|λ| ≤ w} Ω_λ(U) χ_λ(t)`, normalized by the stratum coordinate.
pub fn tau_expand(u: &GrassPoint, w: u32) -> Result<TPoly> {
    u.field().require_char0()?;
    let u0 = index_zero(u);
    budget(&u0, w)?;
    let mut tau = TPoly::zero(Some(w));
    for (lam, c) in u0.pluecker_all(w)? {
        tau.add_assign(&schur(&lam, w)?.scale(&c));
    }
    Ok(tau)
}

/// `τ_U` as the determinant of the projection of `v(t) U_0` onto `V_-`.
///
/// Rows are the exponents `-R..-1` and columns the frame members with
/// valuation `>= -R`, where `R` is the depth; the tail contributes an
/// identity block.
pub fn tau_direct(u: &GrassPoint, w: u32) -> Result<TPoly> {
    u.field().require_char0()?;
    let u0 = index_zero(u);
    budget(&u0, w)?;
    let r = u0.depth();
    let cols = u0.valuations().members_from(-r);
    let rows: Vec<i64> = (-r..0).collect();
    debug_assert_eq!(rows.len(), cols.len());
    let p: Vec<TPoly> = (0..=w).map(|k| elementary_schur(k, w)).collect::<Result<_>>()?;
    let m: Vec<Vec<TPoly>> = rows
        .iter()
        .map(|&row| {
            cols.iter()
                .map(|&v| {
                    let e = u0.member(v).expect("frame covers the depth");
                    let mut acc = TPoly::zero(Some(w));
                    for (k, pk) in p.iter().enumerate() {
                        let c = e.coeff_unchecked(row + k as i64);
                        if !c.is_zero() {
                            acc.add_assign(&pk.scale(&c));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    Ok(unit_pivot_det(m, w))
}

/// Inverse of a polynomial with invertible constant term, to weight `w`.
pub(crate) fn unit_inverse(p: &TPoly, w: u32) -> Option<TPoly> {
    let c = p.constant_term();
    if c.is_zero() {
        return None;
    }
    let ci = Q::one() / &c;
    let nil = p.scale(&ci).sub(&TPoly::one(Some(w))).truncate(w);
    let mut out = TPoly::one(Some(w));
    let mut pow = TPoly::one(Some(w));
    for _ in 0..w {
        pow = pow.mul(&nil).neg();
        if pow.is_zero() {
            break;
        }
        out.add_assign(&pow);
    }
    Some(out.scale(&ci))
}

fn parity(seq: &[usize]) -> bool {
    let mut odd = false;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                odd = !odd;
            }
        }
    }
    odd
}

/// Determinant over polynomials truncated at `w`: eliminate with pivots of
/// invertible constant term, then expand the remaining block, whose entries
/// all lie in the augmentation ideal.
fn unit_pivot_det(mut m: Vec<Vec<TPoly>>, w: u32) -> TPoly {
    let n = m.len();
    let mut used = vec![false; n];
    let mut pivot_rows = Vec::new();
    let mut pivot_cols = Vec::new();
    let mut det = TPoly::one(Some(w));
    for c in 0..n {
        let Some(r) = (0..n).find(|&r| !used[r] && !m[r][c].constant_term().is_zero()) else {
            continue;
        };
        used[r] = true;
        let inv = unit_inverse(&m[r][c], w).expect("pivot has invertible constant term");
        det = det.mul(&m[r][c]);
        let prow = m[r].clone();
        for (r2, row) in m.iter_mut().enumerate() {
            if used[r2] || row[c].is_zero() {
                continue;
            }
            let f = row[c].mul(&inv);
            for (c2, x) in prow.iter().enumerate() {
                if !x.is_zero() {
                    row[c2] = row[c2].sub(&f.mul(x));
                }
            }
        }
        pivot_rows.push(r);
        pivot_cols.push(c);
    }
    let rest_rows: Vec<usize> = (0..n).filter(|r| !used[*r]).collect();
    let rest_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    if rest_rows.len() > w as usize {
        return TPoly::zero(Some(w));
    }
    let block: Vec<Vec<TPoly>> = rest_rows
        .iter()
        .map(|&r| rest_cols.iter().map(|&c| m[r][c].clone()).collect())
        .collect();
    det = det.mul(&poly_det(&block)).truncate(w);
    let row_perm: Vec<usize> = pivot_rows.iter().chain(&rest_rows).copied().collect();
    let col_perm: Vec<usize> = pivot_cols.iter().chain(&rest_cols).copied().collect();
    if parity(&row_perm) != parity(&col_perm) {
        det.neg()
    } else {
        det
    }
}

/// `p_j(±∂̃) τ`, tagged with truncation weight `out`. It is only known through
/// weight `wt(τ) − j`; callers multiply it by polynomials of weight `>= k`
/// with `k + wt(τ) − j >= out`.
fn shifted(tau: &TPoly, j: u32, negate: bool, out: u32) -> Result<TPoly> {
    let d = DiffOperator::p(j, VarSet::T, negate).apply(tau)?;
    Ok(TPoly::from_terms(d.terms().map(|(m, c)| (m.clone(), c.clone())), Some(out)))
}

/// The z-coefficients of `Φ = Σ p_k(−t) z^{j−k} p_j(∂̃)τ` (or of
/// `Φ* = Σ p_k(t) z^{j−k} p_j(−∂̃)τ` when `adjoint`) below `z^hi`, to weight
/// `w`. The coefficient at `z^a` needs `τ` through weight `w + a`.
pub fn phi_direct(tau: &TPoly, w: u32, hi: i64, adjoint: bool) -> Result<BiSeries> {
    let wt = tau
        .weight()
        .ok_or_else(|| Error::Hypothesis("tau must carry a truncation weight".into()))?;
    let top = wt as i64 - w as i64;
    if hi - 1 > top {
        return Err(Error::precision("numerator z-coefficient", hi - 1 + w as i64, wt as i64));
    }
    let lo = -(w as i64);
    let pk: Vec<TPoly> = (0..=w)
        .map(|k| {
            let p = elementary_schur(k, w)?;
            Ok(if adjoint { p } else { p.negate_set(VarSet::T) })
        })
        .collect::<Result<_>>()?;
    let jmax = (hi - 1 + w as i64).max(-1);
    let d: Vec<TPoly> = (0..=jmax)
        .map(|j| shifted(tau, j as u32, adjoint, w))
        .collect::<Result<_>>()?;
    let mut coeffs = Vec::new();
    for a in lo..hi {
        let mut acc = TPoly::zero(Some(w));
        for (k, p) in pk.iter().enumerate() {
            let j = a + k as i64;
            if j >= 0 && !d[j as usize].is_zero() {
                acc.add_assign(&p.mul(&d[j as usize]));
            }
        }
        coeffs.push((a, acc));
    }
    Ok(BiSeries::new(lo, hi, false, Some(w), coeffs))
}

/// The numerator `Φ` (or `Φ*`) of `U` below `z^hi`, to weight `w`.
///
/// `z^{-1}Φ` lies in `U_0 ⊗ k[t]` (and `z^{-1}Φ*` in `U_0^⊥ ⊗ k[t]`), so it is
/// the sum of the reduced frame members `e_v` weighted by its coefficients at
/// the valuations `v`. Only those low coefficients are taken from `τ`; the
/// rest of the window is certified against the direct formula.
pub fn phi(u: &GrassPoint, w: u32, hi: i64, adjoint: bool) -> Result<BiSeries> {
    let u0 = index_zero(u);
    let base = if adjoint { u0.perp_default()? } else { u0.clone() };
    let top = base.valuations().max();
    let w_tau = w + (top + 1).max(0) as u32;
    let tau = tau_expand(u, w_tau)?;
    let direct = phi_direct(&tau, w, w_tau as i64 - w as i64 + 1, adjoint)?;
    phi_from_frame(&base, &direct, w, hi)
}

fn phi_from_frame(base: &GrassPoint, direct: &BiSeries, w: u32, hi: i64) -> Result<BiSeries> {
    let lo = -(w as i64);
    if base.depth() < w as i64 + 1 {
        return Err(Error::depth("numerator from frame", w as i64 + 1, base.depth()));
    }
    if hi > base.precision() + 1 {
        return Err(Error::precision("numerator from frame", hi, base.precision() + 1));
    }
    let mut coeffs: std::collections::BTreeMap<i64, TPoly> = std::collections::BTreeMap::new();
    for (v, e) in base.frame() {
        if v < lo - 1 {
            continue;
        }
        let c = direct.coeff(v + 1)?;
        if c.is_zero() {
            continue;
        }
        for (x, a) in e.terms() {
            if x + 1 >= hi {
                break;
            }
            coeffs.entry(x + 1).or_insert_with(|| TPoly::zero(Some(w))).add_assign(&c.scale(a));
        }
    }
    let out = BiSeries::new(lo, hi, false, Some(w), coeffs);
    for a in lo..hi.min(direct.hi()) {
        if out.coeff(a)? != direct.coeff(a)? {
            return Err(Error::Membership(format!(
                "numerator coefficient at z^{a} is not in the span of the frame"
            )));
        }
    }
    Ok(out)
}

fn big_cell_inverse(u: &GrassPoint, tau: &TPoly, w: u32) -> Result<TPoly> {
    unit_inverse(tau, w).ok_or_else(|| Error::OffBigCell {
        stratum: u.stratum().0.to_string(),
    })
}

/// `ψ_U(z, t) = v(t, z)^{-1} τ(t + [z]) / τ(t)` on `[zlo, zhi)`, to weight `w`.
pub fn ba(u: &GrassPoint, w: u32, zlo: i64, zhi: i64) -> Result<BiSeries> {
    ba_impl(u, w, zlo, zhi, false)
}

/// `ψ*_U(z, t) = v(t, z) τ(t − [z]) / τ(t)` on `[zlo, zhi)`, to weight `w`.
pub fn ba_adjoint(u: &GrassPoint, w: u32, zlo: i64, zhi: i64) -> Result<BiSeries> {
    ba_impl(u, w, zlo, zhi, true)
}

fn ba_impl(u: &GrassPoint, w: u32, zlo: i64, zhi: i64, adjoint: bool) -> Result<BiSeries> {
    let tau = tau_expand(u, w)?;
    let inv = big_cell_inverse(u, &tau, w)?;
    let num = phi(u, w, zhi, adjoint)?;
    let lo = zlo.max(num.lo());
    let coeffs: Vec<(i64, TPoly)> = num.terms().filter(|(e, _)| *e >= lo).map(|(e, p)| (e, p.mul(&inv))).collect();
    Ok(BiSeries::new(lo, zhi, false, Some(w), coeffs))
}

/// One term `ψ^{(i)}(z) p(t)` of the structure expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaComponent {
    /// `i`, with `p` of weighted degree `i − 1`.
    pub level: u32,
    /// A monomial in `t`.
    pub p: TPoly,
    /// Certified member of `U`.
    pub psi: LaurentSeries,
}

fn monomial_of(lam: &crate::partitions::Partition) -> Monomial {
    let mut m: Monomial = Vec::new();
    for &part in lam.parts().iter().rev() {
        match m.last_mut() {
            Some((v, e)) if v.index == part => *e += 1,
            _ => m.push((crate::tpoly::Var::t(part), 1)),
        }
    }
    m
}

/// The expansion `z^{n-1} τ(t) ψ_U(z, t) = Σ ψ^{(i)}(z) p(t)` over the
/// monomials `p` of weight below `count`, each `ψ^{(i)}` certified to lie in
/// `U` to its precision.
///
/// The factor `τ(t)` keeps the expansion polynomial off the big cell; on the
/// big cell `τ(0) = 1`, so the first level is the same as for `ψ_U`.
pub fn ba_structure(u: &GrassPoint, count: u32) -> Result<Vec<BaComponent>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let n = u.index();
    let u0 = index_zero(u);
    let w = count - 1;
    // components are certified below z^{p} in U_0, which needs τ through
    // weight w + p
    let p = u0.precision() - w as i64;
    if p <= u0.valuations().max() {
        return Err(Error::precision("structure window", u0.valuations().max() + 1 + w as i64, u0.precision()));
    }
    let tau = tau_expand(u, w + p as u32)?;
    let num = phi_direct(&tau, w, p + 1, false)?;
    let field = u.field();
    let mut out = Vec::new();
    for level in 1..=count {
        for lam in crate::partitions::Partition::of_weight(level - 1) {
            let m = monomial_of(&lam);
            let terms = num.terms().map(|(a, p)| (a - 1 + n, p.coeff(&m)));
            let psi = LaurentSeries::new(field, -(w as i64) - 1 + n, p + n, false, terms)?;
            if let Err((e, c)) = u.membership(&psi)? {
                return Err(Error::Membership(format!(
                    "component of {} leaves the point at z^{e} (residual {c})",
                    TPoly::from_terms([(m, Q::one())], None)
                )));
            }
            out.push(BaComponent {
                level,
                p: TPoly::from_terms([(m, Q::one())], None),
                psi,
            });
        }
    }
    Ok(out)
}

/// `f(t)` at the Miwa point `t_i = (s^i/i) Σ_j x_j^i`, as a series in `s`
/// known below `s^{w+1}`, `w` the truncation weight of `f`.
pub fn miwa_series(f: &TPoly, x: &[Q]) -> Result<LaurentSeries> {
    let w = f
        .weight()
        .ok_or_else(|| Error::Hypothesis("polynomial must carry a truncation weight".into()))?;
    let power_sum = |i: u32| -> Q {
        x.iter().map(|xj| num_traits::pow(xj.clone(), i as usize)).sum::<Q>() / Q::from_integer((i as i64).into())
    };
    let mut coeffs: Vec<(i64, Q)> = Vec::new();
    for (m, c) in f.terms() {
        let mut val = c.clone();
        for &(v, e) in m {
            val *= num_traits::pow(power_sum(v.index), e as usize);
        }
        coeffs.push((monomial_weight(m, VarSet::T) as i64, val));
    }
    LaurentSeries::new(FieldSpec::Rational, 0, w as i64 + 1, false, coeffs)
}

/// Both sides of the Addition Formula at `x_j ↦ s x_j`, as series in `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditionPair {
    /// `τ_U` at the Miwa point of `s x`.
    pub lhs: LaurentSeries,
    /// `det(f_i(s x_j)) / Π_{i<j}(s x_i − s x_j)`.
    pub rhs: LaurentSeries,
}

impl AdditionPair {
    /// The constant `c` with `lhs = c·rhs` on the common window, if any.
    pub fn ratio(&self) -> Option<Q> {
        let hi = self.lhs.eff_hi().min(self.rhs.eff_hi());
        let (e, r) = self.rhs.terms().find(|(e, _)| *e < hi)?;
        let c = self.lhs.coeff_unchecked(e) / r;
        let lo = self.lhs.lo().min(self.rhs.lo());
        (lo..hi)
            .all(|k| self.lhs.coeff_unchecked(k) == &c * self.rhs.coeff_unchecked(k))
            .then_some(c)
    }
}

fn check_distinct(x: &[Q]) -> Result<()> {
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            if x[i] == x[j] {
                return Err(Error::VandermondeZero);
            }
        }
    }
    Ok(())
}

/// `V_+ ∩ z^N U_0`, requiring `V = V_+ + z^N U_0`.
fn addition_basis(u0: &GrassPoint, n: usize) -> Result<Vec<LaurentSeries>> {
    let nn = n as i64;
    if let Some(g) = (-u0.depth()..-nn).find(|&v| !u0.valuations().contains(v)) {
        return Err(Error::Hypothesis(format!(
            "V/(V_+ + z^{n} U) is nonzero: valuation {g} is missing"
        )));
    }
    if u0.depth() < nn {
        return Err(Error::depth("addition formula basis", nn, u0.depth()));
    }
    Ok(u0
        .valuations()
        .members_from(-nn)
        .into_iter()
        .map(|v| u0.member(v).expect("member above depth").monomial_shift(nn))
        .collect())
}

fn series_det(m: &[Vec<LaurentSeries>]) -> Result<LaurentSeries> {
    let n = m.len();
    if n == 0 {
        return Ok(LaurentSeries::one(FieldSpec::Rational));
    }
    let mut acc: Option<LaurentSeries> = None;
    for (c, entry) in m[0].iter().enumerate() {
        let minor: Vec<Vec<LaurentSeries>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, s)| s.clone()).collect())
            .collect();
        let mut term = entry.mul(&series_det(&minor)?)?;
        if c % 2 == 1 {
            term = term.neg();
        }
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    Ok(acc.expect("nonempty row"))
}

/// The Addition Formula for `N = x.len()` points, with `τ` through weight `w`.
pub fn addition_formula(u: &GrassPoint, x: &[Q], w: u32) -> Result<AdditionPair> {
    u.field().require_char0()?;
    check_distinct(x)?;
    let n = x.len();
    let u0 = index_zero(u);
    let basis = addition_basis(&u0, n)?;
    let lhs = miwa_series(&tau_expand(u, w)?, x)?;
    let f = FieldSpec::Rational;
    let m: Vec<Vec<LaurentSeries>> = basis
        .iter()
        .map(|fi| {
            x.iter()
                .map(|xj| {
                    let terms = fi
                        .terms()
                        .map(|(e, c)| (e, c * num_traits::pow(xj.clone(), e as usize)));
                    LaurentSeries::new(f, 0, fi.hi(), false, terms)
                })
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    let mut vdm = Q::one();
    for i in 0..n {
        for j in i + 1..n {
            vdm *= &x[i] - &x[j];
        }
    }
    let k = (n * n.saturating_sub(1) / 2) as i64;
    let det = series_det(&m)?;
    if let Some((e, _)) = det.leading() {
        if e < k {
            return Err(Error::Hypothesis(format!("determinant has order {e} below {k}")));
        }
    }
    let rhs = det.monomial_shift(-k).scale(&(Q::one() / vdm));
    let rhs = LaurentSeries::new(f, 0, rhs.hi().max(0), false, rhs.terms().filter(|(e, _)| *e >= 0).map(|(e, c)| (e, c.clone())))?;
    Ok(AdditionPair { lhs, rhs })
}

/// `F_12 F_34 − F_13 F_24 + F_14 F_23` for `F_ij = (s x_i − s x_j) τ_U([s x_i] + [s x_j])`.
pub fn addition_pluecker(u: &GrassPoint, x: &[Q; 4], w: u32) -> Result<LaurentSeries> {
    u.field().require_char0()?;
    check_distinct(x)?;
    addition_basis(&index_zero(u), 2)?;
    let tau = tau_expand(u, w)?;
    let big_f = |i: usize, j: usize| -> Result<LaurentSeries> {
        let s = miwa_series(&tau, &[x[i].clone(), x[j].clone()])?;
        Ok(s.monomial_shift(1).scale(&(&x[i] - &x[j])))
    };
    let a = big_f(0, 1)?.mul(&big_f(2, 3)?)?;
    let b = big_f(0, 2)?.mul(&big_f(1, 3)?)?;
    let c = big_f(0, 3)?.mul(&big_f(1, 2)?)?;
    a.sub(&b)?.add(&c)
}
