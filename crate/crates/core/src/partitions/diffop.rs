//! Constant-coefficient differential operators in the scaled derivations
//! `∂̃_i = (1/i) ∂/∂t_i`, on up to three time-variable sets.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::maya::Partition;
use super::schur::{horizontal_strips, p_exact, schur_untruncated};
use crate::error::{Error, Result};
use crate::scalar::{factorial, Q};
use crate::tpoly::{Monomial, TPoly, Var, VarSet};

/// A polynomial symbol in `∂̃` (variable `Var{set, i}` stands for `∂̃_i` on
/// `set`), with a flag per set for evaluation at `t = 0` afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffOperator {
    symbol: TPoly,
    at_zero: BTreeSet<VarSet>,
}

impl DiffOperator {
    pub fn identity() -> Self {
        Self::from_symbol(TPoly::one(None))
    }

    pub fn from_symbol(symbol: TPoly) -> Self {
        DiffOperator {
            symbol,
            at_zero: BTreeSet::new(),
        }
    }

    /// `χ_λ(±∂̃)` on `set`.
    pub fn chi(lambda: &Partition, set: VarSet, negate: bool) -> Self {
        Self::from_symbol(on_set(schur_untruncated(lambda), set, negate))
    }

    /// `p_β(±∂̃)` on `set`.
    pub fn p(beta: u32, set: VarSet, negate: bool) -> Self {
        Self::from_symbol(on_set(p_exact(beta), set, negate))
    }

    /// `D_{λ,α}(±∂̃) = Σ_μ χ_μ(±∂̃)` over horizontal `α`-strips `λ/μ`.
    pub fn d_operator(lambda: &Partition, alpha: u32, set: VarSet, negate: bool) -> Self {
        let mut sym = TPoly::zero(None);
        for mu in horizontal_strips(lambda, alpha) {
            sym.add_assign(&on_set(schur_untruncated(&mu), set, negate));
        }
        Self::from_symbol(sym)
    }

    pub fn symbol(&self) -> &TPoly {
        &self.symbol
    }

    pub fn at_zero(&self) -> &BTreeSet<VarSet> {
        &self.at_zero
    }

    /// Flags `sets` for evaluation at zero after differentiation.
    pub fn evaluated_at_zero(mut self, sets: &[VarSet]) -> Self {
        self.at_zero.extend(sets.iter().copied());
        self
    }

    pub fn is_zero(&self) -> bool {
        self.symbol.is_zero()
    }

    /// Highest weighted order among the terms, per set.
    pub fn order(&self, set: VarSet) -> u32 {
        self.symbol.max_weight(set)
    }

    pub fn compose(&self, other: &Self) -> Self {
        DiffOperator {
            symbol: self.symbol.mul(&other.symbol),
            at_zero: self.at_zero.union(&other.at_zero).copied().collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        DiffOperator {
            symbol: self.symbol.add(&other.symbol),
            at_zero: self.at_zero.union(&other.at_zero).copied().collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        DiffOperator {
            symbol: self.symbol.scale(c),
            at_zero: self.at_zero.clone(),
        }
    }

    /// Differentiates `f` and evaluates the flagged sets at zero.
    ///
    /// Fails when `f` is truncated below the order of the operator, since the
    /// result would then depend on discarded terms.
    pub fn apply(&self, f: &TPoly) -> Result<TPoly> {
        if let Some(w) = f.weight() {
            for set in VarSet::TIMES {
                let ord = self.order(set);
                if self.at_zero.contains(&set) && ord > w {
                    return Err(Error::precision("operator order on truncated polynomial", ord as i64, w as i64));
                }
            }
        }
        let mut out = TPoly::zero(f.weight());
        for (dm, dc) in self.symbol.terms() {
            for (fm, fc) in f.terms() {
                if let Some((rest, c)) = differentiate(dm, fm) {
                    if rest.iter().any(|(v, _)| self.at_zero.contains(&v.set)) {
                        continue;
                    }
                    out.add_assign(&TPoly::from_terms([(rest, dc * fc * c)], f.weight()));
                }
            }
        }
        Ok(out)
    }

    /// `op(f_1(t) f_2(t′) ...)|_{0}` for an operator evaluated at zero on every
    /// set. Each factor is given as a polynomial in `t` and is placed on the
    /// named set.
    pub fn pair_product(&self, factors: &[(VarSet, &TPoly)]) -> Result<Q> {
        let mut pairers: Vec<(VarSet, Pairer)> = Vec::new();
        for &(set, f) in factors {
            let ord = self.order(set);
            if let Some(w) = f.weight() {
                if ord > w {
                    return Err(Error::precision("operator order on truncated polynomial", ord as i64, w as i64));
                }
            }
            pairers.push((set, Pairer::new(f)));
        }
        let mut total = Q::zero();
        for (m, c) in self.symbol.terms() {
            // derivatives in a set with no factor kill constants
            if m.iter().any(|(v, _)| !pairers.iter().any(|(s, _)| *s == v.set)) {
                continue;
            }
            let mut val = c.clone();
            for (set, pr) in pairers.iter_mut() {
                let part: Monomial = m.iter().filter(|(v, _)| v.set == *set).copied().collect();
                val *= pr.pair(&part);
                if val.is_zero() {
                    break;
                }
            }
            total += val;
        }
        Ok(total)
    }
}

/// Moves a polynomial in `t` to the symbol variables of `set`, optionally
/// negating them.
fn on_set(p: TPoly, set: VarSet, negate: bool) -> TPoly {
    let p = if set == VarSet::T { p } else { p.rename(VarSet::T, set) };
    if negate {
        p.negate_set(set)
    } else {
        p
    }
}

/// Applies the symbol monomial `dm` (in `∂̃`) to the monomial `fm`.
fn differentiate(dm: &Monomial, fm: &Monomial) -> Option<(Monomial, Q)> {
    let mut rest = fm.clone();
    let mut c = Q::one();
    for &(v, e) in dm {
        let pos = rest.iter().position(|(x, _)| *x == v)?;
        let have = rest[pos].1;
        if have < e {
            return None;
        }
        // falling factorial have!/(have-e)! times (1/i)^e
        let ff: BigInt = factorial(have) / factorial(have - e);
        c *= Q::new(ff, BigInt::from(v.index).pow(e));
        if have == e {
            rest.remove(pos);
        } else {
            rest[pos].1 = have - e;
        }
    }
    Some((rest, c))
}

/// `∂̃^a f |_0 = coeff_{t^a}(f) · a! · Π (1/i)^{a_i}`, memoized per monomial.
struct Pairer<'a> {
    f: &'a TPoly,
    memo: HashMap<Monomial, Q>,
}

impl<'a> Pairer<'a> {
    fn new(f: &'a TPoly) -> Self {
        Pairer {
            f,
            memo: HashMap::new(),
        }
    }

    fn pair(&mut self, part: &Monomial) -> Q {
        if let Some(v) = self.memo.get(part) {
            return v.clone();
        }
        let tm: Monomial = part.iter().map(|&(v, e)| (Var::new(VarSet::T, v.index), e)).collect();
        let c = self.f.coeff(&tm);
        let val = if c.is_zero() {
            Q::zero()
        } else {
            let mut k = c;
            for &(v, e) in part {
                k *= Q::new(factorial(e), BigInt::from(v.index).pow(e));
            }
            k
        };
        self.memo.insert(part.clone(), val.clone());
        val
    }
}
