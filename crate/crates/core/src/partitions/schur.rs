//! Elementary Schur polynomials `p_j(t)` and Schur polynomials `χ_λ(t)` in
//! the time variables, via the Jacobi–Trudi determinant.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_traits::Zero;

use super::maya::Partition;
use crate::error::{Error, Result};
use crate::scalar::{q, Q};
use crate::tpoly::{TPoly, Var};

fn p_cache() -> &'static Mutex<Vec<TPoly>> {
    static CACHE: OnceLock<Mutex<Vec<TPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![TPoly::one(None)]))
}

fn schur_cache() -> &'static Mutex<HashMap<Partition, TPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<Partition, TPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `p_j(t)` with no truncation: `Σ_j p_j z^j = exp(Σ_i t_i z^i)`.
pub(crate) fn p_exact(j: u32) -> TPoly {
    let mut cache = p_cache().lock().expect("schur cache poisoned");
    while cache.len() <= j as usize {
        // j p_j = Σ_{i=1..j} i t_i p_{j-i}
        let n = cache.len();
        let mut acc = TPoly::zero(None);
        for i in 1..=n {
            let term = TPoly::var(Var::t(i as u32), None).mul(&cache[n - i]).scale(&q(i as i64));
            acc.add_assign(&term);
        }
        cache.push(acc.scale(&Q::new(1.into(), (n as i64).into())));
    }
    cache[j as usize].clone()
}

/// `p_j(t)` truncated at weight `w`.
pub fn elementary_schur(j: u32, w: u32) -> Result<TPoly> {
    if j > w {
        return Err(Error::precision("elementary Schur polynomial weight", j as i64, w as i64));
    }
    Ok(p_exact(j).truncate(w))
}

fn e_exact(j: u32) -> TPoly {
    let p = p_exact(j).negate_set(crate::tpoly::VarSet::T);
    if j % 2 == 1 {
        p.neg()
    } else {
        p
    }
}

/// Determinant of a matrix of polynomials by Laplace expansion along rows,
/// memoized on the set of columns still available.
pub(crate) fn poly_det(m: &[Vec<TPoly>]) -> TPoly {
    let n = m.len();
    let mut memo: HashMap<u32, TPoly> = HashMap::new();
    fn go(row: usize, cols: u32, m: &[Vec<TPoly>], memo: &mut HashMap<u32, TPoly>) -> TPoly {
        let n = m.len();
        if row == n {
            return TPoly::one(None);
        }
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let mut acc = TPoly::zero(None);
        let mut sign_neg = false;
        for c in 0..n {
            if cols & (1 << c) == 0 {
                continue;
            }
            if !m[row][c].is_zero() {
                let minor = go(row + 1, cols & !(1 << c), m, memo);
                let term = m[row][c].mul(&minor);
                acc.add_assign(&if sign_neg { term.neg() } else { term });
            }
            sign_neg = !sign_neg;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    go(0, (1u32 << n) - 1, m, &mut memo)
}

fn schur_exact(lambda: &Partition) -> TPoly {
    if let Some(v) = schur_cache().lock().expect("schur cache poisoned").get(lambda) {
        return v.clone();
    }
    let conj = lambda.transpose();
    let (rows, entry): (&Partition, fn(u32) -> TPoly) = if conj.len() < lambda.len() {
        (&conj, e_exact)
    } else {
        (lambda, p_exact)
    };
    let l = rows.len();
    let m: Vec<Vec<TPoly>> = (1..=l)
        .map(|i| {
            (1..=l)
                .map(|j| {
                    let k = rows.part(i) as i64 - i as i64 + j as i64;
                    if k < 0 {
                        TPoly::zero(None)
                    } else {
                        entry(k as u32)
                    }
                })
                .collect()
        })
        .collect();
    let out = poly_det(&m);
    schur_cache()
        .lock()
        .expect("schur cache poisoned")
        .insert(lambda.clone(), out.clone());
    out
}

/// `χ_λ(t)` truncated at weight `w`.
pub fn schur(lambda: &Partition, w: u32) -> Result<TPoly> {
    if lambda.weight() > w {
        return Err(Error::precision("Schur polynomial weight", lambda.weight() as i64, w as i64));
    }
    Ok(schur_exact(lambda).truncate(w))
}

/// `χ_λ(t)` with no truncation.
pub fn schur_untruncated(lambda: &Partition) -> TPoly {
    schur_exact(lambda)
}

/// Every `μ ⊆ λ` with `λ/μ` a horizontal strip of size `α`.
pub fn horizontal_strips(lambda: &Partition, alpha: u32) -> Vec<Partition> {
    let total = lambda.weight();
    if alpha > total {
        return Vec::new();
    }
    let target = total - alpha;
    let mut out = Vec::new();
    fn go(i: usize, lam: &Partition, remaining: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        let l = lam.len();
        if i > l {
            if remaining == 0 {
                let parts: Vec<u32> = cur.iter().copied().filter(|&x| x > 0).collect();
                out.push(Partition::new(parts).expect("strip of a partition is a partition"));
            }
            return;
        }
        let lo = lam.part(i + 1);
        let hi = lam.part(i);
        // the rows below can contribute at most Σ_{k>i} λ_k
        let rest_max: u32 = (i + 1..=l).map(|k| lam.part(k)).sum();
        for m in (lo..=hi).rev() {
            if m > remaining || remaining - m > rest_max {
                continue;
            }
            cur.push(m);
            go(i + 1, lam, remaining - m, cur, out);
            cur.pop();
        }
    }
    go(1, lambda, target, &mut Vec::new(), &mut out);
    out
}

/// Value of `χ_λ` at the point `t_i = (1/i) Σ_j x_j^i`, computed from the
/// ratio of alternants. Used as an independent check.
pub fn schur_by_alternants(lambda: &Partition, x: &[Q]) -> Q {
    let n = x.len();
    if lambda.len() > n {
        return Q::zero();
    }
    let mat = |exps: Vec<i64>| -> Vec<Vec<Q>> {
        exps.iter()
            .map(|&e| x.iter().map(|xi| num_traits::pow(xi.clone(), e as usize)).collect())
            .collect()
    };
    let f = crate::scalar::FieldSpec::Rational;
    let num = crate::linalg::det(
        f,
        &mat((1..=n).map(|i| lambda.part(i) as i64 + n as i64 - i as i64).collect()),
    );
    let den = crate::linalg::det(f, &mat((1..=n).map(|i| n as i64 - i as i64).collect()));
    num / den
}
