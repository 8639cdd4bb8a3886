//! The Krichever map for superelliptic curves `y^m = f(x)` pointed at their
//! place at infinity, the characterization of its image by `U·U ⊆ U`,
//! Weierstrass gaps, and the inverse reconstruction of a presentation.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::grassmannian::GrassPoint;
use crate::laurent::LaurentSeries;
use crate::linalg::{kernel, rank, rref, Matrix};
use crate::partitions::{valuations_of_partition, Partition, ValuationSet};
use crate::scalar::{format_q, rational_root, FieldSpec, Q};

/// A pointed curve, either as superelliptic data or as an explicit frame of
/// expansions at the point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveSpec {
    /// `y^m = f(x)`, coefficients of `f` in increasing degree.
    Superelliptic { field: FieldSpec, m: u32, f: Vec<Q> },
    Frame { field: FieldSpec, frame: Vec<LaurentSeries> },
}

impl CurveSpec {
    pub fn superelliptic(field: FieldSpec, m: u32, f: Vec<Q>) -> Result<Self> {
        let f: Vec<Q> = f.iter().map(|c| field.reduce(c)).collect::<Result<_>>()?;
        let d = f.iter().rposition(|c| !c.is_zero()).ok_or_else(|| Error::Curve("f is zero".into()))?;
        if m < 2 || d == 0 {
            return Err(Error::Curve(format!("need m >= 2 and deg f >= 1, got m = {m}, deg f = {d}")));
        }
        if (m as usize).gcd(&d) != 1 {
            return Err(Error::Curve(format!("gcd(m, deg f) = gcd({m}, {d}) is not 1")));
        }
        Ok(CurveSpec::Superelliptic {
            field,
            m,
            f: f[..=d].to_vec(),
        })
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            CurveSpec::Superelliptic { field, .. } | CurveSpec::Frame { field, .. } => *field,
        }
    }

    /// `(m − 1)(d − 1)/2` for superelliptic data.
    pub fn genus(&self) -> Option<i64> {
        match self {
            CurveSpec::Superelliptic { m, f, .. } => Some((*m as i64 - 1) * (f.len() as i64 - 2) / 2),
            CurveSpec::Frame { .. } => None,
        }
    }
}

/// An `m`-th root of `c` in the field, if one exists.
fn field_root(field: FieldSpec, c: &Q, m: u32) -> Option<Q> {
    match field {
        FieldSpec::Rational => rational_root(c, m),
        FieldSpec::Prime(p) => (0..p as i64).map(|r| field.from_int(r)).find(|r| {
            let mut x = Q::one();
            for _ in 0..m {
                x = field.mul(&x, r);
            }
            &x == c
        }),
    }
}

/// The power series `R` with `R(0) = r0` and `R^m = a`, below `z^n`.
fn series_root(field: FieldSpec, a: &[Q], m: u32, r0: Q, n: usize) -> Result<Vec<Q>> {
    let m_inv = field.inv(&field.from_int(m as i64)).map_err(|_| {
        Error::Curve(format!("m = {m} is not invertible in {field}"))
    })?;
    // divide out a(0) = r0^m so the recursion runs on a unit with constant 1
    let a0_inv = field.inv(&a[0])?;
    let a: Vec<Q> = (0..n).map(|k| a.get(k).map_or(Q::zero(), |c| field.mul(c, &a0_inv))).collect();
    let mut r = vec![Q::zero(); n];
    if n > 0 {
        r[0] = Q::one();
    }
    for k in 1..n {
        // [z^k] of (r_0 + ... + r_{k-1} z^{k-1})^m
        let mut pow = vec![Q::zero(); k + 1];
        pow[0] = Q::one();
        for _ in 0..m {
            let mut next = vec![Q::zero(); k + 1];
            for (i, x) in pow.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                for j in 0..=(k - i).min(k - 1) {
                    if !r[j].is_zero() {
                        next[i + j] = field.add(&next[i + j], &field.mul(x, &r[j]));
                    }
                }
            }
            pow = next;
        }
        r[k] = field.mul(&field.sub(&a[k], &pow[k]), &m_inv);
    }
    Ok(r.into_iter().map(|c| field.mul(&c, &r0)).collect())
}

/// Expansions of `x` and `y` at infinity in the parameter `z` with
/// `x = z^{-m}` and `y = z^{-d}·R(z^m)`, known below `z^hi`.
pub fn superelliptic_expansions(c: &CurveSpec, hi: i64) -> Result<(LaurentSeries, LaurentSeries)> {
    let CurveSpec::Superelliptic { field, m, f } = c else {
        return Err(Error::Curve("expansions need superelliptic data".into()));
    };
    let (field, m) = (*field, *m);
    let d = f.len() as i64 - 1;
    let lead = f.last().expect("nonempty");
    let r0 = field_root(field, lead, m)
        .ok_or_else(|| Error::Curve(format!("leading coefficient {} has no {m}-th root", format_q(lead))))?;
    // z^{md} f(z^{-m}) = Σ f_k s^{d-k} with s = z^m
    let a: Vec<Q> = (0..=d).map(|j| f[(d - j) as usize].clone()).collect();
    let n = ((hi + d) as f64 / m as f64).ceil().max(1.0) as usize;
    let r = series_root(field, &a, m, r0, n)?;
    let x = LaurentSeries::monomial(field, -(m as i64), Q::one()).truncate(hi);
    let y_terms = r.into_iter().enumerate().map(|(k, c)| (k as i64 * m as i64 - d, c)).filter(|(e, _)| *e < hi);
    let y = LaurentSeries::new(field, -d, hi.max(-d), false, y_terms)?;
    Ok((x, y))
}

/// The point of functions regular away from the marked point, expanded in
/// the local parameter, to depth `depth` and precision `precision`.
pub fn krichever_map(c: &CurveSpec, depth: i64, precision: i64) -> Result<GrassPoint> {
    let (field, m, d) = match c {
        CurveSpec::Frame { field, frame } => return GrassPoint::normalize(*field, frame, depth, precision),
        CurveSpec::Superelliptic { field, m, f } => (*field, *m as i64, f.len() as i64 - 1),
    };
    let g = c.genus().expect("superelliptic");
    // the largest gap is 2g − 1, and every valuation below −depth must be a pole order
    if depth < 2 * g - 1 {
        return Err(Error::depth("Krichever point with all valuations below the window", 2 * g - 1, depth));
    }
    let (x, y) = superelliptic_expansions(c, precision + depth)?;
    let mut frame = Vec::new();
    let mut yj = LaurentSeries::one(field).truncate(precision + depth);
    for j in 0..m {
        let mut i = 0;
        while m * i + d * j <= depth {
            let mut s = yj.clone();
            for _ in 0..i {
                s = s.mul(&x)?;
            }
            frame.push(s.truncate(precision));
            i += 1;
        }
        yj = yj.mul(&y)?;
    }
    GrassPoint::normalize(field, &frame, depth, precision)
}

/// A frame pair whose product leaves the point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureDefect {
    pub left: i64,
    pub right: i64,
    pub exponent: i64,
    pub coefficient: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraReport {
    pub bound: i64,
    /// First nonzero residual of `1` against the frame.
    pub unit_defect: Option<(i64, Q)>,
    pub closure_defect: Option<ClosureDefect>,
}

impl AlgebraReport {
    pub fn passed(&self) -> bool {
        self.unit_defect.is_none() && self.closure_defect.is_none()
    }
}

/// Tests `1 ∈ U` and `e_a·e_b ∈ U` for frame members with `a + b >= −bound`.
///
/// Members below the window are monomials by construction; their products
/// are not tested.
pub fn algebra_check(u: &GrassPoint, bound: i64) -> Result<AlgebraReport> {
    if bound > u.depth() {
        return Err(Error::depth("algebra check", bound, u.depth()));
    }
    let field = u.field();
    let unit_defect = u.membership(&LaurentSeries::one(field).truncate(u.precision()))?.err();
    let frame: Vec<(i64, &LaurentSeries)> = u.frame().collect();
    let mut closure_defect = None;
    'outer: for (i, (a, ea)) in frame.iter().enumerate() {
        for (b, eb) in &frame[i..] {
            if a + b < -bound {
                continue;
            }
            let p = ea.mul(eb)?;
            if let Err((exponent, coefficient)) = u.membership(&p)? {
                closure_defect = Some(ClosureDefect {
                    left: *a,
                    right: *b,
                    exponent,
                    coefficient,
                });
                break 'outer;
            }
        }
    }
    Ok(AlgebraReport {
        bound,
        unit_defect,
        closure_defect,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapData {
    /// `Z<0 ∩ S`, decreasing.
    pub gaps: Vec<i64>,
    pub genus: i64,
    /// Pole orders `{−v : v ∈ T, v <= 0}`, listed up to the conductor.
    pub pole_orders: Vec<i64>,
    /// Minimal generators of the pole orders under addition.
    pub generators: Vec<i64>,
}

fn pole_data(t: &ValuationSet) -> (Vec<i64>, Vec<i64>) {
    let conductor = -t.tail_start() + 1;
    let is_pole = |p: i64| p >= 0 && t.contains(-p);
    let poles: Vec<i64> = (0..conductor.max(0)).filter(|&p| is_pole(p)).collect();
    let smallest = (1..=conductor.max(1)).find(|&p| is_pole(p)).unwrap_or(1);
    let generators = (1..conductor.max(1) + smallest)
        .filter(|&p| is_pole(p))
        .filter(|&p| !(1..p).any(|a| is_pole(a) && is_pole(p - a)))
        .collect();
    (poles, generators)
}

pub fn gaps_and_genus(u: &GrassPoint) -> GapData {
    let t = u.valuations();
    let gaps: Vec<i64> = (t.tail_start().min(0)..0).rev().filter(|&v| !t.contains(v)).collect();
    let (pole_orders, generators) = pole_data(t);
    GapData {
        genus: gaps.len() as i64,
        gaps,
        pole_orders,
        generators,
    }
}

/// True when the valuation set of the stratum `(λ, n)` contains 0 and is
/// closed under addition, i.e. its pole orders form a numerical semigroup.
pub fn wgp_check(lambda: &Partition, n: i64) -> bool {
    let t = valuations_of_partition(lambda, n);
    if !t.contains(0) {
        return false;
    }
    // sums below tail_start lie in T; members above it are finitely many
    let lo = t.tail_start() - t.max().max(0);
    let members: Vec<i64> = t.members_from(lo);
    members.iter().all(|&a| members.iter().all(|&b| a + b < t.tail_start() || t.contains(a + b)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub pole_order: i64,
    pub series: LaurentSeries,
}

/// A polynomial in the generators: exponent vector to coefficient.
pub type Relation = BTreeMap<Vec<u32>, Q>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub bound: i64,
    pub generators: Vec<Generator>,
    pub relations: Vec<Relation>,
}

const NAMES: [&str; 4] = ["x", "y", "w", "v"];

fn generator_name(i: usize) -> String {
    NAMES.get(i).map_or_else(|| format!("g{}", i + 1), |s| s.to_string())
}

impl Presentation {
    /// `relation` as a polynomial in the generator names.
    pub fn format_relation(&self, relation: &Relation) -> String {
        let degree = |e: &Vec<u32>| -> i64 { e.iter().zip(&self.generators).map(|(&k, g)| k as i64 * g.pole_order).sum() };
        let mut terms: Vec<(&Vec<u32>, &Q)> = relation.iter().collect();
        terms.sort_by(|(a, _), (b, _)| degree(b).cmp(&degree(a)).then_with(|| b.iter().rev().cmp(a.iter().rev())));
        let mut out = String::new();
        for (e, c) in terms {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let n = &self.generators[i].name;
                    if k == 1 {
                        n.clone()
                    } else {
                        format!("{n}^{k}")
                    }
                })
                .collect();
            let neg = c < &Q::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            let body = match (mono.is_empty(), a.is_one()) {
                (true, _) => format_q(&a),
                (false, true) => mono.join("*"),
                (false, false) => format!("{}*{}", format_q(&a), mono.join("*")),
            };
            match (out.is_empty(), neg) {
                (true, true) => out.push_str(&format!("-{body}")),
                (true, false) => out.push_str(&body),
                (false, true) => out.push_str(&format!(" - {body}")),
                (false, false) => out.push_str(&format!(" + {body}")),
            }
        }
        out
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| format!("{} ({})", g.name, g.pole_order)).collect();
        write!(f, "generators {}", gens.join(", "))?;
        for r in &self.relations {
            write!(f, "; {} = 0", self.format_relation(r))?;
        }
        Ok(())
    }
}

/// Exponent vectors of weighted degree at most `bound`, sorted by decreasing
/// degree and, within a degree, by decreasing exponents read from the last
/// generator.
fn monomials(orders: &[i64], bound: i64) -> Vec<(Vec<u32>, i64)> {
    let mut out: Vec<(Vec<u32>, i64)> = vec![(Vec::new(), 0)];
    for &o in orders {
        let mut next = Vec::new();
        for (e, d) in &out {
            let mut k = 0;
            while d + k * o <= bound {
                let mut e2 = e.clone();
                e2.push(k as u32);
                next.push((e2, d + k * o));
                k += 1;
            }
        }
        out = next;
    }
    out.sort_by(|(a, da), (b, db)| db.cmp(da).then_with(|| b.iter().rev().cmp(a.iter().rev())));
    out
}

/// Generators of the pole filtration up to `bound` and the relations among
/// them of weighted degree at most `bound`.
///
/// A combination of generator monomials lies in `U` once the closure test
/// passes, and a nonzero element of `U` has valuation in `T`, which lies
/// below the precision. So vanishing on the window certifies a relation
/// exactly, not just to precision.
pub fn reconstruct_algebra(u: &GrassPoint, bound: i64) -> Result<Presentation> {
    let field = u.field();
    let report = algebra_check(u, bound.min(u.depth()))?;
    if let Some(d) = &report.closure_defect {
        return Err(Error::ClosureFailed(format!(
            "e_{} e_{} leaves the point at z^{} with coefficient {}",
            d.left,
            d.right,
            d.exponent,
            format_q(&d.coefficient)
        )));
    }
    if let Some((e, c)) = &report.unit_defect {
        return Err(Error::ClosureFailed(format!("1 is not in the point (z^{e}: {})", format_q(c))));
    }
    let (_, all_generators) = pole_data(u.valuations());
    if let Some(&p) = all_generators.iter().find(|&&p| p > bound) {
        return Err(Error::BoundTooSmall(p));
    }
    let generators: Vec<Generator> = all_generators
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let series = u.member(-p).ok_or_else(|| Error::depth("generator", p, u.depth()))?.clone();
            Ok(Generator {
                name: generator_name(i),
                pole_order: p,
                series,
            })
        })
        .collect::<Result<_>>()?;
    let orders: Vec<i64> = generators.iter().map(|g| g.pole_order).collect();
    let monos = monomials(&orders, bound);
    let top = u.valuations().max();
    let mut columns: Vec<LaurentSeries> = Vec::new();
    for (e, _) in &monos {
        let mut s = LaurentSeries::one(field).truncate(u.precision());
        for (g, &k) in generators.iter().zip(e) {
            for _ in 0..k {
                s = s.mul(&g.series)?;
            }
        }
        if s.eff_hi() <= top {
            return Err(Error::precision("relation certification", top + 1 + bound, u.precision()));
        }
        columns.push(s);
    }
    let lo = -bound;
    let hi = columns.iter().map(|s| s.eff_hi()).min().unwrap_or(lo);
    let a: Matrix = (lo..hi).map(|x| columns.iter().map(|s| s.coeff_unchecked(x)).collect()).collect();
    let mut basis = kernel(field, &a, monos.len());
    rref(field, &mut basis);
    basis.retain(|r| r.iter().any(|c| !c.is_zero()));
    // keep relations that are not multiples of earlier ones
    let position: BTreeMap<&Vec<u32>, usize> = monos.iter().enumerate().map(|(i, (e, _))| (e, i)).collect();
    let mut kept: Vec<Vec<Q>> = Vec::new();
    for row in basis.iter().rev() {
        let mut span: Matrix = Vec::new();
        for r in &kept {
            for (shift, _) in &monos {
                let mut v = vec![Q::zero(); monos.len()];
                let mut fits = true;
                for (i, c) in r.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    let e: Vec<u32> = monos[i].0.iter().zip(shift).map(|(a, b)| a + b).collect();
                    match position.get(&e) {
                        Some(&j) => v[j] = c.clone(),
                        None => fits = false,
                    }
                }
                if fits {
                    span.push(v);
                }
            }
        }
        let before = rank(field, &span);
        span.push(row.clone());
        if rank(field, &span) > before {
            kept.push(row.clone());
        }
    }
    let relations = kept
        .into_iter()
        .map(|r| {
            r.into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (monos[i].0.clone(), c))
                .collect()
        })
        .collect();
    Ok(Presentation {
        bound,
        generators,
        relations,
    })
}

/// `y^m − f(x)` in the exponent convention of a two-generator presentation.
pub fn defining_relation(c: &CurveSpec) -> Option<Relation> {
    let CurveSpec::Superelliptic { field, m, f } = c else {
        return None;
    };
    let mut r: Relation = BTreeMap::new();
    r.insert(vec![0, *m], Q::one());
    for (k, a) in f.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
        r.insert(vec![k as u32, 0], field.neg(a));
    }
    Some(r)
}
