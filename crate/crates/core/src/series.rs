//! Jumping points along rational rays and the closed form of their
//! generating series.
//!
//! Along `base + μ·u` the levels `v_j` grow linearly with integer slope
//! `(u·F)_j`, so candidate jumps are the finitely many `μ` where some level
//! crosses a positive integer. Off the origin, multiplicities grow by the
//! excess sum `ρ` on each unit step within a residue class of `μ`, which is
//! what the closed form records.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::engine::{levels, Point, Ray};
use crate::error::{Error, Result};
use crate::graph::IdealTuple;
use crate::jump::{is_shift_stable, jump_record, rho, JumpRecord};
use crate::rational::{floor_q, fmt_q, frac_q, lcm_denominators, qz, Q, Z};

/// A walked jumping point with its ray parameter.
#[derive(Clone, Debug)]
pub struct WalkStep {
    pub mu: Q,
    pub record: JumpRecord,
}

/// `(u·F)_j` for every component.
fn slopes(t: &IdealTuple, dir: &[Z]) -> Vec<Z> {
    (0..t.n())
        .map(|j| dir.iter().enumerate().map(|(i, u)| u * t.coeff(i, j)).sum())
        .collect()
}

/// Ray parameters in `(from, to]` where some level `v_j` equals a positive
/// integer and grows along the ray. Sorted and deduplicated.
pub fn ray_candidates(t: &IdealTuple, ray: &Ray, from: &Q, to: &Q) -> Result<Vec<Q>> {
    level_crossings(t, ray, from, to, true)
}

/// Ray parameters in `(from, to]` where a growing level is integral; with
/// `positive_only` the level must also be positive.
fn level_crossings(t: &IdealTuple, ray: &Ray, from: &Q, to: &Q, positive_only: bool) -> Result<Vec<Q>> {
    let (v0, _) = levels(t, ray.base())?;
    let s = slopes(t, ray.dir());
    let mut out = Vec::new();
    for j in 0..t.n() {
        if !s[j].is_positive() {
            continue;
        }
        let sj = qz(&s[j]);
        let lo = &v0[j] + from * &sj;
        let hi = &v0[j] + to * &sj;
        let mut l = floor_q(&lo) + Z::one();
        if positive_only {
            l = l.max(Z::one());
        }
        while qz(&l) <= hi {
            out.push((qz(&l) - &v0[j]) / &sj);
            l += 1;
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// The first candidate strictly after `after`, if any component grows.
fn next_candidate(t: &IdealTuple, ray: &Ray, after: &Q) -> Result<Option<Q>> {
    let (v0, _) = levels(t, ray.base())?;
    let s = slopes(t, ray.dir());
    let mut best: Option<Q> = None;
    for j in 0..t.n() {
        if !s[j].is_positive() {
            continue;
        }
        let sj = qz(&s[j]);
        let cur = &v0[j] + after * &sj;
        let l = (floor_q(&cur) + Z::one()).max(Z::one());
        let mu = (qz(&l) - &v0[j]) / sj;
        if best.as_ref().is_none_or(|b| mu < *b) {
            best = Some(mu);
        }
    }
    Ok(best)
}

/// The first jumping point strictly after `after`.
pub fn ray_next(t: &IdealTuple, ray: &Ray, after: &Q) -> Result<Option<WalkStep>> {
    let mut cur = after.clone();
    loop {
        let Some(mu) = next_candidate(t, ray, &cur)? else {
            return Err(Error::DirectionOrthogonal);
        };
        let rec = jump_record(t, &ray.at(&mu))?;
        if rec.multiplicity > 0 {
            return Ok(Some(WalkStep { mu, record: rec }));
        }
        cur = mu;
    }
}

/// All jumping points with ray parameter in `[0, bound]`, in order.
pub fn ray_walk(t: &IdealTuple, ray: &Ray, bound: &Q) -> Result<Vec<WalkStep>> {
    let mut out = Vec::new();
    let zero = Q::zero();
    let first = jump_record(t, ray.base())?;
    if first.multiplicity > 0 {
        out.push(WalkStep { mu: zero.clone(), record: first });
    }
    for mu in ray_candidates(t, ray, &zero, bound)? {
        let rec = jump_record(t, &ray.at(&mu))?;
        if rec.multiplicity > 0 {
            out.push(WalkStep { mu, record: rec });
        }
    }
    Ok(out)
}

/// One summand of the closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesTerm {
    pub mu: Q,
    pub anchor: Point,
    pub m0: u64,
    pub rho: u64,
    /// `false` for an isolated monomial `m0·t^anchor` preceding the first
    /// stable point of its residue class.
    pub periodic: bool,
}

/// `Σ m0·t^λ/(1 - t^u) + ρ·t^{λ+u}/(1 - t^u)²` plus isolated monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesClosedForm {
    pub dir: Vec<Z>,
    pub terms: Vec<SeriesTerm>,
    /// Least common multiple of the anchor coordinate denominators.
    pub exponent_denominator: Z,
}

/// Generating series of multiplicities along `ray`. Each residue class of
/// `μ` modulo one is anchored at its first stable jumping point; the walk
/// runs to `horizon + 1` to confirm that no new class appears.
pub fn poincare(t: &IdealTuple, ray: &Ray, horizon: &Q) -> Result<SeriesClosedForm> {
    let limit = horizon + Q::one();
    let walk = ray_walk(t, ray, &limit)?;
    let dir = ray.dir().to_vec();
    let mut anchored: BTreeMap<Q, ()> = BTreeMap::new();
    let mut terms = Vec::new();
    for step in &walk {
        let class = frac_q(&step.mu);
        if anchored.contains_key(&class) {
            continue;
        }
        if step.mu > *horizon {
            return Err(Error::HorizonTooSmall(step.record.point.to_string()));
        }
        let p = &step.record.point;
        if is_shift_stable(t, p, &dir)? {
            let r = rho(t, p, &dir)?
                .to_u64()
                .ok_or_else(|| Error::Inconsistent(format!("excess sum overflows at {p}")))?;
            terms.push(SeriesTerm { mu: step.mu.clone(), anchor: p.clone(), m0: step.record.multiplicity, rho: r, periodic: true });
            anchored.insert(class, ());
        } else {
            terms.push(SeriesTerm { mu: step.mu.clone(), anchor: p.clone(), m0: step.record.multiplicity, rho: 0, periodic: false });
        }
    }
    // A class first jumping beyond the walk shows a positive excess sum at
    // its representative in `(horizon, horizon + 1]`.
    for mu in level_crossings(t, ray, horizon, &limit, false)? {
        if anchored.contains_key(&frac_q(&mu)) {
            continue;
        }
        let p = ray.at(&mu);
        if !is_shift_stable(t, &p, &dir)? || !rho(t, &p, &dir)?.is_zero() {
            return Err(Error::HorizonTooSmall(p.to_string()));
        }
    }
    let exponent_denominator = lcm_denominators(terms.iter().flat_map(|s| s.anchor.coords()));
    Ok(SeriesClosedForm { dir, terms, exponent_denominator })
}

/// The first `count` points of the expansion, ordered along the ray.
pub fn series_expand(s: &SeriesClosedForm, count: usize) -> Vec<(Point, u64)> {
    let mut pts: Vec<(Q, Point, u64)> = Vec::new();
    for term in &s.terms {
        if !term.periodic {
            pts.push((term.mu.clone(), term.anchor.clone(), term.m0));
            continue;
        }
        for k in 0..count as u64 {
            let kz = Z::from(k);
            let shift: Vec<Z> = s.dir.iter().map(|u| u * &kz).collect();
            pts.push((&term.mu + qz(&kz), term.anchor.shift(&shift), term.m0 + k * term.rho));
        }
    }
    pts.sort_by(|a, b| a.0.cmp(&b.0));
    pts.into_iter().take(count).map(|(_, p, m)| (p, m)).collect()
}

fn exponent(e: &Z, coords: &[Q]) -> String {
    let parts: Vec<String> = coords
        .iter()
        .map(|x| {
            let y = x * qz(e);
            debug_assert!(y.is_integer());
            fmt_q(&y)
        })
        .collect();
    format!("z^[{}]", parts.join(","))
}

impl fmt::Display for SeriesClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.exponent_denominator;
        write!(f, "e = {e}; ")?;
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let u: Vec<Q> = self.dir.iter().map(qz).collect();
        let den = exponent(e, &u);
        let mut parts = Vec::new();
        for term in &self.terms {
            let a = term.anchor.coords();
            if !term.periodic {
                parts.push(format!("{}*{}", term.m0, exponent(e, a)));
                continue;
            }
            parts.push(format!("{}*{}/(1-{})", term.m0, exponent(e, a), den));
            if term.rho > 0 {
                let next: Vec<Q> = a.iter().zip(&u).map(|(x, y)| x + y).collect();
                parts.push(format!("{}*{}/(1-{})^2", term.rho, exponent(e, &next), den));
            }
        }
        f.write_str(&parts.join(" + "))
    }
}

impl SeriesClosedForm {
    /// Number of distinct residue classes carried by periodic terms.
    pub fn period_classes(&self) -> usize {
        self.terms.iter().filter(|t| t.periodic).count()
    }

    /// Smallest `e` for which all exponents are integral.
    pub fn check_denominator(&self) -> bool {
        self.terms.iter().all(|t| t.anchor.coords().iter().all(|x| self.exponent_denominator.is_multiple_of(x.denom())))
    }
}
