//! Divisors of mixed multiplier ideals at rational points, their left limits,
//! jumping divisors, and constancy-region polytopes.
//!
//! For a point `c` put `v_j = (c·F)_j - k_j`. The ideal at `c` is given by
//! the antinef closure of `⌊v⌋`. Approaching `c` from below along the radial
//! direction lowers `v_j` slightly wherever `(c·F)_j > 0`, so the left limit
//! uses `⌊v_j⌋ - 1` on integral levels with positive weight.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{IdealTuple, QDivisor, ZDivisor};
use crate::lattice::antinef_closure;
use crate::polytope::{self, Hyperplane};
use crate::rational::{floor_q, fmt_q, parse_q_list, qi, qz, Q, Z};

/// Point of the closed positive orthant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Vec<Q>);

impl Point {
    pub fn new(coords: Vec<Q>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidPoint("empty coordinate list".into()));
        }
        if let Some(x) = coords.iter().find(|x| x.is_negative()) {
            return Err(Error::InvalidPoint(format!("negative coordinate {}", fmt_q(x))));
        }
        Ok(Point(coords))
    }

    pub fn origin(r: usize) -> Self {
        Point(vec![Q::zero(); r])
    }

    pub fn from_ratios(v: &[(i64, i64)]) -> Result<Self> {
        Point::new(v.iter().map(|&(n, d)| crate::rational::q(n, d)).collect())
    }

    /// Parses `p/q,p/q,...`.
    pub fn parse(s: &str) -> Result<Self> {
        Point::new(parse_q_list(s)?)
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.0.iter().all(Signed::is_positive)
    }

    /// `self + α` for a nonnegative integer vector.
    pub fn shift(&self, alpha: &[Z]) -> Point {
        Point(self.0.iter().zip(alpha).map(|(x, a)| x + qz(a)).collect())
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Point) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Comma separated canonical rationals, as accepted by [`Point::parse`].
    pub fn to_list(&self) -> String {
        crate::rational::fmt_q_list(&self.0)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_q).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `base + μ·dir` for `μ >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ray {
    base: Point,
    dir: Vec<Z>,
}

impl Ray {
    pub fn new(base: Point, dir: Vec<Z>) -> Result<Self> {
        if dir.len() != base.dim() {
            return Err(Error::InvalidRay(format!(
                "direction has {} entries, base has {}",
                dir.len(),
                base.dim()
            )));
        }
        if dir.iter().any(Signed::is_negative) {
            return Err(Error::InvalidRay("negative direction entry".into()));
        }
        if dir.iter().all(Zero::is_zero) {
            return Err(Error::InvalidRay("zero direction".into()));
        }
        Ok(Ray { base, dir })
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn dir(&self) -> &[Z] {
        &self.dir
    }

    pub fn at(&self, mu: &Q) -> Point {
        assert!(!mu.is_negative(), "ray parameter must be nonnegative");
        Point(self.base.0.iter().zip(&self.dir).map(|(b, u)| b + mu * qz(u)).collect())
    }
}

/// Reduced divisor given by its support.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReducedDivisor(Vec<bool>);

impl ReducedDivisor {
    pub fn new(support: Vec<bool>) -> Self {
        ReducedDivisor(support)
    }

    pub fn empty(n: usize) -> Self {
        ReducedDivisor(vec![false; n])
    }

    pub fn from_indices(n: usize, idx: &[usize]) -> Self {
        let mut s = vec![false; n];
        for &i in idx {
            s[i] = true;
        }
        ReducedDivisor(s)
    }

    pub fn mask(&self) -> &[bool] {
        &self.0
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&j| self.0[j]).collect()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0[j]
    }

    pub fn is_empty(&self) -> bool {
        !self.0.iter().any(|&b| b)
    }

    pub fn count(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn is_subset(&self, other: &ReducedDivisor) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| !a || b)
    }

    pub fn to_zdivisor(&self) -> ZDivisor {
        ZDivisor(self.0.iter().map(|&b| Z::from(b as i64)).collect())
    }
}

impl fmt::Display for ReducedDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("none");
        }
        let parts: Vec<String> = self.support().iter().map(|j| format!("E{}", j + 1)).collect();
        f.write_str(&parts.join(","))
    }
}

fn check_dim(t: &IdealTuple, c: &Point) -> Result<()> {
    if c.dim() != t.r() {
        return Err(Error::InvalidPoint(format!(
            "point has {} coordinates, tuple has {} ideals",
            c.dim(),
            t.r()
        )));
    }
    Ok(())
}

/// `c_1 F_1 + … + c_r F_r`.
pub fn weighted_f(t: &IdealTuple, c: &Point) -> Result<QDivisor> {
    check_dim(t, c)?;
    let n = t.n();
    let mut out = vec![Q::zero(); n];
    for (i, ci) in c.coords().iter().enumerate() {
        if ci.is_zero() {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o += ci * qz(t.coeff(i, j));
        }
    }
    Ok(QDivisor(out))
}

/// Levels `v_j = (c·F)_j - k_j` together with the weights `(c·F)_j`.
pub fn levels(t: &IdealTuple, c: &Point) -> Result<(Vec<Q>, Vec<Q>)> {
    let w = weighted_f(t, c)?.0;
    let v = w.iter().zip(&t.graph().canonical().0).map(|(a, k)| a - k).collect();
    Ok((v, w))
}

/// `⌊c·F - K⌋`, before closure.
pub fn floor_divisor(t: &IdealTuple, c: &Point) -> Result<ZDivisor> {
    let (v, _) = levels(t, c)?;
    Ok(ZDivisor(v.iter().map(floor_q).collect()))
}

/// Limit of `⌊(1-ε)c·F - K⌋` as `ε -> 0+`.
pub fn limit_floor_divisor(t: &IdealTuple, c: &Point) -> Result<ZDivisor> {
    let (v, w) = levels(t, c)?;
    Ok(ZDivisor(
        v.iter()
            .zip(&w)
            .map(|(vj, wj)| {
                let f = floor_q(vj);
                if vj.is_integer() && wj.is_positive() {
                    f - 1
                } else {
                    f
                }
            })
            .collect(),
    ))
}

/// Divisor `D_c` of the mixed multiplier ideal at `c`.
pub fn mmi_divisor(t: &IdealTuple, c: &Point) -> Result<ZDivisor> {
    Ok(antinef_closure(t.graph(), &floor_divisor(t, c)?))
}

/// Divisor of the ideal just before `c` (radial left limit).
pub fn mmi_divisor_left(t: &IdealTuple, c: &Point) -> Result<ZDivisor> {
    Ok(antinef_closure(t.graph(), &limit_floor_divisor(t, c)?))
}

/// Components where `⌊(1-ε)c·F - K⌋` differs from `⌊c·F - K⌋`: `v_j` is an
/// integer and `(c·F)_j > 0`. Nonpositive integral levels are included; they
/// do not move `D_c` but keep the divisor invariant under integral shifts.
pub fn maximal_jumping_divisor(t: &IdealTuple, c: &Point) -> Result<ReducedDivisor> {
    let (v, w) = levels(t, c)?;
    let scan: Vec<bool> = v.iter().zip(&w).map(|(vj, wj)| vj.is_integer() && wj.is_positive()).collect();
    let hi = floor_divisor(t, c)?;
    let lo = limit_floor_divisor(t, c)?;
    let diff: Vec<bool> = hi.0.iter().zip(&lo.0).map(|(a, b)| a != b).collect();
    if scan != diff {
        return Err(Error::Inconsistent(format!("maximal jumping divisor routes differ at {c}")));
    }
    Ok(ReducedDivisor(scan))
}

/// The wall lines through `c`: pairs `(j, ℓ)` with `(c·F)_j - k_j = ℓ` a
/// positive integer and `(c·F)_j > 0`.
pub fn wall_lines_through(t: &IdealTuple, c: &Point) -> Result<Vec<(usize, Z)>> {
    let h = maximal_jumping_divisor(t, c)?;
    let (v, _) = levels(t, c)?;
    Ok(h.support().into_iter().filter(|&j| v[j].is_positive()).map(|j| (j, v[j].to_integer())).collect())
}

/// Components `j` with `(λ·F)_j = k_j + 1 + e_j` where `e` is the left
/// divisor at `λ`. Fails unless `λ` is a jumping point.
pub fn minimal_jumping_divisor(t: &IdealTuple, lambda: &Point) -> Result<ReducedDivisor> {
    let d = mmi_divisor(t, lambda)?;
    let left = mmi_divisor_left(t, lambda)?;
    if d == left {
        return Err(Error::NotAJumpingPoint(lambda.to_string()));
    }
    let (v, _) = levels(t, lambda)?;
    let one = Q::from_integer(Z::from(1));
    Ok(ReducedDivisor(
        v.iter().zip(&left.0).map(|(vj, e)| *vj == &one + qz(e)).collect(),
    ))
}

/// Strict half-space `normal·z < rhs` contributed by component `component`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPlane {
    pub component: usize,
    pub normal: Vec<Z>,
    pub rhs: Q,
}

/// A facet of a region polytope: one hyperplane with all components whose
/// constraint lies on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionFacet {
    pub plane: Hyperplane,
    pub components: Vec<usize>,
    pub vertices: Vec<Point>,
}

/// Constancy region `{z >= 0 : e_j·z < k_j + 1 + e_j^c for all j}`.
#[derive(Clone, Debug)]
pub struct HalfPlaneSet {
    pub constraints: Vec<HalfPlane>,
    pub vertices: Vec<Point>,
    pub facets: Vec<RegionFacet>,
}

impl HalfPlaneSet {
    /// Strict membership.
    pub fn contains(&self, z: &Point) -> bool {
        z.coords().iter().all(|x| !x.is_negative())
            && self.constraints.iter().all(|h| {
                let s: Q = h.normal.iter().zip(z.coords()).map(|(a, x)| qz(a) * x).sum();
                s < h.rhs
            })
    }

    /// Every component whose constraint supports a facet, sorted.
    pub fn binding_components(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.facets.iter().flat_map(|f| f.components.iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Components supporting a facet that are neither rupture nor dicritical.
    /// They are harmless as long as the same hyperplane is also supported by
    /// a rupture or dicritical component.
    pub fn co_supporters(&self, t: &IdealTuple) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .binding_components()
            .into_iter()
            .filter(|&j| !t.is_rupture_or_dicritical(j))
            .collect();
        out.sort_unstable();
        out
    }

    /// Every facet must be supported by at least one rupture or dicritical
    /// component.
    pub fn validate(&self, t: &IdealTuple) -> Result<()> {
        for f in &self.facets {
            if !f.components.iter().any(|&j| t.is_rupture_or_dicritical(j)) {
                return Err(Error::BindingNonRuptureConstraint {
                    components: f.components.iter().map(|j| format!("E{}", j + 1)).collect::<Vec<_>>().join(","),
                });
            }
        }
        Ok(())
    }
}

/// Region polytope of the ideal at `c`, with exact vertices and facets.
/// The rupture/dicritical support of every facet is checked.
pub fn region(t: &IdealTuple, c: &Point) -> Result<HalfPlaneSet> {
    let d = mmi_divisor(t, c)?;
    let r = t.r();
    let k = &t.graph().canonical().0;
    let constraints: Vec<HalfPlane> = (0..t.n())
        .map(|j| HalfPlane { component: j, normal: t.normal(j), rhs: &k[j] + qi(1) + qz(&d.0[j]) })
        .collect();
    let planes: Vec<Hyperplane> =
        constraints.iter().map(|h| Hyperplane::new(h.normal.clone(), h.rhs.clone())).collect();
    let poly = polytope::enumerate(r, &planes);
    let vertices: Vec<Point> = poly.vertices.iter().map(|v| Point(v.clone())).collect();
    let facets = poly
        .facets()
        .into_iter()
        .map(|p| {
            let (plane, on) = &poly.planes[p];
            let components = (0..t.n()).filter(|&j| planes[j] == *plane).collect();
            RegionFacet {
                plane: plane.clone(),
                components,
                vertices: on.iter().map(|&v| vertices[v].clone()).collect(),
            }
        })
        .collect();
    let set = HalfPlaneSet { constraints, vertices, facets };
    set.validate(t)?;
    Ok(set)
}
