//! The log-canonical wall, axis thresholds, the Newton nest and its
//! correspondence with the facets of the wall.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::engine::{mmi_divisor, region, HalfPlaneSet, Point, ReducedDivisor};
use crate::error::{Error, Result};
use crate::graph::{IdealTuple, ZDivisor};
use crate::jump::checked_multiplicity;
use crate::polytope::{affine_dim, Hyperplane};
use crate::rational::{fmt_q, qi, qz, Q, Z};

/// Region of the ideal at the origin; its upper boundary is the
/// log-canonical wall.
pub fn lc_region(t: &IdealTuple) -> Result<HalfPlaneSet> {
    region(t, &Point::origin(t.r()))
}

/// `min_j (k_j + 1 + e_j) / f_j` over components with `f_j > 0`.
/// Needs no intersection matrix, so it also applies to raw vectors.
pub fn axis_threshold(canonical: &[Q], origin_divisor: &[Z], f: &[Z]) -> Option<Q> {
    (0..f.len())
        .filter(|&j| f[j].is_positive())
        .map(|j| (&canonical[j] + Q::one() + qz(&origin_divisor[j])) / qz(&f[j]))
        .min()
}

/// Log-canonical threshold of the `i`-th ideal inside the tuple.
pub fn lct_axis(t: &IdealTuple, i: usize) -> Result<Q> {
    let d0 = mmi_divisor(t, &Point::origin(t.r()))?;
    axis_threshold(&t.graph().canonical().0, &d0.0, &t.ideal(i).0)
        .ok_or_else(|| Error::Inconsistent(format!("ideal {} has no positive coefficient", i + 1)))
}

/// Point `lct_i · e_i` on the `i`-th axis.
pub fn axis_point(t: &IdealTuple, i: usize) -> Result<Point> {
    let mut c = vec![Q::zero(); t.r()];
    c[i] = lct_axis(t, i)?;
    Point::new(c)
}

/// Components whose log-canonical hyperplane passes through the axis point.
pub fn axis_gprime(t: &IdealTuple, i: usize) -> Result<ReducedDivisor> {
    let lct = lct_axis(t, i)?;
    let d0 = mmi_divisor(t, &Point::origin(t.r()))?;
    let k = &t.graph().canonical().0;
    Ok(ReducedDivisor::new(
        (0..t.n())
            .map(|j| qz(t.coeff(i, j)) * &lct == &k[j] + Q::one() + qz(&d0.0[j]))
            .collect(),
    ))
}

/// Rupture or dicritical components on the smallest subtree containing all
/// axis divisors `G'_i`.
pub fn newton_nest(t: &IdealTuple) -> Result<Vec<usize>> {
    let g = t.graph();
    let mut marked: Vec<usize> = Vec::new();
    for i in 0..t.r() {
        marked.extend(axis_gprime(t, i)?.support());
    }
    marked.sort_unstable();
    marked.dedup();
    let mut span = vec![false; t.n()];
    for &a in &marked {
        for &b in &marked {
            for v in g.path(a, b) {
                span[v] = true;
            }
        }
    }
    Ok((0..t.n()).filter(|&j| span[j] && t.is_rupture_or_dicritical(j)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Bijection,
    DegenerateProportional(String),
    MultiplicityHypothesisFails,
    Mismatch,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Bijection => f.write_str("Bijection"),
            Verdict::DegenerateProportional(r) => write!(f, "DegenerateProportional {r}"),
            Verdict::MultiplicityHypothesisFails => f.write_str("MultiplicityHypothesisFails"),
            Verdict::Mismatch => f.write_str("Mismatch"),
        }
    }
}

/// A facet of the log-canonical wall.
#[derive(Clone, Debug)]
pub struct LcFacet {
    pub plane: Hyperplane,
    pub components: Vec<usize>,
    pub vertices: Vec<Point>,
    /// Centroid of the facet's vertices, a relative interior point.
    pub sample: Point,
    pub multiplicity: u64,
    pub minimal: ReducedDivisor,
}

#[derive(Clone, Debug)]
pub struct NestReport {
    pub lct: Vec<Q>,
    pub gprime: Vec<ReducedDivisor>,
    pub nest: Vec<usize>,
    pub lc_facets: Vec<LcFacet>,
    /// Wall points checked for multiplicity one: facet centroids and
    /// centroids of facet intersections.
    pub checked: Vec<(Point, u64)>,
    pub verdict: Verdict,
    /// Facet index paired with each nest component under a bijection.
    pub pairing: Vec<(usize, usize)>,
}

impl NestReport {
    /// Wall points whose multiplicity is not one.
    pub fn high_multiplicity(&self) -> Vec<(Point, u64)> {
        self.checked.iter().filter(|(_, m)| *m != 1).cloned().collect()
    }
}

fn centroid(points: &[Point]) -> Result<Point> {
    let r = points[0].dim();
    let k = qi(points.len() as i64);
    Point::new((0..r).map(|i| points.iter().map(|p| p.coords()[i].clone()).sum::<Q>() / &k).collect())
}

/// `e_{i,ℓ}/e_{i,j}` for all `i` equals `(k_ℓ+1+e_ℓ)/(k_j+1+e_j)`; returns
/// the common ratio.
fn proportional_ratio(t: &IdealTuple, d0: &ZDivisor, j: usize, l: usize) -> Option<Q> {
    let k = &t.graph().canonical().0;
    let ratio = (&k[l] + Q::one() + qz(&d0.0[l])) / (&k[j] + Q::one() + qz(&d0.0[j]));
    let ok = (0..t.r()).all(|i| {
        let a = t.coeff(i, j);
        !a.is_zero() && qz(t.coeff(i, l)) / qz(a) == ratio
    });
    ok.then_some(ratio)
}

/// Compares the facets of the log-canonical wall with the Newton nest.
pub fn bijection_report(t: &IdealTuple) -> Result<NestReport> {
    let r = t.r();
    let lct = (0..r).map(|i| lct_axis(t, i)).collect::<Result<Vec<_>>>()?;
    let gprime = (0..r).map(|i| axis_gprime(t, i)).collect::<Result<Vec<_>>>()?;
    let nest = newton_nest(t)?;
    let reg = lc_region(t)?;
    let mut lc_facets = Vec::new();
    let mut checked = Vec::new();
    for f in &reg.facets {
        let sample = centroid(&f.vertices)?;
        let multiplicity = checked_multiplicity(t, &sample)?;
        let minimal = crate::engine::minimal_jumping_divisor(t, &sample)?;
        checked.push((sample.clone(), multiplicity));
        lc_facets.push(LcFacet {
            plane: f.plane.clone(),
            components: f.components.clone(),
            vertices: f.vertices.clone(),
            sample,
            multiplicity,
            minimal,
        });
    }
    // Intersections of two facets: shared vertices spanning codimension two.
    for a in 0..lc_facets.len() {
        for b in a + 1..lc_facets.len() {
            let shared: Vec<Point> =
                lc_facets[a].vertices.iter().filter(|v| lc_facets[b].vertices.contains(v)).cloned().collect();
            if shared.is_empty() {
                continue;
            }
            let pts: Vec<Vec<Q>> = shared.iter().map(|p| p.coords().to_vec()).collect();
            let refs: Vec<&Vec<Q>> = pts.iter().collect();
            if affine_dim(&refs) + 2 != r {
                continue;
            }
            let c = centroid(&shared)?;
            let m = checked_multiplicity(t, &c)?;
            checked.push((c, m));
        }
    }

    let d0 = mmi_divisor(t, &Point::origin(r))?;
    let mut pairing = Vec::new();
    let verdict = if checked.iter().any(|(_, m)| *m != 1) {
        Verdict::MultiplicityHypothesisFails
    } else if let (1, [j, l]) = (lc_facets.len(), nest.as_slice()) {
        match proportional_ratio(t, &d0, *j, *l) {
            Some(ratio) => Verdict::DegenerateProportional(fmt_q(&ratio)),
            None => Verdict::Mismatch,
        }
    } else {
        let mut used = vec![false; nest.len()];
        let mut ok = lc_facets.len() == nest.len();
        for (fi, f) in lc_facets.iter().enumerate() {
            let hits: Vec<usize> = (0..nest.len()).filter(|&x| f.components.contains(&nest[x])).collect();
            if hits.len() != 1 || used[hits[0]] {
                ok = false;
                break;
            }
            used[hits[0]] = true;
            pairing.push((fi, nest[hits[0]]));
        }
        if ok {
            Verdict::Bijection
        } else {
            pairing.clear();
            Verdict::Mismatch
        }
    };
    Ok(NestReport { lct, gprime, nest, lc_facets, checked, verdict, pairing })
}
