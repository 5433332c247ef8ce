//! Exact vertex enumeration for polytopes `{z >= 0, a_j·z <= b_j}` with
//! strictly positive normals, and detection of facet-dimensional hyperplanes.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg;
use crate::rational::{qz, Q, Z};

/// `normal·z = rhs` with a primitive integer normal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperplane {
    pub normal: Vec<Z>,
    pub rhs: Q,
}

impl Hyperplane {
    /// Scales `normal·z = rhs` so the normal is primitive with a positive
    /// leading nonzero entry. Proportional hyperplanes get equal keys.
    pub fn new(normal: Vec<Z>, rhs: Q) -> Self {
        let g = normal.iter().fold(Z::zero(), |acc, x| acc.gcd(x));
        assert!(!g.is_zero(), "zero normal");
        let sign = if normal.iter().find(|x| !x.is_zero()).unwrap().is_negative() {
            -Z::one()
        } else {
            Z::one()
        };
        let s = g * sign;
        let rhs = rhs / qz(&s);
        Hyperplane { normal: normal.into_iter().map(|x| x / &s).collect(), rhs }
    }

    pub fn eval(&self, z: &[Q]) -> Q {
        self.normal.iter().zip(z).map(|(a, x)| qz(a) * x).sum()
    }

    pub fn normal_q(&self) -> Vec<Q> {
        self.normal.iter().map(qz).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Polytope {
    pub dim: usize,
    pub vertices: Vec<Vec<Q>>,
    /// Distinct bounding hyperplanes (coordinate planes excluded) with the
    /// indices of the vertices lying on them.
    pub planes: Vec<(Hyperplane, Vec<usize>)>,
}

impl Polytope {
    /// Hyperplanes whose intersection with the polytope has dimension `dim-1`.
    pub fn facets(&self) -> Vec<usize> {
        (0..self.planes.len())
            .filter(|&p| {
                let pts: Vec<&Vec<Q>> = self.planes[p].1.iter().map(|&v| &self.vertices[v]).collect();
                !pts.is_empty() && affine_dim(&pts) + 1 == self.dim
            })
            .collect()
    }
}

/// Affine dimension of a finite point set (`0` for one point).
pub fn affine_dim(points: &[&Vec<Q>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = points[0];
    let rows: Vec<Vec<Q>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    linalg::rank(&rows)
}

/// Vertices of `{z in R^dim : z >= 0, h·z <= h.rhs for every h}`. The
/// hyperplanes are deduplicated first; normals must be nonnegative and
/// nonzero so the polytope is bounded.
pub fn enumerate(dim: usize, halfspaces: &[Hyperplane]) -> Polytope {
    let mut uniq: BTreeMap<Hyperplane, ()> = BTreeMap::new();
    for h in halfspaces {
        uniq.insert(h.clone(), ());
    }
    let planes: Vec<Hyperplane> = uniq.into_keys().collect();
    // Constraint rows: first the planes, then -z_i <= 0.
    let mut rows: Vec<(Vec<Q>, Q)> = planes.iter().map(|h| (h.normal_q(), h.rhs.clone())).collect();
    for i in 0..dim {
        let mut a = vec![Q::zero(); dim];
        a[i] = -Q::one();
        rows.push((a, Q::zero()));
    }
    let feasible = |z: &[Q]| rows.iter().all(|(a, b)| linalg::dot(a, z) <= *b);
    let mut vertices: Vec<Vec<Q>> = Vec::new();
    for combo in combinations(rows.len(), dim) {
        let a: Vec<Vec<Q>> = combo.iter().map(|&i| rows[i].0.clone()).collect();
        let b: Vec<Q> = combo.iter().map(|&i| rows[i].1.clone()).collect();
        let Some(z) = linalg::solve(&a, &b) else {
            continue;
        };
        if feasible(&z) && !vertices.contains(&z) {
            vertices.push(z);
        }
    }
    vertices.sort();
    let planes = planes
        .into_iter()
        .map(|h| {
            let on: Vec<usize> = (0..vertices.len()).filter(|&v| h.eval(&vertices[v]) == h.rhs).collect();
            (h, on)
        })
        .collect();
    Polytope { dim, vertices, planes }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
