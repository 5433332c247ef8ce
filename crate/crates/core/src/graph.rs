//! Dual graphs of log-resolutions, exact divisors on them, and tuples of
//! antinef ideal divisors with their excesses.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{fmt_q, qi, qz, Q, Z};

/// Integer divisor `Σ d_j E_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZDivisor(pub Vec<Z>);

/// Rational divisor `Σ q_j E_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QDivisor(pub Vec<Q>);

impl ZDivisor {
    pub fn zero(n: usize) -> Self {
        ZDivisor(vec![Z::zero(); n])
    }

    pub fn unit(n: usize, j: usize) -> Self {
        let mut d = Self::zero(n);
        d.0[j] = Z::one();
        d
    }

    pub fn from_i64(v: &[i64]) -> Self {
        ZDivisor(v.iter().map(|&x| Z::from(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_effective(&self) -> bool {
        !self.0.iter().any(Signed::is_negative)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &ZDivisor) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn to_q(&self) -> QDivisor {
        QDivisor(self.0.iter().map(qz).collect())
    }

    /// Componentwise maximum with zero.
    pub fn clamp_nonneg(&self) -> ZDivisor {
        ZDivisor(
            self.0
                .iter()
                .map(|x| if x.is_negative() { Z::zero() } else { x.clone() })
                .collect(),
        )
    }
}

impl QDivisor {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for ZDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Display for QDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_q).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularityClass {
    LogTerminal,
    LogCanonicalOnly,
    Neither,
}

impl fmt::Display for SingularityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SingularityClass::LogTerminal => "LogTerminal",
            SingularityClass::LogCanonicalOnly => "LogCanonicalOnly",
            SingularityClass::Neither => "Neither",
        })
    }
}

/// Validated dual graph. Immutable once built; the relative canonical divisor
/// and the fundamental cycle are computed eagerly.
#[derive(Clone, Debug)]
pub struct DualGraph {
    matrix: Vec<Vec<i64>>,
    neighbors: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    canonical: QDivisor,
    fundamental: ZDivisor,
    labels: Vec<String>,
}

impl DualGraph {
    /// Validates an intersection matrix and derives everything else from it.
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<Self> {
        let n = matrix.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        for (row, r) in matrix.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare { row: row + 1, len: r.len(), n });
            }
        }
        for i in 0..n {
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::NotSymmetric { i: j, j: i });
                }
            }
        }
        for (i, r) in matrix.iter().enumerate() {
            if r[i] > -1 {
                return Err(Error::BadDiagonal { component: i, value: r[i] });
            }
            for (j, &v) in r.iter().enumerate() {
                if i != j && v != 0 && v != 1 {
                    return Err(Error::BadOffDiagonal { i: i.min(j), j: i.max(j), value: v });
                }
            }
        }
        let minors = linalg::leading_minors(&matrix);
        for (k, d) in minors.iter().enumerate() {
            // (-1)^(k+1) Δ_{k+1} > 0
            let ok = if k % 2 == 0 { d.is_negative() } else { d.is_positive() };
            if !ok {
                return Err(Error::NotNegativeDefinite { order: k + 1, minor: d.to_string() });
            }
        }
        let mut edges = Vec::new();
        let mut neighbors = vec![Vec::new(); n];
        for i in 0..n {
            for j in i + 1..n {
                if matrix[i][j] == 1 {
                    edges.push((i, j));
                    neighbors[i].push(j);
                    neighbors[j].push(i);
                }
            }
        }
        if edges.len() != n - 1 {
            if !is_connected(&neighbors) {
                return Err(Error::Disconnected);
            }
            return Err(Error::NotTree { edges: edges.len(), n });
        }
        if !is_connected(&neighbors) {
            return Err(Error::Disconnected);
        }
        let canonical = relative_canonical_of(&matrix)?;
        let mut g = DualGraph {
            matrix,
            neighbors,
            edges,
            canonical,
            fundamental: ZDivisor::zero(n),
            labels: (1..=n).map(|i| format!("E{i}")).collect(),
        };
        g.fundamental = crate::lattice::antinef_closure(&g, &ZDivisor::unit(n, 0));
        Ok(g)
    }

    /// Builds the graph from a tree and a canonical divisor by deriving the
    /// self-intersections, then checks that the canonical divisor is recovered.
    pub fn from_adjacency(n: usize, edges: &[(usize, usize)], canonical: &QDivisor) -> Result<Self> {
        let diag = derive_diagonal(n, edges, canonical)?;
        let mut m = vec![vec![0i64; n]; n];
        for (i, d) in diag.iter().enumerate() {
            m[i][i] = *d;
        }
        for &(a, b) in edges {
            m[a][b] = 1;
            m[b][a] = 1;
        }
        let g = DualGraph::new(m)?;
        if let Some(j) = (0..n).find(|&j| g.canonical.0[j] != canonical.0[j]) {
            return Err(Error::CanonicalMismatch { component: j });
        }
        Ok(g)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::LengthMismatch {
                what: "labels".into(),
                expected: self.n(),
                found: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn self_intersection(&self, j: usize) -> i64 {
        self.matrix[j][j]
    }

    pub fn neighbors(&self, j: usize) -> &[usize] {
        &self.neighbors[j]
    }

    pub fn valence(&self, j: usize) -> usize {
        self.neighbors[j].len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn canonical(&self) -> &QDivisor {
        &self.canonical
    }

    pub fn fundamental_cycle(&self) -> &ZDivisor {
        &self.fundamental
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, j: usize) -> &str {
        &self.labels[j]
    }

    /// `D·E_j` for an integer divisor.
    pub fn dot_e(&self, d: &ZDivisor, j: usize) -> Z {
        let mut s = &d.0[j] * self.matrix[j][j];
        for &i in &self.neighbors[j] {
            s += &d.0[i];
        }
        s
    }

    /// `D·E_j` for a rational divisor.
    pub fn dot_e_q(&self, d: &QDivisor, j: usize) -> Q {
        let mut s = &d.0[j] * qi(self.matrix[j][j]);
        for &i in &self.neighbors[j] {
            s += &d.0[i];
        }
        s
    }

    /// `A·B`.
    pub fn intersect(&self, a: &ZDivisor, b: &ZDivisor) -> Z {
        (0..self.n()).map(|j| &b.0[j] * self.dot_e(a, j)).sum()
    }

    pub fn intersect_q(&self, a: &QDivisor, b: &QDivisor) -> Q {
        (0..self.n()).map(|j| &b.0[j] * self.dot_e_q(a, j)).sum()
    }

    pub fn singularity_class(&self) -> SingularityClass {
        let minus_one = -Q::one();
        if self.canonical.0.iter().any(|k| *k < minus_one) {
            SingularityClass::Neither
        } else if self.canonical.0.contains(&minus_one) {
            SingularityClass::LogCanonicalOnly
        } else {
            SingularityClass::LogTerminal
        }
    }

    /// Connected components of the subgraph induced on `support`, each sorted.
    pub fn induced_components(&self, support: &[bool]) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if !support[s] || seen[s] {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(x) = stack.pop() {
                comp.push(x);
                for &y in &self.neighbors[x] {
                    if support[y] && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Vertices on the unique tree path from `a` to `b`, inclusive.
    pub fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let n = self.n();
        let mut parent = vec![usize::MAX; n];
        parent[a] = a;
        let mut stack = vec![a];
        while let Some(x) = stack.pop() {
            for &y in &self.neighbors[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    stack.push(y);
                }
            }
        }
        let mut out = vec![b];
        let mut cur = b;
        while cur != a {
            cur = parent[cur];
            out.push(cur);
        }
        out.reverse();
        out
    }
}

fn is_connected(neighbors: &[Vec<usize>]) -> bool {
    let n = neighbors.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for &y in &neighbors[x] {
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == n
}

fn relative_canonical_of(m: &[Vec<i64>]) -> Result<QDivisor> {
    let a: Vec<Vec<Q>> = m.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect();
    let b: Vec<Q> = (0..m.len()).map(|j| qi(-2 - m[j][j])).collect();
    linalg::solve(&a, &b)
        .map(QDivisor)
        .ok_or_else(|| Error::NotNegativeDefinite { order: m.len(), minor: "0".into() })
}

/// Relative canonical divisor: the unique `K` with `(K + E_j)·E_j = -2`.
pub fn relative_canonical(g: &DualGraph) -> QDivisor {
    g.canonical.clone()
}

pub fn fundamental_cycle(g: &DualGraph) -> ZDivisor {
    g.fundamental.clone()
}

/// Self-intersections forced by adjunction on a tree with known canonical
/// divisor: `E_j² = -(2 + Σ_{i~j} k_i) / (k_j + 1)`.
pub fn derive_diagonal(n: usize, edges: &[(usize, usize)], canonical: &QDivisor) -> Result<Vec<i64>> {
    if canonical.len() != n {
        return Err(Error::LengthMismatch {
            what: "canonical divisor".into(),
            expected: n,
            found: canonical.len(),
        });
    }
    let mut nb = vec![Vec::new(); n];
    for &(a, b) in edges {
        if a >= n || b >= n || a == b {
            return Err(Error::BadEdge(a, b));
        }
        nb[a].push(b);
        nb[b].push(a);
    }
    let k = &canonical.0;
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let den = &k[j] + Q::one();
        if den.is_zero() {
            return Err(Error::DivisionByZero { component: j });
        }
        let num: Q = qi(2) + nb[j].iter().map(|&i| k[i].clone()).sum::<Q>();
        let v = -(num / den);
        if !v.is_integer() {
            return Err(Error::NonIntegralSelfIntersection { component: j, value: fmt_q(&v) });
        }
        let v = v.to_integer().to_i64().ok_or_else(|| Error::NonIntegralSelfIntersection {
            component: j,
            value: fmt_q(&v),
        })?;
        out.push(v);
    }
    Ok(out)
}

/// An `r`-tuple of antinef divisors `F_i` on a shared dual graph, with
/// excesses `ρ_{i,j} = -F_i·E_j` and component classification.
#[derive(Clone, Debug)]
pub struct IdealTuple {
    graph: Arc<DualGraph>,
    ideals: Vec<ZDivisor>,
    excess: Vec<Vec<Z>>,
    dicritical: Vec<bool>,
    rupture: Vec<bool>,
}

impl IdealTuple {
    pub fn new(graph: Arc<DualGraph>, ideals: Vec<ZDivisor>) -> Result<Self> {
        let n = graph.n();
        if ideals.is_empty() {
            return Err(Error::NoIdeals);
        }
        for (i, f) in ideals.iter().enumerate() {
            if f.len() != n {
                return Err(Error::LengthMismatch {
                    what: format!("ideal {}", i + 1),
                    expected: n,
                    found: f.len(),
                });
            }
            if let Some(j) = f.0.iter().position(Signed::is_negative) {
                return Err(Error::NegativeCoefficient { ideal: i, component: j });
            }
            if f.is_zero() {
                return Err(Error::ZeroIdeal { ideal: i });
            }
        }
        let mut excess = Vec::with_capacity(ideals.len());
        for (i, f) in ideals.iter().enumerate() {
            let row: Vec<Z> = (0..n).map(|j| -graph.dot_e(f, j)).collect();
            if let Some(j) = row.iter().position(Signed::is_negative) {
                return Err(Error::NotAntinef { ideal: i, component: j });
            }
            excess.push(row);
        }
        let dicritical = (0..n).map(|j| excess.iter().any(|r| r[j].is_positive())).collect();
        let rupture = (0..n).map(|j| graph.valence(j) >= 3).collect();
        Ok(IdealTuple { graph, ideals, excess, dicritical, rupture })
    }

    pub fn graph(&self) -> &DualGraph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<DualGraph> {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Number of ideals.
    pub fn r(&self) -> usize {
        self.ideals.len()
    }

    pub fn ideals(&self) -> &[ZDivisor] {
        &self.ideals
    }

    pub fn ideal(&self, i: usize) -> &ZDivisor {
        &self.ideals[i]
    }

    /// `e_{i,j}`.
    pub fn coeff(&self, i: usize, j: usize) -> &Z {
        &self.ideals[i].0[j]
    }

    pub fn excess(&self) -> &[Vec<Z>] {
        &self.excess
    }

    pub fn rho(&self, i: usize, j: usize) -> &Z {
        &self.excess[i][j]
    }

    pub fn is_dicritical(&self, j: usize) -> bool {
        self.dicritical[j]
    }

    pub fn is_rupture(&self, j: usize) -> bool {
        self.rupture[j]
    }

    pub fn is_rupture_or_dicritical(&self, j: usize) -> bool {
        self.dicritical[j] || self.rupture[j]
    }

    pub fn dicritical(&self) -> &[bool] {
        &self.dicritical
    }

    pub fn rupture(&self) -> &[bool] {
        &self.rupture
    }

    /// Column `(e_{1,j}, …, e_{r,j})`.
    pub fn normal(&self, j: usize) -> Vec<Z> {
        self.ideals.iter().map(|f| f.0[j].clone()).collect()
    }

    /// The tuple restricted to the ideals listed in `keep`.
    pub fn subtuple(&self, keep: &[usize]) -> Result<IdealTuple> {
        let ideals = keep.iter().map(|&i| self.ideals[i].clone()).collect();
        IdealTuple::new(self.graph.clone(), ideals)
    }

    /// The duple `(F_first, Σ_{i≠first} w_i F_i)` used to slice a tuple
    /// along a direction in the complementary coordinates.
    pub fn duple(&self, first: usize, weights: &[BigInt]) -> Result<IdealTuple> {
        if weights.len() != self.r() {
            return Err(Error::LengthMismatch {
                what: "duple weights".into(),
                expected: self.r(),
                found: weights.len(),
            });
        }
        let n = self.n();
        let mut combo = ZDivisor::zero(n);
        for (i, w) in weights.iter().enumerate() {
            if i == first {
                continue;
            }
            for j in 0..n {
                combo.0[j] += w * &self.ideals[i].0[j];
            }
        }
        IdealTuple::new(self.graph.clone(), vec![self.ideals[first].clone(), combo])
    }
}

/// Attaches ideal divisors to a graph, validating antinefness.
pub fn attach_ideals(g: Arc<DualGraph>, ideals: Vec<ZDivisor>) -> Result<IdealTuple> {
    IdealTuple::new(g, ideals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    pub(crate) fn rat6() -> DualGraph {
        DualGraph::new(vec![
            vec![-2, 1, 1, 1, 0, 0],
            vec![1, -3, 0, 0, 1, 1],
            vec![1, 0, -1, 0, 0, 0],
            vec![1, 0, 0, -3, 0, 0],
            vec![0, 1, 0, 0, -3, 0],
            vec![0, 1, 0, 0, 0, -6],
        ])
        .unwrap()
    }

    #[test]
    fn single_minus_one_curve() {
        let g = DualGraph::new(vec![vec![-1]]).unwrap();
        assert_eq!(g.canonical().0, vec![qi(1)]);
        assert_eq!(g.fundamental_cycle(), &ZDivisor::from_i64(&[1]));
        assert_eq!(g.singularity_class(), SingularityClass::LogTerminal);
    }

    #[test]
    fn single_minus_two_and_minus_three() {
        let g = DualGraph::new(vec![vec![-2]]).unwrap();
        assert_eq!(g.canonical().0, vec![qi(0)]);
        let g = DualGraph::new(vec![vec![-3]]).unwrap();
        assert_eq!(g.canonical().0, vec![q(-1, 3)]);
        assert_eq!(g.singularity_class(), SingularityClass::LogTerminal);
    }

    #[test]
    fn rat6_canonical_and_cycle() {
        let g = rat6();
        let k: Vec<Q> = vec![q(-1, 2), qi(-1), q(1, 2), q(-1, 2), q(-2, 3), q(-5, 6)];
        assert_eq!(g.canonical().0, k);
        assert_eq!(g.fundamental_cycle(), &ZDivisor::from_i64(&[3, 2, 3, 1, 1, 1]));
        assert_eq!(g.singularity_class(), SingularityClass::LogCanonicalOnly);
        for j in 0..6 {
            let mut kj = g.canonical().clone();
            kj.0[j] += Q::one();
            assert_eq!(g.dot_e_q(&kj, j), qi(-2));
        }
    }

    #[test]
    fn rejects_singular_and_malformed() {
        assert!(matches!(
            DualGraph::new(vec![vec![-1, 1], vec![1, -1]]),
            Err(Error::NotNegativeDefinite { order: 2, .. })
        ));
        assert!(matches!(DualGraph::new(vec![vec![-2, 1], vec![0, -2]]), Err(Error::NotSymmetric { .. })));
        assert!(matches!(DualGraph::new(vec![vec![0]]), Err(Error::BadDiagonal { .. })));
        assert!(matches!(DualGraph::new(vec![vec![-2, 2], vec![2, -5]]), Err(Error::BadOffDiagonal { .. })));
        assert!(matches!(DualGraph::new(vec![vec![-2, 0], vec![0, -2]]), Err(Error::Disconnected)));
        assert!(matches!(DualGraph::new(vec![vec![-2, 1, 0], vec![1, -2]]), Err(Error::NotSquare { .. })));
        let cyc = vec![vec![-3, 1, 1], vec![1, -3, 1], vec![1, 1, -3]];
        assert!(matches!(DualGraph::new(cyc), Err(Error::NotTree { edges: 3, n: 3 })));
        assert!(matches!(DualGraph::new(vec![]), Err(Error::EmptyGraph)));
    }

    #[test]
    fn derive_diagonal_single_vertex() {
        assert_eq!(derive_diagonal(1, &[], &QDivisor(vec![qi(1)])).unwrap(), vec![-1]);
        assert!(matches!(
            derive_diagonal(1, &[], &QDivisor(vec![qi(-1)])),
            Err(Error::DivisionByZero { component: 0 })
        ));
    }

    #[test]
    fn excesses_on_rat6() {
        let t = IdealTuple::new(
            Arc::new(rat6()),
            vec![ZDivisor::from_i64(&[15, 6, 15, 9, 2, 1]), ZDivisor::from_i64(&[3, 2, 3, 1, 1, 1])],
        )
        .unwrap();
        let row = |i: usize| t.excess()[i].iter().map(|x| x.to_i64().unwrap()).collect::<Vec<_>>();
        assert_eq!(row(0), vec![0, 0, 0, 12, 0, 0]);
        assert_eq!(row(1), vec![0, 1, 0, 0, 1, 4]);
        let dic: Vec<usize> = (0..6).filter(|&j| t.is_dicritical(j)).collect();
        assert_eq!(dic, vec![1, 3, 4, 5]);
        let rup: Vec<usize> = (0..6).filter(|&j| t.is_rupture(j)).collect();
        assert_eq!(rup, vec![0, 1]);
    }

    #[test]
    fn tuple_validation_errors() {
        let g = Arc::new(rat6());
        assert!(matches!(IdealTuple::new(g.clone(), vec![]), Err(Error::NoIdeals)));
        assert!(matches!(
            IdealTuple::new(g.clone(), vec![ZDivisor::zero(6)]),
            Err(Error::ZeroIdeal { ideal: 0 })
        ));
        assert!(matches!(
            IdealTuple::new(g.clone(), vec![ZDivisor::unit(6, 0)]),
            Err(Error::NotAntinef { ideal: 0, .. })
        ));
        assert!(matches!(
            IdealTuple::new(g, vec![ZDivisor::from_i64(&[1, 2])]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn tree_paths() {
        let g = rat6();
        assert_eq!(g.path(3, 5), vec![3, 0, 1, 5]);
        assert_eq!(g.path(2, 2), vec![2]);
    }
}
