//! Shared generators for the integration tests.

#![allow(dead_code)]

use mixmult::fixture::builtin;
use mixmult::rational::{Q, Z};
use mixmult::{DualGraph, IdealTuple, Point, ZDivisor};
use rand::Rng;

pub const FIXTURES: [&str; 5] = ["SMOOTH1", "RAT6", "CHAIN10", "NEST14", "PROP16"];

pub fn tuple(name: &str) -> IdealTuple {
    builtin(name).unwrap().tuple().unwrap()
}

pub fn zs(v: &[i64]) -> Vec<Z> {
    v.iter().map(|&x| Z::from(x)).collect()
}

pub fn pt(v: &[(i64, i64)]) -> Point {
    Point::from_ratios(v).unwrap()
}

/// Tree on `parents.len() + 1` vertices, vertex `i + 1` hanging off
/// `parents[i] % (i + 1)`, with self-intersections `-(valence + 1 + slack)`
/// so the form is diagonally dominant and hence negative definite.
pub fn tree_matrix(parents: &[usize], slack: &[u8]) -> Vec<Vec<i64>> {
    let n = parents.len() + 1;
    let mut m = vec![vec![0i64; n]; n];
    for (i, &p) in parents.iter().enumerate() {
        let (a, b) = (i + 1, p % (i + 1));
        m[a][b] = 1;
        m[b][a] = 1;
    }
    for j in 0..n {
        let val: i64 = m[j].iter().sum();
        m[j][j] = -(val + 1 + i64::from(slack[j % slack.len()] % 3));
    }
    m
}

pub fn tree_graph(parents: &[usize], slack: &[u8]) -> DualGraph {
    DualGraph::new(tree_matrix(parents, slack)).unwrap()
}

/// Random strictly positive point with small denominators, so that wall
/// lines are hit with positive probability.
pub fn random_point<R: Rng>(rng: &mut R, r: usize, max: i64) -> Point {
    let c = (0..r)
        .map(|_| {
            let d = rng.gen_range(1..=24i64);
            Q::new(Z::from(rng.gen_range(1..=max * d)), Z::from(d))
        })
        .collect();
    Point::new(c).unwrap()
}

/// Random point moved onto a wall hyperplane of a random component at a
/// random positive level, by adjusting one coordinate. `None` if the
/// adjusted coordinate would be negative.
pub fn random_wall_point<R: Rng>(rng: &mut R, t: &IdealTuple, max: i64) -> Option<Point> {
    let mut c = random_point(rng, t.r(), max).coords().to_vec();
    let j = rng.gen_range(0..t.n());
    let i = rng.gen_range(0..t.r());
    let level = Z::from(rng.gen_range(1..=3i64));
    let k = &t.graph().canonical().0;
    let rest: Q = (0..t.r())
        .filter(|&x| x != i)
        .map(|x| &c[x] * Q::from_integer(t.coeff(x, j).clone()))
        .sum();
    let ci = (Q::from_integer(level) + &k[j] - rest) / Q::from_integer(t.coeff(i, j).clone());
    if ci < Q::from_integer(Z::from(0)) {
        return None;
    }
    c[i] = ci;
    Some(Point::new(c).unwrap())
}

pub fn random_divisor<R: Rng>(rng: &mut R, n: usize, lo: i64, hi: i64) -> ZDivisor {
    ZDivisor((0..n).map(|_| Z::from(rng.gen_range(lo..=hi))).collect())
}
