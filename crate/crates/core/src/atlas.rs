//! Exact constancy-region atlases for pairs of ideals.
//!
//! Inside a box `[0, b_1] × [0, b_2]` every jumping point lies on a wall line
//! `e_{1,j} z_1 + e_{2,j} z_2 = ℓ + k_j` with `ℓ >= 1`. The arrangement of
//! these lines and the box sides is built as a planar subdivision with exact
//! rational vertices; each face is labelled with the divisor of the ideal at
//! an interior point, and edges separating different divisors are grouped
//! into facets.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::engine::{mmi_divisor, Point, ReducedDivisor};
use crate::error::{Error, Result};
use crate::graph::{IdealTuple, ZDivisor};
use crate::jump::{checked_multiplicity, jump_record, JumpRecord};
use crate::polytope::Hyperplane;
use crate::rational::{ceil_q, q, qi, qz, Q, Z};

/// A wall line `a·z = c` with every `(component, level)` pair lying on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallLine {
    pub plane: Hyperplane,
    pub supports: Vec<(usize, Z)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum LineKind {
    Wall(usize),
    Side,
}

#[derive(Clone, Debug)]
struct Line {
    a: Q,
    b: Q,
    c: Q,
    kind: LineKind,
}

impl Line {
    fn eval(&self, p: &(Q, Q)) -> Q {
        &self.a * &p.0 + &self.b * &p.1 - &self.c
    }

    /// Position along the line, increasing in direction `(-b, a)`.
    fn param(&self, p: &(Q, Q)) -> Q {
        -&self.b * &p.0 + &self.a * &p.1
    }
}

/// Edge of the subdivision: a segment of one line between consecutive vertices.
#[derive(Clone, Debug)]
pub struct AtlasEdge {
    pub from: usize,
    pub to: usize,
    /// Index into [`WallAtlas::lines`], or `None` for a box side.
    pub wall: Option<usize>,
    /// Faces on each side; `None` outside the box.
    pub faces: [Option<usize>; 2],
    pub midpoint: Point,
}

#[derive(Clone, Debug)]
pub struct AtlasFace {
    pub vertices: Vec<usize>,
    pub representative: Point,
    pub divisor: ZDivisor,
    /// Union-find root: faces with equal divisors that share an edge agree.
    pub region: usize,
}

#[derive(Clone, Debug)]
pub struct FacetSample {
    pub point: Point,
    pub multiplicity: u64,
    pub minimal: ReducedDivisor,
}

/// A maximal collinear run of wall edges with one divisor pair.
#[derive(Clone, Debug)]
pub struct AtlasFacet {
    pub line: usize,
    pub edges: Vec<usize>,
    pub start: Point,
    pub end: Point,
    /// Divisor on the side of the line containing the origin.
    pub lower: ZDivisor,
    pub upper: ZDivisor,
    pub samples: [FacetSample; 2],
}

impl AtlasFacet {
    pub fn multiplicity(&self) -> u64 {
        self.samples[0].multiplicity
    }

    pub fn minimal(&self) -> &ReducedDivisor {
        &self.samples[0].minimal
    }
}

#[derive(Clone, Debug)]
pub struct AtlasVertex {
    pub point: Point,
    pub on_box: bool,
    /// Facets having this vertex as an edge endpoint.
    pub facets: Vec<usize>,
    /// Filled for vertices incident to a facet.
    pub record: Option<JumpRecord>,
}

#[derive(Clone, Debug)]
pub struct WallAtlas {
    pub bounds: (Q, Q),
    pub lines: Vec<WallLine>,
    pub vertices: Vec<AtlasVertex>,
    pub edges: Vec<AtlasEdge>,
    pub faces: Vec<AtlasFace>,
    pub facets: Vec<AtlasFacet>,
    /// Divisor of the ideal at the origin.
    pub origin_divisor: ZDivisor,
}

impl WallAtlas {
    /// Facets on the boundary of the region containing the origin.
    pub fn lc_facets(&self) -> Vec<usize> {
        (0..self.facets.len()).filter(|&f| self.facets[f].lower == self.origin_divisor).collect()
    }

    /// Vertices off the box boundary that are incident to facets on at
    /// least two different lines.
    pub fn facet_intersections(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| {
                let vx = &self.vertices[v];
                if vx.on_box {
                    return false;
                }
                let mut lines: Vec<usize> = vx.facets.iter().map(|&f| self.facets[f].line).collect();
                lines.sort_unstable();
                lines.dedup();
                lines.len() >= 2
            })
            .collect()
    }

    /// Facets sharing `facet`'s lower divisor that meet it at a vertex and lie
    /// on another line.
    pub fn meeting_facets(&self, facet: usize) -> Vec<usize> {
        let f = &self.facets[facet];
        let mut out = Vec::new();
        for &e in &f.edges {
            for v in [self.edges[e].from, self.edges[e].to] {
                for &g in &self.vertices[v].facets {
                    let other = &self.facets[g];
                    if g != facet && other.line != f.line && other.lower == f.lower && !out.contains(&g) {
                        out.push(g);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Number of distinct regions after merging equal-divisor neighbours.
    pub fn region_count(&self) -> usize {
        let mut r: Vec<usize> = self.faces.iter().map(|f| f.region).collect();
        r.sort_unstable();
        r.dedup();
        r.len()
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Wall lines meeting the open box, deduplicated geometrically.
pub fn wall_lines(t: &IdealTuple, bounds: &(Q, Q)) -> Result<Vec<WallLine>> {
    if t.r() != 2 {
        return Err(Error::UnsupportedRank { expected: 2, found: t.r() });
    }
    let k = &t.graph().canonical().0;
    let mut out: Vec<WallLine> = Vec::new();
    let mut index: HashMap<Hyperplane, usize> = HashMap::new();
    for j in 0..t.n() {
        let normal = t.normal(j);
        let top = qz(&normal[0]) * &bounds.0 + qz(&normal[1]) * &bounds.1;
        let max_level = ceil_q(&(&top - &k[j]));
        let mut l = Z::one();
        while l <= max_level {
            let rhs = qz(&l) + &k[j];
            if rhs.is_positive() && rhs < top {
                let plane = Hyperplane::new(normal.clone(), rhs);
                let idx = *index.entry(plane.clone()).or_insert_with(|| {
                    out.push(WallLine { plane, supports: Vec::new() });
                    out.len() - 1
                });
                out[idx].supports.push((j, l.clone()));
            }
            l += 1;
        }
    }
    Ok(out)
}

fn angle_cmp(a: &(Q, Q), b: &(Q, Q)) -> Ordering {
    let half = |d: &(Q, Q)| -> u8 {
        if d.1.is_positive() || (d.1.is_zero() && d.0.is_positive()) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let cross = &a.0 * &b.1 - &a.1 * &b.0;
        if cross.is_positive() {
            Ordering::Less
        } else if cross.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// Builds the exact arrangement in `[0, b_1] × [0, b_2]`.
pub fn cell_decomposition(t: &IdealTuple, bounds: (Q, Q)) -> Result<WallAtlas> {
    if !bounds.0.is_positive() || !bounds.1.is_positive() {
        return Err(Error::InvalidPoint("box bounds must be positive".into()));
    }
    let walls = wall_lines(t, &bounds)?;
    if walls.is_empty() {
        return Err(Error::BoxTooSmall);
    }
    let mut lines: Vec<Line> = walls
        .iter()
        .enumerate()
        .map(|(i, w)| Line {
            a: qz(&w.plane.normal[0]),
            b: qz(&w.plane.normal[1]),
            c: w.plane.rhs.clone(),
            kind: LineKind::Wall(i),
        })
        .collect();
    let side = |a: i64, b: i64, c: Q| Line { a: qi(a), b: qi(b), c, kind: LineKind::Side };
    lines.push(side(1, 0, Q::zero()));
    lines.push(side(1, 0, bounds.0.clone()));
    lines.push(side(0, 1, Q::zero()));
    lines.push(side(0, 1, bounds.1.clone()));

    let inside = |p: &(Q, Q)| {
        !p.0.is_negative() && !p.1.is_negative() && p.0 <= bounds.0 && p.1 <= bounds.1
    };
    let mut coords: Vec<(Q, Q)> = Vec::new();
    let mut vindex: HashMap<(Q, Q), usize> = HashMap::new();
    let mut on_line: Vec<Vec<usize>> = vec![Vec::new(); lines.len()];
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (l1, l2) = (&lines[i], &lines[j]);
            let det = &l1.a * &l2.b - &l1.b * &l2.a;
            if det.is_zero() {
                continue;
            }
            let x = (&l1.c * &l2.b - &l1.b * &l2.c) / &det;
            let y = (&l1.a * &l2.c - &l1.c * &l2.a) / &det;
            let p = (x, y);
            if !inside(&p) {
                continue;
            }
            let id = *vindex.entry(p.clone()).or_insert_with(|| {
                coords.push(p);
                coords.len() - 1
            });
            on_line[i].push(id);
            on_line[j].push(id);
        }
    }

    // Edges along each line, ordered by position.
    let mut edges: Vec<AtlasEdge> = Vec::new();
    let mut line_edges: Vec<Vec<usize>> = vec![Vec::new(); lines.len()];
    for (li, vs) in on_line.iter_mut().enumerate() {
        vs.sort_unstable();
        vs.dedup();
        let line = &lines[li];
        vs.sort_by(|&a, &b| line.param(&coords[a]).cmp(&line.param(&coords[b])));
        for w in vs.windows(2) {
            let (a, b) = (&coords[w[0]], &coords[w[1]]);
            let mid = Point::new(vec![(&a.0 + &b.0) / qi(2), (&a.1 + &b.1) / qi(2)])?;
            line_edges[li].push(edges.len());
            edges.push(AtlasEdge {
                from: w[0],
                to: w[1],
                wall: match line.kind {
                    LineKind::Wall(i) => Some(i),
                    LineKind::Side => None,
                },
                faces: [None, None],
                midpoint: mid,
            });
        }
    }

    // Half-edge 2e runs from -> to, 2e+1 runs to -> from.
    let nh = 2 * edges.len();
    let tail = |h: usize| if h.is_multiple_of(2) { edges[h / 2].from } else { edges[h / 2].to };
    let head = |h: usize| if h.is_multiple_of(2) { edges[h / 2].to } else { edges[h / 2].from };
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); coords.len()];
    for h in 0..nh {
        outgoing[tail(h)].push(h);
    }
    let dir = |h: usize| -> (Q, Q) {
        let (a, b) = (&coords[tail(h)], &coords[head(h)]);
        (&b.0 - &a.0, &b.1 - &a.1)
    };
    let mut pos_in = vec![0usize; nh];
    for out in outgoing.iter_mut() {
        out.sort_by(|&x, &y| angle_cmp(&dir(x), &dir(y)));
        for (i, &h) in out.iter().enumerate() {
            pos_in[h] = i;
        }
    }
    // Face on the left of h continues with the clockwise neighbour of twin(h).
    let next = |h: usize| -> usize {
        let twin = h ^ 1;
        let v = head(h);
        let out = &outgoing[v];
        let i = pos_in[twin];
        out[(i + out.len() - 1) % out.len()]
    };
    let mut face_of = vec![usize::MAX; nh];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for h0 in 0..nh {
        if face_of[h0] != usize::MAX {
            continue;
        }
        let id = cycles.len();
        let mut cyc = Vec::new();
        let mut h = h0;
        loop {
            face_of[h] = id;
            cyc.push(h);
            h = next(h);
            if h == h0 {
                break;
            }
        }
        cycles.push(cyc);
    }
    // Keep counter-clockwise cycles; the single clockwise one is the outside.
    let mut face_id = vec![usize::MAX; cycles.len()];
    let mut faces_v: Vec<Vec<usize>> = Vec::new();
    for (ci, cyc) in cycles.iter().enumerate() {
        let vs: Vec<usize> = cyc.iter().map(|&h| tail(h)).collect();
        let mut area = Q::zero();
        for i in 0..vs.len() {
            let (a, b) = (&coords[vs[i]], &coords[vs[(i + 1) % vs.len()]]);
            area += &a.0 * &b.1 - &a.1 * &b.0;
        }
        if area.is_positive() {
            face_id[ci] = faces_v.len();
            faces_v.push(vs);
        }
    }
    for (e, edge) in edges.iter_mut().enumerate() {
        let f0 = face_id[face_of[2 * e]];
        let f1 = face_id[face_of[2 * e + 1]];
        edge.faces = [(f0 != usize::MAX).then_some(f0), (f1 != usize::MAX).then_some(f1)];
    }

    let reps: Vec<Point> = faces_v
        .iter()
        .map(|vs| {
            let k = qi(vs.len() as i64);
            let sx: Q = vs.iter().map(|&v| coords[v].0.clone()).sum();
            let sy: Q = vs.iter().map(|&v| coords[v].1.clone()).sum();
            Point::new(vec![sx / &k, sy / k])
        })
        .collect::<Result<_>>()?;
    let divisors: Vec<ZDivisor> = reps.par_iter().map(|p| mmi_divisor(t, p)).collect::<Result<_>>()?;

    let mut parent: Vec<usize> = (0..faces_v.len()).collect();
    for e in &edges {
        if let [Some(a), Some(b)] = e.faces {
            if divisors[a] == divisors[b] {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let faces: Vec<AtlasFace> = (0..faces_v.len())
        .map(|f| AtlasFace {
            vertices: faces_v[f].clone(),
            representative: reps[f].clone(),
            divisor: divisors[f].clone(),
            region: find(&mut parent, f),
        })
        .collect();

    // Facets: maximal runs along a line with a constant divisor pair.
    let mut facets_raw: Vec<(usize, Vec<usize>, ZDivisor, ZDivisor)> = Vec::new();
    for (li, le) in line_edges.iter().enumerate() {
        let LineKind::Wall(wi) = lines[li].kind else {
            continue;
        };
        let mut current: Option<(Vec<usize>, ZDivisor, ZDivisor)> = None;
        for &e in le {
            let edge = &edges[e];
            let pair = match edge.faces {
                [Some(a), Some(b)] if divisors[a] != divisors[b] => {
                    let below = lines[li].eval(&(reps[a].coords()[0].clone(), reps[a].coords()[1].clone()));
                    let (lo, hi) = if below.is_negative() { (a, b) } else { (b, a) };
                    Some((divisors[lo].clone(), divisors[hi].clone()))
                }
                _ => None,
            };
            match (pair, current.as_mut()) {
                (Some((lo, hi)), Some(cur)) if cur.1 == lo && cur.2 == hi && edges[*cur.0.last().unwrap()].to == edge.from => {
                    cur.0.push(e);
                }
                (Some((lo, hi)), _) => {
                    if let Some(c) = current.take() {
                        facets_raw.push((wi, c.0, c.1, c.2));
                    }
                    current = Some((vec![e], lo, hi));
                }
                (None, _) => {
                    if let Some(c) = current.take() {
                        facets_raw.push((wi, c.0, c.1, c.2));
                    }
                }
            }
        }
        if let Some(c) = current.take() {
            facets_raw.push((wi, c.0, c.1, c.2));
        }
    }

    let facets: Vec<AtlasFacet> = facets_raw
        .into_par_iter()
        .map(|(wi, es, lower, upper)| build_facet(t, &coords, &edges, wi, es, lower, upper))
        .collect::<Result<_>>()?;

    let mut vertices: Vec<AtlasVertex> = coords
        .iter()
        .map(|p| {
            Ok(AtlasVertex {
                point: Point::new(vec![p.0.clone(), p.1.clone()])?,
                on_box: p.0.is_zero() || p.1.is_zero() || p.0 == bounds.0 || p.1 == bounds.1,
                facets: Vec::new(),
                record: None,
            })
        })
        .collect::<Result<_>>()?;
    for (fi, f) in facets.iter().enumerate() {
        for &e in &f.edges {
            for v in [edges[e].from, edges[e].to] {
                if !vertices[v].facets.contains(&fi) {
                    vertices[v].facets.push(fi);
                }
            }
        }
    }
    let records: Vec<(usize, JumpRecord)> = vertices
        .par_iter()
        .enumerate()
        .filter(|(_, v)| !v.facets.is_empty())
        .map(|(i, v)| jump_record(t, &v.point).map(|r| (i, r)))
        .collect::<Result<_>>()?;
    for (i, r) in records {
        vertices[i].record = Some(r);
    }
    Ok(WallAtlas {
        bounds,
        lines: walls,
        vertices,
        edges,
        faces,
        facets,
        origin_divisor: mmi_divisor(t, &Point::origin(2))?,
    })
}

fn build_facet(
    t: &IdealTuple,
    coords: &[(Q, Q)],
    edges: &[AtlasEdge],
    line: usize,
    es: Vec<usize>,
    lower: ZDivisor,
    upper: ZDivisor,
) -> Result<AtlasFacet> {
    let first = &edges[es[0]];
    let last = &edges[*es.last().unwrap()];
    let (s, e) = (&coords[first.from], &coords[last.to]);
    // Run vertices in order. A sample landing on one is moved to the
    // midpoint of the adjacent edge, the first sample backwards and the
    // second forwards, so the two stay distinct and off every vertex.
    let mut run: Vec<usize> = vec![first.from];
    run.extend(es.iter().map(|&x| edges[x].to));
    let at = |frac: &Q| -> (Q, Q) { (&s.0 + frac * (&e.0 - &s.0), &s.1 + frac * (&e.1 - &s.1)) };
    let mut samples = Vec::with_capacity(2);
    for (frac, step) in [(q(1, 3), -1isize), (q(2, 3), 1)] {
        let mut p = at(&frac);
        if let Some(i) = run.iter().position(|&v| coords[v] == p) {
            let nb = &coords[run[(i as isize + step) as usize]];
            p = ((&p.0 + &nb.0) / qi(2), (&p.1 + &nb.1) / qi(2));
        }
        let point = Point::new(vec![p.0, p.1])?;
        let d = mmi_divisor(t, &point)?;
        if d != upper {
            return Err(Error::Inconsistent(format!("facet sample {point} is not on the upper side")));
        }
        let multiplicity = checked_multiplicity(t, &point)?;
        let minimal = crate::engine::minimal_jumping_divisor(t, &point)?;
        samples.push(FacetSample { point, multiplicity, minimal });
    }
    let samples: [FacetSample; 2] = samples.try_into().expect("two samples");
    Ok(AtlasFacet {
        line,
        edges: es,
        start: Point::new(vec![s.0.clone(), s.1.clone()])?,
        end: Point::new(vec![e.0.clone(), e.1.clone()])?,
        lower,
        upper,
        samples,
    })
}

/// Facets with their interior minimal jumping divisors, as
/// `(facet index, divisor, multiplicity)`.
pub fn c_facets(atlas: &WallAtlas) -> Vec<(usize, ReducedDivisor, u64)> {
    atlas
        .facets
        .iter()
        .enumerate()
        .map(|(i, f)| (i, f.minimal().clone(), f.multiplicity()))
        .collect()
}
