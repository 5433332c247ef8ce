//! Multiplicities of jumping points.
//!
//! Four routes are available and cross-checked:
//! the intersection form on the maximal jumping divisor `H`,
//! its fractional-part rewriting, the same form on the minimal jumping
//! divisor `G`, and the colength difference of the ideals at and just
//! before the point.

use num_traits::{Signed, ToPrimitive, Zero};

use crate::engine::{
    levels, maximal_jumping_divisor, minimal_jumping_divisor, mmi_divisor, mmi_divisor_left,
    wall_lines_through, Point, ReducedDivisor,
};
use crate::error::{Error, Result};
use crate::graph::{IdealTuple, ZDivisor};
use crate::lattice::colength;
use crate::linalg;
use crate::rational::{floor_q, fmt_q, frac_q, qz, Q, Z};

/// Everything known about a single point.
#[derive(Clone, Debug)]
pub struct JumpRecord {
    pub point: Point,
    pub divisor: ZDivisor,
    pub left_divisor: ZDivisor,
    pub maximal: ReducedDivisor,
    pub minimal: Option<ReducedDivisor>,
    pub multiplicity: u64,
    /// `(j, ℓ)` with `(c·F)_j - k_j = ℓ`, for `j` in the maximal divisor.
    pub wall_lines: Vec<(usize, Z)>,
}

fn to_mult(v: Z, what: &str, c: &Point) -> Result<u64> {
    if v.is_negative() {
        return Err(Error::Inconsistent(format!("{what} multiplicity {v} is negative at {c}")));
    }
    v.to_u64()
        .ok_or_else(|| Error::Inconsistent(format!("{what} multiplicity {v} overflows at {c}")))
}

/// `⌈K - c·F⌉ = -⌊c·F - K⌋`.
fn ceil_k_minus_cf(t: &IdealTuple, c: &Point) -> Result<ZDivisor> {
    let (v, _) = levels(t, c)?;
    Ok(ZDivisor(v.iter().map(|x| -floor_q(x)).collect()))
}

/// `(⌈K - c·F⌉ + S)·S + #{connected components of S}`.
fn form(t: &IdealTuple, c: &Point, s: &ReducedDivisor) -> Result<Z> {
    let g = t.graph();
    let mut a = ceil_k_minus_cf(t, c)?;
    let sd = s.to_zdivisor();
    for (x, y) in a.0.iter_mut().zip(&sd.0) {
        *x += y;
    }
    let cc = g.induced_components(s.mask()).len();
    Ok(g.intersect(&a, &sd) + Z::from(cc))
}

/// Multiplicity from the intersection form on the maximal jumping divisor.
pub fn multiplicity(t: &IdealTuple, c: &Point) -> Result<u64> {
    let h = maximal_jumping_divisor(t, c)?;
    to_mult(form(t, c, &h)?, "maximal-divisor", c)
}

/// Multiplicity as `Σ_{i∈H} (Σ_{j~i} {v_j} + Σ_t c_t ρ_{t,i}) - #cc(H)`.
pub fn multiplicity_fractional(t: &IdealTuple, c: &Point) -> Result<u64> {
    let h = maximal_jumping_divisor(t, c)?;
    let (v, _) = levels(t, c)?;
    let g = t.graph();
    let mut total = Q::zero();
    for i in h.support() {
        for &j in g.neighbors(i) {
            total += frac_q(&v[j]);
        }
        for (ti, ct) in c.coords().iter().enumerate() {
            total += ct * qz(t.rho(ti, i));
        }
    }
    total -= Q::from_integer(Z::from(g.induced_components(h.mask()).len()));
    if !total.is_integer() {
        return Err(Error::NonIntegralTotal { point: c.to_string(), value: fmt_q(&total) });
    }
    to_mult(total.to_integer(), "fractional", c)
}

/// Multiplicity from the intersection form on the minimal jumping divisor.
pub fn multiplicity_via_minimal(t: &IdealTuple, lambda: &Point) -> Result<u64> {
    let g = minimal_jumping_divisor(t, lambda)?;
    to_mult(form(t, lambda, &g)?, "minimal-divisor", lambda)
}

/// `(j, (⌈K - λ·F⌉ + G)·E_j)` for each component `j` of the minimal jumping
/// divisor `G`. Each value is nonnegative, and all vanish when the
/// multiplicity is one.
pub fn minimal_divisor_intersections(t: &IdealTuple, lambda: &Point) -> Result<Vec<(usize, Z)>> {
    let g = minimal_jumping_divisor(t, lambda)?;
    let mut a = ceil_k_minus_cf(t, lambda)?;
    for (x, y) in a.0.iter_mut().zip(&g.to_zdivisor().0) {
        *x += y;
    }
    Ok(g.support().into_iter().map(|j| (j, t.graph().dot_e(&a, j))).collect())
}

/// `colength(D_c) - colength(D_left)`.
pub fn multiplicity_oracle(t: &IdealTuple, c: &Point) -> Result<u64> {
    let g = t.graph();
    let hi = colength(g, &mmi_divisor(t, c)?)?;
    let lo = colength(g, &mmi_divisor_left(t, c)?)?;
    to_mult(hi - lo, "colength", c)
}

/// Multiplicity after checking that every applicable route agrees.
pub fn checked_multiplicity(t: &IdealTuple, c: &Point) -> Result<u64> {
    let a = multiplicity(t, c)?;
    let b = multiplicity_fractional(t, c)?;
    let o = multiplicity_oracle(t, c)?;
    if a != b || a != o {
        return Err(Error::Inconsistent(format!(
            "multiplicity routes disagree at {c}: form {a}, fractional {b}, colength {o}"
        )));
    }
    if a > 0 {
        let m = multiplicity_via_minimal(t, c)?;
        if m != a {
            return Err(Error::Inconsistent(format!(
                "minimal-divisor multiplicity {m} differs from {a} at {c}"
            )));
        }
    }
    Ok(a)
}

pub fn jump_record(t: &IdealTuple, c: &Point) -> Result<JumpRecord> {
    let multiplicity = checked_multiplicity(t, c)?;
    let divisor = mmi_divisor(t, c)?;
    let left_divisor = mmi_divisor_left(t, c)?;
    if (multiplicity > 0) != (divisor != left_divisor) {
        return Err(Error::Inconsistent(format!("multiplicity and ideal change disagree at {c}")));
    }
    let minimal = if multiplicity > 0 { Some(minimal_jumping_divisor(t, c)?) } else { None };
    Ok(JumpRecord {
        point: c.clone(),
        divisor,
        left_divisor,
        maximal: maximal_jumping_divisor(t, c)?,
        minimal,
        multiplicity,
        wall_lines: wall_lines_through(t, c)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JumpTest {
    pub jumping: bool,
    /// A connected component `H` of the maximal jumping divisor with
    /// `(⌈K - c·F⌉ + H_c)·H >= 0`.
    pub witness: Option<Vec<usize>>,
}

/// Jumping criterion by connected components of the maximal divisor,
/// checked against `m > 0`.
pub fn is_jumping(t: &IdealTuple, c: &Point) -> Result<JumpTest> {
    let g = t.graph();
    let h = maximal_jumping_divisor(t, c)?;
    let mut a = ceil_k_minus_cf(t, c)?;
    for j in h.support() {
        a.0[j] += 1;
    }
    let witness = g.induced_components(h.mask()).into_iter().find(|comp| {
        let s: Z = comp.iter().map(|&j| g.dot_e(&a, j)).sum();
        !s.is_negative()
    });
    let jumping = witness.is_some();
    if jumping != (checked_multiplicity(t, c)? > 0) {
        return Err(Error::Inconsistent(format!("jumping criterion and multiplicity disagree at {c}")));
    }
    Ok(JumpTest { jumping, witness })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InequalityReport {
    /// `(i, (⌈K - c·F⌉ + H_c)·E_i)` for `E_i <= H_c`.
    pub per_component: Vec<(usize, Z)>,
    /// `(H, (⌈K - c·F⌉ + H_c)·H)` for connected components `H`.
    pub per_connected: Vec<(Vec<usize>, Z)>,
}

/// Evaluates the lower bounds `>= -1` on the maximal jumping divisor.
pub fn check_h_inequalities(t: &IdealTuple, c: &Point) -> Result<InequalityReport> {
    let g = t.graph();
    let h = maximal_jumping_divisor(t, c)?;
    let mut a = ceil_k_minus_cf(t, c)?;
    for j in h.support() {
        a.0[j] += 1;
    }
    let mut rep = InequalityReport::default();
    let minus_one = Z::from(-1);
    for i in h.support() {
        let v = g.dot_e(&a, i);
        if v < minus_one {
            return Err(Error::InequalityViolated {
                point: c.to_string(),
                support: format!("E{}", i + 1),
                value: v.to_string(),
            });
        }
        rep.per_component.push((i, v));
    }
    for comp in g.induced_components(h.mask()) {
        let v: Z = comp.iter().map(|&j| g.dot_e(&a, j)).sum();
        if v < minus_one {
            return Err(Error::InequalityViolated {
                point: c.to_string(),
                support: comp.iter().map(|j| format!("E{}", j + 1)).collect::<Vec<_>>().join(","),
                value: v.to_string(),
            });
        }
        rep.per_connected.push((comp, v));
    }
    Ok(rep)
}

/// `ρ_{c,α} = Σ_{E_i <= H_c} Σ_t α_t ρ_{t,i}`.
pub fn rho(t: &IdealTuple, c: &Point, alpha: &[Z]) -> Result<Z> {
    if alpha.len() != t.r() {
        return Err(Error::LengthMismatch { what: "shift vector".into(), expected: t.r(), found: alpha.len() });
    }
    let h = maximal_jumping_divisor(t, c)?;
    let mut s = Z::zero();
    for i in h.support() {
        for (ti, a) in alpha.iter().enumerate() {
            s += a * t.rho(ti, i);
        }
    }
    Ok(s)
}

/// A point is stable for shifts by `α` when the shift adds no component to
/// the maximal jumping divisor: no integral level with zero weight at `c`
/// acquires positive weight. Stable points satisfy `H_{c+α} = H_c` and
/// `m(c+α) - m(c) = ρ_{c,α}`. Every point with a positive coordinate is
/// stable; the origin is not.
pub fn is_shift_stable(t: &IdealTuple, c: &Point, alpha: &[Z]) -> Result<bool> {
    let (v, w) = levels(t, c)?;
    for j in 0..t.n() {
        let shift: Z = alpha.iter().enumerate().map(|(i, a)| a * t.coeff(i, j)).sum();
        if v[j].is_integer() && w[j].is_zero() && !shift.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct Crossing {
    pub mu: Q,
    pub point: Point,
    pub multiplicity: u64,
}

#[derive(Clone, Debug)]
pub struct PerturbationReport {
    pub multiplicity: u64,
    pub offset: Vec<Q>,
    pub crossings: Vec<Crossing>,
    pub total: u64,
}

/// Wall hyperplanes through `λ`, deduplicated, as `(normal, rhs)`.
fn planes_through(t: &IdealTuple, lambda: &Point) -> Result<Vec<crate::polytope::Hyperplane>> {
    let k = &t.graph().canonical().0;
    let mut out = Vec::new();
    for (j, l) in wall_lines_through(t, lambda)? {
        let h = crate::polytope::Hyperplane::new(t.normal(j), qz(&l) + &k[j]);
        if !out.contains(&h) {
            out.push(h);
        }
    }
    Ok(out)
}

/// Compares `m(λ)` with the sum of multiplicities where the parallel line
/// `λ + offset + μ·dir` crosses the wall hyperplanes through `λ`.
///
/// The offset is admissible when no other wall hyperplane meets the triangle
/// spanned by `λ` and the outermost crossings; otherwise `OffsetTooLarge`.
pub fn perturbation_sum(t: &IdealTuple, lambda: &Point, dir: &[Z], offset: &[Q]) -> Result<PerturbationReport> {
    let r = t.r();
    if dir.len() != r || offset.len() != r {
        return Err(Error::LengthMismatch { what: "direction or offset".into(), expected: r, found: dir.len().min(offset.len()) });
    }
    let multiplicity = checked_multiplicity(t, lambda)?;
    if multiplicity == 0 {
        return Err(Error::NotAJumpingPoint(lambda.to_string()));
    }
    let planes = planes_through(t, lambda)?;
    let base: Vec<Q> = lambda.coords().iter().zip(offset).map(|(a, b)| a + b).collect();
    let dir_q: Vec<Q> = dir.iter().map(qz).collect();
    let mut mus: Vec<Q> = Vec::new();
    for h in &planes {
        let nu = linalg::dot(&h.normal_q(), &dir_q);
        if nu.is_zero() {
            return Err(Error::DirectionOrthogonal);
        }
        let mu = (&h.rhs - h.eval(&base)) / nu;
        if !mus.contains(&mu) {
            mus.push(mu);
        }
    }
    mus.sort();
    let at = |mu: &Q| -> Vec<Q> { base.iter().zip(&dir_q).map(|(b, u)| b + mu * u).collect() };
    let lo = at(&mus[0]);
    let hi = at(mus.last().unwrap());
    let corners = [lambda.coords().to_vec(), lo, hi];
    let k = &t.graph().canonical().0;
    for j in 0..t.n() {
        let nj: Vec<Q> = t.normal(j).iter().map(qz).collect();
        let vals: Vec<Q> = corners.iter().map(|p| linalg::dot(&nj, p) - &k[j]).collect();
        let a = vals.iter().min().unwrap();
        let b = vals.iter().max().unwrap();
        let mut l = crate::rational::ceil_q(a).max(Z::from(1));
        while qz(&l) <= *b {
            let h = crate::polytope::Hyperplane::new(t.normal(j), qz(&l) + &k[j]);
            if !planes.contains(&h) {
                return Err(Error::OffsetTooLarge(format!("E{} level {}", j + 1, l)));
            }
            l += 1;
        }
    }
    let mut crossings = Vec::new();
    let mut total = 0u64;
    for mu in mus {
        let point = Point::new(at(&mu))?;
        let m = checked_multiplicity(t, &point)?;
        total += m;
        crossings.push(Crossing { mu, point, multiplicity: m });
    }
    if total != multiplicity {
        return Err(Error::Inconsistent(format!(
            "perturbation sum {total} differs from multiplicity {multiplicity} at {lambda}"
        )));
    }
    Ok(PerturbationReport { multiplicity, offset: offset.to_vec(), crossings, total })
}

/// Finds an admissible transverse offset for [`perturbation_sum`] by halving
/// `u_j e_i - u_i e_j` until no foreign wall interferes. For a single ideal
/// the zero offset is returned.
pub fn admissible_offset(t: &IdealTuple, lambda: &Point, dir: &[Z]) -> Result<Vec<Q>> {
    let r = t.r();
    if r == 1 {
        return Ok(vec![Q::zero()]);
    }
    let mut bases = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            let mut w = vec![Q::zero(); r];
            w[i] = qz(&dir[j]);
            w[j] = -qz(&dir[i]);
            if w.iter().any(|x| !x.is_zero()) {
                bases.push(w);
            }
        }
    }
    let mut scale = Q::from_integer(Z::from(1));
    let half = Q::new(Z::from(1), Z::from(2));
    for _ in 0..96 {
        scale *= &half;
        for w in &bases {
            for sign in [1i64, -1] {
                let off: Vec<Q> = w.iter().map(|x| x * &scale * Q::from_integer(Z::from(sign))).collect();
                match perturbation_sum(t, lambda, dir, &off) {
                    Ok(_) => return Ok(off),
                    Err(Error::OffsetTooLarge(_)) | Err(Error::InvalidPoint(_)) => continue,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Err(Error::NoAdmissibleOffset(lambda.to_string()))
}
