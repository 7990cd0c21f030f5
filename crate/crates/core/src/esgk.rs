//! The Elekes–Sharir–Guth–Katz transform `(a, c) ↦ ℓ_{a,c}` and the
//! constructions around it: families `L(P)`, parallel pairs, bad-plane
//! pairs, the concurrency points of pencils, pencil quadrics and the
//! tangency polynomial.
//!
//! `ℓ_{a,c}` is the line
//!
//! ```text
//! 2x = (a_x + c_x) + (a_y − c_y)·z
//! 2y = (a_y + c_y) + (c_x − a_x)·z
//! ```
//!
//! and two such lines `ℓ_{a,c}`, `ℓ_{b,d}` are coplanar exactly when
//! `Δ(a, b) = Δ(c, d)`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{MultiPoly, Rational, GR};
use crate::complex_plane::{distance_statistics, ensure_distinct, PointC2, Sign};
use crate::error::{Error, Result};
use crate::lines::{reduce_lines, screened_relation, LineC3, LinePairRelation, PointC3, QuadricC3, Vec3};

fn half() -> GR {
    GR::real(Rational::new(1, 2))
}

pub fn esgk_line(a: &PointC2, c: &PointC2) -> LineC3 {
    let h = half();
    let base = [&(&a.x + &c.x) * &h, &(&a.y + &c.y) * &h, GR::zero()];
    let dir = [&(&a.y - &c.y) * &h, &(&c.x - &a.x) * &h, GR::one()];
    LineC3::new(&base, &dir).expect("z-component of direction is 1")
}

/// `L(P)`: one line per ordered pair, stored row-major so that the line of
/// `(points[a], points[c])` sits at index `a·n + c`.
#[derive(Clone, Debug)]
pub struct EsgkFamily {
    pub points: Vec<PointC2>,
    pub lines: Vec<LineC3>,
    inverse: HashMap<LineC3, (usize, usize)>,
}

impl EsgkFamily {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn index(&self, a: usize, c: usize) -> usize {
        a * self.n() + c
    }

    pub fn line(&self, a: usize, c: usize) -> &LineC3 {
        &self.lines[self.index(a, c)]
    }

    /// The pair `(a, c)` with `ℓ_{a,c} = line`.
    pub fn preimage(&self, line: &LineC3) -> Option<(usize, usize)> {
        self.inverse.get(line).copied()
    }
}

pub fn esgk_family(points: &[PointC2]) -> Result<EsgkFamily> {
    ensure_distinct(points)?;
    let n = points.len();
    let lines: Vec<LineC3> = (0..n * n)
        .into_par_iter()
        .map(|k| esgk_line(&points[k / n], &points[k % n]))
        .collect();
    let mut inverse = HashMap::with_capacity(lines.len());
    for (k, l) in lines.iter().enumerate() {
        if let Some((a, c)) = inverse.insert(l.clone(), (k / n, k % n)) {
            return Err(Error::Degenerate(format!("ℓ map not injective at ({a}, {c}) and {:?}", (k / n, k % n))));
        }
    }
    Ok(EsgkFamily { points: points.to_vec(), lines, inverse })
}

/// Ordered pairs of distinct parallel lines in `L(P)`, counted through the
/// histogram of differences `a − c`: lines are parallel exactly when their
/// pairs share a difference vector.
pub fn parallel_pair_count(points: &[PointC2]) -> u64 {
    let mut hist: HashMap<PointC2, u64> = HashMap::new();
    for a in points {
        for c in points {
            *hist.entry(a.sub(c)).or_default() += 1;
        }
    }
    hist.values().map(|&m| m * (m - 1)).sum()
}

/// Pairwise check of the same count, directly on the lines.
pub fn parallel_pairs_bruteforce(lines: &[LineC3]) -> u64 {
    let m = lines.len();
    (0..m)
        .into_par_iter()
        .map(|i| {
            (0..m).filter(|&j| j != i && lines[i] != lines[j] && lines[i].is_parallel(&lines[j])).count() as u64
        })
        .sum()
}

/// Concurrency point of the pencil `{ℓ_{a,c} : c on y = s·x + k}` where
/// `s = ±i`. For `s = i` it is `((a_x − i·a_y + i·k)/2, (i·a_x + a_y + k)/2, −i)`;
/// the `s = −i` point is the same expression with `i ↦ −i`.
pub fn special_point(a: &PointC2, sign: Sign, k: &GR) -> PointC3 {
    let s = sign.slope();
    let h = half();
    let x = &(&(&a.x - &(&s * &a.y)) + &(&s * k)) * &h;
    let y = &(&(&(&s * &a.x) + &a.y) + k) * &h;
    PointC3::new(x, y, -s)
}

/// Quadric containing every `ℓ_{a,c}` with `c` on the isotropic line
/// `y = s·x + k`, obtained by eliminating `c_x` from the two line equations.
/// For `s = i`:
///
/// ```text
/// z²(k − a_y + i·a_x) + 2z(x + i·y − a_x − i·a_y) + (2i·x − 2y − i·a_x + a_y + k)
/// ```
pub fn pencil_quadric(a: &PointC2, sign: Sign, k: &GR) -> QuadricC3 {
    let s = sign.slope();
    let two = GR::from_int(2);
    let zz = &(k - &a.y) + &(&s * &a.x);
    // 2z·(x + s·y − a_x − s·a_y)
    let xz = two.clone();
    let yz = &two * &s;
    let z1 = &two * &(-&(&a.x + &(&s * &a.y)));
    // 2s·x − 2y − s·a_x + a_y + k
    let x1 = &two * &s;
    let y1 = -&two;
    let c0 = &(&(-&(&s * &a.x)) + &a.y) + k;
    let zero = GR::zero;
    let coeffs = [c0, x1, y1, z1, zero(), zero(), xz, zero(), yz, zz];
    QuadricC3::new(&coeffs).expect("the x-coefficient 2s is nonzero")
}

/// Direction of the unique `ℓ_{a,c}` through `p` (with `p_z ≠ ±i`), with the
/// `1 + p_z²` denominator cleared:
/// `(a_y − p_y + p_z(p_x − a_x), p_x − a_x + p_z(p_y − a_y), 1 + p_z²)`.
pub fn direction_field(a: &PointC2, p: &PointC3) -> Result<Vec3> {
    let z = p.z();
    let w = &GR::one() + &z.square();
    if w.is_zero() {
        return Err(Error::NoUniqueLine);
    }
    let dx = &p.0[0] - &a.x;
    let dy = &p.0[1] - &a.y;
    Ok([&(-&dy) + &(z * &dx), &dx + &(z * &dy), w])
}

/// The `c` with `p ∈ ℓ_{a,c}`, for `p_z ≠ ±i`.
pub fn solve_partner(a: &PointC2, p: &PointC3) -> Result<PointC2> {
    let z = p.z();
    let w = &GR::one() + &z.square();
    let winv = w.inv().ok_or(Error::NoUniqueLine)?;
    let two = GR::from_int(2);
    // c_x − z·c_y = 2p_x − a_x − a_y·z ;  z·c_x + c_y = 2p_y − a_y + a_x·z
    let r1 = &(&(&two * p.x()) - &a.x) - &(&a.y * z);
    let r2 = &(&(&two * p.y()) - &a.y) + &(&a.x * z);
    let cx = &(&r1 + &(z * &r2)) * &winv;
    let cy = &(&r2 - &(z * &r1)) * &winv;
    Ok(PointC2::new(cx, cy))
}

/// The direction field as polynomials in `(x, y, z)` for a fixed `a`.
pub fn direction_field_polys(a: &PointC2) -> [MultiPoly; 3] {
    let x = MultiPoly::var(3, 0);
    let y = MultiPoly::var(3, 1);
    let z = MultiPoly::var(3, 2);
    let ax = MultiPoly::constant(3, a.x.clone());
    let ay = MultiPoly::constant(3, a.y.clone());
    let dx = x.sub(&ax).unwrap();
    let dy = y.sub(&ay).unwrap();
    [
        dy.neg().add(&z.mul(&dx).unwrap()).unwrap(),
        dx.add(&z.mul(&dy).unwrap()).unwrap(),
        MultiPoly::one(3).add(&z.pow(2)).unwrap(),
    ]
}

/// `g_a = V_a · ∇f`: vanishes identically on every `ℓ_{a,c}` inside `Z(f)`.
pub fn tangency_poly(a: &PointC2, f: &QuadricC3) -> MultiPoly {
    let grad = f.to_poly().gradient();
    direction_field_polys(a)
        .iter()
        .zip(&grad)
        .map(|(v, g)| v.mul(g).unwrap())
        .fold(MultiPoly::zero(3), |acc, t| acc.add(&t).unwrap())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EsgkSummary {
    pub n: usize,
    pub line_count: usize,
    pub parallel_pairs: u64,
    pub bad_plane_pairs: u64,
    pub coplanar_non_bad_pairs: u64,
    pub quadruple_count: u64,
}

/// Counts of ordered pairs of distinct lines by the plane they span.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairCounts {
    pub parallel: u64,
    pub intersecting: u64,
    pub bad_plane: u64,
    pub coplanar_non_bad: u64,
}

/// Classifies every ordered pair of distinct lines.
pub fn classify_pairs(lines: &[LineC3]) -> PairCounts {
    let m = lines.len();
    let red = reduce_lines(lines);
    let (parallel, intersecting, bad, good) = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut acc = (0u64, 0u64, 0u64, 0u64);
            for j in i + 1..m {
                let rel = screened_relation(&lines[i], red[i].as_ref(), &lines[j], red[j].as_ref());
                match &rel {
                    LinePairRelation::Parallel { .. } => acc.0 += 2,
                    LinePairRelation::Intersecting { .. } => acc.1 += 2,
                    _ => {}
                }
                if let Some(plane) = rel.plane() {
                    if plane.is_bad() {
                        acc.2 += 2;
                    } else {
                        acc.3 += 2;
                    }
                }
            }
            acc
        })
        .reduce(|| (0, 0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2, a.3 + b.3));
    PairCounts { parallel, intersecting, bad_plane: bad, coplanar_non_bad: good }
}

pub fn esgk_summary(points: &[PointC2]) -> Result<(EsgkFamily, EsgkSummary)> {
    let family = esgk_family(points)?;
    let pairs = classify_pairs(&family.lines);
    let stats = distance_statistics(points)?;
    let summary = EsgkSummary {
        n: points.len(),
        line_count: family.lines.len(),
        parallel_pairs: pairs.parallel,
        bad_plane_pairs: pairs.bad_plane,
        coplanar_non_bad_pairs: pairs.coplanar_non_bad,
        quadruple_count: stats.quadruple_count,
    };
    Ok((family, summary))
}

/// Difference-vector histogram behind [`parallel_pair_count`], in canonical
/// order.
pub fn difference_histogram(points: &[PointC2]) -> BTreeMap<PointC2, u64> {
    let mut hist = BTreeMap::new();
    for a in points {
        for c in points {
            *hist.entry(a.sub(c)).or_default() += 1;
        }
    }
    hist
}
