//! Complex lines, planes and quadrics in ℂ³.
//!
//! Lines are parametric (base point plus direction), planes and quadrics
//! implicit. Every type is kept in a canonical form so that equality of
//! point sets is structural equality.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{modp, Matrix, MultiPoly, GR};
use crate::complex_plane::Sign;
use crate::error::{Error, Result};

pub type Vec3 = [GR; 3];

pub fn dot(a: &Vec3, b: &Vec3) -> GR {
    &(&(&a[0] * &b[0]) + &(&a[1] * &b[1])) + &(&a[2] * &b[2])
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

pub fn sub3(a: &Vec3, b: &Vec3) -> Vec3 {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

pub fn add3(a: &Vec3, b: &Vec3) -> Vec3 {
    [&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2]]
}

pub fn scale3(a: &Vec3, k: &GR) -> Vec3 {
    [&a[0] * k, &a[1] * k, &a[2] * k]
}

pub fn is_zero3(a: &Vec3) -> bool {
    a.iter().all(GR::is_zero)
}

/// Divides by the first nonzero entry; `None` for the zero vector.
fn normalize_leading(v: &Vec3) -> Option<(usize, Vec3)> {
    let k = v.iter().position(|c| !c.is_zero())?;
    let inv = v[k].inv().expect("nonzero");
    Some((k, scale3(v, &inv)))
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointC3(pub Vec3);

impl PointC3 {
    pub fn new(x: GR, y: GR, z: GR) -> Self {
        PointC3([x, y, z])
    }

    pub fn int(x: i64, y: i64, z: i64) -> Self {
        PointC3::new(GR::from_int(x), GR::from_int(y), GR::from_int(z))
    }

    pub fn x(&self) -> &GR {
        &self.0[0]
    }

    pub fn y(&self) -> &GR {
        &self.0[1]
    }

    pub fn z(&self) -> &GR {
        &self.0[2]
    }
}

impl fmt::Debug for PointC3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

/// A complex line `{base + t·dir}` in canonical form: the first nonzero
/// coordinate of `dir` is 1, and `base` has a 0 in that coordinate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineC3 {
    base: Vec3,
    dir: Vec3,
}

impl LineC3 {
    /// Canonical line through `point` with direction `dir`.
    pub fn new(point: &Vec3, dir: &Vec3) -> Result<Self> {
        let (k, dir) = normalize_leading(dir).ok_or_else(|| Error::Degenerate("zero direction".into()))?;
        let base = sub3(point, &scale3(&dir, &point[k]));
        Ok(LineC3 { base, dir })
    }

    pub fn through(p: &PointC3, q: &PointC3) -> Result<Self> {
        if p == q {
            return Err(Error::Degenerate("coincident points".into()));
        }
        LineC3::new(&p.0, &sub3(&q.0, &p.0))
    }

    pub fn base(&self) -> &Vec3 {
        &self.base
    }

    pub fn dir(&self) -> &Vec3 {
        &self.dir
    }

    /// Index of the first nonzero direction coordinate.
    pub fn lead(&self) -> usize {
        self.dir.iter().position(|c| !c.is_zero()).expect("canonical direction")
    }

    /// Not parallel to the `z₂z₃` plane.
    pub fn is_standard(&self) -> bool {
        !self.dir[0].is_zero()
    }

    pub fn point_at(&self, t: &GR) -> PointC3 {
        PointC3(add3(&self.base, &scale3(&self.dir, t)))
    }

    pub fn contains(&self, p: &PointC3) -> bool {
        let v = sub3(&p.0, &self.base);
        let t = &v[self.lead()];
        is_zero3(&sub3(&v, &scale3(&self.dir, t)))
    }

    pub fn is_parallel(&self, other: &LineC3) -> bool {
        self.dir == other.dir
    }
}

impl fmt::Debug for LineC3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Line[({}, {}, {}) + t({}, {}, {})]",
            self.base[0], self.base[1], self.base[2], self.dir[0], self.dir[1], self.dir[2]
        )
    }
}

#[derive(Serialize, Deserialize)]
struct LineRepr {
    base: Vec3,
    dir: Vec3,
}

impl Serialize for LineC3 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        LineRepr { base: self.base.clone(), dir: self.dir.clone() }.serialize(serializer)
    }
}

/// Lines are canonicalized on load.
impl<'de> Deserialize<'de> for LineC3 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let r = LineRepr::deserialize(deserializer)?;
        LineC3::new(&r.base, &r.dir).map_err(serde::de::Error::custom)
    }
}

/// Free-function form of [`LineC3::new`] / [`LineC3::through`].
pub fn canonical_line(p: &PointC3, q: &PointC3) -> Result<LineC3> {
    LineC3::through(p, q)
}

/// The plane `α·x + β·y + γ·z = δ`, scaled so that the first nonzero of
/// `(α, β, γ)` is 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlaneC3 {
    pub normal: Vec3,
    pub offset: GR,
}

impl PlaneC3 {
    pub fn new(normal: &Vec3, offset: &GR) -> Result<Self> {
        let k = normal
            .iter()
            .position(|c| !c.is_zero())
            .ok_or_else(|| Error::Degenerate("zero plane normal".into()))?;
        let inv = normal[k].inv().expect("nonzero");
        Ok(PlaneC3 { normal: scale3(normal, &inv), offset: offset * &inv })
    }

    pub fn through_point(normal: &Vec3, p: &Vec3) -> Result<Self> {
        PlaneC3::new(normal, &dot(normal, p))
    }

    pub fn eval(&self, p: &Vec3) -> GR {
        &dot(&self.normal, p) - &self.offset
    }

    pub fn contains_point(&self, p: &PointC3) -> bool {
        self.eval(&p.0).is_zero()
    }

    pub fn contains_line(&self, l: &LineC3) -> bool {
        dot(&self.normal, &l.dir).is_zero() && self.eval(&l.base).is_zero()
    }

    /// If this is a bad plane `y − s·x + k = 0` with `s = ±i`, returns the
    /// slope sign and `k`.
    pub fn bad_plane(&self) -> Option<BadPlane> {
        let [a, b, c] = &self.normal;
        if !c.is_zero() || b.is_zero() {
            return None;
        }
        let slope = -&(a / b);
        let sign = if slope == GR::i() {
            Sign::Plus
        } else if slope == -GR::i() {
            Sign::Minus
        } else {
            return None;
        };
        Some(BadPlane { sign, k: -&(&self.offset / b) })
    }

    pub fn is_bad(&self) -> bool {
        self.bad_plane().is_some()
    }
}

impl fmt::Debug for PlaneC3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Plane[({})x + ({})y + ({})z = {}]",
            self.normal[0], self.normal[1], self.normal[2], self.offset
        )
    }
}

/// A bad plane `Z(y − s·x + k)` with slope `s = ±i` given by `sign`.
/// It is the plane `y = s·x − k`, the lift of the isotropic line with the
/// same equation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BadPlane {
    pub sign: Sign,
    pub k: GR,
}

impl BadPlane {
    /// The `c` in `y = s·x + c`.
    pub fn isotropic_offset(&self) -> GR {
        -&self.k
    }
}

pub fn is_bad_plane(plane: &PlaneC3) -> Option<BadPlane> {
    plane.bad_plane()
}

/// The bad plane `y = s·x + c` for slope sign `sign`.
pub fn bad_plane_for(sign: Sign, c: &GR) -> PlaneC3 {
    PlaneC3::new(&[-sign.slope(), GR::one(), GR::zero()], c).expect("nonzero normal")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinePairRelation {
    Equal,
    Intersecting { point: PointC3, plane: PlaneC3 },
    Parallel { plane: PlaneC3 },
    Skew,
}

impl LinePairRelation {
    pub fn is_coplanar(&self) -> bool {
        !matches!(self, LinePairRelation::Skew)
    }

    /// The unique plane spanned by two distinct coplanar lines.
    pub fn plane(&self) -> Option<&PlaneC3> {
        match self {
            LinePairRelation::Intersecting { plane, .. } | LinePairRelation::Parallel { plane } => Some(plane),
            _ => None,
        }
    }

    pub fn meets(&self) -> bool {
        matches!(self, LinePairRelation::Equal | LinePairRelation::Intersecting { .. })
    }
}

pub fn line_pair_relation(l1: &LineC3, l2: &LineC3) -> LinePairRelation {
    if l1 == l2 {
        return LinePairRelation::Equal;
    }
    let offset = sub3(&l2.base, &l1.base);
    if l1.is_parallel(l2) {
        let normal = cross(&l1.dir, &offset);
        let plane = PlaneC3::through_point(&normal, &l1.base).expect("distinct parallel lines span a plane");
        return LinePairRelation::Parallel { plane };
    }
    let normal = cross(&l1.dir, &l2.dir);
    if !dot(&normal, &offset).is_zero() {
        return LinePairRelation::Skew;
    }
    // Solve base₁ + s·dir₁ = base₂ + t·dir₂ on a coordinate pair with a
    // nonzero 2×2 minor; the normal's components are exactly those minors.
    let (i, j) = match normal.iter().position(|c| !c.is_zero()).expect("non-parallel") {
        0 => (1, 2),
        1 => (2, 0),
        _ => (0, 1),
    };
    let (d1, d2) = (&l1.dir, &l2.dir);
    let det = &(&d1[i] * &d2[j]) - &(&d1[j] * &d2[i]);
    // s·d1 − t·d2 = offset  ⇒  s = (offset_i·d2_j − offset_j·d2_i) / det
    let s = &(&(&offset[i] * &d2[j]) - &(&offset[j] * &d2[i])) / &det;
    let point = l1.point_at(&s);
    let plane = PlaneC3::through_point(&normal, &point.0).expect("nonzero normal");
    LinePairRelation::Intersecting { point, plane }
}

/// A line reduced modulo the screening prime of [`modp`].
#[derive(Clone, Copy, Debug)]
pub struct ReducedLine {
    base: [u64; 3],
    dir: [u64; 3],
}

impl ReducedLine {
    /// `None` when a coordinate has a denominator divisible by the prime.
    pub fn new(l: &LineC3) -> Option<Self> {
        let r = |v: &Vec3| -> Option<[u64; 3]> { Some([modp::from_gr(&v[0])?, modp::from_gr(&v[1])?, modp::from_gr(&v[2])?]) };
        Some(ReducedLine { base: r(&l.base)?, dir: r(&l.dir)? })
    }

    /// True only for skew lines. Reduction maps zero to zero, so a nonzero
    /// residue of `dir₁ × dir₂` and of the coplanarity determinant certifies
    /// both are nonzero; `false` means "undecided".
    pub fn certainly_skew(&self, other: &ReducedLine) -> bool {
        let (a, b) = (&self.dir, &other.dir);
        let n = [
            modp::sub(modp::mul(a[1], b[2]), modp::mul(a[2], b[1])),
            modp::sub(modp::mul(a[2], b[0]), modp::mul(a[0], b[2])),
            modp::sub(modp::mul(a[0], b[1]), modp::mul(a[1], b[0])),
        ];
        if n == [0, 0, 0] {
            return false;
        }
        let det = (0..3).fold(0, |acc, k| modp::add(acc, modp::mul(n[k], modp::sub(other.base[k], self.base[k]))));
        det != 0
    }
}

impl ReducedLine {
    /// False only when `p` is certainly off the line.
    pub fn may_contain(&self, p: &[u64; 3]) -> bool {
        let v: [u64; 3] = std::array::from_fn(|k| modp::sub(p[k], self.base[k]));
        (0..3).all(|a| (a + 1..3).all(|b| modp::mul(v[a], self.dir[b]) == modp::mul(v[b], self.dir[a])))
    }
}

pub fn reduce_point(p: &PointC3) -> Option<[u64; 3]> {
    Some([modp::from_gr(&p.0[0])?, modp::from_gr(&p.0[1])?, modp::from_gr(&p.0[2])?])
}

pub fn reduce_lines(lines: &[LineC3]) -> Vec<Option<ReducedLine>> {
    lines.iter().map(ReducedLine::new).collect()
}

/// [`line_pair_relation`] with a fast exit for pairs certified skew.
pub fn screened_relation(l1: &LineC3, r1: Option<&ReducedLine>, l2: &LineC3, r2: Option<&ReducedLine>) -> LinePairRelation {
    match (r1, r2) {
        (Some(a), Some(b)) if a.certainly_skew(b) => LinePairRelation::Skew,
        _ => line_pair_relation(l1, l2),
    }
}

/// Two lines share at least one point.
pub fn lines_meet(l1: &LineC3, l2: &LineC3) -> bool {
    line_pair_relation(l1, l2).meets()
}

/// Exponents of the quadric monomials in coefficient order.
pub const QUADRIC_MONOMIALS: [[u32; 3]; 10] = [
    [0, 0, 0],
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [2, 0, 0],
    [1, 1, 0],
    [1, 0, 1],
    [0, 2, 0],
    [0, 1, 1],
    [0, 0, 2],
];

/// A surface of degree at most two, `Σ c_m · m(x, y, z) = 0`, over the
/// monomials `1, x, y, z, x², xy, xz, y², yz, z²`, scaled so that the first
/// nonzero coefficient is 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadricC3 {
    pub coeffs: [GR; 10],
}

impl QuadricC3 {
    pub fn new(coeffs: &[GR]) -> Result<Self> {
        if coeffs.len() != 10 {
            return Err(Error::Dimension { expected: 10, got: coeffs.len() });
        }
        let k = coeffs
            .iter()
            .position(|c| !c.is_zero())
            .ok_or_else(|| Error::Degenerate("zero quadric".into()))?;
        let inv = coeffs[k].inv().expect("nonzero");
        Ok(QuadricC3 { coeffs: std::array::from_fn(|m| &coeffs[m] * &inv) })
    }

    pub fn from_poly(f: &MultiPoly) -> Result<Self> {
        if f.nvars() != 3 {
            return Err(Error::Dimension { expected: 3, got: f.nvars() });
        }
        if f.degree() > 2 {
            return Err(Error::InvalidParams(format!("degree {} exceeds 2", f.degree())));
        }
        let coeffs: Vec<GR> = QUADRIC_MONOMIALS.iter().map(|e| f.coeff(e)).collect();
        QuadricC3::new(&coeffs)
    }

    pub fn to_poly(&self) -> MultiPoly {
        MultiPoly::from_terms(3, QUADRIC_MONOMIALS.iter().zip(&self.coeffs).map(|(e, c)| (e.to_vec(), c.clone())))
            .expect("arity 3")
    }

    pub fn eval(&self, p: &Vec3) -> GR {
        QUADRIC_MONOMIALS
            .iter()
            .zip(&self.coeffs)
            .map(|(e, c)| {
                (0..3).fold(c.clone(), |acc, v| &acc * &p[v].pow(e[v]))
            })
            .sum()
    }

    /// Coefficients `(c₀, c₁, c₂)` of `t ↦ f(base + t·dir)`.
    pub fn restriction(&self, line: &LineC3) -> [GR; 3] {
        let rows = restriction_rows(line);
        std::array::from_fn(|k| rows[k].iter().zip(&self.coeffs).map(|(a, b)| a * b).sum())
    }

    pub fn contains_line(&self, line: &LineC3) -> bool {
        self.restriction(line).iter().all(GR::is_zero)
    }

    /// Symmetric 4×4 matrix of the homogenized form in `(x, y, z, w)`.
    pub fn homogeneous_matrix(&self) -> Matrix {
        let c = &self.coeffs;
        let half = GR::new(crate::algebra::Rational::new(1, 2), crate::algebra::Rational::zero());
        let h = |k: usize| &c[k] * &half;
        let rows = vec![
            vec![c[4].clone(), h(5), h(6), h(1)],
            vec![h(5), c[7].clone(), h(8), h(2)],
            vec![h(6), h(8), c[9].clone(), h(3)],
            vec![h(1), h(2), h(3), c[0].clone()],
        ];
        Matrix::from_rows(4, rows).expect("4x4")
    }

    pub fn rank(&self) -> usize {
        self.homogeneous_matrix().rank()
    }

    /// Irreducible degree-two surface: the homogenized form has rank ≥ 3.
    /// Planes, plane pairs and double planes all have rank ≤ 2.
    pub fn is_irreducible(&self) -> bool {
        self.rank() >= 3
    }
}

impl fmt::Debug for QuadricC3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Quadric[{}]", self.to_poly())
    }
}

/// Row `k` holds the coefficient of `t^k` contributed by each monomial when
/// restricted to `base + t·dir`.
fn restriction_rows(line: &LineC3) -> [[GR; 10]; 3] {
    // per coordinate: powers 0..=2 of (b + t·d) as univariate coefficient lists
    let lin: Vec<[Vec<GR>; 3]> = (0..3)
        .map(|v| {
            let b = &line.base[v];
            let d = &line.dir[v];
            [
                vec![GR::one()],
                vec![b.clone(), d.clone()],
                vec![b.square(), &GR::from_int(2) * &(b * d), d.square()],
            ]
        })
        .collect();
    let mut rows: [[GR; 10]; 3] = Default::default();
    for (m, e) in QUADRIC_MONOMIALS.iter().enumerate() {
        let mut poly = vec![GR::one()];
        for v in 0..3 {
            poly = mul_univariate(&poly, &lin[v][e[v] as usize]);
        }
        for (k, c) in poly.into_iter().enumerate() {
            rows[k][m] = c;
        }
    }
    rows
}

fn mul_univariate(a: &[GR], b: &[GR]) -> Vec<GR> {
    let mut out = vec![GR::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

pub fn line_in_quadric(line: &LineC3, q: &QuadricC3) -> bool {
    q.contains_line(line)
}

/// The linear conditions on the 10 quadric coefficients for containing
/// every given line, three rows per line.
pub fn quadric_condition_matrix(lines: &[LineC3]) -> Matrix {
    let rows = lines.iter().flat_map(|l| restriction_rows(l).into_iter().map(|r| r.to_vec())).collect();
    Matrix::from_rows(10, rows).expect("10 columns")
}

/// Basis of the quadrics vanishing on all given lines (at most three).
pub fn fit_quadrics(lines: &[LineC3]) -> Result<Vec<QuadricC3>> {
    if lines.len() > 3 {
        return Err(Error::InvalidParams(format!("fit_quadrics takes at most 3 lines, got {}", lines.len())));
    }
    quadric_condition_matrix(lines)
        .nullspace()
        .into_iter()
        .map(|v| QuadricC3::new(&v))
        .collect()
}
