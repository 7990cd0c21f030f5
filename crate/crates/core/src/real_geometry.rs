//! The real picture of ℂ³ as ℝ⁶.
//!
//! A point `(z₁, z₂, z₃)` is identified with
//! `(Re z₁, Im z₁, Re z₂, Im z₂, Re z₃, Im z₃)`; everything below (the
//! operator `J`, the parametrization `φ`, the chart `G`) depends on this
//! order.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{Matrix, MultiPoly, Rational, GR};
use crate::error::{Error, Result};
use crate::lines::{line_pair_relation, LineC3, LinePairRelation, PointC3};

pub type RealPoint6 = [Rational; 6];

pub fn point_to_real(p: &PointC3) -> RealPoint6 {
    let [z1, z2, z3] = &p.0;
    [z1.re.clone(), z1.im.clone(), z2.re.clone(), z2.im.clone(), z3.re.clone(), z3.im.clone()]
}

pub fn real_to_point(p: &RealPoint6) -> PointC3 {
    PointC3::new(
        GR::new(p[0].clone(), p[1].clone()),
        GR::new(p[2].clone(), p[3].clone()),
        GR::new(p[4].clone(), p[5].clone()),
    )
}

/// Multiplication by `i`, as a map of ℝ⁶.
pub fn apply_j(v: &RealPoint6) -> RealPoint6 {
    [-&v[1], v[0].clone(), -&v[3], v[2].clone(), -&v[5], v[4].clone()]
}

fn dot6(a: &RealPoint6, b: &RealPoint6) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| &acc + &(x * y))
}

/// Real and imaginary parts of `(a, b, c, d)` in the normal form
/// `(0, a, b) + t(1, c, d)` of a standard line.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StandardLineCoords {
    pub a1: Rational,
    pub a2: Rational,
    pub b1: Rational,
    pub b2: Rational,
    pub c1: Rational,
    pub c2: Rational,
    pub d1: Rational,
    pub d2: Rational,
}

impl StandardLineCoords {
    pub fn to_array(&self) -> [Rational; 8] {
        [
            self.a1.clone(),
            self.a2.clone(),
            self.b1.clone(),
            self.b2.clone(),
            self.c1.clone(),
            self.c2.clone(),
            self.d1.clone(),
            self.d2.clone(),
        ]
    }

    pub fn from_array(v: [Rational; 8]) -> Self {
        let [a1, a2, b1, b2, c1, c2, d1, d2] = v;
        StandardLineCoords { a1, a2, b1, b2, c1, c2, d1, d2 }
    }
}

pub fn g_coords(line: &LineC3) -> Result<StandardLineCoords> {
    if !line.is_standard() {
        return Err(Error::NonStandardLine);
    }
    // Canonical form already has dir = (1, c, d) and base = (0, a, b).
    let (b, d) = (line.base(), line.dir());
    debug_assert!(b[0].is_zero() && d[0].is_one());
    Ok(StandardLineCoords {
        a1: b[1].re.clone(),
        a2: b[1].im.clone(),
        b1: b[2].re.clone(),
        b2: b[2].im.clone(),
        c1: d[1].re.clone(),
        c2: d[1].im.clone(),
        d1: d[2].re.clone(),
        d2: d[2].im.clone(),
    })
}

pub fn g_inverse(g: &StandardLineCoords) -> LineC3 {
    let base = [GR::zero(), GR::new(g.a1.clone(), g.a2.clone()), GR::new(g.b1.clone(), g.b2.clone())];
    let dir = [GR::one(), GR::new(g.c1.clone(), g.c2.clone()), GR::new(g.d1.clone(), g.d2.clone())];
    LineC3::new(&base, &dir).expect("nonzero direction")
}

/// The real image of `(0, a, b) + (s + it)(1, c, d)`.
pub fn phi(g: &StandardLineCoords, s: &Rational, t: &Rational) -> RealPoint6 {
    let lin = |base: &Rational, u: &Rational, v: &Rational| base + &(&(s * u) - &(t * v));
    let lin_im = |base: &Rational, u: &Rational, v: &Rational| base + &(&(s * u) + &(t * v));
    [
        s.clone(),
        t.clone(),
        lin(&g.a1, &g.c1, &g.c2),
        lin_im(&g.a2, &g.c2, &g.c1),
        lin(&g.b1, &g.d1, &g.d2),
        lin_im(&g.b2, &g.d2, &g.d1),
    ]
}

/// A real polynomial in the six coordinates of ℝ⁶.
///
/// JSON form: `[{"exponents": [6 ints], "coeff": "num/den"}, ...]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RealPoly6(MultiPoly);

#[derive(Serialize, Deserialize)]
struct RealTerm {
    exponents: Vec<u32>,
    coeff: Rational,
}

impl RealPoly6 {
    pub fn new(p: MultiPoly) -> Result<Self> {
        if p.nvars() != 6 {
            return Err(Error::Dimension { expected: 6, got: p.nvars() });
        }
        if p.terms().iter().any(|(_, c)| !c.is_real()) {
            return Err(Error::InvalidParams("real polynomial with non-real coefficient".into()));
        }
        Ok(RealPoly6(p))
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, Rational)>>(terms: I) -> Result<Self> {
        Self::new(MultiPoly::from_terms(6, terms.into_iter().map(|(e, c)| (e, GR::real(c))))?)
    }

    pub fn var(i: usize) -> Self {
        RealPoly6(MultiPoly::var(6, i))
    }

    pub fn constant(c: Rational) -> Self {
        RealPoly6(MultiPoly::constant(6, GR::real(c)))
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.degree()
    }

    pub fn eval(&self, p: &RealPoint6) -> Rational {
        let pt: Vec<GR> = p.iter().cloned().map(GR::real).collect();
        self.0.eval(&pt).expect("six variables").re
    }

    pub fn gradient_at(&self, p: &RealPoint6) -> RealPoint6 {
        let pt: Vec<GR> = p.iter().cloned().map(GR::real).collect();
        let grad = self.0.gradient();
        std::array::from_fn(|j| grad[j].eval(&pt).expect("six variables").re)
    }
}

impl Serialize for RealPoly6 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<RealTerm> = self
            .0
            .terms()
            .iter()
            .map(|(m, c)| RealTerm { exponents: m.0.clone(), coeff: c.re.clone() })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RealPoly6 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<RealTerm>::deserialize(d)?;
        RealPoly6::from_terms(terms.into_iter().map(|t| (t.exponents, t.coeff))).map_err(serde::de::Error::custom)
    }
}

/// `φ` as six polynomials in `(a₁, a₂, b₁, b₂, c₁, c₂, d₁, d₂, s, t)`.
fn phi_symbolic() -> Vec<MultiPoly> {
    let v = |i| MultiPoly::var(10, i);
    let (s, t) = (v(8), v(9));
    let comb = |base: usize, u: usize, w: usize, sign: i64| {
        let tw = t.mul(&v(w)).unwrap().scale(&GR::from_int(sign));
        v(base).add(&s.mul(&v(u)).unwrap()).unwrap().add(&tw).unwrap()
    };
    vec![s.clone(), t.clone(), comb(0, 4, 5, -1), comb(1, 5, 4, 1), comb(2, 6, 7, -1), comb(3, 7, 6, 1)]
}

/// Polynomials in the eight chart coordinates whose common zeros are the
/// standard lines contained in `Z(f)`: the `(s, t)`-coefficients of `f∘φ`.
pub fn line_membership_conditions(f: &RealPoly6) -> Result<Vec<MultiPoly>> {
    if f.0.is_zero() {
        return Err(Error::Degenerate("zero polynomial vanishes everywhere".into()));
    }
    let composed = f.0.substitute(&phi_symbolic())?;
    Ok(composed.split_outer(2).into_values().collect())
}

pub fn conditions_hold(conditions: &[MultiPoly], g: &StandardLineCoords) -> bool {
    let pt: Vec<GR> = g.to_array().into_iter().map(GR::real).collect();
    conditions.iter().all(|q| q.eval(&pt).expect("eight variables").is_zero())
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ComplexTangentFrame {
    pub gradient: RealPoint6,
    pub j_gradient: RealPoint6,
    /// Basis of `{v : v·∇f = 0, v·J∇f = 0}`.
    pub v_basis: Vec<RealPoint6>,
    /// `E_j = e_j|∇f|² − (e_j·∇f)∇f − (e_j·J∇f)J∇f`
    pub e_vectors: Vec<RealPoint6>,
}

pub fn complex_tangent_frame(f: &RealPoly6, p: &RealPoint6) -> Result<ComplexTangentFrame> {
    let g = f.gradient_at(p);
    if g.iter().all(Rational::is_zero) {
        return Err(Error::SingularPoint);
    }
    let jg = apply_j(&g);
    let rows = vec![g.iter().cloned().map(GR::real).collect(), jg.iter().cloned().map(GR::real).collect()];
    let v_basis = Matrix::from_rows(6, rows)?
        .nullspace()
        .into_iter()
        .map(|v| std::array::from_fn(|k| v[k].re.clone()))
        .collect();
    let norm = dot6(&g, &g);
    let e_vectors = (0..6)
        .map(|j| {
            let (pg, pjg) = (&g[j], &jg[j]);
            std::array::from_fn(|k| {
                let ej = if k == j { norm.clone() } else { Rational::zero() };
                &(&ej - &(pg * &g[k])) - &(pjg * &jg[k])
            })
        })
        .collect();
    Ok(ComplexTangentFrame { gradient: g, j_gradient: jg, v_basis, e_vectors })
}

/// `W_p(v) = f(p + Σ v_j E_j)` as a polynomial in six variables.
pub fn w_polynomial(f: &RealPoly6, p: &RealPoint6) -> Result<MultiPoly> {
    let frame = complex_tangent_frame(f, p)?;
    let mut map = Matrix::zeros(6, 6);
    for (j, e) in frame.e_vectors.iter().enumerate() {
        for r in 0..6 {
            map[(r, j)] = GR::real(e[r].clone());
        }
    }
    let offset: Vec<GR> = p.iter().cloned().map(GR::real).collect();
    Ok(f.0.affine_compose(&map, &offset)?)
}

/// Whether the complex plane through `p` tangent to `Z(f)` lies in `Z(f)`.
pub fn ruled_at_point(f: &RealPoly6, p: &RealPoint6) -> Result<bool> {
    if !f.eval(p).is_zero() {
        return Err(Error::InvalidParams("point is not on the hypersurface".into()));
    }
    Ok(w_polynomial(f, p)?.is_zero())
}

/// The standard line through distinct `p` and `q`, found by solving in
/// chart coordinates: through `p` means `a = p₂ − p₁c`, `b = p₃ − p₁d`.
pub fn common_standard_line(p: &PointC3, q: &PointC3) -> Result<Option<StandardLineCoords>> {
    if p == q {
        return Err(Error::Degenerate("coincident points".into()));
    }
    let [p1, p2, p3] = &p.0;
    let [q1, q2, q3] = &q.0;
    let dz = q1 - p1;
    if dz.is_zero() {
        // (q₁ − p₁)c = q₂ − p₂ forces q₂ = p₂ and likewise q₃ = p₃.
        return Ok(None);
    }
    let c = &(q2 - p2) / &dz;
    let d = &(q3 - p3) / &dz;
    let a = p2 - &(p1 * &c);
    let b = p3 - &(p1 * &d);
    Ok(Some(StandardLineCoords {
        a1: a.re,
        a2: a.im,
        b1: b.re,
        b2: b.im,
        c1: c.re,
        c2: c.im,
        d1: d.re,
        d2: d.im,
    }))
}

/// Membership of `m` in the hairbrush of `l`: `m` is standard and meets `l`.
pub fn in_hairbrush(l: &LineC3, m: &LineC3) -> bool {
    m.is_standard() && line_pair_relation(l, m).meets()
}

/// Outcome of the three hairbrush implications for a third line `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HairbrushCheck {
    pub through_point: bool,
    pub in_plane: bool,
    pub meets_both: bool,
    /// `p ∈ m ⟹ m meets both`
    pub a: bool,
    /// `m ⊂ Π`, parallel to neither ⟹ `m` meets both
    pub b: bool,
    /// `m` meets both ⟹ `p ∈ m` or `m ⊂ Π`
    pub c: bool,
}

impl HairbrushCheck {
    pub fn holds(&self) -> bool {
        self.a && self.b && self.c
    }
}

/// Checks the hairbrush intersection law for lines `l`, `l2` meeting at a
/// single point `p` and spanning the plane `Π`.
pub fn hairbrush_check(l: &LineC3, l2: &LineC3, m: &LineC3) -> Result<HairbrushCheck> {
    let LinePairRelation::Intersecting { point, plane } = line_pair_relation(l, l2) else {
        return Err(Error::InvalidParams("hairbrush law needs two lines meeting in one point".into()));
    };
    let through_point = m.contains(&point);
    let in_plane = plane.contains_line(m);
    let meets_both = line_pair_relation(l, m).meets() && line_pair_relation(l2, m).meets();
    let parallel_to_either = (m != l && m.is_parallel(l)) || (m != l2 && m.is_parallel(l2));
    Ok(HairbrushCheck {
        through_point,
        in_plane,
        meets_both,
        a: !through_point || meets_both,
        b: !(in_plane && !parallel_to_either) || meets_both,
        c: !meets_both || through_point || in_plane,
    })
}
