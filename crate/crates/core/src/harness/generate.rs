//! Seeded dataset generators.
//!
//! Every generator draws from one `ChaCha8Rng` seeded with
//! `seed_from_u64(seed)`, consuming values in the order documented on each
//! kind, so a dataset is replayable from its seed alone.

use std::collections::BTreeSet;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Rational, GR};
use crate::complex_plane::{reduction_point_sets, PointC2, Sign};
use crate::error::{Error, Result};
use crate::lines::{LineC3, PlaneC3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductVariant {
    Plus,
    Minus,
    Product,
}

impl FromStr for ProductVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" => Ok(ProductVariant::Plus),
            "minus" => Ok(ProductVariant::Minus),
            "product" => Ok(ProductVariant::Product),
            _ => Err(Error::Parse(format!("unknown product variant {s:?}"))),
        }
    }
}

/// How the base set `A` of a product construction is chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetSpec {
    Explicit(Vec<GR>),
    /// `size` distinct integers drawn uniformly from `[-bound, bound]`.
    Random { size: usize, bound: u32 },
}

impl SetSpec {
    pub fn materialize(&self, rng: &mut ChaCha8Rng) -> Result<BTreeSet<GR>> {
        match self {
            SetSpec::Explicit(v) => Ok(v.iter().cloned().collect()),
            SetSpec::Random { size, bound } => {
                if *size > 2 * *bound as usize + 1 {
                    return Err(Error::InvalidParams(format!("cannot draw {size} distinct integers within ±{bound}")));
                }
                let b = *bound as i64;
                let mut set = BTreeSet::new();
                while set.len() < *size {
                    set.insert(GR::from_int(rng.gen_range(-b..=b)));
                }
                Ok(set)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Generator {
    /// `{0, …, k−1}²`
    Grid { k: usize },
    /// `(t, s·t + k)` for `t = 0, …, m−1`
    Isotropic { m: usize, sign: Sign, k: GR },
    Product { set: SetSpec, variant: ProductVariant },
    /// Points with coordinates `p/q + (p′/q′)i`, `|p| ≤ bound`,
    /// `1 ≤ q ≤ bound`, drawn `x.re, x.im, y.re, y.im` with numerator
    /// before denominator, until `n` distinct points are found.
    Random { n: usize, bound: u32 },
    /// `planes` random planes holding `per` lines each, plus `extra` lines
    /// in general position.
    PlantedPlanes { planes: usize, per: usize, extra: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dataset {
    Points(Vec<PointC2>),
    Lines(Vec<LineC3>),
}

const MAX_DRAWS_PER_ITEM: usize = 1000;

fn random_rational(rng: &mut ChaCha8Rng, bound: u32) -> Rational {
    let b = bound as i64;
    let num = rng.gen_range(-b..=b);
    let den = rng.gen_range(1..=b);
    Rational::new(num, den)
}

fn random_gr(rng: &mut ChaCha8Rng, bound: u32) -> GR {
    let re = random_rational(rng, bound);
    let im = random_rational(rng, bound);
    GR::new(re, im)
}

fn random_int(rng: &mut ChaCha8Rng, bound: i64) -> GR {
    GR::from_int(rng.gen_range(-bound..=bound))
}

pub fn generate(generator: &Generator, seed: u64) -> Result<Dataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match generator {
        Generator::Grid { k } => {
            let k = *k as i64;
            Ok(Dataset::Points((0..k).flat_map(|x| (0..k).map(move |y| PointC2::int(x, y))).collect()))
        }
        Generator::Isotropic { m, sign, k } => {
            let s = sign.slope();
            Ok(Dataset::Points(
                (0..*m as i64)
                    .map(|t| {
                        let t = GR::from_int(t);
                        let y = &(&s * &t) + k;
                        PointC2::new(t, y)
                    })
                    .collect(),
            ))
        }
        Generator::Product { set, variant } => {
            let a = set.materialize(&mut rng)?;
            let sets = reduction_point_sets(&a);
            let mut pts = match variant {
                ProductVariant::Plus => sets.plus,
                ProductVariant::Minus => sets.minus,
                ProductVariant::Product => sets.product,
            };
            pts.sort();
            pts.dedup();
            Ok(Dataset::Points(pts))
        }
        Generator::Random { n, bound } => {
            if *bound == 0 {
                return Err(Error::InvalidParams("random bound must be positive".into()));
            }
            let mut seen = BTreeSet::new();
            let mut pts = Vec::with_capacity(*n);
            let mut draws = 0;
            while pts.len() < *n {
                draws += 1;
                if draws > MAX_DRAWS_PER_ITEM * (*n + 1) {
                    return Err(Error::InvalidParams(format!("could not find {n} distinct points with bound {bound}")));
                }
                let x = random_gr(&mut rng, *bound);
                let y = random_gr(&mut rng, *bound);
                let p = PointC2::new(x, y);
                if seen.insert(p.clone()) {
                    pts.push(p);
                }
            }
            Ok(Dataset::Points(pts))
        }
        Generator::PlantedPlanes { planes, per, extra } => planted_planes(&mut rng, *planes, *per, *extra).map(Dataset::Lines),
    }
}

const PLANTED_BOUND: i64 = 1000;

/// Plane `j` is `z = α x + β y + γ` with integer coefficients; its lines
/// pass through `(u, v, α u + β v + γ)` with direction
/// `(p, q, α p + β q)`. Generic lines have independent random integer base
/// and direction. Lines lying in two planted planes, repeated lines, and
/// generic lines inside a planted plane are redrawn.
fn planted_planes(rng: &mut ChaCha8Rng, planes: usize, per: usize, extra: usize) -> Result<Vec<LineC3>> {
    if per < 2 && planes > 0 {
        return Err(Error::InvalidParams("planted planes need at least 2 lines each".into()));
    }
    let surfaces = draw_planes(rng, planes);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(planes * per + extra);
    let budget = MAX_DRAWS_PER_ITEM * (planes * per + extra + 1);
    let mut draws = 0;
    let mut draw_guard = || {
        draws += 1;
        if draws > budget {
            Err(Error::InvalidParams("planted-plane generation did not converge".into()))
        } else {
            Ok(())
        }
    };
    for (j, (_, [al, be, ga])) in surfaces.iter().enumerate() {
        let mut placed = 0;
        while placed < per {
            draw_guard()?;
            let (u, v) = (random_int(rng, PLANTED_BOUND), random_int(rng, PLANTED_BOUND));
            let (p, q) = (random_int(rng, PLANTED_BOUND), random_int(rng, PLANTED_BOUND));
            let w = &(&(al * &u) + &(be * &v)) + ga;
            let dz = &(al * &p) + &(be * &q);
            let Ok(line) = LineC3::new(&[u, v, w], &[p, q, dz]) else { continue };
            let elsewhere = surfaces.iter().enumerate().any(|(i, (s, _))| i != j && s.contains_line(&line));
            if !elsewhere && seen.insert(line.clone()) {
                out.push(line);
                placed += 1;
            }
        }
    }
    let mut placed = 0;
    while placed < extra {
        draw_guard()?;
        let base: [GR; 3] = std::array::from_fn(|_| random_int(rng, PLANTED_BOUND));
        let dir: [GR; 3] = std::array::from_fn(|_| random_int(rng, PLANTED_BOUND));
        let Ok(line) = LineC3::new(&base, &dir) else { continue };
        if !surfaces.iter().any(|(s, _)| s.contains_line(&line)) && seen.insert(line.clone()) {
            out.push(line);
            placed += 1;
        }
    }
    Ok(out)
}

/// The planes a planted-planes dataset was built on, recomputed from the
/// same seed.
pub fn planted_plane_list(seed: u64, planes: usize) -> Vec<PlaneC3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    draw_planes(&mut rng, planes).into_iter().map(|(p, _)| p).collect()
}

/// Distinct planes `z = α x + β y + γ`, with their `(α, β, γ)`.
fn draw_planes(rng: &mut ChaCha8Rng, planes: usize) -> Vec<(PlaneC3, [GR; 3])> {
    let mut out: Vec<(PlaneC3, [GR; 3])> = Vec::new();
    while out.len() < planes {
        let coef = [random_int(rng, 20), random_int(rng, 20), random_int(rng, 20)];
        let normal = [coef[0].clone(), coef[1].clone(), -GR::one()];
        let plane = PlaneC3::new(&normal, &-&coef[2]).expect("nonzero normal");
        if !out.iter().any(|(p, _)| p == &plane) {
            out.push((plane, coef));
        }
    }
    out
}
