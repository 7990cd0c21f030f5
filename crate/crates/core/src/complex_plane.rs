//! Point sets in ℂ², the squared complex distance and its statistics.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::GR;
use crate::error::{Error, Result};

/// Default size cap for the O(n⁴) quadruple enumeration.
pub const DEFAULT_QUADRUPLE_CAP: usize = 50;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct PointC2 {
    pub x: GR,
    pub y: GR,
}

impl PointC2 {
    pub fn new(x: GR, y: GR) -> Self {
        PointC2 { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        PointC2::new(GR::from_int(x), GR::from_int(y))
    }

    pub fn translate(&self, v: &PointC2) -> Self {
        PointC2::new(&self.x + &v.x, &self.y + &v.y)
    }

    pub fn sub(&self, other: &PointC2) -> PointC2 {
        PointC2::new(&self.x - &other.x, &self.y - &other.y)
    }
}

/// Squared complex distance `(p_x − q_x)² + (p_y − q_y)²`.
pub fn delta(p: &PointC2, q: &PointC2) -> GR {
    (&p.x - &q.x).square() + (&p.y - &q.y).square()
}

pub fn ensure_distinct(points: &[PointC2]) -> Result<()> {
    let mut seen = HashSet::with_capacity(points.len());
    for p in points {
        if !seen.insert(p) {
            return Err(Error::DuplicatePoint(format!("({}, {})", p.x, p.y)));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceStatistics {
    pub n: usize,
    /// Δ(P) over pairs of distinct points, zero included when it occurs.
    pub distinct_distances: BTreeSet<GR>,
    /// Nonzero distance ↦ number of ordered pairs realizing it.
    pub histogram: BTreeMap<GR, u64>,
    pub quadruple_count: u64,
    /// Ordered pairs of distinct points at distance zero.
    pub zero_pairs: u64,
}

impl DistanceStatistics {
    pub fn nonzero_distance_count(&self) -> usize {
        self.histogram.len()
    }

    /// `S = Σ N_j`, the number of ordered pairs at nonzero distance.
    pub fn nonzero_pairs(&self) -> u64 {
        self.histogram.values().sum()
    }
}

pub fn distance_statistics(points: &[PointC2]) -> Result<DistanceStatistics> {
    ensure_distinct(points)?;
    let n = points.len();
    // Unordered pairs, doubled on merge.
    let counts: HashMap<GR, u64> = (0..n)
        .into_par_iter()
        .fold(HashMap::new, |mut acc: HashMap<GR, u64>, i| {
            for j in i + 1..n {
                *acc.entry(delta(&points[i], &points[j])).or_default() += 2;
            }
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        });
    let mut histogram: BTreeMap<GR, u64> = counts.into_iter().collect();
    let zero_pairs = histogram.remove(&GR::zero()).unwrap_or(0);
    let mut distinct_distances: BTreeSet<GR> = histogram.keys().cloned().collect();
    if zero_pairs > 0 {
        distinct_distances.insert(GR::zero());
    }
    let quadruple_count = histogram.values().map(|&c| c * (c - 1)).sum();
    Ok(DistanceStatistics { n, distinct_distances, histogram, quadruple_count, zero_pairs })
}

/// Counts `Q(P)` by enumerating all ordered quadruples. Refuses inputs
/// larger than `cap` points.
pub fn quadruples_bruteforce(points: &[PointC2], cap: usize) -> Result<u64> {
    let n = points.len();
    if n > cap {
        return Err(Error::CapExceeded { what: "point count for quadruple enumeration", size: n, cap });
    }
    let d: Vec<Vec<GR>> = points.iter().map(|p| points.iter().map(|q| delta(p, q)).collect()).collect();
    let count = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut c = 0u64;
            for b in 0..n {
                let ab = &d[a][b];
                if ab.is_zero() {
                    continue;
                }
                for cc in 0..n {
                    for dd in 0..n {
                        if (a, b) != (cc, dd) && &d[cc][dd] == ab {
                            c += 1;
                        }
                    }
                }
            }
            c
        })
        .sum();
    Ok(count)
}

/// Slope of an isotropic line in ℂ².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    /// slope `+i`
    #[serde(rename = "+")]
    Plus,
    /// slope `−i`
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    /// The slope `±i`.
    pub fn slope(self) -> GR {
        match self {
            Sign::Plus => GR::i(),
            Sign::Minus => -GR::i(),
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            _ => Err(Error::Parse(format!("invalid sign {s:?}"))),
        }
    }
}

/// Key of the isotropic line of the given slope through `p`: the `k` with
/// `p_y = ±i·p_x + k`.
pub fn isotropic_key(p: &PointC2, sign: Sign) -> GR {
    &p.y - &(&sign.slope() * &p.x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsotropicClasses {
    pub plus_cover: usize,
    pub minus_cover: usize,
    /// key `k` of `y = ix + k` ↦ indices of the points on it
    pub plus_classes: BTreeMap<GR, Vec<usize>>,
    /// key `k` of `y = −ix + k` ↦ indices of the points on it
    pub minus_classes: BTreeMap<GR, Vec<usize>>,
}

pub fn isotropic_classify(points: &[PointC2]) -> IsotropicClasses {
    let group = |sign| {
        let mut classes: BTreeMap<GR, Vec<usize>> = BTreeMap::new();
        for (k, p) in points.iter().enumerate() {
            classes.entry(isotropic_key(p, sign)).or_default().push(k);
        }
        classes
    };
    let plus_classes = group(Sign::Plus);
    let minus_classes = group(Sign::Minus);
    let cover = |c: &BTreeMap<GR, Vec<usize>>| c.values().map(Vec::len).max().unwrap_or(0);
    IsotropicClasses {
        plus_cover: cover(&plus_classes),
        minus_cover: cover(&minus_classes),
        plus_classes,
        minus_classes,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthSets {
    /// `{(a₁−a₂)² + (a₃−a₄)²}`
    pub plus_set: BTreeSet<GR>,
    /// `{(a₁−a₂)² − (a₃−a₄)²}`
    pub minus_set: BTreeSet<GR>,
    /// `{(a₁−a₂)(a₃−a₄)}`
    pub product_set: BTreeSet<GR>,
}

/// Difference set `A − A`.
pub fn difference_set(a: &BTreeSet<GR>) -> BTreeSet<GR> {
    a.iter().flat_map(|x| a.iter().map(move |y| x - y)).collect()
}

pub fn growth_sets(a: &BTreeSet<GR>) -> GrowthSets {
    let diffs: Vec<GR> = difference_set(a).into_iter().collect();
    let squares: BTreeSet<GR> = diffs.iter().map(GR::square).collect();
    let mut plus_set = BTreeSet::new();
    let mut minus_set = BTreeSet::new();
    for s in &squares {
        for t in &squares {
            plus_set.insert(s + t);
            minus_set.insert(s - t);
        }
    }
    let product_set = diffs.iter().flat_map(|u| diffs.iter().map(move |v| u * v)).collect();
    GrowthSets { plus_set, minus_set, product_set }
}

/// The three point sets whose distance sets realize the growth sets:
/// `A×A`, `A×iA` and `{(a₁+a₂, i·a₁ − i·a₂)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionPointSets {
    pub plus: Vec<PointC2>,
    pub minus: Vec<PointC2>,
    pub product: Vec<PointC2>,
}

pub fn reduction_point_sets(a: &BTreeSet<GR>) -> ReductionPointSets {
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    let mut product = Vec::new();
    for x in a {
        for y in a {
            plus.push(PointC2::new(x.clone(), y.clone()));
            minus.push(PointC2::new(x.clone(), y.mul_i()));
            product.push(PointC2::new(x + y, (x - y).mul_i()));
        }
    }
    ReductionPointSets { plus, minus, product }
}

/// Whether each growth set is exactly the distance set of its point set:
/// `Δ(A×A) = plusSet`, `Δ(A×iA) = minusSet`, `Δ(third) = 4·productSet`,
/// with `0 = Δ(p, p)` counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionCheck {
    pub plus: bool,
    pub minus: bool,
    pub product: bool,
}

pub fn check_reductions(a: &BTreeSet<GR>) -> Result<ReductionCheck> {
    let g = growth_sets(a);
    let sets = reduction_point_sets(a);
    let dist = |pts: &[PointC2]| -> Result<BTreeSet<GR>> {
        let mut d = distance_statistics(pts)?.distinct_distances;
        d.insert(GR::zero());
        Ok(d)
    };
    let four = GR::from_int(4);
    let scaled: BTreeSet<GR> = g.product_set.iter().map(|u| &four * u).collect();
    Ok(ReductionCheck {
        plus: dist(&sets.plus)? == g.plus_set,
        minus: dist(&sets.minus)? == g.minus_set,
        product: dist(&sets.product)? == scaled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i64, i64, i64, i64)]) -> Vec<PointC2> {
        v.iter().map(|&(a, b, c, d)| PointC2::new(GR::int(a, b), GR::int(c, d))).collect()
    }

    fn unit_square() -> Vec<PointC2> {
        vec![PointC2::int(0, 0), PointC2::int(1, 0), PointC2::int(0, 1), PointC2::int(1, 1)]
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(&PointC2::int(0, 0), &PointC2::int(3, 4)), GR::from_int(25));
        let p = PointC2::new(GR::int(1, 2), GR::int(-3, 5));
        assert!(delta(&p, &p).is_zero());
        let iso = PointC2::new(GR::one(), GR::i());
        assert!(delta(&PointC2::int(0, 0), &iso).is_zero());
    }

    #[test]
    fn unit_square_statistics() {
        let s = distance_statistics(&unit_square()).unwrap();
        assert_eq!(s.histogram, BTreeMap::from([(GR::from_int(1), 8), (GR::from_int(2), 4)]));
        assert_eq!(s.quadruple_count, 68);
        assert_eq!(s.zero_pairs, 0);
        assert_eq!(quadruples_bruteforce(&unit_square(), DEFAULT_QUADRUPLE_CAP).unwrap(), 68);
    }

    #[test]
    fn isotropic_triple() {
        let p = pts(&[(0, 0, 0, 0), (1, 0, 0, 1), (2, 0, 0, 2)]);
        let s = distance_statistics(&p).unwrap();
        assert_eq!(s.distinct_distances, BTreeSet::from([GR::zero()]));
        assert_eq!(s.quadruple_count, 0);
        assert_eq!(s.zero_pairs, 6);
        assert_eq!(quadruples_bruteforce(&p, 50).unwrap(), 0);
    }

    #[test]
    fn two_points() {
        let p = vec![PointC2::int(0, 0), PointC2::int(1, 2)];
        assert_eq!(quadruples_bruteforce(&p, 50).unwrap(), 2);
        assert_eq!(distance_statistics(&p).unwrap().quadruple_count, 2);
    }

    #[test]
    fn duplicates_and_cap() {
        let p = vec![PointC2::int(0, 0), PointC2::int(0, 0)];
        assert!(matches!(distance_statistics(&p), Err(Error::DuplicatePoint(_))));
        let many: Vec<PointC2> = (0..6).map(|k| PointC2::int(k, 0)).collect();
        assert!(matches!(quadruples_bruteforce(&many, 5), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn isotropic_covers() {
        let p = pts(&[(0, 0, 0, 0), (1, 0, 0, 1), (2, 0, 0, 2), (1, 0, 0, 0)]);
        let c = isotropic_classify(&p);
        assert_eq!(c.plus_cover, 3);
        assert_eq!(c.plus_classes[&GR::zero()], vec![0, 1, 2]);
        let grid: Vec<PointC2> = (0..3).flat_map(|i| (0..3).map(move |j| PointC2::int(i, j))).collect();
        let g = isotropic_classify(&grid);
        assert_eq!((g.plus_cover, g.minus_cover), (1, 1));
        let single = isotropic_classify(&[PointC2::int(4, 4)]);
        assert_eq!((single.plus_cover, single.minus_cover), (1, 1));
    }

    #[test]
    fn growth_set_edge_cases() {
        let zero = growth_sets(&BTreeSet::from([GR::zero()]));
        let just_zero = BTreeSet::from([GR::zero()]);
        assert_eq!(zero.plus_set, just_zero);
        assert_eq!(zero.minus_set, just_zero);
        assert_eq!(zero.product_set, just_zero);
        let two = growth_sets(&BTreeSet::from([GR::zero(), GR::one()]));
        assert_eq!(two.plus_set, (0..3).map(GR::from_int).collect());
    }
}
