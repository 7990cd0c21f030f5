//! Rich points and rich surfaces of a finite line set.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{modp, Matrix, GR};
use crate::error::{Error, Result};
use crate::lines::{
    quadric_condition_matrix, reduce_lines, reduce_point, screened_relation, LineC3, LinePairRelation, PlaneC3, PointC3,
    QuadricC3, ReducedLine,
};

/// Default budget of line triples examined during quadric discovery.
pub const DEFAULT_TRIPLE_CAP: usize = 2_000_000;

fn ensure_distinct_lines(lines: &[LineC3]) -> Result<()> {
    let mut seen = HashSet::with_capacity(lines.len());
    for l in lines {
        if !seen.insert(l) {
            return Err(Error::Degenerate(format!("duplicate line {l:?}")));
        }
    }
    Ok(())
}

/// Every point where two or more lines meet, with the lines through it.
#[derive(Clone, Debug, Serialize)]
pub struct RichPointReport {
    /// richness `r` ↦ points incident to exactly `r` lines
    pub points_by_richness: BTreeMap<usize, Vec<PointC3>>,
    pub max_richness: usize,
    #[serde(skip)]
    pub incidences: BTreeMap<PointC3, Vec<usize>>,
}

impl RichPointReport {
    /// `P_r`: points on at least `r` lines.
    pub fn rich(&self, r: usize) -> Vec<&PointC3> {
        self.points_by_richness.range(r.max(2)..).flat_map(|(_, v)| v.iter()).collect()
    }

    pub fn rich_count(&self, r: usize) -> usize {
        self.points_by_richness.range(r.max(2)..).map(|(_, v)| v.len()).sum()
    }

    pub fn richness(&self, p: &PointC3) -> usize {
        self.incidences.get(p).map_or(0, Vec::len)
    }
}

pub fn rich_points(lines: &[LineC3]) -> Result<RichPointReport> {
    ensure_distinct_lines(lines)?;
    let m = lines.len();
    let red = reduce_lines(lines);
    let found: HashMap<PointC3, BTreeSet<usize>> = (0..m)
        .into_par_iter()
        .fold(HashMap::new, |mut acc: HashMap<PointC3, BTreeSet<usize>>, i| {
            for j in i + 1..m {
                if let LinePairRelation::Intersecting { point, .. } = screened_relation(&lines[i], red[i].as_ref(), &lines[j], red[j].as_ref()) {
                    let e = acc.entry(point).or_default();
                    e.insert(i);
                    e.insert(j);
                }
            }
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                a.entry(k).or_default().extend(v);
            }
            a
        });
    let incidences: BTreeMap<PointC3, Vec<usize>> =
        found.into_iter().map(|(p, s)| (p, s.into_iter().collect())).collect();
    let mut points_by_richness: BTreeMap<usize, Vec<PointC3>> = BTreeMap::new();
    for (p, ls) in &incidences {
        points_by_richness.entry(ls.len()).or_default().push(p.clone());
    }
    let max_richness = points_by_richness.keys().next_back().copied().unwrap_or(0);
    Ok(RichPointReport { points_by_richness, max_richness, incidences })
}

/// Number of lines through `p`, by direct incidence test.
pub fn incidence_count(lines: &[LineC3], p: &PointC3) -> usize {
    lines.iter().filter(|l| l.contains(p)).count()
}

/// [`incidence_count`] with lines pre-reduced by [`reduce_lines`]; pairs
/// whose residues already differ skip the exact test.
pub fn incidence_count_screened(lines: &[LineC3], reduced: &[Option<ReducedLine>], p: &PointC3) -> usize {
    let rp = reduce_point(p);
    lines
        .iter()
        .zip(reduced)
        .filter(|(l, r)| match (r, &rp) {
            (Some(r), Some(q)) if !r.may_contain(q) => false,
            _ => l.contains(p),
        })
        .count()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceEntry<S> {
    pub surface: S,
    pub lines: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RichSurfaceReport {
    pub threshold: usize,
    pub planes: Vec<SurfaceEntry<PlaneC3>>,
    pub quadrics: Vec<SurfaceEntry<QuadricC3>>,
    pub triples_examined: usize,
    /// The triple budget ran out before every triple was examined.
    pub truncated: bool,
}

/// Planes containing at least `threshold` lines, found through the planes
/// spanned by coplanar pairs.
pub fn rich_planes(lines: &[LineC3], threshold: usize) -> Vec<SurfaceEntry<PlaneC3>> {
    let m = lines.len();
    let red = reduce_lines(lines);
    let spans: HashMap<PlaneC3, BTreeSet<usize>> = (0..m)
        .into_par_iter()
        .fold(HashMap::new, |mut acc: HashMap<PlaneC3, BTreeSet<usize>>, i| {
            for j in i + 1..m {
                if let Some(plane) = screened_relation(&lines[i], red[i].as_ref(), &lines[j], red[j].as_ref()).plane() {
                    let e = acc.entry(plane.clone()).or_default();
                    e.insert(i);
                    e.insert(j);
                }
            }
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                a.entry(k).or_default().extend(v);
            }
            a
        });
    let mut planes: Vec<SurfaceEntry<PlaneC3>> = spans
        .into_iter()
        .filter(|(_, s)| s.len() >= threshold)
        .map(|(surface, s)| SurfaceEntry { surface, lines: s.into_iter().collect() })
        .collect();
    planes.sort_by(|a, b| a.surface.cmp(&b.surface));
    planes
}

/// Skewness table: `skew[i][j]` iff lines `i` and `j` neither meet nor are
/// parallel.
fn skew_table(lines: &[LineC3]) -> Vec<Vec<bool>> {
    let m = lines.len();
    let red = reduce_lines(lines);
    let upper: Vec<Vec<bool>> = (0..m)
        .into_par_iter()
        .map(|i| {
            (i + 1..m)
                .map(|j| {
                    matches!(screened_relation(&lines[i], red[i].as_ref(), &lines[j], red[j].as_ref()), LinePairRelation::Skew)
                })
                .collect()
        })
        .collect();
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| match i.cmp(&j) {
                    std::cmp::Ordering::Less => upper[i][j - i - 1],
                    std::cmp::Ordering::Greater => upper[j][i - j - 1],
                    std::cmp::Ordering::Equal => false,
                })
                .collect()
        })
        .collect()
}

/// Irreducible quadrics containing at least `threshold` lines.
///
/// A triple has a one-dimensional space of quadrics through it only when its
/// lines are pairwise skew, and then the quadric is smooth and doubly ruled;
/// such a quadric with `A` lines has at least `⌈A/2⌉` of them in one ruling.
/// For every skew pair `(i, j)` the third lines `k > j` are grouped by the
/// quadric they determine, and groups too small to hold a ruling of the
/// required size are dropped before the exact recount.
///
/// The lines must be distinct. Returns the entries, the number of triples
/// examined, and whether the budget `triple_cap` truncated the enumeration.
pub fn rich_quadrics(lines: &[LineC3], threshold: usize, triple_cap: usize) -> (Vec<SurfaceEntry<QuadricC3>>, usize, bool) {
    let m = lines.len();
    let skew = skew_table(lines);
    // Deterministic budget: a prefix of the lexicographic triple order.
    let mut work: Vec<(usize, usize, usize)> = Vec::new();
    let mut budget = triple_cap;
    let mut truncated = false;
    'outer: for i in 0..m {
        for j in i + 1..m {
            if !skew[i][j] {
                continue;
            }
            let ks = (j + 1..m).filter(|&k| skew[i][k] && skew[j][k]).count();
            if ks == 0 {
                continue;
            }
            if ks > budget {
                truncated = true;
                if budget > 0 {
                    work.push((i, j, budget));
                }
                budget = 0;
                break 'outer;
            }
            budget -= ks;
            work.push((i, j, ks));
        }
    }
    let examined = triple_cap - budget;
    let min_group = threshold.div_ceil(2).saturating_sub(2).max(1);
    let reduced: Vec<Option<Vec<u64>>> = lines.par_iter().map(reduced_conditions).collect();

    let pair_results: Vec<PairGroups> = work
        .par_iter()
        .map(|&(i, j, limit)| {
            let ks: Vec<usize> = (j + 1..m).filter(|&k| skew[i][k] && skew[j][k]).take(limit).collect();
            match screen_pair(&reduced, i, j, &ks) {
                Some(groups) => PairGroups::Screened(groups.into_iter().filter(|(_, g)| g.len() >= min_group).collect()),
                None => PairGroups::Exact(exact_pair_candidates(lines, i, j, &ks, min_group)),
            }
        })
        .collect();

    // Merge screened groups across pairs by their quadric mod `P`.
    let mut keyed: HashMap<Vec<u64>, KeyedGroup> = HashMap::new();
    let mut candidates: BTreeSet<QuadricC3> = BTreeSet::new();
    for (&(i, j, _), result) in work.iter().zip(pair_results) {
        match result {
            PairGroups::Exact(qs) => candidates.extend(qs),
            PairGroups::Screened(groups) => {
                for (key, ks) in groups {
                    let g = keyed.entry(key).or_insert_with(|| KeyedGroup { triple: (i, j, ks[0]), lines: BTreeSet::new(), pairs: Vec::new() });
                    g.lines.extend([i, j]);
                    g.lines.extend(ks.iter().copied());
                    g.pairs.push((i, j, ks));
                }
            }
        }
    }
    let ruling = threshold.div_ceil(2);
    let mut keyed: Vec<(Vec<u64>, KeyedGroup)> = keyed.into_iter().filter(|(_, g)| g.lines.len() >= ruling).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    let confirmed: Vec<Vec<QuadricC3>> = keyed
        .par_iter()
        .map(|(key, g)| {
            let maybe: Vec<usize> = (0..m).filter(|&k| may_lie_on(reduced[k].as_deref(), key)).collect();
            if maybe.len() < threshold {
                return Vec::new();
            }
            confirm_key(lines, key, g, min_group)
        })
        .collect();
    candidates.extend(confirmed.into_iter().flatten());

    let mut out: Vec<SurfaceEntry<QuadricC3>> = candidates
        .into_par_iter()
        .filter(QuadricC3::is_irreducible)
        .filter_map(|q| {
            let key = reduce_quadric(&q);
            let contained: Vec<usize> = (0..m)
                .filter(|&k| key.as_ref().is_none_or(|key| may_lie_on(reduced[k].as_deref(), key)))
                .filter(|&k| q.contains_line(&lines[k]))
                .collect();
            (contained.len() >= threshold).then_some(SurfaceEntry { surface: q, lines: contained })
        })
        .collect();
    out.sort_by(|a, b| a.surface.cmp(&b.surface));
    (out, examined, truncated)
}

enum PairGroups {
    Screened(Vec<(Vec<u64>, Vec<usize>)>),
    Exact(Vec<QuadricC3>),
}

/// Screened groups of all pairs sharing one quadric mod `P`.
struct KeyedGroup {
    triple: (usize, usize, usize),
    lines: BTreeSet<usize>,
    pairs: Vec<(usize, usize, Vec<usize>)>,
}

/// The three conditions a line imposes on quadric coefficients, mod `P`.
fn reduced_conditions(line: &LineC3) -> Option<Vec<u64>> {
    quadric_condition_matrix(std::slice::from_ref(line)).entries().iter().map(modp::from_gr).collect()
}

fn reduce_quadric(q: &QuadricC3) -> Option<Vec<u64>> {
    q.coeffs.iter().map(modp::from_gr).collect()
}

/// False only if the line is certainly not on the quadric reducing to `key`.
fn may_lie_on(conditions: Option<&[u64]>, key: &[u64]) -> bool {
    conditions.is_none_or(|c| (0..3).all(|r| modp::dot(&c[r * 10..r * 10 + 10], key) == 0))
}

/// Lifts a screened key to exact quadrics.
///
/// A triple of full rank mod `P` has a unique quadric over ℚ(i), reducing
/// to its key. The quadric through the representative triple is taken;
/// if every line of the group lies on it, every triple of the group has it
/// as its quadric. Otherwise two quadrics collided mod `P` and the pairs
/// are split exactly.
fn confirm_key(lines: &[LineC3], key: &[u64], g: &KeyedGroup, min_group: usize) -> Vec<QuadricC3> {
    let (i, j, k) = g.triple;
    let fit = quadric_condition_matrix(&[lines[i].clone(), lines[j].clone(), lines[k].clone()]).nullspace();
    if let [v] = fit.as_slice() {
        if let Ok(q) = QuadricC3::new(v) {
            if reduce_quadric(&q).as_deref() == Some(key) && g.lines.iter().all(|&l| q.contains_line(&lines[l])) {
                return vec![q];
            }
        }
    }
    g.pairs.iter().flat_map(|(i, j, ks)| exact_pair_candidates(lines, *i, *j, ks, min_group)).collect()
}

/// Groups the third lines `ks` of the skew pair `(i, j)` by the quadric mod
/// `P` through the triple. `None` when some reduction loses rank, in which
/// case the pair must be handled exactly.
///
/// Reduction mod `P` never raises rank, so a triple of full rank mod `P` has
/// full rank over ℚ(i) and its quadric reduces to the screened one; equal
/// quadrics therefore share a group.
fn screen_pair(reduced: &[Option<Vec<u64>>], i: usize, j: usize, ks: &[usize]) -> Option<HashMap<Vec<u64>, Vec<usize>>> {
    let mut stacked = reduced[i].clone()?;
    stacked.extend_from_slice(reduced[j].as_ref()?);
    let (rank, basis) = modp::nullspace(stacked, 6, 10);
    if rank != 6 {
        return None;
    }
    let mut groups: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
    for &k in ks {
        let rk = reduced[k].as_ref()?;
        let mut m = [0u64; 12];
        for r in 0..3 {
            for (c, b) in basis.iter().enumerate() {
                m[r * 4 + c] = modp::dot(&rk[r * 10..r * 10 + 10], b);
            }
        }
        let lambda = modp::null_vector_3x4(&m);
        if lambda == [0; 4] {
            return None;
        }
        let mut q: Vec<u64> = (0..10)
            .map(|t| (basis.iter().zip(&lambda).map(|(b, l)| b[t] as u128 * *l as u128).sum::<u128>() % modp::P as u128) as u64)
            .collect();
        modp::normalize(&mut q);
        groups.entry(q).or_default().push(k);
    }
    Some(groups)
}

/// Quadrics through the skew pair `(i, j)` and at least `min_group` of the
/// lines `ks`, in exact arithmetic.
fn exact_pair_candidates(lines: &[LineC3], i: usize, j: usize, ks: &[usize], min_group: usize) -> Vec<QuadricC3> {
    let basis = quadric_condition_matrix(&[lines[i].clone(), lines[j].clone()]).nullspace();
    let mut counts: Vec<(QuadricC3, usize)> = Vec::new();
    for &k in ks {
        if let Some((_, c)) = counts.iter_mut().find(|(q, _)| q.contains_line(&lines[k])) {
            *c += 1;
        } else if let Some(q) = quadric_from_pair_basis(&basis, &lines[k]) {
            counts.push((q, 1));
        }
    }
    counts.into_iter().filter(|&(_, c)| c >= min_group).map(|(q, _)| q).collect()
}

/// The unique quadric in `span(basis)` containing `line`, if unique.
fn quadric_from_pair_basis(basis: &[Vec<GR>], line: &LineC3) -> Option<QuadricC3> {
    let rows = quadric_condition_matrix(std::slice::from_ref(line));
    let mut m = Matrix::zeros(3, basis.len());
    for r in 0..3 {
        for (c, b) in basis.iter().enumerate() {
            m[(r, c)] = rows.row(r).iter().zip(b).map(|(x, y)| x * y).sum();
        }
    }
    let ns = m.nullspace();
    if ns.len() != 1 {
        return None;
    }
    let coeffs: Vec<GR> = (0..10)
        .map(|t| basis.iter().zip(&ns[0]).map(|(b, l)| &b[t] * l).sum())
        .collect();
    QuadricC3::new(&coeffs).ok()
}

/// Planes and irreducible quadrics containing at least `threshold` lines.
pub fn rich_surfaces(lines: &[LineC3], threshold: usize, triple_cap: usize) -> Result<RichSurfaceReport> {
    if threshold < 2 {
        return Err(Error::InvalidParams("surface threshold must be at least 2".into()));
    }
    ensure_distinct_lines(lines)?;
    let planes = rich_planes(lines, threshold);
    let (quadrics, triples_examined, truncated) = rich_quadrics(lines, threshold, triple_cap);
    Ok(RichSurfaceReport { threshold, planes, quadrics, triples_examined, truncated })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StructureReport {
    pub n: usize,
    pub r: usize,
    pub epsilon: f64,
    /// `⌈r·n^{1/2+ε}⌉`
    pub threshold: usize,
    pub planes: Vec<SurfaceEntry<PlaneC3>>,
    /// `max(2, ⌈r/3⌉)`
    pub r_prime: usize,
    /// `|P_r(L)|`
    pub rich_count: usize,
    /// `|P_r(L) \ ∪_W P_{r′}(L_W)|`
    pub residual: usize,
    /// `n^{3/2+ε}·r^{−2}`
    pub reference: f64,
    pub ratio: f64,
}

pub fn structure_threshold(n: usize, r: usize, epsilon: f64) -> usize {
    (r as f64 * (n as f64).powf(0.5 + epsilon)).ceil() as usize
}

pub fn structure_report(lines: &[LineC3], r: usize, epsilon: f64) -> Result<StructureReport> {
    if r < 2 {
        return Err(Error::InvalidParams("r must be at least 2".into()));
    }
    ensure_distinct_lines(lines)?;
    let n = lines.len();
    let threshold = structure_threshold(n, r, epsilon).max(2);
    let planes = rich_planes(lines, threshold);
    let r_prime = 2.max(r.div_ceil(3));
    let report = rich_points(lines)?;
    let plane_sets: Vec<HashSet<usize>> = planes.iter().map(|w| w.lines.iter().copied().collect()).collect();
    let mut rich_count = 0;
    let mut residual = 0;
    for through in report.incidences.values().filter(|v| v.len() >= r) {
        rich_count += 1;
        let covered = plane_sets
            .iter()
            .any(|w| through.iter().filter(|l| w.contains(l)).count() >= r_prime);
        if !covered {
            residual += 1;
        }
    }
    let reference = (n as f64).powf(1.5 + epsilon) / (r as f64).powi(2);
    Ok(StructureReport {
        n,
        r,
        epsilon,
        threshold,
        planes,
        r_prime,
        rich_count,
        residual,
        reference,
        ratio: residual as f64 / reference,
    })
}
