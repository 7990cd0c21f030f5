//! The invariant suite behind `cxdist verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::GR;
use crate::complex_plane::{
    delta, distance_statistics, isotropic_key, quadruples_bruteforce, PointC2, Sign,
    DEFAULT_QUADRUPLE_CAP,
};
use crate::error::{Error, Result};
use crate::esgk::{
    classify_pairs, esgk_family, parallel_pair_count, parallel_pairs_bruteforce, special_point,
};
use crate::incidence::{
    incidence_count_screened, rich_planes, rich_points, rich_quadrics, RichPointReport, DEFAULT_TRIPLE_CAP,
};
use crate::lines::{bad_plane_for, line_pair_relation, reduce_lines, screened_relation, LineC3, LinePairRelation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl CheckOutcome {
    fn pass(name: &'static str, detail: impl Into<String>) -> Self {
        CheckOutcome { name, status: Status::Pass, detail: detail.into(), witness: None }
    }

    fn fail(name: &'static str, detail: impl Into<String>, witness: Value) -> Self {
        CheckOutcome { name, status: Status::Fail, detail: detail.into(), witness: Some(witness) }
    }

    fn skipped(name: &'static str, detail: impl Into<String>) -> Self {
        CheckOutcome { name, status: Status::Skipped, detail: detail.into(), witness: None }
    }

    fn check(name: &'static str, ok: bool, detail: impl Into<String>, witness: impl FnOnce() -> Value) -> Self {
        if ok {
            Self::pass(name, detail)
        } else {
            Self::fail(name, detail, witness())
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    fn new(checks: Vec<CheckOutcome>) -> Self {
        VerifyReport { passed: checks.iter().all(|c| c.status != Status::Fail), checks }
    }

    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Largest `|P|` for the O(|P|⁴) checks.
    pub cap_quadruples: usize,
    pub cap_triples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 0, cap_quadruples: DEFAULT_QUADRUPLE_CAP, cap_triples: DEFAULT_TRIPLE_CAP }
    }
}

/// Runs the point-set suite. `lines` replaces the computed family and must
/// list `ℓ_{a,c}` at index `a·n + c`.
pub fn verify_points(points: &[PointC2], lines: Option<&[LineC3]>, opts: &VerifyOptions) -> Result<VerifyReport> {
    let n = points.len();
    let stats = distance_statistics(points)?;
    let family;
    let lines = match lines {
        Some(l) => {
            if l.len() != n * n {
                return Err(Error::InvalidParams(format!("line file has {} lines, expected {}", l.len(), n * n)));
            }
            l
        }
        None => {
            family = esgk_family(points)?;
            &family.lines[..]
        }
    };
    let small = n <= opts.cap_quadruples;
    let too_big = |name| CheckOutcome::skipped(name, format!("|P| = {n} exceeds the quadruple cap {}", opts.cap_quadruples));
    let mut checks = Vec::new();

    checks.push(if small {
        let brute = quadruples_bruteforce(points, opts.cap_quadruples)?;
        CheckOutcome::check(
            "quadruple-identity",
            brute == stats.quadruple_count,
            format!("histogram {} vs enumeration {brute}", stats.quadruple_count),
            || json!({ "histogram": stats.quadruple_count, "enumeration": brute }),
        )
    } else {
        too_big("quadruple-identity")
    });

    let mut sorted: Vec<&LineC3> = lines.iter().collect();
    sorted.sort();
    let dup = sorted.windows(2).find(|w| w[0] == w[1]).map(|w| w[0].clone());
    checks.push(CheckOutcome::check(
        "family-injective",
        dup.is_none(),
        format!("{} lines for {n} points", lines.len()),
        || json!({ "duplicateLine": dup }),
    ));
    let distinct = dup.is_none();

    checks.push(if small { coplanarity_check(points, lines) } else { too_big("coplanarity-criterion") });
    checks.push(bad_plane_check(points, lines));

    checks.push(if small {
        let pairs = classify_pairs(lines);
        CheckOutcome::check(
            "quadruples-vs-coplanar-pairs",
            stats.quadruple_count <= pairs.coplanar_non_bad,
            format!("|Q(P)| = {} ≤ {} coplanar non-bad ordered pairs", stats.quadruple_count, pairs.coplanar_non_bad),
            || json!({ "quadrupleCount": stats.quadruple_count, "coplanarNonBadPairs": pairs.coplanar_non_bad }),
        )
    } else {
        too_big("quadruples-vs-coplanar-pairs")
    });

    let hist = parallel_pair_count(points);
    let cube = (n as u64).pow(3);
    checks.push(if small {
        let brute = parallel_pairs_bruteforce(lines);
        CheckOutcome::check(
            "parallel-pairs",
            hist == brute && hist <= cube,
            format!("histogram {hist}, pairwise {brute}, |P|³ = {cube}"),
            || json!({ "histogram": hist, "pairwise": brute, "cube": cube }),
        )
    } else {
        CheckOutcome::check("parallel-pairs", hist <= cube, format!("histogram {hist}, |P|³ = {cube}"), || {
            json!({ "histogram": hist, "cube": cube })
        })
    });

    checks.push(special_point_check(points, lines));

    if !small {
        for name in ["richness-cap", "rich-point-completeness", "plane-cap", "quadric-cap", "rich-point-bound", "rich-surface-bound"] {
            checks.push(too_big(name));
        }
        return Ok(VerifyReport::new(checks));
    }
    if !distinct {
        checks.push(CheckOutcome::skipped("richness-cap", "line set has duplicates"));
        return Ok(VerifyReport::new(checks));
    }
    let report = rich_points(lines)?;
    checks.push(CheckOutcome::check(
        "richness-cap",
        report.max_richness <= n,
        format!("max richness {} ≤ |P| = {n}", report.max_richness),
        || json!({ "maxRichness": report.max_richness, "points": report.rich(n + 1) }),
    ));
    checks.push(completeness_check(lines, &report, opts.seed));

    let on_origin_isotropic = points
        .iter()
        .any(|p| isotropic_key(p, Sign::Plus).is_zero() || isotropic_key(p, Sign::Minus).is_zero());
    checks.push(if on_origin_isotropic {
        CheckOutcome::skipped("plane-cap", "P meets y = ±ix")
    } else {
        let over: Vec<_> = rich_planes(lines, 2 * n + 1).into_iter().filter(|w| !w.surface.is_bad()).collect();
        CheckOutcome::check(
            "plane-cap",
            over.is_empty(),
            format!("non-bad planes hold ≤ 2|P| = {} lines", 2 * n),
            || json!({ "planes": over.iter().map(|w| json!({ "plane": w.surface, "lines": w.lines.len() })).collect::<Vec<_>>() }),
        )
    });

    let m = lines.len();
    let a_quadric = (8.0 * (m as f64).sqrt()).ceil() as usize;
    let quadric_threshold = (6 * n + 1).min(a_quadric);
    let (quadrics, examined, truncated) = rich_quadrics(lines, quadric_threshold, opts.cap_triples);
    let over: Vec<_> = quadrics.iter().filter(|q| q.lines.len() > 6 * n).collect();
    checks.push(if !over.is_empty() {
        CheckOutcome::fail(
            "quadric-cap",
            format!("a quadric holds more than 6|P| = {} lines", 6 * n),
            json!({ "quadrics": over.iter().map(|w| json!({ "quadric": w.surface, "lines": w.lines })).collect::<Vec<_>>() }),
        )
    } else if truncated {
        CheckOutcome::skipped("quadric-cap", format!("triple budget exhausted after {examined} triples"))
    } else {
        CheckOutcome::pass("quadric-cap", format!("{examined} triples, every quadric ≤ {} lines", 6 * n))
    });

    checks.push(rich_point_bound_check(&report, m));
    checks.push(rich_surface_bound_check(lines, &quadrics, a_quadric, truncated));
    Ok(VerifyReport::new(checks))
}

/// Runs the suite that applies to an arbitrary line set.
pub fn verify_lines(lines: &[LineC3], opts: &VerifyOptions) -> Result<VerifyReport> {
    let report = rich_points(lines)?;
    let m = lines.len();
    let a_quadric = (8.0 * (m as f64).sqrt()).ceil() as usize;
    let (quadrics, _, truncated) = rich_quadrics(lines, a_quadric.max(2), opts.cap_triples);
    let checks = vec![
        completeness_check(lines, &report, opts.seed),
        rich_point_bound_check(&report, m),
        rich_surface_bound_check(lines, &quadrics, a_quadric, truncated),
    ];
    Ok(VerifyReport::new(checks))
}

/// Coplanarity of `ℓ_{a,c}, ℓ_{b,d}` iff `Δ(a,b) = Δ(c,d)`, over all pairs.
fn coplanarity_check(points: &[PointC2], lines: &[LineC3]) -> CheckOutcome {
    let n = points.len();
    let dist: Vec<Vec<GR>> = points.iter().map(|p| points.iter().map(|q| delta(p, q)).collect()).collect();
    let red = reduce_lines(lines);
    let bad = (0..n * n).into_par_iter().find_map_first(|u| {
        let (a, c) = (u / n, u % n);
        (u + 1..n * n).find_map(|v| {
            let (b, d) = (v / n, v % n);
            let rel = screened_relation(&lines[u], red[u].as_ref(), &lines[v], red[v].as_ref());
            (rel.is_coplanar() != (dist[a][b] == dist[c][d])).then(|| (a, b, c, d, rel))
        })
    });
    let pairs = n * n * (n * n - 1) / 2;
    match bad {
        None => CheckOutcome::pass("coplanarity-criterion", format!("{pairs} line pairs agree")),
        Some((a, b, c, d, rel)) => CheckOutcome::fail(
            "coplanarity-criterion",
            "coplanarity disagrees with equality of distances",
            json!({
                "indices": [a, b, c, d],
                "a": points[a], "b": points[b], "c": points[c], "d": points[d],
                "lineAC": lines[a * n + c], "lineBD": lines[b * n + d],
                "coplanar": rel.is_coplanar(),
                "deltaAB": dist[a][b], "deltaCD": dist[c][d],
            }),
        ),
    }
}

/// `ℓ_{a,c}` lies in a bad plane of slope `s` iff `a, c` share the isotropic
/// line of slope `s`, and then the plane is that line's.
fn bad_plane_check(points: &[PointC2], lines: &[LineC3]) -> CheckOutcome {
    let n = points.len();
    let bad = (0..n * n).into_par_iter().find_map_first(|u| {
        let (a, c) = (u / n, u % n);
        let l = &lines[u];
        [Sign::Plus, Sign::Minus].into_iter().find_map(|s| {
            let d = l.dir();
            let in_family = d[1] == &s.slope() * &d[0];
            let (ka, kc) = (isotropic_key(&points[a], s), isotropic_key(&points[c], s));
            let ok = in_family == (ka == kc) && (!in_family || bad_plane_for(s, &ka).contains_line(l));
            (!ok).then(|| (a, c, s, in_family))
        })
    });
    match bad {
        None => CheckOutcome::pass("bad-plane-criterion", format!("{} lines, both slopes", n * n)),
        Some((a, c, s, in_family)) => CheckOutcome::fail(
            "bad-plane-criterion",
            "bad-plane containment disagrees with the isotropic classes",
            json!({ "a": points[a], "c": points[c], "sign": s, "line": lines[a * n + c], "inBadPlaneFamily": in_family }),
        ),
    }
}

fn special_point_check(points: &[PointC2], lines: &[LineC3]) -> CheckOutcome {
    let n = points.len();
    let bad = (0..n * n).into_par_iter().find_map_first(|u| {
        let (a, c) = (u / n, u % n);
        [Sign::Plus, Sign::Minus].into_iter().find_map(|s| {
            let k = isotropic_key(&points[c], s);
            let p = special_point(&points[a], s, &k);
            (!lines[u].contains(&p)).then(|| (a, c, s, p))
        })
    });
    match bad {
        None => CheckOutcome::pass("special-points", format!("{} lines, both slopes", n * n)),
        Some((a, c, s, p)) => CheckOutcome::fail(
            "special-points",
            "special point off its line",
            json!({ "a": points[a], "c": points[c], "sign": s, "point": p, "line": lines[a * n + c] }),
        ),
    }
}

const COMPLETENESS_SAMPLES: usize = 100;

fn completeness_check(lines: &[LineC3], report: &RichPointReport, seed: u64) -> CheckOutcome {
    let red = reduce_lines(lines);
    let wrong = report.incidences.par_iter().find_map_first(|(p, through)| {
        let count = incidence_count_screened(lines, &red, p);
        (count != through.len()).then(|| (p.clone(), through.len(), count))
    });
    if let Some((p, stored, count)) = wrong {
        return CheckOutcome::fail(
            "rich-point-completeness",
            "stored richness differs from the incidence recount",
            json!({ "point": p, "stored": stored, "recount": count }),
        );
    }
    let m = lines.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampled = 0;
    if m >= 2 {
        for _ in 0..COMPLETENESS_SAMPLES {
            let i = rng.gen_range(0..m);
            let j = rng.gen_range(0..m - 1);
            let j = if j >= i { j + 1 } else { j };
            sampled += 1;
            if let LinePairRelation::Intersecting { point, .. } = line_pair_relation(&lines[i], &lines[j]) {
                let listed = report.incidences.get(&point).is_some_and(|v| v.contains(&i) && v.contains(&j));
                if !listed {
                    return CheckOutcome::fail(
                        "rich-point-completeness",
                        "an intersection point is missing from the report",
                        json!({ "lines": [i, j], "point": point }),
                    );
                }
            }
        }
    }
    CheckOutcome::pass(
        "rich-point-completeness",
        format!("{} points recounted, {sampled} random pairs found", report.incidences.len()),
    )
}

/// `|P_r| ≤ 2m/r`, as stated for `r ≥ 2m` and for the range `r ≥ 2√m`
/// where the same double count applies.
fn rich_point_bound_check(report: &RichPointReport, m: usize) -> CheckOutcome {
    let start = ((2.0 * (m as f64).sqrt()).ceil() as usize).max(2);
    let stated = report.rich_count(2 * m) * 2 * m <= 2 * m;
    let violation = (start..=report.max_richness.max(start)).find(|&r| report.rich_count(r) * r > 2 * m);
    CheckOutcome::check(
        "rich-point-bound",
        stated && violation.is_none(),
        format!("|P_r|·r ≤ 2m for r = 2m and every r ≥ {start}"),
        || json!({ "r": violation, "richCount": violation.map(|r| report.rich_count(r)), "lineCount": m }),
    )
}

/// `|S| ≤ 2m/A`: planes with `A ≥ 2√m`, planes and quadrics with `A ≥ 8√m`.
fn rich_surface_bound_check(
    lines: &[LineC3],
    quadrics: &[crate::incidence::SurfaceEntry<crate::lines::QuadricC3>],
    a_quadric: usize,
    truncated: bool,
) -> CheckOutcome {
    let m = lines.len();
    let a_plane = ((2.0 * (m as f64).sqrt()).ceil() as usize).max(2);
    let planes = rich_planes(lines, a_plane);
    let planes_ok = planes.len() * a_plane <= 2 * m;
    let rich_planes_q = planes.iter().filter(|w| w.lines.len() >= a_quadric).count();
    let rich_q = quadrics.iter().filter(|w| w.lines.len() >= a_quadric).count();
    let both_ok = (rich_planes_q + rich_q) * a_quadric <= 2 * m;
    let detail = format!(
        "{} planes with ≥ {a_plane} lines, {} surfaces with ≥ {a_quadric} lines{}",
        planes.len(),
        rich_planes_q + rich_q,
        if truncated { " (quadric search truncated)" } else { "" }
    );
    CheckOutcome::check("rich-surface-bound", planes_ok && both_ok, detail, || {
        json!({ "lineCount": m, "planeThreshold": a_plane, "planes": planes.len(),
                "surfaceThreshold": a_quadric, "planesAtSurfaceThreshold": rich_planes_q, "quadrics": rich_q })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<PointC2> {
        vec![PointC2::int(0, 0), PointC2::int(1, 0), PointC2::int(0, 1), PointC2::int(1, 1)]
    }

    #[test]
    fn unit_square_passes() {
        let r = verify_points(&square(), None, &VerifyOptions::default()).unwrap();
        assert!(r.passed, "{r:#?}");
        assert!(r.get("quadruple-identity").unwrap().detail.contains("68"));
    }

    #[test]
    fn mutated_line_is_caught() {
        let pts = square();
        let mut lines = esgk_family(&pts).unwrap().lines;
        // ℓ_{0,1} moved off its transform image.
        lines[1] = LineC3::new(&[GR::zero(), GR::from_int(7), GR::from_int(3)], &[GR::one(), GR::from_int(2), GR::from_int(5)]).unwrap();
        let r = verify_points(&pts, Some(&lines), &VerifyOptions::default()).unwrap();
        assert!(!r.passed);
        let c = r.get("coplanarity-criterion").unwrap();
        assert_eq!(c.status, Status::Fail);
        assert!(c.witness.as_ref().unwrap()["indices"].is_array());
    }
}
