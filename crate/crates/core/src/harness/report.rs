//! Bound-comparison tables: exact counts next to reference curves.
//!
//! Ratios are reported, never asserted.

use crate::complex_plane::{distance_statistics, PointC2, Sign};
use crate::error::Result;
use crate::esgk::esgk_family;
use crate::harness::generate::{generate, Dataset, Generator};
use crate::harness::io::Table;
use crate::incidence::{rich_points, structure_report};
use crate::lines::LineC3;
use crate::algebra::GR;

fn f(x: f64) -> String {
    format!("{x:.6}")
}

fn points_of(g: &Generator, seed: u64) -> Result<Vec<PointC2>> {
    match generate(g, seed)? {
        Dataset::Points(p) => Ok(p),
        Dataset::Lines(_) => unreachable!("point generator"),
    }
}

/// `|Δ(P)|` for `k×k` grids against `n^{1−ε}`.
pub fn distances_table(kmin: usize, kmax: usize, epsilon: f64) -> Result<Table> {
    let mut t = Table::new(["k", "n", "distinct_distances", "reference", "ratio"]);
    for k in kmin..=kmax {
        let pts = points_of(&Generator::Grid { k }, 0)?;
        let n = pts.len();
        let d = distance_statistics(&pts)?.distinct_distances.len();
        let reference = (n as f64).powf(1.0 - epsilon);
        t.push([k.to_string(), n.to_string(), d.to_string(), f(reference), f(d as f64 / reference)]);
    }
    Ok(t)
}

/// `|Δ(P)|` on a single isotropic line: always `{0}`.
pub fn isotropic_table(mmax: usize) -> Result<Table> {
    let mut t = Table::new(["m", "distinct_distances", "quadruple_count"]);
    for m in 2..=mmax {
        let pts = points_of(&Generator::Isotropic { m, sign: Sign::Plus, k: GR::zero() }, 0)?;
        let s = distance_statistics(&pts)?;
        t.push([m, s.distinct_distances.len(), s.quadruple_count as usize]);
    }
    Ok(t)
}

/// `|P_r(L)|` for `L = L(P)`, `P` random, at dyadic `r ≤ 2√m`, against
/// `m²/r³ + m/r`; the first row also carries `|P_2|/m^{3/2}`.
pub fn rich_table(n: usize, bound: u32, seed: u64) -> Result<Table> {
    let pts = points_of(&Generator::Random { n, bound }, seed)?;
    let lines = esgk_family(&pts)?.lines;
    rich_table_for_lines(&lines)
}

pub fn rich_table_for_lines(lines: &[LineC3]) -> Result<Table> {
    let m = lines.len();
    let report = rich_points(lines)?;
    let mf = m as f64;
    let mut t = Table::new(["lines", "r", "rich_points", "reference", "ratio", "p2_over_m_three_halves"]);
    let p2 = report.rich_count(2) as f64 / mf.powf(1.5);
    let top = (2.0 * mf.sqrt()).floor().max(2.0) as usize;
    let mut r = 2;
    while r <= top {
        let count = report.rich_count(r);
        let rf = r as f64;
        let reference = mf * mf / rf.powi(3) + mf / rf;
        t.push([m.to_string(), r.to_string(), count.to_string(), f(reference), f(count as f64 / reference), f(p2)]);
        r *= 2;
    }
    Ok(t)
}

/// Structure-theorem residuals for each `r` in `rs`.
pub fn structure_table(lines: &[LineC3], rs: &[usize], epsilon: f64) -> Result<Table> {
    let mut t = Table::new(["lines", "r", "epsilon", "threshold", "planes", "rich_points", "residual", "reference", "ratio"]);
    for &r in rs {
        let s = structure_report(lines, r, epsilon)?;
        t.push([
            s.n.to_string(),
            r.to_string(),
            f(epsilon),
            s.threshold.to_string(),
            s.planes.len().to_string(),
            s.rich_count.to_string(),
            s.residual.to_string(),
            f(s.reference),
            f(s.ratio),
        ]);
    }
    Ok(t)
}
