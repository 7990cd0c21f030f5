//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cxdist::algebra::{MultiPoly, Rational, GR};
use cxdist::complex_plane::{
    check_reductions, delta, distance_statistics, growth_sets, isotropic_key, quadruples_bruteforce, PointC2, Sign,
};
use cxdist::esgk::{esgk_family, esgk_line, parallel_pair_count, parallel_pairs_bruteforce};
use cxdist::harness::generate::{generate, planted_plane_list, Dataset, Generator, ProductVariant, SetSpec};
use cxdist::incidence::{rich_planes, rich_points, rich_quadrics, rich_surfaces, structure_report, DEFAULT_TRIPLE_CAP};
use cxdist::lines::{bad_plane_for, cross, dot, line_pair_relation, sub3, LineC3, LinePairRelation, PointC3};
use cxdist::real_geometry::{
    apply_j, common_standard_line, complex_tangent_frame, conditions_hold, g_coords, g_inverse, hairbrush_check,
    line_membership_conditions, phi, ruled_at_point, RealPoint6, RealPoly6, StandardLineCoords,
};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn r(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn rand_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    Rational::new(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

fn rand_gr(rng: &mut ChaCha8Rng, num: i64, den: i64) -> GR {
    GR::new(rand_rational(rng, num, den), rand_rational(rng, num, den))
}

fn rand_point(rng: &mut ChaCha8Rng, num: i64, den: i64) -> PointC2 {
    PointC2::new(rand_gr(rng, num, den), rand_gr(rng, num, den))
}

fn points(g: Generator, seed: u64) -> Vec<PointC2> {
    match generate(&g, seed).unwrap() {
        Dataset::Points(p) => p,
        Dataset::Lines(_) => unreachable!(),
    }
}

/// Coplanarity of two lines through the triple product, independent of the
/// library's pair classification.
fn coplanar_by_volume(l1: &LineC3, l2: &LineC3) -> bool {
    dot(&sub3(l2.base(), l1.base()), &cross(l1.dir(), l2.dir())).is_zero()
}

/// `p + v` with `v` a rotation of `u` by a Gaussian-rational angle, so that
/// `Δ(p, p + v) = Δ(0, u)`.
fn rotated(rng: &mut ChaCha8Rng, p: &PointC2, u: &PointC2) -> PointC2 {
    loop {
        let t = GR::int(rng.gen_range(-4..=4), rng.gen_range(-4..=4));
        let den = &GR::one() + &t.square();
        let Some(inv) = den.inv() else { continue };
        let alpha = &(&GR::one() - &t.square()) * &inv;
        let beta = &(&GR::from_int(2) * &t) * &inv;
        let vx = &(&alpha * &u.x) - &(&beta * &u.y);
        let vy = &(&beta * &u.x) + &(&alpha * &u.y);
        return PointC2::new(&p.x + &vx, &p.y + &vy);
    }
}

fn on_isotropic(rng: &mut ChaCha8Rng, sign: Sign, k: &GR) -> PointC2 {
    let x = rand_gr(rng, 100, 7);
    let y = &(&sign.slope() * &x) + k;
    PointC2::new(x, y)
}

fn coplanarity_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut equal, mut unequal) = (0, 0);
    for trial in 0..10_000 {
        let a = rand_point(&mut rng, 100, 7);
        let b = rand_point(&mut rng, 100, 7);
        let c = rand_point(&mut rng, 100, 7);
        let d = match trial % 6 {
            0 | 1 => rand_point(&mut rng, 100, 7),
            2 | 3 => rotated(&mut rng, &c, &b.sub(&a)),
            // A pair at distance zero next to a pair at distance zero.
            4 => {
                let s = if rng.gen() { Sign::Plus } else { Sign::Minus };
                let k = isotropic_key(&c, s);
                on_isotropic(&mut rng, s, &k)
            }
            _ => PointC2::new(&c.x + &(&b.y - &a.y), &c.y - &(&b.x - &a.x)),
        };
        let (a, b) = if trial % 6 == 4 {
            let s = if rng.gen() { Sign::Plus } else { Sign::Minus };
            let k = isotropic_key(&a, s);
            (a.clone(), on_isotropic(&mut rng, s, &k))
        } else {
            (a, b)
        };
        if (&a, &c) == (&b, &d) {
            continue;
        }
        let (l1, l2) = (esgk_line(&a, &c), esgk_line(&b, &d));
        let same = delta(&a, &b) == delta(&c, &d);
        let coplanar = line_pair_relation(&l1, &l2).is_coplanar();
        ensure(coplanar == same && coplanar_by_volume(&l1, &l2) == same, || {
            format!("trial {trial}: a={a:?} b={b:?} c={c:?} d={d:?} coplanar={coplanar} equal={same}")
        })?;
        if same {
            equal += 1;
        } else {
            unequal += 1;
        }
    }
    ensure(equal >= 3000 && unequal >= 3000, || format!("unbalanced sample: {equal} equal, {unequal} unequal"))?;
    Ok(format!("10000 quadruples agree ({equal} equal-distance, {unequal} not)"))
}

fn bad_plane_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut contained = 0;
    for trial in 0..1000 {
        let s = if rng.gen() { Sign::Plus } else { Sign::Minus };
        let k = rand_gr(&mut rng, 100, 7);
        let (a, c) = match trial % 4 {
            0 | 1 => (on_isotropic(&mut rng, s, &k), on_isotropic(&mut rng, s, &k)),
            2 => (on_isotropic(&mut rng, s, &k), rand_point(&mut rng, 100, 7)),
            _ => (rand_point(&mut rng, 100, 7), rand_point(&mut rng, 100, 7)),
        };
        let inside = bad_plane_for(s, &k).contains_line(&esgk_line(&a, &c));
        let both_on = isotropic_key(&a, s) == k && isotropic_key(&c, s) == k;
        ensure(inside == both_on, || format!("trial {trial}: a={a:?} c={c:?} sign={s:?} k={k}"))?;
        contained += inside as usize;
    }
    ensure(contained == 500, || format!("{contained} of 500 planted cases contained"))?;
    Ok("1000 cases agree, 500 planted contained".into())
}

fn grid_distances() -> Outcome {
    let grid3 = distance_statistics(&points(Generator::Grid { k: 3 }, 0)).unwrap();
    ensure(grid3.distinct_distances.len() == 5, || format!("grid(3) has {} distances", grid3.distinct_distances.len()))?;
    for k in 3..=30i64 {
        let pts = points(Generator::Grid { k: k as usize }, 0);
        let got = distance_statistics(&pts).unwrap().distinct_distances;
        let mut brute = BTreeSet::new();
        for (x1, y1) in (0..k).flat_map(|x| (0..k).map(move |y| (x, y))) {
            for (x2, y2) in (0..k).flat_map(|x| (0..k).map(move |y| (x, y))) {
                if (x1, y1) != (x2, y2) {
                    brute.insert((x1 - x2).pow(2) + (y1 - y2).pow(2));
                }
            }
        }
        let brute: BTreeSet<GR> = brute.into_iter().map(GR::from_int).collect();
        ensure(got == brute, || format!("k = {k}: {} vs brute force {}", got.len(), brute.len()))?;
    }
    Ok("grid(3) has 5 distances; k = 3..30 match the pair loop".into())
}

fn quadruple_identity() -> Outcome {
    let square = points(Generator::Grid { k: 2 }, 0);
    let s = distance_statistics(&square).unwrap();
    let brute = quadruples_bruteforce(&square, 50).unwrap();
    ensure(s.quadruple_count == 68 && brute == 68, || format!("unit square: {} and {brute}", s.quadruple_count))?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for trial in 0..50 {
        let n = rng.gen_range(1..=12);
        let bound = rng.gen_range(1..=3);
        let pts = points(Generator::Random { n, bound }, rng.gen());
        let hist = distance_statistics(&pts).unwrap().quadruple_count;
        let brute = quadruples_bruteforce(&pts, 50).unwrap();
        ensure(hist == brute, || format!("set {trial} (n = {n}): histogram {hist}, enumeration {brute}"))?;
    }
    Ok("unit square 68 both ways; 50 random sets agree".into())
}

fn growth_set_reductions() -> Outcome {
    let a: BTreeSet<GR> = [0, 1, 2].map(GR::from_int).into_iter().collect();
    let g = growth_sets(&a);
    let sizes = (g.plus_set.len(), g.minus_set.len(), g.product_set.len());
    ensure(sizes == (6, 7, 7), || format!("sizes {sizes:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for trial in 0..20 {
        let size = rng.gen_range(1..=8);
        let mut a = BTreeSet::new();
        while a.len() < size {
            a.insert(if trial % 2 == 0 { GR::from_int(rng.gen_range(-10..=10)) } else { rand_gr(&mut rng, 6, 3) });
        }
        let c = check_reductions(&a).unwrap();
        ensure(c.plus && c.minus && c.product, || format!("set {a:?}: {c:?}"))?;
    }
    Ok("{0,1,2} gives (6, 7, 7); 20 random sets reduce exactly".into())
}

/// Point sets for the cap and counting criteria, all with `|P| ≤ 15`.
fn tested_sets() -> Vec<(&'static str, Vec<PointC2>)> {
    let shift = PointC2::int(1, 1);
    let a: BTreeSet<GR> = [0, 1, 2].map(GR::from_int).into_iter().collect();
    vec![
        ("grid(3)", points(Generator::Grid { k: 3 }, 0)),
        ("grid(3)+(1,1)", points(Generator::Grid { k: 3 }, 0).iter().map(|p| p.translate(&shift)).collect()),
        ("3x5 rectangle+(1,1)", (1..=3).flat_map(|x| (1..=5).map(move |y| PointC2::int(x, y))).collect()),
        ("isotropic(15)", points(Generator::Isotropic { m: 15, sign: Sign::Plus, k: GR::one() }, 0)),
        (
            "product of {0,1,2}",
            points(Generator::Product { set: SetSpec::Explicit(a.into_iter().collect()), variant: ProductVariant::Product }, 0),
        ),
        ("random(12)", points(Generator::Random { n: 12, bound: 10 }, 12)),
        ("random(15)", points(Generator::Random { n: 15, bound: 10 }, 15)),
    ]
}

fn richness_caps(sets: &[(&str, Vec<PointC2>)]) -> Outcome {
    let mut plane_checked = 0;
    for (name, pts) in sets {
        let n = pts.len();
        let lines = esgk_family(pts).unwrap().lines;
        let report = rich_points(&lines).unwrap();
        ensure(report.max_richness <= n, || format!("{name}: max richness {} > {n}", report.max_richness))?;
        let avoids = pts.iter().all(|p| !isotropic_key(p, Sign::Plus).is_zero() && !isotropic_key(p, Sign::Minus).is_zero());
        if avoids {
            plane_checked += 1;
            for w in rich_planes(&lines, 2 * n + 1).iter().filter(|w| !w.surface.is_bad()) {
                let recount = lines.iter().filter(|l| w.surface.contains_line(l)).count();
                return Err(format!("{name}: plane {:?} holds {recount} > {} lines", w.surface, 2 * n));
            }
        }
        let (quadrics, _, truncated) = rich_quadrics(&lines, 6 * n + 1, DEFAULT_TRIPLE_CAP);
        ensure(!truncated, || format!("{name}: triple budget exhausted"))?;
        if let Some(w) = quadrics.first() {
            return Err(format!("{name}: quadric {:?} holds {} > {} lines", w.surface, w.lines.len(), 6 * n));
        }
    }
    Ok(format!("{} sets; plane cap applied to {plane_checked}", sets.len()))
}

fn parallel_pairs(sets: &[(&str, Vec<PointC2>)]) -> Outcome {
    let square = points(Generator::Grid { k: 2 }, 0);
    let sq = parallel_pair_count(&square);
    ensure(sq == 20, || format!("unit square: {sq}"))?;
    for (name, pts) in sets.iter().chain([&("unit square", square.clone())]) {
        let n = pts.len() as u64;
        let hist = parallel_pair_count(pts);
        let brute = parallel_pairs_bruteforce(&esgk_family(pts).unwrap().lines);
        ensure(hist == brute && hist <= n.pow(3), || format!("{name}: histogram {hist}, pairwise {brute}, |P|³ = {}", n.pow(3)))?;
    }
    Ok(format!("unit square 20; {} sets agree and stay ≤ |P|³", sets.len() + 1))
}

fn counting_inequalities(sets: &[(&str, Vec<PointC2>)]) -> Outcome {
    let mut families: Vec<(String, Vec<LineC3>)> =
        sets.iter().map(|(name, pts)| (name.to_string(), esgk_family(pts).unwrap().lines)).collect();
    if let Dataset::Lines(l) = generate(&Generator::PlantedPlanes { planes: 3, per: 20, extra: 40 }, 10).unwrap() {
        families.push(("planted planes".into(), l));
    }
    let mut runs = 0;
    for (name, lines) in &families {
        let m = lines.len();
        let report = rich_points(lines).unwrap();
        for r in (2 * m).max(2)..=(2 * m).max(report.max_richness) {
            ensure(report.rich_count(r) * r <= 2 * m, || format!("{name}: |P_{r}| = {}", report.rich_count(r)))?;
        }
        let start = ((2.0 * (m as f64).sqrt()).ceil() as usize).max(2);
        for r in start..=report.max_richness.max(start) {
            ensure(report.rich_count(r) * r <= 2 * m, || format!("{name}: |P_{r}| = {} with r ≥ 2√m", report.rich_count(r)))?;
        }
        let a_plane = start;
        let s = rich_surfaces(lines, a_plane, DEFAULT_TRIPLE_CAP).unwrap();
        ensure(s.planes.len() * a_plane <= 2 * m, || format!("{name}: {} planes at A = {a_plane}", s.planes.len()))?;
        let a_both = ((8.0 * (m as f64).sqrt()).ceil() as usize).max(2);
        let s = rich_surfaces(lines, a_both, DEFAULT_TRIPLE_CAP).unwrap();
        ensure(!s.truncated, || format!("{name}: triple budget exhausted"))?;
        let total = s.planes.len() + s.quadrics.len();
        ensure(total * a_both <= 2 * m, || format!("{name}: {total} surfaces at A = {a_both}"))?;
        runs += 2;
    }
    Ok(format!("{} line sets, {runs} surface runs", families.len()))
}

fn rand_line_coords(rng: &mut ChaCha8Rng) -> StandardLineCoords {
    StandardLineCoords::from_array(std::array::from_fn(|_| rand_rational(rng, 4, 2)))
}

fn rand_real_poly(rng: &mut ChaCha8Rng, terms: usize, max_degree: u32) -> MultiPoly {
    let mut out = MultiPoly::zero(6);
    for _ in 0..terms {
        let mut e = vec![0u32; 6];
        for _ in 0..rng.gen_range(0..=max_degree) {
            e[rng.gen_range(0..6)] += 1;
        }
        let c = GR::from_int(rng.gen_range(-5..=5));
        out = out.add(&MultiPoly::from_terms(6, [(e, c)]).unwrap()).unwrap();
    }
    out
}

fn linear(constant: Rational, coeffs: [(usize, Rational); 3]) -> MultiPoly {
    let mut terms = vec![(vec![0u32; 6], GR::real(constant))];
    for (v, c) in coeffs {
        let mut e = vec![0u32; 6];
        e[v] = 1;
        terms.push((e, GR::real(c)));
    }
    MultiPoly::from_terms(6, terms).unwrap()
}

/// Real and imaginary parts of `z₂ − a − c·z₁` and `z₃ − b − d·z₁`, which
/// vanish on the line.
fn vanishing_forms(g: &StandardLineCoords) -> [MultiPoly; 4] {
    let re = |u1: &Rational, v1: &Rational, v2: &Rational, z: usize| {
        linear(-u1, [(z, r(1)), (0, -v1), (1, v2.clone())])
    };
    let im = |u2: &Rational, v1: &Rational, v2: &Rational, z: usize| {
        linear(-u2, [(z + 1, r(1)), (1, -v1), (0, -v2)])
    };
    [re(&g.a1, &g.c1, &g.c2, 2), im(&g.a2, &g.c1, &g.c2, 2), re(&g.b1, &g.d1, &g.d2, 4), im(&g.b2, &g.d1, &g.d2, 4)]
}

fn vanishes_on_line(f: &RealPoly6, g: &StandardLineCoords) -> bool {
    (0..4).all(|s| (0..4).all(|t| f.eval(&phi(g, &r(s), &r(t))).is_zero()))
}

fn dot6(a: &RealPoint6, b: &RealPoint6) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| &acc + &(x * y))
}

fn rand_c3(rng: &mut ChaCha8Rng) -> [GR; 3] {
    std::array::from_fn(|_| rand_gr(rng, 5, 2))
}

fn real_geometry_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut contained = 0;
    for trial in 0..1000 {
        let g = rand_line_coords(&mut rng);
        let f = if trial % 2 == 0 {
            let forms = vanishing_forms(&g);
            let mut f = MultiPoly::zero(6);
            for form in forms.iter().take(rng.gen_range(1..=2)) {
                f = f.add(&form.mul(&rand_real_poly(&mut rng, 3, 2)).unwrap()).unwrap();
            }
            f
        } else {
            rand_real_poly(&mut rng, 6, 3)
        };
        if f.is_zero() {
            continue;
        }
        let f = RealPoly6::new(f).unwrap();
        let conditions = line_membership_conditions(&f).unwrap();
        let lhs = conditions_hold(&conditions, &g);
        let rhs = vanishes_on_line(&f, &g);
        ensure(lhs == rhs, || format!("membership trial {trial}: conditions {lhs}, direct {rhs}"))?;
        contained += rhs as usize;
    }
    ensure(contained >= 300, || format!("only {contained} containing trials"))?;

    for _ in 0..200 {
        let g = rand_line_coords(&mut rng);
        let line = g_inverse(&g);
        ensure(g_coords(&line).unwrap() == g, || format!("chart round trip failed at {g:?}"))?;
        let (p, q) = (PointC3::new(rand_gr(&mut rng, 5, 2), rand_gr(&mut rng, 5, 2), rand_gr(&mut rng, 5, 2)), PointC3::new(rand_gr(&mut rng, 5, 2), rand_gr(&mut rng, 5, 2), rand_gr(&mut rng, 5, 2)));
        let q = if rng.gen_range(0..4) == 0 { PointC3::new(p.x().clone(), q.y().clone(), q.z().clone()) } else { q };
        if p == q {
            continue;
        }
        let common = common_standard_line(&p, &q).unwrap();
        let through = LineC3::through(&p, &q).unwrap();
        match common {
            Some(c) => {
                let l = g_inverse(&c);
                ensure(l == through && l.contains(&p) && l.contains(&q), || format!("common line wrong for {p:?}, {q:?}"))?;
            }
            None => ensure(!through.is_standard(), || format!("missed the standard line through {p:?}, {q:?}"))?,
        }
    }

    let mut cases = [0usize; 3];
    for trial in 0..600 {
        let p = rand_c3(&mut rng);
        let (d1, d2) = (rand_c3(&mut rng), rand_c3(&mut rng));
        let (Ok(l), Ok(l2)) = (LineC3::new(&p, &d1), LineC3::new(&p, &d2)) else { continue };
        if l.is_parallel(&l2) {
            continue;
        }
        let m = match trial % 3 {
            0 => LineC3::new(&p, &rand_c3(&mut rng)),
            1 => {
                let (al, be, ga, de) = (rand_gr(&mut rng, 5, 2), rand_gr(&mut rng, 5, 2), rand_gr(&mut rng, 5, 2), rand_gr(&mut rng, 5, 2));
                let base: [GR; 3] = std::array::from_fn(|k| &(&p[k] + &(&al * &d1[k])) + &(&be * &d2[k]));
                let dir: [GR; 3] = std::array::from_fn(|k| &(&ga * &d1[k]) + &(&de * &d2[k]));
                LineC3::new(&base, &dir)
            }
            _ => LineC3::new(&rand_c3(&mut rng), &rand_c3(&mut rng)),
        };
        let Ok(m) = m else { continue };
        let h = hairbrush_check(&l, &l2, &m).unwrap();
        ensure(h.holds(), || format!("hairbrush law fails for m = {m:?}: {h:?}"))?;
        cases[trial % 3] += (h.through_point || h.in_plane || h.meets_both) as usize;
    }
    ensure(cases[0] > 100 && cases[1] > 100, || format!("too few planted hairbrush cases: {cases:?}"))?;

    for _ in 0..100 {
        let f = RealPoly6::new(rand_real_poly(&mut rng, 6, 3)).unwrap();
        let p: RealPoint6 = std::array::from_fn(|_| rand_rational(&mut rng, 3, 2));
        let Ok(frame) = complex_tangent_frame(&f, &p) else { continue };
        ensure(frame.j_gradient == apply_j(&frame.gradient), || "J∇f mismatch".into())?;
        for e in &frame.e_vectors {
            ensure(dot6(e, &frame.gradient).is_zero() && dot6(e, &frame.j_gradient).is_zero(), || format!("E not orthogonal at {p:?}"))?;
        }
        for v in &frame.v_basis {
            ensure(dot6(v, &frame.gradient).is_zero() && dot6(v, &frame.j_gradient).is_zero(), || "V basis not orthogonal".into())?;
        }
    }

    for _ in 0..20 {
        let c: [Rational; 6] = std::array::from_fn(|_| rand_rational(&mut rng, 5, 1));
        if c.iter().all(Rational::is_zero) {
            continue;
        }
        let p: RealPoint6 = std::array::from_fn(|_| rand_rational(&mut rng, 3, 2));
        let offset = -&dot6(&c, &p);
        let terms = (0..6).map(|k| {
            let mut e = vec![0u32; 6];
            e[k] = 1;
            (e, c[k].clone())
        });
        let h = RealPoly6::from_terms(terms.chain([(vec![0; 6], offset)])).unwrap();
        ensure(ruled_at_point(&h, &p).unwrap(), || format!("hyperplane not ruled at {p:?}"))?;
    }
    let sphere = RealPoly6::from_terms((0..6).map(|k| {
        let mut e = vec![0u32; 6];
        e[k] = 2;
        (e, r(1))
    }).chain([(vec![0; 6], r(-1))])).unwrap();
    for p in [[Rational::new(3, 5), Rational::new(4, 5), r(0), r(0), r(0), r(0)], [r(0), r(0), r(0), r(1), r(0), r(0)], [Rational::new(1, 2), Rational::new(1, 2), Rational::new(1, 2), Rational::new(1, 2), r(0), r(0)]] {
        ensure(!ruled_at_point(&sphere, &p).unwrap(), || format!("sphere ruled at {p:?}"))?;
    }
    Ok(format!("1000 membership trials ({contained} containing), chart, common lines, hairbrush, frames, ruled test"))
}

fn planted_structure() -> Outcome {
    let seed = 10;
    let Dataset::Lines(lines) = generate(&Generator::PlantedPlanes { planes: 3, per: 20, extra: 40 }, seed).unwrap() else {
        unreachable!()
    };
    let planted: BTreeSet<_> = planted_plane_list(seed, 3).into_iter().collect();
    let s = rich_surfaces(&lines, 10, DEFAULT_TRIPLE_CAP).unwrap();
    let found: BTreeSet<_> = s.planes.iter().map(|w| w.surface.clone()).collect();
    ensure(found == planted, || format!("found {} planes, planted {}", found.len(), planted.len()))?;
    ensure(s.planes.iter().all(|w| w.lines.len() == 20), || "planted plane with a wrong line count".into())?;
    ensure(s.quadrics.is_empty() && !s.truncated, || format!("{} quadrics, truncated {}", s.quadrics.len(), s.truncated))?;

    // Independent recount: every pairwise intersection, exact, no screening.
    let mut through: std::collections::BTreeMap<PointC3, BTreeSet<usize>> = Default::default();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if let LinePairRelation::Intersecting { point, .. } = line_pair_relation(&lines[i], &lines[j]) {
                through.entry(point).or_default().extend([i, j]);
            }
        }
    }
    let mut residuals = Vec::new();
    for r in [2, 3, 5] {
        let report = structure_report(&lines, r, 0.1).unwrap();
        let r_prime = 2.max(r.div_ceil(3));
        let residual = through
            .values()
            .filter(|v| v.len() >= r)
            .filter(|v| !report.planes.iter().any(|w| w.lines.iter().filter(|l| v.contains(l)).count() >= r_prime))
            .count();
        ensure(report.residual == residual, || format!("r = {r}: residual {} vs recount {residual}", report.residual))?;
        residuals.push(residual);
    }
    Ok(format!("3 planted planes recovered; residuals {residuals:?} for r = 2, 3, 5 match recount"))
}

fn run_cli(args: &[&str], dir: &Path, out: &str, threads: usize) -> Result<Vec<u8>, String> {
    let path = dir.join(format!("{out}.t{threads}"));
    let status = Command::new(env!("CARGO_BIN_EXE_cxdist"))
        .args(args)
        .args(["--seed", "7", "--threads", &threads.to_string(), "--out"])
        .arg(&path)
        .current_dir(dir)
        .status()
        .map_err(|e| e.to_string())?;
    ensure(status.code() == Some(0), || format!("`cxdist {}` exited with {status}", args.join(" ")))?;
    std::fs::read(&path).map_err(|e| e.to_string())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    let setup: [&[&str]; 3] = [
        &["gen", "random", "--n", "8", "--bound", "10", "--out", "pts.json", "--seed", "3"],
        &["gen", "grid", "--k", "3", "--out", "grid.json"],
        &["gen", "planted-planes", "--planes", "2", "--per", "8", "--extra", "10", "--out", "planted.json", "--seed", "3"],
    ];
    for args in setup {
        let status = Command::new(env!("CARGO_BIN_EXE_cxdist")).args(args).current_dir(d).status().map_err(|e| e.to_string())?;
        ensure(status.success(), || format!("setup `{}` failed", args.join(" ")))?;
    }
    let commands: Vec<Vec<&str>> = vec![
        vec!["gen", "grid", "--k", "4"],
        vec!["gen", "isotropic", "--m", "5", "--sign", "-", "--k", "1+i"],
        vec!["gen", "product", "--size", "4", "--bound", "6", "--variant", "minus"],
        vec!["gen", "random", "--n", "20", "--bound", "30"],
        vec!["gen", "planted-planes", "--planes", "3", "--per", "6", "--extra", "5", "--format", "csv"],
        vec!["distances", "--points", "pts.json"],
        vec!["distances", "--points", "grid.json", "--format", "csv"],
        vec!["esgk", "--points", "pts.json"],
        vec!["rich", "--points", "pts.json"],
        vec!["rich", "--lines", "planted.json", "--format", "csv"],
        vec!["surfaces", "--lines", "planted.json", "--threshold", "5"],
        vec!["surfaces", "--points", "pts.json", "--threshold", "12", "--format", "csv"],
        vec!["structure", "--lines", "planted.json", "--r", "3"],
        vec!["sumprod", "--size", "5", "--bound", "8"],
        vec!["sumprod", "--set", "0,1,2,i", "--format", "csv"],
        vec!["verify", "--points", "pts.json"],
        vec!["verify", "--lines", "planted.json", "--format", "csv"],
        vec!["report", "distances", "--kmin", "3", "--kmax", "8"],
        vec!["report", "rich", "--n", "6", "--bound", "20"],
        vec!["report", "isotropic", "--mmax", "6", "--format", "csv"],
        vec!["report", "structure", "--lines", "planted.json", "--r", "2,4"],
    ];
    for (k, args) in commands.iter().enumerate() {
        let one = run_cli(args, d, &format!("out{k}"), 1)?;
        let eight = run_cli(args, d, &format!("out{k}"), 8)?;
        let again = run_cli(args, d, &format!("out{k}"), 8)?;
        ensure(one == eight && eight == again && !one.is_empty(), || format!("`cxdist {}` differs across runs", args.join(" ")))?;
    }
    // `esgk --lines-out` writes a second file.
    let mut lines_out = Vec::new();
    for threads in [1, 8] {
        let target = format!("lines{threads}.json");
        run_cli(&["esgk", "--points", "pts.json", "--lines-out", &target], d, "esgk-lines", threads)?;
        lines_out.push(std::fs::read(d.join(&target)).map_err(|e| e.to_string())?);
    }
    ensure(lines_out[0] == lines_out[1], || "esgk line files differ".into())?;
    Ok(format!("{} commands byte-identical at 1 and 8 threads", commands.len() + 1))
}

fn main() {
    let sets = tested_sets();
    let criteria: Vec<(&str, Option<Duration>, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("coplanarity criterion", Some(Duration::from_secs(10)), Box::new(coplanarity_criterion)),
        ("bad-plane criterion", Some(Duration::from_secs(5)), Box::new(bad_plane_criterion)),
        ("grid distances", Some(Duration::from_secs(60)), Box::new(grid_distances)),
        ("quadruple identity", None, Box::new(quadruple_identity)),
        ("growth-set reductions", None, Box::new(growth_set_reductions)),
        ("richness caps", Some(Duration::from_secs(60)), Box::new(|| richness_caps(&sets))),
        ("parallel pairs", None, Box::new(|| parallel_pairs(&sets))),
        ("counting inequalities", None, Box::new(|| counting_inequalities(&sets))),
        ("real-geometry suite", Some(Duration::from_secs(30)), Box::new(real_geometry_suite)),
        ("planted structure recovery", None, Box::new(planted_structure)),
        ("determinism", None, Box::new(determinism)),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {:.2} s, limit {} s", elapsed.as_secs_f64(), limit.as_secs())),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{:.2} s]", elapsed.as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail} [{:.2} s]", elapsed.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
