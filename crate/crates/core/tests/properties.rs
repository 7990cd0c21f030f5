use std::collections::BTreeSet;

use proptest::prelude::*;

use cxdist::algebra::{modp, Rational, GR};
use cxdist::complex_plane::{
    check_reductions, delta, distance_statistics, isotropic_key, quadruples_bruteforce, PointC2, Sign,
};
use cxdist::esgk::{esgk_family, esgk_line, parallel_pair_count, parallel_pairs_bruteforce, special_point};
use cxdist::incidence::{incidence_count, rich_points};
use cxdist::lines::{fit_quadrics, line_pair_relation, LineC3, PlaneC3, PointC3};
use cxdist::real_geometry::{apply_j, g_coords, g_inverse, phi, point_to_real, real_to_point, StandardLineCoords};

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=6).prop_map(|(n, d)| Rational::new(n, d))
}

fn gr() -> impl Strategy<Value = GR> {
    (rational(), rational()).prop_map(|(re, im)| GR::new(re, im))
}

fn small_gr() -> impl Strategy<Value = GR> {
    (-3i64..=3, -3i64..=3).prop_map(|(a, b)| GR::int(a, b))
}

fn point() -> impl Strategy<Value = PointC2> {
    (gr(), gr()).prop_map(|(x, y)| PointC2::new(x, y))
}

/// Points on a small integer lattice, so that coincidences are common.
fn lattice_point() -> impl Strategy<Value = PointC2> {
    (small_gr(), small_gr()).prop_map(|(x, y)| PointC2::new(x, y))
}

fn lattice_set(max: usize) -> impl Strategy<Value = Vec<PointC2>> {
    prop::collection::btree_set(lattice_point(), 1..=max).prop_map(|s| s.into_iter().collect())
}

fn vec3() -> impl Strategy<Value = [GR; 3]> {
    (gr(), gr(), gr()).prop_map(|(a, b, c)| [a, b, c])
}

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn field_operations(a in gr(), b in gr()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &b, &b * &a);
        if let Some(inv) = a.inv() {
            prop_assert!((&a * &inv).is_one());
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn rational_order_matches_floats(a in rational(), b in rational()) {
        if a < b {
            prop_assert!(a.to_f64() < b.to_f64());
        }
        prop_assert_eq!(a == b, a.cmp(&b).is_eq());
    }

    #[test]
    fn text_and_json_round_trip(a in gr()) {
        let back: GR = a.to_string().parse().unwrap();
        prop_assert_eq!(&back, &a);
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<GR>(&json).unwrap(), a);
    }

    #[test]
    fn reduction_is_a_ring_map(a in gr(), b in gr()) {
        let (ra, rb) = (modp::from_gr(&a).unwrap(), modp::from_gr(&b).unwrap());
        prop_assert_eq!(modp::from_gr(&(&a + &b)).unwrap(), modp::add(ra, rb));
        prop_assert_eq!(modp::from_gr(&(&a * &b)).unwrap(), modp::mul(ra, rb));
        prop_assert_eq!(modp::from_gr(&GR::i()).unwrap(), modp::I);
    }

    #[test]
    fn delta_symmetric_and_translation_invariant(p in point(), q in point(), v in point()) {
        prop_assert_eq!(delta(&p, &q), delta(&q, &p));
        prop_assert_eq!(delta(&p.translate(&v), &q.translate(&v)), delta(&p, &q));
        prop_assert!(delta(&p, &p).is_zero());
    }

    #[test]
    fn isotropic_pairs_have_zero_distance(p in point(), t in gr(), s in sign()) {
        let q = PointC2::new(&p.x + &t, &p.y + &(&s.slope() * &t));
        prop_assert!(delta(&p, &q).is_zero());
        prop_assert_eq!(isotropic_key(&p, s), isotropic_key(&q, s));
    }

    #[test]
    fn histogram_counts_every_pair(pts in lattice_set(10)) {
        let s = distance_statistics(&pts).unwrap();
        let n = pts.len() as u64;
        prop_assert_eq!(s.nonzero_pairs() + s.zero_pairs, n * (n - 1));
        prop_assert_eq!(s.quadruple_count, quadruples_bruteforce(&pts, 50).unwrap());
    }

    #[test]
    fn coplanar_iff_equal_distance(a in lattice_point(), b in lattice_point(), c in lattice_point(), d in lattice_point()) {
        prop_assume!((&a, &c) != (&b, &d));
        let rel = line_pair_relation(&esgk_line(&a, &c), &esgk_line(&b, &d));
        prop_assert_eq!(rel.is_coplanar(), delta(&a, &b) == delta(&c, &d));
    }

    #[test]
    fn pencils_meet_at_the_special_point(a in point(), c in point(), s in sign()) {
        let k = isotropic_key(&c, s);
        prop_assert!(esgk_line(&a, &c).contains(&special_point(&a, s, &k)));
    }

    #[test]
    fn parallel_count_matches_pairs(pts in lattice_set(7)) {
        let lines = esgk_family(&pts).unwrap().lines;
        let n = pts.len() as u64;
        let hist = parallel_pair_count(&pts);
        prop_assert_eq!(hist, parallel_pairs_bruteforce(&lines));
        prop_assert!(hist <= n.pow(3));
    }

    #[test]
    fn rich_points_are_exact_and_capped(pts in lattice_set(6)) {
        let lines = esgk_family(&pts).unwrap().lines;
        let report = rich_points(&lines).unwrap();
        prop_assert!(report.max_richness <= pts.len());
        for (p, through) in &report.incidences {
            prop_assert!(through.iter().all(|&k| lines[k].contains(p)));
            prop_assert_eq!(incidence_count(&lines, p), through.len());
        }
    }

    #[test]
    fn canonical_lines_ignore_parametrization(p in vec3(), d in vec3(), k in gr(), t in gr()) {
        prop_assume!(!k.is_zero() && d.iter().any(|x| !x.is_zero()));
        let l = LineC3::new(&p, &d).unwrap();
        let q = l.point_at(&t);
        let scaled = [&d[0] * &k, &d[1] * &k, &d[2] * &k];
        prop_assert_eq!(&LineC3::new(&q.0, &scaled).unwrap(), &l);
        prop_assert!(l.contains(&PointC3(p.clone())) && l.contains(&q));
    }

    #[test]
    fn planes_contain_their_lines(n in vec3(), p in vec3(), u in vec3()) {
        prop_assume!(n.iter().any(|x| !x.is_zero()));
        let plane = PlaneC3::through_point(&n, &p).unwrap();
        // Project `u` into the plane's direction space.
        let w = cxdist::lines::cross(&n, &u);
        prop_assume!(w.iter().any(|x| !x.is_zero()));
        let l = LineC3::new(&p, &w).unwrap();
        prop_assert!(plane.contains_line(&l));
        prop_assert!(plane.contains_point(&PointC3(p)));
    }

    #[test]
    fn fitted_quadrics_contain_the_lines(a in vec3(), b in vec3(), c in vec3(), d in vec3(), e in vec3(), f in vec3()) {
        let lines: Vec<LineC3> = [(a, b), (c, d), (e, f)].iter().filter_map(|(p, v)| LineC3::new(p, v).ok()).collect();
        for q in fit_quadrics(&lines).unwrap() {
            prop_assert!(lines.iter().all(|l| q.contains_line(l)));
        }
    }

    #[test]
    fn growth_sets_reduce_to_distance_sets(a in prop::collection::btree_set(small_gr(), 1..=5)) {
        let c = check_reductions(&a.into_iter().collect::<BTreeSet<_>>()).unwrap();
        prop_assert!(c.plus && c.minus && c.product);
    }

    #[test]
    fn chart_round_trip(v in prop::array::uniform8(rational())) {
        let g = StandardLineCoords::from_array(v);
        let line = g_inverse(&g);
        prop_assert!(line.is_standard());
        prop_assert_eq!(g_coords(&line).unwrap(), g);
    }

    #[test]
    fn phi_parametrizes_the_line(v in prop::array::uniform8(rational()), s in rational(), t in rational()) {
        let g = StandardLineCoords::from_array(v);
        let p = real_to_point(&phi(&g, &s, &t));
        prop_assert!(g_inverse(&g).contains(&p));
        prop_assert_eq!(point_to_real(&p), phi(&g, &s, &t));
    }

    #[test]
    fn j_squares_to_minus_identity(v in prop::array::uniform6(rational())) {
        let jj = apply_j(&apply_j(&v));
        prop_assert!(jj.iter().zip(&v).all(|(a, b)| a == &-b));
        // J is multiplication by i.
        let p = real_to_point(&v);
        let ip = PointC3::new(p.x().mul_i(), p.y().mul_i(), p.z().mul_i());
        prop_assert_eq!(point_to_real(&ip), apply_j(&v));
    }
}
