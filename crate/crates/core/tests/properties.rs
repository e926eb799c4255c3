use proptest::prelude::*;

use lorenz_chaos::density::{empirical_density, DensityConfig};
use lorenz_chaos::leo::{cover_test, leo_test, merge_intervals, subintervals, Interval, IntervalList, LeoConfig};
use lorenz_chaos::maps::{
    beta_discontinuity, eval_beta, nlcnv_critical_points, BetaParams, CnvParams, IntervalMap, MapSpec, NlCnvParams,
    PlCnvParams,
};
use lorenz_chaos::sweep::{cnv_sweep, CellClass, SweepConfig, TestKind};
use lorenz_chaos::transitivity::{num_trans_test, TransitivityConfig};

fn triangle_point() -> impl Strategy<Value = BetaParams> {
    (1.0001f64..=2.0, 0.0f64..1.0).prop_filter_map("outside triangle", |(beta, alpha)| BetaParams::new(beta, alpha).ok())
}

fn pl_shape() -> impl Strategy<Value = PlCnvParams> {
    (0.05f64..3.0, 0.05f64..3.0, 0.01f64..0.99, 0.01f64..0.99)
        .prop_map(|(m0, m1, a, d)| PlCnvParams::new(m0, m1, a, d, 0.0, 0.0).unwrap())
}

fn nl_shape() -> impl Strategy<Value = NlCnvParams> {
    (0.1f64..4.0, 0.01f64..0.99).prop_map(|(mu, a)| {
        let (lo, hi) = nlcnv_critical_points(a);
        NlCnvParams::new(mu, a, 0.5 * (lo + hi), 0.0, 0.0).unwrap()
    })
}

/// A shape with a valid `[b, c)` drawn from its monotone window.
fn valid_cnv() -> impl Strategy<Value = (CnvParams, f64, f64)> {
    let shape = prop_oneof![pl_shape().prop_map(CnvParams::Pl), nl_shape().prop_map(CnvParams::Nl)];
    (shape, 0.0f64..1.0, 0.0f64..1.0).prop_filter_map("no invariant interval", |(shape, u, v)| {
        let (lo, hi) = shape.monotone_window();
        let d = shape.d();
        let b = lo + u * (d - lo);
        let c = d + v * (hi - d);
        shape.check_invariant_conditions(b, c).then_some((shape, b, c))
    })
}

fn interval_list() -> impl Strategy<Value = IntervalList> {
    prop::collection::vec((-1.0f64..2.0, prop_oneof![Just(0.0), 0.0f64..0.5]), 1..16)
        .prop_map(|v| IntervalList::new(v.into_iter().map(|(a, len)| Interval::new(a, a + len)).collect()))
}

proptest! {
    #[test]
    fn beta_range_and_monotone_branches(p in triangle_point()) {
        let disc = beta_discontinuity(&p);
        let mut prev: Option<(f64, f64)> = None;
        for i in 0..2000 {
            let x = i as f64 / 2000.0;
            let y = eval_beta(&p, x).unwrap();
            prop_assert!((0.0..1.0).contains(&y), "T({x}) = {y}");
            if let Some((px, py)) = prev {
                if (px < disc) == (x < disc) {
                    prop_assert!(y > py, "not increasing at {x}");
                }
            }
            prev = Some((x, y));
        }
    }

    #[test]
    fn plcnv_continuous_at_junctions(p in pl_shape()) {
        let (jmin, jmax) = p.junction_points();
        for j in [jmin, jmax] {
            let left = p.nonlinearity(j - 1e-13);
            let right = p.nonlinearity(j + 1e-13);
            prop_assert!((left - right).abs() < 1e-12, "jump {} at {j}", (left - right).abs());
        }
    }

    #[test]
    fn cnv_maps_interval_into_itself((shape, b, c) in valid_cnv()) {
        let map = MapSpec::cnv(shape.with_endpoints(b, c).unwrap()).unwrap();
        let g = map.as_cnv().unwrap();
        for i in 0..1000 {
            let x = b + (c - b) * i as f64 / 1000.0;
            let y = g.eval(x);
            prop_assert!(y >= b && y < c, "g({x}) = {y} outside [{b}, {c})");
        }
    }

    #[test]
    fn nlcnv_is_expanding(p in nl_shape(), u in 0.0f64..1.0, v in 0.0f64..1.0) {
        let shape = CnvParams::Nl(p);
        let (lo, hi) = shape.monotone_window();
        let d = shape.d();
        let (b, c) = (lo + u * (d - lo), d + v * (hi - d));
        prop_assume!(shape.check_invariant_conditions(b, c));
        let g = shape.with_endpoints(b, c).unwrap();
        let h = 1e-7 * (c - b);
        for i in 0..1000 {
            let x = b + (c - b) * (i as f64 + 0.5) / 1000.0;
            if x < d && x + h >= d {
                continue;
            }
            prop_assert!((g.eval(x + h) - g.eval(x)) / h > 1.0, "slope ≤ 1 at {x}");
        }
    }

    #[test]
    fn nlcnv_validity_is_symmetric(p in nl_shape(), u in -0.1f64..1.1, v in -0.1f64..1.1) {
        let shape = CnvParams::Nl(p);
        let (lo, hi) = shape.monotone_window();
        let d = shape.d();
        let (b, c) = (lo + u * (d - lo), d + v * (hi - d));
        prop_assert_eq!(
            shape.check_invariant_conditions(b, c),
            shape.check_invariant_conditions(2.0 * d - c, 2.0 * d - b)
        );
    }

    #[test]
    fn bc_round_trip((shape, b, c) in valid_cnv()) {
        let (b2, c2) = shape.with_endpoints(b, c).unwrap().invariant_interval();
        prop_assert!((b2 - b).abs() <= 1e-12 && (c2 - c).abs() <= 1e-12);
    }

    #[test]
    fn merge_is_idempotent_disjoint_and_faithful(list in interval_list(), probes in prop::collection::vec(-1.5f64..3.0, 32)) {
        let tol = 1e-12;
        let merged = merge_intervals(&list, tol).unwrap();
        prop_assert_eq!(&merge_intervals(&merged, tol).unwrap(), &merged);
        for w in merged.items.windows(2) {
            prop_assert!(w[1].lo > w[0].hi + tol);
        }
        for iv in &list.items {
            prop_assert!(merged.contains(iv.lo) && merged.contains(iv.hi));
        }
        for u in probes {
            if list.contains(u) {
                prop_assert!(merged.contains(u));
            }
            if list.distance(u) > tol {
                prop_assert!(!merged.contains(u));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn leo_is_conjunction_of_cover_tests(p in triangle_point(), m in 1usize..12) {
        let map = MapSpec::beta(p);
        let cfg = LeoConfig { subdivisions: m, ..Default::default() };
        let c = map.discontinuity;
        let all = subintervals(0.0, 1.0, m).all(|(x, y)| cover_test(&map, c, x, y, 0.0, 1.0, &cfg).unwrap());
        prop_assert_eq!(leo_test(&map, c, 0.0, 1.0, &cfg).unwrap(), all);
    }

    #[test]
    fn transitivity_is_deterministic_and_monotone_in_trials(p in triangle_point(), seed in any::<u64>()) {
        let map = MapSpec::beta(p);
        let base = TransitivityConfig { iterations: 5000, num_trials: 2, transient: 50, bins: 200, seed };
        let first = num_trans_test(&map, 0.0, 1.0, &base).unwrap();
        prop_assert_eq!(first, num_trans_test(&map, 0.0, 1.0, &base).unwrap());
        if first {
            let more = TransitivityConfig { num_trials: 5, ..base };
            prop_assert!(num_trans_test(&map, 0.0, 1.0, &more).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    // Support of the empirical density against the transitivity verdict,
    // with matching bins and orbit length.
    #[test]
    fn density_support_matches_transitivity(p in triangle_point(), seed in any::<u64>()) {
        let map = MapSpec::beta(p);
        let tcfg = TransitivityConfig::with_seed(seed);
        let dcfg = DensityConfig { iterations: tcfg.iterations * tcfg.num_trials, transient: tcfg.transient, bins: tcfg.bins, seed };
        let d = empirical_density(&map, 0.0, 1.0, &dcfg).unwrap();
        prop_assert!((d.total_mass() - 1.0).abs() <= 1e-9);
        let measure = d.support_measure();
        if num_trans_test(&map, 0.0, 1.0, &tcfg).unwrap() {
            prop_assert!(measure >= 0.999, "transitive but support {measure}");
        } else {
            prop_assert!(measure < 1.0 - d.bin_width(), "non-transitive but support {measure}");
        }
    }
}

#[test]
fn nlcnv_sweep_is_symmetric_under_reflection() {
    let (lo, hi) = nlcnv_critical_points(0.2);
    let shape = CnvParams::Nl(NlCnvParams::new(1.0, 0.2, 0.5 * (lo + hi), 0.0, 0.0).unwrap());
    let r = cnv_sweep(shape, 30, 9, &SweepConfig::new(TestKind::Transitivity)).unwrap();
    // (b, c) -> (2d - c, 2d - b) sends cell (row, col) to (col, row).
    let (mut pairs, mut agree) = (0, 0);
    for row in 0..r.mesh {
        for col in 0..r.mesh {
            let (a, b) = (r.cell(row, col), r.cell(col, row));
            assert_eq!(a.is_valid(), b.is_valid(), "validity differs at ({row}, {col})");
            if a.is_valid() {
                pairs += 1;
                agree += usize::from(a.class == b.class);
            }
        }
    }
    assert!(pairs > 0);
    assert!(agree as f64 >= 0.9 * pairs as f64, "{agree}/{pairs} symmetric pairs agree");
    assert!(r.count(CellClass::Transitive) > 0);
}

#[test]
fn image_endpoints_track_orbits() {
    // Without a discontinuity inside [x, y] the image is the interval
    // between the endpoint images.
    let map = MapSpec::beta_transformation(1.5, 0.1).unwrap();
    let cfg = LeoConfig::default();
    let (x, y) = (0.1, 0.2);
    let img = lorenz_chaos::leo::image(&map, map.discontinuity, x, y, 0.0, 1.0, &cfg).unwrap();
    if img.iterations == 1 {
        assert_eq!(img.intervals, IntervalList::from_pairs(&[(map.eval(x), map.eval(y))]));
    } else {
        assert!(img.intervals.covers(0.0, 1.0, 1e-9));
    }
}
