//! Property tests for the structural invariants: identities that must hold
//! for every parameter choice, not just the tabulated oracle points.

use proptest::prelude::*;

use rwa_core::dist::{order_statistic_weights, CompositionSpec, DirichletSampler};
use rwa_core::quad::tanh_sinh;
use rwa_core::rng;
use rwa_core::rwa::{sample_rwa, RwaProblem, WeightPath};
use rwa_core::special::{hyp2f1, ln_beta, log_gamma, reg_inc_beta, Hyp2F1Params, Hyp2F1Route};
use rwa_core::transform::{
    ast_auto, ast_moment_series, ast_quadrature, z_grid, AstQuery, ClosedForm, SERIES_TOL,
};
use rwa_core::verify::{ks_critical, ks_statistic};
use rwa_core::IntervalBeta;

fn support() -> impl Strategy<Value = (f64, f64)> {
    (-2.0f64..1.5, 0.2f64..3.0).prop_map(|(a, w)| (a, a + w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Both evaluation routes are independent algorithms; they must agree to
    // within the integral route's own acceptance gate.
    #[test]
    fn hyp2f1_routes_agree(
        c in 0.2f64..3.0,
        a in 0.2f64..3.0,
        extra in 0.2f64..3.0,
        z in -0.8f64..0.8,
    ) {
        let params = Hyp2F1Params { c, a, b: a + extra, z };
        let series = hyp2f1(params, Hyp2F1Route::Series).unwrap();
        let integral = hyp2f1(params, Hyp2F1Route::EulerIntegral).unwrap();
        prop_assert!((series - integral).abs() <= 5e-8 * series.abs().max(1.0));
    }

    // Matching upper and lower parameters collapse the series to the
    // binomial one: F(t, s; t; z) = (1 - z)^(-s).
    #[test]
    fn hyp2f1_binomial_identity(
        t in 0.3f64..5.0,
        s in 0.2f64..4.0,
        z in -0.9f64..0.9,
    ) {
        let v = hyp2f1(Hyp2F1Params { c: t, a: s, b: t, z }, Hyp2F1Route::Series).unwrap();
        prop_assert!((v * (1.0 - z).powf(s) - 1.0).abs() <= 1e-11);
    }

    #[test]
    fn reg_inc_beta_reflection(x in 0.01f64..0.99, p in 0.3f64..8.0, q in 0.3f64..8.0) {
        let lhs = reg_inc_beta(x, p, q).unwrap();
        let rhs = reg_inc_beta(1.0 - x, q, p).unwrap();
        prop_assert!((lhs + rhs - 1.0).abs() <= 1e-13);
    }

    #[test]
    fn log_gamma_recurrence(x in 0.05f64..30.0) {
        let up = log_gamma(x + 1.0).unwrap();
        let lo = log_gamma(x).unwrap();
        let gap = (up - lo - x.ln()).abs();
        prop_assert!(gap <= 5e-12 * (1.0 + up.abs() + lo.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // The density integrates to one. Shapes are kept at 1 or above so the
    // integrand is bounded and the generic pdf entry point is exercised;
    // endpoint-singular shapes get the same coverage through the route
    // grid, whose integrand receives exact endpoint distances.
    #[test]
    fn pdf_normalizes(
        p in 1.0f64..6.0,
        q in 1.0f64..6.0,
        (a, b) in support(),
    ) {
        let dist = IntervalBeta::new(p, q, a, b).unwrap();
        let total = tanh_sinh(|x, _, _| dist.pdf(x), a, b, 1e-12).value;
        prop_assert!((total - 1.0).abs() <= 1e-9);
    }

    // The moment recurrence against direct integration of x^m against the
    // kernel, with distances supplied exactly.
    #[test]
    fn moments_match_quadrature(
        p in 0.4f64..6.0,
        q in 0.4f64..6.0,
        (a, b) in support(),
        m in 1u32..=10,
    ) {
        let dist = IntervalBeta::new(p, q, a, b).unwrap();
        let ln_norm = ln_beta(p, q).unwrap() + (p + q - 1.0) * (b - a).ln();
        let kernel = |x: f64, da: f64, db: f64| {
            x.powi(m as i32) * ((p - 1.0) * da.ln() + (q - 1.0) * db.ln() - ln_norm).exp()
        };
        let integrated = tanh_sinh(kernel, a, b, 1e-12).value;
        let recurred = dist.raw_moment(m);
        let scale = dist.support_radius().powi(m as i32).max(1.0);
        prop_assert!((integrated - recurred).abs() <= 1e-9 * scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    // z = 0 is the transform's normalization point; every route returns
    // exactly one there, no tolerance.
    #[test]
    fn every_route_is_exactly_one_at_zero(
        p in 0.3f64..6.0,
        q in 0.3f64..6.0,
        (a, b) in support(),
        d in 0.3f64..4.0,
    ) {
        let dist = IntervalBeta::new(p, q, a, b).unwrap();
        let query = AstQuery::new(dist, d, 0.0).unwrap();
        prop_assert_eq!(ast_quadrature(query).unwrap().value, 1.0);
        prop_assert_eq!(ast_moment_series(query, SERIES_TOL).unwrap().value, 1.0);
        prop_assert_eq!(ast_auto(&dist, d, 0.0).unwrap().value, 1.0);
        if let Some(form) = ClosedForm::match_for(&dist, d) {
            prop_assert_eq!(form.eval(0.0).unwrap(), 1.0);
        }
    }

    // On a nonnegative support the integrand grows with z pointwise, so the
    // transform is nondecreasing along the grid.
    #[test]
    fn transform_is_monotone_on_nonnegative_support(
        p in 0.5f64..5.0,
        q in 0.5f64..5.0,
        b in 0.3f64..3.0,
        d in 0.5f64..3.0,
    ) {
        let dist = IntervalBeta::new(p, q, 0.0, b).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for z in z_grid(dist.support_radius()) {
            if z < 0.0 {
                continue;
            }
            let v = ast_auto(&dist, d, z).unwrap().value;
            prop_assert!(v >= prev - 1e-9 * v.abs().max(1.0));
            prev = v;
        }
    }

    #[test]
    fn weight_vectors_lie_on_the_simplex(
        r in proptest::collection::vec(0.3f64..4.0, 2..5),
        seed in any::<u64>(),
    ) {
        let sampler = DirichletSampler::new(&r).unwrap();
        let w = sampler.draw(&mut rng::seeded(seed));
        prop_assert!(w.weights().iter().all(|&x| (0.0..=1.0).contains(&x)));
        prop_assert!((w.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-12);

        let comp = CompositionSpec::new(4, vec![1, 3]).unwrap();
        let v = order_statistic_weights(&comp, &mut rng::seeded(seed));
        prop_assert!(v.weights().iter().all(|&x| (0.0..=1.0).contains(&x)));
        prop_assert!((v.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn sampling_is_bitwise_reproducible(seed in any::<u64>()) {
        let problem = RwaProblem::from_composition(
            CompositionSpec::new(3, vec![1]).unwrap(),
            vec![
                IntervalBeta::new(1.5, 1.5, 0.0, 1.0).unwrap(),
                IntervalBeta::new(2.5, 2.5, 0.0, 1.0).unwrap(),
            ],
        )
        .unwrap();
        let once = sample_rwa(
            &problem,
            WeightPath::OrderStatistics,
            &mut rng::substream(seed, "repro"),
            16,
        )
        .unwrap();
        let again = sample_rwa(
            &problem,
            WeightPath::OrderStatistics,
            &mut rng::substream(seed, "repro"),
            16,
        )
        .unwrap();
        let bits = |xs: &[f64]| xs.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        prop_assert_eq!(bits(&once), bits(&again));
    }
}

// A grouped order-statistic gap vector has beta marginals: the first block
// of a (c, n - c) grouping is the c-th order statistic of n - 1 uniforms.
#[test]
fn order_statistic_marginals_are_beta() {
    for (n, c) in [(2u32, 1u32), (3, 1), (3, 2), (4, 1), (5, 2), (6, 3)] {
        let comp = CompositionSpec::new(n, vec![c]).unwrap();
        let mut rng = rng::substream(42, &format!("invariants:order-stat:{n}:{c}"));
        let mut xs: Vec<f64> = (0..20_000)
            .map(|_| order_statistic_weights(&comp, &mut rng).weights()[0])
            .collect();
        xs.sort_unstable_by(f64::total_cmp);
        let law = IntervalBeta::new(f64::from(c), f64::from(n - c), 0.0, 1.0).unwrap();
        let d = ks_statistic(&xs, |x| law.cdf(x));
        let crit = ks_critical(xs.len(), 1e-3);
        assert!(d <= crit, "n={n} c={c}: KS {d} above {crit}");
    }
}

// Distinct shape pairs must be distinguishable through the transform alone;
// order one already separates every pair in a 6 x 6 shape grid.
#[test]
fn distinct_shapes_give_distinct_transforms() {
    const SHAPES: [f64; 6] = [0.5, 1.0, 1.5, 2.0, 3.0, 5.0];
    const ZS: [f64; 4] = [0.3, 0.6, 0.85, -0.6];
    let mut dists = Vec::new();
    for &p in &SHAPES {
        for &q in &SHAPES {
            dists.push(IntervalBeta::new(p, q, 0.0, 1.0).unwrap());
        }
    }
    let values: Vec<Vec<f64>> = dists
        .iter()
        .map(|dist| {
            ZS.iter()
                .map(|&z| {
                    let query = AstQuery::new(*dist, 1.0, z).unwrap();
                    ast_moment_series(query, SERIES_TOL).unwrap().value
                })
                .collect()
        })
        .collect();
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            let sep = values[i]
                .iter()
                .zip(&values[j])
                .map(|(x, y)| (x - y).abs())
                .fold(0.0f64, f64::max);
            assert!(
                sep > 1e-6,
                "shapes ({}, {}) and ({}, {}) are not separated",
                dists[i].p(),
                dists[i].q(),
                dists[j].p(),
                dists[j].q()
            );
        }
    }
}

// Frozen draw from the pinned generator: any change to seeding, stream
// derivation, or the sampler itself shows up here first.
#[test]
fn golden_sample_vector_is_frozen() {
    let dist = IntervalBeta::new(2.0, 2.0, 0.0, 1.0).unwrap();
    let xs = dist.sample(&mut rng::substream(42, "golden"), 4);
    let bits: Vec<u64> = xs.iter().map(|x| x.to_bits()).collect();
    let expected: [u64; 4] = [
        0x3fd394feaebdc1ee, // 0.3059689241845537
        0x3feb8ab04bf45a4c, // 0.86067976794113
        0x3fdbdd78ea7eb6a4, // 0.43539259815120546
        0x3fdbaaf80f939e45, // 0.43231011887698784
    ];
    assert_eq!(bits, expected);
}
