//! Randomly weighted averages of independent interval beta inputs.
//!
//! A problem pairs inputs X_1, ..., X_k with Dirichlet(r_1, ..., r_k)
//! weights V and studies W = sum_j V_j X_j. Its transform of order
//! r_1 + ... + r_k factors into the product of the inputs' transforms of
//! orders r_j, which is the identity every check in the suite leans on.
//! For special shape patterns the law of W is itself an interval beta and
//! [`predict_distribution`] names it.

use rand::Rng;

use crate::dist::{order_statistic_weights, CompositionSpec, DirichletSampler, IntervalBeta};
use crate::error::{Error, Result};
use crate::transform::{ast_auto, SHAPE_TOL};

/// How the Dirichlet weight vector is realized when sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightPath {
    /// Gaps of uniform order statistics, grouped by the composition's
    /// blocks. Only available when the weights come from integer block
    /// sizes.
    OrderStatistics,
    /// Normalized gamma draws with the weight parameters directly.
    Dirichlet,
}

/// A randomly weighted average: inputs, Dirichlet weight parameters, and
/// optionally the integer composition realizing those parameters.
#[derive(Debug, Clone)]
pub struct RwaProblem {
    r: Vec<f64>,
    comp: Option<CompositionSpec>,
    inputs: Vec<IntervalBeta>,
}

impl RwaProblem {
    /// Problem whose weights are the grouped spacings of a composition;
    /// block sizes become the Dirichlet parameters.
    pub fn from_composition(comp: CompositionSpec, inputs: Vec<IntervalBeta>) -> Result<Self> {
        if inputs.len() != comp.k() {
            return Err(Error::Domain(format!(
                "composition has {} blocks but {} inputs were given",
                comp.k(),
                inputs.len()
            )));
        }
        let r = comp.block_sizes().iter().map(|&s| f64::from(s)).collect();
        Ok(Self {
            r,
            comp: Some(comp),
            inputs,
        })
    }

    /// Problem with arbitrary positive Dirichlet parameters. When all of
    /// them are integers a composition is synthesized so the order
    /// statistic path stays available.
    pub fn from_dirichlet(r: Vec<f64>, inputs: Vec<IntervalBeta>) -> Result<Self> {
        if r.is_empty() || inputs.len() != r.len() {
            return Err(Error::Domain(format!(
                "need one weight parameter per input, got {} and {}",
                r.len(),
                inputs.len()
            )));
        }
        if r.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
            return Err(Error::Domain(format!(
                "weight parameters must be positive, got {r:?}"
            )));
        }
        let integral = r
            .iter()
            .all(|x| x.fract() == 0.0 && *x >= 1.0 && *x <= 4096.0);
        let comp = if integral {
            let mut cuts = Vec::with_capacity(r.len() - 1);
            let mut acc = 0u32;
            for &x in &r[..r.len() - 1] {
                acc += x as u32;
                cuts.push(acc);
            }
            let n = acc + *r.last().expect("nonempty") as u32;
            Some(CompositionSpec::new(n, cuts)?)
        } else {
            None
        };
        Ok(Self { r, comp, inputs })
    }

    pub fn k(&self) -> usize {
        self.inputs.len()
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn inputs(&self) -> &[IntervalBeta] {
        &self.inputs
    }

    pub fn composition(&self) -> Option<&CompositionSpec> {
        self.comp.as_ref()
    }

    /// Total transform order r_1 + ... + r_k.
    pub fn order_total(&self) -> f64 {
        self.r.iter().sum()
    }

    /// The shared support interval, if every input has the same one.
    pub fn common_support(&self) -> Option<(f64, f64)> {
        let first = self.inputs.first()?;
        let (a, b) = (first.a(), first.b());
        let same = self
            .inputs
            .iter()
            .all(|d| (d.a() - a).abs() <= SHAPE_TOL && (d.b() - b).abs() <= SHAPE_TOL);
        same.then_some((a, b))
    }
}

/// Monte Carlo replicates of W = sum_j V_j X_j. Each replicate draws the
/// weight vector first, then the inputs, so the stream layout is stable.
pub fn sample_rwa<R: Rng + ?Sized>(
    problem: &RwaProblem,
    path: WeightPath,
    rng: &mut R,
    count: usize,
) -> Result<Vec<f64>> {
    let samplers: Vec<_> = problem.inputs().iter().map(|d| d.sampler()).collect();
    let mut out = Vec::with_capacity(count);
    match path {
        WeightPath::OrderStatistics => {
            let comp = problem.composition().ok_or_else(|| {
                Error::Domain(
                    "order statistic weights need integer block sizes; use the Dirichlet path"
                        .into(),
                )
            })?;
            for _ in 0..count {
                let w = order_statistic_weights(comp, rng);
                let mut acc = 0.0;
                for (wj, s) in w.weights().iter().zip(&samplers) {
                    acc += wj * s.draw(rng);
                }
                out.push(acc);
            }
        }
        WeightPath::Dirichlet => {
            let ds = DirichletSampler::new(problem.r())?;
            for _ in 0..count {
                let w = ds.draw(rng);
                let mut acc = 0.0;
                for (wj, s) in w.weights().iter().zip(&samplers) {
                    acc += wj * s.draw(rng);
                }
                out.push(acc);
            }
        }
    }
    Ok(out)
}

/// Which closed-form result predicted a law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremSource {
    /// Symmetric inputs, shapes (r_j + 1/2, r_j + 1/2).
    Thm31,
    /// Separable inputs, shapes (s_j, r_j - s_j).
    Thm32,
    /// Balanced separable inputs, s_j = r_j / 2.
    Cor31,
    /// Arcsine inputs with unit weights on a symmetric interval.
    Cor32,
}

/// A predicted law for W together with the pattern that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremPrediction {
    pub law: IntervalBeta,
    pub source: TheoremSource,
}

/// The exact law of W when the inputs fit a known pattern on a common
/// interval; `None` otherwise. With R = sum r_j and S = sum s_j:
///
/// * shapes (r_j + 1/2, r_j + 1/2) for every j give (R + 1/2, R + 1/2);
/// * shapes (s_j, r_j - s_j) for every j give (S, R - S), with the
///   balanced and all-arcsine specializations labeled separately.
pub fn predict_distribution(problem: &RwaProblem) -> Option<TheoremPrediction> {
    let (a, b) = problem.common_support()?;
    let close = |x: f64, y: f64| (x - y).abs() <= SHAPE_TOL;
    let pairs = || problem.inputs().iter().zip(problem.r());
    let total = problem.order_total();

    if pairs().all(|(d, &rj)| close(d.p(), rj + 0.5) && close(d.q(), rj + 0.5)) {
        let law = IntervalBeta::new(total + 0.5, total + 0.5, a, b).ok()?;
        return Some(TheoremPrediction {
            law,
            source: TheoremSource::Thm31,
        });
    }

    if pairs().all(|(d, &rj)| close(d.p() + d.q(), rj)) {
        let s_total: f64 = problem.inputs().iter().map(|d| d.p()).sum();
        let law = IntervalBeta::new(s_total, total - s_total, a, b).ok()?;
        let arcsine_units =
            pairs().all(|(d, &rj)| close(d.p(), 0.5) && close(d.q(), 0.5) && close(rj, 1.0));
        let source = if arcsine_units && close(a, -b) {
            TheoremSource::Cor32
        } else if pairs().all(|(d, &rj)| close(d.p(), rj / 2.0)) {
            TheoremSource::Cor31
        } else {
            TheoremSource::Thm32
        };
        return Some(TheoremPrediction { law, source });
    }

    None
}

/// The product side of the factorization identity:
/// prod_j transform of input j at order r_j, all at the same z.
pub fn ast_product(problem: &RwaProblem, z: f64) -> Result<f64> {
    let mut acc = 1.0;
    for (dist, &rj) in problem.inputs().iter().zip(problem.r()) {
        acc *= ast_auto(dist, rj, z)?.value;
    }
    Ok(acc)
}

/// Reference formula for the transform of the average of one arcsine and
/// m - 1 further symmetric inputs on (a, b) at total order m:
/// with D = 1 - (a+b) z + a b z^2,
///
///   [ 4 / (2 - (a+b) z + 2 sqrt(D)) ]^{m-1} / sqrt(D).
pub fn example_ast_4_1(m: u32, a: f64, b: f64, z: f64) -> Result<f64> {
    if m < 1 {
        return Err(Error::Domain(format!("need m >= 1, got {m}")));
    }
    if !(a < b) {
        return Err(Error::Domain(format!("need a < b, got a={a} b={b}")));
    }
    if !(z.is_finite() && z.abs() * a.abs().max(b.abs()) < 1.0) {
        return Err(Error::Domain(format!("z={z} outside the convergence disc")));
    }
    let disc = 1.0 - (a + b) * z + a * b * z * z;
    if disc <= 0.0 {
        return Err(Error::Domain(format!(
            "nonpositive discriminant {disc} at z={z}"
        )));
    }
    let denom = 2.0 - (a + b) * z + 2.0 * disc.sqrt();
    if denom <= 0.0 {
        return Err(Error::Domain(format!(
            "vanishing branch denominator at z={z}"
        )));
    }
    Ok((4.0 / denom).powi(m as i32 - 1) / disc.sqrt())
}

/// Reference formula printed alongside the two-block averages with one
/// endpoint-heavy input: with D as above,
///
///   2 / sqrt(1 - z a b + sqrt(D)) * [ 4 / (2 - (a+b) z + 2 sqrt(D)) ]^{m-1}.
///
/// Kept verbatim; at z = 0 it returns sqrt(2), not 1, so it cannot be the
/// transform of a probability law. The suite pins the discrepancy down
/// rather than papering over it.
pub fn example_ast_4_2(m: u32, a: f64, b: f64, z: f64) -> Result<f64> {
    if m < 2 {
        return Err(Error::Domain(format!("need m >= 2, got {m}")));
    }
    if !(a < b) {
        return Err(Error::Domain(format!("need a < b, got a={a} b={b}")));
    }
    if !(z.is_finite() && z.abs() * a.abs().max(b.abs()) < 1.0) {
        return Err(Error::Domain(format!("z={z} outside the convergence disc")));
    }
    let disc = 1.0 - (a + b) * z + a * b * z * z;
    if disc < 0.0 {
        return Err(Error::Domain(format!(
            "negative discriminant {disc} at z={z}"
        )));
    }
    let inner = 1.0 - z * a * b + disc.sqrt();
    if inner <= 0.0 {
        return Err(Error::Domain(format!("vanishing front factor at z={z}")));
    }
    let denom = 2.0 - (a + b) * z + 2.0 * disc.sqrt();
    if denom <= 0.0 {
        return Err(Error::Domain(format!(
            "vanishing branch denominator at z={z}"
        )));
    }
    Ok(2.0 / inner.sqrt() * (4.0 / denom).powi(m as i32 - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use crate::transform::ast_auto;

    fn arcsine() -> IntervalBeta {
        IntervalBeta::arcsine(-1.0, 1.0).unwrap()
    }

    #[test]
    fn construction_checks_arity() {
        let comp = CompositionSpec::new(3, vec![1]).unwrap();
        assert!(RwaProblem::from_composition(comp.clone(), vec![arcsine()]).is_err());
        let p = RwaProblem::from_composition(
            comp,
            vec![arcsine(), IntervalBeta::new(2.5, 2.5, -1.0, 1.0).unwrap()],
        )
        .unwrap();
        assert_eq!(p.r(), &[1.0, 2.0]);
        assert_eq!(p.order_total(), 3.0);
        assert!(RwaProblem::from_dirichlet(vec![1.0], vec![]).is_err());
        assert!(RwaProblem::from_dirichlet(vec![-1.0], vec![arcsine()]).is_err());
    }

    #[test]
    fn integral_dirichlet_parameters_synthesize_a_composition() {
        let p = RwaProblem::from_dirichlet(vec![2.0, 1.0, 3.0], vec![arcsine(); 3]).unwrap();
        let comp = p.composition().unwrap();
        assert_eq!(comp.n(), 6);
        assert_eq!(comp.cuts(), &[2, 3]);
        assert_eq!(comp.block_sizes(), vec![2, 1, 3]);
        let p = RwaProblem::from_dirichlet(vec![0.5, 1.5], vec![arcsine(); 2]).unwrap();
        assert!(p.composition().is_none());
    }

    #[test]
    fn common_support_detection() {
        let p = RwaProblem::from_dirichlet(vec![1.0, 1.0], vec![arcsine(); 2]).unwrap();
        assert_eq!(p.common_support(), Some((-1.0, 1.0)));
        let p = RwaProblem::from_dirichlet(
            vec![1.0, 1.0],
            vec![arcsine(), IntervalBeta::arcsine(0.0, 1.0).unwrap()],
        )
        .unwrap();
        assert_eq!(p.common_support(), None);
    }

    #[test]
    fn samples_stay_inside_the_hull() {
        let p = RwaProblem::from_dirichlet(
            vec![1.0, 2.0],
            vec![
                IntervalBeta::uniform(-1.0, 2.0).unwrap(),
                IntervalBeta::new(2.0, 3.0, -1.0, 2.0).unwrap(),
            ],
        )
        .unwrap();
        let mut r = rng::seeded(17);
        for path in [WeightPath::Dirichlet, WeightPath::OrderStatistics] {
            let xs = sample_rwa(&p, path, &mut r, 5_000).unwrap();
            assert_eq!(xs.len(), 5_000);
            assert!(xs.iter().all(|x| (-1.0..=2.0).contains(x)));
        }
    }

    #[test]
    fn order_statistic_path_needs_a_composition() {
        let p = RwaProblem::from_dirichlet(vec![0.5, 0.5], vec![arcsine(); 2]).unwrap();
        let mut r = rng::seeded(1);
        assert!(sample_rwa(&p, WeightPath::OrderStatistics, &mut r, 10).is_err());
        assert!(sample_rwa(&p, WeightPath::Dirichlet, &mut r, 10).is_ok());
    }

    #[test]
    fn prediction_symmetric_family() {
        // shapes (r_j + 1/2, r_j + 1/2) with r = (1, 2) combine to (3.5, 3.5)
        let p = RwaProblem::from_dirichlet(
            vec![1.0, 2.0],
            vec![
                IntervalBeta::new(1.5, 1.5, 0.0, 1.0).unwrap(),
                IntervalBeta::new(2.5, 2.5, 0.0, 1.0).unwrap(),
            ],
        )
        .unwrap();
        let pred = predict_distribution(&p).unwrap();
        assert_eq!(pred.source, TheoremSource::Thm31);
        assert_eq!(pred.law, IntervalBeta::new(3.5, 3.5, 0.0, 1.0).unwrap());
    }

    #[test]
    fn prediction_separable_family() {
        // shapes (s_j, r_j - s_j) with s = (0.5, 2.5), r = (2, 3)
        let p = RwaProblem::from_dirichlet(
            vec![2.0, 3.0],
            vec![
                IntervalBeta::new(0.5, 1.5, -1.0, 1.0).unwrap(),
                IntervalBeta::new(2.5, 0.5, -1.0, 1.0).unwrap(),
            ],
        )
        .unwrap();
        let pred = predict_distribution(&p).unwrap();
        assert_eq!(pred.source, TheoremSource::Thm32);
        assert_eq!(pred.law, IntervalBeta::new(3.0, 2.0, -1.0, 1.0).unwrap());
    }

    #[test]
    fn prediction_balanced_and_arcsine_specializations() {
        // two uniforms with r = (2, 2) are balanced separable
        let p = RwaProblem::from_dirichlet(
            vec![2.0, 2.0],
            vec![IntervalBeta::uniform(0.0, 1.0).unwrap(); 2],
        )
        .unwrap();
        let pred = predict_distribution(&p).unwrap();
        assert_eq!(pred.source, TheoremSource::Cor31);
        assert_eq!(pred.law, IntervalBeta::new(2.0, 2.0, 0.0, 1.0).unwrap());
        // arcsine units on a symmetric interval
        let p = RwaProblem::from_dirichlet(vec![1.0; 3], vec![arcsine(); 3]).unwrap();
        let pred = predict_distribution(&p).unwrap();
        assert_eq!(pred.source, TheoremSource::Cor32);
        assert_eq!(pred.law, IntervalBeta::new(1.5, 1.5, -1.0, 1.0).unwrap());
        // same shapes off the symmetric interval fall back to the balanced label
        let off = IntervalBeta::arcsine(0.0, 1.0).unwrap();
        let p = RwaProblem::from_dirichlet(vec![1.0; 3], vec![off; 3]).unwrap();
        assert_eq!(
            predict_distribution(&p).unwrap().source,
            TheoremSource::Cor31
        );
    }

    #[test]
    fn prediction_declines_mixed_patterns() {
        let p = RwaProblem::from_composition(
            CompositionSpec::new(3, vec![1]).unwrap(),
            vec![arcsine(), IntervalBeta::new(2.5, 2.5, -1.0, 1.0).unwrap()],
        )
        .unwrap();
        assert!(predict_distribution(&p).is_none());
        // different supports block any prediction
        let p = RwaProblem::from_dirichlet(
            vec![1.0, 1.0],
            vec![arcsine(), IntervalBeta::arcsine(0.0, 1.0).unwrap()],
        )
        .unwrap();
        assert!(predict_distribution(&p).is_none());
    }

    #[test]
    fn product_matches_prediction_transform() {
        // Dirichlet(1,1,1) over three arcsine inputs: the average is the
        // (1.5, 1.5) law, so the product at order 3 must match its transform
        let p = RwaProblem::from_dirichlet(vec![1.0; 3], vec![arcsine(); 3]).unwrap();
        let law = predict_distribution(&p).unwrap().law;
        for z in [-0.8, -0.3, 0.0, 0.45, 0.9] {
            let lhs = ast_product(&p, z).unwrap();
            let rhs = ast_auto(&law, 3.0, z).unwrap().value;
            assert!((lhs - rhs).abs() < 1e-9, "z={z}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn reference_formula_one_matches_product() {
        // one arcsine plus a (2.5, 2.5) factor on (-1, 1), total order 3
        let p = RwaProblem::from_composition(
            CompositionSpec::new(3, vec![1]).unwrap(),
            vec![arcsine(), IntervalBeta::new(2.5, 2.5, -1.0, 1.0).unwrap()],
        )
        .unwrap();
        let v = example_ast_4_1(3, -1.0, 1.0, 0.6).unwrap();
        assert!((v - 125.0 / 81.0).abs() < 1e-14);
        for z in [-0.85, -0.5, 0.3, 0.6] {
            let lhs = example_ast_4_1(3, -1.0, 1.0, z).unwrap();
            let rhs = ast_product(&p, z).unwrap();
            assert!((lhs - rhs).abs() < 1e-9, "z={z}: {lhs} vs {rhs}");
        }
        assert_eq!(example_ast_4_1(1, -1.0, 1.0, 0.0).unwrap(), 1.0);
        assert!(example_ast_4_1(0, -1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn reference_formula_two_is_off_at_zero() {
        let v = example_ast_4_2(2, 0.0, 1.0, 0.0).unwrap();
        assert!((v - std::f64::consts::SQRT_2).abs() < 1e-15);
        let v = example_ast_4_2(2, 0.0, 1.0, 0.3).unwrap();
        assert!((v - 1.749_919_424_525_975_2).abs() < 1e-14);
        assert!(example_ast_4_2(1, 0.0, 1.0, 0.0).is_err());
    }
}
