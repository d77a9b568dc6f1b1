//! Laws on an interval and the weight vectors that average them.
//!
//! The central object is [`IntervalBeta`], a beta law rescaled from (0, 1)
//! to an arbitrary interval (a, b). Uniform, arcsine, and semicircle laws
//! are all members of the family, which is what makes closed-form transform
//! checks possible in the first place.

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};
use crate::special::{ln_beta, reg_inc_beta};

/// Beta(p, q) law pushed onto the interval (a, b): density proportional to
/// (x - a)^{p-1} (b - x)^{q-1}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalBeta {
    p: f64,
    q: f64,
    a: f64,
    b: f64,
    /// ln of the density normalizer, ln B(p, q) + (p + q - 1) ln(b - a).
    ln_norm: f64,
}

impl IntervalBeta {
    pub fn new(p: f64, q: f64, a: f64, b: f64) -> Result<Self> {
        if !(p > 0.0 && q > 0.0 && p.is_finite() && q.is_finite()) {
            return Err(Error::Domain(format!(
                "interval beta needs finite positive shapes, got p={p} q={q}"
            )));
        }
        if !(a < b && a.is_finite() && b.is_finite()) {
            return Err(Error::Domain(format!(
                "interval beta needs a finite interval a < b, got a={a} b={b}"
            )));
        }
        let ln_norm = ln_beta(p, q)? + (p + q - 1.0) * (b - a).ln();
        Ok(Self {
            p,
            q,
            a,
            b,
            ln_norm,
        })
    }

    /// Uniform law on (a, b).
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        Self::new(1.0, 1.0, a, b)
    }

    /// Arcsine law on (a, b).
    pub fn arcsine(a: f64, b: f64) -> Result<Self> {
        Self::new(0.5, 0.5, a, b)
    }

    /// Semicircle law on (-sigma, sigma).
    pub fn wigner(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::Domain(format!(
                "semicircle law needs sigma > 0, got {sigma}"
            )));
        }
        Self::new(1.5, 1.5, -sigma, sigma)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// max(|a|, |b|); transforms of the law converge for |z| below its
    /// reciprocal.
    pub fn support_radius(&self) -> f64 {
        self.a.abs().max(self.b.abs())
    }

    /// Density at x; zero outside [a, b], diverging endpoints allowed.
    pub fn pdf(&self, x: f64) -> f64 {
        if x < self.a || x > self.b {
            return 0.0;
        }
        self.pdf_at(x - self.a, self.b - x)
    }

    /// Density in terms of the distances to the endpoints. Quadrature calls
    /// this with exactly computed distances so the (x - a) cancellation near
    /// an endpoint never happens.
    pub(crate) fn pdf_at(&self, da: f64, db: f64) -> f64 {
        if da == 0.0 || db == 0.0 {
            // powf gives 0^0 = 1 and 0^negative = inf, both the right limit
            return da.powf(self.p - 1.0) * db.powf(self.q - 1.0) * (-self.ln_norm).exp();
        }
        ((self.p - 1.0) * da.ln() + (self.q - 1.0) * db.ln() - self.ln_norm).exp()
    }

    /// Distribution function at x.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.a {
            return 0.0;
        }
        if x >= self.b {
            return 1.0;
        }
        let u = ((x - self.a) / (self.b - self.a)).clamp(0.0, 1.0);
        reg_inc_beta(u, self.p, self.q).expect("shapes validated at construction")
    }

    /// Raw moment E[X^m], exact in the recurrence up to roundoff.
    pub fn raw_moment(&self, m: u32) -> f64 {
        let mut rec = MomentRecurrence::new(self);
        for _ in 0..m {
            rec.step();
        }
        rec.current()
    }

    pub fn mean(&self) -> f64 {
        self.raw_moment(1)
    }

    pub fn variance(&self) -> f64 {
        let m1 = self.raw_moment(1);
        self.raw_moment(2) - m1 * m1
    }

    /// Reusable sampler; hoist out of loops so the gamma setup cost is paid
    /// once.
    pub fn sampler(&self) -> BetaSampler {
        BetaSampler::new(self)
    }

    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.sampler().draw(rng)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Vec<f64> {
        let s = self.sampler();
        (0..count).map(|_| s.draw(rng)).collect()
    }
}

/// Three-term recurrence on the raw moments of an [`IntervalBeta`]:
///
///   (p + q + m) mu_{m+1} = [p b + q a + m (a + b)] mu_m - m a b mu_{m-1}
///
/// The scaled variant tracks nu_m = mu_m / M^m with M the support radius,
/// which keeps every state finite no matter how large m or the endpoints
/// get; the transform series consumes nu_m against powers of z M.
pub(crate) struct MomentRecurrence {
    p: f64,
    q: f64,
    c1: f64,
    c2: f64,
    c3: f64,
    m: f64,
    cur: f64,
    prev: f64,
}

impl MomentRecurrence {
    pub(crate) fn new(d: &IntervalBeta) -> Self {
        Self {
            p: d.p,
            q: d.q,
            c1: d.p * d.b + d.q * d.a,
            c2: d.a + d.b,
            c3: d.a * d.b,
            m: 0.0,
            cur: 1.0,
            prev: 0.0,
        }
    }

    pub(crate) fn new_scaled(d: &IntervalBeta) -> Self {
        let radius = d.support_radius();
        Self {
            p: d.p,
            q: d.q,
            c1: (d.p * d.b + d.q * d.a) / radius,
            c2: (d.a + d.b) / radius,
            c3: d.a * d.b / (radius * radius),
            m: 0.0,
            cur: 1.0,
            prev: 0.0,
        }
    }

    /// Advance one order and return the new state.
    pub(crate) fn step(&mut self) -> f64 {
        let next = ((self.c1 + self.m * self.c2) * self.cur - self.m * self.c3 * self.prev)
            / (self.p + self.q + self.m);
        self.prev = self.cur;
        self.cur = next;
        self.m += 1.0;
        next
    }

    pub(crate) fn current(&self) -> f64 {
        self.cur
    }
}

/// Sampler for one [`IntervalBeta`]: the classic gamma ratio, rescaled.
#[derive(Clone)]
pub struct BetaSampler {
    a: f64,
    span: f64,
    gp: Gamma<f64>,
    gq: Gamma<f64>,
}

impl BetaSampler {
    fn new(d: &IntervalBeta) -> Self {
        Self {
            a: d.a,
            span: d.b - d.a,
            gp: Gamma::new(d.p, 1.0).expect("shape validated at construction"),
            gq: Gamma::new(d.q, 1.0).expect("shape validated at construction"),
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let x = self.gp.sample(rng);
            let y = self.gq.sample(rng);
            // both gammas underflowing to zero at once is astronomically
            // rare; redraw rather than emit NaN
            if x + y > 0.0 {
                return self.a + self.span * x / (x + y);
            }
        }
    }
}

/// Nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    weights: Vec<f64>,
}

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Domain("weight vector must be nonempty".into()));
        }
        if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
            return Err(Error::Domain(format!(
                "weights must be finite and nonnegative, got {weights:?}"
            )));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "weights must sum to 1 within 1e-12, got {sum}"
            )));
        }
        Ok(Self { weights })
    }

    /// Construction sites that produce exact simplex points by design skip
    /// the tolerance check.
    fn from_parts(weights: Vec<f64>) -> Self {
        Self { weights }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// The weighted average sum_j V_j x_j.
    pub fn combine(&self, xs: &[f64]) -> f64 {
        debug_assert_eq!(xs.len(), self.weights.len());
        self.weights.iter().zip(xs).map(|(w, x)| w * x).sum()
    }
}

/// Reusable Dirichlet(r_1, ..., r_k) sampler via normalized gammas.
#[derive(Clone)]
pub struct DirichletSampler {
    gammas: Vec<Gamma<f64>>,
}

impl DirichletSampler {
    pub fn new(r: &[f64]) -> Result<Self> {
        if r.is_empty() {
            return Err(Error::Domain("dirichlet needs at least one weight".into()));
        }
        let gammas = r
            .iter()
            .map(|&rj| {
                if !(rj > 0.0 && rj.is_finite()) {
                    return Err(Error::Domain(format!(
                        "dirichlet parameters must be positive, got {rj}"
                    )));
                }
                Ok(Gamma::new(rj, 1.0).expect("positive shape"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { gammas })
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> WeightVector {
        loop {
            let raw: Vec<f64> = self.gammas.iter().map(|g| g.sample(rng)).collect();
            let sum: f64 = raw.iter().sum();
            if sum > 0.0 {
                return WeightVector::from_parts(raw.into_iter().map(|g| g / sum).collect());
            }
        }
    }
}

/// One Dirichlet(r) draw.
pub fn dirichlet_sample<R: Rng + ?Sized>(r: &[f64], rng: &mut R) -> Result<WeightVector> {
    Ok(DirichletSampler::new(r)?.draw(rng))
}

/// A composition of n: grouping boundaries 0 < c_1 < ... < c_{k-1} < n
/// splitting n uniform order statistic spacings into k consecutive blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionSpec {
    n: u32,
    cuts: Vec<u32>,
}

impl CompositionSpec {
    pub fn new(n: u32, cuts: Vec<u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("composition needs n >= 1".into()));
        }
        for (i, &c) in cuts.iter().enumerate() {
            if c == 0 || c >= n {
                return Err(Error::Domain(format!(
                    "cut {c} outside the open range (0, {n})"
                )));
            }
            if i > 0 && cuts[i - 1] >= c {
                return Err(Error::Domain(format!(
                    "cuts must be strictly increasing, got {cuts:?}"
                )));
            }
        }
        Ok(Self { n, cuts })
    }

    /// The finest composition: every interior point is a cut, so every
    /// block has size one.
    pub fn all_cuts(n: u32) -> Result<Self> {
        Self::new(n, (1..n).collect())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn cuts(&self) -> &[u32] {
        &self.cuts
    }

    /// Number of blocks.
    pub fn k(&self) -> usize {
        self.cuts.len() + 1
    }

    /// Block sizes r_1, ..., r_k; they sum to n.
    pub fn block_sizes(&self) -> Vec<u32> {
        let mut sizes = Vec::with_capacity(self.k());
        let mut prev = 0;
        for &c in &self.cuts {
            sizes.push(c - prev);
            prev = c;
        }
        sizes.push(self.n - prev);
        sizes
    }
}

/// Weights from uniform order statistics: sort n-1 uniforms, read off the
/// gaps between consecutive cut positions (with 0 and 1 as the outer
/// fenceposts). The resulting vector is Dirichlet with the block sizes as
/// parameters.
pub fn order_statistic_weights<R: Rng + ?Sized>(
    spec: &CompositionSpec,
    rng: &mut R,
) -> WeightVector {
    let n = spec.n() as usize;
    let mut u: Vec<f64> = (0..n - 1).map(|_| rng.random()).collect();
    u.sort_unstable_by(f64::total_cmp);
    let mut weights = Vec::with_capacity(spec.k());
    let mut lo = 0.0;
    for &c in spec.cuts() {
        let hi = u[c as usize - 1];
        weights.push(hi - lo);
        lo = hi;
    }
    weights.push(1.0 - lo);
    WeightVector::from_parts(weights)
}

/// Power semicircle law: density proportional to (sigma^2 - x^2)^{theta + 1/2}
/// on (-sigma, sigma). theta = 0 is the semicircle, theta = -1 the arcsine
/// law, theta = -1/2 the uniform law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSemicircle {
    theta: f64,
    sigma: f64,
}

impl PowerSemicircle {
    pub fn new(theta: f64, sigma: f64) -> Result<Self> {
        if !(theta > -1.5 && theta.is_finite()) {
            return Err(Error::Domain(format!(
                "power semicircle needs theta > -3/2, got {theta}"
            )));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::Domain(format!(
                "power semicircle needs sigma > 0, got {sigma}"
            )));
        }
        Ok(Self { theta, sigma })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// The same law as a symmetric interval beta on (-sigma, sigma).
    pub fn to_beta(&self) -> IntervalBeta {
        IntervalBeta::new(self.theta + 1.5, self.theta + 1.5, -self.sigma, self.sigma)
            .expect("parameters validated at construction")
    }
}
