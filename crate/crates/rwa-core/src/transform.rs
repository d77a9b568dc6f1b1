//! The additive Stieltjes transform of an interval beta law, computed by
//! three mutually checking routes.
//!
//! For a law mu on [a, b] and order d > 0 the transform is
//!
//!   E[(1 - z X)^{-d}],  X ~ mu,  |z| max(|a|, |b|) < 1.
//!
//! Route one integrates the definition. Route two sums the moment series
//! sum_m (d)_m / m! z^m E[X^m] with a rigorous tail envelope. Route three
//! evaluates a closed form when the shapes admit one. The routes share no
//! code beyond the density, which is the point: agreement between them is
//! evidence, not tautology.

use crate::dist::{IntervalBeta, MomentRecurrence};
use crate::error::{Error, Result};
use crate::quad::{self, Neumaier};
use crate::special::SERIES_CAP;

/// Absolute target handed to the quadrature engine.
pub const QUAD_TOL: f64 = 1e-11;

/// A route whose own error estimate lands above this is reported as failed
/// rather than silently degraded.
pub const ROUTE_FAIL_TOL: f64 = 1e-8;

/// Default stopping tolerance for the moment series (absolute tail bound).
pub const SERIES_TOL: f64 = 1e-11;

/// Shapes must match a closed-form pattern to this absolute tolerance.
pub(crate) const SHAPE_TOL: f64 = 1e-12;

/// A validated transform evaluation point.
#[derive(Debug, Clone, Copy)]
pub struct AstQuery {
    pub dist: IntervalBeta,
    pub d: f64,
    pub z: f64,
}

impl AstQuery {
    pub fn new(dist: IntervalBeta, d: f64, z: f64) -> Result<Self> {
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::Domain(format!(
                "transform order must be positive, got {d}"
            )));
        }
        if !z.is_finite() {
            return Err(Error::Domain(format!("z must be finite, got {z}")));
        }
        if z.abs() * dist.support_radius() >= 1.0 {
            return Err(Error::Domain(format!(
                "|z| must stay below 1/max(|a|,|b|) = {:.6}, got z={z}",
                1.0 / dist.support_radius()
            )));
        }
        Ok(Self { dist, d, z })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Quadrature,
    MomentSeries,
    ClosedForm,
}

/// A transform value together with the route that produced it and that
/// route's own error estimate.
#[derive(Debug, Clone, Copy)]
pub struct AstValue {
    pub value: f64,
    pub route: Route,
    pub est_error: f64,
}

/// Route one: integrate (1 - z x)^{-d} against the density.
pub fn ast_quadrature(q: AstQuery) -> Result<AstValue> {
    if q.z == 0.0 {
        // integrand is identically 1
        return Ok(AstValue {
            value: 1.0,
            route: Route::Quadrature,
            est_error: 0.0,
        });
    }
    let AstQuery { dist, d, z } = q;
    let r = quad::tanh_sinh(
        |x, da, db| (1.0 - z * x).powf(-d) * dist.pdf_at(da, db),
        dist.a(),
        dist.b(),
        QUAD_TOL,
    );
    // negated comparison so a NaN estimate also lands here
    if !(r.est_error <= ROUTE_FAIL_TOL) {
        return Err(Error::NoConvergence(format!(
            "quadrature error estimate {:.3e} exceeds {ROUTE_FAIL_TOL:.0e}",
            r.est_error
        )));
    }
    // level differences saturate at roundoff, which this floor makes explicit
    let est_error = r.est_error.max(4.0 * f64::EPSILON * r.value.abs());
    Ok(AstValue {
        value: r.value,
        route: Route::Quadrature,
        est_error,
    })
}

/// Route two: the moment series, summed in the scaled variables
/// nu_m = mu_m / M^m and s = z M so no intermediate overflows even when the
/// support radius M is far from 1.
///
/// The truncation criterion bounds the tail by the envelope
/// (d)_m |s|^m / m! rather than by the last term, so a law with vanishing
/// odd moments cannot trick an early stop; summation ends once the
/// geometric tail of the envelope drops under `tol` in absolute terms. The
/// reported estimate is that tail bound plus a roundoff floor.
pub fn ast_moment_series(q: AstQuery, tol: f64) -> Result<AstValue> {
    let AstQuery { dist, d, z } = q;
    let s = z * dist.support_radius();
    if s == 0.0 {
        return Ok(AstValue {
            value: 1.0,
            route: Route::MomentSeries,
            est_error: 0.0,
        });
    }
    let mut rec = MomentRecurrence::new_scaled(&dist);
    let mut sum = Neumaier::default();
    sum.add(1.0);
    let mut coeff = 1.0f64;
    let mut spow = 1.0f64;
    let mut env = 1.0f64;
    let mut env_sum = 1.0f64;
    for m in 1..=SERIES_CAP {
        let mf = m as f64;
        let nu = rec.step();
        coeff *= (d + mf - 1.0) / mf;
        spow *= s;
        env *= s.abs() * (d + mf - 1.0) / mf;
        sum.add(coeff * spow * nu);
        env_sum += env;
        // bound on every later envelope ratio: for d >= 1 the ratios only
        // shrink from here, for d < 1 they grow but stay under |s|
        let ratio = (s.abs() * (d + mf) / (mf + 1.0)).max(s.abs());
        if m >= 2 && ratio < 1.0 {
            let tail = env * ratio / (1.0 - ratio);
            if tail <= tol {
                return Ok(AstValue {
                    value: sum.total(),
                    route: Route::MomentSeries,
                    est_error: tail + f64::EPSILON * env_sum,
                });
            }
        }
    }
    Err(Error::NoConvergence(format!(
        "moment series still moving after {SERIES_CAP} terms at |z| M = {:.6}",
        s.abs()
    )))
}

/// Route three, symmetric case: the transform of the law with shapes
/// (r + 1/2, r + 1/2) on (a, b) at order r is
///
///   [ 4 / (2 - (a+b) z + 2 sqrt(1 - (a+b) z + a b z^2)) ]^r.
pub fn ast_closed_symmetric(r: f64, a: f64, b: f64, z: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!(
            "symmetric closed form needs r > 0, got {r}"
        )));
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
    let denom = 2.0 - (a + b) * z + 2.0 * disc.sqrt();
    if denom <= 0.0 {
        return Err(Error::Domain(format!(
            "vanishing branch denominator at z={z}"
        )));
    }
    Ok((4.0 / denom).powf(r))
}

/// Route three, separable case: the transform of the law with shapes
/// (s, r - s) on (a, b) at order r is
///
///   (1 - z a)^{s - r} (1 - z b)^{-s},
///
/// valid whenever both bases are positive, a strictly larger region than
/// the moment series enjoys.
pub fn ast_closed_general(s: f64, r: f64, a: f64, b: f64, z: f64) -> Result<f64> {
    if !(s > 0.0 && s < r && s.is_finite() && r.is_finite()) {
        return Err(Error::Domain(format!(
            "separable closed form needs 0 < s < r, got s={s} r={r}"
        )));
    }
    if !(a < b) {
        return Err(Error::Domain(format!("need a < b, got a={a} b={b}")));
    }
    let base_a = 1.0 - z * a;
    let base_b = 1.0 - z * b;
    if !(z.is_finite() && base_a > 0.0 && base_b > 0.0) {
        return Err(Error::Domain(format!(
            "closed form needs 1 - z a and 1 - z b positive, got {base_a} and {base_b}"
        )));
    }
    Ok(base_a.powf(s - r) * base_b.powf(-s))
}

/// Closed-form pattern matched against a law and an order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedForm {
    Symmetric { r: f64, a: f64, b: f64 },
    General { s: f64, r: f64, a: f64, b: f64 },
}

impl ClosedForm {
    /// The closed form for the transform of `dist` at order `d`, when the
    /// shapes fit a pattern to within 1e-12. The symmetric pattern is
    /// preferred where both apply.
    pub fn match_for(dist: &IntervalBeta, d: f64) -> Option<ClosedForm> {
        let close = |x: f64, y: f64| (x - y).abs() <= SHAPE_TOL;
        if close(dist.p(), d + 0.5) && close(dist.q(), d + 0.5) {
            return Some(ClosedForm::Symmetric {
                r: d,
                a: dist.a(),
                b: dist.b(),
            });
        }
        if close(dist.p() + dist.q(), d) && dist.p() < d {
            return Some(ClosedForm::General {
                s: dist.p(),
                r: d,
                a: dist.a(),
                b: dist.b(),
            });
        }
        None
    }

    pub fn eval(&self, z: f64) -> Result<f64> {
        match *self {
            ClosedForm::Symmetric { r, a, b } => ast_closed_symmetric(r, a, b, z),
            ClosedForm::General { s, r, a, b } => ast_closed_general(s, r, a, b, z),
        }
    }
}

/// Transform by the best available route: a matching closed form when one
/// exists, quadrature otherwise.
pub fn ast_auto(dist: &IntervalBeta, d: f64, z: f64) -> Result<AstValue> {
    let q = AstQuery::new(*dist, d, z)?;
    if let Some(form) = ClosedForm::match_for(dist, d) {
        let value = form.eval(z)?;
        return Ok(AstValue {
            value,
            route: Route::ClosedForm,
            est_error: 4.0 * f64::EPSILON * value.abs(),
        });
    }
    ast_quadrature(q)
}

/// Bridge to the generalized Stieltjes transform: the transform of order d
/// at the point w = 1/z equals z^d times the additive transform at z.
/// Defined for z where z^d is, so z > 0 unless d is an integer.
pub fn gst_from_ast(ast: f64, z: f64, d: f64) -> Result<f64> {
    let factor = pow_checked(z, d)?;
    Ok(ast * factor)
}

/// Inverse bridge: recover the additive transform from a generalized
/// Stieltjes value at w = 1/z.
pub fn ast_from_gst(gst: f64, z: f64, d: f64) -> Result<f64> {
    let factor = pow_checked(z, d)?;
    Ok(gst / factor)
}

fn pow_checked(z: f64, d: f64) -> Result<f64> {
    if z == 0.0 {
        return Err(Error::Domain("bridge undefined at z = 0".into()));
    }
    let factor = z.powf(d);
    if factor.is_nan() {
        return Err(Error::Domain(format!(
            "z^d undefined for z={z}, d={d}; need z > 0 or integer d"
        )));
    }
    Ok(factor)
}

/// The standard evaluation grid: 21 evenly spaced points covering
/// [-0.9, 0.9] / radius, zero included.
pub fn z_grid(radius: f64) -> Vec<f64> {
    (-10..=10).map(|i| f64::from(i) * 0.09 / radius).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(dist: IntervalBeta, d: f64, z: f64) -> AstQuery {
        AstQuery::new(dist, d, z).unwrap()
    }

    #[test]
    fn query_validation() {
        let u = IntervalBeta::uniform(0.0, 1.0).unwrap();
        assert!(AstQuery::new(u, 0.0, 0.5).is_err());
        assert!(AstQuery::new(u, -1.0, 0.5).is_err());
        assert!(AstQuery::new(u, 1.0, 1.0).is_err());
        assert!(AstQuery::new(u, 1.0, f64::NAN).is_err());
        assert!(AstQuery::new(u, 1.0, 0.999).is_ok());
        let wide = IntervalBeta::uniform(-2.0, 3.0).unwrap();
        assert!(AstQuery::new(wide, 1.0, 0.34).is_err());
        assert!(AstQuery::new(wide, 1.0, 0.33).is_ok());
    }

    #[test]
    fn all_routes_are_one_at_zero() {
        let d = IntervalBeta::new(2.5, 1.5, -1.0, 2.0).unwrap();
        assert_eq!(ast_quadrature(q(d, 1.5, 0.0)).unwrap().value, 1.0);
        assert_eq!(
            ast_moment_series(q(d, 1.5, 0.0), SERIES_TOL).unwrap().value,
            1.0
        );
        assert!((ast_closed_symmetric(2.0, -1.0, 1.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((ast_closed_general(1.0, 2.0, -1.0, 1.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quadrature_matches_oracle_points() {
        // uniform law, order 2: exact value 1/(1-z)
        let u = IntervalBeta::uniform(0.0, 1.0).unwrap();
        let v = ast_quadrature(q(u, 2.0, 0.5)).unwrap();
        assert!((v.value - 2.0).abs() < 1e-10);
        // symmetric shapes (1.5, 1.5) on (0, 1), order 1
        let w = IntervalBeta::new(1.5, 1.5, 0.0, 1.0).unwrap();
        let v = ast_quadrature(q(w, 1.0, 0.5)).unwrap();
        assert!((v.value - 1.372_583_002_030_479_2).abs() < 1e-10);
        // arcsine on (-1, 1), order 1: exact value (1 - z^2)^{-1/2}
        let arc = IntervalBeta::arcsine(-1.0, 1.0).unwrap();
        let v = ast_quadrature(q(arc, 1.0, 0.6)).unwrap();
        assert!((v.value - 1.25).abs() < 1e-10);
    }

    #[test]
    fn closed_forms_match_oracle_points() {
        assert!(
            (ast_closed_symmetric(1.0, 0.0, 1.0, 0.5).unwrap() - 1.372_583_002_030_479_2).abs()
                < 1e-14
        );
        assert!((ast_closed_symmetric(1.0, -1.0, 1.0, 0.6).unwrap() - 10.0 / 9.0).abs() < 1e-14);
        assert!(
            (ast_closed_general(1.5, 3.0, -1.0, 2.0, 0.3).unwrap() - 2.666_827_866_467_447_7).abs()
                < 1e-14
        );
        assert!((ast_closed_general(2.0, 4.0, 0.0, 1.0, 0.5).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn closed_general_survives_outside_the_disc() {
        // support radius 1 puts z = -5 far outside the series disc, yet the
        // closed form still equals the integral: for the uniform law at
        // order 2 both give 1/6
        let v = ast_closed_general(1.0, 2.0, 0.0, 1.0, -5.0).unwrap();
        assert!((v - 1.0 / 6.0).abs() < 1e-14);
        // but a base crossing zero is refused
        assert!(ast_closed_general(1.0, 2.0, 0.0, 1.0, 1.5).is_err());
    }

    #[test]
    fn series_agrees_with_quadrature() {
        let cases = [
            (IntervalBeta::uniform(0.0, 1.0).unwrap(), 2.0, 0.5),
            (IntervalBeta::arcsine(-1.0, 1.0).unwrap(), 1.0, 0.6),
            (IntervalBeta::new(2.5, 1.5, -2.0, 3.0).unwrap(), 3.5, -0.25),
            (IntervalBeta::new(0.5, 3.0, -1.0, 1.0).unwrap(), 0.5, 0.85),
            // small support radius, |z| well above 1
            (IntervalBeta::new(2.0, 2.0, -0.25, 0.25).unwrap(), 2.0, 3.2),
        ];
        for (dist, d, z) in cases {
            let qq = q(dist, d, z);
            let a = ast_quadrature(qq).unwrap();
            let b = ast_moment_series(qq, SERIES_TOL).unwrap();
            assert!(
                (a.value - b.value).abs() < 1e-9,
                "routes disagree at d={d} z={z}: {} vs {}",
                a.value,
                b.value
            );
        }
    }

    #[test]
    fn series_tail_estimate_covers_truth() {
        let u = IntervalBeta::uniform(0.0, 1.0).unwrap();
        let v = ast_moment_series(q(u, 2.0, 0.5), SERIES_TOL).unwrap();
        assert!((v.value - 2.0).abs() <= v.est_error.max(1e-13));
    }

    #[test]
    fn matcher_finds_the_right_pattern() {
        let u = IntervalBeta::uniform(0.0, 1.0).unwrap();
        assert_eq!(
            ClosedForm::match_for(&u, 2.0),
            Some(ClosedForm::General {
                s: 1.0,
                r: 2.0,
                a: 0.0,
                b: 1.0
            })
        );
        let w = IntervalBeta::wigner(1.0).unwrap();
        assert_eq!(
            ClosedForm::match_for(&w, 1.0),
            Some(ClosedForm::Symmetric {
                r: 1.0,
                a: -1.0,
                b: 1.0
            })
        );
        let arc = IntervalBeta::arcsine(-1.0, 1.0).unwrap();
        assert_eq!(
            ClosedForm::match_for(&arc, 1.0),
            Some(ClosedForm::General {
                s: 0.5,
                r: 1.0,
                a: -1.0,
                b: 1.0
            })
        );
        // shapes (2.5, 2.5) at order 3 fit neither pattern
        let m = IntervalBeta::new(2.5, 2.5, -1.0, 1.0).unwrap();
        assert_eq!(ClosedForm::match_for(&m, 3.0), None);
    }

    #[test]
    fn auto_prefers_closed_form_and_agrees_with_quadrature() {
        let arc = IntervalBeta::arcsine(-1.0, 1.0).unwrap();
        let v = ast_auto(&arc, 1.0, 0.6).unwrap();
        assert_eq!(v.route, Route::ClosedForm);
        assert!((v.value - 1.25).abs() < 1e-14);
        let m = IntervalBeta::new(2.5, 2.5, -1.0, 1.0).unwrap();
        let v = ast_auto(&m, 3.0, 0.6).unwrap();
        assert_eq!(v.route, Route::Quadrature);
        assert!((v.value - 125.0 / 81.0).abs() < 1e-10);
    }

    #[test]
    fn bridge_round_trips() {
        let arc = IntervalBeta::arcsine(-1.0, 1.0).unwrap();
        let ast = ast_auto(&arc, 1.5, 0.4).unwrap().value;
        let gst = gst_from_ast(ast, 0.4, 1.5).unwrap();
        assert!((ast_from_gst(gst, 0.4, 1.5).unwrap() - ast).abs() < 1e-15);
        // integer order works on the negative side too
        assert!((gst_from_ast(2.0, -0.5, 2.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(gst_from_ast(1.0, 0.0, 1.5).is_err());
        assert!(gst_from_ast(1.0, -0.5, 1.5).is_err());
    }

    #[test]
    fn grid_shape() {
        let g = z_grid(2.0);
        assert_eq!(g.len(), 21);
        assert_eq!(g[10], 0.0);
        assert!((g[20] - 0.45).abs() < 1e-15);
        assert!((g[0] + 0.45).abs() < 1e-15);
    }
}
