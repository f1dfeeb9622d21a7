//! `phi = B . h`: a thin Blaschke product with zeros at `a` and `1 - 1/n!`,
//! composed with the conformal map of the disk onto the slit disk.
//!
//! `h` keeps every point off `[0, 1)`, so the only zero of `phi` is
//! `b = g(a)`, while along the two boundary approaches that `h` folds onto the
//! slit `|phi|` stays bounded below.

mod checks;
mod report;

pub use checks::*;
pub use report::{Anchor, Check, Profile, Value, VerificationReport, SCHEMA};

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::blaschke::{contour_count, factorial_zeros, BlaschkeProduct, Tail, TailRule, ZeroCount, ZeroSequence};
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::hyperbolic::{DiskPoint, Point, ONE};
use crate::innerfn::{make_path, nontangential_inf, ApproachPath, PathProfile, SingularInner};
use crate::slitmap::SlitMap;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Params {
    pub n_max: usize,
    pub tol: f64,
}

#[derive(Clone, Debug)]
pub struct Counterexample {
    /// Off-slit zeros of `B`, each giving one zero `g(a)` of `phi`.
    designated: Vec<DiskPoint>,
    blaschke: BlaschkeProduct,
    map: SlitMap,
    zeros_of_phi: Vec<Point>,
    params: Params,
}

/// `B = b_a * prod_{n >= 2} b_{1 - 1/n!}` composed with `h`, with `b = g(a)`
/// certified by `|phi(b)| <= tol`.
pub fn build(a: DiskPoint, n_max: usize, tol: f64) -> Result<Counterexample> {
    if n_max < 5 {
        return Err(Error::Domain(format!("n_max = {n_max} must be at least 5")));
    }
    let zeros = factorial_zeros(a.value(), n_max)?;
    Counterexample::assemble(vec![a], zeros, Params { n_max, tol })
}

/// The slit zeros only, with off-axis zeros `a_list` in front.
pub fn with_off_axis_zeros(a_list: &[DiskPoint], n_max: usize, tol: f64) -> Result<Counterexample> {
    let mut head: Vec<Point> = a_list.iter().map(|&a| a.into()).collect();
    for a in a_list {
        if a.value().im == 0.0 {
            return Err(Error::Domain(format!("a = {} lies on the real axis", a.value())));
        }
    }
    for n in 2..=n_max {
        let eps = TailRule::Factorial.deviation(n).ok_or_else(|| Error::Domain("n_max too large".into()))?;
        head.push(Point::near_one(Complex64::new(eps, 0.0)));
    }
    let tail = Tail { rule: TailRule::Factorial, start: n_max + 1, end: None };
    Counterexample::assemble(a_list.to_vec(), ZeroSequence::new(head, Some(tail))?, Params { n_max, tol })
}

impl Counterexample {
    fn assemble(designated: Vec<DiskPoint>, zeros: ZeroSequence, params: Params) -> Result<Self> {
        if !(params.tol > 0.0) {
            return Err(Error::Domain(format!("tolerance {} must be positive", params.tol)));
        }
        let blaschke = BlaschkeProduct::new(zeros, params.tol.min(1e-12))?;
        let map = SlitMap::new();
        let mut zeros_of_phi = Vec::with_capacity(designated.len());
        for a in &designated {
            if a.is_boundary() {
                return Err(Error::Domain(format!("a = {} is not interior", a.value())));
            }
            zeros_of_phi.push(map.g(a.value())?);
        }
        let cx = Self { designated, blaschke, map, zeros_of_phi, params };
        for &b in &cx.zeros_of_phi {
            let v = cx.phi_eval(b)?.norm();
            if v > params.tol {
                return Err(Error::Domain(format!("|phi(b)| = {v:e} exceeds {:e}", params.tol)));
            }
        }
        Ok(cx)
    }

    pub fn a(&self) -> DiskPoint {
        self.designated[0]
    }

    pub fn designated(&self) -> &[DiskPoint] {
        &self.designated
    }

    /// `b = g(a)`, the zero of `phi`.
    pub fn b(&self) -> Point {
        self.zeros_of_phi[0]
    }

    pub fn zeros_of_phi(&self) -> &[Point] {
        &self.zeros_of_phi
    }

    pub fn blaschke(&self) -> &BlaschkeProduct {
        &self.blaschke
    }

    pub fn map(&self) -> &SlitMap {
        &self.map
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn phi_eval(&self, z: impl Into<Point>) -> Result<Complex64> {
        let z = z.into();
        z.require_interior()?;
        self.blaschke.eval(self.map.h(z)?)
    }

    /// `phi'/phi = (B'/B)(h) h'`, with `phi` itself.
    pub fn phi_with_log_derivative(&self, z: impl Into<Point>) -> Result<(Complex64, Complex64)> {
        let z = z.into();
        let (value, logd) = self.blaschke.eval_with_log_derivative(self.map.h(z)?)?;
        Ok((value, logd * self.map.h_derivative(z)?))
    }

    /// Zeros of `phi` inside `|z| = radius` by the argument principle.
    pub fn phi_zero_count(&self, radius: f64, nodes: usize) -> Result<ZeroCount> {
        self.phi_zero_count_with(Strategy::default(), radius, nodes)
    }

    pub fn phi_zero_count_with(&self, strategy: Strategy, radius: f64, nodes: usize) -> Result<ZeroCount> {
        contour_count(strategy, radius, nodes, |z| self.contour_node(z))
    }

    fn contour_node(&self, z: Complex64) -> Result<(Complex64, f64)> {
        let (value, logd) = self.phi_with_log_derivative(z).map_err(|e| match e {
            Error::Pole(_) => Error::ContourTooClose { distance: 0.0 },
            other => other,
        })?;
        Ok((z * logd, value.norm()))
    }

    /// Sum of the zeros inside `|z| = radius`: `(1/2pi) int z^2 phi'/phi dtheta`
    /// on `nodes` trapezoid nodes.
    pub fn phi_zero_sum(&self, radius: f64, nodes: usize) -> Result<Complex64> {
        let vals = exec::map_range(Strategy::default(), nodes, |j| {
            let z = Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * j as f64 / nodes as f64);
            self.contour_node(z).map(|(g, _)| z * g)
        });
        let mut sum = Complex64::new(0.0, 0.0);
        for v in vals {
            sum += v?;
        }
        Ok(sum / nodes as f64)
    }

    /// Slit-side approach `g(1 - e^{i theta}/k!)` for `k` in `ks`, as a path at
    /// the boundary point it reaches.
    pub fn slit_approach(&self, theta: f64, ks: std::ops::RangeInclusive<usize>, margin: f64) -> Result<ApproachPath> {
        let mut target = None;
        let (mut eps, mut angles) = (Vec::new(), Vec::new());
        for k in ks {
            let e = TailRule::Factorial
                .deviation(k)
                .ok_or_else(|| Error::Domain(format!("1/{k}! is not representable")))?;
            let z = self.map.g(Point::near_one(Complex64::from_polar(e, theta)))?;
            let (anchor, delta) = match z {
                Point::Near { anchor, delta } => (anchor, delta),
                // early terms land outside the deviation window; measure them from the closer tip preimage
                Point::Plain(v) => {
                    let anchor = if v.re >= 0.0 { ONE } else { -ONE };
                    (anchor, z.deviation_from(anchor))
                }
            };
            if *target.get_or_insert(anchor) != anchor {
                return Err(Error::Domain("slit approach switched boundary points".into()));
            }
            eps.push(delta.norm());
            angles.push(delta.arg());
        }
        let eta = target.ok_or_else(|| Error::Domain("empty approach".into()))?;
        make_path(eta, FRAC_PI_2 - margin, eps, angles)
    }

    /// `|phi|` along a slit approach, with the control `phi * S_eta` beside it.
    pub fn approach_profiles(&self, path: &ApproachPath) -> Result<(PathProfile, PathProfile)> {
        let phi = |p: Point| self.phi_eval(p);
        let singular = SingularInner::atom(path.eta(), 1.0)?;
        let control = |p: Point| Ok(self.phi_eval(p)? * singular.eval(p)?);
        Ok((nontangential_inf(&phi, path, 1.0)?, nontangential_inf(&control, path, 1.0)?))
    }
}

/// The default build from `a = i/2`.
pub fn default_counterexample() -> Result<Counterexample> {
    build(DiskPoint::new(Complex64::new(0.0, 0.5))?, 20, 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn build_examples() {
        let cx = default_counterexample().unwrap();
        let b = cx.b().value();
        assert!((cx.map().h(b).unwrap().value() - c(0.0, 0.5)).norm() < 1e-12);
        assert!(cx.phi_eval(b).unwrap().norm() <= 1e-9);
        // b = g(a) does not involve the product at all
        let short = build(DiskPoint::new(c(0.0, 0.5)).unwrap(), 5, 1e-9).unwrap();
        assert!((short.b().value() - b).norm() < 1e-15);
        assert!((b - c(-0.921478060046189376, -0.0554272517321016166)).norm() < 1e-12);
        assert!(build(DiskPoint::new(c(0.3, 0.0)).unwrap(), 20, 1e-9).is_err());
        assert!(build(DiskPoint::new(c(0.0, 0.5)).unwrap(), 2, 1e-9).is_err());
    }

    #[test]
    fn phi_matches_module_composition() {
        let cx = default_counterexample().unwrap();
        let h0 = cx.map().h(c(0.0, 0.0)).unwrap();
        let direct = cx.blaschke().eval(h0).unwrap();
        assert_eq!(cx.phi_eval(c(0.0, 0.0)).unwrap(), direct);
    }

    #[test]
    fn single_zero_inside_large_circle() {
        let cx = default_counterexample().unwrap();
        assert_eq!(cx.phi_zero_count(0.995, 256).unwrap().count, 1);
        assert_eq!(cx.phi_zero_count(0.5, 256).unwrap().count, 0);
        let located = cx.phi_zero_sum(0.995, 1 << 14).unwrap();
        assert!((located - cx.b().value()).norm() < 1e-6, "{located}");
    }

    #[test]
    fn slit_approaches_reach_both_tip_preimages() {
        let cx = default_counterexample().unwrap();
        let up = cx.slit_approach(FRAC_PI_4, 3..=12, 0.1).unwrap();
        let down = cx.slit_approach(-FRAC_PI_4, 3..=12, 0.1).unwrap();
        assert_eq!(up.eta(), ONE);
        assert_eq!(down.eta(), -ONE);
        let (phi, control) = cx.approach_profiles(&up).unwrap();
        assert!(phi.tail_min >= 0.01);
        assert!(control.rows.last().unwrap().modulus < 1e-6);
    }
}
