//! Argument-principle zero counting on circles `|z| = r`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};

/// `|f - w|` on a node below this means the contour runs through a solution.
pub const CONTOUR_MARGIN: f64 = 1e-10;
const MIN_NODES: usize = 64;
const MAX_NODES: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZeroCount {
    pub count: i64,
    /// Final quadrature value before rounding.
    pub integral: f64,
    pub nodes: usize,
}

/// One contour node: the integrand `z f'(z)/(f(z) - w)` and the residual `|f(z) - w|`.
pub type Node = (Complex64, f64);

/// Trapezoidal quadrature of `(1/2pi) \int_0^{2pi} g(theta) dtheta` with node
/// doubling. Stops once two successive levels agree within `0.01` and the
/// value is within `0.1` of an integer.
pub fn contour_count<F>(strategy: Strategy, radius: f64, nodes: usize, integrand: F) -> Result<ZeroCount>
where
    F: Fn(Complex64) -> Result<Node> + Sync + Send,
{
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::Domain(format!("contour radius {radius} not in (0, 1)")));
    }
    let eval_nodes = |n: usize, offset: usize, stride: usize| -> Result<Complex64> {
        let vals = exec::map_range(strategy, n / stride, |j| {
            let theta = 2.0 * PI * (offset + j * stride) as f64 / n as f64;
            integrand(Complex64::from_polar(radius, theta))
        });
        let mut sum = Complex64::new(0.0, 0.0);
        let mut closest = f64::INFINITY;
        for v in vals {
            let (g, resid) = v?;
            closest = closest.min(resid);
            sum += g;
        }
        if closest < CONTOUR_MARGIN {
            return Err(Error::ContourTooClose { distance: closest });
        }
        Ok(sum)
    };

    let mut n = nodes.max(MIN_NODES).next_power_of_two();
    let mut sum = eval_nodes(n, 0, 1)?;
    let mut prev = sum.re / n as f64;
    loop {
        if 2 * n > MAX_NODES {
            return Err(Error::NonInteger { value: prev });
        }
        // the doubled grid adds the odd nodes only
        sum += eval_nodes(2 * n, 1, 2)?;
        n *= 2;
        let value = sum.re / n as f64;
        if (value - prev).abs() < 0.01 && (value - value.round()).abs() < 0.1 {
            return Ok(ZeroCount { count: value.round() as i64, integral: value, nodes: n });
        }
        prev = value;
    }
}

/// Zeros of `B - w` inside `|z| = radius`.
pub fn count_zeros_argument_principle(b: &BlaschkeProduct, w: Complex64, radius: f64, nodes: usize) -> Result<ZeroCount> {
    count_zeros_argument_principle_with(Strategy::default(), b, w, radius, nodes)
}

pub fn count_zeros_argument_principle_with(
    strategy: Strategy,
    b: &BlaschkeProduct,
    w: Complex64,
    radius: f64,
    nodes: usize,
) -> Result<ZeroCount> {
    if !(w.norm() < 1.0) {
        return Err(Error::Domain(format!("target {w} is not inside the unit disk")));
    }
    contour_count(strategy, radius, nodes, |z| {
        let (value, logd) = b.eval_with_log_derivative(z).map_err(|e| match e {
            Error::Pole(_) => Error::ContourTooClose { distance: 0.0 },
            other => other,
        })?;
        let resid = (value - w).norm();
        Ok((value * logd * z / (value - w), resid))
    })
}
