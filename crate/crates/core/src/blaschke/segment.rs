//! Counting how often a product attains a value, or an argument, on `[0, 1)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::hyperbolic::{normalized_arg, Point};

/// A refined minimum of `|B(t) - w|` below this is a match.
pub const MATCH_THRESHOLD: f64 = 1e-8;

/// Sample points of `[0, 1)` stored as deviations `s = 1 - t`, strictly decreasing.
#[derive(Clone, Debug, PartialEq)]
pub struct SegmentGrid {
    deviations: Vec<f64>,
}

impl SegmentGrid {
    pub fn from_deviations(deviations: Vec<f64>) -> Result<Self> {
        if deviations.len() < 3 {
            return Err(Error::Domain("segment grid needs at least three points".into()));
        }
        if deviations.iter().any(|&s| !(s > 0.0 && s <= 1.0)) {
            return Err(Error::Domain("grid deviations must lie in (0, 1]".into()));
        }
        if let Some(i) = deviations.windows(2).position(|w| w[1] >= w[0]) {
            return Err(Error::NonMonotone(i + 1));
        }
        Ok(Self { deviations })
    }

    /// `points` deviations log-spaced from `1` (t = 0) down to `s_min`.
    ///
    /// Zeros of the slit products sit at `s = 1/n!`, so a log-spaced grid
    /// resolves every one of them with the same relative density.
    pub fn log_deviation(points: usize, s_min: f64) -> Result<Self> {
        if points < 3 || !(s_min > 0.0 && s_min < 1.0) {
            return Err(Error::Domain("log grid needs >= 3 points and 0 < s_min < 1".into()));
        }
        let span = s_min.ln();
        let mut devs: Vec<f64> = (0..points)
            .map(|i| (span * i as f64 / (points - 1) as f64).exp())
            .collect();
        devs[0] = 1.0;
        devs[points - 1] = s_min;
        Self::from_deviations(devs)
    }

    /// Default grid for a product whose slit zeros stop at `1 - 1/n_max!`.
    pub fn for_factorial(points: usize, n_max: usize) -> Result<Self> {
        let s_min = super::TailRule::Factorial
            .deviation(n_max)
            .ok_or_else(|| Error::Domain("n_max too large".into()))?;
        Self::log_deviation(points, s_min)
    }

    pub fn deviations(&self) -> &[f64] {
        &self.deviations
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PreimageCount {
    pub count: usize,
    /// Deviations `s = 1 - t` of the matches, decreasing.
    pub roots: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Two matches fell within one grid spacing of each other.
    pub resolution_warning: bool,
}

fn seg_point(s: f64) -> Point {
    Point::near_one(Complex64::new(s, 0.0))
}

/// Golden-section search for the minimum of `f` on `[lo, hi]`.
fn golden_min(lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if (b - a) <= 4.0 * f64::EPSILON * a.abs().max(b.abs()) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    let candidates = [(lo, f(lo)), (hi, f(hi)), (x1, f1), (x2, f2)];
    candidates.into_iter().fold((f64::NAN, f64::INFINITY), |best, c| if c.1 < best.1 { c } else { best })
}

/// Number of `t` in `[0, 1)` with `B(t) = w`.
///
/// `|B(t) - w|` is sampled on the grid; each sampled local minimum is refined
/// by golden-section search over its two neighbouring cells and kept when the
/// refined residual is below [`MATCH_THRESHOLD`]. Near a simple root the
/// residual is V-shaped, so the search converges to full precision.
pub fn segment_preimage_count(b: &BlaschkeProduct, w: Complex64, grid: &SegmentGrid) -> Result<PreimageCount> {
    segment_preimage_count_with(Strategy::default(), b, w, grid)
}

pub fn segment_preimage_count_with(
    strategy: Strategy,
    b: &BlaschkeProduct,
    w: Complex64,
    grid: &SegmentGrid,
) -> Result<PreimageCount> {
    let s = grid.deviations();
    let residual = |x: f64| b.eval(seg_point(x)).map(|v| (v - w).norm());
    let sampled: Vec<f64> = exec::map(strategy, s, |&x| residual(x)).into_iter().collect::<Result<_>>()?;
    let n = s.len();
    let resid = |x: f64| residual(x).unwrap_or(f64::INFINITY);

    let mut roots: Vec<(f64, f64)> = Vec::new();
    let mut warning = false;
    for i in 0..n {
        let left = if i > 0 { sampled[i - 1] } else { f64::INFINITY };
        let right = if i + 1 < n { sampled[i + 1] } else { f64::INFINITY };
        if !(sampled[i] <= left && sampled[i] <= right) {
            continue;
        }
        // plateaus: only the first sample of a run of equal values starts a candidate
        if i > 0 && sampled[i] == left {
            continue;
        }
        let hi = s[i.saturating_sub(1)];
        let lo = s[(i + 1).min(n - 1)];
        let (x, r) = golden_min(lo, hi, resid);
        if r < MATCH_THRESHOLD {
            if let Some(&(prev, _)) = roots.last() {
                let spacing = (hi - lo).max(f64::MIN_POSITIVE);
                if (prev - x).abs() <= 1e-12 * x {
                    continue;
                }
                if (prev - x).abs() < spacing {
                    warning = true;
                }
            }
            roots.push((x, r));
        }
    }
    Ok(PreimageCount {
        count: roots.len(),
        roots: roots.iter().map(|r| r.0).collect(),
        residuals: roots.iter().map(|r| r.1).collect(),
        resolution_warning: warning,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum ArgAttainment {
    Finite(usize),
    /// The argument sits on the target over a whole grid interval.
    Interval,
}

fn unwrapped_args(f: &dyn Fn(f64) -> Result<Complex64>, grid: &[f64]) -> Result<Vec<f64>> {
    // raw argument plus a whole number of turns, so no rounding accumulates
    let mut out = Vec::with_capacity(grid.len());
    let mut prev_raw = 0.0;
    let mut turns = 0.0;
    for (i, &t) in grid.iter().enumerate() {
        let v = f(t)?;
        if v.norm() == 0.0 || !v.is_finite() {
            return Err(Error::Vanishes(t));
        }
        let raw = normalized_arg(v)?;
        if i > 0 {
            turns -= ((raw - prev_raw) / (2.0 * PI)).round();
        }
        out.push(raw + 2.0 * PI * turns);
        prev_raw = raw;
    }
    Ok(out)
}

/// How many times the continuous argument of `f` passes through
/// `target_arg (mod 2pi)` on the grid.
pub fn arg_attainment_count(
    f: &dyn Fn(f64) -> Result<Complex64>,
    target_arg: f64,
    grid: &[f64],
) -> Result<ArgAttainment> {
    if grid.len() < 2 {
        return Err(Error::Domain("argument grid needs two points".into()));
    }
    let args = unwrapped_args(f, grid)?;
    // level k sits at target + 2 pi k; u counts levels in units of 2 pi
    let u: Vec<f64> = args.iter().map(|a| (a - target_arg) / (2.0 * PI)).collect();
    let on_level = |x: f64| (x - x.round()).abs() < 1e-12;
    if u.windows(2).any(|w| on_level(w[0]) && on_level(w[1]) && w[0].round() == w[1].round()) {
        return Ok(ArgAttainment::Interval);
    }
    // samples sitting on a level, plus levels crossed strictly inside a cell
    let mut count = u.iter().filter(|&&x| on_level(x)).count();
    for w in u.windows(2) {
        let (lo, hi) = if w[0] < w[1] { (w[0], w[1]) } else { (w[1], w[0]) };
        let first = (lo + 1e-12).ceil();
        let last = (hi - 1e-12).floor();
        if last >= first {
            count += (last - first) as usize + 1;
        }
    }
    Ok(ArgAttainment::Finite(count))
}

/// Largest attainment count of `arg f(r)` over targets `r` taken from `grid`.
pub fn max_arg_attainment(f: &dyn Fn(f64) -> Result<Complex64>, grid: &[f64], stride: usize) -> Result<usize> {
    let mut best = 0;
    for &r in grid.iter().step_by(stride.max(1)) {
        let target = normalized_arg(f(r)?)?;
        match arg_attainment_count(f, target, grid)? {
            ArgAttainment::Finite(n) => best = best.max(n),
            ArgAttainment::Interval => return Ok(usize::MAX),
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blaschke::{factorial_zeros, ZeroSequence};
    use crate::hyperbolic::mobius;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn truncated(n_max: usize) -> BlaschkeProduct {
        BlaschkeProduct::new(factorial_zeros(c(0.0, 0.5), n_max).unwrap().truncated(), 1e-12).unwrap()
    }

    #[test]
    fn value_off_the_curve_is_never_attained() {
        let b = truncated(12);
        let grid = SegmentGrid::for_factorial(10_000, 12).unwrap();
        let r = segment_preimage_count(&b, c(0.2, 0.7), &grid).unwrap();
        assert_eq!(r.count, 0);
    }

    #[test]
    fn sampled_values_are_attained_a_few_times() {
        let b = truncated(12);
        let grid = SegmentGrid::for_factorial(10_000, 12).unwrap();
        for t in [0.1, 0.37, 0.71, 0.9, 0.97, 0.995] {
            let w = b.eval(c(t, 0.0)).unwrap();
            let r = segment_preimage_count(&b, w, &grid).unwrap();
            assert!(r.count >= 1 && r.count <= 4, "t = {t}: {r:?}");
            assert!(r.roots.iter().any(|s| ((1.0 - s) - t).abs() < 1e-9), "t = {t}: {r:?}");
        }
    }

    #[test]
    fn zero_is_attained_at_every_retained_slit_zero() {
        let b = truncated(12);
        let grid = SegmentGrid::for_factorial(10_000, 12).unwrap();
        let r = segment_preimage_count(&b, c(0.0, 0.0), &grid).unwrap();
        assert_eq!(r.count, 11, "{r:?}");
    }

    #[test]
    fn grid_validation() {
        assert!(SegmentGrid::from_deviations(vec![1.0, 0.5]).is_err());
        assert!(matches!(SegmentGrid::from_deviations(vec![1.0, 0.5, 0.6]), Err(Error::NonMonotone(2))));
        assert!(SegmentGrid::log_deviation(10, 0.0).is_err());
    }

    #[test]
    fn mobius_argument_is_attained_at_most_twice() {
        let a = c(0.0, 0.5);
        let f = move |t: f64| mobius(a, c(t, 0.0));
        let grid: Vec<f64> = (0..=2000).map(|i| i as f64 / 2000.0).collect();
        for &r in grid.iter().step_by(97) {
            let target = normalized_arg(f(r).unwrap()).unwrap();
            match arg_attainment_count(&f, target, &grid).unwrap() {
                ArgAttainment::Finite(n) => assert!((1..=2).contains(&n), "r = {r}: {n}"),
                ArgAttainment::Interval => panic!("unexpected interval"),
            }
        }
        // on [-1, 1] the image is a circular arc
        let full: Vec<f64> = (0..=4000).map(|i| -1.0 + i as f64 / 2000.0).collect();
        assert!(max_arg_attainment(&f, &full, 50).unwrap() <= 2);
    }

    #[test]
    fn constant_argument_is_an_interval() {
        let f = |_t: f64| Ok(c(0.3, 0.3));
        let grid = [0.0, 0.5, 1.0];
        assert_eq!(arg_attainment_count(&f, PI / 4.0, &grid).unwrap(), ArgAttainment::Interval);
        assert_eq!(arg_attainment_count(&f, 1.0, &grid).unwrap(), ArgAttainment::Finite(0));
    }

    #[test]
    fn second_quadrant_products_have_increasing_argument() {
        let (a1, a2) = (Complex64::from_polar(0.5, 0.75 * PI), Complex64::from_polar(0.7, 0.6 * PI));
        let f = move |t: f64| Ok(mobius(a1, c(t, 0.0))? * mobius(a2, c(t, 0.0))?);
        let grid: Vec<f64> = (0..=2000).map(|i| i as f64 / 2000.0).collect();
        for &r in grid.iter().step_by(101) {
            let target = normalized_arg(f(r).unwrap()).unwrap();
            assert_eq!(arg_attainment_count(&f, target, &grid).unwrap(), ArgAttainment::Finite(1));
        }
    }

    #[test]
    fn vanishing_function_is_rejected() {
        let b = BlaschkeProduct::new(ZeroSequence::finite(&[c(0.5, 0.0)]).unwrap(), 1e-12).unwrap();
        let f = move |t: f64| b.eval(c(t, 0.0));
        let grid = [0.0, 0.25, 0.5, 0.75];
        assert!(matches!(arg_attainment_count(&f, 0.0, &grid), Err(Error::Vanishes(_))));
    }
}
