//! The explicit conformal chain between the slit disk `D - [0, 1)` and `D`.
//!
//! ```text
//! z -> -z -> sqrt -> *i -> +1        (phi1: slit disk -> W1 = {|w-1| < 1, Im w > 0})
//!   -> 1/w -> -1/2 -> square -> (s + i)/(s - i)      (phi2: W1 -> D)
//! ```
//!
//! `g = phi2 . phi1` and `h = g^{-1}`. Every step records the region its
//! output lands in; the inverse picks, among the algebraic preimages, the one
//! inside the previous step's region.
//!
//! Near the slit tip `z = 1` and its two preimages `zeta = 1, -1` the plain
//! chain loses everything below machine epsilon, so points stored as
//! deviations go through the collapsed parametrisation
//! `v = 1/phi1(z) - 1/2`, `v^2 = i(zeta + 1)/(zeta - 1)`, `z = ((2v-1)/(2v+1))^2`,
//! whose pieces (`1 - z = 2v/(v + 1/2)^2`, `1 - g = -2i/(v^2 - i)`,
//! `1 + g = 2v^2/(v^2 - i)`) never subtract nearly equal numbers.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperbolic::{Point, ONE};

const I: Complex64 = Complex64::new(0.0, 1.0);
const HALF: Complex64 = Complex64::new(0.5, 0.0);

/// Region-membership slack for branch selection.
pub const REGION_TOL: f64 = 1e-9;

/// Below this deviation size results are returned in deviation form.
const NEAR: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Region {
    SlitDisk,
    /// `D - (-1, 0]`
    DiskMinusNegativeSegment,
    RightHalfDisk,
    UpperHalfDisk,
    /// `{|w - 1| < 1, Im w > 0}`
    W1,
    /// `{Re u > 1/2, Im u < 0}`
    ShiftedQuarterPlane,
    FourthQuadrant,
    LowerHalfPlane,
    Disk,
}

impl Region {
    pub fn contains(&self, z: Complex64) -> bool {
        if !z.is_finite() {
            return false;
        }
        let tol = REGION_TOL * (1.0 + z.norm());
        let in_disk = z.norm() <= 1.0 + tol;
        match self {
            Region::SlitDisk => in_disk && !on_slit(z),
            Region::DiskMinusNegativeSegment => in_disk && !(z.im == 0.0 && z.re > -1.0 && z.re <= 0.0),
            Region::RightHalfDisk => in_disk && z.re >= -tol,
            Region::UpperHalfDisk => in_disk && z.im >= -tol,
            Region::W1 => (z - ONE).norm() <= 1.0 + tol && z.im >= -tol,
            Region::ShiftedQuarterPlane => z.re >= 0.5 - tol && z.im <= tol,
            Region::FourthQuadrant => z.re >= -tol && z.im <= tol,
            Region::LowerHalfPlane => z.im <= tol,
            Region::Disk => in_disk,
        }
    }
}

fn on_slit(z: Complex64) -> bool {
    z.im == 0.0 && z.re >= 0.0 && z.re < 1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum StepKind {
    /// `z -> -z`
    Negate,
    /// Principal square root, cut along `(-inf, 0]`.
    Sqrt,
    /// `z -> i z`
    MulI,
    Translate(Complex64),
    /// `z -> 1/z`
    Invert,
    /// `z -> z^2`
    Square,
    /// `s -> (s + i)/(s - i)`
    MobiusToDisk,
}

impl StepKind {
    fn apply(&self, z: Complex64) -> Complex64 {
        match *self {
            StepKind::Negate => -z,
            StepKind::Sqrt => z.sqrt(),
            StepKind::MulI => I * z,
            StepKind::Translate(c) => z + c,
            StepKind::Invert => ONE / z,
            StepKind::Square => z * z,
            StepKind::MobiusToDisk => (z + I) / (z - I),
        }
    }

    fn preimages(&self, w: Complex64) -> Vec<Complex64> {
        match *self {
            StepKind::Negate => vec![-w],
            StepKind::Sqrt => vec![w * w],
            StepKind::MulI => vec![-I * w],
            StepKind::Translate(c) => vec![w - c],
            StepKind::Invert => vec![ONE / w],
            StepKind::Square => {
                let r = w.sqrt();
                vec![r, -r]
            }
            StepKind::MobiusToDisk => vec![I * (w + ONE) / (w - ONE)],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Step {
    pub kind: StepKind,
    /// Region of the step's output.
    pub codomain: Region,
}

/// An ordered list of elementary maps with their regions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConformalChain {
    pub domain: Region,
    pub steps: Vec<Step>,
}

impl ConformalChain {
    /// `g = phi2 . phi1`, slit disk to disk.
    pub fn slit_to_disk() -> Self {
        use Region::*;
        use StepKind::*;
        let step = |kind, codomain| Step { kind, codomain };
        Self {
            domain: SlitDisk,
            steps: vec![
                step(Negate, DiskMinusNegativeSegment),
                step(Sqrt, RightHalfDisk),
                step(MulI, UpperHalfDisk),
                step(Translate(ONE), W1),
                step(Invert, ShiftedQuarterPlane),
                step(Translate(-HALF), FourthQuadrant),
                step(Square, LowerHalfPlane),
                step(MobiusToDisk, Disk),
            ],
        }
    }

    /// Number of leading steps that make up `phi1`.
    pub const PHI1_STEPS: usize = 4;

    fn region_before(&self, k: usize) -> Region {
        if k == 0 {
            self.domain
        } else {
            self.steps[k - 1].codomain
        }
    }

    /// All intermediate values, input first.
    pub fn forward_trace(&self, z: Complex64) -> Result<Vec<Complex64>> {
        if self.domain == Region::SlitDisk && on_slit(z) {
            return Err(Error::SlitViolation(z.to_string()));
        }
        if !self.domain.contains(z) {
            return Err(Error::Domain(format!("{z} is outside {:?}", self.domain)));
        }
        let mut trace = vec![z];
        let mut cur = z;
        for step in &self.steps {
            cur = step.kind.apply(cur);
            if !step.codomain.contains(cur) {
                return Err(Error::Branch(format!("{cur} left {:?} after {:?}", step.codomain, step.kind)));
            }
            trace.push(cur);
        }
        Ok(trace)
    }

    pub fn forward(&self, z: Complex64) -> Result<Complex64> {
        Ok(*self.forward_trace(z)?.last().unwrap())
    }

    /// Intermediate values of the inverse, output of the last step first.
    pub fn inverse_trace(&self, w: Complex64) -> Result<Vec<Complex64>> {
        let last = self.steps.last().map(|s| s.codomain).unwrap_or(self.domain);
        if !last.contains(w) {
            return Err(Error::Domain(format!("{w} is outside {last:?}")));
        }
        let mut trace = vec![w];
        let mut cur = w;
        for k in (0..self.steps.len()).rev() {
            let region = self.region_before(k);
            cur = self.steps[k]
                .kind
                .preimages(cur)
                .into_iter()
                .find(|&c| region.contains(c))
                .ok_or_else(|| Error::Branch(format!("no preimage of {cur} in {region:?}")))?;
            trace.push(cur);
        }
        Ok(trace)
    }

    pub fn inverse(&self, w: Complex64) -> Result<Complex64> {
        Ok(*self.inverse_trace(w)?.last().unwrap())
    }
}

/// `phi1(z) = i sqrt(-z) + 1` with the principal root (`sqrt(1) = 1`).
pub fn phi1(z: Complex64) -> Result<Complex64> {
    if on_slit(z) {
        return Err(Error::SlitViolation(z.to_string()));
    }
    if z.norm() > 1.0 + REGION_TOL {
        return Err(Error::Domain(format!("{z} lies outside the closed disk")));
    }
    Ok(I * (-z).sqrt() + ONE)
}

/// `phi2(w) = ((1/w - 1/2)^2 + i)/((1/w - 1/2)^2 - i)` on `W1`.
pub fn phi2(w: Complex64) -> Result<Complex64> {
    if w.norm() == 0.0 || !Region::W1.contains(w) {
        return Err(Error::Domain(format!("{w} is outside W1")));
    }
    let s = (ONE / w - HALF).powi(2);
    Ok((s + I) / (s - I))
}

fn disk_point_from_v2(v2: Complex64, v: Complex64) -> Point {
    // 1 - g and 1 + g without cancellation; u = 1/v avoids overflow of v^2
    let (gamma1, gamma2) = if v.norm() > 1.0 {
        let u2 = (ONE / v).powi(2);
        (-2.0 * I * u2 / (ONE - I * u2), 2.0 * ONE / (ONE - I * u2))
    } else {
        (-2.0 * I / (v2 - I), 2.0 * v2 / (v2 - I))
    };
    if gamma1.norm() < NEAR {
        Point::near_one(gamma1)
    } else if gamma2.norm() < NEAR {
        Point::near(-ONE, gamma2)
    } else {
        Point::Plain((v2 + I) / (v2 - I))
    }
}

fn slit_point_from_v(v: Complex64) -> Point {
    let delta = 2.0 * v / (v + HALF).powi(2);
    if delta.norm() < NEAR {
        Point::near_one(delta)
    } else {
        let q = (2.0 * v - ONE) / (2.0 * v + ONE);
        Point::Plain(q * q)
    }
}

/// `v` with `v^2 = i(zeta + 1)/(zeta - 1)`, in the fourth quadrant.
fn v_of(zeta: Point) -> Result<(Complex64, Complex64)> {
    let v2 = match zeta {
        Point::Near { anchor, delta } if anchor == ONE => -I * (2.0 * ONE - delta) / delta,
        Point::Near { anchor, delta } if anchor == -ONE => I * delta / (delta - 2.0 * ONE),
        _ => {
            let z = zeta.value();
            I * (z + ONE) / (z - ONE)
        }
    };
    let v = v2.sqrt();
    if !v.is_finite() || !Region::FourthQuadrant.contains(v) {
        return Err(Error::Branch(format!("square root {v} left the fourth quadrant")));
    }
    Ok((v2, v))
}

/// The conformal pair `g: D - [0,1) -> D` and `h = g^{-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SlitMap {
    chain: ConformalChain,
}

impl Default for SlitMap {
    fn default() -> Self {
        Self::new()
    }
}

impl SlitMap {
    pub fn new() -> Self {
        Self { chain: ConformalChain::slit_to_disk() }
    }

    pub fn chain(&self) -> &ConformalChain {
        &self.chain
    }

    pub fn g(&self, z: impl Into<Point>) -> Result<Point> {
        let z = z.into();
        match z {
            Point::Near { anchor, delta } if anchor == ONE && delta.norm() < 0.5 => {
                if !z.is_interior() {
                    return Err(Error::Domain(format!("{z:?} is not inside the unit disk")));
                }
                if delta.im == 0.0 {
                    return Err(Error::SlitViolation(format!("1 - {}", delta.re)));
                }
                let s = (ONE - delta).sqrt();
                let v = if delta.im > 0.0 {
                    // lower edge of the slit: phi1 = 1 - s = delta/(1 + s)
                    (ONE + s) / delta - HALF
                } else {
                    // upper edge: phi1 = 1 + s, 1/phi1 - 1/2 = delta/(2(1 + s)^2)
                    delta / (2.0 * (ONE + s).powi(2))
                };
                Ok(disk_point_from_v2(v * v, v))
            }
            _ => {
                if !z.is_interior() {
                    return Err(Error::Domain(format!("{z:?} is not inside the unit disk")));
                }
                let trace = self.chain.forward_trace(z.value())?;
                let v = trace[6];
                Ok(disk_point_from_v2(trace[7], v))
            }
        }
    }

    pub fn h(&self, zeta: impl Into<Point>) -> Result<Point> {
        let zeta = zeta.into();
        if !zeta.is_interior() {
            return Err(Error::Domain(format!("{zeta:?} is not inside the unit disk")));
        }
        match zeta {
            Point::Near { anchor, .. } if anchor == ONE || anchor == -ONE => {
                let (_, v) = v_of(zeta)?;
                Ok(slit_point_from_v(v))
            }
            _ => {
                let trace = self.chain.inverse_trace(zeta.value())?;
                // trace: disk, lower half plane, fourth quadrant (v), ...
                let v = trace[2];
                let z = *trace.last().unwrap();
                if on_slit(z) {
                    return Err(Error::Branch(format!("inverse landed on the slit at {z}")));
                }
                match slit_point_from_v(v) {
                    near @ Point::Near { .. } => Ok(near),
                    Point::Plain(_) => Ok(Point::Plain(z)),
                }
            }
        }
    }

    /// `h'(zeta)` from `h = q^2`, `q = (2v-1)/(2v+1)`, `v^2 = i(zeta+1)/(zeta-1)`.
    pub fn h_derivative(&self, zeta: impl Into<Point>) -> Result<Complex64> {
        let zeta = zeta.into();
        zeta.require_interior()?;
        let (_, v) = v_of(zeta)?;
        let zeta_minus_one_sq = match zeta {
            Point::Near { anchor, delta } if anchor == ONE => delta * delta,
            Point::Near { anchor, delta } if anchor == -ONE => (delta - 2.0 * ONE).powi(2),
            _ => (zeta.value() - ONE).powi(2),
        };
        let q = (2.0 * v - ONE) / (2.0 * v + ONE);
        let dz_dv = 8.0 * q / (2.0 * v + ONE).powi(2);
        let dv_dzeta = -I / (v * zeta_minus_one_sq);
        Ok(dz_dv * dv_dzeta)
    }
}

/// The two readings of the printed ratio inside `lambda(z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LambdaRatio {
    /// `(z + 1)/(z - 1)`
    PlusOverMinus,
    /// `(1 + z)/(1 - z)`
    OnePlusOverOneMinus,
}

impl LambdaRatio {
    pub const ALL: [LambdaRatio; 2] = [LambdaRatio::PlusOverMinus, LambdaRatio::OnePlusOverOneMinus];

    fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            LambdaRatio::PlusOverMinus => (z + ONE) / (z - ONE),
            LambdaRatio::OnePlusOverOneMinus => (ONE + z) / (ONE - z),
        }
    }
}

/// Square root on `C - [0, inf)` with values in the lower half-plane, so
/// `sqrt(-1) = -i`.
pub fn sqrt_cut_positive_real(u: Complex64) -> Result<Complex64> {
    if u.im == 0.0 && u.re >= 0.0 {
        return Err(Error::Branch(format!("{u} lies on the cut [0, inf)")));
    }
    let mut t = u.arg();
    if t > 0.0 {
        t -= 2.0 * PI;
    }
    Ok(Complex64::from_polar(u.norm().sqrt(), t / 2.0))
}

/// `((2 lambda - 1)/(2 lambda + 1))^2` with `lambda = sqrt(-i R(z))`.
pub fn h_closed_form(z: Complex64, ratio: LambdaRatio) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return Err(Error::Domain(format!("{z} is not inside the unit disk")));
    }
    let lambda = sqrt_cut_positive_real(-I * ratio.eval(z))?;
    Ok(((2.0 * lambda - ONE) / (2.0 * lambda + ONE)).powi(2))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosedFormCheck {
    /// Largest `|h_closed_form - h|` on the grid, per candidate.
    pub max_errors: Vec<(LambdaRatio, f64)>,
    pub selected: Vec<LambdaRatio>,
}

/// Compares each candidate ratio with the chain on `points`.
pub fn select_lambda_ratio(map: &SlitMap, points: &[Complex64], tol: f64) -> Result<ClosedFormCheck> {
    let mut max_errors = Vec::new();
    for ratio in LambdaRatio::ALL {
        let mut worst: f64 = 0.0;
        for &z in points {
            let err = match h_closed_form(z, ratio) {
                Ok(v) => (v - map.h(z)?.value()).norm(),
                Err(_) => f64::INFINITY,
            };
            worst = worst.max(err);
        }
        max_errors.push((ratio, worst));
    }
    let selected = max_errors.iter().filter(|e| e.1 <= tol).map(|e| e.0).collect();
    Ok(ClosedFormCheck { max_errors, selected })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceSample {
    pub angle: f64,
    pub zeta: Complex64,
    pub limit: Complex64,
    /// `|1 - limit|`, from the deviation when the limit is stored near 1.
    pub distance_to_one: f64,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryTrace {
    pub samples: Vec<TraceSample>,
    /// Sampled `zeta` whose radial limit is within `1e-4` of `1`.
    pub preimages_of_one: Vec<Complex64>,
    /// Refined boundary points where the radial limit vanishes.
    pub preimages_of_zero: Vec<Complex64>,
    /// Angular extent `[start, end]` of the samples whose limits lie on the slit.
    pub slit_arc: Option<(f64, f64)>,
}

/// Radial schedule `r = 1 - 2^{-j}`, `j <= RADIAL_STEPS`.
pub const RADIAL_STEPS: i32 = 40;
const RADIAL_CONVERGENCE: f64 = 1e-6;

/// `lim_{r -> 1} h(r zeta)` along `r = 1 - 2^{-j}`.
pub fn radial_limit(map: &SlitMap, angle: f64) -> Result<(Point, bool)> {
    let zeta = Complex64::from_polar(1.0, angle);
    // snap to the two preimages of the tip, where the deviation route is needed
    let anchor = [ONE, -ONE].into_iter().find(|&e| (zeta - e).norm() < 1e-14).unwrap_or(zeta);
    let tip = anchor == ONE || anchor == -ONE;
    // at the tip preimages h - 1 shrinks like sqrt(1 - r), so go much deeper
    let steps = if tip { 4 * RADIAL_STEPS } else { RADIAL_STEPS };
    let mut prev: Option<Point> = None;
    let mut converged = false;
    for j in 1..=steps {
        let dev = Complex64::new(2f64.powi(-j), 0.0);
        let p = if tip {
            Point::near(anchor, dev)
        } else {
            Point::Plain(anchor * (1.0 - dev.re))
        };
        let cur = map.h(p)?;
        if let Some(prev) = prev {
            converged = (cur.value() - prev.value()).norm() < RADIAL_CONVERGENCE;
        }
        prev = Some(cur);
    }
    Ok((prev.unwrap(), converged))
}

fn limit_distance_to_one(p: Point) -> f64 {
    match p {
        Point::Near { anchor, delta } if anchor == ONE => delta.norm(),
        _ => (ONE - p.value()).norm(),
    }
}

fn golden_min(lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..120 {
        if b - a <= 4.0 * f64::EPSILON * b.abs().max(1.0) {
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
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Radial limits of `h` at `samples` equally spaced boundary points.
pub fn boundary_trace(map: &SlitMap, samples: usize) -> Result<BoundaryTrace> {
    if samples < 16 {
        return Err(Error::Domain("boundary trace needs at least 16 samples".into()));
    }
    let step = 2.0 * PI / samples as f64;
    let mut rows = Vec::with_capacity(samples);
    for k in 0..samples {
        let angle = k as f64 * step;
        let zeta = if k == 0 {
            ONE
        } else if 2 * k == samples {
            -ONE
        } else {
            Complex64::from_polar(1.0, angle)
        };
        let angle = if 2 * k == samples { PI } else { angle };
        let (limit, converged) = radial_limit(map, angle)?;
        rows.push(TraceSample {
            angle,
            zeta,
            limit: limit.value(),
            distance_to_one: limit_distance_to_one(limit),
            converged,
        });
    }

    let preimages_of_one = rows.iter().filter(|r| r.distance_to_one < 1e-4).map(|r| r.zeta).collect();

    let modulus = |angle: f64| radial_limit(map, angle).map(|(p, _)| p.value().norm()).unwrap_or(f64::INFINITY);
    let mut preimages_of_zero = Vec::new();
    for k in 0..samples {
        let (prev, cur, next) = (
            rows[(k + samples - 1) % samples].limit.norm(),
            rows[k].limit.norm(),
            rows[(k + 1) % samples].limit.norm(),
        );
        if cur < 0.25 && cur <= prev && cur < next {
            let (angle, value) = golden_min(rows[k].angle - step, rows[k].angle + step, modulus);
            if value < 1e-8 {
                preimages_of_zero.push(Complex64::from_polar(1.0, angle));
            }
        }
    }

    let on_slit_limit = |r: &TraceSample| r.limit.im.abs() < 1e-6 && r.limit.re >= -1e-6 && r.distance_to_one > 1e-4;
    let arc: Vec<f64> = rows.iter().filter(|r| on_slit_limit(r)).map(|r| r.angle).collect();
    let slit_arc = arc.first().zip(arc.last()).map(|(&a, &b)| (a, b));

    Ok(BoundaryTrace { samples: rows, preimages_of_one, preimages_of_zero, slit_arc })
}

/// Boundary value of `g` at the slit tip `0`, where `phi1` tends to `1`.
pub fn slit_tip_image() -> Complex64 {
    let v = Complex64::new(0.5, 0.0);
    (v * v + I) / (v * v - I)
}

/// Angles between two perturbation directions before and after `g`.
pub fn angle_preservation(map: &SlitMap, z: Complex64, d1: Complex64, d2: Complex64, step: f64) -> Result<(f64, f64)> {
    let g0 = map.g(z)?.value();
    let g1 = map.g(z + step * d1)?.value() - g0;
    let g2 = map.g(z + step * d2)?.value() - g0;
    Ok(((d2 / d1).arg(), (g2 / g1).arg()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_disk(rng: &mut ChaCha8Rng) -> Complex64 {
        Complex64::from_polar(rng.gen::<f64>().sqrt() * 0.999_999, rng.gen::<f64>() * 2.0 * PI)
    }

    #[test]
    fn phi1_examples() {
        assert!((phi1(c(-0.25, 0.0)).unwrap() - c(1.0, 0.5)).norm() < 1e-15);
        assert!((phi1(c(-1.0, 0.0)).unwrap() - c(1.0, 1.0)).norm() < 1e-15);
        assert!(matches!(phi1(c(0.5, 0.0)), Err(Error::SlitViolation(_))));
        assert!(matches!(phi1(c(0.0, 0.0)), Err(Error::SlitViolation(_))));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let z = random_disk(&mut rng);
            let w = phi1(z).unwrap();
            assert!(w.im > 0.0 && (w - ONE).norm() < 1.0, "{z} -> {w}");
        }
    }

    #[test]
    fn phi2_examples() {
        let v = phi2(c(1.0, 0.5)).unwrap();
        // mpmath: -0.60777957860615883 - 0.09076175040518639i
        assert!((v - c(-0.607779578606158833, -0.0907617504051863857)).norm() < 1e-15);
        assert_relative_eq!(v.norm(), 0.6145, epsilon = 1e-4);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let w = phi1(random_disk(&mut rng)).unwrap();
            assert!(phi2(w).unwrap().norm() < 1.0);
        }
        // the flat edge (0, 2) of W1 goes to the circle
        for x in [0.1, 0.5, 1.0, 1.7, 1.99] {
            assert!((phi2(c(x, 0.0)).unwrap().norm() - 1.0).abs() < 1e-9);
        }
        assert!(phi2(c(1.0, -0.5)).is_err());
        assert!(phi2(c(3.0, 0.1)).is_err());
    }

    #[test]
    fn chain_matches_displayed_maps() {
        let map = SlitMap::new();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let z = random_disk(&mut rng);
            let direct = phi2(phi1(z).unwrap()).unwrap();
            assert!((map.chain().forward(z).unwrap() - direct).norm() < 1e-12);
            let trace = map.chain().forward_trace(z).unwrap();
            assert!((trace[ConformalChain::PHI1_STEPS] - phi1(z).unwrap()).norm() < 1e-15);
        }
    }

    #[test]
    fn roundtrips() {
        let map = SlitMap::new();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..2000 {
            let zeta = random_disk(&mut rng);
            let z = map.h(zeta).unwrap();
            assert!(!on_slit(z.value()));
            assert!((map.g(z).unwrap().value() - zeta).norm() < 1e-9, "{zeta}");
            let z = random_disk(&mut rng);
            if z.im != 0.0 {
                assert!((map.h(map.g(z).unwrap()).unwrap().value() - z).norm() < 1e-9, "{z}");
            }
        }
    }

    #[test]
    fn h_at_origin_matches_extended_precision_root() {
        let map = SlitMap::new();
        let h0 = map.h(c(0.0, 0.0)).unwrap().value();
        // mpmath findroot of g(z) = 0
        assert!((h0 - c(0.0163174005278134914, -0.276915469549292870)).norm() < 1e-14);
        assert!(map.g(h0).unwrap().value().norm() < 1e-9);
        // the tip has boundary image (1/4 + i)/(1/4 - i) = (-15 + 8i)/17
        assert!(map.g(c(0.0, 0.0)).is_err());
        let eta0 = slit_tip_image();
        assert!((eta0 - c(-15.0 / 17.0, 8.0 / 17.0)).norm() < 1e-15);
    }

    #[test]
    fn deviation_routes_agree_with_plain_routes() {
        let map = SlitMap::new();
        for (eps, t) in [(1e-3, 0.7), (1e-4, -0.4), (3e-3, 1.2), (5e-3, -1.3)] {
            let dev = Point::near_one(Complex64::from_polar(eps, t));
            let from_dev = map.g(dev).unwrap().value();
            let plain = map.g(dev.value()).unwrap().value();
            assert!((from_dev - plain).norm() < 1e-10, "{eps} {t}: {from_dev} vs {plain}");
            let back = map.h(map.g(dev).unwrap()).unwrap();
            assert!((back.deviation_from(ONE) - dev.deviation_from(ONE)).norm() < 1e-12 * eps);
        }
        for anchor in [ONE, -ONE] {
            for (eps, t) in [(1e-3, 0.3), (2e-4, -0.9)] {
                let p = Point::near(anchor, Complex64::from_polar(eps, t));
                let from_dev = map.h(p).unwrap().value();
                let plain = map.h(p.value()).unwrap().value();
                assert!((from_dev - plain).norm() < 1e-9, "{anchor} {eps}: {from_dev} vs {plain}");
            }
        }
    }

    #[test]
    fn slit_tip_sides_map_to_plus_and_minus_one() {
        let map = SlitMap::new();
        let eps = 1.0 / 479_001_600.0; // 1/12!
        let lower = map.g(Point::near_one(Complex64::from_polar(eps, PI / 4.0))).unwrap();
        let upper = map.g(Point::near_one(Complex64::from_polar(eps, -PI / 4.0))).unwrap();
        match (lower, upper) {
            (Point::Near { anchor: a1, delta: g1 }, Point::Near { anchor: a2, delta: g2 }) => {
                assert_eq!((a1, a2), (ONE, -ONE));
                // 1 - g ~ eps^2/2 and 1 + g ~ eps^2/32, both radial
                assert_relative_eq!(g1.re, eps * eps / 2.0, max_relative = 1e-6);
                assert_relative_eq!(g2.re, eps * eps / 32.0, max_relative = 1e-6);
                assert!(g1.arg().abs() < 1e-6 && g2.arg().abs() < 1e-6);
            }
            other => panic!("expected deviation points, got {other:?}"),
        }
        let back = map.h(lower).unwrap().deviation_from(ONE);
        assert!((back - Complex64::from_polar(eps, PI / 4.0)).norm() < 1e-13 * eps);
        assert!(matches!(map.g(Point::near_one(c(0.25, 0.0))), Err(Error::SlitViolation(_))));
    }

    #[test]
    fn closed_form_selects_one_ratio() {
        let map = SlitMap::new();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut pts: Vec<Complex64> = (0..500).map(|_| random_disk(&mut rng)).collect();
        pts.push(c(0.0, 0.0));
        let check = select_lambda_ratio(&map, &pts, 1e-8).unwrap();
        assert_eq!(check.selected, vec![LambdaRatio::OnePlusOverOneMinus]);
        assert!(check.max_errors[0].1 > 1e-2);
        assert!((h_closed_form(c(0.0, 0.0), LambdaRatio::OnePlusOverOneMinus).unwrap()
            - map.h(c(0.0, 0.0)).unwrap().value())
        .norm()
            < 1e-14);
        assert_eq!(sqrt_cut_positive_real(c(-1.0, 0.0)).unwrap(), Complex64::from_polar(1.0, -PI / 2.0));
        assert!(sqrt_cut_positive_real(c(2.0, 0.0)).is_err());
    }

    #[test]
    fn derivative_matches_central_differences() {
        let map = SlitMap::new();
        let step = 1e-6;
        for zeta in [c(0.1, 0.2), c(-0.6, 0.3), c(0.95, -0.1), c(-0.2, -0.9)] {
            let analytic = map.h_derivative(zeta).unwrap();
            let fd = (map.h(zeta + step).unwrap().value() - map.h(zeta - step).unwrap().value()) / (2.0 * step);
            assert!((analytic - fd).norm() < 1e-6 * (1.0 + analytic.norm()), "{zeta}: {analytic} vs {fd}");
        }
    }

    #[test]
    fn boundary_behaviour() {
        let map = SlitMap::new();
        let trace = boundary_trace(&map, 256).unwrap();
        assert_eq!(trace.preimages_of_one, vec![ONE, -ONE]);
        assert_eq!(trace.preimages_of_zero.len(), 1);
        let eta0 = slit_tip_image();
        assert!((trace.preimages_of_zero[0] - eta0).norm() < 1e-6);
        let (a, b) = trace.slit_arc.unwrap();
        assert!(a > 0.0 && b < PI);
        let bad: Vec<_> = trace.samples.iter().filter(|s| !s.converged).collect();
        assert!(bad.is_empty(), "{bad:?}");
        assert!(boundary_trace(&map, 8).is_err());
    }

    #[test]
    fn angles_are_preserved() {
        let map = SlitMap::new();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let z = Complex64::from_polar(rng.gen_range(0.1..0.9), rng.gen_range(0.2..(2.0 * PI - 0.2)));
            let d1 = Complex64::from_polar(1.0, rng.gen::<f64>() * 2.0 * PI);
            let d2 = Complex64::from_polar(1.0, rng.gen::<f64>() * 2.0 * PI);
            let (before, after) = angle_preservation(&map, z, d1, d2, 1e-7).unwrap();
            let diff = (after - before + PI).rem_euclid(2.0 * PI) - PI;
            assert!(diff.abs() < 1e-4, "{z}: {before} vs {after}");
        }
    }
}
