//! Pseudohyperbolic geometry of the unit disk.
//!
//! Points exponentially close to the boundary are carried as a deviation from
//! a unimodular anchor, `z = anchor * (1 - delta)`. Once `|delta|` drops below
//! machine epsilon the raw value `1 - delta` rounds to `1`, so every formula
//! that probes such scales has a deviation form that never subtracts
//! quantities close to one.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Absolute tolerance for metric comparisons.
pub const METRIC_TOL: f64 = 1e-12;

/// A point of the closed unit disk. Interior unless `boundary` is set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiskPoint {
    value: Complex64,
    boundary: bool,
}

impl DiskPoint {
    pub fn new(value: Complex64) -> Result<Self> {
        if !(value.norm() < 1.0) {
            return Err(Error::Domain(format!("{value} is not inside the unit disk")));
        }
        Ok(Self { value, boundary: false })
    }

    /// A point of the unit circle, for boundary tracing.
    pub fn boundary(value: Complex64) -> Result<Self> {
        if (value.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("{value} is not on the unit circle")));
        }
        Ok(Self { value, boundary: true })
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn is_boundary(&self) -> bool {
        self.boundary
    }
}

/// The point `1 - delta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundaryDeviation {
    delta: Complex64,
}

impl BoundaryDeviation {
    pub fn new(delta: Complex64) -> Result<Self> {
        if delta == Complex64::new(0.0, 0.0) || !delta.is_finite() {
            return Err(Error::Domain("deviation must be finite and nonzero".into()));
        }
        Ok(Self { delta })
    }

    /// `1 - eps * e^{i theta}`.
    pub fn polar(eps: f64, theta: f64) -> Result<Self> {
        Self::new(Complex64::from_polar(eps, theta))
    }

    pub fn delta(&self) -> Complex64 {
        self.delta
    }

    /// `1 - |1 - delta|`, without cancellation.
    pub fn one_minus_modulus(&self) -> f64 {
        one_minus_modulus_of_deviation(self.delta)
    }

    pub fn is_interior(&self) -> bool {
        2.0 * self.delta.re > self.delta.norm_sqr()
    }

    pub fn value(&self) -> Complex64 {
        ONE - self.delta
    }
}

/// `1 - |1 - d|` computed as `(2 Re d - |d|^2) / (1 + |1 - d|)`.
pub fn one_minus_modulus_of_deviation(d: Complex64) -> f64 {
    (2.0 * d.re - d.norm_sqr()) / (1.0 + (ONE - d).norm())
}

/// Either a plain complex value or a point written relative to a boundary anchor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Point {
    Plain(Complex64),
    /// `anchor * (1 - delta)` with `|anchor| = 1`.
    Near { anchor: Complex64, delta: Complex64 },
}

impl Point {
    pub fn plain(z: Complex64) -> Self {
        Point::Plain(z)
    }

    pub fn near_one(delta: Complex64) -> Self {
        Point::Near { anchor: ONE, delta }
    }

    pub fn near(anchor: Complex64, delta: Complex64) -> Self {
        Point::Near { anchor, delta }
    }

    /// The represented value; lossy when the deviation is below machine epsilon.
    pub fn value(&self) -> Complex64 {
        match *self {
            Point::Plain(z) => z,
            Point::Near { anchor, delta } => anchor * (ONE - delta),
        }
    }

    /// Deviation relative to `anchor`, exact when the point is stored against it.
    pub fn deviation_from(&self, anchor: Complex64) -> Complex64 {
        match *self {
            Point::Near { anchor: a, delta } if a == anchor => delta,
            _ => ONE - anchor.conj() * self.value(),
        }
    }

    pub fn one_minus_modulus(&self) -> f64 {
        match *self {
            Point::Plain(z) => 1.0 - z.norm(),
            Point::Near { delta, .. } => one_minus_modulus_of_deviation(delta),
        }
    }

    pub fn is_interior(&self) -> bool {
        match *self {
            Point::Plain(z) => z.norm() < 1.0,
            Point::Near { delta, .. } => 2.0 * delta.re > delta.norm_sqr(),
        }
    }

    pub fn is_finite(&self) -> bool {
        match *self {
            Point::Plain(z) => z.is_finite(),
            Point::Near { anchor, delta } => anchor.is_finite() && delta.is_finite(),
        }
    }

    pub(crate) fn require_interior(&self) -> Result<()> {
        if self.is_interior() {
            Ok(())
        } else {
            Err(Error::Domain(format!("{self:?} is not inside the unit disk")))
        }
    }
}

impl From<Complex64> for Point {
    fn from(z: Complex64) -> Self {
        Point::Plain(z)
    }
}

impl From<DiskPoint> for Point {
    fn from(p: DiskPoint) -> Self {
        Point::Plain(p.value)
    }
}

impl From<BoundaryDeviation> for Point {
    fn from(d: BoundaryDeviation) -> Self {
        Point::near_one(d.delta)
    }
}

fn require_interior(z: Complex64) -> Result<()> {
    if z.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{z} is not inside the unit disk")))
    }
}

/// `|z - w| / |1 - conj(z) w|`.
pub fn pseudo_distance(z: Complex64, w: Complex64) -> Result<f64> {
    require_interior(z)?;
    require_interior(w)?;
    Ok(raw_distance(z, w))
}

fn raw_distance(z: Complex64, w: Complex64) -> f64 {
    let num = (z - w).norm();
    if num == 0.0 {
        return 0.0;
    }
    num / (ONE - z.conj() * w).norm()
}

/// `d(1 - d1, 1 - d2) = |d1 - d2| / |d1 + conj(d2) - conj(d2) d1|`.
pub fn pseudo_distance_deviation(d1: BoundaryDeviation, d2: BoundaryDeviation) -> Result<f64> {
    for d in [d1, d2] {
        if !d.is_interior() {
            return Err(Error::Domain(format!("1 - {} is not inside the unit disk", d.delta)));
        }
    }
    Ok(deviation_distance(d1.delta, d2.delta))
}

pub(crate) fn deviation_distance(d1: Complex64, d2: Complex64) -> f64 {
    let num = (d1 - d2).norm();
    if num == 0.0 {
        return 0.0;
    }
    num / (d1 + d2.conj() - d2.conj() * d1).norm()
}

/// Distance between two points in whatever representation they carry.
/// Points stored against the same anchor use the deviation form.
pub fn point_distance(p: Point, q: Point) -> Result<f64> {
    p.require_interior()?;
    q.require_interior()?;
    match (p, q) {
        (Point::Near { anchor: a, delta: d1 }, Point::Near { anchor: b, delta: d2 }) if a == b => {
            Ok(deviation_distance(d1, d2))
        }
        _ => Ok(raw_distance(p.value(), q.value())),
    }
}

/// The Möbius involution `(a - z) / (1 - conj(a) z)`.
pub fn mobius(a: Complex64, z: Complex64) -> Result<Complex64> {
    require_interior(a)?;
    if z.norm() > 1.0 + 1e-12 {
        return Err(Error::Domain(format!("{z} lies outside the closed disk")));
    }
    Ok((a - z) / (ONE - a.conj() * z))
}

/// Argument shifted into `[0, 2pi)`.
pub fn normalized_arg(z: Complex64) -> Result<f64> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Domain("argument of zero".into()));
    }
    let mut t = z.arg();
    if t < 0.0 {
        t += 2.0 * PI;
    }
    if t >= 2.0 * PI {
        t = 0.0;
    }
    Ok(t)
}
