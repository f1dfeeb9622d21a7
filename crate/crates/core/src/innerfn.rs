//! Atomic singular inner functions and non-tangential approach paths.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperbolic::{normalized_arg, Point, ONE};

/// Default Stolz aperture.
pub const DEFAULT_APERTURE: f64 = std::f64::consts::FRAC_PI_4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Atom {
    pub eta: Complex64,
    pub mass: f64,
}

/// `prod exp(-t (1 + conj(eta) z)/(1 - conj(eta) z))` over the atoms.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SingularInner {
    atoms: Vec<Atom>,
}

impl SingularInner {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            if (a.eta.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::Domain(format!("atom {} is not on the unit circle", a.eta)));
            }
            if !(a.mass >= 0.0) {
                return Err(Error::Domain(format!("atom mass {} is negative", a.mass)));
            }
        }
        Ok(Self { atoms })
    }

    /// `S_1^t` rotated to `eta`.
    pub fn atom(eta: Complex64, mass: f64) -> Result<Self> {
        Self::new(vec![Atom { eta, mass }])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// The exponent `-sum t (1 + u)/(1 - u)`, `u = conj(eta) z`.
    pub fn exponent(&self, z: impl Into<Point>) -> Result<Complex64> {
        let z = z.into();
        if !z.is_interior() && z.value().norm() > 1.0 + 1e-12 {
            return Err(Error::Domain(format!("{z:?} lies outside the closed disk")));
        }
        let mut total = Complex64::new(0.0, 0.0);
        for atom in self.atoms.iter().filter(|a| a.mass != 0.0) {
            // 1 - u taken straight from the stored deviation when it matches the atom
            let gap = z.deviation_from(atom.eta);
            if gap.norm() == 0.0 {
                return Err(Error::Domain(format!("{z:?} sits on the atom {}", atom.eta)));
            }
            total -= atom.mass * (2.0 * ONE - gap) / gap;
        }
        Ok(total)
    }

    pub fn eval(&self, z: impl Into<Point>) -> Result<Complex64> {
        Ok(self.exponent(z)?.exp())
    }
}

/// `Re(-(1+z)/(1-z))` at `z = 1 - eps e^{i theta}`: `-(2 eps cos(theta) - eps^2)/eps^2`.
pub fn radial_real_part(eps: f64, theta: f64) -> Result<f64> {
    if !(eps > 0.0 && theta.abs() < FRAC_PI_2 && eps < 2.0 * theta.cos()) {
        return Err(Error::Domain(format!("1 - {eps} e^(i{theta}) is not an interior point")));
    }
    Ok(-(2.0 * eps * theta.cos() - eps * eps) / (eps * eps))
}

/// `exp(-2 cos(theta0)/eps + 1)`, the bound on `|S_1|` inside the aperture.
pub fn nontangential_bound(eps: f64, aperture: f64) -> f64 {
    (-2.0 * aperture.cos() / eps + 1.0).exp()
}

/// Points `eta (1 - eps_k e^{i theta_k})` inside a Stolz angle at `eta`.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproachPath {
    eta: Complex64,
    aperture: f64,
    epsilons: Vec<f64>,
    angles: Vec<f64>,
}

impl ApproachPath {
    pub fn eta(&self) -> Complex64 {
        self.eta
    }

    pub fn aperture(&self) -> f64 {
        self.aperture
    }

    pub fn epsilons(&self) -> &[f64] {
        &self.epsilons
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.epsilons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.epsilons.is_empty()
    }

    /// Path points in deviation form.
    pub fn points(&self) -> Vec<Point> {
        self.epsilons
            .iter()
            .zip(&self.angles)
            .map(|(&e, &t)| Point::near(self.eta, Complex64::from_polar(e, t)))
            .collect()
    }
}

pub fn make_path(eta: Complex64, aperture: f64, epsilons: Vec<f64>, angles: Vec<f64>) -> Result<ApproachPath> {
    if (eta.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("path target {eta} is not on the unit circle")));
    }
    if !(aperture > 0.0 && aperture < FRAC_PI_2) {
        return Err(Error::Aperture(format!("aperture {aperture} not in (0, pi/2)")));
    }
    if epsilons.len() != angles.len() || epsilons.is_empty() {
        return Err(Error::Domain("epsilon and angle schedules must be non-empty and equally long".into()));
    }
    if let Some(i) = epsilons.windows(2).position(|w| !(w[1] < w[0])) {
        return Err(Error::NonMonotone(i + 1));
    }
    for (&e, &t) in epsilons.iter().zip(&angles) {
        if t.abs() > aperture {
            return Err(Error::Aperture(format!("angle {t} exceeds aperture {aperture}")));
        }
        if !(e > 0.0 && e < 2.0 * t.cos()) {
            return Err(Error::Domain(format!("eps = {e} at angle {t} leaves the disk")));
        }
    }
    Ok(ApproachPath { eta, aperture, epsilons, angles })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProfileRow {
    pub eps: f64,
    pub theta: f64,
    pub modulus: f64,
    pub arg: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathProfile {
    pub rows: Vec<ProfileRow>,
    /// Minimum of `|f|` over the tail of the path.
    pub tail_min: f64,
}

impl PathProfile {
    /// `eps,theta,modulus,arg` rows, prefixed by `label` when given.
    pub fn to_csv_rows(&self, label: &str, out: &mut String) {
        for r in &self.rows {
            writeln!(out, "{label},{:e},{:?},{:e},{:?}", r.eps, r.theta, r.modulus, r.arg).unwrap();
        }
    }
}

/// Fraction of the path, counted from its end, used for the liminf estimate.
pub const DEFAULT_TAIL_FRACTION: f64 = 0.5;

/// `min |f|` over the last `tail_fraction` of the path, with the whole profile.
pub fn nontangential_inf(
    f: &dyn Fn(Point) -> Result<Complex64>,
    path: &ApproachPath,
    tail_fraction: f64,
) -> Result<PathProfile> {
    let mut rows = Vec::with_capacity(path.len());
    for ((p, &eps), &theta) in path.points().into_iter().zip(&path.epsilons).zip(&path.angles) {
        let v = f(p)?;
        let arg = if v.norm() > 0.0 { normalized_arg(v)? } else { 0.0 };
        rows.push(ProfileRow { eps, theta, modulus: v.norm(), arg });
    }
    let keep = ((rows.len() as f64 * tail_fraction).ceil() as usize).clamp(1, rows.len());
    let tail_min = rows[rows.len() - keep..].iter().map(|r| r.modulus).fold(f64::INFINITY, f64::min);
    Ok(PathProfile { rows, tail_min })
}
