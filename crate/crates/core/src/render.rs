//! Domain-coloring rasters in plain-text PPM (`P3`).
//!
//! Hue follows the argument, brightness the modulus; points where the target
//! is undefined (off its domain, on the slit) are painted black.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;

use crate::counterexample::Counterexample;
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::slitmap::{phi1, phi2};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Phi1,
    Phi2,
    G,
    H,
    B,
    Phi,
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "phi1" => Target::Phi1,
            "phi2" => Target::Phi2,
            "g" => Target::G,
            "h" => Target::H,
            "B" | "b" => Target::B,
            "phi" => Target::Phi,
            _ => return Err(Error::Parse(format!("unknown render target '{s}'"))),
        })
    }
}

/// Axis-aligned window `[x0, x1] x [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Window {
    pub const DISK: Window = Window { x0: -1.0, x1: 1.0, y0: -1.0, y1: 1.0 };
    /// A close-up of the end of the slit at `1`.
    pub const NEAR_ONE: Window = Window { x0: 0.8, x1: 1.0, y0: -0.1, y1: 0.1 };
}

impl FromStr for Window {
    type Err = Error;

    /// `disk`, `near-1`, or `x0,x1,y0,y1`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "disk" => return Ok(Window::DISK),
            "near-1" => return Ok(Window::NEAR_ONE),
            _ => {}
        }
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad region '{s}'"))))
            .collect::<Result<_>>()?;
        let [x0, x1, y0, y1] = parts[..] else {
            return Err(Error::Parse(format!("region '{s}' needs four numbers x0,x1,y0,y1")));
        };
        if !(x0 < x1 && y0 < y1) || parts.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parse(format!("region '{s}' is empty")));
        }
        Ok(Window { x0, x1, y0, y1 })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    /// Row-major RGB, top row first.
    pub pixels: Vec<[u8; 3]>,
}

impl Raster {
    pub fn to_ppm(&self) -> String {
        let mut out = format!("P3\n{} {}\n255\n", self.width, self.height);
        for row in self.pixels.chunks(self.width) {
            let line: Vec<String> = row.iter().map(|p| format!("{} {} {}", p[0], p[1], p[2])).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
        out
    }
}

fn hsv(h: f64, s: f64, v: f64) -> [u8; 3] {
    let h6 = h.rem_euclid(1.0) * 6.0;
    let i = h6.floor();
    let f = h6 - i;
    let (p, q, t) = (v * (1.0 - s), v * (1.0 - s * f), v * (1.0 - s * (1.0 - f)));
    let (r, g, b) = match i as u8 {
        0 => (v, t, p),
        1 => (q, v, p),
        2 => (p, v, t),
        3 => (p, q, v),
        4 => (t, p, v),
        _ => (v, p, q),
    };
    [r, g, b].map(|c| (c.clamp(0.0, 1.0) * 255.0).round() as u8)
}

/// Color of one value: hue from `arg w`, brightness `2|w|/(1 + |w|)` capped at one.
pub fn color(w: Complex64) -> [u8; 3] {
    if !w.is_finite() {
        return [0, 0, 0];
    }
    let m = w.norm();
    let hue = (w.arg() + PI) / (2.0 * PI);
    hsv(hue, 0.9, (2.0 * m / (1.0 + m)).min(1.0))
}

/// Samples `f` at pixel centers, rows from the top (`y1`) down.
pub fn render<F>(strategy: Strategy, f: F, window: Window, width: usize, height: usize) -> Result<Raster>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync + Send,
{
    if width == 0 || height == 0 {
        return Err(Error::Domain("raster needs a positive resolution".into()));
    }
    let rows = exec::map_range(strategy, height, |r| {
        let y = window.y1 - (r as f64 + 0.5) * (window.y1 - window.y0) / height as f64;
        (0..width)
            .map(|c| {
                let x = window.x0 + (c as f64 + 0.5) * (window.x1 - window.x0) / width as f64;
                f(Complex64::new(x, y)).map(color).unwrap_or([0, 0, 0])
            })
            .collect::<Vec<_>>()
    });
    Ok(Raster { width, height, pixels: rows.into_iter().flatten().collect() })
}

/// The function a target names; `B` and `phi` come from `cx`.
pub fn target_fn(target: Target, cx: &Counterexample) -> Box<dyn Fn(Complex64) -> Result<Complex64> + Sync + Send + '_> {
    let map = cx.map();
    match target {
        Target::Phi1 => Box::new(phi1),
        Target::Phi2 => Box::new(phi2),
        Target::G => Box::new(move |z| map.g(z).map(|p| p.value())),
        Target::H => Box::new(move |z| map.h(z).map(|p| p.value())),
        Target::B => Box::new(move |z| cx.blaschke().eval(z)),
        Target::Phi => Box::new(move |z| cx.phi_eval(z)),
    }
}

pub fn render_target(strategy: Strategy, target: Target, cx: &Counterexample, window: Window, res: usize) -> Result<Raster> {
    render(strategy, target_fn(target, cx), window, res, res)
}
