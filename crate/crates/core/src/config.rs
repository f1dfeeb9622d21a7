//! Run configuration: a flat `key = value` text format with `[section]` headers.
//!
//! ```text
//! # comment
//! [counterexample]
//! a = 0,0.5
//! m_range = 3..20
//! ```
//!
//! Unknown keys are rejected so a typo never silently falls back to a default.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub out_dir: PathBuf,

    /// The off-axis zero of the default product.
    pub a: Complex64,
    /// Listed slit zeros `1 - 1/n!`, `n <= n_max`; the rest is a certified tail.
    pub n_max: usize,
    pub tol: f64,
    pub theta1: f64,
    pub m_range: (usize, usize),
    pub path_range: (usize, usize),
    pub floor: f64,
    pub control: f64,
    pub zero_radius: f64,
    pub aperture_margin: f64,

    pub window: usize,
    pub k_range: (usize, usize),
    /// Pinned lower bounds for the thinness product at the first and last `k`.
    pub thin_first_min: f64,
    pub thin_last_min: f64,
    pub hoffman_c: f64,
    pub hoffman_expected: f64,
    pub hoffman_tol: f64,
    pub geometric_ratios: Vec<f64>,
    pub slit_c_expected: f64,
    pub slit_c_tol: f64,
    pub diagonal_tol: f64,

    pub singular_eps: Vec<f64>,
    pub singular_angles: usize,

    pub lemma_n_max: usize,
    pub w_samples: usize,
    pub lemma_radii: Vec<f64>,
    pub segment_max: usize,
    pub segment_points: usize,

    pub remark_a: Vec<Complex64>,
    pub remark_expected: i64,

    pub general_max_index: usize,
    pub general_thetas: Vec<f64>,

    pub metric_samples: usize,
    pub chain_samples: usize,
    pub boundary_samples: usize,
    pub contour_nodes: usize,
    pub closed_form_tol: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};
        Self {
            seed: 0,
            out_dir: PathBuf::from("out"),
            a: Complex64::new(0.0, 0.5),
            n_max: 20,
            tol: 1e-9,
            theta1: FRAC_PI_4,
            m_range: (3, 20),
            path_range: (3, 12),
            floor: 0.01,
            control: 1e-6,
            zero_radius: 0.995,
            aperture_margin: 0.1,
            window: 60,
            k_range: (10, 30),
            thin_first_min: 0.681,
            thin_last_min: 0.877,
            hoffman_c: 0.5,
            hoffman_expected: 0.0147,
            hoffman_tol: 1e-3,
            geometric_ratios: vec![0.1, 0.3, 0.5],
            slit_c_expected: 0.21473,
            slit_c_tol: 1e-4,
            diagonal_tol: 1e-4,
            singular_eps: vec![1e-1, 1e-2, 1e-3, 1e-4],
            singular_angles: 20,
            lemma_n_max: 12,
            w_samples: 20,
            lemma_radii: vec![0.9, 0.99, 0.999],
            segment_max: 4,
            segment_points: 4000,
            remark_a: vec![
                Complex64::from_polar(0.3, 3.0 * FRAC_PI_4),
                Complex64::from_polar(0.5, 2.0 * FRAC_PI_3),
            ],
            remark_expected: 2,
            general_max_index: 15,
            general_thetas: vec![FRAC_PI_4, FRAC_PI_3],
            metric_samples: 10_000,
            chain_samples: 10_000,
            boundary_samples: 256,
            contour_nodes: 256,
            closed_form_tol: 1e-8,
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.trim().parse().map_err(|_| Error::Parse(format!("{key}: '{v}' is not a number")))
}

fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.trim().parse().map_err(|_| Error::Parse(format!("{key}: '{v}' is not a non-negative integer")))
}

/// `re,im` or a bare real number.
pub fn parse_complex(v: &str) -> Result<Complex64> {
    let v = v.trim();
    match v.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(parse_f64("complex", re)?, parse_f64("complex", im)?)),
        None => Ok(Complex64::new(parse_f64("complex", v)?, 0.0)),
    }
}

/// `lo..hi`, inclusive on both ends.
pub fn parse_range(v: &str) -> Result<(usize, usize)> {
    let (lo, hi) = v
        .trim()
        .split_once("..")
        .ok_or_else(|| Error::Parse(format!("'{v}' is not a range lo..hi")))?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let (lo, hi) = (parse_usize("range", lo)?, parse_usize("range", hi)?);
    if lo > hi {
        return Err(Error::Parse(format!("empty range {v}")));
    }
    Ok((lo, hi))
}

fn parse_list<T>(v: &str, sep: char, item: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    v.split(sep).map(str::trim).filter(|s| !s.is_empty()).map(item).collect()
}

fn fmt_list<T>(items: &[T], sep: &str, item: impl Fn(&T) -> String) -> String {
    items.iter().map(item).collect::<Vec<_>>().join(sep)
}

fn fmt_complex(z: &Complex64) -> String {
    format!("{:?},{:?}", z.re, z.im)
}

impl RunConfig {
    pub fn m_range(&self) -> RangeInclusive<usize> {
        self.m_range.0..=self.m_range.1
    }

    pub fn path_range(&self) -> RangeInclusive<usize> {
        self.path_range.0..=self.path_range.1
    }

    /// Parses `text` on top of the defaults.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut section = String::new();
        let mut seen = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
            let full = if section.is_empty() { key.trim().to_string() } else { format!("{section}.{}", key.trim()) };
            if seen.insert(full.clone(), lineno).is_some() {
                return Err(Error::Parse(format!("line {}: duplicate key {full}", lineno + 1)));
            }
            cfg.set(&full, value.trim())
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<()> {
        let f = |v: &str| parse_f64(key, v);
        let u = |v: &str| parse_usize(key, v);
        match key {
            "run.seed" => self.seed = v.parse().map_err(|_| Error::Parse(format!("bad seed '{v}'")))?,
            "run.out_dir" => self.out_dir = PathBuf::from(v),
            "counterexample.a" => self.a = parse_complex(v)?,
            "counterexample.n_max" => self.n_max = u(v)?,
            "counterexample.tol" => self.tol = f(v)?,
            "counterexample.theta1" => self.theta1 = f(v)?,
            "counterexample.m_range" => self.m_range = parse_range(v)?,
            "counterexample.path_range" => self.path_range = parse_range(v)?,
            "counterexample.floor" => self.floor = f(v)?,
            "counterexample.control" => self.control = f(v)?,
            "counterexample.zero_radius" => self.zero_radius = f(v)?,
            "counterexample.aperture_margin" => self.aperture_margin = f(v)?,
            "thin.window" => self.window = u(v)?,
            "thin.k_range" => self.k_range = parse_range(v)?,
            "thin.first_min" => self.thin_first_min = f(v)?,
            "thin.last_min" => self.thin_last_min = f(v)?,
            "thin.hoffman_c" => self.hoffman_c = f(v)?,
            "thin.hoffman_expected" => self.hoffman_expected = f(v)?,
            "thin.hoffman_tol" => self.hoffman_tol = f(v)?,
            "thin.geometric_ratios" => self.geometric_ratios = parse_list(v, ',', f)?,
            "thin.slit_c_expected" => self.slit_c_expected = f(v)?,
            "thin.slit_c_tol" => self.slit_c_tol = f(v)?,
            "thin.diagonal_tol" => self.diagonal_tol = f(v)?,
            "singular.eps" => self.singular_eps = parse_list(v, ',', f)?,
            "singular.angles" => self.singular_angles = u(v)?,
            "lemma.n_max" => self.lemma_n_max = u(v)?,
            "lemma.w_samples" => self.w_samples = u(v)?,
            "lemma.radii" => self.lemma_radii = parse_list(v, ',', f)?,
            "lemma.segment_max" => self.segment_max = u(v)?,
            "lemma.segment_points" => self.segment_points = u(v)?,
            "variant.a" => self.remark_a = parse_list(v, ';', parse_complex)?,
            "variant.expected_zeros" => {
                self.remark_expected = v.parse().map_err(|_| Error::Parse(format!("bad count '{v}'")))?
            }
            "general.max_index" => self.general_max_index = u(v)?,
            "general.thetas" => self.general_thetas = parse_list(v, ',', f)?,
            "grids.metric_samples" => self.metric_samples = u(v)?,
            "grids.chain_samples" => self.chain_samples = u(v)?,
            "grids.boundary_samples" => self.boundary_samples = u(v)?,
            "grids.contour_nodes" => self.contour_nodes = u(v)?,
            "grids.closed_form_tol" => self.closed_form_tol = f(v)?,
            _ => return Err(Error::Parse(format!("unknown key {key}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.a.im == 0.0 || !(self.a.norm() < 1.0) {
            return Err(Error::Domain(format!("a = {} must be interior and off the real axis", self.a)));
        }
        let positive = [
            ("tol", self.tol),
            ("floor", self.floor),
            ("control", self.control),
            ("aperture_margin", self.aperture_margin),
            ("hoffman_tol", self.hoffman_tol),
            ("slit_c_tol", self.slit_c_tol),
            ("diagonal_tol", self.diagonal_tol),
            ("closed_form_tol", self.closed_form_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} = {v} must be positive")));
            }
        }
        if !(self.zero_radius > 0.0 && self.zero_radius < 1.0) {
            return Err(Error::Domain(format!("zero_radius = {} not in (0, 1)", self.zero_radius)));
        }
        if self.lemma_radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
            return Err(Error::Domain("lemma radii must lie in (0, 1)".into()));
        }
        if self.n_max < 5 {
            return Err(Error::Domain(format!("n_max = {} must be at least 5", self.n_max)));
        }
        Ok(())
    }

    /// Text form that parses back to `self`.
    pub fn to_text(&self) -> String {
        let range = |r: (usize, usize)| format!("{}..{}", r.0, r.1);
        let floats = |v: &[f64]| fmt_list(v, ",", |x| format!("{x:?}"));
        let mut s = String::new();
        let mut push = |line: String| {
            s.push_str(&line);
            s.push('\n');
        };
        push("[run]".into());
        push(format!("seed = {}", self.seed));
        push(format!("out_dir = {}", self.out_dir.display()));
        push("\n[counterexample]".into());
        push(format!("a = {}", fmt_complex(&self.a)));
        push(format!("n_max = {}", self.n_max));
        push(format!("tol = {:?}", self.tol));
        push(format!("theta1 = {:?}", self.theta1));
        push(format!("m_range = {}", range(self.m_range)));
        push(format!("path_range = {}", range(self.path_range)));
        push(format!("floor = {:?}", self.floor));
        push(format!("control = {:?}", self.control));
        push(format!("zero_radius = {:?}", self.zero_radius));
        push(format!("aperture_margin = {:?}", self.aperture_margin));
        push("\n[thin]".into());
        push(format!("window = {}", self.window));
        push(format!("k_range = {}", range(self.k_range)));
        push(format!("first_min = {:?}", self.thin_first_min));
        push(format!("last_min = {:?}", self.thin_last_min));
        push(format!("hoffman_c = {:?}", self.hoffman_c));
        push(format!("hoffman_expected = {:?}", self.hoffman_expected));
        push(format!("hoffman_tol = {:?}", self.hoffman_tol));
        push(format!("geometric_ratios = {}", floats(&self.geometric_ratios)));
        push(format!("slit_c_expected = {:?}", self.slit_c_expected));
        push(format!("slit_c_tol = {:?}", self.slit_c_tol));
        push(format!("diagonal_tol = {:?}", self.diagonal_tol));
        push("\n[singular]".into());
        push(format!("eps = {}", floats(&self.singular_eps)));
        push(format!("angles = {}", self.singular_angles));
        push("\n[lemma]".into());
        push(format!("n_max = {}", self.lemma_n_max));
        push(format!("w_samples = {}", self.w_samples));
        push(format!("radii = {}", floats(&self.lemma_radii)));
        push(format!("segment_max = {}", self.segment_max));
        push(format!("segment_points = {}", self.segment_points));
        push("\n[variant]".into());
        push(format!("a = {}", fmt_list(&self.remark_a, "; ", fmt_complex)));
        push(format!("expected_zeros = {}", self.remark_expected));
        push("\n[general]".into());
        push(format!("max_index = {}", self.general_max_index));
        push(format!("thetas = {}", floats(&self.general_thetas)));
        push("\n[grids]".into());
        push(format!("metric_samples = {}", self.metric_samples));
        push(format!("chain_samples = {}", self.chain_samples));
        push(format!("boundary_samples = {}", self.boundary_samples));
        push(format!("contour_nodes = {}", self.contour_nodes));
        push(format!("closed_form_tol = {:?}", self.closed_form_tol));
        s
    }
}
