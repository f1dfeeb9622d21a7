//! Finite and infinite Blaschke products.
//!
//! A [`ZeroSequence`] is a finite head of zeros followed by an optional
//! generated tail of real zeros `1 - eps_n` on `(0, 1)`. Tail zeros are kept in
//! deviation form so that products can be evaluated at points like
//! `1 - e^{i pi/4} / 20!` without rounding `1 - 1/n!` to `1`.
//!
//! # Truncation certificate
//!
//! With the normalized factor `b_n(z) = (|z_n|/z_n)(z_n - z)/(1 - conj(z_n) z)`,
//!
//! ```text
//! 1 - b_n(z) = (1 - |z_n|)(z_n + |z_n| z) / (z_n (1 - conj(z_n) z))
//! ```
//!
//! so `|1 - b_n(z)| <= C(z)(1 - |z_n|)` with `C(z) = (1 + |z|)/(1 - |z|)` and
//! absolute constant 1. The discarded tail then satisfies
//! `|prod_{n>N} b_n(z) - 1| <= exp(C(z) * sum_{n>N}(1 - |z_n|)) - 1`, and
//! evaluation stops at the first `N` for which this is at most the requested
//! tolerance. Since `|B_N| <= 1` the same number bounds the absolute error.

mod segment;
mod thin;
mod zero_count;

pub use segment::{
    arg_attainment_count, max_arg_attainment, segment_preimage_count, ArgAttainment, PreimageCount,
    SegmentGrid, MATCH_THRESHOLD,
};
pub use thin::{
    hoffman_bound, ratio_sequence, slit_angle_floor, slit_constant_c, slit_diagonal_limit,
    slit_diagonal_term, slit_partial_products, thin_delta, thin_two_part_bound, SlitFloor,
    SlitProducts,
};
pub use zero_count::{
    contour_count, count_zeros_argument_principle, count_zeros_argument_principle_with, ZeroCount,
};

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hyperbolic::{one_minus_modulus_of_deviation, Point, ONE};

/// Largest tail index the factorial rule will generate; `1/170!` is still a
/// normal double.
const FACTORIAL_CAP: usize = 170;

/// Generator for real tail zeros `1 - eps_n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TailRule {
    /// `eps_n = 1 / n!`
    Factorial,
    /// `eps_n = ratio^n`
    Geometric { ratio: f64 },
}

impl TailRule {
    /// `eps_n`, or `None` once it is no longer representable.
    pub fn deviation(&self, n: usize) -> Option<f64> {
        match *self {
            TailRule::Factorial => {
                if n > FACTORIAL_CAP {
                    return None;
                }
                let mut eps = 1.0;
                for k in 2..=n {
                    eps /= k as f64;
                }
                Some(eps)
            }
            TailRule::Geometric { ratio } => {
                let eps = ratio.powi(n as i32);
                (eps > 1e-290).then_some(eps)
            }
        }
    }

    /// Upper bound for `sum_{k >= n} eps_k`.
    pub fn tail_sum_from(&self, n: usize) -> f64 {
        match *self {
            TailRule::Factorial => {
                // past the cap the tail is not representable, so no bound is claimed
                match self.deviation(n) {
                    Some(eps) => eps * (n as f64 + 1.0) / n.max(1) as f64,
                    None => f64::INFINITY,
                }
            }
            TailRule::Geometric { ratio } => ratio.powi(n as i32) / (1.0 - ratio),
        }
    }

    fn max_index(&self) -> usize {
        match *self {
            TailRule::Factorial => FACTORIAL_CAP,
            TailRule::Geometric { ratio } => (-290.0 / ratio.log10()).floor() as usize,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tail {
    pub rule: TailRule,
    /// First generator index.
    pub start: usize,
    /// Last generator index, for a truncated finite tail.
    pub end: Option<usize>,
}

/// Zeros of a Blaschke product: a listed head followed by a generated tail.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroSequence {
    head: Vec<Point>,
    tail: Option<Tail>,
}

impl ZeroSequence {
    pub fn new(head: Vec<Point>, tail: Option<Tail>) -> Result<Self> {
        for z in &head {
            if !z.is_finite() || !z.is_interior() {
                return Err(Error::Domain(format!("zero {:?} is not inside the unit disk", z)));
            }
        }
        if let Some(t) = &tail {
            if let TailRule::Geometric { ratio } = t.rule {
                if !(ratio > 0.0 && ratio < 1.0) {
                    return Err(Error::Domain(format!("geometric ratio {ratio} not in (0, 1)")));
                }
            }
            if t.rule.deviation(t.start).is_none_or(|e| !(e > 0.0 && e < 2.0)) {
                return Err(Error::Domain(format!("tail start {} gives no zero", t.start)));
            }
            if t.end.is_some_and(|e| e < t.start) {
                return Err(Error::Domain("tail ends before it starts".into()));
            }
        }
        Ok(Self { head, tail })
    }

    pub fn finite(zeros: &[Complex64]) -> Result<Self> {
        Self::new(zeros.iter().copied().map(Point::Plain).collect(), None)
    }

    pub fn empty() -> Self {
        Self { head: Vec::new(), tail: None }
    }

    /// Real zeros `1 - 1/n!` for `n >= start`, without a head.
    pub fn factorial(start: usize) -> Result<Self> {
        Self::new(Vec::new(), Some(Tail { rule: TailRule::Factorial, start, end: None }))
    }

    /// Real zeros with `1 - |z_n| = ratio^n`, `n >= 1`.
    pub fn geometric(ratio: f64) -> Result<Self> {
        Self::new(Vec::new(), Some(Tail { rule: TailRule::Geometric { ratio }, start: 1, end: None }))
    }

    /// Real zeros `1 - eps_n` for an explicit list of deviations.
    pub fn from_deviations(eps: &[f64]) -> Result<Self> {
        let head = eps.iter().map(|&e| Point::near_one(Complex64::new(e, 0.0))).collect();
        Self::new(head, None)
    }

    pub fn head(&self) -> &[Point] {
        &self.head
    }

    pub fn tail(&self) -> Option<&Tail> {
        self.tail.as_ref()
    }

    pub fn is_infinite(&self) -> bool {
        self.tail.is_some_and(|t| t.end.is_none())
    }

    /// Total number of zeros, `None` for an infinite sequence.
    pub fn len(&self) -> Option<usize> {
        match self.tail {
            None => Some(self.head.len()),
            Some(Tail { end: None, .. }) => None,
            Some(Tail { start, end: Some(end), .. }) => Some(self.head.len() + end + 1 - start),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// The same zeros with the generated tail dropped.
    pub fn truncated(&self) -> Self {
        Self { head: self.head.clone(), tail: None }
    }

    /// Zero at 0-based position `pos`.
    pub fn zero(&self, pos: usize) -> Option<Point> {
        if pos < self.head.len() {
            return Some(self.head[pos]);
        }
        let t = self.tail?;
        let n = t.start + (pos - self.head.len());
        if t.end.is_some_and(|e| n > e) {
            return None;
        }
        t.rule.deviation(n).map(|e| Point::near_one(Complex64::new(e, 0.0)))
    }

    /// The first `count` zeros (fewer if the sequence is shorter).
    pub fn first(&self, count: usize) -> Vec<Point> {
        (0..count).map_while(|p| self.zero(p)).collect()
    }

    /// `sum_{n <= count} (1 - |z_n|)`.
    pub fn blaschke_condition_partial(&self, count: usize) -> f64 {
        self.first(count).iter().map(|z| z.one_minus_modulus()).sum()
    }

    /// Text form: optional `tail <rule> <start> [params]` header, then one
    /// `re im` line per listed zero.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(t) = &self.tail {
            match t.rule {
                TailRule::Factorial => write!(out, "tail factorial {}", t.start).unwrap(),
                TailRule::Geometric { ratio } => write!(out, "tail geometric {} {:?}", t.start, ratio).unwrap(),
            }
            if let Some(end) = t.end {
                write!(out, " end {end}").unwrap();
            }
            out.push('\n');
        }
        for z in &self.head {
            let v = z.value();
            writeln!(out, "{:?} {:?}", v.re, v.im).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut head = Vec::new();
        let mut tail = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::Parse(format!("line {}: {msg}: {raw:?}", lineno + 1));
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields[0] == "tail" {
                if tail.is_some() || !head.is_empty() {
                    return Err(bad("tail header must come first and only once"));
                }
                let num = |s: Option<&&str>| -> Result<usize> {
                    s.ok_or_else(|| bad("missing index"))?.parse().map_err(|_| bad("bad index"))
                };
                let (rule, mut rest) = match fields.get(1).copied() {
                    Some("factorial") => (TailRule::Factorial, 3),
                    Some("geometric") => {
                        let ratio = fields
                            .get(3)
                            .ok_or_else(|| bad("missing ratio"))?
                            .parse()
                            .map_err(|_| bad("bad ratio"))?;
                        (TailRule::Geometric { ratio }, 4)
                    }
                    _ => return Err(bad("unknown tail rule")),
                };
                let start = num(fields.get(2))?;
                let mut end = None;
                if fields.get(rest) == Some(&"end") {
                    end = Some(num(fields.get(rest + 1))?);
                    rest += 2;
                }
                if fields.len() != rest {
                    return Err(bad("trailing fields"));
                }
                tail = Some(Tail { rule, start, end });
                continue;
            }
            if fields.len() != 2 {
                return Err(bad("expected `re im`"));
            }
            let re: f64 = fields[0].parse().map_err(|_| bad("bad real part"))?;
            let im: f64 = fields[1].parse().map_err(|_| bad("bad imaginary part"))?;
            head.push(if im == 0.0 && re > 0.5 && re < 1.0 {
                Point::near_one(Complex64::new(1.0 - re, 0.0))
            } else {
                Point::Plain(Complex64::new(re, im))
            });
        }
        Self::new(head, tail)
    }
}

/// `{a} ∪ {1 - 1/n! : 2 <= n <= n_max}` with the factorial rule continuing
/// from `n_max + 1`.
pub fn factorial_zeros(a: Complex64, n_max: usize) -> Result<ZeroSequence> {
    if a.im == 0.0 {
        return Err(Error::Domain(format!("a = {a} lies on the real axis")));
    }
    if !(a.norm() < 1.0) {
        return Err(Error::Domain(format!("a = {a} is not inside the unit disk")));
    }
    if n_max < 2 {
        return Err(Error::Domain("n_max must be at least 2".into()));
    }
    let mut head = vec![Point::Plain(a)];
    for n in 2..=n_max {
        let eps = TailRule::Factorial.deviation(n).ok_or_else(|| Error::Domain("n_max too large".into()))?;
        head.push(Point::near_one(Complex64::new(eps, 0.0)));
    }
    ZeroSequence::new(head, Some(Tail { rule: TailRule::Factorial, start: n_max + 1, end: None }))
}

/// Normalized factor `(|z_n|/z_n)(z_n - z)/(1 - conj(z_n) z)`; `z` itself for a
/// zero at the origin.
pub(crate) fn factor(zero: Point, z: Point) -> Complex64 {
    match (zero, z) {
        (Point::Near { anchor: a, delta: eps }, Point::Near { anchor: b, delta }) if a == b => {
            let unimodular = (ONE - eps).norm() / (ONE - eps);
            unimodular * (delta - eps) / (eps.conj() + delta - eps.conj() * delta)
        }
        _ => {
            let zn = zero.value();
            let zv = z.value();
            if zn.norm() == 0.0 {
                return zv;
            }
            (zn.norm() / zn) * (zn - zv) / (ONE - zn.conj() * zv)
        }
    }
}

/// `d/dz log b_n(z) = (|z_n|^2 - 1) / ((z_n - z)(1 - conj(z_n) z))`.
fn log_derivative_term(zero: Point, z: Point) -> Result<Complex64> {
    let term = match (zero, z) {
        (Point::Near { anchor: a, delta: eps }, Point::Near { anchor: b, delta }) if a == b => {
            let diff = delta - eps;
            if diff.norm() == 0.0 {
                return Err(Error::Pole(format!("{z:?} is a zero of the product")));
            }
            let one_minus_sq = 2.0 * eps.re - eps.norm_sqr();
            -one_minus_sq / (a * diff * (eps.conj() + delta - eps.conj() * delta))
        }
        _ => {
            let zn = zero.value();
            let zv = z.value();
            if zn == zv {
                return Err(Error::Pole(format!("{z:?} is a zero of the product")));
            }
            if zn.norm() == 0.0 {
                return Ok(ONE / zv);
            }
            (zn.norm_sqr() - 1.0) / ((zn - zv) * (ONE - zn.conj() * zv))
        }
    };
    Ok(term)
}

/// A Blaschke product with certified truncation of its generated tail.
#[derive(Clone, Debug, PartialEq)]
pub struct BlaschkeProduct {
    zeros: ZeroSequence,
    tol: f64,
}

impl BlaschkeProduct {
    pub fn new(zeros: ZeroSequence, truncation_tolerance: f64) -> Result<Self> {
        if !(truncation_tolerance > 0.0) {
            return Err(Error::Domain("truncation tolerance must be positive".into()));
        }
        Ok(Self { zeros, tol: truncation_tolerance })
    }

    pub fn zeros(&self) -> &ZeroSequence {
        &self.zeros
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// `C(z) = (1 + |z|)/(1 - |z|)`.
    fn tail_constant(z: Point) -> Result<f64> {
        let gap = z.one_minus_modulus();
        if !(gap > 0.0) {
            return Err(Error::Domain(format!("{z:?} is not inside the unit disk")));
        }
        Ok((2.0 - gap) / gap)
    }

    /// The factors kept at `z`: the head plus enough of the tail to meet `tol`.
    pub fn retained_zeros(&self, z: Point, tol: f64) -> Result<Vec<Point>> {
        let mut kept = self.zeros.head.clone();
        let Some(t) = self.zeros.tail else { return Ok(kept) };
        let near = |eps: f64| Point::near_one(Complex64::new(eps, 0.0));
        if let Some(end) = t.end {
            for n in t.start..=end {
                let eps = t.rule.deviation(n).ok_or_else(|| Error::Truncation(format!("index {n} underflows")))?;
                kept.push(near(eps));
            }
            return Ok(kept);
        }
        let budget = tol.ln_1p();
        let c = Self::tail_constant(z)?;
        let mut n = t.start;
        while c * t.rule.tail_sum_from(n) > budget {
            if n > t.rule.max_index() {
                return Err(Error::Truncation(format!(
                    "tail bound at {z:?} still above {tol:e} after index {n}"
                )));
            }
            let eps = t.rule.deviation(n).ok_or_else(|| Error::Truncation(format!("index {n} underflows")))?;
            kept.push(near(eps));
            n += 1;
        }
        Ok(kept)
    }

    pub fn eval(&self, z: impl Into<Point>) -> Result<Complex64> {
        self.eval_with_tol(z, self.tol)
    }

    pub fn eval_with_tol(&self, z: impl Into<Point>, tol: f64) -> Result<Complex64> {
        let z = z.into();
        z.require_interior()?;
        let kept = self.retained_zeros(z, tol)?;
        Ok(kept.iter().fold(ONE, |acc, &zn| acc * factor(zn, z)))
    }

    /// `B'(z)/B(z)` over the same retained factors as [`eval`](Self::eval).
    pub fn log_derivative(&self, z: impl Into<Point>) -> Result<Complex64> {
        let z = z.into();
        z.require_interior()?;
        let kept = self.retained_zeros(z, self.tol)?;
        let mut sum = Complex64::new(0.0, 0.0);
        for zn in kept {
            sum += log_derivative_term(zn, z)?;
        }
        Ok(sum)
    }

    /// `(B(z), B'(z)/B(z))` in one pass.
    pub fn eval_with_log_derivative(&self, z: impl Into<Point>) -> Result<(Complex64, Complex64)> {
        let z = z.into();
        z.require_interior()?;
        let kept = self.retained_zeros(z, self.tol)?;
        let mut value = ONE;
        let mut logd = Complex64::new(0.0, 0.0);
        for zn in kept {
            value *= factor(zn, z);
            logd += log_derivative_term(zn, z)?;
        }
        Ok((value, logd))
    }
}

/// `1 - |z_n|` for a zero in either representation.
pub fn zero_gap(z: Point) -> f64 {
    match z {
        Point::Near { delta, .. } => one_minus_modulus_of_deviation(delta),
        Point::Plain(v) => 1.0 - v.norm(),
    }
}
