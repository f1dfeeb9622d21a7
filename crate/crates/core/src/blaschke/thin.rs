//! Thinness diagnostics and the boundary estimates along the slit angle.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::Serialize;

use super::{zero_gap, BlaschkeProduct, TailRule, ZeroSequence};
use crate::error::{Error, Result};
use crate::hyperbolic::{deviation_distance, point_distance, Point};

/// Factors closer to one than this are treated as exhausted; the remainder is
/// bounded analytically.
const FACTOR_CUTOFF: f64 = 1e-18;

/// `prod_{j != k, j <= window} d(z_k, z_j)` with 1-based `k`.
pub fn thin_delta(zeros: &ZeroSequence, k: usize, window: usize) -> Result<f64> {
    let pts = zeros.first(window);
    if k == 0 || k > pts.len() || window < k {
        return Err(Error::Index { index: k, len: pts.len() });
    }
    let zk = pts[k - 1];
    let mut prod = 1.0;
    for (j, &zj) in pts.iter().enumerate() {
        if j + 1 != k {
            prod *= point_distance(zk, zj)?;
        }
    }
    Ok(prod)
}

/// Lower bound for [`thin_delta`] split at `prefix`: the exact product over
/// the first `prefix` zeros times `hoffman_bound(c)`, where `c` bounds every
/// consecutive ratio after the prefix.
pub fn thin_two_part_bound(zeros: &ZeroSequence, k: usize, prefix: usize, c: f64) -> Result<f64> {
    if prefix >= k {
        return Err(Error::Index { index: prefix, len: k });
    }
    let pts = zeros.first(k);
    if pts.len() < k {
        return Err(Error::Index { index: k, len: pts.len() });
    }
    let zk = pts[k - 1];
    let mut head = 1.0;
    for &zj in &pts[..prefix] {
        head *= point_distance(zk, zj)?;
    }
    Ok(head * hoffman_bound(c)?)
}

/// `c_n = (1 - |z_n|)/(1 - |z_{n-1}|)` for 1-based positions `n = 2..=count`.
pub fn ratio_sequence(zeros: &ZeroSequence, count: usize) -> Result<Vec<f64>> {
    if count < 2 {
        return Err(Error::Domain("need at least two zeros for a ratio".into()));
    }
    let gaps: Vec<f64> = zeros.first(count).into_iter().map(zero_gap).collect();
    Ok(gaps.windows(2).map(|w| w[1] / w[0]).collect())
}

/// `(prod_{j >= 1} (1 - c^j)/(1 + c^j))^2`.
///
/// Factors are multiplied until `c^j` drops below `1e-18`; the rest of the
/// product is at least `exp(-2 sum c^j / (1 - c^{2j}))`, which is applied as a
/// final correction so the result never overstates the bound.
pub fn hoffman_bound(c: f64) -> Result<f64> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Domain(format!("hoffman_bound needs 0 < c < 1, got {c}")));
    }
    let mut prod = 1.0;
    let mut cj = c;
    while cj >= FACTOR_CUTOFF {
        prod *= (1.0 - cj) / (1.0 + cj);
        cj *= c;
    }
    // log((1-x)/(1+x)) >= -2x/(1-x^2) for 0 < x < 1
    let tail = cj / (1.0 - c);
    let correction = (-2.0 * tail / (1.0 - cj * cj)).exp();
    Ok((prod * correction).powi(2))
}

/// `c = prod_{k >= 2} (1 - 1/k!)/(1 + 1/k!)`, with the same cutoff and tail
/// correction as [`hoffman_bound`].
pub fn slit_constant_c() -> f64 {
    let mut prod = 1.0;
    let mut k = 2usize;
    loop {
        let eps = TailRule::Factorial.deviation(k).unwrap();
        if eps < FACTOR_CUTOFF {
            let tail = TailRule::Factorial.tail_sum_from(k);
            return prod * (-2.0 * tail / (1.0 - eps * eps)).exp();
        }
        prod *= (1.0 - eps) / (1.0 + eps);
        k += 1;
    }
}

fn check_slit_angle(theta: f64) -> Result<()> {
    if !(theta != 0.0 && theta.abs() < FRAC_PI_2) {
        return Err(Error::Domain(format!("slit angle {theta} not in 0 < |theta| < pi/2")));
    }
    Ok(())
}

fn probe(m: usize, theta: f64) -> Result<Complex64> {
    let eps = TailRule::Factorial
        .deviation(m)
        .ok_or_else(|| Error::Domain(format!("1/{m}! is not representable")))?;
    Ok(Complex64::from_polar(eps, theta))
}

/// `d(1 - 1/m!, 1 - e^{i theta}/m!)` in deviation form.
pub fn slit_diagonal_term(m: usize, theta: f64) -> Result<f64> {
    check_slit_angle(theta)?;
    let eps = TailRule::Factorial.deviation(m).ok_or_else(|| Error::Domain("m too large".into()))?;
    Ok(deviation_distance(Complex64::new(eps, 0.0), probe(m, theta)?))
}

/// `|1 - e^{i theta}| / |1 + e^{i theta}| = |tan(theta/2)|`.
pub fn slit_diagonal_limit(theta: f64) -> f64 {
    let e = Complex64::from_polar(1.0, theta);
    (Complex64::new(1.0, 0.0) - e).norm() / (Complex64::new(1.0, 0.0) + e).norm()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlitProducts {
    pub m: usize,
    pub theta: f64,
    /// Lower bound for `prod_{n > m} d(1 - 1/n!, 1 - e^{i theta}/m!)`.
    pub above: f64,
    /// `prod_{2 <= n < m} d(1 - 1/n!, 1 - e^{i theta}/m!)`.
    pub below: f64,
    pub diagonal: f64,
}

/// The two partial products around the diagonal index `m`, all in deviation form.
pub fn slit_partial_products(m: usize, theta: f64) -> Result<SlitProducts> {
    check_slit_angle(theta)?;
    if m < 2 {
        return Err(Error::Domain("m must be at least 2".into()));
    }
    let rule = TailRule::Factorial;
    let dm = probe(m, theta)?;
    let eps_m = rule.deviation(m).unwrap();
    let dist = |n: usize| -> Result<f64> {
        let eps = rule.deviation(n).ok_or_else(|| Error::Truncation(format!("1/{n}! underflows")))?;
        Ok(deviation_distance(Complex64::new(eps, 0.0), dm))
    };

    let below = (2..m).map(dist).product::<Result<f64>>()?;

    let mut above = 1.0;
    let mut n = m + 1;
    loop {
        let eps_n = rule.deviation(n).ok_or_else(|| Error::Truncation(format!("1/{n}! underflows")))?;
        if eps_n / eps_m < FACTOR_CUTOFF {
            // for n > m, d >= (1 - rho)/(1 + rho) with rho = eps_n/eps_m
            let rho_tail = rule.tail_sum_from(n) / eps_m;
            above *= (-2.0 * rho_tail / (1.0 - rho_tail * rho_tail)).exp();
            break;
        }
        above *= dist(n)?;
        n += 1;
    }

    Ok(SlitProducts { m, theta, above, below, diagonal: slit_diagonal_term(m, theta)? })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlitFloor {
    pub theta: f64,
    /// `(m, |B(1 - e^{i theta}/m!)|)` for every probed `m`.
    pub values: Vec<(usize, f64)>,
    pub floor: f64,
}

/// `min_m |B(1 - e^{i theta}/m!)|`, evaluated wholly in deviation form.
pub fn slit_angle_floor(b: &BlaschkeProduct, theta: f64, m_range: std::ops::RangeInclusive<usize>) -> Result<SlitFloor> {
    check_slit_angle(theta)?;
    let mut values = Vec::new();
    for m in m_range {
        let p = Point::near_one(probe(m, theta)?);
        values.push((m, b.eval(p)?.norm()));
    }
    let floor = values.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
    Ok(SlitFloor { theta, values, floor })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blaschke::factorial_zeros;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    /// Independent oracle: plain partial products to j = 60, no tail handling.
    fn hoffman_oracle(c: f64) -> f64 {
        let p: f64 = (1..=60).map(|j| (1.0 - c.powi(j)) / (1.0 + c.powi(j))).product();
        p * p
    }

    #[test]
    fn hoffman_examples() {
        assert_relative_eq!(hoffman_bound(0.5).unwrap(), hoffman_oracle(0.5), max_relative = 1e-14);
        assert!((hoffman_bound(0.5).unwrap() - 0.0147).abs() < 1e-3);
        // mpmath value 0.01467107376425238663
        assert_relative_eq!(hoffman_bound(0.5).unwrap(), 0.014671073764252387, max_relative = 1e-13);
        assert!(hoffman_bound(1e-12).unwrap() > 1.0 - 1e-11);
        let (a, b, c) = (hoffman_bound(0.1).unwrap(), hoffman_bound(0.3).unwrap(), hoffman_bound(0.5).unwrap());
        assert!(a > b && b > c);
        assert!(hoffman_bound(0.0).is_err() && hoffman_bound(1.0).is_err());
    }

    #[test]
    fn slit_constant_examples() {
        let two: f64 = (2..=3).map(|k| {
            let f = TailRule::Factorial.deviation(k).unwrap();
            (1.0 - f) / (1.0 + f)
        }).product();
        assert_relative_eq!(two, 5.0 / 21.0, epsilon = 1e-15);
        // partial products to k = 20, tail bounded by sum 2/k!
        let oracle: f64 = (2..=20).map(|k| {
            let f = TailRule::Factorial.deviation(k).unwrap();
            (1.0 - f) / (1.0 + f)
        }).product();
        let c = slit_constant_c();
        assert!((c - oracle).abs() < 2.0 * TailRule::Factorial.tail_sum_from(21));
        assert!((c - 0.21473).abs() < 1e-4);
        assert_relative_eq!(c, 0.2147322207305501425, max_relative = 1e-14);
    }

    #[test]
    fn thin_delta_examples() {
        let two = ZeroSequence::finite(&[Complex64::new(0.5, 0.0), Complex64::new(-0.5, 0.0)]).unwrap();
        assert_relative_eq!(thin_delta(&two, 1, 2).unwrap(), 0.8, epsilon = 1e-15);
        let one = ZeroSequence::finite(&[Complex64::new(0.5, 0.2)]).unwrap();
        assert_eq!(thin_delta(&one, 1, 1).unwrap(), 1.0);
        assert!(thin_delta(&one, 2, 2).is_err());
        assert!(thin_delta(&two, 0, 2).is_err());

        let fact = ZeroSequence::factorial(2).unwrap();
        let k = 25;
        let delta = thin_delta(&fact, k, 60).unwrap();
        // positions after the first k-1 zeros have ratios 1/n <= 1/(k+1)
        let bound = thin_two_part_bound(&fact, k, k - 1, 1.0 / (k as f64 + 1.0)).unwrap();
        assert!(delta >= bound && delta < 1.0);
    }

    #[test]
    fn ratio_examples() {
        let fact = ZeroSequence::factorial(2).unwrap();
        let r = ratio_sequence(&fact, 3).unwrap();
        assert_relative_eq!(r[0], 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(r[1], 0.25, epsilon = 1e-15);
        let geo = ZeroSequence::geometric(0.3).unwrap();
        for x in ratio_sequence(&geo, 10).unwrap() {
            assert_relative_eq!(x, 0.3, max_relative = 1e-12);
        }
        let flat = ZeroSequence::finite(&[Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.5), Complex64::new(-0.5, 0.0)]).unwrap();
        assert_eq!(ratio_sequence(&flat, 3).unwrap(), vec![1.0, 1.0]);
        assert!(ratio_sequence(&flat, 1).is_err());
    }

    #[test]
    fn geometric_sequences_respect_the_ratio_bound() {
        for c in [0.1, 0.3, 0.5] {
            let seq = ZeroSequence::geometric(c).unwrap();
            let bound = hoffman_bound(c).unwrap();
            for k in 1..=20 {
                assert!(thin_delta(&seq, k, 40).unwrap() >= bound - 1e-9);
            }
        }
    }

    #[test]
    fn slit_products_and_diagonal() {
        let c = slit_constant_c();
        for theta in [PI / 4.0, -PI / 4.0] {
            for m in [3, 10, 20] {
                let p = slit_partial_products(m, theta).unwrap();
                assert!(p.above >= c / 2.0 - 1e-9, "{p:?}");
                assert!(p.below >= c / 2.0 - 1e-9, "{p:?}");
            }
        }
        let lim = slit_diagonal_limit(PI / 4.0);
        assert_relative_eq!(lim, (PI / 8.0).tan(), epsilon = 1e-15);
        assert_relative_eq!(lim, 0.41421356237309505, epsilon = 1e-15);
        assert!((slit_diagonal_term(20, PI / 4.0).unwrap() - lim).abs() < 1e-6);
        assert!(slit_partial_products(5, 0.0).is_err());
        assert!(slit_partial_products(5, FRAC_PI_2).is_err());
    }

    #[test]
    fn slit_floor_matches_oracle() {
        let b = BlaschkeProduct::new(factorial_zeros(Complex64::new(0.0, 0.5), 20).unwrap(), 1e-13).unwrap();
        let plus = slit_angle_floor(&b, PI / 4.0, 5..=20).unwrap();
        let minus = slit_angle_floor(&b, -PI / 4.0, 3..=20).unwrap();
        // mpmath, 60 digits
        assert_relative_eq!(plus.floor, 0.221606129001432195, max_relative = 1e-10);
        assert_relative_eq!(minus.floor, 0.200035628008163861, max_relative = 1e-10);
        assert!(plus.floor >= 0.01);
    }
}
