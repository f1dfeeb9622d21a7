//! The verification battery, grouped the way the command line exposes it.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::{Anchor, Check, Profile, VerificationReport};
use super::{build, with_off_axis_zeros, Counterexample};
use crate::blaschke::{
    arg_attainment_count, count_zeros_argument_principle, factorial_zeros, hoffman_bound, max_arg_attainment,
    segment_preimage_count, slit_angle_floor, slit_constant_c, slit_diagonal_limit, slit_partial_products,
    thin_delta, thin_two_part_bound, ArgAttainment, BlaschkeProduct, SegmentGrid, ZeroSequence,
};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::hyperbolic::{
    mobius, normalized_arg, pseudo_distance, pseudo_distance_deviation, BoundaryDeviation, DiskPoint, Point, ONE,
};
use crate::innerfn::{nontangential_bound, radial_real_part, SingularInner};
use crate::slitmap::{angle_preservation, boundary_trace, select_lambda_ratio, LambdaRatio, SlitMap};

/// A selectable group of checks.
#[derive(Clone, Debug, PartialEq)]
pub enum Suite {
    Thin,
    Hoffman { c: f64 },
    SlitFloor { theta: f64, m_range: (usize, usize) },
    Products,
    Map,
    Counterexample,
    Lemma25,
    Remark26,
    ThinGeneral,
    All,
}

type Batch = (Vec<Check>, Vec<Profile>);

/// Runs `suite` and merges everything into one report.
pub fn run_suite(suite: &Suite, cfg: &RunConfig) -> VerificationReport {
    let (checks, profiles) = collect(suite, cfg);
    VerificationReport::new(cfg, checks, profiles)
}

pub fn run_all(cfg: &RunConfig) -> VerificationReport {
    run_suite(&Suite::All, cfg)
}

fn collect(suite: &Suite, cfg: &RunConfig) -> Batch {
    let only = |checks: Vec<Check>| (checks, Vec::new());
    match suite {
        Suite::Thin => only(vec![metric_invariance(cfg), factorial_thinness(cfg), geometric_hoffman(cfg, &cfg.geometric_ratios)]),
        Suite::Hoffman { c } => only(hoffman_checks(cfg, *c)),
        Suite::SlitFloor { theta, m_range } => only(vec![slit_floor(cfg, *theta, *m_range)]),
        Suite::Products => {
            let mut v = verify_partial_products(cfg);
            v.push(slit_constant_check(cfg));
            only(v)
        }
        Suite::Map => only(map_checks(cfg)),
        Suite::Counterexample => counterexample_checks(cfg),
        Suite::Lemma25 => only(lemma25_report(cfg)),
        Suite::Remark26 => only(remark26_checks(cfg)),
        Suite::ThinGeneral => only(thin_general_checks(cfg)),
        Suite::All => {
            let suites = [
                Suite::Thin,
                Suite::Hoffman { c: cfg.hoffman_c },
                Suite::SlitFloor { theta: cfg.theta1.abs(), m_range: cfg.m_range },
                Suite::SlitFloor { theta: -cfg.theta1.abs(), m_range: cfg.m_range },
                Suite::Products,
                Suite::Map,
                Suite::Counterexample,
                Suite::Lemma25,
                Suite::Remark26,
                Suite::ThinGeneral,
            ];
            let mut all = (Vec::new(), Vec::new());
            for s in &suites {
                let (c, p) = collect(s, cfg);
                for check in c {
                    if !all.0.iter().any(|x: &Check| x.name == check.name) {
                        all.0.push(check);
                    }
                }
                all.1.extend(p);
            }
            all
        }
    }
}

fn rng(cfg: &RunConfig, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(cfg.seed);
    r.set_stream(stream);
    r
}

fn random_disk(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if z.norm() < 1.0 {
            return z * radius;
        }
    }
}

fn sign_label(theta: f64) -> &'static str {
    if theta > 0.0 {
        "plus"
    } else {
        "minus"
    }
}

fn default_build(cfg: &RunConfig) -> Result<Counterexample> {
    build(DiskPoint::new(cfg.a)?, cfg.n_max, cfg.tol)
}

/// `a*b` as an unevaluated sum `hi + lo` (exact for finite inputs).
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let hi = a * b;
    (hi, a.mul_add(b, -hi))
}

/// `|1 - conj(z) w|` with the product carried in double-double, so points near
/// the boundary lose nothing to cancellation.
fn compensated_one_minus(z: Complex64, w: Complex64) -> f64 {
    let (a, ae) = two_prod(z.re, w.re);
    let (b, be) = two_prod(z.im, w.im);
    let (c, ce) = two_prod(z.re, w.im);
    let (d, de) = two_prod(z.im, w.re);
    // conj(z) w = (a + b) + i (c - d); (1 - a) is exact for a in [1/2, 2]
    let re = ((1.0 - a) - b) - (ae + be);
    let im = -((c - d) + (ce - de));
    re.hypot(im)
}

pub fn metric_invariance(cfg: &RunConfig) -> Check {
    Check::run("metric-mobius-invariance", Anchor::ThinnessCriterion, 1e-12, |check| {
        let mut r = rng(cfg, 1);
        let triples: Vec<[Complex64; 3]> =
            (0..cfg.metric_samples).map(|_| [(); 3].map(|_| random_disk(&mut r, 0.95))).collect();
        let errs = exec::map(Strategy::default(), &triples, |[a, z, w]| -> Result<f64> {
            let before = pseudo_distance(*z, *w)?;
            let after = pseudo_distance(mobius(*a, *z)?, mobius(*a, *w)?)?;
            Ok((before - after).abs())
        });
        let worst = errs.into_iter().try_fold(0.0f64, |m, e| e.map(|e| m.max(e)))?;
        check.push("max_invariance_error", worst);

        // deviation form against a compensated plain evaluation on exactly representable points
        let mut rel: f64 = 0.0;
        for _ in 0..cfg.metric_samples.min(2000) {
            let e1 = 10f64.powf(r.gen_range(-8.0..-1.0));
            let e2 = 10f64.powf(r.gen_range(-8.0..-1.0));
            let z = Complex64::new(1.0, 0.0) - Complex64::from_polar(e1, r.gen_range(-1.2..1.2));
            let w = Complex64::new(1.0, 0.0) - Complex64::from_polar(e2, r.gen_range(-1.2..1.2));
            if z.norm() >= 1.0 || w.norm() >= 1.0 {
                continue;
            }
            let (d1, d2) = (ONE - z, ONE - w);
            let dev = pseudo_distance_deviation(BoundaryDeviation::new(d1)?, BoundaryDeviation::new(d2)?)?;
            let reference = (z - w).norm() / compensated_one_minus(z, w);
            rel = rel.max((dev - reference).abs() / reference);
        }
        check.push("max_deviation_relative_error", rel);
        Ok(worst <= 1e-12 && rel <= 1e-10)
    })
}

fn factorial_sequence() -> Result<ZeroSequence> {
    ZeroSequence::factorial(2)
}

pub fn factorial_thinness(cfg: &RunConfig) -> Check {
    let (k0, k1) = cfg.k_range;
    Check::run("factorial-thinness", Anchor::ThinnessCriterion, cfg.thin_first_min, |check| {
        let zeros = factorial_sequence()?;
        let mut values = Vec::new();
        let mut above_bound = true;
        for k in k0..=k1 {
            let v = thin_delta(&zeros, k, cfg.window)?;
            // position k holds 1 - 1/(k+1)!, so every later ratio is at most 1/(k+1)
            let bound = thin_two_part_bound(&zeros, k, k - 1, 1.0 / (k as f64 + 1.0))?;
            above_bound &= v >= bound;
            check.push(format!("delta_{k}"), v);
            check.push(format!("bound_{k}"), bound);
            values.push(v);
        }
        let increasing = values.windows(2).all(|w| w[1] > w[0]);
        let first = values[0];
        let last = *values.last().unwrap();
        Ok(increasing && last > first && first >= cfg.thin_first_min && last >= cfg.thin_last_min && above_bound)
    })
}

pub fn geometric_hoffman(cfg: &RunConfig, ratios: &[f64]) -> Check {
    Check::run("geometric-hoffman", Anchor::ThinnessCriterion, 1e-9, |check| {
        let mut ok = true;
        for &c in ratios {
            let bound = hoffman_bound(c)?;
            let zeros = ZeroSequence::geometric(c)?;
            let mut worst = f64::INFINITY;
            for k in 1..=cfg.window {
                worst = worst.min(thin_delta(&zeros, k, cfg.window)?);
            }
            check.push(format!("hoffman_{c}"), bound);
            check.push(format!("min_delta_{c}"), worst);
            ok &= worst >= bound - 1e-9;
        }
        Ok(ok)
    })
}

pub fn hoffman_checks(cfg: &RunConfig, c: f64) -> Vec<Check> {
    let value = Check::run("hoffman-bound", Anchor::ThinnessCriterion, cfg.hoffman_tol, |check| {
        let v = hoffman_bound(c)?;
        check.push("c", c);
        check.push("bound", v);
        if c == cfg.hoffman_c {
            check.push("expected", cfg.hoffman_expected);
            Ok((v - cfg.hoffman_expected).abs() <= cfg.hoffman_tol)
        } else {
            Ok(v > 0.0 && v < 1.0)
        }
    });
    let mut ratios = cfg.geometric_ratios.clone();
    if c > 0.0 && c < 1.0 && !ratios.contains(&c) {
        ratios.push(c);
    }
    vec![value, geometric_hoffman(cfg, &ratios)]
}

pub fn slit_constant_check(cfg: &RunConfig) -> Check {
    Check::run("slit-constant", Anchor::InnerPartArgument, cfg.slit_c_tol, |check| {
        let c = slit_constant_c();
        check.push("c", c);
        check.push("expected", cfg.slit_c_expected);
        Ok((c - cfg.slit_c_expected).abs() <= cfg.slit_c_tol)
    })
}

/// `min_m |B(1 - e^{i theta}/m!)|` for the default product.
pub fn slit_floor(cfg: &RunConfig, theta: f64, m_range: (usize, usize)) -> Check {
    let name = format!("slit-floor-{}", sign_label(theta));
    Check::run(name, Anchor::InnerPartArgument, cfg.floor, |check| {
        let cx = default_build(cfg)?;
        let floor = slit_angle_floor(cx.blaschke(), theta, m_range.0..=m_range.1)?;
        check.push("theta", theta);
        check.push("floor", floor.floor);
        for (m, v) in &floor.values {
            check.push(format!("m_{m}"), *v);
        }
        Ok(floor.floor >= cfg.floor)
    })
}

/// Products of `d(1 - 1/n!, 1 - e^{i theta}/m!)` above and below `m`, against `c/2`.
pub fn verify_partial_products(cfg: &RunConfig) -> Vec<Check> {
    let half_c = slit_constant_c() / 2.0;
    let mut checks = Vec::new();
    for theta in [cfg.theta1.abs(), -cfg.theta1.abs()] {
        let name = format!("partial-products-{}", sign_label(theta));
        checks.push(Check::run(name, Anchor::InnerPartArgument, half_c - 1e-9, |check| {
            let mut ok = true;
            let (mut lo_above, mut lo_below) = (f64::INFINITY, f64::INFINITY);
            for m in cfg.m_range() {
                let p = slit_partial_products(m, theta)?;
                lo_above = lo_above.min(p.above);
                lo_below = lo_below.min(p.below);
                ok &= p.above >= half_c - 1e-9 && (m <= 2 || p.below >= half_c - 1e-9);
            }
            check.push("theta", theta);
            check.push("min_above", lo_above);
            check.push("min_below", lo_below);
            Ok(ok)
        }));
    }
    checks.push(Check::run("diagonal-limit", Anchor::InnerPartArgument, cfg.diagonal_tol, |check| {
        let theta = cfg.theta1.abs();
        let limit = slit_diagonal_limit(theta);
        let last = slit_partial_products(cfg.m_range.1, theta)?.diagonal;
        let minus = slit_partial_products(cfg.m_range.1, -theta)?.diagonal;
        check.push("limit", limit);
        check.push("diagonal_plus", last);
        check.push("diagonal_minus", minus);
        check.push("tan_half_angle", (theta / 2.0).tan());
        Ok((last - limit).abs() <= cfg.diagonal_tol
            && (minus - limit).abs() <= cfg.diagonal_tol
            && (limit - (theta / 2.0).tan()).abs() <= 1e-12)
    }));
    checks
}

fn on_slit_point(p: Point) -> bool {
    match p {
        Point::Near { anchor, delta } if anchor == ONE => delta.im == 0.0 && delta.re > 0.0 && delta.re <= 1.0,
        _ => {
            let z = p.value();
            z.im == 0.0 && (0.0..1.0).contains(&z.re)
        }
    }
}

pub fn map_checks(cfg: &RunConfig) -> Vec<Check> {
    let map = SlitMap::new();
    let mut r = rng(cfg, 2);
    let zetas: Vec<Complex64> = (0..cfg.chain_samples).map(|_| random_disk(&mut r, 1.0)).collect();
    let slit_disk: Vec<Complex64> = (0..cfg.chain_samples)
        .map(|_| random_disk(&mut r, 1.0))
        .filter(|z| z.im != 0.0)
        .collect();

    let roundtrip = Check::run("chain-roundtrip", Anchor::InnerPartArgument, 1e-9, |check| {
        let rows = exec::map(Strategy::default(), &zetas, |&zeta| -> Result<(f64, bool)> {
            let z = map.h(zeta)?;
            Ok(((map.g(z)?.value() - zeta).norm(), on_slit_point(z)))
        });
        let mut worst: f64 = 0.0;
        let mut hits = 0usize;
        for row in rows {
            let (e, on) = row?;
            worst = worst.max(e);
            hits += on as usize;
        }
        let back = exec::map(Strategy::default(), &slit_disk, |&z| -> Result<f64> {
            Ok((map.h(map.g(z)?)?.value() - z).norm())
        });
        let worst_back = back.into_iter().try_fold(0.0f64, |m, e| e.map(|e| m.max(e)))?;
        check.push("max_g_of_h_error", worst);
        check.push("max_h_of_g_error", worst_back);
        check.push("slit_hits", hits as f64);
        Ok(worst <= 1e-9 && worst_back <= 1e-9 && hits == 0)
    });

    let boundary = Check::run("boundary-limits", Anchor::InnerPartArgument, 1e-4, |check| {
        let trace = boundary_trace(&map, cfg.boundary_samples)?;
        let near = |eta: Complex64| trace.preimages_of_one.iter().any(|&z| (z - eta).norm() < 1e-12);
        let dist = |k: usize| trace.samples[k].distance_to_one;
        check.push("preimages_of_one", trace.preimages_of_one.len() as f64);
        check.push("distance_at_plus_one", dist(0));
        check.push("distance_at_minus_one", dist(cfg.boundary_samples / 2));
        check.push("preimages_of_zero", trace.preimages_of_zero.len() as f64);
        Ok(trace.preimages_of_one.len() == 2
            && near(ONE)
            && near(-ONE)
            && dist(0) < 1e-4
            && dist(cfg.boundary_samples / 2) < 1e-4
            && trace.preimages_of_zero.len() == 1)
    });

    let lambda = Check::run("lambda-ratio", Anchor::InnerPartArgument, cfg.closed_form_tol, |check| {
        let pts: Vec<Complex64> = zetas.iter().copied().take(1000).collect();
        let sel = select_lambda_ratio(&map, &pts, cfg.closed_form_tol)?;
        for (ratio, err) in &sel.max_errors {
            let label = match ratio {
                LambdaRatio::PlusOverMinus => "max_error_plus_over_minus",
                LambdaRatio::OnePlusOverOneMinus => "max_error_one_plus_over_one_minus",
            };
            check.push(label, *err);
        }
        check.push("selected", sel.selected.len() as f64);
        Ok(sel.selected.len() == 1)
    });

    let conformal = Check::run("conformality", Anchor::InnerPartArgument, 1e-4, |check| {
        let mut worst: f64 = 0.0;
        for &z in slit_disk.iter().filter(|z| z.norm() < 0.9 && z.norm() > 0.1).take(200) {
            let d1 = Complex64::new(1.0, 0.0);
            let d2 = Complex64::from_polar(1.0, 0.9);
            let (before, after) = angle_preservation(&map, z, d1, d2, 1e-7)?;
            let diff = (before - after + PI).rem_euclid(2.0 * PI) - PI;
            worst = worst.max(diff.abs());
        }
        check.push("max_angle_error", worst);
        Ok(worst <= 1e-4)
    });

    vec![roundtrip, boundary, lambda, conformal]
}

pub fn singular_decay(cfg: &RunConfig) -> Check {
    Check::run("singular-decay", Anchor::InnerPartArgument, 1e-12, |check| {
        let s1 = SingularInner::atom(ONE, 1.0)?;
        let n = cfg.singular_angles.max(2);
        let mut ok = true;
        let mut worst_rel: f64 = 0.0;
        let mut worst_ratio: f64 = 0.0;
        for &eps in &cfg.singular_eps {
            for j in 0..n {
                let theta = -FRAC_PI_4 + FRAC_PI_2 * j as f64 / (n - 1) as f64;
                let v = s1.eval(BoundaryDeviation::polar(eps, theta)?)?.norm();
                let bound = nontangential_bound(eps, FRAC_PI_4);
                let exact = radial_real_part(eps, theta)?.exp();
                // equality holds on the aperture edge, so allow rounding there
                ok &= v <= bound * (1.0 + 1e-12);
                if exact > 0.0 {
                    worst_rel = worst_rel.max((v - exact).abs() / exact);
                }
                if bound > 0.0 {
                    worst_ratio = worst_ratio.max(v / bound);
                }
            }
        }
        check.push("max_relative_error", worst_rel);
        check.push("max_value_over_bound", worst_ratio);
        Ok(ok && worst_rel <= 1e-12)
    })
}

/// Floors along both slit approaches, the control product, and the profiles.
pub fn verify_nontangential_floor(cx: &Counterexample, cfg: &RunConfig) -> Batch {
    let mut checks = Vec::new();
    let mut profiles = Vec::new();
    for (theta, eta, label) in [(FRAC_PI_4, ONE, "eta1"), (-FRAC_PI_4, -ONE, "eta2")] {
        let name = format!("nontangential-floor-{}", sign_label(theta));
        let mut control_profile = None;
        checks.push(Check::run(name, Anchor::InnerPartArgument, cfg.floor, |check| {
            let path = cx.slit_approach(theta, cfg.path_range(), cfg.aperture_margin)?;
            let (phi, control) = cx.approach_profiles(&path)?;
            let max_arg = path.angles().iter().fold(0.0f64, |m, a| m.max(a.abs()));
            // |phi(g(p))| against |B(p)| straight from the deviation form
            let mut mismatch: f64 = 0.0;
            for (k, row) in cfg.path_range().zip(&phi.rows) {
                let eps = crate::blaschke::TailRule::Factorial.deviation(k).unwrap();
                let direct = cx.blaschke().eval(Point::near_one(Complex64::from_polar(eps, theta)))?.norm();
                mismatch = mismatch.max((row.modulus - direct).abs() / direct);
            }
            check.push("target_re", path.eta().re);
            check.push("floor", phi.tail_min);
            check.push("max_abs_arg_deviation", max_arg);
            check.push("max_relative_mismatch", mismatch);
            profiles.push(Profile { label: format!("{label}-phi"), profile: phi.clone() });
            control_profile = Some(control);
            Ok(path.eta() == eta && phi.tail_min >= cfg.floor && max_arg < FRAC_PI_2 - cfg.aperture_margin && mismatch < 1e-6)
        }));
        if eta == ONE {
            checks.push(Check::run("singular-control", Anchor::InnerPartArgument, cfg.control, |check| {
                let control = control_profile.ok_or_else(|| Error::Domain("no path for the control product".into()))?;
                let first = control.rows.first().unwrap().modulus;
                let last = control.rows.last().unwrap().modulus;
                check.push("first", first);
                check.push("last", last);
                profiles.push(Profile { label: format!("{label}-control"), profile: control });
                Ok(last < cfg.control)
            }));
        }
    }
    (checks, profiles)
}

pub fn counterexample_checks(cfg: &RunConfig) -> Batch {
    let cx = match default_build(cfg) {
        Ok(cx) => cx,
        Err(e) => {
            let failed = Check::run("phi-designated-zero", Anchor::InnerPartArgument, cfg.tol, |_| Err(e));
            return (vec![failed, singular_decay(cfg)], Vec::new());
        }
    };
    let mut checks = vec![singular_decay(cfg)];
    checks.push(Check::run("phi-designated-zero", Anchor::InnerPartArgument, cfg.tol, |check| {
        let b = cx.b();
        let v = cx.phi_eval(b)?.norm();
        check.push("b_re", b.value().re);
        check.push("b_im", b.value().im);
        check.push("abs_phi_b", v);
        Ok(v <= cfg.tol && b.is_interior())
    }));
    checks.push(Check::run("phi-zero-count", Anchor::InnerPartArgument, 0.5, |check| {
        let count = cx.phi_zero_count(cfg.zero_radius, cfg.contour_nodes)?;
        let refined = cx.phi_zero_count(cfg.zero_radius, 2 * count.nodes)?;
        let located = cx.phi_zero_sum(cfg.zero_radius, refined.nodes)?;
        let inner = cx.phi_zero_count(0.5 * cx.b().value().norm(), cfg.contour_nodes)?;
        let miss = (located - cx.b().value()).norm();
        check.push("radius", cfg.zero_radius);
        check.push("count", count.count as f64);
        check.push("integral", count.integral);
        check.push("refined_count", refined.count as f64);
        check.push("located_zero_error", miss);
        check.push("count_inside_half_b", inner.count as f64);
        Ok(count.count == 1 && refined.count == 1 && miss < 1e-6 && inner.count == 0)
    }));
    checks.push(Check::run("phi-containment", Anchor::InnerPartArgument, 1.0, |check| {
        let mut r = rng(cfg, 3);
        let pts: Vec<Complex64> = (0..cfg.chain_samples).map(|_| random_disk(&mut r, 1.0)).collect();
        let vals = exec::map(Strategy::default(), &pts, |&z| cx.phi_eval(z).map(|v| v.norm()));
        let worst = vals.into_iter().try_fold(0.0f64, |m, v| v.map(|v| m.max(v)))?;
        check.push("max_abs_phi", worst);
        Ok(worst < 1.0)
    }));
    let (floors, profiles) = verify_nontangential_floor(&cx, cfg);
    checks.extend(floors);
    (checks, profiles)
}

/// `w = B(t)` for seeded `t` in `[0, 0.99)`.
pub fn lemma_targets(b: &BlaschkeProduct, cfg: &RunConfig) -> Result<Vec<Complex64>> {
    let mut r = rng(cfg, 4);
    let mut out = Vec::with_capacity(cfg.w_samples);
    while out.len() < cfg.w_samples {
        let w = b.eval(Complex64::new(r.gen_range(0.0..0.99), 0.0))?;
        if w.norm() > 1e-6 {
            out.push(w);
        }
    }
    Ok(out)
}

pub fn lemma_product(cfg: &RunConfig) -> Result<BlaschkeProduct> {
    BlaschkeProduct::new(factorial_zeros(cfg.a, cfg.lemma_n_max)?.truncated(), 1e-12)
}

/// `phi_a(t) = (|a|/a)(a - t)/(1 - conj(a) t)` on the real line.
fn mobius_factor(a: Complex64) -> impl Fn(f64) -> Result<Complex64> {
    move |t: f64| {
        let z = Complex64::new(t, 0.0);
        Ok((a.norm() / a) * (a - z) / (ONE - a.conj() * z))
    }
}

pub fn lemma25_report(cfg: &RunConfig) -> Vec<Check> {
    let product = lemma_product(cfg);
    let targets = product.as_ref().map_err(Clone::clone).and_then(|b| lemma_targets(b, cfg));

    let segment = Check::run("lemma-segment-count", Anchor::SegmentArgumentCount, cfg.segment_max as f64, |check| {
        let b = product.clone()?;
        let grid = SegmentGrid::for_factorial(cfg.segment_points, cfg.lemma_n_max)?;
        let mut worst = 0usize;
        let mut least = usize::MAX;
        for (i, w) in targets.clone()?.iter().enumerate() {
            let c = segment_preimage_count(&b, *w, &grid)?;
            check.push(format!("w{i}_count"), c.count as f64);
            worst = worst.max(c.count);
            least = least.min(c.count);
        }
        let zero = segment_preimage_count(&b, Complex64::new(0.0, 0.0), &grid)?;
        check.push("max_count", worst as f64);
        check.push("zero_target_count", zero.count as f64);
        // each target is an attained value, so it is seen at least once
        Ok(worst <= cfg.segment_max && least >= 1 && zero.count == cfg.lemma_n_max - 1)
    });

    let growth = Check::run("lemma-disk-growth", Anchor::SegmentArgumentCount, 0.0, |check| {
        let b = product.clone()?;
        let mut ok = true;
        for (i, w) in targets.clone()?.iter().enumerate() {
            let mut counts = Vec::new();
            for &r in &cfg.lemma_radii {
                counts.push(count_zeros_argument_principle(&b, *w, r, cfg.contour_nodes)?.count);
            }
            for (r, c) in cfg.lemma_radii.iter().zip(&counts) {
                check.push(format!("w{i}_r{r}"), *c as f64);
            }
            ok &= counts.windows(2).all(|p| p[1] > p[0]);
        }
        Ok(ok)
    });

    let attainment = Check::run("arg-attainment-max", Anchor::SegmentArgumentCount, (cfg.segment_max / 2) as f64, |check| {
        let f = mobius_factor(cfg.a);
        let grid: Vec<f64> = (0..=4000).map(|i| -1.0 + 2.0 * i as f64 / 4000.0).collect();
        let k0 = max_arg_attainment(&f, &grid, 20)?;
        check.push("observed_max", k0 as f64);
        Ok(k0 != usize::MAX && 2 * k0 <= cfg.segment_max)
    });

    vec![segment, growth, attainment]
}

/// Every `a_j` must satisfy `pi/2 < arg a_j < pi`.
pub fn check_sector(a_list: &[Complex64]) -> Result<()> {
    for &a in a_list {
        let t = a.arg();
        if !(a.norm() < 1.0 && t > FRAC_PI_2 && t < PI) {
            return Err(Error::Sector(format!("{a} is not in the open second-quadrant sector of the disk")));
        }
    }
    if a_list.is_empty() {
        return Err(Error::Sector("empty zero list".into()));
    }
    Ok(())
}

/// Monotone argument of `B_1 = prod phi_{a_j}` on `[0, 1]`, and the zero count
/// of `B_0 B_1` composed with `h`.
pub fn remark26_variant(a_list: &[Complex64], cfg: &RunConfig) -> Result<Vec<Check>> {
    check_sector(a_list)?;
    let grid: Vec<f64> = (0..=4000).map(|i| i as f64 / 4000.0).collect();
    let monotone = Check::run("variant-arg-monotone", Anchor::FiniteProductVariant, 0.0, |check| {
        let factors: Vec<_> = a_list.iter().map(|&a| mobius_factor(a)).collect();
        let b1 = |t: f64| -> Result<Complex64> { factors.iter().map(|f| f(t)).product() };
        let mut prev = None;
        let mut turns = 0.0;
        let mut prev_raw = 0.0;
        let mut min_step = f64::INFINITY;
        for &t in &grid {
            let raw = normalized_arg(b1(t)?)?;
            if prev.is_some() {
                turns -= ((raw - prev_raw) / (2.0 * PI)).round();
            }
            let arg = raw + 2.0 * PI * turns;
            if let Some(p) = prev {
                min_step = min_step.min(arg - p);
            }
            prev = Some(arg);
            prev_raw = raw;
        }
        let total = prev.unwrap() - normalized_arg(b1(0.0)?)?;
        check.push("min_step", min_step);
        check.push("total_increase", total);
        // a strictly increasing argument meets each value at most once per turn
        let single = arg_attainment_count(&b1, normalized_arg(b1(0.5)?)?, &grid)?;
        check.push(
            "attainments_at_midpoint",
            match single {
                ArgAttainment::Finite(n) => n as f64,
                ArgAttainment::Interval => f64::INFINITY,
            },
        );
        Ok(min_step > 0.0)
    });

    let zeros = Check::run("variant-zero-count", Anchor::FiniteProductVariant, cfg.remark_expected as f64, |check| {
        let pts = a_list.iter().map(|&a| DiskPoint::new(a)).collect::<Result<Vec<_>>>()?;
        let cx = with_off_axis_zeros(&pts, cfg.n_max, cfg.tol)?;
        let mut inside = 0;
        for (j, b) in cx.zeros_of_phi().iter().enumerate() {
            check.push(format!("abs_b{j}"), b.value().norm());
            inside += (b.value().norm() < cfg.zero_radius) as i64;
        }
        let count = cx.phi_zero_count(cfg.zero_radius, cfg.contour_nodes)?;
        check.push("count", count.count as f64);
        check.push("integral", count.integral);
        Ok(count.count == cfg.remark_expected && inside == cfg.remark_expected)
    });
    Ok(vec![monotone, zeros])
}

fn remark26_checks(cfg: &RunConfig) -> Vec<Check> {
    remark26_variant(&cfg.remark_a, cfg).unwrap_or_else(|e| {
        vec![Check::run("variant-arg-monotone", Anchor::FiniteProductVariant, 0.0, |_| Err(e))]
    })
}

/// Pairwise `d(1 - e_n, 1 - e_m e^{i theta}) >= d(1 - e_n, 1 - e_m) - 1e-12`
/// and the rotated products against the thinness products.
pub fn verify_thin_generalization(name: &str, eps: &[f64], theta: f64) -> Result<Check> {
    if !(theta.abs() > 0.0 && theta.abs() < FRAC_PI_2) {
        return Err(Error::Domain(format!("angle {theta} not in 0 < |theta| < pi/2")));
    }
    if let Some(i) = eps.windows(2).position(|w| !(w[1] < w[0])) {
        return Err(Error::NonMonotone(i + 1));
    }
    if eps.iter().any(|&e| !(e > 0.0 && e <= 1.0)) {
        return Err(Error::Domain("deviations must lie in (0, 1]".into()));
    }
    Ok(Check::run(name, Anchor::ThinGeneralization, 1e-12, |check| {
        let real: Vec<BoundaryDeviation> =
            eps.iter().map(|&e| BoundaryDeviation::new(Complex64::new(e, 0.0))).collect::<Result<_>>()?;
        let mut worst_margin = f64::INFINITY;
        let mut pairs = 0usize;
        let mut ok = true;
        let mut products = Vec::new();
        for m in 0..eps.len() {
            let rotated = BoundaryDeviation::polar(eps[m], theta)?;
            let (mut thin, mut rot) = (1.0, 1.0);
            for n in 0..eps.len() {
                if n == m {
                    continue;
                }
                let base = pseudo_distance_deviation(real[n], real[m])?;
                let turned = pseudo_distance_deviation(real[n], rotated)?;
                worst_margin = worst_margin.min(turned - base);
                ok &= turned >= base - 1e-12;
                pairs += 1;
                thin *= base;
                rot *= turned;
            }
            ok &= rot >= thin - 1e-12;
            products.push((thin, rot));
        }
        check.push("theta", theta);
        check.push("pairs", pairs as f64);
        check.push("min_margin", worst_margin);
        let (thin_last, rot_last) = *products.last().unwrap();
        check.push("thin_product_last", thin_last);
        check.push("rotated_product_last", rot_last);
        Ok(ok)
    }))
}

pub fn thin_general_checks(cfg: &RunConfig) -> Vec<Check> {
    let nmax = cfg.general_max_index;
    let factorial: Vec<f64> = (2..=nmax)
        .map(|n| crate::blaschke::TailRule::Factorial.deviation(n).unwrap())
        .collect();
    let power: Vec<f64> = (1..=nmax).map(|n| 2f64.powi(-((n * n) as i32))).collect();
    let mut checks = Vec::new();
    for (label, seq) in [("factorial", &factorial), ("power", &power)] {
        for &theta in &cfg.general_thetas {
            let name = format!("thin-general-{label}-{:.0}deg", theta.to_degrees());
            checks.push(
                verify_thin_generalization(&name, seq, theta)
                    .unwrap_or_else(|e| Check::run(name.clone(), Anchor::ThinGeneralization, 1e-12, |_| Err(e))),
            );
        }
    }
    checks
}
