//! Acceptance suite: one PASS/FAIL line per criterion, thresholds from the
//! shipped configuration. Exits nonzero if any criterion fails.

use std::f64::consts::FRAC_PI_4;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use slitdisk::blaschke::hoffman_bound;
use slitdisk::counterexample::{
    counterexample_checks, factorial_thinness, hoffman_checks, lemma25_report, map_checks, metric_invariance, run_all,
    singular_decay, slit_constant_check, slit_floor, thin_general_checks, verify_partial_products, Check,
};
use slitdisk::RunConfig;

const CONFIG: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/default.conf");

struct Outcome {
    pass: bool,
    detail: String,
}

fn from_checks(checks: &[Check]) -> Outcome {
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| match &c.error {
            Some(e) => format!("{} ({e})", c.name),
            None => c.name.clone(),
        })
        .collect();
    let detail = if failed.is_empty() {
        let names: Vec<&str> = checks.iter().map(|c| c.name.as_str()).collect();
        names.join(", ")
    } else {
        format!("failed: {}", failed.join(", "))
    };
    Outcome { pass: !checks.is_empty() && failed.is_empty(), detail }
}

fn value(check: &Check, label: &str) -> f64 {
    check.values.iter().find(|v| v.label == label).map_or(f64::NAN, |v| v.value)
}

fn metric(cfg: &RunConfig) -> Outcome {
    let c = metric_invariance(cfg);
    let mut o = from_checks(std::slice::from_ref(&c));
    o.detail = format!(
        "invariance {:.2e}, deviation {:.2e} over {} triples",
        value(&c, "max_invariance_error"),
        value(&c, "max_deviation_relative_error"),
        cfg.metric_samples
    );
    o.pass &= cfg.metric_samples >= 10_000;
    o
}

fn hoffman(cfg: &RunConfig) -> Outcome {
    let checks = hoffman_checks(cfg, cfg.hoffman_c);
    let mut o = from_checks(&checks);
    let v = hoffman_bound(cfg.hoffman_c).unwrap_or(f64::NAN);
    o.pass &= (v - cfg.hoffman_expected).abs() <= cfg.hoffman_tol;
    for r in [0.1, 0.3, 0.5] {
        o.pass &= cfg.geometric_ratios.contains(&r);
    }
    o.detail = format!("hoffman_bound({}) = {v:.6}; {}", cfg.hoffman_c, o.detail);
    o
}

fn thinness(cfg: &RunConfig) -> Outcome {
    let c = factorial_thinness(cfg);
    let mut o = from_checks(std::slice::from_ref(&c));
    let (k0, k1) = cfg.k_range;
    o.detail = format!(
        "delta_{k0} = {:.9}, delta_{k1} = {:.9} (window {})",
        value(&c, &format!("delta_{k0}")),
        value(&c, &format!("delta_{k1}")),
        cfg.window
    );
    o
}

fn singular(cfg: &RunConfig) -> Outcome {
    let c = singular_decay(cfg);
    let mut o = from_checks(std::slice::from_ref(&c));
    o.detail = format!(
        "max |S|/bound {:.3}, relative error {:.2e}",
        value(&c, "max_value_over_bound"),
        value(&c, "max_relative_error")
    );
    o
}

fn slit_constant(cfg: &RunConfig) -> Outcome {
    let c = slit_constant_check(cfg);
    let mut o = from_checks(std::slice::from_ref(&c));
    o.detail = format!("c = {:.6}", value(&c, "c"));
    o
}

fn boundary_floor(cfg: &RunConfig) -> Outcome {
    let mut checks = verify_partial_products(cfg);
    let theta = cfg.theta1.abs();
    checks.push(slit_floor(cfg, theta, cfg.m_range));
    checks.push(slit_floor(cfg, -theta, cfg.m_range));
    let mut o = from_checks(&checks);
    o.pass &= cfg.m_range.1 >= 20 && (theta - FRAC_PI_4).abs() < 1e-15;
    let floors: Vec<String> = checks
        .iter()
        .filter(|c| c.name.starts_with("slit-floor"))
        .map(|c| format!("{} {:.5}", c.name, value(c, "floor")))
        .collect();
    o.detail = format!("{}; {}", floors.join(", "), o.detail);
    o
}

fn chain(cfg: &RunConfig) -> Outcome {
    let checks = map_checks(cfg);
    let mut o = from_checks(&checks);
    o.pass &= cfg.chain_samples >= 10_000;
    o
}

fn core(cfg: &RunConfig) -> Outcome {
    let (checks, _) = counterexample_checks(cfg);
    let mut o = from_checks(&checks);
    o.pass &= cfg.zero_radius == 0.995 && cfg.path_range == (3, 12);
    o
}

fn lemma(cfg: &RunConfig) -> Outcome {
    let checks = lemma25_report(cfg);
    let mut o = from_checks(&checks);
    o.pass &= cfg.lemma_n_max == 12 && cfg.w_samples >= 20 && cfg.segment_max <= 4;
    o
}

fn generalization(cfg: &RunConfig) -> Outcome {
    let checks = thin_general_checks(cfg);
    let mut o = from_checks(&checks);
    o.pass &= checks.len() == 4 && cfg.general_max_index >= 15;
    o
}

fn determinism(cfg: &RunConfig) -> Outcome {
    let mut cfg = cfg.clone();
    cfg.seed = 0;
    let first = run_all(&cfg);
    let second = run_all(&cfg);
    let same = first.to_json() == second.to_json() && first.to_csv() == second.to_csv();
    Outcome {
        pass: same && first.pass && first.checks.len() >= 12,
        detail: format!("{} checks, {} profile rows, identical: {same}", first.checks.len(), first.to_csv().lines().count() - 1),
    }
}

type Criterion = (&'static str, u64, fn(&RunConfig) -> Outcome);

fn main() -> ExitCode {
    let cfg = match RunConfig::from_file(std::path::Path::new(CONFIG)) {
        Ok(cfg) => cfg,
        Err(e) => {
            println!("FAIL config: {e}");
            return ExitCode::FAILURE;
        }
    };
    // runtime budgets in seconds
    let criteria: [Criterion; 11] = [
        ("metric suite", 1, metric),
        ("hoffman bound", 1, hoffman),
        ("factorial thinness", 2, thinness),
        ("singular inner decay", 1, singular),
        ("slit constant", 1, slit_constant),
        ("boundary floor", 5, boundary_floor),
        ("conformal chain", 10, chain),
        ("counterexample core", 20, core),
        ("segment and disk counts", 30, lemma),
        ("separation generalization", 1, generalization),
        ("determinism", 120, determinism),
    ];
    let mut all = true;
    let start = Instant::now();
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let mut o = run(&cfg);
        let elapsed = t.elapsed();
        if elapsed > Duration::from_secs(*budget) {
            o.pass = false;
            o.detail = format!("over the {budget} s budget; {}", o.detail);
        }
        all &= o.pass;
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} {:>2} {name} [{:.2} s]: {}", i + 1, elapsed.as_secs_f64(), o.detail);
    }
    println!("total {:.2} s", start.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
