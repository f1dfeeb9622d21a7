use num_complex::Complex64;
use slitdisk::Point;

const DIGITS: usize = 15;

/// `printf("%.15g")`: 15 significant digits, trailing zeros dropped,
/// scientific notation outside `1e-5 <= |x| < 1e15`.
pub fn fmt_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if exp < -5 || exp >= DIGITS as i32 {
        let m = trim(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// The real part alone when the value is real, `re,im` otherwise.
pub fn fmt_value(z: Complex64) -> String {
    if z.im == 0.0 {
        fmt_g(z.re)
    } else {
        format!("{},{}", fmt_g(z.re), fmt_g(z.im))
    }
}

/// The value, followed by the deviation form when the point carries one.
pub fn fmt_point(p: Point) -> String {
    match p {
        Point::Plain(z) => fmt_value(z),
        Point::Near { anchor, delta } => format!(
            "{}\ndev@{},{}:{},{}",
            fmt_value(p.value()),
            fmt_g(anchor.re),
            fmt_g(anchor.im),
            fmt_g(delta.re),
            fmt_g(delta.im)
        ),
    }
}
