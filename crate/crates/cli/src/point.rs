use num_complex::Complex64;
use slitdisk::config::parse_complex;
use slitdisk::{Error, Point, Result};

/// `re,im` (plain), `dev:re,im` (`1 - delta`) or `dev@ar,ai:re,im`
/// (`anchor (1 - delta)`).
pub fn parse_point(s: &str) -> Result<Point> {
    let s = s.trim();
    let Some(rest) = s.strip_prefix("dev") else {
        return Ok(Point::plain(parse_complex(s)?));
    };
    if let Some(delta) = rest.strip_prefix(':') {
        return Ok(Point::near_one(parse_complex(delta)?));
    }
    let (anchor, delta) = rest
        .strip_prefix('@')
        .and_then(|r| r.split_once(':'))
        .ok_or_else(|| Error::Parse(format!("bad point '{s}'")))?;
    let anchor: Complex64 = parse_complex(anchor)?;
    if (anchor.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Parse(format!("anchor {anchor} is not on the unit circle")));
    }
    Ok(Point::near(anchor, parse_complex(delta)?))
}
