use std::path::Path;
use std::process::{Command, Output};

fn slitdisk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slitdisk")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn first_complex(s: &str) -> (f64, f64) {
    let line = s.lines().next().unwrap();
    match line.split_once(',') {
        Some((re, im)) => (re.parse().unwrap(), im.parse().unwrap()),
        None => (line.parse().unwrap(), 0.0),
    }
}

#[test]
fn singular_at_origin_prints_exp_minus_one() {
    let o = slitdisk(&["eval", "singular", "--t", "1", "--eta", "1", "--point", "0,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0.367879441171442\n");
}

#[test]
fn map_h_then_map_g_round_trips() {
    let h = slitdisk(&["eval", "map-h", "--point", "0.5,0"]);
    assert_eq!(h.status.code(), Some(0));
    let point = stdout(&h).lines().next().unwrap().to_string();
    let g = slitdisk(&["eval", "map-g", "--point", &point]);
    let (re, im) = first_complex(&stdout(&g));
    assert!((re - 0.5).abs() < 1e-9 && im.abs() < 1e-9, "{re},{im}");
}

#[test]
fn deviation_output_feeds_back_in() {
    // the upper edge of the slit goes to -1; its deviation line is valid input
    let g = slitdisk(&["eval", "map-g", "--point", "dev:1e-20,-1e-20"]);
    let out = stdout(&g);
    let dev = out.lines().nth(1).expect("deviation line");
    assert!(dev.starts_with("dev@-1,0:"), "{out}");
    let h = slitdisk(&["eval", "map-h", "--point", dev]);
    let back = stdout(&h);
    let line = back.lines().nth(1).unwrap();
    let (re, im) = line.strip_prefix("dev@1,0:").unwrap().split_once(',').unwrap();
    let (re, im): (f64, f64) = (re.parse().unwrap(), im.parse().unwrap());
    assert!((re - 1e-20).abs() < 1e-30 && (im + 1e-20).abs() < 1e-30, "{back}");
}

#[test]
fn phi_vanishes_at_its_designated_zero() {
    let o = slitdisk(&["eval", "phi", "--point", "-0.921478060046189376,-0.0554272517321016166"]);
    assert_eq!(o.status.code(), Some(0));
    let (re, im) = first_complex(&stdout(&o));
    assert!(re.hypot(im) < 1e-9);
}

#[test]
fn exit_codes() {
    assert_eq!(slitdisk(&["eval", "map-g", "--point", "0.5,0"]).status.code(), Some(3));
    assert_eq!(slitdisk(&["eval", "blaschke", "--point", "2,0"]).status.code(), Some(3));
    assert_eq!(slitdisk(&["eval", "blaschke", "--point", "x,y"]).status.code(), Some(2));
    assert_eq!(slitdisk(&["eval", "nothing", "--point", "0,0"]).status.code(), Some(2));
    assert_eq!(slitdisk(&["eval", "phi", "--a", "0.3,0", "--point", "0,0"]).status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(slitdisk(&["--out-dir", out, "render", "h", "--region", "1,0,0,1"]).status.code(), Some(2));
    assert_eq!(slitdisk(&["--out-dir", out, "verify", "slit-floor", "--m", "9..3"]).status.code(), Some(2));

    // an unreachable floor fails the check but still writes the report
    let cfg = dir.path().join("strict.conf");
    std::fs::write(&cfg, "[counterexample]\nfloor = 0.5\n").unwrap();
    let o = slitdisk(&["--config", cfg.to_str().unwrap(), "--out-dir", out, "verify", "slit-floor"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(dir.path().join("report.json").exists());
}

#[test]
fn hoffman_and_slit_floor_commands() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = slitdisk(&["--out-dir", out, "verify", "hoffman", "--c", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let v: f64 = text.lines().next().unwrap().rsplit(' ').next().unwrap().parse().unwrap();
    assert!((v - 0.0147).abs() < 1e-3, "{text}");

    let o = slitdisk(&["--out-dir", out, "verify", "slit-floor", "--theta", "0.7853981633974483", "--m", "5..20"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let floor: f64 = text.lines().next().unwrap().strip_prefix("floor = ").unwrap().parse().unwrap();
    assert!(floor >= 0.01, "{text}");
}

fn read(p: &Path) -> Vec<u8> {
    std::fs::read(p).unwrap()
}

#[test]
fn verify_all_is_reproducible() {
    // the config echo includes the output directory, so both runs share one
    let dir = tempfile::tempdir().unwrap();
    let config = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/default.conf");
    let mut runs = Vec::new();
    for _ in 0..2 {
        let o = slitdisk(&["--config", config, "--out-dir", dir.path().to_str().unwrap(), "verify", "all"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        runs.push((read(&dir.path().join("report.json")), read(&dir.path().join("profiles.csv"))));
    }
    assert!(runs[0].0 == runs[1].0, "report.json differs between runs");
    assert!(runs[0].1 == runs[1].1, "profiles.csv differs between runs");
    let json = String::from_utf8(runs[0].0.clone()).unwrap();
    assert!(json.contains("\"schema\": \"slitdisk-report/1\""));
    assert!(json.contains("\"seed\": 0"));
    assert!(json.matches("\"anchor\":").count() >= 12);
    let csv = String::from_utf8(runs[0].1.clone()).unwrap();
    assert!(csv.starts_with("profile,eps,theta,modulus,arg\n"));
    assert!(csv.lines().count() > 10);
}

#[test]
fn render_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (p1, p2) = (dir.path().join("a.ppm"), dir.path().join("b.ppm"));
    for p in [&p1, &p2] {
        let o = slitdisk(&["render", "B", "--res", "48", "--region", "near-1", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let bytes = read(&p1);
    assert_eq!(bytes, read(&p2));
    assert!(bytes.starts_with(b"P3\n48 48\n255\n"));
}
