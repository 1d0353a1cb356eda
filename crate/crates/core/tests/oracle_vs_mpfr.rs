//! Oracle hulls of point intervals against MPFR directed roundings
//! (tests/data/mpfr_points.txt, regenerated by mpfr_points.py).

use interval_conform::hexfloat::parse_hex;
use interval_conform::oracle::tightest_hull;
use interval_conform::{Format, FunctionId, Interval, OracleConfig};

#[test]
fn point_hulls_match_mpfr() {
    let data = include_str!("data/mpfr_points.txt");
    let cfg = OracleConfig::default();
    let mut checked = 0;
    for line in data.lines().filter(|l| !l.trim().is_empty()) {
        let t: Vec<&str> = line.split_whitespace().collect();
        let f: FunctionId = t[0].parse().unwrap();
        let format: Format = t[1].parse().unwrap();
        let x = parse_hex(t[2], format).unwrap();
        let rd = parse_hex(t[3], format).unwrap();
        let ru = parse_hex(t[4], format).unwrap();
        let input = Interval::new(x, x, format).unwrap();
        let got = tightest_hull(f, &[input], &cfg).unwrap();
        assert_eq!(got.bounds(), Some((rd, ru)), "{line}");
        checked += 1;
    }
    assert!(checked > 700);
}
