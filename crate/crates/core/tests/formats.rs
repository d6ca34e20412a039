use std::fs;

use homfill::builders::{rips_complex, Preset};
use homfill::io;
use homfill::profiler::{classify_growth, profile, GrowthBands, ProfileConfig};
use homfill::solver::exact_filling;
use homfill::{Chain, NormKind, NormedRing};
use num_rational::Rational64;

#[test]
fn presets_survive_a_trip_through_disk() {
    let dir = tempfile::tempdir().unwrap();
    for (name, radius) in [("grid:3x3", 0), ("tree:3,3", 0), ("f2", 3), ("z2", 3), ("z2abc", 2), ("genus2", 2)] {
        let preset: Preset = name.parse().unwrap();
        let (cx, m) = preset.build(radius).unwrap();
        let path = dir.path().join("c.cx");
        fs::write(&path, io::write_complex(&cx)).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let back = io::read_complex(&text).unwrap();
        assert_eq!(back, cx, "{name}");
        assert_eq!(back.meta().metric.as_deref(), Some(&*m));
        assert_eq!(io::write_complex(&back), text);
    }
    let (_, m) = Preset::Group("f2".into()).build(2).unwrap();
    let r = rips_complex(&m, Rational64::from_integer(3), 2).unwrap();
    let text = io::write_complex(&r);
    assert!(text.contains("\nrips_scale 3\n"));
    assert_eq!(io::write_complex(&io::read_complex(&text).unwrap()), text);
}

#[test]
fn grid_file_has_sixteen_vertices() {
    let (cx, _) = "grid:3x3".parse::<Preset>().unwrap().build(0).unwrap();
    let text = io::write_complex(&cx);
    assert!(text.lines().any(|l| l == "vertices 16"));
    assert!(text.lines().any(|l| l == "cells 2 18"));
}

#[test]
fn filling_output_round_trips() {
    let (cx, _) = "grid:2x2".parse::<Preset>().unwrap().build(0).unwrap();
    let ring = NormedRing::integers(NormKind::Discrete);
    let z = cx.path_chain(&[0, 1, 2, 5, 8, 7, 6, 3, 0], ring).unwrap();
    let r = exact_filling(&cx, &z, homfill::solver::Budget::nodes(100_000)).unwrap();
    let text = io::write_chain(&r.filling);
    let back: Chain = io::read_chain(&text).unwrap();
    assert_eq!(cx.boundary(&back).unwrap(), z);
    assert_eq!(io::write_chain(&back), text);
}

#[test]
fn plotdata_header_carries_the_exponent() {
    let (cx, _) = "grid:4x4".parse::<Preset>().unwrap().build(0).unwrap();
    let ring = NormedRing::integers(NormKind::Discrete);
    let paths = (1..=4).map(|n| homfill::profiler::cycles::grid_rectangle(4, 0, 0, n, n)).collect();
    let p = profile(&cx, 1, 16, ring, &ProfileConfig { exhaustive_to: 4, paths, ..Default::default() }).unwrap();
    let back = io::read_profile(&io::write_profile(&p)).unwrap();
    let g = classify_growth(&back, &GrowthBands::default()).unwrap();
    let text = io::write_plotdata(&back, &g);
    let first = text.lines().next().unwrap();
    let alpha: f64 = first.strip_prefix("# alpha = ").unwrap().parse().unwrap();
    assert!((1.75..=2.25).contains(&alpha), "{alpha}");
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1 + back.entries.len());
}
