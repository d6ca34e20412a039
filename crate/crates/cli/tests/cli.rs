use std::path::Path;
use std::process::{Command, Output};

fn homfill(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homfill"))
        .current_dir(dir)
        .env_remove("HOMFILL_BUDGET_NODES")
        .args(args)
        .output()
        .expect("binary runs")
}

fn field(out: &str, key: &str) -> Option<String> {
    out.lines().find_map(|l| l.strip_prefix(&format!("{key}: ")).map(str::to_string))
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn build_grid_counts_vertices() {
    let dir = tempfile::tempdir().unwrap();
    let o = homfill(dir.path(), &["build", "--preset", "grid:3x3", "--out", "g.cx"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "vertices").as_deref(), Some("16"));
    let text = std::fs::read_to_string(dir.path().join("g.cx")).unwrap();
    assert!(text.contains("vertices 16"));
}

#[test]
fn unknown_flags_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = homfill(dir.path(), &["build", "--preset", "f2", "--nope", "--out", "x"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Usage"));
    assert_eq!(homfill(dir.path(), &["frobnicate"]).status.code(), Some(1));
    assert_eq!(homfill(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn bad_preset_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = homfill(dir.path(), &["build", "--preset", "grid:3", "--out", "g.cx"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(field(&stdout(&o), "error").is_some());
}

#[test]
fn fill_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(homfill(d, &["build", "--preset", "grid:3x3", "--out", "g.cx"]).status.success());
    let a = homfill(d, &["area", "--complex", "g.cx", "--path", "0,1,5,4,0", "--save-cycle", "c.ch"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(field(&stdout(&a), "norm").as_deref(), Some("2"));
    let o = homfill(d, &["fill", "--complex", "g.cx", "--cycle", "c.ch", "--ring", "Z:disc", "--out", "f.ch"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = stdout(&o);
    assert_eq!(field(&s, "norm").as_deref(), Some("2"));
    assert_eq!(field(&s, "status").as_deref(), Some("optimal"));
    assert!(field(&s, "region_depth").is_some());
    assert_eq!(field(&s, "budget_nodes").as_deref(), Some("2000000"));
    let chain = std::fs::read_to_string(d.join("f.ch")).unwrap();
    assert!(chain.starts_with("homfill chain\nring Z:disc\ndimension 2\nterms 2\n"));
}

#[test]
fn budget_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    homfill(d, &["build", "--preset", "grid:3x3", "--out", "g.cx"]);
    let o = Command::new(env!("CARGO_BIN_EXE_homfill"))
        .current_dir(d)
        .env("HOMFILL_BUDGET_NODES", "1")
        .args(["area", "--complex", "g.cx", "--path", "0,1,2,3,7,11,15,14,13,12,8,4,0"])
        .output()
        .unwrap();
    let s = stdout(&o);
    assert_eq!(field(&s, "budget_nodes").as_deref(), Some("1"));
    let status = field(&s, "status").unwrap();
    assert_ne!(status, "optimal");
    assert_eq!(o.status.code(), Some(if status == "infeasible_within_budget" { 3 } else { 0 }));
}

#[test]
fn hypfill_gate_names_the_precondition() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    homfill(d, &["build", "--preset", "f2", "--radius", "3", "--out", "f.cx"]);
    homfill(d, &["rips", "--complex", "f.cx", "--d", "2", "--out", "r.cx"]);
    homfill(d, &["area", "--complex", "r.cx", "--path", "0,1,2,0", "--save-cycle", "c.ch"]);
    let o = homfill(d, &["hypfill", "--complex", "r.cx", "--cycle", "c.ch", "--delta", "1", "--epsilon", "1", "--basepoint", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("4*delta + 2*epsilon"), "{}", stderr(&o));
}

#[test]
fn hypfill_writes_a_trace() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    homfill(d, &["build", "--preset", "f2", "--radius", "4", "--out", "f.cx"]);
    let delta = homfill(d, &["delta", "--complex", "f.cx"]);
    assert_eq!(field(&stdout(&delta), "delta").as_deref(), Some("0"));
    homfill(d, &["rips", "--complex", "f.cx", "--d", "3", "--out", "r.cx"]);
    // vertex ids of a triangle in the Rips complex: take the first listed 2-cell
    let rips = std::fs::read_to_string(d.join("r.cx")).unwrap();
    let tri: Vec<&str> = rips.lines().skip_while(|l| !l.starts_with("cells 2")).nth(1).unwrap().split(' ').collect();
    let path = format!("{},{},{},{}", tri[0], tri[1], tri[2], tri[0]);
    homfill(d, &["area", "--complex", "r.cx", "--path", &path, "--ring", "Z:disc", "--save-cycle", "c.ch"]);
    let o = homfill(
        d,
        &["hypfill", "--complex", "r.cx", "--cycle", "c.ch", "--delta", "0", "--epsilon", "1", "--basepoint", "0", "--trace", "t.txt", "--out", "h.ch"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let trace = std::fs::read_to_string(d.join("t.txt")).unwrap();
    assert!(trace.starts_with("homfill trace"));
    assert!(d.join("h.ch").exists());
    assert!(field(&stdout(&o), "bound_factor").is_some());
}

#[test]
fn profile_classify_and_plotdata() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    homfill(d, &["build", "--preset", "z2", "--radius", "6", "--out", "z.cx"]);
    let p = homfill(
        d,
        &["profile", "--complex", "z.cx", "--dim", "1", "--lmax", "48", "--ring", "Z:disc", "--exhaustive-to", "6", "--samples", "50", "--seed", "1", "--ball-radius", "6", "--ball-centers", "0", "--out", "p.csv"],
    );
    assert_eq!(p.status.code(), Some(0), "{}", stdout(&p));
    assert_eq!(field(&stdout(&p), "seed").as_deref(), Some("1"));
    let table = std::fs::read_to_string(d.join("p.csv")).unwrap();
    assert!(table.contains("l,f_hat,mode,samples,worst_status"));
    let c = homfill(d, &["classify", "--profile", "p.csv", "--plotdata", "plot.txt"]);
    assert_eq!(c.status.code(), Some(0), "{}", stdout(&c));
    let alpha: f64 = field(&stdout(&c), "alpha").unwrap().parse().unwrap();
    assert!((1.5..2.5).contains(&alpha), "alpha {alpha}");
    let plot = std::fs::read_to_string(d.join("plot.txt")).unwrap();
    assert!(plot.starts_with("# alpha = "));
}

#[test]
fn single_point_profile_cannot_be_classified() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let text = "# complex: x\n# dim: 1\n# ring: Z:disc\n# exhaustive_to: 0\n# seed: 0\n# non_boundaries: 0\nl,f_hat,mode,samples,worst_status\n4,2,sampled,1,optimal\n";
    std::fs::write(d.join("p.csv"), text).unwrap();
    let o = homfill(d, &["classify", "--profile", "p.csv", "--plotdata", "plot.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!d.join("plot.txt").exists());
}

#[test]
fn coning_and_axioms_on_a_grid() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    homfill(d, &["build", "--preset", "grid:4x4", "--out", "g.cx"]);
    let o = homfill(d, &["coning", "--complex", "g.cx", "--base", "12", "--radii", "1,2", "--dim", "1", "--seed", "2", "--out", "c.csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let table = std::fs::read_to_string(d.join("c.csv")).unwrap();
    assert_eq!(table.lines().count(), 3);
    let o = homfill(d, &["axioms", "--complex", "g.cx", "--triples", "10", "--seed", "4", "--grid-width", "4", "--max-side", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let report = stderr(&o);
    assert_eq!(field(&report, "violations").as_deref(), Some("0"));
    assert!(stdout(&o).starts_with("kind,case,lhs,rhs,holds\n"));
}

#[test]
fn outputs_do_not_depend_on_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    homfill(d, &["build", "--preset", "grid:5x5", "--out", "g.cx"]);
    let args = |jobs: &'static str, out: &'static str| {
        vec!["--jobs", jobs, "profile", "--complex", "g.cx", "--dim", "1", "--lmax", "16", "--ring", "Z:abs", "--exhaustive-to", "6", "--samples", "40", "--seed", "9", "--out", out]
    };
    assert!(homfill(d, &args("1", "a.csv")).status.success());
    assert!(homfill(d, &args("3", "b.csv")).status.success());
    assert_eq!(std::fs::read(d.join("a.csv")).unwrap(), std::fs::read(d.join("b.csv")).unwrap());
}
