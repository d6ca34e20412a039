use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use homfill::builders::{
    cayley_ball, estimate_delta, rips_complex, DeltaMode, Preset, Presentation, DEFAULT_EXACT_CAP, HEURISTIC_WARNING,
};
use homfill::hypfill::{linear_bound, linear_fill, HyperbolicContext};
use homfill::io;
use homfill::profiler::{
    check_coning, check_rectangle, check_subeuclidean, check_theta, classify_growth, cycles, profile, theta_triples,
    BallProbes, ConingConfig, GrowthBands, ProfileConfig,
};
use homfill::solver::{Budget, Filler, FillingResult, FillingStatus, BUDGET_ENV, DEFAULT_BUDGET_NODES};
use homfill::{Complex, Error, NormedRing};
use num_rational::Rational64;

#[derive(Parser)]
#[command(name = "homfill", version, about = "Filling norms and isoperimetric profiles of simplicial complexes")]
struct Cli {
    /// Worker threads; outputs do not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Also write the run report to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Progress messages on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// Search nodes per filling problem.
    #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_BUDGET_NODES)]
    budget_nodes: u64,
    /// Wall-clock cap per filling problem, in milliseconds.
    #[arg(long)]
    budget_ms: Option<u64>,
}

impl BudgetArgs {
    fn budget(self) -> Budget {
        Budget { nodes: self.budget_nodes, millis: self.budget_ms }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a preset complex: f2 | z2 | z2abc | genus2 | grid:WxH | tree:V,D.
    Build {
        #[arg(long, conflicts_with = "presentation", required_unless_present = "presentation")]
        preset: Option<String>,
        /// Presentation file (generator line, then relator words).
        #[arg(long)]
        presentation: Option<PathBuf>,
        /// Ball radius for group presets.
        #[arg(long, default_value_t = 3)]
        radius: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rips complex on the vertex metric of a complex.
    Rips {
        #[arg(long)]
        complex: PathBuf,
        /// Edge threshold.
        #[arg(long)]
        d: Rational64,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Four-point hyperbolicity constant of the vertex metric.
    Delta {
        #[arg(long)]
        complex: PathBuf,
        /// Sample this many quadruples instead of enumerating (gives a lower bound).
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
        cap: usize,
    },
    /// Minimal filling of a cycle.
    Fill {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        cycle: PathBuf,
        #[arg(long)]
        ring: NormedRing,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Chain file for the filling.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Linear filling of a 1-cycle in a Rips complex of a hyperbolic metric.
    Hypfill {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        cycle: PathBuf,
        #[arg(long)]
        delta: Rational64,
        #[arg(long)]
        epsilon: Rational64,
        #[arg(long)]
        basepoint: u32,
        /// Required slack inside the truncation radius.
        #[arg(long, default_value = "0")]
        margin: Rational64,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Area of a closed edge path.
    Area {
        #[arg(long)]
        complex: PathBuf,
        /// Vertices, comma separated; first and last must agree.
        #[arg(long, value_delimiter = ',', required = true)]
        path: Vec<u32>,
        #[arg(long, default_value = "Z:abs")]
        ring: NormedRing,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the path itself as a chain file, usable as --cycle.
        #[arg(long)]
        save_cycle: Option<PathBuf>,
    },
    /// Isoperimetric profile table.
    Profile {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        lmax: usize,
        #[arg(long)]
        ring: NormedRing,
        #[arg(long, default_value_t = 0)]
        exhaustive_to: usize,
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Probe boundaries of metric balls up to this radius.
        #[arg(long)]
        ball_radius: Option<u32>,
        /// Ball centres (default: every vertex).
        #[arg(long, value_delimiter = ',')]
        ball_centers: Vec<u32>,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Growth class of a profile file.
    Classify {
        #[arg(long)]
        profile: PathBuf,
        /// Write (l, f_hat, fit) rows here.
        #[arg(long)]
        plotdata: Option<PathBuf>,
        /// Also test sub-Euclidean growth in this dimension.
        #[arg(long)]
        subeuclidean: Option<usize>,
    },
    /// Coning ratios on balls around a vertex.
    Coning {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        base: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        radii: Vec<u32>,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value = "Z:abs")]
        ring: NormedRing,
        #[arg(long, default_value_t = 6)]
        exhaustive_to: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 16)]
        max_walk: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Theta and rectangle inequalities.
    Axioms {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long, default_value_t = 200)]
        triples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Check rectangles with sides up to --max-side on a grid of this width.
        #[arg(long)]
        grid_width: Option<u32>,
        #[arg(long, default_value_t = 3)]
        max_side: u32,
        #[arg(long, default_value = "Z:abs")]
        ring: NormedRing,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Keyed summary lines plus warnings, printed in a fixed order.
struct Report {
    fields: Vec<(&'static str, String)>,
    warnings: Vec<String>,
    exit: u8,
    /// A table went to stdout, so the report goes to stderr.
    stdout_taken: bool,
}

impl Report {
    fn new() -> Self {
        Report { fields: Vec::new(), warnings: Vec::new(), exit: 0, stdout_taken: false }
    }

    fn put(&mut self, key: &'static str, value: impl ToString) {
        self.fields.push((key, value.to_string()));
    }

    fn budget(&mut self, b: BudgetArgs) {
        self.put("budget_nodes", b.budget_nodes);
        self.put("budget_ms", b.budget_ms.map_or("none".to_string(), |m| m.to_string()));
    }

    fn filling(&mut self, r: &FillingResult) {
        self.put("norm", &r.norm);
        self.put("status", r.status);
        self.put("nodes", r.nodes);
        self.put("region_depth", r.region.depth);
        self.put("region_cells", r.region.cells);
        self.put("region_full", r.region.full);
        match r.status {
            FillingStatus::Optimal => {}
            FillingStatus::UpperBound => self.warnings.push("filling norm is an upper bound only".into()),
            FillingStatus::InfeasibleWithinBudget => self.exit = 3,
            FillingStatus::NotABoundary => self.exit = 2,
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Budget(_) => 3,
        Error::Certification { .. } => 4,
        _ => 2,
    }
}

fn read(path: &Path) -> homfill::Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> homfill::Result<()> {
    fs::write(path, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}

fn load_complex(path: &Path) -> homfill::Result<Complex> {
    io::read_complex(&read(path)?)
}

fn warn_truncation(cx: &Complex, rep: &mut Report) {
    if let Some(t) = cx.metric().and_then(|m| m.truncation()) {
        rep.warnings.push(format!(
            "complex is a truncation of radius {} about vertex {}; cycles near its edge see boundary effects",
            t.radius, t.center
        ));
    }
}

fn run(command: Command, verbose: u8, rep: &mut Report) -> homfill::Result<()> {
    let say = |msg: &str| {
        if verbose > 0 {
            eprintln!("{msg}");
        }
    };
    match command {
        Command::Build { preset, presentation, radius, out } => {
            let (cx, certified) = match (preset, presentation) {
                (Some(name), _) => {
                    rep.put("preset", &name);
                    let preset: Preset = name.parse()?;
                    let certified = match &preset {
                        Preset::Group(g) => Presentation::preset(g)?.is_certified(),
                        _ => true,
                    };
                    if matches!(preset, Preset::Group(_)) {
                        rep.put("radius", radius);
                    }
                    (preset.build(radius)?.0, certified)
                }
                (None, Some(path)) => {
                    rep.put("presentation", path.display());
                    rep.put("radius", radius);
                    let p = Presentation::parse(&read(&path)?)?;
                    (cayley_ball(&p, radius)?.0, p.is_certified())
                }
                (None, None) => return Err(Error::Config("give --preset or --presentation".into())),
            };
            rep.put("vertices", cx.n_vertices());
            for k in 1..=cx.dimension() {
                rep.put(["edges", "triangles", "tetrahedra"].get(k - 1).copied().unwrap_or("cells"), cx.n_cells(k));
            }
            if !certified {
                rep.warnings.push(HEURISTIC_WARNING.into());
            }
            write(&out, &io::write_complex(&cx))?;
            rep.put("out", out.display());
        }
        Command::Rips { complex, d, max_dim, out } => {
            let base = load_complex(&complex)?;
            let metric = base.meta().metric.clone().ok_or_else(|| Error::Config("complex file has no metric".into()))?;
            let cx = rips_complex(&metric, d, max_dim)?;
            rep.put("d", d);
            rep.put("max_dim", max_dim);
            rep.put("vertices", cx.n_vertices());
            for k in 1..=cx.dimension() {
                rep.put(["edges", "triangles", "tetrahedra"].get(k - 1).copied().unwrap_or("cells"), cx.n_cells(k));
            }
            write(&out, &io::write_complex(&cx))?;
            rep.put("out", out.display());
        }
        Command::Delta { complex, samples, seed, cap } => {
            let cx = load_complex(&complex)?;
            let m = cx.metric().ok_or_else(|| Error::Config("complex file has no metric".into()))?;
            let mode = match samples {
                Some(count) => DeltaMode::Sampled { count, seed },
                None => DeltaMode::Exact { cap },
            };
            let est = estimate_delta(m, mode)?;
            rep.put("delta", est.delta);
            rep.put("mode", if samples.is_some() { "sampled" } else { "exact" });
            rep.put("seed", seed);
            rep.put("quadruples", est.quadruples);
            if samples.is_some() {
                rep.warnings.push("sampled delta is a lower bound".into());
            }
        }
        Command::Fill { complex, cycle, ring, budget, out } => {
            let cx = load_complex(&complex)?;
            let z = io::read_chain(&read(&cycle)?)?.convert(ring);
            rep.put("ring", ring);
            rep.budget(budget);
            say("filling");
            let r = Filler::new(&cx).with_budget(budget.budget()).fill(&z)?;
            rep.filling(&r);
            warn_truncation(&cx, rep);
            if let Some(out) = out {
                write(&out, &io::write_chain(&r.filling))?;
                rep.put("out", out.display());
            }
        }
        Command::Hypfill { complex, cycle, delta, epsilon, basepoint, margin, trace, out } => {
            let cx = load_complex(&complex)?;
            let z = io::read_chain(&read(&cycle)?)?;
            let ctx = HyperbolicContext::new(&cx, delta, epsilon, basepoint)?.with_margin(margin);
            rep.put("delta", delta);
            rep.put("epsilon", epsilon);
            rep.put("basepoint", basepoint);
            rep.put("margin", margin);
            rep.put("k", ctx.k());
            rep.put("bound_factor", linear_bound(&ctx));
            let (r, t) = match linear_fill(&ctx, &z) {
                Ok(x) => x,
                Err(e) => {
                    if let (Error::Certification { trace: Some(t), .. }, Some(path)) = (&e, &trace) {
                        write(path, &io::write_trace(t, z.ring()))?;
                    }
                    return Err(e);
                }
            };
            rep.put("norm", &r.norm);
            rep.put("cycle_norm", z.l1_norm());
            rep.put("status", r.status);
            let [c1, c2, c3] = t.case_counts();
            rep.put("steps", t.steps.len());
            rep.put("case_counts", format!("{c1} {c2} {c3}"));
            if let Some(path) = trace {
                write(&path, &io::write_trace(&t, z.ring()))?;
                rep.put("trace", path.display());
            }
            if let Some(out) = out {
                write(&out, &io::write_chain(&r.filling))?;
                rep.put("out", out.display());
            }
        }
        Command::Area { complex, path, ring, budget, out, save_cycle } => {
            let cx = load_complex(&complex)?;
            if let Some(p) = save_cycle {
                write(&p, &io::write_chain(&cx.path_chain(&path, ring)?))?;
                rep.put("cycle", p.display());
            }
            rep.put("ring", ring);
            rep.budget(budget);
            let r = Filler::new(&cx).with_budget(budget.budget()).area(&path, ring)?;
            rep.filling(&r);
            if let Some(out) = out {
                write(&out, &io::write_chain(&r.filling))?;
                rep.put("out", out.display());
            }
        }
        Command::Profile { complex, dim, lmax, ring, exhaustive_to, samples, seed, ball_radius, ball_centers, budget, out } => {
            let cx = load_complex(&complex)?;
            let balls = ball_radius.map(|max_radius| BallProbes {
                centers: (!ball_centers.is_empty()).then_some(ball_centers),
                max_radius,
            });
            let cfg = ProfileConfig { exhaustive_to, samples, seed, balls, paths: Vec::new(), budget: budget.budget() };
            rep.put("dim", dim);
            rep.put("lmax", lmax);
            rep.put("ring", ring);
            rep.put("exhaustive_to", exhaustive_to);
            rep.put("samples", samples);
            rep.put("seed", seed);
            rep.budget(budget);
            say("profiling");
            let p = profile(&cx, dim, lmax, ring, &cfg)?;
            rep.put("non_boundaries", p.non_boundaries);
            if p.is_flagged() {
                rep.warnings.push("some profile entries rest on uncertified fillings".into());
            }
            warn_truncation(&cx, rep);
            let text = io::write_profile(&p);
            match out {
                Some(out) => {
                    write(&out, &text)?;
                    rep.put("out", out.display());
                }
                None => {
                    print!("{text}");
                    rep.stdout_taken = true;
                }
            }
        }
        Command::Classify { profile, plotdata, subeuclidean } => {
            let p = io::read_profile(&read(&profile)?)?;
            let bands = GrowthBands::default();
            let g = classify_growth(&p, &bands)?;
            rep.put("alpha", format!("{:.6}", g.alpha));
            rep.put("label", g.label);
            rep.put("band", format!("{:.6} {:.6}", g.band.0, g.band.1));
            rep.put("points", g.points.len());
            if let Some(n) = subeuclidean {
                let s = check_subeuclidean(&p, n, &bands)?;
                rep.put("subeuclidean", s.pass);
            }
            if p.is_flagged() {
                rep.warnings.push("profile contains uncertified entries".into());
            }
            if let Some(path) = plotdata {
                write(&path, &io::write_plotdata(&p, &g))?;
                rep.put("plotdata", path.display());
            }
        }
        Command::Coning { complex, base, radii, dim, ring, exhaustive_to, samples, max_walk, seed, budget, out } => {
            let cx = load_complex(&complex)?;
            let cfg = ConingConfig { exhaustive_to, samples, max_walk, seed, budget: budget.budget() };
            rep.put("base", base);
            rep.put("dim", dim);
            rep.put("ring", ring);
            rep.put("seed", seed);
            rep.budget(budget);
            let c = check_coning(&cx, base, &radii, dim, ring, &cfg)?;
            let mut table = String::from("r,c_hat,cycles,worst_status\n");
            for row in &c.rows {
                let s = row.worst_status.map(|s| s.to_string()).unwrap_or_default();
                table.push_str(&format!("{},{},{},{s}\n", row.r, row.c_hat, row.cycles));
                if matches!(row.worst_status, Some(s) if s != FillingStatus::Optimal) {
                    rep.warnings.push(format!("radius {} uses uncertified fillings", row.r));
                }
            }
            rep.put("constant", &c.constant);
            rep.put("spread", c.spread().map_or("none".to_string(), |s| format!("{s:.6}")));
            match out {
                Some(out) => {
                    write(&out, &table)?;
                    rep.put("out", out.display());
                }
                None => {
                    print!("{table}");
                    rep.stdout_taken = true;
                }
            }
        }
        Command::Axioms { complex, triples, seed, grid_width, max_side, ring, budget, out } => {
            let cx = load_complex(&complex)?;
            let b = budget.budget();
            rep.put("ring", ring);
            rep.put("triples", triples);
            rep.put("seed", seed);
            rep.budget(budget);
            let mut table = String::from("kind,case,lhs,rhs,holds\n");
            let (mut checked, mut failed, mut open) = (0, 0, 0);
            let mut tally = |h: Option<bool>| match h {
                Some(true) => checked += 1,
                Some(false) => failed += 1,
                None => open += 1,
            };
            for (i, [a, b2, c]) in theta_triples(&cx, triples, seed).iter().enumerate() {
                let r = check_theta(&cx, a, b2, c, ring, b)?;
                tally(r.holds);
                let holds = r.holds.map_or("uncertified".into(), |h| h.to_string());
                table.push_str(&format!("theta,{i},{},{} + {},{holds}\n", r.areas[0], r.areas[1], r.areas[2]));
            }
            if let Some(w) = grid_width {
                for n in 1..=max_side {
                    for m in 1..=max_side {
                        for x in 0..=w.saturating_sub(n) {
                            for y in 0..=w.saturating_sub(m) {
                                let p = cycles::grid_rectangle(w, x, y, n, m);
                                let (i1, i2, i3) = (n as usize, (n + m) as usize, (2 * n + m) as usize);
                                let sides: [&[u32]; 4] = [&p[..=i1], &p[i1..=i2], &p[i2..=i3], &p[i3..]];
                                let r = check_rectangle(&cx, sides, ring, b)?;
                                tally(r.holds);
                                let holds = r.holds.map_or("uncertified".into(), |h| h.to_string());
                                table.push_str(&format!(
                                    "rectangle,{n}x{m}@{x}:{y},{},{} * {} * {},{holds}\n",
                                    r.area, r.k, r.d1, r.d2
                                ));
                            }
                        }
                    }
                }
            }
            rep.put("holds", checked);
            rep.put("violations", failed);
            rep.put("uncertified", open);
            if failed > 0 {
                rep.warnings.push(format!("{failed} inequalities fail"));
            }
            match out {
                Some(out) => {
                    write(&out, &table)?;
                    rep.put("out", out.display());
                }
                None => {
                    print!("{table}");
                    rep.stdout_taken = true;
                }
            }
        }
    }
    Ok(())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Build { .. } => "build",
        Command::Rips { .. } => "rips",
        Command::Delta { .. } => "delta",
        Command::Fill { .. } => "fill",
        Command::Hypfill { .. } => "hypfill",
        Command::Area { .. } => "area",
        Command::Profile { .. } => "profile",
        Command::Classify { .. } => "classify",
        Command::Coning { .. } => "coning",
        Command::Axioms { .. } => "axioms",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let t = Instant::now();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.max(1)).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let mut rep = Report::new();
    let name = command_name(&cli.command);
    let outcome = run(cli.command, cli.verbose, &mut rep);
    let mut fields: Vec<(&str, String)> = vec![
        ("command", std::env::args().skip(1).collect::<Vec<_>>().join(" ")),
        ("operation", name.to_string()),
        ("version", env!("CARGO_PKG_VERSION").to_string()),
        ("jobs", cli.jobs.to_string()),
    ];
    fields.extend(rep.fields.iter().map(|(k, v)| (*k, v.clone())));
    let code = match &outcome {
        Ok(()) => rep.exit,
        Err(e) => {
            fields.push(("error", e.to_string()));
            exit_code(e)
        }
    };
    for w in &rep.warnings {
        fields.push(("warning", w.clone()));
    }
    fields.push(("exit", code.to_string()));
    fields.push(("wall_ms", t.elapsed().as_millis().to_string()));
    let text = io::write_record(&fields);
    if let Err(e) = &outcome {
        eprintln!("error: {e}");
    }
    if rep.stdout_taken {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
    if let Some(path) = cli.report {
        if let Err(e) = fs::write(&path, &text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
