//! The `frontkit` command line.
//!
//! Exit codes: 0 success, 1 domain error (bad input, failed check), 2 usage error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use frontkit::classify::{classify, BundleSpec};
use frontkit::front::FrontDiagram;
use frontkit::io::{
    classification_json, front_json, graph_json, moves_json, parse_front, parse_script, render_svg, report_json,
    run_script, surface_json, FrontDocument, SvgOptions,
};
use frontkit::numerics::{
    self, convergence_to_cone, default_grid, legendrian_residual, liouville_identity, mobius_identities,
    pullback_residual, rot_oracle, sample_csv, tb_oracle, ClosedCurve, Family, FrontCurve, Grid, LCurve,
    VerificationReport,
};
use frontkit::planner::derive_table;
use frontkit::random::{random_front, random_knot, seeded};
use frontkit::rewrite::{apply_move, applicable_moves, equivalent_within, Equivalence, MoveInstance};

/// Relative output paths are resolved against this directory when it is set.
pub const OUT_DIR_VAR: &str = "FRONTKIT_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "frontkit", version, about = "Legendrian fronts, singular Lagrangian surfaces and disk-bundle classification")]
struct Cli {
    /// Seed for every randomized command.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print JSON instead of text where supported.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Inspect, draw and generate front files.
    #[command(subcommand)]
    Front(FrontCmd),
    /// Legendrian Reidemeister moves.
    #[command(subcommand)]
    Moves(MovesCmd),
    /// Run surface-assembly scripts.
    #[command(subcommand)]
    Surface(SurfaceCmd),
    /// Embeddability classes of a disk bundle.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
        #[arg(long, allow_hyphen_values = true)]
        euler: i64,
        /// Orientable base surface (default: non-orientable).
        #[arg(long)]
        orientable: bool,
    },
    /// Regenerate the table of non-orientable constructions.
    Table {
        #[arg(long, allow_hyphen_values = true, default_value_t = -5)]
        min_chi: i64,
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
    },
    /// Numerical checks of the explicit immersions and curves.
    Verify(VerifyArgs),
}

#[derive(Subcommand, Debug)]
enum FrontCmd {
    /// Invariants of a front file.
    Stats { file: PathBuf },
    /// Draw a front as SVG (stdout unless --output is given).
    Render {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 40.0)]
        column: f64,
        #[arg(long, default_value_t = 24.0)]
        gap: f64,
    },
    /// Parse and validate a front file.
    Check { file: PathBuf },
    /// Print a seeded random front.
    Random {
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, default_value_t = 6)]
        max_strands: usize,
        /// Only single-component fronts.
        #[arg(long)]
        knot: bool,
        #[arg(long, default_value = "random")]
        name: String,
    },
}

#[derive(Subcommand, Debug)]
enum MovesCmd {
    /// All applicable moves.
    List { file: PathBuf },
    /// Apply moves in order and print the resulting front.
    Apply {
        file: PathBuf,
        #[arg(required = true)]
        moves: Vec<String>,
    },
    /// Search for a move sequence between two fronts.
    Equiv {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = frontkit::rewrite::DEFAULT_DEPTH)]
        depth: usize,
    },
}

#[derive(Subcommand, Debug)]
enum SurfaceCmd {
    /// Run a script and describe the result.
    Build { script: PathBuf },
    /// Run a closed-surface script and print its Euler number.
    Euler { script: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum FamilyArg {
    /// Möbius strips Γ_A.
    Gamma,
    /// The cone G.
    G,
    /// The open Whitney umbrella F.
    F,
    /// The Legendrian curve L.
    L,
    /// A front file realized as a Legendrian in S³ (needs --front).
    Front,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    family: FamilyArg,
    /// Parameter A of Γ_A.
    #[arg(long = "a", default_value_t = 0.5)]
    a: f64,
    /// Grid points per axis.
    #[arg(long, default_value_t = 64)]
    grid: usize,
    /// Finite-difference step.
    #[arg(long, default_value_t = 1e-4)]
    step: f64,
    /// Residual tolerance.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Curve samples for Legendrian checks and CSV output.
    #[arg(long, default_value_t = 1024)]
    samples: usize,
    /// Reeb push-off size for the tb oracle.
    #[arg(long, default_value_t = numerics::DEFAULT_PUSH_OFF)]
    eps: f64,
    /// Front file for the `front` family.
    #[arg(long)]
    front: Option<PathBuf>,
    /// Write sampled curve points here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

enum Failure {
    Domain(String),
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn out_path(p: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_VAR) {
        Some(dir) if p.is_relative() => Path::new(&dir).join(p),
        _ => p.to_path_buf(),
    }
}

fn read(p: &Path) -> Result<String, Failure> {
    fs::read_to_string(p).map_err(|e| Failure::Domain(format!("{}: {e}", p.display())))
}

fn write_file(p: &Path, text: &str) -> Result<PathBuf, Failure> {
    let p = out_path(p);
    if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure::Domain(format!("{}: {e}", dir.display())))?;
    }
    fs::write(&p, text).map_err(|e| Failure::Domain(format!("{}: {e}", p.display())))?;
    Ok(p)
}

fn load_front(p: &Path) -> Result<(String, FrontDiagram), Failure> {
    let doc = parse_front(&read(p)?).map_err(|e| Failure::Domain(format!("{}: {e}", p.display())))?;
    let f = doc.to_front().map_err(|e| Failure::Domain(format!("{}: {e}", p.display())))?;
    Ok((doc.name, f))
}

fn print_json(out: &mut dyn Write, v: &Value) -> Result<(), Failure> {
    writeln!(out, "{}", serde_json::to_string_pretty(v)?)?;
    Ok(())
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Domain(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "usage error: {m}");
            2
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Outcome {
    match &cli.command {
        Command::Front(cmd) => front_cmd(cli, cmd, out),
        Command::Moves(cmd) => moves_cmd(cli, cmd, out),
        Command::Surface(cmd) => surface_cmd(cli, cmd, out),
        Command::Classify { chi, euler, orientable } => {
            let c = classify(BundleSpec::new(*chi, *euler, *orientable))?;
            if cli.json {
                print_json(out, &classification_json(&c))?;
            } else {
                let name = if *orientable { "D" } else { "D~" };
                writeln!(out, "{name}({chi},{euler})")?;
                writeln!(
                    out,
                    "rationally_convex: {}; stein: {}; smooth: {}; umbrellas: {}",
                    c.rationally_convex, c.stein, c.smooth, c.umbrellas
                )?;
            }
            Ok(true)
        }
        Command::Table { min_chi, format } => {
            if *min_chi > 0 {
                return Err(Failure::Usage("--min-chi must be at most 0".into()));
            }
            let g = derive_table(*min_chi);
            match format {
                TableFormat::Text => write!(out, "{}", g.render_text())?,
                TableFormat::Json => print_json(out, &graph_json(&g))?,
            }
            Ok(true)
        }
        Command::Verify(args) => verify_cmd(args, out),
    }
}

fn front_cmd(cli: &Cli, cmd: &FrontCmd, out: &mut dyn Write) -> Outcome {
    match cmd {
        FrontCmd::Stats { file } => {
            let (name, f) = load_front(file)?;
            if cli.json {
                print_json(out, &front_json(&name, &f))?;
                return Ok(true);
            }
            let inv = f.invariants();
            writeln!(out, "front {name}")?;
            writeln!(out, "word: {}", f.word_string())?;
            writeln!(out, "components: {}", inv.component_count)?;
            writeln!(out, "writhe: {}", inv.writhe)?;
            writeln!(out, "cusps: {}", inv.cusp_count)?;
            for (i, c) in inv.components.iter().enumerate() {
                writeln!(out, "component {}: tb {} rot {}", i + 1, c.tb, c.rot)?;
            }
            for i in 0..inv.component_count {
                for j in i + 1..inv.component_count {
                    writeln!(out, "linking {} {}: {}", i + 1, j + 1, inv.linking[i][j])?;
                }
            }
            Ok(true)
        }
        FrontCmd::Render { file, output, column, gap } => {
            let (name, f) = load_front(file)?;
            let opt = SvgOptions { column: *column, gap: *gap, ..SvgOptions::default() };
            let svg = render_svg(&f, &name, &opt);
            match output {
                Some(p) => {
                    let p = write_file(p, &svg)?;
                    writeln!(out, "wrote {}", p.display())?;
                }
                None => write!(out, "{svg}")?,
            }
            Ok(true)
        }
        FrontCmd::Check { file } => {
            let (name, f) = load_front(file)?;
            writeln!(out, "ok: {name}; events: {}; components: {}", f.len(), f.component_count())?;
            Ok(true)
        }
        FrontCmd::Random { steps, max_strands, knot, name } => {
            let mut rng = seeded(cli.seed);
            let f = if *knot { random_knot(&mut rng, *steps, *max_strands) } else { random_front(&mut rng, *steps, *max_strands) };
            if cli.json {
                print_json(out, &front_json(name, &f))?;
            } else {
                write!(out, "{}", FrontDocument::from_front(name, &f).serialize())?;
            }
            Ok(true)
        }
    }
}

fn moves_cmd(cli: &Cli, cmd: &MovesCmd, out: &mut dyn Write) -> Outcome {
    match cmd {
        MovesCmd::List { file } => {
            let (_, f) = load_front(file)?;
            let moves = applicable_moves(&f);
            if cli.json {
                print_json(out, &moves_json(&moves))?;
            } else {
                for m in moves {
                    writeln!(out, "{m}")?;
                }
            }
            Ok(true)
        }
        MovesCmd::Apply { file, moves } => {
            let (name, mut f) = load_front(file)?;
            for text in moves {
                let m: MoveInstance = text.parse().map_err(|_| Failure::Usage(format!("bad move `{text}`")))?;
                f = apply_move(&f, &m)?;
            }
            if cli.json {
                print_json(out, &front_json(&name, &f))?;
            } else {
                write!(out, "{}", FrontDocument::from_front(&name, &f).serialize())?;
            }
            Ok(true)
        }
        MovesCmd::Equiv { first, second, depth } => {
            let (_, f) = load_front(first)?;
            let (_, g) = load_front(second)?;
            let result = equivalent_within(&f, &g, *depth);
            if cli.json {
                let v = match &result {
                    Equivalence::Yes(ms) => json!({ "schema": 1, "equivalent": true, "moves": ms.iter().map(|m| m.to_string()).collect::<Vec<_>>() }),
                    Equivalence::NoWitnessFound => json!({ "schema": 1, "equivalent": Value::Null, "depth": depth }),
                };
                print_json(out, &v)?;
            } else {
                match &result {
                    Equivalence::Yes(ms) => {
                        writeln!(out, "equivalent: {} moves", ms.len())?;
                        for m in ms {
                            writeln!(out, "{m}")?;
                        }
                    }
                    Equivalence::NoWitnessFound => writeln!(out, "no witness found within depth {depth}")?,
                }
            }
            Ok(true)
        }
    }
}

fn surface_cmd(cli: &Cli, cmd: &SurfaceCmd, out: &mut dyn Write) -> Outcome {
    let path = match cmd {
        SurfaceCmd::Build { script } | SurfaceCmd::Euler { script } => script,
    };
    let script = parse_script(&read(path)?).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    let s = run_script(&script).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    match cmd {
        SurfaceCmd::Build { .. } => {
            if cli.json {
                print_json(out, &surface_json(&s))?;
            } else {
                writeln!(out, "chi: {}", s.chi)?;
                writeln!(out, "orientable: {}", s.orientable)?;
                writeln!(out, "boundary components: {}", s.boundary.len())?;
                for (i, b) in s.boundary.iter().enumerate() {
                    let inv = b.invariants();
                    writeln!(out, "boundary {i}: {} (tb {}, rot {})", b.word_string(), inv.tb, inv.rot[0])?;
                }
                for ((i, j), v) in &s.linking {
                    writeln!(out, "linking {i} {j}: {v}")?;
                }
                let sings: Vec<String> = s.singularities.iter().map(|x| format!("({},{})", x.model_tb, x.model_rot)).collect();
                writeln!(out, "singularities: {} [{}]", sings.len(), sings.join(" "))?;
                if let Ok(e) = frontkit::cobordism::euler_number(&s) {
                    writeln!(out, "euler: {e}")?;
                }
            }
        }
        SurfaceCmd::Euler { .. } => {
            let e = frontkit::cobordism::euler_number(&s)?;
            if cli.json {
                print_json(out, &json!({ "schema": 1, "euler_number": e, "chi": s.chi, "orientable": s.orientable }))?;
            } else {
                writeln!(out, "{e}")?;
            }
        }
    }
    Ok(true)
}

fn verify_cmd(args: &VerifyArgs, out: &mut dyn Write) -> Outcome {
    if args.grid < 2 || args.samples < 8 {
        return Err(Failure::Usage("--grid must be at least 2 and --samples at least 8".into()));
    }
    let mut reports: Vec<VerificationReport> = Vec::new();
    let mut extra = serde_json::Map::new();
    let with_tol = |mut r: VerificationReport, tol: f64| {
        r.tolerance = tol;
        r.pass = r.max_residual <= tol && r.pass;
        r
    };
    let mut curve: Option<Box<dyn ClosedCurve>> = None;
    match args.family {
        FamilyArg::Gamma => {
            let fam = Family::GammaA { a: args.a };
            reports.push(with_tol(pullback_residual(&fam, &default_grid(&fam, args.grid), args.step)?, args.tol));
            reports.push(mobius_identities(args.a, args.grid)?);
            let a = args.a;
            let ta = numerics::t_a(a);
            curve = Some(Box::new(GammaBoundary { a, t: ta }));
        }
        FamilyArg::G => {
            reports.push(with_tol(pullback_residual(&Family::G, &default_grid(&Family::G, args.grid), args.step)?, args.tol));
            let grid = Grid::new((0.0, std::f64::consts::TAU), (0.5, 1.0), args.grid, args.grid);
            let c = convergence_to_cone(&[0.2, 0.1, 0.05, 0.025], &grid)?;
            extra.insert("convergence".into(), serde_json::to_value(&c)?);
            if !c.pass {
                reports.push(VerificationReport {
                    check: "convergence".into(),
                    max_residual: f64::NAN,
                    grid: grid.describe(),
                    tolerance: 0.0,
                    pass: false,
                    details: Vec::new(),
                });
            }
        }
        FamilyArg::F => {
            reports.push(with_tol(pullback_residual(&Family::F, &default_grid(&Family::F, args.grid), args.step)?, args.tol));
            reports.push(liouville_identity(&Grid::new((-2.0, 2.0), (-2.0, 2.0), args.grid, args.grid)));
        }
        FamilyArg::L => {
            reports.push(with_tol(legendrian_residual(&LCurve, args.samples), args.tol));
            extra.insert("tb".into(), json!(tb_oracle(&LCurve, args.eps)?));
            extra.insert("rot".into(), json!(rot_oracle(&LCurve)?));
            curve = Some(Box::new(LCurve));
        }
        FamilyArg::Front => {
            let path = args.front.as_ref().ok_or_else(|| Failure::Usage("the front family needs --front FILE".into()))?;
            let (_, f) = load_front(path)?;
            let c = FrontCurve::new(&f)?;
            reports.push(with_tol(legendrian_residual(&c, args.samples), args.tol));
            let inv = f.invariants();
            let (tb, rot) = (tb_oracle(&c, args.eps)?, rot_oracle(&c)?);
            extra.insert("tb".into(), json!(tb));
            extra.insert("rot".into(), json!(rot));
            extra.insert("front_tb".into(), json!(inv.tb));
            extra.insert("front_rot".into(), json!(inv.rot[0]));
            if tb != inv.tb || rot != inv.rot[0] {
                reports.push(VerificationReport {
                    check: "oracles match front formulas".into(),
                    max_residual: ((tb - inv.tb).abs() + (rot - inv.rot[0]).abs()) as f64,
                    grid: format!("{} samples", args.samples),
                    tolerance: 0.0,
                    pass: false,
                    details: Vec::new(),
                });
            }
            curve = Some(Box::new(c));
        }
    }
    if let Some(p) = &args.csv {
        let c = curve.ok_or_else(|| Failure::Usage("--csv needs a curve family (gamma boundary, l, front)".into()))?;
        let p = write_file(p, &sample_csv(c.as_ref(), args.samples))?;
        extra.insert("csv".into(), json!(p.display().to_string()));
    }
    let pass = reports.iter().all(|r| r.pass);
    let mut doc = serde_json::Map::new();
    doc.insert("schema".into(), json!(1));
    doc.insert("family".into(), json!(format!("{:?}", args.family).to_lowercase()));
    doc.insert("pass".into(), json!(pass));
    doc.insert("reports".into(), Value::Array(reports.iter().map(report_json).collect()));
    doc.extend(extra);
    print_json(out, &Value::Object(doc))?;
    Ok(pass)
}

/// Boundary circle `s ↦ Γ_A(s, T)` of a Möbius strip.
struct GammaBoundary {
    a: f64,
    t: f64,
}

impl ClosedCurve for GammaBoundary {
    fn point(&self, s: f64) -> numerics::Point4 {
        numerics::gamma_a(self.a, s, self.t)
    }
}
