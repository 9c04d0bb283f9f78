use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use dilaflow::aiet::RhoMap;
use dilaflow::export;
use dilaflow::limitset::{fn_profile, omega_cover};
use dilaflow::paramspace::{enumerate_cells_capped, DEFAULT_DEPTH_CAP};
use dilaflow::rauzy::{default_max_steps, induct_auto, terminal_orbit, Outcome};
use dilaflow::scalar::{is_rational_literal, Backend, Scalar};
use dilaflow::torus::{
    classify_direction, classify_grid, direction_at_angle, sector_decomposition,
    trace_geodesic_with, Point, PolygonModel, RawModel, Sector, SectorLocation, TraceEnd,
    TraceOptions,
};
use dilaflow::BigRational;

#[derive(Parser, Debug)]
#[command(
    name = "dilaflow",
    version,
    about = "Rauzy induction, parameter Cantor sets and dilation-torus flows"
)]
struct Cli {
    /// Arithmetic backend. Defaults to exact when every numeric input is a rational literal.
    #[arg(long, global = true, env = "DILAFLOW_BACKEND")]
    backend: Option<Backend>,
    /// Worker threads for grid computations (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run Rauzy induction on a (rho_a, rho_b)-map.
    Induct(InductArgs),
    /// Enumerate the parameter Cantor set cells H(w).
    Cantor(CantorArgs),
    /// Profile of f_n over the breakpoint range.
    Fn(FnArgs),
    /// Cover of the omega-limit set of an infinite-both map.
    Cover(CoverArgs),
    /// Pentagon models of a one-holed dilation torus.
    Torus(TorusArgs),
}

#[derive(Args, Debug, Clone)]
struct MapArgs {
    #[arg(long, allow_hyphen_values = true)]
    rho_a: String,
    #[arg(long, allow_hyphen_values = true)]
    rho_b: String,
    #[arg(long, allow_hyphen_values = true)]
    x_t: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    lo: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    hi: String,
}

#[derive(Args, Debug)]
struct InductArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Step budget (default 60 exact, 48 f64).
    #[arg(long)]
    max_steps: Option<usize>,
    /// Print the trace as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct CantorArgs {
    #[arg(long)]
    rho_a: String,
    #[arg(long)]
    rho_b: String,
    #[arg(long)]
    depth: usize,
    #[arg(long, default_value_t = DEFAULT_DEPTH_CAP)]
    cap: usize,
    /// Directory for cells.csv, levels.csv and cantor.svg.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FnArgs {
    #[arg(long)]
    rho_a: String,
    #[arg(long)]
    rho_b: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2000)]
    grid: usize,
    /// CSV output path (stdout when omitted).
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CoverArgs {
    #[command(flatten)]
    map: MapArgs,
    #[arg(long, default_value_t = 30)]
    depth: usize,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TorusArgs {
    /// Model JSON (defaults to the built-in test pentagon).
    #[arg(long, global = true)]
    model: Option<PathBuf>,
    #[command(subcommand)]
    command: TorusCommand,
}

#[derive(Subcommand, Debug)]
enum TorusCommand {
    /// Validate the model and print it in canonical form.
    Validate,
    /// Print the direction sectors.
    Sectors,
    /// Classify a grid of directions, or a single one.
    Classify(ClassifyArgs),
    /// Trace a geodesic and render it as SVG.
    Trace(TraceArgs),
}

#[derive(Args, Debug)]
struct DirectionArgs {
    /// Chart angle in (0, pi) measured from m_B, or `m_b`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "direction")]
    angle: Option<String>,
    /// Direction vector `dx,dy` (rational literals allowed).
    #[arg(long, allow_hyphen_values = true)]
    direction: Option<String>,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long, default_value_t = 1000)]
    grid: usize,
    #[arg(long, default_value_t = 40)]
    budget: usize,
    #[command(flatten)]
    dir: DirectionArgs,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TraceArgs {
    #[command(flatten)]
    dir: DirectionArgs,
    /// Start point `x,y`; defaults to the midpoint of the sector's transversal.
    #[arg(long, allow_hyphen_values = true)]
    start: Option<String>,
    #[arg(long, default_value_t = 200)]
    max_crossings: usize,
    /// Stop after this many returns to the transversal (0 = run to the budget).
    #[arg(long, default_value_t = 1)]
    returns: usize,
    #[arg(long)]
    svg: Option<PathBuf>,
}

fn pick_backend(flag: Option<Backend>, inputs: &[&str]) -> Backend {
    flag.unwrap_or_else(|| {
        if inputs.iter().all(|s| is_rational_literal(s)) {
            Backend::Exact
        } else {
            Backend::F64
        }
    })
}

fn parse<S: Scalar>(name: &str, s: &str) -> Result<S> {
    S::parse_literal(s).with_context(|| format!("--{name}"))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn map_config(m: &MapArgs, backend: Backend) -> Vec<(&'static str, String)> {
    vec![
        ("backend", backend.to_string()),
        ("rho_a", m.rho_a.clone()),
        ("rho_b", m.rho_b.clone()),
        ("x_t", m.x_t.clone()),
        ("lo", m.lo.clone()),
        ("hi", m.hi.clone()),
    ]
}

fn build_map<S: Scalar>(m: &MapArgs) -> Result<RhoMap<S>> {
    Ok(RhoMap::new(
        parse("rho-a", &m.rho_a)?,
        parse("rho-b", &m.rho_b)?,
        parse("x-t", &m.x_t)?,
        parse("lo", &m.lo)?,
        parse("hi", &m.hi)?,
    )?)
}

fn run_induct<S: Scalar>(a: &InductArgs, backend: Backend) -> Result<()> {
    let map: RhoMap<S> = build_map(&a.map)?;
    let steps = a.max_steps.unwrap_or_else(default_max_steps::<S>);
    let trace = induct_auto(&map, steps)?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&trace.to_json())?);
        return Ok(());
    }
    let mut cfg = vec![("command", "induct".to_string())];
    cfg.extend(map_config(&a.map, backend));
    cfg.push(("max_steps", steps.to_string()));
    println!("# {}", export::header_line(&cfg));
    println!(
        "map: rho_a={} rho_b={} x_t={} domain={}",
        map.rho_a, map.rho_b, map.x_t, map.domain
    );
    let word = trace.full_word();
    println!(
        "word: {}",
        if word.is_empty() {
            "(empty)".to_string()
        } else {
            word.to_string()
        }
    );
    println!("steps: {}", trace.total_steps());
    let inner = trace.innermost();
    let outcome = if trace.terminated() {
        "terminated"
    } else if matches!(inner.outcome, Outcome::BudgetExhausted) {
        "budget-exhausted"
    } else {
        trace.outcome_tag()
    };
    println!("outcome: {outcome}");
    for s in &trace.steps {
        if let Some(c) = s.case {
            println!("  step {} case {}", s.kind, c);
        }
    }
    let m = inner.state.matrix.to_literals();
    println!("matrix: [{}, {}; {}, {}]", m[0], m[1], m[2], m[3]);
    let e = inner.state.exponents;
    println!(
        "exponents: m_a={} m_b={} n_a={} n_b={}",
        e.m_a, e.m_b, e.n_a, e.n_b
    );
    let fm = trace.final_map();
    println!(
        "final map: rho_a={} rho_b={} x_t={} domain={}",
        fm.rho_a, fm.rho_b, fm.x_t, fm.domain
    );
    if trace.terminated() {
        match terminal_orbit(&trace) {
            Ok(o) => {
                let pts: Vec<String> = o.points.iter().map(|p| p.to_literal()).collect();
                println!("cycle: {{{}}}", pts.join(", "));
                println!("period: {}", o.period);
                println!("multiplier: {}", o.multiplier.to_literal());
                println!("critical: {}", o.critical);
            }
            Err(e) => println!("cycle: unavailable ({e})"),
        }
    }
    Ok(())
}

fn run_cantor<S: Scalar>(a: &CantorArgs, backend: Backend) -> Result<()> {
    let ra: S = parse("rho-a", &a.rho_a)?;
    let rb: S = parse("rho-b", &a.rho_b)?;
    let report = enumerate_cells_capped(&ra, &rb, a.depth, a.cap)?;
    let header = export::header_line(&[
        ("command", "cantor".to_string()),
        ("backend", backend.to_string()),
        ("rho_a", a.rho_a.clone()),
        ("rho_b", a.rho_b.clone()),
        ("depth", a.depth.to_string()),
        ("cap", a.cap.to_string()),
    ]);
    match &a.out_dir {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
            export::write_cantor_cells(output(Some(&dir.join("cells.csv")))?, &header, &report)?;
            export::write_cantor_levels(output(Some(&dir.join("levels.csv")))?, &header, &report)?;
            fs::write(dir.join("cantor.svg"), export::cantor_svg(&header, &report))?;
            println!("# {header}");
            println!("cells: {}", report.cells.len());
            println!("h_measure: {}", report.h_measure.to_literal());
            println!(
                "complement_measure: {}",
                report.complement_measure.to_literal()
            );
            println!("wrote {}", dir.display());
        }
        None => export::write_cantor_levels(output(None)?, &header, &report)?,
    }
    Ok(())
}

fn run_fn<S: Scalar>(a: &FnArgs, backend: Backend) -> Result<()> {
    let ra: S = parse("rho-a", &a.rho_a)?;
    let rb: S = parse("rho-b", &a.rho_b)?;
    let profile = fn_profile(&ra, &rb, a.n, a.grid)?;
    let header = export::header_line(&[
        ("command", "fn".to_string()),
        ("backend", backend.to_string()),
        ("rho_a", a.rho_a.clone()),
        ("rho_b", a.rho_b.clone()),
        ("n", a.n.to_string()),
        ("grid", a.grid.to_string()),
    ]);
    export::write_fn_profile(output(a.csv.as_deref())?, &header, &profile)?;
    if let Some(p) = &a.svg {
        fs::write(p, export::fn_svg(&header, &profile))
            .with_context(|| format!("cannot write {}", p.display()))?;
    }
    Ok(())
}

fn run_cover<S: Scalar>(a: &CoverArgs, backend: Backend) -> Result<()> {
    let map: RhoMap<S> = build_map(&a.map)?;
    let cover = omega_cover(&map, a.depth)?;
    if cover.escalate {
        eprintln!(
            "warning: gap pieces below 1e-15 on the float backend; rerun with --backend exact"
        );
    }
    let mut cfg = vec![("command", "cover".to_string())];
    cfg.extend(map_config(&a.map, backend));
    cfg.push(("depth", a.depth.to_string()));
    let header = export::header_line(&cfg);
    export::write_omega_cover(output(a.csv.as_deref())?, &header, &cover)?;
    if a.csv.is_some() {
        println!("# {header}");
        println!("intervals: {}", cover.cover.len());
        println!("measure: {}", cover.measure.to_literal());
    }
    Ok(())
}

fn load_model<S: Scalar>(path: Option<&Path>) -> Result<PolygonModel<S>> {
    match path {
        Some(p) => {
            let text =
                fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
            PolygonModel::from_json(&text).with_context(|| format!("invalid model {}", p.display()))
        }
        None => Ok(PolygonModel::test_pentagon()),
    }
}

fn model_literals(path: Option<&Path>) -> Result<Vec<String>> {
    let text = match path {
        Some(p) => fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?,
        None => PolygonModel::<f64>::builtin_json().to_string(),
    };
    let raw: RawModel = serde_json::from_str(&text).with_context(|| "malformed model JSON")?;
    Ok(raw
        .vertices
        .iter()
        .flatten()
        .map(|v| match v {
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string(),
        })
        .collect())
}

fn parse_pair<S: Scalar>(name: &str, s: &str) -> Result<Point<S>> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| anyhow!("--{name} expects `x,y`, got {s:?}"))?;
    Ok(Point::new(parse(name, x.trim())?, parse(name, y.trim())?))
}

/// Direction from `--angle` / `--direction`.
fn direction<S: Scalar>(m: &PolygonModel<S>, d: &DirectionArgs) -> Result<Option<Point<S>>> {
    if let Some(v) = &d.direction {
        return Ok(Some(parse_pair("direction", v)?));
    }
    match d.angle.as_deref() {
        None => Ok(None),
        Some(a) if a.eq_ignore_ascii_case("m_b") => Ok(Some(m.boundary_vector())),
        Some(a) => {
            let phi: f64 = a
                .parse()
                .with_context(|| format!("--angle: cannot parse {a:?}"))?;
            if !(phi > 0.0 && phi < std::f64::consts::PI) {
                bail!("--angle must lie in (0, pi), got {phi}");
            }
            let v = direction_at_angle(m, phi);
            Ok(Some(Point::new(
                S::from_f64(v.x).ok_or_else(|| anyhow!("non-finite direction"))?,
                S::from_f64(v.y).ok_or_else(|| anyhow!("non-finite direction"))?,
            )))
        }
    }
}

fn run_torus_validate<S: Scalar>(a: &TorusArgs) -> Result<()> {
    let m: PolygonModel<S> = load_model(a.model.as_deref())?;
    println!("valid: true");
    println!("{}", serde_json::to_string_pretty(&m.to_raw())?);
    Ok(())
}

fn run_torus_sectors<S: Scalar>(a: &TorusArgs, backend: Backend) -> Result<()> {
    let m: PolygonModel<S> = load_model(a.model.as_deref())?;
    let dec = sector_decomposition(&m);
    let angles = dec.angles();
    println!(
        "# {}",
        export::header_line(&[
            ("command", "torus sectors".to_string()),
            ("backend", backend.to_string())
        ])
    );
    let names = ["m_B", "A-D", "A-pair", "B-pair", "E-B"];
    println!("boundary,dx,dy,slope,angle");
    for (k, b) in dec.boundaries.iter().enumerate() {
        let slope = if b.x.is_zero() {
            "inf".to_string()
        } else {
            (b.y.clone() / b.x.clone()).to_literal()
        };
        println!(
            "{},{},{},{},{}",
            names[k],
            b.x.to_literal(),
            b.y.to_literal(),
            slope,
            dilaflow::scalar::format_f64(angles[k])
        );
    }
    println!("sector,angle_lo,angle_hi,transversal");
    for s in Sector::ALL {
        let (lo, hi) = dec.angle_range(s);
        let (i, j) = m.transversals.0[s.index()];
        println!(
            "{},{},{},{}-{}",
            s,
            dilaflow::scalar::format_f64(lo),
            dilaflow::scalar::format_f64(hi),
            PolygonModel::<S>::label(i),
            PolygonModel::<S>::label(j)
        );
    }
    Ok(())
}

fn run_torus_classify_one<S: Scalar>(a: &TorusArgs, c: &ClassifyArgs) -> Result<bool> {
    let m: PolygonModel<S> = load_model(a.model.as_deref())?;
    let Some(dir) = direction(&m, &c.dir)? else {
        return Ok(false);
    };
    let r = classify_direction(&m, &dir, c.budget)?;
    let loc = match r.location {
        SectorLocation::Inside(s) => s.to_string(),
        SectorLocation::Boundary(k) => {
            format!("boundary {}", ["m_B", "A-D", "A-pair", "B-pair", "E-B"][k])
        }
    };
    println!("direction: {dir}");
    println!("sector: {loc}");
    println!("label: {}", r.label);
    if let Some(fr) = &r.first_return {
        let (i, j) = fr.transversal;
        println!(
            "transversal: {}-{}",
            PolygonModel::<S>::label(i),
            PolygonModel::<S>::label(j)
        );
        println!("first return: {}", fr.outcome.tag());
        if let Some(map) = fr.outcome.rho_map() {
            println!(
                "rho map: rho_a={} rho_b={} x_t={} domain={}",
                map.rho_a, map.rho_b, map.x_t, map.domain
            );
        }
    }
    if let Some(rot) = &r.rotation {
        println!(
            "rotation number: {} (error bound {:e}, rational {:?})",
            dilaflow::scalar::format_f64(rot.estimate),
            rot.error_bound,
            rot.rational
        );
    }
    if let Some(t) = &r.tail {
        println!("tail: {} at depth {}", t.kind, t.depth);
    }
    Ok(true)
}

fn run_torus_classify(a: &TorusArgs, c: &ClassifyArgs, backend: Backend) -> Result<()> {
    let done = match backend {
        Backend::Exact => run_torus_classify_one::<BigRational>(a, c)?,
        Backend::F64 => run_torus_classify_one::<f64>(a, c)?,
    };
    if done {
        return Ok(());
    }
    let m: PolygonModel<f64> = load_model(a.model.as_deref())?;
    let rows = classify_grid(&m, c.grid, c.budget);
    let header = export::header_line(&[
        ("command", "torus classify".to_string()),
        ("backend", "f64".to_string()),
        (
            "model",
            a.model
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_else(|| "builtin".into()),
        ),
        ("grid", c.grid.to_string()),
        ("budget", c.budget.to_string()),
    ]);
    export::write_torus_grid(output(c.csv.as_deref())?, &header, &rows)?;
    if let Some(r) = rows.iter().find(|r| r.error.is_some()) {
        eprintln!(
            "warning: {} directions failed, first at angle {}: {}",
            rows.iter().filter(|r| r.error.is_some()).count(),
            r.angle,
            r.error.as_deref().unwrap_or("")
        );
    }
    Ok(())
}

fn run_torus_trace<S: Scalar>(a: &TorusArgs, t: &TraceArgs, backend: Backend) -> Result<()> {
    let m: PolygonModel<S> = load_model(a.model.as_deref())?;
    let dir =
        direction(&m, &t.dir)?.ok_or_else(|| anyhow!("trace needs --angle or --direction"))?;
    let sector = match sector_decomposition(&m).locate(&dir) {
        SectorLocation::Inside(s) => Some(s),
        SectorLocation::Boundary(_) => None,
    };
    let transversal = sector.map(|s| m.transversals.0[s.index()]);
    let start = match &t.start {
        Some(s) => parse_pair("start", s)?,
        None => {
            let (i, j) = transversal.unwrap_or(m.transversals.0[0]);
            let half = S::ratio(1, 2);
            &m.vertices[i] + &(&m.vertices[j] - &m.vertices[i]).scale(&half)
        }
    };
    let dir = if m.boundary_vector().cross(&dir) < S::zero() {
        dir.neg()
    } else {
        dir
    };
    let tr = trace_geodesic_with(
        &m,
        &start,
        &dir,
        &TraceOptions {
            max_crossings: t.max_crossings,
            transversal,
            max_returns: t.returns,
        },
    )?;
    let end = tr
        .segments
        .last()
        .map(|s| s.1.clone())
        .unwrap_or_else(|| start.clone());
    let gap = (&end - &start).norm_f64();
    let header = export::header_line(&[
        ("command", "torus trace".to_string()),
        ("backend", backend.to_string()),
        ("direction", dir.to_string()),
        ("start", start.to_string()),
        ("max_crossings", t.max_crossings.to_string()),
        ("returns", t.returns.to_string()),
    ]);
    println!("# {header}");
    println!(
        "sector: {}",
        sector
            .map(|s| s.to_string())
            .unwrap_or_else(|| "boundary".into())
    );
    println!("segments: {}", tr.segments.len());
    println!("crossings: {}", tr.crossings.len());
    let edges: Vec<String> = tr
        .crossings
        .iter()
        .map(|c| m.input_edge(c.exit_edge).to_string())
        .collect();
    println!("crossed edges: {}", edges.join(" "));
    println!(
        "end: {}",
        match tr.end {
            TraceEnd::Budget => "budget".to_string(),
            TraceEnd::Returns => format!("returned {} times", tr.hits.len()),
            TraceEnd::ConePoint { vertex } =>
                format!("cone point at {}", PolygonModel::<S>::label(vertex)),
        }
    );
    println!(
        "endpoint distance to start: {}",
        dilaflow::scalar::format_f64(gap)
    );
    println!("holonomy: {}", tr.holonomy().to_literal());
    if let Some(p) = &t.svg {
        fs::write(p, export::trace_svg(&header, &m, &tr, transversal))
            .with_context(|| format!("cannot write {}", p.display()))?;
    }
    Ok(())
}

macro_rules! dispatch {
    ($backend:expr, $f:ident ( $($arg:expr),* )) => {
        match $backend {
            Backend::Exact => $f::<BigRational>($($arg),*),
            Backend::F64 => $f::<f64>($($arg),*),
        }
    };
}

fn run(cli: Cli) -> Result<()> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()?;
    }
    match &cli.command {
        Command::Induct(a) => {
            let m = &a.map;
            let b = pick_backend(cli.backend, &[&m.rho_a, &m.rho_b, &m.x_t, &m.lo, &m.hi]);
            dispatch!(b, run_induct(a, b))
        }
        Command::Cantor(a) => {
            let b = pick_backend(cli.backend, &[&a.rho_a, &a.rho_b]);
            dispatch!(b, run_cantor(a, b))
        }
        Command::Fn(a) => {
            let b = pick_backend(cli.backend, &[&a.rho_a, &a.rho_b]);
            dispatch!(b, run_fn(a, b))
        }
        Command::Cover(a) => {
            let m = &a.map;
            let b = pick_backend(cli.backend, &[&m.rho_a, &m.rho_b, &m.x_t, &m.lo, &m.hi]);
            dispatch!(b, run_cover(a, b))
        }
        Command::Torus(a) => {
            let lits = model_literals(a.model.as_deref())?;
            let mut inputs: Vec<&str> = lits.iter().map(String::as_str).collect();
            let dir_inputs = |d: &DirectionArgs| -> Vec<String> {
                let mut v = Vec::new();
                if let Some(s) = &d.direction {
                    v.extend(s.split(',').map(|x| x.trim().to_string()));
                }
                if let Some(s) = &d.angle {
                    if !s.eq_ignore_ascii_case("m_b") {
                        v.push("angle".to_string());
                    }
                }
                v
            };
            match &a.command {
                TorusCommand::Validate => {
                    let b = pick_backend(cli.backend, &inputs);
                    dispatch!(b, run_torus_validate(a))
                }
                TorusCommand::Sectors => {
                    let b = pick_backend(cli.backend, &inputs);
                    dispatch!(b, run_torus_sectors(a, b))
                }
                TorusCommand::Classify(c) => {
                    let extra = dir_inputs(&c.dir);
                    inputs.extend(extra.iter().map(String::as_str));
                    let b = pick_backend(cli.backend, &inputs);
                    run_torus_classify(a, c, b)
                }
                TorusCommand::Trace(t) => {
                    let extra = dir_inputs(&t.dir);
                    let mut inputs = inputs.clone();
                    inputs.extend(extra.iter().map(String::as_str));
                    if let Some(s) = &t.start {
                        inputs.extend(s.split(',').map(str::trim));
                    }
                    let b = pick_backend(cli.backend, &inputs);
                    dispatch!(b, run_torus_trace(a, t, b))
                }
            }
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
