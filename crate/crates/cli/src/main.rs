//! `scribe`: build, check, construct, analyze and export scribed polytopes.
//!
//! Exit codes: 0 true or success, 1 false, 2 indeterminate, 3 usage or I/O
//! error.

mod export;
mod files;

use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use scribe_core::caps::{kply_equivalence_check, thresholds};
use scribe_core::combinatorics::{
    cyclic_realization, k_sets, missing_faces, neighborliness, stacked_analysis, stacked_realization, Curve,
    StackingTree,
};
use scribe_core::constructions::{
    ball_packing_truncated, inscribe_truncated, moebius_connected_sum, named_fixture, odd_cyclic_scribed,
    ridge_scribed_stacked, twice_stacked_tree, weak_ij_realization, Body, TruncationProgram,
};
use scribe_core::hyperbolic::{dihedral_angle, simplex_angle_sum, stack01_audit, Dihedral, Geometry};
use scribe_core::linalg::{norm, scale};
use scribe_core::polytope::{hull, Form};
use scribe_core::scribability::{scribed_report, Mode, Verdict};
use scribe_core::Error as CoreError;

use files::{load_polytope, polytope_json, report_json, scribed_report_json, write_output};

#[derive(Parser, Debug)]
#[command(name = "scribe", version, about = "Scribability of polytopes")]
struct Cli {
    /// Predicate tolerance.
    #[arg(long, global = true, env = "SCRIBE_TOL", default_value_t = scribe_core::EPS_PRED)]
    tol: f64,
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "SCRIBE_SEED", default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a realization from combinatorial data.
    Build {
        #[command(subcommand)]
        what: Build,
    },
    /// Print a named fixture.
    Fixture {
        name: String,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Decide whether every i-face avoids and every j-face cuts the sphere.
    Check {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[command(flatten)]
        input: Input,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Run a realization algorithm.
    Construct {
        #[command(subcommand)]
        what: Construct,
    },
    /// Combinatorial and metric analyses.
    Analyze {
        #[command(subcommand)]
        what: Analyze,
    },
    /// Convert a polytope file.
    Export {
        #[arg(long, value_enum)]
        format: ExportFormat,
        #[command(flatten)]
        input: Input,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
}

#[derive(Args, Debug)]
struct Input {
    /// Polytope file, `-` for standard input.
    file: String,
    /// Skip re-validating the stored lattice against the hull.
    #[arg(long)]
    trust_lattice: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Strong,
    Weak,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExportFormat {
    Json,
    Off,
    Svg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CurveArg {
    Moment,
    Trigonometric,
}

#[derive(Subcommand, Debug)]
enum Build {
    /// Cyclic polytope on the moment or trigonometric curve.
    Cyclic {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "moment")]
        curve: CurveArg,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Stacked polytope with the given dual tree.
    Stacked {
        #[arg(long)]
        dim: usize,
        /// `single`, `pathN`, `starN`, `twice`, `random:N` or edges `0-1,1-2`.
        #[arg(long)]
        tree: String,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Hull of random points at radii in `[rmin, rmax]`.
    Random {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        rmin: f64,
        #[arg(long, default_value_t = 1.5)]
        rmax: f64,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
}

#[derive(Args, Debug)]
struct ProgramArgs {
    #[arg(long)]
    dim: usize,
    /// Rounds separated by `;`, vertex labels by `,` (e.g. `0;1.0,1.2`).
    #[arg(long, conflicts_with_all = ["iterated", "random_rounds"])]
    program: Option<String>,
    /// Truncate all vertices, then the new vertices, this many rounds.
    #[arg(long, conflicts_with = "random_rounds")]
    iterated: Option<usize>,
    /// Random program with at most this many rounds.
    #[arg(long)]
    random_rounds: Option<usize>,
    #[arg(long, default_value_t = 30)]
    max_vertices: usize,
}

impl ProgramArgs {
    fn program(&self, seed: u64) -> Result<TruncationProgram> {
        Ok(match (&self.program, self.iterated, self.random_rounds) {
            (Some(text), _, _) => TruncationProgram::parse(self.dim, text)?,
            (None, Some(r), _) => TruncationProgram::iterated(self.dim, r),
            (None, None, Some(r)) => TruncationProgram::random(self.dim, r, self.max_vertices, seed),
            (None, None, None) => bail!("give one of --program, --iterated or --random-rounds"),
        })
    }
}

#[derive(Subcommand, Debug)]
enum Construct {
    /// Truncated polytope inscribed in the sphere or an ellipsoid.
    InscribeTruncated {
        #[command(flatten)]
        program: ProgramArgs,
        /// Semi-axes of an axis-parallel ellipsoid instead of the unit sphere.
        #[arg(long, value_delimiter = ',')]
        axes: Option<Vec<f64>>,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Stacked polytope with every ridge tangent to the sphere.
    RidgeStacked {
        #[arg(long)]
        tree: String,
        #[arg(long)]
        dim: usize,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Connected sum along simplex facets after a sphere-preserving map.
    MoebiusSum {
        #[arg(long)]
        left: String,
        #[arg(long)]
        left_facet: usize,
        #[arg(long)]
        right: String,
        #[arg(long)]
        right_facet: usize,
        #[arg(long)]
        trust_lattice: bool,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Ball packing whose tangency graph is the graph of a truncated polytope.
    BallPacking {
        #[command(flatten)]
        program: ProgramArgs,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Odd-dimensional cyclic polytope with edges avoiding and facets cutting.
    OddCyclic {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        n: usize,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Weakly (i, i+1)-scribed affine image.
    WeakIj {
        #[arg(long)]
        i: usize,
        #[command(flatten)]
        input: Input,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
}

#[derive(Subcommand, Debug)]
enum Analyze {
    /// Vertex subsets of size k strictly separable from the rest.
    Ksets {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Minimal non-faces with at most `size` vertices.
    MissingFaces {
        #[arg(long, default_value_t = 4)]
        size: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Largest k such that every k vertices span a face
    Neighborliness {
        #[command(flatten)]
        input: Input,
    },
    /// Stacked triangulation and its dual tree.
    DualTree {
        #[command(flatten)]
        input: Input,
    },
    /// Hyperbolic dihedral angle at every ridge.
    Dihedral {
        #[command(flatten)]
        input: Input,
    },
    /// Angle audit of a twice-stacked 4-simplex realization.
    AuditStack01 {
        #[command(flatten)]
        input: Input,
    },
    /// Dimension thresholds from the separator argument.
    Thresholds {
        #[arg(long)]
        dim: usize,
    },
    /// Compare the k-ply cap system of the vertices with their far k-sets.
    Kply {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        input: Input,
    },
}

struct Ctx {
    tol: f64,
    seed: u64,
}

fn meta(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn parse_tree(spec: &str, dim: usize, seed: u64) -> Result<StackingTree> {
    let spec = spec.trim();
    let count = |prefix: &str| -> Result<usize> {
        spec[prefix.len()..].parse().with_context(|| format!("bad tree size in '{spec}'"))
    };
    Ok(match spec {
        "single" => StackingTree::single(),
        "twice" => twice_stacked_tree(dim),
        s if s.starts_with("path") => StackingTree::path(count("path")?.max(1)),
        s if s.starts_with("star") => StackingTree::star(count("star")?.max(1)),
        s if s.starts_with("random:") => StackingTree::random(count("random:")?.max(1), dim + 1, dim + 1, seed),
        s => {
            let mut edges = Vec::new();
            let mut n = 0;
            for e in s.split(',') {
                let (a, b) = e.split_once('-').with_context(|| format!("bad tree edge '{e}'"))?;
                let (a, b): (usize, usize) = (a.trim().parse()?, b.trim().parse()?);
                n = n.max(a + 1).max(b + 1);
                edges.push((a, b));
            }
            StackingTree::new(n, edges)?
        }
    })
}

fn random_points(dim: usize, n: usize, rmin: f64, rmax: f64, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| loop {
            let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let r = norm(&v);
            if r > 1e-3 && r <= 1.0 {
                break scale(&v, rng.gen_range(rmin..=rmax) / r);
            }
        })
        .collect()
}

fn build(what: Build, ctx: &Ctx) -> Result<u8> {
    let (p, m, out) = match what {
        Build::Cyclic { dim, n, curve, output } => {
            let c = match curve {
                CurveArg::Moment => Curve::Moment,
                CurveArg::Trigonometric => Curve::Trigonometric,
            };
            let p = cyclic_realization(dim, n, &c)?;
            (p, meta(&[("source", json!(format!("cyclic({dim},{n})"))), ("curve", json!(format!("{curve:?}")))]), output)
        }
        Build::Stacked { dim, tree, output } => {
            let t = parse_tree(&tree, dim, ctx.seed)?;
            let p = stacked_realization(&t, dim)?;
            (p, meta(&[("source", json!("stacked")), ("tree", json!(t.edges))]), output)
        }
        Build::Random { dim, n, rmin, rmax, output } => {
            if !(rmin > 0.0 && rmin <= rmax) {
                bail!("need 0 < rmin <= rmax");
            }
            let mut seed = ctx.seed;
            let p = loop {
                match hull(&random_points(dim, n, rmin, rmax, seed), Form::Euclidean) {
                    Ok(p) => break p,
                    Err(CoreError::LowerDimensional { .. }) if seed < ctx.seed + 1000 => seed += 1,
                    Err(e) => return Err(e.into()),
                }
            };
            (p, meta(&[("source", json!("random")), ("seed", json!(seed))]), output)
        }
    };
    write_output(&out, &polytope_json(&p, m))?;
    Ok(0)
}

fn construct(what: Construct, ctx: &Ctx) -> Result<u8> {
    let (p, m, out) = match what {
        Construct::InscribeTruncated { program, axes, output } => {
            let prog = program.program(ctx.seed)?;
            let body = match axes {
                None => Body::UnitSphere,
                Some(a) => {
                    if a.len() != prog.dim || a.iter().any(|&x| x <= 0.0) {
                        bail!("--axes needs {} positive values", prog.dim);
                    }
                    Body::Ellipsoid(nalgebra_diag(&a))
                }
            };
            let r = inscribe_truncated(&prog, &body)?;
            let labels: Vec<String> = r.labels.iter().map(|l| l.to_string()).collect();
            (r.polytope, meta(&[("source", json!("inscribe-truncated")), ("program", json!(program_text(&prog))), ("labels", json!(labels))]), output)
        }
        Construct::RidgeStacked { tree, dim, output } => {
            let t = parse_tree(&tree, dim, ctx.seed)?;
            let p = ridge_scribed_stacked(&t, dim)?;
            (p, meta(&[("source", json!("ridge-stacked")), ("tree", json!(t.edges))]), output)
        }
        Construct::MoebiusSum { left, left_facet, right, right_facet, trust_lattice, output } => {
            let (p, _) = load_polytope(&left, trust_lattice, ctx.tol)?;
            let (q, _) = load_polytope(&right, trust_lattice, ctx.tol)?;
            let s = moebius_connected_sum(&p, left_facet, &q, right_facet, ctx.tol)?;
            (s, meta(&[("source", json!("moebius-sum"))]), output)
        }
        Construct::BallPacking { program, output } => {
            let prog = program.program(ctx.seed)?;
            let packing = ball_packing_truncated(&prog)?;
            let r = inscribe_truncated(&prog, &Body::UnitSphere)?;
            let balls: Vec<Value> =
                packing.balls.iter().map(|b| json!({"center": b.center, "curvature": b.curvature})).collect();
            let labels: Vec<String> = packing.labels.iter().map(|l| l.to_string()).collect();
            let m = meta(&[
                ("source", json!("ball-packing")),
                ("program", json!(program_text(&prog))),
                ("labels", json!(labels)),
                ("balls", json!(balls)),
                ("tangency", json!(packing.tangency)),
            ]);
            (r.polytope, m, output)
        }
        Construct::OddCyclic { dim, n, output } => {
            let oc = odd_cyclic_scribed(dim, n)?;
            let m = meta(&[("source", json!("odd-cyclic")), ("height", json!(oc.height)), ("cluster_width", json!(oc.cluster_width))]);
            (oc.polytope, m, output)
        }
        Construct::WeakIj { i, input, output } => {
            let (p, _) = load_polytope(&input.file, input.trust_lattice, ctx.tol)?;
            let w = weak_ij_realization(&p, i, ctx.seed)?;
            (w, meta(&[("source", json!(format!("weak-ij({i})")))]), output)
        }
    };
    write_output(&out, &polytope_json(&p, m))?;
    Ok(0)
}

fn nalgebra_diag(axes: &[f64]) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_fn(axes.len(), axes.len(), |i, j| if i == j { 1.0 / (axes[i] * axes[i]) } else { 0.0 })
}

fn program_text(p: &TruncationProgram) -> String {
    p.rounds.iter().map(|r| r.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")).collect::<Vec<_>>().join(";")
}

fn dihedral_json(a: &Dihedral) -> Value {
    match a {
        Dihedral::Angle(t) => json!({"angle": t}),
        Dihedral::Ultraparallel { distance } => json!({"ultraparallel_distance": distance}),
    }
}

fn analyze(what: Analyze, ctx: &Ctx) -> Result<u8> {
    let load = |input: &Input| load_polytope(&input.file, input.trust_lattice, ctx.tol).map(|(p, _)| p);
    let (name, verdict, records, code) = match what {
        Analyze::Ksets { k, input } => {
            let p = load(&input)?;
            let ks = k_sets(&p, k);
            let recs: Vec<Value> =
                ks.iter().map(|s| json!({"set": s.set, "normal": s.normal, "offset": s.offset, "margin": s.margin})).collect();
            ("ksets", None, json!(recs), 0)
        }
        Analyze::MissingFaces { size, input } => {
            let p = load(&input)?;
            ("missing-faces", None, json!(missing_faces(&p.lattice, size)), 0)
        }
        Analyze::Neighborliness { input } => {
            let p = load(&input)?;
            ("neighborliness", None, json!({"k": neighborliness(&p.lattice)}), 0)
        }
        Analyze::DualTree { input } => {
            let p = load(&input)?;
            match stacked_analysis(&p.lattice) {
                Ok(a) => {
                    let recs = json!({
                        "stacked": true,
                        "simplices": a.simplices,
                        "tree_edges": a.tree.edges,
                        "max_degree": a.max_degree,
                        "inscribable": a.inscribable,
                    });
                    ("dual-tree", Some(if a.inscribable { "true" } else { "false" }), recs, if a.inscribable { 0 } else { 1 })
                }
                Err(CoreError::NotStacked) => ("dual-tree", Some("false"), json!({"stacked": false}), 1),
                Err(e) => return Err(e.into()),
            }
        }
        Analyze::Dihedral { input } => {
            let p = load(&input)?;
            let mut recs = Vec::new();
            for r in p.lattice.faces_of_rank(p.dim as isize - 2) {
                let a = match dihedral_angle(&p, r) {
                    Ok(a) => dihedral_json(&a),
                    Err(e) => json!({"error": e.to_string()}),
                };
                recs.push(json!({"ridge": r, "dihedral": a}));
            }
            let mut body = json!({"ridges": recs});
            if p.n_vertices() == p.dim + 1 {
                if let Ok(s) = simplex_angle_sum(&p, Geometry::Hyperbolic, ctx.tol) {
                    body["simplex_sum"] = json!({"sum": s.sum, "bound": s.bound, "holds": s.holds});
                }
            }
            ("dihedral", None, body, 0)
        }
        Analyze::AuditStack01 { input } => {
            let p = load(&input)?;
            let a = stack01_audit(&p, ctx.tol)?;
            let pairs = |v: &[(Vec<usize>, Option<f64>)]| -> Vec<Value> {
                v.iter().map(|(f, s)| json!({"face": f, "value": s})).collect()
            };
            let recs = json!({
                "vertex_violations": a.vertex_violations,
                "edge_violations": a.edge_violations,
                "ridge_angles": pairs(&a.ridge_angles),
                "flagged": a.flagged,
                "total": a.total,
                "facet_sums": pairs(&a.facet_sums),
                "interior_sums": pairs(&a.interior_sums),
                "conclusive": a.conclusive(),
            });
            let c = a.conclusive();
            ("audit-stack01", Some(if c { "true" } else { "indeterminate" }), recs, if c { 0 } else { 2 })
        }
        Analyze::Thresholds { dim } => {
            let t = thresholds(dim)?;
            let recs = json!({
                "d": t.d,
                "c": t.c,
                "even_bound": t.even_bound,
                "odd_bound": t.odd_bound,
                "separator_half": t.separator_half,
                "separator_ply": t.separator_ply,
            });
            ("thresholds", None, recs, 0)
        }
        Analyze::Kply { k, input } => {
            let p = load(&input)?;
            let pts = p.euclidean_vertices(1e-12).context("vertices at infinity have no caps")?;
            let r = kply_equivalence_check(&pts, k, ctx.tol)?;
            let recs = json!({
                "k": r.k,
                "k_ply": r.k_ply,
                "k_sets_meet_ball": r.k_sets_meet_ball,
                "far_k_set": r.far_k_set,
                "witness": r.witness.as_ref().map(|w| json!({"subset": w.subset, "point": w.point, "depth": w.depth})),
                "agree": r.agree,
            });
            let (v, code) = match (r.agree, r.k_ply) {
                (false, _) => ("indeterminate", 2),
                (true, true) => ("true", 0),
                (true, false) => ("false", 1),
            };
            ("kply", Some(v), recs, code)
        }
    };
    write_output("-", &report_json(name, verdict, records, ctx.tol, ctx.seed))?;
    Ok(code)
}

fn run(cli: Cli) -> Result<u8> {
    if !(cli.tol > 0.0 && cli.tol < 1.0) {
        bail!("tolerance must lie in (0, 1), got {}", cli.tol);
    }
    let ctx = Ctx { tol: cli.tol, seed: cli.seed };
    match cli.command {
        Command::Build { what } => build(what, &ctx),
        Command::Fixture { name, output } => {
            let p = named_fixture(&name)?;
            write_output(&output, &polytope_json(&p, meta(&[("source", json!(format!("fixture {name}")))])))?;
            Ok(0)
        }
        Command::Check { i, j, mode, input, output } => {
            let (p, _) = load_polytope(&input.file, input.trust_lattice, ctx.tol)?;
            let mode = match mode {
                ModeArg::Strong => Mode::Strong,
                ModeArg::Weak => Mode::Weak,
            };
            let r = scribed_report(&p, i, j, mode, ctx.tol)?;
            write_output(&output, &scribed_report_json(&r, ctx.seed))?;
            Ok(match r.verdict {
                Verdict::True => 0,
                Verdict::False => 1,
                Verdict::Indeterminate => 2,
            })
        }
        Command::Construct { what } => construct(what, &ctx),
        Command::Analyze { what } => analyze(what, &ctx),
        Command::Export { format, input, output } => {
            let (p, file) = load_polytope(&input.file, input.trust_lattice, ctx.tol)?;
            let text = match format {
                ExportFormat::Json => polytope_json(&p, file.metadata.clone()),
                ExportFormat::Off => export::off(&p)?,
                ExportFormat::Svg => export::svg(&p, &file.metadata)?,
            };
            write_output(&output, &text)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = match e.downcast_ref::<CoreError>() {
                Some(CoreError::Indeterminate(_)) => 2,
                Some(CoreError::ConstructionFailed(_)) => 1,
                _ => 3,
            };
            ExitCode::from(code)
        }
    }
}
