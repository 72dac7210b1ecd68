use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use role_embed::eval::{classify_kfold, evaluate_clustering};
use role_embed::io::{self as rio, fmt_f64, parse_weights, RunConfig};
use role_embed::solver::EmbeddingMatrix;
use role_embed::{
    barbell_roles, embed, gen_barbell, gen_cycle_with_shapes, DistanceConfig, Init, LabeledDataset, NodeIds, ShapeKind,
    ShapeSpec, ShapesConfig, SolverConfig,
};
use role_embed_cli::experiment::{repeated_clustering, GraphSpec};
use role_embed_cli::outputs::Outputs;
use role_embed_cli::pipeline::{distances, EdgeInput};
use role_embed_cli::plot::{project_2d, render_svg, PlotSpec};

/// Structural role embeddings: hop-ring degree sequences compared with
/// FastDTW, embedded by stress majorization.
#[derive(Debug, Parser)]
#[command(name = "role-embed", version)]
struct Cli {
    /// Seed for generators, solver initialisation and fold assignment [default: 0]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for output files [default: .]
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Directory for cached distance matrices
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Only print errors
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a synthetic graph and its ground-truth role labels
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Embed the nodes of an edge list
    Embed(EmbedCmd),
    /// Score single-linkage clustering of an embedding against labels
    EvalCluster(EvalClusterCmd),
    /// Cross-validated linear classification of an embedding
    EvalClassify(EvalClassifyCmd),
    /// Draw an embedding as an SVG scatter plot
    Plot(PlotCmd),
}

#[derive(Debug, Subcommand)]
enum GenerateKind {
    /// Two cliques joined by a path
    Barbell {
        #[command(flatten)]
        params: BarbellArgs,
        #[command(flatten)]
        files: GenerateFiles,
    },
    /// A cycle with houses, fans and stars attached
    Shapes {
        #[command(flatten)]
        params: ShapeArgs,
        #[command(flatten)]
        files: GenerateFiles,
    },
}

#[derive(Debug, Args)]
struct GenerateFiles {
    /// Edge list file name, inside the output directory
    #[arg(long, default_value = "edges.txt")]
    edges_file: PathBuf,
    /// Label file name, inside the output directory
    #[arg(long, default_value = "labels.csv")]
    labels_file: PathBuf,
}

#[derive(Debug, Args, Clone)]
struct BarbellArgs {
    /// Nodes per clique
    #[arg(long, default_value_t = 10)]
    clique: usize,
    /// Nodes on the connecting path
    #[arg(long, default_value_t = 11)]
    bridge: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Preset {
    /// 30-cycle, 10 houses
    Houses,
    /// 36-cycle, 3 houses, 3 fans, 3 stars, alternating
    Varied,
}

#[derive(Debug, Args, Clone)]
struct ShapeArgs {
    /// Start from a named layout; explicit shape counts replace its shapes
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Cycle length [default: from the preset, else 30]
    #[arg(long)]
    cycle: Option<usize>,
    #[arg(long)]
    houses: Option<usize>,
    #[arg(long)]
    fans: Option<usize>,
    #[arg(long)]
    stars: Option<usize>,
    /// Branches per fan or star
    #[arg(long, default_value_t = 6)]
    branches: usize,
    /// Extra random edges
    #[arg(long, default_value_t = 0)]
    perturb: usize,
}

impl ShapeArgs {
    fn config(&self, seed: u64) -> ShapesConfig {
        let mut cfg = match self.preset.unwrap_or(Preset::Houses) {
            Preset::Houses => ShapesConfig::houses(self.perturb, seed),
            Preset::Varied => ShapesConfig::varied(self.perturb, seed),
        };
        if self.houses.is_some() || self.fans.is_some() || self.stars.is_some() {
            let b = self.branches;
            cfg.shapes = [
                (ShapeKind::House, self.houses),
                (ShapeKind::Fan { branches: b }, self.fans),
                (ShapeKind::Star { branches: b }, self.stars),
            ]
            .into_iter()
            .filter_map(|(kind, count)| count.filter(|&c| c > 0).map(|count| ShapeSpec { kind, count }))
            .collect();
            if self.preset.is_none() {
                cfg.cycle_len = 30;
            }
        }
        if let Some(c) = self.cycle {
            cfg.cycle_len = c;
        }
        cfg
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InitArg {
    Classical,
    Uniform,
}

/// Distance and solver settings. Unset flags fall back to `--config`, then
/// to the built-in defaults.
#[derive(Debug, Args, Clone)]
struct EmbedArgs {
    /// Run configuration file (flat key=value)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Hop depth k, an integer or `diameter` [default: diameter]
    #[arg(long)]
    k: Option<String>,
    /// Hop weights w: one value for all hops or a comma list w_0,..,w_k [default: 1]
    #[arg(long)]
    weights: Option<String>,
    /// FastDTW radius [default: 1]
    #[arg(long)]
    radius: Option<usize>,
    /// Embedding dimension d [default: 2]
    #[arg(short, long)]
    d: Option<usize>,
    /// Relative stress tolerance ε [default: 1e-3]
    #[arg(long)]
    epsilon: Option<f64>,
    /// Iteration cap [default: 1000]
    #[arg(long)]
    max_iters: Option<usize>,
    /// Half-width of the uniform start, and jitter scale for the classical one [default: 1]
    #[arg(long)]
    init_scale: Option<f64>,
    /// Starting layout [default: classical]
    #[arg(long, value_enum)]
    init: Option<InitArg>,
}

struct Settings {
    distance: DistanceConfig,
    solver: SolverConfig,
    run: Option<RunConfig>,
}

impl EmbedArgs {
    fn settings(&self, seed: Option<u64>) -> Result<Settings> {
        let run = match &self.config {
            Some(p) => Some(RunConfig::load(p).with_context(|| format!("loading {}", p.display()))?),
            None => None,
        };
        let mut distance = run
            .as_ref()
            .map_or_else(DistanceConfig::default, |r| r.distance.clone());
        let mut solver = run.as_ref().map_or_else(SolverConfig::default, |r| r.solver.clone());
        if let Some(k) = &self.k {
            distance.hops = match k.as_str() {
                "diameter" => None,
                k => Some(
                    k.parse()
                        .with_context(|| format!("--k expects an integer or `diameter`, got {k:?}"))?,
                ),
            };
        }
        if let Some(w) = &self.weights {
            distance.weights = parse_weights(w).with_context(|| format!("--weights: cannot parse {w:?}"))?;
        }
        if let Some(r) = self.radius {
            distance.fastdtw_radius = r;
        }
        if let Some(d) = self.d {
            solver.d = d;
        }
        if let Some(e) = self.epsilon {
            solver.epsilon = e;
        }
        if let Some(m) = self.max_iters {
            solver.max_iters = m;
        }
        if let Some(s) = self.init_scale {
            solver.init_scale = s;
        }
        if let Some(i) = self.init {
            solver.init = match i {
                InitArg::Classical => Init::Classical,
                InitArg::Uniform => Init::Uniform,
            };
        }
        if let Some(s) = seed {
            solver.seed = s;
        }
        solver.validate()?;
        Ok(Settings { distance, solver, run })
    }
}

#[derive(Debug, Args)]
struct EmbedCmd {
    /// Edge list; may instead come from `edges` in --config
    edges: Option<PathBuf>,
    #[command(flatten)]
    embed: EmbedArgs,
    /// Embedding CSV name, inside the output directory
    #[arg(long, default_value = "embedding.csv")]
    output: PathBuf,
    /// Stress trace CSV name, inside the output directory
    #[arg(long, default_value = "trace.csv")]
    trace: PathBuf,
    /// Also write the full distance matrix as CSV under this name
    #[arg(long)]
    distances_csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GraphKind {
    Barbell,
    Shapes,
}

#[derive(Debug, Args)]
struct EvalClusterCmd {
    /// Embedding CSV to score
    #[arg(long, required_unless_present = "generate", conflicts_with = "generate")]
    embedding: Option<PathBuf>,
    /// Label CSV matching the embedding
    #[arg(long, requires = "embedding")]
    labels: Option<PathBuf>,
    /// Instead of a file, generate and embed this graph family `runs` times
    #[arg(long, value_enum)]
    generate: Option<GraphKind>,
    /// Number of generated runs [default: 25]
    #[arg(long)]
    runs: Option<usize>,
    #[command(flatten)]
    barbell: BarbellArgs,
    #[command(flatten)]
    shapes: ShapeArgs,
    #[command(flatten)]
    embed: EmbedArgs,
    /// Report CSV name, inside the output directory
    #[arg(long, default_value = "cluster_report.csv")]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct EvalClassifyCmd {
    #[arg(long)]
    embedding: PathBuf,
    #[arg(long)]
    labels: PathBuf,
    /// Number of cross-validation folds
    #[arg(long, default_value_t = 10)]
    folds: usize,
    /// Report CSV name, inside the output directory
    #[arg(long, default_value = "classify_report.csv")]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct PlotCmd {
    #[arg(long)]
    embedding: PathBuf,
    /// Colour points by these labels
    #[arg(long)]
    labels: Option<PathBuf>,
    /// SVG name, inside the output directory
    #[arg(long, default_value = "embedding.svg")]
    output: PathBuf,
    #[arg(long, default_value_t = 800)]
    width: u32,
    #[arg(long, default_value_t = 600)]
    height: u32,
    /// Circle radius in pixels
    #[arg(long, default_value_t = 4.0)]
    point_radius: f64,
    /// Empty margin as a fraction of the plot area
    #[arg(long, default_value_t = 0.05)]
    padding: f64,
}

struct Ctx {
    seed: Option<u64>,
    out_dir: PathBuf,
    cache_dir: Option<PathBuf>,
    quiet: bool,
}

impl Ctx {
    fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    fn out(&self, name: &Path) -> PathBuf {
        self.out_dir.join(name)
    }

    fn say(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", msg.as_ref());
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("ROLE_EMBED_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .with_context(|| format!("ROLE_EMBED_THREADS must be a non-negative integer, got {raw:?}"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    Ok(())
}

fn read_labels_for(path: &Path, ids: &NodeIds) -> Result<LabeledDataset> {
    let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    rio::read_labels(BufReader::new(f), ids).with_context(|| format!("reading labels {}", path.display()))
}

fn read_embedding_file(path: &Path) -> Result<(NodeIds, EmbeddingMatrix<f64>)> {
    let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    rio::read_embedding(BufReader::new(f)).with_context(|| format!("reading embedding {}", path.display()))
}

fn generate(ctx: &Ctx, kind: &GenerateKind, out: &mut Outputs) -> Result<()> {
    let (graph, labels, files) = match kind {
        GenerateKind::Barbell { params, files } => (
            gen_barbell(params.clique, params.bridge)?,
            barbell_roles(params.clique, params.bridge)?,
            files,
        ),
        GenerateKind::Shapes { params, files } => {
            let (g, l) = gen_cycle_with_shapes(&params.config(ctx.seed()))?;
            (g, l, files)
        }
    };
    let ids = NodeIds::sequential(graph.node_count());
    let edges = ctx.out(&files.edges_file);
    out.write(&edges, |w| rio::write_edge_list(&graph, &ids, w))?;
    out.write(&ctx.out(&files.labels_file), |w| rio::write_labels(&labels, &ids, w))?;
    ctx.say(format!(
        "{}: {} nodes, {} edges, {} role classes",
        edges.display(),
        graph.node_count(),
        graph.edge_count(),
        labels.class_count()
    ));
    Ok(())
}

fn embed_cmd(ctx: &Ctx, cmd: &EmbedCmd, out: &mut Outputs) -> Result<()> {
    let settings = cmd.embed.settings(ctx.seed)?;
    let edges = match (&cmd.edges, &settings.run) {
        (Some(e), _) => e.clone(),
        (None, Some(run)) => run.edges.clone(),
        (None, None) => bail!("no edge list given; pass a path or --config with `edges`"),
    };
    let cache_dir = ctx
        .cache_dir
        .clone()
        .or_else(|| settings.run.as_ref().and_then(|r| r.cache_dir.clone()));
    let input = EdgeInput::read(&edges)?;
    let (d, _) = distances(&input, &settings.distance, cache_dir.as_deref())?;
    let (x, trace) = embed(&d, &settings.solver)?;
    let ids = &input.loaded.ids;
    out.write(&ctx.out(&cmd.output), |w| rio::write_embedding(&x, ids, w))?;
    out.write(&ctx.out(&cmd.trace), |w| rio::write_trace(&trace, w))?;
    if let Some(name) = &cmd.distances_csv {
        out.write(&ctx.out(name), |w| rio::write_distance_csv(&d, w))?;
    }
    let final_stress = trace.stresses.last().copied().unwrap_or(0.0);
    ctx.say(format!(
        "final stress {} after {} iterations ({})",
        fmt_f64(final_stress),
        trace.iterations,
        if trace.converged {
            "converged"
        } else {
            "iteration cap reached"
        }
    ));
    Ok(())
}

fn eval_cluster(ctx: &Ctx, cmd: &EvalClusterCmd, out: &mut Outputs) -> Result<()> {
    let rows: Vec<(String, f64)> = if let Some(kind) = cmd.generate {
        let settings = cmd.embed.settings(ctx.seed)?;
        let runs = cmd.runs.or(settings.run.as_ref().map(|r| r.runs)).unwrap_or(25);
        let spec = match kind {
            GraphKind::Barbell => GraphSpec::Barbell {
                clique: cmd.barbell.clique,
                bridge: cmd.barbell.bridge,
            },
            GraphKind::Shapes => GraphSpec::Shapes(cmd.shapes.config(ctx.seed())),
        };
        let result = repeated_clustering(&spec, runs, settings.solver.seed, &settings.distance, &settings.solver)?;
        for r in &result.runs {
            ctx.say(format!(
                "run seed {:>4}: homogeneity {:.4}  completeness {:.4}  silhouette {:.4}",
                r.seed, r.scores.homogeneity, r.scores.completeness, r.scores.silhouette
            ));
        }
        let (m, b) = (result.mean, result.baseline);
        ctx.say(format!(
            "mean over {runs} runs: homogeneity {:.4}  completeness {:.4}  silhouette {:.4}",
            m.homogeneity, m.completeness, m.silhouette
        ));
        ctx.say(format!(
            "random-label baseline: homogeneity {:.4}  completeness {:.4}  silhouette {:.4}",
            b.homogeneity, b.completeness, b.silhouette
        ));
        vec![
            ("runs".into(), runs as f64),
            ("homogeneity".into(), m.homogeneity),
            ("completeness".into(), m.completeness),
            ("silhouette".into(), m.silhouette),
            ("baseline_homogeneity".into(), b.homogeneity),
            ("baseline_completeness".into(), b.completeness),
            ("baseline_silhouette".into(), b.silhouette),
        ]
    } else {
        let emb_path = cmd.embedding.as_ref().expect("clap requires --embedding");
        let labels_path = cmd.labels.as_ref().context("--labels is required with --embedding")?;
        let (ids, x) = read_embedding_file(emb_path)?;
        let truth = read_labels_for(labels_path, &ids)?;
        let r = evaluate_clustering(&x, &truth)?;
        ctx.say(format!(
            "homogeneity {:.4}  completeness {:.4}  silhouette {:.4}  ({} clusters)",
            r.homogeneity,
            r.completeness,
            r.silhouette,
            truth.class_count()
        ));
        vec![
            ("runs".into(), 1.0),
            ("homogeneity".into(), r.homogeneity),
            ("completeness".into(), r.completeness),
            ("silhouette".into(), r.silhouette),
        ]
    };
    let rows: Vec<(&str, f64)> = rows.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    out.write(&ctx.out(&cmd.output), |w| rio::write_report(&rows, w))?;
    Ok(())
}

fn eval_classify(ctx: &Ctx, cmd: &EvalClassifyCmd, out: &mut Outputs) -> Result<()> {
    let (ids, x) = read_embedding_file(&cmd.embedding)?;
    let truth = read_labels_for(&cmd.labels, &ids)?;
    let report = classify_kfold(&x, &truth, cmd.folds, ctx.seed())?;
    let mut rows: Vec<(String, f64)> = Vec::new();
    for (i, f1) in report.fold_f1.iter().enumerate() {
        ctx.say(format!("fold {i}: micro-F1 {f1:.4}"));
        rows.push((format!("fold{i}_micro_f1"), *f1));
    }
    ctx.say(format!(
        "mean fold micro-F1 {:.4}  (pooled {:.4})",
        report.mean_fold_f1(),
        report.micro_f1
    ));
    rows.push(("mean_micro_f1".into(), report.mean_fold_f1()));
    rows.push(("pooled_micro_f1".into(), report.micro_f1));
    rows.push(("stratified".into(), if report.stratified { 1.0 } else { 0.0 }));
    let rows: Vec<(&str, f64)> = rows.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    out.write(&ctx.out(&cmd.output), |w| rio::write_report(&rows, w))?;
    Ok(())
}

fn plot(ctx: &Ctx, cmd: &PlotCmd, out: &mut Outputs) -> Result<()> {
    let (ids, x) = read_embedding_file(&cmd.embedding)?;
    let labels = cmd.labels.as_ref().map(|p| read_labels_for(p, &ids)).transpose()?;
    let spec = PlotSpec {
        width: cmd.width,
        height: cmd.height,
        point_radius: cmd.point_radius,
        padding: cmd.padding,
        ..PlotSpec::default()
    };
    let points = project_2d(&x)?;
    let svg = render_svg(&points, ids.names(), labels.as_ref(), &spec)?;
    let path = ctx.out(&cmd.output);
    out.write(&path, |w| Ok(w.write_all(svg.as_bytes())?))?;
    ctx.say(format!("{}: {} points", path.display(), x.n()));
    Ok(())
}

fn run(cli: &Cli, out: &mut Outputs) -> Result<()> {
    configure_threads()?;
    let ctx = Ctx {
        seed: cli.seed,
        out_dir: cli.out_dir.clone().unwrap_or_else(|| PathBuf::from(".")),
        cache_dir: cli.cache_dir.clone(),
        quiet: cli.quiet,
    };
    match &cli.command {
        Command::Generate { kind } => generate(&ctx, kind, out),
        Command::Embed(cmd) => embed_cmd(&ctx, cmd, out),
        Command::EvalCluster(cmd) => eval_cluster(&ctx, cmd, out),
        Command::EvalClassify(cmd) => eval_classify(&ctx, cmd, out),
        Command::Plot(cmd) => plot(&ctx, cmd, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.quiet { "error" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let mut out = Outputs::new();
    match run(&cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            out.discard();
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
