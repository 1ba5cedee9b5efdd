use clap::{Args, Parser, Subcommand, ValueEnum};
use deception_core::detection::{Detector, DetectorId};
use deception_core::harness::{self, aggregate_reports, Deceiver, EvalConfig, TargetChoice};
use deception_core::io::{self, GraphFormat, LabelTable, ReportFormat};
use deception_core::modularity::modularity_or_zero;
use deception_core::{deception_score, Graph, NodeId, Partition, TargetCommunity, UpdateKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "decept", version, about = "Hide a community from community detection by rewiring edges")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a detector and print its communities, one per line.
    Detect(DetectArgs),
    /// Rewire edges around a target community and write the new edge list.
    Deceive(DeceiveArgs),
    /// Deception score of a target community under a given partition.
    Score(ScoreArgs),
    /// Generate a planted-partition graph.
    Generate(GenerateArgs),
    /// Full sweep over detectors, deceivers, budgets and runs.
    Evaluate(EvaluateArgs),
}

#[derive(Args)]
struct GraphArgs {
    /// Input graph; relative paths that do not exist are looked up in $DECEPT_DATA_DIR.
    #[arg(long)]
    graph: PathBuf,
    /// Input format; guessed from the extension when omitted.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Edgelist,
    Gml,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Emit {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Louvain,
    Labelprop,
    Greedy,
}

impl From<AlgorithmArg> for DetectorId {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Louvain => DetectorId::Louvain,
            AlgorithmArg::Labelprop => DetectorId::LabelPropagation,
            AlgorithmArg::Greedy => DetectorId::GreedyAgglomerative,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DeceiverArg {
    Modmin,
    Safgain,
}

impl From<DeceiverArg> for Deceiver {
    fn from(d: DeceiverArg) -> Self {
        match d {
            DeceiverArg::Modmin => Deceiver::ModMin,
            DeceiverArg::Safgain => Deceiver::SafGain,
        }
    }
}

#[derive(Args)]
struct DetectArgs {
    #[command(flatten)]
    input: GraphArgs,
    #[arg(long, value_enum, default_value = "louvain")]
    algorithm: AlgorithmArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    emit: Emit,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("target").required(true).args(["target_file", "worst_case"]))]
struct DeceiveArgs {
    #[command(flatten)]
    input: GraphArgs,
    #[arg(long, value_enum)]
    deceiver: DeceiverArg,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// One line of whitespace-separated node labels.
    #[arg(long)]
    target_file: Option<PathBuf>,
    /// Detect communities and hide a random one with at least two members.
    #[arg(long)]
    worst_case: bool,
    /// Detector for the initial partition.
    #[arg(long, value_enum, default_value = "louvain")]
    algorithm: AlgorithmArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Deceived edge list; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Applied updates, one per line; stderr when omitted.
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Args)]
struct ScoreArgs {
    #[command(flatten)]
    input: GraphArgs,
    /// One community per line, whitespace-separated labels.
    #[arg(long)]
    partition_file: PathBuf,
    #[arg(long)]
    target_file: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    emit: Emit,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("sizes").required(true).args(["k", "min_size"]))]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    /// Number of equally sized communities.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, requires = "max_size")]
    min_size: Option<usize>,
    #[arg(long, requires = "min_size")]
    max_size: Option<usize>,
    #[arg(long)]
    p_in: f64,
    #[arg(long)]
    p_out: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge list; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Ground-truth communities, one per line.
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    input: GraphArgs,
    /// Comma-separated detector names.
    #[arg(long, value_delimiter = ',', value_parser = parse_id::<DetectorId>, default_value = "louvain,labelprop,greedy")]
    detectors: Vec<DetectorId>,
    #[arg(long, value_delimiter = ',', value_parser = parse_id::<Deceiver>, default_value = "modmin,safgain")]
    deceivers: Vec<Deceiver>,
    /// Comma list and inclusive ranges, e.g. `1,2,3,4` or `1..4`.
    #[arg(long, value_parser = parse_budgets, default_value = "1..4")]
    budgets: Budgets,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    runs: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Dataset name in the reports; the file stem when omitted.
    #[arg(long)]
    dataset: Option<String>,
    /// Hide this community in every run instead of a detected one.
    #[arg(long)]
    target_file: Option<PathBuf>,
    /// Maximum number of cells evaluated at once.
    #[arg(long)]
    jobs: Option<usize>,
    /// Record wall-clock time per cell; off keeps output reproducible.
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    emit: Emit,
    /// Also write per-group means and deviations as JSON.
    #[arg(long)]
    summary: Option<PathBuf>,
}

fn parse_id<T: std::str::FromStr<Err = deception_core::Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: deception_core::Error| e.to_string())
}

#[derive(Clone, Debug)]
struct Budgets(Vec<usize>);

fn parse_budgets(s: &str) -> Result<Budgets, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("'{x}' is not a budget"));
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (parse(a)?, parse(b.trim_start_matches('='))?);
                if a > b {
                    return Err(format!("empty range {part}"));
                }
                out.extend(a..=b);
            }
            None => out.push(parse(part)?),
        }
    }
    if out.is_empty() {
        return Err("no budgets given".into());
    }
    if out.contains(&0) {
        return Err("budgets must be at least 1".into());
    }
    Ok(Budgets(out))
}

type Fallible<T> = Result<T, String>;

fn load(args: &GraphArgs) -> Fallible<(Graph, LabelTable)> {
    let path = io::resolve_dataset(&args.graph);
    let bytes = fs::read(&path).map_err(|e| format!("reading {}: {e}", path.display()))?;
    let format = match args.format {
        Some(FormatArg::Edgelist) => GraphFormat::EdgeList,
        Some(FormatArg::Gml) => GraphFormat::Gml,
        None => GraphFormat::from_path(&path),
    };
    io::parse_graph(&bytes, format).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_text(path: &Path) -> Fallible<String> {
    fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> Fallible<()> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| format!("writing {}: {e}", p.display())),
        None => std::io::stdout().write_all(bytes).map_err(|e| e.to_string()),
    }
}

fn label_line(ids: &[NodeId], labels: &LabelTable) -> String {
    ids.iter().map(|&u| labels.label(u).unwrap_or("?")).collect::<Vec<_>>().join(" ")
}

fn labelled_communities(p: &Partition, labels: &LabelTable) -> Vec<Vec<String>> {
    p.communities().iter().map(|c| c.iter().map(|&u| labels.label(u).unwrap_or("?").to_string()).collect()).collect()
}

fn detect(args: DetectArgs) -> Fallible<()> {
    let (graph, labels) = load(&args.input)?;
    let detector = DetectorId::from(args.algorithm);
    let partition = detector.detect(&graph, args.seed).map_err(|e| e.to_string())?;
    let out = match args.emit {
        Emit::Json => {
            let value = serde_json::json!({
                "algorithm": detector.as_str(),
                "seed": args.seed,
                "modularity": io::format_sig(modularity_or_zero(&partition)).parse::<f64>().unwrap_or(0.0),
                "communities": labelled_communities(&partition, &labels),
            });
            serde_json::to_string_pretty(&value).map_err(|e| e.to_string())? + "\n"
        }
        _ => partition.communities().iter().map(|c| label_line(c, &labels) + "\n").collect(),
    };
    write_out(args.output.as_deref(), out.as_bytes())
}

fn read_target(path: &Path, labels: &LabelTable) -> Fallible<Vec<NodeId>> {
    labels.resolve(&read_text(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn deceive(args: DeceiveArgs) -> Fallible<()> {
    let (graph, labels) = load(&args.input)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let detector = DetectorId::from(args.algorithm);
    let err = |e: deception_core::Error| e.to_string();
    let partition = detector.detect(&graph, args.seed).map_err(err)?;
    let target = match &args.target_file {
        Some(path) => TargetCommunity::new(&graph, &read_target(path, &labels)?).map_err(err)?,
        None => harness::select_worst_case_target(&graph, &partition, &mut rng).map_err(err)?,
    };
    let run =
        Deceiver::from(args.deceiver).run(&graph, &partition, &target, args.budget as usize, &mut rng).map_err(err)?;

    let mut log = format!("# target {}\n", label_line(target.members(), &labels));
    for up in &run.updates {
        let tag = if up.kind == UpdateKind::Add { "add" } else { "del" };
        log += &format!("{tag} {}\n", label_line(&[up.u, up.v], &labels));
    }
    if run.truncated {
        log += "# stopped early: no legal update left\n";
    }
    write_out(args.output.as_deref(), io::write_edge_list(&run.graph, &labels).as_bytes())?;
    match &args.log {
        Some(p) => fs::write(p, log).map_err(|e| format!("writing {}: {e}", p.display())),
        None => {
            eprint!("{log}");
            Ok(())
        }
    }
}

fn score(args: ScoreArgs) -> Fallible<()> {
    let (graph, labels) = load(&args.input)?;
    let text = read_text(&args.partition_file)?;
    let mut communities = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#')) {
        communities.push(labels.resolve(line).map_err(|e| format!("{}: {e}", args.partition_file.display()))?);
    }
    let partition = Partition::build(&graph, communities).map_err(|e| e.to_string())?;
    let target = read_target(&args.target_file, &labels)?;
    let s = deception_score(&graph, &partition, &target).map_err(|e| e.to_string())?;
    let out = match args.emit {
        Emit::Json => {
            let r = |x: f64| io::format_sig(x).parse::<f64>().unwrap_or(0.0);
            let value = serde_json::json!({
                "components": s.components,
                "communities_met": s.communities_met,
                "connectivity": r(s.connectivity),
                "spread": r(s.spread),
                "hiding": r(s.hiding),
                "score": r(s.score),
            });
            serde_json::to_string_pretty(&value).map_err(|e| e.to_string())? + "\n"
        }
        _ => format!(
            "components {}\ncommunities_met {}\nconnectivity {}\nspread {}\nhiding {}\nscore {}\n",
            s.components,
            s.communities_met,
            io::format_sig(s.connectivity),
            io::format_sig(s.spread),
            io::format_sig(s.hiding),
            io::format_sig(s.score)
        ),
    };
    write_out(args.output.as_deref(), out.as_bytes())
}

fn generate(args: GenerateArgs) -> Fallible<()> {
    let sizes = match (args.k, args.min_size, args.max_size) {
        (Some(k), _, _) => io::CommunitySizes::Equal { k },
        (None, Some(min), Some(max)) => io::CommunitySizes::Bounded { min, max },
        _ => unreachable!("clap enforces the size group"),
    };
    let params = io::PlantedPartitionParams { n: args.n, sizes, p_in: args.p_in, p_out: args.p_out, seed: args.seed };
    let (graph, truth) = io::generate_planted_partition(&params).map_err(|e| e.to_string())?;
    let labels = LabelTable::identity(graph.node_count());
    write_out(args.output.as_deref(), io::write_edge_list(&graph, &labels).as_bytes())?;
    if let Some(path) = &args.truth {
        let text: String = truth.iter().map(|c| label_line(c, &labels) + "\n").collect();
        fs::write(path, text).map_err(|e| format!("writing {}: {e}", path.display()))?;
    }
    Ok(())
}

fn evaluate(args: EvaluateArgs) -> Fallible<bool> {
    let (graph, labels) = load(&args.input)?;
    let dataset = args.dataset.clone().unwrap_or_else(|| {
        args.input.graph.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "graph".into())
    });
    let target = match &args.target_file {
        Some(path) => TargetChoice::Fixed(read_target(path, &labels)?),
        None => TargetChoice::WorstCase,
    };

    let mut reports = Vec::new();
    for detector in &args.detectors {
        for &deceiver in &args.deceivers {
            let mut config =
                EvalConfig::new(dataset.clone(), deceiver, args.budgets.0.clone(), args.runs as usize, args.seed);
            config.target = target.clone();
            config.record_timing = args.timing;
            config.jobs = args.jobs;
            reports.extend(harness::evaluate(&graph, detector, &config).map_err(|e| e.to_string())?);
        }
    }
    let format = if args.emit == Emit::Json { ReportFormat::Json } else { ReportFormat::Csv };
    let bytes = io::write_reports(&reports, format).map_err(|e| e.to_string())?;
    write_out(args.output.as_deref(), &bytes)?;
    if let Some(path) = &args.summary {
        let summary = aggregate_reports(&reports).map_err(|e| e.to_string())?;
        let json = serde_json::to_string_pretty(&summary).map_err(|e| e.to_string())? + "\n";
        fs::write(path, json).map_err(|e| format!("writing {}: {e}", path.display()))?;
    }

    let failed: Vec<_> = reports.iter().filter(|r| r.status.is_failed()).collect();
    for r in &failed {
        eprintln!(
            "error: cell {}/{}/{} budget {} run {}: {}",
            r.dataset, r.detector, r.deceiver, r.budget, r.run, r.status
        );
    }
    Ok(failed.is_empty())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Detect(a) => detect(a).map(|_| true),
        Command::Deceive(a) => deceive(a).map(|_| true),
        Command::Score(a) => score(a).map(|_| true),
        Command::Generate(a) => generate(a).map(|_| true),
        Command::Evaluate(a) => evaluate(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
