//! The `tbm` command line: files in, tables out.
//!
//! Every subcommand prints a table on stdout, CSV by default. Numbers are
//! written with six significant digits. Errors print one line on stderr.
//! Unparsable arguments or input files exit with status 2, anything else
//! with status 1.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::classifier::{
    evaluate_pcc, tune_a, ClassifierConfig, EvidentialClassifier, LabeledCase, LearningSet,
    TrainedModel, DEFAULT_A_GRID,
};
use crate::conflict::{
    self, best_partition_with, suggest_source_count, EvidencePool, Search, DEFAULT_RESTARTS,
    DEFAULT_TOLERANCE,
};
use crate::experiments::{run_case_study, ExperimentConfig};
use crate::overlap::combine_overlapping;
use crate::pas::{self, enumerate_arguments_with_budget, CitationGraph, LogisticFit};
use crate::{Error, Frame, MassFunction, Result, Subset};

/// Seed used by stochastic commands when `--seed` is absent.
pub const DEFAULT_SEED: u64 = 2024;

/// Frames up to this size list every subset in `fuse` output.
const FULL_LISTING_LIMIT: usize = 10;

#[derive(Debug, Parser)]
#[command(
    name = "tbm",
    version,
    about = "Belief-function fusion, evidential classification and citation support"
)]
pub struct Cli {
    /// Seed for every stochastic step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Pretty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Rule {
    Overlap,
    Conjunctive,
    Disjunctive,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Combine mass functions and tabulate m, bel, pl and BetP.
    Fuse(FuseArgs),
    /// Fit the evidential classifier on a labelled CSV and save it as JSON.
    ClassifyTrain(TrainArgs),
    /// Classify the rows of a CSV with a saved model.
    ClassifyPredict(PredictArgs),
    /// Group sources so that within-group conflict is minimal.
    Cluster(ClusterArgs),
    /// Rank documents of a citation graph by degree of support.
    Ir(IrArgs),
    /// Replicate one of the synthetic case studies.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args)]
pub struct FuseArgs {
    #[arg(long, value_enum, default_value_t = Rule::Conjunctive)]
    pub rule: Rule,
    /// Normalize the result (Dempster's rule).
    #[arg(long)]
    pub normalize: bool,
    /// Also write the combined assignment as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Mass function JSON files, combined left to right.
    #[arg(required = true, num_args = 2..)]
    pub inputs: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifierFlags {
    /// Rescaled neighbours used for each local covariance.
    #[arg(long)]
    pub k_cov: Option<usize>,
    #[arg(long, default_value_t = 1e-3)]
    pub ridge: f64,
    /// Normalize pooled evidence.
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// CSV with header `f1,…,fp,pkc`; pkc cells join class names with `|`.
    pub train: PathBuf,
    /// Where to write the model.
    #[arg(long)]
    pub out: PathBuf,
    /// Slope of the reliability function.
    #[arg(long, conflicts_with = "tune")]
    pub a: Option<f64>,
    /// Pick the slope by leave-one-out over the grid.
    #[arg(long)]
    pub tune: bool,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_A_GRID.to_vec())]
    pub grid: Vec<f64>,
    /// Class order; defaults to the sorted labels found in the file.
    #[arg(long, value_delimiter = ',')]
    pub classes: Option<Vec<String>>,
    #[command(flatten)]
    pub classifier: ClassifierFlags,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    pub model: PathBuf,
    /// Feature CSV; a trailing `pkc` column of true classes enables PCC.
    pub test: PathBuf,
    /// Write predictions here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    /// Number of groups.
    #[arg(long)]
    pub groups: usize,
    /// Conflict tolerated when suggesting a source count.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tau: f64,
    /// Use local search even when exhaustive search is feasible.
    #[arg(long)]
    pub heuristic: bool,
    /// List every partition with up to `--groups` groups.
    #[arg(long)]
    pub all: bool,
    /// Mass function JSON files, one per source.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IrArgs {
    /// Graph JSON: `{"docs":[{"id":"D1","rank":3}],"links":[["D1","D6"]]}`.
    pub graph: PathBuf,
    #[arg(long, default_value_t = pas::DEFAULT_LAMBDA)]
    pub lambda: f64,
    /// Logistic slope on ln(rank).
    #[arg(long, default_value_t = LogisticFit::default().slope, allow_negative_numbers = true)]
    pub logit_a: f64,
    /// Logistic intercept.
    #[arg(long, default_value_t = LogisticFit::default().intercept, allow_negative_numbers = true)]
    pub logit_b: f64,
    /// Report only this document, with its symbolic support on stderr.
    #[arg(long)]
    pub target: Option<String>,
    /// Sample count for documents with too many assumptions for exact evaluation.
    #[arg(long, default_value_t = 1_000_000)]
    pub mc_samples: usize,
    #[arg(long, default_value_t = pas::DEFAULT_MAX_PATHS)]
    pub max_paths: usize,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Case study 1 to 5.
    #[arg(long = "case")]
    pub case: u32,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    /// Replace every class covariance by σ²·I.
    #[arg(long)]
    pub sigma2: Option<f64>,
}

/// Parses `args` (program name first), runs the command, and returns the
/// process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match dispatch(&cli, &mut out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("tbm: {e}");
            if e.is_parse() {
                2
            } else {
                1
            }
        }
    }
}

pub fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let table = match &cli.command {
        Command::Fuse(args) => fuse(args)?,
        Command::ClassifyTrain(args) => classify_train(args)?,
        Command::ClassifyPredict(args) => {
            let table = classify_predict(args)?;
            if let Some(path) = &args.out {
                let mut file = fs::File::create(path)?;
                table.render(cli.format, &mut file)?;
                return Ok(());
            }
            table
        }
        Command::Cluster(args) => cluster(args, cli.seed)?,
        Command::Ir(args) => ir(args, cli.seed)?,
        Command::Experiment(args) => experiment(args, cli.seed)?,
    };
    table.render(cli.format, out)
}

/// Six significant digits, trailing zeros dropped.
pub fn format_number(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&magnitude) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn render(&self, format: OutputFormat, out: &mut dyn Write) -> Result<()> {
        match format {
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()?;
            }
            OutputFormat::Pretty => {
                let mut widths: Vec<usize> =
                    self.header.iter().map(|h| h.chars().count()).collect();
                for row in &self.rows {
                    for (w, cell) in widths.iter_mut().zip(row) {
                        *w = (*w).max(cell.chars().count());
                    }
                }
                let line = |cells: &[String]| -> String {
                    cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, &w)| format!("{c:<w$}"))
                        .collect::<Vec<_>>()
                        .join("  ")
                        .trim_end()
                        .to_string()
                };
                writeln!(out, "{}", line(&self.header))?;
                for row in &self.rows {
                    writeln!(out, "{}", line(row))?;
                }
            }
        }
        Ok(())
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_mass(path: &Path) -> Result<MassFunction> {
    MassFunction::from_json(&read(path)?)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn fuse(args: &FuseArgs) -> Result<Table> {
    let inputs = args
        .inputs
        .iter()
        .map(|p| load_mass(p))
        .collect::<Result<Vec<_>>>()?;
    let mut acc = inputs[0].clone();
    for next in &inputs[1..] {
        acc = match args.rule {
            Rule::Overlap => {
                let fused = combine_overlapping(&acc, next)?;
                for o in &fused.orphans {
                    let f = fused.mass.frame();
                    eprintln!(
                        "tbm: orphaned mass {} on {} moved to {}",
                        format_number(o.mass),
                        f.format(o.core),
                        f.format(o.assigned_to)
                    );
                }
                fused.mass
            }
            Rule::Conjunctive => acc.conjunctive(next)?,
            Rule::Disjunctive => acc.disjunctive(next)?,
        };
    }
    if args.normalize {
        acc = acc.normalized()?;
    }
    if let Some(path) = &args.out {
        fs::write(path, acc.to_json())?;
    }
    Ok(mass_table(&acc))
}

/// Rows for ∅ (when it carries mass) and every nonempty subset, by size
/// then members. Large frames list only focal sets and singletons.
fn mass_table(m: &MassFunction) -> Table {
    let frame = m.frame();
    let n = frame.len();
    let mut sets: Vec<Subset> = if n <= FULL_LISTING_LIMIT {
        (1u64..1 << n).map(Subset::from_bits).collect()
    } else {
        let mut s: Vec<Subset> = m
            .focal()
            .iter()
            .map(|&(s, _)| s)
            .filter(|s| !s.is_empty())
            .collect();
        s.extend((0..n).map(Subset::singleton));
        s.sort_unstable();
        s.dedup();
        s
    };
    sets.sort_by_key(|s| (s.len(), s.indices().collect::<Vec<_>>()));
    let betp = m.pignistic().ok();

    let mut table = Table::new(["set", "m", "bel", "pl", "betp"]);
    if m.conflict() > 0.0 {
        table.push(vec![
            frame.format(Subset::EMPTY),
            format_number(m.conflict()),
            "0".into(),
            "0".into(),
            String::new(),
        ]);
    }
    for s in sets {
        let p = match (&betp, s.len()) {
            (Some(b), 1) => format_number(b.prob(s.indices().next().expect("singleton"))),
            _ => String::new(),
        };
        table.push(vec![
            frame.format(s),
            format_number(m.mass(s)),
            format_number(m.bel(s)),
            format_number(m.pl(s)),
            p,
        ]);
    }
    table
}

/// Feature rows and optional label cells from a CSV whose last column may
/// be `pkc`.
/// Feature rows, and the `pkc` column when present.
type CaseTable = (Vec<Vec<f64>>, Option<Vec<String>>);

fn read_cases(path: &Path) -> Result<CaseTable> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)?;
    let header = reader.headers()?.clone();
    let has_label = header.iter().next_back() == Some("pkc");
    let p = header.len() - usize::from(has_label);
    if p == 0 {
        return Err(Error::Parse(format!(
            "{}: no feature columns",
            path.display()
        )));
    }
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let row = (0..p)
            .map(|j| {
                record[j].parse::<f64>().map_err(|_| {
                    Error::Parse(format!(
                        "{}: row {}: `{}` is not a number",
                        path.display(),
                        line + 1,
                        &record[j]
                    ))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        features.push(row);
        if has_label {
            labels.push(record[p].to_string());
        }
    }
    Ok((features, has_label.then_some(labels)))
}

fn split_label(cell: &str) -> impl Iterator<Item = &str> {
    cell.split('|').map(str::trim).filter(|s| !s.is_empty())
}

fn classify_train(args: &TrainArgs) -> Result<Table> {
    let (features, labels) = read_cases(&args.train)?;
    let labels = labels
        .ok_or_else(|| Error::Parse(format!("{}: missing `pkc` column", args.train.display())))?;
    let classes = match &args.classes {
        Some(c) => c.clone(),
        None => {
            let mut c: Vec<String> = labels
                .iter()
                .flat_map(|l| split_label(l))
                .map(str::to_string)
                .collect();
            c.sort();
            c.dedup();
            c
        }
    };
    let frame = Frame::new(classes)?;
    let raw = features
        .into_iter()
        .zip(&labels)
        .map(|(f, l)| Ok(LabeledCase::new(f, frame.subset(split_label(l))?)))
        .collect::<Result<Vec<_>>>()?;
    let ls = LearningSet::fit(frame, raw)?;
    let mut cfg = ClassifierConfig {
        a: args.a.unwrap_or(1.0),
        k_cov: args.classifier.k_cov,
        ridge: args.classifier.ridge,
        normalize_combination: args.classifier.normalize,
    };
    if args.tune {
        cfg.a = tune_a(&ls, &args.grid, &cfg)?;
    }
    // Fails early on an unusable configuration.
    EvidentialClassifier::new(&ls, cfg.clone())?;
    fs::write(&args.out, TrainedModel::new(&ls, &cfg).to_json())?;

    let mut table = Table::new(["cases", "features", "classes", "a"]);
    table.push(vec![
        ls.len().to_string(),
        ls.dim().to_string(),
        ls.frame().labels().join("|"),
        format_number(cfg.a),
    ]);
    Ok(table)
}

fn classify_predict(args: &PredictArgs) -> Result<Table> {
    let model = TrainedModel::from_json(&read(&args.model)?)?;
    let ls = model.learning_set()?;
    let cfg = model.config();
    let classifier = EvidentialClassifier::new(&ls, cfg.clone())?;
    let (features, labels) = read_cases(&args.test)?;

    let frame = ls.frame();
    let mut header = vec!["case".to_string(), "predicted".to_string()];
    header.extend(frame.labels().iter().map(|l| format!("betp_{l}")));
    header.push("conflict".into());
    let mut table = Table::new(header);
    for (i, x) in features.iter().enumerate() {
        let c = classifier.classify(x)?;
        let mut row = vec![(i + 1).to_string(), c.label().to_string()];
        row.extend(c.betp.probabilities().iter().map(|&p| format_number(p)));
        row.push(format_number(c.mass.conflict()));
        table.push(row);
    }

    if let Some(labels) = labels {
        let tests = features
            .into_iter()
            .zip(&labels)
            .map(|(f, l)| Ok(LabeledCase::new(f, frame.subset(split_label(l))?)))
            .collect::<Result<Vec<_>>>()?;
        let pcc = evaluate_pcc(&ls, &tests, &cfg)?;
        eprintln!("pcc,{}", format_number(pcc));
    }
    Ok(table)
}

fn cluster(args: &ClusterArgs, seed: u64) -> Result<Table> {
    let sources = args
        .inputs
        .iter()
        .map(|p| load_mass(p))
        .collect::<Result<Vec<_>>>()?;
    let pool = EvidencePool::new(sources)?;
    if args.groups == 0 || args.groups > pool.len() {
        return Err(Error::InvalidGroupCount {
            k: args.groups,
            sources: pool.len(),
        });
    }
    let search = if args.heuristic {
        Search::Heuristic {
            restarts: DEFAULT_RESTARTS,
            seed,
        }
    } else {
        Search::Auto
    };

    let mut table = Table::new(["role", "k", "partition", "group_conflicts", "total"]);
    let row = |role: &str, r: &conflict::ConflictReport| -> Vec<String> {
        vec![
            role.to_string(),
            r.partition.num_groups().to_string(),
            r.partition.to_string(),
            r.group_conflicts
                .iter()
                .map(|&c| format_number(c))
                .collect::<Vec<_>>()
                .join(";"),
            format_number(r.total),
        ]
    };
    if args.all {
        for k in 1..=args.groups {
            for r in conflict::all_partitions(&pool, k)? {
                table.push(row("candidate", &r));
            }
        }
    }
    for k in 1..=args.groups {
        let r = best_partition_with(&pool, k, search)?;
        let role = if r.heuristic {
            "best-heuristic"
        } else {
            "best"
        };
        table.push(row(role, &r));
    }
    let (_, suggested) = suggest_source_count(&pool, args.groups, args.tau)?;
    table.push(row("suggested", &suggested));
    Ok(table)
}

fn ir(args: &IrArgs, seed: u64) -> Result<Table> {
    let graph = CitationGraph::from_json(&read(&args.graph)?)?
        .with_lambda(args.lambda)?
        .with_logistic(LogisticFit {
            slope: args.logit_a,
            intercept: args.logit_b,
        });
    let targets: Vec<usize> = match &args.target {
        Some(id) => vec![graph
            .index_of(id)
            .ok_or_else(|| Error::UnknownDocument(id.clone()))?],
        None => (0..graph.len()).collect(),
    };

    let mut scored = Vec::with_capacity(targets.len());
    for i in targets {
        let doc = &graph.docs()[i];
        let expr = enumerate_arguments_with_budget(&graph, &doc.id, args.max_paths)?;
        if args.target.is_some() {
            eprintln!("support({}) = {expr}", doc.id);
        }
        let support = match pas::degree_of_support(&expr) {
            Ok(s) => s,
            Err(Error::TooManyVariables(n)) => {
                let mc = pas::monte_carlo_support(&expr, args.mc_samples, seed)?;
                eprintln!(
                    "tbm: {} has {n} assumptions; sampled {} worlds, standard error {}",
                    doc.id,
                    mc.samples,
                    format_number(mc.std_error)
                );
                mc.mean
            }
            Err(e) => return Err(e),
        };
        scored.push((doc.id.clone(), doc.rank, graph.alpha(i), support));
    }
    scored.sort_by(|a, b| b.3.total_cmp(&a.3).then_with(|| a.0.cmp(&b.0)));

    let mut table = Table::new(["id", "rank", "alpha", "support"]);
    for (id, rank, alpha, support) in scored {
        table.push(vec![
            id,
            rank.map_or_else(String::new, |r| r.to_string()),
            format_number(alpha),
            format_number(support),
        ]);
    }
    Ok(table)
}

fn experiment(args: &ExperimentArgs, seed: u64) -> Result<Table> {
    let cfg = ExperimentConfig {
        sigma2: args.sigma2,
        ..ExperimentConfig::default()
    };
    let result = run_case_study(args.case, args.reps, seed, &cfg)?;
    let mut table = Table::new(["rep", "tbm_pcc", "baseline_pcc"]);
    for r in &result.replications {
        table.push(vec![
            (r.rep + 1).to_string(),
            format_number(r.tbm_pcc),
            format_number(r.baseline_pcc),
        ]);
    }
    for (name, t, b) in [
        ("mean", result.tbm().mean, result.baseline().mean),
        ("min", result.tbm().min, result.baseline().min),
        ("max", result.tbm().max, result.baseline().max),
    ] {
        table.push(vec![name.into(), format_number(t), format_number(b)]);
    }
    Ok(table)
}
