//! Batch CLI: `ingest`, `extract`, `train`, `predict`, `crossval`, `rank`.
//!
//! Exit codes are a stable scripting contract: 0 success, 1 domain error,
//! 2 usage or I/O error. All outputs are files or stdout JSON; worker count
//! (`--jobs`) never changes output bytes.

use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::classifier::{self, Hyperparams, Optimizer, SvmModel};
use crate::corpus::{self, Tagset};
use crate::embeddings::{DistanceMetric, EmbeddingTable};
use crate::error::Error;
use crate::evaluator::{self, Statistic};
use crate::features::{FeatureLayout, FeatureSet};
use crate::matcher;
use crate::Result;

#[derive(Parser)]
#[command(
    name = "mtdetect",
    about = "Detect machine-translated paragraphs from word-embedding coherence features",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a tagged corpus, or tag raw text through an external tagger.
    Ingest(IngestArgs),
    /// Match words and reduce a corpus to coherence feature vectors.
    Extract(ExtractArgs),
    /// Train a linear model on labeled features.
    Train(TrainArgs),
    /// Score feature rows with a trained model.
    Predict(PredictArgs),
    /// Stratified k-fold cross-validation with accuracy and EER.
    Crossval(CrossvalArgs),
    /// Rank single POS-pair groups by their standalone accuracy.
    Rank(RankArgs),
}

#[derive(Args)]
struct TagsetArg {
    /// Tagset file, one tag per line; defaults to the 45-tag Penn Treebank set.
    #[arg(long)]
    tagset: Option<PathBuf>,
}

impl TagsetArg {
    fn resolve(&self) -> Result<Tagset> {
        match &self.tagset {
            Some(path) => Tagset::from_file(path),
            None => Ok(Tagset::penn_treebank()),
        }
    }
}

#[derive(Args)]
struct IngestArgs {
    /// Pre-tagged corpus JSONL (id, label, tokens of {"t","p"}).
    #[arg(long, conflicts_with = "raw")]
    corpus: Option<PathBuf>,
    /// Raw-text JSONL (id, label, text); requires --tagger-cmd.
    #[arg(long, requires = "tagger_cmd")]
    raw: Option<PathBuf>,
    /// Shell command reading paragraph text on stdin and writing
    /// one surface<TAB>tag line per token.
    #[arg(long)]
    tagger_cmd: Option<String>,
    #[command(flatten)]
    tagset: TagsetArg,
    /// Exit 0 even when some records were rejected.
    #[arg(long)]
    allow_partial: bool,
    /// Where to write the validated corpus JSONL (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExtractArgs {
    /// Tagged corpus JSONL.
    #[arg(long)]
    corpus: PathBuf,
    /// GloVe-format embedding file.
    #[arg(long)]
    embeddings: PathBuf,
    /// Distance metric: euclidean or cosine.
    #[arg(long, default_value = "euclidean")]
    metric: DistanceMetric,
    /// Validate the embedding dimension against this value.
    #[arg(long)]
    dimension: Option<usize>,
    #[command(flatten)]
    tagset: TagsetArg,
    /// Worker threads; output bytes do not depend on this.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Feature file to write.
    #[arg(long)]
    out: PathBuf,
    /// Optional per-paragraph diagnostics JSON (skipped tokens, empty groups).
    #[arg(long)]
    diagnostics: Option<PathBuf>,
    /// Reserved: keep each undirected pair once instead of both directions.
    #[arg(long, hide = true)]
    dedupe_symmetric: bool,
}

#[derive(Args)]
struct HyperparamArgs {
    /// Optimizer: linear, sgd, or smo.
    #[arg(long, default_value = "smo")]
    optimizer: Optimizer,
    /// Soft-margin parameter C.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// SGD epochs.
    #[arg(long, default_value_t = 20)]
    epochs: usize,
    /// SMO pair-update budget / descent iteration cap.
    #[arg(long, default_value_t = 1_000_000)]
    max_iter: usize,
    /// KKT / gradient tolerance.
    #[arg(long, default_value_t = 1e-3)]
    tolerance: f64,
    /// Seed for every random choice in the run.
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

impl HyperparamArgs {
    fn hyperparams(&self) -> Hyperparams {
        Hyperparams {
            c: self.c,
            epochs: self.epochs,
            max_iter: self.max_iter,
            tolerance: self.tolerance,
            seed: self.seed,
        }
    }
}

#[derive(Args)]
struct TrainArgs {
    /// Labeled feature file from `extract`.
    #[arg(long)]
    features: PathBuf,
    #[command(flatten)]
    hp: HyperparamArgs,
    /// Model file to write.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PredictArgs {
    /// Trained model JSON.
    #[arg(long)]
    model: PathBuf,
    /// Feature file to score; its layout binding must match the model.
    #[arg(long)]
    features: PathBuf,
    /// Predictions JSONL (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CrossvalArgs {
    /// Labeled feature file.
    #[arg(long)]
    features: PathBuf,
    #[command(flatten)]
    hp: HyperparamArgs,
    /// Fold count.
    #[arg(long, default_value_t = 10)]
    folds: usize,
    /// Feature subset: mean, variance, or combination.
    #[arg(long, default_value = "combination")]
    statistic: Statistic,
    /// Do not co-assign aligned `<pair>#<side>` ids to one fold.
    #[arg(long)]
    no_group_pairs: bool,
    /// Also run mean-only and variance-only and warn if the expected
    /// combination >= mean >= variance accuracy ordering does not hold.
    #[arg(long)]
    ablation_check: bool,
    /// Report JSON (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV dump of the pooled ROC sweep: threshold,fpr,fnr.
    #[arg(long)]
    roc_out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args)]
struct RankArgs {
    /// Labeled feature file.
    #[arg(long)]
    features: PathBuf,
    #[command(flatten)]
    hp: HyperparamArgs,
    /// Fold count.
    #[arg(long, default_value_t = 10)]
    folds: usize,
    /// How many top groups to report.
    #[arg(long, default_value_t = 5)]
    top: usize,
    /// Do not co-assign aligned `<pair>#<side>` ids to one fold.
    #[arg(long)]
    no_group_pairs: bool,
    /// Ranking JSON (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

/// Parse arguments and run; returns the process exit code.
pub fn main_entry<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version as "errors" with exit code 0.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Ingest(args) => cmd_ingest(args),
        Command::Extract(args) => with_pool(args.jobs, || cmd_extract(args)),
        Command::Train(args) => cmd_train(args),
        Command::Predict(args) => cmd_predict(args),
        Command::Crossval(args) => with_pool(args.jobs, || cmd_crossval(args)),
        Command::Rank(args) => with_pool(args.jobs, || cmd_rank(args)),
    }
}

fn with_pool<F>(jobs: usize, f: F) -> Result<i32>
where
    F: FnOnce() -> Result<i32> + Send,
{
    if jobs == 0 {
        return f();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Usage(format!("cannot build thread pool: {e}")))?;
    pool.install(f)
}

fn write_json(out: Option<&Path>, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable value");
    match out {
        Some(path) => {
            let display = path.display().to_string();
            std::fs::write(path, text + "\n").map_err(|e| Error::io(&display, e))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn cmd_ingest(args: IngestArgs) -> Result<i32> {
    let tagset = args.tagset.resolve()?;
    let outcome = match (&args.corpus, &args.raw) {
        (Some(path), None) => corpus::load_corpus(path, &tagset)?,
        (None, Some(path)) => {
            let cmd = args
                .tagger_cmd
                .as_deref()
                .expect("clap requires tagger_cmd");
            corpus::tag_with_external(path, cmd, &tagset)?
        }
        _ => {
            return Err(Error::Usage(
                "exactly one of --corpus or --raw is required".into(),
            ))
        }
    };

    match &args.out {
        Some(path) => {
            let display = path.display().to_string();
            let file = std::fs::File::create(path).map_err(|e| Error::io(&display, e))?;
            let mut writer = std::io::BufWriter::new(file);
            outcome
                .corpus
                .write_jsonl(&mut writer)
                .map_err(|e| Error::io(&display, e))?;
        }
        None => {
            let stdout = std::io::stdout();
            outcome
                .corpus
                .write_jsonl(stdout.lock())
                .map_err(|e| Error::io("stdout", e))?;
        }
    }

    let report = json!({
        "config": {
            "tagset_hash": tagset.hash(),
            "allow_partial": args.allow_partial,
        },
        "stats": outcome.corpus.stats(),
        "rejections": outcome.rejections,
    });
    if args.out.is_some() {
        write_json(None, &report)?;
    } else {
        eprintln!("{}", serde_json::to_string_pretty(&report).unwrap());
    }

    if !outcome.rejections.is_empty() && !args.allow_partial {
        let lines: Vec<String> = outcome
            .rejections
            .iter()
            .map(|r| format!("{}: {}", r.id, r.reason))
            .collect();
        return Err(Error::RecordsRejected {
            rejected: outcome.rejections.len(),
            total: outcome.rejections.len() + outcome.corpus.paragraphs.len(),
            report: lines.join("\n"),
        });
    }
    Ok(0)
}

fn cmd_extract(args: ExtractArgs) -> Result<i32> {
    if args.dedupe_symmetric {
        return Err(Error::Usage(
            "--dedupe-symmetric is reserved and not yet implemented".into(),
        ));
    }
    let tagset = args.tagset.resolve()?;
    let outcome = corpus::load_corpus(&args.corpus, &tagset)?;
    if !outcome.rejections.is_empty() {
        let lines: Vec<String> = outcome
            .rejections
            .iter()
            .map(|r| format!("{}: {}", r.id, r.reason))
            .collect();
        return Err(Error::RecordsRejected {
            rejected: outcome.rejections.len(),
            total: outcome.rejections.len() + outcome.corpus.paragraphs.len(),
            report: lines.join("\n"),
        });
    }
    let table = EmbeddingTable::load(&args.embeddings, args.dimension)?;
    let matches = matcher::match_corpus(&outcome.corpus, &table, args.metric)?;
    let layout = FeatureLayout::build(&tagset);
    let labels: HashMap<String, Option<corpus::Label>> = outcome
        .corpus
        .paragraphs
        .iter()
        .map(|p| (p.id.clone(), p.label))
        .collect();
    let set = FeatureSet::from_matches(
        &matches,
        &layout,
        &labels,
        args.metric.name(),
        table.source_id(),
    )?;
    set.write_to_path(&args.out)?;

    if let Some(path) = &args.diagnostics {
        let diag = matcher::diagnostics(&outcome.corpus, &matches);
        write_json(
            Some(path),
            &json!({
                "embedding_duplicates": table.duplicate_count(),
                "paragraphs": diag,
            }),
        )?;
    }
    Ok(0)
}

fn cmd_train(args: TrainArgs) -> Result<i32> {
    let features = FeatureSet::read_from_path(&args.features)?;
    let model = classifier::train(&features, args.hp.optimizer, &args.hp.hyperparams())?;
    model.save(&args.out)?;
    Ok(0)
}

fn cmd_predict(args: PredictArgs) -> Result<i32> {
    let model = SvmModel::load(&args.model)?;
    let features = FeatureSet::read_from_path(&args.features)?;
    let predictions = model.predict(&features)?;
    let mut buf = Vec::new();
    for p in &predictions {
        serde_json::to_writer(&mut buf, p).expect("serializable prediction");
        buf.push(b'\n');
    }
    match &args.out {
        Some(path) => {
            let display = path.display().to_string();
            std::fs::write(path, &buf).map_err(|e| Error::io(&display, e))?;
        }
        None => {
            std::io::stdout()
                .write_all(&buf)
                .map_err(|e| Error::io("stdout", e))?;
        }
    }
    Ok(0)
}

fn cmd_crossval(args: CrossvalArgs) -> Result<i32> {
    let features = FeatureSet::read_from_path(&args.features)?;
    let hp = args.hp.hyperparams();
    let plan = evaluator::plan_folds(&features, args.folds, hp.seed, !args.no_group_pairs)?;
    let (report, pooled) =
        evaluator::ablate(&features, args.statistic, args.hp.optimizer, &hp, &plan)?;

    if args.ablation_check {
        let (mean_report, _) = evaluator::ablate(
            &features,
            Statistic::MeanOnly,
            args.hp.optimizer,
            &hp,
            &plan,
        )?;
        let (var_report, _) = evaluator::ablate(
            &features,
            Statistic::VarianceOnly,
            args.hp.optimizer,
            &hp,
            &plan,
        )?;
        let (combo_acc, mean_acc, var_acc) = match args.statistic {
            Statistic::Combination => (report.accuracy, mean_report.accuracy, var_report.accuracy),
            _ => {
                let (combo_report, _) = evaluator::ablate(
                    &features,
                    Statistic::Combination,
                    args.hp.optimizer,
                    &hp,
                    &plan,
                )?;
                (
                    combo_report.accuracy,
                    mean_report.accuracy,
                    var_report.accuracy,
                )
            }
        };
        if !(combo_acc >= mean_acc && mean_acc >= var_acc) {
            eprintln!(
                "warning: ablation ordering violated: combination {combo_acc:.4}, \
                 mean {mean_acc:.4}, variance {var_acc:.4}"
            );
        }
    }

    if let Some(path) = &args.roc_out {
        let humans: Vec<f64> = pooled
            .scores
            .iter()
            .filter(|(_, l)| *l == corpus::Label::Human)
            .map(|(s, _)| *s)
            .collect();
        let machines: Vec<f64> = pooled
            .scores
            .iter()
            .filter(|(_, l)| *l == corpus::Label::Machine)
            .map(|(s, _)| *s)
            .collect();
        let mut csv = String::from("threshold,fpr,fnr\n");
        for point in evaluator::roc_points(&humans, &machines) {
            csv.push_str(&format!(
                "{},{},{}\n",
                point.threshold, point.fpr, point.fnr
            ));
        }
        let display = path.display().to_string();
        std::fs::write(path, csv).map_err(|e| Error::io(&display, e))?;
    }

    write_json(args.out.as_deref(), &report)?;
    Ok(0)
}

fn cmd_rank(args: RankArgs) -> Result<i32> {
    let features = FeatureSet::read_from_path(&args.features)?;
    let hp = args.hp.hyperparams();
    let plan = evaluator::plan_folds(&features, args.folds, hp.seed, !args.no_group_pairs)?;

    // Group names come from the canonical enumeration of a tagset with the
    // same hash; without the tagset file we fall back to index names.
    let canonical = Tagset::penn_treebank();
    let names: Vec<String> = if canonical.hash() == features.header.tagset_hash {
        let layout = FeatureLayout::build(&canonical);
        (0..layout.group_count())
            .map(|i| layout.group_name(i))
            .collect()
    } else {
        (0..features.group_count())
            .map(|i| format!("group{i}"))
            .collect()
    };

    let ranks = evaluator::rank_single_features(&features, &names, args.hp.optimizer, &hp, &plan)?;
    let top: Vec<_> = ranks.into_iter().take(args.top).collect();
    write_json(
        args.out.as_deref(),
        &json!({
            "config": {
                "optimizer": args.hp.optimizer.name(),
                "folds": args.folds,
                "seed": hp.seed,
                "top": args.top,
            },
            "ranking": top,
        }),
    )?;
    Ok(0)
}
