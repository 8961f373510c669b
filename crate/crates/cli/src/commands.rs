use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Subcommand};
use serde::Serialize;

use lsa_core::cimodel::{comprehend as run_comprehension, parse_propositions, CIParams, WmStrategy};
use lsa_core::cooctrace::{parse_pairs, run_trace, trace_report, trajectory_tsv, Checkpointing, TraceConfig, TraceMode};
use lsa_core::corpusio::{
    corpus_stats, ingest, normalize_word, stratify as stratify_corpus, tokenize, CommonWordList, Corpus, CorpusStats,
    LemmaMap, LemmaMode, Manifest, TokenizePolicy,
};
use lsa_core::evalsuite::datasets::{parse_judgments, parse_norms, parse_recall, parse_vocab};
use lsa_core::evalsuite::{assoc_test, judgment_test, recall_correlation, vocab_test, AssocFilter, EvalError, EvalReport};
use lsa_core::synth::write_tutorial;
use lsa_core::vecspace::{build_space, load_space, save_space, BuildConfig, MatrixOptions, Probe, SemanticSpace, WeightBand};

use crate::error::CliError;
use crate::params::Params;
use crate::run::Run;
use crate::{Common, CorpusInput, SvdArgs, TokenizeArgs};

type Outcome = Result<ExitCode, CliError>;

fn start(c: &Common, command: &'static str) -> Result<Run, CliError> {
    let params = Params::load(c.config.as_deref())?;
    let mut run = Run::new(command, c.out.clone(), c.format, params)?;
    if let Some(p) = &c.config {
        run.hash_input(p)?;
    }
    Ok(run)
}

/// Resolves a string parameter and parses it into `T`.
fn choice<T>(p: &mut Params, key: &str, cli: &Option<String>, default: &str) -> Result<T, CliError>
where
    T: FromStr<Err = String>,
{
    p.get(key, cli.clone(), default.to_string())?
        .parse()
        .map_err(|e: String| CliError::input(format!("--{}: {e}", key.replace('_', "-"))))
}

fn policy(run: &mut Run, t: &TokenizeArgs) -> Result<TokenizePolicy, CliError> {
    Ok(TokenizePolicy {
        apostrophe: choice(&mut run.params, "apostrophe", &t.apostrophe, "split")?,
        hyphen: choice(&mut run.params, "hyphen", &t.hyphen, "keep")?,
    })
}

fn load_corpus(run: &mut Run, input: &CorpusInput) -> Result<Corpus, CliError> {
    let corpus = match (&input.manifest, &input.records) {
        (Some(path), _) => {
            run.params.record("manifest", path.display());
            let text = run.read_text(path)?;
            let manifest = Manifest::parse(&text, path.parent().unwrap_or(Path::new(".")))?;
            for s in &manifest.sources {
                run.hash_input(&s.path)?;
            }
            let policy = policy(run, &input.tokenize)?;
            ingest(&manifest, policy)?
        }
        (None, Some(path)) => {
            run.params.record("records", path.display());
            Corpus::from_records(&run.read_text(path)?)?
        }
        (None, None) => return Err(CliError::input("one of --manifest or --records is required")),
    };
    let map_path = run.params.get_opt("lemma_map", input.lemma_map.as_ref().map(|p| p.display().to_string()))?;
    match map_path {
        Some(path) => {
            let map = LemmaMap::parse(&run.read_text(Path::new(&path))?)?;
            let mode: LemmaMode = choice(&mut run.params, "lemma_mode", &input.lemma_mode, "all")?;
            Ok(corpus.lemmatized(&map, mode))
        }
        None => Ok(corpus),
    }
}

fn build_config(run: &mut Run, c: &Common, svd: &SvdArgs, default_k: usize, min_count: u64) -> Result<BuildConfig, CliError> {
    Ok(BuildConfig {
        k: run.params.get("k", svd.k, default_k)?,
        min_count,
        seed: run.params.get("seed", c.seed, 0)?,
        scaling: choice(&mut run.params, "scaling", &svd.scaling, "sigma")?,
        solver: choice(&mut run.params, "solver", &svd.solver, "auto")?,
        ..BuildConfig::default()
    })
}

fn open_space(run: &mut Run, path: &Path) -> Result<SemanticSpace, CliError> {
    run.params.record("space", path.display());
    Ok(load_space(&run.read(path)?)?)
}

fn finish(run: Run) -> Outcome {
    run.finish()?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct BuildReport<'a> {
    corpus: &'a CorpusStats,
    terms: usize,
    paragraphs: u64,
    k: usize,
    singular_values: &'a [f64],
}

pub fn build(c: &Common, input: &CorpusInput, svd: &SvdArgs, min_count: Option<u64>, words: Option<&Path>) -> Outcome {
    let mut run = start(c, "build")?;
    let mut corpus = load_corpus(&mut run, input)?;
    if let Some(w) = words {
        run.params.record("words", w.display());
        let list = CommonWordList::parse(&run.read_text(w)?);
        corpus = stratify_corpus(&corpus, &list)?;
    }
    let min_count = run.params.get("min_count", min_count, 2)?;
    let config = build_config(&mut run, c, svd, 300, min_count)?;
    let space = build_space(&corpus, &MatrixOptions::with_min_count(min_count), &config)?;
    run.write("space.lsa", &save_space(&space))?;
    run.write("corpus.tsv", corpus.to_records().as_bytes())?;

    let stats = corpus_stats(&corpus);
    let report = BuildReport {
        corpus: &stats,
        terms: space.len(),
        paragraphs: space.n_docs(),
        k: space.k(),
        singular_values: space.singular_values(),
    };
    let head: Vec<String> = space.singular_values().iter().take(10).map(|s| format!("{s:.4}")).collect();
    let text = format!(
        "{}\nterms       {}\nk           {}\nsingular values  {}\n",
        stats.render_text(),
        space.len(),
        space.k(),
        head.join(" ")
    );
    run.report("build_report", &report, &text)?;
    finish(run)
}

#[derive(Subcommand)]
pub enum Query {
    /// Cosine between two terms.
    Cosine { a: String, b: String },
    /// Nearest terms to a term.
    Neighbors {
        word: String,
        #[arg(long)]
        n: Option<usize>,
        /// Lowest global weight of a listed neighbor.
        #[arg(long)]
        min_weight: Option<f64>,
        #[arg(long)]
        max_weight: Option<f64>,
    },
    /// Projects a text file into the space.
    Foldin {
        file: PathBuf,
        #[command(flatten)]
        tokenize: TokenizeArgs,
    },
}

#[derive(Serialize)]
struct Neighbor<'a> {
    term: &'a str,
    cosine: f64,
}

pub fn query(c: &Common, space: &Path, q: &Query) -> Outcome {
    let mut run = start(c, "query")?;
    let s = open_space(&mut run, space)?;
    match q {
        Query::Cosine { a, b } => {
            let (a, b) = (normalize_word(a), normalize_word(b));
            run.params.record("query", format!("cosine {a} {b}"));
            let cos = s.similarity(&a, &b)?;
            let value = serde_json::json!({ "a": a, "b": b, "cosine": cos });
            run.report("query", &value, &format!("{a}\t{b}\t{cos:.6}\n"))?;
        }
        Query::Neighbors { word, n, min_weight, max_weight } => {
            let word = normalize_word(word);
            run.params.record("query", format!("neighbors {word}"));
            let n = run.params.get("n", *n, 10)?;
            let band = WeightBand {
                min: run.params.get("min_weight", *min_weight, WeightBand::ALL.min)?,
                max: run.params.get("max_weight", *max_weight, WeightBand::ALL.max)?,
            };
            let found = s.neighbors(Probe::Term(&word), n, band)?;
            let rows: Vec<Neighbor> = found.iter().map(|(t, cos)| Neighbor { term: t, cosine: *cos }).collect();
            let text: String = found.iter().map(|(t, cos)| format!("{t}\t{cos:.6}\n")).collect();
            run.report("query", &rows, &text)?;
        }
        Query::Foldin { file, tokenize: t } => {
            run.params.record("query", format!("foldin {}", file.display()));
            let policy = policy(&mut run, t)?;
            let text = run.read_text(file)?;
            let f = s.fold_in(&tokenize(&text, policy).tokens)?;
            let value = serde_json::json!({ "coverage": f.coverage, "vector": f.vector });
            let v: Vec<String> = f.vector.iter().map(|x| format!("{x:.6}")).collect();
            run.report("query", &value, &format!("coverage\t{:.6}\nvector\t{}\n", f.coverage, v.join(" ")))?;
        }
    }
    finish(run)
}

#[derive(Subcommand)]
pub enum Protocol {
    /// Association norms: cosine by response tier.
    Assoc {
        #[arg(long)]
        dataset: PathBuf,
        /// weight:Q or entropy:Q keeps the lowest share Q of items.
        #[arg(long)]
        filter: Option<String>,
    },
    /// Similarity judgments correlated with cosines.
    Judgment {
        #[arg(long)]
        dataset: PathBuf,
    },
    /// Multiple-choice definitions.
    Vocab {
        #[arg(long)]
        dataset: PathBuf,
        /// Only words with global weight below the cap count.
        #[arg(long)]
        weight_cap: Option<f64>,
        #[command(flatten)]
        tokenize: TokenizeArgs,
    },
    /// Recall protocols scored against their source texts.
    Recall {
        #[arg(long)]
        dataset: PathBuf,
        #[command(flatten)]
        tokenize: TokenizeArgs,
    },
}

fn parse_filter(s: &str) -> Result<AssocFilter, CliError> {
    let bad = || CliError::input(format!("--filter `{s}`: expected weight:Q or entropy:Q with 0 < Q <= 1"));
    let (kind, q) = s.split_once(':').ok_or_else(bad)?;
    let q: f64 = q.parse().map_err(|_| bad())?;
    if !(q > 0.0 && q <= 1.0) {
        return Err(bad());
    }
    match kind {
        "weight" => Ok(AssocFilter::Weight(q)),
        "entropy" => Ok(AssocFilter::Entropy(q)),
        _ => Err(bad()),
    }
}

/// Refuses reports where no item survived.
fn require_items(valid: usize, report: &EvalReport) -> Result<(), CliError> {
    if valid == 0 {
        return Err(EvalError::TooFewItems { valid, required: 1, exclusions: report.exclusions().to_vec() }.into());
    }
    Ok(())
}

pub fn eval(c: &Common, space: &Path, protocol: &Protocol) -> Outcome {
    let mut run = start(c, "eval")?;
    let s = open_space(&mut run, space)?;
    let (name, report) = match protocol {
        Protocol::Assoc { dataset, filter } => {
            run.params.record("dataset", dataset.display());
            let norms = parse_norms(&run.read_text(dataset)?)?;
            let filter = run.params.get_opt("filter", filter.clone())?.map(|f| parse_filter(&f)).transpose()?;
            ("assoc", EvalReport::Assoc(assoc_test(&s, &norms, filter)?))
        }
        Protocol::Judgment { dataset } => {
            run.params.record("dataset", dataset.display());
            let items = parse_judgments(&run.read_text(dataset)?)?;
            let r = EvalReport::Judgment(judgment_test(&s, &items));
            if let EvalReport::Judgment(j) = &r {
                require_items(j.pairs.len(), &r)?;
            }
            ("judgment", r)
        }
        Protocol::Vocab { dataset, weight_cap, tokenize: t } => {
            run.params.record("dataset", dataset.display());
            let policy = policy(&mut run, t)?;
            let items = parse_vocab(&run.read_text(dataset)?, &|text| tokenize(text, policy).tokens)?;
            let cap = run.params.get_opt("weight_cap", *weight_cap)?;
            let r = EvalReport::Vocab(vocab_test(&s, &items, cap));
            if let EvalReport::Vocab(v) = &r {
                require_items(v.items.len(), &r)?;
            }
            ("vocab", r)
        }
        Protocol::Recall { dataset, tokenize: t } => {
            run.params.record("dataset", dataset.display());
            let policy = policy(&mut run, t)?;
            let text = run.read_text(dataset)?;
            let base = dataset.parent().unwrap_or(Path::new("."));
            for line in text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
                for rel in line.split('\t').skip(3).take(2) {
                    run.hash_input(&base.join(rel.trim()))?;
                }
            }
            let records = parse_recall(&text, base, &|text| tokenize(text, policy).tokens)?;
            let r = EvalReport::Recall(recall_correlation(&s, &records));
            if let EvalReport::Recall(g) = &r {
                require_items(g.groups.iter().map(|g| g.n()).sum(), &r)?;
            }
            ("recall", r)
        }
    };
    run.report(&format!("eval_{name}"), &report, &report.render_text())?;
    finish(run)
}

pub fn stratify(c: &Common, input: &CorpusInput, words: &Path) -> Outcome {
    let mut run = start(c, "stratify")?;
    let corpus = load_corpus(&mut run, input)?;
    run.params.record("words", words.display());
    let list = CommonWordList::parse(&run.read_text(words)?);
    let ordered = stratify_corpus(&corpus, &list)?;
    run.write("corpus.tsv", ordered.to_records().as_bytes())?;
    let stats = corpus_stats(&ordered);
    run.report("readability", &stats, &stats.render_text())?;
    finish(run)
}

pub struct TraceArgs {
    pub pairs: PathBuf,
    pub start: Option<usize>,
    pub end: Option<usize>,
    pub mode: Option<String>,
    pub checkpoint: Option<PathBuf>,
    pub checkpoint_every: Option<usize>,
}

pub fn trace(c: &Common, input: &CorpusInput, svd: &SvdArgs, t: &TraceArgs) -> Outcome {
    let mut run = start(c, "trace")?;
    let corpus = load_corpus(&mut run, input)?;
    run.params.record("pairs", t.pairs.display());
    let pairs = parse_pairs(&run.read_text(&t.pairs)?)?;
    let start = run
        .params
        .get_opt("start", t.start)?
        .ok_or_else(|| CliError::input("--start is required"))?;
    let end = run.params.get("end", t.end, corpus.len())?;
    let mode: TraceMode = choice(&mut run.params, "mode", &t.mode, "exact")?;
    let build = build_config(&mut run, c, svd, 100, 1)?;
    let checkpoint = match run.params.get_opt("checkpoint", t.checkpoint.as_ref().map(|p| p.display().to_string()))? {
        Some(path) => Some(Checkpointing { path: path.into(), every: run.params.get("checkpoint_every", t.checkpoint_every, 10)? }),
        None => None,
    };
    let ledgers = run_trace(&corpus, &pairs, start, end, &TraceConfig { build, mode, checkpoint })?;
    run.write_json("ledger.json", &ledgers)?;
    run.write("trajectory.tsv", trajectory_tsv(&ledgers).as_bytes())?;
    let report = trace_report(&ledgers);
    run.report("trace_summary", &report, &report.render_text())?;
    run.finish()?;
    if !report.telescoping_ok {
        return Err(CliError::numeric(format!(
            "gains do not telescope (max error {:e})",
            report.max_telescoping_error
        )));
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Args)]
pub struct CiArgs {
    #[arg(long)]
    pub n_associates: Option<usize>,
    #[arg(long)]
    pub predication_threshold: Option<f64>,
    #[arg(long)]
    pub predication_pool: Option<usize>,
    #[arg(long)]
    pub min_weight: Option<f64>,
    #[arg(long)]
    pub max_weight: Option<f64>,
    /// fixed:N, budget:T, budget-proportional:T or threshold:X.
    #[arg(long)]
    pub wm: Option<String>,
    #[arg(long)]
    pub decay_rate: Option<f64>,
    #[arg(long)]
    pub reinforcement_gain: Option<f64>,
    #[arg(long)]
    pub recall_threshold: Option<f64>,
    #[arg(long)]
    pub recall_floor: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
}

fn ci_params(p: &mut Params, a: &CiArgs) -> Result<CIParams, CliError> {
    let d = CIParams::default();
    let wm: WmStrategy = choice(p, "wm", &a.wm, &d.wm_strategy.to_string())?;
    Ok(CIParams {
        n_associates: p.get("n_associates", a.n_associates, d.n_associates)?,
        predication_threshold: p.get("predication_threshold", a.predication_threshold, d.predication_threshold)?,
        predication_pool: p.get("predication_pool", a.predication_pool, d.predication_pool)?,
        min_weight: p.get("min_weight", a.min_weight, d.min_weight)?,
        max_weight: p.get("max_weight", a.max_weight, d.max_weight)?,
        wm_strategy: wm,
        decay_rate: p.get("decay_rate", a.decay_rate, d.decay_rate)?,
        reinforcement_gain: p.get("reinforcement_gain", a.reinforcement_gain, d.reinforcement_gain)?,
        recall_threshold: p.get("recall_threshold", a.recall_threshold, d.recall_threshold)?,
        recall_floor: p.get("recall_floor", a.recall_floor, d.recall_floor)?,
        epsilon: p.get("epsilon", a.epsilon, d.epsilon)?,
        max_iterations: p.get("max_iterations", a.max_iterations, d.max_iterations)?,
    })
}

pub fn comprehend(c: &Common, space: &Path, propositions: &Path, a: &CiArgs) -> Outcome {
    let mut run = start(c, "comprehend")?;
    let s = open_space(&mut run, space)?;
    run.params.record("propositions", propositions.display());
    let props = parse_propositions(&run.read_text(propositions)?)?;
    let params = ci_params(&mut run.params, a)?;
    let trace = run_comprehension(&props, &s, &params)?;
    let text = trace.render_text();
    run.write_json("comprehension.json", &trace)?;
    run.write("cycles.txt", text.as_bytes())?;
    match run.format {
        crate::run::Format::Json => println!("{}", serde_json::to_string_pretty(&trace).map_err(|e| CliError::data(e.to_string()))?),
        crate::run::Format::Text => print!("{text}"),
    }
    run.finish()?;
    if !trace.all_converged() {
        let cycles: Vec<String> = trace
            .cycles
            .iter()
            .filter(|c| c.skipped.is_none() && !c.converged)
            .map(|c| c.cycle.to_string())
            .collect();
        return Err(CliError::numeric(format!(
            "integration did not converge within {} iterations in cycle(s) {}",
            params.max_iterations,
            cycles.join(", ")
        )));
    }
    Ok(ExitCode::SUCCESS)
}

/// Relative paths of all regular files under `dir`, sorted.
fn files_under(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d)? {
            let path = entry?.path();
            if path.is_dir() {
                stack.push(path);
            } else if let Ok(rel) = path.strip_prefix(dir) {
                out.push(rel.to_path_buf());
            }
        }
    }
    out.sort();
    Ok(out)
}

pub fn synth(c: &Common) -> Outcome {
    let mut run = start(c, "synth")?;
    let seed = run.params.get("seed", c.seed, 0)?;
    write_tutorial(&run.out, seed).map_err(|e| CliError::io(&run.out, e))?;
    let out = run.out.clone();
    for rel in files_under(&out).map_err(|e| CliError::io(&out, e))? {
        let name = rel.to_string_lossy().replace('\\', "/");
        if name != "run_manifest.json" {
            run.track(&name)?;
        }
    }
    println!("example bundle written to {}", out.display());
    finish(run)
}
