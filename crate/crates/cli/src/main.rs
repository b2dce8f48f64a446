use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use zerosum::families::{standard_witnesses, Classifier};
use zerosum::verify::{self, run_suite, VerifyOptions, CRITERIA};
use zerosum::{
    compute_s_l_with_mode, davenport_constant, enumerate_avoiding, enumerate_extremal,
    enumerate_family, enumerate_max_minimal_zero_sum, enumerate_minimal_zero_sum, generate,
    Checkpoint, EquivalenceMode, Error, FamilyLabel, FamilyWitness, Group, GroupElement, GroupSpec,
    LengthSet, Param, Problem, PruneStrength, SearchConfig, Sequence,
};

const EXIT_FAILED: u8 = 1;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "zsum",
    version,
    about = "Zero-sum constants and extremal sequences of finite abelian groups"
)]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for searches.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute D, eta, s or a general s_L.
    Constants(ConstantsArgs),
    /// List extremal sequences up to symmetry as JSON lines.
    Enumerate(EnumerateArgs),
    /// Match sequences against the extremal families.
    Classify(ClassifyArgs),
    /// Build a family member from a witness.
    Generate(GenerateArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Compare table sums with the brute-force oracle on random inputs.
    OracleCheck(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    D,
    Eta,
    S,
}

#[derive(Args)]
struct SearchArgs {
    /// Orders of the cyclic factors, e.g. 2,2,4.
    #[arg(long, value_parser = parse_group)]
    group: GroupSpec,
    #[arg(long, value_enum, conflicts_with = "lengths")]
    which: Option<Which>,
    /// short, exp, any, a..b, a.., [a,b], [1,exp], [1,∞) or a list like 1,3.
    #[arg(long)]
    lengths: Option<LengthSet>,
    /// automorphism or automorphism-and-translation; strongest legal one by default.
    #[arg(long)]
    mode: Option<EquivalenceMode>,
    /// Node budget; overrides ZS_NODE_BUDGET.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value = "auto")]
    prune: PruneStrength,
    /// Continue from a checkpoint written by an earlier run.
    #[arg(long)]
    resume: Option<PathBuf>,
    /// Where to write the checkpoint when the budget runs out.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
}

#[derive(Args)]
struct ConstantsArgs {
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    search: SearchArgs,
    /// Sequences of this length avoiding the zero-sums instead of the extremal ones.
    #[arg(long, conflicts_with = "minimal")]
    length: Option<usize>,
    /// Minimal zero-sum sequences; of length --length if given, else the longest.
    #[arg(long)]
    minimal: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    problem: Problem,
    /// A sequence document or JSON lines of sequences.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_parser = parse_group)]
    group: GroupSpec,
    #[arg(long, required_unless_present = "witness")]
    label: Option<FamilyLabel>,
    /// Parameters as a JSON object, e.g. '{"a":2,"b":2}'.
    #[arg(long)]
    params: Option<String>,
    /// Basis [f1,f2,f3] as JSON; the standard generators by default.
    #[arg(long)]
    basis: Option<String>,
    /// Translation element as JSON.
    #[arg(long)]
    translation: Option<String>,
    /// Witness document as produced by classify.
    #[arg(long, conflicts_with_all = ["label", "params", "basis", "translation"])]
    witness: Option<PathBuf>,
    /// Every member of the family, up to the family's symmetry.
    #[arg(long, conflicts_with_all = ["params", "basis", "translation", "witness"])]
    all: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// paper, constants, cyclic, lemmas, families, structure or oracle.
    #[arg(long, default_value = "paper")]
    suite: String,
    /// Restrict the C2+C2+C2n checks to this n.
    #[arg(long)]
    n: Option<u64>,
    #[arg(long, default_value_t = verify::DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, value_parser = parse_group)]
    group: GroupSpec,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long, default_value_t = 12)]
    max_len: usize,
    #[arg(long, default_value_t = verify::DEFAULT_SEED)]
    seed: u64,
}

fn parse_group(s: &str) -> Result<GroupSpec, String> {
    GroupSpec::parse(s).map_err(|e| e.to_string())
}

struct Output {
    sink: Box<dyn Write>,
    json: bool,
}

impl Output {
    fn line(&mut self, s: impl AsRef<str>) -> anyhow::Result<()> {
        writeln!(self.sink, "{}", s.as_ref())?;
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAILED);
        }
    }
    let sink: Box<dyn Write> = match &cli.out {
        Some(path) => match fs::File::create(path) {
            Ok(f) => Box::new(io::BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot create {}: {e}", path.display());
                return ExitCode::from(EXIT_FAILED);
            }
        },
        None => Box::new(io::stdout().lock()),
    };
    let mut out = Output {
        sink,
        json: cli.json,
    };
    let status = match run(cli.command, &mut out) {
        Ok(code) => code,
        Err(e) if is_broken_pipe(&e) => return ExitCode::SUCCESS,
        Err(e) => {
            if let Some(Error::BudgetExhausted {
                budget,
                nodes,
                lower_bound,
                ..
            }) = e.downcast_ref::<Error>()
            {
                eprintln!(
                    "budget of {budget} nodes exhausted after {nodes}; lower bound {lower_bound}"
                );
                EXIT_BUDGET
            } else {
                eprintln!("error: {e:#}");
                EXIT_FAILED
            }
        }
    };
    if let Err(e) = out.sink.flush().map_err(anyhow::Error::from) {
        if is_broken_pipe(&e) {
            return ExitCode::from(status);
        }
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_FAILED);
    }
    ExitCode::from(status)
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.downcast_ref::<io::Error>()
        .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
}

fn run(command: Command, out: &mut Output) -> anyhow::Result<u8> {
    match command {
        Command::Constants(a) => constants(a, out),
        Command::Enumerate(a) => enumerate(a, out),
        Command::Classify(a) => classify(a, out),
        Command::Generate(a) => generate_cmd(a, out),
        Command::Verify(a) => verify_cmd(a, out),
        Command::OracleCheck(a) => oracle_check(a, out),
    }
}

impl SearchArgs {
    fn lengths(&self) -> anyhow::Result<LengthSet> {
        Ok(match (self.which, &self.lengths) {
            (_, Some(l)) => l.clone(),
            (Some(Which::D), None) => LengthSet::Any,
            (Some(Which::Eta), None) => LengthSet::Short,
            (Some(Which::S), None) => LengthSet::ExactExponent,
            (None, None) => bail!("one of --which or --lengths is required"),
        })
    }

    fn mode(&self, lengths: &LengthSet) -> EquivalenceMode {
        self.mode
            .unwrap_or_else(|| EquivalenceMode::strongest(&self.group, lengths))
    }

    fn config(&self) -> anyhow::Result<SearchConfig> {
        let mut config = SearchConfig::default();
        if let Some(b) = self.budget {
            config.budget = b;
        }
        config.prune = self.prune;
        if let Some(path) = &self.resume {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let cp: Checkpoint = serde_json::from_str(&text).context("parsing the checkpoint")?;
            config.resume = Some(cp);
        }
        Ok(config)
    }

    /// Saves the checkpoint of a budget-exhausted search before passing the error on.
    fn keep<T>(&self, r: zerosum::Result<T>) -> anyhow::Result<T> {
        if let (Err(Error::BudgetExhausted { checkpoint, .. }), Some(path)) = (&r, &self.checkpoint)
        {
            fs::write(path, serde_json::to_string(checkpoint)?)
                .with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(r?)
    }
}

fn constants(a: ConstantsArgs, out: &mut Output) -> anyhow::Result<u8> {
    let a = a.search;
    let group = Group::new(a.group.clone())?;
    let lengths = a.lengths()?;
    let config = a.config()?;
    let result = if matches!(a.which, Some(Which::D)) && a.mode.is_none() && a.lengths.is_none() {
        a.keep(davenport_constant(&group, &config))?.constant
    } else {
        a.keep(compute_s_l_with_mode(
            &group,
            &lengths,
            a.mode(&lengths),
            &config,
        ))?
    };
    if out.json {
        out.line(serde_json::to_string(&result)?)?;
    } else {
        out.line(result.value.to_string())?;
    }
    Ok(0)
}

fn enumerate(a: EnumerateArgs, out: &mut Output) -> anyhow::Result<u8> {
    let s = &a.search;
    let group = Group::new(s.group.clone())?;
    let config = s.config()?;
    let e = if a.minimal {
        match a.length {
            Some(len) => s.keep(enumerate_minimal_zero_sum(&group, len, &config))?,
            None => s.keep(enumerate_max_minimal_zero_sum(&group, &config))?,
        }
    } else {
        let lengths = s.lengths()?;
        let mode = s.mode(&lengths);
        match a.length {
            Some(len) => s.keep(enumerate_avoiding(&group, &lengths, len, mode, &config))?,
            None => s.keep(enumerate_extremal(&group, &lengths, mode, &config))?,
        }
    };
    for seq in &e.sequences {
        out.line(if out.json {
            seq.to_json()
        } else {
            seq.to_string()
        })?;
    }
    let summary = e.summary();
    if out.json {
        out.line(summary.to_string())?;
    } else {
        out.line(format!(
            "# value {} classes {} nodes {} time {:.3}s",
            e.value,
            e.sequences.len(),
            e.stats.node_count,
            e.stats.wall_time
        ))?;
    }
    Ok(0)
}

/// A single sequence document, or JSON lines where non-sequence records
/// (such as an enumeration summary) are skipped.
fn read_sequences(path: &PathBuf) -> anyhow::Result<Vec<Sequence>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if let Ok(s) = Sequence::from_json(&text) {
        return Ok(vec![s]);
    }
    let mut seqs = Vec::new();
    for (i, line) in text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
    {
        let value: serde_json::Value =
            serde_json::from_str(line).with_context(|| format!("line {} is not JSON", i + 1))?;
        if value.get("group").is_none() {
            continue;
        }
        seqs.push(Sequence::from_json(line).with_context(|| format!("line {}", i + 1))?);
    }
    if seqs.is_empty() {
        bail!("no sequences in {}", path.display());
    }
    Ok(seqs)
}

fn classify(a: ClassifyArgs, out: &mut Output) -> anyhow::Result<u8> {
    let seqs = read_sequences(&a.input)?;
    let mut classifiers: Vec<(GroupSpec, Classifier)> = Vec::new();
    let mut unmatched = 0;
    for s in seqs {
        let idx = match classifiers.iter().position(|(g, _)| g == s.group()) {
            Some(i) => i,
            None => {
                let group = Group::new(s.group().clone())?;
                classifiers.push((s.group().clone(), Classifier::new(&group, a.problem)?));
                classifiers.len() - 1
            }
        };
        let witnesses = classifiers[idx].1.classify(&s)?;
        if witnesses.is_empty() {
            unmatched += 1;
        }
        if out.json {
            // Spliced so the sequence keeps its own field order.
            out.line(format!(
                "{{\"sequence\":{},\"witnesses\":{}}}",
                s.to_json(),
                serde_json::to_string(&witnesses)?
            ))?;
        } else {
            out.line(format!("{s}"))?;
            if witnesses.is_empty() {
                out.line("  no family")?;
            }
            for w in &witnesses {
                out.line(format!("  {}", describe(w)))?;
            }
        }
    }
    Ok(if unmatched > 0 { EXIT_FAILED } else { 0 })
}

fn describe(w: &FamilyWitness) -> String {
    let params: Vec<String> = w
        .params
        .iter()
        .map(|(k, v)| match v {
            Param::Int(i) => format!("{k}={i}"),
            Param::Element(e) => format!("{k}={e}"),
            Param::Elements(es) => {
                format!(
                    "{k}=[{}]",
                    es.iter()
                        .map(|e| e.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                )
            }
        })
        .collect();
    let mut s = format!("{} {}", w.label, params.join(" "));
    if !w.basis.is_empty() {
        let basis: Vec<String> = w.basis.iter().map(|e| e.to_string()).collect();
        s.push_str(&format!(" basis=[{}]", basis.join(" ")));
    }
    if let Some(f) = &w.translation {
        s.push_str(&format!(" f={f}"));
    }
    s
}

fn generate_cmd(a: GenerateArgs, out: &mut Output) -> anyhow::Result<u8> {
    let spec = a.group.clone();
    if a.all {
        let label = a.label.ok_or_else(|| anyhow!("--all needs --label"))?;
        let group = Group::new(spec)?;
        for s in enumerate_family(&group, label)? {
            out.line(if out.json { s.to_json() } else { s.to_string() })?;
        }
        return Ok(0);
    }
    let witness = match &a.witness {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            FamilyWitness::from_json(&text)?
        }
        None => {
            let label = a.label.expect("clap requires a label");
            let params = match &a.params {
                Some(p) => serde_json::from_str(p).context("parsing --params")?,
                None => Default::default(),
            };
            let basis: Vec<GroupElement> = match &a.basis {
                Some(b) => serde_json::from_str(b).context("parsing --basis")?,
                // The first legal witness carries the standard basis of the label's group shape.
                None => standard_witnesses(&spec, label)?
                    .first()
                    .map(|w| w.basis.clone())
                    .unwrap_or_default(),
            };
            let translation = match &a.translation {
                Some(t) => Some(serde_json::from_str(t).context("parsing --translation")?),
                None => None,
            };
            FamilyWitness {
                label,
                basis,
                params,
                translation,
            }
        }
    };
    let s = generate(&witness, &spec)?;
    out.line(if out.json { s.to_json() } else { s.to_string() })?;
    Ok(0)
}

fn verify_cmd(a: VerifyArgs, out: &mut Output) -> anyhow::Result<u8> {
    let mut opts = VerifyOptions {
        n: a.n,
        seed: a.seed,
        ..VerifyOptions::default()
    };
    if let Some(b) = a.budget {
        opts.config.budget = b;
    }
    let report = run_suite(&a.suite, &opts)?;
    if out.json {
        out.line(report.to_json())?;
    } else {
        for c in &report.checks {
            let mark = if c.pass { "pass" } else { "FAIL" };
            out.line(format!("{mark}  {:<28} {}", c.id, c.description))?;
            if !c.pass {
                out.line(format!("      expected {}", c.expected))?;
                out.line(format!("      actual   {}", c.actual))?;
            }
        }
        for (k, name) in CRITERIA.iter().enumerate() {
            if let Some(ok) = report.criterion_status(k + 1) {
                out.line(format!(
                    "[{}] {:>2} {name}",
                    if ok { "PASS" } else { "FAIL" },
                    k + 1
                ))?;
            }
        }
        let failed = report.checks.iter().filter(|c| !c.pass).count();
        out.line(format!(
            "{} checks, {failed} failed, {:.2}s",
            report.checks.len(),
            report.wall_time
        ))?;
    }
    Ok(if report.passed() { 0 } else { EXIT_FAILED })
}

fn oracle_check(a: OracleArgs, out: &mut Output) -> anyhow::Result<u8> {
    let group = Group::new(a.group.clone())?;
    let report = verify::oracle_random(&group, a.count, a.max_len, a.seed)?;
    if out.json {
        out.line(serde_json::to_string(&report)?)?;
    } else {
        out.line(format!(
            "{} inputs, {} mismatches",
            report.inputs,
            report.mismatches.len()
        ))?;
        for m in &report.mismatches {
            out.line(format!("  {m}"))?;
        }
    }
    Ok(if report.mismatches.is_empty() {
        0
    } else {
        EXIT_FAILED
    })
}
