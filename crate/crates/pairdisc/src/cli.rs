//! Command-line interface.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use pairdisc_core::bench::{self, DEFAULT_BOOTSTRAP_REPLICATES};
use pairdisc_core::indep::{TestConfig, TicConfig, MIN_PERMUTATIONS};
use pairdisc_core::synth::{generate_structure, mi_distribution};
use pairdisc_core::{
    resfit, DiscoveryConfig, PairType, RngSeed, Structure, TestKind, TestPolicy, VariablePair,
};

use crate::error::{Error, Result};
use crate::io as formats;
use crate::report::{self, OutputFormat};

const EXIT_CODES: &str = "\
Exit status:
  0  success
  2  input error (bad arguments, unreadable or malformed input)
  3  degenerate data (e.g. a constant variable)
  4  output could not be written";

#[derive(Debug, Parser)]
#[command(name = "pairdisc", version, about = "Pairwise causal discovery with regression-residual independence tests", after_help = EXIT_CODES)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Significance level of the independence tests, in (0, 1).
    #[arg(long, global = true, default_value_t = pairdisc_core::discover::DEFAULT_CI, value_parser = parse_ci)]
    pub ci: f64,
    /// Bins per axis of the χ² grid (at least 2).
    #[arg(long, global = true, default_value_t = 10, value_parser = clap::value_parser!(u64).range(2..))]
    pub bins: u64,
    /// Permutations of the TIC test (at least 19).
    #[arg(long, global = true, default_value_t = 100, value_parser = clap::value_parser!(u64).range(MIN_PERMUTATIONS as u64..))]
    pub permutations: u64,
    /// Base seed of every random choice.
    #[arg(long, global = true, env = "PAIRDISC_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Test override per pair type, e.g. `numerical=tic`. Repeatable;
    /// entries may also be comma-separated.
    #[arg(long, global = true, value_name = "TYPE=TEST", value_delimiter = ',', value_parser = parse_policy_entry)]
    pub policy: Vec<(PairType, TestKind)>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify one pair read from a file or standard input.
    ///
    /// Input is either an `A,B` table with one observation per row, or a
    /// pairs file with header `SampleID,A,B` and a single row.
    Discover {
        /// Input file; `-` or nothing reads standard input.
        input: Option<PathBuf>,
    },
    /// Write a synthetic sample of one structure as an `A,B` table.
    Synth {
        /// causal, anticausal, independent or confounded.
        #[arg(value_parser = parse_structure)]
        kind: Structure,
        /// Number of observations.
        n: usize,
    },
    /// Score discovery on a labelled corpus, stratified by pair type.
    Bench {
        /// Pairs file (`SampleID,A,B`).
        pairs: PathBuf,
        /// Truth file (`SampleID,Target,Details`).
        truth: PathBuf,
        /// Bootstrap replicates of the accuracy estimate.
        #[arg(long, default_value_t = DEFAULT_BOOTSTRAP_REPLICATES)]
        replicates: usize,
        /// Also write one CSV record per pair to this file.
        #[arg(long, value_name = "PATH")]
        verdicts: Option<PathBuf>,
    },
    /// Emit residual/cause mutual information samples as `structure,mi`.
    MiDensity {
        /// A structure name or `all`.
        #[arg(value_parser = parse_kinds)]
        kind: KindSelection,
        /// Samples per structure.
        replicates: usize,
        /// Observations per sample.
        n: usize,
    },
    /// Average causal effect of per-type test selection over pooled accuracy.
    ///
    /// The best bootstrap mean of each stratum across the given reports is
    /// weighted and the mean of their Total rows is subtracted.
    Ace {
        /// Report CSVs written by `bench --format csv`.
        #[arg(required = true)]
        reports: Vec<PathBuf>,
        /// Stratum weights as `type=w,...` inline or in a file. Defaults to
        /// the pair counts of the first report.
        #[arg(long)]
        weights: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct KindSelection(pub Vec<Structure>);

fn parse_ci(s: &str) -> std::result::Result<f64, String> {
    let ci: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if ci > 0.0 && ci < 1.0 {
        Ok(ci)
    } else {
        Err("must lie strictly between 0 and 1".into())
    }
}

fn parse_structure(s: &str) -> std::result::Result<Structure, String> {
    s.parse().map_err(|_| {
        format!("unknown structure `{s}`; expected causal, anticausal, independent or confounded")
    })
}

fn parse_kinds(s: &str) -> std::result::Result<KindSelection, String> {
    if s.eq_ignore_ascii_case("all") {
        Ok(KindSelection(Structure::ALL.to_vec()))
    } else {
        parse_structure(s).map(|k| KindSelection(vec![k]))
    }
}

fn parse_policy_entry(s: &str) -> std::result::Result<(PairType, TestKind), String> {
    let (t, k) = s
        .split_once('=')
        .ok_or_else(|| format!("`{s}` is not TYPE=TEST"))?;
    let t: PairType = t.parse().map_err(|_| format!("unknown pair type `{t}`"))?;
    let k: TestKind = k.parse().map_err(|_| format!("unknown test `{k}`"))?;
    Ok((t, k))
}

impl GlobalArgs {
    pub fn discovery_config(&self) -> DiscoveryConfig {
        let mut policy = TestPolicy::default();
        for (t, k) in &self.policy {
            policy.set(*t, *k);
        }
        DiscoveryConfig {
            ci: self.ci,
            policy,
            tests: TestConfig {
                bins: self.bins as usize,
                permutations: self.permutations as usize,
                tic: TicConfig::default(),
            },
        }
    }
}

/// Parses arguments and runs the command; returns the exit status.
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
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("pairdisc: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    let g = &cli.global;
    let seed = RngSeed::new(g.seed);
    match &cli.command {
        Command::Discover { input } => {
            let (a, b) = match input.as_deref() {
                None => read_stdin()?,
                Some(p) if p == Path::new("-") => read_stdin()?,
                Some(p) => {
                    formats::read_discover_input(formats::open(p)?, &p.display().to_string())?
                }
            };
            if a.is_empty() {
                return Err(Error::Input("input has no observations".into()));
            }
            // The library scores a constant side as p = 1; here it is an error.
            if [&a, &b].iter().any(|v| v.windows(2).all(|w| w[0] == w[1])) {
                return Err(Error::Degenerate(pairdisc_core::Error::ConstantVariable));
            }
            let pair = VariablePair::from_values(a, b).map_err(Error::Degenerate)?;
            let verdict = resfit(&pair, &g.discovery_config(), seed).map_err(Error::Degenerate)?;
            with_output(g.out.as_deref(), |w| {
                report::write_verdict(w, &verdict, g.format)
            })
        }
        Command::Synth { kind, n } => {
            let sample =
                generate_structure(*kind, *n, seed).map_err(|e| Error::Input(e.to_string()))?;
            with_output(g.out.as_deref(), |w| {
                formats::write_table(w, &sample.x, &sample.y)
            })?;
            eprintln!("{}", sample.truth);
            Ok(())
        }
        Command::Bench {
            pairs,
            truth,
            replicates,
            verdicts,
        } => {
            if *replicates == 0 {
                return Err(Error::Input("--replicates must be positive".into()));
            }
            let labeled = formats::load_pairs(pairs, truth)?;
            let report = bench::run_benchmark(&labeled, &g.discovery_config(), *replicates, seed)
                .map_err(Error::Degenerate)?;
            if let Some(path) = verdicts {
                with_output(Some(path), |w| report::write_pair_records(w, &report))?;
            }
            let skipped = report.total.skipped;
            if skipped > 0 {
                eprintln!(
                    "pairdisc: {skipped} of {} pairs skipped",
                    report.total.count
                );
            }
            with_output(g.out.as_deref(), |w| {
                report::write_report(w, &report, g.format)
            })
        }
        Command::MiDensity {
            kind,
            replicates,
            n,
        } => {
            let mut rows = Vec::with_capacity(kind.0.len() * replicates);
            for (i, k) in kind.0.iter().enumerate() {
                let mi =
                    mi_distribution(*k, *replicates, *n, g.bins as usize, seed.derive(i as u64))
                        .map_err(|e| Error::Input(e.to_string()))?;
                rows.extend(mi.into_iter().map(|v| (*k, v)));
            }
            with_output(g.out.as_deref(), |w| {
                let mut csv = csv::Writer::from_writer(w);
                csv.write_record(["structure", "mi"])?;
                for (k, v) in &rows {
                    csv.write_record([k.as_str(), &v.to_string()])?;
                }
                csv.flush()?;
                Ok(())
            })
        }
        Command::Ace { reports, weights } => {
            let value = ace_from_reports(reports, weights.as_deref())?;
            with_output(g.out.as_deref(), |w| {
                writeln!(w, "{value}")?;
                writeln!(w, "{:.2}%", value * 100.0)?;
                Ok(())
            })
        }
    }
}

fn read_stdin() -> Result<(Vec<f64>, Vec<f64>)> {
    formats::read_discover_input(io::stdin().lock(), "<stdin>")
}

fn with_output(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let mut w = BufWriter::new(io::stdout().lock());
            f(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

/// Parses `type=w` entries separated by commas or newlines.
pub fn parse_weights(text: &str) -> Result<BTreeMap<PairType, f64>> {
    let mut out = BTreeMap::new();
    for entry in text
        .split([',', '\n'])
        .map(str::trim)
        .filter(|e| !e.is_empty())
    {
        let (t, w) = entry
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("weight `{entry}` is not TYPE=WEIGHT")))?;
        let t: PairType = t
            .parse()
            .map_err(|_| Error::Input(format!("unknown pair type `{}`", t.trim())))?;
        let w: f64 = w
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("weight `{}` is not a number", w.trim())))?;
        if out.insert(t, w).is_some() {
            return Err(Error::Input(format!("pair type `{t}` weighted twice")));
        }
    }
    if out.is_empty() {
        return Err(Error::Input("no weights given".into()));
    }
    Ok(out)
}

fn load_weights(arg: &str) -> Result<BTreeMap<PairType, f64>> {
    let path = Path::new(arg);
    if !arg.contains('=') && path.is_file() {
        let mut text = String::new();
        formats::open(path)?
            .read_to_string(&mut text)
            .map_err(|source| Error::Read {
                path: path.to_owned(),
                source,
            })?;
        parse_weights(&text)
    } else {
        parse_weights(arg)
    }
}

/// ACE over one or more report CSVs.
pub fn ace_from_reports(paths: &[PathBuf], weights: Option<&str>) -> Result<f64> {
    let mut best: BTreeMap<PairType, f64> = BTreeMap::new();
    let mut pooled = Vec::with_capacity(paths.len());
    let mut counts = None;
    for path in paths {
        let parsed = report::parse_report_csv(formats::open(path)?, &path.display().to_string())?;
        for (t, (mean, _)) in &parsed.strata {
            let e = best.entry(*t).or_insert(*mean);
            *e = e.max(*mean);
        }
        pooled.push(parsed.total_mean);
        counts.get_or_insert(parsed.strata);
    }
    let pooled_mean = pooled.iter().sum::<f64>() / pooled.len() as f64;
    let weights = match weights {
        Some(w) => load_weights(w)?,
        None => {
            let counts = counts.unwrap_or_default();
            let total: usize = counts.values().map(|(_, c)| c).sum();
            if total == 0 {
                return Err(Error::Input("report has no pairs to weight".into()));
            }
            counts
                .iter()
                .map(|(t, (_, c))| (*t, *c as f64 / total as f64))
                .collect()
        }
    };
    bench::ace(&best, &weights, pooled_mean).map_err(|e| Error::Input(e.to_string()))
}
