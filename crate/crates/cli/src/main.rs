use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};

use sdt_core::equivalence::canonicalize_with;
use sdt_core::sampler::{sample_components, search_bound};
use sdt_core::transducer::DEFAULT_PAIR_CAP;
use sdt_core::{
    bounded_equiv, budgeted, isomorphic, learn_with_report, machine_oracle, random_sdt, to_dot,
    Alphabet, Dataset, LearnError, Oracle, RandomSdtParams, Sdt,
};

#[derive(Parser)]
#[command(
    name = "sdt",
    version,
    about = "Learn semi-deterministic transducers from translation pairs"
)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Longest input to enumerate.
    #[arg(long, global = true)]
    max_len: Option<usize>,
    /// Abort learning after this many distinct queries.
    #[arg(long, global = true)]
    query_budget: Option<usize>,
    #[arg(long, global = true, default_value_t = DEFAULT_PAIR_CAP)]
    pair_cap: usize,
    /// Input length up to which machines are compared.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Write the produced file here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random trim machine.
    Gen {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        states: u64,
        #[arg(long, default_value = "ab")]
        inalpha: String,
        #[arg(long, default_value = "AB")]
        outalpha: String,
        #[arg(long, default_value_t = 2)]
        max_out_len: usize,
        #[arg(long, default_value_t = 2)]
        max_out_set: usize,
    },
    /// List every translation pair up to `--max-len`.
    Pairs { machine: PathBuf },
    /// Learn from a dataset, answering queries with a target machine.
    Learn { data: PathBuf, target: PathBuf },
    /// Characteristic sample of a machine.
    Cs { machine: PathBuf },
    /// Compare two machines.
    Equiv { first: PathBuf, second: PathBuf },
    /// Canonical machine by learning from the machine itself.
    Canon {
        machine: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_rounds: usize,
    },
    /// Graphviz rendering.
    Dot { machine: PathBuf },
}

/// `key: value` lines, printed once the command finishes or fails.
#[derive(Default)]
struct Report(Vec<(String, String)>);

impl Report {
    fn add(&mut self, key: &str, value: impl ToString) {
        self.0.push((key.to_string(), value.to_string()));
    }

    fn render(&self) -> String {
        self.0.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
    }
}

fn read_machine(path: &Path) -> Result<Sdt> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let g = Sdt::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    if let Err(violations) = g.validate() {
        let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
        bail!("{}: {}", path.display(), list.join("; "));
    }
    Ok(g)
}

fn read_dataset(path: &Path, input: &Alphabet, output: &Alphabet) -> Result<Dataset> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Dataset::parse(&text, input, output).with_context(|| format!("parsing {}", path.display()))
}

fn emit(config: &RunConfig, text: &str) -> Result<()> {
    match &config.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn default_depth(g1: &Sdt, g2: &Sdt) -> usize {
    g1.num_states() + g2.num_states() + g1.max_output_len().max(g2.max_output_len()) + 2
}

fn run(cli: Cli, report: &mut Report) -> Result<()> {
    let config = &cli.config;
    match cli.command {
        Command::Gen {
            states,
            inalpha,
            outalpha,
            max_out_len,
            max_out_set,
        } => {
            let mut params = RandomSdtParams::new(
                states as usize,
                Alphabet::from_chars(&inalpha)?,
                Alphabet::from_chars(&outalpha)?,
                config.seed,
            );
            params.max_out_len = max_out_len;
            params.max_out_set = max_out_set;
            let g = random_sdt(&params);
            emit(config, &g.to_text())?;
            report.add("states", g.num_states());
            report.add("edges", g.num_transitions());
        }
        Command::Pairs { machine } => {
            let g = read_machine(&machine)?;
            let Some(k) = config.max_len else {
                Cli::command()
                    .error(ErrorKind::MissingRequiredArgument, "pairs needs --max-len")
                    .exit();
            };
            let data = g.enumerate_pairs(k, config.pair_cap)?;
            emit(config, &data.to_text())?;
            report.add("pairs", data.len());
            report.add("inputs", data.num_inputs());
        }
        Command::Learn { data, target } => {
            let g = read_machine(&target)?;
            let data = read_dataset(&data, g.input_alphabet(), g.output_alphabet())?;
            report.add("pairs", data.len());
            let started = Instant::now();
            let oracle = budgeted(
                machine_oracle(g.clone()),
                config.query_budget.unwrap_or(usize::MAX),
            );
            let outcome = learn_with_report(&data, &oracle);
            let stats = oracle.stats();
            report.add("translation_queries", stats.translation_queries);
            report.add("domain_queries", stats.domain_queries);
            report.add("queries", stats.total());
            report.add("wall_time_ms", started.elapsed().as_millis());
            let learned = match outcome {
                Ok(r) => r,
                Err(e @ LearnError::Oracle(_)) => bail!("budget exhausted: {e}"),
                Err(e) => bail!(e),
            };
            let h = learned.machine;
            emit(config, &h.to_text())?;
            let depth = config.depth.unwrap_or_else(|| default_depth(&h, &g));
            report.add("states", h.num_states());
            report.add("edges", h.num_transitions());
            report.add("merges", learned.merges);
            report.add("depth", depth);
            let verdict = bounded_equiv(&h, &g, depth)?;
            report.add("equivalent", verdict.is_none());
            if let Some(x) = verdict {
                report.add("counterexample", g.input_alphabet().render(&x));
            }
        }
        Command::Cs { machine } => {
            let g = read_machine(&machine)?;
            let cs = sample_components(&g)?;
            emit(config, &cs.sample.to_text())?;
            report.add("pairs", cs.sample.len());
            report.add("n0", cs.n0.len());
            report.add("n1", cs.n1.len());
            report.add("n2", cs.n2.len());
            report.add("search_bound", search_bound(&g));
        }
        Command::Equiv { first, second } => {
            let g1 = read_machine(&first)?;
            let g2 = read_machine(&second)?;
            let depth = config.depth.unwrap_or_else(|| default_depth(&g1, &g2));
            let verdict = bounded_equiv(&g1, &g2, depth)?;
            report.add("isomorphic", isomorphic(&g1, &g2));
            report.add("depth", depth);
            report.add("equivalent", verdict.is_none());
            if let Some(x) = verdict {
                report.add("counterexample", g1.input_alphabet().render(&x));
            }
        }
        Command::Canon {
            machine,
            max_rounds,
        } => {
            let g = read_machine(&machine)?;
            let start = config.max_len.unwrap_or(g.num_states() + 2);
            let canon = canonicalize_with(&g, start, max_rounds)?;
            emit(config, &canon.machine.to_text())?;
            report.add("states", canon.machine.num_states());
            report.add("edges", canon.machine.num_transitions());
            report.add("rounds", canon.rounds);
            report.add("stable", canon.stable);
            report.add("final_depth", canon.final_depth);
        }
        Command::Dot { machine } => {
            let g = read_machine(&machine)?;
            emit(config, &to_dot(&g))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // Reports go to stdout unless the produced file is going there.
    let to_stdout = cli.config.out.is_some() || matches!(cli.command, Command::Equiv { .. });
    let mut report = Report::default();
    let result = run(cli, &mut report);
    let text = report.render();
    if to_stdout {
        print!("{text}");
    } else {
        eprint!("{text}");
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
