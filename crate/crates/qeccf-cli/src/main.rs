use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qeccf::tablegen::{self, CsvTable, Format, Scenario};

#[derive(Parser)]
#[command(
    name = "qeccf",
    version,
    about = "Codes from idempotents in the transform domain"
)]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "QECCF_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Analyze every assignment of a scenario and print or write the table.
    Run {
        scenario: PathBuf,
        #[arg(long)]
        section: Option<String>,
        #[arg(long, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compare a produced CSV table against a golden one.
    Diff { produced: PathBuf, golden: PathBuf },
    /// Print the constituent inventory of a scenario's subgroup.
    Decompose {
        scenario: PathBuf,
        #[arg(long)]
        section: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Analyze a single assignment, e.g. `--assignment PZ-,I2`.
    Detect {
        scenario: PathBuf,
        #[arg(long)]
        section: Option<String>,
        #[arg(long)]
        assignment: String,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Rank ordered constituent pairs by hard mismatches against the golden table.
    Search {
        scenario: PathBuf,
        #[arg(long)]
        section: Option<String>,
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
}

fn load(path: &PathBuf, section: Option<&str>, seed: Option<u64>) -> qeccf::Result<Scenario> {
    let mut s = Scenario::load_section(path, section)?;
    if let Some(seed) = seed {
        s.seed = seed;
    }
    Ok(s)
}

fn run(cmd: Cmd) -> qeccf::Result<ExitCode> {
    match cmd {
        Cmd::Run {
            scenario,
            section,
            format,
            out,
            seed,
        } => {
            let s = load(&scenario, section.as_deref(), seed)?;
            let table = tablegen::run_scenario(&s)?;
            match out {
                Some(p) => tablegen::emit(&table, format, p)?,
                None => print!("{}", table.render(format)),
            }
        }
        Cmd::Diff { produced, golden } => {
            let report =
                tablegen::golden_diff(&CsvTable::load(produced)?.rows, &CsvTable::load(golden)?);
            print!("{report}");
            return Ok(ExitCode::from(report.status().exit_code() as u8));
        }
        Cmd::Decompose {
            scenario,
            section,
            seed,
        } => {
            let s = load(&scenario, section.as_deref(), seed)?;
            let prep = s.prepare()?;
            println!(
                "|E| = {}, |S| = {}",
                prep.basis.order(),
                prep.constituents.sub().len()
            );
            print!("{}", prep.constituents.inventory());
        }
        Cmd::Detect {
            scenario,
            section,
            assignment,
            seed,
        } => {
            let s = load(&scenario, section.as_deref(), seed)?;
            let prep = s.prepare()?;
            let row =
                tablegen::analyze_row(&prep, &s.slots, &tablegen::parse_labels(&assignment)?)?;
            let table = tablegen::Table {
                rows: vec![tablegen::Row { sl: 1, ..row }],
            };
            print!("{}", table.to_markdown());
        }
        Cmd::Search {
            scenario,
            section,
            top,
        } => {
            let s = load(&scenario, section.as_deref(), None)?;
            let golden_path = s
                .golden
                .clone()
                .ok_or_else(|| qeccf::Error::Scenario("scenario has no golden file".into()))?;
            let golden = CsvTable::load(golden_path)?;
            let prep = s.prepare()?;
            for ((a, b), hard) in tablegen::search_pairs(&s, &prep, &golden)?
                .into_iter()
                .take(top)
            {
                println!("slots = {a} {b}: {hard} hard mismatches");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("qeccf: {e}");
            return ExitCode::FAILURE;
        }
    }
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qeccf: {e}");
            ExitCode::FAILURE
        }
    }
}
