use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use weilkit::{Config, Strategy};
use weilkit_cli::corpus::{check_corpus, render, Golden};
use weilkit_cli::session::Action;
use weilkit_cli::{parse_session_with, run_command, run_session, Command, DslError, Location, Report, Status};

#[derive(Parser)]
#[command(name = "weilkit", version, about = "Weil restriction of affine schemes, checked exactly")]
struct Cli {
    #[command(subcommand)]
    command: Verb,
    #[command(flatten)]
    limits: Limits,
}

#[derive(Args)]
struct Limits {
    /// Maximum number of assignments evaluated by one point enumeration.
    #[arg(long, global = true)]
    point_budget: Option<u64>,
    /// Maximum S-polynomial degree in Groebner basis computations.
    #[arg(long, global = true)]
    gb_degree_cap: Option<u32>,
    /// Height bound for rational root search over QQ.
    #[arg(long, global = true)]
    height_bound: Option<u64>,
    /// Enumerate points on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

impl Limits {
    fn config(&self) -> Config {
        let d = Config::default();
        Config {
            point_budget: self.point_budget.unwrap_or(d.point_budget),
            gb_degree_cap: self.gb_degree_cap.unwrap_or(d.gb_degree_cap),
            height_bound: self.height_bound.unwrap_or(d.height_bound),
            strategy: if self.sequential { Strategy::Sequential } else { d.strategy },
        }
    }
}

#[derive(Subcommand)]
enum Verb {
    /// Run every command of a session file and print the reports.
    Run { file: PathBuf },
    /// Print the restriction of one declared scheme.
    Restrict {
        file: PathBuf,
        #[arg(long)]
        scheme: String,
    },
    /// Run the corpus and compare with its golden files.
    Corpus {
        #[arg(default_value = "corpus")]
        dir: PathBuf,
        /// Rewrite the golden files instead of comparing.
        #[arg(long)]
        bless: bool,
    },
}

const USAGE: u8 = 2;
const BUDGET: u8 = 3;

struct Failure(u8, String);

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure(USAGE, message.to_string())
    }
}

fn exit_code(reports: &[Report]) -> u8 {
    if reports.iter().any(|r| !r.as_expected() && r.status != Status::BudgetExceeded) {
        1
    } else if reports.iter().any(|r| !r.as_expected()) {
        3
    } else {
        0
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = cli.limits.config();
    let load = |file: &PathBuf| {
        let text = fs::read_to_string(file).map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
        parse_session_with(&text, config).map_err(|e| {
            let code = if matches!(e, DslError::Budget { .. }) { BUDGET } else { USAGE };
            Failure(code, format!("{}:{e}", file.display()))
        })
    };
    let fail = |Failure(code, message)| {
        eprintln!("error: {message}");
        code
    };
    let code = match cli.command {
        Verb::Run { file } => match load(&file).and_then(|s| run_session(&s).map_err(Failure::usage)) {
            Ok(reports) => {
                print!("{}", render(&reports.iter().map(Report::to_json).collect::<Vec<_>>()));
                exit_code(&reports)
            }
            Err(f) => fail(f),
        },
        Verb::Restrict { file, scheme } => {
            let run = load(&file).and_then(|s| {
                let x = s.scheme(&scheme).ok_or_else(|| Failure::usage(format!("no scheme named '{scheme}'")))?.clone();
                let cmd = Command {
                    text: format!("restrict {scheme}"),
                    location: Location { line: 0, column: 0 },
                    action: Action::Restrict(x),
                    expect: None,
                };
                run_command(&s, &cmd).map_err(Failure::usage)
            });
            match run {
                Ok(report) => {
                    print!("{}", render(&[report.to_json()]));
                    exit_code(&[report])
                }
                Err(f) => fail(f),
            }
        }
        Verb::Corpus { dir, bless } => match check_corpus(&dir, config, bless) {
            Ok(outcomes) => {
                let mut code = 0;
                for o in &outcomes {
                    let golden = match o.golden {
                        Golden::Match => "golden ok",
                        Golden::Written => "golden written",
                        Golden::Mismatch => "golden MISMATCH",
                        Golden::Missing => "golden missing",
                    };
                    let verdict = if o.passed() { "ok  " } else { "FAIL" };
                    println!("{verdict} {} ({} commands, {golden})", o.path.display(), o.reports.len());
                    for r in o.reports.iter().filter(|r| !r.as_expected()) {
                        println!("     {}: {} (expected {})", r.command, r.status.as_str(), r.expected().as_str());
                    }
                    if !o.passed() {
                        code = code.max(exit_code(&o.reports)).max(1);
                    }
                }
                code
            }
            Err(e) => fail(Failure::usage(e)),
        },
    };
    ExitCode::from(code)
}
