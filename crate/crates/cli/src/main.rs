use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sl2_wedderburn::chartab::build_table;
use sl2_wedderburn::decomposition::{decompose, GroupKind};
use sl2_wedderburn_cli::{
    parse_q_range, render_decomposition, verify_sweep, CountsDocument, OutputDocument, VerifyLevel,
};

/// Wedderburn decompositions of Q[SL2(q)] and Q[PSL2(q)].
#[derive(Parser)]
#[command(name = "sl2w", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the decomposition of the rational group algebra.
    Decompose {
        #[arg(long, value_enum)]
        group: Group,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Plain ASCII instead of Unicode math symbols.
        #[arg(long)]
        ascii: bool,
    },
    /// Audit every prime power in a range.
    Verify {
        /// Range such as 4..199, or a single q.
        #[arg(long)]
        q: String,
        #[arg(long, value_enum, default_value_t = Level::Closed)]
        level: Level,
    },
    /// Print the character table.
    Table {
        #[arg(long, value_enum)]
        group: Group,
        #[arg(long)]
        q: u64,
    },
    /// Count the simple rational modules and their dimensions.
    Count {
        #[arg(long, value_enum)]
        group: Group,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Group {
    Sl2,
    Psl2,
}

impl From<Group> for GroupKind {
    fn from(g: Group) -> GroupKind {
        match g {
            Group::Sl2 => GroupKind::SL2,
            Group::Psl2 => GroupKind::PSL2,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Closed,
    Oracle,
    Group,
}

impl From<Level> for VerifyLevel {
    fn from(l: Level) -> VerifyLevel {
        match l {
            Level::Closed => VerifyLevel::Closed,
            Level::Oracle => VerifyLevel::Oracle,
            Level::Group => VerifyLevel::Group,
        }
    }
}

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn run(cli: Cli) -> Result<ExitCode, sl2_wedderburn::Error> {
    match cli.command {
        Command::Decompose {
            group,
            q,
            format,
            ascii,
        } => {
            let w = decompose(group.into(), q)?;
            match format {
                Format::Text => print!("{}", render_decomposition(&w, ascii)),
                Format::Json => println!("{}", OutputDocument::from_decomposition(&w).to_json()),
            }
        }
        Command::Verify { q, level } => {
            let report = verify_sweep(parse_q_range(&q)?, level.into());
            print!("{}", report.render());
            if !report.passed() {
                return Ok(ExitCode::from(EXIT_VERIFY_FAILED));
            }
        }
        Command::Table { group, q } => print!("{}", build_table(group.into(), q)?.render()),
        Command::Count { group, q, format } => {
            let doc = CountsDocument::new(group.into(), q)?;
            match format {
                Format::Text => print!("{}", doc.render()),
                Format::Json => println!("{}", doc.to_json()),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors, matching EXIT_USAGE.
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
