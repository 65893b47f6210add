use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pcakit::cli::{self, ExploreBounds, Format, PathChoice};

#[derive(Debug, Parser)]
#[command(name = "pcakit", version, about = "Data-word automata, priority checks and counter-machine compilation")]
struct Args {
    /// Output style.
    #[arg(long, value_enum, default_value_t = FormatArg::Text, global = true)]
    format: FormatArg,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PathArg {
    Auto,
    Automaton,
    Interpreter,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether a class condition is 0-priority.
    CheckPriority { condition: String },
    /// Run an automaton on each data word of a file.
    Member { automaton: String, words: String },
    /// Compile a priority class automaton into a counter machine.
    Compile {
        automaton: String,
        #[arg(short, long)]
        output: String,
        /// Layout report path; defaults to OUTPUT.layout.
        #[arg(long)]
        layout: Option<String>,
    },
    /// Bounded emptiness for a counter machine or an automaton.
    Explore {
        input: String,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long, default_value_t = 16)]
        sum_bound: u64,
        #[arg(long, default_value_t = 100_000)]
        steps: usize,
    },
    /// Bounded Boolean-state reachability for an array program.
    Program {
        program: String,
        /// Assignment such as `b1=true b3=false`; missing variables range over both values.
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long, value_enum, default_value_t = PathArg::Auto)]
        path: PathArg,
    },
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { cli::EXIT_INPUT as u8 } else { 0 });
        }
    };
    let report = match args.command {
        Command::CheckPriority { condition } => cli::cmd_check_priority(&condition),
        Command::Member { automaton, words } => cli::cmd_member(&automaton, &words),
        Command::Compile { automaton, output, layout } => cli::cmd_compile(&automaton, &output, layout.as_deref()),
        Command::Explore { input, max_len, sum_bound, steps } => {
            cli::cmd_explore(&input, ExploreBounds { max_len, sum_bound, steps })
        }
        Command::Program { program, target, max_len, path } => {
            let choice = match path {
                PathArg::Auto => PathChoice::Auto,
                PathArg::Automaton => PathChoice::Automaton,
                PathArg::Interpreter => PathChoice::Interpreter,
            };
            cli::cmd_program(&program, &target, max_len, choice)
        }
    };
    let format = match args.format {
        FormatArg::Text => Format::Text,
        FormatArg::Structured => Format::Structured,
    };
    let out = report.render(format);
    if report.exit_code == cli::EXIT_INPUT && format == Format::Text {
        eprint!("{out}");
    } else {
        print!("{out}");
    }
    ExitCode::from(report.exit_code as u8)
}
