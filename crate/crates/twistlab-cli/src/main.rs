use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod output;

use output::{Failure, Report};

#[derive(Parser)]
#[command(name = "twistlab", version, about = "Exact checks for twists and triangular structures on bialgebras")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a document.
    ///
    /// Modes: bialgebra, quasitriangular, triangular, twist:NAME,
    /// weak:NAME (an element over H⊗H), weak:NAME:split (an element of a
    /// product document split over its two factors), morphism:NAME.
    Check {
        file: PathBuf,
        #[arg(long, default_value = "bialgebra")]
        mode: String,
    },
    /// Twist a document by one of its elements.
    Twist {
        file: PathBuf,
        #[arg(long)]
        element: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decompose a twist (or, with --rmatrix, an R-matrix) on A⊗B.
    ///
    /// The element is given as FILE:NAME, naming an element of a document
    /// whose presentation is A⊗B.
    Decompose {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        element: String,
        #[arg(long)]
        rmatrix: bool,
    },
    /// The product of two triangular documents.
    Product {
        a: PathBuf,
        b: PathBuf,
        /// Two 1-cells FILE:NAME into A and into B with a common source.
        #[arg(long, num_args = 2, value_names = ["INTO_A", "INTO_B"])]
        diag: Option<Vec<String>>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a fixture document.
    Example {
        name: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Twist parameter; adds the element F.
        #[arg(long, allow_hyphen_values = true)]
        d: Option<String>,
        /// Comma-separated cyclic orders.
        #[arg(long)]
        orders: Option<String>,
        /// `rational` or `cyclotomic:N`.
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn run(cmd: Command) -> Result<Report, (Report, Failure)> {
    match cmd {
        Command::Check { file, mode } => {
            let mut rep = Report::new("check", vec![path_str(&file)]);
            commands::check(&mut rep, &file, &mode).map(|_| rep.clone()).map_err(|e| (rep, e))
        }
        Command::Twist { file, element, output } => {
            let mut rep = Report::new("twist", vec![path_str(&file)]);
            commands::twist(&mut rep, &file, &element, output.as_deref())
                .map(|_| rep.clone())
                .map_err(|e| (rep, e))
        }
        Command::Decompose { a, b, element, rmatrix } => {
            let mut rep = Report::new("decompose", vec![path_str(&a), path_str(&b), element.clone()]);
            commands::decompose(&mut rep, &a, &b, &element, rmatrix)
                .map(|_| rep.clone())
                .map_err(|e| (rep, e))
        }
        Command::Product { a, b, diag, output } => {
            let mut inputs = vec![path_str(&a), path_str(&b)];
            inputs.extend(diag.iter().flatten().cloned());
            let mut rep = Report::new("product", inputs);
            commands::product(&mut rep, &a, &b, diag.as_deref(), output.as_deref())
                .map(|_| rep.clone())
                .map_err(|e| (rep, e))
        }
        Command::Example {
            name,
            lambda,
            d,
            orders,
            field,
            n,
            output,
        } => {
            let mut rep = Report::new("example", vec![name.clone()]);
            let params = commands::ExampleParams {
                lambda,
                d,
                orders,
                field,
                n,
            };
            commands::example(&mut rep, &name, &params, output.as_deref())
                .map(|_| rep.clone())
                .map_err(|e| (rep, e))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli.command) {
        Ok(rep) => {
            rep.print(json, None);
            ExitCode::SUCCESS
        }
        Err((rep, failure)) => {
            rep.print(json, Some(&failure));
            ExitCode::from(failure.code())
        }
    }
}
