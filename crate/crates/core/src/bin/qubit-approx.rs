use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qubit_approx::cli::{
    evaluation_cap, figure, random_document, solve_document, to_json, verify_document, CliError,
    Figure, FigureSpec, InstanceDocument, Param,
};
use qubit_approx::planner::GAP_FLOOR;

#[derive(Parser)]
#[command(
    name = "qubit-approx",
    version,
    about = "Best mixture of given pure qubit states approximating a target state"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance document (file path, or stdin when omitted or `-`).
    Solve {
        input: Option<PathBuf>,
        /// Overrides the document's `options.tol`.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Compare the closed-form optimum with the brute-force grid search.
    Verify {
        input: Option<PathBuf>,
        /// Lattice step of the grid search.
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Write one panel of the worked-example figures as CSV.
    Figure {
        /// fig1, fig2 or fig3
        #[arg(long)]
        figure: String,
        /// Swept parameter: a, k or phi.
        #[arg(long)]
        panel: String,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        from: Option<f64>,
        #[arg(long)]
        to: Option<f64>,
        /// Replace the preset's fixed parameter, as `name=value`.
        #[arg(long)]
        fixed: Option<String>,
        /// Add a grid-search column.
        #[arg(long)]
        with_oracle: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a seeded random instance document.
    Random {
        #[arg(long)]
        seed: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
}

fn read_document(input: Option<PathBuf>, tol: Option<f64>) -> Result<InstanceDocument, CliError> {
    let text = match input {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(&p)?,
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    let mut doc = InstanceDocument::parse(&text)?;
    if let Some(t) = tol {
        doc.options.get_or_insert_with(Default::default).tol = Some(t);
    }
    Ok(doc)
}

fn figure_spec(
    figure: &str,
    panel: &str,
    count: Option<usize>,
    from: Option<f64>,
    to: Option<f64>,
    fixed: Option<String>,
    with_oracle: bool,
) -> Result<FigureSpec, CliError> {
    let mut spec = FigureSpec::preset(figure.parse::<Figure>()?, panel.parse::<Param>()?);
    if let Some(c) = count {
        spec.sweep.count = c;
    }
    if let Some(f) = from {
        spec.sweep.from = f;
    }
    if let Some(t) = to {
        spec.sweep.to = t;
    }
    if let Some(f) = fixed {
        let (name, value) = f
            .split_once('=')
            .ok_or_else(|| CliError::Schema(format!("--fixed `{f}`: expected name=value")))?;
        let param: Param = name.trim().parse()?;
        if param != spec.fixed.0 {
            return Err(CliError::Schema(format!(
                "--fixed: this panel holds {} fixed, not {param}",
                spec.fixed.0
            )));
        }
        spec.fixed.1 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Schema(format!("--fixed `{f}`: value is not a number")))?;
    }
    spec.with_oracle = with_oracle;
    Ok(spec)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve { input, tol } => {
            let doc = read_document(input, tol)?;
            println!("{}", to_json(&solve_document(&doc)?));
        }
        Command::Verify { input, step, tol } => {
            let doc = read_document(input, tol)?;
            let cmp = verify_document(&doc, step, evaluation_cap()?)?;
            println!("{}", to_json(&cmp));
            if !cmp.within_bound() {
                return Err(CliError::Regression {
                    gap: cmp.gap,
                    floor: GAP_FLOOR,
                    bound: cmp.bound,
                });
            }
        }
        Command::Figure {
            figure: fig,
            panel,
            count,
            from,
            to,
            fixed,
            with_oracle,
            out,
        } => {
            let spec = figure_spec(&fig, &panel, count, from, to, fixed, with_oracle)?;
            let rows = figure::generate(&spec, evaluation_cap()?)?;
            figure::write_csv_file(&rows, spec.with_oracle, &out)?;
            if let Some(gap) = figure::max_gap(&rows) {
                eprintln!("max |closed - grid| = {gap:e} over {} rows", rows.len());
            }
        }
        Command::Random { seed, n } => {
            println!("{}", random_document(seed, n as usize).to_json());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qubit-approx: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
