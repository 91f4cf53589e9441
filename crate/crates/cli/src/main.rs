use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::info;

use clifford_ergotropy::ergotropy::HeuristicBudget;
use clifford_ergotropy::experiments::{
    bounds_for, clifford_ergotropy_tt, find_cusps, grid, ising_bound, single_qubit, sweep_2q, typicality,
    write_sweep_csv, write_typicality_csv, BoundsOptions, IsingModel, TypicalityConfig,
};
use clifford_ergotropy::operator::PauliOperator;
use clifford_ergotropy::state::PureState;
use clifford_ergotropy::Error;

#[derive(Parser)]
#[command(
    name = "clifford-ergotropy",
    version,
    about = "Clifford-restricted work extraction experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the transverse field of the two-qubit Ising model for |TT>.
    #[command(allow_negative_numbers = true)]
    Sweep2q {
        /// Longitudinal field.
        #[arg(long, default_value_t = 0.0)]
        h: f64,
        #[arg(long, default_value_t = -2.0)]
        g_min: f64,
        #[arg(long, default_value_t = 2.0)]
        g_max: f64,
        /// Number of grid points, endpoints included.
        #[arg(long, default_value_t = 81)]
        steps: usize,
        /// Output CSV, `-` for stdout.
        #[arg(long, default_value = "-")]
        out: PathBuf,
        /// Also print grid points where the Clifford ergotropy has a cusp.
        #[arg(long)]
        report_cusps: bool,
    },
    /// Pauli-spectrum statistics of Haar-random states.
    #[command(allow_negative_numbers = true)]
    Typicality {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tail exponent of the concentration threshold (must exceed 1).
        #[arg(long, default_value_t = 2.0)]
        a: f64,
        /// Transverse field of the chain used for the energy column.
        #[arg(long, default_value_t = 1.0)]
        g: f64,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Upper bounds and Clifford ergotropy for a state and Hamiltonian file.
    #[command(allow_negative_numbers = true)]
    Bounds {
        /// One `<re> <im>` amplitude per line.
        #[arg(long)]
        state: PathBuf,
        /// One `<coefficient> <pauli-word>` per line.
        #[arg(long)]
        hamiltonian: PathBuf,
        /// Largest qubit count searched exhaustively (at most 3).
        #[arg(long, default_value_t = 2)]
        exact_n_limit: usize,
        /// Heuristic search effort as RESTARTSxSTEPS.
        #[arg(long, default_value = "50x200")]
        heuristic_budget: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report charging (energy increase) instead of extraction.
        #[arg(long)]
        maximize: bool,
    },
    /// Product-state gap bounds for |T...T> on a periodic Ising chain.
    #[command(allow_negative_numbers = true)]
    IsingBound {
        /// `tfim` or `classical`.
        #[arg(long)]
        model: String,
        /// Transverse field g (tfim) or longitudinal field h (classical).
        #[arg(long, visible_aliases = ["g", "h"], default_value_t = 0.0)]
        field: f64,
        #[arg(long)]
        n: usize,
    },
    /// Single qubit with a given Bloch vector under H = h Z.
    #[command(allow_negative_numbers = true)]
    SingleQubit {
        /// Bloch vector as `x,y,z`.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        bloch: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        field: f64,
    },
}

fn open_out(path: &Path) -> Result<Box<dyn Write>, Error> {
    if path.as_os_str() == "-" {
        Ok(Box::new(BufWriter::new(io::stdout().lock())))
    } else {
        Ok(Box::new(BufWriter::new(
            File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
        )))
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn print_lines(lines: &[String]) {
    for l in lines {
        println!("{l}");
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Sweep2q {
            h,
            g_min,
            g_max,
            steps,
            out,
            report_cusps,
        } => {
            let rows = sweep_2q(h, g_min, g_max, steps)?;
            info!("computed {} sweep rows at h = {h}", rows.len());
            let mut w = open_out(&out)?;
            write_sweep_csv(&mut w, &rows)?;
            w.flush()?;
            if report_cusps {
                let xs = grid(g_min, g_max, steps)?;
                let cusps = find_cusps(&|g| clifford_ergotropy_tt(g, h), &xs, 1e-7, 0.1)?;
                let list: Vec<String> = cusps.iter().map(|c| format!("{c}")).collect();
                eprintln!("cusps={}", list.join(","));
            }
        }
        Command::Typicality {
            n,
            samples,
            seed,
            a,
            g,
            out,
        } => {
            let cfg = TypicalityConfig { n, samples, seed, a, g };
            let (rows, summary) = typicality(&cfg)?;
            let mut w = open_out(&out)?;
            write_typicality_csv(&mut w, &rows)?;
            w.flush()?;
            if out.as_os_str() == "-" {
                eprintln!("# {summary}");
            } else {
                println!("{summary}");
            }
        }
        Command::Bounds {
            state,
            hamiltonian,
            exact_n_limit,
            heuristic_budget,
            seed,
            maximize,
        } => {
            let psi = PureState::from_text(&read(&state)?)?;
            let ham = PauliOperator::from_text(&read(&hamiltonian)?)?;
            let budget: HeuristicBudget = heuristic_budget.parse()?;
            let opts = BoundsOptions {
                exact_n_limit,
                budget,
                seed,
                maximize,
            };
            print_lines(&bounds_for(&psi, &ham, &opts)?.lines());
        }
        Command::IsingBound { model, field, n } => {
            let model: IsingModel = model.parse()?;
            print_lines(&ising_bound(model, field, n)?.lines());
        }
        Command::SingleQubit { bloch, field } => {
            let b: [f64; 3] = bloch.try_into().map_err(|v: Vec<f64>| {
                Error::InvalidArgument(format!("Bloch vector needs 3 components, got {}", v.len()))
            })?;
            print_lines(&single_qubit(b, field)?.lines());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Internal(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
        Err(_) => ExitCode::from(3),
    }
}
