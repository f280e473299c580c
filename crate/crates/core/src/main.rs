//! Thin command-line front end over the `ptband` library.

use clap::{Args, Parser, Subcommand};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use ptband::cli::{self, Command, OutputFormat, RunConfig};

#[derive(Parser)]
#[command(
    name = "ptband",
    about = "Complex band spectra of the PT-symmetric optical potential 4cos²x + 4iV·sin2x",
    long_about = "Computes periodic/antiperiodic eigenvalues, Bloch bands, real spectral \
components, spectral singularities and critical couplings of the PT-symmetric optical \
potential (equivalently the complex Mathieu operator). Output is deterministic JSON or CSV. \
Set RAYON_NUM_THREADS to bound internal parallelism."
)]
struct CliArgs {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Args)]
struct PotentialArgs {
    /// Optical gain/loss strength V ≥ 0 (exclusive with --a-imag)
    #[arg(long = "V", value_name = "V", allow_negative_numbers = true)]
    v: Option<f64>,
    /// Imaginary coupling: a = i·C (exclusive with --V)
    #[arg(long = "a-imag", value_name = "C", allow_negative_numbers = true)]
    a_imag: Option<f64>,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_parser = ["json", "csv"], default_value = "json")]
    format: String,
    /// Write the document here instead of stdout
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Periodic and antiperiodic eigenvalue tables with symmetry classes
    Spectrum {
        #[command(flatten)]
        potential: PotentialArgs,
        /// Fourier truncation order
        #[arg(long, default_value_t = 32)]
        order: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Bloch band polylines with real components and singularities
    Bands {
        #[command(flatten)]
        potential: PotentialArgs,
        /// Number of bands to trace
        #[arg(long = "n-max", default_value_t = 4)]
        n_max: usize,
        /// Uniform t-grid subintervals
        #[arg(long = "t-steps", default_value_t = 256)]
        t_steps: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Critical strength V_k with certified bracket
    Critical {
        /// Critical index k (1 = free threshold, 2 = degeneration point, …)
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Bracket width target in V
        #[arg(long, default_value_t = 2.5e-10)]
        tol: f64,
        /// Upper end of the strength search interval
        #[arg(long = "v-max", default_value_t = 4.0)]
        v_max: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Hill discriminant F(λ) on a real λ grid
    Discriminant {
        #[command(flatten)]
        potential: PotentialArgs,
        #[arg(long = "lambda-min", default_value_t = -5.0, allow_negative_numbers = true)]
        lambda_min: f64,
        #[arg(long = "lambda-max", default_value_t = 50.0, allow_negative_numbers = true)]
        lambda_max: f64,
        /// Grid size
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the property suite; exit code reflects the outcome
    Verify {
        #[command(flatten)]
        potential: PotentialArgs,
        /// Component pairs to verify
        #[arg(long = "n-max", default_value_t = 3)]
        n_max: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn parse_format(s: &str) -> OutputFormat {
    if s == "csv" {
        OutputFormat::Csv
    } else {
        OutputFormat::Json
    }
}

fn main() -> ExitCode {
    let args = CliArgs::parse();
    let mut config = RunConfig::default();
    let (output_path, is_verify) = match args.command {
        CliCommand::Spectrum {
            potential,
            order,
            output,
        } => {
            config.command = Command::Spectrum;
            config.v = potential.v;
            config.a_imag = potential.a_imag;
            config.trunc_order = order;
            config.format = parse_format(&output.format);
            (output.output, false)
        }
        CliCommand::Bands {
            potential,
            n_max,
            t_steps,
            output,
        } => {
            config.command = Command::Bands;
            config.v = potential.v;
            config.a_imag = potential.a_imag;
            config.n_max = n_max;
            config.t_steps = t_steps;
            config.format = parse_format(&output.format);
            (output.output, false)
        }
        CliCommand::Critical {
            k,
            tol,
            v_max,
            output,
        } => {
            config.command = Command::Critical;
            config.k = k;
            config.tol = tol;
            config.v_max = v_max;
            config.format = parse_format(&output.format);
            (output.output, false)
        }
        CliCommand::Discriminant {
            potential,
            lambda_min,
            lambda_max,
            samples,
            output,
        } => {
            config.command = Command::Discriminant;
            config.v = potential.v;
            config.a_imag = potential.a_imag;
            config.lambda_min = lambda_min;
            config.lambda_max = lambda_max;
            config.samples = samples;
            config.format = parse_format(&output.format);
            (output.output, false)
        }
        CliCommand::Verify {
            potential,
            n_max,
            output,
        } => {
            config.command = Command::Verify;
            config.v = potential.v;
            config.a_imag = potential.a_imag;
            config.n_max = n_max;
            config.format = parse_format(&output.format);
            (output.output, true)
        }
    };

    match cli::run(&config) {
        Ok(doc) => {
            let write_result = match &output_path {
                Some(path) => std::fs::write(path, &doc),
                None => std::io::stdout().write_all(doc.as_bytes()),
            };
            if let Err(e) = write_result {
                eprintln!("ptband: cannot write output: {e}");
                return ExitCode::from(4);
            }
            if is_verify && !cli::verify_passed(&doc) {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            let code = err.exit_code();
            println!(
                "{{\"error\":{},\"exit_code\":{code}}}",
                serde_json::to_string(&err.to_string()).unwrap_or_else(|_| "\"\"".into())
            );
            eprintln!("ptband: {err}");
            ExitCode::from(code as u8)
        }
    }
}
