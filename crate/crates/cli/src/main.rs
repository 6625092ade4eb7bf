//! Command-line front end: build finite sections, extract spectra, run the
//! circulant reconstruction, and test spectral distributions and
//! essential-range membership. All outputs are flat CSV/JSON files and are
//! byte-identical across runs for identical flags.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex;

use sectra::io;
use sectra::matrices::{eigen_decompose, singular_values, ToeplitzMatrix};
use sectra::reconstruct::{reconstruct_direct, reconstruct_peeled};
use sectra::sections::{
    chebyshev1_section_oversampled, chebyshev2_section_oversampled, general_section_oversampled,
    untransform, FiniteSection, SectionConvention,
};
use sectra::spectral::{
    distribution_compare, range_membership, SpectralSample, TestFunction,
    DEFAULT_MEMBER_THRESHOLD, DEFAULT_QUAD_POINTS,
};
use sectra::symbols::{
    MultiplierSpec, WeightSpec, DEFAULT_OVERSAMPLE,
};
use sectra::Error;

#[derive(Parser)]
#[command(
    name = "sectra",
    about = "Finite sections of multiplication operators: build, diagonalize, reconstruct",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SectionArgs {
    /// Multiplier expression in x (or x1..x9 for several variables); block
    /// multipliers list p*q entries separated by ';' in row-major order
    #[arg(long)]
    phi: String,

    /// Weight: cheb1, cheb2, or custom:<expression in x>
    #[arg(long, default_value = "cheb1")]
    weight: String,

    /// Matrix order, one entry per variable, e.g. 32 or 16,16
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,

    /// Block dimensions p,q for matrix-valued multipliers
    #[arg(long, value_delimiter = ',')]
    block: Option<Vec<usize>>,

    /// Quadrature oversampling for Fourier coefficients
    #[arg(long, default_value_t = DEFAULT_OVERSAMPLE)]
    oversample: usize,

    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Build a finite section; writes section.csv and section.json
    Section(SectionArgs),

    /// Eigen- or singular-value sample of a section; writes spectrum.csv
    Spectrum {
        #[command(flatten)]
        section: SectionArgs,
        /// auto picks eigenvalues for Hermitian sections, singular values otherwise
        #[arg(long, default_value = "auto")]
        kind: String,
    },

    /// Reconstruct the multiplier from a section; writes reconstruction.csv
    /// and reconstruction_summary.json
    Reconstruct {
        #[command(flatten)]
        section: SectionArgs,
        /// 1 = optimal circulant of the full section, 2 = Hankel peel first
        #[arg(long, default_value_t = 1)]
        algorithm: u8,
    },

    /// Compare a spectral mean against the symbol integral; writes disttest.json
    Disttest {
        /// Built-in symbol (2-2cos, pi-cos, exp-is) tested on its Toeplitz matrix
        #[arg(long)]
        symbol: Option<String>,
        #[arg(long)]
        phi: Option<String>,
        #[arg(long, default_value = "cheb1")]
        weight: String,
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        /// Test function: t, t2, or indicator:<a>,<b>
        #[arg(long = "F", default_value = "t")]
        f: String,
        #[arg(long, default_value_t = DEFAULT_QUAD_POINTS)]
        quad_points: usize,
        #[arg(long, default_value_t = DEFAULT_OVERSAMPLE)]
        oversample: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },

    /// Membership test of a point against the circulant spectrum of a
    /// section; writes rangetest.json
    Rangetest {
        #[command(flatten)]
        section: SectionArgs,
        /// Complex test point as re,im
        #[arg(long, value_delimiter = ',')]
        point: Vec<f64>,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = DEFAULT_MEMBER_THRESHOLD)]
        threshold: f64,
    },
}

fn parse_multiplier(src: &str, dims: usize, block: Option<&[usize]>) -> Result<MultiplierSpec, Error> {
    let block = match block {
        None => None,
        Some([p, q]) => Some((*p, *q)),
        Some(other) => {
            return Err(Error::Domain(format!("--block expects p,q, got {other:?}")))
        }
    };
    sectra::expr::multiplier_from_expr(src, dims, block)
}

fn build_section(args: &SectionArgs) -> Result<FiniteSection, Error> {
    if args.n.is_empty() {
        return Err(Error::Domain("--n needs at least one entry".into()));
    }
    let dims = args.n.len();
    let phi = parse_multiplier(&args.phi, dims, args.block.as_deref())?;
    match args.weight.as_str() {
        "cheb1" => chebyshev1_section_oversampled(&phi, &args.n, args.oversample),
        "cheb2" => {
            if dims != 1 {
                return Err(Error::Unsupported(
                    "cheb2 sections are univariate".into(),
                ));
            }
            chebyshev2_section_oversampled(&phi, args.n[0], args.oversample)
        }
        other => {
            let weight = sectra::expr::weight_from_spec(other)?;
            if dims != 1 {
                return Err(Error::Unsupported(
                    "custom-weight sections are univariate".into(),
                ));
            }
            general_section_oversampled(&phi, &weight, args.n[0], args.oversample)
        }
    }
}

fn write_file(path: &Path, body: impl FnOnce(&mut dyn Write) -> Result<(), Error>) -> Result<(), Error> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    body(&mut w)?;
    w.flush()?;
    Ok(())
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn cmd_section(args: &SectionArgs) -> Result<(), Error> {
    let section = build_section(args)?;
    std::fs::create_dir_all(&args.out)?;
    let matrix = io::realified(section.matrix(), 1e-12);
    write_file(&args.out.join("section.csv"), |w| {
        io::write_dense_csv(&matrix, w)
    })?;
    write_json(
        &args.out.join("section.json"),
        &io::section_sidecar_json(&section),
    )?;
    println!(
        "section {}x{} written to {}",
        matrix.nrows(),
        matrix.ncols(),
        args.out.display()
    );
    Ok(())
}

fn section_sample(section: &FiniteSection, kind: &str) -> Result<SpectralSample, Error> {
    let m = section.matrix();
    let hermitian = (m - m.adjoint()).norm() <= 1e-10 * m.norm().max(f64::MIN_POSITIVE);
    match kind {
        "eigen" => eigen_decompose(m, false),
        "singular" => singular_values(m),
        "auto" => {
            if hermitian && m.nrows() == m.ncols() {
                eigen_decompose(m, true)
            } else {
                singular_values(m)
            }
        }
        other => Err(Error::Domain(format!(
            "unknown kind {other:?}; expected auto, eigen or singular"
        ))),
    }
}

fn cmd_spectrum(args: &SectionArgs, kind: &str) -> Result<(), Error> {
    let section = build_section(args)?;
    let sample = section_sample(&section, kind)?;
    std::fs::create_dir_all(&args.out)?;
    write_file(&args.out.join("spectrum.csv"), |w| {
        io::write_sample_csv(&sample, w)
    })?;
    println!(
        "{} values written to {}",
        sample.len(),
        args.out.join("spectrum.csv").display()
    );
    Ok(())
}

fn cmd_reconstruct(args: &SectionArgs, algorithm: u8) -> Result<(), Error> {
    let section = build_section(args)?;
    let result = match algorithm {
        1 => reconstruct_direct(&section)?,
        2 => reconstruct_peeled(&section)?,
        other => {
            return Err(Error::Domain(format!(
                "--algorithm must be 1 or 2, got {other}"
            )))
        }
    };
    let dims = args.n.len();
    let phi = parse_multiplier(&args.phi, dims, args.block.as_deref())?;
    let result = if phi.block_dims() == (1, 1) {
        result.with_reference(&phi)
    } else {
        result
    };
    std::fs::create_dir_all(&args.out)?;
    write_file(&args.out.join("reconstruction.csv"), |w| {
        io::write_reconstruction_csv(&result, w)
    })?;
    write_json(
        &args.out.join("reconstruction_summary.json"),
        &io::reconstruction_summary_json(&result),
    )?;
    match result.max_residual() {
        Some(r) => println!("max residual {r:.6e} over {} grid points", result.grid().len()),
        None => println!("reconstructed {} grid points", result.grid().len()),
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_disttest(
    symbol: Option<&str>,
    phi: Option<&str>,
    weight: &str,
    n: &[usize],
    f_spec: &str,
    quad_points: usize,
    oversample: usize,
    out: &Path,
) -> Result<(), Error> {
    let f = TestFunction::from_spec(f_spec)?;
    let report = match (symbol, phi) {
        (Some(name), None) => {
            if n.len() != 1 {
                return Err(Error::Unsupported(
                    "built-in disttest symbols are univariate".into(),
                ));
            }
            let (sym, real) = sectra::symbols::builtin_symbol(name, n[0])?;
            let table = sectra::symbols::fourier_coefficients(&sym, n, oversample, false)?;
            let t = ToeplitzMatrix::new(table, n.to_vec())?;
            let sample = if real {
                eigen_decompose(&t.dense()?, true)?
            } else {
                singular_values(&t.dense()?)?
            };
            distribution_compare(&sample, &sym, &f, quad_points)?
        }
        (None, Some(phi_src)) => {
            let args = SectionArgs {
                phi: phi_src.to_string(),
                weight: weight.to_string(),
                n: n.to_vec(),
                block: None,
                oversample,
                out: out.to_path_buf(),
            };
            let section = build_section(&args)?;
            let sample = section_sample(&section, "auto")?;
            // the section distributes as the plain pullback π^d φ(cos s)
            let dims = n.len();
            let phi_spec = parse_multiplier(phi_src, dims, None)?;
            let (sym, _) = sectra::symbols::pullback_multiplier(
                &phi_spec,
                &WeightSpec::chebyshev1(dims),
            )?;
            distribution_compare(&sample, &sym, &f, quad_points)?
        }
        _ => {
            return Err(Error::Domain(
                "disttest needs exactly one of --symbol or --phi".into(),
            ))
        }
    };
    std::fs::create_dir_all(out)?;
    write_json(&out.join("disttest.json"), &io::distribution_report_json(&report))?;
    println!(
        "empirical {:.6} vs integral {:.6} (abs error {:.3e})",
        report.empirical_mean.re, report.integral_value.re, report.abs_error
    );
    Ok(())
}

fn cmd_rangetest(args: &SectionArgs, point: &[f64], eps: f64, threshold: f64) -> Result<(), Error> {
    if point.len() != 2 {
        return Err(Error::Domain("--point expects re,im".into()));
    }
    let section = build_section(args)?;
    let x = match section.convention() {
        SectionConvention::Orthonormal => untransform(&section)?,
        SectionConvention::Unnormalized => section.matrix().clone(),
    };
    let circ = sectra::circulants::optimal_circulant_dense(&x, section.order(), (1, 1))?;
    let sample = circ.eigenvalues()?;
    let report = range_membership(&sample, Complex::new(point[0], point[1]), eps, threshold)?;
    std::fs::create_dir_all(&args.out)?;
    write_json(&args.out.join("rangetest.json"), &io::range_report_json(&report))?;
    println!(
        "fraction inside {:.4} -> {}",
        report.fraction_inside,
        match report.verdict {
            sectra::spectral::RangeVerdict::MemberWithinEps => "member_within_eps",
            sectra::spectral::RangeVerdict::Excluded => "excluded",
            sectra::spectral::RangeVerdict::Inconclusive => "inconclusive",
        }
    );
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match &cli.command {
        Command::Section(args) => cmd_section(args),
        Command::Spectrum { section, kind } => cmd_spectrum(section, kind),
        Command::Reconstruct { section, algorithm } => cmd_reconstruct(section, *algorithm),
        Command::Disttest {
            symbol,
            phi,
            weight,
            n,
            f,
            quad_points,
            oversample,
            out,
        } => cmd_disttest(
            symbol.as_deref(),
            phi.as_deref(),
            weight,
            n,
            f,
            *quad_points,
            *oversample,
            out,
        ),
        Command::Rangetest {
            section,
            point,
            eps,
            threshold,
        } => cmd_rangetest(section, point, *eps, *threshold),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Domain(_) | Error::Parse { .. } | Error::Unsupported(_) => {
                    ExitCode::from(2)
                }
                _ => ExitCode::from(3),
            }
        }
    }
}
