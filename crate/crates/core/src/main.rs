use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use intrinsic_spin::crosscheck::{born_pipeline, oracle_pipeline, run_validation};
use intrinsic_spin::figures::output::{contours_csv, curves_csv, fmt_num, grid_csv, grid_json};
use intrinsic_spin::figures::{
    curve_fig2, map_fig1, map_fig34, map_fig5, Discrepancy, ProbabilityGrid, DEFAULT_DELTAS,
};
use intrinsic_spin::kinematics::{momentum_from_velocity, velocity_from_momentum};
use intrinsic_spin::measurement::{eigenpair, prob_eq4, Formula, Observable};
use intrinsic_spin::oracle::eigh2;
use intrinsic_spin::spin_ops::{sigma_op, v_op};
use intrinsic_spin::{Axis, Error, Momentum, Sign, Velocity};

#[derive(Parser)]
#[command(
    name = "intrinsic-spin",
    version,
    about = "Intrinsic relativistic spin observables and Stern-Gerlach probabilities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues and eigenstates of Σ^i or 𝒱^i at a momentum.
    Eigen {
        /// Dimensionless momentum p/(mc) as x,y,z.
        #[arg(long = "p", value_parser = parse_triple, allow_hyphen_values = true)]
        p: [f64; 3],
        #[arg(long, value_parser = parse_from_str::<Observable>)]
        observable: Observable,
        #[arg(long, value_parser = parse_from_str::<Axis>)]
        axis: Axis,
        #[arg(long)]
        json: bool,
    },
    /// Closed-form probability next to its Born-rule and oracle evaluations.
    #[command(group(ArgGroup::new("point").required(true).args(["p", "v"])))]
    Prob {
        #[arg(long, value_parser = parse_from_str::<Formula>)]
        formula: Formula,
        /// Dimensionless momentum p/(mc) as x,y,z.
        #[arg(long = "p", value_parser = parse_triple, allow_hyphen_values = true)]
        p: Option<[f64; 3]>,
        /// Dimensionless velocity v/c as x,y,z.
        #[arg(long = "v", value_parser = parse_triple, allow_hyphen_values = true)]
        v: Option<[f64; 3]>,
    },
    /// Sample a figure's probability or discrepancy map.
    Map {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        figure: u8,
        /// Discrepancy for figures 3 and 4 (defaults: eq5 for 3, eq6 for 4).
        #[arg(long, value_parser = parse_from_str::<Formula>)]
        formula: Option<Formula>,
        /// Fixed velocity norm for figures 3 and 4 (defaults: 0.8 and 0.5).
        #[arg(long)]
        vnorm: Option<f64>,
        /// Significance windows for the figure 1 contours.
        #[arg(long, value_delimiter = ',')]
        deltas: Option<Vec<f64>>,
        #[arg(long)]
        resolution: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Accepted for scripting symmetry; map output never depends on a seed.
        #[arg(long)]
        seed_independent: bool,
    },
    /// Significance boundary curves of figure 2.
    Curve {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=2))]
        figure: u8,
        #[arg(long, value_delimiter = ',')]
        deltas: Option<Vec<f64>>,
        #[arg(long)]
        resolution: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check every closed form against both independent routes.
    Validate {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got '{s}'"));
    }
    let mut out = [0.0; 3];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = part.parse().map_err(|e| format!("'{part}': {e}"))?;
    }
    Ok(out)
}

fn parse_from_str<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Eigen {
            p,
            observable,
            axis,
            json,
        } => eigen(p, observable, axis, json),
        Command::Prob { formula, p, v } => prob(formula, p, v),
        Command::Map {
            figure,
            formula,
            vnorm,
            deltas,
            resolution,
            out,
            format,
            seed_independent: _,
        } => map(figure, formula, vnorm, deltas, resolution, &out, format),
        Command::Curve {
            figure: _,
            deltas,
            resolution,
            out,
        } => curve(deltas, resolution, &out),
        Command::Validate { samples, seed } => Ok(validate(samples, seed)),
    }
}

fn eigen(
    p: [f64; 3],
    observable: Observable,
    axis: Axis,
    as_json: bool,
) -> Result<ExitCode, Error> {
    let p = Momentum::from_array(p)?;
    let op = match observable {
        Observable::Sigma => sigma_op(&p, axis),
        Observable::V => v_op(&p, axis),
    };
    let oracle = eigh2(&op)?;
    let pairs = [Sign::Plus, Sign::Minus].map(|s| eigenpair(observable, &p, axis, s));

    if as_json {
        let states: Vec<_> = pairs
            .iter()
            .map(|pair| {
                let a = pair.state.amplitudes();
                json!({
                    "eigenvalue": pair.value,
                    "unit": pair.unit.to_string(),
                    "degenerate": pair.degenerate,
                    "amplitudes_m3": [[a[0].re, a[0].im], [a[1].re, a[1].im]],
                })
            })
            .collect();
        let doc = json!({
            "momentum": p.components(),
            "observable": observable.to_string(),
            "axis": axis.to_string(),
            "eigenpairs": states,
            "oracle_eigenvalues": oracle.values,
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
        return Ok(ExitCode::SUCCESS);
    }

    println!(
        "observable {observable} axis {axis} p {}",
        fmt_triple(p.components())
    );
    for pair in &pairs {
        let a = pair.state.amplitudes();
        println!(
            "eigenvalue {} {}  state(m3=+1/2, m3=-1/2) = ({} + {}i, {} + {}i){}",
            fmt_num(pair.value),
            pair.unit,
            fmt_num(a[0].re),
            fmt_num(a[0].im),
            fmt_num(a[1].re),
            fmt_num(a[1].im),
            if pair.degenerate {
                "  [degenerate]"
            } else {
                ""
            }
        );
    }
    println!(
        "oracle eigenvalues {} {}",
        fmt_num(oracle.values[0]),
        fmt_num(oracle.values[1])
    );
    Ok(ExitCode::SUCCESS)
}

fn fmt_triple(x: [f64; 3]) -> String {
    format!("({}, {}, {})", fmt_num(x[0]), fmt_num(x[1]), fmt_num(x[2]))
}

fn prob(formula: Formula, p: Option<[f64; 3]>, v: Option<[f64; 3]>) -> Result<ExitCode, Error> {
    let (velocity, momentum) = match (p, v) {
        (Some(p), _) => {
            let p = Momentum::from_array(p)?;
            (velocity_from_momentum(&p), p)
        }
        (None, Some(v)) => {
            let v = Velocity::from_array(v)?;
            (v, momentum_from_velocity(&v))
        }
        (None, None) => return Err(Error::Usage("one of --p or --v is required".into())),
    };
    let closed = match formula {
        Formula::Eq4 => prob_eq4(&momentum),
        other => other.closed_form(&velocity)?,
    };
    println!("formula {formula}");
    println!("velocity {}", fmt_triple(velocity.components()));
    println!("momentum {}", fmt_triple(momentum.components()));
    println!("closed_form {}", fmt_num(closed));
    println!(
        "born_pipeline {}",
        fmt_num(born_pipeline(formula, &velocity)?)
    );
    println!("oracle {}", fmt_num(oracle_pipeline(formula, &velocity)?));
    Ok(ExitCode::SUCCESS)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Error> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, contents)?;
    Ok(())
}

fn summarize(grid: &ProbabilityGrid, out: &Path) {
    let finite = grid.values.iter().filter(|v| v.is_finite()).count();
    println!(
        "wrote {} ({}x{} samples, {} finite, max |value| {})",
        out.display(),
        grid.nx(),
        grid.ny(),
        finite,
        fmt_num(grid.max_abs_finite())
    );
}

fn map(
    figure: u8,
    formula: Option<Formula>,
    vnorm: Option<f64>,
    deltas: Option<Vec<f64>>,
    resolution: usize,
    out: &Path,
    format: Format,
) -> Result<ExitCode, Error> {
    match figure {
        1 => {
            let deltas = deltas.unwrap_or_else(|| DEFAULT_DELTAS.to_vec());
            let map = map_fig1(resolution, &deltas)?;
            match format {
                Format::Csv => {
                    write_file(out, &grid_csv(&map.grid))?;
                    let sidecar = out.with_extension("contours.csv");
                    write_file(
                        &sidecar,
                        &contours_csv(&map.contours, &map.grid.x.name, &map.grid.y.name),
                    )?;
                    println!("wrote {}", sidecar.display());
                }
                Format::Json => write_file(out, &grid_json(&map.grid, Some(&map.contours))?)?,
            }
            summarize(&map.grid, out);
        }
        3 | 4 => {
            let formula = formula.unwrap_or(if figure == 3 {
                Formula::Eq5
            } else {
                Formula::Eq6
            });
            let which = match formula {
                Formula::Eq5 => Discrepancy::Eq5,
                Formula::Eq6 => Discrepancy::Eq6,
                other => {
                    return Err(Error::Usage(format!(
                        "figures 3 and 4 plot eq5 or eq6, not {other}"
                    )))
                }
            };
            let vnorm = vnorm.unwrap_or(if figure == 3 { 0.8 } else { 0.5 });
            let grid = map_fig34(which, vnorm, resolution)?;
            emit_grid(&grid, out, format)?;
        }
        5 => {
            let grid = map_fig5(resolution)?;
            emit_grid(&grid, out, format)?;
        }
        other => {
            return Err(Error::Usage(format!(
                "figure {other} is a curve, use the curve subcommand"
            )))
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn emit_grid(grid: &ProbabilityGrid, out: &Path, format: Format) -> Result<(), Error> {
    match format {
        Format::Csv => write_file(out, &grid_csv(grid))?,
        Format::Json => write_file(out, &grid_json(grid, None)?)?,
    }
    summarize(grid, out);
    Ok(())
}

fn curve(deltas: Option<Vec<f64>>, resolution: usize, out: &Path) -> Result<ExitCode, Error> {
    let deltas = deltas.unwrap_or_else(|| DEFAULT_DELTAS.to_vec());
    let curves = curve_fig2(&deltas, resolution)?;
    write_file(out, &curves_csv(&curves))?;
    println!("wrote {}", out.display());
    for c in &curves {
        if c.is_empty() {
            eprintln!("warning: no boundary found for delta {}", fmt_num(c.delta));
        }
        println!(
            "delta {} samples {} min_vnorm {} at_v3 {} min_v3 {}",
            fmt_num(c.delta),
            c.samples.len(),
            fmt_num(c.min_vnorm),
            fmt_num(c.min_vnorm_at_v3),
            fmt_num(c.min_v3)
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn validate(samples: usize, seed: u64) -> ExitCode {
    let report = run_validation(samples, seed);
    for c in &report.checks {
        println!(
            "{} {}: max deviation {} (tolerance {}, {} samples)",
            if c.passed() { "PASS" } else { "FAIL" },
            c.name,
            fmt_num(c.max_deviation),
            fmt_num(c.tolerance),
            c.samples
        );
    }
    if report.passed() {
        println!("all {} checks passed", report.checks.len());
        ExitCode::SUCCESS
    } else {
        for c in report.failures() {
            eprintln!("failed check: {}", c.name);
        }
        ExitCode::from(1)
    }
}
