//! `lens-ech`: exact ECH capacities and embedded contact complexes of
//! concave toric domains in M(n,m) from the command line.
//!
//! Exit codes: 0 on success, 1 when a cross-check finds a disagreement,
//! 2 for malformed input or exceeded bounds.

mod emit;
mod error;
mod svg;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lens_ech::complex::{capacities_by_filtration, ComplexSlice, DecoratedPath, Generator};
use lens_ech::domain::decode_domain;
use lens_ech::index::{
    ellipsoid_generator_components, ellipsoid_rotation_numbers, fredholm_index, index_components, partitions,
    OrbitKind, RotationData, Tilt,
};
use lens_ech::packing::{packing_capacities, verify_packing, weight_expansion};
use lens_ech::paths::capacities_by_paths;
use lens_ech::rational::{format_rational, parse_rational};
use lens_ech::spectrum::spectrum;
use lens_ech::{ConeFrame, DomainBoundary, IntVec2, Rational};
use serde_json::json;

use emit::{Format, Table};
use error::{check_bound, CliError, EXIT_INPUT, EXIT_SUCCESS, EXIT_VERIFICATION};

const MAX_KMAX: usize = 10;
const MAX_IMAX: usize = 14;
const MAX_SPECTRUM_COUNT: usize = 100_000;

#[derive(Debug, Parser)]
#[command(name = "lens-ech", version, about = "Exact ECH capacities of concave toric domains in M(n,m)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Capacity spectrum of the singular ellipsoid E_{n,m}(a,b).
    Ellipsoid {
        #[command(flatten)]
        frame: FrameArgs,
        #[arg(long, value_parser = rational_arg)]
        a: Rational,
        #[arg(long, value_parser = rational_arg)]
        b: Rational,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Capacities of a domain file by one method or all three.
    Capacities {
        #[arg(long)]
        domain: PathBuf,
        /// Number of capacities c_0, ..., c_{count-1}.
        #[arg(long, default_value_t = 6)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Method::Paths)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Weight expansion of a domain file.
    Weights {
        #[arg(long)]
        domain: PathBuf,
    },
    /// Compares packing capacities with path capacities for k <= kmax.
    VerifyPacking {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long, default_value_t = 8)]
        kmax: usize,
    },
    /// The combinatorial complex up to index imax.
    Complex(ComplexArgs),
    /// Index computations on single orbits and orbit sets.
    IndexLab {
        #[command(subcommand)]
        lab: Lab,
    },
    /// SVG picture of a domain with optional decorated paths.
    Render {
        #[arg(long)]
        domain: PathBuf,
        /// Decorated path `x,y;x,y;...:labels`; may be repeated.
        #[arg(long = "path")]
        paths: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Args)]
struct FrameArgs {
    #[arg(long)]
    n: i64,
    #[arg(long)]
    m: i64,
}

impl FrameArgs {
    fn frame(&self) -> Result<ConeFrame, CliError> {
        Ok(ConeFrame::new(self.n, self.m)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Paths,
    Packing,
    Complex,
    All,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("mode").args(["list", "d2", "homology", "export"]))]
struct ComplexArgs {
    #[command(flatten)]
    frame: FrameArgs,
    #[arg(long, default_value_t = 8)]
    imax: usize,
    /// Generators by index (the default).
    #[arg(long)]
    list: bool,
    /// Nonzero entries of the squared differential; exits 1 if any.
    #[arg(long)]
    d2: bool,
    /// Homology ranks over the two-element field.
    #[arg(long)]
    homology: bool,
    /// Writes generators and boundary matrices as JSON.
    #[arg(long, value_name = "FILE")]
    export: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TiltArg {
    Negative,
    Zero,
    Positive,
}

impl From<TiltArg> for Tilt {
    fn from(t: TiltArg) -> Tilt {
        match t {
            TiltArg::Negative => Tilt::Negative,
            TiltArg::Zero => Tilt::Zero,
            TiltArg::Positive => Tilt::Positive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrbitArg {
    Elliptic,
    PositiveHyperbolic,
    NegativeHyperbolic,
}

#[derive(Debug, Subcommand)]
enum Lab {
    /// Partition conditions (P+, P-) for the given number of covers.
    Partitions {
        #[arg(long, value_enum, default_value_t = OrbitArg::Elliptic)]
        kind: OrbitArg,
        /// Rotation number, required for elliptic orbits.
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        theta: Option<Rational>,
        #[arg(long, value_enum, default_value_t = TiltArg::Zero)]
        tilt: TiltArg,
        #[arg(long)]
        covers: i64,
    },
    /// Fredholm index -2 + 2g + 2e + h + 2c of a curve.
    Fredholm {
        #[arg(long, default_value_t = 0)]
        genus: u32,
        #[arg(long, default_value_t = 0)]
        elliptic_ends: u32,
        #[arg(long, default_value_t = 0)]
        hyperbolic_ends: u32,
        #[arg(long)]
        chern: u32,
    },
    /// Rotation numbers of the special orbits of E_{n,m}(a, b + tilt).
    Rotation {
        #[command(flatten)]
        frame: FrameArgs,
        #[arg(long, value_parser = rational_arg)]
        a: Rational,
        #[arg(long, value_parser = rational_arg)]
        b: Rational,
        #[arg(long, value_enum, default_value_t = TiltArg::Positive)]
        tilt: TiltArg,
        /// Trivialization vector `x,y`; defaults to the canonical one.
        #[arg(long, value_parser = vector_arg, allow_hyphen_values = true)]
        v: Option<IntVec2>,
    },
    /// Chern, self-intersection and Conley-Zehnder terms of a generator or
    /// of the ellipsoid orbit set e+^r e-^s.
    Components {
        #[command(flatten)]
        frame: FrameArgs,
        /// Decorated path `x,y;x,y;...:labels`.
        #[arg(long, conflicts_with = "ellipsoid")]
        generator: Option<String>,
        /// Covers `r,s` of the special orbits.
        #[arg(long, value_parser = vector_arg, requires_all = ["a", "b"])]
        ellipsoid: Option<IntVec2>,
        #[arg(long, value_parser = rational_arg)]
        a: Option<Rational>,
        #[arg(long, value_parser = rational_arg)]
        b: Option<Rational>,
        #[arg(long, value_enum, default_value_t = TiltArg::Positive)]
        tilt: TiltArg,
        #[arg(long, value_parser = vector_arg, allow_hyphen_values = true)]
        v: Option<IntVec2>,
    },
}

fn rational_arg(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

fn vector_arg(text: &str) -> Result<IntVec2, String> {
    let (x, y) = text.split_once(',').ok_or_else(|| format!("expected `x,y`, got `{text}`"))?;
    let parse = |s: &str| s.trim().parse::<i64>().map_err(|e| format!("`{s}`: {e}"));
    Ok(IntVec2::new(parse(x)?, parse(y)?))
}

/// Text for stdout and whether every cross-check agreed.
struct Report {
    stdout: String,
    verified: bool,
}

impl Report {
    fn ok(stdout: String) -> Self {
        Report { stdout, verified: true }
    }
}

fn read_domain(path: &Path) -> Result<DomainBoundary, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    decode_domain(&text).map_err(|source| CliError::Domain { path: path.to_path_buf(), source })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

fn run(cli: Cli) -> Result<Report, CliError> {
    match cli.command {
        Command::Ellipsoid { frame, a, b, count, format } => {
            check_bound("count", count, MAX_SPECTRUM_COUNT)?;
            let seq = spectrum(frame.frame()?, &a, &b, count)?;
            Ok(Report::ok(Table::capacities(&seq).render(format)))
        }
        Command::Capacities { domain, count, method, format } => {
            check_bound("count", count, MAX_KMAX + 1)?;
            capacities(&read_domain(&domain)?, count, method, format)
        }
        Command::Weights { domain } => {
            let w = weight_expansion(&read_domain(&domain)?)?;
            let doc = json!({
                "n": w.frame().n(),
                "m": w.frame().m(),
                "singular_weight": w.singular_weight().map(emit::rational),
                "classical_weights": w.classical_weights().iter().map(emit::rational).collect::<Vec<_>>(),
                "ball_area": emit::rational(&w.ball_area()),
            });
            Ok(Report::ok(emit::pretty(&doc)))
        }
        Command::VerifyPacking { domain, kmax } => {
            check_bound("kmax", kmax, MAX_KMAX)?;
            let report = verify_packing(&read_domain(&domain)?, kmax)?;
            let mut t = Table::new(["k", "packing", "paths", "agree"]);
            for (k, (p, q)) in report.packing.values().iter().zip(report.paths.values()).enumerate() {
                t.push(vec![k.to_string(), format_rational(p), format_rational(q), (p == q).to_string()]);
            }
            Ok(Report { stdout: t.to_csv(), verified: report.is_success() })
        }
        Command::Complex(args) => complex(args),
        Command::IndexLab { lab } => index_lab(lab),
        Command::Render { domain, paths, out } => {
            let d = read_domain(&domain)?;
            let decorated = paths
                .iter()
                .map(|p| DecoratedPath::parse(d.frame(), p))
                .collect::<Result<Vec<_>, _>>()?;
            write_file(&out, &svg::render(&d, &decorated))?;
            Ok(Report::ok(String::new()))
        }
    }
}

fn capacities(d: &DomainBoundary, count: usize, method: Method, format: Format) -> Result<Report, CliError> {
    let k_max = count.saturating_sub(1);
    let by_complex = || capacities_by_filtration(d, k_max).map(|s| s.truncated(count));
    match method {
        Method::Paths => Ok(Report::ok(Table::capacities(&capacities_by_paths(d, count)?).render(format))),
        Method::Packing => Ok(Report::ok(Table::capacities(&packing_capacities(d, count)?).render(format))),
        Method::Complex => Ok(Report::ok(Table::capacities(&by_complex()?).render(format))),
        Method::All => {
            let mut columns = vec![("paths", capacities_by_paths(d, count)?)];
            if d.frame().m() <= 1 {
                columns.push(("packing", packing_capacities(d, count)?));
            }
            columns.push(("complex", by_complex()?));
            let mut t = Table::new(std::iter::once("k").chain(columns.iter().map(|(name, _)| *name)));
            let mut verified = true;
            for k in 0..count {
                let cells: Vec<&Rational> = columns.iter().map(|(_, s)| &s.values()[k]).collect();
                verified &= cells.windows(2).all(|w| w[0] == w[1]);
                t.push(std::iter::once(k.to_string()).chain(cells.into_iter().map(format_rational)).collect());
            }
            Ok(Report { stdout: t.render(format), verified })
        }
    }
}

fn complex(args: ComplexArgs) -> Result<Report, CliError> {
    check_bound("imax", args.imax, MAX_IMAX)?;
    let slice = ComplexSlice::build(args.frame.frame()?, args.imax)?;
    if let Some(path) = &args.export {
        write_file(path, &slice.export_json())?;
        return Ok(Report::ok(String::new()));
    }
    if args.d2 {
        let mut t = Table::new(["index", "defects"]);
        let defects = slice.d_squared_defects();
        for &(i, count) in &defects {
            t.push(vec![i.to_string(), count.to_string()]);
        }
        return Ok(Report { stdout: t.to_csv(), verified: defects.iter().all(|&(_, c)| c == 0) });
    }
    if args.homology {
        let mut t = Table::new(["index", "rank", "complete"]);
        for r in slice.homology_ranks() {
            t.push(vec![r.index.to_string(), r.rank.to_string(), r.complete.to_string()]);
        }
        return Ok(Report::ok(t.to_csv()));
    }
    let mut t = Table::new(["index", "generator"]);
    for i in 0..=args.imax {
        for g in slice.generators(i) {
            t.push(vec![i.to_string(), g.decorated().to_string()]);
        }
    }
    Ok(Report::ok(t.to_csv()))
}

fn trivialization(frame: ConeFrame, v: Option<IntVec2>) -> IntVec2 {
    v.unwrap_or_else(|| frame.trivialization())
}

fn index_lab(lab: Lab) -> Result<Report, CliError> {
    let doc = match lab {
        Lab::Partitions { kind, theta, tilt, covers } => {
            let kind = match kind {
                OrbitArg::PositiveHyperbolic => OrbitKind::PositiveHyperbolic,
                OrbitArg::NegativeHyperbolic => OrbitKind::NegativeHyperbolic,
                OrbitArg::Elliptic => {
                    let theta = theta.ok_or_else(|| CliError::Usage("elliptic orbits need --theta".into()))?;
                    OrbitKind::Elliptic(RotationData::tilted(theta, tilt.into()))
                }
            };
            let (plus, minus) = partitions(&kind, covers)?;
            json!({ "covers": covers, "plus": plus, "minus": minus })
        }
        Lab::Fredholm { genus, elliptic_ends, hyperbolic_ends, chern } => {
            json!({ "index": fredholm_index(genus, elliptic_ends, hyperbolic_ends, chern) })
        }
        Lab::Rotation { frame, a, b, tilt, v } => {
            let frame = frame.frame()?;
            let v = trivialization(frame, v);
            let (plus, minus) = ellipsoid_rotation_numbers(frame, &a, &b, tilt.into(), v)?;
            json!({
                "trivialization": [v.x, v.y],
                "phi_plus": emit::rotation(&plus),
                "phi_minus": emit::rotation(&minus),
            })
        }
        Lab::Components { frame, generator, ellipsoid, a, b, tilt, v } => {
            let frame = frame.frame()?;
            let v = trivialization(frame, v);
            let c = match (generator, ellipsoid, a, b) {
                (Some(text), None, _, _) => {
                    index_components(&Generator::new(DecoratedPath::parse(frame, &text)?), v)?
                }
                (None, Some(rs), Some(a), Some(b)) => {
                    ellipsoid_generator_components(frame, &a, &b, tilt.into(), rs.x, rs.y, v)?
                }
                _ => return Err(CliError::Usage("give --generator, or --ellipsoid with --a and --b".into())),
            };
            json!({ "trivialization": [v.x, v.y], "components": emit::components(&c) })
        }
    };
    Ok(Report::ok(emit::pretty(&doc)))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(report.stdout.as_bytes()).and_then(|()| stdout.flush()).is_err() {
                return ExitCode::from(EXIT_INPUT);
            }
            if report.verified {
                ExitCode::from(EXIT_SUCCESS)
            } else {
                eprintln!("lens-ech: verification failed");
                ExitCode::from(EXIT_VERIFICATION)
            }
        }
        Err(e) => {
            eprintln!("lens-ech: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
