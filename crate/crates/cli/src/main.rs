//! `detpf` command-line front end.

mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use detpf::constructions::{self, ResolutionShape};
use detpf::dominance::{self, DominanceCertificate, DominanceConfig, FormulaTable};
use detpf::graded::{self, PointSet, SmoothnessConfig};
use detpf::mpoly::{parse_form, parse_forms};
use detpf::polymat::{parse_graded_matrix, verify_representation, PolyConfig, RepresentationKind};
use detpf::{seeds, Field, GradedMatrix};

#[derive(Parser, Debug)]
#[command(name = "detpf", version, about = "Determinantal and pfaffian representations over prime fields")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Odd prime below 2^31 for all computations.
    #[arg(long, global = true, env = "DETPF_PRIME", default_value_t = 31991)]
    prime: u64,
    /// Root seed for every random draw.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Independent samples per dominance question.
    #[arg(long, global = true, default_value_t = 3)]
    retries: usize,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "DETPF_THREADS")]
    threads: Option<usize>,
    /// Largest certificate degree for `smooth`, largest degree for `gorenstein`.
    #[arg(long, global = true, default_value_t = 40)]
    max_cert_degree: i32,
    /// Cap on interpolation sample points.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    max_points: usize,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify dominance of the linear pfaffian map for one (ambient, degree).
    Dominance {
        #[arg(long)]
        ambient: usize,
        #[arg(long)]
        degree: usize,
        /// Exit with status 1 unless the verdict is Dominant.
        #[arg(long)]
        expect_dominant: bool,
    },
    /// Dominance certificates for d = min-degree..=max-degree.
    DominanceSweep {
        #[arg(long)]
        ambient: usize,
        #[arg(long)]
        max_degree: usize,
        #[arg(long, default_value_t = 3)]
        min_degree: usize,
    },
    /// Largest d with dominance in every degree 3..=d, with the certificate trail.
    LowerBound {
        #[arg(long)]
        ambient: usize,
        /// Give up past this degree.
        #[arg(long, default_value_t = 40)]
        max_degree: usize,
    },
    /// Emit a constructed matrix in the matrix file format.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Check that det M (or pf M) is a nonzero multiple of a form.
    Verify {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        form: PathBuf,
        #[arg(long, value_parser = parse_kind)]
        kind: RepresentationKind,
    },
    /// Hilbert function of the cokernel of a matrix.
    Hilbert {
        #[arg(long)]
        matrix: PathBuf,
        /// Degree range `J0..J1`, inclusive.
        #[arg(long, value_parser = parse_range)]
        degrees: (i32, i32),
    },
    /// Hilbert-function symmetry and Cayley–Bacharach test for a point set.
    Gorenstein {
        #[arg(long)]
        points: PathBuf,
    },
    /// Smoothness certificate for a hypersurface.
    Smooth {
        #[arg(long)]
        form: PathBuf,
    },
    /// Closed-form dimensions, degrees and genera.
    Formulas {
        #[arg(long)]
        ambient: usize,
        #[arg(long)]
        degree: i64,
    },
}

#[derive(Subcommand, Debug)]
enum ConstructKind {
    /// Determinantal Fermat curve (ambient 2) or surface (ambient 3).
    Fermat {
        #[arg(long)]
        ambient: usize,
        #[arg(long)]
        degree: u32,
        /// Also write the represented form here.
        #[arg(long)]
        target_out: Option<PathBuf>,
    },
    /// Cyclic matrix from a forms file holding F_1..F_l then G_1..G_l.
    Cyclic {
        #[arg(long)]
        forms: PathBuf,
    },
    /// Skew block matrix [[0, N], [-ᵗN, 0]].
    Block {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Random bordered symmetric matrix with determinant of degree d.
    ThetaShape {
        #[arg(long)]
        degree: u32,
    },
    /// Substitute X_i -> X_i^2 in every entry.
    Pullback {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Random matrix of a named shape.
    Random {
        #[arg(long, value_enum)]
        shape: ShapeName,
        /// Matrix size (linear, symmetric, skew, quadratic).
        #[arg(long, default_value_t = 3)]
        size: usize,
        /// Curve degree (with-sections).
        #[arg(long, default_value_t = 4)]
        degree: usize,
        /// Number of sections h (with-sections).
        #[arg(long, default_value_t = 1)]
        sections: usize,
        #[arg(long, default_value_t = 3)]
        nvars: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ShapeName {
    Linear,
    Symmetric,
    Skew,
    Quadratic,
    WithSections,
}

fn parse_kind(s: &str) -> Result<RepresentationKind, String> {
    s.parse()
}

fn parse_range(s: &str) -> Result<(i32, i32), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected J0..J1, got `{s}`"))?;
    let a: i32 = a.trim().parse().map_err(|_| format!("invalid degree `{a}`"))?;
    let b: i32 = b.trim().parse().map_err(|_| format!("invalid degree `{b}`"))?;
    if a > b {
        return Err(format!("empty range `{s}`"));
    }
    Ok((a, b))
}

/// Input problems exit with 2, failed verifications with 1.
enum Failure {
    Input(anyhow::Error),
    Compute(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        let input = e.chain().any(|c| {
            c.downcast_ref::<std::io::Error>().is_some()
                || matches!(
                    c.downcast_ref::<detpf::Error>(),
                    Some(
                        detpf::Error::Parse { .. }
                            | detpf::Error::InvalidPrime(_)
                            | detpf::Error::InvalidParameter(_)
                            | detpf::Error::UnsupportedAmbient(_)
                            | detpf::Error::CharDividesDegree { .. }
                    )
                )
        });
        if input {
            Failure::Input(e)
        } else {
            Failure::Compute(e)
        }
    }
}

impl From<detpf::Error> for Failure {
    fn from(e: detpf::Error) -> Self {
        anyhow::Error::new(e).into()
    }
}

struct Outcome {
    result: Value,
    csv: Option<String>,
    /// Raw text emitted as-is for every format (matrix files).
    raw: Option<String>,
    verified: bool,
}

impl Outcome {
    fn value(result: Value) -> Self {
        Outcome {
            result,
            csv: None,
            raw: None,
            verified: true,
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_matrix(path: &Path) -> anyhow::Result<GradedMatrix> {
    parse_graded_matrix(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn poly_config(run: &RunConfig) -> PolyConfig {
    let mut cfg = PolyConfig {
        seed: run.seed,
        ..PolyConfig::default()
    };
    cfg.interpolation.max_points = run.max_points;
    cfg
}

fn dominance_config(run: &RunConfig, field: Field) -> DominanceConfig {
    DominanceConfig {
        prime: field,
        seed: run.seed,
        retries: run.retries,
        sample_when_obstructed: true,
        poly: poly_config(run),
        ..DominanceConfig::default()
    }
}

fn certificates_csv(certs: &[DominanceCertificate]) -> String {
    let mut s = String::from(DominanceCertificate::CSV_HEADER);
    s.push('\n');
    for c in certs {
        s.push_str(&c.csv_row());
        s.push('\n');
    }
    s
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let run = &cli.run;
    let field = Field::new(run.prime)?;
    match &cli.command {
        Command::Dominance {
            ambient,
            degree,
            expect_dominant,
        } => {
            let cfg = dominance_config(run, field);
            let (ok, cert) = dominance::is_dominant(*ambient, *degree, &cfg)?;
            Ok(Outcome {
                result: to_value(&cert),
                csv: Some(certificates_csv(std::slice::from_ref(&cert))),
                raw: None,
                verified: ok || !expect_dominant,
            })
        }
        Command::DominanceSweep {
            ambient,
            max_degree,
            min_degree,
        } => {
            let cfg = dominance_config(run, field);
            let certs = dominance::sweep(*ambient, *min_degree..=*max_degree, &cfg)?;
            Ok(Outcome {
                result: to_value(&certs),
                csv: Some(certificates_csv(&certs)),
                raw: None,
                verified: true,
            })
        }
        Command::LowerBound { ambient, max_degree } => {
            let cfg = DominanceConfig {
                sample_when_obstructed: false,
                max_degree: *max_degree,
                ..dominance_config(run, field)
            };
            let lb = dominance::lower_bound_for_dominant_degree(*ambient, &cfg)?;
            Ok(Outcome {
                result: to_value(&lb),
                csv: Some(certificates_csv(&lb.trail)),
                raw: None,
                verified: true,
            })
        }
        Command::Construct { kind } => construct(run, field, kind),
        Command::Verify { matrix, form, kind } => {
            let m = load_matrix(matrix)?;
            let f = parse_form(&read(form)?).with_context(|| format!("in {}", form.display()))?;
            let v = verify_representation(&m, &f, *kind, &poly_config(run))?;
            Ok(Outcome {
                verified: v.ok,
                ..Outcome::value(to_value(&v))
            })
        }
        Command::Hilbert { matrix, degrees } => {
            let m = load_matrix(matrix)?;
            let table = graded::coker_hilbert_table(&m, degrees.0..=degrees.1)?;
            let mut csv = String::from("j,h\n");
            for (j, h) in &table {
                csv.push_str(&format!("{j},{h}\n"));
            }
            let rows: Vec<Value> = table.iter().map(|(j, h)| json!({"j": j, "h": h})).collect();
            Ok(Outcome {
                csv: Some(csv),
                ..Outcome::value(Value::Array(rows))
            })
        }
        Command::Gorenstein { points } => {
            let z = PointSet::parse(&read(points)?).with_context(|| format!("in {}", points.display()))?;
            let report = graded::gorenstein_check(&z, run.max_cert_degree)?;
            let mut v = to_value(&report);
            v["passes"] = json!(report.passes());
            Ok(Outcome::value(v))
        }
        Command::Smooth { form } => {
            let f = parse_form(&read(form)?).with_context(|| format!("in {}", form.display()))?;
            let cfg = SmoothnessConfig {
                max_degree: run.max_cert_degree,
                ..SmoothnessConfig::default()
            };
            Ok(Outcome::value(to_value(&graded::smoothness_certificate(&f, &cfg)?)))
        }
        Command::Formulas { ambient, degree } => {
            if *degree < 1 {
                return Err(Failure::Input(anyhow!("--degree must be at least 1")));
            }
            let t = FormulaTable::new(*ambient, *degree);
            let csv = format!(
                "ambient,degree,moduli_dim,linsys_dim,curve_degree,curve_genus,gorenstein_degree,plane_genus\n{},{},{},{},{},{},{},{}\n",
                t.ambient, t.degree, t.moduli_dim, t.linsys_dim, t.curve_degree, t.curve_genus, t.gorenstein_degree, t.plane_genus
            );
            Ok(Outcome {
                csv: Some(csv),
                ..Outcome::value(to_value(&t))
            })
        }
    }
}

fn construct(run: &RunConfig, field: Field, kind: &ConstructKind) -> Result<Outcome, Failure> {
    let mut rng = seeds::rng(run.seed, &[0xc0_457]);
    let matrix = match kind {
        ConstructKind::Fermat {
            ambient,
            degree,
            target_out,
        } => {
            let fm = constructions::fermat_matrix(field, *ambient, *degree)?;
            if let Some(path) = target_out {
                fs::write(path, fm.target.to_text())
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            fm.matrix
        }
        ConstructKind::Cyclic { forms } => {
            let all = parse_forms(&read(forms)?).with_context(|| format!("in {}", forms.display()))?;
            if all.len() % 2 == 1 {
                return Err(Failure::Input(anyhow!(
                    "{}: expected an even number of forms, found {}",
                    forms.display(),
                    all.len()
                )));
            }
            let (f, g) = all.split_at(all.len() / 2);
            constructions::cyclic_matrix(f, g)?
        }
        ConstructKind::Block { matrix } => constructions::block_skew_from(&load_matrix(matrix)?)?,
        ConstructKind::ThetaShape { degree } => constructions::theta_shape_random(field, *degree, &mut rng)?,
        ConstructKind::Pullback { matrix } => constructions::pullback_squares(&load_matrix(matrix)?)?,
        ConstructKind::Random {
            shape,
            size,
            degree,
            sections,
            nvars,
        } => {
            let shape = match shape {
                ShapeName::Linear => ResolutionShape::linear(*size),
                ShapeName::Symmetric => ResolutionShape::symmetric_linear(*size),
                ShapeName::Skew => ResolutionShape::skew_linear(*size),
                ShapeName::Quadratic => ResolutionShape::quadratic(*size),
                ShapeName::WithSections => ResolutionShape::with_sections(*degree, *sections)?,
            };
            if *nvars == 0 {
                return Err(Failure::Input(anyhow!("--nvars must be positive")));
            }
            constructions::random_graded_matrix(field, *nvars, &shape, &mut rng)?
        }
    };
    let summary = json!({
        "rows": matrix.nrows(),
        "cols": matrix.ncols(),
        "nvars": matrix.nvars(),
        "symmetry": matrix.symmetry(),
        "row_twists": matrix.row_twists(),
        "col_twists": matrix.col_twists(),
        "det_degree": matrix.det_degree(),
    });
    Ok(Outcome {
        raw: Some(matrix.to_text()),
        ..Outcome::value(summary)
    })
}

fn emit(run: &RunConfig, text: &str) -> anyhow::Result<()> {
    match &run.output {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn config_value(run: &RunConfig) -> Value {
    json!({
        "prime": run.prime,
        "seed": run.seed,
        "retries": run.retries,
        "threads": run.threads,
        "max_cert_degree": run.max_cert_degree,
        "max_points": run.max_points,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.run.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let text = if let Some(raw) = &outcome.raw {
        raw.clone()
    } else {
        let envelope = json!({
            "toolkit_version": detpf::TOOLKIT_VERSION,
            "config": config_value(&cli.run),
            "result": outcome.result,
        });
        match cli.run.format {
            Format::Json => format!("{}\n", serde_json::to_string_pretty(&envelope).expect("json")),
            Format::Text => render::text(&envelope),
            Format::Csv => match &outcome.csv {
                Some(csv) => csv.clone(),
                None => {
                    eprintln!("error: --format csv is not available for this subcommand");
                    return ExitCode::from(2);
                }
            },
        }
    };
    if let Err(e) = emit(&cli.run, &text) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if outcome.verified {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
