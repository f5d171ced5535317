use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use imcurve::certificate::{self, VerifyOptions};
use imcurve::pipeline::{self, CurveCertificate, PipelineOptions, Stage};
use imcurve::{plot, topology};

#[derive(Parser)]
#[command(
    name = "imcurve",
    version,
    about = "Certified imaginary plane curves with many real points"
)]
struct Cli {
    /// Worker threads for parallel certification (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct StageOpts {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Certify large censuses too (slow).
    #[arg(long)]
    deep_verify: bool,
    /// Isolating boxes are refined to width 2^-bits.
    #[arg(long, value_name = "BITS", default_value_t = imcurve::real_solve::DEFAULT_REFINE_BITS)]
    refine_width: i64,
}

impl StageOpts {
    fn pipeline(&self) -> PipelineOptions {
        PipelineOptions {
            seed: self.seed,
            deep_verify: self.deep_verify,
            refine_bits: self.refine_width,
            ..Default::default()
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Imaginary nodal cubic with nine real points.
    Seed {
        #[command(flatten)]
        opts: StageOpts,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Squaring: ramified after seed or patchwork, unramified after doubling.
    Square {
        input: PathBuf,
        #[command(flatten)]
        opts: StageOpts,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Conic frame and Cremona transformation of a squared curve.
    Cremona {
        input: PathBuf,
        #[command(flatten)]
        opts: StageOpts,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Four-chart patchwork with tangency constraints.
    Patchwork {
        input: PathBuf,
        #[command(flatten)]
        opts: StageOpts,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Real perturbation f*conj(f) - eps*h^2 with certified ovals.
    Perturb {
        input: PathBuf,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Re-check every claim of a certificate.
    Verify {
        input: PathBuf,
        #[arg(long)]
        deep_verify: bool,
    },
    /// Quotient invariants.
    Topology {
        #[command(subcommand)]
        cmd: TopologyCmd,
    },
    /// Whole construction.
    Pipeline {
        #[command(subcommand)]
        cmd: PipelineCmd,
    },
    /// SVG of the isolating boxes.
    Plot {
        input: PathBuf,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum TopologyCmd {
    Report {
        #[arg(long)]
        k: usize,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PipelineCmd {
    Run {
        #[arg(long, default_value_t = 1)]
        rounds: u32,
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[command(flatten)]
        opts: StageOpts,
        /// Output directory.
        #[arg(short = 'o', default_value = ".")]
        out: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Verify(String),
}

impl From<imcurve::Error> for Failure {
    fn from(e: imcurve::Error) -> Self {
        Failure::Verify(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn write_out(out: &Option<PathBuf>, text: &str) -> Outcome {
    match out {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<CurveCertificate, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let (cert, stored) = certificate::from_json(&text)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    if certificate::digest(&cert) != stored {
        return Err(Failure::Verify(format!(
            "{}: digest mismatch",
            path.display()
        )));
    }
    Ok(cert)
}

fn summary(c: &CurveCertificate) -> String {
    format!(
        "{}: degree {}, {} real points ({}), maximal {}, {} singular points",
        c.stage.name(),
        c.degree,
        c.census.count,
        c.census_status.name(),
        c.maximal,
        c.singularities.len()
    )
}

fn emit(c: &CurveCertificate, out: &Option<PathBuf>) -> Outcome {
    eprintln!("{}", summary(c));
    write_out(out, &certificate::to_json(c))
}

fn cmd_verify(input: &Path, deep: bool) -> Outcome {
    let text = std::fs::read_to_string(input)
        .map_err(|e| Failure::Usage(format!("{}: {e}", input.display())))?;
    let (_, rep) = certificate::verify_json(&text, &VerifyOptions { deep })
        .map_err(|e| Failure::Usage(format!("{}: {e}", input.display())))?;
    for (c, t) in rep.checks.iter().zip(&rep.timings) {
        let v = if c.passed { "pass" } else { "FAIL" };
        println!("[{v}] {}: {} ({:.3} s)", c.name, c.detail, t.as_secs_f64());
    }
    if rep.passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = rep
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        Err(Failure::Verify(format!(
            "verification failed: {}",
            failed.join(", ")
        )))
    }
}

fn cmd_pipeline(rounds: u32, n: u32, opts: &PipelineOptions, dir: &Path) -> Outcome {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
    let chain = pipeline::run_pipeline(rounds, n, opts)?;
    for (i, c) in chain.iter().enumerate() {
        let p = dir.join(format!("{i:02}-{}.cert", c.stage.name()));
        std::fs::write(&p, certificate::to_json(c))
            .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
        println!("{}  {}", p.display(), summary(c));
    }
    let degrees: Vec<String> = chain.iter().map(|c| c.degree.to_string()).collect();
    println!("degrees: {}", degrees.join(", "));
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.cmd {
        Cmd::Seed { opts, out } => emit(&pipeline::seed_nodal_cubic(opts.seed)?, &out),
        Cmd::Square { input, opts, out } => {
            let parent = load(&input)?;
            let o = opts.pipeline();
            let c = match parent.stage {
                Stage::Seed => pipeline::square_stage(&parent, &o)?,
                Stage::Patchworked => pipeline::double_stage(&parent, &o)?,
                _ => pipeline::n_round(&parent, &o)?,
            };
            emit(&c, &out)
        }
        Cmd::Cremona { input, opts, out } => emit(
            &pipeline::cremona_stage(&load(&input)?, &opts.pipeline())?,
            &out,
        ),
        Cmd::Patchwork { input, opts, out } => emit(
            &pipeline::patchwork_stage(&load(&input)?, &opts.pipeline())?,
            &out,
        ),
        Cmd::Perturb { input, out } => emit(&pipeline::perturb_stage(&load(&input)?)?, &out),
        Cmd::Verify { input, deep_verify } => cmd_verify(&input, deep_verify),
        Cmd::Topology {
            cmd: TopologyCmd::Report { k, out },
        } => {
            let r = topology::spin_report(k).map_err(|e| Failure::Usage(e.to_string()))?;
            println!("{r}");
            match out {
                Some(_) => write_out(&out, &format!("{:#}\n", r.to_value())),
                None => Ok(()),
            }
        }
        Cmd::Pipeline {
            cmd:
                PipelineCmd::Run {
                    rounds,
                    n,
                    opts,
                    out,
                },
        } => cmd_pipeline(rounds, n, &opts.pipeline(), &out),
        Cmd::Plot { input, out } => {
            let c = load(&input)?;
            let svg = plot::svg(&c);
            eprintln!("{} boxes plotted", plot::box_count(&svg));
            write_out(&out, &svg)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(j) = cli.jobs {
        if j == 0
            || rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build_global()
                .is_err()
        {
            eprintln!("error: invalid --jobs {j}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Verify(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
