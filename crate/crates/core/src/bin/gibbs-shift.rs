use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use gibbs_shift::config::{read_jsonl, write_jsonl, MarkedConfiguration};
use gibbs_shift::harness::{
    attach_edges, recipe, replay, run_density_check, run_diagnostics_experiment, run_displacement_experiment,
    run_property_suite, sample_configurations, write_csv, ExperimentReport, ExperimentSpec, Functional, Setup, RECIPES,
};
use gibbs_shift::transform::{
    apply_transform, build_transform, diagnostics, is_good, jacobian_density, ClusterRecord, GoodnessVerdict,
};

#[derive(Parser)]
#[command(name = "gibbs-shift", version, about = "Shift transformations for 2D Gibbsian particle systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SpecSource {
    /// Experiment file (TOML).
    #[arg(long, conflicts_with = "recipe")]
    spec: Option<PathBuf>,
    /// Bundled recipe name.
    #[arg(long)]
    recipe: Option<String>,
    /// Overrides the sample count of the experiment.
    #[arg(long)]
    samples: Option<usize>,
    /// Overrides the output directory of the experiment.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

impl SpecSource {
    fn load(&self) -> Result<ExperimentSpec> {
        let mut spec = match (&self.spec, &self.recipe) {
            (Some(path), _) => ExperimentSpec::load(path).with_context(|| format!("reading {}", path.display()))?,
            (None, Some(name)) => recipe(name).with_context(|| format!("unknown recipe {name}; known: {}", RECIPES.join(", ")))?,
            (None, None) => bail!("pass --spec FILE or --recipe NAME"),
        };
        if let Some(n) = self.samples {
            spec.samples = n;
        }
        if let Some(dir) = &self.out_dir {
            spec.output.dir = Some(dir.clone());
        }
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Draws configurations from the Gibbs sampler.
    Sample {
        #[command(flatten)]
        source: SpecSource,
        #[arg(long)]
        out: PathBuf,
    },
    /// Attaches edges drawn from the edge process.
    Edges {
        #[command(flatten)]
        source: SpecSource,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Applies the shift transformation and records transcripts.
    Transform {
        #[arg(long = "in")]
        input: PathBuf,
        /// Experiment file supplying the model and transform parameters.
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        transcript: Option<PathBuf>,
        /// Apply the transformation in the `−e₁` direction.
        #[arg(long)]
        backward: bool,
    },
    /// Runs the property suite; exits nonzero on any hard failure.
    Verify {
        #[command(flatten)]
        source: SpecSource,
    },
    /// Checks the density identity with exact samples.
    DensityCheck {
        #[command(flatten)]
        source: SpecSource,
        #[arg(long, default_value_t = 4)]
        k_max: usize,
    },
    /// Tabulates central shifts against the window size.
    Displacement {
        #[command(flatten)]
        source: SpecSource,
        /// Comma-separated increasing window half-sizes.
        #[arg(long, value_delimiter = ',', default_values_t = vec![16.0, 32.0, 64.0])]
        n: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reports the means of the per-configuration diagnostics.
    Diagnostics {
        #[command(flatten)]
        source: SpecSource,
    },
    /// Reruns the checks stored in a replay artifact.
    Replay {
        #[arg(long)]
        artifact: PathBuf,
    },
}

#[derive(Serialize)]
struct TranscriptLine<'a> {
    index: usize,
    direction: &'a str,
    m: usize,
    m_star: usize,
    taus: Vec<f64>,
    clusters: &'a [ClusterRecord],
    theta: f64,
    phi: f64,
    s1: f64,
    s2: f64,
    goodness: GoodnessVerdict,
}

fn read_configs(path: &Path) -> Result<Vec<MarkedConfiguration>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(read_jsonl(BufReader::new(file))?)
}

fn write_configs(path: &Path, configs: &[MarkedConfiguration]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    write_jsonl(&mut out, configs)?;
    out.flush()?;
    Ok(())
}

fn finish(report: &ExperimentReport, dir: Option<&Path>, started: Instant) -> Result<ExitCode> {
    for line in report.summary_lines() {
        println!("{line}");
    }
    if let Some(dir) = dir {
        report.write(dir)?;
        println!("report written to {}", dir.display());
    }
    eprintln!("wall-clock {:.2} s", started.elapsed().as_secs_f64());
    Ok(if report.hard_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    let started = Instant::now();
    match cli.command {
        Command::Sample { source, out } => {
            let spec = source.load()?;
            let setup = Setup::new(&spec)?;
            let configs = sample_configurations(&setup, spec.samples)?;
            write_configs(&out, &configs)?;
            println!("{} configurations written to {}", configs.len(), out.display());
        }
        Command::Edges { source, input, out } => {
            let setup = Setup::new(&source.load()?)?;
            let mut configs = read_configs(&input)?;
            attach_edges(&setup, &mut configs);
            write_configs(&out, &configs)?;
            let total: usize = configs.iter().map(|c| c.edges.len()).sum();
            println!("{total} edges over {} configurations written to {}", configs.len(), out.display());
        }
        Command::Transform {
            input,
            params,
            out,
            transcript,
            backward,
        } => {
            let spec = ExperimentSpec::load(&params)?;
            let setup = Setup::new(&spec)?;
            let mut tp = setup.transform;
            if backward {
                tp = tp.with_direction(tp.direction.flip());
            }
            let configs = read_configs(&input)?;
            let mut images = Vec::with_capacity(configs.len());
            let mut lines = Vec::new();
            for (index, c) in configs.iter().enumerate() {
                if c.window_n != spec.n {
                    bail!("configuration {index} has window {} but the parameters use n = {}", c.window_n, spec.n);
                }
                let r = build_transform(c, &tp, &setup.decomp)?;
                images.push(apply_transform(c, &r, tp.direction));
                if transcript.is_some() {
                    let (theta, phi) = jacobian_density(c, &r, &setup.decomp, spec.beta);
                    let d = diagnostics(c, &tp, &setup.decomp)?;
                    let line = TranscriptLine {
                        index,
                        direction: if backward { "backward" } else { "forward" },
                        m: r.m,
                        m_star: r.m_star,
                        taus: r.taus(),
                        clusters: &r.clusters,
                        theta,
                        phi,
                        s1: d.s1,
                        s2: d.s2,
                        goodness: is_good(c, &tp, &setup.decomp)?,
                    };
                    lines.push(serde_json::to_string(&line)?);
                }
            }
            write_configs(&out, &images)?;
            if let Some(path) = transcript {
                std::fs::write(&path, lines.join("\n") + "\n")?;
            }
            println!("{} configurations transformed", images.len());
        }
        Command::Verify { source } => {
            let spec = source.load()?;
            let report = run_property_suite(&Setup::new(&spec)?)?;
            for path in &report.replays {
                eprintln!("replay artifact: {}", path.display());
            }
            return finish(&report, spec.output.dir.as_deref(), started);
        }
        Command::DensityCheck { source, k_max } => {
            let spec = source.load()?;
            let report = run_density_check(&Setup::new(&spec)?, &Functional::defaults(), spec.samples, k_max)?;
            return finish(&report, spec.output.dir.as_deref(), started);
        }
        Command::Displacement { source, n, out } => {
            let spec = source.load()?;
            let rows = run_displacement_experiment(&Setup::new(&spec)?, &n)?;
            for r in &rows {
                println!(
                    "n = {:>6}  c√log n = {:.6}  good fraction = {:.3} ± {:.3}  mean central shift = {:.6} ± {:.6}",
                    r.n, r.central_shift, r.good_fraction, r.good_fraction_stderr, r.mean_central_shift, r.mean_central_shift_stderr
                );
            }
            if let Some(path) = out {
                write_csv(&path, &rows)?;
            }
        }
        Command::Diagnostics { source } => {
            let spec = source.load()?;
            let report = run_diagnostics_experiment(&Setup::new(&spec)?)?;
            return finish(&report, spec.output.dir.as_deref(), started);
        }
        Command::Replay { artifact } => {
            let (a, verdict) = replay(&artifact)?;
            for c in &verdict.checks {
                println!(
                    "{:<6} {:<20} {} checked, {} violations",
                    if c.passed() { "PASS" } else { "FAIL" },
                    c.name,
                    c.checked,
                    c.violations.len()
                );
            }
            println!("recorded failures: {}", a.failed.join(", "));
            return Ok(if verdict.hard_failures().is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
