use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use quasiconvex::dump::Dump;
use quasiconvex::io::{load_input, InputSpec};
use quasiconvex::render::{self, Layers};
use quasiconvex::report::{self, Invariant};
use quasiconvex::{oracle, route, Config, Error};

#[derive(Parser)]
#[command(name = "quasiconvex", version, about = "Short quasiconvex augmentation of polygonal sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON object of config fields applied on top of the preset.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "default")]
    preset: Preset,
    /// Seed for verification pair sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    kmax: Option<usize>,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Write an SVG rendering here.
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Default,
    Strict,
}

#[derive(Subcommand)]
enum Command {
    /// Build Γ̃ from a polyline (.json) or point cloud (.csv) and verify it.
    Build {
        input: PathBuf,
        /// Write the network dump here.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Reload a network dump and re-check it.
    Verify { dump: PathBuf },
    /// Render a network dump to SVG.
    Render {
        dump: PathBuf,
        /// Draw cube outlines.
        #[arg(long)]
        cubes: bool,
        #[arg(long)]
        no_bridges: bool,
        /// Skip the stretch measurement that locates the worst pair.
        #[arg(long)]
        no_worst: bool,
    },
    /// Run the brute-force β and spanning-tree checkers.
    Oracle,
}

enum Failure {
    Assertion(Vec<String>),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

fn config(cli: &Cli) -> Result<Config, Error> {
    let name = match cli.preset {
        Preset::Default => "default",
        Preset::Strict => "strict",
    };
    let mut cfg = Config::preset(name)?;
    if let Some(path) = &cli.config {
        cfg = cfg.with_overrides(&std::fs::read_to_string(path)?)?;
    }
    if cli.kmax.is_some() {
        cfg.k_max = cli.kmax;
        cfg.validate()?;
    }
    Ok(cfg)
}

fn read_dump(path: &Path) -> Result<Dump, Error> {
    Dump::from_json(&std::fs::read_to_string(path)?)
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    Ok(std::fs::write(path, text)?)
}

fn summarize(invariants: &[Invariant]) -> Result<(), Failure> {
    for i in invariants {
        println!("{:4} {:24} {:.6e} (bound {:.6e})", if i.passed { "ok" } else { "FAIL" }, i.name, i.value, i.bound);
    }
    let failed: Vec<String> = invariants.iter().filter(|i| !i.passed).map(|i| i.name.clone()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Assertion(failed))
    }
}

fn save_svg(dump: &Dump, worst: Option<&route::DilationSample>, layers: Layers, path: &Path) -> Result<(), Error> {
    let (doc, warnings) = render::render(dump, worst, layers)?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    render::save(&doc, path)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Build { input, dump } => {
            let cfg = config(cli)?;
            let spec = InputSpec::from_path(input)?;
            let curve = load_input(&spec)?;
            let (c, r) = report::run_pipeline(&curve, &input.display().to_string(), &cfg, cli.seed)?;
            if let Some(p) = &cli.report {
                write(p, &r.to_json())?;
            }
            if dump.is_some() || cli.svg.is_some() {
                let d = Dump::from_construction(&c);
                if let Some(p) = dump {
                    write(p, &d.to_json())?;
                }
                if let Some(p) = &cli.svg {
                    save_svg(&d, r.stretch.worst.as_ref(), Layers::default(), p)?;
                }
            }
            println!(
                "length ratio {:.4}, stretch max {:.3} (raw {:.3}), {} bridges",
                r.lengths.ratio, r.stretch.max, r.raw_stretch.max, r.bridges.count
            );
            summarize(&r.invariants)
        }
        Command::Verify { dump } => {
            let d = read_dump(dump)?;
            let r = report::verify_dump(&d, cli.seed)?;
            if let Some(p) = &cli.report {
                write(p, &r.to_json())?;
            }
            summarize(&r.invariants)
        }
        Command::Render { dump, cubes, no_bridges, no_worst } => {
            let Some(out) = &cli.svg else {
                return Err(Error::Input("render needs --svg <file>".into()).into());
            };
            let d = read_dump(dump)?;
            let worst = if *no_worst {
                None
            } else {
                let net = d.network()?;
                let key = route::key_vertices(&net, &d.bridges);
                route::measure_stretch(&net, &key, &report::pair_plan(&d.config, d.k_max), cli.seed)?.worst
            };
            let layers = Layers { gamma: true, bridges: !no_bridges, worst: !no_worst, cubes: *cubes };
            save_svg(&d, worst.as_ref(), layers, out)?;
            Ok(())
        }
        Command::Oracle => {
            let checks = oracle::run_all(cli.seed);
            if let Some(p) = &cli.report {
                write(p, &serde_json::to_string_pretty(&checks).expect("checks serialize"))?;
            }
            let inv: Vec<Invariant> = checks
                .iter()
                .map(|c| Invariant { name: c.name.clone(), passed: c.passed(), value: c.worst, bound: c.tolerance })
                .collect();
            summarize(&inv)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion(names)) => {
            eprintln!("assertion failed: {}", names.join(", "));
            ExitCode::from(1)
        }
        Err(Failure::Run(e)) if e.is_input_error() => {
            eprintln!("input error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
