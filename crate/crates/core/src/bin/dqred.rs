use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dqred::error::{Error, Result};
use dqred::expr::parse_observable;
use dqred::gauss::DensityWeight;
use dqred::involution::Involution;
use dqred::random::Sampler;
use dqred::reduction::{Reducer, ReductionConfig};
use dqred::report::{emit_report, Format};
use dqred::scene::{load_scene, Scene};
use dqred::series::{Observable, Series};
use dqred::star::{Quantizer, StarKind};
use dqred::suites::{run_suites, Suite};

#[derive(Parser)]
#[command(name = "dqred", version, about = "Exact checks for reduced star products")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Scene file (JSON).
    #[arg(long)]
    scene: PathBuf,
    /// Override the truncation order K.
    #[arg(long)]
    order: Option<usize>,
    /// Override the seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the polynomial degree cap.
    #[arg(long = "degree-cap")]
    degree_cap: Option<u32>,
    /// Output file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run identity suites and emit a report.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Suite name or `all`; repeatable. Defaults to the scene's list.
        #[arg(long)]
        suite: Vec<String>,
        /// `json` or `text`.
        #[arg(long, default_value = "json")]
        format: String,
        /// Include per-identity runtimes.
        #[arg(long)]
        timings: bool,
    },
    /// Print f ⋆ g for one of moyal, std, weyl_g, total.
    Star {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "total")]
        kind: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Print the coefficients C_r of u ⋆_red v (random base inputs if u, v are omitted).
    Reduce {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        v: Option<String>,
    },
    /// Print u* for a named weight of the scene (or `lebesgue`).
    Involve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        u: String,
        #[arg(long, default_value = "lebesgue")]
        weight: String,
    },
}

fn scene_of(c: &Common) -> Result<Scene> {
    load_scene(&c.scene)?.with_overrides(c.order, c.seed, c.degree_cap)
}

fn write_out(c: &Common, text: &str) -> Result<()> {
    match &c.out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn show(scene: &Scene, f: &Observable) -> String {
    f.display(scene.model.names())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Verify { common, suite, format, timings } => {
            let scene = scene_of(&common)?;
            let format = Format::parse(&format)?;
            let names = if suite.is_empty() { scene.file.suites.clone() } else { suite };
            let names = if names.is_empty() { vec!["all".to_string()] } else { names };
            let mut suites = Vec::new();
            for n in &names {
                suites.extend(Suite::parse(n)?);
            }
            let report = run_suites(&scene, &suites, timings);
            write_out(&common, &emit_report(&report, format))?;
            Ok(!report.any_failed())
        }
        Cmd::Star { common, kind, f, g } => {
            let scene = scene_of(&common)?;
            let kind = StarKind::parse(&kind)?;
            let (f, g) = (parse_observable(&scene.model, &f)?, parse_observable(&scene.model, &g)?);
            let qz = Quantizer::new(&scene.model);
            write_out(&common, &format!("{}\n", show(&scene, &qz.star(kind, &f, &g))))?;
            Ok(true)
        }
        Cmd::Reduce { common, u, v } => {
            let scene = scene_of(&common)?;
            let m = &scene.model;
            let mut s = Sampler::new(scene.seed());
            let base = m.base_vars();
            let mut input = |e: Option<String>| -> Result<Observable> {
                match e {
                    Some(t) => parse_observable(m, &t),
                    None => Ok(Series::from_poly(s.poly(&base, scene.poly_cap().min(3), 3, false), m.order())),
                }
            };
            let (u, v) = (input(u)?, input(v)?);
            let qz = Quantizer::new(m);
            let red = Reducer::new(&qz, ReductionConfig::half(m.order()));
            let w = red.reduced_star(&u, &v)?;
            let mut text = format!("u = {}\nv = {}\n", show(&scene, &u), show(&scene, &v));
            for r in 0..=m.order() {
                text.push_str(&format!("C_{r} = {}\n", w.coeff(r).display(m.names())));
            }
            write_out(&common, &text)?;
            Ok(true)
        }
        Cmd::Involve { common, u, weight } => {
            let scene = scene_of(&common)?;
            let m = &scene.model;
            let w = match scene.weights.iter().find(|(n, _)| *n == weight) {
                Some((_, w)) => w.clone(),
                None if weight == "lebesgue" => DensityWeight::lebesgue(m.order()),
                None => return Err(Error::Config(format!("scene has no weight `{weight}`"))),
            };
            let u = parse_observable(m, &u)?;
            let qz = Quantizer::new(m);
            let us = Involution::new(&qz, &w)?.star(&u)?;
            write_out(&common, &format!("{}\n", show(&scene, &us)))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("dqred: {e}");
            ExitCode::from(2)
        }
    }
}
