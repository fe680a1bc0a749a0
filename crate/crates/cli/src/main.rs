use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use dipath_core::harness::{random_coloring, random_oriented_graph};
use dipath_core::io::{max_color_in, parse_coloring, parse_graph, write_coloring, write_graph};
use dipath_core::oracle::max_mono_path;
use dipath_core::pseudorandom::{
    paley_tournament, pseudorandomness_exact, random_tournament, refute_pseudorandomness, sampled_report,
};
use dipath_core::{
    min_max_mono_path, multicolor_path_finder, run_experiment, symmetric_multicolor_finder, theorem1_adversary,
    two_color_path_finder, ConstantsConfig, EdgeColoring, ExperimentManifest, OrientedGraph,
};

#[derive(Parser)]
#[command(
    name = "dipath",
    version,
    about = "Monochromatic directed paths in edge-colored digraphs"
)]
struct Cli {
    /// Worker threads for parallel searches.
    #[arg(long, global = true, env = "DIPATH_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Random,
    Paley,
    RandomOriented,
    CompleteSymmetric,
    Transitive,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Sampled,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph, or a random coloring of an existing graph.
    Gen {
        #[arg(long, value_enum, default_value = "random")]
        model: Model,
        /// Vertex count (the prime for paley).
        #[arg(short, long, visible_alias = "p", default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        /// Color the edges of this graph instead of generating one.
        #[arg(long)]
        color: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        colors: u8,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Pseudorandomness of a tournament or oriented graph.
    Prcheck {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        /// Set size for sampled mode; defaults to ceil(2 log2 n).
        #[arg(short, long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Color an oriented graph with q+1 colors to avoid long monochromatic paths.
    Adversary {
        graph: PathBuf,
        #[arg(short, long, default_value_t = 1)]
        q: usize,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Coloring output; stdout when absent.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Partition trace as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Find a long monochromatic path in a colored graph.
    BuildPath {
        graph: PathBuf,
        coloring: PathBuf,
        /// Pseudorandomness parameter; defaults to the exact k*.
        #[arg(short, long)]
        k: Option<usize>,
        /// Target length for three or more colors.
        #[arg(long)]
        target: Option<usize>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Exact longest monochromatic path, or the min-max over all colorings.
    Oracle {
        graph: PathBuf,
        #[arg(long)]
        coloring: Option<PathBuf>,
        /// Number of colors for the min-max search.
        #[arg(short, long, default_value_t = 2)]
        q: usize,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run an experiment manifest.
    Experiment {
        #[arg(long)]
        manifest: PathBuf,
        /// Directory relative output paths resolve against; defaults to the manifest's.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn load_graph(path: &Path) -> Result<OrientedGraph> {
    parse_graph(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_coloring(path: &Path, g: &OrientedGraph) -> Result<EdgeColoring> {
    let text = read_text(path)?;
    let colors = max_color_in(&text)?.max(1);
    parse_coloring(&text, g, colors).with_context(|| format!("parsing {}", path.display()))
}

fn load_config(path: Option<&PathBuf>) -> Result<ConstantsConfig> {
    let cfg = match path {
        Some(p) => serde_json::from_str(&read_text(p)?).with_context(|| format!("parsing {}", p.display()))?,
        None => ConstantsConfig::default(),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn json(value: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen {
            model,
            n,
            seed,
            density,
            color,
            colors,
            out,
        } => {
            if let Some(path) = color {
                if colors == 0 {
                    bail!("--colors must be positive");
                }
                let g = load_graph(&path)?;
                emit(out.as_deref(), &write_coloring(&g, &random_coloring(&g, colors, seed)))?;
                return Ok(ExitCode::SUCCESS);
            }
            let g = match model {
                Model::Random => random_tournament(n, seed).into_graph(),
                Model::Paley => paley_tournament(n as u64)?.into_graph(),
                Model::RandomOriented => {
                    if !(0.0..=1.0).contains(&density) {
                        bail!("density must lie in [0, 1]");
                    }
                    random_oriented_graph(n, density, seed)
                }
                Model::CompleteSymmetric => OrientedGraph::complete_symmetric(n),
                Model::Transitive => OrientedGraph::transitive_tournament(n),
            };
            emit(out.as_deref(), &write_graph(&g))?;
        }
        Command::Prcheck {
            graph,
            mode,
            k,
            trials,
            seed,
            budget,
        } => {
            let g = load_graph(&graph)?;
            let report = match mode {
                Mode::Exact => {
                    let budget = budget.unwrap_or(ConstantsConfig::default().pseudorandom_budget);
                    pseudorandomness_exact(&g, budget)?
                }
                Mode::Sampled => {
                    let k = k.unwrap_or_else(|| (2.0 * (g.n() as f64).log2()).ceil() as usize);
                    let cx = refute_pseudorandomness(&g, k, trials, seed)?;
                    sampled_report(cx, k, trials)
                }
            };
            emit(None, &json(&report)?)?;
        }
        Command::Adversary {
            graph,
            q,
            config,
            out,
            trace,
        } => {
            let g = load_graph(&graph)?;
            let cfg = load_config(config.as_ref())?;
            let result = theorem1_adversary(&g, q, &cfg)?;
            if let Some(p) = trace {
                fs::write(&p, json(&result.trace)?).with_context(|| format!("writing {}", p.display()))?;
            }
            emit(out.as_deref(), &write_coloring(&g, &result.coloring))?;
        }
        Command::BuildPath {
            graph,
            coloring,
            k,
            target,
            config,
        } => {
            let g = load_graph(&graph)?;
            let c = load_coloring(&coloring, &g)?;
            let cfg = load_config(config.as_ref())?;
            let cert = if g.is_complete_symmetric() && c.num_colors() > 2 {
                symmetric_multicolor_finder(g.n(), &c, target.unwrap_or(1), &cfg)?
            } else {
                let k = match k {
                    Some(k) => k,
                    None => pseudorandomness_exact(&g, cfg.pseudorandom_budget)?
                        .k_star
                        .expect("exact report has k*"),
                };
                if c.num_colors() <= 2 {
                    two_color_path_finder(&g, &c, k, &cfg)?
                } else {
                    multicolor_path_finder(&g, &c, k, target.unwrap_or(1), &cfg)?
                }
            };
            cert.validate(&g, &c)?;
            emit(None, &json(&cert)?)?;
        }
        Command::Oracle {
            graph,
            coloring,
            q,
            budget,
            config,
        } => {
            let g = load_graph(&graph)?;
            let cfg = load_config(config.as_ref())?;
            match coloring {
                Some(p) => {
                    let c = load_coloring(&p, &g)?;
                    let (len, path, color) = max_mono_path(&g, &c, cfg.exact_path_limit)?;
                    let value = serde_json::json!({ "value": len, "color": color, "path": path });
                    emit(None, &json(&value)?)?;
                }
                None => {
                    let r = min_max_mono_path(&g, q, budget.unwrap_or(cfg.coloring_budget))?;
                    emit(None, &json(&r)?)?;
                }
            }
        }
        Command::Experiment { manifest, out_dir } => {
            let m = ExperimentManifest::from_json(&read_text(&manifest)?)
                .with_context(|| format!("parsing {}", manifest.display()))?;
            let base = out_dir.or_else(|| manifest.parent().map(Path::to_path_buf));
            let record = run_experiment(&m, base.as_deref())?;
            eprintln!(
                "{}: {} runs, {} failed, {} skipped",
                record.id, record.runs, record.failures, record.skipped
            );
            if !record.success() {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
