use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use dag_rta::alloc::{allocate_detailed, fed_cores, schedule_task_set_with, Approach};
use dag_rta::bound::{best_bound, extract_path_list, graham_bound, multipath_bound};
use dag_rta::experiment::{
    experiment_one_task, experiment_task_sets, one_task_csv, task_set_csv, ExperimentConfig,
    ExperimentKind, ExperimentMetadata, SweepParam,
};
use dag_rta::io::{TaskFile, TaskSetFile};
use dag_rta::optimize::optimize;
use dag_rta::sim::{simulate, validate_bound};
use dag_rta::taskgen::{gen_dag, gen_task, gen_task_set, GenConfig};

#[derive(Parser)]
#[command(
    name = "dag-rta",
    version,
    about = "Response-time analysis of parallel DAG tasks"
)]
#[command(arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long, default_value_t = 50)]
    min_vertices: usize,
    #[arg(long, default_value_t = 250)]
    max_vertices: usize,
    /// Fixed edge probability; drawn from [0, 0.5] per graph when omitted.
    #[arg(long)]
    pf: Option<f64>,
    /// Fixed deadline factor; drawn from [0, 0.5] per task when omitted.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 50)]
    min_wcet: u64,
    #[arg(long, default_value_t = 100)]
    max_wcet: u64,
}

impl GenArgs {
    fn config(&self) -> GenConfig {
        let mut cfg = GenConfig {
            vertices: (self.min_vertices, self.max_vertices),
            wcet: (self.min_wcet, self.max_wcet),
            ..GenConfig::default()
        };
        if let Some(p) = self.pf {
            cfg.pf = (p, p);
        }
        if let Some(a) = self.alpha {
            cfg.alpha = (a, a);
        }
        cfg
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Dag,
    Task,
    TaskSet,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Graham,
    Path,
    Our,
}

#[derive(Clone, Copy, ValueEnum)]
enum ApproachArg {
    Fed,
    Path,
    Our,
}

impl From<ApproachArg> for Approach {
    fn from(a: ApproachArg) -> Self {
        match a {
            ApproachArg::Fed => Approach::Fed,
            ApproachArg::Path => Approach::Path,
            ApproachArg::Our => Approach::Our,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    OneTask,
    TaskSets,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepArg {
    Cores,
    Pf,
    Vertices,
    Nu,
    Alpha,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random DAG, sporadic task or task set as JSON.
    Gen {
        #[arg(long, value_enum, default_value = "dag")]
        kind: GenKind,
        #[command(flatten)]
        params: GenArgs,
        /// Target normalized utilization of a task set.
        #[arg(long, default_value_t = 0.5)]
        nu: f64,
        /// Platform size a task set is generated for.
        #[arg(long, default_value_t = 16)]
        cores: usize,
        #[arg(long, env = "DAG_RTA_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Response-time bound of a DAG on a given number of cores.
    Analyze {
        #[arg(long = "task")]
        file: PathBuf,
        #[arg(long, short)]
        cores: usize,
        #[arg(long, value_enum, default_value = "path")]
        method: Method,
    },
    /// Insert precedence edges; writes the optimized graph to `--out`.
    Optimize {
        #[arg(long = "task")]
        file: PathBuf,
        /// Longest-path limit; defaults to the graph's longest path.
        #[arg(long)]
        limit: Option<f64>,
        /// Also report the bound of the optimized graph on this many cores.
        #[arg(long, short)]
        cores: Option<usize>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Core count required by one heavy task under every approach.
    Alloc {
        #[arg(long = "task")]
        file: PathBuf,
        /// Overrides the deadline stored in the file.
        #[arg(long)]
        deadline: Option<f64>,
    },
    /// Federated schedulability test of a task set.
    Schedule {
        #[arg(long)]
        taskset: PathBuf,
        #[arg(long, short)]
        cores: usize,
        #[arg(long, value_enum, default_value = "our")]
        approach: ApproachArg,
    },
    /// List-schedule a DAG, or check a bound against random priority orders.
    Simulate {
        #[arg(long = "task")]
        file: PathBuf,
        #[arg(long, short)]
        cores: usize,
        /// Comma-separated priority order, highest first; defaults to vertex order.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        /// Validate the bound over this many random orders instead.
        #[arg(long)]
        trials: Option<usize>,
        /// Bound to validate against; defaults to the multi-path bound.
        #[arg(long)]
        bound: Option<f64>,
        #[arg(long, env = "DAG_RTA_SEED", default_value_t = 1)]
        seed: u64,
        /// Print the trace as a Gantt CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Run a parameter sweep and write `<out>.csv` and `<out>.meta.json`.
    Experiment {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_enum)]
        sweep: SweepArg,
        /// Comma-separated sweep points; defaults depend on the sweep.
        #[arg(long, value_delimiter = ',')]
        points: Option<Vec<f64>>,
        #[arg(long)]
        samples: Option<usize>,
        /// Use the large sample counts (500 DAGs or 1000 task sets per point).
        #[arg(long)]
        full_scale: bool,
        /// Core count when cores are not swept.
        #[arg(long)]
        cores: Option<usize>,
        #[arg(long)]
        min_vertices: Option<usize>,
        #[arg(long)]
        max_vertices: Option<usize>,
        #[arg(long, env = "DAG_RTA_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long, short)]
        out: PathBuf,
    },
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => {
            fs::write(p, format!("{text}\n")).with_context(|| format!("writing {}", p.display()))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn load(path: &PathBuf) -> Result<TaskFile> {
    TaskFile::read(path).with_context(|| format!("reading {}", path.display()))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen {
            kind,
            params,
            nu,
            cores,
            seed,
            out,
        } => {
            let cfg = params.config();
            let text = match kind {
                GenKind::Dag => TaskFile::from_dag(&gen_dag(&cfg, seed)?).to_json(),
                GenKind::Task => TaskFile::from_task(&gen_task(&cfg, seed)?).to_json(),
                GenKind::TaskSet => {
                    TaskSetFile::from_task_set(&gen_task_set(&cfg, nu, cores, seed)?).to_json()
                }
            };
            emit(out.as_ref(), &text)
        }
        Command::Analyze {
            file,
            cores,
            method,
        } => {
            let g = load(&file)?.to_dag()?;
            let baseline = extract_path_list(&g);
            let (bound, lengths) = match method {
                Method::Graham => (graham_bound(&g, cores)?, Vec::new()),
                Method::Path => (multipath_bound(&g, &baseline, cores)?, baseline.lengths()),
                Method::Our => {
                    let ours = optimize(&g, g.critical_length() as f64)?;
                    let (b, i) = best_bound(&ours.graph, &[&ours.paths, &baseline], cores)?
                        .context("no valid path list")?;
                    let lengths = if i == 0 {
                        ours.paths.lengths()
                    } else {
                        baseline.lengths()
                    };
                    (b, lengths)
                }
            };
            let report = json!({
                "volume": g.volume(),
                "longest_path": g.critical_length(),
                "cores": cores,
                "graham": graham_bound(&g, cores)?,
                "multipath": multipath_bound(&g, &baseline, cores)?,
                "bound": bound,
                "path_lengths": lengths,
            });
            println!("{report}");
            Ok(())
        }
        Command::Optimize {
            file,
            limit,
            cores,
            out,
        } => {
            let g = load(&file)?.to_dag()?;
            let limit = limit.unwrap_or(g.critical_length() as f64);
            let res = optimize(&g, limit)?;
            let bound = match cores {
                Some(m) => {
                    let baseline = extract_path_list(&g);
                    best_bound(&res.graph, &[&res.paths, &baseline], m)?.map(|(b, _)| b)
                }
                None => None,
            };
            let graph = TaskFile::from_dag(&res.graph).with_added_edges(&res.added_edges);
            if let Some(p) = out.as_ref() {
                emit(Some(p), &graph.to_json())?;
            }
            let report = json!({
                "limit": limit,
                "longest_path": res.graph.critical_length(),
                "added_edges": res.added_edges,
                "path_lengths": res.paths.lengths(),
                "cores": cores,
                "bound": bound,
                "graph": graph,
            });
            println!("{report}");
            Ok(())
        }
        Command::Alloc { file, deadline } => {
            let tf = load(&file)?;
            let g = tf.to_dag()?;
            let Some(d) = deadline.or(tf.deadline) else {
                bail!("no deadline given and none stored in {}", file.display());
            };
            let a = allocate_detailed(&g, d);
            let report = json!({
                "deadline": d,
                "volume": g.volume(),
                "longest_path": g.critical_length(),
                "fed": fed_cores(&g, d),
                "path": a.and_then(|a| a.path_cores),
                "edge": a.and_then(|a| a.edge_cores),
                "cores": a.map(|a| a.cores),
                "winner": a.map(|a| a.winner),
            });
            println!("{report}");
            Ok(())
        }
        Command::Schedule {
            taskset,
            cores,
            approach,
        } => {
            if cores == 0 {
                bail!("--cores must be at least 1");
            }
            let ts = TaskSetFile::read(&taskset)
                .with_context(|| format!("reading {}", taskset.display()))?
                .to_task_set()?;
            let res = schedule_task_set_with(&ts, cores, approach.into());
            println!("{}", serde_json::to_string(&res)?);
            Ok(())
        }
        Command::Simulate {
            file,
            cores,
            order,
            trials,
            bound,
            seed,
            csv,
        } => {
            let g = load(&file)?.to_dag()?;
            if let Some(trials) = trials {
                let bound = match bound {
                    Some(b) => b,
                    None => multipath_bound(&g, &extract_path_list(&g), cores)?,
                };
                let report = validate_bound(&g, cores, bound, trials, seed)?;
                println!("{}", serde_json::to_string(&report)?);
                return Ok(());
            }
            let order = order.unwrap_or_else(|| g.vertices().collect());
            let trace = simulate(&g, cores, &order)?;
            trace.verify(&g).map_err(anyhow::Error::msg)?;
            if csv {
                print!("{}", trace.to_csv());
            } else {
                println!("{}", serde_json::to_string(&trace)?);
            }
            Ok(())
        }
        Command::Experiment {
            kind,
            sweep,
            points,
            samples,
            full_scale,
            cores,
            min_vertices,
            max_vertices,
            seed,
            out,
        } => {
            let kind = match kind {
                KindArg::OneTask => ExperimentKind::OneTask,
                KindArg::TaskSets => ExperimentKind::TaskSets,
            };
            let sweep = match sweep {
                SweepArg::Cores => SweepParam::Cores,
                SweepArg::Pf => SweepParam::Pf,
                SweepArg::Vertices => SweepParam::Vertices,
                SweepArg::Nu => SweepParam::Nu,
                SweepArg::Alpha => SweepParam::Alpha,
            };
            let mut cfg = ExperimentConfig::new(kind, sweep, seed)?;
            if full_scale {
                cfg = cfg.full_scale();
            }
            if let Some(p) = points {
                cfg.points = p;
            }
            if let Some(s) = samples {
                cfg.samples = s;
            }
            if let Some(c) = cores {
                cfg.cores = c;
            }
            if let Some(v) = min_vertices {
                cfg.gen.vertices.0 = v;
            }
            if let Some(v) = max_vertices {
                cfg.gen.vertices.1 = v;
            }
            let csv = match kind {
                ExperimentKind::OneTask => one_task_csv(sweep, &experiment_one_task(&cfg)?),
                ExperimentKind::TaskSets => task_set_csv(sweep, &experiment_task_sets(&cfg)?),
            };
            let csv_path = out.with_extension("csv");
            let meta_path = out.with_extension("meta.json");
            fs::write(&csv_path, &csv)
                .with_context(|| format!("writing {}", csv_path.display()))?;
            let meta = serde_json::to_string_pretty(&ExperimentMetadata::new(&cfg))?;
            fs::write(&meta_path, meta)
                .with_context(|| format!("writing {}", meta_path.display()))?;
            print!("{csv}");
            Ok(())
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
