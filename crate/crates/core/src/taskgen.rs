//! Random DAG tasks and task sets in the Erdős–Rényi style.
//!
//! For a graph of `n` vertices every pair `(i, j)` with `i < j` receives the
//! edge `i -> j` with probability `pf`, which keeps the graph acyclic. WCETs
//! are drawn after the topology. Everything is deterministic given a seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::alloc::{SporadicTask, TaskSet};
use crate::error::{Error, Result};
use crate::graph::{DagTask, Time};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenConfig {
    pub wcet: (Time, Time),
    pub vertices: (usize, usize),
    pub pf: (f64, f64),
    pub alpha: (f64, f64),
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            wcet: (50, 100),
            vertices: (50, 250),
            pf: (0.0, 0.5),
            alpha: (0.0, 0.5),
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.to_string()));
        if self.wcet.0 > self.wcet.1 {
            return bad("wcet range is empty");
        }
        if self.vertices.0 == 0 || self.vertices.0 > self.vertices.1 {
            return bad("vertex-count range must be non-empty and positive");
        }
        for (name, (lo, hi)) in [("pf", self.pf), ("alpha", self.alpha)] {
            if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
                return Err(Error::InvalidParameter(format!(
                    "{name} range must be a non-empty sub-range of [0, 1]"
                )));
            }
        }
        Ok(())
    }
}

/// Seeded generator used throughout the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for sample `sample` of data point `point`.
pub fn sample_rng(seed: u64, point: u64, sample: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((point << 32) | (sample & 0xffff_ffff));
    rng
}

fn uniform_f64<R: Rng + ?Sized>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..=hi)
    }
}

pub fn gen_dag_with<R: Rng + ?Sized>(cfg: &GenConfig, rng: &mut R) -> Result<DagTask> {
    cfg.validate()?;
    let n = rng.gen_range(cfg.vertices.0..=cfg.vertices.1);
    let pf = uniform_f64(rng, cfg.pf);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < pf {
                edges.push((i, j));
            }
        }
    }
    let wcets = (0..n)
        .map(|_| rng.gen_range(cfg.wcet.0..=cfg.wcet.1))
        .collect();
    DagTask::build(wcets, &edges)
}

pub fn gen_dag(cfg: &GenConfig, seed: u64) -> Result<DagTask> {
    gen_dag_with(cfg, &mut rng_from_seed(seed))
}

/// Implicit-deadline task with `D = T = len + alpha (vol - len)`.
pub fn gen_task_with<R: Rng + ?Sized>(cfg: &GenConfig, rng: &mut R) -> Result<SporadicTask> {
    let graph = gen_dag_with(cfg, rng)?;
    let alpha = uniform_f64(rng, cfg.alpha);
    let len = graph.critical_length() as f64;
    let deadline = len + alpha * (graph.volume() as f64 - len);
    SporadicTask::new(graph, deadline, deadline)
}

pub fn gen_task(cfg: &GenConfig, seed: u64) -> Result<SporadicTask> {
    gen_task_with(cfg, &mut rng_from_seed(seed))
}

/// Appends generated tasks until the total utilization reaches `nu * m`.
/// The task that crosses the target is kept.
pub fn gen_task_set_with<R: Rng + ?Sized>(
    cfg: &GenConfig,
    nu: f64,
    m: usize,
    rng: &mut R,
) -> Result<TaskSet> {
    if !(nu > 0.0 && nu <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "normalized utilization {nu} outside (0, 1]"
        )));
    }
    if m == 0 {
        return Err(Error::ZeroCores);
    }
    let target = nu * m as f64;
    let mut tasks = Vec::new();
    let mut total = 0.0;
    while total < target {
        let task = gen_task_with(cfg, rng)?;
        total += task.utilization();
        tasks.push(task);
    }
    Ok(TaskSet::new(tasks))
}

pub fn gen_task_set(cfg: &GenConfig, nu: f64, m: usize, seed: u64) -> Result<TaskSet> {
    gen_task_set_with(cfg, nu, m, &mut rng_from_seed(seed))
}
