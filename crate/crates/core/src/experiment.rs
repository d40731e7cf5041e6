//! Parameter sweeps comparing the baseline and optimized analyses.
//!
//! Every sample draws from its own PRNG stream derived from
//! `(seed, point index, sample index)`, so results do not depend on the
//! order in which samples are evaluated.

use serde::{Deserialize, Serialize};

use crate::alloc::{demand, pack, Approach, FED_RULE, LIGHT_TASK_POLICY};
use crate::bound::{best_bound, extract_path_list, graham_bound, multipath_bound};
use crate::error::{Error, Result};
use crate::optimize::optimize;
use crate::taskgen::{gen_dag_with, gen_task_set_with, sample_rng, GenConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    OneTask,
    TaskSets,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    Cores,
    Pf,
    Vertices,
    Nu,
    Alpha,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Cores => "cores",
            SweepParam::Pf => "pf",
            SweepParam::Vertices => "vertices",
            SweepParam::Nu => "nu",
            SweepParam::Alpha => "alpha",
        }
    }
}

pub const DESK_TASK_SAMPLES: usize = 100;
pub const DESK_SET_SAMPLES: usize = 200;
pub const FULL_TASK_SAMPLES: usize = 500;
pub const FULL_SET_SAMPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub sweep: SweepParam,
    pub points: Vec<f64>,
    pub gen: GenConfig,
    /// Core count when it is not the swept parameter.
    pub cores: usize,
    /// Normalized utilization range of generated task sets.
    pub nu: (f64, f64),
    pub samples: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    /// Default sweep ranges and desk-scale sample counts.
    pub fn new(kind: ExperimentKind, sweep: SweepParam, seed: u64) -> Result<Self> {
        let points: Vec<f64> = match (kind, sweep) {
            (ExperimentKind::OneTask, SweepParam::Cores) => (2..=10).map(f64::from).collect(),
            (ExperimentKind::TaskSets, SweepParam::Cores) => {
                vec![8.0, 16.0, 24.0, 32.0, 40.0, 48.0, 56.0, 64.0]
            }
            (_, SweepParam::Pf) => vec![0.01, 0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5],
            (_, SweepParam::Vertices) => vec![50.0, 100.0, 150.0, 200.0, 250.0],
            (ExperimentKind::TaskSets, SweepParam::Nu) => {
                vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8]
            }
            (ExperimentKind::TaskSets, SweepParam::Alpha) => {
                vec![0.05, 0.1, 0.2, 0.3, 0.4, 0.5]
            }
            (ExperimentKind::OneTask, p) => {
                return Err(Error::InvalidParameter(format!(
                    "one-task experiments cannot sweep {}",
                    p.name()
                )))
            }
        };
        let (cores, samples) = match kind {
            ExperimentKind::OneTask => (4, DESK_TASK_SAMPLES),
            ExperimentKind::TaskSets => (32, DESK_SET_SAMPLES),
        };
        Ok(ExperimentConfig {
            kind,
            sweep,
            points,
            gen: GenConfig::default(),
            cores,
            nu: (0.0, 0.8),
            samples,
            seed,
        })
    }

    pub fn full_scale(mut self) -> Self {
        self.samples = match self.kind {
            ExperimentKind::OneTask => FULL_TASK_SAMPLES,
            ExperimentKind::TaskSets => FULL_SET_SAMPLES,
        };
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidParameter("samples must be at least 1".into()));
        }
        if self.points.is_empty() {
            return Err(Error::InvalidParameter("no sweep points".into()));
        }
        self.gen.validate()?;
        for i in 0..self.points.len() {
            self.point(i)?;
        }
        Ok(())
    }

    /// Generator settings, core count and utilization range at point `i`.
    fn point(&self, i: usize) -> Result<(GenConfig, usize, (f64, f64))> {
        let x = self.points[i];
        let mut gen = self.gen;
        let mut cores = self.cores;
        let mut nu = self.nu;
        match self.sweep {
            SweepParam::Cores => cores = x as usize,
            SweepParam::Pf => gen.pf = (x, x),
            SweepParam::Vertices => gen.vertices = (x as usize, x as usize),
            SweepParam::Nu => nu = (x, x),
            SweepParam::Alpha => gen.alpha = (x, x),
        }
        gen.validate()?;
        if cores == 0 {
            return Err(Error::ZeroCores);
        }
        if !(nu.0 >= 0.0 && nu.0 <= nu.1 && nu.1 <= 1.0 && nu.1 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "nu range {nu:?} outside (0, 1]"
            )));
        }
        Ok((gen, cores, nu))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OneTaskRow {
    pub param: f64,
    /// Mean baseline bound / Graham's bound.
    pub path: f64,
    /// Mean optimized bound / Graham's bound.
    pub our: f64,
    /// Mean longest path / Graham's bound.
    pub longest: f64,
    /// Samples where the optimized bound is strictly smaller.
    pub improved: usize,
    pub samples: usize,
}

impl OneTaskRow {
    /// Relative reduction `(path - our) / path` of the mean ratios.
    pub fn reduction(&self) -> f64 {
        (self.path - self.our) / self.path
    }
}

pub fn experiment_one_task(cfg: &ExperimentConfig) -> Result<Vec<OneTaskRow>> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.points.len());
    for (pi, &param) in cfg.points.iter().enumerate() {
        let (gen, m, _) = cfg.point(pi)?;
        let (mut path_sum, mut our_sum, mut len_sum) = (0.0, 0.0, 0.0);
        let mut improved = 0;
        for si in 0..cfg.samples {
            let mut rng = sample_rng(cfg.seed, pi as u64, si as u64);
            let g = gen_dag_with(&gen, &mut rng)?;
            let graham = graham_bound(&g, m)?;
            let baseline = extract_path_list(&g);
            let path = multipath_bound(&g, &baseline, m)?;
            let ours = optimize(&g, g.critical_length() as f64)?;
            let (our, _) = best_bound(&ours.graph, &[&ours.paths, &baseline], m)?
                .expect("baseline list certifies the optimized graph");
            if our < path {
                improved += 1;
            }
            let norm = |b: f64| if graham > 0.0 { b / graham } else { 1.0 };
            path_sum += norm(path);
            our_sum += norm(our);
            len_sum += norm(g.critical_length() as f64);
        }
        let n = cfg.samples as f64;
        rows.push(OneTaskRow {
            param,
            path: path_sum / n,
            our: our_sum / n,
            longest: len_sum / n,
            improved,
            samples: cfg.samples,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TaskSetRow {
    pub param: f64,
    pub fed: f64,
    pub path: f64,
    pub our: f64,
    pub samples: usize,
    pub mean_tasks: f64,
    /// Mean realized utilization divided by the core count.
    pub mean_normalized_utilization: f64,
    /// Sets accepted by PATH but rejected by OUR.
    pub domination_violations: usize,
}

pub fn experiment_task_sets(cfg: &ExperimentConfig) -> Result<Vec<TaskSetRow>> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.points.len());
    for (pi, &param) in cfg.points.iter().enumerate() {
        let (gen, m, nu_range) = cfg.point(pi)?;
        let mut accepted = [0usize; 3];
        let (mut tasks, mut util) = (0usize, 0.0);
        let mut violations = 0;
        for si in 0..cfg.samples {
            let mut rng = sample_rng(cfg.seed, pi as u64, si as u64);
            let nu = if nu_range.0 == nu_range.1 {
                nu_range.0
            } else {
                rand::Rng::gen_range(&mut rng, nu_range.0..=nu_range.1)
            }
            .max(f64::MIN_POSITIVE);
            let ts = gen_task_set_with(&gen, nu, m, &mut rng)?;
            tasks += ts.tasks().len();
            util += ts.utilization() / m as f64;
            let mut ok = [false; 3];
            for (k, approach) in Approach::ALL.into_iter().enumerate() {
                let demands: Vec<_> = ts.tasks().iter().map(|t| demand(t, approach)).collect();
                ok[k] = pack(approach, &demands, m).schedulable;
                accepted[k] += ok[k] as usize;
            }
            if ok[1] && !ok[2] {
                violations += 1;
            }
        }
        let n = cfg.samples as f64;
        rows.push(TaskSetRow {
            param,
            fed: accepted[0] as f64 / n,
            path: accepted[1] as f64 / n,
            our: accepted[2] as f64 / n,
            samples: cfg.samples,
            mean_tasks: tasks as f64 / n,
            mean_normalized_utilization: util / n,
            domination_violations: violations,
        });
    }
    Ok(rows)
}

pub fn one_task_csv(sweep: SweepParam, rows: &[OneTaskRow]) -> String {
    let mut out = format!("{},path,our,longest,improved,samples\n", sweep.name());
    for r in rows {
        out.push_str(&format!(
            "{},{:.6},{:.6},{:.6},{},{}\n",
            r.param, r.path, r.our, r.longest, r.improved, r.samples
        ));
    }
    out
}

pub fn task_set_csv(sweep: SweepParam, rows: &[TaskSetRow]) -> String {
    let mut out = format!(
        "{},fed,path,our,samples,mean_tasks,mean_normalized_utilization,domination_violations\n",
        sweep.name()
    );
    for r in rows {
        out.push_str(&format!(
            "{},{:.6},{:.6},{:.6},{},{:.3},{:.6},{}\n",
            r.param,
            r.fed,
            r.path,
            r.our,
            r.samples,
            r.mean_tasks,
            r.mean_normalized_utilization,
            r.domination_violations
        ));
    }
    out
}

/// Side information written next to the CSV.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentMetadata<'a> {
    pub config: &'a ExperimentConfig,
    pub fed_rule: &'static str,
    pub light_task_policy: &'static str,
    pub utilization_rule: &'static str,
    pub normalization: &'static str,
}

impl<'a> ExperimentMetadata<'a> {
    pub fn new(config: &'a ExperimentConfig) -> Self {
        ExperimentMetadata {
            config,
            fed_rule: FED_RULE,
            light_task_policy: LIGHT_TASK_POLICY,
            utilization_rule:
                "tasks are appended until the target is reached; the crossing task is kept",
            normalization: "bounds divided by Graham's bound on the same task and core count",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(kind: ExperimentKind, sweep: SweepParam) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(kind, sweep, 7).unwrap();
        cfg.gen.vertices = (5, 15);
        cfg.samples = 3;
        cfg
    }

    #[test]
    fn one_task_rows_are_reproducible_and_dominated() {
        let mut cfg = tiny(ExperimentKind::OneTask, SweepParam::Cores);
        cfg.points = vec![2.0, 4.0];
        let a = experiment_one_task(&cfg).unwrap();
        let b = experiment_one_task(&cfg).unwrap();
        assert_eq!(one_task_csv(cfg.sweep, &a), one_task_csv(cfg.sweep, &b));
        for r in &a {
            assert!(r.our <= r.path + 1e-12);
            assert!(r.path <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn single_sample_gives_single_row() {
        let mut cfg = tiny(ExperimentKind::OneTask, SweepParam::Vertices);
        cfg.points = vec![10.0];
        cfg.samples = 1;
        let rows = experiment_one_task(&cfg).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(one_task_csv(cfg.sweep, &rows).lines().count(), 2);
    }

    #[test]
    fn task_set_rows() {
        let mut cfg = tiny(ExperimentKind::TaskSets, SweepParam::Nu);
        cfg.cores = 8;
        cfg.points = vec![0.05, 0.5];
        let rows = experiment_task_sets(&cfg).unwrap();
        for r in &rows {
            assert!(r.our >= r.path);
            assert_eq!(r.domination_violations, 0);
        }
        let csv = task_set_csv(cfg.sweep, &rows);
        assert!(csv.starts_with("nu,fed,path,our,"));
    }

    #[test]
    fn rejects_invalid_configs() {
        assert!(ExperimentConfig::new(ExperimentKind::OneTask, SweepParam::Nu, 0).is_err());
        let mut cfg = tiny(ExperimentKind::OneTask, SweepParam::Pf);
        cfg.samples = 0;
        assert!(experiment_one_task(&cfg).is_err());
        cfg.samples = 1;
        cfg.points = vec![1.5];
        assert!(experiment_one_task(&cfg).is_err());
    }
}
