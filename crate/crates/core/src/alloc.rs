//! Federated scheduling of sporadic DAG task sets.
//!
//! Heavy tasks (`vol >= D`) run alone on a dedicated cluster of cores sized
//! by one of three rules; light tasks are treated as sequential and packed
//! first-fit-decreasing by density onto the remaining cores.

use serde::Serialize;

use crate::bound::{best_bound, extract_path_list};
use crate::error::{Error, Result};
use crate::graph::{DagTask, GeneralizedPathList};
use crate::optimize::{optimize, OptimizationResult};

/// Light tasks are packed with this policy under every approach.
pub const LIGHT_TASK_POLICY: &str =
    "partitioned first-fit decreasing by density, density sum <= 1 per core";

/// Classical federated rule used by [`Approach::Fed`].
pub const FED_RULE: &str = "ceil((vol - len) / (D - len))";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SporadicTask {
    #[serde(skip)]
    graph: DagTask,
    deadline: f64,
    period: f64,
}

impl SporadicTask {
    /// A constrained-deadline task, `0 < D <= T`.
    pub fn new(graph: DagTask, deadline: f64, period: f64) -> Result<Self> {
        if !(deadline > 0.0 && deadline <= period) {
            return Err(Error::InvalidParameter(format!(
                "deadline {deadline} and period {period} violate 0 < D <= T"
            )));
        }
        Ok(SporadicTask {
            graph,
            deadline,
            period,
        })
    }

    pub fn graph(&self) -> &DagTask {
        &self.graph
    }

    pub fn deadline(&self) -> f64 {
        self.deadline
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn utilization(&self) -> f64 {
        self.graph.volume() as f64 / self.period
    }

    pub fn density(&self) -> f64 {
        self.graph.volume() as f64 / self.deadline
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TaskSet {
    tasks: Vec<SporadicTask>,
}

impl TaskSet {
    pub fn new(tasks: Vec<SporadicTask>) -> Self {
        TaskSet { tasks }
    }

    pub fn tasks(&self) -> &[SporadicTask] {
        &self.tasks
    }

    pub fn utilization(&self) -> f64 {
        self.tasks.iter().map(SporadicTask::utilization).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskClass {
    Heavy,
    Light,
}

pub fn classify(task: &SporadicTask) -> TaskClass {
    if task.graph.volume() as f64 >= task.deadline {
        TaskClass::Heavy
    } else {
        TaskClass::Light
    }
}

/// Smallest `m` whose best multi-path bound over `candidates` meets the
/// deadline, or `None` when the longest path alone misses it.
pub fn min_cores_for(
    g: &DagTask,
    candidates: &[&GeneralizedPathList],
    deadline: f64,
) -> Option<usize> {
    if g.critical_length() as f64 > deadline {
        return None;
    }
    let most = candidates.iter().map(|l| l.len()).max().unwrap_or(0).max(1);
    (1..=most).find(|&m| {
        best_bound(g, candidates, m)
            .ok()
            .flatten()
            .is_some_and(|(b, _)| b <= deadline)
    })
}

/// Cores needed according to the baseline path list of `g`.
pub fn path_cores(g: &DagTask, deadline: f64) -> Option<usize> {
    min_cores_for(g, &[&extract_path_list(g)], deadline)
}

/// Optimizes `g` with `limit = min(D, vol)`; the number of emitted paths
/// is a core count on which the optimized graph finishes by `D`.
///
/// The emitted paths are chains of the optimized graph that cover every
/// vertex of nonzero WCET, so no antichain is wider than their count and a
/// work-conserving scheduler never delays a ready vertex. The makespan is
/// then the longest path, which the limit keeps within `D`. The first
/// emitted path need not be the longest one here, so the multi-path bound
/// is not used for this certificate.
pub fn edge_allocation(g: &DagTask, deadline: f64) -> Option<(usize, OptimizationResult)> {
    let len = g.critical_length() as f64;
    if len > deadline {
        return None;
    }
    let limit = deadline.min(g.volume() as f64);
    let result = optimize(g, limit).expect("limit lies in [len, vol]");
    Some((result.paths.len().max(1), result))
}

pub fn edge_cores(g: &DagTask, deadline: f64) -> Option<usize> {
    edge_allocation(g, deadline).map(|(m, _)| m)
}

/// Classical federated allocation for a heavy task.
pub fn fed_cores(g: &DagTask, deadline: f64) -> Option<usize> {
    let len = g.critical_length() as f64;
    let vol = g.volume() as f64;
    if len > deadline {
        return None;
    }
    if vol == len {
        return Some(1);
    }
    if deadline == len {
        return None;
    }
    Some((((vol - len) / (deadline - len)).ceil() as usize).max(1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AllocMethod {
    Federated,
    Path,
    Edge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HeavyAllocation {
    pub cores: usize,
    pub path_cores: Option<usize>,
    pub edge_cores: Option<usize>,
    pub winner: AllocMethod,
}

/// `min{Path(G'), Edge(G)}` with its two components.
///
/// `G'` is `g` optimized with `limit = len(g)`. `Path(G')` is certified by
/// the emitted list, the baseline list of `g` (still valid on `G'`) and the
/// baseline list of `G'`. Ties go to `Path`.
pub fn allocate_detailed(g: &DagTask, deadline: f64) -> Option<HeavyAllocation> {
    if g.critical_length() as f64 > deadline {
        return None;
    }
    let ours = optimize(g, g.critical_length() as f64).expect("limit = len is in range");
    let baseline = extract_path_list(g);
    let reextracted = extract_path_list(&ours.graph);
    let path = min_cores_for(
        &ours.graph,
        &[&ours.paths, &baseline, &reextracted],
        deadline,
    );
    let edge = edge_cores(g, deadline);
    let (cores, winner) = match (path, edge) {
        (Some(p), Some(e)) if e < p => (e, AllocMethod::Edge),
        (Some(p), _) => (p, AllocMethod::Path),
        (None, Some(e)) => (e, AllocMethod::Edge),
        (None, None) => return None,
    };
    Some(HeavyAllocation {
        cores,
        path_cores: path,
        edge_cores: edge,
        winner,
    })
}

pub fn allocate(g: &DagTask, deadline: f64) -> Option<usize> {
    allocate_detailed(g, deadline).map(|a| a.cores)
}

/// How heavy tasks are sized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Approach {
    Fed,
    Path,
    Our,
}

impl Approach {
    pub const ALL: [Approach; 3] = [Approach::Fed, Approach::Path, Approach::Our];

    pub fn name(self) -> &'static str {
        match self {
            Approach::Fed => "FED",
            Approach::Path => "PATH",
            Approach::Our => "OUR",
        }
    }
}

/// What one task asks of the platform under a given approach.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "lowercase")]
pub enum Demand {
    Heavy {
        cores: Option<usize>,
        method: Option<AllocMethod>,
    },
    Light {
        density: f64,
    },
}

pub fn demand(task: &SporadicTask, approach: Approach) -> Demand {
    if classify(task) == TaskClass::Light {
        return Demand::Light {
            density: task.density(),
        };
    }
    let (g, d) = (task.graph(), task.deadline());
    let (cores, method) = match approach {
        Approach::Fed => (fed_cores(g, d), Some(AllocMethod::Federated)),
        Approach::Path => (path_cores(g, d), Some(AllocMethod::Path)),
        Approach::Our => match allocate_detailed(g, d) {
            Some(a) => (Some(a.cores), Some(a.winner)),
            None => (None, None),
        },
    };
    Demand::Heavy { cores, method }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeavyAssignment {
    pub task: usize,
    pub cores: Option<usize>,
    pub method: Option<AllocMethod>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LightAssignment {
    pub task: usize,
    pub density: f64,
    /// Index among the light-task cores; `None` when packing failed.
    pub core: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AllocationResult {
    pub approach: Approach,
    pub heavy: Vec<HeavyAssignment>,
    pub light: Vec<LightAssignment>,
    pub heavy_cores: usize,
    pub light_cores: usize,
    pub total_cores_used: usize,
    pub platform_cores: usize,
    pub schedulable: bool,
    pub light_policy: &'static str,
}

/// Places per-task demands on `m_total` cores.
pub fn pack(approach: Approach, demands: &[Demand], m_total: usize) -> AllocationResult {
    let mut heavy = Vec::new();
    let mut light = Vec::new();
    let mut feasible = true;
    for (task, d) in demands.iter().enumerate() {
        match *d {
            Demand::Heavy { cores, method } => {
                feasible &= cores.is_some();
                heavy.push(HeavyAssignment {
                    task,
                    cores,
                    method,
                });
            }
            Demand::Light { density } => light.push(LightAssignment {
                task,
                density,
                core: None,
            }),
        }
    }
    let heavy_cores: usize = heavy.iter().filter_map(|h| h.cores).sum();
    feasible &= heavy_cores <= m_total;
    let spare = m_total.saturating_sub(heavy_cores);

    let mut order: Vec<usize> = (0..light.len()).collect();
    order.sort_by(|&a, &b| light[b].density.total_cmp(&light[a].density));
    let mut loads: Vec<f64> = Vec::new();
    for i in order {
        let d = light[i].density;
        let slot = match loads.iter().position(|&l| l + d <= 1.0) {
            Some(c) => Some(c),
            None if loads.len() < spare && d <= 1.0 => {
                loads.push(0.0);
                Some(loads.len() - 1)
            }
            None => None,
        };
        match slot {
            Some(c) => {
                loads[c] += d;
                light[i].core = Some(c);
            }
            None => feasible = false,
        }
    }

    AllocationResult {
        approach,
        heavy,
        light,
        heavy_cores,
        light_cores: loads.len(),
        total_cores_used: heavy_cores + loads.len(),
        platform_cores: m_total,
        schedulable: feasible,
        light_policy: LIGHT_TASK_POLICY,
    }
}

pub fn schedule_task_set_with(
    ts: &TaskSet,
    m_total: usize,
    approach: Approach,
) -> AllocationResult {
    let demands: Vec<_> = ts.tasks().iter().map(|t| demand(t, approach)).collect();
    pack(approach, &demands, m_total)
}

/// Federated schedulability with heavy tasks sized by `min{Path(G'), Edge(G)}`.
pub fn schedule_task_set(ts: &TaskSet, m_total: usize) -> Result<AllocationResult> {
    if m_total == 0 {
        return Err(Error::ZeroCores);
    }
    Ok(schedule_task_set_with(ts, m_total, Approach::Our))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::{e1, e2};

    fn chain(ws: &[u64]) -> DagTask {
        let edges: Vec<_> = (1..ws.len()).map(|i| (i - 1, i)).collect();
        DagTask::build(ws.to_vec(), &edges).unwrap()
    }

    fn task(g: DagTask, d: f64) -> SporadicTask {
        SporadicTask::new(g, d, d).unwrap()
    }

    #[test]
    fn classification_boundary_is_heavy() {
        assert_eq!(classify(&task(e1(), 7.0)), TaskClass::Heavy);
        assert_eq!(classify(&task(e1(), 20.0)), TaskClass::Light);
        assert_eq!(classify(&task(e1(), 10.0)), TaskClass::Heavy);
    }

    #[test]
    fn constrained_deadline_is_enforced() {
        assert!(SporadicTask::new(e1(), 8.0, 7.0).is_err());
        assert!(SporadicTask::new(e1(), 0.0, 7.0).is_err());
    }

    #[test]
    fn path_cores_worked_examples() {
        assert_eq!(path_cores(&e2(), 7.0), Some(3));
        assert_eq!(path_cores(&e1(), 7.0), Some(2));
        assert_eq!(path_cores(&chain(&[1, 2, 3]), 6.0), Some(1));
        assert_eq!(path_cores(&e1(), 5.0), None);
    }

    #[test]
    fn edge_cores_worked_examples() {
        assert_eq!(edge_cores(&e2(), 7.0), Some(2));
        assert_eq!(edge_cores(&e1(), 6.0), Some(2));
        assert_eq!(edge_cores(&chain(&[1, 2, 3]), 10.0), Some(1));
        assert_eq!(edge_cores(&e2(), 5.0), None);
    }

    #[test]
    fn allocate_worked_examples() {
        let a = allocate_detailed(&e2(), 7.0).unwrap();
        assert_eq!(a.cores, 2);
        assert_eq!(a.edge_cores, Some(2));
        assert_eq!(allocate(&e1(), 6.0), Some(2));
        let a = allocate_detailed(&e1(), 6.0).unwrap();
        assert_eq!(a.winner, AllocMethod::Path);
        assert_eq!(allocate(&e1(), 5.5), None);
    }

    #[test]
    fn fed_rule() {
        // (10 - 6) / (7 - 6) = 4
        assert_eq!(fed_cores(&e1(), 7.0), Some(4));
        assert_eq!(fed_cores(&e1(), 6.0), None);
        assert_eq!(fed_cores(&chain(&[2, 2]), 4.0), Some(1));
    }

    #[test]
    fn one_heavy_task() {
        let ts = TaskSet::new(vec![task(e2(), 7.0)]);
        let r = schedule_task_set(&ts, 2).unwrap();
        assert!(r.schedulable);
        assert_eq!(r.total_cores_used, 2);
        assert!(!schedule_task_set(&ts, 1).unwrap().schedulable);
        assert!(schedule_task_set(&ts, 0).is_err());
    }

    #[test]
    fn light_packing() {
        // densities 6/10 and 5/10
        let ts = TaskSet::new(vec![task(chain(&[6]), 10.0), task(chain(&[5]), 10.0)]);
        let r1 = schedule_task_set(&ts, 1).unwrap();
        assert!(!r1.schedulable);
        let r2 = schedule_task_set(&ts, 2).unwrap();
        assert!(r2.schedulable);
        assert_eq!(r2.light_cores, 2);
        assert_eq!(r2.light[0].core, Some(0));
        assert_eq!(r2.light[1].core, Some(1));
    }

    #[test]
    fn light_tasks_share_a_core_when_they_fit() {
        let ts = TaskSet::new(vec![task(chain(&[3]), 10.0), task(chain(&[7]), 10.0)]);
        let r = schedule_task_set(&ts, 1).unwrap();
        assert!(r.schedulable);
        assert_eq!(r.total_cores_used, 1);
    }

    #[test]
    fn alpha_below_half_makes_generated_tasks_heavy() {
        use crate::taskgen::{gen_task, GenConfig};
        let cfg = GenConfig {
            vertices: (5, 30),
            ..GenConfig::default()
        };
        for seed in 0..50 {
            assert_eq!(classify(&gen_task(&cfg, seed).unwrap()), TaskClass::Heavy);
        }
    }
}
