//! Non-preemptive, work-conserving list scheduling of one DAG job.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DagTask, Time, VertexId};
use crate::taskgen::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Slot {
    pub vertex: VertexId,
    pub core: usize,
    pub start: Time,
    pub finish: Time,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimTrace {
    pub cores: usize,
    /// Indexed by vertex.
    pub slots: Vec<Slot>,
    pub makespan: Time,
}

impl SimTrace {
    /// Gantt table with header `vertex,core,start,finish`, ordered by start.
    pub fn to_csv(&self) -> String {
        let mut rows: Vec<&Slot> = self.slots.iter().collect();
        rows.sort_by_key(|s| (s.start, s.core, s.vertex));
        let mut out = String::from("vertex,core,start,finish\n");
        for s in rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                s.vertex, s.core, s.start, s.finish
            ));
        }
        out
    }

    /// Checks the trace against `g` using nothing but the recorded slots:
    /// exact execution times, precedence, at most `cores` concurrent
    /// vertices, exclusive cores and work conservation.
    pub fn verify(&self, g: &DagTask) -> Result<(), String> {
        let m = self.cores;
        if self.slots.len() != g.len() {
            return Err(format!(
                "{} slots for {} vertices",
                self.slots.len(),
                g.len()
            ));
        }
        for (v, s) in self.slots.iter().enumerate() {
            if s.vertex != v || s.core >= m {
                return Err(format!("malformed slot {s:?}"));
            }
            if s.finish != s.start + g.wcet(v) {
                return Err(format!(
                    "vertex {v} runs {} units, expected {}",
                    s.finish - s.start,
                    g.wcet(v)
                ));
            }
            for &p in g.predecessors(v) {
                if s.start < self.slots[p].finish {
                    return Err(format!("vertex {v} starts before predecessor {p} finishes"));
                }
            }
        }
        if self.makespan != self.slots[g.sink()].finish {
            return Err("makespan differs from the sink's finish".into());
        }

        let busy = |t: Time| {
            self.slots
                .iter()
                .filter(|s| s.start <= t && t < s.finish)
                .count()
        };
        let mut instants: Vec<Time> = self
            .slots
            .iter()
            .flat_map(|s| [s.start, s.finish])
            .collect();
        instants.sort_unstable();
        instants.dedup();
        for &t in &instants {
            if busy(t) > m {
                return Err(format!("more than {m} vertices run at time {t}"));
            }
        }
        for (i, a) in self.slots.iter().enumerate() {
            for b in &self.slots[i + 1..] {
                if a.core == b.core && a.start < b.finish && b.start < a.finish {
                    return Err(format!(
                        "vertices {} and {} overlap on core {}",
                        a.vertex, b.vertex, a.core
                    ));
                }
            }
        }
        for (v, s) in self.slots.iter().enumerate() {
            let ready = g
                .predecessors(v)
                .iter()
                .map(|&p| self.slots[p].finish)
                .max()
                .unwrap_or(0);
            // every finish time is an instant, so `ready` is covered
            for t in instants
                .iter()
                .copied()
                .filter(|&t| t >= ready && t < s.start)
            {
                if busy(t) < m {
                    return Err(format!("vertex {v} waits at time {t} while a core is idle"));
                }
            }
        }
        Ok(())
    }
}

/// List-schedules `g` on `m` cores. `priority` lists every vertex once,
/// highest priority first; free cores are filled lowest id first.
pub fn simulate(g: &DagTask, m: usize, priority: &[VertexId]) -> Result<SimTrace> {
    if m == 0 {
        return Err(Error::ZeroCores);
    }
    let n = g.len();
    let mut rank = vec![usize::MAX; n];
    if priority.len() != n {
        return Err(Error::InvalidPriority(format!(
            "expected {n} vertices, got {}",
            priority.len()
        )));
    }
    for (r, &v) in priority.iter().enumerate() {
        if v >= n || rank[v] != usize::MAX {
            return Err(Error::InvalidPriority(format!(
                "vertex {v} is unknown or repeated"
            )));
        }
        rank[v] = r;
    }

    let mut waiting: Vec<usize> = (0..n).map(|v| g.predecessors(v).len()).collect();
    let mut ready: BTreeSet<(usize, VertexId)> = (0..n)
        .filter(|&v| waiting[v] == 0)
        .map(|v| (rank[v], v))
        .collect();
    let mut free: BTreeSet<usize> = (0..m).collect();
    // (finish, core, vertex)
    let mut running: BinaryHeap<Reverse<(Time, usize, VertexId)>> = BinaryHeap::new();
    let mut slots = vec![
        Slot {
            vertex: 0,
            core: 0,
            start: 0,
            finish: 0,
        };
        n
    ];
    let mut now: Time = 0;

    loop {
        while !free.is_empty() && !ready.is_empty() {
            let core = free.pop_first().unwrap();
            let (_, v) = ready.pop_first().unwrap();
            let finish = now + g.wcet(v);
            slots[v] = Slot {
                vertex: v,
                core,
                start: now,
                finish,
            };
            running.push(Reverse((finish, core, v)));
        }
        let Some(&Reverse((next, _, _))) = running.peek() else {
            break;
        };
        now = next;
        while let Some(&Reverse((finish, core, v))) = running.peek() {
            if finish != now {
                break;
            }
            running.pop();
            free.insert(core);
            for &s in g.successors(v) {
                waiting[s] -= 1;
                if waiting[s] == 0 {
                    ready.insert((rank[s], s));
                }
            }
        }
    }

    Ok(SimTrace {
        cores: m,
        makespan: slots[g.sink()].finish,
        slots,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationReport {
    pub trials: usize,
    pub max_makespan: Time,
    pub min_makespan: Time,
    pub bound: f64,
}

/// Simulates `trials` uniformly random priority orders and fails with
/// [`Error::SoundnessViolation`] if any makespan exceeds `bound`.
pub fn validate_bound(
    g: &DagTask,
    m: usize,
    bound: f64,
    trials: usize,
    seed: u64,
) -> Result<ValidationReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut order: Vec<VertexId> = g.vertices().collect();
    let mut max_makespan = 0;
    let mut min_makespan = Time::MAX;
    for _ in 0..trials {
        order.shuffle(&mut rng);
        let trace = simulate(g, m, &order)?;
        max_makespan = max_makespan.max(trace.makespan);
        min_makespan = min_makespan.min(trace.makespan);
    }
    if max_makespan as f64 > bound {
        return Err(Error::SoundnessViolation {
            observed: max_makespan,
            bound,
        });
    }
    Ok(ValidationReport {
        trials,
        max_makespan,
        min_makespan,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::e1;

    #[test]
    fn e1_schedule_with_response_seven() {
        let trace = simulate(&e1(), 2, &[0, 2, 3, 1, 4, 5]).unwrap();
        assert_eq!(trace.makespan, 7);
        trace.verify(&e1()).unwrap();
        assert_eq!((trace.slots[1].start, trace.slots[3].start), (2, 1));
    }

    #[test]
    fn e1_with_added_edge_finishes_at_six() {
        let g = e1().add_edge(2, 3).unwrap();
        let trace = simulate(&g, 2, &[0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(trace.makespan, 6);
        trace.verify(&g).unwrap();
    }

    #[test]
    fn enough_cores_give_the_longest_path() {
        let g = e1();
        let trace = simulate(&g, 3, &[5, 4, 3, 2, 1, 0]).unwrap();
        assert_eq!(trace.makespan, g.critical_length());
    }

    #[test]
    fn zero_wcet_dummies_do_not_stall() {
        let g = DagTask::build(vec![2, 3, 1], &[]).unwrap();
        let order: Vec<_> = g.vertices().collect();
        let trace = simulate(&g, 2, &order).unwrap();
        trace.verify(&g).unwrap();
        assert_eq!(trace.makespan, 3);
    }

    #[test]
    fn rejects_bad_priorities() {
        assert!(matches!(
            simulate(&e1(), 2, &[0, 1]),
            Err(Error::InvalidPriority(_))
        ));
        assert!(matches!(
            simulate(&e1(), 2, &[0, 0, 1, 2, 3, 4]),
            Err(Error::InvalidPriority(_))
        ));
        assert!(matches!(
            simulate(&e1(), 0, &[0, 1, 2, 3, 4, 5]),
            Err(Error::ZeroCores)
        ));
    }

    #[test]
    fn verify_catches_idle_cores() {
        let g = e1();
        let mut trace = simulate(&g, 2, &[0, 2, 3, 1, 4, 5]).unwrap();
        // delay v3 by one unit while core 1 sits idle
        trace.slots[3].start += 1;
        trace.slots[3].finish += 1;
        assert!(trace.verify(&g).is_err());
    }

    #[test]
    fn validation_examples() {
        let g = e1();
        assert!(validate_bound(&g, 2, 7.0, 100, 1).unwrap().max_makespan <= 7);
        let g1 = g.add_edge(2, 3).unwrap();
        assert!(validate_bound(&g1, 2, 6.0, 100, 1).unwrap().max_makespan <= 6);
        let chain = DagTask::build(vec![1, 2, 3], &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            validate_bound(&chain, 1, 6.0, 10, 1).unwrap().max_makespan,
            6
        );
        assert!(matches!(
            validate_bound(&g, 2, 6.5, 100, 1),
            Err(Error::SoundnessViolation { observed: 7, .. })
        ));
    }

    #[test]
    fn gantt_csv() {
        let trace = simulate(&e1(), 2, &[0, 2, 3, 1, 4, 5]).unwrap();
        let csv = trace.to_csv();
        assert!(csv.starts_with("vertex,core,start,finish\n0,0,0,1\n"));
        assert_eq!(csv.lines().count(), 7);
    }
}
