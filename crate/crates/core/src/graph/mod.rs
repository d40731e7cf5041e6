//! DAG task representation and structural queries.
//!
//! A [`DagTask`] is normalized at construction: the edge relation is
//! acyclic, there is exactly one source and one sink (zero-WCET dummies are
//! inserted when needed), and vertex ids are dense indices `0..n` in input
//! order. Values are immutable; [`DagTask::add_edge`] returns a new graph.

mod path;
mod reach;
mod residue;

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

pub use path::{length_tables, longest_path, GeneralizedPath, GeneralizedPathList, LengthTable};
pub use reach::ReachabilityIndex;
pub use residue::{residue, ResidueGraph};

use crate::error::{Error, Result};

/// Dense vertex index.
pub type VertexId = usize;

/// Execution time in integral time units.
pub type Time = u64;

/// Anything that assigns a WCET to every vertex of a DAG topology.
///
/// Implemented by [`DagTask`] (the vertex WCETs) and [`ResidueGraph`]
/// (the effective WCETs after consuming generalized paths).
pub trait Weighted {
    fn topology(&self) -> &DagTask;
    fn weights(&self) -> &[Time];
}

/// Sum of the (effective) WCETs.
pub fn volume<W: Weighted + ?Sized>(g: &W) -> Time {
    g.weights().iter().sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DagTask {
    wcet: Vec<Time>,
    succ: Vec<Vec<VertexId>>,
    pred: Vec<Vec<VertexId>>,
    topo: Vec<VertexId>,
    source: VertexId,
    sink: VertexId,
    dummies: Vec<VertexId>,
}

impl Weighted for DagTask {
    fn topology(&self) -> &DagTask {
        self
    }

    fn weights(&self) -> &[Time] {
        &self.wcet
    }
}

impl DagTask {
    /// Builds and normalizes a DAG from dense WCETs and an edge list.
    ///
    /// Vertex `i` has WCET `wcets[i]`. Self-loops, parallel edges and
    /// cycles are rejected. When several vertices lack predecessors
    /// (successors) a zero-WCET source (sink) is appended and connected.
    pub fn build(wcets: Vec<Time>, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let n = wcets.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        let mut seen = HashSet::with_capacity(edges.len());
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::UnknownVertex(x as u64));
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u as u64));
            }
            if !seen.insert((u, v)) {
                return Err(Error::DuplicateEdge(u as u64, v as u64));
            }
            succ[u].push(v);
            pred[v].push(u);
        }

        let mut g = DagTask {
            wcet: wcets,
            succ,
            pred,
            topo: Vec::new(),
            source: 0,
            sink: 0,
            dummies: Vec::new(),
        };
        g.topo = g.topological_order()?;

        let sources: Vec<_> = (0..n).filter(|&v| g.pred[v].is_empty()).collect();
        let sinks: Vec<_> = (0..n).filter(|&v| g.succ[v].is_empty()).collect();
        g.source = if sources.len() == 1 {
            sources[0]
        } else {
            let s = g.push_vertex(0);
            for &v in &sources {
                g.push_edge(s, v);
            }
            g.dummies.push(s);
            s
        };
        g.sink = if sinks.len() == 1 {
            sinks[0]
        } else {
            let t = g.push_vertex(0);
            for &v in &sinks {
                g.push_edge(v, t);
            }
            g.dummies.push(t);
            t
        };
        for list in g.succ.iter_mut().chain(g.pred.iter_mut()) {
            list.sort_unstable();
        }
        g.topo = g.topological_order()?;
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.wcet.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wcet.is_empty()
    }

    pub fn wcet(&self, v: VertexId) -> Time {
        self.wcet[v]
    }

    pub fn wcets(&self) -> &[Time] {
        &self.wcet
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn sink(&self) -> VertexId {
        self.sink
    }

    /// Vertices inserted by normalization.
    pub fn dummies(&self) -> &[VertexId] {
        &self.dummies
    }

    pub fn successors(&self, v: VertexId) -> &[VertexId] {
        &self.succ[v]
    }

    pub fn predecessors(&self, v: VertexId) -> &[VertexId] {
        &self.pred[v]
    }

    /// Topological order, smallest ready id first.
    pub fn topological(&self) -> &[VertexId] {
        &self.topo
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.wcet.len()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// All edges in ascending `(u, v)` order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        self.vertices()
            .flat_map(|u| self.succ[u].iter().map(move |&v| (u, v)))
            .collect()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.succ[u].binary_search(&v).is_ok()
    }

    pub fn volume(&self) -> Time {
        volume(self)
    }

    /// Length of the longest complete path.
    pub fn critical_length(&self) -> Time {
        longest_path(self).length()
    }

    /// Returns a copy of the graph with the edge `(u, v)` inserted.
    ///
    /// `u` must lie in the parallel set of `v`.
    pub fn add_edge(&self, u: VertexId, v: VertexId) -> Result<DagTask> {
        let idx = ReachabilityIndex::new(self);
        self.add_edge_checked(&idx, u, v)
    }

    /// Same as [`DagTask::add_edge`], reusing a reachability index that is
    /// current for `self`.
    pub fn add_edge_checked(
        &self,
        idx: &ReachabilityIndex,
        u: VertexId,
        v: VertexId,
    ) -> Result<DagTask> {
        self.check_parallel(idx, u, v)?;
        let mut g = self.clone();
        g.insert_edge(u, v);
        Ok(g)
    }

    pub(crate) fn check_parallel(
        &self,
        idx: &ReachabilityIndex,
        u: VertexId,
        v: VertexId,
    ) -> Result<()> {
        for x in [u, v] {
            if x >= self.len() {
                return Err(Error::UnknownVertex(x as u64));
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u as u64));
        }
        if idx.is_ancestor(u, v) {
            return Err(Error::RedundantEdge(u, v));
        }
        if idx.is_ancestor(v, u) {
            return Err(Error::CyclicEdge(u, v));
        }
        Ok(())
    }

    /// Inserts an edge between two mutually parallel vertices in place.
    pub(crate) fn insert_edge(&mut self, u: VertexId, v: VertexId) {
        let at = self.succ[u].binary_search(&v).unwrap_err();
        self.succ[u].insert(at, v);
        let at = self.pred[v].binary_search(&u).unwrap_err();
        self.pred[v].insert(at, u);
        self.topo = self
            .topological_order()
            .expect("edge between parallel vertices keeps the graph acyclic");
    }

    fn push_vertex(&mut self, wcet: Time) -> VertexId {
        self.wcet.push(wcet);
        self.succ.push(Vec::new());
        self.pred.push(Vec::new());
        self.wcet.len() - 1
    }

    fn push_edge(&mut self, u: VertexId, v: VertexId) {
        self.succ[u].push(v);
        self.pred[v].push(u);
    }

    fn topological_order(&self) -> Result<Vec<VertexId>> {
        let n = self.len();
        let mut indeg: Vec<usize> = self.pred.iter().map(Vec::len).collect();
        let mut ready: BinaryHeap<Reverse<VertexId>> =
            (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(u)) = ready.pop() {
            order.push(u);
            for &v in &self.succ[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    ready.push(Reverse(v));
                }
            }
        }
        if order.len() < n {
            let stuck = (0..n).find(|&v| indeg[v] > 0).unwrap_or(0);
            return Err(Error::Cycle(stuck));
        }
        Ok(order)
    }
}
