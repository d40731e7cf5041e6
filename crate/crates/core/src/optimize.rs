//! Edge insertion that makes long generalized paths.
//!
//! The driver repeatedly takes the longest path of the residue graph and
//! tries to extend it by inserting one precedence edge `(u, v)` with `v` on
//! the path. A candidate is accepted when
//!
//! 1. `u` is in the parallel set of `v`,
//! 2. `l(u) + r(v) <= limit` on the current graph, so the longest path of
//!    the graph stays within `limit`, and
//! 3. `el(u) + er(v) > len(G_r)` on the residue, so the residue's longest
//!    path strictly grows.
//!
//! When no candidate passes, the path (without consumed members) is emitted
//! and consumed. The emitted list exhausts the volume of the task.

use serde::Serialize;

use crate::bound::{best_bound, extract_path_list};
use crate::error::{Error, Result};
use crate::graph::{
    length_tables, longest_path, volume, DagTask, GeneralizedPath, GeneralizedPathList,
    LengthTable, ReachabilityIndex, ResidueGraph, Time, VertexId,
};

/// One accepted insertion and the residue's longest-path length around it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Insertion {
    pub edge: (VertexId, VertexId),
    pub residue_len_before: Time,
    pub residue_len_after: Time,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationResult {
    #[serde(skip)]
    pub graph: DagTask,
    pub added_edges: Vec<(VertexId, VertexId)>,
    pub paths: GeneralizedPathList,
    pub limit: f64,
    #[serde(skip)]
    pub insertions: Vec<Insertion>,
}

/// Whether inserting `(u, v)` keeps every path through it within `limit`.
pub fn check_length_limit(tables: &LengthTable, u: VertexId, v: VertexId, limit: f64) -> bool {
    ((tables.left(u) + tables.right(v)) as f64) <= limit
}

/// Whether inserting `(u, v)` creates a residue path longer than `residue_len`.
pub fn check_residue_growth(
    residue_tables: &LengthTable,
    u: VertexId,
    v: VertexId,
    residue_len: Time,
) -> bool {
    residue_tables.left(u) + residue_tables.right(v) > residue_len
}

/// Scans `path` in order and, for each member `v`, its parallel set in
/// ascending id order. The first candidate passing all checks is inserted
/// into the shared topology of the graph and its residue and returned.
pub fn add_edge_pass(
    path: &GeneralizedPath,
    residue: &mut ResidueGraph,
    limit: f64,
) -> Option<(VertexId, VertexId)> {
    let g = residue.base();
    let idx = ReachabilityIndex::new(g);
    let tables = length_tables(g);
    let residue_tables = length_tables(&*residue);
    let residue_len = residue_tables.left(g.sink());

    let found = path.vertices().iter().find_map(|&v| {
        let para = idx.para_set(v).ok()?;
        para.ones()
            .find(|&u| {
                check_length_limit(&tables, u, v, limit)
                    && check_residue_growth(&residue_tables, u, v, residue_len)
            })
            .map(|u| (u, v))
    });
    if let Some((u, v)) = found {
        residue.base_mut().insert_edge(u, v);
    }
    found
}

/// Runs the edge-insertion framework with the given longest-path limit,
/// which must lie in `[len(g), vol(g)]`.
pub fn optimize(g: &DagTask, limit: f64) -> Result<OptimizationResult> {
    let len = g.critical_length();
    let vol = g.volume();
    if !(limit >= len as f64 && limit <= vol as f64) {
        return Err(Error::LimitOutOfRange { limit, len, vol });
    }

    let max_edges = g.len() * g.len();
    let mut residue = ResidueGraph::new(g.clone());
    let mut paths = GeneralizedPathList::default();
    let mut added_edges = Vec::new();
    let mut insertions = Vec::new();
    let mut pending: Option<((VertexId, VertexId), Time)> = None;

    while volume(&residue) != 0 {
        let gamma = longest_path(&residue);
        if let Some((edge, before)) = pending.take() {
            insertions.push(Insertion {
                edge,
                residue_len_before: before,
                residue_len_after: gamma.length(),
            });
        }
        if added_edges.len() < max_edges {
            if let Some(edge) = add_edge_pass(&gamma, &mut residue, limit) {
                added_edges.push(edge);
                pending = Some((edge, gamma.length()));
                continue;
            }
        }
        let gamma = gamma.strip_zero(&residue);
        residue.consume(&gamma);
        paths.push_unchecked(gamma);
    }

    Ok(OptimizationResult {
        graph: residue.into_base(),
        added_edges,
        paths,
        limit,
        insertions,
    })
}

/// Optimizes with `limit = len(g)` and bounds the optimized graph.
///
/// Both the emitted list and the baseline list of `g` certify the optimized
/// graph, since its longest path keeps its length and ancestry only grows;
/// the smaller of the two bounds is returned.
pub fn optimize_for_bound(g: &DagTask, m: usize) -> Result<(OptimizationResult, f64)> {
    if m == 0 {
        return Err(Error::ZeroCores);
    }
    let result = optimize(g, g.critical_length() as f64)?;
    let baseline = extract_path_list(g);
    let (bound, _) = best_bound(&result.graph, &[&result.paths, &baseline], m)?
        .expect("the baseline list of the input stays valid under limit = len");
    Ok((result, bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::multipath_bound;
    use crate::graph::residue;
    use crate::graph::tests::{e1, e2};

    #[test]
    fn length_limit_on_e1() {
        let t = length_tables(&e1());
        assert!(check_length_limit(&t, 2, 3, 6.0));
        assert!(!check_length_limit(&t, 1, 3, 6.0));
        let t2 = length_tables(&e2());
        assert!(check_length_limit(&t2, 2, 3, 7.0));
    }

    #[test]
    fn residue_growth_on_e1() {
        let g = e1();
        let r = residue(&g, &longest_path(&g));
        let rt = length_tables(&r);
        assert_eq!((rt.left(2), rt.right(3)), (1, 3));
        assert!(check_residue_growth(&rt, 2, 3, 3));

        let own = length_tables(&g);
        assert!(!check_residue_growth(&own, 3, 4, 6));
    }

    #[test]
    fn first_pass_on_e1_adds_nothing() {
        let g = e1();
        let mut r = ResidueGraph::new(g.clone());
        let gamma = longest_path(&r);
        assert_eq!(add_edge_pass(&gamma, &mut r, 6.0), None);
        assert_eq!(r.base(), &g);
    }

    #[test]
    fn second_pass_on_e1_adds_v2_v3() {
        let g = e1();
        let mut r = residue(&g, &longest_path(&g));
        let gamma = longest_path(&r);
        assert_eq!(gamma.vertices(), &[0, 3, 5]);
        assert_eq!(add_edge_pass(&gamma, &mut r, 6.0), Some((2, 3)));
        assert!(r.base().has_edge(2, 3));
    }

    #[test]
    fn pass_on_two_vertex_chain_adds_nothing() {
        let g = DagTask::build(vec![1, 2], &[(0, 1)]).unwrap();
        let mut r = ResidueGraph::new(g);
        let gamma = longest_path(&r);
        assert_eq!(add_edge_pass(&gamma, &mut r, 3.0), None);
    }

    #[test]
    fn optimize_e1() {
        let res = optimize(&e1(), 6.0).unwrap();
        assert_eq!(res.added_edges, vec![(2, 3)]);
        let vs: Vec<_> = res
            .paths
            .paths()
            .iter()
            .map(|p| p.vertices().to_vec())
            .collect();
        assert_eq!(vs, vec![vec![0, 1, 4, 5], vec![2, 3]]);
        assert_eq!(res.paths.lengths(), vec![6, 4]);
        assert_eq!(multipath_bound(&res.graph, &res.paths, 2).unwrap(), 6.0);
        assert_eq!(res.insertions.len(), 1);
        assert_eq!(res.insertions[0].residue_len_before, 3);
        assert_eq!(res.insertions[0].residue_len_after, 4);
    }

    #[test]
    fn optimize_e2_with_deadline_limit() {
        let res = optimize(&e2(), 7.0).unwrap();
        assert_eq!(res.added_edges, vec![(2, 3)]);
        assert_eq!(res.paths.lengths(), vec![6, 5]);
        assert_eq!(res.paths.total_length(), 11);
        assert_eq!(res.graph.critical_length(), 7);
    }

    #[test]
    fn optimize_chain_adds_nothing() {
        let g = DagTask::build(vec![1, 2, 3], &[(0, 1), (1, 2)]).unwrap();
        let res = optimize(&g, 6.0).unwrap();
        assert!(res.added_edges.is_empty());
        assert_eq!(res.paths.lengths(), vec![6]);
    }

    #[test]
    fn optimize_rejects_limits_outside_range() {
        assert!(matches!(
            optimize(&e1(), 5.0),
            Err(Error::LimitOutOfRange {
                len: 6,
                vol: 10,
                ..
            })
        ));
        assert!(optimize(&e1(), 10.5).is_err());
        assert!(optimize(&e1(), f64::NAN).is_err());
        assert!(optimize(&e1(), 10.0).is_ok());
    }

    #[test]
    fn optimize_for_bound_worked_examples() {
        assert_eq!(optimize_for_bound(&e1(), 2).unwrap().1, 6.0);
        assert_eq!(optimize_for_bound(&e1(), 1).unwrap().1, 10.0);
        let (_, b) = optimize_for_bound(&e2(), 2).unwrap();
        assert!(b <= 8.0);
        assert!(matches!(
            optimize_for_bound(&e1(), 0),
            Err(Error::ZeroCores)
        ));
    }

    #[test]
    fn optimize_leaves_input_untouched() {
        let g = e1();
        let before = g.clone();
        let _ = optimize(&g, 6.0).unwrap();
        assert_eq!(g, before);
    }
}
