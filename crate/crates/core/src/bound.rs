//! Response-time bounds for a DAG task under any work-conserving scheduler.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{longest_path, volume, DagTask, GeneralizedPathList, ResidueGraph, Time};

/// Graham's bound `len + (vol - len) / m`.
pub fn graham_bound(g: &DagTask, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::ZeroCores);
    }
    let len = g.critical_length() as f64;
    Ok(len + (g.volume() as f64 - len) / m as f64)
}

/// Baseline generalized path list: repeatedly take the longest path of the
/// residue graph, drop its already-consumed members and consume it, until
/// the residual volume is zero.
pub fn extract_path_list(g: &DagTask) -> GeneralizedPathList {
    let mut residue = ResidueGraph::new(g.clone());
    let mut list = GeneralizedPathList::default();
    while volume(&residue) != 0 {
        let path = longest_path(&residue).strip_zero(&residue);
        residue.consume(&path);
        list.push_unchecked(path);
    }
    list
}

/// The multi-path bound: the minimum over `j` in `[0, min(k, m - 1)]` of
/// `len + (vol - sum_{i <= j} len(path_i)) / (m - j)`.
///
/// The first path must be as long as the longest path of `g`. An empty list
/// is accepted only for a zero-length graph.
pub fn multipath_bound(g: &DagTask, list: &GeneralizedPathList, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::ZeroCores);
    }
    let len = g.critical_length();
    let first = list.paths().first().map_or(0, |p| p.length());
    if first != len {
        return Err(Error::NotLongestPath {
            first,
            longest: len,
        });
    }
    Ok(bound_from_lengths(len, g.volume(), &list.lengths(), m))
}

/// Evaluates the multi-path bound from raw quantities; `lengths[0]` is
/// assumed to be the longest path length.
pub(crate) fn bound_from_lengths(len: Time, vol: Time, lengths: &[Time], m: usize) -> f64 {
    let len_f = len as f64;
    let mut best = len_f + (vol as f64 - len_f) / m as f64;
    let mut consumed: Time = 0;
    for (j, &l) in lengths.iter().enumerate().take(m) {
        consumed += l;
        let term = len_f + (vol - consumed) as f64 / (m - j) as f64;
        best = best.min(term);
    }
    best
}

/// The smallest multi-path bound over several candidate lists for `g`.
///
/// Candidates whose first path is not a longest path of `g` are skipped.
/// Returns the bound and the index of the winning list (first on ties), or
/// `None` when no candidate qualifies.
pub fn best_bound(
    g: &DagTask,
    candidates: &[&GeneralizedPathList],
    m: usize,
) -> Result<Option<(f64, usize)>> {
    if m == 0 {
        return Err(Error::ZeroCores);
    }
    let len = g.critical_length();
    let vol = g.volume();
    let mut best: Option<(f64, usize)> = None;
    for (i, list) in candidates.iter().enumerate() {
        if list.paths().first().map_or(0, |p| p.length()) != len {
            continue;
        }
        let b = bound_from_lengths(len, vol, &list.lengths(), m);
        if best.is_none_or(|(cur, _)| b < cur) {
            best = Some((b, i));
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub volume: Time,
    pub longest_path: Time,
    pub cores: usize,
    pub graham: f64,
    pub multipath: f64,
    pub path_lengths: Vec<Time>,
}

impl BoundReport {
    /// Assembles a report for `g` from an already valid path list.
    pub fn with_list(g: &DagTask, list: &GeneralizedPathList, m: usize) -> Result<Self> {
        Ok(BoundReport {
            volume: g.volume(),
            longest_path: g.critical_length(),
            cores: m,
            graham: graham_bound(g, m)?,
            multipath: multipath_bound(g, list, m)?,
            path_lengths: list.lengths(),
        })
    }
}

/// Graham's bound and the multi-path bound of the baseline path list.
pub fn analyze(g: &DagTask, m: usize) -> Result<BoundReport> {
    BoundReport::with_list(g, &extract_path_list(g), m)
}
