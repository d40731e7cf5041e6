use serde::Serialize;

use super::{ReachabilityIndex, Time, VertexId, Weighted};
use crate::error::{Error, Result};

/// A vertex sequence in which every member is an ancestor of the next.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GeneralizedPath {
    vertices: Vec<VertexId>,
    length: Time,
}

impl GeneralizedPath {
    /// Validates the ancestor chain of `vertices` in `g` and measures it
    /// against `g`'s (effective) WCETs.
    pub fn measure<W: Weighted + ?Sized>(g: &W, vertices: Vec<VertexId>) -> Result<Self> {
        let idx = ReachabilityIndex::new(g.topology());
        Self::measure_with(g, &idx, vertices)
    }

    pub fn measure_with<W: Weighted + ?Sized>(
        g: &W,
        idx: &ReachabilityIndex,
        vertices: Vec<VertexId>,
    ) -> Result<Self> {
        if let Some(&v) = vertices.iter().find(|&&v| v >= g.weights().len()) {
            return Err(Error::UnknownVertex(v as u64));
        }
        for pair in vertices.windows(2) {
            if !idx.is_ancestor(pair[0], pair[1]) {
                return Err(Error::NotGeneralizedPath {
                    earlier: pair[0],
                    later: pair[1],
                });
            }
        }
        let length = vertices.iter().map(|&v| g.weights()[v]).sum();
        Ok(GeneralizedPath { vertices, length })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn length(&self) -> Time {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    /// Drops members whose weight in `g` is zero. The length is unchanged.
    pub fn strip_zero<W: Weighted + ?Sized>(&self, g: &W) -> GeneralizedPath {
        let w = g.weights();
        GeneralizedPath {
            vertices: self
                .vertices
                .iter()
                .copied()
                .filter(|&v| w[v] != 0)
                .collect(),
            length: self.length,
        }
    }
}

/// Pairwise vertex-disjoint generalized paths.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct GeneralizedPathList {
    paths: Vec<GeneralizedPath>,
}

impl GeneralizedPathList {
    pub fn new(paths: Vec<GeneralizedPath>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for p in &paths {
            for &v in p.vertices() {
                if !seen.insert(v) {
                    return Err(Error::OverlappingPaths(v));
                }
            }
        }
        Ok(GeneralizedPathList { paths })
    }

    pub(crate) fn push_unchecked(&mut self, path: GeneralizedPath) {
        self.paths.push(path);
    }

    pub fn paths(&self) -> &[GeneralizedPath] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn lengths(&self) -> Vec<Time> {
        self.paths.iter().map(GeneralizedPath::length).collect()
    }

    pub fn total_length(&self) -> Time {
        self.paths.iter().map(GeneralizedPath::length).sum()
    }
}

/// Left and right lengths of every vertex, both inclusive of the vertex.
///
/// Built on a residue graph these are the effective lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthTable {
    left: Vec<Time>,
    right: Vec<Time>,
}

impl LengthTable {
    /// Longest source-to-`v` length.
    pub fn left(&self, v: VertexId) -> Time {
        self.left[v]
    }

    /// Longest `v`-to-sink length.
    pub fn right(&self, v: VertexId) -> Time {
        self.right[v]
    }

    /// Longest complete path length through `v`, given `v`'s own weight.
    pub fn through(&self, v: VertexId, weight: Time) -> Time {
        self.left[v] + self.right[v] - weight
    }
}

pub fn length_tables<W: Weighted + ?Sized>(g: &W) -> LengthTable {
    let topo = g.topology();
    let w = g.weights();
    let n = w.len();
    let mut left = vec![0; n];
    let mut right = vec![0; n];
    for &v in topo.topological() {
        let best = topo
            .predecessors(v)
            .iter()
            .map(|&p| left[p])
            .max()
            .unwrap_or(0);
        left[v] = best + w[v];
    }
    for &v in topo.topological().iter().rev() {
        let best = topo
            .successors(v)
            .iter()
            .map(|&s| right[s])
            .max()
            .unwrap_or(0);
        right[v] = best + w[v];
    }
    LengthTable { left, right }
}

/// A complete source-to-sink path of maximal (effective) length.
///
/// Ties between predecessors are broken towards the smallest vertex id.
pub fn longest_path<W: Weighted + ?Sized>(g: &W) -> GeneralizedPath {
    let topo = g.topology();
    let w = g.weights();
    let mut left = vec![0; w.len()];
    for &v in topo.topological() {
        let best = topo
            .predecessors(v)
            .iter()
            .map(|&p| left[p])
            .max()
            .unwrap_or(0);
        left[v] = best + w[v];
    }
    let mut vertices = vec![topo.sink()];
    let mut v = topo.sink();
    while let Some(&first) = topo.predecessors(v).first() {
        // predecessors are sorted, so the first maximum is the smallest id
        let mut pick = first;
        for &p in topo.predecessors(v) {
            if left[p] > left[pick] {
                pick = p;
            }
        }
        vertices.push(pick);
        v = pick;
    }
    vertices.reverse();
    GeneralizedPath {
        vertices,
        length: left[topo.sink()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::e1;
    use crate::graph::{residue, DagTask};

    #[test]
    fn e1_longest_path() {
        let p = longest_path(&e1());
        assert_eq!(p.vertices(), &[0, 1, 4, 5]);
        assert_eq!(p.length(), 6);
    }

    #[test]
    fn chain_longest_path_is_the_chain() {
        let g = DagTask::build(vec![2, 5, 1, 3], &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let p = longest_path(&g);
        assert_eq!(p.vertices(), &[0, 1, 2, 3]);
        assert_eq!(p.length(), g.volume());
    }

    #[test]
    fn residue_longest_path() {
        let g = e1();
        let gamma0 = longest_path(&g);
        let r = residue(&g, &gamma0);
        let p = longest_path(&r);
        assert_eq!(p.vertices(), &[0, 3, 5]);
        assert_eq!(p.length(), 3);
    }

    #[test]
    fn ties_prefer_smallest_predecessor() {
        // 0 -> {1, 2} -> 3 with equal weights on 1 and 2
        let g = DagTask::build(vec![1, 2, 2, 1], &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(longest_path(&g).vertices(), &[0, 1, 3]);
    }

    #[test]
    fn e1_length_tables() {
        let g = e1();
        let t = length_tables(&g);
        assert_eq!((t.left(4), t.right(4)), (5, 2));
        assert_eq!(t.left(0), g.wcet(0));
        assert_eq!(t.right(5), g.wcet(5));
        assert_eq!(t.through(1, 3), 6);

        let r = residue(&g, &GeneralizedPath::measure(&g, vec![0, 3, 5]).unwrap());
        let et = length_tables(&r);
        assert_eq!((et.left(4), et.right(4)), (4, 1));
    }

    #[test]
    fn measure_rejects_non_chains() {
        let g = e1();
        assert!(GeneralizedPath::measure(&g, vec![0, 2, 5]).is_ok());
        assert!(matches!(
            GeneralizedPath::measure(&g, vec![1, 2]),
            Err(Error::NotGeneralizedPath {
                earlier: 1,
                later: 2
            })
        ));
    }

    #[test]
    fn path_list_rejects_overlap() {
        let g = e1();
        let a = GeneralizedPath::measure(&g, vec![0, 1]).unwrap();
        let b = GeneralizedPath::measure(&g, vec![1, 4]).unwrap();
        assert!(matches!(
            GeneralizedPathList::new(vec![a, b]),
            Err(Error::OverlappingPaths(1))
        ));
    }
}
