use fixedbitset::FixedBitSet;

use super::{DagTask, VertexId};
use crate::error::{Error, Result};

/// Transitive closure of the edge relation, one bitset per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachabilityIndex {
    anc: Vec<FixedBitSet>,
    des: Vec<FixedBitSet>,
}

impl ReachabilityIndex {
    pub fn new(g: &DagTask) -> Self {
        let n = g.len();
        let mut anc = vec![FixedBitSet::with_capacity(n); n];
        let mut des = vec![FixedBitSet::with_capacity(n); n];
        for &v in g.topological() {
            let mut set = FixedBitSet::with_capacity(n);
            for &p in g.predecessors(v) {
                set.insert(p);
                set.union_with(&anc[p]);
            }
            anc[v] = set;
        }
        for &v in g.topological().iter().rev() {
            let mut set = FixedBitSet::with_capacity(n);
            for &s in g.successors(v) {
                set.insert(s);
                set.union_with(&des[s]);
            }
            des[v] = set;
        }
        ReachabilityIndex { anc, des }
    }

    pub fn len(&self) -> usize {
        self.anc.len()
    }

    pub fn is_empty(&self) -> bool {
        self.anc.is_empty()
    }

    /// Whether a non-trivial path leads from `u` to `v`.
    pub fn is_ancestor(&self, u: VertexId, v: VertexId) -> bool {
        self.anc[v].contains(u)
    }

    pub fn ancestors(&self, v: VertexId) -> &FixedBitSet {
        &self.anc[v]
    }

    pub fn descendants(&self, v: VertexId) -> &FixedBitSet {
        &self.des[v]
    }

    /// Vertices that are neither `v`, nor its ancestors, nor its descendants.
    pub fn para_set(&self, v: VertexId) -> Result<FixedBitSet> {
        if v >= self.len() {
            return Err(Error::UnknownVertex(v as u64));
        }
        let mut set = FixedBitSet::with_capacity(self.len());
        set.insert_range(..);
        set.difference_with(&self.anc[v]);
        set.difference_with(&self.des[v]);
        set.set(v, false);
        Ok(set)
    }

    /// The parallel set of `v` in ascending id order.
    pub fn para(&self, v: VertexId) -> Result<Vec<VertexId>> {
        Ok(self.para_set(v)?.ones().collect())
    }
}
