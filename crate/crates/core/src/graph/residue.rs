use super::{DagTask, GeneralizedPath, Time, Weighted};

/// A DAG whose vertices carry effective WCETs: zero for vertices consumed by
/// earlier generalized paths, the original WCET otherwise.
///
/// The topology is shared with the base graph, so the base WCETs stay
/// available through [`ResidueGraph::base`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueGraph {
    base: DagTask,
    effective: Vec<Time>,
}

impl ResidueGraph {
    /// The residue with nothing consumed yet.
    pub fn new(base: DagTask) -> Self {
        let effective = base.wcets().to_vec();
        ResidueGraph { base, effective }
    }

    pub fn base(&self) -> &DagTask {
        &self.base
    }

    pub(crate) fn base_mut(&mut self) -> &mut DagTask {
        &mut self.base
    }

    pub fn effective_wcet(&self, v: usize) -> Time {
        self.effective[v]
    }

    pub fn is_consumed(&self, v: usize) -> bool {
        self.effective[v] == 0
    }

    /// Zeroes the effective WCET of every member of `path`.
    pub fn consume(&mut self, path: &GeneralizedPath) {
        for &v in path.vertices() {
            self.effective[v] = 0;
        }
    }

    pub fn into_base(self) -> DagTask {
        self.base
    }
}

impl From<DagTask> for ResidueGraph {
    fn from(base: DagTask) -> Self {
        ResidueGraph::new(base)
    }
}

impl Weighted for ResidueGraph {
    fn topology(&self) -> &DagTask {
        &self.base
    }

    fn weights(&self) -> &[Time] {
        &self.effective
    }
}

/// `res(g, path)`: a copy of `g` with the members of `path` zeroed.
pub fn residue<W: Weighted + ?Sized>(g: &W, path: &GeneralizedPath) -> ResidueGraph {
    let mut r = ResidueGraph {
        base: g.topology().clone(),
        effective: g.weights().to_vec(),
    };
    r.consume(path);
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::e1;
    use crate::graph::{volume, ReachabilityIndex};

    fn path(g: &DagTask, vs: &[usize]) -> GeneralizedPath {
        GeneralizedPath::measure(g, vs.to_vec()).unwrap()
    }

    #[test]
    fn residue_zeroes_members() {
        let g = e1();
        let r = residue(&g, &path(&g, &[0, 3, 5]));
        assert_eq!(r.weights(), &[0, 3, 1, 0, 1, 0]);
        assert_eq!(volume(&r), 5);
        assert_eq!(r.base().wcets(), g.wcets());
    }

    #[test]
    fn empty_path_leaves_weights_unchanged() {
        let g = e1();
        let r = residue(&g, &GeneralizedPath::default());
        assert_eq!(r.weights(), g.wcets());
    }

    #[test]
    fn residues_compose() {
        let g = e1().add_edge(2, 3).unwrap();
        let r0 = residue(&g, &path(&g, &[0, 1, 4, 5]));
        assert_eq!(volume(&r0), 4);
        let r1 = residue(&r0, &path(&g, &[0, 2, 3, 5]));
        assert_eq!(volume(&r1), 0);
        assert_eq!(
            ReachabilityIndex::new(r1.base()),
            ReachabilityIndex::new(&g)
        );
    }
}
