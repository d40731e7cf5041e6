//! JSON task and task-set files.
//!
//! ```json
//! {"vertices":[{"id":0,"wcet":1}],"edges":[[0,1]],"deadline":7,"period":7}
//! ```
//!
//! Vertex ids may be any distinct integers; they are mapped to dense
//! indices in input order, and written files always carry dense ids
//! (dummy source/sink included). Optimized graphs additionally list
//! `added_edges`.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::alloc::{SporadicTask, TaskSet};
use crate::error::{Error, Result};
use crate::graph::{DagTask, Time, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSpec {
    pub id: u64,
    pub wcet: Time,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskFile {
    pub vertices: Vec<VertexSpec>,
    pub edges: Vec<(u64, u64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deadline: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub added_edges: Vec<(u64, u64)>,
}

impl TaskFile {
    pub fn from_dag(g: &DagTask) -> Self {
        TaskFile {
            vertices: g
                .vertices()
                .map(|v| VertexSpec {
                    id: v as u64,
                    wcet: g.wcet(v),
                })
                .collect(),
            edges: g
                .edges()
                .into_iter()
                .map(|(u, v)| (u as u64, v as u64))
                .collect(),
            deadline: None,
            period: None,
            added_edges: Vec::new(),
        }
    }

    pub fn from_task(t: &SporadicTask) -> Self {
        TaskFile {
            deadline: Some(t.deadline()),
            period: Some(t.period()),
            ..TaskFile::from_dag(t.graph())
        }
    }

    pub fn with_added_edges(mut self, added: &[(VertexId, VertexId)]) -> Self {
        self.added_edges = added.iter().map(|&(u, v)| (u as u64, v as u64)).collect();
        self
    }

    pub fn to_dag(&self) -> Result<DagTask> {
        let mut index = HashMap::with_capacity(self.vertices.len());
        for (i, v) in self.vertices.iter().enumerate() {
            if index.insert(v.id, i).is_some() {
                return Err(Error::DuplicateVertex(v.id));
            }
        }
        let lookup = |id: u64| index.get(&id).copied().ok_or(Error::UnknownVertex(id));
        let mut edges = Vec::with_capacity(self.edges.len());
        for &(u, v) in &self.edges {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            edges.push((lookup(u)?, lookup(v)?));
        }
        DagTask::build(self.vertices.iter().map(|v| v.wcet).collect(), &edges)
    }

    /// A sporadic task; the period defaults to the deadline.
    pub fn to_task(&self) -> Result<SporadicTask> {
        let deadline = self
            .deadline
            .ok_or_else(|| Error::InvalidParameter("task file has no deadline".into()))?;
        SporadicTask::new(self.to_dag()?, deadline, self.period.unwrap_or(deadline))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("task files always serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskSetFile {
    pub tasks: Vec<TaskFile>,
}

impl TaskSetFile {
    pub fn from_task_set(ts: &TaskSet) -> Self {
        TaskSetFile {
            tasks: ts.tasks().iter().map(TaskFile::from_task).collect(),
        }
    }

    pub fn to_task_set(&self) -> Result<TaskSet> {
        let tasks = self
            .tasks
            .iter()
            .map(TaskFile::to_task)
            .collect::<Result<_>>()?;
        Ok(TaskSet::new(tasks))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("task sets always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::e1;

    const E1: &str = r#"{"vertices":[{"id":0,"wcet":1},{"id":1,"wcet":3},{"id":2,"wcet":1},
        {"id":3,"wcet":3},{"id":4,"wcet":1},{"id":5,"wcet":1}],
        "edges":[[0,1],[0,2],[0,3],[1,4],[2,4],[3,5],[4,5]],"deadline":7}"#;

    #[test]
    fn parses_the_task_format() {
        let f = TaskFile::parse(E1).unwrap();
        assert_eq!(f.to_dag().unwrap(), e1());
        let t = f.to_task().unwrap();
        assert_eq!((t.deadline(), t.period()), (7.0, 7.0));
    }

    #[test]
    fn sparse_ids_map_to_input_order() {
        let f = TaskFile::parse(
            r#"{"vertices":[{"id":10,"wcet":2},{"id":3,"wcet":1}],"edges":[[10,3]]}"#,
        )
        .unwrap();
        let g = f.to_dag().unwrap();
        assert_eq!(g.wcets(), &[2, 1]);
        assert!(g.has_edge(0, 1));
    }

    #[test]
    fn rejects_bad_files() {
        let bad_edge = r#"{"vertices":[{"id":0,"wcet":1}],"edges":[[0,4]]}"#;
        assert!(matches!(
            TaskFile::parse(bad_edge).unwrap().to_dag(),
            Err(Error::UnknownVertex(4))
        ));
        let dup = r#"{"vertices":[{"id":0,"wcet":1},{"id":0,"wcet":2}],"edges":[]}"#;
        assert!(matches!(
            TaskFile::parse(dup).unwrap().to_dag(),
            Err(Error::DuplicateVertex(0))
        ));
        let frac = r#"{"vertices":[{"id":0,"wcet":1.5}],"edges":[]}"#;
        assert!(TaskFile::parse(frac).is_err());
        let no_deadline = r#"{"vertices":[{"id":0,"wcet":1}],"edges":[]}"#;
        assert!(TaskFile::parse(no_deadline).unwrap().to_task().is_err());
    }

    #[test]
    fn emitted_files_carry_added_edges() {
        let g = e1().add_edge(2, 3).unwrap();
        let json = TaskFile::from_dag(&g).with_added_edges(&[(2, 3)]).to_json();
        assert!(json.contains(r#""added_edges":[[2,3]]"#));
        assert!(!json.contains("deadline"));
        assert_eq!(TaskFile::parse(&json).unwrap().to_dag().unwrap(), g);
    }
}
