//! Registry of canonical equivalence relations ordered by Borel reducibility.
//!
//! Only positively known reductions are stored. Two relations with no path
//! between them are simply not known to be comparable here.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HierarchyError {
    #[error("unknown relation node {0:?}")]
    UnknownNode(String),
    #[error("relation node {0:?} already exists")]
    DuplicateNode(String),
    #[error("edge {from} -> {to} would close a cycle through a strict reduction")]
    StrictCycle { from: String, to: String },
    #[error("edge {from} -> {to} already exists")]
    DuplicateEdge { from: String, to: String },
    #[error("a relation is trivially reducible to itself")]
    SelfLoop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Canonical,
    Derived,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationNode {
    pub id: String,
    pub kind: NodeKind,
}

/// `from <=_B to`, strict when additionally `to` is not reducible back.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ReducibilityEdge {
    pub from: String,
    pub to: String,
    pub strict: bool,
    pub source: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Hierarchy {
    nodes: BTreeMap<String, NodeKind>,
    edges: BTreeMap<(String, String), ReducibilityEdge>,
}

const CANONICAL: [&str; 12] = [
    "=1", "=n", "=ω", "=2^ω", "E0", "E1", "EF2", "=+", "ESinf", "EG0", "EKsigma", "ESigma11",
];

/// `(from, to, strict, source)` of the known reductions.
pub const SEEDED_EDGES: [(&str, &str, bool, &str); 14] = [
    ("=1", "=n", true, "equality by cardinality"),
    ("=n", "=ω", true, "equality by cardinality"),
    ("=ω", "=2^ω", true, "equality by cardinality"),
    ("=2^ω", "E0", true, "eventual equality of binary sequences"),
    ("E0", "EF2", true, "orbit relations of Polish group actions"),
    (
        "EF2",
        "ESinf",
        true,
        "orbit relations of Polish group actions",
    ),
    (
        "ESinf",
        "EG0",
        true,
        "orbit relations of Polish group actions",
    ),
    ("E1", "EKsigma", true, "maximum K_sigma relation"),
    ("EF2", "=+", true, "jump of equality"),
    ("=+", "ESinf", true, "jump of equality"),
    (
        "H0",
        "EKsigma",
        false,
        "bounded differences are K_sigma-complete",
    ),
    (
        "EKsigma",
        "H0",
        false,
        "bounded differences are K_sigma-complete",
    ),
    ("EG0", "ESigma11", false, "maximum analytic relation"),
    ("EKsigma", "ESigma11", false, "maximum analytic relation"),
];

impl Hierarchy {
    pub fn new() -> Self {
        Hierarchy::default()
    }

    /// The canonical relations, `H0`, and all known reductions between them.
    pub fn seeded() -> Self {
        let mut h = Hierarchy::new();
        for id in CANONICAL {
            h.add_node(id, NodeKind::Canonical).expect("distinct ids");
        }
        h.add_node("H0", NodeKind::Derived).expect("distinct ids");
        for (from, to, strict, source) in SEEDED_EDGES {
            h.add_edge(from, to, strict, source)
                .expect("seeded edges are consistent");
        }
        h
    }

    pub fn add_node(&mut self, id: &str, kind: NodeKind) -> Result<(), HierarchyError> {
        if self.nodes.contains_key(id) {
            return Err(HierarchyError::DuplicateNode(id.into()));
        }
        self.nodes.insert(id.into(), kind);
        Ok(())
    }

    /// Records `from <=_B to`. Rejected if it would put a strict reduction on
    /// a cycle, since a strict reduction excludes the reverse one.
    pub fn add_edge(
        &mut self,
        from: &str,
        to: &str,
        strict: bool,
        source: &str,
    ) -> Result<(), HierarchyError> {
        self.require(from)?;
        self.require(to)?;
        if from == to {
            return Err(HierarchyError::SelfLoop);
        }
        let key = (from.to_string(), to.to_string());
        if self.edges.contains_key(&key) {
            return Err(HierarchyError::DuplicateEdge {
                from: from.into(),
                to: to.into(),
            });
        }
        let back = self.path_kinds(to, from);
        if back.plain && strict || back.strict {
            return Err(HierarchyError::StrictCycle {
                from: from.into(),
                to: to.into(),
            });
        }
        self.edges.insert(
            key,
            ReducibilityEdge {
                from: from.into(),
                to: to.into(),
                strict,
                source: source.into(),
            },
        );
        Ok(())
    }

    fn require(&self, id: &str) -> Result<(), HierarchyError> {
        if self.nodes.contains_key(id) {
            Ok(())
        } else {
            Err(HierarchyError::UnknownNode(id.into()))
        }
    }

    pub fn nodes(&self) -> Vec<RelationNode> {
        self.nodes
            .iter()
            .map(|(id, kind)| RelationNode {
                id: id.clone(),
                kind: *kind,
            })
            .collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = &ReducibilityEdge> {
        self.edges.values()
    }

    fn successors<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a ReducibilityEdge> + 'a {
        self.edges
            .range((id.to_string(), String::new())..)
            .take_while(move |((f, _), _)| f == id)
            .map(|(_, e)| e)
    }

    /// Whether some path `a -> b` exists, and whether one uses a strict edge.
    fn path_kinds(&self, a: &str, b: &str) -> PathKinds {
        // states: (node, passed a strict edge)
        let mut seen: BTreeSet<(&str, bool)> = BTreeSet::new();
        let mut queue = VecDeque::from([(a, false)]);
        let mut out = PathKinds::default();
        while let Some((node, strict)) = queue.pop_front() {
            if !seen.insert((node, strict)) {
                continue;
            }
            if node == b {
                out.plain = true;
                out.strict |= strict;
            }
            for e in self.successors(node) {
                queue.push_back((e.to.as_str(), strict || e.strict));
            }
        }
        out
    }

    /// `a <=_B b` by the recorded reductions; reflexive and transitive.
    pub fn reachable(&self, a: &str, b: &str) -> Result<bool, HierarchyError> {
        self.require(a)?;
        self.require(b)?;
        Ok(a == b || self.path_kinds(a, b).plain)
    }

    /// `a <=_B b` and `b <=_B a`.
    pub fn bireducible(&self, a: &str, b: &str) -> Result<bool, HierarchyError> {
        Ok(self.reachable(a, b)? && self.reachable(b, a)?)
    }

    /// Whether the strict edges alone form an acyclic graph.
    pub fn strict_part_is_acyclic(&self) -> bool {
        self.nodes.keys().all(|id| {
            self.edges
                .values()
                .filter(|e| e.strict && e.from == *id)
                .all(|e| !self.strict_reachable(&e.to, id))
        })
    }

    fn strict_reachable(&self, a: &str, b: &str) -> bool {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([a]);
        while let Some(node) = queue.pop_front() {
            if node == b {
                return true;
            }
            if seen.insert(node) {
                queue.extend(
                    self.successors(node)
                        .filter(|e| e.strict)
                        .map(|e| e.to.as_str()),
                );
            }
        }
        false
    }

    /// Graphviz rendering, sorted by node id and edge endpoints. Strict
    /// reductions are solid, plain ones dashed, and a pair reducible both
    /// ways is drawn once as a double edge.
    pub fn export_dot(&self) -> String {
        let mut out = String::from("digraph reducibility {\n  rankdir=BT;\n  node [shape=box];\n");
        for (id, kind) in &self.nodes {
            match kind {
                NodeKind::Canonical => writeln!(out, "  \"{id}\";"),
                NodeKind::Derived => writeln!(out, "  \"{id}\" [style=dashed];"),
            }
            .expect("writing to a String");
        }
        for ((from, to), e) in &self.edges {
            let reverse = self.edges.contains_key(&(to.clone(), from.clone()));
            let attrs = if reverse {
                if from > to {
                    continue;
                }
                " [dir=both, color=\"black:black\"]"
            } else if e.strict {
                ""
            } else {
                " [style=dashed]"
            };
            writeln!(out, "  \"{from}\" -> \"{to}\"{attrs};").expect("writing to a String");
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "nodes": self.nodes(),
            "edges": self.edges().collect::<Vec<_>>(),
        })
    }
}

#[derive(Default)]
struct PathKinds {
    plain: bool,
    strict: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_queries() {
        let h = Hierarchy::seeded();
        assert!(h.reachable("=2^ω", "E0").unwrap());
        assert!(!h.reachable("E1", "E0").unwrap());
        assert!(h.reachable("H0", "EKsigma").unwrap());
        assert!(h.reachable("EKsigma", "H0").unwrap());
        assert!(h.bireducible("H0", "EKsigma").unwrap());
        assert!(h.reachable("=1", "ESigma11").unwrap());
        assert!(h.reachable("E0", "E0").unwrap());
        assert!(!h.reachable("E0", "E1").unwrap());
        assert!(!h.reachable("=+", "EF2").unwrap());
        assert_eq!(
            h.reachable("E0", "nope"),
            Err(HierarchyError::UnknownNode("nope".into()))
        );
    }

    #[test]
    fn strict_cycles_are_rejected() {
        let mut h = Hierarchy::seeded();
        assert!(matches!(
            h.add_edge("EKsigma", "E1", true, "test"),
            Err(HierarchyError::StrictCycle { .. })
        ));
        assert!(h.add_edge("EKsigma", "E1", false, "test").is_err());
        assert!(h.add_edge("E0", "E1", true, "test").is_ok());
        assert!(h.strict_part_is_acyclic());
    }

    #[test]
    fn custom_nodes() {
        let mut h = Hierarchy::seeded();
        h.add_node("EKsigma⊗=+", NodeKind::Derived).unwrap();
        h.add_edge("EKsigma", "EKsigma⊗=+", false, "product")
            .unwrap();
        h.add_edge("=+", "EKsigma⊗=+", false, "product").unwrap();
        assert!(h.reachable("EF2", "EKsigma⊗=+").unwrap());
        assert!(h.add_node("E0", NodeKind::Derived).is_err());
    }

    #[test]
    fn dot_output() {
        let dot = Hierarchy::seeded().export_dot();
        assert!(dot.contains("  \"E1\" -> \"EKsigma\";\n"));
        assert!(dot.contains("\"EKsigma\" -> \"H0\" [dir=both"));
        assert!(!dot.contains("\"H0\" -> \"EKsigma\""));
        assert!(dot.contains("\"EG0\" -> \"ESigma11\" [style=dashed]"));
        assert_eq!(dot, Hierarchy::seeded().export_dot());
    }
}
