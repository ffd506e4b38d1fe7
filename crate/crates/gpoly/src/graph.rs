//! Abstract multigraphs with oriented edges, vertex weights and flags.
//!
//! Everything is immutable: contraction and deletion return new graphs.
//! Vertex, edge and flag ids are strings ordered lexicographically; all
//! deterministic choices (merged vertex name, enumeration order, designated
//! conservation flag) are stated in terms of that order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::{Error, Result};

macro_rules! id_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            pub fn new(s: impl Into<String>) -> Self {
                $name(s.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name(s.to_string())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                $name(s)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    };
}

id_type!(
    /// Vertex label.
    VertexId
);
id_type!(
    /// Edge label.
    EdgeId
);
id_type!(
    /// Flag (external half-edge) label.
    FlagId
);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: VertexId,
    pub weighted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    pub id: FlagId,
    pub vertex: VertexId,
    /// Display name of the formal momentum, if declared.
    pub momentum: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub tail: VertexId,
    pub head: VertexId,
}

/// Edge classification. Semi-regular means "not a self-loop".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Bridge,
    SelfLoop,
    Regular,
}

impl EdgeKind {
    pub fn is_semi_regular(self) -> bool {
        !matches!(self, EdgeKind::SelfLoop)
    }
}

/// Subset families understood by [`Graph::enumerate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubsetFamily {
    AllSubsets,
    SpanningTrees,
    /// All acyclic edge subsets, the empty one included.
    SpanningForests,
    /// Acyclic subsets with exactly `k(G) + 1` components.
    TwoForests,
}

/// Resource guard for the `2^E` subset scans.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_edges: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_edges: 24 }
    }
}

impl Limits {
    pub fn check(&self, edges: usize) -> Result<()> {
        if edges > self.max_edges {
            Err(Error::ResourceLimit(edges, self.max_edges))
        } else {
            Ok(())
        }
    }
}

/// A multigraph with oriented edges, optional vertex weights and flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    flags: Vec<Flag>,
}

impl Graph {
    pub fn new() -> Self {
        Graph {
            vertices: Vec::new(),
            edges: Vec::new(),
            flags: Vec::new(),
        }
    }

    pub fn add_vertex(&mut self, id: impl Into<VertexId>, weighted: bool) -> Result<()> {
        let id = id.into();
        if self.vertex(&id).is_some() {
            return Err(Error::Invalid(format!("duplicate vertex id `{id}`")));
        }
        let pos = self
            .vertices
            .binary_search_by(|v| v.id.cmp(&id))
            .unwrap_err();
        self.vertices.insert(pos, Vertex { id, weighted });
        Ok(())
    }

    pub fn add_edge(
        &mut self,
        id: impl Into<EdgeId>,
        tail: impl Into<VertexId>,
        head: impl Into<VertexId>,
    ) -> Result<()> {
        let (id, tail, head) = (id.into(), tail.into(), head.into());
        if self.edge(&id).is_some() {
            return Err(Error::Invalid(format!("duplicate edge id `{id}`")));
        }
        if self.vertex(&tail).is_none() {
            return Err(Error::UnknownVertex(tail.to_string()));
        }
        if self.vertex(&head).is_none() {
            return Err(Error::UnknownVertex(head.to_string()));
        }
        let pos = self.edges.binary_search_by(|e| e.id.cmp(&id)).unwrap_err();
        self.edges.insert(pos, Edge { id, tail, head });
        Ok(())
    }

    pub fn add_flag(
        &mut self,
        id: impl Into<FlagId>,
        vertex: impl Into<VertexId>,
        momentum: Option<String>,
    ) -> Result<()> {
        let (id, vertex) = (id.into(), vertex.into());
        if self.flag(&id).is_some() {
            return Err(Error::Invalid(format!("duplicate flag id `{id}`")));
        }
        if self.vertex(&vertex).is_none() {
            return Err(Error::UnknownVertex(vertex.to_string()));
        }
        let pos = self.flags.binary_search_by(|f| f.id.cmp(&id)).unwrap_err();
        self.flags.insert(pos, Flag { id, vertex, momentum });
        Ok(())
    }

    pub fn vertex(&self, id: &VertexId) -> Option<&Vertex> {
        self.vertices
            .binary_search_by(|v| v.id.cmp(id))
            .ok()
            .map(|i| &self.vertices[i])
    }

    pub fn edge(&self, id: &EdgeId) -> Option<&Edge> {
        self.edges
            .binary_search_by(|e| e.id.cmp(id))
            .ok()
            .map(|i| &self.edges[i])
    }

    pub fn flag(&self, id: &FlagId) -> Option<&Flag> {
        self.flags
            .binary_search_by(|f| f.id.cmp(id))
            .ok()
            .map(|i| &self.flags[i])
    }

    fn edge_or_err(&self, id: &EdgeId) -> Result<&Edge> {
        self.edge(id).ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    /// Vertices in ascending id order.
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Edges in ascending id order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Flags in ascending id order.
    pub fn flags(&self) -> &[Flag] {
        &self.flags
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_ids(&self) -> Vec<EdgeId> {
        self.edges.iter().map(|e| e.id.clone()).collect()
    }

    pub fn flag_ids(&self) -> Vec<FlagId> {
        self.flags.iter().map(|f| f.id.clone()).collect()
    }

    pub fn flags_at(&self, v: &VertexId) -> Vec<FlagId> {
        self.flags
            .iter()
            .filter(|f| f.vertex == *v)
            .map(|f| f.id.clone())
            .collect()
    }

    /// Signed incidence: +1 if `e` starts at `v`, -1 if it ends there,
    /// 0 otherwise — and 0 for a self-loop wherever it sits.
    pub fn eps(&self, e: &EdgeId, v: &VertexId) -> i64 {
        match self.edge(e) {
            Some(edge) if edge.tail == edge.head => 0,
            Some(edge) if edge.tail == *v => 1,
            Some(edge) if edge.head == *v => -1,
            _ => 0,
        }
    }

    /// Unsigned incidence: 2 for a self-loop at `v`, 1 for a single end.
    pub fn eta(&self, e: &EdgeId, v: &VertexId) -> u32 {
        match self.edge(e) {
            Some(edge) if edge.tail == edge.head && edge.tail == *v => 2,
            Some(edge) if edge.tail == *v || edge.head == *v => 1,
            _ => 0,
        }
    }

    /// Number of connected components (isolated vertices count).
    pub fn component_count(&self) -> usize {
        self.components_of_subset(&self.edge_ids().into_iter().collect())
            .len()
    }

    /// Connected components of the spanning subgraph `(V, subset)`, each a
    /// sorted set of vertex ids; components sorted by smallest member.
    pub fn components_of_subset(&self, subset: &BTreeSet<EdgeId>) -> Vec<BTreeSet<VertexId>> {
        let mut adj: BTreeMap<&VertexId, Vec<&VertexId>> = BTreeMap::new();
        for v in &self.vertices {
            adj.entry(&v.id).or_default();
        }
        for e in &self.edges {
            if subset.contains(&e.id) {
                adj.entry(&e.tail).or_default().push(&e.head);
                adj.entry(&e.head).or_default().push(&e.tail);
            }
        }
        let mut seen: BTreeSet<&VertexId> = BTreeSet::new();
        let mut comps = Vec::new();
        for v in &self.vertices {
            if seen.contains(&v.id) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = vec![&v.id];
            while let Some(u) = stack.pop() {
                if !seen.insert(u) {
                    continue;
                }
                comp.insert(u.clone());
                for w in &adj[u] {
                    if !seen.contains(*w) {
                        stack.push(w);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// `(k, r, n)` of the spanning subgraph `(V, A)`: component count, rank
    /// `|V| - k`, nullity `|A| + k - |V|`.
    pub fn subset_metrics(&self, subset: &BTreeSet<EdgeId>) -> (usize, usize, usize) {
        let k = self.components_of_subset(subset).len();
        let v = self.vertices.len();
        let r = v - k;
        let n = subset.len() + k - v;
        (k, r, n)
    }

    /// Metrics of the full edge set.
    pub fn metrics(&self) -> (usize, usize, usize) {
        self.subset_metrics(&self.edge_ids().into_iter().collect())
    }

    pub fn classify(&self, e: &EdgeId) -> Result<EdgeKind> {
        let edge = self.edge_or_err(e)?;
        if edge.tail == edge.head {
            return Ok(EdgeKind::SelfLoop);
        }
        let before = self.component_count();
        let after = self.delete(e)?.component_count();
        Ok(if after > before {
            EdgeKind::Bridge
        } else {
            EdgeKind::Regular
        })
    }

    /// Removes the edge; vertices, flags and weights are untouched.
    pub fn delete(&self, e: &EdgeId) -> Result<Graph> {
        self.edge_or_err(e)?;
        let mut g = self.clone();
        g.edges.retain(|x| x.id != *e);
        Ok(g)
    }

    /// Contracts `e`. A semi-regular edge merges its endpoints into the
    /// lexicographically smaller vertex id, which inherits all flags and the
    /// `weighted` mark of both; contracting a self-loop is deletion.
    pub fn contract(&self, e: &EdgeId) -> Result<Graph> {
        let edge = self.edge_or_err(e)?.clone();
        if edge.tail == edge.head {
            return self.delete(e);
        }
        let (keep, gone) = if edge.tail < edge.head {
            (edge.tail.clone(), edge.head.clone())
        } else {
            (edge.head.clone(), edge.tail.clone())
        };
        let merged_weight = self.vertex(&keep).unwrap().weighted
            || self.vertex(&gone).unwrap().weighted;
        let mut g = Graph::new();
        for v in &self.vertices {
            if v.id == gone {
                continue;
            }
            g.add_vertex(
                v.id.clone(),
                if v.id == keep { merged_weight } else { v.weighted },
            )?;
        }
        let rename = |v: &VertexId| if *v == gone { keep.clone() } else { v.clone() };
        for x in &self.edges {
            if x.id == *e {
                continue;
            }
            g.add_edge(x.id.clone(), rename(&x.tail), rename(&x.head))?;
        }
        for f in &self.flags {
            g.add_flag(f.id.clone(), rename(&f.vertex), f.momentum.clone())?;
        }
        Ok(g)
    }

    /// Restriction to a subset of edges (all vertices and flags kept).
    pub fn spanning_subgraph(&self, subset: &BTreeSet<EdgeId>) -> Graph {
        let mut g = self.clone();
        g.edges.retain(|e| subset.contains(&e.id));
        g
    }

    /// The subgraph induced by a set of vertices: those vertices, their
    /// flags, and the edges with both ends inside.
    pub fn induced(&self, verts: &BTreeSet<VertexId>) -> Graph {
        let mut g = Graph::new();
        for v in &self.vertices {
            if verts.contains(&v.id) {
                g.add_vertex(v.id.clone(), v.weighted).unwrap();
            }
        }
        for e in &self.edges {
            if verts.contains(&e.tail) && verts.contains(&e.head) {
                g.add_edge(e.id.clone(), e.tail.clone(), e.head.clone()).unwrap();
            }
        }
        for f in &self.flags {
            if verts.contains(&f.vertex) {
                g.add_flag(f.id.clone(), f.vertex.clone(), f.momentum.clone())
                    .unwrap();
            }
        }
        g
    }

    fn subset_is_acyclic(&self, subset: &BTreeSet<EdgeId>) -> bool {
        let (k, _, n) = self.subset_metrics(subset);
        let _ = k;
        n == 0
    }

    /// Enumerates edge subsets of the requested family, in binary-counting
    /// order over the edges sorted ascending by id (bit 0 is the smallest).
    pub fn enumerate(
        &self,
        family: SubsetFamily,
        limits: &Limits,
    ) -> Result<Vec<BTreeSet<EdgeId>>> {
        limits.check(self.edges.len())?;
        if matches!(family, SubsetFamily::SpanningTrees) && !self.is_connected() {
            return Err(Error::Disconnected("spanning tree enumeration"));
        }
        let ids = self.edge_ids();
        let k_goal = self.component_count() + 1;
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << ids.len()) {
            let subset: BTreeSet<EdgeId> = ids
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, id)| id.clone())
                .collect();
            let keep = match family {
                SubsetFamily::AllSubsets => true,
                SubsetFamily::SpanningTrees => {
                    let (k, _, n) = self.subset_metrics(&subset);
                    k == 1 && n == 0
                }
                SubsetFamily::SpanningForests => self.subset_is_acyclic(&subset),
                SubsetFamily::TwoForests => {
                    let (k, _, n) = self.subset_metrics(&subset);
                    n == 0 && k == k_goal
                }
            };
            if keep {
                out.push(subset);
            }
        }
        Ok(out)
    }

    /// Canonical encoding used as a memoization key for deletion/contraction
    /// recursions: vertices relabeled in breadth-first order from the
    /// smallest id (adjacency walked in edge-id order), edges sorted, plus a
    /// caller-supplied payload per vertex (weights, flag sets) so that
    /// decorated recursions never collide.
    pub fn canonical_key(&self, payload: impl Fn(&VertexId) -> String) -> String {
        let mut order: BTreeMap<&VertexId, usize> = BTreeMap::new();
        let mut next = 0usize;
        for start in &self.vertices {
            if order.contains_key(&start.id) {
                continue;
            }
            let mut queue = std::collections::VecDeque::from([&start.id]);
            while let Some(u) = queue.pop_front() {
                if order.contains_key(u) {
                    continue;
                }
                order.insert(u, next);
                next += 1;
                for e in &self.edges {
                    let other = if e.tail == *u {
                        &e.head
                    } else if e.head == *u {
                        &e.tail
                    } else {
                        continue;
                    };
                    if !order.contains_key(other) {
                        queue.push_back(other);
                    }
                }
            }
        }
        let mut s = String::new();
        for v in &self.vertices {
            s.push_str(&format!("v{}[{}];", order[&v.id], payload(&v.id)));
        }
        for e in &self.edges {
            s.push_str(&format!("e{}:{}-{};", e.id, order[&e.tail], order[&e.head]));
        }
        s
    }
}

impl Default for Graph {
    fn default() -> Self {
        Graph::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn classify_fixture_edges() {
        let p2 = fixtures::p2().graph;
        assert_eq!(p2.classify(&"e1".into()).unwrap(), EdgeKind::Bridge);
        let l1 = fixtures::l1().graph;
        assert_eq!(l1.classify(&"e1".into()).unwrap(), EdgeKind::SelfLoop);
        let c3 = fixtures::c3().graph;
        for e in c3.edge_ids() {
            assert_eq!(c3.classify(&e).unwrap(), EdgeKind::Regular);
        }
        assert!(c3.classify(&"nope".into()).is_err());
    }

    #[test]
    fn delete_keeps_flags_and_vertices() {
        let b2 = fixtures::b2().graph;
        let d = b2.delete(&"e1".into()).unwrap();
        assert_eq!(d.vertex_count(), 2);
        assert_eq!(d.edge_count(), 1);
        assert_eq!(d.flags().len(), b2.flags().len());
        // Deleting every edge of C3 leaves three isolated vertices.
        let c3 = fixtures::c3().graph;
        let mut g = c3.clone();
        for e in c3.edge_ids() {
            g = g.delete(&e).unwrap();
        }
        assert_eq!(g.component_count(), 3);
    }

    #[test]
    fn contract_merges_to_smaller_id() {
        let b2 = fixtures::b2().graph;
        let c = b2.contract(&"e1".into()).unwrap();
        assert_eq!(c.vertex_count(), 1);
        assert_eq!(c.vertices()[0].id, VertexId::from("u"));
        // The other edge became a self-loop carrying all flags on u.
        assert_eq!(c.classify(&"e2".into()).unwrap(), EdgeKind::SelfLoop);
        assert_eq!(c.flags().len(), b2.flags().len());
        assert!(c.flags().iter().all(|f| f.vertex == VertexId::from("u")));
        // Contracting a self-loop deletes it.
        let l1 = fixtures::l1().graph;
        let lc = l1.contract(&"e1".into()).unwrap();
        assert_eq!(lc.edge_count(), 0);
        assert_eq!(lc.vertex_count(), 1);
        // C3 / e contracts to a double edge on two vertices.
        let c3 = fixtures::c3().graph;
        let cc = c3.contract(&c3.edge_ids()[0]).unwrap();
        assert_eq!(cc.vertex_count(), 2);
        assert_eq!(cc.edge_count(), 2);
    }

    #[test]
    fn metrics_examples() {
        let c3 = fixtures::c3().graph;
        assert_eq!(c3.metrics(), (1, 2, 1));
        assert_eq!(c3.subset_metrics(&BTreeSet::new()), (3, 0, 0));
        let b2 = fixtures::b2().graph;
        assert_eq!(b2.metrics(), (1, 1, 1));
    }

    #[test]
    fn rank_nullity_additivity() {
        let c3 = fixtures::c3().graph;
        let lim = Limits::default();
        for a in c3.enumerate(SubsetFamily::AllSubsets, &lim).unwrap() {
            let (_, r, n) = c3.subset_metrics(&a);
            assert_eq!(r + n, a.len());
        }
    }

    #[test]
    fn enumerate_examples() {
        let lim = Limits::default();
        let c3 = fixtures::c3().graph;
        let trees = c3.enumerate(SubsetFamily::SpanningTrees, &lim).unwrap();
        assert_eq!(trees.len(), 3);
        assert!(trees.iter().all(|t| t.len() == 2));
        let b2 = fixtures::b2().graph;
        let forests = b2.enumerate(SubsetFamily::SpanningForests, &lim).unwrap();
        assert_eq!(forests.len(), 3); // {}, {e1}, {e2}
        let two = b2.enumerate(SubsetFamily::TwoForests, &lim).unwrap();
        assert_eq!(two, vec![BTreeSet::new()]);
    }

    #[test]
    fn enumerate_respects_limit() {
        let b2 = fixtures::b2().graph;
        let tight = Limits { max_edges: 1 };
        assert!(matches!(
            b2.enumerate(SubsetFamily::AllSubsets, &tight),
            Err(Error::ResourceLimit(2, 1))
        ));
    }

    #[test]
    fn deletion_contraction_commute() {
        // (G - e) / f == (G / f) - e for distinct e, f with f semi-regular.
        let c3 = fixtures::c3().graph;
        let e = EdgeId::from("e1");
        let f = EdgeId::from("e2");
        let a = c3.delete(&e).unwrap().contract(&f).unwrap();
        let b = c3.contract(&f).unwrap().delete(&e).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn contraction_preserves_components_and_flags() {
        let np3 = fixtures::np3().graph;
        let c = np3.contract(&"e2".into()).unwrap();
        assert_eq!(c.component_count(), np3.component_count());
        assert_eq!(c.flags().len(), np3.flags().len());
    }
}
