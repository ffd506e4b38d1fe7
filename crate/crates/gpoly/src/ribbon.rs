//! Ribbon graphs as rooted combinatorial maps.
//!
//! A ribbon graph is the underlying [`Graph`] plus, at every vertex, a cyclic
//! sequence of slots (half-edges and flags). Rotation lists are read
//! counterclockwise and the first stored slot is the vertex's root slot.
//!
//! Boundary traversal rule: having arrived along a half-edge, step to the
//! next slot counterclockwise (the next element of the rotation list),
//! collect any flags passed, and cross the first half-edge found to its
//! partner. With this orientation the boundary of a bare vertex reads its
//! flags in rotation order, which pins the sign of the Moyal phase ψ.
//! Everything else read off the traversal (boundary count, genus) is
//! convention-independent, which the Euler relation `V - E + bc = 2k - 2g`
//! enforces on every constructed graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::graph::{EdgeId, FlagId, Graph, VertexId};
use crate::{Error, Result};

/// Which end of an edge a half-edge slot is: `A` at the tail, `B` at the head.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum End {
    A,
    B,
}

impl End {
    pub fn other(self) -> End {
        match self {
            End::A => End::B,
            End::B => End::A,
        }
    }
}

impl fmt::Display for End {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            End::A => write!(f, "a"),
            End::B => write!(f, "b"),
        }
    }
}

/// One slot in a vertex rotation. In a [`Boundary`], `Half(e, end)` records
/// an arrival at that end of `e`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Half(EdgeId, End),
    Flag(FlagId),
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Half(e, end) => write!(f, "e:{e}.{end}"),
            Slot::Flag(id) => write!(f, "f:{id}"),
        }
    }
}

/// One boundary component: the traversal steps in order. Half-edge arrivals
/// and the flags passed between them interleave exactly as walked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Boundary {
    pub steps: Vec<Slot>,
}

impl Boundary {
    /// Flags in traversal order (a cyclic sequence).
    pub fn flags(&self) -> Vec<FlagId> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                Slot::Flag(f) => Some(f.clone()),
                Slot::Half(..) => None,
            })
            .collect()
    }

    pub fn has_flags(&self) -> bool {
        self.steps.iter().any(|s| matches!(s, Slot::Flag(_)))
    }
}

/// A graph with a rotation system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RibbonGraph {
    graph: Graph,
    rotation: BTreeMap<VertexId, Vec<Slot>>,
}

impl RibbonGraph {
    /// Builds and validates: every edge must contribute exactly its two
    /// half-edge slots at the right vertices, every flag its one slot.
    pub fn new(graph: Graph, rotation: BTreeMap<VertexId, Vec<Slot>>) -> Result<Self> {
        let mut seen: BTreeMap<Slot, VertexId> = BTreeMap::new();
        for (v, slots) in &rotation {
            if graph.vertex(v).is_none() {
                return Err(Error::UnknownVertex(v.to_string()));
            }
            for s in slots {
                if seen.insert(s.clone(), v.clone()).is_some() {
                    return Err(Error::Invalid(format!("slot {s} listed twice")));
                }
            }
        }
        for e in graph.edges() {
            for (end, at) in [(End::A, &e.tail), (End::B, &e.head)] {
                match seen.get(&Slot::Half(e.id.clone(), end)) {
                    Some(v) if v == at => {}
                    Some(v) => {
                        return Err(Error::Invalid(format!(
                            "half-edge e:{}.{end} listed at `{v}`, expected `{at}`",
                            e.id
                        )))
                    }
                    None => {
                        return Err(Error::Invalid(format!(
                            "half-edge e:{}.{end} missing from the order of `{at}`",
                            e.id
                        )))
                    }
                }
            }
        }
        for f in graph.flags() {
            match seen.get(&Slot::Flag(f.id.clone())) {
                Some(v) if *v == f.vertex => {}
                Some(v) => {
                    return Err(Error::Invalid(format!(
                        "flag {} listed at `{v}`, expected `{}`",
                        f.id, f.vertex
                    )))
                }
                None => {
                    return Err(Error::Invalid(format!(
                        "flag {} missing from the order of `{}`",
                        f.id, f.vertex
                    )))
                }
            }
        }
        let mut rotation = rotation;
        for v in graph.vertices() {
            rotation.entry(v.id.clone()).or_default();
        }
        let rg = RibbonGraph { graph, rotation };
        rg.genus()?; // fails if the Euler value is not a nonnegative integer
        Ok(rg)
    }

    /// Rebuilds an underlying-graph operation result into a ribbon graph,
    /// trusting the caller that `rotation` is consistent.
    fn from_parts(graph: Graph, rotation: BTreeMap<VertexId, Vec<Slot>>) -> RibbonGraph {
        RibbonGraph { graph, rotation }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn rotation(&self, v: &VertexId) -> &[Slot] {
        self.rotation.get(v).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Replaces one vertex's rotation, revalidating the whole map.
    pub fn with_rotation(&self, v: &VertexId, slots: Vec<Slot>) -> Result<RibbonGraph> {
        let mut rotation = self.rotation.clone();
        rotation.insert(v.clone(), slots);
        RibbonGraph::new(self.graph.clone(), rotation)
    }

    fn vertex_of_half(&self, e: &EdgeId, end: End) -> VertexId {
        let edge = self.graph.edge(e).expect("validated edge");
        match end {
            End::A => edge.tail.clone(),
            End::B => edge.head.clone(),
        }
    }

    /// All boundary components. Every half-edge arrival lies on exactly one
    /// boundary, every flag on exactly one; a vertex with no half-edge slots
    /// contributes one boundary of its own (its flags read clockwise).
    pub fn boundaries(&self) -> Vec<Boundary> {
        let mut visited: BTreeSet<(EdgeId, End)> = BTreeSet::new();
        let mut out = Vec::new();
        let mut darts: Vec<(EdgeId, End)> = Vec::new();
        for e in self.graph.edges() {
            darts.push((e.id.clone(), End::A));
            darts.push((e.id.clone(), End::B));
        }
        for start in &darts {
            if visited.contains(start) {
                continue;
            }
            let mut steps = Vec::new();
            let mut dart = start.clone();
            loop {
                visited.insert(dart.clone());
                steps.push(Slot::Half(dart.0.clone(), dart.1));
                let v = self.vertex_of_half(&dart.0, dart.1);
                let slots = &self.rotation[&v];
                let here = Slot::Half(dart.0.clone(), dart.1);
                let mut idx = slots.iter().position(|s| *s == here).expect("slot present");
                // Walk counterclockwise collecting flags until the next
                // half-edge.
                loop {
                    idx = (idx + 1) % slots.len();
                    match &slots[idx] {
                        Slot::Flag(f) => steps.push(Slot::Flag(f.clone())),
                        Slot::Half(e2, end2) => {
                            dart = (e2.clone(), end2.other());
                            break;
                        }
                    }
                }
                if dart == *start {
                    break;
                }
            }
            out.push(Boundary { steps });
        }
        // Vertices whose rotation has no half-edge slot never enter a dart
        // walk; each is a boundary by itself, read in rotation order.
        for v in self.graph.vertices() {
            let slots = &self.rotation[&v.id];
            if slots.iter().any(|s| matches!(s, Slot::Half(..))) {
                continue;
            }
            out.push(Boundary {
                steps: slots.clone(),
            });
        }
        out
    }

    pub fn boundary_count(&self) -> usize {
        self.boundaries().len()
    }

    /// Boundaries containing at least one flag.
    pub fn broken_face_count(&self) -> usize {
        self.boundaries().iter().filter(|b| b.has_flags()).count()
    }

    /// Genus from the Euler relation; errors if the relation yields a
    /// non-integer or negative value (which would mean a traversal bug).
    pub fn genus(&self) -> Result<i64> {
        let v = self.graph.vertex_count() as i64;
        let e = self.graph.edge_count() as i64;
        let bc = self.boundary_count() as i64;
        let k = self.graph.component_count() as i64;
        let twice = 2 * k - (v - e + bc);
        if twice % 2 != 0 || twice < 0 {
            return Err(Error::Internal(format!(
                "Euler relation violated: V={v} E={e} bc={bc} k={k}"
            )));
        }
        Ok(twice / 2)
    }

    /// The spanning ribbon subgraph `(V, subset)`: slots of absent edges are
    /// removed, everything else (flags included) stays.
    pub fn restrict_edges(&self, subset: &BTreeSet<EdgeId>) -> RibbonGraph {
        let graph = self.graph.spanning_subgraph(subset);
        let rotation = self
            .rotation
            .iter()
            .map(|(v, slots)| {
                let kept: Vec<Slot> = slots
                    .iter()
                    .filter(|s| match s {
                        Slot::Half(e, _) => subset.contains(e),
                        Slot::Flag(_) => true,
                    })
                    .cloned()
                    .collect();
                (v.clone(), kept)
            })
            .collect();
        RibbonGraph::from_parts(graph, rotation)
    }

    /// Boundary count of the spanning subgraph — the quantity driving
    /// star-trees, the Bollobás-Riordan exponents and Ξ.
    pub fn subset_boundary_count(&self, subset: &BTreeSet<EdgeId>) -> usize {
        self.restrict_edges(subset).boundary_count()
    }

    /// Deletes the edge and closes the two scars.
    pub fn rdelete(&self, e: &EdgeId) -> Result<RibbonGraph> {
        if self.graph.edge(e).is_none() {
            return Err(Error::UnknownEdge(e.to_string()));
        }
        let mut keep: BTreeSet<EdgeId> = self.graph.edge_ids().into_iter().collect();
        keep.remove(e);
        Ok(self.restrict_edges(&keep))
    }

    /// Contracts a semi-regular edge: the far vertex's rotation is spliced
    /// into the kept (lexicographically smaller) vertex at the slots of `e`,
    /// preserving the cyclic order of all remaining slots. Contraction of
    /// self-loops is out of scope and rejected.
    pub fn rcontract(&self, e: &EdgeId) -> Result<RibbonGraph> {
        let edge = self
            .graph
            .edge(e)
            .ok_or_else(|| Error::UnknownEdge(e.to_string()))?
            .clone();
        if edge.tail == edge.head {
            return Err(Error::Unsupported(
                "contraction of a self-loop on a ribbon graph".into(),
            ));
        }
        let (keep, gone) = if edge.tail < edge.head {
            (edge.tail.clone(), edge.head.clone())
        } else {
            (edge.head.clone(), edge.tail.clone())
        };
        let slot_at = |v: &VertexId| -> Slot {
            if *v == edge.tail {
                Slot::Half(e.clone(), End::A)
            } else {
                Slot::Half(e.clone(), End::B)
            }
        };
        let keep_slot = slot_at(&keep);
        let gone_slot = slot_at(&gone);
        let gone_rot = &self.rotation[&gone];
        let pos = gone_rot
            .iter()
            .position(|s| *s == gone_slot)
            .expect("validated slot");
        // Far slots starting after the contracted slot, wrapping around.
        let mut spliced: Vec<Slot> = Vec::with_capacity(gone_rot.len() - 1);
        for i in 1..gone_rot.len() {
            spliced.push(gone_rot[(pos + i) % gone_rot.len()].clone());
        }
        let mut merged: Vec<Slot> = Vec::new();
        for s in &self.rotation[&keep] {
            if *s == keep_slot {
                merged.extend(spliced.iter().cloned());
            } else {
                merged.push(s.clone());
            }
        }
        let graph = self.graph.contract(e)?;
        let mut rotation = self.rotation.clone();
        rotation.remove(&gone);
        rotation.insert(keep, merged);
        Ok(RibbonGraph::from_parts(graph, rotation))
    }

    /// The dual of a connected ribbon graph: one vertex per boundary, same
    /// edge set, each boundary's traversal sequence becoming the rotation of
    /// the new vertex. Dual edge `e` keeps its id; its `A` end sits on the
    /// boundary that arrived at the original `A` end.
    pub fn dual(&self) -> Result<RibbonGraph> {
        if !self.graph.is_connected() {
            return Err(Error::Disconnected("ribbon-graph duality"));
        }
        let bounds = self.boundaries();
        let mut graph = Graph::new();
        let name = |i: usize| VertexId::from(format!("d{i}"));
        for i in 0..bounds.len() {
            graph.add_vertex(name(i), false)?;
        }
        let mut end_home: BTreeMap<(EdgeId, End), usize> = BTreeMap::new();
        for (i, b) in bounds.iter().enumerate() {
            for s in &b.steps {
                if let Slot::Half(e, end) = s {
                    end_home.insert((e.clone(), *end), i);
                }
            }
        }
        for e in self.graph.edges() {
            let ta = end_home[&(e.id.clone(), End::A)];
            let tb = end_home[&(e.id.clone(), End::B)];
            graph.add_edge(e.id.clone(), name(ta), name(tb))?;
        }
        let mut rotation: BTreeMap<VertexId, Vec<Slot>> = BTreeMap::new();
        for (i, b) in bounds.iter().enumerate() {
            rotation.insert(name(i), b.steps.clone());
            for f in b.flags() {
                let orig = self.graph.flag(&f).expect("flag exists");
                graph.add_flag(f.clone(), name(i), orig.momentum.clone())?;
            }
        }
        RibbonGraph::new(graph, rotation)
    }

    /// Searches a rosette for a pair of crossing self-loops whose ends are
    /// consecutive on the cycle. Returns `None` on planar rosettes.
    pub fn nice_crossing(&self) -> Result<Option<(EdgeId, EdgeId)>> {
        if self.graph.vertex_count() != 1 {
            return Err(Error::Unsupported(
                "nice crossings are defined on rosettes (single-vertex graphs)".into(),
            ));
        }
        let v = self.graph.vertices()[0].id.clone();
        let slots = &self.rotation[&v];
        let n = slots.len();
        for i in 0..n {
            let (Slot::Half(e1, _), Slot::Half(e2, _)) = (&slots[i], &slots[(i + 1) % n]) else {
                continue;
            };
            if e1 == e2 {
                continue;
            }
            if self.edges_cross(e1, e2) {
                return Ok(Some((e1.clone(), e2.clone())));
            }
        }
        Ok(None)
    }

    /// Whether the two self-loops' ends interleave around the rosette cycle.
    fn edges_cross(&self, e1: &EdgeId, e2: &EdgeId) -> bool {
        let v = self.graph.vertices()[0].id.clone();
        let slots = &self.rotation[&v];
        let mut pattern = Vec::new();
        for s in slots {
            if let Slot::Half(e, _) = s {
                if e == e1 {
                    pattern.push(1u8);
                } else if e == e2 {
                    pattern.push(2u8);
                }
            }
        }
        pattern == [1, 2, 1, 2] || pattern == [2, 1, 2, 1]
    }

    /// The third Filk move. With cyclic word `e1 e2 w1 ē1 w2 ē2 w3` the
    /// result is `w2 w1 w3`: both edges vanish and the runs they encompassed
    /// are swapped. Drops the genus by one and keeps the boundary count.
    pub fn double_contract(&self, e1: &EdgeId, e2: &EdgeId) -> Result<RibbonGraph> {
        if self.graph.vertex_count() != 1 {
            return Err(Error::Unsupported(
                "double contraction is defined on rosettes".into(),
            ));
        }
        let v = self.graph.vertices()[0].id.clone();
        let slots = &self.rotation[&v];
        let n = slots.len();
        // Rotate so the word starts e1 e2 with those two slots adjacent.
        let mut start = None;
        for i in 0..n {
            if let (Slot::Half(a, _), Slot::Half(b, _)) = (&slots[i], &slots[(i + 1) % n]) {
                if a == e1 && b == e2 {
                    start = Some(i);
                    break;
                }
            }
        }
        let Some(start) = start else {
            return Err(Error::Unsupported(format!(
                "({e1}, {e2}) is not an adjacent pair on the rosette cycle"
            )));
        };
        if !self.edges_cross(e1, e2) {
            return Err(Error::Unsupported(format!(
                "({e1}, {e2}) do not cross; double contraction needs a nice crossing"
            )));
        }
        let rotated: Vec<Slot> = (0..n).map(|i| slots[(start + i) % n].clone()).collect();
        let far1 = rotated[2..]
            .iter()
            .position(|s| matches!(s, Slot::Half(e, _) if e == e1))
            .map(|p| p + 2)
            .expect("second end of e1");
        let far2 = rotated[2..]
            .iter()
            .position(|s| matches!(s, Slot::Half(e, _) if e == e2))
            .map(|p| p + 2)
            .expect("second end of e2");
        if far2 <= far1 {
            return Err(Error::Internal("crossing pattern out of order".into()));
        }
        let w1 = &rotated[2..far1];
        let w2 = &rotated[far1 + 1..far2];
        let w3 = &rotated[far2 + 1..];
        let word: Vec<Slot> = w2.iter().chain(w1).chain(w3).cloned().collect();
        let graph = self.graph.delete(e1)?.delete(e2)?;
        let rotation = BTreeMap::from([(v, word)]);
        RibbonGraph::new(graph, rotation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixture_boundary_counts_and_genus() {
        // Paper figure values: NP3 has V=2 E=3 bc=1 g=1; its dual V=1 E=3
        // bc=2 g=1. The planar self-loop has bc=2 g=0, the crossed rosette
        // X2 has bc=1 g=1.
        let np3 = fixtures::np3().ribbon.unwrap();
        assert_eq!(np3.boundary_count(), 1);
        assert_eq!(np3.genus().unwrap(), 1);
        let l1 = fixtures::l1().ribbon.unwrap();
        assert_eq!(l1.boundary_count(), 2);
        assert_eq!(l1.genus().unwrap(), 0);
        let x2 = fixtures::x2().ribbon.unwrap();
        assert_eq!(x2.boundary_count(), 1);
        assert_eq!(x2.genus().unwrap(), 1);
    }

    #[test]
    fn isolated_vertex_has_one_boundary_listing_flags() {
        let mut g = Graph::new();
        g.add_vertex("v", false).unwrap();
        g.add_flag("f1", "v", None).unwrap();
        g.add_flag("f2", "v", None).unwrap();
        let rot = BTreeMap::from([(
            VertexId::from("v"),
            vec![Slot::Flag("f1".into()), Slot::Flag("f2".into())],
        )]);
        let rg = RibbonGraph::new(g, rot).unwrap();
        let bs = rg.boundaries();
        assert_eq!(bs.len(), 1);
        let flags = bs[0].flags();
        assert_eq!(flags.len(), 2);
    }

    #[test]
    fn dual_of_np3_matches_paper_figure() {
        let np3 = fixtures::np3().ribbon.unwrap();
        let d = np3.dual().unwrap();
        assert_eq!(d.graph().vertex_count(), 1);
        assert_eq!(d.graph().edge_count(), 3);
        assert_eq!(d.boundary_count(), 2);
        assert_eq!(d.genus().unwrap(), 1);
        // Involution on the numbers.
        let dd = d.dual().unwrap();
        assert_eq!(dd.graph().vertex_count(), np3.graph().vertex_count());
        assert_eq!(dd.boundary_count(), np3.boundary_count());
        assert_eq!(dd.genus().unwrap(), np3.genus().unwrap());
    }

    #[test]
    fn dual_of_bridge_is_self_loop() {
        let p2 = fixtures::p2().ribbon.unwrap();
        let d = p2.dual().unwrap();
        assert_eq!(d.graph().vertex_count(), 1);
        assert_eq!(d.graph().edge_count(), 1);
        assert_eq!(d.genus().unwrap(), 0);
    }

    #[test]
    fn contraction_of_np3_edge_gives_crossed_rosette() {
        let np3 = fixtures::np3().ribbon.unwrap();
        let r = np3.rcontract(&"e3".into()).unwrap();
        assert_eq!(r.graph().vertex_count(), 1);
        assert_eq!(r.graph().edge_count(), 2);
        // Contraction never changes the boundary count or genus.
        assert_eq!(r.boundary_count(), np3.boundary_count());
        assert_eq!(r.genus().unwrap(), np3.genus().unwrap());
        // And the remaining pair crosses.
        assert!(r.edges_cross(&"e1".into(), &"e2".into()));
    }

    #[test]
    fn rdelete_b2_yields_p2() {
        let b2 = fixtures::b2().ribbon.unwrap();
        let d = b2.rdelete(&"e2".into()).unwrap();
        assert_eq!(d.graph().edge_count(), 1);
        assert_eq!(d.genus().unwrap(), 0);
        assert_eq!(d.boundary_count(), 1);
    }

    #[test]
    fn rcontract_on_self_loop_is_rejected() {
        let l1 = fixtures::l1().ribbon.unwrap();
        assert!(matches!(
            l1.rcontract(&"e1".into()),
            Err(Error::Unsupported(_))
        ));
    }

    fn rosette(word: &[(&str, End)]) -> RibbonGraph {
        let mut g = Graph::new();
        g.add_vertex("v", false).unwrap();
        let mut ids = BTreeSet::new();
        for (e, _) in word {
            ids.insert(*e);
        }
        for e in &ids {
            g.add_edge(*e, "v", "v").unwrap();
        }
        let rot = BTreeMap::from([(
            VertexId::from("v"),
            word.iter()
                .map(|(e, end)| Slot::Half(EdgeId::from(*e), *end))
                .collect(),
        )]);
        RibbonGraph::new(g, rot).unwrap()
    }

    #[test]
    fn nice_crossing_examples() {
        // X2: word e1 e2 ē1 ē2 has the crossing (e1, e2).
        let x2 = rosette(&[
            ("e1", End::A),
            ("e2", End::A),
            ("e1", End::B),
            ("e2", End::B),
        ]);
        assert_eq!(
            x2.nice_crossing().unwrap(),
            Some(("e1".into(), "e2".into()))
        );
        // Planar rosette e ē f f̄ has none.
        let planar = rosette(&[
            ("e1", End::A),
            ("e1", End::B),
            ("e2", End::A),
            ("e2", End::B),
        ]);
        assert_eq!(planar.nice_crossing().unwrap(), None);
        // Word e1 e2 a ē1 ā ē2 finds (e1, e2).
        let w = rosette(&[
            ("e1", End::A),
            ("e2", End::A),
            ("a", End::A),
            ("e1", End::B),
            ("a", End::B),
            ("e2", End::B),
        ]);
        assert_eq!(w.nice_crossing().unwrap(), Some(("e1".into(), "e2".into())));
        // Not a rosette -> unsupported.
        let p2 = fixtures::p2().ribbon.unwrap();
        assert!(p2.nice_crossing().is_err());
    }

    #[test]
    fn double_contract_examples() {
        // X2 collapses to a bare vertex.
        let x2 = rosette(&[
            ("e1", End::A),
            ("e2", End::A),
            ("e1", End::B),
            ("e2", End::B),
        ]);
        let bare = x2.double_contract(&"e1".into(), &"e2".into()).unwrap();
        assert_eq!(bare.graph().edge_count(), 0);
        assert_eq!(bare.boundary_count(), 1);
        assert_eq!(bare.genus().unwrap(), 0);
        // e1 e2 a ē1 ā ē2 -> word ā a, a planar self-loop; bc stays 2.
        let w = rosette(&[
            ("e1", End::A),
            ("e2", End::A),
            ("a", End::A),
            ("e1", End::B),
            ("a", End::B),
            ("e2", End::B),
        ]);
        assert_eq!(w.boundary_count(), 2);
        assert_eq!(w.genus().unwrap(), 1);
        let r = w.double_contract(&"e1".into(), &"e2".into()).unwrap();
        assert_eq!(r.graph().edge_count(), 1);
        assert_eq!(r.boundary_count(), 2);
        assert_eq!(r.genus().unwrap(), 0);
        assert_eq!(
            r.rotation(&"v".into()),
            &[
                Slot::Half("a".into(), End::B),
                Slot::Half("a".into(), End::A)
            ]
        );
    }
}
