//! Seeded random graphs, ribbon graphs, rosettes and matrices for the
//! property suites. Everything is a pure function of the RNG state, so a
//! fixed seed reproduces the same corpus everywhere.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::matrix::SymMatrix;
use crate::poly::{rat, Atom, MPoly, Monomial};
use crate::ribbon::{RibbonGraph, Slot};

/// Shape of the generated graphs.
#[derive(Clone, Copy, Debug)]
pub struct GraphGen {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub connected: bool,
    /// Attach at least one momentum-carrying flag to every vertex.
    pub flag_every_vertex: bool,
}

impl Default for GraphGen {
    fn default() -> Self {
        GraphGen {
            max_vertices: 6,
            max_edges: 7,
            connected: true,
            flag_every_vertex: true,
        }
    }
}

/// A random multigraph (all vertices weighted). Self-loops and parallel
/// edges are fair game.
pub fn random_graph(rng: &mut ChaCha8Rng, gen: &GraphGen) -> Graph {
    let nv = rng.random_range(1..=gen.max_vertices);
    let min_edges = if gen.connected && nv > 1 { nv - 1 } else { 0 };
    let ne = rng.random_range(min_edges..=gen.max_edges.max(min_edges));
    let mut g = Graph::new();
    for i in 1..=nv {
        g.add_vertex(format!("v{i}"), true).unwrap();
    }
    let vid = |i: usize| format!("v{i}");
    let mut next_edge = 1;
    if gen.connected {
        // A random spanning tree first, then arbitrary extras.
        for i in 2..=nv {
            let anchor = rng.random_range(1..i);
            let (t, h) = if rng.random_bool(0.5) {
                (vid(anchor), vid(i))
            } else {
                (vid(i), vid(anchor))
            };
            g.add_edge(format!("e{next_edge}"), t, h).unwrap();
            next_edge += 1;
        }
    }
    while next_edge <= ne {
        let t = vid(rng.random_range(1..=nv));
        let h = vid(rng.random_range(1..=nv));
        g.add_edge(format!("e{next_edge}"), t, h).unwrap();
        next_edge += 1;
    }
    let mut next_flag = 1;
    for i in 1..=nv {
        let extra = rng.random_range(0..2);
        let count = if gen.flag_every_vertex { 1 + extra } else { extra };
        for _ in 0..count {
            g.add_flag(
                format!("f{next_flag}"),
                vid(i),
                Some(format!("p{next_flag}")),
            )
            .unwrap();
            next_flag += 1;
        }
    }
    g
}

/// A random ribbon graph: a random graph with shuffled rotations.
pub fn random_ribbon(rng: &mut ChaCha8Rng, gen: &GraphGen) -> RibbonGraph {
    let g = random_graph(rng, gen);
    ribbon_with_random_rotations(rng, g)
}

/// Wraps an existing graph in random rotations.
pub fn ribbon_with_random_rotations(rng: &mut ChaCha8Rng, g: Graph) -> RibbonGraph {
    let mut rotation = std::collections::BTreeMap::new();
    for v in g.vertices() {
        let mut slots: Vec<Slot> = Vec::new();
        for e in g.edges() {
            if e.tail == v.id {
                slots.push(Slot::Half(e.id.clone(), crate::ribbon::End::A));
            }
            if e.head == v.id {
                slots.push(Slot::Half(e.id.clone(), crate::ribbon::End::B));
            }
        }
        for f in g.flags() {
            if f.vertex == v.id {
                slots.push(Slot::Flag(f.id.clone()));
            }
        }
        slots.shuffle(rng);
        rotation.insert(v.id.clone(), slots);
    }
    RibbonGraph::new(g, rotation).expect("random rotations are a valid map")
}

/// A random flagless rosette with `1..=max_edges` self-loops.
pub fn random_rosette(rng: &mut ChaCha8Rng, max_edges: usize) -> RibbonGraph {
    let ne = rng.random_range(1..=max_edges);
    let mut g = Graph::new();
    g.add_vertex("v", true).unwrap();
    for i in 1..=ne {
        g.add_edge(format!("e{i}"), "v", "v").unwrap();
    }
    ribbon_with_random_rotations(rng, g)
}

/// A random polynomial in a few α/q atoms, small integer coefficients.
pub fn random_small_poly(rng: &mut ChaCha8Rng) -> MPoly {
    let atoms = [
        Atom::alpha("e1"),
        Atom::alpha("e2"),
        Atom::Q,
        Atom::vweight("v1"),
    ];
    let terms = rng.random_range(0..4);
    let mut p = MPoly::zero();
    for _ in 0..terms {
        let c = rng.random_range(-3i64..=3);
        if c == 0 {
            continue;
        }
        let mut pairs = Vec::new();
        for a in &atoms {
            let k = rng.random_range(0..2u32);
            if k > 0 {
                pairs.push((a.clone(), k));
            }
        }
        p += MPoly::term(rat(c, 1), Monomial::from_pairs(pairs));
    }
    p
}

/// A random antisymmetric matrix with polynomial entries.
pub fn random_antisymmetric(rng: &mut ChaCha8Rng, dim: usize) -> SymMatrix {
    let mut m = SymMatrix::zero(dim);
    for i in 0..dim {
        for j in i + 1..dim {
            let p = random_small_poly(rng);
            m[(i, j)] = p.clone();
            m[(j, i)] = -p;
        }
    }
    m
}
