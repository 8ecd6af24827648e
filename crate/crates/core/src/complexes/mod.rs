//! Square complexes, vertex links, the link condition and Morse links.

mod cover;
mod torus;

pub use cover::{cover_from_action, delete_generator, verify_covering, without_square, CellMap, CoveringReport};
pub use torus::{torus_embedding, torus_edge, TorusEdge, TorusReport};

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{GmkError, Result};
use crate::family::Presentation;
use crate::words::Alphabet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub label: usize,
}

/// One side of a square: an edge traversed forwards or backwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub edge: usize,
    pub forward: bool,
}

impl Step {
    pub fn fwd(edge: usize) -> Self {
        Step { edge, forward: true }
    }

    pub fn bwd(edge: usize) -> Self {
        Step { edge, forward: false }
    }

    pub fn reversed(self) -> Self {
        Step {
            edge: self.edge,
            forward: !self.forward,
        }
    }
}

pub type Square = [Step; 4];

/// Which end of an edge: `Out` is the source end `e⁻`, `In` the target end `e⁺`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    Out,
    In,
}

/// An edge-end, i.e. a node of a vertex link.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeEnd {
    pub edge: usize,
    pub end: End,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareComplex {
    vertex_names: Vec<String>,
    labels: Alphabet,
    edges: Vec<Edge>,
    squares: Vec<Square>,
}

impl SquareComplex {
    pub fn new(
        vertex_names: Vec<String>,
        labels: Alphabet,
        edges: Vec<Edge>,
        squares: Vec<Square>,
    ) -> Result<Self> {
        let nv = vertex_names.len();
        for e in &edges {
            if e.src >= nv || e.dst >= nv || e.label >= labels.rank() {
                return Err(GmkError::InvalidParameters(format!("edge {e:?} out of range")));
            }
        }
        let x = SquareComplex {
            vertex_names,
            labels,
            edges,
            squares,
        };
        for (i, sq) in x.squares.iter().enumerate() {
            if sq.iter().any(|s| s.edge >= x.edges.len()) {
                return Err(GmkError::InvalidParameters(format!("square {i} uses a missing edge")));
            }
            for c in 0..4 {
                let (a, b) = (sq[c], sq[(c + 1) % 4]);
                if x.step_target(a) != x.step_source(b) {
                    return Err(GmkError::InvalidParameters(format!("square {i} is not closed")));
                }
                if b == a.reversed() {
                    return Err(GmkError::InvalidParameters(format!("square {i} backtracks")));
                }
            }
        }
        Ok(x)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    pub fn labels(&self) -> &Alphabet {
        &self.labels
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn squares(&self) -> &[Square] {
        &self.squares
    }

    pub fn counts(&self) -> [usize; 3] {
        [self.vertex_count(), self.edges.len(), self.squares.len()]
    }

    pub fn step_source(&self, s: Step) -> usize {
        let e = self.edges[s.edge];
        if s.forward {
            e.src
        } else {
            e.dst
        }
    }

    pub fn step_target(&self, s: Step) -> usize {
        let e = self.edges[s.edge];
        if s.forward {
            e.dst
        } else {
            e.src
        }
    }

    pub fn end_vertex(&self, n: EdgeEnd) -> usize {
        match n.end {
            End::Out => self.edges[n.edge].src,
            End::In => self.edges[n.edge].dst,
        }
    }

    /// The two edge-ends meeting at corner `c` of square `q` (between sides `c` and `c+1`).
    pub fn corner(&self, q: usize, c: usize) -> (EdgeEnd, EdgeEnd) {
        let sq = &self.squares[q];
        let (a, b) = (sq[c], sq[(c + 1) % 4]);
        let arriving = EdgeEnd {
            edge: a.edge,
            end: if a.forward { End::In } else { End::Out },
        };
        let leaving = EdgeEnd {
            edge: b.edge,
            end: if b.forward { End::Out } else { End::In },
        };
        (arriving, leaving)
    }

    /// Links of every vertex, indexed by vertex.
    pub fn links(&self) -> Vec<LinkGraph> {
        let mut links: Vec<LinkGraph> = (0..self.vertex_count())
            .map(|v| LinkGraph {
                vertex: v,
                nodes: Vec::new(),
                arcs: Vec::new(),
            })
            .collect();
        for (i, e) in self.edges.iter().enumerate() {
            links[e.src].nodes.push(EdgeEnd { edge: i, end: End::Out });
            links[e.dst].nodes.push(EdgeEnd { edge: i, end: End::In });
        }
        for q in 0..self.squares.len() {
            for c in 0..4 {
                let (a, b) = self.corner(q, c);
                let v = self.end_vertex(a);
                links[v].arcs.push(LinkArc { a, b, square: q, corner: c });
            }
        }
        for l in &mut links {
            l.nodes.sort();
        }
        links
    }

    pub fn vertex_link(&self, v: usize) -> Result<LinkGraph> {
        if v >= self.vertex_count() {
            return Err(GmkError::InvalidParameters(format!("no vertex {v}")));
        }
        Ok(self.links().swap_remove(v))
    }

    pub fn label_name(&self, label: usize) -> &str {
        self.labels.name(label)
    }

    /// Human-readable node name such as `a3+` or `a1-`.
    pub fn end_name(&self, n: EdgeEnd) -> String {
        let l = self.label_name(self.edges[n.edge].label);
        match n.end {
            End::Out => format!("{l}-"),
            End::In => format!("{l}+"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinkArc {
    pub a: EdgeEnd,
    pub b: EdgeEnd,
    pub square: usize,
    pub corner: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkGraph {
    pub vertex: usize,
    pub nodes: Vec<EdgeEnd>,
    pub arcs: Vec<LinkArc>,
}

impl LinkGraph {
    fn restricted(&self, keep: impl Fn(EdgeEnd) -> bool) -> LinkGraph {
        LinkGraph {
            vertex: self.vertex,
            nodes: self.nodes.iter().copied().filter(|&n| keep(n)).collect(),
            arcs: self
                .arcs
                .iter()
                .copied()
                .filter(|a| keep(a.a) && keep(a.b))
                .collect(),
        }
    }

    pub fn is_connected(&self) -> bool {
        let Some(&first) = self.nodes.first() else {
            return true;
        };
        let mut adj: HashMap<EdgeEnd, Vec<EdgeEnd>> = HashMap::new();
        for a in &self.arcs {
            adj.entry(a.a).or_default().push(a.b);
            adj.entry(a.b).or_default().push(a.a);
        }
        let mut seen = BTreeSet::from([first]);
        let mut queue = VecDeque::from([first]);
        while let Some(x) = queue.pop_front() {
            for &y in adj.get(&x).into_iter().flatten() {
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.len() == self.nodes.len()
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.arcs.len() + 1 == self.nodes.len()
    }

    /// Unordered node pairs of every arc, sorted.
    pub fn arc_pairs(&self) -> Vec<(EdgeEnd, EdgeEnd)> {
        let mut v: Vec<_> = self
            .arcs
            .iter()
            .map(|a| if a.a <= a.b { (a.a, a.b) } else { (a.b, a.a) })
            .collect();
        v.sort();
        v
    }
}

/// A vertex presentation complex: one vertex, one loop per generator, one square per relator.
pub fn presentation_complex(pres: &Presentation) -> Result<SquareComplex> {
    let n = pres.generator_count();
    let edges = (0..n).map(|label| Edge { src: 0, dst: 0, label }).collect();
    let mut squares = Vec::with_capacity(pres.relators.len());
    for (i, r) in pres.relators.iter().enumerate() {
        if r.len() != 4 {
            return Err(GmkError::RelatorLength { index: i, len: r.len() });
        }
        let l = r.letters();
        squares.push(std::array::from_fn(|c| Step {
            edge: l[c].index(),
            forward: !l[c].is_inverse(),
        }));
    }
    SquareComplex::new(vec!["v".into()], pres.alphabet.clone(), edges, squares)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CircuitKind {
    Loop,
    Bigon,
    Triangle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShortCircuit {
    pub vertex: usize,
    pub kind: CircuitKind,
    pub nodes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NpcReport {
    pub ok: bool,
    pub short_circuits: Vec<ShortCircuit>,
}

/// Gromov link condition: every link is simplicial with no 3-cycles.
pub fn check_npc(x: &SquareComplex) -> NpcReport {
    let mut found = Vec::new();
    for link in x.links() {
        let v = link.vertex;
        let mut adj: HashMap<EdgeEnd, BTreeSet<EdgeEnd>> = HashMap::new();
        let mut seen_pairs = BTreeSet::new();
        for (a, b) in link.arc_pairs() {
            if a == b {
                found.push(ShortCircuit {
                    vertex: v,
                    kind: CircuitKind::Loop,
                    nodes: vec![x.end_name(a)],
                });
                continue;
            }
            if !seen_pairs.insert((a, b)) {
                found.push(ShortCircuit {
                    vertex: v,
                    kind: CircuitKind::Bigon,
                    nodes: vec![x.end_name(a), x.end_name(b)],
                });
            }
            adj.entry(a).or_default().insert(b);
            adj.entry(b).or_default().insert(a);
        }
        for &(a, b) in &seen_pairs {
            for &c in adj[&a].intersection(&adj[&b]) {
                if c > b {
                    found.push(ShortCircuit {
                        vertex: v,
                        kind: CircuitKind::Triangle,
                        nodes: vec![x.end_name(a), x.end_name(b), x.end_name(c)],
                    });
                }
            }
        }
    }
    NpcReport {
        ok: found.is_empty(),
        short_circuits: found,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseLinks {
    pub vertex: usize,
    pub ascending: LinkGraph,
    pub descending: LinkGraph,
}

/// Ascending (all `e⁻`) and descending (all `e⁺`) links at every vertex,
/// for the circle-valued Morse function that sends each edge once around positively.
pub fn morse_links(x: &SquareComplex) -> Vec<MorseLinks> {
    x.links()
        .into_iter()
        .map(|l| MorseLinks {
            vertex: l.vertex,
            ascending: l.restricted(|n| n.end == End::Out),
            descending: l.restricted(|n| n.end == End::In),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::presentation;

    pub(crate) fn torus() -> SquareComplex {
        presentation_complex(&presentation(1, 0).unwrap()).unwrap()
    }

    fn named_pairs(x: &SquareComplex, l: &LinkGraph) -> Vec<(String, String)> {
        let mut v: Vec<_> = l
            .arc_pairs()
            .into_iter()
            .map(|(a, b)| {
                let (a, b) = (x.end_name(a), x.end_name(b));
                if a <= b { (a, b) } else { (b, a) }
            })
            .collect();
        v.sort();
        v
    }

    fn pairs(v: &[(&str, &str)]) -> Vec<(String, String)> {
        let mut v: Vec<_> = v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        v.sort();
        v
    }

    #[test]
    fn presentation_complex_counts() {
        assert_eq!(torus().counts(), [1, 2, 1]);
        let k22 = presentation_complex(&presentation(2, 2).unwrap()).unwrap();
        assert_eq!(k22.counts(), [1, 5, 4]);
        let k32 = presentation_complex(&presentation(3, 2).unwrap()).unwrap();
        assert_eq!(k32.counts(), [1, 6, 5]);
    }

    #[test]
    fn long_relator_rejected() {
        let mut p = presentation(1, 0).unwrap();
        p.relators.push(p.alphabet.parse("a1 a2 a1").unwrap());
        assert_eq!(
            presentation_complex(&p).unwrap_err(),
            GmkError::RelatorLength { index: 1, len: 3 }
        );
    }

    #[test]
    fn malformed_squares_rejected() {
        let ab = Alphabet::indexed("a", 2);
        let edges = vec![Edge { src: 0, dst: 1, label: 0 }, Edge { src: 1, dst: 0, label: 1 }];
        let open = [Step::fwd(0), Step::fwd(0), Step::fwd(1), Step::fwd(1)];
        assert!(SquareComplex::new(vec!["x".into(), "y".into()], ab.clone(), edges.clone(), vec![open]).is_err());
        let backtrack = [Step::fwd(0), Step::bwd(0), Step::fwd(0), Step::fwd(1)];
        assert!(SquareComplex::new(vec!["x".into(), "y".into()], ab, edges, vec![backtrack]).is_err());
    }

    #[test]
    fn k22_link() {
        let k22 = presentation_complex(&presentation(2, 2).unwrap()).unwrap();
        let l = k22.vertex_link(0).unwrap();
        assert_eq!((l.nodes.len(), l.arcs.len()), (10, 16));
        let names = named_pairs(&k22, &l);
        assert!(names.contains(&("a1+".into(), "a2+".into())));
    }

    #[test]
    fn torus_link_is_four_cycle() {
        let t = torus();
        let l = t.vertex_link(0).unwrap();
        assert_eq!((l.nodes.len(), l.arcs.len()), (4, 4));
        assert_eq!(
            named_pairs(&t, &l),
            pairs(&[("a1+", "a2-"), ("a1+", "a2+"), ("a1-", "a2+"), ("a1-", "a2-")])
        );
        assert!(check_npc(&t).ok);
    }

    #[test]
    fn npc_for_family() {
        for m in 1..=5 {
            for k in 1..=m {
                let x = presentation_complex(&presentation(m, k).unwrap()).unwrap();
                assert!(check_npc(&x).ok, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn short_circuits_detected() {
        // Two copies of one square double every link arc.
        let ab = Alphabet::indexed("a", 2);
        let edges = vec![Edge { src: 0, dst: 0, label: 0 }, Edge { src: 0, dst: 0, label: 1 }];
        let sq = [Step::fwd(0), Step::fwd(1), Step::bwd(0), Step::bwd(1)];
        let x = SquareComplex::new(vec!["v".into()], ab.clone(), edges.clone(), vec![sq, sq]).unwrap();
        let r = check_npc(&x);
        assert!(!r.ok);
        assert!(r.short_circuits.iter().any(|c| c.kind == CircuitKind::Bigon));

        // The 2-skeleton of the 3-torus has triangles in its link.
        let s1 = [
            Step::fwd(0),
            Step::fwd(1),
            Step::bwd(0),
            Step::bwd(1),
        ];
        let ab3 = Alphabet::indexed("a", 3);
        let edges3 = vec![
            Edge { src: 0, dst: 0, label: 0 },
            Edge { src: 0, dst: 0, label: 1 },
            Edge { src: 0, dst: 0, label: 2 },
        ];
        let s2 = [Step::fwd(1), Step::fwd(2), Step::bwd(1), Step::bwd(2)];
        let s3 = [Step::fwd(0), Step::fwd(2), Step::bwd(0), Step::bwd(2)];
        let x = SquareComplex::new(vec!["v".into()], ab3, edges3, vec![s1, s2, s3]).unwrap();
        let r = check_npc(&x);
        assert!(r.short_circuits.iter().any(|c| c.kind == CircuitKind::Triangle));
    }

    #[test]
    fn k22_morse_links() {
        let k22 = presentation_complex(&presentation(2, 2).unwrap()).unwrap();
        let ml = &morse_links(&k22)[0];
        assert_eq!(
            named_pairs(&k22, &ml.descending),
            pairs(&[("a1+", "a2+"), ("a2+", "a3+"), ("a3+", "a4+"), ("a4+", "a5+")])
        );
        assert_eq!(
            named_pairs(&k22, &ml.ascending),
            pairs(&[("a1-", "a2-"), ("a2-", "a3-"), ("a1-", "a4-"), ("a2-", "a5-")])
        );
        assert!(ml.ascending.is_tree() && ml.descending.is_tree());
    }

    #[test]
    fn torus_morse_links() {
        let t = torus();
        let ml = &morse_links(&t)[0];
        assert_eq!(named_pairs(&t, &ml.ascending), pairs(&[("a1-", "a2-")]));
        assert!(ml.ascending.is_tree());
    }

    #[test]
    fn family_morse_links_are_trees() {
        for m in 1..=5 {
            for k in 0..=m {
                let x = presentation_complex(&presentation(m, k).unwrap()).unwrap();
                let ml = &morse_links(&x)[0];
                for l in [&ml.ascending, &ml.descending] {
                    assert!(l.is_tree());
                    assert_eq!((l.nodes.len(), l.arcs.len()), (m + k + 1, m + k));
                }
            }
        }
    }
}
