//! Walls and hyperplanes of square complexes, the four obstructions to
//! specialness, and VH colourings.
//!
//! An oriented edge is encoded as `2 * edge + r` where `r = 1` means the edge
//! is traversed against its direction. Two oriented edges are elementary
//! parallel when they are opposite sides of a square traversed the same way;
//! walls are the classes of the generated equivalence relation and
//! hyperplanes are walls modulo reversal.
//!
//! Osculation is read off the vertex links: two edge-ends at a vertex that
//! are dual to the relevant hyperplanes osculate when no square has a corner
//! joining them.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::Serialize;

use crate::complexes::{
    check_npc, torus_edge, Edge, EdgeEnd, End, LinkGraph, SquareComplex, Step,
};
use crate::words::Alphabet;

fn oriented(s: Step) -> usize {
    2 * s.edge + usize::from(!s.forward)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallDecomposition {
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    opposite: Vec<usize>,
    hyperplane_of_class: Vec<usize>,
    hyperplanes: Vec<Vec<usize>>,
}

impl WallDecomposition {
    /// Oriented edges in each class, classes ordered by smallest member.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, oriented_edge: usize) -> usize {
        self.class_of[oriented_edge]
    }

    pub fn opposite(&self, class: usize) -> usize {
        self.opposite[class]
    }

    /// Geometric edges dual to each hyperplane.
    pub fn hyperplanes(&self) -> &[Vec<usize>] {
        &self.hyperplanes
    }

    pub fn hyperplane_of_class(&self, class: usize) -> usize {
        self.hyperplane_of_class[class]
    }

    pub fn hyperplane_of_edge(&self, edge: usize) -> usize {
        self.hyperplane_of_class[self.class_of[2 * edge]]
    }

    /// True when `edge`, traversed forward, points along the hyperplane's
    /// reference class (the class of its first dual edge traversed forward).
    fn agrees_with_reference(&self, edge: usize) -> bool {
        let h = self.hyperplane_of_edge(edge);
        let reference = self.class_of[2 * self.hyperplanes[h][0]];
        self.class_of[2 * edge] == reference
    }
}

pub fn compute_walls(x: &SquareComplex) -> WallDecomposition {
    let n = 2 * x.edges().len();
    let mut uf = UnionFind::<usize>::new(n);
    for sq in x.squares() {
        for c in 0..2 {
            let (a, b) = (oriented(sq[c]), oriented(sq[c + 2]) ^ 1);
            uf.union(a, b);
            uf.union(a ^ 1, b ^ 1);
        }
    }
    let labels = uf.into_labeling();
    let mut index = BTreeMap::new();
    let mut class_of = vec![0; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for o in 0..n {
        let next = index.len();
        let c = *index.entry(labels[o]).or_insert(next);
        if c == classes.len() {
            classes.push(Vec::new());
        }
        classes[c].push(o);
        class_of[o] = c;
    }
    let opposite: Vec<usize> = classes.iter().map(|cl| class_of[cl[0] ^ 1]).collect();
    let mut hyperplane_of_class = vec![usize::MAX; classes.len()];
    let mut hyperplanes: Vec<Vec<usize>> = Vec::new();
    for e in 0..x.edges().len() {
        let c = class_of[2 * e];
        if hyperplane_of_class[c] == usize::MAX {
            hyperplane_of_class[c] = hyperplanes.len();
            hyperplane_of_class[opposite[c]] = hyperplanes.len();
            hyperplanes.push(Vec::new());
        }
        hyperplanes[hyperplane_of_class[c]].push(e);
    }
    WallDecomposition {
        class_of,
        classes,
        opposite,
        hyperplane_of_class,
        hyperplanes,
    }
}

/// Hyperplanes some of whose oriented classes contain an edge and its reverse.
pub fn one_sided_hyperplanes(w: &WallDecomposition) -> Vec<usize> {
    let set: BTreeSet<usize> = (0..w.classes.len())
        .filter(|&c| w.opposite[c] == c)
        .map(|c| w.hyperplane_of_class[c])
        .collect();
    set.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelfIntersection {
    pub hyperplane: usize,
    pub square: usize,
}

/// Squares whose two midcubes lie in one hyperplane.
pub fn self_intersections(x: &SquareComplex, w: &WallDecomposition) -> Vec<SelfIntersection> {
    x.squares()
        .iter()
        .enumerate()
        .filter_map(|(q, sq)| {
            let h = w.hyperplane_of_edge(sq[0].edge);
            (h == w.hyperplane_of_edge(sq[1].edge)).then_some(SelfIntersection { hyperplane: h, square: q })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OsculationKind {
    Direct,
    Indirect,
    /// The hyperplane is one-sided, so the distinction is meaningless.
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Osculation {
    pub hyperplane: usize,
    pub vertex: String,
    pub ends: [String; 2],
    pub kind: OsculationKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InterOsculation {
    pub hyperplanes: [usize; 2],
    pub crossing_square: usize,
    pub vertex: String,
    pub ends: [String; 2],
    /// Number of osculating edge-end pairs found for this pair of hyperplanes.
    pub witnesses: usize,
}

fn arc_set(l: &LinkGraph) -> HashSet<(EdgeEnd, EdgeEnd)> {
    l.arc_pairs().into_iter().collect()
}

/// Ends of distinct edges meeting at a vertex that no square corner joins.
fn unjoined_pairs(x: &SquareComplex) -> Vec<(usize, EdgeEnd, EdgeEnd)> {
    let links = x.links();
    links
        .par_iter()
        .map(|l| {
            let arcs = arc_set(l);
            let mut out = Vec::new();
            for (i, &a) in l.nodes.iter().enumerate() {
                for &b in &l.nodes[i + 1..] {
                    if a.edge != b.edge && !arcs.contains(&(a, b)) {
                        out.push((l.vertex, a, b));
                    }
                }
            }
            out
        })
        .flatten()
        .collect()
}

/// Whether the end `n` is the origin of its edge once the edge is oriented
/// along its hyperplane's reference class.
fn is_origin(w: &WallDecomposition, n: EdgeEnd) -> bool {
    (n.end == End::Out) == w.agrees_with_reference(n.edge)
}

pub fn self_osculations(x: &SquareComplex, w: &WallDecomposition) -> Vec<Osculation> {
    let one_sided: HashSet<usize> = one_sided_hyperplanes(w).into_iter().collect();
    unjoined_pairs(x)
        .into_iter()
        .filter(|(_, a, b)| w.hyperplane_of_edge(a.edge) == w.hyperplane_of_edge(b.edge))
        .map(|(v, a, b)| {
            let h = w.hyperplane_of_edge(a.edge);
            let kind = if one_sided.contains(&h) {
                OsculationKind::Undetermined
            } else if is_origin(w, a) == is_origin(w, b) {
                OsculationKind::Direct
            } else {
                OsculationKind::Indirect
            };
            Osculation {
                hyperplane: h,
                vertex: x.vertex_name(v).to_string(),
                ends: [x.end_name(a), x.end_name(b)],
                kind,
            }
        })
        .collect()
}

/// Pairs of distinct hyperplanes that cross in a square and also osculate.
pub fn inter_osculations(x: &SquareComplex, w: &WallDecomposition) -> Vec<InterOsculation> {
    let mut crossing: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (q, sq) in x.squares().iter().enumerate() {
        let (h1, h2) = (w.hyperplane_of_edge(sq[0].edge), w.hyperplane_of_edge(sq[1].edge));
        if h1 != h2 {
            crossing.entry((h1.min(h2), h1.max(h2))).or_insert(q);
        }
    }
    let mut found: BTreeMap<(usize, usize), InterOsculation> = BTreeMap::new();
    for (v, a, b) in unjoined_pairs(x) {
        let (h1, h2) = (w.hyperplane_of_edge(a.edge), w.hyperplane_of_edge(b.edge));
        if h1 == h2 {
            continue;
        }
        let key = (h1.min(h2), h1.max(h2));
        let Some(&q) = crossing.get(&key) else {
            continue;
        };
        found
            .entry(key)
            .and_modify(|r| r.witnesses += 1)
            .or_insert_with(|| InterOsculation {
                hyperplanes: [key.0, key.1],
                crossing_square: q,
                vertex: x.vertex_name(v).to_string(),
                ends: [x.end_name(a), x.end_name(b)],
                witnesses: 1,
            });
    }
    found.into_values().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VhReport {
    pub ok: bool,
    /// Label names carried by each colour class (present when `ok`).
    pub classes: Vec<Vec<String>>,
    /// Colour of each edge (present when `ok`).
    #[serde(skip)]
    pub colouring: Vec<u8>,
    /// An odd cycle of edges, consecutive ones adjacent in some square (present when not `ok`).
    pub certificate: Vec<String>,
}

fn edge_name(x: &SquareComplex, e: usize) -> String {
    let Edge { src, dst, label } = x.edges()[e];
    if x.vertex_count() == 1 {
        x.label_name(label).to_string()
    } else {
        format!("{}-{}->{}", x.vertex_name(src), x.label_name(label), x.vertex_name(dst))
    }
}

/// Two-colour the edges so adjacent sides of every square differ.
pub fn vh_classification(x: &SquareComplex) -> VhReport {
    let ne = x.edges().len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); ne];
    for sq in x.squares() {
        for c in 0..4 {
            let (a, b) = (sq[c].edge, sq[(c + 1) % 4].edge);
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut colour: Vec<Option<u8>> = vec![None; ne];
    let mut parent = vec![usize::MAX; ne];
    let mut depth = vec![0usize; ne];
    for start in 0..ne {
        if colour[start].is_some() {
            continue;
        }
        colour[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(a) = queue.pop_front() {
            let ca = colour[a].expect("queued edges are coloured");
            for &b in &adj[a] {
                match colour[b] {
                    None => {
                        colour[b] = Some(1 - ca);
                        parent[b] = a;
                        depth[b] = depth[a] + 1;
                        queue.push_back(b);
                    }
                    Some(cb) if cb == ca => {
                        let cycle = odd_cycle(a, b, &parent, &depth);
                        return VhReport {
                            ok: false,
                            classes: Vec::new(),
                            colouring: Vec::new(),
                            certificate: cycle.into_iter().map(|e| edge_name(x, e)).collect(),
                        };
                    }
                    Some(_) => {}
                }
            }
        }
    }
    let colouring: Vec<u8> = colour.into_iter().map(|c| c.expect("all coloured")).collect();
    let mut classes = [BTreeSet::new(), BTreeSet::new()];
    for (e, &c) in colouring.iter().enumerate() {
        classes[c as usize].insert(x.edges()[e].label);
    }
    let names = |s: &BTreeSet<usize>| s.iter().map(|&l| x.label_name(l).to_string()).collect();
    VhReport {
        ok: true,
        classes: classes.iter().map(names).collect(),
        colouring,
        certificate: Vec::new(),
    }
}

/// Tree paths from `a` and `b` up to their common ancestor, closed by the edge `a–b`.
fn odd_cycle(a: usize, b: usize, parent: &[usize], depth: &[usize]) -> Vec<usize> {
    let (mut x, mut y) = (a, b);
    let mut left = vec![x];
    let mut right = vec![y];
    while depth[x] > depth[y] {
        x = parent[x];
        left.push(x);
    }
    while depth[y] > depth[x] {
        y = parent[y];
        right.push(y);
    }
    while x != y {
        x = parent[x];
        y = parent[y];
        left.push(x);
        right.push(y);
    }
    right.pop();
    right.reverse();
    left.extend(right);
    left
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "SPECIAL")]
    Special,
    #[serde(rename = "CLEAN-BUT-INTEROSCULATING")]
    CleanButInterosculating,
    #[serde(rename = "OTHER")]
    Other,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Special => "SPECIAL",
            Verdict::CleanButInterosculating => "CLEAN-BUT-INTEROSCULATING",
            Verdict::Other => "OTHER",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialnessReport {
    pub two_sided: bool,
    pub one_sided_hyperplanes: Vec<usize>,
    pub self_intersections: Vec<SelfIntersection>,
    pub self_osculations: Vec<Osculation>,
    pub inter_osculations: Vec<InterOsculation>,
    pub vh: VhReport,
    pub npc: bool,
    pub hyperplanes: usize,
    pub verdict: Verdict,
}

impl SpecialnessReport {
    /// Two-sided, no self-intersection, no self-osculation.
    pub fn clean(&self) -> bool {
        self.two_sided && self.self_intersections.is_empty() && self.self_osculations.is_empty()
    }
}

pub fn specialness_report(x: &SquareComplex) -> SpecialnessReport {
    let w = compute_walls(x);
    let one_sided = one_sided_hyperplanes(&w);
    let self_intersections = self_intersections(x, &w);
    let self_osculations = self_osculations(x, &w);
    let inter_osculations = inter_osculations(x, &w);
    let npc = check_npc(x).ok;
    let clean = npc && one_sided.is_empty() && self_intersections.is_empty() && self_osculations.is_empty();
    let verdict = match (clean, inter_osculations.is_empty()) {
        (true, true) => Verdict::Special,
        (true, false) => Verdict::CleanButInterosculating,
        _ => Verdict::Other,
    };
    SpecialnessReport {
        two_sided: one_sided.is_empty(),
        one_sided_hyperplanes: one_sided,
        self_intersections,
        self_osculations,
        inter_osculations,
        vh: vh_classification(x),
        npc,
        hyperplanes: w.hyperplanes().len(),
        verdict,
    }
}

/// For a complex whose vertices are points of `{0,1}^n` and whose edges flip
/// one coordinate: does every oriented class lie over a single torus wall
/// `(position, e_alpha)`, with distinct classes over distinct walls only
/// when they are distinct hyperplanes? Returns the number of offending classes.
pub fn torus_wall_offenders(x: &SquareComplex, w: &WallDecomposition) -> usize {
    let wall = |o: usize| {
        torus_edge(&x.edges()[o / 2]).map(|t| (t.position, t.alpha ^ (o as u8 & 1)))
    };
    w.classes()
        .iter()
        .filter(|cl| {
            let first = wall(cl[0]);
            first.is_none() || cl.iter().any(|&o| wall(o) != first)
        })
        .count()
}

/// Small complexes used as fixtures and negative controls.
pub mod fixtures {
    use std::collections::HashMap;

    use super::*;

    fn single_vertex(names: &[&str], squares: &[[(usize, bool); 4]]) -> SquareComplex {
        let labels = Alphabet::new(names.iter().map(|s| s.to_string()).collect()).expect("valid names");
        let edges = (0..names.len()).map(|label| Edge { src: 0, dst: 0, label }).collect();
        let squares = squares
            .iter()
            .map(|sq| std::array::from_fn(|c| Step { edge: sq[c].0, forward: sq[c].1 }))
            .collect();
        SquareComplex::new(vec!["v".into()], labels, edges, squares).expect("valid fixture")
    }

    /// One square with boundary `a b a^-1 b^-1`.
    pub fn torus() -> SquareComplex {
        single_vertex(&["a", "b"], &[[(0, true), (1, true), (0, false), (1, false)]])
    }

    /// One square with boundary `a b a b^-1`; the hyperplane dual to `a` is one-sided.
    pub fn klein_bottle() -> SquareComplex {
        single_vertex(&["a", "b"], &[[(0, true), (1, true), (0, true), (1, false)]])
    }

    /// Five squares in `[0,2] x [0,1] x [0,1]`: the faces `z=0` (two
    /// squares), `x=0`, `z=1` over `x ∈ [0,1]`, and `y=1` over `x ∈ [1,2]`.
    /// The hyperplane dual to the `y`-edges crosses the one dual to the
    /// `x`-edges over `[1,2]`, and they osculate at `(1,1,1)`.
    pub fn interosculating_prism() -> SquareComplex {
        let vid = |x: usize, y: usize, z: usize| x + 3 * (y + 2 * z);
        let mut names = vec![String::new(); 12];
        for z in 0..2 {
            for y in 0..2 {
                for x in 0..3 {
                    names[vid(x, y, z)] = format!("{x}{y}{z}");
                }
            }
        }
        let unit = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        let mut edges = Vec::new();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edge = |p: [usize; 3], axis: usize| {
            let q = [p[0] + unit[axis][0], p[1] + unit[axis][1], p[2] + unit[axis][2]];
            let (s, t) = (vid(p[0], p[1], p[2]), vid(q[0], q[1], q[2]));
            *index.entry((s, t)).or_insert_with(|| {
                edges.push(Edge { src: s, dst: t, label: axis });
                edges.len() - 1
            })
        };
        let faces = [
            ([0, 0, 0], 0, 1),
            ([1, 0, 0], 0, 1),
            ([0, 0, 0], 1, 2),
            ([0, 0, 1], 0, 1),
            ([1, 1, 0], 0, 2),
        ];
        let mut squares = Vec::new();
        for (p, u, v) in faces {
            let pu = [p[0] + unit[u][0], p[1] + unit[u][1], p[2] + unit[u][2]];
            let pv = [p[0] + unit[v][0], p[1] + unit[v][1], p[2] + unit[v][2]];
            let e1 = edge(p, u);
            let e2 = edge(pu, v);
            let e3 = edge(pv, u);
            let e4 = edge(p, v);
            squares.push([Step::fwd(e1), Step::fwd(e2), Step::bwd(e3), Step::bwd(e4)]);
        }
        let labels = Alphabet::new(vec!["x".into(), "y".into(), "z".into()]).expect("valid names");
        SquareComplex::new(names, labels, edges, squares).expect("valid fixture")
    }
}
