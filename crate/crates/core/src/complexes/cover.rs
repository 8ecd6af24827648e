use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::{presentation_complex, Edge, EdgeEnd, Square, SquareComplex, Step};
use crate::error::{GmkError, Result};
use crate::family::Presentation;
use crate::permrep::CoordinateAction;

/// A cellular map sending each cell to a cell of the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellMap {
    pub vertex: Vec<usize>,
    pub edge: Vec<usize>,
    pub square: Vec<usize>,
}

impl CellMap {
    pub fn identity(x: &SquareComplex) -> Self {
        let [v, e, s] = x.counts();
        CellMap {
            vertex: (0..v).collect(),
            edge: (0..e).collect(),
            square: (0..s).collect(),
        }
    }

    /// Map onto a one-vertex complex by edge label names and square spellings.
    pub fn by_labels(x: &SquareComplex, base: &SquareComplex) -> Result<Self> {
        if base.vertex_count() != 1 {
            return Err(GmkError::Unsupported("label maps need a one-vertex base".into()));
        }
        let base_edge: HashMap<&str, usize> = base
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| (base.label_name(e.label), i))
            .collect();
        let edge = x
            .edges()
            .iter()
            .map(|e| {
                base_edge
                    .get(x.label_name(e.label))
                    .copied()
                    .ok_or(GmkError::UnknownLabel(e.label))
            })
            .collect::<Result<Vec<_>>>()?;
        let spelling = |sq: &Square, emap: &dyn Fn(usize) -> usize| -> [(usize, bool); 4] {
            std::array::from_fn(|c| (emap(sq[c].edge), sq[c].forward))
        };
        let base_square: HashMap<[(usize, bool); 4], usize> = base
            .squares()
            .iter()
            .enumerate()
            .map(|(i, sq)| (spelling(sq, &|e| e), i))
            .collect();
        let square = x
            .squares()
            .iter()
            .enumerate()
            .map(|(i, sq)| {
                base_square
                    .get(&spelling(sq, &|e| edge[e]))
                    .copied()
                    .ok_or_else(|| GmkError::InvalidParameters(format!("square {i} has no image")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CellMap {
            vertex: vec![0; x.vertex_count()],
            edge,
            square,
        })
    }
}

/// The cover whose vertices are the points of the action: an edge `v → v·a`
/// per point and generator, and the lift of every relator at every point.
pub fn cover_from_action(
    pres: &Presentation,
    action: &CoordinateAction,
) -> Result<(SquareComplex, CellMap)> {
    let gens = pres.generator_count();
    if gens != action.generator_count() {
        return Err(GmkError::RankMismatch {
            expected: action.generator_count(),
            got: gens,
        });
    }
    let n = action.point_count();
    for (i, r) in pres.relators.iter().enumerate() {
        if (0..n as u32).any(|p| action.act_word(p, r) != Ok(p)) {
            return Err(GmkError::RelatorFails(i));
        }
    }
    let base = presentation_complex(pres)?;
    let mut inverse = vec![vec![0u32; n]; gens];
    for (g, inv) in inverse.iter_mut().enumerate() {
        for p in 0..n as u32 {
            inv[action.act(p, g) as usize] = p;
        }
    }
    let edge_id = |v: usize, g: usize| v * gens + g;
    let mut edges = Vec::with_capacity(n * gens);
    for v in 0..n {
        for g in 0..gens {
            edges.push(Edge {
                src: v,
                dst: action.act(v as u32, g) as usize,
                label: g,
            });
        }
    }
    let mut squares = Vec::with_capacity(n * pres.relators.len());
    for v in 0..n {
        for r in &pres.relators {
            let mut p = v;
            let sq: Square = std::array::from_fn(|c| {
                let s = r.letters()[c];
                let g = s.index();
                if s.is_inverse() {
                    let q = inverse[g][p] as usize;
                    let step = Step::bwd(edge_id(q, g));
                    p = q;
                    step
                } else {
                    let step = Step::fwd(edge_id(p, g));
                    p = action.act(p as u32, g) as usize;
                    step
                }
            });
            squares.push(sq);
        }
    }
    let names = (0..n as u32).map(|p| action.format_point(p)).collect();
    let cover = SquareComplex::new(names, pres.alphabet.clone(), edges, squares)?;
    let map = CellMap::by_labels(&cover, &base)?;
    Ok((cover, map))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoveringReport {
    pub degree: Option<usize>,
    pub incidence_ok: bool,
    pub label_regular: bool,
    pub square_lifting: bool,
    pub links_isomorphic: bool,
}

impl CoveringReport {
    pub fn ok(&self) -> bool {
        self.degree.is_some()
            && self.incidence_ok
            && self.label_regular
            && self.square_lifting
            && self.links_isomorphic
    }
}

pub fn verify_covering(cover: &SquareComplex, base: &SquareComplex, map: &CellMap) -> CoveringReport {
    let shapes_ok = map.vertex.len() == cover.vertex_count()
        && map.edge.len() == cover.edges().len()
        && map.square.len() == cover.squares().len()
        && map.vertex.iter().all(|&v| v < base.vertex_count())
        && map.edge.iter().all(|&e| e < base.edges().len())
        && map.square.iter().all(|&s| s < base.squares().len());
    if !shapes_ok {
        return CoveringReport {
            degree: None,
            incidence_ok: false,
            label_regular: false,
            square_lifting: false,
            links_isomorphic: false,
        };
    }

    let edges_commute = cover.edges().iter().enumerate().all(|(i, e)| {
        let f = base.edges()[map.edge[i]];
        map.vertex[e.src] == f.src && map.vertex[e.dst] == f.dst
    });
    let squares_commute = cover.squares().iter().enumerate().all(|(i, sq)| {
        let bs = &base.squares()[map.square[i]];
        (0..4).all(|c| map.edge[sq[c].edge] == bs[c].edge && sq[c].forward == bs[c].forward)
    });
    let incidence_ok = edges_commute && squares_commute;

    let mut fibre = vec![0usize; base.vertex_count()];
    for &v in &map.vertex {
        fibre[v] += 1;
    }
    let degree = if fibre.iter().all(|&d| d == fibre[0] && d > 0) {
        Some(fibre[0])
    } else {
        None
    };

    let mut out_count: HashMap<(usize, usize), usize> = HashMap::new();
    let mut in_count: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, e) in cover.edges().iter().enumerate() {
        *out_count.entry((e.src, map.edge[i])).or_default() += 1;
        *in_count.entry((e.dst, map.edge[i])).or_default() += 1;
    }
    let label_regular = (0..cover.vertex_count()).all(|v| {
        base.edges().iter().enumerate().all(|(f, fe)| {
            let want_out = usize::from(fe.src == map.vertex[v]);
            let want_in = usize::from(fe.dst == map.vertex[v]);
            out_count.get(&(v, f)).copied().unwrap_or(0) == want_out
                && in_count.get(&(v, f)).copied().unwrap_or(0) == want_in
        })
    });

    let mut lifts = vec![0usize; base.squares().len()];
    for &s in &map.square {
        lifts[s] += 1;
    }
    let square_lifting = degree.is_some_and(|d| lifts.iter().all(|&c| c == d));

    let base_links = base.links();
    let links_isomorphic = incidence_ok
        && cover.links().iter().all(|l| {
            let bl = &base_links[map.vertex[l.vertex]];
            let mut nodes: Vec<EdgeEnd> = l
                .nodes
                .iter()
                .map(|n| EdgeEnd {
                    edge: map.edge[n.edge],
                    end: n.end,
                })
                .collect();
            nodes.sort();
            let mut arcs: Vec<(usize, usize)> =
                l.arcs.iter().map(|a| (map.square[a.square], a.corner)).collect();
            arcs.sort();
            let mut base_arcs: Vec<(usize, usize)> = bl.arcs.iter().map(|a| (a.square, a.corner)).collect();
            base_arcs.sort();
            nodes == bl.nodes && arcs == base_arcs
        });

    CoveringReport {
        degree,
        incidence_ok,
        label_regular,
        square_lifting,
        links_isomorphic,
    }
}

/// Remove every edge carrying `label` and every square touching one, then keep
/// the connected component of vertex 0.
pub fn delete_generator(x: &SquareComplex, label: usize) -> Result<SquareComplex> {
    if label >= x.labels().rank() {
        return Err(GmkError::UnknownLabel(label));
    }
    let keep_edge: Vec<bool> = x.edges().iter().map(|e| e.label != label).collect();
    let mut adj = vec![Vec::new(); x.vertex_count()];
    for (i, e) in x.edges().iter().enumerate() {
        if keep_edge[i] {
            adj[e.src].push(e.dst);
            adj[e.dst].push(e.src);
        }
    }
    let mut new_vertex = vec![usize::MAX; x.vertex_count()];
    let mut names = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    new_vertex[0] = 0;
    let mut order = vec![0usize];
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if new_vertex[w] == usize::MAX {
                new_vertex[w] = 0;
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    order.sort_unstable();
    for (i, &v) in order.iter().enumerate() {
        new_vertex[v] = i;
        names.push(x.vertex_name(v).to_string());
    }
    let mut new_edge = vec![usize::MAX; x.edges().len()];
    let mut edges = Vec::new();
    for (i, e) in x.edges().iter().enumerate() {
        if keep_edge[i] && new_vertex[e.src] != usize::MAX {
            new_edge[i] = edges.len();
            edges.push(Edge {
                src: new_vertex[e.src],
                dst: new_vertex[e.dst],
                label: e.label,
            });
        }
    }
    let squares = x
        .squares()
        .iter()
        .filter(|sq| sq.iter().all(|s| new_edge[s.edge] != usize::MAX))
        .map(|sq| {
            std::array::from_fn(|c| Step {
                edge: new_edge[sq[c].edge],
                forward: sq[c].forward,
            })
        })
        .collect();
    SquareComplex::new(names, x.labels().clone(), edges, squares)
}

/// Copy of `x` without square `q` (used to build broken covers in tests).
pub fn without_square(x: &SquareComplex, q: usize) -> SquareComplex {
    let mut squares = x.squares().to_vec();
    squares.remove(q);
    SquareComplex::new(
        (0..x.vertex_count()).map(|v| x.vertex_name(v).to_string()).collect(),
        x.labels().clone(),
        x.edges().to_vec(),
        squares,
    )
    .expect("removing a square keeps the complex valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::check_npc;
    use crate::family::presentation;
    use crate::permrep::build_action;

    fn cover(m: usize) -> (SquareComplex, CellMap, SquareComplex) {
        let pres = presentation(m, m).unwrap();
        let (c, map) = cover_from_action(&pres, &build_action(m).unwrap()).unwrap();
        (c, map, presentation_complex(&pres).unwrap())
    }

    #[test]
    fn cover_counts() {
        assert_eq!(cover(2).0.counts(), [32, 160, 128]);
        assert_eq!(cover(1).0.counts(), [8, 24, 16]);
    }

    #[test]
    fn one_edge_per_label_each_way() {
        let (c, _, _) = cover(2);
        for v in 0..c.vertex_count() {
            for l in 0..5 {
                assert_eq!(c.edges().iter().filter(|e| e.src == v && e.label == l).count(), 1);
                assert_eq!(c.edges().iter().filter(|e| e.dst == v && e.label == l).count(), 1);
            }
        }
    }

    #[test]
    fn covering_verified() {
        for m in [1, 2] {
            let (c, map, base) = cover(m);
            let r = verify_covering(&c, &base, &map);
            assert!(r.ok(), "{r:?}");
            assert_eq!(r.degree, Some(1 << (2 * m + 1)));
            assert!(check_npc(&c).ok);
        }
    }

    #[test]
    fn identity_is_degree_one_cover() {
        let base = presentation_complex(&presentation(2, 2).unwrap()).unwrap();
        let r = verify_covering(&base, &base, &CellMap::identity(&base));
        assert!(r.ok());
        assert_eq!(r.degree, Some(1));
    }

    #[test]
    fn missing_square_breaks_lifting() {
        let (c, _, base) = cover(2);
        let broken = without_square(&c, 17);
        let map = CellMap::by_labels(&broken, &base).unwrap();
        let r = verify_covering(&broken, &base, &map);
        assert!(!r.square_lifting);
        assert!(!r.links_isomorphic);
        assert!(!r.ok());
    }

    #[test]
    fn failing_action_rejected() {
        let mut pres = presentation(2, 2).unwrap();
        pres.relators.push(pres.alphabet.parse("a4 a1 a4^-1 a2^-1").unwrap());
        assert_eq!(
            cover_from_action(&pres, &build_action(2).unwrap()).unwrap_err(),
            GmkError::RelatorFails(4)
        );
    }

    #[test]
    fn deletion_covers_smaller_complex() {
        for m in [1, 2] {
            let (c, _, _) = cover(m);
            let d = delete_generator(&c, 2 * m).unwrap();
            let base = presentation_complex(&presentation(m, m - 1).unwrap()).unwrap();
            let map = CellMap::by_labels(&d, &base).unwrap();
            let r = verify_covering(&d, &base, &map);
            assert!(r.ok(), "m={m}: {r:?}");
            assert!(d.edges().iter().all(|e| e.label != 2 * m));
        }
        assert_eq!(delete_generator(&cover(1).0, 3).unwrap_err(), GmkError::UnknownLabel(3));
    }

    #[test]
    fn deleting_unused_label_keeps_squares() {
        // A torus with an extra loop that no square uses.
        let mut pres = presentation(1, 0).unwrap();
        pres.alphabet = crate::words::Alphabet::indexed("a", 3);
        pres.relators = pres.relators.iter().map(|r| r.widen(3)).collect();
        let x = presentation_complex(&pres).unwrap();
        let d = delete_generator(&x, 2).unwrap();
        assert_eq!(d.counts(), [1, 2, 1]);
        assert_eq!(d.squares(), x.squares());
    }
}
