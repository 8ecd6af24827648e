use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use super::{Edge, SquareComplex};
use crate::error::{GmkError, Result};

/// A directed 1-cell of the torus `(C_2)^n`: factor edge `e_alpha` in
/// coordinate `position` (1-based), other coordinates fixed by `rest`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TorusEdge {
    pub position: usize,
    pub alpha: u8,
    /// The source point with bit `position` cleared.
    pub rest: u32,
}

impl TorusEdge {
    pub fn format(&self, dim: usize) -> String {
        let coords: Vec<String> = (1..=dim)
            .map(|i| {
                if i == self.position {
                    "·".to_string()
                } else {
                    ((self.rest >> (i - 1)) & 1).to_string()
                }
            })
            .collect();
        format!("e{} at ({})", self.alpha, coords.join(","))
    }
}

impl fmt::Display for TorusEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}[{}]/{:b}", self.alpha, self.position, self.rest)
    }
}

/// The torus edge under an edge whose endpoints (as points) differ in one coordinate.
/// `e_0` runs from 0 to 1 and `e_1` from 1 to 0.
pub fn torus_edge(e: &Edge) -> Option<TorusEdge> {
    let diff = (e.src ^ e.dst) as u32;
    if diff.count_ones() != 1 {
        return None;
    }
    let position = diff.trailing_zeros() as usize + 1;
    Some(TorusEdge {
        position,
        alpha: u8::from(e.src as u32 & diff != 0),
        rest: e.src as u32 & !diff,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusReport {
    pub dim: usize,
    pub vertices_injective: bool,
    pub edges_single_coordinate: bool,
    pub edges_injective: bool,
    pub squares_injective: bool,
    pub opposite_sides_same_position: bool,
    pub positions_distinct: bool,
    pub opposite_sides_same_factor_edge: bool,
}

impl TorusReport {
    pub fn ok(&self) -> bool {
        self.vertices_injective
            && self.edges_single_coordinate
            && self.edges_injective
            && self.squares_injective
            && self.opposite_sides_same_position
            && self.positions_distinct
            && self.opposite_sides_same_factor_edge
    }
}

/// Check that the cover built from `build_action(m)` sits cellularly inside
/// the 2-skeleton of the `(2m+1)`-torus. Vertex `p` is the point `p`.
pub fn torus_embedding(cover: &SquareComplex, m: usize) -> Result<TorusReport> {
    let dim = 2 * m + 1;
    if !(1..=7).contains(&m) || cover.vertex_count() != 1 << dim {
        return Err(GmkError::InvalidParameters(format!(
            "expected {} vertices for m={m}",
            1u64 << dim.min(63)
        )));
    }
    let vertices_injective = (0..cover.vertex_count())
        .map(|v| cover.vertex_name(v))
        .collect::<HashSet<_>>()
        .len()
        == cover.vertex_count();
    let images: Vec<Option<TorusEdge>> = cover.edges().iter().map(torus_edge).collect();
    let edges_single_coordinate = images.iter().all(Option::is_some);
    let edges_injective =
        edges_single_coordinate && images.iter().collect::<HashSet<_>>().len() == images.len();

    let mut same_position = true;
    let mut distinct = true;
    let mut same_factor = true;
    let mut cells = HashSet::new();
    if edges_single_coordinate {
        for sq in cover.squares() {
            let side = |c: usize| images[sq[c].edge].expect("checked");
            let (s0, s1, s2, s3) = (side(0), side(1), side(2), side(3));
            same_position &= s0.position == s2.position && s1.position == s3.position;
            distinct &= s0.position != s1.position;
            same_factor &= s0.alpha == s2.alpha && s1.alpha == s3.alpha;
            let (a, b) = if s0.position < s1.position { (s0, s1) } else { (s1, s0) };
            let rest = a.rest & b.rest;
            cells.insert((a.position, a.alpha, b.position, b.alpha, rest));
        }
    }
    let squares_injective = edges_single_coordinate && cells.len() == cover.squares().len();
    Ok(TorusReport {
        dim,
        vertices_injective,
        edges_single_coordinate,
        edges_injective,
        squares_injective,
        opposite_sides_same_position: edges_single_coordinate && same_position,
        positions_distinct: edges_single_coordinate && distinct,
        opposite_sides_same_factor_edge: edges_single_coordinate && same_factor,
    })
}
