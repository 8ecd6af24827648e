//! The right action of `G_{m,m}` on `{0,1}^{2m+1}`.
//!
//! Points are integers; coordinate `i` (1-based) is bit `i-1`. The action is
//! built slice by slice: `a_1..a_{m+1}` flip their own coordinate on
//! `H_{m+1}`, and stage `k` adds `a_{m+k+1}` while transporting every earlier
//! generator onto the new half `H*_{m+k}` through the coordinate swap
//! `(k, m+k)` and the flip of coordinate `m+k+1`.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{GmkError, Result};
use crate::family::Presentation;
use crate::words::Word;

const UNSET: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateAction {
    m: usize,
    /// `tables[g][p]` is the image of point `p` under generator `a_{g+1}`.
    tables: Vec<Vec<u32>>,
}

fn flip(p: u32, coord: usize) -> u32 {
    p ^ (1 << (coord - 1))
}

fn swap(p: u32, a: usize, b: usize) -> u32 {
    let (ba, bb) = ((p >> (a - 1)) & 1, (p >> (b - 1)) & 1);
    if ba != bb {
        p ^ ((1 << (a - 1)) | (1 << (b - 1)))
    } else {
        p
    }
}

pub fn build_action(m: usize) -> Result<CoordinateAction> {
    if !(1..=7).contains(&m) {
        return Err(GmkError::InvalidParameters(format!("m must be in 1..=7, got {m}")));
    }
    let dim = 2 * m + 1;
    let size = 1usize << dim;
    let mut tables = vec![vec![UNSET; size]; dim];
    for (g, table) in tables.iter_mut().enumerate().take(m + 1) {
        for p in 0..1u32 << (m + 1) {
            table[p as usize] = flip(p, g + 1);
        }
    }
    for k in 1..=m {
        let n = m + k;
        let new = n + 1;
        for p in 0..1u32 << new {
            tables[new - 1][p as usize] = flip(p, new);
        }
        let high = 1u32 << n;
        for table in tables.iter_mut().take(n) {
            for p in 0..high {
                let q = p | high;
                let x = swap(flip(q, new), k, n);
                let y = table[x as usize];
                table[q as usize] = flip(swap(y, k, n), new);
            }
        }
    }
    debug_assert!(tables.iter().all(|t| t.iter().all(|&x| x != UNSET)));
    Ok(CoordinateAction { m, tables })
}

impl CoordinateAction {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        2 * self.m + 1
    }

    pub fn point_count(&self) -> usize {
        1 << self.dim()
    }

    pub fn generator_count(&self) -> usize {
        self.tables.len()
    }

    pub fn table(&self, g: usize) -> &[u32] {
        &self.tables[g]
    }

    /// Image of `p` under the single letter `a_{g+1}^{±1}`; generators are involutions.
    pub fn act(&self, p: u32, g: usize) -> u32 {
        self.tables[g][p as usize]
    }

    /// `p · w`, letters applied left to right.
    pub fn act_word(&self, p: u32, w: &Word) -> Result<u32> {
        if w.rank() != self.generator_count() {
            return Err(GmkError::RankMismatch {
                expected: self.generator_count(),
                got: w.rank(),
            });
        }
        Ok(w.letters().iter().fold(p, |q, s| self.act(q, s.index())))
    }

    /// Coordinates `x_1 x_2 … x_N` as a bit string.
    pub fn format_point(&self, p: u32) -> String {
        (0..self.dim())
            .map(|i| if (p >> i) & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn parse_point(&self, s: &str) -> Result<u32> {
        if s.len() != self.dim() || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(GmkError::Parse(format!("expected {} bits, got {s:?}", self.dim())));
        }
        Ok(s.bytes()
            .enumerate()
            .fold(0, |acc, (i, b)| acc | (((b - b'0') as u32) << i)))
    }

    /// Disjoint-cycle notation for a generator, cycles ordered by smallest point.
    pub fn cycle_notation(&self, g: usize) -> String {
        let t = &self.tables[g];
        let mut seen = vec![false; t.len()];
        let mut out = String::new();
        for start in 0..t.len() {
            if seen[start] || t[start] as usize == start {
                seen[start] = true;
                continue;
            }
            let mut cyc = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cyc.push(self.format_point(p as u32));
                p = t[p] as usize;
            }
            out.push('(');
            out.push_str(&cyc.join(" "));
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }

    fn orbit_size(&self, gens: usize, start: u32) -> usize {
        let mut seen = vec![false; self.point_count()];
        let mut queue = VecDeque::from([start]);
        seen[start as usize] = true;
        let mut count = 1;
        while let Some(p) = queue.pop_front() {
            for g in 0..gens {
                let q = self.act(p, g) as usize;
                if !seen[q] {
                    seen[q] = true;
                    count += 1;
                    queue.push_back(q as u32);
                }
            }
        }
        count
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActionReport {
    pub points: usize,
    pub relators_ok: bool,
    pub transitive: bool,
    pub involutions_ok: bool,
    pub fixed_point_free: bool,
    pub single_coordinate_moves: bool,
    pub pairwise_products_fixed_point_free: bool,
    /// Entry `k`: `⟨a_1..a_{m+k+1}⟩` acts transitively on `H_{m+k+1}`.
    pub staged_transitivity: Vec<bool>,
    /// Entry `k-1`: `a_j` is the coordinate-`j` flip on `H_{m+k}` for `j = k..m`.
    pub staged_flip_property: Vec<bool>,
}

impl ActionReport {
    pub fn all_ok(&self) -> bool {
        self.relators_ok
            && self.transitive
            && self.involutions_ok
            && self.fixed_point_free
            && self.single_coordinate_moves
            && self.pairwise_products_fixed_point_free
            && self.staged_transitivity.iter().all(|&b| b)
            && self.staged_flip_property.iter().all(|&b| b)
    }
}

pub fn verify_action(action: &CoordinateAction, pres: &Presentation) -> Result<ActionReport> {
    let m = action.m();
    let n = action.point_count();
    let gens = action.generator_count();
    if pres.generator_count() != gens {
        return Err(GmkError::RankMismatch {
            expected: gens,
            got: pres.generator_count(),
        });
    }
    let points = 0..n as u32;
    let relators_ok = pres
        .relators
        .iter()
        .all(|r| points.clone().all(|p| action.act_word(p, r) == Ok(p)));
    let involutions_ok = (0..gens).all(|g| points.clone().all(|p| action.act(action.act(p, g), g) == p));
    let fixed_point_free = (0..gens).all(|g| points.clone().all(|p| action.act(p, g) != p));
    let single_coordinate_moves =
        (0..gens).all(|g| points.clone().all(|p| (action.act(p, g) ^ p).count_ones() == 1));
    let pairwise_products_fixed_point_free = (0..gens).all(|i| {
        (0..gens)
            .filter(|&j| j != i)
            .all(|j| points.clone().all(|p| action.act(action.act(p, i), j) != p))
    });
    let transitive = action.orbit_size(gens, 0) == n;
    let staged_transitivity = (0..=m)
        .map(|k| {
            let slice = 1usize << (m + k + 1);
            action.orbit_size(m + k + 1, 0) == slice
        })
        .collect();
    let staged_flip_property = (1..=m)
        .map(|k| {
            (k..=m).all(|j| (0..1u32 << (m + k)).all(|p| action.act(p, j - 1) == flip(p, j)))
        })
        .collect();
    Ok(ActionReport {
        points: n,
        relators_ok,
        transitive,
        involutions_ok,
        fixed_point_free,
        single_coordinate_moves,
        pairwise_products_fixed_point_free,
        staged_transitivity,
        staged_flip_property,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::presentation;
    use proptest::prelude::*;

    #[test]
    fn base_flips() {
        let a = build_action(2).unwrap();
        let p = a.parse_point("00000").unwrap();
        assert_eq!(a.format_point(a.act(p, 0)), "10000");
        for p in 0..32 {
            assert_eq!(a.act(p, 4), flip(p, 5));
        }
    }

    #[test]
    fn twisted_extension_example() {
        let a = build_action(2).unwrap();
        let p = a.parse_point("00010").unwrap();
        assert_eq!(a.format_point(a.act(p, 0)), "00110");
    }

    #[test]
    fn later_stage_generator_is_not_a_global_flip() {
        // a_4 is introduced at stage 1 as the coordinate-4 flip on H_4, and the
        // stage-2 transport turns it into the coordinate-2 flip on H*_4.
        let a = build_action(2).unwrap();
        let p = a.parse_point("00001").unwrap();
        assert_eq!(a.format_point(a.act(p, 3)), "01001");
        for p in 0..16 {
            assert_eq!(a.act(p, 3), flip(p, 4));
        }
    }

    #[test]
    fn words_act_on_the_right() {
        let a = build_action(2).unwrap();
        let w = presentation(2, 2).unwrap();
        assert_eq!(a.act_word(7, &Word::identity(5)).unwrap(), 7);
        assert_eq!(a.act_word(0, &w.alphabet.parse("a1 a1").unwrap()).unwrap(), 0);
        assert!(a.act_word(0, &Word::identity(4)).is_err());
    }

    #[test]
    fn verification_passes() {
        for m in 1..=5 {
            let a = build_action(m).unwrap();
            let r = verify_action(&a, &presentation(m, m).unwrap()).unwrap();
            assert_eq!(r.points, 1 << (2 * m + 1));
            assert!(r.all_ok(), "m={m}: {r:?}");
            assert_eq!(r.staged_transitivity.len(), m + 1);
            assert_eq!(r.staged_flip_property.len(), m);
        }
    }

    #[test]
    fn relator_failure_detected() {
        // A relation that fails in G_{2,2} must be caught.
        let a = build_action(2).unwrap();
        let mut pres = presentation(2, 2).unwrap();
        pres.relators.push(pres.alphabet.parse("a4 a1 a4^-1 a2^-1").unwrap());
        assert!(!verify_action(&a, &pres).unwrap().relators_ok);
    }

    #[test]
    fn cycle_notation_of_flip() {
        let a = build_action(1).unwrap();
        // On the x3 = 1 half a1 is transported to the coordinate-2 flip.
        assert_eq!(a.cycle_notation(0), "(000 100)(010 110)(001 011)(101 111)");
    }

    #[test]
    fn point_round_trip() {
        let a = build_action(3).unwrap();
        for p in 0..128 {
            assert_eq!(a.parse_point(&a.format_point(p)).unwrap(), p);
        }
        assert!(a.parse_point("0101").is_err());
    }

    proptest! {
        #[test]
        fn opposite_group_law(u in prop::collection::vec((0usize..5, any::<bool>()), 0..12),
                              v in prop::collection::vec((0usize..5, any::<bool>()), 0..12),
                              p in 0u32..32) {
            use crate::words::GenSymbol;
            let a = build_action(2).unwrap();
            let mk = |x: &Vec<(usize, bool)>| Word::reduce(5, x.iter().map(|&(i, inv)| GenSymbol::new(i, inv))).unwrap();
            let (u, v) = (mk(&u), mk(&v));
            let lhs = a.act_word(p, &u.mul(&v)).unwrap();
            let rhs = a.act_word(a.act_word(p, &u).unwrap(), &v).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
