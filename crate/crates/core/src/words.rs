//! Free group words over a ranked alphabet.
//!
//! A [`Word`] is always freely reduced. Letters are [`GenSymbol`]s packed into
//! a `u32` (generator index in the high bits, inverse flag in bit 0), so a word
//! is a flat `Vec<u32>` in disguise and reduction is a single stack pass.

use std::fmt;

use crate::error::{GmkError, Result};

/// A generator or its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenSymbol(u32);

impl GenSymbol {
    pub fn new(index: usize, inverse: bool) -> Self {
        GenSymbol(((index as u32) << 1) | inverse as u32)
    }

    pub fn pos(index: usize) -> Self {
        Self::new(index, false)
    }

    pub fn neg(index: usize) -> Self {
        Self::new(index, true)
    }

    pub fn index(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    /// +1 or -1.
    pub fn sign(self) -> i64 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Self {
        GenSymbol(self.0 ^ 1)
    }
}

impl fmt::Debug for GenSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "x{}^-1", self.index())
        } else {
            write!(f, "x{}", self.index())
        }
    }
}

/// A freely reduced word in the free group of a given rank.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    rank: usize,
    letters: Vec<GenSymbol>,
}

impl Word {
    pub fn identity(rank: usize) -> Self {
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    pub fn generator(rank: usize, index: usize) -> Self {
        assert!(index < rank, "generator {index} out of rank {rank}");
        Word {
            rank,
            letters: vec![GenSymbol::pos(index)],
        }
    }

    /// Freely reduce an arbitrary symbol sequence.
    pub fn reduce(rank: usize, raw: impl IntoIterator<Item = GenSymbol>) -> Result<Self> {
        let mut w = Word::identity(rank);
        for s in raw {
            if s.index() >= rank {
                return Err(GmkError::SymbolOutOfRange {
                    index: s.index(),
                    rank,
                });
            }
            w.push(s);
        }
        Ok(w)
    }

    /// Build from `(index, exponent)` pairs, e.g. `[(0, 2), (3, -1)]` for `x0^2 x3^-1`.
    pub fn from_powers(rank: usize, powers: &[(usize, i64)]) -> Self {
        let mut w = Word::identity(rank);
        for &(i, e) in powers {
            assert!(i < rank, "generator {i} out of rank {rank}");
            let s = GenSymbol::new(i, e < 0);
            for _ in 0..e.unsigned_abs() {
                w.push(s);
            }
        }
        w
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[GenSymbol] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Append one letter, cancelling against the last letter if possible.
    #[inline]
    pub fn push(&mut self, s: GenSymbol) {
        debug_assert!(s.index() < self.rank);
        if self.letters.last() == Some(&s.inverse()) {
            self.letters.pop();
        } else {
            self.letters.push(s);
        }
    }

    /// Append a reduced word in place.
    pub fn push_word(&mut self, other: &Word) {
        debug_assert_eq!(self.rank, other.rank);
        for &s in &other.letters {
            self.push(s);
        }
    }

    /// Append the inverse of a reduced word in place.
    pub fn push_inverse(&mut self, other: &Word) {
        debug_assert_eq!(self.rank, other.rank);
        for &s in other.letters.iter().rev() {
            self.push(s.inverse());
        }
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.push_word(other);
        w
    }

    pub fn invert(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|s| s.inverse()).collect(),
        }
    }

    pub fn pow(&self, p: i64) -> Word {
        let base = if p < 0 { self.invert() } else { self.clone() };
        let mut w = Word::identity(self.rank);
        for _ in 0..p.unsigned_abs() {
            w.push_word(&base);
        }
        w
    }

    /// Commutator `[a, b] = a b a^-1 b^-1`, reduced.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        let mut w = a.clone();
        w.push_word(b);
        w.push_inverse(a);
        w.push_inverse(b);
        w
    }

    /// Split `w = c · core · c^-1` with `core` cyclically reduced.
    pub fn cyclically_reduce(&self) -> (Word, Word) {
        let l = &self.letters;
        let mut i = 0;
        while i < l.len() / 2 && l[i] == l[l.len() - 1 - i].inverse() {
            i += 1;
        }
        let conjugator = Word {
            rank: self.rank,
            letters: l[..i].to_vec(),
        };
        let core = Word {
            rank: self.rank,
            letters: l[i..l.len() - i].to_vec(),
        };
        (core, conjugator)
    }

    /// Exponent sum of every generator.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0; self.rank];
        for s in &self.letters {
            sums[s.index()] += s.sign();
        }
        sums
    }

    /// Reinterpret the word in a larger alphabet that extends this one.
    pub fn widen(&self, rank: usize) -> Word {
        assert!(rank >= self.rank);
        Word {
            rank,
            letters: self.letters.clone(),
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.letters)
    }
}

/// Display names for the generators of an alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new(names: Vec<String>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            if n.is_empty() || n.contains(char::is_whitespace) || n.contains('^') {
                return Err(GmkError::InvalidName(n.clone()));
            }
            if !seen.insert(n.as_str()) {
                return Err(GmkError::InvalidName(n.clone()));
            }
        }
        Ok(Alphabet { names })
    }

    /// `A1..Am, B1..Bk`.
    pub fn free_basis(m: usize, k: usize) -> Self {
        let names = (1..=m)
            .map(|i| format!("A{i}"))
            .chain((1..=k).map(|j| format!("B{j}")))
            .collect();
        Alphabet { names }
    }

    /// `prefix1..prefixN`.
    pub fn indexed(prefix: &str, n: usize) -> Self {
        Alphabet {
            names: (1..=n).map(|i| format!("{prefix}{i}")).collect(),
        }
    }

    /// `A1..Am, B1..Bk, s, t`.
    pub fn doubled(m: usize, k: usize) -> Self {
        let mut a = Self::free_basis(m, k);
        a.names.push("s".into());
        a.names.push("t".into());
        a
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Parse whitespace-separated letters such as `A1 B2^-1 A2^3`.
    /// The single token `1` denotes the identity.
    pub fn parse(&self, text: &str) -> Result<Word> {
        let mut w = Word::identity(self.rank());
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e
                        .parse()
                        .map_err(|_| GmkError::Parse(format!("bad exponent in {tok:?}")))?;
                    (n, e)
                }
                None => (tok, 1),
            };
            let idx = self
                .index_of(name)
                .ok_or_else(|| GmkError::Parse(format!("unknown generator {name:?}")))?;
            let s = GenSymbol::new(idx, exp < 0);
            for _ in 0..exp.unsigned_abs() {
                w.push(s);
            }
        }
        Ok(w)
    }

    /// Render with runs collapsed into powers; the identity renders as `1`.
    pub fn format(&self, w: &Word) -> String {
        assert_eq!(w.rank(), self.rank(), "alphabet/word rank mismatch");
        if w.is_empty() {
            return "1".into();
        }
        let mut out = Vec::new();
        let l = w.letters();
        let mut i = 0;
        while i < l.len() {
            let mut j = i;
            while j < l.len() && l[j] == l[i] {
                j += 1;
            }
            let e = (j - i) as i64 * l[i].sign();
            let name = &self.names[l[i].index()];
            out.push(if e == 1 {
                name.clone()
            } else {
                format!("{name}^{e}")
            });
            i = j;
        }
        out.join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ab() -> Alphabet {
        Alphabet::free_basis(2, 2)
    }

    fn p(s: &str) -> Word {
        ab().parse(s).unwrap()
    }

    #[test]
    fn cancels_inverse_pair() {
        let w = Word::reduce(4, [GenSymbol::pos(0), GenSymbol::neg(0)]).unwrap();
        assert!(w.is_empty());
    }

    #[test]
    fn cancels_inner_pair() {
        let raw = [
            GenSymbol::pos(0),
            GenSymbol::pos(1),
            GenSymbol::neg(1),
            GenSymbol::pos(0),
        ];
        assert_eq!(Word::reduce(4, raw).unwrap(), p("A1^2"));
    }

    #[test]
    fn hand_reduced_concatenation() {
        // A1 · (A1 A2 Ā1) · (A1 A2 B1) · (A1 A2 B1 B2 Ā1) · Ā1, cancelled by hand.
        let mut raw = Vec::new();
        for piece in ["A1", "A1 A2 A1^-1", "A1 A2 B1", "A1 A2 B1 B2 A1^-1", "A1^-1"] {
            raw.extend_from_slice(p(piece).letters());
        }
        let w = Word::reduce(4, raw).unwrap();
        assert_eq!(w.len(), 11);
        assert_eq!(ab().format(&w), "A1^2 A2^2 B1 A1 A2 B1 B2 A1^-2");
    }

    #[test]
    fn out_of_range_symbol_rejected() {
        let err = Word::reduce(2, [GenSymbol::pos(2)]).unwrap_err();
        assert!(matches!(err, GmkError::SymbolOutOfRange { index: 2, rank: 2 }));
    }

    #[test]
    fn invert_examples() {
        assert!(Word::identity(4).invert().is_empty());
        assert_eq!(p("A1 A2").invert(), p("A2^-1 A1^-1"));
        assert_eq!(p("A1 A2 B1 B2 A1^-1").invert(), p("A1 B2^-1 B1^-1 A2^-1 A1^-1"));
    }

    #[test]
    fn cyclic_reduction_examples() {
        let (core, c) = p("A1 A2 A1^-1").cyclically_reduce();
        assert_eq!((core, c), (p("A2"), p("A1")));
        let (core, c) = p("A1 A2").cyclically_reduce();
        assert_eq!((core, c), (p("A1 A2"), Word::identity(4)));
        let ab3 = Alphabet::free_basis(3, 0);
        let w = ab3.parse("A1 A2 A3 A2^-1 A1^-1").unwrap();
        let (core, c) = w.cyclically_reduce();
        assert_eq!(ab3.format(&core), "A3");
        assert_eq!(ab3.format(&c), "A1 A2");
    }

    #[test]
    fn parse_and_format_round_trip() {
        let w = p("A1^2 A2^-3 B1 B2^-1");
        assert_eq!(ab().format(&w), "A1^2 A2^-3 B1 B2^-1");
        assert_eq!(ab().format(&p("1")), "1");
        assert!(ab().parse("C7").is_err());
        assert!(ab().parse("A1^x").is_err());
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(Alphabet::new(vec!["a".into(), "a".into()]).is_err());
    }

    fn raw_symbols(rank: usize, max_len: usize) -> impl Strategy<Value = Vec<GenSymbol>> {
        prop::collection::vec(
            (0..rank, any::<bool>()).prop_map(|(i, inv)| GenSymbol::new(i, inv)),
            0..max_len,
        )
    }

    fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
        raw_symbols(rank, max_len).prop_map(move |r| Word::reduce(rank, r).unwrap())
    }

    /// Independent reduction oracle: repeatedly delete the first cancelling pair.
    fn naive_reduce(mut v: Vec<GenSymbol>) -> Vec<GenSymbol> {
        loop {
            match (1..v.len()).find(|&i| v[i] == v[i - 1].inverse()) {
                Some(i) => {
                    v.drain(i - 1..=i);
                }
                None => return v,
            }
        }
    }

    proptest! {
        #[test]
        fn reduction_matches_naive_oracle(raw in raw_symbols(3, 30)) {
            let w = Word::reduce(3, raw.clone()).unwrap();
            let expected = naive_reduce(raw.clone());
            prop_assert_eq!(w.letters(), expected.as_slice());
            prop_assert!(w.len() <= raw.len());
        }

        #[test]
        fn reduce_is_idempotent(raw in raw_symbols(3, 30)) {
            let w = Word::reduce(3, raw).unwrap();
            let again = Word::reduce(3, w.letters().iter().copied()).unwrap();
            prop_assert_eq!(w, again);
        }

        #[test]
        fn triangle_inequality(u in word(3, 12), v in word(3, 12)) {
            prop_assert!(u.mul(&v).len() <= u.len() + v.len());
        }

        #[test]
        fn inverse_cancels(w in word(4, 20)) {
            prop_assert_eq!(w.invert().invert(), w.clone());
            prop_assert!(w.mul(&w.invert()).is_empty());
        }

        #[test]
        fn cyclic_reduction_recomposes(w in word(3, 20)) {
            let (core, c) = w.cyclically_reduce();
            prop_assert_eq!(c.mul(&core).mul(&c.invert()), w.clone());
            prop_assert_eq!(w.len(), 2 * c.len() + core.len());
            if core.len() > 1 {
                prop_assert_ne!(core.letters()[0], core.letters()[core.len() - 1].inverse());
            }
        }

        #[test]
        fn power_length_law(w in word(3, 16), p in 1i64..6) {
            let (core, c) = w.cyclically_reduce();
            prop_assert_eq!(w.pow(p).len(), 2 * c.len() + p as usize * core.len());
        }

        #[test]
        fn text_round_trip(w in word(4, 20)) {
            prop_assert_eq!(ab().parse(&ab().format(&w)).unwrap(), w);
        }
    }
}
