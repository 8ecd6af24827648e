//! The groups `G_{m,k}`: presentations, the monodromy automorphism and
//! generic endomorphisms of free groups.

use crate::error::{GmkError, Result};
use crate::words::{Alphabet, GenSymbol, Word};

/// A finite presentation: generator names plus relator words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub alphabet: Alphabet,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn generator_count(&self) -> usize {
        self.alphabet.rank()
    }
}

pub(crate) fn check_mk(m: usize, k: usize, k_min: usize) -> Result<()> {
    if m < 1 || k > m || k < k_min {
        return Err(GmkError::InvalidParameters(format!(
            "need 1 <= m and {k_min} <= k <= m, got m={m}, k={k}"
        )));
    }
    Ok(())
}

/// Presentation of `G_{m,k}` on `a1..a_{m+k+1}`: commutators `[a_i, a_{i+1}]`
/// for `i <= m` and conjugations `a_{m+j+1}^-1 a_j a_{m+j+1} a_{m+j}^-1` for `j <= k`.
pub fn presentation(m: usize, k: usize) -> Result<Presentation> {
    check_mk(m, k, 0)?;
    let n = m + k + 1;
    let alphabet = Alphabet::indexed("a", n);
    let mut relators = Vec::with_capacity(m + k);
    for i in 0..m {
        relators.push(Word::commutator(
            &Word::generator(n, i),
            &Word::generator(n, i + 1),
        ));
    }
    for j in 0..k {
        let conj = m + j + 1;
        relators.push(Word::from_powers(n, &[(conj, -1), (j, 1), (conj, 1), (m + j, -1)]));
    }
    Ok(Presentation { alphabet, relators })
}

/// An endomorphism of a free group given by generator images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endomorphism {
    rank: usize,
    images: Vec<Word>,
    inverse_images: Option<Vec<Word>>,
}

impl Endomorphism {
    pub fn new(images: Vec<Word>, inverse_images: Option<Vec<Word>>) -> Result<Self> {
        let rank = images.len();
        for w in images.iter().chain(inverse_images.iter().flatten()) {
            if w.rank() != rank {
                return Err(GmkError::RankMismatch {
                    expected: rank,
                    got: w.rank(),
                });
            }
        }
        if let Some(inv) = &inverse_images {
            if inv.len() != rank {
                return Err(GmkError::RankMismatch {
                    expected: rank,
                    got: inv.len(),
                });
            }
        }
        Ok(Endomorphism {
            rank,
            images,
            inverse_images,
        })
    }

    pub fn identity(rank: usize) -> Self {
        let images: Vec<Word> = (0..rank).map(|i| Word::generator(rank, i)).collect();
        Endomorphism {
            rank,
            inverse_images: Some(images.clone()),
            images,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, index: usize) -> &Word {
        &self.images[index]
    }

    pub fn inverse_images(&self) -> Option<&[Word]> {
        self.inverse_images.as_deref()
    }

    /// The declared inverse, if any.
    pub fn inverse(&self) -> Option<Endomorphism> {
        self.inverse_images.as_ref().map(|inv| Endomorphism {
            rank: self.rank,
            images: inv.clone(),
            inverse_images: Some(self.images.clone()),
        })
    }

    /// True when the declared inverse composes to the identity on both sides.
    pub fn verify_inverse(&self) -> bool {
        let Some(inv) = self.inverse() else {
            return false;
        };
        (0..self.rank).all(|x| {
            let g = Word::generator(self.rank, x);
            self.apply_unchecked(&inv.apply_unchecked(&g)) == g
                && inv.apply_unchecked(&self.apply_unchecked(&g)) == g
        })
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        if w.rank() != self.rank {
            return Err(GmkError::RankMismatch {
                expected: self.rank,
                got: w.rank(),
            });
        }
        Ok(self.apply_unchecked(w))
    }

    pub(crate) fn apply_unchecked(&self, w: &Word) -> Word {
        let mut out = Word::identity(self.rank);
        self.apply_into(w.letters(), &mut out);
        out
    }

    /// Push the image of `letters` onto `out`, reducing as it goes.
    pub(crate) fn apply_into(&self, letters: &[GenSymbol], out: &mut Word) {
        for &s in letters {
            let img = &self.images[s.index()];
            if s.is_inverse() {
                out.push_inverse(img);
            } else {
                out.push_word(img);
            }
        }
    }

    /// `e^n(w)`, reducing after every application.
    pub fn iterate(&self, w: &Word, n: usize) -> Result<Word> {
        let mut cur = w.clone();
        for _ in 0..n {
            cur = self.apply(&cur)?;
        }
        Ok(cur)
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism> {
        if self.rank != other.rank {
            return Err(GmkError::RankMismatch {
                expected: self.rank,
                got: other.rank,
            });
        }
        let images = other
            .images
            .iter()
            .map(|w| self.apply_unchecked(w))
            .collect();
        let inverse_images = match (self.inverse(), other.inverse()) {
            (Some(si), Some(oi)) => Some(
                si.images
                    .iter()
                    .map(|w| oi.apply_unchecked(w))
                    .collect(),
            ),
            _ => None,
        };
        Ok(Endomorphism {
            rank: self.rank,
            images,
            inverse_images,
        })
    }
}

/// Index of `A_i` (1-based) in the `A1..Am, B1..Bk` alphabet.
pub fn a_index(i: usize) -> usize {
    i - 1
}

/// Index of `B_j` (1-based) in the `A1..Am, B1..Bk` alphabet.
pub fn b_index(m: usize, j: usize) -> usize {
    m + j - 1
}

/// The monodromy automorphism `φ_{m,k}` of `F(A1..Am, B1..Bk)`, with its inverse.
pub fn make_phi(m: usize, k: usize) -> Result<Endomorphism> {
    check_mk(m, k, 1)?;
    let r = m + k;
    let a = |i: usize, e: i64| (a_index(i), e);
    let b = |j: usize, e: i64| (b_index(m, j), e);

    let mut images = Vec::with_capacity(r);
    let mut inverse = Vec::with_capacity(r);
    for i in 1..=m {
        let mut fwd: Vec<_> = (1..i).map(|l| a(l, 1)).collect();
        fwd.push(a(i, 1));
        fwd.extend((1..i).rev().map(|l| a(l, -1)));
        images.push(Word::from_powers(r, &fwd));

        let mut bwd: Vec<_> = (1..i).map(|l| a(l, -1)).collect();
        bwd.push(a(i, 1));
        bwd.extend((1..i).rev().map(|l| a(l, 1)));
        inverse.push(Word::from_powers(r, &bwd));
    }
    for j in 1..=k {
        let mut fwd: Vec<_> = (1..=m).map(|l| a(l, 1)).collect();
        fwd.extend((1..=j).map(|l| b(l, 1)));
        fwd.extend((1..j).rev().map(|l| a(l, -1)));
        images.push(Word::from_powers(r, &fwd));

        let bwd: Vec<_> = if j == 1 {
            (1..=m).map(|l| a(l, -1)).chain([b(1, 1)]).collect()
        } else {
            (1..j - 1)
                .map(|l| a(l, -1))
                .chain([b(j - 1, -1), b(j, 1)])
                .chain((1..j).rev().map(|l| a(l, 1)))
                .collect()
        };
        inverse.push(Word::from_powers(r, &bwd));
    }
    Endomorphism::new(images, Some(inverse))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fmt(m: usize, k: usize, w: &Word) -> String {
        Alphabet::free_basis(m, k).format(w)
    }

    fn parse(m: usize, k: usize, s: &str) -> Word {
        Alphabet::free_basis(m, k).parse(s).unwrap()
    }

    fn rel_strings(p: &Presentation) -> Vec<String> {
        p.relators.iter().map(|r| p.alphabet.format(r)).collect()
    }

    #[test]
    fn presentation_1_0() {
        let p = presentation(1, 0).unwrap();
        assert_eq!(p.alphabet.names(), ["a1", "a2"]);
        assert_eq!(rel_strings(&p), ["a1 a2 a1^-1 a2^-1"]);
    }

    #[test]
    fn presentation_2_2() {
        let p = presentation(2, 2).unwrap();
        assert_eq!(p.generator_count(), 5);
        assert_eq!(
            rel_strings(&p),
            [
                "a1 a2 a1^-1 a2^-1",
                "a2 a3 a2^-1 a3^-1",
                "a4^-1 a1 a4 a3^-1",
                "a5^-1 a2 a5 a4^-1",
            ]
        );
    }

    #[test]
    fn presentation_counts_and_bounds() {
        let p = presentation(3, 1).unwrap();
        assert_eq!((p.generator_count(), p.relators.len()), (5, 4));
        for m in 1..=5 {
            for k in 0..=m {
                let p = presentation(m, k).unwrap();
                assert_eq!(p.relators.len(), m + k);
                assert!(p.relators.iter().all(|r| r.len() == 4));
            }
        }
        assert!(presentation(2, 3).is_err());
        assert!(presentation(0, 0).is_err());
        assert!(make_phi(2, 0).is_err());
    }

    #[test]
    fn phi_tables() {
        let phi = make_phi(2, 2).unwrap();
        let imgs: Vec<_> = phi.images().iter().map(|w| fmt(2, 2, w)).collect();
        assert_eq!(imgs, ["A1", "A1 A2 A1^-1", "A1 A2 B1", "A1 A2 B1 B2 A1^-1"]);

        let phi = make_phi(1, 1).unwrap();
        let imgs: Vec<_> = phi.images().iter().map(|w| fmt(1, 1, w)).collect();
        assert_eq!(imgs, ["A1", "A1 B1"]);

        let phi = make_phi(3, 2).unwrap();
        assert_eq!(fmt(3, 2, phi.image(b_index(3, 2))), "A1 A2 A3 B1 B2 A1^-1");
    }

    #[test]
    fn inverse_table_small() {
        let inv = make_phi(3, 3).unwrap().inverse().unwrap();
        let imgs: Vec<_> = inv.images().iter().map(|w| fmt(3, 3, w)).collect();
        assert_eq!(
            imgs,
            [
                "A1",
                "A1^-1 A2 A1",
                "A1^-1 A2^-1 A3 A2 A1",
                "A1^-1 A2^-1 A3^-1 B1",
                "B1^-1 B2 A1",
                "A1^-1 B2^-1 B3 A2 A1",
            ]
        );
    }

    #[test]
    fn apply_examples() {
        let phi = make_phi(2, 2).unwrap();
        assert_eq!(phi.apply(&parse(2, 2, "A1")).unwrap(), parse(2, 2, "A1"));
        assert!(phi.apply(&Word::identity(4)).unwrap().is_empty());
        assert_eq!(
            fmt(2, 2, &phi.apply(&parse(2, 2, "B2^-1")).unwrap()),
            "A1 B2^-1 B1^-1 A2^-1 A1^-1"
        );
        assert!(matches!(
            phi.apply(&Word::identity(3)),
            Err(GmkError::RankMismatch { .. })
        ));
    }

    #[test]
    fn iterate_examples() {
        let phi = make_phi(2, 2).unwrap();
        let w = phi.iterate(&parse(2, 2, "B2"), 2).unwrap();
        assert_eq!(fmt(2, 2, &w), "A1^2 A2^2 B1 A1 A2 B1 B2 A1^-2");
        assert_eq!(w.len(), 11);
        assert_eq!(
            fmt(2, 2, &phi.iterate(&parse(2, 2, "B1"), 4).unwrap()),
            "A1^4 A2^4 B1"
        );
        let phi = make_phi(3, 3).unwrap();
        assert_eq!(
            fmt(3, 3, &phi.iterate(&parse(3, 3, "A3"), 5).unwrap()),
            "A1^5 A2^5 A3 A2^-5 A1^-5"
        );
        assert_eq!(phi.iterate(&parse(3, 3, "B3"), 0).unwrap(), parse(3, 3, "B3"));
    }

    #[test]
    fn compose_examples() {
        let phi = make_phi(1, 1).unwrap();
        let sq = phi.compose(&phi).unwrap();
        assert_eq!(fmt(1, 1, sq.image(1)), "A1^2 B1");
        assert!(sq.verify_inverse());

        let phi = make_phi(2, 2).unwrap();
        assert_eq!(Endomorphism::identity(4).compose(&phi).unwrap().images(), phi.images());
        let id = phi.compose(&phi.inverse().unwrap()).unwrap();
        assert_eq!(id.images(), Endomorphism::identity(4).images());
        assert!(phi.compose(&make_phi(1, 1).unwrap()).is_err());
    }

    #[test]
    fn declared_inverse_is_inverse() {
        for m in 1..=6 {
            for k in 1..=m {
                assert!(make_phi(m, k).unwrap().verify_inverse(), "m={m} k={k}");
            }
        }
    }

    #[test]
    fn restriction_of_square_family() {
        for m in 1..=6 {
            let full = make_phi(m, m).unwrap();
            let full_inv = full.inverse().unwrap();
            let ab_full = Alphabet::free_basis(m, m);
            for k in 1..=m {
                let part = make_phi(m, k).unwrap();
                let part_inv = part.inverse().unwrap();
                let ab = Alphabet::free_basis(m, k);
                for x in 0..m + k {
                    assert_eq!(ab.format(part.image(x)), ab_full.format(full.image(x)));
                    assert_eq!(ab.format(part_inv.image(x)), ab_full.format(full_inv.image(x)));
                }
            }
        }
    }

    /// Flip the sign of every `A` letter.
    fn flip_a(m: usize, w: &Word) -> Word {
        Word::reduce(
            w.rank(),
            w.letters().iter().map(|&s| if s.index() < m { s.inverse() } else { s }),
        )
        .unwrap()
    }

    fn a_word(m: usize, max_len: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec((0..m, any::<bool>()), 0..max_len).prop_map(move |v| {
            Word::reduce(m, v.into_iter().map(|(i, inv)| GenSymbol::new(i, inv))).unwrap()
        })
    }

    proptest! {
        #[test]
        fn homomorphism(m in 1usize..5, u in a_word(8, 10), v in a_word(8, 10)) {
            let phi = make_phi(m, m).unwrap();
            let r = 2 * m;
            let clip = |w: &Word| Word::reduce(r, w.letters().iter().filter(|s| s.index() < r).copied()).unwrap();
            let (u, v) = (clip(&u), clip(&v));
            let lhs = phi.apply(&u.mul(&v)).unwrap();
            let rhs = phi.apply(&u).unwrap().mul(&phi.apply(&v).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn sign_flip_conjugates_phi_to_inverse(m in 1usize..6, w in a_word(5, 12)) {
            let phi = make_phi(m, 1).unwrap();
            let inv = phi.inverse().unwrap();
            let w = Word::reduce(m + 1, w.letters().iter().filter(|s| s.index() < m).copied()).unwrap();
            let lhs = flip_a(m, &phi.apply(&flip_a(m, &w)).unwrap());
            prop_assert_eq!(lhs, inv.apply(&w).unwrap());
        }
    }
}
