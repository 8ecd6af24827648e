//! The double `Γ = G *_F G` of `G_{m,k}` along its free fibre.
//!
//! Both stable letters `s` and `t` conjugate the fibre by the monodromy, so
//! `Γ` splits as `F(A) ⋊ F(s,t)` and every element has a unique normal form
//! `u · g` with `u ∈ F(s,t)` and `g ∈ F(A)`.

use std::collections::HashMap;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::abelian::abelianization_matrix;
use crate::error::{GmkError, Result};
use crate::family::{b_index, check_mk, make_phi, Endomorphism, Presentation};
use crate::growth::growth_table;
use crate::words::{Alphabet, GenSymbol, Word};

/// Largest ball the combing audit will enumerate, in candidate words.
pub const BALL_GUARD: u128 = 10_000_000;

#[derive(Clone, Debug)]
pub struct DoubledGroup {
    m: usize,
    k: usize,
    psi: Endomorphism,
    psi_inv: Endomorphism,
    alphabet: Alphabet,
}

impl DoubledGroup {
    pub fn new(m: usize, k: usize) -> Result<Self> {
        check_mk(m, k, 1)?;
        let psi = make_phi(m, k)?;
        let psi_inv = psi.inverse().expect("the monodromy carries its inverse");
        Ok(DoubledGroup {
            m,
            k,
            psi,
            psi_inv,
            alphabet: Alphabet::doubled(m, k),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn psi(&self) -> &Endomorphism {
        &self.psi
    }

    /// `A1..Am, B1..Bk, s, t`.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Rank of the fibre `F(A)`.
    pub fn fibre_rank(&self) -> usize {
        self.m + self.k
    }

    pub fn s(&self) -> usize {
        self.fibre_rank()
    }

    pub fn t(&self) -> usize {
        self.fibre_rank() + 1
    }

    fn stable_letter(&self, x: &Word) -> Word {
        x.widen(self.alphabet.rank())
    }

    pub fn presentation(&self) -> Presentation {
        let r = self.alphabet.rank();
        let mut relators = Vec::with_capacity(2 * self.fibre_rank());
        for stable in [self.s(), self.t()] {
            for (x, img) in self.psi.images().iter().enumerate() {
                let st = Word::generator(r, stable);
                let mut w = st.clone();
                w.push(GenSymbol::pos(x));
                w.push_inverse(&st);
                w.push_inverse(&self.stable_letter(img));
                relators.push(w);
            }
        }
        Presentation {
            alphabet: self.alphabet.clone(),
            relators,
        }
    }

    pub fn normal_form(&self, w: &Word) -> Result<NormalForm> {
        if w.rank() != self.alphabet.rank() {
            return Err(GmkError::RankMismatch {
                expected: self.alphabet.rank(),
                got: w.rank(),
            });
        }
        let mut nf = NormalForm::identity(self.fibre_rank());
        for &x in w.letters() {
            nf.push(self, x);
        }
        Ok(nf)
    }

    pub fn is_trivial(&self, w: &Word) -> Result<bool> {
        Ok(self.normal_form(w)?.is_identity())
    }

    /// `[(s t^-1)^n, t^{ℓn} B_k^{pn} t^{-ℓn}]`, spelled without free reduction.
    pub fn certificate_word(&self, n: usize, ell: usize, p: usize) -> Result<Certificate> {
        if n == 0 || ell == 0 || p == 0 {
            return Err(GmkError::InvalidParameters("n, ell and p must be at least 1".into()));
        }
        let (s, t, b) = (self.s(), self.t(), b_index(self.m, self.k));
        let mut x = Vec::with_capacity(2 * n);
        for _ in 0..n {
            x.push(GenSymbol::pos(s));
            x.push(GenSymbol::neg(t));
        }
        let mut y = Vec::with_capacity(2 * ell * n + p * n);
        y.extend(std::iter::repeat_n(GenSymbol::pos(t), ell * n));
        y.extend(std::iter::repeat_n(GenSymbol::pos(b), p * n));
        y.extend(std::iter::repeat_n(GenSymbol::neg(t), ell * n));
        let inv = |v: &[GenSymbol]| v.iter().rev().map(|s| s.inverse()).collect::<Vec<_>>();
        let mut spelling = x.clone();
        spelling.extend(&y);
        spelling.extend(inv(&x));
        spelling.extend(inv(&y));
        let reduced = Word::reduce(self.alphabet.rank(), spelling.iter().copied())?;
        let trivial = self.is_trivial(&reduced)?;
        Ok(Certificate {
            text: format_spelling(&self.alphabet, &spelling),
            length: spelling.len(),
            reduced_length: reduced.len(),
            trivial,
            filling_exponent: self.k + 2,
        })
    }

    /// The image of `w` under `A ↦ A, s ↦ τu, t ↦ τv` in `H × F(u,v)`,
    /// where `H = F(A) ⋊ ⟨τ⟩` and `τ` acts by the monodromy.
    pub fn mu_embedding(&self, w: &Word) -> Result<MuImage> {
        if w.rank() != self.alphabet.rank() {
            return Err(GmkError::RankMismatch {
                expected: self.alphabet.rank(),
                got: w.rank(),
            });
        }
        let mut tau = 0i64;
        let mut g = Word::identity(self.fibre_rank());
        let mut f = Word::identity(2);
        for &x in w.letters() {
            if x.index() < self.fibre_rank() {
                g.push(x);
            } else {
                tau += x.sign();
                g = self.conjugate_by_stable(&g, x.sign());
                f.push(GenSymbol::new(x.index() - self.s(), x.is_inverse()));
            }
        }
        Ok(MuImage { tau, fibre: g, free: f })
    }

    /// `ψ^{-ε}(g)`: the effect of moving `g` past a stable letter of sign `ε`.
    fn conjugate_by_stable(&self, g: &Word, sign: i64) -> Word {
        if sign > 0 {
            self.psi_inv.apply_unchecked(g)
        } else {
            self.psi.apply_unchecked(g)
        }
    }

    pub fn format_normal_form(&self, nf: &NormalForm) -> (String, String) {
        let st = Alphabet::new(vec!["s".into(), "t".into()]).expect("valid names");
        (st.format(&nf.u), Alphabet::free_basis(self.m, self.k).format(&nf.g))
    }
}

/// `u · g` with `u ∈ F(s,t)` (rank 2) and `g ∈ F(A)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalForm {
    pub u: Word,
    pub g: Word,
}

impl NormalForm {
    pub fn identity(fibre_rank: usize) -> Self {
        NormalForm {
            u: Word::identity(2),
            g: Word::identity(fibre_rank),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.u.is_empty() && self.g.is_empty()
    }

    pub fn len(&self) -> usize {
        self.u.len() + self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    /// Right-multiply by one letter of the doubled alphabet.
    pub fn push(&mut self, group: &DoubledGroup, x: GenSymbol) {
        if x.index() < group.fibre_rank() {
            self.g.push(x);
        } else {
            self.u.push(GenSymbol::new(x.index() - group.s(), x.is_inverse()));
            self.g = group.conjugate_by_stable(&self.g, x.sign());
        }
    }

    /// The word `u · g` in the doubled alphabet.
    pub fn to_word(&self, group: &DoubledGroup) -> Word {
        let r = group.alphabet.rank();
        let mut w = Word::identity(r);
        for &x in self.u.letters() {
            w.push(GenSymbol::new(x.index() + group.s(), x.is_inverse()));
        }
        w.push_word(&self.g.widen(r));
        w
    }
}

fn format_spelling(alphabet: &Alphabet, letters: &[GenSymbol]) -> String {
    letters
        .iter()
        .map(|s| {
            let name = alphabet.name(s.index());
            if s.is_inverse() {
                format!("{name}^-1")
            } else {
                name.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub text: String,
    /// Letters in the commutator as spelled.
    pub length: usize,
    /// Letters after free reduction (two cancellations at each of two seams).
    pub reduced_length: usize,
    pub trivial: bool,
    /// The area of this family grows like `n^{filling_exponent}`.
    pub filling_exponent: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuImage {
    pub tau: i64,
    pub fibre: Word,
    pub free: Word,
}

impl MuImage {
    pub fn is_trivial(&self) -> bool {
        self.tau == 0 && self.fibre.is_empty() && self.free.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    pub exact: u128,
    pub abelian: u128,
}

/// `n · ‖ψ^{ℓn}(B_k)^{pn}‖` and its abelian shadow `n · pn · |M^{ℓn} e_{B_k}|_1`.
pub fn lower_bound_quantity(m: usize, k: usize, n: usize, ell: usize, p: usize) -> Result<LowerBound> {
    check_mk(m, k, 1)?;
    if n == 0 {
        return Ok(LowerBound { exact: 0, abelian: 0 });
    }
    if ell == 0 || p == 0 {
        return Err(GmkError::InvalidParameters("ell and p must be at least 1".into()));
    }
    let psi = make_phi(m, k)?;
    let b = b_index(m, k);
    let image = psi.iterate(&Word::generator(m + k, b), ell * n)?;
    let (core, conj) = image.cyclically_reduce();
    let power_len = 2 * conj.len() as u128 + (p * n) as u128 * core.len() as u128;
    let exact = n as u128 * power_len;
    let steps = u32::try_from(ell * n).map_err(|_| GmkError::InvalidParameters("ell*n too large".into()))?;
    let col = abelianization_matrix(&psi).power(steps)?.column_l1(b)?;
    let col = col
        .to_u128()
        .ok_or_else(|| GmkError::InvalidParameters("column norm overflows u128".into()))?;
    Ok(LowerBound {
        exact,
        abelian: (n * p * n) as u128 * col,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SphereStats {
    pub radius: usize,
    pub elements: usize,
    pub max_normal_form_length: usize,
    pub bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CombingReport {
    pub m: usize,
    pub k: usize,
    pub radius: usize,
    pub elements: usize,
    pub spheres: Vec<SphereStats>,
    /// Radii where some normal form exceeds `n·P(n) + n`.
    pub violations: Vec<usize>,
}

impl CombingReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// Largest `length / bound` over nonzero radii.
    pub fn max_ratio(&self) -> f64 {
        self.spheres
            .iter()
            .filter(|s| s.bound > 0)
            .map(|s| s.max_normal_form_length as f64 / s.bound as f64)
            .fold(0.0, f64::max)
    }
}

/// Enumerate the ball of the given radius by breadth-first search on normal
/// forms and check `‖u‖ + ‖g‖ ≤ n·P(n) + n` on each sphere, where `P(n)` is
/// the larger growth of `ψ` and `ψ^{-1}` at `n`.
pub fn combing_length_audit(group: &DoubledGroup, radius: usize) -> Result<CombingReport> {
    let moves = 2 * group.alphabet.rank() as u128;
    let candidates = (0..radius).try_fold(1u128, |acc, _| acc.checked_mul(moves));
    match candidates {
        Some(c) if c <= BALL_GUARD => {}
        _ => return Err(GmkError::GuardExceeded(BALL_GUARD)),
    }
    let fwd = growth_table(&group.psi, radius);
    let bwd = growth_table(&group.psi_inv, radius);
    let growth = |n: usize| fwd.gr[n].max(bwd.gr[n]);

    let letters: Vec<GenSymbol> = (0..group.alphabet.rank())
        .flat_map(|i| [GenSymbol::pos(i), GenSymbol::neg(i)])
        .collect();
    let start = NormalForm::identity(group.fibre_rank());
    let mut seen: HashMap<NormalForm, usize> = HashMap::from([(start.clone(), 0)]);
    let mut frontier = vec![start];
    let mut spheres = vec![SphereStats {
        radius: 0,
        elements: 1,
        max_normal_form_length: 0,
        bound: 0,
    }];
    for d in 1..=radius {
        let mut next = Vec::new();
        for nf in &frontier {
            for &x in &letters {
                let mut y = nf.clone();
                y.push(group, x);
                if !seen.contains_key(&y) {
                    seen.insert(y.clone(), d);
                    next.push(y);
                }
            }
        }
        let max_len = next.iter().map(NormalForm::len).max().unwrap_or(0);
        spheres.push(SphereStats {
            radius: d,
            elements: next.len(),
            max_normal_form_length: max_len,
            bound: d as u64 * growth(d) + d as u64,
        });
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    let violations = spheres
        .iter()
        .filter(|s| s.max_normal_form_length as u64 > s.bound)
        .map(|s| s.radius)
        .collect();
    Ok(CombingReport {
        m: group.m,
        k: group.k,
        radius,
        elements: seen.len(),
        spheres,
        violations,
    })
}

/// Insert random conjugates of relators into `w` at random positions.
pub fn insert_relators(
    group: &DoubledGroup,
    w: &Word,
    insertions: usize,
    rng: &mut impl rand::Rng,
) -> Word {
    let rels = group.presentation().relators;
    let r = group.alphabet.rank();
    let mut letters: Vec<GenSymbol> = w.letters().to_vec();
    for _ in 0..insertions {
        let rel = &rels[rng.gen_range(0..rels.len())];
        let rel = if rng.gen_bool(0.5) { rel.clone() } else { rel.invert() };
        let conj = Word::generator(r, rng.gen_range(0..r)).pow(if rng.gen_bool(0.5) { 1 } else { -1 });
        let mut piece = conj.clone();
        piece.push_word(&rel);
        piece.push_inverse(&conj);
        let at = rng.gen_range(0..=letters.len());
        letters.splice(at..at, piece.letters().iter().copied());
    }
    Word::reduce(r, letters).expect("letters lie in the alphabet")
}
