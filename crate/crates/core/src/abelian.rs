//! Exact integer matrices for abelianized endomorphisms.
//!
//! Columns are images: entry `(i, j)` is the exponent sum of generator `i`
//! in the image of generator `j`.

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, Zero};

use crate::error::{GmkError, Result};
use crate::family::{check_mk, Endomorphism};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(GmkError::Shape("ragged or empty rows".into()));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            entries: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(GmkError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.entries[idx] += a * other.get(l, j);
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(GmkError::Shape("dimension mismatch in subtraction".into()));
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// `M - I`.
    pub fn minus_identity(&self) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(GmkError::Shape("not square".into()));
        }
        self.sub(&IntMatrix::identity(self.rows))
    }

    pub fn power(&self, n: u32) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(GmkError::Shape("power of a non-square matrix".into()));
        }
        let mut acc = IntMatrix::identity(self.rows);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Rank over the rationals by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<BigInt>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            for r in rank + 1..self.rows {
                for c in col + 1..self.cols {
                    let v = (&a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c]) / &prev;
                    a[r][c] = v;
                }
                a[r][col] = BigInt::zero();
            }
            prev = a[rank][col].clone();
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// `(max |a_ij|, max_i Σ_j |a_ij|)`.
    pub fn norms(&self) -> (BigInt, BigInt) {
        let sup = self.entries.iter().map(|x| x.abs()).max().unwrap_or_default();
        let op = (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.abs()).sum::<BigInt>())
            .max()
            .unwrap_or_default();
        (sup, op)
    }

    pub fn column_l1(&self, j: usize) -> Result<BigInt> {
        if j >= self.cols {
            return Err(GmkError::Shape(format!("column {j} out of {}", self.cols)));
        }
        Ok((0..self.rows).map(|i| self.get(i, j).abs()).sum())
    }

    pub fn max_column_l1(&self) -> BigInt {
        (0..self.cols)
            .map(|j| self.column_l1(j).unwrap())
            .max()
            .unwrap_or_default()
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| i64::try_from(x).ok()).collect())
            .collect()
    }
}

/// Exponent-sum matrix of an endomorphism.
pub fn abelianization_matrix(e: &Endomorphism) -> IntMatrix {
    let r = e.rank();
    let mut m = IntMatrix::zeros(r, r);
    for (j, img) in e.images().iter().enumerate() {
        for (i, s) in img.exponent_sums().into_iter().enumerate() {
            m.set(i, j, BigInt::from(s));
        }
    }
    m
}

/// Block sizes of a unipotent matrix's Jordan form, largest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanProfile {
    pub blocks: Vec<usize>,
}

pub fn unipotent_jordan_profile(m: &IntMatrix) -> Result<JordanProfile> {
    let n = m.rows();
    let nil = m.minus_identity()?;
    // ranks[j] = rank((M - I)^j)
    let mut ranks = vec![n];
    let mut p = IntMatrix::identity(n);
    for _ in 0..n {
        p = p.mul(&nil)?;
        ranks.push(p.rank());
    }
    if !p.is_zero() {
        return Err(GmkError::NotUnipotent);
    }
    ranks.push(0);
    let mut blocks = Vec::new();
    for size in (1..=n).rev() {
        let at_least = |j: usize| ranks[j - 1] - ranks[j];
        let exact = at_least(size) - at_least(size + 1);
        blocks.extend(std::iter::repeat_n(size, exact));
    }
    Ok(JordanProfile { blocks })
}

/// `c_{i,n} = C(n+i-1, i)`, with `c_{0,n} = 1`.
pub fn c_coeff(i: u64, n: u64) -> BigInt {
    if i == 0 {
        return BigInt::one();
    }
    if n == 0 {
        return BigInt::zero();
    }
    binomial(BigInt::from(n + i - 1), BigInt::from(i))
}

/// The abelianized `φ_{m,k}` written down block by block: identity on the
/// `A`s, `D_{ij} = [i >= j]` from `B_j` to `A_i`, and an upper-unitriangular
/// all-ones block on the `B`s.
pub fn phi_block_form(m: usize, k: usize) -> Result<IntMatrix> {
    check_mk(m, k, 1)?;
    let mut out = IntMatrix::identity(m + k);
    for j in 0..k {
        for i in 0..m {
            if i >= j {
                out.set(i, m + j, BigInt::one());
            }
        }
        for i in 0..=j {
            out.set(m + i, m + j, BigInt::one());
        }
    }
    Ok(out)
}

/// Closed form of the `n`-th power of [`phi_block_form`]:
/// `B_j ↦ Σ_i (c_{j,n} - [i<j] c_{j-i,n}) A_i + Σ_{l<=j} c_{j-l,n} B_l`.
pub fn phi_power_law(m: usize, k: usize, n: u64) -> Result<IntMatrix> {
    check_mk(m, k, 1)?;
    let mut out = IntMatrix::identity(m + k);
    for j in 1..=k {
        for i in 1..=m {
            let mut v = c_coeff(j as u64, n);
            if i < j {
                v -= c_coeff((j - i) as u64, n);
            }
            out.set(i - 1, m + j - 1, v);
        }
        for l in 1..=j {
            out.set(m + l - 1, m + j - 1, c_coeff((j - l) as u64, n));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{b_index, make_phi};
    use crate::growth::growth_table;
    use crate::words::Word;
    use proptest::prelude::*;

    fn phi_ab(m: usize, k: usize) -> IntMatrix {
        abelianization_matrix(&make_phi(m, k).unwrap())
    }

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn phi_2_2_matrix() {
        let want = IntMatrix::from_rows(&[
            vec![1, 0, 1, 1],
            vec![0, 1, 1, 1],
            vec![0, 0, 1, 1],
            vec![0, 0, 0, 1],
        ])
        .unwrap();
        // The A1 exponent cancels in φ(B2) = A1 A2 B1 B2 Ā1.
        let got = phi_ab(2, 2);
        assert_eq!(got.get(0, 3), &big(0));
        assert_eq!(got.get(1, 3), &big(1));
        assert_ne!(got, want);
        assert_eq!(got, phi_block_form(2, 2).unwrap());
    }

    #[test]
    fn all_ones_upper_right_block_only_for_single_b() {
        for m in 1..=5 {
            for k in 1..=m {
                let got = phi_ab(m, k);
                let all_ones = (0..m).all(|i| (m..m + k).all(|j| got.get(i, j) == &big(1)));
                assert_eq!(all_ones, k == 1, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn simple_matrices() {
        assert_eq!(abelianization_matrix(&Endomorphism::identity(3)), IntMatrix::identity(3));
        assert_eq!(phi_ab(1, 1), IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap());
    }

    #[test]
    fn block_form_matches() {
        for m in 1..=5 {
            for k in 1..=m {
                assert_eq!(phi_ab(m, k), phi_block_form(m, k).unwrap());
            }
        }
    }

    #[test]
    fn power_examples() {
        let p = phi_ab(2, 2).power(3).unwrap();
        assert_eq!(p.get(2, 3), &big(3));
        assert_eq!(c_coeff(2, 3), big(6));
        assert_eq!(p.get(0, 3), &big(6 - 3));
        assert_eq!(p.get(1, 3), &big(6));
        assert_eq!(phi_ab(2, 2).power(0).unwrap(), IntMatrix::identity(4));

        let p = phi_ab(3, 2).power(4).unwrap();
        let rows: Vec<Vec<i64>> = (0..3)
            .map(|i| vec![i64::try_from(p.get(i, 3)).unwrap(), i64::try_from(p.get(i, 4)).unwrap()])
            .collect();
        assert_eq!(rows, [vec![4, 6], vec![4, 10], vec![4, 10]]);
    }

    #[test]
    fn power_law_matches_repeated_multiplication() {
        for m in 1..=5 {
            for k in 1..=m {
                let base = phi_ab(m, k);
                let mut acc = IntMatrix::identity(m + k);
                for n in 0..=20u64 {
                    assert_eq!(acc, phi_power_law(m, k, n).unwrap(), "m={m} k={k} n={n}");
                    acc = acc.mul(&base).unwrap();
                }
            }
        }
    }

    /// Exponent sums of iterated words give the same columns as matrix powers.
    #[test]
    fn power_columns_match_iterated_words() {
        for m in 1..=4 {
            for k in 1..=m {
                let phi = make_phi(m, k).unwrap();
                for x in 0..m + k {
                    let mut w = Word::generator(m + k, x);
                    for n in 0..=8u32 {
                        let p = phi_ab(m, k).power(n).unwrap();
                        let sums = w.exponent_sums();
                        for (i, s) in sums.iter().enumerate() {
                            assert_eq!(p.get(i, x), &big(*s));
                        }
                        w = phi.apply(&w).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn rank_examples() {
        let nil = phi_ab(2, 2).minus_identity().unwrap();
        assert_eq!(nil.rank(), 2);
        assert_eq!(nil.mul(&nil).unwrap().rank(), 1);
        assert_eq!(IntMatrix::zeros(3, 4).rank(), 0);
        let r = IntMatrix::from_rows(&[vec![2, 4, 6], vec![1, 2, 3], vec![0, 1, 5]]).unwrap();
        assert_eq!(r.rank(), 2);
    }

    #[test]
    fn nilpotent_ranks_for_family() {
        for m in 1..=5 {
            for k in 1..=m {
                let nil = phi_ab(m, k).minus_identity().unwrap();
                assert_eq!(nil.rank(), k);
                assert_eq!(nil.mul(&nil).unwrap().rank(), k - 1);
            }
        }
    }

    #[test]
    fn jordan_profiles() {
        assert_eq!(unipotent_jordan_profile(&phi_ab(2, 2)).unwrap().blocks, [3, 1]);
        assert_eq!(unipotent_jordan_profile(&IntMatrix::identity(3)).unwrap().blocks, [1, 1, 1]);
        assert_eq!(unipotent_jordan_profile(&phi_ab(4, 3)).unwrap().blocks, [4, 1, 1, 1]);
        for m in 1..=5 {
            for k in 1..=m {
                let mut want = vec![k + 1];
                want.extend(std::iter::repeat_n(1, m - 1));
                assert_eq!(unipotent_jordan_profile(&phi_ab(m, k)).unwrap().blocks, want);
            }
        }
        let not_unipotent = IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]).unwrap();
        assert_eq!(unipotent_jordan_profile(&not_unipotent), Err(GmkError::NotUnipotent));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(phi_ab(2, 2).norms(), (big(1), big(3)));
        assert_eq!(IntMatrix::zeros(2, 2).norms(), (big(0), big(0)));
        assert_eq!(phi_ab(2, 2).power(3).unwrap().norms().0, big(6));
    }

    #[test]
    fn column_l1_examples() {
        let p = phi_ab(2, 2).power(3).unwrap();
        assert_eq!(p.column_l1(3).unwrap(), big(13));
        assert_eq!(IntMatrix::identity(4).column_l1(2).unwrap(), big(1));
        for n in 0..10 {
            assert_eq!(phi_ab(1, 1).power(n).unwrap().column_l1(1).unwrap(), big(n as i64 + 1));
        }
        assert!(p.column_l1(4).is_err());
    }

    #[test]
    fn last_column_closed_form() {
        for m in 1..=5 {
            for n in 1..=20u64 {
                let p = phi_power_law(m, m, n).unwrap();
                let want = BigInt::from(m) * c_coeff(m as u64, n) + 1;
                assert_eq!(p.column_l1(2 * m - 1).unwrap(), want);
                let inf = (0..2 * m).map(|i| p.get(i, 2 * m - 1).abs()).max().unwrap();
                assert_eq!(inf, c_coeff(m as u64, n));
            }
        }
    }

    #[test]
    fn word_length_dominates_abelian_norms() {
        for m in 1..=4 {
            for k in 1..=m {
                let table = growth_table(&make_phi(m, k).unwrap(), 12);
                for n in 0..=12u32 {
                    let p = phi_ab(m, k).power(n).unwrap();
                    let l1 = p.max_column_l1();
                    let (sup, op) = p.norms();
                    assert!(BigInt::from(table.gr[n as usize]) >= l1);
                    assert!(l1 >= sup);
                    assert!(sup <= op && op <= BigInt::from(m + k) * &sup);
                    let b = b_index(m, k);
                    assert!(BigInt::from(table.lengths[b][n as usize]) >= p.column_l1(b).unwrap());
                }
            }
        }
    }

    #[test]
    fn single_jordan_block_growth() {
        for c in 1..=6usize {
            let mut j = IntMatrix::identity(c);
            for i in 0..c - 1 {
                j.set(i, i + 1, BigInt::one());
            }
            for n in 0..30u32 {
                let sup = j.power(n).unwrap().norms().0;
                let entries = (0..c).map(|d| binomial(BigInt::from(n), BigInt::from(d)));
                assert_eq!(sup, entries.max().unwrap());
                if n as usize >= 2 * (c - 1) {
                    assert_eq!(sup, binomial(BigInt::from(n), BigInt::from(c - 1)));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn rank_is_transpose_invariant(rows in prop::collection::vec(prop::collection::vec(-4i64..5, 4), 3)) {
            let a = IntMatrix::from_rows(&rows).unwrap();
            let t: Vec<Vec<i64>> = (0..4).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
            prop_assert_eq!(a.rank(), IntMatrix::from_rows(&t).unwrap().rank());
        }

        #[test]
        fn rank_of_product_bounded(x in prop::collection::vec(prop::collection::vec(-3i64..4, 3), 3),
                                   y in prop::collection::vec(prop::collection::vec(-3i64..4, 3), 3)) {
            let a = IntMatrix::from_rows(&x).unwrap();
            let b = IntMatrix::from_rows(&y).unwrap();
            let ab = a.mul(&b).unwrap();
            prop_assert!(ab.rank() <= a.rank().min(b.rank()));
        }
    }
}
