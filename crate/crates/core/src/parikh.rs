//! The Parikh matrix mapping and (strong) M-equivalence.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::scalar::Count;
use crate::words::{
    count_subword_in, letter_counts, same_alphabet, Alphabet, OrderedAlphabet, Word,
};

/// An upper unitriangular matrix with nonnegative integer entries.
///
/// Indices are 0-based: entry `(i, j + 1)` of a Parikh matrix counts the run
/// of ranks `i + 1 ..= j + 1` as a subword.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ParikhMatrix<C> {
    dim: usize,
    entries: Vec<C>,
}

impl<C: Count> ParikhMatrix<C> {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![C::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = C::one();
        }
        ParikhMatrix { dim, entries }
    }

    /// Builds a matrix from rows, checking the unitriangular shape.
    pub fn from_rows(rows: Vec<Vec<C>>) -> Option<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return None;
        }
        let m = ParikhMatrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        };
        m.is_unitriangular().then_some(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &C {
        &self.entries[row * self.dim + col]
    }

    fn get_mut(&mut self, row: usize, col: usize) -> &mut C {
        &mut self.entries[row * self.dim + col]
    }

    pub fn rows(&self) -> Vec<Vec<C>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn is_unitriangular(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| match i.cmp(&j) {
                std::cmp::Ordering::Equal => self.get(i, j).is_one(),
                std::cmp::Ordering::Greater => self.get(i, j).is_zero(),
                std::cmp::Ordering::Less => true,
            })
        })
    }

    /// Ordinary matrix product with overflow checks.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ParikhMatrix::identity(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = C::zero();
                // both factors are upper triangular: only i <= l <= j contributes
                for l in i..=j {
                    acc = acc.add_checked(&self.get(i, l).mul_checked(rhs.get(l, j))?)?;
                }
                *out.get_mut(i, j) = acc;
            }
        }
        Ok(out)
    }

    /// Right-multiplies by the letter matrix of 1-based rank `q`.
    ///
    /// That product only adds column `q - 1` onto column `q`.
    fn push_rank(&mut self, q: usize) -> Result<()> {
        for i in 0..q {
            let add = self.get(i, q - 1).clone();
            let cell = self.get_mut(i, q);
            *cell = cell.add_checked(&add)?;
        }
        Ok(())
    }

    /// Converts entry by entry into another count type.
    pub fn map<D: Count>(&self, mut f: impl FnMut(&C) -> D) -> ParikhMatrix<D> {
        ParikhMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(&mut f).collect(),
        }
    }
}

impl<C: Count> fmt::Display for ParikhMatrix<C> {
    /// An aligned grid, one row per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(|c| c.to_string()).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for (r, row) in cells.chunks(self.dim).enumerate() {
            if r > 0 {
                writeln!(f)?;
            }
            let line = row.iter().map(|c| format!("{c:>width$}")).join(" ");
            f.write_str(&line)?;
        }
        Ok(())
    }
}

impl<C: Count> fmt::Debug for ParikhMatrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

/// `Ψ(a_q)`: the identity of dimension `k + 1` with an extra 1 at `(q, q + 1)`
/// (1-based), i.e. at `(q - 1, q)` in 0-based indices.
pub fn letter_matrix<C: Count>(q: usize, k: usize) -> Result<ParikhMatrix<C>> {
    if q == 0 || q > k {
        return Err(Error::RankOutOfRange { rank: q, k });
    }
    let mut m = ParikhMatrix::identity(k + 1);
    *m.get_mut(q - 1, q) = C::one();
    Ok(m)
}

/// The Parikh matrix of `w`, computed as the left-to-right product of letter
/// matrices.
pub fn parikh_matrix<C: Count>(w: &Word, ordering: &OrderedAlphabet) -> Result<ParikhMatrix<C>> {
    if w.alphabet() != ordering.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let mut m = ParikhMatrix::identity(ordering.len() + 1);
    for &l in w.symbols() {
        m.push_rank(ordering.rank(l))?;
    }
    Ok(m)
}

/// The matrix whose `(i, j + 1)` entry is `|w|_{a_{i,j}}`, counted directly.
pub fn parikh_matrix_from_counts<C: Count>(
    w: &Word,
    ordering: &OrderedAlphabet,
) -> Result<ParikhMatrix<C>> {
    if w.alphabet() != ordering.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let k = ordering.len();
    let mut m = ParikhMatrix::identity(k + 1);
    for i in 0..k {
        for j in i..k {
            *m.get_mut(i, j + 1) = count_subword_in(w.symbols(), &ordering.order()[i..=j])?;
        }
    }
    Ok(m)
}

/// Exact comparison of Parikh matrices; retries with `BigUint` if `u64`
/// overflows, so it never fails on overflow.
fn same_matrix(w: &Word, v: &Word, ordering: &OrderedAlphabet) -> Result<bool> {
    match (
        parikh_matrix::<u64>(w, ordering),
        parikh_matrix::<u64>(v, ordering),
    ) {
        (Ok(a), Ok(b)) => Ok(a == b),
        (Err(Error::Overflow), _) | (_, Err(Error::Overflow)) => {
            Ok(parikh_matrix::<BigUint>(w, ordering)? == parikh_matrix::<BigUint>(v, ordering)?)
        }
        (Err(e), _) | (_, Err(e)) => Err(e),
    }
}

pub fn m_equivalent(w: &Word, v: &Word, ordering: &OrderedAlphabet) -> Result<bool> {
    same_alphabet(w, v)?;
    if w.len() != v.len() {
        return Ok(false);
    }
    same_matrix(w, v, ordering)
}

/// The three orderings `a<b<c`, `b<a<c`, `a<c<b` (letters in registration
/// order) whose matrices together decide strong M-equivalence for ternary
/// alphabets.
pub fn sufficient_orderings(alphabet: &Alphabet) -> Result<[OrderedAlphabet; 3]> {
    alphabet.require_ternary()?;
    let [a, b, c] = [0, 1, 2].map(|i| crate::words::Letter::from_index(i).unwrap());
    let make = |order: Vec<_>| OrderedAlphabet::new(alphabet, order).expect("permutation");
    Ok([
        make(vec![a, b, c]),
        make(vec![b, a, c]),
        make(vec![a, c, b]),
    ])
}

/// All `k!` orderings of the alphabet, lexicographic by letter index.
pub fn all_orderings(alphabet: &Alphabet) -> Vec<OrderedAlphabet> {
    alphabet
        .letters()
        .permutations(alphabet.len())
        .map(|order| OrderedAlphabet::new(alphabet, order).expect("permutation"))
        .collect()
}

/// Equal Parikh matrices under every ordering of the alphabet. Ternary
/// alphabets only check the three sufficient orderings.
pub fn strongly_m_equivalent(w: &Word, v: &Word) -> Result<bool> {
    if w.alphabet().is_ternary() {
        same_alphabet(w, v)?;
        if !same_letters(w, v) {
            return Ok(false);
        }
        for ordering in sufficient_orderings(w.alphabet())? {
            if !same_matrix(w, v, &ordering)? {
                return Ok(false);
            }
        }
        Ok(true)
    } else {
        strongly_m_equivalent_all_orderings(w, v)
    }
}

/// Strong M-equivalence by enumerating all `k!` orderings, without shortcuts.
pub fn strongly_m_equivalent_all_orderings(w: &Word, v: &Word) -> Result<bool> {
    same_alphabet(w, v)?;
    if !same_letters(w, v) {
        return Ok(false);
    }
    for ordering in all_orderings(w.alphabet()) {
        if !same_matrix(w, v, &ordering)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn same_letters(w: &Word, v: &Word) -> bool {
    let k = w.alphabet().len();
    w.len() == v.len() && letter_counts(w.symbols(), k) == letter_counts(v.symbols(), k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;

    fn abc(text: &str) -> Word {
        Alphabet::abc().parse_word(text).unwrap()
    }

    fn order(text: &str) -> OrderedAlphabet {
        OrderedAlphabet::parse(text, &Alphabet::abc()).unwrap()
    }

    fn rows(m: ParikhMatrix<u64>) -> Vec<Vec<u64>> {
        m.rows()
    }

    #[test]
    fn letter_matrices() {
        let first: ParikhMatrix<u64> = letter_matrix(1, 3).unwrap();
        assert_eq!(
            rows(first),
            vec![
                vec![1, 1, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1]
            ]
        );
        let last: ParikhMatrix<u64> = letter_matrix(3, 3).unwrap();
        assert_eq!(*last.get(2, 3), 1);
        assert!(last.is_unitriangular());
        assert_eq!(
            letter_matrix::<u64>(4, 3),
            Err(Error::RankOutOfRange { rank: 4, k: 3 })
        );
        assert!(letter_matrix::<u64>(0, 3).is_err());
    }

    #[test]
    fn worked_example_matrix() {
        let m: ParikhMatrix<u64> = parikh_matrix(&abc("abccc"), &order("a<b<c")).unwrap();
        assert_eq!(
            rows(m),
            vec![
                vec![1, 1, 1, 3],
                vec![0, 1, 1, 3],
                vec![0, 0, 1, 3],
                vec![0, 0, 0, 1]
            ]
        );
    }

    #[test]
    fn empty_word_maps_to_identity() {
        for k in 1..=5 {
            let sigma = Alphabet::new("abcde".chars().take(k)).unwrap();
            let m: ParikhMatrix<u64> =
                parikh_matrix(&sigma.empty_word(), &OrderedAlphabet::natural(&sigma)).unwrap();
            assert_eq!(m, ParikhMatrix::identity(k + 1));
        }
    }

    #[test]
    fn matrix_under_permuted_order() {
        // entries checked against direct subword counts
        let m: ParikhMatrix<u64> = parikh_matrix(&abc("abcba"), &order("b<a<c")).unwrap();
        let expected = oracle::parikh_matrix_brute(&abc("abcba"), &order("b<a<c"));
        assert_eq!(rows(m.clone()), expected);
        assert_eq!(
            [
                m.get(0, 1),
                m.get(0, 2),
                m.get(0, 3),
                m.get(1, 2),
                m.get(1, 3),
                m.get(2, 3)
            ],
            [&2, &2, &0, &2, &1, &1]
        );
    }

    #[test]
    fn display_is_an_aligned_grid() {
        let m: ParikhMatrix<u64> = parikh_matrix(&abc("abccc"), &order("a<b<c")).unwrap();
        assert_eq!(m.to_string(), "1 1 1 3\n0 1 1 3\n0 0 1 3\n0 0 0 1");
        let w = abc(&"ab".repeat(6));
        let m: ParikhMatrix<u64> = parikh_matrix(&w, &order("a<b<c")).unwrap();
        assert!(m.to_string().starts_with(" 1  6 21"));
    }

    #[test]
    fn m_equivalence_examples() {
        let natural = order("a<b<c");
        let w = abc("babcbabcbabcbab");
        assert!(m_equivalent(&w, &w, &natural).unwrap());
        assert!(m_equivalent(&w, &abc("bbacabbcabbcbba"), &natural).unwrap());
        assert!(!m_equivalent(&abc("ab"), &abc("ba"), &natural).unwrap());
        assert!(!m_equivalent(&abc("ab"), &abc("abc"), &natural).unwrap());
    }

    #[test]
    fn strong_equivalence_examples() {
        assert!(strongly_m_equivalent(&abc("babcbabcbabcbab"), &abc("bbacabbcabbcbba")).unwrap());
        assert!(
            strongly_m_equivalent(&abc("abcabcabcabcabcabc"), &abc("cabababcabccabccab")).unwrap()
        );
        assert!(!strongly_m_equivalent(&abc("ac"), &abc("ca")).unwrap());
        // a<c<b separates them
        assert!(!m_equivalent(&abc("ac"), &abc("ca"), &order("a<c<b")).unwrap());
    }

    #[test]
    fn sufficient_orderings_follow_registration_order() {
        let names = |s: &str| {
            let sigma = Alphabet::parse(s).unwrap();
            sufficient_orderings(&sigma).unwrap().map(|o| o.to_string())
        };
        assert_eq!(names("abc"), ["a<b<c", "b<a<c", "a<c<b"]);
        assert_eq!(names("xyz"), ["x<y<z", "y<x<z", "x<z<y"]);
        assert_eq!(
            sufficient_orderings(&Alphabet::parse("ab").unwrap()).err(),
            Some(Error::TernaryOnly(2))
        );
    }

    #[test]
    fn big_and_narrow_scalars_agree() {
        let w = abc(&"abc".repeat(11));
        let natural = order("a<b<c");
        let small: ParikhMatrix<u64> = parikh_matrix(&w, &natural).unwrap();
        let big: ParikhMatrix<BigUint> = parikh_matrix(&w, &natural).unwrap();
        assert_eq!(small.map(|c| BigUint::from(*c)), big);
        assert_eq!(parikh_matrix::<u8>(&w, &natural), Err(Error::Overflow));
    }

    #[test]
    fn overflowing_words_still_compare() {
        // |a^n b^n c^n d^n e^n|_{abcde} = n^5 exceeds u64::MAX for n = 7200
        let sigma = Alphabet::parse("abcde").unwrap();
        let n = 7200;
        let text: String = "abcde"
            .chars()
            .flat_map(|c| std::iter::repeat_n(c, n))
            .collect();
        let w = sigma.parse_word(&text).unwrap();
        let natural = OrderedAlphabet::natural(&sigma);
        assert_eq!(parikh_matrix::<u64>(&w, &natural), Err(Error::Overflow));
        assert!(m_equivalent(&w, &w, &natural).unwrap());
    }

    #[test]
    fn product_form_matches_count_form_exhaustively() {
        let sigma = Alphabet::abc();
        let orderings = all_orderings(&sigma);
        assert_eq!(orderings.len(), 6);
        for w in oracle::all_words_up_to(&sigma, 8) {
            for o in &orderings {
                let product: ParikhMatrix<u64> = parikh_matrix(&w, o).unwrap();
                let counts: ParikhMatrix<u64> = parikh_matrix_from_counts(&w, o).unwrap();
                assert_eq!(product, counts, "{w} under {o}");
                assert!(product.is_unitriangular());
            }
        }
    }

    #[test]
    fn count_form_matches_brute_counts() {
        let sigma = Alphabet::abc();
        for w in oracle::all_words_up_to(&sigma, 6) {
            for o in oracle::all_orderings_brute(&sigma) {
                let m: ParikhMatrix<u64> = parikh_matrix_from_counts(&w, &o).unwrap();
                assert_eq!(m.rows(), oracle::parikh_matrix_brute(&w, &o));
            }
        }
    }

    #[test]
    fn three_orderings_suffice_for_short_words() {
        let sigma = Alphabet::abc();
        let three = sufficient_orderings(&sigma).unwrap();
        let six = all_orderings(&sigma);
        for n in 0..=7 {
            let words: Vec<Word> = oracle::all_words(&sigma, n).collect();
            // group by Parikh vector so only anagram pairs are compared
            let mut groups: std::collections::HashMap<Vec<usize>, Vec<ParikhSignature>> =
                Default::default();
            for w in &words {
                let sig = ParikhSignature::new(w, &six);
                groups
                    .entry(letter_counts(w.symbols(), 3))
                    .or_default()
                    .push(sig);
            }
            for group in groups.values() {
                for (i, x) in group.iter().enumerate() {
                    for y in &group[i + 1..] {
                        let by_three = (0..6)
                            .filter(|&o| three.contains(&six[o]))
                            .all(|o| x.0[o] == y.0[o]);
                        let by_six = x.0 == y.0;
                        assert_eq!(by_three, by_six);
                    }
                }
            }
        }
    }

    struct ParikhSignature(Vec<ParikhMatrix<u64>>);

    impl ParikhSignature {
        fn new(w: &Word, orderings: &[OrderedAlphabet]) -> Self {
            ParikhSignature(
                orderings
                    .iter()
                    .map(|o| parikh_matrix(w, o).unwrap())
                    .collect(),
            )
        }
    }

    #[test]
    fn fast_and_exhaustive_strong_paths_agree() {
        let sigma = Alphabet::abc();
        let words: Vec<Word> = oracle::all_words(&sigma, 5).collect();
        for w in &words {
            for v in &words {
                assert_eq!(
                    strongly_m_equivalent(w, v).unwrap(),
                    strongly_m_equivalent_all_orderings(w, v).unwrap()
                );
            }
        }
    }

    #[test]
    fn four_letter_alphabets_use_all_orderings() {
        let sigma = Alphabet::parse("abcd").unwrap();
        let w = sigma.parse_word("abdcba").unwrap();
        let v = sigma.parse_word("badcab").unwrap();
        assert_eq!(all_orderings(&sigma).len(), 24);
        assert_eq!(
            strongly_m_equivalent(&w, &v).unwrap(),
            oracle::strongly_equivalent_brute(&w, &v)
        );
    }

    fn word_strategy(max_len: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec(0usize..3, 0..=max_len).prop_map(|ix| {
            Alphabet::abc()
                .word(
                    ix.into_iter()
                        .map(|i| crate::words::Letter::from_index(i).unwrap()),
                )
                .unwrap()
        })
    }

    proptest! {
        #[test]
        fn mapping_is_a_morphism(v in word_strategy(10), w in word_strategy(10), o in 0usize..6) {
            let ordering = &all_orderings(&Alphabet::abc())[o];
            let pv: ParikhMatrix<u64> = parikh_matrix(&v, ordering).unwrap();
            let pw: ParikhMatrix<u64> = parikh_matrix(&w, ordering).unwrap();
            let pvw: ParikhMatrix<u64> = parikh_matrix(&v.concat(&w).unwrap(), ordering).unwrap();
            prop_assert_eq!(pv.mul(&pw).unwrap(), pvw);
        }

        #[test]
        fn product_of_letter_matrices(w in word_strategy(10)) {
            let ordering = OrderedAlphabet::natural(w.alphabet());
            let mut m: ParikhMatrix<u64> = ParikhMatrix::identity(4);
            for &l in w.symbols() {
                m = m.mul(&letter_matrix(ordering.rank(l), 3).unwrap()).unwrap();
            }
            prop_assert_eq!(m, parikh_matrix(&w, &ordering).unwrap());
        }

        #[test]
        fn strong_equivalence_is_an_equivalence(x in word_strategy(7), y in word_strategy(7), z in word_strategy(7)) {
            let r = |a: &Word, b: &Word| strongly_m_equivalent(a, b).unwrap();
            prop_assert!(r(&x, &x));
            prop_assert_eq!(r(&x, &y), r(&y, &x));
            if r(&x, &y) && r(&y, &z) {
                prop_assert!(r(&x, &z));
            }
        }
    }
}
