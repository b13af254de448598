//! Brute-force reference implementations, compiled only for tests
//! (feature `oracle`). Nothing here shares code with the production paths
//! it is used to check.

use itertools::Itertools;

use crate::words::{Alphabet, Letter, OrderedAlphabet, Word};

/// All words of length `n` over `alphabet`, in lexicographic order.
pub fn all_words(alphabet: &Alphabet, n: usize) -> impl Iterator<Item = Word> + '_ {
    let k = alphabet.len();
    let total = k.pow(n as u32);
    (0..total).map(move |mut code| {
        let mut symbols = vec![Letter::A; n];
        for slot in symbols.iter_mut().rev() {
            *slot = Letter::from_index(code % k).unwrap();
            code /= k;
        }
        alphabet.word(symbols).unwrap()
    })
}

/// All words of length at most `max_len`.
pub fn all_words_up_to(alphabet: &Alphabet, max_len: usize) -> impl Iterator<Item = Word> + '_ {
    (0..=max_len).flat_map(move |n| all_words(alphabet, n))
}

/// `|w|_v` by enumerating every increasing index tuple of length `|v|`.
pub fn count_subword_brute(w: &Word, v: &Word) -> u64 {
    (0..w.len())
        .combinations(v.len())
        .filter(|idx| {
            idx.iter()
                .zip(v.symbols())
                .all(|(&i, &l)| w.symbols()[i] == l)
        })
        .count() as u64
}

/// The Parikh matrix assembled entry by entry from brute subword counts.
pub fn parikh_matrix_brute(w: &Word, ordering: &OrderedAlphabet) -> Vec<Vec<u64>> {
    let k = ordering.len();
    let mut m = vec![vec![0u64; k + 1]; k + 1];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    for i in 1..=k {
        for (j, cell) in m[i - 1].iter_mut().enumerate().skip(i) {
            *cell = count_subword_brute(w, &ordering.run(i, j));
        }
    }
    m
}

/// Every ordering of the alphabet.
pub fn all_orderings_brute(alphabet: &Alphabet) -> Vec<OrderedAlphabet> {
    alphabet
        .letters()
        .permutations(alphabet.len())
        .map(|p| OrderedAlphabet::new(alphabet, p).unwrap())
        .collect()
}

/// Strong M-equivalence checked over all k! orderings with brute counts.
pub fn strongly_equivalent_brute(w: &Word, v: &Word) -> bool {
    all_orderings_brute(w.alphabet())
        .iter()
        .all(|o| parikh_matrix_brute(w, o) == parikh_matrix_brute(v, o))
}

/// Lexicographically smallest nonempty proper index set with zero sums in
/// both coordinates, by scanning every bitmask.
pub fn zero_subset_brute(pairs: &[(i64, i64)]) -> Option<Vec<usize>> {
    let n = pairs.len();
    let mut best: Option<Vec<usize>> = None;
    for mask in 1u64..(1u64 << n) - 1 {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let p: i64 = idx.iter().map(|&i| pairs[i].0).sum();
        let q: i64 = idx.iter().map(|&i| pairs[i].1).sum();
        if p == 0 && q == 0 && best.as_ref().is_none_or(|b| idx < *b) {
            best = Some(idx);
        }
    }
    best
}

/// All disjoint two-letter block pairs holding the same letters in opposite
/// orders, found by testing every pair of start positions.
pub fn alpha_beta_sites_brute(w: &Word) -> Vec<(usize, usize)> {
    let s = w.symbols();
    let n = s.len();
    let mut out = Vec::new();
    for i in 0..n.saturating_sub(1) {
        for j in 0..n.saturating_sub(1) {
            if j >= i + 2 && s[i] != s[i + 1] && s[i] == s[j + 1] && s[i + 1] == s[j] {
                out.push((i, j));
            }
        }
    }
    out
}

/// Swaps the two letters of each block starting at the given positions.
pub fn swap_at(w: &Word, positions: &[usize]) -> Word {
    let mut s = w.symbols().to_vec();
    for &p in positions {
        s.swap(p, p + 1);
    }
    w.alphabet().word(s).unwrap()
}
