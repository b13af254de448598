//! Alphabets, words and scattered-subword counting.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Count;

/// Largest supported alphabet; letters are stored as `u8` indices.
pub const MAX_LETTERS: usize = 255;

/// A letter, identified by its index in the alphabet's registration order.
///
/// For ternary alphabets the indices 0, 1, 2 play the roles of `a`, `b`, `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u8);

impl Letter {
    pub const A: Letter = Letter(0);
    pub const B: Letter = Letter(1);
    pub const C: Letter = Letter(2);

    pub fn from_index(index: usize) -> Option<Letter> {
        u8::try_from(index).ok().map(Letter)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// The remaining letter of a ternary alphabet once `x` and `y` are taken.
    #[inline]
    pub fn third(x: Letter, y: Letter) -> Letter {
        debug_assert!(x != y && x.0 < 3 && y.0 < 3);
        Letter(3 - x.0 - y.0)
    }
}

/// A finite alphabet of distinct characters, kept in registration order.
///
/// Cloning is cheap; the letters live behind an `Arc`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alphabet(Arc<[char]>);

impl Alphabet {
    pub fn new<I: IntoIterator<Item = char>>(letters: I) -> Result<Alphabet> {
        let letters: Vec<char> = letters.into_iter().collect();
        if letters.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        if letters.len() > MAX_LETTERS {
            return Err(Error::AlphabetTooLarge(letters.len()));
        }
        for (i, ch) in letters.iter().enumerate() {
            if letters[..i].contains(ch) {
                return Err(Error::DuplicateLetter(*ch));
            }
        }
        Ok(Alphabet(letters.into()))
    }

    /// Parses an alphabet written as a string of distinct characters, e.g. `"abc"`.
    pub fn parse(text: &str) -> Result<Alphabet> {
        Alphabet::new(text.chars())
    }

    /// The ternary alphabet `{a, b, c}`.
    pub fn abc() -> Alphabet {
        Alphabet(Arc::from(['a', 'b', 'c']))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn chars(&self) -> &[char] {
        &self.0
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.len()).map(|i| Letter(i as u8))
    }

    pub fn letter(&self, ch: char) -> Option<Letter> {
        self.0
            .iter()
            .position(|&c| c == ch)
            .map(|i| Letter(i as u8))
    }

    pub fn char_of(&self, letter: Letter) -> char {
        self.0[letter.index()]
    }

    pub fn is_ternary(&self) -> bool {
        self.len() == 3
    }

    pub fn require_ternary(&self) -> Result<()> {
        if self.is_ternary() {
            Ok(())
        } else {
            Err(Error::TernaryOnly(self.len()))
        }
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        parse_word(text, self)
    }

    /// Builds a word from letter indices, rejecting indices outside the alphabet.
    pub fn word<I: IntoIterator<Item = Letter>>(&self, symbols: I) -> Result<Word> {
        let symbols: Vec<Letter> = symbols.into_iter().collect();
        if let Some(pos) = symbols.iter().position(|l| l.index() >= self.len()) {
            return Err(Error::PositionOutOfRange {
                pos,
                len: symbols.len(),
            });
        }
        Ok(Word {
            symbols,
            alphabet: self.clone(),
        })
    }

    pub fn empty_word(&self) -> Word {
        Word {
            symbols: Vec::new(),
            alphabet: self.clone(),
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|c| write!(f, "{c}"))
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({self})")
    }
}

/// A total order on an alphabet's letters.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrderedAlphabet {
    alphabet: Alphabet,
    // order[r] is the letter of rank r + 1
    order: Vec<Letter>,
    // rank_index[letter] is the 0-based rank of the letter
    rank_index: Vec<usize>,
}

impl OrderedAlphabet {
    pub fn new(alphabet: &Alphabet, order: Vec<Letter>) -> Result<OrderedAlphabet> {
        let k = alphabet.len();
        let mismatch = || Error::OrderingMismatch {
            ordering: order
                .iter()
                .map(|l| {
                    if l.index() < k {
                        alphabet.char_of(*l).to_string()
                    } else {
                        format!("#{}", l.index())
                    }
                })
                .collect::<Vec<_>>()
                .join("<"),
            alphabet: alphabet.to_string(),
        };
        if order.len() != k {
            return Err(mismatch());
        }
        let mut rank_index = vec![usize::MAX; k];
        for (r, l) in order.iter().enumerate() {
            if l.index() >= k || rank_index[l.index()] != usize::MAX {
                return Err(mismatch());
            }
            rank_index[l.index()] = r;
        }
        Ok(OrderedAlphabet {
            alphabet: alphabet.clone(),
            order,
            rank_index,
        })
    }

    /// The registration order `a_1 < a_2 < … < a_k`.
    pub fn natural(alphabet: &Alphabet) -> OrderedAlphabet {
        OrderedAlphabet::new(alphabet, alphabet.letters().collect())
            .expect("registration order is a permutation")
    }

    /// Parses `"b<a<c"` against `alphabet`.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<OrderedAlphabet> {
        let mismatch = || Error::OrderingMismatch {
            ordering: text.to_string(),
            alphabet: alphabet.to_string(),
        };
        let mut order = Vec::with_capacity(alphabet.len());
        for part in text.split('<') {
            let mut chars = part.trim().chars();
            let (Some(ch), None) = (chars.next(), chars.next()) else {
                return Err(mismatch());
            };
            order.push(alphabet.letter(ch).ok_or_else(mismatch)?);
        }
        OrderedAlphabet::new(alphabet, order).map_err(|_| mismatch())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Letters from smallest to largest.
    pub fn order(&self) -> &[Letter] {
        &self.order
    }

    /// 1-based rank of `letter`.
    pub fn rank(&self, letter: Letter) -> usize {
        self.rank_index[letter.index()] + 1
    }

    #[inline]
    pub(crate) fn rank_index(&self, letter: Letter) -> usize {
        self.rank_index[letter.index()]
    }

    /// The run `a_i a_{i+1} … a_j` for 1-based ranks `i ≤ j`.
    pub fn run(&self, i: usize, j: usize) -> Word {
        Word {
            symbols: self.order[i - 1..j].to_vec(),
            alphabet: self.alphabet.clone(),
        }
    }
}

impl fmt::Display for OrderedAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, l) in self.order.iter().enumerate() {
            if r > 0 {
                f.write_str("<")?;
            }
            write!(f, "{}", self.alphabet.char_of(*l))?;
        }
        Ok(())
    }
}

impl fmt::Debug for OrderedAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrderedAlphabet({self})")
    }
}

/// A finite word over a declared alphabet.
///
/// Words compare lexicographically by letter index, i.e. by the alphabet's
/// registration order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    symbols: Vec<Letter>,
    alphabet: Alphabet,
}

impl Word {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn symbols(&self) -> &[Letter] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<Letter> {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn get(&self, pos: usize) -> Option<Letter> {
        self.symbols.get(pos).copied()
    }

    /// Number of occurrences of `letter`.
    pub fn occurrences(&self, letter: Letter) -> usize {
        self.symbols.iter().filter(|&&l| l == letter).count()
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        same_alphabet(self, other)?;
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(&other.symbols);
        Ok(self.with_symbols(symbols))
    }

    /// The factor `w[start..end)`.
    pub fn slice(&self, start: usize, end: usize) -> Word {
        self.with_symbols(self.symbols[start..end].to_vec())
    }

    pub(crate) fn with_symbols(&self, symbols: Vec<Letter>) -> Word {
        Word {
            symbols,
            alphabet: self.alphabet.clone(),
        }
    }

    pub(crate) fn check_pos(&self, pos: usize) -> Result<()> {
        if pos < self.len() {
            Ok(())
        } else {
            Err(Error::PositionOutOfRange {
                pos,
                len: self.len(),
            })
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.symbols
            .iter()
            .try_for_each(|l| write!(f, "{}", self.alphabet.char_of(*l)))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_string())
    }
}

pub(crate) fn same_alphabet(w: &Word, v: &Word) -> Result<()> {
    if w.alphabet == v.alphabet {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch)
    }
}

/// Parses `text` letter by letter against `alphabet`.
pub fn parse_word(text: &str, alphabet: &Alphabet) -> Result<Word> {
    let symbols = text
        .chars()
        .enumerate()
        .map(|(pos, ch)| alphabet.letter(ch).ok_or(Error::Membership { ch, pos }))
        .collect::<Result<Vec<_>>>()?;
    Ok(Word {
        symbols,
        alphabet: alphabet.clone(),
    })
}

/// `|w|_v`: the number of strictly increasing position tuples of `w` that
/// spell `v`. `|w|_λ = 1`.
pub fn count_subword<C: Count>(w: &Word, v: &Word) -> Result<C> {
    same_alphabet(w, v)?;
    count_subword_in(&w.symbols, &v.symbols)
}

pub(crate) fn count_subword_in<C: Count>(w: &[Letter], v: &[Letter]) -> Result<C> {
    if v.len() > w.len() {
        return Ok(C::zero());
    }
    // ways[j] = occurrences of v[..j] in the prefix of w read so far
    let mut ways = vec![C::zero(); v.len() + 1];
    ways[0] = C::one();
    for &x in w {
        for j in (0..v.len()).rev() {
            if v[j] == x && !ways[j].is_zero() {
                ways[j + 1] = ways[j + 1].add_checked(&ways[j])?;
            }
        }
    }
    Ok(ways.pop().expect("table is never empty"))
}

/// Number of contiguous occurrences of `v` in `w`.
pub fn count_factor(w: &Word, v: &Word) -> Result<usize> {
    same_alphabet(w, v)?;
    if v.is_empty() {
        return Err(Error::Degenerate("factor must be nonempty"));
    }
    Ok(w.symbols
        .windows(v.len())
        .filter(|win| *win == v.symbols())
        .count())
}

/// Letter counts of a word, indexed by rank in an ordered alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParikhVector(Vec<usize>);

impl ParikhVector {
    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for ParikhVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

pub fn parikh_vector(w: &Word, ordering: &OrderedAlphabet) -> Result<ParikhVector> {
    if w.alphabet != ordering.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    let mut counts = vec![0; ordering.len()];
    for &l in &w.symbols {
        counts[ordering.rank_index(l)] += 1;
    }
    Ok(ParikhVector(counts))
}

/// Letter counts in registration order; equal for anagrams.
pub(crate) fn letter_counts(w: &[Letter], k: usize) -> Vec<usize> {
    let mut counts = vec![0; k];
    for &l in w {
        counts[l.index()] += 1;
    }
    counts
}
