//! Rewriting rules on words.
//!
//! Every rule here rewrites a handful of two-letter blocks in place, so
//! positions never shift and a multi-block rule can be applied against the
//! source word's positions in one pass. Apart from E1 and SE, which work over
//! any alphabet, the rules are stated for ternary alphabets and read the
//! letters `a`, `b`, `c` from the alphabet's registration order.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg};

use crate::error::{Error, Result};
use crate::irreducibility::pq_pairs_of;
use crate::scalar::to_signed;
use crate::words::{count_subword_in, same_alphabet, Letter, OrderedAlphabet, Word};

#[cfg(debug_assertions)]
use crate::parikh::strongly_m_equivalent;

/// Which of the two letter orders a block holds, relative to a declared pair
/// `(x, y)`: `Ab` reads `xy`, `Ba` reads `yx`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockKind {
    Ab,
    Ba,
}

impl BlockKind {
    pub fn flipped(self) -> BlockKind {
        match self {
            BlockKind::Ab => BlockKind::Ba,
            BlockKind::Ba => BlockKind::Ab,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SwapBlock {
    pub pos: usize,
    pub kind: BlockKind,
}

/// Disjoint two-letter blocks over one letter pair, sorted by position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SwapSpec {
    pair: (Letter, Letter),
    blocks: Vec<SwapBlock>,
}

impl SwapSpec {
    pub fn new(pair: (Letter, Letter), mut blocks: Vec<SwapBlock>) -> Result<SwapSpec> {
        if pair.0 == pair.1 {
            return Err(Error::DegeneratePair);
        }
        blocks.sort_by_key(|b| b.pos);
        for w in blocks.windows(2) {
            if w[1].pos < w[0].pos + 2 {
                return Err(Error::Overlap {
                    first: w[0].pos,
                    second: w[1].pos,
                });
            }
        }
        Ok(SwapSpec { pair, blocks })
    }

    /// Reads the block kinds for `positions` off `w`.
    pub fn locate(w: &Word, pair: (Letter, Letter), positions: &[usize]) -> Result<SwapSpec> {
        if pair.0 == pair.1 {
            return Err(Error::DegeneratePair);
        }
        let k = w.alphabet().len();
        if pair.0.index() >= k || pair.1.index() >= k {
            return Err(Error::Pattern {
                pos: 0,
                detail: "swap pair uses letters outside the alphabet".into(),
            });
        }
        let mut blocks = Vec::with_capacity(positions.len());
        for &pos in positions {
            w.check_pos(pos + 1)?;
            blocks.push(SwapBlock {
                pos,
                kind: block_kind(w, pos, pair)?,
            });
        }
        SwapSpec::new(pair, blocks)
    }

    pub fn pair(&self) -> (Letter, Letter) {
        self.pair
    }

    pub fn blocks(&self) -> &[SwapBlock] {
        &self.blocks
    }

    pub fn positions(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.pos).collect()
    }

    /// Number of factors, `t`, when the blocks are paired up.
    pub fn t(&self) -> usize {
        self.blocks.len() / 2
    }

    /// The letter outside the pair (ternary alphabets).
    pub fn third_letter(&self) -> Letter {
        Letter::third(self.pair.0, self.pair.1)
    }

    /// The same blocks as they read after the swap.
    pub fn flipped(&self) -> SwapSpec {
        SwapSpec {
            pair: self.pair,
            blocks: self
                .blocks
                .iter()
                .map(|b| SwapBlock {
                    pos: b.pos,
                    kind: b.kind.flipped(),
                })
                .collect(),
        }
    }

    /// The blocks at the given indices (into [`blocks`](Self::blocks)).
    pub fn subset(&self, indices: &[usize]) -> SwapSpec {
        let mut blocks: Vec<SwapBlock> = indices.iter().map(|&i| self.blocks[i]).collect();
        blocks.sort_by_key(|b| b.pos);
        SwapSpec {
            pair: self.pair,
            blocks,
        }
    }

    /// Checks that every block sits inside `w` and holds the declared letters.
    pub fn validate_on(&self, w: &Word) -> Result<()> {
        let k = w.alphabet().len();
        if self.pair.0.index() >= k || self.pair.1.index() >= k {
            return Err(Error::Pattern {
                pos: 0,
                detail: "swap pair uses letters outside the alphabet".into(),
            });
        }
        for b in &self.blocks {
            w.check_pos(b.pos + 1)?;
            let found = block_kind(w, b.pos, self.pair)?;
            if found != b.kind {
                return Err(Error::Pattern {
                    pos: b.pos,
                    detail: format!("block kind is {found:?}, spec says {:?}", b.kind),
                });
            }
        }
        Ok(())
    }

    /// Exchanges the two letters of every block, without checking any rule.
    pub fn rewrite(&self, w: &Word) -> Result<Word> {
        self.validate_on(w)?;
        let mut s = w.symbols().to_vec();
        for b in &self.blocks {
            s.swap(b.pos, b.pos + 1);
        }
        Ok(w.with_symbols(s))
    }
}

fn block_kind(w: &Word, pos: usize, (x, y): (Letter, Letter)) -> Result<BlockKind> {
    let s = w.symbols();
    match (s[pos], s[pos + 1]) {
        (p, q) if p == x && q == y => Ok(BlockKind::Ab),
        (p, q) if p == y && q == x => Ok(BlockKind::Ba),
        _ => Err(Error::Pattern {
            pos,
            detail: format!(
                "expected {a}{b} or {b}{a}, found {}",
                w.slice(pos, pos + 2),
                a = w.alphabet().char_of(x),
                b = w.alphabet().char_of(y),
            ),
        }),
    }
}

/// Start positions of the two-letter blocks by which `v` differs from `w`,
/// or `None` if the difference is not a set of disjoint adjacent
/// transpositions.
pub(crate) fn transposed_blocks(w: &[Letter], v: &[Letter]) -> Option<Vec<usize>> {
    debug_assert_eq!(w.len(), v.len());
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < w.len() {
        if w[i] == v[i] {
            i += 1;
            continue;
        }
        // a run of differing positions must split into transposed pairs
        if i + 1 >= w.len() || w[i] != v[i + 1] || w[i + 1] != v[i] {
            return None;
        }
        blocks.push(i);
        i += 2;
    }
    Some(blocks)
}

/// Rule E1: exchange two adjacent letters that are not consecutive in the
/// ordering.
pub fn apply_e1(w: &Word, pos: usize, ordering: &OrderedAlphabet) -> Result<Word> {
    if w.alphabet() != ordering.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    w.check_pos(pos + 1)?;
    let (x, y) = (w.symbols()[pos], w.symbols()[pos + 1]);
    if ordering.rank(x).abs_diff(ordering.rank(y)) < 2 {
        return Err(Error::NotE1 {
            pos,
            first: w.alphabet().char_of(x),
            second: w.alphabet().char_of(y),
        });
    }
    let mut s = w.symbols().to_vec();
    s.swap(pos, pos + 1);
    let out = w.with_symbols(s);
    debug_assert!(crate::parikh::m_equivalent(w, &out, ordering).unwrap_or(true));
    Ok(out)
}

/// Checks that `first < second` start disjoint blocks reading `xy` and `yx`
/// for some distinct `x`, `y`; returns the interior range.
fn site_interior(w: &Word, first: usize, second: usize) -> Option<std::ops::Range<usize>> {
    let s = w.symbols();
    if second < first + 2 || second + 1 >= s.len() {
        return None;
    }
    let (x, y) = (s[first], s[first + 1]);
    (x != y && s[second] == y && s[second + 1] == x).then_some(first + 2..second)
}

fn swap_two(w: &Word, first: usize, second: usize) -> Word {
    let mut s = w.symbols().to_vec();
    s.swap(first, first + 1);
    s.swap(second, second + 1);
    w.with_symbols(s)
}

/// Rule SE: `x·ab·y·ba·z → x·ba·y·ab·z` with `y` over `{a, b}` only.
pub fn apply_se(w: &Word, first: usize, second: usize) -> Result<Word> {
    let (first, second) = (first.min(second), first.max(second));
    let err = || Error::NotSe { first, second };
    let interior = site_interior(w, first, second).ok_or_else(err)?;
    let s = w.symbols();
    let (x, y) = (s[first], s[first + 1]);
    if s[interior].iter().any(|&l| l != x && l != y) {
        return Err(err());
    }
    let out = swap_two(w, first, second);
    #[cfg(debug_assertions)]
    debug_assert!(strongly_m_equivalent(w, &out).unwrap_or(true));
    Ok(out)
}

/// Checks the side conditions of the classic (2·t) rule for the ternary
/// ordering `a < b < c`: `spec` swaps the middle letter with one outer
/// letter, and `grouping` pairs the blocks (by index) into factors.
///
/// Returns `Ok(false)` when some block is left unpaired, a factor's blocks
/// have the same orientation, or the interiors do not balance.
pub fn validate_classic_2t(
    w: &Word,
    spec: &SwapSpec,
    grouping: &[(usize, usize)],
    ordering: &OrderedAlphabet,
) -> Result<bool> {
    if w.alphabet() != ordering.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    w.alphabet().require_ternary()?;
    let middle = ordering.order()[1];
    let (x, y) = spec.pair();
    let outer = match (x == middle, y == middle) {
        (true, false) => y,
        (false, true) => x,
        _ => return Err(Error::NotClassicPair),
    };
    spec.validate_on(w)?;
    if spec.blocks().is_empty() {
        return Err(Error::EmptySpec);
    }

    let n = spec.blocks().len();
    let mut used = vec![false; n];
    for &(i, j) in grouping {
        if i >= n || j >= n {
            return Err(Error::MalformedGrouping(format!(
                "block index {} out of range",
                i.max(j)
            )));
        }
        if i == j || used[i] || used[j] {
            return Err(Error::MalformedGrouping(format!(
                "block {} used more than once",
                if i == j || used[i] { i } else { j }
            )));
        }
        used[i] = true;
        used[j] = true;
    }
    if used.contains(&false) {
        return Ok(false);
    }

    let weight = Letter::third(outer, middle);
    // a block "reads αb" when the outer letter comes first
    let outer_first = |b: &SwapBlock| w.symbols()[b.pos] == outer;
    let (mut leading, mut trailing) = (0usize, 0usize);
    for &(i, j) in grouping {
        let (lo, hi) = {
            let (p, q) = (&spec.blocks()[i], &spec.blocks()[j]);
            if p.pos < q.pos {
                (p, q)
            } else {
                (q, p)
            }
        };
        if lo.kind == hi.kind {
            return Ok(false);
        }
        let n_weight = w.symbols()[lo.pos + 2..hi.pos]
            .iter()
            .filter(|&&l| l == weight)
            .count();
        if outer_first(lo) {
            leading += n_weight;
        } else {
            trailing += n_weight;
        }
    }
    Ok(leading == trailing)
}

/// Applies a strong (2·t) transformation: every block of `spec` is reversed
/// simultaneously.
///
/// The rule holds exactly when the (p, q) pairs of the blocks sum to zero in
/// both coordinates; any pairing of the blocks into factors then balances.
pub fn apply_strong_2t(w: &Word, spec: &SwapSpec) -> Result<Word> {
    w.alphabet().require_ternary()?;
    spec.validate_on(w)?;
    if spec.blocks().is_empty() {
        return Err(Error::EmptySpec);
    }
    let (sum_p, sum_q) = pq_pairs_of(w.symbols(), spec)
        .iter()
        .fold((0, 0), |(p, q), pair| (p + pair.p, q + pair.q));
    if sum_p != 0 || sum_q != 0 {
        return Err(Error::NotStrong2t { sum_p, sum_q });
    }
    let out = spec.rewrite(w)?;
    #[cfg(debug_assertions)]
    debug_assert!(strongly_m_equivalent(w, &out).unwrap_or(true));
    Ok(out)
}

/// Shape of a strong (3·t) factor, named by its first two letters.
///
/// `Ab`, `Bc`, `Ca` are the forward shapes `ab…ba`, `bc…cb`, `ca…ac`;
/// `Ba`, `Cb`, `Ac` are their reversals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorClass {
    Ab,
    Bc,
    Ca,
    Ba,
    Cb,
    Ac,
}

impl FactorClass {
    pub const ALL: [FactorClass; 6] = [
        FactorClass::Ab,
        FactorClass::Bc,
        FactorClass::Ca,
        FactorClass::Ba,
        FactorClass::Cb,
        FactorClass::Ac,
    ];

    /// The first two letters of the factor.
    pub fn lead(self) -> (Letter, Letter) {
        use FactorClass::*;
        let (a, b, c) = (Letter::A, Letter::B, Letter::C);
        match self {
            Ab => (a, b),
            Bc => (b, c),
            Ca => (c, a),
            Ba => (b, a),
            Cb => (c, b),
            Ac => (a, c),
        }
    }

    pub fn from_lead(x: Letter, y: Letter) -> Option<FactorClass> {
        FactorClass::ALL.into_iter().find(|c| c.lead() == (x, y))
    }

    pub fn is_forward(self) -> bool {
        matches!(self, FactorClass::Ab | FactorClass::Bc | FactorClass::Ca)
    }

    /// 0 for `{a,b}` factors, 1 for `{b,c}`, 2 for `{c,a}`.
    pub fn group(self) -> usize {
        use FactorClass::*;
        match self {
            Ab | Ba => 0,
            Bc | Cb => 1,
            Ca | Ac => 2,
        }
    }

    /// The letter whose interior count enters the balance condition.
    pub fn weight_letter(self) -> Letter {
        let (x, y) = self.lead();
        Letter::third(x, y)
    }

    pub fn name(self) -> &'static str {
        use FactorClass::*;
        match self {
            Ab => "AB",
            Bc => "BC",
            Ca => "CA",
            Ba => "BA",
            Cb => "CB",
            Ac => "AC",
        }
    }

    pub fn parse(text: &str) -> Option<FactorClass> {
        FactorClass::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(text))
    }
}

impl fmt::Display for FactorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One factor `w[start..=end]` of a strong (3·t) transformation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TripleFactor {
    pub start: usize,
    pub end: usize,
    pub class: FactorClass,
}

impl TripleFactor {
    pub fn boundary(&self) -> [usize; 4] {
        [self.start, self.start + 1, self.end - 1, self.end]
    }
}

/// Factors of a strong (3·t) transformation, sorted by start.
///
/// Only the four boundary positions of each factor are reserved; a factor's
/// interior may contain boundary blocks of other factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TripleFactorSpec {
    factors: Vec<TripleFactor>,
}

impl TripleFactorSpec {
    pub fn new(mut factors: Vec<TripleFactor>) -> Result<TripleFactorSpec> {
        if factors.is_empty() {
            return Err(Error::EmptySpec);
        }
        if factors.iter().any(|f| f.end < f.start + 3) {
            let f = factors.iter().find(|f| f.end < f.start + 3).unwrap();
            return Err(Error::Overlap {
                first: f.start,
                second: f.end.saturating_sub(1),
            });
        }
        let forward = factors[0].class.is_forward();
        if factors.iter().any(|f| f.class.is_forward() != forward) {
            return Err(Error::MixedOrientation);
        }
        factors.sort_by_key(|f| (f.start, f.end));
        let mut taken: Vec<usize> = factors.iter().flat_map(|f| f.boundary()).collect();
        taken.sort_unstable();
        if let Some(w) = taken.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Overlap {
                first: w[0],
                second: w[1],
            });
        }
        Ok(TripleFactorSpec { factors })
    }

    pub fn factors(&self) -> &[TripleFactor] {
        &self.factors
    }

    pub fn t(&self) -> usize {
        self.factors.len()
    }

    pub fn is_forward(&self) -> bool {
        self.factors[0].class.is_forward()
    }

    pub fn validate_on(&self, w: &Word) -> Result<()> {
        w.alphabet().require_ternary()?;
        let s = w.symbols();
        for f in &self.factors {
            w.check_pos(f.end)?;
            let (x, y) = f.class.lead();
            let ok = s[f.start] == x && s[f.start + 1] == y && s[f.end - 1] == y && s[f.end] == x;
            if !ok {
                return Err(Error::Pattern {
                    pos: f.start,
                    detail: format!(
                        "factor {} does not have the {} shape",
                        w.slice(f.start, f.end + 1),
                        f.class
                    ),
                });
            }
        }
        Ok(())
    }

    /// Interior weights per group (`{a,b}`: count of `c`, `{b,c}`: count of
    /// `a`, `{c,a}`: count of `b`), summed over the factors of each group.
    pub fn sums(&self, w: &Word) -> Result<[i64; 3]> {
        self.validate_on(w)?;
        let mut sums = [0i64; 3];
        for f in &self.factors {
            let weight = f.class.weight_letter();
            let n = w.symbols()[f.start + 2..f.end - 1]
                .iter()
                .filter(|&&l| l == weight)
                .count();
            sums[f.class.group()] += n as i64;
        }
        Ok(sums)
    }

    /// Reverses both boundary blocks of every factor, without checking balance.
    pub fn rewrite(&self, w: &Word) -> Result<Word> {
        self.validate_on(w)?;
        let mut s = w.symbols().to_vec();
        for f in &self.factors {
            s.swap(f.start, f.start + 1);
            s.swap(f.end - 1, f.end);
        }
        Ok(w.with_symbols(s))
    }
}

/// Applies a strong (3·t) transformation. All factors must share one
/// orientation and the three group sums must be equal; an empty group
/// contributes 0.
pub fn apply_strong_3t(w: &Word, spec: &TripleFactorSpec) -> Result<Word> {
    let sums = spec.sums(w)?;
    if !(sums[0] == sums[1] && sums[1] == sums[2]) {
        return Err(Error::NotStrong3t { sums });
    }
    let out = spec.rewrite(w)?;
    #[cfg(debug_assertions)]
    debug_assert!(strongly_m_equivalent(w, &out).unwrap_or(true));
    Ok(out)
}

/// Changes `(δ_abc, δ_acb, δ_bac)` with `δ_v = |w|_v − |w'|_v` across an
/// αβ-step `w → w'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Counter {
    pub abc: i64,
    pub acb: i64,
    pub bac: i64,
}

impl Counter {
    pub const ZERO: Counter = Counter {
        abc: 0,
        acb: 0,
        bac: 0,
    };

    pub fn new(abc: i64, acb: i64, bac: i64) -> Counter {
        Counter { abc, acb, bac }
    }

    pub fn is_zero(&self) -> bool {
        *self == Counter::ZERO
    }

    /// The counter from subword counts of `abc`, `acb`, `bac` in both words.
    pub fn between(w: &Word, v: &Word) -> Result<Counter> {
        same_alphabet(w, v)?;
        w.alphabet().require_ternary()?;
        let (a, b, c) = (Letter::A, Letter::B, Letter::C);
        let delta = |pattern: [Letter; 3]| -> Result<i64> {
            let x = to_signed(count_subword_in::<u64>(w.symbols(), &pattern)?)?;
            let y = to_signed(count_subword_in::<u64>(v.symbols(), &pattern)?)?;
            Ok(x - y)
        };
        Ok(Counter {
            abc: delta([a, b, c])?,
            acb: delta([a, c, b])?,
            bac: delta([b, a, c])?,
        })
    }
}

impl fmt::Display for Counter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.abc, self.acb, self.bac)
    }
}

impl Add for Counter {
    type Output = Counter;
    fn add(self, rhs: Counter) -> Counter {
        Counter {
            abc: self.abc + rhs.abc,
            acb: self.acb + rhs.acb,
            bac: self.bac + rhs.bac,
        }
    }
}

impl AddAssign for Counter {
    fn add_assign(&mut self, rhs: Counter) {
        *self = *self + rhs;
    }
}

impl Neg for Counter {
    type Output = Counter;
    fn neg(self) -> Counter {
        Counter {
            abc: -self.abc,
            acb: -self.acb,
            bac: -self.bac,
        }
    }
}

impl Sum for Counter {
    fn sum<I: Iterator<Item = Counter>>(iter: I) -> Counter {
        iter.fold(Counter::ZERO, Add::add)
    }
}

/// Counter of the αβ-step at the site `(first, second)` of a ternary word,
/// from the third-letter count of the interior alone.
pub(crate) fn alpha_beta_counter(s: &[Letter], first: usize, second: usize) -> Counter {
    let (x, y) = (s[first], s[first + 1]);
    let z = Letter::third(x, y);
    let n = s[first + 2..second].iter().filter(|&&l| l == z).count() as i64;
    let (a, b, c) = (Letter::A, Letter::B, Letter::C);
    match (x, y) {
        (p, q) if (p, q) == (a, b) => Counter::new(n, 0, -n),
        (p, q) if (p, q) == (b, a) => Counter::new(-n, 0, n),
        (p, q) if (p, q) == (b, c) => Counter::new(-n, n, 0),
        (p, q) if (p, q) == (c, b) => Counter::new(n, -n, 0),
        (p, q) if (p, q) == (c, a) => Counter::new(0, -n, n),
        _ => Counter::new(0, n, -n), // (a, c)
    }
}

/// αβ-step `x·αβ·y·βα·z → x·βα·y·αβ·z` at blocks starting at `first` and
/// `second` (in either order), together with its counter.
pub fn apply_alpha_beta(w: &Word, first: usize, second: usize) -> Result<(Word, Counter)> {
    w.alphabet().require_ternary()?;
    let (first, second) = (first.min(second), first.max(second));
    site_interior(w, first, second).ok_or(Error::NotAlphaBeta { first, second })?;
    let counter = alpha_beta_counter(w.symbols(), first, second);
    Ok((swap_two(w, first, second), counter))
}

/// Predicted `|w|_v − |w'|_v` for the six arrangements of `a`, `b`, `c` when
/// `w = x·ab·y·ba·z` becomes `w' = x·ba·y·ab·z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PairSwapDeltas {
    pub abc: i64,
    pub cba: i64,
    pub bac: i64,
    pub cab: i64,
    pub acb: i64,
    pub bca: i64,
}

impl PairSwapDeltas {
    /// Differences measured by counting subwords of both words.
    pub fn measured(w: &Word, v: &Word) -> Result<PairSwapDeltas> {
        same_alphabet(w, v)?;
        w.alphabet().require_ternary()?;
        let (a, b, c) = (Letter::A, Letter::B, Letter::C);
        let delta = |pattern: [Letter; 3]| -> Result<i64> {
            Ok(to_signed(count_subword_in::<u64>(w.symbols(), &pattern)?)?
                - to_signed(count_subword_in::<u64>(v.symbols(), &pattern)?)?)
        };
        Ok(PairSwapDeltas {
            abc: delta([a, b, c])?,
            cba: delta([c, b, a])?,
            bac: delta([b, a, c])?,
            cab: delta([c, a, b])?,
            acb: delta([a, c, b])?,
            bca: delta([b, c, a])?,
        })
    }
}

/// Predicts the six deltas of swapping an `ab` block at `first` with a `ba`
/// block at `second`: `abc` and `cba` drop by `|y|_c`, `bac` and `cab` grow
/// by `|y|_c`, `acb` and `bca` are unchanged.
pub fn predict_pair_swap_deltas(w: &Word, first: usize, second: usize) -> Result<PairSwapDeltas> {
    w.alphabet().require_ternary()?;
    let s = w.symbols();
    let ok = site_interior(w, first, second).is_some()
        && s[first] == Letter::A
        && s[first + 1] == Letter::B;
    if !ok {
        return Err(Error::Pattern {
            pos: first,
            detail: "expected an ab block followed later by a ba block".into(),
        });
    }
    let n = s[first + 2..second]
        .iter()
        .filter(|&&l| l == Letter::C)
        .count() as i64;
    Ok(PairSwapDeltas {
        abc: n,
        cba: n,
        bac: -n,
        cab: -n,
        acb: 0,
        bca: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::parikh::{all_orderings, m_equivalent};
    use crate::words::Alphabet;
    use proptest::prelude::*;

    fn abc(text: &str) -> Word {
        Alphabet::abc().parse_word(text).unwrap()
    }

    fn order(text: &str) -> OrderedAlphabet {
        OrderedAlphabet::parse(text, &Alphabet::abc()).unwrap()
    }

    const AB: (Letter, Letter) = (Letter::A, Letter::B);

    fn swap(w: &str, positions: &[usize]) -> SwapSpec {
        let w = abc(w);
        let (x, y) = (w.symbols()[positions[0]], w.symbols()[positions[0] + 1]);
        SwapSpec::locate(&w, (x, y), positions).unwrap()
    }

    fn triple(spans: &[(usize, usize, &str)]) -> TripleFactorSpec {
        TripleFactorSpec::new(
            spans
                .iter()
                .map(|&(start, end, class)| TripleFactor {
                    start,
                    end,
                    class: FactorClass::parse(class).unwrap(),
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn e1_examples() {
        assert_eq!(apply_e1(&abc("ac"), 0, &order("a<b<c")).unwrap(), abc("ca"));
        assert!(matches!(
            apply_e1(&abc("bacb"), 1, &order("a<c<b")),
            Err(Error::NotE1 { pos: 1, .. })
        ));
        assert!(matches!(
            apply_e1(&abc("acb"), 1, &order("a<b<c")),
            Err(Error::NotE1 { .. })
        ));
        assert!(matches!(
            apply_e1(&abc("ac"), 1, &order("a<b<c")),
            Err(Error::PositionOutOfRange { .. })
        ));
        assert!(apply_e1(&abc("aa"), 0, &order("a<b<c")).is_err());
    }

    #[test]
    fn e1_preserves_the_matrix_exhaustively() {
        let sigma = Alphabet::abc();
        for o in all_orderings(&sigma) {
            for w in oracle::all_words_up_to(&sigma, 6) {
                for pos in 0..w.len().saturating_sub(1) {
                    if let Ok(v) = apply_e1(&w, pos, &o) {
                        assert!(m_equivalent(&w, &v, &o).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn swap_spec_validation() {
        let w = abc("abcba");
        let spec = SwapSpec::locate(&w, AB, &[3, 0]).unwrap();
        assert_eq!(spec.positions(), vec![0, 3]);
        assert_eq!(spec.blocks()[1].kind, BlockKind::Ba);
        assert_eq!(
            SwapSpec::locate(&abc("aba"), AB, &[0, 1]),
            Err(Error::Overlap {
                first: 0,
                second: 1
            })
        );
        assert!(matches!(
            SwapSpec::locate(&w, AB, &[1]),
            Err(Error::Pattern { pos: 1, .. })
        ));
        assert!(matches!(
            SwapSpec::locate(&w, AB, &[4]),
            Err(Error::PositionOutOfRange { .. })
        ));
        assert_eq!(
            SwapSpec::locate(&w, (Letter::A, Letter::A), &[0]),
            Err(Error::DegeneratePair)
        );
    }

    #[test]
    fn classic_2t_examples() {
        let natural = order("a<b<c");
        let w = abc("abcba");
        let spec = SwapSpec::locate(&w, AB, &[0, 3]).unwrap();
        // interior c is counted on one side only, so the rule does not hold,
        // and indeed the rewritten word has a different matrix
        assert!(!validate_classic_2t(&w, &spec, &[(0, 1)], &natural).unwrap());
        assert!(!m_equivalent(&w, &spec.rewrite(&w).unwrap(), &natural).unwrap());

        let w = abc("abba");
        let spec = SwapSpec::locate(&w, AB, &[0, 2]).unwrap();
        assert!(validate_classic_2t(&w, &spec, &[(0, 1)], &natural).unwrap());

        let w = abc("abcba");
        let spec = SwapSpec::locate(&w, AB, &[0]).unwrap();
        assert!(!validate_classic_2t(&w, &spec, &[], &natural).unwrap());

        let spec = SwapSpec::locate(&abc("abba"), AB, &[0, 2]).unwrap();
        assert!(matches!(
            validate_classic_2t(&abc("abba"), &spec, &[(0, 0)], &natural),
            Err(Error::MalformedGrouping(_))
        ));
        assert!(matches!(
            validate_classic_2t(&abc("abba"), &spec, &[(0, 5)], &natural),
            Err(Error::MalformedGrouping(_))
        ));
        // the middle letter of a<c<b is c, which the pair lacks
        assert_eq!(
            validate_classic_2t(&abc("abba"), &spec, &[(0, 1)], &order("a<c<b")),
            Err(Error::NotClassicPair)
        );
    }

    #[test]
    fn classic_2t_agrees_with_m_equivalence() {
        // with a single letter pair, the rule holds iff the swap preserves the matrix
        let sigma = Alphabet::abc();
        let natural = order("a<b<c");
        for w in oracle::all_words_up_to(&sigma, 8) {
            for pair in [(Letter::A, Letter::B), (Letter::C, Letter::B)] {
                let sites = blocks_for(&w, pair);
                for i in 0..sites.len() {
                    for j in i + 1..sites.len() {
                        let Ok(spec) = SwapSpec::locate(&w, pair, &[sites[i], sites[j]]) else {
                            continue;
                        };
                        let valid = validate_classic_2t(&w, &spec, &[(0, 1)], &natural).unwrap();
                        let kinds_differ = spec.blocks()[0].kind != spec.blocks()[1].kind;
                        let preserved =
                            m_equivalent(&w, &spec.rewrite(&w).unwrap(), &natural).unwrap();
                        assert_eq!(valid, kinds_differ && preserved, "{w} {:?}", spec);
                    }
                }
            }
        }
    }

    fn blocks_for(w: &Word, (x, y): (Letter, Letter)) -> Vec<usize> {
        let s = w.symbols();
        (0..s.len().saturating_sub(1))
            .filter(|&i| (s[i], s[i + 1]) == (x, y) || (s[i], s[i + 1]) == (y, x))
            .collect()
    }

    #[test]
    fn strong_2t_examples() {
        assert_eq!(
            apply_strong_2t(&abc("abcbabacab"), &swap("abcbabacab", &[0, 3, 5, 8])).unwrap(),
            abc("bacababcba")
        );
        assert_eq!(
            apply_strong_2t(
                &abc("babcbabcbabcbab"),
                &swap("babcbabcbabcbab", &[1, 4, 8, 13])
            )
            .unwrap(),
            abc("bbacabbcabbcbba")
        );
        assert_eq!(
            apply_strong_2t(&abc("abcba"), &swap("abcba", &[0])),
            Err(Error::NotStrong2t {
                sum_p: -1,
                sum_q: -1
            })
        );
        assert_eq!(
            apply_strong_2t(&abc("abcba"), &swap("abcba", &[0, 3])),
            Err(Error::NotStrong2t {
                sum_p: 0,
                sum_q: -1
            })
        );
        let empty = SwapSpec::new(AB, vec![]).unwrap();
        assert_eq!(apply_strong_2t(&abc("ab"), &empty), Err(Error::EmptySpec));
        let xy = Alphabet::parse("ab").unwrap().parse_word("abba").unwrap();
        assert_eq!(
            apply_strong_2t(&xy, &SwapSpec::locate(&xy, AB, &[0, 2]).unwrap()),
            Err(Error::TernaryOnly(2))
        );
    }

    #[test]
    fn strong_2t_involution() {
        let w = abc("babcbabcbabcbab");
        let spec = swap("babcbabcbabcbab", &[1, 4, 8, 13]);
        let v = apply_strong_2t(&w, &spec).unwrap();
        assert_eq!(apply_strong_2t(&v, &spec.flipped()).unwrap(), w);
    }

    #[test]
    fn strong_3t_examples() {
        let w = abc("abcbabcacbcabac");
        let spec = triple(&[(0, 4, "AB"), (5, 9, "BC"), (10, 14, "CA")]);
        assert_eq!(spec.sums(&w).unwrap(), [1, 1, 1]);
        assert_eq!(apply_strong_3t(&w, &spec).unwrap(), abc("bacabcbabcacbca"));

        let w = abc("abbabccbcaac");
        let spec = triple(&[(0, 3, "AB"), (4, 7, "BC"), (8, 11, "CA")]);
        assert_eq!(apply_strong_3t(&w, &spec).unwrap(), abc("baabcbbcacca"));

        let w = abc("abcbabcacb");
        let spec = triple(&[(0, 4, "AB"), (5, 9, "BC")]);
        assert_eq!(
            apply_strong_3t(&w, &spec),
            Err(Error::NotStrong3t { sums: [1, 1, 0] })
        );
    }

    #[test]
    fn strong_3t_spec_errors() {
        let f = |start, end, class| TripleFactor { start, end, class };
        assert_eq!(TripleFactorSpec::new(vec![]), Err(Error::EmptySpec));
        assert_eq!(
            TripleFactorSpec::new(vec![f(0, 3, FactorClass::Ab), f(5, 8, FactorClass::Cb)]),
            Err(Error::MixedOrientation)
        );
        assert!(matches!(
            TripleFactorSpec::new(vec![f(0, 3, FactorClass::Ab), f(3, 6, FactorClass::Bc)]),
            Err(Error::Overlap { .. })
        ));
        assert!(TripleFactorSpec::new(vec![f(0, 2, FactorClass::Ab)]).is_err());
        // nested factors are fine as long as boundaries are disjoint
        let nested =
            TripleFactorSpec::new(vec![f(0, 9, FactorClass::Ab), f(3, 6, FactorClass::Bc)])
                .unwrap();
        let w = abc("abcbccbaba");
        assert_eq!(nested.sums(&w).unwrap(), [3, 0, 0]);
        let bad = TripleFactorSpec::new(vec![f(0, 3, FactorClass::Bc)]).unwrap();
        assert!(matches!(
            bad.validate_on(&abc("abba")),
            Err(Error::Pattern { .. })
        ));
    }

    #[test]
    fn reversed_3t_undoes_forward_3t() {
        let w = abc("abcbabcacbcabac");
        let spec = triple(&[(0, 4, "AB"), (5, 9, "BC"), (10, 14, "CA")]);
        let v = apply_strong_3t(&w, &spec).unwrap();
        let back = triple(&[(0, 4, "BA"), (5, 9, "CB"), (10, 14, "AC")]);
        assert_eq!(apply_strong_3t(&v, &back).unwrap(), w);
    }

    #[test]
    fn alpha_beta_examples() {
        let (v, omega) = apply_alpha_beta(&abc("abcba"), 0, 3).unwrap();
        assert_eq!(v, abc("bacab"));
        assert_eq!(omega, Counter::new(1, 0, -1));

        let (v, omega) = apply_alpha_beta(&abc("bccb"), 0, 2).unwrap();
        assert_eq!(v, abc("cbbc"));
        assert!(omega.is_zero());

        assert_eq!(
            apply_alpha_beta(&abc("abab"), 0, 2),
            Err(Error::NotAlphaBeta {
                first: 0,
                second: 2
            })
        );
        assert!(apply_alpha_beta(&abc("abba"), 0, 1).is_err());
    }

    #[test]
    fn se_requires_interior_over_the_pair() {
        assert_eq!(apply_se(&abc("abba"), 0, 2).unwrap(), abc("baab"));
        assert_eq!(apply_se(&abc("abaaba"), 0, 4).unwrap(), abc("baaaab"));
        assert_eq!(
            apply_se(&abc("abcba"), 0, 3),
            Err(Error::NotSe {
                first: 0,
                second: 3
            })
        );
    }

    #[test]
    fn swap_delta_examples() {
        let d = predict_pair_swap_deltas(&abc("abcba"), 0, 3).unwrap();
        assert_eq!(
            [d.abc, d.cba, d.bac, d.cab, d.acb, d.bca],
            [1, 1, -1, -1, 0, 0]
        );
        assert_eq!(
            predict_pair_swap_deltas(&abc("abba"), 0, 2).unwrap(),
            PairSwapDeltas::default()
        );
        let w = abc("abccba");
        let measured = PairSwapDeltas::measured(&w, &abc("baccab")).unwrap();
        assert_eq!(predict_pair_swap_deltas(&w, 0, 4).unwrap(), measured);
        assert_eq!(
            [measured.abc, measured.cba, measured.bac, measured.cab],
            [2, 2, -2, -2]
        );
        assert!(predict_pair_swap_deltas(&abc("baab"), 0, 2).is_err());
    }

    #[test]
    fn counters_match_direct_counts_exhaustively() {
        let sigma = Alphabet::abc();
        for w in oracle::all_words_up_to(&sigma, 9) {
            for (i, j) in oracle::alpha_beta_sites_brute(&w) {
                let (v, omega) = apply_alpha_beta(&w, i, j).unwrap();
                assert_eq!(v, oracle::swap_at(&w, &[i, j]));
                assert_eq!(omega, Counter::between(&w, &v).unwrap(), "{w} at {i},{j}");
            }
        }
    }

    #[test]
    fn transposed_blocks_from_difference() {
        let t = |a: &str, b: &str| transposed_blocks(abc(a).symbols(), abc(b).symbols());
        assert_eq!(t("abcbabacab", "bacababcba"), Some(vec![0, 3, 5, 8]));
        assert_eq!(t("abba", "baab"), Some(vec![0, 2]));
        assert_eq!(t("abc", "abc"), Some(vec![]));
        assert_eq!(t("abc", "acc"), None);
        assert_eq!(t("abc", "cab"), None);
    }

    fn valid_2t_specs(w: &Word, max_blocks: usize) -> Vec<SwapSpec> {
        let mut out = Vec::new();
        for (x, y) in [
            (Letter::A, Letter::B),
            (Letter::B, Letter::C),
            (Letter::C, Letter::A),
        ] {
            let sites = blocks_for(w, (x, y));
            for k in (2..=max_blocks).step_by(2) {
                for combo in itertools::Itertools::combinations(sites.iter().copied(), k) {
                    if let Ok(spec) = SwapSpec::locate(w, (x, y), &combo) {
                        out.push(spec);
                    }
                }
            }
        }
        out
    }

    proptest! {
        #[test]
        fn strong_2t_preserves_all_six_matrices(ix in prop::collection::vec(0usize..3, 4..=12)) {
            let w = Alphabet::abc().word(ix.into_iter().map(|i| Letter::from_index(i).unwrap())).unwrap();
            for spec in valid_2t_specs(&w, 6) {
                if let Ok(v) = apply_strong_2t(&w, &spec) {
                    prop_assert!(oracle::strongly_equivalent_brute(&w, &v));
                    prop_assert_eq!(apply_strong_2t(&v, &spec.flipped()).unwrap(), w.clone());
                }
            }
        }

        #[test]
        fn swap_delta_predictions_hold(ix in prop::collection::vec(0usize..3, 4..=12)) {
            let w = Alphabet::abc().word(ix.into_iter().map(|i| Letter::from_index(i).unwrap())).unwrap();
            for (i, j) in oracle::alpha_beta_sites_brute(&w) {
                if w.symbols()[i] == Letter::A && w.symbols()[i + 1] == Letter::B {
                    let v = oracle::swap_at(&w, &[i, j]);
                    prop_assert_eq!(
                        predict_pair_swap_deltas(&w, i, j).unwrap(),
                        PairSwapDeltas::measured(&w, &v).unwrap()
                    );
                }
            }
        }
    }
}
