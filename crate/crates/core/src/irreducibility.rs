//! (p, q) pairs of strong (2·t) transformations, reducibility, and the
//! standard example families.
//!
//! For a block at position `i` of a spec over the pair `(a, b)` with third
//! letter `c`, `p` is −1 for an `ab` block and +1 for a `ba` block, and
//! `q = p · |y|_c` where `y` is the suffix after the block. The rewrite
//! changes `|w|_ab` by `−Σp` and `|w|_abc` by `−Σq`, so a spec is valid
//! exactly when both sums vanish.

use std::fmt;

use crate::error::{Error, Result};
use crate::parikh::strongly_m_equivalent;
use crate::search::{mse_equivalent, MseOutcome, DEFAULT_NODE_CAP};
use crate::transforms::{
    transposed_blocks, BlockKind, FactorClass, SwapSpec, TripleFactor, TripleFactorSpec,
};
use crate::words::{Alphabet, Letter, Word};

/// Upper bound on the number of blocks for the subset search.
pub const SUBSET_CAP: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PqPair {
    pub p: i64,
    pub q: i64,
}

impl fmt::Display for PqPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// pq pairs without validating the spec against the word.
pub(crate) fn pq_pairs_of(s: &[Letter], spec: &SwapSpec) -> Vec<PqPair> {
    let c = spec.third_letter();
    // suffix counts of the third letter: after[i] = |s[i..]|_c
    let mut after = vec![0i64; s.len() + 1];
    for i in (0..s.len()).rev() {
        after[i] = after[i + 1] + i64::from(s[i] == c);
    }
    spec.blocks()
        .iter()
        .map(|b| {
            let p = match b.kind {
                BlockKind::Ab => -1,
                BlockKind::Ba => 1,
            };
            PqPair {
                p,
                q: p * after[b.pos + 2],
            }
        })
        .collect()
}

pub fn compute_pq_pairs(w: &Word, spec: &SwapSpec) -> Result<Vec<PqPair>> {
    w.alphabet().require_ternary()?;
    spec.validate_on(w)?;
    Ok(pq_pairs_of(w.symbols(), spec))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducibilityReport {
    pub pairs: Vec<PqPair>,
    pub sum_p: i64,
    pub sum_q: i64,
    pub valid: bool,
    pub reducible: bool,
    /// Smallest proper nonempty block index set with zero sums, if any.
    pub witness: Option<Vec<usize>>,
}

/// Lexicographically smallest proper nonempty subset of `within` (given as
/// increasing indices into `pairs`) whose p and q sums are both zero.
///
/// Depth-first search in preorder visits index sequences in lexicographic
/// order, so the first hit is the smallest. A branch is cut once its p sum
/// can no longer return to zero with the remaining blocks.
pub fn zero_subset(pairs: &[PqPair], within: &[usize]) -> Option<Vec<usize>> {
    fn go(
        pairs: &[PqPair],
        within: &[usize],
        next: usize,
        chosen: &mut Vec<usize>,
        sum: (i64, i64),
    ) -> bool {
        for k in next..within.len() {
            let pair = pairs[within[k]];
            let sum = (sum.0 + pair.p, sum.1 + pair.q);
            chosen.push(within[k]);
            if sum == (0, 0) && chosen.len() < within.len() {
                return true;
            }
            let remaining = (within.len() - k - 1) as i64;
            if sum.0.abs() <= remaining && go(pairs, within, k + 1, chosen, sum) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    go(pairs, within, 0, &mut chosen, (0, 0)).then_some(chosen)
}

/// Validity and reducibility of a strong (2·t) spec on `w`.
pub fn analyze(w: &Word, spec: &SwapSpec) -> Result<ReducibilityReport> {
    let n = spec.blocks().len();
    if n > SUBSET_CAP {
        return Err(Error::Cap {
            what: "number of blocks",
            actual: n,
            cap: SUBSET_CAP,
        });
    }
    let pairs = compute_pq_pairs(w, spec)?;
    let sum_p = pairs.iter().map(|x| x.p).sum();
    let sum_q = pairs.iter().map(|x| x.q).sum();
    let all: Vec<usize> = (0..n).collect();
    let witness = zero_subset(&pairs, &all);
    Ok(ReducibilityReport {
        valid: sum_p == 0 && sum_q == 0,
        reducible: witness.is_some(),
        pairs,
        sum_p,
        sum_q,
        witness,
    })
}

/// One irreducible piece of a decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub source: Word,
    pub spec: SwapSpec,
    pub target: Word,
}

/// Splits a valid strong (2·t) transformation into irreducible stages,
/// applied left to right.
///
/// Rewriting some blocks leaves the pq pairs of the others unchanged (a swap
/// only moves letters of the pair), so every stage is chosen from the
/// original pairs.
pub fn decompose(w: &Word, spec: &SwapSpec) -> Result<Vec<Stage>> {
    if spec.blocks().is_empty() {
        return Err(Error::EmptySpec);
    }
    let report = analyze(w, spec)?;
    if !report.valid {
        return Err(Error::NotStrong2t {
            sum_p: report.sum_p,
            sum_q: report.sum_q,
        });
    }
    let pairs = report.pairs;
    let mut remaining: Vec<usize> = (0..spec.blocks().len()).collect();
    let mut current = w.clone();
    let mut stages = Vec::new();
    while !remaining.is_empty() {
        let mut part = remaining.clone();
        while let Some(smaller) = zero_subset(&pairs, &part) {
            part = smaller;
        }
        let stage_spec = spec.subset(&part);
        let target = stage_spec.rewrite(&current)?;
        stages.push(Stage {
            source: current,
            spec: stage_spec,
            target: target.clone(),
        });
        current = target;
        remaining.retain(|i| !part.contains(i));
    }
    Ok(stages)
}

/// Whether `w → v` has the shape `ab·w2·ba·w3·ba·w4·ab` (inside a common
/// prefix and suffix) with `|w2|_c = |w4|_c > 0`, for some naming of the
/// swapped letters as `a`, `b`.
///
/// The differing positions fix the four blocks, and the first block fixes
/// which letter plays `a`.
pub fn has_irreducible_2x2_structure(w: &Word, v: &Word) -> Result<bool> {
    crate::words::same_alphabet(w, v)?;
    w.alphabet().require_ternary()?;
    if w.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: w.len(),
            right: v.len(),
        });
    }
    let s = w.symbols();
    let Some(blocks) = transposed_blocks(s, v.symbols()) else {
        return Ok(false);
    };
    let [b1, b2, b3, b4] = blocks[..] else {
        return Ok(false);
    };
    let (a, b) = (s[b1], s[b1 + 1]);
    let reads = |pos: usize, x: Letter, y: Letter| s[pos] == x && s[pos + 1] == y;
    if !(reads(b2, b, a) && reads(b3, b, a) && reads(b4, a, b)) {
        return Ok(false);
    }
    let c = Letter::third(a, b);
    let count = |from: usize, to: usize| s[from..to].iter().filter(|&&l| l == c).count();
    let (w2, w4) = (count(b1 + 2, b2), count(b3 + 2, b4));
    Ok(w2 == w4 && w2 > 0)
}

/// A generated word, its image, and the spec mapping one to the other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family<S> {
    pub word: Word,
    pub image: Word,
    pub spec: S,
}

fn check_parameter(got: usize) -> Result<()> {
    if got == 0 {
        return Err(Error::FamilyParameter { min: 1, got });
    }
    Ok(())
}

fn swap_family(text: &str, positions: &[usize]) -> Result<Family<SwapSpec>> {
    let word = Alphabet::abc().parse_word(text)?;
    let spec = SwapSpec::locate(&word, (Letter::A, Letter::B), positions)?;
    let image = spec.rewrite(&word)?;
    Ok(Family { word, image, spec })
}

/// Irreducible strong (2·t) transformations:
/// `(ab)^(t−1) c (ba)^t c^(t−1) ab`, and `abba` for `t = 1`.
pub fn irreducible_family(t: usize) -> Result<Family<SwapSpec>> {
    check_parameter(t)?;
    if t == 1 {
        return swap_family("abba", &[0, 2]);
    }
    let text = format!(
        "{}c{}{}ab",
        "ab".repeat(t - 1),
        "ba".repeat(t),
        "c".repeat(t - 1)
    );
    let mut positions: Vec<usize> = (0..t - 1).map(|i| 2 * i).collect();
    positions.extend((0..t).map(|j| 2 * t - 1 + 2 * j));
    positions.push(5 * t - 2);
    swap_family(&text, &positions)
}

/// `(abcbabacab)^t`: a strong (2·2t) transformation with no strong (3·t)
/// counterpart.
pub fn strong_2t_only_family(t: usize) -> Result<Family<SwapSpec>> {
    check_parameter(t)?;
    let positions: Vec<usize> = (0..t)
        .flat_map(|j| [0, 3, 5, 8].map(|o| 10 * j + o))
        .collect();
    swap_family(&"abcbabacab".repeat(t), &positions)
}

/// `a^m bcbabcacbcaba c^m`: a strong (3·3) transformation with no strong
/// (2·t) counterpart.
pub fn strong_3t_only_family(m: usize) -> Result<Family<TripleFactorSpec>> {
    check_parameter(m)?;
    let pad = m - 1;
    let text = format!("{}abcbabcacbcabac{}", "a".repeat(pad), "c".repeat(pad));
    let word = Alphabet::abc().parse_word(&text)?;
    let factor = |start: usize, class| TripleFactor {
        start: pad + start,
        end: pad + start + 4,
        class,
    };
    let spec = TripleFactorSpec::new(vec![
        factor(0, FactorClass::Ab),
        factor(5, FactorClass::Bc),
        factor(10, FactorClass::Ca),
    ])?;
    let image = spec.rewrite(&word)?;
    Ok(Family { word, image, spec })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongNotMse {
    pub image: Word,
    /// Both words are strongly M-equivalent and the SE closure of the
    /// source, searched to exhaustion, misses the image.
    pub confirmed: bool,
}

/// For a strong (2·t) spec whose factors each hold at most one third letter
/// (at least one holds exactly one) and whose gaps hold at most one, returns
/// the image and checks that it is strongly M-equivalent to `w` but not
/// reachable by Rule SE.
///
/// Blocks are paired into factors in order: blocks 0 and 1, 2 and 3, and so on.
pub fn check_strong_not_mse(w: &Word, spec: &SwapSpec) -> Result<StrongNotMse> {
    w.alphabet().require_ternary()?;
    spec.validate_on(w)?;
    let blocks = spec.blocks();
    if blocks.is_empty() || blocks.len() % 2 == 1 {
        return Err(Error::Shape(format!(
            "expected an even, nonzero number of blocks, got {}",
            blocks.len()
        )));
    }
    let c = spec.third_letter();
    let count = |from: usize, to: usize| w.symbols()[from..to].iter().filter(|&&l| l == c).count();
    let mut some_interior = false;
    let mut gap_start = 0;
    for (k, pair) in blocks.chunks(2).enumerate() {
        let (open, close) = (pair[0], pair[1]);
        if open.kind == close.kind {
            return Err(Error::Shape(format!(
                "factor {k} starts and ends with blocks of the same orientation"
            )));
        }
        let gap = count(gap_start, open.pos);
        let interior = count(open.pos + 2, close.pos);
        if gap > 1 {
            return Err(Error::Shape(format!(
                "gap before factor {k} holds {gap} third letters"
            )));
        }
        if interior > 1 {
            return Err(Error::Shape(format!(
                "factor {k} holds {interior} third letters"
            )));
        }
        some_interior |= interior == 1;
        gap_start = close.pos + 2;
    }
    let tail = count(gap_start, w.len());
    if tail > 1 {
        return Err(Error::Shape(format!(
            "final gap holds {tail} third letters"
        )));
    }
    if !some_interior {
        return Err(Error::Shape(
            "no factor holds exactly one third letter".into(),
        ));
    }
    let image = crate::transforms::apply_strong_2t(w, spec)?;
    let confirmed = strongly_m_equivalent(w, &image)?
        && matches!(
            mse_equivalent(w, &image, DEFAULT_NODE_CAP)?,
            MseOutcome::NotEquivalent { .. }
        );
    Ok(StrongNotMse { image, confirmed })
}
