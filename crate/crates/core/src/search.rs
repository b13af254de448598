//! Bounded exhaustive search: SE closures, counter-balanced αβ derivations,
//! detection of strong transformations between two words, and brute-force
//! equivalence classes.
//!
//! Every search expands neighbours in lexicographic order of the resulting
//! word, so results are deterministic.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::irreducibility::pq_pairs_of;
use crate::parikh::{all_orderings, m_equivalent, parikh_matrix, sufficient_orderings};
use crate::transforms::{
    alpha_beta_counter, apply_alpha_beta, apply_e1, apply_se, apply_strong_2t, apply_strong_3t,
    transposed_blocks, Counter, FactorClass, SwapSpec, TripleFactor, TripleFactorSpec,
};
use crate::words::{letter_counts, same_alphabet, Letter, OrderedAlphabet, Word};

pub const DEFAULT_NODE_CAP: usize = 1_000_000;
pub const DEFAULT_MAX_STEPS: usize = 6;
pub const DEFAULT_FACTOR_CAP: usize = 16;
/// Longest word accepted by [`enumerate_class`].
pub const CLASS_LENGTH_CAP: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DerivationStep {
    Se {
        first: usize,
        second: usize,
    },
    E1 {
        pos: usize,
        ordering: OrderedAlphabet,
    },
    Strong2t(SwapSpec),
    Strong3t(TripleFactorSpec),
    AlphaBeta {
        first: usize,
        second: usize,
        counter: Counter,
    },
}

impl DerivationStep {
    pub fn name(&self) -> &'static str {
        match self {
            DerivationStep::Se { .. } => "se",
            DerivationStep::E1 { .. } => "e1",
            DerivationStep::Strong2t(_) => "s2t",
            DerivationStep::Strong3t(_) => "s3t",
            DerivationStep::AlphaBeta { .. } => "alphabeta",
        }
    }

    /// Applies the step, checking its rule and, for αβ-steps, its counter.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        match self {
            DerivationStep::Se { first, second } => apply_se(w, *first, *second),
            DerivationStep::E1 { pos, ordering } => apply_e1(w, *pos, ordering),
            DerivationStep::Strong2t(spec) => apply_strong_2t(w, spec),
            DerivationStep::Strong3t(spec) => apply_strong_3t(w, spec),
            DerivationStep::AlphaBeta {
                first,
                second,
                counter,
            } => {
                let (v, actual) = apply_alpha_beta(w, *first, *second)?;
                if actual != *counter {
                    return Err(Error::Pattern {
                        pos: *first,
                        detail: format!("recorded counter {counter}, step gives {actual}"),
                    });
                }
                Ok(v)
            }
        }
    }

    pub fn counter(&self) -> Option<Counter> {
        match self {
            DerivationStep::AlphaBeta { counter, .. } => Some(*counter),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub start: Word,
    pub steps: Vec<DerivationStep>,
}

impl Derivation {
    pub fn empty(start: Word) -> Derivation {
        Derivation {
            start,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Every intermediate word, starting with `start`.
    pub fn words(&self) -> Result<Vec<Word>> {
        let mut out = vec![self.start.clone()];
        for step in &self.steps {
            let next = step.apply(out.last().unwrap())?;
            out.push(next);
        }
        Ok(out)
    }

    /// The final word.
    pub fn replay(&self) -> Result<Word> {
        Ok(self.words()?.pop().unwrap())
    }

    /// Sum of the αβ counters along the derivation.
    pub fn total_counter(&self) -> Counter {
        self.steps.iter().filter_map(DerivationStep::counter).sum()
    }
}

/// Start positions `(i, j)` of disjoint blocks `xy`, `yx` with `x ≠ y`.
pub fn detect_alpha_beta_sites(w: &Word) -> Vec<(usize, usize)> {
    let s = w.symbols();
    let n = s.len();
    let mut out = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let (x, y) = (s[i], s[i + 1]);
        if x == y {
            continue;
        }
        for j in i + 2..n - 1 {
            if s[j] == y && s[j + 1] == x {
                out.push((i, j));
            }
        }
    }
    out
}

/// αβ-sites whose interior only uses the two swapped letters.
pub fn se_sites(w: &Word) -> Vec<(usize, usize)> {
    let s = w.symbols();
    let n = s.len();
    let mut out = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let (x, y) = (s[i], s[i + 1]);
        if x == y {
            continue;
        }
        for j in i + 2..n - 1 {
            if s[j] == y && s[j + 1] == x {
                out.push((i, j));
            }
            if s[j] != x && s[j] != y {
                break;
            }
        }
    }
    out
}

fn swapped(s: &[Letter], i: usize, j: usize) -> Vec<Letter> {
    let mut t = s.to_vec();
    t.swap(i, i + 1);
    t.swap(j, j + 1);
    t
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MseOutcome {
    Equivalent(Derivation),
    /// The SE closure of the source was exhausted without meeting the target.
    NotEquivalent {
        explored: usize,
    },
    Capped {
        explored: usize,
    },
}

/// Breadth-first search of the SE closure of `w` for `v`.
///
/// The closure only holds anagrams of `w`, so it is finite and an exhausted
/// search is a definite negative.
pub fn mse_equivalent(w: &Word, v: &Word, node_cap: usize) -> Result<MseOutcome> {
    same_alphabet(w, v)?;
    if w == v {
        return Ok(MseOutcome::Equivalent(Derivation::empty(w.clone())));
    }
    let k = w.alphabet().len();
    if letter_counts(w.symbols(), k) != letter_counts(v.symbols(), k) {
        return Ok(MseOutcome::NotEquivalent { explored: 0 });
    }

    // parent[i] = (index of predecessor, site that produced node i)
    let mut nodes: Vec<Vec<Letter>> = vec![w.symbols().to_vec()];
    let mut parent: Vec<Option<(usize, (usize, usize))>> = vec![None];
    let mut seen: HashMap<Vec<Letter>, usize> = HashMap::from([(w.symbols().to_vec(), 0)]);
    let mut queue = VecDeque::from([0usize]);

    while let Some(idx) = queue.pop_front() {
        let current = w.with_symbols(nodes[idx].clone());
        let mut next: Vec<(Vec<Letter>, (usize, usize))> = se_sites(&current)
            .into_iter()
            .map(|(i, j)| (swapped(&nodes[idx], i, j), (i, j)))
            .collect();
        next.sort();
        for (word, site) in next {
            let Entry::Vacant(slot) = seen.entry(word) else {
                continue;
            };
            if nodes.len() >= node_cap {
                return Ok(MseOutcome::Capped {
                    explored: nodes.len(),
                });
            }
            let id = nodes.len();
            nodes.push(slot.key().clone());
            slot.insert(id);
            parent.push(Some((idx, site)));
            if nodes[id] == v.symbols() {
                let mut steps = Vec::new();
                let mut at = id;
                while let Some((from, (first, second))) = parent[at] {
                    steps.push(DerivationStep::Se { first, second });
                    at = from;
                }
                steps.reverse();
                return Ok(MseOutcome::Equivalent(Derivation {
                    start: w.clone(),
                    steps,
                }));
            }
            queue.push_back(id);
        }
    }
    Ok(MseOutcome::NotEquivalent {
        explored: nodes.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MsaeOutcome {
    /// A derivation of αβ-steps from the source to the target whose counters
    /// sum to zero.
    Found(Derivation),
    /// No such derivation within the step bound.
    NoneFound {
        explored: usize,
    },
    Capped {
        explored: usize,
    },
}

/// Breadth-first search over (word, cumulative counter) states for a chain
/// of at most `max_steps` αβ-steps from `w` to `v` with zero total counter.
///
/// Each step changes at most four positions, so states further than
/// `4 · (steps left)` positions from `v` are dropped.
pub fn msae_search(w: &Word, v: &Word, max_steps: usize, node_cap: usize) -> Result<MsaeOutcome> {
    same_alphabet(w, v)?;
    w.alphabet().require_ternary()?;
    if w == v {
        return Ok(MsaeOutcome::Found(Derivation::empty(w.clone())));
    }
    if w.len() != v.len() || letter_counts(w.symbols(), 3) != letter_counts(v.symbols(), 3) {
        return Ok(MsaeOutcome::NoneFound { explored: 0 });
    }
    let target = v.symbols();
    let distance = |s: &[Letter]| s.iter().zip(target).filter(|(x, y)| x != y).count();

    type State = (Vec<Letter>, Counter);
    let mut nodes: Vec<(State, usize)> = vec![((w.symbols().to_vec(), Counter::ZERO), 0)];
    let mut parent: Vec<Option<(usize, DerivationStep)>> = vec![None];
    let mut seen: HashMap<State, usize> =
        HashMap::from([((w.symbols().to_vec(), Counter::ZERO), 0)]);
    let mut queue = VecDeque::from([0usize]);

    while let Some(idx) = queue.pop_front() {
        let ((word, counter), depth) = nodes[idx].clone();
        if depth >= max_steps {
            continue;
        }
        let left = max_steps - depth - 1;
        let current = w.with_symbols(word.clone());
        let mut next: Vec<(Vec<Letter>, Counter, usize, usize)> = detect_alpha_beta_sites(&current)
            .into_iter()
            .map(|(i, j)| {
                let step = alpha_beta_counter(&word, i, j);
                (swapped(&word, i, j), counter + step, i, j)
            })
            .filter(|(s, ..)| distance(s) <= 4 * left)
            .collect();
        next.sort();
        for (s, total, i, j) in next {
            let state = (s, total);
            let Entry::Vacant(slot) = seen.entry(state) else {
                continue;
            };
            if nodes.len() >= node_cap {
                return Ok(MsaeOutcome::Capped {
                    explored: nodes.len(),
                });
            }
            let id = nodes.len();
            let state = slot.key().clone();
            slot.insert(id);
            let step = DerivationStep::AlphaBeta {
                first: i,
                second: j,
                counter: total + -counter,
            };
            parent.push(Some((idx, step)));
            let done = state.0 == target && state.1.is_zero();
            nodes.push((state, depth + 1));
            if done {
                let mut steps = Vec::new();
                let mut at = id;
                while let Some((from, step)) = parent[at].take() {
                    steps.push(step);
                    at = from;
                }
                steps.reverse();
                return Ok(MsaeOutcome::Found(Derivation {
                    start: w.clone(),
                    steps,
                }));
            }
            queue.push_back(id);
        }
    }
    Ok(MsaeOutcome::NoneFound {
        explored: nodes.len(),
    })
}

fn check_lengths(w: &Word, v: &Word) -> Result<()> {
    same_alphabet(w, v)?;
    w.alphabet().require_ternary()?;
    if w.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: w.len(),
            right: v.len(),
        });
    }
    Ok(())
}

/// The strong (2·t) spec taking `w` to `v`, if there is one.
///
/// The pair is oriented by the first differing block.
pub fn detect_strong_2t(w: &Word, v: &Word) -> Result<Option<SwapSpec>> {
    check_lengths(w, v)?;
    let s = w.symbols();
    let Some(blocks) = transposed_blocks(s, v.symbols()) else {
        return Ok(None);
    };
    let Some(&first) = blocks.first() else {
        return Ok(None);
    };
    let pair = (s[first], s[first + 1]);
    let Ok(spec) = SwapSpec::locate(w, pair, &blocks) else {
        // some block uses a different letter pair
        return Ok(None);
    };
    let balanced = pq_pairs_of(s, &spec)
        .iter()
        .fold((0, 0), |(p, q), x| (p + x.p, q + x.q))
        == (0, 0);
    Ok(balanced.then_some(spec))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Detection3t {
    Found(TripleFactorSpec),
    NotFound,
    /// The difference has more blocks than the factor cap allows.
    Capped {
        blocks: usize,
    },
}

/// Every achievable interior weight for one class group, each with the first
/// factor list found for it.
fn group_sums(
    s: &[Letter],
    blocks: &[usize],
    forward: bool,
    group: usize,
) -> BTreeMap<usize, Vec<TripleFactor>> {
    let class = FactorClass::ALL
        .into_iter()
        .find(|c| c.group() == group && c.is_forward() == forward)
        .expect("every group has both orientations");
    let (x, y) = class.lead();
    // blocks of this group, tagged as opening (reads xy) or closing (reads yx)
    let members: Vec<(usize, bool)> = blocks
        .iter()
        .filter_map(|&p| match (s[p], s[p + 1]) {
            (l, r) if (l, r) == (x, y) => Some((p, true)),
            (l, r) if (l, r) == (y, x) => Some((p, false)),
            _ => None,
        })
        .collect();
    let mut pairing = Pairing {
        s,
        members: &members,
        class,
        weight: class.weight_letter(),
        out: BTreeMap::new(),
    };
    pairing.extend(&mut vec![false; members.len()], &mut Vec::new(), 0);
    pairing.out
}

/// Backtracking over ways to match opening blocks with later closing blocks.
struct Pairing<'a> {
    s: &'a [Letter],
    members: &'a [(usize, bool)],
    class: FactorClass,
    weight: Letter,
    out: BTreeMap<usize, Vec<TripleFactor>>,
}

impl Pairing<'_> {
    fn extend(&mut self, used: &mut [bool], acc: &mut Vec<TripleFactor>, sum: usize) {
        let Some(open) = used.iter().position(|u| !u) else {
            self.out.entry(sum).or_insert_with(|| acc.clone());
            return;
        };
        if !self.members[open].1 {
            return;
        }
        used[open] = true;
        for close in open + 1..self.members.len() {
            if used[close] || self.members[close].1 {
                continue;
            }
            let (start, end) = (self.members[open].0, self.members[close].0 + 1);
            let n = self.s[start + 2..end - 1]
                .iter()
                .filter(|&&l| l == self.weight)
                .count();
            used[close] = true;
            acc.push(TripleFactor {
                start,
                end,
                class: self.class,
            });
            self.extend(used, acc, sum + n);
            acc.pop();
            used[close] = false;
        }
        used[open] = false;
    }
}

/// A strong (3·t) spec taking `w` to `v`, if there is one.
///
/// The boundary blocks must be exactly the blocks where the words differ.
/// Forward orientation is tried before reversed, and within an orientation
/// the smallest common interior weight wins.
pub fn detect_strong_3t(w: &Word, v: &Word, factor_cap: usize) -> Result<Detection3t> {
    check_lengths(w, v)?;
    let s = w.symbols();
    let Some(blocks) = transposed_blocks(s, v.symbols()) else {
        return Ok(Detection3t::NotFound);
    };
    if blocks.is_empty() {
        return Ok(Detection3t::NotFound);
    }
    if blocks.len() > factor_cap {
        return Ok(Detection3t::Capped {
            blocks: blocks.len(),
        });
    }
    for forward in [true, false] {
        let groups: Vec<BTreeMap<usize, Vec<TripleFactor>>> =
            (0..3).map(|g| group_sums(s, &blocks, forward, g)).collect();
        let common = groups[0]
            .keys()
            .find(|sum| groups[1].contains_key(sum) && groups[2].contains_key(sum));
        if let Some(sum) = common {
            let factors: Vec<TripleFactor> =
                groups.iter().flat_map(|g| g[sum].iter().copied()).collect();
            if factors.is_empty() {
                continue;
            }
            let spec = TripleFactorSpec::new(factors)?;
            debug_assert_eq!(apply_strong_3t(w, &spec).as_ref(), Ok(v));
            return Ok(Detection3t::Found(spec));
        }
    }
    Ok(Detection3t::NotFound)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassMode {
    /// Equal Parikh matrix under one ordering.
    M(OrderedAlphabet),
    /// Equal Parikh matrices under every ordering.
    Strong,
}

/// All anagrams of `w` in its class, sorted; always contains `w`.
pub fn enumerate_class(w: &Word, mode: &ClassMode) -> Result<Vec<Word>> {
    if w.len() > CLASS_LENGTH_CAP {
        return Err(Error::Cap {
            what: "word length",
            actual: w.len(),
            cap: CLASS_LENGTH_CAP,
        });
    }
    let orderings = match mode {
        ClassMode::M(o) => {
            if o.alphabet() != w.alphabet() {
                return Err(Error::AlphabetMismatch);
            }
            vec![o.clone()]
        }
        ClassMode::Strong if w.alphabet().is_ternary() => {
            sufficient_orderings(w.alphabet())?.to_vec()
        }
        ClassMode::Strong => all_orderings(w.alphabet()),
    };
    // counts fit in u64 at this length
    let signature = |x: &Word| -> Result<Vec<_>> {
        orderings
            .iter()
            .map(|o| parikh_matrix::<u64>(x, o))
            .collect()
    };
    let target = signature(w)?;
    let mut symbols = w.symbols().to_vec();
    symbols.sort();
    let mut out = Vec::new();
    loop {
        let candidate = w.with_symbols(symbols.clone());
        if signature(&candidate)? == target {
            out.push(candidate);
        }
        if !next_permutation(&mut symbols) {
            break;
        }
    }
    debug_assert!(out
        .iter()
        .all(|x| !matches!(mode, ClassMode::M(o) if !m_equivalent(w, x, o).unwrap_or(false))));
    Ok(out)
}

/// Advances to the next permutation in lexicographic order; false at the last.
fn next_permutation<T: Ord>(s: &mut [T]) -> bool {
    let Some(i) = s.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = s.iter().rposition(|x| *x > s[i]).unwrap();
    s.swap(i, j);
    s[i + 1..].reverse();
    true
}
