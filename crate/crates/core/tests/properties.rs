use parikh_core::oracle;
use parikh_core::parikh::strongly_m_equivalent_all_orderings;
use parikh_core::{
    analyze, apply_alpha_beta, apply_strong_2t, apply_strong_3t, decompose,
    detect_alpha_beta_sites, detect_strong_2t, detect_strong_3t, enumerate_class,
    strongly_m_equivalent, Alphabet, ClassMode, Counter, Detection3t, Letter, SwapSpec, Word,
};
use proptest::prelude::*;

fn ternary(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0usize..3, 0..=max_len).prop_map(|ix| {
        Alphabet::abc()
            .word(ix.into_iter().map(|i| Letter::from_index(i).unwrap()))
            .unwrap()
    })
}

fn blocks_over(w: &Word, pair: (Letter, Letter)) -> Vec<usize> {
    let s = w.symbols();
    (0..s.len().saturating_sub(1))
        .filter(|&i| (s[i], s[i + 1]) == pair || (s[i + 1], s[i]) == pair)
        .collect()
}

/// Greedily picks disjoint blocks from `sites` according to `mask`.
fn pick(sites: &[usize], mask: u32) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for (i, &p) in sites.iter().enumerate() {
        if mask >> (i % 32) & 1 == 1 && out.last().is_none_or(|&q| p >= q + 2) {
            out.push(p);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn three_orderings_decide_strong_equivalence(w in ternary(9), v in ternary(9)) {
        prop_assert_eq!(
            strongly_m_equivalent(&w, &v).unwrap(),
            strongly_m_equivalent_all_orderings(&w, &v).unwrap()
        );
    }

    #[test]
    fn decomposition_composes_to_the_whole(w in ternary(16), mask in any::<u32>()) {
        for pair in [(Letter::A, Letter::B), (Letter::B, Letter::C), (Letter::C, Letter::A)] {
            let chosen = pick(&blocks_over(&w, pair), mask);
            let Ok(spec) = SwapSpec::locate(&w, pair, &chosen) else { continue };
            let Ok(image) = apply_strong_2t(&w, &spec) else { continue };
            let stages = decompose(&w, &spec).unwrap();
            prop_assert_eq!(&stages[0].source, &w);
            prop_assert_eq!(&stages.last().unwrap().target, &image);
            prop_assert_eq!(stages.iter().map(|s| s.spec.blocks().len()).sum::<usize>(), chosen.len());
            for pair in stages.windows(2) {
                prop_assert_eq!(&pair[0].target, &pair[1].source);
            }
            for stage in &stages {
                let r = analyze(&stage.source, &stage.spec).unwrap();
                prop_assert!(r.valid && !r.reducible);
                prop_assert_eq!(apply_strong_2t(&stage.source, &stage.spec).unwrap(), stage.target.clone());
            }
        }
    }

    #[test]
    fn detection_reproduces_the_image(w in ternary(14), mask in any::<u32>()) {
        for pair in [(Letter::A, Letter::B), (Letter::C, Letter::B)] {
            let chosen = pick(&blocks_over(&w, pair), mask);
            let Ok(spec) = SwapSpec::locate(&w, pair, &chosen) else { continue };
            let Ok(image) = apply_strong_2t(&w, &spec) else { continue };
            let found = detect_strong_2t(&w, &image).unwrap().expect("detectable");
            prop_assert_eq!(apply_strong_2t(&w, &found).unwrap(), image.clone());
            if let Detection3t::Found(triple) = detect_strong_3t(&w, &image, 16).unwrap() {
                prop_assert_eq!(apply_strong_3t(&w, &triple).unwrap(), image);
            }
        }
    }

    #[test]
    fn counters_add_up(w in ternary(14), picks in prop::collection::vec(any::<prop::sample::Index>(), 1..6)) {
        let mut current = w.clone();
        let mut total = Counter::ZERO;
        for ix in picks {
            let sites = detect_alpha_beta_sites(&current);
            if sites.is_empty() {
                break;
            }
            let (i, j) = sites[ix.index(sites.len())];
            let (next, counter) = apply_alpha_beta(&current, i, j).unwrap();
            total += counter;
            current = next;
        }
        prop_assert_eq!(total, Counter::between(&w, &current).unwrap());
    }
}

#[test]
fn strong_classes_are_closed_under_both_strong_rules() {
    let sigma = Alphabet::abc();
    for w in oracle::all_words(&sigma, 9).step_by(11) {
        let class = enumerate_class(&w, &ClassMode::Strong).unwrap();
        for v in &class {
            assert!(oracle::strongly_equivalent_brute(&w, v));
        }
        for v in oracle::all_words(&sigma, 9).step_by(97) {
            if let Some(spec) = detect_strong_2t(&w, &v).unwrap() {
                assert!(class
                    .binary_search(&apply_strong_2t(&w, &spec).unwrap())
                    .is_ok());
            }
            if let Detection3t::Found(spec) = detect_strong_3t(&w, &v, 16).unwrap() {
                assert!(class
                    .binary_search(&apply_strong_3t(&w, &spec).unwrap())
                    .is_ok());
            }
        }
    }
}

#[test]
fn three_t_images_stay_in_class() {
    // every strong (3·t) image among the anagrams found by detection
    let sigma = Alphabet::abc();
    for w in oracle::all_words(&sigma, 8) {
        let class = enumerate_class(&w, &ClassMode::Strong).unwrap();
        for v in &class {
            if let Detection3t::Found(spec) = detect_strong_3t(&w, v, 16).unwrap() {
                assert_eq!(apply_strong_3t(&w, &spec).unwrap(), *v);
            }
        }
    }
}
