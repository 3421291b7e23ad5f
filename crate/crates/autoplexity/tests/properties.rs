//! Randomized invariants complementing the exhaustive sweeps in the
//! unit and acceptance tests.

use proptest::prelude::*;

use autoplexity::codec::{abbreviate, decode, decode_with_sigma, encode, enumerate_codes, ECode};
use autoplexity::nfa::Run;
use autoplexity::search::{lower_bound, nfa_complexity, state_bound};
use autoplexity::words::{
    is_square_free, is_strongly_cube_free, max_power_index, square_lengths, Word,
};

fn binary_word() -> impl Strategy<Value = Word> {
    proptest::collection::vec(0u8..2, 0..24).prop_map(|letters| Word::new(letters, 2).unwrap())
}

fn ternary_word() -> impl Strategy<Value = Word> {
    proptest::collection::vec(0u8..3, 0..40).prop_map(|letters| Word::new(letters, 3).unwrap())
}

/// A canonical state sequence one longer than the word.
fn canonical_run() -> impl Strategy<Value = Run> {
    (proptest::collection::vec(0u8..2, 1..12), proptest::collection::vec(0usize..12, 1..12))
        .prop_map(|(letters, raw)| {
            let n = letters.len();
            let mut states = vec![0usize];
            let mut max = 0usize;
            for i in 0..n {
                let choice = raw[i % raw.len()] % (max + 2);
                states.push(choice);
                max = max.max(choice);
            }
            let word = Word::new(letters, 2).unwrap();
            Run::new(states, word).unwrap().canonicalize()
        })
}

proptest! {
    #[test]
    fn power_predicates_are_consistent(word in ternary_word()) {
        let report = max_power_index(&word);
        prop_assert_eq!(is_square_free(&word), report.max_exponent <= 1);
        if is_strongly_cube_free(&word) {
            prop_assert!(report.max_exponent <= 2);
        }
        if let Some((start, period, k)) = report.witness {
            let x = word.letters();
            let piece = &x[start..start + period];
            for rep in 1..k as usize {
                prop_assert_eq!(&x[start + rep * period..start + (rep + 1) * period], piece);
            }
        }
    }

    #[test]
    fn predicates_respect_word_symmetries(word in ternary_word()) {
        for image in [word.reversed(), word.complemented()] {
            prop_assert_eq!(is_square_free(&word), is_square_free(&image));
            prop_assert_eq!(is_strongly_cube_free(&word), is_strongly_cube_free(&image));
            prop_assert_eq!(
                max_power_index(&word).max_exponent,
                max_power_index(&image).max_exponent
            );
            prop_assert_eq!(square_lengths(&word).lengths, square_lengths(&image).lengths);
        }
    }

    #[test]
    fn complexity_sandwich_on_random_words(word in binary_word()) {
        let result = nfa_complexity(&word);
        prop_assert!(result.value <= state_bound(word.len()));
        if !word.is_empty() {
            prop_assert!(result.value >= lower_bound(&word));
        }
        prop_assert_eq!(result.witness.nfa.state_count(), result.value);
        prop_assert!(result.witness.nfa.uniquely_accepts(&word));
    }

    #[test]
    fn code_text_round_trips(word in binary_word()) {
        let code = nfa_complexity(&word).witness.code;
        let reparsed: ECode = code.to_string().parse().unwrap();
        prop_assert_eq!(&reparsed, &code);
        prop_assert_eq!(
            decode_with_sigma(&reparsed, word.sigma()).unwrap(),
            decode_with_sigma(&code, word.sigma()).unwrap()
        );
    }

    #[test]
    fn uniquely_accepting_runs_round_trip(run in canonical_run()) {
        let m = run.induced_nfa();
        if m.uniquely_accepts(run.word()) {
            let path = abbreviate(&run).unwrap();
            let code = encode(&path).unwrap();
            prop_assert!(code.tokens().len() <= 2 * path.edges().len());
            prop_assert_eq!(decode_with_sigma(&code, run.word().sigma()).unwrap(), m);
        }
    }

    #[test]
    fn random_codes_decode_or_fail_cleanly(tokens in proptest::collection::vec(0usize..6, 1..14)) {
        // Map raw draws onto the token alphabet and rely on decode to
        // either build an automaton or report a structured error.
        let text: String = tokens
            .iter()
            .map(|&t| match t {
                0 => "0",
                1 => "1",
                2 => "[",
                3 => "]0",
                4 => "+",
                _ => "*",
            })
            .collect();
        if let Ok(code) = text.parse::<ECode>() {
            let _ = decode(&code);
        }
    }
}

#[test]
fn enumerated_codes_within_four_symbol_bound() {
    for max_tokens in 1..=6 {
        assert!(enumerate_codes(max_tokens, 1).len() <= 4usize.pow(max_tokens as u32));
    }
}
