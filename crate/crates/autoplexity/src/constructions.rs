//! Explicit witnesses and extremal words.
//!
//! * the `b(n)`-state automaton proving the sharp upper bound;
//! * single-loop witnesses for periodic acceptance;
//! * cube-free binary words `w w ŵ` of unbounded deficiency;
//! * integer loop-length triples whose doubled sum has a unique
//!   representation, and the resulting flower automata certifying
//!   unbounded deficiency for strongly cube-free ternary words.

use thiserror::Error;

use crate::codec::{ECode, Token};
use crate::nfa::{Nfa, PathCount, Run};
use crate::search::{state_bound, DeficiencyRecord};
use crate::words::{is_strongly_cube_free, max_power_index, thue_bit, thue_prefix, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("no strongly cube-free square of period {period} within horizon {horizon}")]
    ScanHorizon { period: usize, horizon: usize },
    #[error("no admissible loop parameter u_{index} below {limit}")]
    GuardExhausted { index: usize, limit: u64 },
    #[error("construction postcondition failed: {0}")]
    PostconditionFailed(&'static str),
}

/// The accepting run of the `b(n)`-state upper-bound witness: walk out
/// along a state path, take one self-loop at the far end, walk back.
/// Even lengths append a pendant edge from the start to a fresh accept
/// state after the length-(n−1) round trip.
pub fn ceiling_run(w: &Word) -> Run {
    let n = w.len();
    if n == 0 {
        return Run::new(vec![0], w.clone()).unwrap();
    }
    let odd = n % 2 == 1;
    let m = if odd { (n - 1) / 2 } else { (n - 2) / 2 };
    let mut states = Vec::with_capacity(n + 1);
    states.extend(0..=m);
    states.push(m);
    states.extend((0..m).rev());
    if !odd {
        states.push(m + 1);
    }
    Run::new(states, w.clone()).unwrap()
}

/// A `b(n)`-state automaton uniquely accepting `w`.
pub fn ceiling_witness(w: &Word) -> Nfa {
    ceiling_run(w).induced_nfa()
}

/// A single directed cycle of `|w|` states spelling `w`, accepting at
/// the state reached after `total_len` steps. Out-degree one everywhere
/// makes every accepted length have exactly one path.
pub fn loop_witness(w: &Word, total_len: usize) -> Nfa {
    let len = w.len();
    assert!(len >= 1, "loop witness needs a nonempty word");
    let transitions = w
        .letters()
        .iter()
        .enumerate()
        .map(|(i, &a)| (i, a, (i + 1) % len));
    Nfa::new(len, w.sigma(), 0, [total_len % len], transitions).unwrap()
}

/// First start index of a square of period `period` in the Thue word,
/// scanned up to `horizon` bits.
fn thue_square_position(period: usize, horizon: usize) -> Option<usize> {
    let t = thue_prefix(horizon);
    let bits = t.letters();
    (0..horizon.saturating_sub(2 * period))
        .find(|&i| bits[i..i + period] == bits[i + period..i + 2 * period])
}

/// A cube-free binary word `x = w w ŵ` with deficiency at least `k`,
/// where `|w| = 2^n ≥ 2k+1`, `ww` is a strongly cube-free square taken
/// from the Thue word, and `ŵ` drops the last letter of `w`.
///
/// The single loop on `w` uniquely accepts `x`, so
/// `A_N(x) ≤ |w|` and `D(x) ≥ b(|x|) − |w| ≥ k`.
pub fn cube_free_high_deficiency(k: usize) -> Result<Word, ConstructionError> {
    let mut period = 1usize;
    while period < 2 * k + 1 {
        period *= 2;
    }
    let horizon = 4 * period + 16;
    let start = thue_square_position(period, horizon)
        .ok_or(ConstructionError::ScanHorizon { period, horizon })?;
    let t = thue_prefix(start + 2 * period);
    let w = t.slice(start, start + period);

    let square = w.concat(&w);
    if !is_strongly_cube_free(&square) {
        return Err(ConstructionError::PostconditionFailed("ww strongly cube-free"));
    }
    let x = square.concat(&w.slice(0, period - 1));
    if max_power_index(&x).max_exponent > 2 {
        return Err(ConstructionError::PostconditionFailed("x cube-free"));
    }
    let witness = loop_witness(&w, x.len());
    if !witness.uniquely_accepts(&x) {
        return Err(ConstructionError::PostconditionFailed("loop witness uniqueness"));
    }
    if state_bound(x.len()) - period < k {
        return Err(ConstructionError::PostconditionFailed("deficiency target"));
    }
    Ok(x)
}

/// Loop lengths for the flower construction.
///
/// `base_values[j−1] = x_{j,k} = 3^{k−j}·(3u_{j−1}+2)` grows with `j`;
/// `loop_lengths` lists the same values largest-first, the order the
/// loops appear in the witness word. Doubling the total then has the
/// all-twos vector as its only non-negative representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleSequence {
    pub k: usize,
    /// `x_{1,k} < x_{2,k} < …`, as constructed inductively.
    pub base_values: Vec<u64>,
    /// The same lengths in decreasing word order.
    pub loop_lengths: Vec<u64>,
    /// Chosen parameters `u_1 … u_{k−1}`.
    pub us: Vec<u64>,
}

impl TripleSequence {
    pub fn total(&self) -> u64 {
        self.loop_lengths.iter().sum()
    }
}

/// True iff the all-twos vector is the unique solution of
/// `Σ aᵢ·xsᵢ = 2·Σ xsᵢ` over `0 ≤ aᵢ ≤ bound`.
pub fn sum_condition_oracle(xs: &[u64], bound: u64) -> bool {
    assert!(!xs.is_empty() && xs.iter().all(|&x| x > 0));
    let target: u64 = 2 * xs.iter().sum::<u64>();
    let mut solutions = 0u32;
    let mut all_twos_seen = false;
    let mut coeffs = vec![0u64; xs.len()];
    fn go(
        xs: &[u64],
        bound: u64,
        idx: usize,
        remaining: u64,
        coeffs: &mut Vec<u64>,
        solutions: &mut u32,
        all_twos_seen: &mut bool,
    ) {
        if *solutions >= 2 {
            return;
        }
        if idx == xs.len() {
            if remaining == 0 {
                *solutions += 1;
                if coeffs.iter().all(|&c| c == 2) {
                    *all_twos_seen = true;
                }
            }
            return;
        }
        // Remaining coefficients cannot overshoot the target.
        let max_a = (remaining / xs[idx]).min(bound);
        for a in 0..=max_a {
            coeffs[idx] = a;
            go(xs, bound, idx + 1, remaining - a * xs[idx], coeffs, solutions, all_twos_seen);
            coeffs[idx] = 0;
        }
    }
    go(xs, bound, 0, target, &mut coeffs, &mut solutions, &mut all_twos_seen);
    solutions == 1 && all_twos_seen
}

/// Bound large enough to cover every representation of the doubled sum.
fn oracle_bound(xs: &[u64]) -> u64 {
    let total: u64 = xs.iter().sum();
    2 * total / xs.iter().min().copied().unwrap_or(1) + 1
}

const U_SEARCH_LIMIT: u64 = 10_000;

/// Greedy-minimal parameter choice for the level-`k` loop lengths.
///
/// Each `u_j` is the least value satisfying, with
/// `x_{j+1,k} = 3^{k−j−1}(3u_j+2)`:
///
/// 1. the growth guard `3u_j + 2 > 2·Σ_{i≤j} x_{i,j}` that makes the
///    modulo-3 descent force coefficient 2 at level `j+1`;
/// 2. the spacing `x_{j,k} + 1 < x_{j+1,k}`;
/// 3. the Thue-bit guard `t_{x_{j+1,k}} ≠ t_{x_{j,k}−1}`, the condition
///    the strong-cube-freeness argument consumes for the word order
///    (largest loop first).
///
/// The doubled-sum uniqueness is re-verified by brute force afterwards.
pub fn triple_sequence(k: usize) -> Result<TripleSequence, ConstructionError> {
    assert!(k >= 1);
    let mut base = vec![1u64]; // x_{1,1}
    let mut us = Vec::new();
    for level in 2..=k {
        // base currently holds the level-(level−1) values x_{i,level−1}.
        let prev_sum: u64 = base.iter().sum();
        let prev_top = base[level - 2] * 3; // x_{level-1, level} = 3·x_{level-1, level-1}
        let found = (0..U_SEARCH_LIMIT).find(|&u| {
            let x_new = 3 * u + 2;
            if x_new <= 2 * prev_sum {
                return false;
            }
            if x_new <= prev_top + 1 {
                return false;
            }
            // Guard for the final order at level k: both values scale by
            // 3^(k-level) when lifted, so apply the lift now.
            let lift = 3u64.pow((k - level) as u32);
            thue_bit(x_new * lift) != thue_bit(prev_top * lift - 1)
        });
        let u = found.ok_or(ConstructionError::GuardExhausted { index: level - 1, limit: U_SEARCH_LIMIT })?;
        us.push(u);
        for b in base.iter_mut() {
            *b *= 3;
        }
        base.push(3 * u + 2);
    }
    let base_values: Vec<u64> = base;
    let mut loop_lengths = base_values.clone();
    loop_lengths.reverse();

    let seq = TripleSequence { k, base_values, loop_lengths, us };
    if !sum_condition_oracle(&seq.base_values, oracle_bound(&seq.base_values)) {
        return Err(ConstructionError::PostconditionFailed("doubled-sum uniqueness"));
    }
    Ok(seq)
}

/// A chain of loops joined by bridge edges; accepts at the entry of the
/// final loop.
#[derive(Clone, Debug)]
pub struct FlowerNfa {
    pub nfa: Nfa,
    pub loop_lengths: Vec<u64>,
    /// The accepting run on the witness word: each loop twice, then a
    /// bridge to the next loop.
    pub run: Run,
    /// Conventional flower code: `[+…]` per loop (a fork marker on
    /// every loop entry) with the accept marker before the final loop.
    pub code: ECode,
}

/// The witness word, flower automaton, and certified deficiency record
/// for strongly cube-free ternary words: `k = 2d−1` loops, where loop
/// `i` spells `2 t_1 … t_{x_i−1}` and consecutive loops are bridged by
/// the Thue bit `t_{x_i}`.
pub fn ternary_witness(d: usize) -> Result<(Word, FlowerNfa, DeficiencyRecord), ConstructionError> {
    assert!(d >= 1);
    let k = 2 * d - 1;
    let seq = triple_sequence(k)?;
    let xs = &seq.loop_lengths;

    let loop_word = |x: u64| -> Vec<u8> {
        let mut letters = vec![2u8];
        letters.extend((1..x).map(thue_bit));
        letters
    };

    // Word: (2 τ_1)² t_{x_1} (2 τ_2)² t_{x_2} … (2 τ_k)².
    let mut letters = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        let lw = loop_word(x);
        letters.extend_from_slice(&lw);
        letters.extend_from_slice(&lw);
        if i + 1 < xs.len() {
            letters.push(thue_bit(x));
        }
    }
    let word = Word::new(letters, 3).unwrap();

    let total: u64 = xs.iter().sum();
    let expected_len = (k - 1) as u64 + 2 * total;
    if word.len() as u64 != expected_len {
        return Err(ConstructionError::PostconditionFailed("witness word length"));
    }

    // Flower automaton, its accepting run (each loop twice, return to
    // the entry, then the bridge), and the conventional code.
    let mut transitions = Vec::new();
    let mut run_states = Vec::new();
    let mut tokens = Vec::new();
    let mut offset = 0usize;
    for (i, &x) in xs.iter().enumerate() {
        let x = x as usize;
        let lw = loop_word(x as u64);
        for (r, &a) in lw.iter().enumerate() {
            transitions.push((offset + r, a, offset + (r + 1) % x));
        }
        for _ in 0..2 {
            run_states.extend(offset..offset + x);
        }
        run_states.push(offset);
        if i + 1 == xs.len() {
            tokens.push(Token::Star);
        }
        tokens.push(Token::Open);
        tokens.push(Token::Plus);
        tokens.extend(lw[..x - 1].iter().map(|&a| Token::Letter(a)));
        tokens.push(Token::Close(lw[x - 1]));
        if i + 1 < xs.len() {
            let bridge = thue_bit(x as u64);
            transitions.push((offset, bridge, offset + x));
            tokens.push(Token::Letter(bridge));
            offset += x;
        }
    }
    let accept = offset;
    let nfa = Nfa::new(total as usize, 3, 0, [accept], transitions).unwrap();
    let run = Run::new(run_states, word.clone()).unwrap();

    if nfa.count_accepting_paths(word.len()) != PathCount::One
        || !nfa.accepts(&word).unwrap_or(false)
    {
        return Err(ConstructionError::PostconditionFailed("flower unique acceptance"));
    }
    if !is_strongly_cube_free(&word) {
        return Err(ConstructionError::PostconditionFailed("witness strongly cube-free"));
    }
    let b = state_bound(word.len());
    let states = total as usize;
    if b - states < d {
        return Err(ConstructionError::PostconditionFailed("deficiency target"));
    }

    let code = ECode::new(tokens);
    let record = DeficiencyRecord {
        word: word.to_string(),
        n: word.len(),
        b,
        a_n: states,
        d: b - states,
        code: code.to_string(),
    };
    let flower = FlowerNfa { nfa, loop_lengths: xs.clone(), run, code };
    Ok((word, flower, record))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{abbreviate, decode, encode};
    use crate::search::{lower_bound, nfa_complexity};
    use crate::words::{is_square_free, square_lengths};

    fn w(text: &str) -> Word {
        Word::parse(text).unwrap()
    }

    #[test]
    fn ceiling_witness_basic_shapes() {
        let m = ceiling_witness(&w("010"));
        assert_eq!(m.state_count(), 2);
        assert_eq!(m.transitions(), &[(0, 0, 1), (1, 0, 0), (1, 1, 1)]);
        assert!(m.uniquely_accepts(&w("010")));

        let m = ceiling_witness(&w("01"));
        assert_eq!(m.state_count(), 2);
        assert_eq!(m.transitions(), &[(0, 0, 0), (0, 1, 1)]);
        assert!(m.uniquely_accepts(&w("01")));

        let m = ceiling_witness(&Word::empty());
        assert_eq!(m.state_count(), 1);
        assert!(m.uniquely_accepts(&Word::empty()));
    }

    #[test]
    fn ceiling_witness_exhaustive_small() {
        for n in 0..=10usize {
            for bits in 0..(1u32 << n) {
                let letters: Vec<u8> = (0..n).map(|i| ((bits >> i) & 1) as u8).collect();
                let word = Word::new(letters, 2).unwrap();
                let m = ceiling_witness(&word);
                assert_eq!(m.state_count(), state_bound(n), "{word}");
                assert!(m.uniquely_accepts(&word), "{word}");
            }
        }
    }

    #[test]
    fn loop_witness_examples() {
        assert!(loop_witness(&w("01"), 5).uniquely_accepts(&w("01010")));
        assert!(loop_witness(&w("0110"), 11).uniquely_accepts(&w("01100110011")));
        assert!(loop_witness(&w("0"), 3).uniquely_accepts(&w("000")));
    }

    #[test]
    fn loop_witness_single_path_per_length() {
        let m = loop_witness(&w("0110"), 11);
        for len in 0..=12 {
            let expected = if len % 4 == 3 { PathCount::One } else { PathCount::Zero };
            assert_eq!(m.count_accepting_paths(len), expected);
        }
    }

    #[test]
    fn loop_witness_pins_deficiency_of_wwwhat() {
        // A_N(01100110011) is exactly 4: the loop gives ≤ 4 and the
        // revisit bound gives ≥ 4, so D = b(11) − 4 = 2.
        let x = w("01100110011");
        assert_eq!(lower_bound(&x), 4);
        assert_eq!(nfa_complexity(&x).value, 4);
        assert_eq!(state_bound(11) - 4, 2);
    }

    #[test]
    fn cube_free_high_deficiency_small() {
        let x = cube_free_high_deficiency(1).unwrap();
        assert_eq!(x.len(), 11);
        assert!(!is_square_free(&x));
        assert!(max_power_index(&x).max_exponent == 2);

        let x = cube_free_high_deficiency(2).unwrap();
        assert_eq!(x.len(), 23);
        let period = 8;
        assert!(loop_witness(&x.slice(0, period), x.len()).uniquely_accepts(&x));
        assert!(state_bound(23) - period >= 4);
        // x contains the square ww of length 2^(n+1) = 16.
        assert!(square_lengths(&x).lengths.contains(&16));
    }

    #[test]
    fn triple_sequences_small() {
        let s = triple_sequence(1).unwrap();
        assert_eq!(s.base_values, vec![1]);

        let s = triple_sequence(2).unwrap();
        assert_eq!(s.base_values, vec![3, 5]);
        assert_eq!(s.us, vec![1]);

        let s = triple_sequence(3).unwrap();
        assert_eq!(s.base_values, vec![9, 15, 17]);
        assert_eq!(s.loop_lengths, vec![17, 15, 9]);
        // Only (2,2,2) solves 9a + 15b + 17c = 82.
        assert!(sum_condition_oracle(&[9, 15, 17], 10));
    }

    #[test]
    fn triple_sequences_satisfy_guards() {
        for k in 1..=5 {
            let s = triple_sequence(k).unwrap();
            for i in 0..k - 1 {
                assert!(s.base_values[i] + 1 < s.base_values[i + 1]);
                // Word-order guard: t_{x_i} ≠ t_{x_{i+1}−1} with x's decreasing.
                assert_ne!(
                    thue_bit(s.loop_lengths[i]),
                    thue_bit(s.loop_lengths[i + 1] - 1),
                    "k={k} i={i}"
                );
            }
            assert!(sum_condition_oracle(&s.base_values, oracle_bound(&s.base_values)));
        }
    }

    #[test]
    fn sum_condition_examples() {
        assert!(sum_condition_oracle(&[3, 5], 10));
        assert!(!sum_condition_oracle(&[1, 1], 4));
        assert!(sum_condition_oracle(&[1], 4));
    }

    #[test]
    fn ternary_witness_d1() {
        let (word, flower, record) = ternary_witness(1).unwrap();
        assert_eq!(word, w("22"));
        assert_eq!(flower.nfa.state_count(), 1);
        assert_eq!(record.d, 1);
        assert_eq!(record.b, state_bound(2));
        assert_eq!(flower.code.to_string(), "*[+]2");
        assert_eq!(decode(&flower.code).unwrap(), flower.nfa);
    }

    #[test]
    fn ternary_witness_d2() {
        let (word, flower, record) = ternary_witness(2).unwrap();
        assert_eq!(flower.loop_lengths, vec![17, 15, 9]);
        assert_eq!(word.len(), 2 + 2 * 41);
        assert_eq!(flower.nfa.state_count(), 41);
        assert!(record.d >= 2);
        assert!(is_strongly_cube_free(&word));
        assert_eq!(flower.nfa.count_accepting_paths(word.len()), PathCount::One);

        // The stored conventional code and the encoded run agree on the
        // automaton (the stored code declares an unused fork on the
        // accept loop's entry, which reconstruction ignores).
        assert_eq!(decode(&flower.code).unwrap(), flower.nfa);
        let encoded = encode(&abbreviate(&flower.run).unwrap()).unwrap();
        assert_eq!(decode(&encoded).unwrap(), flower.nfa);
        assert_eq!(flower.run.induced_nfa(), flower.nfa);
    }

    #[test]
    fn flower_code_shape() {
        let (_, flower, _) = ternary_witness(2).unwrap();
        let mut expected = String::new();
        let xs = &flower.loop_lengths;
        for (i, &x) in xs.iter().enumerate() {
            expected.push_str("[+");
            expected.push_str(&"0".repeat(x as usize - 1));
            expected.push(']');
            if i + 1 < xs.len() {
                expected.push('0');
            }
        }
        assert_eq!(flower.code.shape(), expected);
        // Star marks the final loop.
        let text = flower.code.to_string();
        let star = text.find('*').unwrap();
        assert_eq!(&text[star + 1..star + 3], "[+");
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn flower_accepted_lengths_match_loop_combinations() {
        let (word, flower, _) = ternary_witness(2).unwrap();
        let xs = &flower.loop_lengths;
        let k = xs.len() as u64;
        let max_len = word.len() + 30;
        let mut representable = vec![false; max_len + 1];
        for a in 0..=(max_len as u64 / xs[0] + 1) {
            for b in 0..=(max_len as u64 / xs[1] + 1) {
                for c in 0..=(max_len as u64 / xs[2] + 1) {
                    let len = k - 1 + a * xs[0] + b * xs[1] + c * xs[2];
                    if len <= max_len as u64 {
                        representable[len as usize] = true;
                    }
                }
            }
        }
        for len in 0..=max_len {
            let count = flower.nfa.count_accepting_paths(len);
            assert_eq!(count != PathCount::Zero, representable[len], "len {len}");
        }
        assert_eq!(flower.nfa.count_accepting_paths(word.len()), PathCount::One);
    }
}
