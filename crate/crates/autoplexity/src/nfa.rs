//! ε-free nondeterministic finite automata and accepting-path counting.
//!
//! Path counts saturate at 2: a witness check only distinguishes
//! zero, one, and many accepting paths. Paths are sequences of
//! transitions, so parallel edges with different labels count
//! separately.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::words::Word;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NfaError {
    #[error("word uses letter {letter} but the automaton alphabet is {sigma}")]
    AlphabetMismatch { letter: u8, sigma: u8 },
    #[error("reversal requires exactly one accept state, got {0}")]
    MultipleAcceptStates(usize),
    #[error("state index {state} out of range for {count} states")]
    StateOutOfRange { state: usize, count: usize },
    #[error("permutation is not a bijection on {0} states")]
    BadPermutation(usize),
}

/// Saturating accepting-path count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathCount {
    Zero,
    One,
    Many,
}

impl PathCount {
    fn from_sat(v: u8) -> Self {
        match v {
            0 => PathCount::Zero,
            1 => PathCount::One,
            _ => PathCount::Many,
        }
    }
}

/// An ε-free NFA over the alphabet `{0, …, σ−1}`.
///
/// The transition set is kept sorted and duplicate-free so that equal
/// automata compare equal and text output is deterministic.
#[derive(Clone, PartialEq, Eq)]
pub struct Nfa {
    state_count: usize,
    sigma: u8,
    initial: usize,
    accept: BTreeSet<usize>,
    transitions: Vec<(usize, u8, usize)>,
}

impl Nfa {
    pub fn new(
        state_count: usize,
        sigma: u8,
        initial: usize,
        accept: impl IntoIterator<Item = usize>,
        transitions: impl IntoIterator<Item = (usize, u8, usize)>,
    ) -> Result<Self, NfaError> {
        let accept: BTreeSet<usize> = accept.into_iter().collect();
        let mut transitions: Vec<(usize, u8, usize)> = transitions.into_iter().collect();
        transitions.sort_unstable();
        transitions.dedup();
        let check = |state: usize| {
            if state >= state_count {
                Err(NfaError::StateOutOfRange { state, count: state_count })
            } else {
                Ok(())
            }
        };
        check(initial)?;
        for &s in &accept {
            check(s)?;
        }
        for &(src, letter, dst) in &transitions {
            check(src)?;
            check(dst)?;
            if letter >= sigma {
                return Err(NfaError::AlphabetMismatch { letter, sigma });
            }
        }
        Ok(Nfa { state_count, sigma, initial, accept, transitions })
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn sigma(&self) -> u8 {
        self.sigma
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn accept_states(&self) -> &BTreeSet<usize> {
        &self.accept
    }

    pub fn transitions(&self) -> &[(usize, u8, usize)] {
        &self.transitions
    }

    /// Same automaton with a different (single) accept state.
    pub fn with_accept(&self, state: usize) -> Result<Self, NfaError> {
        if state >= self.state_count {
            return Err(NfaError::StateOutOfRange { state, count: self.state_count });
        }
        let mut nfa = self.clone();
        nfa.accept = BTreeSet::from([state]);
        Ok(nfa)
    }

    /// Targets of `(state, letter)` transitions, grouped for O(1) access.
    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.state_count * self.sigma as usize];
        for &(src, letter, dst) in &self.transitions {
            adj[src * self.sigma as usize + letter as usize].push(dst);
        }
        adj
    }

    /// States reachable from the initial state by spelling `w`.
    pub fn end_states(&self, w: &Word) -> Result<BTreeSet<usize>, NfaError> {
        if let Some(&letter) = w.letters().iter().find(|&&l| l >= self.sigma) {
            return Err(NfaError::AlphabetMismatch { letter, sigma: self.sigma });
        }
        let adj = self.adjacency();
        let mut current = BTreeSet::from([self.initial]);
        for &letter in w.letters() {
            let mut next = BTreeSet::new();
            for &s in &current {
                for &t in &adj[s * self.sigma as usize + letter as usize] {
                    next.insert(t);
                }
            }
            current = next;
        }
        Ok(current)
    }

    /// True iff some labeled path from the initial state to an accept
    /// state spells `w`.
    pub fn accepts(&self, w: &Word) -> Result<bool, NfaError> {
        Ok(self.end_states(w)?.iter().any(|s| self.accept.contains(s)))
    }

    /// Saturating count of length-`n` transition paths from the initial
    /// state to any accept state, labels ignored.
    pub fn count_accepting_paths(&self, n: usize) -> PathCount {
        // Multiplicity of (src, dst) pairs: parallel edges with distinct
        // labels count as distinct paths.
        let mut out: Vec<Vec<(usize, u8)>> = vec![Vec::new(); self.state_count];
        for &(src, _, dst) in &self.transitions {
            match out[src].iter_mut().find(|(t, _)| *t == dst) {
                Some((_, m)) => *m = m.saturating_add(1).min(2),
                None => out[src].push((dst, 1)),
            }
        }
        let mut counts = vec![0u8; self.state_count];
        counts[self.initial] = 1;
        for _ in 0..n {
            let mut next = vec![0u8; self.state_count];
            for s in 0..self.state_count {
                if counts[s] == 0 {
                    continue;
                }
                for &(t, m) in &out[s] {
                    next[t] = (next[t] + counts[s].min(2) * m).min(2);
                }
            }
            counts = next;
        }
        let total: u8 = self
            .accept
            .iter()
            .fold(0u8, |acc, &s| (acc + counts[s]).min(2));
        PathCount::from_sat(total)
    }

    /// True iff the automaton accepts `w` along exactly one accepting
    /// path of length `|w|`.
    pub fn uniquely_accepts(&self, w: &Word) -> bool {
        self.accepts(w).unwrap_or(false) && self.count_accepting_paths(w.len()) == PathCount::One
    }

    /// Reverses every transition and swaps the initial state with the
    /// unique accept state.
    pub fn reverse(&self) -> Result<Self, NfaError> {
        if self.accept.len() != 1 {
            return Err(NfaError::MultipleAcceptStates(self.accept.len()));
        }
        let accept = *self.accept.iter().next().unwrap();
        let transitions = self
            .transitions
            .iter()
            .map(|&(src, letter, dst)| (dst, letter, src));
        Nfa::new(self.state_count, self.sigma, accept, [self.initial], transitions)
    }

    /// Relabels every transition letter `a ↦ σ−1−a`.
    pub fn complement_labels(&self) -> Self {
        let transitions = self
            .transitions
            .iter()
            .map(|&(src, letter, dst)| (src, self.sigma - 1 - letter, dst));
        Nfa::new(self.state_count, self.sigma, self.initial, self.accept.clone(), transitions)
            .expect("relabeling preserves validity")
    }

    /// Renames state `s` to `perm[s]`.
    pub fn permute_states(&self, perm: &[usize]) -> Result<Self, NfaError> {
        if perm.len() != self.state_count {
            return Err(NfaError::BadPermutation(self.state_count));
        }
        let mut seen = vec![false; self.state_count];
        for &p in perm {
            if p >= self.state_count || seen[p] {
                return Err(NfaError::BadPermutation(self.state_count));
            }
            seen[p] = true;
        }
        let transitions = self
            .transitions
            .iter()
            .map(|&(src, letter, dst)| (perm[src], letter, perm[dst]));
        Nfa::new(
            self.state_count,
            self.sigma,
            perm[self.initial],
            self.accept.iter().map(|&s| perm[s]),
            transitions,
        )
    }
}

impl fmt::Display for Nfa {
    /// Diagnostic text form: a header line followed by one transition
    /// triple per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let accept: Vec<String> = self.accept.iter().map(|s| s.to_string()).collect();
        writeln!(
            f,
            "q={} init={} accept={}",
            self.state_count,
            self.initial,
            accept.join(",")
        )?;
        for &(src, letter, dst) in &self.transitions {
            writeln!(f, "{} {} {}", src, letter, dst)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Nfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// A state sequence paired with the word it reads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    states: Vec<usize>,
    word: Word,
}

impl Run {
    /// Builds a run; the state sequence must be one longer than the word.
    pub fn new(states: Vec<usize>, word: Word) -> Option<Self> {
        if states.len() == word.len() + 1 {
            Some(Run { states, word })
        } else {
            None
        }
    }

    pub fn states(&self) -> &[usize] {
        &self.states
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    /// True iff states are numbered in first-visit order starting at 0.
    pub fn is_canonical(&self) -> bool {
        let mut next = 0usize;
        for &s in &self.states {
            if s > next {
                return false;
            }
            if s == next {
                next += 1;
            }
        }
        true
    }

    /// Renumbers states in first-visit order.
    pub fn canonicalize(&self) -> Run {
        let size = self.states.iter().copied().max().unwrap_or(0) + 1;
        let mut map: Vec<Option<usize>> = vec![None; size];
        let mut next = 0usize;
        let states = self
            .states
            .iter()
            .map(|&s| {
                *map[s].get_or_insert_with(|| {
                    let id = next;
                    next += 1;
                    id
                })
            })
            .collect();
        Run { states, word: self.word.clone() }
    }

    /// The automaton with exactly the edges traversed by this run, on
    /// first-visit state numbering: initial `q_0`, accept `{q_n}`,
    /// transitions deduplicated, one state per distinct run state.
    pub fn induced_nfa(&self) -> Nfa {
        if !self.is_canonical() {
            return self.canonicalize().induced_nfa();
        }
        let state_count = self.states.iter().copied().max().unwrap_or(0) + 1;
        let transitions = self
            .word
            .letters()
            .iter()
            .enumerate()
            .map(|(i, &a)| (self.states[i], a, self.states[i + 1]));
        Nfa::new(
            state_count,
            self.word.sigma(),
            self.states[0],
            [*self.states.last().unwrap()],
            transitions,
        )
        .expect("canonical run states are contiguous")
    }
}
