//! Nondeterministic automatic complexity of finite words.
//!
//! The central quantity is `A_N(w)`: the least number of states of an
//! ε-free NFA that accepts `w` along exactly one accepting path of length
//! `|w|`. It is bounded by `b(n) = ⌊n/2⌋ + 1`, and the gap
//! `D(w) = b(|w|) − A_N(w)` is the *complexity deficiency* of `w`.
//!
//! The crate provides:
//!
//! * [`words`]: word types, power-freeness predicates, Thue word and
//!   ternary square-free generators, pruned word enumeration;
//! * [`nfa`]: automata, acceptance, saturating path counting, unique
//!   acceptance, run ↔ automaton conversion, symmetry transforms;
//! * [`codec`]: the bracket code serializing a witness automaton's
//!   abbreviated accepting path, with encode/decode;
//! * [`search`]: exact `A_N` (and small-scale DFA complexity `A_D`)
//!   via canonical pruned run search, plus deficiency queries;
//! * [`constructions`]: explicit witnesses: the `b(n)`-state upper-bound
//!   automaton, single-loop witnesses, high-deficiency cube-free and
//!   strongly cube-free words with their flower automata;
//! * [`experiments`]: exhaustive sweeps: the positive-deficiency table,
//!   hereditary-deficiency counts, theorem suites, dimension profiles;
//! * [`store`]: an append-only, human-diffable result cache.

pub mod codec;
pub mod constructions;
pub mod experiments;
pub mod nfa;
pub mod search;
pub mod store;
pub mod words;

pub use nfa::{Nfa, PathCount, Run};
pub use search::{state_bound, ComplexityResult, DeficiencyRecord};
pub use words::Word;
