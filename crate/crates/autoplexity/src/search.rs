//! Exact nondeterministic automatic complexity by pruned search over
//! canonical accepting runs.
//!
//! A minimal witness can be assumed to contain only the edges of its
//! accepting run, so searching state sequences `q_0 … q_n` (numbered in
//! first-visit order, next state drawn from the visited states plus one
//! fresh state) covers every witness size. The search is initialized
//! with the `b(n)`-state upper-bound witness and prunes on:
//!
//! * distinct-state count reaching the current best;
//! * per-state visit counts above the revisit bound implied by the
//!   highest power occurring in the word;
//! * in-degree/out-degree above two (counting an ε-edge into the
//!   initial state), which would contradict unique acceptance;
//! * a saturating path-count table maintained over the partial
//!   automaton: the run prefix must stay the only path of its length
//!   into its end state;
//! * excursion swaps: two excursions at a common state can be exchanged
//!   without changing the path length, so they must coincide as
//!   transition sequences in any uniquely-accepting run.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::{abbreviate, encode, ECode};
use crate::constructions;
use crate::nfa::{Nfa, Run};
use crate::words::{max_power_index, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("word of length {len} exceeds the DFA search limit {limit}")]
    DfaLengthLimit { len: usize, limit: usize },
}

/// Sharp upper bound `⌊n/2⌋ + 1` on the complexity of length-`n` words.
pub fn state_bound(n: usize) -> usize {
    n / 2 + 1
}

/// Maximum number of times a uniquely-accepting witness may visit one
/// state: one more than the highest power occurring in the word.
pub fn visit_bound(w: &Word) -> usize {
    max_power_index(w).max_exponent as usize + 1
}

/// `⌈(n+1) / visit_bound⌉`: the witness must host `n+1` state visits.
pub fn lower_bound(w: &Word) -> usize {
    let n = w.len();
    if n == 0 {
        return 1;
    }
    (n + 1).div_ceil(visit_bound(w))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub uniqueness_checks: u64,
}

/// A minimal witness: canonical run, induced automaton, bracket code.
#[derive(Clone, Debug)]
pub struct Witness {
    pub run: Run,
    pub nfa: Nfa,
    pub code: ECode,
}

#[derive(Clone, Debug)]
pub struct ComplexityResult {
    pub value: usize,
    pub witness: Witness,
    pub stats: SearchStats,
}

/// One word's deficiency data, as serialized by the CLI and service.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeficiencyRecord {
    pub word: String,
    pub n: usize,
    pub b: usize,
    pub a_n: usize,
    pub d: usize,
    pub code: String,
}

const MAXQ: usize = 16;
const MAXN: usize = 250;

struct Searcher<'w> {
    letters: &'w [u8],
    n: usize,
    vb: u8,
    floor: usize,
    deterministic: bool,
    stop_at_first: bool,
    best: usize,
    best_run: Option<Vec<u8>>,
    run: Vec<u8>,
    distinct: usize,
    visits: [u8; MAXQ],
    visit_times: [[u8; MAXN + 1]; MAXQ],
    out_edges: [[(u8, u8); 2]; MAXQ],
    out_len: [u8; MAXQ],
    in_deg: [u8; MAXQ],
    adj: [[(u8, u8); 2]; MAXQ],
    adj_len: [u8; MAXQ],
    cols: Vec<[u8; MAXQ]>,
    save_stack: Vec<[u8; MAXQ]>,
    nodes: u64,
    checks: u64,
    stopped: bool,
}

impl<'w> Searcher<'w> {
    /// `best_init` is an already-achieved witness size (or one above the
    /// target in decide mode); only strictly smaller witnesses are sought.
    fn new(word: &'w Word, best_init: usize, floor: usize, deterministic: bool, stop_at_first: bool) -> Self {
        let n = word.len();
        assert!(n <= MAXN, "word length {n} exceeds search capacity {MAXN}");
        let vb = visit_bound(word).min(n + 1) as u8;
        let mut cols = vec![[0u8; MAXQ]; n + 1];
        cols[0][0] = 1;
        let mut run = vec![0u8; n + 1];
        run[0] = 0;
        let mut s = Searcher {
            letters: word.letters(),
            n,
            vb,
            floor,
            deterministic,
            stop_at_first,
            best: best_init,
            best_run: None,
            run,
            distinct: 1,
            visits: [0; MAXQ],
            visit_times: [[0; MAXN + 1]; MAXQ],
            out_edges: [[(0, 0); 2]; MAXQ],
            out_len: [0; MAXQ],
            in_deg: [0; MAXQ],
            adj: [[(0, 0); 2]; MAXQ],
            adj_len: [0; MAXQ],
            cols,
            save_stack: Vec::with_capacity((n + 1) * (n + 2) / 2),
            nodes: 0,
            checks: 0,
            stopped: false,
        };
        s.visits[0] = 1;
        s.visit_times[0][0] = 0;
        s
    }

    fn run_search(&mut self) {
        if self.best > self.floor {
            self.dfs(0);
        }
    }

    fn edge_exists(&self, src: u8, letter: u8, dst: u8) -> bool {
        let es = &self.out_edges[src as usize];
        (0..self.out_len[src as usize] as usize).any(|i| es[i] == (letter, dst))
    }

    /// In deterministic mode, the forced successor on `letter`, if any.
    fn det_successor(&self, src: u8, letter: u8) -> Option<u8> {
        let es = &self.out_edges[src as usize];
        (0..self.out_len[src as usize] as usize)
            .find(|&i| es[i].0 == letter)
            .map(|i| es[i].1)
    }

    fn add_edge(&mut self, src: u8, letter: u8, dst: u8) {
        let s = src as usize;
        self.out_edges[s][self.out_len[s] as usize] = (letter, dst);
        self.out_len[s] += 1;
        self.in_deg[dst as usize] += 1;
        let al = self.adj_len[s] as usize;
        match (0..al).find(|&i| self.adj[s][i].0 == dst) {
            Some(i) => self.adj[s][i].1 += 1,
            None => {
                self.adj[s][al] = (dst, 1);
                self.adj_len[s] += 1;
            }
        }
    }

    fn remove_edge(&mut self, src: u8, letter: u8, dst: u8) {
        let s = src as usize;
        debug_assert_eq!(self.out_edges[s][self.out_len[s] as usize - 1], (letter, dst));
        self.out_len[s] -= 1;
        self.in_deg[dst as usize] -= 1;
        let al = self.adj_len[s] as usize;
        let i = (0..al).find(|&i| self.adj[s][i].0 == dst).unwrap();
        if self.adj[s][i].1 == 1 {
            self.adj[s].swap(i, al - 1);
            self.adj_len[s] -= 1;
        } else {
            self.adj[s][i].1 -= 1;
        }
    }

    /// Rebuilds path-count columns `1..=upto` over the current edge set;
    /// false when some run prefix stops being the unique path of its
    /// length into its end state.
    #[allow(clippy::needless_range_loop)] // indexed prefix of fixed arrays
    fn recompute_cols(&mut self, upto: usize) -> bool {
        let mut ok = true;
        for j in 1..=upto {
            let prev = self.cols[j - 1];
            let mut next = [0u8; MAXQ];
            for s in 0..self.distinct {
                let c = prev[s];
                if c == 0 {
                    continue;
                }
                for i in 0..self.adj_len[s] as usize {
                    let (t, m) = self.adj[s][i];
                    let cell = &mut next[t as usize];
                    *cell = (*cell + c * m).min(2);
                }
            }
            self.cols[j] = next;
            if next[self.run[j] as usize] != 1 {
                ok = false;
                break;
            }
        }
        ok
    }

    /// Appends column `j` from column `j−1` (no structural change).
    #[allow(clippy::needless_range_loop)] // indexed prefix of fixed arrays
    fn extend_col(&mut self, j: usize) -> bool {
        let prev = self.cols[j - 1];
        let mut next = [0u8; MAXQ];
        for s in 0..self.distinct {
            let c = prev[s];
            if c == 0 {
                continue;
            }
            for i in 0..self.adj_len[s] as usize {
                let (t, m) = self.adj[s][i];
                let cell = &mut next[t as usize];
                *cell = (*cell + c * m).min(2);
            }
        }
        self.cols[j] = next;
        next[self.run[j] as usize] == 1
    }

    /// Two excursions at a common state can be swapped without changing
    /// the accepted length; a uniquely-accepting run must therefore read
    /// the same transitions either way.
    fn excursions_commute(&self, t_a: usize, t_b: usize, t_new: usize) -> bool {
        let len2 = t_new - t_b;
        for r in 0..t_new - t_a {
            let i = t_a + r;
            let j = if r < len2 { t_b + r } else { t_a + (r - len2) };
            if i == j {
                continue;
            }
            if self.run[i] != self.run[j]
                || self.letters[i] != self.letters[j]
                || self.run[i + 1] != self.run[j + 1]
            {
                return false;
            }
        }
        true
    }

    fn dfs(&mut self, depth: usize) {
        self.nodes += 1;
        if self.stopped || self.distinct >= self.best {
            return;
        }
        if depth == self.n {
            // The maintained column invariant makes the run prefix the
            // unique length-n path into run[n] = the accept state.
            self.checks += 1;
            debug_assert!(self.current_run().induced_nfa().uniquely_accepts(&Word::new(
                self.letters.to_vec(),
                self.letters.iter().copied().max().map_or(1, |m| m + 1).max(2)
            )
            .unwrap()));
            self.best = self.distinct;
            self.best_run = Some(self.run.clone());
            if self.stop_at_first || self.best <= self.floor {
                self.stopped = true;
            }
            return;
        }

        let allowed = self.best - 1;
        let mut capacity = (allowed - self.distinct) * self.vb as usize;
        for s in 0..self.distinct {
            capacity += (self.vb - self.visits[s]) as usize;
        }
        if capacity < self.n - depth {
            return;
        }

        let cur = self.run[depth];
        let letter = self.letters[depth];
        let forced = if self.deterministic { self.det_successor(cur, letter) } else { None };

        // Existing states in most-recently-visited order.
        let mut tried: u16 = 0;
        for i in (0..=depth).rev() {
            let t = self.run[i];
            if tried & (1 << t) != 0 {
                continue;
            }
            tried |= 1 << t;
            self.try_candidate(depth, cur, letter, t, forced);
            if self.stopped {
                return;
            }
        }
        if self.distinct < allowed && self.distinct < MAXQ {
            self.try_candidate(depth, cur, letter, self.distinct as u8, forced);
        }
    }

    fn try_candidate(&mut self, depth: usize, cur: u8, letter: u8, t: u8, forced: Option<u8>) {
        let fresh = t as usize == self.distinct;
        if self.visits[t as usize] >= self.vb && !fresh {
            return;
        }
        let exists = !fresh && self.edge_exists(cur, letter, t);
        if let Some(f) = forced {
            if f != t {
                return;
            }
        }
        if !exists {
            if self.out_len[cur as usize] >= 2 {
                return;
            }
            let cap = if t == 0 { 1 } else { 2 };
            if !fresh && self.in_deg[t as usize] >= cap {
                return;
            }
        }

        let new_time = depth + 1;
        self.run[new_time] = t;

        if self.visits[t as usize] >= 2 {
            let v = self.visits[t as usize] as usize;
            let times = &self.visit_times[t as usize];
            for a in 0..v {
                for b in a + 1..v {
                    if !self.excursions_commute(times[a] as usize, times[b] as usize, new_time) {
                        return;
                    }
                }
            }
        }

        if fresh {
            self.distinct += 1;
        }
        let vt = self.visits[t as usize] as usize;
        self.visit_times[t as usize][vt] = new_time as u8;
        self.visits[t as usize] += 1;

        let ok = if exists {
            self.extend_col(new_time)
        } else {
            for j in 1..=depth {
                self.save_stack.push(self.cols[j]);
            }
            self.add_edge(cur, letter, t);
            self.recompute_cols(new_time)
        };

        if ok {
            self.dfs(new_time);
        }

        if !exists {
            self.remove_edge(cur, letter, t);
            for j in (1..=depth).rev() {
                self.cols[j] = self.save_stack.pop().unwrap();
            }
        }
        self.visits[t as usize] -= 1;
        if fresh {
            self.distinct -= 1;
        }
    }

    fn current_run(&self) -> Run {
        let sigma = self.letters.iter().copied().max().map_or(1, |m| m + 1).max(2);
        Run::new(
            self.run.iter().map(|&s| s as usize).collect(),
            Word::new(self.letters.to_vec(), sigma).unwrap(),
        )
        .unwrap()
    }

    fn stats(&self) -> SearchStats {
        SearchStats { nodes_expanded: self.nodes, uniqueness_checks: self.checks }
    }
}

fn witness_from_run(run: Run) -> Witness {
    let nfa = run.induced_nfa();
    let code = encode(&abbreviate(&run).expect("search runs satisfy the degree bounds"))
        .expect("search runs encode");
    Witness { run, nfa, code }
}

/// Exact `A_N(w)`: minimum states of an ε-free NFA accepting `w` along
/// exactly one length-`|w|` path.
pub fn nfa_complexity(w: &Word) -> ComplexityResult {
    let n = w.len();
    if n == 0 {
        let run = Run::new(vec![0], w.clone()).unwrap();
        return ComplexityResult {
            value: 1,
            witness: witness_from_run(run),
            stats: SearchStats::default(),
        };
    }
    let mut searcher = Searcher::new(w, state_bound(n), lower_bound(w), false, false);
    searcher.run_search();
    let stats = searcher.stats();
    let value = searcher.best;
    let run = match searcher.best_run.take() {
        Some(states) => Run::new(states.iter().map(|&s| s as usize).collect(), w.clone()).unwrap(),
        None => constructions::ceiling_run(w),
    };
    debug_assert!(run.induced_nfa().uniquely_accepts(w));
    ComplexityResult { value, witness: witness_from_run(run), stats }
}

/// Decides `D(w) > d` by searching for a witness with at most
/// `b(n) − d − 1` states, stopping at the first one found.
pub fn deficiency_exceeds(w: &Word, d: usize) -> bool {
    let n = w.len();
    let b = state_bound(n);
    if b <= d + 1 {
        return false;
    }
    let target = b - d - 1;
    if lower_bound(w) > target {
        return false;
    }
    let mut searcher = Searcher::new(w, target + 1, 1, false, true);
    searcher.run_search();
    searcher.best_run.is_some()
}

/// `D(w) = b(|w|) − A_N(w)` with the minimizing witness.
pub fn deficiency(w: &Word) -> DeficiencyRecord {
    let result = nfa_complexity(w);
    let b = state_bound(w.len());
    DeficiencyRecord {
        word: w.to_string(),
        n: w.len(),
        b,
        a_n: result.value,
        d: b - result.value,
        code: result.witness.code.to_string(),
    }
}

/// True iff every prefix of `w` (including `w` itself) has deficiency 0.
pub fn hereditary_deficiency_zero(w: &Word) -> bool {
    (0..=w.len()).all(|len| !deficiency_exceeds(&w.slice(0, len), 0))
}

/// Default length limit for the complete-DFA search.
pub const DFA_LENGTH_LIMIT: usize = 14;

/// Exact `A_D(w)`: minimum states of a complete DFA accepting `w` and
/// nothing else of length `|w|`. Counts the dead state, matching the
/// published deterministic values.
pub fn dfa_complexity(w: &Word) -> Result<usize, SearchError> {
    dfa_complexity_with_limit(w, DFA_LENGTH_LIMIT)
}

pub fn dfa_complexity_with_limit(w: &Word, limit: usize) -> Result<usize, SearchError> {
    let n = w.len();
    if n > limit {
        return Err(SearchError::DfaLengthLimit { len: n, limit });
    }
    let sigma = w.sigma() as usize;
    for q in 1..=n + 2 {
        if enumerate_total_dfas(q, sigma, w) {
            return Ok(q);
        }
    }
    unreachable!("a path automaton with a dead state always succeeds")
}

/// Canonical enumeration of initially-connected complete DFAs with `q`
/// states: transition entries are filled in row-major order and fresh
/// states are numbered in first-reference order. Returns true when some
/// DFA uniquely accepts `w` among length-`|w|` words.
fn enumerate_total_dfas(q: usize, sigma: usize, w: &Word) -> bool {
    fn fill(table: &mut Vec<usize>, idx: usize, max_seen: usize, q: usize, sigma: usize, w: &Word) -> bool {
        if idx == q * sigma {
            return max_seen == q - 1 && dfa_uniquely_accepts(table, q, sigma, w);
        }
        if idx.is_multiple_of(sigma) && max_seen < idx / sigma {
            return false;
        }
        // Every still-unseen state needs a referencing entry.
        if q - 1 - max_seen > q * sigma - idx {
            return false;
        }
        let top = (max_seen + 1).min(q - 1);
        for v in 0..=top {
            table.push(v);
            if fill(table, idx + 1, max_seen.max(v), q, sigma, w) {
                return true;
            }
            table.pop();
        }
        false
    }
    let mut table = Vec::with_capacity(q * sigma);
    fill(&mut table, 0, 0, q, sigma, w)
}

fn dfa_uniquely_accepts(table: &[usize], q: usize, sigma: usize, w: &Word) -> bool {
    let mut state = 0usize;
    for &a in w.letters() {
        state = table[state * sigma + a as usize];
    }
    let accept = state;
    // Words map bijectively to paths in a DFA, so count words reaching
    // the accept state, saturating at 2.
    let mut counts = vec![0u8; q];
    counts[0] = 1;
    for _ in 0..w.len() {
        let mut next = vec![0u8; q];
        for s in 0..q {
            if counts[s] == 0 {
                continue;
            }
            for a in 0..sigma {
                let t = table[s * sigma + a];
                next[t] = (next[t] + counts[s]).min(2);
            }
        }
        counts = next;
    }
    counts[accept] == 1
}

/// Minimum states of a partial DFA (totality not required) uniquely
/// accepting `w`: the run search restricted to deterministic runs.
///
/// The `b(n)` ceiling does not apply to deterministic witnesses (the
/// ceiling automaton branches nondeterministically), so the search
/// ranges up to the
/// `n+1`-state chain, which always qualifies.
pub fn partial_dfa_complexity(w: &Word) -> Result<usize, SearchError> {
    let n = w.len();
    if n > DFA_LENGTH_LIMIT {
        return Err(SearchError::DfaLengthLimit { len: n, limit: DFA_LENGTH_LIMIT });
    }
    if n == 0 {
        return Ok(1);
    }
    let mut searcher = Searcher::new(w, n + 2, lower_bound(w), true, false);
    searcher.run_search();
    debug_assert!(searcher.best_run.is_some());
    Ok(searcher.best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nfa::PathCount;
    use crate::words::{enumerate_words, is_square_free, thue_prefix};

    fn w(text: &str) -> Word {
        Word::parse(text).unwrap()
    }

    fn all_words(len: usize) -> Vec<Word> {
        enumerate_words(|_| true, 2, len, false)
    }

    /// Unpruned oracle: every canonical state sequence, uniqueness
    /// checked by the saturating path-count DP on the induced automaton.
    fn a_n_oracle(word: &Word) -> usize {
        let mut best = usize::MAX;
        let mut states = vec![0usize];
        fn go(states: &mut Vec<usize>, word: &Word, best: &mut usize) {
            if states.len() == word.len() + 1 {
                let run = Run::new(states.clone(), word.clone()).unwrap();
                let m = run.induced_nfa();
                if m.uniquely_accepts(word) {
                    *best = (*best).min(m.state_count());
                }
                return;
            }
            let max = *states.iter().max().unwrap();
            for s in 0..=max + 1 {
                states.push(s);
                go(states, word, best);
                states.pop();
            }
        }
        go(&mut states, word, &mut best);
        assert_ne!(best, usize::MAX, "no witness found for {word}");
        best
    }

    #[test]
    fn bounds() {
        assert_eq!(state_bound(0), 1);
        assert_eq!(state_bound(7), 4);
        assert_eq!(state_bound(22), 12);

        assert_eq!(visit_bound(&w("0102010")), 2);
        assert_eq!(visit_bound(&w("0000")), 5);
        assert_eq!(visit_bound(&thue_prefix(16)), 3);

        assert_eq!(lower_bound(&w("0102010")), 4);
        assert_eq!(lower_bound(&w("00000000")), 1);
        assert_eq!(lower_bound(&thue_prefix(16)), 6);
    }

    #[test]
    fn complexity_examples() {
        assert_eq!(nfa_complexity(&w("00000")).value, 1);
        assert_eq!(nfa_complexity(&w("0101")).value, 2);
        assert_eq!(a_n_oracle(&w("0101")), 2);
        assert_eq!(nfa_complexity(&w("0102010")).value, 4);
        assert_eq!(nfa_complexity(&Word::empty()).value, 1);
    }

    #[test]
    fn deficiency_examples() {
        assert_eq!(deficiency(&w("00")).d, 1);
        assert_eq!(deficiency(&w("01")).d, 0);
        assert_eq!(deficiency(&w("0102010")).d, 0);
    }

    #[test]
    fn decide_examples() {
        assert!(deficiency_exceeds(&w("0101"), 0));
        assert!(!deficiency_exceeds(&w("01"), 0));
        assert!(deficiency_exceeds(&w("0000000000"), 3));
    }

    #[test]
    fn hereditary_examples() {
        assert!(hereditary_deficiency_zero(&w("01")));
        assert!(!hereditary_deficiency_zero(&w("00")));
        assert!(hereditary_deficiency_zero(&w("011")));
    }

    #[test]
    fn witness_validity() {
        for word in ["0101", "0110", "00110", "010011", "0110100110"] {
            let word = w(word);
            let result = nfa_complexity(&word);
            assert_eq!(result.witness.nfa.state_count(), result.value);
            assert!(result.witness.nfa.uniquely_accepts(&word));
            assert!(result.witness.run.is_canonical());
            let decoded = crate::codec::decode_with_sigma(&result.witness.code, word.sigma()).unwrap();
            assert_eq!(decoded, result.witness.nfa);
        }
    }

    #[test]
    fn pruned_matches_oracle_small() {
        for n in 0..=6 {
            for word in all_words(n) {
                assert_eq!(nfa_complexity(&word).value, a_n_oracle(&word), "{word}");
            }
        }
    }

    #[test]
    fn sandwich_small() {
        for n in 0..=11 {
            for word in all_words(n) {
                let v = nfa_complexity(&word).value;
                assert!(lower_bound(&word) <= v && v <= state_bound(n), "{word}");
            }
        }
    }

    #[test]
    fn symmetry_small() {
        for n in 0..=7 {
            for word in all_words(n) {
                let v = nfa_complexity(&word).value;
                assert_eq!(nfa_complexity(&word.reversed()).value, v, "{word}");
                assert_eq!(nfa_complexity(&word.complemented()).value, v, "{word}");
            }
        }
    }

    #[test]
    fn square_free_words_have_full_complexity() {
        for len in 1..=6 {
            for word in enumerate_words(is_square_free, 3, len, true) {
                assert_eq!(nfa_complexity(&word).value, state_bound(len), "{word}");
            }
        }
    }

    #[test]
    fn unique_witness_accepts_unique_word() {
        // Path-count one forces word-count one on witnesses.
        for n in 0..=10 {
            let words = all_words(n);
            for word in &words {
                let m = nfa_complexity(word).witness.nfa;
                assert_eq!(m.count_accepting_paths(n), PathCount::One);
                let accepted: Vec<&Word> =
                    words.iter().filter(|v| m.accepts(v).unwrap()).collect();
                assert_eq!(accepted, vec![word]);
            }
        }
    }

    #[test]
    fn dfa_anchors() {
        assert_eq!(dfa_complexity(&w("011100")), Ok(4));
        assert_eq!(dfa_complexity(&w("001110")), Ok(5));
        assert_eq!(dfa_complexity(&w("0000")), Ok(2));
        assert!(matches!(
            dfa_complexity(&w("011010011001011010010110")),
            Err(SearchError::DfaLengthLimit { len: 24, limit: 14 })
        ));
    }

    #[test]
    fn dfa_dominates_nfa() {
        for n in 1..=7 {
            for word in all_words(n) {
                let a_n = nfa_complexity(&word).value;
                let a_d = dfa_complexity(&word).unwrap();
                assert!(a_n <= a_d, "{word}: {a_n} > {a_d}");
                let a_p = partial_dfa_complexity(&word).unwrap();
                assert!(a_n <= a_p && a_p <= a_d, "{word}: {a_n} {a_p} {a_d}");
            }
        }
    }

    #[test]
    fn record_serialization_round_trips() {
        let rec = deficiency(&w("0102010"));
        let json = serde_json::to_string(&rec).unwrap();
        let back: DeficiencyRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(rec, back);
    }
}
