//! Bracket codes for witness automata.
//!
//! A uniquely-accepting witness can be assumed to contain only the edges
//! traversed on its input. Listing those edges in first-traversal order
//! (prefixed by an ε-edge entering the initial state) gives the
//! *abbreviated accepting path*; this module serializes that path as a
//! bracket string and rebuilds the automaton from it.
//!
//! Tokens: a letter stands for an edge to a fresh vertex, `[` marks the
//! vertex just entered as the target of a later backedge, `]a` is the
//! backedge itself carrying its letter `a`, `+` marks the vertex just
//! entered as having out-degree two, and `*` marks the accept vertex.
//! Without a `*` the accept vertex defaults to the last vertex created.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::nfa::{Nfa, Run};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodecError {
    #[error("invalid character {0:?} in code")]
    InvalidCharacter(char),
    #[error("']' must be immediately followed by its backedge letter")]
    MissingCloseLabel,
    #[error("brackets are unbalanced")]
    UnbalancedBrackets,
    #[error("code contains more than one accept marker")]
    TwoStars,
    #[error("replay reached a dead end with code remaining")]
    DeadEnd,
    #[error("vertex acquired more than two out-edges during replay")]
    OverfullVertex,
    #[error("letter {letter} is not below the alphabet size {sigma}")]
    LetterOutOfRange { letter: u8, sigma: u8 },
    #[error("run does not induce a uniquely-accepting witness: {0}")]
    MalformedWitness(String),
}

/// One symbol of a bracket code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Token {
    Letter(u8),
    Open,
    Close(u8),
    Plus,
    Star,
}

/// A serialized abbreviated accepting path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ECode {
    tokens: Vec<Token>,
}

impl ECode {
    pub fn new(tokens: Vec<Token>) -> Self {
        ECode { tokens }
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    /// Projection onto the four-symbol alphabet `{0, [, ], +}`: letters
    /// collapse to `0`, backedge labels and the accept marker are dropped.
    pub fn shape(&self) -> String {
        let mut s = String::new();
        for &t in &self.tokens {
            match t {
                Token::Letter(_) => s.push('0'),
                Token::Open => s.push('['),
                Token::Close(_) => s.push(']'),
                Token::Plus => s.push('+'),
                Token::Star => {}
            }
        }
        s
    }

    /// The code without its accept marker.
    pub fn without_star(&self) -> ECode {
        ECode {
            tokens: self
                .tokens
                .iter()
                .copied()
                .filter(|t| !matches!(t, Token::Star))
                .collect(),
        }
    }
}

impl fmt::Display for ECode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &t in &self.tokens {
            match t {
                Token::Letter(a) => write!(f, "{}", a)?,
                Token::Open => write!(f, "[")?,
                Token::Close(a) => write!(f, "]{}", a)?,
                Token::Plus => write!(f, "+")?,
                Token::Star => write!(f, "*")?,
            }
        }
        Ok(())
    }
}

impl FromStr for ECode {
    type Err = CodecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut tokens = Vec::new();
        let mut chars = s.chars().peekable();
        while let Some(c) = chars.next() {
            match c {
                '[' => tokens.push(Token::Open),
                '+' => tokens.push(Token::Plus),
                '*' => tokens.push(Token::Star),
                ']' => {
                    let label = chars
                        .next()
                        .and_then(|d| d.to_digit(10))
                        .ok_or(CodecError::MissingCloseLabel)?;
                    tokens.push(Token::Close(label as u8));
                }
                d if d.is_ascii_digit() => {
                    tokens.push(Token::Letter(d.to_digit(10).unwrap() as u8));
                }
                other => return Err(CodecError::InvalidCharacter(other)),
            }
        }
        Ok(ECode { tokens })
    }
}

/// Vertex shapes possible on an abbreviated accepting path. Degrees
/// count the ε-edge into the initial vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexType {
    /// In-degree 1, out-degree 1.
    Through,
    /// In-degree 2, out-degree 1: target of a backedge.
    BackedgeTarget,
    /// In-degree 1, out-degree 2.
    Fork,
    /// In-degree 2, out-degree 2.
    BackedgeFork,
    /// In-degree 1, out-degree 0: the path ends here.
    Sink,
}

impl VertexType {
    /// The numbering used when the five shapes are listed by
    /// (in-degree, out-degree): (1,1), (2,1), (1,2), (2,2), (1,0).
    pub fn index(self) -> u8 {
        match self {
            VertexType::Through => 1,
            VertexType::BackedgeTarget => 2,
            VertexType::Fork => 3,
            VertexType::BackedgeFork => 4,
            VertexType::Sink => 5,
        }
    }
}

/// One edge of an abbreviated path; `e_0` has no source and no letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AbbrevEdge {
    pub src: Option<usize>,
    pub letter: Option<u8>,
    pub dst: usize,
}

/// The first-traversal subsequence of an accepting path, with per-vertex
/// degree bookkeeping.
#[derive(Clone, Debug)]
pub struct AbbreviatedPath {
    edges: Vec<AbbrevEdge>,
    vertex_types: Vec<VertexType>,
    /// Index into `edges` of each vertex's second in-edge, when present.
    second_in: Vec<Option<usize>>,
    initial: usize,
    accept: usize,
}

impl AbbreviatedPath {
    pub fn edges(&self) -> &[AbbrevEdge] {
        &self.edges
    }

    pub fn vertex_type(&self, v: usize) -> VertexType {
        self.vertex_types[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_types.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn accept(&self) -> usize {
        self.accept
    }
}

/// Keeps the first traversal of each edge of `r` (prefixed by the ε-edge
/// into the initial state) and classifies every vertex.
///
/// The caller is responsible for `r` being the unique accepting path of
/// its induced automaton; degree violations are reported as errors since
/// they contradict uniqueness.
pub fn abbreviate(r: &Run) -> Result<AbbreviatedPath, CodecError> {
    if !r.is_canonical() {
        return abbreviate(&r.canonicalize());
    }
    let states = r.states();
    let letters = r.word().letters();
    let vertex_count = states.iter().copied().max().unwrap_or(0) + 1;

    let mut edges = vec![AbbrevEdge { src: None, letter: None, dst: states[0] }];
    let mut seen = BTreeSet::new();
    for (i, &a) in letters.iter().enumerate() {
        let edge = (states[i], a, states[i + 1]);
        if seen.insert(edge) {
            edges.push(AbbrevEdge { src: Some(states[i]), letter: Some(a), dst: states[i + 1] });
        }
    }

    let mut in_deg = vec![0usize; vertex_count];
    let mut out_deg = vec![0usize; vertex_count];
    let mut second_in = vec![None; vertex_count];
    for (idx, e) in edges.iter().enumerate() {
        in_deg[e.dst] += 1;
        if in_deg[e.dst] == 2 {
            second_in[e.dst] = Some(idx);
        }
        if let Some(src) = e.src {
            out_deg[src] += 1;
        }
    }

    let mut vertex_types = Vec::with_capacity(vertex_count);
    for v in 0..vertex_count {
        let t = match (in_deg[v], out_deg[v]) {
            (1, 1) => VertexType::Through,
            (2, 1) => VertexType::BackedgeTarget,
            (1, 2) => VertexType::Fork,
            (2, 2) => VertexType::BackedgeFork,
            (1, 0) => VertexType::Sink,
            (i, o) => {
                return Err(CodecError::MalformedWitness(format!(
                    "vertex {v} has in-degree {i}, out-degree {o}"
                )))
            }
        };
        vertex_types.push(t);
    }

    Ok(AbbreviatedPath {
        edges,
        vertex_types,
        second_in,
        initial: states[0],
        accept: *states.last().unwrap(),
    })
}

/// Serializes an abbreviated path.
///
/// Each edge first entering a vertex emits its letter (nothing for the
/// ε-edge), then `*` if the vertex is the accept state, then `[` if the
/// vertex will be re-entered by a backedge, then `+` if it has
/// out-degree two. Each backedge emits `]` carrying its letter.
pub fn encode(p: &AbbreviatedPath) -> Result<ECode, CodecError> {
    let mut tokens = Vec::new();
    let mut stack = Vec::new();
    for (idx, e) in p.edges.iter().enumerate() {
        let v = e.dst;
        if idx > 0 && p.second_in[v] == Some(idx) {
            match stack.pop() {
                Some(top) if top == v => {}
                _ => {
                    return Err(CodecError::MalformedWitness(format!(
                        "backedge into vertex {v} does not nest"
                    )))
                }
            }
            tokens.push(Token::Close(e.letter.expect("backedges carry letters")));
            continue;
        }
        if let Some(a) = e.letter {
            tokens.push(Token::Letter(a));
        }
        if v == p.accept {
            tokens.push(Token::Star);
        }
        if p.second_in[v].is_some() {
            tokens.push(Token::Open);
            stack.push(v);
        }
        if matches!(p.vertex_type(v), VertexType::Fork | VertexType::BackedgeFork) {
            tokens.push(Token::Plus);
        }
    }
    if !stack.is_empty() {
        return Err(CodecError::MalformedWitness(
            "some backedge target is never closed".into(),
        ));
    }
    Ok(ECode { tokens })
}

struct Replay {
    out_edges: Vec<Vec<usize>>,
    plus_marked: Vec<bool>,
    transitions: Vec<(usize, u8, usize)>,
    stack: Vec<usize>,
    /// Attachment vertex for the next created edge; `None` means it must
    /// be recovered by walking from the last backedge target.
    cur: Option<usize>,
    walk_from: usize,
    last_entered: usize,
    accept: Option<usize>,
}

impl Replay {
    fn new() -> Self {
        Replay {
            out_edges: vec![Vec::new()],
            plus_marked: vec![false],
            transitions: Vec::new(),
            stack: Vec::new(),
            cur: Some(0),
            walk_from: 0,
            last_entered: 0,
            accept: None,
        }
    }

    /// Where the traversal resumes after a backedge: the first vertex
    /// with an unfilled out-degree-two slot reachable from the backedge
    /// target, following the earliest-created out-edge through vertices
    /// whose slots are filled.
    fn resolve_attachment(&mut self) -> Result<usize, CodecError> {
        if let Some(c) = self.cur {
            return Ok(c);
        }
        let mut v = self.walk_from;
        let mut steps = 0usize;
        loop {
            if self.plus_marked[v] && self.out_edges[v].len() < 2 {
                self.cur = Some(v);
                return Ok(v);
            }
            match self.out_edges[v].first() {
                Some(&next) => v = next,
                None => return Err(CodecError::DeadEnd),
            }
            steps += 1;
            if steps > self.out_edges.len() + 1 {
                return Err(CodecError::DeadEnd);
            }
        }
    }

    fn add_edge(&mut self, src: usize, letter: u8, dst: usize) -> Result<(), CodecError> {
        if self.out_edges[src].len() >= 2 {
            return Err(CodecError::OverfullVertex);
        }
        self.out_edges[src].push(dst);
        self.transitions.push((src, letter, dst));
        Ok(())
    }
}

/// Rebuilds the witness automaton from a code, inferring the alphabet
/// size from the largest letter used.
pub fn decode(code: &ECode) -> Result<Nfa, CodecError> {
    let sigma = code
        .tokens
        .iter()
        .filter_map(|t| match *t {
            Token::Letter(a) | Token::Close(a) => Some(a + 1),
            _ => None,
        })
        .max()
        .unwrap_or(1);
    decode_with_sigma(code, sigma)
}

/// Rebuilds the witness automaton over a caller-chosen alphabet size.
pub fn decode_with_sigma(code: &ECode, sigma: u8) -> Result<Nfa, CodecError> {
    for t in &code.tokens {
        if let Token::Letter(a) | Token::Close(a) = *t {
            if a >= sigma {
                return Err(CodecError::LetterOutOfRange { letter: a, sigma });
            }
        }
    }

    let mut replay = Replay::new();
    for &t in &code.tokens {
        match t {
            Token::Letter(a) => {
                let src = replay.resolve_attachment()?;
                let nv = replay.out_edges.len();
                replay.out_edges.push(Vec::new());
                replay.plus_marked.push(false);
                replay.add_edge(src, a, nv)?;
                replay.cur = Some(nv);
                replay.last_entered = nv;
            }
            Token::Open => {
                replay.stack.push(replay.last_entered);
            }
            Token::Plus => {
                let v = replay.last_entered;
                if replay.plus_marked[v] || replay.out_edges[v].len() >= 2 {
                    return Err(CodecError::OverfullVertex);
                }
                replay.plus_marked[v] = true;
            }
            Token::Close(a) => {
                let target = replay.stack.pop().ok_or(CodecError::UnbalancedBrackets)?;
                let src = replay.resolve_attachment()?;
                replay.add_edge(src, a, target)?;
                replay.last_entered = target;
                replay.cur = None;
                replay.walk_from = target;
            }
            Token::Star => {
                if replay.accept.is_some() {
                    return Err(CodecError::TwoStars);
                }
                replay.accept = Some(replay.last_entered);
            }
        }
    }
    if !replay.stack.is_empty() {
        return Err(CodecError::UnbalancedBrackets);
    }

    let state_count = replay.out_edges.len();
    let accept = replay.accept.unwrap_or(state_count - 1);
    Ok(Nfa::new(state_count, sigma, 0, [accept], replay.transitions)
        .expect("replay builds consistent automata"))
}

/// All nonempty well-formed star-free codes with at most `max_tokens`
/// tokens over `sigma` letters. Well-formed means balanced brackets;
/// decoding may still fail with a defined error.
pub fn enumerate_codes(max_tokens: usize, sigma: u8) -> Vec<ECode> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    fn walk(prefix: &mut Vec<Token>, depth: usize, max_tokens: usize, sigma: u8, out: &mut Vec<ECode>) {
        if !prefix.is_empty() && depth == 0 {
            out.push(ECode { tokens: prefix.clone() });
        }
        if prefix.len() == max_tokens {
            return;
        }
        let remaining = max_tokens - prefix.len();
        for a in 0..sigma {
            prefix.push(Token::Letter(a));
            walk(prefix, depth, max_tokens, sigma, out);
            prefix.pop();
        }
        prefix.push(Token::Plus);
        walk(prefix, depth, max_tokens, sigma, out);
        prefix.pop();
        if depth + 1 < remaining {
            prefix.push(Token::Open);
            walk(prefix, depth + 1, max_tokens, sigma, out);
            prefix.pop();
        }
        if depth > 0 {
            for a in 0..sigma {
                prefix.push(Token::Close(a));
                walk(prefix, depth - 1, max_tokens, sigma, out);
                prefix.pop();
            }
        }
    }
    walk(&mut prefix, 0, max_tokens, sigma, &mut out);
    out
}
