//! Append-only memoization of complexity results.
//!
//! One line per entry, `⟨word⟩ ⟨A_N⟩ ⟨code⟩`, human-diffable; the empty
//! word is written as `eps`. Corrupt lines are skipped with a warning
//! and copied to a `.quarantine` sidecar. Writers serialize through a
//! single owner; readers see consistent snapshots.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write as IoWrite};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use thiserror::Error;

use crate::codec::{decode_with_sigma, ECode};
use crate::search::{nfa_complexity, state_bound, DeficiencyRecord};
use crate::words::Word;

/// Environment variable consulted by the CLI and service for the cache
/// file location.
pub const CACHE_ENV_VAR: &str = "AUTOPLEXITY_CACHE";

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("entry fails verification: {0}")]
    InvalidEntry(String),
}

/// A cached result: the stored code must decode to an automaton with
/// `a_n` states uniquely accepting the word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheEntry {
    pub word: String,
    pub n: usize,
    pub a_n: usize,
    pub code: String,
}

impl CacheEntry {
    pub fn verify(&self) -> Result<(), StoreError> {
        let word = parse_word(&self.word)
            .map_err(|e| StoreError::InvalidEntry(format!("bad word {:?}: {e}", self.word)))?;
        if word.len() != self.n {
            return Err(StoreError::InvalidEntry(format!(
                "length mismatch: word {:?} vs n = {}",
                self.word, self.n
            )));
        }
        let code: ECode = self
            .code
            .parse()
            .map_err(|e| StoreError::InvalidEntry(format!("bad code {:?}: {e}", self.code)))?;
        let nfa = decode_with_sigma(&code, word.sigma())
            .map_err(|e| StoreError::InvalidEntry(format!("undecodable code {:?}: {e}", self.code)))?;
        if nfa.state_count() != self.a_n {
            return Err(StoreError::InvalidEntry(format!(
                "witness has {} states, entry claims {}",
                nfa.state_count(),
                self.a_n
            )));
        }
        if !nfa.uniquely_accepts(&word) {
            return Err(StoreError::InvalidEntry(format!(
                "witness does not uniquely accept {:?}",
                self.word
            )));
        }
        Ok(())
    }

    pub fn to_record(&self) -> DeficiencyRecord {
        let b = state_bound(self.n);
        DeficiencyRecord {
            word: self.word.clone(),
            n: self.n,
            b,
            a_n: self.a_n,
            d: b - self.a_n,
            code: self.code.clone(),
        }
    }
}

/// Accepts the `eps` spelling of the empty word used in the file format.
pub fn parse_word(text: &str) -> Result<Word, crate::words::WordError> {
    if text == "eps" {
        Ok(Word::empty())
    } else {
        Word::parse(text)
    }
}

fn word_text(word: &str) -> &str {
    if word.is_empty() {
        "eps"
    } else {
        word
    }
}

enum Backend {
    Memory,
    File { path: PathBuf, file: File },
}

struct Inner {
    entries: BTreeMap<String, CacheEntry>,
    backend: Backend,
    skipped: usize,
}

/// Read-your-writes cache with crash-safe append semantics.
pub struct Store {
    inner: Mutex<Inner>,
    verify_on_load: bool,
}

impl Store {
    /// Purely in-memory store (used when no cache path is configured).
    pub fn in_memory() -> Self {
        Store {
            inner: Mutex::new(Inner {
                entries: BTreeMap::new(),
                backend: Backend::Memory,
                skipped: 0,
            }),
            verify_on_load: false,
        }
    }

    /// Opens (or creates) a file-backed store. With `verify_on_load`,
    /// every persisted witness is re-checked; failures are quarantined.
    pub fn open(path: impl AsRef<Path>, verify_on_load: bool) -> Result<Self, StoreError> {
        let path = path.as_ref().to_path_buf();
        let mut entries = BTreeMap::new();
        let mut skipped = 0usize;
        if path.exists() {
            let reader = BufReader::new(File::open(&path)?);
            let mut quarantine: Option<File> = None;
            for line in reader.lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                match parse_line(&line, verify_on_load) {
                    Ok(entry) => {
                        entries.insert(entry.word.clone(), entry);
                    }
                    Err(err) => {
                        skipped += 1;
                        eprintln!("store: skipping corrupt line ({err}): {line}");
                        let q = match &mut quarantine {
                            Some(q) => q,
                            None => {
                                let qpath = quarantine_path(&path);
                                quarantine.insert(
                                    OpenOptions::new().create(true).append(true).open(qpath)?,
                                )
                            }
                        };
                        writeln!(q, "{line}")?;
                    }
                }
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(Store {
            inner: Mutex::new(Inner { entries, backend: Backend::File { path, file }, skipped }),
            verify_on_load,
        })
    }

    /// Store configured from `AUTOPLEXITY_CACHE`, else in-memory.
    pub fn from_env() -> Result<Self, StoreError> {
        match std::env::var_os(CACHE_ENV_VAR) {
            Some(path) => Store::open(path, true),
            None => Ok(Store::in_memory()),
        }
    }

    pub fn get(&self, word: &str) -> Option<CacheEntry> {
        let inner = self.inner.lock().unwrap();
        inner.entries.get(word_text_key(word).as_str()).cloned()
    }

    /// Verifies and persists an entry.
    pub fn put(&self, entry: CacheEntry) -> Result<(), StoreError> {
        entry.verify()?;
        let mut inner = self.inner.lock().unwrap();
        if let Backend::File { file, .. } = &mut inner.backend {
            writeln!(file, "{} {} {}", word_text(&entry.word), entry.a_n, entry.code)?;
            file.flush()?;
        }
        inner.entries.insert(entry.word.clone(), entry);
        Ok(())
    }

    /// Entries whose word starts with `prefix`, in sorted order: a
    /// consistent snapshot.
    pub fn scan_prefix(&self, prefix: &str) -> Vec<CacheEntry> {
        let inner = self.inner.lock().unwrap();
        inner
            .entries
            .values()
            .filter(|e| e.word.starts_with(prefix))
            .cloned()
            .collect()
    }

    /// Entries with word length in `range`, in sorted order.
    pub fn scan_len(&self, range: std::ops::RangeInclusive<usize>) -> Vec<CacheEntry> {
        let inner = self.inner.lock().unwrap();
        inner
            .entries
            .values()
            .filter(|e| range.contains(&e.n))
            .cloned()
            .collect()
    }

    pub fn len(&self) -> usize {
        self.inner.lock().unwrap().entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Lines skipped (and quarantined) while loading.
    pub fn skipped(&self) -> usize {
        self.inner.lock().unwrap().skipped
    }

    /// Rewrites the backing file with one line per entry, dropping
    /// superseded duplicates.
    pub fn compact(&self) -> Result<(), StoreError> {
        let mut inner = self.inner.lock().unwrap();
        let Inner { entries, backend, .. } = &mut *inner;
        if let Backend::File { path, file } = backend {
            let tmp = path.with_extension("compact.tmp");
            {
                let mut out = File::create(&tmp)?;
                for entry in entries.values() {
                    writeln!(out, "{} {} {}", word_text(&entry.word), entry.a_n, entry.code)?;
                }
                out.flush()?;
            }
            std::fs::rename(&tmp, &path)?;
            *file = OpenOptions::new().append(true).open(&path)?;
        }
        Ok(())
    }

    /// Cached complexity lookup: computes, verifies, and persists on miss.
    pub fn nfa_complexity_cached(&self, word: &Word) -> Result<DeficiencyRecord, StoreError> {
        let key = word.to_string();
        if let Some(entry) = self.get(&key) {
            if self.verify_on_load {
                entry.verify()?;
            }
            return Ok(entry.to_record());
        }
        let result = nfa_complexity(word);
        let entry = CacheEntry {
            word: key,
            n: word.len(),
            a_n: result.value,
            code: result.witness.code.to_string(),
        };
        self.put(entry.clone())?;
        Ok(entry.to_record())
    }
}

fn word_text_key(word: &str) -> String {
    if word == "eps" {
        String::new()
    } else {
        word.to_string()
    }
}

fn quarantine_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_os_string();
    name.push(".quarantine");
    PathBuf::from(name)
}

fn parse_line(line: &str, verify: bool) -> Result<CacheEntry, StoreError> {
    let mut parts = line.split_whitespace();
    let (word, a_n, code) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
        (Some(w), Some(a), Some(c), None) => (w, a, c),
        _ => return Err(StoreError::InvalidEntry("expected 3 fields".into())),
    };
    let a_n: usize = a_n
        .parse()
        .map_err(|_| StoreError::InvalidEntry(format!("bad count {a_n:?}")))?;
    let word_str = word_text_key(word);
    let n = word_str.chars().count();
    let entry = CacheEntry { word: word_str, n, a_n, code: code.to_string() };
    if verify {
        entry.verify()?;
    }
    Ok(entry)
}
