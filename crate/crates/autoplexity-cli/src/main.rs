//! Command-line surface for complexity computations and the batch
//! reproductions. Every subcommand prints human-readable text by
//! default and JSON lines with `--json`.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{ArgGroup, Parser, Subcommand};
use serde_json::json;

use autoplexity::codec::{abbreviate, decode, encode, ECode};
use autoplexity::constructions::{
    ceiling_run, cube_free_high_deficiency, loop_witness, ternary_witness,
};
use autoplexity::experiments::{
    deficiency_table, dimension_profile, hereditary_count, verify_theorem, StreamKind, TableMode,
    TheoremSuite,
};
use autoplexity::nfa::{Nfa, PathCount, Run};
use autoplexity::search::{
    deficiency, deficiency_exceeds, dfa_complexity_with_limit, state_bound, DFA_LENGTH_LIMIT,
};
use autoplexity::store::{parse_word, Store};
use autoplexity::words::{ternary_square_free_prefix, thue_prefix, Word};

#[derive(Parser)]
#[command(name = "autoplexity", version, about = "Nondeterministic automatic complexity of finite words")]
struct Cli {
    /// Emit JSON lines instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for batch subcommands (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Result cache file (also read from AUTOPLEXITY_CACHE).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact A_N of a word, with its witness.
    Complexity {
        /// Digit string; "eps" for the empty word.
        word: String,
        /// Print the witness automaton.
        #[arg(long)]
        witness: bool,
        /// Print the witness bracket code.
        #[arg(long)]
        code: bool,
        /// Also compute the deterministic complexity A_D.
        #[arg(long)]
        deterministic: bool,
    },
    /// Deficiency record b(n) − A_N, or the decision D > d.
    Deficiency {
        word: String,
        /// Decide D(word) > d instead of computing D exactly.
        #[arg(long)]
        decide: Option<usize>,
    },
    /// Probability table of positive deficiency per length.
    Table {
        #[arg(long, default_value_t = 10)]
        exhaustive_max: usize,
        #[arg(long, default_value_t = 0)]
        sampled_max: usize,
        #[arg(long, default_value_t = 2000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Count words all of whose prefixes have deficiency 0.
    Hereditary {
        #[arg(long)]
        length: usize,
    },
    /// Sweep a theorem's corpus and check its deficiency bound.
    Verify {
        /// One of: square_free_d0, strongly_cube_free_d1,
        /// almost_square_free_d1, soni_census.
        theorem: String,
        #[arg(long, default_value_t = 10)]
        max_length: usize,
    },
    /// Prefix of the Thue word.
    Thue {
        #[arg(long)]
        length: usize,
    },
    /// Prefix of the ternary square-free stream.
    Ternary {
        #[arg(long)]
        length: usize,
    },
    /// Per-prefix complexity profile of an infinite stream.
    Profile {
        /// "thue" or "ternary".
        stream: String,
        #[arg(long, default_value_t = 16)]
        max_length: usize,
        /// Include the A_D column up to this prefix length.
        #[arg(long)]
        dfa_max: Option<usize>,
    },
    /// Explicit witnesses and extremal words.
    #[command(group(ArgGroup::new("what").required(true).args(["cube_free", "ternary_witness", "fig1"])))]
    Construct {
        /// Cube-free binary word with deficiency ≥ k.
        #[arg(long, value_name = "K")]
        cube_free: Option<usize>,
        /// Strongly cube-free ternary word with deficiency ≥ d.
        #[arg(long, value_name = "D")]
        ternary_witness: Option<usize>,
        /// The b(n)-state upper-bound witness for a word.
        #[arg(long, value_name = "WORD")]
        fig1: Option<String>,
    },
    /// Encode a run file or decode a bracket code.
    #[command(group(ArgGroup::new("dir").required(true).args(["encode", "decode"])))]
    Codec {
        /// Run file: first line the word, second line the state sequence.
        #[arg(long, value_name = "FILE")]
        encode: Option<PathBuf>,
        /// Bracket code, e.g. "0[1000[11+0[0+]1]1]1".
        #[arg(long, value_name = "CODE")]
        decode: Option<String>,
        /// Derive the accept state by running this word through the
        /// decoded automaton.
        #[arg(long, value_name = "WORD")]
        word: Option<String>,
    },
    /// HTTP lookup service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value_t = 20)]
        max_word_len: usize,
    },
}

fn main() {
    // Die quietly when output is piped into e.g. `head`.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn open_store(cache: &Option<PathBuf>) -> Result<Store> {
    match cache {
        Some(path) => Ok(Store::open(path, true)?),
        None => Ok(Store::from_env()?),
    }
}

fn word_arg(text: &str) -> Result<Word> {
    let word = parse_word(text).map_err(|e| anyhow!("malformed word {text:?}: {e}"))?;
    if word.len() > 250 {
        bail!("word length {} exceeds the supported limit 250", word.len());
    }
    Ok(word)
}

fn display_word(word: &Word) -> String {
    if word.is_empty() {
        "eps".to_string()
    } else {
        word.to_string()
    }
}

fn run(cli: Cli) -> Result<()> {
    let json = cli.json;
    match cli.command {
        Command::Complexity { word, witness, code, deterministic } => {
            let word = word_arg(&word)?;
            let store = open_store(&cli.cache)?;
            let record = store.nfa_complexity_cached(&word)?;
            let a_d = if deterministic {
                Some(dfa_complexity_with_limit(&word, DFA_LENGTH_LIMIT)?)
            } else {
                None
            };
            if json {
                let mut value = serde_json::to_value(&record)?;
                if let Some(a_d) = a_d {
                    value["a_d"] = json!(a_d);
                }
                println!("{value}");
            } else {
                println!("A_N = {}", record.a_n);
                if let Some(a_d) = a_d {
                    println!("A_D = {a_d}");
                }
                if code {
                    println!("code: {}", record.code);
                }
                if witness {
                    let parsed: ECode = record.code.parse().map_err(|e| anyhow!("{e}"))?;
                    print!("{}", decode(&parsed).map_err(|e| anyhow!("{e}"))?);
                }
            }
        }
        Command::Deficiency { word, decide } => {
            let word = word_arg(&word)?;
            match decide {
                Some(d) => {
                    let answer = deficiency_exceeds(&word, d);
                    if json {
                        println!("{}", json!({ "word": display_word(&word), "d": d, "exceeds": answer }));
                    } else {
                        println!("D({}) > {d}: {answer}", display_word(&word));
                    }
                }
                None => {
                    let record = deficiency(&word);
                    if json {
                        println!("{}", serde_json::to_string(&record)?);
                    } else {
                        println!("D = {} (b({}) = {}, A_N = {})", record.d, record.n, record.b, record.a_n);
                        println!("code: {}", record.code);
                    }
                }
            }
        }
        Command::Table { exhaustive_max, sampled_max, samples, seed } => {
            let table = deficiency_table(exhaustive_max, sampled_max.max(exhaustive_max), samples, seed);
            if json {
                for row in &table.rows {
                    println!("{}", serde_json::to_string(row)?);
                }
            } else {
                println!("{:>3}  {:>10}  {:>10}  {:>7}  mode", "n", "words", "positive", "P(D>0)");
                for row in &table.rows {
                    let mode = match &row.mode {
                        TableMode::Exhaustive => "exhaustive".to_string(),
                        TableMode::Sampled { samples, seed, ci_low, ci_high } => {
                            format!("sampled s={samples} seed={seed} ci=[{ci_low:.3},{ci_high:.3}]")
                        }
                    };
                    println!(
                        "{:>3}  {:>10}  {:>10}  {:>7}  {}",
                        row.n, row.total, row.positive, row.probability, mode
                    );
                }
            }
        }
        Command::Hereditary { length } => {
            let counts = hereditary_count(length);
            if json {
                for (i, &count) in counts.iter().enumerate() {
                    println!(
                        "{}",
                        json!({ "length": i + 1, "words": count, "classes": count / 2 })
                    );
                }
            } else {
                println!("{:>3}  {:>8}  {:>8}", "len", "words", "classes");
                for (i, &count) in counts.iter().enumerate() {
                    println!("{:>3}  {:>8}  {:>8}", i + 1, count, count / 2);
                }
            }
        }
        Command::Verify { theorem, max_length } => {
            let suite = TheoremSuite::parse(&theorem)
                .ok_or_else(|| anyhow!("unknown theorem {theorem:?}"))?;
            let report = verify_theorem(suite, max_length);
            if json {
                println!("{}", serde_json::to_string(&report)?);
            } else {
                println!("suite {} up to length {}", suite.name(), max_length);
                for (len, size) in &report.corpus_sizes {
                    println!("  length {len}: {size} words");
                }
                if let Some((word, d)) = &report.extremal {
                    println!("  extremal deficiency seen: {d} (e.g. {word})");
                }
                if report.passed {
                    println!("  PASS: no counterexamples");
                } else {
                    println!("  FAIL: {:?}", report.counterexamples);
                }
            }
            if !report.passed {
                bail!("theorem sweep found counterexamples");
            }
        }
        Command::Thue { length } => {
            let word = thue_prefix(length);
            if json {
                println!("{}", json!({ "length": length, "word": word.to_string() }));
            } else {
                println!("{}", display_word(&word));
            }
        }
        Command::Ternary { length } => {
            let word = ternary_square_free_prefix(length);
            if json {
                println!("{}", json!({ "length": length, "word": word.to_string() }));
            } else {
                println!("{}", display_word(&word));
            }
        }
        Command::Profile { stream, max_length, dfa_max } => {
            let kind = match stream.as_str() {
                "thue" => StreamKind::Thue,
                "ternary" => StreamKind::TernarySquareFree,
                other => bail!("unknown stream {other:?} (expected thue or ternary)"),
            };
            let profile = dimension_profile(kind, max_length, dfa_max);
            if json {
                for row in &profile.rows {
                    println!("{}", serde_json::to_string(row)?);
                }
            } else {
                println!("{:>3}  {:>4}  {:>2}  {:>6}  {:>4}", "m", "A_N", "D", "ratio", "A_D");
                for row in &profile.rows {
                    let a_d = row.a_d.map_or("-".to_string(), |v| v.to_string());
                    println!(
                        "{:>3}  {:>4}  {:>2}  {:>6.3}  {:>4}",
                        row.m, row.a_n, row.d, row.ratio, a_d
                    );
                }
            }
        }
        Command::Construct { cube_free, ternary_witness: tw, fig1 } => {
            if let Some(k) = cube_free {
                let x = cube_free_high_deficiency(k)?;
                let period = (x.len() + 1) / 3;
                let witness = loop_witness(&x.slice(0, period), x.len());
                let d = state_bound(x.len()) - period;
                if json {
                    println!(
                        "{}",
                        json!({
                            "word": x.to_string(),
                            "n": x.len(),
                            "loop_length": period,
                            "deficiency_at_least": d,
                        })
                    );
                } else {
                    println!("word: {x}");
                    println!("loop length {period}, A_N ≤ {period}, D ≥ {d}");
                    print!("{witness}");
                }
            } else if let Some(d) = tw {
                let (word, flower, record) = ternary_witness(d)?;
                if json {
                    let mut value = serde_json::to_value(&record)?;
                    value["loop_lengths"] = json!(flower.loop_lengths);
                    println!("{value}");
                } else {
                    println!("word: {word}");
                    println!("loops: {:?}", flower.loop_lengths);
                    println!("code: {}", flower.code);
                    println!("states: {}, D ≥ {}", flower.nfa.state_count(), record.d);
                }
            } else if let Some(text) = fig1 {
                let word = word_arg(&text)?;
                let run = ceiling_run(&word);
                let nfa = run.induced_nfa();
                let code = encode(&abbreviate(&run).map_err(|e| anyhow!("{e}"))?)
                    .map_err(|e| anyhow!("{e}"))?;
                if json {
                    println!(
                        "{}",
                        json!({
                            "word": display_word(&word),
                            "states": nfa.state_count(),
                            "code": code.to_string(),
                        })
                    );
                } else {
                    println!("states: {} = b({})", nfa.state_count(), word.len());
                    println!("code: {code}");
                    print!("{nfa}");
                }
            }
        }
        Command::Codec { encode: encode_file, decode: decode_text, word } => {
            if let Some(path) = encode_file {
                let content = std::fs::read_to_string(&path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let run = parse_run_file(&content)?;
                let code = encode(&abbreviate(&run).map_err(|e| anyhow!("{e}"))?)
                    .map_err(|e| anyhow!("{e}"))?;
                if json {
                    println!(
                        "{}",
                        json!({ "word": display_word(run.word()), "code": code.to_string(), "shape": code.shape() })
                    );
                } else {
                    println!("code: {code}");
                    println!("shape: {}", code.shape());
                }
            } else if let Some(text) = decode_text {
                let code: ECode = text.parse().map_err(|e| anyhow!("bad code: {e}"))?;
                let mut nfa = decode(&code).map_err(|e| anyhow!("decode failed: {e}"))?;
                let mut derived_accept = None;
                if let Some(word_text) = word {
                    let target = word_arg(&word_text)?;
                    let ends = nfa.end_states(&target).map_err(|e| anyhow!("{e}"))?;
                    let &accept = match ends.iter().collect::<Vec<_>>().as_slice() {
                        [one] => *one,
                        [] => bail!("the automaton cannot read {word_text}"),
                        _ => bail!("accept state is ambiguous for {word_text}"),
                    };
                    nfa = nfa.with_accept(accept).map_err(|e| anyhow!("{e}"))?;
                    derived_accept = Some(accept);
                }
                let unique = uniquely_accepted_words(&nfa, 2 * nfa.state_count() + 2);
                if json {
                    println!(
                        "{}",
                        json!({
                            "states": nfa.state_count(),
                            "derived_accept": derived_accept,
                            "automaton": nfa.to_string(),
                            "uniquely_accepted": unique
                                .iter()
                                .map(|(n, w)| json!({ "n": n, "word": w }))
                                .collect::<Vec<_>>(),
                        })
                    );
                } else {
                    println!("states: {}", nfa.state_count());
                    if let Some(accept) = derived_accept {
                        println!("accept state derived from word: {accept}");
                    }
                    print!("{nfa}");
                    for (n, w) in unique {
                        println!("uniquely accepts at length {n}: {w}");
                    }
                }
            }
        }
        Command::Serve { port, max_word_len } => {
            let store = open_store(&cli.cache)?;
            let config = autoplexity_service::ServiceConfig { max_word_len, ..Default::default() };
            let state = autoplexity_service::AppState::new(store, config);
            let addr = std::net::SocketAddr::from(([0, 0, 0, 0], port));
            tokio::runtime::Builder::new_multi_thread()
                .enable_all()
                .build()?
                .block_on(autoplexity_service::serve(addr, state))?;
        }
    }
    Ok(())
}

/// Words uniquely accepted at each length up to `max_len`.
fn uniquely_accepted_words(nfa: &Nfa, max_len: usize) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    for n in 0..=max_len {
        if nfa.count_accepting_paths(n) != PathCount::One {
            continue;
        }
        if let Some(word) = unique_word_of_length(nfa, n) {
            out.push((n, display_word(&word)));
        }
    }
    out
}

/// The single length-`n` word accepted, recovered by walking the path
/// counts backwards from the accept states.
fn unique_word_of_length(nfa: &Nfa, n: usize) -> Option<Word> {
    // Forward saturating counts per step.
    let mut layers = Vec::with_capacity(n + 1);
    let mut counts = vec![0u8; nfa.state_count()];
    counts[nfa.initial()] = 1;
    layers.push(counts.clone());
    for _ in 0..n {
        let mut next = vec![0u8; nfa.state_count()];
        for &(src, _, dst) in nfa.transitions() {
            next[dst] = (next[dst] + counts[src]).min(2);
        }
        counts = next;
        layers.push(counts.clone());
    }
    let mut state = *nfa
        .accept_states()
        .iter()
        .find(|&&s| layers[n][s] > 0)?;
    let mut letters = vec![0u8; n];
    for i in (0..n).rev() {
        let &(src, letter, _) = nfa
            .transitions()
            .iter()
            .find(|&&(src, _, dst)| dst == state && layers[i][src] > 0)?;
        letters[i] = letter;
        state = src;
    }
    Word::new(letters, nfa.sigma().max(2)).ok()
}

/// Run file format: first line the word ("eps" allowed), second line
/// whitespace-separated state indices (one more than the word length).
fn parse_run_file(content: &str) -> Result<Run> {
    let mut lines = content.lines().filter(|l| !l.trim().is_empty());
    let word_line = lines.next().ok_or_else(|| anyhow!("run file is empty"))?;
    let states_line = lines.next().ok_or_else(|| anyhow!("run file is missing the state line"))?;
    let word = word_arg(word_line.trim())?;
    let states: Vec<usize> = states_line
        .split_whitespace()
        .map(|t| t.parse().with_context(|| format!("bad state index {t:?}")))
        .collect::<Result<_>>()?;
    Run::new(states, word).ok_or_else(|| anyhow!("state sequence must be one longer than the word"))
}
