//! Deterministic external scorer for exercising the NDJSON protocol.
//!
//! Scores are `(fnv1a(s1 \x1f s2) % 10001) / 10000` unless `--constant` is
//! given. Responses are held back and released in reverse order, either when
//! `--reorder` requests are buffered or when input goes quiet for
//! `--flush-ms`, so clients must match responses by id.

use std::io::{self, BufRead, Write};
use std::sync::mpsc::{self, RecvTimeoutError};
use std::thread;
use std::time::Duration;

use clap::Parser;
use serde_json::{json, Value};

#[derive(Parser)]
struct Args {
    /// Answer every request with this score
    #[arg(long)]
    constant: Option<f64>,
    /// Answer the request with this 0-based position with score 1.5
    #[arg(long)]
    bad_at: Option<usize>,
    /// Maximum number of responses held back before release
    #[arg(long, default_value_t = 7)]
    reorder: usize,
    /// Release held responses after this much input silence
    #[arg(long, default_value_t = 10)]
    flush_ms: u64,
}

fn fnv1a(bytes: impl IntoIterator<Item = u8>) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn hash_score(s1: &str, s2: &str) -> f64 {
    let h = fnv1a(s1.bytes().chain([0x1f]).chain(s2.bytes()));
    (h % 10001) as f64 / 10000.0
}

fn main() {
    let args = Args::parse();
    let (tx, rx) = mpsc::channel::<String>();
    thread::spawn(move || {
        for line in io::stdin().lock().lines() {
            let Ok(line) = line else { break };
            if tx.send(line).is_err() {
                break;
            }
        }
    });

    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut held: Vec<Value> = Vec::new();
    let mut seen = 0usize;
    let flush = |held: &mut Vec<Value>, out: &mut io::StdoutLock| {
        for v in held.drain(..).rev() {
            writeln!(out, "{v}").ok();
        }
        out.flush().ok();
    };

    loop {
        match rx.recv_timeout(Duration::from_millis(args.flush_ms)) {
            Ok(line) => {
                if line.trim().is_empty() {
                    continue;
                }
                let req: Value = match serde_json::from_str(&line) {
                    Ok(v) => v,
                    Err(e) => {
                        held.push(json!({ "error": format!("bad request: {e}") }));
                        continue;
                    }
                };
                if req.get("cmd").and_then(Value::as_str) == Some("ping") {
                    writeln!(out, "{}", json!({ "ok": true })).ok();
                    out.flush().ok();
                    continue;
                }
                let id = req.get("id").cloned().unwrap_or(Value::Null);
                let s1 = req.get("s1").and_then(Value::as_str).unwrap_or_default();
                let s2 = req.get("s2").and_then(Value::as_str).unwrap_or_default();
                let score = if args.bad_at == Some(seen) {
                    1.5
                } else {
                    args.constant.unwrap_or_else(|| hash_score(s1, s2))
                };
                seen += 1;
                held.push(json!({ "id": id, "score": score }));
                if held.len() >= args.reorder.max(1) {
                    flush(&mut held, &mut out);
                }
            }
            Err(RecvTimeoutError::Timeout) => flush(&mut held, &mut out),
            Err(RecvTimeoutError::Disconnected) => {
                flush(&mut held, &mut out);
                break;
            }
        }
    }
}
