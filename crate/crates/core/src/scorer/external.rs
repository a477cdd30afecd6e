//! Client for scorers living in another process.
//!
//! The wire format is newline-delimited JSON over a child's stdin/stdout or a
//! TCP stream:
//!
//! ```text
//! -> {"id":"17","s1":"...","s2":"..."}
//! <- {"id":"17","score":0.83}
//! -> {"cmd":"ping"}
//! <- {"ok":true}
//! ```
//!
//! Requests of a batch are pipelined from a writer thread while responses
//! are collected and matched by id, so the peer may answer in any order.

use std::io::{self, BufRead, BufReader, Read, Write};
use std::net::TcpStream;
use std::process::{Child, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

use super::{Score, ScoreError, Scorer};
use crate::corpus::SentencePair;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(60);

enum Transport {
    Child(Child),
    Tcp(TcpStream),
}

impl Transport {
    fn abort(&mut self) {
        match self {
            Transport::Child(child) => {
                let _ = child.kill();
                let _ = child.wait();
            }
            Transport::Tcp(stream) => {
                let _ = stream.shutdown(std::net::Shutdown::Both);
            }
        }
    }
}

#[derive(Serialize)]
struct Request<'a> {
    id: &'a str,
    s1: &'a str,
    s2: &'a str,
}

pub struct ExternalScorer {
    name: String,
    transport: Transport,
    writer: Box<dyn Write + Send>,
    lines: Receiver<io::Result<String>>,
    timeout: Duration,
    next_id: u64,
    broken: bool,
}

fn spawn_reader(source: impl Read + Send + 'static) -> Receiver<io::Result<String>> {
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        let mut reader = BufReader::new(source);
        loop {
            let mut line = String::new();
            match reader.read_line(&mut line) {
                Ok(0) => break,
                Ok(_) => {
                    if tx.send(Ok(line)).is_err() {
                        break;
                    }
                }
                Err(e) => {
                    let _ = tx.send(Err(e));
                    break;
                }
            }
        }
    });
    rx
}

fn protocol(pair_id: Option<&str>, detail: impl Into<String>) -> ScoreError {
    ScoreError::Protocol {
        pair_id: pair_id.map(str::to_owned),
        detail: detail.into(),
    }
}

impl ExternalScorer {
    /// Spawns `command` (split with shell quoting rules) and pings it.
    pub fn spawn(command: &str, timeout: Duration) -> Result<Self, ScoreError> {
        let argv = shlex::split(command)
            .filter(|argv| !argv.is_empty())
            .ok_or_else(|| {
                ScoreError::Io(io::Error::new(
                    io::ErrorKind::InvalidInput,
                    format!("cannot parse external command {command:?}"),
                ))
            })?;
        Self::spawn_program(&argv[0], &argv[1..], timeout)
    }

    pub fn spawn_program<S: AsRef<std::ffi::OsStr>>(
        program: &str,
        args: &[S],
        timeout: Duration,
    ) -> Result<Self, ScoreError> {
        let mut child = Command::new(program)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        Self::handshake(
            format!("external:{program}"),
            Transport::Child(child),
            Box::new(stdin),
            spawn_reader(stdout),
            timeout,
        )
    }

    /// Connects to a scorer listening on `addr` (`host:port`) and pings it.
    pub fn connect(addr: &str, timeout: Duration) -> Result<Self, ScoreError> {
        let stream = TcpStream::connect(addr)?;
        stream.set_nodelay(true)?;
        let read_half = stream.try_clone()?;
        let write_half = stream.try_clone()?;
        Self::handshake(
            format!("external:{addr}"),
            Transport::Tcp(stream),
            Box::new(io::BufWriter::new(write_half)),
            spawn_reader(read_half),
            timeout,
        )
    }

    fn handshake(
        name: String,
        transport: Transport,
        writer: Box<dyn Write + Send>,
        lines: Receiver<io::Result<String>>,
        timeout: Duration,
    ) -> Result<Self, ScoreError> {
        let mut scorer = ExternalScorer {
            name,
            transport,
            writer,
            lines,
            timeout,
            next_id: 0,
            broken: false,
        };
        scorer.ping()?;
        Ok(scorer)
    }

    /// Liveness check: `{"cmd":"ping"}` must be answered with `{"ok":true}`.
    pub fn ping(&mut self) -> Result<(), ScoreError> {
        let result = self.ping_inner();
        if result.is_err() {
            self.broken = true;
            self.transport.abort();
        }
        result
    }

    fn ping_inner(&mut self) -> Result<(), ScoreError> {
        if self.broken {
            return Err(ScoreError::Disconnected { pair_id: None });
        }
        self.writer.write_all(b"{\"cmd\":\"ping\"}\n")?;
        self.writer.flush()?;
        loop {
            let line = match self.lines.recv_timeout(self.timeout) {
                Ok(line) => line?,
                Err(RecvTimeoutError::Timeout) => {
                    return Err(protocol(None, "no answer to ping"));
                }
                Err(RecvTimeoutError::Disconnected) => {
                    return Err(ScoreError::Disconnected { pair_id: None });
                }
            };
            if line.trim().is_empty() {
                continue;
            }
            let value: Value = serde_json::from_str(line.trim())
                .map_err(|e| protocol(None, format!("ping reply is not JSON: {e}")))?;
            return if value.get("ok") == Some(&Value::Bool(true)) {
                Ok(())
            } else {
                Err(protocol(None, format!("unexpected ping reply {value}")))
            };
        }
    }

    fn collect(
        lines: &Receiver<io::Result<String>>,
        timeout: Duration,
        pairs: &[SentencePair],
        base: u64,
    ) -> Result<Vec<Score>, ScoreError> {
        let mut scores: Vec<Option<Score>> = vec![None; pairs.len()];
        let mut remaining = pairs.len();
        let first_pending = |scores: &[Option<Score>]| {
            scores
                .iter()
                .position(Option::is_none)
                .map(|i| pairs[i].id.clone())
                .unwrap_or_default()
        };

        while remaining > 0 {
            let line = match lines.recv_timeout(timeout) {
                Ok(line) => line?,
                Err(RecvTimeoutError::Timeout) => {
                    return Err(ScoreError::Timeout {
                        pair_id: first_pending(&scores),
                    })
                }
                Err(RecvTimeoutError::Disconnected) => {
                    return Err(ScoreError::Disconnected {
                        pair_id: Some(first_pending(&scores)),
                    })
                }
            };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let value: Value = serde_json::from_str(line)
                .map_err(|e| protocol(None, format!("response is not JSON ({e}): {line}")))?;
            let wire_id = value
                .get("id")
                .and_then(Value::as_str)
                .ok_or_else(|| protocol(None, format!("response without string id: {line}")))?;
            let index = wire_id
                .parse::<u64>()
                .ok()
                .and_then(|id| id.checked_sub(base))
                .and_then(|i| usize::try_from(i).ok())
                .filter(|&i| i < pairs.len())
                .ok_or_else(|| protocol(None, format!("unknown response id {wire_id:?}")))?;
            let pair_id = pairs[index].id.as_str();
            if scores[index].is_some() {
                return Err(protocol(Some(pair_id), "duplicate response"));
            }
            if let Some(message) = value.get("error") {
                return Err(ScoreError::Remote {
                    pair_id: pair_id.to_owned(),
                    message: message.as_str().map_or_else(|| message.to_string(), str::to_owned),
                });
            }
            let raw = value
                .get("score")
                .and_then(Value::as_f64)
                .ok_or_else(|| protocol(Some(pair_id), format!("non-numeric score: {line}")))?;
            let score = Score::new(raw)
                .ok_or_else(|| protocol(Some(pair_id), format!("score {raw} outside [0, 1]")))?;
            scores[index] = Some(score);
            remaining -= 1;
        }
        Ok(scores.into_iter().map(|s| s.expect("all filled")).collect())
    }
}

impl Scorer for ExternalScorer {
    fn score_batch(&mut self, pairs: &[SentencePair]) -> Result<Vec<Score>, ScoreError> {
        if self.broken {
            return Err(ScoreError::Disconnected { pair_id: None });
        }
        if pairs.is_empty() {
            return Ok(Vec::new());
        }
        let base = self.next_id;
        self.next_id += pairs.len() as u64;

        let mut payload = Vec::new();
        for (i, pair) in pairs.iter().enumerate() {
            let id = (base + i as u64).to_string();
            serde_json::to_writer(
                &mut payload,
                &Request {
                    id: &id,
                    s1: pair.s1.as_str(),
                    s2: pair.s2.as_str(),
                },
            )
            .expect("serializing strings cannot fail");
            payload.push(b'\n');
        }

        let writer = &mut self.writer;
        let transport = &mut self.transport;
        let lines = &self.lines;
        let timeout = self.timeout;
        let result = thread::scope(|scope| {
            let sender = scope.spawn(move || -> io::Result<()> {
                writer.write_all(&payload)?;
                writer.flush()
            });
            let collected = Self::collect(lines, timeout, pairs, base);
            if collected.is_err() {
                // unblocks the writer if the peer stopped reading
                transport.abort();
            }
            let written = sender.join().expect("writer thread panicked");
            match (collected, written) {
                (Ok(scores), Ok(())) => Ok(scores),
                (Err(e), _) => Err(e),
                (Ok(_), Err(e)) => Err(e.into()),
            }
        });
        if result.is_err() {
            self.broken = true;
        }
        result
    }

    fn name(&self) -> &str {
        &self.name
    }
}

impl Drop for ExternalScorer {
    fn drop(&mut self) {
        self.transport.abort();
    }
}
