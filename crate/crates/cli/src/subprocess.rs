//! An adapter running as a child process, spoken to over its stdin/stdout.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::Duration;

use interval_conform::adapters::Capabilities;
use interval_conform::protocol::{format_request, parse_response, HandshakeParser};
use interval_conform::{FunctionId, Interval};

#[derive(Debug, thiserror::Error)]
pub enum AdapterError {
    #[error("cannot launch `{cmd}`: {source}")]
    Launch { cmd: String, source: std::io::Error },
    #[error("empty adapter command")]
    EmptyCommand,
    #[error("adapter handshake failed: {0}")]
    Handshake(String),
}

struct Process {
    child: Child,
    stdin: ChildStdin,
    lines: Receiver<String>,
}

impl Process {
    fn spawn(cmd: &[String]) -> Result<Process, AdapterError> {
        let (program, args) = cmd.split_first().ok_or(AdapterError::EmptyCommand)?;
        let mut child = Command::new(program)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|source| AdapterError::Launch {
                cmd: cmd.join(" "),
                source,
            })?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        let (tx, lines) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                let Ok(line) = line else { break };
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        Ok(Process { child, stdin, lines })
    }

    fn send(&mut self, line: &str) -> Result<(), String> {
        writeln!(self.stdin, "{line}")
            .and_then(|_| self.stdin.flush())
            .map_err(|e| format!("broken pipe: {e}"))
    }

    fn receive(&self, timeout: Duration) -> Result<String, String> {
        match self.lines.recv_timeout(timeout) {
            Ok(l) => Ok(l),
            Err(RecvTimeoutError::Timeout) => Err(format!("no response within {timeout:?}")),
            Err(RecvTimeoutError::Disconnected) => Err("adapter closed its output".to_string()),
        }
    }

    fn handshake(&mut self, timeout: Duration) -> Result<Capabilities, AdapterError> {
        self.send("HELLO").map_err(AdapterError::Handshake)?;
        let mut parser = HandshakeParser::default();
        loop {
            let line = self.receive(timeout).map_err(AdapterError::Handshake)?;
            if let Some(caps) = parser.push(&line).map_err(|e| AdapterError::Handshake(e.to_string()))? {
                return Ok(caps);
            }
        }
    }

    fn stop(mut self) {
        let _ = self.send("BYE");
        drop(self.stdin);
        for _ in 0..20 {
            if let Ok(Some(_)) = self.child.try_wait() {
                return;
            }
            thread::sleep(Duration::from_millis(5));
        }
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// A launched adapter. Requests are serialized: one outstanding request at
/// a time. After a timeout or a broken pipe the process is restarted so the
/// next request starts from a clean stream.
pub struct SubprocessAdapter {
    cmd: Vec<String>,
    process: Option<Process>,
    caps: Capabilities,
    timeout: Duration,
}

impl SubprocessAdapter {
    pub fn launch(cmd: Vec<String>, timeout: Duration) -> Result<Self, AdapterError> {
        let mut process = Process::spawn(&cmd)?;
        let caps = match process.handshake(timeout) {
            Ok(c) => c,
            Err(e) => {
                process.stop();
                return Err(e);
            }
        };
        Ok(SubprocessAdapter {
            cmd,
            process: Some(process),
            caps,
            timeout,
        })
    }

    pub fn capabilities(&self) -> &Capabilities {
        &self.caps
    }

    fn restart(&mut self) {
        if let Some(p) = self.process.take() {
            p.stop();
        }
        if let Ok(mut p) = Process::spawn(&self.cmd) {
            if p.handshake(self.timeout).is_ok() {
                self.process = Some(p);
            } else {
                p.stop();
            }
        }
    }

    /// Sends one `EVAL` and waits for its reply. Every failure, including an
    /// `ERR` reply, comes back as a fault message.
    pub fn evaluate(&mut self, f: FunctionId, args: &[Interval]) -> Result<Interval, String> {
        let format = args.first().map(|a| a.format()).ok_or("no arguments")?;
        let Some(p) = self.process.as_mut() else {
            return Err("adapter is not running".to_string());
        };
        let sent = p.send(&format_request(f, args));
        let reply = sent.and_then(|_| p.receive(self.timeout));
        match reply {
            Ok(line) => match parse_response(&line, format) {
                Ok(Ok(z)) => Ok(z),
                Ok(Err(msg)) => Err(format!("adapter error: {msg}")),
                Err(e) => Err(e.to_string()),
            },
            Err(e) => {
                self.restart();
                Err(e)
            }
        }
    }
}

impl Drop for SubprocessAdapter {
    fn drop(&mut self) {
        if let Some(p) = self.process.take() {
            p.stop();
        }
    }
}
