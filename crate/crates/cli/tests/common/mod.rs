//! Shared test support: a minimal HTTP stub that speaks just enough of the
//! chat-completion wire shape to stand in for a judge endpoint, plus path
//! helpers for fixtures and the compiled binary.

#![allow(dead_code)]

use std::io::{BufRead, BufReader, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;

/// What the stub sends back for one request.
pub enum StubReply {
    /// A well-formed reply whose message content is the given string.
    Content(String),
    /// An HTTP error status with an empty body.
    Status(u16),
    /// A 200 with an arbitrary JSON body (for malformed-shape tests).
    RawJson(String),
}

/// One captured request.
#[derive(Debug, Clone)]
pub struct CapturedRequest {
    pub body: String,
    pub authorization: Option<String>,
}

/// A tiny threaded HTTP/1.1 server; every connection carries exactly one
/// POST and is closed after the reply.
pub struct StubServer {
    pub url: String,
    addr: SocketAddr,
    count: Arc<AtomicUsize>,
    requests: Arc<Mutex<Vec<CapturedRequest>>>,
    stop: Arc<AtomicBool>,
    handle: Option<JoinHandle<()>>,
}

impl StubServer {
    /// Starts the server. `responder` maps (arrival index, request body) to
    /// a reply; retried requests arrive as fresh indices.
    pub fn start<F>(responder: F) -> Self
    where
        F: Fn(usize, &str) -> StubReply + Send + Sync + 'static,
    {
        let listener = TcpListener::bind("127.0.0.1:0").expect("bind an ephemeral port");
        let addr = listener.local_addr().expect("bound socket has an address");
        let count = Arc::new(AtomicUsize::new(0));
        let requests = Arc::new(Mutex::new(Vec::new()));
        let stop = Arc::new(AtomicBool::new(false));

        let responder = Arc::new(responder);
        let handle = {
            let count = Arc::clone(&count);
            let requests = Arc::clone(&requests);
            let stop = Arc::clone(&stop);
            std::thread::spawn(move || {
                for stream in listener.incoming() {
                    if stop.load(Ordering::SeqCst) {
                        break;
                    }
                    let Ok(stream) = stream else { continue };
                    let responder = Arc::clone(&responder);
                    let count = Arc::clone(&count);
                    let requests = Arc::clone(&requests);
                    std::thread::spawn(move || {
                        let _ = handle_connection(stream, &*responder, &count, &requests);
                    });
                }
            })
        };

        Self {
            url: format!("http://{addr}/v1/chat/completions"),
            addr,
            count,
            requests,
            stop,
            handle: Some(handle),
        }
    }

    /// Requests received so far (retries count separately).
    pub fn count(&self) -> usize {
        self.count.load(Ordering::SeqCst)
    }

    /// Snapshot of every captured request, in arrival order.
    pub fn requests(&self) -> Vec<CapturedRequest> {
        self.requests.lock().expect("stub requests lock").clone()
    }
}

impl Drop for StubServer {
    fn drop(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        // Wake the accept loop so it observes the stop flag.
        let _ = TcpStream::connect(self.addr);
        if let Some(handle) = self.handle.take() {
            let _ = handle.join();
        }
    }
}

fn handle_connection<F>(
    mut stream: TcpStream,
    responder: &F,
    count: &AtomicUsize,
    requests: &Mutex<Vec<CapturedRequest>>,
) -> std::io::Result<()>
where
    F: Fn(usize, &str) -> StubReply,
{
    let mut reader = BufReader::new(stream.try_clone()?);
    let mut request_line = String::new();
    reader.read_line(&mut request_line)?;
    if request_line.trim().is_empty() {
        return Ok(()); // the wake-up connection from Drop
    }

    let mut content_length = 0usize;
    let mut authorization = None;
    loop {
        let mut line = String::new();
        reader.read_line(&mut line)?;
        let line = line.trim_end();
        if line.is_empty() {
            break;
        }
        if let Some((name, value)) = line.split_once(':') {
            let value = value.trim();
            match name.to_ascii_lowercase().as_str() {
                "content-length" => content_length = value.parse().unwrap_or(0),
                "authorization" => authorization = Some(value.to_string()),
                _ => {}
            }
        }
    }
    let mut body = vec![0u8; content_length];
    reader.read_exact(&mut body)?;
    let body = String::from_utf8_lossy(&body).into_owned();

    let index = count.fetch_add(1, Ordering::SeqCst);
    requests
        .lock()
        .expect("stub requests lock")
        .push(CapturedRequest {
            body: body.clone(),
            authorization,
        });

    let (status, reply_body) = match responder(index, &body) {
        StubReply::Content(content) => (
            "200 OK".to_string(),
            serde_json::json!({
                "choices": [{"message": {"role": "assistant", "content": content}}]
            })
            .to_string(),
        ),
        StubReply::Status(code) => (format!("{code} Stub Error"), String::new()),
        StubReply::RawJson(json) => ("200 OK".to_string(), json),
    };
    let response = format!(
        "HTTP/1.1 {status}\r\nContent-Type: application/json\r\n\
         Content-Length: {}\r\nConnection: close\r\n\r\n{reply_body}",
        reply_body.len()
    );
    stream.write_all(response.as_bytes())?;
    stream.flush()?;
    Ok(())
}

/// Path of a committed fixture file.
pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

/// Command for the compiled `ragrank` binary.
pub fn ragrank() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ragrank"))
}

/// Recursively lists (relative path, file bytes) for every file under
/// `dir`, sorted by path — the raw material for byte-identity checks.
pub fn dir_snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    fn walk(root: &Path, dir: &Path, into: &mut Vec<(String, Vec<u8>)>) {
        for entry in std::fs::read_dir(dir).expect("readable directory") {
            let entry = entry.expect("readable directory entry");
            let path = entry.path();
            if path.is_dir() {
                walk(root, &path, into);
            } else {
                let rel = path
                    .strip_prefix(root)
                    .expect("walked paths stay under the root")
                    .to_string_lossy()
                    .into_owned();
                into.push((rel, std::fs::read(&path).expect("readable file")));
            }
        }
    }
    let mut files = Vec::new();
    walk(dir, dir, &mut files);
    files.sort_by(|a, b| a.0.cmp(&b.0));
    files
}
