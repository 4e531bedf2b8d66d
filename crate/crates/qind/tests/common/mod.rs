#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use qind::checks::CheckConfig;
use qind::collectors::registry::RegistryConfig;
use qind::net::{Cache, Endpoints, Fetcher, HttpResponse, Transport};
use qind::pipeline::RunContext;
use tempfile::TempDir;
use walkdir::WalkDir;

pub const TS: &str = "2026-01-01T00:00:00Z";

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

/// Copies the fixture tree into a fresh directory, turning every `dot-git`
/// into a real `.git`.
pub fn materialize() -> TempDir {
    let tmp = tempfile::tempdir().unwrap();
    let src = fixtures();
    for entry in WalkDir::new(&src) {
        let entry = entry.unwrap();
        let rel = entry.path().strip_prefix(&src).unwrap();
        let rel: PathBuf = rel
            .components()
            .map(|c| match c.as_os_str().to_str() {
                Some("dot-git") => ".git".into(),
                _ => c.as_os_str().to_owned(),
            })
            .collect();
        let dest = tmp.path().join(rel);
        if entry.file_type().is_dir() {
            std::fs::create_dir_all(&dest).unwrap();
        } else {
            std::fs::copy(entry.path(), &dest).unwrap();
        }
    }
    tmp
}

/// The binary with every environment knob that could change results removed.
pub fn qind() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qind"));
    for (k, _) in std::env::vars() {
        if k.starts_with("QIND_") {
            cmd.env_remove(k);
        }
    }
    cmd.env_remove("SOURCE_DATE_EPOCH");
    cmd
}

pub fn run(cmd: &mut Command) -> (i32, String, String) {
    let Output { status, stdout, stderr } = cmd.output().unwrap();
    (
        status.code().unwrap_or(-1),
        String::from_utf8_lossy(&stdout).into_owned(),
        String::from_utf8_lossy(&stderr).into_owned(),
    )
}

/// Transport that records every call and refuses it.
#[derive(Default)]
pub struct Tripwire {
    pub calls: AtomicUsize,
}

impl Transport for Tripwire {
    fn get(&self, url: &str, _accept: &str) -> Result<HttpResponse, String> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        Err(format!("unexpected network call: {url}"))
    }
}

pub fn context(fetcher: Fetcher) -> RunContext {
    RunContext {
        fetcher,
        endpoints: Endpoints::default(),
        checks: CheckConfig::default(),
        registry: RegistryConfig::default(),
        timestamp: TS.into(),
    }
}

/// Offline context over `cache`, backed by a tripwire transport.
pub fn offline_context(cache: Option<&Path>) -> (RunContext, Arc<Tripwire>) {
    let wire = Arc::new(Tripwire::default());
    let fetcher = Fetcher::new(wire.clone(), cache.map(Cache::new), true);
    (context(fetcher), wire)
}
