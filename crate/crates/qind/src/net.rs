//! HTTP access for the remote collectors: a swappable transport, an on-disk
//! response cache and an offline switch.

use std::fs;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HttpResponse {
    pub status: u16,
    pub body: String,
}

pub trait Transport: Send + Sync {
    fn get(&self, url: &str, accept: &str) -> Result<HttpResponse, String>;
}

/// Minimum spacing between two live requests across the whole process.
pub const POLITENESS_INTERVAL: Duration = Duration::from_millis(250);

static LAST_REQUEST: Mutex<Option<Instant>> = Mutex::new(None);

fn wait_turn() {
    let mut last = LAST_REQUEST.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(prev) = *last {
        let elapsed = prev.elapsed();
        if elapsed < POLITENESS_INTERVAL {
            std::thread::sleep(POLITENESS_INTERVAL - elapsed);
        }
    }
    *last = Some(Instant::now());
}

pub struct HttpTransport {
    agent: ureq::Agent,
}

impl HttpTransport {
    pub fn new() -> Self {
        let agent = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .timeout_global(Some(Duration::from_secs(30)))
            .user_agent(concat!("qind/", env!("CARGO_PKG_VERSION")))
            .build()
            .into();
        HttpTransport { agent }
    }
}

impl Default for HttpTransport {
    fn default() -> Self {
        Self::new()
    }
}

impl Transport for HttpTransport {
    fn get(&self, url: &str, accept: &str) -> Result<HttpResponse, String> {
        wait_turn();
        let mut resp = self
            .agent
            .get(url)
            .header("Accept", accept)
            .call()
            .map_err(|e| e.to_string())?;
        let status = resp.status().as_u16();
        let body = resp
            .body_mut()
            .read_to_string()
            .map_err(|e| e.to_string())?;
        Ok(HttpResponse { status, body })
    }
}

/// Transport that refuses every request. Used in offline runs so a stray
/// request cannot slip through.
pub struct NoNetwork;

impl Transport for NoNetwork {
    fn get(&self, url: &str, _accept: &str) -> Result<HttpResponse, String> {
        Err(format!("network access disabled: {url}"))
    }
}

pub const DEFAULT_DATACITE_BASE: &str = "https://api.datacite.org";
pub const DEFAULT_REGISTRY_BASE: &str = "https://www.re3data.org";
pub const DEFAULT_HANDLE_BASE: &str = "https://hdl.handle.net";

/// Base URLs of the remote services, overridable for test doubles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Endpoints {
    pub datacite: String,
    pub registry: String,
    pub handle: String,
}

impl Default for Endpoints {
    fn default() -> Self {
        Endpoints {
            datacite: DEFAULT_DATACITE_BASE.into(),
            registry: DEFAULT_REGISTRY_BASE.into(),
            handle: DEFAULT_HANDLE_BASE.into(),
        }
    }
}

impl Endpoints {
    /// Reads `QIND_DATACITE_BASE`, `QIND_REGISTRY_BASE` and
    /// `QIND_HANDLE_BASE`, falling back to the public services.
    pub fn from_env() -> Self {
        let get = |k: &str, d: &str| {
            std::env::var(k)
                .ok()
                .filter(|v| !v.is_empty())
                .unwrap_or_else(|| d.to_string())
                .trim_end_matches('/')
                .to_string()
        };
        Endpoints {
            datacite: get("QIND_DATACITE_BASE", DEFAULT_DATACITE_BASE),
            registry: get("QIND_REGISTRY_BASE", DEFAULT_REGISTRY_BASE),
            handle: get("QIND_HANDLE_BASE", DEFAULT_HANDLE_BASE),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub url: String,
    /// Calendar date (YYYY-MM-DD) the response was fetched.
    pub fetched: String,
    pub status: u16,
    pub body: String,
}

#[derive(Debug, Clone)]
pub struct Cache {
    pub dir: PathBuf,
    /// Entries older than this many days are refetched when online.
    pub ttl_days: u32,
}

pub fn cache_key(url: &str) -> String {
    hex::encode(Sha256::digest(url.as_bytes()))
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache {
            dir: dir.into(),
            ttl_days: 30,
        }
    }

    pub fn path_for(&self, url: &str) -> PathBuf {
        self.dir.join(format!("{}.json", cache_key(url)))
    }

    pub fn load(&self, url: &str) -> Option<CacheEntry> {
        let text = fs::read_to_string(self.path_for(url)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.url == url).then_some(entry)
    }

    pub fn store(&self, entry: &CacheEntry) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let text = serde_json::to_string_pretty(entry).map_err(std::io::Error::other)?;
        crate::formats::write_atomic(&self.path_for(&entry.url), text.as_bytes())
    }

    fn is_fresh(&self, entry: &CacheEntry, today: NaiveDate) -> bool {
        match NaiveDate::parse_from_str(&entry.fetched, "%Y-%m-%d") {
            Ok(d) => (today - d).num_days() <= i64::from(self.ttl_days),
            Err(_) => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FetchError {
    /// Offline and not cached; nothing was attempted.
    Offline(String),
    Network(String),
}

impl FetchError {
    pub fn is_network(&self) -> bool {
        matches!(self, FetchError::Network(_))
    }

    pub fn reason(&self) -> &str {
        match self {
            FetchError::Offline(r) | FetchError::Network(r) => r,
        }
    }
}

#[derive(Clone)]
pub struct Fetcher {
    transport: Arc<dyn Transport>,
    cache: Option<Cache>,
    offline: bool,
}

impl Fetcher {
    pub fn new(transport: Arc<dyn Transport>, cache: Option<Cache>, offline: bool) -> Self {
        Fetcher {
            transport,
            cache,
            offline,
        }
    }

    /// Cache-only fetcher that never touches the network.
    pub fn offline(cache: Option<Cache>) -> Self {
        Fetcher::new(Arc::new(NoNetwork), cache, true)
    }

    pub fn is_offline(&self) -> bool {
        self.offline
    }

    pub fn get(&self, url: &str, accept: &str) -> Result<HttpResponse, FetchError> {
        let cached = self.cache.as_ref().and_then(|c| c.load(url));
        if self.offline {
            return match cached {
                Some(e) => Ok(HttpResponse {
                    status: e.status,
                    body: e.body,
                }),
                None => Err(FetchError::Offline(format!("offline, not cached: {url}"))),
            };
        }
        let today = chrono::Utc::now().date_naive();
        if let (Some(cache), Some(entry)) = (&self.cache, &cached) {
            if cache.is_fresh(entry, today) {
                return Ok(HttpResponse {
                    status: entry.status,
                    body: entry.body.clone(),
                });
            }
        }
        let resp = self.transport.get(url, accept).map_err(FetchError::Network)?;
        // Server errors are transient; only cache answers that mean something.
        if resp.status < 500 {
            if let Some(cache) = &self.cache {
                let entry = CacheEntry {
                    url: url.to_string(),
                    fetched: today.format("%Y-%m-%d").to_string(),
                    status: resp.status,
                    body: resp.body.clone(),
                };
                let _ = cache.store(&entry);
            }
        }
        Ok(resp)
    }
}
