//! Meta-repository (re3data) lookup and quality-icon counting.

use roxmltree::{Document, Node};
use serde::{Deserialize, Serialize};

use crate::evidence::{EvidenceSet, Recorder};
use crate::net::{Endpoints, FetchError, Fetcher};

pub const COLLECTOR: &str = "registry";
pub const RE3DATA: &str = "re3data";

/// How many candidates from a registry search are checked for a match.
const MAX_CANDIDATES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RegistryConfig {
    /// Meta-repositories whose listing counts as eligible.
    pub eligible: Vec<String>,
}

impl Default for RegistryConfig {
    fn default() -> Self {
        RegistryConfig {
            eligible: vec![RE3DATA.to_string()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Locator {
    RegistryId(String),
    Doi(String),
    Url(String),
    Name(String),
}

pub fn parse_locator(input: &str) -> Locator {
    let s = input.trim();
    let lower = s.to_lowercase();
    if lower.starts_with("r3d") && s[3..].chars().all(|c| c.is_ascii_digit()) && s.len() > 3 {
        return Locator::RegistryId(lower);
    }
    let doi = lower
        .strip_prefix("https://doi.org/")
        .or_else(|| lower.strip_prefix("http://doi.org/"))
        .or_else(|| lower.strip_prefix("doi:"))
        .unwrap_or(&lower);
    if doi.starts_with("10.") && doi.contains('/') {
        return Locator::Doi(doi.to_string());
    }
    if lower.starts_with("http://") || lower.starts_with("https://") {
        return Locator::Url(s.to_string());
    }
    Locator::Name(s.to_string())
}

/// Host (without `www.`) and path (without trailing slash), lower-cased.
pub fn normalize_url(url: &str) -> String {
    let rest = url.split_once("://").map_or(url, |(_, r)| r);
    let rest = rest.split(['?', '#']).next().unwrap_or(rest);
    let rest = rest.trim_end_matches('/').to_lowercase();
    rest.strip_prefix("www.").map(str::to_string).unwrap_or(rest)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RegistryRecord {
    pub id: String,
    pub name: String,
    pub additional_names: Vec<String>,
    pub url: Option<String>,
    pub doi: Option<String>,
    pub icons: Vec<&'static str>,
}

fn texts(doc: &Document<'_>, local: &str) -> Vec<String> {
    doc.descendants()
        .filter(|n: &Node<'_, '_>| n.is_element() && n.tag_name().name() == local)
        .filter_map(|n| n.text().map(|t| t.trim().to_string()))
        .filter(|t| !t.is_empty())
        .collect()
}

fn first_text(doc: &Document<'_>, local: &str) -> Option<String> {
    texts(doc, local).into_iter().next()
}

/// Parses a re3data repository record.
pub fn parse_record(xml: &str) -> Result<RegistryRecord, String> {
    let doc = Document::parse(xml).map_err(|e| e.to_string())?;
    let id = first_text(&doc, "re3data.orgIdentifier")
        .ok_or("record without re3data identifier")?;
    let access: Vec<String> = texts(&doc, "dataAccessType")
        .into_iter()
        .chain(texts(&doc, "databaseAccessType"))
        .map(|t| t.to_lowercase())
        .collect();
    let mut icons = Vec::new();
    if access.iter().any(|t| t == "open") {
        icons.push("open_access");
    }
    if !texts(&doc, "dataLicenseName").is_empty() {
        icons.push("license");
    }
    if texts(&doc, "pidSystem").iter().any(|t| !t.eq_ignore_ascii_case("none")) {
        icons.push("pid_system");
    }
    if !texts(&doc, "certificate").is_empty() {
        icons.push("certificate");
    }
    if !texts(&doc, "policyName").is_empty() {
        icons.push("policy");
    }
    if texts(&doc, "qualityManagement").iter().any(|t| t.eq_ignore_ascii_case("yes")) {
        icons.push("quality_management");
    }
    Ok(RegistryRecord {
        id,
        name: first_text(&doc, "repositoryName").unwrap_or_default(),
        additional_names: texts(&doc, "additionalName"),
        url: first_text(&doc, "repositoryURL"),
        doi: first_text(&doc, "doi"),
        icons,
    })
}

/// Repository ids from a re3data search result list.
pub fn parse_search(xml: &str) -> Result<Vec<String>, String> {
    let doc = Document::parse(xml).map_err(|e| e.to_string())?;
    Ok(doc
        .descendants()
        .filter(|n| n.is_element() && n.tag_name().name() == "repository")
        .filter_map(|r| {
            r.children()
                .find(|c| c.is_element() && c.tag_name().name() == "id")
                .and_then(|c| c.text())
                .map(|t| t.trim().to_string())
        })
        .collect())
}

fn matches(locator: &Locator, record: &RegistryRecord) -> bool {
    match locator {
        Locator::RegistryId(id) => record.id.eq_ignore_ascii_case(id),
        Locator::Doi(doi) => record
            .doi
            .as_deref()
            .is_some_and(|d| d.to_lowercase().ends_with(doi.as_str())),
        Locator::Url(u) => record
            .url
            .as_deref()
            .is_some_and(|r| normalize_url(r) == normalize_url(u)),
        Locator::Name(n) => {
            record.name.eq_ignore_ascii_case(n)
                || record.additional_names.iter().any(|a| a.eq_ignore_ascii_case(n))
        }
    }
}

enum Lookup {
    Found(RegistryRecord, String),
    Absent,
}

fn fetch_record(fetcher: &Fetcher, endpoints: &Endpoints, id: &str) -> Result<Option<(RegistryRecord, String)>, FetchError> {
    let url = format!("{}/api/v1/repository/{}", endpoints.registry, id);
    let resp = fetcher.get(&url, "application/xml")?;
    match resp.status {
        200 => parse_record(&resp.body)
            .map(|r| Some((r, url.clone())))
            .map_err(|e| FetchError::Network(format!("malformed record from {url}: {e}"))),
        404 => Ok(None),
        s => Err(FetchError::Network(format!("unexpected response {s} from {url}"))),
    }
}

fn lookup(locator: &Locator, fetcher: &Fetcher, endpoints: &Endpoints) -> Result<(Lookup, String), FetchError> {
    if let Locator::RegistryId(id) = locator {
        let url = format!("{}/api/v1/repository/{}", endpoints.registry, id);
        return Ok(match fetch_record(fetcher, endpoints, id)? {
            Some((r, src)) => (Lookup::Found(r, src), url),
            None => (Lookup::Absent, url),
        });
    }
    let query = match locator {
        Locator::Doi(d) => d.clone(),
        Locator::Url(u) => normalize_url(u),
        Locator::Name(n) => n.clone(),
        Locator::RegistryId(_) => unreachable!(),
    };
    let encoded: String = url::form_urlencoded::byte_serialize(query.as_bytes()).collect();
    let search = format!("{}/api/beta/repositories?query={}", endpoints.registry, encoded);
    let resp = fetcher.get(&search, "application/xml")?;
    if resp.status != 200 {
        return Err(FetchError::Network(format!("unexpected response {} from {search}", resp.status)));
    }
    let ids = parse_search(&resp.body)
        .map_err(|e| FetchError::Network(format!("malformed search result from {search}: {e}")))?;
    for id in ids.iter().take(MAX_CANDIDATES) {
        if let Some((record, src)) = fetch_record(fetcher, endpoints, id)? {
            if matches(locator, &record) {
                return Ok((Lookup::Found(record, src), search));
            }
        }
    }
    Ok((Lookup::Absent, search))
}

pub fn lookup_meta_repository(
    locator: &str,
    fetcher: &Fetcher,
    endpoints: &Endpoints,
    config: &RegistryConfig,
    retrieved_at: &str,
) -> EvidenceSet {
    let mut set = EvidenceSet::new(locator);
    if !config.eligible.iter().any(|e| e == RE3DATA) {
        let mut rec = Recorder {
            set: &mut set,
            collector: COLLECTOR,
            retrieved_at: retrieved_at.to_string(),
        };
        rec.put("listed_in_meta_repository", false, "config");
        return set;
    }
    let parsed = parse_locator(locator);
    match lookup(&parsed, fetcher, endpoints) {
        Ok((found, source)) => {
            let mut rec = Recorder {
                set: &mut set,
                collector: COLLECTOR,
                retrieved_at: retrieved_at.to_string(),
            };
            match found {
                Lookup::Found(record, record_src) => {
                    rec.put("listed_in_meta_repository", true, &record_src);
                    rec.put("quality_icon_count", record.icons.len(), &record_src);
                    rec.put("meta_repository_id", record.id.as_str(), &record_src);
                    rec.put(
                        "meta_repository_icons",
                        record.icons.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                        &record_src,
                    );
                }
                Lookup::Absent => rec.put("listed_in_meta_repository", false, &source),
            }
        }
        Err(e) => set.fail(COLLECTOR, e.reason(), e.is_network()),
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn locators() {
        assert_eq!(parse_locator("r3d100010134"), Locator::RegistryId("r3d100010134".into()));
        assert_eq!(parse_locator("https://doi.org/10.17616/R3VK8S"), Locator::Doi("10.17616/r3vk8s".into()));
        assert!(matches!(parse_locator("https://dataservices.gfz-potsdam.de/"), Locator::Url(_)));
        assert!(matches!(parse_locator("GFZ Data Services"), Locator::Name(_)));
    }

    #[test]
    fn url_normalization() {
        assert_eq!(normalize_url("https://www.Example.org/data/"), "example.org/data");
        assert_eq!(normalize_url("http://example.org/data?x=1"), "example.org/data");
    }

    #[test]
    fn offline_lookup_is_unknown() {
        let set = lookup_meta_repository(
            "r3d100010134",
            &Fetcher::offline(None),
            &Endpoints::default(),
            &RegistryConfig::default(),
            "t",
        );
        assert!(set.value("listed_in_meta_repository").is_none());
        assert_eq!(set.failures.len(), 1);
        assert!(!set.failures[0].network);
    }

    #[test]
    fn ineligible_registry_never_lists() {
        let config = RegistryConfig { eligible: vec![] };
        let set = lookup_meta_repository("r3d1", &Fetcher::offline(None), &Endpoints::default(), &config, "t");
        assert_eq!(set.value("listed_in_meta_repository").unwrap().as_bool(), Some(false));
    }
}
