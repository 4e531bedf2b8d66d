//! Persistent identifier resolution and DataCite metadata harvesting.

use std::fmt;
use std::sync::LazyLock;

use regex::Regex;
use serde_json::Value;

use crate::evidence::{EvidenceSet, Recorder};
use crate::net::{Endpoints, FetchError, Fetcher};

pub const COLLECTOR_HANDLE: &str = "handle";
pub const COLLECTOR_DATACITE: &str = "datacite";

/// DataCite mandatory properties.
pub const DATACITE_MANDATORY: &[&str] = &[
    "Identifier",
    "Creator",
    "Title",
    "Publisher",
    "PublicationYear",
    "ResourceType",
];

/// DataCite recommended properties.
pub const DATACITE_RECOMMENDED: &[&str] = &[
    "Subject",
    "Contributor",
    "Date",
    "RelatedIdentifier",
    "Description",
    "GeoLocation",
];

/// DataCite optional properties.
pub const DATACITE_OPTIONAL: &[&str] = &[
    "Language",
    "AlternateIdentifier",
    "Size",
    "Format",
    "Version",
    "Rights",
    "FundingReference",
    "RelatedItem",
];

static DOI: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^10\.\d{4,9}/\S+$").unwrap());
static HANDLE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\d+(\.\d+)*/\S+$").unwrap());

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Identifier {
    Doi(String),
    Handle(String),
    Url(String),
}

impl Identifier {
    pub fn kind(&self) -> &'static str {
        match self {
            Identifier::Doi(_) => "doi",
            Identifier::Handle(_) => "handle",
            Identifier::Url(_) => "url",
        }
    }

    pub fn value(&self) -> &str {
        match self {
            Identifier::Doi(s) | Identifier::Handle(s) | Identifier::Url(s) => s,
        }
    }
}

impl fmt::Display for Identifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Identifier::Doi(d) => write!(f, "doi:{d}"),
            Identifier::Handle(h) => write!(f, "hdl:{h}"),
            Identifier::Url(u) => f.write_str(u),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot classify `{0}` as a DOI, handle or URL")]
pub struct UnclassifiableIdentifier(pub String);

/// Classifies a DOI, handle or URL. Resolver URLs for DOIs and handles are
/// recognised as such rather than as plain URLs.
pub fn classify_identifier(input: &str) -> Result<Identifier, UnclassifiableIdentifier> {
    let s = input.trim();
    let lower = s.to_lowercase();
    for prefix in [
        "doi:",
        "https://doi.org/",
        "http://doi.org/",
        "https://dx.doi.org/",
        "http://dx.doi.org/",
    ] {
        if lower.starts_with(prefix) {
            let rest = &s[prefix.len()..];
            return if DOI.is_match(rest) {
                Ok(Identifier::Doi(rest.to_lowercase()))
            } else {
                Err(UnclassifiableIdentifier(input.to_string()))
            };
        }
    }
    for prefix in ["hdl:", "https://hdl.handle.net/", "http://hdl.handle.net/"] {
        if lower.starts_with(prefix) {
            let rest = &s[prefix.len()..];
            return if HANDLE.is_match(rest) {
                Ok(Identifier::Handle(rest.to_string()))
            } else {
                Err(UnclassifiableIdentifier(input.to_string()))
            };
        }
    }
    if DOI.is_match(s) {
        return Ok(Identifier::Doi(s.to_lowercase()));
    }
    if HANDLE.is_match(s) {
        return Ok(Identifier::Handle(s.to_string()));
    }
    if (lower.starts_with("https://") || lower.starts_with("http://")) && s.len() > lower.find("://").unwrap() + 3 {
        return Ok(Identifier::Url(s.to_string()));
    }
    Err(UnclassifiableIdentifier(input.to_string()))
}

fn nonempty(v: Option<&Value>) -> bool {
    match v {
        None | Some(Value::Null) => false,
        Some(Value::String(s)) => !s.trim().is_empty(),
        Some(Value::Array(a)) => a.iter().any(|x| nonempty(Some(x))),
        Some(Value::Object(o)) => o.values().any(|x| nonempty(Some(x))),
        Some(_) => true,
    }
}

fn array<'a>(attrs: &'a Value, key: &str) -> &'a [Value] {
    attrs.get(key).and_then(Value::as_array).map_or(&[], Vec::as_slice)
}

fn str_field<'a>(v: &'a Value, key: &str) -> Option<&'a str> {
    v.get(key).and_then(Value::as_str).filter(|s| !s.trim().is_empty())
}

const EU_REPO_ACCESS: &str = "info:eu-repo/semantics/";

const OPEN_FORMAT_HINTS: &[&str] = &[
    "csv", "json", "xml", "text/plain", "txt", "netcdf", "application/x-netcdf", "nc", "hdf5",
    "h5", "tiff", "geotiff", "png", "jpeg", "parquet", "zarr", "yaml", "pdf", "ods", "odt",
    "fits", "geojson", "gpkg", "las", "laz", "zip", "tar", "gzip", "markdown", "html", "rdf",
    "turtle", "grib", "sql", "mseed", "miniseed", "sac",
];

pub fn is_open_format(format: &str) -> bool {
    let lower = format.to_lowercase();
    let open = lower
        .split(|c: char| !(c.is_ascii_alphanumeric() || c == '-' || c == '/'))
        .flat_map(|t| [t, t.rsplit('/').next().unwrap_or(t)])
        .any(|t| OPEN_FORMAT_HINTS.contains(&t) || t.ends_with("+xml") || t.ends_with("+json"));
    open
}

fn is_open_license(uri_or_id: &str) -> bool {
    let l = uri_or_id.to_lowercase();
    l.contains("creativecommons.org")
        || l.starts_with("cc-by")
        || l.starts_with("cc0")
        || l.contains("opendatacommons.org")
        || l.starts_with("odc-")
        || l.starts_with("pddl")
        || super::licenses::OSI_APPROVED
            .iter()
            .any(|id| id.to_lowercase() == l)
}

/// Facts derived from a DataCite REST API `dois/<doi>` document.
pub fn datacite_facts(doc: &Value, rec: &mut Recorder<'_>, source: &str) {
    let attrs = &doc["data"]["attributes"];
    let mandatory = [
        nonempty(attrs.get("doi")),
        array(attrs, "creators").iter().any(|c| nonempty(c.get("name"))),
        array(attrs, "titles").iter().any(|t| nonempty(t.get("title"))),
        nonempty(attrs.get("publisher")),
        nonempty(attrs.get("publicationYear")),
        nonempty(attrs.get("types").and_then(|t| t.get("resourceTypeGeneral"))),
    ];
    rec.put("datacite_mandatory_complete", mandatory.iter().all(|b| *b), source);
    let recommended = ["subjects", "contributors", "dates", "relatedIdentifiers", "descriptions", "geoLocations"];
    rec.put(
        "datacite_recommended_complete",
        recommended.iter().all(|k| nonempty(attrs.get(*k))),
        source,
    );
    let alternate = nonempty(attrs.get("alternateIdentifiers"))
        || array(attrs, "identifiers")
            .iter()
            .any(|i| str_field(i, "identifierType").is_some_and(|t| !t.eq_ignore_ascii_case("doi")));
    let optional = [
        nonempty(attrs.get("language")),
        alternate,
        nonempty(attrs.get("sizes")),
        nonempty(attrs.get("formats")),
        nonempty(attrs.get("version")),
        nonempty(attrs.get("rightsList")),
        nonempty(attrs.get("fundingReferences")),
        nonempty(attrs.get("relatedItems")),
    ];
    rec.put(
        "datacite_optional_count",
        optional.iter().filter(|b| **b).count(),
        source,
    );

    let rights = array(attrs, "rightsList");
    let access_terms: Vec<String> = rights
        .iter()
        .filter_map(|r| str_field(r, "rightsUri"))
        .filter(|u| u.starts_with(EU_REPO_ACCESS))
        .map(|u| u[EU_REPO_ACCESS.len()..].to_string())
        .collect();
    let license = rights.iter().any(|r| {
        str_field(r, "rightsIdentifier").is_some()
            || str_field(r, "rightsUri").is_some_and(|u| !u.starts_with(EU_REPO_ACCESS))
    });
    let open = access_terms.iter().any(|t| t == "openAccess")
        || rights.iter().any(|r| {
            str_field(r, "rightsIdentifier").is_some_and(is_open_license)
                || str_field(r, "rightsUri").is_some_and(is_open_license)
        });
    rec.put("rights_declared", !rights.is_empty(), source);
    rec.put("license_in_metadata", license, source);
    rec.put("open_access", open, source);
    rec.put("access_info_human_readable", nonempty(attrs.get("url")), source);
    rec.put(
        "access_info_machine_readable",
        nonempty(attrs.get("contentUrl")) || !access_terms.is_empty(),
        source,
    );

    let formats: Vec<String> = array(attrs, "formats")
        .iter()
        .filter_map(Value::as_str)
        .map(str::to_string)
        .collect();
    rec.put(
        "data_files_declared",
        nonempty(attrs.get("contentUrl")) || nonempty(attrs.get("sizes")) || !formats.is_empty(),
        source,
    );
    rec.put(
        "formats_open",
        !formats.is_empty() && formats.iter().all(|f| is_open_format(f)),
        source,
    );
    rec.put("formats", formats, source);
    let abstract_or_subject = nonempty(attrs.get("subjects"))
        || array(attrs, "descriptions").iter().any(|d| nonempty(d.get("description")));
    rec.put("content_metadata_some", abstract_or_subject, source);

    let publisher = match attrs.get("publisher") {
        Some(Value::String(s)) => Some(s.clone()),
        Some(Value::Object(o)) => o.get("name").and_then(Value::as_str).map(str::to_string),
        _ => None,
    }
    .filter(|s| !s.trim().is_empty());
    let client = doc
        .get("included")
        .and_then(Value::as_array)
        .and_then(|inc| inc.iter().find(|i| i["type"] == "clients"));
    rec.put("repository_known", publisher.is_some() || client.is_some(), source);
    if let Some(p) = &publisher {
        rec.put("publisher", p.as_str(), source);
    }
    let client_attrs = client.map(|c| &c["attributes"]);
    let locator = client_attrs
        .and_then(|a| str_field(a, "re3data"))
        .or_else(|| client_attrs.and_then(|a| str_field(a, "url")))
        .map(str::to_string)
        .or(publisher);
    if let Some(l) = locator {
        rec.put("repository_registry_locator", l, source);
    }
}

fn record_failure(set: &mut EvidenceSet, collector: &str, err: &FetchError) {
    set.fail(collector, err.reason(), err.is_network());
}

/// Resolves `id` and, for DOIs, harvests its DataCite record. Network
/// failures leave the affected facts absent and add a failure entry.
pub fn fetch_pid_metadata(
    id: &Identifier,
    fetcher: &Fetcher,
    endpoints: &Endpoints,
    retrieved_at: &str,
) -> EvidenceSet {
    let mut set = EvidenceSet::new(id.to_string());
    {
        let mut rec = Recorder {
            set: &mut set,
            collector: COLLECTOR_HANDLE,
            retrieved_at: retrieved_at.to_string(),
        };
        rec.put("identifier_kind", id.kind(), "input");
    }
    if let Identifier::Url(_) = id {
        return set;
    }

    let url = format!("{}/api/handles/{}", endpoints.handle, id.value());
    match fetcher.get(&url, "application/json") {
        Ok(resp) => {
            let code = serde_json::from_str::<Value>(&resp.body)
                .ok()
                .and_then(|v| v.get("responseCode").and_then(Value::as_i64));
            let resolves = match (resp.status, code) {
                (200, Some(1)) => Some(true),
                (404, _) | (_, Some(100)) | (_, Some(200)) => Some(false),
                _ => None,
            };
            match resolves {
                Some(r) => Recorder {
                    set: &mut set,
                    collector: COLLECTOR_HANDLE,
                    retrieved_at: retrieved_at.to_string(),
                }
                .put("resolves_globally", r, &url),
                None => set.fail(COLLECTOR_HANDLE, format!("unexpected response {} from {url}", resp.status), true),
            }
        }
        Err(e) => record_failure(&mut set, COLLECTOR_HANDLE, &e),
    }

    let Identifier::Doi(doi) = id else {
        return set;
    };
    let url = format!("{}/dois/{}?include=client", endpoints.datacite, doi);
    match fetcher.get(&url, "application/vnd.api+json") {
        Ok(resp) => {
            let mut rec = Recorder {
                set: &mut set,
                collector: COLLECTOR_DATACITE,
                retrieved_at: retrieved_at.to_string(),
            };
            match resp.status {
                200 => match serde_json::from_str::<Value>(&resp.body) {
                    Ok(doc) => {
                        rec.put("metadata_record_present", true, &url);
                        datacite_facts(&doc, &mut rec, &url);
                    }
                    Err(e) => set.fail(COLLECTOR_DATACITE, format!("malformed record from {url}: {e}"), true),
                },
                404 => rec.put("metadata_record_present", false, &url),
                s => set.fail(COLLECTOR_DATACITE, format!("unexpected response {s} from {url}"), true),
            }
        }
        Err(e) => record_failure(&mut set, COLLECTOR_DATACITE, &e),
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        assert_eq!(classify_identifier("10.5880/GFZ.1.2.2020.001").unwrap(), Identifier::Doi("10.5880/gfz.1.2.2020.001".into()));
        assert_eq!(classify_identifier("https://doi.org/10.1234/abc").unwrap().kind(), "doi");
        assert_eq!(classify_identifier("doi:10.1234/abc").unwrap().kind(), "doi");
        assert_eq!(classify_identifier("hdl:21.11101/0000-0007-C5B4-7").unwrap().kind(), "handle");
        assert_eq!(classify_identifier("https://hdl.handle.net/2128/1234").unwrap().kind(), "handle");
        assert_eq!(classify_identifier("https://example.org/data").unwrap().kind(), "url");
        assert!(classify_identifier("not an id").is_err());
        assert!(classify_identifier("https://doi.org/garbage").is_err());
    }

    #[test]
    fn plain_url_yields_only_the_kind() {
        let f = Fetcher::offline(None);
        let set = fetch_pid_metadata(
            &Identifier::Url("https://example.org".into()),
            &f,
            &Endpoints::default(),
            "t",
        );
        assert_eq!(set.facts.len(), 1);
        assert_eq!(set.value("identifier_kind").unwrap().as_text(), Some("url"));
        assert!(set.value("datacite_mandatory_complete").is_none());
        assert!(set.failures.is_empty());
    }

    #[test]
    fn offline_without_cache_records_non_network_failures() {
        let f = Fetcher::offline(None);
        let set = fetch_pid_metadata(&Identifier::Doi("10.1234/x".into()), &f, &Endpoints::default(), "t");
        assert_eq!(set.failures.len(), 2);
        assert!(!set.has_network_failures());
        assert!(set.value("resolves_globally").is_none());
    }

    #[test]
    fn open_formats() {
        assert!(is_open_format("text/csv"));
        assert!(is_open_format("NetCDF"));
        assert!(is_open_format("application/ld+json"));
        assert!(!is_open_format("application/vnd.ms-excel"));
        assert!(!is_open_format("MATLAB .mat"));
    }
}
