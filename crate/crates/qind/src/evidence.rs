//! Provenance-tagged facts harvested about one target.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FactValue {
    Bool(bool),
    Number(f64),
    Text(String),
    List(Vec<String>),
}

impl FactValue {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            FactValue::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            FactValue::Number(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            FactValue::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[String]> {
        match self {
            FactValue::List(l) => Some(l),
            _ => None,
        }
    }
}

impl From<bool> for FactValue {
    fn from(b: bool) -> Self {
        FactValue::Bool(b)
    }
}

impl From<f64> for FactValue {
    fn from(n: f64) -> Self {
        FactValue::Number(n)
    }
}

impl From<usize> for FactValue {
    fn from(n: usize) -> Self {
        FactValue::Number(n as f64)
    }
}

impl From<&str> for FactValue {
    fn from(s: &str) -> Self {
        FactValue::Text(s.to_string())
    }
}

impl From<String> for FactValue {
    fn from(s: String) -> Self {
        FactValue::Text(s)
    }
}

impl From<Vec<String>> for FactValue {
    fn from(l: Vec<String>) -> Self {
        FactValue::List(l)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub collector: String,
    /// File path, URL or other locator the fact was read from.
    pub source: String,
    pub retrieved_at: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fact {
    pub value: FactValue,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectorFailure {
    pub collector: String,
    pub reason: String,
    /// Set when the failure came from a real network attempt rather than a
    /// deliberate offline skip.
    #[serde(default)]
    pub network: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("fact `{id}` reported by both `{first}` and `{second}`")]
pub struct FactCollision {
    pub id: String,
    pub first: String,
    pub second: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EvidenceSet {
    pub target: String,
    pub facts: BTreeMap<String, Fact>,
    #[serde(default)]
    pub failures: Vec<CollectorFailure>,
}

impl EvidenceSet {
    pub fn new(target: impl Into<String>) -> Self {
        EvidenceSet {
            target: target.into(),
            ..EvidenceSet::default()
        }
    }

    pub fn get(&self, id: &str) -> Option<&Fact> {
        self.facts.get(id)
    }

    pub fn value(&self, id: &str) -> Option<&FactValue> {
        self.facts.get(id).map(|f| &f.value)
    }

    pub fn insert(
        &mut self,
        id: &str,
        value: impl Into<FactValue>,
        provenance: Provenance,
    ) -> Result<(), FactCollision> {
        if let Some(existing) = self.facts.get(id) {
            return Err(FactCollision {
                id: id.to_string(),
                first: existing.provenance.collector.clone(),
                second: provenance.collector,
            });
        }
        self.facts.insert(
            id.to_string(),
            Fact {
                value: value.into(),
                provenance,
            },
        );
        Ok(())
    }

    pub fn fail(&mut self, collector: &str, reason: impl Into<String>, network: bool) {
        self.failures.push(CollectorFailure {
            collector: collector.to_string(),
            reason: reason.into(),
            network,
        });
    }

    /// Merges `other` into `self`. Fact ids must not overlap.
    pub fn merge(&mut self, other: EvidenceSet) -> Result<(), FactCollision> {
        for (id, fact) in &other.facts {
            if let Some(existing) = self.facts.get(id) {
                return Err(FactCollision {
                    id: id.clone(),
                    first: existing.provenance.collector.clone(),
                    second: fact.provenance.collector.clone(),
                });
            }
        }
        self.facts.extend(other.facts);
        self.failures.extend(other.failures);
        Ok(())
    }

    pub fn has_network_failures(&self) -> bool {
        self.failures.iter().any(|f| f.network)
    }
}

/// Helper that stamps every fact a collector records with the same
/// collector id and retrieval time.
pub struct Recorder<'a> {
    pub set: &'a mut EvidenceSet,
    pub collector: &'static str,
    pub retrieved_at: String,
}

impl Recorder<'_> {
    pub fn put(&mut self, id: &str, value: impl Into<FactValue>, source: &str) {
        let provenance = Provenance {
            collector: self.collector.to_string(),
            source: source.to_string(),
            retrieved_at: self.retrieved_at.clone(),
        };
        // A single collector never records the same id twice.
        self.set
            .insert(id, value, provenance)
            .expect("collector recorded a fact twice");
    }
}
